//! Exact linear algebra: dense matrices for small operators, an incremental
//! sparse Gaussian eliminator for large constraint systems, solution spaces
//! of matrix equations, and quotient spaces with projection/section maps.

use crate::scalar::{FieldDesc, Scalar};
use crate::tensor::Tensor;
use std::collections::BTreeMap;

/// Dense matrix, row-major. Columns index the input basis, rows the output
/// basis, so composition of linear maps is matrix multiplication.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub field: FieldDesc,
    pub rows: usize,
    pub cols: usize,
    data: Vec<Scalar>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).serialize()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(field: FieldDesc, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![Scalar::zero(field); rows * cols] }
    }

    pub fn identity(field: FieldDesc, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one(field));
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert_eq!(v.field(), self.field);
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        let cur = self.get(r, c).add(v);
        self.set(r, c, cur);
    }

    pub fn from_fn(field: FieldDesc, rows: usize, cols: usize, f: impl Fn(usize, usize) -> Scalar) -> Mat {
        let mut m = Mat::zeros(field, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Rank-2 tensor with shape [rows, cols] holding the same entries.
    pub fn to_tensor(&self) -> Tensor {
        let mut t = Tensor::zeros(self.field, vec![self.rows, self.cols]);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self.get(i, j);
                if !v.is_zero() {
                    t.set(&[i, j], v.clone());
                }
            }
        }
        t
    }

    pub fn from_tensor(t: &Tensor) -> Mat {
        assert_eq!(t.shape.len(), 2, "matrix requires a rank-2 tensor");
        let mut m = Mat::zeros(t.field, t.shape[0], t.shape[1]);
        for (idx, v) in t.iter() {
            m.set(idx[0], idx[1], v.clone());
        }
        m
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        assert_eq!(self.field, other.field);
        let mut out = Mat::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    out.add_at(i, j, &a.mul(b));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).add(other.get(i, j)))
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).sub(other.get(i, j)))
    }

    pub fn scale(&self, c: &Scalar) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).mul(c))
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Kronecker product with row-major index pairing:
    /// (A (x) B)[(i1, i2)][(j1, j2)] = A[i1][j1] B[i2][j2].
    pub fn tensor_with(&self, other: &Mat) -> Mat {
        let mut out = Mat::zeros(
            self.field,
            self.rows * other.rows,
            self.cols * other.cols,
        );
        for i1 in 0..self.rows {
            for j1 in 0..self.cols {
                let a = self.get(i1, j1);
                if a.is_zero() {
                    continue;
                }
                for i2 in 0..other.rows {
                    for j2 in 0..other.cols {
                        let b = other.get(i2, j2);
                        if b.is_zero() {
                            continue;
                        }
                        out.set(i1 * other.rows + i2, j1 * other.cols + j2, a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![Scalar::zero(self.field); self.rows];
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() || v[j].is_zero() {
                    continue;
                }
                out[i] = out[i].add(&a.mul(&v[j]));
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut el = Eliminator::new(self.field, self.cols, false);
        for i in 0..self.rows {
            let row: BTreeMap<usize, Scalar> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            el.add_row(row, None);
        }
        el.rank()
    }

    /// Basis of the right null space { v : M v = 0 }.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut el = Eliminator::new(self.field, self.cols, false);
        for i in 0..self.rows {
            let row: BTreeMap<usize, Scalar> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            el.add_row(row, None);
        }
        el.kernel_basis()
    }

    /// Gauss-Jordan inverse; None when singular.
    pub fn inverse(&self) -> Option<Mat> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Mat::identity(self.field, n);
        for col in 0..n {
            // find pivot
            let mut piv = None;
            for r in col..n {
                if !a.get(r, col).is_zero() {
                    piv = Some(r);
                    break;
                }
            }
            let piv = piv?;
            if piv != col {
                for j in 0..n {
                    let t1 = a.get(col, j).clone();
                    let t2 = a.get(piv, j).clone();
                    a.set(col, j, t2);
                    a.set(piv, j, t1);
                    let t1 = inv.get(col, j).clone();
                    let t2 = inv.get(piv, j).clone();
                    inv.set(col, j, t2);
                    inv.set(piv, j, t1);
                }
            }
            let d = a.get(col, col).inv().unwrap();
            for j in 0..n {
                let v = a.get(col, j).mul(&d);
                a.set(col, j, v);
                let v = inv.get(col, j).mul(&d);
                inv.set(col, j, v);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let v = a.get(r, j).sub(&f.mul(a.get(col, j)));
                    a.set(r, j, v);
                    let v = inv.get(r, j).sub(&f.mul(inv.get(col, j)));
                    inv.set(r, j, v);
                }
            }
        }
        Some(inv)
    }

    /// One solution of M x = b, if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let mut el = Eliminator::new(self.field, self.cols, true);
        for i in 0..self.rows {
            let row: BTreeMap<usize, Scalar> = (0..self.cols)
                .filter(|&j| !self.get(i, j).is_zero())
                .map(|j| (j, self.get(i, j).clone()))
                .collect();
            el.add_row(row, Some(b[i].clone()));
        }
        el.particular_solution()
    }
}

/// Incremental sparse Gaussian elimination over an exact field.
///
/// Rows are reduced against the current echelon basis as they arrive; an
/// optional right-hand-side column supports affine systems. Pivot choice is
/// deterministic (lowest column), so all downstream bases are reproducible.
pub struct Eliminator {
    field: FieldDesc,
    ncols: usize,
    with_rhs: bool,
    /// leading column -> normalized row (entries only at cols >= leading; the
    /// RHS lives at virtual column `ncols`)
    pivots: BTreeMap<usize, BTreeMap<usize, Scalar>>,
    inconsistent: bool,
}

impl Eliminator {
    pub fn new(field: FieldDesc, ncols: usize, with_rhs: bool) -> Eliminator {
        Eliminator { field, ncols, with_rhs, pivots: BTreeMap::new(), inconsistent: false }
    }

    /// Reduce `row` against the pivot rows in place.
    fn reduce(&self, row: &mut BTreeMap<usize, Scalar>) {
        loop {
            let hit = row
                .iter()
                .find(|(c, _)| **c < self.ncols && self.pivots.contains_key(c))
                .map(|(c, v)| (*c, v.clone()));
            match hit {
                None => break,
                Some((c, coef)) => {
                    let prow = &self.pivots[&c];
                    for (j, pv) in prow {
                        let delta = coef.mul(pv);
                        match row.get_mut(j) {
                            Some(cur) => {
                                let s = cur.sub(&delta);
                                if s.is_zero() {
                                    row.remove(j);
                                } else {
                                    *cur = s;
                                }
                            }
                            None => {
                                row.insert(*j, delta.neg());
                            }
                        }
                    }
                }
            }
        }
    }

    /// Add one equation; returns true when it increased the rank.
    /// With RHS enabled, `rhs` is the equation's right-hand side.
    pub fn add_row(&mut self, mut row: BTreeMap<usize, Scalar>, rhs: Option<Scalar>) -> bool {
        row.retain(|_, v| !v.is_zero());
        if let Some(r) = rhs {
            assert!(self.with_rhs);
            if !r.is_zero() {
                row.insert(self.ncols, r);
            }
        }
        self.reduce(&mut row);
        // after reduction the leading column is either a fresh pivot or the RHS
        let lead = match row.keys().next() {
            None => return false,
            Some(&c) => c,
        };
        if lead == self.ncols {
            // 0 = nonzero
            self.inconsistent = true;
            return false;
        }
        let inv = row[&lead].inv().unwrap();
        let norm: BTreeMap<usize, Scalar> = row.iter().map(|(j, v)| (*j, v.mul(&inv))).collect();
        self.pivots.insert(lead, norm);
        true
    }

    pub fn add_dense_row(&mut self, row: &[Scalar], rhs: Option<Scalar>) -> bool {
        let sparse: BTreeMap<usize, Scalar> = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(j, v)| (j, v.clone()))
            .collect();
        self.add_row(sparse, rhs)
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_inconsistent(&self) -> bool {
        self.inconsistent
    }

    /// Whether `row` lies in the row span (ignores RHS machinery).
    pub fn contains(&self, row: &BTreeMap<usize, Scalar>) -> bool {
        let mut r = row.clone();
        r.retain(|_, v| !v.is_zero());
        self.reduce(&mut r);
        r.is_empty()
    }

    /// Back-eliminate so each pivot column appears in exactly one row.
    fn make_rref(&mut self) {
        let cols: Vec<usize> = self.pivots.keys().cloned().collect();
        for &c in cols.iter().rev() {
            let prow = self.pivots[&c].clone();
            let others: Vec<usize> = cols.iter().filter(|&&o| o < c).cloned().collect();
            for o in others {
                let coef = match self.pivots[&o].get(&c) {
                    Some(v) => v.clone(),
                    None => continue,
                };
                let orow = self.pivots.get_mut(&o).unwrap();
                for (j, pv) in &prow {
                    let delta = coef.mul(pv);
                    match orow.get_mut(j) {
                        Some(cur) => {
                            let s = cur.sub(&delta);
                            if s.is_zero() {
                                orow.remove(j);
                            } else {
                                *cur = s;
                            }
                        }
                        None => {
                            orow.insert(*j, delta.neg());
                        }
                    }
                }
            }
        }
    }

    /// Basis of the solution space of the homogeneous system, one vector per
    /// free column, in ascending free-column order.
    pub fn kernel_basis(&mut self) -> Vec<Vec<Scalar>> {
        self.make_rref();
        let mut out = Vec::new();
        for f in 0..self.ncols {
            if self.pivots.contains_key(&f) {
                continue;
            }
            let mut v = vec![Scalar::zero(self.field); self.ncols];
            v[f] = Scalar::one(self.field);
            for (&c, row) in &self.pivots {
                if let Some(coef) = row.get(&f) {
                    v[c] = coef.neg();
                }
            }
            out.push(v);
        }
        out
    }

    /// Particular solution with all free variables zero; None if inconsistent.
    pub fn particular_solution(&mut self) -> Option<Vec<Scalar>> {
        assert!(self.with_rhs);
        if self.inconsistent {
            return None;
        }
        self.make_rref();
        let mut v = vec![Scalar::zero(self.field); self.ncols];
        for (&c, row) in &self.pivots {
            if let Some(r) = row.get(&self.ncols) {
                v[c] = r.clone();
            }
        }
        Some(v)
    }
}

/// One constraint `sum_t L_t * F * R_t = RHS` on an unknown linear map F.
pub struct MapConstraint {
    pub terms: Vec<(Mat, Mat)>,
    pub rhs: Mat,
}

impl MapConstraint {
    /// Homogeneous constraint `L F = F R` (an intertwining condition).
    pub fn intertwine(l: Mat, r: Mat, field: FieldDesc, out_dim: usize, in_dim: usize) -> MapConstraint {
        let lrows = l.rows;
        let rcols = r.cols;
        MapConstraint {
            terms: vec![
                (l, Mat::identity(field, in_dim)),
                (Mat::identity(field, out_dim).scale(&Scalar::one(field).neg()), r),
            ],
            rhs: Mat::zeros(field, lrows, rcols),
        }
    }
}

pub struct MapSolution {
    /// Basis of the homogeneous solution space.
    pub basis: Vec<Mat>,
    /// A particular solution; None when the constraints are inconsistent.
    pub particular: Option<Mat>,
}

/// Solve for all F (out_dim x in_dim matrices) satisfying every constraint.
/// Unknowns are vectorized row-major: v[i*in_dim + j] = F[i][j].
pub fn solve_map_space(
    field: FieldDesc,
    out_dim: usize,
    in_dim: usize,
    constraints: &[MapConstraint],
) -> MapSolution {
    let nunk = out_dim * in_dim;
    let mut el = Eliminator::new(field, nunk, true);
    for con in constraints {
        let (crows, ccols) = {
            let r = &con.rhs;
            (r.rows, r.cols)
        };
        for (l, r) in &con.terms {
            assert_eq!(l.cols, out_dim, "left factor must accept the unknown's output space");
            assert_eq!(r.rows, in_dim, "right factor must feed the unknown's input space");
            assert_eq!(l.rows, crows);
            assert_eq!(r.cols, ccols);
        }
        for p in 0..crows {
            for q in 0..ccols {
                let mut row: BTreeMap<usize, Scalar> = BTreeMap::new();
                for (l, r) in &con.terms {
                    for i in 0..out_dim {
                        let lv = l.get(p, i);
                        if lv.is_zero() {
                            continue;
                        }
                        for j in 0..in_dim {
                            let rv = r.get(j, q);
                            if rv.is_zero() {
                                continue;
                            }
                            let c = lv.mul(rv);
                            let k = i * in_dim + j;
                            match row.get_mut(&k) {
                                Some(cur) => {
                                    let s = cur.add(&c);
                                    if s.is_zero() {
                                        row.remove(&k);
                                    } else {
                                        *cur = s;
                                    }
                                }
                                None => {
                                    row.insert(k, c);
                                }
                            }
                        }
                    }
                }
                el.add_row(row, Some(con.rhs.get(p, q).clone()));
            }
        }
    }
    let devec = |v: &[Scalar]| {
        let mut m = Mat::zeros(field, out_dim, in_dim);
        for i in 0..out_dim {
            for j in 0..in_dim {
                m.set(i, j, v[i * in_dim + j].clone());
            }
        }
        m
    };
    let particular = el.particular_solution().map(|v| devec(&v));
    let basis = el.kernel_basis().iter().map(|v| devec(v)).collect();
    MapSolution { basis, particular }
}

/// Quotient of k^ambient by the span of `spanning`, with an explicit
/// projection and a section satisfying projection . section = identity.
pub struct Quotient {
    pub field: FieldDesc,
    pub ambient: usize,
    pub dim: usize,
    /// columns of the ambient space that survive as class representatives
    free_cols: Vec<usize>,
    /// RREF rows of the subspace, keyed by pivot column
    rows: BTreeMap<usize, BTreeMap<usize, Scalar>>,
}

impl Quotient {
    pub fn new(field: FieldDesc, ambient: usize, spanning: &[Vec<Scalar>]) -> Quotient {
        let mut el = Eliminator::new(field, ambient, false);
        for v in spanning {
            assert_eq!(v.len(), ambient);
            el.add_dense_row(v, None);
        }
        el.make_rref();
        let rank = el.rank();
        let free_cols: Vec<usize> = (0..ambient).filter(|c| !el.pivots.contains_key(c)).collect();
        Quotient { field, ambient, dim: ambient - rank, free_cols, rows: el.pivots }
    }

    /// Like `new`, but takes sparse spanning rows directly.
    pub fn new_sparse(field: FieldDesc, ambient: usize, spanning: Vec<BTreeMap<usize, Scalar>>) -> Quotient {
        let mut el = Eliminator::new(field, ambient, false);
        for row in spanning {
            el.add_row(row, None);
        }
        el.make_rref();
        let rank = el.rank();
        let free_cols: Vec<usize> = (0..ambient).filter(|c| !el.pivots.contains_key(c)).collect();
        Quotient { field, ambient, dim: ambient - rank, free_cols, rows: el.pivots }
    }

    pub fn subspace_rank(&self) -> usize {
        self.ambient - self.dim
    }

    /// Coordinates of the class of `v` in the representative basis.
    pub fn project(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let w: BTreeMap<usize, Scalar> = v
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(|(i, x)| (i, x.clone()))
            .collect();
        self.project_sparse(&w)
    }

    /// Sparse-input projection. Fully reduced rows touch only their own pivot
    /// column and free columns, so the class of a pivot basis vector e_c reads
    /// off one row and the class of a free basis vector is a class basis
    /// vector; one pass over the input suffices.
    pub fn project_sparse(&self, w: &BTreeMap<usize, Scalar>) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(self.field); self.dim];
        for (c, x) in w {
            if x.is_zero() {
                continue;
            }
            match self.rows.get(c) {
                Some(row) => {
                    for (j, pv) in row {
                        if j == c {
                            continue;
                        }
                        let k = self
                            .free_cols
                            .binary_search(j)
                            .expect("reduced row entries lie in free columns");
                        out[k] = out[k].sub(&x.mul(pv));
                    }
                }
                None => {
                    let k = self.free_cols.binary_search(c).unwrap();
                    out[k] = out[k].add(x);
                }
            }
        }
        out
    }

    /// Ambient column index of the k-th class representative.
    pub fn free_col(&self, k: usize) -> usize {
        self.free_cols[k]
    }

    /// Ambient representative of the k-th class basis vector.
    pub fn section(&self, k: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(self.field); self.ambient];
        v[self.free_cols[k]] = Scalar::one(self.field);
        v
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.project(v).iter().all(|c| c.is_zero())
    }

    pub fn contains_sparse(&self, w: &BTreeMap<usize, Scalar>) -> bool {
        self.project_sparse(w).iter().all(|c| c.is_zero())
    }

    /// Dense projection matrix (dim x ambient); for small quotients only.
    pub fn projection_mat(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.dim, self.ambient);
        for j in 0..self.ambient {
            let mut e = vec![Scalar::zero(self.field); self.ambient];
            e[j] = Scalar::one(self.field);
            let p = self.project(&e);
            for i in 0..self.dim {
                if !p[i].is_zero() {
                    m.set(i, j, p[i].clone());
                }
            }
        }
        m
    }

    /// Dense section matrix (ambient x dim).
    pub fn section_mat(&self) -> Mat {
        let mut m = Mat::zeros(self.field, self.ambient, self.dim);
        for k in 0..self.dim {
            let s = self.section(k);
            for i in 0..self.ambient {
                if !s[i].is_zero() {
                    m.set(i, k, s[i].clone());
                }
            }
        }
        m
    }
}
