//! Finite-dimensional Hopf algebra data with quasitriangular and ribbon
//! structure, axiom checkers that report named laws with witness basis
//! tuples, dualization, convolution inverses, and the double construction.
//!
//! Index conventions (used across the whole crate):
//! - `mult` has shape [dim, dim, dim]; entry (i, j, k) is the coefficient of
//!   e_k in e_i * e_j (inputs first, output last);
//! - `comult` has shape [dim, dim, dim]; entry (i, j, k) is the coefficient
//!   of e_j (x) e_k in Delta(e_i);
//! - linear maps are matrices with M[out][in], so composition is `Mat::mul`;
//! - elements of U^(x)n are rank-n tensors with every axis of length dim.

use crate::linalg::{solve_map_space, Mat, MapConstraint};
use crate::scalar::{FieldDesc, Scalar};
use crate::tensor::Tensor;

#[derive(Clone)]
pub struct Hopf {
    pub name: String,
    pub field: FieldDesc,
    pub dim: usize,
    pub basis: Vec<String>,
    pub unit: Vec<Scalar>,
    pub counit: Vec<Scalar>,
    pub mult: Tensor,
    pub comult: Tensor,
    pub antipode: Mat,
    pub rmatrix: Option<Tensor>,
    pub ribbon: Option<Vec<Scalar>>,
}

/// Default basis labels e0..e{n-1}.
pub fn default_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("e{}", i)).collect()
}

/// A single failed law instance: which law, at which basis tuple, and what
/// mismatched.
#[derive(Clone, Debug)]
pub struct Witness {
    pub law: String,
    pub at: String,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub passed: bool,
    pub failures: Vec<Witness>,
}

impl CheckReport {
    pub fn new(name: &str) -> CheckReport {
        CheckReport { name: name.to_string(), passed: true, failures: vec![] }
    }

    pub fn fail(&mut self, law: &str, at: String, detail: String) {
        self.passed = false;
        self.failures.push(Witness { law: law.to_string(), at, detail });
    }

    /// Record every nonzero entry of `diff` as a witness for `law`, naming
    /// the first `in_axes` axes as the basis tuple.
    pub fn expect_zero(&mut self, law: &str, diff: &Tensor, in_axes: usize) {
        use std::collections::BTreeSet;
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        for (idx, v) in diff.iter() {
            let key: Vec<usize> = idx[..in_axes.min(idx.len())].to_vec();
            if seen.insert(key.clone()) {
                self.fail(
                    law,
                    format!("{:?}", key),
                    format!("output component {:?} differs by {}", &idx[in_axes.min(idx.len())..], v.serialize()),
                );
            }
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        if !other.passed {
            self.passed = false;
            self.failures.extend(other.failures);
        }
    }
}

impl Hopf {
    pub fn zero_vec(&self) -> Vec<Scalar> {
        vec![Scalar::zero(self.field); self.dim]
    }

    /// Product of two elements given by coordinate vectors.
    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ta = Tensor::from_vec(self.field, a);
        let tb = Tensor::from_vec(self.field, b);
        let m = ta.contract(&self.mult, &[(0, 0)]); // [j, k]
        let r = tb.contract(&m, &[(0, 0)]); // [k]
        r.to_vec()
    }

    /// Delta of an element, as a [dim, dim] tensor.
    pub fn comult_vec(&self, a: &[Scalar]) -> Tensor {
        let ta = Tensor::from_vec(self.field, a);
        ta.contract(&self.comult, &[(0, 0)])
    }

    pub fn counit_of(&self, a: &[Scalar]) -> Scalar {
        let mut s = Scalar::zero(self.field);
        for (i, c) in a.iter().enumerate() {
            s = s.add(&c.mul(&self.counit[i]));
        }
        s
    }

    pub fn antipode_vec(&self, a: &[Scalar]) -> Vec<Scalar> {
        self.antipode.apply(a)
    }

    /// Matrix of left multiplication by the element `a`.
    pub fn left_mult_mat(&self, a: &[Scalar]) -> Mat {
        // (a * e_j)_k = sum_i a_i mult[i,j,k]
        let ta = Tensor::from_vec(self.field, a);
        let m = ta.contract(&self.mult, &[(0, 0)]); // [j, k]
        Mat::from_tensor(&m).transpose() // M[k][j]
    }

    pub fn right_mult_mat(&self, a: &[Scalar]) -> Mat {
        // (e_i * a)_k = sum_j a_j mult[i,j,k]
        let ta = Tensor::from_vec(self.field, a);
        let m = self.mult.contract(&ta, &[(1, 0)]); // [i, k]
        Mat::from_tensor(&m).transpose() // M[k][i]
    }

    /// Product on U^(x)n of two rank-n tensors, multiplying leg by leg.
    pub fn mul_pow(&self, x: &Tensor, y: &Tensor, n: usize) -> Tensor {
        assert_eq!(x.shape.len(), n);
        assert_eq!(y.shape.len(), n);
        // step-by-step: contract leg t of x and leg t of y through mult
        let mut acc = x.outer(y); // axes [x0..x_{n-1}, y0..y_{n-1}]
        // repeatedly fuse leg pairs; after fusing t legs the layout is
        // [out0..out_{t-1}, x_t..x_{n-1}, y_t..y_{n-1}]
        for t in 0..n {
            // contract x_t (axis t) and y_t (axis t + (n - t) = n) with mult
            let fused = acc.contract(&self.mult, &[(t, 0), (n, 1)]);
            // fused axes: [out0..out_{t-1}, x_{t+1}.., y_{t+1}.., new_out]
            // move new_out (last axis) to position t
            let rank = fused.shape.len();
            let mut perm: Vec<usize> = Vec::with_capacity(rank);
            for k in 0..t {
                perm.push(k);
            }
            perm.push(rank - 1);
            for k in t..rank - 1 {
                perm.push(k);
            }
            acc = fused.permute(&perm);
        }
        acc
    }

    /// Unit of U^(x)n as a rank-n tensor.
    pub fn unit_pow(&self, n: usize) -> Tensor {
        let mut t = Tensor::from_vec(self.field, &[Scalar::one(self.field)]).reshape(vec![]);
        for _ in 0..n {
            t = t.outer(&Tensor::from_vec(self.field, &self.unit));
        }
        t
    }

    /// Embed a rank-2 tensor x into U^(x)n at legs (a, b), unit elsewhere.
    pub fn embed_two(&self, x: &Tensor, n: usize, a: usize, b: usize) -> Tensor {
        assert!(a < n && b < n && a != b);
        let mut t = x.clone(); // axes [a-leg, b-leg]
        for _ in 2..n {
            t = t.outer(&Tensor::from_vec(self.field, &self.unit));
        }
        // current axes: [a-leg, b-leg, rest...]; build the permutation that
        // sends result axis k to the right source axis
        let mut src = vec![usize::MAX; n];
        src[a] = 0;
        src[b] = 1;
        let mut next = 2;
        for slot in src.iter_mut() {
            if *slot == usize::MAX {
                *slot = next;
                next += 1;
            }
        }
        t.permute(&src)
    }

    /// Two-sided inverse of x in U^(x)n, if it exists.
    pub fn inverse_in_pow(&self, x: &Tensor, n: usize) -> Option<Tensor> {
        let dimn = self.dim.pow(n as u32);
        // left-multiplication operator of x on U^(x)n
        let mut lm = Mat::zeros(self.field, dimn, dimn);
        // (x * e_J)_K: contract x with mult leg-wise against basis e_J
        // build as tensor: for each leg, mult[. , j_t, k_t]
        // computed by multiplying x by the "identity element tensor" basis:
        // more directly: lm[K][J] = mul_pow(x, e_J)[K]; do it via tensors:
        // t = x; for each leg t contract with mult to pick up (j, k) axes.
        let mut t = x.clone(); // axes: legs of x
        for leg in 0..n {
            // after processing `leg` legs the axes are
            // [j_0, k_0, ..., j_{leg-1}, k_{leg-1}, x_leg, ..., x_{n-1}]
            let ax = 2 * leg;
            let step = t.contract(&self.mult, &[(ax, 0)]); // removes x_leg, appends [j, k]
            // move appended (j, k) from the end to position ax
            let rank = step.shape.len();
            let mut perm: Vec<usize> = Vec::new();
            for k in 0..ax {
                perm.push(k);
            }
            perm.push(rank - 2);
            perm.push(rank - 1);
            for k in ax..rank - 2 {
                perm.push(k);
            }
            t = step.permute(&perm);
        }
        // axes now [j_0, k_0, j_1, k_1, ...]; group to [J, K]
        let mut perm: Vec<usize> = (0..n).map(|l| 2 * l).collect();
        perm.extend((0..n).map(|l| 2 * l + 1));
        let jk = t.permute(&perm); // [j_0..j_{n-1}, k_0..k_{n-1}]
        let flat = jk.reshape(vec![dimn, dimn]);
        for (idx, v) in flat.iter() {
            lm.set(idx[1], idx[0], v.clone()); // lm[K][J]
        }
        let unit_flat = self.unit_pow(n).reshape(vec![dimn]).to_vec();
        let sol = lm.solve(&unit_flat)?;
        let inv = Tensor::from_vec(self.field, &sol).reshape(vec![self.dim; n]);
        // verify two-sided
        let li = self.mul_pow(x, &inv, n);
        let ri = self.mul_pow(&inv, x, n);
        let one = self.unit_pow(n);
        if li == one && ri == one {
            Some(inv)
        } else {
            None
        }
    }

    /// Iterated coproduct: [dim; n+1] tensor with h -> h_(1) (x) ... (x) h_(n+1).
    pub fn comult_iter(&self, n: usize) -> Tensor {
        let mut t = Tensor::identity(self.field, self.dim); // [h, out]
        for _ in 0..n {
            // expand the last output leg
            let rank = t.shape.len();
            t = t.contract(&self.comult, &[(rank - 1, 0)]);
        }
        t
    }

    pub fn is_group_like(&self, x: &[Scalar]) -> bool {
        let tx = Tensor::from_vec(self.field, x);
        let dx = self.comult_vec(x);
        dx == tx.outer(&tx) && self.counit_of(x).is_one()
    }

    pub fn is_central(&self, x: &[Scalar]) -> bool {
        self.left_mult_mat(x) == self.right_mult_mat(x)
    }
}

/// Validate the Hopf algebra axioms; every law is named and failures carry
/// the witness basis tuple.
pub fn check_hopf(h: &Hopf) -> CheckReport {
    let mut rep = CheckReport::new("hopf");
    let f = h.field;
    let d = h.dim;

    // associativity: (e_i e_j) e_k = e_i (e_j e_k)
    let left = h.mult.contract(&h.mult, &[(2, 0)]); // [i, j, k, out]
    let right = h.mult.contract(&h.mult, &[(2, 1)]).permute(&[2, 0, 1, 3]);
    rep.expect_zero("associativity", &left.sub(&right), 3);

    // unit
    let unit_t = Tensor::from_vec(f, &h.unit);
    let lu = unit_t.contract(&h.mult, &[(0, 0)]); // [j, k] = 1 * e_j
    rep.expect_zero("left unit", &lu.sub(&Tensor::identity(f, d)), 1);
    let ru = unit_t.contract(&h.mult, &[(0, 1)]).permute(&[0, 1]); // [i, k]
    rep.expect_zero("right unit", &ru.sub(&Tensor::identity(f, d)), 1);

    // coassociativity
    let l = h.comult.contract(&h.comult, &[(1, 0)]).permute(&[0, 2, 3, 1]);
    let r = h.comult.contract(&h.comult, &[(2, 0)]);
    rep.expect_zero("coassociativity", &l.sub(&r), 1);

    // counit laws
    let counit_t = Tensor::from_vec(f, &h.counit);
    let cl = h.comult.contract(&counit_t, &[(1, 0)]); // [i, k]
    rep.expect_zero("left counit", &cl.sub(&Tensor::identity(f, d)), 1);
    let cr = h.comult.contract(&counit_t, &[(2, 0)]); // [i, j]
    rep.expect_zero("right counit", &cr.sub(&Tensor::identity(f, d)), 1);

    // comultiplication is an algebra map
    let lhs = h.mult.contract(&h.comult, &[(2, 0)]); // [i, j, p, q]
    let t1 = h.comult.outer(&h.comult); // [i, p1, q1, j, p2, q2]
    let t2 = t1.contract(&h.mult, &[(1, 0), (4, 1)]); // [i, q1, j, q2, p]
    let rhs = t2.contract(&h.mult, &[(1, 0), (3, 1)]); // [i, j, p, q]
    rep.expect_zero("comultiplication multiplicative", &lhs.sub(&rhs), 2);

    // counit is an algebra map
    let ce = h.mult.contract(&counit_t, &[(2, 0)]); // [i, j]
    let cc = counit_t.outer(&counit_t);
    rep.expect_zero("counit multiplicative", &ce.sub(&cc), 2);
    if !h.counit_of(&h.unit).is_one() {
        rep.fail("counit of unit", "()".into(), "counit(1) != 1".into());
    }

    // unit is a coalgebra map: Delta(1) = 1 (x) 1
    let du = h.comult_vec(&h.unit);
    rep.expect_zero("comultiplication of unit", &du.sub(&unit_t.outer(&unit_t)), 0);

    // antipode laws: m(S (x) id)Delta = unit . counit = m(id (x) S)Delta
    let s_t = h.antipode.to_tensor(); // [out, in]
    let eta_eps = counit_t.outer(&unit_t); // [i, out]
    // left: sum comult[i,a,b] S[c][a] mult[c,b,out]
    let sa = h.comult.contract(&s_t, &[(1, 1)]); // [i, b, c]
    let sl = sa.contract(&h.mult, &[(1, 1), (2, 0)]); // [i, out]
    rep.expect_zero("left antipode", &sl.sub(&eta_eps), 1);
    let sb = h.comult.contract(&s_t, &[(2, 1)]); // [i, a, c]
    let sr = sb.contract(&h.mult, &[(1, 0), (2, 1)]); // [i, out]
    rep.expect_zero("right antipode", &sr.sub(&eta_eps), 1);

    if h.antipode.inverse().is_none() {
        rep.fail("antipode invertible", "()".into(), "antipode matrix is singular".into());
    }
    rep
}

/// R-matrix axioms for `h.rmatrix`.
pub fn check_quasitriangular(h: &Hopf) -> CheckReport {
    let mut rep = CheckReport::new("quasitriangular");
    let r = match &h.rmatrix {
        Some(r) => r.clone(),
        None => {
            rep.fail("r-matrix present", "()".into(), "no r-matrix data".into());
            return rep;
        }
    };

    match h.inverse_in_pow(&r, 2) {
        Some(rinv) => {
            let prod = h.mul_pow(&r, &rinv, 2);
            rep.expect_zero("r invertible", &prod.sub(&h.unit_pow(2)), 0);
        }
        None => {
            rep.fail("r invertible", "()".into(), "no two-sided inverse in U (x) U".into());
        }
    }

    // R Delta(h) = Delta^op(h) R for every basis element
    // lhs[i, p, q] = sum R[a,b] comult[i,c,d] mult[a,c,p] mult[b,d,q]
    let rd = {
        let t = r.outer(&h.comult); // [a, b, i, c, d]
        let t = t.contract(&h.mult, &[(0, 0), (3, 1)]); // [b, i, d, p]
        t.contract(&h.mult, &[(0, 0), (2, 1)]) // [i, p, q]
    };
    let dr = {
        // Delta^op(e_i) = sum comult[i, c, d] e_d (x) e_c
        let cop = h.comult.permute(&[0, 2, 1]); // [i, d-leg-first]
        let t = cop.outer(&r); // [i, x1, x2, a, b]
        let t = t.contract(&h.mult, &[(1, 0), (3, 1)]); // [i, x2, b, p]
        t.contract(&h.mult, &[(1, 0), (2, 1)]) // [i, p, q]
    };
    rep.expect_zero("r intertwines coproduct", &rd.sub(&dr), 1);

    // (Delta (x) id)R = R13 R23
    let dl = {
        let t = r.contract(&h.comult, &[(0, 0)]); // [b, p, q] with Delta on first leg
        t.permute(&[1, 2, 0]) // [p, q, b]
    };
    let r13 = h.embed_two(&r, 3, 0, 2);
    let r23 = h.embed_two(&r, 3, 1, 2);
    let rr = h.mul_pow(&r13, &r23, 3);
    rep.expect_zero("coproduct on first leg", &dl.sub(&rr), 0);

    // (id (x) Delta)R = R13 R12
    let dr2 = r.contract(&h.comult, &[(1, 0)]); // [a, p, q]
    let r12 = h.embed_two(&r, 3, 0, 1);
    let rr2 = h.mul_pow(&r13, &r12, 3);
    rep.expect_zero("coproduct on second leg", &dr2.sub(&rr2), 0);

    rep
}

/// Monodromy R^flip * R in U (x) U.
pub fn monodromy(h: &Hopf) -> Option<Tensor> {
    let r = h.rmatrix.as_ref()?;
    let rfl = r.permute(&[1, 0]);
    Some(h.mul_pow(&rfl, r, 2))
}

/// Drinfeld element u = sum S(R'') R'.
pub fn drinfeld_element(h: &Hopf) -> Option<Vec<Scalar>> {
    let r = h.rmatrix.as_ref()?;
    // u_out = sum R[a,b] S[c][b] mult[c,a,out]
    let t = r.contract(&h.antipode.to_tensor(), &[(1, 1)]); // [a, c]
    let u = t.contract(&h.mult, &[(1, 0), (0, 1)]); // [out]
    Some(u.to_vec())
}

/// Ribbon axioms for `h.ribbon`.
pub fn check_ribbon(h: &Hopf) -> CheckReport {
    let mut rep = CheckReport::new("ribbon");
    let v = match &h.ribbon {
        Some(v) => v.clone(),
        None => {
            rep.fail("ribbon present", "()".into(), "no ribbon data".into());
            return rep;
        }
    };
    let vt = Tensor::from_vec(h.field, &v);

    let vinv = match h.inverse_in_pow(&vt, 1) {
        Some(vi) => Some(vi.to_vec()),
        None => {
            rep.fail("ribbon invertible", "()".into(), "no inverse".into());
            None
        }
    };

    if !h.is_central(&v) {
        // find a witness basis element
        let lm = h.left_mult_mat(&v);
        let rm = h.right_mult_mat(&v);
        for j in 0..h.dim {
            let mut bad = false;
            for i in 0..h.dim {
                if lm.get(i, j) != rm.get(i, j) {
                    bad = true;
                }
            }
            if bad {
                rep.fail("ribbon central", format!("[{}]", j), "v * e_j != e_j * v".into());
            }
        }
    }

    let sv = h.antipode_vec(&v);
    if sv != v {
        rep.fail("antipode fixes ribbon", "()".into(), "S(v) != v".into());
    }
    if !h.counit_of(&v).is_one() {
        rep.fail("counit of ribbon", "()".into(), "counit(v) != 1".into());
    }

    // Delta(v) = (R^fl R)^{-1} (v (x) v)
    match (monodromy(h), &vinv) {
        (Some(m), Some(_)) => match h.inverse_in_pow(&m, 2) {
            Some(minv) => {
                let dv = h.comult_vec(&v);
                let vv = vt.outer(&vt);
                let rhs = h.mul_pow(&minv, &vv, 2);
                rep.expect_zero("coproduct of ribbon", &dv.sub(&rhs), 0);
            }
            None => {
                rep.fail("monodromy invertible", "()".into(), "R^fl R has no inverse".into());
            }
        },
        _ => {
            if h.rmatrix.is_none() {
                rep.fail("r-matrix present", "()".into(), "ribbon check needs an r-matrix".into());
            }
        }
    }

    // pivotal element u v^{-1} is group-like
    if let (Some(u), Some(vi)) = (drinfeld_element(h), &vinv) {
        let g = h.mul_vec(&u, vi);
        if !h.is_group_like(&g) {
            rep.fail("pivotal group-like", "()".into(), "u * v^{-1} is not group-like".into());
        }
    }

    rep
}

/// The dual Hopf algebra on the dual basis. For a quasitriangular `h` the
/// dual also carries the induced bilinear forms; see [`CoHopf`].
pub fn dual_hopf(h: &Hopf) -> Hopf {
    let f = h.field;
    let d = h.dim;
    // product of functionals: (f_i f_j)(e_k) = (f_i (x) f_j)(Delta e_k)
    let mult = h.comult.permute(&[1, 2, 0]);
    // coproduct: Delta(f_i) = sum mult[j,k,i] f_j (x) f_k
    let comult = h.mult.permute(&[2, 0, 1]);
    // unit = counit coefficients, counit = evaluation at 1
    let unit = h.counit.clone();
    let counit = h.unit.clone();
    let antipode = h.antipode.transpose();
    Hopf {
        name: format!("{}^dual", h.name),
        field: f,
        dim: d,
        basis: h.basis.iter().map(|l| format!("d_{}", l)).collect(),
        unit,
        counit,
        mult,
        comult,
        antipode,
        rmatrix: None,
        ribbon: None,
    }
}

/// Convolution inverse of f: C -> A in the convolution algebra Hom(C, A),
/// solved exactly; None when f is not convolution-invertible. The result g
/// satisfies sum f(c_(1)) g(c_(2)) = counit(c) 1_A = sum g(c_(1)) f(c_(2)).
pub fn convolution_inverse(
    comult: &Tensor,
    counit: &[Scalar],
    mult: &Tensor,
    unit: &[Scalar],
    f: &Mat,
) -> Option<Mat> {
    let field = f.field;
    let cdim = comult.shape[0];
    let adim = mult.shape[0];
    assert_eq!(f.rows, adim);
    assert_eq!(f.cols, cdim);
    // unknown g (adim x cdim); one constraint per basis element of C:
    //   sum over Delta(c) = sum (c1, c2): leftmult(f(c1)) . g . e_{c2} = counit(c) 1_A
    let mut constraints = Vec::with_capacity(cdim);
    for c in 0..cdim {
        let mut terms: Vec<(Mat, Mat)> = Vec::new();
        for (idx, coef) in comult.iter() {
            if idx[0] != c {
                continue;
            }
            let (c1, c2) = (idx[1], idx[2]);
            // left multiplication by f(e_{c1}) in A, scaled by coef
            let fc1: Vec<Scalar> = (0..adim).map(|r| f.get(r, c1).clone()).collect();
            let fc1_t = Tensor::from_vec(field, &fc1);
            let lm_t = fc1_t.contract(mult, &[(0, 0)]); // [j, k]
            let lm = Mat::from_tensor(&lm_t).transpose().scale(coef);
            let mut sel = Mat::zeros(field, cdim, 1);
            sel.set(c2, 0, Scalar::one(field));
            terms.push((lm, sel));
        }
        let mut rhs = Mat::zeros(field, adim, 1);
        for r in 0..adim {
            rhs.set(r, 0, counit[c].mul(&unit[r]));
        }
        constraints.push(MapConstraint { terms, rhs });
    }
    let sol = solve_map_space(field, adim, cdim, &constraints);
    let g = sol.particular?;
    // verify the other side: sum g(c1) f(c2) = counit(c) 1_A
    for c in 0..cdim {
        let mut acc = vec![Scalar::zero(field); adim];
        for (idx, coef) in comult.iter() {
            if idx[0] != c {
                continue;
            }
            let (c1, c2) = (idx[1], idx[2]);
            let gc1: Vec<Scalar> = (0..adim).map(|r| g.get(r, c1).clone()).collect();
            let fc2: Vec<Scalar> = (0..adim).map(|r| f.get(r, c2).clone()).collect();
            let gt = Tensor::from_vec(field, &gc1);
            let ft = Tensor::from_vec(field, &fc2);
            let prod = gt.contract(&mult.clone(), &[(0, 0)]);
            let prod = ft.contract(&prod, &[(0, 0)]).to_vec();
            for k in 0..adim {
                acc[k] = acc[k].add(&coef.mul(&prod[k]));
            }
        }
        for k in 0..adim {
            let expect = counit[c].mul(&unit[k]);
            if acc[k] != expect {
                return None;
            }
        }
    }
    Some(g)
}

/// The double construction: H*^cop (x) H with the canonical quasitriangular
/// structure. Basis order: (dual index, algebra index), row-major.
pub fn drinfeld_double(h: &Hopf) -> Hopf {
    let f = h.field;
    let d = h.dim;
    let dd = d * d;
    let sinv = h
        .antipode
        .inverse()
        .expect("double construction requires an invertible antipode");

    // iterated coproduct h -> h1 (x) h2 (x) h3
    let comult2 = h.comult_iter(2); // [h, a, b, c]

    // arrow[c, a, i', x]: coefficient of f_x in (e_a -> f_{i'} <- Sinv(e_c)),
    // i.e. the functional y -> f_{i'}(Sinv(e_c) y e_a)
    let arrow = {
        let t1 = sinv.to_tensor(); // [p, c]
        let t2 = t1.contract(&h.mult, &[(0, 0)]); // [c, x, y]
        let t3 = t2.contract(&h.mult, &[(2, 0)]); // [c, x, a, i']
        t3.permute(&[0, 2, 3, 1])
    };

    // multO[i, x, k] = comult[k, i, x]: product of the dual algebra
    let mult_o = h.comult.permute(&[1, 2, 0]);

    // product of the double
    let mult_d = {
        let u1 = comult2.contract(&arrow, &[(1, 1), (3, 0)]); // [j, b, i', x]
        let u2 = u1.contract(&mult_o, &[(3, 1)]); // [j, b, i', i, k]
        let u3 = u2.contract(&h.mult, &[(1, 0)]); // [j, i', i, k, j', l]
        u3.permute(&[2, 0, 1, 4, 3, 5]).reshape(vec![dd, dd, dd])
    };

    // coproduct with the flip on the dual legs
    let comult_d = {
        let t = h.mult.permute(&[2, 1, 0]); // [i, k1, k2] = mult[k2, k1, i]
        t.outer(&h.comult).permute(&[0, 3, 1, 4, 2, 5]).reshape(vec![dd, dd, dd])
    };

    let mut unit_d = vec![Scalar::zero(f); dd];
    let mut counit_d = vec![Scalar::zero(f); dd];
    for i in 0..d {
        for j in 0..d {
            unit_d[i * d + j] = h.counit[i].mul(&h.unit[j]);
            counit_d[i * d + j] = h.unit[i].mul(&h.counit[j]);
        }
    }

    // canonical R = sum_i (eps (x) e_i) (x) (f^i (x) 1)
    let mut r = Tensor::zeros(f, vec![dd, dd]);
    for i in 0..d {
        for k in 0..d {
            if h.counit[k].is_zero() {
                continue;
            }
            for q in 0..d {
                if h.unit[q].is_zero() {
                    continue;
                }
                r.add_at(&[k * d + i, i * d + q], &h.counit[k].mul(&h.unit[q]));
            }
        }
    }

    let mut labels = Vec::with_capacity(dd);
    for i in 0..d {
        for j in 0..d {
            labels.push(format!("d_{}*{}", h.basis[i], h.basis[j]));
        }
    }
    let mut out = Hopf {
        name: format!("D({})", h.name),
        field: f,
        dim: dd,
        basis: labels,
        unit: unit_d,
        counit: counit_d,
        mult: mult_d,
        comult: comult_d,
        antipode: Mat::identity(f, dd), // replaced below
        rmatrix: Some(r),
        ribbon: None,
    };
    // the antipode is the convolution inverse of the identity map
    let s = convolution_inverse(
        &out.comult,
        &out.counit,
        &out.mult,
        &out.unit,
        &Mat::identity(f, dd),
    )
    .expect("double of a Hopf algebra has an antipode");
    out.antipode = s;
    out
}

/// Quasitriangular context: a validated Hopf algebra plus every derived
/// datum the higher modules need (inverse antipode, R inverse, monodromy,
/// Drinfeld element, ribbon data, the dual algebra and its induced forms).
pub struct HopfCtx {
    pub u: Hopf,
    pub o: Hopf,
    pub sinv: Mat,
    pub r: Option<Tensor>,
    pub r_inv: Option<Tensor>,
    pub monodromy: Option<Tensor>,
    pub monodromy_inv: Option<Tensor>,
    pub drinfeld_u: Option<Vec<Scalar>>,
    pub ribbon_inv: Option<Vec<Scalar>>,
    /// pivotal element u * ribbon^{-1}
    pub pivotal: Option<Vec<Scalar>>,
}

impl HopfCtx {
    pub fn new(u: Hopf) -> Result<std::rc::Rc<HopfCtx>, String> {
        let sinv = u.antipode.inverse().ok_or("antipode is not invertible")?;
        let o = dual_hopf(&u);
        let (mut r_inv, mut mon, mut mon_inv, mut du) = (None, None, None, None);
        if let Some(r) = &u.rmatrix {
            r_inv = Some(u.inverse_in_pow(r, 2).ok_or("r-matrix is not invertible")?);
            let m = monodromy(&u).unwrap();
            mon_inv = u.inverse_in_pow(&m, 2);
            mon = Some(m);
            du = drinfeld_element(&u);
        }
        let (mut rib_inv, mut piv) = (None, None);
        if let Some(v) = &u.ribbon {
            let vt = Tensor::from_vec(u.field, v);
            let vi = u.inverse_in_pow(&vt, 1).ok_or("ribbon element is not invertible")?.to_vec();
            if let Some(uu) = &du {
                piv = Some(u.mul_vec(uu, &vi));
            }
            rib_inv = Some(vi);
        }
        let r = u.rmatrix.clone();
        Ok(std::rc::Rc::new(HopfCtx {
            u,
            o,
            sinv,
            r,
            r_inv,
            monodromy: mon,
            monodromy_inv: mon_inv,
            drinfeld_u: du,
            ribbon_inv: rib_inv,
            pivotal: piv,
        }))
    }

    pub fn field(&self) -> FieldDesc {
        self.u.field
    }

    /// Pairing value R[i, j] of the co-quasitriangular form on dual basis
    /// elements, i.e. (f_i (x) f_j)(R).
    pub fn r_form(&self) -> Mat {
        Mat::from_tensor(self.r.as_ref().expect("r-matrix required"))
    }

    pub fn r_form_inv(&self) -> Mat {
        Mat::from_tensor(self.r_inv.as_ref().expect("r-matrix required"))
    }

    /// Coribbon form value on a dual basis element: f_i(ribbon).
    pub fn v_form(&self) -> Vec<Scalar> {
        self.u.ribbon.clone().expect("ribbon required")
    }

    pub fn v_form_inv(&self) -> Vec<Scalar> {
        self.ribbon_inv.clone().expect("ribbon required")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn dual_of_dual_is_original_shape() {
        let h = fixtures::kz2();
        let d = dual_hopf(&h);
        let dd = dual_hopf(&d);
        assert_eq!(dd.mult, h.mult);
        assert_eq!(dd.comult, h.comult);
        assert_eq!(dd.unit, h.unit);
        assert_eq!(dd.counit, h.counit);
    }

    #[test]
    fn convolution_inverse_of_identity_is_antipode() {
        let h = fixtures::h4();
        let s = convolution_inverse(&h.comult, &h.counit, &h.mult, &h.unit, &Mat::identity(h.field, h.dim))
            .expect("identity must be convolution invertible in a Hopf algebra");
        assert_eq!(s, h.antipode);
    }

    #[test]
    fn convolution_inverse_of_the_co_r_form() {
        let h = fixtures::kz2();
        let o = dual_hopf(&h);
        let (d, field) = (h.dim, h.field);
        let dd = d * d;
        // tensor-square coalgebra of the dual
        let mut comult2 = Tensor::zeros(field, vec![dd, dd, dd]);
        for (ia, va) in o.comult.iter() {
            for (ib, vb) in o.comult.iter() {
                comult2.add_at(
                    &[ia[0] * d + ib[0], ia[1] * d + ib[1], ia[2] * d + ib[2]],
                    &va.mul(vb),
                );
            }
        }
        let mut counit2 = Vec::with_capacity(dd);
        for i in 0..d {
            for j in 0..d {
                counit2.push(o.counit[i].mul(&o.counit[j]));
            }
        }
        // target algebra: the ground field
        let mut kmult = Tensor::zeros(field, vec![1, 1, 1]);
        kmult.add_at(&[0, 0, 0], &Scalar::one(field));
        let kunit = vec![Scalar::one(field)];
        // the co-R form, as a functional on the tensor-square coalgebra
        let r = h.rmatrix.as_ref().unwrap();
        let mut f = Mat::zeros(field, 1, dd);
        for (idx, v) in r.iter() {
            f.add_at(0, idx[0] * d + idx[1], v);
        }
        let g = convolution_inverse(&comult2, &counit2, &kmult, &kunit, &f)
            .expect("co-R form must be convolution invertible");
        // the inverse is the form precomposed with antipode (x) id
        let sr = h.antipode.to_tensor().contract(r, &[(1, 0)]); // [out, q]
        let mut want = Mat::zeros(field, 1, dd);
        for (idx, v) in sr.iter() {
            want.add_at(0, idx[0] * d + idx[1], v);
        }
        assert!(g.sub(&want).is_zero());
        // convolving back gives the counit on every basis element
        for c in 0..dd {
            let mut acc = Scalar::zero(field);
            for (idx, v) in comult2.iter() {
                if idx[0] == c {
                    acc = acc.add(&v.mul(&f.get(0, idx[1]).mul(g.get(0, idx[2]))));
                }
            }
            assert_eq!(acc, counit2[c]);
        }
        // unit compose counit is its own inverse; the zero map has none
        let mut uc = Mat::zeros(field, 1, d);
        for i in 0..d {
            uc.add_at(0, i, &o.counit[i]);
        }
        let g2 = convolution_inverse(&o.comult, &o.counit, &kmult, &kunit, &uc).unwrap();
        assert!(g2.sub(&uc).is_zero());
        let z = Mat::zeros(field, 1, d);
        assert!(convolution_inverse(&o.comult, &o.counit, &kmult, &kunit, &z).is_none());
    }
}
