//! Sparse multi-index tensors over an exact scalar field.
//!
//! One linearization convention is used everywhere: row-major, i.e. for shape
//! [d0, d1, ..., dk] the flat index of (i0, ..., ik) is
//! (((i0*d1 + i1)*d2 + i2)* ... )*dk + ik, the last axis varying fastest.
//! Zero entries are never stored.

use crate::scalar::{FieldDesc, Scalar};
use std::collections::BTreeMap;

#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    pub field: FieldDesc,
    pub shape: Vec<usize>,
    entries: BTreeMap<Vec<usize>, Scalar>,
}

impl std::fmt::Debug for Tensor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Tensor{:?} over {} {{", self.shape, self.field)?;
        for (idx, v) in &self.entries {
            writeln!(f, "  {:?}: {}", idx, v.serialize())?;
        }
        write!(f, "}}")
    }
}

/// Flat index of `idx` in row-major order for `shape`.
pub fn linearize(shape: &[usize], idx: &[usize]) -> usize {
    assert_eq!(shape.len(), idx.len());
    let mut flat = 0usize;
    for (d, i) in shape.iter().zip(idx.iter()) {
        assert!(i < d, "index {:?} out of bounds for shape {:?}", idx, shape);
        flat = flat * d + i;
    }
    flat
}

/// Inverse of `linearize`.
pub fn delinearize(shape: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0usize; shape.len()];
    for k in (0..shape.len()).rev() {
        idx[k] = flat % shape[k];
        flat /= shape[k];
    }
    assert_eq!(flat, 0, "flat index out of bounds");
    idx
}

impl Tensor {
    pub fn zeros(field: FieldDesc, shape: Vec<usize>) -> Tensor {
        Tensor { field, shape, entries: BTreeMap::new() }
    }

    pub fn size(&self) -> usize {
        self.shape.iter().product()
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.entries.iter()
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        assert_eq!(idx.len(), self.shape.len());
        self.entries.get(idx).cloned().unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Add `v` into the entry at `idx`, dropping it if the sum is zero.
    pub fn add_at(&mut self, idx: &[usize], v: &Scalar) {
        if v.is_zero() {
            return;
        }
        assert_eq!(idx.len(), self.shape.len(), "rank mismatch");
        assert_eq!(v.field(), self.field, "field mismatch");
        for (d, i) in self.shape.iter().zip(idx.iter()) {
            assert!(i < d, "index {:?} out of bounds for shape {:?}", idx, self.shape);
        }
        match self.entries.get_mut(idx) {
            Some(cur) => {
                let s = cur.add(v);
                if s.is_zero() {
                    self.entries.remove(idx);
                } else {
                    *cur = s;
                }
            }
            None => {
                self.entries.insert(idx.to_vec(), v.clone());
            }
        }
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        if v.is_zero() {
            self.entries.remove(idx);
        } else {
            assert_eq!(v.field(), self.field, "field mismatch");
            for (d, i) in self.shape.iter().zip(idx.iter()) {
                assert!(i < d, "index {:?} out of bounds for shape {:?}", idx, self.shape);
            }
            self.entries.insert(idx.to_vec(), v);
        }
    }

    pub fn from_entries(
        field: FieldDesc,
        shape: Vec<usize>,
        entries: impl IntoIterator<Item = (Vec<usize>, Scalar)>,
    ) -> Tensor {
        let mut t = Tensor::zeros(field, shape);
        for (idx, v) in entries {
            t.add_at(&idx, &v);
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.shape, other.shape, "shape mismatch in add");
        let mut out = self.clone();
        for (idx, v) in &other.entries {
            out.add_at(idx, v);
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.shape, other.shape, "shape mismatch in sub");
        let mut out = self.clone();
        for (idx, v) in &other.entries {
            out.add_at(idx, &v.neg());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Tensor {
        if c.is_zero() {
            return Tensor::zeros(self.field, self.shape.clone());
        }
        let mut out = Tensor::zeros(self.field, self.shape.clone());
        for (idx, v) in &self.entries {
            out.set(idx, v.mul(c));
        }
        out
    }

    /// Outer (tensor) product; result shape is the concatenation of shapes.
    pub fn outer(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.field, other.field);
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut out = Tensor::zeros(self.field, shape);
        for (ia, va) in &self.entries {
            for (ib, vb) in &other.entries {
                let mut idx = ia.clone();
                idx.extend_from_slice(ib);
                out.set(&idx, va.mul(vb));
            }
        }
        out
    }

    /// General contraction: sums over the axis pairs `(axis_self, axis_other)`,
    /// which must have matching dimensions. The result's axes are the
    /// remaining axes of `self` (in order) followed by the remaining axes of
    /// `other` (in order).
    pub fn contract(&self, other: &Tensor, pairs: &[(usize, usize)]) -> Tensor {
        assert_eq!(self.field, other.field);
        for &(a, b) in pairs {
            assert_eq!(
                self.shape[a], other.shape[b],
                "contracted axes must agree: self axis {} (dim {}) vs other axis {} (dim {})",
                a, self.shape[a], b, other.shape[b]
            );
        }
        let a_contr: Vec<usize> = pairs.iter().map(|p| p.0).collect();
        let b_contr: Vec<usize> = pairs.iter().map(|p| p.1).collect();
        let a_keep: Vec<usize> = (0..self.shape.len()).filter(|i| !a_contr.contains(i)).collect();
        let b_keep: Vec<usize> = (0..other.shape.len()).filter(|i| !b_contr.contains(i)).collect();
        let mut shape: Vec<usize> = a_keep.iter().map(|&i| self.shape[i]).collect();
        shape.extend(b_keep.iter().map(|&i| other.shape[i]));

        // bucket `other` entries by their contracted-index key
        let mut buckets: BTreeMap<Vec<usize>, Vec<(Vec<usize>, &Scalar)>> = BTreeMap::new();
        for (idx, v) in &other.entries {
            let key: Vec<usize> = b_contr.iter().map(|&i| idx[i]).collect();
            let keep: Vec<usize> = b_keep.iter().map(|&i| idx[i]).collect();
            buckets.entry(key).or_default().push((keep, v));
        }

        let mut out = Tensor::zeros(self.field, shape);
        for (idx, va) in &self.entries {
            let key: Vec<usize> = a_contr.iter().map(|&i| idx[i]).collect();
            if let Some(list) = buckets.get(&key) {
                let keep_a: Vec<usize> = a_keep.iter().map(|&i| idx[i]).collect();
                for (keep_b, vb) in list {
                    let mut oidx = keep_a.clone();
                    oidx.extend_from_slice(keep_b);
                    out.add_at(&oidx, &va.mul(vb));
                }
            }
        }
        out
    }

    /// Permute axes: axis k of the result is axis `perm[k]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.shape.len());
        let shape: Vec<usize> = perm.iter().map(|&p| self.shape[p]).collect();
        let mut out = Tensor::zeros(self.field, shape);
        for (idx, v) in &self.entries {
            let nidx: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            out.set(&nidx, v.clone());
        }
        out
    }

    /// Row-major regrouping of axes into the given target shape (sizes must
    /// multiply to the same total).
    pub fn reshape(&self, shape: Vec<usize>) -> Tensor {
        assert_eq!(
            self.size(),
            shape.iter().product::<usize>(),
            "reshape must preserve total size"
        );
        let mut out = Tensor::zeros(self.field, shape.clone());
        for (idx, v) in &self.entries {
            let flat = linearize(&self.shape, idx);
            out.set(&delinearize(&shape, flat), v.clone());
        }
        out
    }

    /// Identity on an n-dimensional space, as an [n, n] tensor.
    pub fn identity(field: FieldDesc, n: usize) -> Tensor {
        let mut out = Tensor::zeros(field, vec![n, n]);
        let one = Scalar::one(field);
        for i in 0..n {
            out.set(&[i, i], one.clone());
        }
        out
    }

    /// View a vector (rank-1 tensor) as a list of coordinates.
    pub fn to_vec(&self) -> Vec<Scalar> {
        assert_eq!(self.shape.len(), 1);
        let mut out = vec![Scalar::zero(self.field); self.shape[0]];
        for (idx, v) in &self.entries {
            out[idx[0]] = v.clone();
        }
        out
    }

    pub fn from_vec(field: FieldDesc, v: &[Scalar]) -> Tensor {
        let mut out = Tensor::zeros(field, vec![v.len()]);
        for (i, c) in v.iter().enumerate() {
            out.set(&[i], c.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldDesc;

    fn q(n: i64) -> Scalar {
        Scalar::from_int(FieldDesc::Q, n)
    }

    #[test]
    fn linearize_row_major() {
        // shape [2,3]: (i,j) -> 3i + j, last axis fastest
        assert_eq!(linearize(&[2, 3], &[0, 0]), 0);
        assert_eq!(linearize(&[2, 3], &[0, 2]), 2);
        assert_eq!(linearize(&[2, 3], &[1, 0]), 3);
        assert_eq!(linearize(&[2, 3], &[1, 2]), 5);
        assert_eq!(delinearize(&[2, 3], 4), vec![1, 1]);
        for f in 0..6 {
            assert_eq!(linearize(&[2, 3], &delinearize(&[2, 3], f)), f);
        }
    }

    #[test]
    fn matrix_product_via_contract() {
        // [[1,2],[3,4]] * [[0,1],[1,0]] = [[2,1],[4,3]]
        let f = FieldDesc::Q;
        let a = Tensor::from_entries(
            f,
            vec![2, 2],
            vec![
                (vec![0, 0], q(1)),
                (vec![0, 1], q(2)),
                (vec![1, 0], q(3)),
                (vec![1, 1], q(4)),
            ],
        );
        let b = Tensor::from_entries(
            f,
            vec![2, 2],
            vec![(vec![0, 1], q(1)), (vec![1, 0], q(1))],
        );
        let c = a.contract(&b, &[(1, 0)]);
        assert_eq!(c.get(&[0, 0]), q(2));
        assert_eq!(c.get(&[0, 1]), q(1));
        assert_eq!(c.get(&[1, 0]), q(4));
        assert_eq!(c.get(&[1, 1]), q(3));
    }

    #[test]
    fn contract_multiple_axes() {
        // full pairing of a rank-2 tensor with itself: trace of A*A^T
        let f = FieldDesc::Q;
        let a = Tensor::from_entries(
            f,
            vec![2, 2],
            vec![(vec![0, 0], q(1)), (vec![0, 1], q(2)), (vec![1, 1], q(3))],
        );
        let s = a.contract(&a, &[(0, 0), (1, 1)]);
        assert_eq!(s.shape, Vec::<usize>::new());
        assert_eq!(s.get(&[]), q(1 + 4 + 9));
    }

    #[test]
    fn zero_entries_dropped() {
        let f = FieldDesc::Q;
        let mut t = Tensor::zeros(f, vec![2]);
        t.add_at(&[0], &q(5));
        t.add_at(&[0], &q(-5));
        assert!(t.is_zero());
        assert_eq!(t.nnz(), 0);
    }

    #[test]
    fn permute_and_reshape() {
        let f = FieldDesc::Q;
        let t = Tensor::from_entries(f, vec![2, 3], vec![(vec![1, 2], q(7))]);
        let p = t.permute(&[1, 0]);
        assert_eq!(p.shape, vec![3, 2]);
        assert_eq!(p.get(&[2, 1]), q(7));
        let r = t.reshape(vec![6]);
        assert_eq!(r.get(&[5]), q(7));
        let back = r.reshape(vec![2, 3]);
        assert_eq!(back, t);
    }

    proptest::proptest! {
        #[test]
        fn contract_bilinear(av in proptest::collection::vec(-5i64..5, 4),
                             bv in proptest::collection::vec(-5i64..5, 4),
                             cv in proptest::collection::vec(-5i64..5, 4)) {
            let f = FieldDesc::Q;
            let mk = |v: &Vec<i64>| {
                let mut t = Tensor::zeros(f, vec![2, 2]);
                for (k, c) in v.iter().enumerate() {
                    t.add_at(&delinearize(&[2,2], k), &q(*c));
                }
                t
            };
            let a = mk(&av); let b = mk(&bv); let c = mk(&cv);
            // (a+b) contracted with c = a.c + b.c
            let lhs = a.add(&b).contract(&c, &[(1,0)]);
            let rhs = a.contract(&c, &[(1,0)]).add(&b.contract(&c, &[(1,0)]));
            proptest::prop_assert_eq!(lhs, rhs);
            // associativity of matrix product via contraction
            let l2 = a.contract(&b, &[(1,0)]).contract(&c, &[(1,0)]);
            let r2 = a.contract(&b.contract(&c, &[(1,0)]), &[(1,0)]);
            proptest::prop_assert_eq!(l2, r2);
        }
    }
}
