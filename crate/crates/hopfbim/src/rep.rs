//! Finite-dimensional left modules over a fixed algebra context, with
//! tensor products, duals, direct sums, braiding, twist, and intertwiner
//! spaces. A left module is equivalently a right comodule over the dual;
//! [`Rep::coaction`] exposes that view and the braiding is computed along
//! both routes in the tests.
//!
//! Convention: `action` has shape [hdim, dim, dim] with
//! e_h . v_i = sum_j action[h, i, j] v_j (input index first, output last).

use crate::hopf::{CheckReport, HopfCtx};
use crate::linalg::{solve_map_space, Mat, MapConstraint};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use std::rc::Rc;

#[derive(Clone)]
pub struct Rep {
    pub ctx: Rc<HopfCtx>,
    pub name: String,
    pub dim: usize,
    pub action: Tensor,
}

impl Rep {
    pub fn new(ctx: Rc<HopfCtx>, name: &str, dim: usize, action: Tensor) -> Rep {
        assert_eq!(action.shape, vec![ctx.u.dim, dim, dim]);
        Rep { ctx, name: name.to_string(), dim, action }
    }

    /// Matrix of the action of basis element e_h.
    pub fn act_basis(&self, h: usize) -> Mat {
        let mut m = Mat::zeros(self.ctx.field(), self.dim, self.dim);
        for (idx, v) in self.action.iter() {
            if idx[0] == h {
                m.set(idx[2], idx[1], v.clone());
            }
        }
        m
    }

    /// Matrix of the action of an element given by coordinates.
    pub fn act(&self, h: &[Scalar]) -> Mat {
        let th = Tensor::from_vec(self.ctx.field(), h);
        let m = th.contract(&self.action, &[(0, 0)]); // [in, out]
        Mat::from_tensor(&m).transpose()
    }

    /// Right comodule structure over the dual: [dim, dim, hdim] tensor,
    /// v_i |-> sum v_j (x) f_k with coefficient action[k, i, j].
    pub fn coaction(&self) -> Tensor {
        self.action.permute(&[1, 2, 0])
    }

    /// Iterated coaction [i, out, k_1, .., k_n]: v_i |-> v_out (x) f_{k_1}
    /// (x) .. (x) f_{k_n}.
    pub fn coaction_iter(&self, n: usize) -> Tensor {
        let co = self.coaction();
        let mut t = co.clone();
        for m in 1..n {
            // split the comodule leg again; the new dual leg precedes the old ones
            let t2 = t.contract(&co, &[(1, 0)]); // [i, k_1..k_m, out, k_new]
            let mut perm = vec![0, m + 1, m + 2];
            perm.extend(1..=m);
            t = t2.permute(&perm);
        }
        t
    }

    /// Module axioms: unit acts as identity, action respects products.
    pub fn check(&self) -> CheckReport {
        let mut rep = CheckReport::new("module");
        let u = &self.ctx.u;
        let id = Tensor::identity(u.field, self.dim);
        let unit_t = Tensor::from_vec(u.field, &u.unit);
        let ua = unit_t.contract(&self.action, &[(0, 0)]);
        rep.expect_zero("unit acts as identity", &ua.sub(&id), 1);
        // act(e_a e_b) = act(e_a) act(e_b) on every v
        let lhs = u.mult.contract(&self.action, &[(2, 0)]); // [a, b, i, j]
        let rhs = {
            let t = self.action.contract(&self.action, &[(2, 1)]); // [b, i, a, j]
            t.permute(&[2, 0, 1, 3])
        };
        rep.expect_zero("action multiplicative", &lhs.sub(&rhs), 3);
        rep
    }

    pub fn tensor(&self, other: &Rep) -> Rep {
        let u = &self.ctx.u;
        let d = self.dim * other.dim;
        // sum comult[h,a,b] actV[a,i1,j1] actW[b,i2,j2]
        let t = u.comult.contract(&self.action, &[(1, 0)]); // [h, b, i1, j1]
        let t = t.contract(&other.action, &[(1, 0)]); // [h, i1, j1, i2, j2]
        let t = t.permute(&[0, 1, 3, 2, 4]); // [h, i1, i2, j1, j2]
        let action = t.reshape(vec![u.dim, d, d]);
        Rep::new(
            self.ctx.clone(),
            &format!("({})(x)({})", self.name, other.name),
            d,
            action,
        )
    }

    /// Left dual: (h . f)(v) = f(S(h) . v).
    pub fn dual(&self) -> Rep {
        let u = &self.ctx.u;
        // action*[h, i, j] = sum_c antipode[c][h] action[c, j, i]
        let s = u.antipode.to_tensor(); // [c, h]
        let t = s.contract(&self.action, &[(0, 0)]); // [h, j, i]
        let action = t.permute(&[0, 2, 1]);
        Rep::new(self.ctx.clone(), &format!("({})^*", self.name), self.dim, action)
    }

    /// Right dual, using the inverse antipode.
    pub fn dual_right(&self) -> Rep {
        let t = self.ctx.sinv.to_tensor().contract(&self.action, &[(0, 0)]);
        let action = t.permute(&[0, 2, 1]);
        Rep::new(self.ctx.clone(), &format!("^*({})", self.name), self.dim, action)
    }

    pub fn direct_sum(&self, other: &Rep) -> Rep {
        let u = &self.ctx.u;
        let d = self.dim + other.dim;
        let mut action = Tensor::zeros(u.field, vec![u.dim, d, d]);
        for (idx, v) in self.action.iter() {
            action.add_at(idx, v);
        }
        for (idx, v) in other.action.iter() {
            action.add_at(&[idx[0], self.dim + idx[1], self.dim + idx[2]], v);
        }
        Rep::new(
            self.ctx.clone(),
            &format!("({})(+)({})", self.name, other.name),
            d,
            action,
        )
    }

    /// Braiding V (x) W -> W (x) V: v (x) w |-> (R'' . w) (x) (R' . v).
    pub fn braiding(&self, other: &Rep) -> Mat {
        let r = self.ctx.r.as_ref().expect("braiding requires an r-matrix");
        braid_from(self, other, r)
    }

    /// Inverse braiding W (x) V -> V (x) W: w (x) v |-> (R^{-1}' . v) (x) (R^{-1}'' . w).
    pub fn braiding_inv(&self, other: &Rep) -> Mat {
        let rinv = self.ctx.r_inv.as_ref().expect("braiding requires an r-matrix");
        // output legs in V (x) W order, input in W (x) V order
        let t = rinv.contract(&self.action, &[(0, 0)]); // [b, i_v, p]
        let t = t.contract(&other.action, &[(0, 0)]); // [i_v, p, j_w, q]
        // M[(p,q)][(j_w, i_v)]
        let field = self.ctx.field();
        let (dv, dw) = (self.dim, other.dim);
        let mut m = Mat::zeros(field, dv * dw, dw * dv);
        for (idx, v) in t.iter() {
            let (iv, p, jw, q) = (idx[0], idx[1], idx[2], idx[3]);
            m.add_at(p * dw + q, jw * dv + iv, v);
        }
        m
    }

    /// Twist: action of the inverse ribbon element.
    pub fn twist(&self) -> Mat {
        let vi = self.ctx.ribbon_inv.as_ref().expect("twist requires a ribbon");
        self.act(vi)
    }

    pub fn twist_inv(&self) -> Mat {
        let v = self.ctx.u.ribbon.as_ref().expect("twist requires a ribbon");
        self.act(v)
    }

    /// Basis of the intertwiner space Hom(V, W).
    pub fn hom_space(&self, other: &Rep) -> Vec<Mat> {
        let u = &self.ctx.u;
        let mut constraints = Vec::with_capacity(u.dim);
        for h in 0..u.dim {
            constraints.push(MapConstraint::intertwine(
                other.act_basis(h),
                self.act_basis(h),
                u.field,
                other.dim,
                self.dim,
            ));
        }
        solve_map_space(u.field, other.dim, self.dim, &constraints).basis
    }

    /// Does the trivial module split off as a direct summand?
    pub fn has_unit_summand(&self) -> bool {
        let triv = trivial_rep(self.ctx.clone());
        let into = triv.hom_space(self); // maps 1 -> V, dim x 1 matrices
        let onto = self.hom_space(&triv); // maps V -> 1
        for p in &onto {
            for i in &into {
                if !p.mul(i).get(0, 0).is_zero() {
                    return true;
                }
            }
        }
        false
    }
}

/// Braiding matrix from an explicit element t of U (x) U:
/// v (x) w |-> (t'' . w) (x) (t' . v), output flat index (q, p) row-major.
pub fn braid_from(v: &Rep, w: &Rep, t: &Tensor) -> Mat {
    let s = t.contract(&v.action, &[(0, 0)]); // [b, i_v, p]
    let s = s.contract(&w.action, &[(0, 0)]); // [i_v, p, j_w, q]
    let field = v.ctx.field();
    let (dv, dw) = (v.dim, w.dim);
    let mut m = Mat::zeros(field, dw * dv, dv * dw);
    for (idx, val) in s.iter() {
        let (iv, p, jw, q) = (idx[0], idx[1], idx[2], idx[3]);
        m.add_at(q * dv + p, iv * dw + jw, val);
    }
    m
}

/// The dual basis as a module under (h |> f)(x) = f(xh); as a comodule this
/// is the regular coaction by the coproduct of the dual.
pub fn coregular_rep(ctx: &Rc<HopfCtx>) -> Rep {
    let d = ctx.u.dim;
    let action = ctx.u.mult.permute(&[1, 2, 0]); // [h, i, out] = mult[out, h, i]
    Rep::new(ctx.clone(), "coregular", d, action)
}

pub fn trivial_rep(ctx: Rc<HopfCtx>) -> Rep {
    let u = &ctx.u;
    let mut action = Tensor::zeros(u.field, vec![u.dim, 1, 1]);
    for h in 0..u.dim {
        action.add_at(&[h, 0, 0], &u.counit[h]);
    }
    Rep::new(ctx.clone(), "trivial", 1, action)
}

pub fn regular_rep(ctx: Rc<HopfCtx>) -> Rep {
    let u = &ctx.u;
    Rep::new(ctx.clone(), "regular", u.dim, u.mult.clone())
}

/// One-dimensional module from an algebra character; None when the values
/// do not define one.
pub fn character_rep(ctx: Rc<HopfCtx>, vals: &[Scalar], name: &str) -> Option<Rep> {
    let u = &ctx.u;
    let mut action = Tensor::zeros(u.field, vec![u.dim, 1, 1]);
    for h in 0..u.dim {
        action.add_at(&[h, 0, 0], &vals[h]);
    }
    let r = Rep::new(ctx.clone(), name, 1, action);
    if r.check().passed {
        Some(r)
    } else {
        None
    }
}

/// Curated small modules for each bundled fixture, all machine-validated.
/// Names: "trivial", "sign" (one-dimensional character), "regular",
/// "std2" (two-dimensional module of the nilpotent extension), "adj4"
/// (the four-dimensional module of the double carried by its factor with
/// conjugation action and coproduct coaction).
pub fn fixture_reps(ctx: &Rc<HopfCtx>, fixture: &str) -> Vec<Rep> {
    let field = ctx.field();
    let mut out = vec![trivial_rep(ctx.clone())];
    match fixture {
        "triv" => {}
        "kz2" | "kz2-trivial" => {
            let sign = character_rep(
                ctx.clone(),
                &[Scalar::one(field), Scalar::from_int(field, -1)],
                "sign",
            )
            .expect("sign character of Z/2");
            out.push(sign);
            out.push(regular_rep(ctx.clone()));
        }
        "kz4" => {
            for k in 1..4i64 {
                let vals: Vec<Scalar> = (0..4i64).map(|a| Scalar::root_pow(field, k * a)).collect();
                out.push(
                    character_rep(ctx.clone(), &vals, &format!("chi{}", k))
                        .expect("character of Z/4"),
                );
            }
            out.push(regular_rep(ctx.clone()));
        }
        "h4" => {
            let sign = character_rep(
                ctx.clone(),
                &[
                    Scalar::one(field),
                    Scalar::from_int(field, -1),
                    Scalar::zero(field),
                    Scalar::zero(field),
                ],
                "sign",
            )
            .expect("sign character");
            out.push(sign);
            out.push(std2(ctx));
            out.push(regular_rep(ctx.clone()));
        }
        "dh4" => {
            // character from the pair (group-like g of the factor, sign
            // character): values f_i (x) e_j |-> f_i(g) * sign(e_j)
            let mut vals = vec![Scalar::zero(field); 16];
            let fg = [
                Scalar::zero(field),
                Scalar::one(field),
                Scalar::zero(field),
                Scalar::zero(field),
            ]; // f_i(g)
            let sg = [
                Scalar::one(field),
                Scalar::from_int(field, -1),
                Scalar::zero(field),
                Scalar::zero(field),
            ];
            for i in 0..4 {
                for j in 0..4 {
                    vals[i * 4 + j] = fg[i].mul(&sg[j]);
                }
            }
            out.push(character_rep(ctx.clone(), &vals, "sign").expect("double character"));
            out.push(adj4(ctx));
        }
        _ => {}
    }
    out
}

/// Two-dimensional module of the nilpotent extension: g = diag(1,-1),
/// x = e_{12}.
fn std2(ctx: &Rc<HopfCtx>) -> Rep {
    let field = ctx.field();
    let one = Scalar::one(field);
    let neg = one.neg();
    let mut action = Tensor::zeros(field, vec![4, 2, 2]);
    // basis order of the algebra: 1, g, x, gx
    action.add_at(&[0, 0, 0], &one);
    action.add_at(&[0, 1, 1], &one);
    action.add_at(&[1, 0, 0], &one);
    action.add_at(&[1, 1, 1], &neg);
    action.add_at(&[2, 1, 0], &one); // x . v_1 = v_0
    action.add_at(&[3, 1, 0], &one); // gx . v_1 = g . v_0 = v_0
    Rep::new(ctx.clone(), "std2", 2, action)
}

/// The factor algebra as a module over its double: the algebra part acts by
/// left multiplication, the dual part through the twisted coadjoint
/// coaction delta(a) = a_2 (x) a_3 Sinv(a_1), i.e. f . a = a_2 f(a_3 Sinv(a_1)).
fn adj4(ctx: &Rc<HopfCtx>) -> Rep {
    let field = ctx.field();
    let base = crate::fixtures::h4();
    let d = base.dim;
    assert_eq!(ctx.u.dim, d * d, "adj4 expects the double of the 4-dim factor");
    let sinv = base.antipode.inverse().expect("invertible antipode");
    // coaction [a, out, k]: coefficient of e_out (x) f_k in delta(e_a)
    let coact = {
        let t = base.comult_iter(2); // [a, a1, a2, a3]
        let t = t.contract(&sinv.to_tensor(), &[(1, 1)]); // [a, mid, a3, c]
        t.contract(&base.mult, &[(2, 0), (3, 1)]) // [a, mid, k]
    };
    let mut action = Tensor::zeros(field, vec![d * d, d, d]);
    // (f_i (x) e_j) . a = f_i . (e_j a)
    for i in 0..d {
        for j in 0..d {
            for a in 0..d {
                for m in 0..d {
                    let c1 = base.mult.get(&[j, a, m]);
                    if c1.is_zero() {
                        continue;
                    }
                    for outp in 0..d {
                        let c2 = coact.get(&[m, outp, i]);
                        if c2.is_zero() {
                            continue;
                        }
                        action.add_at(&[i * d + j, a, outp], &c1.mul(&c2));
                    }
                }
            }
        }
    }
    Rep::new(ctx.clone(), "adj4", d, action)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::hopf::HopfCtx;

    fn ctx_of(name: &str) -> Rc<HopfCtx> {
        HopfCtx::new(fixtures::by_name(name).unwrap()).unwrap()
    }

    #[test]
    fn all_fixture_reps_pass_module_axioms() {
        for name in fixtures::BUNDLED {
            let ctx = ctx_of(name);
            for r in fixture_reps(&ctx, name) {
                let rep = r.check();
                assert!(rep.passed, "{} / {}: {:?}", name, r.name, rep.failures);
            }
        }
    }

    #[test]
    fn tensor_and_duals_are_modules() {
        let ctx = ctx_of("h4");
        let reps = fixture_reps(&ctx, "h4");
        for a in &reps {
            assert!(a.dual().check().passed);
            assert!(a.dual_right().check().passed);
            for b in &reps {
                assert!(a.tensor(b).check().passed);
            }
        }
    }

    #[test]
    fn braiding_intertwines_and_inverts() {
        for name in ["kz2", "kz4", "h4", "dh4"] {
            let ctx = ctx_of(name);
            let reps = fixture_reps(&ctx, name);
            for a in reps.iter().take(3) {
                for b in reps.iter().take(3) {
                    let c = a.braiding(b);
                    let cinv = a.braiding_inv(b);
                    let ab = a.tensor(b);
                    let ba = b.tensor(a);
                    // intertwiner property
                    for h in 0..ctx.u.dim {
                        let lhs = c.mul(&ab.act_basis(h));
                        let rhs = ba.act_basis(h).mul(&c);
                        assert_eq!(lhs, rhs, "{}: braiding not equivariant", name);
                    }
                    // two-sided inverse
                    assert_eq!(
                        cinv.mul(&c),
                        Mat::identity(ctx.field(), ab.dim),
                        "{}: c^-1 c != id",
                        name
                    );
                    assert_eq!(c.mul(&cinv), Mat::identity(ctx.field(), ba.dim));
                }
            }
        }
    }

    #[test]
    fn braiding_agrees_with_comodule_route() {
        // c(x (x) y) = sum R(x_[1] (x) y_[1]) y_[0] (x) x_[0] where the
        // pairing uses the dual-basis coefficients of the coactions
        for name in ["kz2", "kz4", "h4"] {
            let ctx = ctx_of(name);
            let reps = fixture_reps(&ctx, name);
            let r = ctx.r.as_ref().unwrap();
            for v in reps.iter().take(3) {
                for w in reps.iter().take(3) {
                    let c = v.braiding(w);
                    let cv = v.coaction(); // [i, p, k]
                    let cw = w.coaction(); // [j, q, l]
                    let field = ctx.field();
                    let mut m = Mat::zeros(field, w.dim * v.dim, v.dim * w.dim);
                    let t = cv.contract(r, &[(2, 0)]); // [i, p, l']
                    let t2 = t.contract(&cw, &[(2, 2)]); // [i, p, j, q]
                    for (idx, val) in t2.iter() {
                        let (i, p, j, q) = (idx[0], idx[1], idx[2], idx[3]);
                        m.add_at(q * v.dim + p, i * w.dim + j, val);
                    }
                    assert_eq!(c, m, "{}: braiding routes disagree", name);
                }
            }
        }
    }

    #[test]
    fn twist_is_natural_and_balanced() {
        // theta natural automorphism; theta_{V(x)W} = c_{W,V} c_{V,W} (theta_V (x) theta_W)
        for name in ["kz2", "kz4", "h4"] {
            let ctx = ctx_of(name);
            let reps = fixture_reps(&ctx, name);
            for v in reps.iter().take(3) {
                let th = v.twist();
                assert_eq!(th.mul(&v.twist_inv()), Mat::identity(ctx.field(), v.dim));
                for h in 0..ctx.u.dim {
                    assert_eq!(th.mul(&v.act_basis(h)), v.act_basis(h).mul(&th));
                }
                for w in reps.iter().take(3) {
                    let vw = v.tensor(w);
                    let lhs = vw.twist();
                    let c1 = v.braiding(w);
                    let c2 = w.braiding(v);
                    let thv = v.twist().tensor_with(&w.twist());
                    let rhs = c2.mul(&c1).mul(&thv);
                    assert_eq!(lhs, rhs, "{}: balance law fails", name);
                }
            }
        }
    }

    #[test]
    fn double_dual_is_conjugation_by_pivotal() {
        for name in ["kz2", "kz4", "h4"] {
            let ctx = ctx_of(name);
            let piv = ctx.pivotal.clone().expect("ribbon fixtures have a pivotal");
            for v in fixture_reps(&ctx, name).iter().take(3) {
                let vdd = v.dual().dual();
                let f = v.act(&piv);
                // f must intertwine V -> V** and be invertible
                assert!(f.inverse().is_some());
                for h in 0..ctx.u.dim {
                    assert_eq!(f.mul(&v.act_basis(h)), vdd.act_basis(h).mul(&f), "{}", name);
                }
            }
        }
    }

    #[test]
    fn unit_summand_detection() {
        let ctx = ctx_of("kz2");
        let reps = fixture_reps(&ctx, "kz2");
        let triv = &reps[0];
        let sign = &reps[1];
        assert!(triv.has_unit_summand());
        assert!(!sign.has_unit_summand());
        assert!(triv.direct_sum(sign).has_unit_summand());
        assert!(regular_rep(ctx.clone()).has_unit_summand());
        // over the nilpotent extension the regular module has no unit
        // summand (it is projective indecomposable plus its twin)
        let ctx4 = ctx_of("h4");
        assert!(!regular_rep(ctx4.clone()).has_unit_summand());
        assert!(trivial_rep(ctx4.clone())
            .direct_sum(&regular_rep(ctx4.clone()))
            .has_unit_summand());
    }
}
