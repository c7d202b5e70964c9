//! Transmutation of the dual Hopf algebra: the braided function algebra on
//! the dual basis, its half-braiding against arbitrary modules, the
//! universal dinatural family, and the dictionary between left actions of
//! the braided algebra and half-braidings.

use std::rc::Rc;

use crate::error::EngineError;
use crate::hopf::{CheckReport, HopfCtx};
use crate::linalg::Mat;
use crate::rep::{coregular_rep, trivial_rep, Rep};
use crate::scalar::Scalar;
use crate::tensor::Tensor;

/// The braided Hopf algebra carried by the dual basis. As a coalgebra it is
/// the dual coalgebra unchanged; the product and antipode are deformed by
/// the co-R-form, and the base algebra acts by the coadjoint action.
pub struct Coend {
    pub ctx: Rc<HopfCtx>,
    pub dim: usize,
    /// coadjoint module structure on the dual basis
    pub carrier: Rep,
    /// prod[i, j, k]: coefficient of f_k in the braided product f_i f_j
    pub prod: Tensor,
    pub unit: Vec<Scalar>,
    /// comult[i, a, b]: coefficient of f_a (x) f_b, same as the dual coalgebra
    pub comult: Tensor,
    pub counit: Vec<Scalar>,
    /// braided antipode
    pub antipode: Mat,
}

/// coadjoint action tensor [h, i, out]: e_h acts on f_i by h_2 |> f_i <| S(h_1)
fn coad_action(ctx: &HopfCtx) -> Tensor {
    let u = &ctx.u;
    let s = u.antipode.to_tensor();
    let tri = u.mult.permute(&[1, 2, 0]); // [h, i, out]: e_h |> f_i
    let tli = u.mult.permute(&[2, 0, 1]); // [i, h, out]: f_i <| e_h
    let t = u.comult.contract(&s, &[(1, 1)]); // [h, h2, s(h1)]
    let t = t.contract(&tri, &[(1, 0)]); // [h, s(h1), i, m]
    t.contract(&tli, &[(1, 1), (3, 0)]) // [h, i, out]
}

/// Coadjoint coaction [i, out, k]: f_i |-> f_out (x) f_k by phi_2 (x) S(phi_1) phi_3.
fn coad_coaction(ctx: &HopfCtx) -> Tensor {
    let o = &ctx.o;
    let so = o.antipode.to_tensor();
    let t = o.comult_iter(2); // [i, a, m, c]
    let t = t.contract(&so, &[(1, 1)]); // [i, m, c, s(a)]
    t.contract(&o.mult, &[(3, 0), (2, 1)]) // [i, m, k]
}

/// Braided product from the comodule-side formula
/// phi psi = R(S(phi_1) phi_3 (x) S(psi_1)) phi_2 psi_2.
fn braided_prod_comodule(ctx: &HopfCtx, rt: &Tensor) -> Tensor {
    let o = &ctx.o;
    let so = o.antipode.to_tensor();
    let cad = coad_coaction(ctx); // [i, m, z]
    let t = cad.contract(rt, &[(2, 0)]); // [i, m, q]
    let p2 = o.comult.contract(&so, &[(1, 1)]); // [j, n, s(b)]
    let t = t.contract(&p2, &[(2, 2)]); // [i, m, j, n]
    t.contract(&o.mult, &[(1, 0), (3, 1)]) // [i, j, k]
}

/// Braided product from the module-side formula
/// phi psi = (R'_i |> phi <| R'_j)(psi <| S(R''_i) R''_j), summed over two
/// copies of the R-matrix.
fn braided_prod_module(ctx: &HopfCtx, rt: &Tensor) -> Tensor {
    let u = &ctx.u;
    let o = &ctx.o;
    let tri = u.mult.permute(&[1, 2, 0]); // [h, i, out]
    let tli = u.mult.permute(&[2, 0, 1]); // [i, h, out]
    let s = u.antipode.to_tensor();
    let tri_r = rt.contract(&tri, &[(0, 0)]); // [q1, i, out]
    let phi = tli.contract(rt, &[(1, 0)]); // [i, m, q2]
    let phi = phi.contract(&tri_r, &[(1, 1)]); // [i, q2, q1, x]
    let w = s.contract(&u.mult, &[(0, 0)]); // [q1, q2, y]: S(R''_i) R''_j
    let psi = tli.contract(&w, &[(1, 2)]); // [j, n, q1, q2]
    let z = phi.contract(&psi, &[(1, 3), (2, 2)]); // [i, x, j, n]
    z.contract(&o.mult, &[(1, 0), (3, 1)]) // [i, j, k]
}

/// Braided antipode S(phi) = R(S^2(phi_3) S(phi_1) (x) phi_4) S(phi_2).
fn braided_antipode(ctx: &HopfCtx, rt: &Tensor) -> Mat {
    let o = &ctx.o;
    let so = o.antipode.to_tensor();
    let so2 = o.antipode.mul(&o.antipode).to_tensor();
    let t = o.comult_iter(3); // [i, a, b, c, d]
    let t = t.contract(&so, &[(1, 1)]); // [i, b, c, d, s(a)]
    let t = t.contract(&so2, &[(2, 1)]); // [i, b, d, s(a), s2(c)]
    let t = t.contract(&o.mult, &[(4, 0), (3, 1)]); // [i, b, d, z]
    let t = t.contract(rt, &[(3, 0), (2, 1)]); // [i, b]
    let t = t.contract(&so, &[(1, 1)]); // [i, out]
    Mat::from_tensor(&t).transpose()
}

pub fn transmute(ctx: &Rc<HopfCtx>) -> Result<Coend, EngineError> {
    let rt = ctx
        .r
        .as_ref()
        .ok_or_else(|| {
            EngineError::Input("transmutation requires a quasitriangular structure".to_string())
        })?
        .clone();
    let d = ctx.u.dim;
    let carrier = Rep::new(ctx.clone(), "transmutation", d, coad_action(ctx));
    let prod = braided_prod_comodule(ctx, &rt);
    let antipode = braided_antipode(ctx, &rt);
    Ok(Coend {
        ctx: ctx.clone(),
        dim: d,
        carrier,
        prod,
        unit: ctx.o.unit.clone(),
        comult: ctx.o.comult.clone(),
        counit: ctx.o.counit.clone(),
        antipode,
    })
}

impl Coend {
    /// Product as a matrix [dim x dim^2].
    pub fn prod_mat(&self) -> Mat {
        let d = self.dim;
        let mut m = Mat::zeros(self.ctx.field(), d, d * d);
        for (idx, v) in self.prod.iter() {
            m.add_at(idx[2], idx[0] * d + idx[1], v);
        }
        m
    }

    /// Coproduct as a matrix [dim^2 x dim].
    pub fn comult_mat(&self) -> Mat {
        let d = self.dim;
        let mut m = Mat::zeros(self.ctx.field(), d * d, d);
        for (idx, v) in self.comult.iter() {
            m.add_at(idx[1] * d + idx[2], idx[0], v);
        }
        m
    }

    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let ta = Tensor::from_vec(self.ctx.field(), a);
        let tb = Tensor::from_vec(self.ctx.field(), b);
        let m = ta.contract(&self.prod, &[(0, 0)]);
        tb.contract(&m, &[(0, 0)]).to_vec()
    }
}

/// Half-braiding of the braided algebra past a module:
/// phi (x) v |-> R(v_1 (x) phi_1) R(phi_3 (x) v_2) v_0 (x) phi_2.
pub fn sigma(cd: &Coend, v: &Rep) -> Mat {
    let o = &cd.ctx.o;
    let rt = cd.ctx.r.as_ref().unwrap();
    let co2 = v.coaction_iter(2); // [i, v0, k1, k2]
    let t = o.comult_iter(2); // [p, a, m, c]
    let t = t.contract(rt, &[(1, 1)]); // [p, m, c, k1o]
    let t = t.contract(rt, &[(2, 0)]); // [p, m, k1o, k2o]
    let t = t.contract(&co2, &[(2, 2), (3, 3)]); // [p, m, i, v0]
    let (dl, dv) = (cd.dim, v.dim);
    let mut mat = Mat::zeros(cd.ctx.field(), dv * dl, dl * dv);
    for (idx, val) in t.iter() {
        let (p, m, i, v0) = (idx[0], idx[1], idx[2], idx[3]);
        mat.add_at(v0 * dl + m, p * dv + i, val);
    }
    mat
}

/// Inverse of `sigma`, from the closed formula
/// v (x) phi |-> R(v_2 (x) S(phi_1)) R^{-1}(phi_3 (x) v_1) phi_2 (x) v_0.
pub fn sigma_inv(cd: &Coend, v: &Rep) -> Mat {
    let o = &cd.ctx.o;
    let rt = cd.ctx.r.as_ref().unwrap();
    let ri = cd.ctx.r_inv.as_ref().unwrap();
    let so = o.antipode.to_tensor();
    let co2 = v.coaction_iter(2);
    let t = o.comult_iter(2); // [p, a, m, c]
    let t = t.contract(&so, &[(1, 1)]); // [p, m, c, s(a)]
    let t = t.contract(rt, &[(3, 1)]); // [p, m, c, k2o]
    let t = t.contract(ri, &[(2, 0)]); // [p, m, k2o, k1o]
    let t = t.contract(&co2, &[(3, 2), (2, 3)]); // [p, m, i, v0]
    let (dl, dv) = (cd.dim, v.dim);
    let mut mat = Mat::zeros(cd.ctx.field(), dl * dv, dv * dl);
    for (idx, val) in t.iter() {
        let (p, m, i, v0) = (idx[0], idx[1], idx[2], idx[3]);
        mat.add_at(m * dv + v0, i * dl + p, val);
    }
    mat
}

/// Universal dinatural map X* (x) X -> carrier, f (x) x |-> f(x_0) x_1.
pub fn dinat(cd: &Coend, x: &Rep) -> Mat {
    let co = x.coaction(); // [b, out, k]
    let (dl, dx) = (cd.dim, x.dim);
    let mut m = Mat::zeros(cd.ctx.field(), dl, dx * dx);
    for (idx, val) in co.iter() {
        let (b, a, k) = (idx[0], idx[1], idx[2]);
        m.add_at(k, a * dx + b, val);
    }
    m
}

/// A family of invertible maps rep (x) X -> X (x) rep, natural in X and
/// multiplicative in the tensor product.
pub struct HalfBraiding {
    pub rep: Rep,
    gen: Box<dyn Fn(&Rep) -> Mat>,
}

impl HalfBraiding {
    pub fn new(rep: Rep, gen: Box<dyn Fn(&Rep) -> Mat>) -> HalfBraiding {
        HalfBraiding { rep, gen }
    }

    pub fn at(&self, x: &Rep) -> Mat {
        (self.gen)(x)
    }

    /// Laws: identity at the unit object, invertibility at each witness,
    /// multiplicativity over tensor pairs, naturality against intertwiner
    /// bases.
    pub fn check(&self, witnesses: &[Rep]) -> CheckReport {
        let mut report = CheckReport::new("half-braiding");
        let field = self.rep.ctx.field();
        let dv = self.rep.dim;
        let one = trivial_rep(self.rep.ctx.clone());
        let t1 = self.at(&one);
        report.expect_zero(
            "identity at the unit object",
            &t1.sub(&Mat::identity(field, dv)).to_tensor(),
            2,
        );
        for x in witnesses {
            let tx = self.at(x);
            match tx.inverse() {
                None => report.fail(
                    "invertible",
                    x.name.clone(),
                    "half-braiding component is singular".to_string(),
                ),
                Some(_) => {}
            }
            for y in witnesses {
                let txy = self.at(&x.tensor(y));
                let ty = self.at(y);
                let idx = Mat::identity(field, x.dim);
                let idy = Mat::identity(field, y.dim);
                let rhs = idx.tensor_with(&ty).mul(&tx.tensor_with(&idy));
                report.expect_zero(
                    &format!("multiplicative on ({}, {})", x.name, y.name),
                    &txy.sub(&rhs).to_tensor(),
                    2,
                );
                let idv = Mat::identity(field, dv);
                for (fi, f) in x.hom_space(y).iter().enumerate() {
                    let lhs = f.tensor_with(&idv).mul(&tx);
                    let rhs = ty.mul(&idv.tensor_with(f));
                    report.expect_zero(
                        &format!("natural along hom {} -> {} #{}", x.name, y.name, fi),
                        &lhs.sub(&rhs).to_tensor(),
                        2,
                    );
                }
            }
        }
        report
    }
}

/// The half-braiding components of the transmutation carrier.
pub fn sigma_halfbraiding(cd: &Rc<Coend>) -> HalfBraiding {
    let cd2 = cd.clone();
    HalfBraiding::new(cd.carrier.clone(), Box::new(move |x| sigma(&cd2, x)))
}

/// Left action of the braided algebra on the carrier of a half-braiding:
/// phi . v = R(phi_2 (x) v_1) (counit (x) id) t(v_0 (x) phi_1), with t taken
/// at the coregular comodule.
pub fn action_from_halfbraiding(cd: &Coend, t: &HalfBraiding) -> Tensor {
    let ctx = &cd.ctx;
    let o = &ctx.o;
    let rt = ctx.r.as_ref().unwrap();
    let oreg = coregular_rep(ctx);
    let tmat = t.at(&oreg); // V (x) O -> O (x) V
    let (d, dv) = (cd.dim, t.rep.dim);
    let t4 = tmat.to_tensor().reshape(vec![d, dv, dv, d]); // [x, j, vin, a]
    let eps = Tensor::from_vec(ctx.field(), &o.counit);
    let t3 = t4.contract(&eps, &[(0, 0)]); // [j, vin, a]
    let x1 = t3.contract(&o.comult, &[(2, 1)]); // [j, vin, p, m]
    let x2 = x1.contract(rt, &[(3, 0)]); // [j, vin, p, ko]
    let co = t.rep.coaction();
    let x3 = x2.contract(&co, &[(1, 1), (3, 2)]); // [j, p, i]
    x3.permute(&[1, 2, 0]) // [p, i, j]
}

/// Half-braiding generated by a left action `lambda` [dim, dv, dv] of the
/// braided algebra: t_X(m (x) x) = R^{-1}(x_2 (x) m_1) x_0 (x) (x_1 . m_0).
pub fn halfbraiding_from_action(cd: &Coend, rep: &Rep, lambda: &Tensor) -> HalfBraiding {
    assert_eq!(lambda.shape, vec![cd.dim, rep.dim, rep.dim]);
    let ctx = cd.ctx.clone();
    let rep_c = rep.clone();
    let lam = lambda.clone();
    let gen = Box::new(move |x: &Rep| -> Mat {
        let ri = ctx.r_inv.as_ref().unwrap();
        let com = rep_c.coaction(); // [i, m0, km]
        let cx2 = x.coaction_iter(2); // [b, x0, k1, k2]
        let t = cx2.contract(ri, &[(3, 0)]); // [b, x0, k1, ko]
        let t = t.contract(&com, &[(3, 2)]); // [b, x0, k1, i, m0]
        let t = t.contract(&lam, &[(2, 0), (4, 1)]); // [b, x0, i, j]
        let (dv, dx) = (rep_c.dim, x.dim);
        let mut m = Mat::zeros(ctx.field(), dx * dv, dv * dx);
        for (idx, val) in t.iter() {
            let (b, x0, i, j) = (idx[0], idx[1], idx[2], idx[3]);
            m.add_at(x0 * dv + j, i * dx + b, val);
        }
        m
    });
    HalfBraiding::new(rep.clone(), gen)
}

/// Laws for a left action of the braided algebra carried by a module:
/// unital, multiplicative over the braided product, equivariant.
pub fn check_l_action(cd: &Coend, rep: &Rep, lambda: &Tensor) -> CheckReport {
    let mut report = CheckReport::new("braided-algebra action");
    let field = cd.ctx.field();
    let unit_t = Tensor::from_vec(field, &cd.unit);
    let ua = unit_t.contract(lambda, &[(0, 0)]);
    report.expect_zero(
        "unit acts as identity",
        &ua.sub(&Tensor::identity(field, rep.dim)),
        1,
    );
    let lhs = cd.prod.contract(lambda, &[(2, 0)]); // [p, q, i, j]
    let rhs = lambda.contract(lambda, &[(2, 1)]).permute(&[2, 0, 1, 3]);
    report.expect_zero("action multiplicative", &lhs.sub(&rhs), 3);
    // equivariance: the action map carrier (x) rep -> rep intertwines
    let lv = cd.carrier.tensor(rep);
    let d = cd.dim;
    let mut lmat = Mat::zeros(field, rep.dim, d * rep.dim);
    for (idx, v) in lambda.iter() {
        lmat.add_at(idx[2], idx[0] * rep.dim + idx[1], v);
    }
    for h in 0..d {
        let a = rep.act_basis(h).mul(&lmat);
        let b = lmat.mul(&lv.act_basis(h));
        report.expect_zero(&format!("action equivariant at e_{}", h), &a.sub(&b).to_tensor(), 2);
    }
    report
}

/// The canonical half-braiding of the carrier on itself, generated by the
/// braided product as a left action (braided commutativity makes this
/// lawful).
pub fn tau_halfbraiding(cd: &Coend) -> HalfBraiding {
    halfbraiding_from_action(cd, &cd.carrier, &cd.prod)
}

/// Full law battery for a transmutation: algebra laws, equivariance, dual
/// product routes, antipode, half-braiding items, and dinaturality, checked
/// on the carrier and on each provided module.
pub fn check_coend_laws(cd: &Coend, reps: &[Rep]) -> CheckReport {
    let mut report = CheckReport::new("transmutation");
    let ctx = &cd.ctx;
    let field = ctx.field();
    let d = cd.dim;

    report.merge(cd.carrier.check());
    report.expect_zero(
        "coaction matches the coadjoint action",
        &cd.carrier.coaction().sub(&coad_coaction(ctx)),
        1,
    );

    let lhs = cd.prod.contract(&cd.prod, &[(2, 0)]);
    let rhs = cd.prod.contract(&cd.prod, &[(2, 1)]).permute(&[2, 0, 1, 3]);
    report.expect_zero("product associative", &lhs.sub(&rhs), 3);

    let unit_t = Tensor::from_vec(field, &cd.unit);
    let id = Tensor::identity(field, d);
    report.expect_zero(
        "left unit",
        &unit_t.contract(&cd.prod, &[(0, 0)]).sub(&id),
        1,
    );
    report.expect_zero(
        "right unit",
        &unit_t.contract(&cd.prod, &[(0, 1)]).sub(&id),
        1,
    );

    let rt = ctx.r.as_ref().unwrap();
    report.expect_zero(
        "product dual route agreement",
        &cd.prod.sub(&braided_prod_module(ctx, rt)),
        2,
    );

    // algebra object in the module category: product and unit equivariant
    let ll = cd.carrier.tensor(&cd.carrier);
    let pm = cd.prod_mat();
    for h in 0..ctx.u.dim {
        let a = cd.carrier.act_basis(h).mul(&pm);
        let b = pm.mul(&ll.act_basis(h));
        report.expect_zero(&format!("product equivariant at e_{}", h), &a.sub(&b).to_tensor(), 2);
        let hu = cd.carrier.act_basis(h).apply(&cd.unit);
        let eps_h = ctx.u.counit[h].clone();
        let want: Vec<Scalar> = cd.unit.iter().map(|c| c.mul(&eps_h)).collect();
        let diff: Vec<Scalar> = hu.iter().zip(&want).map(|(x, y)| x.sub(y)).collect();
        report.expect_zero(
            &format!("unit equivariant at e_{}", h),
            &Tensor::from_vec(field, &diff),
            1,
        );
    }

    // braided antipode axiom, both sides
    let st = cd.antipode.to_tensor();
    let eta_eps = {
        let mut t = Tensor::zeros(field, vec![d, d]);
        for i in 0..d {
            for k in 0..d {
                let v = cd.counit[i].mul(&cd.unit[k]);
                t.add_at(&[i, k], &v);
            }
        }
        t
    };
    let t = cd.comult.contract(&st, &[(1, 1)]); // [i, b, s(a)]
    let lhs = t.contract(&cd.prod, &[(2, 0), (1, 1)]); // [i, k]
    report.expect_zero("antipode axiom left", &lhs.sub(&eta_eps), 1);
    let t = cd.comult.contract(&st, &[(2, 1)]); // [i, a, s(b)]
    let rhs = t.contract(&cd.prod, &[(1, 0), (2, 1)]); // [i, k]
    report.expect_zero("antipode axiom right", &rhs.sub(&eta_eps), 1);
    // antipode is a morphism in the category
    for h in 0..ctx.u.dim {
        let a = cd.carrier.act_basis(h).mul(&cd.antipode);
        let b = cd.antipode.mul(&cd.carrier.act_basis(h));
        report.expect_zero(
            &format!("antipode equivariant at e_{}", h),
            &a.sub(&b).to_tensor(),
            2,
        );
    }

    // braided commutativity: prod o sigma_carrier = prod
    let sl = sigma(cd, &cd.carrier);
    report.expect_zero(
        "braided commutativity",
        &pm.mul(&sl).sub(&pm).to_tensor(),
        2,
    );

    let cm = cd.comult_mat();
    let idl = Mat::identity(field, d);
    for x in reps {
        let sx = sigma(cd, x);
        let sxi = sigma_inv(cd, x);
        let idn = Mat::identity(field, d * x.dim);
        report.expect_zero(
            &format!("sigma inverse ({})", x.name),
            &sxi.mul(&sx).sub(&idn).to_tensor(),
            2,
        );
        let idm = Mat::identity(field, x.dim * d);
        report.expect_zero(
            &format!("sigma two-sided inverse ({})", x.name),
            &sx.mul(&sxi).sub(&idm).to_tensor(),
            2,
        );

        let idx = Mat::identity(field, x.dim);
        // the product is a morphism of half-braided objects
        let lhs3 = sx.mul(&pm.tensor_with(&idx));
        let rhs3 = idx.tensor_with(&pm).mul(&sx.tensor_with(&idl).mul(&idl.tensor_with(&sx)));
        report.expect_zero(
            &format!("product central ({})", x.name),
            &lhs3.sub(&rhs3).to_tensor(),
            2,
        );

        // coproduct exchange, both routes
        let lhs4 = idx.tensor_with(&cm).mul(&sx);
        let c_lx = cd.carrier.braiding(x); // carrier (x) X -> X (x) carrier
        let rhs4a = sx.tensor_with(&idl).mul(&idl.tensor_with(&c_lx)).mul(&cm.tensor_with(&idx));
        report.expect_zero(
            &format!("coproduct exchange a ({})", x.name),
            &lhs4.sub(&rhs4a).to_tensor(),
            2,
        );
        let c_xl_inv = x.braiding_inv(&cd.carrier); // carrier (x) X -> X (x) carrier
        let rhs4b = c_xl_inv.tensor_with(&idl).mul(&idl.tensor_with(&sx)).mul(&cm.tensor_with(&idx));
        report.expect_zero(
            &format!("coproduct exchange b ({})", x.name),
            &lhs4.sub(&rhs4b).to_tensor(),
            2,
        );

        // dinaturality data: equivariance of the universal family
        let ix = dinat(cd, x);
        let xx = x.dual().tensor(x);
        for h in 0..ctx.u.dim {
            let a = cd.carrier.act_basis(h).mul(&ix);
            let b = ix.mul(&xx.act_basis(h));
            report.expect_zero(
                &format!("dinat equivariant ({}) at e_{}", x.name, h),
                &a.sub(&b).to_tensor(),
                2,
            );
        }
    }

    // half-braiding multiplicativity and sigma-naturality over ordered pairs
    for x in reps {
        for y in reps {
            let sxy = sigma(cd, &x.tensor(y));
            let sx = sigma(cd, x);
            let sy = sigma(cd, y);
            let idx = Mat::identity(field, x.dim);
            let idy = Mat::identity(field, y.dim);
            let rhs = idx.tensor_with(&sy).mul(&sx.tensor_with(&idy));
            report.expect_zero(
                &format!("sigma multiplicative ({}, {})", x.name, y.name),
                &sxy.sub(&rhs).to_tensor(),
                2,
            );
            for (fi, f) in x.hom_space(y).iter().enumerate() {
                let lhs = f.tensor_with(&idl).mul(&sx);
                let rhs = sy.mul(&idl.tensor_with(f));
                report.expect_zero(
                    &format!("sigma natural {} -> {} #{}", x.name, y.name, fi),
                    &lhs.sub(&rhs).to_tensor(),
                    2,
                );
                // dinaturality along f: i_X (f^T (x) id) = i_Y (id (x) f)
                let ix = dinat(cd, x);
                let iy = dinat(cd, y);
                let a = ix.mul(&f.transpose().tensor_with(&idx));
                let b = iy.mul(&Mat::identity(field, y.dim).tensor_with(f));
                report.expect_zero(
                    &format!("dinatural {} -> {} #{}", x.name, y.name, fi),
                    &a.sub(&b).to_tensor(),
                    2,
                );
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rep::{fixture_reps, regular_rep};

    fn ctx_for(name: &str) -> Rc<HopfCtx> {
        HopfCtx::new(fixtures::by_name(name).unwrap()).unwrap()
    }

    #[test]
    fn all_fixtures_pass_transmutation_laws() {
        for name in fixtures::BUNDLED {
            let ctx = ctx_for(name);
            let cd = transmute(&ctx).unwrap();
            let reps = fixture_reps(&ctx, name);
            let report = check_coend_laws(&cd, &reps);
            assert!(report.passed, "{}: {:?}", name, report.failures);
        }
    }

    #[test]
    fn trivial_r_collapses_to_the_dual_product() {
        let ctx = ctx_for("kz2-trivial");
        let cd = transmute(&ctx).unwrap();
        assert!(cd.prod.sub(&ctx.o.mult).is_zero());
        assert!(cd.antipode.sub(&ctx.o.antipode).is_zero());
        // one-dimensional case: plain field multiplication
        let ctx1 = ctx_for("triv");
        let cd1 = transmute(&ctx1).unwrap();
        assert_eq!(cd1.dim, 1);
        assert_eq!(cd1.prod.get(&[0, 0, 0]), Scalar::one(ctx1.field()));
    }

    #[test]
    fn cocommutative_base_has_trivial_coadjoint_coaction() {
        // phi |-> phi (x) unit when the base is commutative and cocommutative
        let ctx = ctx_for("kz2");
        let cd = transmute(&ctx).unwrap();
        let co = cd.carrier.coaction();
        let mut want = Tensor::zeros(ctx.field(), vec![2, 2, 2]);
        for i in 0..2 {
            for k in 0..2 {
                want.add_at(&[i, i, k], &cd.ctx.o.unit[k]);
            }
        }
        assert!(co.sub(&want).is_zero());
    }

    #[test]
    fn sigma_trivial_cases() {
        let ctx = ctx_for("kz2");
        let cd = transmute(&ctx).unwrap();
        let one = trivial_rep(ctx.clone());
        let s1 = sigma(&cd, &one);
        assert!(s1.sub(&Mat::identity(ctx.field(), cd.dim)).is_zero());

        // with the trivial R-matrix sigma is the flip
        let ctx2 = ctx_for("kz2-trivial");
        let cd2 = transmute(&ctx2).unwrap();
        let reg = regular_rep(ctx2.clone());
        let s = sigma(&cd2, &reg);
        let (dl, dv) = (cd2.dim, reg.dim);
        let mut flip = Mat::zeros(ctx2.field(), dv * dl, dl * dv);
        for p in 0..dl {
            for i in 0..dv {
                flip.add_at(i * dl + p, p * dv + i, &Scalar::one(ctx2.field()));
            }
        }
        assert!(s.sub(&flip).is_zero());

        // nondegenerate 2x2 case: the printed inverse inverts the 4x4 matrix
        let reg1 = regular_rep(ctx.clone());
        let s4 = sigma(&cd, &reg1);
        assert_eq!((s4.rows, s4.cols), (4, 4));
        assert!(s4.mul(&sigma_inv(&cd, &reg1)).sub(&Mat::identity(ctx.field(), 4)).is_zero());
    }

    #[test]
    fn dinat_examples() {
        let ctx = ctx_for("kz2");
        let cd = transmute(&ctx).unwrap();
        // at the unit object the dinatural map is the unit of the algebra
        let one = trivial_rep(ctx.clone());
        let i1 = dinat(&cd, &one);
        for k in 0..cd.dim {
            assert_eq!(i1.get(k, 0), &cd.unit[k]);
        }
        // matrix coefficients of the regular module span the carrier
        let reg = regular_rep(ctx.clone());
        assert_eq!(dinat(&cd, &reg).rank(), cd.dim);
        // dinaturality witness: the swap automorphism of X (+) X
        let xx = reg.direct_sum(&reg);
        let ixx = dinat(&cd, &xx);
        let mut swap = Mat::zeros(ctx.field(), 4, 4);
        for i in 0..2 {
            swap.add_at(i, 2 + i, &Scalar::one(ctx.field()));
            swap.add_at(2 + i, i, &Scalar::one(ctx.field()));
        }
        let id4 = Mat::identity(ctx.field(), 4);
        let a = ixx.mul(&swap.transpose().tensor_with(&id4));
        let b = ixx.mul(&id4.tensor_with(&swap));
        assert!(a.sub(&b).is_zero());
    }

    #[test]
    fn halfbraiding_dictionary_roundtrips() {
        for name in ["kz2", "kz4", "h4"] {
            let ctx = ctx_for(name);
            let cd = Rc::new(transmute(&ctx).unwrap());
            let reps = fixture_reps(&ctx, name);
            let sig = sigma_halfbraiding(&cd);
            assert!(sig.check(&reps).passed, "{}: sigma fails half-braiding laws", name);
            let lam = action_from_halfbraiding(&cd, &sig);
            assert!(check_l_action(&cd, &cd.carrier, &lam).passed, "{}", name);
            let back = halfbraiding_from_action(&cd, &cd.carrier, &lam);
            for x in &reps {
                assert!(back.at(x).sub(&sig.at(x)).is_zero(), "{} at {}", name, x.name);
            }
            // action -> half-braiding -> action, starting from the product
            let tau = tau_halfbraiding(&cd);
            let lam2 = action_from_halfbraiding(&cd, &tau);
            assert!(lam2.sub(&cd.prod).is_zero(), "{}", name);
        }
    }

    #[test]
    fn tau_is_braided_cocommutative() {
        for name in ["kz2", "kz4", "h4", "dh4"] {
            let ctx = ctx_for(name);
            let cd = Rc::new(transmute(&ctx).unwrap());
            let tau = tau_halfbraiding(&cd);
            let cm = cd.comult_mat();
            let tl = tau.at(&cd.carrier);
            assert!(tl.mul(&cm).sub(&cm).is_zero(), "{}", name);
            // the coproduct intertwines tau with its doubled components
            for x in fixture_reps(&ctx, name) {
                let tx = tau.at(&x);
                let idx = Mat::identity(ctx.field(), x.dim);
                let idl = Mat::identity(ctx.field(), cd.dim);
                let lhs = idx.tensor_with(&cm).mul(&tx);
                let rhs = tx.tensor_with(&idl).mul(&idl.tensor_with(&tx)).mul(&cm.tensor_with(&idx));
                assert!(lhs.sub(&rhs).is_zero(), "{} at {}", name, x.name);
            }
        }
    }

    #[test]
    fn tau_passes_halfbraiding_laws() {
        let ctx = ctx_for("h4");
        let cd = Rc::new(transmute(&ctx).unwrap());
        let tau = tau_halfbraiding(&cd);
        let reps = fixture_reps(&ctx, "h4");
        assert!(tau.check(&reps).passed);
    }
}
