//! Matrix algebras internal to the module category: endomorphism algebras
//! with their canonical structure morphism, hom bimodules between them,
//! the interchange isomorphisms onto braided products, decomposition of
//! compatible bimodules into hom summands, and the induced functor into
//! the Morita category.

use crate::drinfeld::{is_factorizable, DrinfeldMap};
use crate::error::{EngineError, Result};
use crate::hopf::CheckReport;
use crate::linalg::Mat;
use crate::morita::{
    bimodule_iso, braided_tensor_algebras, braided_tensor_bimodules, braiding_bimodule,
    check_l_compatible, compose_bimodules, same_algebra, twist_right, Bimodule, ComodAlg,
    IsoCertificate, LLinAlg,
};
use crate::rep::{trivial_rep, Rep};
use crate::scalar::Scalar;
use crate::tensor::Tensor;
use std::rc::Rc;

/// Composition-of-matrices tensor: [(x,y), (y,z), (x,z)] with the middle
/// index contracted.
fn compose_product(field: crate::scalar::FieldDesc, dl: usize, dm: usize, dr: usize) -> Tensor {
    let one = Scalar::one(field);
    let mut t = Tensor::zeros(field, vec![dl * dm, dm * dr, dl * dr]);
    for x in 0..dl {
        for y in 0..dm {
            for z in 0..dr {
                t.add_at(&[x * dm + y, y * dr + z, x * dr + z], &one);
            }
        }
    }
    t
}

/// Coefficients of the representing matrices: mat[(w,x)][h] is the (w,x)
/// entry of the action of e_h. This is the moment map of a matrix algebra
/// when the structure is factorizable.
pub fn rep_moment_matrix(v: &Rep) -> Mat {
    let d = v.dim;
    let mut m = Mat::zeros(v.ctx.field(), d * d, v.ctx.u.dim);
    for (idx, val) in v.action.iter() {
        m.add_at(idx[2] * d + idx[1], idx[0], val);
    }
    m
}

/// Endomorphism algebra of a module with the composition product; the
/// structure morphism represents the image of the canonical map.
pub fn internal_end(dm: &DrinfeldMap, v: &Rep) -> Rc<LLinAlg> {
    let field = v.ctx.field();
    let d = v.dim;
    let carrier = v.tensor(&v.dual());
    let mut unit = vec![Scalar::zero(field); d * d];
    for w in 0..d {
        unit[w * d + w] = Scalar::one(field);
    }
    let base = ComodAlg {
        name: format!("End({})", v.name),
        carrier,
        prod: compose_product(field, d, d, d),
        unit,
    };
    let dmap = rep_moment_matrix(v).mul(&dm.mat);
    LLinAlg::new(dm.cd.clone(), base, dmap, None)
}

/// Maps V -> W as a bimodule over (End(W), End(V)), acting by
/// composition on either side.
pub fn internal_hom(dm: &DrinfeldMap, v: &Rep, w: &Rep) -> Bimodule {
    let field = v.ctx.field();
    let (dv, dw) = (v.dim, w.dim);
    Bimodule {
        name: format!("Hom({},{})", v.name, w.name),
        left: internal_end(dm, w),
        right: internal_end(dm, v),
        carrier: w.tensor(&v.dual()),
        left_action: compose_product(field, dw, dw, dv),
        right_action: compose_product(field, dw, dv, dv),
    }
}

/// The closed-form half-braiding of a hom bimodule at X: braid the source
/// dual leg backwards past X, then the target leg forwards.
pub fn hom_halfbraiding_formula(v: &Rep, w: &Rep, x: &Rep) -> Mat {
    let field = v.ctx.field();
    let vstar = v.dual();
    let m1 = Mat::identity(field, w.dim).tensor_with(&x.braiding_inv(&vstar));
    let m2 = w.braiding(x).tensor_with(&Mat::identity(field, v.dim));
    m2.mul(&m1)
}

/// Interchange isomorphism Hom(U,W) (x)~ Hom(V,Z) -> Hom(U (x) V, W (x) Z):
/// braid the U-dual leg past the second hom space, then repack indices.
pub fn hom_monoidal_iso(u: &Rep, w: &Rep, v: &Rep, z: &Rep) -> Mat {
    let field = u.ctx.field();
    let (du, dw, dv, dz) = (u.dim, w.dim, v.dim, z.dim);
    let ustar = u.dual();
    let zv = z.tensor(&v.dual());
    let step = Mat::identity(field, dw).tensor_with(&zv.braiding_inv(&ustar));
    // rows of step are packed [w, z, v', u']; hom indices are [w, z, u', v']
    let n = dw * dz * du * dv;
    let mut p = Mat::zeros(field, n, n);
    for iw in 0..dw {
        for iz in 0..dz {
            for ivp in 0..dv {
                for iup in 0..du {
                    let src = ((iw * dz + iz) * dv + ivp) * du + iup;
                    let dst = ((iw * dz + iz) * du + iup) * dv + ivp;
                    p.set(dst, src, Scalar::one(field));
                }
            }
        }
    }
    p.mul(&step)
}

/// Algebra form of the interchange: End(U) (x)~ End(V) -> End(U (x) V).
pub fn end_monoidal_iso(u: &Rep, v: &Rep) -> Mat {
    hom_monoidal_iso(u, u, v, v)
}

/// Seed isomorphism from the braiding bimodule of two matrix algebras onto
/// Hom(V,W) (x)~ Hom(W,V).
pub fn braiding_end_iso(v: &Rep, w: &Rep) -> Mat {
    let field = v.ctx.field();
    let (dv, dw) = (v.dim, w.dim);
    let vstar = v.dual();
    let wstar = w.dual();
    let m1 = Mat::identity(field, dw)
        .tensor_with(&v.braiding_inv(&wstar))
        .tensor_with(&Mat::identity(field, dv));
    let m2 = Mat::identity(field, dw).tensor_with(&v.tensor(&wstar).braiding(&vstar));
    m2.mul(&m1)
}

/// The braiding bimodule between End(V) and End(W) is isomorphic to
/// Hom(V,W) (x)~ Hom(W,V), witnessed by the closed-form seed map.
pub fn check_braiding_for_end(dm: &DrinfeldMap, v: &Rep, w: &Rep) -> CheckReport {
    let mut report = CheckReport::new(&format!(
        "braiding between End({}) and End({})",
        v.name, w.name
    ));
    let end_v = internal_end(dm, v);
    let end_w = internal_end(dm, w);
    let bp = braiding_bimodule(&end_v, &end_w);
    report.merge(bp.report);
    let target = braided_tensor_bimodules(&internal_hom(dm, v, w), &internal_hom(dm, w, v));
    let seed = braiding_end_iso(v, w);
    if seed.inverse().is_none() {
        report.fail(
            "seed invertible",
            "matrix".to_string(),
            "closed-form map is singular".to_string(),
        );
    }
    report.merge(crate::morita::check_bimodule_morphism(&seed, &bp.forward, &target));
    report
}

/// Split a compatible bimodule over (End(W), End(V)) into hom summands.
/// The multiplicity is forced by dimensions; the certificate is searched.
pub fn decompose_compatible(
    dm: &DrinfeldMap,
    b: &Bimodule,
    v: &Rep,
    w: &Rep,
    seed: u64,
    max_trials: usize,
) -> Result<(usize, IsoCertificate)> {
    if !is_factorizable(dm) {
        return Err(EngineError::Input(format!(
            "decomposition needs a factorizable structure; canonical map rank is {} of {}",
            dm.rank, dm.mat.rows
        )));
    }
    let end_v = internal_end(dm, v);
    let end_w = internal_end(dm, w);
    if !same_algebra(&b.right, &end_v) || !same_algebra(&b.left, &end_w) {
        return Err(EngineError::Input(
            "bimodule is not over the stated endomorphism algebras".to_string(),
        ));
    }
    if b.dim() == 0 {
        return Err(EngineError::Input("zero bimodule has no decomposition".to_string()));
    }
    let compat = check_l_compatible(b);
    if !compat.passed {
        return Err(EngineError::Input(format!(
            "bimodule fails compatibility ({} violations); no decomposition is claimed",
            compat.failures.len()
        )));
    }
    let unit_dim = v.dim * w.dim;
    if b.dim() % unit_dim != 0 {
        return Err(EngineError::Input(format!(
            "dimension {} is not a multiple of {}; this contradicts the decomposition \
             statement, so the input data must be corrupt",
            b.dim(),
            unit_dim
        )));
    }
    let n = b.dim() / unit_dim;
    let hom = internal_hom(dm, v, w);
    let mut sum = hom.clone();
    for _ in 1..n {
        sum = sum.direct_sum(&hom);
    }
    let cert = bimodule_iso(b, &sum, seed, max_trials)?;
    Ok((n, cert))
}

/// Object image of the functor into the Morita category; defined on
/// modules that split off the trivial module.
pub fn functor_f_obj(dm: &DrinfeldMap, v: &Rep) -> Result<Rc<LLinAlg>> {
    if !v.has_unit_summand() {
        return Err(EngineError::Input(format!(
            "no unit summand certificate for {}; the functor is not defined there",
            v.name
        )));
    }
    Ok(internal_end(dm, v))
}

/// Morphism image: every map V -> W goes to the hom bimodule.
pub fn functor_f_mor(dm: &DrinfeldMap, v: &Rep, w: &Rep) -> Result<Bimodule> {
    if !v.has_unit_summand() || !w.has_unit_summand() {
        return Err(EngineError::Input(
            "no unit summand certificate; the functor is not defined there".to_string(),
        ));
    }
    Ok(internal_hom(dm, v, w))
}

/// Monoidal structure morphism: the regular bimodule of End(V (x) W) with
/// the right action pulled back along the interchange isomorphism.
pub fn functor_f2(dm: &DrinfeldMap, v: &Rep, w: &Rep) -> Bimodule {
    let vw = v.tensor(w);
    let end_vw = internal_end(dm, &vw);
    let reg = Bimodule::regular(&end_vw);
    let i = end_monoidal_iso(v, w);
    let src = braided_tensor_algebras(&internal_end(dm, v), &internal_end(dm, w));
    twist_right(&reg, &i, &src)
}

/// Compose hom bimodules over a middle object and compare with the direct
/// hom. The outcome records whether the middle object certifies a unit
/// summand; without one the comparison is informational, not a claim.
pub struct HomCompositionOutcome {
    pub middle_has_unit_summand: bool,
    pub composite_dim: usize,
    pub certificate: IsoCertificate,
}

pub fn check_hom_composition(
    dm: &DrinfeldMap,
    u: &Rep,
    v: &Rep,
    w: &Rep,
    cap: usize,
    seed: u64,
    max_trials: usize,
) -> Result<HomCompositionOutcome> {
    let b2 = internal_hom(dm, v, w);
    let b1 = internal_hom(dm, u, v);
    let comp = compose_bimodules(&b2, &b1, cap)?;
    let target = internal_hom(dm, u, w);
    let cert = bimodule_iso(&comp.bim, &target, seed, max_trials)?;
    Ok(HomCompositionOutcome {
        middle_has_unit_summand: v.has_unit_summand(),
        composite_dim: comp.bim.dim(),
        certificate: cert,
    })
}

/// F2_{W,V} after the braiding bimodule versus Hom(V (x) W, W (x) V) after
/// F2_{V,W}: the two composites must be isomorphic.
pub fn check_braided_functor(
    dm: &DrinfeldMap,
    v: &Rep,
    w: &Rep,
    cap: usize,
    seed: u64,
    max_trials: usize,
) -> Result<IsoCertificate> {
    let end_v = internal_end(dm, v);
    let end_w = internal_end(dm, w);
    let bp = braiding_bimodule(&end_v, &end_w);
    let lhs = compose_bimodules(&functor_f2(dm, w, v), &bp.forward, cap)?.bim;
    let fc = internal_hom(dm, &v.tensor(w), &w.tensor(v));
    let rhs = compose_bimodules(&fc, &functor_f2(dm, v, w), cap)?.bim;
    bimodule_iso(&lhs, &rhs, seed, max_trials)
}

/// Hom(1,V) and Hom(V,1) compose to the two regular bimodules, so every
/// functor image is an invertible object.
pub fn check_unit_invertibility(
    dm: &DrinfeldMap,
    v: &Rep,
    cap: usize,
    seed: u64,
    max_trials: usize,
) -> Result<(IsoCertificate, IsoCertificate)> {
    if !v.has_unit_summand() {
        return Err(EngineError::Input(format!(
            "no unit summand certificate for {}; invertibility is not claimed",
            v.name
        )));
    }
    let triv = trivial_rep(v.ctx.clone());
    let col = internal_hom(dm, &triv, v); // (End V, 1)
    let row = internal_hom(dm, v, &triv); // (1, End V)
    let down = compose_bimodules(&row, &col, cap)?.bim; // over (1, 1)
    let up = compose_bimodules(&col, &row, cap)?.bim; // over (End V, End V)
    let unit_reg = Bimodule::regular(&internal_end(dm, &triv));
    let end_reg = Bimodule::regular(&internal_end(dm, v));
    let c1 = bimodule_iso(&down, &unit_reg, seed, max_trials)?;
    let c2 = bimodule_iso(&up, &end_reg, seed, max_trials)?;
    Ok((c1, c2))
}
