//! Bundled example algebras: a one-dimensional base case, the group
//! algebras of Z/2 and Z/4, the four-dimensional nilpotent extension of
//! Z/2 (basis 1, g, x, gx with g^2 = 1, x^2 = 0, xg = -gx), and the
//! sixteen-dimensional double of the latter.
//!
//! All structure constants are produced by the constructors below and
//! certified by the axiom checkers in this module's tests; the JSON files
//! shipped under fixtures/ are regenerated from these constructors, never
//! edited by hand. Ribbon data for the double is decided by a candidate
//! sweep, not asserted: see [`ribbon_search`].

use crate::hopf::{check_ribbon, drinfeld_double, drinfeld_element, dual_hopf, Hopf};
use crate::linalg::Mat;
use crate::scalar::{FieldDesc, Scalar};
use crate::tensor::Tensor;
use std::sync::OnceLock;

/// Cyclic group algebra k[Z/n]; basis g^0 .. g^{n-1}.
pub fn cyclic_group_algebra(field: FieldDesc, n: usize, name: &str) -> Hopf {
    let one = Scalar::one(field);
    let mut mult = Tensor::zeros(field, vec![n, n, n]);
    let mut comult = Tensor::zeros(field, vec![n, n, n]);
    for i in 0..n {
        for j in 0..n {
            mult.add_at(&[i, j, (i + j) % n], &one);
        }
        comult.add_at(&[i, i, i], &one);
    }
    let mut unit = vec![Scalar::zero(field); n];
    unit[0] = one.clone();
    let counit = vec![one.clone(); n];
    let mut antipode = Mat::zeros(field, n, n);
    for i in 0..n {
        antipode.set((n - i) % n, i, one.clone());
    }
    let basis = (0..n)
        .map(|i| match i {
            0 => "1".to_string(),
            1 => "g".to_string(),
            k => format!("g^{}", k),
        })
        .collect();
    Hopf {
        name: name.into(),
        field,
        dim: n,
        basis,
        unit,
        counit,
        mult,
        comult,
        antipode,
        rmatrix: None,
        ribbon: None,
    }
}

/// One-dimensional algebra with the trivial braiding and twist.
pub fn triv() -> Hopf {
    let field = FieldDesc::Q;
    let mut h = cyclic_group_algebra(field, 1, "triv");
    let mut r = Tensor::zeros(field, vec![1, 1]);
    r.add_at(&[0, 0], &Scalar::one(field));
    h.rmatrix = Some(r);
    h.ribbon = Some(vec![Scalar::one(field)]);
    h
}

/// k[Z/2] with the sign-grading r-matrix (1/2)(1(x)1 + 1(x)g + g(x)1 - g(x)g)
/// and trivial ribbon.
pub fn kz2() -> Hopf {
    let field = FieldDesc::Q;
    let mut h = cyclic_group_algebra(field, 2, "kz2");
    let half = Scalar::from_ratio(field, 1, 2);
    let mut r = Tensor::zeros(field, vec![2, 2]);
    r.add_at(&[0, 0], &half);
    r.add_at(&[0, 1], &half);
    r.add_at(&[1, 0], &half);
    r.add_at(&[1, 1], &half.neg());
    h.rmatrix = Some(r);
    h.ribbon = Some(h.unit.clone());
    h
}

/// k[Z/2] with R = 1 (x) 1: the degenerate sanity case.
pub fn kz2_trivial_r() -> Hopf {
    let field = FieldDesc::Q;
    let mut h = cyclic_group_algebra(field, 2, "kz2-trivial");
    let one = Scalar::one(field);
    let mut r = Tensor::zeros(field, vec![2, 2]);
    r.add_at(&[0, 0], &one);
    h.rmatrix = Some(r);
    h.ribbon = Some(h.unit.clone());
    h
}

/// k[Z/4] over the fourth cyclotomic field with the discrete-Fourier
/// r-matrix R = (1/4) sum_{a,b} i^{-ab} g^a (x) g^b and the ribbon element
/// sum_j i^{-j^2} e_j written in the group basis.
pub fn kz4() -> Hopf {
    let field = FieldDesc::Cyc(4);
    let mut h = cyclic_group_algebra(field, 4, "kz4");
    let quarter = Scalar::from_ratio(field, 1, 4);
    let mut r = Tensor::zeros(field, vec![4, 4]);
    for a in 0..4i64 {
        for b in 0..4i64 {
            r.add_at(&[a as usize, b as usize], &Scalar::root_pow(field, -a * b).mul(&quarter));
        }
    }
    h.rmatrix = Some(r);
    // nu = sum_j i^{-j^2} e_j with e_j = (1/4) sum_k i^{-jk} g^k
    let mut nu = vec![Scalar::zero(field); 4];
    for k in 0..4i64 {
        let mut c = Scalar::zero(field);
        for j in 0..4i64 {
            c = c.add(&Scalar::root_pow(field, -j * j - j * k));
        }
        nu[k as usize] = c.mul(&quarter);
    }
    h.ribbon = Some(nu);
    h
}

/// The four-dimensional algebra k<g, x>/(g^2 - 1, x^2, xg + gx) with
/// Delta(g) = g (x) g, Delta(x) = x (x) 1 + g (x) x; basis 1, g, x, gx.
/// Carries the one-parameter r-matrix family at parameter 1:
/// R = R_sign + (1/2)(x(x)x - x(x)gx + gx(x)x + gx(x)gx), trivial ribbon.
/// The family itself is re-derived as a solver oracle in the tests.
pub fn h4() -> Hopf {
    let field = FieldDesc::Q;
    let one = Scalar::one(field);
    let neg = one.neg();
    let mut mult = Tensor::zeros(field, vec![4, 4, 4]);
    for j in 0..4 {
        mult.add_at(&[0, j, j], &one); // 1 * a = a
    }
    mult.add_at(&[1, 0, 1], &one); // g * 1 = g
    mult.add_at(&[1, 1, 0], &one); // g * g = 1
    mult.add_at(&[1, 2, 3], &one); // g * x = gx
    mult.add_at(&[1, 3, 2], &one); // g * gx = x
    mult.add_at(&[2, 0, 2], &one); // x * 1 = x
    mult.add_at(&[2, 1, 3], &neg); // x * g = -gx
    mult.add_at(&[3, 0, 3], &one); // gx * 1 = gx
    mult.add_at(&[3, 1, 2], &neg); // gx * g = -x

    let mut comult = Tensor::zeros(field, vec![4, 4, 4]);
    comult.add_at(&[0, 0, 0], &one);
    comult.add_at(&[1, 1, 1], &one);
    comult.add_at(&[2, 2, 0], &one); // Delta x = x (x) 1 + g (x) x
    comult.add_at(&[2, 1, 2], &one);
    comult.add_at(&[3, 3, 1], &one); // Delta gx = gx (x) g + 1 (x) gx
    comult.add_at(&[3, 0, 3], &one);

    let mut unit = vec![Scalar::zero(field); 4];
    unit[0] = one.clone();
    let counit = vec![one.clone(), one.clone(), Scalar::zero(field), Scalar::zero(field)];

    let mut antipode = Mat::zeros(field, 4, 4);
    antipode.set(0, 0, one.clone());
    antipode.set(1, 1, one.clone());
    antipode.set(3, 2, neg.clone()); // S(x) = -gx
    antipode.set(2, 3, one.clone()); // S(gx) = x

    let half = Scalar::from_ratio(field, 1, 2);
    let nhalf = half.neg();
    let mut r = Tensor::zeros(field, vec![4, 4]);
    r.add_at(&[0, 0], &half);
    r.add_at(&[0, 1], &half);
    r.add_at(&[1, 0], &half);
    r.add_at(&[1, 1], &nhalf);
    r.add_at(&[2, 2], &half);
    r.add_at(&[2, 3], &nhalf);
    r.add_at(&[3, 2], &half);
    r.add_at(&[3, 3], &half);

    Hopf {
        name: "h4".into(),
        field,
        dim: 4,
        basis: vec!["1".into(), "g".into(), "x".into(), "gx".into()],
        unit: unit.clone(),
        counit,
        mult,
        comult,
        antipode,
        rmatrix: Some(r),
        ribbon: Some(unit),
    }
}

/// Certified group-like elements of `h`: basis scan plus a small-coefficient
/// sweep for dim <= 6, closed under products. Every returned element is
/// machine-verified group-like; completeness for the bundled fixtures
/// follows from their pointed coalgebra structure.
pub fn group_likes_small(h: &Hopf) -> Vec<Vec<Scalar>> {
    let mut found: Vec<Vec<Scalar>> = Vec::new();
    let try_push = |v: Vec<Scalar>, found: &mut Vec<Vec<Scalar>>| {
        if h.is_group_like(&v) && !found.contains(&v) {
            found.push(v);
        }
    };
    try_push(h.unit.clone(), &mut found);
    for i in 0..h.dim {
        let mut v = h.zero_vec();
        v[i] = Scalar::one(h.field);
        try_push(v, &mut found);
    }
    if h.dim <= 6 {
        // all {-1, 0, 1} coefficient vectors
        let total = 3usize.pow(h.dim as u32);
        for code in 0..total {
            let mut c = code;
            let mut v = h.zero_vec();
            for slot in v.iter_mut() {
                let digit = c % 3;
                c /= 3;
                *slot = Scalar::from_int(h.field, [0i64, 1, -1][digit]);
            }
            try_push(v, &mut found);
        }
    }
    loop {
        let snapshot = found.clone();
        let before = found.len();
        for a in &snapshot {
            for b in &snapshot {
                try_push(h.mul_vec(a, b), &mut found);
            }
        }
        if found.len() == before {
            break;
        }
    }
    found
}

/// Group-likes of a double built as dual (x) original, as pairs of factor
/// group-likes (complete for tensor-product coalgebras).
pub fn double_group_likes(factor: &Hopf, d: &Hopf) -> Vec<Vec<Scalar>> {
    let dual = dual_hopf(factor);
    let gd = group_likes_small(&dual);
    let gh = group_likes_small(factor);
    let mut out = Vec::new();
    for b in &gd {
        for l in &gh {
            let mut v = vec![Scalar::zero(d.field); d.dim];
            for i in 0..factor.dim {
                for j in 0..factor.dim {
                    v[i * factor.dim + j] = b[i].mul(&l[j]);
                }
            }
            assert!(d.is_group_like(&v), "factor group-like pair must be group-like in the double");
            out.push(v);
        }
    }
    out
}

/// Outcome of the ribbon candidate sweep on a quasitriangular algebra.
pub struct RibbonDecision {
    pub candidates_tried: usize,
    pub found: Option<Vec<Scalar>>,
}

/// Decide whether a ribbon element exists by sweeping nu = u * l and
/// nu = l * u over the supplied group-likes l (u the Drinfeld element).
/// The pivotal element of any ribbon is group-like and group-likes are
/// closed under inverses, so the sweep is complete whenever the group-like
/// list is.
pub fn ribbon_search(d: &Hopf, group_likes: &[Vec<Scalar>]) -> RibbonDecision {
    let u = match drinfeld_element(d) {
        Some(u) => u,
        None => return RibbonDecision { candidates_tried: 0, found: None },
    };
    let mut cands: Vec<Vec<Scalar>> = Vec::new();
    for l in group_likes {
        for c in [d.mul_vec(&u, l), d.mul_vec(l, &u)] {
            if !cands.contains(&c) {
                cands.push(c);
            }
        }
    }
    let tried = cands.len();
    for v in cands {
        let mut t = d.clone();
        t.ribbon = Some(v.clone());
        if check_ribbon(&t).passed {
            return RibbonDecision { candidates_tried: tried, found: Some(v) };
        }
    }
    RibbonDecision { candidates_tried: tried, found: None }
}

static DH4: OnceLock<Hopf> = OnceLock::new();

/// Sixteen-dimensional double of [`h4`], with ribbon data attached when the
/// candidate sweep finds one.
pub fn dh4() -> Hopf {
    DH4.get_or_init(|| {
        let base = h4();
        let mut d = drinfeld_double(&base);
        d.name = "dh4".into();
        let gls = double_group_likes(&base, &d);
        let decision = ribbon_search(&d, &gls);
        d.ribbon = decision.found;
        d
    })
    .clone()
}

/// Resolve a bundled fixture by name.
pub fn by_name(name: &str) -> Option<Hopf> {
    match name {
        "triv" => Some(triv()),
        "kz2" => Some(kz2()),
        "kz2-trivial" => Some(kz2_trivial_r()),
        "kz4" => Some(kz4()),
        "h4" => Some(h4()),
        "dh4" => Some(dh4()),
        _ => None,
    }
}

pub const BUNDLED: [&str; 6] = ["triv", "kz2", "kz2-trivial", "kz4", "h4", "dh4"];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hopf::{check_hopf, check_quasitriangular, monodromy};

    fn assert_all_pass(h: &Hopf) {
        let r = check_hopf(h);
        assert!(r.passed, "{} hopf axioms: {:?}", h.name, r.failures);
        if h.rmatrix.is_some() {
            let r = check_quasitriangular(h);
            assert!(r.passed, "{} qt axioms: {:?}", h.name, r.failures);
        }
        if h.ribbon.is_some() {
            let r = check_ribbon(h);
            assert!(r.passed, "{} ribbon axioms: {:?}", h.name, r.failures);
        }
    }

    #[test]
    fn triv_passes_all() {
        assert_all_pass(&triv());
    }

    #[test]
    fn kz2_passes_all() {
        assert_all_pass(&kz2());
        assert_all_pass(&kz2_trivial_r());
    }

    #[test]
    fn kz4_passes_all() {
        assert_all_pass(&kz4());
    }

    #[test]
    fn h4_passes_all() {
        assert_all_pass(&h4());
    }

    #[test]
    fn dh4_passes_hopf_and_qt() {
        let d = dh4();
        assert_eq!(d.dim, 16);
        let r = check_hopf(&d);
        assert!(r.passed, "double hopf axioms: {:?}", r.failures);
        let r = check_quasitriangular(&d);
        assert!(r.passed, "double qt axioms: {:?}", r.failures);
    }

    #[test]
    fn dh4_ribbon_decision() {
        let d = dh4();
        if let Some(v) = &d.ribbon {
            let mut t = d.clone();
            t.ribbon = Some(v.clone());
            assert!(check_ribbon(&t).passed);
        } else {
            // sweep must at least have run over 4 group-likes
            let base = h4();
            let gls = double_group_likes(&base, &d);
            assert_eq!(gls.len(), 4);
        }
    }

    #[test]
    fn kz2_monodromy_is_identity() {
        // R^fl R = 1 (x) 1 for the sign-grading r-matrix, which is why the
        // trivial ribbon passes
        let h = kz2();
        assert_eq!(monodromy(&h).unwrap(), h.unit_pow(2));
    }

    #[test]
    fn h4_group_likes_are_1_and_g() {
        let h = h4();
        let gls = group_likes_small(&h);
        assert_eq!(gls.len(), 2);
    }

    #[test]
    fn h4_dual_group_likes_are_the_two_characters() {
        let h = dual_hopf(&h4());
        let gls = group_likes_small(&h);
        // counit and the sign character
        assert_eq!(gls.len(), 2);
    }
}
