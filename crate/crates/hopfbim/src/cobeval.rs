//! Cobordism words over the genus-indexed surface alphabet, evaluated into
//! the Morita category by sending genus g to the endomorphism algebra of a
//! g-fold tensor power. Every image is certified against its predicted
//! hom-bimodule class; certificates say "isomorphic images", never that two
//! words are equal as cobordisms.

use crate::drinfeld::{is_factorizable, DrinfeldMap};
use crate::error::{check_cap, EngineError, Result};
use crate::hopf::CheckReport;
use crate::iend::{end_monoidal_iso, internal_end, internal_hom};
use crate::linalg::Mat;
use crate::morita::{
    balance_automorphism, balance_bimodule, bimodule_iso, braided_tensor_bimodules,
    braiding_bimodule, check_l_compatible, check_l_linear, compose_bimodules, Bimodule,
    IsoCertificate, LLinAlg,
};
use crate::rep::{trivial_rep, Rep};
use std::fmt;
use std::rc::Rc;

/// Words in the surface alphabet. Each node carries a genus signature
/// (source, target); composition reads right to left.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CobExpr {
    Id(usize),
    /// Pair of pants, 2 -> 1. Its skein-theoretic source object has
    /// dimension between 1 and the cube of the coend dimension; only the
    /// matrix-algebra image is computed here.
    Mult,
    Comult,
    Unit,
    Counit,
    Antipode,
    RibbonTwist,
    Integral,
    Cointegral,
    Copairing,
    Braid(usize, usize),
    BraidInv(usize, usize),
    Compose(Box<CobExpr>, Box<CobExpr>),
    Tensor(Box<CobExpr>, Box<CobExpr>),
}

impl fmt::Display for CobExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CobExpr::Id(g) => write!(f, "(id {})", g),
            CobExpr::Mult => write!(f, "(mult)"),
            CobExpr::Comult => write!(f, "(comult)"),
            CobExpr::Unit => write!(f, "(unit)"),
            CobExpr::Counit => write!(f, "(counit)"),
            CobExpr::Antipode => write!(f, "(antipode)"),
            CobExpr::RibbonTwist => write!(f, "(ribbon-twist)"),
            CobExpr::Integral => write!(f, "(integral)"),
            CobExpr::Cointegral => write!(f, "(cointegral)"),
            CobExpr::Copairing => write!(f, "(copairing)"),
            CobExpr::Braid(a, b) => write!(f, "(braid {} {})", a, b),
            CobExpr::BraidInv(a, b) => write!(f, "(braid-inv {} {})", a, b),
            CobExpr::Compose(e2, e1) => write!(f, "(compose {} {})", e2, e1),
            CobExpr::Tensor(e1, e2) => write!(f, "(tensor {} {})", e1, e2),
        }
    }
}

#[derive(Debug)]
enum STok {
    Open,
    Close,
    Atom(String),
}

fn tokenize(src: &str) -> Result<Vec<STok>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in src.chars() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push(STok::Atom(std::mem::take(&mut cur)));
                }
                out.push(if ch == '(' { STok::Open } else { STok::Close });
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push(STok::Atom(std::mem::take(&mut cur)));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        out.push(STok::Atom(cur));
    }
    Ok(out)
}

fn parse_genus(word: &Option<&STok>, head: &str) -> Result<usize> {
    match word {
        Some(STok::Atom(a)) => a
            .parse::<usize>()
            .map_err(|_| EngineError::Input(format!("{} expects a genus, got {:?}", head, a))),
        _ => Err(EngineError::Input(format!("{} expects a genus argument", head))),
    }
}

fn parse_node(toks: &[STok], pos: &mut usize) -> Result<CobExpr> {
    match toks.get(*pos) {
        Some(STok::Open) => {}
        other => {
            return Err(EngineError::Input(format!(
                "expected '(' at token {}, found {:?}",
                *pos, other
            )))
        }
    }
    *pos += 1;
    let head = match toks.get(*pos) {
        Some(STok::Atom(a)) => a.clone(),
        other => {
            return Err(EngineError::Input(format!(
                "expected an operator name at token {}, found {:?}",
                *pos, other
            )))
        }
    };
    *pos += 1;
    let expr = match head.as_str() {
        "id" => {
            let g = parse_genus(&toks.get(*pos), "id")?;
            *pos += 1;
            CobExpr::Id(g)
        }
        "mult" => CobExpr::Mult,
        "comult" => CobExpr::Comult,
        "unit" => CobExpr::Unit,
        "counit" => CobExpr::Counit,
        "antipode" => CobExpr::Antipode,
        "ribbon-twist" => CobExpr::RibbonTwist,
        "integral" => CobExpr::Integral,
        "cointegral" => CobExpr::Cointegral,
        "copairing" => CobExpr::Copairing,
        "braid" | "braid-inv" => {
            let a = parse_genus(&toks.get(*pos), &head)?;
            *pos += 1;
            let b = parse_genus(&toks.get(*pos), &head)?;
            *pos += 1;
            if head == "braid" {
                CobExpr::Braid(a, b)
            } else {
                CobExpr::BraidInv(a, b)
            }
        }
        "compose" => {
            let e2 = parse_node(toks, pos)?;
            let e1 = parse_node(toks, pos)?;
            CobExpr::Compose(Box::new(e2), Box::new(e1))
        }
        "tensor" => {
            let e1 = parse_node(toks, pos)?;
            let e2 = parse_node(toks, pos)?;
            CobExpr::Tensor(Box::new(e1), Box::new(e2))
        }
        other => {
            return Err(EngineError::Input(format!("unknown operator '{}'", other)));
        }
    };
    match toks.get(*pos) {
        Some(STok::Close) => {
            *pos += 1;
            Ok(expr)
        }
        other => Err(EngineError::Input(format!(
            "expected ')' closing '{}' at token {}, found {:?}",
            head, *pos, other
        ))),
    }
}

/// Parse one s-expression word, e.g. (compose (mult) (tensor (id 1) (unit))).
pub fn parse_cob(src: &str) -> Result<CobExpr> {
    let toks = tokenize(src)?;
    let mut pos = 0;
    let expr = parse_node(&toks, &mut pos)?;
    if pos != toks.len() {
        return Err(EngineError::Input(format!(
            "trailing tokens after a complete expression (token {})",
            pos
        )));
    }
    Ok(expr)
}

/// Genus signature (source, target); composition mismatches are located by
/// printing the offending subword.
pub fn typecheck(e: &CobExpr) -> Result<(usize, usize)> {
    match e {
        CobExpr::Id(g) => Ok((*g, *g)),
        CobExpr::Mult => Ok((2, 1)),
        CobExpr::Comult => Ok((1, 2)),
        CobExpr::Unit | CobExpr::Cointegral => Ok((0, 1)),
        CobExpr::Counit | CobExpr::Integral => Ok((1, 0)),
        CobExpr::Antipode | CobExpr::RibbonTwist => Ok((1, 1)),
        CobExpr::Copairing => Ok((0, 2)),
        CobExpr::Braid(a, b) | CobExpr::BraidInv(a, b) => Ok((a + b, a + b)),
        CobExpr::Compose(e2, e1) => {
            let (a, b) = typecheck(e1)?;
            let (c, d) = typecheck(e2)?;
            if b != c {
                return Err(EngineError::Input(format!(
                    "genus mismatch in {}: right factor ends at genus {} but left factor starts at {}",
                    e, b, c
                )));
            }
            Ok((a, d))
        }
        CobExpr::Tensor(e1, e2) => {
            let (a1, b1) = typecheck(e1)?;
            let (a2, b2) = typecheck(e2)?;
            Ok((a1 + a2, b1 + b2))
        }
    }
}

/// Evaluation outcome: the image bimodule, its compatibility report, and a
/// certificate that the image lies in the predicted hom class.
pub struct EvalResult {
    pub expr: String,
    pub g_in: usize,
    pub g_out: usize,
    pub bim: Bimodule,
    pub predicted_dim: usize,
    pub compat: CheckReport,
    pub certificate: IsoCertificate,
}

struct Evaluator<'a> {
    dm: &'a DrinfeldMap,
    v: &'a Rep,
    cap: usize,
}

impl<'a> Evaluator<'a> {
    fn vpow(&self, g: usize) -> Rep {
        let mut out = trivial_rep(self.v.ctx.clone());
        for _ in 0..g {
            out = if out.dim == 1 { self.v.clone() } else { out.tensor(self.v) };
        }
        out
    }

    fn end(&self, g: usize) -> Rc<LLinAlg> {
        internal_end(self.dm, &self.vpow(g))
    }

    fn hom(&self, a: usize, b: usize) -> Bimodule {
        internal_hom(self.dm, &self.vpow(a), &self.vpow(b))
    }

    fn interchange_inv(&self, g1: usize, g2: usize) -> Result<Mat> {
        end_monoidal_iso(&self.vpow(g1), &self.vpow(g2))
            .inverse()
            .ok_or_else(|| EngineError::Input("interchange map is singular".to_string()))
    }

    fn eval(&self, e: &CobExpr) -> Result<(Bimodule, usize, usize)> {
        match e {
            CobExpr::Id(g) => Ok((self.hom(*g, *g), *g, *g)),
            CobExpr::Mult => Ok((self.hom(2, 1), 2, 1)),
            CobExpr::Comult => Ok((self.hom(1, 2), 1, 2)),
            CobExpr::Unit | CobExpr::Cointegral => Ok((self.hom(0, 1), 0, 1)),
            CobExpr::Counit | CobExpr::Integral => Ok((self.hom(1, 0), 1, 0)),
            CobExpr::Antipode | CobExpr::RibbonTwist => Ok((self.hom(1, 1), 1, 1)),
            CobExpr::Copairing => Ok((self.hom(0, 2), 0, 2)),
            CobExpr::Braid(g1, g2) | CobExpr::BraidInv(g1, g2) => {
                let g = g1 + g2;
                let bp = braiding_bimodule(&self.end(*g1), &self.end(*g2));
                let (raw, fl, fr) = if matches!(e, CobExpr::Braid(_, _)) {
                    // forward: left = A2 (x)~ A1, right = A1 (x)~ A2
                    (bp.forward, self.interchange_inv(*g2, *g1)?, self.interchange_inv(*g1, *g2)?)
                } else {
                    (bp.inverse, self.interchange_inv(*g1, *g2)?, self.interchange_inv(*g2, *g1)?)
                };
                let b = crate::morita::twist_left(&raw, &fl, &self.end(g));
                let b = crate::morita::twist_right(&b, &fr, &self.end(g));
                Ok((b, g, g))
            }
            CobExpr::Compose(e2, e1) => {
                let (b1, a, _) = self.eval(e1)?;
                let (b2, _, d) = self.eval(e2)?;
                let comp = compose_bimodules(&b2, &b1, self.cap)?;
                Ok((comp.bim, a, d))
            }
            CobExpr::Tensor(e1, e2) => {
                let (b1, a1, o1) = self.eval(e1)?;
                let (b2, a2, o2) = self.eval(e2)?;
                check_cap(b1.dim() * b2.dim(), self.cap, "tensor of evaluated images")?;
                let bt = braided_tensor_bimodules(&b1, &b2);
                let b = crate::morita::twist_left(
                    &bt,
                    &self.interchange_inv(o1, o2)?,
                    &self.end(o1 + o2),
                );
                let b = crate::morita::twist_right(
                    &b,
                    &self.interchange_inv(a1, a2)?,
                    &self.end(a1 + a2),
                );
                Ok((b, a1 + a2, o1 + o2))
            }
        }
    }
}

/// Evaluate a word at a module with a unit summand and certify the image
/// against Hom of the boundary tensor powers.
pub fn evaluate_fv(
    dm: &DrinfeldMap,
    v: &Rep,
    e: &CobExpr,
    cap: usize,
    seed: u64,
    max_trials: usize,
) -> Result<EvalResult> {
    if !v.has_unit_summand() {
        return Err(EngineError::Input(format!(
            "no unit summand certificate for {}; evaluation is not defined there",
            v.name
        )));
    }
    let (g_in, g_out) = typecheck(e)?;
    let ev = Evaluator { dm, v, cap };
    let (bim, _, _) = ev.eval(e)?;
    let predicted = ev.hom(g_in, g_out);
    let compat = check_l_compatible(&bim);
    let certificate = bimodule_iso(&bim, &predicted, seed, max_trials)?;
    Ok(EvalResult {
        expr: e.to_string(),
        g_in,
        g_out,
        bim,
        predicted_dim: predicted.dim(),
        compat,
        certificate,
    })
}

/// Genus-g endomorphism algebra report: the dimension statement always, the
/// construction and its checker when the structure-constant budget fits.
pub struct GenusReport {
    pub genus: usize,
    pub base_dim: usize,
    pub predicted_dim: usize,
    pub built: bool,
    pub check: Option<CheckReport>,
    pub refusal: Option<String>,
}

pub fn alekseev_report(dm: &DrinfeldMap, genus: usize, cap: usize) -> Result<GenusReport> {
    if !is_factorizable(dm) {
        return Err(EngineError::Input(format!(
            "genus algebras need a factorizable structure; canonical map rank is {} of {}",
            dm.rank, dm.mat.rows
        )));
    }
    let base_dim = dm.cd.dim;
    let carrier_dim = base_dim.pow(genus as u32);
    let predicted_dim = base_dim.pow(2 * genus as u32);
    // the composition product stores one entry per matrix-unit triple
    if let Err(err) = check_cap(
        carrier_dim.saturating_mul(carrier_dim).saturating_mul(carrier_dim),
        cap,
        "genus algebra structure constants",
    ) {
        return Ok(GenusReport {
            genus,
            base_dim,
            predicted_dim,
            built: false,
            check: None,
            refusal: Some(err.to_string()),
        });
    }
    let mut carrier = trivial_rep(dm.cd.ctx.clone());
    for _ in 0..genus {
        carrier = if carrier.dim == 1 { dm.cd.carrier.clone() } else { carrier.tensor(&dm.cd.carrier) };
    }
    let end = internal_end(dm, &carrier);
    assert_eq!(end.dim(), predicted_dim);
    let check = check_l_linear(&end);
    Ok(GenusReport {
        genus,
        base_dim,
        predicted_dim,
        built: true,
        check: Some(check),
        refusal: None,
    })
}

/// Consistency of the twist generator: its image, the balance bimodule of
/// End(V), and the regular bimodule are pairwise isomorphic.
pub struct TwistConsistency {
    pub balance_report: CheckReport,
    pub balance_compat: CheckReport,
    pub twist_equals_regular: bool,
    pub twist_vs_balance: IsoCertificate,
    pub balance_vs_regular: IsoCertificate,
}

pub fn balance_consistency(
    dm: &DrinfeldMap,
    v: &Rep,
    seed: u64,
    max_trials: usize,
) -> Result<TwistConsistency> {
    let ev = evaluate_fv(dm, v, &CobExpr::RibbonTwist, usize::MAX, seed, max_trials)?;
    let end = internal_end(dm, v);
    let bal = balance_automorphism(&end)?;
    let bb = balance_bimodule(&end, &bal.mat);
    let balance_compat = check_l_compatible(&bb);
    let reg = Bimodule::regular(&end);
    let twist_equals_regular = ev.bim.left_action == reg.left_action
        && ev.bim.right_action == reg.right_action
        && ev.bim.carrier.action == reg.carrier.action;
    let twist_vs_balance = bimodule_iso(&ev.bim, &bb, seed, max_trials)?;
    let balance_vs_regular = bimodule_iso(&bb, &reg, seed, max_trials)?;
    Ok(TwistConsistency {
        balance_report: bal.report,
        balance_compat,
        twist_equals_regular,
        twist_vs_balance,
        balance_vs_regular,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coend::{transmute, Coend};
    use crate::drinfeld::drinfeld_map;
    use crate::error::DEFAULT_CAP;
    use crate::fixtures;
    use crate::hopf::HopfCtx;
    use crate::rep::fixture_reps;

    fn setup(name: &str) -> (Rc<HopfCtx>, Rc<Coend>, DrinfeldMap) {
        let h = fixtures::by_name(name).unwrap();
        let ctx = HopfCtx::new(h).unwrap();
        let cd = Rc::new(transmute(&ctx).unwrap());
        let dm = drinfeld_map(&cd);
        (ctx, cd, dm)
    }

    fn kz2_v() -> (DrinfeldMap, Rep) {
        let (ctx, _, dm) = setup("kz2");
        let reps = fixture_reps(&ctx, "kz2");
        (dm, reps[0].direct_sum(&reps[1]))
    }

    #[test]
    fn parser_and_typechecker_agree() {
        let e = parse_cob("(compose (mult) (tensor (id 1) (unit)))").unwrap();
        assert_eq!(
            e,
            CobExpr::Compose(
                Box::new(CobExpr::Mult),
                Box::new(CobExpr::Tensor(Box::new(CobExpr::Id(1)), Box::new(CobExpr::Unit)))
            )
        );
        assert_eq!(typecheck(&e).unwrap(), (1, 1));
        let e = parse_cob("(compose (counit) (unit))").unwrap();
        assert_eq!(typecheck(&e).unwrap(), (0, 0));
        let e = parse_cob("(compose (mult) (mult))").unwrap();
        match typecheck(&e) {
            Err(EngineError::Input(msg)) => {
                assert!(msg.contains("genus mismatch"));
                assert!(msg.contains("(compose (mult) (mult))"));
            }
            other => panic!("expected a typed mismatch, got {:?}", other.map(|_| ())),
        }
        // display round trips through the parser
        let e = parse_cob("(tensor (braid 1 2) (compose (integral) (ribbon-twist)))").unwrap();
        assert_eq!(parse_cob(&e.to_string()).unwrap(), e);
        assert_eq!(typecheck(&e).unwrap(), (4, 3));
        assert!(parse_cob("(mult) (unit)").is_err());
        assert!(parse_cob("(compose (mult)").is_err());
        assert!(parse_cob("(frobenius)").is_err());
        assert!(parse_cob("(id x)").is_err());
    }

    #[test]
    fn single_generators_hit_their_hom_classes() {
        let (dm, v) = kz2_v();
        let cases: Vec<(CobExpr, usize)> = vec![
            (CobExpr::Id(0), 1),
            (CobExpr::Id(1), 4),
            (CobExpr::Mult, 8),
            (CobExpr::Comult, 8),
            (CobExpr::Unit, 2),
            (CobExpr::Counit, 2),
            (CobExpr::Antipode, 4),
            (CobExpr::RibbonTwist, 4),
            (CobExpr::Integral, 2),
            (CobExpr::Cointegral, 2),
            (CobExpr::Copairing, 4),
        ];
        for (e, dim) in cases {
            let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
            assert_eq!(out.bim.dim(), dim, "{}", e);
            assert_eq!(out.predicted_dim, dim, "{}", e);
            assert!(out.compat.passed, "{}", e);
            assert!(out.certificate.is_iso(), "{}", e);
        }
    }

    #[test]
    fn composition_is_functorial() {
        let (dm, v) = kz2_v();
        let e = parse_cob("(compose (counit) (unit))").unwrap();
        let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
        assert_eq!(out.bim.dim(), 1);
        assert!(out.certificate.is_iso());
        let e = parse_cob("(compose (mult) (tensor (id 1) (unit)))").unwrap();
        let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
        assert_eq!((out.g_in, out.g_out), (1, 1));
        assert!(out.compat.passed);
        assert!(out.certificate.is_iso());
        // rearranging the composition tree does not change the image class
        let left = parse_cob("(compose (compose (mult) (comult)) (antipode))").unwrap();
        let right = parse_cob("(compose (mult) (compose (comult) (antipode)))").unwrap();
        let a = evaluate_fv(&dm, &v, &left, DEFAULT_CAP, 7, 64).unwrap();
        let b = evaluate_fv(&dm, &v, &right, DEFAULT_CAP, 7, 64).unwrap();
        assert!(a.certificate.is_iso() && b.certificate.is_iso());
        let direct = bimodule_iso(&a.bim, &b.bim, 7, 64).unwrap();
        assert!(direct.is_iso());
        // a mixed-boundary tensor word
        let e = parse_cob("(tensor (mult) (counit))").unwrap();
        let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
        assert_eq!((out.g_in, out.g_out), (3, 1));
        assert!(out.compat.passed);
        assert!(out.certificate.is_iso());
    }

    #[test]
    fn braid_images_invert_each_other() {
        let (dm, v) = kz2_v();
        let e = CobExpr::Braid(1, 1);
        let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
        assert_eq!(out.bim.dim(), 16);
        assert!(out.compat.passed);
        assert!(out.certificate.is_iso());
        let e = parse_cob("(compose (braid-inv 1 1) (braid 1 1))").unwrap();
        let out = evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64).unwrap();
        assert!(out.certificate.is_iso());
    }

    #[test]
    fn twist_consistency_degenerate_and_genuine() {
        // trivial ribbon: everything is the identity on the nose
        let (dm, v) = kz2_v();
        let out = balance_consistency(&dm, &v, 7, 64).unwrap();
        assert!(out.balance_report.passed);
        assert!(out.balance_compat.passed);
        assert!(out.twist_equals_regular);
        assert!(out.twist_vs_balance.is_iso());
        assert!(out.balance_vs_regular.is_iso());
        // fourth-root ribbon: the balance is nontrivial yet still inner
        let (ctx, _, dm) = setup("kz4");
        let reps = fixture_reps(&ctx, "kz4");
        let v = reps.last().unwrap();
        let out = balance_consistency(&dm, v, 7, 64).unwrap();
        assert!(out.balance_report.passed);
        assert!(out.balance_compat.passed);
        assert!(out.twist_vs_balance.is_iso());
        assert!(out.balance_vs_regular.is_iso());
    }

    #[test]
    fn genus_reports_build_or_refuse() {
        let (_, _, dm) = setup("dh4");
        let r = alekseev_report(&dm, 0, DEFAULT_CAP).unwrap();
        assert_eq!(r.predicted_dim, 1);
        assert!(r.built);
        assert!(r.check.unwrap().passed);
        let r = alekseev_report(&dm, 1, DEFAULT_CAP).unwrap();
        assert_eq!(r.predicted_dim, 256);
        assert!(r.built);
        assert!(r.check.unwrap().passed);
        let r = alekseev_report(&dm, 2, DEFAULT_CAP).unwrap();
        assert_eq!(r.predicted_dim, 65536);
        assert!(!r.built);
        assert!(r.refusal.unwrap().contains("cap"));
        let (_, _, dm) = setup("kz2");
        match alekseev_report(&dm, 1, DEFAULT_CAP) {
            Err(EngineError::Input(msg)) => assert!(msg.contains("factorizable")),
            other => panic!("expected a refusal, got {:?}", other.map(|r| r.built)),
        }
    }

    #[test]
    fn evaluation_refusals() {
        let (ctx, _, dm) = setup("kz2");
        let reps = fixture_reps(&ctx, "kz2");
        // no unit summand: evaluation undefined
        match evaluate_fv(&dm, &reps[1], &CobExpr::Id(1), DEFAULT_CAP, 7, 64) {
            Err(EngineError::Input(msg)) => assert!(msg.contains("unit summand")),
            _ => panic!("expected a refusal"),
        }
        // tight cap: composition workspace refused
        let v = reps[0].direct_sum(&reps[1]);
        let e = parse_cob("(compose (comult) (mult))").unwrap();
        match evaluate_fv(&dm, &v, &e, 4, 7, 64) {
            Err(EngineError::Cap { .. }) => {}
            _ => panic!("expected a cap refusal"),
        }
        // ill-typed words never reach the evaluator
        let e = parse_cob("(compose (mult) (mult))").unwrap();
        match evaluate_fv(&dm, &v, &e, DEFAULT_CAP, 7, 64) {
            Err(EngineError::Input(msg)) => assert!(msg.contains("genus mismatch")),
            _ => panic!("expected a typecheck refusal"),
        }
    }
}
