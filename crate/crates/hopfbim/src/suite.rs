//! Reproducible acceptance battery. Eleven criteria, each a timed list of
//! named clauses over the bundled fixtures. A clause is Pass, Fail, or
//! Unattainable; Unattainable records a machine-certified nonexistence
//! (a target that no input data can meet) and is reported honestly instead
//! of being skipped or faked. Only Fail clauses count toward the process
//! exit code; the per-criterion status line still prints FAIL whenever a
//! stated target is not attained, for either reason.

use crate::cobeval::{
    alekseev_report, balance_consistency, evaluate_fv, parse_cob, typecheck, CobExpr,
};
use crate::coend::{check_coend_laws, transmute, Coend};
use crate::drinfeld::{
    check_drinfeld, check_qmm, check_qmm_compatible, drinfeld_map, is_factorizable,
    llinear_from_qmm, qmm_from_llinear, DrinfeldMap, Qmm,
};
use crate::error::EngineError;
use crate::fixtures;
use crate::hopf::{check_hopf, check_quasitriangular, check_ribbon, CheckReport, HopfCtx};
use crate::iend::{
    check_braiding_for_end, check_hom_composition, decompose_compatible, internal_end,
    internal_hom, rep_moment_matrix,
};
use crate::linalg::Mat;
use crate::morita::{
    balance_automorphism, bimodule_iso, braided_tensor_algebras, braided_tensor_bimodules,
    braiding_bimodule, check_bimodule, check_l_compatible, check_llin_hb_roundtrip, compose_bimodules,
    double_regular_bimodule, hb_routes_agree, hbl_mat, hbr_mat, random_invertible, t_iso,
    balance_bimodule, Bimodule, IsoCertificate, LLinAlg,
};
use crate::rep::{fixture_reps, Rep};
use crate::scalar::Scalar;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::rc::Rc;
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_TRIALS: usize = 64;
pub const CRITERIA: usize = 11;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ClauseStatus {
    Pass,
    Fail,
    /// The stated target provably cannot be met; the detail carries the
    /// nonexistence certificate. Not counted as a process failure.
    Unattainable,
}

pub struct Clause {
    pub name: String,
    pub status: ClauseStatus,
    pub detail: String,
}

pub struct CriterionResult {
    pub id: usize,
    pub title: String,
    pub millis: u128,
    pub clauses: Vec<Clause>,
}

impl CriterionResult {
    pub fn hard_failed(&self) -> bool {
        self.clauses.iter().any(|c| c.status == ClauseStatus::Fail)
    }

    pub fn attained(&self) -> bool {
        self.clauses.iter().all(|c| c.status == ClauseStatus::Pass)
    }

    /// One line per criterion; FAIL whenever the stated target is not fully
    /// attained, with the clause tallies distinguishing false statements
    /// from certified-unattainable ones.
    pub fn status_line(&self) -> String {
        let pass = self.clauses.iter().filter(|c| c.status == ClauseStatus::Pass).count();
        let fail = self.clauses.iter().filter(|c| c.status == ClauseStatus::Fail).count();
        let unatt = self.clauses.iter().filter(|c| c.status == ClauseStatus::Unattainable).count();
        if self.attained() {
            format!(
                "criterion {:02} PASS ({} clauses, {} ms) {}",
                self.id, pass, self.millis, self.title
            )
        } else {
            format!(
                "criterion {:02} FAIL ({} false, {} unattainable with certificate, {} passed, {} ms) {}",
                self.id, fail, unatt, pass, self.millis, self.title
            )
        }
    }
}

pub struct SuiteResult {
    pub seed: u64,
    pub cap: usize,
    pub criteria: Vec<CriterionResult>,
}

impl SuiteResult {
    /// Count of genuinely false clauses; drives the process exit code.
    pub fn hard_failures(&self) -> usize {
        self.criteria
            .iter()
            .map(|c| c.clauses.iter().filter(|cl| cl.status == ClauseStatus::Fail).count())
            .sum()
    }
}

pub fn criterion_title(id: usize) -> &'static str {
    match id {
        1 => "structure axiom suites and fault injection",
        2 => "braided function algebra laws",
        3 => "structure morphism and half-braiding round trip",
        4 => "canonical map laws and factorizability",
        5 => "moment map dictionary",
        6 => "braiding bimodule laws",
        7 => "balance laws",
        8 => "hom composition laws",
        9 => "multiplicity recovery from scrambled sums",
        10 => "surface word evaluation",
        11 => "crossed action laws and route divergence",
        _ => panic!("criterion ids run 1 through {}", CRITERIA),
    }
}

/// Per-criterion wall clock budget in milliseconds.
pub fn budget_millis(id: usize) -> u128 {
    match id {
        1 => 5_000,
        2 | 3 | 8 | 11 => 30_000,
        4 => 10_000,
        5 => 20_000,
        6 | 7 | 9 => 60_000,
        10 => 120_000,
        _ => panic!("criterion ids run 1 through {}", CRITERIA),
    }
}

pub fn run_criterion(id: usize, seed: u64, cap: usize) -> CriterionResult {
    let start = Instant::now();
    let mut clauses = Vec::new();
    match id {
        1 => criterion_axioms(&mut clauses),
        2 => criterion_function_algebra(&mut clauses),
        3 => criterion_roundtrip(&mut clauses),
        4 => criterion_canonical_map(&mut clauses),
        5 => criterion_moment_maps(&mut clauses),
        6 => criterion_braiding(seed, cap, &mut clauses),
        7 => criterion_balance(&mut clauses),
        8 => criterion_composition(seed, cap, &mut clauses),
        9 => criterion_decomposition(seed, &mut clauses),
        10 => criterion_words(seed, cap, &mut clauses),
        11 => criterion_crossed(&mut clauses),
        _ => panic!("criterion ids run 1 through {}", CRITERIA),
    }
    CriterionResult {
        id,
        title: criterion_title(id).to_string(),
        millis: start.elapsed().as_millis(),
        clauses,
    }
}

pub fn run_suite(seed: u64, cap: usize) -> SuiteResult {
    let criteria = (1..=CRITERIA).map(|id| run_criterion(id, seed, cap)).collect();
    SuiteResult { seed, cap, criteria }
}

pub fn suite_to_json(s: &SuiteResult) -> Value {
    json!({
        "seed": s.seed,
        "cap": s.cap,
        "hard_failures": s.hard_failures(),
        "criteria": s.criteria.iter().map(|c| json!({
            "id": c.id,
            "title": c.title,
            "millis": c.millis,
            "attained": c.attained(),
            "status_line": c.status_line(),
            "clauses": c.clauses.iter().map(|cl| json!({
                "name": cl.name,
                "status": match cl.status {
                    ClauseStatus::Pass => "pass",
                    ClauseStatus::Fail => "fail",
                    ClauseStatus::Unattainable => "unattainable",
                },
                "detail": cl.detail,
            })).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    })
}

struct Fx {
    ctx: Rc<HopfCtx>,
    cd: Rc<Coend>,
    dm: DrinfeldMap,
}

fn setup(name: &str) -> Fx {
    let h = fixtures::by_name(name).expect("bundled fixture");
    let ctx = HopfCtx::new(h).expect("fixture context");
    let cd = Rc::new(transmute(&ctx).expect("fixture carrier"));
    let dm = drinfeld_map(&cd);
    Fx { ctx, cd, dm }
}

fn push(clauses: &mut Vec<Clause>, name: &str, ok: bool, detail: String) {
    clauses.push(Clause {
        name: name.to_string(),
        status: if ok { ClauseStatus::Pass } else { ClauseStatus::Fail },
        detail: if ok { String::new() } else { detail },
    });
}

fn push_report(clauses: &mut Vec<Clause>, name: &str, report: &CheckReport) {
    push(clauses, name, report.passed, first_witness(report));
}

fn push_cert(clauses: &mut Vec<Clause>, name: &str, cert: &IsoCertificate) {
    push(
        clauses,
        name,
        cert.is_iso(),
        format!("{} after {} trials (hom dim {})", cert.verdict_name(), cert.trials, cert.hom_dim),
    );
}

fn first_witness(report: &CheckReport) -> String {
    match report.failures.first() {
        Some(w) => format!(
            "{} violations, first: {} at {} ({})",
            report.failures.len(),
            w.law,
            w.at,
            w.detail
        ),
        None => String::new(),
    }
}

fn cert_detail(cert: &IsoCertificate) -> String {
    format!("{} after {} trials (hom dim {})", cert.verdict_name(), cert.trials, cert.hom_dim)
}

/// Criterion 1. Axiom suites on every bundled fixture, the ribbon
/// nonexistence certificate for the double, and corrupted-fixture fault
/// injection producing witnesses.
fn criterion_axioms(clauses: &mut Vec<Clause>) {
    for name in fixtures::BUNDLED {
        let h = fixtures::by_name(name).unwrap();
        push_report(clauses, &format!("{}: algebra, coalgebra, antipode laws", name), &check_hopf(&h));
        push_report(clauses, &format!("{}: braiding structure laws", name), &check_quasitriangular(&h));
        if h.ribbon.is_some() {
            push_report(clauses, &format!("{}: ribbon laws", name), &check_ribbon(&h));
        }
    }
    // the double carries no ribbon form; the sweep is decisive because any
    // ribbon element factors as the Drinfeld element times a group-like
    let base = fixtures::h4();
    let d = fixtures::dh4();
    let decision = fixtures::ribbon_search(&d, &fixtures::double_group_likes(&base, &d));
    match &decision.found {
        None => clauses.push(Clause {
            name: "dh4: ribbon laws".to_string(),
            status: ClauseStatus::Unattainable,
            detail: format!(
                "no ribbon form exists: all {} candidates (Drinfeld element times each group-like, \
                 both orders) fail the ribbon laws, and any ribbon form factors that way",
                decision.candidates_tried
            ),
        }),
        Some(_) => push_report(clauses, "dh4: ribbon laws", &check_ribbon(&d)),
    }
    push(
        clauses,
        "dh4: bundled ribbon field agrees with the sweep",
        d.ribbon.is_some() == decision.found.is_some(),
        "fixture constructor and sweep disagree".to_string(),
    );

    let mut bad = fixtures::kz2();
    bad.mult.add_at(&[0, 0, 1], &Scalar::one(bad.field));
    let r = check_hopf(&bad);
    push(
        clauses,
        "fault injection: corrupted product yields witnesses",
        !r.passed && !r.failures.is_empty(),
        "corrupted product passed the axiom suite".to_string(),
    );
    let mut bad = fixtures::kz2();
    let two = Scalar::from_int(bad.field, 2);
    bad.rmatrix = Some(bad.rmatrix.unwrap().scale(&two));
    let r = check_quasitriangular(&bad);
    push(
        clauses,
        "fault injection: corrupted braiding structure yields witnesses",
        !r.passed && !r.failures.is_empty(),
        "corrupted braiding structure passed".to_string(),
    );
    let mut bad = fixtures::kz4();
    let two = Scalar::from_int(bad.field, 2);
    bad.ribbon = Some(bad.ribbon.unwrap().iter().map(|c| c.mul(&two)).collect());
    let r = check_ribbon(&bad);
    push(
        clauses,
        "fault injection: corrupted ribbon form yields witnesses",
        !r.passed && !r.failures.is_empty(),
        "corrupted ribbon form passed".to_string(),
    );
}

/// Criterion 2. Braided product laws of the function algebra carrier on
/// every fixture, with the exchange identities probed at every curated
/// module of dimension at most four.
fn criterion_function_algebra(clauses: &mut Vec<Clause>) {
    for name in fixtures::BUNDLED {
        let fx = setup(name);
        let reps = fixture_reps(&fx.ctx, name);
        push_report(clauses, &format!("{}: braided product and coproduct laws", name), &check_coend_laws(&fx.cd, &reps));
    }
}

/// Criterion 3. The structure morphism and the half-braiding of the regular
/// bimodule determine each other exactly, on the carrier itself and on every
/// endomorphism algebra of a curated module.
fn criterion_roundtrip(clauses: &mut Vec<Clause>) {
    for name in fixtures::BUNDLED {
        let fx = setup(name);
        let wits = fixture_reps(&fx.ctx, name);
        let a = LLinAlg::from_carrier(&fx.cd);
        push_report(clauses, &format!("{}: round trip on the carrier algebra", name), &check_llin_hb_roundtrip(&a, &wits));
        for v in &wits {
            let end = internal_end(&fx.dm, v);
            push_report(
                clauses,
                &format!("{}: round trip on End({})", name, v.name),
                &check_llin_hb_roundtrip(&end, &wits),
            );
        }
    }
}

/// Criterion 4. Canonical map laws on every fixture; rank bookkeeping;
/// degenerate braiding collapses invertibility while the double attains it
/// with an explicit two-sided inverse.
fn criterion_canonical_map(clauses: &mut Vec<Clause>) {
    for name in fixtures::BUNDLED {
        let fx = setup(name);
        push_report(clauses, &format!("{}: canonical map laws", name), &check_drinfeld(&fx.dm));
        let n = fx.cd.dim;
        push(
            clauses,
            &format!("{}: inverse exists exactly at full rank", name),
            fx.dm.inverse.is_some() == (fx.dm.rank == n),
            format!("rank {} of {} but inverse presence disagrees", fx.dm.rank, n),
        );
    }
    let kz2 = setup("kz2");
    push(
        clauses,
        "kz2: degenerate braiding is not factorizable",
        !is_factorizable(&kz2.dm) && kz2.dm.rank == 1,
        format!("expected rank 1 without inverse, got rank {}", kz2.dm.rank),
    );
    let dh4 = setup("dh4");
    let ok = match &dh4.dm.inverse {
        Some(inv) => {
            let id = Mat::identity(dh4.ctx.field(), dh4.cd.dim);
            dh4.dm.mat.mul(inv) == id && inv.mul(&dh4.dm.mat) == id
        }
        None => false,
    };
    push(
        clauses,
        "dh4: factorizable with explicit two-sided inverse",
        is_factorizable(&dh4.dm) && ok,
        format!("rank {} of {}", dh4.dm.rank, dh4.cd.dim),
    );
}

/// Criterion 5. Moment maps on the double: the module moment matrix is a
/// lawful moment map, the two dictionary directions are exact matrix
/// identities, and moment compatibility stands or falls together with
/// carrier compatibility on a hom bimodule.
fn criterion_moment_maps(clauses: &mut Vec<Clause>) {
    let fx = setup("dh4");
    let reps = fixture_reps(&fx.ctx, "dh4");
    let sign = &reps[1];
    let adj = &reps[2];
    let end = internal_end(&fx.dm, adj);
    let q = Qmm { target: end.base.clone(), mat: rep_moment_matrix(adj) };
    push_report(clauses, "dh4: module moment matrix is a moment map", &check_qmm(&fx.ctx, &q));
    let from_q = llinear_from_qmm(&fx.dm, &q, None);
    push(
        clauses,
        "dh4: moment map composed with the canonical map gives the endomorphism structure",
        from_q.dmap == end.dmap,
        "structure morphisms differ".to_string(),
    );
    match qmm_from_llinear(&fx.dm, &end) {
        Ok(back) => push(
            clauses,
            "dh4: structure morphism composed with the inverse recovers the moment map",
            back.mat == q.mat,
            "recovered moment map differs".to_string(),
        ),
        Err(e) => push(clauses, "dh4: structure morphism composed with the inverse recovers the moment map", false, e.to_string()),
    }
    let end_sign = internal_end(&fx.dm, sign);
    let q_sign = Qmm { target: end_sign.base.clone(), mat: rep_moment_matrix(sign) };
    let hom = internal_hom(&fx.dm, sign, adj);
    let qc = check_qmm_compatible(&hom, &q, &q_sign);
    let lc = check_l_compatible(&hom);
    push(
        clauses,
        "dh4: hom bimodule passes both compatibility notions",
        qc.passed && lc.passed,
        format!("moment route: {}; carrier route: {}", first_witness(&qc), first_witness(&lc)),
    );
    let two = Scalar::from_int(fx.ctx.field(), 2);
    let broken = Bimodule {
        carrier: Rep::new(
            fx.ctx.clone(),
            "perturbed",
            hom.carrier.dim,
            hom.carrier.action.scale(&two),
        ),
        ..hom.clone()
    };
    let qc = check_qmm_compatible(&broken, &q, &q_sign);
    let lc = check_l_compatible(&broken);
    push(
        clauses,
        "dh4: perturbed bimodule fails both compatibility notions together",
        !qc.passed && !lc.passed,
        "perturbation slipped past one of the two routes".to_string(),
    );
}

/// Criterion 6. The braiding bimodule between endomorphism algebras:
/// two-sided invertibility up to certified isomorphism, a naturality square,
/// both hexagon instances, and the closed-form identification with the
/// braided product of the two hom bimodules.
fn criterion_braiding(seed: u64, cap: usize, clauses: &mut Vec<Clause>) {
    let fx = setup("kz2");
    let reps = fixture_reps(&fx.ctx, "kz2");
    let v2 = reps[0].direct_sum(&reps[1]);
    let reg = &reps[2];
    let a = internal_end(&fx.dm, reg);
    let b = internal_end(&fx.dm, &v2);
    let c = internal_end(&fx.dm, &reps[1]);
    let bp = braiding_bimodule(&a, &b);
    push_report(clauses, "exchange isomorphism routes agree and it is an algebra morphism", &bp.report);
    let round = |b2: &Bimodule, b1: &Bimodule, target: &Bimodule, name: &str, clauses: &mut Vec<Clause>| {
        match compose_bimodules(b2, b1, cap) {
            Ok(comp) => match bimodule_iso(&comp.bim, target, seed, DEFAULT_TRIALS) {
                Ok(cert) => push_cert(clauses, name, &cert),
                Err(e) => push(clauses, name, false, e.to_string()),
            },
            Err(e) => push(clauses, name, false, e.to_string()),
        }
    };
    round(&bp.forward, &bp.inverse, &Bimodule::regular(&bp.a21), "braiding after its inverse is the identity bimodule", clauses);
    round(&bp.inverse, &bp.forward, &Bimodule::regular(&bp.a12), "inverse after the braiding is the identity bimodule", clauses);

    // naturality in the first slot against the hom bimodule Hom(v2, reg)
    let f = internal_hom(&fx.dm, &v2, reg);
    let ap = &f.left;
    let a0 = &f.right;
    let reg_b = Bimodule::regular(&b);
    let bp2 = braiding_bimodule(ap, &b);
    let bp1 = braiding_bimodule(a0, &b);
    let lhs = compose_bimodules(&bp2.forward, &braided_tensor_bimodules(&f, &reg_b), cap);
    let rhs = compose_bimodules(&braided_tensor_bimodules(&reg_b, &f), &bp1.forward, cap);
    match (lhs, rhs) {
        (Ok(l), Ok(r)) => match bimodule_iso(&l.bim, &r.bim, seed, DEFAULT_TRIALS) {
            Ok(cert) => push_cert(clauses, "naturality square commutes up to certified isomorphism", &cert),
            Err(e) => push(clauses, "naturality square commutes up to certified isomorphism", false, e.to_string()),
        },
        (Err(e), _) | (_, Err(e)) => {
            push(clauses, "naturality square commutes up to certified isomorphism", false, e.to_string())
        }
    }

    // hexagons on the triple (a, b, c); the braided tensor product is
    // strictly associative, so no reassociation twists appear
    let bc = braided_tensor_algebras(&b, &c);
    let ab = braided_tensor_algebras(&a, &b);
    let bp_ab = braiding_bimodule(&a, &b);
    let bp_ac = braiding_bimodule(&a, &c);
    let bp_bc = braiding_bimodule(&b, &c);
    let lhs = braiding_bimodule(&a, &bc).forward;
    let rhs = compose_bimodules(
        &braided_tensor_bimodules(&Bimodule::regular(&b), &bp_ac.forward),
        &braided_tensor_bimodules(&bp_ab.forward, &Bimodule::regular(&c)),
        cap,
    );
    match rhs {
        Ok(r) => match bimodule_iso(&lhs, &r.bim, seed, DEFAULT_TRIALS) {
            Ok(cert) => push_cert(clauses, "hexagon for braiding past a product in the second slot", &cert),
            Err(e) => push(clauses, "hexagon for braiding past a product in the second slot", false, e.to_string()),
        },
        Err(e) => push(clauses, "hexagon for braiding past a product in the second slot", false, e.to_string()),
    }
    let lhs = braiding_bimodule(&ab, &c).forward;
    let rhs = compose_bimodules(
        &braided_tensor_bimodules(&bp_ac.forward, &Bimodule::regular(&b)),
        &braided_tensor_bimodules(&Bimodule::regular(&a), &bp_bc.forward),
        cap,
    );
    match rhs {
        Ok(r) => match bimodule_iso(&lhs, &r.bim, seed, DEFAULT_TRIALS) {
            Ok(cert) => push_cert(clauses, "hexagon for braiding a product in the first slot", &cert),
            Err(e) => push(clauses, "hexagon for braiding a product in the first slot", false, e.to_string()),
        },
        Err(e) => push(clauses, "hexagon for braiding a product in the first slot", false, e.to_string()),
    }

    push_report(
        clauses,
        "braiding between endomorphism algebras matches the braided product of hom bimodules",
        &check_braiding_for_end(&fx.dm, reg, &v2),
    );
}

/// Criterion 7. Balance: a certified algebra automorphism with a printed
/// two-sided inverse, a compatible balance bimodule, and the exact matrix
/// balance law on a pair of endomorphism algebras. The degenerate trivial
/// braiding case is the sanctioned instance; a root-of-unity fixture
/// exercises every factor nontrivially; the ribbonless double is excluded
/// with its nonexistence certificate.
fn criterion_balance(clauses: &mut Vec<Clause>) {
    let pair_law = |fxname: &str, a: &Rc<LLinAlg>, b: &Rc<LLinAlg>, clauses: &mut Vec<Clause>| -> Option<(Mat, Mat)> {
        let bal_a = match balance_automorphism(a) {
            Ok(x) => x,
            Err(e) => {
                push(clauses, &format!("{}: balance automorphism", fxname), false, e.to_string());
                return None;
            }
        };
        push_report(clauses, &format!("{}: balance is an automorphism with a two-sided inverse", fxname), &bal_a.report);
        let bb = balance_bimodule(a, &bal_a.mat);
        push_report(clauses, &format!("{}: balance bimodule is compatible", fxname), &check_l_compatible(&bb));
        let bal_b = match balance_automorphism(b) {
            Ok(x) => x,
            Err(e) => {
                push(clauses, &format!("{}: balance automorphism on the partner", fxname), false, e.to_string());
                return None;
            }
        };
        let ab = braided_tensor_algebras(a, b);
        let bal_ab = match balance_automorphism(&ab) {
            Ok(x) => x,
            Err(e) => {
                push(clauses, &format!("{}: balance automorphism on the product", fxname), false, e.to_string());
                return None;
            }
        };
        let ta = t_iso(a, b);
        let tb = t_iso(b, a);
        let monodromy = tb.mat.mul(&ta.mat);
        let rhs = monodromy.mul(&bal_a.mat.tensor_with(&bal_b.mat));
        push(
            clauses,
            &format!("{}: balance of a product is the double exchange after the factor balances", fxname),
            bal_ab.mat == rhs,
            "exact matrix identity fails".to_string(),
        );
        Some((bal_ab.mat, monodromy))
    };

    let triv_r = setup("kz2-trivial");
    let reps = fixture_reps(&triv_r.ctx, "kz2-trivial");
    let v2 = reps[0].direct_sum(&reps[1]);
    let a = internal_end(&triv_r.dm, &reps[2]);
    let b = internal_end(&triv_r.dm, &v2);
    if let Some((bal_ab, mono)) = pair_law("kz2-trivial", &a, &b, clauses) {
        let id = Mat::identity(triv_r.ctx.field(), bal_ab.rows);
        push(
            clauses,
            "kz2-trivial: degenerate case collapses to the identity",
            bal_ab == id && mono == id,
            "trivial braiding produced a nontrivial balance".to_string(),
        );
    }

    let kz4 = setup("kz4");
    let reps = fixture_reps(&kz4.ctx, "kz4");
    let v2 = reps[0].direct_sum(&reps[1]); // trivial (+) first character
    let a = internal_end(&kz4.dm, &reps[4]);
    let b = internal_end(&kz4.dm, &v2);
    if let Some((bal_ab, mono)) = pair_law("kz4", &a, &b, clauses) {
        let id = Mat::identity(kz4.ctx.field(), bal_ab.rows);
        push(
            clauses,
            "kz4: instance is nondegenerate on both sides of the law",
            bal_ab != id && mono != id,
            "intended nontrivial instance degenerated".to_string(),
        );
    }

    let dh4 = setup("dh4");
    let reps = fixture_reps(&dh4.ctx, "dh4");
    let end = internal_end(&dh4.dm, &reps[2]);
    let refused = matches!(balance_automorphism(&end), Err(EngineError::Input(ref m)) if m.contains("ribbon"));
    let base = fixtures::h4();
    let d = fixtures::dh4();
    let decision = fixtures::ribbon_search(&d, &fixtures::double_group_likes(&base, &d));
    push(
        clauses,
        "dh4: ribbonless base refused with the nonexistence certificate",
        refused && decision.found.is_none(),
        "balance on the ribbonless double was not refused cleanly".to_string(),
    );
}

/// Criterion 8. Hom composition over a middle object with a unit summand,
/// unitality on both sides, associativity of composition, and the
/// informational no-claim record for a middle object without the summand.
fn criterion_composition(seed: u64, cap: usize, clauses: &mut Vec<Clause>) {
    let fx = setup("kz2");
    let reps = fixture_reps(&fx.ctx, "kz2");
    let triv = &reps[0];
    let sign = &reps[1];
    let reg = &reps[2];
    let v2 = reps[0].direct_sum(&reps[1]);
    match check_hom_composition(&fx.dm, sign, &v2, reg, cap, seed, DEFAULT_TRIALS) {
        Ok(out) => {
            push_cert(clauses, "composite over a unit-summand middle matches the direct hom", &out.certificate);
            push(
                clauses,
                "middle object certifies its unit summand",
                out.middle_has_unit_summand && out.composite_dim == sign.dim * reg.dim,
                format!("summand flag {}, composite dim {}", out.middle_has_unit_summand, out.composite_dim),
            );
        }
        Err(e) => push(clauses, "composite over a unit-summand middle matches the direct hom", false, e.to_string()),
    }

    let hom_uw = internal_hom(&fx.dm, &v2, reg);
    let unit_w = internal_hom(&fx.dm, reg, reg);
    let unit_u = internal_hom(&fx.dm, &v2, &v2);
    let round = |b2: &Bimodule, b1: &Bimodule, name: &str, clauses: &mut Vec<Clause>| {
        match compose_bimodules(b2, b1, cap) {
            Ok(comp) => match bimodule_iso(&comp.bim, &hom_uw, seed, DEFAULT_TRIALS) {
                Ok(cert) => push_cert(clauses, name, &cert),
                Err(e) => push(clauses, name, false, e.to_string()),
            },
            Err(e) => push(clauses, name, false, e.to_string()),
        }
    };
    round(&unit_w, &hom_uw, "composition with the endomorphism bimodule is unital on the left", clauses);
    round(&hom_uw, &unit_u, "composition with the endomorphism bimodule is unital on the right", clauses);

    // associativity along sign -> v2 -> reg -> triv
    let b1 = internal_hom(&fx.dm, sign, &v2);
    let b2 = internal_hom(&fx.dm, &v2, reg);
    let b3 = internal_hom(&fx.dm, reg, triv);
    let target = internal_hom(&fx.dm, sign, triv);
    let left = compose_bimodules(&b3, &compose_bimodules(&b2, &b1, cap).expect("inner composite").bim, cap);
    let right = compose_bimodules(&compose_bimodules(&b3, &b2, cap).expect("inner composite").bim, &b1, cap);
    match (left, right) {
        (Ok(l), Ok(r)) => {
            match bimodule_iso(&l.bim, &r.bim, seed, DEFAULT_TRIALS) {
                Ok(cert) => push_cert(clauses, "both association orders agree", &cert),
                Err(e) => push(clauses, "both association orders agree", false, e.to_string()),
            }
            match bimodule_iso(&l.bim, &target, seed, DEFAULT_TRIALS) {
                Ok(cert) => push_cert(clauses, "triple composite matches the direct hom", &cert),
                Err(e) => push(clauses, "triple composite matches the direct hom", false, e.to_string()),
            }
        }
        (Err(e), _) | (_, Err(e)) => push(clauses, "both association orders agree", false, e.to_string()),
    }

    // middle without a certified unit summand: recorded, not claimed
    match check_hom_composition(&fx.dm, triv, sign, reg, cap, seed, DEFAULT_TRIALS) {
        Ok(out) => push(
            clauses,
            "middle without a unit summand certificate is recorded as no-claim",
            !out.middle_has_unit_summand,
            format!("summand flag unexpectedly {}", out.middle_has_unit_summand),
        ),
        Err(e) => push(clauses, "middle without a unit summand certificate is recorded as no-claim", false, e.to_string()),
    }
}

/// Criterion 9. Scrambled direct sums of a hom bimodule over the
/// factorizable double: the multiplicity is recovered with an isomorphism
/// certificate for N in {1, 2, 3}; a degenerate base is refused.
fn criterion_decomposition(seed: u64, clauses: &mut Vec<Clause>) {
    let fx = setup("dh4");
    let reps = fixture_reps(&fx.ctx, "dh4");
    let sign = &reps[1];
    let w2 = reps[0].direct_sum(&reps[1]);
    let hom = internal_hom(&fx.dm, sign, &w2);
    for n in 1..=3usize {
        let mut sum = hom.clone();
        for _ in 1..n {
            sum = sum.direct_sum(&hom);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (n as u64));
        let scrambled = sum.transport(&random_invertible(fx.ctx.field(), sum.dim(), &mut rng));
        match decompose_compatible(&fx.dm, &scrambled, sign, &w2, seed, DEFAULT_TRIALS) {
            Ok((m, cert)) => push(
                clauses,
                &format!("multiplicity {} recovered from a scrambled sum", n),
                m == n && cert.is_iso(),
                format!("recovered {} with {}", m, cert_detail(&cert)),
            ),
            Err(e) => push(clauses, &format!("multiplicity {} recovered from a scrambled sum", n), false, e.to_string()),
        }
    }
    let kz2 = setup("kz2");
    let reps = fixture_reps(&kz2.ctx, "kz2");
    let v2 = reps[0].direct_sum(&reps[1]);
    let hom = internal_hom(&kz2.dm, &reps[1], &v2);
    let refused = matches!(
        decompose_compatible(&kz2.dm, &hom, &reps[1], &v2, seed, DEFAULT_TRIALS),
        Err(EngineError::Input(ref m)) if m.contains("factorizable")
    );
    push(
        clauses,
        "degenerate base is refused",
        refused,
        "decomposition over a non-factorizable base was not refused".to_string(),
    );
}

/// Criterion 10. Surface words: every single generator evaluates to a
/// bimodule certified isomorphic to the predicted hom of boundary tensor
/// powers with the predicted dimension; a parsed composite word round-trips;
/// the braid image matches the braiding bimodule route; the twist image,
/// the balance bimodule, and the regular bimodule coincide up to certified
/// isomorphism; genus reports build within cap and refuse beyond it;
/// certificates are reproducible for a fixed seed.
fn criterion_words(seed: u64, cap: usize, clauses: &mut Vec<Clause>) {
    let fx = setup("kz2");
    let reps = fixture_reps(&fx.ctx, "kz2");
    let v = reps[0].direct_sum(&reps[1]);
    let singles: Vec<(CobExpr, usize)> = vec![
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
        (CobExpr::Braid(1, 1), 16),
        (CobExpr::BraidInv(1, 1), 16),
    ];
    for (e, dim) in &singles {
        match evaluate_fv(&fx.dm, &v, e, cap, seed, DEFAULT_TRIALS) {
            Ok(res) => push(
                clauses,
                &format!("{} evaluates to its predicted hom class", e),
                res.certificate.is_iso() && res.compat.passed && res.bim.dim() == *dim,
                format!(
                    "dim {} (predicted {}), compat {}, {}",
                    res.bim.dim(),
                    dim,
                    res.compat.passed,
                    cert_detail(&res.certificate)
                ),
            ),
            Err(e2) => push(clauses, &format!("{} evaluates to its predicted hom class", e), false, e2.to_string()),
        }
    }
    let word = "(compose (mult) (tensor (id 1) (unit)))";
    let parsed = parse_cob(word).expect("grammar accepts the composite word");
    let sig = typecheck(&parsed).expect("composite word typechecks");
    match evaluate_fv(&fx.dm, &v, &parsed, cap, seed, DEFAULT_TRIALS) {
        Ok(res) => push(
            clauses,
            "parsed composite word evaluates to its predicted hom class",
            sig == (1, 1) && res.certificate.is_iso() && res.compat.passed && res.bim.dim() == 4,
            format!("signature {:?}, dim {}, {}", sig, res.bim.dim(), cert_detail(&res.certificate)),
        ),
        Err(e) => push(clauses, "parsed composite word evaluates to its predicted hom class", false, e.to_string()),
    }
    push_report(
        clauses,
        "braid image route matches the braided product of hom bimodules",
        &check_braiding_for_end(&fx.dm, &v, &v),
    );
    match balance_consistency(&fx.dm, &v, seed, DEFAULT_TRIALS) {
        Ok(tc) => {
            push_report(clauses, "twist image balance automorphism certified", &tc.balance_report);
            push_report(clauses, "twist image balance bimodule compatible", &tc.balance_compat);
            push(
                clauses,
                "twist image equals the regular bimodule on the nose here",
                tc.twist_equals_regular,
                "trivial coribbon form produced a nonregular twist image".to_string(),
            );
            push_cert(clauses, "twist image isomorphic to the balance bimodule", &tc.twist_vs_balance);
            push_cert(clauses, "balance bimodule isomorphic to the regular bimodule", &tc.balance_vs_regular);
        }
        Err(e) => push(clauses, "twist image balance automorphism certified", false, e.to_string()),
    }
    match evaluate_fv(&fx.dm, &v, &CobExpr::Mult, cap, seed, DEFAULT_TRIALS) {
        Ok(again) => {
            let base = evaluate_fv(&fx.dm, &v, &CobExpr::Mult, cap, seed, DEFAULT_TRIALS).expect("repeat run");
            let same = match (&base.certificate.verdict, &again.certificate.verdict) {
                (
                    crate::morita::IsoVerdict::Iso { map: m1, inv: i1 },
                    crate::morita::IsoVerdict::Iso { map: m2, inv: i2 },
                ) => m1 == m2 && i1 == i2 && base.certificate.trials == again.certificate.trials,
                _ => false,
            };
            push(
                clauses,
                "certificate search is reproducible for a fixed seed",
                same,
                "two runs with one seed disagree".to_string(),
            );
        }
        Err(e) => push(clauses, "certificate search is reproducible for a fixed seed", false, e.to_string()),
    }

    let dh4 = setup("dh4");
    match alekseev_report(&dh4.dm, 0, cap) {
        Ok(rep) => push(
            clauses,
            "genus zero algebra is the unit algebra",
            rep.built && rep.predicted_dim == 1 && rep.check.as_ref().map(|c| c.passed) == Some(true),
            format!("built {}, predicted {}", rep.built, rep.predicted_dim),
        ),
        Err(e) => push(clauses, "genus zero algebra is the unit algebra", false, e.to_string()),
    }
    match alekseev_report(&dh4.dm, 1, cap) {
        Ok(rep) => push(
            clauses,
            "genus one algebra of dimension 256 builds and passes its checker",
            rep.built && rep.predicted_dim == 256 && rep.check.as_ref().map(|c| c.passed) == Some(true),
            format!(
                "built {}, predicted {}, check {}",
                rep.built,
                rep.predicted_dim,
                rep.check.as_ref().map(|c| c.passed).unwrap_or(false)
            ),
        ),
        Err(e) => push(clauses, "genus one algebra of dimension 256 builds and passes its checker", false, e.to_string()),
    }
    match alekseev_report(&dh4.dm, 2, cap) {
        Ok(rep) => push(
            clauses,
            "genus two dimension 65536 is reported and the construction is refused by the cap",
            !rep.built
                && rep.predicted_dim == 65536
                && rep.refusal.as_deref().map(|r| r.contains("cap")) == Some(true),
            format!("built {}, predicted {}, refusal {:?}", rep.built, rep.predicted_dim, rep.refusal),
        ),
        Err(e) => push(clauses, "genus two dimension 65536 is reported and the construction is refused by the cap", false, e.to_string()),
    }
    let refused = matches!(
        alekseev_report(&fx.dm, 1, cap),
        Err(EngineError::Input(ref m)) if m.contains("factorizable")
    );
    push(
        clauses,
        "genus reports refuse a degenerate base",
        refused,
        "non-factorizable base was not refused".to_string(),
    );
}

/// Criterion 11. The crossed action battery on the carrier algebra of the
/// double, and the divergence witness: the outer bimodule on the function
/// algebra satisfies every plain bimodule law while the two induced
/// half-braiding routes disagree and the coherence law fails; on an
/// endomorphism algebra the same construction is compatible.
fn criterion_crossed(clauses: &mut Vec<Clause>) {
    for name in ["kz2", "kz4", "dh4"] {
        let fx = setup(name);
        let a = LLinAlg::from_carrier(&fx.cd);
        push_report(clauses, &format!("{}: crossed action laws on the carrier", name), &crate::morita::check_yd_crossed(&a));
    }
    let fx = setup("kz2");
    let wits = fixture_reps(&fx.ctx, "kz2");
    let carrier = LLinAlg::from_carrier(&fx.cd);
    let outer = double_regular_bimodule(&carrier);
    push_report(clauses, "outer bimodule on the carrier satisfies the plain bimodule laws", &check_bimodule(&outer));
    let compat = check_l_compatible(&outer);
    push(
        clauses,
        "outer bimodule on the carrier fails the coherence law",
        !compat.passed,
        "coherence unexpectedly holds".to_string(),
    );
    let diverging: Vec<&Rep> = wits.iter().filter(|x| hbl_mat(&outer, x) != hbr_mat(&outer, x)).collect();
    push(
        clauses,
        "left and right route matrices disagree at a witness",
        !hb_routes_agree(&outer, &wits) && !diverging.is_empty(),
        "no diverging witness found".to_string(),
    );
    if let Some(x) = diverging.first() {
        let l = hbl_mat(&outer, x);
        let r = hbr_mat(&outer, x);
        push(
            clauses,
            "divergence witness is a concrete matrix inequality",
            l != r,
            format!("routes coincide at {}", x.name),
        );
    }
    let end = internal_end(&fx.dm, &wits[2]);
    let outer_end = double_regular_bimodule(&end);
    push_report(
        clauses,
        "outer bimodule on an endomorphism algebra is compatible",
        &check_l_compatible(&outer_end),
    );
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::DEFAULT_CAP;

    #[test]
    fn axiom_criterion_shape() {
        let c = run_criterion(1, DEFAULT_SEED, DEFAULT_CAP);
        assert!(!c.hard_failed(), "{:#?}", c.clauses.iter().map(|x| (&x.name, x.status, &x.detail)).collect::<Vec<_>>());
        assert!(!c.attained(), "the ribbonless double must keep this criterion from full attainment");
        let unatt: Vec<&Clause> =
            c.clauses.iter().filter(|x| x.status == ClauseStatus::Unattainable).collect();
        assert_eq!(unatt.len(), 1);
        assert!(unatt[0].name.contains("dh4"));
        assert!(unatt[0].detail.contains("no ribbon form exists"));
        assert!(c.status_line().contains("FAIL"));
        assert!(c.status_line().contains("unattainable"));
    }

    #[test]
    fn canonical_map_criterion_passes() {
        let c = run_criterion(4, DEFAULT_SEED, DEFAULT_CAP);
        assert!(c.attained(), "{}", c.status_line());
        assert!(c.status_line().contains("PASS"));
    }

    #[test]
    fn json_shape_is_stable() {
        let s = SuiteResult {
            seed: DEFAULT_SEED,
            cap: DEFAULT_CAP,
            criteria: vec![run_criterion(4, DEFAULT_SEED, DEFAULT_CAP)],
        };
        let v = suite_to_json(&s);
        assert_eq!(v["seed"], DEFAULT_SEED);
        assert_eq!(v["hard_failures"], 0);
        assert_eq!(v["criteria"][0]["id"], 4);
        assert_eq!(v["criteria"][0]["clauses"][0]["status"], "pass");
    }

    #[test]
    fn budgets_cover_all_criteria() {
        for id in 1..=CRITERIA {
            assert!(budget_millis(id) >= 5_000);
            assert!(!criterion_title(id).is_empty());
        }
    }
}
