//! JSON-only command line front end. Every subcommand prints a single JSON
//! report with a stable schema version field and exits 0 on success, 1 when
//! a mathematical check fails (the report carries the witnesses), 2 on input
//! errors, and 3 on resource-cap refusals. Reports are deterministic for a
//! fixed seed; object keys are emitted in sorted order.

use clap::{Parser, Subcommand};
use hopfbim::cobeval::{evaluate_fv, parse_cob};
use hopfbim::coend::{check_coend_laws, transmute, Coend};
use hopfbim::drinfeld::{
    check_drinfeld, check_qmm_compatible, drinfeld_map, is_factorizable, DrinfeldMap, Qmm,
};
use hopfbim::error::{check_cap, EngineError, Result, DEFAULT_CAP};
use hopfbim::fixtures;
use hopfbim::hopf::{
    check_hopf, check_quasitriangular, check_ribbon, drinfeld_double, dual_hopf, CheckReport,
    Hopf, HopfCtx,
};
use hopfbim::iend::{check_hom_composition, internal_end, internal_hom, rep_moment_matrix};
use hopfbim::io::{hopf_to_json, load_hopf};
use hopfbim::linalg::Mat;
use hopfbim::morita::{
    balance_automorphism, balance_bimodule, bimodule_iso, braiding_bimodule, check_l_compatible,
    check_l_linear, check_llin_hb_roundtrip, compose_bimodules, Bimodule, IsoCertificate,
    IsoVerdict, LLinAlg,
};
use hopfbim::rep::{fixture_reps, regular_rep, trivial_rep, Rep};
use hopfbim::scalar::FieldDesc;
use hopfbim::suite::{run_suite, suite_to_json, DEFAULT_SEED, DEFAULT_TRIALS};
use serde_json::{json, Value};
use std::rc::Rc;

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(
    name = "hopfbim",
    version,
    about = "Exact checks and certified constructions for half-braided algebras and their bimodules"
)]
struct Cli {
    /// Bundled fixture name (triv, kz2, kz2-trivial, kz4, h4, dh4) or a JSON file path
    #[arg(long, global = true, default_value = "kz2")]
    fixture: String,
    /// Expected coefficient field (Q, cyc:N, Fp:P); loading fails on mismatch
    #[arg(long, global = true)]
    field: Option<String>,
    /// Seed for certificate searches
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Bound on pre-quotient ambient dimensions
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Print the report schema version and exit
    #[arg(long = "json-schema-version", global = true)]
    json_schema_version: bool,
    #[command(subcommand)]
    cmd: Option<Cmd>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the algebra, coalgebra, antipode, braiding, and ribbon law suites
    CheckHopf,
    /// Emit the dual algebra with its law suite
    Dual,
    /// Emit the double with its law suites
    Double,
    /// Build the braided function algebra and run its law battery
    Transmute,
    /// Law battery and half-braiding round trip for a structured algebra
    CheckLlinear {
        /// Endomorphism algebra of this module; the carrier algebra when absent
        #[arg(long)]
        rep: Option<String>,
    },
    /// Compatibility battery for the hom bimodule between two modules
    CheckCompatible {
        #[arg(long, default_value = "trivial")]
        rep: String,
        #[arg(long, default_value = "trivial")]
        rep2: String,
    },
    /// Compose hom bimodules over a middle module and certify against the direct hom
    Compose {
        #[arg(long, default_value = "trivial")]
        rep: String,
        #[arg(long, default_value = "trivial")]
        rep2: String,
        #[arg(long, default_value = "trivial")]
        rep3: String,
    },
    /// Braiding bimodule between two endomorphism algebras, with invertibility certificates
    Braid {
        #[arg(long, default_value = "trivial")]
        rep: String,
        #[arg(long, default_value = "trivial")]
        rep2: String,
    },
    /// Balance automorphism of an endomorphism algebra, with inverse and compatibility
    Balance {
        #[arg(long, default_value = "trivial")]
        rep: String,
    },
    /// Canonical map law battery, rank, and factorizability
    Drinfeld,
    /// Endomorphism algebra of a module: dimensions, law battery, moment matrix
    End {
        #[arg(long, default_value = "trivial")]
        rep: String,
    },
    /// Evaluate a surface word file at a module with a unit summand
    EvalCob {
        /// File containing one s-expression word
        #[arg(long)]
        expr: String,
        /// Module name; summands may be joined with '+'
        #[arg(long)]
        rep: String,
    },
    /// Run the full acceptance battery over the bundled fixtures
    Suite,
}

fn report_json(r: &CheckReport) -> Value {
    json!({
        "name": r.name,
        "passed": r.passed,
        "failures": r.failures.iter().map(|w| json!({
            "law": w.law,
            "at": w.at,
            "detail": w.detail,
        })).collect::<Vec<_>>(),
    })
}

fn mat_json(m: &Mat) -> Value {
    // rows [in, out, scalar], same convention as fixture files
    let mut rows = Vec::new();
    for i in 0..m.cols {
        for j in 0..m.rows {
            let v = m.get(j, i);
            if !v.is_zero() {
                rows.push(json!([i, j, v.serialize()]));
            }
        }
    }
    json!({"rows": m.rows, "cols": m.cols, "entries": rows})
}

fn cert_json(c: &IsoCertificate) -> Value {
    let mut v = json!({
        "verdict": c.verdict_name(),
        "seed": c.seed,
        "trials": c.trials,
        "hom_dim": c.hom_dim,
    });
    if let IsoVerdict::Iso { map, inv } = &c.verdict {
        v["map"] = mat_json(map);
        v["inverse"] = mat_json(inv);
    }
    v
}

struct Ctx {
    label: String,
    hopf: Hopf,
    ctx: Rc<HopfCtx>,
    cd: Rc<Coend>,
    dm: DrinfeldMap,
}

fn load(cli: &Cli) -> Result<Hopf> {
    let h = load_hopf(&cli.fixture)?;
    if let Some(f) = &cli.field {
        let want = FieldDesc::parse(f)
            .ok_or_else(|| EngineError::Input(format!("unknown field {:?}; use Q, cyc:N or Fp:P", f)))?;
        if want != h.field {
            return Err(EngineError::Input(format!(
                "fixture {} is over {}, not the requested {}",
                h.name, h.field, want
            )));
        }
    }
    Ok(h)
}

fn context(cli: &Cli) -> Result<Ctx> {
    let hopf = load(cli)?;
    let ctx = HopfCtx::new(hopf.clone()).map_err(EngineError::Input)?;
    let cd = Rc::new(transmute(&ctx)?);
    let dm = drinfeld_map(&cd);
    Ok(Ctx { label: cli.fixture.clone(), hopf, ctx, cd, dm })
}

/// Witness modules: the curated list for bundled fixtures, the trivial and
/// regular modules otherwise.
fn witnesses(cx: &Ctx) -> Vec<Rep> {
    if fixtures::by_name(&cx.label).is_some() {
        fixture_reps(&cx.ctx, &cx.label)
    } else {
        vec![trivial_rep(cx.ctx.clone()), regular_rep(cx.ctx.clone())]
    }
}

/// Resolve a module name; '+' joins summands, names come from the curated
/// list plus "trivial" and "regular".
fn resolve_rep(cx: &Ctx, spec: &str) -> Result<Rep> {
    let pool = witnesses(cx);
    let mut parts = Vec::new();
    for part in spec.split('+') {
        let part = part.trim();
        let found = if part == "trivial" {
            Some(trivial_rep(cx.ctx.clone()))
        } else if part == "regular" {
            Some(regular_rep(cx.ctx.clone()))
        } else {
            pool.iter().find(|r| r.name == part).cloned()
        };
        match found {
            Some(r) => parts.push(r),
            None => {
                let mut names: Vec<&str> = pool.iter().map(|r| r.name.as_str()).collect();
                for extra in ["trivial", "regular"] {
                    if !names.contains(&extra) {
                        names.push(extra);
                    }
                }
                return Err(EngineError::Input(format!(
                    "unknown module {:?} for {}; available: {:?}, summands joined with '+'",
                    part, cx.label, names
                )));
            }
        }
    }
    let mut it = parts.into_iter();
    let first = it.next().ok_or_else(|| EngineError::Input("empty module name".to_string()))?;
    Ok(it.fold(first, |acc, r| acc.direct_sum(&r)))
}

fn ambient_guard(dim: usize, cap: usize, what: &str) -> Result<()> {
    check_cap(dim.saturating_mul(dim).saturating_mul(dim), cap, what)
}

fn run(cli: &Cli, cmd: &Cmd) -> Result<(Value, bool)> {
    match cmd {
        Cmd::CheckHopf => {
            let h = load(cli)?;
            ambient_guard(h.dim, cli.cap, "axiom battery ambient")?;
            let mut reports = vec![check_hopf(&h)];
            if h.rmatrix.is_some() {
                reports.push(check_quasitriangular(&h));
            }
            if h.ribbon.is_some() {
                reports.push(check_ribbon(&h));
            }
            let passed = reports.iter().all(|r| r.passed);
            Ok((
                json!({
                    "command": "check-hopf",
                    "fixture": h.name,
                    "dim": h.dim,
                    "field": h.field.to_string(),
                    "has_braiding_structure": h.rmatrix.is_some(),
                    "has_ribbon_form": h.ribbon.is_some(),
                    "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                }),
                passed,
            ))
        }
        Cmd::Dual => {
            let h = load(cli)?;
            ambient_guard(h.dim, cli.cap, "axiom battery ambient")?;
            let d = dual_hopf(&h);
            let r = check_hopf(&d);
            let passed = r.passed;
            Ok((
                json!({
                    "command": "dual",
                    "fixture": h.name,
                    "report": report_json(&r),
                    "algebra": hopf_to_json(&d),
                }),
                passed,
            ))
        }
        Cmd::Double => {
            let h = load(cli)?;
            ambient_guard(h.dim * h.dim, cli.cap, "axiom battery ambient")?;
            let d = drinfeld_double(&h);
            let reports = vec![check_hopf(&d), check_quasitriangular(&d)];
            let passed = reports.iter().all(|r| r.passed);
            Ok((
                json!({
                    "command": "double",
                    "fixture": h.name,
                    "dim": d.dim,
                    "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                    "algebra": hopf_to_json(&d),
                }),
                passed,
            ))
        }
        Cmd::Transmute => {
            let cx = context(cli)?;
            ambient_guard(cx.cd.dim, cli.cap, "law battery ambient")?;
            let r = check_coend_laws(&cx.cd, &witnesses(&cx));
            let passed = r.passed;
            Ok((
                json!({
                    "command": "transmute",
                    "fixture": cx.hopf.name,
                    "dim": cx.cd.dim,
                    "unit": cx.cd.unit.iter().map(|s| s.serialize()).collect::<Vec<_>>(),
                    "counit": cx.cd.counit.iter().map(|s| s.serialize()).collect::<Vec<_>>(),
                    "product_entries": cx.cd.prod.nnz(),
                    "coproduct_entries": cx.cd.comult.nnz(),
                    "report": report_json(&r),
                }),
                passed,
            ))
        }
        Cmd::CheckLlinear { rep } => {
            let cx = context(cli)?;
            let (a, what) = match rep {
                None => (LLinAlg::from_carrier(&cx.cd), "carrier".to_string()),
                Some(name) => {
                    let v = resolve_rep(&cx, name)?;
                    (internal_end(&cx.dm, &v), format!("End({})", v.name))
                }
            };
            ambient_guard(a.dim(), cli.cap, "law battery ambient")?;
            let reports = vec![check_l_linear(&a), check_llin_hb_roundtrip(&a, &witnesses(&cx))];
            let passed = reports.iter().all(|r| r.passed);
            Ok((
                json!({
                    "command": "check-llinear",
                    "fixture": cx.hopf.name,
                    "algebra": what,
                    "dim": a.dim(),
                    "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                }),
                passed,
            ))
        }
        Cmd::CheckCompatible { rep, rep2 } => {
            let cx = context(cli)?;
            let v = resolve_rep(&cx, rep)?;
            let w = resolve_rep(&cx, rep2)?;
            let b = internal_hom(&cx.dm, &v, &w);
            ambient_guard(b.dim(), cli.cap, "law battery ambient")?;
            let mut reports = vec![check_l_compatible(&b)];
            if is_factorizable(&cx.dm) {
                let q2 = Qmm {
                    target: internal_end(&cx.dm, &w).base.clone(),
                    mat: rep_moment_matrix(&w),
                };
                let q1 = Qmm {
                    target: internal_end(&cx.dm, &v).base.clone(),
                    mat: rep_moment_matrix(&v),
                };
                reports.push(check_qmm_compatible(&b, &q2, &q1));
            }
            let passed = reports.iter().all(|r| r.passed);
            Ok((
                json!({
                    "command": "check-compatible",
                    "fixture": cx.hopf.name,
                    "bimodule": b.name,
                    "dim": b.dim(),
                    "moment_route_included": reports.len() > 1,
                    "reports": reports.iter().map(report_json).collect::<Vec<_>>(),
                }),
                passed,
            ))
        }
        Cmd::Compose { rep, rep2, rep3 } => {
            let cx = context(cli)?;
            let u = resolve_rep(&cx, rep)?;
            let v = resolve_rep(&cx, rep2)?;
            let w = resolve_rep(&cx, rep3)?;
            let out = check_hom_composition(&cx.dm, &u, &v, &w, cli.cap, cli.seed, DEFAULT_TRIALS)?;
            let passed = out.certificate.is_iso();
            Ok((
                json!({
                    "command": "compose",
                    "fixture": cx.hopf.name,
                    "source": u.name,
                    "middle": v.name,
                    "target": w.name,
                    "middle_has_unit_summand": out.middle_has_unit_summand,
                    "composite_dim": out.composite_dim,
                    "certificate": cert_json(&out.certificate),
                }),
                passed,
            ))
        }
        Cmd::Braid { rep, rep2 } => {
            let cx = context(cli)?;
            let v = resolve_rep(&cx, rep)?;
            let w = resolve_rep(&cx, rep2)?;
            let a1 = internal_end(&cx.dm, &v);
            let a2 = internal_end(&cx.dm, &w);
            ambient_guard(a1.dim() * a2.dim(), cli.cap, "braided product ambient")?;
            let bp = braiding_bimodule(&a1, &a2);
            let fwd = compose_bimodules(&bp.forward, &bp.inverse, cli.cap)?;
            let c1 = bimodule_iso(&fwd.bim, &Bimodule::regular(&bp.a21), cli.seed, DEFAULT_TRIALS)?;
            let bwd = compose_bimodules(&bp.inverse, &bp.forward, cli.cap)?;
            let c2 = bimodule_iso(&bwd.bim, &Bimodule::regular(&bp.a12), cli.seed, DEFAULT_TRIALS)?;
            let passed = bp.report.passed && c1.is_iso() && c2.is_iso();
            Ok((
                json!({
                    "command": "braid",
                    "fixture": cx.hopf.name,
                    "left": a1.base.name,
                    "right": a2.base.name,
                    "dim": bp.forward.dim(),
                    "report": report_json(&bp.report),
                    "forward_after_inverse": cert_json(&c1),
                    "inverse_after_forward": cert_json(&c2),
                }),
                passed,
            ))
        }
        Cmd::Balance { rep } => {
            let cx = context(cli)?;
            let v = resolve_rep(&cx, rep)?;
            let a = internal_end(&cx.dm, &v);
            ambient_guard(a.dim(), cli.cap, "law battery ambient")?;
            let bal = balance_automorphism(&a)?;
            let compat = check_l_compatible(&balance_bimodule(&a, &bal.mat));
            let passed = bal.report.passed && compat.passed;
            Ok((
                json!({
                    "command": "balance",
                    "fixture": cx.hopf.name,
                    "algebra": a.base.name,
                    "dim": a.dim(),
                    "report": report_json(&bal.report),
                    "compatibility": report_json(&compat),
                    "matrix": mat_json(&bal.mat),
                    "inverse": mat_json(&bal.inv),
                }),
                passed,
            ))
        }
        Cmd::Drinfeld => {
            let cx = context(cli)?;
            ambient_guard(cx.cd.dim, cli.cap, "law battery ambient")?;
            let r = check_drinfeld(&cx.dm);
            let passed = r.passed;
            Ok((
                json!({
                    "command": "drinfeld",
                    "fixture": cx.hopf.name,
                    "dim": cx.cd.dim,
                    "rank": cx.dm.rank,
                    "factorizable": is_factorizable(&cx.dm),
                    "matrix": mat_json(&cx.dm.mat),
                    "inverse": cx.dm.inverse.as_ref().map(mat_json).unwrap_or(Value::Null),
                    "report": report_json(&r),
                }),
                passed,
            ))
        }
        Cmd::End { rep } => {
            let cx = context(cli)?;
            let v = resolve_rep(&cx, rep)?;
            let a = internal_end(&cx.dm, &v);
            ambient_guard(a.dim(), cli.cap, "law battery ambient")?;
            let r = check_l_linear(&a);
            let passed = r.passed;
            Ok((
                json!({
                    "command": "end",
                    "fixture": cx.hopf.name,
                    "module": v.name,
                    "module_dim": v.dim,
                    "dim": a.dim(),
                    "moment_matrix": mat_json(&rep_moment_matrix(&v)),
                    "report": report_json(&r),
                }),
                passed,
            ))
        }
        Cmd::EvalCob { expr, rep } => {
            let cx = context(cli)?;
            let text = std::fs::read_to_string(expr)
                .map_err(|e| EngineError::Input(format!("cannot read {:?}: {}", expr, e)))?;
            let word = parse_cob(&text)?;
            let v = resolve_rep(&cx, rep)?;
            let res = evaluate_fv(&cx.dm, &v, &word, cli.cap, cli.seed, DEFAULT_TRIALS)?;
            let passed = res.compat.passed && res.certificate.is_iso();
            Ok((
                json!({
                    "command": "eval-cob",
                    "fixture": cx.hopf.name,
                    "module": v.name,
                    "expr": res.expr,
                    "genus_in": res.g_in,
                    "genus_out": res.g_out,
                    "dim": res.bim.dim(),
                    "predicted_dim": res.predicted_dim,
                    "compatibility": report_json(&res.compat),
                    "certificate": cert_json(&res.certificate),
                }),
                passed,
            ))
        }
        Cmd::Suite => {
            let s = run_suite(cli.seed, cli.cap);
            let passed = s.hard_failures() == 0;
            let mut v = suite_to_json(&s);
            v["command"] = json!("suite");
            Ok((v, passed))
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if cli.json_schema_version {
        println!("{}", serde_json::to_string_pretty(&json!({"schema": SCHEMA_VERSION})).unwrap());
        std::process::exit(0);
    }
    let Some(cmd) = &cli.cmd else {
        eprintln!("a subcommand is required; see --help");
        std::process::exit(2);
    };
    let code = match run(&cli, cmd) {
        Ok((mut v, passed)) => {
            v["schema"] = json!(SCHEMA_VERSION);
            v["seed"] = json!(cli.seed);
            v["cap"] = json!(cli.cap);
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            if passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let kind = match e {
                EngineError::Input(_) => "input",
                EngineError::Cap { .. } => "cap",
            };
            let code = match e {
                EngineError::Input(_) => 2,
                EngineError::Cap { .. } => 3,
            };
            let v = json!({
                "schema": SCHEMA_VERSION,
                "error": {"kind": kind, "message": e.to_string()},
            });
            println!("{}", serde_json::to_string_pretty(&v).unwrap());
            code
        }
    };
    std::process::exit(code);
}
