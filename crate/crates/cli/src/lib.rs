//! Suite runner and command implementations behind `dickson-verify`.

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use dickson_core::dickson::{dickson_poly, mcm_poly};
use dickson_core::gf2n::MAX_DEGREE;
use dickson_core::identities::{
    check_quotient, check_sides, oracle_on_sides, verify_ang_product_grid, verify_cancellation,
    verify_composition_grid, verify_functional_equation_range, verify_lemma2, verify_linearized,
    verify_product_grid, verify_vy_relations, IdentitySides, LinearizedData, QuotientParts,
    DEFAULT_MAX_N,
};
use dickson_core::laurent::expand_cancellation;
use dickson_core::splitting::{sweep_cases, verify_mcm_splitting};
use dickson_core::{
    field_new, CaseName, Error, FqElem, IdentityCase, PolyRing, SplittingReport, Variant,
    VerificationReport,
};
use rayon::prelude::*;
use serde::Serialize;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Sides of at most this `q` are printed in full under `--explain`.
const EXPLAIN_MAX_Q: u64 = 4;
const ORACLE_TRIALS: u32 = 64;
const FUNCTIONAL_EQUATION_MAX_K: u32 = 200;
const GRID_MAX: u32 = 50;
const ANG_PRODUCT_BOUND: i64 = 32;
const MCM_SUITE_MAX_N: u32 = 4;

/// Hard bound on `--max-n`: 8, or `DICKSON_MAX_N` when set (at most 16).
pub fn hard_cap() -> u32 {
    std::env::var("DICKSON_MAX_N")
        .ok()
        .and_then(|v| v.trim().parse::<u32>().ok())
        .map_or(DEFAULT_MAX_N, |n| n.clamp(1, MAX_DEGREE))
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub max_n: u32,
    /// Case names to keep; empty keeps everything.
    pub cases: BTreeSet<CaseName>,
    pub json: bool,
    pub explain: bool,
    pub seed: u64,
    pub jobs: usize,
    /// Zero all timings so output is byte-stable.
    pub deterministic: bool,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            max_n: 6,
            cases: BTreeSet::new(),
            json: false,
            explain: false,
            seed: 0,
            jobs: 1,
            deterministic: false,
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), String> {
        let cap = hard_cap();
        if !(1..=cap).contains(&self.max_n) {
            return Err(format!(
                "--max-n must be between 1 and {cap}, got {}",
                self.max_n
            ));
        }
        if self.jobs == 0 {
            return Err("--jobs must be at least 1".into());
        }
        Ok(())
    }

    fn wants(&self, name: CaseName) -> bool {
        self.cases.is_empty() || self.cases.contains(&name)
    }
}

/// One unit of work; each yields one or more reports.
#[derive(Clone, Debug, PartialEq)]
pub enum Task {
    /// The identity itself, optionally followed by its point oracle.
    Identity {
        name: CaseName,
        q: u64,
        oracle: bool,
    },
    Relations {
        q: u64,
    },
    Linearized {
        q: u64,
        variant: Variant,
    },
    Quotient {
        q: u64,
    },
    Lemma2 {
        q: u64,
        k: u64,
    },
    Cancellation {
        q: u64,
        variant: Variant,
    },
    FunctionalEquation {
        k_max: u32,
    },
    AngProduct {
        bound: i64,
        q: u64,
    },
    Composition {
        max: u32,
    },
    ProductFormula {
        max: u32,
    },
    Splitting {
        n: u32,
        a: FqElem,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Identity(VerificationReport),
    Splitting(SplittingReport),
}

impl Report {
    pub fn passed(&self) -> bool {
        match self {
            Report::Identity(r) => r.passed,
            Report::Splitting(r) => r.passed,
        }
    }

    fn without_timing(self) -> Self {
        match self {
            Report::Identity(r) => Report::Identity(r.without_timing()),
            other => other,
        }
    }

    /// One line of human-readable output.
    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        match self {
            Report::Identity(r) => {
                let k = r.case.extra.map(|k| format!(" k={k}")).unwrap_or_default();
                let mut line = format!(
                    "{verdict} {} q={}{k} degrees {}/{} in {:.1} ms",
                    r.case.name,
                    r.case.q,
                    r.lhs_degree,
                    r.rhs_degree,
                    r.elapsed.as_secs_f64() * 1e3
                );
                if let Some(w) = &r.witness {
                    line.push_str(&format!(" -- {w}"));
                }
                line
            }
            Report::Splitting(r) => format!(
                "{verdict} splitting n={} a={} degrees {}/{} factor degrees {:?}/{:?} fields {}/{}",
                r.n,
                r.a,
                r.deg_lhs,
                r.deg_rhs,
                r.lhs.factor_degrees,
                r.rhs.factor_degrees,
                r.lhs.splitting_degree,
                r.rhs.splitting_degree
            ),
        }
    }
}

fn orders(max_n: u32) -> impl Iterator<Item = u64> {
    (1..=max_n).map(|n| 1u64 << n)
}

/// The full suite in report order.
pub fn suite_plan(cfg: &SuiteConfig) -> Vec<Task> {
    let mut tasks = Vec::new();
    for q in orders(cfg.max_n) {
        for name in [CaseName::Acz, CaseName::Bluher] {
            tasks.push(Task::Identity {
                name,
                q,
                oracle: true,
            });
        }
        tasks.push(Task::Relations { q });
        tasks.push(Task::Linearized {
            q,
            variant: Variant::V,
        });
        tasks.push(Task::Linearized {
            q,
            variant: Variant::Y,
        });
        tasks.push(Task::Quotient { q });
        tasks.push(Task::Lemma2 { q, k: q - 1 });
        tasks.push(Task::Lemma2 { q, k: q + 1 });
        tasks.push(Task::Cancellation {
            q,
            variant: Variant::V,
        });
        tasks.push(Task::Cancellation {
            q,
            variant: Variant::Y,
        });
    }
    tasks.push(Task::FunctionalEquation {
        k_max: FUNCTIONAL_EQUATION_MAX_K,
    });
    tasks.push(Task::AngProduct {
        bound: ANG_PRODUCT_BOUND,
        q: 2,
    });
    tasks.push(Task::AngProduct {
        bound: ANG_PRODUCT_BOUND,
        q: 4,
    });
    tasks.push(Task::Composition { max: GRID_MAX });
    tasks.push(Task::ProductFormula { max: GRID_MAX });
    let mcm_max = cfg.max_n.min(MCM_SUITE_MAX_N);
    if mcm_max >= 2 {
        let cases = sweep_cases(2, mcm_max).expect("range checked above");
        tasks.extend(cases.into_iter().map(|(n, a)| Task::Splitting { n, a }));
    }
    if !cfg.cases.is_empty() {
        tasks.retain(|t| task_names(t).iter().any(|&n| cfg.wants(n)));
    }
    tasks
}

/// Case names a task can report under, for `--cases` filtering.
fn task_names(task: &Task) -> Vec<CaseName> {
    match *task {
        Task::Identity {
            name: CaseName::Acz,
            ..
        } => vec![CaseName::Acz, CaseName::OracleAcz],
        Task::Identity { name, .. } => vec![name, CaseName::OracleBluher],
        Task::Relations { .. } => vec![CaseName::Yv],
        Task::Linearized {
            variant: Variant::V,
            ..
        } => vec![CaseName::LinearizedV],
        Task::Linearized {
            variant: Variant::Y,
            ..
        } => vec![CaseName::LinearizedY],
        Task::Quotient { .. } => vec![CaseName::QuotientH],
        Task::Lemma2 { .. } => vec![CaseName::Lemma2],
        Task::Cancellation {
            variant: Variant::V,
            ..
        } => vec![CaseName::CancellationV],
        Task::Cancellation {
            variant: Variant::Y,
            ..
        } => vec![CaseName::CancellationY],
        Task::FunctionalEquation { .. } => vec![CaseName::FunctionalEquation],
        Task::AngProduct { .. } => vec![CaseName::AngProduct],
        Task::Composition { .. } => vec![CaseName::Composition],
        Task::ProductFormula { .. } => vec![CaseName::ProductFormula],
        // the splitting sweep has no case name and only runs unfiltered
        Task::Splitting { .. } => vec![],
    }
}

/// Output of one task: reports plus optional explanation text.
#[derive(Clone, Debug, Default)]
pub struct TaskOutput {
    pub reports: Vec<Report>,
    pub explanation: Option<String>,
}

fn explain_sides(sides: &IdentitySides) -> String {
    let q = sides.arena.q;
    if q > EXPLAIN_MAX_Q {
        let terms = |p: &dickson_core::identities::Bivariate| {
            p.coeffs().iter().filter(|c| !c.num().is_zero()).count()
        };
        return format!(
            "{} q={q}: both sides have X-degree {}, {} and {} nonzero X-coefficients",
            sides.name,
            q * q - 1,
            terms(&sides.lhs),
            terms(&sides.rhs)
        );
    }
    let (lhs, rhs) = sides.render();
    let a = &sides.arena;
    let mut out = format!("{} q={q}\n  LHS = {lhs}\n  RHS = {rhs}\n", sides.name);
    if sides.name == CaseName::Acz {
        out.push_str(&format!(
            "  cofactor = {}\n",
            a.bivariate.render(&a.acz_cofactor())
        ));
    }
    for w in a.field.units() {
        let k = if sides.name == CaseName::Acz {
            q - 1
        } else {
            q + 1
        };
        if let Ok(f) = a.scaled_factor(k as u32, w) {
            out.push_str(&format!("  factor w={w}: {}\n", a.bivariate.render(&f)));
        }
    }
    out
}

fn explain_quotient(parts: &QuotientParts) -> String {
    let ring = &parts.arena.bivariate;
    let q = parts.arena.q;
    if q > EXPLAIN_MAX_Q {
        return format!(
            "quotient_h q={q}: H = {}, remainder {}",
            ring.render(&parts.quotient),
            if parts.remainder.is_zero() {
                "0"
            } else {
                "nonzero"
            }
        );
    }
    format!(
        "quotient_h q={q}\n  F = {}\n  G = {}\n  H = F / G = {}\n  remainder = {}\n  h' = {}\n",
        ring.render(&parts.f),
        ring.render(&parts.g),
        ring.render(&parts.quotient),
        ring.render(&parts.remainder),
        ring.render(&ring.derivative(&parts.h)),
    )
}

fn explain_cancellation(q: u64, variant: Variant) -> Result<String, Error> {
    let e = expand_cancellation(q, variant)?;
    let mut out = format!("cancellation_{} q={q}\n", variant.name());
    for ((a, b), p) in &e.products {
        out.push_str(&format!("  <U^{a}><U^{b}> = {p}\n"));
    }
    out.push_str(&format!("  sum = {}\n", e.sum));
    Ok(out)
}

fn explain_relations(q: u64) -> Result<String, Error> {
    let d = LinearizedData::new(q)?;
    let r = &d.ring;
    if q > EXPLAIN_MAX_Q {
        return Ok(format!(
            "relations q={q}: y + v = {}",
            r.render(&r.add(&d.y, &d.v))
        ));
    }
    Ok(format!(
        "relations q={q}\n  v = {}\n  y = {}\n  z = {}\n  y + v = {}\n",
        r.render(&d.v),
        r.render(&d.y),
        r.render(&d.z),
        r.render(&r.add(&d.y, &d.v))
    ))
}

pub fn run_task(task: &Task, cfg: &SuiteConfig) -> Result<TaskOutput, Error> {
    let single = |r: VerificationReport| TaskOutput {
        reports: vec![Report::Identity(r)],
        explanation: None,
    };
    let mut out = match *task {
        Task::Identity { name, q, oracle } => {
            let start = Instant::now();
            let case = IdentityCase::with_cap(name, q, None, hard_cap())?;
            let sides = IdentitySides::build(name, q)?;
            let mut reports = vec![Report::Identity(check_sides(&sides, case, start))];
            if oracle {
                let r = oracle_on_sides(&sides, ORACLE_TRIALS, cfg.seed, Instant::now())?;
                reports.push(Report::Identity(r));
            }
            TaskOutput {
                reports,
                explanation: cfg.explain.then(|| explain_sides(&sides)),
            }
        }
        Task::Relations { q } => {
            let mut o = single(verify_vy_relations(q)?);
            if cfg.explain {
                o.explanation = Some(explain_relations(q)?);
            }
            o
        }
        Task::Linearized { q, variant } => single(verify_linearized(q, variant)?),
        Task::Quotient { q } => {
            let start = Instant::now();
            let case = IdentityCase::with_cap(CaseName::QuotientH, q, None, hard_cap())?;
            let parts = QuotientParts::compute(q)?;
            TaskOutput {
                reports: vec![Report::Identity(check_quotient(&parts, case, start)?)],
                explanation: cfg.explain.then(|| explain_quotient(&parts)),
            }
        }
        Task::Lemma2 { q, k } => single(verify_lemma2(q, k)?),
        Task::Cancellation { q, variant } => {
            let mut o = single(verify_cancellation(q, variant)?);
            if cfg.explain {
                o.explanation = Some(explain_cancellation(q, variant)?);
            }
            o
        }
        Task::FunctionalEquation { k_max } => single(verify_functional_equation_range(k_max)?),
        Task::AngProduct { bound, q } => single(verify_ang_product_grid(bound, q)?),
        Task::Composition { max } => single(verify_composition_grid(max)?),
        Task::ProductFormula { max } => single(verify_product_grid(max)?),
        Task::Splitting { n, a } => TaskOutput {
            reports: vec![Report::Splitting(verify_mcm_splitting(n, a)?)],
            explanation: None,
        },
    };
    if cfg.deterministic {
        out.reports = out
            .reports
            .into_iter()
            .map(Report::without_timing)
            .collect();
    }
    Ok(out)
}

/// Runs tasks on `cfg.jobs` threads; results come back in task order.
pub fn run_tasks(tasks: &[Task], cfg: &SuiteConfig) -> Result<Vec<TaskOutput>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    pool.install(|| tasks.par_iter().map(|t| run_task(t, cfg)).collect())
}

/// Writes reports (text or NDJSON) and explanations; returns the number of
/// failed reports.
pub fn emit(
    outputs: &[TaskOutput],
    cfg: &SuiteConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> std::io::Result<usize> {
    let mut failures = 0;
    let mut total = 0;
    for o in outputs {
        if let Some(text) = &o.explanation {
            // keep stdout pure NDJSON under --json
            let sink: &mut dyn Write = if cfg.json { &mut *err } else { &mut *out };
            writeln!(sink, "{}", text.trim_end())?;
        }
        for r in &o.reports {
            total += 1;
            if !r.passed() {
                failures += 1;
            }
            if cfg.json {
                writeln!(
                    out,
                    "{}",
                    serde_json::to_string(r).expect("reports serialize")
                )?;
            } else {
                writeln!(out, "{}", r.summary())?;
            }
        }
    }
    if !cfg.json {
        writeln!(out, "{total} reports, {failures} failed")?;
    }
    Ok(failures)
}

pub fn exit_code(failures: usize) -> i32 {
    if failures == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    }
}

/// Runs the whole suite and prints it; returns the exit code.
pub fn run_suite(cfg: &SuiteConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if let Err(msg) = cfg.validate() {
        let _ = writeln!(err, "error: {msg}");
        return EXIT_USAGE;
    }
    run_plan(&suite_plan(cfg), cfg, out, err)
}

pub fn run_plan(
    tasks: &[Task],
    cfg: &SuiteConfig,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    match run_tasks(tasks, cfg) {
        Ok(outputs) => match emit(&outputs, cfg, out, err) {
            Ok(failures) => exit_code(failures),
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                EXIT_FAILED
            }
        },
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Which claim cluster a `verify` invocation targets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Target {
    All,
    Acz,
    Bluher,
    Relations,
    Quotient,
    Lemma2,
    Cancellation,
}

/// Tasks for a single `verify` target. `q` restricts to one field size;
/// otherwise every `q = 2^n` with `n <= max_n` is used.
pub fn target_plan(
    target: Target,
    cfg: &SuiteConfig,
    q: Option<u64>,
    k: Option<u64>,
    variant: Option<Variant>,
) -> Result<Vec<Task>, Error> {
    if target == Target::All {
        return Ok(suite_plan(cfg));
    }
    let qs: Vec<u64> = match q {
        Some(q) => {
            IdentityCase::with_cap(CaseName::Acz, q, None, hard_cap())?;
            vec![q]
        }
        None => orders(cfg.max_n).collect(),
    };
    let variants = match variant {
        Some(v) => vec![v],
        None => vec![Variant::V, Variant::Y],
    };
    let mut tasks = Vec::new();
    for q in qs {
        match target {
            Target::Acz | Target::Bluher => {
                let name = if target == Target::Acz {
                    CaseName::Acz
                } else {
                    CaseName::Bluher
                };
                tasks.push(Task::Identity {
                    name,
                    q,
                    oracle: false,
                });
            }
            Target::Relations => {
                tasks.push(Task::Relations { q });
                tasks.extend(
                    variants
                        .iter()
                        .map(|&variant| Task::Linearized { q, variant }),
                );
            }
            Target::Quotient => tasks.push(Task::Quotient { q }),
            Target::Lemma2 => match k {
                Some(k) => {
                    IdentityCase::with_cap(CaseName::Lemma2, q, Some(k), hard_cap())?;
                    tasks.push(Task::Lemma2 { q, k });
                }
                None => {
                    tasks.push(Task::Lemma2 { q, k: q - 1 });
                    tasks.push(Task::Lemma2 { q, k: q + 1 });
                }
            },
            Target::Cancellation => {
                tasks.extend(
                    variants
                        .iter()
                        .map(|&variant| Task::Cancellation { q, variant }),
                );
            }
            Target::All => unreachable!(),
        }
    }
    Ok(tasks)
}

pub fn parse_elem(text: &str) -> Result<u32, String> {
    let digits = text
        .strip_prefix("0x")
        .or_else(|| text.strip_prefix("0X"))
        .unwrap_or(text);
    u32::from_str_radix(digits, 16).map_err(|e| format!("bad field element {text:?}: {e}"))
}

/// `D_k` over GF(2^n), rendered.
pub fn dickson_text(k: u32, n: u32) -> Result<String, Error> {
    let f = field_new(n)?;
    let d = dickson_poly(k, &f)?;
    Ok(PolyRing::new(f, "X").render(&d))
}

pub fn mcm_text(n: u32) -> Result<String, Error> {
    let c = mcm_poly(n)?;
    Ok(PolyRing::new(field_new(1)?, "x").render(&c))
}

/// Splitting reports for one `(n, a)` or a sweep, in `(n, a)` order.
pub fn splitting_reports(
    cases: &[(u32, FqElem)],
    jobs: usize,
) -> Result<Vec<SplittingReport>, Error> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))?;
    pool.install(|| {
        cases
            .par_iter()
            .map(|&(n, a)| verify_mcm_splitting(n, a))
            .collect()
    })
}

/// Field element with the given bits, checked against GF(2^n).
pub fn elem_in(n: u32, bits: u32) -> Result<FqElem, Error> {
    field_new(n)?.elem(bits)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub n: u32,
    pub case: CaseName,
    pub build_ms: f64,
    pub compare_ms: f64,
}

/// Times building and comparing both identities for `1 <= n <= max_n`.
pub fn bench_rows(max_n: u32) -> Result<Vec<BenchRow>, Error> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        let q = 1u64 << n;
        for name in [CaseName::Acz, CaseName::Bluher] {
            let case = IdentityCase::with_cap(name, q, None, hard_cap())?;
            let t = Instant::now();
            let sides = IdentitySides::build(name, q)?;
            let build_ms = t.elapsed().as_secs_f64() * 1e3;
            let t = Instant::now();
            let report = check_sides(&sides, case, t);
            if !report.passed {
                return Err(Error::Precondition(format!("{name} failed at q = {q}")));
            }
            rows.push(BenchRow {
                n,
                case: name,
                build_ms,
                compare_ms: t.elapsed().as_secs_f64() * 1e3,
            });
        }
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut out = String::from("n,case,build_ms,compare_ms\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.3},{:.3}\n",
            r.n, r.case, r.build_ms, r.compare_ms
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plan_order_and_filter() {
        let cfg = SuiteConfig {
            max_n: 2,
            ..SuiteConfig::default()
        };
        let plan = suite_plan(&cfg);
        assert_eq!(
            plan[0],
            Task::Identity {
                name: CaseName::Acz,
                q: 2,
                oracle: true
            }
        );
        // three MCM cases for n = 2
        assert_eq!(
            plan.iter()
                .filter(|t| matches!(t, Task::Splitting { .. }))
                .count(),
            3
        );
        let only = SuiteConfig {
            cases: BTreeSet::from([CaseName::Bluher]),
            ..cfg
        };
        let plan = suite_plan(&only);
        assert_eq!(plan.len(), 2);
    }

    #[test]
    fn config_bounds() {
        let mut cfg = SuiteConfig::default();
        assert!(cfg.validate().is_ok());
        cfg.max_n = 99;
        assert!(cfg.validate().is_err());
        cfg.max_n = 0;
        assert!(cfg.validate().is_err());
        cfg.max_n = 3;
        cfg.jobs = 0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn small_suite_passes_in_order() {
        let cfg = SuiteConfig {
            max_n: 2,
            jobs: 4,
            deterministic: true,
            json: true,
            ..SuiteConfig::default()
        };
        let (mut out, mut err) = (Vec::new(), Vec::new());
        assert_eq!(run_suite(&cfg, &mut out, &mut err), EXIT_OK);
        let text = String::from_utf8(out).unwrap();
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["case"], "acz");
        assert_eq!(first["q"], 2);
        let (mut again, mut err) = (Vec::new(), Vec::new());
        run_suite(&SuiteConfig { jobs: 1, ..cfg }, &mut again, &mut err);
        assert_eq!(text, String::from_utf8(again).unwrap());
    }

    #[test]
    fn element_parsing() {
        assert_eq!(parse_elem("0x1b").unwrap(), 0x1b);
        assert_eq!(parse_elem("7").unwrap(), 7);
        assert!(parse_elem("zz").is_err());
    }

    #[test]
    fn texts() {
        assert_eq!(dickson_text(3, 1).unwrap(), "X^3 + X");
        assert_eq!(mcm_text(1).unwrap(), "x");
    }
}
