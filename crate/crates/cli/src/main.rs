use std::collections::BTreeSet;
use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dickson_cli::{
    bench_csv, bench_rows, dickson_text, elem_in, exit_code, hard_cap, mcm_text, parse_elem,
    run_plan, splitting_reports, target_plan, SuiteConfig, Target, EXIT_USAGE,
};
use dickson_core::splitting::sweep_cases;
use dickson_core::{CaseName, Variant};

#[derive(Parser)]
#[command(
    name = "dickson-verify",
    version,
    about = "Exact verification of characteristic-2 Dickson polynomial identities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Verify one claim cluster, or everything
    Verify(VerifyArgs),
    /// Print D_k over GF(2^n)
    Dickson {
        #[arg(long)]
        k: u32,
        #[arg(long, default_value_t = 1)]
        n: u32,
    },
    /// Print the polynomial C(x) for q = 2^n
    Mcm {
        #[arg(long)]
        n: u32,
    },
    /// Compare splitting degrees of x^(q+1) + x + 1/a and C(x) + a
    Splitting(SplittingArgs),
    /// Time identity construction and comparison, as CSV
    Bench {
        #[arg(long, default_value_t = 5)]
        max_n: u32,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyTarget {
    All,
    Acz,
    Bluher,
    Relations,
    Quotient,
    Lemma2,
    Cancellation,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    V,
    Y,
}

#[derive(Args)]
struct VerifyArgs {
    target: VerifyTarget,
    /// A single field size q = 2^n instead of the whole range
    #[arg(long)]
    q: Option<u64>,
    /// Odd index for lemma2
    #[arg(long)]
    k: Option<u64>,
    #[arg(long, value_enum)]
    variant: Option<VariantArg>,
    #[arg(long, default_value_t = 6)]
    max_n: u32,
    /// Comma-separated case names to keep (verify all only)
    #[arg(long, value_delimiter = ',')]
    cases: Vec<String>,
    /// Newline-delimited JSON reports on stdout
    #[arg(long)]
    json: bool,
    /// Print intermediate expansions
    #[arg(long)]
    explain: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Report every elapsed time as zero
    #[arg(long)]
    deterministic: bool,
}

#[derive(Args)]
struct SplittingArgs {
    #[arg(long, required_unless_present = "sweep")]
    n: Option<u32>,
    /// Nonzero element of GF(2^n), in hex
    #[arg(long, required_unless_present = "sweep")]
    a: Option<String>,
    #[arg(long, conflicts_with_all = ["n", "a"])]
    sweep: bool,
    #[arg(long, default_value_t = 2)]
    n_min: u32,
    #[arg(long, default_value_t = 4)]
    n_max: u32,
    #[arg(long)]
    json: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

fn usage(msg: impl std::fmt::Display) -> i32 {
    eprintln!("error: {msg}");
    EXIT_USAGE
}

fn verify(args: VerifyArgs) -> i32 {
    let mut cases = BTreeSet::new();
    for name in &args.cases {
        match name.parse::<CaseName>() {
            Ok(c) => {
                cases.insert(c);
            }
            Err(e) => return usage(e),
        }
    }
    let cfg = SuiteConfig {
        max_n: args.max_n,
        cases,
        json: args.json,
        explain: args.explain,
        seed: args.seed,
        jobs: args.jobs,
        deterministic: args.deterministic,
    };
    if let Err(msg) = cfg.validate() {
        return usage(msg);
    }
    let target = match args.target {
        VerifyTarget::All => Target::All,
        VerifyTarget::Acz => Target::Acz,
        VerifyTarget::Bluher => Target::Bluher,
        VerifyTarget::Relations => Target::Relations,
        VerifyTarget::Quotient => Target::Quotient,
        VerifyTarget::Lemma2 => Target::Lemma2,
        VerifyTarget::Cancellation => Target::Cancellation,
    };
    let variant = args.variant.map(|v| match v {
        VariantArg::V => Variant::V,
        VariantArg::Y => Variant::Y,
    });
    let tasks = match target_plan(target, &cfg, args.q, args.k, variant) {
        Ok(t) => t,
        Err(e) => return usage(e),
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_plan(&tasks, &cfg, &mut stdout.lock(), &mut stderr.lock())
}

fn splitting(args: SplittingArgs) -> i32 {
    let cases = if args.sweep {
        match sweep_cases(args.n_min, args.n_max) {
            Ok(c) => c,
            Err(e) => return usage(e),
        }
    } else {
        let (n, a) = (
            args.n.expect("clap requires n"),
            args.a.expect("clap requires a"),
        );
        let bits = match parse_elem(&a) {
            Ok(b) => b,
            Err(e) => return usage(e),
        };
        match elem_in(n, bits) {
            Ok(a) => vec![(n, a)],
            Err(e) => return usage(e),
        }
    };
    if args.jobs == 0 {
        return usage("--jobs must be at least 1");
    }
    let reports = match splitting_reports(&cases, args.jobs) {
        Ok(r) => r,
        Err(e) => return usage(e),
    };
    let mut out = io::stdout().lock();
    let mut failures = 0;
    for r in &reports {
        failures += usize::from(!r.passed);
        let line = if args.json {
            serde_json::to_string(r).expect("reports serialize")
        } else {
            format!(
                "{} n={} a={} degrees {}/{} factor degrees {:?}/{:?} splitting degrees {}/{}",
                if r.passed { "PASS" } else { "FAIL" },
                r.n,
                r.a,
                r.deg_lhs,
                r.deg_rhs,
                r.lhs.factor_degrees,
                r.rhs.factor_degrees,
                r.lhs.splitting_degree,
                r.rhs.splitting_degree
            )
        };
        if writeln!(out, "{line}").is_err() {
            return 1;
        }
    }
    exit_code(failures)
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Verify(args) => verify(args),
        Command::Dickson { k, n } => match dickson_text(k, n) {
            Ok(text) => {
                println!("{text}");
                0
            }
            Err(e) => usage(e),
        },
        Command::Mcm { n } => match mcm_text(n) {
            Ok(text) => {
                println!("{text}");
                0
            }
            Err(e) => usage(e),
        },
        Command::Splitting(args) => splitting(args),
        Command::Bench { max_n } => {
            if !(1..=hard_cap()).contains(&max_n) {
                return usage(format!("--max-n must be between 1 and {}", hard_cap()));
            }
            match bench_rows(max_n) {
                Ok(rows) => {
                    print!("{}", bench_csv(&rows));
                    0
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    ExitCode::from(run(cli) as u8)
}
