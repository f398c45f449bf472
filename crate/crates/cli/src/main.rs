//! `yangloop`: run verification suites, reconstruct Drinfeld polynomials and
//! print named series.
//!
//! Exit codes: 0 success, 1 verification failure, 2 malformed input.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use yangloop_core::cartan::CartanDatum;
use yangloop_core::coeff::parse_rational;
use yangloop_core::qloop::QContext;
use yangloop_core::reconstruct::{classify, HighestWeight};
use yangloop_core::report::SuiteReport;
use yangloop_core::roots::{NodeRoots, Root};
use yangloop_core::suites::{run_suite, SuiteConfig, SuiteId};
use yangloop_core::yangian::{g_function, Mutation, YContext, V};
use yangloop_core::{Error, Series, VarSpec};

#[derive(Parser)]
#[command(name = "yangloop", version, about = "Exact checks of the Yangian / quantum loop correspondence for A(m,n)")]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one verification suite (or `all`).
    Verify(VerifyArgs),
    /// Classify a highest-weight JSON file and recover its Drinfeld polynomials.
    Reconstruct(ReconstructArgs),
    /// Print the exact coefficients of a named series.
    Expand(ExpandArgs),
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    GSignFlip,
    DropBorelHbar,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name, or `all`.
    suite: String,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    /// Number of root pairs N.
    #[arg(long)]
    roots: Option<usize>,
    /// Total truncation order T.
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    loop_order: Option<u32>,
    #[arg(long)]
    module_bound: Option<usize>,
    #[arg(long)]
    level_bound: Option<u32>,
    #[arg(long)]
    degree_bound: Option<u32>,
    /// Rational value of ℏ where a suite specializes it.
    #[arg(long)]
    hbar: Option<String>,
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Deliberately corrupt the construction (expected to fail).
    #[arg(long, value_enum)]
    mutation: Option<MutationArg>,
    #[arg(long, value_enum, default_value = "text")]
    report: Format,
}

#[derive(Args)]
struct ReconstructArgs {
    input: PathBuf,
    /// Write the result here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Override the degree bound.
    #[arg(long)]
    max_deg: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesName {
    #[value(name = "G")]
    BigG,
    Gamma,
    #[value(name = "g")]
    SmallG,
    Psi,
    Phi,
    #[value(name = "borel_t")]
    BorelT,
    #[value(name = "q_number")]
    QNumber,
}

#[derive(Args)]
struct ExpandArgs {
    #[arg(value_enum)]
    name: SeriesName,
    #[arg(long, default_value_t = 6)]
    order: u32,
    /// Number of formal root pairs for root-dependent series.
    #[arg(long, default_value_t = 1)]
    roots: usize,
    /// Argument of `q_number`.
    #[arg(long, default_value_t = 2)]
    n: i64,
    /// Symmetrizer `d_i` of the node (±1).
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    d: i64,
    #[arg(long, value_enum, default_value = "text")]
    report: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let r = match cli.cmd {
        Command::Verify(a) => verify(a),
        Command::Reconstruct(a) => reconstruct(a),
        Command::Expand(a) => expand(a),
    };
    match r {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn verify(a: VerifyArgs) -> Result<ExitCode, Error> {
    let ids: Vec<SuiteId> = if a.suite == "all" {
        SuiteId::ALL.to_vec()
    } else {
        vec![a.suite.parse()?]
    };
    let cfg = SuiteConfig {
        order: a.order,
        loop_order: a.loop_order,
        module_bound: a.module_bound,
        level_bound: a.level_bound,
        degree_bound: a.degree_bound,
        roots: a.roots,
        m: a.m,
        n: a.n,
        hbar: a.hbar.as_deref().map(parse_rational).transpose()?,
        seed: a.seed,
        mutation: a.mutation.map(|m| match m {
            MutationArg::GSignFlip => Mutation::GSignFlip,
            MutationArg::DropBorelHbar => Mutation::DropBorelHbar,
        }),
    };
    let reports: Vec<SuiteReport> = ids.iter().map(|id| run_suite(*id, &cfg)).collect::<Result<_, _>>()?;
    match a.report {
        Format::Text => reports.iter().for_each(|r| emit(&r.to_text())),
        Format::Json => {
            let v = if reports.len() == 1 {
                serde_json::to_value(&reports[0])
            } else {
                serde_json::to_value(&reports)
            };
            emit(&(serde_json::to_string_pretty(&v.map_err(|e| Error::Parse(e.to_string()))?).unwrap_or_default() + "\n"));
        }
    }
    Ok(if reports.iter().all(SuiteReport::pass) {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn reconstruct(a: ReconstructArgs) -> Result<ExitCode, Error> {
    let text = fs::read_to_string(&a.input).map_err(|e| Error::Parse(format!("{}: {e}", a.input.display())))?;
    let hw: HighestWeight = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
    let res = classify(&hw, a.max_deg)?;
    let out = serde_json::to_string_pretty(&res).map_err(|e| Error::Parse(e.to_string()))?;
    match a.output {
        Some(p) => fs::write(&p, out + "\n").map_err(|e| Error::Parse(format!("{}: {e}", p.display())))?,
        None => emit(&(out + "\n")),
    }
    Ok(ExitCode::SUCCESS)
}

/// Datum with one node of symmetrizer `d`: node 1 of A(0,0) or node 2 of A(0,1).
fn datum_for(d: i64) -> Result<(CartanDatum, usize), Error> {
    match d {
        1 => Ok((CartanDatum::build(0, 0), 1)),
        -1 => Ok((CartanDatum::build(0, 1), 2)),
        _ => Err(Error::InvalidArgument(format!("d must be ±1, got {d}"))),
    }
}

fn expand(a: ExpandArgs) -> Result<ExitCode, Error> {
    let (datum, node) = datum_for(a.d)?;
    let yctx = || {
        YContext::new(
            datum,
            vec![NodeRoots::formal(node, a.roots, "")],
            a.order,
            a.order,
            Default::default(),
        )
    };
    let series = match a.name {
        SeriesName::BigG => g_function(&VarSpec::graded(&[V], a.order)?, V)?,
        SeriesName::Gamma => yctx()?.gamma(node)?,
        SeriesName::SmallG => yctx()?.g_series(node)?,
        SeriesName::BorelT => yctx()?.borel_t(node)?,
        SeriesName::Psi | SeriesName::Phi => {
            let roots = NodeRoots::new(
                node,
                (0..a.roots).map(|p| Root::shifted(2 * p as i64 + 1, &format!("A{}", p + 1))).collect(),
                (0..a.roots).map(|p| Root::shifted(2 * p as i64 + 2, &format!("B{}", p + 1))).collect(),
            )?;
            let q = QContext::new(datum, vec![roots], a.order, a.order)?;
            if matches!(a.name, SeriesName::Psi) {
                q.psi(node)?
            } else {
                q.phi(node)?
            }
        }
        SeriesName::QNumber => {
            let spec = VarSpec::graded(&["hbar"], a.order)?;
            datum.q_number(a.n, node, &spec)?
        }
    };
    print_series(&series, a.report);
    Ok(ExitCode::SUCCESS)
}

fn print_series(s: &Series, format: Format) {
    match format {
        Format::Json => emit(&(serde_json::to_string_pretty(&s.to_json()).unwrap_or_default() + "\n")),
        Format::Text => {
            let spec = s.spec();
            let mut out = String::new();
            if s.is_zero() {
                out.push_str("1\t0\n");
            }
            for (m, c) in s.terms() {
                let mono: Vec<String> = m
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| **e != 0)
                    .map(|(k, e)| if *e == 1 { spec.name_of(k).to_string() } else { format!("{}^{e}", spec.name_of(k)) })
                    .collect();
                let mono = if mono.is_empty() { "1".to_string() } else { mono.join("*") };
                out.push_str(&format!("{mono}\t{c}\n"));
            }
            emit(&out);
        }
    }
}

/// Writes to stdout; a closed pipe is not an error worth reporting.
fn emit(s: &str) {
    let _ = std::io::stdout().lock().write_all(s.as_bytes());
}
