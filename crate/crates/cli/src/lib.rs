//! Command dispatch for the `ladder-zpd` binary.
//!
//! Exit codes: 0 verified or ok, 1 verification failed, 2 usage or input
//! error, 3 search budget exhausted.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use ladder_zpd::certificate::{
    default_budget, search_spanning, verify_certificate, AlgebraDescriptor, Certificate,
    SearchOutcome, Verdict, VerificationReport,
};
use ladder_zpd::json::{read_certificate, report_to_json, write_certificate, WriteGuard};
use ladder_zpd::ladder::{enumerate_ladders, is_closed, ladder_space, Ladder};
use ladder_zpd::matrix::ProductKind;
use ladder_zpd::onestep::assemble_one_step_certificate_in;
use ladder_zpd::tensor::build_mu;
use ladder_zpd::{Error, Field};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_EXHAUSTED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ladder-zpd", version, about = "Rank-one kernel certificates for ladder Lie algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report upper triangularity and closure of a ladder.
    LadderCheck {
        #[command(flatten)]
        ladder: LadderArgs,
        #[arg(long)]
        json: bool,
    },
    /// Check closure against upper triangularity for every ladder on n.
    LadderEnumerate {
        #[arg(long)]
        n: usize,
        /// Restrict to ladders with this many steps.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Assemble and verify the certificate of a one-step ladder.
    ZpdVerify {
        #[command(flatten)]
        ladder: LadderArgs,
        #[command(flatten)]
        opts: RunArgs,
    },
    /// Assemble, verify and write the certificate of a one-step ladder.
    ZpdAssemble {
        #[command(flatten)]
        ladder: LadderArgs,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Search for a rank-one basis of Ker mu on gl_m.
    ZpdGl {
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        opts: RunArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-verify a certificate file from scratch.
    CertVerify {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct LadderArgs {
    #[arg(long)]
    n: usize,
    /// A step `i,j`; repeat for more steps.
    #[arg(long = "step", value_parser = parse_step)]
    steps: Vec<(usize, usize)>,
}

#[derive(Args, Debug)]
struct RunArgs {
    /// `rational` or a prime modulus.
    #[arg(long, default_value = "rational", value_parser = parse_field)]
    field: Field,
    /// Candidate budget for the rank-one search.
    #[arg(long)]
    budget: Option<usize>,
    #[arg(long)]
    json: bool,
}

fn parse_step(text: &str) -> Result<(usize, usize), String> {
    let (i, j) = text
        .split_once(',')
        .ok_or_else(|| format!("expected i,j, got {text:?}"))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad index {s:?}: {e}"))
    };
    Ok((parse(i)?, parse(j)?))
}

fn parse_field(text: &str) -> Result<Field, String> {
    if text.eq_ignore_ascii_case("rational") || text == "Q" {
        return Ok(Field::Rational);
    }
    let p = text
        .trim_start_matches("F_")
        .parse::<u64>()
        .map_err(|_| format!("expected `rational` or a prime, got {text:?}"))?;
    Field::prime(p).map_err(|e| e.to_string())
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Human-readable report. The last line reads
/// `kernel_dim = span_rank = tensor_count verdict`, with `!=` where the
/// numbers differ.
pub fn render_report(cert: &Certificate, report: &VerificationReport) -> String {
    let mut text = format!(
        "algebra: {}\nfield: {}\ntensors: {}\n",
        cert.algebra, cert.field, report.tensor_count
    );
    match report.verdict {
        Verdict::ProvenZpd => {}
        Verdict::FailedKernelMembership => {
            let k = report.first_noncommuting.expect("set for this verdict");
            text += &format!(
                "failed check: kernel membership (tensor {k}, family {}, has noncommuting factors)\n",
                cert.tensors[k].label
            );
        }
        Verdict::FailedSpan => {
            text += &format!(
                "failed check: span (rank {} < dim Ker mu {})\n",
                report.span_rank, report.kernel_dim
            );
        }
        Verdict::CountMismatch => {
            text += &format!(
                "failed check: count (rank {} != {} tensors)\n",
                report.span_rank, report.tensor_count
            );
        }
    }
    let rel = |a: usize, b: usize| if a == b { "=" } else { "!=" };
    text += &format!(
        "dim Ker mu = span rank = tensor count\n{} {} {} {} {} {}\n",
        report.kernel_dim,
        rel(report.kernel_dim, report.span_rank),
        report.span_rank,
        rel(report.span_rank, report.tensor_count),
        report.tensor_count,
        report.verdict
    );
    text
}

struct Io<'a> {
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

/// Runs the CLI on `args` (including the program name) and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
                return EXIT_OK;
            }
            let _ = err.write_all(rendered.as_bytes());
            return EXIT_USAGE;
        }
    };
    let mut io = Io { out, err };
    match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            match e {
                Error::SearchExhausted { .. } => EXIT_EXHAUSTED,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, io: &mut Io<'_>) -> ladder_zpd::Result<i32> {
    match command {
        Command::LadderCheck { ladder, json } => ladder_check(ladder, json, io),
        Command::LadderEnumerate { n, k, json } => ladder_enumerate(n, k, json, io),
        Command::ZpdVerify { ladder, opts } => {
            let cert = assemble(&ladder, &opts)?;
            emit(&cert, &verify_certificate(&cert)?, opts.json, io)
        }
        Command::ZpdAssemble { ladder, opts, out } => {
            let cert = assemble(&ladder, &opts)?;
            let report = verify_certificate(&cert)?;
            if report.is_proven() {
                write_certificate(&out, &cert, WriteGuard::Verified(&report))?;
            } else {
                writeln!(io.err, "not writing {}: verification failed", out.display())?;
            }
            emit(&cert, &report, opts.json, io)
        }
        Command::ZpdGl { m, opts, out } => {
            let algebra = AlgebraDescriptor::GlLie(m);
            let space = algebra.tensor_space(opts.field)?;
            let mu = build_mu(&space, ProductKind::Lie)?;
            let budget = opts.budget.unwrap_or_else(|| default_budget(space.d()));
            let tensors = match search_spanning(&space, &mu, budget)? {
                SearchOutcome::Spanning { tensors, .. } => tensors,
                SearchOutcome::Exhausted { rank, kernel_dim, .. } => {
                    return Err(Error::SearchExhausted { budget, rank, kernel_dim })
                }
            };
            let cert = Certificate::from_tensors(algebra, opts.field, mu.kernel_dim(), tensors);
            let report = verify_certificate(&cert)?;
            if let (Some(path), true) = (&out, report.is_proven()) {
                write_certificate(path, &cert, WriteGuard::Verified(&report))?;
            }
            emit(&cert, &report, opts.json, io)
        }
        Command::CertVerify { path, json } => {
            let cert = read_certificate(&path)?;
            emit(&cert, &verify_certificate(&cert)?, json, io)
        }
    }
}

fn assemble(ladder: &LadderArgs, opts: &RunArgs) -> ladder_zpd::Result<Certificate> {
    let l = Ladder::new(ladder.n, ladder.steps.iter().copied())?;
    let &[(i1, j1)] = l.steps() else {
        return Err(Error::NotOneStep(l.k()));
    };
    assemble_one_step_certificate_in(opts.field, l.n(), i1, j1, opts.budget)
}

fn emit(cert: &Certificate, report: &VerificationReport, json: bool, io: &mut Io<'_>) -> ladder_zpd::Result<i32> {
    if json {
        io.out.write_all(report_to_json(report).as_bytes())?;
    } else {
        io.out.write_all(render_report(cert, report).as_bytes())?;
    }
    Ok(if report.is_proven() { EXIT_OK } else { EXIT_FAILED })
}

fn ladder_check(args: LadderArgs, json: bool, io: &mut Io<'_>) -> ladder_zpd::Result<i32> {
    let ladder = Ladder::new(args.n, args.steps)?;
    let space = ladder_space(&ladder, Field::Rational);
    let ut = ladder.is_upper_triangular();
    let assoc = is_closed(&space, ProductKind::Associative);
    let lie = is_closed(&space, ProductKind::Lie);
    if json {
        let value = json!({
            "closed_associative": assoc,
            "closed_lie": lie,
            "dim": space.dim(),
            "ladder": ladder,
            "upper_triangular": ut,
        });
        writeln!(io.out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        writeln!(io.out, "ladder: {ladder}")?;
        writeln!(io.out, "dim: {}", space.dim())?;
        writeln!(io.out, "upper-triangular: {}; closed (associative): {}", yes_no(ut), yes_no(assoc))?;
        writeln!(io.out, "closed (lie): {}", yes_no(lie))?;
    }
    Ok(EXIT_OK)
}

#[derive(Default)]
struct Tally {
    ladders: usize,
    upper_triangular: usize,
    closed_associative: usize,
    closed_lie: usize,
    associative_mismatch: usize,
    lie_violation: usize,
    lie_only: usize,
}

fn ladder_enumerate(n: usize, k: Option<usize>, json: bool, io: &mut Io<'_>) -> ladder_zpd::Result<i32> {
    let ks: Vec<usize> = match k {
        Some(k) => vec![k],
        None => (1..=n).collect(),
    };
    let mut t = Tally::default();
    for k in ks {
        for ladder in enumerate_ladders(n, k)? {
            let space = ladder_space(&ladder, Field::Rational);
            let ut = ladder.is_upper_triangular();
            let assoc = is_closed(&space, ProductKind::Associative);
            let lie = is_closed(&space, ProductKind::Lie);
            t.ladders += 1;
            t.upper_triangular += ut as usize;
            t.closed_associative += assoc as usize;
            t.closed_lie += lie as usize;
            t.associative_mismatch += (ut != assoc) as usize;
            t.lie_violation += (ut && !lie) as usize;
            t.lie_only += (lie && !ut) as usize;
        }
    }
    if json {
        let value = json!({
            "associative_mismatch": t.associative_mismatch,
            "closed_associative": t.closed_associative,
            "closed_lie": t.closed_lie,
            "ladders": t.ladders,
            "lie_closed_not_upper_triangular": t.lie_only,
            "lie_violation": t.lie_violation,
            "n": n,
            "upper_triangular": t.upper_triangular,
        });
        writeln!(io.out, "{}", serde_json::to_string_pretty(&value)?)?;
    } else {
        writeln!(io.out, "ladders: {}", t.ladders)?;
        writeln!(io.out, "upper-triangular: {}", t.upper_triangular)?;
        writeln!(io.out, "closed (associative): {}", t.closed_associative)?;
        writeln!(io.out, "closed (lie): {}", t.closed_lie)?;
        writeln!(io.out, "closed (associative) <=> upper-triangular: {} mismatches", t.associative_mismatch)?;
        writeln!(io.out, "upper-triangular => closed (lie): {} violations", t.lie_violation)?;
        writeln!(io.out, "closed (lie) but not upper-triangular: {}", t.lie_only)?;
    }
    Ok(if t.associative_mismatch == 0 && t.lie_violation == 0 {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}
