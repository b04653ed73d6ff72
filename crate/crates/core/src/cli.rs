//! Command-line front end. [`run`] is the whole program; the binary only
//! forwards the process arguments and standard streams.
//!
//! Exit codes: [`EXIT_PASS`], [`EXIT_FAIL`], [`EXIT_USAGE`], [`EXIT_PARSE`].
//! Data goes to `out`, diagnostics to `err`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use serde_json::json;

use crate::error::Error;
use crate::eta::{basis_label, monomial_name, EtaFunction};
use crate::expr::{self, EvalError, Expr, ExprKind, ParseError};
use crate::invariants::{flatten_rank, invariant_report, AmplitudeTensor4};
use crate::scalar::{Backend, Exact, Float, Scalar};
use crate::verify::{self, AlphaFamily, SweepRow, INVARIANCE_TOL, SWEEP_TOL};

pub const EXIT_PASS: i32 = 0;
/// A check failed, or a well-formed request could not be evaluated.
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "etaqubit",
    version,
    about = "η-function calculus and four-qubit entanglement monotones"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate an η-expression and print its coefficient table.
    Eval(EvalArgs),
    /// Print the invariant report of a four-qubit state.
    Invariants(InvariantsArgs),
    /// Compare the monotones with their closed forms along a family.
    Sweep(SweepArgs),
    /// Run a property suite.
    Verify(VerifyArgs),
    /// Print flattening ranks across every bipartition.
    Classify(ClassifyArgs),
}

#[derive(Debug, Args)]
struct EvalArgs {
    /// Number of η-variables.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    expr: String,
    /// Use exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct InvariantsArgs {
    /// Registry label, e.g. PSIC4 or G(1,0,0,1).
    #[arg(long, conflicts_with = "expr", required_unless_present = "expr")]
    state: Option<String>,
    #[arg(long)]
    expr: Option<String>,
    /// Qubit count of --expr; must be 4.
    #[arg(long, default_value_t = 4)]
    n: usize,
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    S,
    C,
    Zeta,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    family: Family,
    #[arg(long, default_value_t = 100)]
    points: usize,
    /// Also write the rows to this CSV file.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Suite {
    Lu,
    Perm,
    Trig,
    Anchors,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Random states per suite (per variable count for trig, grid points for anchors).
    #[arg(long, default_value_t = 20)]
    trials: usize,
    /// Local-unitary tuples per state for the lu suite.
    #[arg(long, default_value_t = 50)]
    unitaries: usize,
}

#[derive(Debug, Args)]
struct ClassifyArgs {
    #[arg(long)]
    state: String,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Parse { input: String, error: ParseError },
    Runtime(String),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(format!("i/o error: {e}"))
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the program on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    EXIT_PASS
                }
                _ => {
                    let _ = write!(err, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    let outcome = match cli.command {
        Command::Eval(a) => eval(a, out),
        Command::Invariants(a) => invariants(a, out),
        Command::Sweep(a) => sweep(a, out, err),
        Command::Verify(a) => run_suite(a, out),
        Command::Classify(a) => classify(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Parse { input, error }) => {
            let _ = writeln!(err, "error[{}]: {error}", error.code());
            let _ = writeln!(err, "  {input}");
            let _ = writeln!(err, "  {}^", " ".repeat(error.column.saturating_sub(1)));
            EXIT_PARSE
        }
        Err(Failure::Runtime(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAIL
        }
    }
}

fn parse(input: &str, n: usize) -> Result<Expr, Failure> {
    if !(1..=crate::eta::MAX_VARIABLES).contains(&n) {
        return Err(Failure::Usage(format!(
            "--n must be in 1..={}, got {n}",
            crate::eta::MAX_VARIABLES
        )));
    }
    expr::parse(input, n).map_err(|error| Failure::Parse {
        input: input.into(),
        error,
    })
}

fn eval_failure(e: EvalError) -> Failure {
    let hint = match e.error {
        Error::ExactNormalize | Error::InexactSeries { .. } | Error::FloatOnly(_) => {
            "; rerun without --exact"
        }
        _ => "",
    };
    Failure::Runtime(format!("evaluation failed: {e}{hint}"))
}

fn evaluate<S: Scalar>(ast: &Expr, n: usize) -> Result<EtaFunction<S>, Failure> {
    expr::evaluate::<S>(ast, n).map_err(eval_failure)
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Outcome {
    let ast = parse(&a.expr, a.n)?;
    if a.exact {
        print_function(&evaluate::<Exact>(&ast, a.n)?, a.json, out)
    } else {
        print_function(&evaluate::<Float>(&ast, a.n)?, a.json, out)
    }
}

fn print_function<S: Scalar>(f: &EtaFunction<S>, as_json: bool, out: &mut dyn Write) -> Outcome {
    if as_json {
        writeln!(out, "{}", f.to_json())?;
        return Ok(EXIT_PASS);
    }
    let rows: Vec<[String; 3]> = f
        .terms()
        .map(|(m, c)| [basis_label(m, f.n()), monomial_name(m), c.render()])
        .collect();
    let header = ["basis", "monomial", "coefficient"].map(String::from);
    let width = |k: usize| {
        rows.iter()
            .map(|r| r[k].chars().count())
            .chain([header[k].len()])
            .max()
            .unwrap_or(0)
    };
    let (w0, w1) = (width(0), width(1));
    for r in std::iter::once(&header).chain(&rows) {
        writeln!(out, "{:<w0$}  {:<w1$}  {}", r[0], r[1], r[2])?;
    }
    Ok(EXIT_PASS)
}

/// Parses `--state` text, which must be a single registry label.
fn state_label(text: &str, n: usize) -> Result<Expr, Failure> {
    let ast = parse(text, n)?;
    match ast.kind {
        ExprKind::State { .. } => Ok(ast),
        _ => Err(Failure::Usage(format!(
            "--state expects a registry label such as PSIC4 or G(1,0,0,1), got {text:?}"
        ))),
    }
}

fn invariants(a: InvariantsArgs, out: &mut dyn Write) -> Outcome {
    let ast = match (&a.state, &a.expr) {
        (Some(label), _) => state_label(label, 4)?,
        (None, Some(e)) => {
            if a.n != 4 {
                return Err(Failure::Usage(format!(
                    "invariants are defined for n = 4, got --n {}",
                    a.n
                )));
            }
            parse(e, 4)?
        }
        (None, None) => {
            return Err(Failure::Usage(
                "one of --state or --expr is required".into(),
            ))
        }
    };
    if a.exact {
        print_report(&evaluate::<Exact>(&ast, 4)?, a.json, out)
    } else {
        print_report(&evaluate::<Float>(&ast, 4)?, a.json, out)
    }
}

fn print_report<S: Scalar>(f: &EtaFunction<S>, as_json: bool, out: &mut dyn Write) -> Outcome {
    let report = invariant_report(&AmplitudeTensor4::from_eta(f)?)?;
    if as_json {
        writeln!(out, "{}", report.to_json())?;
    } else {
        for (name, value) in report.fields() {
            writeln!(out, "{name:<8} {value}")?;
        }
    }
    Ok(EXIT_PASS)
}

fn sweep(a: SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let rows = match a.family {
        Family::S => verify::sweep_alpha(AlphaFamily::S, a.points),
        Family::C => verify::sweep_alpha(AlphaFamily::C, a.points),
        Family::Zeta => verify::sweep_zeta(a.points),
    }
    .map_err(|e| match e {
        Error::DegenerateGrid(_) => Failure::Usage(e.to_string()),
        other => other.into(),
    })?;
    if let Some(path) = &a.csv {
        let file = File::create(path)
            .map_err(|e| Failure::Runtime(format!("cannot create {}: {e}", path.display())))?;
        verify::write_csv(&rows, file)?;
    }
    if a.json {
        writeln!(out, "{}", verify::rows_to_json(&rows))?;
    } else {
        print_rows(&rows, out)?;
    }
    let bad = rows.iter().filter(|r| !r.within(SWEEP_TOL)).count();
    if bad > 0 {
        writeln!(
            err,
            "{bad} of {} rows differ from the closed form by {SWEEP_TOL:e} or more",
            rows.len()
        )?;
        return Ok(EXIT_FAIL);
    }
    Ok(EXIT_PASS)
}

fn print_rows(rows: &[SweepRow], out: &mut dyn Write) -> io::Result<()> {
    writeln!(
        out,
        "{:>20} {:>20} {:>20} {:>10} {:>20} {:>20} {:>10}",
        "parameter", "f3_computed", "f3_closed", "f3_err", "f2_computed", "f2_closed", "f2_err"
    )?;
    for r in rows {
        writeln!(
            out,
            "{:>20.15} {:>20.15} {:>20.15} {:>10.2e} {:>20.15} {:>20.15} {:>10.2e}",
            r.parameter, r.f3_computed, r.f3_closed, r.f3_err, r.f2_computed, r.f2_closed, r.f2_err
        )?;
    }
    Ok(())
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn run_suite(a: VerifyArgs, out: &mut dyn Write) -> Outcome {
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be positive".into()));
    }
    let mut total = 0usize;
    let mut passed = 0usize;
    let mut record = |ok: bool, line: String, out: &mut dyn Write| -> io::Result<()> {
        total += 1;
        passed += ok as usize;
        writeln!(out, "{} {line}", verdict(ok))
    };
    let name = match a.suite {
        Suite::Lu => {
            for k in 0..a.trials {
                let seed = verify::derive_seed(a.seed, k as u64);
                let st = verify::random_state::<Float>(4, seed)?;
                let r = verify::check_lu_invariance(&st, a.unitaries, INVARIANCE_TOL, seed)?;
                let line = format!(
                    "state {k}: {} unitaries, max drift F3 {:.2e}, F2 {:.2e}",
                    r.trials, r.max_drift_f3, r.max_drift_f2
                );
                record(r.passed, line, out)?;
            }
            "lu"
        }
        Suite::Perm => {
            for k in 0..a.trials {
                let st = verify::random_state::<Exact>(4, verify::derive_seed(a.seed, k as u64))?;
                let r = verify::check_permutation_invariance(&st, INVARIANCE_TOL)?;
                record(
                    r.passed,
                    format!("state {k}: {} relabelings, exact match", r.trials),
                    out,
                )?;
            }
            "perm"
        }
        Suite::Trig => {
            for n in 2..=verify::MAX_RANDOM_VARIABLES {
                for k in 0..a.trials {
                    let seed = verify::derive_seed(a.seed, (n * a.trials + k) as u64);
                    let f = verify::random_nilpotent::<Exact>(n, seed)?;
                    let ok = verify::trig_identity_holds(&f, 0.0)?;
                    record(ok, format!("n={n} function {k}: cos^2 + sin^2 = 1"), out)?;
                }
            }
            "trig"
        }
        Suite::Anchors => {
            for c in verify::exact_anchor_checks()? {
                record(
                    c.passed,
                    format!("{}: expected {}, got {}", c.name, c.expected, c.actual),
                    out,
                )?;
            }
            for k in 0..=a.trials {
                let d = BigRational::new(k.into(), a.trials.into());
                let p = verify::zeta_point_exact(&d)?;
                let line = format!(
                    "zeta d={}: zeta={} F3abs={} F2abs={}",
                    p.d, p.zeta, p.f3, p.f2
                );
                record(p.matches(), line, out)?;
            }
            "anchors"
        }
    };
    writeln!(out, "{name}: {passed}/{total} passed")?;
    Ok(if passed == total {
        EXIT_PASS
    } else {
        EXIT_FAIL
    })
}

/// Nonempty proper bipartitions up to complement, smaller side listed,
/// ordered by size. Half-size cuts keep the side containing qubit 1.
pub fn bipartitions(n: usize) -> Vec<Vec<usize>> {
    let mut cuts: Vec<Vec<usize>> = (1u32..(1 << n) - 1)
        .map(|bits| {
            (1..=n)
                .filter(|q| bits >> (q - 1) & 1 == 1)
                .collect::<Vec<_>>()
        })
        .filter(|s| 2 * s.len() < n || (2 * s.len() == n && s[0] == 1))
        .collect();
    cuts.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    cuts
}

fn cut_label(side: &[usize], n: usize) -> String {
    let digits =
        |qs: &mut dyn Iterator<Item = usize>| qs.map(|q| q.to_string()).collect::<String>();
    let rest = digits(&mut (1..=n).filter(|q| !side.contains(q)));
    format!("{}|{rest}", digits(&mut side.iter().copied()))
}

fn classify(a: ClassifyArgs, out: &mut dyn Write) -> Outcome {
    let max_n = crate::eta::MAX_VARIABLES;
    // the label fixes the qubit count, so parse against the widest algebra
    let ast = state_label(&a.state, max_n)?;
    let ExprKind::State { name, args } = &ast.kind else {
        unreachable!()
    };
    match crate::states::lookup::<Exact>(name, args) {
        Ok(st) => print_cuts(&ast, &st.function, a.json, out),
        Err(Error::FloatOnly(_)) => {
            let st = crate::states::lookup::<Float>(name, args)?;
            print_cuts(&ast, &st.function, a.json, out)
        }
        Err(e) => Err(e.into()),
    }
}

fn print_cuts<S: Scalar>(
    ast: &Expr,
    f: &EtaFunction<S>,
    as_json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let n = f.n();
    let v = f.to_amplitudes();
    let mut rows = Vec::new();
    for side in bipartitions(n) {
        rows.push((cut_label(&side, n), flatten_rank(&v, &side)?));
    }
    let backend = match S::BACKEND {
        Backend::Exact => "exact",
        Backend::Float => "float",
    };
    if as_json {
        let cuts: Vec<_> = rows
            .iter()
            .map(|(cut, rank)| json!({"cut": cut, "rank": rank, "product": *rank == 1}))
            .collect();
        writeln!(
            out,
            "{}",
            json!({"state": ast.to_string(), "backend": backend, "cuts": cuts})
        )?;
        return Ok(EXIT_PASS);
    }
    writeln!(out, "state {ast} ({backend})")?;
    for (cut, rank) in &rows {
        let flag = if *rank == 1 { "  product" } else { "" };
        writeln!(out, "{cut:<8} rank {rank}{flag}")?;
    }
    let products: Vec<&str> = rows
        .iter()
        .filter(|(_, r)| *r == 1)
        .map(|(c, _)| c.as_str())
        .collect();
    let summary = if products.is_empty() {
        "none".to_string()
    } else {
        products.join(" ")
    };
    writeln!(out, "product cuts: {summary}")?;
    Ok(EXIT_PASS)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(
            std::iter::once("etaqubit").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn bipartition_lists() {
        let four: Vec<String> = bipartitions(4).iter().map(|s| cut_label(s, 4)).collect();
        assert_eq!(
            four,
            ["1|234", "2|134", "3|124", "4|123", "12|34", "13|24", "14|23"]
        );
        assert_eq!(bipartitions(3).len(), 3);
        assert_eq!(bipartitions(2).len(), 1);
        assert_eq!(bipartitions(5).len(), 15);
    }

    #[test]
    fn eval_table() {
        let (code, out, _) = call(&["eval", "--n", "2", "--expr", "cos(e1+e2)", "--exact"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(
            lines,
            [
                "basis  monomial  coefficient",
                "00     1         1",
                "11     e1*e2     -1"
            ]
        );
    }

    #[test]
    fn parse_error_caret() {
        let (code, out, err) = call(&["eval", "--n", "4", "--expr", "e1 + e5"]);
        assert_eq!(code, EXIT_PARSE);
        assert!(out.is_empty());
        let lines: Vec<&str> = err.lines().collect();
        assert!(lines[0].starts_with("error[E101]"), "{err}");
        assert_eq!(lines[2], "       ^");
    }

    #[test]
    fn state_must_be_label() {
        let (code, _, err) = call(&["invariants", "--state", "GHZ4 + W4"]);
        assert_eq!(code, EXIT_USAGE, "{err}");
        assert_eq!(
            call(&["invariants", "--expr", "e1", "--n", "2"]).0,
            EXIT_USAGE
        );
    }
}
