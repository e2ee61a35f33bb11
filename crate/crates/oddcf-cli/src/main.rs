//! `oddcf` — command-line surface over the library: expansions, conversions,
//! evaluation of the limit distribution, level-set enumeration, the invariant
//! suites, and the three CSV experiments.
//!
//! Exit codes: 0 success, 1 a `verify` check failed, 2 usage/parse/domain
//! error. Diagnostics go to stderr with a machine-parsable first line
//! `error: <kind>: <detail>`.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use oddcf::{
    audit_csv, convergence_csv, convergence_table, convert_ordinary_to_odd, derivative_probe,
    expand_odd_one, expand_odd_zero, expand_ordinary, f0_exact, f_exact, level_counts, level_set,
    limit_ratios, mediant_ratio_audit, parse_rational, probe_csv, probe_schedule, run_suite,
    y_set, AnyCf, CubicNumber, Form, OrdinaryCf, Rational,
};

#[derive(Parser)]
#[command(
    name = "oddcf",
    version,
    about = "Continued fractions with odd partial quotients, their level tree, \
             and the singular limit distribution F over Q(L), all in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Kind {
    Odd,
    Ordinary,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Zero,
    One,
}

#[derive(Subcommand)]
enum Cmd {
    /// Expand a rational in [0, 1] into a continued fraction
    Expand {
        /// The rational to expand, e.g. 2/5
        x: String,
        /// Which expansion to compute
        #[arg(long, value_enum, default_value_t = Kind::Odd)]
        kind: Kind,
        /// Integer part of the odd expansion: zero targets [0, 1), one (0, 1]
        #[arg(long, value_enum)]
        form: Option<FormArg>,
    },
    /// Convert an ordinary continued fraction to the equivalent odd one
    Convert {
        /// Ordinary expansion text, e.g. "[0; 2, 2]"
        cf: String,
    },
    /// Evaluate a continued fraction (odd or ordinary) back to a rational
    Eval {
        /// Expansion text; terms with signs/slashes are read as odd form
        cf: String,
    },
    /// Evaluate the limit distribution F at a rational in [0, 1]
    EvalF {
        x: String,
        /// Also print the exact Q(L) coefficients
        #[arg(long)]
        exact: bool,
        /// Decimal digits for the approximate line
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Evaluate the form-zero limit distribution F0 at a rational in [0, 1]
    EvalF0 {
        x: String,
        /// Also print the exact Q(L) coefficients
        #[arg(long)]
        exact: bool,
        /// Decimal digits for the approximate line
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// List the level set X_n, or with --cumulative everything up to it
    Enumerate {
        /// Level to enumerate (levels start at 1)
        #[arg(long)]
        level: u64,
        /// Emit the union of levels 1..=n instead of level n alone
        #[arg(long)]
        cumulative: bool,
    },
    /// Print the level-count table X_n, Y_n, Z_n
    Counts {
        /// Last level of the table
        #[arg(long)]
        upto: u64,
    },
    /// Ratios Y_n/Y_n+1, Z_n/Z_n+1, Y_n/Z_n and their distance to the limits
    Ratios {
        /// Index n (at least 4; below that the ratios are seed artifacts)
        #[arg(long)]
        at: u64,
        /// Decimal digits for the approximate values
        #[arg(long, default_value_t = 12)]
        digits: u32,
    },
    /// Run the invariant suites and report each check
    Verify {
        /// One of arith, field, contfrac, distribution, tree, empirical, all
        #[arg(long, default_value = "all")]
        suite: String,
        /// Enumeration depth for the sweeps (4..=20)
        #[arg(long, default_value_t = 14)]
        max_level: u64,
        /// Seed for the randomized sweeps
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// CSV: empirical CDF vs exact F0 over a grid, at sample depths 1..=max-n
    Convergence {
        /// Deepest sample level
        #[arg(long, default_value_t = 14)]
        max_n: u64,
        /// Grid = all rationals of level at most this
        #[arg(long, default_value_t = 6)]
        grid_level: u64,
        /// Decimal digits in the CSV
        #[arg(long, default_value_t = 12)]
        digits: u32,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV: ratio classification of consecutive Stern-Brocot pairs per row
    RatioAudit {
        /// Audit rows 0..=this
        #[arg(long, default_value_t = 8)]
        max_level: u32,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// CSV: symmetric difference quotients of F at x over shrinking h
    DerivativeProbe {
        /// Interior rational to probe
        x: String,
        /// Steps of the schedule h = 10^-1..10^-steps (1..=6; the cost of a
        /// step grows like 1/h)
        #[arg(long, default_value_t = 5)]
        steps: u32,
        /// Decimal digits in the CSV
        #[arg(long, default_value_t = 12)]
        digits: u32,
        /// Write the CSV here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            // keep clap's message but normalize the first line to the
            // `error: <kind>: <detail>` shape
            let rendered = e.render().to_string();
            let mut lines = rendered.lines();
            let first = lines.next().unwrap_or("bad arguments");
            eprintln!("error: usage: {}", first.strip_prefix("error: ").unwrap_or(first));
            for line in lines {
                eprintln!("{line}");
            }
            return ExitCode::from(2);
        }
    };
    match run(cli.cmd) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

/// Error strings are pre-shaped as `<kind>: <detail>`.
type CmdResult = Result<ExitCode, String>;

fn lib<T>(r: oddcf::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn run(cmd: Cmd) -> CmdResult {
    match cmd {
        Cmd::Expand { x, kind, form } => expand(&x, kind, form),
        Cmd::Convert { cf } => {
            let ord: OrdinaryCf = lib(cf.parse())?;
            println!("{}", lib(convert_ordinary_to_odd(&ord))?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Eval { cf } => {
            let any: AnyCf = lib(cf.parse())?;
            println!("{}", lib(any.eval())?);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::EvalF { x, exact, digits } => {
            let v = lib(f_exact(&lib(parse_rational(&x))?))?;
            print_value("F", &v, exact, digits);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::EvalF0 { x, exact, digits } => {
            let v = lib(f0_exact(&lib(parse_rational(&x))?))?;
            print_value("F0", &v, exact, digits);
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Enumerate { level, cumulative } => {
            let set = if cumulative {
                lib(y_set(level))?
            } else {
                lib(level_set(level))?
            };
            for x in set {
                println!("{x}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Counts { upto } => counts(upto),
        Cmd::Ratios { at, digits } => ratios(at, digits),
        Cmd::Verify {
            suite,
            max_level,
            seed,
        } => verify(&suite, max_level, seed),
        Cmd::Convergence {
            max_n,
            grid_level,
            digits,
            out,
        } => {
            let grid = lib(y_set(grid_level))?;
            let rows = lib(convergence_table(max_n, &grid))?;
            emit(&convergence_csv(&rows, digits), out.as_deref())
        }
        Cmd::RatioAudit { max_level, out } => {
            let mut rows = Vec::new();
            for l in 0..=max_level {
                rows.extend(lib(mediant_ratio_audit(l))?);
            }
            emit(&audit_csv(&rows), out.as_deref())
        }
        Cmd::DerivativeProbe {
            x,
            steps,
            digits,
            out,
        } => {
            if !(1..=6).contains(&steps) {
                return Err(format!(
                    "domain: steps must lie in 1..=6, got {steps}; past 1e-6 the probe cost explodes"
                ));
            }
            let x = lib(parse_rational(&x))?;
            let rows = lib(derivative_probe(&x, &probe_schedule(steps)))?;
            emit(&probe_csv(&x, &rows, digits), out.as_deref())
        }
    }
}

fn expand(x: &str, kind: Kind, form: Option<FormArg>) -> CmdResult {
    let x = lib(parse_rational(x))?;
    match kind {
        Kind::Ordinary => {
            if form.is_some() {
                return Err("domain: --form applies only to --kind odd".into());
            }
            println!("{}", lib(expand_ordinary(&x))?);
        }
        Kind::Odd => {
            let cf = match form.unwrap_or(FormArg::Zero) {
                FormArg::Zero => lib(expand_odd_zero(&x))?,
                FormArg::One => lib(expand_odd_one(&x))?,
            };
            debug_assert!(matches!(cf.form, Form::Zero | Form::One));
            println!("{cf}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn print_value(label: &str, v: &CubicNumber, exact: bool, digits: u32) {
    if exact {
        println!("{label} = {v}");
    }
    println!("≈ {}", v.to_decimal(digits));
}

fn counts(upto: u64) -> CmdResult {
    if !(1..=500).contains(&upto) {
        return Err(format!("domain: the table covers 1..=500, got {upto}"));
    }
    let c = level_counts(upto);
    let rows: Vec<[String; 4]> = (1..=upto as usize)
        .map(|n| {
            [
                n.to_string(),
                c.x[n].to_string(),
                c.y[n].to_string(),
                c.z[n].to_string(),
            ]
        })
        .collect();
    let header = ["n", "X", "Y", "Z"];
    let width = |i: usize| {
        rows.iter()
            .map(|r| r[i].len())
            .max()
            .unwrap_or(0)
            .max(header[i].len())
    };
    let w = [width(0), width(1), width(2), width(3)];
    println!(
        "{:>w0$} {:>w1$} {:>w2$} {:>w3$}",
        header[0], header[1], header[2], header[3],
        w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3]
    );
    for r in rows {
        println!(
            "{:>w0$} {:>w1$} {:>w2$} {:>w3$}",
            r[0], r[1], r[2], r[3],
            w0 = w[0], w1 = w[1], w2 = w[2], w3 = w[3]
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn ratios(at: u64, digits: u32) -> CmdResult {
    let r = lib(limit_ratios(at))?;
    let dec = |q: &Rational| CubicNumber::from_rational(q.clone()).to_decimal(digits);
    let n = r.n;
    println!(
        "Y_{n}/Y_{} = {} ≈ {} (distance to 1/L ≈ {})",
        n + 1,
        r.y_ratio,
        dec(&r.y_ratio),
        r.y_gap.to_decimal(digits)
    );
    println!(
        "Z_{n}/Z_{} = {} ≈ {} (distance to 1/L ≈ {})",
        n + 1,
        r.z_ratio,
        dec(&r.z_ratio),
        r.z_gap.to_decimal(digits)
    );
    println!(
        "Y_{n}/Z_{n} = {} ≈ {} (distance to 1/(L-1) ≈ {})",
        r.yz_ratio,
        dec(&r.yz_ratio),
        r.yz_gap.to_decimal(digits)
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(suite: &str, max_level: u64, seed: u64) -> CmdResult {
    let report = lib(run_suite(suite, max_level, seed))?;
    let name_width = report
        .checks
        .iter()
        .map(|c| c.suite.len() + 1 + c.name.len())
        .max()
        .unwrap_or(0);
    for c in &report.checks {
        let status = if c.passed { "ok  " } else { "FAIL" };
        let name = format!("{}/{}", c.suite, c.name);
        println!("{status} {name:<name_width$}  {}", c.detail);
    }
    println!(
        "{} checks, {} failures (suite={suite}, max-level={max_level}, seed={seed})",
        report.checks.len(),
        report.failures()
    );
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn emit(csv: &str, out: Option<&Path>) -> CmdResult {
    match out {
        Some(path) => std::fs::write(path, csv)
            .map_err(|e| format!("io: cannot write {}: {e}", path.display()))?,
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}
