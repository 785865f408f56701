use std::fmt::Write as _;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use transindex::series::{j0, j_delta, j_inf};
use transindex::verify::{run_all, run_selected, Fault, VerifyConfig, VerifyReport};
use transindex::{
    a_poly, b_poly, chi, cohomology_character, IndexSeriesReport, KClassRep, LaurentPoly, LefschetzReport, Window,
    WindowedSeries,
};

#[derive(Parser)]
#[command(name = "transindex", version, about = "Transversal index characters of lifted Dolbeault operators")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// The character chi_{n,l} of the Dolbeault cohomology of O(-l).
    Chi {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        l: i64,
    },
    /// Characters of the individual cohomology groups H^q(CP^n, O(m)).
    Cohomology {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_negative_numbers = true)]
        m: i64,
        /// Only this degree; all degrees when omitted.
        #[arg(long)]
        q: Option<usize>,
    },
    /// The polynomial B_{n,k}^j.
    Bpoly(PolyArgs),
    /// The polynomial A_{n,k}^j (k < 0), from its recurrences.
    Apoly(PolyArgs),
    /// Expansions of 1 / lambda_{n+1}(k) on a window.
    Series {
        #[command(flatten)]
        nk: NkArgs,
        #[arg(long, value_enum, default_value_t = Expansion::Delta)]
        expansion: Expansion,
    },
    /// Direct and closed-form index series and whether they agree.
    Index {
        #[command(flatten)]
        nk: NkArgs,
    },
    /// Exact residue sum against the Euler characteristic oracle.
    Lefschetz {
        #[arg(long)]
        n: usize,
        /// Class representative in t1..t{n+1} and t.
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        /// Number of random torus points for the numeric check.
        #[arg(long, default_value_t = 20)]
        points: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run every verification suite.
    Verify {
        /// Cap on n in every suite.
        #[arg(long)]
        n_max: Option<usize>,
        /// Restrict k to lo..hi in every suite.
        #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
        k_range: Option<(i64, i64)>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Run only this suite (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Args)]
struct PolyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
    j: i64,
}

#[derive(Args)]
struct NkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, allow_negative_numbers = true)]
    k: i64,
    /// Index window `lo..hi`; defaults to a symmetric window growing with n and |k|.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<Window>,
}

impl NkArgs {
    fn window(&self) -> Window {
        self.window.unwrap_or_else(|| Window::default_for(self.n, self.k))
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Expansion {
    Zero,
    Infinity,
    Delta,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    FlipBSign,
}

fn parse_range(s: &str) -> std::result::Result<(i64, i64), String> {
    let w: Window = s.parse()?;
    Ok((w.lo, w.hi))
}

/// What a subcommand produced: rendered output and whether its checks held.
struct Output {
    text: String,
    ok: bool,
}

fn json<T: Serialize>(value: &T) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn series_text(s: &WindowedSeries) -> String {
    s.iter().fold(String::new(), |mut out, (m, c)| {
        let _ = writeln!(out, "{m}: {c}");
        out
    })
}

#[derive(Serialize)]
struct CohomologyEntry {
    q: usize,
    character: LaurentPoly,
}

fn run(cli: Cli) -> Result<Output> {
    let fmt = cli.format;
    let poly_out = |p: LaurentPoly| -> Result<Output> {
        let text = if fmt == Format::Json { json(&p)? } else { format!("{p}\n") };
        Ok(Output { text, ok: true })
    };
    match cli.command {
        Command::Chi { n, l } => poly_out(chi(n, l)),
        Command::Cohomology { n, m, q } => {
            let qs: Vec<usize> = match q {
                Some(q) => vec![q],
                None => (0..=n).collect(),
            };
            let entries = qs
                .into_iter()
                .map(|q| Ok(CohomologyEntry { q, character: cohomology_character(n, q, m)? }))
                .collect::<transindex::Result<Vec<_>>>()?;
            if q.is_some() {
                return poly_out(entries.into_iter().next().expect("one degree").character);
            }
            let text = if fmt == Format::Json {
                json(&entries)?
            } else {
                entries.iter().map(|e| format!("H^{}: {}\n", e.q, e.character)).collect()
            };
            Ok(Output { text, ok: true })
        }
        Command::Bpoly(a) => poly_out(b_poly(a.n, a.k, a.j)?),
        Command::Apoly(a) => poly_out(a_poly(a.n, a.k, a.j)?),
        Command::Series { nk, expansion } => {
            let w = nk.window();
            let s = match expansion {
                Expansion::Zero => j0(nk.n, nk.k, w),
                Expansion::Infinity => j_inf(nk.n, nk.k, w),
                Expansion::Delta => j_delta(nk.n, nk.k, w),
            };
            let text = if fmt == Format::Json { json(&s)? } else { series_text(&s) };
            Ok(Output { text, ok: true })
        }
        Command::Index { nk } => {
            if nk.n < 1 {
                bail!("index requires n >= 1");
            }
            let r = IndexSeriesReport::compute(nk.n, nk.k, nk.window())?;
            let text = if fmt == Format::Json {
                json(&r)?
            } else {
                let mut out = format!("index n={} k={} window={}\nmatch: {}\n", r.n, r.k, r.window, r.matches);
                if let Some(m) = r.first_mismatch {
                    let _ = writeln!(out, "first mismatch at m={m}");
                    let _ = writeln!(out, "  direct:  {}", r.direct.coefficient(m)?);
                    let _ = writeln!(out, "  formula: {}", r.formula.coefficient(m)?);
                }
                out + &series_text(&r.direct)
            };
            Ok(Output { text, ok: r.matches })
        }
        Command::Lefschetz { n, f, points, seed } => {
            let rep = KClassRep::parse(&f, n).with_context(|| format!("cannot parse --f `{f}`"))?;
            let r = LefschetzReport::compute(n, &rep, points, seed)?;
            let numeric_ok = r.numeric_checks.iter().all(|c| c.passes());
            let text = if fmt == Format::Json {
                json(&r)?
            } else {
                let passed = r.numeric_checks.iter().filter(|c| c.passes()).count();
                format!(
                    "f: {}\nresidue: {}\neuler: {}\nequal: {}\nnumeric: {passed}/{} points within tolerance\n",
                    r.f,
                    r.residue_result,
                    r.euler_result,
                    r.equal,
                    r.numeric_checks.len()
                )
            };
            Ok(Output { text, ok: r.equal && numeric_ok })
        }
        Command::Verify { n_max, k_range, seed, jobs, suites, inject_fault } => {
            let cfg = VerifyConfig {
                n_max,
                k_range,
                seed,
                jobs,
                fault: inject_fault.map(|FaultArg::FlipBSign| Fault::FlipBSign),
            };
            let report = if suites.is_empty() {
                run_all(&cfg)
            } else {
                let ids: Vec<&str> = suites.iter().map(String::as_str).collect();
                run_selected(&ids, &cfg).map_err(|bad| anyhow::anyhow!("unknown suite `{bad}`"))?
            };
            let text = if fmt == Format::Json { json(&report)? } else { verify_text(&report) };
            Ok(Output { text, ok: report.passed() })
        }
    }
}

fn verify_text(r: &VerifyReport) -> String {
    let mut out = format!("seed: {}\n", r.seed);
    let _ = writeln!(out, "{:<30} {:<48} {:>6} {:>8}", "suite", "range", "cases", "failures");
    for s in &r.suites {
        let _ = writeln!(out, "{:<30} {:<48} {:>6} {:>8}", s.id, s.range, s.cases, s.failures);
    }
    for s in r.suites.iter().filter(|s| s.failures > 0) {
        let _ = writeln!(out, "FAIL {}: {}", s.id, s.first_failure.as_deref().unwrap_or(""));
    }
    let failures: usize = r.suites.iter().map(|s| s.failures).sum();
    let _ = writeln!(
        out,
        "{}: {} suites, {} cases, {} failures",
        if r.passed() { "PASS" } else { "FAIL" },
        r.suites.len(),
        r.total_cases(),
        failures
    );
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
