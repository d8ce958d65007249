//! The `gldist` command line.
//!
//! Every report starts with a manifest (command, budgets, threads, seed),
//! written as `#` lines for CSV and text reports and as a `manifest` object
//! for JSON reports. With `--out` the whole report is appended to the file
//! in a single write.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use crate::chartab;
use crate::error::{Error, Result};
use crate::glgroup::{DEFAULT_GROUP_BUDGET, DEFAULT_SUBGROUP_BUDGET};
use crate::localtower::{self, SpecFile};
use crate::selftest::{self, SelftestConfig};
use crate::survey::{self, Budgets};
use crate::verdict::{self, Outcome};

#[derive(Parser, Debug)]
#[command(name = "gldist", version, about = "Character tables of GL_n(F_q) and distinction of sigma-selfdual representations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Append the report to this file instead of printing it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest group order that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_GROUP_BUDGET, value_parser = positive)]
    budget_group: u64,
    /// Largest subgroup order that may be enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_SUBGROUP_BUDGET, value_parser = positive)]
    budget_subgroup: u64,
    /// Worker threads (default: one per core).
    #[arg(long, global = true, value_parser = positive_usize)]
    threads: Option<usize>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Coefficient characteristic; overrides `ell` in a spec file.
    #[arg(long, global = true)]
    ell: Option<u64>,
}

#[derive(Subcommand, Debug, Clone)]
enum Command {
    /// Character table of GL_n(F_q) as CSV.
    Chartab { n: usize, q: u64 },
    /// Supercuspidals of GL_n(F_{q0^2}) and their distinction by GL_n(F_q0).
    Gow { n: usize, q0: u64 },
    /// Supercuspidals of GL_n(F_q), n even, against GL_{n/2} x GL_{n/2}.
    Levi { n: usize, q: u64 },
    /// Hom spaces of the mirabolic representation over P ∩ H_{r,s}.
    Mirabolic { n: usize, q: u64 },
    /// Distinction verdict for a tower spec (JSON).
    Verdict { spec: PathBuf },
    /// Unramified twists of a distinguished datum that are omega-distinguished.
    TwistScan { spec: PathBuf },
    /// Runs every property suite and survey.
    Selftest {
        /// Randomized trials per property suite.
        #[arg(long, default_value_t = 1000, value_parser = positive_usize)]
        trials: usize,
    },
}

fn positive(s: &str) -> std::result::Result<u64, String> {
    match s.parse::<u64>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(format!("expected a positive integer, got {s:?}")),
    }
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    positive(s).map(|v| v as usize)
}

impl Command {
    fn describe(&self) -> String {
        match self {
            Command::Chartab { n, q } => format!("chartab {n} {q}"),
            Command::Gow { n, q0 } => format!("gow {n} {q0}"),
            Command::Levi { n, q } => format!("levi {n} {q}"),
            Command::Mirabolic { n, q } => format!("mirabolic {n} {q}"),
            Command::Verdict { spec } => format!("verdict {}", spec.display()),
            Command::TwistScan { spec } => format!("twist-scan {}", spec.display()),
            Command::Selftest { trials } => format!("selftest --trials {trials}"),
        }
    }
}

/// A finished report and whether every checked relation held.
struct Report {
    text: String,
    ok: bool,
}

fn manifest_pairs(cli: &Cli) -> Vec<(&'static str, String)> {
    vec![
        ("gldist", env!("CARGO_PKG_VERSION").to_string()),
        ("command", cli.command.describe()),
        ("budget-group", cli.budget_group.to_string()),
        ("budget-subgroup", cli.budget_subgroup.to_string()),
        ("threads", cli.threads.map_or("default".into(), |t| t.to_string())),
        ("seed", cli.seed.to_string()),
        ("ell", cli.ell.map_or("-".into(), |e| e.to_string())),
    ]
}

fn manifest_lines(cli: &Cli) -> String {
    manifest_pairs(cli).into_iter().map(|(k, v)| format!("# {k}: {v}\n")).collect()
}

fn manifest_json(cli: &Cli) -> serde_json::Value {
    manifest_pairs(cli).into_iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
}

fn failure_lines(text: &mut String, failures: &[String]) {
    for f in failures {
        let _ = writeln!(text, "# FAIL {f}");
    }
}

fn read_spec(path: &PathBuf) -> Result<SpecFile> {
    let text = std::fs::read_to_string(path)?;
    SpecFile::parse(&text)
}

fn json_report<T: Serialize>(cli: &Cli, body: &T) -> Result<String> {
    let mut value = serde_json::to_value(body)?;
    if let serde_json::Value::Object(map) = &mut value {
        map.insert("manifest".into(), manifest_json(cli));
    }
    Ok(serde_json::to_string_pretty(&value)? + "\n")
}

#[derive(Serialize)]
struct TwistScanReport {
    outcome: Outcome,
    rule: &'static str,
    #[serde(rename = "DD0")]
    dd0: localtower::ExtType,
    omega_twist_exists: bool,
    witness: Option<localtower::RootOfUnity>,
    witness_outcome: Option<Outcome>,
    scan_bound: u128,
    exhaustive_scan_agrees: bool,
}

fn execute(cli: &Cli) -> Result<Report> {
    let budgets = Budgets { group: cli.budget_group, subgroup: cli.budget_subgroup };
    let mut text = String::new();
    let ok = match &cli.command {
        Command::Chartab { n, q } => {
            let t = chartab::cached_table_with_budget(*n, *q, budgets.group)?;
            text += &manifest_lines(cli);
            text += &t.to_csv();
            true
        }
        Command::Gow { n, q0 } => {
            let s = survey::gow_survey(*n, *q0, &budgets)?;
            text += &manifest_lines(cli);
            text += "orbit_rep,character,dim,sigma_selfdual,distinction_dim\n";
            for r in &s.rows {
                let _ = writeln!(text, "{},{},{},{},{}", r.orbit_rep, r.character + 1, r.dim, r.sigma_selfdual, r.distinction_dim);
            }
            let _ = writeln!(
                text,
                "# summary: supercuspidals={} sigma_selfdual={} max_dim_all_irreducibles={}",
                s.rows.len(),
                s.selfdual_count(),
                s.max_dim_all_irreducibles
            );
            failure_lines(&mut text, &s.failures);
            s.failures.is_empty()
        }
        Command::Levi { n, q } => {
            let s = survey::levi_survey(*n, *q, &budgets)?;
            let (sums, char_failures) = survey::levi_character_survey(*n, *q, &budgets)?;
            text += &manifest_lines(cli);
            text += "orbit_rep,character,dim,selfdual,distinction_dim\n";
            for r in &s.rows {
                let _ = writeln!(text, "{},{},{},{},{}", r.orbit_rep, r.character + 1, r.dim, r.selfdual, r.distinction_dim);
            }
            let _ = writeln!(
                text,
                "# summary: supercuspidals={} selfdual={} max_dim_all_irreducibles={} unequal_levi_sums={} unequal_levi_nonzero={}",
                s.rows.len(),
                s.selfdual_count(),
                s.max_dim_all_irreducibles,
                sums.len(),
                char_failures.len()
            );
            failure_lines(&mut text, &s.failures);
            failure_lines(&mut text, &char_failures);
            s.failures.is_empty() && char_failures.is_empty()
        }
        Command::Mirabolic { n, q } => {
            let (rows, failures) = survey::mirabolic_survey(*n, *q)?;
            text += &manifest_lines(cli);
            text += "r,s,alpha,beta,dim\n";
            for r in &rows {
                let _ = writeln!(text, "{},{},{},{},{}", r.r, r.s, r.alpha, r.beta, r.dim);
            }
            failure_lines(&mut text, &failures);
            failures.is_empty()
        }
        Command::Verdict { spec } => {
            let file = read_spec(spec)?;
            let (s, x, ell) = file.parts();
            let v = verdict::decide(&s, &x, cli.ell.unwrap_or(ell))?;
            text += &json_report(cli, &v)?;
            true
        }
        Command::TwistScan { spec } => {
            let file = read_spec(spec)?;
            let (s, x, ell) = file.parts();
            let ell = cli.ell.unwrap_or(ell);
            let v = verdict::decide(&s, &x, ell)?;
            let witness = verdict::omega_twist_exists(&s, &x, ell)?;
            let bound = 8 * v.invariants.degrees.f_df as u128;
            let scanned = verdict::exhaustive_twist_scan(&s, &x, ell, bound)?;
            let witness_outcome = match &witness {
                Some(w) => Some(verdict::decide(&s, &verdict::twist(&s, &x, w), ell)?.outcome),
                None => None,
            };
            let agrees = witness.is_some() == scanned.is_some();
            let report = TwistScanReport {
                outcome: v.outcome,
                rule: v.rule,
                dd0: localtower::classify_kk0(&s),
                omega_twist_exists: witness.is_some(),
                witness: witness.map(|w| w.chi_at_uniformizer),
                witness_outcome,
                scan_bound: bound,
                exhaustive_scan_agrees: agrees,
            };
            text += &json_report(cli, &report)?;
            agrees
        }
        Command::Selftest { trials } => {
            let cfg = SelftestConfig { seed: cli.seed, trials: *trials, budgets };
            let results = selftest::run_all(&cfg)?;
            text += &manifest_lines(cli);
            for r in &results {
                let tag = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(text, "[{tag}] {} ({} checks)", r.name, r.trials);
                for f in &r.failures {
                    let _ = writeln!(text, "    {f}");
                }
            }
            results.iter().all(|r| r.passed())
        }
    };
    Ok(Report { text, ok })
}

fn emit(cli: &Cli, report: &Report) -> Result<()> {
    match &cli.out {
        Some(path) => {
            let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
            f.write_all(report.text.as_bytes())?;
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.text.as_bytes())?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Parses arguments (including the program name), runs the command and
/// returns the exit status: 0 on success, 1 when a checked relation fails,
/// 2 on bad input.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(Error::InvalidInput(format!("thread pool: {e}"))),
        },
        None => execute(&cli),
    };
    match result.and_then(|r| emit(&cli, &r).map(|_| r.ok)) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("gldist: {e}");
            e.exit_code()
        }
    }
}
