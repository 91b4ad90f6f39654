//! Argument parsing, dispatch and report emission for the `sievelab` binary.
//!
//! [`run`] is the whole program minus process setup, so tests can drive it
//! with in-memory streams.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use sievelab::constructions::{self, format_class, parse_base};
use sievelab::heuristics::{self, CONDITIONAL_BANNER};
use sievelab::interval::{self, SieveOptions};
use sievelab::sieve_functions::{default_grid, SieveFunctionGrid, DEFAULT_U_MAX};
use sievelab::{dirichlet, Budget, HeuristicParams, Prop3Case, QuadChar, ThinMode};

mod format;

pub use format::format_real;

#[derive(Debug, Parser)]
#[command(
    name = "sievelab",
    version,
    about = "Sieve functions, interval sieves and their constructions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Memory cap in bytes for tables and bitmaps.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_mem: Option<u64>,
    /// Cap on integers visited by full enumerations.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_enum: Option<u64>,
    /// Step of the sieve-function grid (1/step must be an integer).
    #[arg(long, global = true)]
    pub grid_step: Option<f64>,
    /// Seed for randomized sampling; computations themselves are deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// ρ, ω, F and f at one point.
    Sievefn {
        #[arg(long)]
        u: f64,
    },
    /// Survivors of (x, x+y] sieved by the primes <= z.
    IntervalSieve {
        /// Decimal integer or a class "R%M".
        #[arg(long, value_parser = parse_big)]
        x: BigUint,
        #[arg(long)]
        y: u64,
        #[arg(long)]
        z: u64,
        /// Emit the surviving offsets instead of their count.
        #[arg(long)]
        list: bool,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        segment: Option<u64>,
    },
    /// Rough numbers up to x split by parity and by number of prime factors.
    Rough {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        z: u64,
    },
    /// The quadratic character (d|n).
    Char {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long, allow_negative_numbers = true)]
        eval: i64,
    },
    /// L(s, χ_d) for real s > 0.
    Lvalue {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        s: f64,
    },
    /// Real zeros of L(s, χ_d) in [lo, hi].
    ZeroScan {
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        #[arg(long)]
        step: f64,
    },
    /// Almost-prime counts per residue class against χ_d.
    Bias {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        z: u64,
        #[arg(long)]
        k: u32,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
    /// A greedy admissible subset of [0, y].
    Admissible {
        #[arg(long)]
        y: u64,
    },
    /// A base x with no integer in (x, x+y] free of primes <= Z.
    Gap {
        #[arg(long)]
        z: u64,
        #[arg(long)]
        y: u64,
        /// Required class of x mod P(z): decimal or "R%M".
        #[arg(long, value_parser = parse_big)]
        base: Option<BigUint>,
    },
    /// Jacobsthal's function J(m).
    Jacobsthal {
        #[arg(long)]
        m: u64,
    },
    /// Remove one residue class per prime from a set.
    Thin {
        #[arg(long)]
        mode: ThinMode,
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<u64>,
    },
    /// S(x, y, z)/(G(z) y) against f(u) and F(u).
    Envelope(EnvelopeArgs),
    /// 2N^∓/(G(z) x) for rough numbers at z = x^{1/u}, against f(u) and F(u).
    Parity {
        #[arg(long)]
        x: u64,
        #[arg(long)]
        u: f64,
    },
    /// Closed-form bound evaluators.
    Bounds(BoundsArgs),
    /// Gap scale and w lower bound for a hypothetical exceptional zero.
    Cramer {
        #[arg(long = "logq")]
        log_q: f64,
        #[arg(long)]
        one_minus_beta: f64,
    },
    /// Record prime gaps among primes <= limit.
    Maxgaps {
        #[arg(long)]
        limit: u64,
    },
}

#[derive(Debug, Args)]
pub struct EnvelopeArgs {
    /// Base of the interval; when omitted, `--samples` bases below 10^18
    /// are drawn from `--seed`.
    #[arg(long, value_parser = parse_big)]
    pub x: Option<BigUint>,
    #[arg(long)]
    pub y: u64,
    #[arg(long)]
    pub z: u64,
    #[arg(long, default_value_t = 0.25)]
    pub slack: f64,
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Bound {
    Iwaniec,
    Prop2,
    Prop3,
    GapScale,
    CoverLimit,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[arg(long, value_enum)]
    pub which: Bound,
    #[arg(long)]
    pub y: Option<f64>,
    #[arg(long)]
    pub z: Option<f64>,
    #[arg(long)]
    pub q: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// The constant subtracted inside the Iwaniec bound.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub c: f64,
    /// Regime of 1 − β for prop3, 1 to 4.
    #[arg(long = "case")]
    pub case_: Option<u8>,
    #[arg(long)]
    pub u: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub kappa: Option<f64>,
    #[arg(long)]
    pub tau: Option<f64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub c_kappa: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_tau: f64,
    #[arg(long)]
    pub logx: Option<f64>,
    #[arg(long)]
    pub a: Option<f64>,
    #[arg(long)]
    pub b: Option<f64>,
}

fn parse_big(text: &str) -> Result<BigUint, String> {
    parse_base(text).map_err(|e| e.to_string())
}

/// Bad flag combinations found after parsing; reported like clap errors.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn need<T>(value: Option<T>, flag: &str, which: &str) -> anyhow::Result<T> {
    value.ok_or_else(|| UsageError(format!("--which {which} requires --{flag}")).into())
}

enum Csv {
    /// `key,value` lines for scalar results.
    Pairs(Vec<(&'static str, String)>),
    Table {
        header: Vec<&'static str>,
        rows: Vec<Vec<String>>,
    },
}

struct Report {
    csv: Csv,
    json: Value,
    note: Option<String>,
}

impl Report {
    fn new(csv: Csv, json: impl Serialize) -> anyhow::Result<Self> {
        Ok(Report {
            csv,
            json: serde_json::to_value(json)?,
            note: None,
        })
    }

    fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(&self.json)?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => {
                let mut w = csv::WriterBuilder::new().flexible(true).from_writer(Vec::new());
                match &self.csv {
                    Csv::Pairs(pairs) => {
                        for (k, v) in pairs {
                            w.write_record([*k, v.as_str()])?;
                        }
                    }
                    Csv::Table { header, rows } => {
                        w.write_record(header)?;
                        for row in rows {
                            w.write_record(row)?;
                        }
                    }
                }
                Ok(w.into_inner().map_err(|e| anyhow::anyhow!(e.to_string()))?)
            }
        }
    }
}

fn table(header: &[&'static str], rows: Vec<Vec<String>>) -> Csv {
    Csv::Table {
        header: header.to_vec(),
        rows,
    }
}

fn real(v: f64) -> String {
    format_real(v)
}

fn int(v: impl ToString) -> String {
    v.to_string()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountReport {
    pub x: String,
    pub y: u64,
    pub z: u64,
    pub count: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharValue {
    pub d: i64,
    pub n: i64,
    pub chi: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LValue {
    pub d: i64,
    pub s: f64,
    #[serde(rename = "L")]
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct JacobsthalValue {
    pub m: u64,
    #[serde(rename = "J")]
    pub j: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThinReport {
    pub set: Vec<u64>,
    pub plan: sievelab::ResidueClassPlan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub which: String,
    pub value: f64,
}

/// Parses `args` (program name first) and runs the subcommand. Returns the
/// process exit code: 0 on success, 2 on usage errors, 1 when the
/// computation itself fails.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            if let Some(note) = &report.note {
                let _ = writeln!(err, "note: {note}");
            }
            match emit(&report, &cli, out) {
                Ok(()) => 0,
                Err(e) => fail(err, &e, 1),
            }
        }
        Err(e) => {
            let code = if e.downcast_ref::<UsageError>().is_some() { 2 } else { 1 };
            fail(err, &e, code)
        }
    }
}

fn fail(err: &mut dyn Write, e: &anyhow::Error, code: i32) -> i32 {
    let _ = writeln!(err, "sievelab {}: error: {e:#}", env!("CARGO_PKG_VERSION"));
    code
}

fn emit(report: &Report, cli: &Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    let bytes = report.render(cli.format)?;
    match &cli.output {
        Some(path) => write_atomically(path, &bytes),
        None => Ok(out.write_all(&bytes)?),
    }
}

/// Writes next to `path` and renames, so readers never see a partial report.
fn write_atomically(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    let name = path
        .file_name()
        .with_context(|| format!("--output {} has no file name", path.display()))?;
    let tmp = path.with_file_name(format!(".{}.partial", name.to_string_lossy()));
    std::fs::write(&tmp, bytes).with_context(|| format!("writing {}", tmp.display()))?;
    std::fs::rename(&tmp, path).with_context(|| format!("renaming onto {}", path.display()))?;
    Ok(())
}

fn budget(cli: &Cli) -> Budget {
    let mut b = Budget::default();
    if let Some(m) = cli.budget_mem {
        b.max_memory = m;
    }
    if let Some(n) = cli.budget_enum {
        b.max_enumeration = n;
    }
    b
}

fn execute(cli: &Cli) -> anyhow::Result<Report> {
    let budget = budget(cli);
    match &cli.command {
        Command::Sievefn { u } => {
            let custom;
            let grid = match cli.grid_step {
                Some(h) => {
                    custom = SieveFunctionGrid::new(h, DEFAULT_U_MAX)?;
                    &custom
                }
                None => default_grid(),
            };
            let row = grid.row(*u)?;
            let csv = table(
                &["u", "rho", "omega", "F", "f"],
                vec![vec![
                    real(row.u),
                    real(row.rho),
                    row.omega.map(real).unwrap_or_default(),
                    real(row.upper),
                    real(row.lower),
                ]],
            );
            Report::new(csv, row)
        }
        Command::IntervalSieve { x, y, z, list, segment } => {
            let opts = SieveOptions {
                segment: *segment,
                budget,
            };
            let set = interval::sieve_interval_with(x, *y, *z, &opts)?;
            if *list {
                let rows = set.offsets.iter().map(|&j| vec![int(j)]).collect();
                Report::new(table(&["offset"], rows), &set)
            } else {
                let count = set.count() as u64;
                let report = CountReport {
                    x: x.to_string(),
                    y: *y,
                    z: *z,
                    count,
                };
                Report::new(Csv::Pairs(vec![("count", int(count))]), report)
            }
        }
        Command::Rough { x, z } => {
            let counts = interval::rough_counts_with(*x, *z, &budget)?;
            let lead = [int(counts.n), int(counts.n_plus), int(counts.n_minus)];
            let mut by_k: Vec<(u32, u64)> = counts.by_k.iter().map(|(&k, &c)| (k, c)).collect();
            if *x >= 1 {
                by_k.insert(0, (0, 1));
            }
            let rows = by_k
                .into_iter()
                .map(|(k, c)| {
                    let mut row = lead.to_vec();
                    row.extend([int(k), int(c)]);
                    row
                })
                .collect();
            Report::new(table(&["N", "N_plus", "N_minus", "k", "pi_k"], rows), &counts)
        }
        Command::Char { d, eval } => {
            let chi = QuadChar::new(*d)?;
            let v = CharValue {
                d: *d,
                n: *eval,
                chi: chi.eval(*eval),
            };
            Report::new(table(&["d", "n", "chi"], vec![vec![int(v.d), int(v.n), int(v.chi)]]), v)
        }
        Command::Lvalue { d, s } => {
            let v = LValue {
                d: *d,
                s: *s,
                value: dirichlet::l_real(*d, *s)?,
            };
            Report::new(
                table(&["d", "s", "L"], vec![vec![int(v.d), real(v.s), real(v.value)]]),
                v,
            )
        }
        Command::ZeroScan { d, lo, hi, step } => {
            let r = dirichlet::scan_real_zeros(*d, *lo, *hi, *step)?;
            let lead = [int(r.d), real(r.lo), real(r.hi), real(r.step), int(r.evaluations)];
            let mut rows: Vec<Vec<String>> = r
                .zeros
                .iter()
                .map(|&(beta, width)| {
                    let mut row = lead.to_vec();
                    row.extend([real(beta), real(width)]);
                    row
                })
                .collect();
            if rows.is_empty() {
                let mut row = lead.to_vec();
                row.extend([String::new(), String::new()]);
                rows.push(row);
            }
            let header = ["d", "lo", "hi", "step", "evaluations", "beta", "half_width"];
            Report::new(table(&header, rows), &r)
        }
        Command::Bias { x, z, k, d } => {
            budget.check_enumeration(*x)?;
            let t = dirichlet::bias_report(*x, *z, *k, *d)?;
            let rows = t
                .rows
                .iter()
                .map(|r| {
                    vec![
                        int(r.a),
                        int(r.chi),
                        int(r.count),
                        real(r.normalized),
                        real(t.predicted(r)),
                    ]
                })
                .collect();
            let header = ["a", "chi", "count", "normalized", "predicted"];
            let report = Report::new(table(&header, rows), &t)?;
            Ok(if t.q_exceeds_z {
                report.with_note("q exceeds z, so rough numbers sharing a factor with q are excluded from the rows")
            } else {
                report
            })
        }
        Command::Admissible { y } => {
            budget.check_enumeration(*y)?;
            let set = constructions::build_admissible(*y)?;
            let rows = set.elements.iter().map(|&e| vec![int(e)]).collect();
            Report::new(table(&["element"], rows), &set)
        }
        Command::Gap { z, y, base } => {
            let base = base.clone().unwrap_or_default();
            let cert = constructions::gap_construct_with(*z, *y, &base, &budget)?;
            let matches = cert
                .matches
                .iter()
                .map(|m| format!("{}:{}", m.offset, m.prime))
                .collect::<Vec<_>>()
                .join(";");
            let row = vec![
                cert.x.to_string(),
                int(cert.y),
                int(cert.z),
                int(cert.cover_limit),
                cert.modulus.to_string(),
                format_class(&cert.x, &cert.modulus),
                matches,
            ];
            let header = ["x", "y", "z", "Z", "modulus", "class", "matches"];
            Report::new(table(&header, vec![row]), &cert)
        }
        Command::Jacobsthal { m } => {
            let j = constructions::jacobsthal_with(*m, &budget)?;
            Report::new(Csv::Pairs(vec![("J", int(j))]), JacobsthalValue { m: *m, j })
        }
        Command::Thin { mode, primes, set } => {
            let (set, plan) = constructions::greedy_thin(set, primes, *mode)?;
            let rows = plan
                .steps
                .iter()
                .map(|s| vec![int(s.prime), int(s.residue), int(s.before), int(s.after)])
                .collect();
            let csv = table(&["prime", "residue", "before", "after"], rows);
            Report::new(csv, ThinReport { set, plan })
        }
        Command::Envelope(args) => envelope(args, cli.seed),
        Command::Parity { x, u } => {
            budget.check_enumeration(*x)?;
            let p = heuristics::parity_check(*x, *u)?;
            let row = vec![
                int(p.x),
                int(p.z),
                real(p.u),
                int(p.n_minus),
                int(p.n_plus),
                real(p.g),
                real(p.ratio_minus),
                real(p.ratio_plus),
                real(p.f_u),
                real(p.upper_u),
            ];
            let header = [
                "x",
                "z",
                "u",
                "N_minus",
                "N_plus",
                "G",
                "ratio_minus",
                "ratio_plus",
                "f_u",
                "F_u",
            ];
            Report::new(table(&header, vec![row]), &p)
        }
        Command::Bounds(args) => bounds(args),
        Command::Cramer { log_q, one_minus_beta } => {
            let c = heuristics::cramer_predict(*log_q, *one_minus_beta)?;
            let row = vec![
                real(c.log_q),
                real(c.one_minus_beta),
                real(c.log_y),
                real(c.w_lower),
                real(c.w_unsimplified),
            ];
            let header = ["log_q", "one_minus_beta", "log_y", "w_lower", "w_unsimplified"];
            Ok(Report::new(table(&header, vec![row]), c)?.with_note(CONDITIONAL_BANNER))
        }
        Command::Maxgaps { limit } => {
            let recs = heuristics::max_gap_scan_with(*limit, &budget)?;
            let rows = recs
                .iter()
                .map(|r| vec![int(r.prime), int(r.next_prime), int(r.gap)])
                .collect();
            Report::new(table(&["prime", "next_prime", "gap"], rows), &recs)
        }
    }
}

fn envelope(args: &EnvelopeArgs, seed: u64) -> anyhow::Result<Report> {
    let bases: Vec<BigUint> = match &args.x {
        Some(x) => vec![x.clone()],
        None => {
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            (0..args.samples)
                .map(|_| BigUint::from(rng.gen_range(0..1_000_000_000_000_000_000u64)))
                .collect()
        }
    };
    let reports = bases
        .iter()
        .map(|x| heuristics::envelope_check(x, args.y, args.z, args.slack))
        .collect::<sievelab::Result<Vec<_>>>()?;
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.x.to_string(),
                int(r.y),
                int(r.z),
                real(r.u),
                int(r.s),
                real(r.g),
                real(r.ratio),
                real(r.f_u),
                real(r.upper_u),
                real(r.slack),
                int(r.within),
                int(r.degenerate),
            ]
        })
        .collect();
    let header = [
        "x",
        "y",
        "z",
        "u",
        "S",
        "G",
        "ratio",
        "f_u",
        "F_u",
        "slack",
        "within",
        "degenerate",
    ];
    let csv = table(&header, rows);
    if args.x.is_some() {
        Report::new(csv, &reports[0])
    } else {
        Report::new(csv, &reports)
    }
}

fn bounds(a: &BoundsArgs) -> anyhow::Result<Report> {
    let name = a
        .which
        .to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string();
    let which = name.as_str();
    let (value, conditional) = match a.which {
        Bound::Iwaniec => {
            let (y, z) = (need(a.y, "y", which)?, need(a.z, "z", which)?);
            (heuristics::iwaniec_lower(y, z, a.c)?, false)
        }
        Bound::Prop2 => {
            let (q, y, z, beta) = (
                need(a.q, "q", which)?,
                need(a.y, "y", which)?,
                need(a.z, "z", which)?,
                need(a.beta, "beta", which)?,
            );
            (heuristics::prop2_upper(q, y, z, beta)?, true)
        }
        Bound::Prop3 => {
            let case = Prop3Case::try_from(need(a.case_, "case", which)?)?;
            let (q, beta) = (need(a.q, "q", which)?, need(a.beta, "beta", which)?);
            let mut params = HeuristicParams::new(q, beta)?;
            params.delta = a.delta;
            params.kappa = a.kappa;
            params.tau = a.tau;
            params.epsilon = a.epsilon;
            params.c_kappa = a.c_kappa;
            params.c_tau = a.c_tau;
            let (u, y) = (need(a.u, "u", which)?, need(a.y, "y", which)?);
            (heuristics::prop3_bound(case, u, y, &params)?, true)
        }
        Bound::GapScale => {
            let (logx, big_a, b) = (
                need(a.logx, "logx", which)?,
                need(a.a, "a", which)?,
                need(a.b, "b", which)?,
            );
            (heuristics::gap_scale(logx, big_a, b)?, false)
        }
        Bound::CoverLimit => {
            let (y, beta, eps) = (
                need(a.y, "y", which)?,
                need(a.beta, "beta", which)?,
                need(a.epsilon, "epsilon", which)?,
            );
            (heuristics::analytic_cover_limit(y, beta, eps), true)
        }
    };
    let csv = table(&["which", "value"], vec![vec![name.clone(), real(value)]]);
    let report = Report::new(csv, BoundValue { which: name, value })?;
    Ok(if conditional {
        report.with_note(CONDITIONAL_BANNER)
    } else {
        report
    })
}
