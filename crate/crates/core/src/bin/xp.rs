//! Experiment harness. Exit status: 0 when every check passes, 1 when a
//! check fails, 2 on usage or configuration errors.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;

use sphere5::axis::{parse_rational, ProjectionParams};
use sphere5::cayley::Cache;
use sphere5::curve_graph::Rational;
use sphere5::report::{self, emit, parse_list, AxisCsv, GeodesicCsv, OracleCsv};

#[derive(Parser)]
#[command(name = "xp", about = "Word-length certificates and desk-scale experiments for the five-punctured sphere")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args, Clone, Default)]
struct Common {
    /// Value of n, or a list such as `3,4,7` where the command accepts one.
    #[arg(long)]
    n: Option<String>,
    /// Value of k, or a list such as `1..8`.
    #[arg(long)]
    k: Option<String>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// File of `key=value` lines; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certified lengths of the word families and the split-sum identity.
    GeodesicTable {
        #[command(flatten)]
        common: Common,
    },
    /// Shadow of the geodesic from the identity to T1^(n^k), and the
    /// quasi-geodesic constants its excursion rules out.
    ShadowQg {
        #[command(flatten)]
        common: Common,
        /// Multiplicative constants to test, e.g. `1,2,3/2`.
        #[arg(long = "qg-k")]
        qg_k: Option<String>,
        /// Additive constants to test.
        #[arg(long = "qg-c")]
        qg_c: Option<String>,
        /// Largest k scanned when --k is absent.
        #[arg(long)]
        kmax: Option<String>,
    },
    /// Inequality chain for projections of balls onto the quasi-axis.
    AxisProjection {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        d1: Option<String>,
        #[arg(long)]
        d2: Option<String>,
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        /// Indices of the sequence k_i = 2n^i - 3.
        #[arg(long)]
        i: Option<String>,
    },
    /// Checks of the carrying matrix and its stretch factor.
    TraintrackVerify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tol: Option<String>,
        /// Period count for the intersection-growth ratio.
        #[arg(long = "growth-k")]
        growth_k: Option<String>,
    },
    /// Seeded identity words, conjugation covariance, and a lantern.
    RelationsCheck {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        count: Option<String>,
        #[arg(long)]
        covariance: Option<String>,
    },
    /// Breadth-first ground truth for short words.
    BfsOracle {
        #[command(flatten)]
        common: Common,
        /// Radius of the exhaustive ball check; 0 skips it.
        #[arg(long)]
        radius: Option<String>,
        #[arg(long = "max-total")]
        max_total: Option<String>,
        /// Node budget per search.
        #[arg(long)]
        budget: Option<String>,
        /// Directory for the content-addressed result cache.
        #[arg(long)]
        cache: Option<PathBuf>,
    },
}

/// Flags over config file over defaults.
struct Settings {
    file: BTreeMap<String, String>,
}

impl Settings {
    fn load(path: Option<&PathBuf>) -> Result<Settings> {
        let mut file = BTreeMap::new();
        if let Some(p) = path {
            let text = fs::read_to_string(p).with_context(|| format!("reading config {}", p.display()))?;
            for (no, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| anyhow!("config line {}: expected key=value", no + 1))?;
                file.insert(k.trim().to_string(), v.trim().to_string());
            }
        }
        Ok(Settings { file })
    }

    fn raw(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.file.get(key).cloned())
    }

    fn parse<T: std::str::FromStr>(&self, flag: &Option<String>, key: &str, default: T) -> Result<T> {
        match self.raw(flag, key) {
            Some(s) => s.parse().map_err(|_| anyhow!("bad value for {key}: {s}")),
            None => Ok(default),
        }
    }

    fn list(&self, flag: &Option<String>, key: &str, default: &[u32]) -> Result<Vec<u32>> {
        match self.raw(flag, key) {
            Some(s) => parse_list(&s).ok_or_else(|| anyhow!("bad list for {key}: {s}")),
            None => Ok(default.to_vec()),
        }
    }

    fn rational(&self, flag: &Option<String>, key: &str, default: i64) -> Result<num_rational::BigRational> {
        match self.raw(flag, key) {
            Some(s) => parse_rational(&s).ok_or_else(|| anyhow!("bad rational for {key}: {s}")),
            None => Ok(num_rational::BigRational::from_integer(default.into())),
        }
    }

    fn small_rationals(&self, flag: &Option<String>, key: &str, default: &[i64]) -> Result<Vec<Rational>> {
        let Some(s) = self.raw(flag, key) else {
            return Ok(default.iter().map(|&x| Ratio::from_integer(x)).collect());
        };
        s.split(',')
            .map(|t| {
                let t = t.trim();
                let (a, b) = t.split_once('/').unwrap_or((t, "1"));
                let (a, b): (i64, i64) = (a.trim().parse()?, b.trim().parse()?);
                if b == 0 {
                    bail!("zero denominator");
                }
                Ok(Ratio::new(a, b))
            })
            .collect::<Result<_>>()
            .with_context(|| format!("bad list for {key}: {s}"))
    }

    fn format(&self, flag: Option<Format>, default: Format) -> Result<Format> {
        if let Some(f) = flag {
            return Ok(f);
        }
        match self.file.get("format").map(String::as_str) {
            None => Ok(default),
            Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(other) => bail!("bad value for format: {other}"),
        }
    }

    fn out(&self, flag: &Option<PathBuf>) -> Option<PathBuf> {
        flag.clone().or_else(|| self.file.get("out").map(PathBuf::from))
    }
}

/// Usage problems map to status 2, everything else flows through `Ok`.
struct Outcome {
    text: String,
    pass: bool,
}

fn single(v: Vec<u32>, key: &str) -> Result<u32> {
    match v.as_slice() {
        [x] => Ok(*x),
        _ => bail!("{key} takes a single value here"),
    }
}

fn run(cmd: &Cmd) -> Result<(Outcome, Option<PathBuf>)> {
    let common = match cmd {
        Cmd::GeodesicTable { common }
        | Cmd::ShadowQg { common, .. }
        | Cmd::AxisProjection { common, .. }
        | Cmd::TraintrackVerify { common, .. }
        | Cmd::RelationsCheck { common, .. }
        | Cmd::BfsOracle { common, .. } => common,
    };
    let s = Settings::load(common.config.as_ref())?;
    let out = s.out(&common.out);
    let outcome = match cmd {
        Cmd::GeodesicTable { .. } => {
            let ns = s.list(&common.n, "n", &[3, 4, 7])?;
            let ks = s.list(&common.k, "k", &[1, 2, 3, 4, 5, 6, 7, 8])?;
            if ns.iter().any(|&n| n < 2) || ks.contains(&0) {
                bail!("need n >= 2 and k >= 1");
            }
            let rows = report::geodesic_table(&ns, &ks);
            let pass = rows.iter().all(|r| r.all_pass());
            let text = match s.format(common.format, Format::Csv)? {
                Format::Csv => emit::csv(&rows.iter().map(GeodesicCsv::from).collect::<Vec<_>>())?,
                Format::Json => emit::json(&rows),
            };
            Outcome { text, pass }
        }
        Cmd::ShadowQg { qg_k, qg_c, kmax, .. } => {
            let n = single(s.list(&common.n, "n", &[3])?, "n")?;
            if n < 2 {
                bail!("need n >= 2");
            }
            let kmax: u32 = s.parse(kmax, "kmax", 8)?;
            let k = match s.raw(&common.k, "k") {
                Some(_) => single(s.list(&common.k, "k", &[])?, "k")?,
                None => report::first_filling_k(n, kmax).unwrap_or(kmax),
            };
            if k == 0 {
                bail!("need k >= 1");
            }
            let ks = s.small_rationals(qg_k, "qg_k", &[1, 2])?;
            let cs = s.small_rationals(qg_c, "qg_c", &[1, 2, 3])?;
            let r = report::shadow_qg(n, k, &ks, &cs);
            let text = match s.format(common.format, Format::Json)? {
                Format::Csv => emit::csv(&r.refuted)?,
                Format::Json => emit::json(&r),
            };
            Outcome { text, pass: r.pass() }
        }
        Cmd::AxisProjection { d1, d2, sigma, delta, i, .. } => {
            let p = ProjectionParams {
                n: single(s.list(&common.n, "n", &[12])?, "n")?,
                d1: s.rational(d1, "d1", 2)?,
                d2: s.rational(d2, "d2", 1)?,
                sigma: s.rational(sigma, "sigma", 1)?,
                delta: s.rational(delta, "delta", 10)?,
            };
            p.validate()?;
            let is = s.list(i, "i", &[1, 2, 3, 4, 5, 6])?;
            let r = report::axis_projection(&p, &is)?;
            let text = match s.format(common.format, Format::Csv)? {
                Format::Csv => emit::csv(&r.rows.iter().map(AxisCsv::from).collect::<Vec<_>>())?,
                Format::Json => emit::json(&r),
            };
            Outcome { text, pass: r.verdict.all_pass() }
        }
        Cmd::TraintrackVerify { tol, growth_k, .. } => {
            let tol: f64 = s.parse(tol, "tol", 1e-9)?;
            let gk: u32 = s.parse(growth_k, "growth_k", 10)?;
            let r = report::traintrack_verify(tol, gk);
            let text = match s.format(common.format, Format::Json)? {
                Format::Csv => emit::csv(&r.growth)?,
                Format::Json => emit::json(&r),
            };
            Outcome { text, pass: r.pass() }
        }
        Cmd::RelationsCheck { count, covariance, .. } => {
            let n = single(s.list(&common.n, "n", &[3])?, "n")?;
            let seed: u64 = s.parse(&common.seed, "seed", 0)?;
            let count: usize = s.parse(count, "count", 100)?;
            let cov: usize = s.parse(covariance, "covariance", 20)?;
            let r = report::relations_check(seed, count, n, cov);
            let text = match s.format(common.format, Format::Json)? {
                Format::Csv => emit::csv(&r.identities)?,
                Format::Json => emit::json(&r),
            };
            Outcome { text, pass: r.pass() }
        }
        Cmd::BfsOracle { radius, max_total, budget, cache, .. } => {
            let n = single(s.list(&common.n, "n", &[3])?, "n")?;
            let kmax = single(s.list(&common.k, "k", &[2])?, "k")?;
            let radius: u32 = s.parse(radius, "radius", 4)?;
            let max_total: u32 = s.parse(max_total, "max_total", 6)?;
            let budget: usize = s.parse(budget, "budget", 2_000_000)?;
            let cache_dir = cache.clone().or_else(|| s.file.get("cache").map(PathBuf::from));
            let cache = cache_dir.map(Cache::new);
            let r = report::bfs_oracle(n, kmax, (radius > 0).then_some(radius), max_total, budget, cache.as_ref())?;
            let text = match s.format(common.format, Format::Csv)? {
                Format::Csv => emit::csv(&r.rows.iter().map(OracleCsv::from).collect::<Vec<_>>())?,
                Format::Json => emit::json(&r),
            };
            Outcome { text, pass: r.pass() }
        }
    };
    Ok((outcome, out))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (outcome, out) = match run(&cli.cmd) {
        Ok(x) => x,
        Err(e) => {
            eprintln!("xp: {e:#}");
            return ExitCode::from(2);
        }
    };
    let written = match out {
        Some(p) => fs::write(&p, &outcome.text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("xp: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        eprintln!("xp: one or more checks failed");
        ExitCode::from(1)
    }
}
