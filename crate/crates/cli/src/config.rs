use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lcstruct::arith::is_prime;
use lcstruct::assembly::DEFAULT_MAX_K;
use lcstruct::{ExponentVector, OracleKs};

#[derive(Parser, Debug)]
#[command(
    name = "lcstruct",
    version,
    about = "Graded local cohomology structure for C-monomial ideals over Z"
)]
pub struct Cli {
    #[command(subcommand)]
    pub mode: Mode,
}

#[derive(Subcommand, Debug)]
pub enum Mode {
    /// Structure reports for each degree.
    Report(ReportArgs),
    /// Per-block tameness scan, optionally searching a box for witnesses.
    Scan(ScanArgs),
    /// Reports cross-checked against the finite-coefficient oracle.
    Verify(VerifyArgs),
    /// Rational ranks on the 2^n blocks.
    AlphaTable(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Ideal file in the JSON schema.
    #[arg(long)]
    pub ideal: PathBuf,
    /// Cohomological index `i`, or an inclusive range `lo:hi`.
    #[arg(long = "i", value_parser = parse_index_range)]
    pub indices: IndexRange,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads for the degree-level map (0 = all cores).
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
    /// Merge generators with equal monomials, `(aU, a'U) -> (gcd(a, a')U)`.
    #[arg(long)]
    pub simplify: bool,
    /// Log reduction transcripts to stderr.
    #[arg(long)]
    pub trace: bool,
    /// Print each Čech slice as JSON to stderr.
    #[arg(long)]
    pub dump_slice: bool,
}

#[derive(Args, Debug, Clone)]
pub struct DegreeArgs {
    /// A degree such as `-1,0`; repeatable.
    #[arg(long = "degree", allow_hyphen_values = true, value_parser = parse_degree)]
    pub degrees: Vec<ExponentVector>,
    /// A box of degrees such as `-2:1,-2:1`.
    #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_box)]
    pub bounds: Option<DegreeBox>,
    /// `auto` (primes dividing the coefficient product) or a list such as `2,3,5`
    /// of extra primes to probe.
    #[arg(long, default_value = "auto", value_parser = parse_primes)]
    pub primes: PrimeSpec,
}

#[derive(Args, Debug, Clone)]
pub struct ReportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub degrees: DegreeArgs,
    /// Include the structures at every spot of the complex.
    #[arg(long)]
    pub all_spots: bool,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub degrees: DegreeArgs,
    /// Oracle moduli exponents, e.g. `4,8`; `auto` doubles K until stable.
    #[arg(long = "Ks", default_value = "auto", value_parser = parse_ks)]
    pub ks: KsSpec,
}

#[derive(Args, Debug, Clone)]
pub struct ScanArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Random degrees checked per block.
    #[arg(long, default_value_t = 3)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Search this box for degrees with both `a > 0` and `b > 0`, or with
    /// finite torsion, at some probed prime.
    #[arg(long = "box", allow_hyphen_values = true, value_parser = parse_box)]
    pub search: Option<DegreeBox>,
    #[arg(long, default_value = "auto", value_parser = parse_primes)]
    pub primes: PrimeSpec,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexRange {
    pub lo: usize,
    pub hi: usize,
}

impl IndexRange {
    pub fn iter(&self) -> impl Iterator<Item = usize> {
        self.lo..=self.hi
    }

    pub fn is_single(&self) -> bool {
        self.lo == self.hi
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeBox(pub Vec<(i64, i64)>);

impl DegreeBox {
    pub fn cube(n: usize, lo: i64, hi: i64) -> Self {
        DegreeBox(vec![(lo, hi); n])
    }

    /// All degrees in the box, lexicographically.
    pub fn degrees(&self) -> Vec<ExponentVector> {
        let mut out = vec![Vec::new()];
        for &(lo, hi) in &self.0 {
            out = out
                .into_iter()
                .flat_map(|prefix| (lo..=hi).map(move |x| [prefix.clone(), vec![x]].concat()))
                .collect();
        }
        out.into_iter().map(ExponentVector::new).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PrimeSpec {
    Auto,
    Explicit(Vec<u64>),
}

impl PrimeSpec {
    pub fn extra(&self) -> &[u64] {
        match self {
            PrimeSpec::Auto => &[],
            PrimeSpec::Explicit(ps) => ps,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum KsSpec {
    Auto,
    Fixed(Vec<u32>),
}

impl KsSpec {
    /// The stabilization cap honors `LCSTRUCT_MAX_K`.
    pub fn oracle(&self) -> OracleKs {
        match self {
            KsSpec::Fixed(ks) => OracleKs::Fixed(ks.clone()),
            KsSpec::Auto => {
                let cap = std::env::var("LCSTRUCT_MAX_K")
                    .ok()
                    .and_then(|v| v.parse().ok())
                    .unwrap_or(DEFAULT_MAX_K);
                OracleKs::Stabilize { cap }
            }
        }
    }
}

/// Default scan box when neither `--degree` nor `--box` is given.
pub const DEFAULT_BOX: (i64, i64) = (-8, 8);

pub fn parse_index_range(s: &str) -> Result<IndexRange, String> {
    let parse = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|e| format!("bad index {t:?}: {e}"))
    };
    match s.split_once(':') {
        Some((lo, hi)) => {
            let (lo, hi) = (parse(lo)?, parse(hi)?);
            if lo > hi {
                return Err(format!("empty index range {lo}:{hi}"));
            }
            Ok(IndexRange { lo, hi })
        }
        None => {
            let i = parse(s)?;
            Ok(IndexRange { lo: i, hi: i })
        }
    }
}

pub fn parse_degree(s: &str) -> Result<ExponentVector, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|e| format!("bad degree entry {t:?}: {e}"))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(ExponentVector::new)
}

pub fn parse_box(s: &str) -> Result<DegreeBox, String> {
    s.split(',')
        .map(|t| {
            let (lo, hi) = t
                .split_once(':')
                .ok_or_else(|| format!("box coordinate {t:?} must be lo:hi"))?;
            let lo: i64 = lo
                .trim()
                .parse()
                .map_err(|e| format!("bad bound {lo:?}: {e}"))?;
            let hi: i64 = hi
                .trim()
                .parse()
                .map_err(|e| format!("bad bound {hi:?}: {e}"))?;
            if lo > hi {
                return Err(format!("box bounds {lo}:{hi} have lo > hi"));
            }
            Ok((lo, hi))
        })
        .collect::<Result<Vec<_>, _>>()
        .map(DegreeBox)
}

pub fn parse_primes(s: &str) -> Result<PrimeSpec, String> {
    if s.trim() == "auto" {
        return Ok(PrimeSpec::Auto);
    }
    let ps = s
        .split(',')
        .map(|t| {
            let p: u64 = t
                .trim()
                .parse()
                .map_err(|e| format!("bad prime {t:?}: {e}"))?;
            if !is_prime(p) {
                return Err(format!("{p} is not a prime"));
            }
            Ok(p)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(PrimeSpec::Explicit(ps))
}

pub fn parse_ks(s: &str) -> Result<KsSpec, String> {
    if s.trim() == "auto" {
        return Ok(KsSpec::Auto);
    }
    s.split(',')
        .map(|t| match t.trim().parse::<u32>() {
            Ok(0) => Err("K must be positive".to_string()),
            Ok(k) => Ok(k),
            Err(e) => Err(format!("bad K {t:?}: {e}")),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(KsSpec::Fixed)
}
