use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use lcstruct::assembly::{LocalJson, ReportJson};
use lcstruct::{
    alpha_table, analyze_degree, tame_scan_seeded, verify_report, CMonomialIdeal, DegreeAnalysis,
    Error, ExponentVector, StructureReport,
};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{
    CommonArgs, DegreeArgs, DegreeBox, Format, IndexRange, Mode, ReportArgs, ScanArgs, VerifyArgs,
    DEFAULT_BOX,
};

#[derive(Debug)]
pub enum Failure {
    Core(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Io(_) => 2,
            Failure::Core(Error::NonStabilizing { .. }) => 3,
            Failure::Core(
                Error::InconsistentImage { .. }
                | Error::InvalidComplex(_)
                | Error::BlockInconsistency { .. },
            ) => 4,
            Failure::Core(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(msg) => f.write_str(msg),
        }
    }
}

pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

pub fn run(mode: &Mode) -> Result<Outcome, Failure> {
    match mode {
        Mode::Report(args) => report(args),
        Mode::Verify(args) => verify(args),
        Mode::Scan(args) => scan(args),
        Mode::AlphaTable(args) => alpha(args),
    }
}

fn load_ideal(common: &CommonArgs) -> Result<CMonomialIdeal, Failure> {
    let text = std::fs::read_to_string(&common.ideal)
        .map_err(|e| Failure::Io(format!("cannot read {}: {e}", common.ideal.display())))?;
    let ideal = CMonomialIdeal::from_json(&text)?;
    Ok(if common.simplify {
        ideal.simplified()
    } else {
        ideal
    })
}

fn degree_list(ideal: &CMonomialIdeal, args: &DegreeArgs) -> Result<Vec<ExponentVector>, Failure> {
    let mut set: BTreeSet<ExponentVector> = args.degrees.iter().cloned().collect();
    let bounds = match &args.bounds {
        Some(b) => Some(b.clone()),
        None if set.is_empty() => Some(DegreeBox::cube(ideal.n(), DEFAULT_BOX.0, DEFAULT_BOX.1)),
        None => None,
    };
    if let Some(b) = bounds {
        check_len(ideal, b.0.len(), "box")?;
        set.extend(b.degrees());
    }
    for d in &set {
        check_len(ideal, d.len(), "degree")?;
    }
    Ok(set.into_iter().collect())
}

fn check_len(ideal: &CMonomialIdeal, found: usize, what: &str) -> Result<(), Failure> {
    if found != ideal.n() {
        return Err(Error::LengthMismatch {
            what: what.into(),
            expected: ideal.n(),
            found,
        }
        .into());
    }
    Ok(())
}

/// Degree-level parallel map; results come back in input order.
fn par_map<T, R>(
    jobs: usize,
    items: &[T],
    f: impl Fn(&T) -> Result<R, Error> + Sync + Send,
) -> Result<Vec<R>, Failure>
where
    T: Sync,
    R: Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::Io(format!("cannot start worker pool: {e}")))?;
    let results: Vec<Result<R, Error>> = pool.install(|| items.par_iter().map(f).collect());
    results
        .into_iter()
        .map(|r| r.map_err(Failure::from))
        .collect()
}

fn analyses(
    common: &CommonArgs,
    args: &DegreeArgs,
) -> Result<(CMonomialIdeal, Vec<DegreeAnalysis>), Failure> {
    let ideal = load_ideal(common)?;
    let degrees = degree_list(&ideal, args)?;
    let extra = args.primes.extra().to_vec();
    let out = par_map(common.jobs, &degrees, |u| analyze_degree(&ideal, u, &extra))?;
    if common.dump_slice {
        for a in &out {
            eprintln!("{}", json!({ "degree": a.degree, "slice": a.slice }));
        }
    }
    Ok((ideal, out))
}

fn reports(range: IndexRange, analyses: &[DegreeAnalysis]) -> Vec<StructureReport> {
    range
        .iter()
        .flat_map(|i| analyses.iter().map(move |a| a.report(i)))
        .collect()
}

fn report(args: &ReportArgs) -> Result<Outcome, Failure> {
    let (_, analyses) = analyses(&args.common, &args.degrees)?;
    let reports = reports(args.common.indices, &analyses);
    let stdout = match args.common.format {
        Format::Json => {
            let entries: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let mut v =
                        json!({ "i": r.i, "degree": r.degree, "report": ReportJson::from(r) });
                    if args.all_spots {
                        let spots: BTreeMap<u64, Vec<LocalJson>> = r
                            .spots
                            .iter()
                            .map(|(&p, s)| (p, s.iter().map(LocalJson::from).collect()))
                            .collect();
                        v["spots"] = json!(spots);
                    }
                    v
                })
                .collect();
            to_json(&Value::Array(entries))
        }
        Format::Table => {
            let primes: BTreeSet<u64> = reports
                .iter()
                .flat_map(|r| r.locals.keys().copied())
                .collect();
            let mut header = vec!["i".to_string(), "degree".into(), "alpha".into()];
            header.extend(primes.iter().map(|p| format!("p={p}")));
            let rows = reports
                .iter()
                .map(|r| {
                    let mut row = vec![r.i.to_string(), r.degree.to_string(), r.alpha.to_string()];
                    for p in &primes {
                        row.push(if args.all_spots {
                            r.spots[p]
                                .iter()
                                .map(ToString::to_string)
                                .collect::<Vec<_>>()
                                .join(" | ")
                        } else {
                            r.locals[p].to_string()
                        });
                    }
                    row
                })
                .collect();
            table(header, rows)
        }
    };
    Ok(Outcome { stdout, code: 0 })
}

fn verify(args: &VerifyArgs) -> Result<Outcome, Failure> {
    let (_, analyses) = analyses(&args.common, &args.degrees)?;
    let reports = reports(args.common.indices, &analyses);
    let ks = args.ks.oracle();
    let transcripts = par_map(args.common.jobs, &reports, |r| verify_report(r, &ks))?;
    let all_passed = transcripts.iter().all(|t| t.passed());
    let stdout = match args.common.format {
        Format::Json => {
            let entries: Vec<Value> = reports
                .iter()
                .zip(&transcripts)
                .map(|(r, t)| {
                    json!({
                        "i": r.i,
                        "degree": r.degree,
                        "passed": t.passed(),
                        "comparisons": t.comparisons.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    })
                })
                .collect();
            to_json(&json!({ "passed": all_passed, "results": entries }))
        }
        Format::Table => {
            let mut out = String::new();
            for (r, t) in reports.iter().zip(&transcripts) {
                let status = if t.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} i={} u={}", r.i, r.degree).unwrap();
                for c in &t.comparisons {
                    writeln!(out, "  {c}").unwrap();
                }
            }
            writeln!(
                out,
                "{}",
                if all_passed {
                    "all checks passed"
                } else {
                    "some checks FAILED"
                }
            )
            .unwrap();
            out
        }
    };
    Ok(Outcome {
        stdout,
        code: if all_passed { 0 } else { 1 },
    })
}

fn scan(args: &ScanArgs) -> Result<Outcome, Failure> {
    let ideal = load_ideal(&args.common)?;
    let indices: Vec<usize> = args.common.indices.iter().collect();
    let scans = par_map(args.common.jobs, &indices, |&i| {
        tame_scan_seeded(&ideal, i, args.samples, args.seed.wrapping_add(i as u64))
    })?;

    let search = match &args.search {
        Some(b) => {
            check_len(&ideal, b.0.len(), "box")?;
            let extra = args.primes.extra().to_vec();
            let degrees = b.degrees();
            Some(par_map(args.common.jobs, &degrees, |u| {
                analyze_degree(&ideal, u, &extra)
            })?)
        }
        None => None,
    };

    let stdout = match args.common.format {
        Format::Json => {
            let entries: Vec<Value> = indices
                .iter()
                .zip(&scans)
                .map(|(&i, scan)| {
                    let blocks: BTreeMap<&str, Value> = scan
                        .iter()
                        .map(|b| {
                            (
                                b.block.as_str(),
                                json!({ "alpha": b.alpha, "torsion_free": b.torsion_free_present }),
                            )
                        })
                        .collect();
                    let mut v = json!({ "i": i, "blocks": blocks });
                    if let Some(analyses) = &search {
                        let (mixed, torsion) = witnesses(i, analyses);
                        v["mixed"] = json!(mixed);
                        v["finite_torsion"] = json!(torsion);
                    }
                    v
                })
                .collect();
            to_json(&Value::Array(entries))
        }
        Format::Table => {
            let header = vec![
                "i".to_string(),
                "block".into(),
                "alpha".into(),
                "torsion-free".into(),
            ];
            let rows = indices
                .iter()
                .zip(&scans)
                .flat_map(|(&i, scan)| {
                    scan.iter().map(move |b| {
                        vec![
                            i.to_string(),
                            b.block.clone(),
                            b.alpha.to_string(),
                            if b.torsion_free_present { "yes" } else { "no" }.to_string(),
                        ]
                    })
                })
                .collect();
            let mut out = table(header, rows);
            if let Some(analyses) = &search {
                for &i in &indices {
                    let (mixed, torsion) = witnesses(i, analyses);
                    writeln!(
                        out,
                        "i={i}: {} degrees with a>0 and b>0, {} with finite torsion",
                        mixed.len(),
                        torsion.len()
                    )
                    .unwrap();
                }
            }
            out
        }
    };
    Ok(Outcome { stdout, code: 0 })
}

/// Degrees (with prime) where both `a` and `b` are nonzero, and where finite
/// torsion appears.
fn witnesses(i: usize, analyses: &[DegreeAnalysis]) -> (Vec<Value>, Vec<Value>) {
    let mut mixed = Vec::new();
    let mut torsion = Vec::new();
    for a in analyses {
        let r = a.report(i);
        for (p, e) in &r.locals {
            if e.free > 0 && e.divfree > 0 {
                mixed.push(json!({ "degree": r.degree, "p": p }));
            }
            if !e.torsion.is_empty() {
                torsion.push(json!({ "degree": r.degree, "p": p, "torsion": e.torsion }));
            }
        }
    }
    (mixed, torsion)
}

fn alpha(common: &CommonArgs) -> Result<Outcome, Failure> {
    let ideal = load_ideal(common)?;
    let indices: Vec<usize> = common.indices.iter().collect();
    let tables = par_map(common.jobs, &indices, |&i| alpha_table(&ideal, i))?;
    let stdout = match common.format {
        Format::Json if common.indices.is_single() => to_json(&json!(tables[0].to_json_map())),
        Format::Json => {
            let nested: BTreeMap<usize, BTreeMap<String, usize>> =
                tables.iter().map(|t| (t.i, t.to_json_map())).collect();
            to_json(&json!(nested))
        }
        Format::Table => {
            let header = vec!["i".to_string(), "block".into(), "alpha".into()];
            let rows = tables
                .iter()
                .flat_map(|t| {
                    t.entries
                        .iter()
                        .map(move |(b, a)| vec![t.i.to_string(), b.pattern(), a.to_string()])
                })
                .collect();
            table(header, rows)
        }
    };
    Ok(Outcome { stdout, code: 0 })
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces.
fn table(header: Vec<String>, rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    for row in std::iter::once(&header).chain(&rows) {
        let cells: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
    }
    out
}
