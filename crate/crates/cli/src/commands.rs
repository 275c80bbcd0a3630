use crate::{ExportArgs, Format, GroupArgs, SpecArgs, VerifyArgs};
use lenshull_core::export::{to_csv, to_json, to_off4};
use lenshull_core::{
    canonicalize, certify as run_certify, compare, hull, predict as run_predict, Error, FacetDiff, Fraction,
    GroupSpec, TorusPoint, Triangulation, TriangulationDocument,
};
use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;
use std::process::ExitCode;

/// Largest accepted denominator.
const MAX_Q: i64 = 1_000_000;

pub const MISMATCH: u8 = 1;
pub const INVALID: u8 = 2;

/// A failed command: what to print and which exit code to use.
pub struct Failure {
    code: u8,
    message: String,
    json: Option<String>,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: INVALID,
            message: message.into(),
            json: None,
        }
    }

    pub fn report(self) -> ExitCode {
        if let Some(json) = self.json {
            println!("{json}");
        }
        eprintln!("error: {}", self.message);
        ExitCode::from(self.code)
    }
}

#[derive(Serialize)]
struct ErrorDocument<'a> {
    error: &'a str,
    degeneracy: Option<lenshull_core::Degeneracy>,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let degeneracy = match &e {
            Error::Degenerate(d) => Some(*d),
            _ => None,
        };
        let code = match e {
            Error::InvariantViolation(_) => MISMATCH,
            _ => INVALID,
        };
        let json = serde_json::to_string(&ErrorDocument {
            error: &message,
            degeneracy,
        })
        .ok();
        Failure { code, message, json }
    }
}

type CmdResult = Result<ExitCode, Failure>;

fn spec_from(p: i64, q: i64, mu: i64, nu: i64) -> Result<GroupSpec, Failure> {
    if q > MAX_Q {
        return Err(Failure::invalid(format!("q = {q} exceeds the limit {MAX_Q}")));
    }
    Ok(GroupSpec::new(p, q, mu, nu)?)
}

/// Prediction with supporting forms attached.
fn triangulate(args: &SpecArgs) -> Result<(Triangulation, lenshull_core::CertificationSummary), Failure> {
    let spec = spec_from(args.p, args.q, args.mu, args.nu)?;
    if !spec.is_generic() {
        return Err(Error::Degenerate(spec.degeneracy()).into());
    }
    let mut tri = run_predict(&spec)?;
    let summary = run_certify(&mut tri, args.samples)?;
    Ok((tri, summary))
}

/// Writes to standard output; a closed pipe is not an error.
fn write_stdout(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(Failure::invalid(format!("cannot write output: {e}")))
        }
        _ => Ok(()),
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    write_stdout(&(to_json(value)? + "\n"))
}

pub fn predict(args: &SpecArgs) -> CmdResult {
    let (tri, _) = triangulate(args)?;
    emit(&TriangulationDocument::new(&tri, None, args.unit_sphere))?;
    Ok(ExitCode::SUCCESS)
}

pub fn certify(args: &SpecArgs) -> CmdResult {
    let (_, summary) = triangulate(args)?;
    emit(&summary)?;
    Ok(if summary.all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(MISMATCH)
    })
}

#[derive(Serialize)]
struct DiffEntry {
    side: &'static str,
    vertices: Vec<usize>,
}

fn diff_entries(diff: FacetDiff) -> Vec<DiffEntry> {
    let missing = diff.missing.into_iter().map(|v| DiffEntry {
        side: "missing",
        vertices: v,
    });
    let unexpected = diff.unexpected.into_iter().map(|v| DiffEntry {
        side: "unexpected",
        vertices: v,
    });
    missing.chain(unexpected).collect()
}

#[derive(Serialize)]
struct VerifyReport {
    p: i64,
    q: i64,
    mu: i64,
    nu: i64,
    facets: usize,
    oracle_facets: usize,
    diff: Vec<DiffEntry>,
    certificates_pass: bool,
    min_margin: f64,
    pseudo_manifold: bool,
    connected: bool,
    ok: bool,
}

fn verify_spec(spec: GroupSpec, epsilon: f64, samples: usize, cap: usize) -> Result<VerifyReport, Failure> {
    if !spec.is_generic() {
        return Err(Error::Degenerate(spec.degeneracy()).into());
    }
    if spec.order() as usize > cap {
        return Err(Failure::invalid(format!(
            "orbit of {} points exceeds the oracle cap {cap}",
            spec.order()
        )));
    }
    let mut tri = run_predict(&spec)?;
    let summary = run_certify(&mut tri, samples)?;
    let oracle = hull(&tri.orbit.coords(), epsilon)?;
    let diff = diff_entries(compare(&tri, &oracle));
    let pseudo_manifold = tri.is_pseudo_manifold();
    let connected = tri.is_connected();
    Ok(VerifyReport {
        p: spec.p(),
        q: spec.q(),
        mu: spec.mu(),
        nu: spec.nu(),
        facets: tri.facets.len(),
        oracle_facets: oracle.facets.len(),
        ok: diff.is_empty() && oracle.dimension == 4 && summary.all_pass && pseudo_manifold && connected,
        diff,
        certificates_pass: summary.all_pass,
        min_margin: summary.min_margin,
        pseudo_manifold,
        connected,
    })
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

pub fn verify(args: &VerifyArgs) -> CmdResult {
    if !args.grid {
        let (p, q) = (args.p.unwrap_or_default(), args.q.unwrap_or_default());
        let spec = spec_from(p, q, args.mu, args.nu)?;
        let report = verify_spec(spec, args.epsilon, args.samples, args.cap)?;
        emit(&report)?;
        return Ok(if report.ok {
            ExitCode::SUCCESS
        } else {
            ExitCode::from(MISMATCH)
        });
    }

    if args.qmax > MAX_Q {
        return Err(Failure::invalid(format!("qmax exceeds the limit {MAX_Q}")));
    }
    let mut specs = Vec::new();
    for q in 5..=args.qmax {
        for p in 2..=q - 2 {
            if gcd(p, q) != 1 {
                continue;
            }
            let spec = spec_from(p, q, args.mu, args.nu)?;
            if spec.is_generic() && spec.order() as usize <= args.cap {
                specs.push(spec);
            }
        }
    }
    let rows: Vec<Result<VerifyReport, Failure>> = specs
        .par_iter()
        .map(|&spec| verify_spec(spec, args.epsilon, args.samples, args.cap))
        .collect();
    let mut all_ok = true;
    for row in rows {
        let row = row?;
        all_ok &= row.ok;
        emit(&row)?;
    }
    Ok(if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(MISMATCH)
    })
}

fn parse_generators(text: &str) -> Result<Vec<TorusPoint>, Failure> {
    text.split(';')
        .map(|item| {
            let coords: Vec<&str> = item.split(',').map(str::trim).collect();
            let [s, t] = coords.as_slice() else {
                return Err(Failure::invalid(format!("generator {item:?} needs two coordinates")));
            };
            let parse = |c: &str| {
                c.parse::<Fraction>()
                    .map_err(|e| Failure::invalid(format!("bad coordinate {c:?}: {e}")))
            };
            Ok(TorusPoint::new(parse(s)?, parse(t)?)?)
        })
        .collect()
}

#[derive(Serialize)]
struct GroupReport {
    p: i64,
    q: i64,
    mu: i64,
    nu: i64,
    degeneracy: lenshull_core::Degeneracy,
    order: i64,
}

pub fn group(args: &GroupArgs) -> CmdResult {
    let spec = canonicalize(&parse_generators(&args.gens)?)?;
    emit(&GroupReport {
        p: spec.p(),
        q: spec.q(),
        mu: spec.mu(),
        nu: spec.nu(),
        degeneracy: spec.degeneracy(),
        order: spec.order(),
    })?;
    Ok(ExitCode::SUCCESS)
}

pub fn export(args: &ExportArgs) -> CmdResult {
    let (tri, summary) = triangulate(&args.spec)?;
    let doc = TriangulationDocument::new(&tri, Some(summary), args.spec.unit_sphere);
    let text = match args.format {
        Format::Json => to_json(&doc)? + "\n",
        Format::Off4 => to_off4(&doc),
        Format::Csv => to_csv(&doc)?,
    };
    match &args.out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display())))?,
        None => write_stdout(&text)?,
    }
    Ok(ExitCode::SUCCESS)
}
