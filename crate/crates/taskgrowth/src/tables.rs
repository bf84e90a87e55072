//! CSV tables with fixed headers.

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use taskgrowth_core::dynamics::Trajectory;
use taskgrowth_core::production::StaticsRow;
use taskgrowth_core::surrogate::ImportanceReport;
use taskgrowth_core::sweep::{SweepDataset, SweepFailure, SweepRow};
use taskgrowth_core::ParamName;

use crate::error::{Error, Result};

pub const STATICS_HEADER: &str = "z_star,Y,Y_per_L,w,s_L,K_over_Y,flag_KY_gt_3";
pub const TRAJECTORY_HEADER: &str = "t,knowledge,task_mass,z_star,Y,Y_net,w,s_L,g_Y,g_K,A_eff";
pub const DATASET_HEADER: &str = "sample_id,seed,alpha,beta,gamma,zeta,eta,theta,kappa,lambda,xi,sigma,S_R,phi,chi,K_over_L,w,s_L,z_star,Y,g_Y,converged";
pub const FAILURES_HEADER: &str = "sample_id,reason,message";
pub const IMPORTANCE_HEADER: &str = "feature,impurity_importance,permutation_importance";
pub const SHAP_HEADER: &str = "sample_id,feature,feature_value,feature_percentile,shap_value";

/// Digits for human-facing tables.
pub const TABLE_DIGITS: usize = 9;
/// Enough digits for any `f64` to survive a text round trip.
pub const LOSSLESS_DIGITS: usize = 17;

/// Formats `x` with `digits` significant digits, positional unless the
/// exponent is far from zero.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let d = digits.max(1);
    let sci = format!("{:.*e}", d - 1, x);
    let exp: i32 = sci.rsplit_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..d as i32).contains(&exp) {
        format!("{:.*}", (d as i32 - 1 - exp) as usize, x)
    } else {
        sci
    }
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}

fn header_record(header: &str) -> Vec<&str> {
    header.split(',').collect()
}

fn writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

/// Writes a table to `path` through `f`.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> io::Result<()>,
{
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    f(&mut w).and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

pub fn write_statics<W: Write>(out: W, rows: &[StaticsRow]) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(STATICS_HEADER)).map_err(csv_io)?;
    for r in rows {
        let e = &r.eq;
        let mut rec: Vec<String> = [e.z_star, e.output, e.output_per_worker, e.wage, e.labor_share, e.capital_output_ratio]
            .iter()
            .map(|&v| sig(v, TABLE_DIGITS))
            .collect();
        rec.push(flag(r.ineffective_capital).into());
        w.write_record(&rec).map_err(csv_io)?;
    }
    w.flush()
}

pub fn write_trajectory<W: Write>(out: W, traj: &Trajectory) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(TRAJECTORY_HEADER)).map_err(csv_io)?;
    for p in &traj.points {
        let vals = [
            p.t,
            p.knowledge,
            p.task_mass,
            p.z_star,
            p.output,
            p.net_output,
            p.wage,
            p.labor_share,
            p.g_output,
            p.g_knowledge,
            p.gpt_effective,
        ];
        w.write_record(vals.iter().map(|&v| sig(v, TABLE_DIGITS))).map_err(csv_io)?;
    }
    w.flush()
}

pub fn write_dataset<W: Write>(out: W, ds: &SweepDataset) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(DATASET_HEADER)).map_err(csv_io)?;
    for r in &ds.rows {
        let mut rec = vec![r.sample_id.to_string(), r.seed.to_string()];
        rec.extend(r.features.iter().map(|&v| sig(v, LOSSLESS_DIGITS)));
        rec.extend([r.wage, r.labor_share, r.z_star, r.output, r.g_output].iter().map(|&v| sig(v, LOSSLESS_DIGITS)));
        rec.push(flag(r.converged).into());
        w.write_record(&rec).map_err(csv_io)?;
    }
    w.flush()
}

pub fn read_dataset(path: &Path) -> Result<SweepDataset> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(file, path)
}

/// Parses a dataset table; `origin` only labels error messages.
pub fn parse_dataset<R: Read>(input: R, origin: &Path) -> Result<SweepDataset> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(input);
    let expected = header_record(DATASET_HEADER);
    let header = rdr.headers().map_err(|e| Error::format(origin, format!("unreadable header: {e}")))?;
    if header.iter().ne(expected.iter().copied()) {
        return Err(Error::format(origin, format!("malformed header: expected `{DATASET_HEADER}`")));
    }
    let mut rows = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let line = i + 2;
        let rec = rec.map_err(|e| match e.kind() {
            csv::ErrorKind::UnequalLengths { len, expected_len, .. } => {
                Error::format(origin, format!("ragged row at line {line}: {len} fields, expected {expected_len}"))
            }
            _ => Error::format(origin, format!("line {line}: {e}")),
        })?;
        rows.push(parse_row(&rec).map_err(|m| Error::format(origin, format!("line {line}: {m}")))?);
    }
    Ok(SweepDataset { rows })
}

fn parse_row(rec: &csv::StringRecord) -> std::result::Result<SweepRow, String> {
    let field = |i: usize| rec.get(i).ok_or_else(|| format!("missing column {i}"));
    let real = |i: usize| -> std::result::Result<f64, String> {
        let s = field(i)?;
        s.parse().map_err(|_| format!("column `{}`: not a number: `{s}`", DATASET_HEADER.split(',').nth(i).unwrap_or("?")))
    };
    let sample_id = field(0)?.parse().map_err(|_| "sample_id: not an integer".to_string())?;
    let seed = field(1)?.parse().map_err(|_| "seed: not an integer".to_string())?;
    let mut features = [0.0; 14];
    for (k, slot) in features.iter_mut().enumerate() {
        *slot = real(2 + k)?;
    }
    let converged = match field(21)? {
        "1" | "true" => true,
        "0" | "false" => false,
        s => return Err(format!("converged: expected 0 or 1, got `{s}`")),
    };
    Ok(SweepRow {
        sample_id,
        seed,
        features,
        wage: real(16)?,
        labor_share: real(17)?,
        z_star: real(18)?,
        output: real(19)?,
        g_output: real(20)?,
        converged,
    })
}

/// Machine-readable reason for every non-converged row.
pub fn write_failures<W: Write>(out: W, ds: &SweepDataset, failures: &[SweepFailure]) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(FAILURES_HEADER)).map_err(csv_io)?;
    for r in ds.rows.iter().filter(|r| !r.converged) {
        let message = failures.iter().find(|f| f.sample_id == r.sample_id).map_or("", |f| f.message.as_str());
        w.write_record([r.sample_id.to_string().as_str(), r.status().as_str(), message]).map_err(csv_io)?;
    }
    w.flush()
}

pub fn write_importance<W: Write>(out: W, report: &ImportanceReport) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(IMPORTANCE_HEADER)).map_err(csv_io)?;
    for (i, name) in ParamName::ALL.iter().enumerate().take(report.impurity.len()) {
        let perm = report.permutation.as_ref().map_or(String::new(), |p| sig(p[i], TABLE_DIGITS));
        w.write_record([name.as_str(), &sig(report.impurity[i], TABLE_DIGITS), &perm]).map_err(csv_io)?;
    }
    w.flush()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapEntry {
    pub sample_id: usize,
    pub feature: ParamName,
    pub value: f64,
    pub percentile: f64,
    pub shap: f64,
}

pub fn write_shap<W: Write>(out: W, entries: &[ShapEntry]) -> io::Result<()> {
    let mut w = writer(out);
    w.write_record(header_record(SHAP_HEADER)).map_err(csv_io)?;
    for e in entries {
        w.write_record([
            e.sample_id.to_string(),
            e.feature.as_str().to_string(),
            sig(e.value, TABLE_DIGITS),
            sig(e.percentile, TABLE_DIGITS),
            sig(e.shap, TABLE_DIGITS),
        ])
        .map_err(csv_io)?;
    }
    w.flush()
}
