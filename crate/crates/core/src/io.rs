//! On-disk formats.
//!
//! JSON documents for regularities, sequences, estimates, and reports;
//! JSON-lines for nets; CSV for trajectories and loss matrices. All writes
//! go through a temp file in the destination directory and a rename, so
//! readers never observe a half-written file. Labels used in CSV must not
//! contain commas.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::alphabet::Alphabet;
use crate::decision::{CriterionReport, LossMatrix, Proposition3Report};
use crate::empirics::{LimitSetEstimate, Trajectory};
use crate::error::{Error, Result};
use crate::measure::Measure;
use crate::realize::{NetItem, NetMeta, SamplingNet, SequenceMeta, SymbolSequence};
use crate::regularity::Regularity;

/// Writes bytes to `path` atomically (temp file + rename).
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    let parent = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    Ok(bytes)
}

#[derive(Serialize, Deserialize)]
struct RegularityDoc {
    alphabet: Vec<String>,
    convex: bool,
    measures: Vec<Vec<f64>>,
}

pub fn write_regularity(path: &Path, reg: &Regularity) -> Result<()> {
    let doc = RegularityDoc {
        alphabet: reg.alphabet().symbols().to_vec(),
        convex: reg.is_convex(),
        measures: reg
            .points()
            .iter()
            .map(|p| p.weights().to_vec())
            .collect(),
    };
    atomic_write(path, &json_bytes(&doc)?)
}

pub fn read_regularity(path: &Path) -> Result<Regularity> {
    let doc: RegularityDoc = serde_json::from_slice(&fs::read(path)?)?;
    let alphabet = Alphabet::new(doc.alphabet)?;
    let points = doc
        .measures
        .iter()
        .map(|w| Measure::new(&alphabet, w))
        .collect::<Result<Vec<_>>>()?;
    Regularity::new(points, doc.convex)
}

#[derive(Serialize, Deserialize)]
struct NetLine {
    lambda: u64,
    round: u32,
    target: u32,
    tuple: Vec<String>,
}

/// One JSON object per item, in net order.
pub fn write_net(path: &Path, net: &SamplingNet) -> Result<()> {
    let mut out = Vec::new();
    for item in net.items() {
        let line = NetLine {
            lambda: item.lambda,
            round: item.round,
            target: item.target,
            tuple: item
                .symbols
                .iter()
                .map(|&s| net.alphabet().label(s).to_string())
                .collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.push(b'\n');
    }
    atomic_write(path, &out)
}

/// Reads a JSON-lines net against a known alphabet. Net files carry no
/// alphabet record of their own; the config that produced them is the
/// replay artifact.
pub fn read_net(path: &Path, alphabet: &Alphabet) -> Result<SamplingNet> {
    let text = fs::read_to_string(path)?;
    let mut items = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let raw = raw.trim();
        if raw.is_empty() {
            continue;
        }
        let line: NetLine = serde_json::from_str(raw)
            .map_err(|e| Error::Malformed(format!("net line {}: {e}", k + 1)))?;
        let symbols = line
            .tuple
            .iter()
            .map(|l| alphabet.require(l))
            .collect::<Result<Vec<_>>>()?;
        items.push(NetItem {
            lambda: line.lambda,
            round: line.round,
            target: line.target,
            symbols,
        });
    }
    SamplingNet::from_items(
        alphabet.clone(),
        items,
        NetMeta {
            description: format!("net stream {}", path.display()),
            seed: None,
        },
    )
}

#[derive(Serialize, Deserialize)]
struct SequenceDoc {
    alphabet: Vec<String>,
    symbols: Vec<String>,
    meta: SequenceMeta,
}

pub fn write_sequence(path: &Path, seq: &SymbolSequence) -> Result<()> {
    let doc = SequenceDoc {
        alphabet: seq.alphabet().symbols().to_vec(),
        symbols: seq.labels().map(str::to_string).collect(),
        meta: seq.meta().clone(),
    };
    atomic_write(path, &json_bytes(&doc)?)
}

pub fn read_sequence(path: &Path) -> Result<SymbolSequence> {
    let doc: SequenceDoc = serde_json::from_slice(&fs::read(path)?)?;
    let alphabet = Alphabet::new(doc.alphabet)?;
    let symbols = doc
        .symbols
        .iter()
        .map(|l| alphabet.require(l))
        .collect::<Result<Vec<_>>>()?;
    SymbolSequence::from_symbols(alphabet, symbols, doc.meta)
}

/// `index,dim0,dim1,...` header, one row per point. Floats print in the
/// shortest form that parses back to the same value.
pub fn write_trajectory_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    let dims = traj.points()[0].len();
    let mut out = String::from("index");
    for d in 0..dims {
        write!(out, ",dim{d}").expect("string write");
    }
    out.push('\n');
    for (i, p) in traj.indices().iter().zip(traj.points()) {
        write!(out, "{i}").expect("string write");
        for v in p {
            write!(out, ",{v}").expect("string write");
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

pub fn read_trajectory_csv(path: &Path) -> Result<Trajectory> {
    let text = fs::read_to_string(path)?;
    let mut lines = text.lines().map(str::trim_end);
    let header = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty trajectory file".into()))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    if cols.first() != Some(&"index") || cols.len() < 2 {
        return Err(Error::Malformed(format!(
            "trajectory header must be index,dim0,...: got {header:?}"
        )));
    }
    let dims = cols.len() - 1;
    let mut indices = Vec::new();
    let mut points = Vec::new();
    for (k, raw) in lines.enumerate() {
        if raw.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = raw.split(',').map(str::trim).collect();
        if fields.len() != dims + 1 {
            return Err(Error::Malformed(format!(
                "trajectory line {}: expected {} fields, got {}",
                k + 2,
                dims + 1,
                fields.len()
            )));
        }
        let idx: u64 = fields[0]
            .parse()
            .map_err(|e| Error::Malformed(format!("trajectory line {}: {e}", k + 2)))?;
        let row = fields[1..]
            .iter()
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::Malformed(format!("trajectory line {}: {e}", k + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        indices.push(idx);
        points.push(row);
    }
    Trajectory::new(indices, points)
}

pub fn write_estimate(path: &Path, est: &LimitSetEstimate) -> Result<()> {
    atomic_write(path, &json_bytes(est)?)
}

pub fn read_estimate(path: &Path) -> Result<LimitSetEstimate> {
    Ok(serde_json::from_slice(&fs::read(path)?)?)
}

/// First row is a corner cell plus the decision labels; each further row
/// is a state label plus its losses.
pub fn write_loss_csv(path: &Path, loss: &LossMatrix) -> Result<()> {
    for l in loss
        .theta_labels()
        .iter()
        .chain(loss.decision_labels().iter())
    {
        if l.contains(',') {
            return Err(Error::Malformed(format!(
                "label {l:?} contains a comma and cannot be written as CSV"
            )));
        }
    }
    let mut out = String::from("loss");
    for d in loss.decision_labels() {
        write!(out, ",{d}").expect("string write");
    }
    out.push('\n');
    for (t, row) in loss.theta_labels().iter().zip(loss.values()) {
        out.push_str(t);
        for v in row {
            write!(out, ",{v}").expect("string write");
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

pub fn read_loss_csv(path: &Path) -> Result<LossMatrix> {
    let text = fs::read_to_string(path)?;
    let mut lines = text
        .lines()
        .map(str::trim_end)
        .filter(|l| !l.trim().is_empty());
    let header = lines
        .next()
        .ok_or_else(|| Error::Malformed("empty loss file".into()))?;
    let mut cells = header.split(',').map(str::trim);
    cells.next(); // corner cell, content ignored
    let decision_labels: Vec<String> = cells.map(str::to_string).collect();
    let mut theta_labels = Vec::new();
    let mut values = Vec::new();
    for (k, raw) in lines.enumerate() {
        let mut fields = raw.split(',').map(str::trim);
        let label = fields
            .next()
            .expect("split yields at least one field")
            .to_string();
        let row = fields
            .map(|f| {
                f.parse::<f64>()
                    .map_err(|e| Error::Malformed(format!("loss line {}: {e}", k + 2)))
            })
            .collect::<Result<Vec<f64>>>()?;
        theta_labels.push(label);
        values.push(row);
    }
    LossMatrix::new(theta_labels, decision_labels, values)
}

#[derive(Serialize)]
struct CriterionDoc<'a> {
    kind: &'a str,
    values: BTreeMap<&'a str, f64>,
    argmin: Vec<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    worst_case: Option<BTreeMap<&'a str, &'a [usize]>>,
}

pub fn write_criterion_report(path: &Path, report: &CriterionReport) -> Result<()> {
    let values = report
        .decision_labels
        .iter()
        .map(String::as_str)
        .zip(report.values.iter().copied())
        .collect();
    let worst_case = report.worst_case.as_ref().map(|per_u| {
        report
            .decision_labels
            .iter()
            .map(String::as_str)
            .zip(per_u.iter().map(Vec::as_slice))
            .collect()
    });
    let doc = CriterionDoc {
        kind: report.kind.as_str(),
        values,
        argmin: report.argmin_labels(),
        worst_case,
    };
    atomic_write(path, &json_bytes(&doc)?)
}

pub fn write_proposition3_report(path: &Path, report: &Proposition3Report) -> Result<()> {
    atomic_write(path, &json_bytes(report)?)
}
