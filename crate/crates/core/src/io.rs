//! Curve corpora, the Selmer data sidecar and batch job files.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::path::Path;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parity::{Mode, SelmerInput, Strictness};
use crate::places::BaseField;
use crate::weierstrass::EllipticCurve;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveRecord {
    pub label: String,
    pub curve: EllipticCurve,
}

#[derive(Clone, Debug, Default)]
pub struct Corpus {
    records: Vec<CurveRecord>,
    index: HashMap<String, usize>,
}

impl Corpus {
    pub fn from_records(records: Vec<CurveRecord>) -> Result<Self> {
        let mut index = HashMap::new();
        for (i, r) in records.iter().enumerate() {
            if index.insert(r.label.clone(), i).is_some() {
                return Err(Error::Parse {
                    path: "corpus".into(),
                    line: i + 1,
                    message: format!("duplicate label {}", r.label),
                });
            }
        }
        Ok(Corpus { records, index })
    }

    pub fn get(&self, label: &str) -> Result<&EllipticCurve> {
        self.index
            .get(label)
            .map(|&i| &self.records[i].curve)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn records(&self) -> &[CurveRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

#[derive(Deserialize)]
struct JsonCurve {
    label: String,
    #[serde(alias = "ainvs")]
    a: [serde_json::Value; 5],
}

fn parse_int(s: &str) -> Option<BigInt> {
    s.trim().parse().ok()
}

fn record(label: &str, coeffs: [BigInt; 5], path: &str, line: usize) -> Result<CurveRecord> {
    let curve = EllipticCurve::new(coeffs).map_err(|e| match e {
        Error::SingularCurve(_) => Error::SingularCurve(Some(label.to_string())),
        other => other,
    })?;
    if label.is_empty() {
        return Err(Error::Parse {
            path: path.into(),
            line,
            message: "empty label".into(),
        });
    }
    Ok(CurveRecord {
        label: label.to_string(),
        curve: curve.with_label(label),
    })
}

/// Header `label,a1,a2,a3,a4,a6`, extra columns ignored; `#` starts a comment line.
pub fn parse_corpus_csv(text: &str, path: &str) -> Result<Corpus> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| csv_error(e, path))?.clone();
    let col = |name: &str| headers.iter().position(|h| h == name);
    let cols: Vec<usize> = ["label", "a1", "a2", "a3", "a4", "a6"]
        .iter()
        .map(|n| {
            col(n).ok_or_else(|| Error::Parse {
                path: path.into(),
                line: 1,
                message: format!("missing column {n}"),
            })
        })
        .collect::<Result<_>>()?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for row in reader.records() {
        let row = row.map_err(|e| csv_error(e, path))?;
        let line = row.position().map(|p| p.line() as usize).unwrap_or(0);
        let field = |i: usize| row.get(cols[i]).unwrap_or("");
        let mut coeffs = Vec::with_capacity(5);
        for i in 1..6 {
            coeffs.push(parse_int(field(i)).ok_or_else(|| Error::Parse {
                path: path.into(),
                line,
                message: format!("coefficient {:?} is not an integer", field(i)),
            })?);
        }
        check_new(&mut seen, field(0), path, line)?;
        records.push(record(field(0), coeffs.try_into().unwrap(), path, line)?);
    }
    Corpus::from_records(records)
}

fn check_new(seen: &mut HashSet<String>, label: &str, path: &str, line: usize) -> Result<()> {
    if !seen.insert(label.to_string()) {
        return Err(Error::Parse {
            path: path.into(),
            line,
            message: format!("duplicate label {label}"),
        });
    }
    Ok(())
}

fn csv_error(e: csv::Error, path: &str) -> Error {
    Error::Parse {
        path: path.into(),
        line: e.position().map(|p| p.line() as usize).unwrap_or(0),
        message: e.to_string(),
    }
}

/// An array of `{"label": ..., "a": [a1, a2, a3, a4, a6]}`; coefficients may be
/// numbers or decimal strings.
pub fn parse_corpus_json(text: &str, path: &str) -> Result<Corpus> {
    let rows: Vec<JsonCurve> = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: path.into(),
        line: e.line(),
        message: e.to_string(),
    })?;
    let mut records = Vec::new();
    let mut seen = HashSet::new();
    for (i, r) in rows.iter().enumerate() {
        let mut coeffs = Vec::with_capacity(5);
        for v in &r.a {
            let s = match v {
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            coeffs.push(parse_int(&s).ok_or_else(|| Error::Parse {
                path: path.into(),
                line: i + 1,
                message: format!("coefficient {s} of {} is not an integer", r.label),
            })?);
        }
        check_new(&mut seen, &r.label, path, i + 1)?;
        records.push(record(&r.label, coeffs.try_into().unwrap(), path, i + 1)?);
    }
    Corpus::from_records(records)
}

pub fn parse_corpus(path: impl AsRef<Path>) -> Result<Corpus> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let name = path.display().to_string();
    if path.extension().is_some_and(|e| e == "json") {
        parse_corpus_json(&text, &name)
    } else {
        parse_corpus_csv(&text, &name)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SelmerRecord {
    pub label: String,
    pub field: String,
    pub p: u64,
    #[serde(flatten)]
    pub data: SelmerInput,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RankRecord {
    pub label: String,
    pub analytic_rank: u64,
    #[serde(default)]
    pub provenance: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct SidecarFile {
    #[serde(default)]
    pub schema_version: u32,
    #[serde(default)]
    pub selmer: Vec<SelmerRecord>,
    #[serde(default)]
    pub ranks: Vec<RankRecord>,
}

/// Selmer and lambda data keyed by `(label, field, p)`, plus analytic ranks over Q.
#[derive(Clone, Debug, Default)]
pub struct Sidecar {
    selmer: BTreeMap<(String, BaseField, u64), SelmerInput>,
    ranks: BTreeMap<String, RankRecord>,
}

impl Sidecar {
    pub fn parse(text: &str, path: &str) -> Result<Self> {
        let file: SidecarFile = serde_json::from_str(text).map_err(|e| Error::Parse {
            path: path.into(),
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut out = Sidecar::default();
        for r in file.selmer {
            let field: BaseField = r.field.parse()?;
            let key = (r.label.clone(), field, r.p);
            if out.selmer.insert(key, r.data).is_some() {
                return Err(Error::Parse {
                    path: path.into(),
                    line: 0,
                    message: format!(
                        "duplicate Selmer record for {} over {} at p = {}",
                        r.label, r.field, r.p
                    ),
                });
            }
        }
        for r in file.ranks {
            out.ranks.insert(r.label.clone(), r);
        }
        Ok(out)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&std::fs::read_to_string(path)?, &path.display().to_string())
    }

    pub fn selmer(&self, label: &str, field: BaseField, p: u64) -> Option<&SelmerInput> {
        self.selmer.get(&(label.to_string(), field, p))
    }

    pub fn insert_selmer(&mut self, label: &str, field: BaseField, p: u64, data: SelmerInput) {
        self.selmer.insert((label.to_string(), field, p), data);
    }

    pub fn rank(&self, label: &str) -> Option<&RankRecord> {
        self.ranks.get(label)
    }

    pub fn ranks(&self) -> impl Iterator<Item = &RankRecord> {
        self.ranks.values()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationJob {
    pub labels: (String, String),
    pub field: BaseField,
    pub p: u64,
    pub mode: Mode,
    pub strictness: Strictness,
}

impl VerificationJob {
    pub fn new(l1: &str, l2: &str, field: BaseField, p: u64) -> Result<Self> {
        if p < 3 || !crate::arith::is_prime(p) {
            return Err(Error::InvalidP(p));
        }
        Ok(VerificationJob {
            labels: (l1.to_string(), l2.to_string()),
            field,
            p,
            mode: Mode::Auto,
            strictness: Strictness::AssumeNoDrop,
        })
    }

    pub fn id(&self) -> String {
        format!(
            "{}~{}@{}/p={}",
            self.labels.0, self.labels.1, self.field, self.p
        )
    }
}

/// One job per line: `label1 label2 field p [mode] [strictness]`. Blank lines
/// and lines starting with `#` are skipped.
pub fn parse_jobs(text: &str, path: &str) -> Result<Vec<VerificationJob>> {
    let mut jobs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: path.into(),
            line: line_no,
            message,
        };
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() < 4 || parts.len() > 6 {
            return Err(err(format!(
                "expected 4 to 6 fields, found {}",
                parts.len()
            )));
        }
        let field: BaseField = parts[2].parse().map_err(|e: Error| err(e.to_string()))?;
        let p: u64 = parts[3]
            .parse()
            .map_err(|_| err(format!("p = {:?} is not an integer", parts[3])))?;
        let mut job =
            VerificationJob::new(parts[0], parts[1], field, p).map_err(|e| err(e.to_string()))?;
        if let Some(m) = parts.get(4) {
            job.mode = m.parse().map_err(|e: Error| err(e.to_string()))?;
        }
        if let Some(s) = parts.get(5) {
            job.strictness = match *s {
                "assume-no-drop" => Strictness::AssumeNoDrop,
                "strict" => Strictness::Strict,
                other => return Err(err(format!("unknown strictness {other}"))),
            };
        }
        jobs.push(job);
    }
    Ok(jobs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_rows() {
        let c = parse_corpus_csv(
            "label,a1,a2,a3,a4,a6\n11a1,0,-1,1,-10,-20\n121c1,1,1,0,-2,-7\n",
            "t.csv",
        )
        .unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get("121c1").unwrap().to_string(), "[1,1,0,-2,-7]");
        assert!(matches!(c.get("14a1"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn csv_errors() {
        let singular = parse_corpus_csv("label,a1,a2,a3,a4,a6\nbad,0,0,0,0,0\n", "t.csv");
        assert!(matches!(singular, Err(Error::SingularCurve(Some(l))) if l == "bad"));
        let dup = parse_corpus_csv(
            "label,a1,a2,a3,a4,a6\nx,0,-1,1,-10,-20\nx,0,-1,1,-10,-20\n",
            "t.csv",
        );
        assert!(matches!(dup, Err(Error::Parse { line: 3, .. })));
        let junk = parse_corpus_csv("label,a1,a2,a3,a4,a6\nx,0,-1,one,-10,-20\n", "t.csv");
        assert!(matches!(junk, Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn json_corpus() {
        let c =
            parse_corpus_json(r#"[{"label":"11a1","a":[0,-1,1,-10,"-20"]}]"#, "t.json").unwrap();
        assert_eq!(c.get("11a1").unwrap().to_string(), "[0,-1,1,-10,-20]");
    }

    #[test]
    fn jobs_file() {
        let jobs = parse_jobs(
            "# pairs\n11a1 121c1 Q 3\n\n11a1 11a1 Q(sqrt{-5}) 5 ordinary strict\n",
            "j",
        )
        .unwrap();
        assert_eq!(jobs.len(), 2);
        assert_eq!(jobs[1].field, BaseField::Quadratic { d: -5 });
        assert_eq!(jobs[1].strictness, Strictness::Strict);
        assert!(matches!(
            parse_jobs("a b Q 2\n", "j"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn sidecar_lookup() {
        let s = Sidecar::parse(
            r#"{"schema_version":1,"selmer":[{"label":"11a1","field":"Q","p":3,"lambda":0,"provenance":"x"}],
                "ranks":[{"label":"11a1","analytic_rank":0}]}"#,
            "s.json",
        )
        .unwrap();
        assert_eq!(
            s.selmer("11a1", BaseField::Rationals, 3).unwrap().lambda,
            Some(0)
        );
        assert!(s.selmer("11a1", BaseField::Rationals, 5).is_none());
        assert_eq!(s.rank("11a1").unwrap().analytic_rank, 0);
    }
}
