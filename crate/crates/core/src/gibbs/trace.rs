//! JSON-lines trace format: one `{"iteration": t, "eta": [[...], ...]}` object
//! per line, rows of `η` in order, `+∞` written as the string `"inf"`.

use std::io::{BufRead, Write};

use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::EtaMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub eta: EtaMatrix,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum JsonReal {
    Number(f64),
    Text(String),
}

impl From<f64> for JsonReal {
    fn from(v: f64) -> Self {
        if v == f64::INFINITY {
            JsonReal::Text("inf".into())
        } else {
            JsonReal::Number(v)
        }
    }
}

impl JsonReal {
    fn value(self) -> std::result::Result<f64, String> {
        match self {
            JsonReal::Number(v) => Ok(v),
            JsonReal::Text(s) if s == "inf" => Ok(f64::INFINITY),
            JsonReal::Text(s) => Err(format!("unexpected string {s:?} in eta")),
        }
    }
}

impl Serialize for EtaMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.dim()))?;
        for k in 0..self.dim() {
            let row: Vec<JsonReal> = self.row(k).iter().map(|&v| JsonReal::from(v)).collect();
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for EtaMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<JsonReal>> = Vec::deserialize(deserializer)?;
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(JsonReal::value).collect::<std::result::Result<Vec<_>, _>>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(de::Error::custom)?;
        EtaMatrix::from_rows(&rows).map_err(de::Error::custom)
    }
}

pub fn write_trace_record<W: Write + ?Sized>(out: &mut W, iteration: usize, eta: &EtaMatrix) -> std::io::Result<()> {
    #[derive(Serialize)]
    struct Borrowed<'a> {
        iteration: usize,
        eta: &'a EtaMatrix,
    }
    serde_json::to_writer(&mut *out, &Borrowed { iteration, eta })?;
    out.write_all(b"\n")
}

/// Writes `(iteration, η)` records, one per line.
pub fn write_trace<'a, W, I>(out: &mut W, records: I) -> std::io::Result<()>
where
    W: Write + ?Sized,
    I: IntoIterator<Item = (usize, &'a EtaMatrix)>,
{
    for (t, eta) in records {
        write_trace_record(out, t, eta)?;
    }
    Ok(())
}

/// Reads a JSON-lines trace; blank lines are skipped. Errors carry the
/// 1-based line number.
pub fn read_trace<R: BufRead>(input: R) -> Result<Vec<TraceRecord>> {
    let mut records = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        if line.trim().is_empty() {
            continue;
        }
        let record: TraceRecord = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}
