//! Flat records written as JSON or CSV.

use std::io::Write;

use anyhow::{bail, Result};
use serde::Serialize;
use serde_json::{Map, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// How far a number can be trusted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Status {
    Exact,
    Lower,
    Upper,
    Estimate(Option<f64>),
}

impl Status {
    fn tag(self) -> String {
        match self {
            Status::Exact => "exact".into(),
            Status::Lower => "lower".into(),
            Status::Upper => "upper".into(),
            Status::Estimate(None) => "estimate".into(),
            Status::Estimate(Some(se)) => format!("estimate({se})"),
        }
    }
}

/// One output row. Every tagged number `x` comes with `x_status`.
#[derive(Debug, Clone, Default)]
pub struct Record(Map<String, Value>);

impl Record {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn num(mut self, key: &str, v: f64, status: Status) -> Self {
        self.0.insert(key.into(), Value::from(v));
        self.0.insert(format!("{key}_status"), Value::from(status.tag()));
        self
    }

    /// Untagged field: parameters, counts, flags, labels.
    pub fn field(mut self, key: &str, v: impl Serialize) -> Self {
        self.0.insert(key.into(), serde_json::to_value(v).expect("serializable"));
        self
    }

    pub fn opt_field(self, key: &str, v: Option<impl Serialize>) -> Self {
        match v {
            Some(v) => self.field(key, v),
            None => self,
        }
    }
}

pub fn write<W: Write>(mut w: W, records: &[Record], format: Format) -> Result<()> {
    match format {
        Format::Json => {
            if let [one] = records {
                serde_json::to_writer_pretty(&mut w, &one.0)?;
            } else {
                let all: Vec<&Map<String, Value>> = records.iter().map(|r| &r.0).collect();
                serde_json::to_writer_pretty(&mut w, &all)?;
            }
            writeln!(w)?;
        }
        Format::Csv => {
            let mut header: Vec<&String> = Vec::new();
            for r in records {
                for k in r.0.keys() {
                    if !header.contains(&k) {
                        header.push(k);
                    }
                }
            }
            if header.is_empty() {
                bail!("nothing to write");
            }
            let mut out = csv::Writer::from_writer(w);
            out.write_record(&header)?;
            for r in records {
                out.write_record(header.iter().map(|k| match r.0.get(*k) {
                    None | Some(Value::Null) => String::new(),
                    Some(Value::String(s)) => s.clone(),
                    Some(v) => v.to_string(),
                }))?;
            }
            out.flush()?;
        }
    }
    Ok(())
}
