//! Matrix import and export: labelled CSV and a little-endian binary format
//! (`u64` rows, `u64` cols, then `f64` entries row-major).

use std::io::{Read, Write};

use super::MatrixGame;
use crate::error::{Error, Result};

impl MatrixGame {
    /// CSV with a header of column labels and a label in front of each row.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header = vec![String::new()];
        header.extend(self.col_labels().iter().cloned());
        out.write_record(&header).map_err(csv_err)?;
        for (i, label) in self.row_labels().iter().enumerate() {
            let mut rec = vec![label.clone()];
            rec.extend((0..self.cols()).map(|j| format!("{:?}", self.get(i, j))));
            out.write_record(&rec).map_err(csv_err)?;
        }
        out.flush()?;
        Ok(())
    }

    /// Reads either the labelled layout of [`write_csv`](Self::write_csv) or
    /// a bare numeric matrix.
    pub fn read_csv<R: Read>(r: R) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_reader(r);
        let records: Vec<csv::StringRecord> = reader.records().collect::<std::result::Result<_, _>>().map_err(csv_err)?;
        let first = records.first().ok_or_else(|| Error::Parse("empty CSV".into()))?;
        let labelled = first.get(0).is_some_and(|c| c.trim().parse::<f64>().is_err());
        let parse = |s: &str, i: usize| {
            s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("row {i}: {s:?} is not a number")))
        };
        if labelled {
            let col_labels: Vec<String> = first.iter().skip(1).map(str::to_string).collect();
            let mut row_labels = Vec::new();
            let mut payoff = Vec::new();
            for (i, rec) in records.iter().enumerate().skip(1) {
                if rec.len() != col_labels.len() + 1 {
                    return Err(Error::Parse(format!("row {i} has {} fields", rec.len())));
                }
                row_labels.push(rec[0].to_string());
                for s in rec.iter().skip(1) {
                    payoff.push(parse(s, i)?);
                }
            }
            Self::with_labels(payoff, row_labels, col_labels)
        } else {
            let cols = first.len();
            let mut payoff = Vec::new();
            for (i, rec) in records.iter().enumerate() {
                if rec.len() != cols {
                    return Err(Error::Parse(format!("row {i} has {} fields", rec.len())));
                }
                for s in rec.iter() {
                    payoff.push(parse(s, i)?);
                }
            }
            Self::new(records.len(), cols, payoff)
        }
    }

    pub fn write_binary<W: Write>(&self, mut w: W) -> Result<()> {
        w.write_all(&(self.rows() as u64).to_le_bytes())?;
        w.write_all(&(self.cols() as u64).to_le_bytes())?;
        for v in self.payoff() {
            w.write_all(&v.to_le_bytes())?;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut r: R) -> Result<Self> {
        let mut word = [0u8; 8];
        r.read_exact(&mut word)?;
        let rows = u64::from_le_bytes(word) as usize;
        r.read_exact(&mut word)?;
        let cols = u64::from_le_bytes(word) as usize;
        let n = rows.checked_mul(cols).ok_or_else(|| Error::Parse("matrix shape overflows".into()))?;
        let mut payoff = Vec::with_capacity(n.min(1 << 24));
        for _ in 0..n {
            r.read_exact(&mut word)?;
            payoff.push(f64::from_le_bytes(word));
        }
        Self::new(rows, cols, payoff)
    }
}

fn csv_err(e: csv::Error) -> Error {
    Error::Parse(e.to_string())
}
