//! CSV tables and torque–deflection curve files.
//!
//! Curve files have the header `angle_deg,torque_Nm`, one sample per row,
//! UTF-8 with LF line endings. Extra columns are allowed after the first two
//! named ones, so annotated outputs parse back as curves.

use std::io::{Read, Write};
use std::path::Path;

use crate::units::{deg_to_rad, rad_to_deg};
use crate::{Error, Result, TorqueDeflectionCurve};

pub const ANGLE_COLUMN: &str = "angle_deg";
pub const TORQUE_COLUMN: &str = "torque_Nm";

/// A purely numeric CSV table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.headers.iter().position(|h| h == name)
    }

    pub fn write<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(out);
        let wrap = |e: csv::Error| Error::Parse {
            context: "csv write".into(),
            message: e.to_string(),
        };
        w.write_record(&self.headers).map_err(wrap)?;
        for row in &self.rows {
            w.write_record(row.iter().map(|v| v.to_string()))
                .map_err(wrap)?;
        }
        w.flush().map_err(|e| Error::Parse {
            context: "csv write".into(),
            message: e.to_string(),
        })
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    pub fn read<R: Read>(input: R, context: &str) -> Result<Self> {
        let perr = |message: String| Error::Parse {
            context: context.to_string(),
            message,
        };
        let mut r = csv::ReaderBuilder::new()
            .trim(csv::Trim::All)
            .from_reader(input);
        let headers: Vec<String> = r
            .headers()
            .map_err(|e| perr(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let mut table = Table {
            headers,
            rows: Vec::new(),
        };
        for (i, rec) in r.records().enumerate() {
            let rec = rec.map_err(|e| perr(e.to_string()))?;
            let row = rec
                .iter()
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|_| perr(format!("row {}: '{f}' is not a number", i + 1)))
                })
                .collect::<Result<Vec<_>>>()?;
            table.rows.push(row);
        }
        Ok(table)
    }

    pub fn read_path(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let f = std::fs::File::open(path).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Table::read(f, &path.display().to_string())
    }
}

pub fn curve_to_table(curve: &TorqueDeflectionCurve) -> Table {
    let mut t = Table::new([ANGLE_COLUMN, TORQUE_COLUMN]);
    for &(a, tq) in curve.samples() {
        t.push(vec![rad_to_deg(a), tq]);
    }
    t
}

pub fn table_to_curve(table: &Table, context: &str) -> Result<TorqueDeflectionCurve> {
    if table.headers.len() < 2
        || table.headers[0] != ANGLE_COLUMN
        || table.headers[1] != TORQUE_COLUMN
    {
        return Err(Error::Parse {
            context: context.to_string(),
            message: format!("expected header starting '{ANGLE_COLUMN},{TORQUE_COLUMN}'"),
        });
    }
    TorqueDeflectionCurve::new(
        table
            .rows
            .iter()
            .map(|r| (deg_to_rad(r[0]), r[1]))
            .collect(),
    )
}

pub fn read_curve(path: impl AsRef<Path>) -> Result<TorqueDeflectionCurve> {
    let path = path.as_ref();
    let table = Table::read_path(path)?;
    table_to_curve(&table, &path.display().to_string())
}

pub fn parse_curve(text: &str) -> Result<TorqueDeflectionCurve> {
    table_to_curve(&Table::read(text.as_bytes(), "curve")?, "curve")
}

pub fn curve_to_csv(curve: &TorqueDeflectionCurve) -> String {
    curve_to_table(curve).to_csv_string()
}
