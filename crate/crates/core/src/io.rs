//! CSV tables with `#`-prefixed metadata, lossless for `f64`.
//!
//! ```text
//! # kind=transfer_mag
//! # units=dimensionless
//! k,value
//! 2.0000000000000000e-2,1.1495945584478164e0
//! ```

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::{AreaFunction, ObservableKind, Potential, SpectralData, SpectralValues};
use crate::numerics::RealGrid;

/// Decimal rendering with 17 significant digits.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

/// A numeric table with string metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self { meta: BTreeMap::new(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    pub fn with_meta(mut self, key: &str, value: impl ToString) -> Self {
        self.meta.insert(key.into(), value.to_string());
        self
    }

    /// Builds rows from equally long columns.
    pub fn from_columns(columns: &[&str], data: &[&[f64]]) -> Result<Self> {
        if columns.len() != data.len() {
            return Err(Error::InvalidInput("column names and data differ in count".into()));
        }
        let n = data.first().map_or(0, |c| c.len());
        if data.iter().any(|c| c.len() != n) {
            return Err(Error::InvalidInput("columns differ in length".into()));
        }
        let rows = (0..n).map(|i| data.iter().map(|c| c[i]).collect()).collect();
        Ok(Self { rows, ..Self::new(columns) })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }

    fn require(&self, name: &str) -> Result<Vec<f64>> {
        self.column(name).ok_or_else(|| Error::Parse(format!("missing column '{name}'")))
    }

    pub fn meta_f64(&self, key: &str) -> Result<Option<f64>> {
        self.meta
            .get(key)
            .map(|v| v.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number for {key}: '{v}'"))))
            .transpose()
    }

    pub fn write_to(&self, mut w: impl Write) -> Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}={v}")?;
        }
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&v| format_value(v)).collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_from(r: impl BufRead) -> Result<Self> {
        let mut meta = BTreeMap::new();
        let mut columns: Option<Vec<String>> = None;
        let mut rows = Vec::new();
        for (lineno, line) in r.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if columns.is_some() {
                    return Err(Error::Parse(format!("line {}: metadata after the column header", lineno + 1)));
                }
                let (k, v) = rest
                    .trim()
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("line {}: expected '# key=value'", lineno + 1)))?;
                meta.insert(k.trim().to_string(), v.trim().to_string());
                continue;
            }
            match &columns {
                None => {
                    let cols: Vec<String> = line.split(',').map(|c| c.trim().to_string()).collect();
                    if cols.iter().any(|c| c.is_empty() || c.parse::<f64>().is_ok()) {
                        return Err(Error::Parse(format!("line {}: invalid column header '{line}'", lineno + 1)));
                    }
                    columns = Some(cols);
                }
                Some(cols) => {
                    let vals = line
                        .split(',')
                        .map(|c| c.trim().parse::<f64>())
                        .collect::<std::result::Result<Vec<f64>, _>>()
                        .map_err(|_| Error::Parse(format!("line {}: invalid number in '{line}'", lineno + 1)))?;
                    if vals.len() != cols.len() {
                        return Err(Error::Parse(format!(
                            "line {}: expected {} fields, found {}",
                            lineno + 1,
                            cols.len(),
                            vals.len()
                        )));
                    }
                    rows.push(vals);
                }
            }
        }
        let columns = columns.ok_or_else(|| Error::Parse("missing column header".into()))?;
        Ok(Self { meta, columns, rows })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        fs::write(path, buf)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::read_from(BufReader::new(file))
    }
}

/// Spectral samples as a table with `kind`, `units` and (microphone only) `r_cm`.
pub fn spectral_table(data: &SpectralData) -> Table {
    let k = data.kgrid.points();
    let mut t = match &data.values {
        SpectralValues::Real(v) => Table::from_columns(&["k", "value"], &[k, v]),
        SpectralValues::Complex(z) => {
            let re: Vec<f64> = z.iter().map(|c| c.re).collect();
            let im: Vec<f64> = z.iter().map(|c| c.im).collect();
            Table::from_columns(&["k", "re", "im"], &[k, &re, &im])
        }
    }
    .expect("columns share the grid length")
    .with_meta("kind", data.kind.name())
    .with_meta("units", data.units());
    if let Some(r) = data.r {
        t = t.with_meta("r_cm", format_value(r));
    }
    t
}

pub fn spectral_from_table(t: &Table) -> Result<SpectralData> {
    let kind: ObservableKind = t
        .meta
        .get("kind")
        .ok_or_else(|| Error::Parse("missing '# kind=' header".into()))?
        .parse()?;
    if let Some(units) = t.meta.get("units") {
        if units != kind.units() {
            return Err(Error::Parse(format!("units '{units}' do not match {kind} ({})", kind.units())));
        }
    }
    let k = t.require("k")?;
    let values = if kind.is_complex() {
        let (re, im) = (t.require("re")?, t.require("im")?);
        SpectralValues::Complex(re.iter().zip(&im).map(|(a, b)| Complex64::new(*a, *b)).collect())
    } else {
        SpectralValues::Real(t.require("value")?)
    };
    SpectralData::new(kind, RealGrid::new(k)?, values, t.meta_f64("r_cm")?)
}

pub fn save_spectral(data: &SpectralData, path: impl AsRef<Path>) -> Result<()> {
    spectral_table(data).save(path)
}

pub fn load_spectral(path: impl AsRef<Path>) -> Result<SpectralData> {
    spectral_from_table(&Table::load(path)?)
}

/// `x,area` with the end slopes in the metadata.
pub fn area_table(area: &AreaFunction) -> Table {
    Table::from_columns(&["x", "area"], &[area.grid().points(), area.values()])
        .expect("area samples share the grid length")
        .with_meta("kind", "area")
        .with_meta("units", "cm^2")
        .with_meta("d_a0", format_value(area.d_a0()))
        .with_meta("d_al", format_value(area.d_al()))
}

/// Missing slope metadata falls back to one-sided differences.
pub fn area_from_table(t: &Table) -> Result<AreaFunction> {
    if let Some(kind) = t.meta.get("kind") {
        if kind != "area" {
            return Err(Error::Parse(format!("expected an area table, found kind '{kind}'")));
        }
    }
    let x = t.require("x")?;
    let a = t.require("area")?;
    AreaFunction::new(RealGrid::new(x)?, a, t.meta_f64("d_a0")?, t.meta_f64("d_al")?)
}

pub fn potential_table(q: &Potential, cot_alpha: Option<f64>) -> Table {
    let mut t = Table::from_columns(&["x", "q"], &[q.grid.points(), &q.values])
        .expect("potential samples share the grid length")
        .with_meta("kind", "potential")
        .with_meta("units", "1/cm^2");
    if let Some(c) = cot_alpha {
        t = t.with_meta("cot_alpha", format_value(c));
    }
    t
}

pub fn potential_from_table(t: &Table) -> Result<Potential> {
    Potential::new(RealGrid::new(t.require("x")?)?, t.require("q")?)
}
