//! File formats. Matrices are row-major lists of `[re, im]` pairs; floats are
//! written in shortest round-trip form so reading back is exact.

use crate::algebra::{GeneratorKind, GeneratorSet};
use crate::coherent::{CoherentState, PhasePoint};
use crate::distributions::DensityMatrix;
use crate::error::{Error, Result};
use crate::kernels::{Kernel, SOrder};
use crate::linalg::{CMatrix, CVector};
use crate::quadrature::QuadratureGrid;
use crate::werner::NegativityScan;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::io::{Read, Write};

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

pub fn matrix_to_json(m: &CMatrix) -> MatrixJson {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(rows: &MatrixJson, context: &str) -> Result<CMatrix> {
    let d = rows.len();
    for (i, row) in rows.iter().enumerate() {
        if row.len() != d {
            return Err(Error::Format(format!(
                "{context}: row {i} has {} entries, expected {d}",
                row.len()
            )));
        }
    }
    Ok(CMatrix::from_fn(d, d, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

pub fn vector_to_json(v: &CVector) -> Vec<[f64; 2]> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

#[derive(Debug, Serialize)]
pub struct GeneratorEntry {
    pub k: usize,
    #[serde(flatten)]
    pub kind: GeneratorKind,
    pub matrix: MatrixJson,
}

#[derive(Debug, Serialize)]
pub struct GeneratorsDoc {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub generators: Vec<GeneratorEntry>,
}

impl GeneratorsDoc {
    pub fn new(gens: &GeneratorSet) -> Self {
        let generators = gens
            .kinds()
            .iter()
            .zip(gens.matrices())
            .map(|(&kind, m)| GeneratorEntry {
                k: kind.index(),
                kind,
                matrix: matrix_to_json(m),
            })
            .collect();
        Self {
            n: gens.n(),
            m: gens.m(),
            dim: gens.dim(),
            generators,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
pub struct DensityDoc {
    pub dim: usize,
    pub matrix: MatrixJson,
}

impl DensityDoc {
    pub fn new(m: &CMatrix) -> Self {
        Self {
            dim: m.nrows(),
            matrix: matrix_to_json(m),
        }
    }

    /// Checks the declared dimension and the density-matrix conditions.
    pub fn into_density(self) -> Result<DensityMatrix> {
        if self.matrix.len() != self.dim {
            return Err(Error::Format(format!(
                "density file: \"dim\" is {} but \"matrix\" has {} rows",
                self.dim,
                self.matrix.len()
            )));
        }
        let m = matrix_from_json(&self.matrix, "density file \"matrix\"")?;
        DensityMatrix::new(m)
            .map_err(|e| Error::InvalidState(format!("density file: {e}")))
    }
}

pub fn read_density<R: Read>(reader: R) -> Result<DensityMatrix> {
    let doc: DensityDoc = serde_json::from_reader(reader)?;
    doc.into_density()
}

pub fn write_density<W: Write>(writer: W, m: &CMatrix) -> Result<()> {
    write_json(writer, &DensityDoc::new(m))
}

#[derive(Debug, Serialize)]
pub struct StateDoc {
    pub n: usize,
    pub m: usize,
    pub dim: usize,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub amplitudes: Vec<[f64; 2]>,
}

impl StateDoc {
    pub fn new(cs: &CoherentState) -> Self {
        Self {
            n: cs.n(),
            m: cs.m(),
            dim: cs.amplitudes().len(),
            theta: cs.point().thetas().to_vec(),
            phi: cs.point().phis().to_vec(),
            amplitudes: vector_to_json(cs.amplitudes()),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct KernelDoc {
    pub n: usize,
    pub m: usize,
    pub s: i8,
    pub dim: usize,
    pub theta: Vec<f64>,
    pub phi: Vec<f64>,
    pub matrix: MatrixJson,
}

impl KernelDoc {
    pub fn new(k: &Kernel) -> Self {
        Self {
            n: k.n(),
            m: k.m(),
            s: k.s().value(),
            dim: k.dim(),
            theta: k.point().thetas().to_vec(),
            phi: k.point().phis().to_vec(),
            matrix: matrix_to_json(k.matrix()),
        }
    }
}

pub fn write_json<W: Write, T: Serialize>(mut writer: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut writer, value)?;
    writeln!(writer)?;
    Ok(())
}

/// One distribution value per grid point, in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleRow {
    pub index: usize,
    pub point: PhasePoint,
    pub s: SOrder,
    pub value: f64,
}

fn sample_header(n: usize) -> Vec<String> {
    let mut h = vec!["index".to_string()];
    h.extend((1..n).map(|i| format!("theta{i}")));
    h.extend((1..n).map(|i| format!("phi{i}")));
    h.push("s".into());
    h.push("value".into());
    h
}

pub fn write_samples<W: Write>(writer: W, n: usize, rows: &[SampleRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(sample_header(n)).map_err(csv_error)?;
    for r in rows {
        let mut rec = vec![r.index.to_string()];
        rec.extend(r.point.thetas().iter().map(f64::to_string));
        rec.extend(r.point.phis().iter().map(f64::to_string));
        rec.push(r.s.to_string());
        rec.push(r.value.to_string());
        w.write_record(&rec).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> Error {
    Error::Format(format!("csv: {e}"))
}

/// Reads a samples file and checks that it covers `grid` point for point.
pub fn read_samples<R: Read>(reader: R, grid: &QuadratureGrid, s: SOrder) -> Result<Vec<f64>> {
    let n = grid.n();
    let mut r = csv::Reader::from_reader(reader);
    let header: Vec<String> = r.headers().map_err(csv_error)?.iter().map(String::from).collect();
    if header != sample_header(n) {
        return Err(Error::Format(format!(
            "samples file header {header:?} does not match {:?}",
            sample_header(n)
        )));
    }
    let mut values = Vec::with_capacity(grid.len());
    for (row, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_error)?;
        let line = row + 2;
        let field = |j: usize| -> Result<f64> {
            rec[j].trim().parse::<f64>().map_err(|_| {
                Error::Format(format!(
                    "samples file line {line}, field {:?}: cannot parse {:?}",
                    header[j], &rec[j]
                ))
            })
        };
        let idx = field(0)? as usize;
        if idx != row {
            return Err(Error::Format(format!(
                "samples file line {line}: index {idx}, expected {row}"
            )));
        }
        if row >= grid.len() {
            return Err(Error::Format(format!(
                "samples file has more rows than the {}-point grid",
                grid.len()
            )));
        }
        let (pt, _) = grid.point(row);
        let expected = pt.thetas().iter().chain(pt.phis());
        for (j, e) in (1..2 * n - 1).zip(expected) {
            if (field(j)? - e).abs() > 1e-12 {
                return Err(Error::Format(format!(
                    "samples file line {line}, field {:?}: grid point mismatch",
                    header[j]
                )));
            }
        }
        let row_s: SOrder = rec[2 * n - 1].parse()?;
        if row_s != s {
            return Err(Error::Format(format!(
                "samples file line {line}: s = {row_s}, expected {s}"
            )));
        }
        values.push(field(2 * n)?);
    }
    if values.len() != grid.len() {
        return Err(Error::Format(format!(
            "samples file has {} rows, grid has {} points",
            values.len(),
            grid.len()
        )));
    }
    Ok(values)
}

pub fn write_scan<W: Write>(writer: W, scan: &NegativityScan) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["theta1", "theta2", "theta3", "value", "negative"])
        .map_err(csv_error)?;
    for c in &scan.cells {
        w.write_record([
            c.theta1.to_string(),
            c.theta2.to_string(),
            c.theta3.to_string(),
            c.value.to_string(),
            u8::from(c.is_negative()).to_string(),
        ])
        .map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}
