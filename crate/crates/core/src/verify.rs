//! Integral identities checked by quadrature: resolution of unity, vanishing
//! first moments, `M = 1` second moments, kernel and distribution
//! normalization, and density recovery for every `(+s, -s)` pairing.

use crate::coherent::normalization_constant;
use crate::distributions::DensityMatrix;
use crate::error::Result;
use crate::kernels::{KernelBuilder, SOrder};
use crate::linalg::{frobenius_distance, hermitize, identity, trace_product, CMatrix};
use crate::quadrature::QuadratureGrid;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;
use std::ops::Add;

pub const IDENTITY_TOL: f64 = 1e-10;
pub const RECOVERY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            residual,
            tolerance,
            // NaN residuals fail
            passed: residual <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub n: usize,
    pub m: usize,
    pub theta_points: usize,
    pub phi_points: usize,
    pub grid_points: usize,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl Report {
    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Fixed full-rank mixed state used as the distribution and recovery probe.
pub fn probe_state(dim: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(dim, dim, |j, k| {
        let (j, k) = (j as f64, k as f64);
        Complex64::new((1.0 + j + 2.0 * k).sin(), (3.0 * j - k + 0.5).cos())
    });
    let aa = &a * a.adjoint() + identity(dim);
    let tr = aa.trace().re;
    DensityMatrix::unchecked(hermitize(&aa.unscale(tr)))
}

/// Per-point contributions, summed with the grid's deterministic reducer.
#[derive(Debug, Clone)]
struct Acc {
    unity: CMatrix,
    first: Vec<f64>,
    second: Option<DMatrix<f64>>,
    kernels: [CMatrix; 3],
    dist: [f64; 3],
    recovered: [CMatrix; 3],
}

impl Add<&Acc> for &Acc {
    type Output = Acc;

    fn add(self, o: &Acc) -> Acc {
        Acc {
            unity: &self.unity + &o.unity,
            first: self.first.iter().zip(&o.first).map(|(a, b)| a + b).collect(),
            second: match (&self.second, &o.second) {
                (Some(a), Some(b)) => Some(a + b),
                _ => None,
            },
            kernels: std::array::from_fn(|i| &self.kernels[i] + &o.kernels[i]),
            dist: std::array::from_fn(|i| self.dist[i] + o.dist[i]),
            recovered: std::array::from_fn(|i| &self.recovered[i] + &o.recovered[i]),
        }
    }
}

fn index_of(s: SOrder) -> usize {
    SOrder::ALL.iter().position(|&t| t == s).expect("listed")
}

pub fn run(n: usize, m: usize, grid: &QuadratureGrid) -> Result<Report> {
    let builder = KernelBuilder::new(n, m)?;
    let d = builder.dim();
    let rho = probe_state(d);
    let len = builder.coherent().generators().len();

    let acc = grid
        .try_reduce(|_, pt, w| {
            let mom = builder.moments(pt)?;
            let kernels = SOrder::ALL.map(|s| builder.kernel_from_moments(s, &mom).into_matrix());
            let f = std::array::from_fn::<f64, 3, _>(|i| {
                trace_product(rho.matrix(), &kernels[i]).re
            });
            let wc = Complex64::new(w, 0.0);
            let second = (m == 1).then(|| {
                DMatrix::from_fn(len, len, |a, b| w * mom.rep[a] * mom.rep[b])
            });
            Ok(Acc {
                unity: mom.state.projector() * wc,
                first: mom.rep.iter().map(|x| w * x).collect(),
                second,
                recovered: std::array::from_fn(|i| {
                    let dual = index_of(SOrder::ALL[i].dual());
                    &kernels[dual] * Complex64::new(w * f[i], 0.0)
                }),
                dist: f.map(|x| w * x),
                kernels: kernels.map(|k| k * wc),
            })
        })?
        .expect("grid is never empty");

    let norm = normalization_constant(n, m);
    let id = identity(d);
    let mut checks = Vec::new();
    let max_entry = |a: &CMatrix| a.iter().map(|z| z.norm()).fold(0.0, f64::max);

    checks.push(Check::new(
        "resolution_of_unity",
        max_entry(&(acc.unity.scale(norm) - &id)),
        IDENTITY_TOL,
    ));
    checks.push(Check::new(
        "first_moments",
        acc.first.iter().map(|x| (norm * x).abs()).fold(0.0, f64::max),
        IDENTITY_TOL,
    ));
    if let Some(second) = &acc.second {
        let target = 2.0 / (n as f64 + 1.0);
        let r = DMatrix::from_fn(len, len, |a, b| {
            norm * second[(a, b)] - if a == b { target } else { 0.0 }
        });
        checks.push(Check::new("second_moments", r.amax(), IDENTITY_TOL));
    }
    for (i, s) in SOrder::ALL.into_iter().enumerate() {
        checks.push(Check::new(
            format!("kernel_normalization[s={s}]"),
            max_entry(&(acc.kernels[i].scale(norm) - &id)),
            IDENTITY_TOL,
        ));
    }
    for (i, s) in SOrder::ALL.into_iter().enumerate() {
        checks.push(Check::new(
            format!("distribution_normalization[s={s}]"),
            (norm * acc.dist[i] - 1.0).abs(),
            IDENTITY_TOL,
        ));
    }
    for (i, s) in SOrder::ALL.into_iter().enumerate() {
        let rec = hermitize(&acc.recovered[i].scale(norm));
        checks.push(Check::new(
            format!("recovery[s={s}]"),
            frobenius_distance(&rec, rho.matrix()),
            RECOVERY_TOL,
        ));
    }
    let passed = checks.iter().all(|c| c.passed);
    Ok(Report {
        n,
        m,
        theta_points: grid.theta_points(),
        phi_points: grid.phi_points(),
        grid_points: grid.len(),
        checks,
        passed,
    })
}
