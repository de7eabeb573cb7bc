//! Two-qubit Werner states viewed as SU(4), `M = 1` states: closed-form
//! distributions, negativity scans over θ-space and the critical γ.

use crate::coherent::PhasePoint;
use crate::distributions::DensityMatrix;
use crate::error::{Error, Result};
use crate::kernels::{omega_m1, SOrder};
use crate::linalg::CMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WernerParams {
    gamma: f64,
}

impl WernerParams {
    pub fn new(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::Domain(format!("gamma must lie in [0, 1], got {gamma}")));
        }
        Ok(Self { gamma })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

pub fn werner_state(p: WernerParams) -> DensityMatrix {
    let g = p.gamma;
    let mut m = CMatrix::zeros(4, 4);
    let c = |x: f64| Complex64::new(x / 4.0, 0.0);
    m[(0, 0)] = c(1.0 - g);
    m[(1, 1)] = c(1.0 + g);
    m[(2, 2)] = c(1.0 + g);
    m[(3, 3)] = c(1.0 - g);
    m[(1, 2)] = c(-2.0 * g);
    m[(2, 1)] = c(-2.0 * g);
    DensityMatrix::unchecked(m)
}

/// The γ-coefficient `X` in `f = (6 - γ X Ω(s)) / 24`.
fn werner_x(t1: f64, t2: f64, t3: f64, cos_dphi: f64) -> f64 {
    let inner = 1.0
        - 6.0 * (2.0 * t1).cos() * t2.cos().powi(2)
        - 3.0 * (2.0 * t2).cos()
        - 12.0 * cos_dphi * t1.sin() * (2.0 * t2).sin();
    2.0 + 4.0 * (2.0 * t3).cos() - inner * t3.sin().powi(2)
}

fn closed_form(gamma: f64, omega: f64, t1: f64, t2: f64, t3: f64, cos_dphi: f64) -> f64 {
    (6.0 - gamma * werner_x(t1, t2, t3, cos_dphi) * omega) / 24.0
}

/// `f^s` of the Werner state in closed form. Only θ₁..θ₃, φ₁ and φ₂ enter.
pub fn werner_closed_form(p: WernerParams, s: SOrder, point: &PhasePoint) -> Result<f64> {
    if point.n() != 4 {
        return Err(Error::DimensionMismatch {
            context: "Werner phase point N",
            expected: 4,
            actual: point.n(),
        });
    }
    let t = point.thetas();
    let ph = point.phis();
    Ok(closed_form(
        p.gamma,
        omega_m1(s, 4),
        t[0],
        t[1],
        t[2],
        (ph[0] - ph[1]).cos(),
    ))
}

/// The two φ cross sections: `φ₁ = φ₂ = 0` and `φ₁ = π, φ₂ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PhiCase {
    Aligned,
    Anti,
}

impl PhiCase {
    pub fn cos_dphi(self) -> f64 {
        match self {
            PhiCase::Aligned => 1.0,
            PhiCase::Anti => -1.0,
        }
    }

    /// `(φ₁, φ₂)`.
    pub fn phis(self) -> (f64, f64) {
        match self {
            PhiCase::Aligned => (0.0, 0.0),
            PhiCase::Anti => (PI, 0.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PhiCase::Aligned => "aligned",
            PhiCase::Anti => "anti",
        }
    }
}

impl fmt::Display for PhiCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PhiCase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned" => Ok(PhiCase::Aligned),
            "anti" => Ok(PhiCase::Anti),
            other => Err(Error::Domain(format!(
                "phi case must be aligned or anti, got {other:?}"
            ))),
        }
    }
}

/// Section of the closed form at a φ case.
pub fn werner_section(gamma: f64, s: SOrder, case: PhiCase, t1: f64, t2: f64, t3: f64) -> f64 {
    closed_form(gamma, omega_m1(s, 4), t1, t2, t3, case.cos_dphi())
}

/// Values this far below zero count as negative. Exact zeros of the closed
/// form otherwise flip sign on rounding.
pub const NEGATIVE_TOL: f64 = 1e-12;

pub const MIN_SCAN_RESOLUTION: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanCell {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub value: f64,
}

impl ScanCell {
    pub fn is_negative(&self) -> bool {
        self.value < -NEGATIVE_TOL
    }
}

#[derive(Debug, Clone)]
pub struct NegativityScan {
    pub s: SOrder,
    pub gamma: f64,
    pub phi_case: PhiCase,
    pub resolution: usize,
    /// Every lattice cell, θ₃ slowest and θ₁ fastest.
    pub cells: Vec<ScanCell>,
    pub min_value: f64,
}

impl NegativityScan {
    pub fn negative_cells(&self) -> impl Iterator<Item = &ScanCell> {
        self.cells.iter().filter(|c| c.is_negative())
    }

    pub fn negative_count(&self) -> usize {
        self.negative_cells().count()
    }

    pub fn argmin(&self) -> Option<&ScanCell> {
        self.cells
            .iter()
            .min_by(|a, b| a.value.total_cmp(&b.value))
    }
}

/// `resolution` endpoint-inclusive nodes on `[0, π/2]`.
fn lattice(resolution: usize) -> Vec<f64> {
    let step = FRAC_PI_2 / (resolution - 1) as f64;
    (0..resolution)
        .map(|i| if i + 1 == resolution { FRAC_PI_2 } else { i as f64 * step })
        .collect()
}

pub fn negativity_scan(
    p: WernerParams,
    s: SOrder,
    case: PhiCase,
    resolution: usize,
) -> Result<NegativityScan> {
    if resolution < MIN_SCAN_RESOLUTION {
        return Err(Error::Domain(format!(
            "scan resolution must be at least {MIN_SCAN_RESOLUTION}, got {resolution}"
        )));
    }
    let nodes = lattice(resolution);
    let cells: Vec<ScanCell> = nodes
        .par_iter()
        .flat_map_iter(|&t3| {
            let nodes = &nodes;
            nodes.iter().flat_map(move |&t2| {
                nodes.iter().map(move |&t1| ScanCell {
                    theta1: t1,
                    theta2: t2,
                    theta3: t3,
                    value: werner_section(p.gamma, s, case, t1, t2, t3),
                })
            })
        })
        .collect();
    let min_value = cells
        .iter()
        .map(|c| c.value)
        .fold(f64::INFINITY, f64::min);
    Ok(NegativityScan {
        s,
        gamma: p.gamma,
        phi_case: case,
        resolution,
        cells,
        min_value,
    })
}

/// Lattice resolution used to seed the minimization in [`threshold_bisect`].
pub const THRESHOLD_SEED_RESOLUTION: usize = 64;

/// Nelder–Mead on a box, with vertices clamped into the box.
pub fn nelder_mead_box<F>(
    f: F,
    start: &[f64],
    step: f64,
    lo: f64,
    hi: f64,
    max_iter: usize,
    ftol: f64,
) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let dim = start.len();
    let clamp = |x: &mut Vec<f64>| x.iter_mut().for_each(|v| *v = v.clamp(lo, hi));
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(dim + 1);
    let mut x0 = start.to_vec();
    clamp(&mut x0);
    simplex.push((x0.clone(), f(&x0)));
    for i in 0..dim {
        let mut x = x0.clone();
        x[i] += if x[i] + step <= hi { step } else { -step };
        clamp(&mut x);
        let fx = f(&x);
        simplex.push((x, fx));
    }
    let towards = |a: &[f64], b: &[f64], t: f64| -> Vec<f64> {
        a.iter().zip(b).map(|(ai, bi)| ai + t * (bi - ai)).collect()
    };
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if (simplex[dim].1 - simplex[0].1).abs() <= ftol {
            break;
        }
        let mut centroid = vec![0.0; dim];
        for (x, _) in &simplex[..dim] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / dim as f64;
            }
        }
        let worst = simplex[dim].clone();
        let mut reflected = towards(&centroid, &worst.0, -1.0);
        clamp(&mut reflected);
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let mut expanded = towards(&centroid, &worst.0, -2.0);
            clamp(&mut expanded);
            let fe = f(&expanded);
            simplex[dim] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
        } else if fr < simplex[dim - 1].1 {
            simplex[dim] = (reflected, fr);
        } else {
            let mut contracted = towards(&centroid, &worst.0, 0.5);
            clamp(&mut contracted);
            let fc = f(&contracted);
            if fc < worst.1 {
                simplex[dim] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for (x, fx) in simplex.iter_mut().skip(1) {
                    *x = towards(&best, x, 0.5);
                    *fx = f(x);
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex.swap_remove(0)
}

/// Minimum of the section over `[0, π/2]³`: lattice seed, then Nelder–Mead.
pub fn section_minimum(gamma: f64, s: SOrder, case: PhiCase) -> (ScanCell, f64) {
    let scan = negativity_scan(
        WernerParams { gamma },
        s,
        case,
        THRESHOLD_SEED_RESOLUTION,
    )
    .expect("seed resolution is valid");
    let seed = *scan.argmin().expect("non-empty lattice");
    let step = FRAC_PI_2 / (THRESHOLD_SEED_RESOLUTION - 1) as f64;
    let (x, fx) = nelder_mead_box(
        |x| werner_section(gamma, s, case, x[0], x[1], x[2]),
        &[seed.theta1, seed.theta2, seed.theta3],
        step,
        0.0,
        FRAC_PI_2,
        2000,
        1e-15,
    );
    let refined = if fx < seed.value {
        ScanCell {
            theta1: x[0],
            theta2: x[1],
            theta3: x[2],
            value: fx,
        }
    } else {
        seed
    };
    (seed, refined.value.min(seed.value))
}

/// Smallest γ at which the section goes negative, bisected to width `tol`.
/// `None` when the section stays non-negative up to γ = 1.
pub fn threshold_bisect(s: SOrder, case: PhiCase, tol: f64) -> Result<Option<f64>> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::Domain(format!("tol must be positive, got {tol}")));
    }
    let negative = |g: f64| section_minimum(g, s, case).1 < -NEGATIVE_TOL;
    if !negative(1.0) {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if negative(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}
