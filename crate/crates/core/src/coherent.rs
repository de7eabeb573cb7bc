//! Euler-angle parametrized SU(N) unitaries and the coherent states they generate.
//!
//! The full group element is the ordered product
//!
//! ```text
//! U = ∏_{z = N..2} ∏_{y = 2..z} A(y, j(z)) · B
//! A(y, j) = exp(i Λ(3) φ_{y-1+j}) · exp(i Λ₂(1, y) θ_{y-1+j})
//! B       = ∏_{c = 1..N-1} exp(i Λ((c+1)²-1) φ_{N(N-1)/2 + c})
//! ```
//!
//! with `j(N) = 0` and `j(z) = Σ_{i=1}^{N-z} (N - i)` otherwise. The coherent
//! state is the last column of `U`, i.e. `U` applied to the lowest-weight state.

use crate::algebra::{build_generators, check_rep, GeneratorSet};
use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector, HermitianExp};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

/// Reduced coordinates `(θ₁..θ_{N-1}, φ₁..φ_{N-1})` on CP^{N-1}.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePoint {
    thetas: Vec<f64>,
    phis: Vec<f64>,
}

impl PhasePoint {
    /// Validates `0 ≤ θ ≤ π/2` and `0 ≤ φ ≤ 2π`. Out-of-range angles are
    /// rejected rather than wrapped.
    pub fn new(thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.is_empty() || thetas.len() != phis.len() {
            return Err(Error::Domain(format!(
                "a phase point needs N-1 >= 1 thetas and as many phis (got {} and {})",
                thetas.len(),
                phis.len()
            )));
        }
        for (i, &t) in thetas.iter().enumerate() {
            if !(0.0..=FRAC_PI_2).contains(&t) {
                return Err(Error::AngleOutOfRange {
                    name: format!("theta{}", i + 1),
                    value: t,
                    lo: 0.0,
                    hi: FRAC_PI_2,
                });
            }
        }
        for (i, &p) in phis.iter().enumerate() {
            if !(0.0..=TAU).contains(&p) {
                return Err(Error::AngleOutOfRange {
                    name: format!("phi{}", i + 1),
                    value: p,
                    lo: 0.0,
                    hi: TAU,
                });
            }
        }
        Ok(Self { thetas, phis })
    }

    /// The origin of the chart, where the coherent state is the lowest-weight state.
    pub fn origin(n: usize) -> Self {
        Self {
            thetas: vec![0.0; n - 1],
            phis: vec![0.0; n - 1],
        }
    }

    pub fn n(&self) -> usize {
        self.thetas.len() + 1
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub(crate) fn from_grid(thetas: Vec<f64>, phis: Vec<f64>) -> Self {
        Self { thetas, phis }
    }
}

/// Complete Euler angle vector: `N(N-1)/2` θ's and `(N² + N - 2)/2` φ's.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerAngles {
    thetas: Vec<f64>,
    phis: Vec<f64>,
}

impl EulerAngles {
    pub fn theta_count(n: usize) -> usize {
        n * (n - 1) / 2
    }

    pub fn phi_count(n: usize) -> usize {
        (n * n + n - 2) / 2
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            thetas: vec![0.0; Self::theta_count(n)],
            phis: vec![0.0; Self::phi_count(n)],
        }
    }

    pub fn new(n: usize, thetas: Vec<f64>, phis: Vec<f64>) -> Result<Self> {
        if thetas.len() != Self::theta_count(n) || phis.len() != Self::phi_count(n) {
            return Err(Error::Domain(format!(
                "SU({n}) needs {} thetas and {} phis (got {} and {})",
                Self::theta_count(n),
                Self::phi_count(n),
                thetas.len(),
                phis.len()
            )));
        }
        Ok(Self { thetas, phis })
    }

    /// Canonical embedding of a reduced phase point: `θ_i → θ_i` and
    /// `φ_i → φ_i` for `i = 1..N-1` (the angles of the outermost `z = N`
    /// block); every other angle, including the global-phase slot
    /// `φ_{(N²+N-2)/2}`, is zero.
    pub fn from_point(point: &PhasePoint) -> Self {
        let mut angles = Self::zeros(point.n());
        angles.thetas[..point.thetas.len()].copy_from_slice(&point.thetas);
        angles.phis[..point.phis.len()].copy_from_slice(&point.phis);
        angles
    }

    pub fn thetas(&self) -> &[f64] {
        &self.thetas
    }

    pub fn phis(&self) -> &[f64] {
        &self.phis
    }

    pub fn set_global_phase(&mut self, phi: f64) {
        if let Some(last) = self.phis.last_mut() {
            *last = phi;
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Factor {
    /// `exp(i Λ_diag φ_slot)`; index into the diagonal table.
    Phase { cartan: usize, slot: usize },
    /// `exp(i Λ₂(1, y) θ_slot)`.
    Rotation { y: usize, slot: usize },
}

fn offset(n: usize, z: usize) -> usize {
    if z == n {
        0
    } else {
        (1..=n - z).map(|i| n - i).sum()
    }
}

fn factor_sequence(n: usize) -> Vec<Factor> {
    let mut seq = Vec::new();
    for z in (2..=n).rev() {
        let j = offset(n, z);
        for y in 2..=z {
            let slot = y - 2 + j;
            seq.push(Factor::Phase { cartan: 1, slot });
            seq.push(Factor::Rotation { y, slot });
        }
    }
    let base = n * (n - 1) / 2;
    for c in 1..n {
        seq.push(Factor::Phase {
            cartan: c,
            slot: base + c - 1,
        });
    }
    seq
}

/// Reusable builder for unitaries and coherent states of one `(N, M)`.
#[derive(Debug, Clone)]
pub struct CoherentStates {
    gens: GeneratorSet,
    /// Diagonal entries of `Λ((c+1)²-1)`, indexed by `c - 1`.
    cartans: Vec<Vec<f64>>,
    /// `exp(i t Λ₂(1, y))`, indexed by `y - 2`.
    rotations: Vec<HermitianExp>,
    sequence: Vec<Factor>,
}

impl CoherentStates {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        Ok(Self::from_generators(build_generators(n, m)?))
    }

    pub fn from_generators(gens: GeneratorSet) -> Self {
        let n = gens.n();
        let cartans = (1..n)
            .map(|c| gens.diagonal(c).diagonal().iter().map(|z| z.re).collect())
            .collect();
        let rotations = (2..=n)
            .map(|y| HermitianExp::new(gens.antisymmetric(1, y)))
            .collect();
        Self {
            cartans,
            rotations,
            sequence: factor_sequence(n),
            gens,
        }
    }

    pub fn n(&self) -> usize {
        self.gens.n()
    }

    pub fn m(&self) -> usize {
        self.gens.m()
    }

    pub fn dim(&self) -> usize {
        self.gens.dim()
    }

    pub fn generators(&self) -> &GeneratorSet {
        &self.gens
    }

    /// The full Euler-angle unitary. Factors whose angle is exactly zero are
    /// the identity and are skipped.
    pub fn unitary(&self, angles: &EulerAngles) -> Result<CMatrix> {
        let n = self.n();
        if angles.thetas.len() != EulerAngles::theta_count(n)
            || angles.phis.len() != EulerAngles::phi_count(n)
        {
            return Err(Error::Domain(format!(
                "Euler angle vector does not match SU({n})"
            )));
        }
        let d = self.dim();
        let mut u = CMatrix::identity(d, d);
        for factor in &self.sequence {
            match *factor {
                Factor::Phase { cartan, slot } => {
                    let phi = angles.phis[slot];
                    if phi == 0.0 {
                        continue;
                    }
                    for (col, &w) in self.cartans[cartan - 1].iter().enumerate() {
                        let phase = Complex64::from_polar(1.0, w * phi);
                        for x in u.column_mut(col).iter_mut() {
                            *x *= phase;
                        }
                    }
                }
                Factor::Rotation { y, slot } => {
                    let theta = angles.thetas[slot];
                    if theta == 0.0 {
                        continue;
                    }
                    u *= self.rotations[y - 2].eval(theta);
                }
            }
        }
        Ok(u)
    }

    /// Coherent state at `point`: the last column of the embedded unitary.
    pub fn state(&self, point: &PhasePoint) -> Result<CoherentState> {
        if point.n() != self.n() {
            return Err(Error::DimensionMismatch {
                context: "phase point angle count (N)",
                expected: self.n(),
                actual: point.n(),
            });
        }
        let u = self.unitary(&EulerAngles::from_point(point))?;
        let amplitudes = u.column(self.dim() - 1).into_owned();
        Ok(CoherentState {
            n: self.n(),
            m: self.m(),
            point: point.clone(),
            amplitudes,
        })
    }
}

#[derive(Debug, Clone)]
pub struct CoherentState {
    n: usize,
    m: usize,
    point: PhasePoint,
    amplitudes: CVector,
}

impl CoherentState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn point(&self) -> &PhasePoint {
        &self.point
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    /// `|cs⟩⟨cs|`.
    pub fn projector(&self) -> CMatrix {
        &self.amplitudes * self.amplitudes.adjoint()
    }
}

pub fn euler_unitary(n: usize, m: usize, point: &PhasePoint) -> Result<CMatrix> {
    check_rep(n, m)?;
    CoherentStates::new(n, m)?.unitary(&EulerAngles::from_point(point))
}

pub fn coherent_state(n: usize, m: usize, point: &PhasePoint) -> Result<CoherentState> {
    check_rep(n, m)?;
    CoherentStates::new(n, m)?.state(point)
}

/// Factor of the CP^{N-1} volume element contributed by `θ_i` (1-based `i`).
pub fn volume_factor(n: usize, i: usize, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    if i == 1 {
        (2.0 * theta).sin()
    } else if i == n - 1 {
        c * s.powi(2 * n as i32 - 3)
    } else {
        // K(y) with y = i + 1
        c.powi(2 * i as i32 - 1) * s
    }
}

/// Invariant volume weight `∏_{y=2}^{N} K(y)` at `point`.
pub fn volume_weight(point: &PhasePoint) -> f64 {
    let n = point.n();
    point
        .thetas
        .iter()
        .enumerate()
        .map(|(i, &t)| volume_factor(n, i + 1, t))
        .product()
}

/// `(N + M - 1)! / (2 π^{N-1} M!)`.
pub fn normalization_constant(n: usize, m: usize) -> f64 {
    let ratio: f64 = (m + 1..=n + m - 1).map(|k| k as f64).product();
    ratio / (2.0 * PI.powi(n as i32 - 1))
}

/// `∫ dV` over the full chart, `2 π^{N-1} / (N - 1)!`.
pub fn total_volume(n: usize) -> f64 {
    let fact: f64 = (1..n).map(|k| k as f64).product();
    2.0 * PI.powi(n as i32 - 1) / fact
}
