//! Product quadrature over CP^{N-1} with the invariant volume element folded in.
//!
//! Each θ-dimension uses Gauss–Legendre nodes in `u = sin²θ ∈ [0, 1]`, mapped
//! back to `θ = asin √u ∈ [0, π/2]`. In `u` the volume factors become
//! polynomials, and so do the θ-parts of every coherent-state integrand, so
//! the rule is exact once the point count covers the polynomial degree. Each
//! φ-dimension uses equispaced nodes with weight `2π / Q`, exact for
//! harmonics `e^{ikφ}` with `|k| < Q`.
//!
//! Reductions are split into fixed-size chunks evaluated in parallel and
//! combined by a pairwise tree in index order, so results do not depend on
//! the thread count.

use crate::algebra::check_rep;
use crate::coherent::{volume_factor, PhasePoint};
use crate::error::{Error, Result};
use crate::linalg::{pairwise_sum, CMatrix};
use rayon::prelude::*;
use std::f64::consts::TAU;
use std::ops::Add;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(points: usize) -> (Vec<f64>, Vec<f64>) {
    let n = points;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    (nodes, weights)
}

/// `(2M + N + 2, 4M + 4)` θ and φ points per dimension.
pub fn default_resolution(n: usize, m: usize) -> (usize, usize) {
    (2 * m + n + 2, 4 * m + 4)
}

#[derive(Debug, Clone)]
pub struct QuadratureGrid {
    n: usize,
    theta_nodes: Vec<f64>,
    /// Combined weight per θ-dimension: Gauss weight × Jacobian × volume factor.
    theta_weights: Vec<Vec<f64>>,
    phi_nodes: Vec<f64>,
    phi_weight: f64,
}

const CHUNK: usize = 2048;

impl QuadratureGrid {
    pub fn new(n: usize, theta_points: usize, phi_points: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("grid needs N >= 2, got {n}")));
        }
        if theta_points < 2 || phi_points < 2 {
            return Err(Error::Domain(format!(
                "grid needs at least 2 points per dimension (got theta {theta_points}, phi {phi_points})"
            )));
        }
        let (x, w) = gauss_legendre(theta_points);
        let u: Vec<f64> = x.iter().map(|x| 0.5 * (x + 1.0)).collect();
        let theta_nodes: Vec<f64> = u.iter().map(|u| u.sqrt().asin()).collect();
        // dθ = du / (2 sinθ cosθ)
        let theta_weights = (1..n)
            .map(|dim| {
                theta_nodes
                    .iter()
                    .zip(&w)
                    .map(|(&t, &wk)| {
                        let jac = 1.0 / (2.0 * t.sin() * t.cos());
                        0.5 * wk * jac * volume_factor(n, dim, t)
                    })
                    .collect()
            })
            .collect();
        let phi_nodes = (0..phi_points)
            .map(|k| TAU * k as f64 / phi_points as f64)
            .collect();
        Ok(Self {
            n,
            theta_nodes,
            theta_weights,
            phi_nodes,
            phi_weight: TAU / phi_points as f64,
        })
    }

    /// Grid at [`default_resolution`] for `(n, m)`.
    pub fn for_rep(n: usize, m: usize) -> Result<Self> {
        check_rep(n, m)?;
        let (p, q) = default_resolution(n, m);
        Self::new(n, p, q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta_points(&self) -> usize {
        self.theta_nodes.len()
    }

    pub fn phi_points(&self) -> usize {
        self.phi_nodes.len()
    }

    pub fn theta_nodes(&self) -> &[f64] {
        &self.theta_nodes
    }

    pub fn phi_nodes(&self) -> &[f64] {
        &self.phi_nodes
    }

    pub fn len(&self) -> usize {
        (self.theta_points() * self.phi_points()).pow(self.n as u32 - 1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Point and combined weight at flat index `idx`. θ digits are the most
    /// significant, first angle first.
    pub fn point(&self, idx: usize) -> (PhasePoint, f64) {
        let dims = self.n - 1;
        let (p, q) = (self.theta_points(), self.phi_points());
        let phi_block = q.pow(dims as u32);
        let (mut t_idx, mut p_idx) = (idx / phi_block, idx % phi_block);
        let mut thetas = vec![0.0; dims];
        let mut phis = vec![0.0; dims];
        let mut weight = self.phi_weight.powi(dims as i32);
        for d in (0..dims).rev() {
            let ti = t_idx % p;
            let pi = p_idx % q;
            t_idx /= p;
            p_idx /= q;
            thetas[d] = self.theta_nodes[ti];
            phis[d] = self.phi_nodes[pi];
            weight *= self.theta_weights[d][ti];
        }
        (PhasePoint::from_grid(thetas, phis), weight)
    }

    pub fn points(&self) -> impl Iterator<Item = (PhasePoint, f64)> + '_ {
        (0..self.len()).map(|i| self.point(i))
    }

    /// Sum of all combined weights, i.e. the quadrature estimate of `∫ dV`.
    pub fn total_weight(&self) -> f64 {
        self.integrate_scalar(|_| 1.0)
    }

    /// Deterministic weighted reduction of a fallible integrand. The closure
    /// receives the flat index, the point and its combined weight and returns
    /// the already-weighted contribution.
    pub fn try_reduce<T, F>(&self, f: F) -> Result<Option<T>>
    where
        T: Clone + Send,
        for<'a> &'a T: Add<&'a T, Output = T>,
        F: Fn(usize, &PhasePoint, f64) -> Result<T> + Sync,
    {
        let total = self.len();
        let chunks: Vec<Option<T>> = (0..total.div_ceil(CHUNK))
            .into_par_iter()
            .map(|c| {
                let lo = c * CHUNK;
                let hi = (lo + CHUNK).min(total);
                let parts = (lo..hi)
                    .map(|i| {
                        let (pt, w) = self.point(i);
                        f(i, &pt, w)
                    })
                    .collect::<Result<Vec<T>>>()?;
                Ok(pairwise_sum(&parts))
            })
            .collect::<Result<_>>()?;
        let parts: Vec<T> = chunks.into_iter().flatten().collect();
        Ok(pairwise_sum(&parts))
    }

    /// `Σ w · f(point)`.
    pub fn integrate_scalar<F>(&self, f: F) -> f64
    where
        F: Fn(&PhasePoint) -> f64 + Sync,
    {
        self.try_reduce(|_, pt, w| Ok(Scalar(w * f(pt))))
            .expect("infallible integrand")
            .map_or(0.0, |s| s.0)
    }

    /// Entrywise `Σ w · f(point)` for a `dim × dim` matrix integrand.
    pub fn integrate_matrix<F>(&self, dim: usize, f: F) -> CMatrix
    where
        F: Fn(&PhasePoint) -> CMatrix + Sync,
    {
        self.try_integrate_matrix(dim, |_, pt| Ok(f(pt)))
            .expect("infallible integrand")
    }

    pub fn try_integrate_matrix<F>(&self, dim: usize, f: F) -> Result<CMatrix>
    where
        F: Fn(usize, &PhasePoint) -> Result<CMatrix> + Sync,
    {
        let sum = self.try_reduce(|i, pt, w| Ok(f(i, pt)? * num_complex::Complex64::new(w, 0.0)))?;
        Ok(sum.unwrap_or_else(|| CMatrix::zeros(dim, dim)))
    }
}

/// Newtype so plain floats fit the reference-add bound of the reducer.
#[derive(Debug, Clone, Copy)]
struct Scalar(f64);

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

pub fn build_grid(n: usize, theta_points: usize, phi_points: usize) -> Result<QuadratureGrid> {
    QuadratureGrid::new(n, theta_points, phi_points)
}

pub fn integrate_scalar<F>(grid: &QuadratureGrid, f: F) -> f64
where
    F: Fn(&PhasePoint) -> f64 + Sync,
{
    grid.integrate_scalar(f)
}

pub fn integrate_matrix<F>(grid: &QuadratureGrid, dim: usize, f: F) -> CMatrix
where
    F: Fn(&PhasePoint) -> CMatrix + Sync,
{
    grid.integrate_matrix(dim, f)
}
