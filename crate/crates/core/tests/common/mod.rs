#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use std::f64::consts::{FRAC_PI_2, TAU};
use sunqps::{CMatrix, CVector, DensityMatrix, PhasePoint};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn ginibre<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    DMatrix::from_fn(rows, cols, |_, _| {
        c(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// `A A† / Tr[A A†]` with `A` a square complex Ginibre draw.
pub fn random_density<R: Rng>(rng: &mut R, dim: usize) -> DensityMatrix {
    let a = ginibre(rng, dim, dim);
    let aa = &a * a.adjoint();
    let tr = aa.trace().re;
    let m = (aa.clone() + aa.adjoint()).unscale(2.0 * tr);
    DensityMatrix::new(m).expect("Ginibre draw is a valid state")
}

pub fn random_vector<R: Rng>(rng: &mut R, dim: usize) -> CVector {
    let v = CVector::from_fn(dim, |_, _| c(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let norm = v.norm();
    v.unscale(norm)
}

pub fn random_point<R: Rng>(rng: &mut R, n: usize) -> PhasePoint {
    let thetas = (0..n - 1).map(|_| rng.random_range(0.0..=FRAC_PI_2)).collect();
    let phis = (0..n - 1).map(|_| rng.random_range(0.0..TAU)).collect();
    PhasePoint::new(thetas, phis).unwrap()
}

pub fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn vec_diff(a: &CVector, b: &CVector) -> f64 {
    assert_eq!(a.len(), b.len());
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn mat(rows: &[&[Complex64]]) -> CMatrix {
    let d = rows.len();
    DMatrix::from_fn(d, d, |i, j| rows[i][j])
}

/// The eight standard Gell-Mann matrices, written out by hand.
pub fn gell_mann() -> Vec<CMatrix> {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    let r3 = 1.0 / 3f64.sqrt();
    vec![
        mat(&[&[o, l, o], &[l, o, o], &[o, o, o]]),
        mat(&[&[o, -i, o], &[i, o, o], &[o, o, o]]),
        mat(&[&[l, o, o], &[o, -l, o], &[o, o, o]]),
        mat(&[&[o, o, l], &[o, o, o], &[l, o, o]]),
        mat(&[&[o, o, -i], &[o, o, o], &[i, o, o]]),
        mat(&[&[o, o, o], &[o, o, l], &[o, l, o]]),
        mat(&[&[o, o, o], &[o, o, -i], &[o, i, o]]),
        mat(&[&[c(r3, 0.0), o, o], &[o, c(r3, 0.0), o], &[o, o, c(-2.0 * r3, 0.0)]]),
    ]
}

/// Spin-1 generators in the basis (2,0), (1,1), (0,2), normalized so that
/// `Tr[J_k J_l] = 8 δ_kl`.
pub fn spin_one() -> Vec<CMatrix> {
    let o = c(0.0, 0.0);
    let s = c(2f64.sqrt(), 0.0);
    let si = c(0.0, 2f64.sqrt());
    vec![
        mat(&[&[o, s, o], &[s, o, s], &[o, s, o]]),
        mat(&[&[o, -si, o], &[si, o, -si], &[o, si, o]]),
        mat(&[&[c(2.0, 0.0), o, o], &[o, o, o], &[o, o, c(-2.0, 0.0)]]),
    ]
}

/// `(e^{2iφ₁} sin²θ, sin2θ/√2, e^{-2iφ₁} cos²θ)` times the global phase `e^{-2iφ₂}`.
pub fn spin_one_state(theta: f64, phi1: f64, phi2: f64) -> CVector {
    let g = Complex64::from_polar(1.0, -2.0 * phi2);
    CVector::from_vec(vec![
        g * Complex64::from_polar(theta.sin().powi(2), 2.0 * phi1),
        g * c((2.0 * theta).sin() / 2f64.sqrt(), 0.0),
        g * Complex64::from_polar(theta.cos().powi(2), -2.0 * phi1),
    ])
}

/// Fundamental-representation coherent state, written out component by
/// component. For `N = 2` the bottom entry carries `e^{-iφ₁}` from the
/// `Λ(3)` rotation acting on the lowest-weight state.
pub fn fundamental_state(point: &PhasePoint) -> CVector {
    let n = point.n();
    let t = point.thetas();
    let p = point.phis();
    if n == 2 {
        return CVector::from_vec(vec![
            Complex64::from_polar(t[0].sin(), p[0]),
            Complex64::from_polar(t[0].cos(), -p[0]),
        ]);
    }
    let cos_prod = |from: usize| -> f64 { (from..=n - 2).map(|j| t[j - 1].cos()).product() };
    let phase_sum = |from: usize| -> f64 { (from..=n - 1).map(|j| p[j - 1]).sum() };
    let last_sin = t[n - 2].sin();
    let mut v = Vec::with_capacity(n);
    v.push(Complex64::from_polar(cos_prod(1) * last_sin, phase_sum(1)));
    v.push(-Complex64::from_polar(
        t[0].sin() * cos_prod(2) * last_sin,
        -p[0] + phase_sum(2),
    ));
    for k in 3..n {
        v.push(-Complex64::from_polar(
            t[k - 2].sin() * cos_prod(k) * last_sin,
            phase_sum(k),
        ));
    }
    v.push(c(t[n - 2].cos(), 0.0));
    CVector::from_vec(v)
}
