//! Stratonovich–Weyl generating kernels `F^s_{N,M}` for `M ∈ {1, 2}` and the
//! conversions between the three orderings.

use crate::algebra::{binomial, build_generators, check_rep, GeneratorSet};
use crate::coherent::{CoherentState, CoherentStates, PhasePoint};
use crate::error::{Error, Result};
use crate::linalg::{hermitize, identity, CMatrix};
use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use std::fmt;
use std::str::FromStr;

/// Ordering parameter `s`: P-function (-1), Wigner function (0), Q-function (+1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SOrder {
    P,
    Wigner,
    Q,
}

impl SOrder {
    pub const ALL: [SOrder; 3] = [SOrder::Q, SOrder::Wigner, SOrder::P];

    pub fn value(self) -> i8 {
        match self {
            SOrder::P => -1,
            SOrder::Wigner => 0,
            SOrder::Q => 1,
        }
    }

    pub fn from_value(s: i64) -> Result<Self> {
        match s {
            -1 => Ok(SOrder::P),
            0 => Ok(SOrder::Wigner),
            1 => Ok(SOrder::Q),
            other => Err(Error::Domain(format!("s must be -1, 0 or 1, got {other}"))),
        }
    }

    /// `-s`, the kernel paired with `f^s` when reconstructing a state.
    pub fn dual(self) -> Self {
        match self {
            SOrder::P => SOrder::Q,
            SOrder::Wigner => SOrder::Wigner,
            SOrder::Q => SOrder::P,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SOrder::P => "P",
            SOrder::Wigner => "Wigner",
            SOrder::Q => "Q",
        }
    }
}

impl fmt::Display for SOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

impl FromStr for SOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let v: i64 = s
            .trim()
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Domain(format!("s must be -1, 0 or 1, got {s:?}")))?;
        Self::from_value(v)
    }
}

/// `Ω(s)` of the fundamental-representation kernel.
pub fn omega_m1(s: SOrder, n: usize) -> f64 {
    let np1 = n as f64 + 1.0;
    match s {
        SOrder::Wigner => np1.sqrt(),
        SOrder::Q => 1.0,
        SOrder::P => np1,
    }
}

/// `ω^s_{N,2}(c)` for `c ∈ {1, 2}`.
pub fn omega_m2(s: SOrder, c: usize, n: usize) -> Result<f64> {
    if c != 1 && c != 2 {
        return Err(Error::Domain(format!("omega_m2 takes c = 1 or 2, got {c}")));
    }
    let b = |a: usize, k: usize| binomial(a + k - 1, k) as f64;
    let w0_1 = 0.5 * b(n + 2, 2).sqrt();
    Ok(match (s, c) {
        (SOrder::Wigner, 1) => w0_1,
        (SOrder::Wigner, _) => ((b(n + 2, 1) / 2.0).sqrt() - 2.0 * w0_1) / (2.0 * b(n + 2, 1)),
        (SOrder::Q, 1) => 0.5,
        (SOrder::Q, _) => 0.0,
        (SOrder::P, c) => {
            let sign = if c == 1 { 1.0 } else { -1.0 };
            sign / (1 << c) as f64 * b(n + 2, 3 - c)
        }
    })
}

#[derive(Debug, Clone)]
pub struct Kernel {
    n: usize,
    m: usize,
    s: SOrder,
    point: PhasePoint,
    matrix: CMatrix,
}

impl Kernel {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn s(&self) -> SOrder {
        self.s
    }

    pub fn point(&self) -> &PhasePoint {
        &self.point
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `F - I/d`.
    pub fn traceless_part(&self) -> CMatrix {
        let d = self.dim();
        &self.matrix - identity(d).scale(1.0 / d as f64)
    }
}

/// Per-point data shared by the three kernels at that point.
#[derive(Debug, Clone)]
pub struct PointMoments {
    pub state: CoherentState,
    /// `⟨cs|Λ_{N,M}(k)|cs⟩`.
    pub rep: Vec<f64>,
    /// `⟨cs|λ_k|cs⟩` for the fundamental SU(d) generators; `M = 2` only.
    pub fundamental: Option<Vec<f64>>,
}

/// Kernel factory for one `(N, M)`; generator sets are built once and reused.
#[derive(Debug, Clone)]
pub struct KernelBuilder {
    states: CoherentStates,
    fundamental: Option<GeneratorSet>,
}

impl KernelBuilder {
    pub fn new(n: usize, m: usize) -> Result<Self> {
        check_rep(n, m)?;
        if m > 2 {
            return Err(Error::UnsupportedRepresentation(m));
        }
        let states = CoherentStates::new(n, m)?;
        let fundamental = if m == 2 {
            Some(build_generators(states.dim(), 1)?)
        } else {
            None
        };
        Ok(Self {
            states,
            fundamental,
        })
    }

    pub fn n(&self) -> usize {
        self.states.n()
    }

    pub fn m(&self) -> usize {
        self.states.m()
    }

    pub fn dim(&self) -> usize {
        self.states.dim()
    }

    pub fn coherent(&self) -> &CoherentStates {
        &self.states
    }

    pub fn moments(&self, point: &PhasePoint) -> Result<PointMoments> {
        let state = self.states.state(point)?;
        let rep = self.states.generators().expectations(state.amplitudes());
        let fundamental = self
            .fundamental
            .as_ref()
            .map(|g| g.expectations(state.amplitudes()));
        Ok(PointMoments {
            state,
            rep,
            fundamental,
        })
    }

    pub fn kernel_from_moments(&self, s: SOrder, moments: &PointMoments) -> Kernel {
        let (n, d) = (self.n(), self.dim());
        let mut matrix = identity(d).scale(1.0 / d as f64);
        let gens = self.states.generators();
        match (&self.fundamental, &moments.fundamental) {
            (Some(fund), Some(fund_moments)) => {
                let w1 = omega_m2(s, 1, n).expect("c = 1");
                let w2 = omega_m2(s, 2, n).expect("c = 2");
                matrix += fund.combine(fund_moments).scale(w1);
                if w2 != 0.0 {
                    matrix += gens.combine(&moments.rep).scale(w2);
                }
            }
            _ => {
                matrix += gens.combine(&moments.rep).scale(omega_m1(s, n) / 2.0);
            }
        }
        Kernel {
            n,
            m: self.m(),
            s,
            point: moments.state.point().clone(),
            matrix,
        }
    }

    pub fn kernel(&self, s: SOrder, point: &PhasePoint) -> Result<Kernel> {
        Ok(self.kernel_from_moments(s, &self.moments(point)?))
    }

    /// `F^{s'}` from `F^s` at the same point, through `Υ = F̃^{s'} (F̃^s)^{-1}`.
    pub fn convert(&self, src: &Kernel, target: SOrder, condition_cap: f64) -> Result<Kernel> {
        if src.n != self.n() || src.m != self.m() {
            return Err(Error::Domain(format!(
                "kernel for (N, M) = ({}, {}) passed to a ({}, {}) builder",
                src.n,
                src.m,
                self.n(),
                self.m()
            )));
        }
        if target == src.s {
            return Ok(src.clone());
        }
        let d = self.dim();
        let target_tilde = self.kernel(target, &src.point)?.traceless_part();
        let upsilon = transfer_matrix(&target_tilde, &src.traceless_part(), condition_cap, &src.point)?;
        let id = identity(d);
        let matrix = &upsilon * &src.matrix + (id - &upsilon).scale(1.0 / d as f64);
        Ok(Kernel {
            s: target,
            matrix,
            ..src.clone()
        })
    }
}

pub const DEFAULT_CONDITION_CAP: f64 = 1e8;

/// Eigenvalue cutoff below which `F̃^s` is treated as singular.
pub const SINGULAR_EIGENVALUE: f64 = 1e-12;

/// `Υ = target · source⁻¹` for Hermitian `source`, inverted through its
/// eigendecomposition. Fails when an eigenvalue falls below
/// [`SINGULAR_EIGENVALUE`] in magnitude or the condition number exceeds `cap`.
pub fn transfer_matrix(
    target: &CMatrix,
    source: &CMatrix,
    cap: f64,
    point: &PhasePoint,
) -> Result<CMatrix> {
    let eig = SymmetricEigen::new(hermitize(source));
    let abs: Vec<f64> = eig.eigenvalues.iter().map(|l| l.abs()).collect();
    let min = abs.iter().copied().fold(f64::INFINITY, f64::min);
    let max = abs.iter().copied().fold(0.0, f64::max);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    if min < SINGULAR_EIGENVALUE || condition > cap {
        return Err(Error::Conditioning {
            theta: point.thetas().to_vec(),
            phi: point.phis().to_vec(),
            min_abs_eigenvalue: min,
            condition,
        });
    }
    let mut scaled = eig.eigenvectors.clone();
    for (j, &l) in eig.eigenvalues.iter().enumerate() {
        for x in scaled.column_mut(j).iter_mut() {
            *x /= Complex64::new(l, 0.0);
        }
    }
    let inverse = scaled * eig.eigenvectors.adjoint();
    Ok(target * inverse)
}

pub fn kernel_m1(n: usize, s: SOrder, point: &PhasePoint) -> Result<Kernel> {
    KernelBuilder::new(n, 1)?.kernel(s, point)
}

pub fn kernel_m2(n: usize, s: SOrder, point: &PhasePoint) -> Result<Kernel> {
    KernelBuilder::new(n, 2)?.kernel(s, point)
}

/// `F^{s'} = (Ω(s')/Ω(s)) F^s + (1 - Ω(s')/Ω(s)) I/N`.
pub fn convert_kernel_m1(src: &Kernel, target: SOrder) -> Result<Kernel> {
    if src.m != 1 {
        return Err(Error::Domain(format!(
            "convert_kernel_m1 needs an M = 1 kernel, got M = {}",
            src.m
        )));
    }
    if target == src.s {
        return Ok(src.clone());
    }
    let ratio = omega_m1(target, src.n) / omega_m1(src.s, src.n);
    let d = src.dim();
    let matrix = src.matrix.scale(ratio) + identity(d).scale((1.0 - ratio) / d as f64);
    Ok(Kernel {
        s: target,
        matrix,
        ..src.clone()
    })
}

pub fn convert_kernel_m2(src: &Kernel, target: SOrder, condition_cap: f64) -> Result<Kernel> {
    if src.m != 2 {
        return Err(Error::Domain(format!(
            "convert_kernel_m2 needs an M = 2 kernel, got M = {}",
            src.m
        )));
    }
    KernelBuilder::new(src.n, 2)?.convert(src, target, condition_cap)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_residual, max_abs_diff};

    fn point(thetas: &[f64], phis: &[f64]) -> PhasePoint {
        PhasePoint::new(thetas.to_vec(), phis.to_vec()).unwrap()
    }

    #[test]
    fn s_parsing() {
        assert_eq!("-1".parse::<SOrder>().unwrap(), SOrder::P);
        assert_eq!("0".parse::<SOrder>().unwrap(), SOrder::Wigner);
        assert_eq!("+1".parse::<SOrder>().unwrap(), SOrder::Q);
        assert_eq!("1".parse::<SOrder>().unwrap(), SOrder::Q);
        assert!("2".parse::<SOrder>().is_err());
        assert!("half".parse::<SOrder>().is_err());
        assert_eq!(SOrder::Wigner.dual(), SOrder::Wigner);
        assert_eq!(SOrder::Q.dual(), SOrder::P);
    }

    #[test]
    fn omega_tables() {
        assert!((omega_m1(SOrder::Wigner, 4) - 5f64.sqrt()).abs() < 1e-15);
        assert_eq!(omega_m1(SOrder::Q, 7), 1.0);
        assert_eq!(omega_m1(SOrder::P, 4), 5.0);

        assert!((omega_m2(SOrder::Wigner, 1, 2).unwrap() - 10f64.sqrt() / 2.0).abs() < 1e-15);
        let expect = (2f64.sqrt() - 10f64.sqrt()) / 8.0;
        assert!((omega_m2(SOrder::Wigner, 2, 2).unwrap() - expect).abs() < 1e-15);
        assert_eq!(omega_m2(SOrder::Q, 1, 3).unwrap(), 0.5);
        assert_eq!(omega_m2(SOrder::Q, 2, 3).unwrap(), 0.0);
        assert_eq!(omega_m2(SOrder::P, 1, 2).unwrap(), 5.0);
        assert_eq!(omega_m2(SOrder::P, 2, 2).unwrap(), -1.0);
        assert!(omega_m2(SOrder::P, 3, 2).is_err());
    }

    #[test]
    fn qubit_wigner_kernel_at_origin() {
        let k = kernel_m1(2, SOrder::Wigner, &PhasePoint::origin(2)).unwrap();
        let r3 = 3f64.sqrt();
        assert!((k.matrix()[(0, 0)].re - (1.0 - r3) / 2.0).abs() < 1e-15);
        assert!((k.matrix()[(1, 1)].re - (1.0 + r3) / 2.0).abs() < 1e-15);
        assert!(k.matrix()[(0, 1)].norm() < 1e-15);
    }

    #[test]
    fn q_kernel_is_projector() {
        for (n, m) in [(2, 1), (3, 1), (4, 1), (2, 2), (3, 2)] {
            let b = KernelBuilder::new(n, m).unwrap();
            let p = point(&vec![0.4; n - 1], &vec![1.9; n - 1]);
            let k = b.kernel(SOrder::Q, &p).unwrap();
            let f = k.matrix();
            assert!(max_abs_diff(&(f * f), f) < 1e-12, "n={n} m={m}");
            assert!((f.trace() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
            let cs = b.coherent().state(&p).unwrap();
            assert!(max_abs_diff(f, &cs.projector()) < 1e-12);
        }
    }

    #[test]
    fn kernels_hermitian_unit_trace() {
        for (n, m) in [(2, 1), (3, 1), (2, 2), (3, 2)] {
            let b = KernelBuilder::new(n, m).unwrap();
            let p = point(&vec![0.9; n - 1], &vec![4.0; n - 1]);
            for s in SOrder::ALL {
                let k = b.kernel(s, &p).unwrap();
                assert!(hermiticity_residual(k.matrix()) < 1e-12);
                assert!((k.matrix().trace().re - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn unsupported_m() {
        assert!(matches!(
            KernelBuilder::new(2, 3),
            Err(Error::UnsupportedRepresentation(3))
        ));
    }

    #[test]
    fn m1_conversion_identity_and_round_trip() {
        let p = point(&[0.3, 0.8, 1.2], &[0.1, 2.0, 5.0]);
        let src = kernel_m1(4, SOrder::Q, &p).unwrap();
        let same = convert_kernel_m1(&src, SOrder::Q).unwrap();
        assert_eq!(same.matrix(), src.matrix());
        let there = convert_kernel_m1(&src, SOrder::P).unwrap();
        let back = convert_kernel_m1(&there, SOrder::Q).unwrap();
        assert!(max_abs_diff(back.matrix(), src.matrix()) < 1e-12);
        let m2 = kernel_m2(2, SOrder::Q, &point(&[0.3], &[0.1])).unwrap();
        assert!(convert_kernel_m1(&m2, SOrder::P).is_err());
    }

    #[test]
    fn singular_source_is_reported() {
        let p = PhasePoint::origin(2);
        let singular = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(-1.0, 0.0),
        ]));
        let err = transfer_matrix(&identity(3), &singular, DEFAULT_CONDITION_CAP, &p).unwrap_err();
        assert!(matches!(err, Error::Conditioning { .. }));
        let skewed = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(1e-10, 0.0),
            Complex64::new(-1.0, 0.0),
        ]));
        assert!(transfer_matrix(&identity(3), &skewed, DEFAULT_CONDITION_CAP, &p).is_err());
        assert!(transfer_matrix(&identity(3), &skewed, 1e12, &p).is_ok());
    }

    #[test]
    fn m2_conversion_at_chart_origin() {
        // θ = 0 is the lowest-weight state; F̃ stays invertible there
        let p = PhasePoint::origin(2);
        let src = kernel_m2(2, SOrder::Q, &p).unwrap();
        let out = convert_kernel_m2(&src, SOrder::Wigner, DEFAULT_CONDITION_CAP).unwrap();
        let direct = kernel_m2(2, SOrder::Wigner, &p).unwrap();
        assert!(max_abs_diff(out.matrix(), direct.matrix()) < 1e-10);
    }
}
