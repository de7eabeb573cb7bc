//! Density matrices, fundamental-representation Bloch vectors, evaluation of
//! `f^s = Tr[ρ F^s]` and reconstruction of `ρ` by quadrature.

use crate::algebra::GeneratorSet;
use crate::coherent::{normalization_constant, PhasePoint};
use crate::error::{Error, Result};
use crate::kernels::{omega_m1, KernelBuilder, PointMoments, SOrder};
use crate::linalg::{
    frobenius_distance, hermitian_eigenvalues, hermiticity_residual, hermitize, identity,
    trace_product, CMatrix, CVector,
};
use crate::quadrature::QuadratureGrid;
use num_complex::Complex64;

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Recovered matrices with an eigenvalue below this get a positivity warning.
pub const RECOVERY_POSITIVITY_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Checks Hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidState(format!(
                "density matrix must be square, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let herm = hermiticity_residual(&matrix);
        if herm > HERMITIAN_TOL {
            return Err(Error::InvalidState(format!(
                "not Hermitian (residual {herm:.3e})"
            )));
        }
        let tr = matrix.trace();
        if (tr - Complex64::new(1.0, 0.0)).norm() > TRACE_TOL {
            return Err(Error::InvalidState(format!(
                "trace is {} + {}i, expected 1",
                tr.re, tr.im
            )));
        }
        let rho = Self { matrix };
        let min = rho.min_eigenvalue();
        if min < EIGENVALUE_FLOOR {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {min:.3e}"
            )));
        }
        Ok(rho)
    }

    /// Wraps a matrix without any checks.
    pub fn unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::InvalidState("zero or non-finite state vector".into()));
        }
        let v = psi.unscale(norm);
        Ok(Self {
            matrix: &v * v.adjoint(),
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: identity(dim).scale(1.0 / dim as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix)[0]
    }

    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    /// `αρ₁ + (1-α)ρ₂`.
    pub fn mix(&self, other: &Self, alpha: f64) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                context: "mix",
                expected: self.dim(),
                actual: other.dim(),
            });
        }
        Ok(Self {
            matrix: self.matrix.scale(alpha) + other.matrix.scale(1.0 - alpha),
        })
    }
}

/// Components `n_k` of `ρ = I/N + √((N-1)/(2N)) Σ n_k Λ(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlochVector {
    n: usize,
    components: Vec<f64>,
}

impl BlochVector {
    pub fn new(n: usize, components: Vec<f64>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidRepresentation { n, m: 1 });
        }
        if components.len() != n * n - 1 {
            return Err(Error::DimensionMismatch {
                context: "Bloch vector",
                expected: n * n - 1,
                actual: components.len(),
            });
        }
        Ok(Self { n, components })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            components: vec![0.0; n * n - 1],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    /// 1-based component.
    pub fn get(&self, k: usize) -> f64 {
        self.components[k - 1]
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a * b)
            .sum()
    }
}

fn bloch_scale(n: usize) -> f64 {
    ((n as f64 - 1.0) / (2.0 * n as f64)).sqrt()
}

fn check_fundamental(gens: &GeneratorSet, dim: usize) -> Result<()> {
    if gens.m() != 1 {
        return Err(Error::UnsupportedRepresentation(gens.m()));
    }
    if gens.dim() != dim {
        return Err(Error::DimensionMismatch {
            context: "Bloch decomposition",
            expected: gens.dim(),
            actual: dim,
        });
    }
    Ok(())
}

pub fn bloch_decompose(rho: &DensityMatrix, gens: &GeneratorSet) -> Result<BlochVector> {
    check_fundamental(gens, rho.dim())?;
    let c = 1.0 / (2.0 * bloch_scale(gens.n()));
    let components = gens
        .matrices()
        .iter()
        .map(|l| c * trace_product(rho.matrix(), l).re)
        .collect();
    Ok(BlochVector {
        n: gens.n(),
        components,
    })
}

/// Hermitian and unit trace by construction; positivity is left to the caller.
pub fn bloch_compose(bloch: &BlochVector, gens: &GeneratorSet) -> Result<DensityMatrix> {
    check_fundamental(gens, bloch.n)?;
    let n = bloch.n;
    let matrix = identity(n).scale(1.0 / n as f64)
        + gens.combine(&bloch.components).scale(bloch_scale(n));
    Ok(DensityMatrix::unchecked(matrix))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistributionSample {
    pub s: SOrder,
    pub point: PhasePoint,
    pub value: f64,
    /// `|Im Tr[ρF]|`, zero up to rounding.
    pub imaginary_residual: f64,
}

/// Evaluates `f^s_ρ` at many points with the generator sets built once.
#[derive(Debug, Clone)]
pub struct DistributionEvaluator {
    builder: KernelBuilder,
    rho: DensityMatrix,
}

impl DistributionEvaluator {
    pub fn new(rho: DensityMatrix, n: usize, m: usize) -> Result<Self> {
        let builder = KernelBuilder::new(n, m)?;
        Self::with_builder(rho, builder)
    }

    pub fn with_builder(rho: DensityMatrix, builder: KernelBuilder) -> Result<Self> {
        if rho.dim() != builder.dim() {
            return Err(Error::DimensionMismatch {
                context: "density matrix",
                expected: builder.dim(),
                actual: rho.dim(),
            });
        }
        Ok(Self { builder, rho })
    }

    pub fn builder(&self) -> &KernelBuilder {
        &self.builder
    }

    pub fn rho(&self) -> &DensityMatrix {
        &self.rho
    }

    pub fn eval(&self, s: SOrder, point: &PhasePoint) -> Result<DistributionSample> {
        let moments = self.builder.moments(point)?;
        Ok(self.eval_moments(s, &moments))
    }

    /// All three orderings at one point, sharing the coherent-state moments.
    pub fn eval_all(&self, point: &PhasePoint) -> Result<[DistributionSample; 3]> {
        let moments = self.builder.moments(point)?;
        Ok(SOrder::ALL.map(|s| self.eval_moments(s, &moments)))
    }

    fn eval_moments(&self, s: SOrder, moments: &PointMoments) -> DistributionSample {
        let kernel = self.builder.kernel_from_moments(s, moments);
        let t = trace_product(self.rho.matrix(), kernel.matrix());
        DistributionSample {
            s,
            point: moments.state.point().clone(),
            value: t.re,
            imaginary_residual: t.im.abs(),
        }
    }
}

pub fn eval_distribution(
    rho: &DensityMatrix,
    n: usize,
    m: usize,
    s: SOrder,
    point: &PhasePoint,
) -> Result<DistributionSample> {
    DistributionEvaluator::new(rho.clone(), n, m)?.eval(s, point)
}

/// `1/N + √((N-1)/(2N)) Ω(s) Σ_k ⟨cs|Λ(k)|cs⟩ n_k`.
pub fn eval_distribution_bloch(
    bloch: &BlochVector,
    gens: &GeneratorSet,
    s: SOrder,
    point: &PhasePoint,
) -> Result<DistributionSample> {
    check_fundamental(gens, bloch.n)?;
    let states = crate::coherent::CoherentStates::from_generators(gens.clone());
    let cs = states.state(point)?;
    let moments = gens.expectations(cs.amplitudes());
    let n = bloch.n;
    let dot: f64 = moments.iter().zip(&bloch.components).map(|(a, b)| a * b).sum();
    Ok(DistributionSample {
        s,
        point: point.clone(),
        value: 1.0 / n as f64 + bloch_scale(n) * omega_m1(s, n) * dot,
        imaginary_residual: 0.0,
    })
}

#[derive(Debug, Clone)]
pub struct Recovery {
    /// Hermitized reconstruction.
    pub matrix: CMatrix,
    pub trace_error: f64,
    pub min_eigenvalue: f64,
    /// Set when `min_eigenvalue` < [`RECOVERY_POSITIVITY_FLOOR`].
    pub positivity_warning: bool,
}

impl Recovery {
    pub fn frobenius_error(&self, reference: &DensityMatrix) -> f64 {
        frobenius_distance(&self.matrix, reference.matrix())
    }

    pub fn into_density(self) -> DensityMatrix {
        DensityMatrix::unchecked(self.matrix)
    }
}

/// `ρ̂ = K_{N,M} Σ_grid w f^{(+s)}(pt) F^{(-s)}(pt)`. `samples` is called with
/// the flat grid index and the point, and returns `f^{(+s)}` there.
pub fn recover_density<F>(
    samples: F,
    n: usize,
    m: usize,
    s: SOrder,
    grid: &QuadratureGrid,
) -> Result<Recovery>
where
    F: Fn(usize, &PhasePoint) -> Result<f64> + Sync,
{
    if grid.n() != n {
        return Err(Error::DimensionMismatch {
            context: "quadrature grid N",
            expected: n,
            actual: grid.n(),
        });
    }
    let builder = KernelBuilder::new(n, m)?;
    recover_with_builder(samples, &builder, s, grid)
}

pub fn recover_with_builder<F>(
    samples: F,
    builder: &KernelBuilder,
    s: SOrder,
    grid: &QuadratureGrid,
) -> Result<Recovery>
where
    F: Fn(usize, &PhasePoint) -> Result<f64> + Sync,
{
    let d = builder.dim();
    let dual = s.dual();
    let sum = grid.try_integrate_matrix(d, |i, pt| {
        let f = samples(i, pt)?;
        let kernel = builder.kernel(dual, pt)?;
        Ok(kernel.into_matrix() * Complex64::new(f, 0.0))
    })?;
    Ok(finish_recovery(sum, builder))
}

/// Exact round trip: samples `f^{(+s)}_ρ` on the grid and reconstructs with
/// `F^{(-s)}`, sharing the coherent-state moments between the two kernels.
pub fn round_trip(
    rho: &DensityMatrix,
    n: usize,
    m: usize,
    s: SOrder,
    grid: &QuadratureGrid,
) -> Result<Recovery> {
    let builder = KernelBuilder::new(n, m)?;
    round_trip_with_builder(rho, &builder, s, grid)
}

pub fn round_trip_with_builder(
    rho: &DensityMatrix,
    builder: &KernelBuilder,
    s: SOrder,
    grid: &QuadratureGrid,
) -> Result<Recovery> {
    if rho.dim() != builder.dim() {
        return Err(Error::DimensionMismatch {
            context: "density matrix",
            expected: builder.dim(),
            actual: rho.dim(),
        });
    }
    let d = builder.dim();
    let sum = grid.try_integrate_matrix(d, |_, pt| {
        let moments = builder.moments(pt)?;
        let f = trace_product(rho.matrix(), builder.kernel_from_moments(s, &moments).matrix()).re;
        let kernel = builder.kernel_from_moments(s.dual(), &moments);
        Ok(kernel.into_matrix() * Complex64::new(f, 0.0))
    })?;
    Ok(finish_recovery(sum, builder))
}

fn finish_recovery(sum: CMatrix, builder: &KernelBuilder) -> Recovery {
    let matrix = hermitize(&sum.scale(normalization_constant(builder.n(), builder.m())));
    let trace_error = (matrix.trace() - Complex64::new(1.0, 0.0)).norm();
    let min_eigenvalue = hermitian_eigenvalues(&matrix)[0];
    Recovery {
        matrix,
        trace_error,
        min_eigenvalue,
        positivity_warning: min_eigenvalue < RECOVERY_POSITIVITY_FLOOR,
    }
}
