//! Generalized SU(N) generators in the symmetric representation labelled by `M`.
//!
//! Basis states are occupation tuples `|m_1, …, m_N⟩` with `Σ m_k = M`, and the
//! generators are built from the number-conserving ladder operators
//! `J(a, b) = a_a† a_b`, which move one quantum from mode `b` to mode `a` with
//! amplitude `√((m_a + 1) m_b)`. For `M = 1` the construction reduces to the
//! generalized Gell-Mann matrices.
//!
//! Generator index scheme (1-based `k`): for every column label `b = 2..=N`
//! the slots `(b-1)², …, b² - 1` hold the symmetric and antisymmetric
//! off-diagonal pairs `(a, b)`, `a = 1..b`, followed by the diagonal generator
//! with label `c = b - 1` at slot `(c + 1)² - 1`.

use crate::error::{Error, Result};
use crate::linalg::{trace_product, CMatrix, CVector, I};
use num_complex::Complex64;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};

/// Binomial coefficient, exact for the small arguments used here.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

pub(crate) fn check_rep(n: usize, m: usize) -> Result<()> {
    if n < 2 || m < 1 {
        Err(Error::InvalidRepresentation { n, m })
    } else {
        Ok(())
    }
}

/// Dimension `d = C(N + M - 1, M)` of the symmetric representation.
pub fn rep_dimension(n: usize, m: usize) -> Result<usize> {
    check_rep(n, m)?;
    Ok(binomial(n + m - 1, m))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct BasisState {
    occupations: Vec<usize>,
}

impl BasisState {
    pub fn occupations(&self) -> &[usize] {
        &self.occupations
    }

    pub fn total(&self) -> usize {
        self.occupations.iter().sum()
    }
}

/// Ordered occupation basis. `(M, 0, …, 0)` comes first and the lowest-weight
/// state `(0, …, 0, M)` last.
#[derive(Debug, Clone)]
pub struct RepBasis {
    n: usize,
    m: usize,
    states: Vec<BasisState>,
    index: HashMap<Vec<usize>, usize>,
}

impl RepBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[BasisState] {
        &self.states
    }

    pub fn index_of(&self, occupations: &[usize]) -> Option<usize> {
        self.index.get(occupations).copied()
    }
}

fn fill_states(remaining: usize, slots: usize, prefix: &mut Vec<usize>, out: &mut Vec<BasisState>) {
    if slots == 1 {
        prefix.push(remaining);
        out.push(BasisState {
            occupations: prefix.clone(),
        });
        prefix.pop();
        return;
    }
    for first in (0..=remaining).rev() {
        prefix.push(first);
        fill_states(remaining - first, slots - 1, prefix, out);
        prefix.pop();
    }
}

/// Enumerates all occupation tuples of `n` modes holding `m` quanta in
/// reverse-lexicographic (descending) order.
pub fn build_basis(n: usize, m: usize) -> Result<RepBasis> {
    check_rep(n, m)?;
    let mut states = Vec::with_capacity(binomial(n + m - 1, m));
    fill_states(m, n, &mut Vec::with_capacity(n), &mut states);
    let index = states
        .iter()
        .enumerate()
        .map(|(i, s)| (s.occupations.clone(), i))
        .collect();
    Ok(RepBasis { n, m, states, index })
}

/// Which family a generator belongs to. Labels are 1-based, `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GeneratorKind {
    #[serde(rename = "offdiag-sym")]
    Symmetric { a: usize, b: usize },
    #[serde(rename = "offdiag-antisym")]
    Antisymmetric { a: usize, b: usize },
    Diagonal { c: usize },
}

impl GeneratorKind {
    /// 1-based slot `k` of this generator.
    pub fn index(self) -> usize {
        match self {
            GeneratorKind::Symmetric { a, b } => (b - 1) * (b - 1) + 2 * (a - 1),
            GeneratorKind::Antisymmetric { a, b } => (b - 1) * (b - 1) + 2 * (a - 1) + 1,
            GeneratorKind::Diagonal { c } => (c + 1) * (c + 1) - 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            GeneratorKind::Symmetric { .. } => "offdiag-sym",
            GeneratorKind::Antisymmetric { .. } => "offdiag-antisym",
            GeneratorKind::Diagonal { .. } => "diagonal",
        }
    }
}

/// The `N² - 1` Hermitian traceless generators `Λ_{N,M}(k)` as dense `d × d` matrices.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    basis: RepBasis,
    matrices: Vec<CMatrix>,
    kinds: Vec<GeneratorKind>,
}

impl GeneratorSet {
    pub fn n(&self) -> usize {
        self.basis.n
    }

    pub fn m(&self) -> usize {
        self.basis.m
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn basis(&self) -> &RepBasis {
        &self.basis
    }

    pub fn matrices(&self) -> &[CMatrix] {
        &self.matrices
    }

    pub fn kinds(&self) -> &[GeneratorKind] {
        &self.kinds
    }

    /// Generator with 1-based index `k`.
    pub fn get(&self, k: usize) -> &CMatrix {
        &self.matrices[k - 1]
    }

    pub fn kind(&self, k: usize) -> GeneratorKind {
        self.kinds[k - 1]
    }

    pub fn symmetric(&self, a: usize, b: usize) -> &CMatrix {
        self.get(GeneratorKind::Symmetric { a, b }.index())
    }

    pub fn antisymmetric(&self, a: usize, b: usize) -> &CMatrix {
        self.get(GeneratorKind::Antisymmetric { a, b }.index())
    }

    pub fn diagonal(&self, c: usize) -> &CMatrix {
        self.get(GeneratorKind::Diagonal { c }.index())
    }

    /// `Tr[Λ(i) Λ(i)] = (2M / (N + 1)) · C(N + M, M)`.
    pub fn trace_normalization(&self) -> f64 {
        let (n, m) = (self.n(), self.m());
        2.0 * m as f64 / (n as f64 + 1.0) * binomial(n + m, m) as f64
    }

    /// Real expectation values `⟨v|Λ(k)|v⟩` for every generator, in index order.
    pub fn expectations(&self, v: &CVector) -> Vec<f64> {
        self.matrices
            .iter()
            .map(|g| v.dotc(&(g * v)).re)
            .collect()
    }

    /// `Σ_k c_k Λ(k)`.
    pub fn combine(&self, coefficients: &[f64]) -> CMatrix {
        let d = self.dim();
        let mut out = CMatrix::zeros(d, d);
        for (g, &c) in self.matrices.iter().zip(coefficients) {
            if c != 0.0 {
                out += g.scale(c);
            }
        }
        out
    }
}

/// `a_a† a_b` on the occupation basis (0-based modes).
fn ladder(basis: &RepBasis, a: usize, b: usize) -> CMatrix {
    let d = basis.dim();
    let mut out = CMatrix::zeros(d, d);
    for (col, state) in basis.states.iter().enumerate() {
        let occ = &state.occupations;
        if occ[b] == 0 {
            continue;
        }
        let amplitude = (((occ[a] + 1) * occ[b]) as f64).sqrt();
        let mut target = occ.clone();
        target[a] += 1;
        target[b] -= 1;
        let row = basis.index[&target];
        out[(row, col)] += Complex64::new(amplitude, 0.0);
    }
    out
}

/// Diagonal generator with 1-based label `c`.
fn cartan(basis: &RepBasis, c: usize) -> CMatrix {
    let d = basis.dim();
    let norm = (2.0 / (c * (c + 1)) as f64).sqrt();
    let mut out = CMatrix::zeros(d, d);
    for (i, state) in basis.states.iter().enumerate() {
        let occ = &state.occupations;
        let lower: usize = occ[..c].iter().sum();
        let weight = lower as f64 - (c * occ[c]) as f64;
        out[(i, i)] = Complex64::new(norm * weight, 0.0);
    }
    out
}

pub fn build_generators(n: usize, m: usize) -> Result<GeneratorSet> {
    let basis = build_basis(n, m)?;
    let d = basis.dim();
    let count = n * n - 1;
    let mut matrices = vec![CMatrix::zeros(d, d); count];
    let mut kinds = vec![GeneratorKind::Diagonal { c: 1 }; count];

    for b in 2..=n {
        for a in 1..b {
            let raise = ladder(&basis, a - 1, b - 1);
            let lower = ladder(&basis, b - 1, a - 1);
            let sym = GeneratorKind::Symmetric { a, b };
            let anti = GeneratorKind::Antisymmetric { a, b };
            matrices[sym.index() - 1] = &raise + &lower;
            matrices[anti.index() - 1] = (&raise - &lower) * (-I);
            kinds[sym.index() - 1] = sym;
            kinds[anti.index() - 1] = anti;
        }
        let diag = GeneratorKind::Diagonal { c: b - 1 };
        matrices[diag.index() - 1] = cartan(&basis, b - 1);
        kinds[diag.index() - 1] = diag;
    }

    Ok(GeneratorSet {
        basis,
        matrices,
        kinds,
    })
}

/// Real structure constants `f_ijk` under the convention `[Λ(i), Λ(j)] = c f_ijk Λ(k)`.
/// Indices are 1-based; entries with `|f| < 1e-12` are not stored.
#[derive(Debug, Clone)]
pub struct StructureConstants {
    scale: Complex64,
    entries: BTreeMap<(usize, usize, usize), f64>,
}

impl StructureConstants {
    pub fn scale(&self) -> Complex64 {
        self.scale
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.entries.get(&(i, j, k)).copied().unwrap_or(0.0)
    }

    pub fn entries(&self) -> &BTreeMap<(usize, usize, usize), f64> {
        &self.entries
    }

    /// `c Σ_k f_ijk Λ(k)`, the commutator rebuilt from the table.
    pub fn commutator(&self, gens: &GeneratorSet, i: usize, j: usize) -> CMatrix {
        let d = gens.dim();
        let mut out = CMatrix::zeros(d, d);
        for k in 1..=gens.len() {
            let f = self.get(i, j, k);
            if f != 0.0 {
                out += gens.get(k) * (self.scale * f);
            }
        }
        out
    }
}

pub const DEFAULT_STRUCTURE_SCALE: Complex64 = Complex64::new(0.0, 2.0);

/// `f_ijk = Tr[[Λ(i), Λ(j)] Λ(k)] / (c · T)` with `T` the generator trace normalization.
///
/// The scale must be purely imaginary so the constants come out real.
pub fn structure_constants(gens: &GeneratorSet, scale: Complex64) -> Result<StructureConstants> {
    if scale.norm() == 0.0 || scale.re.abs() > 1e-15 * scale.norm() {
        return Err(Error::Domain(format!(
            "structure-constant scale must be nonzero and purely imaginary, got {scale}"
        )));
    }
    let count = gens.len();
    let denom = scale * gens.trace_normalization();
    let mut entries = BTreeMap::new();
    for i in 1..=count {
        for j in (i + 1)..=count {
            let comm = gens.get(i) * gens.get(j) - gens.get(j) * gens.get(i);
            for k in 1..=count {
                let f = (trace_product(&comm, gens.get(k)) / denom).re;
                if f.abs() >= 1e-12 {
                    entries.insert((i, j, k), f);
                    entries.insert((j, i, k), -f);
                }
            }
        }
    }
    Ok(StructureConstants { scale, entries })
}

/// Symmetric product of two Bloch vectors in the fundamental representation,
/// `(x ⋆ y)_k = √(N(N-1)/2) / (N-2) · d_ijk x_i y_j` with
/// `d_ijk = ¼ Tr[{Λ(i), Λ(j)} Λ(k)]`. Pure states satisfy `n ⋆ n = n`.
pub fn star_product(x: &[f64], y: &[f64], gens: &GeneratorSet) -> Result<Vec<f64>> {
    let n = gens.n();
    if gens.m() != 1 {
        return Err(Error::Domain(format!(
            "star product is defined for the fundamental representation only (m = {})",
            gens.m()
        )));
    }
    if n < 3 {
        return Err(Error::Domain(
            "star product prefactor is singular for N = 2".to_string(),
        ));
    }
    for v in [x, y] {
        if v.len() != gens.len() {
            return Err(Error::DimensionMismatch {
                context: "star product",
                expected: gens.len(),
                actual: v.len(),
            });
        }
    }
    let a = gens.combine(x);
    let b = gens.combine(y);
    let anti = &a * &b + &b * &a;
    let nf = n as f64;
    let prefactor = (nf * (nf - 1.0) / 2.0).sqrt() / (nf - 2.0) / 4.0;
    Ok(gens
        .matrices()
        .iter()
        .map(|g| prefactor * trace_product(&anti, g).re)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_residual, max_abs_diff};

    fn matrix_from_pairs(d: usize, entries: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_row_iterator(d, d, entries.iter().map(|&(re, im)| Complex64::new(re, im)))
    }

    #[test]
    fn dimensions() {
        assert_eq!(rep_dimension(2, 1).unwrap(), 2);
        assert_eq!(rep_dimension(3, 1).unwrap(), 3);
        assert_eq!(rep_dimension(2, 2).unwrap(), 3);
        assert_eq!(rep_dimension(4, 2).unwrap(), 10);
        assert!(matches!(
            rep_dimension(1, 1),
            Err(Error::InvalidRepresentation { .. })
        ));
        assert!(rep_dimension(3, 0).is_err());
    }

    #[test]
    fn dimension_matches_enumeration() {
        // brute force: count all tuples in [0, m]^n summing to m
        for n in 2..=5 {
            for m in 1usize..=3 {
                let mut count = 0;
                let total = (m + 1).pow(n as u32);
                for code in 0..total {
                    let mut c = code;
                    let mut sum = 0;
                    for _ in 0..n {
                        sum += c % (m + 1);
                        c /= m + 1;
                    }
                    if sum == m {
                        count += 1;
                    }
                }
                assert_eq!(rep_dimension(n, m).unwrap(), count, "n={n} m={m}");
                assert_eq!(build_basis(n, m).unwrap().dim(), count);
            }
        }
    }

    #[test]
    fn basis_ordering() {
        let b = build_basis(2, 2).unwrap();
        let occ: Vec<&[usize]> = b.states().iter().map(|s| s.occupations()).collect();
        assert_eq!(occ, vec![&[2, 0][..], &[1, 1], &[0, 2]]);

        let b = build_basis(3, 1).unwrap();
        let occ: Vec<&[usize]> = b.states().iter().map(|s| s.occupations()).collect();
        assert_eq!(occ, vec![&[1, 0, 0][..], &[0, 1, 0], &[0, 0, 1]]);

        let b = build_basis(4, 1).unwrap();
        assert_eq!(b.dim(), 4);
        assert_eq!(b.states().last().unwrap().occupations(), &[0, 0, 0, 1]);

        let b = build_basis(3, 3).unwrap();
        assert_eq!(b.states()[0].occupations(), &[3, 0, 0]);
        assert!(b.states().iter().all(|s| s.total() == 3));
    }

    #[test]
    fn pauli_matrices() {
        let g = build_generators(2, 1).unwrap();
        let sx = matrix_from_pairs(2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)]);
        let sy = matrix_from_pairs(2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)]);
        let sz = matrix_from_pairs(2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]);
        assert!(max_abs_diff(g.get(1), &sx) < 1e-15);
        assert!(max_abs_diff(g.get(2), &sy) < 1e-15);
        assert!(max_abs_diff(g.get(3), &sz) < 1e-15);
        assert_eq!(g.trace_normalization(), 2.0);
    }

    #[test]
    fn spin_one_trace_normalization() {
        let g = build_generators(2, 2).unwrap();
        assert_eq!(g.trace_normalization(), 8.0);
        for i in 1..=3 {
            for j in 1..=3 {
                let t = trace_product(g.get(i), g.get(j));
                let expect = if i == j { 8.0 } else { 0.0 };
                assert!((t - expect).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn index_scheme_and_counts() {
        for n in 2..=5 {
            let g = build_generators(n, 1).unwrap();
            assert_eq!(g.len(), n * n - 1);
            for (k, kind) in g.kinds().iter().enumerate() {
                assert_eq!(kind.index(), k + 1);
            }
            let diag = g
                .kinds()
                .iter()
                .filter(|k| matches!(k, GeneratorKind::Diagonal { .. }))
                .count();
            assert_eq!(diag, n - 1);
            assert_eq!(g.len() - diag, n * (n - 1));
        }
    }

    #[test]
    fn hermitian_and_traceless() {
        for n in 2..=4 {
            for m in 1..=2 {
                let g = build_generators(n, m).unwrap();
                for mat in g.matrices() {
                    assert!(hermiticity_residual(mat) < 1e-14);
                    assert!(mat.trace().norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn su2_structure_constants_are_levi_civita() {
        let g = build_generators(2, 1).unwrap();
        let f = structure_constants(&g, DEFAULT_STRUCTURE_SCALE).unwrap();
        assert!((f.get(1, 2, 3) - 1.0).abs() < 1e-12);
        assert!((f.get(2, 3, 1) - 1.0).abs() < 1e-12);
        assert!((f.get(2, 1, 3) + 1.0).abs() < 1e-12);
        assert_eq!(f.get(1, 1, 3), 0.0);
    }

    #[test]
    fn su3_structure_constants() {
        let g = build_generators(3, 1).unwrap();
        let f = structure_constants(&g, DEFAULT_STRUCTURE_SCALE).unwrap();
        // brute force with the explicit Gell-Mann matrices: f_ijk = Tr([λi,λj]λk)/(4i)
        let brute = |i: usize, j: usize, k: usize| {
            let (a, b, c) = (g.get(i), g.get(j), g.get(k));
            let comm = a * b - b * a;
            (trace_product(&comm, c) / Complex64::new(0.0, 4.0)).re
        };
        assert!((f.get(1, 2, 3) - 1.0).abs() < 1e-12);
        assert!((f.get(4, 5, 8) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((brute(4, 5, 8) - 3f64.sqrt() / 2.0).abs() < 1e-12);
        assert!((f.get(1, 4, 7) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn structure_constants_reject_real_scale() {
        let g = build_generators(2, 1).unwrap();
        assert!(structure_constants(&g, Complex64::new(2.0, 0.0)).is_err());
        assert!(structure_constants(&g, Complex64::new(0.0, 0.0)).is_err());
        let f = structure_constants(&g, Complex64::new(0.0, -1.0)).unwrap();
        assert!((f.get(1, 2, 3) + 2.0).abs() < 1e-12);
    }

    #[test]
    fn star_product_domain() {
        let g2 = build_generators(2, 1).unwrap();
        assert!(star_product(&[0.0; 3], &[0.0; 3], &g2).is_err());
        let g32 = build_generators(3, 2).unwrap();
        assert!(star_product(&[0.0; 8], &[0.0; 8], &g32).is_err());
        let g3 = build_generators(3, 1).unwrap();
        assert_eq!(star_product(&[0.0; 8], &[0.3; 8], &g3).unwrap(), vec![0.0; 8]);
        assert!(star_product(&[0.0; 7], &[0.0; 8], &g3).is_err());
    }

    #[test]
    fn star_product_is_symmetric() {
        let g = build_generators(4, 1).unwrap();
        let x: Vec<f64> = (0..15).map(|k| (k as f64 * 0.37).sin()).collect();
        let y: Vec<f64> = (0..15).map(|k| (k as f64 * 1.13).cos()).collect();
        let xy = star_product(&x, &y, &g).unwrap();
        let yx = star_product(&y, &x, &g).unwrap();
        for (a, b) in xy.iter().zip(&yx) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
