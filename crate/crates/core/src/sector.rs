//! Boolean sectors of `L(H)` generated by orthonormal bases: sector
//! quasipoints, diagonal operators and their Gelfand transform, state
//! measures, and the bridge to classical spectral families on `Q(𝔹)`.

use nalgebra::Complex;
use thiserror::Error;

use crate::bitset::BitSet;
use crate::classical::{ClassicalError, FiniteFamily, FiniteTopology};
use crate::hilbert::{
    c, check_hermitian, hermitian_eigensystem, identity, op_norm, CMatrix, CVector, HilbertError, Subspace, C64,
};
use crate::lattice::FiniteLattice;
use crate::quantum::{spectral_family_of, QuantumError, QuantumSpectralFamily};
use crate::tolerance::Tolerances;

/// Eigenvalues of a state may dip this far below zero.
pub const POSITIVITY_TOL: f64 = 1e-10;
/// Tolerance for weights and traces equal to one.
pub const WEIGHT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SectorError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error("basis is not unitary (deviation {0:e})")]
    NotOrthonormal(f64),
    #[error("operator is not Hermitian")]
    NotHermitian,
    #[error("operator is not diagonal in the sector basis (off-diagonal norm {0:e})")]
    NotInSector(f64),
    #[error("sectors differ")]
    SectorMismatch,
    #[error("state is not positive (smallest eigenvalue {0:e})")]
    NotPositive(f64),
    #[error("jump {0} is not adapted to the sector")]
    NotAdapted(usize),
    #[error("not a spectral family on the sector's quasipoints: {0}")]
    NotASpectralFamily(String),
    #[error("atom {index} out of range for a sector of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
}

/// The Boolean sector of an orthonormal basis `e_1..e_n`: the subspaces
/// `U_S = span{e_i : i ∈ S}`.
#[derive(Debug, Clone)]
pub struct BooleanSector {
    basis: CMatrix,
    lines: Vec<Subspace>,
}

impl BooleanSector {
    /// `b` must be unitary within `τ_orth`.
    pub fn from_basis(b: CMatrix, tol: &Tolerances) -> Result<Self, SectorError> {
        if b.nrows() != b.ncols() {
            return Err(HilbertError::NotSquare { rows: b.nrows(), cols: b.ncols() }.into());
        }
        let n = b.ncols();
        let deviation = op_norm(&(b.adjoint() * &b - identity(n)));
        if deviation > tol.orth {
            return Err(SectorError::NotOrthonormal(deviation));
        }
        let lines = (0..n)
            .map(|i| Subspace::line(&b.column(i).into_owned()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(BooleanSector { basis: b, lines })
    }

    pub fn standard(n: usize) -> Self {
        Self::from_basis(identity(n), &Tolerances::default()).expect("identity is unitary")
    }

    /// A sector containing the spectral family of `A`. Inside each eigenspace
    /// the basis is the Gram–Schmidt orthonormalization of the projected
    /// standard basis vectors, taken in index order.
    pub fn of_operator(a: &CMatrix, tol: &Tolerances) -> Result<Self, SectorError> {
        let system = hermitian_eigensystem(a, tol)?;
        let n = a.nrows();
        let mut columns: Vec<CVector> = Vec::with_capacity(n);
        for e in &system {
            let p = e.space.projector();
            let mut chosen: Vec<CVector> = Vec::new();
            for i in 0..n {
                if chosen.len() == e.space.dim() {
                    break;
                }
                let mut v: CVector = p.column(i).into_owned();
                for q in &chosen {
                    let proj = q * (q.adjoint() * &v)[(0, 0)];
                    v -= proj;
                }
                let norm = v.norm();
                if norm > 1e-6 {
                    chosen.push(v / c(norm, 0.0));
                }
            }
            columns.extend(chosen);
        }
        let b = CMatrix::from_columns(&columns);
        Self::from_basis(b, tol)
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn line(&self, i: usize) -> &Subspace {
        &self.lines[i]
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.basis.column(i).into_owned()
    }

    /// `U_S`.
    pub fn element(&self, s: BitSet) -> Subspace {
        let idx: Vec<usize> = s.iter().collect();
        let frame = CMatrix::from_fn(self.len(), idx.len(), |r, k| self.basis[(r, idx[k])]);
        Subspace::from_frame(frame, &Tolerances::default()).expect("basis columns are orthonormal")
    }

    /// The `S` with `U = U_S`, when every `e_i` lies in `U` or in `U^⊥`.
    pub fn subset_of(&self, u: &Subspace, tol: &Tolerances) -> Option<BitSet> {
        if u.ambient_dim() != self.len() {
            return None;
        }
        let p = u.projector();
        let mut s = BitSet::empty();
        for i in 0..self.len() {
            let e = self.vector(i);
            let inside = (&p * &e).norm();
            if (inside - 1.0).abs() <= tol.eq && u.contains_vector(&e, tol) {
                s = s.with(i);
            } else if inside > tol.eq {
                return None;
            }
        }
        (s.len() == u.dim()).then_some(s)
    }

    pub fn contains(&self, u: &Subspace, tol: &Tolerances) -> bool {
        self.subset_of(u, tol).is_some()
    }

    /// The sector as the powerset lattice on its atoms.
    pub fn as_lattice(&self) -> FiniteLattice {
        FiniteLattice::powerset(self.len())
    }

    /// `perm[i]` is the index in `other` of this sector's `i`-th line.
    pub fn alignment(&self, other: &BooleanSector, tol: &Tolerances) -> Option<Vec<usize>> {
        if self.len() != other.len() {
            return None;
        }
        let mut used = BitSet::empty();
        let mut perm = Vec::with_capacity(self.len());
        for l in &self.lines {
            let j = (0..other.len()).find(|&j| !used.contains(j) && other.lines[j].approx_eq(l, tol))?;
            used = used.with(j);
            perm.push(j);
        }
        Some(perm)
    }

    /// Same basis lines, in any order and with any phases.
    pub fn same_sector(&self, other: &BooleanSector, tol: &Tolerances) -> bool {
        self.alignment(other, tol).is_some()
    }

    /// The discrete space `Q(𝔹)` with points `β1..βn`.
    pub fn quasipoint_space(&self) -> FiniteTopology {
        let n = self.len();
        let names = (1..=n).map(|i| format!("β{i}")).collect();
        FiniteTopology::new(names, (0..(1u64 << n)).map(BitSet).collect()).expect("discrete topology")
    }
}

/// `β_i = {U_S : i ∈ S}`.
#[derive(Debug, Clone)]
pub struct SectorQuasipoint {
    sector: BooleanSector,
    atom: usize,
}

impl SectorQuasipoint {
    pub fn new(sector: &BooleanSector, atom: usize) -> Result<Self, SectorError> {
        if atom >= sector.len() {
            return Err(SectorError::IndexOutOfRange { index: atom, size: sector.len() });
        }
        Ok(SectorQuasipoint { sector: sector.clone(), atom })
    }

    pub fn atom(&self) -> usize {
        self.atom
    }

    pub fn sector(&self) -> &BooleanSector {
        &self.sector
    }

    pub fn contains_subset(&self, s: BitSet) -> bool {
        s.contains(self.atom)
    }

    /// Membership of a sector element given as a subspace.
    pub fn contains(&self, u: &Subspace, tol: &Tolerances) -> Option<bool> {
        self.sector.subset_of(u, tol).map(|s| self.contains_subset(s))
    }

    /// The smallest member, `ℂe_i`.
    pub fn minimal_element(&self) -> &Subspace {
        self.sector.line(self.atom)
    }
}

pub fn sector_quasipoints(sector: &BooleanSector) -> Vec<SectorQuasipoint> {
    (0..sector.len()).map(|i| SectorQuasipoint { sector: sector.clone(), atom: i }).collect()
}

/// `Σ_i c_i e_i e_i*`, an element of the diagonal algebra of a sector.
#[derive(Debug, Clone)]
pub struct SectorOperator {
    sector: BooleanSector,
    coefficients: Vec<C64>,
}

impl SectorOperator {
    pub fn new(sector: &BooleanSector, coefficients: Vec<C64>) -> Result<Self, SectorError> {
        if coefficients.len() != sector.len() {
            return Err(HilbertError::DimensionMismatch { left: sector.len(), right: coefficients.len() }.into());
        }
        Ok(SectorOperator { sector: sector.clone(), coefficients })
    }

    pub fn real(sector: &BooleanSector, values: &[f64]) -> Result<Self, SectorError> {
        Self::new(sector, values.iter().map(|&v| c(v, 0.0)).collect())
    }

    /// `P_{U_S}`.
    pub fn projector(sector: &BooleanSector, s: BitSet) -> Self {
        let coefficients = (0..sector.len()).map(|i| if s.contains(i) { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect();
        SectorOperator { sector: sector.clone(), coefficients }
    }

    pub fn identity(sector: &BooleanSector) -> Self {
        Self::projector(sector, BitSet::full(sector.len()))
    }

    /// `Σ_k a_k P_{U_{S_k}}`.
    pub fn from_terms(sector: &BooleanSector, terms: &[(C64, BitSet)]) -> Self {
        let mut coefficients = vec![c(0.0, 0.0); sector.len()];
        for &(a, s) in terms {
            for i in s.iter() {
                coefficients[i] += a;
            }
        }
        SectorOperator { sector: sector.clone(), coefficients }
    }

    /// Reads `A` in the sector basis; fails unless `A` is diagonal there.
    pub fn from_matrix(sector: &BooleanSector, a: &CMatrix, tol: &Tolerances) -> Result<Self, SectorError> {
        if a.nrows() != sector.len() || a.ncols() != sector.len() {
            return Err(HilbertError::DimensionMismatch { left: sector.len(), right: a.nrows() }.into());
        }
        let local = sector.basis.adjoint() * a * &sector.basis;
        let coefficients: Vec<C64> = (0..sector.len()).map(|i| local[(i, i)]).collect();
        let mut off = local;
        for i in 0..sector.len() {
            off[(i, i)] = c(0.0, 0.0);
        }
        let residual = op_norm(&off);
        if residual > tol.eq * op_norm(a).max(1.0) {
            return Err(SectorError::NotInSector(residual));
        }
        Ok(SectorOperator { sector: sector.clone(), coefficients })
    }

    pub fn sector(&self) -> &BooleanSector {
        &self.sector
    }

    pub fn coefficients(&self) -> &[C64] {
        &self.coefficients
    }

    pub fn to_matrix(&self) -> CMatrix {
        let d = CMatrix::from_diagonal(&CVector::from_column_slice(&self.coefficients));
        &self.sector.basis * d * self.sector.basis.adjoint()
    }

    /// `max_i |c_i|`.
    pub fn norm(&self) -> f64 {
        self.coefficients.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: &Tolerances) -> bool {
        self.coefficients.iter().all(|z| z.im.abs() <= tol.value)
    }

    pub fn product(&self, other: &Self) -> Self {
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a * b).collect();
        SectorOperator { sector: self.sector.clone(), coefficients }
    }

    pub fn sum(&self, other: &Self) -> Self {
        let coefficients = self.coefficients.iter().zip(&other.coefficients).map(|(a, b)| a + b).collect();
        SectorOperator { sector: self.sector.clone(), coefficients }
    }

    /// The coefficient on the line that is `atom` in `sector`.
    fn coefficient_in(&self, sector: &BooleanSector, atom: usize, tol: &Tolerances) -> Result<C64, SectorError> {
        let perm = sector.alignment(&self.sector, tol).ok_or(SectorError::SectorMismatch)?;
        Ok(self.coefficients[perm[atom]])
    }
}

/// Pairwise disjoint cells with summed coefficients: atoms are grouped by
/// which `S_k` contain them; the cell lying in every complement is omitted.
/// Cells are ordered by their smallest atom.
pub fn orthogonalize_representation(n: usize, terms: &[(C64, BitSet)]) -> Vec<(C64, BitSet)> {
    let mut cells: Vec<(BitSet, BitSet)> = Vec::new();
    for j in 0..n {
        let signature: BitSet = (0..terms.len()).filter(|&k| terms[k].1.contains(j)).collect();
        if signature.is_empty() {
            continue;
        }
        match cells.iter_mut().find(|(sig, _)| *sig == signature) {
            Some((_, cell)) => *cell = cell.with(j),
            None => cells.push((signature, BitSet::singleton(j))),
        }
    }
    cells
        .into_iter()
        .map(|(sig, cell)| (sig.iter().map(|k| terms[k].0).sum::<C64>(), cell))
        .collect()
}

/// `τ_β(T)`, the coefficient of `T` at the atom of `β`.
pub fn character(beta: &SectorQuasipoint, t: &SectorOperator, tol: &Tolerances) -> Result<C64, SectorError> {
    t.coefficient_in(&beta.sector, beta.atom, tol)
}

/// `β_i ↦ τ_{β_i}(T)` over the quasipoints of `T`'s own sector.
pub fn gelfand_transform(t: &SectorOperator) -> Vec<C64> {
    t.coefficients.clone()
}

/// `f_A^𝔹(β_i) = inf{λ : σ_A(λ) ∈ β_i}`, read off the spectral family of the
/// matrix rather than the coefficients.
pub fn sector_observable_function(a: &SectorOperator, tol: &Tolerances) -> Result<Vec<f64>, SectorError> {
    if !a.is_hermitian(tol) {
        return Err(SectorError::NotHermitian);
    }
    let m = a.to_matrix();
    let herm = (&m + m.adjoint()) * c(0.5, 0.0);
    let sigma = spectral_family_of(&herm, tol)?;
    let n = a.sector.len();
    (0..n)
        .map(|i| {
            let e = a.sector.vector(i);
            sigma
                .jumps()
                .iter()
                .find(|j| j.subspace.contains_vector(&e, tol))
                .map(|j| j.lambda)
                .ok_or(SectorError::NotInSector(f64::INFINITY))
        })
        .collect()
}

/// The measure `μ_ρ^𝔹` as atom weights `w_i = ⟨ρe_i, e_i⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateMeasure {
    pub weights: Vec<f64>,
}

impl StateMeasure {
    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn is_probability(&self) -> bool {
        (self.total() - 1.0).abs() <= WEIGHT_TOL
    }

    /// `∫ φ dμ` for `φ` given by its values on `Q(𝔹)`.
    pub fn integrate(&self, phi: &[f64]) -> f64 {
        self.weights.iter().zip(phi).map(|(w, p)| w * p).sum()
    }

    /// `μ(Q_{U_S})`.
    pub fn measure_of(&self, s: BitSet) -> f64 {
        s.iter().map(|i| self.weights[i]).sum()
    }
}

pub fn state_measure(rho: &CMatrix, sector: &BooleanSector, tol: &Tolerances) -> Result<StateMeasure, SectorError> {
    check_hermitian(rho, tol)?;
    if rho.nrows() != sector.len() {
        return Err(HilbertError::DimensionMismatch { left: sector.len(), right: rho.nrows() }.into());
    }
    let system = hermitian_eigensystem(rho, tol)?;
    let lowest = system.first().map_or(0.0, |e| e.value);
    if lowest < -POSITIVITY_TOL {
        return Err(SectorError::NotPositive(lowest));
    }
    let weights = (0..sector.len())
        .map(|i| {
            let e = sector.vector(i);
            (e.adjoint() * rho * &e)[(0, 0)].re
        })
        .collect();
    Ok(StateMeasure { weights })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointMeasure {
    pub atom: usize,
    /// `‖ρ − P_{ℂe_β}‖`.
    pub distance: f64,
}

/// `Some(β₀)` when exactly one weight is 1 and `ρ = P_{ℂe_{β₀}}` within `τ_eq`.
pub fn is_point_measure(
    mu: &StateMeasure,
    sector: &BooleanSector,
    rho: &CMatrix,
    tol: &Tolerances,
) -> Option<PointMeasure> {
    if (rho.trace().re - 1.0).abs() > WEIGHT_TOL {
        return None;
    }
    let ones: Vec<usize> = (0..mu.weights.len()).filter(|&i| (mu.weights[i] - 1.0).abs() <= WEIGHT_TOL).collect();
    let [atom] = ones[..] else { return None };
    let line = sector.line(atom);
    let distance = op_norm(&(rho - line.projector()));
    (distance <= tol.eq && sector.contains(line, tol)).then_some(PointMeasure { atom, distance })
}

/// `σ̂(λ) = ∧_{μ>λ} Q_{σ(μ)}(𝔹)` on the discrete space `Q(𝔹)`. The values of
/// a step family just above `λ` equal `σ(λ)`, so `σ̂` jumps where `σ` does,
/// to `Q_{σ(λ_k)} = {β_i : i ∈ S_k}`.
pub fn sector_bridge_family(
    sigma: &QuantumSpectralFamily,
    sector: &BooleanSector,
    tol: &Tolerances,
) -> Result<FiniteFamily, SectorError> {
    if sigma.ambient_dim() != sector.len() {
        return Err(HilbertError::DimensionMismatch { left: sector.len(), right: sigma.ambient_dim() }.into());
    }
    if sigma.is_generalized() || !sigma.domain().is_full() {
        return Err(QuantumError::GeneralizedFamily.into());
    }
    let jumps = sigma
        .jumps()
        .iter()
        .enumerate()
        .map(|(k, j)| sector.subset_of(&j.subspace, tol).map(|s| (j.lambda, s)).ok_or(SectorError::NotAdapted(k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(FiniteFamily::new(sector.quasipoint_space(), jumps)?)
}

/// The Hermitian `A` in the sector with `σ̂_A = τ`: `a_i = f_τ(β_i)`.
pub fn hermitian_from_classical(tau: &FiniteFamily, sector: &BooleanSector) -> Result<SectorOperator, SectorError> {
    if tau.topology().len() != sector.len() {
        return Err(SectorError::NotASpectralFamily(format!(
            "{} points for a sector of size {}",
            tau.topology().len(),
            sector.len()
        )));
    }
    if !tau.is_continuous() {
        return Err(SectorError::NotASpectralFamily("the family is not continuous".into()));
    }
    SectorOperator::real(sector, &tau.induced_function())
}

/// Real parts of a complex table, for comparisons with real functions.
pub fn real_parts(values: &[Complex<f64>]) -> Vec<f64> {
    values.iter().map(|z| z.re).collect()
}
