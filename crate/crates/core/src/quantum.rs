//! Spectral families in `L(H)`, their restrictions, observable functions on
//! lines and atomic quasipoints, spectra, germ values and operator germs.

use thiserror::Error;

use crate::hilbert::{
    c, hermitian_eigensystem, join, meet, op_norm, CMatrix, CVector, HilbertError, Subspace,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error("expected a line, got a subspace of dimension {0}")]
    NotALine(usize),
    #[error("thresholds must be finite and strictly increasing (at jump {0})")]
    ThresholdsNotIncreasing(usize),
    #[error("sublevel data is not monotone at jump {0}")]
    NotMonotone(usize),
    #[error("sublevel {index} is not a subspace: {source}")]
    SublevelNotSubspace { index: usize, source: HilbertError },
    #[error("jump {0} leaves the domain")]
    OutsideDomain(usize),
    #[error("the line is not inside the domain of both families")]
    LineOutsideDomain,
    #[error("vector has norm {0}, expected 1")]
    NotUnitVector(f64),
    #[error("family is generalized (its top value is not the whole domain)")]
    GeneralizedFamily,
    #[error("subspace is not inside the family's domain")]
    NotInDomain,
}

#[derive(Debug, Clone)]
pub struct Jump {
    pub lambda: f64,
    pub subspace: Subspace,
}

/// A right-continuous step map `λ ↦ σ(λ)` into the subspaces of `domain`:
/// zero below the first threshold, `subspace_i` on `[λ_i, λ_{i+1})`.
#[derive(Debug, Clone)]
pub struct QuantumSpectralFamily {
    ambient_dim: usize,
    domain: Subspace,
    jumps: Vec<Jump>,
}

impl QuantumSpectralFamily {
    /// Validates thresholds, strict growth of the subspaces, and containment
    /// in `domain`. A top value below `domain` is accepted and flagged.
    pub fn new(domain: Subspace, jumps: Vec<Jump>, tol: &Tolerances) -> Result<Self, QuantumError> {
        let n = domain.ambient_dim();
        let mut prev: Option<&Jump> = None;
        for (i, j) in jumps.iter().enumerate() {
            if j.subspace.ambient_dim() != n {
                return Err(HilbertError::DimensionMismatch { left: n, right: j.subspace.ambient_dim() }.into());
            }
            if !j.lambda.is_finite() || prev.is_some_and(|p| p.lambda >= j.lambda) {
                return Err(QuantumError::ThresholdsNotIncreasing(i));
            }
            let prev_dim = prev.map_or(0, |p| p.subspace.dim());
            if j.subspace.dim() <= prev_dim || prev.is_some_and(|p| !j.subspace.contains(&p.subspace, tol)) {
                return Err(QuantumError::NotMonotone(i));
            }
            if !domain.contains(&j.subspace, tol) {
                return Err(QuantumError::OutsideDomain(i));
            }
            prev = Some(j);
        }
        Ok(QuantumSpectralFamily { ambient_dim: n, domain, jumps })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    pub fn jumps(&self) -> &[Jump] {
        &self.jumps
    }

    /// Top value differs from the domain.
    pub fn is_generalized(&self) -> bool {
        let top = self.jumps.last().map_or(0, |j| j.subspace.dim());
        top != self.domain.dim()
    }

    /// `σ(λ)`.
    pub fn value_at(&self, lambda: f64) -> Subspace {
        self.jumps
            .iter()
            .rev()
            .find(|j| j.lambda <= lambda)
            .map_or_else(|| Subspace::zero(self.ambient_dim), |j| j.subspace.clone())
    }

    /// Same thresholds and subspaces within `τ_eq` and `τ_value`.
    pub fn approx_eq(&self, other: &Self, tol: &Tolerances) -> bool {
        self.ambient_dim == other.ambient_dim
            && self.domain.approx_eq(&other.domain, tol)
            && self.jumps.len() == other.jumps.len()
            && self.jumps.iter().zip(&other.jumps).all(|(a, b)| {
                (a.lambda - b.lambda).abs() <= tol.value && a.subspace.approx_eq(&b.subspace, tol)
            })
    }

    /// Re-expresses the family in an orthonormal basis of its domain.
    pub fn to_local_coordinates(&self, tol: &Tolerances) -> Result<QuantumSpectralFamily, QuantumError> {
        let f = self.domain.frame();
        let k = self.domain.dim();
        let local = |s: &Subspace| -> Result<Subspace, HilbertError> {
            Subspace::from_frame(f.adjoint() * s.frame(), tol)
        };
        let jumps = self
            .jumps
            .iter()
            .map(|j| Ok(Jump { lambda: j.lambda, subspace: local(&j.subspace)? }))
            .collect::<Result<Vec<_>, HilbertError>>()?;
        QuantumSpectralFamily::new(Subspace::full(k), jumps, tol)
    }

    /// `Σ λ_i (P_{σ(λ_i)} − P_{σ(λ_{i−1})})`.
    pub fn reconstruct_operator(&self) -> CMatrix {
        let n = self.ambient_dim;
        let mut out = CMatrix::zeros(n, n);
        let mut below = CMatrix::zeros(n, n);
        for j in &self.jumps {
            let p = j.subspace.projector();
            out += (&p - &below) * c(j.lambda, 0.0);
            below = p;
        }
        out
    }
}

/// `σ_A`, with jumps at the clustered eigenvalues.
pub fn spectral_family_of(a: &CMatrix, tol: &Tolerances) -> Result<QuantumSpectralFamily, QuantumError> {
    let system = hermitian_eigensystem(a, tol)?;
    let n = a.nrows();
    let mut acc = Subspace::zero(n);
    let mut jumps = Vec::with_capacity(system.len());
    for e in system {
        acc = join(&acc, &e.space, tol)?;
        jumps.push(Jump { lambda: e.value, subspace: acc.clone() });
    }
    QuantumSpectralFamily::new(Subspace::full(n), jumps, tol)
}

/// `λ ↦ σ(λ) ∩ U`, kept in ambient coordinates with domain `U`.
pub fn restrict_family(
    sigma: &QuantumSpectralFamily,
    u: &Subspace,
    tol: &Tolerances,
) -> Result<QuantumSpectralFamily, QuantumError> {
    if u.ambient_dim() != sigma.ambient_dim {
        return Err(HilbertError::DimensionMismatch { left: sigma.ambient_dim, right: u.ambient_dim() }.into());
    }
    if !sigma.domain.contains(u, tol) {
        return Err(QuantumError::NotInDomain);
    }
    let mut jumps: Vec<Jump> = Vec::new();
    for j in &sigma.jumps {
        let w = meet(&j.subspace, u, tol)?;
        if w.dim() > jumps.last().map_or(0, |p| p.subspace.dim()) {
            jumps.push(Jump { lambda: j.lambda, subspace: w });
        }
    }
    QuantumSpectralFamily::new(u.clone(), jumps, tol)
}

fn ensure_line(line: &Subspace) -> Result<(), QuantumError> {
    if line.dim() != 1 {
        return Err(QuantumError::NotALine(line.dim()));
    }
    Ok(())
}

/// `f_σ(ℂx) = inf{λ : ℂx ⊆ σ(λ)}`, with `inf ∅ = ∞`.
pub fn observable_value(sigma: &QuantumSpectralFamily, line: &Subspace, tol: &Tolerances) -> Result<f64, QuantumError> {
    ensure_line(line)?;
    Ok(sup_over_subspace(sigma, line, tol))
}

/// `inf{λ : U ⊆ σ(λ)}`. For a line this is `f_σ`; for larger `U` it is
/// `sup_{ℂx ⊆ U} f_σ(ℂx)`, since the sublevel sets are subspaces.
pub fn sup_over_subspace(sigma: &QuantumSpectralFamily, u: &Subspace, tol: &Tolerances) -> f64 {
    sigma
        .jumps
        .iter()
        .find(|j| j.subspace.contains(u, tol))
        .map_or(f64::INFINITY, |j| j.lambda)
}

/// The quasipoint `𝔅_{ℂx} = {U : ℂx ⊆ U}` of `L(H)`.
#[derive(Debug, Clone)]
pub struct AtomicQuasipoint {
    line: Subspace,
}

impl AtomicQuasipoint {
    pub fn new(line: Subspace) -> Result<Self, QuantumError> {
        ensure_line(&line)?;
        Ok(AtomicQuasipoint { line })
    }

    pub fn at_vector(x: &CVector) -> Result<Self, QuantumError> {
        Self::new(Subspace::line(x)?)
    }

    pub fn line(&self) -> &Subspace {
        &self.line
    }

    pub fn contains(&self, u: &Subspace, tol: &Tolerances) -> bool {
        u.contains(&self.line, tol)
    }
}

/// `inf{λ : σ(λ) ∈ 𝔅}`.
pub fn observable_at_quasipoint(sigma: &QuantumSpectralFamily, q: &AtomicQuasipoint, tol: &Tolerances) -> f64 {
    sup_over_subspace(sigma, &q.line, tol)
}

/// Sublevel data of an observable function: `f ≤ λ_i` exactly on the lines
/// in the range of `projector_i`.
#[derive(Debug, Clone)]
pub struct ObservableData {
    pub ambient_dim: usize,
    pub levels: Vec<(f64, CMatrix)>,
}

impl ObservableData {
    pub fn from_family(sigma: &QuantumSpectralFamily) -> Result<Self, QuantumError> {
        if sigma.is_generalized() {
            return Err(QuantumError::GeneralizedFamily);
        }
        Ok(ObservableData {
            ambient_dim: sigma.ambient_dim,
            levels: sigma.jumps.iter().map(|j| (j.lambda, j.subspace.projector())).collect(),
        })
    }
}

/// Reads sublevel data back as a spectral family on its top sublevel.
pub fn observable_to_spectral(data: &ObservableData, tol: &Tolerances) -> Result<QuantumSpectralFamily, QuantumError> {
    let n = data.ambient_dim;
    let mut jumps: Vec<Jump> = Vec::with_capacity(data.levels.len());
    for (index, (lambda, p)) in data.levels.iter().enumerate() {
        if p.nrows() != n {
            return Err(HilbertError::DimensionMismatch { left: n, right: p.nrows() }.into());
        }
        let subspace =
            Subspace::from_projector(p, tol).map_err(|source| QuantumError::SublevelNotSubspace { index, source })?;
        if let Some(prev) = jumps.last() {
            if !lambda.is_finite() || *lambda <= prev.lambda {
                return Err(QuantumError::ThresholdsNotIncreasing(index));
            }
            if !subspace.contains(&prev.subspace, tol) || subspace.dim() <= prev.subspace.dim() {
                return Err(QuantumError::NotMonotone(index));
            }
        }
        jumps.push(Jump { lambda: *lambda, subspace });
    }
    let domain = jumps.last().map_or_else(|| Subspace::zero(n), |j| j.subspace.clone());
    QuantumSpectralFamily::new(domain, jumps, tol)
}

/// The jump thresholds.
pub fn spectrum_of(sigma: &QuantumSpectralFamily) -> Vec<f64> {
    sigma.jumps.iter().map(|j| j.lambda).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GermComparison {
    pub equivalent: bool,
    /// `f_σ(𝔅)`.
    pub value: f64,
    /// `f_τ(𝔅)`.
    pub other: f64,
}

/// Compares `[σ]_𝔅` and `[τ]_𝔅` through their restrictions to the line of 𝔅.
pub fn germ_value(
    sigma: &QuantumSpectralFamily,
    tau: &QuantumSpectralFamily,
    q: &AtomicQuasipoint,
    tol: &Tolerances,
) -> Result<GermComparison, QuantumError> {
    if !sigma.domain.contains(&q.line, tol) || !tau.domain.contains(&q.line, tol) {
        return Err(QuantumError::LineOutsideDomain);
    }
    let rs = restrict_family(sigma, &q.line, tol)?;
    let rt = restrict_family(tau, &q.line, tol)?;
    let value = spectrum_of(&rs).first().copied().unwrap_or(f64::INFINITY);
    let other = spectrum_of(&rt).first().copied().unwrap_or(f64::INFINITY);
    Ok(GermComparison { equivalent: rs.approx_eq(&rt, tol), value, other })
}

/// `⟨Ax, x⟩` for a unit vector `x`.
pub fn operator_germ(a: &CMatrix, x: &CVector) -> Result<nalgebra::Complex<f64>, QuantumError> {
    let norm = x.norm();
    if (norm - 1.0).abs() > 1e-9 {
        return Err(QuantumError::NotUnitVector(norm));
    }
    if a.nrows() != x.len() || a.ncols() != x.len() {
        return Err(HilbertError::DimensionMismatch { left: a.nrows(), right: x.len() }.into());
    }
    Ok((x.adjoint() * a * x)[(0, 0)])
}

/// `P_V A|_V` written in the frame of `V`.
pub fn restrict_operator(a: &CMatrix, v: &Subspace) -> Result<CMatrix, QuantumError> {
    if a.nrows() != v.ambient_dim() {
        return Err(HilbertError::DimensionMismatch { left: a.nrows(), right: v.ambient_dim() }.into());
    }
    Ok(v.frame().adjoint() * a * v.frame())
}

/// `λ ↦ span{e_1, .., e_⌊λ⌋}` on `ℂ^n`, jumping at `1, .., n`.
pub fn coordinate_flag_family(n: usize, tol: &Tolerances) -> QuantumSpectralFamily {
    let jumps = (1..=n)
        .map(|k| Jump { lambda: k as f64, subspace: Subspace::coordinate(n, &(0..k).collect::<Vec<_>>()) })
        .collect();
    QuantumSpectralFamily::new(Subspace::full(n), jumps, tol).expect("flag is increasing")
}

/// `‖A − Σ λ_i P_i‖`, the reconstruction residual of `σ_A`.
pub fn reconstruction_residual(a: &CMatrix, sigma: &QuantumSpectralFamily) -> f64 {
    op_norm(&(a - sigma.reconstruct_operator()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{basis_vector, orthocomplement, real_diag, vector};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn rline(v: &[f64]) -> Subspace {
        Subspace::line(&CVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))).unwrap()
    }

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn family_of_diagonal() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0]), &t).unwrap();
        assert_eq!(s.jumps().len(), 2);
        assert!(close(s.jumps()[0].lambda, 1.0) && s.jumps()[0].subspace.approx_eq(&Subspace::coordinate(2, &[0]), &t));
        assert!(close(s.jumps()[1].lambda, 2.0) && s.jumps()[1].subspace.is_full());
        assert!(!s.is_generalized());
        assert!(s.value_at(0.5).is_zero());
        assert!(s.value_at(1.5).approx_eq(&Subspace::coordinate(2, &[0]), &t));
    }

    #[test]
    fn family_of_projection() {
        let t = tol();
        let u = Subspace::coordinate(2, &[0]);
        let s = spectral_family_of(&u.projector(), &t).unwrap();
        assert!(close(s.jumps()[0].lambda, 0.0));
        assert!(s.jumps()[0].subspace.approx_eq(&orthocomplement(&u, &t), &t));
        assert!(close(s.jumps()[1].lambda, 1.0) && s.jumps()[1].subspace.is_full());
        assert!(close(observable_value(&s, &Subspace::coordinate(2, &[1]), &t).unwrap(), 0.0));
        assert!(close(observable_value(&s, &rline(&[1.0, 0.3]), &t).unwrap(), 1.0));
    }

    #[test]
    fn family_of_identity() {
        let s = spectral_family_of(&crate::hilbert::identity(3), &tol()).unwrap();
        assert_eq!(spectrum_of(&s).len(), 1);
        assert!(close(spectrum_of(&s)[0], 1.0));
    }

    #[test]
    fn restrictions() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0]), &t).unwrap();
        let r = restrict_family(&s, &Subspace::coordinate(2, &[0]), &t).unwrap();
        assert_eq!(spectrum_of(&r), vec![s.jumps()[0].lambda]);
        let r = restrict_family(&s, &rline(&[1.0, 1.0]), &t).unwrap();
        assert_eq!(r.jumps().len(), 1);
        assert!(close(r.jumps()[0].lambda, 2.0));
        assert!(restrict_family(&s, &Subspace::full(2), &t).unwrap().approx_eq(&s, &t));
        let local = r.to_local_coordinates(&t).unwrap();
        assert_eq!(local.ambient_dim(), 1);
        assert!(local.jumps()[0].subspace.is_full());
        assert!(!r.is_generalized());
    }

    #[test]
    fn restricting_outside_the_domain_fails() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0, 3.0]), &t).unwrap();
        let u = Subspace::coordinate(3, &[0, 1]);
        let r = restrict_family(&s, &u, &t).unwrap();
        assert!(matches!(restrict_family(&r, &Subspace::coordinate(3, &[2]), &t), Err(QuantumError::NotInDomain)));
    }

    #[test]
    fn observable_values() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0]), &t).unwrap();
        assert!(close(observable_value(&s, &Subspace::coordinate(2, &[0]), &t).unwrap(), 1.0));
        assert!(close(observable_value(&s, &rline(&[1.0, 1.0]), &t).unwrap(), 2.0));
        assert!(matches!(observable_value(&s, &Subspace::full(2), &t), Err(QuantumError::NotALine(2))));
        let q = AtomicQuasipoint::new(Subspace::coordinate(2, &[1])).unwrap();
        assert!(close(observable_at_quasipoint(&s, &q, &t), 2.0));
        let id = spectral_family_of(&crate::hilbert::identity(2), &t).unwrap();
        assert!(close(observable_at_quasipoint(&id, &q, &t), 1.0));
    }

    #[test]
    fn inf_sup_is_attained_at_the_line() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0, 3.0]), &t).unwrap();
        let line = Subspace::coordinate(3, &[0]);
        let candidates = [
            line.clone(),
            Subspace::coordinate(3, &[0, 1]),
            Subspace::coordinate(3, &[0, 2]),
            Subspace::full(3),
        ];
        let sups: Vec<f64> = candidates.iter().map(|u| sup_over_subspace(&s, u, &t)).collect();
        assert!(close(sups[0], 1.0));
        assert!(sups.iter().all(|&v| v >= sups[0]));
        assert!(close(sups.iter().copied().fold(f64::INFINITY, f64::min), 1.0));
    }

    #[test]
    fn observable_round_trip() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0]), &t).unwrap();
        let data = ObservableData::from_family(&s).unwrap();
        assert!(observable_to_spectral(&data, &t).unwrap().approx_eq(&s, &t));
    }

    #[test]
    fn non_nested_sublevels_are_rejected() {
        let t = tol();
        let data = ObservableData {
            ambient_dim: 2,
            levels: vec![
                (1.0, Subspace::coordinate(2, &[0]).projector()),
                (2.0, Subspace::coordinate(2, &[1]).projector()),
            ],
        };
        assert!(matches!(observable_to_spectral(&data, &t), Err(QuantumError::NotMonotone(1))));
        let bad = ObservableData { ambient_dim: 2, levels: vec![(1.0, real_diag(&[0.5, 0.0]))] };
        assert!(matches!(observable_to_spectral(&bad, &t), Err(QuantumError::SublevelNotSubspace { index: 0, .. })));
    }

    #[test]
    fn spectra() {
        let t = tol();
        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let s = spectrum_of(&spectral_family_of(&x, &t).unwrap());
        assert!(close(s[0], -1.0) && close(s[1], 1.0));
    }

    #[test]
    fn germ_values() {
        let t = tol();
        let s = spectral_family_of(&real_diag(&[1.0, 2.0]), &t).unwrap();
        let r = spectral_family_of(&real_diag(&[1.0, 5.0]), &t).unwrap();
        let q1 = AtomicQuasipoint::new(Subspace::coordinate(2, &[0])).unwrap();
        let q2 = AtomicQuasipoint::new(Subspace::coordinate(2, &[1])).unwrap();
        let g = germ_value(&s, &r, &q1, &t).unwrap();
        assert!(g.equivalent && close(g.value, 1.0));
        let g = germ_value(&s, &r, &q2, &t).unwrap();
        assert!(!g.equivalent && close(g.value, 2.0) && close(g.other, 5.0));
        let q = AtomicQuasipoint::new(rline(&[0.6, -0.8])).unwrap();
        assert!(germ_value(&s, &s, &q, &t).unwrap().equivalent);
        let narrow = restrict_family(&s, &Subspace::coordinate(2, &[0]), &t).unwrap();
        assert!(matches!(germ_value(&narrow, &s, &q2, &t), Err(QuantumError::LineOutsideDomain)));
    }

    #[test]
    fn operator_germs() {
        let a = real_diag(&[1.0, 2.0]);
        assert!((operator_germ(&a, &basis_vector(2, 0)).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let x = vector(&[c(h, 0.0), c(h, 0.0)]);
        assert!((operator_germ(&a, &x).unwrap() - c(1.5, 0.0)).norm() < 1e-12);
        let phase = c(0.3f64.cos(), 0.3f64.sin());
        assert!((operator_germ(&a, &(&x * phase)).unwrap() - c(1.5, 0.0)).norm() < 1e-12);
        assert!(matches!(operator_germ(&a, &vector(&[c(1.0, 0.0), c(1.0, 0.0)])), Err(QuantumError::NotUnitVector(_))));
        let restricted = restrict_operator(&a, &Subspace::line(&x).unwrap()).unwrap();
        assert!((restricted[(0, 0)] - c(1.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn truncated_flag_restricted_to_generic_line() {
        let t = tol();
        for n in 2..7 {
            let s = coordinate_flag_family(n, &t);
            let x = CVector::from_fn(n, |i, _| c(1.0 / (i + 1) as f64, 0.0));
            let r = restrict_family(&s, &Subspace::line(&x).unwrap(), &t).unwrap();
            assert_eq!(r.jumps().len(), 1);
            assert!(close(r.jumps()[0].lambda, n as f64));
        }
    }

    #[test]
    fn generalized_families_are_flagged() {
        let t = tol();
        let s = QuantumSpectralFamily::new(
            Subspace::full(2),
            vec![Jump { lambda: 0.0, subspace: Subspace::coordinate(2, &[0]) }],
            &t,
        )
        .unwrap();
        assert!(s.is_generalized());
        assert!(observable_value(&s, &Subspace::coordinate(2, &[1]), &t).unwrap().is_infinite());
        assert!(matches!(ObservableData::from_family(&s), Err(QuantumError::GeneralizedFamily)));
    }
}
