//! Finite-dimensional complex Hilbert spaces: subspaces and the lattice
//! operations of `L(H)`, projectors, commutation, Hermitian eigensystems.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use thiserror::Error;

use crate::tolerance::Tolerances;

pub type C64 = Complex<f64>;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HilbertError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is {rows}×{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (‖A − A*‖ = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("frame is not orthonormal (‖F*F − I‖ = {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("matrix is not an orthogonal projector (deviation {deviation:e})")]
    NotProjector { deviation: f64 },
    #[error("zero vector does not span a line")]
    ZeroVector,
    #[error("matrix has non-finite entries")]
    NonFinite,
}

pub fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&v| c(v, 0.0))))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// The `i`-th standard basis vector of `ℂ^n`.
pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = c(1.0, 0.0);
    v
}

pub fn vector(entries: &[C64]) -> CVector {
    CVector::from_column_slice(entries)
}

/// Largest singular value.
pub fn op_norm(a: &CMatrix) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    JacobiSvd::of(a).sigma.iter().copied().fold(0.0, f64::max)
}

/// One-sided (Hestenes) Jacobi SVD: `A V = W` with orthogonal columns
/// `w_j`, `σ_j = ‖w_j‖` and `V` unitary. Used instead of the bidiagonal
/// solver, which loses accuracy on some rank-deficient complex inputs.
struct JacobiSvd {
    w: CMatrix,
    v: CMatrix,
    sigma: Vec<f64>,
}

impl JacobiSvd {
    fn of(a: &CMatrix) -> Self {
        let n = a.ncols();
        let mut w = a.clone();
        let mut v = identity(n);
        for _ in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha = w.column(p).norm_squared();
                    let beta = w.column(q).norm_squared();
                    let gamma = w.column(p).dotc(&w.column(q));
                    let g = gamma.norm();
                    if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let phase = gamma.conj() / g;
                    let zeta = (beta - alpha) / (2.0 * g);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let cs = 1.0 / (1.0 + t * t).sqrt();
                    let sn = cs * t;
                    for m in [&mut w, &mut v] {
                        for r in 0..m.nrows() {
                            let x = m[(r, p)];
                            let y = m[(r, q)] * phase;
                            m[(r, p)] = x * cs - y * sn;
                            m[(r, q)] = x * sn + y * cs;
                        }
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let sigma = (0..n).map(|j| w.column(j).norm()).collect();
        JacobiSvd { w, v, sigma }
    }

    fn max(&self) -> f64 {
        self.sigma.iter().copied().fold(0.0, f64::max)
    }
}

/// Modified Gram–Schmidt, applied twice.
fn orthonormalize(mut m: CMatrix) -> CMatrix {
    for _ in 0..2 {
        for j in 0..m.ncols() {
            for i in 0..j {
                let proj = m.column(i).dotc(&m.column(j));
                let qi = m.column(i).into_owned();
                let mut col = m.column_mut(j);
                col -= qi * proj;
            }
            let norm = m.column(j).norm();
            let mut col = m.column_mut(j);
            col /= c(norm, 0.0);
        }
    }
    m
}

fn ensure_square(a: &CMatrix) -> Result<(), HilbertError> {
    if a.nrows() != a.ncols() {
        return Err(HilbertError::NotSquare { rows: a.nrows(), cols: a.ncols() });
    }
    if a.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(HilbertError::NonFinite);
    }
    Ok(())
}

/// Checks `‖A − A*‖ ≤ τ_sym·max(1, ‖A‖)`.
pub fn check_hermitian(a: &CMatrix, tol: &Tolerances) -> Result<(), HilbertError> {
    ensure_square(a)?;
    let deviation = op_norm(&(a - a.adjoint()));
    if deviation > tol.sym_for(op_norm(a)) {
        return Err(HilbertError::NotHermitian { deviation });
    }
    Ok(())
}

/// `tr(ρA)`.
pub fn trace_pair(rho: &CMatrix, a: &CMatrix) -> Result<C64, HilbertError> {
    ensure_square(rho)?;
    ensure_square(a)?;
    if rho.nrows() != a.nrows() {
        return Err(HilbertError::DimensionMismatch { left: rho.nrows(), right: a.nrows() });
    }
    Ok((rho * a).trace())
}

/// Columns spanning the range of `m`, rank cut at `τ_rank·σ_max`.
fn column_space(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let n = m.nrows();
    if m.ncols() == 0 || n == 0 {
        return CMatrix::zeros(n, 0);
    }
    let svd = JacobiSvd::of(m);
    let smax = svd.max();
    if smax == 0.0 {
        return CMatrix::zeros(n, 0);
    }
    let mut keep: Vec<usize> = (0..svd.sigma.len()).filter(|&i| svd.sigma[i] > tol.rank * smax).collect();
    keep.sort_by(|&i, &j| svd.sigma[j].total_cmp(&svd.sigma[i]));
    orthonormalize(CMatrix::from_fn(n, keep.len(), |r, k| svd.w[(r, keep[k])]))
}

/// Columns spanning the kernel of `m`.
fn null_space(m: &CMatrix, tol: &Tolerances) -> CMatrix {
    let n = m.ncols();
    if m.nrows() == 0 {
        return identity(n);
    }
    let svd = JacobiSvd::of(m);
    let cut = tol.rank * svd.max().max(1.0);
    let keep: Vec<usize> = (0..n).filter(|&i| svd.sigma[i] <= cut).collect();
    orthonormalize(CMatrix::from_fn(n, keep.len(), |r, k| svd.v[(r, keep[k])]))
}

/// Rotates the phase of `v` so its first entry of modulus above `1e-10` is
/// real and positive.
fn orient(v: &mut CVector) {
    if let Some(z) = v.iter().copied().find(|z| z.norm() > 1e-10) {
        let phase = z.conj() / z.norm();
        *v *= phase;
    }
}

/// A reproducible orthonormal frame for the range of the projector `p` of
/// rank `k`: pivoted Gram–Schmidt on the columns of `p`.
fn canonical_frame(p: &CMatrix, k: usize) -> CMatrix {
    let n = p.nrows();
    let mut residual = p.clone();
    let mut frame = CMatrix::zeros(n, k);
    for j in 0..k {
        let (best, _) = (0..n)
            .map(|col| (col, residual.column(col).norm()))
            .fold((0, -1.0), |acc, x| if x.1 > acc.1 + 1e-12 { x } else { acc });
        let mut q: CVector = residual.column(best).into_owned();
        q /= c(q.norm(), 0.0);
        orient(&mut q);
        let proj = &q * (q.adjoint() * &residual);
        residual -= proj;
        frame.set_column(j, &q);
    }
    frame
}

/// A closed subspace of `ℂ^n` with an orthonormal frame.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    frame: CMatrix,
}

impl Subspace {
    fn from_trusted(frame: CMatrix) -> Self {
        let n = frame.nrows();
        let k = frame.ncols();
        let p = &frame * frame.adjoint();
        Subspace { ambient_dim: n, frame: canonical_frame(&p, k) }
    }

    pub fn zero(n: usize) -> Self {
        Subspace { ambient_dim: n, frame: CMatrix::zeros(n, 0) }
    }

    pub fn full(n: usize) -> Self {
        Subspace { ambient_dim: n, frame: identity(n) }
    }

    /// Accepts a frame whose columns are orthonormal within `τ_orth`.
    pub fn from_frame(frame: CMatrix, tol: &Tolerances) -> Result<Self, HilbertError> {
        if frame.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(HilbertError::NonFinite);
        }
        let k = frame.ncols();
        let deviation = if k == 0 { 0.0 } else { op_norm(&(frame.adjoint() * &frame - identity(k))) };
        if deviation > tol.orth {
            return Err(HilbertError::NotOrthonormal { deviation });
        }
        Ok(Self::from_trusted(frame))
    }

    /// The span of arbitrary vectors.
    pub fn span(n: usize, vectors: &[CVector], tol: &Tolerances) -> Result<Self, HilbertError> {
        if let Some(v) = vectors.iter().find(|v| v.len() != n) {
            return Err(HilbertError::DimensionMismatch { left: n, right: v.len() });
        }
        let m = CMatrix::from_fn(n, vectors.len(), |r, k| vectors[k][r]);
        Ok(Self::from_trusted(column_space(&m, tol)))
    }

    /// `ℂx` for a nonzero `x`.
    pub fn line(x: &CVector) -> Result<Self, HilbertError> {
        let norm = x.norm();
        if norm < 1e-300 || !norm.is_finite() {
            return Err(HilbertError::ZeroVector);
        }
        Ok(Self::from_trusted(CMatrix::from_column_slice(x.len(), 1, (x / c(norm, 0.0)).as_slice())))
    }

    /// `span{e_i : i ∈ indices}`.
    pub fn coordinate(n: usize, indices: &[usize]) -> Self {
        let frame = CMatrix::from_fn(n, indices.len(), |r, k| if r == indices[k] { c(1.0, 0.0) } else { c(0.0, 0.0) });
        Self::from_trusted(frame)
    }

    /// The range of an orthogonal projector (Hermitian and idempotent within `τ_eq`).
    pub fn from_projector(p: &CMatrix, tol: &Tolerances) -> Result<Self, HilbertError> {
        ensure_square(p)?;
        let deviation = op_norm(&(p - p.adjoint())).max(op_norm(&(p * p - p)));
        if deviation > tol.eq {
            return Err(HilbertError::NotProjector { deviation });
        }
        let n = p.nrows();
        let herm = (p + p.adjoint()) * c(0.5, 0.0);
        let eig = SymmetricEigen::new(herm);
        let keep: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i] > 0.5).collect();
        let frame = CMatrix::from_fn(n, keep.len(), |r, k| eig.eigenvectors[(r, keep[k])]);
        Ok(Self::from_trusted(frame))
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.frame.ncols()
    }

    pub fn frame(&self) -> &CMatrix {
        &self.frame
    }

    pub fn projector(&self) -> CMatrix {
        &self.frame * self.frame.adjoint()
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient_dim
    }

    /// `‖x − P_U x‖ ≤ τ_eq·‖x‖`.
    pub fn contains_vector(&self, x: &CVector, tol: &Tolerances) -> bool {
        let r = x - &self.frame * (self.frame.adjoint() * x);
        r.norm() <= tol.eq * x.norm().max(1e-300)
    }

    /// `V ⊆ self` within `τ_eq`.
    pub fn contains(&self, v: &Subspace, tol: &Tolerances) -> bool {
        if v.dim() == 0 {
            return true;
        }
        let r = v.frame() - &self.frame * (self.frame.adjoint() * v.frame());
        op_norm(&r) <= tol.eq
    }

    pub fn distance(&self, other: &Subspace) -> f64 {
        op_norm(&(self.projector() - other.projector()))
    }

    pub fn approx_eq(&self, other: &Subspace, tol: &Tolerances) -> bool {
        self.ambient_dim == other.ambient_dim && self.dim() == other.dim() && self.distance(other) <= tol.eq
    }

    fn same_ambient(&self, other: &Subspace) -> Result<(), HilbertError> {
        if self.ambient_dim != other.ambient_dim {
            return Err(HilbertError::DimensionMismatch { left: self.ambient_dim, right: other.ambient_dim });
        }
        Ok(())
    }
}

/// `U ∩ V` as the kernel of the stacked `[I − P_U; I − P_V]`.
pub fn meet(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Subspace, HilbertError> {
    u.same_ambient(v)?;
    let n = u.ambient_dim;
    let mut stacked = CMatrix::zeros(2 * n, n);
    stacked.rows_mut(0, n).copy_from(&(identity(n) - u.projector()));
    stacked.rows_mut(n, n).copy_from(&(identity(n) - v.projector()));
    Ok(Subspace::from_trusted(null_space(&stacked, tol)))
}

/// `(U + V)⁻`, the column space of the concatenated frames.
pub fn join(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<Subspace, HilbertError> {
    u.same_ambient(v)?;
    let n = u.ambient_dim;
    let mut cat = CMatrix::zeros(n, u.dim() + v.dim());
    cat.columns_mut(0, u.dim()).copy_from(u.frame());
    cat.columns_mut(u.dim(), v.dim()).copy_from(v.frame());
    Ok(Subspace::from_trusted(column_space(&cat, tol)))
}

pub fn orthocomplement(u: &Subspace, tol: &Tolerances) -> Subspace {
    Subspace::from_trusted(null_space(&u.projector(), tol))
}

pub fn meet_all<'a>(n: usize, it: impl IntoIterator<Item = &'a Subspace>, tol: &Tolerances) -> Result<Subspace, HilbertError> {
    it.into_iter().try_fold(Subspace::full(n), |acc, s| meet(&acc, s, tol))
}

pub fn join_all<'a>(n: usize, it: impl IntoIterator<Item = &'a Subspace>, tol: &Tolerances) -> Result<Subspace, HilbertError> {
    it.into_iter().try_fold(Subspace::zero(n), |acc, s| join(&acc, s, tol))
}

/// `‖P_U P_V − P_V P_U‖ ≤ τ_comm`.
pub fn projectors_commute(u: &Subspace, v: &Subspace, tol: &Tolerances) -> Result<bool, HilbertError> {
    u.same_ambient(v)?;
    let (p, q) = (u.projector(), v.projector());
    Ok(op_norm(&(&p * &q - &q * &p)) <= tol.comm)
}

/// One clustered eigenvalue and its eigenspace.
#[derive(Debug, Clone)]
pub struct Eigenspace {
    pub value: f64,
    pub space: Subspace,
}

/// Ascending eigenvalues of a Hermitian matrix, clustered greedily left to
/// right: a value joins the current cluster when its gap to the previous
/// value is at most `δ_cluster`. The cluster value is the mean.
pub fn hermitian_eigensystem(a: &CMatrix, tol: &Tolerances) -> Result<Vec<Eigenspace>, HilbertError> {
    check_hermitian(a, tol)?;
    let n = a.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let delta = tol.cluster_for(op_norm(a));
    let herm = (a + a.adjoint()) * c(0.5, 0.0);
    let eig = SymmetricEigen::new(herm);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (pos, &i) in order.iter().enumerate() {
        let joins = pos > 0 && eig.eigenvalues[i] - eig.eigenvalues[order[pos - 1]] <= delta;
        match clusters.last_mut() {
            Some(last) if joins => last.push(i),
            _ => clusters.push(vec![i]),
        }
    }
    Ok(clusters
        .into_iter()
        .map(|members| {
            let value = members.iter().map(|&i| eig.eigenvalues[i]).sum::<f64>() / members.len() as f64;
            let frame = CMatrix::from_fn(n, members.len(), |r, k| eig.eigenvectors[(r, members[k])]);
            Eigenspace { value, space: Subspace::from_trusted(frame) }
        })
        .collect())
}

/// `Σ λ_i P_i`.
pub fn reconstruct(n: usize, system: &[Eigenspace]) -> CMatrix {
    system.iter().fold(CMatrix::zeros(n, n), |acc, e| acc + e.space.projector() * c(e.value, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn e(n: usize, i: usize) -> Subspace {
        Subspace::coordinate(n, &[i])
    }

    fn line(v: &[f64]) -> Subspace {
        Subspace::line(&CVector::from_iterator(v.len(), v.iter().map(|&x| c(x, 0.0)))).unwrap()
    }

    #[test]
    fn meets() {
        let t = tol();
        assert!(meet(&e(2, 0), &e(2, 1), &t).unwrap().is_zero());
        let u = line(&[1.0, 2.0, 3.0]);
        assert!(meet(&u, &u, &t).unwrap().approx_eq(&u, &t));
        let a = Subspace::coordinate(3, &[0, 1]);
        let b = Subspace::coordinate(3, &[1, 2]);
        assert!(meet(&a, &b, &t).unwrap().approx_eq(&e(3, 1), &t));
        assert!(matches!(meet(&a, &e(2, 0), &t), Err(HilbertError::DimensionMismatch { .. })));
    }

    #[test]
    fn joins() {
        let t = tol();
        assert!(join(&e(2, 0), &e(2, 1), &t).unwrap().is_full());
        let u = line(&[1.0, -1.0, 0.5]);
        assert!(join(&u, &Subspace::zero(3), &t).unwrap().approx_eq(&u, &t));
        assert!(join(&e(2, 0), &line(&[1.0, 1.0]), &t).unwrap().is_full());
    }

    #[test]
    fn complements() {
        let t = tol();
        let u = line(&[1.0, 1.0]);
        assert!(orthocomplement(&u, &t).approx_eq(&line(&[1.0, -1.0]), &t));
        assert!(orthocomplement(&Subspace::zero(3), &t).is_full());
        let w = line(&[0.3, -1.0, 2.0]);
        assert!(orthocomplement(&orthocomplement(&w, &t), &t).approx_eq(&w, &t));
    }

    #[test]
    fn commutation() {
        let t = tol();
        assert!(projectors_commute(&e(3, 0), &Subspace::coordinate(3, &[0, 1]), &t).unwrap());
        let (a, b) = (e(2, 0), line(&[1.0, 1.0]));
        assert!(!projectors_commute(&a, &b, &t).unwrap());
        let comm = {
            let (p, q) = (a.projector(), b.projector());
            op_norm(&(&p * &q - &q * &p))
        };
        assert!((comm - 0.5).abs() < 1e-12);
        let w = line(&[0.3, -1.0]);
        assert!(projectors_commute(&w, &orthocomplement(&w, &t), &t).unwrap());
    }

    #[test]
    fn eigensystems() {
        let t = tol();
        let sys = hermitian_eigensystem(&real_diag(&[2.0, 1.0]), &t).unwrap();
        assert_eq!(sys.len(), 2);
        assert!((sys[0].value - 1.0).abs() < 1e-12 && sys[0].space.approx_eq(&e(2, 1), &t));
        assert!((sys[1].value - 2.0).abs() < 1e-12 && sys[1].space.approx_eq(&e(2, 0), &t));

        let sys = hermitian_eigensystem(&identity(3), &t).unwrap();
        assert_eq!(sys.len(), 1);
        assert!(sys[0].space.is_full());

        let x = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let sys = hermitian_eigensystem(&x, &t).unwrap();
        assert!((sys[0].value + 1.0).abs() < 1e-12 && sys[0].space.approx_eq(&line(&[1.0, -1.0]), &t));
        assert!((sys[1].value - 1.0).abs() < 1e-12 && sys[1].space.approx_eq(&line(&[1.0, 1.0]), &t));
        assert!(op_norm(&(reconstruct(2, &sys) - x)) < 1e-12);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(hermitian_eigensystem(&a, &tol()), Err(HilbertError::NotHermitian { .. })));
        let b = CMatrix::zeros(2, 3);
        assert!(matches!(hermitian_eigensystem(&b, &tol()), Err(HilbertError::NotSquare { .. })));
    }

    #[test]
    fn traces() {
        let half = identity(2) * c(0.5, 0.0);
        assert!((trace_pair(&half, &real_diag(&[1.0, 3.0])).unwrap() - c(2.0, 0.0)).norm() < 1e-12);
        let rho = real_diag(&[0.25, 0.75]);
        assert!((trace_pair(&rho, &real_diag(&[4.0, 0.0])).unwrap() - c(1.0, 0.0)).norm() < 1e-12);
        let a = CMatrix::from_row_slice(2, 2, &[c(3.0, 0.0), c(1.0, 2.0), c(1.0, -2.0), c(-1.0, 0.0)]);
        let p = e(2, 0).projector();
        assert!((trace_pair(&p, &a).unwrap() - c(3.0, 0.0)).norm() < 1e-12);
        assert!(trace_pair(&identity(2), &identity(3)).is_err());
    }

    #[test]
    fn frames_are_canonical() {
        let t = tol();
        let a = Subspace::span(2, &[vector(&[c(0.0, 1.0), c(0.0, 1.0)])], &t).unwrap();
        let b = line(&[-3.0, -3.0]);
        assert!((a.frame() - b.frame()).norm() < 1e-12);
        assert!(a.frame()[(0, 0)].re > 0.0 && a.frame()[(0, 0)].im.abs() < 1e-15);
    }

    #[test]
    fn projector_round_trip() {
        let t = tol();
        let u = Subspace::span(3, &[vector(&[c(1.0, 0.0), c(0.0, 1.0), c(0.0, 0.0)]), vector(&[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 1.0)])], &t).unwrap();
        let back = Subspace::from_projector(&u.projector(), &t).unwrap();
        assert!(back.approx_eq(&u, &t));
        assert!(matches!(Subspace::from_projector(&real_diag(&[0.5, 1.0]), &t), Err(HilbertError::NotProjector { .. })));
        let bad = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(matches!(Subspace::from_frame(bad, &t), Err(HilbertError::NotOrthonormal { .. })));
    }
}
