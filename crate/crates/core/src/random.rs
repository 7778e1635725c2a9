//! Seeded generators for random test data. Every generator draws from a
//! caller-owned stream so batches stay reproducible.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hilbert::{c, CMatrix, CVector, Subspace, C64};

/// Stream `stream` of the master seed `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| complex_gaussian(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniform on the unit sphere of `ℂ^n`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CVector {
    loop {
        let v = gaussian_vector(rng, n);
        let norm = v.norm();
        if norm > 1e-8 {
            return v / c(norm, 0.0);
        }
    }
}

pub fn line<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Subspace {
    Subspace::line(&unit_vector(rng, n)).expect("unit vectors are nonzero")
}

/// Haar-distributed unitary (QR of a Gaussian matrix with phase correction).
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let qr = gaussian_matrix(rng, n, n).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let phase = d / d.norm();
            let mut col = q.column_mut(j);
            col *= phase;
        }
    }
    q
}

/// A uniformly random `k`-dimensional subspace of `ℂ^n`.
pub fn subspace<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Subspace {
    let u = unitary(rng, n);
    Subspace::from_frame(u.columns(0, k).into_owned(), &Default::default()).expect("unitary columns are orthonormal")
}

/// A subspace of random dimension in `0..=n`.
pub fn any_subspace<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Subspace {
    let k = rng.random_range(0..=n);
    subspace(rng, n, k)
}

/// `(G + G*)/2` for Gaussian `G`.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    (&g + g.adjoint()) * c(0.5, 0.0)
}

/// `U diag(values) U*` for a random unitary `U`.
pub fn hermitian_with_spectrum<R: Rng + ?Sized>(rng: &mut R, values: &[f64]) -> CMatrix {
    let n = values.len();
    let u = unitary(rng, n);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(n, values.iter().map(|&v| c(v, 0.0))));
    &u * d * u.adjoint()
}

/// A Hermitian matrix whose eigenvalues are drawn from a small integer
/// range, so degenerate eigenspaces are common.
pub fn degenerate_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> CMatrix {
    let values: Vec<f64> = (0..n).map(|_| rng.random_range(-2..=2) as f64).collect();
    hermitian_with_spectrum(rng, &values)
}

/// A density matrix of the given rank: `GG*/tr(GG*)`.
pub fn density<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, rank);
    let rho = &g * g.adjoint();
    let tr = rho.trace().re;
    rho / c(tr, 0.0)
}

/// A uniformly random unit complex number.
pub fn phase<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    c(theta.cos(), theta.sin())
}

/// A random real in `[lo, hi)`.
pub fn real<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

/// A random subset of `0..n`.
pub fn subset<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<usize> {
    (0..n).filter(|_| rng.random_bool(0.5)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{identity, op_norm};

    #[test]
    fn unitary_is_unitary() {
        let mut rng = stream(1, 0);
        for n in 1..6 {
            let u = unitary(&mut rng, n);
            assert!(op_norm(&(u.adjoint() * &u - identity(n))) < 1e-12);
        }
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a = gaussian_vector(&mut stream(7, 0), 4);
        let b = gaussian_vector(&mut stream(7, 0), 4);
        let d = gaussian_vector(&mut stream(7, 1), 4);
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn densities_have_unit_trace() {
        let mut rng = stream(3, 0);
        let rho = density(&mut rng, 4, 2);
        assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-12);
    }
}
