//! Numerical tolerances shared by the Hilbert-space and spectral modules.

use serde::{Deserialize, Serialize};

/// One record for every numerical threshold. Relative entries are scaled by
/// `max(1, ‖A‖)` at the point of use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Frame orthonormality, `‖F*F − I‖`.
    pub orth: f64,
    /// Subspace equality, `‖P_U − P_V‖`.
    pub eq: f64,
    /// Rank decisions, relative to the largest singular value.
    pub rank: f64,
    /// Commutator norm `‖P_U P_V − P_V P_U‖`.
    pub comm: f64,
    /// Hermiticity, relative.
    pub sym: f64,
    /// Eigenvalue clustering gap, relative.
    pub cluster: f64,
    /// Comparison of observable values and real scalars.
    pub value: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { orth: 1e-10, eq: 1e-8, rank: 1e-9, comm: 1e-9, sym: 1e-12, cluster: 1e-8, value: 1e-9 }
    }
}

impl Tolerances {
    pub const PROFILES: [&'static str; 3] = ["default", "strict", "loose"];

    /// Named profiles: `default`, `strict` (every threshold ÷ 100) and
    /// `loose` (every threshold × 100).
    pub fn profile(name: &str) -> Option<Self> {
        let d = Self::default();
        let scale = match name {
            "default" => 1.0,
            "strict" => 1e-2,
            "loose" => 1e2,
            _ => return None,
        };
        Some(Tolerances {
            orth: d.orth * scale,
            eq: d.eq * scale,
            rank: d.rank * scale,
            comm: d.comm * scale,
            sym: d.sym * scale,
            cluster: d.cluster * scale,
            value: d.value * scale,
        })
    }

    pub fn sym_for(&self, norm: f64) -> f64 {
        self.sym * norm.max(1.0)
    }

    pub fn cluster_for(&self, norm: f64) -> f64 {
        self.cluster * norm.max(1.0)
    }
}
