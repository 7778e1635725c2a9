//! JSON wire formats for lattices, matrices, subspaces, spectral families,
//! presheaves, finite carriers, sectors, sector operators and measures.

use std::collections::BTreeMap;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::BitSet;
use crate::classical::{ClassicalError, FiniteFamily, FiniteSigmaAlgebra, FiniteTopology};
use crate::hilbert::{c, identity, CMatrix, HilbertError, Subspace};
use crate::lattice::{FiniteLattice, LatticeError};
use crate::presheaf::{Presheaf, PresheafError};
use crate::quantum::{Jump, QuantumError, QuantumSpectralFamily};
use crate::sector::{BooleanSector, SectorError, SectorOperator, StateMeasure};
use crate::tolerance::Tolerances;

#[derive(Debug, Error)]
pub enum JsonError {
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Hilbert(#[from] HilbertError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
    #[error(transparent)]
    Presheaf(#[from] PresheafError),
    #[error(transparent)]
    Classical(#[from] ClassicalError),
    #[error(transparent)]
    Sector(#[from] SectorError),
    #[error("{0}")]
    Invalid(String),
}

impl From<serde_json::Error> for JsonError {
    fn from(e: serde_json::Error) -> Self {
        JsonError::Parse { line: e.line(), column: e.column(), message: e.to_string() }
    }
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, JsonError> {
    Ok(serde_json::from_str(text)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub elements: Vec<String>,
    pub leq: Vec<[String; 2]>,
}

impl LatticeJson {
    pub fn to_lattice(&self) -> Result<FiniteLattice, JsonError> {
        let pairs: Vec<(&str, &str)> = self.leq.iter().map(|[a, b]| (a.as_str(), b.as_str())).collect();
        let elements: Vec<&str> = self.elements.iter().map(String::as_str).collect();
        Ok(FiniteLattice::from_order(&elements, &pairs)?)
    }

    /// Lists the covering pairs.
    pub fn from_lattice(l: &FiniteLattice) -> Self {
        let n = l.len();
        let mut leq = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a != b && l.leq(a, b) && !(0..n).any(|m| m != a && m != b && l.leq(a, m) && l.leq(m, b)) {
                    leq.push([l.name(a).to_string(), l.name(b).to_string()]);
                }
            }
        }
        LatticeJson { elements: l.names().to_vec(), leq }
    }
}

/// Row-major complex entries as `[re, im]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<CMatrix, JsonError> {
        if self.entries.len() != self.rows * self.cols {
            return Err(JsonError::Invalid(format!(
                "{}x{} matrix needs {} entries, got {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            )));
        }
        if self.entries.iter().flatten().any(|x| !x.is_finite()) {
            return Err(HilbertError::NonFinite.into());
        }
        Ok(CMatrix::from_row_iterator(self.rows, self.cols, self.entries.iter().map(|[re, im]| c(*re, *im))))
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let entries = (0..m.nrows()).flat_map(|r| (0..m.ncols()).map(move |k| [m[(r, k)].re, m[(r, k)].im])).collect();
        MatrixJson { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn real(rows: usize, cols: usize, values: &[f64]) -> Self {
        MatrixJson { rows, cols, entries: values.iter().map(|&v| [v, 0.0]).collect() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceJson {
    pub ambient_dim: usize,
    pub frame: MatrixJson,
}

impl SubspaceJson {
    pub fn to_subspace(&self, tol: &Tolerances) -> Result<Subspace, JsonError> {
        let frame = self.frame.to_matrix()?;
        if frame.nrows() != self.ambient_dim {
            return Err(HilbertError::DimensionMismatch { left: self.ambient_dim, right: frame.nrows() }.into());
        }
        // frames need not be orthonormal on input
        let vectors: Vec<_> = frame.column_iter().map(|v| v.into_owned()).collect();
        Ok(Subspace::span(self.ambient_dim, &vectors, tol)?)
    }

    pub fn from_subspace(u: &Subspace) -> Self {
        SubspaceJson { ambient_dim: u.ambient_dim(), frame: MatrixJson::from_matrix(u.frame()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpJson {
    pub lambda: f64,
    pub subspace: SubspaceJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFamilyJson {
    pub ambient_dim: usize,
    pub jumps: Vec<JumpJson>,
    /// Present only for generalized families.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<SubspaceJson>,
}

impl SpectralFamilyJson {
    pub fn to_family(&self, tol: &Tolerances) -> Result<QuantumSpectralFamily, JsonError> {
        let jumps = self
            .jumps
            .iter()
            .map(|j| Ok(Jump { lambda: j.lambda, subspace: j.subspace.to_subspace(tol)? }))
            .collect::<Result<Vec<_>, JsonError>>()?;
        let domain = match &self.domain {
            Some(d) => d.to_subspace(tol)?,
            None => Subspace::full(self.ambient_dim),
        };
        Ok(QuantumSpectralFamily::new(domain, jumps, tol)?)
    }

    pub fn from_family(sigma: &QuantumSpectralFamily) -> Self {
        SpectralFamilyJson {
            ambient_dim: sigma.ambient_dim(),
            jumps: sigma
                .jumps()
                .iter()
                .map(|j| JumpJson { lambda: j.lambda, subspace: SubspaceJson::from_subspace(&j.subspace) })
                .collect(),
            domain: (!sigma.domain().is_full()).then(|| SubspaceJson::from_subspace(sigma.domain())),
        }
    }
}

/// One restriction map `S(upper) → S(lower)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub lower: String,
    pub upper: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PresheafJson {
    pub lattice: LatticeJson,
    pub sections: BTreeMap<String, Vec<String>>,
    pub restrictions: Vec<RestrictionJson>,
}

impl PresheafJson {
    pub fn to_presheaf(&self) -> Result<Presheaf, JsonError> {
        let l = self.lattice.to_lattice()?;
        let mut sections = vec![Vec::new(); l.len()];
        for (name, secs) in &self.sections {
            let a = l.index_of(name).ok_or_else(|| PresheafError::UnknownElement(name.clone()))?;
            sections[a] = secs.clone();
        }
        let mut restrict = BTreeMap::new();
        for r in &self.restrictions {
            let a = l.index_of(&r.lower).ok_or_else(|| PresheafError::UnknownElement(r.lower.clone()))?;
            let b = l.index_of(&r.upper).ok_or_else(|| PresheafError::UnknownElement(r.upper.clone()))?;
            let mut table = Vec::with_capacity(sections[b].len());
            for f in &sections[b] {
                let g = r.map.get(f).ok_or_else(|| PresheafError::UnknownSection { element: r.upper.clone(), section: f.clone() })?;
                let gi = sections[a]
                    .iter()
                    .position(|s| s == g)
                    .ok_or_else(|| PresheafError::UnknownSection { element: r.lower.clone(), section: g.clone() })?;
                table.push(gi);
            }
            restrict.insert((a, b), table);
        }
        Ok(Presheaf::new(l, sections, restrict)?)
    }

    pub fn from_presheaf(p: &Presheaf) -> Self {
        let l = p.lattice();
        let sections = (0..l.len()).map(|a| (l.name(a).to_string(), p.sections(a).to_vec())).collect();
        let restrictions = p
            .restriction_table()
            .iter()
            .filter(|((a, b), _)| a != b)
            .map(|(&(a, b), table)| RestrictionJson {
                lower: l.name(a).to_string(),
                upper: l.name(b).to_string(),
                map: table
                    .iter()
                    .enumerate()
                    .map(|(f, &g)| (p.sections(b)[f].clone(), p.sections(a)[g].clone()))
                    .collect(),
            })
            .collect();
        PresheafJson { lattice: LatticeJson::from_lattice(l), sections, restrictions }
    }
}

fn set_from_names(points: &[String], names: &[String]) -> Result<BitSet, JsonError> {
    names
        .iter()
        .map(|n| {
            points.iter().position(|p| p == n).ok_or_else(|| JsonError::Invalid(format!("unknown point `{n}`")))
        })
        .collect()
}

fn names_of(points: &[String], s: BitSet) -> Vec<String> {
    s.iter().map(|i| points[i].clone()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologyJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl TopologyJson {
    pub fn to_topology(&self) -> Result<FiniteTopology, JsonError> {
        let opens = self.opens.iter().map(|o| set_from_names(&self.points, o)).collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteTopology::new(self.points.clone(), opens)?)
    }

    pub fn from_topology(t: &FiniteTopology) -> Self {
        TopologyJson {
            points: t.points().to_vec(),
            opens: t.opens().iter().map(|&o| names_of(t.points(), o)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaAlgebraJson {
    pub points: Vec<String>,
    pub sets: Vec<Vec<String>>,
}

impl SigmaAlgebraJson {
    pub fn to_algebra(&self) -> Result<FiniteSigmaAlgebra, JsonError> {
        let sets = self.sets.iter().map(|s| set_from_names(&self.points, s)).collect::<Result<Vec<_>, _>>()?;
        Ok(FiniteSigmaAlgebra::new(self.points.clone(), sets)?)
    }

    pub fn from_algebra(a: &FiniteSigmaAlgebra) -> Self {
        SigmaAlgebraJson {
            points: a.points().to_vec(),
            sets: a.sets().iter().map(|&s| names_of(a.points(), s)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SetJumpJson {
    pub lambda: f64,
    pub set: Vec<String>,
}

/// A classical spectral family on a finite topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteFamilyJson {
    pub topology: TopologyJson,
    pub jumps: Vec<SetJumpJson>,
}

impl FiniteFamilyJson {
    pub fn to_family(&self) -> Result<FiniteFamily, JsonError> {
        let t = self.topology.to_topology()?;
        let jumps = self
            .jumps
            .iter()
            .map(|j| Ok((j.lambda, set_from_names(t.points(), &j.set)?)))
            .collect::<Result<Vec<_>, JsonError>>()?;
        Ok(FiniteFamily::new(t, jumps)?)
    }

    pub fn from_family(f: &FiniteFamily) -> Self {
        let t = f.topology();
        FiniteFamilyJson {
            topology: TopologyJson::from_topology(t),
            jumps: f.jumps().iter().map(|&(lambda, s)| SetJumpJson { lambda, set: names_of(t.points(), s) }).collect(),
        }
    }
}

/// `"I"` for the standard basis, or a unitary matrix whose columns are the basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisJson {
    Named(String),
    Matrix(MatrixJson),
}

impl BasisJson {
    pub fn to_sector(&self, dim: Option<usize>, tol: &Tolerances) -> Result<BooleanSector, JsonError> {
        match self {
            BasisJson::Named(name) if name == "I" => {
                let n = dim.ok_or_else(|| JsonError::Invalid("the identity basis needs a dimension".into()))?;
                Ok(BooleanSector::from_basis(identity(n), tol)?)
            }
            BasisJson::Named(name) => Err(JsonError::Invalid(format!("unknown basis `{name}`"))),
            BasisJson::Matrix(m) => Ok(BooleanSector::from_basis(m.to_matrix()?, tol)?),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorJson {
    pub basis: MatrixJson,
}

impl SectorJson {
    pub fn to_sector(&self, tol: &Tolerances) -> Result<BooleanSector, JsonError> {
        Ok(BooleanSector::from_basis(self.basis.to_matrix()?, tol)?)
    }

    pub fn from_sector(s: &BooleanSector) -> Self {
        SectorJson { basis: MatrixJson::from_matrix(s.basis()) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorJson {
    pub coefficients: Vec<[f64; 2]>,
    pub basis: BasisJson,
}

impl OperatorJson {
    pub fn to_operator(&self, tol: &Tolerances) -> Result<SectorOperator, JsonError> {
        let sector = self.basis.to_sector(Some(self.coefficients.len()), tol)?;
        Ok(SectorOperator::new(&sector, self.coefficients.iter().map(|[re, im]| c(*re, *im)).collect())?)
    }

    pub fn from_operator(op: &SectorOperator) -> Self {
        OperatorJson {
            coefficients: op.coefficients().iter().map(|z| [z.re, z.im]).collect(),
            basis: BasisJson::Matrix(MatrixJson::from_matrix(op.sector().basis())),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureJson {
    pub weights: Vec<f64>,
}

impl From<&StateMeasure> for MeasureJson {
    fn from(m: &StateMeasure) -> Self {
        MeasureJson { weights: m.weights.clone() }
    }
}
