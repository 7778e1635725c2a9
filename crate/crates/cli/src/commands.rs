use std::path::Path;

use anyhow::{anyhow, bail, Context};
use qsheaf::hilbert::{c, op_norm, CMatrix, CVector, Subspace};
use qsheaf::json::{
    parse, BasisJson, LatticeJson, MatrixJson, OperatorJson, SpectralFamilyJson, SubspaceJson,
};
use qsheaf::lattice::{
    enumerate_points, enumerate_quasipoints, set_name, stonean_space, verify_basis_laws, verify_clopen_basis,
    FiniteLattice, DEFAULT_POINT_CAP,
};
use qsheaf::quantum::{observable_value, restrict_family, spectral_family_of, QuantumSpectralFamily};
use qsheaf::sector::{
    gelfand_transform, hermitian_from_classical, is_point_measure, sector_bridge_family, state_measure,
    BooleanSector, SectorOperator,
};
use qsheaf::verify::{self, Suite, VerifyConfig};
use qsheaf::Tolerances;
use serde_json::{json, Value};

use crate::report::{Outcome, Table};
use crate::{Command, Global, LatticeAction, QuantumAction, SectorAction};

pub fn run(cmd: &Command, g: &Global, tol: &Tolerances, inputs: &mut Vec<Vec<u8>>) -> anyhow::Result<Outcome> {
    match cmd {
        Command::Lattice { action, file } => {
            let l = read::<LatticeJson>(file, inputs)?.to_lattice()?;
            Ok(lattice(*action, &l))
        }
        Command::Quantum { action, file, line, subspace } => {
            let a = read::<MatrixJson>(file, inputs)?.to_matrix()?;
            let sigma = spectral_family_of(&a, tol)?;
            quantum(*action, &sigma, line, subspace.as_deref(), tol, inputs)
        }
        Command::Sector { action, basis, op, rho } => sector(*action, basis.as_deref(), op.as_deref(), rho.as_deref(), tol, inputs),
        Command::Verify { suite } => {
            let suites = Suite::parse(suite).ok_or_else(|| anyhow!("unknown suite `{suite}`"))?;
            let cfg = VerifyConfig { seed: g.seed, max_dim: g.dim.max(2), window: g.window, tol: tol.clone() };
            Ok(run_verify(&suites, &cfg))
        }
    }
}

fn read<T: serde::de::DeserializeOwned>(path: &Path, inputs: &mut Vec<Vec<u8>>) -> anyhow::Result<T> {
    let bytes = std::fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
    let text = String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()))?;
    inputs.push(bytes);
    parse(&text).with_context(|| format!("in {}", path.display()))
}

fn names(l: &FiniteLattice, members: &[usize]) -> Value {
    json!(members.iter().map(|&m| l.name(m)).collect::<Vec<_>>())
}

fn lattice(action: LatticeAction, l: &FiniteLattice) -> Outcome {
    let mut out = Outcome::default();
    match action {
        LatticeAction::Points => {
            out.table = Table::new(&["generator", "members"]);
            match enumerate_points(l, DEFAULT_POINT_CAP) {
                Ok(points) => {
                    for p in points {
                        out.table.push(vec![json!(l.name(p.generator())), names(l, p.members())]);
                    }
                }
                Err(e) => {
                    out.details.insert("skipped".into(), json!(e.to_string()));
                }
            }
        }
        LatticeAction::Quasipoints => {
            out.table = Table::new(&["atom", "members"]);
            for q in enumerate_quasipoints(l) {
                out.table.push(vec![json!(l.name(q.atom())), names(l, q.members())]);
            }
        }
        LatticeAction::Stonean => {
            let space = stonean_space(l);
            let atoms: Vec<&str> = space.quasipoints().iter().map(|q| l.name(q.atom())).collect();
            out.table = Table::new(&["element", "basis"]);
            for e in 0..l.len() {
                let basis: Vec<&str> = space.basis(e).iter().map(|&i| atoms[i]).collect();
                out.table.push(vec![json!(l.name(e)), json!(basis)]);
            }
            let laws = verify_basis_laws(l, &space);
            let clopen = verify_clopen_basis(&space);
            out.properties.push(json!({"id": "basis_laws", "passed": laws}));
            out.properties.push(json!({"id": "clopen_basis", "passed": clopen}));
            out.failed = !(laws && clopen);
        }
        LatticeAction::Check => {
            out.table = Table::new(&["property", "value"]);
            let boolean = l.is_boolean();
            let rows = [
                ("elements", json!(l.len())),
                ("bottom", json!(l.name(l.zero()))),
                ("top", json!(l.name(l.one()))),
                ("atoms", names(l, &l.atoms())),
                ("distributive", json!(l.is_distributive())),
                ("boolean", json!(boolean.is_some())),
            ];
            for (k, v) in rows {
                out.table.push(vec![json!(k), v]);
            }
            if let Some((a, b, c)) = l.first_distributivity_failure() {
                out.details.insert("distributivity_failure".into(), json!([l.name(a), l.name(b), l.name(c)]));
            }
        }
    }
    out
}

/// `"1,1"` or `"1:0,0:-1"`; the vector is normalized.
pub fn parse_line(text: &str) -> anyhow::Result<CVector> {
    let entries = text
        .split(',')
        .map(|part| {
            let part = part.trim();
            let (re, im) = part.split_once(':').unwrap_or((part, "0"));
            let re: f64 = re.trim().parse().with_context(|| format!("bad entry `{part}`"))?;
            let im: f64 = im.trim().parse().with_context(|| format!("bad entry `{part}`"))?;
            Ok(c(re, im))
        })
        .collect::<anyhow::Result<Vec<_>>>()?;
    let v = CVector::from_vec(entries);
    let norm = v.norm();
    if !(norm > 0.0 && norm.is_finite()) {
        bail!("line `{text}` has no direction");
    }
    Ok(v / c(norm, 0.0))
}

fn family_table(sigma: &QuantumSpectralFamily) -> Table {
    let mut t = Table::new(&["lambda", "dimension"]);
    for j in sigma.jumps() {
        t.push(vec![json!(j.lambda), json!(j.subspace.dim())]);
    }
    t
}

fn quantum(
    action: QuantumAction,
    sigma: &QuantumSpectralFamily,
    lines: &[String],
    subspace: Option<&Path>,
    tol: &Tolerances,
    inputs: &mut Vec<Vec<u8>>,
) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    match action {
        QuantumAction::Spectral => {
            out.table = family_table(sigma);
            out.details.insert("family".into(), serde_json::to_value(SpectralFamilyJson::from_family(sigma))?);
        }
        QuantumAction::Observable => {
            if lines.is_empty() {
                bail!("`quantum observable` needs at least one --line");
            }
            out.table = Table::new(&["line", "value"]);
            for text in lines {
                let x = parse_line(text)?;
                if x.len() != sigma.ambient_dim() {
                    bail!("line `{text}` has {} entries, the matrix is {}x{}", x.len(), sigma.ambient_dim(), sigma.ambient_dim());
                }
                let v = observable_value(sigma, &Subspace::line(&x)?, tol)?;
                out.table.push(vec![json!(text), json!(v)]);
            }
        }
        QuantumAction::Spectrum => {
            out.table = Table::new(&["eigenvalue", "multiplicity"]);
            let mut prev = 0;
            for j in sigma.jumps() {
                out.table.push(vec![json!(j.lambda), json!(j.subspace.dim() - prev)]);
                prev = j.subspace.dim();
            }
        }
        QuantumAction::Restrict => {
            let path = subspace.ok_or_else(|| anyhow!("`quantum restrict` needs --subspace"))?;
            let u = read::<SubspaceJson>(path, inputs)?.to_subspace(tol)?;
            let r = restrict_family(sigma, &u, tol)?;
            out.table = family_table(&r);
            out.details.insert("family".into(), serde_json::to_value(SpectralFamilyJson::from_family(&r))?);
        }
    }
    Ok(out)
}

fn load_sector(basis: Option<&str>, dim: usize, tol: &Tolerances, inputs: &mut Vec<Vec<u8>>) -> anyhow::Result<BooleanSector> {
    match basis {
        None | Some("I") => Ok(BooleanSector::standard(dim)),
        Some(path) => {
            let m = read::<MatrixJson>(Path::new(path), inputs)?.to_matrix()?;
            if m.nrows() != dim {
                bail!("basis is {}x{}, expected dimension {dim}", m.nrows(), m.ncols());
            }
            Ok(BooleanSector::from_basis(m, tol)?)
        }
    }
}

/// An operator file holds either coefficients with a basis, or a matrix that
/// must be diagonal in `--basis`.
fn load_operator(
    path: &Path,
    basis: Option<&str>,
    tol: &Tolerances,
    inputs: &mut Vec<Vec<u8>>,
) -> anyhow::Result<(SectorOperator, CMatrix)> {
    let v = read::<Value>(path, inputs)?;
    if v.get("coefficients").is_some() {
        let mut j: OperatorJson = serde_json::from_value(v).with_context(|| format!("in {}", path.display()))?;
        if let Some(b) = basis {
            let dim = j.coefficients.len();
            j.basis = match b {
                "I" => BasisJson::Named("I".into()),
                file => {
                    let m: MatrixJson = read(Path::new(file), inputs)?;
                    if m.rows != dim {
                        bail!("basis is {}x{}, the operator has {dim} coefficients", m.rows, m.cols);
                    }
                    BasisJson::Matrix(m)
                }
            };
        }
        let op = j.to_operator(tol)?;
        let m = op.to_matrix();
        return Ok((op, m));
    }
    let m: MatrixJson = serde_json::from_value(v).with_context(|| format!("in {}", path.display()))?;
    let m = m.to_matrix()?;
    let sector = load_sector(basis, m.nrows(), tol, inputs)?;
    Ok((SectorOperator::from_matrix(&sector, &m, tol)?, m))
}

fn sector(
    action: SectorAction,
    basis: Option<&str>,
    op: Option<&Path>,
    rho: Option<&Path>,
    tol: &Tolerances,
    inputs: &mut Vec<Vec<u8>>,
) -> anyhow::Result<Outcome> {
    let mut out = Outcome::default();
    let beta = |i: usize| json!(format!("β{}", i + 1));
    match action {
        SectorAction::Gelfand => {
            let path = op.ok_or_else(|| anyhow!("`sector gelfand` needs --op"))?;
            let (t, _) = load_operator(path, basis, tol, inputs)?;
            out.table = Table::new(&["quasipoint", "re", "im"]);
            for (i, z) in gelfand_transform(&t).into_iter().enumerate() {
                out.table.push(vec![beta(i), json!(z.re), json!(z.im)]);
            }
            out.details.insert("norm".into(), json!(t.norm()));
        }
        SectorAction::Measure | SectorAction::Pointmeasure => {
            let path = rho.ok_or_else(|| anyhow!("this command needs --rho"))?;
            let r = read::<MatrixJson>(path, inputs)?.to_matrix()?;
            let s = load_sector(basis, r.nrows(), tol, inputs)?;
            let mu = state_measure(&r, &s, tol)?;
            out.table = Table::new(&["quasipoint", "weight"]);
            for (i, w) in mu.weights.iter().enumerate() {
                out.table.push(vec![beta(i), json!(w)]);
            }
            out.details.insert("total".into(), json!(mu.total()));
            out.details.insert("trace".into(), json!(r.trace().re));
            if action == SectorAction::Pointmeasure {
                match is_point_measure(&mu, &s, &r, tol) {
                    Some(p) => {
                        out.details.insert("point".into(), beta(p.atom));
                        out.details.insert("distance".into(), json!(p.distance));
                    }
                    None => {
                        out.details.insert("point".into(), Value::Null);
                    }
                }
            }
        }
        SectorAction::Bridge => {
            let path = op.ok_or_else(|| anyhow!("`sector bridge` needs --op"))?;
            let (a, m) = match load_operator(path, basis, tol, inputs) {
                Ok((t, m)) => (t.sector().clone(), m),
                Err(e) if basis.is_none() => {
                    // a Hermitian matrix with no basis: use the sector of its eigenbasis
                    let text = std::str::from_utf8(inputs.last().map(Vec::as_slice).unwrap_or_default())?;
                    let m = parse::<MatrixJson>(text).map_err(|_| e)?.to_matrix()?;
                    (BooleanSector::of_operator(&m, tol)?, m)
                }
                Err(e) => return Err(e),
            };
            let sigma = spectral_family_of(&m, tol)?;
            let hat = sector_bridge_family(&sigma, &a, tol)?;
            out.table = Table::new(&["lambda", "set"]);
            for (lambda, set) in hat.jumps() {
                let labels = set_name(*set, |i| format!("β{}", i + 1));
                out.table.push(vec![json!(lambda), json!(labels)]);
            }
            let back = hermitian_from_classical(&hat, &a)?.to_matrix();
            let error = op_norm(&(back - &m));
            out.details.insert("induced_function".into(), json!(hat.induced_function()));
            out.details.insert("continuous".into(), json!(hat.is_continuous()));
            out.details.insert("reconstruction_error".into(), json!(error));
            let ok = error <= 1e-9 * op_norm(&m).max(1.0);
            out.properties.push(json!({"id": "reconstruction", "passed": ok}));
            out.failed = !ok;
        }
    }
    Ok(out)
}

fn run_verify(suites: &[Suite], cfg: &VerifyConfig) -> Outcome {
    let mut out = Outcome { table: Table::new(&["id", "suite", "name", "passed", "checks", "detail"]), ..Default::default() };
    for r in verify::run(suites, cfg) {
        eprintln!("{}", r.line());
        out.failed |= !r.passed;
        out.table.push(vec![
            json!(r.id),
            json!(r.suite.name()),
            json!(r.name),
            json!(r.passed),
            json!(r.checks),
            json!(r.detail),
        ]);
        out.properties.push(serde_json::to_value(&r).expect("serializable"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lines_parse_with_optional_imaginary_parts() {
        let v = parse_line("1,1").unwrap();
        assert!((v[0].re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        let v = parse_line("0:1, 0").unwrap();
        assert_eq!(v[0], c(0.0, 1.0));
        assert!(parse_line("0,0").is_err());
        assert!(parse_line("a").is_err());
    }
}
