//! The property battery behind the acceptance tests and `qsheaf verify`.
//! Every check is deterministic given the seed and the configuration.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::Rng;
use serde::Serialize;

use crate::bitset::BitSet;
use crate::classical::{
    enumerate_topologies, family_from_function, is_continuous_function, quasipoint_correspondence,
    sigma_family_from_function, ClassicalError, FiniteSigmaAlgebra, FiniteTopology, IntervalFamily,
};
use crate::hilbert::{
    c, hermitian_eigensystem, join, meet, op_norm, orthocomplement, projectors_commute, CMatrix, Subspace,
};
use crate::lattice::{
    enumerate_points, enumerate_quasipoints, stonean_space, verify_basis_laws, verify_clopen_basis, FiniteLattice,
    DEFAULT_POINT_CAP,
};
use crate::oracle::{maximal_filter_bases, points_exhaustive, stalk_quotient};
use crate::presheaf::{check_presheaf_axioms, check_sheaf_condition, stalk, Presheaf, SheafVerdict};
use crate::quantum::{
    observable_to_spectral, observable_value, reconstruction_residual, restrict_family, spectral_family_of,
    spectrum_of, ObservableData, QuantumSpectralFamily,
};
use crate::random;
use crate::sector::{
    character, gelfand_transform, hermitian_from_classical, is_point_measure, sector_bridge_family,
    sector_observable_function, state_measure, BooleanSector, SectorOperator, SectorQuasipoint,
};
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Lattice,
    Quantum,
    Sector,
    Classical,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Lattice, Suite::Quantum, Suite::Sector, Suite::Classical];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Lattice => "lattice",
            Suite::Quantum => "quantum",
            Suite::Sector => "sector",
            Suite::Classical => "classical",
        }
    }

    pub fn parse(name: &str) -> Option<Vec<Suite>> {
        match name {
            "all" => Some(Self::ALL.to_vec()),
            other => Self::ALL.iter().find(|s| s.name() == other).map(|&s| vec![s]),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Largest Hilbert dimension drawn in random batches.
    pub max_dim: usize,
    /// Half-width of the `λ` window for the interval carrier.
    pub window: f64,
    pub tol: Tolerances,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 7, max_dim: 8, window: 10.0, tol: Tolerances::default() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PropertyResult {
    pub id: String,
    pub suite: Suite,
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl PropertyResult {
    pub fn line(&self) -> String {
        format!("{} {}: {} ({})", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.detail)
    }
}

struct Tally {
    checks: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok && self.failures.len() < 1000 {
            self.failures.push(what());
        }
    }

    fn finish(self, id: &str, suite: Suite, name: &str, start: Instant, budget: Option<Duration>, extra: String) -> PropertyResult {
        let elapsed = start.elapsed();
        let mut failures = self.failures;
        if let Some(b) = budget {
            if elapsed > b {
                failures.push(format!("took {:.1}s, budget {:.0}s", elapsed.as_secs_f64(), b.as_secs_f64()));
            }
        }
        let passed = failures.is_empty();
        let mut detail = format!("{} checks", self.checks);
        if !extra.is_empty() {
            detail = format!("{detail}; {extra}");
        }
        if !passed {
            let shown: Vec<&str> = failures.iter().take(3).map(String::as_str).collect();
            detail = format!("{detail}; {} failures: {}", failures.len(), shown.join("; "));
        }
        PropertyResult { id: id.into(), suite, name: name.into(), passed, checks: self.checks, detail, elapsed }
    }
}

/// Chains, `2^n` for `n ≤ 4`, `M_3`, `N_5` and the Sierpinski open lattice.
pub fn fixture_lattices() -> Vec<(String, FiniteLattice)> {
    let mut out: Vec<(String, FiniteLattice)> = (1..=16).map(|n| (format!("chain{n}"), FiniteLattice::chain(n))).collect();
    out.extend((0..=4).map(|n| (format!("powerset{n}"), FiniteLattice::powerset(n))));
    out.push(("M3".into(), FiniteLattice::m3()));
    out.push(("N5".into(), FiniteLattice::n5()));
    out.push(("sierpinski".into(), FiniteTopology::sierpinski().open_lattice()));
    out
}

pub fn criterion_1(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (name, l) in fixture_lattices() {
        let mut fast: Vec<Vec<usize>> = enumerate_quasipoints(&l)
            .iter()
            .map(|q| {
                let mut m = q.members().to_vec();
                m.sort();
                m
            })
            .collect();
        fast.sort();
        let slow = maximal_filter_bases(&l);
        t.check(fast == slow, || format!("{name}: {} atom quasipoints vs {} maximal filter bases", fast.len(), slow.len()));
    }
    t.finish("1", Suite::Lattice, "quasipoint oracle equivalence", start, Some(Duration::from_secs(10)), String::new())
}

pub fn criterion_2(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut counts = Vec::new();
    for (name, l) in [("M3", FiniteLattice::m3()), ("N5", FiniteLattice::n5())] {
        let points = enumerate_points(&l, DEFAULT_POINT_CAP).expect("small lattice");
        let generators: Vec<&str> = points.iter().map(|p| l.name(p.generator())).collect();
        counts.push(format!("{name}: {}", points.len()));
        t.check(points.is_empty(), || format!("{name} has points generated by {generators:?}"));
        let brute = points_exhaustive(&l);
        t.check(brute.len() == points.len(), || format!("{name}: exhaustive search finds {} points", brute.len()));
    }
    for n in 0..=3 {
        let l = FiniteLattice::powerset(n);
        let points = enumerate_points(&l, DEFAULT_POINT_CAP).expect("small lattice");
        let got: BTreeSet<usize> = points.iter().map(|p| p.generator()).collect();
        let expected: BTreeSet<usize> = l.atoms().into_iter().collect();
        t.check(got == expected && points.len() == n, || format!("powerset{n}: points not indexed by the elements"));
        let mut members: Vec<Vec<usize>> = points.iter().map(|p| p.members().to_vec()).collect();
        members.iter_mut().for_each(|m| m.sort());
        members.sort();
        t.check(members == points_exhaustive(&l), || format!("powerset{n}: exhaustive search disagrees"));
    }
    let l = FiniteLattice::powerset(4);
    let got: BTreeSet<usize> = enumerate_points(&l, DEFAULT_POINT_CAP).unwrap().iter().map(|p| p.generator()).collect();
    t.check(got == l.atoms().into_iter().collect(), || "powerset4: points not indexed by the elements".into());
    t.finish("2", Suite::Lattice, "finite point nonexistence", start, None, counts.join(", "))
}

pub fn criterion_3(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (name, l) in fixture_lattices() {
        let space = stonean_space(&l);
        t.check(verify_basis_laws(&l, &space), || format!("{name}: Q_(U∧V) ≠ Q_U ∩ Q_V"));
        t.check(verify_clopen_basis(&space), || format!("{name}: basis is not clopen"));
    }
    t.finish("3", Suite::Lattice, "Stonean basis laws", start, None, String::new())
}

pub fn criterion_4(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut counts = Vec::new();
    for n in 0..=4 {
        let tops = enumerate_topologies(n).expect("at most 5 points");
        counts.push(tops.len().to_string());
        for top in &tops {
            let r = quasipoint_correspondence(top);
            t.check(r.bijective && r.basis_compatible, || {
                format!("{:?}: {} -> {} quasipoints", top.opens(), r.source_count, r.target_count)
            });
        }
    }
    let extra = format!("topologies per size {}", counts.join("/"));
    t.finish("4", Suite::Classical, "regularization of quasipoints", start, Some(Duration::from_secs(60)), extra)
}

fn dims(cfg: &VerifyConfig, lo: usize) -> Vec<usize> {
    (lo..=cfg.max_dim.max(lo)).collect()
}

pub fn criterion_5(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut violations = 0usize;
    let mut commuting = 0usize;
    for n in dims(cfg, 2) {
        let mut rng = random::stream(cfg.seed, 500 + n as u64);
        for i in 0..500 {
            let u = random::any_subspace(&mut rng, n);
            let v = random::any_subspace(&mut rng, n);
            let (uc, vc) = (orthocomplement(&u, tol), orthocomplement(&v, tol));
            let lhs = orthocomplement(&meet(&u, &v, tol).unwrap(), tol);
            let rhs = join(&uc, &vc, tol).unwrap();
            t.check(lhs.distance(&rhs) <= 1e-8, || format!("dim {n} pair {i}: (U∧V)⊥ ≠ U⊥∨V⊥"));
            let lhs = orthocomplement(&join(&u, &v, tol).unwrap(), tol);
            let rhs = meet(&uc, &vc, tol).unwrap();
            t.check(lhs.distance(&rhs) <= 1e-8, || format!("dim {n} pair {i}: (U∨V)⊥ ≠ U⊥∧V⊥"));
            t.check(orthocomplement(&uc, tol).distance(&u) <= 1e-8, || format!("dim {n} pair {i}: U⊥⊥ ≠ U"));

            // half the triples come from one random sector, so they commute
            let triple: [Subspace; 3] = if i % 2 == 0 {
                [u, v, random::any_subspace(&mut rng, n)]
            } else {
                let sector = BooleanSector::from_basis(random::unitary(&mut rng, n), tol).unwrap();
                let mut pick = || sector.element(random::subset(&mut rng, n).into_iter().collect());
                [pick(), pick(), pick()]
            };
            let [a, b, w] = &triple;
            let left = meet(a, &join(b, w, tol).unwrap(), tol).unwrap();
            let right = join(&meet(a, b, tol).unwrap(), &meet(a, w, tol).unwrap(), tol).unwrap();
            let distributes = left.distance(&right) <= 1e-8;
            let pairwise = projectors_commute(a, b, tol).unwrap()
                && projectors_commute(a, w, tol).unwrap()
                && projectors_commute(b, w, tol).unwrap();
            if pairwise {
                commuting += 1;
                t.check(distributes, || format!("dim {n} triple {i}: commuting triple fails distributivity"));
            } else if !distributes {
                violations += 1;
            }
        }
    }
    t.check(violations > 0, || "no non-commuting triple violates distributivity".into());
    let extra = format!("{commuting} commuting triples, {violations} distributivity violations");
    t.finish("5", Suite::Quantum, "subspace lattice battery", start, None, extra)
}

fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> CMatrix {
    match k % 3 {
        0 => random::hermitian(rng, n),
        1 => random::degenerate_hermitian(rng, n),
        _ => random::hermitian(rng, n) * c(100.0, 0.0),
    }
}

fn family_distance(a: &QuantumSpectralFamily, b: &QuantumSpectralFamily) -> f64 {
    if a.jumps().len() != b.jumps().len() {
        return f64::INFINITY;
    }
    a.jumps()
        .iter()
        .zip(b.jumps())
        .map(|(x, y)| if (x.lambda - y.lambda).abs() > 1e-8 { f64::INFINITY } else { x.subspace.distance(&y.subspace) })
        .fold(0.0, f64::max)
}

pub fn criterion_6(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 600);
    let mut worst = 0.0f64;
    for k in 0..200 {
        let n = rng.random_range(1..=cfg.max_dim);
        let a = random_hermitian(&mut rng, n, k);
        let sigma = match spectral_family_of(&a, tol) {
            Ok(s) => s,
            Err(e) => {
                t.check(false, || format!("matrix {k}: {e}"));
                continue;
            }
        };
        let back = ObservableData::from_family(&sigma).and_then(|d| observable_to_spectral(&d, tol));
        match back {
            Ok(back) => {
                let d = family_distance(&sigma, &back);
                t.check(d <= 1e-8, || format!("matrix {k}: round trip moved by {d:e}"));
            }
            Err(e) => t.check(false, || format!("matrix {k}: {e}")),
        }
        let residual = reconstruction_residual(&a, &sigma);
        let bound = 1e-8 * op_norm(&a).max(1.0);
        worst = worst.max(residual / bound);
        t.check(residual <= bound, || format!("matrix {k}: residual {residual:e} above {bound:e}"));
    }
    let extra = format!("worst residual {worst:.2e} of bound");
    t.finish("6", Suite::Quantum, "spectral round trips", start, None, extra)
}

pub fn criterion_7(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 700);
    for k in 0..50 {
        let n = rng.random_range(1..=cfg.max_dim);
        let a = random_hermitian(&mut rng, n, k);
        let sigma = spectral_family_of(&a, tol).expect("Hermitian input");
        let spectrum = spectrum_of(&sigma);
        for _ in 0..1000 {
            let l = random::line(&mut rng, n);
            let v = observable_value(&sigma, &l, tol).expect("a line");
            t.check(spectrum.iter().any(|s| (s - v).abs() <= 1e-8), || format!("matrix {k}: value {v} is not an eigenvalue"));
        }
        let system = hermitian_eigensystem(&a, tol).expect("Hermitian input");
        t.check(system.len() == spectrum.len(), || format!("matrix {k}: eigenvalue count differs"));
        for e in &system {
            let x = e.space.frame().column(0).into_owned();
            let v = observable_value(&sigma, &Subspace::line(&x).unwrap(), tol).unwrap();
            t.check((v - e.value).abs() <= 1e-8 * e.value.abs().max(1.0), || {
                format!("matrix {k}: eigenvalue {} not attained (got {v})", e.value)
            });
        }
    }
    t.finish("7", Suite::Quantum, "observable image is the spectrum", start, None, String::new())
}

fn random_sector<R: Rng + ?Sized>(rng: &mut R, n: usize, tol: &Tolerances) -> BooleanSector {
    BooleanSector::from_basis(random::unitary(rng, n), tol).expect("unitary")
}

pub fn criterion_8(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 800);
    for k in 0..200 {
        let n = rng.random_range(1..=cfg.max_dim);
        let sector = random_sector(&mut rng, n, tol);
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let coeffs = (0..n).map(|_| random::complex_gaussian(rng)).collect();
            SectorOperator::new(&sector, coeffs).unwrap().to_matrix()
        };
        let (ma, mb) = (draw(&mut rng), draw(&mut rng));
        let ta = SectorOperator::from_matrix(&sector, &ma, tol).unwrap();
        let tb = SectorOperator::from_matrix(&sector, &mb, tol).unwrap();
        let tab = SectorOperator::from_matrix(&sector, &(&ma * &mb), tol).unwrap();
        for i in 0..n {
            let beta = SectorQuasipoint::new(&sector, i).unwrap();
            let (x, y, z) = (
                character(&beta, &ta, tol).unwrap(),
                character(&beta, &tb, tol).unwrap(),
                character(&beta, &tab, tol).unwrap(),
            );
            t.check((z - x * y).norm() <= 1e-9, || format!("operator {k}: character not multiplicative at β{i}"));
        }
        let table = gelfand_transform(&ta);
        let sup = table.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let norm = op_norm(&ma);
        t.check((sup - norm).abs() <= 1e-9, || format!("operator {k}: sup {sup} vs norm {norm}"));

        let values: Vec<f64> = (0..n)
            .map(|_| if k % 2 == 0 { rng.random_range(-2..=2) as f64 } else { random::real(&mut rng, -5.0, 5.0) })
            .collect();
        let h = SectorOperator::real(&sector, &values).unwrap().to_matrix();
        let h = (&h + h.adjoint()) * c(0.5, 0.0);
        let th = SectorOperator::from_matrix(&sector, &h, tol).unwrap();
        let f = sector_observable_function(&th, tol).unwrap();
        let g = gelfand_transform(&th);
        for i in 0..n {
            t.check((f[i] - g[i].re).abs() <= 1e-9 && g[i].im.abs() <= 1e-9, || {
                format!("operator {k}: f_A({i}) = {} but table gives {}", f[i], g[i])
            });
        }

        let s: BitSet = random::subset(&mut rng, n).into_iter().collect();
        let p = SectorOperator::from_matrix(&sector, &sector.element(s).projector(), tol).unwrap();
        let chi = gelfand_transform(&p);
        for i in 0..n {
            let want = if s.contains(i) { 1.0 } else { 0.0 };
            t.check((chi[i] - c(want, 0.0)).norm() <= 1e-9, || format!("operator {k}: P_U does not map to χ at β{i}"));
        }
    }
    t.finish("8", Suite::Sector, "Gelfand transform on sectors", start, None, String::new())
}

/// The atom whose line is the range of `ρ`, when `ρ` is a rank-one projector
/// onto a sector basis line; decided from the eigensystem alone.
fn rank_one_basis_line(rho: &CMatrix, sector: &BooleanSector, tol: &Tolerances) -> Option<usize> {
    let system = hermitian_eigensystem(rho, tol).ok()?;
    let nonzero: Vec<_> = system.iter().filter(|e| e.value.abs() > 1e-8).collect();
    let [top] = nonzero[..] else { return None };
    if (top.value - 1.0).abs() > 1e-8 || top.space.dim() != 1 {
        return None;
    }
    (0..sector.len()).find(|&i| sector.line(i).distance(&top.space) <= tol.eq)
}

pub fn criterion_9(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 900);
    let mut positives = 0usize;
    for s in 0..20 {
        let n = 1 + s % cfg.max_dim.min(6);
        let sector = random_sector(&mut rng, n, tol);
        let other = random_sector(&mut rng, n, tol);
        for k in 0..10 {
            let rho = match k % 5 {
                0 | 1 => {
                    let i = rng.random_range(0..n);
                    let x = sector.vector(i) * random::phase(&mut rng);
                    &x * x.adjoint()
                }
                2 => random::density(&mut rng, n, 1),
                3 => {
                    let rank = rng.random_range(1..=n);
                    random::density(&mut rng, n, rank)
                }
                _ => {
                    let i = rng.random_range(0..n);
                    let x = other.vector(i);
                    &x * x.adjoint()
                }
            };
            let truth = rank_one_basis_line(&rho, &sector, tol);
            let mu = match state_measure(&rho, &sector, tol) {
                Ok(m) => m,
                Err(e) => {
                    t.check(false, || format!("sector {s} state {k}: {e}"));
                    continue;
                }
            };
            let got = is_point_measure(&mu, &sector, &rho, tol).map(|p| p.atom);
            positives += usize::from(truth.is_some());
            t.check(got == truth, || format!("sector {s} state {k}: returned {got:?}, expected {truth:?}"));
        }
    }
    let extra = format!("{positives} point states");
    t.finish("9", Suite::Sector, "point measures are basis lines", start, None, extra)
}

pub fn criterion_10(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    let w = cfg.window;
    let mut rng = random::stream(cfg.seed, 1000);
    let families: Vec<(&str, IntervalFamily, fn(f64) -> f64)> = vec![
        ("id", IntervalFamily::builtin("id").unwrap(), |x| x),
        ("abs", IntervalFamily::builtin("abs").unwrap(), f64::abs),
        ("ln", IntervalFamily::builtin("ln").unwrap(), |x: f64| x.abs().ln()),
    ];
    for (name, fam, f) in &families {
        for _ in 0..1000 {
            let x = random::real(&mut rng, -w, w);
            if x == 0.0 {
                continue;
            }
            match fam.induced_value(x) {
                Ok(v) => t.check((v - f(x)).abs() <= 1e-7, || format!("{name}({x}) = {v}, want {}", f(x))),
                Err(e) => t.check(false, || format!("{name}({x}): {e}")),
            }
        }
    }
    let ln = &families[2].1;
    t.check(!ln.is_admissible(0.0), || "0 is admissible for ln".into());
    t.check(
        matches!(ln.induced_value(0.0), Err(ClassicalError::PointNotAdmissible(_))),
        || "ln accepts 0".into(),
    );
    let step = IntervalFamily::builtin("step").unwrap();
    for _ in 0..1000 {
        let x = random::real(&mut rng, -w, w);
        if x.fract() == 0.0 {
            continue;
        }
        let v = step.induced_value(x);
        t.check(v.as_ref().ok() == Some(&x.floor()), || format!("step({x}) = {v:?}"));
    }
    let verdicts: Vec<bool> = ["id", "abs", "ln", "step"]
        .iter()
        .map(|n| IntervalFamily::builtin(n).unwrap().is_continuous(w))
        .collect();
    t.check(verdicts == [true, true, true, false], || format!("continuity verdicts {verdicts:?}"));
    for name in ["id", "abs", "ln", "step"] {
        t.check(IntervalFamily::builtin(name).unwrap().check_axioms(w), || format!("{name} fails the family axioms"));
    }
    t.finish("10", Suite::Classical, "built-in interval families", start, Some(Duration::from_secs(5)), String::new())
}

/// Every function `M → {0, 1, 2}` on `n` points.
fn functions(n: usize) -> impl Iterator<Item = Vec<f64>> {
    (0..3usize.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let v = code % 3;
                code /= 3;
                v as f64
            })
            .collect()
    })
}

/// All set partitions of `0..n`, as block lists.
fn partitions(n: usize) -> Vec<Vec<BitSet>> {
    let mut out = vec![Vec::new()];
    for x in 0..n {
        let mut next = Vec::new();
        for p in &out {
            for b in 0..p.len() {
                let mut q: Vec<BitSet> = p.clone();
                q[b] = q[b].with(x);
                next.push(q);
            }
            let mut q = p.clone();
            q.push(BitSet::singleton(x));
            next.push(q);
        }
        out = next;
    }
    out
}

pub fn criterion_11(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for n in 0..=4 {
        for top in enumerate_topologies(n).expect("at most 5 points") {
            for f in functions(n) {
                let sigma = family_from_function(&top, &f).expect("finite values");
                let whole = top.whole();
                t.check(sigma.admissible_domain() == whole, || format!("{:?}: 𝒟 ≠ M", top.opens()));
                let g = sigma.induced_function();
                let sublevels_open = f.iter().all(|&v| top.is_open((0..n).filter(|&x| f[x] <= v).collect()));
                t.check((g == f) == sublevels_open, || format!("{:?}, f = {f:?}: f_σ = {g:?}", top.opens()));
                if is_continuous_function(&top, &f) {
                    t.check(g == f && sigma.is_continuous() && sigma.values_are_regular(), || {
                        format!("{:?}, continuous f = {f:?}: round trip or continuity fails", top.opens())
                    });
                }
                let again = family_from_function(&top, &g).expect("finite values");
                t.check(again == sigma, || format!("{:?}, f = {f:?}: σ_(f_σ) ≠ σ", top.opens()));
            }
        }
    }
    for n in 0..=5 {
        for blocks in partitions(n) {
            let algebra = FiniteSigmaAlgebra::from_partition(n, &blocks).expect("a partition");
            for f in functions(n) {
                let measurable = algebra.is_measurable(&f);
                match sigma_family_from_function(&algebra, &f) {
                    Ok(sigma) => {
                        t.check(measurable && sigma.induced_function() == f, || {
                            format!("{blocks:?}, f = {f:?}: f_σ ≠ f")
                        });
                        let again = sigma_family_from_function(&algebra, &sigma.induced_function()).unwrap();
                        t.check(again.jumps() == sigma.jumps(), || format!("{blocks:?}, f = {f:?}: σ_(f_σ) ≠ σ"));
                    }
                    Err(ClassicalError::NotMeasurable(_)) => {
                        t.check(!measurable, || format!("{blocks:?}, f = {f:?}: measurable but rejected"))
                    }
                    Err(e) => t.check(false, || format!("{blocks:?}, f = {f:?}: {e}")),
                }
            }
        }
    }
    t.finish("11", Suite::Classical, "finite-carrier round trips", start, None, String::new())
}

pub fn criterion_12(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 1200);
    for k in 0..100 {
        let n = rng.random_range(1..=cfg.max_dim);
        let sector = random_sector(&mut rng, n, tol);
        let values: Vec<f64> = (0..n)
            .map(|_| if k % 2 == 0 { rng.random_range(-2..=2) as f64 } else { random::real(&mut rng, -5.0, 5.0) })
            .collect();
        let a = SectorOperator::real(&sector, &values).unwrap().to_matrix();
        let a = (&a + a.adjoint()) * c(0.5, 0.0);
        let sigma = spectral_family_of(&a, tol).expect("Hermitian input");
        let hat = match sector_bridge_family(&sigma, &sector, tol) {
            Ok(h) => h,
            Err(e) => {
                t.check(false, || format!("operator {k}: {e}"));
                continue;
            }
        };
        let f_hat = hat.induced_function();
        for i in 0..n {
            let f = observable_value(&sigma, sector.line(i), tol).unwrap();
            t.check((f_hat[i] - f).abs() <= 1e-9, || format!("operator {k}: f_σ̂(β{i}) = {} vs f_σ = {f}", f_hat[i]));
        }
        t.check(hat.is_continuous(), || format!("operator {k}: σ̂ is not continuous"));
        let back = hermitian_from_classical(&hat, &sector).unwrap().to_matrix();
        let d = op_norm(&(back - &a));
        t.check(d <= 1e-9, || format!("operator {k}: reconstruction off by {d:e}"));
    }
    t.finish("12", Suite::Sector, "sector bridge coherence", start, None, String::new())
}

/// Presheaf axioms and stalks against the quotient oracle on the fixtures.
pub fn presheaf_properties(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for (name, l) in fixture_lattices().into_iter().filter(|(_, l)| l.len() <= 8) {
        let sheaves = [
            ("constant", Presheaf::constant(l.clone())),
            ("atom functions", Presheaf::atom_functions(l.clone(), 2)),
            ("constant valued", Presheaf::constant_valued(l.clone(), 2)),
        ];
        for (kind, p) in &sheaves {
            t.check(check_presheaf_axioms(p), || format!("{name}/{kind}: presheaf axioms fail"));
            for q in enumerate_quasipoints(&l) {
                let classes = stalk_quotient(p, q.members()).len();
                t.check(stalk(p, &q).len() == classes, || format!("{name}/{kind}: stalk size differs from the quotient"));
            }
        }
    }
    let p = Presheaf::atom_functions(FiniteLattice::powerset(2), 2);
    let l = p.lattice();
    let cover = [l.index_of("{1}").unwrap(), l.index_of("{2}").unwrap()];
    let verdict = check_sheaf_condition(&p, l.one(), &cover);
    t.check(matches!(verdict, Ok(SheafVerdict::GluesUniquely)), || format!("powerset2 gluing: {verdict:?}"));
    t.finish("L1", Suite::Lattice, "presheaf axioms and stalks", start, None, String::new())
}

/// Restricting `σ_A` to a random subspace agrees with meeting every value.
pub fn restriction_properties(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 1300);
    for k in 0..100 {
        let n = rng.random_range(1..=cfg.max_dim);
        let a = random_hermitian(&mut rng, n, k);
        let sigma = spectral_family_of(&a, tol).unwrap();
        let u = random::any_subspace(&mut rng, n);
        let r = restrict_family(&sigma, &u, tol).unwrap();
        for j in sigma.jumps() {
            let want = meet(&j.subspace, &u, tol).unwrap();
            t.check(r.value_at(j.lambda).distance(&want) <= 1e-8, || format!("matrix {k}: restriction at {}", j.lambda));
        }
        t.check(r.domain().distance(&u) <= 1e-8, || format!("matrix {k}: restricted domain"));
    }
    t.finish("Q1", Suite::Quantum, "restriction to subspaces", start, None, String::new())
}

/// Heyting law and Boolean regular opens on every topology up to 4 points.
pub fn heyting_properties(_cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let mut t = Tally::new();
    for n in 0..=4 {
        for top in enumerate_topologies(n).unwrap() {
            for &u in top.opens() {
                let uc = top.pseudocomplement(u);
                t.check(top.pseudocomplement(top.pseudocomplement(uc)) == uc, || format!("{:?}: U^ccc ≠ U^c", top.opens()));
            }
            t.check(top.regular_open_lattice().verify_boolean(&top), || format!("{:?}: T_r not Boolean", top.opens()));
        }
    }
    t.finish("C1", Suite::Classical, "Heyting law and regular opens", start, None, String::new())
}

/// `U ∈ β` or `U⊥ ∈ β`, exclusively, for sector elements; `ℂe_i` is minimal.
pub fn sector_quasipoint_properties(cfg: &VerifyConfig) -> PropertyResult {
    let start = Instant::now();
    let tol = &cfg.tol;
    let mut t = Tally::new();
    let mut rng = random::stream(cfg.seed, 1400);
    for n in 1..=cfg.max_dim.min(6) {
        let sector = random_sector(&mut rng, n, tol);
        for i in 0..n {
            let beta = SectorQuasipoint::new(&sector, i).unwrap();
            for m in 0..(1u64 << n) {
                let u = sector.element(BitSet(m));
                let inside = beta.contains(&u, tol);
                let outside = beta.contains(&orthocomplement(&u, tol), tol);
                t.check(inside.is_some() && outside.is_some() && inside != outside, || format!("dim {n}: dichotomy fails at β{i}"));
                if inside == Some(true) {
                    t.check(u.contains(beta.minimal_element(), tol), || format!("dim {n}: ℂe_{i} not minimal"));
                }
            }
        }
    }
    t.finish("S1", Suite::Sector, "sector quasipoint dichotomy", start, None, String::new())
}

pub type Property = fn(&VerifyConfig) -> PropertyResult;

/// The acceptance criteria in order.
pub const CRITERIA: [(Suite, Property); 12] = [
    (Suite::Lattice, criterion_1),
    (Suite::Lattice, criterion_2),
    (Suite::Lattice, criterion_3),
    (Suite::Classical, criterion_4),
    (Suite::Quantum, criterion_5),
    (Suite::Quantum, criterion_6),
    (Suite::Quantum, criterion_7),
    (Suite::Sector, criterion_8),
    (Suite::Sector, criterion_9),
    (Suite::Classical, criterion_10),
    (Suite::Classical, criterion_11),
    (Suite::Sector, criterion_12),
];

const EXTRA: [(Suite, Property); 4] = [
    (Suite::Lattice, presheaf_properties),
    (Suite::Quantum, restriction_properties),
    (Suite::Sector, sector_quasipoint_properties),
    (Suite::Classical, heyting_properties),
];

/// Properties of the given suites, criteria first.
pub fn properties(suites: &[Suite]) -> Vec<(Suite, Property)> {
    let mut out: Vec<(Suite, Property)> = Vec::new();
    for &s in suites {
        out.extend(CRITERIA.iter().chain(&EXTRA).copied().filter(|(ps, _)| *ps == s));
    }
    out
}

pub fn run(suites: &[Suite], cfg: &VerifyConfig) -> Vec<PropertyResult> {
    properties(suites).into_iter().map(|(_, p)| p(cfg)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_are_counted_by_bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
    }

    #[test]
    fn suites_partition_the_properties() {
        assert_eq!(properties(&Suite::ALL).len(), 16);
        let per: usize = Suite::ALL.iter().map(|&s| properties(&[s]).len()).sum();
        assert_eq!(per, 16);
        assert_eq!(Suite::parse("all").unwrap().len(), 4);
        assert!(Suite::parse("bogus").is_none());
    }
}
