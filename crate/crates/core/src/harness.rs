//! Set-level analysis over finite certified candidate sets: candidate
//! generation, classification tables, the dichotomy and classical-case
//! checks, random instances, and reproduction of the built-in examples.
//!
//! The sets `E`, `E_ε`, `E_e` are infinite and never computed. Every check
//! here is pointwise over a sample, so a clean report says nothing about
//! points that were not sampled.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::efficiency::{self, CriterionForm, Verdict};
use crate::error::{Error, Result};
use crate::lp;
use crate::par;
use crate::polyhedron::{HPolyhedron, PolyCone};
use crate::rational::{self, frac, int, serde_q, Matrix, Rational};
use crate::vop::{LinearVop, OrthantTest, Perturbation, PerturbationKind, QueryPoint};

/// The three worked examples plus an orthant-ordered rewrite of the third.
pub mod fixtures {
    use super::*;

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    /// `X = K = R²_+`, `f(x) = (-x₁, x₂)`.
    pub fn orthant_shift() -> LinearVop {
        LinearVop::new(
            vec![v(&[-1, 0]), v(&[0, 1])],
            v(&[0, 0]),
            HPolyhedron::orthant(2),
            PolyCone::orthant(2),
        )
        .expect("fixture is well formed")
    }

    /// `X = {x₁ ≥ 0}`, `f = id`, `K = R²_+`.
    pub fn half_plane_strip() -> LinearVop {
        LinearVop::new(rational::identity(2), v(&[0, 0]), half_plane(), PolyCone::orthant(2))
            .expect("fixture is well formed")
    }

    /// `X = {x₁ ≥ 0}`, `f = id`, `K = {v : 0 ≤ v₂ ≤ v₁}`.
    pub fn wedge_strip() -> LinearVop {
        LinearVop::new(rational::identity(2), v(&[0, 0]), half_plane(), wedge())
            .expect("fixture is well formed")
    }

    /// The wedge strip pushed through `T(v) = (v₁ - v₂, v₂)`, which maps the
    /// wedge onto `R²_+`: `f'(x) = (x₁ - x₂, x₂)` with the orthant order.
    /// A perturbation `e` of the original becomes `ε = T e`.
    pub fn wedge_strip_orthant() -> LinearVop {
        LinearVop::new(vec![v(&[1, -1]), v(&[0, 1])], v(&[0, 0]), half_plane(), PolyCone::orthant(2))
            .expect("fixture is well formed")
    }

    /// `T e` for the orthant rewrite.
    pub fn wedge_to_orthant(e: &[Rational]) -> Vec<Rational> {
        vec![&e[0] - &e[1], e[1].clone()]
    }

    pub(super) fn half_plane() -> HPolyhedron {
        HPolyhedron::from_inequalities(2, vec![v(&[-1, 0])], v(&[0])).expect("shape")
    }

    pub(super) fn wedge() -> PolyCone {
        PolyCone::from_rows(vec![v(&[0, -1]), v(&[-1, 1])], Vec::new(), 2)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    Vertex,
    EdgeMidpoint,
    Anchor,
    RayProbe,
    Lattice,
}

/// Points of `X` with a tag recording how each was produced.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    #[serde(with = "serde_q::matrix")]
    pub points: Matrix,
    pub provenance: Vec<Provenance>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Adds `x` unless already present. Points outside `X` are refused.
    pub fn push(&mut self, x: Vec<Rational>, tag: Provenance, p: &LinearVop) -> bool {
        if !p.constraints().contains(&x) || self.points.contains(&x) {
            return false;
        }
        self.points.push(x);
        self.provenance.push(tag);
        true
    }

    pub fn from_points(p: &LinearVop, points: impl IntoIterator<Item = Vec<Rational>>, tag: Provenance) -> Self {
        let mut set = Self::default();
        for x in points {
            set.push(x, tag, p);
        }
        set
    }

    /// Exact containment check of every point.
    pub fn all_in(&self, p: &LinearVop) -> bool {
        self.points.iter().all(|x| p.constraints().contains(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Strategy {
    pub max_vertices: usize,
    /// Ray probes at `x + 2^k r` for `k < ray_steps`.
    pub ray_steps: u32,
    pub grid_step: Rational,
    /// Half-width of the lattice box around the anchor, clipped to the
    /// bounding box of `X` where that is finite.
    pub grid_extent: Rational,
    pub max_lattice_points: usize,
}

impl Default for Strategy {
    fn default() -> Self {
        Self {
            max_vertices: 64,
            ray_steps: 4,
            grid_step: frac(1, 2),
            grid_extent: int(2),
            max_lattice_points: 200,
        }
    }
}

impl Strategy {
    /// Small sets used by the random suites.
    pub fn compact() -> Self {
        Self { max_vertices: 6, ray_steps: 2, grid_step: int(1), grid_extent: int(1), max_lattice_points: 4 }
    }
}

pub const DEFAULT_MAX_DIM: usize = 6;

/// Dimension cap, overridable through `BENSONKIT_MAX_DIM`.
pub fn max_dim() -> usize {
    std::env::var("BENSONKIT_MAX_DIM").ok().and_then(|s| s.trim().parse().ok()).unwrap_or(DEFAULT_MAX_DIM)
}

fn subsets(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            if !go(i + 1, n, k, cur, visit) {
                return false;
            }
            cur.pop();
        }
        true
    }
    go(0, n, k, &mut Vec::new(), &mut visit);
}

/// Vertices of `X` from row subsets whose system has a unique solution
/// lying in `X`, at most `cap` of them.
pub fn vertices(x: &HPolyhedron, cap: usize) -> Vec<Vec<Rational>> {
    let x = x.prune_redundant();
    let n = x.dim();
    if x.is_empty() {
        return Vec::new();
    }
    let e = x.eq_lhs().len();
    if e > n {
        return Vec::new();
    }
    let mut found: Vec<Vec<Rational>> = Vec::new();
    subsets(x.ineq_lhs().len(), n - e, |idx| {
        let mut rows = x.eq_lhs().clone();
        let mut rhs = x.eq_rhs().to_vec();
        for &i in idx {
            rows.push(x.ineq_lhs()[i].clone());
            rhs.push(x.ineq_rhs()[i].clone());
        }
        if let Some(v) = rational::solve_unique(&rows, &rhs, n) {
            if x.contains(&v) && !found.contains(&v) {
                found.push(v);
            }
        }
        found.len() < cap
    });
    found
}

/// Rows of `x` tight at `v`: all equalities plus active inequalities.
pub fn active_rows(x: &HPolyhedron, v: &[Rational]) -> Matrix {
    let mut rows = x.eq_lhs().clone();
    for (a, b) in x.ineq_lhs().iter().zip(x.ineq_rhs()) {
        if rational::dot(a, v) == *b {
            rows.push(a.clone());
        }
    }
    rows
}

fn floor_div(a: &Rational, step: &Rational) -> BigInt {
    (a / step).floor().to_integer()
}

fn ceil_div(a: &Rational, step: &Rational) -> BigInt {
    (a / step).ceil().to_integer()
}

/// Candidate points of `X`: vertices, edge midpoints, a feasible anchor,
/// ray probes along recession directions, and lattice points.
pub fn enumerate_candidates(p: &LinearVop, strategy: &Strategy) -> Result<CandidateSet> {
    let n = p.n();
    let cap = max_dim();
    if n > cap {
        return Err(Error::DimensionTooLarge { dim: n, cap });
    }
    let x = p.constraints();
    let pruned = x.prune_redundant();
    let mut set = CandidateSet::default();

    let verts = vertices(&pruned, strategy.max_vertices);
    for v in &verts {
        set.push(v.clone(), Provenance::Vertex, p);
    }
    for i in 0..verts.len() {
        for j in i + 1..verts.len() {
            let a = active_rows(&pruned, &verts[i]);
            let b = active_rows(&pruned, &verts[j]);
            let common: Matrix = a.into_iter().filter(|r| b.contains(r)).collect();
            if n > 0 && rational::rank(&common) == n - 1 {
                let mid = rational::scale(&rational::add(&verts[i], &verts[j]), &frac(1, 2));
                set.push(mid, Provenance::EdgeMidpoint, p);
            }
        }
    }

    let anchor = match verts.first() {
        Some(v) => v.clone(),
        None => {
            let a = lp::feasible_point(x).ok_or(Error::EmptyConstraintSet)?;
            set.push(a.clone(), Provenance::Anchor, p);
            a
        }
    };

    let directions = x.recession_cone()?.probe_directions();
    let bases: Vec<Vec<Rational>> = if verts.is_empty() { vec![anchor.clone()] } else { verts.clone() };
    for base in &bases {
        for r in &directions {
            for k in 0..strategy.ray_steps {
                let t = Rational::from_integer(BigInt::one() << k);
                set.push(rational::add(base, &rational::scale(r, &t)), Provenance::RayProbe, p);
            }
        }
    }

    if strategy.max_lattice_points > 0 && strategy.grid_step.is_positive() {
        let step = &strategy.grid_step;
        let mut lo_hi = Vec::with_capacity(n);
        for (i, a) in anchor.iter().enumerate() {
            let e = rational::unit(n, i);
            let mut lo = a - &strategy.grid_extent;
            let mut hi = a + &strategy.grid_extent;
            if let Some(v) = lp::minimize(x, &e).value {
                lo = lo.max(v);
            }
            if let Some(v) = lp::maximize(x, &e).value {
                hi = hi.min(v);
            }
            lo_hi.push((ceil_div(&lo, step), floor_div(&hi, step)));
        }
        if lo_hi.iter().all(|(a, b)| a <= b) {
            let mut idx: Vec<BigInt> = lo_hi.iter().map(|(a, _)| a.clone()).collect();
            let mut added = 0;
            'grid: loop {
                let point: Vec<Rational> = idx.iter().map(|k| Rational::from_integer(k.clone()) * step).collect();
                if set.push(point, Provenance::Lattice, p) {
                    added += 1;
                    if added >= strategy.max_lattice_points {
                        break;
                    }
                }
                for axis in (0..n).rev() {
                    idx[axis] += 1;
                    if idx[axis] <= lo_hi[axis].1 {
                        continue 'grid;
                    }
                    idx[axis] = lo_hi[axis].0.clone();
                }
                break;
            }
        }
    }
    Ok(set)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRow {
    #[serde(with = "serde_q::vec")]
    pub point: Vec<Rational>,
    pub provenance: Option<Provenance>,
    pub eps_efficient: bool,
    pub benson_proper: bool,
    pub efficiency: Verdict,
    pub properness: Verdict,
}

fn classify_point(p: &LinearVop, pert: &Perturbation, x: &[Rational], tag: Option<Provenance>) -> Result<ClassificationRow> {
    let q = QueryPoint::new(p, x.to_vec())?;
    let efficiency = efficiency::is_eps_efficient(p, &q, pert)?;
    let properness = match pert.kind {
        PerturbationKind::Epsilon => efficiency::is_eps_properly_efficient(p, &q, pert)?,
        PerturbationKind::E => efficiency::is_benson_proper(p, &q, pert, CriterionForm::PlusK)?,
    };
    if properness.member && !efficiency.member {
        return Err(Error::Internal("proper point reported as not efficient".into()));
    }
    Ok(ClassificationRow {
        point: x.to_vec(),
        provenance: tag,
        eps_efficient: efficiency.member,
        benson_proper: properness.member,
        efficiency,
        properness,
    })
}

fn classify_with(
    p: &LinearVop,
    pert: &Perturbation,
    c: &CandidateSet,
    parallel: bool,
) -> Result<Vec<ClassificationRow>> {
    p.validate_perturbation(pert)?;
    let items: Vec<(usize, &Vec<Rational>)> = c.points.iter().enumerate().collect();
    let f = |(i, x): &(usize, &Vec<Rational>)| classify_point(p, pert, x, c.provenance.get(*i).copied());
    if parallel {
        par::try_map(&items, f)
    } else {
        par::try_map_sequential(&items, f)
    }
}

/// One row per candidate, in candidate order. With the `parallel` feature
/// the rows are computed concurrently.
pub fn classify(p: &LinearVop, pert: &Perturbation, c: &CandidateSet) -> Result<Vec<ClassificationRow>> {
    classify_with(p, pert, c, true)
}

/// As [`classify`], always on the calling thread.
pub fn classify_sequential(p: &LinearVop, pert: &Perturbation, c: &CandidateSet) -> Result<Vec<ClassificationRow>> {
    classify_with(p, pert, c, false)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum DichotomyOutcome {
    AllProper,
    NoneProper,
    Violation {
        proper: Box<ClassificationRow>,
        improper: Box<ClassificationRow>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    #[serde(flatten)]
    pub outcome: DichotomyOutcome,
    pub efficient_rows: usize,
    pub proper_rows: usize,
}

/// Among efficient rows, either all are proper or none are. An empty
/// efficient subset counts as all proper.
pub fn dichotomy_check(rows: &[ClassificationRow]) -> DichotomyReport {
    let efficient: Vec<&ClassificationRow> = rows.iter().filter(|r| r.eps_efficient).collect();
    let proper = efficient.iter().find(|r| r.benson_proper);
    let improper = efficient.iter().find(|r| !r.benson_proper);
    let outcome = match (proper, improper) {
        (Some(a), Some(b)) => DichotomyOutcome::Violation {
            proper: Box::new((*a).clone()),
            improper: Box::new((*b).clone()),
        },
        (None, Some(_)) => DichotomyOutcome::NoneProper,
        _ => DichotomyOutcome::AllProper,
    };
    DichotomyReport {
        outcome,
        efficient_rows: efficient.len(),
        proper_rows: efficient.iter().filter(|r| r.benson_proper).count(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsermannReport {
    pub candidates: usize,
    pub efficient: usize,
    pub counterexamples: Vec<ClassificationRow>,
}

impl IsermannReport {
    pub fn holds(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

/// With zero perturbation, every efficient candidate must be proper.
pub fn verify_isermann(p: &LinearVop, c: &CandidateSet) -> Result<IsermannReport> {
    let rows = classify(p, &Perturbation::zero(p.m(), PerturbationKind::E), c)?;
    Ok(IsermannReport {
        candidates: rows.len(),
        efficient: rows.iter().filter(|r| r.eps_efficient).count(),
        counterexamples: rows.into_iter().filter(|r| r.eps_efficient && !r.benson_proper).collect(),
    })
}

fn small_int(rng: &mut ChaCha8Rng, bound: i64) -> Rational {
    int(rng.gen_range(-bound..=bound))
}

/// Pointed simplicial cone `{G λ : λ ≥ 0}` for a random nonsingular `G`,
/// in H-form `-G⁻¹ v ≤ 0`.
fn random_simplicial_cone(rng: &mut ChaCha8Rng, m: usize) -> PolyCone {
    loop {
        let g: Matrix = (0..m)
            .map(|i| (0..m).map(|j| if i == j { int(rng.gen_range(1..=3)) } else { small_int(rng, 1) }).collect())
            .collect();
        if let Some(inv) = rational::inverse(&g) {
            let rows = inv.iter().map(|r| rational::neg(r)).collect();
            return PolyCone::from_rows(rows, Vec::new(), m);
        }
    }
}

/// Deterministic random problem: `row_budget` random rows satisfied by a
/// random integer anchor (so `X ≠ ∅`), sometimes closed off by a box, and
/// `K` either the orthant or a random pointed simplicial cone.
pub fn random_problem(seed: u64, n: usize, m: usize, row_budget: usize) -> LinearVop {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let anchor: Vec<Rational> = (0..n).map(|_| small_int(&mut rng, 2)).collect();
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..row_budget {
        let a: Vec<Rational> = (0..n).map(|_| small_int(&mut rng, 3)).collect();
        if rational::is_zero_vec(&a) {
            continue;
        }
        let slack = int(rng.gen_range(0..=2));
        rhs.push(rational::dot(&a, &anchor) + slack);
        lhs.push(a);
    }
    if rng.gen_bool(0.5) {
        for (i, a) in anchor.iter().enumerate() {
            let e = rational::unit(n, i);
            rhs.push(a + int(3));
            lhs.push(e.clone());
            rhs.push(-a + int(3));
            lhs.push(rational::neg(&e));
        }
    }
    let x = HPolyhedron::from_inequalities(n, lhs, rhs).expect("shapes agree");
    let matrix: Matrix = (0..m).map(|_| (0..n).map(|_| small_int(&mut rng, 3)).collect()).collect();
    let offset: Vec<Rational> = (0..m).map(|_| small_int(&mut rng, 2)).collect();
    let cone = if rng.gen_bool(0.5) { PolyCone::orthant(m) } else { random_simplicial_cone(&mut rng, m) };
    LinearVop::new(matrix, offset, x, cone).expect("anchor keeps X nonempty")
}

/// Random nonzero `e ∈ K` as a small nonnegative combination of extreme rays.
pub fn random_cone_vector(rng: &mut ChaCha8Rng, k: &PolyCone) -> Vec<Rational> {
    let rays = k.extreme_rays();
    let m = k.dim();
    if rays.is_empty() {
        return rational::zeros(m);
    }
    loop {
        let mut e = rational::zeros(m);
        for r in &rays {
            let c = int(rng.gen_range(0..=2));
            e = rational::add(&e, &rational::scale(r, &c));
        }
        if !rational::is_zero_vec(&e) {
            return e;
        }
    }
}

/// One random instance shape for the property suites.
pub fn random_instance(seed: u64) -> (LinearVop, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let n = rng.gen_range(1..=3);
    let m = rng.gen_range(1..=3);
    let rows = rng.gen_range(1..=4);
    (random_problem(seed, n, m, rows), rng)
}

struct InstanceResult {
    checks: usize,
    label: &'static str,
    failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    /// Outcome counts per instance, e.g. how many dichotomy checks were vacuous.
    pub tally: BTreeMap<String, usize>,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn collect(name: &str, seed: u64, results: Vec<Result<InstanceResult>>) -> Self {
        let mut report = Self {
            name: name.into(),
            seed,
            instances: results.len(),
            checks: 0,
            tally: BTreeMap::new(),
            failures: Vec::new(),
        };
        for (i, r) in results.into_iter().enumerate() {
            match r {
                Ok(r) => {
                    report.checks += r.checks;
                    *report.tally.entry(r.label.into()).or_default() += 1;
                    report.failures.extend(r.failures);
                }
                Err(e) => report.failures.push(format!("instance {i}: {e}")),
            }
        }
        report
    }
}

/// Plain and plus-K criterion forms agree at random `x̄ ∈ X`, `e ∈ K`.
pub fn form_agreement_suite(seed: u64, count: usize) -> SuiteReport {
    let results = par::map_range(count, |i| {
        let s = seed.wrapping_add(i as u64);
        let (p, mut rng) = random_instance(s);
        let c = enumerate_candidates(&p, &Strategy::compact())?;
        let x = c.points[rng.gen_range(0..c.len())].clone();
        let e = if rng.gen_bool(0.2) { rational::zeros(p.m()) } else { random_cone_vector(&mut rng, p.cone()) };
        let q = QueryPoint::new(&p, x.clone())?;
        let cmp = efficiency::forms_agree(&p, &q, &Perturbation::cone(e.clone()))?;
        let (label, failures) = match (cmp.agree, cmp.plain.member) {
            (true, true) => ("both proper", Vec::new()),
            (true, false) => ("both not proper", Vec::new()),
            (false, _) => (
                "disagree",
                vec![format!(
                    "seed {s}: forms disagree at x={} e={}",
                    rational::format_vector(&x),
                    rational::format_vector(&e)
                )],
            ),
        };
        Ok(InstanceResult { checks: 1, label, failures })
    });
    SuiteReport::collect("form agreement", seed, results)
}

/// Zero perturbation: efficient candidates are proper.
pub fn isermann_suite(seed: u64, count: usize) -> SuiteReport {
    let results = par::map_range(count, |i| {
        let s = seed.wrapping_add(i as u64);
        let (p, _) = random_instance(s);
        let c = enumerate_candidates(&p, &Strategy::compact())?;
        let report = verify_isermann(&p, &c)?;
        let failures = report
            .counterexamples
            .iter()
            .map(|r| format!("seed {s}: efficient but not proper at {}", rational::format_vector(&r.point)))
            .collect();
        let label = if report.efficient == 0 { "no efficient candidate" } else { "efficient candidates found" };
        Ok(InstanceResult { checks: report.candidates, label, failures })
    });
    SuiteReport::collect("classical case (e = 0)", seed, results)
}

/// `e ∈ K ∖ {0}`: the efficient candidates are all proper or none is.
/// With `orthant_only`, `K = R^m_+` and the perturbation is of kind `ε`.
pub fn dichotomy_suite(seed: u64, count: usize, orthant_only: bool) -> SuiteReport {
    let results = par::map_range(count, |i| {
        let s = seed.wrapping_add(i as u64);
        let (mut p, mut rng) = random_instance(s);
        if orthant_only && !p.cone_is_orthant(OrthantTest::Structural) {
            p = LinearVop::new(
                p.objective_matrix().clone(),
                p.objective_offset().to_vec(),
                p.constraints().clone(),
                PolyCone::orthant(p.m()),
            )?;
        }
        let e = random_cone_vector(&mut rng, p.cone());
        let pert = if orthant_only { Perturbation::epsilon(e.clone()) } else { Perturbation::cone(e.clone()) };
        let c = enumerate_candidates(&p, &Strategy::compact())?;
        let rows = classify(&p, &pert, &c)?;
        let report = dichotomy_check(&rows);
        let (label, failures) = match report.outcome {
            DichotomyOutcome::Violation { proper, improper } => (
                "violation",
                vec![format!(
                    "seed {s}: e={} proper at {} but not at {}",
                    rational::format_vector(&e),
                    rational::format_vector(&proper.point),
                    rational::format_vector(&improper.point)
                )],
            ),
            _ if report.efficient_rows == 0 => ("vacuous", Vec::new()),
            DichotomyOutcome::AllProper => ("all proper", Vec::new()),
            DichotomyOutcome::NoneProper => ("none proper", Vec::new()),
        };
        Ok(InstanceResult { checks: rows.len(), label, failures })
    });
    let name = if orthant_only { "dichotomy (orthant, epsilon)" } else { "dichotomy (pointed K, e)" };
    SuiteReport::collect(name, seed, results)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assertion {
    pub description: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleSection {
    pub name: String,
    pub parameters: String,
    pub candidates: usize,
    pub assertions: Vec<Assertion>,
}

impl ExampleSection {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExamplesReport {
    pub sections: Vec<ExampleSection>,
    pub note: String,
}

impl ExamplesReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(ExampleSection::passed)
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for s in &self.sections {
            let status = if s.passed() { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "[{status}] {} ({}; {} candidates)", s.name, s.parameters, s.candidates);
            for a in &s.assertions {
                let mark = if a.passed { "ok  " } else { "FAIL" };
                let _ = writeln!(out, "    {mark} {}", a.description);
            }
        }
        let _ = writeln!(out, "{}", self.note);
        out
    }
}

fn lattice(xs: &[Rational], ys: &[Rational]) -> Vec<Vec<Rational>> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| vec![x.clone(), y.clone()])).collect()
}

fn ints(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| int(x)).collect()
}

fn check(assertions: &mut Vec<Assertion>, description: impl Into<String>, passed: bool) {
    assertions.push(Assertion { description: description.into(), passed });
}

fn section(
    name: &str,
    p: &LinearVop,
    pert: &Perturbation,
    points: Vec<Vec<Rational>>,
    expect_efficient: impl Fn(&[Rational]) -> bool,
    expect_proper: impl Fn(&[Rational]) -> bool,
    expect_dichotomy: DichotomyOutcome,
) -> Result<(ExampleSection, Vec<ClassificationRow>)> {
    let c = CandidateSet::from_points(p, points, Provenance::Lattice);
    let rows = classify(p, pert, &c)?;
    let mut assertions = Vec::new();
    check(
        &mut assertions,
        "membership in the efficient set matches the stated description",
        rows.iter().all(|r| r.eps_efficient == expect_efficient(&r.point)),
    );
    check(
        &mut assertions,
        "membership in the properly efficient set matches the stated description",
        rows.iter().all(|r| r.benson_proper == expect_proper(&r.point)),
    );
    check(
        &mut assertions,
        "every negative answer carries a re-verified witness",
        rows.iter().all(|r| {
            (r.eps_efficient || r.efficiency.domination_witness().is_some())
                && (r.benson_proper || r.properness.cone_witness().is_some())
        }),
    );
    let dich = dichotomy_check(&rows);
    check(&mut assertions, format!("dichotomy outcome is {expect_dichotomy:?}"), dich.outcome == expect_dichotomy);
    let parameters = format!("{} = {}", kind_name(pert.kind), rational::format_vector(&pert.vector));
    Ok((ExampleSection { name: name.into(), parameters, candidates: rows.len(), assertions }, rows))
}

fn kind_name(k: PerturbationKind) -> &'static str {
    match k {
        PerturbationKind::Epsilon => "epsilon",
        PerturbationKind::E => "e",
    }
}

/// Runs the three built-in examples on rational lattices and checks the
/// stated set descriptions point by point.
pub fn reproduce_examples() -> Result<ExamplesReport> {
    let quarter: Vec<Rational> = (0..=8).map(|k| frac(k, 4)).collect();
    let mut sections = Vec::new();

    // E_ε = {x₁ ≥ 0, 0 ≤ x₂ < ε₂}, nothing proper.
    let p = fixtures::orthant_shift();
    let eps = Perturbation::epsilon(ints(&[0, 1]));
    let pts = lattice(&ints(&[0, 1, 2, 3]), &quarter);
    let (s, _) = section(
        "orthant shift",
        &p,
        &eps,
        pts,
        |x| x[1] < int(1),
        |_| false,
        DichotomyOutcome::NoneProper,
    )?;
    sections.push(s);

    // E_ε = {0 ≤ x₁ < ε₁}, nothing proper, cl cone S = {y₁ ≥ 0}.
    let p = fixtures::half_plane_strip();
    let eps = Perturbation::epsilon(ints(&[1, 0]));
    let pts = lattice(&quarter, &ints(&[-5, 0, 5]));
    let (mut s, _) = section(
        "half-plane strip",
        &p,
        &eps,
        pts,
        |x| x[0] < int(1),
        |_| false,
        DichotomyOutcome::NoneProper,
    )?;
    let q = QueryPoint::new(&p, vec![frac(1, 2), int(0)])?;
    let closure = efficiency::criterion_set(&p, &q, &eps, CriterionForm::Plain)?.generated_cone_closure()?;
    check(
        &mut s.assertions,
        "closed generated cone at (1/2, 0) contains (1, t) for t in {-5, 0, 5}",
        [-5, 0, 5].iter().all(|&t| closure.contains(&ints(&[1, t]))),
    );
    check(&mut s.assertions, "closed generated cone at (1/2, 0) excludes (-1, 0)", !closure.contains(&ints(&[-1, 0])));
    sections.push(s);

    // E_e = E^Be_e = {0 ≤ x₁ ≤ e₁}; with e = 0, E = E^Be = {x₁ = 0}.
    let p = fixtures::wedge_strip();
    for e in [ints(&[1, 0]), vec![int(1), frac(1, 2)], ints(&[0, 0])] {
        let e1 = e[0].clone();
        let pts = lattice(&quarter, &ints(&[-2, 0, 3]));
        let inside = move |x: &[Rational]| x[0] <= e1;
        let (s, _) = section(
            "wedge strip",
            &p,
            &Perturbation::cone(e.clone()),
            pts,
            inside.clone(),
            inside,
            DichotomyOutcome::AllProper,
        )?;
        sections.push(s);
    }

    Ok(ExamplesReport {
        sections,
        note: "checks are pointwise over the listed lattices; unsampled points are not covered".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_square_candidates() {
        let x = HPolyhedron::cube(2, &int(1)).intersect(&HPolyhedron::orthant(2)).unwrap();
        let p = LinearVop::new(rational::identity(2), ints(&[0, 0]), x, PolyCone::orthant(2)).unwrap();
        let c = enumerate_candidates(&p, &Strategy::default()).unwrap();
        let count = |t| c.provenance.iter().filter(|&&q| q == t).count();
        assert_eq!(count(Provenance::Vertex), 4);
        assert_eq!(count(Provenance::EdgeMidpoint), 4);
        assert_eq!(count(Provenance::RayProbe), 0);
        assert!(c.all_in(&p));
    }

    #[test]
    fn half_plane_has_rays_and_no_vertices() {
        let p = fixtures::half_plane_strip();
        let c = enumerate_candidates(&p, &Strategy::default()).unwrap();
        assert!(!c.provenance.contains(&Provenance::Vertex));
        assert!(c.provenance.contains(&Provenance::RayProbe));
        assert!(c.provenance.contains(&Provenance::Lattice));
        let dirs = p.constraints().recession_cone().unwrap().probe_directions();
        assert!(dirs.contains(&ints(&[1, 0])));
        assert!(c.all_in(&p));
    }

    #[test]
    fn dimension_cap() {
        let p = LinearVop::new(vec![vec![int(0); 7]], ints(&[0]), HPolyhedron::orthant(7), PolyCone::orthant(1)).unwrap();
        assert_eq!(
            enumerate_candidates(&p, &Strategy::default()),
            Err(Error::DimensionTooLarge { dim: 7, cap: DEFAULT_MAX_DIM })
        );
    }

    #[test]
    fn empty_table_and_vacuous_dichotomy() {
        let p = fixtures::orthant_shift();
        let rows = classify(&p, &Perturbation::epsilon(ints(&[0, 1])), &CandidateSet::default()).unwrap();
        assert!(rows.is_empty());
        assert_eq!(dichotomy_check(&rows).outcome, DichotomyOutcome::AllProper);
    }

    #[test]
    fn fixture_dichotomies() {
        let p = fixtures::orthant_shift();
        let c = enumerate_candidates(&p, &Strategy::default()).unwrap();
        let rows = classify(&p, &Perturbation::epsilon(ints(&[0, 1])), &c).unwrap();
        for r in &rows {
            assert_eq!(r.eps_efficient, r.point[1] < int(1));
            assert!(!r.benson_proper);
        }
        assert_eq!(dichotomy_check(&rows).outcome, DichotomyOutcome::NoneProper);

        let p = fixtures::wedge_strip();
        let rows = classify(&p, &Perturbation::cone(ints(&[1, 0])), &enumerate_candidates(&p, &Strategy::default()).unwrap()).unwrap();
        for r in &rows {
            let inside = r.point[0] <= int(1);
            assert_eq!((r.eps_efficient, r.benson_proper), (inside, inside));
        }
        assert_eq!(dichotomy_check(&rows).outcome, DichotomyOutcome::AllProper);
    }

    #[test]
    fn classical_case_on_third_fixture() {
        let p = fixtures::wedge_strip();
        let c = CandidateSet::from_points(&p, lattice(&ints(&[0, 1]), &ints(&[-1, 0, 2])), Provenance::Lattice);
        let report = verify_isermann(&p, &c).unwrap();
        assert_eq!(report.efficient, 3);
        assert!(report.holds());
    }

    #[test]
    fn singleton_isermann() {
        let x0 = ints(&[2, -1]);
        let p = LinearVop::new(rational::identity(2), ints(&[0, 0]), HPolyhedron::point(&x0), PolyCone::orthant(2)).unwrap();
        let c = enumerate_candidates(&p, &Strategy::default()).unwrap();
        assert_eq!(c.points, vec![x0]);
        assert!(verify_isermann(&p, &c).unwrap().holds());
    }

    #[test]
    fn random_problems_are_deterministic_and_valid() {
        assert_eq!(random_problem(1, 3, 2, 4), random_problem(1, 3, 2, 4));
        for seed in 0..100 {
            let p = random_problem(seed, 3, 3, 4);
            assert!(p.is_pointed());
            assert!(lp::feasible_point(p.constraints()).is_some());
        }
    }

    #[test]
    fn wedge_rewrite_maps_cone_onto_orthant() {
        let k = fixtures::wedge_strip().cone().clone();
        for r in k.extreme_rays() {
            let img = fixtures::wedge_to_orthant(&r);
            assert!(img.iter().all(|c| !c.is_negative()));
        }
        assert_eq!(fixtures::wedge_to_orthant(&[int(1), frac(1, 2)]), vec![frac(1, 2), frac(1, 2)]);
    }

    #[test]
    fn examples_reproduce() {
        let report = reproduce_examples().unwrap();
        assert!(report.passed(), "{}", report.render_text());
        assert_eq!(report.sections.len(), 5);
    }
}
