//! Polyhedral convex sets and cones in H-representation.
//!
//! A [`HPolyhedron`] is `{x : A x <= b, E x = d}`. Projections, affine images
//! and Minkowski sums are computed by lifting and Fourier–Motzkin elimination,
//! with LP-based redundancy pruning after every eliminated variable.

use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LpEvidence, LpStatus};
use crate::rational::{self, dot, is_zero_vec, normalize_row, scale, serde_q, zeros, Matrix, Rational};

#[derive(Debug, Clone)]
pub struct HPolyhedron {
    dim: usize,
    ineq_lhs: Matrix,
    ineq_rhs: Vec<Rational>,
    eq_lhs: Matrix,
    eq_rhs: Vec<Rational>,
    empty: OnceLock<bool>,
}

impl PartialEq for HPolyhedron {
    /// Syntactic equality of the row systems.
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.ineq_lhs == other.ineq_lhs
            && self.ineq_rhs == other.ineq_rhs
            && self.eq_lhs == other.eq_lhs
            && self.eq_rhs == other.eq_rhs
    }
}

impl Eq for HPolyhedron {}

fn check_rows(dim: usize, lhs: &Matrix, rhs: &[Rational]) -> Result<()> {
    if lhs.len() != rhs.len() {
        return Err(Error::DimensionMismatch { expected: lhs.len(), found: rhs.len() });
    }
    if let Some(row) = lhs.iter().find(|row| row.len() != dim) {
        return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
    }
    Ok(())
}

impl HPolyhedron {
    pub fn new(
        dim: usize,
        ineq_lhs: Matrix,
        ineq_rhs: Vec<Rational>,
        eq_lhs: Matrix,
        eq_rhs: Vec<Rational>,
    ) -> Result<Self> {
        check_rows(dim, &ineq_lhs, &ineq_rhs)?;
        check_rows(dim, &eq_lhs, &eq_rhs)?;
        Ok(Self::from_parts(dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs))
    }

    fn from_parts(
        dim: usize,
        ineq_lhs: Matrix,
        ineq_rhs: Vec<Rational>,
        eq_lhs: Matrix,
        eq_rhs: Vec<Rational>,
    ) -> Self {
        Self { dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs, empty: OnceLock::new() }
    }

    pub fn from_inequalities(dim: usize, lhs: Matrix, rhs: Vec<Rational>) -> Result<Self> {
        Self::new(dim, lhs, rhs, Vec::new(), Vec::new())
    }

    /// All of `R^dim`.
    pub fn universe(dim: usize) -> Self {
        Self::from_parts(dim, Vec::new(), Vec::new(), Vec::new(), Vec::new())
    }

    /// The nonnegative orthant `{x >= 0}`.
    pub fn orthant(dim: usize) -> Self {
        let lhs = (0..dim).map(|i| rational::neg(&rational::unit(dim, i))).collect();
        Self::from_parts(dim, lhs, zeros(dim), Vec::new(), Vec::new())
    }

    /// The singleton `{p}`.
    pub fn point(p: &[Rational]) -> Self {
        let dim = p.len();
        Self::from_parts(dim, Vec::new(), Vec::new(), rational::identity(dim), p.to_vec())
    }

    /// The cube `[-r, r]^dim`.
    pub fn cube(dim: usize, r: &Rational) -> Self {
        let mut lhs = Vec::with_capacity(2 * dim);
        for i in 0..dim {
            lhs.push(rational::unit(dim, i));
            lhs.push(rational::neg(&rational::unit(dim, i)));
        }
        Self::from_parts(dim, lhs, vec![r.clone(); 2 * dim], Vec::new(), Vec::new())
    }

    /// Canonical empty set `{x : 0 <= -1}`.
    pub fn empty(dim: usize) -> Self {
        let p = Self::from_parts(dim, vec![zeros(dim)], vec![-Rational::one()], Vec::new(), Vec::new());
        let _ = p.empty.set(true);
        p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn ineq_lhs(&self) -> &Matrix {
        &self.ineq_lhs
    }

    pub fn ineq_rhs(&self) -> &[Rational] {
        &self.ineq_rhs
    }

    pub fn eq_lhs(&self) -> &Matrix {
        &self.eq_lhs
    }

    pub fn eq_rhs(&self) -> &[Rational] {
        &self.eq_rhs
    }

    pub fn num_rows(&self) -> usize {
        self.ineq_lhs.len() + self.eq_lhs.len()
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        x.len() == self.dim
            && self.ineq_lhs.iter().zip(&self.ineq_rhs).all(|(a, b)| &dot(a, x) <= b)
            && self.eq_lhs.iter().zip(&self.eq_rhs).all(|(a, d)| &dot(a, x) == d)
    }

    /// Emptiness by one phase-one solve; cached after the first call.
    pub fn is_empty(&self) -> bool {
        *self.empty.get_or_init(|| lp::feasible_point(self).is_none())
    }

    pub fn intersect(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: other.dim });
        }
        let mut ineq_lhs = self.ineq_lhs.clone();
        ineq_lhs.extend(other.ineq_lhs.iter().cloned());
        let mut ineq_rhs = self.ineq_rhs.clone();
        ineq_rhs.extend(other.ineq_rhs.iter().cloned());
        let mut eq_lhs = self.eq_lhs.clone();
        eq_lhs.extend(other.eq_lhs.iter().cloned());
        let mut eq_rhs = self.eq_rhs.clone();
        eq_rhs.extend(other.eq_rhs.iter().cloned());
        Ok(Self::from_parts(self.dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs))
    }

    /// `{x - t : x in P}`.
    pub fn translate(&self, t: &[Rational]) -> HPolyhedron {
        let shift = |lhs: &Matrix, rhs: &[Rational]| -> Vec<Rational> {
            lhs.iter().zip(rhs).map(|(a, b)| b + dot(a, t)).collect()
        };
        Self::from_parts(
            self.dim,
            self.ineq_lhs.clone(),
            shift(&self.ineq_lhs, &self.ineq_rhs),
            self.eq_lhs.clone(),
            shift(&self.eq_lhs, &self.eq_rhs),
        )
    }

    /// Embeds the set into a larger space: coordinates of `self` occupy
    /// `offset..offset + self.dim` of `R^total`.
    pub fn embed(&self, total: usize, offset: usize) -> HPolyhedron {
        let widen = |row: &Vec<Rational>| {
            let mut r = zeros(total);
            r[offset..offset + self.dim].clone_from_slice(row);
            r
        };
        Self::from_parts(
            total,
            self.ineq_lhs.iter().map(widen).collect(),
            self.ineq_rhs.clone(),
            self.eq_lhs.iter().map(widen).collect(),
            self.eq_rhs.clone(),
        )
    }

    /// Orthogonal projection dropping coordinate `var`. Equalities touching
    /// `var` are used for substitution before any inequality pairing. Only
    /// syntactic cleanup is applied; see [`HPolyhedron::prune_redundant`].
    pub fn fm_eliminate(&self, var: usize) -> HPolyhedron {
        assert!(var < self.dim, "variable index {var} out of range for dim {}", self.dim);
        let mut ineq: Vec<(Vec<Rational>, Rational)> =
            self.ineq_lhs.iter().cloned().zip(self.ineq_rhs.iter().cloned()).collect();
        let mut eq: Vec<(Vec<Rational>, Rational)> =
            self.eq_lhs.iter().cloned().zip(self.eq_rhs.iter().cloned()).collect();

        if let Some(pos) = eq.iter().position(|(a, _)| !a[var].is_zero()) {
            let (pa, pb) = eq.remove(pos);
            let substitute = |(a, b): &mut (Vec<Rational>, Rational)| {
                if !a[var].is_zero() {
                    let f = &a[var] / &pa[var];
                    for (ai, pi) in a.iter_mut().zip(&pa) {
                        *ai -= &f * pi;
                    }
                    *b -= &f * &pb;
                }
            };
            ineq.iter_mut().for_each(substitute);
            eq.iter_mut().for_each(substitute);
        } else {
            let (mut kept, mut pos, mut negs) = (Vec::new(), Vec::new(), Vec::new());
            for row in ineq {
                if row.0[var].is_positive() {
                    pos.push(row);
                } else if row.0[var].is_negative() {
                    negs.push(row);
                } else {
                    kept.push(row);
                }
            }
            for (pa, pb) in &pos {
                for (na, nb) in &negs {
                    let (wp, wn) = (-&na[var], pa[var].clone());
                    let a: Vec<Rational> = pa.iter().zip(na).map(|(x, y)| x * &wp + y * &wn).collect();
                    kept.push((a, pb * &wp + nb * &wn));
                }
            }
            ineq = kept;
        }

        let drop_col = |(mut a, b): (Vec<Rational>, Rational)| {
            a.remove(var);
            (a, b)
        };
        let ineq: Vec<_> = ineq.into_iter().map(drop_col).collect();
        let eq: Vec<_> = eq.into_iter().map(drop_col).collect();
        Self::cleaned(self.dim - 1, ineq, eq)
    }

    /// Normalizes rows, removes duplicates and trivially true rows, and
    /// collapses trivially false systems to the canonical empty set.
    fn cleaned(
        dim: usize,
        ineq: Vec<(Vec<Rational>, Rational)>,
        eq: Vec<(Vec<Rational>, Rational)>,
    ) -> HPolyhedron {
        let mut out_ineq: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (a, b) in ineq {
            if is_zero_vec(&a) {
                if b.is_negative() {
                    return HPolyhedron::empty(dim);
                }
                continue;
            }
            let (a, b) = normalize_row(&a, &b);
            match out_ineq.iter_mut().find(|(oa, _)| *oa == a) {
                Some((_, ob)) => {
                    if b < *ob {
                        *ob = b;
                    }
                }
                None => out_ineq.push((a, b)),
            }
        }
        let mut out_eq: Vec<(Vec<Rational>, Rational)> = Vec::new();
        for (a, b) in eq {
            if is_zero_vec(&a) {
                if !b.is_zero() {
                    return HPolyhedron::empty(dim);
                }
                continue;
            }
            let (mut a, mut b) = normalize_row(&a, &b);
            if a.iter().find(|c| !c.is_zero()).is_some_and(Signed::is_negative) {
                a = rational::neg(&a);
                b = -b;
            }
            match out_eq.iter().find(|(oa, _)| *oa == a) {
                Some((_, ob)) if *ob != b => return HPolyhedron::empty(dim),
                Some(_) => {}
                None => out_eq.push((a, b)),
            }
        }
        let (ineq_lhs, ineq_rhs) = out_ineq.into_iter().unzip();
        let (eq_lhs, eq_rhs) = out_eq.into_iter().unzip();
        HPolyhedron::from_parts(dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs)
    }

    /// Removes rows implied by the others, one LP per inequality row, and
    /// linearly dependent equality rows. Empty inputs collapse to the
    /// canonical empty set.
    pub fn prune_redundant(&self) -> HPolyhedron {
        let base = Self::cleaned(
            self.dim,
            self.ineq_lhs.iter().cloned().zip(self.ineq_rhs.iter().cloned()).collect(),
            self.eq_lhs.iter().cloned().zip(self.eq_rhs.iter().cloned()).collect(),
        );
        if base.empty.get() == Some(&true) || base.is_empty() {
            return HPolyhedron::empty(self.dim);
        }

        let mut eq_lhs: Matrix = Vec::new();
        let mut eq_rhs = Vec::new();
        for (a, d) in base.eq_lhs.iter().zip(&base.eq_rhs) {
            let mut trial = eq_lhs.clone();
            trial.push(a.clone());
            if rational::rank(&trial) > eq_lhs.len() {
                eq_lhs = trial;
                eq_rhs.push(d.clone());
            }
        }

        let mut ineq_lhs = base.ineq_lhs.clone();
        let mut ineq_rhs = base.ineq_rhs.clone();
        let mut i = 0;
        while i < ineq_lhs.len() {
            let mut others_lhs = ineq_lhs.clone();
            let mut others_rhs = ineq_rhs.clone();
            let row = others_lhs.remove(i);
            let rhs = others_rhs.remove(i);
            let relaxed =
                Self::from_parts(self.dim, others_lhs, others_rhs, eq_lhs.clone(), eq_rhs.clone());
            let out = lp::maximize(&relaxed, &row);
            let redundant = out.status == LpStatus::Optimal
                && out.value.as_ref().is_some_and(|v| v <= &rhs);
            if redundant {
                ineq_lhs.remove(i);
                ineq_rhs.remove(i);
            } else {
                i += 1;
            }
        }
        let p = Self::from_parts(self.dim, ineq_lhs, ineq_rhs, eq_lhs, eq_rhs);
        let _ = p.empty.set(false);
        p
    }

    /// Eliminates the first `count` coordinates, pruning after each step.
    pub fn project_out_leading(&self, count: usize) -> HPolyhedron {
        let mut p = self.clone();
        for _ in 0..count {
            p = p.fm_eliminate(0).prune_redundant();
        }
        p
    }

    /// `{M x + q : x in P}` via the lift `(x, y)` with `y = M x + q`.
    pub fn affine_image(&self, m: &Matrix, q: &[Rational]) -> Result<HPolyhedron> {
        let n = self.dim;
        let out = q.len();
        if m.len() != out {
            return Err(Error::DimensionMismatch { expected: out, found: m.len() });
        }
        if let Some(row) = m.iter().find(|row| row.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        let mut lifted = self.embed(n + out, 0);
        for (i, (row, qi)) in m.iter().zip(q).enumerate() {
            let mut a = rational::neg(row);
            a.extend(zeros(out));
            a[n + i] = Rational::one();
            lifted.eq_lhs.push(a);
            lifted.eq_rhs.push(qi.clone());
        }
        Ok(lifted.project_out_leading(n))
    }

    /// `{p + q : p in P, q in Q}` via the lift `(p, q, s)` with `s = p + q`.
    pub fn minkowski_sum(&self, other: &HPolyhedron) -> Result<HPolyhedron> {
        let d = self.dim;
        if other.dim != d {
            return Err(Error::DimensionMismatch { expected: d, found: other.dim });
        }
        let mut lifted = self.embed(3 * d, 0).intersect(&other.embed(3 * d, d))?;
        for i in 0..d {
            let mut a = zeros(3 * d);
            a[i] = -Rational::one();
            a[d + i] = -Rational::one();
            a[2 * d + i] = Rational::one();
            lifted.eq_lhs.push(a);
            lifted.eq_rhs.push(Rational::zero());
        }
        Ok(lifted.project_out_leading(2 * d))
    }

    /// `0^+P = {v : A v <= 0, E v = 0}`.
    pub fn recession_cone(&self) -> Result<PolyCone> {
        if self.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(PolyCone::from_rows(self.ineq_lhs.clone(), self.eq_lhs.clone(), self.dim))
    }

    pub fn generated_cone_closure(&self) -> Result<GeneratedConeClosure> {
        GeneratedConeClosure::new(self.clone())
    }
}

/// A polyhedral cone `{v : A v <= 0, E v = 0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyCone {
    carrier: HPolyhedron,
}

impl PolyCone {
    pub fn new(carrier: HPolyhedron) -> Result<Self> {
        if carrier.ineq_rhs.iter().chain(&carrier.eq_rhs).any(|b| !b.is_zero()) {
            return Err(Error::NotACone);
        }
        Ok(Self { carrier })
    }

    pub fn from_rows(ineq_lhs: Matrix, eq_lhs: Matrix, dim: usize) -> Self {
        let (ni, ne) = (ineq_lhs.len(), eq_lhs.len());
        Self { carrier: HPolyhedron::from_parts(dim, ineq_lhs, zeros(ni), eq_lhs, zeros(ne)) }
    }

    pub fn orthant(dim: usize) -> Self {
        Self { carrier: HPolyhedron::orthant(dim) }
    }

    /// `{0}`.
    pub fn zero(dim: usize) -> Self {
        Self::from_rows(Vec::new(), rational::identity(dim), dim)
    }

    pub fn carrier(&self) -> &HPolyhedron {
        &self.carrier
    }

    pub fn dim(&self) -> usize {
        self.carrier.dim
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.carrier.contains(v)
    }

    pub fn negate(&self) -> PolyCone {
        let flip = |m: &Matrix| m.iter().map(|r| rational::neg(r)).collect::<Matrix>();
        Self::from_rows(flip(&self.carrier.ineq_lhs), flip(&self.carrier.eq_lhs), self.dim())
    }

    pub fn is_pointed(&self) -> bool {
        cone_intersection_nontrivial(self, &self.negate()).is_none()
    }

    /// Canonical row form after pruning: used for structural comparisons.
    pub fn pruned(&self) -> PolyCone {
        Self { carrier: self.carrier.prune_redundant() }
    }

    /// Extreme rays of a pointed cone by enumerating `(dim-1)`-subsets of
    /// active rows. Each ray is scaled so its largest absolute entry is 1.
    pub fn extreme_rays(&self) -> Vec<Vec<Rational>> {
        let dim = self.dim();
        if dim == 0 {
            return Vec::new();
        }
        let c = self.pruned();
        let rows = &c.carrier.ineq_lhs;
        let eqs = &c.carrier.eq_lhs;
        let mut rays: Vec<Vec<Rational>> = Vec::new();
        let need = dim - 1;
        let mut subset: Vec<usize> = Vec::new();
        let mut push_ray = |r: Vec<Rational>| {
            let max = r.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
            if max.is_zero() {
                return;
            }
            let r = scale(&r, &max.recip());
            if !rays.contains(&r) {
                rays.push(r);
            }
        };
        // Subsets are enumerated in lexicographic order for determinism.
        #[allow(clippy::too_many_arguments)]
        fn rec(
            start: usize,
            need: usize,
            subset: &mut Vec<usize>,
            rows: &Matrix,
            eqs: &Matrix,
            cone: &PolyCone,
            dim: usize,
            push: &mut dyn FnMut(Vec<Rational>),
        ) {
            let mut system: Matrix = eqs.clone();
            system.extend(subset.iter().map(|&i| rows[i].clone()));
            if rational::rank(&system) >= dim {
                return;
            }
            if rational::rank(&system) == dim - 1 {
                if let Some(dir) = null_direction(&system, dim) {
                    for cand in [dir.clone(), rational::neg(&dir)] {
                        if cone.contains(&cand) {
                            push(cand);
                        }
                    }
                }
                return;
            }
            if need == 0 {
                return;
            }
            for i in start..rows.len() {
                subset.push(i);
                rec(i + 1, need - 1, subset, rows, eqs, cone, dim, push);
                subset.pop();
            }
        }
        rec(0, need, &mut subset, rows, eqs, self, dim, &mut push_ray);
        rays
    }
}

impl PolyCone {
    /// Directions for probing unboundedness: the coordinate directions
    /// `±e_i` lying in the cone, then every positive optimum of `max ±v_i`
    /// over the cone cut by the unit box. Deduplicated, in that order.
    pub fn probe_directions(&self) -> Vec<Vec<Rational>> {
        let dim = self.dim();
        let mut dirs: Vec<Vec<Rational>> = Vec::new();
        for i in 0..dim {
            for sign in [1i64, -1] {
                let d = scale(&rational::unit(dim, i), &rational::int(sign));
                if self.contains(&d) && !dirs.contains(&d) {
                    dirs.push(d);
                }
            }
        }
        let boxed = self.carrier.intersect(&HPolyhedron::cube(dim, &Rational::one())).expect("same dimension");
        for i in 0..dim {
            for sign in [1i64, -1] {
                let c = scale(&rational::unit(dim, i), &rational::int(sign));
                let out = lp::maximize(&boxed, &c);
                if out.status == LpStatus::Optimal && out.value.as_ref().is_some_and(Signed::is_positive) {
                    let d = out.point.expect("optimal has point");
                    if !dirs.contains(&d) {
                        dirs.push(d);
                    }
                }
            }
        }
        dirs
    }
}

/// A nonzero solution of `rows · v = 0` when the null space is one-dimensional.
fn null_direction(rows: &Matrix, dim: usize) -> Option<Vec<Rational>> {
    for j in 0..dim {
        let mut system = rows.clone();
        system.push(rational::unit(dim, j));
        let mut rhs = zeros(rows.len());
        rhs.push(Rational::one());
        if let Some(v) = rational::solve_unique(&system, &rhs, dim) {
            return Some(v);
        }
    }
    None
}

/// Nonzero ray in `A ∩ B`, found by maximizing `±w_i` over `A ∩ B ∩ [-1,1]^d`.
pub fn cone_intersection_nontrivial(a: &PolyCone, b: &PolyCone) -> Option<Vec<Rational>> {
    cone_intersection_logged(a, b, &mut Vec::new())
}

/// As [`cone_intersection_nontrivial`], recording every LP solved.
pub fn cone_intersection_logged(
    a: &PolyCone,
    b: &PolyCone,
    log: &mut Vec<LpEvidence>,
) -> Option<Vec<Rational>> {
    assert_eq!(a.dim(), b.dim(), "cone dimensions differ");
    let boxed = a.carrier.intersect(&b.carrier).expect("dimensions checked");
    max_coordinates_in_box(&boxed, "cone", log)
}

/// First positive optimum of `max ±x_i` over `set ∩ [-1,1]^d`, in the order
/// `+x_0, -x_0, +x_1, ...`.
fn max_coordinates_in_box(set: &HPolyhedron, tag: &str, log: &mut Vec<LpEvidence>) -> Option<Vec<Rational>> {
    let dim = set.dim;
    let boxed = set.intersect(&HPolyhedron::cube(dim, &Rational::one())).expect("same dimension");
    for i in 0..dim {
        for (sign, name) in [(1i64, "+"), (-1, "-")] {
            let c = scale(&rational::unit(dim, i), &rational::int(sign));
            let out = lp::maximize(&boxed, &c);
            let hit = out.status == LpStatus::Optimal && out.value.as_ref().is_some_and(Signed::is_positive);
            let point = out.point.clone();
            log.push(LpEvidence { label: format!("{tag}: max {name}w[{i}] over unit box"), outcome: out });
            if hit {
                return point;
            }
        }
    }
    None
}

/// Which half of the `cl cone C = {λy : λ>0, y∈C} ∪ 0^+C` decomposition a
/// witness ray came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum WitnessBranch {
    Base {
        #[serde(with = "serde_q")]
        lambda: Rational,
        #[serde(with = "serde_q::vec")]
        point: Vec<Rational>,
    },
    Recession,
}

/// A nonzero ray `w` in `cl cone C ∩ B`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeWitness {
    #[serde(with = "serde_q::vec")]
    pub ray: Vec<Rational>,
    #[serde(flatten)]
    pub branch: WitnessBranch,
}

impl ConeWitness {
    /// Exact re-check against the base set `C` and the target cone.
    pub fn verify(&self, base: &HPolyhedron, target: &PolyCone) -> bool {
        if is_zero_vec(&self.ray) || !target.contains(&self.ray) {
            return false;
        }
        match &self.branch {
            WitnessBranch::Base { lambda, point } => {
                lambda.is_positive() && base.contains(point) && scale(point, lambda) == self.ray
            }
            WitnessBranch::Recession => {
                base.ineq_lhs.iter().all(|a| !dot(a, &self.ray).is_positive())
                    && base.eq_lhs.iter().all(|a| dot(a, &self.ray).is_zero())
            }
        }
    }
}

/// `cl cone C` kept lazily as the pair `(C, 0^+C)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedConeClosure {
    base: HPolyhedron,
    recession: PolyCone,
}

impl GeneratedConeClosure {
    pub fn new(base: HPolyhedron) -> Result<Self> {
        let recession = base.recession_cone()?;
        Ok(Self { base, recession })
    }

    pub fn base(&self) -> &HPolyhedron {
        &self.base
    }

    pub fn recession(&self) -> &PolyCone {
        &self.recession
    }

    /// `w ∈ cl cone C` iff `w ∈ 0^+C` or `μw ∈ C` for some `μ > 0`.
    pub fn contains(&self, w: &[Rational]) -> bool {
        self.recession.contains(w) || self.positive_multiple_in_base(w).is_some()
    }

    /// Some `μ > 0` with `μw ∈ C`, if one exists.
    fn positive_multiple_in_base(&self, w: &[Rational]) -> Option<Rational> {
        // Feasible μ form an interval; track (lo, lo_open, hi).
        let mut lo = Rational::zero();
        let mut lo_open = true;
        let mut hi: Option<Rational> = None;
        let mut fixed: Option<Rational> = None;
        let tighten_hi = |h: Rational, hi: &mut Option<Rational>| {
            if hi.as_ref().is_none_or(|cur| h < *cur) {
                *hi = Some(h);
            }
        };
        for (a, b) in self.base.ineq_lhs.iter().zip(&self.base.ineq_rhs) {
            let s = dot(a, w);
            if s.is_zero() {
                if b.is_negative() {
                    return None;
                }
            } else if s.is_positive() {
                tighten_hi(b / &s, &mut hi);
            } else {
                let l = b / &s;
                if l > lo || (l == lo && lo_open) {
                    lo = l;
                    lo_open = false;
                }
            }
        }
        for (a, d) in self.base.eq_lhs.iter().zip(&self.base.eq_rhs) {
            let s = dot(a, w);
            if s.is_zero() {
                if !d.is_zero() {
                    return None;
                }
            } else {
                let mu = d / &s;
                if fixed.as_ref().is_some_and(|f| *f != mu) {
                    return None;
                }
                fixed = Some(mu);
            }
        }
        let admissible = |mu: &Rational| {
            mu.is_positive()
                && (if lo_open { *mu > lo } else { *mu >= lo })
                && hi.as_ref().is_none_or(|h| mu <= h)
        };
        let cand = match (fixed, hi.clone()) {
            (Some(mu), _) => mu,
            (None, Some(h)) => h,
            (None, None) => std::cmp::max(lo.clone(), Rational::zero()) + Rational::one(),
        };
        admissible(&cand).then_some(cand)
    }

    /// Nonzero ray of `cl cone C ∩ B`, tried first in the base branch
    /// (a nonzero point of `C ∩ B`) and then in the recession branch.
    pub fn intersect_nontrivial(&self, b: &PolyCone) -> Option<ConeWitness> {
        self.intersect_nontrivial_logged(b, &mut Vec::new())
    }

    /// As [`GeneratedConeClosure::intersect_nontrivial`], recording every LP solved.
    pub fn intersect_nontrivial_logged(&self, b: &PolyCone, log: &mut Vec<LpEvidence>) -> Option<ConeWitness> {
        self.base_branch_witness(b, log).or_else(|| {
            cone_intersection_logged(&self.recession, b, log)
                .map(|ray| ConeWitness { ray, branch: WitnessBranch::Recession })
        })
    }

    fn base_branch_witness(&self, b: &PolyCone, log: &mut Vec<LpEvidence>) -> Option<ConeWitness> {
        let meet = self.base.intersect(&b.carrier).expect("dimensions agree");
        let out = lp::maximize(&meet, &zeros(meet.dim));
        let p = out.point.clone();
        log.push(LpEvidence { label: "base: feasibility of C ∩ B".into(), outcome: out });
        let p = p?;
        let base_witness = |point: Vec<Rational>| ConeWitness {
            ray: point.clone(),
            branch: WitnessBranch::Base { lambda: Rational::one(), point },
        };
        if !is_zero_vec(&p) {
            return Some(base_witness(p));
        }
        // 0 ∈ C ∩ B, so any nonzero member can be shrunk into the unit box.
        max_coordinates_in_box(&meet, "base", log).map(base_witness)
    }

    /// Materialized H-form of `cl cone C`: the homogenization
    /// `{(z, t) : A z <= b t, E z = d t, t >= 0}` with `t` projected out.
    pub fn to_cone(&self) -> PolyCone {
        let dim = self.base.dim;
        let homog = |lhs: &Matrix, rhs: &[Rational]| -> Matrix {
            lhs.iter()
                .zip(rhs)
                .map(|(a, b)| {
                    let mut r = vec![-b.clone()];
                    r.extend(a.iter().cloned());
                    r
                })
                .collect()
        };
        let mut ineq = homog(&self.base.ineq_lhs, &self.base.ineq_rhs);
        let mut t_nonneg = zeros(dim + 1);
        t_nonneg[0] = -Rational::one();
        ineq.push(t_nonneg);
        let eq = homog(&self.base.eq_lhs, &self.base.eq_rhs);
        let lifted = PolyCone::from_rows(ineq, eq, dim + 1);
        let projected = lifted.carrier.project_out_leading(1);
        PolyCone::from_rows(projected.ineq_lhs, projected.eq_lhs, dim)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn rows(rs: &[&[i64]]) -> Matrix {
        rs.iter().map(|r| v(r)).collect()
    }

    #[test]
    fn eliminate_simplex_onto_axis() {
        // 0<=x<=1, 0<=y<=1, x+y<=1
        let p = HPolyhedron::from_inequalities(
            2,
            rows(&[&[-1, 0], &[1, 0], &[0, -1], &[0, 1], &[1, 1]]),
            v(&[0, 1, 0, 1, 1]),
        )
        .unwrap();
        let q = p.fm_eliminate(1).prune_redundant();
        assert_eq!(q.dim(), 1);
        assert_eq!(q, HPolyhedron::from_inequalities(1, rows(&[&[-1], &[1]]), v(&[0, 1])).unwrap());
    }

    #[test]
    fn eliminate_through_equality() {
        // x = y, 0<=y<=2
        let p = HPolyhedron::new(
            2,
            rows(&[&[0, -1], &[0, 1]]),
            v(&[0, 2]),
            rows(&[&[1, -1]]),
            v(&[0]),
        )
        .unwrap();
        let q = p.fm_eliminate(1);
        assert!(q.eq_lhs().is_empty());
        for (x, inside) in [(0, true), (2, true), (1, true), (3, false), (-1, false)] {
            assert_eq!(q.contains(&v(&[x])), inside, "x={x}");
        }
    }

    #[test]
    fn orthant_sign_flip_image() {
        let m = rows(&[&[-1, 0], &[0, 1]]);
        let img = HPolyhedron::orthant(2).affine_image(&m, &zeros(2)).unwrap();
        for (y, inside) in [([-1, 1], true), ([0, 0], true), ([1, 1], false), ([-1, -1], false)] {
            assert_eq!(img.contains(&v(&y)), inside, "{y:?}");
        }
    }

    #[test]
    fn translation_image() {
        let p = HPolyhedron::from_inequalities(2, rows(&[&[-1, 0]]), v(&[0])).unwrap();
        let img = p.affine_image(&rational::identity(2), &v(&[1, 0])).unwrap();
        assert!(img.contains(&v(&[1, -7])));
        assert!(!img.contains(&[frac(1, 2), int(0)]));
    }

    #[test]
    fn point_plus_orthant() {
        let s = HPolyhedron::point(&v(&[1, 2])).minkowski_sum(&HPolyhedron::orthant(2)).unwrap();
        assert!(s.contains(&v(&[1, 2])));
        assert!(s.contains(&v(&[5, 9])));
        assert!(!s.contains(&[frac(1, 2), int(3)]));
        assert!(!s.contains(&[int(3), frac(3, 2)]));
    }

    #[test]
    fn recession_cones() {
        let half = HPolyhedron::from_inequalities(2, rows(&[&[-1, 0]]), v(&[0])).unwrap();
        let c = half.recession_cone().unwrap();
        assert!(c.contains(&v(&[1, -5])) && !c.contains(&v(&[-1, 0])));

        let unit_box = HPolyhedron::from_inequalities(
            2,
            rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]),
            v(&[1, 0, 1, 0]),
        )
        .unwrap();
        let rc = unit_box.recession_cone().unwrap();
        assert!(cone_intersection_nontrivial(&rc, &PolyCone::from_rows(vec![], vec![], 2)).is_none());

        let empty = HPolyhedron::from_inequalities(1, rows(&[&[1], &[-1]]), v(&[0, -1])).unwrap();
        assert_eq!(empty.recession_cone(), Err(Error::EmptySet));
        assert_eq!(empty.generated_cone_closure(), Err(Error::EmptySet));
    }

    #[test]
    fn pointedness() {
        assert!(PolyCone::orthant(2).is_pointed());
        // 0 <= v2 <= v1
        let k = PolyCone::from_rows(rows(&[&[0, -1], &[-1, 1]]), vec![], 2);
        assert!(k.is_pointed());
        let half = PolyCone::from_rows(rows(&[&[-1, 0]]), vec![], 2);
        assert!(!half.is_pointed());
        assert_eq!(cone_intersection_nontrivial(&half, &half.negate()), Some(v(&[0, 1])));
    }

    #[test]
    fn intersection_witnesses() {
        let a = PolyCone::from_rows(rows(&[&[1, 0]]), rows(&[&[0, 1]]), 2);
        let neg = PolyCone::orthant(2).negate();
        assert_eq!(cone_intersection_nontrivial(&a, &neg), Some(v(&[-1, 0])));
        assert_eq!(cone_intersection_nontrivial(&PolyCone::orthant(2), &neg), None);
    }

    #[test]
    fn plumbing_ops() {
        assert!(HPolyhedron::orthant(2).contains(&v(&[0, 0])));
        let neg = PolyCone::orthant(2).negate();
        assert!(neg.contains(&v(&[-1, -3])) && !neg.contains(&v(&[1, 0])));
        let p = HPolyhedron::from_inequalities(1, rows(&[&[1], &[1]]), v(&[1, 2])).unwrap();
        assert_eq!(p.prune_redundant(), HPolyhedron::from_inequalities(1, rows(&[&[1]]), v(&[1])).unwrap());
    }

    #[test]
    fn generated_cone_of_shifted_halfplane() {
        let c = HPolyhedron::from_inequalities(2, rows(&[&[-1, 0]]), v(&[-1])).unwrap();
        let g = c.generated_cone_closure().unwrap();
        for (w, inside) in [([1, 0], true), ([0, 3], true), ([0, -3], true), ([1, 9], true), ([-1, 0], false)] {
            assert_eq!(g.contains(&v(&w)), inside, "{w:?}");
        }
        let direct = g.to_cone();
        for w in [[1, 0], [0, 3], [0, -3], [-1, 0], [-1, 5]] {
            assert_eq!(direct.contains(&v(&w)), g.contains(&v(&w)), "{w:?}");
        }
    }

    #[test]
    fn generated_cone_of_segment() {
        // segment from (1,1) to (2,0): 0 <= y, x + y = 2, y <= 1
        let seg = HPolyhedron::new(
            2,
            rows(&[&[0, -1], &[0, 1]]),
            v(&[0, 1]),
            rows(&[&[1, 1]]),
            v(&[2]),
        )
        .unwrap();
        let g = seg.generated_cone_closure().unwrap();
        assert!(g.contains(&v(&[3, 3])) && g.contains(&v(&[5, 0])) && g.contains(&v(&[3, 1])));
        assert!(!g.contains(&v(&[1, 2])) && !g.contains(&v(&[1, -1])));
        assert!(g.contains(&v(&[0, 0])));
    }

    #[test]
    fn extreme_rays_of_wedge() {
        let k = PolyCone::from_rows(rows(&[&[0, -1], &[-1, 1]]), vec![], 2);
        let rays = k.extreme_rays();
        assert_eq!(rays.len(), 2);
        assert!(rays.contains(&v(&[1, 0])) && rays.contains(&v(&[1, 1])));
    }
}
