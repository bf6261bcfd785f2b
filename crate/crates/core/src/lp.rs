//! Exact rational linear programming.
//!
//! Dense two-phase tableau simplex with Bland's rule over free variables
//! (split internally as `x = x⁺ - x⁻`). Every outcome carries a certificate
//! and every certificate is re-checked by exact arithmetic before `solve`
//! returns; the process-wide tally is available from [`stats`].
//!
//! Certificates are stated for the maximization form `max c·x` where
//! `c = objective` for [`Sense::Max`] and `c = -objective` for [`Sense::Min`]:
//!
//! * Optimal: multipliers `u >= 0` (inequalities) and `w` (equalities) with
//!   `Aᵀu + Eᵀw = c` and `b·u + d·w = c·x*`.
//! * Infeasible: `u >= 0`, `w` with `Aᵀu + Eᵀw = 0` and `b·u + d·w = -1`.
//! * Unbounded: a feasible point and a ray `r` with `A r <= 0`, `E r = 0`,
//!   `c·r > 0`.

use std::sync::atomic::{AtomicU64, Ordering};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::polyhedron::HPolyhedron;
use crate::rational::{dot, serde_q, zeros, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

#[derive(Debug, Clone)]
pub struct LpProblem {
    pub objective: Vec<Rational>,
    pub sense: Sense,
    pub feasible_set: HPolyhedron,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpStatus {
    Infeasible,
    Unbounded,
    Optimal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualCertificate {
    #[serde(with = "serde_q::vec")]
    pub ineq: Vec<Rational>,
    #[serde(with = "serde_q::vec")]
    pub eq: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpOutcome {
    pub status: LpStatus,
    #[serde(with = "serde_q::option_vec", default)]
    pub point: Option<Vec<Rational>>,
    #[serde(with = "serde_q::option", default)]
    pub value: Option<Rational>,
    #[serde(with = "serde_q::option_vec", default)]
    pub ray: Option<Vec<Rational>>,
    #[serde(default)]
    pub dual_certificate: Option<DualCertificate>,
}

/// A solved LP kept as evidence for a positive decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpEvidence {
    pub label: String,
    pub outcome: LpOutcome,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LpStats {
    pub solves: u64,
    pub verified: u64,
    pub failed: u64,
}

static SOLVES: AtomicU64 = AtomicU64::new(0);
static VERIFIED: AtomicU64 = AtomicU64::new(0);
static FAILED: AtomicU64 = AtomicU64::new(0);

/// Process-wide counts of solves and certificate re-checks.
pub fn stats() -> LpStats {
    LpStats {
        solves: SOLVES.load(Ordering::Relaxed),
        verified: VERIFIED.load(Ordering::Relaxed),
        failed: FAILED.load(Ordering::Relaxed),
    }
}

pub fn solve(p: &LpProblem) -> LpOutcome {
    assert_eq!(p.objective.len(), p.feasible_set.dim(), "objective dimension mismatch");
    let out = Simplex::build(p).run(p);
    SOLVES.fetch_add(1, Ordering::Relaxed);
    if out.verify(p) {
        VERIFIED.fetch_add(1, Ordering::Relaxed);
    } else {
        FAILED.fetch_add(1, Ordering::Relaxed);
    }
    out
}

pub fn maximize(set: &HPolyhedron, objective: &[Rational]) -> LpOutcome {
    solve(&LpProblem { objective: objective.to_vec(), sense: Sense::Max, feasible_set: set.clone() })
}

pub fn minimize(set: &HPolyhedron, objective: &[Rational]) -> LpOutcome {
    solve(&LpProblem { objective: objective.to_vec(), sense: Sense::Min, feasible_set: set.clone() })
}

/// A point of `set`, or `None` when it is empty.
pub fn feasible_point(set: &HPolyhedron) -> Option<Vec<Rational>> {
    let out = maximize(set, &zeros(set.dim()));
    match out.status {
        LpStatus::Infeasible => None,
        _ => out.point,
    }
}

fn max_form(p: &LpProblem) -> Vec<Rational> {
    match p.sense {
        Sense::Max => p.objective.clone(),
        Sense::Min => p.objective.iter().map(|c| -c).collect(),
    }
}

/// `Aᵀu + Eᵀw`.
fn combine(set: &HPolyhedron, cert: &DualCertificate) -> Option<Vec<Rational>> {
    if cert.ineq.len() != set.ineq_lhs().len() || cert.eq.len() != set.eq_lhs().len() {
        return None;
    }
    let mut acc = zeros(set.dim());
    for (row, u) in set.ineq_lhs().iter().zip(&cert.ineq).chain(set.eq_lhs().iter().zip(&cert.eq)) {
        for (a, r) in acc.iter_mut().zip(row) {
            *a += u * r;
        }
    }
    Some(acc)
}

fn bound(set: &HPolyhedron, cert: &DualCertificate) -> Rational {
    dot(set.ineq_rhs(), &cert.ineq) + dot(set.eq_rhs(), &cert.eq)
}

impl LpOutcome {
    /// Re-checks the outcome's certificate by exact arithmetic.
    pub fn verify(&self, p: &LpProblem) -> bool {
        let set = &p.feasible_set;
        let c = max_form(p);
        match self.status {
            LpStatus::Optimal => {
                let (Some(x), Some(value), Some(cert)) = (&self.point, &self.value, &self.dual_certificate)
                else {
                    return false;
                };
                let value_max = match p.sense {
                    Sense::Max => value.clone(),
                    Sense::Min => -value,
                };
                set.contains(x)
                    && dot(&p.objective, x) == *value
                    && cert.ineq.iter().all(|u| !u.is_negative())
                    && combine(set, cert).is_some_and(|g| g == c)
                    && bound(set, cert) == value_max
            }
            LpStatus::Infeasible => {
                let Some(cert) = &self.dual_certificate else {
                    return false;
                };
                cert.ineq.iter().all(|u| !u.is_negative())
                    && combine(set, cert).is_some_and(|g| g.iter().all(Zero::is_zero))
                    && bound(set, cert) == -Rational::one()
            }
            LpStatus::Unbounded => {
                let (Some(x), Some(r)) = (&self.point, &self.ray) else {
                    return false;
                };
                set.contains(x)
                    && set.ineq_lhs().iter().all(|a| !dot(a, r).is_positive())
                    && set.eq_lhs().iter().all(|a| dot(a, r).is_zero())
                    && dot(&c, r).is_positive()
            }
        }
    }
}

/// Standard form `min cᵀz, A z = b, z >= 0, b >= 0` in tableau layout.
///
/// Columns: `x⁺ (n) | x⁻ (n) | slack (one per inequality) | artificial`.
struct Simplex {
    n: usize,
    rows: usize,
    cols: usize,
    /// First artificial column; artificials never re-enter once phase one ends.
    art_start: usize,
    tab: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Column that was basic for each row in the starting basis.
    initial: Vec<usize>,
    /// +1 or -1: sign applied to each original row to make its rhs nonnegative.
    sign: Vec<Rational>,
    n_ineq: usize,
}

enum PhaseEnd {
    Optimal,
    Unbounded(usize),
}

impl Simplex {
    fn build(p: &LpProblem) -> Self {
        let set = &p.feasible_set;
        let n = set.dim();
        let n_ineq = set.ineq_lhs().len();
        let n_eq = set.eq_lhs().len();
        let rows = n_ineq + n_eq;
        let slack_start = 2 * n;
        let art_start = slack_start + n_ineq;

        let mut sign = Vec::with_capacity(rows);
        let mut needs_art = Vec::with_capacity(rows);
        for (i, b) in set.ineq_rhs().iter().chain(set.eq_rhs()).enumerate() {
            let s = if b.is_negative() { -Rational::one() } else { Rational::one() };
            needs_art.push(i >= n_ineq || b.is_negative());
            sign.push(s);
        }
        let n_art = needs_art.iter().filter(|&&a| a).count();
        let cols = art_start + n_art;

        let mut tab = Vec::with_capacity(rows);
        let mut rhs = Vec::with_capacity(rows);
        let mut basis = Vec::with_capacity(rows);
        let mut next_art = art_start;
        let lhs_rows = set.ineq_lhs().iter().chain(set.eq_lhs());
        let rhs_vals = set.ineq_rhs().iter().chain(set.eq_rhs());
        for (i, (a, b)) in lhs_rows.zip(rhs_vals).enumerate() {
            let s = &sign[i];
            let mut row = zeros(cols);
            for j in 0..n {
                row[j] = s * &a[j];
                row[n + j] = -(s * &a[j]);
            }
            if i < n_ineq {
                row[slack_start + i] = s.clone();
            }
            if needs_art[i] {
                row[next_art] = Rational::one();
                basis.push(next_art);
                next_art += 1;
            } else {
                basis.push(slack_start + i);
            }
            tab.push(row);
            rhs.push(s * b);
        }
        let initial = basis.clone();
        Self { n, rows, cols, art_start, tab, rhs, basis, initial, sign, n_ineq }
    }

    fn pivot(&mut self, r: usize, c: usize, obj: &mut [Rational], obj_val: &mut Rational) {
        let piv = self.tab[r][c].clone();
        if !piv.is_one() {
            for v in self.tab[r].iter_mut() {
                *v /= &piv;
            }
            self.rhs[r] /= &piv;
        }
        let prow = self.tab[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows {
            if i == r || self.tab[i][c].is_zero() {
                continue;
            }
            let f = self.tab[i][c].clone();
            for (v, p) in self.tab[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !obj[c].is_zero() {
            let f = obj[c].clone();
            for (v, p) in obj.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            *obj_val -= &f * &prhs;
        }
        self.basis[r] = c;
    }

    /// Reduced-cost row and objective value for cost vector `cost` under the
    /// current basis. `obj_val` is stored negated (tableau convention).
    fn price(&self, cost: &[Rational]) -> (Vec<Rational>, Rational) {
        let mut obj = cost.to_vec();
        let mut val = Rational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = &cost[b];
            if cb.is_zero() {
                continue;
            }
            for (o, t) in obj.iter_mut().zip(&self.tab[i]) {
                if !t.is_zero() {
                    *o -= cb * t;
                }
            }
            val -= cb * &self.rhs[i];
        }
        (obj, val)
    }

    /// Bland's rule iterations until optimal or unbounded.
    fn iterate(&mut self, obj: &mut [Rational], obj_val: &mut Rational, limit: usize) -> PhaseEnd {
        loop {
            let Some(c) = (0..limit).find(|&j| obj[j].is_negative()) else {
                return PhaseEnd::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows {
                let t = &self.tab[i][c];
                if !t.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / t;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, c, obj, obj_val),
                None => return PhaseEnd::Unbounded(c),
            }
        }
    }

    fn primal(&self) -> Vec<Rational> {
        let mut z = zeros(self.cols);
        for (i, &b) in self.basis.iter().enumerate() {
            z[b] = self.rhs[i].clone();
        }
        (0..self.n).map(|j| &z[j] - &z[self.n + j]).collect()
    }

    /// Row duals `y` of the standard form, read off the reduced costs of the
    /// starting basic columns: `y_r = c_j - d_j` for `j = initial[r]`.
    fn row_duals(&self, cost: &[Rational], obj: &[Rational]) -> Vec<Rational> {
        self.initial.iter().map(|&j| &cost[j] - &obj[j]).collect()
    }

    /// Maps standard-form row duals to `(u, w)` on the original rows.
    fn certificate(&self, y: &[Rational], scale: &Rational) -> DualCertificate {
        let mapped: Vec<Rational> =
            y.iter().zip(&self.sign).map(|(yi, s)| -(yi * s) * scale).collect();
        DualCertificate { ineq: mapped[..self.n_ineq].to_vec(), eq: mapped[self.n_ineq..].to_vec() }
    }

    fn run(mut self, p: &LpProblem) -> LpOutcome {
        // Phase one: minimize the sum of artificials.
        let mut cost1 = zeros(self.cols);
        for c in cost1.iter_mut().skip(self.art_start) {
            *c = Rational::one();
        }
        let (mut obj, mut val) = self.price(&cost1);
        let cols = self.cols;
        self.iterate(&mut obj, &mut val, cols);
        let phase1 = -val.clone();
        if phase1.is_positive() {
            let y = self.row_duals(&cost1, &obj);
            let cert = self.certificate(&y, &phase1.recip());
            return LpOutcome {
                status: LpStatus::Infeasible,
                point: None,
                value: None,
                ray: None,
                dual_certificate: Some(cert),
            };
        }

        // Drive zero-level artificials out of the basis where possible; rows
        // where that fails are redundant and keep their artificial at zero.
        for r in 0..self.rows {
            if self.basis[r] >= self.art_start {
                if let Some(c) = (0..self.art_start).find(|&j| !self.tab[r][j].is_zero()) {
                    self.pivot(r, c, &mut obj, &mut val);
                }
            }
        }

        // Phase two on the max-form objective, written as a minimization.
        let c = max_form(p);
        let mut cost2 = zeros(self.cols);
        for j in 0..self.n {
            cost2[j] = -c[j].clone();
            cost2[self.n + j] = c[j].clone();
        }
        let (mut obj, mut val) = self.price(&cost2);
        let art_start = self.art_start;
        match self.iterate(&mut obj, &mut val, art_start) {
            PhaseEnd::Optimal => {
                let x = self.primal();
                let value = dot(&p.objective, &x);
                let y = self.row_duals(&cost2, &obj);
                let cert = self.certificate(&y, &Rational::one());
                LpOutcome {
                    status: LpStatus::Optimal,
                    point: Some(x),
                    value: Some(value),
                    ray: None,
                    dual_certificate: Some(cert),
                }
            }
            PhaseEnd::Unbounded(col) => {
                let mut dz = zeros(self.cols);
                dz[col] = Rational::one();
                for (i, &b) in self.basis.iter().enumerate() {
                    dz[b] = -self.tab[i][col].clone();
                }
                let ray = (0..self.n).map(|j| &dz[j] - &dz[self.n + j]).collect();
                LpOutcome {
                    status: LpStatus::Unbounded,
                    point: Some(self.primal()),
                    value: None,
                    ray: Some(ray),
                    dual_certificate: None,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, Matrix};

    fn v(xs: &[i64]) -> Vec<Rational> {
        xs.iter().map(|&x| int(x)).collect()
    }

    fn rows(rs: &[&[i64]]) -> Matrix {
        rs.iter().map(|r| v(r)).collect()
    }

    fn unit_square() -> HPolyhedron {
        HPolyhedron::from_inequalities(2, rows(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]), v(&[1, 0, 1, 0]))
            .unwrap()
    }

    #[test]
    fn optimal_on_square() {
        let p = LpProblem { objective: v(&[1, 0]), sense: Sense::Max, feasible_set: unit_square() };
        let out = solve(&p);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.value, Some(int(1)));
        assert!(out.verify(&p));
    }

    #[test]
    fn infeasible_with_farkas() {
        // x >= 0, x <= -1
        let set = HPolyhedron::from_inequalities(1, rows(&[&[-1], &[1]]), v(&[0, -1])).unwrap();
        let p = LpProblem { objective: v(&[1]), sense: Sense::Min, feasible_set: set };
        let out = solve(&p);
        assert_eq!(out.status, LpStatus::Infeasible);
        let cert = out.dual_certificate.clone().unwrap();
        assert_eq!(cert.ineq, v(&[1, 1]));
        assert!(out.verify(&p));
    }

    #[test]
    fn unbounded_halfplane() {
        let set = HPolyhedron::from_inequalities(2, rows(&[&[-1, 0]]), v(&[0])).unwrap();
        let p = LpProblem { objective: v(&[1, 0]), sense: Sense::Max, feasible_set: set };
        let out = solve(&p);
        assert_eq!(out.status, LpStatus::Unbounded);
        assert_eq!(out.ray, Some(v(&[1, 0])));
        assert!(out.verify(&p));
    }

    #[test]
    fn feasibility() {
        let p = feasible_point(&HPolyhedron::orthant(2)).unwrap();
        assert!(HPolyhedron::orthant(2).contains(&p));
        let none = HPolyhedron::from_inequalities(1, rows(&[&[1], &[-1]]), v(&[0, -1])).unwrap();
        assert!(feasible_point(&none).is_none());
    }

    #[test]
    fn equalities_and_redundant_rows() {
        // x + y = 2, 2x + 2y = 4, x - y = 0, min x
        let set = HPolyhedron::new(
            2,
            vec![],
            vec![],
            rows(&[&[1, 1], &[2, 2], &[1, -1]]),
            v(&[2, 4, 0]),
        )
        .unwrap();
        let p = LpProblem { objective: v(&[1, 0]), sense: Sense::Min, feasible_set: set };
        let out = solve(&p);
        assert_eq!(out.status, LpStatus::Optimal);
        assert_eq!(out.point, Some(v(&[1, 1])));
        assert!(out.verify(&p));
    }

    #[test]
    fn tampered_certificate_is_rejected() {
        let p = LpProblem { objective: v(&[1, 1]), sense: Sense::Max, feasible_set: unit_square() };
        let mut out = solve(&p);
        assert!(out.verify(&p));
        out.value = Some(int(3));
        assert!(!out.verify(&p));
    }
}
