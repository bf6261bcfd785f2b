//! Membership decisions for `E_ε`/`E_e` and for Benson-type (approximate)
//! proper efficiency, each returned with a certificate.
//!
//! With target `t = f(x̄) - e`:
//!
//! * `x̄` is (e-)efficient iff no `y ∈ X` has `t - f(y) ∈ K` and `f(y) ≠ t`.
//!   Decided by `2m` LPs over `P = {y ∈ X : t - f(y) ∈ K}`.
//! * `x̄` is e-properly efficient iff `cl cone S ∩ (-K) = {0}` where
//!   `S = f(X) - t` (plain form) or `S = f(X) + K - t` (plus-K form). For
//!   pointed `K` the two forms agree. The closure is never materialized: a
//!   nonzero ray is searched for in `S ∩ (-K)` and then in `0^+S ∩ (-K)`.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lp::{self, LpEvidence, LpStatus};
use crate::polyhedron::{ConeWitness, HPolyhedron, WitnessBranch};
use crate::rational::{self, dot, serde_q, Matrix, Rational};
use crate::vop::{LinearVop, OrthantTest, Perturbation, QueryPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CriterionForm {
    #[serde(rename = "plain")]
    Plain,
    #[serde(rename = "plusK")]
    PlusK,
}

impl std::str::FromStr for CriterionForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Self::Plain),
            "plusK" => Ok(Self::PlusK),
            other => Err(Error::Parse(format!("unknown criterion form {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub member: bool,
    pub certificate: Certificate,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Certificate {
    /// `y ∈ X` with `f(y) ≤_K f(x̄) - e` and `f(y) ≠ f(x̄) - e`.
    DominationWitness {
        #[serde(with = "serde_q::vec")]
        point: Vec<Rational>,
        #[serde(with = "serde_q::vec")]
        image: Vec<Rational>,
    },
    /// Nonzero `w ∈ cl cone S ∩ (-K)` with a preimage in problem space.
    ConeWitness(ProperWitness),
    VacuousOrProven(Evidence),
}

/// A cone witness together with the data that places it in `cl cone S`
/// without going through the projected H-form of `S`:
///
/// * base branch: `w = λ y`, `y = f(x) + k - t` with `x ∈ X`;
/// * recession branch: `w = M r + k` with `r ∈ 0^+X`;
///
/// where `k ∈ K` appears only in the plus-K form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProperWitness {
    pub form: CriterionForm,
    pub witness: ConeWitness,
    #[serde(with = "serde_q::vec")]
    pub preimage: Vec<Rational>,
    #[serde(with = "serde_q::option_vec", default)]
    pub cone_part: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    pub summary: String,
    pub lps: Vec<LpEvidence>,
}

impl Verdict {
    pub fn cone_witness(&self) -> Option<&ProperWitness> {
        match &self.certificate {
            Certificate::ConeWitness(w) => Some(w),
            _ => None,
        }
    }

    pub fn domination_witness(&self) -> Option<&[Rational]> {
        match &self.certificate {
            Certificate::DominationWitness { point, .. } => Some(point),
            _ => None,
        }
    }
}

/// `f(x̄) - e`.
pub fn target(p: &LinearVop, x: &QueryPoint, pert: &Perturbation) -> Result<Vec<Rational>> {
    Ok(rational::sub(&p.evaluate_objective(x.coords())?, &pert.vector))
}

/// `{y ∈ X : t - f(y) ∈ K}` as linear rows in `y`.
fn dominating_set(p: &LinearVop, t: &[Rational]) -> HPolyhedron {
    let k = p.cone().carrier();
    let m = p.objective_matrix();
    let shift = rational::sub(t, p.objective_offset());
    let n = p.n();
    // A_K (shift - M y) <= 0  <=>  (-A_K M) y <= -A_K shift
    let lift = |rows: &Matrix| -> (Matrix, Vec<Rational>) {
        let lhs = rows
            .iter()
            .map(|a| (0..n).map(|j| -(0..a.len()).map(|i| &a[i] * &m[i][j]).sum::<Rational>()).collect())
            .collect();
        let rhs = rows.iter().map(|a| -dot(a, &shift)).collect();
        (lhs, rhs)
    };
    let (il, ir) = lift(k.ineq_lhs());
    let (el, er) = lift(k.eq_lhs());
    let cone_rows = HPolyhedron::new(n, il, ir, el, er).expect("shapes agree");
    p.constraints().intersect(&cone_rows).expect("same dimension")
}

/// Exact re-check of a domination witness.
pub fn verify_domination(p: &LinearVop, x: &QueryPoint, pert: &Perturbation, y: &[Rational]) -> bool {
    let Ok(t) = target(p, x, pert) else {
        return false;
    };
    let Ok(fy) = p.evaluate_objective(y) else {
        return false;
    };
    p.constraints().contains(y) && p.cone().contains(&rational::sub(&t, &fy)) && fy != t
}

/// Decides `x̄ ∈ E_ε` (orthant) or `x̄ ∈ E_e` (general `K`).
pub fn is_eps_efficient(p: &LinearVop, x: &QueryPoint, pert: &Perturbation) -> Result<Verdict> {
    p.validate_perturbation(pert)?;
    let t = target(p, x, pert)?;
    let dom = dominating_set(p, &t);
    let mut lps = Vec::new();

    let feas = lp::maximize(&dom, &rational::zeros(p.n()));
    if feas.status == LpStatus::Infeasible {
        lps.push(LpEvidence { label: "dominating set is empty".into(), outcome: feas });
        return Ok(Verdict {
            member: true,
            certificate: Certificate::VacuousOrProven(Evidence {
                summary: "no point of X is K-below the shifted target".into(),
                lps,
            }),
        });
    }

    let m = p.objective_matrix();
    let q = p.objective_offset();
    for i in 0..p.m() {
        for (sense, name) in [(lp::Sense::Min, "min"), (lp::Sense::Max, "max")] {
            let out = lp::solve(&lp::LpProblem {
                objective: m[i].clone(),
                sense,
                feasible_set: dom.clone(),
            });
            let witness = match out.status {
                LpStatus::Optimal => {
                    let value = out.value.as_ref().expect("optimal has value") + &q[i];
                    (value != t[i]).then(|| out.point.clone().expect("optimal has point"))
                }
                LpStatus::Unbounded => {
                    let base = out.point.clone().expect("unbounded has point");
                    let fb = p.evaluate_objective(&base)?;
                    if fb != t {
                        Some(base)
                    } else {
                        Some(rational::add(&base, out.ray.as_ref().expect("unbounded has ray")))
                    }
                }
                LpStatus::Infeasible => {
                    return Err(Error::Internal("dominating set became infeasible".into()))
                }
            };
            if let Some(y) = witness {
                let image = p.evaluate_objective(&y)?;
                if !verify_domination(p, x, pert, &y) {
                    return Err(Error::Internal("domination witness failed re-check".into()));
                }
                return Ok(Verdict { member: false, certificate: Certificate::DominationWitness { point: y, image } });
            }
            lps.push(LpEvidence { label: format!("{name} f[{i}] over dominating set"), outcome: out });
        }
    }
    Ok(Verdict {
        member: true,
        certificate: Certificate::VacuousOrProven(Evidence {
            summary: "every K-below point of f(X) equals the shifted target".into(),
            lps,
        }),
    })
}

/// `S = f(X) - t` or `S = f(X) + K - t`, in H-form.
pub fn criterion_set(p: &LinearVop, x: &QueryPoint, pert: &Perturbation, form: CriterionForm) -> Result<HPolyhedron> {
    let t = target(p, x, pert)?;
    let image = p
        .constraints()
        .affine_image(p.objective_matrix(), &rational::sub(p.objective_offset(), &t))?;
    match form {
        CriterionForm::Plain => Ok(image),
        CriterionForm::PlusK => image.minkowski_sum(p.cone().carrier()),
    }
}

/// Finds `x ∈ X` (base) or `r ∈ 0^+X` (recession), plus `k ∈ K` in plus-K
/// form, reproducing the witness ray in problem space.
fn preimage(
    p: &LinearVop,
    t: &[Rational],
    form: CriterionForm,
    w: &ConeWitness,
) -> Option<(Vec<Rational>, Option<Vec<Rational>>)> {
    let (n, m) = (p.n(), p.m());
    let with_k = form == CriterionForm::PlusK;
    let width = if with_k { n + m } else { n };
    let (x_part, target_value) = match &w.branch {
        WitnessBranch::Base { point, .. } => {
            // M x (+ k) = y + t - q
            (p.constraints().clone(), rational::sub(&rational::add(point, t), p.objective_offset()))
        }
        WitnessBranch::Recession => {
            let rec = p.constraints().recession_cone().ok()?;
            (rec.carrier().clone(), w.ray.clone())
        }
    };
    let mut lifted = x_part.embed(width, 0);
    if with_k {
        lifted = lifted.intersect(&p.cone().carrier().embed(width, n)).ok()?;
    }
    let eq_lhs: Matrix = (0..m)
        .map(|i| {
            let mut row = p.objective_matrix()[i].clone();
            if with_k {
                row.extend(rational::unit(m, i));
            }
            row
        })
        .collect();
    let link = HPolyhedron::new(width, Vec::new(), Vec::new(), eq_lhs, target_value).ok()?;
    let z = lp::feasible_point(&lifted.intersect(&link).ok()?)?;
    let k = with_k.then(|| z[n..].to_vec());
    Some((z[..n].to_vec(), k))
}

/// Exact re-check of a cone witness against the problem data.
pub fn verify_cone_witness(p: &LinearVop, x: &QueryPoint, pert: &Perturbation, w: &ProperWitness) -> bool {
    let Ok(t) = target(p, x, pert) else {
        return false;
    };
    let ray = &w.witness.ray;
    if rational::is_zero_vec(ray) || !p.cone().negate().contains(ray) {
        return false;
    }
    let k_ok = match (&w.form, &w.cone_part) {
        (CriterionForm::Plain, None) => true,
        (CriterionForm::PlusK, Some(k)) => p.cone().contains(k),
        _ => false,
    };
    if !k_ok || w.preimage.len() != p.n() {
        return false;
    }
    let add_k = |v: Vec<Rational>| match &w.cone_part {
        Some(k) => rational::add(&v, k),
        None => v,
    };
    match &w.witness.branch {
        WitnessBranch::Base { lambda, point } => {
            let Ok(fx) = p.evaluate_objective(&w.preimage) else {
                return false;
            };
            lambda.is_positive()
                && p.constraints().contains(&w.preimage)
                && add_k(rational::sub(&fx, &t)) == *point
                && rational::scale(point, lambda) == *ray
        }
        WitnessBranch::Recession => {
            let x_rows = p.constraints();
            let r = &w.preimage;
            x_rows.ineq_lhs().iter().all(|a| !dot(a, r).is_positive())
                && x_rows.eq_lhs().iter().all(|a| dot(a, r).is_zero())
                && add_k(rational::mat_vec(p.objective_matrix(), r)) == *ray
        }
    }
}

/// Decides `cl cone S ∩ (-K) = {0}` for the chosen form of `S`.
pub fn is_benson_proper(
    p: &LinearVop,
    x: &QueryPoint,
    pert: &Perturbation,
    form: CriterionForm,
) -> Result<Verdict> {
    p.validate_perturbation(pert)?;
    if !p.is_pointed() {
        return Err(Error::NotPointed);
    }
    let t = target(p, x, pert)?;
    let s = criterion_set(p, x, pert, form)?;
    let closure = s.generated_cone_closure()?;
    let neg_k = p.cone().negate();
    let mut lps = Vec::new();
    match closure.intersect_nontrivial_logged(&neg_k, &mut lps) {
        Some(witness) => {
            if !witness.verify(closure.base(), &neg_k) {
                return Err(Error::Internal("cone witness failed re-check against S".into()));
            }
            let (pre, k) = preimage(p, &t, form, &witness)
                .ok_or_else(|| Error::Internal("cone witness has no preimage in X".into()))?;
            let proper = ProperWitness { form, witness, preimage: pre, cone_part: k };
            if !verify_cone_witness(p, x, pert, &proper) {
                return Err(Error::Internal("cone witness failed re-check against problem data".into()));
            }
            Ok(Verdict { member: false, certificate: Certificate::ConeWitness(proper) })
        }
        None => Ok(Verdict {
            member: true,
            certificate: Certificate::VacuousOrProven(Evidence {
                summary: "cl cone S meets -K only at the origin (base and recession branches)".into(),
                lps,
            }),
        }),
    }
}

/// Both forms computed side by side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormComparison {
    pub agree: bool,
    pub plain: Verdict,
    pub plus_k: Verdict,
}

/// Whether the plain and plus-K criteria give the same membership answer.
pub fn forms_agree(p: &LinearVop, x: &QueryPoint, pert: &Perturbation) -> Result<FormComparison> {
    let plain = is_benson_proper(p, x, pert, CriterionForm::Plain)?;
    let plus_k = is_benson_proper(p, x, pert, CriterionForm::PlusK)?;
    Ok(FormComparison { agree: plain.member == plus_k.member, plain, plus_k })
}

/// Approximate proper efficiency on the orthant. Both criterion forms are
/// evaluated; disagreement is reported as an internal error.
pub fn is_eps_properly_efficient(p: &LinearVop, x: &QueryPoint, eps: &Perturbation) -> Result<Verdict> {
    if !p.cone_is_orthant(OrthantTest::Structural) {
        return Err(Error::ConeMismatch);
    }
    p.validate_perturbation(eps)?;
    let cmp = forms_agree(p, x, eps)?;
    if !cmp.agree {
        return Err(Error::Internal(format!(
            "plain and plusK criterion forms disagree (plain={}, plusK={})",
            cmp.plain.member, cmp.plus_k.member
        )));
    }
    Ok(cmp.plain)
}

/// One trade-off ratio `A_ij(x̄, x, ε)` observed at a sample.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioProbe {
    pub i: usize,
    pub j: usize,
    #[serde(with = "serde_q::vec")]
    pub x: Vec<Rational>,
    #[serde(with = "serde_q")]
    pub ratio: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SupEstimate {
    Finite {
        #[serde(with = "serde_q")]
        value: Rational,
    },
    Infinite,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioProfile {
    pub sup_estimate: SupEstimate,
    /// Largest finite bound observed, whether or not a ray diverged.
    #[serde(with = "serde_q")]
    pub running_sup: Rational,
    pub samples: usize,
    pub probes: Vec<RatioProbe>,
    /// Ray along which the divergence rule fired.
    #[serde(with = "serde_q::option_vec", default)]
    pub diverging_ray: Option<Vec<Rational>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProfileConfig {
    /// Total number of sample points (ray probes plus lattice).
    pub budget: usize,
    /// Half-width of the lattice box around `x̄`.
    pub radius: Rational,
    /// Ray probes use `t = 2^0, 2^1, ..., 2^ray_doublings`.
    pub ray_doublings: u32,
}

impl Default for ProfileConfig {
    fn default() -> Self {
        Self { budget: 10_000, radius: rational::int(4), ray_doublings: 40 }
    }
}

/// Divergence threshold for the infinite flag.
pub fn divergence_threshold() -> Rational {
    rational::int(1_000_000)
}

/// `max_i min_j A_ij(x̄, x, ε)` over admissible `i`, with the probes that
/// realize each inner minimum. `None` when no `i` improves.
fn ratio_at(fx: &[Rational], t: &[Rational], x: &[Rational]) -> Result<Option<(Rational, Vec<RatioProbe>)>> {
    let mut best: Option<Rational> = None;
    let mut probes = Vec::new();
    for i in 0..t.len() {
        if fx[i] >= t[i] {
            continue;
        }
        let gain = &t[i] - &fx[i];
        let inner = (0..t.len())
            .filter(|&j| fx[j] > t[j])
            .map(|j| (j, &gain / (&fx[j] - &t[j])))
            .min_by(|a, b| a.1.cmp(&b.1));
        let Some((j, ratio)) = inner else {
            return Err(Error::Internal("sample dominates an efficient point".into()));
        };
        if best.as_ref().is_none_or(|b| ratio > *b) {
            best = Some(ratio.clone());
        }
        probes.push(RatioProbe { i, j, x: x.to_vec(), ratio });
    }
    Ok(best.map(|b| (b, probes)))
}

/// Samples trade-off ratios around `x̄` to falsify Geoffrion-type proper
/// efficiency. A finite estimate proves nothing; the infinite flag fires
/// when ratios along one recession ray increase strictly and pass
/// [`divergence_threshold`].
pub fn geoffrion_ratio_profile(
    p: &LinearVop,
    x: &QueryPoint,
    eps: &Perturbation,
    config: &ProfileConfig,
) -> Result<RatioProfile> {
    if !p.cone_is_orthant(OrthantTest::Structural) {
        return Err(Error::ConeMismatch);
    }
    p.validate_perturbation(eps)?;
    if !is_eps_efficient(p, x, eps)?.member {
        return Err(Error::NotEpsEfficient);
    }
    let t = target(p, x, eps)?;
    let xbar = x.coords();
    let threshold = divergence_threshold();
    let mut samples = 0usize;
    let mut probes = Vec::new();
    let mut running_sup = Rational::zero();
    let mut diverging_ray = None;

    let directions = p.constraints().recession_cone()?.probe_directions();
    'rays: for r in &directions {
        let mut last: Option<Rational> = None;
        let mut increasing = true;
        for k in 0..=config.ray_doublings {
            if samples >= config.budget {
                break 'rays;
            }
            let step = Rational::from_integer(num_bigint::BigInt::from(1u64) << k);
            let sample = rational::add(xbar, &rational::scale(r, &step));
            samples += 1;
            let fx = p.evaluate_objective(&sample)?;
            if let Some((value, ps)) = ratio_at(&fx, &t, &sample)? {
                if let Some(prev) = &last {
                    increasing &= value > *prev;
                } else {
                    increasing = true;
                }
                if value > running_sup {
                    running_sup = value.clone();
                }
                probes.extend(ps);
                let strictly_rising = last.is_some() && increasing;
                last = Some(value.clone());
                if strictly_rising && value > threshold && diverging_ray.is_none() {
                    diverging_ray = Some(r.clone());
                    break;
                }
            } else {
                last = None;
            }
        }
    }

    let remaining = config.budget.saturating_sub(samples);
    let n = p.n();
    if remaining > 0 && n > 0 {
        let mut per_axis = (remaining as f64).powf(1.0 / n as f64).floor() as usize;
        while per_axis.saturating_pow(n as u32) > remaining {
            per_axis -= 1;
        }
        let per_axis = per_axis.max(1);
        let coords: Vec<Rational> = if per_axis == 1 {
            vec![Rational::zero()]
        } else {
            let span = rational::int(per_axis as i64 - 1);
            (0..per_axis)
                .map(|k| &config.radius * (rational::int(2 * k as i64) / &span - rational::int(1)))
                .collect()
        };
        let mut idx = vec![0usize; n];
        'lattice: loop {
            let offset: Vec<Rational> = idx.iter().map(|&k| coords[k].clone()).collect();
            let sample = rational::add(xbar, &offset);
            if p.constraints().contains(&sample) {
                samples += 1;
                let fx = p.evaluate_objective(&sample)?;
                if let Some((value, ps)) = ratio_at(&fx, &t, &sample)? {
                    if value > running_sup {
                        running_sup = value;
                    }
                    probes.extend(ps);
                }
            }
            for axis in (0..n).rev() {
                idx[axis] += 1;
                if idx[axis] < per_axis {
                    continue 'lattice;
                }
                idx[axis] = 0;
            }
            break;
        }
    }

    let sup_estimate = if diverging_ray.is_some() {
        SupEstimate::Infinite
    } else {
        SupEstimate::Finite { value: running_sup.clone() }
    };
    Ok(RatioProfile { sup_estimate, running_sup, samples, probes, diverging_ray })
}
