//! Linear vector optimization problems and their JSON file format.
//!
//! ```json
//! {
//!   "n": 2, "m": 2,
//!   "objective":   { "matrix": [["-1","0"],["0","1"]], "offset": ["0","0"] },
//!   "constraints": { "ineq_lhs": [["-1","0"],["0","-1"]], "ineq_rhs": ["0","0"],
//!                    "eq_lhs": [], "eq_rhs": [] },
//!   "cone":        { "ineq_lhs": [["-1","0"],["0","-1"]] }
//! }
//! ```
//!
//! Every scalar is a string `"p/q"` or `"p"`. JSON numbers are rejected in
//! scalar positions, so no floating-point value can slip in.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyhedron::{HPolyhedron, PolyCone};
use crate::rational::{self, format_rational, parse_rational, Matrix, Rational};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearVop {
    n: usize,
    m: usize,
    objective_matrix: Matrix,
    objective_offset: Vec<Rational>,
    constraints: HPolyhedron,
    cone: PolyCone,
    pointed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PerturbationKind {
    /// `ε ∈ R^m_+` on the orthant-ordered problem.
    Epsilon,
    /// `e ∈ K` for a general ordering cone.
    E,
}

impl std::str::FromStr for PerturbationKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "epsilon" => Ok(Self::Epsilon),
            "e" => Ok(Self::E),
            other => Err(Error::Parse(format!("unknown perturbation kind {other:?}"))),
        }
    }
}

/// The shift `ε` or `e` applied to `f(x̄)`; the kind selects which
/// validation rule governs it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perturbation {
    #[serde(with = "rational::serde_q::vec")]
    pub vector: Vec<Rational>,
    pub kind: PerturbationKind,
}

impl Perturbation {
    pub fn epsilon(vector: Vec<Rational>) -> Self {
        Self { vector, kind: PerturbationKind::Epsilon }
    }

    pub fn cone(vector: Vec<Rational>) -> Self {
        Self { vector, kind: PerturbationKind::E }
    }

    pub fn zero(m: usize, kind: PerturbationKind) -> Self {
        Self { vector: rational::zeros(m), kind }
    }

    pub fn is_zero(&self) -> bool {
        rational::is_zero_vec(&self.vector)
    }
}

/// A candidate point `x̄`, checked to lie in `X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryPoint(Vec<Rational>);

impl QueryPoint {
    pub fn new(problem: &LinearVop, x: Vec<Rational>) -> Result<Self> {
        if x.len() != problem.n {
            return Err(Error::DimensionMismatch { expected: problem.n, found: x.len() });
        }
        if !problem.constraints.contains(&x) {
            return Err(Error::PointOutsideConstraintSet);
        }
        Ok(Self(x))
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }
}

/// How to decide whether `K` is the nonnegative orthant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OrthantTest {
    /// Pruned rows are exactly `{-e_i}`, with no equalities.
    #[default]
    Structural,
    /// Set equality via LP inclusion tests in both directions.
    Semantic,
}

impl LinearVop {
    pub fn new(
        objective_matrix: Matrix,
        objective_offset: Vec<Rational>,
        constraints: HPolyhedron,
        cone: PolyCone,
    ) -> Result<Self> {
        let n = constraints.dim();
        let m = objective_offset.len();
        if objective_matrix.len() != m {
            return Err(Error::DimensionMismatch { expected: m, found: objective_matrix.len() });
        }
        if let Some(row) = objective_matrix.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, found: row.len() });
        }
        if cone.dim() != m {
            return Err(Error::DimensionMismatch { expected: m, found: cone.dim() });
        }
        if constraints.is_empty() {
            return Err(Error::EmptyConstraintSet);
        }
        let pointed = cone.is_pointed();
        Ok(Self { n, m, objective_matrix, objective_offset, constraints, cone, pointed })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn objective_matrix(&self) -> &Matrix {
        &self.objective_matrix
    }

    pub fn objective_offset(&self) -> &[Rational] {
        &self.objective_offset
    }

    pub fn constraints(&self) -> &HPolyhedron {
        &self.constraints
    }

    pub fn cone(&self) -> &PolyCone {
        &self.cone
    }

    pub fn is_pointed(&self) -> bool {
        self.pointed
    }

    /// Exact `M x + q`.
    pub fn evaluate_objective(&self, x: &[Rational]) -> Result<Vec<Rational>> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, found: x.len() });
        }
        Ok(rational::add(&rational::mat_vec(&self.objective_matrix, x), &self.objective_offset))
    }

    pub fn cone_is_orthant(&self, test: OrthantTest) -> bool {
        let m = self.m;
        match test {
            OrthantTest::Structural => {
                let pruned = self.cone.pruned();
                let rows = pruned.carrier().ineq_lhs();
                pruned.carrier().eq_lhs().is_empty()
                    && rows.len() == m
                    && (0..m).all(|i| rows.contains(&rational::neg(&rational::unit(m, i))))
            }
            OrthantTest::Semantic => {
                let orthant_in_k = (0..m).all(|i| self.cone.contains(&rational::unit(m, i)));
                let k_in_orthant = crate::polyhedron::cone_intersection_nontrivial(
                    &self.cone,
                    &PolyCone::orthant(m).negate(),
                )
                .is_none()
                    && (0..m).all(|i| {
                        let boxed = self
                            .cone
                            .carrier()
                            .intersect(&HPolyhedron::cube(m, &rational::int(1)))
                            .expect("same dimension");
                        let out = crate::lp::minimize(&boxed, &rational::unit(m, i));
                        out.value.is_some_and(|v| !v.is_negative())
                    });
                orthant_in_k && k_in_orthant
            }
        }
    }

    pub fn validate_perturbation(&self, pert: &Perturbation) -> Result<()> {
        self.validate_perturbation_with(pert, OrthantTest::Structural)
    }

    /// `epsilon` requires `K = R^m_+` and `ε >= 0`; `e` requires `e ∈ K`.
    /// A zero `e` is accepted (classical Benson proper efficiency).
    pub fn validate_perturbation_with(&self, pert: &Perturbation, test: OrthantTest) -> Result<()> {
        if pert.vector.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: pert.vector.len() });
        }
        match pert.kind {
            PerturbationKind::Epsilon => {
                if !self.cone_is_orthant(test) {
                    return Err(Error::ConeMismatch);
                }
                if pert.vector.iter().any(Signed::is_negative) {
                    return Err(Error::PerturbationOutsideCone);
                }
            }
            PerturbationKind::E => {
                if !self.cone.contains(&pert.vector) {
                    return Err(Error::PerturbationOutsideCone);
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: ProblemDocument =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_document(&doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn from_document(doc: &ProblemDocument) -> Result<Self> {
        let (n, m) = (doc.n, doc.m);
        let matrix = parse_matrix(&doc.objective.matrix, n, "objective.matrix")?;
        let offset = parse_column(&doc.objective.offset, "objective.offset")?;
        if matrix.len() != m || offset.len() != m {
            return Err(Error::Parse(format!("objective must have {m} rows")));
        }
        let c = &doc.constraints;
        let constraints = HPolyhedron::new(
            n,
            parse_matrix(&c.ineq_lhs, n, "constraints.ineq_lhs")?,
            parse_column(&c.ineq_rhs, "constraints.ineq_rhs")?,
            parse_matrix(&c.eq_lhs, n, "constraints.eq_lhs")?,
            parse_column(&c.eq_rhs, "constraints.eq_rhs")?,
        )
        .map_err(|e| Error::Parse(format!("constraints: {e}")))?;
        let k = &doc.cone;
        let k_ineq = parse_matrix(&k.ineq_lhs, m, "cone.ineq_lhs")?;
        let k_eq = parse_matrix(&k.eq_lhs, m, "cone.eq_lhs")?;
        let k_ineq_rhs = match &k.ineq_rhs {
            Some(r) => parse_column(r, "cone.ineq_rhs")?,
            None => rational::zeros(k_ineq.len()),
        };
        let k_eq_rhs = match &k.eq_rhs {
            Some(r) => parse_column(r, "cone.eq_rhs")?,
            None => rational::zeros(k_eq.len()),
        };
        let carrier = HPolyhedron::new(m, k_ineq, k_ineq_rhs, k_eq, k_eq_rhs)
            .map_err(|e| Error::Parse(format!("cone: {e}")))?;
        let cone = PolyCone::new(carrier)?;
        Self::new(matrix, offset, constraints, cone)
    }

    pub fn to_document(&self) -> ProblemDocument {
        let mat = |m: &Matrix| -> Vec<Vec<String>> {
            m.iter().map(|r| r.iter().map(format_rational).collect()).collect()
        };
        let col = |v: &[Rational]| -> Vec<String> { v.iter().map(format_rational).collect() };
        let k = self.cone.carrier();
        ProblemDocument {
            n: self.n,
            m: self.m,
            objective: ObjectiveDoc {
                matrix: mat(&self.objective_matrix),
                offset: col(&self.objective_offset),
            },
            constraints: ConstraintsDoc {
                ineq_lhs: mat(self.constraints.ineq_lhs()),
                ineq_rhs: col(self.constraints.ineq_rhs()),
                eq_lhs: mat(self.constraints.eq_lhs()),
                eq_rhs: col(self.constraints.eq_rhs()),
            },
            cone: ConeDoc {
                ineq_lhs: mat(k.ineq_lhs()),
                eq_lhs: mat(k.eq_lhs()),
                ineq_rhs: None,
                eq_rhs: None,
            },
        }
    }
}

fn parse_column(items: &[String], what: &str) -> Result<Vec<Rational>> {
    items
        .iter()
        .map(|t| parse_rational(t).map_err(|e| Error::Parse(format!("{what}: {e}"))))
        .collect()
}

fn parse_matrix(rows: &[Vec<String>], width: usize, what: &str) -> Result<Matrix> {
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            if row.len() != width {
                return Err(Error::Parse(format!(
                    "{what}[{i}] has {} entries, expected {width}",
                    row.len()
                )));
            }
            parse_column(row, what)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemDocument {
    pub n: usize,
    pub m: usize,
    pub objective: ObjectiveDoc,
    pub constraints: ConstraintsDoc,
    pub cone: ConeDoc,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveDoc {
    pub matrix: Vec<Vec<String>>,
    pub offset: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintsDoc {
    #[serde(default)]
    pub ineq_lhs: Vec<Vec<String>>,
    #[serde(default)]
    pub ineq_rhs: Vec<String>,
    #[serde(default)]
    pub eq_lhs: Vec<Vec<String>>,
    #[serde(default)]
    pub eq_rhs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConeDoc {
    #[serde(default)]
    pub ineq_lhs: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub eq_lhs: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ineq_rhs: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eq_rhs: Option<Vec<String>>,
}
