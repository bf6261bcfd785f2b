//! Independent oracles shared by the integration tests and the acceptance run.

#![allow(dead_code)]

use bensonkit::rational::{self, frac, int, Matrix};
use bensonkit::{HPolyhedron, Rational};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn v(xs: &[i64]) -> Vec<Rational> {
    xs.iter().map(|&x| int(x)).collect()
}

/// Random polyhedron in `R^dim` with small integer rows, possibly with one
/// equality, possibly empty.
pub fn random_polyhedron(seed: u64, dim: usize) -> HPolyhedron {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rows = rng.gen_range(2..=6);
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    for _ in 0..rows {
        lhs.push((0..dim).map(|_| int(rng.gen_range(-3..=3))).collect::<Vec<_>>());
        rhs.push(int(rng.gen_range(-2..=4)));
    }
    let (eq_lhs, eq_rhs) = if rng.gen_bool(0.25) {
        (vec![(0..dim).map(|_| int(rng.gen_range(-2..=2))).collect()], vec![int(rng.gen_range(-1..=1))])
    } else {
        (Vec::new(), Vec::new())
    };
    HPolyhedron::new(dim, lhs, rhs, eq_lhs, eq_rhs).unwrap()
}

/// Whether some `t` puts `(prefix, t)` in `p`, by solving the rows for the
/// last coordinate directly: each row bounds `t` from one side or pins it.
pub fn lifts(p: &HPolyhedron, prefix: &[Rational]) -> bool {
    let d = p.dim();
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    let mut fix: Option<Rational> = None;
    let mut rows: Vec<(&Vec<Rational>, &Rational, bool)> =
        p.ineq_lhs().iter().zip(p.ineq_rhs()).map(|(a, b)| (a, b, false)).collect();
    rows.extend(p.eq_lhs().iter().zip(p.eq_rhs()).map(|(a, b)| (a, b, true)));
    for (a, b, is_eq) in rows {
        let rest = b - rational::dot(&a[..d - 1], prefix);
        let c = &a[d - 1];
        if c.is_zero() {
            let ok = if is_eq { rest.is_zero() } else { !rest.is_negative() };
            if !ok {
                return false;
            }
            continue;
        }
        let bound = &rest / c;
        if is_eq {
            if fix.as_ref().is_some_and(|f| *f != bound) {
                return false;
            }
            fix = Some(bound);
        } else if c.is_positive() {
            hi = Some(hi.map_or(bound.clone(), |h: Rational| h.min(bound)));
        } else {
            lo = Some(lo.map_or(bound.clone(), |l: Rational| l.max(bound)));
        }
    }
    if let (Some(l), Some(h)) = (&lo, &hi) {
        if l > h {
            return false;
        }
    }
    match fix {
        Some(f) => lo.as_ref().is_none_or(|l| *l <= f) && hi.as_ref().is_none_or(|h| f <= *h),
        None => true,
    }
}

/// `{-3, -5/2, ..., 3}^k`.
pub fn half_grid(k: usize) -> Matrix {
    let axis: Vec<Rational> = (-6..=6).map(|i| frac(i, 2)).collect();
    let mut out: Matrix = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |a| {
                    let mut q = p.clone();
                    q.push(a.clone());
                    q
                })
            })
            .collect();
    }
    out
}

/// FM projection of the last coordinate agrees with the lifting oracle on
/// the grid. Returns the number of grid points checked.
pub fn fm_matches_lifting(seed: u64) -> Result<usize, String> {
    let p = random_polyhedron(seed, 3);
    let proj = p.fm_eliminate(2);
    let pruned = proj.prune_redundant();
    let grid = half_grid(2);
    for x in &grid {
        let want = lifts(&p, x);
        if proj.contains(x) != want || pruned.contains(x) != want {
            return Err(format!("seed {seed}: disagreement at {}", rational::format_vector(x)));
        }
    }
    Ok(grid.len())
}
