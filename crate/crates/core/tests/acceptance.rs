//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bensonkit::efficiency::{self, CriterionForm, ProfileConfig};
use bensonkit::harness::{self, fixtures, Provenance, Strategy};
use bensonkit::lp;
use bensonkit::rational::{frac, int};
use bensonkit::{LinearVop, Perturbation, QueryPoint, Rational};
use common::v;

const SEED: u64 = 20_240_601;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    ok: bool,
    detail: String,
}

fn pass(detail: impl Into<String>) -> Outcome {
    Outcome { ok: true, detail: detail.into() }
}

fn fail(detail: impl Into<String>) -> Outcome {
    Outcome { ok: false, detail: detail.into() }
}

fn grid(xs: &[Rational], ys: &[Rational]) -> Vec<Vec<Rational>> {
    xs.iter().flat_map(|x| ys.iter().map(move |y| vec![x.clone(), y.clone()])).collect()
}

fn q(p: &LinearVop, x: &[Rational]) -> QueryPoint {
    QueryPoint::new(p, x.to_vec()).expect("lattice point lies in X")
}

fn criterion_1() -> Outcome {
    let p = fixtures::orthant_shift();
    let eps = Perturbation::epsilon(v(&[0, 1]));
    let mut checked = 0;
    for x in grid(&v(&[0, 1, 2, 3]), &[int(0), frac(1, 2), frac(3, 4)]) {
        let x = q(&p, &x);
        let eff = efficiency::is_eps_efficient(&p, &x, &eps).unwrap();
        let proper = efficiency::is_eps_properly_efficient(&p, &x, &eps).unwrap();
        let witness_ok = proper.cone_witness().is_some_and(|w| efficiency::verify_cone_witness(&p, &x, &eps, w));
        if !eff.member || proper.member || !witness_ok {
            return fail(format!("at {:?}", x.coords()));
        }
        checked += 1;
    }
    for x in grid(&v(&[0, 1, 2, 3]), &v(&[1, 2])) {
        let x = q(&p, &x);
        let eff = efficiency::is_eps_efficient(&p, &x, &eps).unwrap();
        let ok = !eff.member
            && eff.domination_witness().is_some_and(|y| efficiency::verify_domination(&p, &x, &eps, y));
        if !ok {
            return fail(format!("domination missing at {:?}", x.coords()));
        }
        checked += 1;
    }
    pass(format!("{checked} lattice points"))
}

fn criterion_2() -> Outcome {
    let p = fixtures::half_plane_strip();
    let eps = Perturbation::epsilon(v(&[1, 0]));
    let mut checked = 0;
    for x in grid(&[int(0), frac(1, 4), frac(1, 2), frac(3, 4)], &v(&[-5, 0, 5])) {
        let x = q(&p, &x);
        let eff = efficiency::is_eps_efficient(&p, &x, &eps).unwrap();
        let proper = efficiency::is_eps_properly_efficient(&p, &x, &eps).unwrap();
        let witness_ok = proper.cone_witness().is_some_and(|w| efficiency::verify_cone_witness(&p, &x, &eps, w));
        if !eff.member || proper.member || !witness_ok {
            return fail(format!("at {:?}", x.coords()));
        }
        let closure = efficiency::criterion_set(&p, &x, &eps, CriterionForm::Plain)
            .unwrap()
            .generated_cone_closure()
            .unwrap();
        let accepts = [-5, 0, 5].iter().all(|&t| closure.contains(&v(&[1, t])));
        if !accepts || closure.contains(&v(&[-1, 0])) {
            return fail(format!("closure membership wrong at {:?}", x.coords()));
        }
        checked += 1;
    }
    pass(format!("{checked} lattice points, closure = {{y1 >= 0}}"))
}

fn criterion_3() -> Outcome {
    let p = fixtures::wedge_strip();
    let mut candidates = harness::enumerate_candidates(&p, &Strategy::default()).unwrap();
    let xs: Vec<Rational> = (0..=8).map(|k| frac(k, 4)).collect();
    for x in grid(&xs, &v(&[-3, 0, 4])) {
        candidates.push(x, Provenance::Lattice, &p);
    }
    for e in [v(&[1, 0]), vec![int(1), frac(1, 2)]] {
        let rows = harness::classify(&p, &Perturbation::cone(e.clone()), &candidates).unwrap();
        for r in &rows {
            let inside = r.point[0] <= e[0];
            if r.eps_efficient != inside || r.benson_proper != inside {
                return fail(format!("e={e:?} at {:?}", r.point));
            }
        }
    }
    let report = harness::verify_isermann(&p, &candidates).unwrap();
    let on_axis = report.counterexamples.is_empty() && report.efficient > 0;
    let rows = harness::classify(&p, &Perturbation::cone(v(&[0, 0])), &candidates).unwrap();
    let efficient_on_line = rows.iter().filter(|r| r.eps_efficient).all(|r| r.point[0] == int(0));
    if !on_axis || !efficient_on_line {
        return fail("e = 0 classical case");
    }
    pass(format!("{} candidates, e in {{(1,0), (1,1/2), 0}}", candidates.len()))
}

fn suite(report: harness::SuiteReport, min_instances: usize) -> Outcome {
    if report.passed() && report.instances >= min_instances {
        pass(format!(
            "{}: {} instances, {} checks, 0 failures {:?}",
            report.name, report.instances, report.checks, report.tally
        ))
    } else {
        fail(format!("{}: {:?}", report.name, report.failures.iter().take(3).collect::<Vec<_>>()))
    }
}

fn criterion_4() -> Outcome {
    suite(harness::form_agreement_suite(SEED, 200), 200)
}

fn criterion_5() -> Outcome {
    suite(harness::isermann_suite(SEED, 100), 100)
}

fn criterion_6() -> Outcome {
    let general = suite(harness::dichotomy_suite(SEED, 200, false), 200);
    let orthant = suite(harness::dichotomy_suite(SEED + 7, 100, true), 100);
    Outcome { ok: general.ok && orthant.ok, detail: format!("{}; {}", general.detail, orthant.detail) }
}

fn criterion_7() -> Outcome {
    let config = ProfileConfig { budget: 10_000, ..ProfileConfig::default() };
    let thousand = int(1000);
    let improper: Vec<(LinearVop, Perturbation, Vec<Vec<Rational>>)> = vec![
        (
            fixtures::orthant_shift(),
            Perturbation::epsilon(v(&[0, 1])),
            vec![v(&[0, 0]), vec![int(1), frac(1, 2)], vec![int(3), frac(3, 4)]],
        ),
        (
            fixtures::half_plane_strip(),
            Perturbation::epsilon(v(&[1, 0])),
            vec![v(&[0, 5]), vec![frac(1, 2), int(-3)], vec![frac(3, 4), int(0)]],
        ),
    ];
    let mut profiles = 0;
    for (p, eps, points) in &improper {
        for x in points {
            let x = q(p, x);
            if efficiency::is_eps_properly_efficient(p, &x, eps).unwrap().member {
                return fail("criterion unexpectedly proper");
            }
            let prof = efficiency::geoffrion_ratio_profile(p, &x, eps, &config).unwrap();
            if prof.running_sup <= thousand {
                return fail(format!("running sup {} at {:?}", prof.running_sup, x.coords()));
            }
            profiles += 1;
        }
    }
    let p = fixtures::wedge_strip_orthant();
    for e in [v(&[1, 0]), vec![int(1), frac(1, 2)]] {
        let eps = Perturbation::epsilon(fixtures::wedge_to_orthant(&e));
        for x in [v(&[0, 0]), vec![frac(1, 2), int(3)], vec![int(1), int(-2)]] {
            let x = q(&p, &x);
            if !efficiency::is_eps_properly_efficient(&p, &x, &eps).unwrap().member {
                return fail(format!("orthant rewrite not proper at {:?}", x.coords()));
            }
            let prof = efficiency::geoffrion_ratio_profile(&p, &x, &eps, &config).unwrap();
            if prof.diverging_ray.is_some() {
                return fail(format!("diverging ray at {:?}", x.coords()));
            }
            profiles += 1;
        }
    }
    pass(format!("{profiles} profiles at budget {}", config.budget))
}

fn criterion_8() -> Outcome {
    let mut points = 0;
    for i in 0..60 {
        match common::fm_matches_lifting(SEED + i) {
            Ok(n) => points += n,
            Err(e) => return fail(e),
        }
    }
    let stats = lp::stats();
    if stats.failed != 0 || stats.verified != stats.solves {
        return fail(format!("{} of {} LP certificates failed", stats.failed, stats.solves));
    }
    pass(format!("60 instances, {points} grid points; {} LP solves, all certificates verified", stats.solves))
}

fn main() -> ExitCode {
    let limits = [1, 1, 1, 60, 60, 120, 60, 60].map(Duration::from_secs);
    let criteria: [Criterion; 8] = [
        ("orthant shift fixture", criterion_1),
        ("half-plane fixture", criterion_2),
        ("wedge fixture", criterion_3),
        ("criterion form agreement", criterion_4),
        ("classical case, zero perturbation", criterion_5),
        ("dichotomy", criterion_6),
        ("criterion vs ratio profile", criterion_7),
        ("kernel oracles and LP certificates", criterion_8),
    ];
    let mut all = true;
    for (i, ((name, run), limit)) in criteria.iter().zip(limits).enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let ok = out.ok && took <= limit;
        all &= ok;
        let status = if ok { "PASS" } else { "FAIL" };
        let over = if took > limit { format!(" (over {}s limit)", limit.as_secs()) } else { String::new() };
        println!("{status} criterion {}: {name} [{:.2}s{over}] {}", i + 1, took.as_secs_f64(), out.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
