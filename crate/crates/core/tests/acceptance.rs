//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use goldeneq::bench::{self, reference_solution, ExperimentResult, REFERENCE_BUDGET};
use goldeneq::problems::conditions::{
    check_a1, check_a2, check_a5, check_a9, solution_certificate, ConditionReport, DEFAULT_SEED,
};
use goldeneq::problems::instances::{example61_matrices, start_function_1, start_function_2};
use goldeneq::problems::{example21, example61, example62, vi_linear, FeasibleSet, ProblemInstance};
use goldeneq::prox::{project_polytope, solve_prox, ProxProblem, DEFAULT_INNER_TOL};
use goldeneq::solvers::*;
use goldeneq::PHI;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn within(got: usize, want: usize, band: usize) -> bool {
    got.abs_diff(want) <= band
}

fn counts(r: &ExperimentResult, solver: SolverKind) -> Vec<usize> {
    r.table.iterations(solver).expect("solver in table")
}

fn table1_reproduction() -> Outcome {
    let t = Instant::now();
    let r = bench::table1(true).expect("table1 runs");
    let secs = t.elapsed().as_secs_f64();
    let gea = counts(&r, SolverKind::Gea);
    let gra1 = counts(&r, SolverKind::Gra1);
    let ok = gea.iter().all(|&n| within(n, 40, 5))
        && gra1.iter().zip([97, 96, 96]).all(|(&n, w)| within(n, w, 15))
        && secs < 10.0;
    (
        ok,
        format!("GEA {gea:?} (want 40 +-5), GRA1 {gra1:?} (want [97, 96, 96] +-15), {secs:.2}s (< 10s)"),
    )
}

fn table2_reproduction() -> Outcome {
    let t = Instant::now();
    let r = bench::table2(101, true).expect("table2 runs");
    let secs = t.elapsed().as_secs_f64();
    let fine = bench::table2(501, false).expect("table2 runs at N=501");
    let mut ok = secs < 5.0;
    let mut detail = Vec::new();
    for (solver, want) in [(SolverKind::Hieu, 86), (SolverKind::Popov, 118), (SolverKind::Gra2, 83)] {
        let c = counts(&r, solver);
        let c501 = counts(&fine, solver);
        let good = c.iter().all(|&n| within(n, want, 10));
        let stable = c.iter().zip(&c501).all(|(&a, &b)| a.abs_diff(b) <= 2);
        ok &= good && stable;
        detail.push(format!(
            "{solver} {c:?} (want {want} +-10{}) N=501 {c501:?}{}",
            if good { "" } else { ", OUT OF BAND" },
            if stable { "" } else { " UNSTABLE" }
        ));
    }
    (ok, format!("{}; {secs:.2}s (< 5s)", detail.join("; ")))
}

fn strong_convergence() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [example62(101).unwrap(), example21(101).unwrap()] {
        let z = p.known_solution.clone().unwrap();
        for (start, x0) in [("x0-1", start_function_1(&p.space).unwrap()), ("x0-2", start_function_2(&p.space).unwrap())] {
            for (solver, sched) in [
                (SolverKind::Gra2, StepSchedule::Diminishing { a: 40.0 }),
                (SolverKind::Gra3, StepSchedule::Adaptive { b: 40.0 }),
            ] {
                let mut s = GoldenState::new(x0.clone(), x0.clone()).unwrap();
                let mut hit = None;
                for i in 0..5000 {
                    s = match solver {
                        SolverKind::Gra2 => gra2_step(&s, &p, sched.at(i), DEFAULT_INNER_TOL),
                        _ => gra3_step(&s, &p, sched.at(i)),
                    }
                    .expect("step")
                    .state;
                    // skip the start itself: x0-1 is already close to 0
                    if hit.is_none() && s.x.dist(&z) < 1e-2 && i > 0 {
                        hit = Some(i + 1);
                    }
                }
                let last = s.x.dist(&z);
                ok &= hit.is_some() && last < 1e-2;
                detail.push(format!(
                    "{} {solver} {start}: k={} final {last:.1e}",
                    p.name,
                    hit.map_or("never".into(), |k| k.to_string())
                ));
            }
        }
    }
    (ok, detail.join("; "))
}

fn energy_suite() -> Outcome {
    let p = example61();
    let z = reference_solution(&p, REFERENCE_BUDGET).expect("reference solution");
    let lambda = bench::TABLE1_STEP;
    let mut ok = true;
    let mut worst_lemma = f64::NEG_INFINITY;
    let mut worst_mono = f64::NEG_INFINITY;
    let mut steps = 0;
    for x0 in goldeneq::problems::instances::example61_starts() {
        let x0 = p.vector(x0.to_vec()).unwrap();
        let mut s = GoldenState::new(x0.clone(), x0).unwrap();
        loop {
            let next = gra1_step(&s, &p, lambda, DEFAULT_INNER_TOL).expect("step");
            let e = s.energy(&z);
            let e1 = next.state.energy(&z);
            let slack = 1e-8 * (1.0 + e);
            let bound = e - PHI * s.x.dist(&s.y).powi(2) + 2.0 * lambda * p.bifunction.eval(&s.y, &z);
            // the bound is stated from k = 2 on; k = 1 has no y^0
            if s.k >= 2 {
                worst_lemma = worst_lemma.max(e1 - bound - slack);
            }
            worst_mono = worst_mono.max(e1 - e - slack);
            steps += 1;
            let done = next.residual < bench::TABLE1_TOL;
            s = next.state;
            if done || steps > 10_000 {
                break;
            }
        }
    }
    ok &= worst_lemma <= 0.0 && worst_mono <= 0.0;
    (
        ok,
        format!("{steps} steps over 3 starts, worst bound excess {worst_lemma:.2e}, worst increase {worst_mono:.2e}"),
    )
}

fn operator_equivalence() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for p in [vi_linear(), example62(101).unwrap(), example21(101).unwrap()] {
        let lambda = 0.9 * admissible_step(&p).unwrap();
        let x0 = match p.known_solution {
            Some(_) => start_function_2(&p.space).unwrap(),
            None => p.vector(vec![0.5; p.dim()]).unwrap(),
        };
        let mut a = GoldenState::new(x0.clone(), x0.clone()).unwrap();
        let mut b = a.clone();
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            a = gra1_step(&a, &p, lambda, DEFAULT_INNER_TOL).unwrap().state;
            b = graal_vi_step(&b, &p, lambda).unwrap().state;
            worst = worst.max(a.y.dist(&b.y)).max(a.x.dist(&b.x));
        }
        ok &= worst <= 1e-10;
        detail.push(format!("{} {worst:.1e}", p.name));
    }
    (ok, format!("max iterate gap over 200 steps: {}", detail.join(", ")))
}

fn oracle_equivalence() -> Outcome {
    let p = example61();
    let (pm, qm) = example61_matrices();
    let shift = [1.0, -2.0, -1.0, 2.0, -1.0];
    let a = FeasibleSet::sum_normal(&p.space);
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut draw = |r: f64| -> Vec<f64> { (0..5).map(|_| rng.random_range(-r..r)).collect() };

    let mut worst_proj: f64 = 0.0;
    for _ in 0..100 {
        let x = draw(12.0);
        let got = project_polytope(&p.vector(x.clone()).unwrap(), -5.0, 5.0, &a, -1.0).unwrap();
        worst_proj = worst_proj.max(max_abs_diff(got.point.coords(), &project_oracle(&x, -5.0, 5.0, -1.0)));
    }

    let mut worst_prox: f64 = 0.0;
    for _ in 0..100 {
        let anchor = p.set.project(&p.vector(draw(6.0)).unwrap()).unwrap();
        let center = p.vector(draw(9.0)).unwrap();
        let lambda = draw(1.0)[0].abs().max(0.01);
        let got = solve_prox(
            &ProxProblem {
                anchor: &anchor,
                center: &center,
                lambda,
                bifunction: p.bifunction.as_ref(),
                set: &p.set,
            },
            DEFAULT_INNER_TOL,
        )
        .unwrap();
        let want = affine_prox_oracle(&pm, &qm, &shift, anchor.coords(), center.coords(), lambda, -5.0, 5.0, -1.0);
        worst_prox = worst_prox.max(max_abs_diff(got.minimizer.coords(), &want));
    }
    (
        worst_proj <= 1e-8 && worst_prox <= 1e-8,
        format!("projection max error {worst_proj:.1e}, prox max error {worst_prox:.1e} (<= 1e-8)"),
    )
}

fn condition_suites() -> Outcome {
    let n = 1000;
    let seed = DEFAULT_SEED;
    let mut reports: Vec<(String, ConditionReport)> = Vec::new();
    for p in [example62(101).unwrap(), example21(101).unwrap()] {
        for r in [
            check_a1(&p, n, seed),
            check_a2(&p, n, seed),
            check_a5(&p, 1.75, 1.75, n, seed),
            check_a9(&p, 0.5, n, seed),
        ] {
            reports.push((p.name.clone(), r));
        }
    }
    let vi = vi_linear();
    let (c1, _) = vi.bifunction.lipschitz().unwrap();
    reports.push((vi.name.clone(), check_a5(&vi, c1, c1, n, seed)));
    let ok = reports.iter().all(|(_, r)| r.passed() && r.margin <= 1e-10);
    let failed: Vec<_> = reports.iter().filter(|(_, r)| !r.passed()).map(|(n, r)| format!("{n}: {r}")).collect();
    let detail = if failed.is_empty() {
        format!("{} suites, {n} samples, seed {seed}, margin 1e-10; vi-linear c1=c2={c1:.4}", reports.len())
    } else {
        failed.join("; ")
    };
    (ok, detail)
}

fn certificate_for(p: &ProblemInstance, r: &ExperimentResult, tol: f64, out: &mut Vec<String>) -> bool {
    let mut ok = true;
    let mut worst = f64::INFINITY;
    let mut n = 0;
    for (solver, start, t) in &r.traces {
        if t.status != Status::Converged {
            continue;
        }
        let y = t.solution.as_ref().expect("converged run has a solution");
        let c = solution_certificate(p, y, 500, DEFAULT_SEED);
        if c < -10.0 * tol {
            ok = false;
            out.push(format!("{} {solver} {start} certificate {c:.2e}", p.name));
        }
        worst = worst.min(c);
        n += 1;
    }
    out.push(format!("{}: {n} runs, worst {worst:.2e} (>= {:.0e})", p.name, -10.0 * tol));
    ok
}

fn terminal_certificate() -> Outcome {
    let mut detail = Vec::new();
    let t1 = bench::table1(false).unwrap();
    let t2 = bench::table2(101, false).unwrap();
    let ok = certificate_for(&example61(), &t1, bench::TABLE1_TOL, &mut detail)
        & certificate_for(&example62(101).unwrap(), &t2, bench::TABLE2_TOL, &mut detail);
    (ok, detail.join("; "))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 table1 reproduction", table1_reproduction),
        ("2 table2 reproduction", table2_reproduction),
        ("3 strong convergence", strong_convergence),
        ("4 energy descent", energy_suite),
        ("5 operator/prox equivalence", operator_equivalence),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 condition suites", condition_suites),
        ("8 terminal certificate", terminal_certificate),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let (ok, detail) = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|e| {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_default();
                (false, format!("panicked: {msg}"))
            });
        println!("{} criterion {name}: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
