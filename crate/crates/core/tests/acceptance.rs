//! Acceptance suite. Runs every criterion at its pinned tolerance, prints
//! one PASS/FAIL line per criterion, and fails if any criterion fails.
//!
//! Run with `cargo test -p qtomo-core --test acceptance -- --nocapture`.

use std::f64::consts::{PI, TAU};
use std::time::{Duration, Instant};

use qtomo_core::qubit::{sigma0, sigma1, sigma2, sigma3, PauliBasis};
use qtomo_core::{
    c64, derive_seed, density_from_stokes, estimate_stokes, evolve, exact_stokes, initial_state, payoff_closed_form,
    payoff_exact, pure_density, reconstruct, run_protocol_exact, run_tomography, stokes_of, ComplexMatrix,
    PayoffMatrix, PureQubit, StepLabel, StokesVector, Strategy,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const IDENTITY_TOL: f64 = 1e-12;
const CLOSED_FORM_TOL: f64 = 1e-10;
const ALPHA_TOL: f64 = 1e-12;
const STD_ERROR_SLACK: f64 = 1e-12;
const RMS_FACTOR: f64 = 1.5;
const MEDIAN_FIDELITY: f64 = 0.999;
const ROUND_TRIP_TOL: f64 = 1e-12;
const DENSITY_TOL: f64 = 1e-9;

struct Outcome {
    id: u8,
    name: &'static str,
    passed: bool,
    detail: String,
    elapsed: Duration,
}

/// Every evolved ρ_f from criteria 1–5, re-validated in criterion 6.
#[derive(Default)]
struct Collected {
    final_states: Vec<ComplexMatrix>,
}

fn random_pure(rng: &mut ChaCha8Rng) -> PureQubit {
    let theta = (1.0 - 2.0 * rng.random::<f64>()).clamp(-1.0, 1.0).acos();
    let phi = TAU * rng.random::<f64>();
    PureQubit::new(theta, phi).unwrap()
}

fn random_strategy(rng: &mut ChaCha8Rng) -> Strategy {
    Strategy::new(PI * rng.random::<f64>(), TAU * rng.random::<f64>()).unwrap()
}

fn criterion_1(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let mut worst_a = 0.0f64;
    let mut worst_b = 0.0f64;
    for i in 0..21 {
        for j in 0..41 {
            let theta = i as f64 * PI / 20.0;
            let phi = j as f64 * TAU / 41.0;
            let q = PureQubit::new(theta, phi).unwrap();
            let outcomes = run_protocol_exact(&pure_density(&q)).unwrap();
            for o in outcomes {
                let expected = match o.step.label {
                    StepLabel::S2 => theta.sin() * phi.sin(),
                    StepLabel::S1 => theta.sin() * phi.cos(),
                    StepLabel::S3 => theta.cos(),
                };
                worst_a = worst_a.max((o.payoff_a - expected).abs());
                worst_b = worst_b.max((o.payoff_b + expected).abs());
                c.final_states.push(*o.run.rho_f());
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        id: 1,
        name: "payoff-Stokes identity on 21x41 grid",
        passed: worst_a <= IDENTITY_TOL && worst_b <= IDENTITY_TOL && elapsed < Duration::from_secs(1),
        detail: format!("max |$A - S| = {worst_a:.3e}, max |$B + S| = {worst_b:.3e}"),
        elapsed,
    }
}

fn criterion_2(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let mut e = [0.0; 4];
        for x in e.iter_mut() {
            *x = -2.0 + 4.0 * rng.random::<f64>();
        }
        let p = PayoffMatrix::new(e[0], e[1], e[2], e[3]).unwrap();
        let sa = random_strategy(&mut rng);
        let sb = random_strategy(&mut rng);
        let q = random_pure(&mut rng);
        let run = evolve(&initial_state(&pure_density(&q)).unwrap(), sa, sb).unwrap();
        worst = worst.max((payoff_closed_form(&p, &sa, &sb, &q) - payoff_exact(&run, &p)).abs());
        c.final_states.push(*run.rho_f());
    }
    let elapsed = start.elapsed();
    Outcome {
        id: 2,
        name: "closed form equals Tr(P rho_f) over 1000 draws",
        passed: worst <= CLOSED_FORM_TOL && elapsed < Duration::from_secs(1),
        detail: format!("max |closed - matrix| = {worst:.3e}"),
        elapsed,
    }
}

fn criterion_3(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst_alpha = 0.0f64;
    let mut zero_sum_violations = 0usize;
    for _ in 0..500 {
        let q = random_pure(&mut rng);
        let sa = random_strategy(&mut rng);
        let sb = random_strategy(&mut rng);
        let moved = sa.with_alpha(TAU * rng.random::<f64>()).unwrap();
        let rho_in = initial_state(&pure_density(&q)).unwrap();
        let run = evolve(&rho_in, sa, sb).unwrap();
        let run_moved = evolve(&rho_in, moved, sb).unwrap();
        for p in [PayoffMatrix::alice(), PayoffMatrix::bob()] {
            worst_alpha = worst_alpha.max((payoff_exact(&run, &p) - payoff_exact(&run_moved, &p)).abs());
        }
        for r in [&run, &run_moved] {
            if payoff_exact(r, &PayoffMatrix::bob()) != -payoff_exact(r, &PayoffMatrix::alice()) {
                zero_sum_violations += 1;
            }
        }
        c.final_states.push(*run.rho_f());
        c.final_states.push(*run_moved.rho_f());
    }
    Outcome {
        id: 3,
        name: "alpha_A invariance and exact zero-sum over 500 runs",
        passed: worst_alpha <= ALPHA_TOL && zero_sum_violations == 0,
        detail: format!("max alpha_A drift = {worst_alpha:.3e}, zero-sum violations = {zero_sum_violations}"),
        elapsed: start.elapsed(),
    }
}

fn criterion_4(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let m = 4096u64;
    let seeds = 200u64;
    let inv_sqrt_m = 1.0 / (m as f64).sqrt();
    let states = [
        pure_density(&PureQubit::new(1.1, 0.7).unwrap()),
        sigma0().scale(c64(0.5, 0.0)),
    ];
    let mut worst_se = 0.0f64;
    let mut worst_rms = 0.0f64;
    for (k, rho) in states.iter().enumerate() {
        let exact = exact_stokes(rho).unwrap();
        let mut sq = [0.0; 3];
        for s in 0..seeds {
            let r = estimate_stokes(rho, m, derive_seed(4000 + k as u64, s)).unwrap();
            for e in r.per_step.unwrap() {
                worst_se = worst_se.max(e.std_error);
            }
            for (i, acc) in sq.iter_mut().enumerate() {
                let idx = i + 1;
                *acc += (r.stokes_est.to_array()[idx] - exact.to_array()[idx]).powi(2);
            }
        }
        for acc in sq {
            worst_rms = worst_rms.max((acc / seeds as f64).sqrt());
        }
        for o in run_protocol_exact(rho).unwrap() {
            c.final_states.push(*o.run.rho_f());
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        id: 4,
        name: "shot-noise bound at m=4096 over 200 seeds",
        passed: worst_se <= inv_sqrt_m + STD_ERROR_SLACK
            && worst_rms <= RMS_FACTOR * inv_sqrt_m
            && elapsed < Duration::from_secs(10),
        detail: format!(
            "max std_error = {worst_se:.6e} (bound {:.6e}), max RMS = {worst_rms:.6e} (bound {:.6e})",
            inv_sqrt_m + STD_ERROR_SLACK,
            RMS_FACTOR * inv_sqrt_m
        ),
        elapsed,
    }
}

fn criterion_5(c: &mut Collected) -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let m = 100_000u64;
    let mut fidelities = Vec::with_capacity(50);
    let mut worst_round_trip = 0.0f64;
    let mut any_flag = false;
    for s in 0..50u64 {
        let q = random_pure(&mut rng);
        let rho = pure_density(&q);
        let r = run_tomography(&q, m, derive_seed(5000, s)).unwrap();
        fidelities.push(r.fidelity.unwrap());

        let (exact_rec, flag) = reconstruct(&exact_stokes(&rho).unwrap(), true).unwrap();
        any_flag |= flag;
        worst_round_trip = worst_round_trip.max(exact_rec.max_abs_diff(&rho).unwrap());
        for o in run_protocol_exact(&rho).unwrap() {
            c.final_states.push(*o.run.rho_f());
        }
    }
    fidelities.sort_by(f64::total_cmp);
    let median = 0.5 * (fidelities[24] + fidelities[25]);
    let elapsed = start.elapsed();
    Outcome {
        id: 5,
        name: "end-to-end reconstruction, 50 states at m=1e5",
        passed: median >= MEDIAN_FIDELITY
            && worst_round_trip <= ROUND_TRIP_TOL
            && !any_flag
            && elapsed < Duration::from_secs(30),
        detail: format!(
            "median fidelity = {median:.6}, min = {:.6}, exact round-trip = {worst_round_trip:.3e}",
            fidelities[0]
        ),
        elapsed,
    }
}

fn criterion_6(c: &Collected) -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();

    let basis = PauliBasis::new();
    for i in 0..4 {
        let sq = basis.sigma[i].matmul(&basis.sigma[i]).unwrap();
        if sq.max_abs_diff(&sigma0()).unwrap() > DENSITY_TOL {
            failures.push(format!("sigma{i}^2 != I"));
        }
        if !basis.sigma[i].is_hermitian(DENSITY_TOL) || !basis.sigma[i].is_unitary(DENSITY_TOL) {
            failures.push(format!("sigma{i} not Hermitian unitary"));
        }
        for j in 0..4 {
            let t = basis.sigma[i].matmul(&basis.sigma[j]).unwrap().trace();
            let expected = if i == j { 2.0 } else { 0.0 };
            if (t - c64(expected, 0.0)).norm() > DENSITY_TOL {
                failures.push(format!("Tr(sigma{i} sigma{j}) = {t}"));
            }
        }
    }

    let mut worst_repr = 0.0f64;
    for i in 0..=20 {
        for j in 0..41 {
            let q = PureQubit::new(i as f64 * PI / 20.0, j as f64 * TAU / 41.0).unwrap();
            let rho = pure_density(&q);
            let [x, y, z] = q.bloch();
            let expansion = sigma0()
                .add(&sigma1().scale(c64(x, 0.0)))
                .and_then(|m| m.add(&sigma2().scale(c64(y, 0.0))))
                .and_then(|m| m.add(&sigma3().scale(c64(z, 0.0))))
                .unwrap()
                .scale(c64(0.5, 0.0));
            let via_stokes = density_from_stokes(&stokes_of(&rho).unwrap()).unwrap();
            let from_angles = density_from_stokes(&StokesVector::from_bloch([x, y, z]).unwrap()).unwrap();
            for other in [expansion, via_stokes, from_angles] {
                worst_repr = worst_repr.max(other.max_abs_diff(&rho).unwrap());
            }
        }
    }
    if worst_repr > DENSITY_TOL {
        failures.push(format!("representation mismatch {worst_repr:.3e}"));
    }

    let invalid = c.final_states.iter().filter(|f| !f.is_density(DENSITY_TOL)).count();
    if invalid > 0 {
        failures.push(format!("{invalid} invalid final states"));
    }

    Outcome {
        id: 6,
        name: "state-representation suite and density validity",
        passed: failures.is_empty(),
        detail: format!(
            "representation max diff = {worst_repr:.3e}, {} final states checked{}",
            c.final_states.len(),
            if failures.is_empty() {
                String::new()
            } else {
                format!("; failures: {}", failures.join(", "))
            }
        ),
        elapsed: start.elapsed(),
    }
}

#[test]
fn acceptance_criteria() {
    let mut collected = Collected::default();
    let outcomes = vec![
        criterion_1(&mut collected),
        criterion_2(&mut collected),
        criterion_3(&mut collected),
        criterion_4(&mut collected),
        criterion_5(&mut collected),
        criterion_6(&collected),
    ];
    for o in &outcomes {
        println!(
            "[{}] AC{} {}: {} ({:.1} ms)",
            if o.passed { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.detail,
            o.elapsed.as_secs_f64() * 1e3
        );
    }
    let failed: Vec<u8> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
