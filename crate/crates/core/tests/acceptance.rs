//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ccsynth_core::circuit::{embed_matrix, PairClass};
use ccsynth_core::kak::{interaction, kak_decompose};
use ccsynth_core::linalg::{phase_distance, random_unitary, split_determinant, tensor, ComplexMatrix, I, ONE};
use ccsynth_core::search::{optimality_evidence, SearchConfig, NEGATIVE_THRESHOLD, POSITIVE_THRESHOLD};
use ccsynth_core::structure::product_state_in_span;
use ccsynth_core::synthesis::{
    classify_ccu, lower_bound, synth_ccu, synth_ccu_five, synth_ccu_four, synth_fredkin,
};
use ccsynth_core::gates;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

/// Taylor exponential with scaling and squaring; oracle for interaction values.
fn expm(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let squarings = (a.frobenius_norm() / 0.5).log2().ceil().max(0.0) as u32;
    let scaled = a.scale(Complex64::new(0.5f64.powi(squarings as i32), 0.0));
    let mut term = ComplexMatrix::identity(n);
    let mut sum = ComplexMatrix::identity(n);
    for j in 1..30 {
        term = (&term * &scaled).scale(Complex64::new(1.0 / j as f64, 0.0));
        sum = sum.add(&term);
    }
    (0..squarings).fold(sum, |acc, _| &acc * &acc)
}

fn lower_bound_table() -> Outcome {
    let got: Vec<u128> = (2..=5).map(|n| lower_bound(n).unwrap()).collect();
    check(got == [1, 6, 27, 112], format!("n=2..5 -> {got:?}"))
}

fn fredkin_construction() -> Outcome {
    let c = synth_fredkin();
    let d = phase_distance(&c.unitary(), &gates::fredkin()).unwrap();
    check(c.len() == 5 && d < 1e-9, format!("{} gates, distance {d:.2e}", c.len()))
}

fn ccu_five() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(301);
    let mut us = vec![gates::x(), gates::z(), gates::h()];
    us.extend((0..20).map(|_| random_unitary(2, &mut rng)));
    let mut worst = 0.0f64;
    let mut counts_ok = true;
    for u in &us {
        let c = synth_ccu_five(u).unwrap();
        worst = worst.max(phase_distance(&c.unitary(), &gates::ccu(u)).unwrap());
        counts_ok &= c.merge_adjacent().len() == 5;
    }
    check(worst < 1e-9 && counts_ok, format!("{} unitaries, worst distance {worst:.2e}, all 5 gates: {counts_ok}", us.len()))
}

fn ccu_four() -> Outcome {
    let mut worst = 0.0f64;
    let mut counts_ok = true;
    for j in 0..16 {
        let theta = 2.0 * PI * (j as f64 + 0.5) / 16.0;
        let c = synth_ccu_four(theta);
        worst = worst.max(phase_distance(&c.unitary(), &gates::ccu_diag(-theta, theta)).unwrap());
        counts_ok &= c.len() == 4;
    }
    check(worst < 1e-9 && counts_ok, format!("16 angles, worst distance {worst:.2e}, all 4 gates: {counts_ok}"))
}

fn classification() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(302);
    let mut worst = 0.0f64;
    let mut ok = true;
    let mut fours = 0;
    for k in 0..500 {
        let mut u = random_unitary(2, &mut rng);
        if k % 2 == 1 {
            u = split_determinant(&u).0;
        }
        let class = classify_ccu(&u).unwrap();
        ok &= [0, 1, 4, 5].contains(&class.count);
        let distinct = (Complex64::from_polar(1.0, class.theta1) - Complex64::from_polar(1.0, class.theta2)).norm() >= 1e-9;
        let unit_det = (u.determinant() - ONE).norm() < 1e-9;
        ok &= (class.count == 4) == (unit_det && distinct);
        fours += usize::from(class.count == 4);
        let c = synth_ccu(&u).unwrap();
        ok &= c.len() == class.count;
        worst = worst.max(phase_distance(&c.unitary(), &gates::ccu(&u)).unwrap());
    }
    check(ok && worst < 1e-9, format!("500 unitaries ({fours} with unit determinant), worst distance {worst:.2e}"))
}

fn kak_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let u = random_unitary(4, &mut rng);
        let k = kak_decompose(&u).unwrap();
        worst = worst.max(phase_distance(&k.reconstruct(), &u).unwrap());
    }
    // Oracle: exponentials of the interaction Hamiltonian reproduce CNOT and SWAP classes.
    let xx = tensor(&gates::x(), &gates::x());
    let yy = tensor(&gates::y(), &gates::y());
    let zz = tensor(&gates::z(), &gates::z());
    let swap_oracle = expm(&xx.add(&yy).add(&zz).scale(I * FRAC_PI_4));
    let oracle_ok = phase_distance(&swap_oracle, &gates::swap()).unwrap() < 1e-12
        && interaction([FRAC_PI_4, 0.0, 0.0]).max_abs_diff(&expm(&xx.scale(I * FRAC_PI_4))) < 1e-12;
    let cnot = kak_decompose(&gates::cnot()).unwrap().alpha;
    let swap = kak_decompose(&gates::swap()).unwrap().alpha;
    let cnot_ok = (cnot[0] - FRAC_PI_4).abs() < 1e-8 && cnot[1].abs() < 1e-8 && cnot[2].abs() < 1e-8;
    let swap_ok = swap.iter().all(|a| (a - FRAC_PI_4).abs() < 1e-8);
    check(
        worst < 1e-9 && oracle_ok && cnot_ok && swap_ok,
        format!("1000 unitaries, worst distance {worst:.2e}; CNOT {cnot:?}; SWAP {swap:?}; oracle {oracle_ok}"),
    )
}

fn product_states() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(304);
    let mut worst_span = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut worst_schmidt = 0.0f64;
    for _ in 0..1000 {
        let u = random_unitary(4, &mut rng);
        let p1: Vec<Complex64> = (0..4).map(|r| u.get(r, 0)).collect();
        let p2: Vec<Complex64> = (0..4).map(|r| u.get(r, 1)).collect();
        let w = product_state_in_span(&p1, &p2).unwrap();
        let (a, b) = w.coeffs;
        for k in 0..4 {
            worst_span = worst_span.max((a * p1[k] + b * p2[k] - w.state[k]).norm());
        }
        let n: f64 = w.state.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        worst_norm = worst_norm.max((n - 1.0).abs());
        let m = nalgebra::Matrix2::new(w.state[0], w.state[1], w.state[2], w.state[3]);
        let sv = m.singular_values();
        worst_schmidt = worst_schmidt.max(sv[0].min(sv[1]));
    }
    check(
        worst_span < 1e-9 && worst_norm < 1e-9 && worst_schmidt < 1e-9,
        format!("1000 spans: span error {worst_span:.2e}, norm error {worst_norm:.2e}, Schmidt residual {worst_schmidt:.2e}"),
    )
}

fn evidence() -> Outcome {
    let cfg = SearchConfig {
        restarts: 20,
        seed: 7,
        ..Default::default()
    };
    let v = gates::ccu_diag(-FRAC_PI_2, FRAC_PI_2);
    let runs = [
        ("fredkin", gates::fredkin(), 5, synth_fredkin()),
        ("toffoli", gates::toffoli(), 5, synth_ccu(&gates::x()).unwrap()),
        ("V(-pi/2,pi/2)", v, 4, synth_ccu_four(FRAC_PI_2)),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, target, k_max, witness) in runs {
        let report = optimality_evidence(&target, name, k_max, &cfg, &[witness]).unwrap();
        let last = report.floors[k_max - 1];
        let below = &report.floors[..k_max - 1];
        // The four-gate family is only required to fit at k = 4.
        let shape = if name == "V(-pi/2,pi/2)" {
            last < POSITIVE_THRESHOLD
        } else {
            below.iter().all(|&f| f > NEGATIVE_THRESHOLD) && last < POSITIVE_THRESHOLD
        };
        let labelled = report.verdict.contains("empirical") && report.to_json().contains("empirical");
        ok &= shape && labelled;
        let floors: Vec<String> = report.floors.iter().map(|f| format!("{f:.3e}")).collect();
        parts.push(format!("{name}: [{}]", floors.join(", ")));
    }
    check(ok, format!("floors {}", parts.join("; ")))
}

fn symmetries() -> Outcome {
    let f = gates::fredkin();
    let transpose_exact = f == f.transpose();
    let s_bc = embed_matrix(PairClass::BC, &gates::swap());
    let s_ab = embed_matrix(PairClass::AB, &gates::swap());
    let fredkin_swap = (&(&s_bc * &f) * &s_bc).max_abs_diff(&f);
    let grid = [-2.9, -1.0, 0.0, 0.7, 2.2];
    let mut v_swap = 0.0f64;
    let mut reduction = 0.0f64;
    for &t1 in &grid {
        for &t2 in &grid {
            let v = gates::ccu_diag(t1, t2);
            v_swap = v_swap.max((&(&s_ab * &v) * &s_ab).max_abs_diff(&v));
            let lhs = gates::ccu_diag(0.0, t2 - t1);
            let rhs = &v * &embed_matrix(PairClass::AB, &gates::w(-t1));
            reduction = reduction.max(lhs.max_abs_diff(&rhs));
        }
    }
    check(
        transpose_exact && fredkin_swap < 1e-12 && v_swap < 1e-12 && reduction < 1e-10,
        format!("F=F^T {transpose_exact}; S_BC F S_BC {fredkin_swap:.1e}; S_AB V S_AB {v_swap:.1e}; reduction {reduction:.1e}"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 lower-bound table", lower_bound_table, Duration::from_millis(100)),
        ("2 controlled-swap construction", fredkin_construction, Duration::from_millis(1)),
        ("3 five-gate doubly controlled u", ccu_five, Duration::from_millis(10)),
        ("4 four-gate doubly controlled u", ccu_four, Duration::from_millis(10)),
        ("5 classification totality", classification, Duration::from_secs(1)),
        ("6 canonical decomposition", kak_suite, Duration::from_secs(2)),
        ("7 product states in 2-d spans", product_states, Duration::from_secs(1)),
        ("8 optimality evidence", evidence, Duration::from_secs(600)),
        ("9 symmetries and reduction identity", symmetries, Duration::from_secs(1)),
    ];
    let mut failures = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= budget;
        let ok = outcome.ok && in_time;
        failures += usize::from(!ok);
        println!(
            "{} criterion {name}: {} [{:.3?} of {:?}{}]",
            if ok { "PASS" } else { "FAIL" },
            outcome.detail,
            elapsed,
            budget,
            if in_time { "" } else { ", over budget" }
        );
    }
    if failures == 0 {
        println!("acceptance: all 9 criteria passed");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion/criteria failed");
        ExitCode::FAILURE
    }
}
