//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N [PASS|FAIL] ...` line; run with `--nocapture` to see them.

mod common;

use std::time::{Duration, Instant};

use num_bigint::{BigInt, ToBigInt};
use num_traits::{ToPrimitive, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use circnorm::circulant::CirculantMatrix;
use circnorm::sequences::{self, SequenceId};
use circnorm::spectral;

use common::{big_terms, rel_err};

fn report(id: u32, title: &str, outcome: Result<String, String>) {
    match outcome {
        Ok(detail) => println!("criterion {id} [PASS] {title}: {detail}"),
        Err(why) => {
            println!("criterion {id} [FAIL] {title}: {why}");
            panic!("criterion {id} failed: {why}");
        }
    }
}

fn within(limit: Duration, elapsed: Duration) -> Result<(), String> {
    if elapsed <= limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn criterion_1() -> Result<String, String> {
    const REL_TOL: f64 = 1e-8;
    let start = Instant::now();
    let mut dft_checks = 0;
    let mut power_checks = 0;
    for id in SequenceId::BUILTINS {
        let mut last_power_n = 0;
        for n in 1..=64 {
            let c = CirculantMatrix::from_sequence(&id, n).map_err(|e| e.to_string())?;
            let exact = spectral::spectral_norm_sum(&c);
            let exact_f = exact.to_f64().unwrap();
            let bits = c.max_entry_bits();

            if bits <= 53 {
                let dft = spectral::spectral_norm_dft(&c).map_err(|e| format!("{id} n={n}: {e}"))?;
                if rel_err(dft, exact_f) > REL_TOL {
                    return Err(format!("{id} n={n}: dft {dft} vs exact {exact}"));
                }
                dft_checks += 1;
            }
            if bits <= 26 {
                let power = spectral::spectral_norm_power(&c, REL_TOL, spectral::default_max_iter(n))
                    .map_err(|e| format!("{id} n={n}: {e}"))?;
                if rel_err(power.value, exact_f) > REL_TOL {
                    return Err(format!("{id} n={n}: power {} vs exact {exact}", power.value));
                }
                power_checks += 1;
                last_power_n = n;
            }
        }
        let floor = match id {
            SequenceId::Fibonacci | SequenceId::Lucas => 36,
            SequenceId::Pell => 21,
            _ => 64,
        };
        if last_power_n < floor {
            return Err(format!("{id}: power route only covered n ≤ {last_power_n}"));
        }
    }
    within(Duration::from_secs(10), start.elapsed())?;
    Ok(format!(
        "{dft_checks} dft and {power_checks} power checks within 1e-8 in {:?}",
        start.elapsed()
    ))
}

#[test]
fn criterion_1_theorem_cross_check() {
    report(1, "norm = entry sum via dft and power", criterion_1());
}

fn criterion_2() -> Result<String, String> {
    let start = Instant::now();
    let fib = big_terms("fibonacci", 203);
    for n in 1..=200 {
        let direct = sequences::prefix_sum(&SequenceId::Fibonacci, n);
        let identity = &fib[n + 1] - 1;
        if direct != identity {
            return Err(format!("n={n}: {direct} != F_(n+1) - 1 = {identity}"));
        }
        if sequences::closed_form_sum(&SequenceId::Fibonacci, n).unwrap() != direct {
            return Err(format!("n={n}: shipped closed form disagrees"));
        }
    }
    within(Duration::from_secs(1), start.elapsed())?;
    Ok(format!("exact for 1 ≤ n ≤ 200 in {:?}", start.elapsed()))
}

#[test]
fn criterion_2_fibonacci_identity() {
    report(2, "Σ F_i = F_(n+1) - 1", criterion_2());
}

fn criterion_3() -> Result<String, String> {
    let fib = big_terms("fibonacci", 203);
    let luc = big_terms("lucas", 203);
    for n in 1..=200 {
        let direct = sequences::prefix_sum(&SequenceId::Lucas, n);
        let fib_form = &fib[n + 2] + &fib[n] - 1;
        let lucas_form = &luc[n + 1] - 1;
        if direct != fib_form || direct != lucas_form {
            return Err(format!("n={n}: direct {direct}, F-form {fib_form}, L-form {lucas_form}"));
        }
        if sequences::closed_form_sum(&SequenceId::Lucas, n).unwrap() != direct {
            return Err(format!("n={n}: shipped closed form disagrees"));
        }
    }
    Ok("both forms exact for 1 ≤ n ≤ 200".into())
}

#[test]
fn criterion_3_lucas_identity() {
    report(3, "Σ L_i = F_(n+2) + F_n - 1 = L_(n+1) - 1", criterion_3());
}

fn criterion_4() -> Result<String, String> {
    let pell = big_terms("pell", 202);
    for n in 1..=200 {
        let numerator: BigInt = &pell[n] + &pell[n - 1] - 1;
        if !(&numerator % 2u32).is_zero() {
            return Err(format!("n={n}: P_n + P_(n-1) - 1 = {numerator} is odd"));
        }
        let direct = sequences::prefix_sum(&SequenceId::Pell, n);
        if numerator / 2u32 != direct {
            return Err(format!("n={n}: halved value disagrees with {direct}"));
        }
        if sequences::closed_form_sum(&SequenceId::Pell, n).unwrap() != direct {
            return Err(format!("n={n}: shipped closed form disagrees"));
        }
    }
    Ok("even numerator and exact halved sum for 1 ≤ n ≤ 200".into())
}

#[test]
fn criterion_4_pell_identity() {
    report(4, "Σ P_i = (P_n + P_(n-1) - 1) / 2", criterion_4());
}

fn criterion_5() -> Result<String, String> {
    let perrin = big_terms("perrin", 205);
    let mut published_matches = 0;
    let mut corrected_matches = 0;
    let mut direct = BigInt::zero();
    for n in 1..=200 {
        direct += &perrin[n - 1];
        if &perrin[n + 4] - 1 == direct {
            published_matches += 1;
        }
        if &perrin[n + 4] - 2 == direct {
            corrected_matches += 1;
        }
        if sequences::closed_form_sum(&SequenceId::Perrin, n).unwrap() != direct {
            return Err(format!("n={n}: shipped closed form disagrees with {direct}"));
        }
    }
    let audit = sequences::audit_published_identity(&SequenceId::Perrin, 200).unwrap();
    if audit.match_count() != published_matches {
        return Err(format!(
            "library audit reports {} matches, oracle {published_matches}",
            audit.match_count()
        ));
    }
    if published_matches != 0 || corrected_matches != 200 {
        return Err(format!(
            "R_(n+4)-1 matched {published_matches}/200, R_(n+4)-2 matched {corrected_matches}/200"
        ));
    }
    Ok("R_(n+4)-1 matches 0/200, R_(n+4)-2 matches 200/200".into())
}

#[test]
fn criterion_5_perrin_audit() {
    report(5, "Perrin published vs corrected identity", criterion_5());
}

fn criterion_6() -> Result<String, String> {
    let start = Instant::now();
    for id in SequenceId::BUILTINS {
        for n in 1..=32 {
            let c = CirculantMatrix::from_sequence(&id, n).unwrap();
            if !c.all_ones_eigencheck().iter().all(Zero::is_zero) {
                return Err(format!("{id} n={n}: nonzero eigencheck residual"));
            }
            if !c.is_normal() {
                return Err(format!("{id} n={n}: DᵀD != DDᵀ"));
            }
        }
    }
    within(Duration::from_secs(5), start.elapsed())?;
    Ok(format!("128 matrices certified in {:?}", start.elapsed()))
}

#[test]
fn criterion_6_proof_steps() {
    report(6, "all-ones eigenvector and exact normality", criterion_6());
}

fn criterion_7() -> Result<String, String> {
    let mut rng = StdRng::seed_from_u64(0x05ee_dc1c);
    let mut worst_matvec = 0.0f64;
    for case in 0..100 {
        let n = if case == 0 { 256 } else { rng.random_range(1..=256) };
        let row: Vec<u64> = (0..n).map(|_| rng.random_range(0..1u64 << 24)).collect();
        let v: Vec<i64> = (0..n).map(|_| rng.random_range(-(1i64 << 24)..1 << 24)).collect();
        let c = CirculantMatrix::from_u64(&row).unwrap();
        let exact = c
            .matvec_naive(&v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>())
            .unwrap();
        let fast = c.matvec_fft(&v.iter().map(|&x| x as f64).collect::<Vec<_>>()).unwrap();
        let exact_f: Vec<f64> = exact.iter().map(|x| x.to_f64().unwrap()).collect();
        let denom = exact_f.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(1e-12);
        for (f, e) in fast.iter().zip(&exact_f) {
            let err = (f - e).abs() / denom;
            worst_matvec = worst_matvec.max(err);
            if err > 1e-10 {
                return Err(format!("case {case} (n={n}): relative error {err:e}"));
            }
        }
    }

    let mut worst_dc = 0.0f64;
    for case in 0..200 {
        let n = rng.random_range(1..=512);
        let row: Vec<u64> = (0..n).map(|_| rng.random_range(0..1u64 << 40)).collect();
        let c = CirculantMatrix::from_u64(&row).unwrap();
        let sum = c.entry_sum().to_f64().unwrap();
        let lambda0 = c.eigenvalues_dft().unwrap().values[0];
        let err = (lambda0 - sum).norm() / sum.max(1.0);
        worst_dc = worst_dc.max(err);
        if err > 1e-9 {
            return Err(format!("row {case} (n={n}): λ₀ off by {err:e}"));
        }
    }
    Ok(format!(
        "matvec worst {worst_matvec:.2e} (tol 1e-10), λ₀ worst {worst_dc:.2e} (tol 1e-9)"
    ))
}

#[test]
fn criterion_7_numerical_kernels() {
    report(7, "matvec_fft vs matvec_naive, λ₀ vs Σc", criterion_7());
}

fn dft_timing_check(c: &CirculantMatrix) -> Result<String, String> {
    let exact = spectral::spectral_norm_sum(c).to_f64().unwrap_or(f64::INFINITY);
    // Warm-up so planner set-up is not measured as steady-state cost.
    let _ = spectral::spectral_norm_dft(c);
    let start = Instant::now();
    let dft = spectral::spectral_norm_dft(c).map_err(|e| format!("spectral_norm_dft: {e}"))?;
    let elapsed = start.elapsed();
    within(Duration::from_millis(100), elapsed)?;
    let err = rel_err(dft, exact);
    if err > 1e-8 {
        return Err(format!("relative gap {err:e} to the entry sum"));
    }
    Ok(format!("{elapsed:?}, relative gap {err:.2e}"))
}

#[test]
fn criterion_8_desk_scale_performance() {
    let c = CirculantMatrix::from_sequence(&SequenceId::Perrin, 4096).unwrap();
    let outcome = dft_timing_check(&c).map_err(|e| {
        format!(
            "{e}; the largest Perrin entry at n = 4096 has {} bits, above the 53-bit guard",
            c.max_entry_bits()
        )
    });
    report(8, "Perrin n = 4096 via dft under 100 ms", outcome);
}

/// Same size and budget as criterion 8, on a row that stays inside the
/// 53-bit guard. Informational; not a substitute for criterion 8.
#[test]
fn dft_desk_scale_within_guard() {
    let mut rng = StdRng::seed_from_u64(4096);
    let row: Vec<u64> = (0..4096).map(|_| rng.random_range(0..1u64 << 40)).collect();
    let c = CirculantMatrix::from_u64(&row).unwrap();
    let outcome = dft_timing_check(&c).expect("in-guard row of order 4096");
    println!("info [PASS] order-4096 in-guard row via dft: {outcome}");
    assert!(c.entry_sum().to_bigint().is_some());
}
