//! Acceptance suite. Each test prints one `PASS`/`FAIL` line to stderr, outside
//! the test harness capture, and fails on `FAIL`.
//!
//! Tests hold a shared lock so that the timed criteria do not compete for cores.

use std::io::Write;
use std::sync::Mutex;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wreathcat_core::fdalg::{
    delta_identity_deviation, harmonic_bound_holds, rat, satisfies_inverse_trace_bound, AlgebraSpec, MatrixBlock,
};
use wreathcat_core::fusionring::{validate_ring, FusionRing, Label};
use wreathcat_core::ncpart::{count_nc, enumerate_nc};
use wreathcat_core::pmap::{gram_rank, verify_calculus_with, CompositionTable, FormMode, VerifyOptions};
use wreathcat_core::wreath::{
    free_product_decomposition, moments, reassembly_holds, verify_semiring_iso, word_dims, wreath_hom_dim,
    wreath_tensor, FormalSum, HomMethod, LabelMap, Word,
};
use wreathcat_core::Rational;

static LOCK: Mutex<()> = Mutex::new(());

fn serial() -> std::sync::MutexGuard<'static, ()> {
    LOCK.lock().unwrap_or_else(|e| e.into_inner())
}

fn report(n: usize, name: &str, ok: bool, elapsed: Duration, detail: &str) {
    let line = format!(
        "criterion {n:>2} {} {name} ({:.1}s) {detail}\n",
        if ok { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64()
    );
    // Written through the raw handle so the line shows without --nocapture.
    let _ = std::io::stderr().write_all(line.as_bytes());
    assert!(ok, "criterion {n} failed: {detail}");
}

fn specs() -> Vec<(&'static str, AlgebraSpec)> {
    vec![
        ("C^4", AlgebraSpec::uniform_commutative(4)),
        ("C^5", AlgebraSpec::uniform_commutative(5)),
        ("M_2", AlgebraSpec::normalized_matrix(2)),
    ]
}

/// `C_n = binom(2n, n) / (n + 1)`.
fn catalan_binomial(n: u64) -> u64 {
    let mut b: u128 = 1;
    for i in 0..n as u128 {
        b = b * (2 * n as u128 - i) / (i + 1);
    }
    (b / (n as u128 + 1)) as u64
}

#[test]
fn c01_partition_calculus_laws() {
    let _g = serial();
    let start = Instant::now();
    let k_max = 8;
    let table = CompositionTable::new(k_max).unwrap();
    let opts = VerifyOptions::new(k_max);
    let mut ok = true;
    let mut details = Vec::new();
    for (name, a) in specs() {
        for mode in [FormMode::DeltaForm, FormMode::OneForm] {
            let r = verify_calculus_with::<f64>(&a, mode, &opts, &table).unwrap();
            ok &= r.passed()
                && r.composition.max_deviation < 1e-9
                && r.tensor.max_deviation <= 1e-12
                && r.adjoint.max_deviation <= 1e-12;
            details.push(format!(
                "{name}/{}: comp {:.1e} tensor {:.1e} adjoint {:.1e}",
                mode.name(),
                r.composition.max_deviation,
                r.tensor.max_deviation,
                r.adjoint.max_deviation
            ));
        }
    }
    let elapsed = start.elapsed();
    let in_time = elapsed < Duration::from_secs(120);
    details.push(format!("{} pairs per spec", table.pair_count()));
    if !in_time {
        details.push("over the 120 s budget".into());
    }
    report(1, "partition calculus laws", ok && in_time, elapsed, &details.join("; "));
}

#[test]
fn c02_linear_independence() {
    let _g = serial();
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for n in [4usize, 5] {
        let a = AlgebraSpec::uniform_commutative(n);
        for (k, l) in [(0, 3), (0, 4), (2, 1), (2, 2), (1, 3)] {
            let g = gram_rank(&a, k, l).unwrap();
            let expected = catalan_binomial((k + l) as u64) as usize;
            if g.rank != expected || g.partitions != expected {
                ok = false;
                details.push(format!("C^{n} ({k},{l}): rank {} of {expected}", g.rank));
            }
        }
    }
    let g = gram_rank(&AlgebraSpec::uniform_commutative(2), 2, 2).unwrap();
    ok &= g.rank < 14 && g.warning.is_some();
    details.push(format!("C^2 (2,2): rank {} < 14", g.rank));
    let elapsed = start.elapsed();
    ok &= elapsed < Duration::from_secs(60);
    report(2, "linear independence", ok, elapsed, &details.join("; "));
}

#[test]
fn c03_catalan_moments() {
    let _g = serial();
    let start = Instant::now();
    let mut ok = true;
    for k in 0..=12usize {
        let m = moments(k).unwrap();
        ok &= m == count_nc(0, k, 16).unwrap() && m == catalan_binomial(k as u64);
    }
    let (m4, m8) = (moments(4).unwrap(), moments(8).unwrap());
    ok &= m4 == 14 && m8 == 1430 && enumerate_nc(0, 8).unwrap().len() == 1430;
    report(3, "Catalan moments", ok, start.elapsed(), &format!("moments(4) = {m4}, moments(8) = {m8}"));
}

#[test]
fn c04_oracle_equivalence() {
    let _g = serial();
    let start = Instant::now();
    let a = AlgebraSpec::uniform_commutative(4);
    let rings = [
        (FusionRing::trivial(), 1u32),
        (FusionRing::cyclic_dual(2).unwrap(), 2),
        (FusionRing::cyclic_dual(3).unwrap(), 3),
        (FusionRing::su2(), 3),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(20261016);
    let (mut checked, mut divergences, mut nonzero) = (0, 0, 0);
    let mut first = String::new();
    for _ in 0..240 {
        let (ring, n) = &rings[rng.gen_range(0..rings.len())];
        let total = rng.gen_range(0..=5usize);
        let k = rng.gen_range(0..=total);
        let mut word = |len: usize| -> Vec<Label> { (0..len).map(|_| Label(rng.gen_range(0..*n))).collect() };
        let (up, low) = (word(k), word(total - k));
        match wreath_hom_dim(ring, &a, &up, &low, HomMethod::Both) {
            Ok(r) => nonzero += usize::from(r.value > 0),
            Err(e) => {
                divergences += 1;
                if first.is_empty() {
                    first = format!("; first: {e}");
                }
            }
        }
        checked += 1;
    }
    let elapsed = start.elapsed();
    let ok = divergences == 0 && checked >= 200 && elapsed < Duration::from_secs(300);
    report(
        4,
        "oracle equivalence",
        ok,
        elapsed,
        &format!("{checked} pairs, {nonzero} nonzero, {divergences} divergences{first}"),
    );
}

#[test]
fn c05_quantum_permutation_recovery() {
    let _g = serial();
    let start = Instant::now();
    let t = FusionRing::trivial();
    let w = |s: &str| Word::parse(&t, s).unwrap();
    let expected: FormalSum = [(w(""), 1), (w("1"), 1), (w("1,1"), 1)].into_iter().collect();
    let mut ok = wreath_tensor(&t, &w("1"), &w("1")).unwrap() == expected;
    let mut details = Vec::new();
    for n in [4usize, 5] {
        let a = AlgebraSpec::uniform_commutative(n);
        let d1 = word_dims(&t, &a, &w("1")).unwrap().dim;
        let d11 = word_dims(&t, &a, &w("1,1")).unwrap().dim;
        let n = n as f64;
        ok &= d1 == n - 1.0 && d11 == n * n - 3.0 * n + 1.0 && d1.fract() == 0.0 && d11.fract() == 0.0;
        details.push(format!("n={n}: dim r_(1) = {d1}, dim r_(1,1) = {d11}"));
    }
    report(5, "quantum permutation recovery", ok, start.elapsed(), &details.join("; "));
}

#[test]
fn c06_free_product_decomposition() {
    let _g = serial();
    let start = Instant::now();
    let a = AlgebraSpec::new(
        vec![MatrixBlock::scalar(1, rat(1, 4)), MatrixBlock::scalar(1, rat(1, 4)), MatrixBlock::scalar(2, rat(1, 4))],
        false,
    )
    .unwrap();
    let comps = free_product_decomposition(&a).unwrap();
    let deltas: Vec<Rational> = comps.iter().map(|c| c.delta.clone()).collect();
    let mut ok = deltas == vec![rat(4, 1), rat(8, 1)];
    for c in &comps {
        // ψ_i is a state and a δ-form; its own δ is ψ(1_{B_i}) times the grouping value.
        ok &= c.algebra.is_state() && c.algebra.is_delta_form();
        ok &= c.algebra.delta() == Some(&c.form_delta) && c.form_delta == &c.weight * &c.delta;
        ok &= c.restriction().delta() == Some(&c.delta);
    }
    ok &= reassembly_holds(&a, &comps);
    let forms: Vec<String> = comps.iter().map(|c| c.form_delta.to_string()).collect();
    report(
        6,
        "free-product decomposition",
        ok,
        start.elapsed(),
        &format!(
            "δ = ({}), renormalized ψ_i are δ-forms with δ = ({}), reassembly exact",
            deltas.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(", "),
            forms.join(", ")
        ),
    );
}

#[test]
fn c07_multiplication_identity() {
    let _g = serial();
    let start = Instant::now();
    let mut worst = 0.0f64;
    for (_, a) in specs() {
        for (_, dev) in delta_identity_deviation::<f64>(&a, 5).unwrap() {
            worst = worst.max(dev);
        }
    }
    report(7, "m_k m_k^* = δ^{k-1} id", worst < 1e-9, start.elapsed(), &format!("max deviation {worst:.1e}"));
}

#[test]
fn c08_arithmetic_lemma() {
    let _g = serial();
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    let mut tuples = 0;
    while tuples < 10_000 {
        let n = rng.gen_range(2..=6usize);
        let denom: i64 = rng.gen_range(n as i64..=1000);
        let budget = rng.gen_range(n as i64..=denom);
        // n positive numerators summing to at most `budget`.
        let mut nums: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=budget)).collect();
        let total: i64 = nums.iter().sum();
        if total > budget {
            nums = nums.iter().map(|&x| (x * budget / total).max(1)).collect();
        }
        if nums.iter().sum::<i64>() > denom {
            continue;
        }
        let xs: Vec<Rational> = nums.iter().map(|&x| rat(x, denom)).collect();
        ok &= harmonic_bound_holds(&xs) == Some(true);
        tuples += 1;
    }
    let mut specs_checked = 0;
    for _ in 0..500 {
        let blocks: Vec<MatrixBlock> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let size = rng.gen_range(1..=3);
                MatrixBlock::new(size, (0..size).map(|_| rat(rng.gen_range(1..=20), 1)).collect())
            })
            .collect();
        let a = AlgebraSpec::new(blocks, true).unwrap();
        ok &= satisfies_inverse_trace_bound(&a);
        specs_checked += 1;
    }
    report(8, "arithmetic lemma", ok, start.elapsed(), &format!("{tuples} tuples, {specs_checked} normalized specs"));
}

#[test]
fn c09_semiring_transport() {
    let _g = serial();
    let start = Instant::now();
    let z3 = FusionRing::cyclic_dual(3).unwrap();
    let su2 = FusionRing::su2();
    let z4 = FusionRing::cyclic_dual(4).unwrap();
    let r3 = verify_semiring_iso(&z3, &z3, &LabelMap::parse(&z3, &z3, "g:g2,g2:g").unwrap(), 100, 3).unwrap();
    let rs = verify_semiring_iso(&su2, &su2, &LabelMap::Identity, 100, 2).unwrap();
    let r4 = verify_semiring_iso(&z4, &z4, &LabelMap::parse(&z4, &z4, "g:g2,g2:g").unwrap(), 100, 4).unwrap();
    let ok = r3.passed()
        && r3.pairs_checked == 100
        && rs.passed()
        && rs.pairs_checked == 100
        && !r4.precondition_failures.is_empty()
        && r4.pairs_checked == 0;
    let reason = r4.precondition_failures.first().cloned().unwrap_or_default();
    report(9, "semiring transport", ok, start.elapsed(), &format!("Z4 swap rejected: {reason}"));
}

#[test]
fn c10_fusion_ring_hygiene() {
    let _g = serial();
    let start = Instant::now();
    let mut ok = true;
    let mut details = Vec::new();
    for name in ["trivial", "cyclic_dual(2)", "cyclic_dual(3)", "cyclic_dual(4)", "integer_dual", "su2", "so3"] {
        let r = validate_ring(&FusionRing::builtin(name).unwrap(), 500);
        ok &= r.passed() && r.triples_checked <= 500;
        if !r.passed() {
            details.push(format!("{name}: {}", r.violations.join(", ")));
        }
    }
    if details.is_empty() {
        details.push("7 built-in rings".into());
    }
    report(10, "fusion ring hygiene", ok, start.elapsed(), &details.join("; "));
}
