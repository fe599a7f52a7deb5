//! The acceptance criteria, run in order at full size with exact equality.
//! Each prints one pass/fail line; the test fails if any criterion does.

mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use mfpush::suites::{
    appendix_suite, cardy_suite, closed_form_suite, contraction_suite, convolution_suite, knorrer_suite,
    perturbation_suite, residue_suite, SuiteReport,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6d66_7075_7368;

struct Outcome {
    checks: usize,
    failures: Vec<String>,
}

impl From<mfpush::Result<SuiteReport>> for Outcome {
    fn from(r: mfpush::Result<SuiteReport>) -> Outcome {
        match r {
            Ok(rep) if rep.checks == 0 => Outcome { checks: 0, failures: vec!["no checks ran".into()] },
            Ok(rep) => Outcome { checks: rep.checks, failures: rep.failures },
            Err(e) => Outcome { checks: 0, failures: vec![e.to_string()] },
        }
    }
}

/// Run one criterion under its time limit and print its line.
fn criterion(n: u32, name: &str, limit: Duration, f: impl FnOnce() -> Outcome) -> Option<String> {
    let start = Instant::now();
    let mut o = f();
    let took = start.elapsed();
    if took > limit {
        o.failures.push(format!("took {:.1}s, limit {}s", took.as_secs_f64(), limit.as_secs()));
    }
    let status = if o.failures.is_empty() { "PASS" } else { "FAIL" };
    let line = format!(
        "criterion {n} [{status}] {name}: {} checks, {} failed, {:.2}s",
        o.checks,
        o.failures.len(),
        took.as_secs_f64()
    );
    // bypass the test harness's capture so the summary always shows
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{line}");
    for f in o.failures.iter().take(10) {
        let _ = writeln!(out, "    {f}");
    }
    (!o.failures.is_empty()).then_some(line)
}

#[test]
fn acceptance() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let secs = Duration::from_secs;
    let failed: Vec<String> = [
        criterion(1, "Knörrer idempotent, splitting and round trip (d ≤ 5)", secs(5), || knorrer_suite(5).into()),
        criterion(2, "closed form = perturbation route", secs(30), || closed_form_suite(5).into()),
        criterion(3, "de Rham contraction identities", secs(10), || contraction_suite(6).into()),
        criterion(4, "residues: trace = transformation law, 100 queries per frame", secs(60), || {
            residue_suite(&mut rng, 100).into()
        }),
        criterion(5, "Cardy / Hirzebruch–Riemann–Roch", secs(120), || cardy_suite(6).into()),
        criterion(6, "homotopy-product supertraces, 20 families per potential", secs(60), || {
            appendix_suite(&mut rng, 20).into()
        }),
        criterion(7, "convolution with V = y²", secs(120), || convolution_suite().into()),
        criterion(8, "perturbation lemma, 50 data per type", secs(30), || perturbation_suite(&mut rng, 50).into()),
        criterion(9, "CLI goldens byte-identical across runs", secs(600), || {
            let failures: Vec<String> = common::CASES
                .iter()
                .filter_map(|(name, args, code)| common::check_case(name, args, *code).err())
                .collect();
            Outcome { checks: common::CASES.len(), failures }
        }),
    ]
    .into_iter()
    .flatten()
    .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
