//! Acceptance suite. Runs every exit criterion at full scale and prints one
//! PASS/FAIL line per criterion; exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};

use sfipp::experiment::{CellResult, ExperimentOutput, InstanceSource};
use sfipp::oracle::{self, Rational};
use sfipp::report::write_csv;
use sfipp::{
    run_experiment, run_planner, Algorithm, BetaParams, ExperimentConfig, Preset,
    ProbabilityMatrix, SeededRng, StageTypeMap, UniformThenFixed,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn r(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Sample standard deviation.
fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

fn run(config: &ExperimentConfig) -> ExperimentOutput {
    run_experiment(config).expect("experiment runs")
}

fn csv_bytes(output: &ExperimentOutput) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(output, &mut buf).expect("csv writes");
    buf
}

fn mean_final(cell: &CellResult, alg: &str) -> f64 {
    mean(&cell.final_regrets(alg))
}

/// Mean per-round regret over rounds `from..=to` (1-based).
fn window_rate(cell: &CellResult, alg: &str, from: usize, to: usize) -> f64 {
    let rates: Vec<f64> = cell
        .traces_for(alg)
        .map(|t| (t.at_round(to) - t.at_round(from - 1)) / (to - from + 1) as f64)
        .collect();
    mean(&rates)
}

fn utf_single_stage_mc() -> Outcome {
    let start = Instant::now();
    for k in 1..=12 {
        for z in 0..k {
            let exact = oracle::expected_wasted_queries(k, z).unwrap();
            let brute =
                oracle::deterministic_expected_queries_enumerated(k, z).unwrap() - Rational::one();
            if exact != r(z as i64, (k + 1 - z) as i64) || brute != exact {
                return outcome(false, format!("exact mismatch at k={k}, z={z}"));
            }
        }
    }
    let trials = 100_000;
    let mut worst = 0.0f64;
    for k in [2usize, 5, 12] {
        for z in 0..k {
            let row: Vec<f64> = (0..k).map(|i| if i < z { 0.0 } else { 1.0 }).collect();
            let p = ProbabilityMatrix::deterministic_from_rows(&[row]).unwrap();
            let wasted: Vec<f64> = (0..trials)
                .map(|i| {
                    let rng = SeededRng::derive(
                        7,
                        &["utf-mc", &k.to_string(), &z.to_string(), &i.to_string()],
                    );
                    let mut utf = UniformThenFixed::new(1, k, rng);
                    let mut env = SeededRng::new(0);
                    *run_planner(&p, &mut utf, &mut env, k)
                        .unwrap()
                        .last()
                        .unwrap()
                })
                .collect();
            let target = z as f64 / (k + 1 - z) as f64;
            let se = sd(&wasted) / (trials as f64).sqrt();
            let dev = (mean(&wasted) - target).abs();
            if se == 0.0 {
                if dev != 0.0 {
                    return outcome(
                        false,
                        format!("k={k} z={z}: deterministic mean off by {dev}"),
                    );
                }
                continue;
            }
            worst = worst.max(dev / se);
        }
    }
    let elapsed = start.elapsed();
    outcome(
        worst <= 3.0 && elapsed < Duration::from_secs(5),
        format!(
            "exact for k<=12; Monte-Carlo worst deviation {worst:.2} sigma over 1e5 trials; {:.2}s",
            elapsed.as_secs_f64()
        ),
    )
}

fn utf_bound_and_plateau() -> Outcome {
    let start = Instant::now();
    let config = ExperimentConfig {
        source: InstanceSource::Deterministic(vec![0.1, 0.5, 0.9]),
        algorithms: vec![Algorithm::Utf],
        ..ExperimentConfig::preset(Preset::Det)
    };
    let out = run(&config);
    let mut details = Vec::new();
    let mut pass = true;
    for cell in &out.cells {
        let excess: Vec<f64> = cell
            .traces_for("UTF")
            .map(|t| t.final_regret() - cell.instances[t.instance_id].zero_count() as f64 / 2.0)
            .collect();
        let tol = 3.0 * sd(&excess) / (excess.len() as f64).sqrt();
        let ok = mean(&excess) <= tol;
        let plateau = cell.traces_for("UTF").all(|t| {
            let inc: Vec<f64> = t.increments().collect();
            match inc.iter().position(|&d| d == 0.0) {
                Some(first) => inc[first..].iter().all(|&d| d == 0.0),
                None => false,
            }
        });
        pass &= ok && plateau;
        details.push(format!(
            "{}: mean(R - z/2) = {:.2} (tol {:.2}), plateau {}",
            cell.cell.name,
            mean(&excess),
            tol,
            if plateau { "ok" } else { "broken" }
        ));
    }
    let elapsed = start.elapsed();
    pass &= elapsed < Duration::from_secs(60);
    outcome(
        pass,
        format!("{}; {:.1}s", details.join("; "), elapsed.as_secs_f64()),
    )
}

fn expected_query_sum() -> Outcome {
    for k in 1..=12 {
        for z in 0..k {
            let sum = oracle::deterministic_expected_queries_bruteforce(k, z).unwrap();
            if sum != r((k + 1) as i64, (k + 1 - z) as i64) {
                return outcome(false, format!("k={k}, z={z}: got {sum}"));
            }
        }
    }
    let count = oracle::zero_before_ones_probability_bruteforce(4, 2).unwrap();
    outcome(
        count == r(8, 24),
        format!("(k+1)/(k+1-z) for all k<=12; k=4, z=2 zero-first probability {count}"),
    )
}

/// The stated closed form `a/2 + b/(k+1-b)` with `z = a(k-1) + b`.
fn hardest_distribution_literal() -> Outcome {
    let mut checked = 0;
    let mut mismatches = Vec::new();
    let mut corrected_ok = true;
    let mut shape_ok = true;
    for m in 1..=5usize {
        for k in 2..=6usize {
            for z in 0..=m * (k - 1) {
                let (a, b) = oracle::split_zeros(k, z);
                let stated = r(a as i64, 2) + r(b as i64, (k + 1 - b) as i64);
                let (value, argmax) = oracle::hardest_distribution_bruteforce(m, k, z).unwrap();
                checked += 1;
                if value != stated {
                    mismatches.push(format!("m={m} k={k} z={z}: max {value}, stated {stated}"));
                }
                corrected_ok &= value == oracle::hardest_distribution_value(m, k, z).unwrap();
                let mut sorted = argmax.clone();
                sorted.sort_unstable_by(|x, y| y.cmp(x));
                shape_ok &= sorted == oracle::concentrated_composition(m, k, z).unwrap();
            }
        }
    }
    let first = mismatches.first().cloned().unwrap_or_default();
    outcome(
        mismatches.is_empty() && shape_ok,
        format!(
            "{}/{checked} cases disagree with a/2 + b/(k+1-b) (first: {first}); \
             a(k-1)/2 + b/(k+1-b) matches all: {corrected_ok}; concentrated argmax: {shape_ok}",
            mismatches.len()
        ),
    )
}

fn random_pair(rng: &mut ChaCha8Rng, m: usize) -> (Vec<Rational>, Vec<Rational>) {
    (0..m)
        .map(|_| {
            let x = rng.gen_range(0..=1000i64);
            let y = rng.gen_range(0..=x);
            (r(x, 1000), r(y, 1000))
        })
        .unzip()
}

fn random_types(rng: &mut ChaCha8Rng, m: usize) -> StageTypeMap {
    let l = rng.gen_range(1..=m);
    let mut assignments: Vec<usize> = (0..m)
        .map(|s| if s < l { s } else { rng.gen_range(0..l) })
        .collect();
    for i in (1..m).rev() {
        assignments.swap(i, rng.gen_range(0..=i));
    }
    StageTypeMap::new(assignments).unwrap()
}

fn product_sum_gaps() -> Outcome {
    let n = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    let mut plain_fail = 0;
    let mut typed_fail = 0;
    for _ in 0..n {
        let m = rng.gen_range(1..=10);
        let (a, b) = random_pair(&mut rng, m);
        let (gap, sum) = oracle::prod_to_sum_gap(&a, &b).unwrap();
        if gap.is_negative() || gap > sum {
            plain_fail += 1;
        }
    }
    for _ in 0..n {
        let m = rng.gen_range(1..=10);
        let (a, b) = random_pair(&mut rng, m);
        let types = random_types(&mut rng, m);
        let (gap, grouped) = oracle::typed_prod_to_sum_gap(&a, &b, &types).unwrap();
        let (_, sum) = oracle::prod_to_sum_gap(&a, &b).unwrap();
        if gap.is_negative() || gap > grouped || grouped > sum {
            typed_fail += 1;
        }
    }
    let m = 100;
    let ones = vec![Rational::one(); m];
    let eps = vec![r(9999, 10_000); m];
    let (gap, _) = oracle::prod_to_sum_gap(&ones, &eps).unwrap();
    let half = r(m as i64, 10_000) / BigInt::from(2);
    let tight = gap >= half && !gap.is_zero();
    outcome(
        plain_fail == 0 && typed_fail == 0 && tight,
        format!(
            "{plain_fail} plain and {typed_fail} typed violations in 1e5 draws each; \
             tightness gap {:.6} >= {:.6}",
            oracle::to_f64(&gap),
            oracle::to_f64(&half)
        ),
    )
}

fn example_bound_values() -> Outcome {
    let pow5 = |x: f64| x.powi(5);
    let bound = |probs: &[f64], t: u64| oracle::ucb_bound_estimate(probs, t).unwrap();
    let values = [
        bound(&[pow5(0.9), pow5(0.8)], 10) + bound(&[pow5(0.7), pow5(0.8)], 10),
        bound(&[0.9, 0.8], 50) + bound(&[0.7, 0.8], 50),
        bound(&[pow5(0.9), pow5(0.1)], 10) + bound(&[pow5(0.2), pow5(0.3)], 10),
        bound(&[0.9, 0.1], 50) + bound(&[0.2, 0.3], 50),
    ];
    let targets = [23.0, 78.0, 1095.0, 44.0];
    let pass = values
        .iter()
        .zip(targets)
        .all(|(v, t)| (v.round() - t).abs() <= 1.0);
    outcome(pass, format!("{values:.2?} vs {targets:?}"))
}

fn det_ordering(out: &ExperimentOutput, elapsed: Duration) -> Outcome {
    let mut pass = elapsed < Duration::from_secs(600);
    let mut parts = Vec::new();
    for cell in &out.cells {
        let (utf, sb) = (mean_final(cell, "UTF"), mean_final(cell, "SB"));
        pass &= utf < sb;
        parts.push(format!("{} UTF {utf:.1} < SB {sb:.1}", cell.cell.name));
    }
    outcome(
        pass,
        format!("{}; {:.1}s", parts.join("; "), elapsed.as_secs_f64()),
    )
}

/// One-sided paired t-test that `worse` has larger final regret than `better`.
fn paired_better(cell: &CellResult, better: &str, worse: &str) -> (bool, f64) {
    let diffs: Vec<f64> = cell
        .final_regrets(worse)
        .iter()
        .zip(cell.final_regrets(better))
        .map(|(w, b)| w - b)
        .collect();
    let n = diffs.len() as f64;
    let t = mean(&diffs) / (sd(&diffs) / n.sqrt());
    let crit = StudentsT::new(0.0, 1.0, n - 1.0).unwrap().inverse_cdf(0.95);
    (t > crit, mean(&diffs))
}

fn collapse_gain(gain: &ExperimentOutput, valid_hi: &ExperimentOutput) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut cells: Vec<&CellResult> = gain.cells.iter().collect();
    cells.push(&valid_hi.cells[0]);
    for cell in cells {
        for alg in ["SCB_1", "SCFGB_1"] {
            let (ok, gap) = paired_better(cell, alg, "SB");
            pass &= ok;
            parts.push(format!(
                "{} SB-{alg} {gap:.1}{}",
                cell.cell.name,
                if ok { "" } else { " (n.s.)" }
            ));
        }
    }
    for alg in ["SCB_1", "SCFGB_1"] {
        let gaps: Vec<f64> = gain
            .cells
            .iter()
            .map(|c| mean_final(c, "SB") - mean_final(c, alg))
            .collect();
        let grows = gaps.windows(2).all(|w| w[0] < w[1]);
        pass &= grows;
        parts.push(format!(
            "{alg} gap by m {gaps:.1?}{}",
            if grows { "" } else { " not increasing" }
        ));
    }
    outcome(pass, parts.join("; "))
}

fn invalid_collapse(out: &ExperimentOutput) -> (bool, String) {
    let cell = &out.cells[0];
    let rate = |alg: &str| window_rate(cell, alg, 9_001, 10_000);
    let mut pass = true;
    let mut parts = Vec::new();
    for (one, two) in [("SCB_1", "SCB_2"), ("SCFGB_1", "SCFGB_2")] {
        let ratio = rate(one) / rate(two);
        pass &= ratio >= 5.0;
        parts.push(format!(
            "{one}/{two} late rate {:.4}/{:.4} = {ratio:.1}x",
            rate(one),
            rate(two)
        ));
    }
    let sb = mean_final(cell, "SB");
    for alg in ["SCB_2", "SCFGB_2"] {
        let v = mean_final(cell, alg);
        pass &= v < sb;
        parts.push(format!("{alg} {v:.1} vs SB {sb:.1}"));
    }
    (pass, format!("{}: {}", cell.cell.name, parts.join(", ")))
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut record = |name: &'static str, o: Outcome| {
        println!(
            "{} {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
        results.push((name, o));
    };

    record("single-stage wasted queries", utf_single_stage_mc());
    record("UTF bound z/2 and plateau", utf_bound_and_plateau());
    record("deterministic query count", expected_query_sum());
    record("hardest zero distribution", hardest_distribution_literal());
    record("product-to-sum gaps", product_sum_gaps());
    record("UCB bound comparison values", example_bound_values());

    let presets = [
        Preset::Det,
        Preset::CollapseGain,
        Preset::ValidCollapseHi,
        Preset::ValidCollapseUni,
        Preset::InvalidCollapseHi,
        Preset::InvalidCollapseUni,
    ];
    let mut outputs = Vec::new();
    let mut timings = Vec::new();
    for preset in presets {
        let start = Instant::now();
        outputs.push(run(&ExperimentConfig::preset(preset)));
        timings.push(start.elapsed());
    }
    record(
        "det ordering UTF < SB",
        det_ordering(&outputs[0], timings[0]),
    );
    record(
        "collapsed bandits beat SB",
        collapse_gain(&outputs[1], &outputs[2]),
    );
    let (hi_ok, hi) = invalid_collapse(&outputs[4]);
    let (uni_ok, uni) = invalid_collapse(&outputs[5]);
    record(
        "wrong collapse diverges",
        outcome(hi_ok && uni_ok, format!("{hi}; {uni}")),
    );

    let custom = ExperimentConfig {
        source: InstanceSource::Beta(BetaParams::new(2.0, 2.0).unwrap()),
        stages: vec![6],
        algorithms: Algorithm::ALL[1..].to_vec(),
        ..ExperimentConfig::preset(Preset::Custom)
    };
    let mut identical = Vec::new();
    for (preset, first) in presets.iter().zip(&outputs) {
        let again = run(&ExperimentConfig::preset(*preset));
        identical.push((preset.name(), csv_bytes(first) == csv_bytes(&again)));
    }
    identical.push((
        "custom",
        csv_bytes(&run(&custom)) == csv_bytes(&run(&custom)),
    ));
    let differing: Vec<&str> = identical
        .iter()
        .filter(|(_, same)| !same)
        .map(|(n, _)| *n)
        .collect();
    record(
        "byte-identical reruns",
        outcome(
            differing.is_empty(),
            format!(
                "{} presets rerun, differing: {differing:?}",
                identical.len()
            ),
        ),
    );

    let failed = results.iter().filter(|(_, o)| !o.pass).count();
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
