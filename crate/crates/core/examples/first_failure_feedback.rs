//! The environment stops at the first failing stage and reveals only its index.
//!
//! cargo run --example first_failure_feedback

use sfipp::{play_round, ActionSequence, ProbabilityMatrix, RoundOutcome, SeededRng};

fn main() -> sfipp::Result<()> {
    let p = ProbabilityMatrix::from_rows(&[[0.9, 0.2], [0.6, 0.4], [0.8, 0.5]])?;
    let plan = ActionSequence::from(vec![0, 0, 0]);
    let mut rng = SeededRng::new(2024);

    let rounds = 100_000;
    let mut histogram = [0usize; 4];
    for _ in 0..rounds {
        match play_round(&p, &plan, &mut rng)? {
            RoundOutcome::FailedAt(s) => histogram[s] += 1,
            RoundOutcome::Success => histogram[3] += 1,
        }
    }
    println!("{} uniform draws for {rounds} rounds", rng.draws());

    let mut reach = 1.0;
    for (s, &count) in histogram[..3].iter().enumerate() {
        let q = p.get(s, plan.as_slice()[s]);
        println!(
            "failed at stage {s}: observed {:.4}, expected {:.4}",
            count as f64 / rounds as f64,
            reach * (1.0 - q)
        );
        reach *= q;
    }
    println!(
        "full success:      observed {:.4}, expected {reach:.4}",
        histogram[3] as f64 / rounds as f64
    );
    Ok(())
}
