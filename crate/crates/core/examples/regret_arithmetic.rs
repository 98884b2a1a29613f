//! Success probability, the optimal plan and per-round regret of a fixed plan.
//!
//! cargo run --example regret_arithmetic

use sfipp::{ActionSequence, ProbabilityMatrix};

fn main() -> sfipp::Result<()> {
    let p = ProbabilityMatrix::from_rows(&[
        [0.4, 0.6, 0.5, 0.3],
        [0.3, 0.2, 0.1, 1.0],
        [0.5, 0.7, 0.4, 0.1],
    ])?;
    println!("instance:\n{p}");

    let (best, value) = p.optimal_sequence();
    println!(
        "optimal plan {:?} succeeds with probability {value:.3}",
        best.as_slice()
    );

    for plan in [vec![0, 2, 2], vec![1, 3, 0], vec![1, 3, 1]] {
        let plan = ActionSequence::from(plan);
        println!(
            "plan {:?}: success {:.3}, regret per round {:.3}",
            plan.as_slice(),
            p.success_probability(&plan)?,
            p.per_round_regret(&plan)?
        );
    }

    // Out-of-range actions are rejected rather than clamped.
    let bad = ActionSequence::from(vec![0, 4, 0]);
    println!(
        "plan {:?}: {}",
        bad.as_slice(),
        p.success_probability(&bad).unwrap_err()
    );
    Ok(())
}
