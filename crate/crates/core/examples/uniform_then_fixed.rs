//! Learning a binary instance with UniformThenFixed.
//!
//! Regret stops growing once every stage has found a succeeding action, and
//! the total stays near half the number of zeros.
//!
//! cargo run --example uniform_then_fixed

use sfipp::planner::Knowledge;
use sfipp::{gen_deterministic, run_planner, SeededRng, UniformThenFixed};

fn main() -> sfipp::Result<()> {
    let (m, k) = (8, 6);
    let mut gen_rng = SeededRng::new(5);
    let p = gen_deterministic(m, k, 0.3, &mut gen_rng)?;
    println!("instance with {} zeros:\n{p}", p.zero_count());

    let mut utf = UniformThenFixed::new(m, k, SeededRng::new(6));
    let cum = run_planner(&p, &mut utf, &mut SeededRng::new(7), 200)?;
    let settled = cum
        .windows(2)
        .position(|w| w[0] == w[1])
        .map_or(cum.len(), |i| i + 1);
    println!(
        "regret {} after {} rounds, flat from round {settled}",
        cum.last().unwrap(),
        cum.len()
    );
    println!("bound z/2 = {}", p.zero_count() as f64 / 2.0);

    for s in 0..m {
        let row: String = (0..k)
            .map(|a| match utf.knowledge(s, a) {
                Knowledge::Unexplored => '.',
                Knowledge::KnownZero => '0',
                Knowledge::KnownOne => '1',
            })
            .collect();
        println!("stage {s}: {row}");
    }
    Ok(())
}
