//! Exact rational oracles for the combinatorial facts behind the algorithms.
//!
//! cargo run --example exact_oracles

use num_bigint::BigInt;
use sfipp::oracle::{self, Rational};
use sfipp::StageTypeMap;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn main() -> sfipp::Result<()> {
    println!("expected wasted picks before the first success, k = 6:");
    for z in 0..6 {
        let wasted = oracle::expected_wasted_queries(6, z)?;
        let queries = oracle::deterministic_expected_queries_bruteforce(6, z)?;
        println!("  z={z}: wasted {wasted}, total queries {queries}");
    }
    println!(
        "probability a given zero precedes both ones (k=4, z=2): {}",
        oracle::zero_before_ones_probability_bruteforce(4, 2)?
    );

    let (m, k, z) = (4, 5, 9);
    let (best, shape) = oracle::hardest_distribution_bruteforce(m, k, z)?;
    println!(
        "hardest placement of {z} zeros over {m} stages of {k}: {shape:?} worth {best}, closed form {}",
        oracle::hardest_distribution_value(m, k, z)?
    );

    let a = vec![q(9, 10), q(4, 5), q(7, 10), q(1, 1)];
    let b = vec![q(1, 2), q(4, 5), q(3, 5), q(9, 10)];
    let (gap, sum) = oracle::prod_to_sum_gap(&a, &b)?;
    let types = StageTypeMap::new(vec![0, 0, 1, 1])?;
    let (_, grouped) = oracle::typed_prod_to_sum_gap(&a, &b, &types)?;
    println!("product gap {gap} <= grouped {grouped} <= sum {sum}");

    let pow5 = |x: f64| x.powi(5);
    let collapsed = oracle::ucb_bound_estimate(&[pow5(0.9), pow5(0.8)], 10)?
        + oracle::ucb_bound_estimate(&[pow5(0.7), pow5(0.8)], 10)?;
    let fine =
        oracle::ucb_bound_estimate(&[0.9, 0.8], 50)? + oracle::ucb_bound_estimate(&[0.7, 0.8], 50)?;
    println!("UCB bound terms, 5+5 stages, T=10: collapsed {collapsed:.1}, fine-grained {fine:.1}");
    Ok(())
}
