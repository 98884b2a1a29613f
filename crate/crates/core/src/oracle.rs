//! Exact, brute-force ground truth for the query-count and regret bounds.
//!
//! Everything here works in arbitrary-precision rationals; callers convert
//! to floating point only when comparing against simulations.

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::model::StageTypeMap;

pub type Rational = BigRational;

fn ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rational {
    Rational::new(num.into(), den.into())
}

fn check_zeros(k: usize, z: usize) -> Result<()> {
    if k == 0 || z >= k {
        return Err(Error::InvalidParameter(format!(
            "need 0 <= z <= k - 1, got k={k}, z={z}"
        )));
    }
    Ok(())
}

/// Expected number of failing picks before the first success when picking
/// uniformly without replacement among `k` actions of which `z` fail:
/// `z / (k + 1 - z)`.
pub fn expected_wasted_queries(k: usize, z: usize) -> Result<Rational> {
    check_zeros(k, z)?;
    Ok(ratio(z, k + 1 - z))
}

/// Average number of queries a left-to-right scan needs to hit the first 1,
/// over all binary arrays of length `k` with `z` zeros, computed as
/// `sum_{i=0..z} (i + 1) C(k - i - 1, z - i) / C(k, z)`.
pub fn deterministic_expected_queries_bruteforce(k: usize, z: usize) -> Result<Rational> {
    check_zeros(k, z)?;
    if k > 20 {
        return Err(Error::InvalidParameter(format!("k={k} exceeds 20")));
    }
    let total: BigInt = (0..=z)
        .map(|i| BigInt::from(i + 1) * binomial(BigInt::from(k - i - 1), BigInt::from(z - i)))
        .sum();
    Ok(Rational::new(
        total,
        binomial(BigInt::from(k), BigInt::from(z)),
    ))
}

/// Same quantity as [`deterministic_expected_queries_bruteforce`], obtained
/// by enumerating every zero placement and scanning it.
pub fn deterministic_expected_queries_enumerated(k: usize, z: usize) -> Result<Rational> {
    check_zeros(k, z)?;
    if k > 20 {
        return Err(Error::InvalidParameter(format!("k={k} exceeds 20")));
    }
    let mut arrays = 0u64;
    let mut queries = 0u64;
    for zeros in (0..k).combinations(z) {
        let mut is_zero = vec![false; k];
        for i in zeros {
            is_zero[i] = true;
        }
        let first_one = is_zero.iter().position(|&x| !x).expect("z < k");
        arrays += 1;
        queries += first_one as u64 + 1;
    }
    Ok(ratio(queries, arrays))
}

/// Fraction of the `k!` pick orders in which one distinguished failing
/// action comes before every one of the `k - z` succeeding actions.
pub fn zero_before_ones_probability_bruteforce(k: usize, z: usize) -> Result<Rational> {
    check_zeros(k, z)?;
    if z == 0 {
        return Err(Error::InvalidParameter("need at least one zero".into()));
    }
    if k > 8 {
        return Err(Error::InvalidParameter(format!("k={k} exceeds 8")));
    }
    // Items 0..z are zeros (item 0 is the distinguished one), z..k are ones.
    let mut favourable = 0u64;
    let mut total = 0u64;
    for order in (0..k).permutations(k) {
        total += 1;
        let first_one = order.iter().position(|&x| x >= z).expect("k - z >= 1");
        if order[..first_one].contains(&0) {
            favourable += 1;
        }
    }
    Ok(ratio(favourable, total))
}

/// Closed form of the maximum of `sum_s z_s / (k + 1 - z_s)` over zero
/// counts `z_s <= k - 1` summing to `z`, attained by the concentrated
/// composition. With `z = a (k - 1) + b`, `0 <= b < k - 1`, each full stage
/// contributes `(k - 1) / 2`, so the maximum is `a (k - 1) / 2 + b / (k + 1 - b)`.
/// This never exceeds `z / 2`.
pub fn hardest_distribution_value(m: usize, k: usize, z: usize) -> Result<Rational> {
    check_composition(m, k, z)?;
    let (a, b) = split_zeros(k, z);
    Ok(ratio(a * (k - 1), 2) + ratio(b, k + 1 - b))
}

/// The concentrated composition `(k-1, ..., k-1, b, 0, ..., 0)`.
pub fn concentrated_composition(m: usize, k: usize, z: usize) -> Result<Vec<usize>> {
    check_composition(m, k, z)?;
    let (a, b) = split_zeros(k, z);
    let mut parts = vec![0; m];
    parts[..a].fill(k - 1);
    if a < m {
        parts[a] = b;
    }
    Ok(parts)
}

/// `(a, b)` with `z = a (k - 1) + b` and `0 <= b < k - 1` (both 0 when `k = 1`).
pub fn split_zeros(k: usize, z: usize) -> (usize, usize) {
    if k == 1 {
        return (0, 0);
    }
    (z / (k - 1), z % (k - 1))
}

fn check_composition(m: usize, k: usize, z: usize) -> Result<()> {
    if m == 0 || k == 0 || z > m * (k - 1) {
        return Err(Error::InvalidParameter(format!(
            "cannot place {z} zeros in {m} stages of {k} actions with one success each"
        )));
    }
    Ok(())
}

fn wasted_sum(k: usize, parts: &[usize]) -> Rational {
    parts
        .iter()
        .map(|&zs| ratio(zs, k + 1 - zs))
        .fold(Rational::zero(), |acc, x| acc + x)
}

/// Exhaustive maximum of `sum_s z_s / (k + 1 - z_s)` over every ordered
/// composition of `z` into `m` parts of size at most `k - 1`. Returns the
/// maximum and the first maximizing composition in descending
/// lexicographic order.
pub fn hardest_distribution_bruteforce(
    m: usize,
    k: usize,
    z: usize,
) -> Result<(Rational, Vec<usize>)> {
    check_composition(m, k, z)?;
    if m > 6 || k > 7 {
        return Err(Error::InvalidParameter(format!(
            "enumeration limited to m <= 6, k <= 7 (got m={m}, k={k})"
        )));
    }
    let mut best: Option<(Rational, Vec<usize>)> = None;
    let mut parts = vec![0; m];
    visit_compositions(&mut parts, 0, z, k - 1, &mut |parts| {
        let value = wasted_sum(k, parts);
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, parts.to_vec()));
        }
    });
    Ok(best.expect("feasible z has at least one composition"))
}

fn visit_compositions(
    parts: &mut [usize],
    idx: usize,
    remaining: usize,
    cap: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if idx == parts.len() {
        if remaining == 0 {
            visit(parts);
        }
        return;
    }
    let slots_left = parts.len() - idx - 1;
    for v in (0..=cap.min(remaining)).rev() {
        if remaining - v > slots_left * cap {
            break;
        }
        parts[idx] = v;
        visit_compositions(parts, idx + 1, remaining - v, cap, visit);
    }
    parts[idx] = 0;
}

fn check_dominated(a: &[Rational], b: &[Rational]) -> Result<()> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidParameter(
            "vectors must be non-empty and of equal length".into(),
        ));
    }
    for (i, (ai, bi)) in a.iter().zip(b).enumerate() {
        if bi.is_negative() || bi > ai || *ai > Rational::one() {
            return Err(Error::InvalidParameter(format!(
                "need 0 <= b <= a <= 1 at index {i}, got a={ai}, b={bi}"
            )));
        }
    }
    Ok(())
}

fn product<'a>(values: impl Iterator<Item = &'a Rational>) -> Rational {
    values.fold(Rational::one(), |acc, x| acc * x)
}

/// `(prod a - prod b, sum (a - b))` for `0 <= b <= a <= 1` entrywise.
pub fn prod_to_sum_gap(a: &[Rational], b: &[Rational]) -> Result<(Rational, Rational)> {
    check_dominated(a, b)?;
    let gap = product(a.iter()) - product(b.iter());
    let sum = a
        .iter()
        .zip(b)
        .fold(Rational::zero(), |acc, (x, y)| acc + x - y);
    Ok((gap, sum))
}

/// `(prod a - prod b, sum_j (prod_{f=j} a - prod_{f=j} b))`.
pub fn typed_prod_to_sum_gap(
    a: &[Rational],
    b: &[Rational],
    types: &StageTypeMap,
) -> Result<(Rational, Rational)> {
    check_dominated(a, b)?;
    types.check_stages(a.len())?;
    let gap = product(a.iter()) - product(b.iter());
    let grouped = types
        .groups()
        .iter()
        .map(|g| product(g.iter().map(|&s| &a[s])) - product(g.iter().map(|&s| &b[s])))
        .fold(Rational::zero(), |acc, x| acc + x);
    Ok((gap, grouped))
}

/// Core of the instance-dependent UCB regret bound:
/// `ln(T) * sum_{i != best} 1 / (p_best - p_i)`.
pub fn ucb_bound_estimate(probs: &[f64], horizon: u64) -> Result<f64> {
    if probs.len() < 2 || horizon < 2 {
        return Err(Error::InvalidParameter(
            "need at least two arms and a horizon of at least 2".into(),
        ));
    }
    let best = probs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if probs.iter().filter(|&&p| p == best).count() > 1 {
        return Err(Error::InvalidParameter(
            "best arm is not unique (zero gap)".into(),
        ));
    }
    let inverse_gaps: f64 = probs
        .iter()
        .filter(|&&p| p != best)
        .map(|&p| 1.0 / (best - p))
        .sum();
    Ok((horizon as f64).ln() * inverse_gaps)
}

/// Converts an exact value to the nearest `f64`.
pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}
