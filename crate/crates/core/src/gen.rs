//! Instance generators for the experiment families.

use rand::Rng;
use rand_distr::{Beta, Distribution};

use crate::env::SeededRng;
use crate::error::{Error, Result};
use crate::model::{argmax, ProbabilityMatrix, StageTypeMap};

/// Shape parameters of a Beta distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaParams {
    alpha: f64,
    beta: f64,
}

impl BetaParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0 && beta > 0.0 && alpha.is_finite() && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "Beta parameters must be positive, got alpha={alpha}, beta={beta}"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }
}

/// Binary matrix: each entry is 1 with probability `p`, then one uniformly
/// chosen action per stage is forced to 1.
pub fn gen_deterministic(
    m: usize,
    k: usize,
    p: f64,
    rng: &mut SeededRng,
) -> Result<ProbabilityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityOutOfRange(p));
    }
    let mut rows = vec![vec![0.0; k]; m];
    for row in &mut rows {
        for entry in row.iter_mut() {
            if rng.gen::<f64>() < p {
                *entry = 1.0;
            }
        }
        row[rng.gen_range(0..k)] = 1.0;
    }
    ProbabilityMatrix::deterministic_from_rows(&rows)
}

/// Matrix with i.i.d. Beta entries.
pub fn gen_beta(
    m: usize,
    k: usize,
    params: BetaParams,
    rng: &mut SeededRng,
) -> Result<ProbabilityMatrix> {
    let dist =
        Beta::new(params.alpha, params.beta).map_err(|e| Error::InvalidParameter(e.to_string()))?;
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..k).map(|_| dist.sample(rng).clamp(0.0, 1.0)).collect())
        .collect();
    ProbabilityMatrix::from_rows(&rows)
}

/// Moves each stage's best action to column `s mod types`, so stages sharing
/// a residue share an optimal action.
///
/// The swap exchanges the (lowest-index) row maximum with the target column.
/// The returned map assigns stage `s` to type `s mod types`.
pub fn relabel_for_stage_types(
    matrix: &ProbabilityMatrix,
    types: usize,
) -> Result<(ProbabilityMatrix, StageTypeMap)> {
    let k = matrix.actions();
    let m = matrix.stages();
    if types == 0 || types > k || types > m {
        return Err(Error::InvalidParameter(format!(
            "type count must be in 1..={}, got {types}",
            k.min(m)
        )));
    }
    let rows: Vec<Vec<f64>> = matrix
        .rows()
        .enumerate()
        .map(|(s, row)| {
            let mut row = row.to_vec();
            let best = argmax(&row);
            row.swap(best, s % types);
            row
        })
        .collect();
    let relabeled = if matrix.is_deterministic() {
        ProbabilityMatrix::deterministic_from_rows(&rows)?
    } else {
        ProbabilityMatrix::from_rows(&rows)?
    };
    Ok((relabeled, StageTypeMap::cyclic(m, types)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p_one_gives_all_ones() {
        let mut rng = SeededRng::new(1);
        let p = gen_deterministic(4, 5, 1.0, &mut rng).unwrap();
        assert_eq!(p.zero_count(), 0);
    }

    #[test]
    fn p_zero_gives_one_success_per_row() {
        let mut rng = SeededRng::new(2);
        let mut hits = [0usize; 5];
        for _ in 0..2000 {
            let p = gen_deterministic(1, 5, 0.0, &mut rng).unwrap();
            assert_eq!(p.zero_count(), 4);
            hits[p.best_action(0)] += 1;
        }
        // Uniform position: each column ~400, binomial sd ~18.
        for h in hits {
            assert!((h as f64 - 400.0).abs() < 80.0, "{hits:?}");
        }
    }

    #[test]
    fn expected_ones_per_row() {
        let mut rng = SeededRng::new(3);
        let rows = 100_000;
        let p = gen_deterministic(rows, 5, 0.3, &mut rng).unwrap();
        let ones = rows * 5 - p.zero_count();
        let mean = ones as f64 / rows as f64;
        assert!((mean - 2.2).abs() < 0.02, "mean ones per row {mean}");
    }

    #[test]
    fn beta_means() {
        for (alpha, beta, want) in [(1.0, 1.0, 0.5), (10.0, 1.0, 10.0 / 11.0)] {
            let params = BetaParams::new(alpha, beta).unwrap();
            let mut rng = SeededRng::new(4);
            let p = gen_beta(20_000, 5, params, &mut rng).unwrap();
            let mean = p.rows().flatten().sum::<f64>() / 100_000.0;
            assert!(
                (mean - want).abs() < 0.003,
                "Beta({alpha},{beta}) mean {mean}"
            );
            assert!(p.rows().flatten().all(|&x| (0.0..=1.0).contains(&x)));
        }
    }

    #[test]
    fn beta_params_validated() {
        assert!(BetaParams::new(0.0, 1.0).is_err());
        assert!(BetaParams::new(1.0, -2.0).is_err());
        assert!(BetaParams::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn relabel_worked_example() {
        let p = ProbabilityMatrix::from_rows(&[
            [0.124, 0.357, 0.432, 0.291, 0.085],
            [0.214, 0.076, 0.389, 0.407, 0.153],
            [0.265, 0.178, 0.099, 0.314, 0.348],
            [0.428, 0.067, 0.209, 0.134, 0.275],
        ])
        .unwrap();
        let (q, f) = relabel_for_stage_types(&p, 2).unwrap();
        let want = ProbabilityMatrix::from_rows(&[
            [0.432, 0.357, 0.124, 0.291, 0.085],
            [0.214, 0.407, 0.389, 0.076, 0.153],
            [0.348, 0.178, 0.099, 0.314, 0.265],
            [0.067, 0.428, 0.209, 0.134, 0.275],
        ])
        .unwrap();
        assert_eq!(q, want);
        assert_eq!(q.optimal_sequence().0.as_slice(), &[0, 1, 0, 1]);
        assert_eq!(f.assignments(), &[0, 1, 0, 1]);
        assert!(q.collapsing_is_valid(&f).unwrap());
    }

    #[test]
    fn relabel_single_type_moves_best_to_first_column() {
        let p = ProbabilityMatrix::from_rows(&[[0.1, 0.9, 0.3], [0.8, 0.2, 0.1]]).unwrap();
        let (q, f) = relabel_for_stage_types(&p, 1).unwrap();
        assert_eq!(q.to_rows(), vec![vec![0.9, 0.1, 0.3], vec![0.8, 0.2, 0.1]]);
        assert_eq!(f.type_count(), 1);
    }

    #[test]
    fn relabel_rejects_bad_type_count() {
        let p = ProbabilityMatrix::from_rows(&[[0.1, 0.9]]).unwrap();
        assert!(relabel_for_stage_types(&p, 0).is_err());
        assert!(relabel_for_stage_types(&p, 3).is_err());
    }
}
