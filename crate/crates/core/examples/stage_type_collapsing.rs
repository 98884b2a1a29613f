//! When is merging stages into types safe?
//!
//! cargo run --example stage_type_collapsing

use sfipp::{ActionSequence, ProbabilityMatrix, StageTypeMap};

fn main() -> sfipp::Result<()> {
    let same_best = ProbabilityMatrix::from_rows(&[[0.9, 0.8], [0.6, 0.5], [0.7, 0.2]])?;
    let clash = ProbabilityMatrix::from_rows(&[[0.9, 0.8], [0.3, 0.35], [0.7, 0.2]])?;
    let single = StageTypeMap::single(3);
    let split = StageTypeMap::new(vec![0, 1, 0])?;

    for (name, p) in [
        ("same best action", &same_best),
        ("conflicting stage", &clash),
    ] {
        for (label, types) in [("one type", &single), ("types [0,1,0]", &split)] {
            let collapsed = p.collapse(types)?;
            let (per_type, value) = collapsed.optimal_sequence();
            let plan = types.expand(&per_type)?;
            println!(
                "{name}, {label}: collapsed plan {:?} -> {:?} success {value:.4}, regret {:.4}, valid {}",
                per_type.as_slice(),
                plan.as_slice(),
                p.per_round_regret(&plan)?,
                p.collapsing_is_valid(types)?
            );
        }
    }

    let plan = split.expand(&ActionSequence::from(vec![0, 1]))?;
    println!(
        "expanding per-type plan [0, 1] over [0,1,0] gives {:?}",
        plan.as_slice()
    );
    Ok(())
}
