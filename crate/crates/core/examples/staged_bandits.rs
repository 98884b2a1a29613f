//! Per-stage UCB against the two collapsed variants on one instance.
//!
//! cargo run --release --example staged_bandits

use sfipp::{
    gen_beta, relabel_for_stage_types, run_planner, BetaParams, Planner, SeededRng, StageTypeMap,
    StagedBandit, StagedCollapsedBandit, StagedCollapsedFineGrainedBandit,
};

fn main() -> sfipp::Result<()> {
    let (m, k, rounds) = (10, 5, 10_000);
    let raw = gen_beta(m, k, BetaParams::new(10.0, 1.0)?, &mut SeededRng::new(1))?;
    // Every stage now shares the same best action.
    let (p, types) = relabel_for_stage_types(&raw, 1)?;
    println!(
        "best plan succeeds with probability {:.3}",
        p.optimal_sequence().1
    );

    let planners: Vec<(&str, Box<dyn Planner>)> = vec![
        ("SB", Box::new(StagedBandit::new(m, k))),
        (
            "SCB_1",
            Box::new(StagedCollapsedBandit::new(types.clone(), k)),
        ),
        (
            "SCFGB_1",
            Box::new(StagedCollapsedFineGrainedBandit::new(types, k)),
        ),
        (
            "SCFGB_identity",
            Box::new(StagedCollapsedFineGrainedBandit::new(
                StageTypeMap::identity(m),
                k,
            )),
        ),
    ];
    for (name, mut planner) in planners {
        let cum = run_planner(&p, &mut planner, &mut SeededRng::new(2), rounds)?;
        println!(
            "{name:<15} regret at 1000: {:>8.1}  at {rounds}: {:>8.1}",
            cum[999],
            cum[rounds - 1]
        );
    }
    Ok(())
}
