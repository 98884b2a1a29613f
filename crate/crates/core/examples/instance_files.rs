//! Writing and reading JSON instance files with stage-type annotations.
//!
//! cargo run --example instance_files

use sfipp::{gen_beta, relabel_for_stage_types, BetaParams, Instance, SeededRng};

fn main() -> sfipp::Result<()> {
    let raw = gen_beta(4, 3, BetaParams::new(1.0, 1.0)?, &mut SeededRng::new(3))?;
    let (matrix, types) = relabel_for_stage_types(&raw, 2)?;
    let instance = Instance::new(matrix, Some(types))?;

    let path = std::env::temp_dir().join("sfipp-instance.json");
    instance.write(&path)?;
    println!("{}", std::fs::read_to_string(&path).unwrap());

    let back = Instance::read(&path)?;
    assert_eq!(back, instance);
    println!("stage types {:?}", back.stage_types.unwrap().assignments());

    let broken = r#"{"m": 2, "k": 2, "P": [[0.5, 0.5]]}"#;
    println!("rejected: {}", Instance::from_json(broken).unwrap_err());
    Ok(())
}
