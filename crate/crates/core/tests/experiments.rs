use sfipp::experiment::InstanceSource;
use sfipp::report::{format_sig9, summarize_output, summarize_reader, write_csv};
use sfipp::{
    run_experiment, Algorithm, ExperimentConfig, Instance, Preset, ProbabilityMatrix, TypeScheme,
};

fn reduced(preset: Preset) -> ExperimentConfig {
    ExperimentConfig {
        rounds: 300,
        instances: 5,
        ..ExperimentConfig::preset(preset)
    }
}

fn csv_of(config: &ExperimentConfig) -> Vec<u8> {
    let mut buf = Vec::new();
    write_csv(&run_experiment(config).unwrap(), &mut buf).unwrap();
    buf
}

#[test]
fn every_preset_summary_matches_its_csv() {
    for preset in [
        Preset::Det,
        Preset::CollapseGain,
        Preset::ValidCollapseHi,
        Preset::ValidCollapseUni,
        Preset::InvalidCollapseHi,
        Preset::InvalidCollapseUni,
    ] {
        let config = reduced(preset);
        let out = run_experiment(&config).unwrap();
        let mut buf = Vec::new();
        write_csv(&out, &mut buf).unwrap();
        let checkpoints = [100, 300];
        let from_csv = summarize_reader(buf.as_slice(), &checkpoints).unwrap();
        assert_eq!(summarize_output(&out, &checkpoints), from_csv, "{preset}");
        let cells = config.cells().len();
        assert_eq!(from_csv.groups.len(), cells * config.algorithms.len());
        for g in &from_csv.groups {
            assert_eq!(g.runs, 5);
            assert!(g.min <= g.mean && g.mean <= g.max);
            assert_eq!(g.checkpoints.len(), 2);
        }
    }
}

#[test]
fn summary_statistics_agree_with_traces() {
    let out = run_experiment(&reduced(Preset::ValidCollapseHi)).unwrap();
    let summary = summarize_output(&out, &[]);
    let cell = &out.cells[0];
    for alg in ["SB", "SCB_1", "SCFGB_2"] {
        let finals: Vec<f64> = cell
            .final_regrets(alg)
            .iter()
            .map(|v| format_sig9(*v).parse().unwrap())
            .collect();
        let n = finals.len() as f64;
        let mean = finals.iter().sum::<f64>() / n;
        let std = (finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
        let g = summary.get("valid-collapse-hi", alg).unwrap();
        assert!((g.mean - mean).abs() < 1e-9 && (g.std - std).abs() < 1e-9);
    }
}

#[test]
fn reruns_are_byte_identical_and_seed_sensitive() {
    for preset in [Preset::Det, Preset::InvalidCollapseUni] {
        let config = reduced(preset);
        assert_eq!(csv_of(&config), csv_of(&config));
        let other = ExperimentConfig {
            seed: config.seed + 1,
            ..config.clone()
        };
        assert_ne!(csv_of(&config), csv_of(&other));
    }
}

#[test]
fn csv_rows_are_ordered_by_instance_algorithm_round() {
    let config = ExperimentConfig {
        thin: 50,
        ..reduced(Preset::Det)
    };
    let buf = csv_of(&config);
    let text = String::from_utf8(buf).unwrap();
    let rows: Vec<Vec<&str>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').collect())
        .collect();
    assert_eq!(rows.len(), 5 * 5 * 2 * 6);
    let first_cell: Vec<(&str, &str, &str)> = rows
        .iter()
        .take(5 * 2 * 6)
        .map(|r| (r[1], r[3], r[4]))
        .collect();
    assert_eq!(first_cell[0], ("0", "UTF", "50"));
    assert_eq!(first_cell[5], ("0", "UTF", "300"));
    assert_eq!(first_cell[6], ("0", "SB", "50"));
    assert_eq!(first_cell[12], ("1", "UTF", "50"));
    for run in rows.chunks(6) {
        let values: Vec<f64> = run.iter().map(|r| r[5].parse().unwrap()).collect();
        assert!(values.windows(2).all(|w| w[0] <= w[1]));
        assert!(run.iter().all(|r| r[..4] == run[0][..4]));
    }
}

#[test]
fn fixed_instance_runs_every_instance_on_the_same_matrix() {
    let matrix = ProbabilityMatrix::from_rows(&[[0.9, 0.2], [0.3, 0.8], [0.7, 0.6]]).unwrap();
    let instance = Instance::new(matrix.clone(), None).unwrap();
    let config = ExperimentConfig {
        rounds: 500,
        instances: 4,
        algorithms: vec![Algorithm::Sb, Algorithm::Scfgb { types: 1 }],
        ..ExperimentConfig::from_instance(&instance)
    };
    let out = run_experiment(&config).unwrap();
    assert!(out.cells[0].instances.iter().all(|p| *p == matrix));
    assert!(matches!(config.source, InstanceSource::Fixed(_)));
    // Different environment streams give different trajectories.
    let finals = out.cells[0].final_regrets("SB");
    assert!(finals.windows(2).any(|w| w[0] != w[1]));
}

#[test]
fn utf_on_all_ones_has_zero_regret() {
    let config = ExperimentConfig {
        source: InstanceSource::Deterministic(vec![1.0]),
        types: TypeScheme::None,
        algorithms: vec![Algorithm::Utf],
        ..reduced(Preset::Custom)
    };
    let out = run_experiment(&config).unwrap();
    let summary = summarize_output(&out, &[]);
    let g = summary.get("custom", "UTF").unwrap();
    assert_eq!((g.mean, g.std, g.max), (0.0, 0.0, 0.0));
}
