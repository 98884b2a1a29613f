//! Regret CSV output and summary statistics.
//!
//! Schema: `experiment,instance_id,seed,algorithm,round,cum_regret`, one row
//! per recorded round (1-based), `cum_regret` to 9 significant digits.
//! Summaries are always computed from the values as they appear in the CSV,
//! so summarizing a written file reproduces the summary printed by the run.

use std::collections::HashMap;
use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiment::ExperimentOutput;

pub const CSV_HEADER: [&str; 6] = [
    "experiment",
    "instance_id",
    "seed",
    "algorithm",
    "round",
    "cum_regret",
];

/// Formats `v` with 9 significant digits, like C's `%.9g`.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let sci = format!("{v:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..9).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (8 - exp) as usize;
    trim_zeros(&format!("{v:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds recorded for a run of `rounds` rounds: multiples of `thin` plus the last.
pub fn recorded_rounds(rounds: usize, thin: usize) -> impl Iterator<Item = usize> {
    (1..=rounds).filter(move |t| t % thin == 0 || *t == rounds)
}

/// Writes the thinned traces of `output` in (cell, instance, algorithm, round) order.
pub fn write_csv<W: Write>(output: &ExperimentOutput, writer: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let csv_err = |e: csv::Error| Error::io("<csv>", io::Error::other(e));
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    let thin = output.config.thin;
    for cell in &output.cells {
        for trace in &cell.traces {
            let id = trace.instance_id.to_string();
            let seed = trace.seed.to_string();
            for t in recorded_rounds(trace.cumulative.len(), thin) {
                w.write_record([
                    cell.cell.name.as_str(),
                    &id,
                    &seed,
                    &trace.algorithm,
                    &t.to_string(),
                    &format_sig9(trace.cumulative[t - 1]),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}

pub fn write_csv_file(output: &ExperimentOutput, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv(output, BufWriter::new(file)).map_err(|e| match e {
        Error::Io { source, .. } => Error::io(path, source),
        other => other,
    })
}

/// Statistics of one (experiment, algorithm) group.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgorithmSummary {
    pub experiment: String,
    pub algorithm: String,
    /// Number of runs (instances).
    pub runs: usize,
    /// Mean final cumulative regret.
    pub mean: f64,
    /// Population standard deviation of the final cumulative regret.
    pub std: f64,
    pub min: f64,
    pub max: f64,
    /// `(round, mean cumulative regret)` at each requested checkpoint present in the data.
    pub checkpoints: Vec<(usize, f64)>,
}

impl fmt::Display for AlgorithmSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:<24} {:<8} n={:<4} mean={} std={} min={} max={}",
            self.experiment,
            self.algorithm,
            self.runs,
            format_sig9(self.mean),
            format_sig9(self.std),
            format_sig9(self.min),
            format_sig9(self.max),
        )?;
        for (round, mean) in &self.checkpoints {
            write!(f, " t{round}={}", format_sig9(*mean))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub groups: Vec<AlgorithmSummary>,
}

impl Summary {
    pub fn get(&self, experiment: &str, algorithm: &str) -> Option<&AlgorithmSummary> {
        self.groups
            .iter()
            .find(|g| g.experiment == experiment && g.algorithm == algorithm)
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.groups {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

#[derive(Default)]
struct Run {
    last_round: usize,
    last_value: f64,
    at: HashMap<usize, f64>,
}

/// Accumulates CSV-shaped records into a [`Summary`].
#[derive(Default)]
struct Aggregator {
    checkpoints: Vec<usize>,
    groups: Vec<(String, String)>,
    group_index: HashMap<(String, String), usize>,
    runs: Vec<Vec<Run>>,
    run_index: HashMap<(usize, String), usize>,
}

impl Aggregator {
    fn new(checkpoints: &[usize]) -> Self {
        Self {
            checkpoints: checkpoints.to_vec(),
            ..Default::default()
        }
    }

    fn push(
        &mut self,
        experiment: &str,
        algorithm: &str,
        run_key: String,
        round: usize,
        value: f64,
    ) -> std::result::Result<(), String> {
        let key = (experiment.to_string(), algorithm.to_string());
        let g = match self.group_index.get(&key) {
            Some(&g) => g,
            None => {
                self.groups.push(key.clone());
                self.runs.push(Vec::new());
                self.group_index.insert(key, self.groups.len() - 1);
                self.groups.len() - 1
            }
        };
        let r = *self.run_index.entry((g, run_key)).or_insert_with(|| {
            self.runs[g].push(Run::default());
            self.runs[g].len() - 1
        });
        let run = &mut self.runs[g][r];
        if round <= run.last_round {
            return Err(format!(
                "round {round} does not follow round {} of the same run",
                run.last_round
            ));
        }
        run.last_round = round;
        run.last_value = value;
        if self.checkpoints.contains(&round) {
            run.at.insert(round, value);
        }
        Ok(())
    }

    fn finish(self) -> Summary {
        let checkpoints = self.checkpoints;
        let groups = self
            .groups
            .into_iter()
            .zip(self.runs)
            .map(|((experiment, algorithm), runs)| {
                let finals: Vec<f64> = runs.iter().map(|r| r.last_value).collect();
                let n = finals.len() as f64;
                let mean = finals.iter().sum::<f64>() / n;
                let var = finals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
                let checkpoints = checkpoints
                    .iter()
                    .filter_map(|&c| {
                        let vals: Vec<f64> =
                            runs.iter().filter_map(|r| r.at.get(&c)).copied().collect();
                        (!vals.is_empty())
                            .then(|| (c, vals.iter().sum::<f64>() / vals.len() as f64))
                    })
                    .collect();
                AlgorithmSummary {
                    experiment,
                    algorithm,
                    runs: finals.len(),
                    mean,
                    std: var.sqrt(),
                    min: finals.iter().copied().fold(f64::INFINITY, f64::min),
                    max: finals.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    checkpoints,
                }
            })
            .collect();
        Summary { groups }
    }
}

/// Summary of a finished experiment, identical to summarizing its CSV.
pub fn summarize_output(output: &ExperimentOutput, checkpoints: &[usize]) -> Summary {
    let mut agg = Aggregator::new(checkpoints);
    let thin = output.config.thin;
    for cell in &output.cells {
        for trace in &cell.traces {
            let key = format!("{}\u{0}{}", trace.instance_id, trace.seed);
            for t in recorded_rounds(trace.cumulative.len(), thin) {
                let value: f64 = format_sig9(trace.cumulative[t - 1])
                    .parse()
                    .expect("formatted float parses");
                agg.push(&cell.cell.name, &trace.algorithm, key.clone(), t, value)
                    .expect("traces are ordered by round");
            }
        }
    }
    agg.finish()
}

/// Summarizes CSV data in the regret schema.
///
/// Row numbers in errors count the header as row 1.
pub fn summarize_reader<R: Read>(reader: R, checkpoints: &[usize]) -> Result<Summary> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .from_reader(reader);
    let mut records = rdr.records();
    let schema = |row: usize, msg: String| Error::CsvSchema { row, msg };
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| schema(1, e.to_string()))?,
        None => return Err(schema(1, "empty file".into())),
    };
    if header.iter().ne(CSV_HEADER) {
        return Err(schema(
            1,
            format!("expected header `{}`", CSV_HEADER.join(",")),
        ));
    }
    let mut agg = Aggregator::new(checkpoints);
    let mut rows = 0;
    for (i, rec) in records.enumerate() {
        let row = i + 2;
        let rec = rec.map_err(|e| schema(row, e.to_string()))?;
        if rec.len() != CSV_HEADER.len() {
            return Err(schema(
                row,
                format!("expected {} fields, found {}", CSV_HEADER.len(), rec.len()),
            ));
        }
        let field = |j: usize| &rec[j];
        let instance: usize = field(1)
            .parse()
            .map_err(|_| schema(row, format!("bad instance_id `{}`", field(1))))?;
        let seed: u64 = field(2)
            .parse()
            .map_err(|_| schema(row, format!("bad seed `{}`", field(2))))?;
        let round: usize = field(4)
            .parse()
            .ok()
            .filter(|&r| r >= 1)
            .ok_or_else(|| schema(row, format!("bad round `{}`", field(4))))?;
        let value: f64 = field(5)
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite() && *v >= 0.0)
            .ok_or_else(|| schema(row, format!("bad cum_regret `{}`", field(5))))?;
        if field(0).is_empty() || field(3).is_empty() {
            return Err(schema(row, "empty experiment or algorithm".into()));
        }
        agg.push(
            field(0),
            field(3),
            format!("{instance}\u{0}{seed}"),
            round,
            value,
        )
        .map_err(|msg| schema(row, msg))?;
        rows += 1;
    }
    if rows == 0 {
        return Err(schema(1, "no data rows".into()));
    }
    Ok(agg.finish())
}

pub fn summarize_csv(path: impl AsRef<Path>, checkpoints: &[usize]) -> Result<Summary> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    summarize_reader(io::BufReader::new(file), checkpoints)
}
