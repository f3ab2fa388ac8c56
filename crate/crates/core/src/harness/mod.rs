//! Experiment harness: builds scenarios for each sweep cell, runs the
//! algorithms, computes metrics and reads/writes result and trace CSVs.

mod config;

pub use config::{load_config, parse_config, ExperimentSection, ExperimentSpec, SweepVar};

use std::fs::File;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::{run, Algorithm, RunTrace, TraceRow};
use crate::rng::derive_seed;
use crate::scenario::build_scenario;
use crate::sysmodel::EvaluationReport;

/// Fractions of devices meeting their deadline and their breach budget.
pub fn support_ratios(report: &EvaluationReport) -> (f64, f64) {
    let n = report.delay_violation.len();
    if n == 0 {
        return (1.0, 1.0);
    }
    let within = |v: &[f64]| v.iter().filter(|x| **x == 0.0).count() as f64 / n as f64;
    (within(&report.delay_violation), within(&report.cost_violation))
}

/// One CSV row per (sweep value, algorithm, replicate).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub sweep_var: String,
    pub sweep_value: f64,
    pub algorithm: String,
    /// Replicate index within the sweep point.
    pub seed: usize,
    pub network_energy_j: f64,
    pub local_energy_j: f64,
    pub time_support_ratio: f64,
    pub cost_support_ratio: f64,
    pub best_fitness: f64,
    pub wall_time_s: f64,
}

/// A finished cell: its metrics and convergence trace.
#[derive(Debug, Clone)]
pub struct CellResult {
    pub row: MetricRow,
    pub trace: Vec<TraceRow>,
}

impl CellResult {
    pub fn trace_file_name(&self) -> String {
        format!(
            "trace_{}_{}_{}_seed{}.csv",
            self.row.sweep_var, self.row.sweep_value, self.row.algorithm, self.row.seed
        )
    }
}

/// Seed of the scenario for replicate `r`; shared across sweep values and
/// algorithms so that cells differ only in the swept quantity.
pub fn scenario_seed(master: u64, replicate: usize) -> u64 {
    derive_seed(&[master, replicate as u64])
}

pub fn optimizer_seed(master: u64, replicate: usize) -> u64 {
    derive_seed(&[master, replicate as u64, 0x0F7])
}

struct Cell {
    value: f64,
    algorithm: Algorithm,
    replicate: usize,
}

/// Runs every (sweep value, algorithm, replicate) cell. Cells and fitness
/// evaluations share a pool of `experiment.parallel` workers; output order
/// is the cell order regardless of scheduling.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<CellResult>> {
    spec.validate()?;
    let e = &spec.experiment;
    let mut cells = Vec::new();
    for &value in &e.values {
        for &algorithm in &e.algorithms {
            for replicate in 0..e.seeds {
                cells.push(Cell {
                    value,
                    algorithm,
                    replicate,
                });
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(e.parallel)
        .build()
        .map_err(|err| Error::config(format!("thread pool: {err}")))?;
    pool.install(|| cells.par_iter().map(|c| run_cell(spec, c)).collect())
}

fn run_cell(spec: &ExperimentSpec, cell: &Cell) -> Result<CellResult> {
    let e = &spec.experiment;
    let mut params = spec.scenario.clone();
    let mut cfg = spec.optimizer.clone();
    e.sweep.apply(cell.value, &mut params, &mut cfg)?;
    let scn = build_scenario(&params, scenario_seed(e.master_seed, cell.replicate))?;
    let trace: RunTrace = run(
        cell.algorithm,
        &scn,
        &cfg,
        optimizer_seed(e.master_seed, cell.replicate),
    )?;
    let (time_ratio, cost_ratio) = support_ratios(&trace.report);
    Ok(CellResult {
        row: MetricRow {
            sweep_var: e.sweep.name().to_string(),
            sweep_value: cell.value,
            algorithm: cell.algorithm.name().to_string(),
            seed: cell.replicate,
            network_energy_j: trace.report.network_energy,
            local_energy_j: trace.report.total_local_energy,
            time_support_ratio: time_ratio,
            cost_support_ratio: cost_ratio,
            best_fitness: trace.best_fitness,
            wall_time_s: if e.timing { trace.wall_time_s } else { 0.0 },
        },
        trace: trace.rows,
    })
}

pub const RESULT_HEADER: [&str; 10] = [
    "sweep_var",
    "sweep_value",
    "algorithm",
    "seed",
    "network_energy_j",
    "local_energy_j",
    "time_support_ratio",
    "cost_support_ratio",
    "best_fitness",
    "wall_time_s",
];

pub const TRACE_HEADER: [&str; 5] = ["iteration", "best_fitness", "avg_fitness", "best_energy", "diversity"];

fn write_rows<T: Serialize>(rows: &[T], header: &[&str], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(file);
    w.write_record(header)?;
    for r in rows {
        w.serialize(r)?;
    }
    w.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}

fn read_rows<T: for<'de> Deserialize<'de>>(header: &[&str], path: &Path) -> Result<Vec<T>> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut r = csv::Reader::from_reader(file);
    let got: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if got != header {
        return Err(Error::config(format!(
            "{}: unexpected header {:?}",
            path.display(),
            got
        )));
    }
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

pub fn write_csv(rows: &[MetricRow], path: impl AsRef<Path>) -> Result<()> {
    write_rows(rows, &RESULT_HEADER, path.as_ref())
}

pub fn read_csv(path: impl AsRef<Path>) -> Result<Vec<MetricRow>> {
    read_rows(&RESULT_HEADER, path.as_ref())
}

pub fn write_trace(rows: &[TraceRow], path: impl AsRef<Path>) -> Result<()> {
    write_rows(rows, &TRACE_HEADER, path.as_ref())
}

pub fn read_trace(path: impl AsRef<Path>) -> Result<Vec<TraceRow>> {
    read_rows(&TRACE_HEADER, path.as_ref())
}

/// Writes `results.csv` and, if requested, one trace file per cell into
/// `dir`. Returns the paths written.
pub fn write_outputs(results: &[CellResult], dir: impl AsRef<Path>, traces: bool) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = vec![dir.join("results.csv")];
    let rows: Vec<MetricRow> = results.iter().map(|c| c.row.clone()).collect();
    write_csv(&rows, &written[0])?;
    if traces {
        for c in results {
            let path = dir.join(c.trace_file_name());
            write_trace(&c.trace, &path)?;
            written.push(path);
        }
    }
    Ok(written)
}
