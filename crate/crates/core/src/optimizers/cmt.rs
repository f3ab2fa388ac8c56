use std::time::Instant;

use crate::error::Result;
use crate::optimizers::{OptimizerConfig, RunTrace, TraceRow};
use crate::scenario::Scenario;
use crate::sysmodel::{fitness, EvaluationReport};

/// Full local computing at each device's CPU frequency: no offloading, no
/// encryption, so breach cost is zero.
pub fn local_only_report(scn: &Scenario) -> EvaluationReport {
    let mut delay = vec![0.0; scn.num_md()];
    let mut energy = vec![0.0; scn.num_md()];
    for (md, device) in scn.devices.iter().enumerate() {
        let f = device.cpu_hz;
        for k in 0..scn.num_tasks() {
            let task = scn.task(md, k);
            let cycles = task.size_bits * task.cycles_per_bit;
            delay[md] += cycles / f;
            energy[md] += scn.params.switched_capacitance * cycles * f * f;
        }
    }
    let total = energy.iter().sum();
    EvaluationReport::from_totals(scn, delay, energy, vec![0.0; scn.num_md()], total)
}

pub fn run_cmt(scn: &Scenario, cfg: &OptimizerConfig) -> Result<RunTrace> {
    cfg.validate()?;
    let started = Instant::now();
    let report = local_only_report(scn);
    let n = scn.num_md();
    let best_fitness = fitness(&report, &vec![cfg.alpha; n], &vec![cfg.beta; n]);
    Ok(RunTrace {
        rows: vec![TraceRow {
            iteration: 0,
            best_fitness,
            avg_fitness: best_fitness,
            best_energy: report.network_energy,
            diversity: 0.0,
        }],
        best_wave: None,
        best_solution: None,
        best_fitness,
        report,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
