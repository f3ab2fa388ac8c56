//! Physics and cost model: uplink rates, codec and crypto cycle counts,
//! per-task delay and energy along the local / small-cell / macro-cell
//! paths, breach cost, network energy and the penalty fitness.

mod codec;
mod compute;
mod radio;
mod security;

pub use codec::codec_cycles;
pub use compute::{
    local_cost, mbs_path_cost, mbs_workload_cycles, md_totals, proportional_cc_share, sbs_path_cost,
    sbs_workload_cycles, Cost, Origin,
};
pub use radio::{mbs_uplink_rate, noma_uplink_rate, subchannel_bandwidth};
pub use security::{breach_cost, breach_probability};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{CryptoAlgorithm, Scenario, Task};

/// A fully decoded decision vector.
///
/// Per-task vectors use the scenario's column-major task layout
/// (`k * num_md + md`). Indices are zero-based: `assoc == 0` is the macro
/// cell, `crypto` indexes the scenario's algorithms and `chan < num_subchannels`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub mu: f64,
    pub num_subchannels: usize,
    pub power: Vec<f64>,
    pub assoc: Vec<usize>,
    pub crypto: Vec<usize>,
    pub chan: Vec<usize>,
    pub z_first: Vec<f64>,
    pub z_second: Vec<f64>,
    pub d_first: Vec<f64>,
    pub d_second: Vec<f64>,
}

/// The slice of a [`Solution`] that concerns one task.
#[derive(Debug, Clone, Copy)]
pub struct TaskPlan<'a> {
    pub task: &'a Task,
    pub crypto: &'a CryptoAlgorithm,
    pub d_first: f64,
    pub d_second: f64,
    pub z_first: f64,
    pub z_second: f64,
}

impl Solution {
    pub fn plan<'a>(&self, scn: &'a Scenario, md: usize, k: usize) -> TaskPlan<'a> {
        let t = scn.task_index(md, k);
        TaskPlan {
            task: &scn.tasks[t],
            crypto: &scn.crypto[self.crypto[t]],
            d_first: self.d_first[t],
            d_second: self.d_second[t],
            z_first: self.z_first[t],
            z_second: self.z_second[t],
        }
    }

    /// Checks the structural box/ordering constraints (association, crypto and
    /// channel indices, band split, power, ratios and offload sizes).
    pub fn validate(&self, scn: &Scenario) -> Result<()> {
        let p = &scn.params;
        let md = scn.num_md();
        let tasks = md * scn.num_tasks();
        let lens = [
            ("power", self.power.len(), md),
            ("assoc", self.assoc.len(), md),
            ("chan", self.chan.len(), md),
            ("crypto", self.crypto.len(), tasks),
            ("z_first", self.z_first.len(), tasks),
            ("z_second", self.z_second.len(), tasks),
            ("d_first", self.d_first.len(), tasks),
            ("d_second", self.d_second.len(), tasks),
        ];
        for (name, got, want) in lens {
            if got != want {
                return Err(Error::contract(format!("{name} has length {got}, expected {want}")));
            }
        }
        if !(self.mu >= p.epsilon && self.mu <= p.one_minus) {
            return Err(Error::contract(format!("mu {} outside [epsilon, one_minus]", self.mu)));
        }
        if self.num_subchannels < 1 || self.num_subchannels > p.max_subchannels {
            return Err(Error::contract(format!(
                "num_subchannels {} outside [1, {}]",
                self.num_subchannels, p.max_subchannels
            )));
        }
        for i in 0..md {
            let pw = self.power[i];
            if !(pw >= p.epsilon && pw <= scn.devices[i].max_power_w) {
                return Err(Error::contract(format!("power of device {i} out of range: {pw}")));
            }
            if self.assoc[i] >= scn.num_bs() {
                return Err(Error::contract(format!("device {i} associated with unknown station")));
            }
            if self.chan[i] >= self.num_subchannels {
                return Err(Error::contract(format!("device {i} uses channel beyond N")));
            }
        }
        for t in 0..tasks {
            if self.crypto[t] >= scn.num_crypto() {
                return Err(Error::contract(format!("task {t} selects unknown algorithm")));
            }
            if !p.z_first.contains(self.z_first[t]) || !p.z_second.contains(self.z_second[t]) {
                return Err(Error::contract(format!("task {t} compression ratio out of range")));
            }
            let (d1, d2) = (self.d_first[t], self.d_second[t]);
            if !(d2 >= p.epsilon && d2 <= d1 && d1 <= scn.tasks[t].size_bits) {
                return Err(Error::contract(format!(
                    "task {t} offload sizes violate epsilon <= {d2} <= {d1} <= size"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub delay: Vec<f64>,
    pub energy: Vec<f64>,
    pub breach_cost: Vec<f64>,
    pub network_energy: f64,
    /// Device-side energy only (local compute, compression, transmit, encrypt).
    pub total_local_energy: f64,
    pub delay_violation: Vec<f64>,
    pub cost_violation: Vec<f64>,
    pub feasible: bool,
}

impl EvaluationReport {
    /// Fills violations and the feasibility flag from per-device totals.
    pub fn from_totals(
        scn: &Scenario,
        delay: Vec<f64>,
        energy: Vec<f64>,
        breach_cost: Vec<f64>,
        total_local_energy: f64,
    ) -> Self {
        let delay_violation: Vec<f64> = delay
            .iter()
            .zip(&scn.devices)
            .map(|(t, d)| (t - d.deadline_s).max(0.0))
            .collect();
        let cost_violation: Vec<f64> = breach_cost
            .iter()
            .zip(&scn.devices)
            .map(|(c, d)| (c - d.breach_budget).max(0.0))
            .collect();
        let feasible = delay_violation.iter().chain(&cost_violation).all(|v| *v == 0.0);
        EvaluationReport {
            network_energy: energy.iter().sum(),
            delay,
            energy,
            breach_cost,
            total_local_energy,
            delay_violation,
            cost_violation,
            feasible,
        }
    }
}

/// Penalty fitness (maximized): `-E - sum(alpha_i * dv_i) - sum(beta_i * cv_i)`.
pub fn fitness(report: &EvaluationReport, alpha: &[f64], beta: &[f64]) -> f64 {
    let delay_pen: f64 = report.delay_violation.iter().zip(alpha).map(|(v, a)| a * v).sum();
    let cost_pen: f64 = report.cost_violation.iter().zip(beta).map(|(v, b)| b * v).sum();
    -report.network_energy - delay_pen - cost_pen
}

/// Evaluates a solution with shared precomputation: all uplink rates come
/// from per-(cluster, channel, receiver) sorted prefix sums, and each
/// station's workload denominator is summed once.
pub fn evaluate_solution(scn: &Scenario, sol: &Solution) -> Result<EvaluationReport> {
    sol.validate(scn)?;
    let params = &scn.params;
    let num_md = scn.num_md();
    let num_tasks = scn.num_tasks();
    let rates = radio::all_rates(scn, sol);

    let mut sbs_load = vec![0.0; scn.num_tasks() * num_md];
    let mut mbs_load = vec![0.0; scn.num_tasks() * num_md];
    let mut denominators = vec![0.0; scn.num_bs()];
    for md in 0..num_md {
        let j = sol.assoc[md];
        for k in 0..num_tasks {
            let t = scn.task_index(md, k);
            let plan = sol.plan(scn, md, k);
            if j == 0 {
                mbs_load[t] = mbs_workload_cycles(Origin::FromMd, &plan, params)?;
            } else {
                sbs_load[t] = sbs_workload_cycles(&plan, params)?;
                mbs_load[t] = mbs_workload_cycles(Origin::FromSbs, &plan, params)?;
                denominators[j] += sbs_load[t];
            }
            denominators[0] += mbs_load[t];
        }
    }

    let mut delay = vec![0.0; num_md];
    let mut energy = vec![0.0; num_md];
    let mut local_total = 0.0;
    for md in 0..num_md {
        let j = sol.assoc[md];
        let device = &scn.devices[md];
        for k in 0..num_tasks {
            let t = scn.task_index(md, k);
            let plan = sol.plan(scn, md, k);
            let local = compute::local_cost_at_rate(params, device, &plan, sol.power[md], rates[md])?;
            let f_hat = mbs_load[t] * params.mbs_cpu_hz / denominators[0];
            let path = if j == 0 {
                compute::mbs_path_cost_at(params, &plan, f_hat, rates[md])?
            } else {
                let f_bar = sbs_load[t] * scn.bs_cpu_hz(j) / denominators[j];
                compute::sbs_path_cost_at(params, &plan, f_bar, f_hat, rates[md])?
            };
            delay[md] += path.time_s.max(local.time_s);
            energy[md] += local.energy_j + path.energy_j;
            local_total += local.energy_j;
        }
    }
    let psi = breach_cost(scn, sol);
    Ok(EvaluationReport::from_totals(scn, delay, energy, psi, local_total))
}
