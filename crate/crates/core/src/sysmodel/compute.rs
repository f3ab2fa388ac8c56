//! Cycle workloads, proportional CPU shares and per-task time/energy along
//! each execution path.

use crate::error::{Error, Result};
use crate::scenario::{Device, Scenario, ScenarioParams};
use crate::sysmodel::{codec_cycles, mbs_uplink_rate, noma_uplink_rate, Solution, TaskPlan};

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Cost {
    pub time_s: f64,
    pub energy_j: f64,
}

/// Where data processed at the macro cell came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    FromMd,
    FromSbs,
}

/// Cycles a small cell spends on one task: compute its share, decompress
/// and decrypt what arrived, compress and encrypt what it forwards.
pub fn sbs_workload_cycles(plan: &TaskPlan, params: &ScenarioParams) -> Result<f64> {
    let c = plan.task.cycles_per_bit;
    let xi = params.codec_xi;
    Ok((plan.d_first - plan.d_second) * c
        + codec_cycles(plan.d_first, plan.z_first, &params.bs_decompress, xi)?
        + codec_cycles(plan.d_second, plan.z_second, &params.bs_compress, xi)?
        + plan.crypto.decrypt_cycles * plan.d_first / plan.z_first
        + plan.crypto.encrypt_cycles * plan.d_second / plan.z_second)
}

/// Cycles the macro cell spends on one task's data, received either
/// directly from the device or forwarded by a small cell.
pub fn mbs_workload_cycles(origin: Origin, plan: &TaskPlan, params: &ScenarioParams) -> Result<f64> {
    let (size, ratio) = match origin {
        Origin::FromMd => (plan.d_first, plan.z_first),
        Origin::FromSbs => (plan.d_second, plan.z_second),
    };
    Ok(size * plan.task.cycles_per_bit
        + plan.crypto.decrypt_cycles * size / ratio
        + codec_cycles(size, ratio, &params.bs_decompress, params.codec_xi)?)
}

/// Capacity a station grants `target` when its `total_cc` is split in
/// proportion to the workloads of every task it serves.
pub fn proportional_cc_share(workloads: &[f64], total_cc: f64, target: usize) -> Result<f64> {
    if workloads.is_empty() {
        return Err(Error::contract("station serves no tasks"));
    }
    let own = *workloads
        .get(target)
        .ok_or_else(|| Error::contract(format!("target {target} not among served tasks")))?;
    if !(own > 0.0) {
        return Err(Error::contract("target workload must be positive"));
    }
    Ok(own * total_cc / workloads.iter().sum::<f64>())
}

pub(crate) fn local_cost_at_rate(
    params: &ScenarioParams,
    device: &Device,
    plan: &TaskPlan,
    power: f64,
    rate: f64,
) -> Result<Cost> {
    let f = device.cpu_hz;
    let kept = (plan.task.size_bits - plan.d_first) * plan.task.cycles_per_bit;
    let compress = codec_cycles(plan.d_first, plan.z_first, &params.md_compress, params.codec_xi)?;
    let sent_bits = plan.d_first / plan.z_first;
    let time = kept / f + compress / f + plan.crypto.encrypt_cycles * sent_bits / f;
    let dynamic = params.switched_capacitance * f * f;
    let energy =
        dynamic * kept + dynamic * compress + power * sent_bits / rate + plan.crypto.energy_per_bit * sent_bits;
    Ok(Cost {
        time_s: time,
        energy_j: energy,
    })
}

pub(crate) fn sbs_path_cost_at(
    params: &ScenarioParams,
    plan: &TaskPlan,
    f_bar: f64,
    f_hat: f64,
    rate: f64,
) -> Result<Cost> {
    let xi = params.codec_xi;
    let c = plan.task.cycles_per_bit;
    let (d1, d2, z1, z2) = (plan.d_first, plan.d_second, plan.z_first, plan.z_second);
    let decompress_sbs = codec_cycles(d1, z1, &params.bs_decompress, xi)?;
    let compress_sbs = codec_cycles(d2, z2, &params.bs_compress, xi)?;
    let decompress_mbs = codec_cycles(d2, z2, &params.bs_decompress, xi)?;
    let backhaul = params.backhaul_rate_bps;
    let crypto = plan.crypto;

    let time = d1 / (z1 * rate)
        + d2 / (z2 * backhaul)
        + decompress_sbs / f_bar
        + compress_sbs / f_bar
        + decompress_mbs / f_hat
        + crypto.decrypt_cycles * d1 / (z1 * f_bar)
        + crypto.encrypt_cycles * d2 / (z2 * f_bar)
        + crypto.decrypt_cycles * d2 / (z2 * f_hat)
        + (d1 - d2) * c / f_bar
        + d2 * c / f_hat;

    let per_cycle = params.bs_energy_per_cycle_j;
    // The second-hop crypto energy appears twice: encrypt at the small cell
    // and decrypt at the macro cell cost the same per bit.
    let energy = params.wired_power_w * d2 / (z2 * backhaul)
        + per_cycle * decompress_sbs
        + per_cycle * compress_sbs
        + per_cycle * decompress_mbs
        + crypto.energy_per_bit * d1 / z1
        + crypto.energy_per_bit * d2 / z2
        + crypto.energy_per_bit * d2 / z2
        + per_cycle * (d1 - d2) * c
        + per_cycle * d2 * c;
    Ok(Cost {
        time_s: time,
        energy_j: energy,
    })
}

pub(crate) fn mbs_path_cost_at(params: &ScenarioParams, plan: &TaskPlan, f_hat: f64, rate: f64) -> Result<Cost> {
    let (d1, z1) = (plan.d_first, plan.z_first);
    let c = plan.task.cycles_per_bit;
    let decompress = codec_cycles(d1, z1, &params.bs_decompress, params.codec_xi)?;
    let time = d1 / (z1 * rate) + decompress / f_hat + d1 * c / f_hat + plan.crypto.decrypt_cycles * d1 / (z1 * f_hat);
    let per_cycle = params.bs_energy_per_cycle_j;
    let energy = per_cycle * decompress + per_cycle * d1 * c + plan.crypto.energy_per_bit * d1 / z1;
    Ok(Cost {
        time_s: time,
        energy_j: energy,
    })
}

fn uplink_rate(scn: &Scenario, sol: &Solution, md: usize) -> Result<f64> {
    if sol.assoc[md] == 0 {
        mbs_uplink_rate(scn, sol, md)
    } else {
        noma_uplink_rate(scn, sol, md)
    }
}

/// Device-side time and energy of one task, using the device's uplink rate.
pub fn local_cost(scn: &Scenario, sol: &Solution, md: usize, k: usize) -> Result<Cost> {
    let rate = uplink_rate(scn, sol, md)?;
    local_cost_at_rate(
        &scn.params,
        &scn.devices[md],
        &sol.plan(scn, md, k),
        sol.power[md],
        rate,
    )
}

/// Small-cell path (device to small cell to macro cell) of one task, given
/// the CPU shares `f_bar` at the small cell and `f_hat` at the macro cell.
pub fn sbs_path_cost(scn: &Scenario, sol: &Solution, md: usize, k: usize, f_bar: f64, f_hat: f64) -> Result<Cost> {
    let rate = noma_uplink_rate(scn, sol, md)?;
    sbs_path_cost_at(&scn.params, &sol.plan(scn, md, k), f_bar, f_hat, rate)
}

/// Direct macro-cell path of one task, given the macro-cell CPU share.
pub fn mbs_path_cost(scn: &Scenario, sol: &Solution, md: usize, k: usize, f_hat: f64) -> Result<Cost> {
    let rate = mbs_uplink_rate(scn, sol, md)?;
    mbs_path_cost_at(&scn.params, &sol.plan(scn, md, k), f_hat, rate)
}

/// Per-station sums of served workloads; index 0 counts both
/// device-origin and small-cell-origin data.
pub(crate) fn station_denominators(scn: &Scenario, sol: &Solution) -> Result<Vec<f64>> {
    let mut den = vec![0.0; scn.num_bs()];
    for md in 0..scn.num_md() {
        let j = sol.assoc[md];
        for k in 0..scn.num_tasks() {
            let plan = sol.plan(scn, md, k);
            if j == 0 {
                den[0] += mbs_workload_cycles(Origin::FromMd, &plan, &scn.params)?;
            } else {
                den[j] += sbs_workload_cycles(&plan, &scn.params)?;
                den[0] += mbs_workload_cycles(Origin::FromSbs, &plan, &scn.params)?;
            }
        }
    }
    Ok(den)
}

/// Total delay and energy of one device: tasks run one after another and
/// each takes the longer of its local part and its offloaded part.
pub fn md_totals(scn: &Scenario, sol: &Solution, md: usize) -> Result<Cost> {
    sol.validate(scn)?;
    let den = station_denominators(scn, sol)?;
    let j = sol.assoc[md];
    let params = &scn.params;
    let mut total = Cost::default();
    for k in 0..scn.num_tasks() {
        let plan = sol.plan(scn, md, k);
        let local = local_cost(scn, sol, md, k)?;
        let path = if j == 0 {
            let f_hat = mbs_workload_cycles(Origin::FromMd, &plan, params)? * params.mbs_cpu_hz / den[0];
            mbs_path_cost(scn, sol, md, k, f_hat)?
        } else {
            let f_bar = sbs_workload_cycles(&plan, params)? * scn.bs_cpu_hz(j) / den[j];
            let f_hat = mbs_workload_cycles(Origin::FromSbs, &plan, params)? * params.mbs_cpu_hz / den[0];
            sbs_path_cost(scn, sol, md, k, f_bar, f_hat)?
        };
        total.time_s += path.time_s.max(local.time_s);
        total.energy_j += local.energy_j + path.energy_j;
    }
    Ok(total)
}
