use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::scenario::Scenario;
use crate::sysmodel::Solution;

/// Width of one small-cell subchannel: `(1 - mu) * bw / (L * N)`.
pub fn subchannel_bandwidth(mu: f64, num_subchannels: usize, num_clusters: usize, system_bw: f64) -> f64 {
    (1.0 - mu) * system_bw / (num_clusters * num_subchannels) as f64
}

/// `bw * log2(1 + snr)`, accurate for small `snr`.
fn shannon(bw: f64, snr: f64) -> f64 {
    bw * snr.ln_1p() / LN_2
}

/// NOMA uplink rate of a small-cell device.
///
/// Interferers are the other small-cell devices in the same cluster on the
/// same subchannel whose gain at the victim's serving station does not
/// exceed the victim's own (stronger signals are decoded and cancelled first).
pub fn noma_uplink_rate(scn: &Scenario, sol: &Solution, md: usize) -> Result<f64> {
    let j = sol.assoc[md];
    let cluster = scn
        .cluster_of(j)
        .ok_or_else(|| Error::contract(format!("device {md} is served by the macro cell")))?;
    let own = scn.gains[md][j];
    let n = sol.chan[md];
    let interference: f64 = (0..scn.num_md())
        .filter(|&u| u != md)
        .filter(|&u| sol.chan[u] == n && scn.cluster_of(sol.assoc[u]) == Some(cluster))
        .filter(|&u| scn.gains[u][j] <= own)
        .map(|u| sol.power[u] * scn.gains[u][j])
        .sum();
    let omega = subchannel_bandwidth(
        sol.mu,
        sol.num_subchannels,
        scn.params.num_clusters,
        scn.params.system_bandwidth_hz,
    );
    Ok(shannon(
        omega,
        sol.power[md] * own / (interference + scn.params.noise_power_w),
    ))
}

/// Macro-cell uplink rate: the macro band is split evenly over its devices,
/// with no interference. Independent of the channel gene.
pub fn mbs_uplink_rate(scn: &Scenario, sol: &Solution, md: usize) -> Result<f64> {
    if sol.assoc[md] != 0 {
        return Err(Error::contract(format!("device {md} is not served by the macro cell")));
    }
    let users = sol.assoc.iter().filter(|&&a| a == 0).count();
    Ok(mbs_rate(scn, sol, md, users))
}

fn mbs_rate(scn: &Scenario, sol: &Solution, md: usize, users: usize) -> f64 {
    let bw = sol.mu * scn.params.system_bandwidth_hz / users as f64;
    shannon(bw, sol.power[md] * scn.gains[md][0] / scn.params.noise_power_w)
}

/// Rates of every device in one pass.
///
/// Small-cell devices are bucketed by (cluster, channel). Within a bucket,
/// for each serving station the members' received powers are sorted by gain
/// and prefix-summed, so each victim's interference is one binary search.
pub(crate) fn all_rates(scn: &Scenario, sol: &Solution) -> Vec<f64> {
    let num_md = scn.num_md();
    let n_sub = sol.num_subchannels;
    let mut rates = vec![0.0; num_md];
    let mbs_users = sol.assoc.iter().filter(|&&a| a == 0).count();
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); scn.params.num_clusters * n_sub];
    for md in 0..num_md {
        match scn.cluster_of(sol.assoc[md]) {
            None => rates[md] = mbs_rate(scn, sol, md, mbs_users),
            Some(c) => buckets[c * n_sub + sol.chan[md]].push(md),
        }
    }

    let omega = subchannel_bandwidth(sol.mu, n_sub, scn.params.num_clusters, scn.params.system_bandwidth_hz);
    let noise = scn.params.noise_power_w;
    let mut receivers: Vec<usize> = Vec::new();
    let mut sorted: Vec<(f64, f64)> = Vec::new();
    let mut prefix: Vec<f64> = Vec::new();
    for members in buckets.iter().filter(|m| !m.is_empty()) {
        receivers.clear();
        receivers.extend(members.iter().map(|&m| sol.assoc[m]));
        receivers.sort_unstable();
        receivers.dedup();
        for &j in &receivers {
            sorted.clear();
            sorted.extend(members.iter().map(|&u| {
                let g = scn.gains[u][j];
                (g, sol.power[u] * g)
            }));
            sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
            prefix.clear();
            prefix.push(0.0);
            let mut acc = 0.0;
            for &(_, rx) in &sorted {
                acc += rx;
                prefix.push(acc);
            }
            for &victim in members.iter().filter(|&&m| sol.assoc[m] == j) {
                let own = scn.gains[victim][j];
                let upto = sorted.partition_point(|&(g, _)| g <= own);
                let interference = (prefix[upto] - sol.power[victim] * own).max(0.0);
                rates[victim] = shannon(omega, sol.power[victim] * own / (interference + noise));
            }
        }
    }
    rates
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::testutil::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn bandwidth_examples() {
        assert!(rel(subchannel_bandwidth(0.5, 5, 6, 20e6), 1e7 / 30.0) < 1e-15);
        assert_eq!(subchannel_bandwidth(0.5, 1, 1, 20e6), 1e7);
        let tiny = subchannel_bandwidth(1.0 - 1e-6, 3, 6, 20e6);
        assert!(tiny > 0.0 && tiny < 2.0);
    }

    #[test]
    fn lone_user_sees_only_noise() {
        let scn = small_scenario(3, 2, 1, 4);
        let mut sol = uniform_solution(&scn, 1);
        sol.chan = vec![0, 1, 0];
        sol.assoc = vec![1, 1, 0];
        let omega = subchannel_bandwidth(0.5, 2, scn.params.num_clusters, 20e6);
        let expect = omega * (1.0 + 0.1 * scn.gains[0][1] / 1e-14).log2();
        assert!(rel(noma_uplink_rate(&scn, &sol, 0).unwrap(), expect) < 1e-12);
    }

    #[test]
    fn two_user_sic_ordering() {
        let mut scn = small_scenario(2, 1, 1, 5);
        scn.gains[0][1] = 4e-12;
        scn.gains[1][1] = 1e-12;
        let mut sol = uniform_solution(&scn, 1);
        sol.power = vec![0.1, 0.15];
        let omega = subchannel_bandwidth(0.5, 2, 1, 20e6);
        let strong = omega * (1.0f64 + 0.1 * 4e-12 / (0.15 * 1e-12 + 1e-14)).log2();
        let weak = omega * (1.0f64 + 0.15 * 1e-12 / 1e-14).log2();
        assert!(rel(noma_uplink_rate(&scn, &sol, 0).unwrap(), strong) < 1e-12);
        assert!(rel(noma_uplink_rate(&scn, &sol, 1).unwrap(), weak) < 1e-12);
        let all = all_rates(&scn, &sol);
        assert!(rel(all[0], strong) < 1e-12 && rel(all[1], weak) < 1e-12);
    }

    #[test]
    fn macro_cell_rate_splits_evenly() {
        let scn = small_scenario(4, 2, 1, 6);
        let mut sol = uniform_solution(&scn, 0);
        sol.assoc = vec![0, 1, 1, 1];
        let single = mbs_uplink_rate(&scn, &sol, 0).unwrap();
        let expect = 0.5 * 20e6 * (1.0 + 0.1 * scn.gains[0][0] / 1e-14).log2();
        assert!(rel(single, expect) < 1e-12);
        sol.assoc = vec![0, 0, 1, 1];
        assert!(rel(mbs_uplink_rate(&scn, &sol, 0).unwrap(), single / 2.0) < 1e-12);
        sol.chan[0] = 1;
        assert!(rel(mbs_uplink_rate(&scn, &sol, 0).unwrap(), single / 2.0) < 1e-12);
    }

    #[test]
    fn wrong_tier_is_contract_violation() {
        let scn = small_scenario(2, 1, 1, 7);
        let sol = uniform_solution(&scn, 0);
        assert!(matches!(noma_uplink_rate(&scn, &sol, 0), Err(Error::Contract(_))));
        let sol = uniform_solution(&scn, 1);
        assert!(mbs_uplink_rate(&scn, &sol, 0).is_err());
    }

    #[test]
    fn vanishing_power_vanishing_rate() {
        let scn = small_scenario(2, 1, 1, 8);
        let mut sol = uniform_solution(&scn, 0);
        let mut prev = f64::INFINITY;
        for e in 1..=20 {
            sol.power[0] = 0.2 * 10f64.powi(-e);
            let r = mbs_uplink_rate(&scn, &sol, 0).unwrap();
            assert!(r < prev && r > 0.0);
            prev = r;
        }
        sol.power[0] = 0.2;
        assert!(prev < 1e-6 * mbs_uplink_rate(&scn, &sol, 0).unwrap());
    }
}
