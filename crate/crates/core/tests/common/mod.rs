//! Test-only oracles: a naive evaluator written straight from the model's
//! sums over indicator variables, and an exhaustive grid search for tiny
//! instances.

#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use agwwo_core::encoding::{init_wave, Bounds};
use agwwo_core::rng::{stream, Stream};
use agwwo_core::scenario::{build_scenario, Scenario, ScenarioParams};
use agwwo_core::sysmodel::Solution;

pub struct NaiveReport {
    pub network_energy: f64,
    pub local_energy: f64,
    pub delay: Vec<f64>,
    pub energy: Vec<f64>,
    pub psi: Vec<f64>,
}

fn ind(c: bool) -> f64 {
    if c {
        1.0
    } else {
        0.0
    }
}

fn codec(xi: f64, size: f64, z: f64, l: (f64, f64, f64)) -> f64 {
    xi * size * (l.0 * z.powf(l.1) + l.2)
}

/// Uplink rate of device `i`, summing interference over every other device
/// with indicator products (no sorting or bucketing).
pub fn naive_rate(scn: &Scenario, sol: &Solution, i: usize) -> f64 {
    let p = &scn.params;
    let num_md = scn.num_md();
    let x = |u: usize, j: usize| ind(sol.assoc[u] == j);
    let b = |u: usize, n: usize| ind(sol.chan[u] == n);
    if sol.assoc[i] == 0 {
        let users: f64 = (0..num_md).map(|u| x(u, 0)).sum();
        let snr = sol.power[i] * scn.gains[i][0] / p.noise_power_w;
        return sol.mu * p.system_bandwidth_hz / users * (1.0 + snr).log2();
    }
    let j = sol.assoc[i];
    let cluster = scn.cluster_of_sbs[j - 1];
    let omega = (1.0 - sol.mu) * p.system_bandwidth_hz / (p.num_clusters as f64 * sol.num_subchannels as f64);
    let mut interference = 0.0;
    for u in 0..num_md {
        if u == i {
            continue;
        }
        for jj in 1..scn.num_bs() {
            let same_cluster = ind(scn.cluster_of_sbs[jj - 1] == cluster);
            let weaker = ind(scn.gains[u][j] <= scn.gains[i][j]);
            for n in 0..sol.num_subchannels {
                interference += x(u, jj) * same_cluster * b(i, n) * b(u, n) * weaker * sol.power[u] * scn.gains[u][j];
            }
        }
    }
    let sinr = sol.power[i] * scn.gains[i][j] / (p.noise_power_w + interference);
    omega * (1.0 + sinr).log2()
}

struct TaskTerms {
    gamma_enc: f64,
    gamma_dec: f64,
    gamma_energy: f64,
    level: f64,
}

fn crypto_terms(scn: &Scenario, sol: &Solution, t: usize) -> TaskTerms {
    let mut out = TaskTerms {
        gamma_enc: 0.0,
        gamma_dec: 0.0,
        gamma_energy: 0.0,
        level: 0.0,
    };
    for q in 0..scn.num_crypto() {
        let y = ind(sol.crypto[t] == q);
        out.gamma_enc += y * scn.params.encrypt_cycles[q];
        out.gamma_dec += y * scn.params.decrypt_cycles[q];
        out.gamma_energy += y * scn.params.crypto_energy_per_bit[q];
        out.level += y * scn.params.crypto_levels[q];
    }
    out
}

fn triple(c: &agwwo_core::scenario::CodecCoeffs) -> (f64, f64, f64) {
    (c.scale, c.exponent, c.offset)
}

/// Delay, energy and breach cost of every device.
pub fn naive_evaluate(scn: &Scenario, sol: &Solution) -> NaiveReport {
    let p = &scn.params;
    let num_md = scn.num_md();
    let num_k = scn.num_tasks();
    let xi = p.codec_xi;
    let (l_loc, l_bar, l_hat) = (triple(&p.md_compress), triple(&p.bs_compress), triple(&p.bs_decompress));
    let x = |u: usize, j: usize| ind(sol.assoc[u] == j);

    // Per-task workloads at the small cell and at the macro cell (both origins).
    let a_sbs = |u: usize, k: usize| {
        let t = k * num_md + u;
        let c = scn.tasks[t].cycles_per_bit;
        let (d1, d2, z1, z2) = (sol.d_first[t], sol.d_second[t], sol.z_first[t], sol.z_second[t]);
        let cr = crypto_terms(scn, sol, t);
        (d1 - d2) * c
            + codec(xi, d1, z1, l_hat)
            + codec(xi, d2, z2, l_bar)
            + cr.gamma_dec * d1 / z1
            + cr.gamma_enc * d2 / z2
    };
    let a_mbs_md = |u: usize, k: usize| {
        let t = k * num_md + u;
        let c = scn.tasks[t].cycles_per_bit;
        let (d1, z1) = (sol.d_first[t], sol.z_first[t]);
        let cr = crypto_terms(scn, sol, t);
        d1 * c + cr.gamma_dec * d1 / z1 + codec(xi, d1, z1, l_hat)
    };
    let a_mbs_sbs = |u: usize, k: usize| {
        let t = k * num_md + u;
        let c = scn.tasks[t].cycles_per_bit;
        let (d2, z2) = (sol.d_second[t], sol.z_second[t]);
        let cr = crypto_terms(scn, sol, t);
        d2 * c + cr.gamma_dec * d2 / z2 + codec(xi, d2, z2, l_hat)
    };

    let mut sbs_den = vec![0.0; scn.num_bs()];
    let mut mbs_den = 0.0;
    for u in 0..num_md {
        for k in 0..num_k {
            for j in 1..scn.num_bs() {
                sbs_den[j] += x(u, j) * a_sbs(u, k);
                mbs_den += x(u, j) * a_mbs_sbs(u, k);
            }
            mbs_den += x(u, 0) * a_mbs_md(u, k);
        }
    }

    let mut delay = vec![0.0; num_md];
    let mut energy = vec![0.0; num_md];
    let mut psi = vec![0.0; num_md];
    let mut local_energy = 0.0;
    for i in 0..num_md {
        let r = naive_rate(scn, sol, i);
        let f = scn.devices[i].cpu_hz;
        let pw = sol.power[i];
        for k in 0..num_k {
            let t = k * num_md + i;
            let task = &scn.tasks[t];
            let (d, c) = (task.size_bits, task.cycles_per_bit);
            let (d1, d2, z1, z2) = (sol.d_first[t], sol.d_second[t], sol.z_first[t], sol.z_second[t]);
            let cr = crypto_terms(scn, sol, t);
            let c_loc = codec(xi, d1, z1, l_loc);

            let t_loc = (d - d1) * c / f + c_loc / f + cr.gamma_enc * d1 / (z1 * f);
            let e_loc = p.switched_capacitance * (d - d1) * c * f * f
                + p.switched_capacitance * c_loc * f * f
                + pw * d1 / (z1 * r)
                + cr.gamma_energy * d1 / z1;

            // Macro-cell path.
            let f_hat_md = a_mbs_md(i, k) * p.mbs_cpu_hz / mbs_den;
            let dec_md = codec(xi, d1, z1, l_hat);
            let t_mbs = d1 / (z1 * r) + dec_md / f_hat_md + d1 * c / f_hat_md + cr.gamma_dec * d1 / (z1 * f_hat_md);
            let e_mbs = p.bs_energy_per_cycle_j * dec_md + p.bs_energy_per_cycle_j * d1 * c + cr.gamma_energy * d1 / z1;

            // Small-cell path.
            let mut t_sbs = 0.0;
            let mut e_sbs = 0.0;
            for j in 1..scn.num_bs() {
                if x(i, j) == 0.0 {
                    continue;
                }
                let f_bar = a_sbs(i, k) * p.sbs_cpu_hz / sbs_den[j];
                let f_hat = a_mbs_sbs(i, k) * p.mbs_cpu_hz / mbs_den;
                let dec_s = codec(xi, d1, z1, l_hat);
                let comp_s = codec(xi, d2, z2, l_bar);
                let dec_m = codec(xi, d2, z2, l_hat);
                let rb = p.backhaul_rate_bps;
                t_sbs = d1 / (z1 * r)
                    + d2 / (z2 * rb)
                    + dec_s / f_bar
                    + comp_s / f_bar
                    + dec_m / f_hat
                    + cr.gamma_dec * d1 / (z1 * f_bar)
                    + cr.gamma_enc * d2 / (z2 * f_bar)
                    + cr.gamma_dec * d2 / (z2 * f_hat)
                    + (d1 - d2) * c / f_bar
                    + d2 * c / f_hat;
                let xh = p.bs_energy_per_cycle_j;
                e_sbs = p.wired_power_w * d2 / (z2 * rb)
                    + xh * dec_s
                    + xh * comp_s
                    + xh * dec_m
                    + cr.gamma_energy * d1 / z1
                    + 2.0 * cr.gamma_energy * d2 / z2
                    + xh * (d1 - d2) * c
                    + xh * d2 * c;
            }
            let t_path = x(i, 0) * t_mbs + (1.0 - x(i, 0)) * t_sbs;
            let e_path = x(i, 0) * e_mbs + (1.0 - x(i, 0)) * e_sbs;
            delay[i] += if t_loc > t_path { t_loc } else { t_path };
            energy[i] += e_loc + e_path;
            local_energy += e_loc;

            let prob = if cr.level < task.expected_level {
                1.0 - (-task.risk * (task.expected_level - cr.level)).exp()
            } else {
                0.0
            };
            psi[i] += task.loss * prob;
        }
    }
    NaiveReport {
        network_energy: energy.iter().sum(),
        local_energy,
        delay,
        energy,
        psi,
    }
}

pub fn naive_fitness(scn: &Scenario, r: &NaiveReport, alpha: f64, beta: f64) -> f64 {
    let mut f = -r.network_energy;
    for (i, dev) in scn.devices.iter().enumerate() {
        f -= alpha * (r.delay[i] - dev.deadline_s).max(0.0);
        f -= beta * (r.psi[i] - dev.breach_budget).max(0.0);
    }
    f
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        ((a - b) / b).abs()
    }
}

/// Random structurally valid solutions drawn through the public encoding.
pub fn random_solutions(scn: &Scenario, n: usize, seed: u64) -> Vec<Solution> {
    let bounds = Bounds::new(scn).unwrap();
    let mut rng = stream(seed, Stream::Init);
    (0..n).map(|_| init_wave(&bounds, 1, &mut rng).decode()).collect()
}

/// Two devices, one small cell, one task each, two algorithms, two subchannels.
pub fn tiny_params() -> ScenarioParams {
    let d = ScenarioParams::default();
    ScenarioParams {
        num_md: 2,
        num_sbs: 1,
        num_tasks: 1,
        num_clusters: 1,
        max_subchannels: 2,
        encrypt_cycles: d.encrypt_cycles[4..].to_vec(),
        decrypt_cycles: d.decrypt_cycles[4..].to_vec(),
        crypto_energy_per_bit: d.crypto_energy_per_bit[4..].to_vec(),
        crypto_levels: d.crypto_levels[4..].to_vec(),
        ..d
    }
}

pub fn tiny_scenario(seed: u64) -> Scenario {
    build_scenario(&tiny_params(), seed).unwrap()
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Per-device continuous choice: (z1, z2, d1, d2).
#[derive(Clone, Copy)]
struct Opt {
    z1: f64,
    z2: f64,
    d1: f64,
    d2: f64,
}

/// Exhaustive search over every discrete choice and a `points`-per-gene
/// grid of each continuous gene (`d2` on `[epsilon, d1]`).
///
/// Genes that cannot affect the objective are not enumerated: channel
/// index, `z2` and `d2` of a device served by the macro cell, and the
/// subchannel count when no device uses a small cell. Energy splits into
/// per-device terms once rates are fixed, so for each (discrete, band
/// split, powers) combination the pairs of per-device options are visited
/// best-first by energy until the first pair meeting every deadline and
/// budget; any later pair has higher energy and cannot have higher fitness.
/// Every visited pair is scored exactly with the naive evaluator.
pub fn grid_optimum(scn: &Scenario, points: usize, alpha: f64, beta: f64) -> (Solution, f64) {
    assert_eq!(scn.num_md(), 2);
    assert_eq!(scn.num_tasks(), 1);
    let p = &scn.params;
    let mus = linspace(p.epsilon, p.one_minus, points);
    let powers: Vec<Vec<f64>> = scn
        .devices
        .iter()
        .map(|d| linspace(p.epsilon, d.max_power_w, points))
        .collect();
    let z1s = linspace(p.z_first.min, p.z_first.max, points);
    let z2s = linspace(p.z_second.min, p.z_second.max, points);
    let num_bs = scn.num_bs();
    let q = scn.num_crypto();

    let options = |i: usize, on_mbs: bool| -> Vec<Opt> {
        let size = scn.tasks[i].size_bits;
        let mut out = Vec::new();
        for &z1 in &z1s {
            for &d1 in &linspace(p.epsilon, size, points) {
                if on_mbs {
                    out.push(Opt {
                        z1,
                        z2: z2s[0],
                        d1,
                        d2: p.epsilon,
                    });
                    continue;
                }
                for &z2 in &z2s {
                    for &d2 in &linspace(p.epsilon, d1, points) {
                        out.push(Opt { z1, z2, d1, d2 });
                    }
                }
            }
        }
        out
    };

    let mut best: Option<(Solution, f64)> = None;
    for a0 in 0..num_bs {
        for a1 in 0..num_bs {
            let assoc = vec![a0, a1];
            let sbs_users: Vec<usize> = (0..2).filter(|&i| assoc[i] != 0).collect();
            let mut layouts: Vec<(usize, Vec<usize>)> = Vec::new();
            if sbs_users.is_empty() {
                layouts.push((1, vec![0, 0]));
            } else {
                for n in 1..=p.max_subchannels {
                    let mut chans = vec![vec![0usize, 0usize]];
                    for &i in &sbs_users {
                        chans = chans
                            .into_iter()
                            .flat_map(|c| {
                                (0..n).map(move |ch| {
                                    let mut c = c.clone();
                                    c[i] = ch;
                                    c
                                })
                            })
                            .collect();
                    }
                    layouts.extend(chans.into_iter().map(|c| (n, c)));
                }
            }
            let opts: Vec<Vec<Opt>> = (0..2).map(|i| options(i, assoc[i] == 0)).collect();
            for y0 in 0..q {
                for y1 in 0..q {
                    for (n_sub, chan) in &layouts {
                        for &mu in &mus {
                            for &p0 in &powers[0] {
                                for &p1 in &powers[1] {
                                    let base = Solution {
                                        mu,
                                        num_subchannels: *n_sub,
                                        power: vec![p0, p1],
                                        assoc: assoc.clone(),
                                        crypto: vec![y0, y1],
                                        chan: chan.clone(),
                                        z_first: vec![0.0; 2],
                                        z_second: vec![0.0; 2],
                                        d_first: vec![0.0; 2],
                                        d_second: vec![0.0; 2],
                                    };
                                    let floor = best.as_ref().map_or(f64::NEG_INFINITY, |b| b.1);
                                    if let Some(cand) = best_pair(scn, &base, &opts, alpha, beta, floor) {
                                        best = Some(cand);
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    best.unwrap()
}

fn with_opts(base: &Solution, o0: Opt, o1: Opt) -> Solution {
    let mut s = base.clone();
    s.z_first = vec![o0.z1, o1.z1];
    s.z_second = vec![o0.z2, o1.z2];
    s.d_first = vec![o0.d1, o1.d1];
    s.d_second = vec![o0.d2, o1.d2];
    s
}

/// Device energy alone, which does not depend on the other device once
/// rates are fixed.
fn device_energies(scn: &Scenario, base: &Solution, opts: &[Vec<Opt>], i: usize) -> Vec<f64> {
    let other = opts[1 - i][0];
    opts[i]
        .iter()
        .map(|&o| {
            let s = if i == 0 {
                with_opts(base, o, other)
            } else {
                with_opts(base, other, o)
            };
            naive_evaluate(scn, &s).energy[i]
        })
        .collect()
}

/// Best pair beating `floor`, visiting pairs in increasing energy. The
/// breach penalty depends only on the crypto choice, so `-energy - breach`
/// bounds every pair not yet visited.
fn best_pair(
    scn: &Scenario,
    base: &Solution,
    opts: &[Vec<Opt>],
    alpha: f64,
    beta: f64,
    floor: f64,
) -> Option<(Solution, f64)> {
    let e0 = device_energies(scn, base, opts, 0);
    let e1 = device_energies(scn, base, opts, 1);
    let order = |e: &[f64]| {
        let mut idx: Vec<usize> = (0..e.len()).collect();
        idx.sort_by(|&a, &b| e[a].total_cmp(&e[b]));
        idx
    };
    let (o0, o1) = (order(&e0), order(&e1));
    let key = |a: usize, b: usize| e0[o0[a]] + e1[o1[b]];

    let mut heap = BinaryHeap::new();
    let mut seen = std::collections::HashSet::new();
    heap.push(Reverse((Ordered(key(0, 0)), 0usize, 0usize)));
    seen.insert((0, 0));
    let psi = naive_evaluate(scn, &with_opts(base, opts[0][0], opts[1][0])).psi;
    let breach: f64 = scn
        .devices
        .iter()
        .zip(&psi)
        .map(|(dev, p)| beta * (p - dev.breach_budget).max(0.0))
        .sum();
    let mut floor = floor;
    let mut best: Option<(Solution, f64)> = None;
    while let Some(Reverse((Ordered(energy), a, b))) = heap.pop() {
        if -energy - breach <= floor {
            break;
        }
        let s = with_opts(base, opts[0][o0[a]], opts[1][o1[b]]);
        let r = naive_evaluate(scn, &s);
        let f = naive_fitness(scn, &r, alpha, beta);
        if f > floor {
            floor = f;
            best = Some((s, f));
        }
        for (na, nb) in [(a + 1, b), (a, b + 1)] {
            if na < o0.len() && nb < o1.len() && seen.insert((na, nb)) {
                heap.push(Reverse((Ordered(key(na, nb)), na, nb)));
            }
        }
    }
    best
}

#[derive(PartialEq, Clone, Copy)]
struct Ordered(f64);

impl Eq for Ordered {}

impl PartialOrd for Ordered {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ordered {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}
