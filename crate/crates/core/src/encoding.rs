//! Wave representation of a candidate solution, bounds, initialization,
//! repair and decoding.
//!
//! Every gene is stored as `f64`; integer groups hold whole numbers in
//! their one-based domains (`x == 1` is the macro cell, `y` and `b` count
//! from 1).

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{Range, Scenario};
use crate::sysmodel::Solution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GeneGroup {
    Mu,
    NumSub,
    Assoc,
    Crypto,
    Power,
    ZFirst,
    ZSecond,
    Channel,
    DFirst,
    DSecond,
}

impl GeneGroup {
    pub const ALL: [GeneGroup; 10] = [
        GeneGroup::Mu,
        GeneGroup::NumSub,
        GeneGroup::Assoc,
        GeneGroup::Crypto,
        GeneGroup::Power,
        GeneGroup::ZFirst,
        GeneGroup::ZSecond,
        GeneGroup::Channel,
        GeneGroup::DFirst,
        GeneGroup::DSecond,
    ];

    pub fn is_integer(self) -> bool {
        matches!(
            self,
            GeneGroup::NumSub | GeneGroup::Assoc | GeneGroup::Crypto | GeneGroup::Channel
        )
    }

    /// Groups whose mutation low branch shrinks toward zero rather than the bound.
    pub fn shrinks_to_zero(self) -> bool {
        matches!(self, GeneGroup::DFirst | GeneGroup::DSecond)
    }
}

/// One candidate solution plus its height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Wave {
    pub mu: f64,
    pub n_sub: f64,
    pub p: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub z1: Vec<f64>,
    pub z2: Vec<f64>,
    pub b: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub height: u32,
}

impl Wave {
    pub fn group(&self, g: GeneGroup) -> &[f64] {
        match g {
            GeneGroup::Mu => std::slice::from_ref(&self.mu),
            GeneGroup::NumSub => std::slice::from_ref(&self.n_sub),
            GeneGroup::Assoc => &self.x,
            GeneGroup::Crypto => &self.y,
            GeneGroup::Power => &self.p,
            GeneGroup::ZFirst => &self.z1,
            GeneGroup::ZSecond => &self.z2,
            GeneGroup::Channel => &self.b,
            GeneGroup::DFirst => &self.d1,
            GeneGroup::DSecond => &self.d2,
        }
    }

    pub fn group_mut(&mut self, g: GeneGroup) -> &mut [f64] {
        match g {
            GeneGroup::Mu => std::slice::from_mut(&mut self.mu),
            GeneGroup::NumSub => std::slice::from_mut(&mut self.n_sub),
            GeneGroup::Assoc => &mut self.x,
            GeneGroup::Crypto => &mut self.y,
            GeneGroup::Power => &mut self.p,
            GeneGroup::ZFirst => &mut self.z1,
            GeneGroup::ZSecond => &mut self.z2,
            GeneGroup::Channel => &mut self.b,
            GeneGroup::DFirst => &mut self.d1,
            GeneGroup::DSecond => &mut self.d2,
        }
    }

    /// Same genes, ignoring height.
    pub fn same_position(&self, other: &Wave) -> bool {
        GeneGroup::ALL.iter().all(|&g| self.group(g) == other.group(g))
    }

    /// Encodes a decoded solution back into gene space.
    pub fn from_solution(sol: &Solution, height: u32) -> Wave {
        let one_based = |v: &[usize]| v.iter().map(|&i| (i + 1) as f64).collect();
        Wave {
            mu: sol.mu,
            n_sub: sol.num_subchannels as f64,
            p: sol.power.clone(),
            x: one_based(&sol.assoc),
            y: one_based(&sol.crypto),
            z1: sol.z_first.clone(),
            z2: sol.z_second.clone(),
            b: one_based(&sol.chan),
            d1: sol.d_first.clone(),
            d2: sol.d_second.clone(),
            height,
        }
    }

    /// Decodes a repaired wave. Integer genes are truncated to indices, so
    /// callers should repair first.
    pub fn decode(&self) -> Solution {
        let zero_based = |v: &[f64]| v.iter().map(|&g| (g as usize).saturating_sub(1)).collect();
        Solution {
            mu: self.mu,
            num_subchannels: self.n_sub as usize,
            power: self.p.clone(),
            assoc: zero_based(&self.x),
            crypto: zero_based(&self.y),
            chan: zero_based(&self.b),
            z_first: self.z1.clone(),
            z_second: self.z2.clone(),
            d_first: self.d1.clone(),
            d_second: self.d2.clone(),
        }
    }
}

/// Maps a one-based linear index over (device, task) cells to one-based
/// `(u, k)` in column-major order.
pub fn virtual_index(i: usize, num_md: usize, num_tasks: usize) -> Result<(usize, usize)> {
    if i == 0 || i > num_md * num_tasks {
        return Err(Error::contract(format!(
            "virtual index {i} outside 1..={}",
            num_md * num_tasks
        )));
    }
    Ok(((i - 1) % num_md + 1, (i - 1) / num_md + 1))
}

/// Per-gene feasible box, derived from a scenario.
#[derive(Debug, Clone)]
pub struct Bounds {
    epsilon: f64,
    one_minus: f64,
    max_subchannels: f64,
    num_bs: f64,
    num_crypto: f64,
    z_first: Range,
    z_second: Range,
    max_power: Vec<f64>,
    task_size: Vec<f64>,
    diagonals: [f64; 10],
}

impl Bounds {
    pub fn new(scn: &Scenario) -> Result<Bounds> {
        let p = &scn.params;
        let mut b = Bounds {
            epsilon: p.epsilon,
            one_minus: p.one_minus,
            max_subchannels: p.max_subchannels as f64,
            num_bs: scn.num_bs() as f64,
            num_crypto: scn.num_crypto() as f64,
            z_first: p.z_first,
            z_second: p.z_second,
            max_power: scn.devices.iter().map(|d| d.max_power_w).collect(),
            task_size: scn.tasks.iter().map(|t| t.size_bits).collect(),
            diagonals: [0.0; 10],
        };
        for (slot, g) in GeneGroup::ALL.into_iter().enumerate() {
            let n = b.len(g);
            let sq: f64 = (0..n)
                .map(|i| {
                    let w = b.static_upper(g, i) - b.lower(g, i);
                    w * w
                })
                .sum();
            if !(sq > 0.0 && sq.is_finite()) {
                return Err(Error::config(format!("gene group {g:?} has an empty range")));
            }
            b.diagonals[slot] = sq.sqrt();
        }
        Ok(b)
    }

    pub fn num_md(&self) -> usize {
        self.max_power.len()
    }

    pub fn num_cells(&self) -> usize {
        self.task_size.len()
    }

    pub fn len(&self, g: GeneGroup) -> usize {
        match g {
            GeneGroup::Mu | GeneGroup::NumSub => 1,
            GeneGroup::Assoc | GeneGroup::Power | GeneGroup::Channel => self.num_md(),
            _ => self.num_cells(),
        }
    }

    pub fn lower(&self, g: GeneGroup, i: usize) -> f64 {
        match g {
            GeneGroup::Mu | GeneGroup::Power | GeneGroup::DFirst | GeneGroup::DSecond => self.epsilon,
            GeneGroup::NumSub | GeneGroup::Assoc | GeneGroup::Crypto | GeneGroup::Channel => 1.0,
            GeneGroup::ZFirst => self.z_first.min,
            GeneGroup::ZSecond => self.z_second.min,
        }
        .min(self.static_upper(g, i))
    }

    /// Upper bound ignoring intra-wave coupling (`b <= N`, `d2 <= d1`).
    pub fn static_upper(&self, g: GeneGroup, i: usize) -> f64 {
        match g {
            GeneGroup::Mu => self.one_minus,
            GeneGroup::NumSub | GeneGroup::Channel => self.max_subchannels,
            GeneGroup::Assoc => self.num_bs,
            GeneGroup::Crypto => self.num_crypto,
            GeneGroup::Power => self.max_power[i],
            GeneGroup::ZFirst => self.z_first.max,
            GeneGroup::ZSecond => self.z_second.max,
            GeneGroup::DFirst | GeneGroup::DSecond => self.task_size[i],
        }
    }

    /// Upper bound of gene `i` of group `g` inside `wave`.
    pub fn upper(&self, g: GeneGroup, i: usize, wave: &Wave) -> f64 {
        match g {
            GeneGroup::Channel => wave.n_sub.clamp(1.0, self.max_subchannels),
            GeneGroup::DSecond => wave.d1[i].min(self.task_size[i]),
            _ => self.static_upper(g, i),
        }
    }

    /// Length of the diagonal of the group's static box.
    pub fn diagonal(&self, g: GeneGroup) -> f64 {
        self.diagonals[GeneGroup::ALL.iter().position(|&h| h == g).unwrap()]
    }

    /// Scale of a breaking perturbation around `best`.
    pub fn break_width(&self, g: GeneGroup, i: usize, best: &Wave) -> f64 {
        match g {
            GeneGroup::Channel => best.n_sub - 1.0,
            GeneGroup::DFirst => self.task_size[i],
            GeneGroup::DSecond => best.d1[i],
            _ => self.static_upper(g, i) - self.lower(g, i),
        }
    }
}

/// Uniform random wave with height `height`.
pub fn init_wave<R: Rng + ?Sized>(bounds: &Bounds, height: u32, rng: &mut R) -> Wave {
    let cont = |rng: &mut R, g: GeneGroup, i: usize| {
        let (lo, hi) = (bounds.lower(g, i), bounds.static_upper(g, i));
        lo + (hi - lo) * rng.random::<f64>()
    };
    let int = |rng: &mut R, hi: f64| rng.random_range(1..=hi as u64) as f64;
    let (md, cells) = (bounds.num_md(), bounds.num_cells());

    let mu = cont(rng, GeneGroup::Mu, 0);
    let n_sub = int(rng, bounds.max_subchannels);
    let p = (0..md).map(|i| cont(rng, GeneGroup::Power, i)).collect();
    let x = (0..md).map(|_| int(rng, bounds.num_bs)).collect();
    let y = (0..cells).map(|_| int(rng, bounds.num_crypto)).collect();
    let z1 = (0..cells).map(|i| cont(rng, GeneGroup::ZFirst, i)).collect();
    let z2 = (0..cells).map(|i| cont(rng, GeneGroup::ZSecond, i)).collect();
    let b = (0..md).map(|_| int(rng, n_sub)).collect();
    let d1: Vec<f64> = (0..cells).map(|i| cont(rng, GeneGroup::DFirst, i)).collect();
    let d2 = d1
        .iter()
        .map(|&top| (top * rng.random::<f64>()).max(bounds.epsilon))
        .collect();
    Wave {
        mu,
        n_sub,
        p,
        x,
        y,
        z1,
        z2,
        b,
        d1,
        d2,
        height,
    }
}

/// Clamps every gene into its box and rounds integer genes. The number of
/// subchannels and `d1` are fixed before the genes bounded by them.
pub fn repair_wave(wave: &mut Wave, bounds: &Bounds) {
    let order = [
        GeneGroup::Mu,
        GeneGroup::NumSub,
        GeneGroup::Assoc,
        GeneGroup::Crypto,
        GeneGroup::Power,
        GeneGroup::ZFirst,
        GeneGroup::ZSecond,
        GeneGroup::DFirst,
        GeneGroup::Channel,
        GeneGroup::DSecond,
    ];
    for g in order {
        for i in 0..bounds.len(g) {
            let lo = bounds.lower(g, i);
            let hi = bounds.upper(g, i, wave);
            let v = wave.group(g)[i];
            let v = if v.is_nan() {
                lo
            } else if g.is_integer() {
                v.round()
            } else {
                v
            };
            wave.group_mut(g)[i] = v.clamp(lo, hi.max(lo));
        }
    }
}

/// Repairs a copy of `wave`.
pub fn repaired(mut wave: Wave, bounds: &Bounds) -> Wave {
    repair_wave(&mut wave, bounds);
    wave
}
