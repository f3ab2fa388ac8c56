//! Reproducible network instances: one macro base station (index 0), a set
//! of small base stations (indices `1..=num_sbs`) grouped into clusters, and
//! mobile devices each carrying `num_tasks` computation tasks.
//!
//! All quantities are SI (bits, Hz, s, W, J, cycles). Distances are km.

mod kmeans;

pub use kmeans::{cluster_sbs, lloyd};

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{self, Stream};

/// Closed interval used for uniformly drawn parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Range {
    pub min: f64,
    pub max: f64,
}

impl Range {
    pub const fn new(min: f64, max: f64) -> Self {
        Range { min, max }
    }

    pub fn width(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, v: f64) -> bool {
        v >= self.min && v <= self.max
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.min == self.max {
            self.min
        } else {
            rng.random_range(self.min..=self.max)
        }
    }

    fn check(&self, name: &str) -> Result<()> {
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::config(format!(
                "{name}: inverted or non-finite range [{}, {}]",
                self.min, self.max
            )));
        }
        Ok(())
    }
}

/// Coefficients `(scale, exponent, offset)` of the per-bit codec cost
/// `scale * ratio^exponent + offset`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CodecCoeffs {
    pub scale: f64,
    pub exponent: f64,
    pub offset: f64,
}

impl CodecCoeffs {
    pub const fn new(scale: f64, exponent: f64, offset: f64) -> Self {
        CodecCoeffs {
            scale,
            exponent,
            offset,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CryptoAlgorithm {
    /// Cycles per bit to encrypt.
    pub encrypt_cycles: f64,
    /// Cycles per bit to decrypt.
    pub decrypt_cycles: f64,
    /// Joules per bit for either direction.
    pub energy_per_bit: f64,
    /// Protection level; tasks expecting a level at or below this are safe.
    pub level: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioParams {
    pub macrocell_radius_km: f64,
    /// Distances below this are raised to it before evaluating pathloss.
    pub min_distance_km: f64,
    pub num_sbs: usize,
    pub num_md: usize,
    pub num_tasks: usize,
    pub num_clusters: usize,
    pub max_subchannels: usize,
    pub system_bandwidth_hz: f64,
    pub noise_power_w: f64,
    pub backhaul_rate_bps: f64,
    pub wired_power_w: f64,
    pub md_max_power_w: f64,
    pub md_cpu_hz: f64,
    pub sbs_cpu_hz: f64,
    pub mbs_cpu_hz: f64,
    /// Energy per CPU cycle at any base station.
    pub bs_energy_per_cycle_j: f64,
    pub switched_capacitance: f64,
    pub codec_xi: f64,
    pub md_compress: CodecCoeffs,
    pub bs_compress: CodecCoeffs,
    pub bs_decompress: CodecCoeffs,
    pub z_first: Range,
    pub z_second: Range,
    pub task_size_bits: Range,
    pub cycles_per_bit: Range,
    pub deadline_s: Range,
    pub breach_loss: Range,
    pub breach_budget: Range,
    pub risk_coeff: Range,
    /// Expected security levels; each task draws one uniformly.
    pub expected_levels: Vec<f64>,
    pub encrypt_cycles: Vec<f64>,
    pub decrypt_cycles: Vec<f64>,
    pub crypto_energy_per_bit: Vec<f64>,
    pub crypto_levels: Vec<f64>,
    pub shadowing_std_db: f64,
    /// Lower clamp for quantities that must stay strictly positive.
    pub epsilon: f64,
    /// Upper clamp for the band-partitioning factor.
    pub one_minus: f64,
}

pub const KB_BITS: f64 = 8.0 * 1024.0;

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0) * 1e-3
}

impl Default for ScenarioParams {
    fn default() -> Self {
        ScenarioParams {
            macrocell_radius_km: 0.5,
            min_distance_km: 0.01,
            num_sbs: 20,
            num_md: 20,
            num_tasks: 3,
            num_clusters: 6,
            max_subchannels: 5,
            system_bandwidth_hz: 20e6,
            // 1e-11 mW
            noise_power_w: 1e-14,
            backhaul_rate_bps: 1e9,
            wired_power_w: 1e-3,
            md_max_power_w: dbm_to_watts(23.0),
            md_cpu_hz: 1e9,
            sbs_cpu_hz: 20e9,
            mbs_cpu_hz: 20e9,
            // 1 W/GHz
            bs_energy_per_cycle_j: 1e-9,
            switched_capacitance: 1e-25,
            codec_xi: 50.0,
            md_compress: CodecCoeffs::new(1.027e-15, 32.28, 0.3),
            bs_compress: CodecCoeffs::new(0.076, 0.7116, 0.5794),
            bs_decompress: CodecCoeffs::new(0.115, -0.9179, 0.046),
            z_first: Range::new(2.3, 2.9),
            z_second: Range::new(3.4, 11.2),
            task_size_bits: Range::new(200.0 * KB_BITS, 500.0 * KB_BITS),
            cycles_per_bit: Range::new(50.0, 100.0),
            deadline_s: Range::new(5.0, 10.0),
            breach_loss: Range::new(1000.0, 5000.0),
            breach_budget: Range::new(5000.0, 10000.0),
            risk_coeff: Range::new(1.0, 3.0),
            expected_levels: vec![5.0, 6.0],
            encrypt_cycles: vec![100.0, 200.0, 250.0, 300.0, 350.0, 1050.0],
            decrypt_cycles: vec![90.0, 280.0, 350.0, 300.0, 400.0, 1700.0],
            crypto_energy_per_bit: [2.5296, 5.0425, 6.837, 7.8528, 8.7073, 26.3643]
                .iter()
                .map(|v| v * 1e-7)
                .collect(),
            crypto_levels: vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0],
            shadowing_std_db: 8.0,
            epsilon: 1e-6,
            one_minus: 1.0 - 1e-6,
        }
    }
}

impl ScenarioParams {
    pub fn num_crypto(&self) -> usize {
        self.crypto_levels.len()
    }

    pub fn validate(&self) -> Result<()> {
        let counts = [
            ("num_sbs", self.num_sbs),
            ("num_md", self.num_md),
            ("num_tasks", self.num_tasks),
            ("num_clusters", self.num_clusters),
            ("max_subchannels", self.max_subchannels),
            ("num_crypto", self.num_crypto()),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::config(format!("{name} must be at least 1")));
            }
        }
        if self.num_sbs < self.num_clusters {
            return Err(Error::config(format!(
                "num_sbs ({}) smaller than num_clusters ({})",
                self.num_sbs, self.num_clusters
            )));
        }
        let positives = [
            ("macrocell_radius_km", self.macrocell_radius_km),
            ("min_distance_km", self.min_distance_km),
            ("system_bandwidth_hz", self.system_bandwidth_hz),
            ("noise_power_w", self.noise_power_w),
            ("backhaul_rate_bps", self.backhaul_rate_bps),
            ("md_max_power_w", self.md_max_power_w),
            ("md_cpu_hz", self.md_cpu_hz),
            ("sbs_cpu_hz", self.sbs_cpu_hz),
            ("mbs_cpu_hz", self.mbs_cpu_hz),
        ];
        for (name, v) in positives {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be positive, got {v}")));
            }
        }
        let nonneg = [
            ("wired_power_w", self.wired_power_w),
            ("bs_energy_per_cycle_j", self.bs_energy_per_cycle_j),
            ("switched_capacitance", self.switched_capacitance),
            ("codec_xi", self.codec_xi),
            ("shadowing_std_db", self.shadowing_std_db),
        ];
        for (name, v) in nonneg {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::config(format!("{name} must be non-negative, got {v}")));
            }
        }
        for (name, r) in [
            ("z_first", self.z_first),
            ("z_second", self.z_second),
            ("task_size_bits", self.task_size_bits),
            ("cycles_per_bit", self.cycles_per_bit),
            ("deadline_s", self.deadline_s),
            ("breach_loss", self.breach_loss),
            ("breach_budget", self.breach_budget),
            ("risk_coeff", self.risk_coeff),
        ] {
            r.check(name)?;
        }
        if self.z_first.min >= self.z_first.max || self.z_second.min >= self.z_second.max {
            return Err(Error::config("compression-ratio bounds need min < max"));
        }
        if self.z_first.min <= 0.0 || self.z_second.min <= 0.0 {
            return Err(Error::config("compression ratios must be positive"));
        }
        if self.task_size_bits.min <= self.epsilon {
            return Err(Error::config("task sizes must exceed epsilon"));
        }
        if self.risk_coeff.min <= 0.0 {
            return Err(Error::config("risk coefficients must be positive"));
        }
        if self.expected_levels.is_empty() {
            return Err(Error::config("expected_levels must not be empty"));
        }
        let q = self.num_crypto();
        if self.encrypt_cycles.len() != q || self.decrypt_cycles.len() != q || self.crypto_energy_per_bit.len() != q {
            return Err(Error::config(
                "encrypt_cycles, decrypt_cycles, crypto_energy_per_bit and crypto_levels must have equal length",
            ));
        }
        if !(0.0 < self.epsilon && self.epsilon < self.one_minus && self.one_minus < 1.0) {
            return Err(Error::config("need 0 < epsilon < one_minus < 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Task {
    pub size_bits: f64,
    pub cycles_per_bit: f64,
    pub expected_level: f64,
    pub risk: f64,
    pub loss: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Device {
    pub deadline_s: f64,
    pub breach_budget: f64,
    pub cpu_hz: f64,
    pub max_power_w: f64,
}

/// Immutable network instance.
///
/// Per-task data is laid out column-major: task `k` of device `i` lives at
/// `k * num_md + i`, matching the virtual-device order of the encoding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub params: ScenarioParams,
    pub md_positions: Vec<Point>,
    /// Index 0 is the macro base station.
    pub bs_positions: Vec<Point>,
    /// `gains[i][j]`: linear channel gain between device `i` and station `j`.
    pub gains: Vec<Vec<f64>>,
    /// `cluster_of_sbs[j - 1]`: zero-based cluster of small cell `j`.
    pub cluster_of_sbs: Vec<usize>,
    pub tasks: Vec<Task>,
    pub devices: Vec<Device>,
    pub crypto: Vec<CryptoAlgorithm>,
}

impl Scenario {
    pub fn num_md(&self) -> usize {
        self.devices.len()
    }

    pub fn num_sbs(&self) -> usize {
        self.bs_positions.len() - 1
    }

    /// Base stations including the macro cell.
    pub fn num_bs(&self) -> usize {
        self.bs_positions.len()
    }

    pub fn num_tasks(&self) -> usize {
        self.params.num_tasks
    }

    pub fn num_crypto(&self) -> usize {
        self.crypto.len()
    }

    pub fn task_index(&self, md: usize, k: usize) -> usize {
        k * self.num_md() + md
    }

    pub fn task(&self, md: usize, k: usize) -> &Task {
        &self.tasks[self.task_index(md, k)]
    }

    /// Cluster of base station `bs`; `None` for the macro cell.
    pub fn cluster_of(&self, bs: usize) -> Option<usize> {
        if bs == 0 {
            None
        } else {
            Some(self.cluster_of_sbs[bs - 1])
        }
    }

    pub fn bs_cpu_hz(&self, bs: usize) -> f64 {
        if bs == 0 {
            self.params.mbs_cpu_hz
        } else {
            self.params.sbs_cpu_hz
        }
    }

    /// Structured text snapshot (JSON) for replay.
    pub fn to_snapshot(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let scn: Scenario = serde_json::from_str(text)?;
        scn.params.validate()?;
        Ok(scn)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Macro,
    Small,
}

/// Linear channel gain from the standard km-domain pathloss models plus a
/// log-normal shadowing term given in dB.
pub fn pathloss_gain(distance_km: f64, tier: Tier, shadow_db: f64) -> Result<f64> {
    if !(distance_km > 0.0 && distance_km.is_finite()) {
        return Err(Error::domain(format!(
            "pathloss distance must be positive, got {distance_km}"
        )));
    }
    let pl_db = match tier {
        Tier::Macro => 128.1 + 37.6 * distance_km.log10(),
        Tier::Small => 140.7 + 36.7 * distance_km.log10(),
    };
    Ok(10f64.powf(-(pl_db + shadow_db) / 10.0))
}

fn uniform_in_disc<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Point {
    let r = radius * rng.random::<f64>().sqrt();
    let theta = std::f64::consts::TAU * rng.random::<f64>();
    Point {
        x: r * theta.cos(),
        y: r * theta.sin(),
    }
}

/// Builds a scenario as a pure function of `(params, seed)`.
///
/// Each kind of draw uses its own stream, so e.g. changing the number of
/// devices leaves the small-cell layout untouched.
pub fn build_scenario(params: &ScenarioParams, seed: u64) -> Result<Scenario> {
    params.validate()?;
    let radius = params.macrocell_radius_km;

    let mut bs_positions = Vec::with_capacity(params.num_sbs + 1);
    bs_positions.push(Point { x: 0.0, y: 0.0 });
    let mut sbs_rng = rng::stream(seed, Stream::SbsPlacement);
    for _ in 0..params.num_sbs {
        bs_positions.push(uniform_in_disc(&mut sbs_rng, radius));
    }

    let mut md_rng = rng::stream(seed, Stream::MdPlacement);
    let md_positions: Vec<Point> = (0..params.num_md)
        .map(|_| uniform_in_disc(&mut md_rng, radius))
        .collect();

    let shadow = Normal::new(0.0, params.shadowing_std_db).map_err(|e| Error::config(format!("shadowing: {e}")))?;
    let mut shadow_rng = rng::stream(seed, Stream::Shadowing);
    let mut gains = Vec::with_capacity(params.num_md);
    for md in &md_positions {
        let mut row = Vec::with_capacity(bs_positions.len());
        for (j, bs) in bs_positions.iter().enumerate() {
            let tier = if j == 0 { Tier::Macro } else { Tier::Small };
            let d = md.distance(bs).max(params.min_distance_km);
            row.push(pathloss_gain(d, tier, shadow.sample(&mut shadow_rng))?);
        }
        gains.push(row);
    }

    let mut task_rng = rng::stream(seed, Stream::Tasks);
    // Drawn device by device so that adding devices keeps earlier devices'
    // tasks; stored in the column-major task layout.
    let mut tasks = vec![None; params.num_md * params.num_tasks];
    for i in 0..params.num_md {
        for k in 0..params.num_tasks {
            let size_bits = params.task_size_bits.sample(&mut task_rng);
            let cycles_per_bit = params.cycles_per_bit.sample(&mut task_rng);
            let level_idx = task_rng.random_range(0..params.expected_levels.len());
            let risk = params.risk_coeff.sample(&mut task_rng);
            let loss = params.breach_loss.sample(&mut task_rng);
            tasks[k * params.num_md + i] = Some(Task {
                size_bits,
                cycles_per_bit,
                expected_level: params.expected_levels[level_idx],
                risk,
                loss,
            });
        }
    }
    let tasks: Vec<Task> = tasks.into_iter().flatten().collect();

    let mut dev_rng = rng::stream(seed, Stream::Devices);
    let devices = (0..params.num_md)
        .map(|_| {
            let deadline_s = params.deadline_s.sample(&mut dev_rng);
            let breach_budget = params.breach_budget.sample(&mut dev_rng);
            Device {
                deadline_s,
                breach_budget,
                cpu_hz: params.md_cpu_hz,
                max_power_w: params.md_max_power_w,
            }
        })
        .collect();

    let cluster_of_sbs = cluster_sbs(
        &bs_positions[1..],
        params.num_clusters,
        rng::derive_seed(&[seed, Stream::Clustering as u64]),
    )?;

    let crypto = (0..params.num_crypto())
        .map(|q| CryptoAlgorithm {
            encrypt_cycles: params.encrypt_cycles[q],
            decrypt_cycles: params.decrypt_cycles[q],
            energy_per_bit: params.crypto_energy_per_bit[q],
            level: params.crypto_levels[q],
        })
        .collect();

    Ok(Scenario {
        params: params.clone(),
        md_positions,
        bs_positions,
        gains,
        cluster_of_sbs,
        tasks,
        devices,
        crypto,
    })
}
