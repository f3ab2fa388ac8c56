//! AGWWO and the comparison algorithms (WWO, AGA, CMT).
//!
//! All random draws happen in the sequential control step of each
//! iteration, each purpose on its own stream. Fitness evaluation of a batch
//! runs on the ambient rayon pool and returns results in input order, so a
//! run is bit-identical for any worker count.

mod aga;
mod agwwo;
mod cmt;
pub mod operators;
mod wwo;

pub use aga::run_aga;
pub use agwwo::run_agwwo;
pub use cmt::run_cmt;
pub use wwo::run_wwo;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::encoding::{Bounds, Wave};
use crate::error::{Error, Result};
use crate::rng::{stream, Stream, StreamRng};
use crate::scenario::Scenario;
use crate::sysmodel::{evaluate_solution, fitness, EvaluationReport, Solution};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizerConfig {
    pub population: usize,
    pub iterations: usize,
    pub solitary_waves: usize,
    pub max_height: u32,
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
    pub diversity_low: f64,
    pub diversity_high: f64,
    pub u_min: f64,
    pub u_max: f64,
    /// Delay penalty factor, applied to every device.
    pub alpha: f64,
    /// Breach-cost penalty factor, applied to every device.
    pub beta: f64,
    pub wavelength_init: f64,
    pub wavelength_base: f64,
    pub wavelength_epsilon: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            population: 20,
            iterations: 200,
            solitary_waves: 5,
            max_height: 5,
            a1: 0.8,
            a2: 0.8,
            a3: 0.3,
            a4: 0.3,
            a5: 0.6,
            a6: 0.03,
            a7: 1e-5,
            diversity_low: 0.01,
            diversity_high: 0.25,
            u_min: 0.001,
            u_max: 0.25,
            alpha: 1e20,
            beta: 1e20,
            wavelength_init: 0.5,
            wavelength_base: 1.0026,
            wavelength_epsilon: 1e-31,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| (0.0..=1.0).contains(&v);
        let checks = [
            (self.population >= 1, "population must be at least 1"),
            (self.solitary_waves >= 1, "solitary_waves must be at least 1"),
            (self.max_height >= 1, "max_height must be at least 1"),
            (
                unit(self.a1) && unit(self.a2) && self.a1 <= self.a2,
                "need 0 <= a1 <= a2 <= 1",
            ),
            (
                unit(self.a3) && unit(self.a4) && self.a3 <= self.a4,
                "need 0 <= a3 <= a4 <= 1",
            ),
            (
                0.0 < self.a6 && self.a6 < self.a5 && self.a5 < 1.0,
                "need 0 < a6 < a5 < 1",
            ),
            (0.0 < self.a7 && self.a7 < 1.0, "need 0 < a7 < 1"),
            (
                0.0 < self.diversity_low && self.diversity_low < self.diversity_high && self.diversity_high < 1.0,
                "need 0 < diversity_low < diversity_high < 1",
            ),
            (0.0 < self.u_min && self.u_min < self.u_max, "need 0 < u_min < u_max"),
            (
                self.alpha >= 0.0 && self.beta >= 0.0,
                "penalty factors must be non-negative",
            ),
            (
                self.wavelength_init > 0.0 && self.wavelength_base > 0.0 && self.wavelength_epsilon > 0.0,
                "wavelength parameters must be positive",
            ),
        ];
        match checks.iter().find(|(ok, _)| !ok) {
            Some((_, msg)) => Err(Error::config(*msg)),
            None => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Agwwo,
    Wwo,
    Aga,
    Cmt,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Agwwo, Algorithm::Wwo, Algorithm::Aga, Algorithm::Cmt];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Agwwo => "agwwo",
            Algorithm::Wwo => "wwo",
            Algorithm::Aga => "aga",
            Algorithm::Cmt => "cmt",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::config(format!("unknown algorithm '{s}' (expected agwwo, wwo, aga or cmt)")))
    }
}

/// Runs `algorithm` on `scn`.
pub fn run(algorithm: Algorithm, scn: &Scenario, cfg: &OptimizerConfig, seed: u64) -> Result<RunTrace> {
    match algorithm {
        Algorithm::Agwwo => run_agwwo(scn, cfg, seed),
        Algorithm::Wwo => run_wwo(scn, cfg, seed),
        Algorithm::Aga => run_aga(scn, cfg, seed),
        Algorithm::Cmt => run_cmt(scn, cfg),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub best_fitness: f64,
    pub avg_fitness: f64,
    pub best_energy: f64,
    pub diversity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub rows: Vec<TraceRow>,
    /// `None` for CMT, which does not search.
    pub best_wave: Option<Wave>,
    pub best_solution: Option<Solution>,
    pub best_fitness: f64,
    pub report: EvaluationReport,
    pub wall_time_s: f64,
}

/// Fitness and network energy of one evaluated wave.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Score {
    pub fitness: f64,
    pub energy: f64,
}

/// A scenario plus everything needed to score waves on it.
pub struct Problem<'a> {
    pub scenario: &'a Scenario,
    pub bounds: Bounds,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl<'a> Problem<'a> {
    pub fn new(scenario: &'a Scenario, cfg: &OptimizerConfig) -> Result<Self> {
        let n = scenario.num_md();
        Ok(Problem {
            scenario,
            bounds: Bounds::new(scenario)?,
            alpha: vec![cfg.alpha; n],
            beta: vec![cfg.beta; n],
        })
    }

    pub fn evaluate(&self, wave: &Wave) -> Result<(Score, EvaluationReport)> {
        let report = evaluate_solution(self.scenario, &wave.decode())?;
        let score = Score {
            fitness: fitness(&report, &self.alpha, &self.beta),
            energy: report.network_energy,
        };
        Ok((score, report))
    }

    pub fn score(&self, wave: &Wave) -> Result<Score> {
        self.evaluate(wave).map(|(s, _)| s)
    }

    /// Scores a batch in parallel; output order matches input order.
    pub fn score_all(&self, waves: &[Wave]) -> Result<Vec<Score>> {
        waves.par_iter().map(|w| self.score(w)).collect()
    }

    pub fn fitness_of_report(&self, report: &EvaluationReport) -> f64 {
        fitness(report, &self.alpha, &self.beta)
    }
}

/// One stream per purpose, all keyed by the run seed.
pub(crate) struct Streams {
    pub init: StreamRng,
    pub selection: StreamRng,
    pub diversity: StreamRng,
    pub crossover: StreamRng,
    pub mutation: StreamRng,
    pub refraction: StreamRng,
    pub breaking: StreamRng,
    pub propagation: StreamRng,
}

impl Streams {
    pub fn new(seed: u64) -> Self {
        Streams {
            init: stream(seed, Stream::Init),
            selection: stream(seed, Stream::Selection),
            diversity: stream(seed, Stream::DiversityMutation),
            crossover: stream(seed, Stream::Crossover),
            mutation: stream(seed, Stream::Mutation),
            refraction: stream(seed, Stream::Refraction),
            breaking: stream(seed, Stream::Breaking),
            propagation: stream(seed, Stream::Propagation),
        }
    }
}

/// Historical best wave with its score.
#[derive(Debug, Clone)]
pub(crate) struct Best {
    pub wave: Wave,
    pub score: Score,
}

impl Best {
    pub fn offer(&mut self, wave: &Wave, score: Score) -> bool {
        if score.fitness > self.score.fitness {
            self.wave = wave.clone();
            self.score = score;
            true
        } else {
            false
        }
    }
}

pub(crate) fn trace_row(iteration: usize, best: &Best, fitness: &[f64], diversity: f64) -> TraceRow {
    TraceRow {
        iteration,
        best_fitness: best.score.fitness,
        avg_fitness: fitness.iter().sum::<f64>() / fitness.len() as f64,
        best_energy: best.score.energy,
        diversity,
    }
}

pub(crate) fn finish(
    problem: &Problem,
    rows: Vec<TraceRow>,
    best: Best,
    started: std::time::Instant,
) -> Result<RunTrace> {
    let (_, report) = problem.evaluate(&best.wave)?;
    Ok(RunTrace {
        rows,
        best_solution: Some(best.wave.decode()),
        best_fitness: best.score.fitness,
        best_wave: Some(best.wave),
        report,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}
