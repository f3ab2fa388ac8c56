use std::time::Instant;

use crate::error::Result;
use crate::optimizers::agwwo::{fitnesses, genetic_block, initial_population};
use crate::optimizers::operators::{argmax, argmin, population_diversity};
use crate::optimizers::{finish, trace_row, OptimizerConfig, Problem, RunTrace, Streams};
use crate::scenario::Scenario;

/// Adaptive GA with diversity-guided mutation: generational replacement by
/// the offspring, with the historical best re-inserted over the worst child
/// when no child matches it.
pub fn run_aga(scn: &Scenario, cfg: &OptimizerConfig, seed: u64) -> Result<RunTrace> {
    cfg.validate()?;
    let started = Instant::now();
    let problem = Problem::new(scn, cfg)?;
    let mut streams = Streams::new(seed);
    let (mut pop, mut scores, mut best) = initial_population(&problem, cfg, &mut streams)?;
    let mut rows = vec![trace_row(
        0,
        &best,
        &fitnesses(&scores),
        population_diversity(&pop, &problem.bounds),
    )];

    for t in 1..=cfg.iterations {
        let off = genetic_block(&problem, cfg, &pop, &fitnesses(&scores), &best, &mut streams)?;
        pop = off.waves;
        scores = off.scores;
        let fit = fitnesses(&scores);
        if best.score.fitness > fit[argmax(&fit)] {
            let worst = argmin(&fit);
            pop[worst] = best.wave.clone();
            scores[worst] = best.score;
        }
        for (w, s) in pop.iter().zip(&scores) {
            best.offer(w, *s);
        }
        rows.push(trace_row(t, &best, &fitnesses(&scores), off.diversity));
    }
    finish(&problem, rows, best, started)
}
