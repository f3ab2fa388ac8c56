use std::time::Instant;

use rand::Rng;

use crate::encoding::{repair_wave, GeneGroup, Wave};
use crate::error::Result;
use crate::optimizers::agwwo::{break_wave, fitnesses, initial_population, refract_all};
use crate::optimizers::operators::{argmax, breaking_coefficient, population_diversity, stats};
use crate::optimizers::{finish, trace_row, Best, OptimizerConfig, Problem, RunTrace, Streams};
use crate::scenario::Scenario;

/// Classic water wave optimization with per-wave wavelengths.
pub fn run_wwo(scn: &Scenario, cfg: &OptimizerConfig, seed: u64) -> Result<RunTrace> {
    cfg.validate()?;
    let started = Instant::now();
    let problem = Problem::new(scn, cfg)?;
    let bounds = &problem.bounds;
    let mut streams = Streams::new(seed);
    let (mut pop, mut scores, mut best) = initial_population(&problem, cfg, &mut streams)?;
    let mut wavelength = vec![cfg.wavelength_init; pop.len()];
    let mut rows = vec![trace_row(
        0,
        &best,
        &fitnesses(&scores),
        population_diversity(&pop, bounds),
    )];

    for t in 1..=cfg.iterations {
        let diversity = population_diversity(&pop, bounds);
        let moved: Vec<Wave> = pop
            .iter()
            .zip(&wavelength)
            .map(|(w, &lambda)| {
                let mut x = w.clone();
                for g in GeneGroup::ALL {
                    for i in 0..bounds.len(g) {
                        let width = bounds.static_upper(g, i) - bounds.lower(g, i);
                        let step = streams.propagation.random_range(-1.0..=1.0) * lambda * width;
                        x.group_mut(g)[i] += step;
                    }
                }
                repair_wave(&mut x, bounds);
                x
            })
            .collect();
        let moved_scores = problem.score_all(&moved)?;
        let u = breaking_coefficient(t, cfg.iterations, cfg.u_min, cfg.u_max);

        let c = argmax(&fitnesses(&scores));
        let mut current = Best {
            wave: pop[c].clone(),
            score: scores[c],
        };
        let mut to_refract = Vec::new();
        for (m, (mut cand, mut cand_score)) in moved.into_iter().zip(moved_scores).enumerate() {
            if cand_score.fitness > scores[m].fitness {
                cand.height = cfg.max_height;
                if cand_score.fitness > current.score.fitness {
                    if let Some((w, s)) = break_wave(&problem, cfg, &cand, cand_score, u, &mut streams.breaking)? {
                        cand = w;
                        cand_score = s;
                    }
                    current.offer(&cand, cand_score);
                }
                pop[m] = cand;
                scores[m] = cand_score;
            } else {
                pop[m].height = pop[m].height.saturating_sub(1);
                if pop[m].height == 0 {
                    to_refract.push((m, current.wave.clone()));
                }
            }
        }
        refract_all(
            &problem,
            cfg,
            &mut pop,
            &mut scores,
            &to_refract,
            &mut streams.refraction,
        )?;

        let fit = fitnesses(&scores);
        let (f_min, _, f_max) = stats(&fit);
        let eps = cfg.wavelength_epsilon;
        for (lambda, f) in wavelength.iter_mut().zip(&fit) {
            *lambda *= cfg.wavelength_base.powf(-(f - f_min + eps) / (f_max - f_min + eps));
        }
        for (w, s) in pop.iter().zip(&scores) {
            best.offer(w, *s);
        }
        rows.push(trace_row(t, &best, &fit, diversity));
    }
    finish(&problem, rows, best, started)
}
