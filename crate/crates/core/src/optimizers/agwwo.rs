use std::time::Instant;

use crate::encoding::{init_wave, Wave};
use crate::error::Result;
use crate::optimizers::operators::{
    argmax, breaking_coefficient, crossover, crossover_probability, diversity_mutation_probability, mutate_wave,
    mutation_probability, population_diversity, refract_wave, solitary_wave, stats, tournament_select,
};
use crate::optimizers::{finish, trace_row, Best, OptimizerConfig, Problem, RunTrace, Score, Streams};
use crate::rng::StreamRng;
use crate::scenario::Scenario;

pub(crate) fn initial_population(
    problem: &Problem,
    cfg: &OptimizerConfig,
    streams: &mut Streams,
) -> Result<(Vec<Wave>, Vec<Score>, Best)> {
    let pop: Vec<Wave> = (0..cfg.population)
        .map(|_| init_wave(&problem.bounds, cfg.max_height, &mut streams.init))
        .collect();
    let scores = problem.score_all(&pop)?;
    let i = argmax(&fitnesses(&scores));
    let best = Best {
        wave: pop[i].clone(),
        score: scores[i],
    };
    Ok((pop, scores, best))
}

pub(crate) fn fitnesses(scores: &[Score]) -> Vec<f64> {
    scores.iter().map(|s| s.fitness).collect()
}

/// Offspring of the genetic block plus the diversity of the selected parents.
pub(crate) struct Offspring {
    pub waves: Vec<Wave>,
    pub scores: Vec<Score>,
    pub diversity: f64,
}

/// Selection, diversity-guided mutation, adaptive crossover of adjacent
/// pairs and adaptive mutation.
pub(crate) fn genetic_block(
    problem: &Problem,
    cfg: &OptimizerConfig,
    pop: &[Wave],
    fitness: &[f64],
    best: &Best,
    streams: &mut Streams,
) -> Result<Offspring> {
    let bounds = &problem.bounds;
    let (mut waves, _) = tournament_select(pop, fitness, (&best.wave, best.score.fitness), &mut streams.selection);

    let diversity = population_diversity(&waves, bounds);
    let pd = diversity_mutation_probability(diversity, cfg.a5, cfg.a6, cfg.a7, cfg.diversity_low, cfg.diversity_high);
    for w in waves.iter_mut() {
        mutate_wave(w, pd, bounds, &mut streams.diversity);
    }
    let fit = fitnesses(&problem.score_all(&waves)?);

    let (f_min, f_ave, f_max) = stats(&fit);
    for m in (0..waves.len().saturating_sub(1)).step_by(2) {
        let pc = crossover_probability(fit[m].min(fit[m + 1]), f_min, f_ave, cfg.a1, cfg.a2);
        let (left, right) = waves.split_at_mut(m + 1);
        crossover(&mut left[m], &mut right[0], pc, bounds, &mut streams.crossover);
    }
    for (w, f) in waves.iter_mut().zip(&fit) {
        let pm = mutation_probability(*f, f_max, f_ave, cfg.a3, cfg.a4);
        mutate_wave(w, pm, bounds, &mut streams.mutation);
    }
    let scores = problem.score_all(&waves)?;
    Ok(Offspring {
        waves,
        scores,
        diversity,
    })
}

/// Returns the best of `V` solitary waves around `center` if it beats `center`.
pub(crate) fn break_wave(
    problem: &Problem,
    cfg: &OptimizerConfig,
    center: &Wave,
    center_score: Score,
    u: f64,
    rng: &mut StreamRng,
) -> Result<Option<(Wave, Score)>> {
    let solitary: Vec<Wave> = (0..cfg.solitary_waves)
        .map(|_| solitary_wave(center, u, &problem.bounds, rng))
        .collect();
    let scores = problem.score_all(&solitary)?;
    let i = argmax(&fitnesses(&scores));
    if scores[i].fitness > center_score.fitness {
        let mut w = solitary[i].clone();
        w.height = center.height;
        Ok(Some((w, scores[i])))
    } else {
        Ok(None)
    }
}

/// Refracts every wave listed in `idx` toward `targets` and re-scores them.
pub(crate) fn refract_all(
    problem: &Problem,
    cfg: &OptimizerConfig,
    pop: &mut [Wave],
    scores: &mut [Score],
    idx: &[(usize, Wave)],
    rng: &mut StreamRng,
) -> Result<()> {
    for (m, target) in idx {
        refract_wave(&mut pop[*m], target, &problem.bounds, rng);
        pop[*m].height = cfg.max_height;
    }
    let moved: Vec<Wave> = idx.iter().map(|(m, _)| pop[*m].clone()).collect();
    for ((m, _), s) in idx.iter().zip(problem.score_all(&moved)?) {
        scores[*m] = s;
    }
    Ok(())
}

pub fn run_agwwo(scn: &Scenario, cfg: &OptimizerConfig, seed: u64) -> Result<RunTrace> {
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
        let fit = fitnesses(&scores);
        let off = genetic_block(&problem, cfg, &pop, &fit, &best, &mut streams)?;
        let u = breaking_coefficient(t, cfg.iterations, cfg.u_min, cfg.u_max);

        let c = argmax(&fit);
        let mut current = Best {
            wave: pop[c].clone(),
            score: scores[c],
        };
        let mut to_refract = Vec::new();
        for (m, (mut cand, mut cand_score)) in off.waves.into_iter().zip(off.scores).enumerate() {
            if cand_score.fitness > scores[m].fitness {
                cand.height = pop[m].height;
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

        for (w, s) in pop.iter().zip(&scores) {
            best.offer(w, *s);
        }
        rows.push(trace_row(t, &best, &fitnesses(&scores), off.diversity));
    }
    finish(&problem, rows, best, started)
}
