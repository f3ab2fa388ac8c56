//! Evolutionary operators shared by the optimizers: selection, adaptive
//! crossover and mutation, diversity, refraction and breaking.

use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};

use crate::encoding::{repair_wave, Bounds, GeneGroup, Wave};

/// `M` binary tournaments; the historical best replaces the weakest pick
/// when no tournament kept it.
pub fn tournament_select<R: Rng + ?Sized>(
    population: &[Wave],
    fitness: &[f64],
    best: (&Wave, f64),
    rng: &mut R,
) -> (Vec<Wave>, Vec<f64>) {
    let m = population.len();
    let mut waves = Vec::with_capacity(m);
    let mut fits = Vec::with_capacity(m);
    for _ in 0..m {
        let a = rng.random_range(0..m);
        let b = rng.random_range(0..m);
        let win = if fitness[b] > fitness[a] { b } else { a };
        waves.push(population[win].clone());
        fits.push(fitness[win]);
    }
    if !waves.iter().any(|w| w.same_position(best.0)) {
        let worst = argmin(&fits);
        waves[worst] = best.0.clone();
        fits[worst] = best.1;
    }
    (waves, fits)
}

pub fn crossover_probability(f_pair_min: f64, f_min: f64, f_ave: f64, a1: f64, a2: f64) -> f64 {
    if f_ave <= f_min || f_pair_min >= f_ave {
        a2
    } else {
        a1 * (f_pair_min - f_min) / (f_ave - f_min)
    }
}

/// With probability `prob`, swaps a random contiguous segment of one gene
/// group between the two waves, then repairs both.
pub fn crossover<R: Rng + ?Sized>(a: &mut Wave, b: &mut Wave, prob: f64, bounds: &Bounds, rng: &mut R) -> bool {
    if rng.random::<f64>() >= prob {
        return false;
    }
    let g = GeneGroup::ALL[rng.random_range(0..GeneGroup::ALL.len())];
    let n = bounds.len(g);
    let i = rng.random_range(0..n);
    let j = rng.random_range(0..n);
    let (lo, hi) = (i.min(j), i.max(j));
    a.group_mut(g)[lo..=hi].swap_with_slice(&mut b.group_mut(g)[lo..=hi]);
    repair_wave(a, bounds);
    repair_wave(b, bounds);
    true
}

pub fn mutation_probability(f_m: f64, f_max: f64, f_ave: f64, a3: f64, a4: f64) -> f64 {
    if f_m < f_ave {
        a4
    } else if f_max <= f_ave {
        a3
    } else {
        a3 * (f_max - f_m) / (f_max - f_ave)
    }
}

/// Moves `value` a random fraction `r1` toward the upper bound (`r2 > 0.5`)
/// or toward the lower bound. Offload sizes shrink toward zero instead.
pub fn mutate_gene(group: GeneGroup, value: f64, lo: f64, hi: f64, r1: f64, r2: f64) -> f64 {
    let target = if r2 > 0.5 {
        hi
    } else if group.shrinks_to_zero() {
        0.0
    } else {
        lo
    };
    let v = r1 * target + (1.0 - r1) * value;
    if group.is_integer() {
        v.round().clamp(lo, hi)
    } else {
        v
    }
}

/// Mutates each gene independently with probability `prob`, then repairs.
pub fn mutate_wave<R: Rng + ?Sized>(wave: &mut Wave, prob: f64, bounds: &Bounds, rng: &mut R) {
    for g in GeneGroup::ALL {
        for i in 0..bounds.len(g) {
            if rng.random::<f64>() < prob {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let (lo, hi) = (bounds.lower(g, i), bounds.upper(g, i, wave));
                let v = wave.group(g)[i];
                wave.group_mut(g)[i] = mutate_gene(g, v, lo, hi, r1, r2);
            }
        }
    }
    repair_wave(wave, bounds);
}

/// Mean over waves and gene groups of each wave's distance from the
/// population centroid, per group normalized by the box diagonal.
pub fn population_diversity(population: &[Wave], bounds: &Bounds) -> f64 {
    let m = population.len();
    if m == 0 {
        return 0.0;
    }
    let mut total = 0.0;
    for g in GeneGroup::ALL {
        let n = bounds.len(g);
        // Shifted by the first wave so identical populations give exactly zero.
        let origin = population[0].group(g);
        let mut mean = vec![0.0; n];
        for w in population {
            for ((acc, v), o) in mean.iter_mut().zip(w.group(g)).zip(origin) {
                *acc += v - o;
            }
        }
        for (c, o) in mean.iter_mut().zip(origin) {
            *c = o + *c / m as f64;
        }
        let spread: f64 = population
            .iter()
            .map(|w| {
                w.group(g)
                    .iter()
                    .zip(&mean)
                    .map(|(v, c)| (v - c) * (v - c))
                    .sum::<f64>()
                    .sqrt()
            })
            .sum();
        total += spread / bounds.diagonal(g);
    }
    total / (GeneGroup::ALL.len() * m) as f64
}

pub fn diversity_mutation_probability(d: f64, a5: f64, a6: f64, a7: f64, d1: f64, d2: f64) -> f64 {
    if d < d1 {
        a5
    } else if d < d2 {
        a6
    } else {
        a7
    }
}

/// Draws around the midpoint between `value` and `best` with a spread of
/// half their distance.
pub fn refract_gene<R: Rng + ?Sized>(value: f64, best: f64, integer: bool, rng: &mut R) -> f64 {
    let mean = (best + value) / 2.0;
    let std = (best - value).abs() / 2.0;
    let v = match Normal::new(mean, std) {
        Ok(n) => n.sample(rng),
        Err(_) => mean,
    };
    if integer {
        v.round()
    } else {
        v
    }
}

pub fn refract_wave<R: Rng + ?Sized>(wave: &mut Wave, best: &Wave, bounds: &Bounds, rng: &mut R) {
    for g in GeneGroup::ALL {
        for i in 0..bounds.len(g) {
            let v = refract_gene(wave.group(g)[i], best.group(g)[i], g.is_integer(), rng);
            wave.group_mut(g)[i] = v;
        }
    }
    repair_wave(wave, bounds);
}

/// Breaking range, growing linearly over the run.
pub fn breaking_coefficient(t: usize, total: usize, u_min: f64, u_max: f64) -> f64 {
    let span = total.saturating_sub(1).max(1) as f64;
    u_min + (u_max - u_min) * (t.saturating_sub(1) as f64) / span
}

pub fn break_gene(best: f64, width: f64, zeta: f64, u: f64, integer: bool) -> f64 {
    let v = best + zeta * u * width;
    if integer {
        v.round()
    } else {
        v
    }
}

/// One solitary wave: every gene of `best` perturbed with its own normal draw.
pub fn solitary_wave<R: Rng + ?Sized>(best: &Wave, u: f64, bounds: &Bounds, rng: &mut R) -> Wave {
    let mut w = best.clone();
    for g in GeneGroup::ALL {
        for i in 0..bounds.len(g) {
            let zeta: f64 = StandardNormal.sample(rng);
            let width = bounds.break_width(g, i, best);
            w.group_mut(g)[i] = break_gene(best.group(g)[i], width, zeta, u, g.is_integer());
        }
    }
    repair_wave(&mut w, bounds);
    w
}

pub(crate) fn argmin(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x < v[best] {
            best = i;
        }
    }
    best
}

pub(crate) fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if *x > v[best] {
            best = i;
        }
    }
    best
}

/// `(min, mean, max)` of a non-empty slice.
pub(crate) fn stats(v: &[f64]) -> (f64, f64, f64) {
    let min = v.iter().copied().fold(f64::INFINITY, f64::min);
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (min, v.iter().sum::<f64>() / v.len() as f64, max)
}
