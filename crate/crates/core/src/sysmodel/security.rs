use crate::scenario::Scenario;
use crate::sysmodel::Solution;

/// Probability that an algorithm of level `v_q` fails to protect a task
/// expecting level `v_bar` with risk coefficient `v_hat`.
pub fn breach_probability(v_hat: f64, v_bar: f64, v_q: f64) -> f64 {
    if v_q >= v_bar {
        0.0
    } else {
        -(-v_hat * (v_bar - v_q)).exp_m1()
    }
}

/// Expected breach cost per device, summed over its tasks using the
/// selected algorithm. Charged regardless of how much data is offloaded.
pub fn breach_cost(scn: &Scenario, sol: &Solution) -> Vec<f64> {
    (0..scn.num_md())
        .map(|md| {
            (0..scn.num_tasks())
                .map(|k| {
                    let t = scn.task_index(md, k);
                    let task = &scn.tasks[t];
                    let level = scn.crypto[sol.crypto[t]].level;
                    task.loss * breach_probability(task.risk, task.expected_level, level)
                })
                .sum()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sysmodel::testutil::*;

    #[test]
    fn meeting_expectation_is_safe() {
        assert_eq!(breach_probability(2.0, 5.0, 6.0), 0.0);
        assert_eq!(breach_probability(2.0, 5.0, 5.0), 0.0);
    }

    #[test]
    fn reference_probabilities() {
        assert!((breach_probability(1.0, 6.0, 5.0) - 0.632_120_558_828_557_7).abs() < 1e-15);
        let p = breach_probability(3.0, 6.0, 1.0);
        assert!((p - (1.0 - (-15f64).exp())).abs() < 1e-16);
        assert!(p < 1.0);
    }

    #[test]
    fn strong_algorithms_cost_nothing() {
        let scn = small_scenario(4, 2, 3, 1);
        let mut sol = uniform_solution(&scn, 1);
        sol.crypto = vec![5; sol.crypto.len()];
        assert!(breach_cost(&scn, &sol).iter().all(|c| *c == 0.0));
    }

    #[test]
    fn cost_bounded_by_total_loss() {
        let scn = small_scenario(4, 2, 3, 2);
        let mut sol = uniform_solution(&scn, 1);
        sol.crypto = vec![0; sol.crypto.len()];
        let psi = breach_cost(&scn, &sol);
        for (md, c) in psi.iter().enumerate() {
            let cap: f64 = (0..3).map(|k| scn.task(md, k).loss).sum();
            assert!(*c > 0.0 && *c <= cap);
        }
    }
}
