//! Salp swarm optimization over a box-bounded real search space.
//!
//! The swarm is a chain: salp 0 leads and jumps around the best position
//! found so far (the *food source*), every other salp moves to the midpoint
//! between itself and the salp ahead of it. The leader's step size shrinks
//! with the exploration coefficient `a(t) = 2 exp(-(t/T)^2)`.
//!
//! The optimizer **maximizes**; minimize by negating the objective.
//!
//! Randomness comes from [`ChaCha8Rng`] seeded with [`SsaConfig::seed`], so
//! a run is bit-reproducible given its configuration and a deterministic
//! objective. Draw order: `D` uniforms per randomly initialized salp (in
//! salp order), then per iteration a `(b, c)` pair per leader dimension.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::types::{Bounds, SsaConfig};

/// `a(t) = 2 exp(-(t/T)^2)`, decaying from 2 at `t = 0` to `2/e` at `t = T`.
pub fn exploration_coefficient(t: usize, total: usize) -> Result<f64> {
    if total == 0 {
        return Err(Error::config("total iterations must be positive"));
    }
    if t > total {
        return Err(Error::config(format!("iteration {t} past total {total}")));
    }
    let ratio = t as f64 / total as f64;
    Ok(2.0 * (-(ratio * ratio)).exp())
}

/// One leader coordinate for given draws `b` and `c`, clamped into
/// `[lower, upper]`.
pub fn leader_coordinate(food: f64, lower: f64, upper: f64, a: f64, b: f64, c: f64) -> f64 {
    let step = a * ((upper - lower) * b + lower);
    let raw = if c >= 0.5 { food + step } else { food - step };
    raw.clamp(lower, upper)
}

/// New leader position around `food`, with fresh `b, c` per dimension.
pub fn update_leader<R: Rng + ?Sized>(food: &[f64], bounds: &Bounds, a: f64, rng: &mut R) -> Vec<f64> {
    food.iter()
        .enumerate()
        .map(|(j, &f)| {
            let b: f64 = rng.gen();
            let c: f64 = rng.gen();
            leader_coordinate(f, bounds.lower()[j], bounds.upper()[j], a, b, c)
        })
        .collect()
}

/// Midpoint between a follower and the salp ahead of it, clamped.
pub fn update_follower(current: &[f64], ahead: &[f64], bounds: &Bounds) -> Result<Vec<f64>> {
    if current.len() != ahead.len() || current.len() != bounds.dimensions() {
        return Err(Error::config(format!(
            "follower dimensions {} / {} / bounds {}",
            current.len(),
            ahead.len(),
            bounds.dimensions()
        )));
    }
    Ok(current
        .iter()
        .zip(ahead)
        .enumerate()
        .map(|(j, (&p, &q))| bounds.clamp(j, (p + q) / 2.0))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Salp {
    pub position: Vec<f64>,
    pub fitness: f64,
}

/// The swarm plus its food source. Index 0 is the leader.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub salps: Vec<Salp>,
    pub food_source: Vec<f64>,
    pub food_fitness: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizationResult {
    pub best_position: Vec<f64>,
    pub best_fitness: f64,
    /// `(iteration, food fitness)`; iteration 0 is the initial population.
    pub history: Vec<(usize, f64)>,
    pub evaluations: usize,
}

/// Salp swarm optimizer bound to one configuration.
#[derive(Debug, Clone)]
pub struct SalpSwarm {
    config: SsaConfig,
}

impl SalpSwarm {
    pub fn new(config: SsaConfig) -> Result<Self> {
        config.validate()?;
        Ok(SalpSwarm { config })
    }

    pub fn config(&self) -> &SsaConfig {
        &self.config
    }

    pub fn optimize<F>(&self, objective: F) -> Result<OptimizationResult>
    where
        F: Fn(&[f64]) -> f64,
    {
        self.optimize_observed(objective, &[], |_, _| {})
    }

    /// Like [`optimize`](Self::optimize), but the first salps start at
    /// `initial` (clamped into bounds) instead of random positions.
    pub fn optimize_from<F>(&self, objective: F, initial: &[Vec<f64>]) -> Result<OptimizationResult>
    where
        F: Fn(&[f64]) -> f64,
    {
        self.optimize_observed(objective, initial, |_, _| {})
    }

    /// Full driver. `observer` sees the population after initialization
    /// (iteration 0) and after every iteration's food-source update.
    pub fn optimize_observed<F, O>(
        &self,
        objective: F,
        initial: &[Vec<f64>],
        mut observer: O,
    ) -> Result<OptimizationResult>
    where
        F: Fn(&[f64]) -> f64,
        O: FnMut(usize, &Population),
    {
        let cfg = &self.config;
        let bounds = &cfg.bounds;
        let dims = cfg.dimensions;
        if initial.len() > cfg.num_salps {
            return Err(Error::config(format!(
                "{} initial positions for {} salps",
                initial.len(),
                cfg.num_salps
            )));
        }
        if let Some(bad) = initial.iter().find(|p| p.len() != dims) {
            return Err(Error::config(format!(
                "initial position has {} dimensions, expected {dims}",
                bad.len()
            )));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let mut evaluations = 0usize;
        let mut evaluate = |position: &[f64]| -> Result<f64> {
            evaluations += 1;
            let value = objective(position);
            if value.is_finite() {
                Ok(value)
            } else {
                Err(Error::ObjectiveFailure {
                    position: position.to_vec(),
                })
            }
        };

        let mut salps = Vec::with_capacity(cfg.num_salps);
        for i in 0..cfg.num_salps {
            let position: Vec<f64> = match initial.get(i) {
                Some(p) => p.iter().enumerate().map(|(j, &v)| bounds.clamp(j, v)).collect(),
                None => (0..dims)
                    .map(|j| rng.gen_range(bounds.lower()[j]..=bounds.upper()[j]))
                    .collect(),
            };
            let fitness = evaluate(&position)?;
            salps.push(Salp { position, fitness });
        }

        let best = best_index(&salps);
        let mut population = Population {
            food_source: salps[best].position.clone(),
            food_fitness: salps[best].fitness,
            salps,
        };
        let mut history = Vec::with_capacity(cfg.max_iterations + 1);
        history.push((0, population.food_fitness));
        observer(0, &population);

        for t in 1..=cfg.max_iterations {
            let a = exploration_coefficient(t, cfg.max_iterations)?;
            population.salps[0].position = update_leader(&population.food_source, bounds, a, &mut rng);
            for i in 1..population.salps.len() {
                let (ahead, rest) = population.salps.split_at_mut(i);
                let next = update_follower(&rest[0].position, &ahead[i - 1].position, bounds)?;
                rest[0].position = next;
            }
            for salp in population.salps.iter_mut() {
                salp.fitness = evaluate(&salp.position)?;
            }
            let best = best_index(&population.salps);
            if population.salps[best].fitness > population.food_fitness {
                population.food_fitness = population.salps[best].fitness;
                population.food_source = population.salps[best].position.clone();
            }
            history.push((t, population.food_fitness));
            observer(t, &population);
        }

        Ok(OptimizationResult {
            best_position: population.food_source,
            best_fitness: population.food_fitness,
            history,
            evaluations,
        })
    }
}

/// First salp holding the maximum fitness.
fn best_index(salps: &[Salp]) -> usize {
    let mut best = 0;
    for (i, s) in salps.iter().enumerate().skip(1) {
        if s.fitness > salps[best].fitness {
            best = i;
        }
    }
    best
}

/// Convenience wrapper around [`SalpSwarm::optimize`].
pub fn optimize<F>(objective: F, config: SsaConfig) -> Result<OptimizationResult>
where
    F: Fn(&[f64]) -> f64,
{
    SalpSwarm::new(config)?.optimize(objective)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::{any, prop_assert, prop_assert_eq, proptest, ProptestConfig};

    fn sphere(x: &[f64]) -> f64 {
        -x.iter().map(|v| v * v).sum::<f64>()
    }

    #[test]
    fn coefficient_known_values() {
        assert_eq!(exploration_coefficient(0, 100).unwrap(), 2.0);
        assert_abs_diff_eq!(
            exploration_coefficient(100, 100).unwrap(),
            0.735_758_882_342_884_7,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            exploration_coefficient(50, 100).unwrap(),
            1.557_601_566_142_809_8,
            epsilon = 1e-12
        );
        assert!(exploration_coefficient(0, 0).is_err());
        assert!(exploration_coefficient(5, 4).is_err());
    }

    #[test]
    fn coefficient_strictly_decreasing() {
        for total in [1usize, 7, 100] {
            for t in 0..total {
                let now = exploration_coefficient(t, total).unwrap();
                let next = exploration_coefficient(t + 1, total).unwrap();
                assert!(next < now);
            }
        }
    }

    #[test]
    fn leader_branches() {
        assert_abs_diff_eq!(leader_coordinate(0.5, 0.0, 1.0, 1.0, 0.3, 0.7), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(leader_coordinate(0.5, 0.0, 1.0, 1.0, 0.3, 0.2), 0.2, epsilon = 1e-15);
        assert_eq!(leader_coordinate(0.9, 0.0, 1.0, 2.0, 1.0, 0.9), 1.0);
        // c = 0.5 takes the upper branch
        assert_abs_diff_eq!(leader_coordinate(0.1, 0.0, 1.0, 1.0, 0.2, 0.5), 0.3, epsilon = 1e-15);
    }

    #[test]
    fn leader_step_uses_printed_offset_for_nonzero_lower_bound() {
        // F + a((ub - lb) b + lb) = 1 + 1 * (2 * 0.25 + 1) = 2.5
        assert_abs_diff_eq!(leader_coordinate(1.0, 1.0, 3.0, 1.0, 0.25, 0.9), 2.5, epsilon = 1e-15);
    }

    #[test]
    fn follower_midpoint() {
        let b1 = Bounds::unit(1);
        assert_abs_diff_eq!(update_follower(&[0.8], &[0.4], &b1).unwrap()[0], 0.6, epsilon = 1e-15);
        assert_eq!(update_follower(&[0.37], &[0.37], &b1).unwrap(), vec![0.37]);
        let b2 = Bounds::unit(2);
        assert_eq!(update_follower(&[0.2, 1.0], &[0.6, 0.0], &b2).unwrap(), vec![0.4, 0.5]);
        assert!(update_follower(&[0.2], &[0.6, 0.0], &b2).is_err());
    }

    #[test]
    fn constant_objective_is_flat() {
        let res = optimize(|_| 0.0, SsaConfig::default()).unwrap();
        assert_eq!(res.best_fitness, 0.0);
        assert!(res.history.iter().all(|&(_, f)| f == 0.0));
        assert_eq!(res.history.len(), 101);
    }

    #[test]
    fn evaluation_count() {
        let cfg = SsaConfig {
            num_salps: 7,
            max_iterations: 11,
            ..SsaConfig::default()
        };
        let res = optimize(sphere, cfg).unwrap();
        assert_eq!(res.evaluations, 7 * 12);
    }

    #[test]
    fn sphere_reaches_origin() {
        let res = optimize(sphere, SsaConfig::default().seed(7)).unwrap();
        assert!(res.best_fitness >= -1e-4, "{}", res.best_fitness);
    }

    #[test]
    fn sphere_beats_uniform_sampling() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let random_best = (0..10_000)
            .map(|_| {
                let x: Vec<f64> = (0..3).map(|_| rng.gen::<f64>()).collect();
                sphere(&x)
            })
            .fold(f64::NEG_INFINITY, f64::max);
        let res = optimize(sphere, SsaConfig::default().seed(3)).unwrap();
        assert!(res.best_fitness >= random_best);
    }

    #[test]
    fn non_finite_objective_fails() {
        let err = optimize(|_| f64::NAN, SsaConfig::default()).unwrap_err();
        assert!(matches!(err, Error::ObjectiveFailure { .. }));
    }

    #[test]
    fn initial_positions_are_used_and_clamped() {
        let swarm = SalpSwarm::new(SsaConfig {
            num_salps: 4,
            max_iterations: 1,
            ..SsaConfig::default()
        })
        .unwrap();
        let mut seen = None;
        swarm
            .optimize_observed(sphere, &[vec![2.0, -1.0, 0.5]], |t, pop| {
                if t == 0 {
                    seen = Some(pop.salps[0].position.clone());
                }
            })
            .unwrap();
        assert_eq!(seen.unwrap(), vec![1.0, 0.0, 0.5]);
        assert!(swarm.optimize_from(sphere, &[vec![0.0]]).is_err());
    }

    #[test]
    fn followers_chain_through_updated_predecessor() {
        // With one iteration, salp 1 must end at the midpoint of its initial
        // position and the freshly moved leader.
        let cfg = SsaConfig {
            num_salps: 3,
            max_iterations: 1,
            dimensions: 1,
            bounds: Bounds::unit(1),
            seed: 5,
        };
        let swarm = SalpSwarm::new(cfg).unwrap();
        let mut snapshots = Vec::new();
        swarm
            .optimize_observed(
                |x| x[0],
                &[vec![0.2], vec![0.4], vec![0.9]],
                |_, pop| snapshots.push(pop.clone()),
            )
            .unwrap();
        let after = &snapshots[1];
        let leader = after.salps[0].position[0];
        assert_abs_diff_eq!(after.salps[1].position[0], (0.4 + leader) / 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(
            after.salps[2].position[0],
            (0.9 + after.salps[1].position[0]) / 2.0,
            epsilon = 1e-15
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn feasibility_and_monotonicity(
            seed in any::<u64>(),
            salps in 2usize..20,
            iters in 1usize..20,
            dims in 1usize..5,
            lo in -5.0f64..0.0,
            width in 0.1f64..5.0,
        ) {
            let bounds = Bounds::uniform(dims, lo, lo + width).unwrap();
            let cfg = SsaConfig { num_salps: salps, max_iterations: iters, dimensions: dims, bounds: bounds.clone(), seed };
            let swarm = SalpSwarm::new(cfg).unwrap();
            let mut food = Vec::new();
            let mut feasible = true;
            let objective = |x: &[f64]| -> f64 { x.iter().map(|v| (3.0 * v).sin()).sum() };
            let res = swarm.optimize_observed(objective, &[], |_, pop| {
                feasible &= pop.salps.iter().all(|s| bounds.contains(&s.position));
                food.push(pop.food_fitness);
            }).unwrap();
            prop_assert!(feasible);
            prop_assert!(food.windows(2).all(|w| w[1] >= w[0]));
            prop_assert!(res.history.windows(2).all(|w| w[1].1 >= w[0].1));
            prop_assert_eq!(res.best_fitness, res.history.last().unwrap().1);
            prop_assert!(bounds.contains(&res.best_position));
            prop_assert_eq!(objective(&res.best_position), res.best_fitness);
        }

        #[test]
        fn identical_configs_are_bit_identical(seed in any::<u64>()) {
            let cfg = SsaConfig { num_salps: 10, max_iterations: 10, ..SsaConfig::default() }.seed(seed);
            let a = optimize(sphere, cfg.clone()).unwrap();
            let b = optimize(sphere, cfg).unwrap();
            prop_assert_eq!(a.best_position.iter().map(|v| v.to_bits()).collect::<Vec<_>>(),
                            b.best_position.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
            prop_assert_eq!(a, b);
        }

        #[test]
        fn follower_is_exact_midpoint(p in 0.0f64..1.0, q in 0.0f64..1.0) {
            let out = update_follower(&[p], &[q], &Bounds::unit(1)).unwrap();
            prop_assert_eq!(out[0], (p + q) / 2.0);
        }
    }
}
