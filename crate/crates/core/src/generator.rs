//! Seeded random dilemmas for the property suites.
//!
//! `u_i(s) = α_i (s_i − 1) + β_i Σ_{j≠i} (k_j − s_j) + noise`: defecting
//! one step gains `α_i`, each step of cooperation by someone else gains
//! `β_i`. With `0 < α_i < β_i` every contiguous block satisfies the chain
//! with gaps of at least `min(α_i, β_i − α_i)`, and the noise stays below a
//! quarter of that.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::game::Game;
use crate::pd::is_pd_flat;
use crate::rational::{int, Rational};

/// Noise is a multiple of `scale / NOISE_STEPS`.
const NOISE_STEPS: i64 = 4;
const MAX_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    /// Candidate player counts; one is drawn.
    pub players: Vec<usize>,
    /// Candidate strategy counts; one is drawn per player unless `counts`
    /// is set.
    pub strategies: Vec<usize>,
    pub counts: Option<Vec<usize>>,
    /// Largest noise magnitude; zero gives the linear-separable form.
    #[serde(with = "crate::rational::serde_rational")]
    pub noise: Rational,
    /// Extra payoff for defecting alone against full cooperation. Keeps
    /// the dilemma but can make joint cooperation lose the sum test.
    #[serde(with = "crate::rational::serde_rational")]
    pub temptation: Rational,
    /// Redraw strategy counts until no single player has the most.
    pub tied_max: bool,
}

impl GeneratorConfig {
    pub fn new(seed: u64) -> Self {
        GeneratorConfig {
            seed,
            players: vec![2, 3, 4],
            strategies: vec![2, 3, 4],
            counts: None,
            noise: Rational::new(1, 12),
            temptation: Rational::zero(),
            tied_max: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("no dilemma after {0} attempts; the noise scale is too large")]
    Exhausted(usize),
    #[error("bad configuration: {0}")]
    Config(String),
}

/// The noiseless form, with no check that `α_i < β_i`.
pub fn linear_game(counts: &[usize], alphas: &[Rational], betas: &[Rational]) -> Game {
    Game::from_fn(counts.to_vec(), |i, s| {
        let own = int(s[i] as i64 - 1);
        let others: i64 = (0..counts.len())
            .filter(|&j| j != i)
            .map(|j| (counts[j] - s[j]) as i64)
            .sum();
        alphas[i] * own + betas[i] * int(others)
    })
    .expect("valid shape")
}

fn quarter_in(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Rational {
    Rational::new(rng.gen_range(lo * 4..=hi * 4), 4)
}

fn draw_counts(cfg: &GeneratorConfig, rng: &mut ChaCha8Rng) -> Vec<usize> {
    if let Some(c) = &cfg.counts {
        return c.clone();
    }
    let n = cfg.players[rng.gen_range(0..cfg.players.len())];
    loop {
        let c: Vec<usize> = (0..n)
            .map(|_| cfg.strategies[rng.gen_range(0..cfg.strategies.len())])
            .collect();
        if !cfg.tied_max || !crate::pd::has_unique_largest_strategy_set(&c) {
            return c;
        }
    }
}

pub fn gen_random_pd(cfg: &GeneratorConfig) -> Result<Game, GenError> {
    if cfg.players.is_empty() || cfg.strategies.is_empty() {
        return Err(GenError::Config("empty player or strategy choices".into()));
    }
    if cfg.noise < Rational::zero() || cfg.temptation < Rational::zero() {
        return Err(GenError::Config("noise and temptation must be nonnegative".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let counts = draw_counts(cfg, &mut rng);
    let n = counts.len();
    for _ in 0..MAX_ATTEMPTS {
        // α in [1, 3] and β in [4, 6]: every α is below every β, which also
        // makes joint cooperation maximize the payoff sum.
        let alphas: Vec<Rational> = (0..n).map(|_| quarter_in(&mut rng, 1, 3)).collect();
        let betas: Vec<Rational> = (0..n).map(|_| quarter_in(&mut rng, 4, 6)).collect();
        let base = linear_game(&counts, &alphas, &betas);
        let step = cfg.noise / int(NOISE_STEPS);
        let g = base.map_payoffs(|i, s, u| {
            let mut v = u + step * int(rng.gen_range(-NOISE_STEPS..=NOISE_STEPS));
            let alone = s[i] >= 2 && (0..n).all(|j| j == i || s[j] == 1);
            if alone {
                v += cfg.temptation;
            }
            v
        });
        if is_pd_flat(&g).is_pd {
            return Ok(g);
        }
    }
    Err(GenError::Exhausted(MAX_ATTEMPTS))
}

/// Seed of trial `index` within a suite run.
pub fn trial_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_add(index as u64)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .rotate_left(17)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::pareto_optimal_transferable;

    #[test]
    fn seed_42_is_a_dilemma() {
        let mut cfg = GeneratorConfig::new(42);
        cfg.counts = Some(vec![2, 2, 2]);
        cfg.noise = Rational::zero();
        let g = gen_random_pd(&cfg).unwrap();
        assert!(is_pd_flat(&g).is_pd);
    }

    #[test]
    fn alpha_above_beta_is_rejected() {
        let g = linear_game(&[2, 2, 2], &[int(5); 3], &[int(3); 3]);
        assert!(!is_pd_flat(&g).is_pd);
        let g = linear_game(&[2, 3], &[int(1); 2], &[int(2); 2]);
        assert!(is_pd_flat(&g).is_pd);
    }

    #[test]
    fn deterministic() {
        for seed in 0..10 {
            let cfg = GeneratorConfig::new(seed);
            assert_eq!(gen_random_pd(&cfg).unwrap(), gen_random_pd(&cfg).unwrap());
        }
        assert_ne!(
            gen_random_pd(&GeneratorConfig::new(1)).unwrap(),
            gen_random_pd(&GeneratorConfig::new(2)).unwrap()
        );
    }

    #[test]
    fn oversized_noise_exhausts() {
        let mut cfg = GeneratorConfig::new(3);
        cfg.counts = Some(vec![3, 3, 3]);
        cfg.noise = int(40);
        assert_eq!(gen_random_pd(&cfg), Err(GenError::Exhausted(MAX_ATTEMPTS)));
    }

    #[test]
    fn temptation_keeps_the_dilemma_but_breaks_pareto() {
        let cfg = GeneratorConfig::new(5);
        let g = gen_random_pd(&cfg).unwrap();
        assert!(pareto_optimal_transferable(&g, &g.cooperative()));
        let mut t = cfg.clone();
        t.temptation = int(40);
        let h = gen_random_pd(&t).unwrap();
        assert!(is_pd_flat(&h).is_pd);
        assert!(!pareto_optimal_transferable(&h, &h.cooperative()));
    }
}
