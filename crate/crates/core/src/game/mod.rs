//! Finite normal-form games with exact payoffs.
//!
//! Players are indexed from 0 in the Rust API and shown 1-based in every
//! external format. Strategy indices are 1-based everywhere: strategy 1 is a
//! player's most cooperative choice and `k_i` the least cooperative.

mod coalition;
mod io;
mod profile;
mod restricted;

use std::ops::RangeInclusive;

pub use coalition::{coalitions_of, subsets_of_size, Coalition};
pub use io::GameFile;
pub use profile::{Profile, ProfileIter};
pub use restricted::{
    enumerate_restricted_games, enumerate_restrictions, restrict, RestrictedGame, Restriction,
};

use crate::rational::{Rational, RationalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GameError {
    #[error("a game needs at least 2 players, got {0}")]
    TooFewPlayers(usize),
    #[error("player {player} needs at least 2 strategies, got {count}")]
    TooFewStrategies { player: usize, count: usize },
    #[error("player index {0} out of range")]
    PlayerOutOfRange(usize),
    #[error("strategy {strategy} out of range 1..={count} for player {player}")]
    StrategyOutOfRange {
        player: usize,
        strategy: usize,
        count: usize,
    },
    #[error("profile has {got} entries, game has {expected} players")]
    ProfileLength { expected: usize, got: usize },
    #[error("payoff table for player {player} has {got} entries, expected {expected}")]
    PayoffLength {
        player: usize,
        expected: usize,
        got: usize,
    },
    #[error("invalid restriction: {0}")]
    InvalidRestriction(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("game file: {0}")]
    Format(String),
    #[error(transparent)]
    Rational(#[from] RationalError),
}

/// Read access shared by full games, restricted games and post-contract
/// games. Profiles passed in are always full length; players that a view
/// pins have a one-element `available` range.
pub trait GameView: Sync {
    fn num_players(&self) -> usize;

    /// Full strategy count `k_i` of the underlying game.
    fn strategy_count(&self, player: usize) -> usize;

    fn available(&self, player: usize) -> RangeInclusive<usize> {
        1..=self.strategy_count(player)
    }

    /// Whether `player` takes part in the view (fixed players do not).
    fn is_free(&self, _player: usize) -> bool {
        true
    }

    /// `u_i(s)`. Callers guarantee `s` is a valid full profile.
    fn utility(&self, player: usize, s: &[usize]) -> Rational;

    /// Whether two profiles lead to the same realized play. Views that
    /// reassign strategies before payoff evaluation override this.
    fn same_outcome(&self, a: &[usize], b: &[usize]) -> bool {
        a == b
    }

    fn players(&self) -> Vec<usize> {
        (0..self.num_players()).filter(|&i| self.is_free(i)).collect()
    }

    fn counts(&self) -> Vec<usize> {
        (0..self.num_players())
            .map(|i| self.strategy_count(i))
            .collect()
    }

    fn ranges(&self) -> Vec<RangeInclusive<usize>> {
        (0..self.num_players()).map(|i| self.available(i)).collect()
    }

    /// Most cooperative available profile.
    fn cooperative_profile(&self) -> Profile {
        Profile((0..self.num_players()).map(|i| *self.available(i).start()).collect())
    }

    fn profiles(&self) -> ProfileIter {
        ProfileIter::new(&self.ranges())
    }

    fn utilities(&self, s: &[usize]) -> Vec<Rational> {
        (0..self.num_players()).map(|i| self.utility(i, s)).collect()
    }

    fn total(&self, s: &[usize]) -> Rational {
        (0..self.num_players()).map(|i| self.utility(i, s)).sum()
    }

    fn contains_profile(&self, s: &[usize]) -> bool {
        s.len() == self.num_players()
            && s.iter()
                .enumerate()
                .all(|(i, x)| self.available(i).contains(x))
    }
}

/// Dense payoff tensor. Profiles are flattened mixed-radix with player 0 the
/// most significant digit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Game {
    counts: Vec<usize>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl Game {
    pub fn new(counts: Vec<usize>, payoffs: Vec<Vec<Rational>>) -> Result<Self, GameError> {
        if counts.len() < 2 {
            return Err(GameError::TooFewPlayers(counts.len()));
        }
        if counts.len() > Coalition::MAX_PLAYERS {
            return Err(GameError::Shape(format!(
                "at most {} players supported",
                Coalition::MAX_PLAYERS
            )));
        }
        for (player, &count) in counts.iter().enumerate() {
            if count < 2 {
                return Err(GameError::TooFewStrategies { player, count });
            }
        }
        let size = counts
            .iter()
            .try_fold(1usize, |acc, &k| acc.checked_mul(k))
            .ok_or_else(|| GameError::Shape("profile space too large".into()))?;
        if payoffs.len() != counts.len() {
            return Err(GameError::Shape(format!(
                "{} payoff tables for {} players",
                payoffs.len(),
                counts.len()
            )));
        }
        for (player, table) in payoffs.iter().enumerate() {
            if table.len() != size {
                return Err(GameError::PayoffLength {
                    player,
                    expected: size,
                    got: table.len(),
                });
            }
        }
        let mut strides = vec![1; counts.len()];
        for i in (0..counts.len() - 1).rev() {
            strides[i] = strides[i + 1] * counts[i + 1];
        }
        Ok(Game {
            counts,
            strides,
            payoffs,
        })
    }

    /// Builds a game by evaluating `f(player, profile)` on every profile.
    pub fn from_fn(
        counts: Vec<usize>,
        mut f: impl FnMut(usize, &[usize]) -> Rational,
    ) -> Result<Self, GameError> {
        let n = counts.len();
        let ranges: Vec<_> = counts.iter().map(|&k| 1..=k).collect();
        let mut payoffs = vec![Vec::new(); n];
        for s in ProfileIter::new(&ranges) {
            for (i, table) in payoffs.iter_mut().enumerate() {
                table.push(f(i, &s));
            }
        }
        Game::new(counts, payoffs)
    }

    /// Materializes any view over the same shape (restricted views pin
    /// nothing here: every profile of the underlying shape is evaluated).
    pub fn materialize<V: GameView + ?Sized>(view: &V) -> Game {
        Game::from_fn(view.counts(), |i, s| view.utility(i, s)).expect("view shape is valid")
    }

    pub fn n(&self) -> usize {
        self.counts.len()
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs[0].len()
    }

    pub fn payoff_table(&self, player: usize) -> &[Rational] {
        &self.payoffs[player]
    }

    pub fn index_of(&self, s: &[usize]) -> usize {
        s.iter()
            .zip(&self.strides)
            .map(|(&x, &stride)| (x - 1) * stride)
            .sum()
    }

    pub fn check_profile(&self, s: &[usize]) -> Result<(), GameError> {
        if s.len() != self.n() {
            return Err(GameError::ProfileLength {
                expected: self.n(),
                got: s.len(),
            });
        }
        for (player, (&strategy, &count)) in s.iter().zip(&self.counts).enumerate() {
            if strategy == 0 || strategy > count {
                return Err(GameError::StrategyOutOfRange {
                    player,
                    strategy,
                    count,
                });
            }
        }
        Ok(())
    }

    /// Checked `u_i(s)`.
    pub fn payoff(&self, player: usize, s: &[usize]) -> Result<Rational, GameError> {
        if player >= self.n() {
            return Err(GameError::PlayerOutOfRange(player));
        }
        self.check_profile(s)?;
        Ok(self.payoffs[player][self.index_of(s)])
    }

    pub fn cooperative(&self) -> Profile {
        Profile::cooperative(self.n())
    }

    pub fn all_defect(&self) -> Profile {
        Profile::all_defect(&self.counts)
    }

    pub fn map_payoffs(&self, mut f: impl FnMut(usize, &[usize], Rational) -> Rational) -> Game {
        Game::from_fn(self.counts.clone(), |i, s| f(i, s, self.utility(i, s)))
            .expect("same shape")
    }
}

impl GameView for Game {
    fn num_players(&self) -> usize {
        self.counts.len()
    }

    fn strategy_count(&self, player: usize) -> usize {
        self.counts[player]
    }

    fn utility(&self, player: usize, s: &[usize]) -> Rational {
        self.payoffs[player][self.index_of(s)]
    }
}

impl<V: GameView + ?Sized> GameView for &V {
    fn num_players(&self) -> usize {
        (**self).num_players()
    }
    fn strategy_count(&self, player: usize) -> usize {
        (**self).strategy_count(player)
    }
    fn available(&self, player: usize) -> RangeInclusive<usize> {
        (**self).available(player)
    }
    fn is_free(&self, player: usize) -> bool {
        (**self).is_free(player)
    }
    fn utility(&self, player: usize, s: &[usize]) -> Rational {
        (**self).utility(player, s)
    }
    fn same_outcome(&self, a: &[usize], b: &[usize]) -> bool {
        (**self).same_outcome(a, b)
    }
}

/// Pareto-optimality under transferable utility: `s` maximizes the payoff
/// sum over every available profile.
pub fn pareto_optimal_transferable<V: GameView + ?Sized>(g: &V, s: &[usize]) -> bool {
    let target = g.total(s);
    g.profiles().all(|p| g.total(&p) <= target)
}

/// Whether `k` (weakly or strictly) dominates `k2` for `player` against
/// every available profile of the others.
pub fn dominates<V: GameView + ?Sized>(
    g: &V,
    player: usize,
    k: usize,
    k2: usize,
    strict: bool,
) -> bool {
    let mut ranges = g.ranges();
    ranges[player] = 1..=1;
    ProfileIter::new(&ranges).all(|mut s| {
        s[player] = k;
        let a = g.utility(player, &s);
        s[player] = k2;
        let b = g.utility(player, &s);
        if strict {
            a > b
        } else {
            a >= b
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;

    #[test]
    fn table1_lookups() {
        let g = fixtures::table1();
        assert_eq!(g.payoff(0, &[1, 1]).unwrap(), int(10));
        assert_eq!(g.payoff(1, &[2, 1]).unwrap(), int(1));
        assert_eq!(g.payoff(1, &[2, 1]).unwrap(), g.payoff(1, &[2, 1]).unwrap());
    }

    #[test]
    fn lookups_reject_bad_indices() {
        let g = fixtures::table1();
        assert_eq!(g.payoff(2, &[1, 1]), Err(GameError::PlayerOutOfRange(2)));
        assert!(matches!(
            g.payoff(0, &[3, 1]),
            Err(GameError::StrategyOutOfRange { strategy: 3, .. })
        ));
        assert!(matches!(
            g.payoff(0, &[0, 1]),
            Err(GameError::StrategyOutOfRange { strategy: 0, .. })
        ));
        assert!(matches!(
            g.payoff(0, &[1]),
            Err(GameError::ProfileLength { .. })
        ));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(
            Game::new(vec![2], vec![vec![]]),
            Err(GameError::TooFewPlayers(1))
        );
        assert!(matches!(
            Game::new(vec![2, 1], vec![vec![int(0); 2]; 2]),
            Err(GameError::TooFewStrategies { player: 1, .. })
        ));
        assert!(matches!(
            Game::new(vec![2, 2], vec![vec![int(0); 4], vec![int(0); 3]]),
            Err(GameError::PayoffLength { player: 1, .. })
        ));
    }

    #[test]
    fn profile_order_table1() {
        let g = fixtures::table1();
        let ps: Vec<Vec<usize>> = g.profiles().map(|p| p.0).collect();
        assert_eq!(ps, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(fixtures::tables12_13().profiles().count(), 8);
    }

    #[test]
    fn pareto_fixtures() {
        let t1 = fixtures::table1();
        assert!(pareto_optimal_transferable(&t1, &[1, 1]));
        assert!(!pareto_optimal_transferable(&t1, &[2, 2]));
        let t18 = fixtures::tables18_19();
        assert_eq!(t18.total(&[2, 1, 1]), int(24));
        assert_eq!(t18.total(&[1, 1, 1]), int(25));
        assert!(pareto_optimal_transferable(&t18, &[1, 1, 1]));
    }

    #[test]
    fn dominance_fixtures() {
        assert!(dominates(&fixtures::table1(), 0, 2, 1, true));
        assert!(!dominates(&fixtures::table1(), 0, 1, 2, false));
        assert!(dominates(&fixtures::table2(), 0, 1, 2, true));
        let g = fixtures::tables5_6();
        for i in 0..3 {
            assert!(dominates(&g, i, 1, 1, false));
            assert!(!dominates(&g, i, 1, 1, true));
        }
    }
}
