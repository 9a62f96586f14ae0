//! Losing contracts: each player irrevocably forfeits `r_{i,k}` when it
//! plays strategy `k`. Nothing is transferred between players.

mod file;
mod reduced;
mod signing;
mod verify;

use num_traits::Zero;

use crate::equilibrium::is_nash;
use crate::game::{Game, GameError, GameView, ProfileIter};
use crate::pd::{first_violation_of, Violation};
use crate::rational::{int, Rational};

pub use file::{ContractFile, Scheme};
pub use reduced::{compensate, ReducedGame};
pub use signing::{signing_game, signing_game_view, Selection, SigningError, SigningReport};
pub use verify::{
    classify, is_resolution, verify_reduced, verify_theorem1, verify_theorem2, Classification,
    Resolution, TheoremFailure, TheoremReport,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ContractError {
    #[error("contract shape does not match the game: {0}")]
    Shape(String),
    #[error("game is not a prisoner's dilemma (players {} and {})", .0.i + 1, .0.j + 1)]
    NotPd(Box<Violation>),
    #[error("invalid epsilon: {0}")]
    InvalidEpsilon(String),
    #[error(transparent)]
    Game(#[from] GameError),
}

/// Per player, per strategy: `ε_{i,k}` with `ε_{i,1} = 0`.
pub type Ladder = Vec<Vec<Rational>>;

/// `ε_{i,k} = k − 1`.
pub fn default_ladder(counts: &[usize]) -> Ladder {
    counts
        .iter()
        .map(|&k| (0..k as i64).map(int).collect())
        .collect()
}

/// The same `ε` for every non-cooperative strategy.
pub fn flat_epsilons(counts: &[usize], eps: Rational) -> Ladder {
    counts
        .iter()
        .map(|&k| {
            (1..=k)
                .map(|x| if x == 1 { Rational::zero() } else { eps })
                .collect()
        })
        .collect()
}

fn check_ladder_shape(counts: &[usize], eps: &Ladder) -> Result<(), ContractError> {
    if eps.len() != counts.len() || eps.iter().zip(counts).any(|(e, &k)| e.len() != k) {
        return Err(ContractError::Shape("epsilon table".into()));
    }
    Ok(())
}

/// All `ε_{i,k} > 0` for `k ≥ 2`.
pub fn check_positive(counts: &[usize], eps: &Ladder) -> Result<(), ContractError> {
    check_ladder_shape(counts, eps)?;
    for (i, e) in eps.iter().enumerate() {
        for (k, x) in e.iter().enumerate().skip(1) {
            if *x <= Rational::zero() {
                return Err(ContractError::InvalidEpsilon(format!(
                    "epsilon for player {} strategy {} is {x}, must be positive",
                    i + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// `0 < ε_{i,2} < ε_{i,3} < …`.
pub fn check_ladder(counts: &[usize], eps: &Ladder) -> Result<(), ContractError> {
    check_positive(counts, eps)?;
    for (i, e) in eps.iter().enumerate() {
        for k in 2..e.len() {
            if e[k] <= e[k - 1] {
                return Err(ContractError::InvalidEpsilon(format!(
                    "ladder for player {} is not increasing at strategy {}",
                    i + 1,
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LosingContract {
    /// `amounts[i][k-1] = r_{i,k}`, with `r_{i,1} = 0`.
    amounts: Vec<Vec<Rational>>,
    epsilons: Option<Ladder>,
}

impl LosingContract {
    /// Amounts are given per player for strategies `2..=k_i`.
    pub fn from_amounts(amounts: Vec<Vec<Rational>>) -> Self {
        let amounts = amounts
            .into_iter()
            .map(|row| std::iter::once(Rational::zero()).chain(row).collect())
            .collect();
        LosingContract {
            amounts,
            epsilons: None,
        }
    }

    /// The same amount for every non-cooperative strategy of every player.
    pub fn uniform(counts: &[usize], r: Rational) -> Self {
        Self::from_amounts(counts.iter().map(|&k| vec![r; k - 1]).collect())
    }

    pub fn zero(counts: &[usize]) -> Self {
        Self::uniform(counts, Rational::zero())
    }

    pub fn with_epsilons(mut self, eps: Ladder) -> Self {
        self.epsilons = Some(eps);
        self
    }

    pub fn amount(&self, player: usize, strategy: usize) -> Rational {
        self.amounts[player][strategy - 1]
    }

    pub fn amounts(&self) -> &[Vec<Rational>] {
        &self.amounts
    }

    pub fn epsilons(&self) -> Option<&Ladder> {
        self.epsilons.as_ref()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.amounts.iter().map(Vec::len).collect()
    }

    pub fn check_shape<V: GameView + ?Sized>(&self, g: &V) -> Result<(), ContractError> {
        if self.counts() != g.counts() {
            return Err(ContractError::Shape(format!(
                "contract covers {:?} strategies, game has {:?}",
                self.counts(),
                g.counts()
            )));
        }
        Ok(())
    }
}

/// `max_{s_{−i}} {u_i(k, s_{−i}) − u_i(k', s_{−i})}`.
pub fn max_gain<V: GameView + ?Sized>(g: &V, i: usize, k: usize, k_from: usize) -> Rational {
    let mut others: Vec<_> = (0..g.num_players())
        .map(|p| 1..=g.strategy_count(p))
        .collect();
    others[i] = 1..=1;
    ProfileIter::new(&others)
        .map(|mut s| {
            s[i] = k;
            let a = g.utility(i, &s);
            s[i] = k_from;
            a - g.utility(i, &s)
        })
        .max()
        .expect("nonempty profile space")
}

/// `r_{i,k} = max_{s_{−i}} {u_i(k, s_{−i}) − u_i(1, s_{−i})} + ε_{i,k}`,
/// unclamped.
pub fn lemma1_amounts(g: &Game, eps: &Ladder) -> Result<LosingContract, ContractError> {
    check_positive(g.strategy_counts(), eps)?;
    let amounts = (0..g.n())
        .map(|i| {
            (2..=g.strategy_count(i))
                .map(|k| max_gain(g, i, k, 1) + eps[i][k - 1])
                .collect()
        })
        .collect();
    Ok(LosingContract::from_amounts(amounts).with_epsilons(eps.clone()))
}

/// Telescoping sum of maximal adjacent gains plus `ε_{i,k}`, with no
/// precondition on the game.
pub fn telescoping_amounts(g: &Game, eps: &Ladder) -> Result<LosingContract, ContractError> {
    check_ladder(g.strategy_counts(), eps)?;
    let amounts = (0..g.n())
        .map(|i| {
            let mut acc = Rational::zero();
            (2..=g.strategy_count(i))
                .map(|k| {
                    acc += max_gain(g, i, k, k - 1);
                    acc + eps[i][k - 1]
                })
                .collect()
        })
        .collect();
    Ok(LosingContract::from_amounts(amounts).with_epsilons(eps.clone()))
}

/// [`telescoping_amounts`] on a validated dilemma.
pub fn theorem1_amounts(g: &Game, eps: &Ladder) -> Result<LosingContract, ContractError> {
    if let Some(v) = first_violation_of(g) {
        return Err(ContractError::NotPd(Box::new(v)));
    }
    telescoping_amounts(g, eps)
}

/// `ũ_i(k, s_{−i}) = u_i(k, s_{−i}) − r_{i,k}`.
pub fn apply_losing(g: &Game, c: &LosingContract) -> Result<Game, ContractError> {
    c.check_shape(g)?;
    Ok(g.map_payoffs(|i, s, u| u - c.amount(i, s[i])))
}

/// Every affected payoff (`r_{i,k} ≠ 0`) ends strictly below the
/// cooperative payoff against the same opponents.
pub fn in_feasible_region(g: &Game, c: &LosingContract) -> bool {
    if c.check_shape(g).is_err() {
        return false;
    }
    for s in g.profiles() {
        for i in 0..g.n() {
            let k = s[i];
            if k == 1 || c.amount(i, k).is_zero() {
                continue;
            }
            let after = g.utility(i, &s) - c.amount(i, k);
            if after >= g.utility(i, &s.with(i, 1)) {
                return false;
            }
        }
    }
    true
}

/// `e` is Nash in `modified` and nobody's payoff at `e` went down.
pub fn optimizes_game<A: GameView + ?Sized, B: GameView + ?Sized>(
    original: &A,
    modified: &B,
    e: &[usize],
) -> bool {
    is_nash(modified, e)
        && (0..original.num_players()).all(|i| modified.utility(i, e) >= original.utility(i, e))
}

pub fn optimizes(g: &Game, c: &LosingContract, e: &[usize]) -> Result<bool, ContractError> {
    let m = apply_losing(g, c)?;
    Ok(optimizes_game(g, &m, e))
}

/// Context-dependent amounts `r̃_{i,k}(s_{−i}) = u_i(k, s_{−i}) − u_i(1, s_{−i}) + ε_{i,k}`:
/// whoever leaves cooperation ends at `u_i(1, s_{−i}) − ε_{i,k}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TildeContract {
    epsilons: Ladder,
}

pub fn tilde_amounts(g: &Game, eps: &Ladder) -> Result<TildeContract, ContractError> {
    if let Some(v) = first_violation_of(g) {
        return Err(ContractError::NotPd(Box::new(v)));
    }
    TildeContract::from_ladder(g.strategy_counts(), eps)
}

impl TildeContract {
    /// No dilemma check; threshold games fail it below the threshold.
    pub fn from_ladder(counts: &[usize], eps: &Ladder) -> Result<Self, ContractError> {
        check_ladder(counts, eps)?;
        Ok(TildeContract {
            epsilons: eps.clone(),
        })
    }

    pub fn epsilons(&self) -> &Ladder {
        &self.epsilons
    }

    pub fn amount(&self, g: &Game, i: usize, s: &[usize]) -> Rational {
        let k = s[i];
        if k == 1 {
            return Rational::zero();
        }
        let mut coop = s.to_vec();
        coop[i] = 1;
        g.utility(i, s) - g.utility(i, &coop) + self.epsilons[i][k - 1]
    }

    pub fn apply(&self, g: &Game) -> Game {
        g.map_payoffs(|i, s, u| u - self.amount(g, i, s))
    }

    /// Whether `r̃_{i,k}` at the cooperative context equals `c`'s `r_{i,k}`
    /// for every `(i, k)`; the first mismatch otherwise.
    pub fn matches_at_cooperation(
        &self,
        g: &Game,
        c: &LosingContract,
    ) -> Result<(), (usize, usize, Rational, Rational)> {
        for i in 0..g.n() {
            for k in 2..=g.strategy_count(i) {
                let s = g.cooperative().with(i, k);
                let t = self.amount(g, i, &s);
                if t != c.amount(i, k) {
                    return Err((i, k, t, c.amount(i, k)));
                }
            }
        }
        Ok(())
    }
}
