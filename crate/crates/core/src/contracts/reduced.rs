use num_traits::Zero;

use super::{ContractError, LosingContract};
use crate::game::{Game, GameView, Profile};
use crate::rational::Rational;

/// Reassigns the strictly deepest cooperator, if there is exactly one, to
/// the depth of the deepest among the others. Depth is `k_j − s_j`; ties
/// leave the profile as is.
pub fn compensate(counts: &[usize], s: &[usize]) -> Profile {
    let depth: Vec<usize> = counts.iter().zip(s).map(|(&k, &x)| k - x).collect();
    let top = *depth.iter().max().expect("nonempty");
    let mut at_top = depth.iter().enumerate().filter(|(_, &d)| d == top);
    let (i, _) = at_top.next().expect("max exists");
    if at_top.next().is_some() {
        return Profile(s.to_vec());
    }
    let second = depth
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &d)| d)
        .max()
        .expect("at least two players");
    let mut out = s.to_vec();
    out[i] = counts[i] - second;
    Profile(out)
}

/// The post-contract game with reduced amounts: no payoff is pushed below
/// the original all-defect payoff `u_i(s*)` unless it was already below it,
/// and the strictly deepest cooperator is compensated before payoffs are
/// read.
#[derive(Debug, Clone)]
pub struct ReducedGame<'a> {
    base: &'a Game,
    contract: &'a LosingContract,
    baseline: Vec<Rational>,
}

impl<'a> ReducedGame<'a> {
    pub fn new(base: &'a Game, contract: &'a LosingContract) -> Result<Self, ContractError> {
        contract.check_shape(base)?;
        let star = base.all_defect();
        let baseline = (0..base.n()).map(|i| base.utility(i, &star)).collect();
        Ok(ReducedGame {
            base,
            contract,
            baseline,
        })
    }

    pub fn base(&self) -> &'a Game {
        self.base
    }

    pub fn contract(&self) -> &'a LosingContract {
        self.contract
    }

    /// `u_i(s*)`.
    pub fn baseline(&self, i: usize) -> Rational {
        self.baseline[i]
    }

    /// `max{u − r_{i,k}, min{u_i(s*), u}}` on `s` as given.
    pub fn closed_form(&self, i: usize, s: &[usize]) -> Rational {
        let u = self.base.utility(i, s);
        let r = self.contract.amount(i, s[i]);
        (u - r).max(self.baseline[i].min(u))
    }

    /// `r*_{i,k}` on `s` as given, by cases.
    pub fn reduced_amount(&self, i: usize, s: &[usize]) -> Rational {
        let u = self.base.utility(i, s);
        let c = self.contract.amount(i, s[i]);
        let b = self.baseline[i];
        if b < u - c {
            c
        } else if b < u {
            u - b
        } else {
            Rational::zero()
        }
    }

    /// `u − r*_{i,k}` on `s` as given.
    pub fn case_split(&self, i: usize, s: &[usize]) -> Rational {
        self.base.utility(i, s) - self.reduced_amount(i, s)
    }

    pub fn realized(&self, s: &[usize]) -> Profile {
        compensate(self.base.strategy_counts(), s)
    }

    pub fn materialize(&self) -> Game {
        Game::materialize(self)
    }
}

impl GameView for ReducedGame<'_> {
    fn num_players(&self) -> usize {
        self.base.n()
    }

    fn strategy_count(&self, player: usize) -> usize {
        self.base.strategy_count(player)
    }

    fn utility(&self, player: usize, s: &[usize]) -> Rational {
        self.closed_form(player, &self.realized(s))
    }

    fn same_outcome(&self, a: &[usize], b: &[usize]) -> bool {
        a == b || self.realized(a) == self.realized(b)
    }
}
