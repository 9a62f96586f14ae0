use std::fmt;
use std::ops::RangeInclusive;

use serde::Serialize;

use super::{subsets_of_size, Coalition, GameError, GameView, ProfileIter};
use crate::rational::Rational;

/// Which players are pinned and, for the rest, the most cooperative strategy
/// still available. Available sets are suffixes `{start_i, …, k_i}`: the most
/// cooperative strategies are the ones removed first and the least
/// cooperative strategy always survives.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Restriction {
    fixed: Vec<Option<usize>>,
    start: Vec<usize>,
}

impl Restriction {
    pub fn identity(n: usize) -> Self {
        Restriction {
            fixed: vec![None; n],
            start: vec![1; n],
        }
    }

    pub fn fixed(&self) -> &[Option<usize>] {
        &self.fixed
    }

    pub fn suffix_starts(&self) -> &[usize] {
        &self.start
    }

    pub fn fixed_coalition(&self) -> Option<Coalition> {
        let members: Vec<usize> = (0..self.fixed.len())
            .filter(|&i| self.fixed[i].is_some())
            .collect();
        Coalition::from_members(&members)
    }

    pub fn num_fixed(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_some()).count()
    }

    pub fn is_identity(&self) -> bool {
        self.num_fixed() == 0 && self.start.iter().all(|&s| s == 1)
    }

    fn range(&self, player: usize, count: usize) -> RangeInclusive<usize> {
        match self.fixed[player] {
            Some(s) => s..=s,
            None => self.start[player]..=count,
        }
    }

    /// Number of profiles of the restricted game.
    pub fn profile_count(&self, counts: &[usize]) -> usize {
        (0..counts.len())
            .map(|i| self.range(i, counts[i]).count())
            .product()
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.fixed.len() {
            if i > 0 {
                f.write_str(" ")?;
            }
            match self.fixed[i] {
                Some(s) => write!(f, "{}={s}", i + 1)?,
                None => write!(f, "{}>={}", i + 1, self.start[i])?,
            }
        }
        f.write_str("]")
    }
}

impl Serialize for Restriction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            fixed: Vec<[usize; 2]>,
            suffix_start: &'a [usize],
        }
        Repr {
            fixed: self
                .fixed
                .iter()
                .enumerate()
                .filter_map(|(i, f)| f.map(|s| [i + 1, s]))
                .collect(),
            suffix_start: &self.start,
        }
        .serialize(s)
    }
}

/// A base view with some players pinned and the others limited to a suffix
/// of their strategies.
#[derive(Debug, Clone)]
pub struct RestrictedGame<'a, G: GameView + ?Sized> {
    base: &'a G,
    restriction: Restriction,
}

/// Restricts `base`: `fixed` lists `(player, strategy)` pairs and
/// `suffix_start[i]` is the most cooperative strategy left to player `i`
/// (ignored for fixed players). Fixing players requires at least two free
/// players to remain.
pub fn restrict<'a, G: GameView + ?Sized>(
    base: &'a G,
    fixed: &[(usize, usize)],
    suffix_start: &[usize],
) -> Result<RestrictedGame<'a, G>, GameError> {
    RestrictedGame {
        base,
        restriction: Restriction::identity(base.num_players()),
    }
    .restrict(fixed, suffix_start)
}

impl<'a, G: GameView + ?Sized> RestrictedGame<'a, G> {
    pub fn from_restriction(base: &'a G, restriction: Restriction) -> Self {
        debug_assert_eq!(restriction.fixed.len(), base.num_players());
        RestrictedGame { base, restriction }
    }

    pub fn base(&self) -> &'a G {
        self.base
    }

    pub fn restriction(&self) -> &Restriction {
        &self.restriction
    }

    /// Restricts further. Suffix starts combine by pointwise maximum; a
    /// player may be fixed only once and only at an available strategy.
    pub fn restrict(
        &self,
        fixed: &[(usize, usize)],
        suffix_start: &[usize],
    ) -> Result<RestrictedGame<'a, G>, GameError> {
        let n = self.base.num_players();
        if suffix_start.len() != n {
            return Err(GameError::InvalidRestriction(format!(
                "{} suffix starts for {n} players",
                suffix_start.len()
            )));
        }
        let mut r = self.restriction.clone();
        for (i, &st) in suffix_start.iter().enumerate() {
            let k = self.base.strategy_count(i);
            if st == 0 || st > k {
                return Err(GameError::InvalidRestriction(format!(
                    "suffix start {st} outside 1..={k} for player {}",
                    i + 1
                )));
            }
            if r.fixed[i].is_none() {
                r.start[i] = r.start[i].max(st);
            }
        }
        for &(player, strategy) in fixed {
            if player >= n {
                return Err(GameError::PlayerOutOfRange(player));
            }
            if r.fixed[player].is_some() {
                return Err(GameError::InvalidRestriction(format!(
                    "player {} fixed twice",
                    player + 1
                )));
            }
            if !self.available(player).contains(&strategy) {
                return Err(GameError::InvalidRestriction(format!(
                    "strategy {strategy} not available to player {}",
                    player + 1
                )));
            }
            r.fixed[player] = Some(strategy);
            r.start[player] = strategy;
        }
        let nf = r.num_fixed();
        if nf > 0 && nf + 2 > n {
            return Err(GameError::InvalidRestriction(format!(
                "fixing {nf} of {n} players leaves fewer than two free players"
            )));
        }
        Ok(RestrictedGame {
            base: self.base,
            restriction: r,
        })
    }
}

impl<G: GameView + ?Sized> GameView for RestrictedGame<'_, G> {
    fn num_players(&self) -> usize {
        self.base.num_players()
    }

    fn strategy_count(&self, player: usize) -> usize {
        self.base.strategy_count(player)
    }

    fn available(&self, player: usize) -> RangeInclusive<usize> {
        let own = self
            .restriction
            .range(player, self.base.strategy_count(player));
        let b = self.base.available(player);
        (*own.start()).max(*b.start())..=(*own.end()).min(*b.end())
    }

    fn is_free(&self, player: usize) -> bool {
        self.restriction.fixed[player].is_none() && self.base.is_free(player)
    }

    fn utility(&self, player: usize, s: &[usize]) -> Rational {
        self.base.utility(player, s)
    }

    fn same_outcome(&self, a: &[usize], b: &[usize]) -> bool {
        self.base.same_outcome(a, b)
    }
}

/// Every restriction with at most `min(max_fixed, n − 2)` fixed players, the
/// unrestricted game included. Order: number of fixed players ascending,
/// fixed set lexicographic, fixed strategies mixed-radix, then suffix starts
/// of the free players mixed-radix.
pub fn enumerate_restrictions(counts: &[usize], max_fixed: usize) -> Vec<Restriction> {
    let n = counts.len();
    let players: Vec<usize> = (0..n).collect();
    let top = max_fixed.min(n.saturating_sub(2));
    let mut out = Vec::new();
    for size in 0..=top {
        let mut sets: Vec<Vec<usize>> = Vec::new();
        if size == 0 {
            sets.push(Vec::new());
        } else {
            subsets_of_size(&players, size, &mut |a| sets.push(a.to_vec()));
        }
        for a in sets {
            let free: Vec<usize> = players.iter().copied().filter(|i| !a.contains(i)).collect();
            let fixed_ranges: Vec<_> = a.iter().map(|&i| 1..=counts[i]).collect();
            let free_ranges: Vec<_> = free.iter().map(|&i| 1..=counts[i]).collect();
            for s_a in ProfileIter::new(&fixed_ranges) {
                for starts in ProfileIter::new(&free_ranges) {
                    let mut r = Restriction::identity(n);
                    for (j, &i) in a.iter().enumerate() {
                        r.fixed[i] = Some(s_a[j]);
                        r.start[i] = s_a[j];
                    }
                    for (j, &i) in free.iter().enumerate() {
                        r.start[i] = starts[j];
                    }
                    out.push(r);
                }
            }
        }
    }
    out
}

/// [`enumerate_restrictions`] applied to a view.
pub fn enumerate_restricted_games<'a, G: GameView + ?Sized>(
    g: &'a G,
    max_fixed: usize,
) -> impl Iterator<Item = RestrictedGame<'a, G>> + 'a {
    enumerate_restrictions(&g.counts(), max_fixed)
        .into_iter()
        .map(move |r| RestrictedGame::from_restriction(g, r))
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::game::Game;
    use std::collections::HashSet;

    fn cube333() -> Game {
        Game::from_fn(vec![3, 3, 3], |i, s| {
            Rational::from_integer((i * 100 + s[0] * 9 + s[1] * 3 + s[2]) as i64)
        })
        .unwrap()
    }

    #[test]
    fn suffix_profile_count() {
        let g = cube333();
        let r = restrict(&g, &[], &[2, 1, 1]).unwrap();
        assert_eq!(r.profiles().count(), 18);
        let expected: usize = (0..3).map(|i| 3 - r.restriction().start[i] + 1).product();
        assert_eq!(r.profiles().count(), expected);
    }

    #[test]
    fn fixing_player_three_gives_table12() {
        let g = fixtures::tables12_13();
        let r = restrict(&g, &[(2, 1)], &[1, 1, 1]).unwrap();
        let cells: Vec<_> = r.profiles().map(|p| r.utilities(&p)).collect();
        let t12: Vec<Vec<Rational>> = [[7, 7, 7], [4, 8, 4], [8, 5, 3], [5, 6, 1]]
            .iter()
            .map(|c| c.iter().map(|&x| Rational::from_integer(x)).collect())
            .collect();
        assert_eq!(cells, t12);
        assert_eq!(r.players(), vec![0, 1]);
    }

    #[test]
    fn identity_restriction_matches_base() {
        let g = fixtures::tables12_13();
        let r = restrict(&g, &[], &[1, 1, 1]).unwrap();
        assert!(r.restriction().is_identity());
        let a: Vec<_> = g.profiles().collect();
        let b: Vec<_> = r.profiles().collect();
        assert_eq!(a, b);
        for p in &a {
            assert_eq!(g.utilities(p), r.utilities(p));
        }
    }

    #[test]
    fn restriction_composes_by_pointwise_max() {
        let g = cube333();
        let once = restrict(&g, &[], &[2, 1, 3]).unwrap();
        let twice = restrict(&g, &[], &[1, 1, 3])
            .unwrap()
            .restrict(&[], &[2, 1, 2])
            .unwrap();
        assert_eq!(once.restriction(), twice.restriction());
        let a: Vec<_> = once.profiles().collect();
        let b: Vec<_> = twice.profiles().collect();
        assert_eq!(a, b);
        for p in &a {
            assert_eq!(once.utilities(p), twice.utilities(p));
        }
    }

    #[test]
    fn too_many_fixed_players_is_rejected() {
        let g = fixtures::tables12_13();
        assert!(matches!(
            restrict(&g, &[(0, 1), (1, 1)], &[1, 1, 1]),
            Err(GameError::InvalidRestriction(_))
        ));
        let t1 = fixtures::table1();
        assert!(restrict(&t1, &[(0, 1)], &[1, 1]).is_err());
        assert!(restrict(&t1, &[], &[3, 1]).is_err());
    }

    #[test]
    fn table1_has_four_restricted_games() {
        let rs = enumerate_restrictions(&[2, 2], 5);
        assert_eq!(rs.len(), 4);
        assert!(rs[0].is_identity());
    }

    #[test]
    fn enumeration_counts_and_uniqueness() {
        // Oracle: sum over fixed sets A of prod_{i in A} k_i * prod_{i not in A} k_i.
        for counts in [vec![2, 2, 2], vec![3, 2, 4], vec![2, 3, 2, 3]] {
            let n = counts.len();
            let total: usize = counts.iter().product();
            for max_fixed in 0..n {
                let top = max_fixed.min(n - 2);
                let mut sets = 0usize;
                for mask in 0u32..(1 << n) {
                    if (mask.count_ones() as usize) <= top {
                        sets += 1;
                    }
                }
                let rs = enumerate_restrictions(&counts, max_fixed);
                assert_eq!(rs.len(), sets * total);
                let keys: HashSet<_> = rs.iter().cloned().collect();
                assert_eq!(keys.len(), rs.len());
            }
        }
    }

    #[test]
    fn tables12_13_includes_induced_games() {
        let rs = enumerate_restrictions(&[2, 2, 2], 1);
        for s3 in 1..=2 {
            assert!(rs
                .iter()
                .any(|r| r.fixed() == [None, None, Some(s3)] && r.suffix_starts()[..2] == [1, 1]));
        }
    }
}
