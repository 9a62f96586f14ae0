//! Pure Nash and strong Nash equilibria by exhaustive deviation scans.
//!
//! Utility is transferable: a coalition blocks a profile when some joint
//! deviation raises (or, in strict mode, fails to lower) the sum of its
//! members' payoffs. Coalitions are scanned by size and then
//! lexicographically, deviations in mixed-radix order, so the first
//! counterexample is canonical.

use rayon::prelude::*;
use serde::Serialize;

use crate::game::{coalitions_of, Coalition, GameView, Profile, ProfileIter};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub coalition: Coalition,
    pub deviation: Profile,
    #[serde(with = "crate::rational::serde_rational")]
    pub before: Rational,
    #[serde(with = "crate::rational::serde_rational")]
    pub after: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumReport {
    pub profile: Profile,
    pub is_nash: bool,
    pub is_unique_nash: bool,
    pub is_strong: bool,
    pub strict: bool,
    pub counterexample: Option<Counterexample>,
}

fn coalition_sum<V: GameView + ?Sized>(g: &V, c: Coalition, s: &[usize]) -> Rational {
    c.members().map(|i| g.utility(i, s)).sum()
}

/// First profitable unilateral deviation, players ascending then strategies
/// ascending.
pub fn nash_counterexample<V: GameView + ?Sized>(g: &V, s: &[usize]) -> Option<Counterexample> {
    for i in g.players() {
        let here = g.utility(i, s);
        for k in g.available(i) {
            if k == s[i] {
                continue;
            }
            let mut t = s.to_vec();
            t[i] = k;
            let there = g.utility(i, &t);
            if there > here {
                return Some(Counterexample {
                    coalition: Coalition::singleton(i),
                    deviation: Profile(t),
                    before: here,
                    after: there,
                });
            }
        }
    }
    None
}

pub fn is_nash<V: GameView + ?Sized>(g: &V, s: &[usize]) -> bool {
    nash_counterexample(g, s).is_none()
}

pub fn all_nash<V: GameView + ?Sized>(g: &V) -> Vec<Profile> {
    g.profiles().filter(|s| is_nash(g, s)).collect()
}

fn blocks(before: Rational, after: Rational, strict: bool) -> bool {
    if strict {
        after >= before
    } else {
        after > before
    }
}

/// Deviations of `c` from `s` that blocks `s`, in mixed-radix order over the
/// members' available strategies. Deviations that lead to the same realized
/// play as `s` are not deviations and are skipped.
fn coalition_counterexample<V: GameView + ?Sized>(
    g: &V,
    s: &[usize],
    c: Coalition,
    strict: bool,
) -> Option<Counterexample> {
    let members = c.member_vec();
    let before = coalition_sum(g, c, s);
    let ranges: Vec<_> = members.iter().map(|&m| g.available(m)).collect();
    let mut t = s.to_vec();
    for frag in ProfileIter::new(&ranges) {
        if members.iter().zip(frag.iter()).all(|(&m, &x)| s[m] == x) {
            continue;
        }
        for (x, &m) in members.iter().enumerate() {
            t[m] = frag[x];
        }
        if g.same_outcome(s, &t) {
            continue;
        }
        let after = coalition_sum(g, c, &t);
        if blocks(before, after, strict) {
            return Some(Counterexample {
                coalition: c,
                deviation: Profile(t),
                before,
                after,
            });
        }
    }
    None
}

/// Naive scan over every coalition of free players and every deviation.
/// Coalitions are checked in parallel; the canonical first hit is kept.
pub fn strong_nash_counterexample<V: GameView + ?Sized>(
    g: &V,
    s: &[usize],
    strict: bool,
) -> Option<Counterexample> {
    coalitions_of(&g.players())
        .into_par_iter()
        .find_map_first(|c| coalition_counterexample(g, s, c, strict))
}

/// [`strong_nash_counterexample`] over the coalitions accepted by `keep`.
pub fn strong_nash_counterexample_among<V: GameView + ?Sized>(
    g: &V,
    s: &[usize],
    strict: bool,
    keep: impl Fn(Coalition) -> bool + Sync,
) -> Option<Counterexample> {
    coalitions_of(&g.players())
        .into_par_iter()
        .filter(|&c| keep(c))
        .find_map_first(|c| coalition_counterexample(g, s, c, strict))
}

/// Same answer as [`strong_nash_counterexample`], but skips a coalition when
/// the sum of its members' best payoffs anywhere in the view cannot block.
pub fn strong_nash_counterexample_pruned<V: GameView + ?Sized>(
    g: &V,
    s: &[usize],
    strict: bool,
) -> Option<Counterexample> {
    let n = g.num_players();
    let mut best: Vec<Option<Rational>> = vec![None; n];
    for p in g.profiles() {
        for i in g.players() {
            let u = g.utility(i, &p);
            if best[i].map_or(true, |b| u > b) {
                best[i] = Some(u);
            }
        }
    }
    for c in coalitions_of(&g.players()) {
        let ceiling: Rational = c.members().map(|i| best[i].expect("free player")).sum();
        if !blocks(coalition_sum(g, c, s), ceiling, strict) {
            continue;
        }
        if let Some(x) = coalition_counterexample(g, s, c, strict) {
            return Some(x);
        }
    }
    None
}

pub fn is_strong_nash<V: GameView + ?Sized>(g: &V, s: &[usize], strict: bool) -> EquilibriumReport {
    let nash = all_nash(g);
    let is_nash = nash.iter().any(|p| p.0 == s);
    let counterexample = strong_nash_counterexample(g, s, strict);
    EquilibriumReport {
        profile: Profile(s.to_vec()),
        is_nash,
        is_unique_nash: is_nash && nash.len() == 1,
        is_strong: counterexample.is_none(),
        strict,
        counterexample,
    }
}

/// Report for the plain Nash question; the counterexample, if any, is a
/// profitable unilateral deviation.
pub fn nash_report<V: GameView + ?Sized>(g: &V, s: &[usize]) -> EquilibriumReport {
    let nash = all_nash(g);
    let counterexample = nash_counterexample(g, s);
    let is_nash = counterexample.is_none();
    EquilibriumReport {
        profile: Profile(s.to_vec()),
        is_nash,
        is_unique_nash: is_nash && nash.len() == 1,
        is_strong: false,
        strict: true,
        counterexample,
    }
}

/// A strategy of `player` strictly better than each other available one
/// against every available profile of the others.
pub fn strictly_dominant<V: GameView + ?Sized>(g: &V, player: usize) -> Option<usize> {
    let own = g.available(player);
    let mut others = g.ranges();
    others[player] = 1..=1;
    'cand: for k in own.clone() {
        for mut s in ProfileIter::new(&others) {
            s[player] = k;
            let here = g.utility(player, &s);
            for k2 in own.clone().filter(|&x| x != k) {
                s[player] = k2;
                if g.utility(player, &s) >= here {
                    continue 'cand;
                }
            }
        }
        return Some(k);
    }
    None
}

/// The profile of strictly dominant strategies, if every free player has
/// one. Fixed players keep their pinned strategy.
pub fn dominant_solve<V: GameView + ?Sized>(g: &V) -> Option<Profile> {
    let mut s = g.cooperative_profile();
    for i in g.players() {
        s[i] = strictly_dominant(g, i)?;
    }
    Some(s)
}
