//! Prisoner's dilemma conditions and the structural lemmas that follow from
//! them.
//!
//! A two-player game is a dilemma when every block of contiguous strategies
//! `(k, k+1) × (l, l+1)` satisfies the classical strict chain for both
//! players. An n-player game is a dilemma when every two-player game induced
//! by fixing the remaining players is one. The flat check scans those blocks
//! directly; [`is_pd_recursive`] follows the nested definition literally and
//! exists as an oracle.

use std::collections::HashMap;

use serde::Serialize;

use crate::game::{
    coalitions_of, pareto_optimal_transferable, subsets_of_size, Game, GameError,
    GameView, Profile, ProfileIter,
};
use crate::rational::Rational;

/// Payoffs of a 2×2 block: `u[p][a][b]` is the payoff of the block's player
/// `p` when the first player plays its `a`-th and the second its `b`-th
/// strategy (0 = more cooperative).
pub type Block = [[[Rational; 2]; 2]; 2];

/// Which link of which chain broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ChainLink {
    /// `u(C,D) < u(D,D)`: defection is not better against a defector.
    SuckerBelowPunishment,
    /// `u(D,D) < u(C,C)`: mutual defection is not worse than mutual cooperation.
    PunishmentBelowReward,
    /// `u(C,C) < u(D,C)`: defection is not tempting against a cooperator.
    RewardBelowTemptation,
}

impl ChainLink {
    pub fn label(self) -> &'static str {
        match self {
            ChainLink::SuckerBelowPunishment => "u(C,D) < u(D,D)",
            ChainLink::PunishmentBelowReward => "u(D,D) < u(C,C)",
            ChainLink::RewardBelowTemptation => "u(C,C) < u(D,C)",
        }
    }
}

/// First broken link of the block, checking the first player's chain and
/// then the second's. The second player's chain is the first's with the
/// roles swapped.
pub fn block_violation(u: &Block) -> Option<(usize, ChainLink)> {
    for p in 0..2 {
        let at = |own: usize, other: usize| if p == 0 { u[0][own][other] } else { u[1][other][own] };
        let (cc, cd, dc, dd) = (at(0, 0), at(0, 1), at(1, 0), at(1, 1));
        if !(cd < dd) {
            return Some((p, ChainLink::SuckerBelowPunishment));
        }
        if !(dd < cc) {
            return Some((p, ChainLink::PunishmentBelowReward));
        }
        if !(cc < dc) {
            return Some((p, ChainLink::RewardBelowTemptation));
        }
    }
    None
}

pub fn classical_pd_2x2(u: &Block) -> bool {
    block_violation(u).is_none()
}

/// A 2×2 block failing the chain. `profile` has player `i` at `k`, player
/// `j` at `l`, and everybody else at the fixed context.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub profile: Profile,
    /// Index 0 or 1 into `(i, j)`: whose chain broke.
    pub culprit: usize,
    pub link: ChainLink,
}

impl Violation {
    pub fn block<V: GameView + ?Sized>(&self, g: &V) -> Block {
        extract_block(g, self.i, self.j, &self.profile)
    }
}

impl Serialize for Violation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            players: [usize; 2],
            context: &'a Profile,
            strategies: [[usize; 2]; 2],
            player: usize,
            violated: &'static str,
        }
        let (k, l) = (self.profile[self.i], self.profile[self.j]);
        Repr {
            players: [self.i + 1, self.j + 1],
            context: &self.profile,
            strategies: [[k, k + 1], [l, l + 1]],
            player: if self.culprit == 0 { self.i + 1 } else { self.j + 1 },
            violated: self.link.label(),
        }
        .serialize(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PdVerdict {
    pub is_pd: bool,
    pub first_violation: Option<Violation>,
}

impl PdVerdict {
    fn from_violation(v: Option<Violation>) -> Self {
        PdVerdict {
            is_pd: v.is_none(),
            first_violation: v,
        }
    }
}

/// Block for players `i < j` with `base[i]`, `base[j]` as the more
/// cooperative corner.
pub fn extract_block<V: GameView + ?Sized>(g: &V, i: usize, j: usize, base: &[usize]) -> Block {
    let mut s = base.to_vec();
    let mut u = [[[Rational::default(); 2]; 2]; 2];
    for a in 0..2 {
        for b in 0..2 {
            s[i] = base[i] + a;
            s[j] = base[j] + b;
            u[0][a][b] = g.utility(i, &s);
            u[1][a][b] = g.utility(j, &s);
        }
    }
    u
}

/// Flat check over any view. Pairs are drawn from players with at least two
/// available strategies; all others stay at whatever the view allows.
/// Scan order: pairs ascending, context profiles mixed-radix, then `k`, then
/// `l` ascending.
pub fn is_pd_flat<V: GameView + ?Sized>(g: &V) -> PdVerdict {
    PdVerdict::from_violation(first_violation_of(g))
}

pub fn first_violation_of<V: GameView + ?Sized>(g: &V) -> Option<Violation> {
    let n = g.num_players();
    let ranges = g.ranges();
    let movers: Vec<usize> = (0..n)
        .filter(|&i| g.is_free(i) && ranges[i].clone().count() >= 2)
        .collect();
    for (x, &i) in movers.iter().enumerate() {
        for &j in &movers[x + 1..] {
            let mut ctx = ranges.clone();
            ctx[i] = *ranges[i].start()..=*ranges[i].end() - 1;
            ctx[j] = *ranges[j].start()..=*ranges[j].end() - 1;
            for s in ProfileIter::new(&ctx) {
                let u = extract_block(g, i, j, &s);
                if let Some((culprit, link)) = block_violation(&u) {
                    return Some(Violation {
                        i,
                        j,
                        profile: s,
                        culprit,
                        link,
                    });
                }
            }
        }
    }
    None
}

/// The nested definition: a two-player game is checked block by block; a
/// larger game is a dilemma when every game induced by fixing between 1 and
/// `n − 2` of its players is. Induced games are materialized and memoized by
/// which root players are fixed at what.
pub fn is_pd_recursive(g: &Game) -> PdVerdict {
    let mut memo = HashMap::new();
    let fixed = vec![None; g.n()];
    PdVerdict::from_violation(recurse(g, &fixed, &mut memo))
}

type Memo = HashMap<Vec<Option<usize>>, Option<Violation>>;

fn recurse(root: &Game, fixed: &[Option<usize>], memo: &mut Memo) -> Option<Violation> {
    if let Some(v) = memo.get(fixed) {
        return v.clone();
    }
    let free: Vec<usize> = (0..fixed.len()).filter(|&i| fixed[i].is_none()).collect();
    let result = if free.len() == 2 {
        two_player_definition(root, fixed, free[0], free[1])
    } else {
        let mut found = None;
        'outer: for size in 1..=free.len() - 2 {
            let mut sets = Vec::new();
            subsets_of_size(&free, size, &mut |a| sets.push(a.to_vec()));
            for a in sets {
                let ranges: Vec<_> = a.iter().map(|&p| 1..=root.strategy_count(p)).collect();
                for s_a in ProfileIter::new(&ranges) {
                    let mut next = fixed.to_vec();
                    for (x, &p) in a.iter().enumerate() {
                        next[p] = Some(s_a[x]);
                    }
                    if let Some(v) = recurse(root, &next, memo) {
                        found = Some(v);
                        break 'outer;
                    }
                }
            }
        }
        found
    };
    memo.insert(fixed.to_vec(), result.clone());
    result
}

/// Materializes the two-player induced game and applies the block test to
/// every pair of contiguous strategies.
fn two_player_definition(
    root: &Game,
    fixed: &[Option<usize>],
    i: usize,
    j: usize,
) -> Option<Violation> {
    let full = |a: usize, b: usize| -> Vec<usize> {
        (0..fixed.len())
            .map(|p| {
                if p == i {
                    a
                } else if p == j {
                    b
                } else {
                    fixed[p].expect("fixed")
                }
            })
            .collect()
    };
    let (ki, kj) = (root.strategy_count(i), root.strategy_count(j));
    let induced = Game::from_fn(vec![ki, kj], |p, s| {
        root.utility(if p == 0 { i } else { j }, &full(s[0], s[1]))
    })
    .expect("induced shape");
    for k in 1..ki {
        for l in 1..kj {
            let u = extract_block(&induced, 0, 1, &[k, l]);
            if let Some((culprit, link)) = block_violation(&u) {
                return Some(Violation {
                    i,
                    j,
                    profile: Profile(full(k, l)),
                    culprit,
                    link,
                });
            }
        }
    }
    None
}

/// The three sum inequalities that Pareto-optimality of `(1,1)` imposes on a
/// 2×2 dilemma.
pub fn check_remark2(g: &Game) -> Result<bool, GameError> {
    if g.n() != 2 || g.strategy_counts() != [2, 2] {
        return Err(GameError::Shape("expected a 2x2 two-player game".into()));
    }
    let top = g.total(&[1, 1]);
    Ok([[1, 2], [2, 1], [2, 2]].iter().all(|s| g.total(s) <= top))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaOutcome {
    Holds,
    /// A concrete counterexample, described for humans.
    Violated(String),
    NotPd(Violation),
    Inapplicable(&'static str),
}

impl LemmaOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, LemmaOutcome::Holds)
    }
}

fn require_pd(g: &Game) -> Result<(), LemmaOutcome> {
    match first_violation_of(g) {
        None => Ok(()),
        Some(v) => Err(LemmaOutcome::NotPd(v)),
    }
}

/// If a nonempty proper subset `B` moves to strictly more cooperative
/// strategies, every player outside `B` strictly gains.
pub fn check_lemma3(g: &Game) -> LemmaOutcome {
    if let Err(e) = require_pd(g) {
        return e;
    }
    let n = g.n();
    let players: Vec<usize> = (0..n).collect();
    let everyone = (1u32 << n) - 1;
    for s in g.profiles() {
        for b in coalitions_of(&players) {
            if b.mask() == everyone {
                continue;
            }
            let members = b.member_vec();
            // every member moves to something strictly below its current index
            let ranges: Vec<_> = members.iter().map(|&m| 1..=s[m] - 1).collect();
            if ranges.iter().any(|r| r.is_empty()) {
                continue;
            }
            for moved in ProfileIter::new(&ranges) {
                let mut t = s.clone();
                for (x, &m) in members.iter().enumerate() {
                    t[m] = moved[x];
                }
                for j in (0..n).filter(|&j| !b.contains(j)) {
                    if g.utility(j, &t) <= g.utility(j, &s) {
                        return LemmaOutcome::Violated(format!(
                            "coalition {b} moving {s} -> {t}: player {} goes from {} to {}",
                            j + 1,
                            g.utility(j, &s),
                            g.utility(j, &t)
                        ));
                    }
                }
            }
        }
    }
    LemmaOutcome::Holds
}

/// Whether one player has strictly more strategies than every other.
pub fn has_unique_largest_strategy_set(counts: &[usize]) -> bool {
    let max = counts.iter().copied().max().unwrap_or(0);
    counts.iter().filter(|&&k| k == max).count() == 1
}

/// `u_i(s*) < u_i(E)` for every player, provided the largest strategy count
/// is shared.
pub fn check_lemma4(g: &Game) -> LemmaOutcome {
    if let Err(e) = require_pd(g) {
        return e;
    }
    if has_unique_largest_strategy_set(g.strategy_counts()) {
        return LemmaOutcome::Inapplicable("one player has strictly the most strategies");
    }
    let (e, star) = (g.cooperative(), g.all_defect());
    for i in 0..g.n() {
        if g.utility(i, &star) >= g.utility(i, &e) {
            return LemmaOutcome::Violated(format!(
                "player {}: u(s*) = {} is not below u(E) = {}",
                i + 1,
                g.utility(i, &star),
                g.utility(i, &e)
            ));
        }
    }
    LemmaOutcome::Holds
}

/// With `E` Pareto-optimal, no group of players gains jointly over `E`
/// when the remaining players `A` (`1 ≤ |A| ≤ n − 2`) sit at their least
/// cooperative strategies.
pub fn check_lemma5(g: &Game) -> LemmaOutcome {
    if let Err(e) = require_pd(g) {
        return e;
    }
    let e = g.cooperative();
    if !pareto_optimal_transferable(g, &e) {
        return LemmaOutcome::Inapplicable("E is not Pareto-optimal");
    }
    let n = g.n();
    let players: Vec<usize> = (0..n).collect();
    for a in coalitions_of(&players) {
        if a.len() > n - 2 {
            continue;
        }
        let rest: Vec<usize> = players.iter().copied().filter(|&p| !a.contains(p)).collect();
        let target: Rational = rest.iter().map(|&p| g.utility(p, &e)).sum();
        let ranges: Vec<_> = (0..n)
            .map(|p| {
                if a.contains(p) {
                    let k = g.strategy_count(p);
                    k..=k
                } else {
                    1..=g.strategy_count(p)
                }
            })
            .collect();
        for s in ProfileIter::new(&ranges) {
            let sum: Rational = rest.iter().map(|&p| g.utility(p, &s)).sum();
            if sum > target {
                return LemmaOutcome::Violated(format!(
                    "{a} at least cooperative, others at {s}: sum {sum} exceeds {target}"
                ));
            }
        }
    }
    LemmaOutcome::Holds
}

/// `u_i(s*) < u_i(k, s_{−i})` whenever some other player `j` cooperates at
/// depth `k_j − s_j ≥ k_i − k`.
pub fn check_lemma7(g: &Game) -> LemmaOutcome {
    if let Err(e) = require_pd(g) {
        return e;
    }
    let star = g.all_defect();
    let counts = g.strategy_counts();
    for s in g.profiles() {
        for i in 0..g.n() {
            let k = s[i];
            if k >= counts[i] {
                continue;
            }
            let need = counts[i] - k;
            let covered = (0..g.n()).any(|j| j != i && counts[j] - s[j] >= need);
            if covered && g.utility(i, &star) >= g.utility(i, &s) {
                return LemmaOutcome::Violated(format!(
                    "player {} at {s}: {} is not above u(s*) = {}",
                    i + 1,
                    g.utility(i, &s),
                    g.utility(i, &star)
                ));
            }
        }
    }
    LemmaOutcome::Holds
}

/// Every enumerated restricted game passes the flat check. Returns the
/// first failing restriction.
pub fn check_lemma6(g: &Game, max_fixed: usize) -> LemmaOutcome {
    if let Err(e) = require_pd(g) {
        return e;
    }
    for r in crate::game::enumerate_restricted_games(g, max_fixed) {
        if let Some(v) = first_violation_of(&r) {
            return LemmaOutcome::Violated(format!(
                "restricted game {} fails at players {},{} context {}",
                r.restriction(),
                v.i + 1,
                v.j + 1,
                v.profile
            ));
        }
    }
    LemmaOutcome::Holds
}

/// Pareto test restricted to profiles where exactly one player leaves `E`.
pub fn single_deviation_pareto<V: GameView + ?Sized>(g: &V) -> bool {
    let e = g.cooperative_profile();
    let target = g.total(&e);
    (0..g.num_players()).all(|i| {
        g.available(i)
            .filter(|&k| k != e[i])
            .all(|k| g.total(&e.with(i, k)) <= target)
    })
}

/// Single-deviation and full Pareto verdicts for `E`, in that order.
pub fn remark3(g: &Game) -> (bool, bool) {
    (
        single_deviation_pareto(g),
        pareto_optimal_transferable(g, &g.cooperative()),
    )
}
