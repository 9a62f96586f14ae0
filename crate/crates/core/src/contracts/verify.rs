use rayon::prelude::*;
use serde::Serialize;

use super::{apply_losing, in_feasible_region, optimizes_game, LosingContract, ReducedGame};
use crate::equilibrium::{
    all_nash, strong_nash_counterexample, strong_nash_counterexample_among, Counterexample,
};
use crate::game::{
    coalitions_of, enumerate_restrictions, Game, GameView, Profile, ProfileIter, RestrictedGame,
    Restriction,
};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremFailure {
    /// `None` for the unrestricted game.
    pub restriction: Option<Restriction>,
    pub check: &'static str,
    pub counterexample: Option<Counterexample>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TheoremReport {
    pub theorem: u8,
    pub passed: bool,
    pub restricted_games: usize,
    pub covered: usize,
    pub degenerate: usize,
    pub unclassified: usize,
    /// Whether `E` is Nash after the contract with nobody worse off at `E`.
    pub optimizes: bool,
    /// Covered games where strictness fails only through coalitions whose
    /// members all sit at their `u_i(s*)` floor under joint cooperation.
    pub floor_ties: usize,
    pub failure: Option<TheoremFailure>,
}

impl TheoremReport {
    fn new(theorem: u8) -> Self {
        TheoremReport {
            theorem,
            passed: true,
            restricted_games: 0,
            covered: 0,
            degenerate: 0,
            unclassified: 0,
            optimizes: false,
            floor_ties: 0,
            failure: None,
        }
    }

    fn fail(mut self, f: TheoremFailure) -> Self {
        self.passed = false;
        self.failure = Some(f);
        self
    }
}

fn failure(
    restriction: Option<&Restriction>,
    check: &'static str,
    counterexample: Option<Counterexample>,
    detail: String,
) -> TheoremFailure {
    TheoremFailure {
        restriction: restriction.cloned(),
        check,
        counterexample,
        detail,
    }
}

fn profiles_text(ps: &[Profile]) -> String {
    ps.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
}

/// Joint cooperation must be the only Nash equilibrium and a strict strong
/// one.
fn unique_and_strong<V: GameView + ?Sized>(
    view: &V,
    restriction: Option<&Restriction>,
) -> Option<TheoremFailure> {
    let coop = view.cooperative_profile();
    let nash = all_nash(view);
    if nash != [coop.clone()] {
        return Some(failure(
            restriction,
            "unique nash",
            None,
            format!("expected only {coop}, found [{}]", profiles_text(&nash)),
        ));
    }
    strong_nash_counterexample(view, &coop, true).map(|x| {
        failure(
            restriction,
            "strict strong nash",
            Some(x),
            format!("{coop} is blocked"),
        )
    })
}

/// Applies `c` to `g` and certifies, by enumeration: feasibility, that `E`
/// is optimized, unique and strictly strong, and that in every restricted
/// game with at most `max_fixed` pinned players joint cooperation is the
/// unique and a strictly strong equilibrium.
pub fn verify_theorem1(g: &Game, c: &LosingContract, max_fixed: usize) -> TheoremReport {
    let report = TheoremReport::new(1);
    let m = match apply_losing(g, c) {
        Ok(m) => m,
        Err(e) => return report.fail(failure(None, "shape", None, e.to_string())),
    };
    let e = g.cooperative();
    if !in_feasible_region(g, c) {
        return report.fail(failure(None, "feasible region", None, String::new()));
    }
    if !optimizes_game(g, &m, &e) {
        return report.fail(failure(None, "optimizes", None, String::new()));
    }
    let mut report = report;
    report.optimizes = true;
    if let Some(f) = unique_and_strong(&m, None) {
        return report.fail(f);
    }
    let rs = enumerate_restrictions(g.strategy_counts(), max_fixed);
    report.restricted_games = rs.len();
    let first = rs.par_iter().find_map_first(|r| {
        let view = RestrictedGame::from_restriction(&m, r.clone());
        unique_and_strong(&view, Some(r))
    });
    match first {
        Some(f) => report.fail(f),
        None => report,
    }
}

/// How a restricted game of the reduced game falls under the theorem.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Classification {
    /// Some free player with a non-cooperative most cooperative strategy
    /// keeps its full amount when everybody plays their most cooperative
    /// strategy.
    pub covered: bool,
    /// No free player can get above its original all-defect payoff.
    pub degenerate: bool,
}

pub fn classify<V: GameView + ?Sized>(rg: &ReducedGame<'_>, view: &V) -> Classification {
    let coop = view.cooperative_profile();
    let covered = view.players().into_iter().any(|i| {
        coop[i] >= 2 && rg.reduced_amount(i, &coop) == rg.contract().amount(i, coop[i])
    });
    let degenerate = view.profiles().all(|s| {
        view.players()
            .into_iter()
            .all(|i| view.utility(i, &s) <= rg.baseline(i))
    });
    Classification {
        covered,
        degenerate,
    }
}

/// Strict check at `coop`. On failure, also tells whether every blocking
/// coalition consists of players sitting at their `u_i(s*)` floor.
fn strict_at<V: GameView + ?Sized>(
    rg: &ReducedGame<'_>,
    view: &V,
    coop: &[usize],
) -> Option<(Counterexample, bool)> {
    let x = strong_nash_counterexample(view, coop, true)?;
    let floored = |i: usize| view.utility(i, coop) == rg.baseline(i);
    let other = strong_nash_counterexample_among(view, coop, true, |c| !c.members().all(floored));
    Some((x, other.is_none()))
}

fn floor_note(floored_only: bool) -> String {
    if floored_only {
        "only coalitions of players at their u(s*) floor block, by a tie".into()
    } else {
        String::new()
    }
}

/// Covered restrictions need a strict strong equilibrium at joint
/// cooperation; degenerate ones a non-strict one paying exactly `u_i(s*)`.
fn check_classified<V: GameView + ?Sized>(
    rg: &ReducedGame<'_>,
    view: &V,
    restriction: &Restriction,
) -> Checked {
    let class = classify(rg, view);
    let coop = view.cooperative_profile();
    let r = Some(restriction);
    let mut out = Checked {
        class,
        floor_tie: false,
        failure: None,
    };
    if class.covered {
        if let Some((x, floored_only)) = strict_at(rg, view, &coop) {
            out.floor_tie = floored_only;
            out.failure = Some(failure(
                r,
                "covered: strict strong nash",
                Some(x),
                floor_note(floored_only),
            ));
            return out;
        }
    }
    if class.degenerate {
        if let Some(x) = strong_nash_counterexample(view, &coop, false) {
            out.failure = Some(failure(r, "degenerate: strong nash", Some(x), String::new()));
            return out;
        }
        for i in view.players() {
            let u = view.utility(i, &coop);
            if u != rg.baseline(i) {
                out.failure = Some(failure(
                    r,
                    "degenerate: payoff equals u(s*)",
                    None,
                    format!("player {} gets {u}, u(s*) = {}", i + 1, rg.baseline(i)),
                ));
                return out;
            }
        }
    }
    out
}

struct Checked {
    class: Classification,
    floor_tie: bool,
    failure: Option<TheoremFailure>,
}

fn tally(mut report: TheoremReport, results: Vec<Checked>) -> TheoremReport {
    report.restricted_games = results.len();
    let mut first = None;
    for c in results {
        match (c.class.covered, c.class.degenerate) {
            (true, _) => report.covered += 1,
            (false, true) => report.degenerate += 1,
            (false, false) => report.unclassified += 1,
        }
        report.floor_ties += c.floor_tie as usize;
        if first.is_none() {
            first = c.failure;
        }
    }
    match first {
        Some(f) => report.fail(f),
        None => report,
    }
}

/// Reduced amounts with compensation: `E` must be strictly strong in the
/// full game; restricted games are classified and checked as in
/// [`check_classified`]. Whether the contract optimizes `E` is reported but
/// not required: compensation reassigns a player at `E` itself when it alone
/// has the most strategies.
pub fn verify_theorem2(g: &Game, c: &LosingContract, max_fixed: usize) -> TheoremReport {
    verify_reduced(g, c, max_fixed, 2)
}

/// [`verify_theorem2`] reporting under another theorem number; the threshold
/// game check is the same procedure.
pub fn verify_reduced(g: &Game, c: &LosingContract, max_fixed: usize, theorem: u8) -> TheoremReport {
    let mut report = TheoremReport::new(theorem);
    let rg = match ReducedGame::new(g, c) {
        Ok(rg) => rg,
        Err(e) => return report.fail(failure(None, "shape", None, e.to_string())),
    };
    let e = g.cooperative();
    report.optimizes = optimizes_game(g, &rg, &e);
    if let Some((x, floored_only)) = strict_at(&rg, &rg, &e) {
        report.floor_ties += floored_only as usize;
        return report.fail(failure(
            None,
            "strict strong nash",
            Some(x),
            floor_note(floored_only),
        ));
    }
    let results: Vec<_> = enumerate_restrictions(g.strategy_counts(), max_fixed)
        .par_iter()
        .map(|r| {
            let view = RestrictedGame::from_restriction(&rg, r.clone());
            check_classified(&rg, &view, r)
        })
        .collect();
    tally(report, results)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "reason", rename_all = "snake_case")]
pub enum Resolution {
    Resolution,
    NotResolution(String),
    Indeterminate(String),
}

/// Whether the contract turns `g` into a resolution of it. With three or
/// more players: (a) no coalition, facing everyone else at their least
/// cooperative strategies, can beat its worst payoff over the strong
/// equilibria of the modified game; (b) every player weakly prefers every
/// strong equilibrium of the modified game to every Nash equilibrium of
/// `g`, and somebody strictly. With two players (a) is dropped and plain
/// Nash equilibria of the modified game are used.
pub fn is_resolution(g: &Game, c: &LosingContract) -> Resolution {
    let m = match apply_losing(g, c) {
        Ok(m) => m,
        Err(e) => return Resolution::Indeterminate(e.to_string()),
    };
    let n = g.n();
    let targets: Vec<Profile> = if n == 2 {
        all_nash(&m)
    } else {
        m.profiles()
            .filter(|s| strong_nash_counterexample(&m, s, true).is_none())
            .collect()
    };
    if targets.is_empty() {
        return Resolution::Indeterminate("the modified game has no equilibrium to compare".into());
    }
    let worst: Vec<Rational> = (0..n)
        .map(|i| targets.iter().map(|s| m.utility(i, s)).min().expect("nonempty"))
        .collect();
    if n >= 3 {
        let players: Vec<usize> = (0..n).collect();
        for a in coalitions_of(&players) {
            let bound: Rational = a.members().map(|i| worst[i]).sum();
            let ranges: Vec<_> = (0..n)
                .map(|p| {
                    let k = g.strategy_count(p);
                    if a.contains(p) {
                        1..=k
                    } else {
                        k..=k
                    }
                })
                .collect();
            for s in ProfileIter::new(&ranges) {
                let sum: Rational = a.members().map(|i| g.utility(i, &s)).sum();
                if sum > bound {
                    return Resolution::NotResolution(format!(
                        "coalition {a} gets {sum} at {s} in the original game, above {bound}"
                    ));
                }
            }
        }
    }
    for s in all_nash(g) {
        for t in &targets {
            let mut strict = false;
            for i in 0..n {
                let (before, after) = (g.utility(i, &s), m.utility(i, t));
                if before > after {
                    return Resolution::NotResolution(format!(
                        "player {} gets {before} at {s} but {after} at {t}",
                        i + 1
                    ));
                }
                strict |= before < after;
            }
            if !strict {
                return Resolution::NotResolution(format!("nobody gains moving from {s} to {t}"));
            }
        }
    }
    Resolution::Resolution
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracts::{default_ladder, flat_epsilons, lemma1_amounts, theorem1_amounts};
    use crate::fixtures;
    use crate::game::Coalition;
    use crate::rational::{frac, int};

    #[test]
    fn theorem1_on_fixtures() {
        let t1 = fixtures::table1();
        let r = verify_theorem1(&t1, &LosingContract::uniform(&[2, 2], int(6)), 0);
        assert!(r.passed, "{r:?}");
        assert_eq!(r.restricted_games, 4);
        let g = fixtures::tables12_13();
        let c = theorem1_amounts(&g, &default_ladder(&[2, 2, 2])).unwrap();
        assert!(verify_theorem1(&g, &c, 1).passed);
    }

    #[test]
    fn theorem1_fails_off_dilemmas() {
        let g = fixtures::tables5_6();
        let c = lemma1_amounts(&g, &flat_epsilons(&[2, 2, 2], int(1))).unwrap();
        let r = verify_theorem1(&g, &c, 1);
        let f = r.failure.unwrap();
        assert_eq!(f.check, "strict strong nash");
        assert!(f.restriction.is_none());
        assert_eq!(
            f.counterexample.unwrap().coalition,
            Coalition::from_members(&[0, 1]).unwrap()
        );
    }

    #[test]
    fn theorem2_on_fixtures() {
        let t1 = fixtures::table1();
        let c = LosingContract::uniform(&[2, 2], int(6));
        let r = verify_theorem2(&t1, &c, 0);
        assert!(r.passed, "{r:?}");
        let g = fixtures::tables12_13();
        let c = theorem1_amounts(&g, &default_ladder(&[2, 2, 2])).unwrap();
        let r = verify_theorem2(&g, &c, 1);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn degenerate_boundary() {
        // only player 1 keeps a choice; everybody else is at k_j
        let g = fixtures::tables12_13();
        let c = theorem1_amounts(&g, &default_ladder(&[2, 2, 2])).unwrap();
        let rg = ReducedGame::new(&g, &c).unwrap();
        let r = crate::game::restrict(&rg, &[], &[1, 2, 2]).unwrap();
        let class = classify(&rg, &r);
        assert!(class.degenerate);
        for s in r.profiles() {
            for i in 0..3 {
                assert_eq!(r.utility(i, &s), rg.baseline(i));
            }
        }
        assert!(check_classified(&rg, &r, r.restriction()).failure.is_none());
    }

    #[test]
    fn resolution_examples() {
        let t1 = fixtures::table1();
        assert_eq!(
            is_resolution(&t1, &LosingContract::uniform(&[2, 2], int(6))),
            Resolution::Resolution
        );
        let g = fixtures::tables12_13();
        let c = theorem1_amounts(&g, &default_ladder(&[2, 2, 2])).unwrap();
        assert_eq!(is_resolution(&g, &c), Resolution::Resolution);
        assert!(matches!(
            is_resolution(&t1, &LosingContract::uniform(&[2, 2], frac(1, 2))),
            Resolution::NotResolution(_)
        ));
    }
}
