//! Threshold public goods games. Player `i` contributes `c_{i,k}` when it
//! plays `k`; if the contributions reach the threshold the pot is multiplied
//! by `a` and shared equally, otherwise everybody is refunded.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::contracts::{
    default_ladder, signing_game_view, telescoping_amounts, verify_reduced, ContractError,
    LosingContract, ReducedGame, Selection, SigningError, SigningReport, TheoremReport, TildeContract,
};
use crate::game::{enumerate_restrictions, Game, GameView, RestrictedGame, Restriction};
use crate::pd::{block_violation, extract_block, first_violation_of, Violation};
use crate::rational::{int, Rational, Q};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScheduleError {
    #[error("a schedule needs at least 2 players")]
    TooFewPlayers,
    #[error("player {0}: contributions must strictly decrease to 0 over at least 2 strategies")]
    Contributions(usize),
    #[error("threshold must be positive")]
    Threshold,
    #[error("schedule file: {0}")]
    Format(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContributionSchedule {
    contributions: Vec<Vec<Rational>>,
    threshold: Rational,
    multiplier: Rational,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleFile {
    contributions: Vec<Vec<Q>>,
    threshold: Q,
    multiplier: Q,
}

impl ContributionSchedule {
    pub fn new(
        contributions: Vec<Vec<Rational>>,
        threshold: Rational,
        multiplier: Rational,
    ) -> Result<Self, ScheduleError> {
        if contributions.len() < 2 {
            return Err(ScheduleError::TooFewPlayers);
        }
        for (i, row) in contributions.iter().enumerate() {
            let ok = row.len() >= 2
                && row.last().is_some_and(|x| x.is_zero())
                && row.windows(2).all(|w| w[0] > w[1]);
            if !ok {
                return Err(ScheduleError::Contributions(i + 1));
            }
        }
        if threshold <= Rational::zero() {
            return Err(ScheduleError::Threshold);
        }
        Ok(ContributionSchedule {
            contributions,
            threshold,
            multiplier,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, ScheduleError> {
        let f: ScheduleFile =
            serde_json::from_str(text).map_err(|e| ScheduleError::Format(e.to_string()))?;
        Self::new(
            f.contributions
                .into_iter()
                .map(|r| r.into_iter().map(|q| q.0).collect())
                .collect(),
            f.threshold.0,
            f.multiplier.0,
        )
    }

    pub fn to_json(&self) -> String {
        let f = ScheduleFile {
            contributions: self
                .contributions
                .iter()
                .map(|r| r.iter().copied().map(Q).collect())
                .collect(),
            threshold: Q(self.threshold),
            multiplier: Q(self.multiplier),
        };
        serde_json::to_string(&f).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.contributions.len()
    }

    pub fn counts(&self) -> Vec<usize> {
        self.contributions.iter().map(Vec::len).collect()
    }

    pub fn contribution(&self, i: usize, k: usize) -> Rational {
        self.contributions[i][k - 1]
    }

    pub fn threshold(&self) -> Rational {
        self.threshold
    }

    pub fn multiplier(&self) -> Rational {
        self.multiplier
    }

    pub fn total(&self, s: &[usize]) -> Rational {
        s.iter()
            .enumerate()
            .map(|(i, &k)| self.contribution(i, k))
            .sum()
    }

    pub fn payoff(&self, i: usize, s: &[usize]) -> Rational {
        let keep = self.contribution(i, 1);
        let total = self.total(s);
        if total >= self.threshold {
            keep - self.contribution(i, s[i]) + self.multiplier / int(self.n() as i64) * total
        } else {
            keep
        }
    }

    /// Full contributions cannot reach the threshold.
    pub fn meaningless(&self) -> bool {
        self.total(&vec![1; self.n()]) < self.threshold
    }
}

pub fn build_pgg(sched: &ContributionSchedule) -> Game {
    Game::from_fn(sched.counts(), |i, s| sched.payoff(i, s)).expect("schedule shape")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub passed: bool,
    pub meaningless: bool,
    /// Restricted games whose smallest possible total meets the threshold.
    pub restrictions_checked: usize,
    pub restrictions_skipped: usize,
    /// 2x2 blocks whose every corner meets the threshold.
    pub blocks_checked: usize,
    #[serde(skip)]
    pub failure: Option<(Option<Restriction>, Violation)>,
    pub failure_text: Option<String>,
}

/// Every funded restricted game must be a dilemma. A restricted game counts
/// as funded when its least cooperative profile meets the threshold; since
/// free players contribute nothing at `k_i` that only happens through fixed
/// players, so every 2x2 block whose four corners are funded is checked as
/// well.
pub fn validate_order_c(sched: &ContributionSchedule, g: &Game, max_fixed: usize) -> OrderReport {
    let mut report = OrderReport {
        passed: true,
        meaningless: sched.meaningless(),
        restrictions_checked: 0,
        restrictions_skipped: 0,
        blocks_checked: 0,
        failure: None,
        failure_text: None,
    };
    for r in enumerate_restrictions(g.strategy_counts(), max_fixed) {
        let view = RestrictedGame::from_restriction(g, r.clone());
        let floor: Vec<usize> = (0..g.n()).map(|i| *view.available(i).end()).collect();
        if sched.total(&floor) < sched.threshold() {
            report.restrictions_skipped += 1;
            continue;
        }
        report.restrictions_checked += 1;
        if report.failure.is_none() {
            if let Some(v) = first_violation_of(&view) {
                report.failure = Some((Some(r), v));
            }
        }
    }
    let n = g.n();
    for s in g.profiles() {
        for i in 0..n {
            for j in i + 1..n {
                if s[i] == g.strategy_count(i) || s[j] == g.strategy_count(j) {
                    continue;
                }
                let mut low = s.to_vec();
                low[i] += 1;
                low[j] += 1;
                if sched.total(&low) < sched.threshold() {
                    continue;
                }
                report.blocks_checked += 1;
                if report.failure.is_some() {
                    continue;
                }
                let block = extract_block(g, i, j, &s);
                if let Some((culprit, link)) = block_violation(&block) {
                    report.failure = Some((
                        None,
                        Violation {
                            i,
                            j,
                            profile: s.clone(),
                            culprit,
                            link,
                        },
                    ));
                }
            }
        }
    }
    if let Some((r, v)) = &report.failure {
        report.passed = false;
        let p = if v.culprit == 0 { v.i } else { v.j };
        report.failure_text = Some(format!(
            "{}players {} and {} at {}: player {} breaks {}",
            r.as_ref().map(|r| format!("{r}: ")).unwrap_or_default(),
            v.i + 1,
            v.j + 1,
            v.profile,
            p + 1,
            v.link.label()
        ));
    }
    report
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theorem3Report {
    pub passed: bool,
    pub theorem: TheoremReport,
    pub signing: Option<SigningReport>,
    pub signing_error: Option<String>,
}

/// Reduced amounts with compensation on the threshold game, as for
/// Theorem 2, plus all-or-void signing dominance.
pub fn verify_theorem3(g: &Game, c: &LosingContract, max_fixed: usize) -> Theorem3Report {
    let theorem = verify_reduced(g, c, max_fixed, 3);
    let rg = ReducedGame::new(g, c);
    let signing = match &rg {
        Ok(rg) => signing_game_view(g, rg, Selection::StrongVsAllDefect),
        Err(e) => Err(SigningError::Contract(e.clone())),
    };
    let (signing, signing_error) = match signing {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e.to_string())),
    };
    Theorem3Report {
        passed: theorem.passed && signing.as_ref().is_some_and(|s| s.all_dominant),
        theorem,
        signing,
        signing_error,
    }
}

/// Contract amounts for a threshold game: the telescoping formula with the
/// default ladder. The game is not a dilemma below the threshold, so the
/// dilemma precondition is not checked.
pub fn theorem3_amounts(g: &Game) -> Result<LosingContract, ContractError> {
    telescoping_amounts(g, &default_ladder(g.strategy_counts()))
}

pub fn tilde_matches(g: &Game, c: &LosingContract) -> Result<(), (usize, usize, Rational, Rational)> {
    let t = TildeContract::from_ladder(g.strategy_counts(), &default_ladder(g.strategy_counts()))
        .expect("default ladder is increasing");
    t.matches_at_cooperation(g, c)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SymmetricConfig {
    pub n: usize,
    pub counts: Vec<usize>,
}

/// A schedule with one contribution step `δ` shared by everybody, so each
/// player's payoff depends on the others only through the total. `a` is
/// drawn strictly between `n/2` and `n`; the threshold is drawn so that any
/// one player short of full contribution still funds the good, and high
/// enough that crossing it never pays more than an ordinary step.
pub fn gen_symmetric(seed: u64, ns: &[usize], ks: &[usize]) -> ContributionSchedule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let n = ns[rng.gen_range(0..ns.len())];
        let counts: Vec<usize> = (0..n).map(|_| ks[rng.gen_range(0..ks.len())]).collect();
        let step = int(rng.gen_range(1..=3));
        let nn = int(n as i64);
        // a = n/2 + t·n/2 with t in (0, 1)
        let t = Rational::new(rng.gen_range(1..12), 12);
        let a = nn / int(2) * (int(1) + t);
        let kmax = *counts.iter().max().expect("n ≥ 2") as i64;
        let lower = step + int(kmax - 2) * step * nn / a;
        let full: Vec<Rational> = counts.iter().map(|&k| step * int(k as i64 - 1)).collect();
        let sum: Rational = full.iter().sum();
        let upper = full.iter().map(|&f| sum - f).min().expect("n ≥ 2");
        if lower > upper {
            continue;
        }
        let w = Rational::new(rng.gen_range(0..=8), 8);
        let threshold = lower + (upper - lower) * w;
        let contributions = counts
            .iter()
            .map(|&k| (1..=k).map(|x| step * int((k - x) as i64)).collect())
            .collect();
        return ContributionSchedule::new(contributions, threshold, a).expect("valid by construction");
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn example(a: Rational) -> ContributionSchedule {
        let row = vec![int(2), int(1), int(0)];
        ContributionSchedule::new(vec![row.clone(), row.clone(), row], int(3), a).unwrap()
    }

    #[test]
    fn closed_form_examples() {
        let g = build_pgg(&example(int(2)));
        assert_eq!(g.utilities(&[1, 1, 1]), vec![int(4); 3]);
        assert_eq!(g.utilities(&[3, 3, 3]), vec![int(2); 3]);
        let bad = ContributionSchedule::new(vec![vec![int(2), int(1)]; 3], int(3), int(2));
        assert_eq!(bad, Err(ScheduleError::Contributions(1)));
    }

    #[test]
    fn refund_below_threshold() {
        let s = example(int(2));
        let g = build_pgg(&s);
        for p in g.profiles() {
            if s.total(&p) < s.threshold() {
                for i in 0..3 {
                    assert_eq!(g.utility(i, &p), s.contribution(i, 1));
                }
            }
        }
    }

    #[test]
    fn order_c_needs_a_above_half_n() {
        let s = example(int(2));
        let r = validate_order_c(&s, &build_pgg(&s), 1);
        assert!(r.passed, "{r:?}");
        assert!(r.blocks_checked > 0);
        let s = example(int(1));
        let r = validate_order_c(&s, &build_pgg(&s), 1);
        assert!(!r.passed);
        let s = ContributionSchedule::new(vec![vec![int(2), int(1), int(0)]; 3], int(7), int(2)).unwrap();
        let r = validate_order_c(&s, &build_pgg(&s), 1);
        assert!(r.passed && r.meaningless);
    }

    #[test]
    fn theorem3_example() {
        let s = example(int(2));
        let g = build_pgg(&s);
        let c = theorem3_amounts(&g).unwrap();
        let r = verify_theorem3(&g, &c, 1);
        assert!(r.theorem.optimizes);
        assert!(r.signing.as_ref().unwrap().all_dominant, "{r:?}");
        assert!(tilde_matches(&g, &c).is_ok());
        // Joint cooperation is strictly strong in the full game, but with
        // players 2 and 3 limited to {2, 3} player 1 is compensated down to
        // strategy 2, where its reduced payoff is the refund floor; moving
        // to 3 leaves it at the floor, a tie.
        let f = r.theorem.failure.unwrap();
        assert_eq!(f.restriction.unwrap().suffix_starts(), &[1, 2, 2]);
        let x = f.counterexample.unwrap();
        assert_eq!(x.deviation.0, vec![3, 2, 2]);
        assert_eq!((x.before, x.after), (int(2), int(2)));
        assert!(!r.passed);
    }

    #[test]
    fn schedule_json_round_trip() {
        let s = example(Rational::new(5, 2));
        let back = ContributionSchedule::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(ContributionSchedule::from_json(r#"{"contributions":[[1,0],[1,0]],"threshold":0,"multiplier":1}"#).is_err());
    }
}
