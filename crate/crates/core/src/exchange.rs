//! Transfer contracts between players: rewarding cooperation in a 2x2 game
//! and punishing defection in a 3-player binary game. Unlike losing
//! contracts these move payoff around instead of destroying it, and the
//! examples here show how that goes wrong.

use num_traits::Zero;
use serde::Serialize;

use crate::equilibrium::{all_nash, strong_nash_counterexample, Counterexample};
use crate::fixtures;
use crate::game::{Coalition, Game, GameView, Profile};
use crate::rational::{int, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("exchange contracts need {0}")]
pub struct ShapeError(&'static str);

/// Player `i` pays `p[i]` to the opponent whenever the opponent cooperates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RewardContract {
    pub p: [Rational; 2],
}

pub fn apply_reward(g: &Game, c: &RewardContract) -> Result<Game, ShapeError> {
    if g.strategy_counts() != [2, 2] {
        return Err(ShapeError("a 2x2 game"));
    }
    let [p1, p2] = c.p;
    Ok(g.map_payoffs(|i, s, u| {
        // transfer from player 1 to player 2
        let t = match (s[0], s[1]) {
            (1, 1) => p1 - p2,
            (1, 2) => -p2,
            (2, 1) => p1,
            _ => Rational::zero(),
        };
        if i == 0 {
            u - t
        } else {
            u + t
        }
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plan {
    /// A lone betrayer pays the next player (1→2, 2→3, 3→1); two betrayers
    /// pay each other; three pay as directed.
    Conditional,
    /// Always the next player.
    Directed,
    /// Half to each of the other two.
    EqualSplit,
}

/// Player `i` pays out `r[i]` every time it betrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PunishContract {
    pub r: [Rational; 3],
    pub plan: Plan,
}

/// `out[j]` is what `payer` hands to `j` at `s`.
fn punish_flows(c: &PunishContract, s: &[usize], payer: usize) -> [Rational; 3] {
    let mut out = [Rational::zero(); 3];
    let amount = c.r[payer];
    let next = (payer + 1) % 3;
    match c.plan {
        Plan::Directed => out[next] = amount,
        Plan::EqualSplit => {
            for (j, o) in out.iter_mut().enumerate() {
                if j != payer {
                    *o = amount / int(2);
                }
            }
        }
        Plan::Conditional => {
            let betrayers: Vec<usize> = (0..3).filter(|&j| s[j] == 2).collect();
            if betrayers.len() == 2 {
                let other = betrayers.into_iter().find(|&j| j != payer).expect("two");
                out[other] = amount;
            } else {
                out[next] = amount;
            }
        }
    }
    out
}

pub fn apply_punish(g: &Game, c: &PunishContract) -> Result<Game, ShapeError> {
    if g.strategy_counts() != [2, 2, 2] {
        return Err(ShapeError("a 2x2x2 game"));
    }
    Ok(g.map_payoffs(|i, s, u| {
        let mut v = u;
        for payer in (0..3).filter(|&j| s[j] == 2) {
            let flows = punish_flows(c, s, payer);
            v += flows[i];
            if payer == i {
                v -= c.r[i];
            }
        }
        v
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FailureCheck {
    pub name: &'static str,
    pub reproduced: bool,
    pub detail: String,
}

fn fmt_payoffs(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

fn coalition_failure(
    g: &Game,
    expect_profile: &[usize],
    expect_payoffs: &[Rational],
    bound: Rational,
) -> (bool, String) {
    let at = g.utilities(expect_profile);
    let e = g.cooperative();
    let pair = Coalition::from_members(&[0, 1]).expect("valid");
    let x = strong_nash_counterexample(g, &e, true);
    let ok = at == expect_payoffs
        && matches!(&x, Some(Counterexample { coalition, deviation, after, before })
            if *coalition == pair && deviation.0 == expect_profile && *after > bound && *before == bound);
    let detail = match x {
        Some(x) => format!(
            "{} pays {}; coalition {} deviates to {} for {} > {}",
            Profile(expect_profile.to_vec()),
            fmt_payoffs(&at),
            x.coalition,
            x.deviation,
            x.after,
            x.before
        ),
        None => "cooperation is strong".into(),
    };
    (ok, detail)
}

/// The three failure modes of transfer contracts.
pub fn reproduce_failures() -> Vec<FailureCheck> {
    let mut out = Vec::new();

    let t9 = fixtures::table9();
    let m = apply_reward(&t9, &RewardContract { p: [int(5), int(3)] }).expect("2x2");
    let before = t9.utility(0, &[1, 1]);
    let after = m.utility(0, &[1, 1]);
    let optimizes = crate::contracts::optimizes_game(&t9, &m, &[1, 1]);
    out.push(FailureCheck {
        name: "reward p=(5,3) does not optimize",
        reproduced: after < before && !optimizes && m == fixtures::table11(),
        detail: format!("player 1 at (1,1): {before} -> {after}"),
    });

    let t12 = fixtures::tables12_13();
    let c = PunishContract {
        r: [int(2); 3],
        plan: Plan::Conditional,
    };
    let m = apply_punish(&t12, &c).expect("2x2x2");
    let nash = all_nash(&m);
    let bad = Profile(vec![2, 2, 2]);
    out.push(FailureCheck {
        name: "conditional punish r=(2,2,2) keeps (2,2,2) an equilibrium",
        reproduced: nash.contains(&bad) && m == fixtures::tables16_17(),
        detail: format!(
            "equilibria: {}",
            nash.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ")
        ),
    });

    let t18 = fixtures::tables18_19();
    let bound = int(14);
    for (plan, name, expect) in [
        (Plan::Directed, "directed punish r1=10 is not strong", [6, 15, 3]),
        (Plan::EqualSplit, "equal-split punish r1=10 is not strong", [6, 10, 8]),
    ] {
        let c = PunishContract {
            r: [int(10), int(2), int(2)],
            plan,
        };
        let m = apply_punish(&t18, &c).expect("2x2x2");
        let (reproduced, detail) =
            coalition_failure(&m, &[2, 1, 1], &expect.map(int), bound);
        out.push(FailureCheck {
            name,
            reproduced,
            detail,
        });
    }
    out
}
