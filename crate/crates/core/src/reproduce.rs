//! Regenerates the worked tables from the base games and the stated
//! amounts, and diffs them cell by cell against the bundled copies.

use serde::Serialize;

use crate::contracts::{apply_losing, flat_epsilons, lemma1_amounts, LosingContract};
use crate::exchange::{apply_punish, apply_reward, reproduce_failures, Plan, PunishContract, RewardContract};
use crate::fixtures;
use crate::game::{Game, GameView};
use crate::rational::int;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableCheck {
    pub table: &'static str,
    pub matches: bool,
    /// One line per differing cell.
    pub diff: Vec<String>,
}

pub fn diff_games(got: &Game, want: &Game) -> Vec<String> {
    if got.strategy_counts() != want.strategy_counts() {
        return vec![format!(
            "shape {:?} vs {:?}",
            got.strategy_counts(),
            want.strategy_counts()
        )];
    }
    let mut out = Vec::new();
    for s in want.profiles() {
        let (a, b) = (got.utilities(&s), want.utilities(&s));
        if a != b {
            let fmt = |v: &[crate::Rational]| {
                v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            };
            out.push(format!("{s}: got ({}) want ({})", fmt(&a), fmt(&b)));
        }
    }
    out
}

fn check(table: &'static str, got: &Game, want: &Game) -> TableCheck {
    let diff = diff_games(got, want);
    TableCheck {
        table,
        matches: diff.is_empty(),
        diff,
    }
}

/// Tables 2 and 7-8, plus the stated amounts `r = (2,2,2)`.
pub fn section3() -> Vec<TableCheck> {
    let t1 = fixtures::table1();
    let t2 = apply_losing(&t1, &LosingContract::uniform(&[2, 2], int(6))).expect("2x2");
    let t5 = fixtures::tables5_6();
    let c = lemma1_amounts(&t5, &flat_epsilons(&[2, 2, 2], int(1))).expect("positive");
    let amounts_ok = (0..3).all(|i| c.amount(i, 2) == int(2));
    let t7 = apply_losing(&t5, &c).expect("same shape");
    vec![
        check("table-2", &t2, &fixtures::table2()),
        TableCheck {
            table: "lemma-1 amounts on tables 5-6",
            matches: amounts_ok,
            diff: if amounts_ok {
                Vec::new()
            } else {
                (0..3)
                    .map(|i| format!("r_{},2 = {}", i + 1, c.amount(i, 2)))
                    .collect()
            },
        },
        check("tables-7-8", &t7, &fixtures::tables7_8()),
    ]
}

/// Tables 10-11 and 14-17 from the transfer contracts, and the failure
/// modes.
pub fn section4() -> Vec<TableCheck> {
    let t9 = fixtures::table9();
    let t11 = apply_reward(&t9, &RewardContract { p: [int(5), int(3)] }).expect("2x2");
    let t12 = fixtures::tables12_13();
    let t16 = apply_punish(
        &t12,
        &PunishContract {
            r: [int(2); 3],
            plan: Plan::Conditional,
        },
    )
    .expect("2x2x2");
    let symbolic_10 = apply_reward(&t9, &RewardContract { p: [int(7), int(2)] }).expect("2x2");
    let symbolic_14 = apply_punish(
        &t12,
        &PunishContract {
            r: [int(1), int(3), int(5)],
            plan: Plan::Conditional,
        },
    )
    .expect("2x2x2");
    let mut out = vec![
        check("table-10 at p=(7,2)", &symbolic_10, &fixtures::table10(int(7), int(2))),
        check("table-11", &t11, &fixtures::table11()),
        check(
            "tables-14-15 at r=(1,3,5)",
            &symbolic_14,
            &fixtures::tables14_15([int(1), int(3), int(5)]),
        ),
        check("tables-16-17", &t16, &fixtures::tables16_17()),
    ];
    for f in reproduce_failures() {
        out.push(TableCheck {
            table: f.name,
            matches: f.reproduced,
            diff: if f.reproduced { Vec::new() } else { vec![f.detail] },
        });
    }
    out
}
