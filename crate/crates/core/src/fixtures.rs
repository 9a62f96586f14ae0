//! Worked examples used throughout the tests, the CLI and the acceptance run.
//!
//! Base games are stored as game files under `fixtures/`; the parametric
//! transforms (reward and conditional punish) are written out cell by cell
//! so that tests can compare them against the generic transforms.

use crate::game::Game;
use crate::rational::{int, Rational};

macro_rules! fixture {
    ($name:ident, $file:literal) => {
        pub fn $name() -> Game {
            Game::from_json(include_str!(concat!("../fixtures/", $file)))
                .expect(concat!("bundled fixture ", $file))
        }
    };
}

fixture!(table1, "table-1.json");
fixture!(table2, "table-2.json");
fixture!(tables5_6, "tables-5-6.json");
fixture!(tables7_8, "tables-7-8.json");
fixture!(table9, "table-9.json");
fixture!(table11, "table-11.json");
fixture!(tables12_13, "tables-12-13.json");
fixture!(tables16_17, "tables-16-17.json");
fixture!(tables18_19, "tables-18-19.json");

fn two_by_two(cells: [[Rational; 2]; 4]) -> Game {
    let mut u = vec![Vec::new(), Vec::new()];
    for c in cells {
        u[0].push(c[0]);
        u[1].push(c[1]);
    }
    Game::new(vec![2, 2], u).expect("2x2 shape")
}

fn cube(cells: [[Rational; 3]; 8]) -> Game {
    let mut u = vec![Vec::new(), Vec::new(), Vec::new()];
    for c in cells {
        for i in 0..3 {
            u[i].push(c[i]);
        }
    }
    Game::new(vec![2, 2, 2], u).expect("2x2x2 shape")
}

/// Table 9 after the reward contract, written per cell.
pub fn table10(p1: Rational, p2: Rational) -> Game {
    let i = int;
    two_by_two([
        [i(7) + p2 - p1, i(5) + p1 - p2],
        [i(2) + p2, i(9) - p2],
        [i(9) - p1, i(1) + p1],
        [i(3), i(2)],
    ])
}

/// Table 10 at `p2 = 3`, `p1 = 4 + eps`.
pub fn table11_eps(eps: Rational) -> Game {
    let i = int;
    two_by_two([
        [i(6) - eps, i(6) + eps],
        [i(5), i(6)],
        [i(5) - eps, i(5) + eps],
        [i(3), i(2)],
    ])
}

/// Tables 12-13 after the conditional punish contract, written per cell.
/// Profile order is (s1, s2, s3) mixed-radix.
pub fn tables14_15(r: [Rational; 3]) -> Game {
    let i = int;
    let [r1, r2, r3] = r;
    cube([
        [i(7), i(7), i(7)],
        [i(5) + r3, i(5), i(8) - r3],
        [i(4), i(8) - r2, i(4) + r2],
        [i(2), i(6) - r2 + r3, i(5) - r3 + r2],
        [i(8) - r1, i(5) + r1, i(3)],
        [i(6) - r1 + r3, i(3), i(4) - r3 + r1],
        [i(5) - r1 + r2, i(6) - r2 + r1, i(1)],
        [i(3) - r1 + r3, i(4) - r2 + r1, i(2) - r3 + r2],
    ])
}

/// Every bundled game by key, base tables first.
pub fn corpus() -> Vec<(&'static str, Game)> {
    vec![
        ("table-1", table1()),
        ("tables-5-6", tables5_6()),
        ("table-9", table9()),
        ("tables-12-13", tables12_13()),
        ("tables-18-19", tables18_19()),
        ("table-2", table2()),
        ("tables-7-8", tables7_8()),
        ("table-11", table11()),
        ("tables-16-17", tables16_17()),
    ]
}

pub fn by_key(key: &str) -> Option<Game> {
    corpus().into_iter().find(|(k, _)| *k == key).map(|(_, g)| g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::GameView;
    use crate::rational::frac;

    #[test]
    fn symbolic_tables_agree_with_bundled_ones() {
        assert_eq!(table10(int(5), int(3)), table11());
        assert_eq!(table11_eps(int(1)), table11());
        assert_eq!(table10(int(0), int(0)), table9());
        assert_eq!(tables14_15([int(2); 3]), tables16_17());
        assert_eq!(tables14_15([int(0); 3]), tables12_13());
        let e = frac(1, 3);
        assert_eq!(table10(int(4) + e, int(3)), table11_eps(e));
    }

    #[test]
    fn bundled_cells() {
        let t = tables18_19();
        assert_eq!(t.utilities(&[2, 1, 1]), vec![int(16), int(5), int(3)]);
        assert_eq!(t.utilities(&[1, 1, 2]), vec![int(5), int(5), int(12)]);
        let t = tables5_6();
        assert_eq!(t.utilities(&[2, 2, 1]), vec![int(11), int(11), int(1)]);
        assert_eq!(t.utilities(&[1, 2, 2]), vec![int(1), int(11), int(11)]);
        assert_eq!(corpus().len(), 9);
        assert!(by_key("table-9").is_some());
    }
}
