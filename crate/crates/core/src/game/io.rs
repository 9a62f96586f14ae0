use serde::{Deserialize, Serialize};

use super::{Game, GameError, GameView};
use crate::rational::Q;

/// On-disk game: `{"players": n, "strategies": [k_1,…], "payoffs": [[…], …]}`
/// with each payoff table flattened mixed-radix, player 1 most significant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    pub players: usize,
    pub strategies: Vec<usize>,
    pub payoffs: Vec<Vec<Q>>,
}

impl GameFile {
    pub fn into_game(self) -> Result<Game, GameError> {
        if self.players != self.strategies.len() {
            return Err(GameError::Format(format!(
                "\"players\" is {} but {} strategy counts given",
                self.players,
                self.strategies.len()
            )));
        }
        let payoffs = self
            .payoffs
            .into_iter()
            .map(|t| t.into_iter().map(|q| q.0).collect())
            .collect();
        Game::new(self.strategies, payoffs)
    }
}

impl From<&Game> for GameFile {
    fn from(g: &Game) -> Self {
        GameFile {
            players: g.n(),
            strategies: g.strategy_counts().to_vec(),
            payoffs: (0..g.n())
                .map(|i| g.payoff_table(i).iter().copied().map(Q).collect())
                .collect(),
        }
    }
}

impl Game {
    pub fn from_json(text: &str) -> Result<Game, GameError> {
        let file: GameFile =
            serde_json::from_str(text).map_err(|e| GameError::Format(e.to_string()))?;
        file.into_game()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&GameFile::from(self)).expect("serializable")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&GameFile::from(self)).expect("serializable")
    }

    /// Canonical compact serialization; equal games give equal strings.
    pub fn canonical_string(&self) -> String {
        self.to_json()
    }

    pub fn display_cells(&self) -> Vec<(super::Profile, Vec<crate::rational::Rational>)> {
        self.profiles().map(|p| {
            let u = self.utilities(&p);
            (p, u)
        })
        .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn rejects_length_mismatch() {
        let bad = r#"{"players":2,"strategies":[2,2],"payoffs":[[1,2,3,4],[1,2,3]]}"#;
        assert!(matches!(
            Game::from_json(bad),
            Err(GameError::PayoffLength { player: 1, .. })
        ));
        let bad = r#"{"players":3,"strategies":[2,2],"payoffs":[[1,2,3,4],[1,2,3,4]]}"#;
        assert!(matches!(Game::from_json(bad), Err(GameError::Format(_))));
    }

    #[test]
    fn rejects_non_canonical_rational() {
        let bad = r#"{"players":2,"strategies":[2,2],"payoffs":[["2/4",2,3,4],[1,2,3,4]]}"#;
        assert!(matches!(Game::from_json(bad), Err(GameError::Format(_))));
    }

    #[test]
    fn fixture_round_trip() {
        let g = fixtures::tables12_13();
        assert_eq!(Game::from_json(&g.to_json()).unwrap(), g);
    }
}
