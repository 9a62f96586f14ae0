use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::{ContractError, Ladder, LosingContract, TildeContract};
use crate::rational::{Q, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    Lemma1,
    Theorem1,
    Theorem2Reduced,
    Tilde,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Lemma1 => "lemma1",
            Scheme::Theorem1 => "theorem1",
            Scheme::Theorem2Reduced => "theorem2-reduced",
            Scheme::Tilde => "tilde",
        }
    }
}

/// On-disk contract. `epsilons` and `amounts` list strategies `2..=k_i` per
/// player; tilde contracts depend on the opponents' play and carry no
/// amounts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractFile {
    pub scheme: Scheme,
    pub epsilons: Vec<Vec<Q>>,
    pub amounts: Option<Vec<Vec<Q>>>,
}

fn tail(rows: &[Vec<Rational>]) -> Vec<Vec<Q>> {
    rows.iter()
        .map(|r| r.iter().skip(1).copied().map(Q).collect())
        .collect()
}

impl ContractFile {
    pub fn from_losing(scheme: Scheme, c: &LosingContract) -> Self {
        ContractFile {
            scheme,
            epsilons: c.epsilons().map(|e| tail(e)).unwrap_or_default(),
            amounts: Some(tail(c.amounts())),
        }
    }

    pub fn from_tilde(t: &TildeContract) -> Self {
        ContractFile {
            scheme: Scheme::Tilde,
            epsilons: tail(t.epsilons()),
            amounts: None,
        }
    }

    /// Epsilons with the implicit leading zero restored.
    pub fn ladder(&self) -> Ladder {
        self.epsilons
            .iter()
            .map(|row| {
                std::iter::once(Rational::zero())
                    .chain(row.iter().map(|q| q.0))
                    .collect()
            })
            .collect()
    }

    pub fn to_losing(&self) -> Result<LosingContract, ContractError> {
        let amounts = self.amounts.as_ref().ok_or_else(|| {
            ContractError::Shape(format!("a {} contract has no fixed amounts", self.scheme.name()))
        })?;
        let c = LosingContract::from_amounts(
            amounts
                .iter()
                .map(|row| row.iter().map(|q| q.0).collect())
                .collect(),
        );
        if self.epsilons.is_empty() {
            Ok(c)
        } else {
            Ok(c.with_epsilons(self.ladder()))
        }
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contracts::{default_ladder, theorem1_amounts};
    use crate::fixtures;

    #[test]
    fn round_trip() {
        let g = fixtures::tables12_13();
        let c = theorem1_amounts(&g, &default_ladder(&[2, 2, 2])).unwrap();
        let f = ContractFile::from_losing(Scheme::Theorem1, &c);
        let text = f.to_json_pretty();
        assert!(text.contains("\"theorem1\""));
        let back = ContractFile::from_json(&text).unwrap();
        assert_eq!(back.to_losing().unwrap(), c);
    }

    #[test]
    fn tilde_has_no_amounts() {
        let g = fixtures::table1();
        let t = crate::contracts::tilde_amounts(&g, &default_ladder(&[2, 2])).unwrap();
        let f = ContractFile::from_tilde(&t);
        assert!(f.to_json_pretty().contains("\"amounts\": null"));
        assert!(f.to_losing().is_err());
        assert_eq!(f.ladder(), default_ladder(&[2, 2]));
    }

    #[test]
    fn rejects_unknown_scheme() {
        assert!(ContractFile::from_json(r#"{"scheme":"x","epsilons":[],"amounts":null}"#).is_err());
    }
}
