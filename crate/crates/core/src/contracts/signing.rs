use serde::Serialize;

use super::{apply_losing, ContractError, LosingContract};
use crate::equilibrium::{all_nash, is_nash, strong_nash_counterexample};
use crate::game::{Game, GameView};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SigningError {
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error(transparent)]
    Contract(#[from] ContractError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigningReport {
    /// Strategy 1 is "sign", 2 is "do not sign".
    #[serde(skip)]
    pub meta: Game,
    pub selection: Selection,
    #[serde(with = "crate::rational::serde_vec")]
    pub signed_payoffs: Vec<Rational>,
    #[serde(with = "crate::rational::serde_vec")]
    pub unsigned_payoffs: Vec<Rational>,
    pub sign_dominant: Vec<bool>,
    pub all_dominant: bool,
}

/// The payoff vector shared by every pure Nash equilibrium of `g`.
fn equilibrium_payoffs<V: GameView + ?Sized>(g: &V, what: &str) -> Result<Vec<Rational>, SigningError> {
    let nash = all_nash(g);
    let first = nash
        .first()
        .ok_or_else(|| SigningError::Indeterminate(format!("the {what} game has no pure equilibrium")))?;
    let pay = g.utilities(first);
    if nash.iter().any(|s| g.utilities(s) != pay) {
        return Err(SigningError::Indeterminate(format!(
            "the {what} game has equilibria with different payoffs"
        )));
    }
    Ok(pay)
}

/// Which outcomes the signing game compares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Selection {
    /// The unique equilibrium payoffs of the modified and of the original
    /// game.
    UniqueNash,
    /// The unique strict strong equilibrium payoffs of the modified game
    /// against the all-defect payoffs of the original, which must be an
    /// equilibrium there. Threshold games have many payoff-distinct
    /// equilibria on both sides, most of them refunds.
    StrongVsAllDefect,
}

fn strong_payoffs<V: GameView + ?Sized>(g: &V) -> Result<Vec<Rational>, SigningError> {
    let strong: Vec<_> = g
        .profiles()
        .filter(|s| strong_nash_counterexample(g, s, true).is_none())
        .collect();
    let first = strong.first().ok_or_else(|| {
        SigningError::Indeterminate("the modified game has no strict strong equilibrium".into())
    })?;
    let pay = g.utilities(first);
    if strong.iter().any(|s| g.utilities(s) != pay) {
        return Err(SigningError::Indeterminate(
            "the modified game has strict strong equilibria with different payoffs".into(),
        ));
    }
    Ok(pay)
}

/// All-or-void signing: the contract binds only if everyone signs.
pub fn signing_game_view<V: GameView + ?Sized>(
    original: &Game,
    modified: &V,
    selection: Selection,
) -> Result<SigningReport, SigningError> {
    let (signed, unsigned) = match selection {
        Selection::UniqueNash => (
            equilibrium_payoffs(modified, "modified")?,
            equilibrium_payoffs(original, "original")?,
        ),
        Selection::StrongVsAllDefect => {
            let star = original.all_defect();
            if !is_nash(original, &star) {
                return Err(SigningError::Indeterminate(
                    "all-defect is not an equilibrium of the original game".into(),
                ));
            }
            (strong_payoffs(modified)?, original.utilities(&star))
        }
    };
    let n = original.n();
    let meta = Game::from_fn(vec![2; n], |i, s| {
        if s.iter().all(|&x| x == 1) {
            signed[i]
        } else {
            unsigned[i]
        }
    })
    .expect("n ≥ 2");
    let sign_dominant: Vec<bool> = (0..n)
        .map(|i| {
            let mut strict = false;
            for s in meta.profiles() {
                if s[i] != 1 {
                    continue;
                }
                let (a, b) = (meta.utility(i, &s), meta.utility(i, &s.with(i, 2)));
                if a < b {
                    return false;
                }
                strict |= a > b && s.iter().all(|&x| x == 1);
            }
            strict
        })
        .collect();
    Ok(SigningReport {
        selection,
        all_dominant: sign_dominant.iter().all(|&d| d),
        meta,
        signed_payoffs: signed,
        unsigned_payoffs: unsigned,
        sign_dominant,
    })
}

pub fn signing_game(g: &Game, c: &LosingContract) -> Result<SigningReport, SigningError> {
    let m = apply_losing(g, c)?;
    signing_game_view(g, &m, Selection::UniqueNash)
}
