//! Losing contracts on n-player prisoner's dilemmas, verified by exhaustive
//! enumeration over exact rational payoffs.
//!
//! The crate is organised bottom-up:
//!
//! * [`game`] holds games, profiles, coalitions and restricted games;
//! * [`pd`] decides the dilemma conditions and checks the structural lemmas;
//! * [`equilibrium`] certifies Nash and strong Nash equilibria;
//! * [`contracts`] builds, applies and verifies losing contracts;
//! * [`exchange`] and [`public_goods`] cover transfer contracts and threshold
//!   public goods games;
//! * [`generator`] and [`suite`] drive the randomized property suites.

pub mod contracts;
pub mod equilibrium;
pub mod exchange;
pub mod fixtures;
pub mod game;
pub mod generator;
pub mod pd;
pub mod public_goods;
pub mod rational;
pub mod reproduce;
pub mod suite;

pub use contracts::{LosingContract, ReducedGame};
pub use equilibrium::EquilibriumReport;
pub use game::{
    Coalition, Game, GameError, GameView, Profile, RestrictedGame, Restriction,
};
pub use pd::PdVerdict;
pub use public_goods::ContributionSchedule;
pub use rational::Rational;
