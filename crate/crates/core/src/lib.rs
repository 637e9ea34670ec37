//! Meta-game analysis of technology expansion in regulated two-player markets.
//!
//! The pipeline runs from game outcomes to regulator decisions:
//!
//! 1. [`econ`] defines the three game families, their market grids and the
//!    fairness/efficiency metrics;
//! 2. [`sim`] plays the games between synthetic technology policies and reads
//!    and writes game-record corpora;
//! 3. [`regression`] fits one-hot least-squares models and turns them into
//!    per-market payoff tables;
//! 4. [`equilibrium`] finds mixed Nash equilibria of each table pair;
//! 5. [`engine`] lets the regulator pick a market, runs technology-expansion
//!    experiments and classifies their outcomes;
//! 6. [`sweep`] aggregates many experiments into frequency panels.
//!
//! Numeric code is generic over [`Scalar`]; the aliases below fix it to `f64`.

pub mod econ;
pub mod engine;
pub mod equilibrium;
pub mod fixture;
pub mod matrix;
pub mod regression;
pub mod scalar;
pub mod sim;
pub mod sweep;

pub use scalar::Scalar;

pub type Game = equilibrium::BimatrixGame<f64>;
pub type Profile = equilibrium::MixedProfile<f64>;
pub type Situation = econ::SituationParams<f64>;
pub type Coefficients = regression::CoefficientSet<f64>;
pub type Bundle = regression::CoefficientBundle<f64>;
pub type Tables = regression::PayoffTables<f64>;
pub type Solution = engine::MarketSolution<f64>;
pub type MetaGame = engine::MetaGameResult<f64>;
pub type Report = engine::ExpansionReport<f64>;
