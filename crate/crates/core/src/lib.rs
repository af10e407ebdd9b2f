//! Time-dependent quantum oscillators: the TO, TM and TQ systems, their exact
//! states, Lie-algebra generators, observables and numerical oracles.
//!
//! Units are ħ = m = 1.

pub mod algebra;
pub mod error;
pub mod model;
pub mod numerics;
pub mod observables;
pub mod regime_solutions;
pub mod states;
pub mod timefuncs;
pub mod verify;

pub use algebra::{CoeffSource, DConvention, GeneratorCoeffs, GeneratorName};
pub use error::{Error, Result};
pub use model::{Regime, Sign, SystemKind, SystemSpec, TimeCoord, Transcription};
pub use observables::{ObservablePoint, ObservableSeries, SeriesSource};
pub use states::{StateFamily, StateSpec, WavefunctionSample};
pub use timefuncs::{Case, StatePair, TimeFunctions};
pub use verify::{OracleReport, SuiteConfig, Tolerances};
