//! Leveled decision diagrams (deterministic, nondeterministic, probabilistic,
//! quantum), the block reordering transform and exact width oracles.

pub mod bits;
pub mod boolfn;
pub mod error;
pub mod inputs;
pub mod scalar;
pub mod diagrams;
pub mod qobdd;
pub mod reorder;
pub mod zoo;

pub use boolfn::{BoolFn, PartialBoolFn, VarOrder};
pub use diagrams::{Nobdd, Obdd, Pobdd};
pub use error::{Error, Result};
pub use qobdd::QuantumProgram;
pub use reorder::{AddressMode, BlockLayout};

pub type Pobdd64 = Pobdd<f64>;
pub type Pobdd32 = Pobdd<f32>;
/// Probabilistic programs with exact rational transition weights.
pub type ExactPobdd = Pobdd<num_rational::Rational64>;
pub type QuantumProgram64 = QuantumProgram<f64>;
pub type QuantumProgram32 = QuantumProgram<f32>;
