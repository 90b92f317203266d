//! Dense statevector and density-matrix simulation.

mod choi;
mod density;
mod instrument;
pub(crate) mod kernel;
mod observable;
mod rng;
mod state;

pub use choi::{choi_of, ChoiMatrix};
pub use density::DensityOperator;
pub use instrument::{apply_instrument, Instrument, InstrumentBranch};
pub use observable::{parse_pauli_string, HermitianObservable, Pauli};
pub use rng::shot_rng;
pub use state::{StateVector, ZERO_NORM_TOL};
