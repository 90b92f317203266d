//! Concrete decompositions for wire and gate cuts, and their closed-form
//! overheads.

pub mod bell;
pub mod clifford;
pub mod gate;
pub mod lo;
pub mod lowe;
pub mod overhead;
pub mod teleport;

pub use bell::{bell_qpd, BellFamily};
pub use gate::cnot_gate_cut_qpd;
pub use lo::{lo_wire_cut_qpd, lo_wire_cut_qpd_n};
pub use lowe::lowe_parallel_cut_qpd;
pub use overhead::{effective_per_cut, overhead, Scenario};
pub use teleport::teleport_cut_qpd;
