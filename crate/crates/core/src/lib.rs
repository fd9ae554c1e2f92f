//! Stabilizer Renyi entropy of pure qubit and qudit states, search and
//! certification of maximal-magic states, and the orbit, basis and
//! entanglement structure around them.

pub mod catalog;
pub mod claims;
pub mod cli;
pub mod clifford;
pub mod entanglement;
pub mod error;
pub mod exact;
pub mod io;
pub mod magic;
pub mod numdiff;
pub mod optimize;
pub mod orbit;
pub mod states;
pub mod structure;
pub mod wh_group;

pub use error::{Error, Result};
pub use exact::ExactState;
pub use states::{PureState, C64};
