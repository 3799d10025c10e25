//! Possible-world partition sequences as a common semantics for default
//! logic, autoepistemic logic, probabilistic conditioning and possibilistic
//! logic.
//!
//! Every engine works over a finite vocabulary with exhaustive world
//! enumeration. Theories are represented by their model sets.

pub mod ael;
pub mod default_logic;
pub mod error;
pub mod limits;
pub mod logic;
pub mod partition;
pub mod poss;
pub mod prob;
pub mod syntax;
pub mod weight;

pub use error::{Error, Result};
pub use limits::Limits;
pub use logic::{Assignment, Formula, Kernel, ModalFormula, ModelSet, Universe, Var, Vocabulary, World};
pub use partition::{
    isomorphic, preference_view, CheckReport, Clause, Mode, PartitionSequence, PreferenceChain, SequenceKind,
    Violation,
};
pub use weight::Weight;
