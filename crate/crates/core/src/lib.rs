//! KISP: a query language for traditional family trees.
//!
//! * [`family`]: the genealogy graph and its six traditional constraints.
//! * [`kin_term`]: artificial kinship terms and their notation.
//! * [`semantics`]: terms as functions on sets of persons.
//! * [`reduction`]: greedy and exhaustive translation into English words.
//! * [`temporal`]: the point-based time model.
//! * [`interp`]: the KISP interpreter.
//! * [`batch`]: whole-tree and many-term evaluation, parallel with the
//!   `parallel` feature.

pub mod batch;
pub mod cli;
pub mod family;
pub mod interp;
pub mod kin_term;
pub mod reduction;
pub mod semantics;
pub mod synth;
pub mod temporal;
pub mod tree_file;

pub use family::{ConstraintViolation, FamilyTree, Person, PersonIdx, Sex, TraditionalTree};
pub use interp::{Interpreter, KispError, Value};
pub use kin_term::{parse_kin_term, BasicKin, KinTerm};
pub use reduction::{ReducedTerm, ReductionDictionary, Segment};
pub use semantics::{eval_inverse_oracle, eval_term, PersonSet};
pub use temporal::{TimePoint, Timeline};
