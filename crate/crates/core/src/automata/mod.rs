//! Finite state automata and asynchronous two-tape automata.

mod asynch;
mod export;
mod fsa;

pub use asynch::{AsyncAutomaton, ShapeReport, Shuffle, StateClass, Symbol, Tape};
pub use export::{
    async_from_text, async_to_dot, async_to_text, dot_counts, fsa_from_text, fsa_to_dot,
    fsa_to_text,
};
pub use fsa::{Fsa, Label, StateId};
