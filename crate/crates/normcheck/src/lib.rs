//! Does a finite-state transducer preserve Borel normality?
//!
//! An infinite word is normal when every block of the same length occurs
//! with the same limiting frequency. This crate decides, in exact
//! rational arithmetic, whether an input-deterministic complete
//! transducer maps every normal input to a normal output:
//!
//! 1. decompose the machine into strongly connected components and keep
//!    the recurrent ones that the initial state can reach;
//! 2. for each, build the weighted automaton whose word weights are the
//!    limiting output-block frequencies on normal inputs
//!    ([`build_frequency_automaton`]);
//! 3. compare it against the uniform automaton ([`uniform_automaton`])
//!    with an exact equivalence test that produces a shortest
//!    counterexample block on failure ([`equivalent`]).
//!
//! The machine preserves normality exactly when every analyzed component
//! passes, which [`preserves_normality`] packages as a [`Verdict`].
//! A simulation harness ([`compare_empirical`]) corroborates predictions
//! on Champernowne-style inputs, and the `normcheck` binary exposes
//! everything over line-oriented text formats ([`format`]).
//!
//! The `examples/` directory has one runnable program per capability;
//! start with `check_preservation`.
//!
//! ```
//! use normcheck::{preserves_normality, Transducer};
//!
//! // Copies a's and deletes b's: the output of a normal word is all
//! // a's, so normality is destroyed.
//! let machine = Transducer::from_rules(
//!     "ab",
//!     "ab",
//!     1,
//!     &[(1, 'a', "a", 1), (1, 'b', "", 1)],
//! )?;
//! let verdict = preserves_normality(&machine)?;
//! assert!(!verdict.preserves);
//! let witness = verdict.components[0].witness.as_ref().unwrap();
//! assert_eq!(witness, "a");
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod alphabet;
pub mod cli;
pub mod decision;
pub mod format;
pub mod frequency;
pub mod linalg;
pub mod rational;
pub mod sim;
pub mod transducer;
pub mod weighted;

pub use alphabet::Alphabet;
pub use decision::{
    explain, preserves_normality, ComponentAnalysis, ComponentStatus, DecisionError, Verdict,
};
pub use format::{
    parse_transducer, parse_weighted_automaton, serialize_transducer, serialize_weighted_automaton,
    ParseError, ParseErrorKind,
};
pub use frequency::{
    build_frequency_automaton, empty_output_matrix, output_matrix, required_frequency,
    weigh_transitions, FrequencyAutomaton, FrequencyError, WeightedTransducer,
};
pub use linalg::{
    solve_linear, star, stationary_distribution, LinalgError, RationalMatrix, RationalVector,
};
pub use rational::{parse_rational, rat, rat_int, Rational};
pub use sim::{
    champernowne, champernowne_stream, compare_empirical, count_occurrences, empirical_frequency,
    FrequencyReport, ReportEntry, SimError,
};
pub use transducer::{StateLabel, Transducer, TransducerError, Transition, ValidationReport};
pub use weighted::{equivalent, uniform_automaton, Equivalence, WeightedAutomaton, WeightedError};
