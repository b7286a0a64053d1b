//! The top-level decision procedure: does a deterministic complete
//! transducer preserve normality?
//!
//! A machine preserves normality exactly when every recurrent strongly
//! connected component reachable from the initial state does, and a
//! strongly connected component preserves normality exactly when its
//! frequency automaton is equivalent to the uniform automaton over the
//! output alphabet. Components the initial state cannot reach are
//! excluded: no run ever enters them.

use crate::frequency::{
    build_frequency_automaton, required_frequency, FrequencyAutomaton, FrequencyError,
};
use crate::transducer::{StateLabel, Transducer, ValidationReport};
use crate::weighted::{equivalent, uniform_automaton, Equivalence};
use std::error::Error;
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentStatus {
    Preserving,
    NonPreserving,
    /// Every transition of the component outputs the empty word.
    AllEmptyOutput,
    /// The construction degenerated (divergent star or non-unique
    /// stationary distribution); details are in the diagnostic.
    Degenerate,
}

impl fmt::Display for ComponentStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentStatus::Preserving => "preserving",
            ComponentStatus::NonPreserving => "non-preserving",
            ComponentStatus::AllEmptyOutput => "all-empty-output",
            ComponentStatus::Degenerate => "degenerate",
        };
        write!(f, "{}", s)
    }
}

/// Analysis of one reachable recurrent component.
#[derive(Clone, Debug)]
pub struct ComponentAnalysis {
    pub states: Vec<StateLabel>,
    pub status: ComponentStatus,
    /// A shortest output word whose frequency is wrong; present exactly
    /// for non-preserving components.
    pub witness: Option<String>,
    /// The constructed frequency automaton, kept as evidence when the
    /// construction succeeded.
    pub automaton: Option<FrequencyAutomaton>,
    pub diagnostic: Option<String>,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    /// True exactly when every analyzed component is preserving.
    pub preserves: bool,
    pub components: Vec<ComponentAnalysis>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionError {
    InvalidTransducer(ValidationReport),
}

impl fmt::Display for DecisionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecisionError::InvalidTransducer(report) => write!(f, "{}", report),
        }
    }
}

impl Error for DecisionError {}

/// Decides preservation of normality. The verdict is purely algebraic:
/// no inputs are sampled.
pub fn preserves_normality(machine: &Transducer) -> Result<Verdict, DecisionError> {
    let report = machine.validate();
    if !report.is_valid() {
        return Err(DecisionError::InvalidTransducer(report));
    }
    let reachable = machine.reachable_states();
    let mut components = Vec::new();
    for component in machine.recurrent_sccs() {
        if !reachable.contains(&component[0]) {
            continue;
        }
        let restricted = machine
            .restrict(&component)
            .expect("recurrent components restrict cleanly");
        components.push(analyze_component(component, &restricted));
    }
    let preserves = components
        .iter()
        .all(|c| c.status == ComponentStatus::Preserving);
    Ok(Verdict {
        preserves,
        components,
    })
}

fn analyze_component(states: Vec<StateLabel>, restricted: &Transducer) -> ComponentAnalysis {
    match build_frequency_automaton(restricted) {
        Ok(fa) => {
            let uniform = uniform_automaton(restricted.output_alphabet());
            match equivalent(&fa.automaton, &uniform).expect("alphabets match by construction") {
                Equivalence::Equivalent => ComponentAnalysis {
                    states,
                    status: ComponentStatus::Preserving,
                    witness: None,
                    automaton: Some(fa),
                    diagnostic: None,
                },
                Equivalence::Distinguished { witness } => ComponentAnalysis {
                    states,
                    status: ComponentStatus::NonPreserving,
                    witness: Some(witness),
                    automaton: Some(fa),
                    diagnostic: None,
                },
            }
        }
        Err(FrequencyError::AllOutputsEmpty) => ComponentAnalysis {
            states,
            status: ComponentStatus::AllEmptyOutput,
            witness: None,
            automaton: None,
            diagnostic: Some("every transition outputs the empty word".to_string()),
        },
        Err(e) => ComponentAnalysis {
            states,
            status: ComponentStatus::Degenerate,
            witness: None,
            automaton: None,
            diagnostic: Some(e.to_string()),
        },
    }
}

/// Stable line-oriented report: one section per component with its
/// status, the witness with its actual and required frequency, and the
/// stationary distribution when the construction succeeded.
pub fn explain(verdict: &Verdict) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "components analyzed: {}\n",
        verdict.components.len()
    ));
    for component in &verdict.components {
        let states: Vec<String> = component.states.iter().map(u32::to_string).collect();
        out.push_str(&format!(
            "component {{{}}}: {}",
            states.join(", "),
            component.status
        ));
        if let Some(diagnostic) = &component.diagnostic {
            out.push_str(&format!(" ({})", diagnostic));
        }
        out.push('\n');
        if let (Some(witness), Some(fa)) = (&component.witness, &component.automaton) {
            let actual = fa
                .automaton
                .word_weight(witness)
                .expect("witness uses declared symbols");
            let required =
                required_frequency(fa.automaton.alphabet().len(), witness.chars().count());
            out.push_str(&format!(
                "  witness: {} (weight {}, required {})\n",
                witness, actual, required
            ));
        }
        if let Some(fa) = &component.automaton {
            out.push_str(&format!("  stationary: {}\n", fa.stationary));
        }
    }
    out.push_str(&format!(
        "result: {} normality\n",
        if verdict.preserves {
            "preserves"
        } else {
            "does not preserve"
        }
    ));
    out
}
