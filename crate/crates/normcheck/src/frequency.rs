//! Construction of the weighted automaton that computes output-block
//! frequencies of a strongly connected transducer on normal inputs.
//!
//! The machine is first normalized so no transition emits more than one
//! symbol. Transition weights are then `1/#A` for symbol-input
//! transitions and 1 for the empty-input transitions born from
//! normalization, so each state's outgoing weight is exactly 1. The
//! weights split into a silent matrix `E` (transitions with no output)
//! and one matrix `N_b` per output symbol (transitions emitting exactly
//! `b`). Closing the silent part as `E* = I + E + E² + ⋯` gives the
//! symbol-`b` weight matrix `E*·N_b`: the total weight of runs that stay
//! silent for a while and then emit `b`. Their sum `P = Σ_b E*·N_b` is
//! row-stochastic; its stationary distribution becomes the initial weight
//! vector and every state is final with weight 1.

use crate::linalg::{star, stationary_distribution, LinalgError, RationalMatrix, RationalVector};
use crate::rational::{rat, Rational};
use crate::transducer::Transducer;
use crate::weighted::WeightedAutomaton;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::error::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FrequencyError {
    /// Every transition outputs the empty word, so no output frequencies
    /// exist at all.
    AllOutputsEmpty,
    /// The silent-transition matrix has a closed cycle of full weight;
    /// its star diverges.
    DivergentStar,
    /// The chain's stationary distribution is not unique.
    NonUniqueStationary,
    UnknownSymbol(char),
    /// The machine is not deterministic, complete and strongly connected.
    Precondition(&'static str),
}

impl fmt::Display for FrequencyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FrequencyError::AllOutputsEmpty => write!(f, "every transition has an empty output"),
            FrequencyError::DivergentStar => {
                write!(f, "empty-output cycle reachable with probability 1")
            }
            FrequencyError::NonUniqueStationary => {
                write!(f, "stationary distribution is not unique")
            }
            FrequencyError::UnknownSymbol(c) => write!(f, "unknown symbol '{}'", c),
            FrequencyError::Precondition(what) => write!(f, "{}", what),
        }
    }
}

impl Error for FrequencyError {}

/// A normalized transducer together with one weight per transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedTransducer {
    base: Transducer,
    weights: Vec<Rational>,
}

impl WeightedTransducer {
    pub fn base(&self) -> &Transducer {
        &self.base
    }

    /// Weights aligned with `base().transitions()`.
    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }
}

/// Assigns `1/#A` to symbol-input transitions and 1 to empty-input ones,
/// then checks that every state's outgoing weight sums to 1.
///
/// Panics if the sums are off, which means `normalized` was not produced
/// by normalizing a deterministic complete machine.
pub fn weigh_transitions(normalized: &Transducer) -> WeightedTransducer {
    let per_symbol = rat(1, normalized.input_alphabet().len() as i64);
    let weights: Vec<Rational> = normalized
        .transitions()
        .iter()
        .map(|t| {
            if t.input.is_some() {
                per_symbol.clone()
            } else {
                Rational::one()
            }
        })
        .collect();
    let mut outgoing = vec![Rational::zero(); normalized.state_count()];
    for (t, w) in normalized.transitions().iter().zip(&weights) {
        outgoing[normalized.state_position(t.source).unwrap()] += w;
    }
    for (i, sum) in outgoing.iter().enumerate() {
        assert!(
            sum.is_one(),
            "outgoing weight of state {} is {}, expected 1",
            normalized.states()[i],
            sum
        );
    }
    WeightedTransducer {
        base: normalized.clone(),
        weights,
    }
}

/// `E[p, q]`: total weight of transitions from `p` to `q` with an empty
/// output.
pub fn empty_output_matrix(weighted: &WeightedTransducer) -> RationalMatrix {
    let t = &weighted.base;
    let n = t.state_count();
    let mut e = RationalMatrix::zero(n, n);
    for (tr, w) in t.transitions().iter().zip(&weighted.weights) {
        if tr.output.is_empty() {
            let p = t.state_position(tr.source).unwrap();
            let q = t.state_position(tr.target).unwrap();
            e[(p, q)] += w;
        }
    }
    e
}

/// `N_b[p, q]`: total weight of transitions from `p` to `q` that output
/// exactly the symbol `b`.
pub fn output_matrix(
    weighted: &WeightedTransducer,
    symbol: char,
) -> Result<RationalMatrix, FrequencyError> {
    let t = &weighted.base;
    if !t.output_alphabet().contains(symbol) {
        return Err(FrequencyError::UnknownSymbol(symbol));
    }
    let n = t.state_count();
    let mut m = RationalMatrix::zero(n, n);
    let mut single = [0u8; 4];
    let single = symbol.encode_utf8(&mut single);
    for (tr, w) in t.transitions().iter().zip(&weighted.weights) {
        if tr.output == *single {
            let p = t.state_position(tr.source).unwrap();
            let q = t.state_position(tr.target).unwrap();
            m[(p, q)] += w;
        }
    }
    Ok(m)
}

/// The frequency automaton of a strongly connected machine, together
/// with the matrices the construction went through, kept for audit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrequencyAutomaton {
    pub automaton: WeightedAutomaton,
    /// Weights of output-less transitions (`E`).
    pub empty_output: RationalMatrix,
    /// Its star (`E*`): total weight of silent paths between state pairs.
    pub empty_closure: RationalMatrix,
    /// Per-symbol emission matrices (`N_b`).
    pub emissions: BTreeMap<char, RationalMatrix>,
    /// The row-stochastic chain matrix `P = Σ_b E*·N_b`.
    pub chain: RationalMatrix,
    /// Stationary distribution of the chain; the initial weight vector.
    pub stationary: RationalVector,
}

impl FrequencyAutomaton {
    /// Labeled grids of all construction matrices, for audit output.
    pub fn matrix_dump(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("E =\n{}\n", self.empty_output));
        out.push_str(&format!("E* =\n{}\n", self.empty_closure));
        for (symbol, m) in &self.emissions {
            out.push_str(&format!("N_{} =\n{}\n", symbol, m));
        }
        out.push_str(&format!("P =\n{}\n", self.chain));
        out.push_str(&format!("pi = {}\n", self.stationary));
        out
    }
}

/// Builds the frequency automaton of a deterministic, complete, strongly
/// connected transducer: the weighted automaton whose word weights are
/// the limiting block frequencies of the machine's output on any normal
/// input.
///
/// ```
/// use normcheck::{build_frequency_automaton, rat, Transducer};
///
/// let machine = Transducer::from_rules(
///     "ab",
///     "ab",
///     1,
///     &[(1, 'a', "a", 1), (1, 'b', "", 1)],
/// )?;
/// let fa = build_frequency_automaton(&machine)?;
/// assert_eq!(fa.automaton.word_weight("a")?, rat(1, 1));
/// assert_eq!(fa.automaton.word_weight("b")?, rat(0, 1));
/// # Ok::<(), Box<dyn std::error::Error>>(())
/// ```
pub fn build_frequency_automaton(
    machine: &Transducer,
) -> Result<FrequencyAutomaton, FrequencyError> {
    if !machine.validate().is_valid() {
        return Err(FrequencyError::Precondition(
            "machine is not deterministic and complete",
        ));
    }
    if machine.scc_decompose().len() != 1 {
        return Err(FrequencyError::Precondition(
            "machine is not strongly connected",
        ));
    }
    if machine.transitions().iter().all(|t| t.output.is_empty()) {
        return Err(FrequencyError::AllOutputsEmpty);
    }

    let normalized = machine.normalize();
    let weighted = weigh_transitions(&normalized);
    let empty_output = empty_output_matrix(&weighted);
    let empty_closure = star(&empty_output).map_err(|_| FrequencyError::DivergentStar)?;

    let n = normalized.state_count();
    let mut emissions = BTreeMap::new();
    let mut symbol_weights = BTreeMap::new();
    let mut chain = RationalMatrix::zero(n, n);
    for symbol in normalized.output_alphabet().iter() {
        let emission = output_matrix(&weighted, symbol)?;
        let weights = &empty_closure * &emission;
        chain = &chain + &weights;
        emissions.insert(symbol, emission);
        symbol_weights.insert(symbol, weights);
    }
    for r in 0..n {
        assert!(
            chain.row_sum(r).is_one(),
            "chain row {} does not sum to 1",
            r
        );
    }
    let stationary = stationary_distribution(&chain).map_err(|e| match e {
        LinalgError::NonUniqueStationary => FrequencyError::NonUniqueStationary,
        _ => unreachable!("chain stochasticity was asserted"),
    })?;

    let mut automaton = WeightedAutomaton::new(
        normalized.states().to_vec(),
        normalized.output_alphabet().clone(),
        stationary.clone(),
        RationalVector::ones(n),
    )
    .expect("normalized state labels are unique");
    // Every (p, b, q) triple is defined; zeros are dropped by the
    // weighted automaton's canonical storage and at serialization.
    for (&symbol, weights) in &symbol_weights {
        for p in 0..n {
            for q in 0..n {
                automaton
                    .set_weight(
                        normalized.states()[p],
                        symbol,
                        normalized.states()[q],
                        weights[(p, q)].clone(),
                    )
                    .expect("states and symbols are declared");
            }
        }
    }

    Ok(FrequencyAutomaton {
        automaton,
        empty_output,
        empty_closure,
        emissions,
        chain,
        stationary,
    })
}

/// The required frequency of a block of length `len` over an alphabet of
/// `size` symbols: `size^(-len)`.
pub fn required_frequency(size: usize, len: usize) -> Rational {
    let mut out = Rational::one();
    let per_symbol = rat(1, size as i64);
    for _ in 0..len {
        out *= &per_symbol;
    }
    out
}
