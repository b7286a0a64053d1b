//! Empirical validation: normal-input generation, occurrence counting,
//! and comparison of observed output frequencies with the frequency
//! automaton's predictions.
//!
//! The only built-in normal word is the Champernowne word of a given
//! base: the concatenation of the base-k expansions of 0, 1, 2, 3, ….
//! Beware that its convergence is slow; the leading digit of every
//! expansion biases short prefixes noticeably (in base 2 the symbol
//! frequencies are still about 0.03 away from 1/2 after 10^6 symbols).

use crate::alphabet::Alphabet;
use crate::frequency::{build_frequency_automaton, FrequencyError};
use crate::rational::Rational;
use crate::transducer::{Transducer, TransducerError};
use crate::weighted::WeightedError;
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::collections::VecDeque;
use std::error::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimError {
    EmptyPattern,
    EmptyPrefix,
    /// The transduced output is too short to estimate frequencies for the
    /// requested block length.
    OutputTooShort {
        produced: usize,
        required: usize,
    },
    /// More than one recurrent component is reachable, so there is no
    /// single prediction to compare against.
    AmbiguousComponent,
    InvalidTransducer,
    WindowTooLong {
        requested: usize,
        cap: usize,
    },
    Run(TransducerError),
    Frequency(FrequencyError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::EmptyPattern => write!(f, "pattern is empty"),
            SimError::EmptyPrefix => write!(f, "prefix is empty"),
            SimError::OutputTooShort { produced, required } => {
                write!(
                    f,
                    "output has {} symbols, need at least {}",
                    produced, required
                )
            }
            SimError::AmbiguousComponent => {
                write!(f, "more than one reachable recurrent component")
            }
            SimError::InvalidTransducer => {
                write!(f, "transducer is not deterministic and complete")
            }
            SimError::WindowTooLong { requested, cap } => {
                write!(
                    f,
                    "block length {} exceeds the supported {}",
                    requested, cap
                )
            }
            SimError::Run(e) => write!(f, "{}", e),
            SimError::Frequency(e) => write!(f, "{}", e),
        }
    }
}

impl Error for SimError {}

impl From<TransducerError> for SimError {
    fn from(e: TransducerError) -> Self {
        SimError::Run(e)
    }
}

impl From<FrequencyError> for SimError {
    fn from(e: FrequencyError) -> Self {
        SimError::Frequency(e)
    }
}

/// Infinite digit stream of the Champernowne word over `alphabet`:
/// digits of 0, 1, 2, 3, … in base `alphabet.len()`, each digit mapped
/// to the symbol with its index.
pub fn champernowne_stream(alphabet: &Alphabet) -> impl Iterator<Item = char> + 'static {
    assert!(
        alphabet.len() >= 2,
        "champernowne needs at least two symbols"
    );
    ChampernowneStream {
        symbols: alphabet.symbols().to_vec(),
        next_number: 0,
        digits: Vec::new(),
        at: 0,
    }
}

struct ChampernowneStream {
    symbols: Vec<char>,
    next_number: u64,
    digits: Vec<usize>,
    at: usize,
}

impl Iterator for ChampernowneStream {
    type Item = char;

    fn next(&mut self) -> Option<char> {
        if self.at == self.digits.len() {
            let base = self.symbols.len() as u64;
            self.digits.clear();
            self.at = 0;
            let mut v = self.next_number;
            self.next_number += 1;
            if v == 0 {
                self.digits.push(0);
            } else {
                while v > 0 {
                    self.digits.push((v % base) as usize);
                    v /= base;
                }
                self.digits.reverse();
            }
        }
        let d = self.digits[self.at];
        self.at += 1;
        Some(self.symbols[d])
    }
}

/// First `n` symbols of the Champernowne word over `alphabet`.
pub fn champernowne(alphabet: &Alphabet, n: usize) -> String {
    champernowne_stream(alphabet).take(n).collect()
}

/// Number of (possibly overlapping) occurrences of `pattern` in `text`.
pub fn count_occurrences(text: &str, pattern: &str) -> Result<usize, SimError> {
    if pattern.is_empty() {
        return Err(SimError::EmptyPattern);
    }
    let text: Vec<char> = text.chars().collect();
    let pattern: Vec<char> = pattern.chars().collect();
    if pattern.len() > text.len() {
        return Ok(0);
    }
    Ok(text
        .windows(pattern.len())
        .filter(|w| *w == pattern)
        .count())
}

/// Occurrences of `pattern` per symbol of `prefix`.
pub fn empirical_frequency(prefix: &str, pattern: &str) -> Result<f64, SimError> {
    if prefix.is_empty() {
        return Err(SimError::EmptyPrefix);
    }
    let count = count_occurrences(prefix, pattern)?;
    Ok(count as f64 / prefix.chars().count() as f64)
}

/// One row of a [`FrequencyReport`].
#[derive(Clone, Debug, PartialEq)]
pub struct ReportEntry {
    pub word: String,
    pub predicted: Rational,
    pub empirical: f64,
    pub gap: f64,
}

/// Table of predicted against observed output-block frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyReport {
    pub entries: Vec<ReportEntry>,
    pub input_length: usize,
    pub output_length: usize,
}

impl FrequencyReport {
    pub fn max_gap(&self) -> f64 {
        self.entries.iter().map(|e| e.gap).fold(0.0, f64::max)
    }

    /// Aligned text columns: word, predicted, empirical, gap.
    pub fn to_table(&self) -> String {
        let mut rows = vec![[
            "word".to_string(),
            "predicted".to_string(),
            "empirical".to_string(),
            "gap".to_string(),
        ]];
        for e in &self.entries {
            rows.push([
                e.word.clone(),
                e.predicted.to_string(),
                format!("{:.6}", e.empirical),
                format!("{:.6}", e.gap),
            ]);
        }
        let mut widths = [0usize; 4];
        for row in &rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let mut out = String::new();
        for row in &rows {
            for (i, (cell, w)) in row.iter().zip(widths).enumerate() {
                if i > 0 {
                    out.push_str("  ");
                }
                out.push_str(&format!("{:<width$}", cell, width = w));
            }
            while out.ends_with(' ') {
                out.pop();
            }
            out.push('\n');
        }
        out.push_str(&format!("input length: {}\n", self.input_length));
        out.push_str(&format!("output length: {}\n", self.output_length));
        out
    }

    /// Comma-separated records: word, predicted `p/q`, empirical with six
    /// digits, gap.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("word,predicted,empirical,gap\n");
        for e in &self.entries {
            out.push_str(&format!(
                "{},{},{:.6},{:.6}\n",
                e.word, e.predicted, e.empirical, e.gap
            ));
        }
        out
    }
}

/// Longest block length [`compare_empirical`] accepts.
pub const MAX_BLOCK_LEN: usize = 6;

/// Runs the machine on `n` symbols of `source`, counts every output block
/// of length 1..=`max_len` through a rolling window, and pairs the
/// observed frequencies with the frequency automaton's predictions.
///
/// The machine may have transient states, but exactly one recurrent
/// component must be reachable; predictions come from that component.
pub fn compare_empirical<I>(
    machine: &Transducer,
    n: usize,
    max_len: usize,
    source: I,
) -> Result<FrequencyReport, SimError>
where
    I: IntoIterator<Item = char>,
{
    if max_len == 0 || max_len > MAX_BLOCK_LEN {
        return Err(SimError::WindowTooLong {
            requested: max_len,
            cap: MAX_BLOCK_LEN,
        });
    }
    if !machine.validate().is_valid() {
        return Err(SimError::InvalidTransducer);
    }
    let reachable = machine.reachable_states();
    let components: Vec<Vec<_>> = machine
        .recurrent_sccs()
        .into_iter()
        .filter(|c| reachable.contains(&c[0]))
        .collect();
    let component = match components.as_slice() {
        [single] => single,
        _ => return Err(SimError::AmbiguousComponent),
    };
    let restricted = machine.restrict(component).expect("component is recurrent");
    let fa = build_frequency_automaton(&restricted)?;
    let predictions = fa
        .automaton
        .brute_force_weights(max_len)
        .map_err(|e| match e {
            WeightedError::BoundExceeded { requested, cap } => {
                SimError::WindowTooLong { requested, cap }
            }
            other => unreachable!("enumeration over the automaton's own alphabet: {}", other),
        })?;

    // Stream the output through a rolling window; memory stays
    // independent of n.
    let mut window: VecDeque<char> = VecDeque::with_capacity(max_len);
    let mut counts: HashMap<String, u64> = HashMap::new();
    let mut output_length = 0usize;
    for symbol in machine.output_symbols(source, n) {
        let symbol = symbol?;
        output_length += 1;
        if window.len() == max_len {
            window.pop_front();
        }
        window.push_back(symbol);
        let mut word = String::new();
        for &c in window.iter().rev() {
            word.insert(0, c);
            *counts.entry(word.clone()).or_insert(0) += 1;
        }
    }

    let alphabet_size = machine.output_alphabet().len();
    let required = 100usize.saturating_mul(alphabet_size.saturating_pow(max_len as u32));
    if output_length < required {
        return Err(SimError::OutputTooShort {
            produced: output_length,
            required,
        });
    }

    let mut entries = Vec::new();
    let mut words: Vec<&String> = predictions.keys().filter(|w| !w.is_empty()).collect();
    words.sort_by_key(|w| (w.chars().count(), w.as_str()));
    for word in words {
        let predicted = predictions[word].clone();
        let empirical = counts.get(word).copied().unwrap_or(0) as f64 / output_length as f64;
        let gap = (empirical - predicted.to_f64().unwrap()).abs();
        entries.push(ReportEntry {
            word: word.clone(),
            predicted,
            empirical,
            gap,
        });
    }
    Ok(FrequencyReport {
        entries,
        input_length: n,
        output_length,
    })
}
