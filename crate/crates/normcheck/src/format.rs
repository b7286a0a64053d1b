//! Line-oriented text formats for transducers and weighted automata.
//!
//! Both formats are diff-friendly: one item per line, `#` starts a
//! comment, blank lines are ignored, header lines may come in any order
//! but must precede nothing in particular.
//!
//! Transducer document:
//!
//! ```text
//! input-alphabet: a b
//! output-alphabet: a b
//! initial: 1
//! states: 1 2 3
//! trans: 1 a a 1      # source input output target; '-' is the empty output
//! trans: 1 b - 2
//! ```
//!
//! Weighted-automaton document (weights are `p/q` rationals; transitions
//! not listed weigh 0):
//!
//! ```text
//! alphabet: a b
//! state: 1 init 2/3 final 1
//! trans: 1 a 1/2 1
//! ```
//!
//! Empty inputs cannot be written: serializing a normalized transducer
//! marks them `-`, and the parser rejects that marker since empty-input
//! transitions only arise from normalization.

use crate::alphabet::Alphabet;
use crate::linalg::RationalVector;
use crate::rational::{parse_rational, ParseRationalError, Rational};
use crate::transducer::{StateLabel, Transducer, Transition};
use crate::weighted::WeightedAutomaton;
use std::error::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Malformed(String),
    UnknownState(StateLabel),
    UnknownSymbol(char),
    NegativeDenominator,
    DuplicateState(StateLabel),
    DuplicateHeader(&'static str),
    MissingHeader(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based line number; 0 when the document as a whole is at fault.
    pub line: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ParseErrorKind::Malformed(what) => write!(f, "line {}: {}", self.line, what),
            ParseErrorKind::UnknownState(s) => {
                write!(f, "line {}: undeclared state {}", self.line, s)
            }
            ParseErrorKind::UnknownSymbol(c) => {
                write!(f, "line {}: undeclared symbol '{}'", self.line, c)
            }
            ParseErrorKind::NegativeDenominator => {
                write!(f, "line {}: negative denominator", self.line)
            }
            ParseErrorKind::DuplicateState(s) => {
                write!(f, "line {}: state {} declared twice", self.line, s)
            }
            ParseErrorKind::DuplicateHeader(h) => {
                write!(f, "line {}: repeated header '{}'", self.line, h)
            }
            ParseErrorKind::MissingHeader(h) => write!(f, "missing header '{}'", h),
        }
    }
}

impl Error for ParseError {}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

fn malformed(line: usize, what: impl Into<String>) -> ParseError {
    err(line, ParseErrorKind::Malformed(what.into()))
}

/// Numbered, comment-stripped, non-blank lines.
fn logical_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, raw)| {
            let stripped = raw.split('#').next().unwrap_or("").trim();
            (i + 1, stripped)
        })
        .filter(|(_, l)| !l.is_empty())
        .collect()
}

fn parse_symbol_list(line: usize, rest: &str) -> Result<Alphabet, ParseError> {
    let mut symbols = Vec::new();
    for token in rest.split_whitespace() {
        let mut chars = token.chars();
        let (Some(c), None) = (chars.next(), chars.next()) else {
            return Err(malformed(
                line,
                format!("symbol '{}' is not a single character", token),
            ));
        };
        symbols.push(c);
    }
    Alphabet::new(symbols).map_err(|d| malformed(line, d.to_string()))
}

fn parse_state_label(line: usize, token: &str) -> Result<StateLabel, ParseError> {
    token
        .parse()
        .map_err(|_| malformed(line, format!("state '{}' is not a number", token)))
}

fn parse_weight(line: usize, token: &str) -> Result<Rational, ParseError> {
    parse_rational(token).map_err(|e| match e {
        ParseRationalError::NegativeDenominator => err(line, ParseErrorKind::NegativeDenominator),
        _ => malformed(line, format!("bad rational '{}'", token)),
    })
}

/// Parses a transducer document.
pub fn parse_transducer(text: &str) -> Result<Transducer, ParseError> {
    let lines = logical_lines(text);
    let mut input_alphabet: Option<(usize, Alphabet)> = None;
    let mut output_alphabet: Option<(usize, Alphabet)> = None;
    let mut states: Option<(usize, Vec<StateLabel>)> = None;
    let mut initial: Option<(usize, StateLabel)> = None;
    let mut trans_lines = Vec::new();

    for &(line, content) in &lines {
        let Some((key, rest)) = content.split_once(':') else {
            return Err(malformed(line, "expected 'key: value'"));
        };
        let rest = rest.trim();
        match key.trim() {
            "input-alphabet" => {
                if input_alphabet.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader("input-alphabet")));
                }
                input_alphabet = Some((line, parse_symbol_list(line, rest)?));
            }
            "output-alphabet" => {
                if output_alphabet.is_some() {
                    return Err(err(
                        line,
                        ParseErrorKind::DuplicateHeader("output-alphabet"),
                    ));
                }
                output_alphabet = Some((line, parse_symbol_list(line, rest)?));
            }
            "states" => {
                if states.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader("states")));
                }
                let mut list = Vec::new();
                for token in rest.split_whitespace() {
                    let s = parse_state_label(line, token)?;
                    if list.contains(&s) {
                        return Err(err(line, ParseErrorKind::DuplicateState(s)));
                    }
                    list.push(s);
                }
                states = Some((line, list));
            }
            "initial" => {
                if initial.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader("initial")));
                }
                initial = Some((line, parse_state_label(line, rest)?));
            }
            "trans" => trans_lines.push((line, rest)),
            other => {
                return Err(malformed(line, format!("unknown header '{}'", other)));
            }
        }
    }

    let (_, input_alphabet) =
        input_alphabet.ok_or(err(0, ParseErrorKind::MissingHeader("input-alphabet")))?;
    let (_, output_alphabet) =
        output_alphabet.ok_or(err(0, ParseErrorKind::MissingHeader("output-alphabet")))?;
    let (states_line, states) = states.ok_or(err(0, ParseErrorKind::MissingHeader("states")))?;
    let (initial_line, initial) =
        initial.ok_or(err(0, ParseErrorKind::MissingHeader("initial")))?;
    if !states.contains(&initial) {
        return Err(err(initial_line, ParseErrorKind::UnknownState(initial)));
    }

    let mut transitions = Vec::new();
    for (line, rest) in trans_lines {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let [source, input, output, target] = tokens.as_slice() else {
            return Err(malformed(
                line,
                "expected 'trans: source input output target'",
            ));
        };
        let source = parse_state_label(line, source)?;
        let target = parse_state_label(line, target)?;
        for s in [source, target] {
            if !states.contains(&s) {
                return Err(err(line, ParseErrorKind::UnknownState(s)));
            }
        }
        let mut chars = input.chars();
        let (Some(input), None) = (chars.next(), chars.next()) else {
            return Err(malformed(
                line,
                format!("input '{}' is not a single symbol", input),
            ));
        };
        if input == '-' {
            return Err(malformed(
                line,
                "empty inputs arise only from normalization and cannot be declared",
            ));
        }
        if !input_alphabet.contains(input) {
            return Err(err(line, ParseErrorKind::UnknownSymbol(input)));
        }
        let output = if *output == "-" { "" } else { output };
        for c in output.chars() {
            if !output_alphabet.contains(c) {
                return Err(err(line, ParseErrorKind::UnknownSymbol(c)));
            }
        }
        transitions.push(Transition::new(source, input, output, target));
    }

    Transducer::new(
        states,
        input_alphabet,
        output_alphabet,
        initial,
        transitions,
    )
    .map_err(|e| err(states_line, ParseErrorKind::Malformed(e.to_string())))
}

/// Serializes a transducer. Empty inputs (normalization products) are
/// written as `-` and will not parse back.
pub fn serialize_transducer(t: &Transducer) -> String {
    let mut out = String::new();
    out.push_str(&format!("input-alphabet: {}\n", t.input_alphabet()));
    out.push_str(&format!("output-alphabet: {}\n", t.output_alphabet()));
    out.push_str(&format!("initial: {}\n", t.initial()));
    let states: Vec<String> = t.states().iter().map(u32::to_string).collect();
    out.push_str(&format!("states: {}\n", states.join(" ")));
    for tr in t.transitions() {
        out.push_str(&format!("trans: {}\n", tr));
    }
    out
}

/// Parses a weighted-automaton document.
pub fn parse_weighted_automaton(text: &str) -> Result<WeightedAutomaton, ParseError> {
    let lines = logical_lines(text);
    let mut alphabet: Option<Alphabet> = None;
    let mut states: Vec<StateLabel> = Vec::new();
    let mut initial: Vec<Rational> = Vec::new();
    let mut final_weights: Vec<Rational> = Vec::new();
    let mut trans_lines = Vec::new();

    for &(line, content) in &lines {
        let Some((key, rest)) = content.split_once(':') else {
            return Err(malformed(line, "expected 'key: value'"));
        };
        let rest = rest.trim();
        match key.trim() {
            "alphabet" => {
                if alphabet.is_some() {
                    return Err(err(line, ParseErrorKind::DuplicateHeader("alphabet")));
                }
                alphabet = Some(parse_symbol_list(line, rest)?);
            }
            "state" => {
                let tokens: Vec<&str> = rest.split_whitespace().collect();
                let [label, kw_init, init, kw_final, fin] = tokens.as_slice() else {
                    return Err(malformed(
                        line,
                        "expected 'state: label init p/q final p/q'",
                    ));
                };
                if *kw_init != "init" || *kw_final != "final" {
                    return Err(malformed(line, "expected keywords 'init' and 'final'"));
                }
                let label = parse_state_label(line, label)?;
                if states.contains(&label) {
                    return Err(err(line, ParseErrorKind::DuplicateState(label)));
                }
                states.push(label);
                initial.push(parse_weight(line, init)?);
                final_weights.push(parse_weight(line, fin)?);
            }
            "trans" => trans_lines.push((line, rest)),
            other => {
                return Err(malformed(line, format!("unknown header '{}'", other)));
            }
        }
    }

    let alphabet = alphabet.ok_or(err(0, ParseErrorKind::MissingHeader("alphabet")))?;
    let mut automaton = WeightedAutomaton::new(
        states.clone(),
        alphabet.clone(),
        RationalVector::from_entries(initial),
        RationalVector::from_entries(final_weights),
    )
    .expect("duplicates were rejected above");

    for (line, rest) in trans_lines {
        let tokens: Vec<&str> = rest.split_whitespace().collect();
        let [source, symbol, weight, target] = tokens.as_slice() else {
            return Err(malformed(
                line,
                "expected 'trans: source symbol p/q target'",
            ));
        };
        let source = parse_state_label(line, source)?;
        let target = parse_state_label(line, target)?;
        for s in [source, target] {
            if !states.contains(&s) {
                return Err(err(line, ParseErrorKind::UnknownState(s)));
            }
        }
        let mut chars = symbol.chars();
        let (Some(symbol), None) = (chars.next(), chars.next()) else {
            return Err(malformed(
                line,
                format!("symbol '{}' is not a single character", symbol),
            ));
        };
        if !alphabet.contains(symbol) {
            return Err(err(line, ParseErrorKind::UnknownSymbol(symbol)));
        }
        let weight = parse_weight(line, weight)?;
        automaton
            .set_weight(source, symbol, target, weight)
            .expect("states and symbols were checked");
    }
    Ok(automaton)
}

/// Serializes a weighted automaton; zero-weight transitions are omitted.
pub fn serialize_weighted_automaton(a: &WeightedAutomaton) -> String {
    let mut out = String::new();
    out.push_str(&format!("alphabet: {}\n", a.alphabet()));
    for (i, &s) in a.states().iter().enumerate() {
        out.push_str(&format!(
            "state: {} init {} final {}\n",
            s,
            a.initial()[i],
            a.final_weights()[i]
        ));
    }
    for (source, symbol, target, weight) in a.nonzero_weights() {
        out.push_str(&format!(
            "trans: {} {} {} {}\n",
            source, symbol, weight, target
        ));
    }
    out
}
