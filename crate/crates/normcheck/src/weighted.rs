//! Weighted automata over the rationals.
//!
//! The weight of a run is the product of its transition weights times the
//! initial weight of its first state and the final weight of its last
//! state; the weight of a word is the sum over all runs with that label.
//! Besides evaluation this module provides the one-state uniform
//! reference automaton, brute-force enumeration of word weights, and an
//! exact equivalence test that returns a shortest counterexample.

use crate::alphabet::Alphabet;
use crate::linalg::{RationalMatrix, RationalVector};
use crate::rational::{rat, Rational};
use crate::transducer::StateLabel;
use num_traits::Zero;
use std::collections::{BTreeMap, HashMap, VecDeque};
use std::error::Error;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeightedError {
    UnknownSymbol(char),
    UnknownState(StateLabel),
    DuplicateState(StateLabel),
    AlphabetMismatch,
    BoundExceeded { requested: usize, cap: usize },
}

impl fmt::Display for WeightedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightedError::UnknownSymbol(c) => write!(f, "unknown symbol '{}'", c),
            WeightedError::UnknownState(s) => write!(f, "unknown state {}", s),
            WeightedError::DuplicateState(s) => write!(f, "duplicate state {}", s),
            WeightedError::AlphabetMismatch => write!(f, "alphabets differ"),
            WeightedError::BoundExceeded { requested, cap } => {
                write!(
                    f,
                    "length {} exceeds the enumeration cap {}",
                    requested, cap
                )
            }
        }
    }
}

impl Error for WeightedError {}

/// Weighted automaton with rational weights; absent transitions weigh 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedAutomaton {
    states: Vec<StateLabel>,
    index: HashMap<StateLabel, usize>,
    alphabet: Alphabet,
    /// Keyed by (symbol position, source position, target position);
    /// zero weights are never stored.
    weights: BTreeMap<(usize, usize, usize), Rational>,
    initial: RationalVector,
    final_weights: RationalVector,
}

impl WeightedAutomaton {
    pub fn new(
        states: Vec<StateLabel>,
        alphabet: Alphabet,
        initial: RationalVector,
        final_weights: RationalVector,
    ) -> Result<Self, WeightedError> {
        assert_eq!(initial.len(), states.len(), "initial weights per state");
        assert_eq!(final_weights.len(), states.len(), "final weights per state");
        let mut index = HashMap::with_capacity(states.len());
        for (i, &s) in states.iter().enumerate() {
            if index.insert(s, i).is_some() {
                return Err(WeightedError::DuplicateState(s));
            }
        }
        Ok(WeightedAutomaton {
            states,
            index,
            alphabet,
            weights: BTreeMap::new(),
            initial,
            final_weights,
        })
    }

    pub fn states(&self) -> &[StateLabel] {
        &self.states
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn initial(&self) -> &RationalVector {
        &self.initial
    }

    pub fn final_weights(&self) -> &RationalVector {
        &self.final_weights
    }

    /// Sets the weight of `(source, symbol, target)`; a zero weight
    /// removes the entry, keeping storage canonical.
    pub fn set_weight(
        &mut self,
        source: StateLabel,
        symbol: char,
        target: StateLabel,
        weight: Rational,
    ) -> Result<(), WeightedError> {
        let s = *self
            .index
            .get(&source)
            .ok_or(WeightedError::UnknownState(source))?;
        let t = *self
            .index
            .get(&target)
            .ok_or(WeightedError::UnknownState(target))?;
        let a = self
            .alphabet
            .index_of(symbol)
            .ok_or(WeightedError::UnknownSymbol(symbol))?;
        if weight.is_zero() {
            self.weights.remove(&(a, s, t));
        } else {
            self.weights.insert((a, s, t), weight);
        }
        Ok(())
    }

    pub fn weight(&self, source: StateLabel, symbol: char, target: StateLabel) -> Rational {
        let (Some(&s), Some(&t), Some(a)) = (
            self.index.get(&source),
            self.index.get(&target),
            self.alphabet.index_of(symbol),
        ) else {
            return Rational::zero();
        };
        self.weights
            .get(&(a, s, t))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// Nonzero transitions in (source, symbol, target) order.
    pub fn nonzero_weights(&self) -> Vec<(StateLabel, char, StateLabel, Rational)> {
        let mut out: Vec<_> = self
            .weights
            .iter()
            .map(|(&(a, s, t), w)| {
                (
                    self.states[s],
                    self.alphabet.symbol(a),
                    self.states[t],
                    w.clone(),
                )
            })
            .collect();
        out.sort_by_key(|&(s, c, t, _)| (s, c, t));
        out
    }

    /// Dense transition matrix of one symbol.
    pub fn symbol_matrix(&self, symbol: char) -> Result<RationalMatrix, WeightedError> {
        let a = self
            .alphabet
            .index_of(symbol)
            .ok_or(WeightedError::UnknownSymbol(symbol))?;
        let n = self.states.len();
        let mut m = RationalMatrix::zero(n, n);
        for (&(_, s, t), w) in self.weights.range((a, 0, 0)..=(a, usize::MAX, usize::MAX)) {
            m[(s, t)] = w.clone();
        }
        Ok(m)
    }

    fn advance(&self, row: &RationalVector, symbol_index: usize) -> RationalVector {
        let mut out = RationalVector::zeros(row.len());
        let range = (symbol_index, 0, 0)..=(symbol_index, usize::MAX, usize::MAX);
        for (&(_, s, t), w) in self.weights.range(range) {
            if !row[s].is_zero() {
                out[t] += &row[s] * w;
            }
        }
        out
    }

    /// Weight of `word`: `I · M_{w1} ⋯ M_{wk} · F`; the empty word gets
    /// `I · F`.
    pub fn word_weight(&self, word: &str) -> Result<Rational, WeightedError> {
        let mut row = self.initial.clone();
        for c in word.chars() {
            let a = self
                .alphabet
                .index_of(c)
                .ok_or(WeightedError::UnknownSymbol(c))?;
            row = self.advance(&row, a);
        }
        Ok(row.dot(&self.final_weights))
    }

    /// Weights of every word of length at most `max_len`, by direct
    /// enumeration. Guarded by the `NORMCHECK_MAX_BRUTE` cap (default 10):
    /// the table has `#B^max_len` entries.
    pub fn brute_force_weights(
        &self,
        max_len: usize,
    ) -> Result<BTreeMap<String, Rational>, WeightedError> {
        let cap = brute_force_cap();
        if max_len > cap {
            return Err(WeightedError::BoundExceeded {
                requested: max_len,
                cap,
            });
        }
        let mut table = BTreeMap::new();
        let mut level: Vec<(String, RationalVector)> = vec![(String::new(), self.initial.clone())];
        table.insert(String::new(), self.initial.dot(&self.final_weights));
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(level.len() * self.alphabet.len());
            for (word, row) in &level {
                for (a, symbol) in self.alphabet.iter().enumerate() {
                    let mut extended = word.clone();
                    extended.push(symbol);
                    let row = self.advance(row, a);
                    table.insert(extended.clone(), row.dot(&self.final_weights));
                    next.push((extended, row));
                }
            }
            level = next;
        }
        Ok(table)
    }
}

fn brute_force_cap() -> usize {
    std::env::var("NORMCHECK_MAX_BRUTE")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(10)
}

/// One-state automaton whose word weights are `(#B)^(-|w|)`: initial and
/// final weight 1 and a self-loop of weight `1/#B` per symbol. These are
/// exactly the block frequencies of a normal word over `B`.
pub fn uniform_automaton(alphabet: &Alphabet) -> WeightedAutomaton {
    assert!(!alphabet.is_empty(), "uniform automaton needs a symbol");
    let mut a = WeightedAutomaton::new(
        vec![1],
        alphabet.clone(),
        RationalVector::ones(1),
        RationalVector::ones(1),
    )
    .unwrap();
    let w = rat(1, alphabet.len() as i64);
    for symbol in alphabet.iter() {
        a.set_weight(1, symbol, 1, w.clone()).unwrap();
    }
    a
}

/// Outcome of [`equivalent`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    /// A shortest word on which the two automata disagree.
    Distinguished {
        witness: String,
    },
}

impl Equivalence {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Equivalence::Equivalent => None,
            Equivalence::Distinguished { witness } => Some(witness),
        }
    }
}

/// Decides whether two automata assign the same weight to every word.
///
/// Works on the difference automaton (disjoint union with the right
/// initial vector negated): the reachable row vectors `u0·M_w` span a
/// space of dimension at most `|Q1| + |Q2|`, explored breadth-first while
/// a mutually reduced basis is maintained by exact elimination. The two
/// automata are equivalent exactly when every basis vector is orthogonal
/// to the combined final vector, and the first non-orthogonal vector
/// found in breadth-first order yields a shortest witness.
pub fn equivalent(
    left: &WeightedAutomaton,
    right: &WeightedAutomaton,
) -> Result<Equivalence, WeightedError> {
    if left.alphabet != right.alphabet {
        return Err(WeightedError::AlphabetMismatch);
    }
    let alphabet = &left.alphabet;
    let n1 = left.states.len();
    let n2 = right.states.len();
    let dim = n1 + n2;

    let mut matrices = Vec::with_capacity(alphabet.len());
    for symbol in alphabet.iter() {
        let a = left.symbol_matrix(symbol)?;
        let b = right.symbol_matrix(symbol)?;
        matrices.push(RationalMatrix::from_fn(dim, dim, |i, j| {
            if i < n1 && j < n1 {
                a[(i, j)].clone()
            } else if i >= n1 && j >= n1 {
                b[(i - n1, j - n1)].clone()
            } else {
                Rational::zero()
            }
        }));
    }
    let mut finals = RationalVector::zeros(dim);
    let mut start = RationalVector::zeros(dim);
    for i in 0..n1 {
        finals[i] = left.final_weights[i].clone();
        start[i] = left.initial[i].clone();
    }
    for i in 0..n2 {
        finals[n1 + i] = right.final_weights[i].clone();
        start[n1 + i] = -right.initial[i].clone();
    }

    // Mutually reduced basis: every stored vector has a 1 at its pivot and
    // zeros at all other pivots.
    let mut basis: Vec<(usize, RationalVector)> = Vec::new();
    let mut queue: VecDeque<(RationalVector, String)> = VecDeque::new();
    queue.push_back((start, String::new()));

    while let Some((mut v, word)) = queue.pop_front() {
        for (pivot, row) in &basis {
            if !v[*pivot].is_zero() {
                let factor = v[*pivot].clone();
                for j in 0..dim {
                    if !row[j].is_zero() {
                        let val = v[j].clone() - &factor * &row[j];
                        v[j] = val;
                    }
                }
            }
        }
        let Some(pivot) = (0..dim).find(|&j| !v[j].is_zero()) else {
            continue;
        };
        if !v.dot(&finals).is_zero() {
            return Ok(Equivalence::Distinguished { witness: word });
        }
        let scale = v[pivot].clone();
        for j in 0..dim {
            if !v[j].is_zero() {
                let val = v[j].clone() / &scale;
                v[j] = val;
            }
        }
        for (_, row) in &mut basis {
            if !row[pivot].is_zero() {
                let factor = row[pivot].clone();
                for j in 0..dim {
                    if !v[j].is_zero() {
                        let val = row[j].clone() - &factor * &v[j];
                        row[j] = val;
                    }
                }
            }
        }
        for (m, symbol) in matrices.iter().zip(alphabet.iter()) {
            let mut extended = word.clone();
            extended.push(symbol);
            queue.push_back((&v * m, extended));
        }
        basis.push((pivot, v));
    }
    Ok(Equivalence::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat_int;

    /// Two-state automaton whose word weight is the binary value of the
    /// word: state 1 keeps the prefix (loops weight 1), state 2 doubles
    /// (loops weight 2), and the jump on `1` contributes the bit.
    pub(crate) fn binary_value_automaton() -> WeightedAutomaton {
        let mut a = WeightedAutomaton::new(
            vec![1, 2],
            "01".parse().unwrap(),
            RationalVector::from_entries(vec![rat_int(1), rat_int(0)]),
            RationalVector::from_entries(vec![rat_int(0), rat_int(1)]),
        )
        .unwrap();
        a.set_weight(1, '0', 1, rat_int(1)).unwrap();
        a.set_weight(1, '1', 1, rat_int(1)).unwrap();
        a.set_weight(1, '1', 2, rat_int(1)).unwrap();
        a.set_weight(2, '0', 2, rat_int(2)).unwrap();
        a.set_weight(2, '1', 2, rat_int(2)).unwrap();
        a
    }

    #[test]
    fn binary_value_weights() {
        let a = binary_value_automaton();
        assert_eq!(a.word_weight("1010").unwrap(), rat_int(10));
        assert_eq!(a.word_weight("0111").unwrap(), rat_int(7));
        assert_eq!(a.word_weight("").unwrap(), rat_int(0));
    }

    #[test]
    fn unknown_symbol() {
        let a = binary_value_automaton();
        assert_eq!(a.word_weight("102"), Err(WeightedError::UnknownSymbol('2')));
    }

    #[test]
    fn uniform_weights() {
        let b: Alphabet = "01".parse().unwrap();
        let u = uniform_automaton(&b);
        assert_eq!(u.word_weight("0110").unwrap(), rat(1, 16));
        let unary = uniform_automaton(&"a".parse().unwrap());
        assert_eq!(unary.word_weight("aaa").unwrap(), rat_int(1));
        let three = uniform_automaton(&"abc".parse().unwrap());
        assert_eq!(three.word_weight("").unwrap(), rat_int(1));
    }

    #[test]
    fn zero_weight_is_not_stored() {
        let mut a = uniform_automaton(&"ab".parse().unwrap());
        a.set_weight(1, 'a', 1, rat_int(0)).unwrap();
        assert_eq!(a.weight(1, 'a', 1), rat_int(0));
        assert_eq!(a.nonzero_weights().len(), 1);
    }

    #[test]
    fn equivalence_is_reflexive() {
        let a = binary_value_automaton();
        assert_eq!(equivalent(&a, &a).unwrap(), Equivalence::Equivalent);
        let u = uniform_automaton(&"ab".parse().unwrap());
        assert_eq!(equivalent(&u, &u).unwrap(), Equivalence::Equivalent);
    }

    #[test]
    fn binary_value_vs_uniform() {
        let a = binary_value_automaton();
        let u = uniform_automaton(&"01".parse().unwrap());
        // Already the empty word separates them: 0 against 1.
        assert_eq!(
            equivalent(&a, &u).unwrap(),
            Equivalence::Distinguished {
                witness: String::new()
            }
        );
    }

    #[test]
    fn witness_is_shortest() {
        // Agrees with the uniform automaton on lengths 0 and 1, first
        // differs at length 2: weight("aa") = 1/6 against 1/4.
        let b: Alphabet = "ab".parse().unwrap();
        let mut v = WeightedAutomaton::new(
            vec![1, 2],
            b.clone(),
            RationalVector::from_entries(vec![rat_int(1), rat_int(0)]),
            RationalVector::ones(2),
        )
        .unwrap();
        v.set_weight(1, 'a', 2, rat(1, 2)).unwrap();
        v.set_weight(1, 'b', 2, rat(1, 2)).unwrap();
        v.set_weight(2, 'a', 2, rat(1, 3)).unwrap();
        v.set_weight(2, 'b', 2, rat(2, 3)).unwrap();
        assert_eq!(v.word_weight("a").unwrap(), rat(1, 2));
        assert_eq!(v.word_weight("aa").unwrap(), rat(1, 6));
        let r = equivalent(&v, &uniform_automaton(&b)).unwrap();
        assert_eq!(
            r,
            Equivalence::Distinguished {
                witness: "aa".to_string()
            }
        );
    }

    #[test]
    fn alphabet_mismatch() {
        let u = uniform_automaton(&"ab".parse().unwrap());
        let v = uniform_automaton(&"abc".parse().unwrap());
        assert_eq!(equivalent(&u, &v), Err(WeightedError::AlphabetMismatch));
    }

    #[test]
    fn brute_force_uniform() {
        let u = uniform_automaton(&"ab".parse().unwrap());
        let table = u.brute_force_weights(2).unwrap();
        assert_eq!(table.len(), 7);
        for w in ["aa", "ab", "ba", "bb"] {
            assert_eq!(table[w], rat(1, 4));
        }
    }

    #[test]
    fn brute_force_binary_values() {
        let a = binary_value_automaton();
        let table = a.brute_force_weights(3).unwrap();
        assert_eq!(table["111"], rat_int(7));
        assert_eq!(table["010"], rat_int(2));
        for (word, weight) in &table {
            let value = word
                .chars()
                .fold(0i64, |acc, c| 2 * acc + i64::from(c == '1'));
            assert_eq!(weight, &rat_int(value), "word {:?}", word);
        }
    }

    #[test]
    fn brute_force_length_zero() {
        let a = binary_value_automaton();
        let table = a.brute_force_weights(0).unwrap();
        assert_eq!(table.len(), 1);
        assert_eq!(table[""], rat_int(0));
    }

    #[test]
    fn brute_force_cap_default() {
        let a = uniform_automaton(&"ab".parse().unwrap());
        assert_eq!(
            a.brute_force_weights(11),
            Err(WeightedError::BoundExceeded {
                requested: 11,
                cap: 10
            })
        );
    }
}
