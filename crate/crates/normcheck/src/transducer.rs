//! Input-deterministic transducers with finite output words per
//! transition: the data model, validation, streaming execution, graph
//! decomposition, normalization, and the associated Markov matrix.
//!
//! A transducer reads one input symbol per transition and emits a finite
//! (possibly empty) output word. Empty-input transitions exist in the
//! data model but only [`Transducer::normalize`] produces them; a
//! hand-built machine with one fails [`Transducer::validate`].

use crate::alphabet::Alphabet;
use crate::linalg::RationalMatrix;
use crate::rational::{rat, Rational};
use num_traits::One;
use std::collections::HashMap;
use std::error::Error;
use std::fmt;

/// States are named by small integers; matrix rows and columns follow the
/// order of the state list, not the numeric values.
pub type StateLabel = u32;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: StateLabel,
    /// `None` is the empty input, produced only by normalization.
    pub input: Option<char>,
    /// Output word over the output alphabet.
    pub output: String,
    pub target: StateLabel,
}

impl Transition {
    pub fn new(source: StateLabel, input: char, output: &str, target: StateLabel) -> Self {
        Transition {
            source,
            input: Some(input),
            output: output.to_string(),
            target,
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let input = self.input.map_or("-".to_string(), |c| c.to_string());
        let output = if self.output.is_empty() {
            "-"
        } else {
            &self.output
        };
        write!(f, "{} {} {} {}", self.source, input, output, self.target)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TransducerError {
    UnknownState(StateLabel),
    UnknownSymbol(char),
    DuplicateState(StateLabel),
    EmptyAlphabet,
    /// Execution needed a transition that does not exist.
    IncompleteAtState {
        state: StateLabel,
        symbol: char,
    },
    /// The input stream ended before the requested number of symbols.
    InputExhausted {
        consumed: usize,
        requested: usize,
    },
    /// A transition leaves the component that was claimed recurrent.
    NotRecurrent {
        state: StateLabel,
    },
    /// A state's outgoing weights do not form a probability distribution.
    NotStochastic {
        state: StateLabel,
    },
}

impl fmt::Display for TransducerError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TransducerError::UnknownState(s) => write!(f, "unknown state {}", s),
            TransducerError::UnknownSymbol(c) => write!(f, "unknown symbol '{}'", c),
            TransducerError::DuplicateState(s) => write!(f, "duplicate state {}", s),
            TransducerError::EmptyAlphabet => write!(f, "alphabet is empty"),
            TransducerError::IncompleteAtState { state, symbol } => {
                write!(f, "no transition from state {} on '{}'", state, symbol)
            }
            TransducerError::InputExhausted {
                consumed,
                requested,
            } => {
                write!(f, "input ended after {} of {} symbols", consumed, requested)
            }
            TransducerError::NotRecurrent { state } => {
                write!(f, "a transition leaves the component at state {}", state)
            }
            TransducerError::NotStochastic { state } => {
                write!(f, "outgoing weights of state {} do not sum to 1", state)
            }
        }
    }
}

impl Error for TransducerError {}

/// Outcome of [`Transducer::validate`]: determinism and completeness
/// flags plus the offending `(state, symbol)` witnesses. A `None` symbol
/// marks an empty-input transition not produced by normalization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub deterministic: bool,
    pub complete: bool,
    pub offending: Vec<(StateLabel, Option<char>)>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.deterministic && self.complete
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "deterministic and complete");
        }
        write!(f, "invalid:")?;
        for (state, symbol) in &self.offending {
            match symbol {
                Some(c) => write!(f, " ({}, {})", state, c)?,
                None => write!(f, " ({}, empty input)", state)?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer {
    states: Vec<StateLabel>,
    input_alphabet: Alphabet,
    output_alphabet: Alphabet,
    transitions: Vec<Transition>,
    initial: StateLabel,
    /// Original state that a normalization-born state was split from.
    parents: HashMap<StateLabel, StateLabel>,
    index: HashMap<StateLabel, usize>,
    /// `delta[state][symbol]` is the first matching transition, if any.
    delta: Vec<Vec<Option<usize>>>,
    /// Empty-input transition per state, if any; taken without consuming
    /// input during execution.
    silent: Vec<Option<usize>>,
}

impl Transducer {
    pub fn new(
        states: Vec<StateLabel>,
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        initial: StateLabel,
        transitions: Vec<Transition>,
    ) -> Result<Self, TransducerError> {
        Self::assemble(
            states,
            input_alphabet,
            output_alphabet,
            initial,
            transitions,
            HashMap::new(),
        )
    }

    /// Convenience constructor: the state set is collected from the rules
    /// and the initial state, sorted ascending.
    pub fn from_rules(
        input_alphabet: &str,
        output_alphabet: &str,
        initial: StateLabel,
        rules: &[(StateLabel, char, &str, StateLabel)],
    ) -> Result<Self, TransducerError> {
        let input_alphabet: Alphabet = input_alphabet
            .parse()
            .map_err(|crate::alphabet::DuplicateSymbol(c)| TransducerError::UnknownSymbol(c))?;
        let output_alphabet: Alphabet = output_alphabet
            .parse()
            .map_err(|crate::alphabet::DuplicateSymbol(c)| TransducerError::UnknownSymbol(c))?;
        let mut states: Vec<StateLabel> = rules
            .iter()
            .flat_map(|&(src, _, _, dst)| [src, dst])
            .chain([initial])
            .collect();
        states.sort_unstable();
        states.dedup();
        let transitions = rules
            .iter()
            .map(|&(src, sym, out, dst)| Transition::new(src, sym, out, dst))
            .collect();
        Self::new(
            states,
            input_alphabet,
            output_alphabet,
            initial,
            transitions,
        )
    }

    fn assemble(
        states: Vec<StateLabel>,
        input_alphabet: Alphabet,
        output_alphabet: Alphabet,
        initial: StateLabel,
        transitions: Vec<Transition>,
        parents: HashMap<StateLabel, StateLabel>,
    ) -> Result<Self, TransducerError> {
        if input_alphabet.is_empty() || output_alphabet.is_empty() {
            return Err(TransducerError::EmptyAlphabet);
        }
        let mut index = HashMap::with_capacity(states.len());
        for (i, &s) in states.iter().enumerate() {
            if index.insert(s, i).is_some() {
                return Err(TransducerError::DuplicateState(s));
            }
        }
        if !index.contains_key(&initial) {
            return Err(TransducerError::UnknownState(initial));
        }
        for t in &transitions {
            if !index.contains_key(&t.source) {
                return Err(TransducerError::UnknownState(t.source));
            }
            if !index.contains_key(&t.target) {
                return Err(TransducerError::UnknownState(t.target));
            }
            if let Some(c) = t.input {
                if !input_alphabet.contains(c) {
                    return Err(TransducerError::UnknownSymbol(c));
                }
            }
            for c in t.output.chars() {
                if !output_alphabet.contains(c) {
                    return Err(TransducerError::UnknownSymbol(c));
                }
            }
        }
        let mut delta = vec![vec![None; input_alphabet.len()]; states.len()];
        let mut silent = vec![None; states.len()];
        for (i, t) in transitions.iter().enumerate() {
            match t.input {
                Some(c) => {
                    let slot = &mut delta[index[&t.source]][input_alphabet.index_of(c).unwrap()];
                    if slot.is_none() {
                        *slot = Some(i);
                    }
                }
                None => {
                    let slot = &mut silent[index[&t.source]];
                    if slot.is_none() {
                        *slot = Some(i);
                    }
                }
            }
        }
        Ok(Transducer {
            states,
            input_alphabet,
            output_alphabet,
            transitions,
            initial,
            parents,
            index,
            delta,
            silent,
        })
    }

    pub fn states(&self) -> &[StateLabel] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn input_alphabet(&self) -> &Alphabet {
        &self.input_alphabet
    }

    pub fn output_alphabet(&self) -> &Alphabet {
        &self.output_alphabet
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn initial(&self) -> StateLabel {
        self.initial
    }

    pub fn state_position(&self, state: StateLabel) -> Option<usize> {
        self.index.get(&state).copied()
    }

    /// For a normalization-born state, the state it was split from.
    pub fn parent_of(&self, state: StateLabel) -> Option<StateLabel> {
        self.parents.get(&state).copied()
    }

    pub fn transition_on(&self, state: StateLabel, symbol: char) -> Option<&Transition> {
        let s = self.state_position(state)?;
        let a = self.input_alphabet.index_of(symbol)?;
        self.delta[s][a].map(|i| &self.transitions[i])
    }

    /// Sum over transitions of input length plus output length.
    pub fn size(&self) -> usize {
        self.transitions
            .iter()
            .map(|t| usize::from(t.input.is_some()) + t.output.chars().count())
            .sum()
    }

    /// Checks input-determinism (no state has two transitions on one
    /// symbol) and completeness (every state has a transition on every
    /// symbol). Empty-input transitions count as offenses unless their
    /// source is a normalization-born state.
    pub fn validate(&self) -> ValidationReport {
        let mut deterministic = true;
        let mut complete = true;
        let mut offending = Vec::new();
        let mut seen = vec![vec![0usize; self.input_alphabet.len()]; self.states.len()];
        for t in &self.transitions {
            if let Some(c) = t.input {
                seen[self.index[&t.source]][self.input_alphabet.index_of(c).unwrap()] += 1;
            }
        }
        for (s, row) in seen.iter().enumerate() {
            for (a, &count) in row.iter().enumerate() {
                if count == 0 {
                    complete = false;
                    offending.push((self.states[s], Some(self.input_alphabet.symbol(a))));
                } else if count > 1 {
                    deterministic = false;
                    offending.push((self.states[s], Some(self.input_alphabet.symbol(a))));
                }
            }
        }
        for t in &self.transitions {
            if t.input.is_none() && self.parent_of(t.source).is_none() {
                deterministic = false;
                offending.push((t.source, None));
            }
        }
        ValidationReport {
            deterministic,
            complete,
            offending,
        }
    }

    /// Output symbols of the unique run on the first `n` input symbols,
    /// produced lazily so the input never needs to be materialized.
    pub fn output_symbols<I>(&self, input: I, n: usize) -> OutputSymbols<'_, I::IntoIter>
    where
        I: IntoIterator<Item = char>,
    {
        OutputSymbols {
            machine: self,
            input: input.into_iter(),
            state: self.index[&self.initial],
            remaining: n,
            requested: n,
            pending: Vec::new(),
            pending_at: 0,
            silent_steps: 0,
            failed: false,
        }
    }

    /// Output label of the run on the first `n` symbols of `input`.
    pub fn run<I>(&self, input: I, n: usize) -> Result<String, TransducerError>
    where
        I: IntoIterator<Item = char>,
    {
        self.output_symbols(input, n).collect()
    }

    /// Strongly connected components of the underlying graph (labels
    /// ignored). Each component is sorted by state order and components
    /// are sorted by their first state.
    pub fn scc_decompose(&self) -> Vec<Vec<StateLabel>> {
        let n = self.states.len();
        let mut adj = vec![Vec::new(); n];
        for t in &self.transitions {
            adj[self.index[&t.source]].push(self.index[&t.target]);
        }

        // Tarjan, with an explicit frame stack.
        const UNVISITED: usize = usize::MAX;
        let mut order = vec![UNVISITED; n];
        let mut low = vec![0usize; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut next_order = 0usize;
        let mut components: Vec<Vec<usize>> = Vec::new();
        let mut frames: Vec<(usize, usize)> = Vec::new();

        for root in 0..n {
            if order[root] != UNVISITED {
                continue;
            }
            order[root] = next_order;
            low[root] = next_order;
            next_order += 1;
            stack.push(root);
            on_stack[root] = true;
            frames.push((root, 0));
            while let Some(frame) = frames.last_mut() {
                let v = frame.0;
                if frame.1 < adj[v].len() {
                    let w = adj[v][frame.1];
                    frame.1 += 1;
                    if order[w] == UNVISITED {
                        order[w] = next_order;
                        low[w] = next_order;
                        next_order += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        frames.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(order[w]);
                    }
                } else {
                    frames.pop();
                    if let Some(parent) = frames.last() {
                        low[parent.0] = low[parent.0].min(low[v]);
                    }
                    if low[v] == order[v] {
                        let mut component = Vec::new();
                        loop {
                            let w = stack.pop().unwrap();
                            on_stack[w] = false;
                            component.push(w);
                            if w == v {
                                break;
                            }
                        }
                        components.push(component);
                    }
                }
            }
        }

        for component in &mut components {
            component.sort_unstable();
        }
        components.sort_unstable_by_key(|c| c[0]);
        components
            .into_iter()
            .map(|c| c.into_iter().map(|i| self.states[i]).collect())
            .collect()
    }

    /// The strongly connected components no transition leaves.
    pub fn recurrent_sccs(&self) -> Vec<Vec<StateLabel>> {
        let components = self.scc_decompose();
        let mut component_of = HashMap::new();
        for (k, component) in components.iter().enumerate() {
            for &s in component {
                component_of.insert(s, k);
            }
        }
        let mut exits = vec![false; components.len()];
        for t in &self.transitions {
            if component_of[&t.source] != component_of[&t.target] {
                exits[component_of[&t.source]] = true;
            }
        }
        components
            .into_iter()
            .zip(exits)
            .filter_map(|(c, leaves)| (!leaves).then_some(c))
            .collect()
    }

    /// States reachable from the initial state, in state order.
    pub fn reachable_states(&self) -> Vec<StateLabel> {
        let mut seen = vec![false; self.states.len()];
        let mut queue = vec![self.index[&self.initial]];
        seen[queue[0]] = true;
        while let Some(s) = queue.pop() {
            for t in &self.transitions {
                if self.index[&t.source] == s && !seen[self.index[&t.target]] {
                    seen[self.index[&t.target]] = true;
                    queue.push(self.index[&t.target]);
                }
            }
        }
        self.states
            .iter()
            .zip(&seen)
            .filter_map(|(&s, &r)| r.then_some(s))
            .collect()
    }

    /// The machine restricted to a recurrent component: states of the
    /// component, internal transitions, and the least state as initial.
    pub fn restrict(&self, component: &[StateLabel]) -> Result<Transducer, TransducerError> {
        assert!(!component.is_empty(), "component is empty");
        for &s in component {
            if !self.index.contains_key(&s) {
                return Err(TransducerError::UnknownState(s));
            }
        }
        let keep = |s: StateLabel| component.contains(&s);
        let mut transitions = Vec::new();
        for t in &self.transitions {
            if keep(t.source) {
                if !keep(t.target) {
                    return Err(TransducerError::NotRecurrent { state: t.source });
                }
                transitions.push(t.clone());
            }
        }
        let states: Vec<StateLabel> = self.states.iter().copied().filter(|&s| keep(s)).collect();
        let initial = *component.iter().min().unwrap();
        let parents = self
            .parents
            .iter()
            .filter(|&(&s, _)| keep(s))
            .map(|(&s, &p)| (s, p))
            .collect();
        Self::assemble(
            states,
            self.input_alphabet.clone(),
            self.output_alphabet.clone(),
            initial,
            transitions,
            parents,
        )
    }

    /// Splits every transition with an output of two or more symbols into
    /// a chain emitting one symbol each; the chain's inner states are new,
    /// carry a parent tag, and all but the first transition read the empty
    /// input. Transitions with output length at most one are unchanged, so
    /// the result realizes the same function and the operation is
    /// idempotent.
    pub fn normalize(&self) -> Transducer {
        let mut next_label = self.states.iter().max().copied().unwrap_or(0) + 1;
        let mut states = self.states.clone();
        let mut parents = self.parents.clone();
        let mut transitions = Vec::with_capacity(self.transitions.len());
        for t in &self.transitions {
            let symbols: Vec<char> = t.output.chars().collect();
            if symbols.len() < 2 {
                transitions.push(t.clone());
                continue;
            }
            let mut current = t.source;
            for (i, &b) in symbols.iter().enumerate() {
                let target = if i + 1 == symbols.len() {
                    t.target
                } else {
                    let fresh = next_label;
                    next_label += 1;
                    states.push(fresh);
                    parents.insert(fresh, t.source);
                    fresh
                };
                transitions.push(Transition {
                    source: current,
                    input: if i == 0 { t.input } else { None },
                    output: b.to_string(),
                    target,
                });
                current = target;
            }
        }
        Self::assemble(
            states,
            self.input_alphabet.clone(),
            self.output_alphabet.clone(),
            self.initial,
            transitions,
            parents,
        )
        .expect("normalization preserves structural validity")
    }

    /// Row-stochastic transition matrix of the associated Markov chain,
    /// indexed by state order. Default weights give every transition
    /// `1/#A`; explicit weights must be listed per transition.
    pub fn markov_matrix(
        &self,
        weights: Option<&[Rational]>,
    ) -> Result<RationalMatrix, TransducerError> {
        if let Some(w) = weights {
            assert_eq!(w.len(), self.transitions.len(), "one weight per transition");
        }
        let n = self.states.len();
        let default = rat(1, self.input_alphabet.len() as i64);
        let mut m = RationalMatrix::zero(n, n);
        for (i, t) in self.transitions.iter().enumerate() {
            let w = weights.map_or_else(|| default.clone(), |w| w[i].clone());
            m[(self.index[&t.source], self.index[&t.target])] += w;
        }
        for r in 0..n {
            if !m.row_sum(r).is_one() {
                return Err(TransducerError::NotStochastic {
                    state: self.states[r],
                });
            }
        }
        Ok(m)
    }

    /// The window automaton over pairs `(state, next n input symbols)`:
    /// from `(p, b·w)` the symbol `a` leads to `(q, w·a)` where `q` is the
    /// `b`-successor of `p`. Outputs are dropped. With `n = 0` this is the
    /// machine itself up to relabeling.
    ///
    /// States are labeled `1..` in (state order, lexicographic window)
    /// order. Panics unless the machine is deterministic, complete and
    /// strongly connected.
    pub fn snake_automaton(&self, window: usize) -> Transducer {
        assert!(
            self.validate().is_valid(),
            "snake construction needs a deterministic complete machine"
        );
        assert_eq!(
            self.scc_decompose().len(),
            1,
            "snake construction needs a strongly connected machine"
        );
        let a = self.input_alphabet.len();
        let words = a.checked_pow(window as u32).expect("window too large");
        let n = self.states.len();
        let label = |state: usize, rank: usize| (state * words + rank + 1) as StateLabel;

        let mut transitions = Vec::with_capacity(n * words * a);
        for p in 0..n {
            for rank in 0..words {
                if window == 0 {
                    for sym in 0..a {
                        let t = &self.transitions[self.delta[p][sym].unwrap()];
                        transitions.push(Transition {
                            source: label(p, 0),
                            input: Some(self.input_alphabet.symbol(sym)),
                            output: String::new(),
                            target: label(self.index[&t.target], 0),
                        });
                    }
                    continue;
                }
                // Most significant digit of the window rank is its first symbol.
                let high = words / a;
                let first = rank / high;
                let rest = rank % high;
                let t = &self.transitions[self.delta[p][first].unwrap()];
                let q = self.index[&t.target];
                for sym in 0..a {
                    transitions.push(Transition {
                        source: label(p, rank),
                        input: Some(self.input_alphabet.symbol(sym)),
                        output: String::new(),
                        target: label(q, rest * a + sym),
                    });
                }
            }
        }
        let states: Vec<StateLabel> = (0..n * words).map(|i| (i + 1) as StateLabel).collect();
        let initial = label(self.index[&self.initial], 0);
        Self::assemble(
            states,
            self.input_alphabet.clone(),
            self.output_alphabet.clone(),
            initial,
            transitions,
            HashMap::new(),
        )
        .expect("snake construction is structurally valid")
    }
}

/// Lazy output stream of a run; see [`Transducer::output_symbols`].
pub struct OutputSymbols<'t, I> {
    machine: &'t Transducer,
    input: I,
    state: usize,
    remaining: usize,
    requested: usize,
    pending: Vec<char>,
    pending_at: usize,
    silent_steps: usize,
    failed: bool,
}

impl<I: Iterator<Item = char>> Iterator for OutputSymbols<'_, I> {
    type Item = Result<char, TransducerError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if self.failed {
                return None;
            }
            if self.pending_at < self.pending.len() {
                let c = self.pending[self.pending_at];
                self.pending_at += 1;
                return Some(Ok(c));
            }
            // Empty-input transitions fire before the next symbol is
            // read; normalization chains always end at an original state.
            if let Some(t_idx) = self.machine.silent[self.state] {
                self.silent_steps += 1;
                assert!(
                    self.silent_steps <= self.machine.states.len(),
                    "empty-input cycle"
                );
                let t = &self.machine.transitions[t_idx];
                self.state = self.machine.index[&t.target];
                self.pending.clear();
                self.pending.extend(t.output.chars());
                self.pending_at = 0;
                continue;
            }
            if self.remaining == 0 {
                return None;
            }
            let Some(symbol) = self.input.next() else {
                self.failed = true;
                return Some(Err(TransducerError::InputExhausted {
                    consumed: self.requested - self.remaining,
                    requested: self.requested,
                }));
            };
            let Some(sym_idx) = self.machine.input_alphabet.index_of(symbol) else {
                self.failed = true;
                return Some(Err(TransducerError::UnknownSymbol(symbol)));
            };
            let Some(t_idx) = self.machine.delta[self.state][sym_idx] else {
                self.failed = true;
                return Some(Err(TransducerError::IncompleteAtState {
                    state: self.machine.states[self.state],
                    symbol,
                }));
            };
            let t = &self.machine.transitions[t_idx];
            self.state = self.machine.index[&t.target];
            self.remaining -= 1;
            self.silent_steps = 0;
            self.pending.clear();
            self.pending.extend(t.output.chars());
            self.pending_at = 0;
        }
    }
}
