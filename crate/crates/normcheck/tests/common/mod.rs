//! Shared helpers for the integration suites: a small deterministic RNG
//! and generators for random machines and automata.

#![allow(dead_code)]

use normcheck::{rat, Alphabet, Rational, RationalVector, Transducer, WeightedAutomaton};

/// xorshift64*; deterministic across platforms, seeded per test.
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn pick<'a, T>(&mut self, xs: &'a [T]) -> &'a T {
        &xs[self.below(xs.len())]
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            xs.swap(i, self.below(i + 1));
        }
    }
}

fn random_output(rng: &mut Rng, symbols: &[char], max_len: usize) -> String {
    let len = rng.below(max_len + 1);
    (0..len).map(|_| *rng.pick(symbols)).collect()
}

/// Deterministic complete machine with `n_states` states over the given
/// alphabets, uniformly random targets and outputs of length at most
/// `max_out_len`.
pub fn random_transducer(
    rng: &mut Rng,
    n_states: usize,
    input_symbols: &str,
    output_symbols: &str,
    max_out_len: usize,
) -> Transducer {
    let inputs: Vec<char> = input_symbols.chars().collect();
    let outputs: Vec<char> = output_symbols.chars().collect();
    let mut rules = Vec::new();
    for state in 1..=n_states as u32 {
        for &symbol in &inputs {
            let target = rng.below(n_states) as u32 + 1;
            let output = random_output(rng, &outputs, max_out_len);
            rules.push((state, symbol, output, target));
        }
    }
    let rules: Vec<(u32, char, &str, u32)> = rules
        .iter()
        .map(|&(s, c, ref o, t)| (s, c, o.as_str(), t))
        .collect();
    Transducer::from_rules(input_symbols, output_symbols, 1, &rules).unwrap()
}

/// Rejection-samples a strongly connected deterministic complete machine.
pub fn random_sc_transducer(
    rng: &mut Rng,
    n_states: usize,
    input_symbols: &str,
    output_symbols: &str,
    max_out_len: usize,
) -> Transducer {
    for _ in 0..100_000 {
        let t = random_transducer(rng, n_states, input_symbols, output_symbols, max_out_len);
        if t.scc_decompose().len() == 1 {
            return t;
        }
    }
    panic!("rejection sampling failed to find a strongly connected machine");
}

/// Strongly connected by construction: a cycle through all states on the
/// first symbol, random edges on the rest. Used for the scaling runs
/// where rejection sampling would be wasteful.
pub fn ring_transducer(
    rng: &mut Rng,
    n_states: usize,
    input_symbols: &str,
    output_symbols: &str,
    max_out_len: usize,
) -> Transducer {
    let inputs: Vec<char> = input_symbols.chars().collect();
    let outputs: Vec<char> = output_symbols.chars().collect();
    let mut rules = Vec::new();
    for state in 1..=n_states as u32 {
        for (k, &symbol) in inputs.iter().enumerate() {
            let target = if k == 0 {
                state % n_states as u32 + 1
            } else {
                rng.below(n_states) as u32 + 1
            };
            let output = random_output(rng, &outputs, max_out_len);
            rules.push((state, symbol, output, target));
        }
    }
    let rules: Vec<(u32, char, &str, u32)> = rules
        .iter()
        .map(|&(s, c, ref o, t)| (s, c, o.as_str(), t))
        .collect();
    Transducer::from_rules(input_symbols, output_symbols, 1, &rules).unwrap()
}

/// Weight values the random automata draw from.
pub fn small_weights() -> Vec<Rational> {
    vec![
        rat(0, 1),
        rat(1, 2),
        rat(-1, 2),
        rat(1, 1),
        rat(-1, 1),
        rat(2, 1),
    ]
}

/// Random automaton with weights, initial and final entries all drawn
/// from [`small_weights`].
pub fn random_weighted_automaton(
    rng: &mut Rng,
    n_states: usize,
    alphabet: &Alphabet,
) -> WeightedAutomaton {
    let pool = small_weights();
    let states: Vec<u32> = (1..=n_states as u32).collect();
    let initial =
        RationalVector::from_entries((0..n_states).map(|_| rng.pick(&pool).clone()).collect());
    let final_weights =
        RationalVector::from_entries((0..n_states).map(|_| rng.pick(&pool).clone()).collect());
    let mut a =
        WeightedAutomaton::new(states.clone(), alphabet.clone(), initial, final_weights).unwrap();
    for &p in &states {
        for symbol in alphabet.iter() {
            for &q in &states {
                a.set_weight(p, symbol, q, rng.pick(&pool).clone()).unwrap();
            }
        }
    }
    a
}

/// The same machine with state labels permuted and the state list
/// reordered; realizes the same function.
pub fn permute_transducer(rng: &mut Rng, t: &Transducer) -> Transducer {
    let old: Vec<u32> = t.states().to_vec();
    let mut new = old.clone();
    rng.shuffle(&mut new);
    let relabel = |s: u32| new[old.iter().position(|&x| x == s).unwrap()];
    let rules: Vec<(u32, char, String, u32)> = t
        .transitions()
        .iter()
        .map(|tr| {
            (
                relabel(tr.source),
                tr.input.expect("symbol-input machine"),
                tr.output.clone(),
                relabel(tr.target),
            )
        })
        .collect();
    let rules: Vec<(u32, char, &str, u32)> = rules
        .iter()
        .map(|&(s, c, ref o, t)| (s, c, o.as_str(), t))
        .collect();
    Transducer::from_rules(
        &t.input_alphabet().symbols().iter().collect::<String>(),
        &t.output_alphabet().symbols().iter().collect::<String>(),
        relabel(t.initial()),
        &rules,
    )
    .unwrap()
}

/// The same automaton with its state list reordered and labels permuted;
/// assigns the same weight to every word.
pub fn permute_automaton(rng: &mut Rng, a: &WeightedAutomaton) -> WeightedAutomaton {
    let n = a.states().len();
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    let mut labels: Vec<u32> = a.states().to_vec();
    rng.shuffle(&mut labels);
    // position i of the new automaton holds old state order[i] under the
    // fresh label labels[i].
    let new_label = |old_pos: usize| labels[order.iter().position(|&x| x == old_pos).unwrap()];
    let states: Vec<u32> = (0..n).map(|i| labels[i]).collect();
    let initial =
        RationalVector::from_entries(order.iter().map(|&p| a.initial()[p].clone()).collect());
    let final_weights = RationalVector::from_entries(
        order
            .iter()
            .map(|&p| a.final_weights()[p].clone())
            .collect(),
    );
    let mut out =
        WeightedAutomaton::new(states, a.alphabet().clone(), initial, final_weights).unwrap();
    for (source, symbol, target, weight) in a.nonzero_weights() {
        let sp = a.states().iter().position(|&s| s == source).unwrap();
        let tp = a.states().iter().position(|&s| s == target).unwrap();
        out.set_weight(new_label(sp), symbol, new_label(tp), weight)
            .unwrap();
    }
    out
}
