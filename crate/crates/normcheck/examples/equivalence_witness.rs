//! Exact equivalence of weighted automata with shortest-witness
//! extraction: compare constructed frequency automata against the
//! uniform reference.
//!
//! ```text
//! cargo run --example equivalence_witness
//! ```

use normcheck::{
    build_frequency_automaton, equivalent, uniform_automaton, Equivalence, Transducer,
};

fn main() {
    let uniform = uniform_automaton(&"ab".parse().unwrap());

    let identity =
        Transducer::from_rules("ab", "ab", 1, &[(1, 'a', "a", 1), (1, 'b', "b", 1)]).unwrap();
    let swapper =
        Transducer::from_rules("ab", "ab", 1, &[(1, 'a', "b", 1), (1, 'b', "a", 1)]).unwrap();
    let doubler =
        Transducer::from_rules("ab", "ab", 1, &[(1, 'a', "aa", 1), (1, 'b', "bb", 1)]).unwrap();

    for (name, machine) in [
        ("identity", &identity),
        ("swapper", &swapper),
        ("doubler", &doubler),
    ] {
        let fa = build_frequency_automaton(machine).unwrap();
        match equivalent(&fa.automaton, &uniform).unwrap() {
            Equivalence::Equivalent => {
                println!("{}: block frequencies are uniform", name);
            }
            Equivalence::Distinguished { witness } => {
                let weight = fa.automaton.word_weight(&witness).unwrap();
                let required = normcheck::required_frequency(2, witness.chars().count());
                println!(
                    "{}: not uniform; block {:?} has frequency {} instead of {}",
                    name, witness, weight, required
                );
            }
        }
    }
}
