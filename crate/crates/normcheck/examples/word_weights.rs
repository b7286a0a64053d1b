//! Evaluate word weights of a weighted automaton parsed from its text
//! format. This one computes the value of a word read as a binary
//! number: weight("1010") = 10.
//!
//! ```text
//! cargo run --example word_weights
//! ```

use normcheck::parse_weighted_automaton;

const DOC: &str = "\
alphabet: 0 1
state: 1 init 1 final 0
state: 2 init 0 final 1
trans: 1 0 1 1
trans: 1 1 1 1
trans: 1 1 1 2
trans: 2 0 2 2
trans: 2 1 2 2
";

fn main() {
    let automaton = parse_weighted_automaton(DOC).unwrap();
    for word in ["", "1", "1010", "0111", "11111111"] {
        println!(
            "weight({:8}) = {}",
            format!("{:?}", word),
            automaton.word_weight(word).unwrap()
        );
    }

    println!("\nall words of length 3:");
    let table = automaton.brute_force_weights(3).unwrap();
    for (word, weight) in table.iter().filter(|(w, _)| w.len() == 3) {
        println!("  {} -> {}", word, weight);
    }
}
