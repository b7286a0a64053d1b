//! Walk through the frequency-automaton construction: normalization,
//! the silent and emission matrices, their closure, the chain and its
//! stationary distribution, and the finished weighted automaton.
//!
//! ```text
//! cargo run --example build_frequency_automaton
//! ```

use normcheck::{
    build_frequency_automaton, serialize_transducer, serialize_weighted_automaton, Transducer,
};

fn main() {
    let machine = Transducer::from_rules(
        "ab",
        "ab",
        1,
        &[
            (1, 'a', "a", 1),
            (1, 'b', "", 2),
            (2, 'a', "", 3),
            (2, 'b', "bb", 1),
            (3, 'a', "", 3),
            (3, 'b', "ba", 1),
        ],
    )
    .unwrap();

    println!("machine:");
    print!("{}", serialize_transducer(&machine));

    let normalized = machine.normalize();
    println!("\nnormalized (outputs of length at most one):");
    print!("{}", serialize_transducer(&normalized));

    let fa = build_frequency_automaton(&machine).unwrap();
    println!("\nconstruction matrices:");
    print!("{}", fa.matrix_dump());

    println!("\nfrequency automaton:");
    print!("{}", serialize_weighted_automaton(&fa.automaton));

    println!("\npredicted block frequencies:");
    for word in ["a", "b", "ab", "bb", "aba"] {
        println!(
            "  freq({}) = {}",
            word,
            fa.automaton.word_weight(word).unwrap()
        );
    }
}
