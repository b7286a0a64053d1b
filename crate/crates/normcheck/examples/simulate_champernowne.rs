//! Corroborate predictions empirically: run a machine on a prefix of the
//! binary Champernowne word and compare observed block frequencies with
//! the frequency automaton's predictions.
//!
//! The Champernowne word converges slowly (binary expansions all start
//! with 1), so expect gaps of a few hundredths at this prefix length.
//!
//! ```text
//! cargo run --release --example simulate_champernowne
//! ```

use normcheck::{champernowne_stream, compare_empirical, Alphabet, Transducer};

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

    let alphabet: Alphabet = "ab".parse().unwrap();
    for n in [10_000usize, 100_000, 1_000_000] {
        let report = compare_empirical(&machine, n, 2, champernowne_stream(&alphabet)).unwrap();
        println!("n = {}:", n);
        print!("{}", report.to_table());
        println!("max gap: {:.6}\n", report.max_gap());
    }
}
