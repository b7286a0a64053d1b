//! Decide whether machines preserve normality and print their reports.
//!
//! ```text
//! cargo run --example check_preservation
//! ```

use normcheck::{explain, preserves_normality, Transducer};

fn main() {
    // Copies a's; buffers each b and re-emits it with the symbol that
    // follows. Single strongly connected component, preserving.
    let delayer = Transducer::from_rules(
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

    // Deletes every b: the output is all a's, nowhere near normal.
    let deleter =
        Transducer::from_rules("ab", "ab", 1, &[(1, 'a', "a", 1), (1, 'b', "", 1)]).unwrap();

    // Transient start feeding one good and one bad loop.
    let mixed = Transducer::from_rules(
        "ab",
        "ab",
        0,
        &[
            (0, 'a', "a", 1),
            (0, 'b', "b", 2),
            (1, 'a', "a", 1),
            (1, 'b', "b", 1),
            (2, 'a', "a", 2),
            (2, 'b', "", 2),
        ],
    )
    .unwrap();

    for (name, machine) in [
        ("delayer", &delayer),
        ("deleter", &deleter),
        ("mixed", &mixed),
    ] {
        println!("== {} ==", name);
        match preserves_normality(machine) {
            Ok(verdict) => print!("{}", explain(&verdict)),
            Err(e) => println!("rejected: {}", e),
        }
        println!();
    }
}
