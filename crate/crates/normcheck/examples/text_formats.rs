//! Parse, validate and serialize the two document formats.
//!
//! ```text
//! cargo run --example text_formats
//! ```

use normcheck::{parse_transducer, serialize_transducer, ParseErrorKind};

const DOC: &str = "\
# copies a, deletes b
input-alphabet: a b
output-alphabet: a b
initial: 1
states: 1
trans: 1 a a 1
trans: 1 b - 1
";

fn main() {
    let machine = parse_transducer(DOC).unwrap();
    println!("validated: {}", machine.validate());
    println!("round trip:\n{}", serialize_transducer(&machine));

    // Diagnostics carry line numbers and the offending item.
    let broken = DOC.replace("trans: 1 b - 1", "trans: 1 b - 7");
    match parse_transducer(&broken) {
        Err(e) => {
            println!("broken document: {}", e);
            assert_eq!(e.kind, ParseErrorKind::UnknownState(7));
        }
        Ok(_) => unreachable!(),
    }

    let output = machine.run("abbaab".chars(), 6).unwrap();
    println!("run on \"abbaab\": {:?}", output);
}
