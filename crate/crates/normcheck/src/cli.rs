//! Command-line surface.
//!
//! ```text
//! normcheck check <transducer>                  decide preservation of normality
//! normcheck freq <transducer> <word>            frequency of one output block
//! normcheck build <transducer>                  frequency automaton + matrix dump
//! normcheck run <transducer> <source> <n>       transduce n input symbols
//! normcheck simulate <transducer> <source> <n> <max-len>
//!                                               empirical against predicted table
//! ```
//!
//! Sources are `champernowne:<base>` (the base must match the input
//! alphabet size) or `file:<path>` (raw symbols; line breaks ignored).
//! Options: `--timing` prints the machine size and wall time to stderr,
//! `--csv` switches the simulation report to comma-separated records,
//! `--tolerance <gap>` sets the gap called out in the summary (default
//! 0.01).
//!
//! Exit codes: 0 on success (for `check`: the machine preserves
//! normality), 1 when `check` rejects the machine, 2 on any parse,
//! validation or input error.

use crate::decision::{explain, preserves_normality, DecisionError};
use crate::format::{parse_transducer, serialize_weighted_automaton};
use crate::frequency::build_frequency_automaton;
use crate::sim::{champernowne_stream, compare_empirical};
use crate::transducer::Transducer;
use std::time::Instant;

const USAGE: &str = "\
usage: normcheck <command> [options]

commands:
  check <transducer>                       decide preservation of normality
  freq <transducer> <word>                 frequency of one output block
  build <transducer>                       frequency automaton + matrix dump
  run <transducer> <source> <n>            transduce n input symbols
  simulate <transducer> <source> <n> <max-len>
                                           empirical against predicted table

sources:  champernowne:<base> | file:<path>
options:  --timing | --csv | --tolerance <gap>
exit:     0 ok / preserving, 1 not preserving, 2 bad input";

struct Options {
    timing: bool,
    csv: bool,
    tolerance: f64,
    positional: Vec<String>,
}

fn parse_options(args: impl IntoIterator<Item = String>) -> Result<Options, String> {
    let mut options = Options {
        timing: false,
        csv: false,
        tolerance: 0.01,
        positional: Vec::new(),
    };
    let mut args = args.into_iter();
    while let Some(arg) = args.next() {
        match arg.as_str() {
            "--timing" => options.timing = true,
            "--csv" => options.csv = true,
            "--tolerance" => {
                let value = args.next().ok_or("--tolerance needs a value")?;
                options.tolerance = value
                    .parse()
                    .map_err(|_| format!("bad tolerance '{}'", value))?;
            }
            other if other.starts_with("--") => {
                return Err(format!("unknown option '{}'", other));
            }
            _ => options.positional.push(arg),
        }
    }
    Ok(options)
}

fn load_transducer(path: &str) -> Result<Transducer, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?;
    let t = parse_transducer(&text).map_err(|e| format!("{}: {}", path, e))?;
    let report = t.validate();
    if !report.is_valid() {
        return Err(format!("{}: {}", path, report));
    }
    Ok(t)
}

fn open_source(spec: &str, machine: &Transducer) -> Result<Box<dyn Iterator<Item = char>>, String> {
    if let Some(base) = spec.strip_prefix("champernowne:") {
        let base: usize = base.parse().map_err(|_| format!("bad base '{}'", base))?;
        if base < 2 {
            return Err(format!("champernowne base {} is below 2", base));
        }
        if base != machine.input_alphabet().len() {
            return Err(format!(
                "base {} does not match the input alphabet of {} symbols",
                base,
                machine.input_alphabet().len()
            ));
        }
        Ok(Box::new(champernowne_stream(machine.input_alphabet())))
    } else if let Some(path) = spec.strip_prefix("file:") {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {}", path, e))?;
        Ok(Box::new(
            text.chars()
                .filter(|&c| c != '\n' && c != '\r')
                .collect::<Vec<_>>()
                .into_iter(),
        ))
    } else {
        Err(format!(
            "source '{}' is neither champernowne:<base> nor file:<path>",
            spec
        ))
    }
}

/// Reachable recurrent components, each restricted to its own machine.
fn reachable_components(machine: &Transducer) -> Vec<(Vec<u32>, Transducer)> {
    let reachable = machine.reachable_states();
    let mut out = Vec::new();
    for component in machine.recurrent_sccs() {
        if reachable.contains(&component[0]) {
            let restricted = machine
                .restrict(&component)
                .expect("recurrent components restrict cleanly");
            out.push((component, restricted));
        }
    }
    out
}

/// Runs one command; returns the process exit code.
pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let options = match parse_options(args) {
        Ok(options) => options,
        Err(message) => {
            eprintln!("error: {}", message);
            eprintln!("{}", USAGE);
            return 2;
        }
    };
    let started = Instant::now();
    let (code, size) = dispatch(&options);
    if options.timing {
        if let Some(size) = size {
            eprintln!("size: {}", size);
        }
        eprintln!("time: {:.3}s", started.elapsed().as_secs_f64());
    }
    code
}

fn dispatch(options: &Options) -> (i32, Option<usize>) {
    let mut positional = options.positional.iter().map(String::as_str);
    let Some(command) = positional.next() else {
        eprintln!("{}", USAGE);
        return (2, None);
    };
    let rest: Vec<&str> = positional.collect();
    match (command, rest.as_slice()) {
        ("check", [path]) => cmd_check(path),
        ("freq", [path, word]) => cmd_freq(path, word),
        ("build", [path]) => cmd_build(path),
        ("run", [path, source, n]) => cmd_run(path, source, n),
        ("simulate", [path, source, n, max_len]) => {
            cmd_simulate(path, source, n, max_len, options.csv, options.tolerance)
        }
        _ => {
            eprintln!("error: bad arguments for '{}'", command);
            eprintln!("{}", USAGE);
            (2, None)
        }
    }
}

fn fail(message: impl std::fmt::Display) -> (i32, Option<usize>) {
    eprintln!("error: {}", message);
    (2, None)
}

fn cmd_check(path: &str) -> (i32, Option<usize>) {
    let text = match std::fs::read_to_string(path) {
        Ok(text) => text,
        Err(e) => return fail(format!("{}: {}", path, e)),
    };
    let machine = match parse_transducer(&text) {
        Ok(machine) => machine,
        Err(e) => return fail(format!("{}: {}", path, e)),
    };
    let size = Some(machine.size());
    match preserves_normality(&machine) {
        Ok(verdict) => {
            print!("{}", explain(&verdict));
            (if verdict.preserves { 0 } else { 1 }, size)
        }
        Err(DecisionError::InvalidTransducer(report)) => {
            eprintln!("error: {}: {}", path, report);
            (2, size)
        }
    }
}

fn cmd_freq(path: &str, word: &str) -> (i32, Option<usize>) {
    let machine = match load_transducer(path) {
        Ok(machine) => machine,
        Err(e) => return fail(e),
    };
    let size = Some(machine.size());
    let components = reachable_components(&machine);
    let single = components.len() == 1;
    for (states, restricted) in components {
        let fa = match build_frequency_automaton(&restricted) {
            Ok(fa) => fa,
            Err(e) => return fail(format!("component {:?}: {}", states, e)),
        };
        let weight = match fa.automaton.word_weight(word) {
            Ok(weight) => weight,
            Err(e) => return fail(e),
        };
        if single {
            println!("{}", weight);
        } else {
            let states: Vec<String> = states.iter().map(u32::to_string).collect();
            println!("component {{{}}}: {}", states.join(", "), weight);
        }
    }
    (0, size)
}

fn cmd_build(path: &str) -> (i32, Option<usize>) {
    let machine = match load_transducer(path) {
        Ok(machine) => machine,
        Err(e) => return fail(e),
    };
    let size = Some(machine.size());
    let components = reachable_components(&machine);
    let single = components.len() == 1;
    for (states, restricted) in components {
        let fa = match build_frequency_automaton(&restricted) {
            Ok(fa) => fa,
            Err(e) => return fail(format!("component {:?}: {}", states, e)),
        };
        if !single {
            let states: Vec<String> = states.iter().map(u32::to_string).collect();
            println!("component {{{}}}:", states.join(", "));
        }
        print!("{}", serialize_weighted_automaton(&fa.automaton));
        println!();
        print!("{}", fa.matrix_dump());
    }
    (0, size)
}

fn cmd_run(path: &str, source: &str, n: &str) -> (i32, Option<usize>) {
    let machine = match load_transducer(path) {
        Ok(machine) => machine,
        Err(e) => return fail(e),
    };
    let size = Some(machine.size());
    let n: usize = match n.parse() {
        Ok(n) => n,
        Err(_) => return fail(format!("bad length '{}'", n)),
    };
    let input = match open_source(source, &machine) {
        Ok(input) => input,
        Err(e) => return fail(e),
    };
    match machine.run(input, n) {
        Ok(output) => {
            println!("{}", output);
            (0, size)
        }
        Err(e) => fail(e),
    }
}

fn cmd_simulate(
    path: &str,
    source: &str,
    n: &str,
    max_len: &str,
    csv: bool,
    tolerance: f64,
) -> (i32, Option<usize>) {
    let machine = match load_transducer(path) {
        Ok(machine) => machine,
        Err(e) => return fail(e),
    };
    let size = Some(machine.size());
    let n: usize = match n.parse() {
        Ok(n) => n,
        Err(_) => return fail(format!("bad length '{}'", n)),
    };
    let max_len: usize = match max_len.parse() {
        Ok(v) => v,
        Err(_) => return fail(format!("bad block length '{}'", max_len)),
    };
    let input = match open_source(source, &machine) {
        Ok(input) => input,
        Err(e) => return fail(e),
    };
    match compare_empirical(&machine, n, max_len, input) {
        Ok(report) => {
            if csv {
                print!("{}", report.to_csv());
            } else {
                print!("{}", report.to_table());
                let max_gap = report.max_gap();
                println!(
                    "max gap: {:.6} ({} tolerance {:.6})",
                    max_gap,
                    if max_gap <= tolerance {
                        "within"
                    } else {
                        "exceeds"
                    },
                    tolerance
                );
            }
            (0, size)
        }
        Err(e) => fail(e),
    }
}
