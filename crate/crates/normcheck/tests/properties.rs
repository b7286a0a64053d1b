//! Randomized invariants, all seeded and deterministic.

mod common;

use common::{
    permute_automaton, permute_transducer, random_sc_transducer, random_transducer,
    random_weighted_automaton, small_weights, Rng,
};
use normcheck::{
    build_frequency_automaton, champernowne_stream, compare_empirical, equivalent, rat, rat_int,
    solve_linear, star, stationary_distribution, uniform_automaton, Alphabet, Equivalence,
    Rational, RationalMatrix, RationalVector, Transducer, WeightedAutomaton,
};
use num_traits::{One, ToPrimitive, Zero};

fn random_matrix(rng: &mut Rng, n: usize) -> RationalMatrix {
    let pool = small_weights();
    RationalMatrix::from_fn(n, n, |_, _| rng.pick(&pool).clone())
}

#[test]
fn matrix_arithmetic_is_associative() {
    let mut rng = Rng::new(11);
    for _ in 0..8 {
        let a = random_matrix(&mut rng, 3);
        let b = random_matrix(&mut rng, 3);
        let c = random_matrix(&mut rng, 3);
        assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        assert_eq!(&(&a * &b) + &(&a * &c), &a * &(&b + &c));
    }
}

#[test]
fn star_inverts_i_minus_e() {
    let mut rng = Rng::new(12);
    let pool = [rat(0, 1), rat(0, 1), rat(1, 4), rat(1, 8)];
    for _ in 0..20 {
        let e = RationalMatrix::from_fn(4, 4, |_, _| rng.pick(&pool).clone());
        let s = star(&e).expect("strictly substochastic rows");
        let id = RationalMatrix::identity(4);
        assert_eq!(&s * &(&id - &e), id);
    }
}

/// Power-iteration oracle in floating point: the exact stationary vector
/// must agree with the limit of `v P^k` to 1e-9.
#[test]
fn stationary_agrees_with_power_iteration() {
    let mut rng = Rng::new(13);
    for n in 2..=6 {
        for _ in 0..4 {
            let mut rows = Vec::new();
            for _ in 0..n {
                let weights: Vec<i64> = (0..n).map(|_| rng.below(9) as i64 + 1).collect();
                let total: i64 = weights.iter().sum();
                rows.push(weights.into_iter().map(|w| rat(w, total)).collect());
            }
            let p = RationalMatrix::from_rows(rows);
            let pi = stationary_distribution(&p).unwrap();
            assert!(pi.sum().is_one());
            assert_eq!(&pi * &p, pi);

            let pf: Vec<Vec<f64>> = (0..n)
                .map(|i| (0..n).map(|j| p[(i, j)].to_f64().unwrap()).collect())
                .collect();
            let mut v = vec![1.0 / n as f64; n];
            for _ in 0..10_000 {
                let mut next = vec![0.0; n];
                for i in 0..n {
                    for j in 0..n {
                        next[j] += v[i] * pf[i][j];
                    }
                }
                v = next;
            }
            for (i, x) in v.iter().enumerate() {
                assert!((x - pi[i].to_f64().unwrap()).abs() < 1e-9);
            }
        }
    }
}

#[test]
fn solve_linear_random_systems() {
    let mut rng = Rng::new(14);
    let mut solved = 0;
    while solved < 10 {
        let a = random_matrix(&mut rng, 4);
        let b = random_matrix(&mut rng, 4);
        if let Ok(x) = solve_linear(&a, &b) {
            assert_eq!(&a * &x, b);
            solved += 1;
        }
    }
}

#[test]
fn normalize_is_idempotent() {
    let mut rng = Rng::new(21);
    for _ in 0..20 {
        let n = 1 + rng.below(5);
        let t = random_transducer(&mut rng, n, "ab", "ab", 3);
        let n = t.normalize();
        assert_eq!(n.normalize(), n);
    }
}

#[test]
fn normalized_machines_realize_the_same_function() {
    let mut rng = Rng::new(22);
    for _ in 0..8 {
        let n = 1 + rng.below(4);
        let t = random_transducer(&mut rng, n, "ab", "ab", 3);
        let n = t.normalize();
        for _ in 0..3 {
            let input: String = (0..1000).map(|_| *rng.pick(&['a', 'b'])).collect();
            assert_eq!(
                t.run(input.chars(), 1000).unwrap(),
                n.run(input.chars(), 1000).unwrap()
            );
        }
    }
}

/// Two-pass Kosaraju oracle, independent of the library's single-pass
/// decomposition.
fn kosaraju(adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = adj.len();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    fn dfs_finish(v: usize, adj: &[Vec<usize>], visited: &mut [bool], order: &mut Vec<usize>) {
        visited[v] = true;
        for &u in &adj[v] {
            if !visited[u] {
                dfs_finish(u, adj, visited, order);
            }
        }
        order.push(v);
    }
    for v in 0..n {
        if !visited[v] {
            dfs_finish(v, adj, &mut visited, &mut order);
        }
    }
    let mut rev = vec![Vec::new(); n];
    for (v, edges) in adj.iter().enumerate() {
        for &u in edges {
            rev[u].push(v);
        }
    }
    visited.fill(false);
    let mut components = Vec::new();
    fn dfs_collect(v: usize, adj: &[Vec<usize>], visited: &mut [bool], comp: &mut Vec<usize>) {
        visited[v] = true;
        comp.push(v);
        for &u in &adj[v] {
            if !visited[u] {
                dfs_collect(u, adj, visited, comp);
            }
        }
    }
    for &v in order.iter().rev() {
        if !visited[v] {
            let mut comp = Vec::new();
            dfs_collect(v, &rev, &mut visited, &mut comp);
            comp.sort_unstable();
            components.push(comp);
        }
    }
    components.sort_unstable_by_key(|c| c[0]);
    components
}

#[test]
fn scc_decomposition_matches_kosaraju() {
    let mut rng = Rng::new(25);
    for _ in 0..40 {
        let n = 1 + rng.below(12);
        let t = random_transducer(&mut rng, n, "ab", "ab", 2);
        let adj: Vec<Vec<usize>> = (0..n)
            .map(|i| {
                t.transitions()
                    .iter()
                    .filter(|tr| tr.source == (i + 1) as u32)
                    .map(|tr| (tr.target - 1) as usize)
                    .collect()
            })
            .collect();
        let expected: Vec<Vec<u32>> = kosaraju(&adj)
            .into_iter()
            .map(|c| c.into_iter().map(|i| (i + 1) as u32).collect())
            .collect();
        assert_eq!(t.scc_decompose(), expected);
    }
}

#[test]
fn recurrent_components_are_disjoint_and_exist() {
    let mut rng = Rng::new(23);
    for _ in 0..30 {
        let n = 1 + rng.below(6);
        let t = random_transducer(&mut rng, n, "ab", "ab", 2);
        let recurrent = t.recurrent_sccs();
        assert!(!recurrent.is_empty());
        let mut seen = std::collections::HashSet::new();
        for component in &recurrent {
            for &s in component {
                assert!(seen.insert(s), "state {} in two components", s);
            }
        }
        for component in &recurrent {
            let restricted = t.restrict(component).unwrap();
            assert!(restricted.validate().is_valid());
            assert_eq!(restricted.scc_decompose().len(), 1);
            assert!(restricted.markov_matrix(None).is_ok());
        }
    }
}

#[test]
fn snake_distribution_lifts_the_state_distribution() {
    let mut rng = Rng::new(24);
    for _ in 0..5 {
        let n = 1 + rng.below(4);
        let t = random_sc_transducer(&mut rng, n, "ab", "ab", 1);
        let pi = stationary_distribution(&t.markov_matrix(None).unwrap()).unwrap();
        for window in [1usize, 2] {
            let snake = t.snake_automaton(window);
            let xi = stationary_distribution(&snake.markov_matrix(None).unwrap()).unwrap();
            let scale = rat_int(2usize.pow(window as u32) as i64);
            for p in 0..t.state_count() {
                for w in 0..2usize.pow(window as u32) {
                    assert_eq!(xi[p * 2usize.pow(window as u32) + w], &pi[p] / &scale);
                }
            }
        }
    }
}

/// Exponential-enumeration oracle for word weights: sum over every state
/// sequence of initial weight, transition weights, final weight.
fn enumeration_weight(a: &WeightedAutomaton, word: &str) -> Rational {
    let chars: Vec<char> = word.chars().collect();
    let states = a.states();
    let mut total = Rational::zero();
    let mut sequence = vec![0usize; chars.len() + 1];
    loop {
        let mut weight = a.initial()[sequence[0]].clone();
        for (i, &c) in chars.iter().enumerate() {
            if weight.is_zero() {
                break;
            }
            weight *= a.weight(states[sequence[i]], c, states[sequence[i + 1]]);
        }
        if !weight.is_zero() {
            weight *= a.final_weights()[sequence[chars.len()]].clone();
            total += weight;
        }
        // Next sequence in odometer order.
        let mut i = 0;
        loop {
            if i == sequence.len() {
                return total;
            }
            sequence[i] += 1;
            if sequence[i] < states.len() {
                break;
            }
            sequence[i] = 0;
            i += 1;
        }
    }
}

#[test]
fn word_weight_matches_run_enumeration() {
    let mut rng = Rng::new(31);
    let alphabet: Alphabet = "ab".parse().unwrap();
    for _ in 0..6 {
        let size = 1 + rng.below(4);
        let a = random_weighted_automaton(&mut rng, size, &alphabet);
        for len in 0..=6 {
            let word: String = (0..len).map(|_| *rng.pick(&['a', 'b'])).collect();
            assert_eq!(
                a.word_weight(&word).unwrap(),
                enumeration_weight(&a, &word),
                "word {:?}",
                word
            );
        }
    }
}

#[test]
fn equivalence_agrees_with_brute_force() {
    let mut rng = Rng::new(32);
    let alphabet: Alphabet = "ab".parse().unwrap();
    for round in 0..30 {
        let size = 1 + rng.below(4);
        let a = random_weighted_automaton(&mut rng, size, &alphabet);
        let size = 1 + rng.below(4);
        let b = if round % 3 == 0 {
            permute_automaton(&mut rng, &a)
        } else {
            random_weighted_automaton(&mut rng, size, &alphabet)
        };
        let bound = a.states().len() + b.states().len();
        let ta = a.brute_force_weights(bound).unwrap();
        let tb = b.brute_force_weights(bound).unwrap();
        let brute_equal = ta == tb;
        let verdict = equivalent(&a, &b).unwrap();
        assert_eq!(verdict.is_equivalent(), brute_equal);
        if let Equivalence::Distinguished { witness } = verdict {
            assert_ne!(
                a.word_weight(&witness).unwrap(),
                b.word_weight(&witness).unwrap()
            );
        }
    }
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let mut rng = Rng::new(33);
    let alphabet: Alphabet = "ab".parse().unwrap();
    for _ in 0..10 {
        let size = 1 + rng.below(4);
        let a = random_weighted_automaton(&mut rng, size, &alphabet);
        let size_b = 1 + rng.below(4);
        let b = random_weighted_automaton(&mut rng, size_b, &alphabet);
        assert!(equivalent(&a, &a).unwrap().is_equivalent());
        assert_eq!(
            equivalent(&a, &b).unwrap().is_equivalent(),
            equivalent(&b, &a).unwrap().is_equivalent()
        );
        let p = permute_automaton(&mut rng, &a);
        let pp = permute_automaton(&mut rng, &p);
        assert!(equivalent(&a, &p).unwrap().is_equivalent());
        assert!(equivalent(&p, &pp).unwrap().is_equivalent());
        assert!(equivalent(&a, &pp).unwrap().is_equivalent());
    }
}

#[test]
fn uniform_automaton_is_exact() {
    for symbols in ["a", "ab", "abc"] {
        let alphabet: Alphabet = symbols.parse().unwrap();
        let u = uniform_automaton(&alphabet);
        let table = u.brute_force_weights(8).unwrap();
        for (word, weight) in table {
            let len = word.chars().count() as u32;
            assert_eq!(
                weight,
                rat(1, (alphabet.len() as i64).pow(len)),
                "word {:?}",
                word
            );
        }
    }
}

fn random_sc_with_output(rng: &mut Rng, max_states: usize) -> Transducer {
    loop {
        let n = 1 + rng.below(max_states);
        let t = random_sc_transducer(rng, n, "ab", "ab", 2);
        if t.transitions().iter().any(|tr| !tr.output.is_empty()) {
            return t;
        }
    }
}

#[test]
fn block_mass_is_one_per_length() {
    let mut rng = Rng::new(41);
    for _ in 0..8 {
        let t = random_sc_with_output(&mut rng, 4);
        let fa = build_frequency_automaton(&t).unwrap();
        let table = fa.automaton.brute_force_weights(4).unwrap();
        for k in 0..=4usize {
            let mass = table
                .iter()
                .filter(|(w, _)| w.chars().count() == k)
                .fold(Rational::zero(), |acc, (_, v)| acc + v);
            assert!(mass.is_one(), "length {} mass {}", k, mass);
        }
    }
}

#[test]
fn construction_is_invariant_under_relabeling() {
    let mut rng = Rng::new(42);
    for _ in 0..6 {
        let t = random_sc_with_output(&mut rng, 4);
        let p = permute_transducer(&mut rng, &t);
        let fa_t = build_frequency_automaton(&t).unwrap();
        let fa_p = build_frequency_automaton(&p).unwrap();
        assert!(equivalent(&fa_t.automaton, &fa_p.automaton)
            .unwrap()
            .is_equivalent());
    }
}

#[test]
fn chain_rows_are_stochastic() {
    let mut rng = Rng::new(43);
    for _ in 0..10 {
        let t = random_sc_with_output(&mut rng, 5);
        let fa = build_frequency_automaton(&t).unwrap();
        for r in 0..fa.chain.rows() {
            assert!(fa.chain.row_sum(r).is_one());
        }
    }
}

#[test]
fn verdict_composes_over_components() {
    let mut rng = Rng::new(44);
    for _ in 0..8 {
        // Two strongly connected machines glued behind a transient start:
        // 'a' enters the first, 'b' the second.
        let c1 = random_sc_with_output(&mut rng, 3);
        let c2 = random_sc_with_output(&mut rng, 3);
        let mut rules: Vec<(u32, char, String, u32)> = Vec::new();
        let offset = 10;
        for tr in c1.transitions() {
            rules.push((tr.source, tr.input.unwrap(), tr.output.clone(), tr.target));
        }
        for tr in c2.transitions() {
            rules.push((
                tr.source + offset,
                tr.input.unwrap(),
                tr.output.clone(),
                tr.target + offset,
            ));
        }
        rules.push((0, 'a', String::new(), c1.initial()));
        rules.push((0, 'b', String::new(), c2.initial() + offset));
        let rules: Vec<(u32, char, &str, u32)> = rules
            .iter()
            .map(|&(s, c, ref o, t)| (s, c, o.as_str(), t))
            .collect();
        let combined = Transducer::from_rules("ab", "ab", 0, &rules).unwrap();

        let whole = normcheck::preserves_normality(&combined).unwrap();
        let first = normcheck::preserves_normality(&c1).unwrap();
        let second = normcheck::preserves_normality(&c2).unwrap();
        assert_eq!(whole.preserves, first.preserves && second.preserves);
        assert_eq!(whole.components.len(), 2);
    }
}

/// The observed gaps shrink as the sample grows (allowing 0.005 of noise
/// between the decades).
#[test]
fn simulation_gaps_do_not_grow() {
    let t = Transducer::from_rules(
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
    let mut gaps = Vec::new();
    for n in [10_000usize, 100_000, 1_000_000] {
        let report = compare_empirical(&t, n, 2, champernowne_stream(&alphabet)).unwrap();
        gaps.push(report.max_gap());
    }
    assert!(gaps[1] <= gaps[0] + 0.005, "{:?}", gaps);
    assert!(gaps[2] <= gaps[1] + 0.005, "{:?}", gaps);
}

#[test]
fn documents_round_trip_on_random_instances() {
    let mut rng = Rng::new(51);
    let alphabet: Alphabet = "ab".parse().unwrap();
    for _ in 0..20 {
        let n = 1 + rng.below(5);
        let t = random_transducer(&mut rng, n, "ab", "ab", 3);
        let doc = normcheck::serialize_transducer(&t);
        assert_eq!(normcheck::parse_transducer(&doc).unwrap(), t);

        let size = 1 + rng.below(4);
        let a = random_weighted_automaton(&mut rng, size, &alphabet);
        let doc = normcheck::serialize_weighted_automaton(&a);
        assert_eq!(normcheck::parse_weighted_automaton(&doc).unwrap(), a);
    }
}

/// Everything is immutable after construction and safe to hand to
/// concurrent readers.
#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<Rational>();
    assert_send_sync::<RationalMatrix>();
    assert_send_sync::<RationalVector>();
    assert_send_sync::<Transducer>();
    assert_send_sync::<WeightedAutomaton>();
    assert_send_sync::<normcheck::FrequencyAutomaton>();
    assert_send_sync::<normcheck::Verdict>();
    assert_send_sync::<normcheck::FrequencyReport>();

    let t = random_sc_with_output(&mut Rng::new(52), 3);
    let fa = std::sync::Arc::new(build_frequency_automaton(&t).unwrap());
    let handles: Vec<_> = (0..4)
        .map(|k| {
            let fa = std::sync::Arc::clone(&fa);
            std::thread::spawn(move || {
                let word = if k % 2 == 0 { "ab" } else { "ba" };
                fa.automaton.word_weight(word).unwrap()
            })
        })
        .collect();
    for handle in handles {
        handle.join().unwrap();
    }
}

#[test]
fn brute_force_respects_the_environment_cap() {
    // The cap itself is read from the environment; the library default of
    // 10 is checked in unit tests. Here only the arithmetic around the
    // cap boundary is exercised.
    let u = uniform_automaton(&"ab".parse().unwrap());
    assert!(u.brute_force_weights(10).is_ok());
    assert!(u.brute_force_weights(11).is_err());
}
