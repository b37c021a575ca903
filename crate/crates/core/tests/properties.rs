mod common;

use common::*;
use partial_sync::codes::{
    compress_path_steps, literal_automaton, log_rank_bound, log_rank_word, passes_through_root, primitive_root,
    validate_code, weinbaum_conjugate,
};
use partial_sync::constructions::duplicating;
use partial_sync::equivalence::{hopcroft_classes, inseparability_partition, quotient};
use partial_sync::generators::{gen_random_partial, gen_random_prefix_code};
use partial_sync::oracle::subset_bfs;
use partial_sync::synchronization::{
    greedy_min_rank, is_synchronizing, min_rank_word_via_fixing, pair_table, reduction_to_complete,
    reset_word_via_collecting,
};
use partial_sync::{PartialDfa, StateSet, Word};
use proptest::prelude::*;

/// Any partial automaton, not necessarily strongly connected.
fn any_dfa(max_n: usize) -> impl Strategy<Value = PartialDfa> {
    (1..=max_n, 1..=3usize).prop_flat_map(|(n, k)| {
        prop::collection::vec(prop::option::weighted(0.8, 0..n), n * k).prop_map(move |cells| {
            let rows: Vec<Vec<Option<usize>>> = cells.chunks(k).map(|c| c.to_vec()).collect();
            let alphabet: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
            PartialDfa::from_rows(&alphabet, &rows).unwrap()
        })
    })
}

/// Strongly connected partial automata from the seeded generator.
fn connected_dfa(max_n: usize) -> impl Strategy<Value = PartialDfa> {
    (1..=max_n, 2..=3usize, 60..=100u32, any::<u64>())
        .prop_map(|(n, k, d, seed)| gen_random_partial(n, k, d as f64 / 100.0, seed).unwrap())
}

fn word_for(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..k, 0..=max_len).prop_map(Word::new)
}

fn dfa_word_set(max_n: usize) -> impl Strategy<Value = (PartialDfa, Word, Word, Vec<bool>)> {
    any_dfa(max_n).prop_flat_map(|dfa| {
        let k = dfa.num_letters();
        let n = dfa.num_states();
        (Just(dfa), word_for(k, 12), word_for(k, 12), prop::collection::vec(any::<bool>(), n))
    })
}

fn set_of(n: usize, mask: &[bool]) -> StateSet {
    StateSet::from_states(n, (0..n).filter(|&q| mask[q]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn preimage_adjoint_to_action((dfa, w, _, mask) in dfa_word_set(10)) {
        let s = set_of(dfa.num_states(), &mask);
        let pre = dfa.preimage(&s, &w);
        for q in 0..dfa.num_states() {
            prop_assert_eq!(pre.contains(q), dfa.act(q, &w).is_some_and(|t| s.contains(t)));
        }
    }

    #[test]
    fn preimages_of_disjoint_sets_are_disjoint((dfa, w, _, mask) in dfa_word_set(10)) {
        let n = dfa.num_states();
        let s = set_of(n, &mask);
        let t = StateSet::full(n).difference(&s);
        prop_assert!(dfa.preimage(&s, &w).is_disjoint(&dfa.preimage(&t, &w)));
    }

    #[test]
    fn image_composes((dfa, u, v, mask) in dfa_word_set(10)) {
        let s = set_of(dfa.num_states(), &mask);
        prop_assert_eq!(dfa.image(&s, &u.concat(&v)), dfa.image(&dfa.image(&s, &u), &v));
        prop_assert_eq!(dfa.image(&s, &u).to_vec(), naive_image(&dfa, &s.to_vec(), &u));
    }

    #[test]
    fn image_is_monotone((dfa, w, _, mask) in dfa_word_set(10)) {
        let n = dfa.num_states();
        let s = set_of(n, &mask);
        prop_assert!(dfa.image(&s, &w).is_subset(&dfa.image(&StateSet::full(n), &w)));
    }

    #[test]
    fn mortality_absorbs((dfa, w, u, _) in dfa_word_set(10)) {
        if dfa.is_mortal(&w) {
            prop_assert!(dfa.is_mortal(&w.concat(&u)));
        }
        prop_assert_eq!(dfa.rank(&Word::empty()), dfa.num_states());
    }

    #[test]
    fn classes_match_reference(dfa in any_dfa(9)) {
        let part = inseparability_partition(&dfa);
        let classes: Vec<Vec<usize>> = part.classes().iter().map(|c| c.to_vec()).collect();
        prop_assert_eq!(&classes, &naive_classes(&dfa));
        let hop: Vec<Vec<usize>> = hopcroft_classes(&dfa).iter().map(|c| c.to_vec()).collect();
        prop_assert_eq!(&hop, &classes);
        let n = dfa.num_states();
        for p in 0..n {
            for q in p + 1..n {
                let w = part.separating_word(&dfa, p, q);
                prop_assert_eq!(w.is_some(), part.class_of(p) != part.class_of(q));
                if let Some(w) = w {
                    prop_assert_ne!(dfa.act(p, &w).is_some(), dfa.act(q, &w).is_some());
                }
            }
        }
    }

    #[test]
    fn quotient_is_well_defined(dfa in any_dfa(9)) {
        let part = inseparability_partition(&dfa);
        let (quot, map) = quotient(&dfa, part.classes()).unwrap();
        prop_assert_eq!(quot.num_states(), part.num_classes());
        for q in 0..dfa.num_states() {
            for a in 0..dfa.num_letters() {
                prop_assert_eq!(quot.step(map[q], a), dfa.step(q, a).map(|t| map[t]));
            }
        }
    }

    #[test]
    fn pair_table_words_compress(dfa in any_dfa(8)) {
        let table = pair_table(&dfa);
        let n = dfa.num_states();
        for p in 0..n {
            for q in p + 1..n {
                if let Some(w) = table.compressing_word(&dfa, p, q) {
                    prop_assert_eq!(dfa.image(&StateSet::from_states(n, [p, q]), &w).len(), 1);
                    prop_assert_eq!(Some(w.len()), table.distance(p, q));
                }
            }
        }
    }

    #[test]
    fn greedy_reaches_oracle_rank(dfa in connected_dfa(8)) {
        let oracle = naive_min_nonzero_rank(&dfa);
        let greedy = greedy_min_rank(&dfa).unwrap();
        prop_assert_eq!(Some(greedy.final_rank), oracle);
        prop_assert!(greedy.replay(&dfa, &dfa.all_states()));
        prop_assert!(greedy.trace.windows(2).all(|s| s[0].size > s[1].size));
        let via = min_rank_word_via_fixing(&dfa).unwrap();
        prop_assert_eq!(via.final_rank, greedy.final_rank);
        prop_assert_eq!(dfa.rank(&via.word), via.final_rank);
        prop_assert_eq!(is_synchronizing(&dfa).unwrap(), oracle == Some(1));
    }

    #[test]
    fn reduction_preserves_synchronizability(dfa in connected_dfa(8)) {
        let red = reduction_to_complete(&dfa).unwrap();
        prop_assert!(red.automaton.is_complete());
        let sync = naive_thresholds(&dfa)[1].is_some();
        prop_assert_eq!(naive_thresholds(&red.automaton)[1].is_some(), sync);
        if sync {
            let parts = reset_word_via_collecting(&dfa).unwrap();
            prop_assert_eq!(dfa.rank(&parts.word), 1);
            prop_assert!(parts.word.len() >= naive_thresholds(&dfa)[1].unwrap());
        }
    }

    #[test]
    fn oracle_matches_reference(dfa in any_dfa(8)) {
        let report = subset_bfs(&dfa).unwrap();
        let reference = naive_rank_words(&dfa);
        for (r, expected) in reference.iter().enumerate() {
            prop_assert_eq!(report.witness(r), expected.as_ref());
            if let Some(w) = report.witness(r) {
                prop_assert_eq!(dfa.rank(w), r);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn duplicating_doubles_thresholds(n in 2..=5usize, seed in any::<u64>()) {
        let dfa = gen_random_partial(n, 2, 1.0, seed).unwrap();
        let base = naive_thresholds(&dfa);
        let doubled = naive_thresholds(&duplicating(&dfa).unwrap());
        for r in 1..n {
            if let Some(t) = base[r] {
                prop_assert_eq!(doubled[r], Some(2 * t));
            }
        }
    }

    #[test]
    fn literal_automaton_recognizes_star(count in 1..=4usize, maxlen in 1..=4usize, seed in any::<u64>()) {
        let code = match gen_random_prefix_code(count, maxlen, 2, seed) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let lit = literal_automaton(&code);
        let dfa = lit.dfa();
        prop_assert!(dfa.is_strongly_connected());
        prop_assert!(lit.num_states() <= code.total_length());
        let limit = 2 * code.words().iter().map(|w| w.len()).max().unwrap();
        // enumerate all words up to the limit; membership in X* by greedy parsing (X is a prefix code)
        let mut frontier = vec![Word::empty()];
        for _ in 0..limit {
            let mut next = Vec::new();
            for w in &frontier {
                for a in 0..2 {
                    let m = w.concat(&[a]);
                    let mut rest: &[usize] = &m;
                    let mut in_star = true;
                    while !rest.is_empty() {
                        match code.words().iter().find(|x| rest.starts_with(x)) {
                            Some(x) => rest = &rest[x.len()..],
                            None => { in_star = false; break; }
                        }
                    }
                    prop_assert_eq!(dfa.act(lit.root(), &m) == Some(lit.root()), in_star);
                    next.push(m);
                }
            }
            frontier = next;
        }
    }

    #[test]
    fn log_rank_postconditions(count in 2..=8usize, maxlen in 2..=7usize, alpha in 2..=3usize, seed in any::<u64>()) {
        let code = match gen_random_prefix_code(count, maxlen, alpha, seed) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let lit = literal_automaton(&code);
        let res = log_rank_word(&lit).unwrap();
        let rank = lit.dfa().rank(&res.word);
        prop_assert!(rank >= 1);
        prop_assert!(res.word.len() <= 2 * lit.height());
        prop_assert!(rank <= log_rank_bound(&lit));
        prop_assert!(passes_through_root(&lit, &res.filtered.word));
        let r = lit.dfa().image(&lit.dfa().all_states(), &res.filtered.word);
        let steps = compress_path_steps(&lit, &r).unwrap();
        prop_assert!(steps.active_sizes.windows(2).all(|s| s[1] <= s[0] / 2));
    }

    #[test]
    fn one_word_codes(word in prop::collection::vec(0..2usize, 1..=9), k in 1..=3usize) {
        let y: String = word.iter().map(|&a| if a == 0 { 'a' } else { 'b' }).collect();
        let x = y.repeat(k);
        let code = validate_code(&[x.as_str()]).unwrap();
        let lit = literal_automaton(&code);
        let (root, power) = primitive_root(&code.words()[0]);
        prop_assert_eq!(root.repeat(power), code.words()[0].to_vec());
        prop_assert_eq!(Some(power), naive_min_nonzero_rank(lit.dfa()));
        // the quotient by inseparability is the literal automaton of the primitive root
        let part = inseparability_partition(lit.dfa());
        let root_code = literal_automaton(&partial_sync::codes::PrefixCode::new(code.alphabet().to_vec(), vec![root.clone()]).unwrap());
        prop_assert_eq!(part.num_classes(), root_code.num_states());
        if power == 1 {
            let (u, v) = weinbaum_conjugate(&code.words()[0], &lit).unwrap();
            prop_assert_eq!(lit.defined_count(&u), 1);
            prop_assert_eq!(lit.defined_count(&v), 1);
            prop_assert!(u.len().min(v.len()) <= x.len() / 2);
        }
    }
}

#[test]
fn mortal_witnesses_are_shortest() {
    for seed in 0..60u64 {
        let dfa = gen_random_partial(2 + (seed % 7) as usize, 2, 0.7, seed).unwrap();
        let report = subset_bfs(&dfa).unwrap();
        if let Some(w) = report.witness(0) {
            assert!(dfa.is_mortal(w));
            // no shorter word is mortal
            let k = dfa.num_letters();
            for len in 0..w.len() {
                let total = k.pow(len as u32);
                for code in 0..total {
                    let cand: Word = (0..len).map(|i| code / k.pow(i as u32) % k).collect();
                    assert!(!dfa.is_mortal(&cand), "seed {seed}: {cand:?} shorter than {w:?}");
                }
            }
        }
    }
}
