//! The batch self-check behind `psync verify all`.
//!
//! Each check runs a small seeded corpus through the algorithms and compares
//! against the subset oracle. Checks run on separate threads; results are
//! reported in name order.

use crate::automaton::{PartialDfa, Word};
use crate::codes::{
    compress_path_steps, literal_automaton, literal_reset_word, log_rank_bound, log_rank_word, one_word_rank,
    validate_code, PrefixCode,
};
use crate::constructions::{fixing, lift_word_to_partial};
use crate::equivalence::inseparability_partition;
use crate::fixtures;
use crate::generators::{gen_cerny, gen_oneword_code, gen_random_partial, gen_random_prefix_code};
use crate::oracle::{duplicating_identity_check, extremal_search, subset_bfs, SearchProfile};
use crate::rng::Lcg64;
use crate::state_set::StateSet;
use crate::synchronization::{
    greedy_min_rank, is_synchronizing, min_rank_word_via_fixing, reduction_to_complete, reset_word_via_collecting,
};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Seeded random strongly connected partial automata with `2..=max_n` states
/// and densities in `[0.6, 0.95]`.
pub fn random_corpus(count: usize, max_n: usize, alpha: usize, seed: u64) -> Vec<PartialDfa> {
    let mut rng = Lcg64::new(seed);
    (0..count)
        .map(|_| {
            let n = 2 + rng.below(max_n.max(2) - 1);
            let density = 0.6 + 0.35 * rng.unit();
            let s = rng.next_u32() as u64;
            gen_random_partial(n, alpha, density, s).expect("densities above 0.6 connect quickly")
        })
        .collect()
}

/// Seeded random complete strongly connected automata with `2..=max_n` states.
pub fn random_complete_corpus(count: usize, max_n: usize, seed: u64) -> Vec<PartialDfa> {
    let mut rng = Lcg64::new(seed);
    (0..count)
        .map(|_| {
            let n = 2 + rng.below(max_n.max(2) - 1);
            gen_random_partial(n, 2, 1.0, rng.next_u32() as u64).expect("complete automata connect quickly")
        })
        .collect()
}

/// Seeded random prefix codes with at least two words and total length at most `max_total`.
pub fn random_code_corpus(count: usize, max_total: usize, seed: u64) -> Vec<PrefixCode> {
    let mut rng = Lcg64::new(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let words = 2 + rng.below(7);
        let maxlen = 2 + rng.below(6);
        let alpha = 2 + rng.below(2);
        if let Ok(code) = gen_random_prefix_code(words, maxlen, alpha, rng.next_u32() as u64) {
            if code.total_length() <= max_total {
                out.push(code);
            }
        }
    }
    out
}

fn outcome(name: &'static str, failures: Vec<String>, ok_detail: String) -> CheckResult {
    match failures.first() {
        None => CheckResult { name, passed: true, detail: ok_detail },
        Some(first) => CheckResult {
            name,
            passed: false,
            detail: format!("{} failure(s); first: {first}", failures.len()),
        },
    }
}

fn check_sample() -> CheckResult {
    let dfa = fixtures::sample6();
    let mut failures = Vec::new();
    match subset_bfs(&dfa) {
        Ok(report) => {
            if report.witness(1).map(|w| dfa.render_word(w)).as_deref() != Some("b a b") {
                failures.push("oracle witness is not `b a b`".to_string());
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    if is_synchronizing(&dfa) != Ok(true) {
        failures.push("sample automaton not reported synchronizing".into());
    }
    let classes: Vec<String> = inseparability_partition(&dfa).classes().iter().map(|c| c.to_string()).collect();
    if classes != ["{0,3}", "{1,4}", "{2,5}"] {
        failures.push(format!("classes {classes:?}"));
    }
    outcome("sample", failures, "rt=3, classes {0,3} {1,4} {2,5}".into())
}

fn check_cerny(cap: usize) -> CheckResult {
    let mut failures = Vec::new();
    let top = cap.min(8);
    for n in 2..=top {
        let dfa = gen_cerny(n).unwrap();
        let rt = subset_bfs(&dfa).ok().and_then(|r| r.reset_threshold());
        if rt != Some((n - 1) * (n - 1)) {
            failures.push(format!("C_{n}: rt {rt:?}"));
        }
    }
    outcome("cerny", failures, format!("rt(C_n) = (n-1)^2 for n = 2..={top}"))
}

fn check_duplicating(cap: usize) -> CheckResult {
    let top = cap.min(6);
    let mut corpus: Vec<PartialDfa> = (2..=top).map(|n| gen_cerny(n).unwrap()).collect();
    corpus.extend(random_complete_corpus(20, top, 4));
    let mut failures = Vec::new();
    for (i, dfa) in corpus.iter().enumerate() {
        match duplicating_identity_check(dfa) {
            Ok(report) if report.holds() => {}
            Ok(report) => failures.push(format!("instance {i}: {:?}", report.rows)),
            Err(e) => failures.push(format!("instance {i}: {e}")),
        }
    }
    outcome("duplicating", failures, format!("{} automata", corpus.len()))
}

fn check_greedy(corpus: &[PartialDfa]) -> CheckResult {
    let mut failures = Vec::new();
    for (i, dfa) in corpus.iter().enumerate() {
        let oracle = subset_bfs(dfa).unwrap().min_nonzero_rank();
        for (label, res) in [("greedy", greedy_min_rank(dfa)), ("fixing", min_rank_word_via_fixing(dfa))] {
            match res {
                Ok(r) if Some(r.final_rank) == oracle && dfa.rank(&r.word) == r.final_rank => {}
                Ok(r) => failures.push(format!("instance {i}: {label} rank {} vs oracle {oracle:?}", r.final_rank)),
                Err(e) => failures.push(format!("instance {i}: {label}: {e}")),
            }
        }
    }
    outcome("greedy-rank", failures, format!("{} automata", corpus.len()))
}

fn check_reduction(corpus: &[PartialDfa]) -> CheckResult {
    let mut failures = Vec::new();
    for (i, dfa) in corpus.iter().enumerate() {
        let oracle = subset_bfs(dfa).unwrap().reset_threshold();
        let direct = is_synchronizing(dfa).unwrap();
        let reduced = reduction_to_complete(dfa).and_then(|r| is_synchronizing(&r.automaton));
        if reduced != Ok(direct) || direct != oracle.is_some() {
            failures.push(format!("instance {i}: direct {direct}, reduced {reduced:?}, oracle {oracle:?}"));
        }
        if let Some(rt) = oracle {
            match reset_word_via_collecting(dfa) {
                Ok(parts) if dfa.rank(&parts.word) == 1 && parts.word.len() >= rt => {}
                Ok(_) => failures.push(format!("instance {i}: collecting reset word invalid")),
                Err(e) => failures.push(format!("instance {i}: {e}")),
            }
        }
    }
    outcome("reduction", failures, format!("{} automata", corpus.len()))
}

fn check_lemmas(corpus: &[PartialDfa]) -> CheckResult {
    let mut failures = Vec::new();
    let mut rng = Lcg64::new(17);
    for (i, dfa) in corpus.iter().enumerate() {
        let n = dfa.num_states();
        let part = inseparability_partition(dfa);
        let kq = part.num_classes();
        let fix = fixing(dfa);
        for _ in 0..20 {
            let set = random_subset(&mut rng, n);
            let ks = part.kappa(&set);
            if ks >= 2 {
                let w = part.class_reducing_word(dfa, &set).unwrap();
                let k_img = part.kappa(&dfa.image(&set, &w));
                if !(1 <= k_img && k_img < ks && w.len() <= (kq - ks + 1).min(n - set.len() + 1)) {
                    failures.push(format!("instance {i}: class reducing word on {set}"));
                }
            }
            let w: Word = (0..rng.below(13)).map(|_| rng.below(dfa.num_letters())).collect();
            let lifted = lift_word_to_partial(dfa, &set, &w).unwrap();
            let img = dfa.image(&set, &lifted);
            if img.is_empty() || !img.is_subset(&fix.image(&set, &w)) || lifted.len() > w.len() {
                failures.push(format!("instance {i}: lifting on {set}"));
            }
        }
    }
    outcome("lemmas", failures, format!("{} automata", corpus.len()))
}

fn random_subset(rng: &mut Lcg64, n: usize) -> StateSet {
    loop {
        let set = StateSet::from_states(n, (0..n).filter(|_| rng.below(2) == 1));
        if !set.is_empty() {
            return set;
        }
    }
}

fn check_log_rank(count: usize) -> CheckResult {
    let mut failures = Vec::new();
    for (i, code) in random_code_corpus(count, 60, 23).iter().enumerate() {
        let lit = literal_automaton(code);
        let dfa = lit.dfa();
        match log_rank_word(&lit) {
            Ok(res) => {
                let rank = dfa.rank(&res.word);
                if rank == 0 || res.word.len() > 2 * lit.height() || rank > log_rank_bound(&lit) {
                    failures.push(format!("code {i}: rank {rank}, length {}", res.word.len()));
                }
                let r = dfa.image(&dfa.all_states(), &res.filtered.word);
                let steps = compress_path_steps(&lit, &r).unwrap();
                if steps.active_sizes.windows(2).any(|w| w[1] > w[0] / 2) {
                    failures.push(format!("code {i}: halving violated {:?}", steps.active_sizes));
                }
            }
            Err(e) => failures.push(format!("code {i}: {e}")),
        }
    }
    outcome("log-rank", failures, format!("{count} codes"))
}

fn check_one_word() -> CheckResult {
    let mut failures = Vec::new();
    for k in 1..=4 {
        let code = gen_oneword_code(k).unwrap();
        let lit = literal_automaton(&code);
        let rt = subset_bfs(lit.dfa()).unwrap().reset_threshold();
        let reset = literal_reset_word(&lit).map(|w| w.len());
        if rt != Some(k + 1) || reset != Ok(k + 1) {
            failures.push(format!("k={k}: rt {rt:?}, reset length {reset:?}"));
        }
    }
    for k in 2..=3 {
        let code = validate_code(&["ab".repeat(k)]).unwrap();
        let lit = literal_automaton(&code);
        let oracle = subset_bfs(lit.dfa()).unwrap().min_nonzero_rank();
        if one_word_rank(&code) != Ok(k) || oracle != Some(k) {
            failures.push(format!("(ab)^{k}: oracle rank {oracle:?}"));
        }
    }
    outcome("one-word", failures, "Z for k=1..4, (ab)^k for k=2,3".into())
}

fn check_extremal(cap: usize) -> CheckResult {
    let mut failures = Vec::new();
    let top = cap.min(4);
    for n in 2..=top {
        match extremal_search(n, SearchProfile::Exhaustive) {
            Ok(report) if report.attained() => {}
            Ok(report) => failures.push(format!("n={n}: best {:?} < {}", report.best_rt, report.target)),
            Err(e) => failures.push(format!("n={n}: {e}")),
        }
    }
    outcome("extremal", failures, format!("(n^2-n)/2 attained for n = 2..={top}"))
}

/// Runs every check on corpora with at most `size_cap` states.
pub fn run_all(size_cap: usize) -> Vec<CheckResult> {
    let cap = size_cap.clamp(2, 12);
    let corpus = random_corpus(100, cap.min(8), 2, 1);
    let mut results: Vec<CheckResult> = std::thread::scope(|s| {
        let corpus = &corpus;
        let handles = vec![
            s.spawn(check_sample),
            s.spawn(move || check_cerny(cap)),
            s.spawn(move || check_duplicating(cap)),
            s.spawn(move || check_greedy(corpus)),
            s.spawn(move || check_reduction(corpus)),
            s.spawn(move || check_lemmas(corpus)),
            s.spawn(|| check_log_rank(50)),
            s.spawn(check_one_word),
            s.spawn(move || check_extremal(cap)),
        ];
        handles
            .into_iter()
            .map(|h| {
                h.join().unwrap_or_else(|_| CheckResult {
                    name: "panic",
                    passed: false,
                    detail: "a check panicked".into(),
                })
            })
            .collect()
    });
    results.sort_by_key(|r| r.name);
    results
}
