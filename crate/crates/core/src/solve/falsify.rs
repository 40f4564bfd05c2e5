//! Stochastic search for counterexample instances.
//!
//! Random restarts plus single-clique mutations (split, merge, swap-vertex),
//! scored by the exact solver under a small per-candidate node budget and
//! accepted on equal-or-better score. Budget-exhausted candidates score as
//! if unsolvable, which steers the walk toward hard instances; any returned
//! witness is re-verified with an unbounded exhaustive run first.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::instance::{Element, Instance};
use crate::solve::exact::solve_exact_core;
use crate::solve::SolveOutcome;

#[derive(Debug, Clone)]
pub struct FalsifyResult {
    pub instance: Instance,
    /// The exhaustive absence certificate for size `n`.
    pub certificate: SolveOutcome,
    /// Candidates evaluated by the restart that found the witness.
    pub candidates_evaluated: u64,
    pub restart: u64,
}

const RESTART_LEN: u64 = 4000;
const RESTART_BATCH: u64 = 8;
const PER_CANDIDATE_NODES: u64 = 1500;

/// Hunts for an instance with `n` colours, kernels at least `kernel` (hit
/// exactly), and no rainbow matching of size `n`. `budget` caps the total
/// number of candidate evaluations across restarts. Deterministic per seed:
/// restarts use independent derived streams and the lowest-numbered
/// successful restart wins regardless of scheduling.
pub fn falsify(
    n: usize,
    kernel: usize,
    simple: bool,
    budget: u64,
    seed: u64,
) -> Result<Option<FalsifyResult>> {
    if n == 0 {
        return Err(Error::Parameter("need at least one colour".into()));
    }
    if kernel < 2 {
        return Err(Error::Parameter("kernel must be at least 2".into()));
    }
    let pool = (kernel + 2) as Element;
    let restarts = budget.div_ceil(RESTART_LEN).max(1);

    let mut batch_start = 0u64;
    while batch_start < restarts {
        let batch_end = (batch_start + RESTART_BATCH).min(restarts);
        let mut results: Vec<(u64, Option<FalsifyResult>)> = (batch_start..batch_end)
            .into_par_iter()
            .map(|restart| {
                let consumed = restart.saturating_mul(RESTART_LEN);
                let candidates = RESTART_LEN.min(budget.saturating_sub(consumed));
                (
                    restart,
                    run_restart(n, kernel, pool, simple, seed, restart, candidates),
                )
            })
            .collect();
        results.sort_by_key(|&(r, _)| r);
        for (_, result) in results {
            if let Some(found) = result {
                return Ok(Some(found));
            }
        }
        batch_start = batch_end;
    }
    Ok(None)
}

fn run_restart(
    n: usize,
    kernel: usize,
    pool: Element,
    simple: bool,
    seed: u64,
    restart: u64,
    max_candidates: u64,
) -> Option<FalsifyResult> {
    if max_candidates == 0 {
        return None;
    }
    let mut rng =
        ChaCha8Rng::seed_from_u64(seed ^ restart.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let mut evaluated = 0u64;

    let mut current = loop {
        match draw_candidate(n, kernel, pool, simple, &mut rng) {
            Some(c) => break c,
            None => {
                evaluated += 1;
                if evaluated >= max_candidates {
                    return None;
                }
            }
        }
    };
    let mut verdict = evaluate(&current, n, &mut evaluated);
    if let Evaluation::Witness(certificate) = verdict {
        return Some(FalsifyResult {
            instance: Instance::from_cliques(current, simple),
            certificate,
            candidates_evaluated: evaluated,
            restart,
        });
    }

    while evaluated < max_candidates {
        let Some(neighbour) = mutate(&current, pool, simple, &mut rng) else {
            continue;
        };
        match evaluate(&neighbour, n, &mut evaluated) {
            Evaluation::Witness(certificate) => {
                return Some(FalsifyResult {
                    instance: Instance::from_cliques(neighbour, simple),
                    certificate,
                    candidates_evaluated: evaluated,
                    restart,
                });
            }
            Evaluation::Solvable(best) => {
                let current_best = match verdict {
                    Evaluation::Solvable(b) => b,
                    Evaluation::Witness(_) => unreachable!(),
                };
                // Accept sideways moves: lower best size is better.
                if best <= current_best {
                    current = neighbour;
                    verdict = Evaluation::Solvable(best);
                }
            }
        }
    }
    None
}

enum Evaluation {
    /// Exhaustive proof that no full rainbow matching exists.
    Witness(SolveOutcome),
    /// A full matching was found; payload is the best size the budget-capped
    /// search reached (pessimistically `n - 1` when the budget ran out and
    /// the unbounded re-check then found a matching).
    Solvable(usize),
}

fn evaluate(classes: &[Vec<Vec<Element>>], n: usize, evaluated: &mut u64) -> Evaluation {
    *evaluated += 1;
    let instance = Instance::from_cliques(classes.to_vec(), false);
    let quick = solve_exact_core(&instance, n, PER_CANDIDATE_NODES, None);
    if quick.is_found() {
        return Evaluation::Solvable(n);
    }
    if quick.is_exhaustive_absence() {
        return Evaluation::Witness(quick);
    }
    // Budget ran out: re-verify exhaustively before any claim.
    let full = solve_exact_core(&instance, n, u64::MAX / 2, None);
    if full.is_exhaustive_absence() {
        Evaluation::Witness(full)
    } else {
        Evaluation::Solvable(n - 1)
    }
}

/// Random clique system per colour on the element pool, kernels exactly
/// `kernel`, clique sizes mostly pairs with occasional triangles. In simple
/// mode candidates that duplicate a pair across colours are rejected.
fn draw_candidate(
    n: usize,
    kernel: usize,
    pool: Element,
    simple: bool,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<Vec<Element>>>> {
    let mut classes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut members: Vec<Element> = (0..pool).collect();
        for i in (1..members.len()).rev() {
            let j = rng.random_range(0..=i);
            members.swap(i, j);
        }
        members.truncate(kernel);
        let mut cliques = Vec::new();
        let mut rest = &members[..];
        while !rest.is_empty() {
            let mut size = if rest.len() >= 3 && rng.random_range(0..4u8) == 0 {
                3
            } else {
                2
            };
            if rest.len() - size == 1 {
                size = rest.len();
            }
            let (clique, tail) = rest.split_at(size.min(rest.len()));
            let mut clique = clique.to_vec();
            clique.sort_unstable();
            cliques.push(clique);
            rest = tail;
        }
        cliques.sort();
        classes.push(cliques);
    }
    if simple && has_shared_pair(&classes) {
        return None;
    }
    Some(classes)
}

fn has_shared_pair(classes: &[Vec<Vec<Element>>]) -> bool {
    let mut owner: std::collections::HashMap<(Element, Element), usize> =
        std::collections::HashMap::new();
    for (colour, class) in classes.iter().enumerate() {
        for clique in class {
            for i in 0..clique.len() {
                for j in (i + 1)..clique.len() {
                    let pair = (clique[i].min(clique[j]), clique[i].max(clique[j]));
                    match owner.insert(pair, colour) {
                        Some(previous) if previous != colour => return true,
                        _ => {}
                    }
                }
            }
        }
    }
    false
}

/// One mutation preserving kernel sizes and clique minimums of two: split a
/// clique of four or more, merge two cliques, or swap one member for an
/// element outside the class. Returns `None` when the drawn mutation does
/// not apply or breaks simple mode.
fn mutate(
    classes: &[Vec<Vec<Element>>],
    pool: Element,
    simple: bool,
    rng: &mut ChaCha8Rng,
) -> Option<Vec<Vec<Vec<Element>>>> {
    let mut next = classes.to_vec();
    let colour = rng.random_range(0..classes.len());
    let class = &mut next[colour];
    match rng.random_range(0..3u8) {
        0 => {
            // Split a clique of size >= 4 into two halves of size >= 2.
            let big: Vec<usize> = (0..class.len()).filter(|&i| class[i].len() >= 4).collect();
            if big.is_empty() {
                return None;
            }
            let target = big[rng.random_range(0..big.len())];
            let mut members = class.remove(target);
            for i in (1..members.len()).rev() {
                let j = rng.random_range(0..=i);
                members.swap(i, j);
            }
            let cut = rng.random_range(2..=members.len() - 2);
            let (a, b) = members.split_at(cut);
            let mut a = a.to_vec();
            let mut b = b.to_vec();
            a.sort_unstable();
            b.sort_unstable();
            class.push(a);
            class.push(b);
        }
        1 => {
            // Merge two cliques.
            if class.len() < 2 {
                return None;
            }
            let i = rng.random_range(0..class.len());
            let mut j = rng.random_range(0..class.len() - 1);
            if j >= i {
                j += 1;
            }
            let (lo, hi) = (i.min(j), i.max(j));
            let other = class.remove(hi);
            class[lo].extend(other);
            class[lo].sort_unstable();
        }
        _ => {
            // Swap one member for an element unused by this class.
            let in_class: std::collections::HashSet<Element> =
                class.iter().flatten().copied().collect();
            let outside: Vec<Element> =
                (0..pool).filter(|x| !in_class.contains(x)).collect();
            if outside.is_empty() {
                return None;
            }
            let clique = rng.random_range(0..class.len());
            let slot = rng.random_range(0..class[clique].len());
            class[clique][slot] = outside[rng.random_range(0..outside.len())];
            class[clique].sort_unstable();
        }
    }
    class.sort();
    if simple && has_shared_pair(&next) {
        return None;
    }
    Some(next)
}
