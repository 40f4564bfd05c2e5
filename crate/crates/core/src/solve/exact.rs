//! Exact backtracking search: the ground-truth oracle.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{ColourId, Element, Instance};
use crate::matching::{Edge, Matching};
use crate::solve::{SolveOutcome, SolveStats};

/// Searches for a rainbow matching of exactly `size` edges by backtracking
/// over colours in increasing kernel-size order. Colours may be skipped as
/// long as enough remain; a colour whose cliques hold no free pair fails the
/// assignment branch immediately.
///
/// Returns the matching when found, an exhaustive proof of absence when the
/// whole tree was explored, or a budget-exhausted outcome.
pub fn solve_exact(instance: &Instance, size: usize, budget: u64) -> Result<SolveOutcome> {
    let report = instance.validate();
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.summary()));
    }
    Ok(solve_exact_core(instance, size, budget, None))
}

/// As `solve_exact` but without re-validating; for internal callers that
/// construct instances invariantly valid. `deadline` aborts with a timeout
/// outcome.
pub(crate) fn solve_exact_core(
    instance: &Instance,
    size: usize,
    budget: u64,
    deadline: Option<Instant>,
) -> SolveOutcome {
    let start = Instant::now();
    let mut order: Vec<ColourId> = (0..instance.n()).collect();
    order.sort_by_key(|&c| (instance.classes()[c].kernel_size(), c));

    let universe = instance.universe().as_slice().to_vec();
    let mut search = ExactSearch {
        instance,
        budget,
        deadline,
        order,
        universe,
        used: Vec::new(),
        chosen: Vec::new(),
        stats: SolveStats::default(),
        stopped: false,
        timed_out: false,
    };
    search.used = vec![false; search.universe.len()];

    let found = size == 0 || search.dfs(0, size);
    search.stats.wall_millis = start.elapsed().as_millis();
    let stats = search.stats.clone();
    if found {
        let matching = Matching::new(search.chosen).canonicalized();
        return SolveOutcome::found(matching, stats);
    }
    if search.timed_out {
        return SolveOutcome::timeout(stats);
    }
    if search.stopped {
        return SolveOutcome::exhausted(stats);
    }
    SolveOutcome::absence(stats)
}

struct ExactSearch<'a> {
    instance: &'a Instance,
    budget: u64,
    deadline: Option<Instant>,
    order: Vec<ColourId>,
    universe: Vec<Element>,
    used: Vec<bool>,
    chosen: Vec<Edge>,
    stats: SolveStats,
    stopped: bool,
    timed_out: bool,
}

impl<'a> ExactSearch<'a> {
    fn slot(&self, x: Element) -> usize {
        self.universe.binary_search(&x).expect("element in universe")
    }

    /// True once a full matching is found; `self.chosen` then holds it.
    fn dfs(&mut self, pos: usize, need: usize) -> bool {
        self.stats.nodes += 1;
        if self.stats.nodes > self.budget {
            self.stopped = true;
            return false;
        }
        if let Some(deadline) = self.deadline {
            if self.stats.nodes % 1024 == 0 && Instant::now() >= deadline {
                self.stopped = true;
                self.timed_out = true;
                return false;
            }
        }
        if need == 0 {
            return true;
        }
        if self.order.len() - pos < need {
            return false;
        }
        let colour = self.order[pos];
        let clique_count = self.instance.classes()[colour].cliques().len();
        for ci in 0..clique_count {
            let clique = &self.instance.classes()[colour].cliques()[ci];
            let free: Vec<Element> = clique
                .iter()
                .copied()
                .filter(|&x| !self.used[self.slot(x)])
                .collect();
            for i in 0..free.len() {
                for j in (i + 1)..free.len() {
                    let (u, v) = (free[i], free[j]);
                    let (su, sv) = (self.slot(u), self.slot(v));
                    self.used[su] = true;
                    self.used[sv] = true;
                    self.chosen.push(Edge::new(colour, u, v));
                    self.stats.best_size = self.stats.best_size.max(self.chosen.len());
                    self.stats.depth = self.stats.depth.max(self.chosen.len());
                    if self.dfs(pos + 1, need - 1) {
                        return true;
                    }
                    self.chosen.pop();
                    self.used[su] = false;
                    self.used[sv] = false;
                    if self.stopped {
                        return false;
                    }
                }
            }
        }
        // Leave this colour unmatched if enough colours remain.
        if self.order.len() - (pos + 1) >= need {
            return self.dfs(pos + 1, need);
        }
        false
    }
}
