//! Checking the switching-surplus condition that guarantees augmentation.
//!
//! For a rainbow matching of size `n - 1` missing colour `c0`, the condition
//! asks that for every colour `c` and every `(c0, c)`-switching `s` there are
//! at least `ceil((1 + delta) * n) - 4 * len(s)` pairwise disjoint `c`-edges
//! between the vertices free of both the matching and the switching and the
//! vertices free of the switching. Switching length is unbounded in general,
//! so the check is truncated at a caller-chosen length and the verdict is
//! always "verified up to length L", never "verified".

use serde::Serialize;

use crate::counting::max_disjoint_colour_edges;
use crate::delta::Delta;
use crate::error::{Error, Result};
use crate::instance::{ColourId, Instance};
use crate::matching::Matching;
use crate::switching::{enumerate_switchings, Switching};

#[derive(Debug, Clone)]
pub struct HypothesisFailure {
    pub colour: ColourId,
    pub switching: Switching,
    pub required: i64,
    pub available: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HypothesisVerdict {
    /// No failures among all switchings of length at most the given bound.
    VerifiedUpToLength(usize),
    Failed,
}

#[derive(Debug, Clone)]
pub struct HypothesisReport {
    pub missing_colour: ColourId,
    pub delta: Delta,
    pub max_len: usize,
    pub switchings_checked: u64,
    pub failures: Vec<HypothesisFailure>,
}

impl HypothesisReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn verdict(&self) -> HypothesisVerdict {
        if self.holds() {
            HypothesisVerdict::VerifiedUpToLength(self.max_len)
        } else {
            HypothesisVerdict::Failed
        }
    }
}

/// Verifies the surplus inequality for every switching starting at the
/// missing colour, up to `max_len`. Requires `matching` to be a rainbow
/// matching of size `n - 1` whose missing colour is `missing`.
pub fn check_augmentation_hypothesis(
    instance: &Instance,
    matching: &Matching,
    missing: ColourId,
    delta: Delta,
    max_len: usize,
) -> Result<HypothesisReport> {
    if missing >= instance.n() {
        return Err(Error::InvalidColour {
            colour: missing,
            n: instance.n(),
        });
    }
    if matching.edge_of_colour(missing).is_some() {
        return Err(Error::MissingColourPresent { colour: missing });
    }
    if matching.len() + 1 != instance.n() {
        return Err(Error::Parameter(format!(
            "matching has {} edges; an instance with {} colours needs {}",
            matching.len(),
            instance.n(),
            instance.n() - 1
        )));
    }

    let n = instance.n();
    let base = delta.ceil_one_plus_times(n) as i64;
    let matched = matching.vertices();
    let universe = instance.universe().clone();

    let mut checked = 0u64;
    let mut failures = Vec::new();
    for switching in enumerate_switchings(instance, matching, missing, max_len, usize::MAX) {
        checked += 1;
        let colour = switching.end_colour();
        let blocked = switching.vertices();
        let from = universe.difference(&matched.union(&blocked));
        let to = universe.difference(&blocked);
        let available = max_disjoint_colour_edges(instance, colour, &from, &to)?;
        let required = base - 4 * switching.len() as i64;
        if (available as i64) < required {
            failures.push(HypothesisFailure {
                colour,
                switching,
                required,
                available,
            });
        }
    }
    Ok(HypothesisReport {
        missing_colour: missing,
        delta,
        max_len,
        switchings_checked: checked,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::max_disjoint_colour_edges;
    use crate::matching::Edge;
    use crate::vertex_set::VertexSet;

    #[test]
    fn empty_switching_case_reduces_to_free_edge_count() {
        // Two colours; colour 1 matched; colour 0 missing.
        let instance = Instance::from_cliques(
            vec![vec![vec![0, 1], vec![2, 3], vec![4, 5]], vec![vec![0, 2], vec![6, 7]]],
            false,
        );
        let matching = Matching::new(vec![Edge::new(1, 6, 7)]);
        let delta = Delta::one();
        let report =
            check_augmentation_hypothesis(&instance, &matching, 0, delta, 0).unwrap();
        // With max_len 0 only the empty switching is checked; the inequality
        // is exactly "enough disjoint missing-colour edges touch the free
        // vertices".
        assert_eq!(report.switchings_checked, 1);
        let free = instance.universe().difference(&matching.vertices());
        let available =
            max_disjoint_colour_edges(&instance, 0, &free, instance.universe()).unwrap();
        let required = delta.ceil_one_plus_times(2);
        assert_eq!(available, 3);
        assert_eq!(required, 4);
        assert!(!report.holds());
        assert_eq!(report.failures[0].available, available);
        assert_eq!(report.failures[0].required, required as i64);
        assert_eq!(report.verdict(), HypothesisVerdict::Failed);
    }

    #[test]
    fn giant_disjoint_cliques_satisfy_the_hypothesis() {
        // Each colour one huge clique, classes pairwise disjoint. Kernel
        // >= 2 * ceil((1+delta) * n) leaves enough disjoint edges at any
        // bounded switching length.
        let n = 3usize;
        let delta = Delta::one();
        let clique_size = 2 * delta.ceil_one_plus_times(n) + 8;
        let mut classes = Vec::new();
        let mut next = 0u32;
        for _ in 0..n {
            let clique: Vec<u32> = (next..next + clique_size as u32).collect();
            next += clique_size as u32;
            classes.push(vec![clique]);
        }
        let instance = Instance::from_cliques(classes, false);
        // Match colours 1..n inside their own cliques.
        let mut edges = Vec::new();
        for c in 1..n {
            let clique = &instance.classes()[c].cliques()[0];
            edges.push(Edge::new(c, clique[0], clique[1]));
        }
        let matching = Matching::new(edges);
        let report =
            check_augmentation_hypothesis(&instance, &matching, 0, delta, 2).unwrap();
        assert!(report.holds(), "failures: {}", report.failures.len());
        assert_eq!(report.verdict(), HypothesisVerdict::VerifiedUpToLength(2));
        assert!(report.switchings_checked >= 1);
    }

    #[test]
    fn missing_colour_present_is_an_error() {
        let instance =
            Instance::from_cliques(vec![vec![vec![0, 1]], vec![vec![2, 3]]], false);
        let matching = Matching::new(vec![Edge::new(0, 0, 1)]);
        let err = check_augmentation_hypothesis(&instance, &matching, 0, Delta::one(), 1)
            .unwrap_err();
        assert!(matches!(err, Error::MissingColourPresent { colour: 0 }));
    }

    #[test]
    fn vertex_sets_exclude_switching_vertices() {
        // Sanity: the `from` side never contains matched or switching
        // vertices. Exercised implicitly above; here a direct probe.
        let instance = Instance::from_cliques(
            vec![vec![vec![0, 1], vec![4, 5]], vec![vec![1, 2], vec![6, 7]]],
            false,
        );
        let matching = Matching::new(vec![Edge::new(1, 1, 2)]);
        let report =
            check_augmentation_hypothesis(&instance, &matching, 0, Delta::one(), 1).unwrap();
        for failure in &report.failures {
            let blocked = failure.switching.vertices();
            let matched = matching.vertices();
            let from = instance
                .universe()
                .difference(&matched.union(&blocked));
            assert!(from.is_disjoint(&blocked));
            assert!(from.is_disjoint(&matched));
            let _: &VertexSet = &from;
        }
    }
}
