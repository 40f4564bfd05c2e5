//! Instance generators: the extremal triangle construction and seeded
//! random instances for campaigns.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{Element, Instance};

/// `n` identical colour classes, each the disjoint union of `n - 1`
/// triangles on elements `0..3n-4`. Every kernel has size `3n - 3` and the
/// instance has no rainbow matching of size `n`: its `n` edges would need
/// `n` distinct triangles, but only `n - 1` exist. Not valid in simple mode
/// (all classes share every pair).
pub fn extremal_triangles(n: usize) -> Result<Instance> {
    if n < 2 {
        return Err(Error::Parameter(format!(
            "extremal triangle construction needs n >= 2, got {n}"
        )));
    }
    let triangles: Vec<Vec<Element>> = (0..n - 1)
        .map(|t| {
            let base = 3 * t as Element;
            vec![base, base + 1, base + 2]
        })
        .collect();
    let classes = vec![triangles; n];
    Ok(Instance::from_cliques(classes, false))
}

/// Parameters for seeded random generation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RandomSpec {
    pub n: usize,
    /// Lower bound on each colour's kernel; the generator hits it exactly.
    pub kernel: usize,
    /// Weighted clique sizes (size >= 2). Draws that overshoot the remaining
    /// kernel budget are clamped and a remainder of one is absorbed into the
    /// final clique, so the kernel is always reachable.
    pub clique_size_weights: Vec<(usize, u32)>,
    /// Probability that a clique member reuses an element already placed
    /// somewhere in the instance (never within the same class).
    pub overlap: f64,
    pub simple_mode: bool,
    pub seed: u64,
}

impl RandomSpec {
    pub fn pairs_and_triangles(n: usize, kernel: usize, overlap: f64, seed: u64) -> Self {
        RandomSpec {
            n,
            kernel,
            clique_size_weights: vec![(2, 2), (3, 1)],
            overlap,
            simple_mode: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Parameter("need at least one colour".into()));
        }
        if self.kernel < 2 {
            return Err(Error::Parameter("kernel must be at least 2".into()));
        }
        if self.clique_size_weights.is_empty()
            || self.clique_size_weights.iter().all(|&(_, w)| w == 0)
        {
            return Err(Error::Parameter("clique size weights are empty".into()));
        }
        if self.clique_size_weights.iter().any(|&(s, _)| s < 2) {
            return Err(Error::Parameter("clique sizes must be at least 2".into()));
        }
        if !(0.0..=1.0).contains(&self.overlap) {
            return Err(Error::Parameter("overlap must lie in [0, 1]".into()));
        }
        Ok(())
    }
}

fn draw_size(rng: &mut ChaCha8Rng, weights: &[(usize, u32)]) -> usize {
    let total: u32 = weights.iter().map(|&(_, w)| w).sum();
    let mut pick = rng.random_range(0..total);
    for &(size, w) in weights {
        if pick < w {
            return size;
        }
        pick -= w;
    }
    weights.last().unwrap().0
}

/// Draws one instance. Per colour, cliques are drawn until the kernel budget
/// is spent; elements reuse earlier elements with probability `overlap` and
/// take a fresh id otherwise. In simple mode a clique that duplicates a pair
/// owned by another colour is redrawn a bounded number of times before the
/// whole generation fails. Deterministic per seed; output is canonical.
pub fn random_instance(spec: &RandomSpec) -> Result<Instance> {
    use std::collections::{HashMap, HashSet};

    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut all_used: Vec<Element> = Vec::new();
    let mut next_fresh: Element = 0;
    let mut owned_pairs: HashMap<(Element, Element), usize> = HashMap::new();
    let mut classes: Vec<Vec<Vec<Element>>> = Vec::with_capacity(spec.n);

    const MAX_CLIQUE_RETRIES: usize = 64;
    const MAX_REUSE_PROBES: usize = 32;

    for colour in 0..spec.n {
        let mut class_used: HashSet<Element> = HashSet::new();
        let mut cliques: Vec<Vec<Element>> = Vec::new();
        let mut budget = spec.kernel;
        while budget >= 2 {
            let mut size = draw_size(&mut rng, &spec.clique_size_weights).min(budget);
            if budget - size == 1 {
                size = budget;
            }
            let mut attempt = 0;
            loop {
                attempt += 1;
                let fresh_mark = next_fresh;
                let mut clique: Vec<Element> = Vec::with_capacity(size);
                for _ in 0..size {
                    let want_reuse = !all_used.is_empty() && rng.random::<f64>() < spec.overlap;
                    let mut picked = None;
                    if want_reuse {
                        // Rejection-sample the eligible pool; fall back to an
                        // exact filtered draw when collisions dominate.
                        for _ in 0..MAX_REUSE_PROBES {
                            let x = all_used[rng.random_range(0..all_used.len())];
                            if !class_used.contains(&x) && !clique.contains(&x) {
                                picked = Some(x);
                                break;
                            }
                        }
                        if picked.is_none() {
                            let pool: Vec<Element> = all_used
                                .iter()
                                .copied()
                                .filter(|x| !class_used.contains(x) && !clique.contains(x))
                                .collect();
                            if !pool.is_empty() {
                                picked = Some(pool[rng.random_range(0..pool.len())]);
                            }
                        }
                    }
                    match picked {
                        Some(x) => clique.push(x),
                        None => {
                            clique.push(next_fresh);
                            next_fresh += 1;
                        }
                    }
                }
                let clash = spec.simple_mode
                    && clique_pairs(&clique)
                        .any(|p| owned_pairs.get(&p).is_some_and(|&c| c != colour));
                if !clash {
                    if spec.simple_mode {
                        for p in clique_pairs(&clique) {
                            owned_pairs.insert(p, colour);
                        }
                    }
                    for &x in &clique {
                        if x >= fresh_mark {
                            all_used.push(x);
                        }
                        class_used.insert(x);
                    }
                    clique.sort_unstable();
                    cliques.push(clique);
                    break;
                }
                // Give back the fresh ids consumed by the failed draw.
                next_fresh = fresh_mark;
                if attempt >= MAX_CLIQUE_RETRIES {
                    return Err(Error::Generation(format!(
                        "simple mode: could not place a clique of size {size} for colour \
                         {colour} without duplicating a pair"
                    )));
                }
            }
            budget -= size;
        }
        cliques.sort();
        classes.push(cliques);
    }
    Ok(Instance::from_cliques(classes, spec.simple_mode))
}

fn clique_pairs(clique: &[Element]) -> impl Iterator<Item = (Element, Element)> + '_ {
    (0..clique.len()).flat_map(move |i| {
        ((i + 1)..clique.len()).map(move |j| {
            let (a, b) = (clique[i], clique[j]);
            if a < b {
                (a, b)
            } else {
                (b, a)
            }
        })
    })
}

/// Seeded greedy colour order used by tests that need an arbitrary but
/// reproducible permutation.
pub fn shuffled_colours(n: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::json::serialize_instance;
    use crate::solve::exact::solve_exact;

    #[test]
    fn extremal_triangles_shape() {
        let inst = extremal_triangles(2).unwrap();
        assert_eq!(inst.n(), 2);
        assert_eq!(inst.classes()[0].cliques(), &[vec![0, 1, 2]]);
        assert_eq!(inst.classes()[1].cliques(), &[vec![0, 1, 2]]);
        assert_eq!(inst.kernel(0).unwrap().len(), 3);

        let inst = extremal_triangles(4).unwrap();
        for c in 0..4 {
            assert_eq!(inst.kernel(c).unwrap().len(), 9);
        }
        assert!(inst.validate().is_valid());
        assert!(extremal_triangles(1).is_err());
    }

    #[test]
    fn extremal_triangles_not_simple_valid() {
        let inst = extremal_triangles(3).unwrap();
        let as_simple = Instance::from_cliques(
            inst.classes().iter().map(|c| c.cliques().to_vec()).collect(),
            true,
        );
        assert!(!as_simple.validate().is_valid());
    }

    #[test]
    fn random_instances_are_valid_and_hit_kernel() {
        for seed in 0..20 {
            let spec = RandomSpec::pairs_and_triangles(6, 13, 0.3, seed);
            let inst = random_instance(&spec).unwrap();
            assert!(inst.validate().is_valid(), "seed {seed}");
            for c in 0..inst.n() {
                assert!(inst.kernel(c).unwrap().len() >= spec.kernel, "seed {seed}");
            }
        }
    }

    #[test]
    fn zero_overlap_gives_disjoint_classes_solved_greedily() {
        let spec = RandomSpec::pairs_and_triangles(5, 8, 0.0, 7);
        let inst = random_instance(&spec).unwrap();
        for a in 0..inst.n() {
            for b in (a + 1)..inst.n() {
                assert!(inst
                    .kernel(a)
                    .unwrap()
                    .is_disjoint(&inst.kernel(b).unwrap()));
            }
        }
        let outcome = solve_exact(&inst, inst.n(), 1_000_000).unwrap();
        assert!(outcome.matching.is_some());
    }

    #[test]
    fn same_seed_same_bytes() {
        let spec = RandomSpec::pairs_and_triangles(4, 9, 0.5, 42);
        let a = serialize_instance(&random_instance(&spec).unwrap());
        let b = serialize_instance(&random_instance(&spec).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn simple_mode_has_no_shared_pairs() {
        for seed in 0..10 {
            let spec = RandomSpec {
                n: 4,
                kernel: 8,
                clique_size_weights: vec![(2, 1)],
                overlap: 0.4,
                simple_mode: true,
                seed,
            };
            let inst = random_instance(&spec).unwrap();
            assert!(inst.validate().is_valid(), "seed {seed}");
        }
    }
}
