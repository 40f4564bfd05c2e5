//! Seeded randomized greedy initialization.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use std::collections::HashSet;

use crate::instance::Instance;
use crate::matching::{Edge, Matching};

/// Shuffles the colours by seed, then gives each colour the first edge (in
/// canonical clique order) that is disjoint from everything picked so far.
/// The output is always a rainbow matching, possibly smaller than `n`.
pub fn greedy_matching(instance: &Instance, seed: u64) -> Matching {
    let mut order: Vec<usize> = (0..instance.n()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut used: HashSet<u32> = HashSet::new();
    let mut edges = Vec::new();
    for colour in order {
        'cliques: for clique in instance.classes()[colour].cliques() {
            let mut first_free = None;
            for &x in clique {
                if used.contains(&x) {
                    continue;
                }
                match first_free {
                    None => first_free = Some(x),
                    Some(u) => {
                        used.insert(u);
                        used.insert(x);
                        edges.push(Edge::new(colour, u, x));
                        break 'cliques;
                    }
                }
            }
        }
    }
    Matching::new(edges).canonicalized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_instance, RandomSpec};
    use crate::instance::Instance;
    use crate::matching::is_rainbow_matching;

    #[test]
    fn disjoint_single_edge_classes_get_a_perfect_matching() {
        let instance = Instance::from_cliques(
            vec![vec![vec![0, 1]], vec![vec![2, 3]], vec![vec![4, 5]]],
            false,
        );
        for seed in 0..8 {
            let m = greedy_matching(&instance, seed);
            assert_eq!(m.len(), 3);
            assert!(is_rainbow_matching(&instance, &m, 3).unwrap());
        }
    }

    #[test]
    fn identical_single_triangle_classes_reach_size_one() {
        let instance = Instance::from_cliques(
            vec![vec![vec![1, 2, 3]]; 4],
            false,
        );
        for seed in 0..8 {
            assert_eq!(greedy_matching(&instance, seed).len(), 1);
        }
    }

    #[test]
    fn output_is_always_rainbow_at_its_own_size() {
        for seed in 0..1000u64 {
            let spec = RandomSpec::pairs_and_triangles(5, 9, 0.45, seed / 4);
            let instance = random_instance(&spec).unwrap();
            let m = greedy_matching(&instance, seed);
            assert!(is_rainbow_matching(&instance, &m, m.len()).unwrap(), "seed {seed}");
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let spec = RandomSpec::pairs_and_triangles(6, 10, 0.5, 3);
        let instance = random_instance(&spec).unwrap();
        assert_eq!(greedy_matching(&instance, 11), greedy_matching(&instance, 11));
    }
}
