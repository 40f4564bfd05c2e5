//! Counting disjoint edges of one colour between two vertex sets.

use crate::error::Result;
use crate::instance::{ColourId, Instance};
use crate::vertex_set::VertexSet;

/// Maximum number of pairwise vertex-disjoint edges of `colour` with one
/// endpoint in `from` and the other in `to` (the sets may overlap; neither
/// needs to contain the other).
///
/// Cliques of one colour are vertex-disjoint, so the maximum is the sum of
/// per-clique maxima. Within a clique, split its vertices into those usable
/// only as a `from` endpoint (`a`), only as a `to` endpoint (`b`), and those
/// usable as either (`c`). Every admissible edge consumes one endpoint of
/// each role, vertices in `c` may pair among themselves, so the maximum
/// matching is `min(a + c, b + c, (a + b + c) / 2)`.
pub fn max_disjoint_colour_edges(
    instance: &Instance,
    colour: ColourId,
    from: &VertexSet,
    to: &VertexSet,
) -> Result<usize> {
    let class = instance.class(colour)?;
    let mut total = 0;
    for clique in class.cliques() {
        let mut a = 0usize;
        let mut b = 0usize;
        let mut c = 0usize;
        for &x in clique {
            match (from.contains(x), to.contains(x)) {
                (true, true) => c += 1,
                (true, false) => a += 1,
                (false, true) => b += 1,
                (false, false) => {}
            }
        }
        total += (a + c).min(b + c).min((a + b + c) / 2);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{Element, Instance};

    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn single_clique(members: &[Element]) -> Instance {
        Instance::from_cliques(vec![vec![members.to_vec()]], false)
    }

    /// Independent oracle: maximum matching over the clique's admissible
    /// pairs by exhaustive branching.
    fn brute_force(clique: &[Element], from: &VertexSet, to: &VertexSet) -> usize {
        fn admissible(u: Element, v: Element, from: &VertexSet, to: &VertexSet) -> bool {
            (from.contains(u) && to.contains(v)) || (from.contains(v) && to.contains(u))
        }
        fn rec(
            pairs: &[(Element, Element)],
            idx: usize,
            used: &mut Vec<Element>,
        ) -> usize {
            if idx == pairs.len() {
                return 0;
            }
            let skip = rec(pairs, idx + 1, used);
            let (u, v) = pairs[idx];
            if used.contains(&u) || used.contains(&v) {
                return skip;
            }
            used.push(u);
            used.push(v);
            let take = 1 + rec(pairs, idx + 1, used);
            used.pop();
            used.pop();
            skip.max(take)
        }
        let mut pairs = Vec::new();
        for i in 0..clique.len() {
            for j in (i + 1)..clique.len() {
                if admissible(clique[i], clique[j], from, to) {
                    pairs.push((clique[i], clique[j]));
                }
            }
        }
        rec(&pairs, 0, &mut Vec::new())
    }

    #[test]
    fn single_endpoint_available() {
        let inst = single_clique(&[1, 2, 3, 4]);
        let from = VertexSet::from_elements(vec![1]);
        let to = VertexSet::from_elements(vec![1, 2, 3, 4]);
        assert_eq!(max_disjoint_colour_edges(&inst, 0, &from, &to).unwrap(), 1);
    }

    #[test]
    fn three_from_endpoints_in_k4() {
        let inst = single_clique(&[1, 2, 3, 4]);
        let from = VertexSet::from_elements(vec![1, 2, 3]);
        let to = VertexSet::from_elements(vec![1, 2, 3, 4]);
        // Frozen from the brute-force oracle below.
        let expect = brute_force(&[1, 2, 3, 4], &from, &to);
        assert_eq!(expect, 2);
        assert_eq!(max_disjoint_colour_edges(&inst, 0, &from, &to).unwrap(), 2);
    }

    #[test]
    fn from_misses_the_clique() {
        let inst = single_clique(&[1, 2]);
        let from = VertexSet::from_elements(vec![3]);
        let to = VertexSet::from_elements(vec![1, 2]);
        assert_eq!(max_disjoint_colour_edges(&inst, 0, &from, &to).unwrap(), 0);
    }

    #[test]
    fn invalid_colour_errors() {
        let inst = single_clique(&[1, 2]);
        let s = VertexSet::from_elements(vec![1, 2]);
        assert!(max_disjoint_colour_edges(&inst, 3, &s, &s).is_err());
    }

    #[test]
    fn sums_across_cliques() {
        let inst = Instance::from_cliques(vec![vec![vec![0, 1], vec![2, 3, 4], vec![5, 6]]], false);
        let from = VertexSet::from_elements(vec![0, 2, 3, 5, 6]);
        let to = VertexSet::from_elements(vec![1, 2, 3, 4, 5, 6]);
        // {0,1}: 1; {2,3,4}: a=0,b=1,c=2 -> min(2,3,1)=1; {5,6}: both shared -> 1
        assert_eq!(max_disjoint_colour_edges(&inst, 0, &from, &to).unwrap(), 3);
    }

    #[test]
    fn closed_form_matches_brute_force_on_random_triples() {
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for _ in 0..500 {
            let size = rng.random_range(2..=8usize);
            let clique: Vec<Element> = (0..size as Element).collect();
            let from: VertexSet = clique
                .iter()
                .copied()
                .filter(|_| rng.random::<f64>() < 0.5)
                .collect();
            let to: VertexSet = clique
                .iter()
                .copied()
                .filter(|_| rng.random::<f64>() < 0.6)
                .collect();
            let inst = single_clique(&clique);
            assert_eq!(
                max_disjoint_colour_edges(&inst, 0, &from, &to).unwrap(),
                brute_force(&clique, &from, &to),
                "clique={clique:?} from={from} to={to}"
            );
        }
    }
}
