//! Augmentation through bounded switching search.

use std::time::Instant;

use crate::error::Result;
use crate::instance::{ColourId, Instance};
use crate::matching::{Edge, Matching};
use crate::solve::{SolveStats, SolverParams};
use crate::switching::{apply_switching, enumerate_switchings, Switching};
use crate::vertex_set::VertexSet;

/// Why an augmentation attempt stopped without growing the matching.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AugmentFailure {
    /// Every switching up to the length bound was tried.
    Exhausted,
    /// The switching budget ran out first.
    BudgetExhausted,
    Timeout,
}

/// Walks all switchings that start at the missing colour, shortest first,
/// and closes each with the first edge of the freed colour that lies
/// entirely in vertices free of both the matching and the switching. On
/// success the returned matching is one edge larger and re-verified.
pub fn switching_augment(
    instance: &Instance,
    matching: &Matching,
    missing: ColourId,
    params: &SolverParams,
    deadline: Option<Instant>,
) -> Result<(std::result::Result<Matching, AugmentFailure>, SolveStats)> {
    let mut stats = SolveStats::default();
    let started = Instant::now();
    let free = instance.universe().difference(&matching.vertices());

    let budget = params.node_budget.max(1);
    let mut stream =
        enumerate_switchings(instance, matching, missing, params.max_switch_len, usize::MAX);
    while let Some(switching) = stream.next() {
        stats.switchings += 1;
        stats.nodes += 1;
        if stats.switchings > budget {
            stats.wall_millis = started.elapsed().as_millis();
            return Ok((Err(AugmentFailure::BudgetExhausted), stats));
        }
        if let Some(deadline) = deadline {
            if stats.switchings % 256 == 0 && Instant::now() >= deadline {
                stats.wall_millis = started.elapsed().as_millis();
                return Ok((Err(AugmentFailure::Timeout), stats));
            }
        }
        if let Some(closing) = first_closing_edge(instance, &free, &switching) {
            let grown = apply_switching(instance, matching, &switching, closing)?;
            stats.best_size = grown.len();
            stats.wall_millis = started.elapsed().as_millis();
            return Ok((Ok(grown), stats));
        }
    }
    stats.wall_millis = started.elapsed().as_millis();
    Ok((Err(AugmentFailure::Exhausted), stats))
}

/// First edge of the switching's end colour with both endpoints free of the
/// matching and of the switching, in canonical clique order.
fn first_closing_edge(
    instance: &Instance,
    free: &VertexSet,
    switching: &Switching,
) -> Option<Edge> {
    let colour = switching.end_colour();
    for clique in instance.classes()[colour].cliques() {
        let mut first: Option<u32> = None;
        for &x in clique {
            if !free.contains(x) || switching.touches(x) {
                continue;
            }
            match first {
                None => first = Some(x),
                Some(u) => return Some(Edge::new(colour, u, x)),
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::extremal_triangles;
    use crate::matching::is_rainbow_matching;
    use crate::solve::exact::solve_exact;
    use crate::solve::greedy::greedy_matching;
    use crate::solve::Method;

    fn params() -> SolverParams {
        SolverParams::new(Method::GreedySwitch)
    }

    #[test]
    fn empty_switching_suffices_when_a_free_edge_exists() {
        let instance = Instance::from_cliques(
            vec![vec![vec![0, 1]], vec![vec![2, 3]]],
            false,
        );
        let matching = Matching::new(vec![Edge::new(1, 2, 3)]);
        let (result, stats) =
            switching_augment(&instance, &matching, 0, &params(), None).unwrap();
        let grown = result.unwrap();
        assert_eq!(grown.len(), 2);
        assert_eq!(stats.switchings, 1, "the empty switching closes directly");
    }

    #[test]
    fn depth_three_chain_augments() {
        // Colour 0 reaches colour 3's clique only through two exchanges; a
        // closing colour-3 edge exists on fresh vertices.
        let instance = Instance::from_cliques(
            vec![
                vec![vec![0, 10]],
                vec![vec![10, 11], vec![1, 12]],
                vec![vec![12, 13], vec![2, 14]],
                vec![vec![14, 15], vec![3, 4]],
            ],
            false,
        );
        let matching = Matching::new(vec![
            Edge::new(1, 10, 11),
            Edge::new(2, 12, 13),
            Edge::new(3, 14, 15),
        ]);
        let (result, _) = switching_augment(&instance, &matching, 0, &params(), None).unwrap();
        let grown = result.unwrap();
        assert!(is_rainbow_matching(&instance, &grown, 4).unwrap());
    }

    #[test]
    fn extremal_instance_never_augments() {
        for n in [4usize, 5] {
            let instance = extremal_triangles(n).unwrap();
            // Absence is confirmed by the oracle first.
            assert!(solve_exact(&instance, n, u64::MAX / 2).unwrap().is_exhaustive_absence());
            // Build any size n-1 matching, find the missing colour.
            let m = {
                let mut best = None;
                for seed in 0.. {
                    let g = greedy_matching(&instance, seed);
                    if g.len() == n - 1 {
                        best = Some(g);
                        break;
                    }
                    assert!(seed < 64, "greedy never reached n-1");
                }
                best.unwrap()
            };
            let missing = (0..n).find(|&c| m.edge_of_colour(c).is_none()).unwrap();
            let mut p = params();
            p.max_switch_len = 5;
            let (result, _) = switching_augment(&instance, &m, missing, &p, None).unwrap();
            assert_eq!(result.unwrap_err(), AugmentFailure::Exhausted);
        }
    }
}
