//! Top-level solve: greedy start, then restriction-and-augment rounds.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::instance::{ColourId, Instance};
use crate::matching::is_rainbow_matching;
use crate::solve::exact::solve_exact_core;
use crate::solve::greedy::greedy_matching;
use crate::solve::guided::proof_guided_augment;
use crate::solve::switch::{switching_augment, AugmentFailure};
use crate::solve::{Method, SolveOutcome, SolveStats, SolverParams};

/// Searches for a rainbow matching of full size `n`.
pub fn solve(instance: &Instance, params: &SolverParams) -> Result<SolveOutcome> {
    solve_target(instance, params, instance.n(), None)
}

/// Searches for a rainbow matching of `size` edges.
///
/// The exact method delegates to the backtracking oracle. The heuristic
/// methods run a seeded greedy start and then repeatedly restrict attention
/// to the colours of the current matching plus one missing colour, rescale
/// the slack accordingly, and augment by the configured strategy; stalled
/// runs restart greedily with a derived seed until the node budget is spent.
pub fn solve_target(
    instance: &Instance,
    params: &SolverParams,
    size: usize,
    deadline: Option<Instant>,
) -> Result<SolveOutcome> {
    params.validate()?;
    let report = instance.validate();
    if !report.is_valid() {
        return Err(Error::InvalidInstance(report.summary()));
    }
    if params.method == Method::Exact {
        return Ok(solve_exact_core(instance, size, params.node_budget, deadline));
    }

    const MAX_RESTARTS: u64 = 256;
    let started = Instant::now();
    let n = instance.n();
    let size = size.min(n);
    let mut stats = SolveStats::default();

    for restart in 0..MAX_RESTARTS {
        if spent(&stats) >= params.node_budget {
            break;
        }
        if let Some(deadline_at) = deadline {
            if Instant::now() >= deadline_at {
                stats.wall_millis = started.elapsed().as_millis();
                return Ok(SolveOutcome::timeout(stats));
            }
        }
        let mut current = greedy_matching(instance, params.seed.wrapping_add(restart));
        stats.nodes += 1;
        stats.best_size = stats.best_size.max(current.len());

        'grow: while current.len() < size {
            let matched: Vec<ColourId> = current.colours();
            let mut advanced = false;
            for missing in (0..n).filter(|c| !matched.contains(c)) {
                // Work inside the colours of the matching plus one more.
                let mut keep = matched.clone();
                keep.push(missing);
                keep.sort_unstable();
                let (sub_instance, map) = instance.restrict_colours(&keep)?;
                let sub_n = keep.len();
                let old_to_new =
                    |c: ColourId| map.binary_search(&c).expect("kept colour");
                let sub_matching = current.map_colours(old_to_new);
                let sub_missing = old_to_new(missing);

                let mut sub_params = params.clone();
                sub_params.delta = params.delta.rescaled(n, sub_n)?;
                sub_params.node_budget =
                    params.node_budget.saturating_sub(spent(&stats)).max(1);

                let attempt = match params.method {
                    Method::GreedySwitch => {
                        let (result, aug_stats) = switching_augment(
                            &sub_instance,
                            &sub_matching,
                            sub_missing,
                            &sub_params,
                            deadline,
                        )?;
                        stats.absorb(&aug_stats);
                        result
                    }
                    Method::ProofGuided => {
                        let (result, trace, aug_stats) = proof_guided_augment(
                            &sub_instance,
                            &sub_matching,
                            sub_missing,
                            &sub_params,
                            deadline,
                        )?;
                        stats.absorb(&aug_stats);
                        if result.is_ok() {
                            trace
                                .verify_reduction_arithmetic()
                                .map_err(Error::SwitchingApplication)?;
                        }
                        result
                    }
                    Method::Exact => unreachable!("handled above"),
                };
                match attempt {
                    Ok(grown) => {
                        current = grown.map_colours(|c| map[c]);
                        stats.best_size = stats.best_size.max(current.len());
                        advanced = true;
                        break;
                    }
                    Err(AugmentFailure::Timeout) => {
                        stats.wall_millis = started.elapsed().as_millis();
                        return Ok(SolveOutcome::timeout(stats));
                    }
                    Err(_) => {}
                }
                if spent(&stats) >= params.node_budget {
                    break 'grow;
                }
            }
            if !advanced {
                break;
            }
        }

        if current.len() >= size {
            let ok = is_rainbow_matching(instance, &current, current.len())?;
            assert!(ok, "pipeline produced a non-rainbow matching");
            stats.wall_millis = started.elapsed().as_millis();
            return Ok(SolveOutcome::found(current.canonicalized(), stats));
        }
    }
    stats.wall_millis = started.elapsed().as_millis();
    Ok(SolveOutcome::exhausted(stats))
}

fn spent(stats: &SolveStats) -> u64 {
    stats.nodes.max(stats.switchings)
}
