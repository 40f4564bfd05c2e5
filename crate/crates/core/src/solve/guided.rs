//! Augmentation that follows the colour-reduction argument step by step.
//!
//! Given a rainbow matching one edge short of full, the search tries, in
//! order: a direct edge of the missing colour on free vertices; a unit
//! (length-1) switching closed by an edge on free vertices; and finally a
//! reduction step. The reduction fixes a unit switching per reachable
//! colour, scores matching edges by how many colours send them two disjoint
//! edges from the free region ("good" colours), picks the best-scoring pivot
//! edge, and branches on whether one free vertex concentrates a third of the
//! collected edges. It then sets aside a block of carried colours, deletes
//! the switching/carried/anchor vertices, recurses on the smaller instance
//! with a reduced slack, and reassembles the final matching from the
//! recursive answer, the carried edges and the switching.
//!
//! Below the self-sustaining scale the counting steps may find no witness;
//! the search then falls back to plain switching augmentation and records
//! the fallback in the trace. Silent divergence from the step structure is
//! not allowed.

use std::collections::BTreeMap;
use std::time::Instant;

use crate::delta::Delta;
use crate::error::{Error, Result};
use crate::instance::{ColourId, Element, Instance};
use crate::matching::{is_rainbow_matching, Edge, Matching};
use crate::solve::switch::{switching_augment, AugmentFailure};
use crate::solve::{SolveStats, SolverParams};
use crate::switching::{apply_switching, validate_switching, Switching};
use crate::vertex_set::VertexSet;

/// How a level of the recursion was resolved.
#[derive(Debug, Clone)]
pub enum LevelBranch {
    /// An edge of the missing colour fit directly on free vertices.
    FreeEdge { edge: Edge },
    /// A unit switching freed a colour that closed on free vertices.
    UnitSwitching { switching: Switching, closing: Edge },
    /// Full reduction to a smaller instance.
    Reduction(Box<ReductionStep>),
    /// A counting step found no witness; bounded switching search took over.
    Fallback { reason: String, augmented: bool },
}

/// Which concentration case the reduction took.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConcentrationCase {
    /// Some free vertex carries at least a third of the collected edges.
    Concentrated { vertex: Element },
    Spread,
}

/// Everything the reduction step committed to, in the colour ids of the
/// instance at this level (remapped to the caller's ids when unwinding).
#[derive(Debug, Clone)]
pub struct ReductionStep {
    /// The length-2 switching `(e0, m1, e1, pivot)` driving the reduction.
    pub switching: Switching,
    /// Colours reachable from the missing colour by a unit switching.
    pub switchable_colours: Vec<ColourId>,
    /// Colours for which the pivot edge is good.
    pub good_colours: Vec<ColourId>,
    /// The pivot matching edge and its goodness score.
    pub pivot: Edge,
    pub goodness: usize,
    pub case: ConcentrationCase,
    /// Colours whose matching edges are set aside and rejoined at the end.
    pub carried_colours: Vec<ColourId>,
    /// Per carried colour, the recorded edge from a free vertex into the
    /// pivot; its free endpoints justify the vertex deletions.
    pub anchor_edges: Vec<(ColourId, Edge)>,
    /// The matching edges of the carried colours.
    pub carried_edges: Vec<Edge>,
    /// Free endpoints of the anchor edges.
    pub anchor_free_vertices: VertexSet,
    /// Colours surviving into the reduced instance.
    pub kept_colours: Vec<ColourId>,
    pub reduced_n: usize,
    pub reduced_delta: Delta,
}

#[derive(Debug, Clone)]
pub struct TraceLevel {
    pub colours_n: usize,
    pub missing_colour: ColourId,
    pub delta: Delta,
    pub branch: LevelBranch,
}

impl TraceLevel {
    fn map_colours(&mut self, map: &[ColourId]) {
        let f = |c: ColourId| map[c];
        self.missing_colour = f(self.missing_colour);
        match &mut self.branch {
            LevelBranch::FreeEdge { edge } => *edge = edge.with_colour(f(edge.colour)),
            LevelBranch::UnitSwitching { switching, closing } => {
                *switching = switching.map_colours(f);
                *closing = closing.with_colour(f(closing.colour));
            }
            LevelBranch::Reduction(step) => {
                step.switching = step.switching.map_colours(f);
                for c in step
                    .switchable_colours
                    .iter_mut()
                    .chain(step.good_colours.iter_mut())
                    .chain(step.carried_colours.iter_mut())
                    .chain(step.kept_colours.iter_mut())
                {
                    *c = f(*c);
                }
                step.pivot = step.pivot.with_colour(f(step.pivot.colour));
                for (c, e) in step.anchor_edges.iter_mut() {
                    *c = f(*c);
                    *e = e.with_colour(f(e.colour));
                }
                for e in step.carried_edges.iter_mut() {
                    *e = e.with_colour(f(e.colour));
                }
            }
            LevelBranch::Fallback { .. } => {}
        }
    }
}

/// One trace level per recursion level, outermost first.
#[derive(Debug, Clone, Default)]
pub struct ProofTrace {
    pub levels: Vec<TraceLevel>,
}

impl ProofTrace {
    pub fn has_fallback(&self) -> bool {
        self.levels
            .iter()
            .any(|l| matches!(l.branch, LevelBranch::Fallback { .. }))
    }

    pub fn max_depth(&self) -> usize {
        self.levels.len()
    }

    /// Checks the committed arithmetic of every reduction level: the carried
    /// block has size `ceil(delta*n/6)`, the reduced colour count equals
    /// `floor(n(1 - delta/6)) - 2` and with the carried block and the two
    /// switching colours adds back to `n`, the reduced slack satisfies
    /// `delta' * n' >= delta * n - 12` exactly, and the square-root threshold
    /// is inherited whenever it held with `delta <= 1`.
    pub fn verify_reduction_arithmetic(&self) -> std::result::Result<(), String> {
        for (i, level) in self.levels.iter().enumerate() {
            let step = match &level.branch {
                LevelBranch::Reduction(step) => step,
                _ => continue,
            };
            let n = level.colours_n;
            let delta = level.delta;
            let carried = step.carried_colours.len();
            if carried != delta.ceil_sixth_times(n) {
                return Err(format!(
                    "level {i}: carried block has {carried} colours, expected {}",
                    delta.ceil_sixth_times(n)
                ));
            }
            if step.carried_edges.len() != carried || step.anchor_edges.len() != carried {
                return Err(format!("level {i}: carried/anchor sizes disagree"));
            }
            let expect_reduced = delta.floor_complement_sixth(n) - 2;
            if step.reduced_n as i64 != expect_reduced {
                return Err(format!(
                    "level {i}: reduced to {} colours, expected {expect_reduced}",
                    step.reduced_n
                ));
            }
            if step.reduced_n + carried + 2 != n {
                return Err(format!(
                    "level {i}: {} + {} + 2 != {n}",
                    step.reduced_n, carried
                ));
            }
            // delta' * n' >= delta * n - 12, cross-multiplied exactly.
            let (p, q) = (delta.numer() as i128, delta.denom() as i128);
            let (rp, rq) = (
                step.reduced_delta.numer() as i128,
                step.reduced_delta.denom() as i128,
            );
            if rp * step.reduced_n as i128 * q < (p * n as i128 - 12 * q) * rq {
                return Err(format!("level {i}: reduced slack fell below delta*n - 12"));
            }
            if delta.at_most_one()
                && delta.sqrt_threshold_holds(n)
                && !step.reduced_delta.sqrt_threshold_holds(step.reduced_n)
            {
                return Err(format!(
                    "level {i}: square-root threshold not inherited"
                ));
            }
        }
        Ok(())
    }
}

/// Runs the guided recursion. Requires a rainbow matching of size `n - 1`
/// missing exactly `missing`. Returns the grown matching or the failure,
/// together with the trace and search statistics.
pub fn proof_guided_augment(
    instance: &Instance,
    matching: &Matching,
    missing: ColourId,
    params: &SolverParams,
    deadline: Option<Instant>,
) -> Result<(std::result::Result<Matching, AugmentFailure>, ProofTrace, SolveStats)> {
    if missing >= instance.n() {
        return Err(Error::InvalidColour {
            colour: missing,
            n: instance.n(),
        });
    }
    if matching.edge_of_colour(missing).is_some() {
        return Err(Error::MissingColourPresent { colour: missing });
    }
    if matching.len() + 1 != instance.n()
        || !is_rainbow_matching(instance, matching, instance.n() - 1)?
    {
        return Err(Error::Parameter(format!(
            "guided augmentation needs a rainbow matching of size n-1 = {}",
            instance.n() - 1
        )));
    }
    let started = Instant::now();
    let mut trace = ProofTrace::default();
    let mut stats = SolveStats::default();
    let result = level(
        instance,
        matching,
        missing,
        params.delta,
        params,
        deadline,
        0,
        &mut trace,
        &mut stats,
    )?;
    stats.wall_millis = started.elapsed().as_millis();
    if let Ok(m) = &result {
        stats.best_size = stats.best_size.max(m.len());
    }
    Ok((result, trace, stats))
}

#[allow(clippy::too_many_arguments)]
fn level(
    instance: &Instance,
    matching: &Matching,
    missing: ColourId,
    delta: Delta,
    params: &SolverParams,
    deadline: Option<Instant>,
    depth: usize,
    trace: &mut ProofTrace,
    stats: &mut SolveStats,
) -> Result<std::result::Result<Matching, AugmentFailure>> {
    let n = instance.n();
    stats.nodes += 1;
    stats.depth = stats.depth.max(depth + 1);
    let free = instance.universe().difference(&matching.vertices());

    let fallback = |reason: String,
                    trace: &mut ProofTrace,
                    stats: &mut SolveStats|
     -> Result<std::result::Result<Matching, AugmentFailure>> {
        let mut sub = params.clone();
        sub.node_budget = params
            .node_budget
            .saturating_sub(stats.switchings)
            .max(1);
        let (result, aug_stats) =
            switching_augment(instance, matching, missing, &sub, deadline)?;
        stats.absorb(&aug_stats);
        trace.levels.push(TraceLevel {
            colours_n: n,
            missing_colour: missing,
            delta,
            branch: LevelBranch::Fallback {
                reason,
                augmented: result.is_ok(),
            },
        });
        Ok(result)
    };

    if let Some(deadline_at) = deadline {
        if Instant::now() >= deadline_at {
            trace.levels.push(TraceLevel {
                colours_n: n,
                missing_colour: missing,
                delta,
                branch: LevelBranch::Fallback {
                    reason: "deadline reached".into(),
                    augmented: false,
                },
            });
            return Ok(Err(AugmentFailure::Timeout));
        }
    }

    // Step 1: an edge of the missing colour entirely on free vertices closes
    // the matching at once.
    if let Some(edge) = first_edge_within(instance, missing, &free) {
        let grown = apply_switching(instance, matching, &Switching::empty(missing), edge)?;
        trace.levels.push(TraceLevel {
            colours_n: n,
            missing_colour: missing,
            delta,
            branch: LevelBranch::FreeEdge { edge },
        });
        return Ok(Ok(grown));
    }

    // Step 2: fix one unit switching per reachable colour; any colour whose
    // class still has an edge on the remaining free vertices closes there.
    let units = unit_switchings(instance, matching, missing, &free);
    for (&colour, unit) in &units {
        let allowed = free.difference(&unit.vertices());
        if let Some(closing) = first_edge_within(instance, colour, &allowed) {
            let grown = apply_switching(instance, matching, unit, closing)?;
            trace.levels.push(TraceLevel {
                colours_n: n,
                missing_colour: missing,
                delta,
                branch: LevelBranch::UnitSwitching {
                    switching: unit.clone(),
                    closing,
                },
            });
            return Ok(Ok(grown));
        }
    }
    if units.is_empty() {
        return fallback("no unit switchings from the missing colour".into(), trace, stats);
    }

    // Step 3: score matching edges by the number of colours that send them
    // two disjoint edges from the free region, and pick the pivot.
    let mut pivot: Option<(usize, Edge)> = None;
    for m in matching.edges() {
        let mut count = 0;
        for (&c, unit) in &units {
            if c == m.colour || unit.removed_edges()[0] == *m {
                continue;
            }
            if disjoint_pair_into(instance, c, m, unit, &free).is_some() {
                count += 1;
            }
        }
        let better = match pivot {
            None => count > 0,
            Some((best, edge)) => count > best || (count == best && m.colour < edge.colour),
        };
        if better {
            pivot = Some((count, *m));
        }
    }
    let (goodness, pivot) = match pivot {
        Some(p) => p,
        None => {
            return fallback("no matching edge is good for any colour".into(), trace, stats)
        }
    };

    // Edges certifying goodness, per colour: one into each pivot endpoint.
    let mut head_ends: Vec<(ColourId, Element)> = Vec::new(); // at pivot.u
    let mut tail_ends: BTreeMap<ColourId, Element> = BTreeMap::new(); // at pivot.v
    for (&c, unit) in &units {
        if c == pivot.colour || unit.removed_edges()[0] == pivot {
            continue;
        }
        if let Some((a, b)) = disjoint_pair_into(instance, c, &pivot, unit, &free) {
            head_ends.push((c, a));
            tail_ends.insert(c, b);
        }
    }
    let good_colours: Vec<ColourId> = head_ends.iter().map(|&(c, _)| c).collect();
    debug_assert_eq!(good_colours.len(), goodness);

    // Concentration split: does one free vertex meet a third of the head
    // edges? Counts compared exactly, no rounding.
    let mut counts: BTreeMap<Element, usize> = BTreeMap::new();
    for &(_, r) in &head_ends {
        *counts.entry(r).or_default() += 1;
    }
    let (&max_vertex, &max_count) = counts
        .iter()
        .max_by_key(|&(v, &c)| (c, std::cmp::Reverse(*v)))
        .expect("head edges exist");
    let concentrated = 3 * max_count >= head_ends.len();

    let block = delta.ceil_sixth_times(n);
    let selection = if concentrated {
        // Every head edge through the vertex shares the endpoints
        // {vertex, pivot.u}; take one as the link and carry the rest.
        let through: Vec<(ColourId, Element)> = head_ends
            .iter()
            .copied()
            .filter(|&(_, r)| r == max_vertex)
            .collect();
        if through.len() < block + 1 {
            return fallback(
                format!(
                    "concentrated vertex carries {} edges, need {}",
                    through.len(),
                    block + 1
                ),
                trace,
                stats,
            );
        }
        let link_colour = through[0].0;
        let anchors: Vec<(ColourId, Element)> = through[1..=block].to_vec();
        Some((
            link_colour,
            anchors,
            ConcentrationCase::Concentrated { vertex: max_vertex },
        ))
    } else {
        // Pick the first tail edge whose unit switching and free endpoint
        // leave enough head edges untouched.
        let mut chosen = None;
        for (&c1, &ry) in &tail_ends {
            let banned = units[&c1].vertices();
            let anchors: Vec<(ColourId, Element)> = head_ends
                .iter()
                .copied()
                .filter(|&(c, r)| c != c1 && r != ry && !banned.contains(r))
                .take(block)
                .collect();
            if anchors.len() == block {
                chosen = Some((c1, anchors, ConcentrationCase::Spread));
                break;
            }
        }
        chosen
    };
    let (link_colour, anchors, case) = match selection {
        Some(s) => s,
        None => {
            return fallback(
                format!("no {block} spread edges clear of any tail edge"),
                trace,
                stats,
            )
        }
    };

    // Assemble the switching (e0, m1, e1, pivot).
    let unit = &units[&link_colour];
    let entry_edge = unit.added_edges()[0];
    let first_swap = unit.removed_edges()[0];
    let link_edge = Edge::new(link_colour, tail_ends[&link_colour], pivot.v);
    let switching = Switching::new(
        missing,
        vec![entry_edge, link_edge],
        vec![first_swap, pivot],
    )?;
    debug_assert!(validate_switching(instance, matching, &switching, missing));

    let carried_colours: Vec<ColourId> = anchors.iter().map(|&(c, _)| c).collect();
    let anchor_edges: Vec<(ColourId, Edge)> = anchors
        .iter()
        .map(|&(c, r)| (c, Edge::new(c, r, pivot.u)))
        .collect();
    debug_assert!(anchor_edges.iter().all(|&(c, e)| {
        instance.has_edge(c, e.u, e.v) && !switching.touches(e.other(pivot.u))
    }));
    let carried_edges: Vec<Edge> = matching
        .edges()
        .iter()
        .copied()
        .filter(|m| carried_colours.contains(&m.colour))
        .collect();
    let anchor_free_vertices: VertexSet = anchors.iter().map(|&(_, r)| r).collect();

    let kept_colours: Vec<ColourId> = (0..n)
        .filter(|&c| c != missing && c != link_colour && !carried_colours.contains(&c))
        .collect();
    let reduced_n = kept_colours.len();
    assert_eq!(reduced_n + carried_colours.len() + 2, n);

    let reduced_delta = match delta.reduced(n, reduced_n) {
        Some(d) => d,
        None => {
            return fallback(
                format!("no positive reduced slack at n={n}, n'={reduced_n}"),
                trace,
                stats,
            )
        }
    };

    let mut dropped = switching.vertices().union(&anchor_free_vertices);
    for e in &carried_edges {
        dropped.insert(e.u);
        dropped.insert(e.v);
    }
    let (reduced_instance, colour_map) = instance.without_vertices(&kept_colours, &dropped)?;
    let new_id = |old: ColourId| -> ColourId {
        colour_map.binary_search(&old).expect("kept colour")
    };
    let removed = switching.removed_edges();
    let reduced_matching: Matching = matching
        .edges()
        .iter()
        .filter(|m| !removed.contains(m) && !carried_colours.contains(&m.colour))
        .map(|m| m.with_colour(new_id(m.colour)))
        .collect();
    let reduced_missing = new_id(pivot.colour);
    debug_assert!(is_rainbow_matching(
        &reduced_instance,
        &reduced_matching,
        reduced_n - 1
    )?);

    trace.levels.push(TraceLevel {
        colours_n: n,
        missing_colour: missing,
        delta,
        branch: LevelBranch::Reduction(Box::new(ReductionStep {
            switching: switching.clone(),
            switchable_colours: units.keys().copied().collect(),
            good_colours,
            pivot,
            goodness,
            case,
            carried_colours,
            anchor_edges,
            carried_edges: carried_edges.clone(),
            anchor_free_vertices,
            kept_colours: colour_map.clone(),
            reduced_n,
            reduced_delta,
        })),
    });
    let mark = trace.levels.len();

    let child = level(
        &reduced_instance,
        &reduced_matching,
        reduced_missing,
        reduced_delta,
        params,
        deadline,
        depth + 1,
        trace,
        stats,
    )?;
    for lvl in trace.levels[mark..].iter_mut() {
        lvl.map_colours(&colour_map);
    }

    match child {
        Ok(inner) => {
            let mut edges: Vec<Edge> = inner
                .edges()
                .iter()
                .map(|e| e.with_colour(colour_map[e.colour]))
                .collect();
            edges.extend_from_slice(&carried_edges);
            edges.extend_from_slice(switching.added_edges());
            let combined = Matching::new(edges).canonicalized();
            assert_eq!(combined.len(), n, "reassembled matching must have n edges");
            assert!(
                is_rainbow_matching(instance, &combined, n)?,
                "reassembled matching must be rainbow"
            );
            Ok(Ok(combined))
        }
        Err(_) => fallback("recursion on the reduced instance failed".into(), trace, stats),
    }
}

/// First edge of `colour` with both endpoints in `allowed`, scanning cliques
/// in canonical order.
fn first_edge_within(instance: &Instance, colour: ColourId, allowed: &VertexSet) -> Option<Edge> {
    for clique in instance.classes()[colour].cliques() {
        let mut first: Option<Element> = None;
        for &x in clique {
            if !allowed.contains(x) {
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

/// One unit switching per colour of the matching: the lexicographically
/// first edge of the missing colour joining that colour's matching edge to a
/// free vertex.
fn unit_switchings(
    instance: &Instance,
    matching: &Matching,
    missing: ColourId,
    free: &VertexSet,
) -> BTreeMap<ColourId, Switching> {
    let mut units = BTreeMap::new();
    for m in matching.edges() {
        let mut best: Option<Edge> = None;
        for anchor in [m.u, m.v] {
            if let Some(clique) = instance.clique_of(missing, anchor) {
                for &r in clique {
                    if r != anchor && free.contains(r) {
                        let e = Edge::new(missing, anchor, r);
                        if best.map_or(true, |b| (e.u, e.v) < (b.u, b.v)) {
                            best = Some(e);
                        }
                    }
                }
            }
        }
        if let Some(entry) = best {
            let unit = Switching::new(missing, vec![entry], vec![*m]).expect("paired");
            units.insert(m.colour, unit);
        }
    }
    units
}

/// Two disjoint edges of `colour` from the free region (clear of the unit
/// switching) into the two endpoints of `m`: returns their free endpoints
/// `(at m.u, at m.v)`, smallest available first.
fn disjoint_pair_into(
    instance: &Instance,
    colour: ColourId,
    m: &Edge,
    unit: &Switching,
    free: &VertexSet,
) -> Option<(Element, Element)> {
    let head = side_candidates(instance, colour, m.u, unit, free);
    let tail = side_candidates(instance, colour, m.v, unit, free);
    let &a0 = head.first()?;
    if let Some(&b) = tail.iter().find(|&&b| b != a0) {
        return Some((a0, b));
    }
    let &b0 = tail.first()?; // tail == {a0}
    let &a = head.iter().find(|&&a| a != b0)?;
    Some((a, b0))
}

fn side_candidates(
    instance: &Instance,
    colour: ColourId,
    anchor: Element,
    unit: &Switching,
    free: &VertexSet,
) -> Vec<Element> {
    match instance.clique_of(colour, anchor) {
        Some(clique) => clique
            .iter()
            .copied()
            .filter(|&r| r != anchor && free.contains(r) && !unit.touches(r))
            .collect(),
        None => Vec::new(),
    }
}
