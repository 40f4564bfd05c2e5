//! Switchings: alternating edge sequences that exchange matching edges.
//!
//! A switching of length `k` with respect to a rainbow matching `M` is a
//! sequence `(e_0, m_1, e_1, m_2, ..., e_{k-1}, m_k)` where the `m_i` are
//! distinct edges of `M`, each `e_{i-1}` joins a vertex of `m_i` to a vertex
//! outside `V(M)`, the colour of `e_0` avoids every `c(m_i)` while
//! `c(e_i) = c(m_i)` for `i >= 1`, and the `e_i` are pairwise vertex-disjoint.
//! Removing the `m_i` and adding the `e_i` turns `M` into another rainbow
//! matching of the same size with a different colour freed; adding a final
//! closing edge of the freed colour grows the matching by one.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::instance::{ColourId, Element, Instance};
use crate::matching::{is_rainbow_matching, Edge, Matching};
use crate::vertex_set::VertexSet;

/// The switching `(e_0, m_1, ..., e_{k-1}, m_k)`. `out_edges[j]` pairs with
/// `matching_edges[j]`. Length zero is the empty switching of its colour.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Switching {
    start_colour: ColourId,
    out_edges: Vec<Edge>,
    matching_edges: Vec<Edge>,
}

impl Switching {
    pub fn new(
        start_colour: ColourId,
        out_edges: Vec<Edge>,
        matching_edges: Vec<Edge>,
    ) -> Result<Self> {
        if out_edges.len() != matching_edges.len() {
            return Err(Error::Parameter(format!(
                "switching must pair its edges: {} outside vs {} matching",
                out_edges.len(),
                matching_edges.len()
            )));
        }
        Ok(Switching {
            start_colour,
            out_edges,
            matching_edges,
        })
    }

    /// The empty switching of a colour: no edges, length zero.
    pub fn empty(colour: ColourId) -> Self {
        Switching {
            start_colour: colour,
            out_edges: Vec::new(),
            matching_edges: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.out_edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_edges.is_empty()
    }

    pub fn start_colour(&self) -> ColourId {
        self.start_colour
    }

    /// The colour freed once the switching is applied: the colour of the last
    /// matching edge, or the start colour for the empty switching.
    pub fn end_colour(&self) -> ColourId {
        self.matching_edges
            .last()
            .map(|m| m.colour)
            .unwrap_or(self.start_colour)
    }

    /// The edges removed from the matching.
    pub fn removed_edges(&self) -> &[Edge] {
        &self.matching_edges
    }

    /// The replacement edges outside the matching.
    pub fn added_edges(&self) -> &[Edge] {
        &self.out_edges
    }

    /// Every vertex named by the sequence, matching edges included.
    pub fn vertices(&self) -> VertexSet {
        self.out_edges
            .iter()
            .chain(self.matching_edges.iter())
            .flat_map(|e| [e.u, e.v])
            .collect()
    }

    pub fn touches(&self, x: Element) -> bool {
        self.out_edges
            .iter()
            .chain(self.matching_edges.iter())
            .any(|e| e.touches(x))
    }

    /// Re-colours the whole sequence; used when moving between an instance
    /// and a colour-restricted copy of it.
    pub fn map_colours(&self, f: impl Fn(ColourId) -> ColourId) -> Switching {
        Switching {
            start_colour: f(self.start_colour),
            out_edges: self
                .out_edges
                .iter()
                .map(|e| e.with_colour(f(e.colour)))
                .collect(),
            matching_edges: self
                .matching_edges
                .iter()
                .map(|e| e.with_colour(f(e.colour)))
                .collect(),
        }
    }
}

impl fmt::Display for Switching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}->{})[", self.start_colour, self.end_colour())?;
        for i in 0..self.len() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{} {}", self.out_edges[i], self.matching_edges[i])?;
        }
        write!(f, "]")
    }
}

/// A violated switching condition, in check order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SwitchingViolation {
    StartColourMismatch { expected: ColourId, found: ColourId },
    ForeignMatchingEdge(Edge),
    RepeatedMatchingEdge(Edge),
    BadOutEdgeEndpoints { position: usize },
    BadColourPattern { position: usize },
    OutEdgesOverlap { first: usize, second: usize },
    NotAnInstanceEdge(Edge),
}

impl fmt::Display for SwitchingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SwitchingViolation::StartColourMismatch { expected, found } => {
                write!(f, "switching starts at colour {found}, expected {expected}")
            }
            SwitchingViolation::ForeignMatchingEdge(e) => {
                write!(f, "edge {e} is not part of the matching")
            }
            SwitchingViolation::RepeatedMatchingEdge(e) => {
                write!(f, "matching edge {e} is used twice")
            }
            SwitchingViolation::BadOutEdgeEndpoints { position } => write!(
                f,
                "outside edge {position} must join its matching edge to a free vertex"
            ),
            SwitchingViolation::BadColourPattern { position } => write!(
                f,
                "colour pattern broken at position {position}"
            ),
            SwitchingViolation::OutEdgesOverlap { first, second } => write!(
                f,
                "outside edges {first} and {second} share a vertex"
            ),
            SwitchingViolation::NotAnInstanceEdge(e) => {
                write!(f, "edge {e} lies in no clique of its colour")
            }
        }
    }
}

/// Checks every switching condition against the matching and returns the
/// first violation. The empty switching is valid for any colour.
pub fn validate_switching_strict(
    instance: &Instance,
    matching: &Matching,
    switching: &Switching,
    forbidden_start: ColourId,
) -> std::result::Result<(), SwitchingViolation> {
    if switching.is_empty() {
        return Ok(());
    }
    if switching.start_colour != forbidden_start {
        return Err(SwitchingViolation::StartColourMismatch {
            expected: forbidden_start,
            found: switching.start_colour,
        });
    }
    // Distinct edges of the matching.
    let mut seen: Vec<&Edge> = Vec::with_capacity(switching.len());
    for m in &switching.matching_edges {
        if !matching.edges().contains(m) {
            return Err(SwitchingViolation::ForeignMatchingEdge(*m));
        }
        if seen.contains(&m) {
            return Err(SwitchingViolation::RepeatedMatchingEdge(*m));
        }
        seen.push(m);
    }
    let covered = matching.vertices();
    for (j, out) in switching.out_edges.iter().enumerate() {
        let partner = &switching.matching_edges[j];
        // One endpoint on the paired matching edge, the other free.
        let anchored_u = partner.touches(out.u);
        let anchored_v = partner.touches(out.v);
        let ok = (anchored_u && !covered.contains(out.v))
            || (anchored_v && !covered.contains(out.u));
        if !ok {
            return Err(SwitchingViolation::BadOutEdgeEndpoints { position: j });
        }
    }
    // Colours: the first outside edge carries the start colour, which must
    // avoid every matching edge; later outside edges repeat the colour of
    // the matching edge they follow.
    if switching.out_edges[0].colour != switching.start_colour {
        return Err(SwitchingViolation::BadColourPattern { position: 0 });
    }
    for (j, m) in switching.matching_edges.iter().enumerate() {
        if m.colour == switching.start_colour {
            return Err(SwitchingViolation::BadColourPattern { position: j });
        }
    }
    for j in 1..switching.len() {
        if switching.out_edges[j].colour != switching.matching_edges[j - 1].colour {
            return Err(SwitchingViolation::BadColourPattern { position: j });
        }
    }
    for i in 0..switching.len() {
        for j in (i + 1)..switching.len() {
            if switching.out_edges[i].shares_vertex(&switching.out_edges[j]) {
                return Err(SwitchingViolation::OutEdgesOverlap { first: i, second: j });
            }
        }
    }
    for e in &switching.out_edges {
        if !instance.has_edge(e.colour, e.u, e.v) {
            return Err(SwitchingViolation::NotAnInstanceEdge(*e));
        }
    }
    Ok(())
}

pub fn validate_switching(
    instance: &Instance,
    matching: &Matching,
    switching: &Switching,
    forbidden_start: ColourId,
) -> bool {
    validate_switching_strict(instance, matching, switching, forbidden_start).is_ok()
}

/// Applies a switching and a closing edge: removes the switching's matching
/// edges, adds its outside edges, then adds `closing`. The closing edge must
/// carry the switching's end colour and avoid both the surviving matching
/// vertices and every vertex of the switching.
///
/// The result is a rainbow matching one edge larger; this postcondition is
/// re-checked before returning.
pub fn apply_switching(
    instance: &Instance,
    matching: &Matching,
    switching: &Switching,
    closing: Edge,
) -> Result<Matching> {
    if let Err(v) =
        validate_switching_strict(instance, matching, switching, switching.start_colour)
    {
        return Err(Error::SwitchingApplication(format!(
            "switching is not valid for the matching: {v}"
        )));
    }
    if closing.colour != switching.end_colour() {
        return Err(Error::SwitchingApplication(format!(
            "closing edge carries colour {} but the switching frees colour {}",
            closing.colour,
            switching.end_colour()
        )));
    }
    if !instance.has_edge(closing.colour, closing.u, closing.v) {
        return Err(Error::SwitchingApplication(format!(
            "closing edge {closing} lies in no clique of its colour"
        )));
    }
    let removed = switching.removed_edges();
    for m in matching.edges() {
        if !removed.contains(m) && closing.shares_vertex(m) {
            return Err(Error::SwitchingApplication(format!(
                "closing edge {closing} touches surviving matching edge {m}"
            )));
        }
    }
    if switching.touches(closing.u) || switching.touches(closing.v) {
        return Err(Error::SwitchingApplication(format!(
            "closing edge {closing} touches the switching"
        )));
    }

    let mut edges: Vec<Edge> = matching
        .edges()
        .iter()
        .filter(|m| !removed.contains(m))
        .copied()
        .collect();
    edges.extend_from_slice(switching.added_edges());
    edges.push(closing);
    let result = Matching::new(edges);
    let ok = is_rainbow_matching(instance, &result, matching.len() + 1)?;
    assert!(
        ok,
        "switching application produced a non-rainbow matching: {switching} + {closing}"
    );
    Ok(result)
}

/// Terminal state of a switching enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamStatus {
    InProgress,
    Complete,
    Truncated,
}

/// Enumerates the valid switchings with a fixed start colour, in order of
/// nondecreasing length. Within one length, switchings are ordered by their
/// matching-edge index tuple, then by their outside-edge endpoints. The empty
/// switching comes first. Single-consumer.
pub struct SwitchingStream<'a> {
    instance: &'a Instance,
    matching: &'a Matching,
    start_colour: ColourId,
    max_len: usize,
    remaining: usize,
    free: VertexSet,
    candidate_cache: HashMap<(usize, ColourId), Vec<Edge>>,
    buffer: VecDeque<Switching>,
    next_len: usize,
    status: StreamStatus,
    emitted: usize,
}

/// Yields valid `(start_colour, ·)`-switchings with respect to `matching`,
/// lengths `0..=max_len`, at most `limit` items. The matching is assumed
/// rainbow (checked in debug builds).
pub fn enumerate_switchings<'a>(
    instance: &'a Instance,
    matching: &'a Matching,
    start_colour: ColourId,
    max_len: usize,
    limit: usize,
) -> SwitchingStream<'a> {
    debug_assert!(matching.is_structurally_rainbow());
    let free = instance.universe().difference(&matching.vertices());
    SwitchingStream {
        instance,
        matching,
        start_colour,
        max_len,
        remaining: limit,
        free,
        candidate_cache: HashMap::new(),
        buffer: VecDeque::new(),
        next_len: 0,
        status: StreamStatus::InProgress,
        emitted: 0,
    }
}

impl<'a> SwitchingStream<'a> {
    pub fn status(&self) -> StreamStatus {
        self.status
    }

    pub fn emitted(&self) -> usize {
        self.emitted
    }

    /// Edges of `colour` joining matching edge `mi` to a free vertex,
    /// sorted by endpoints.
    fn candidates(&mut self, mi: usize, colour: ColourId) -> &[Edge] {
        if !self.candidate_cache.contains_key(&(mi, colour)) {
            let m = self.matching.edges()[mi];
            let mut edges = Vec::new();
            for anchor in [m.u, m.v] {
                if let Some(clique) = self.instance.clique_of(colour, anchor) {
                    for &r in clique {
                        if r != anchor && self.free.contains(r) {
                            edges.push(Edge::new(colour, anchor, r));
                        }
                    }
                }
            }
            edges.sort_unstable_by_key(|e| (e.u, e.v));
            self.candidate_cache.insert((mi, colour), edges);
        }
        &self.candidate_cache[&(mi, colour)]
    }

    fn fill_level(&mut self, k: usize) -> Vec<Switching> {
        // One extra slot detects truncation without generating a whole level.
        let cap = self.remaining.saturating_add(1);
        let mut out = Vec::new();
        if k == 0 {
            out.push(Switching::empty(self.start_colour));
            return out;
        }
        if k > self.matching.len() {
            return out;
        }
        let mut idx = Vec::with_capacity(k);
        let mut used = vec![false; self.matching.len()];
        self.tuple_dfs(k, &mut idx, &mut used, cap, &mut out);
        out
    }

    fn tuple_dfs(
        &mut self,
        k: usize,
        idx: &mut Vec<usize>,
        used: &mut Vec<bool>,
        cap: usize,
        out: &mut Vec<Switching>,
    ) {
        if out.len() >= cap {
            return;
        }
        if idx.len() == k {
            let mut chosen: Vec<Edge> = Vec::with_capacity(k);
            let tuple = idx.clone();
            self.edge_dfs(&tuple, 0, &mut chosen, cap, out);
            return;
        }
        let position = idx.len();
        let colour = self.position_colour(idx, position);
        // The start colour never coincides with a matching-edge colour.
        for i in 0..self.matching.len() {
            if used[i] || self.matching.edges()[i].colour == self.start_colour {
                continue;
            }
            if self.candidates(i, colour).is_empty() {
                continue;
            }
            used[i] = true;
            idx.push(i);
            self.tuple_dfs(k, idx, used, cap, out);
            idx.pop();
            used[i] = false;
            if out.len() >= cap {
                return;
            }
        }
    }

    fn position_colour(&self, idx: &[usize], position: usize) -> ColourId {
        if position == 0 {
            self.start_colour
        } else {
            self.matching.edges()[idx[position - 1]].colour
        }
    }

    fn edge_dfs(
        &mut self,
        idx: &[usize],
        position: usize,
        chosen: &mut Vec<Edge>,
        cap: usize,
        out: &mut Vec<Switching>,
    ) {
        if out.len() >= cap {
            return;
        }
        if position == idx.len() {
            let matching_edges = idx.iter().map(|&i| self.matching.edges()[i]).collect();
            let switching =
                Switching::new(self.start_colour, chosen.clone(), matching_edges)
                    .expect("paired by construction");
            debug_assert!(validate_switching(
                self.instance,
                self.matching,
                &switching,
                self.start_colour
            ));
            out.push(switching);
            return;
        }
        let colour = self.position_colour(idx, position);
        let candidates = self.candidates(idx[position], colour).to_vec();
        for e in candidates {
            if chosen.iter().any(|c| c.shares_vertex(&e)) {
                continue;
            }
            chosen.push(e);
            self.edge_dfs(idx, position + 1, chosen, cap, out);
            chosen.pop();
            if out.len() >= cap {
                return;
            }
        }
    }
}

impl<'a> Iterator for SwitchingStream<'a> {
    type Item = Switching;

    fn next(&mut self) -> Option<Switching> {
        loop {
            if let Some(s) = self.buffer.pop_front() {
                self.emitted += 1;
                return Some(s);
            }
            if self.status != StreamStatus::InProgress {
                return None;
            }
            if self.next_len > self.max_len {
                self.status = StreamStatus::Complete;
                return None;
            }
            let level = self.fill_level(self.next_len);
            if level.is_empty() && self.next_len > 0 {
                // Prefixes of longer switchings are switchings: once a
                // length is empty, every longer length is empty too.
                self.status = StreamStatus::Complete;
                return None;
            }
            if level.len() > self.remaining {
                // The level was generated with one item of headroom, so an
                // overflow here proves at least one switching is suppressed.
                let keep = self.remaining;
                self.buffer.extend(level.into_iter().take(keep));
                self.remaining = 0;
                self.status = StreamStatus::Truncated;
                if self.buffer.is_empty() {
                    return None;
                }
            } else {
                self.remaining -= level.len();
                self.buffer.extend(level);
                self.next_len += 1;
            }
        }
    }
}
