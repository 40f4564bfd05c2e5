//! Edges, matchings and the rainbow predicate.

use std::collections::HashSet;
use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::instance::{ColourId, Element, Instance};
use crate::vertex_set::VertexSet;

/// A coloured edge with ordered endpoints (`u < v`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Edge {
    pub colour: ColourId,
    pub u: Element,
    pub v: Element,
}

impl Edge {
    /// Normalizes endpoint order. Panics on a loop; loops cannot arise from
    /// cliques of distinct elements and parsers reject them up front.
    pub fn new(colour: ColourId, a: Element, b: Element) -> Self {
        assert_ne!(a, b, "edge endpoints must differ");
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        Edge { colour, u, v }
    }

    pub fn touches(&self, x: Element) -> bool {
        self.u == x || self.v == x
    }

    pub fn shares_vertex(&self, other: &Edge) -> bool {
        self.touches(other.u) || self.touches(other.v)
    }

    /// The endpoint other than `x`; `x` must be an endpoint.
    pub fn other(&self, x: Element) -> Element {
        debug_assert!(self.touches(x));
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }

    pub fn with_colour(self, colour: ColourId) -> Edge {
        Edge { colour, ..self }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{{{},{}}}", self.colour, self.u, self.v)
    }
}

/// A list of edges. Rainbow-ness and disjointness are predicates, not
/// construction-time invariants, so that validators can report on bad data.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<Edge>,
}

impl Matching {
    pub fn new(edges: Vec<Edge>) -> Self {
        Matching { edges }
    }

    pub fn empty() -> Self {
        Matching { edges: Vec::new() }
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn push(&mut self, e: Edge) {
        self.edges.push(e);
    }

    pub fn vertices(&self) -> VertexSet {
        self.edges
            .iter()
            .flat_map(|e| [e.u, e.v])
            .collect()
    }

    pub fn covers_vertex(&self, x: Element) -> bool {
        self.edges.iter().any(|e| e.touches(x))
    }

    pub fn colours(&self) -> Vec<ColourId> {
        let mut cs: Vec<_> = self.edges.iter().map(|e| e.colour).collect();
        cs.sort_unstable();
        cs
    }

    pub fn edge_of_colour(&self, colour: ColourId) -> Option<&Edge> {
        self.edges.iter().find(|e| e.colour == colour)
    }

    /// Edges sorted by (colour, u, v); the canonical file order.
    pub fn canonicalized(&self) -> Matching {
        let mut edges = self.edges.clone();
        edges.sort_unstable_by_key(|e| (e.colour, e.u, e.v));
        Matching { edges }
    }

    /// Re-colours every edge; used when moving between an instance and a
    /// colour-restricted copy of it.
    pub fn map_colours(&self, f: impl Fn(ColourId) -> ColourId) -> Matching {
        Matching {
            edges: self
                .edges
                .iter()
                .map(|e| e.with_colour(f(e.colour)))
                .collect(),
        }
    }

    /// Pairwise vertex-disjoint and pairwise distinct colours, without
    /// consulting an instance.
    pub fn is_structurally_rainbow(&self) -> bool {
        let mut vertices = HashSet::new();
        let mut colours = HashSet::new();
        for e in &self.edges {
            if !vertices.insert(e.u) || !vertices.insert(e.v) {
                return false;
            }
            if !colours.insert(e.colour) {
                return false;
            }
        }
        true
    }
}

impl FromIterator<Edge> for Matching {
    fn from_iter<I: IntoIterator<Item = Edge>>(iter: I) -> Self {
        Matching::new(iter.into_iter().collect())
    }
}

impl Serialize for Matching {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("Matching", 1)?;
        s.serialize_field("edges", &self.edges)?;
        s.end()
    }
}

/// True iff the edges are pairwise vertex-disjoint, their colours pairwise
/// distinct, every edge lies inside a clique of its colour, and the size
/// equals `required_size`.
///
/// A colour id outside the instance or an endpoint outside the universe is a
/// dangling reference and an error, not a `false`.
pub fn is_rainbow_matching(
    instance: &Instance,
    matching: &Matching,
    required_size: usize,
) -> Result<bool> {
    for e in matching.edges() {
        if e.colour >= instance.n() {
            return Err(Error::InvalidReference(format!(
                "edge {e} names colour {} but the instance has {} colours",
                e.colour,
                instance.n()
            )));
        }
        for x in [e.u, e.v] {
            if !instance.universe().contains(x) {
                return Err(Error::InvalidReference(format!(
                    "edge {e} names element {x} outside the instance universe"
                )));
            }
        }
    }
    if matching.len() != required_size {
        return Ok(false);
    }
    if !matching.is_structurally_rainbow() {
        return Ok(false);
    }
    Ok(matching
        .edges()
        .iter()
        .all(|e| instance.has_edge(e.colour, e.u, e.v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Instance;

    fn inst() -> Instance {
        Instance::from_cliques(
            vec![vec![vec![0, 1, 2]], vec![vec![3, 4, 5]], vec![vec![0, 3]]],
            false,
        )
    }

    #[test]
    fn empty_matching_is_rainbow_at_size_zero() {
        let i = inst();
        assert!(is_rainbow_matching(&i, &Matching::empty(), 0).unwrap());
        assert!(!is_rainbow_matching(&i, &Matching::empty(), 1).unwrap());
    }

    #[test]
    fn shared_vertex_is_not_rainbow() {
        let i = inst();
        let m = Matching::new(vec![Edge::new(0, 0, 1), Edge::new(2, 0, 3)]);
        assert!(!is_rainbow_matching(&i, &m, 2).unwrap());
    }

    #[test]
    fn repeated_colour_is_not_rainbow() {
        let i = inst();
        let m = Matching::new(vec![Edge::new(0, 0, 1), Edge::new(0, 3, 4)]);
        // colour 0 has no edge {3,4} anyway; use instance edges of one colour
        let m2 = Matching::new(vec![Edge::new(1, 3, 4), Edge::new(1, 3, 5)]);
        assert!(!is_rainbow_matching(&i, &m, 2).unwrap());
        assert!(!is_rainbow_matching(&i, &m2, 2).unwrap());
    }

    #[test]
    fn proper_rainbow_matching() {
        let i = inst();
        let m = Matching::new(vec![Edge::new(0, 1, 2), Edge::new(1, 4, 5), Edge::new(2, 0, 3)]);
        assert!(is_rainbow_matching(&i, &m, 3).unwrap());
    }

    #[test]
    fn dangling_references_error() {
        let i = inst();
        let bad_colour = Matching::new(vec![Edge::new(7, 0, 1)]);
        assert!(is_rainbow_matching(&i, &bad_colour, 1).is_err());
        let bad_element = Matching::new(vec![Edge::new(0, 0, 9)]);
        assert!(is_rainbow_matching(&i, &bad_element, 1).is_err());
    }

    #[test]
    fn edge_not_inside_clique_is_false_not_error() {
        let i = inst();
        let m = Matching::new(vec![Edge::new(0, 0, 3)]);
        assert!(!is_rainbow_matching(&i, &m, 1).unwrap());
    }
}
