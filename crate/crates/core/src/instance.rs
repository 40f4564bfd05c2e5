//! Edge-coloured multigraph instances.
//!
//! A colour class is stored as its list of cliques, never as an edge list:
//! the multigraph is derived (two elements are adjacent in a colour iff they
//! share a clique), validation stays linear in the kernel, and the
//! clique-union invariant is structural. Elements that lie in no clique of
//! any colour are never stored; dropping them is loss-free because a
//! singleton class can host no edge.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::vertex_set::VertexSet;

pub type Element = u32;
pub type ColourId = usize;

/// One colour class: pairwise disjoint cliques over element ids.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ColourClass {
    cliques: Vec<Vec<Element>>,
}

impl ColourClass {
    pub fn new(cliques: Vec<Vec<Element>>) -> Self {
        ColourClass { cliques }
    }

    pub fn cliques(&self) -> &[Vec<Element>] {
        &self.cliques
    }

    /// Total number of stored elements (counts duplicates in broken input).
    pub fn kernel_size(&self) -> usize {
        self.cliques.iter().map(|c| c.len()).sum()
    }

    fn canonicalize(&mut self) {
        for clique in &mut self.cliques {
            clique.sort_unstable();
            clique.dedup();
        }
        self.cliques.sort();
        self.cliques.retain(|c| !c.is_empty());
    }

    /// True if the cliques are individually sorted and ordered by smallest
    /// element.
    fn is_canonical(&self) -> bool {
        let mut prev_min: Option<Element> = None;
        for clique in &self.cliques {
            if !clique.windows(2).all(|w| w[0] < w[1]) {
                return false;
            }
            let min = match clique.first() {
                Some(&m) => m,
                None => return false,
            };
            if let Some(p) = prev_min {
                if min <= p {
                    return false;
                }
            }
            prev_min = Some(min);
        }
        true
    }
}

/// An immutable instance: `n` colour classes over a shared element universe.
#[derive(Debug, Clone)]
pub struct Instance {
    classes: Vec<ColourClass>,
    simple_mode: bool,
    universe: VertexSet,
    // Per colour: (element, clique index), sorted by element.
    lookup: Vec<Vec<(Element, u32)>>,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.simple_mode == other.simple_mode && self.classes == other.classes
    }
}
impl Eq for Instance {}

impl Instance {
    pub fn new(classes: Vec<ColourClass>, simple_mode: bool) -> Self {
        let mut lookup = Vec::with_capacity(classes.len());
        let mut universe = Vec::new();
        for class in &classes {
            let mut entries = Vec::with_capacity(class.kernel_size());
            for (idx, clique) in class.cliques.iter().enumerate() {
                for &x in clique {
                    entries.push((x, idx as u32));
                    universe.push(x);
                }
            }
            entries.sort_unstable();
            lookup.push(entries);
        }
        Instance {
            classes,
            simple_mode,
            universe: VertexSet::from_elements(universe),
            lookup,
        }
    }

    pub fn from_cliques(classes: Vec<Vec<Vec<Element>>>, simple_mode: bool) -> Self {
        Instance::new(classes.into_iter().map(ColourClass::new).collect(), simple_mode)
    }

    pub fn n(&self) -> usize {
        self.classes.len()
    }

    pub fn simple_mode(&self) -> bool {
        self.simple_mode
    }

    pub fn classes(&self) -> &[ColourClass] {
        &self.classes
    }

    pub fn class(&self, colour: ColourId) -> Result<&ColourClass> {
        self.classes.get(colour).ok_or(Error::InvalidColour {
            colour,
            n: self.n(),
        })
    }

    /// Union of all clique vertex sets of the colour.
    pub fn kernel(&self, colour: ColourId) -> Result<VertexSet> {
        let class = self.class(colour)?;
        Ok(class.cliques.iter().flatten().copied().collect())
    }

    /// All elements that occur in at least one clique of any colour.
    pub fn universe(&self) -> &VertexSet {
        &self.universe
    }

    /// The clique of `colour` containing `x`, if any. Unambiguous on valid
    /// instances; on broken input the first stored occurrence wins.
    pub fn clique_of(&self, colour: ColourId, x: Element) -> Option<&[Element]> {
        let entries = self.lookup.get(colour)?;
        let pos = entries.partition_point(|&(e, _)| e < x);
        let &(e, idx) = entries.get(pos)?;
        if e != x {
            return None;
        }
        Some(&self.classes[colour].cliques[idx as usize])
    }

    /// True iff `{u, v}` lies inside a single clique of the colour class.
    pub fn has_edge(&self, colour: ColourId, u: Element, v: Element) -> bool {
        if u == v {
            return false;
        }
        match self.clique_of(colour, u) {
            Some(clique) => clique.binary_search(&v).is_ok(),
            None => false,
        }
    }

    /// All edges of one colour, cliques in stored order, pairs lexicographic.
    pub fn colour_edges(&self, colour: ColourId) -> impl Iterator<Item = (Element, Element)> + '_ {
        self.classes[colour].cliques.iter().flat_map(|clique| {
            (0..clique.len()).flat_map(move |i| {
                ((i + 1)..clique.len()).map(move |j| (clique[i], clique[j]))
            })
        })
    }

    /// Sorted copy: cliques sorted internally and by smallest element.
    /// Idempotent; does not repair size or disjointness violations.
    pub fn canonicalized(&self) -> Instance {
        let mut classes = self.classes.clone();
        for class in &mut classes {
            class.canonicalize();
        }
        Instance::new(classes, self.simple_mode)
    }

    /// Checks every structural invariant and returns the violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for (colour, class) in self.classes.iter().enumerate() {
            let mut seen: HashMap<Element, u32> = HashMap::new();
            for (idx, clique) in class.cliques.iter().enumerate() {
                let distinct: VertexSet = clique.iter().copied().collect();
                if distinct.len() < 2 {
                    violations.push(Violation::CliqueTooSmall {
                        colour,
                        clique: idx,
                        size: distinct.len(),
                    });
                }
                for x in distinct.iter() {
                    if seen.insert(x, idx as u32).is_some() {
                        violations.push(Violation::DuplicateElement { colour, element: x });
                    }
                }
            }
            if !class.is_canonical() {
                violations.push(Violation::NotCanonical { colour });
            }
        }
        if self.simple_mode {
            let mut pair_owner: HashMap<(Element, Element), ColourId> = HashMap::new();
            for (colour, class) in self.classes.iter().enumerate() {
                for clique in &class.cliques {
                    for i in 0..clique.len() {
                        for j in (i + 1)..clique.len() {
                            let pair = if clique[i] < clique[j] {
                                (clique[i], clique[j])
                            } else {
                                (clique[j], clique[i])
                            };
                            match pair_owner.get(&pair) {
                                Some(&owner) if owner != colour => {
                                    violations.push(Violation::SharedPair {
                                        colour_a: owner,
                                        colour_b: colour,
                                        u: pair.0,
                                        v: pair.1,
                                    });
                                }
                                _ => {
                                    pair_owner.insert(pair, colour);
                                }
                            }
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// New instance over a colour subset (vertices untouched). Returns the
    /// restricted instance together with the map from new to old colour ids.
    pub fn restrict_colours(&self, keep: &[ColourId]) -> Result<(Instance, Vec<ColourId>)> {
        let mut classes = Vec::with_capacity(keep.len());
        for &c in keep {
            classes.push(self.class(c)?.clone());
        }
        Ok((Instance::new(classes, self.simple_mode), keep.to_vec()))
    }

    /// New instance keeping the given colours and dropping a vertex set.
    /// Cliques shrink to their surviving members; pieces with fewer than two
    /// vertices disappear. Clique order is re-canonicalized because removing
    /// a minimum can reorder cliques.
    pub fn without_vertices(
        &self,
        keep_colours: &[ColourId],
        dropped: &VertexSet,
    ) -> Result<(Instance, Vec<ColourId>)> {
        let mut classes = Vec::with_capacity(keep_colours.len());
        for &c in keep_colours {
            let class = self.class(c)?;
            let mut cliques: Vec<Vec<Element>> = class
                .cliques
                .iter()
                .map(|clique| {
                    clique
                        .iter()
                        .copied()
                        .filter(|&x| !dropped.contains(x))
                        .collect::<Vec<_>>()
                })
                .filter(|c: &Vec<Element>| c.len() >= 2)
                .collect();
            cliques.sort();
            classes.push(ColourClass::new(cliques));
        }
        Ok((Instance::new(classes, self.simple_mode), keep_colours.to_vec()))
    }
}

/// A single violated invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    CliqueTooSmall {
        colour: ColourId,
        clique: usize,
        size: usize,
    },
    DuplicateElement {
        colour: ColourId,
        element: Element,
    },
    NotCanonical {
        colour: ColourId,
    },
    SharedPair {
        colour_a: ColourId,
        colour_b: ColourId,
        u: Element,
        v: Element,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::CliqueTooSmall { colour, clique, size } => write!(
                f,
                "colour {colour}, clique {clique}: clique of size < 2 (size {size})"
            ),
            Violation::DuplicateElement { colour, element } => write!(
                f,
                "colour {colour}: element {element} appears in more than one clique"
            ),
            Violation::NotCanonical { colour } => write!(
                f,
                "colour {colour}: cliques not in canonical order (sorted, by smallest element)"
            ),
            Violation::SharedPair { colour_a, colour_b, u, v } => write!(
                f,
                "colours {colour_a} and {colour_b} share pair {{{u},{v}}} in simple mode"
            ),
        }
    }
}

/// Result of `Instance::validate`; valid iff no violations were found.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn summary(&self) -> String {
        self.violations
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join("; ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_colour_instance() -> Instance {
        Instance::from_cliques(vec![vec![vec![1, 2], vec![4, 5, 6]], vec![vec![0, 1]]], false)
    }

    #[test]
    fn kernel_is_union_of_cliques() {
        let inst = two_colour_instance();
        let k = inst.kernel(0).unwrap();
        assert_eq!(k.as_slice(), &[1, 2, 4, 5, 6]);
        assert_eq!(k.len(), 5);
        assert_eq!(inst.kernel(1).unwrap().as_slice(), &[0, 1]);
        assert!(matches!(
            inst.kernel(2),
            Err(Error::InvalidColour { colour: 2, n: 2 })
        ));
    }

    #[test]
    fn kernel_size_equals_sum_of_clique_sizes() {
        let inst = two_colour_instance();
        for c in 0..inst.n() {
            let total: usize = inst.classes()[c].cliques().iter().map(|q| q.len()).sum();
            assert_eq!(inst.kernel(c).unwrap().len(), total);
        }
    }

    #[test]
    fn validate_accepts_canonical_instance() {
        assert!(two_colour_instance().validate().is_valid());
    }

    #[test]
    fn validate_flags_small_clique() {
        let inst = Instance::from_cliques(vec![vec![vec![3]]], false);
        let report = inst.validate();
        assert!(!report.is_valid());
        assert!(report.summary().contains("clique of size < 2"));
    }

    #[test]
    fn validate_flags_duplicate_and_order() {
        let inst = Instance::from_cliques(vec![vec![vec![2, 1], vec![1, 3]]], false);
        let report = inst.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::DuplicateElement { element: 1, .. })));
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NotCanonical { .. })));
    }

    #[test]
    fn validate_flags_shared_pair_in_simple_mode() {
        let inst =
            Instance::from_cliques(vec![vec![vec![1, 2, 3]], vec![vec![1, 2]]], true);
        let report = inst.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::SharedPair { u: 1, v: 2, .. })));
        // The same instance without the flag is fine.
        let inst =
            Instance::from_cliques(vec![vec![vec![1, 2, 3]], vec![vec![1, 2]]], false);
        assert!(inst.validate().is_valid());
    }

    #[test]
    fn canonicalize_is_idempotent() {
        let raw = Instance::from_cliques(
            vec![vec![vec![5, 4], vec![2, 1]], vec![vec![9, 7, 8]]],
            false,
        );
        let once = raw.canonicalized();
        assert!(once.validate().is_valid());
        assert_eq!(once, once.canonicalized());
        assert_eq!(
            once.classes()[0].cliques(),
            &[vec![1, 2], vec![4, 5]]
        );
    }

    #[test]
    fn clique_lookup_and_edges() {
        let inst = two_colour_instance();
        assert_eq!(inst.clique_of(0, 5).unwrap(), &[4, 5, 6]);
        assert_eq!(inst.clique_of(0, 3), None);
        assert!(inst.has_edge(0, 4, 6));
        assert!(!inst.has_edge(0, 1, 4));
        assert!(!inst.has_edge(0, 4, 4));
        let edges: Vec<_> = inst.colour_edges(0).collect();
        assert_eq!(edges, vec![(1, 2), (4, 5), (4, 6), (5, 6)]);
    }
}
