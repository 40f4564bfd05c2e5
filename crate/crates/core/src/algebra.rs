//! Finite set algebras and their correspondence with clique-union relations.
//!
//! An algebra here is a nonempty family of subsets of a small ground set,
//! closed under complement and pairwise union (hence intersection). Such a
//! family is exactly the set of unions of the blocks of a partition: its
//! atoms. The ground set is hard-capped at 20 elements because the witness
//! checks quantify over the full power set.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{ColourId, Element, Instance};
use crate::matching::{is_rainbow_matching, Edge, Matching};
use crate::vertex_set::VertexSet;

pub const GROUND_CAP: usize = 20;

/// A family of subsets of `ground` encoded as bitmasks over the sorted
/// ground elements; members sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteAlgebra {
    ground: VertexSet,
    members: Vec<u32>,
}

impl FiniteAlgebra {
    /// Builds and validates. The member list may come in any order.
    pub fn new(ground: VertexSet, mut members: Vec<u32>) -> Result<Self> {
        if ground.len() > GROUND_CAP {
            return Err(Error::GroundTooLarge {
                size: ground.len(),
                cap: GROUND_CAP,
            });
        }
        members.sort_unstable();
        members.dedup();
        let algebra = FiniteAlgebra { ground, members };
        algebra.validate()?;
        Ok(algebra)
    }

    pub fn ground(&self) -> &VertexSet {
        &self.ground
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn full_mask(&self) -> u32 {
        if self.ground.is_empty() {
            0
        } else {
            (1u32 << self.ground.len()) - 1
        }
    }

    pub fn contains_mask(&self, mask: u32) -> bool {
        self.members.binary_search(&mask).is_ok()
    }

    /// Bitmask of a vertex set; errors on elements outside the ground.
    pub fn mask_of(&self, set: &VertexSet) -> Result<u32> {
        let mut mask = 0u32;
        for x in set.iter() {
            let pos = self
                .ground
                .as_slice()
                .binary_search(&x)
                .map_err(|_| {
                    Error::InvalidReference(format!("element {x} is outside the ground set"))
                })?;
            mask |= 1 << pos;
        }
        Ok(mask)
    }

    pub fn set_of(&self, mask: u32) -> VertexSet {
        self.ground
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, x)| x)
            .collect()
    }

    /// Closure and boundary axioms. A family closed under complement whose
    /// members are exactly the unions of its inclusion-minimal members is an
    /// algebra; that equivalence keeps the check complete without the
    /// quadratic union scan (tests still run the quadratic scan as an
    /// independent oracle on small families).
    pub fn validate(&self) -> Result<()> {
        if self.members.is_empty() {
            return Err(Error::InvalidAlgebra("no members".into()));
        }
        let full = self.full_mask();
        if self.members.iter().any(|&m| m & !full != 0) {
            return Err(Error::InvalidAlgebra(
                "a member names elements outside the ground set".into(),
            ));
        }
        if !self.contains_mask(0) || !self.contains_mask(full) {
            return Err(Error::InvalidAlgebra(
                "the empty set and the ground set must be members".into(),
            ));
        }
        for &m in &self.members {
            if !self.contains_mask(full & !m) {
                return Err(Error::InvalidAlgebra(format!(
                    "member {m:#b} lacks its complement"
                )));
            }
        }
        let atoms = self.atom_masks();
        let mut union_of_atoms = 0u32;
        for &a in &atoms {
            if union_of_atoms & a != 0 {
                return Err(Error::InvalidAlgebra(
                    "inclusion-minimal members overlap".into(),
                ));
            }
            union_of_atoms |= a;
        }
        if union_of_atoms != full {
            return Err(Error::InvalidAlgebra(
                "inclusion-minimal members do not cover the ground set".into(),
            ));
        }
        if self.members.len() != 1usize << atoms.len() {
            return Err(Error::InvalidAlgebra(format!(
                "{} members cannot be the unions of {} atoms",
                self.members.len(),
                atoms.len()
            )));
        }
        for &m in &self.members {
            let rebuilt = atoms.iter().filter(|&&a| m & a == a).fold(0, |acc, &a| acc | a);
            if rebuilt != m {
                return Err(Error::InvalidAlgebra(format!(
                    "member {m:#b} is not a union of atoms"
                )));
            }
        }
        Ok(())
    }

    /// Inclusion-minimal nonempty members.
    fn atom_masks(&self) -> Vec<u32> {
        let mut atoms = Vec::new();
        for &m in &self.members {
            if m == 0 {
                continue;
            }
            let minimal = self
                .members
                .iter()
                .all(|&other| other == 0 || other == m || other & m != other);
            if minimal {
                atoms.push(m);
            }
        }
        atoms
    }
}

impl fmt::Display for FiniteAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "algebra on {} with {} members",
            self.ground,
            self.members.len()
        )
    }
}

/// The algebra induced by one colour class over a chosen ground set: all
/// unions of that colour's cliques, with elements outside the kernel acting
/// as singleton blocks.
pub fn relation_to_algebra(
    instance: &Instance,
    colour: ColourId,
    ground: &VertexSet,
) -> Result<FiniteAlgebra> {
    if ground.len() > GROUND_CAP {
        return Err(Error::GroundTooLarge {
            size: ground.len(),
            cap: GROUND_CAP,
        });
    }
    let kernel = instance.kernel(colour)?;
    if !kernel.is_subset(ground) {
        return Err(Error::InvalidReference(format!(
            "kernel of colour {colour} is not contained in the ground set"
        )));
    }
    let index_of = |x: Element| -> u32 {
        ground.as_slice().binary_search(&x).expect("in ground") as u32
    };
    let mut blocks: Vec<u32> = Vec::new();
    for clique in instance.classes()[colour].cliques() {
        blocks.push(clique.iter().fold(0u32, |acc, &x| acc | 1 << index_of(x)));
    }
    for x in ground.iter() {
        if !kernel.contains(x) {
            blocks.push(1 << index_of(x));
        }
    }
    let mut members = Vec::with_capacity(1 << blocks.len());
    for choice in 0u32..(1 << blocks.len()) {
        let mut mask = 0u32;
        for (i, &b) in blocks.iter().enumerate() {
            if choice & (1 << i) != 0 {
                mask |= b;
            }
        }
        members.push(mask);
    }
    FiniteAlgebra::new(ground.clone(), members)
}

/// The partition whose blocks are the algebra's inclusion-minimal members,
/// sorted by smallest element. Errors if the family violates the closure
/// axioms.
pub fn algebra_to_relation(algebra: &FiniteAlgebra) -> Result<Vec<VertexSet>> {
    algebra.validate()?;
    let mut blocks: Vec<VertexSet> = algebra
        .atom_masks()
        .into_iter()
        .map(|m| algebra.set_of(m))
        .collect();
    blocks.sort_by_key(|b| b.as_slice().first().copied());
    Ok(blocks)
}

/// Pairs of disjoint subsets, all `2n` sets pairwise disjoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessFamily {
    pairs: Vec<(VertexSet, VertexSet)>,
}

impl WitnessFamily {
    pub fn new(pairs: Vec<(VertexSet, VertexSet)>) -> Result<Self> {
        let mut seen = VertexSet::new();
        for set in pairs.iter().flat_map(|(a, b)| [a, b]) {
            if !seen.is_disjoint(set) {
                return Err(Error::Parameter(
                    "witness family sets must be pairwise disjoint".into(),
                ));
            }
            seen = seen.union(set);
        }
        Ok(WitnessFamily { pairs })
    }

    pub fn pairs(&self) -> &[(VertexSet, VertexSet)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// From a full rainbow matching, the singleton witness family
/// `({x_i}, {y_i})` indexed by colour.
pub fn witness_from_matching(instance: &Instance, matching: &Matching) -> Result<WitnessFamily> {
    let n = instance.n();
    if !is_rainbow_matching(instance, matching, n)? {
        return Err(Error::Parameter(
            "witness extraction needs a full rainbow matching".into(),
        ));
    }
    let sorted = matching.canonicalized();
    let pairs = sorted
        .edges()
        .iter()
        .map(|e| {
            (
                VertexSet::from_elements(vec![e.u]),
                VertexSet::from_elements(vec![e.v]),
            )
        })
        .collect();
    WitnessFamily::new(pairs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessViolation {
    pub index: usize,
    /// 1 if the offending superset contains the first set of the pair,
    /// 2 for the second.
    pub side: u8,
    pub subset: Vec<Element>,
}

#[derive(Debug, Clone, Default)]
pub struct WitnessReport {
    pub subsets_checked: u64,
    pub violations: Vec<WitnessViolation>,
}

impl WitnessReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively verifies the separating property: for every pair index and
/// every subset of the ground set containing one side of the pair while
/// avoiding the other, that subset is not a member of the corresponding
/// algebra. Scans all `2^|ground|` subsets per pair and side.
pub fn verify_witness_property(
    algebras: &[FiniteAlgebra],
    witness: &WitnessFamily,
) -> Result<WitnessReport> {
    if algebras.len() != witness.len() {
        return Err(Error::Parameter(format!(
            "{} algebras vs {} witness pairs",
            algebras.len(),
            witness.len()
        )));
    }
    let mut report = WitnessReport::default();
    for (i, ((a, b), algebra)) in witness.pairs().iter().zip(algebras).enumerate() {
        let full = algebra.full_mask();
        let mask_a = algebra.mask_of(a)?;
        let mask_b = algebra.mask_of(b)?;
        for (side, include, exclude) in [(1u8, mask_a, mask_b), (2u8, mask_b, mask_a)] {
            // Iterate the subsets of the complement of `exclude` that
            // contain `include` by walking the free positions.
            let free = full & !exclude & !include;
            let mut extra = 0u32;
            loop {
                let q = include | extra;
                report.subsets_checked += 1;
                if algebra.contains_mask(q) {
                    report.violations.push(WitnessViolation {
                        index: i,
                        side,
                        subset: algebra.set_of(q).iter().collect(),
                    });
                }
                if extra == free {
                    break;
                }
                extra = (extra.wrapping_sub(free)) & free;
            }
        }
    }
    Ok(report)
}

/// Rebuilds a rainbow matching from a witness family with the separating
/// property: per pair, take the inclusion-minimal member containing the
/// first set, locate a block meeting both sets, and pick its smallest
/// representatives. Fails with a no-witness error when the property does
/// not hold for some pair.
pub fn matching_from_witness(
    algebras: &[FiniteAlgebra],
    witness: &WitnessFamily,
) -> Result<Matching> {
    if algebras.len() != witness.len() {
        return Err(Error::Parameter(format!(
            "{} algebras vs {} witness pairs",
            algebras.len(),
            witness.len()
        )));
    }
    let mut edges = Vec::with_capacity(witness.len());
    for (i, ((set_a, set_b), algebra)) in witness.pairs().iter().zip(algebras).enumerate() {
        let mask_a = algebra.mask_of(set_a)?;
        let mask_b = algebra.mask_of(set_b)?;
        // Minimal member containing `set_a`: algebras are closed under
        // intersection, so the intersection of all members above it works.
        let minimal = algebra
            .members()
            .iter()
            .filter(|&&m| m & mask_a == mask_a)
            .fold(algebra.full_mask(), |acc, &m| acc & m);
        debug_assert!(algebra.contains_mask(minimal));
        // Minimality: every atom inside it must meet `set_a`.
        let atoms = algebra.atom_masks();
        assert!(
            atoms
                .iter()
                .filter(|&&at| minimal & at == at)
                .all(|&at| at & mask_a != 0),
            "minimal member contains a block missing the first set"
        );
        if minimal & mask_b == 0 {
            return Err(Error::NoWitness(format!(
                "pair {i}: the minimal member containing the first set avoids the second; \
                 the separating property fails"
            )));
        }
        let block = atoms
            .iter()
            .copied()
            .filter(|&at| minimal & at == at && at & mask_a != 0 && at & mask_b != 0)
            .min_by_key(|&at| at.trailing_zeros())
            .ok_or_else(|| {
                Error::NoWitness(format!(
                    "pair {i}: no block meets both sets; the separating property fails"
                ))
            })?;
        let x = algebra.set_of(block & mask_a).iter().next().expect("nonempty");
        let y = algebra.set_of(block & mask_b).iter().next().expect("nonempty");
        edges.push(Edge::new(i, x, y));
    }
    let matching = Matching::new(edges);
    assert!(
        matching.is_structurally_rainbow(),
        "witness disjointness must give a rainbow matching"
    );
    Ok(matching)
}

/// Algebra JSON: `{ "ground": [..], "members": [[..], ..] }`, members
/// canonically sorted.
#[derive(Debug, Serialize, Deserialize)]
struct AlgebraFile {
    ground: Vec<Element>,
    members: Vec<Vec<Element>>,
}

pub fn parse_algebra(text: &str) -> Result<FiniteAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text)
        .map_err(|e| Error::InvalidAlgebra(format!("parse: {e}")))?;
    let ground = VertexSet::from_elements(file.ground);
    if ground.len() > GROUND_CAP {
        return Err(Error::GroundTooLarge {
            size: ground.len(),
            cap: GROUND_CAP,
        });
    }
    let probe = FiniteAlgebra {
        ground: ground.clone(),
        members: vec![0],
    };
    let mut masks = Vec::with_capacity(file.members.len());
    for member in file.members {
        masks.push(probe.mask_of(&VertexSet::from_elements(member))?);
    }
    FiniteAlgebra::new(ground, masks)
}

pub fn serialize_algebra(algebra: &FiniteAlgebra) -> String {
    let file = AlgebraFile {
        ground: algebra.ground().iter().collect(),
        members: algebra
            .members()
            .iter()
            .map(|&m| algebra.set_of(m).iter().collect())
            .collect(),
    };
    let mut out = serde_json::to_string_pretty(&file).expect("algebra serialization");
    out.push('\n');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ground(xs: &[Element]) -> VertexSet {
        VertexSet::from_elements(xs.to_vec())
    }

    #[test]
    fn relation_to_algebra_single_pair() {
        let inst = Instance::from_cliques(vec![vec![vec![1, 2]]], false);
        let algebra = relation_to_algebra(&inst, 0, &ground(&[1, 2, 3])).unwrap();
        // Blocks {1,2} and {3}: members {}, {3}, {1,2}, {1,2,3}.
        assert_eq!(algebra.members().len(), 4);
        let sets: Vec<Vec<Element>> = algebra
            .members()
            .iter()
            .map(|&m| algebra.set_of(m).iter().collect())
            .collect();
        assert!(sets.contains(&vec![]));
        assert!(sets.contains(&vec![3]));
        assert!(sets.contains(&vec![1, 2]));
        assert!(sets.contains(&vec![1, 2, 3]));
    }

    #[test]
    fn relation_covering_ground_gives_trivial_algebra() {
        let inst = Instance::from_cliques(vec![vec![vec![0, 1, 2]]], false);
        let algebra = relation_to_algebra(&inst, 0, &ground(&[0, 1, 2])).unwrap();
        assert_eq!(algebra.members(), &[0, 0b111]);
    }

    #[test]
    fn member_count_is_power_of_block_count() {
        for k in 2..=4usize {
            let inst = Instance::from_cliques(vec![vec![vec![0, 1], vec![2, 3]]], false);
            let g: VertexSet = (0..(2 + k) as u32).collect();
            let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
            // Blocks: two cliques plus k singletons... ground has 2+k
            // elements of which 4 are kernel; singletons = (2+k) - 4.
            let blocks = 2 + (2 + k - 4);
            assert_eq!(algebra.members().len(), 1 << blocks);
        }
    }

    #[test]
    fn atoms_recover_the_partition() {
        let inst = Instance::from_cliques(vec![vec![vec![1, 2], vec![4, 5, 6]]], false);
        let g = ground(&[1, 2, 3, 4, 5, 6]);
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        let blocks = algebra_to_relation(&algebra).unwrap();
        let block_vecs: Vec<Vec<Element>> =
            blocks.iter().map(|b| b.iter().collect()).collect();
        assert_eq!(block_vecs, vec![vec![1, 2], vec![3], vec![4, 5, 6]]);
    }

    #[test]
    fn full_power_set_atoms_are_singletons() {
        let algebra =
            FiniteAlgebra::new(ground(&[1, 2]), vec![0b00, 0b01, 0b10, 0b11]).unwrap();
        let blocks = algebra_to_relation(&algebra).unwrap();
        assert_eq!(blocks.len(), 2);
        assert!(blocks.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn closure_violations_are_rejected() {
        // Missing complement of {1}.
        assert!(FiniteAlgebra::new(ground(&[1, 2]), vec![0b00, 0b01, 0b11]).is_err());
        // Missing ground.
        assert!(FiniteAlgebra::new(ground(&[1, 2]), vec![0b00, 0b01]).is_err());
        // Not union-closed: {1},{2} present but {1,2}... that needs a third
        // element to break complement instead.
        assert!(FiniteAlgebra::new(
            ground(&[1, 2, 3]),
            vec![0b000, 0b001, 0b110, 0b010, 0b101, 0b111]
        )
        .is_err());
    }

    /// Quadratic closure oracle used to cross-check `validate`.
    fn closed_under_union_and_complement(algebra: &FiniteAlgebra) -> bool {
        let full = algebra.full_mask();
        algebra.members().iter().all(|&m| {
            algebra.contains_mask(full & !m)
                && algebra
                    .members()
                    .iter()
                    .all(|&o| algebra.contains_mask(m | o))
        })
    }

    #[test]
    fn validate_agrees_with_quadratic_closure_scan() {
        let inst =
            Instance::from_cliques(vec![vec![vec![0, 1], vec![2, 3], vec![4, 5, 6]]], false);
        let g: VertexSet = (0..8u32).collect();
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        assert!(closed_under_union_and_complement(&algebra));
    }

    #[test]
    fn witness_property_separates_matched_pairs() {
        // One pair clique {1,2}; witness ({1},{2}).
        let inst = Instance::from_cliques(vec![vec![vec![1, 2]]], false);
        let g = ground(&[1, 2, 3]);
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        let witness = WitnessFamily::new(vec![(
            VertexSet::from_elements(vec![1]),
            VertexSet::from_elements(vec![2]),
        )])
        .unwrap();
        let report = verify_witness_property(&[algebra], &witness).unwrap();
        assert!(report.holds(), "{:?}", report.violations);
        assert!(report.subsets_checked > 0);
    }

    #[test]
    fn witness_property_rejects_non_separating_pairs() {
        // Witness side {3} is a singleton block: the set {3} itself is a
        // member containing one side and avoiding the other.
        let inst = Instance::from_cliques(vec![vec![vec![1, 2]]], false);
        let g = ground(&[1, 2, 3]);
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        let witness = WitnessFamily::new(vec![(
            VertexSet::from_elements(vec![3]),
            VertexSet::from_elements(vec![1]),
        )])
        .unwrap();
        let report = verify_witness_property(&[algebra], &witness).unwrap();
        assert!(!report.holds());
    }

    #[test]
    fn empty_witness_family_passes_vacuously() {
        let report = verify_witness_property(&[], &WitnessFamily::new(vec![]).unwrap()).unwrap();
        assert!(report.holds());
        assert_eq!(report.subsets_checked, 0);
    }

    #[test]
    fn witness_family_requires_disjointness() {
        assert!(WitnessFamily::new(vec![
            (
                VertexSet::from_elements(vec![1]),
                VertexSet::from_elements(vec![2])
            ),
            (
                VertexSet::from_elements(vec![2]),
                VertexSet::from_elements(vec![3])
            ),
        ])
        .is_err());
    }

    #[test]
    fn round_trip_matching_to_witness_and_back() {
        let inst = Instance::from_cliques(
            vec![vec![vec![0, 1], vec![4, 5]], vec![vec![2, 3], vec![6, 7]]],
            false,
        );
        let matching = Matching::new(vec![Edge::new(0, 0, 1), Edge::new(1, 2, 3)]);
        let witness = witness_from_matching(&inst, &matching).unwrap();
        assert_eq!(witness.len(), 2);

        let g: VertexSet = (0..8u32).collect();
        let algebras: Vec<FiniteAlgebra> = (0..2)
            .map(|c| relation_to_algebra(&inst, c, &g).unwrap())
            .collect();
        let report = verify_witness_property(&algebras, &witness).unwrap();
        assert!(report.holds());

        let recovered = matching_from_witness(&algebras, &witness).unwrap();
        assert!(recovered.is_structurally_rainbow());
        // The recovered edges use the same blocks the witness named.
        assert_eq!(recovered.edges().len(), 2);
        for (e, (a, b)) in recovered.edges().iter().zip(witness.pairs()) {
            assert!(a.contains(e.u) || a.contains(e.v));
            assert!(b.contains(e.u) || b.contains(e.v));
        }
    }

    #[test]
    fn matching_from_witness_fails_without_the_property() {
        let inst = Instance::from_cliques(vec![vec![vec![1, 2]]], false);
        let g = ground(&[1, 2, 3]);
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        // {3} and {1} are not separated: minimal member over {3} is {3}.
        let witness = WitnessFamily::new(vec![(
            VertexSet::from_elements(vec![3]),
            VertexSet::from_elements(vec![1]),
        )])
        .unwrap();
        assert!(matches!(
            matching_from_witness(&[algebra], &witness),
            Err(Error::NoWitness(_))
        ));
    }

    #[test]
    fn algebra_json_round_trip() {
        let inst = Instance::from_cliques(vec![vec![vec![0, 1]]], false);
        let g = ground(&[0, 1, 2]);
        let algebra = relation_to_algebra(&inst, 0, &g).unwrap();
        let text = serialize_algebra(&algebra);
        let parsed = parse_algebra(&text).unwrap();
        assert_eq!(parsed, algebra);
        assert_eq!(serialize_algebra(&parsed), text);
    }
}
