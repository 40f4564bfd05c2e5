//! Sorted vertex sets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::instance::Element;

/// A set of element ids, stored as a strictly increasing vector.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Element>);

impl VertexSet {
    pub fn new() -> Self {
        VertexSet(Vec::new())
    }

    /// Builds from arbitrary input; sorts and deduplicates.
    pub fn from_elements(mut elements: Vec<Element>) -> Self {
        elements.sort_unstable();
        elements.dedup();
        VertexSet(elements)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: Element) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn insert(&mut self, x: Element) -> bool {
        match self.0.binary_search(&x) {
            Ok(_) => false,
            Err(pos) => {
                self.0.insert(pos, x);
                true
            }
        }
    }

    pub fn remove(&mut self, x: Element) -> bool {
        match self.0.binary_search(&x) {
            Ok(pos) => {
                self.0.remove(pos);
                true
            }
            Err(_) => false,
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = Element> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Element] {
        &self.0
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        VertexSet(out)
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&x| !other.contains(x)).collect())
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        if self.0.len() > other.0.len() {
            return other.intersection(self);
        }
        VertexSet(self.iter().filter(|&x| other.contains(x)).collect())
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        if self.0.len() > other.0.len() {
            return other.is_disjoint(self);
        }
        self.iter().all(|x| !other.contains(x))
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|x| other.contains(x))
    }
}

impl FromIterator<Element> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Element>>(iter: I) -> Self {
        VertexSet::from_elements(iter.into_iter().collect())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", x)?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_ops() {
        let a = VertexSet::from_elements(vec![3, 1, 2, 2]);
        let b = VertexSet::from_elements(vec![2, 4]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        assert_eq!(a.union(&b).as_slice(), &[1, 2, 3, 4]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 3]);
        assert_eq!(a.intersection(&b).as_slice(), &[2]);
        assert!(!a.is_disjoint(&b));
        assert!(VertexSet::from_elements(vec![1, 3]).is_disjoint(&b));
        assert!(VertexSet::from_elements(vec![2]).is_subset(&a));
    }
}
