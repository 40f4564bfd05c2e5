//! Canonical enumeration of small instances up to element relabeling.
//!
//! Instances are generated colour by colour with restricted growth: fresh
//! elements take the next unused ids in order of first appearance. The first
//! class is laid out canonically (clique sizes descending, elements
//! sequential), and each later class is kept only if no automorphism of the
//! prefix relabels it to a lexicographically smaller encoding. For one or
//! two colours this yields every isomorphism class exactly once. For three
//! colours the final class is not re-checked (checking would cost more than
//! the duplicate visits it avoids), so every isomorphism class is visited at
//! least once and occasionally more than once.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::instance::{Element, Instance};

const SEP: u32 = u32::MAX;
const CLASS_SEP: u32 = u32::MAX - 1;

/// Visits canonical instances with `n` colours whose kernels each have size
/// in `kernel_min..=kernel_max`. Returns the number of instances visited.
pub fn for_each_canonical_instance(
    n: usize,
    kernel_min: usize,
    kernel_max: usize,
    visit: &mut dyn FnMut(&Instance),
) -> Result<u64> {
    if n == 0 || n > 3 {
        return Err(Error::Parameter(format!(
            "canonical enumeration supports 1..=3 colours, got {n}"
        )));
    }
    if kernel_min < 2 || kernel_min > kernel_max {
        return Err(Error::Parameter(format!(
            "bad kernel range {kernel_min}..={kernel_max}"
        )));
    }
    let mut count = 0u64;
    for k0 in kernel_min..=kernel_max {
        for sizes in partitions_desc(k0) {
            let first = layout_from_sizes(&sizes);
            let m0 = k0 as u32;
            if n == 1 {
                count += 1;
                visit(&Instance::from_cliques(vec![first.clone()], false));
                continue;
            }
            let auts = layout_automorphisms(&sizes);
            for_each_class(m0, kernel_min, kernel_max, &mut |second, m1| {
                if !extension_is_canonical(second, &auts, m0) {
                    return;
                }
                if n == 2 {
                    count += 1;
                    visit(&Instance::from_cliques(
                        vec![first.clone(), second.to_vec()],
                        false,
                    ));
                    return;
                }
                for_each_class(m1, kernel_min, kernel_max, &mut |third, _| {
                    count += 1;
                    visit(&Instance::from_cliques(
                        vec![first.clone(), second.to_vec(), third.to_vec()],
                        false,
                    ));
                });
            });
        }
    }
    Ok(count)
}

/// Integer partitions of `k` into parts of size at least 2, parts listed in
/// non-increasing order.
fn partitions_desc(k: usize) -> Vec<Vec<usize>> {
    fn rec(k: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 0 {
            out.push(prefix.clone());
            return;
        }
        let mut part = max_part.min(k);
        while part >= 2 {
            if k - part != 1 {
                prefix.push(part);
                rec(k - part, part, prefix, out);
                prefix.pop();
            }
            part -= 1;
        }
    }
    let mut out = Vec::new();
    rec(k, k, &mut Vec::new(), &mut out);
    out
}

fn layout_from_sizes(sizes: &[usize]) -> Vec<Vec<Element>> {
    let mut next = 0u32;
    sizes
        .iter()
        .map(|&s| {
            let clique: Vec<Element> = (next..next + s as u32).collect();
            next += s as u32;
            clique
        })
        .collect()
}

/// All element permutations of `0..sum(sizes)` preserving the sequential
/// layout: same-size cliques may swap and elements move freely inside a
/// clique. The identity comes first.
fn layout_automorphisms(sizes: &[usize]) -> Vec<Vec<u32>> {
    let offsets: Vec<u32> = sizes
        .iter()
        .scan(0u32, |acc, &s| {
            let o = *acc;
            *acc += s as u32;
            Some(o)
        })
        .collect();
    let total: u32 = sizes.iter().map(|&s| s as u32).sum();

    // Group clique indices by size.
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < sizes.len() {
        let mut j = i;
        while j < sizes.len() && sizes[j] == sizes[i] {
            j += 1;
        }
        groups.push((i..j).collect());
        i = j;
    }

    let mut perms: Vec<Vec<u32>> = vec![vec![0; total as usize]];
    // Start from clique assignments; per group, all permutations of targets.
    let mut assignments: Vec<Vec<usize>> = vec![vec![0; sizes.len()]];
    for group in &groups {
        let mut extended = Vec::new();
        for assignment in &assignments {
            for target in group.iter().copied().permutations(group.len()) {
                let mut a = assignment.clone();
                for (&src, &dst) in group.iter().zip(target.iter()) {
                    a[src] = dst;
                }
                extended.push(a);
            }
        }
        assignments = extended;
    }
    perms.clear();
    for assignment in &assignments {
        // Within each source clique, all bijections onto the target range.
        let mut partials: Vec<Vec<u32>> = vec![vec![u32::MAX; total as usize]];
        for (src, &dst) in assignment.iter().enumerate() {
            let src_range: Vec<u32> =
                (offsets[src]..offsets[src] + sizes[src] as u32).collect();
            let dst_range: Vec<u32> =
                (offsets[dst]..offsets[dst] + sizes[dst] as u32).collect();
            let mut extended = Vec::new();
            for partial in &partials {
                for image in dst_range.iter().copied().permutations(dst_range.len()) {
                    let mut p = partial.clone();
                    for (&s, &d) in src_range.iter().zip(image.iter()) {
                        p[s as usize] = d;
                    }
                    extended.push(p);
                }
            }
            partials = extended;
        }
        perms.extend(partials);
    }
    perms
}

/// Clique systems over `old_count` existing elements plus fresh ids, kernels
/// within the range, cliques ordered by smallest element, fresh elements in
/// first-appearance order. Calls `visit(cliques, new_old_count)`.
fn for_each_class(
    old_count: u32,
    kernel_min: usize,
    kernel_max: usize,
    visit: &mut dyn FnMut(&[Vec<Element>], u32),
) {
    struct State<'v> {
        old_count: u32,
        kernel_min: usize,
        kernel_max: usize,
        used_old: Vec<bool>,
        cliques: Vec<Vec<Element>>,
        total: usize,
        next_fresh: u32,
        last_all_fresh_size: usize,
        visit: &'v mut dyn FnMut(&[Vec<Element>], u32),
    }

    impl<'v> State<'v> {
        fn run(&mut self, min_start: u32) {
            if self.total >= self.kernel_min {
                (self.visit)(&self.cliques, self.next_fresh);
            }
            if self.total >= self.kernel_max {
                return;
            }
            let budget = self.kernel_max - self.total;
            if budget < 2 {
                return;
            }
            // Choose the next clique's smallest element: an unused old
            // element past the previous minimum, or the next fresh id.
            for start in min_start..self.old_count {
                if self.used_old[start as usize] {
                    continue;
                }
                self.extend_clique_from(start, false, budget);
            }
            self.extend_clique_from(self.next_fresh, true, budget);
        }

        fn extend_clique_from(&mut self, start: u32, start_is_fresh: bool, budget: usize) {
            let mut clique = vec![start];
            if start_is_fresh {
                self.next_fresh += 1;
            } else {
                self.used_old[start as usize] = true;
            }
            self.grow_clique(&mut clique, start + 1, budget - 1, start_is_fresh);
            if start_is_fresh {
                self.next_fresh -= 1;
            } else {
                self.used_old[start as usize] = false;
            }
        }

        /// Adds members above `from` until the clique is complete, then
        /// recurses into the next clique.
        fn grow_clique(&mut self, clique: &mut Vec<Element>, from: u32, budget: usize, all_fresh: bool) {
            if clique.len() >= 2 {
                // Close the clique here.
                let min = clique[0];
                self.cliques.push(clique.clone());
                self.total += clique.len();
                let saved = self.last_all_fresh_size;
                let skip = if all_fresh {
                    // All-fresh cliques must come in non-increasing sizes;
                    // smaller-first orders are relabelings of these.
                    if clique.len() > self.last_all_fresh_size {
                        true
                    } else {
                        self.last_all_fresh_size = clique.len();
                        false
                    }
                } else {
                    false
                };
                if !skip {
                    self.run(min + 1);
                }
                self.last_all_fresh_size = saved;
                self.total -= clique.len();
                self.cliques.pop();
            }
            if budget == 0 {
                return;
            }
            // Next member: any unused old element above `from`, or fresh.
            for x in from.max(0)..self.old_count {
                if self.used_old[x as usize] {
                    continue;
                }
                self.used_old[x as usize] = true;
                clique.push(x);
                self.grow_clique(clique, x + 1, budget - 1, false);
                clique.pop();
                self.used_old[x as usize] = false;
            }
            clique.push(self.next_fresh);
            self.next_fresh += 1;
            self.grow_clique(clique, self.next_fresh, budget - 1, all_fresh);
            self.next_fresh -= 1;
            clique.pop();
        }
    }

    let mut state = State {
        old_count,
        kernel_min,
        kernel_max,
        used_old: vec![false; old_count as usize],
        cliques: Vec::new(),
        total: 0,
        next_fresh: old_count,
        last_all_fresh_size: usize::MAX,
        visit,
    };
    state.run(0);
}

fn encode_class(cliques: &[Vec<Element>]) -> Vec<u32> {
    let mut out = Vec::with_capacity(cliques.iter().map(|c| c.len() + 1).sum());
    for clique in cliques {
        out.extend_from_slice(clique);
        out.push(SEP);
    }
    out
}

fn encode_instance(classes: &[Vec<Vec<Element>>]) -> Vec<u32> {
    let mut out = Vec::new();
    for class in classes {
        out.extend(encode_class(class));
        out.push(CLASS_SEP);
    }
    out
}

/// True iff no prefix automorphism relabels `class1` to a smaller encoding.
/// Elements below `m0` belong to the canonical prefix and move by `perm`;
/// elements at or above `m0` are fresh and anonymous, re-normalized to
/// first-appearance order after the move.
fn extension_is_canonical(class1: &[Vec<Element>], auts: &[Vec<u32>], m0: u32) -> bool {
    let base = encode_class(class1);
    for perm in auts {
        let image = rg_image(class1, perm, m0);
        if encode_class(&image) < base {
            return false;
        }
    }
    true
}

/// Applies `perm` to the old elements of a class and renames its fresh
/// elements to first-appearance order, producing the canonical encoding of
/// the relabeled class. Fresh elements occur in exactly one clique each, so
/// only their count per clique matters.
fn rg_image(cliques: &[Vec<Element>], perm: &[u32], m0: u32) -> Vec<Vec<Element>> {
    let mut mixed: Vec<(Vec<Element>, usize)> = Vec::new();
    let mut all_fresh_sizes: Vec<usize> = Vec::new();
    for clique in cliques {
        let mut old: Vec<Element> = clique
            .iter()
            .filter(|&&x| x < m0)
            .map(|&x| perm[x as usize])
            .collect();
        let fresh = clique.len() - old.len();
        if old.is_empty() {
            all_fresh_sizes.push(fresh);
        } else {
            old.sort_unstable();
            mixed.push((old, fresh));
        }
    }
    mixed.sort();
    // Larger all-fresh cliques first: with the separator comparing high,
    // longer runs of small fresh ids win.
    all_fresh_sizes.sort_unstable_by(|a, b| b.cmp(a));

    let mut next = m0;
    let mut out = Vec::with_capacity(mixed.len() + all_fresh_sizes.len());
    for (mut old, fresh) in mixed {
        for _ in 0..fresh {
            old.push(next);
            next += 1;
        }
        out.push(old);
    }
    for size in all_fresh_sizes {
        let clique: Vec<Element> = (next..next + size as u32).collect();
        next += size as u32;
        out.push(clique);
    }
    out
}

/// Isomorphism key by brute force over all element relabelings; only for
/// universes of at most 9 elements.
pub fn canonical_key(instance: &Instance) -> Result<Vec<u32>> {
    let universe: Vec<Element> = instance.universe().iter().collect();
    let m = universe.len();
    if m > 9 {
        return Err(Error::InfeasibleScope(format!(
            "brute-force canonical key caps at 9 elements, got {m}"
        )));
    }
    let mut best: Option<Vec<u32>> = None;
    for perm in (0..m as u32).permutations(m) {
        let relabel = |x: Element| -> Element {
            let pos = universe.binary_search(&x).expect("element in universe");
            perm[pos]
        };
        let mut classes: Vec<Vec<Vec<Element>>> = Vec::with_capacity(instance.n());
        for class in instance.classes() {
            let mut cliques: Vec<Vec<Element>> = class
                .cliques()
                .iter()
                .map(|c| {
                    let mut q: Vec<Element> = c.iter().map(|&x| relabel(x)).collect();
                    q.sort_unstable();
                    q
                })
                .collect();
            cliques.sort();
            classes.push(cliques);
        }
        let key = encode_instance(&classes);
        if best.as_ref().is_none_or(|b| key < *b) {
            best = Some(key);
        }
    }
    Ok(best.expect("at least the identity relabeling"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn partitions_of_six() {
        let parts = partitions_desc(6);
        assert_eq!(parts.len(), 4); // 6, 4+2, 3+3, 2+2+2
        assert!(parts.contains(&vec![6]));
        assert!(parts.contains(&vec![4, 2]));
        assert!(parts.contains(&vec![3, 3]));
        assert!(parts.contains(&vec![2, 2, 2]));
        assert_eq!(partitions_desc(2), vec![vec![2]]);
        assert_eq!(partitions_desc(3), vec![vec![3]]);
        assert!(partitions_desc(5).len() == 2); // 5, 3+2
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(layout_automorphisms(&[2]).len(), 2);
        assert_eq!(layout_automorphisms(&[2, 2]).len(), 8); // 2! * 2 * 2
        assert_eq!(layout_automorphisms(&[3]).len(), 6);
        assert_eq!(layout_automorphisms(&[2, 2, 2]).len(), 48);
        assert_eq!(layout_automorphisms(&[3, 2]).len(), 12);
    }

    #[test]
    fn single_colour_counts_are_partition_counts() {
        let mut seen = Vec::new();
        let count = for_each_canonical_instance(1, 2, 6, &mut |inst| {
            seen.push(inst.clone());
        })
        .unwrap();
        // Partitions into parts >= 2 of 2..=6: 1+1+2+2+4 = 10.
        assert_eq!(count, 10);
        assert!(seen.iter().all(|i| i.validate().is_valid()));
    }

    #[test]
    fn two_colour_kernel_two_instances() {
        // Each colour one 2-clique: identical, sharing one element, disjoint.
        let mut seen = Vec::new();
        let count = for_each_canonical_instance(2, 2, 2, &mut |inst| {
            seen.push(inst.clone());
        })
        .unwrap();
        assert_eq!(count, 3, "{seen:?}");
    }

    #[test]
    fn enumeration_matches_brute_force_for_tiny_cases() {
        // Independent oracle: generate ALL labeled pairs of clique systems
        // on a fixed ground, dedupe by brute-force canonical key, compare.
        // Kernel 4 is excluded: its ground of 8 makes the 8! keys too slow.
        for k in 2..=3usize {
            let mut canonical = 0u64;
            for_each_canonical_instance(2, k, k, &mut |_| {
                canonical += 1;
            })
            .unwrap();
            let brute = brute_force_pair_count(k);
            assert_eq!(canonical, brute, "kernel {k}");
        }
    }

    #[test]
    fn enumeration_is_duplicate_free_for_two_colours() {
        for k in 2..=4usize {
            let mut keys: HashSet<Vec<u32>> = HashSet::new();
            let count = for_each_canonical_instance(2, k, k, &mut |inst| {
                keys.insert(canonical_key(inst).unwrap());
            })
            .unwrap();
            assert_eq!(
                count,
                keys.len() as u64,
                "kernel {k}: enumeration emitted an isomorphic duplicate"
            );
        }
    }

    /// Counts isomorphism classes of 2-colour instances with both kernels
    /// exactly `k` by generating every labeled pair on ground `0..2k` and
    /// deduplicating with the brute-force key.
    fn brute_force_pair_count(k: usize) -> u64 {
        let ground: Vec<Element> = (0..(2 * k) as u32).collect();
        let mut systems: Vec<Vec<Vec<Element>>> = Vec::new();
        subsets_of_size(&ground, k, &mut |support| {
            partitions_into_cliques(support, &mut |cliques| {
                systems.push(cliques.to_vec());
            });
        });
        let mut keys: HashSet<Vec<u32>> = HashSet::new();
        for a in &systems {
            for b in &systems {
                let inst = Instance::from_cliques(vec![a.clone(), b.clone()], false);
                // Skip labelings with gaps that RG would never produce; the
                // canonical key unifies them with gap-free ones anyway.
                keys.insert(canonical_key(&inst).unwrap());
            }
        }
        keys.len() as u64
    }

    fn subsets_of_size(pool: &[Element], k: usize, f: &mut dyn FnMut(&[Element])) {
        fn rec(
            pool: &[Element],
            k: usize,
            start: usize,
            acc: &mut Vec<Element>,
            f: &mut dyn FnMut(&[Element]),
        ) {
            if acc.len() == k {
                f(acc);
                return;
            }
            for i in start..pool.len() {
                acc.push(pool[i]);
                rec(pool, k, i + 1, acc, f);
                acc.pop();
            }
        }
        rec(pool, k, 0, &mut Vec::new(), f);
    }

    fn partitions_into_cliques(support: &[Element], f: &mut dyn FnMut(&[Vec<Element>])) {
        fn rec(rest: &[Element], acc: &mut Vec<Vec<Element>>, f: &mut dyn FnMut(&[Vec<Element>])) {
            if rest.is_empty() {
                f(acc);
                return;
            }
            let first = rest[0];
            let others = &rest[1..];
            // Choose the clique containing `first`: any subset of the rest.
            let m = others.len();
            for mask in 0..(1u32 << m) {
                let mut clique = vec![first];
                let mut remaining = Vec::new();
                for (i, &x) in others.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        clique.push(x);
                    } else {
                        remaining.push(x);
                    }
                }
                if clique.len() < 2 {
                    continue;
                }
                acc.push(clique);
                rec(&remaining, acc, f);
                acc.pop();
            }
        }
        rec(support, &mut Vec::new(), f);
    }
}
