//! Exhaustive minimal-kernel computation for one or two colours.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::json;
use crate::solve::enumerate::for_each_canonical_instance;
use crate::solve::exact::solve_exact_core;

#[derive(Debug, Clone)]
pub struct VRow {
    pub kernel: usize,
    pub canonical_instances: u64,
    /// First enumerated instance without a full rainbow matching, with an
    /// exhaustive absence certificate; `None` means every instance solves.
    pub counterexample: Option<Instance>,
}

impl VRow {
    pub fn all_solvable(&self) -> bool {
        self.counterexample.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct VTable {
    pub n: usize,
    pub max_kernel: usize,
    pub rows: Vec<VRow>,
    /// Smallest enumerated kernel size at which every canonical instance has
    /// a full rainbow matching.
    pub minimal_all_solvable: Option<usize>,
}

/// For each kernel size `k <= max_kernel`, enumerates every canonical
/// instance with `n` colours and kernels exactly `k`, and decides by
/// exhaustive search whether each has a rainbow matching of size `n`.
/// Only `n <= 2` is in scope; the search space beyond that is declared
/// infeasible rather than sampled.
pub fn compute_v_exhaustive(n: usize, max_kernel: usize) -> Result<VTable> {
    if n == 0 {
        return Err(Error::Parameter("need at least one colour".into()));
    }
    if n > 2 {
        return Err(Error::InfeasibleScope(format!(
            "exhaustive kernel search is limited to 2 colours, got {n}"
        )));
    }
    if max_kernel < 2 {
        return Err(Error::Parameter("max kernel must be at least 2".into()));
    }
    let mut rows = Vec::new();
    for kernel in 2..=max_kernel {
        let mut count = 0u64;
        let mut counterexample: Option<Instance> = None;
        for_each_canonical_instance(n, kernel, kernel, &mut |inst| {
            count += 1;
            if counterexample.is_none() {
                let outcome = solve_exact_core(inst, n, u64::MAX / 2, None);
                if outcome.is_exhaustive_absence() {
                    counterexample = Some(inst.clone());
                }
            }
        })?;
        rows.push(VRow {
            kernel,
            canonical_instances: count,
            counterexample,
        });
    }
    let minimal_all_solvable = rows.iter().find(|r| r.all_solvable()).map(|r| r.kernel);
    Ok(VTable {
        n,
        max_kernel,
        rows,
        minimal_all_solvable,
    })
}

#[derive(Serialize)]
struct VRowFile {
    kernel: usize,
    canonical_instances: u64,
    verdict: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<serde_json::Value>,
}

impl VTable {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct VTableFile {
            n: usize,
            max_kernel: usize,
            rows: Vec<VRowFile>,
            minimal_all_solvable: Option<usize>,
        }
        let file = VTableFile {
            n: self.n,
            max_kernel: self.max_kernel,
            rows: self
                .rows
                .iter()
                .map(|r| VRowFile {
                    kernel: r.kernel,
                    canonical_instances: r.canonical_instances,
                    verdict: if r.all_solvable() {
                        "all-solvable"
                    } else {
                        "counterexample-exists"
                    },
                    counterexample: r.counterexample.as_ref().map(|i| {
                        serde_json::from_str(&json::serialize_instance(i))
                            .expect("instance serializes to json")
                    }),
                })
                .collect(),
            minimal_all_solvable: self.minimal_all_solvable,
        };
        let mut out = serde_json::to_string_pretty(&file).expect("table serialization");
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_colour_minimal_kernel_is_two() {
        let table = compute_v_exhaustive(1, 4).unwrap();
        assert!(table.rows.iter().all(|r| r.all_solvable()));
        assert_eq!(table.minimal_all_solvable, Some(2));
    }

    #[test]
    fn two_colours_kernel_four_has_the_crossing_counterexample() {
        let table = compute_v_exhaustive(2, 4).unwrap();
        for row in &table.rows {
            assert!(!row.all_solvable(), "kernel {} unexpectedly solvable", row.kernel);
        }
        assert_eq!(table.minimal_all_solvable, None);
        let witness = table.rows[2].counterexample.as_ref().unwrap();
        assert_eq!(witness.n(), 2);
        for c in 0..2 {
            assert_eq!(witness.kernel(c).unwrap().len(), 4);
        }
    }

    #[test]
    fn three_colours_out_of_scope() {
        assert!(matches!(
            compute_v_exhaustive(3, 4),
            Err(Error::InfeasibleScope(_))
        ));
    }
}
