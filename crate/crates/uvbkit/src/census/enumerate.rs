//! Depth-first enumeration of homomorphisms from a finite presentation into
//! a finite group table.
//!
//! Generators are assigned in the fixed order ρ₁,…,ρ_{n-1}, σ₁,…,σ_{n-1};
//! assigning ρ first lets the involution and Coxeter relators prune hardest.
//! A relator is checked as soon as its last-mentioned generator gets an
//! image. The search is exhaustive: output is the complete, duplicate-free,
//! lexicographically ordered list of relator-satisfying assignments.
//!
//! Parallel runs shard the search on the first generator's image and merge
//! shards in image order, so any worker count produces byte-identical
//! results. The node budget counts assignments tried across all workers; on
//! overrun the whole run fails rather than returning partial output.

use serde::Serialize;

use super::table::FiniteGroupTable;
use super::CensusError;
use crate::uvb::PresentationTable;
use crate::words::Gen;

/// Default DFS node budget; override per run or with `UVBKIT_BUDGET`.
pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone)]
pub struct EnumOptions {
    pub budget: u64,
    pub workers: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { budget: DEFAULT_NODE_BUDGET, workers: 1 }
    }
}

/// One homomorphism: an image id per presentation generator, in the
/// presentation's generator order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct HomImage {
    pub images: Vec<u16>,
}

/// A relator side compiled to generator indices.
type CompiledSide = Vec<(usize, i64)>;

struct CompiledRelator {
    lhs: CompiledSide,
    rhs: CompiledSide,
}

fn compile(pres: &PresentationTable) -> (usize, Vec<Vec<CompiledRelator>>) {
    let gens = pres.generators();
    let gen_index = |g: Gen| gens.iter().position(|&h| h == g).expect("generator in list");
    let mut by_depth: Vec<Vec<CompiledRelator>> = (0..gens.len()).map(|_| Vec::new()).collect();
    for rel in &pres.relators {
        let side = |letters: &[crate::words::Letter]| -> CompiledSide {
            letters.iter().map(|l| (gen_index(l.gen), l.exp)).collect()
        };
        let lhs = side(&rel.lhs);
        let rhs = side(&rel.rhs);
        let max_gen =
            lhs.iter().chain(rhs.iter()).map(|&(g, _)| g).max().expect("nonempty relator");
        by_depth[max_gen].push(CompiledRelator { lhs, rhs });
    }
    (gens.len(), by_depth)
}

fn eval_side(side: &CompiledSide, assignment: &[u16], table: &FiniteGroupTable) -> usize {
    let mut out = 0usize;
    for &(gen, exp) in side {
        out = table.mul(out, table.pow(assignment[gen] as usize, exp));
    }
    out
}

struct Dfs<'a> {
    table: &'a FiniteGroupTable,
    by_depth: &'a [Vec<CompiledRelator>],
    gen_count: usize,
    budget: u64,
    nodes: u64,
    out: Vec<HomImage>,
}

impl Dfs<'_> {
    fn run(&mut self, assignment: &mut Vec<u16>) -> Result<(), CensusError> {
        let depth = assignment.len();
        if depth == self.gen_count {
            self.out.push(HomImage { images: assignment.clone() });
            return Ok(());
        }
        for image in 0..self.table.order() as u16 {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(CensusError::BudgetExceeded {
                    budget: self.budget,
                    visited: self.nodes,
                });
            }
            assignment.push(image);
            let consistent = self.by_depth[depth].iter().all(|rel| {
                eval_side(&rel.lhs, assignment, self.table)
                    == eval_side(&rel.rhs, assignment, self.table)
            });
            if consistent {
                self.run(assignment)?;
            }
            assignment.pop();
        }
        Ok(())
    }
}

/// Census result: the homomorphism list plus the search-node count (the
/// count is worker-count invariant).
#[derive(Debug, Clone)]
pub struct EnumOutcome {
    pub homs: Vec<HomImage>,
    pub nodes: u64,
}

/// Enumerates every homomorphism `presentation → target`. Complete and
/// deterministic; parallelism never changes the output.
pub fn enumerate_homs(
    pres: &PresentationTable,
    target: &FiniteGroupTable,
    opts: &EnumOptions,
) -> Result<Vec<HomImage>, CensusError> {
    enumerate_homs_counted(pres, target, opts).map(|outcome| outcome.homs)
}

/// As [`enumerate_homs`], also reporting how many assignments were tried.
pub fn enumerate_homs_counted(
    pres: &PresentationTable,
    target: &FiniteGroupTable,
    opts: &EnumOptions,
) -> Result<EnumOutcome, CensusError> {
    let (gen_count, by_depth) = compile(pres);
    if gen_count == 0 {
        // A presentation with no generators has exactly the trivial hom.
        return Ok(EnumOutcome { homs: vec![HomImage { images: Vec::new() }], nodes: 0 });
    }
    let workers = opts.workers.max(1);
    if workers == 1 {
        let mut dfs = Dfs {
            table: target,
            by_depth: &by_depth,
            gen_count,
            budget: opts.budget,
            nodes: 0,
            out: Vec::new(),
        };
        dfs.run(&mut Vec::with_capacity(gen_count))?;
        return Ok(EnumOutcome { homs: dfs.out, nodes: dfs.nodes });
    }

    // Shard on the first generator's image: contiguous id ranges per worker.
    let order = target.order();
    let chunk = order.div_ceil(workers);
    let shards: Vec<std::ops::Range<usize>> = (0..workers)
        .map(|w| (w * chunk).min(order)..((w + 1) * chunk).min(order))
        .filter(|r| !r.is_empty())
        .collect();
    let results: Vec<Result<(Vec<HomImage>, u64), CensusError>> =
        std::thread::scope(|scope| {
            let handles: Vec<_> = shards
                .iter()
                .map(|range| {
                    let range = range.clone();
                    let by_depth = &by_depth;
                    scope.spawn(move || {
                        let mut dfs = Dfs {
                            table: target,
                            by_depth,
                            gen_count,
                            budget: opts.budget,
                            nodes: 0,
                            out: Vec::new(),
                        };
                        let mut assignment = Vec::with_capacity(gen_count);
                        for image in range {
                            dfs.nodes += 1;
                            if dfs.nodes > dfs.budget {
                                return Err(CensusError::BudgetExceeded {
                                    budget: dfs.budget,
                                    visited: dfs.nodes,
                                });
                            }
                            assignment.push(image as u16);
                            let consistent = dfs.by_depth[0].iter().all(|rel| {
                                eval_side(&rel.lhs, &assignment, dfs.table)
                                    == eval_side(&rel.rhs, &assignment, dfs.table)
                            });
                            if consistent {
                                dfs.run(&mut assignment)?;
                            }
                            assignment.pop();
                        }
                        Ok((dfs.out, dfs.nodes))
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        });

    let mut out = Vec::new();
    let mut total_nodes = 0u64;
    for result in results {
        let (shard, nodes) = result?;
        out.extend(shard);
        total_nodes += nodes;
    }
    // The budget is a global cap: the summed node count decides, so the
    // verdict matches a single-worker run.
    if total_nodes > opts.budget {
        return Err(CensusError::BudgetExceeded { budget: opts.budget, visited: total_nodes });
    }
    Ok(EnumOutcome { homs: out, nodes: total_nodes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::table::{cyclic_table, symmetric_group_table};
    use crate::uvb::PresentationTable;

    /// Oracle: scan the full product of assignments and keep the ones
    /// satisfying every relator. Exponential, only for tiny cases.
    fn naive_scan(pres: &PresentationTable, target: &FiniteGroupTable) -> Vec<HomImage> {
        let gens = pres.generators();
        let mut out = Vec::new();
        let mut assignment = vec![0u16; gens.len()];
        loop {
            let ok = pres.relators.iter().all(|rel| {
                let eval = |letters: &[crate::words::Letter]| {
                    let mut acc = 0usize;
                    for l in letters {
                        let gi = gens.iter().position(|&g| g == l.gen).unwrap();
                        acc = target.mul(acc, target.pow(assignment[gi] as usize, l.exp));
                    }
                    acc
                };
                eval(&rel.lhs) == eval(&rel.rhs)
            });
            if ok {
                out.push(HomImage { images: assignment.clone() });
            }
            // Odometer increment, most significant at index 0 so the output
            // matches DFS order.
            let mut k = assignment.len();
            loop {
                if k == 0 {
                    return out;
                }
                k -= 1;
                if (assignment[k] as usize) + 1 < target.order() {
                    assignment[k] += 1;
                    assignment[k + 1..].fill(0);
                    break;
                }
            }
        }
    }

    #[test]
    fn uvb2_to_s2_has_exactly_four() {
        let pres = PresentationTable::uvb(2);
        let s2 = symmetric_group_table(2).unwrap();
        let homs = enumerate_homs(&pres, &s2.table, &EnumOptions::default()).unwrap();
        assert_eq!(homs.len(), 4);
        assert_eq!(homs, naive_scan(&pres, &s2.table));
    }

    #[test]
    fn uvb3_to_s3_matches_naive_scan() {
        let pres = PresentationTable::uvb(3);
        let s3 = symmetric_group_table(3).unwrap();
        let homs = enumerate_homs(&pres, &s3.table, &EnumOptions::default()).unwrap();
        assert_eq!(homs, naive_scan(&pres, &s3.table));
    }

    #[test]
    fn uvb3_to_z6_matches_naive_scan() {
        let pres = PresentationTable::uvb(3);
        let z6 = cyclic_table(6).unwrap();
        let homs = enumerate_homs(&pres, &z6, &EnumOptions::default()).unwrap();
        assert_eq!(homs, naive_scan(&pres, &z6));
        // In an abelian target the braid relators force common images and
        // ρ² = 1 restricts ρ to the two square roots of 0 in Z_6.
        assert_eq!(homs.len(), 12);
    }

    #[test]
    fn sn_presentation_images_are_involutions_with_braid() {
        let pres = PresentationTable::symmetric(5);
        let s5 = symmetric_group_table(5).unwrap();
        let homs = enumerate_homs(&pres, &s5.table, &EnumOptions::default()).unwrap();
        for hom in &homs {
            for &img in &hom.images {
                let ord = s5.table.element_order(img as usize);
                assert!(ord == 1 || ord == 2);
            }
            for w in hom.images.windows(2) {
                let (a, b) = (w[0] as usize, w[1] as usize);
                let aba = s5.table.mul(s5.table.mul(a, b), a);
                let bab = s5.table.mul(s5.table.mul(b, a), b);
                assert_eq!(aba, bab);
            }
        }
    }

    #[test]
    fn s3_presentation_to_s4_matches_naive_scan() {
        let pres = PresentationTable::symmetric(3);
        let s4 = symmetric_group_table(4).unwrap();
        let homs = enumerate_homs(&pres, &s4.table, &EnumOptions::default()).unwrap();
        assert_eq!(homs, naive_scan(&pres, &s4.table));
    }

    #[test]
    fn workers_do_not_change_output() {
        let pres = PresentationTable::uvb(3);
        let s3 = symmetric_group_table(3).unwrap();
        let serial = enumerate_homs(&pres, &s3.table, &EnumOptions::default()).unwrap();
        for workers in [2, 3, 8] {
            let opts = EnumOptions { workers, ..Default::default() };
            assert_eq!(enumerate_homs(&pres, &s3.table, &opts).unwrap(), serial);
        }
    }

    #[test]
    fn budget_overrun_is_a_hard_failure() {
        let pres = PresentationTable::uvb(3);
        let s3 = symmetric_group_table(3).unwrap();
        let opts = EnumOptions { budget: 10, workers: 1 };
        assert!(matches!(
            enumerate_homs(&pres, &s3.table, &opts),
            Err(CensusError::BudgetExceeded { .. })
        ));
        let opts = EnumOptions { budget: 10, workers: 4 };
        assert!(matches!(
            enumerate_homs(&pres, &s3.table, &opts),
            Err(CensusError::BudgetExceeded { .. })
        ));
    }
}
