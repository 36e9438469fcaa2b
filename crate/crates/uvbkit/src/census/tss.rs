//! Totally symmetric sets of `UVB_n` built from the pure generators, and the
//! analysis backing the finite-image bound.
//!
//! A totally symmetric set must pairwise commute and realize every
//! permutation of itself by conjugation. Inside `UVB_n` the only conjugations
//! carrying λ generators to λ generators are the index relabelings
//! `λ_{i,j} ↦ λ_{s(i),s(j)}`, so the realizable permutations of a set `X` of
//! ordered pairs form exactly the image in `Sym(X)` of the setwise stabilizer
//! `{s ∈ S_n : s·X = X}`. The report states what that subgroup is rather than
//! asserting full symmetry; a shortfall is flagged, not hidden.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use serde::Serialize;

use super::CensusError;
use crate::perms::Permutation;

/// `2^{k-1} · k!`, the lower bound a size-k totally symmetric set of
/// finite-order elements forces on the order of a finite image. Exact.
pub fn km_bound(k: usize) -> BigUint {
    let mut out = BigUint::from(1u8);
    for m in 1..=k {
        out *= m;
    }
    if k > 0 {
        out <<= k - 1;
    }
    out
}

/// The i-th standard candidate set `A_i`: the i-th row of λ indices together
/// with the triangles below and above it chosen to avoid every couple.
/// `|A_i| = n(n-1)/2`.
pub fn build_a_i(i: usize, n: usize) -> Result<BTreeSet<(usize, usize)>, CensusError> {
    if n < 3 {
        return Err(CensusError::UnsupportedN(n, "the A_i sets need n >= 3"));
    }
    if i == 0 || i > n {
        return Err(CensusError::UnsupportedN(i, "row index out of range"));
    }
    let mut set = BTreeSet::new();
    for j in 1..=n {
        if j != i {
            set.insert((i, j));
        }
    }
    // Rows below i: all (j, k) with k < j, skipping k = i.
    for j in i + 1..=n {
        for k in 1..j {
            if k != i {
                set.insert((j, k));
            }
        }
    }
    // Rows above i: the full triangle on {1, …, i-1}.
    for s in 2..i {
        for t in 1..s {
            set.insert((s, t));
        }
    }
    debug_assert_eq!(set.len(), n * (n - 1) / 2);
    Ok(set)
}

/// Full analysis of a candidate totally symmetric set.
#[derive(Debug, Clone, Serialize)]
pub struct TotSymReport {
    pub n: usize,
    pub set: Vec<(usize, usize)>,
    /// True iff no couple `{(i,j),(j,i)}` is contained, which by the
    /// presentation is exactly pairwise commutation.
    pub commuting: bool,
    /// Setwise stabilizer `{s ∈ S_n : s·X = X}` in one-line notation.
    pub stabilizer: Vec<String>,
    /// Order of the induced permutation group on `X`.
    pub induced_order: usize,
    /// Whether the induced group is all of `Sym(X)`.
    pub full_symmetry: bool,
    /// `2^{|X|-1} · |X|!` as a decimal string (exact, arbitrary precision).
    pub km_bound: String,
    /// Set when the set commutes but conjugation realizes fewer than `|X|!`
    /// permutations — the finding the suite reports with evidence.
    pub flagged: bool,
}

/// Computes the stabilizer, the induced permutation group on `X`, and the
/// bound `2^{|X|-1}|X|!`.
pub fn analyze_totally_symmetric(
    x: &BTreeSet<(usize, usize)>,
    n: usize,
) -> Result<TotSymReport, CensusError> {
    if n == 0 || n > 8 {
        return Err(CensusError::UnsupportedN(n, "stabilizer scan supports 1 <= n <= 8"));
    }
    let elements: Vec<(usize, usize)> = x.iter().copied().collect();
    let commuting = elements.iter().all(|&(i, j)| !x.contains(&(j, i)));

    let mut stabilizer = Vec::new();
    let mut induced: BTreeSet<Vec<usize>> = BTreeSet::new();
    for s in Permutation::all(n) {
        let mapped: BTreeSet<(usize, usize)> =
            elements.iter().map(|&(i, j)| (s.apply(i), s.apply(j))).collect();
        if mapped == *x {
            // Record the permutation of X's elements this relabeling induces.
            let induced_perm: Vec<usize> = elements
                .iter()
                .map(|&(i, j)| {
                    let target = (s.apply(i), s.apply(j));
                    elements.iter().position(|&e| e == target).expect("setwise stabilizer")
                })
                .collect();
            induced.insert(induced_perm);
            stabilizer.push(s.to_string());
        }
    }
    let k = elements.len();
    let factorial: BigUint = {
        let mut out = BigUint::from(1u8);
        for m in 1..=k {
            out *= m;
        }
        out
    };
    let full_symmetry = BigUint::from(induced.len()) == factorial;
    Ok(TotSymReport {
        n,
        set: elements,
        commuting,
        stabilizer,
        induced_order: induced.len(),
        full_symmetry,
        km_bound: km_bound(k).to_string(),
        flagged: commuting && !full_symmetry,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uvp::ordered_pairs;

    #[test]
    fn a1_matches_the_worked_example() {
        // n = 5, i = 1.
        let set = build_a_i(1, 5).unwrap();
        let expected: BTreeSet<(usize, usize)> = [
            (1, 2),
            (1, 3),
            (1, 4),
            (1, 5),
            (5, 2),
            (5, 3),
            (5, 4),
            (4, 2),
            (4, 3),
            (3, 2),
        ]
        .into_iter()
        .collect();
        assert_eq!(set, expected);
        assert_eq!(set.len(), 10);
    }

    #[test]
    fn all_a_i_match_the_worked_examples_for_n5() {
        let expect = |rows: &[(usize, usize)]| -> BTreeSet<(usize, usize)> {
            rows.iter().copied().collect()
        };
        assert_eq!(
            build_a_i(2, 5).unwrap(),
            expect(&[
                (2, 1),
                (2, 3),
                (2, 4),
                (2, 5),
                (5, 1),
                (5, 3),
                (5, 4),
                (4, 1),
                (4, 3),
                (3, 1)
            ])
        );
        assert_eq!(
            build_a_i(3, 5).unwrap(),
            expect(&[
                (3, 1),
                (3, 2),
                (3, 4),
                (3, 5),
                (5, 1),
                (5, 2),
                (5, 4),
                (4, 1),
                (4, 2),
                (2, 1)
            ])
        );
        assert_eq!(
            build_a_i(4, 5).unwrap(),
            expect(&[
                (4, 1),
                (4, 2),
                (4, 3),
                (4, 5),
                (5, 1),
                (5, 2),
                (5, 3),
                (3, 1),
                (3, 2),
                (2, 1)
            ])
        );
        assert_eq!(
            build_a_i(5, 5).unwrap(),
            expect(&[
                (5, 1),
                (5, 2),
                (5, 3),
                (5, 4),
                (4, 1),
                (4, 2),
                (4, 3),
                (3, 1),
                (3, 2),
                (2, 1)
            ])
        );
    }

    #[test]
    fn a1_for_n3() {
        let set = build_a_i(1, 3).unwrap();
        let expected: BTreeSet<(usize, usize)> = [(1, 2), (1, 3), (3, 2)].into_iter().collect();
        assert_eq!(set, expected);
    }

    #[test]
    fn sizes_and_union() {
        for n in 3..=6 {
            let mut union = BTreeSet::new();
            let mut sets = Vec::new();
            for i in 1..=n {
                let set = build_a_i(i, n).unwrap();
                assert_eq!(set.len(), n * (n - 1) / 2, "i={i} n={n}");
                union.extend(set.iter().copied());
                sets.push(set);
            }
            let all: BTreeSet<(usize, usize)> = ordered_pairs(n).into_iter().collect();
            assert_eq!(union, all, "n={n}");
            for a in 0..sets.len() {
                for b in a + 1..sets.len() {
                    assert_ne!(sets[a], sets[b]);
                }
            }
            // The intersection graph is connected (at n = 3 two of the sets
            // are disjoint, but every set meets A_n).
            let last = &sets[n - 1];
            for set in &sets[..n - 1] {
                assert!(!set.is_disjoint(last), "n={n}");
            }
        }
    }

    #[test]
    fn commuting_means_no_couples() {
        for n in 3..=6 {
            for i in 1..=n {
                let set = build_a_i(i, n).unwrap();
                let report = analyze_totally_symmetric(&set, n).unwrap();
                assert!(report.commuting, "A_{i} at n={n}");
            }
        }
        let mut with_couple = BTreeSet::new();
        with_couple.insert((1, 2));
        with_couple.insert((2, 1));
        assert!(!analyze_totally_symmetric(&with_couple, 3).unwrap().commuting);
    }

    #[test]
    fn km_bound_values() {
        assert_eq!(km_bound(3).to_string(), "24");
        assert_eq!(km_bound(10).to_string(), "1857945600");
        assert_eq!(km_bound(1).to_string(), "1");
        // n = 6 gives k = 15; the value exceeds u32 range comfortably.
        assert_eq!(km_bound(15).to_string(), "21424936845312000");
    }

    #[test]
    fn singleton_is_fully_symmetric() {
        let mut x = BTreeSet::new();
        x.insert((1, 2));
        let report = analyze_totally_symmetric(&x, 3).unwrap();
        assert!(report.full_symmetry);
        assert!(!report.flagged);
        assert_eq!(report.km_bound, "1");
    }

    #[test]
    fn a1_at_n3_has_trivial_stabilizer() {
        let set = build_a_i(1, 3).unwrap();
        let report = analyze_totally_symmetric(&set, 3).unwrap();
        assert_eq!(report.stabilizer, vec!["[1,2,3]".to_string()]);
        assert_eq!(report.induced_order, 1);
        assert!(!report.full_symmetry);
        assert!(report.flagged);
    }

    #[test]
    fn induced_order_divides_stabilizer_scan() {
        for n in 3..=5 {
            for i in 1..=n {
                let set = build_a_i(i, n).unwrap();
                let report = analyze_totally_symmetric(&set, n).unwrap();
                assert!(report.induced_order <= report.stabilizer.len());
                // The induced group can never beat n! in size.
                let mut nf = 1usize;
                for m in 1..=n {
                    nf *= m;
                }
                assert!(report.induced_order <= nf);
            }
        }
    }
}
