//! Canonical forms in the unrestricted virtual pure braid group `UVP_n`.
//!
//! `UVP_n` is the direct product of `n(n-1)/2` rank-2 free groups, one for
//! each unordered pair of strands `{i, j}`: the factor is `⟨λ_{i,j}, λ_{j,i}⟩`
//! and generators in different factors commute. An element is therefore a
//! finite map from pairs to nonempty reduced factor words — a canonical form,
//! which makes equality (and so the word problem) a structural comparison.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::words::{subgroup_membership, F2Gen, FreeWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UvpError {
    #[error("strand counts differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("lambda generator needs distinct indices, got ({0},{0})")]
    EqualIndices(usize),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("generator-image table is missing the image of l{0},{1}")]
    MissingImage(usize, usize),
    #[error("endomorphism spec has not passed its relator check")]
    UncheckedSpec,
}

pub(crate) fn check_pair(i: usize, j: usize, n: usize) -> Result<(), UvpError> {
    if i == j {
        return Err(UvpError::EqualIndices(i));
    }
    for idx in [i, j] {
        if idx == 0 || idx > n {
            return Err(UvpError::IndexOutOfRange { index: idx, n });
        }
    }
    Ok(())
}

/// Orients an ordered pair: the factor key `(min, max)` plus the letter that
/// encodes `λ_{i,j}` in that factor's `{A, B}` alphabet.
pub(crate) fn orient(i: usize, j: usize) -> ((usize, usize), F2Gen) {
    if i < j {
        ((i, j), F2Gen::A)
    } else {
        ((j, i), F2Gen::B)
    }
}

/// An element of `UVP_n` in canonical form. Factors absent from the map are
/// the identity; stored factor words are freely reduced and nonempty.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UvpElement {
    n: usize,
    factors: BTreeMap<(usize, usize), FreeWord<F2Gen>>,
}

impl UvpElement {
    pub fn identity(n: usize) -> Self {
        UvpElement { n, factors: BTreeMap::new() }
    }

    /// The generator `λ_{i,j}`.
    pub fn generator(i: usize, j: usize, n: usize) -> Result<Self, UvpError> {
        Self::generator_power(i, j, 1, n)
    }

    /// `λ_{i,j}^e`; `e = 0` yields the identity.
    pub fn generator_power(i: usize, j: usize, e: i64, n: usize) -> Result<Self, UvpError> {
        check_pair(i, j, n)?;
        let mut factors = BTreeMap::new();
        if e != 0 {
            let (key, letter) = orient(i, j);
            factors.insert(key, FreeWord::from_runs([(letter, e)]));
        }
        Ok(UvpElement { n, factors })
    }

    /// Builds an element from one factor word. Empty words are allowed and
    /// produce the identity.
    pub fn from_factor(
        lo: usize,
        hi: usize,
        word: FreeWord<F2Gen>,
        n: usize,
    ) -> Result<Self, UvpError> {
        check_pair(lo, hi, n)?;
        assert!(lo < hi, "factor key must be ordered (min, max)");
        let mut factors = BTreeMap::new();
        if !word.is_identity() {
            factors.insert((lo, hi), word);
        }
        Ok(UvpElement { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &BTreeMap<(usize, usize), FreeWord<F2Gen>> {
        &self.factors
    }

    /// The word of the `{lo, hi}` factor; identity when the factor is absent.
    pub fn factor_word(&self, lo: usize, hi: usize) -> FreeWord<F2Gen> {
        self.factors.get(&(lo, hi)).cloned().unwrap_or_default()
    }

    pub fn is_identity(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total letter count across all factors.
    pub fn letter_len(&self) -> usize {
        self.factors.values().map(|w| w.letter_len()).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "strand counts differ in uvp multiply");
        let mut factors = self.factors.clone();
        for (key, word) in &other.factors {
            match factors.get_mut(key) {
                Some(existing) => {
                    let product = existing.mul(word);
                    if product.is_identity() {
                        factors.remove(key);
                    } else {
                        *existing = product;
                    }
                }
                None => {
                    factors.insert(*key, word.clone());
                }
            }
        }
        UvpElement { n: self.n, factors }
    }

    pub fn inverse(&self) -> Self {
        UvpElement {
            n: self.n,
            factors: self.factors.iter().map(|(k, w)| (*k, w.inverse())).collect(),
        }
    }

    /// Exponent sums per ordered pair: the image in the free abelian group of
    /// rank `n(n-1)`.
    pub fn abelianize(&self) -> AbelianVector {
        let mut vec = AbelianVector::zero(self.n);
        for (&(lo, hi), word) in &self.factors {
            for (sym, sum) in word.exponent_sums() {
                let (i, j) = match sym {
                    F2Gen::A => (lo, hi),
                    F2Gen::B => (hi, lo),
                };
                vec.entries[pair_index(i, j, self.n)] += sum;
            }
        }
        vec
    }
}

impl fmt::Display for UvpElement {
    /// Product of λ tokens in the word grammar, factors in ascending key
    /// order. The identity prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (&(lo, hi), word) in &self.factors {
            for &(sym, e) in word.runs() {
                if !first {
                    write!(f, " ")?;
                }
                first = false;
                let (i, j) = match sym {
                    F2Gen::A => (lo, hi),
                    F2Gen::B => (hi, lo),
                };
                if e == 1 {
                    write!(f, "l{i},{j}")?;
                } else {
                    write!(f, "l{i},{j}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Index of the ordered pair `(i, j)` in the lexicographic enumeration of all
/// `n(n-1)` ordered pairs with distinct entries.
pub fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i != j && i >= 1 && j >= 1 && i <= n && j <= n);
    (i - 1) * (n - 1) + (j - 1) - usize::from(j > i)
}

/// All ordered pairs `(i, j)`, `i ≠ j`, in the `pair_index` order.
pub fn ordered_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1));
    for i in 1..=n {
        for j in 1..=n {
            if i != j {
                out.push((i, j));
            }
        }
    }
    out
}

/// Image of an element in the abelianization `Z^{n(n-1)}` of `UVP_n`, one
/// exponent sum per ordered pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianVector {
    n: usize,
    entries: Vec<i64>,
}

impl AbelianVector {
    pub fn zero(n: usize) -> Self {
        AbelianVector { n, entries: vec![0; n * (n - 1)] }
    }

    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.entries[pair_index(i, j, self.n)]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        AbelianVector {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
        }
    }
}

/// Applies a generator-image table homomorphically: every `λ_{i,j}` letter of
/// `x` is replaced by its image. Only well defined when the images commute
/// where the presentation demands it — see [`images_satisfy_relations`].
pub fn apply_generator_images(
    images: &BTreeMap<(usize, usize), UvpElement>,
    x: &UvpElement,
) -> Result<UvpElement, UvpError> {
    let n = x.n();
    let mut out = UvpElement::identity(n);
    for (&(lo, hi), word) in x.factors() {
        for &(sym, e) in word.runs() {
            let (i, j) = match sym {
                F2Gen::A => (lo, hi),
                F2Gen::B => (hi, lo),
            };
            let image = images.get(&(i, j)).ok_or(UvpError::MissingImage(i, j))?;
            out = out.mul(&image.pow(e));
        }
    }
    Ok(out)
}

impl UvpElement {
    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = UvpElement::identity(self.n);
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }
}

/// Checks that a generator-image table extends to an endomorphism of
/// `UVP_n`: images of every pair of generators other than the couples
/// `{λ_{i,j}, λ_{j,i}}` must commute. This is the full relator set of the
/// presentation, so the check is exact.
pub fn images_satisfy_relations(
    images: &BTreeMap<(usize, usize), UvpElement>,
    n: usize,
) -> Result<bool, UvpError> {
    let pairs = ordered_pairs(n);
    for (idx, &(i, j)) in pairs.iter().enumerate() {
        images.get(&(i, j)).ok_or(UvpError::MissingImage(i, j))?;
        for &(k, l) in &pairs[idx + 1..] {
            if (k, l) == (j, i) {
                continue; // the non-commuting couple
            }
            let a = &images[&(i, j)];
            let b = images.get(&(k, l)).ok_or(UvpError::MissingImage(k, l))?;
            if a.mul(b) != b.mul(a) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Injectivity certificate for an endomorphism of `F_2 = ⟨A, B⟩` given by
/// generator images: injective iff the images do not commute. Two-generator
/// subgroups of free groups are free, so non-commuting images generate a
/// rank-2 free subgroup and the induced surjection onto it is an isomorphism.
pub fn f2_endo_injective(image_a: &FreeWord<F2Gen>, image_b: &FreeWord<F2Gen>) -> bool {
    !image_a.commutator(image_b).is_identity()
}

/// Surjectivity certificate: both generators must lie in the subgroup the
/// images generate, decided by Stallings folding.
pub fn f2_endo_surjective(image_a: &FreeWord<F2Gen>, image_b: &FreeWord<F2Gen>) -> bool {
    let gens = [image_a.clone(), image_b.clone()];
    subgroup_membership(&gens, &FreeWord::generator(F2Gen::A))
        && subgroup_membership(&gens, &FreeWord::generator(F2Gen::B))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn lam(i: usize, j: usize, n: usize) -> UvpElement {
        UvpElement::generator(i, j, n).unwrap()
    }

    pub(crate) fn random_uvp(rng: &mut SplitMix64, n: usize, len: usize) -> UvpElement {
        let mut x = UvpElement::identity(n);
        for _ in 0..len {
            let i = 1 + rng.below(n as u64) as usize;
            let mut j = 1 + rng.below(n as u64) as usize;
            if j == i {
                j = if i == n { 1 } else { i + 1 };
            }
            let e = if rng.below(2) == 0 { 1 } else { -1 };
            x = x.mul(&UvpElement::generator_power(i, j, e, n).unwrap());
        }
        x
    }

    #[test]
    fn commutation_structure() {
        let n = 4;
        // Distinct factors commute.
        assert_eq!(
            lam(1, 2, n).mul(&lam(3, 4, n)),
            lam(3, 4, n).mul(&lam(1, 2, n))
        );
        // A couple does not.
        assert_ne!(
            lam(1, 2, n).mul(&lam(2, 1, n)),
            lam(2, 1, n).mul(&lam(1, 2, n))
        );
    }

    #[test]
    fn inverse_law_randomized() {
        let mut rng = SplitMix64::new(0x1111);
        for _ in 0..500 {
            let n = 2 + rng.below(4) as usize;
            let len = rng.below(8) as usize;
            let x = random_uvp(&mut rng, n, len);
            assert!(x.mul(&x.inverse()).is_identity());
            assert_eq!(x.inverse().inverse(), x);
        }
    }

    #[test]
    fn canonical_form_is_order_independent() {
        let mut rng = SplitMix64::new(0x2222);
        for _ in 0..300 {
            let n = 3 + rng.below(3) as usize;
            // Multiply commuting generators in two different orders.
            let a = lam(1, 2, n);
            let b = lam(2, 3, n);
            let c = lam(1, 3, n);
            let left = a.mul(&b).mul(&c);
            let right = c.mul(&a).mul(&b);
            assert_eq!(left, right);
        }
    }

    #[test]
    fn degenerate_generator_rejected() {
        assert_eq!(UvpElement::generator(2, 2, 4), Err(UvpError::EqualIndices(2)));
        assert!(matches!(
            UvpElement::generator(1, 5, 4),
            Err(UvpError::IndexOutOfRange { index: 5, n: 4 })
        ));
    }

    #[test]
    fn abelianize_examples() {
        let n = 3;
        // λ_{1,2} λ_{2,1} λ_{1,2}^{-1}: conjugation vanishes.
        let x = lam(1, 2, n).mul(&lam(2, 1, n)).mul(&lam(1, 2, n).inverse());
        let v = x.abelianize();
        assert_eq!(v.entry(2, 1), 1);
        assert_eq!(v.entries().iter().map(|e| e.abs()).sum::<i64>(), 1);

        assert!(UvpElement::identity(n).abelianize().is_zero());

        let y = UvpElement::generator_power(1, 3, 2, n)
            .unwrap()
            .mul(&UvpElement::generator_power(3, 1, -1, n).unwrap());
        let vy = y.abelianize();
        assert_eq!(vy.entry(1, 3), 2);
        assert_eq!(vy.entry(3, 1), -1);
    }

    #[test]
    fn abelianize_is_a_homomorphism() {
        let mut rng = SplitMix64::new(0x3333);
        for _ in 0..500 {
            let n = 2 + rng.below(4) as usize;
            let len = rng.below(6) as usize;
            let x = random_uvp(&mut rng, n, len);
            let len_y = rng.below(6) as usize;
            let y = random_uvp(&mut rng, n, len_y);
            assert_eq!(x.mul(&y).abelianize(), x.abelianize().add(&y.abelianize()));
        }
    }

    #[test]
    fn identity_images_are_a_valid_spec() {
        let n = 3;
        let images: BTreeMap<_, _> = ordered_pairs(n)
            .into_iter()
            .map(|(i, j)| ((i, j), lam(i, j, n)))
            .collect();
        assert!(images_satisfy_relations(&images, n).unwrap());
        let mut rng = SplitMix64::new(0x4444);
        for _ in 0..100 {
            let len = rng.below(6) as usize;
            let x = random_uvp(&mut rng, n, len);
            assert_eq!(apply_generator_images(&images, &x).unwrap(), x);
        }
    }

    #[test]
    fn bad_spec_fails_commutation() {
        // λ_{1,2} ↦ λ_{3,4}, everything else fixed: the image of λ_{1,2}
        // must commute with the image of λ_{4,3} but does not.
        let n = 4;
        let mut images: BTreeMap<_, _> = ordered_pairs(n)
            .into_iter()
            .map(|(i, j)| ((i, j), lam(i, j, n)))
            .collect();
        images.insert((1, 2), lam(3, 4, n));
        assert!(!images_satisfy_relations(&images, n).unwrap());
    }

    #[test]
    fn center_is_trivial_at_desk_scale() {
        // All elements of letter length ≤ 4 for n = 2 and n = 3: only the
        // identity commutes with every generator.
        for n in [2usize, 3] {
            let gens: Vec<UvpElement> =
                ordered_pairs(n).into_iter().map(|(i, j)| lam(i, j, n)).collect();
            let mut seen: std::collections::BTreeSet<UvpElement> =
                [UvpElement::identity(n)].into();
            let mut frontier: Vec<UvpElement> = seen.iter().cloned().collect();
            for _ in 0..4 {
                let mut next = Vec::new();
                for x in &frontier {
                    for g in &gens {
                        for y in [x.mul(g), x.mul(&g.inverse())] {
                            if seen.insert(y.clone()) {
                                next.push(y);
                            }
                        }
                    }
                }
                frontier = next;
            }
            for x in &seen {
                let commutes = gens.iter().all(|g| x.mul(g) == g.mul(x));
                assert_eq!(commutes, x.is_identity(), "n={n}: non-identity {x} centralizes");
            }
        }
    }

    #[test]
    fn f2_certificates() {
        use crate::words::F2Gen::{A, B};
        let a = FreeWord::generator(A);
        let b = FreeWord::generator(B);
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        assert!(f2_endo_injective(&ab, &ba));
        assert!(!f2_endo_injective(&a, &a.pow(2)));
        assert!(f2_endo_injective(&a, &b));
        assert!(!f2_endo_surjective(&ab, &ba));
        assert!(f2_endo_surjective(&a, &b));
        assert!(f2_endo_surjective(&b, &a));
    }

    #[test]
    fn display_ascending_factor_order() {
        let n = 4;
        let x = lam(3, 4, n)
            .mul(&lam(1, 2, n))
            .mul(&UvpElement::generator_power(2, 1, -1, n).unwrap());
        assert_eq!(x.to_string(), "l1,2 l2,1^-1 l3,4");
        assert_eq!(UvpElement::identity(n).to_string(), "1");
    }

    #[test]
    fn pair_index_is_a_bijection() {
        for n in 2..=6 {
            let mut seen = vec![false; n * (n - 1)];
            for (i, j) in ordered_pairs(n) {
                let idx = pair_index(i, j, n);
                assert!(!seen[idx]);
                seen[idx] = true;
            }
            assert!(seen.iter().all(|&s| s));
        }
    }
}
