//! Exact arithmetic in symmetric groups `S_n`: composition, conjugacy types,
//! centralizers by exhaustive scan, and the construction of the exceptional
//! outer automorphism of `S_6`.
//!
//! Conventions, fixed crate-wide: permutations act on points `1..=n`, the
//! composition is a left action `(p ∘ q)(x) = p(q(x))`, and `s_i` denotes the
//! adjacent transposition `(i, i+1)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images {0:?} are not a bijection of 1..={1}")]
    NotABijection(Vec<usize>, usize),
    #[error("index {index} out of range for degree {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("malformed permutation text {0:?}")]
    MalformedText(String),
    #[error("exhaustive scan limited to degree ≤ {limit}, got {n}")]
    DegreeTooLarge { n: usize, limit: usize },
}

/// An element of `S_n` in one-line notation: `images[k]` is the image of the
/// point `k + 1`, and the values range over `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation { images: (1..=n).collect() }
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(PermError::NotABijection(images.clone(), n));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation { images })
    }

    /// The adjacent transposition `s_i = (i, i+1)` in `S_n`.
    pub fn transposition(i: usize, n: usize) -> Result<Self, PermError> {
        if i == 0 || i + 1 > n {
            return Err(PermError::IndexOutOfRange { index: i, n });
        }
        let mut images: Vec<usize> = (1..=n).collect();
        images.swap(i - 1, i);
        Ok(Permutation { images })
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    /// Image of the point `i ∈ 1..=n`.
    pub fn apply(&self, i: usize) -> usize {
        self.images[i - 1]
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "degree mismatch in compose");
        Permutation { images: (1..=self.degree()).map(|x| self.apply(other.apply(x))).collect() }
    }

    pub fn inverse(&self) -> Self {
        let mut images = vec![0; self.degree()];
        for (k, &v) in self.images.iter().enumerate() {
            images[v - 1] = k + 1;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(k, &v)| v == k + 1)
    }

    /// Cycle type as a partition of `n`, largest part first.
    pub fn cycle_type(&self) -> Vec<usize> {
        let n = self.degree();
        let mut seen = vec![false; n];
        let mut parts = Vec::new();
        for start in 1..=n {
            if seen[start - 1] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            loop {
                seen[x - 1] = true;
                len += 1;
                x = self.apply(x);
                if x == start {
                    break;
                }
            }
            parts.push(len);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts
    }

    /// 0 for even permutations, 1 for odd.
    pub fn parity(&self) -> u8 {
        let transpositions: usize =
            self.cycle_type().iter().map(|&len| len - 1).sum();
        (transpositions % 2) as u8
    }

    pub fn order(&self) -> usize {
        self.cycle_type().iter().fold(1, |acc, &len| acc / gcd(acc, len) * len)
    }

    /// Writes `self` as a product of adjacent transpositions, outermost
    /// first: `self = s_{k1} ∘ s_{k2} ∘ … ∘ s_{km}`.
    pub fn adjacent_transposition_decomposition(&self) -> Vec<usize> {
        let mut arr = self.images.clone();
        let mut swaps = Vec::new();
        // Bubble sort to the identity; each swap multiplies by s_k on the
        // right, so the decomposition is the reversed swap list.
        loop {
            let mut done = true;
            for k in 0..arr.len().saturating_sub(1) {
                if arr[k] > arr[k + 1] {
                    arr.swap(k, k + 1);
                    swaps.push(k + 1);
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        swaps.reverse();
        swaps
    }

    /// All of `S_n` in lexicographic order of one-line notation. The identity
    /// comes first.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (1..=n).collect();
        loop {
            out.push(Permutation { images: current.clone() });
            if !next_lex(&mut current) {
                break;
            }
        }
        out
    }

    /// Parses either one-line notation `[2,1,3]` or cycle notation
    /// `(1 2)(3 4)`; the latter is accepted in CLI flags.
    pub fn parse(text: &str, n: usize) -> Result<Self, PermError> {
        let trimmed = text.trim();
        if trimmed.starts_with('[') {
            let inner = trimmed
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| PermError::MalformedText(text.to_string()))?;
            let images: Vec<usize> = inner
                .split(',')
                .map(|p| p.trim().parse::<usize>())
                .collect::<Result<_, _>>()
                .map_err(|_| PermError::MalformedText(text.to_string()))?;
            if images.len() != n {
                return Err(PermError::DegreeMismatch(images.len(), n));
            }
            Self::from_images(images)
        } else if trimmed.starts_with('(') {
            let mut perm = Permutation::identity(n);
            for part in trimmed.split(')') {
                let part = part.trim();
                if part.is_empty() {
                    continue;
                }
                let body = part
                    .strip_prefix('(')
                    .ok_or_else(|| PermError::MalformedText(text.to_string()))?;
                let points: Vec<usize> = body
                    .split_whitespace()
                    .map(|p| p.parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| PermError::MalformedText(text.to_string()))?;
                for &p in &points {
                    if p == 0 || p > n {
                        return Err(PermError::IndexOutOfRange { index: p, n });
                    }
                }
                let mut images: Vec<usize> = (1..=n).collect();
                for w in 0..points.len() {
                    images[points[w] - 1] = points[(w + 1) % points.len()];
                }
                let cycle = Self::from_images(images)?;
                perm = cycle.compose(&perm);
            }
            Ok(perm)
        } else {
            Err(PermError::MalformedText(text.to_string()))
        }
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (k, v) in self.images.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

fn next_lex(arr: &mut [usize]) -> bool {
    let n = arr.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

const CENTRALIZER_SCAN_LIMIT: usize = 10;

/// The centralizer `{g ∈ S_n : gh = hg for all listed h}`, by exhaustive
/// scan. Returns elements in lexicographic order.
pub fn centralizer(generators: &[Permutation], n: usize) -> Result<Vec<Permutation>, PermError> {
    if n > CENTRALIZER_SCAN_LIMIT {
        return Err(PermError::DegreeTooLarge { n, limit: CENTRALIZER_SCAN_LIMIT });
    }
    for g in generators {
        if g.degree() != n {
            return Err(PermError::DegreeMismatch(g.degree(), n));
        }
    }
    Ok(Permutation::all(n)
        .into_iter()
        .filter(|g| generators.iter().all(|h| g.compose(h) == h.compose(g)))
        .collect())
}

/// Images of `s_1..s_5` defining the exceptional outer automorphism of `S_6`,
/// plus the checks that certify it.
#[derive(Debug, Clone, Serialize)]
pub struct S6OuterWitness {
    pub images: Vec<Permutation>,
    /// One line per verified relation or property, all of which must hold.
    pub transcript: Vec<(String, bool)>,
    pub image_subgroup_order: usize,
}

impl S6OuterWitness {
    /// Applies the automorphism to an arbitrary element of `S_6` by mapping
    /// an adjacent-transposition decomposition through the generator images.
    pub fn apply(&self, p: &Permutation) -> Permutation {
        assert_eq!(p.degree(), 6, "witness acts on S_6");
        let mut out = Permutation::identity(6);
        for k in p.adjacent_transposition_decomposition() {
            out = out.compose(&self.images[k - 1]);
        }
        out
    }

    pub fn all_checks_hold(&self) -> bool {
        self.transcript.iter().all(|(_, ok)| *ok)
    }
}

/// Searches for images of `s_1..s_5` among the 2+2+2 involutions of `S_6`
/// satisfying the Coxeter relations and generating the whole group. Such an
/// assignment defines an automorphism sending transpositions to triple
/// transpositions, which no conjugation can do — hence an outer automorphism.
pub fn find_outer_s6() -> S6OuterWitness {
    let candidates: Vec<Permutation> = Permutation::all(6)
        .into_iter()
        .filter(|p| p.cycle_type() == vec![2, 2, 2])
        .collect();
    let mut images: Vec<Permutation> = Vec::new();
    assert!(
        search_outer(&candidates, &mut images),
        "backtracking must find the S_6 outer automorphism"
    );

    let mut transcript = Vec::new();
    for (k, img) in images.iter().enumerate() {
        transcript.push((
            format!("s{} image has cycle type 2+2+2", k + 1),
            img.cycle_type() == vec![2, 2, 2],
        ));
        transcript.push((format!("s{}^2 = 1", k + 1), img.compose(img).is_identity()));
    }
    for i in 1..=4 {
        let (a, b) = (&images[i - 1], &images[i]);
        transcript.push((
            format!("braid s{i} s{} s{i} = s{} s{i} s{}", i + 1, i + 1, i + 1),
            a.compose(b).compose(a) == b.compose(a).compose(b),
        ));
    }
    for i in 1..=5 {
        for j in i + 2..=5 {
            transcript.push((
                format!("far commutation s{i} s{j} = s{j} s{i}"),
                images[i - 1].compose(&images[j - 1]) == images[j - 1].compose(&images[i - 1]),
            ));
        }
    }
    let order = closure_order(&images);
    transcript.push(("images generate S_6 (order 720)".to_string(), order == 720));

    S6OuterWitness { images, transcript, image_subgroup_order: order }
}

fn search_outer(candidates: &[Permutation], images: &mut Vec<Permutation>) -> bool {
    if images.len() == 5 {
        return closure_order(images) == 720;
    }
    'next: for cand in candidates {
        if let Some(prev) = images.last() {
            let braid_l = prev.compose(cand).compose(prev);
            let braid_r = cand.compose(prev).compose(cand);
            if braid_l != braid_r {
                continue;
            }
        }
        if images.len() >= 2 {
            for far in &images[..images.len() - 1] {
                if far.compose(cand) != cand.compose(far) {
                    continue 'next;
                }
            }
        }
        images.push(cand.clone());
        if search_outer(candidates, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Order of the subgroup generated by `gens`, by orbit closure over products.
pub fn closure_order(gens: &[Permutation]) -> usize {
    if gens.is_empty() {
        return 1;
    }
    let n = gens[0].degree();
    let mut seen = std::collections::BTreeSet::new();
    let mut frontier = vec![Permutation::identity(n)];
    seen.insert(Permutation::identity(n));
    while let Some(p) = frontier.pop() {
        for g in gens {
            let q = p.compose(g);
            if seen.insert(q.clone()) {
                frontier.push(q);
            }
        }
    }
    seen.len()
}
