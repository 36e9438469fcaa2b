//! Endomorphisms and automorphisms given by generator-image tables.
//!
//! Tables are data, not closures: serializable, comparable and composable by
//! substitution, with equality decidable because the word problem is solved
//! in both `UVP_n` and `UVB_n`. The module houses the `Aut(UVP_n)` generating
//! set (transvections `T`, inversions `I`, factor swaps `E`, factor
//! permutations `P`), the order-two automorphisms β and γ of `UVB_n`, the
//! self-injection h̄ behind the co-Hopf failure, inner automorphisms, induced
//! maps on abelianizations, and the two non-innerness obstructions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perms::Permutation;
use crate::uvb::{
    element_to_word, embed_lambda, evaluate_word, invert_letters, iota, syntactic_reduce,
    PresentationTable, RelatorStatus, UvbAbelianization, UvbElement,
};
use crate::uvp::{
    apply_generator_images, f2_endo_injective, f2_endo_surjective, images_satisfy_relations,
    ordered_pairs, pair_index, UvpElement,
};
use crate::words::{parse_word, F2Gen, FreeWord, Gen, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutError {
    #[error("endomorphism targets differ")]
    TargetMismatch,
    #[error("strand counts differ: {0} vs {1}")]
    RankMismatch(usize, usize),
    #[error("invalid indices for this generator kind")]
    BadIndices,
    #[error("generator images violate relator {0}")]
    RelatorCheckFailed(String),
    #[error("spec has not passed its relator check; apply_unchecked bypasses")]
    UncheckedSpec,
    #[error("spec file: {0}")]
    SpecFile(String),
    #[error("word error: {0}")]
    Word(#[from] crate::words::WordError),
}

/// Which group a spec maps into (and out of).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EndoTarget {
    Uvp,
    Uvb,
    Wb,
}

// ---------------------------------------------------------------------------
// UVP endomorphism specs
// ---------------------------------------------------------------------------

/// A generator-image table `λ_{i,j} ↦ image` on `UVP_n`. `checked` is true
/// once every commutation relator of the presentation has been verified on
/// the images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvpEndo {
    n: usize,
    images: BTreeMap<(usize, usize), UvpElement>,
    checked: bool,
}

/// The four-family generating set of `Aut(UVP_n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorKind {
    /// `I`: invert one generator.
    Inversion,
    /// `T`: transvection `λ_{i,j} ↦ λ_{i,j} λ_{j,i}`.
    Transvection,
    /// `E`: swap the two generators of one factor.
    FactorSwap,
    /// `P`: swap two whole factors.
    FactorPermutation,
}

impl UvpEndo {
    /// Builds and checks a table. Missing pairs are not allowed.
    pub fn new(images: BTreeMap<(usize, usize), UvpElement>, n: usize) -> Result<Self, AutError> {
        let ok = images_satisfy_relations(&images, n)
            .map_err(|e| AutError::SpecFile(e.to_string()))?;
        if !ok {
            return Err(AutError::RelatorCheckFailed("commutation".into()));
        }
        Ok(UvpEndo { n, images, checked: true })
    }

    /// Builds a table without running the relator check; `apply` will refuse
    /// it until `check` is called.
    pub fn new_unchecked(images: BTreeMap<(usize, usize), UvpElement>, n: usize) -> Self {
        UvpEndo { n, images, checked: false }
    }

    pub fn identity(n: usize) -> Self {
        UvpEndo { n, images: base_images(n), checked: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn checked(&self) -> bool {
        self.checked
    }

    pub fn image(&self, i: usize, j: usize) -> &UvpElement {
        &self.images[&(i, j)]
    }

    /// Runs the commutation relator check, recording the result.
    pub fn check(&mut self) -> bool {
        self.checked = images_satisfy_relations(&self.images, self.n).unwrap_or(false);
        self.checked
    }

    pub fn apply(&self, x: &UvpElement) -> Result<UvpElement, AutError> {
        if !self.checked {
            return Err(AutError::UncheckedSpec);
        }
        self.apply_unchecked(x)
    }

    /// Applies the table without demanding the relator check; callers opt in
    /// explicitly.
    pub fn apply_unchecked(&self, x: &UvpElement) -> Result<UvpElement, AutError> {
        apply_generator_images(&self.images, x).map_err(|e| AutError::SpecFile(e.to_string()))
    }

    /// `(self ∘ other)(x) = self(other(x))`, by substitution then reduction.
    pub fn compose(&self, other: &Self) -> Result<Self, AutError> {
        if self.n != other.n {
            return Err(AutError::RankMismatch(self.n, other.n));
        }
        let mut images = BTreeMap::new();
        for (&pair, image) in &other.images {
            images.insert(pair, self.apply_unchecked(image)?);
        }
        Ok(UvpEndo { n: self.n, images, checked: self.checked && other.checked })
    }

    pub fn is_identity(&self) -> bool {
        self == &UvpEndo::identity(self.n)
    }

    /// Matrix of the induced map on the abelianization `Z^{n(n-1)}`; column
    /// `pair_index(i,j)` is the abelianized image of `λ_{i,j}`.
    pub fn abelianized_matrix(&self) -> IntMatrix {
        let dim = self.n * (self.n - 1);
        let mut m = IntMatrix::zero(dim);
        for (i, j) in ordered_pairs(self.n) {
            let col = pair_index(i, j, self.n);
            let vec = self.images[&(i, j)].abelianize();
            for (row, &v) in vec.entries().iter().enumerate() {
                m.set(row, col, v);
            }
        }
        m
    }

    /// Restriction to one rank-2 factor: the images of `λ_{lo,hi}` (the `A`
    /// letter) and `λ_{hi,lo}` (the `B` letter) as factor words. Panics if an
    /// image leaves the factor.
    pub fn f2_restriction(&self, lo: usize, hi: usize) -> (FreeWord<F2Gen>, FreeWord<F2Gen>) {
        let pick = |i: usize, j: usize| {
            let image = &self.images[&(i, j)];
            assert!(
                image.factors().keys().all(|&k| k == (lo, hi)),
                "image of l{i},{j} leaves factor ({lo},{hi})"
            );
            image.factor_word(lo, hi)
        };
        (pick(lo, hi), pick(hi, lo))
    }
}

/// Builds one generator of `Aut(UVP_n)`.
///
/// - `Inversion` with `[i, j]`: `λ_{i,j} ↦ λ_{i,j}⁻¹`.
/// - `Transvection` with `[j, i]`: `λ_{i,j} ↦ λ_{i,j} λ_{j,i}` (the indices
///   name the transvecting generator).
/// - `FactorSwap` with `[i, j]`: `λ_{i,j} ↔ λ_{j,i}`.
/// - `FactorPermutation` with `[i, j, k, l]`: `λ_{i,j} ↔ λ_{k,l}` and
///   `λ_{j,i} ↔ λ_{l,k}`; the unordered pairs must differ.
pub fn make_generator(
    kind: GeneratorKind,
    indices: &[usize],
    n: usize,
) -> Result<UvpEndo, AutError> {
    match (kind, indices) {
        (GeneratorKind::Inversion, &[i, j]) => inversion(i, j, n),
        (GeneratorKind::Transvection, &[j, i]) => transvection(j, i, n),
        (GeneratorKind::FactorSwap, &[i, j]) => factor_swap(i, j, n),
        (GeneratorKind::FactorPermutation, &[i, j, k, l]) => factor_permutation(i, j, k, l, n),
        _ => Err(AutError::BadIndices),
    }
}

fn base_images(n: usize) -> BTreeMap<(usize, usize), UvpElement> {
    ordered_pairs(n)
        .into_iter()
        .map(|(i, j)| ((i, j), UvpElement::generator(i, j, n).expect("valid pair")))
        .collect()
}

fn pair_ok(i: usize, j: usize, n: usize) -> Result<(), AutError> {
    crate::uvp::check_pair(i, j, n).map_err(|_| AutError::BadIndices)
}

/// `I_{λ_{i,j}}: λ_{i,j} ↦ λ_{i,j}⁻¹`, fixing the rest.
pub fn inversion(i: usize, j: usize, n: usize) -> Result<UvpEndo, AutError> {
    pair_ok(i, j, n)?;
    let mut images = base_images(n);
    images.insert((i, j), UvpElement::generator_power(i, j, -1, n).expect("valid pair"));
    UvpEndo::new(images, n)
}

/// `T_{λ_{j,i}}: λ_{i,j} ↦ λ_{i,j} λ_{j,i}`, fixing the rest.
pub fn transvection(j: usize, i: usize, n: usize) -> Result<UvpEndo, AutError> {
    pair_ok(i, j, n)?;
    let mut images = base_images(n);
    let moved = UvpElement::generator(i, j, n)
        .expect("valid pair")
        .mul(&UvpElement::generator(j, i, n).expect("valid pair"));
    images.insert((i, j), moved);
    UvpEndo::new(images, n)
}

/// `E_{i,j}: λ_{i,j} ↔ λ_{j,i}`, fixing the rest.
pub fn factor_swap(i: usize, j: usize, n: usize) -> Result<UvpEndo, AutError> {
    pair_ok(i, j, n)?;
    let mut images = base_images(n);
    images.insert((i, j), UvpElement::generator(j, i, n).expect("valid pair"));
    images.insert((j, i), UvpElement::generator(i, j, n).expect("valid pair"));
    UvpEndo::new(images, n)
}

/// `P_{ij,kl}: λ_{i,j} ↔ λ_{k,l}, λ_{j,i} ↔ λ_{l,k}`, fixing the rest.
pub fn factor_permutation(
    i: usize,
    j: usize,
    k: usize,
    l: usize,
    n: usize,
) -> Result<UvpEndo, AutError> {
    pair_ok(i, j, n)?;
    pair_ok(k, l, n)?;
    let couple = |a: usize, b: usize| if a < b { (a, b) } else { (b, a) };
    if couple(i, j) == couple(k, l) {
        return Err(AutError::BadIndices);
    }
    let mut images = base_images(n);
    let gen = |a, b| UvpElement::generator(a, b, n).expect("valid pair");
    images.insert((i, j), gen(k, l));
    images.insert((k, l), gen(i, j));
    images.insert((j, i), gen(l, k));
    images.insert((l, k), gen(j, i));
    UvpEndo::new(images, n)
}

// ---------------------------------------------------------------------------
// Integer matrices (UVP abelianization)
// ---------------------------------------------------------------------------

/// A square integer matrix, used for induced maps on `Z^{n(n-1)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    dim: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn zero(dim: usize) -> Self {
        IntMatrix { dim, entries: vec![0; dim * dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zero(dim);
        for k in 0..dim {
            m.set(k, k, 1);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, v: i64) {
        self.entries[row * self.dim + col] = v;
    }

    pub fn is_identity(&self) -> bool {
        self == &Self::identity(self.dim)
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> i128 {
        let n = self.dim;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.entries.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let swap = (k + 1..n).find(|&r| a[r * n + k] != 0);
                match swap {
                    Some(r) => {
                        for c in 0..n {
                            a.swap(k * n + c, r * n + c);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
                    a[i * n + j] = num / prev;
                }
                a[i * n + k] = 0;
            }
            prev = a[k * n + k];
        }
        sign * a[n * n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        let d = self.determinant();
        d == 1 || d == -1
    }
}

// ---------------------------------------------------------------------------
// UVB endomorphism specs
// ---------------------------------------------------------------------------

/// A generator-image table `σ_i, ρ_i ↦ images` on `UVB_n`. Every constructor
/// verifies the full relator set in the normal-form engine, so a value of
/// this type is always a genuine endomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UvbEndo {
    n: usize,
    sigma: Vec<UvbElement>,
    rho: Vec<UvbElement>,
}

impl UvbEndo {
    /// Builds a table and verifies every UVB relator on the images.
    pub fn new(sigma: Vec<UvbElement>, rho: Vec<UvbElement>, n: usize) -> Result<Self, AutError> {
        if sigma.len() + 1 != n || rho.len() + 1 != n {
            return Err(AutError::BadIndices);
        }
        let endo = UvbEndo { n, sigma, rho };
        for rel in &PresentationTable::uvb(n).relators {
            let lhs = endo.apply_letters(&rel.lhs);
            let rhs = endo.apply_letters(&rel.rhs);
            if lhs != rhs {
                return Err(AutError::RelatorCheckFailed(rel.id.clone()));
            }
        }
        Ok(endo)
    }

    /// Conjugation `x ↦ g x g⁻¹`; a homomorphism by construction, so no
    /// relator check is run.
    pub fn inner_by(g: &UvbElement) -> Self {
        let n = g.n();
        let g_inv = g.inverse();
        let conj = |x: UvbElement| g.mul(&x).mul(&g_inv);
        let identity = UvbEndo::identity(n);
        UvbEndo {
            n,
            sigma: identity.sigma.into_iter().map(conj).collect(),
            rho: identity.rho.into_iter().map(conj).collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let sigma = (1..n)
            .map(|i| evaluate_word(&[Letter { gen: Gen::Sigma(i), exp: 1 }], n).expect("valid"))
            .collect();
        let rho =
            (1..n).map(|i| iota(&Permutation::transposition(i, n).expect("valid"))).collect();
        UvbEndo { n, sigma, rho }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma_image(&self, i: usize) -> &UvbElement {
        &self.sigma[i - 1]
    }

    pub fn rho_image(&self, i: usize) -> &UvbElement {
        &self.rho[i - 1]
    }

    /// Image of a generator word under the table; λ letters go through their
    /// σ/ρ expansion.
    pub fn apply_letters(&self, letters: &[Letter]) -> UvbElement {
        let mut out = UvbElement::identity(self.n);
        for letter in letters {
            let base = match letter.gen {
                Gen::Sigma(i) => self.sigma[i - 1].clone(),
                Gen::Rho(i) => self.rho[i - 1].clone(),
                Gen::Lambda(i, j) => {
                    let expansion =
                        crate::uvb::expand_lambda(i, j, self.n).expect("valid indices");
                    self.apply_letters(&expansion)
                }
            };
            let signed = if letter.exp > 0 { base } else { base.inverse() };
            for _ in 0..letter.exp.unsigned_abs() {
                out = out.mul(&signed);
            }
        }
        out
    }

    /// Image of an arbitrary element, through a word representing it.
    pub fn apply(&self, g: &UvbElement) -> UvbElement {
        assert_eq!(self.n, g.n(), "strand counts differ in endo apply");
        self.apply_letters(&element_to_word(g))
    }

    /// `(self ∘ other)(x) = self(other(x))`. Both inputs are verified
    /// homomorphisms, so the composite needs no new check.
    pub fn compose(&self, other: &Self) -> Result<Self, AutError> {
        if self.n != other.n {
            return Err(AutError::RankMismatch(self.n, other.n));
        }
        Ok(UvbEndo {
            n: self.n,
            sigma: other.sigma.iter().map(|img| self.apply(img)).collect(),
            rho: other.rho.iter().map(|img| self.apply(img)).collect(),
        })
    }

    pub fn is_identity(&self) -> bool {
        self == &UvbEndo::identity(self.n)
    }

    /// Induced action on the abelianization `Z × Z_2`.
    pub fn abelian_action(&self) -> AbelianAction {
        AbelianAction {
            sigma_image: crate::uvb::abelianize_uvb(&self.sigma[0]),
            rho_image: crate::uvb::abelianize_uvb(&self.rho[0]),
        }
    }
}

/// Action of an endomorphism on `UVB_n^{ab} ≅ Z × Z_2`, recorded as the
/// images of the classes of σ₁ and ρ₁.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AbelianAction {
    pub sigma_image: UvbAbelianization,
    pub rho_image: UvbAbelianization,
}

impl AbelianAction {
    pub fn is_identity(&self) -> bool {
        self.sigma_image == UvbAbelianization { sigma_degree: 1, rho_parity: 0 }
            && self.rho_image == UvbAbelianization { sigma_degree: 0, rho_parity: 1 }
    }
}

/// β: σ_i ↦ σ_i⁻¹, ρ_i ↦ ρ_i. Order two; acts as −1 on the `Z` factor of the
/// abelianization.
pub fn make_beta(n: usize) -> Result<UvbEndo, AutError> {
    let sigma = (1..n)
        .map(|i| evaluate_word(&[Letter { gen: Gen::Sigma(i), exp: -1 }], n).expect("valid"))
        .collect();
    let rho = (1..n).map(|i| iota(&Permutation::transposition(i, n).expect("valid"))).collect();
    UvbEndo::new(sigma, rho, n)
}

/// γ: σ_i ↦ ρ_i σ_i ρ_i, ρ_i ↦ ρ_i. Order two; swaps every couple
/// `λ_{k,l} ↔ λ_{l,k}`.
pub fn make_gamma(n: usize) -> Result<UvbEndo, AutError> {
    let sigma = (1..n)
        .map(|i| {
            let word = [
                Letter { gen: Gen::Rho(i), exp: 1 },
                Letter { gen: Gen::Sigma(i), exp: 1 },
                Letter { gen: Gen::Rho(i), exp: 1 },
            ];
            evaluate_word(&word, n).expect("valid")
        })
        .collect();
    let rho = (1..n).map(|i| iota(&Permutation::transposition(i, n).expect("valid"))).collect();
    UvbEndo::new(sigma, rho, n)
}

/// The n = 2 automorphism σ₁ ↦ σ₁⁻¹ρ₁, ρ₁ ↦ ρ₁, which moves `λ_{1,2}`
/// outside the pure subgroup — the witness that `UVP_2` is not
/// characteristic.
pub fn make_alpha2() -> Result<UvbEndo, AutError> {
    let n = 2;
    let sigma_word =
        [Letter { gen: Gen::Sigma(1), exp: -1 }, Letter { gen: Gen::Rho(1), exp: 1 }];
    let sigma = vec![evaluate_word(&sigma_word, n).expect("valid")];
    let rho = vec![iota(&Permutation::transposition(1, n).expect("valid"))];
    UvbEndo::new(sigma, rho, n)
}

/// h̄: λ_{i,j} ↦ λ_{i,j} λ_{j,i}, ι(s) ↦ ι(s) — injective but not surjective,
/// so `UVB_n` is not co-Hopfian.
pub fn make_hbar(n: usize) -> Result<UvbEndo, AutError> {
    // σ_i = λ_{i,i+1}⁻¹ ρ_i maps to (λ_{i,i+1} λ_{i+1,i})⁻¹ ρ_i.
    let sigma = (1..n)
        .map(|i| {
            let word = FreeWord::from_runs([(F2Gen::B, -1), (F2Gen::A, -1)]);
            let lam = UvpElement::from_factor(i, i + 1, word, n).expect("valid");
            UvbElement::from_parts(lam, Permutation::transposition(i, n).expect("valid"))
                .expect("matching degrees")
        })
        .collect();
    let rho = (1..n).map(|i| iota(&Permutation::transposition(i, n).expect("valid"))).collect();
    UvbEndo::new(sigma, rho, n)
}

// ---------------------------------------------------------------------------
// WB endomorphism specs (syntactic-only)
// ---------------------------------------------------------------------------

/// A generator-image table on `WB_n`, where no normal form is available. The
/// relator check is the sound-but-incomplete syntactic engine, and the
/// per-relator verdicts are carried explicitly so an `UNKNOWN` can never be
/// mistaken for a proof.
#[derive(Debug, Clone)]
pub struct WbEndo {
    n: usize,
    sigma: Vec<Vec<Letter>>,
    rho: Vec<Vec<Letter>>,
    pub relator_status: Vec<(String, RelatorStatus)>,
    pub verdict: RelatorStatus,
}

impl WbEndo {
    fn build(sigma: Vec<Vec<Letter>>, rho: Vec<Vec<Letter>>, n: usize) -> Self {
        let mut endo =
            WbEndo { n, sigma, rho, relator_status: Vec::new(), verdict: RelatorStatus::Ok };
        for rel in &PresentationTable::wb(n).relators {
            let mut word = endo.apply_letters(&rel.lhs);
            word.extend(invert_letters(&endo.apply_letters(&rel.rhs)));
            let status = if syntactic_reduce(&word).is_empty() {
                RelatorStatus::Ok
            } else {
                RelatorStatus::Unknown
            };
            endo.relator_status.push((rel.id.clone(), status));
        }
        if endo.relator_status.iter().any(|(_, s)| *s == RelatorStatus::Fail) {
            endo.verdict = RelatorStatus::Fail;
        } else if endo.relator_status.iter().any(|(_, s)| *s == RelatorStatus::Unknown) {
            endo.verdict = RelatorStatus::Unknown;
        }
        endo
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Maps a σ/ρ word through the table and reduces syntactically.
    pub fn apply_letters(&self, letters: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::new();
        for letter in letters {
            let image = match letter.gen {
                Gen::Sigma(i) => &self.sigma[i - 1],
                Gen::Rho(i) => &self.rho[i - 1],
                Gen::Lambda(_, _) => panic!("WB words carry only sigma/rho letters"),
            };
            let signed = if letter.exp > 0 { image.clone() } else { invert_letters(image) };
            for _ in 0..letter.exp.unsigned_abs() {
                out.extend(signed.iter().copied());
            }
        }
        syntactic_reduce(&out)
    }
}

/// The conjectural `Out(WB_n)` generator α: σ_i ↦ ρ_i σ_i⁻¹ ρ_i, ρ_i ↦ ρ_i.
/// Checked syntactically only: the ρ involutions verify, the mixed relators
/// come back `UNKNOWN`.
pub fn make_alpha_wb(n: usize) -> WbEndo {
    let sigma: Vec<Vec<Letter>> = (1..n)
        .map(|i| {
            vec![
                Letter { gen: Gen::Rho(i), exp: 1 },
                Letter { gen: Gen::Sigma(i), exp: -1 },
                Letter { gen: Gen::Rho(i), exp: 1 },
            ]
        })
        .collect();
    let rho: Vec<Vec<Letter>> =
        (1..n).map(|i| vec![Letter { gen: Gen::Rho(i), exp: 1 }]).collect();
    WbEndo::build(sigma, rho, n)
}

// ---------------------------------------------------------------------------
// Non-innerness obstructions
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NotInnerReason {
    /// The induced map on `Z × Z_2` is not the identity; inner automorphisms
    /// act trivially there.
    #[serde(rename = "ABELIANIZATION")]
    Abelianization,
    /// The spec swaps every couple `λ_{k,l} ↦ λ_{l,k}`. Were it conjugation
    /// by `Λ·ι(S)`, comparing abelianized images forces `S(k) = l, S(l) = k`
    /// for every ordered pair, and the exhaustive scan finds no such `S`.
    #[serde(rename = "PAIR_SWAP")]
    PairSwap,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum NotInnerVerdict {
    ProvenNotInner(NotInnerReason),
    /// No obstruction fired. Never a false positive: inner automorphisms
    /// always land here.
    Unknown,
}

/// Decides non-innerness by the two sound obstructions. Conservative by
/// construction — on conjugations it must return `Unknown`.
pub fn not_inner_witness(spec: &UvbEndo) -> NotInnerVerdict {
    if !spec.abelian_action().is_identity() {
        return NotInnerVerdict::ProvenNotInner(NotInnerReason::Abelianization);
    }
    let n = spec.n();
    let swaps_all_couples = ordered_pairs(n).into_iter().all(|(k, l)| {
        spec.apply(&embed_lambda(k, l, n).expect("valid pair"))
            == embed_lambda(l, k, n).expect("valid pair")
    });
    if swaps_all_couples {
        let some_permutation_reverses_all = Permutation::all(n).into_iter().any(|s| {
            ordered_pairs(n).into_iter().all(|(k, l)| s.apply(k) == l && s.apply(l) == k)
        });
        if !some_permutation_reverses_all {
            return NotInnerVerdict::ProvenNotInner(NotInnerReason::PairSwap);
        }
    }
    NotInnerVerdict::Unknown
}

// ---------------------------------------------------------------------------
// h̄ certification
// ---------------------------------------------------------------------------

/// Per-factor certificates for h̄ plus the global homomorphism check.
#[derive(Debug, Clone, Serialize)]
pub struct HbarReport {
    pub n: usize,
    pub homomorphism_ok: bool,
    pub factors: Vec<FactorCertificate>,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct FactorCertificate {
    pub pair: (usize, usize),
    pub injective: bool,
    pub surjective: bool,
}

/// Certifies that h̄ is injective but not surjective: on every factor the
/// generator images are `AB` and `BA`, whose commutator is nontrivial
/// (injectivity) while folding rejects `A ∈ ⟨AB, BA⟩` (non-surjectivity).
pub fn certify_hbar(n: usize) -> Result<HbarReport, AutError> {
    let homomorphism_ok = make_hbar(n).is_ok();
    let ab = FreeWord::from_runs([(F2Gen::A, 1), (F2Gen::B, 1)]);
    let ba = FreeWord::from_runs([(F2Gen::B, 1), (F2Gen::A, 1)]);
    let mut factors = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            factors.push(FactorCertificate {
                pair: (i, j),
                injective: f2_endo_injective(&ab, &ba),
                surjective: f2_endo_surjective(&ab, &ba),
            });
        }
    }
    let injective = factors.iter().all(|f| f.injective);
    let surjective = factors.iter().all(|f| f.surjective);
    Ok(HbarReport { n, homomorphism_ok, factors, injective, surjective })
}

// ---------------------------------------------------------------------------
// Spec files
// ---------------------------------------------------------------------------

/// A parsed endomorphism spec of any target.
#[derive(Debug, Clone)]
pub enum EndoSpec {
    Uvp(UvpEndo),
    Uvb(UvbEndo),
    Wb(WbEndo),
}

impl EndoSpec {
    pub fn target(&self) -> EndoTarget {
        match self {
            EndoSpec::Uvp(_) => EndoTarget::Uvp,
            EndoSpec::Uvb(_) => EndoTarget::Uvb,
            EndoSpec::Wb(_) => EndoTarget::Wb,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            EndoSpec::Uvp(e) => e.n(),
            EndoSpec::Uvb(e) => e.n(),
            EndoSpec::Wb(e) => e.n(),
        }
    }
}

#[derive(Debug, Deserialize)]
struct RawSpecFile {
    target: EndoTarget,
    n: usize,
    #[serde(default)]
    images: BTreeMap<String, String>,
}

/// Loads a JSON spec file: header `{target, n}` plus a map from generator
/// token (`l<i>,<j>`, `s<i>` or `r<i>`) to an image word in the word grammar.
/// Generators missing from the map stay fixed. UVP and UVB specs are
/// verified on load; WB specs get the syntactic three-valued check.
pub fn load_endo_spec(text: &str) -> Result<EndoSpec, AutError> {
    let raw: RawSpecFile =
        serde_json::from_str(text).map_err(|e| AutError::SpecFile(e.to_string()))?;
    if raw.n < 2 {
        return Err(AutError::SpecFile("n must be at least 2".into()));
    }
    let n = raw.n;
    let mut parsed: BTreeMap<Gen, Vec<Letter>> = BTreeMap::new();
    for (token, word) in &raw.images {
        let gens = parse_word(token, n)?;
        if gens.len() != 1 || gens[0].exp != 1 {
            return Err(AutError::SpecFile(format!("key {token:?} is not a single generator")));
        }
        parsed.insert(gens[0].gen, parse_word(word, n)?);
    }
    match raw.target {
        EndoTarget::Uvp => {
            let mut images = base_images(n);
            for (gen, letters) in parsed {
                let Gen::Lambda(i, j) = gen else {
                    return Err(AutError::SpecFile("uvp specs map only lambda generators".into()));
                };
                let mut image = UvpElement::identity(n);
                for letter in letters {
                    let Gen::Lambda(a, b) = letter.gen else {
                        return Err(AutError::SpecFile(
                            "uvp images are words in lambda generators".into(),
                        ));
                    };
                    image = image.mul(
                        &UvpElement::generator_power(a, b, letter.exp, n)
                            .map_err(|e| AutError::SpecFile(e.to_string()))?,
                    );
                }
                images.insert((i, j), image);
            }
            Ok(EndoSpec::Uvp(UvpEndo::new(images, n)?))
        }
        EndoTarget::Uvb => {
            let identity = UvbEndo::identity(n);
            let mut sigma: Vec<UvbElement> =
                (1..n).map(|i| identity.sigma_image(i).clone()).collect();
            let mut rho: Vec<UvbElement> =
                (1..n).map(|i| identity.rho_image(i).clone()).collect();
            for (gen, letters) in parsed {
                let image =
                    evaluate_word(&letters, n).map_err(|e| AutError::SpecFile(e.to_string()))?;
                match gen {
                    Gen::Sigma(i) => sigma[i - 1] = image,
                    Gen::Rho(i) => rho[i - 1] = image,
                    Gen::Lambda(_, _) => {
                        return Err(AutError::SpecFile("uvb specs map sigma/rho generators".into()));
                    }
                }
            }
            Ok(EndoSpec::Uvb(UvbEndo::new(sigma, rho, n)?))
        }
        EndoTarget::Wb => {
            let mut sigma: Vec<Vec<Letter>> =
                (1..n).map(|i| vec![Letter { gen: Gen::Sigma(i), exp: 1 }]).collect();
            let mut rho: Vec<Vec<Letter>> =
                (1..n).map(|i| vec![Letter { gen: Gen::Rho(i), exp: 1 }]).collect();
            for (gen, letters) in parsed {
                if letters.iter().any(|l| matches!(l.gen, Gen::Lambda(_, _))) {
                    return Err(AutError::SpecFile(
                        "wb images are words in sigma/rho generators".into(),
                    ));
                }
                match gen {
                    Gen::Sigma(i) => sigma[i - 1] = letters,
                    Gen::Rho(i) => rho[i - 1] = letters,
                    Gen::Lambda(_, _) => {
                        return Err(AutError::SpecFile("wb specs map sigma/rho generators".into()));
                    }
                }
            }
            Ok(EndoSpec::Wb(WbEndo::build(sigma, rho, n)))
        }
    }
}
