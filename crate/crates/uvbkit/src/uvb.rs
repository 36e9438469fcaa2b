//! Arithmetic in `UVB_n ≅ UVP_n ⋊ S_n`, the rewriter that brings σ/ρ words to
//! normal form (solving the word problem), the projection φ and its section ι,
//! abelianization, and relator verification for the `UVB_n` and `WB_n`
//! presentations.
//!
//! The normal form is the pair `(Λ, S)` with `Λ ∈ UVP_n` and `S ∈ S_n`; the
//! permutation is kept on the right, matching the decomposition `g = Λ·ι(S)`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::perms::Permutation;
use crate::uvp::{check_pair, ordered_pairs, UvpElement};
use crate::words::{Gen, Letter};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UvbError {
    #[error("strand counts differ: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("lambda letter {0} in a sigma/rho word; embed it instead")]
    LambdaInWord(String),
    #[error("lambda generator needs distinct indices, got ({0},{0})")]
    EqualIndices(usize),
    #[error("the normal-form engine only applies to the UVB presentation")]
    EngineMismatch,
}

/// The semidirect-product action of `S_n` on `UVP_n`: relabel
/// `λ_{i,j} ↦ λ_{s(i), s(j)}` letter-wise.
pub fn act(s: &Permutation, x: &UvpElement) -> UvpElement {
    assert_eq!(s.degree(), x.n(), "degree mismatch in act");
    let mut out = UvpElement::identity(x.n());
    for (&(lo, hi), word) in x.factors() {
        let (a, b) = (s.apply(lo), s.apply(hi));
        let (key, flipped) = if a < b { ((a, b), false) } else { ((b, a), true) };
        let word = if flipped { word.flip_ab() } else { word.clone() };
        // s is a bijection on unordered pairs, so keys never collide.
        out = out.mul(&UvpElement::from_factor(key.0, key.1, word, x.n()).expect("valid key"));
    }
    out
}

/// An element of `UVB_n` in normal form: a pure part and a permutation, with
/// equality component-wise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct UvbElement {
    lam: UvpElement,
    perm: Permutation,
}

impl UvbElement {
    pub fn identity(n: usize) -> Self {
        UvbElement { lam: UvpElement::identity(n), perm: Permutation::identity(n) }
    }

    pub fn from_parts(lam: UvpElement, perm: Permutation) -> Result<Self, UvbError> {
        if lam.n() != perm.degree() {
            return Err(UvbError::DegreeMismatch(lam.n(), perm.degree()));
        }
        Ok(UvbElement { lam, perm })
    }

    pub fn n(&self) -> usize {
        self.lam.n()
    }

    pub fn lam(&self) -> &UvpElement {
        &self.lam
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// `(Λ₁, S₁)(Λ₂, S₂) = (Λ₁ · S₁(Λ₂), S₁ ∘ S₂)`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "strand counts differ in uvb multiply");
        UvbElement {
            lam: self.lam.mul(&act(&self.perm, &other.lam)),
            perm: self.perm.compose(&other.perm),
        }
    }

    pub fn inverse(&self) -> Self {
        let perm_inv = self.perm.inverse();
        UvbElement { lam: act(&perm_inv, &self.lam.inverse()), perm: perm_inv }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = UvbElement::identity(self.n());
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.lam.is_identity() && self.perm.is_identity()
    }
}

impl fmt::Display for UvbElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.lam, self.perm)
    }
}

/// The projection `φ: UVB_n → S_n`, reading the permutation part.
pub fn phi(g: &UvbElement) -> Permutation {
    g.perm.clone()
}

/// The section `ι: S_n → UVB_n`, `ι((i,i+1)) = ρ_i`.
pub fn iota(s: &Permutation) -> UvbElement {
    UvbElement { lam: UvpElement::identity(s.degree()), perm: s.clone() }
}

/// Kernel membership: `g ∈ UVP_n` iff its permutation part is trivial.
pub fn in_kernel(g: &UvbElement) -> bool {
    g.perm.is_identity()
}

/// The embedding of the pure generator `λ_{i,j}` as `(λ_{i,j}, id)`.
pub fn embed_lambda(i: usize, j: usize, n: usize) -> Result<UvbElement, UvbError> {
    let lam = UvpElement::generator(i, j, n).map_err(|_| lambda_err(i, j, n))?;
    Ok(UvbElement { lam, perm: Permutation::identity(n) })
}

fn lambda_err(i: usize, j: usize, n: usize) -> UvbError {
    if i == j {
        UvbError::EqualIndices(i)
    } else {
        let bad = if i == 0 || i > n { i } else { j };
        UvbError::IndexOutOfRange { index: bad, n }
    }
}

/// Writes `λ_{i,j}` as a σ/ρ word:
/// `λ_{i,i+1} = ρ_i σ_i⁻¹`, `λ_{i+1,i} = σ_i⁻¹ ρ_i`, and for distant pairs
/// the ρ-conjugated forms `λ_{i,j} = ρ_{j-1} … ρ_{i+1} λ_{i,i+1} ρ_{i+1} … ρ_{j-1}`.
pub fn expand_lambda(i: usize, j: usize, n: usize) -> Result<Vec<Letter>, UvbError> {
    check_pair(i, j, n).map_err(|_| lambda_err(i, j, n))?;
    let (lo, hi) = if i < j { (i, j) } else { (j, i) };
    let mut letters = Vec::new();
    for k in (lo + 1..hi).rev() {
        letters.push(Letter { gen: Gen::Rho(k), exp: 1 });
    }
    if i < j {
        letters.push(Letter { gen: Gen::Rho(lo), exp: 1 });
        letters.push(Letter { gen: Gen::Sigma(lo), exp: -1 });
    } else {
        letters.push(Letter { gen: Gen::Sigma(lo), exp: -1 });
        letters.push(Letter { gen: Gen::Rho(lo), exp: 1 });
    }
    for k in lo + 1..hi {
        letters.push(Letter { gen: Gen::Rho(k), exp: 1 });
    }
    Ok(letters)
}

/// Normal form of one positive/negative generator letter.
fn generator_normal_form(gen: Gen, positive: bool, n: usize) -> Result<UvbElement, UvbError> {
    match gen {
        Gen::Rho(i) => {
            let s = Permutation::transposition(i, n)
                .map_err(|_| UvbError::IndexOutOfRange { index: i, n })?;
            Ok(iota(&s))
        }
        Gen::Sigma(i) => {
            let s = Permutation::transposition(i, n)
                .map_err(|_| UvbError::IndexOutOfRange { index: i, n })?;
            // σ_i = λ_{i,i+1}⁻¹ ρ_i and σ_i⁻¹ = ρ_i λ_{i,i+1} = (λ_{i+1,i}, s_i).
            let lam = if positive {
                UvpElement::generator_power(i, i + 1, -1, n).expect("indices checked")
            } else {
                UvpElement::generator(i + 1, i, n).expect("indices checked")
            };
            Ok(UvbElement { lam, perm: s })
        }
        Gen::Lambda(i, j) => {
            check_pair(i, j, n).map_err(|_| lambda_err(i, j, n))?;
            let base = embed_lambda(i, j, n)?;
            Ok(if positive { base } else { base.inverse() })
        }
    }
}

/// Evaluates an arbitrary generator word (σ, ρ and λ letters all allowed)
/// to its normal form.
pub fn evaluate_word(letters: &[Letter], n: usize) -> Result<UvbElement, UvbError> {
    let mut out = UvbElement::identity(n);
    for letter in letters {
        let unit = generator_normal_form(letter.gen, letter.exp > 0, n)?;
        for _ in 0..letter.exp.unsigned_abs() {
            out = out.mul(&unit);
        }
    }
    Ok(out)
}

/// Rewrites a σ/ρ word to its normal form. λ letters are rejected; callers
/// holding pure generators should use [`embed_lambda`] or [`evaluate_word`].
pub fn rewrite_to_normal_form(letters: &[Letter], n: usize) -> Result<UvbElement, UvbError> {
    for letter in letters {
        if let Gen::Lambda(i, j) = letter.gen {
            return Err(UvbError::LambdaInWord(format!("l{i},{j}")));
        }
    }
    evaluate_word(letters, n)
}

/// Image of a word (or element) in the abelianization `Z × Z_2` of `UVB_n`:
/// the σ exponent sum and the ρ-letter parity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct UvbAbelianization {
    pub sigma_degree: i64,
    pub rho_parity: u8,
}

impl UvbAbelianization {
    pub const ZERO: UvbAbelianization = UvbAbelianization { sigma_degree: 0, rho_parity: 0 };

    pub fn combine(self, other: Self) -> Self {
        UvbAbelianization {
            sigma_degree: self.sigma_degree + other.sigma_degree,
            rho_parity: (self.rho_parity + other.rho_parity) % 2,
        }
    }
}

/// Abelianizes a generator word directly: σ letters count with exponent, ρ
/// letters with parity, and each λ letter contributes `(-1, 1)` per exponent
/// unit (it is a conjugate of `ρ_i σ_i⁻¹`).
pub fn abelianize_word(letters: &[Letter]) -> UvbAbelianization {
    let mut out = UvbAbelianization::ZERO;
    for letter in letters {
        let contribution = match letter.gen {
            Gen::Sigma(_) => UvbAbelianization {
                sigma_degree: letter.exp,
                rho_parity: 0,
            },
            Gen::Rho(_) => UvbAbelianization {
                sigma_degree: 0,
                rho_parity: (letter.exp.rem_euclid(2)) as u8,
            },
            Gen::Lambda(_, _) => UvbAbelianization {
                sigma_degree: -letter.exp,
                rho_parity: (letter.exp.rem_euclid(2)) as u8,
            },
        };
        out = out.combine(contribution);
    }
    out
}

/// Abelianizes a normal form; agrees with [`abelianize_word`] through the
/// rewriter.
pub fn abelianize_uvb(g: &UvbElement) -> UvbAbelianization {
    let mut total_lambda_exponent = 0i64;
    for word in g.lam.factors().values() {
        total_lambda_exponent += word.runs().iter().map(|&(_, e)| e).sum::<i64>();
    }
    UvbAbelianization {
        sigma_degree: -total_lambda_exponent,
        rho_parity: ((total_lambda_exponent.rem_euclid(2)) as u8 + g.perm.parity()) % 2,
    }
}

/// True iff `g` commutes with every pure generator `λ_{i,j}`. Only the
/// identity does: the centralizer of `UVP_n` in `UVB_n` is trivial.
pub fn commutes_with_all_pure_generators(g: &UvbElement) -> bool {
    let n = g.n();
    ordered_pairs(n).into_iter().all(|(i, j)| {
        let lam = embed_lambda(i, j, n).expect("valid pair");
        g.mul(&lam) == lam.mul(g)
    })
}

/// Which presentation a relator table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PresentationName {
    /// Unrestricted virtual braid group: families R1–R9.
    Uvb,
    /// Welded braid group: families R1–R8.
    Wb,
    /// Coxeter presentation of the symmetric group on the ρ generators:
    /// families R3–R5.
    Sn,
}

impl fmt::Display for PresentationName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresentationName::Uvb => write!(f, "uvb"),
            PresentationName::Wb => write!(f, "wb"),
            PresentationName::Sn => write!(f, "sn"),
        }
    }
}

/// A defining relation, kept as its two sides for readable reports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub id: String,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn sig(i: usize) -> Letter {
    Letter { gen: Gen::Sigma(i), exp: 1 }
}

fn rho(i: usize) -> Letter {
    Letter { gen: Gen::Rho(i), exp: 1 }
}

/// A presentation's relator list, generated family by family in declaration
/// order.
#[derive(Debug, Clone)]
pub struct PresentationTable {
    pub name: PresentationName,
    pub n: usize,
    pub relators: Vec<Relator>,
}

impl PresentationTable {
    pub fn uvb(n: usize) -> Self {
        let mut relators = families_r1_r8(n);
        // R9: ρ_{i+1} σ_i σ_{i+1} = σ_i σ_{i+1} ρ_i — the mirror of R8 that
        // distinguishes UVB_n from WB_n.
        for i in 1..=n.saturating_sub(2) {
            relators.push(Relator {
                id: format!("R9_{i}"),
                lhs: vec![rho(i + 1), sig(i), sig(i + 1)],
                rhs: vec![sig(i), sig(i + 1), rho(i)],
            });
        }
        PresentationTable { name: PresentationName::Uvb, n, relators }
    }

    pub fn wb(n: usize) -> Self {
        PresentationTable { name: PresentationName::Wb, n, relators: families_r1_r8(n) }
    }

    /// The symmetric group on the ρ generators alone (families R3–R5).
    pub fn symmetric(n: usize) -> Self {
        let mut relators = Vec::new();
        push_rho_families(n, &mut relators);
        PresentationTable { name: PresentationName::Sn, n, relators }
    }

    /// Generators in the fixed assignment order: ρ₁..ρ_{n-1}, then (except
    /// for the `Sn` presentation) σ₁..σ_{n-1}.
    pub fn generators(&self) -> Vec<Gen> {
        let mut gens: Vec<Gen> = (1..self.n).map(Gen::Rho).collect();
        if self.name != PresentationName::Sn {
            gens.extend((1..self.n).map(Gen::Sigma));
        }
        gens
    }

    /// Closed-form family sizes; the constructors are checked against these.
    pub fn expected_relator_count(&self) -> usize {
        let n = self.n;
        let adjacent = n.saturating_sub(2);
        let far_unordered = if n >= 4 { (n - 2) * (n - 3) / 2 } else { 0 };
        let far_ordered = if n >= 4 { (n - 2) * (n - 3) } else { 0 };
        let involutions = n - 1;
        match self.name {
            PresentationName::Sn => adjacent + far_unordered + involutions,
            PresentationName::Wb => {
                2 * adjacent + 2 * far_unordered + involutions + far_ordered + 2 * adjacent
            }
            PresentationName::Uvb => {
                2 * adjacent + 2 * far_unordered + involutions + far_ordered + 3 * adjacent
            }
        }
    }
}

fn push_rho_families(n: usize, relators: &mut Vec<Relator>) {
    for i in 1..=n.saturating_sub(2) {
        relators.push(Relator {
            id: format!("R3_{i}"),
            lhs: vec![rho(i), rho(i + 1), rho(i)],
            rhs: vec![rho(i + 1), rho(i), rho(i + 1)],
        });
    }
    for i in 1..n {
        for j in i + 2..n {
            relators.push(Relator {
                id: format!("R4_{i}_{j}"),
                lhs: vec![rho(i), rho(j)],
                rhs: vec![rho(j), rho(i)],
            });
        }
    }
    for i in 1..n {
        relators.push(Relator { id: format!("R5_{i}"), lhs: vec![rho(i), rho(i)], rhs: vec![] });
    }
}

fn families_r1_r8(n: usize) -> Vec<Relator> {
    let mut relators = Vec::new();
    for i in 1..=n.saturating_sub(2) {
        relators.push(Relator {
            id: format!("R1_{i}"),
            lhs: vec![sig(i), sig(i + 1), sig(i)],
            rhs: vec![sig(i + 1), sig(i), sig(i + 1)],
        });
    }
    for i in 1..n {
        for j in i + 2..n {
            relators.push(Relator {
                id: format!("R2_{i}_{j}"),
                lhs: vec![sig(i), sig(j)],
                rhs: vec![sig(j), sig(i)],
            });
        }
    }
    push_rho_families(n, &mut relators);
    for i in 1..n {
        for j in 1..n {
            if i.abs_diff(j) > 1 {
                relators.push(Relator {
                    id: format!("R6_{i}_{j}"),
                    lhs: vec![sig(i), rho(j)],
                    rhs: vec![rho(j), sig(i)],
                });
            }
        }
    }
    for i in 1..=n.saturating_sub(2) {
        relators.push(Relator {
            id: format!("R7_{i}"),
            lhs: vec![sig(i), rho(i + 1), rho(i)],
            rhs: vec![rho(i + 1), rho(i), sig(i + 1)],
        });
    }
    for i in 1..=n.saturating_sub(2) {
        relators.push(Relator {
            id: format!("R8_{i}"),
            lhs: vec![rho(i), sig(i + 1), sig(i)],
            rhs: vec![sig(i + 1), sig(i), rho(i + 1)],
        });
    }
    relators
}

/// How relators are checked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Evaluate both sides in the normal form. Complete, but only meaningful
    /// for the UVB presentation, whose word problem the normal form solves.
    NormalForm,
    /// Free reduction plus `ρ_i² = 1` only. Sound but incomplete: a word that
    /// does not reduce to the empty word gets `UNKNOWN`, never `FAIL`.
    Syntactic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelatorStatus {
    #[serde(rename = "OK")]
    Ok,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for RelatorStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelatorStatus::Ok => write!(f, "OK"),
            RelatorStatus::Fail => write!(f, "FAIL"),
            RelatorStatus::Unknown => write!(f, "UNKNOWN"),
        }
    }
}

/// Per-relator verification results plus summary counts.
#[derive(Debug, Clone, Serialize)]
pub struct PresentationReport {
    pub presentation: PresentationName,
    pub n: usize,
    pub engine: Engine,
    pub lines: Vec<(String, RelatorStatus)>,
    pub ok: usize,
    pub fail: usize,
    pub unknown: usize,
}

impl PresentationReport {
    pub fn all_ok(&self) -> bool {
        self.fail == 0 && self.unknown == 0
    }
}

/// Verifies every relator of a presentation under the chosen engine.
///
/// With [`Engine::NormalForm`] (UVB only) both sides are rewritten and
/// compared — a hard check that the normal form genuinely represents the
/// quotient. With [`Engine::Syntactic`] the relator `lhs·rhs⁻¹` is reduced
/// using free cancellation and `ρ_i² = 1`; `UNKNOWN` is allowed.
pub fn verify_presentation(
    table: &PresentationTable,
    engine: Engine,
) -> Result<PresentationReport, UvbError> {
    verify_presentation_with_workers(table, engine, 1)
}

/// As [`verify_presentation`], with the relator list partitioned across
/// `workers` threads. Shards merge in declaration order, so the report is
/// identical for every worker count.
pub fn verify_presentation_with_workers(
    table: &PresentationTable,
    engine: Engine,
    workers: usize,
) -> Result<PresentationReport, UvbError> {
    if engine == Engine::NormalForm && table.name != PresentationName::Uvb {
        return Err(UvbError::EngineMismatch);
    }
    let workers = workers.max(1).min(table.relators.len().max(1));
    let chunk = table.relators.len().div_ceil(workers);
    let shards: Vec<Result<Vec<(String, RelatorStatus)>, UvbError>> = if workers == 1 {
        vec![verify_relator_slice(&table.relators, engine, table.n)]
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = table
                .relators
                .chunks(chunk)
                .map(|slice| scope.spawn(move || verify_relator_slice(slice, engine, table.n)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("worker panicked")).collect()
        })
    };
    let mut lines = Vec::with_capacity(table.relators.len());
    for shard in shards {
        lines.extend(shard?);
    }
    let (mut ok, mut fail, mut unknown) = (0, 0, 0);
    for (_, status) in &lines {
        match status {
            RelatorStatus::Ok => ok += 1,
            RelatorStatus::Fail => fail += 1,
            RelatorStatus::Unknown => unknown += 1,
        }
    }
    Ok(PresentationReport { presentation: table.name, n: table.n, engine, lines, ok, fail, unknown })
}

fn verify_relator_slice(
    relators: &[Relator],
    engine: Engine,
    n: usize,
) -> Result<Vec<(String, RelatorStatus)>, UvbError> {
    let mut lines = Vec::with_capacity(relators.len());
    for rel in relators {
        let status = match engine {
            Engine::NormalForm => {
                let lhs = rewrite_to_normal_form(&rel.lhs, n)?;
                let rhs = rewrite_to_normal_form(&rel.rhs, n)?;
                if lhs == rhs {
                    RelatorStatus::Ok
                } else {
                    RelatorStatus::Fail
                }
            }
            Engine::Syntactic => {
                let mut word = rel.lhs.clone();
                word.extend(invert_letters(&rel.rhs));
                if syntactic_reduce(&word).is_empty() {
                    RelatorStatus::Ok
                } else {
                    RelatorStatus::Unknown
                }
            }
        };
        lines.push((rel.id.clone(), status));
    }
    Ok(lines)
}

/// Formal inverse of a letter sequence.
pub fn invert_letters(letters: &[Letter]) -> Vec<Letter> {
    letters.iter().rev().map(|l| Letter { gen: l.gen, exp: -l.exp }).collect()
}

/// Reduces a σ/ρ word using free cancellation plus the involution
/// `ρ_i² = 1` (so every ρ exponent is first normalized mod 2). Sound for
/// deciding triviality in any quotient satisfying those relations; empty
/// output means the word is trivial there, nonempty output decides nothing.
pub fn syntactic_reduce(letters: &[Letter]) -> Vec<Letter> {
    let mut stack: Vec<Letter> = Vec::new();
    for letter in letters {
        let exp = match letter.gen {
            Gen::Rho(_) => letter.exp.rem_euclid(2),
            _ => letter.exp,
        };
        if exp == 0 {
            continue;
        }
        let mut pending = Letter { gen: letter.gen, exp };
        loop {
            match stack.last_mut() {
                Some(top) if top.gen == pending.gen => {
                    let mut merged = top.exp + pending.exp;
                    if let Gen::Rho(_) = pending.gen {
                        merged = merged.rem_euclid(2);
                    }
                    stack.pop();
                    if merged == 0 {
                        break;
                    }
                    pending = Letter { gen: pending.gen, exp: merged };
                    // Re-run the loop: the new top may also merge.
                }
                _ => {
                    stack.push(pending);
                    break;
                }
            }
        }
    }
    stack
}

/// Exhaustive Eq.-style conjugation check used by tests and the acceptance
/// suite: `ι(s) λ_{i,j} ι(s)⁻¹ = λ_{s(i), s(j)}` for all `s` and all pairs.
pub fn conjugation_rule_holds(n: usize) -> bool {
    for s in Permutation::all(n) {
        let is = iota(&s);
        let is_inv = is.inverse();
        for (i, j) in ordered_pairs(n) {
            let lhs = is.mul(&embed_lambda(i, j, n).unwrap()).mul(&is_inv);
            let rhs = embed_lambda(s.apply(i), s.apply(j), n).unwrap();
            if lhs != rhs {
                return false;
            }
        }
    }
    true
}

/// Writes a normal form back as a σ/ρ generator word: each λ factor letter
/// through [`expand_lambda`], then the permutation part as ρ letters. Inverse
/// to [`evaluate_word`] up to equality in the group.
pub fn element_to_word(g: &UvbElement) -> Vec<Letter> {
    let n = g.n();
    let mut letters = Vec::new();
    for (&(lo, hi), word) in g.lam().factors() {
        for &(sym, e) in word.runs() {
            let (i, j) = match sym {
                crate::words::F2Gen::A => (lo, hi),
                crate::words::F2Gen::B => (hi, lo),
            };
            let expansion = expand_lambda(i, j, n).expect("stored factor keys are valid");
            let step = if e > 0 { expansion } else { invert_letters(&expansion) };
            for _ in 0..e.unsigned_abs() {
                letters.extend(step.iter().copied());
            }
        }
    }
    for k in g.perm().adjacent_transposition_decomposition() {
        letters.push(Letter { gen: Gen::Rho(k), exp: 1 });
    }
    letters
}

/// Test-support: a deterministic random σ/ρ word.
pub fn random_sigma_rho_word(
    rng: &mut crate::rng::SplitMix64,
    n: usize,
    max_len: usize,
) -> Vec<Letter> {
    let len = rng.below(max_len as u64 + 1) as usize;
    (0..len)
        .map(|_| {
            let i = 1 + rng.below(n as u64 - 1) as usize;
            let exp = if rng.below(2) == 0 { 1 } else { -1 };
            let gen = if rng.below(2) == 0 { Gen::Sigma(i) } else { Gen::Rho(i) };
            Letter { gen, exp }
        })
        .collect()
}

/// Test-support: the permutation image of a σ/ρ word computed directly in
/// `S_n`, with no use of the rewriter. Serves as the independent oracle for
/// `φ ∘ NF`.
pub fn permutation_image(letters: &[Letter], n: usize) -> Result<Permutation, UvbError> {
    let mut out = Permutation::identity(n);
    for letter in letters {
        let i = match letter.gen {
            Gen::Sigma(i) | Gen::Rho(i) => i,
            Gen::Lambda(i, j) => {
                return Err(UvbError::LambdaInWord(format!("l{i},{j}")));
            }
        };
        let s = Permutation::transposition(i, n)
            .map_err(|_| UvbError::IndexOutOfRange { index: i, n })?;
        if letter.exp.rem_euclid(2) == 1 {
            out = out.compose(&s);
        }
    }
    Ok(out)
}

/// Test-support: a random normal-form element with small support.
pub fn random_uvb(rng: &mut crate::rng::SplitMix64, n: usize, lam_len: usize) -> UvbElement {
    let mut lam = UvpElement::identity(n);
    for _ in 0..lam_len {
        let i = 1 + rng.below(n as u64) as usize;
        let mut j = 1 + rng.below(n as u64) as usize;
        if j == i {
            j = if i == n { 1 } else { i + 1 };
        }
        let e = if rng.below(2) == 0 { 1 } else { -1 };
        lam = lam.mul(&UvpElement::generator_power(i, j, e, n).unwrap());
    }
    let mut images: Vec<usize> = (1..=n).collect();
    for k in (1..n).rev() {
        let pick = rng.below(k as u64 + 1) as usize;
        images.swap(k, pick);
    }
    UvbElement { lam, perm: Permutation::from_images(images).unwrap() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;
    use crate::words::parse_word;

    fn nf(text: &str, n: usize) -> UvbElement {
        rewrite_to_normal_form(&parse_word(text, n).unwrap(), n).unwrap()
    }

    #[test]
    fn act_examples() {
        let n = 3;
        let s2 = Permutation::transposition(2, n).unwrap();
        let l12 = UvpElement::generator(1, 2, n).unwrap();
        assert_eq!(act(&s2, &l12), UvpElement::generator(1, 3, n).unwrap());

        let x = UvpElement::generator_power(1, 2, -1, n)
            .unwrap()
            .mul(&UvpElement::generator(2, 1, n).unwrap());
        assert_eq!(act(&Permutation::identity(n), &x), x);
        let s1 = Permutation::transposition(1, n).unwrap();
        let expected = UvpElement::generator_power(2, 1, -1, n)
            .unwrap()
            .mul(&UvpElement::generator(1, 2, n).unwrap());
        assert_eq!(act(&s1, &x), expected);
    }

    #[test]
    fn act_is_an_action() {
        let mut rng = SplitMix64::new(0xac7);
        for _ in 0..300 {
            let n = 2 + rng.below(4) as usize;
            let x = random_uvb(&mut rng, n, 4).lam().clone();
            let s = random_uvb(&mut rng, n, 0).perm().clone();
            let t = random_uvb(&mut rng, n, 0).perm().clone();
            assert_eq!(act(&s.compose(&t), &x), act(&s, &act(&t, &x)));
        }
    }

    #[test]
    fn product_rule_example() {
        // (λ_{1,2}, s_1) · (λ_{1,2}, id) = (λ_{1,2} λ_{2,1}, s_1)
        let n = 2;
        let s1 = Permutation::transposition(1, n).unwrap();
        let l12 = UvpElement::generator(1, 2, n).unwrap();
        let g = UvbElement::from_parts(l12.clone(), s1.clone()).unwrap();
        let h = UvbElement::from_parts(l12.clone(), Permutation::identity(n)).unwrap();
        let expected_lam = l12.mul(&UvpElement::generator(2, 1, n).unwrap());
        assert_eq!(g.mul(&h), UvbElement::from_parts(expected_lam, s1).unwrap());
    }

    #[test]
    fn group_laws_randomized() {
        let mut rng = SplitMix64::new(0xbb);
        for _ in 0..300 {
            let n = 2 + rng.below(4) as usize;
            let g = random_uvb(&mut rng, n, 3);
            let h = random_uvb(&mut rng, n, 3);
            let k = random_uvb(&mut rng, n, 3);
            assert!(g.mul(&g.inverse()).is_identity());
            assert_eq!(g.mul(&h).mul(&k), g.mul(&h.mul(&k)));
        }
    }

    #[test]
    fn iota_is_a_homomorphism() {
        let n = 4;
        for s in Permutation::all(n) {
            for t in Permutation::all(n) {
                assert_eq!(iota(&s).mul(&iota(&t)), iota(&s.compose(&t)));
            }
        }
    }

    #[test]
    fn rewriter_examples() {
        // Oracles from Eq-style hand computation.
        let e = nf("s1 r1", 2);
        assert_eq!(
            e,
            UvbElement::from_parts(
                UvpElement::generator_power(1, 2, -1, 2).unwrap(),
                Permutation::identity(2)
            )
            .unwrap()
        );
        assert_eq!(nf("r1 s1^-1", 4), embed_lambda(1, 2, 4).unwrap());
        assert_eq!(nf("s1^-1 r1", 4), embed_lambda(2, 1, 4).unwrap());
        assert!(nf("r1 r1", 3).is_identity());
        assert!(nf("s2 s2^-1", 3).is_identity());
    }

    #[test]
    fn rewriter_rejects_lambda() {
        let letters = parse_word("l1,2", 3).unwrap();
        assert!(matches!(rewrite_to_normal_form(&letters, 3), Err(UvbError::LambdaInWord(_))));
        assert!(evaluate_word(&letters, 3).is_ok());
    }

    #[test]
    fn expand_lambda_round_trip() {
        assert_eq!(
            crate::words::print_word(&expand_lambda(1, 3, 3).unwrap()),
            "r2 r1 s1^-1 r2"
        );
        for n in 2..=5 {
            for (i, j) in ordered_pairs(n) {
                let expanded = expand_lambda(i, j, n).unwrap();
                let rewritten = rewrite_to_normal_form(&expanded, n).unwrap();
                assert_eq!(rewritten, embed_lambda(i, j, n).unwrap(), "l{i},{j} n={n}");
            }
        }
    }

    #[test]
    fn phi_iota_kernel() {
        let n = 3;
        let w = nf("s1 s2", n);
        assert_eq!(phi(&w), Permutation::from_images(vec![2, 3, 1]).unwrap());
        assert!(in_kernel(&embed_lambda(2, 5, 5).unwrap()));
        assert!(!in_kernel(&nf("s1", n)));
        for s in Permutation::all(n) {
            assert_eq!(phi(&iota(&s)), s);
        }
    }

    #[test]
    fn rewriter_matches_independent_permutation_image() {
        let mut rng = SplitMix64::new(0xfeed);
        for _ in 0..400 {
            let n = 2 + rng.below(4) as usize;
            let word = random_sigma_rho_word(&mut rng, n, 20);
            let e = rewrite_to_normal_form(&word, n).unwrap();
            assert_eq!(phi(&e), permutation_image(&word, n).unwrap());
        }
    }

    #[test]
    fn rewriter_is_multiplicative() {
        let mut rng = SplitMix64::new(0xdada);
        for _ in 0..300 {
            let n = 2 + rng.below(4) as usize;
            let u = random_sigma_rho_word(&mut rng, n, 15);
            let v = random_sigma_rho_word(&mut rng, n, 15);
            let mut uv = u.clone();
            uv.extend(v.iter().copied());
            let nf_uv = rewrite_to_normal_form(&uv, n).unwrap();
            let product =
                rewrite_to_normal_form(&u, n).unwrap().mul(&rewrite_to_normal_form(&v, n).unwrap());
            assert_eq!(nf_uv, product);
            let mut uu_inv = u.clone();
            uu_inv.extend(invert_letters(&u));
            assert!(rewrite_to_normal_form(&uu_inv, n).unwrap().is_identity());
        }
    }

    #[test]
    fn abelianization_examples() {
        assert_eq!(
            abelianize_word(&parse_word("s1", 3).unwrap()),
            UvbAbelianization { sigma_degree: 1, rho_parity: 0 }
        );
        assert_eq!(
            abelianize_word(&parse_word("r1", 3).unwrap()),
            UvbAbelianization { sigma_degree: 0, rho_parity: 1 }
        );
        assert_eq!(
            abelianize_uvb(&embed_lambda(1, 2, 3).unwrap()),
            UvbAbelianization { sigma_degree: -1, rho_parity: 1 }
        );
        assert_eq!(abelianize_uvb(&UvbElement::identity(3)), UvbAbelianization::ZERO);
    }

    #[test]
    fn abelianization_agrees_with_rewriter() {
        let mut rng = SplitMix64::new(0xcafe);
        for _ in 0..500 {
            let n = 2 + rng.below(4) as usize;
            let word = random_sigma_rho_word(&mut rng, n, 25);
            let via_word = abelianize_word(&word);
            let via_nf = abelianize_uvb(&rewrite_to_normal_form(&word, n).unwrap());
            assert_eq!(via_word, via_nf);
        }
    }

    #[test]
    fn abelianization_agrees_on_mixed_words() {
        // Words mixing σ, ρ and λ letters evaluate through embed_lambda; the
        // two abelianization routes must still agree.
        let mut rng = SplitMix64::new(0x31ac);
        for _ in 0..500 {
            let n = 2 + rng.below(4) as usize;
            let len = rng.below(12) as usize;
            let mut word = Vec::with_capacity(len);
            for _ in 0..len {
                let exp = if rng.below(2) == 0 { 1 } else { -1 };
                let gen = match rng.below(3) {
                    0 => Gen::Sigma(1 + rng.below(n as u64 - 1) as usize),
                    1 => Gen::Rho(1 + rng.below(n as u64 - 1) as usize),
                    _ => {
                        let i = 1 + rng.below(n as u64) as usize;
                        let j = if i == n { 1 } else { i + 1 };
                        Gen::Lambda(i, j)
                    }
                };
                word.push(Letter { gen, exp });
            }
            let via_word = abelianize_word(&word);
            let via_nf = abelianize_uvb(&evaluate_word(&word, n).unwrap());
            assert_eq!(via_word, via_nf, "{word:?}");
        }
    }

    #[test]
    fn relator_counts_match_closed_forms() {
        for n in 2..=7 {
            for table in [
                PresentationTable::uvb(n),
                PresentationTable::wb(n),
                PresentationTable::symmetric(n),
            ] {
                assert_eq!(
                    table.relators.len(),
                    table.expected_relator_count(),
                    "{:?} n={n}",
                    table.name
                );
            }
        }
    }

    #[test]
    fn uvb_relators_hold_in_normal_form() {
        for n in 2..=5 {
            let report = verify_presentation(&PresentationTable::uvb(n), Engine::NormalForm).unwrap();
            assert!(report.all_ok(), "n={n}: {:?}", report.lines);
        }
    }

    #[test]
    fn r8_rearranged_example() {
        // r1 s2 s1 r2 s1^-1 s2^-1 is R8 rearranged into relator form.
        let n = 3;
        assert!(nf("r1 s2 s1 r2 s1^-1 s2^-1", n).is_identity());
    }

    #[test]
    fn parallel_verification_matches_serial() {
        let table = PresentationTable::uvb(5);
        let serial = verify_presentation(&table, Engine::NormalForm).unwrap();
        for workers in [2, 3, 8, 100] {
            let parallel =
                verify_presentation_with_workers(&table, Engine::NormalForm, workers).unwrap();
            assert_eq!(parallel.lines, serial.lines);
            assert_eq!((parallel.ok, parallel.fail, parallel.unknown), (serial.ok, 0, 0));
        }
    }

    #[test]
    fn normal_form_engine_rejects_wb() {
        let result = verify_presentation(&PresentationTable::wb(3), Engine::NormalForm);
        assert!(matches!(result, Err(UvbError::EngineMismatch)));
    }

    #[test]
    fn syntactic_engine_is_honest() {
        // ρ involutions reduce; braid relators are not freely trivial, so the
        // sound-but-incomplete engine must answer UNKNOWN, never FAIL.
        let report = verify_presentation(&PresentationTable::wb(4), Engine::Syntactic).unwrap();
        assert_eq!(report.fail, 0);
        for (id, status) in &report.lines {
            if id.starts_with("R5") {
                assert_eq!(*status, RelatorStatus::Ok, "{id}");
            }
        }
        assert!(report.unknown > 0);
    }

    #[test]
    fn syntactic_reduce_handles_rho_powers() {
        let w = parse_word("r1^2", 3).unwrap();
        assert!(syntactic_reduce(&w).is_empty());
        let w = parse_word("r1^3 r1", 3).unwrap();
        assert!(syntactic_reduce(&w).is_empty());
        let w = parse_word("s1 r2 r2 s1^-1", 3).unwrap();
        assert!(syntactic_reduce(&w).is_empty());
        let w = parse_word("s1 r2 s1^-1", 3).unwrap();
        assert_eq!(syntactic_reduce(&w).len(), 3);
    }

    #[test]
    fn conjugation_rule_exhaustive_small() {
        assert!(conjugation_rule_holds(3));
    }

    #[test]
    fn centralizer_of_pure_subgroup_is_trivial_small() {
        // n = 2: all elements with lam letter count ≤ 3.
        for n in [2usize, 3] {
            let max_len = if n == 2 { 3 } else { 2 };
            let pairs = ordered_pairs(n);
            // Enumerate lam parts as products of ≤ max_len generator letters.
            let mut lams = vec![UvpElement::identity(n)];
            for _ in 0..max_len {
                let mut next = Vec::new();
                for x in &lams {
                    for &(i, j) in &pairs {
                        for e in [1i64, -1] {
                            next.push(x.mul(&UvpElement::generator_power(i, j, e, n).unwrap()));
                        }
                    }
                }
                lams.extend(next);
                lams.sort();
                lams.dedup();
            }
            for lam in &lams {
                for perm in Permutation::all(n) {
                    let g = UvbElement::from_parts(lam.clone(), perm).unwrap();
                    assert_eq!(
                        commutes_with_all_pure_generators(&g),
                        g.is_identity(),
                        "n={n} g={g}"
                    );
                }
            }
        }
    }

    #[test]
    fn element_to_word_round_trip() {
        let mut rng = SplitMix64::new(0x0e70);
        for _ in 0..300 {
            let n = 2 + rng.below(4) as usize;
            let g = random_uvb(&mut rng, n, 4);
            let word = element_to_word(&g);
            assert_eq!(evaluate_word(&word, n).unwrap(), g);
        }
    }

    #[test]
    fn commutes_examples() {
        let n = 3;
        assert!(commutes_with_all_pure_generators(&UvbElement::identity(n)));
        let s1 = Permutation::transposition(1, n).unwrap();
        assert!(!commutes_with_all_pure_generators(&iota(&s1)));
        assert!(!commutes_with_all_pure_generators(&embed_lambda(1, 2, n).unwrap()));
    }
}
