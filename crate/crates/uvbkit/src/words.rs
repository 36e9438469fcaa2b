//! Freely reduced words over indexed alphabets, the text grammar for
//! generator words, and Stallings-folding membership in finitely generated
//! subgroups of free groups.
//!
//! Words are stored run-length encoded (base symbol plus exponent); long runs
//! produced by rewriting and the census stay cheap to reduce. Each alphabet is
//! a distinct Rust type, so a σ/ρ word can never be silently mixed with a
//! rank-2 factor word — the compiler enforces what would otherwise be a
//! runtime "alphabet mismatch" check.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

/// Errors from the word grammar and letter constructors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("malformed token {0:?}")]
    MalformedToken(String),
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("lambda generator needs two distinct indices, got l{0},{0}")]
    EqualIndices(usize),
    #[error("zero exponent in token {0:?}")]
    ZeroExponent(String),
}

/// A generator symbol of `UVB_n`: `σ_i`, `ρ_i` (with `i` in `[1, n-1]`) or the
/// pure generator `λ_{i,j}` (ordered pair, `i ≠ j`, both in `[1, n]`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Gen {
    Sigma(usize),
    Rho(usize),
    Lambda(usize, usize),
}

impl Gen {
    /// Validates the indices against the ambient strand count.
    pub fn validate(self, n: usize) -> Result<(), WordError> {
        match self {
            Gen::Sigma(i) | Gen::Rho(i) => {
                if i == 0 || i + 1 > n {
                    Err(WordError::IndexOutOfRange { index: i, n })
                } else {
                    Ok(())
                }
            }
            Gen::Lambda(i, j) => {
                if i == j {
                    return Err(WordError::EqualIndices(i));
                }
                for idx in [i, j] {
                    if idx == 0 || idx > n {
                        return Err(WordError::IndexOutOfRange { index: idx, n });
                    }
                }
                Ok(())
            }
        }
    }

    fn token(&self) -> String {
        match self {
            Gen::Sigma(i) => format!("s{i}"),
            Gen::Rho(i) => format!("r{i}"),
            Gen::Lambda(i, j) => format!("l{i},{j}"),
        }
    }
}

/// One letter of a generator word: a symbol with a nonzero exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub gen: Gen,
    pub exp: i64,
}

impl Letter {
    pub fn new(gen: Gen, exp: i64, n: usize) -> Result<Self, WordError> {
        if exp == 0 {
            return Err(WordError::ZeroExponent(gen.token()));
        }
        gen.validate(n)?;
        Ok(Letter { gen, exp })
    }
}

/// Parses a whitespace-separated generator word.
///
/// Grammar: `token := ("s"|"r") DIGITS | "l" DIGITS "," DIGITS`, each token
/// optionally suffixed `^SIGNED_INT`; `DIGITS` is a base-10 integer ≥ 1. The
/// single token `1` denotes the empty word. Indices are validated against `n`.
pub fn parse_word(text: &str, n: usize) -> Result<Vec<Letter>, WordError> {
    let mut letters = Vec::new();
    for tok in text.split_ascii_whitespace() {
        if tok == "1" {
            continue;
        }
        letters.push(parse_token(tok, n)?);
    }
    Ok(letters)
}

fn parse_token(tok: &str, n: usize) -> Result<Letter, WordError> {
    let bad = || WordError::MalformedToken(tok.to_string());
    let (body, exp) = match tok.split_once('^') {
        Some((body, e)) => {
            let exp: i64 = e.parse().map_err(|_| bad())?;
            if exp == 0 {
                return Err(WordError::ZeroExponent(tok.to_string()));
            }
            (body, exp)
        }
        None => (tok, 1),
    };
    let mut chars = body.chars();
    let kind = chars.next().ok_or_else(bad)?;
    let rest = chars.as_str();
    let gen = match kind {
        's' => Gen::Sigma(parse_index(rest).ok_or_else(bad)?),
        'r' => Gen::Rho(parse_index(rest).ok_or_else(bad)?),
        'l' => {
            let (a, b) = rest.split_once(',').ok_or_else(bad)?;
            Gen::Lambda(parse_index(a).ok_or_else(bad)?, parse_index(b).ok_or_else(bad)?)
        }
        _ => return Err(bad()),
    };
    Letter::new(gen, exp, n)
}

fn parse_index(s: &str) -> Option<usize> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) || s.starts_with('0') {
        return None;
    }
    s.parse().ok()
}

/// Prints a letter sequence in the same grammar `parse_word` accepts.
/// The empty sequence prints as `1`.
pub fn print_word(letters: &[Letter]) -> String {
    if letters.is_empty() {
        return "1".to_string();
    }
    letters
        .iter()
        .map(|l| {
            if l.exp == 1 {
                l.gen.token()
            } else {
                format!("{}^{}", l.gen.token(), l.exp)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Free reduction of a letter sequence: adjacent letters with the same base
/// symbol merge, zero exponents vanish.
pub fn free_reduce(letters: &[Letter]) -> Vec<Letter> {
    let word = FreeWord::from_runs(letters.iter().map(|l| (l.gen, l.exp)));
    word.runs().iter().map(|&(gen, exp)| Letter { gen, exp }).collect()
}

/// Marker bound for word symbols. Blanket-implemented; `Ord` keeps every
/// derived structure deterministic.
pub trait Symbol: Copy + Eq + Ord + fmt::Debug {}
impl<T: Copy + Eq + Ord + fmt::Debug> Symbol for T {}

/// The two generators of a rank-2 free factor of `UVP_n`. By convention `A`
/// encodes `λ_{min,max}` and `B` encodes `λ_{max,min}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum F2Gen {
    A,
    B,
}

impl F2Gen {
    pub fn flipped(self) -> F2Gen {
        match self {
            F2Gen::A => F2Gen::B,
            F2Gen::B => F2Gen::A,
        }
    }
}

/// A freely reduced word over the alphabet `S`, stored as runs
/// `(symbol, exponent)` with no zero exponents and no two adjacent runs on the
/// same symbol. The empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FreeWord<S> {
    runs: Vec<(S, i64)>,
}

impl<S: Symbol> Default for FreeWord<S> {
    fn default() -> Self {
        FreeWord { runs: Vec::new() }
    }
}

impl<S: Symbol> FreeWord<S> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn generator(s: S) -> Self {
        FreeWord { runs: vec![(s, 1)] }
    }

    /// Reduces an arbitrary run sequence. Idempotent: feeding the runs of a
    /// `FreeWord` back in reproduces it.
    pub fn from_runs(raw: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut runs: Vec<(S, i64)> = Vec::new();
        for (s, e) in raw {
            if e == 0 {
                continue;
            }
            match runs.last_mut() {
                Some((top, te)) if *top == s => {
                    *te += e;
                    if *te == 0 {
                        runs.pop();
                    }
                }
                _ => runs.push((s, e)),
            }
        }
        FreeWord { runs }
    }

    pub fn runs(&self) -> &[(S, i64)] {
        &self.runs
    }

    pub fn is_identity(&self) -> bool {
        self.runs.is_empty()
    }

    /// Number of single letters, counting multiplicity: `Σ |e|`.
    pub fn letter_len(&self) -> usize {
        self.runs.iter().map(|&(_, e)| e.unsigned_abs() as usize).sum()
    }

    /// Exponent sum over the whole word.
    pub fn total_exponent(&self) -> i64 {
        self.runs.iter().map(|&(_, e)| e).sum()
    }

    /// Exponent sum per symbol.
    pub fn exponent_sums(&self) -> BTreeMap<S, i64> {
        let mut out = BTreeMap::new();
        for &(s, e) in &self.runs {
            *out.entry(s).or_insert(0) += e;
        }
        out.retain(|_, v| *v != 0);
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::from_runs(self.runs.iter().chain(other.runs.iter()).copied())
    }

    pub fn inverse(&self) -> Self {
        FreeWord { runs: self.runs.iter().rev().map(|&(s, e)| (s, -e)).collect() }
    }

    pub fn pow(&self, e: i64) -> Self {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Self::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `u v u⁻¹ v⁻¹`, freely reduced. Nonempty output certifies that `u` and
    /// `v` do not commute in the free group.
    pub fn commutator(&self, other: &Self) -> Self {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Single letters with sign, e.g. `a^-2 b` yields
    /// `(a,false), (a,false), (b,true)`.
    pub fn units(&self) -> impl Iterator<Item = (S, bool)> + '_ {
        self.runs
            .iter()
            .flat_map(|&(s, e)| std::iter::repeat_n((s, e > 0), e.unsigned_abs() as usize))
    }

    /// Relabels every symbol. The map must be injective on the symbols that
    /// occur, otherwise the result may not be reduced.
    pub fn map_symbols<T: Symbol>(&self, f: impl Fn(S) -> T) -> FreeWord<T> {
        FreeWord::from_runs(self.runs.iter().map(|&(s, e)| (f(s), e)))
    }
}

impl FreeWord<F2Gen> {
    /// Swaps `A ↔ B` in place of each letter. Used when a factor's index pair
    /// changes orientation under the symmetric-group action.
    pub fn flip_ab(&self) -> Self {
        // A relabeling by a bijection keeps the word reduced.
        FreeWord { runs: self.runs.iter().map(|&(s, e)| (s.flipped(), e)).collect() }
    }
}

/// Decides membership of `candidate` in the subgroup generated by
/// `generators` inside the free group on `S`, by building the folded subgroup
/// automaton. Exact.
pub fn subgroup_membership<S: Symbol>(generators: &[FreeWord<S>], candidate: &FreeWord<S>) -> bool {
    FoldedGraph::new(generators).accepts(candidate)
}

/// The Stallings automaton of a finitely generated subgroup of a free group:
/// a folded labeled graph with a base vertex. Reduced words in the subgroup
/// are exactly the words tracing a closed path at the base vertex.
#[derive(Debug, Clone)]
pub struct FoldedGraph<S> {
    /// Deterministic transitions per state; `true` reads the symbol, `false`
    /// reads its inverse.
    next: Vec<BTreeMap<(S, bool), usize>>,
    base: usize,
}

impl<S: Symbol> FoldedGraph<S> {
    pub fn new(generators: &[FreeWord<S>]) -> Self {
        let mut builder = GraphBuilder::new();
        for g in generators {
            builder.add_loop(g);
        }
        builder.fold()
    }

    pub fn accepts(&self, candidate: &FreeWord<S>) -> bool {
        let mut state = self.base;
        for (sym, fwd) in candidate.units() {
            match self.next[state].get(&(sym, fwd)) {
                Some(&t) => state = t,
                None => return false,
            }
        }
        state == self.base
    }

    /// Number of states after folding; part of the stored certificate.
    pub fn state_count(&self) -> usize {
        self.next.len()
    }
}

struct GraphBuilder<S> {
    parent: Vec<usize>,
    next: Vec<BTreeMap<(S, bool), usize>>,
    /// State pairs that must be identified, discovered when an edge slot is
    /// already occupied by a different target.
    pending: Vec<(usize, usize)>,
}

impl<S: Symbol> GraphBuilder<S> {
    fn new() -> Self {
        let mut b = GraphBuilder { parent: Vec::new(), next: Vec::new(), pending: Vec::new() };
        b.new_state(); // state 0 is the base vertex
        b
    }

    fn new_state(&mut self) -> usize {
        self.parent.push(self.parent.len());
        self.next.push(BTreeMap::new());
        self.parent.len() - 1
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn add_edge(&mut self, from: usize, key: (S, bool), to: usize) {
        match self.next[from].get(&key) {
            Some(&existing) if existing != to => self.pending.push((existing, to)),
            Some(_) => {}
            None => {
                self.next[from].insert(key, to);
            }
        }
    }

    fn add_loop(&mut self, word: &FreeWord<S>) {
        let units: Vec<(S, bool)> = word.units().collect();
        if units.is_empty() {
            return;
        }
        let mut cur = 0;
        for (k, &(sym, fwd)) in units.iter().enumerate() {
            let target = if k + 1 == units.len() { 0 } else { self.new_state() };
            // Both directions of the same edge.
            self.add_edge(cur, (sym, fwd), target);
            self.add_edge(target, (sym, !fwd), cur);
            cur = target;
        }
    }

    /// Identifies states until every vertex has at most one transition per
    /// labeled direction.
    fn fold(mut self) -> FoldedGraph<S> {
        let mut pending = std::mem::take(&mut self.pending);
        while let Some((a, b)) = pending.pop() {
            let a = self.find(a);
            let b = self.find(b);
            if a == b {
                continue;
            }
            // Merge the smaller transition map into the larger.
            let (keep, drop) =
                if self.next[a].len() >= self.next[b].len() { (a, b) } else { (b, a) };
            self.parent[drop] = keep;
            let moved = std::mem::take(&mut self.next[drop]);
            for (key, t) in moved {
                let t = self.find(t);
                match self.next[keep].get(&key) {
                    Some(&existing) => {
                        let existing = self.find(existing);
                        if existing != t {
                            pending.push((existing, t));
                        }
                    }
                    None => {
                        self.next[keep].insert(key, t);
                    }
                }
            }
        }
        // Compact to the surviving representatives.
        let mut index = BTreeMap::new();
        let mut order = Vec::new();
        for v in 0..self.parent.len() {
            let r = self.find(v);
            if let std::collections::btree_map::Entry::Vacant(slot) = index.entry(r) {
                slot.insert(order.len());
                order.push(r);
            }
        }
        let mut next = vec![BTreeMap::new(); order.len()];
        for (slot, &r) in order.iter().enumerate() {
            let map = std::mem::take(&mut self.next[r]);
            for (key, t) in map {
                let t = self.find(t);
                next[slot].insert(key, index[&t]);
            }
        }
        let base = index[&self.find(0)];
        FoldedGraph { next, base }
    }
}
