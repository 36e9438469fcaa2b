//! Finite groups as explicit multiplication tables.
//!
//! Element ids are `0..N` with the identity at id 0 (the file format pins
//! that too). Tables validate on construction: Latin-square rows and columns,
//! identity and inverse laws exactly, associativity exhaustively up to
//! order 256 and on sampled triples beyond.

use std::fmt::Write as _;

use thiserror::Error;

use crate::perms::Permutation;
use crate::rng::SplitMix64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableError {
    #[error("order must be at least 1")]
    EmptyTable,
    #[error("order {0} exceeds the supported maximum {1}")]
    TooLarge(usize, usize),
    #[error("malformed table file: {0}")]
    Malformed(String),
    #[error("row {0} is not a permutation of element ids")]
    BadRow(usize),
    #[error("column {0} is not a permutation of element ids")]
    BadColumn(usize),
    #[error("id 0 is not a two-sided identity")]
    BadIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("associativity fails on ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
}

pub const MAX_TABLE_ORDER: usize = 5000;
const EXHAUSTIVE_ASSOC_LIMIT: usize = 256;

/// A finite group of order `N` as a flat `N×N` multiplication table over
/// element ids, with the identity at id 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupTable {
    order: usize,
    mul: Vec<u16>,
    inv: Vec<u16>,
    labels: Vec<String>,
}

impl FiniteGroupTable {
    /// Validates and wraps a multiplication table.
    pub fn new(order: usize, mul: Vec<u16>, labels: Vec<String>) -> Result<Self, TableError> {
        if order == 0 {
            return Err(TableError::EmptyTable);
        }
        if order > MAX_TABLE_ORDER {
            return Err(TableError::TooLarge(order, MAX_TABLE_ORDER));
        }
        assert_eq!(mul.len(), order * order);
        assert_eq!(labels.len(), order);

        // Latin square rows/columns.
        for a in 0..order {
            let mut seen = vec![false; order];
            for b in 0..order {
                let v = mul[a * order + b] as usize;
                if v >= order || seen[v] {
                    return Err(TableError::BadRow(a));
                }
                seen[v] = true;
            }
        }
        for b in 0..order {
            let mut seen = vec![false; order];
            for a in 0..order {
                let v = mul[a * order + b] as usize;
                if seen[v] {
                    return Err(TableError::BadColumn(b));
                }
                seen[v] = true;
            }
        }
        // Identity at 0.
        for a in 0..order {
            if mul[a] as usize != a || mul[a * order] as usize != a {
                return Err(TableError::BadIdentity);
            }
        }
        // Inverses.
        let mut inv = vec![u16::MAX; order];
        for a in 0..order {
            match (0..order).find(|&b| mul[a * order + b] == 0 && mul[b * order + a] == 0) {
                Some(b) => inv[a] = b as u16,
                None => return Err(TableError::NoInverse(a)),
            }
        }
        // Associativity: exhaustive when affordable, sampled otherwise.
        let check = |a: usize, b: usize, c: usize| -> Result<(), TableError> {
            let ab_c = mul[mul[a * order + b] as usize * order + c];
            let a_bc = mul[a * order + mul[b * order + c] as usize];
            if ab_c != a_bc {
                return Err(TableError::NotAssociative(a, b, c));
            }
            Ok(())
        };
        if order <= EXHAUSTIVE_ASSOC_LIMIT {
            for a in 0..order {
                for b in 0..order {
                    for c in 0..order {
                        check(a, b, c)?;
                    }
                }
            }
        } else {
            let mut rng = SplitMix64::new(0x7ab1e);
            for _ in 0..1_000_000 {
                let a = rng.below(order as u64) as usize;
                let b = rng.below(order as u64) as usize;
                let c = rng.below(order as u64) as usize;
                check(a, b, c)?;
            }
        }
        Ok(FiniteGroupTable { order, mul, inv, labels })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn pow(&self, a: usize, e: i64) -> usize {
        let base = if e < 0 { self.inv(a) } else { a };
        let mut out = 0;
        for _ in 0..e.unsigned_abs() {
            out = self.mul(out, base);
        }
        out
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a..self.order).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Sorted element ids of the subgroup generated by `seed`.
    pub fn subgroup_closure(&self, seed: &[usize]) -> Vec<usize> {
        let mut in_set = vec![false; self.order];
        in_set[0] = true;
        let mut frontier = vec![0usize];
        while let Some(x) = frontier.pop() {
            for &g in seed {
                for y in [self.mul(x, g), self.mul(x, self.inv(g))] {
                    if !in_set[y] {
                        in_set[y] = true;
                        frontier.push(y);
                    }
                }
            }
        }
        (0..self.order).filter(|&x| in_set[x]).collect()
    }

    /// A subgroup is cyclic iff one of its elements generates all of it.
    pub fn subgroup_is_cyclic(&self, elements: &[usize]) -> bool {
        elements.iter().any(|&g| self.element_order(g) == elements.len())
    }

    /// Serializes in the table file format: first line `N`, then `N` rows of
    /// `N` space-separated ids.
    pub fn to_table_file(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.order);
        for a in 0..self.order {
            let row: Vec<String> =
                (0..self.order).map(|b| self.mul(a, b).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }

    /// Parses the table file format. The identity must be id 0; all group
    /// axioms are re-validated.
    pub fn from_table_file(text: &str) -> Result<Self, TableError> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let order: usize = lines
            .next()
            .ok_or_else(|| TableError::Malformed("missing order line".into()))?
            .trim()
            .parse()
            .map_err(|_| TableError::Malformed("order is not an integer".into()))?;
        if order == 0 {
            return Err(TableError::EmptyTable);
        }
        if order > MAX_TABLE_ORDER {
            return Err(TableError::TooLarge(order, MAX_TABLE_ORDER));
        }
        let mut mul = Vec::with_capacity(order * order);
        for (row_no, line) in lines.enumerate() {
            if row_no >= order {
                return Err(TableError::Malformed("too many rows".into()));
            }
            let entries: Vec<u16> = line
                .split_whitespace()
                .map(|tok| tok.parse::<u16>())
                .collect::<Result<_, _>>()
                .map_err(|_| TableError::Malformed(format!("row {row_no}: bad id")))?;
            if entries.len() != order {
                return Err(TableError::Malformed(format!(
                    "row {row_no} has {} entries, expected {order}",
                    entries.len()
                )));
            }
            mul.extend(entries);
        }
        if mul.len() != order * order {
            return Err(TableError::Malformed("missing rows".into()));
        }
        let labels = (0..order).map(|k| k.to_string()).collect();
        Self::new(order, mul, labels)
    }
}

/// A symmetric-group table plus its element list, enabling permutation-aware
/// classification. Elements are enumerated in lexicographic one-line order,
/// so the identity gets id 0.
#[derive(Debug, Clone)]
pub struct SymmetricGroupTable {
    pub table: FiniteGroupTable,
    pub perms: Vec<Permutation>,
}

impl SymmetricGroupTable {
    pub fn degree(&self) -> usize {
        self.perms[0].degree()
    }

    pub fn perm_id(&self, p: &Permutation) -> usize {
        self.perms.binary_search(p).expect("permutation of the right degree")
    }
}

/// The symmetric group `S_m` with composition `(a ∘ b)`.
pub fn symmetric_group_table(m: usize) -> Result<SymmetricGroupTable, TableError> {
    if m == 0 {
        return Err(TableError::EmptyTable);
    }
    let perms = Permutation::all(m);
    let order = perms.len();
    if order > MAX_TABLE_ORDER {
        return Err(TableError::TooLarge(order, MAX_TABLE_ORDER));
    }
    let mut mul = vec![0u16; order * order];
    for (a, pa) in perms.iter().enumerate() {
        for (b, pb) in perms.iter().enumerate() {
            let c = pa.compose(pb);
            let id = perms.binary_search(&c).expect("closure");
            mul[a * order + b] = id as u16;
        }
    }
    let labels = perms.iter().map(|p| p.to_string()).collect();
    let table = FiniteGroupTable::new(order, mul, labels)?;
    Ok(SymmetricGroupTable { table, perms })
}

/// The cyclic group `Z_m` with addition mod m.
pub fn cyclic_table(m: usize) -> Result<FiniteGroupTable, TableError> {
    if m == 0 {
        return Err(TableError::EmptyTable);
    }
    if m > MAX_TABLE_ORDER {
        return Err(TableError::TooLarge(m, MAX_TABLE_ORDER));
    }
    let mut mul = vec![0u16; m * m];
    for a in 0..m {
        for b in 0..m {
            mul[a * m + b] = ((a + b) % m) as u16;
        }
    }
    let labels = (0..m).map(|k| k.to_string()).collect();
    FiniteGroupTable::new(m, mul, labels)
}

/// The direct product `G × H`, with id `a·|H| + b`.
pub fn product_table(
    g: &FiniteGroupTable,
    h: &FiniteGroupTable,
) -> Result<FiniteGroupTable, TableError> {
    let order = g.order() * h.order();
    if order > MAX_TABLE_ORDER {
        return Err(TableError::TooLarge(order, MAX_TABLE_ORDER));
    }
    let mut mul = vec![0u16; order * order];
    let idx = |a: usize, b: usize| a * h.order() + b;
    for a1 in 0..g.order() {
        for b1 in 0..h.order() {
            for a2 in 0..g.order() {
                for b2 in 0..h.order() {
                    mul[idx(a1, b1) * order + idx(a2, b2)] =
                        idx(g.mul(a1, a2), h.mul(b1, b2)) as u16;
                }
            }
        }
    }
    let mut labels = Vec::with_capacity(order);
    for a in 0..g.order() {
        for b in 0..h.order() {
            labels.push(format!("({},{})", g.label(a), h.label(b)));
        }
    }
    FiniteGroupTable::new(order, mul, labels)
}
