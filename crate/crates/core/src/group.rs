//! Discrete groups used as grading targets.
//!
//! Two backends: finite groups given by a Cayley table, and free abelian
//! groups `Z^k` with integer-vector elements.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Axiom, AxiomViolation, Error, Result};

/// A finite group stored as a Cayley table over the indices `0..order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
}

impl FiniteGroup {
    /// Checks the table is a group and records its identity and inverses.
    pub fn from_cayley(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::LengthMismatch {
                what: "cayley table",
                expected: 1,
                found: 0,
            });
        }
        for row in &table {
            if row.len() != n {
                return Err(Error::LengthMismatch {
                    what: "cayley row",
                    expected: n,
                    found: row.len(),
                });
            }
            if let Some(&bad) = row.iter().find(|&&v| v >= n) {
                return Err(Error::IndexOutOfRange {
                    what: "group element",
                    index: bad,
                    size: n,
                });
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| table[e][g] == g && table[g][e] == g))
            .ok_or_else(|| AxiomViolation::new(Axiom::GroupIdentity, ["<none>"]))?;
        let mut inverse = vec![0; n];
        for g in 0..n {
            inverse[g] = (0..n)
                .find(|&h| table[g][h] == identity && table[h][g] == identity)
                .ok_or_else(|| AxiomViolation::new(Axiom::GroupInverse, [format!("{g}")]))?;
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if table[table[a][b]][c] != table[a][table[b][c]] {
                        return Err(AxiomViolation::new(
                            Axiom::GroupAssociativity,
                            [format!("{a}"), format!("{b}"), format!("{c}")],
                        )
                        .into());
                    }
                }
            }
        }
        Ok(Self {
            table,
            identity,
            inverse,
        })
    }

    /// `Z/n` with `a·b = a + b mod n`.
    pub fn cyclic(n: usize) -> Self {
        let table = (0..n)
            .map(|a| (0..n).map(|b| (a + b) % n).collect())
            .collect();
        Self::from_cayley(table).expect("cyclic table is a group")
    }

    /// The symmetric group on `n` points.
    ///
    /// Elements are permutations in lexicographic order (so the identity is
    /// element 0) and the product is composition, `(στ)(i) = σ(τ(i))`.
    pub fn symmetric(n: usize) -> Self {
        let perms = permutations(n);
        let index = |p: &[usize]| perms.iter().position(|q| q.as_slice() == p).unwrap();
        let table = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        index(&st)
                    })
                    .collect()
            })
            .collect();
        Self::from_cayley(table).expect("symmetric table is a group")
    }

    /// Sign of each element of [`FiniteGroup::symmetric`]`(n)`, as an element
    /// of `Z/2` (0 for even, 1 for odd).
    pub fn symmetric_signs(n: usize) -> Vec<usize> {
        permutations(n)
            .iter()
            .map(|p| {
                let mut inversions = 0;
                for i in 0..p.len() {
                    for j in i + 1..p.len() {
                        if p[i] > p[j] {
                            inversions += 1;
                        }
                    }
                }
                inversions % 2
            })
            .collect()
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn multiply(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.table
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                extend(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), &mut vec![false; n], &mut out);
    out
}

/// An element of a [`DiscreteGroup`].
///
/// The derived order (finite indices first, then lattice vectors
/// lexicographically) fixes the order in which fibres are enumerated.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GroupElement {
    Finite(usize),
    Lattice(Vec<i64>),
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupElement::Finite(i) => write!(f, "{i}"),
            GroupElement::Lattice(v) => {
                f.write_str("(")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{x}")?;
                }
                f.write_str(")")
            }
        }
    }
}

impl From<i64> for GroupElement {
    fn from(v: i64) -> Self {
        GroupElement::Lattice(vec![v])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiscreteGroup {
    Finite(FiniteGroup),
    FreeAbelian { rank: usize },
}

impl DiscreteGroup {
    /// The trivial group, realised as `Z^0`.
    pub fn trivial() -> Self {
        DiscreteGroup::FreeAbelian { rank: 0 }
    }

    pub fn identity(&self) -> GroupElement {
        match self {
            DiscreteGroup::Finite(g) => GroupElement::Finite(g.identity()),
            DiscreteGroup::FreeAbelian { rank } => GroupElement::Lattice(vec![0; *rank]),
        }
    }

    pub fn contains(&self, x: &GroupElement) -> bool {
        match (self, x) {
            (DiscreteGroup::Finite(g), GroupElement::Finite(i)) => *i < g.order(),
            (DiscreteGroup::FreeAbelian { rank }, GroupElement::Lattice(v)) => v.len() == *rank,
            _ => false,
        }
    }

    pub fn multiply(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        match (self, a, b) {
            (DiscreteGroup::Finite(g), GroupElement::Finite(x), GroupElement::Finite(y))
                if *x < g.order() && *y < g.order() =>
            {
                Ok(GroupElement::Finite(g.multiply(*x, *y)))
            }
            (DiscreteGroup::FreeAbelian { rank }, GroupElement::Lattice(x), GroupElement::Lattice(y))
                if x.len() == *rank && y.len() == *rank =>
            {
                Ok(GroupElement::Lattice(
                    x.iter().zip(y).map(|(p, q)| p + q).collect(),
                ))
            }
            _ => Err(Error::ForeignElement),
        }
    }

    pub fn inverse(&self, a: &GroupElement) -> Result<GroupElement> {
        match (self, a) {
            (DiscreteGroup::Finite(g), GroupElement::Finite(x)) if *x < g.order() => {
                Ok(GroupElement::Finite(g.inverse(*x)))
            }
            (DiscreteGroup::FreeAbelian { rank }, GroupElement::Lattice(x)) if x.len() == *rank => {
                Ok(GroupElement::Lattice(x.iter().map(|p| -p).collect()))
            }
            _ => Err(Error::ForeignElement),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DiscreteGroup::Finite(g) => format!("finite group of order {}", g.order()),
            DiscreteGroup::FreeAbelian { rank } => format!("Z^{rank}"),
        }
    }
}
