//! Finite groupoids with explicit composition tables.
//!
//! Composition is written `compose(x, y) = xy` and is defined exactly when
//! `s(x) = r(y)`. Units and arrows are ordered by their declared position;
//! that order fixes every matrix basis built downstream.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Axiom, AxiomViolation, Error, Result};
use crate::group::FiniteGroup;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Arrow {
    pub id: String,
    /// Source unit index, `s(x)`.
    pub src: usize,
    /// Range unit index, `r(x)`.
    pub dst: usize,
}

/// Raw groupoid data, not yet known to satisfy the axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupoidParts {
    pub units: Vec<String>,
    pub arrows: Vec<Arrow>,
    /// Row-major `arrows × arrows` table; entry `x * n + y` is `xy`.
    pub compose: Vec<Option<usize>>,
    pub inverse: Vec<usize>,
    pub unit_arrows: Vec<usize>,
}

impl GroupoidParts {
    fn check_structure(&self) -> Result<()> {
        let nu = self.units.len();
        let na = self.arrows.len();
        if nu == 0 || na == 0 {
            return Err(Error::EmptyGroupoid);
        }
        let mut seen = BTreeSet::new();
        for u in &self.units {
            if !seen.insert(u.as_str()) {
                return Err(Error::DuplicateId(u.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for a in &self.arrows {
            if !seen.insert(a.id.as_str()) {
                return Err(Error::DuplicateId(a.id.clone()));
            }
            for idx in [a.src, a.dst] {
                if idx >= nu {
                    return Err(Error::IndexOutOfRange {
                        what: "unit",
                        index: idx,
                        size: nu,
                    });
                }
            }
        }
        let lengths = [
            ("composition table", na * na, self.compose.len()),
            ("inverse table", na, self.inverse.len()),
            ("unit arrow table", nu, self.unit_arrows.len()),
        ];
        for (what, expected, found) in lengths {
            if expected != found {
                return Err(Error::LengthMismatch {
                    what,
                    expected,
                    found,
                });
            }
        }
        let arrow_refs = self
            .compose
            .iter()
            .flatten()
            .chain(&self.inverse)
            .chain(&self.unit_arrows);
        for &idx in arrow_refs {
            if idx >= na {
                return Err(Error::IndexOutOfRange {
                    what: "arrow",
                    index: idx,
                    size: na,
                });
            }
        }
        Ok(())
    }

    fn get(&self, x: usize, y: usize) -> Option<usize> {
        self.compose[x * self.arrows.len() + y]
    }

    fn check_axioms(&self) -> core::result::Result<(), AxiomViolation> {
        let n = self.arrows.len();
        let id = |x: usize| self.arrows[x].id.as_str();
        let src = |x: usize| self.arrows[x].src;
        let dst = |x: usize| self.arrows[x].dst;

        for x in 0..n {
            for y in 0..n {
                match self.get(x, y) {
                    None if src(x) == dst(y) => {
                        return Err(AxiomViolation::new(Axiom::Composability, [id(x), id(y)]));
                    }
                    Some(xy) if src(x) != dst(y) => {
                        return Err(AxiomViolation::new(
                            Axiom::Composability,
                            [id(x), id(y), id(xy)],
                        ));
                    }
                    Some(xy) if dst(xy) != dst(x) => {
                        return Err(AxiomViolation::new(
                            Axiom::CompositeRange,
                            [id(x), id(y), id(xy)],
                        ));
                    }
                    Some(xy) if src(xy) != src(y) => {
                        return Err(AxiomViolation::new(
                            Axiom::CompositeSource,
                            [id(x), id(y), id(xy)],
                        ));
                    }
                    _ => {}
                }
            }
        }

        for (u, &e) in self.unit_arrows.iter().enumerate() {
            if src(e) != u || dst(e) != u {
                return Err(AxiomViolation::new(
                    Axiom::UnitEndpoints,
                    [self.units[u].as_str(), id(e)],
                ));
            }
        }
        for x in 0..n {
            if self.get(self.unit_arrows[dst(x)], x) != Some(x) {
                return Err(AxiomViolation::new(Axiom::LeftUnit, [id(x)]));
            }
            if self.get(x, self.unit_arrows[src(x)]) != Some(x) {
                return Err(AxiomViolation::new(Axiom::RightUnit, [id(x)]));
            }
        }

        for x in 0..n {
            let xi = self.inverse[x];
            if src(xi) != dst(x) || dst(xi) != src(x) {
                return Err(AxiomViolation::new(Axiom::InverseEndpoints, [id(x), id(xi)]));
            }
            if self.get(xi, x) != Some(self.unit_arrows[src(x)]) {
                return Err(AxiomViolation::new(Axiom::LeftInverse, [id(x), id(xi)]));
            }
            if self.get(x, xi) != Some(self.unit_arrows[dst(x)]) {
                return Err(AxiomViolation::new(Axiom::RightInverse, [id(x), id(xi)]));
            }
            if self.inverse[xi] != x {
                return Err(AxiomViolation::new(Axiom::InverseInvolution, [id(x), id(xi)]));
            }
        }

        for x in 0..n {
            for y in 0..n {
                let Some(xy) = self.get(x, y) else { continue };
                for z in 0..n {
                    let Some(yz) = self.get(y, z) else { continue };
                    if self.get(xy, z) != self.get(x, yz) {
                        return Err(AxiomViolation::new(
                            Axiom::Associativity,
                            [id(x), id(y), id(z)],
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Checks raw groupoid data: structure first, then every groupoid axiom.
///
/// Returns the first violated axiom with its witness arrows.
pub fn validate_groupoid(parts: &GroupoidParts) -> Result<()> {
    parts.check_structure()?;
    parts.check_axioms()?;
    Ok(())
}

/// A finite groupoid known to satisfy the groupoid axioms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    parts: GroupoidParts,
    composable: Vec<(usize, usize, usize)>,
    by_range: Vec<Vec<usize>>,
    by_source: Vec<Vec<usize>>,
}

impl FiniteGroupoid {
    pub fn new(parts: GroupoidParts) -> Result<Self> {
        validate_groupoid(&parts)?;
        let n = parts.arrows.len();
        let mut composable = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if let Some(xy) = parts.get(x, y) {
                    composable.push((x, y, xy));
                }
            }
        }
        let mut by_range = vec![Vec::new(); parts.units.len()];
        let mut by_source = vec![Vec::new(); parts.units.len()];
        for (x, a) in parts.arrows.iter().enumerate() {
            by_range[a.dst].push(x);
            by_source[a.src].push(x);
        }
        Ok(Self {
            parts,
            composable,
            by_range,
            by_source,
        })
    }

    /// Builds the tables from closures over arrow indices.
    pub fn from_fns(
        units: Vec<String>,
        arrows: Vec<Arrow>,
        compose: impl Fn(usize, usize) -> Option<usize>,
        inverse: impl Fn(usize) -> usize,
        unit_arrow: impl Fn(usize) -> usize,
    ) -> Result<Self> {
        let n = arrows.len();
        let mut table = vec![None; n * n];
        for x in 0..n {
            for y in 0..n {
                if arrows[x].src == arrows[y].dst {
                    table[x * n + y] = compose(x, y);
                }
            }
        }
        let parts = GroupoidParts {
            inverse: (0..n).map(inverse).collect(),
            unit_arrows: (0..units.len()).map(unit_arrow).collect(),
            units,
            arrows,
            compose: table,
        };
        Self::new(parts)
    }

    pub fn parts(&self) -> &GroupoidParts {
        &self.parts
    }

    pub fn into_parts(self) -> GroupoidParts {
        self.parts
    }

    pub fn unit_count(&self) -> usize {
        self.parts.units.len()
    }

    pub fn arrow_count(&self) -> usize {
        self.parts.arrows.len()
    }

    pub fn units(&self) -> &[String] {
        &self.parts.units
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.parts.arrows
    }

    pub fn arrow_id(&self, x: usize) -> &str {
        &self.parts.arrows[x].id
    }

    pub fn unit_id(&self, u: usize) -> &str {
        &self.parts.units[u]
    }

    pub fn arrow_index(&self, id: &str) -> Option<usize> {
        self.parts.arrows.iter().position(|a| a.id == id)
    }

    pub fn unit_index(&self, id: &str) -> Option<usize> {
        self.parts.units.iter().position(|u| u == id)
    }

    pub fn source(&self, x: usize) -> usize {
        self.parts.arrows[x].src
    }

    pub fn range(&self, x: usize) -> usize {
        self.parts.arrows[x].dst
    }

    pub fn compose(&self, x: usize, y: usize) -> Option<usize> {
        self.parts.get(x, y)
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.parts.inverse[x]
    }

    pub fn unit_arrow(&self, u: usize) -> usize {
        self.parts.unit_arrows[u]
    }

    pub fn is_unit_arrow(&self, x: usize) -> bool {
        self.parts.unit_arrows[self.source(x)] == x
    }

    /// All composable triples `(x, y, xy)`, in declared order of `(x, y)`.
    pub fn composable(&self) -> &[(usize, usize, usize)] {
        &self.composable
    }

    /// Arrows `x` with `r(x) = u`.
    pub fn with_range(&self, u: usize) -> &[usize] {
        &self.by_range[u]
    }

    /// Arrows `x` with `s(x) = u`, i.e. the set `Gu`.
    pub fn with_source(&self, u: usize) -> &[usize] {
        &self.by_source[u]
    }

    /// The subgroupoid on all units and the given arrows (declared order kept).
    ///
    /// Fails with an axiom violation when the arrows are not closed under
    /// composition and inversion or miss a unit arrow.
    pub fn restrict(&self, keep: &[usize]) -> Result<(FiniteGroupoid, Vec<Option<usize>>)> {
        let mut position = vec![None; self.arrow_count()];
        let mut sorted: Vec<usize> = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &x) in sorted.iter().enumerate() {
            position[x] = Some(i);
        }
        let arrows = sorted.iter().map(|&x| self.parts.arrows[x].clone()).collect();
        let missing = |x: usize| -> Error {
            AxiomViolation::new(Axiom::Composability, [self.arrow_id(x)]).into()
        };
        let mut inverse = Vec::with_capacity(sorted.len());
        for &x in &sorted {
            inverse.push(position[self.inverse(x)].ok_or_else(|| missing(self.inverse(x)))?);
        }
        let mut unit_arrows = Vec::with_capacity(self.unit_count());
        for u in 0..self.unit_count() {
            let e = self.unit_arrow(u);
            unit_arrows.push(position[e].ok_or_else(|| missing(e))?);
        }
        let m = sorted.len();
        let mut compose = vec![None; m * m];
        for (i, &x) in sorted.iter().enumerate() {
            for (j, &y) in sorted.iter().enumerate() {
                if let Some(xy) = self.compose(x, y) {
                    compose[i * m + j] = Some(position[xy].ok_or_else(|| missing(xy))?);
                }
            }
        }
        let sub = FiniteGroupoid::new(GroupoidParts {
            units: self.parts.units.clone(),
            arrows,
            compose,
            inverse,
            unit_arrows,
        })?;
        Ok((sub, position))
    }
}

fn numbered(n: usize, first: usize) -> Vec<String> {
    (first..first + n).map(|i| i.to_string()).collect()
}

/// The pair groupoid on `n` points: units `1..=n`, arrows `(i,j)` with
/// `r = i`, `s = j` and `(i,j)(j,k) = (i,k)`.
pub fn pair_groupoid(n: usize) -> Result<FiniteGroupoid> {
    let arrows = (0..n * n)
        .map(|k| {
            let (i, j) = (k / n, k % n);
            Arrow {
                id: format!("({},{})", i + 1, j + 1),
                src: j,
                dst: i,
            }
        })
        .collect();
    FiniteGroupoid::from_fns(
        numbered(n, 1),
        arrows,
        |x, y| Some((x / n) * n + y % n),
        |x| (x % n) * n + x / n,
        |u| u * n + u,
    )
}

/// A group as a groupoid with a single unit `*`; arrow `k` is element `k`.
pub fn group_groupoid(group: &FiniteGroup) -> Result<FiniteGroupoid> {
    let arrows = (0..group.order())
        .map(|g| Arrow {
            id: g.to_string(),
            src: 0,
            dst: 0,
        })
        .collect();
    FiniteGroupoid::from_fns(
        vec!["*".to_string()],
        arrows,
        |x, y| Some(group.multiply(x, y)),
        |x| group.inverse(x),
        |_| group.identity(),
    )
}

/// Transformation groupoid of a right action `x·h = action[x][h]` of `group`
/// on the points `0..action.len()`.
///
/// Arrows are `(x,h)` with `r = x`, `s = x·h` and `(x,h)(x·h,k) = (x,hk)`.
pub fn action_groupoid(group: &FiniteGroup, action: &[Vec<usize>]) -> Result<FiniteGroupoid> {
    let points = action.len();
    let order = group.order();
    for (x, row) in action.iter().enumerate() {
        if row.len() != order {
            return Err(Error::LengthMismatch {
                what: "action row",
                expected: order,
                found: row.len(),
            });
        }
        if let Some(&bad) = row.iter().find(|&&p| p >= points) {
            return Err(Error::IndexOutOfRange {
                what: "point",
                index: bad,
                size: points,
            });
        }
        if row[group.identity()] != x {
            return Err(AxiomViolation::new(Axiom::ActionIdentity, [format!("{x}")]).into());
        }
        for h in 0..order {
            for k in 0..order {
                if action[row[h]][k] != row[group.multiply(h, k)] {
                    return Err(AxiomViolation::new(
                        Axiom::ActionCompatibility,
                        [format!("{x}"), format!("{h}"), format!("{k}")],
                    )
                    .into());
                }
            }
        }
    }
    let arrows = (0..points * order)
        .map(|a| {
            let (x, h) = (a / order, a % order);
            Arrow {
                id: format!("({x},{h})"),
                src: action[x][h],
                dst: x,
            }
        })
        .collect();
    FiniteGroupoid::from_fns(
        numbered(points, 0),
        arrows,
        |a, b| Some((a / order) * order + group.multiply(a % order, b % order)),
        |a| {
            let (x, h) = (a / order, a % order);
            action[x][h] * order + group.inverse(h)
        },
        |u| u * order + group.identity(),
    )
}

/// The cyclic shift action `x·h = x + h mod n` of `Z/n` on `n` points.
pub fn cyclic_shift_action(n: usize) -> Vec<Vec<usize>> {
    (0..n).map(|x| (0..n).map(|h| (x + h) % n).collect()).collect()
}

/// A bundle of groups: unit `i` carries isotropy `groups[i]`, arrows `(i,g)`.
pub fn group_bundle(groups: &[FiniteGroup]) -> Result<FiniteGroupoid> {
    let mut arrows = Vec::new();
    let mut owner = Vec::new();
    let mut offsets = Vec::new();
    for (i, g) in groups.iter().enumerate() {
        offsets.push(arrows.len());
        for k in 0..g.order() {
            arrows.push(Arrow {
                id: format!("({i},{k})"),
                src: i,
                dst: i,
            });
            owner.push((i, k));
        }
    }
    FiniteGroupoid::from_fns(
        numbered(groups.len(), 0),
        arrows,
        |x, y| {
            let ((i, a), (_, b)) = (owner[x], owner[y]);
            Some(offsets[i] + groups[i].multiply(a, b))
        },
        |x| {
            let (i, a) = owner[x];
            offsets[i] + groups[i].inverse(a)
        },
        |u| offsets[u] + groups[u].identity(),
    )
}

/// Disjoint union; ids of the summands are prefixed with `1:` and `2:`.
pub fn disjoint_union(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Result<FiniteGroupoid> {
    let (n1, u1) = (g1.arrow_count(), g1.unit_count());
    let units = g1
        .units()
        .iter()
        .map(|u| format!("1:{u}"))
        .chain(g2.units().iter().map(|u| format!("2:{u}")))
        .collect();
    let arrows = g1
        .arrows()
        .iter()
        .map(|a| Arrow {
            id: format!("1:{}", a.id),
            ..a.clone()
        })
        .chain(g2.arrows().iter().map(|a| Arrow {
            id: format!("2:{}", a.id),
            src: a.src + u1,
            dst: a.dst + u1,
        }))
        .collect();
    FiniteGroupoid::from_fns(
        units,
        arrows,
        |x, y| match (x < n1, y < n1) {
            (true, true) => g1.compose(x, y),
            (false, false) => g2.compose(x - n1, y - n1).map(|z| z + n1),
            _ => None,
        },
        |x| {
            if x < n1 {
                g1.inverse(x)
            } else {
                g2.inverse(x - n1) + n1
            }
        },
        |u| {
            if u < u1 {
                g1.unit_arrow(u)
            } else {
                g2.unit_arrow(u - u1) + n1
            }
        },
    )
}

/// Cartesian product; arrow `(x, y)` has id `x&y`, listed `x`-major.
pub fn product(g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> Result<FiniteGroupoid> {
    let (n2, u2) = (g2.arrow_count(), g2.unit_count());
    let units = g1
        .units()
        .iter()
        .flat_map(|a| g2.units().iter().map(move |b| format!("{a}&{b}")))
        .collect();
    let arrows = g1
        .arrows()
        .iter()
        .flat_map(|a| {
            g2.arrows().iter().map(move |b| Arrow {
                id: format!("{}&{}", a.id, b.id),
                src: a.src * u2 + b.src,
                dst: a.dst * u2 + b.dst,
            })
        })
        .collect();
    FiniteGroupoid::from_fns(
        units,
        arrows,
        |x, y| {
            let p = g1.compose(x / n2, y / n2)?;
            let q = g2.compose(x % n2, y % n2)?;
            Some(p * n2 + q)
        },
        |x| g1.inverse(x / n2) * n2 + g2.inverse(x % n2),
        |u| g1.unit_arrow(u / u2) * n2 + g2.unit_arrow(u % u2),
    )
}
