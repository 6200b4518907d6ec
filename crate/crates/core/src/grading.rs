//! Cocycles `c: G -> Γ`, their fibres `G_γ = c⁻¹(γ)` and the identity-fibre
//! subgroupoid `G_e`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use crate::error::{Axiom, AxiomViolation, Error, Result};
use crate::group::{DiscreteGroup, GroupElement};
use crate::groupoid::FiniteGroupoid;
use crate::haar::HaarSystem;

/// A labelling of arrows by group elements, one label per arrow in declared
/// order. Use [`validate_cocycle`] to check it is a homomorphism.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cocycle {
    pub group: DiscreteGroup,
    pub labels: Vec<GroupElement>,
}

impl Cocycle {
    pub fn new(group: DiscreteGroup, labels: Vec<GroupElement>) -> Self {
        Self { group, labels }
    }

    /// Every arrow labelled by the identity of the trivial group.
    pub fn trivial(g: &FiniteGroupoid) -> Self {
        let group = DiscreteGroup::trivial();
        let labels = alloc::vec![group.identity(); g.arrow_count()];
        Self { group, labels }
    }

    pub fn label(&self, x: usize) -> &GroupElement {
        &self.labels[x]
    }
}

/// Checks `c(xy) = c(x)c(y)`, then `c(u) = e` on unit arrows, then
/// `c(x⁻¹) = c(x)⁻¹`; reports the first failure with its witness arrows.
pub fn validate_cocycle(g: &FiniteGroupoid, c: &Cocycle) -> Result<()> {
    if c.labels.len() != g.arrow_count() {
        return Err(Error::LengthMismatch {
            what: "cocycle labels",
            expected: g.arrow_count(),
            found: c.labels.len(),
        });
    }
    if let Some(x) = (0..g.arrow_count()).find(|&x| !c.group.contains(&c.labels[x])) {
        return Err(AxiomViolation::new(Axiom::CocycleLabel, [g.arrow_id(x)]).into());
    }
    for &(x, y, xy) in g.composable() {
        if c.group.multiply(&c.labels[x], &c.labels[y])? != c.labels[xy] {
            return Err(AxiomViolation::new(
                Axiom::CocycleMultiplicative,
                [g.arrow_id(x), g.arrow_id(y)],
            )
            .into());
        }
    }
    let e = c.group.identity();
    for u in 0..g.unit_count() {
        let x = g.unit_arrow(u);
        if c.labels[x] != e {
            return Err(AxiomViolation::new(Axiom::CocycleUnit, [g.arrow_id(x)]).into());
        }
    }
    for x in 0..g.arrow_count() {
        if c.labels[g.inverse(x)] != c.group.inverse(&c.labels[x])? {
            return Err(AxiomViolation::new(Axiom::CocycleInverse, [g.arrow_id(x)]).into());
        }
    }
    Ok(())
}

/// The exact preimage `c⁻¹(γ)`, in declared arrow order.
pub fn fiber_of(g: &FiniteGroupoid, c: &Cocycle, element: &GroupElement) -> Vec<usize> {
    (0..g.arrow_count())
        .filter(|&x| &c.labels[x] == element)
        .collect()
}

/// A subgroupoid on the full unit space with the restricted Haar system.
#[derive(Debug, Clone, PartialEq)]
pub struct Subgroupoid {
    pub groupoid: FiniteGroupoid,
    pub haar: HaarSystem,
    /// Ambient index of each subgroupoid arrow.
    pub embedding: Vec<usize>,
    /// Subgroupoid index of each ambient arrow, if it belongs.
    pub position: Vec<Option<usize>>,
}

/// `G_e` with the same unit weights, so `λ^u` restricts to `λ^u|_{G_e}`.
pub fn identity_fiber_subgroupoid(
    g: &FiniteGroupoid,
    haar: &HaarSystem,
    c: &Cocycle,
) -> Result<Subgroupoid> {
    validate_cocycle(g, c)?;
    let arrows = fiber_of(g, c, &c.group.identity());
    let (groupoid, position) = g.restrict(&arrows)?;
    let haar = HaarSystem::from_weights(&groupoid, haar.rho().to_vec())?;
    Ok(Subgroupoid {
        groupoid,
        haar,
        embedding: arrows,
        position,
    })
}

/// A groupoid with Haar system and a validated cocycle, together with the
/// fibre decomposition and `G_e`. This is the context every graded
/// construction works in.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedGroupoid {
    groupoid: FiniteGroupoid,
    haar: HaarSystem,
    cocycle: Cocycle,
    fibers: BTreeMap<GroupElement, Vec<usize>>,
    identity: GroupElement,
    sub: Subgroupoid,
}

impl GradedGroupoid {
    pub fn new(groupoid: FiniteGroupoid, haar: HaarSystem, cocycle: Cocycle) -> Result<Self> {
        if haar.rho().len() != groupoid.unit_count() {
            return Err(Error::LengthMismatch {
                what: "unit weights",
                expected: groupoid.unit_count(),
                found: haar.rho().len(),
            });
        }
        let sub = identity_fiber_subgroupoid(&groupoid, &haar, &cocycle)?;
        let mut fibers: BTreeMap<GroupElement, Vec<usize>> = BTreeMap::new();
        for (x, label) in cocycle.labels.iter().enumerate() {
            fibers.entry(label.clone()).or_default().push(x);
        }
        let identity = cocycle.group.identity();
        Ok(Self {
            groupoid,
            haar,
            cocycle,
            fibers,
            identity,
            sub,
        })
    }

    /// Trivially graded: `G_e = G`.
    pub fn ungraded(groupoid: FiniteGroupoid, haar: HaarSystem) -> Result<Self> {
        let c = Cocycle::trivial(&groupoid);
        Self::new(groupoid, haar, c)
    }

    pub fn groupoid(&self) -> &FiniteGroupoid {
        &self.groupoid
    }

    pub fn haar(&self) -> &HaarSystem {
        &self.haar
    }

    pub fn cocycle(&self) -> &Cocycle {
        &self.cocycle
    }

    pub fn group(&self) -> &DiscreteGroup {
        &self.cocycle.group
    }

    pub fn identity_element(&self) -> &GroupElement {
        &self.identity
    }

    /// `G_e` with its restricted Haar system.
    pub fn identity_fiber(&self) -> &Subgroupoid {
        &self.sub
    }

    /// Nonempty fibres in group-element order.
    pub fn fibers(&self) -> impl Iterator<Item = (&GroupElement, &[usize])> {
        self.fibers.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// The image of the cocycle.
    pub fn degrees(&self) -> impl Iterator<Item = &GroupElement> {
        self.fibers.keys()
    }

    pub fn fiber(&self, element: &GroupElement) -> &[usize] {
        self.fibers.get(element).map_or(&[], Vec::as_slice)
    }

    pub fn degree(&self, x: usize) -> &GroupElement {
        &self.cocycle.labels[x]
    }

    /// `(G_γ)u = {x ∈ G_γ : s(x) = u}`, declared order.
    pub fn fiber_at(&self, element: &GroupElement, u: usize) -> Vec<usize> {
        self.fiber(element)
            .iter()
            .copied()
            .filter(|&x| self.groupoid.source(x) == u)
            .collect()
    }

    pub(crate) fn unit_label(&self, u: usize) -> alloc::string::String {
        self.groupoid.unit_id(u).into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::pair_groupoid;

    fn difference_cocycle(g: &FiniteGroupoid, labels: &[(&str, i64)]) -> Cocycle {
        let mut l = alloc::vec![GroupElement::from(0); g.arrow_count()];
        for &(id, v) in labels {
            l[g.arrow_index(id).unwrap()] = GroupElement::from(v);
        }
        Cocycle::new(DiscreteGroup::FreeAbelian { rank: 1 }, l)
    }

    #[test]
    fn non_multiplicative_labels_report_the_pair() {
        let g = pair_groupoid(2).unwrap();
        let c = difference_cocycle(&g, &[("(1,2)", 1), ("(2,1)", 1)]);
        match validate_cocycle(&g, &c) {
            Err(Error::Axiom(v)) => {
                assert_eq!(v.axiom, Axiom::CocycleMultiplicative);
                assert_eq!(v.witness, ["(1,2)", "(2,1)"]);
            }
            other => panic!("expected multiplicativity failure, got {other:?}"),
        }
    }

    #[test]
    fn foreign_label_rejected() {
        let g = pair_groupoid(2).unwrap();
        let mut c = Cocycle::trivial(&g);
        c.labels[1] = GroupElement::Finite(0);
        match validate_cocycle(&g, &c) {
            Err(Error::Axiom(v)) => assert_eq!(v.axiom, Axiom::CocycleLabel),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trivial_cocycle_keeps_everything() {
        let g = pair_groupoid(3).unwrap();
        let gg = GradedGroupoid::ungraded(g.clone(), HaarSystem::counting(&g)).unwrap();
        assert_eq!(gg.identity_fiber().groupoid.arrow_count(), 9);
        assert_eq!(gg.fibers().count(), 1);
    }
}
