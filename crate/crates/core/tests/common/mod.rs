#![allow(dead_code)]

use groupoid_cstar::groupoid::{
    action_groupoid, cyclic_shift_action, disjoint_union, group_groupoid, pair_groupoid,
};
use groupoid_cstar::{
    Cocycle, Complex64, DiscreteGroup, FiniteGroup, FiniteGroupoid, GradedGroupoid,
    GroupElement, GroupoidFunction, HaarSystem,
};

/// `(i, j)` from an id like `"(2,1)"`.
pub fn pair_of(id: &str) -> (i64, i64) {
    let inner = id.trim_start_matches('(').trim_end_matches(')');
    let (a, b) = inner.split_once(',').unwrap();
    (a.parse().unwrap(), b.parse().unwrap())
}

pub fn with_rho(g: &FiniteGroupoid, rho: Option<&[f64]>) -> HaarSystem {
    match rho {
        Some(r) => HaarSystem::from_weights(g, r[..g.unit_count()].to_vec()).unwrap(),
        None => HaarSystem::counting(g),
    }
}

/// `P_n` graded by `c(i, j) = i - j` into `ℤ`.
pub fn graded_pair(n: usize, rho: Option<&[f64]>) -> GradedGroupoid {
    let g = pair_groupoid(n).unwrap();
    let labels = g
        .arrows()
        .iter()
        .map(|a| {
            let (i, j) = pair_of(&a.id);
            GroupElement::from(i - j)
        })
        .collect();
    let h = with_rho(&g, rho);
    GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::FreeAbelian { rank: 1 }, labels)).unwrap()
}

/// A finite group graded by itself.
pub fn self_graded_group(group: FiniteGroup, rho: Option<&[f64]>) -> GradedGroupoid {
    let g = group_groupoid(&group).unwrap();
    let labels = (0..group.order()).map(GroupElement::Finite).collect();
    let h = with_rho(&g, rho);
    GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::Finite(group), labels)).unwrap()
}

/// `S_3` graded by the sign into `ℤ/2`.
pub fn sign_graded_s3(rho: Option<&[f64]>) -> GradedGroupoid {
    let s3 = FiniteGroup::symmetric(3);
    let g = group_groupoid(&s3).unwrap();
    let signs = FiniteGroup::symmetric_signs(3);
    let labels = signs.iter().map(|&s| GroupElement::Finite(s)).collect();
    let h = with_rho(&g, rho);
    GradedGroupoid::new(
        g,
        h,
        Cocycle::new(DiscreteGroup::Finite(FiniteGroup::cyclic(2)), labels),
    )
    .unwrap()
}

/// `ℤ/n` acting on `n` points by shifts, graded by the group coordinate.
pub fn shift_action(n: usize, rho: Option<&[f64]>) -> GradedGroupoid {
    let group = FiniteGroup::cyclic(n);
    let g = action_groupoid(&group, &cyclic_shift_action(n)).unwrap();
    let labels = g
        .arrows()
        .iter()
        .map(|a| GroupElement::Finite(pair_of(&a.id).1 as usize))
        .collect();
    let h = with_rho(&g, rho);
    GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::Finite(group), labels)).unwrap()
}

/// `P_2 ⊔ ℤ/2`, graded by `i - j` on the pair part and `0` on the group part.
pub fn pair_plus_group(rho: Option<&[f64]>) -> GradedGroupoid {
    let g = disjoint_union(
        &pair_groupoid(2).unwrap(),
        &group_groupoid(&FiniteGroup::cyclic(2)).unwrap(),
    )
    .unwrap();
    let labels = g
        .arrows()
        .iter()
        .map(|a| match a.id.strip_prefix("1:") {
            Some(rest) => {
                let (i, j) = pair_of(rest);
                GroupElement::from(i - j)
            }
            None => GroupElement::from(0),
        })
        .collect();
    let h = with_rho(&g, rho);
    GradedGroupoid::new(g, h, Cocycle::new(DiscreteGroup::FreeAbelian { rank: 1 }, labels)).unwrap()
}

/// Small instances indexed for property tests.
pub const INSTANCES: usize = 7;

pub fn instance(k: usize, rho: Option<&[f64]>) -> GradedGroupoid {
    match k % INSTANCES {
        0 => graded_pair(2, rho),
        1 => graded_pair(3, rho),
        2 => self_graded_group(FiniteGroup::cyclic(3), rho),
        3 => sign_graded_s3(rho),
        4 => shift_action(3, rho),
        5 => pair_plus_group(rho),
        _ => {
            let g = pair_groupoid(3).unwrap();
            let h = with_rho(&g, rho);
            GradedGroupoid::ungraded(g, h).unwrap()
        }
    }
}

pub fn function(values: &[(f64, f64)], len: usize) -> GroupoidFunction {
    GroupoidFunction::new(
        (0..len)
            .map(|k| {
                let (re, im) = values[k % values.len()];
                Complex64::new(re, im)
            })
            .collect(),
    )
}

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}
