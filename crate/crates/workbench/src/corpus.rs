//! The built-in corpus of graded finite groupoids.
//!
//! Every entry comes twice: with counting Haar weights (`-counting`) and with
//! unit weights drawn uniformly from `[0.25, 4]` (`-weighted`).

use std::collections::BTreeMap;

use groupoid_cstar::group::FiniteGroup;
use groupoid_cstar::{FiniteGroupoid, GroupElement};
use serde_json::json;

use crate::document::{self, RawDocument, RawGroup, RawGroupoid, RawHaar, RawLabel};
use crate::random::Sampler;

/// Splits `"(a,b)"` into `("a", "b")`.
fn pair_parts(id: &str) -> (&str, &str) {
    id.trim_start_matches('(')
        .trim_end_matches(')')
        .split_once(',')
        .expect("pair-shaped arrow id")
}

fn pair_difference(id: &str) -> i64 {
    let (i, j) = pair_parts(id);
    i.parse::<i64>().unwrap() - j.parse::<i64>().unwrap()
}

fn second_coordinate(id: &str) -> usize {
    pair_parts(id).1.parse().unwrap()
}

type Labeling = Box<dyn Fn(&str) -> GroupElement>;

struct Template {
    name: &'static str,
    groupoid: RawGroupoid,
    group: Option<RawGroup>,
    label: Option<Labeling>,
}

fn pair(n: usize) -> RawGroupoid {
    RawGroupoid::builtin("pair", json!({ "n": n }))
}

fn cyclic(n: usize) -> RawGroupoid {
    RawGroupoid::builtin("cyclic_group", json!({ "n": n }))
}

fn group(finite: impl FnOnce(&mut RawGroup)) -> Option<RawGroup> {
    let mut g = RawGroup::default();
    finite(&mut g);
    Some(g)
}

fn integers(rank: usize) -> Option<RawGroup> {
    group(|g| g.free_abelian = Some(rank))
}

fn templates() -> Vec<Template> {
    const PAIR_NAMES: [(&str, &str); 4] = [
        ("pair-2-difference", "pair-2-ungraded"),
        ("pair-3-difference", "pair-3-ungraded"),
        ("pair-4-difference", "pair-4-ungraded"),
        ("pair-5-difference", "pair-5-ungraded"),
    ];
    let mut out = Vec::new();
    for (k, (graded, ungraded)) in PAIR_NAMES.iter().enumerate() {
        out.push(Template {
            name: graded,
            groupoid: pair(k + 2),
            group: integers(1),
            label: Some(Box::new(|id| GroupElement::from(pair_difference(id)))),
        });
        out.push(Template {
            name: ungraded,
            groupoid: pair(k + 2),
            group: None,
            label: None,
        });
    }
    for (name, n) in [("cyclic-2-identity", 2), ("cyclic-3-identity", 3)] {
        out.push(Template {
            name,
            groupoid: cyclic(n),
            group: group(|g| g.cyclic = Some(n)),
            label: Some(Box::new(|id| GroupElement::Finite(id.parse().unwrap()))),
        });
    }
    out.push(Template {
        name: "symmetric-3-identity",
        groupoid: RawGroupoid::builtin("symmetric_group", json!({ "n": 3 })),
        group: group(|g| g.symmetric = Some(3)),
        label: Some(Box::new(|id| GroupElement::Finite(id.parse().unwrap()))),
    });
    let signs = FiniteGroup::symmetric_signs(3);
    out.push(Template {
        name: "symmetric-3-sign",
        groupoid: RawGroupoid::builtin("symmetric_group", json!({ "n": 3 })),
        group: group(|g| g.cyclic = Some(2)),
        label: Some(Box::new(move |id| GroupElement::Finite(signs[id.parse::<usize>().unwrap()]))),
    });
    out.push(Template {
        name: "cyclic-4-parity",
        groupoid: cyclic(4),
        group: group(|g| g.cyclic = Some(2)),
        label: Some(Box::new(|id| GroupElement::Finite(id.parse::<usize>().unwrap() % 2))),
    });
    for (name, n) in [("shift-3-coordinate", 3), ("shift-4-coordinate", 4)] {
        out.push(Template {
            name,
            groupoid: RawGroupoid::builtin("cyclic_action", json!({ "points": n })),
            group: group(|g| g.cyclic = Some(n)),
            label: Some(Box::new(|id| GroupElement::Finite(second_coordinate(id)))),
        });
    }
    out.push(Template {
        name: "bundle-2x2-coordinate",
        groupoid: RawGroupoid::builtin("group_bundle", json!({ "orders": [2, 2] })),
        group: group(|g| g.cyclic = Some(2)),
        label: Some(Box::new(|id| GroupElement::Finite(second_coordinate(id)))),
    });
    out.push(Template {
        name: "union-pair-2-cyclic-2",
        groupoid: RawGroupoid::builtin(
            "disjoint_union",
            json!({ "left": pair(2), "right": cyclic(2) }),
        ),
        group: integers(1),
        label: Some(Box::new(|id| match id.strip_prefix("1:") {
            Some(rest) => GroupElement::from(pair_difference(rest)),
            None => GroupElement::from(0),
        })),
    });
    out.push(Template {
        name: "union-pair-2-pair-3",
        groupoid: RawGroupoid::builtin("disjoint_union", json!({ "left": pair(2), "right": pair(3) })),
        group: integers(1),
        label: Some(Box::new(|id| GroupElement::from(pair_difference(&id[2..])))),
    });
    out.push(Template {
        name: "product-pair-2-pair-2",
        groupoid: RawGroupoid::builtin("product", json!({ "left": pair(2), "right": pair(2) })),
        group: integers(2),
        label: Some(Box::new(|id| {
            let (a, b) = id.split_once('&').unwrap();
            GroupElement::Lattice(vec![pair_difference(a), pair_difference(b)])
        })),
    });
    out.push(Template {
        name: "product-pair-2-cyclic-2",
        groupoid: RawGroupoid::builtin("product", json!({ "left": pair(2), "right": cyclic(2) })),
        group: group(|g| g.cyclic = Some(2)),
        label: Some(Box::new(|id| GroupElement::Finite(id.split_once('&').unwrap().1.parse().unwrap()))),
    });
    out
}

fn skeleton(t: &Template, name: String) -> RawDocument {
    RawDocument {
        name,
        groupoid: t.groupoid.clone(),
        haar: None,
        group: t.group.clone(),
        cocycle: None,
        functions: BTreeMap::new(),
    }
}

fn groupoid_of(raw: &RawDocument) -> FiniteGroupoid {
    document::build(raw)
        .expect("corpus templates describe valid groupoids")
        .graded
        .groupoid()
        .clone()
}

/// The corpus documents for `seed`, in a fixed order.
pub fn builtin_corpus(seed: u64) -> Vec<RawDocument> {
    let mut out = Vec::new();
    for t in templates() {
        let mut plain = skeleton(&t, String::new());
        plain.group = None;
        let g = groupoid_of(&plain);
        let cocycle: Option<BTreeMap<String, RawLabel>> = t.label.as_ref().map(|label| {
            g.arrows()
                .iter()
                .map(|a| (a.id.clone(), RawLabel::from(&label(&a.id))))
                .collect()
        });

        let mut counting = skeleton(&t, format!("{}-counting", t.name));
        counting.cocycle = cocycle.clone();
        out.push(counting);

        let mut sampler = Sampler::new(seed, &["corpus", t.name]);
        let rho = g
            .units()
            .iter()
            .map(|u| (u.clone(), sampler.uniform(0.25, 4.0)))
            .collect();
        let mut weighted = skeleton(&t, format!("{}-weighted", t.name));
        weighted.cocycle = cocycle;
        weighted.haar = Some(RawHaar {
            rho: Some(rho),
            weights: None,
        });
        out.push(weighted);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_large_and_valid() {
        let corpus = builtin_corpus(7);
        assert!(corpus.len() >= 12);
        for raw in &corpus {
            let text = serde_json::to_string(raw).unwrap();
            let doc = document::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", raw.name));
            assert_eq!(doc.name, raw.name);
        }
    }

    #[test]
    fn sign_grading_has_alternating_identity_fibre() {
        let raw = builtin_corpus(0)
            .into_iter()
            .find(|d| d.name == "symmetric-3-sign-counting")
            .unwrap();
        let doc = document::build(&raw).unwrap();
        assert_eq!(doc.graded.identity_fiber().groupoid.arrow_count(), 3);
    }
}
