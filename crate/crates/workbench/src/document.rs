//! JSON documents describing a graded groupoid with a Haar system and named
//! functions on its arrows.
//!
//! ```json
//! {
//!   "name": "pair-2",
//!   "groupoid": {"builtin": "pair", "params": {"n": 2}},
//!   "haar": {"rho": {"1": 1.0, "2": 4.0}},
//!   "group": {"free_abelian": 1},
//!   "cocycle": {"(1,1)": 0, "(1,2)": -1, "(2,1)": 1, "(2,2)": 0},
//!   "functions": {"f": {"(1,2)": [1.0, 0.0]}}
//! }
//! ```

use std::collections::BTreeMap;

use groupoid_cstar::group::FiniteGroup;
use groupoid_cstar::groupoid::{
    action_groupoid, cyclic_shift_action, disjoint_union, group_bundle, group_groupoid,
    pair_groupoid, product,
};
use groupoid_cstar::haar::left_invariance_violation;
use groupoid_cstar::{
    Arrow, AxiomViolation, Cocycle, Complex64, DiscreteGroup, FiniteGroupoid, GradedGroupoid,
    GroupElement, GroupoidFunction, GroupoidParts, HaarSystem,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Debug, thiserror::Error)]
pub enum DocumentError {
    #[error("{path}: {message} (line {line}, column {column})")]
    Syntax {
        path: String,
        message: String,
        line: usize,
        column: usize,
    },
    #[error("{path}: {message}")]
    Invalid { path: String, message: String },
    #[error("{path}: {source}")]
    Core {
        path: String,
        #[source]
        source: groupoid_cstar::Error,
    },
}

impl DocumentError {
    fn invalid(path: impl Into<String>, message: impl Into<String>) -> Self {
        DocumentError::Invalid {
            path: path.into(),
            message: message.into(),
        }
    }

    fn core(path: impl Into<String>, source: groupoid_cstar::Error) -> Self {
        DocumentError::Core {
            path: path.into(),
            source,
        }
    }

    /// Field path of the offending value.
    pub fn path(&self) -> &str {
        match self {
            DocumentError::Syntax { path, .. }
            | DocumentError::Invalid { path, .. }
            | DocumentError::Core { path, .. } => path,
        }
    }
}

type Result<T> = std::result::Result<T, DocumentError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawDocument {
    pub name: String,
    pub groupoid: RawGroupoid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub haar: Option<RawHaar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<RawGroup>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cocycle: Option<BTreeMap<String, RawLabel>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, BTreeMap<String, [f64; 2]>>,
}

/// Exactly one of `builtin` (with `params`) or `explicit`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroupoid {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub explicit: Option<RawExplicit>,
}

impl RawGroupoid {
    pub fn builtin(name: &str, params: Value) -> Self {
        Self {
            builtin: Some(name.into()),
            params: Some(params),
            explicit: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawExplicit {
    pub units: Vec<String>,
    pub arrows: Vec<RawArrow>,
    /// Triples `[x, y, xy]` for every composable pair.
    pub compose: Vec<[String; 3]>,
    /// Arrow id to the id of its inverse.
    pub inverses: BTreeMap<String, String>,
    /// Unit id to its identity arrow; derived from idempotents when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unit_arrows: Option<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawArrow {
    pub id: String,
    /// Source unit id.
    pub src: String,
    /// Range unit id.
    pub dst: String,
}

/// Unit weights, or a full table of arrow weights.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawHaar {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho: Option<BTreeMap<String, f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<BTreeMap<String, f64>>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawGroup {
    /// Cayley table; element 0 need not be the identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finite: Option<Vec<Vec<usize>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub free_abelian: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub symmetric: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawLabel {
    Scalar(i64),
    Vector(Vec<i64>),
}

impl From<&GroupElement> for RawLabel {
    fn from(el: &GroupElement) -> Self {
        match el {
            GroupElement::Finite(i) => RawLabel::Scalar(*i as i64),
            GroupElement::Lattice(v) if v.len() == 1 => RawLabel::Scalar(v[0]),
            GroupElement::Lattice(v) => RawLabel::Vector(v.clone()),
        }
    }
}

/// A parsed and validated document.
#[derive(Debug, Clone)]
pub struct WorkbenchDocument {
    pub name: String,
    pub graded: GradedGroupoid,
    pub functions: BTreeMap<String, GroupoidFunction>,
    /// Arrow weights as declared, when given as a table.
    pub declared_weights: Option<Vec<f64>>,
}

impl WorkbenchDocument {
    /// A named function, or the builtins `unit` and `zero`.
    pub fn function(&self, name: &str) -> Option<GroupoidFunction> {
        if let Some(f) = self.functions.get(name) {
            return Some(f.clone());
        }
        let alg = self.graded.algebra();
        match name {
            "unit" => Some(alg.unit()),
            "zero" => Some(alg.zero()),
            _ => None,
        }
    }

    /// Weights the document asks for: the declared table if any, otherwise
    /// the ones induced by `rho`.
    pub fn arrow_weights(&self) -> Vec<f64> {
        self.declared_weights
            .clone()
            .unwrap_or_else(|| self.graded.haar().weights().to_vec())
    }

    /// First failure of left invariance of [`Self::arrow_weights`].
    pub fn haar_violation(&self) -> Option<AxiomViolation> {
        left_invariance_violation(self.graded.groupoid(), &self.arrow_weights())
    }
}

/// Parses and validates a document, rejecting non-invariant weight tables.
pub fn parse(text: &str) -> Result<WorkbenchDocument> {
    let doc = parse_lenient(text)?;
    if let Some(v) = doc.haar_violation() {
        return Err(DocumentError::core("haar.weights", v.into()));
    }
    Ok(doc)
}

/// Like [`parse`], but keeps a weight table that is not left invariant so
/// it can be reported. The algebra then uses the weights of the unit arrows.
pub fn parse_lenient(text: &str) -> Result<WorkbenchDocument> {
    let raw: RawDocument = from_text(text)?;
    build(&raw)
}

fn from_text<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        DocumentError::Syntax {
            path,
            message: inner.to_string(),
            line: inner.line(),
            column: inner.column(),
        }
    })
}

fn from_value<T: DeserializeOwned>(value: &Value, prefix: &str) -> Result<T> {
    serde_path_to_error::deserialize(value).map_err(|e| {
        let inner = e.path().to_string();
        let path = if inner == "." { prefix.to_string() } else { format!("{prefix}.{inner}") };
        DocumentError::invalid(path, e.into_inner().to_string())
    })
}

pub fn build(raw: &RawDocument) -> Result<WorkbenchDocument> {
    let groupoid = build_groupoid(&raw.groupoid, "groupoid")?;
    let (haar, declared_weights) = build_haar(&groupoid, raw.haar.as_ref())?;
    let cocycle = match (&raw.group, &raw.cocycle) {
        (None, None) => Cocycle::trivial(&groupoid),
        (Some(group), Some(labels)) => {
            let group = build_group(group)?;
            build_cocycle(&groupoid, group, labels)?
        }
        (Some(_), None) => return Err(DocumentError::invalid("cocycle", "required when a group is given")),
        (None, Some(_)) => return Err(DocumentError::invalid("group", "required when a cocycle is given")),
    };
    let graded = GradedGroupoid::new(groupoid, haar, cocycle).map_err(|e| DocumentError::core("cocycle", e))?;
    let mut functions = BTreeMap::new();
    for (name, coeffs) in &raw.functions {
        functions.insert(name.clone(), build_function(graded.groupoid(), name, coeffs)?);
    }
    Ok(WorkbenchDocument {
        name: raw.name.clone(),
        graded,
        functions,
        declared_weights,
    })
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SizeParams {
    n: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ActionParams {
    points: usize,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct BundleParams {
    orders: Vec<usize>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairOfGroupoids {
    left: RawGroupoid,
    right: RawGroupoid,
}

fn positive(n: usize, path: &str) -> Result<usize> {
    if n == 0 {
        return Err(DocumentError::invalid(path, "must be at least 1"));
    }
    Ok(n)
}

fn build_groupoid(raw: &RawGroupoid, path: &str) -> Result<FiniteGroupoid> {
    match (&raw.builtin, &raw.explicit) {
        (Some(name), None) => {
            let ppath = format!("{path}.params");
            let params = raw.params.clone().unwrap_or(Value::Object(Default::default()));
            let core = |e| DocumentError::core(path, e);
            match name.as_str() {
                "pair" => {
                    let p: SizeParams = from_value(&params, &ppath)?;
                    pair_groupoid(positive(p.n, &ppath)?).map_err(core)
                }
                "cyclic_group" => {
                    let p: SizeParams = from_value(&params, &ppath)?;
                    group_groupoid(&FiniteGroup::cyclic(positive(p.n, &ppath)?)).map_err(core)
                }
                "symmetric_group" => {
                    let p: SizeParams = from_value(&params, &ppath)?;
                    if !(1..=5).contains(&p.n) {
                        return Err(DocumentError::invalid(ppath, "n must be between 1 and 5"));
                    }
                    group_groupoid(&FiniteGroup::symmetric(p.n)).map_err(core)
                }
                "cyclic_action" => {
                    let p: ActionParams = from_value(&params, &ppath)?;
                    let n = positive(p.points, &ppath)?;
                    action_groupoid(&FiniteGroup::cyclic(n), &cyclic_shift_action(n)).map_err(core)
                }
                "group_bundle" => {
                    let p: BundleParams = from_value(&params, &ppath)?;
                    let groups: Vec<FiniteGroup> = p
                        .orders
                        .iter()
                        .map(|&k| positive(k, &ppath).map(FiniteGroup::cyclic))
                        .collect::<Result<_>>()?;
                    group_bundle(&groups).map_err(core)
                }
                "disjoint_union" | "product" => {
                    let p: PairOfGroupoids = from_value(&params, &ppath)?;
                    let left = build_groupoid(&p.left, &format!("{ppath}.left"))?;
                    let right = build_groupoid(&p.right, &format!("{ppath}.right"))?;
                    if name == "product" {
                        product(&left, &right).map_err(core)
                    } else {
                        disjoint_union(&left, &right).map_err(core)
                    }
                }
                other => Err(DocumentError::invalid(
                    format!("{path}.builtin"),
                    format!("unknown builtin groupoid {other:?}"),
                )),
            }
        }
        (None, Some(explicit)) => {
            if raw.params.is_some() {
                return Err(DocumentError::invalid(format!("{path}.params"), "only allowed with a builtin"));
            }
            build_explicit(explicit, &format!("{path}.explicit"))
        }
        _ => Err(DocumentError::invalid(path, "expected exactly one of \"builtin\" or \"explicit\"")),
    }
}

fn build_explicit(raw: &RawExplicit, path: &str) -> Result<FiniteGroupoid> {
    let unit_index: BTreeMap<&str, usize> = raw.units.iter().enumerate().map(|(i, u)| (u.as_str(), i)).collect();
    let arrow_index: BTreeMap<&str, usize> =
        raw.arrows.iter().enumerate().map(|(i, a)| (a.id.as_str(), i)).collect();
    let unit = |id: &str, at: String| {
        unit_index
            .get(id)
            .copied()
            .ok_or_else(|| DocumentError::invalid(at, format!("unknown unit {id:?}")))
    };
    let arrow = |id: &str, at: String| {
        arrow_index
            .get(id)
            .copied()
            .ok_or_else(|| DocumentError::invalid(at, format!("unknown arrow {id:?}")))
    };

    let mut arrows = Vec::with_capacity(raw.arrows.len());
    for (k, a) in raw.arrows.iter().enumerate() {
        arrows.push(Arrow {
            id: a.id.clone(),
            src: unit(&a.src, format!("{path}.arrows[{k}].src"))?,
            dst: unit(&a.dst, format!("{path}.arrows[{k}].dst"))?,
        });
    }
    let n = arrows.len();
    let mut compose = vec![None; n * n];
    for (k, [x, y, xy]) in raw.compose.iter().enumerate() {
        let at = format!("{path}.compose[{k}]");
        let (x, y, xy) = (arrow(x, at.clone())?, arrow(y, at.clone())?, arrow(xy, at.clone())?);
        match compose[x * n + y] {
            Some(prev) if prev != xy => {
                return Err(DocumentError::invalid(at, "conflicts with an earlier triple"));
            }
            _ => compose[x * n + y] = Some(xy),
        }
    }
    let mut inverse = Vec::with_capacity(n);
    for a in &raw.arrows {
        let at = format!("{path}.inverses.{}", a.id);
        let inv = raw
            .inverses
            .get(&a.id)
            .ok_or_else(|| DocumentError::invalid(at.clone(), "missing inverse"))?;
        inverse.push(arrow(inv, at)?);
    }
    if let Some(extra) = raw.inverses.keys().find(|k| !arrow_index.contains_key(k.as_str())) {
        return Err(DocumentError::invalid(format!("{path}.inverses.{extra}"), "unknown arrow"));
    }
    let unit_arrows = match &raw.unit_arrows {
        Some(map) => raw
            .units
            .iter()
            .map(|u| {
                let at = format!("{path}.unit_arrows.{u}");
                let id = map.get(u).ok_or_else(|| DocumentError::invalid(at.clone(), "missing identity arrow"))?;
                arrow(id, at)
            })
            .collect::<Result<Vec<_>>>()?,
        None => (0..raw.units.len())
            .map(|u| {
                (0..n)
                    .find(|&x| arrows[x].src == u && arrows[x].dst == u && compose[x * n + x] == Some(x))
                    .ok_or_else(|| {
                        DocumentError::invalid(
                            format!("{path}.units[{u}]"),
                            format!("no idempotent arrow at unit {:?}", raw.units[u]),
                        )
                    })
            })
            .collect::<Result<Vec<_>>>()?,
    };
    FiniteGroupoid::new(GroupoidParts {
        units: raw.units.clone(),
        arrows,
        compose,
        inverse,
        unit_arrows,
    })
    .map_err(|e| DocumentError::core(path, e))
}

fn build_haar(g: &FiniteGroupoid, raw: Option<&RawHaar>) -> Result<(HaarSystem, Option<Vec<f64>>)> {
    let Some(raw) = raw else {
        return Ok((HaarSystem::counting(g), None));
    };
    match (&raw.rho, &raw.weights) {
        (Some(rho), None) => {
            if let Some(extra) = rho.keys().find(|k| g.unit_index(k).is_none()) {
                return Err(DocumentError::invalid(format!("haar.rho.{extra}"), "unknown unit"));
            }
            let values = g
                .units()
                .iter()
                .map(|u| {
                    rho.get(u)
                        .copied()
                        .ok_or_else(|| DocumentError::invalid("haar.rho", format!("missing weight for unit {u}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let haar = HaarSystem::from_weights(g, values).map_err(|e| DocumentError::core("haar.rho", e))?;
            Ok((haar, None))
        }
        (None, Some(table)) => {
            if let Some(extra) = table.keys().find(|k| g.arrow_index(k).is_none()) {
                return Err(DocumentError::invalid(format!("haar.weights.{extra}"), "unknown arrow"));
            }
            let mut weights = Vec::with_capacity(g.arrow_count());
            for a in g.arrows() {
                let at = format!("haar.weights.{}", a.id);
                let w = *table
                    .get(&a.id)
                    .ok_or_else(|| DocumentError::invalid("haar.weights", format!("missing weight for arrow {}", a.id)))?;
                if !(w.is_finite() && w > 0.0) {
                    return Err(DocumentError::invalid(at, format!("nonpositive Haar weight {w}")));
                }
                weights.push(w);
            }
            let rho = (0..g.unit_count()).map(|u| weights[g.unit_arrow(u)]).collect();
            let haar = HaarSystem::from_weights(g, rho).map_err(|e| DocumentError::core("haar.weights", e))?;
            Ok((haar, Some(weights)))
        }
        _ => Err(DocumentError::invalid("haar", "expected exactly one of \"rho\" or \"weights\"")),
    }
}

fn build_group(raw: &RawGroup) -> Result<DiscreteGroup> {
    let given = [raw.finite.is_some(), raw.free_abelian.is_some(), raw.cyclic.is_some(), raw.symmetric.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(DocumentError::invalid(
            "group",
            "expected exactly one of \"finite\", \"free_abelian\", \"cyclic\" or \"symmetric\"",
        ));
    }
    if let Some(table) = &raw.finite {
        return FiniteGroup::from_cayley(table.clone())
            .map(DiscreteGroup::Finite)
            .map_err(|e| DocumentError::core("group.finite", e));
    }
    if let Some(rank) = raw.free_abelian {
        return Ok(DiscreteGroup::FreeAbelian { rank });
    }
    if let Some(n) = raw.cyclic {
        return Ok(DiscreteGroup::Finite(FiniteGroup::cyclic(positive(n, "group.cyclic")?)));
    }
    let n = raw.symmetric.unwrap_or_default();
    if !(1..=5).contains(&n) {
        return Err(DocumentError::invalid("group.symmetric", "must be between 1 and 5"));
    }
    Ok(DiscreteGroup::Finite(FiniteGroup::symmetric(n)))
}

fn build_label(group: &DiscreteGroup, raw: &RawLabel, path: &str) -> Result<GroupElement> {
    let el = match (group, raw) {
        (DiscreteGroup::Finite(_), RawLabel::Scalar(i)) if *i >= 0 => GroupElement::Finite(*i as usize),
        (DiscreteGroup::FreeAbelian { rank: 1 }, RawLabel::Scalar(v)) => GroupElement::from(*v),
        (DiscreteGroup::FreeAbelian { .. }, RawLabel::Vector(v)) => GroupElement::Lattice(v.clone()),
        _ => return Err(DocumentError::invalid(path, format!("not an element of the {}", group.describe()))),
    };
    if !group.contains(&el) {
        return Err(DocumentError::invalid(path, format!("not an element of the {}", group.describe())));
    }
    Ok(el)
}

fn build_cocycle(g: &FiniteGroupoid, group: DiscreteGroup, raw: &BTreeMap<String, RawLabel>) -> Result<Cocycle> {
    if let Some(extra) = raw.keys().find(|k| g.arrow_index(k).is_none()) {
        return Err(DocumentError::invalid(format!("cocycle.{extra}"), "unknown arrow"));
    }
    let mut labels = Vec::with_capacity(g.arrow_count());
    for a in g.arrows() {
        let label = raw
            .get(&a.id)
            .ok_or_else(|| DocumentError::invalid("cocycle", format!("missing label for arrow {}", a.id)))?;
        labels.push(build_label(&group, label, &format!("cocycle.{}", a.id))?);
    }
    Ok(Cocycle::new(group, labels))
}

fn build_function(g: &FiniteGroupoid, name: &str, raw: &BTreeMap<String, [f64; 2]>) -> Result<GroupoidFunction> {
    let mut f = GroupoidFunction::zeros(g.arrow_count());
    for (id, [re, im]) in raw {
        let at = format!("functions.{name}.{id}");
        let x = g
            .arrow_index(id)
            .ok_or_else(|| DocumentError::invalid(at.clone(), "unknown arrow"))?;
        if !(re.is_finite() && im.is_finite()) {
            return Err(DocumentError::invalid(at, "coefficient is not finite"));
        }
        f.coeffs_mut()[x] = Complex64::new(*re, *im);
    }
    Ok(f)
}

/// Writes `doc`'s cocycle back in document form, keyed by arrow id.
pub fn raw_labels(graded: &GradedGroupoid) -> BTreeMap<String, RawLabel> {
    graded
        .groupoid()
        .arrows()
        .iter()
        .zip(&graded.cocycle().labels)
        .map(|(a, l)| (a.id.clone(), RawLabel::from(l)))
        .collect()
}
