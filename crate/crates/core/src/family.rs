//! Operator families over finite parameter complexes and their index.
//!
//! A parameter space is a finite graph; its connected components stand in for
//! the components of the space. The index of a Fredholm family is one integer
//! per component, keyed by the component's least vertex identifier. Sampled
//! families are checked for consistency: an index change across an edge means
//! the samples cannot come from a continuous Fredholm family.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exactcore::{GaussianRational, LaurentPoly};
use crate::fredholm::{fredholm_margin, is_fredholm, FredholmError, VerdictReason};
use crate::opmodel::{self, norm_bound, BlockOperator};
use crate::random;

pub type VertexId = String;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FamilyError {
    #[error("malformed family: {0}")]
    Malformed(String),
    #[error("operator at {vertex}{} is not Fredholm ({reason})", layer.map(|l| format!(" (layer {l})")).unwrap_or_default())]
    NonFredholmAt {
        vertex: VertexId,
        layer: Option<u64>,
        reason: VerdictReason,
    },
    #[error("index jumps across edge {u}|{v}: {index_u} vs {index_v}")]
    IndexMismatchWithinComponent {
        u: VertexId,
        v: VertexId,
        index_u: i64,
        index_v: i64,
    },
    #[error("edge {u}|{v}: declared bound {bound} but norm_bound of the difference is {actual}")]
    EdgeBoundViolated {
        u: VertexId,
        v: VertexId,
        bound: String,
        actual: String,
    },
    #[error("homotopy layer {layer} differs from the endpoint family at {vertex}")]
    EndpointMismatch { layer: u64, vertex: VertexId },
    #[error("index changes along the homotopy across edge {u}|{v}: {index_u} vs {index_v}")]
    IndexChangedAlongHomotopy {
        u: VertexId,
        v: VertexId,
        index_u: i64,
        index_v: i64,
    },
    #[error("index vector components {found:?} do not match the complex components {expected:?}")]
    ComponentMismatch {
        expected: Vec<VertexId>,
        found: Vec<VertexId>,
    },
    #[error(transparent)]
    Fredholm(#[from] FredholmError),
}

impl FamilyError {
    pub fn code(&self) -> &'static str {
        match self {
            FamilyError::Malformed(_) => "MalformedDocument",
            FamilyError::NonFredholmAt { .. } => "NonFredholmAt",
            FamilyError::IndexMismatchWithinComponent { .. } => "IndexMismatchWithinComponent",
            FamilyError::EdgeBoundViolated { .. } => "EdgeBoundViolated",
            FamilyError::EndpointMismatch { .. } => "EndpointMismatch",
            FamilyError::IndexChangedAlongHomotopy { .. } => "IndexChangedAlongHomotopy",
            FamilyError::ComponentMismatch { .. } => "ComponentMismatch",
            FamilyError::Fredholm(e) => e.code(),
        }
    }
}

/// Union–find over `0..n` with path halving and union by size.
struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSets {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
    }
}

/// A finite 1-complex: vertices and undirected edges without self-loops.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamComplex {
    vertices: BTreeSet<VertexId>,
    edges: BTreeSet<(VertexId, VertexId)>,
}

fn edge_key(u: &str, v: &str) -> (VertexId, VertexId) {
    if u <= v {
        (u.to_string(), v.to_string())
    } else {
        (v.to_string(), u.to_string())
    }
}

impl ParamComplex {
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self, FamilyError>
    where
        V: IntoIterator,
        V::Item: Into<VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut vs = BTreeSet::new();
        for v in vertices {
            let v = v.into();
            if !vs.insert(v.clone()) {
                return Err(FamilyError::Malformed(format!("duplicate vertex {v:?}")));
            }
        }
        let mut es = BTreeSet::new();
        for (u, v) in edges {
            for x in [&u, &v] {
                if !vs.contains(x) {
                    return Err(FamilyError::Malformed(format!(
                        "edge endpoint {x:?} is not a vertex"
                    )));
                }
            }
            if u == v {
                return Err(FamilyError::Malformed(format!("self-loop at {u:?}")));
            }
            es.insert(edge_key(&u, &v));
        }
        Ok(Self {
            vertices: vs,
            edges: es,
        })
    }

    /// Path graph `v0 – v1 – … – v{n-1}` with the given names.
    pub fn path(names: &[&str]) -> Self {
        let edges = names
            .windows(2)
            .map(|w| (w[0].to_string(), w[1].to_string()));
        Self::new(
            names.iter().map(|s| s.to_string()),
            edges.collect::<Vec<_>>(),
        )
        .expect("valid path")
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.vertices.iter()
    }

    pub fn edges(&self) -> impl Iterator<Item = &(VertexId, VertexId)> {
        self.edges.iter()
    }

    pub fn contains_edge(&self, u: &str, v: &str) -> bool {
        self.edges.contains(&edge_key(u, v))
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `self × {0..=layers}`, vertices named `x@k`, with every edge copied in
    /// each layer and `x@k – x@(k+1)` joining consecutive layers.
    pub fn product_with_path(&self, layers: u64) -> Self {
        let vertices: Vec<VertexId> = (0..=layers)
            .flat_map(|k| self.vertices.iter().map(move |x| layer_vertex(x, k)))
            .collect();
        let mut edges = Vec::new();
        for k in 0..=layers {
            for (u, v) in &self.edges {
                edges.push((layer_vertex(u, k), layer_vertex(v, k)));
            }
            if k < layers {
                for x in &self.vertices {
                    edges.push((layer_vertex(x, k), layer_vertex(x, k + 1)));
                }
            }
        }
        Self::new(vertices, edges).expect("product of a valid complex")
    }
}

pub fn layer_vertex(x: &str, k: u64) -> VertexId {
    format!("{x}@{k}")
}

fn split_layer_vertex(v: &str) -> Option<(&str, u64)> {
    let (x, k) = v.rsplit_once('@')?;
    Some((x, k.parse().ok()?))
}

/// Components as sorted member lists, ordered by their least member.
pub fn connected_components(c: &ParamComplex) -> Vec<Vec<VertexId>> {
    let ids: Vec<&VertexId> = c.vertices.iter().collect();
    let pos: BTreeMap<&VertexId, usize> = ids.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut dsu = DisjointSets::new(ids.len());
    for (u, v) in &c.edges {
        dsu.union(pos[u], pos[v]);
    }
    let mut groups: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for (i, v) in ids.iter().enumerate() {
        groups.entry(dsu.find(i)).or_default().push((*v).clone());
    }
    let mut comps: Vec<Vec<VertexId>> = groups.into_values().collect();
    comps.sort_by(|a, b| a[0].cmp(&b[0]));
    comps
}

/// A sampled operator family.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorFamily {
    complex: ParamComplex,
    assignment: BTreeMap<VertexId, BlockOperator>,
    edge_bounds: BTreeMap<(VertexId, VertexId), BigRational>,
}

impl OperatorFamily {
    pub fn new(
        complex: ParamComplex,
        assignment: BTreeMap<VertexId, BlockOperator>,
        edge_bounds: BTreeMap<(VertexId, VertexId), BigRational>,
    ) -> Result<Self, FamilyError> {
        for v in complex.vertices() {
            if !assignment.contains_key(v) {
                return Err(FamilyError::Malformed(format!(
                    "vertex {v:?} has no operator"
                )));
            }
        }
        if let Some(extra) = assignment.keys().find(|k| !complex.vertices.contains(*k)) {
            return Err(FamilyError::Malformed(format!(
                "operator assigned to unknown vertex {extra:?}"
            )));
        }
        let mut sigs = assignment.values().map(BlockOperator::signature);
        if let Some(first) = sigs.next() {
            if sigs.any(|s| s != first) {
                return Err(FamilyError::Malformed(
                    "operators do not share one block signature".into(),
                ));
            }
        }
        let mut bounds = BTreeMap::new();
        for ((u, v), b) in edge_bounds {
            if !complex.contains_edge(&u, &v) {
                return Err(FamilyError::Malformed(format!(
                    "edge bound on non-edge {u}|{v}"
                )));
            }
            if b.is_negative() {
                return Err(FamilyError::Malformed(format!(
                    "negative edge bound on {u}|{v}"
                )));
            }
            bounds.insert(edge_key(&u, &v), b);
        }
        Ok(Self {
            complex,
            assignment,
            edge_bounds: bounds,
        })
    }

    /// Same operator at every vertex.
    pub fn constant(complex: ParamComplex, op: &BlockOperator) -> Self {
        let assignment = complex
            .vertices()
            .map(|v| (v.clone(), op.clone()))
            .collect();
        Self {
            complex,
            assignment,
            edge_bounds: BTreeMap::new(),
        }
    }

    pub fn from_fn(
        complex: ParamComplex,
        mut f: impl FnMut(&str) -> BlockOperator,
    ) -> Result<Self, FamilyError> {
        let assignment = complex.vertices().map(|v| (v.clone(), f(v))).collect();
        Self::new(complex, assignment, BTreeMap::new())
    }

    pub fn complex(&self) -> &ParamComplex {
        &self.complex
    }

    pub fn operator(&self, v: &str) -> Option<&BlockOperator> {
        self.assignment.get(v)
    }

    pub fn operators(&self) -> impl Iterator<Item = (&VertexId, &BlockOperator)> {
        self.assignment.iter()
    }

    pub fn edge_bounds(&self) -> &BTreeMap<(VertexId, VertexId), BigRational> {
        &self.edge_bounds
    }

    /// Checks `norm_bound(T_u − T_v) ≤ bound` on every edge with a declared bound.
    pub fn verify_edge_bounds(&self) -> Result<(), FamilyError> {
        for ((u, v), bound) in &self.edge_bounds {
            let diff =
                opmodel::sub(&self.assignment[u], &self.assignment[v]).expect("shared signature");
            let actual = norm_bound(&diff);
            if actual > *bound {
                return Err(FamilyError::EdgeBoundViolated {
                    u: u.clone(),
                    v: v.clone(),
                    bound: GaussianRational::format_rational(bound),
                    actual: GaussianRational::format_rational(&actual),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentIndex {
    pub rep: VertexId,
    pub members: Vec<VertexId>,
    pub index: i64,
}

/// One integer per connected component, ordered by representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexVector {
    pub components: Vec<ComponentIndex>,
}

impl IndexVector {
    pub fn values(&self) -> Vec<i64> {
        self.components.iter().map(|c| c.index).collect()
    }

    pub fn by_rep(&self) -> BTreeMap<VertexId, i64> {
        self.components
            .iter()
            .map(|c| (c.rep.clone(), c.index))
            .collect()
    }

    /// An index vector over `c` with the given values in representative order.
    pub fn for_complex(c: &ParamComplex, values: &[i64]) -> Result<Self, FamilyError> {
        let comps = connected_components(c);
        if comps.len() != values.len() {
            return Err(FamilyError::ComponentMismatch {
                expected: comps.iter().map(|m| m[0].clone()).collect(),
                found: (0..values.len()).map(|i| format!("#{i}")).collect(),
            });
        }
        Ok(Self {
            components: comps
                .into_iter()
                .zip(values)
                .map(|(members, &index)| ComponentIndex {
                    rep: members[0].clone(),
                    members,
                    index,
                })
                .collect(),
        })
    }
}

fn vertex_indices(f: &OperatorFamily) -> Result<BTreeMap<VertexId, i64>, FamilyError> {
    f.assignment
        .iter()
        .map(|(v, op)| {
            let verdict = is_fredholm(op);
            verdict
                .index
                .map(|i| (v.clone(), i))
                .ok_or_else(|| FamilyError::NonFredholmAt {
                    vertex: v.clone(),
                    layer: None,
                    reason: verdict.reason,
                })
        })
        .collect()
}

fn assemble_index_vector(
    c: &ParamComplex,
    idx: &BTreeMap<VertexId, i64>,
) -> Result<IndexVector, FamilyError> {
    for (u, v) in c.edges() {
        if idx[u] != idx[v] {
            return Err(FamilyError::IndexMismatchWithinComponent {
                u: u.clone(),
                v: v.clone(),
                index_u: idx[u],
                index_v: idx[v],
            });
        }
    }
    let components = connected_components(c)
        .into_iter()
        .map(|members| ComponentIndex {
            rep: members[0].clone(),
            index: idx[&members[0]],
            members,
        })
        .collect();
    Ok(IndexVector { components })
}

/// The index of a Fredholm family.
///
/// Every vertex must carry a Fredholm operator, declared edge bounds must
/// hold, and the index must agree across every edge (hence on each component).
pub fn family_index(f: &OperatorFamily) -> Result<IndexVector, FamilyError> {
    f.verify_edge_bounds()?;
    let idx = vertex_indices(f)?;
    assemble_index_vector(&f.complex, &idx)
}

pub fn is_weyl_family(f: &OperatorFamily) -> bool {
    family_index(f).is_ok_and(|v| v.components.iter().all(|c| c.index == 0))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomotopyReport {
    pub layers: u64,
    /// Per layer, the index at every base vertex.
    pub table: Vec<BTreeMap<VertexId, i64>>,
    pub start: IndexVector,
    pub end: IndexVector,
}

/// Verifies a sampled homotopy `h` on `𝕏 × {0..K}` from `s` to `t`.
pub fn homotopy_check(
    h: &OperatorFamily,
    s: &OperatorFamily,
    t: &OperatorFamily,
) -> Result<HomotopyReport, FamilyError> {
    if s.complex != t.complex {
        return Err(FamilyError::Malformed(
            "endpoint families live on different complexes".into(),
        ));
    }
    let layers = h
        .complex
        .vertices()
        .map(|v| split_layer_vertex(v).map(|(_, k)| k))
        .collect::<Option<Vec<u64>>>()
        .and_then(|ks| ks.into_iter().max())
        .ok_or_else(|| FamilyError::Malformed("homotopy vertices must be named x@k".into()))?;
    if h.complex != s.complex.product_with_path(layers) {
        return Err(FamilyError::Malformed(format!(
            "homotopy complex is not the product of the base complex with a {}-layer path",
            layers + 1
        )));
    }
    for x in s.complex.vertices() {
        if h.assignment[&layer_vertex(x, 0)] != s.assignment[x] {
            return Err(FamilyError::EndpointMismatch {
                layer: 0,
                vertex: x.clone(),
            });
        }
        if h.assignment[&layer_vertex(x, layers)] != t.assignment[x] {
            return Err(FamilyError::EndpointMismatch {
                layer: layers,
                vertex: x.clone(),
            });
        }
    }
    let mut table = vec![BTreeMap::new(); layers as usize + 1];
    let mut all = BTreeMap::new();
    for (v, op) in &h.assignment {
        let (x, k) = split_layer_vertex(v).expect("checked names");
        let verdict = is_fredholm(op);
        let i = verdict.index.ok_or_else(|| FamilyError::NonFredholmAt {
            vertex: x.to_string(),
            layer: Some(k),
            reason: verdict.reason,
        })?;
        table[k as usize].insert(x.to_string(), i);
        all.insert(v.clone(), i);
    }
    h.verify_edge_bounds()?;
    assemble_index_vector(&h.complex, &all).map_err(|e| match e {
        FamilyError::IndexMismatchWithinComponent {
            u,
            v,
            index_u,
            index_v,
        } => FamilyError::IndexChangedAlongHomotopy {
            u,
            v,
            index_u,
            index_v,
        },
        other => other,
    })?;
    let start = family_index(s)?;
    let end = family_index(t)?;
    if start != end {
        // unreachable when the layers above are consistent; kept as a guard
        let c = start
            .components
            .iter()
            .zip(&end.components)
            .find(|(a, b)| a != b)
            .expect("differ");
        return Err(FamilyError::IndexChangedAlongHomotopy {
            u: layer_vertex(&c.0.rep, 0),
            v: layer_vertex(&c.1.rep, layers),
            index_u: c.0.index,
            index_v: c.1.index,
        });
    }
    Ok(HomotopyReport {
        layers,
        table,
        start,
        end,
    })
}

/// Builds the homotopy family on `base × {0..layers}` with
/// `h(x, k) = f(x, k/layers)`.
pub fn homotopy_from_fn(
    base: &ParamComplex,
    layers: u64,
    mut f: impl FnMut(&str, &BigRational) -> BlockOperator,
) -> Result<OperatorFamily, FamilyError> {
    let c = base.product_with_path(layers);
    OperatorFamily::from_fn(c, |v| {
        let (x, k) = split_layer_vertex(v).expect("product names");
        let t = BigRational::new((k as i64).into(), (layers.max(1) as i64).into());
        f(x, &t)
    })
}

/// The constant family `T_{z^{-n_i}}` on component `i`, whose index is `u`.
pub fn synthesize_family(c: &ParamComplex, u: &IndexVector) -> Result<OperatorFamily, FamilyError> {
    let comps = connected_components(c);
    let expected: Vec<VertexId> = comps.iter().map(|m| m[0].clone()).collect();
    let found: Vec<VertexId> = u.components.iter().map(|ci| ci.rep.clone()).collect();
    if expected != found {
        return Err(FamilyError::ComponentMismatch { expected, found });
    }
    let mut assignment = BTreeMap::new();
    for (members, ci) in comps.iter().zip(&u.components) {
        let op = BlockOperator::single_toeplitz(LaurentPoly::z_pow(-ci.index));
        for v in members {
            assignment.insert(v.clone(), op.clone());
        }
    }
    OperatorFamily::new(c.clone(), assignment, BTreeMap::new())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalConstancyReport {
    /// Certified radius used for the perturbations (`None`: unconstrained,
    /// perturbations then have `norm_bound < 1`).
    pub margin: Option<BigRational>,
    pub base: IndexVector,
    pub trials: usize,
    pub failures: usize,
}

/// Perturbs every vertex by a random same-signature operator of
/// `norm_bound` below the family's certified margin, `trials` times, and
/// counts trials whose index vector changed.
pub fn local_constancy_check<R: Rng>(
    f: &OperatorFamily,
    trials: usize,
    rng: &mut R,
) -> Result<LocalConstancyReport, FamilyError> {
    let base = family_index(f)?;
    let mut margin: Option<BigRational> = None;
    for op in f.assignment.values() {
        if let Some(m) = fredholm_margin(op)? {
            margin = Some(match margin {
                Some(cur) if cur <= m => cur,
                _ => m,
            });
        }
    }
    let radius = margin.clone().unwrap_or_else(BigRational::one);
    let mut failures = 0;
    for _ in 0..trials {
        let perturbed = OperatorFamily::from_fn(f.complex.clone(), |v| {
            let op = &f.assignment[v];
            let p = random::any_operator(rng, &op.signature());
            let nb = norm_bound(&p);
            let p = if nb.is_zero() {
                p
            } else {
                let u = BigRational::new(rng.gen_range(0..64i64).into(), 64.into());
                opmodel::scale(&p, &GaussianRational::real(&radius * u / nb))
            };
            debug_assert!(norm_bound(&p) < radius);
            opmodel::add(op, &p).expect("same signature")
        })?;
        match family_index(&perturbed) {
            Ok(v) if v == base => {}
            _ => failures += 1,
        }
    }
    Ok(LocalConstancyReport {
        margin,
        base,
        trials,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactcore::ExactMatrix;
    use crate::opmodel::{Block, ToeplitzBlock};

    fn complex(vs: &[&str], es: &[(&str, &str)]) -> ParamComplex {
        ParamComplex::new(
            vs.iter().map(|s| s.to_string()),
            es.iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn sym(k: i64) -> BlockOperator {
        BlockOperator::single_toeplitz(LaurentPoly::z_pow(k))
    }

    #[test]
    fn components_examples() {
        assert_eq!(
            connected_components(&complex(&["a", "b"], &[("a", "b")])).len(),
            1
        );
        assert_eq!(connected_components(&complex(&["a", "b"], &[])).len(), 2);
        let c = complex(&["d", "c", "b", "a"], &[("a", "b"), ("c", "b")]);
        assert_eq!(
            connected_components(&c),
            vec![
                vec!["a".to_string(), "b".into(), "c".into()],
                vec!["d".to_string()]
            ]
        );
    }

    #[test]
    fn complex_invariants() {
        let bad = ParamComplex::new(["a".to_string()], vec![("a".to_string(), "z".to_string())]);
        assert!(matches!(bad, Err(FamilyError::Malformed(_))));
        let bad = ParamComplex::new(["a".to_string()], vec![("a".to_string(), "a".to_string())]);
        assert!(matches!(bad, Err(FamilyError::Malformed(_))));
        let c = complex(&["a", "b"], &[("a", "b"), ("b", "a")]);
        assert_eq!(c.edges().count(), 1);
    }

    #[test]
    fn family_index_examples() {
        let single = OperatorFamily::constant(complex(&["x"], &[]), &sym(1));
        assert_eq!(family_index(&single).unwrap().values(), vec![-1]);

        let two = OperatorFamily::from_fn(complex(&["a", "b", "c"], &[("a", "b")]), |v| {
            if v == "c" {
                sym(2)
            } else {
                sym(-1)
            }
        })
        .unwrap();
        assert_eq!(family_index(&two).unwrap().values(), vec![1, -2]);
    }

    #[test]
    fn mismatch_and_non_fredholm() {
        let f = OperatorFamily::from_fn(complex(&["a", "b"], &[("a", "b")]), |v| {
            if v == "a" {
                sym(1)
            } else {
                sym(0)
            }
        })
        .unwrap();
        assert!(matches!(
            family_index(&f),
            Err(FamilyError::IndexMismatchWithinComponent { .. })
        ));
        let g = OperatorFamily::constant(
            complex(&["a"], &[]),
            &BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(1, 1), (0, -1)])),
        );
        assert!(matches!(
            family_index(&g),
            Err(FamilyError::NonFredholmAt { .. })
        ));
    }

    #[test]
    fn edge_bounds_are_enforced() {
        let c = complex(&["a", "b"], &[("a", "b")]);
        let mut ops = BTreeMap::new();
        ops.insert("a".to_string(), sym(0));
        ops.insert(
            "b".to_string(),
            BlockOperator::single_toeplitz(LaurentPoly::from_pairs([(
                0,
                GaussianRational::from_ratio(5, 4),
            )])),
        );
        let mut bounds = BTreeMap::new();
        bounds.insert(
            ("b".to_string(), "a".to_string()),
            BigRational::new(1.into(), 8.into()),
        );
        let f = OperatorFamily::new(c.clone(), ops.clone(), bounds).unwrap();
        assert!(matches!(
            family_index(&f),
            Err(FamilyError::EdgeBoundViolated { .. })
        ));
        let mut bounds = BTreeMap::new();
        bounds.insert(
            ("a".to_string(), "b".to_string()),
            BigRational::new(1.into(), 4.into()),
        );
        let f = OperatorFamily::new(c, ops, bounds).unwrap();
        assert_eq!(family_index(&f).unwrap().values(), vec![0]);
    }

    #[test]
    fn homotopy_examples() {
        let base = complex(&["x"], &[]);
        let s = OperatorFamily::constant(base.clone(), &sym(1));
        let h = homotopy_from_fn(&base, 4, |_, _| sym(1)).unwrap();
        let r = homotopy_check(&h, &s, &s).unwrap();
        assert_eq!(r.table.len(), 5);

        let patched = BlockOperator::new(vec![Block::Toeplitz(ToeplitzBlock::new(
            LaurentPoly::z_pow(1),
            Some(ExactMatrix::from_int_rows(&[&[3, 1], &[0, 2]])),
        ))])
        .unwrap();
        let t = OperatorFamily::constant(base.clone(), &patched);
        let k = opmodel::sub(&patched, &sym(1)).unwrap();
        let h = homotopy_from_fn(&base, 4, |_, tt| {
            opmodel::add(
                &sym(1),
                &opmodel::scale(&k, &GaussianRational::real(tt.clone())),
            )
            .unwrap()
        })
        .unwrap();
        let r = homotopy_check(&h, &s, &t).unwrap();
        assert!(r.table.iter().all(|row| row["x"] == -1));

        let bad = BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(1, 1), (0, -1)]));
        let h = homotopy_from_fn(&base, 4, |_, tt| {
            if *tt == BigRational::new(1.into(), 2.into()) {
                bad.clone()
            } else {
                sym(1)
            }
        })
        .unwrap();
        assert!(matches!(
            homotopy_check(&h, &s, &s),
            Err(FamilyError::NonFredholmAt { layer: Some(2), .. })
        ));

        let h = homotopy_from_fn(&base, 2, |_, _| sym(1)).unwrap();
        let t2 = OperatorFamily::constant(base, &sym(2));
        assert!(matches!(
            homotopy_check(&h, &s, &t2),
            Err(FamilyError::EndpointMismatch { .. })
        ));
    }

    #[test]
    fn index_jump_along_homotopy() {
        let base = complex(&["x"], &[]);
        let s = OperatorFamily::constant(base.clone(), &sym(1));
        let t = OperatorFamily::constant(base.clone(), &sym(2));
        let h =
            homotopy_from_fn(&base, 2, |_, tt| if tt.is_zero() { sym(1) } else { sym(2) }).unwrap();
        assert!(matches!(
            homotopy_check(&h, &s, &t),
            Err(FamilyError::IndexChangedAlongHomotopy { .. })
        ));
    }

    #[test]
    fn synthesis_examples() {
        let one = complex(&["a", "b"], &[("a", "b")]);
        let u = IndexVector::for_complex(&one, &[0]).unwrap();
        let f = synthesize_family(&one, &u).unwrap();
        assert_eq!(
            f.operator("a").unwrap(),
            &BlockOperator::single_toeplitz(LaurentPoly::one())
        );
        let two = complex(&["a", "b"], &[]);
        let u = IndexVector::for_complex(&two, &[1, -2]).unwrap();
        let f = synthesize_family(&two, &u).unwrap();
        assert_eq!(f.operator("b").unwrap(), &sym(2));
        assert_eq!(family_index(&f).unwrap(), u);
        let u3 = IndexVector::for_complex(&complex(&["q"], &[]), &[3]).unwrap();
        assert!(matches!(
            synthesize_family(&two, &u3),
            Err(FamilyError::ComponentMismatch { .. })
        ));
    }

    #[test]
    fn weyl_family_examples() {
        let c = complex(&["a", "b"], &[]);
        assert!(is_weyl_family(&OperatorFamily::constant(
            c.clone(),
            &sym(0)
        )));
        assert!(!is_weyl_family(&OperatorFamily::constant(
            c.clone(),
            &sym(1)
        )));
        let mixed = OperatorFamily::from_fn(c, |v| {
            if v == "a" {
                sym(0)
            } else {
                crate::opmodel::scale(&sym(0), &GaussianRational::from_int(2))
            }
        })
        .unwrap();
        assert!(is_weyl_family(&mixed));
    }

    #[test]
    fn local_constancy_examples() {
        let c = complex(&["a", "b"], &[("a", "b")]);
        let f = OperatorFamily::constant(
            c.clone(),
            &BlockOperator::single_toeplitz(LaurentPoly::from_int_pairs(&[(1, 1), (0, -2)])),
        );
        let r = local_constancy_check(&f, 20, &mut random::rng(1)).unwrap();
        assert!(r.margin.clone().unwrap() >= BigRational::new(1.into(), 2.into()));
        assert_eq!((r.trials, r.failures), (20, 0));
        assert_eq!(r.base.values(), vec![0]);
        let r = local_constancy_check(
            &OperatorFamily::constant(c, &sym(1)),
            50,
            &mut random::rng(2),
        )
        .unwrap();
        assert_eq!(r.failures, 0);
        assert_eq!(r.base.values(), vec![-1]);
    }
}
