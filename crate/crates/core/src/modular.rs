//! Finite modular graphs: curve, pants and flip graphs modulo the mapping
//! class group, built by breadth-first search over isomorphism classes.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::enumeration::{connected_cubic_classes, one_vertex_triangulation_classes};
use crate::error::{capability, domain, Error, Result};
use crate::graph::{simple_girth, Multigraph};
use crate::halfedge::CubicMultigraph;
use crate::moves::{flip_neighbors, pants_move_neighbors};
use crate::ribbon::{check_one_puncture_size, sample_one_puncture, CombinatorialMap, DEFAULT_MAX_ATTEMPTS};

/// Largest vertex count of the cubic graphs behind a pants graph.
pub const MAX_PANTS_N: usize = 12;
/// Largest triangle count behind a flip graph.
pub const MAX_FLIP_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModularKind {
    Curve,
    Pants,
    Flip,
}

impl FromStr for ModularKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curve" => Ok(ModularKind::Curve),
            "pants" => Ok(ModularKind::Pants),
            "flip" => Ok(ModularKind::Flip),
            _ => Err(domain(format!("unknown modular graph kind '{s}' (expected curve, pants or flip)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularVertex {
    pub code: Vec<u8>,
    /// Representative in the multigraph or map text format, or a name for
    /// curve classes.
    pub representative: String,
}

/// Vertices are sorted by code. `directed[(a, b)]` counts the moves at `a`
/// whose result lies in class `b`; loops are the moves returning to the
/// same class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularGraph {
    pub kind: ModularKind,
    pub genus: usize,
    pub vertices: Vec<ModularVertex>,
    directed: BTreeMap<(usize, usize), u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphSummary {
    pub p: usize,
    pub q_simple: usize,
    pub q_multi: u64,
    pub loop_total: u64,
    pub girth_simple: Option<usize>,
    pub min_degree: u64,
    pub max_degree: u64,
    pub mean_degree: f64,
    pub min_simple_degree: usize,
    pub max_simple_degree: usize,
}

impl ModularGraph {
    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, code: &[u8]) -> Option<usize> {
        self.vertices.binary_search_by(|v| v.code.as_slice().cmp(code)).ok()
    }

    pub fn directed_count(&self, a: usize, b: usize) -> u32 {
        self.directed.get(&(a, b)).copied().unwrap_or(0)
    }

    /// Unordered edge multiplicities `(a, b) -> m` with `a < b`; `m` is the
    /// larger of the two directed counts.
    pub fn edge_multiplicities(&self) -> BTreeMap<(usize, usize), u32> {
        let mut out = BTreeMap::new();
        for (&(a, b), &c) in &self.directed {
            if a != b {
                let e = out.entry((a.min(b), a.max(b))).or_insert(0);
                *e = (*e).max(c);
            }
        }
        out
    }

    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        self.edge_multiplicities().into_keys().collect()
    }

    pub fn loop_count(&self, v: usize) -> u32 {
        self.directed_count(v, v)
    }

    /// Number of moves available at `v`, loops included.
    pub fn multi_degree(&self, v: usize) -> u64 {
        self.directed.range((v, 0)..(v + 1, 0)).map(|(_, &c)| c as u64).sum()
    }

    pub fn simple_degree(&self, v: usize) -> usize {
        self.directed.range((v, 0)..(v + 1, 0)).filter(|(&(_, b), _)| b != v).count()
    }

    /// Whether every move `a -> b` has some move `b -> a`.
    pub fn is_symmetric(&self) -> bool {
        self.directed.keys().all(|&(a, b)| self.directed.contains_key(&(b, a)))
    }

    /// Underlying simple graph (no loops, no repeated edges).
    pub fn simple_graph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n_vertices());
        for (a, b) in self.simple_edges() {
            g.add_edge(a, b, 1).unwrap();
        }
        g
    }

    /// Multigraph with edge multiplicities and loop counts.
    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n_vertices());
        for ((a, b), m) in self.edge_multiplicities() {
            g.add_edge(a, b, m).unwrap();
        }
        for v in 0..self.n_vertices() {
            g.add_edge(v, v, self.loop_count(v)).unwrap();
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.simple_graph().is_connected()
    }

    pub fn summary(&self) -> GraphSummary {
        graph_summary(self)
    }

    /// DOT text. Vertices are labeled by a short hash of their code; loop
    /// counts and edge multiplicities are attributes.
    pub fn to_dot(&self) -> String {
        let name = match self.kind {
            ModularKind::Curve => "MC",
            ModularKind::Pants => "MP",
            ModularKind::Flip => "MF",
        };
        let mut out = String::new();
        writeln!(out, "graph {name}_g{} {{", self.genus).unwrap();
        for (i, v) in self.vertices.iter().enumerate() {
            let hash = Sha256::digest(&v.code);
            writeln!(
                out,
                "  v{i} [label=\"{}\", loops={}, degree={}];",
                hex::encode(&hash[..4]),
                self.loop_count(i),
                self.multi_degree(i)
            )
            .unwrap();
        }
        for ((a, b), m) in self.edge_multiplicities() {
            writeln!(out, "  v{a} -- v{b} [multiplicity={m}];").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

pub fn graph_summary(g: &ModularGraph) -> GraphSummary {
    let p = g.n_vertices();
    let mults = g.edge_multiplicities();
    let simple = g.simple_graph();
    let degrees: Vec<u64> = (0..p).map(|v| g.multi_degree(v)).collect();
    let simple_degrees: Vec<usize> = (0..p).map(|v| g.simple_degree(v)).collect();
    GraphSummary {
        p,
        q_simple: mults.len(),
        q_multi: mults.values().map(|&m| m as u64).sum(),
        loop_total: (0..p).map(|v| g.loop_count(v) as u64).sum(),
        girth_simple: simple_girth(&simple.simple_adjacency()),
        min_degree: degrees.iter().copied().min().unwrap_or(0),
        max_degree: degrees.iter().copied().max().unwrap_or(0),
        mean_degree: if p == 0 { 0.0 } else { degrees.iter().sum::<u64>() as f64 / p as f64 },
        min_simple_degree: simple_degrees.iter().copied().min().unwrap_or(0),
        max_simple_degree: simple_degrees.iter().copied().max().unwrap_or(0),
    }
}

/// Curve classes: the nonseparating class and the separating classes
/// cutting off genus `i` for `1 <= i <= g/2`. Any two classes are joined
/// by disjoint representatives; every class except the half-half
/// separating one (even `g`) has disjoint curves of the same type.
pub fn build_modular_curve_graph(g: usize) -> Result<ModularGraph> {
    if g < 2 {
        return Err(domain(format!("the curve graph needs genus at least 2, got {g}")));
    }
    let half = g / 2;
    let vertices: Vec<ModularVertex> = std::iter::once(ModularVertex { code: vec![0, 0], representative: "nonseparating".into() })
        .chain((1..=half).map(|i| ModularVertex { code: vec![1, i as u8], representative: format!("separating-{i}") }))
        .collect();
    let p = vertices.len();
    let mut directed = BTreeMap::new();
    for a in 0..p {
        for b in 0..p {
            if a != b {
                directed.insert((a, b), 1);
            }
        }
        let half_half = g.is_multiple_of(2) && a == half;
        if !half_half {
            directed.insert((a, a), 1);
        }
    }
    Ok(ModularGraph { kind: ModularKind::Curve, genus: g, vertices, directed })
}

/// Classes found, as (code, representative) pairs, in discovery order.
type Found<T> = Vec<(Vec<u8>, T)>;

/// Breadth-first closure over classes. `expand` returns the codes of all
/// move results for one representative, in move order.
fn bfs<T, F>(start: T, code_of: impl Fn(&T) -> Vec<u8> + Sync, expand: F) -> Result<(Found<T>, Vec<Found<T>>)>
where
    T: Clone + Send + Sync,
    F: Fn(&T) -> Result<Vec<(Vec<u8>, T)>> + Sync,
{
    let mut index: HashMap<Vec<u8>, usize> = HashMap::new();
    let mut found: Vec<(Vec<u8>, T)> = Vec::new();
    let mut outcomes: Vec<Vec<(Vec<u8>, T)>> = Vec::new();
    let c = code_of(&start);
    index.insert(c.clone(), 0);
    found.push((c, start));
    let mut done = 0;
    while done < found.len() {
        let frontier: Vec<Vec<(Vec<u8>, T)>> =
            found[done..].par_iter().map(|(_, rep)| expand(rep)).collect::<Result<_>>()?;
        done = found.len();
        for outs in frontier {
            for (code, rep) in &outs {
                if !index.contains_key(code) {
                    index.insert(code.clone(), found.len());
                    found.push((code.clone(), rep.clone()));
                }
            }
            outcomes.push(outs);
        }
    }
    Ok((found, outcomes))
}

/// Re-index the BFS output by sorted code and tally directed counts.
fn assemble<T>(
    kind: ModularKind,
    genus: usize,
    found: Vec<(Vec<u8>, T)>,
    outcomes: Vec<Vec<(Vec<u8>, T)>>,
    text: impl Fn(&T) -> String,
) -> ModularGraph {
    let mut order: Vec<usize> = (0..found.len()).collect();
    order.sort_by(|&a, &b| found[a].0.cmp(&found[b].0));
    let mut new_index = vec![0usize; found.len()];
    for (i, &old) in order.iter().enumerate() {
        new_index[old] = i;
    }
    let lookup: HashMap<&[u8], usize> = found.iter().enumerate().map(|(i, (c, _))| (c.as_slice(), new_index[i])).collect();
    let mut directed = BTreeMap::new();
    for (old, outs) in outcomes.iter().enumerate() {
        let a = new_index[old];
        for (code, _) in outs {
            *directed.entry((a, lookup[code.as_slice()])).or_insert(0) += 1;
        }
    }
    let vertices = order
        .iter()
        .map(|&old| ModularVertex { code: found[old].0.clone(), representative: text(&found[old].1) })
        .collect();
    ModularGraph { kind, genus, vertices, directed }
}

/// Cycle with antipodal chords: a connected cubic graph on `n` vertices
/// (the triple edge for `n = 2`).
fn ladder(n: usize) -> CubicMultigraph {
    let mut g = Multigraph::cycle(n);
    for i in 0..n / 2 {
        g.add_edge(i, i + n / 2, 1).unwrap();
    }
    CubicMultigraph::from_multigraph(&g).expect("antipodal ladder is cubic")
}

pub fn build_modular_pants_graph(g: usize) -> Result<ModularGraph> {
    if g < 2 {
        return Err(domain(format!("the pants graph needs genus at least 2, got {g}")));
    }
    let n = 2 * g - 2;
    if n > MAX_PANTS_N {
        return Err(capability(format!("pants graph of genus {g} needs N = {n} > {MAX_PANTS_N} vertices")));
    }
    let (found, outcomes) = bfs(
        ladder(n),
        |x: &CubicMultigraph| x.canonical_code().to_vec(),
        |x| Ok(pants_move_neighbors(x)?.into_iter().map(|o| (o.result.canonical_code().to_vec(), o.result)).collect()),
    )?;
    let expected = connected_cubic_classes(n)?.len();
    if found.len() != expected {
        return Err(Error::Internal(format!("pants search reached {} of {expected} classes", found.len())));
    }
    Ok(assemble(ModularKind::Pants, g, found, outcomes, |x| x.to_string()))
}

pub fn build_modular_flip_graph(g: usize) -> Result<ModularGraph> {
    if g < 1 {
        return Err(domain("the flip graph needs genus at least 1"));
    }
    let n = 4 * g - 2;
    check_one_puncture_size(n)?;
    if n > MAX_FLIP_N {
        return Err(capability(format!("flip graph of genus {g} needs N = {n} > {MAX_FLIP_N} triangles")));
    }
    let start = sample_one_puncture(n, 0, DEFAULT_MAX_ATTEMPTS)?;
    let (found, outcomes) = bfs(
        start,
        CombinatorialMap::canonical_code,
        |m| Ok(flip_neighbors(m)?.into_iter().map(|o| (o.result.canonical_code(), o.result.normalized())).collect()),
    )?;
    let expected = one_vertex_triangulation_classes(g)?.len();
    if found.len() != expected {
        return Err(Error::Internal(format!("flip search reached {} of {expected} classes", found.len())));
    }
    Ok(assemble(ModularKind::Flip, g, found, outcomes, |m| m.to_string()))
}

pub fn build_modular_graph(kind: ModularKind, g: usize) -> Result<ModularGraph> {
    match kind {
        ModularKind::Curve => build_modular_curve_graph(g),
        ModularKind::Pants => build_modular_pants_graph(g),
        ModularKind::Flip => build_modular_flip_graph(g),
    }
}
