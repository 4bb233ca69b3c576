//! Isomorphism-free enumeration of cubic multigraphs and one-puncture
//! triangulations, with a brute-force matching oracle.
//!
//! Connected cubic multigraphs are grown one vertex at a time through
//! connected partial graphs of maximum degree three. A child is kept only
//! when its new vertex lies in the automorphism orbit of a canonically chosen
//! deletable vertex, so every isomorphism class has exactly one parent class.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon;
use crate::error::{capability, domain, Error, Result};
use crate::graph::Multigraph;
use crate::halfedge::{for_each_matching, CubicMultigraph, Pairing};
use crate::ribbon::{check_one_puncture_size, CombinatorialMap};

/// Largest vertex count accepted by the orderly generator.
pub const MAX_ORDERLY_N: usize = 14;
/// Largest vertex count accepted by the matching oracle.
pub const MAX_BRUTE_N: usize = 6;
/// Largest triangle count accepted for one-puncture triangulations.
pub const MAX_TRIANGULATION_N: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Filter {
    All,
    Connected,
    Simple,
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "all" => Ok(Filter::All),
            "connected" => Ok(Filter::Connected),
            "simple" => Ok(Filter::Simple),
            _ => Err(domain(format!("unknown filter '{s}' (expected all, connected or simple)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Orderly,
    Brute,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassCounts {
    pub total: u64,
    pub connected: u64,
    pub simple: u64,
    pub simple_connected: u64,
}

/// Classes found at one size. `counts` always describe the unfiltered
/// family; `class_codes` and `representatives` hold the filtered list,
/// sorted by code, with representatives in the multigraph or map text format.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub n_vertices: usize,
    pub oriented: bool,
    pub filter: Filter,
    pub method: Method,
    pub counts: ClassCounts,
    #[serde(with = "hex_codes")]
    pub class_codes: Vec<Vec<u8>>,
    pub representatives: Vec<String>,
}

mod hex_codes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(codes: &[Vec<u8>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(codes.iter().map(hex::encode))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<u8>>, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        strings.iter().map(|s| hex::decode(s).map_err(serde::de::Error::custom)).collect()
    }
}

fn is_simple_graph(g: &CubicMultigraph) -> bool {
    g.is_simple()
}

fn map_is_simple(m: &CombinatorialMap) -> bool {
    m.to_pairing().is_some_and(|p| CubicMultigraph::from_pairing(&p).is_simple())
}

impl EnumerationResult {
    fn from_graphs(n: usize, method: Method, filter: Filter, classes: Vec<CubicMultigraph>) -> Self {
        let mut counts = ClassCounts::default();
        let mut kept: Vec<(Vec<u8>, String)> = Vec::new();
        for g in &classes {
            let connected = g.is_connected();
            let simple = is_simple_graph(g);
            counts.total += 1;
            counts.connected += connected as u64;
            counts.simple += simple as u64;
            counts.simple_connected += (simple && connected) as u64;
            let keep = match filter {
                Filter::All => true,
                Filter::Connected => connected,
                Filter::Simple => simple,
            };
            if keep {
                kept.push((g.canonical_code().to_vec(), g.to_string()));
            }
        }
        kept.sort();
        let (class_codes, representatives) = kept.into_iter().unzip();
        EnumerationResult { n_vertices: n, oriented: false, filter, method, counts, class_codes, representatives }
    }

    fn from_maps(n: usize, method: Method, filter: Filter, classes: Vec<CombinatorialMap>) -> Self {
        let mut counts = ClassCounts::default();
        let mut kept: Vec<(Vec<u8>, String)> = Vec::new();
        for m in &classes {
            let connected = m.components().len() == 1;
            let simple = map_is_simple(m);
            counts.total += 1;
            counts.connected += connected as u64;
            counts.simple += simple as u64;
            counts.simple_connected += (simple && connected) as u64;
            let keep = match filter {
                Filter::All => true,
                Filter::Connected => connected,
                Filter::Simple => simple,
            };
            if keep {
                kept.push((m.canonical_code(), m.to_string()));
            }
        }
        kept.sort();
        let (class_codes, representatives) = kept.into_iter().unzip();
        EnumerationResult { n_vertices: n, oriented: true, filter, method, counts, class_codes, representatives }
    }

    /// Restrict the class list of an unoriented result; counts are kept.
    pub fn with_filter(self, filter: Filter) -> Result<Self> {
        if self.oriented {
            return Err(domain("filters apply to unoriented results"));
        }
        let keep: Vec<bool> = self
            .graphs()?
            .iter()
            .map(|g| match filter {
                Filter::All => true,
                Filter::Connected => g.is_connected(),
                Filter::Simple => g.is_simple(),
            })
            .collect();
        let (class_codes, representatives) = self
            .class_codes
            .into_iter()
            .zip(self.representatives)
            .zip(&keep)
            .filter(|(_, &k)| k)
            .map(|(x, _)| x)
            .unzip();
        Ok(EnumerationResult { filter, class_codes, representatives, ..self })
    }

    /// Representatives parsed back as cubic multigraphs (unoriented results).
    pub fn graphs(&self) -> Result<Vec<CubicMultigraph>> {
        self.representatives.iter().map(|s| s.parse()).collect()
    }

    /// Representatives parsed back as maps (oriented results).
    pub fn maps(&self) -> Result<Vec<CombinatorialMap>> {
        self.representatives.iter().map(|s| s.parse()).collect()
    }
}

fn check_size(n: usize, cap: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(domain(format!("N must be even and at least 2, got {n}")));
    }
    if n > cap {
        return Err(capability(format!("N = {n} exceeds the enumeration cap of {cap}")));
    }
    Ok(())
}

/// Connected partial graph with maximum degree three. `stubs[v]` is the
/// remaining free degree at `v`.
#[derive(Debug, Clone)]
struct Partial {
    adj: Vec<Vec<(u32, u8)>>,
    loops: Vec<u8>,
    stubs: Vec<u8>,
}

impl Partial {
    fn root(with_loop: bool) -> Self {
        let l = with_loop as u8;
        Partial { adj: vec![Vec::new()], loops: vec![l], stubs: vec![3 - 2 * l] }
    }

    fn len(&self) -> usize {
        self.adj.len()
    }

    fn total_stubs(&self) -> usize {
        self.stubs.iter().map(|&s| s as usize).sum()
    }

    fn with_vertex(&self, with_loop: bool, attach: &[(u32, u8)]) -> Partial {
        let mut c = self.clone();
        let w = self.len() as u32;
        let l = with_loop as u8;
        let j: u8 = attach.iter().map(|a| a.1).sum();
        c.adj.push(attach.to_vec());
        c.loops.push(l);
        c.stubs.push(3 - 2 * l - j);
        for &(v, m) in attach {
            let row = &mut c.adj[v as usize];
            row.push((w, m));
            row.sort_unstable();
            c.stubs[v as usize] -= m;
        }
        c
    }

    fn colors(&self) -> Vec<u64> {
        (0..self.len()).map(|v| (self.loops[v] as u64) << 2 | self.stubs[v] as u64).collect()
    }

    /// Whether removing `v` leaves the rest connected.
    fn is_deletable(&self, v: usize) -> bool {
        let n = self.len();
        if n <= 2 {
            return true;
        }
        let start = if v == 0 { 1 } else { 0 };
        let mut seen = vec![false; n];
        seen[v] = true;
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &(w, _) in &self.adj[u] {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    count += 1;
                    stack.push(w as usize);
                }
            }
        }
        count == n - 1
    }

    fn to_cubic(&self) -> CubicMultigraph {
        let mut g = Multigraph::new(self.len());
        for v in 0..self.len() {
            if self.loops[v] == 1 {
                g.add_loop(v).unwrap();
            }
            for &(w, m) in &self.adj[v] {
                if w as usize > v {
                    g.add_edge(v, w as usize, m as u32).unwrap();
                }
            }
        }
        CubicMultigraph::from_multigraph(&g).expect("completed partial graph is cubic")
    }
}

/// Necessary condition for growing a `k`-vertex partial graph to `n`
/// vertices: later vertices must absorb every stub, and their internal
/// degree sum must be even.
fn completable(k: usize, stubs: usize, n: usize) -> bool {
    let r = n - k;
    if r == 0 {
        return stubs == 0;
    }
    stubs >= 1 && stubs <= 3 * r && (3 * r - stubs).is_multiple_of(2)
}

/// Canonical augmentation test. Returns the child's canonical code when the
/// new (last) vertex is an acceptable deletion.
fn accept(c: &Partial) -> Option<Vec<u32>> {
    let w = c.len() - 1;
    let key = |v: usize| (c.stubs[v], c.loops[v]);
    let deletable: Vec<usize> = (0..c.len()).filter(|&v| c.is_deletable(v)).collect();
    let top = deletable.iter().map(|&v| key(v)).max()?;
    if key(w) < top {
        return None;
    }
    let candidates: Vec<usize> = deletable.into_iter().filter(|&v| key(v) == top).collect();
    let colors = c.colors();
    let lab = canon::canonical_labeling(&c.adj, &colors, candidates.len() > 1);
    if candidates.len() > 1 {
        let pos = lab.positions();
        let m = *candidates.iter().max_by_key(|&&v| pos[v]).unwrap();
        let p = pos[m] as usize;
        if !lab.min_leaves.iter().any(|leaf| leaf[p] as usize == w) {
            return None;
        }
    }
    Some(canon::encode(&c.adj, &colors, &lab.order))
}

/// Attachment multisets of total size `j` over open vertices.
fn attachments(open: &[(u32, u8)], j: u8) -> Vec<Vec<(u32, u8)>> {
    fn rec(open: &[(u32, u8)], j: u8, cur: &mut Vec<(u32, u8)>, out: &mut Vec<Vec<(u32, u8)>>) {
        if j == 0 {
            out.push(cur.clone());
            return;
        }
        let Some((&(v, s), rest)) = open.split_first() else {
            return;
        };
        rec(rest, j, cur, out);
        for m in 1..=s.min(j) {
            cur.push((v, m));
            rec(rest, j - m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(open, j, &mut Vec::new(), &mut out);
    out
}

fn children(p: &Partial, n: usize) -> Vec<Partial> {
    let open: Vec<(u32, u8)> = (0..p.len()).filter(|&v| p.stubs[v] > 0).map(|v| (v as u32, p.stubs[v])).collect();
    let s = p.total_stubs();
    let mut seen: BTreeMap<Vec<u32>, Partial> = BTreeMap::new();
    for with_loop in [false, true] {
        let max_j = if with_loop { 1 } else { 3 };
        for j in 1..=max_j {
            let new_stubs = 3 - 2 * with_loop as usize - j as usize;
            if j as usize > s || !completable(p.len() + 1, s - j as usize + new_stubs, n) {
                continue;
            }
            for att in attachments(&open, j) {
                let c = p.with_vertex(with_loop, &att);
                if let Some(code) = accept(&c) {
                    seen.entry(code).or_insert(c);
                }
            }
        }
    }
    seen.into_values().collect()
}

/// Representatives of every connected cubic multigraph class on `n`
/// vertices, sorted by canonical code.
pub fn connected_cubic_classes(n: usize) -> Result<Vec<CubicMultigraph>> {
    check_size(n, MAX_ORDERLY_N)?;
    let mut level: Vec<Partial> = [false, true]
        .into_iter()
        .map(Partial::root)
        .filter(|p| completable(1, p.total_stubs(), n))
        .collect();
    for _ in 1..n {
        level = level.par_iter().flat_map_iter(|p| children(p, n)).collect();
    }
    let mut out: Vec<CubicMultigraph> = level.par_iter().map(Partial::to_cubic).collect();
    out.sort_by(|a, b| a.canonical_code().cmp(b.canonical_code()));
    debug_assert!(out.windows(2).all(|w| w[0].canonical_code() != w[1].canonical_code()));
    Ok(out)
}

/// Representatives of every cubic multigraph class on `n` vertices,
/// including disconnected ones (multisets of connected classes).
pub fn cubic_classes(n: usize) -> Result<Vec<CubicMultigraph>> {
    check_size(n, MAX_ORDERLY_N)?;
    let by_size: Vec<Vec<CubicMultigraph>> =
        (0..=n / 2).map(|h| if h == 0 { Ok(Vec::new()) } else { connected_cubic_classes(2 * h) }).collect::<Result<_>>()?;
    // components listed in non-increasing (size, index) order
    fn rec(
        by_size: &[Vec<CubicMultigraph>],
        left: usize,
        max: (usize, usize),
        acc: Option<CubicMultigraph>,
        out: &mut Vec<CubicMultigraph>,
    ) {
        if left == 0 {
            out.extend(acc);
            return;
        }
        for h in (1..=max.0.min(left / 2)).rev() {
            let top = if h == max.0 { max.1 + 1 } else { by_size[h].len() };
            for i in 0..top.min(by_size[h].len()) {
                let g = &by_size[h][i];
                let next = match &acc {
                    None => g.clone(),
                    Some(a) => a.disjoint_union(g),
                };
                rec(by_size, left - 2 * h, (h, i), Some(next), out);
            }
        }
    }
    let mut out = Vec::new();
    rec(&by_size, n, (n / 2, usize::MAX - 1), None, &mut out);
    out.sort_by(|a, b| a.canonical_code().cmp(b.canonical_code()));
    Ok(out)
}

/// Orderly enumeration of cubic multigraph classes on `n` vertices.
pub fn enumerate_cubic_multigraphs(n: usize, filter: Filter) -> Result<EnumerationResult> {
    let classes = cubic_classes(n)?;
    Ok(EnumerationResult::from_graphs(n, Method::Orderly, filter, classes))
}

/// Compact labeled key: multiplicities over vertex pairs plus loop flags.
fn labeled_key(mate: &[u32], n: usize) -> u128 {
    let mut key = 0u128;
    for (h, &k) in mate.iter().enumerate() {
        let k = k as usize;
        if h < k {
            let (u, v) = (h / 3, k / 3);
            let idx = if u == v { n * n + u } else { u * n + v };
            key += 1u128 << (2 * idx);
        }
    }
    key
}

/// Ground truth by iterating all `(3N - 1)!!` pairings and keeping one
/// representative per canonical code. Oriented classes treat each pairing
/// as a map with the standard triangle orientation.
pub fn brute_force_classes(n: usize, oriented: bool) -> Result<EnumerationResult> {
    brute_force_filtered(n, oriented, false)
}

/// As [`brute_force_classes`], optionally keeping only one-puncture maps.
pub fn brute_force_filtered(n: usize, oriented: bool, one_puncture: bool) -> Result<EnumerationResult> {
    check_size(n, MAX_BRUTE_N)?;
    if !oriented {
        if one_puncture {
            return Err(domain("the one-puncture filter applies to oriented classes only"));
        }
        let mut labeled = HashSet::new();
        let mut reps = Vec::new();
        // labeled keys fit in 2 bits per pair for n <= 6
        for_each_matching(3 * n, |mate| {
            if labeled.insert(labeled_key(mate, n)) {
                reps.push(mate.to_vec());
            }
        });
        let mut classes: BTreeMap<Vec<u8>, CubicMultigraph> = BTreeMap::new();
        for mate in reps {
            let g = CubicMultigraph::from_mate_unchecked(mate);
            classes.entry(g.canonical_code().to_vec()).or_insert(g);
        }
        return Ok(EnumerationResult::from_graphs(n, Method::Brute, Filter::All, classes.into_values().collect()));
    }
    let mut classes: BTreeMap<Vec<u8>, CombinatorialMap> = BTreeMap::new();
    for_each_matching(3 * n, |mate| {
        let p = Pairing::from_mate(mate.to_vec()).expect("matching is a pairing");
        let m = CombinatorialMap::from_pairing(&p);
        if one_puncture && m.n_punctures() != 1 {
            return;
        }
        classes.entry(m.canonical_code()).or_insert(m);
    });
    Ok(EnumerationResult::from_maps(n, Method::Brute, Filter::All, classes.into_values().collect()))
}

/// Oriented one-puncture triangulation classes on `4g - 2` triangles: every
/// orientation of every connected cubic multigraph class, kept when the glued
/// surface has one puncture, deduplicated by map code.
pub fn one_vertex_triangulation_classes(g: usize) -> Result<Vec<CombinatorialMap>> {
    if g == 0 {
        return Err(domain("genus must be at least 1"));
    }
    let n = 4 * g - 2;
    check_one_puncture_size(n)?;
    if n > MAX_TRIANGULATION_N {
        return Err(capability(format!("N = {n} exceeds the triangulation cap of {MAX_TRIANGULATION_N}")));
    }
    let graphs = connected_cubic_classes(n)?;
    let per_graph: Vec<Vec<(Vec<u8>, CombinatorialMap)>> = graphs
        .par_iter()
        .map(|gr| {
            let p = gr.to_pairing();
            let mut found: BTreeSet<Vec<u8>> = BTreeSet::new();
            let mut maps = Vec::new();
            for mask in 0u32..1 << n {
                let m = CombinatorialMap::from_pairing_oriented(&p, |v| mask >> v & 1 == 1);
                if m.n_punctures() != 1 {
                    continue;
                }
                let code = m.canonical_code();
                if found.insert(code.clone()) {
                    maps.push((code, m.normalized()));
                }
            }
            maps
        })
        .collect();
    let mut all: BTreeMap<Vec<u8>, CombinatorialMap> = BTreeMap::new();
    for (code, m) in per_graph.into_iter().flatten() {
        all.entry(code).or_insert(m);
    }
    Ok(all.into_values().collect())
}

pub fn enumerate_one_vertex_triangulations(g: usize) -> Result<EnumerationResult> {
    let maps = one_vertex_triangulation_classes(g)?;
    Ok(EnumerationResult::from_maps(4 * g - 2, Method::Orderly, Filter::All, maps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn connected_counts() {
        let counts: Vec<usize> = [2, 4, 6, 8].iter().map(|&n| connected_cubic_classes(n).unwrap().len()).collect();
        assert_eq!(counts, vec![2, 5, 17, 71]);
    }

    #[test]
    fn small_results() {
        let r = enumerate_cubic_multigraphs(2, Filter::All).unwrap();
        assert_eq!(r.counts, ClassCounts { total: 2, connected: 2, simple: 0, simple_connected: 0 });
        let r = enumerate_cubic_multigraphs(4, Filter::All).unwrap();
        assert_eq!((r.counts.total, r.counts.connected, r.counts.simple), (8, 5, 1));
        let r = enumerate_cubic_multigraphs(6, Filter::Simple).unwrap();
        assert_eq!(r.class_codes.len(), 2);
        let mut want = vec![CubicMultigraph::k33().canonical_code().to_vec(), CubicMultigraph::prism().canonical_code().to_vec()];
        want.sort();
        assert_eq!(r.class_codes, want);
    }

    #[test]
    fn brute_matches_orderly_small() {
        for n in [2, 4] {
            let b = brute_force_classes(n, false).unwrap();
            let o = enumerate_cubic_multigraphs(n, Filter::All).unwrap();
            assert_eq!(b.class_codes, o.class_codes);
            assert_eq!(b.counts, o.counts);
        }
    }

    #[test]
    fn size_errors() {
        assert!(matches!(enumerate_cubic_multigraphs(3, Filter::All), Err(Error::Domain(_))));
        assert!(matches!(enumerate_cubic_multigraphs(16, Filter::All), Err(Error::Capability(_))));
        assert!(matches!(brute_force_classes(8, false), Err(Error::Capability(_))));
        assert!(matches!(enumerate_one_vertex_triangulations(4), Err(Error::Capability(_))));
    }

    #[test]
    fn torus_triangulation_is_unique() {
        let r = enumerate_one_vertex_triangulations(1).unwrap();
        assert_eq!(r.class_codes.len(), 1);
        let b = brute_force_filtered(2, true, true).unwrap();
        assert_eq!(b.class_codes, r.class_codes);
    }

    #[test]
    fn json_round_trip() {
        let r = enumerate_cubic_multigraphs(4, Filter::Connected).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        let back: EnumerationResult = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.graphs().unwrap().len(), 5);
    }
}
