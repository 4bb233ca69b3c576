use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

use super::pairing::Pairing;
use crate::canon;
use crate::error::{structural, Error, Result};
use crate::graph::Multigraph;

/// A cubic multigraph (loops and parallel edges allowed) together with one
/// half-edge realization: vertex `v` owns half-edges `3v, 3v+1, 3v+2` and
/// `mate` glues them into edges.
///
/// Equality compares the labeled multigraph, not the realization.
#[derive(Clone)]
pub struct CubicMultigraph {
    mate: Vec<u32>,
    adj: Vec<Vec<(u32, u8)>>,
    loops: Vec<u8>,
    code: OnceLock<Vec<u8>>,
}

impl fmt::Debug for CubicMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CubicMultigraph").field("adj", &self.adj).field("loops", &self.loops).finish()
    }
}

impl PartialEq for CubicMultigraph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.loops == other.loops
    }
}

impl Eq for CubicMultigraph {}

impl CubicMultigraph {
    /// Glue half-edges according to the pairing.
    pub fn from_pairing(p: &Pairing) -> Self {
        Self::from_mate_unchecked(p.mates().to_vec())
    }

    /// Build from a fixed-point-free involution on `3N` half-edges.
    pub fn from_mate(mate: Vec<u32>) -> Result<Self> {
        let h = mate.len();
        if h == 0 || !h.is_multiple_of(3) {
            return Err(structural(format!("half-edge count {h} is not a positive multiple of 3")));
        }
        for (a, &b) in mate.iter().enumerate() {
            if b as usize >= h || b as usize == a || mate[b as usize] as usize != a {
                return Err(structural(format!("not a fixed-point-free involution at half-edge {a}")));
            }
        }
        Ok(Self::from_mate_unchecked(mate))
    }

    pub(crate) fn from_mate_unchecked(mate: Vec<u32>) -> Self {
        let n = mate.len() / 3;
        let mut adj: Vec<Vec<(u32, u8)>> = vec![Vec::with_capacity(3); n];
        let mut loops = vec![0u8; n];
        for (a, &b) in mate.iter().enumerate() {
            let (u, v) = (a / 3, b as usize / 3);
            if u == v {
                if a < b as usize {
                    loops[u] += 1;
                }
                continue;
            }
            match adj[u].iter_mut().find(|e| e.0 as usize == v) {
                Some(e) => e.1 += 1,
                None => adj[u].push((v as u32, 1)),
            }
        }
        for row in &mut adj {
            row.sort_unstable();
        }
        CubicMultigraph { mate, adj, loops, code: OnceLock::new() }
    }

    /// Build from multiplicities. Every vertex must satisfy the cubic degree
    /// identity and carry at most one loop.
    pub fn from_multigraph(g: &Multigraph) -> Result<Self> {
        let n = g.n_vertices();
        if n == 0 {
            return Err(structural("a cubic multigraph needs at least one vertex"));
        }
        for v in 0..n {
            if g.loops(v) > 1 {
                return Err(structural(format!("vertex {v} carries {} loops; at most one is possible", g.loops(v))));
            }
            if g.degree(v) != 3 {
                return Err(structural(format!("vertex {v} has degree {}, expected 3", g.degree(v))));
            }
        }
        let mut next = vec![0usize; n];
        let mut mate = vec![0u32; 3 * n];
        let take = |v: usize, next: &mut Vec<usize>| {
            let h = 3 * v + next[v];
            next[v] += 1;
            h
        };
        for v in 0..n {
            if g.loops(v) == 1 {
                let a = take(v, &mut next);
                let b = take(v, &mut next);
                mate[a] = b as u32;
                mate[b] = a as u32;
            }
        }
        for (u, v, m) in g.edges() {
            for _ in 0..m {
                let a = take(u, &mut next);
                let b = take(v, &mut next);
                mate[a] = b as u32;
                mate[b] = a as u32;
            }
        }
        Ok(Self::from_mate_unchecked(mate))
    }

    pub fn to_multigraph(&self) -> Multigraph {
        let mut g = Multigraph::new(self.n_vertices());
        for v in 0..self.n_vertices() {
            if self.loops[v] == 1 {
                g.add_loop(v).unwrap();
            }
            for &(w, m) in &self.adj[v] {
                if (w as usize) > v {
                    g.add_edge(v, w as usize, m as u32).unwrap();
                }
            }
        }
        g
    }

    /// The half-edge realization as a pairing.
    pub fn to_pairing(&self) -> Pairing {
        Pairing::from_mate(self.mate.clone()).expect("realization of an even-order cubic graph")
    }

    pub fn n_vertices(&self) -> usize {
        self.loops.len()
    }

    pub fn mates(&self) -> &[u32] {
        &self.mate
    }

    pub fn mate(&self, h: usize) -> usize {
        self.mate[h] as usize
    }

    /// Distinct neighbors of `v` with multiplicities, sorted by neighbor.
    pub fn neighbors(&self, v: usize) -> &[(u32, u8)] {
        &self.adj[v]
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        if u == v {
            return self.loops[u] as u32;
        }
        self.adj[u].iter().find(|e| e.0 as usize == v).map_or(0, |e| e.1 as u32)
    }

    pub fn loops(&self, v: usize) -> u32 {
        self.loops[v] as u32
    }

    pub fn loop_count(&self) -> usize {
        self.loops.iter().map(|&l| l as usize).sum()
    }

    /// Edges as half-edge pairs `(a, b)` with `a < b`.
    pub fn half_edge_pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a < b as usize)
            .map(|(a, &b)| (a, b as usize))
            .collect()
    }

    /// No loops and no parallel edges.
    pub fn is_simple(&self) -> bool {
        self.loops.iter().all(|&l| l == 0) && self.adj.iter().all(|r| r.iter().all(|e| e.1 == 1))
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    /// Connected components as sorted vertex lists, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.n_vertices();
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut i = 0;
            while i < members.len() {
                let u = members[i];
                i += 1;
                for &(w, _) in &self.adj[u] {
                    if comp[w as usize] == usize::MAX {
                        comp[w as usize] = id;
                        members.push(w as usize);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Induced subgraph on a union of components, relabeled `0..k` in the
    /// given vertex order.
    pub fn component_subgraph(&self, vertices: &[usize]) -> CubicMultigraph {
        let mut local = vec![u32::MAX; self.n_vertices()];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i as u32;
        }
        let mut mate = vec![0u32; 3 * vertices.len()];
        for (i, &v) in vertices.iter().enumerate() {
            for k in 0..3 {
                let b = self.mate[3 * v + k] as usize;
                let lw = local[b / 3];
                assert!(lw != u32::MAX, "vertex set is not closed under adjacency");
                mate[3 * i + k] = 3 * lw + (b % 3) as u32;
            }
        }
        CubicMultigraph::from_mate_unchecked(mate)
    }

    /// Disjoint union, with `other`'s vertices shifted after `self`'s.
    pub fn disjoint_union(&self, other: &CubicMultigraph) -> CubicMultigraph {
        let off = self.mate.len() as u32;
        let mut mate = self.mate.clone();
        mate.extend(other.mate.iter().map(|&b| b + off));
        CubicMultigraph::from_mate_unchecked(mate)
    }

    /// Relabel vertices: vertex `v` becomes `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> CubicMultigraph {
        let mut mate = vec![0u32; self.mate.len()];
        let map = |h: usize| 3 * perm[h / 3] + h % 3;
        for (a, &b) in self.mate.iter().enumerate() {
            mate[map(a)] = map(b as usize) as u32;
        }
        CubicMultigraph::from_mate_unchecked(mate)
    }

    /// Isomorphism-invariant initial coloring: loop flag and a hash of the
    /// BFS layer sizes around each vertex.
    fn invariant_colors(&self) -> Vec<u64> {
        let n = self.n_vertices();
        let mut dist = vec![u32::MAX; n];
        let mut queue = Vec::with_capacity(n);
        (0..n)
            .map(|s| {
                dist.fill(u32::MAX);
                dist[s] = 0;
                queue.clear();
                queue.push(s);
                let mut i = 0;
                // FNV-1a over the layer sizes
                let mut h: u64 = 0xcbf2_9ce4_8422_2325;
                let mut layer = 0;
                let mut layer_count: u64 = 0;
                while i < queue.len() {
                    let u = queue[i];
                    i += 1;
                    if dist[u] != layer {
                        h = (h ^ layer_count).wrapping_mul(0x0100_0000_01b3);
                        layer = dist[u];
                        layer_count = 0;
                    }
                    layer_count += 1;
                    for &(w, _) in &self.adj[u] {
                        if dist[w as usize] == u32::MAX {
                            dist[w as usize] = dist[u] + 1;
                            queue.push(w as usize);
                        }
                    }
                }
                h = (h ^ layer_count).wrapping_mul(0x0100_0000_01b3);
                ((self.loops[s] as u64) << 63) | (h >> 1)
            })
            .collect()
    }

    fn labeling(&self) -> canon::Labeling {
        canon::canonical_labeling(&self.adj, &self.invariant_colors(), false)
    }

    /// Self-delimiting code of a connected graph under its canonical labeling.
    fn connected_code(&self) -> (Vec<u8>, u64) {
        let lab = self.labeling();
        let pos = lab.positions();
        let n = self.n_vertices();
        let mut out = Vec::with_capacity(2 + 4 * n);
        out.extend_from_slice(&(n as u16).to_be_bytes());
        for &v in &lab.order {
            let v = v as usize;
            let mut fwd: Vec<(u32, u8)> = self.adj[v]
                .iter()
                .map(|&(w, m)| (pos[w as usize], m))
                .filter(|&(pw, _)| pw > pos[v])
                .collect();
            fwd.sort_unstable();
            out.push(self.loops[v] | ((fwd.len() as u8) << 1));
            for (pw, m) in fwd {
                out.extend_from_slice(&(pw as u16).to_be_bytes());
                out.push(m);
            }
        }
        (out, lab.aut_count)
    }

    fn component_codes(&self) -> Vec<(Vec<u8>, u64)> {
        let comps = self.components();
        if comps.len() == 1 {
            return vec![self.connected_code()];
        }
        let mut codes: Vec<(Vec<u8>, u64)> = comps.iter().map(|c| self.component_subgraph(c).connected_code()).collect();
        codes.sort();
        codes
    }

    /// Byte string equal for two graphs iff they are isomorphic. Components
    /// are coded separately and concatenated in sorted order.
    pub fn canonical_code(&self) -> &[u8] {
        self.code.get_or_init(|| {
            let codes = self.component_codes();
            let mut out = (codes.len() as u16).to_be_bytes().to_vec();
            for (c, _) in codes {
                out.extend_from_slice(&c);
            }
            out
        })
    }

    /// Order of the vertex automorphism group (permutations preserving
    /// multiplicities and loops).
    pub fn automorphism_count(&self) -> BigUint {
        let codes = self.component_codes();
        let mut total = BigUint::one();
        let mut i = 0;
        while i < codes.len() {
            let mut j = i;
            while j < codes.len() && codes[j].0 == codes[i].0 {
                total *= codes[j].1;
                j += 1;
            }
            for k in 2..=(j - i) as u64 {
                total *= k;
            }
            i = j;
        }
        total
    }

    pub fn has_nontrivial_automorphism(&self) -> bool {
        self.automorphism_count() > BigUint::one()
    }
}

impl fmt::Display for CubicMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.to_multigraph().fmt(f)
    }
}

impl FromStr for CubicMultigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CubicMultigraph::from_multigraph(&s.parse()?)
    }
}

/// Common fixtures.
impl CubicMultigraph {
    /// Two vertices joined by three parallel edges.
    pub fn triple_edge() -> Self {
        Self::from_mate_unchecked(vec![3, 4, 5, 0, 1, 2])
    }

    /// Two looped vertices joined by a bridge.
    pub fn dumbbell() -> Self {
        Self::from_mate_unchecked(vec![1, 0, 5, 4, 3, 2])
    }

    pub fn k4() -> Self {
        Self::from_multigraph(&Multigraph::complete(4)).unwrap()
    }

    pub fn k33() -> Self {
        Self::from_multigraph(&Multigraph::complete_bipartite(3, 3)).unwrap()
    }

    pub fn prism() -> Self {
        Self::from_multigraph(&Multigraph::prism()).unwrap()
    }

    pub fn petersen() -> Self {
        Self::from_multigraph(&Multigraph::petersen()).unwrap()
    }
}
