//! Structural queries: circuits, girth, subgraph copies, edge defect.

use super::multigraph::CubicMultigraph;
use crate::error::{capability, structural, Result};
use crate::graph::Multigraph;

/// Largest pattern accepted by [`count_subgraph_copies`].
pub const MAX_PATTERN_VERTICES: usize = 8;

/// Largest support accepted by [`find_small_defect_maps`].
pub const MAX_DEFECT_SUPPORT: usize = 12;

impl CubicMultigraph {
    /// Number of `k`-circuits: cycles using `k` distinct edges, counted as
    /// unlabeled edge sets. Loops are 1-circuits, parallel pairs 2-circuits.
    pub fn count_circuits(&self, k: usize) -> u64 {
        match k {
            0 => 0,
            1 => self.loop_count() as u64,
            2 => (0..self.n_vertices())
                .flat_map(|v| self.neighbors(v).iter().filter(move |e| e.0 as usize > v))
                .map(|&(_, m)| (m as u64) * (m as u64 - 1) / 2)
                .sum(),
            _ => {
                let mut total = 0u64;
                let mut on_path = vec![false; self.n_vertices()];
                for s in 0..self.n_vertices() {
                    on_path[s] = true;
                    total += self.cycles_from(s, s, 1, k, &mut on_path);
                    on_path[s] = false;
                }
                // each cycle is found once per direction from its least vertex
                total / 2
            }
        }
    }

    // Weighted count of paths s -> ... -> u of `len` edges over vertices > s
    // that close into a k-cycle at s.
    fn cycles_from(&self, s: usize, u: usize, len: usize, k: usize, on_path: &mut [bool]) -> u64 {
        let mut total = 0;
        for &(w, m) in self.neighbors(u) {
            let w = w as usize;
            if len == k {
                if w == s {
                    total += m as u64;
                }
                continue;
            }
            if w <= s || on_path[w] {
                continue;
            }
            on_path[w] = true;
            total += m as u64 * self.cycles_from(s, w, len + 1, k, on_path);
            on_path[w] = false;
        }
        total
    }

    /// Shortest circuit length; `None` for forests (impossible for nonempty
    /// cubic graphs, kept for total coverage of the contract).
    pub fn girth(&self) -> Option<usize> {
        if self.loop_count() > 0 {
            return Some(1);
        }
        if (0..self.n_vertices()).any(|v| self.neighbors(v).iter().any(|e| e.1 >= 2)) {
            return Some(2);
        }
        crate::graph::simple_girth(&self.simple_adjacency())
    }

    pub(crate) fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n_vertices()).map(|v| self.neighbors(v).iter().map(|e| e.0 as usize).collect()).collect()
    }
}

/// Small fixed pattern graph prepared for copy counting.
#[derive(Debug, Clone)]
pub struct Pattern {
    graph: Multigraph,
    order: Vec<usize>,
    aut: u64,
}

impl Pattern {
    pub fn new(graph: Multigraph) -> Result<Self> {
        let n = graph.n_vertices();
        if n > MAX_PATTERN_VERTICES {
            return Err(capability(format!("pattern has {n} vertices; at most {MAX_PATTERN_VERTICES} are supported")));
        }
        // BFS-ish order so that later vertices usually have an assigned neighbor
        let adj = graph.simple_adjacency();
        let mut order = Vec::with_capacity(n);
        let mut seen = vec![false; n];
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let start = order.len();
            order.push(s);
            let mut i = start;
            while i < order.len() {
                let u = order[i];
                i += 1;
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push(w);
                    }
                }
            }
        }
        let aut = pattern_automorphisms(&graph);
        Ok(Pattern { graph, order, aut })
    }

    pub fn triangle() -> Self {
        Pattern::new(Multigraph::cycle(3)).unwrap()
    }

    pub fn k4() -> Self {
        Pattern::new(Multigraph::complete(4)).unwrap()
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn automorphism_count(&self) -> u64 {
        self.aut
    }
}

fn pattern_automorphisms(g: &Multigraph) -> u64 {
    let n = g.n_vertices();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut count = 0;
    loop {
        let ok = (0..n).all(|u| {
            g.loops(u) == g.loops(perm[u]) && (u + 1..n).all(|v| g.multiplicity(u, v) == g.multiplicity(perm[u], perm[v]))
        });
        if ok {
            count += 1;
        }
        if !next_permutation(&mut perm) {
            return count;
        }
    }
}

pub(crate) fn next_permutation<T: Ord>(p: &mut [T]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Number of sub(multi)graphs of `g` isomorphic to the pattern: weighted
/// injective vertex maps (choosing which parallel edges and loops realize
/// the pattern's) divided by the pattern's automorphism count.
pub fn count_subgraph_copies(g: &CubicMultigraph, pattern: &Pattern) -> u64 {
    let pn = pattern.graph.n_vertices();
    if pn > g.n_vertices() {
        return 0;
    }
    let mut image = vec![usize::MAX; pn];
    let mut used = vec![false; g.n_vertices()];
    let total = embed(g, pattern, 0, &mut image, &mut used);
    debug_assert_eq!(total % pattern.aut, 0);
    total / pattern.aut
}

fn embed(g: &CubicMultigraph, pat: &Pattern, depth: usize, image: &mut [usize], used: &mut [bool]) -> u64 {
    if depth == pat.order.len() {
        return 1;
    }
    let u = pat.order[depth];
    let pg = &pat.graph;
    let anchor = pat.order[..depth].iter().copied().find(|&w| pg.multiplicity(u, w) > 0);
    let candidates: Vec<usize> = match anchor {
        Some(w) => g.neighbors(image[w]).iter().map(|e| e.0 as usize).collect(),
        None => (0..g.n_vertices()).collect(),
    };
    let mut total = 0;
    for x in candidates {
        if used[x] {
            continue;
        }
        let mut weight = binomial(g.loops(x), pg.loops(u));
        for &w in &pat.order[..depth] {
            if weight == 0 {
                break;
            }
            let need = pg.multiplicity(u, w);
            if need > 0 {
                weight *= binomial(g.multiplicity(x, image[w]), need);
            }
        }
        if weight == 0 {
            continue;
        }
        used[x] = true;
        image[u] = x;
        total += weight * embed(g, pat, depth + 1, image, used);
        used[x] = false;
        image[u] = usize::MAX;
    }
    total
}

/// A permutation of the vertex set.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexPermutation {
    images: Vec<u32>,
    support_size: usize,
}

impl VertexPermutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            if x >= n || seen[x] {
                return Err(structural("vertex permutation is not a bijection"));
            }
            seen[x] = true;
        }
        let support_size = images.iter().enumerate().filter(|&(v, &x)| v != x).count();
        Ok(VertexPermutation { images: images.into_iter().map(|x| x as u32).collect(), support_size })
    }

    pub fn identity(n: usize) -> Self {
        VertexPermutation::new((0..n).collect()).unwrap()
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        VertexPermutation::new(images).unwrap()
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn image(&self, v: usize) -> usize {
        self.images[v] as usize
    }

    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|&x| x as usize).collect()
    }

    /// Number of moved vertices.
    pub fn support_size(&self) -> usize {
        self.support_size
    }

    pub fn is_identity(&self) -> bool {
        self.support_size == 0
    }
}

/// Number of edges (with multiplicity, loops included) whose image under
/// `pi` is not an edge of `g`.
pub fn edge_defect(g: &CubicMultigraph, pi: &VertexPermutation) -> Result<u64> {
    if pi.len() != g.n_vertices() {
        return Err(structural(format!(
            "permutation acts on {} vertices but the graph has {}",
            pi.len(),
            g.n_vertices()
        )));
    }
    let mut defect = 0u64;
    for u in 0..g.n_vertices() {
        let pu = pi.image(u);
        defect += g.loops(u).saturating_sub(g.loops(pu)) as u64;
        for &(v, m) in g.neighbors(u) {
            let v = v as usize;
            if v > u {
                defect += (m as u32).saturating_sub(g.multiplicity(pu, pi.image(v))) as u64;
            }
        }
    }
    Ok(defect)
}

/// All non-identity permutations with at most `max_support` moved vertices
/// and edge defect at most `k`, found by backtracking over partial maps with
/// a defect budget.
pub fn find_small_defect_maps(g: &CubicMultigraph, k: u64, max_support: usize) -> Result<Vec<(VertexPermutation, u64)>> {
    if max_support > MAX_DEFECT_SUPPORT {
        return Err(capability(format!(
            "support cap {max_support} exceeds the supported maximum {MAX_DEFECT_SUPPORT}"
        )));
    }
    let n = g.n_vertices();
    let mut st = DefectSearch {
        g,
        budget: k,
        max_support,
        image: vec![usize::MAX; n],
        used: vec![false; n],
        out: Vec::new(),
    };
    st.extend(0, 0, 0);
    Ok(st.out)
}

struct DefectSearch<'a> {
    g: &'a CubicMultigraph,
    budget: u64,
    max_support: usize,
    image: Vec<usize>,
    used: Vec<bool>,
    out: Vec<(VertexPermutation, u64)>,
}

impl DefectSearch<'_> {
    fn extend(&mut self, v: usize, defect: u64, support: usize) {
        let n = self.g.n_vertices();
        if v == n {
            if support > 0 {
                let pi = VertexPermutation::new(self.image.clone()).unwrap();
                self.out.push((pi, defect));
            }
            return;
        }
        // unassigned vertices whose own slot is taken must move
        let forced = (v..n).filter(|&w| self.used[w]).count();
        if support + forced > self.max_support {
            return;
        }
        for x in 0..n {
            if self.used[x] {
                continue;
            }
            let moved = (x != v) as usize;
            if support + moved > self.max_support {
                continue;
            }
            let mut d = self.g.loops(v).saturating_sub(self.g.loops(x)) as u64;
            for &(w, m) in self.g.neighbors(v) {
                let w = w as usize;
                if w < v {
                    d += (m as u32).saturating_sub(self.g.multiplicity(x, self.image[w])) as u64;
                }
            }
            if defect + d > self.budget {
                continue;
            }
            self.used[x] = true;
            self.image[v] = x;
            self.extend(v + 1, defect + d, support + moved);
            self.used[x] = false;
            self.image[v] = usize::MAX;
        }
    }
}
