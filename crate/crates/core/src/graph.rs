//! General undirected multigraphs with loops, and the shared text format.
//!
//! The multigraph text format is: line 1 is the vertex count, followed by
//! `u v m` rows (edge `u < v` with multiplicity `m`, which may be omitted
//! when it is 1) and `v L` rows (one per loop at `v`). Emission sorts edge
//! rows by `(u, v)` and then loop rows by `v`, so parse-then-print is
//! byte-exact on emitted text.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::error::{structural, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multigraph {
    n: usize,
    edges: BTreeMap<(usize, usize), u32>,
    loops: Vec<u32>,
}

impl Multigraph {
    pub fn new(n: usize) -> Self {
        Multigraph { n, edges: BTreeMap::new(), loops: vec![0; n] }
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize, m: u32) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(structural(format!("edge ({u}, {v}) out of range for {} vertices", self.n)));
        }
        if m == 0 {
            return Ok(());
        }
        if u == v {
            self.loops[u] += m;
        } else {
            *self.edges.entry((u.min(v), u.max(v))).or_insert(0) += m;
        }
        Ok(())
    }

    pub fn add_loop(&mut self, v: usize) -> Result<()> {
        self.add_edge(v, v, 1)
    }

    pub fn multiplicity(&self, u: usize, v: usize) -> u32 {
        if u == v {
            return self.loops[u];
        }
        self.edges.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn loops(&self, v: usize) -> u32 {
        self.loops[v]
    }

    /// Non-loop edges `(u, v, m)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, u32)> + '_ {
        self.edges.iter().map(|(&(u, v), &m)| (u, v, m))
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> u32 {
        2 * self.loops[v] + self.edges().filter(|&(a, b, _)| a == v || b == v).map(|e| e.2).sum::<u32>()
    }

    /// Adjacency lists of the underlying simple graph (no loops, no repeats).
    pub fn simple_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for (u, v, _) in self.edges() {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    pub fn simple_edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_connected(&self) -> bool {
        is_connected(&self.simple_adjacency())
    }

    /// Girth of the underlying simple graph; `None` for forests.
    pub fn simple_girth(&self) -> Option<usize> {
        simple_girth(&self.simple_adjacency())
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v, 1).unwrap();
            }
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = Multigraph::new(a + b);
        for u in 0..a {
            for v in 0..b {
                g.add_edge(u, a + v, 1).unwrap();
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Multigraph::new(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n, 1).unwrap();
        }
        g
    }

    pub fn petersen() -> Self {
        let mut g = Multigraph::new(10);
        for i in 0..5 {
            g.add_edge(i, (i + 1) % 5, 1).unwrap();
            g.add_edge(i, i + 5, 1).unwrap();
            g.add_edge(5 + i, 5 + (i + 2) % 5, 1).unwrap();
        }
        g
    }

    /// Triangular prism (the 3-prism), a cubic graph on 6 vertices.
    pub fn prism() -> Self {
        let mut g = Multigraph::new(6);
        for i in 0..3 {
            g.add_edge(i, (i + 1) % 3, 1).unwrap();
            g.add_edge(3 + i, 3 + (i + 1) % 3, 1).unwrap();
            g.add_edge(i, i + 3, 1).unwrap();
        }
        g
    }

    /// Named small graphs accepted by the command line: `K<n>`, `K<m>,<n>`,
    /// `K33`-style doubled digits for balanced bipartite graphs, `petersen`
    /// and `prism`.
    pub fn builtin(name: &str) -> Option<Self> {
        let upper = name.to_ascii_uppercase();
        match upper.as_str() {
            "PETERSEN" => return Some(Multigraph::petersen()),
            "PRISM" => return Some(Multigraph::prism()),
            _ => {}
        }
        let rest = upper.strip_prefix('K')?;
        if let Some((a, b)) = rest.split_once(',') {
            return Some(Multigraph::complete_bipartite(a.parse().ok()?, b.parse().ok()?));
        }
        // "K33" style shorthand for balanced bipartite graphs
        if rest.len() == 2 && rest.as_bytes()[0] == rest.as_bytes()[1] && rest.as_bytes()[0].is_ascii_digit() {
            let a = rest[..1].parse().ok()?;
            let b = rest[1..].parse().ok()?;
            return Some(Multigraph::complete_bipartite(a, b));
        }
        rest.parse().ok().map(Multigraph::complete)
    }
}

impl fmt::Display for Multigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n)?;
        for (u, v, m) in self.edges() {
            writeln!(f, "{u} {v} {m}")?;
        }
        for (v, &l) in self.loops.iter().enumerate() {
            for _ in 0..l {
                writeln!(f, "{v} L")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Multigraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        let n: usize = lines
            .next()
            .ok_or_else(|| structural("empty multigraph text"))?
            .parse()
            .map_err(|_| structural("first line must be the vertex count"))?;
        let mut g = Multigraph::new(n);
        for line in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            let num = |t: &str| t.parse::<usize>().map_err(|_| structural(format!("bad row '{line}'")));
            match toks.as_slice() {
                [v, "L"] => g.add_loop(num(v)?)?,
                [u, v] => g.add_edge(num(u)?, num(v)?, 1)?,
                [u, v, m] => g.add_edge(num(u)?, num(v)?, num(m)? as u32)?,
                _ => return Err(structural(format!("bad row '{line}'"))),
            }
        }
        Ok(g)
    }
}

pub(crate) fn is_connected(adj: &[Vec<usize>]) -> bool {
    let n = adj.len();
    if n == 0 {
        return true;
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &w in &adj[u] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == n
}

/// Shortest cycle length in a simple graph via BFS from every root.
pub(crate) fn simple_girth(adj: &[Vec<usize>]) -> Option<usize> {
    let n = adj.len();
    let mut best: Option<usize> = None;
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        dist.fill(usize::MAX);
        dist[root] = 0;
        parent[root] = usize::MAX;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            if best.is_some_and(|b| 2 * dist[u] + 1 >= b) {
                break;
            }
            for &w in &adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    best = Some(best.map_or(len, |b| b.min(len)));
                }
            }
        }
    }
    best
}
