//! Minimum-genus orientable embeddings by exhaustive search over rotation
//! systems, with face counts maintained incrementally.

use crate::error::{capability, domain, Result};
use crate::graph::Multigraph;

/// Default bound on the rotation-system search space.
pub const DEFAULT_MAX_DARTS: u128 = 200_000_000;

/// Size of the rotation-system space, `prod_v (deg(v) - 1)!`, on the
/// underlying simple graph. Saturates at `u128::MAX`.
pub fn rotation_system_count(g: &Multigraph) -> u128 {
    g.simple_adjacency()
        .iter()
        .map(|nbrs| (1..nbrs.len().max(1) as u128).product::<u128>())
        .fold(1u128, |acc, f| acc.saturating_mul(f))
}

/// Genus of a connected graph. Loops and parallel edges never change the
/// genus, so the search runs on the underlying simple graph.
pub fn exact_graph_genus(g: &Multigraph, dart_budget: u128) -> Result<usize> {
    if !g.is_connected() {
        return Err(domain("exact genus needs a connected graph"));
    }
    let space = rotation_system_count(g);
    if space > dart_budget {
        return Err(capability(format!(
            "rotation-system space {space} exceeds the search budget {dart_budget} (raise --max-darts)"
        )));
    }
    let adj = prune_leaves(g.simple_adjacency());
    let v = adj.iter().filter(|a| !a.is_empty()).count();
    let e = adj.iter().map(Vec::len).sum::<usize>() / 2;
    if e == 0 {
        return Ok(0);
    }
    let faces = Search::new(&adj).max_faces();
    // V - E + F = 2 - 2g
    let twice = 2 + e as i64 - v as i64 - faces as i64;
    debug_assert!(twice >= 0 && twice % 2 == 0);
    Ok((twice / 2) as usize)
}

/// Degree-one vertices change neither the genus nor connectivity of the rest.
fn prune_leaves(mut adj: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    let mut stack: Vec<usize> = (0..adj.len()).filter(|&v| adj[v].len() == 1).collect();
    while let Some(v) = stack.pop() {
        if adj[v].len() != 1 {
            continue;
        }
        let w = adj[v][0];
        adj[v].clear();
        adj[w].retain(|&x| x != v);
        if adj[w].len() == 1 {
            stack.push(w);
        }
    }
    adj
}

struct Search {
    /// Per vertex (in search order): all admissible rotations, each given as
    /// the face-walk links `(a, b)` meaning `phi(a) = b`.
    choices: Vec<Vec<Vec<(u32, u32)>>>,
    n_darts: usize,
    start: Vec<u32>,
    end: Vec<u32>,
    len: Vec<u32>,
    closed: usize,
    closed_darts: usize,
    best: usize,
}

enum Undo {
    Closed(usize),
    Merged { s: u32, a: u32, b: u32, t: u32, len_b: u32 },
}

impl Search {
    fn new(adj: &[Vec<usize>]) -> Self {
        // darts: 2i = (u -> v), 2i + 1 = (v -> u) for the i-th edge u < v
        let mut out: Vec<Vec<u32>> = vec![Vec::new(); adj.len()];
        let mut n_darts = 0u32;
        for u in 0..adj.len() {
            for &v in &adj[u] {
                if u < v {
                    out[u].push(n_darts);
                    out[v].push(n_darts + 1);
                    n_darts += 2;
                }
            }
        }
        let order = search_order(adj);
        let first_branching = order.iter().position(|&v| out[v].len() >= 3);
        let choices = order
            .iter()
            .enumerate()
            .map(|(i, &v)| rotations(&out[v], Some(i) == first_branching))
            .collect();
        let n = n_darts as usize;
        Search {
            choices,
            n_darts: n,
            start: (0..n_darts).collect(),
            end: (0..n_darts).collect(),
            len: vec![1; n],
            closed: 0,
            closed_darts: 0,
            best: 0,
        }
    }

    fn max_faces(mut self) -> usize {
        self.descend(0);
        self.best
    }

    fn descend(&mut self, depth: usize) {
        if depth == self.choices.len() {
            debug_assert_eq!(self.closed_darts, self.n_darts);
            self.best = self.best.max(self.closed);
            return;
        }
        // every face of a simple graph without leaves has at least 3 darts
        if self.closed + (self.n_darts - self.closed_darts) / 3 <= self.best {
            return;
        }
        let mut undo = Vec::new();
        for k in 0..self.choices[depth].len() {
            for i in 0..self.choices[depth][k].len() {
                let (a, b) = self.choices[depth][k][i];
                undo.push(self.link(a, b));
            }
            self.descend(depth + 1);
            while let Some(u) = undo.pop() {
                self.unlink(u);
            }
        }
    }

    fn link(&mut self, a: u32, b: u32) -> Undo {
        let s = self.start[a as usize];
        if s == b {
            let l = self.len[s as usize] as usize;
            self.closed += 1;
            self.closed_darts += l;
            return Undo::Closed(l);
        }
        let t = self.end[b as usize];
        let len_b = self.len[b as usize];
        self.end[s as usize] = t;
        self.start[t as usize] = s;
        self.len[s as usize] += len_b;
        Undo::Merged { s, a, b, t, len_b }
    }

    fn unlink(&mut self, u: Undo) {
        match u {
            Undo::Closed(l) => {
                self.closed -= 1;
                self.closed_darts -= l;
            }
            Undo::Merged { s, a, b, t, len_b } => {
                self.len[s as usize] -= len_b;
                self.end[s as usize] = a;
                self.start[t as usize] = b;
            }
        }
    }
}

/// Breadth-first order from a maximum-degree vertex, so faces close early.
fn search_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let Some(root) = (0..adj.len()).filter(|&v| !adj[v].is_empty()).max_by_key(|&v| (adj[v].len(), usize::MAX - v))
    else {
        return Vec::new();
    };
    let mut seen = vec![false; adj.len()];
    let mut order = vec![root];
    seen[root] = true;
    let mut i = 0;
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
    order
}

/// Face-walk links for each cyclic order of `darts`. With `mirror_quotient`,
/// only one of each mirror pair is kept: reversing every rotation reverses
/// every face, so a single vertex may be restricted this way.
fn rotations(darts: &[u32], mirror_quotient: bool) -> Vec<Vec<(u32, u32)>> {
    let d = darts.len();
    let mut rest: Vec<u32> = darts[1..].to_vec();
    let mut out = Vec::new();
    loop {
        if !(mirror_quotient && d >= 3 && rest[0] > rest[d - 2]) {
            let cyc: Vec<u32> = std::iter::once(darts[0]).chain(rest.iter().copied()).collect();
            // phi(x) = rho(alpha(x)); alpha flips the low bit
            out.push((0..d).map(|i| (cyc[i] ^ 1, cyc[(i + 1) % d])).collect());
        }
        if !crate::halfedge::next_permutation(&mut rest) {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_complete_graphs() {
        for (n, g) in [(3, 0), (4, 0), (5, 1), (6, 1)] {
            assert_eq!(exact_graph_genus(&Multigraph::complete(n), DEFAULT_MAX_DARTS).unwrap(), g, "K{n}");
        }
        assert_eq!(exact_graph_genus(&Multigraph::complete_bipartite(3, 3), DEFAULT_MAX_DARTS).unwrap(), 1);
        assert_eq!(exact_graph_genus(&Multigraph::petersen(), DEFAULT_MAX_DARTS).unwrap(), 1);
        assert_eq!(exact_graph_genus(&Multigraph::prism(), DEFAULT_MAX_DARTS).unwrap(), 0);
        assert_eq!(exact_graph_genus(&Multigraph::cycle(5), DEFAULT_MAX_DARTS).unwrap(), 0);
    }

    #[test]
    fn trees_and_errors() {
        let mut path = Multigraph::new(3);
        path.add_edge(0, 1, 1).unwrap();
        path.add_edge(1, 2, 1).unwrap();
        assert_eq!(exact_graph_genus(&path, 1).unwrap(), 0);
        let two = Multigraph::new(2);
        assert!(matches!(exact_graph_genus(&two, 10), Err(crate::Error::Domain(_))));
        assert!(matches!(exact_graph_genus(&Multigraph::complete(6), 1000), Err(crate::Error::Capability(_))));
        assert_eq!(rotation_system_count(&Multigraph::complete(6)), 191_102_976);
    }
}
