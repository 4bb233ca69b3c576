//! Individualization-refinement canonical labeling for vertex-colored
//! multigraphs whose vertices have at most three distinct neighbors.
//!
//! The search tree explores every branch that can still reach a minimal
//! leaf. Leaves are keyed by (refinement trace, relabeled adjacency), and the
//! leaves achieving the minimal key are exactly one orbit of the automorphism
//! group acting freely on the tree, so their number is `|Aut|`.

use std::cmp::Ordering;

/// Maximum number of distinct neighbors a vertex may have.
pub(crate) const MAX_NBRS: usize = 3;

pub(crate) type Adjacency = [Vec<(u32, u8)>];

type Signature = [(u32, u32); MAX_NBRS];

const PAD: (u32, u32) = (u32::MAX, 0);

#[derive(Debug, Clone)]
pub(crate) struct Labeling {
    /// Position -> vertex for the first minimal leaf.
    pub order: Vec<u32>,
    /// Number of minimal leaves, i.e. the automorphism group order.
    pub aut_count: u64,
    /// Position -> vertex for every minimal leaf (only when requested).
    pub min_leaves: Vec<Vec<u32>>,
}

impl Labeling {
    /// Vertex -> canonical position.
    pub fn positions(&self) -> Vec<u32> {
        let mut pos = vec![0u32; self.order.len()];
        for (p, &v) in self.order.iter().enumerate() {
            pos[v as usize] = p as u32;
        }
        pos
    }
}

#[derive(Clone)]
struct Partition {
    order: Vec<u32>,
    cell_of: Vec<u32>,
    // (start, len) in position order
    cells: Vec<(u32, u32)>,
}

impl Partition {
    fn from_colors(colors: &[u64]) -> Self {
        let n = colors.len();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by_key(|&v| (colors[v as usize], v));
        let mut cells = Vec::new();
        let mut cell_of = vec![0u32; n];
        let mut start = 0;
        while start < n {
            let c = colors[order[start] as usize];
            let mut end = start + 1;
            while end < n && colors[order[end] as usize] == c {
                end += 1;
            }
            for &v in &order[start..end] {
                cell_of[v as usize] = start as u32;
            }
            cells.push((start as u32, (end - start) as u32));
            start = end;
        }
        Partition { order, cell_of, cells }
    }

    fn is_discrete(&self) -> bool {
        self.cells.len() == self.order.len()
    }

    fn individualize(&self, cell_idx: usize, v: u32) -> Self {
        let mut p = self.clone();
        let (start, len) = p.cells[cell_idx];
        let s = start as usize;
        let at = p.order[s..s + len as usize].iter().position(|&x| x == v).unwrap() + s;
        p.order.swap(s, at);
        // keep the remainder in a deterministic order
        p.order[s + 1..s + len as usize].sort_unstable();
        p.cells[cell_idx] = (start, 1);
        p.cells.insert(cell_idx + 1, (start + 1, len - 1));
        for &x in &p.order[s + 1..s + len as usize] {
            p.cell_of[x as usize] = start + 1;
        }
        p.cell_of[v as usize] = start;
        p
    }

    fn refine(&mut self, adj: &Adjacency) {
        let n = self.order.len();
        let mut sig: Vec<Signature> = vec![[PAD; MAX_NBRS]; n];
        loop {
            for v in 0..n {
                let mut s = [PAD; MAX_NBRS];
                for (i, &(w, m)) in adj[v].iter().enumerate() {
                    s[i] = (self.cell_of[w as usize], m as u32);
                }
                s.sort_unstable();
                sig[v] = s;
            }
            let mut new_cells = Vec::with_capacity(self.cells.len());
            let mut split = false;
            for &(start, len) in &self.cells {
                if len == 1 {
                    new_cells.push((start, len));
                    continue;
                }
                let s = start as usize;
                let e = s + len as usize;
                self.order[s..e].sort_by(|&a, &b| sig[a as usize].cmp(&sig[b as usize]).then(a.cmp(&b)));
                let mut cs = s;
                while cs < e {
                    let key = sig[self.order[cs] as usize];
                    let mut ce = cs + 1;
                    while ce < e && sig[self.order[ce] as usize] == key {
                        ce += 1;
                    }
                    new_cells.push((cs as u32, (ce - cs) as u32));
                    cs = ce;
                }
                if new_cells.last().map(|c| c.0) != Some(start) {
                    split = true;
                }
            }
            if !split {
                break;
            }
            for &(start, len) in &new_cells {
                for &v in &self.order[start as usize..(start + len) as usize] {
                    self.cell_of[v as usize] = start;
                }
            }
            self.cells = new_cells;
        }
    }

    fn trace(&self) -> Vec<u32> {
        self.cells.iter().map(|c| c.1).collect()
    }

    fn target_cell(&self) -> usize {
        let mut best = None;
        for (i, c) in self.cells.iter().enumerate() {
            if c.1 > 1 && best.is_none_or(|(_, l)| c.1 < l) {
                best = Some((i, c.1));
            }
        }
        best.expect("non-discrete partition has a non-singleton cell").0
    }
}

pub(crate) fn encode(adj: &Adjacency, colors: &[u64], order: &[u32]) -> Vec<u32> {
    let n = order.len();
    let mut pos = vec![0u32; n];
    for (p, &v) in order.iter().enumerate() {
        pos[v as usize] = p as u32;
    }
    let mut code = Vec::with_capacity(n * (2 + 2 * MAX_NBRS));
    for &v in order {
        let c = colors[v as usize];
        code.push((c >> 32) as u32);
        code.push(c as u32);
        let mut row = [PAD; MAX_NBRS];
        for (i, &(w, m)) in adj[v as usize].iter().enumerate() {
            row[i] = (pos[w as usize], m as u32);
        }
        row.sort_unstable();
        for (w, m) in row {
            code.push(w);
            code.push(m);
        }
    }
    code
}

struct Search<'a> {
    adj: &'a Adjacency,
    colors: &'a [u64],
    collect: bool,
    path: Vec<Vec<u32>>,
    best_traces: Vec<Vec<u32>>,
    best_code: Option<Vec<u32>>,
    out: Labeling,
}

impl Search<'_> {
    fn node(&mut self, mut part: Partition) {
        part.refine(self.adj);
        self.path.push(part.trace());
        // any leaf below extends this trace prefix
        if self.best_code.is_some() && self.path.as_slice() > self.best_traces.as_slice() {
            self.path.pop();
            return;
        }
        if part.is_discrete() {
            self.leaf(&part.order);
        } else {
            let ci = part.target_cell();
            let (s, l) = part.cells[ci];
            let members: Vec<u32> = part.order[s as usize..(s + l) as usize].to_vec();
            for v in members {
                let child = part.individualize(ci, v);
                self.node(child);
            }
        }
        self.path.pop();
    }

    fn leaf(&mut self, order: &[u32]) {
        let code = encode(self.adj, self.colors, order);
        let ord = match &self.best_code {
            None => Ordering::Less,
            Some(best) => self.path.cmp(&self.best_traces).then_with(|| code.cmp(best)),
        };
        match ord {
            Ordering::Less => {
                self.best_code = Some(code);
                self.best_traces = self.path.clone();
                self.out.order = order.to_vec();
                self.out.aut_count = 1;
                self.out.min_leaves.clear();
                if self.collect {
                    self.out.min_leaves.push(order.to_vec());
                }
            }
            Ordering::Equal => {
                self.out.aut_count += 1;
                if self.collect {
                    self.out.min_leaves.push(order.to_vec());
                }
            }
            Ordering::Greater => {}
        }
    }
}

/// Canonically label the graph. `colors` is an isomorphism-invariant initial
/// vertex coloring; it takes part in the canonical form.
pub(crate) fn canonical_labeling(adj: &Adjacency, colors: &[u64], collect_leaves: bool) -> Labeling {
    debug_assert_eq!(adj.len(), colors.len());
    debug_assert!(adj.iter().all(|a| a.len() <= MAX_NBRS));
    let mut s = Search {
        adj,
        colors,
        collect: collect_leaves,
        path: Vec::new(),
        best_traces: Vec::new(),
        best_code: None,
        out: Labeling { order: Vec::new(), aut_count: 0, min_leaves: Vec::new() },
    };
    if adj.is_empty() {
        s.out.aut_count = 1;
        return s.out;
    }
    s.node(Partition::from_colors(colors));
    s.out
}
