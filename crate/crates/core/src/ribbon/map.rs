use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::halfedge::Pairing;

/// Oriented triangulated surface as a combinatorial map on `3N` darts, one
/// per triangle side. `sigma` cycles the sides of each triangle in the
/// orientation order; `alpha` glues sides in pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CombinatorialMap {
    sigma: Vec<u32>,
    alpha: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceInvariants {
    pub n_triangles: usize,
    pub n_arcs: usize,
    pub n_punctures: usize,
    pub n_components: usize,
    pub genus: usize,
}

impl CombinatorialMap {
    pub fn new(sigma: Vec<u32>, alpha: Vec<u32>) -> Result<Self> {
        let n = sigma.len();
        if n == 0 || !n.is_multiple_of(6) || alpha.len() != n {
            return Err(structural(format!("dart count {n} must be 3N for even N, with matching alpha")));
        }
        let mut seen = vec![false; n];
        for &s in &sigma {
            let s = s as usize;
            if s >= n || seen[s] {
                return Err(structural("sigma is not a permutation"));
            }
            seen[s] = true;
        }
        for d in 0..n {
            let s1 = sigma[d] as usize;
            let s2 = sigma[s1] as usize;
            if s1 == d || s2 == d || sigma[s2] as usize != d {
                return Err(structural(format!("sigma orbit of dart {d} is not a 3-cycle")));
            }
            let a = alpha[d] as usize;
            if a >= n || a == d || alpha[a] as usize != d {
                return Err(structural(format!("alpha is not a fixed-point-free involution at dart {d}")));
            }
        }
        Ok(CombinatorialMap { sigma, alpha })
    }

    pub(crate) fn new_unchecked(sigma: Vec<u32>, alpha: Vec<u32>) -> Self {
        CombinatorialMap { sigma, alpha }
    }

    /// Triangle `v` has sides `(3v, 3v+1, 3v+2)` in label order; sides are
    /// glued according to the pairing.
    pub fn from_pairing(p: &Pairing) -> Self {
        let n = p.n_half_edges() as u32;
        let sigma = (0..n).map(|d| 3 * (d / 3) + (d % 3 + 1) % 3).collect();
        CombinatorialMap { sigma, alpha: p.mates().to_vec() }
    }

    /// Same gluing as [`from_pairing`](Self::from_pairing), but triangles whose
    /// bit is set in `reversed` use the opposite cyclic order.
    pub fn from_pairing_oriented(p: &Pairing, reversed: impl Fn(usize) -> bool) -> Self {
        let mut m = Self::from_pairing(p);
        for v in 0..p.n_vertices() {
            if reversed(v) {
                let b = 3 * v as u32;
                m.sigma[b as usize] = b + 2;
                m.sigma[b as usize + 2] = b + 1;
                m.sigma[b as usize + 1] = b;
            }
        }
        m
    }

    pub fn n_darts(&self) -> usize {
        self.sigma.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.sigma.len() / 3
    }

    pub fn sigma(&self, d: usize) -> usize {
        self.sigma[d] as usize
    }

    pub fn alpha(&self, d: usize) -> usize {
        self.alpha[d] as usize
    }

    pub(crate) fn sigma_slice(&self) -> &[u32] {
        &self.sigma
    }

    pub(crate) fn alpha_slice(&self) -> &[u32] {
        &self.alpha
    }

    /// Triangles as sigma cycles starting at their least dart, ordered by
    /// that dart.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        (0..self.n_darts())
            .filter(|&d| d < self.sigma(d) && d < self.sigma(self.sigma(d)))
            .map(|d| [d, self.sigma(d), self.sigma(self.sigma(d))])
            .collect()
    }

    /// Arcs as dart pairs `(a, b)` with `a < b`.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        (0..self.n_darts()).filter(|&d| d < self.alpha(d)).map(|d| (d, self.alpha(d))).collect()
    }

    /// The pairing, when triangles already use the standard `(3v, 3v+1, 3v+2)`
    /// layout.
    pub fn to_pairing(&self) -> Option<Pairing> {
        let standard = (0..self.n_darts()).all(|d| self.sigma(d) == 3 * (d / 3) + (d % 3 + 1) % 3);
        if !standard {
            return None;
        }
        Pairing::from_mate(self.alpha.clone()).ok()
    }

    /// Relabel darts so triangle `i` is `(3i, 3i+1, 3i+2)`.
    pub fn normalized(&self) -> CombinatorialMap {
        let mut relabel = vec![0u32; self.n_darts()];
        for (i, t) in self.triangles().iter().enumerate() {
            for (k, &d) in t.iter().enumerate() {
                relabel[d] = (3 * i + k) as u32;
            }
        }
        let n = self.n_darts() as u32;
        let sigma = (0..n).map(|d| 3 * (d / 3) + (d % 3 + 1) % 3).collect();
        let mut alpha = vec![0u32; self.n_darts()];
        for d in 0..self.n_darts() {
            alpha[relabel[d] as usize] = relabel[self.alpha(d)];
        }
        CombinatorialMap { sigma, alpha }
    }

    /// Boundary walk successor: apply `alpha`, then `sigma`.
    pub fn walk(&self, d: usize) -> usize {
        self.sigma(self.alpha(d))
    }

    /// Orbits of the boundary-walk permutation; each is one puncture.
    pub fn boundary_walks(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.n_darts()];
        let mut out = Vec::new();
        for s in 0..self.n_darts() {
            if seen[s] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut d = s;
            while !seen[d] {
                seen[d] = true;
                orbit.push(d);
                d = self.walk(d);
            }
            out.push(orbit);
        }
        out
    }

    pub fn n_punctures(&self) -> usize {
        let mut seen = vec![false; self.n_darts()];
        let mut count = 0;
        for s in 0..self.n_darts() {
            if !seen[s] {
                count += 1;
                let mut d = s;
                while !seen[d] {
                    seen[d] = true;
                    d = self.walk(d);
                }
            }
        }
        count
    }

    /// Connected components as dart sets.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n_darts()];
        let mut out = Vec::new();
        for s in 0..self.n_darts() {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            comp[s] = id;
            let mut members = vec![s];
            let mut i = 0;
            while i < members.len() {
                let d = members[i];
                i += 1;
                for e in [self.sigma(d), self.alpha(d)] {
                    if comp[e] == usize::MAX {
                        comp[e] = id;
                        members.push(e);
                    }
                }
            }
            members.sort_unstable();
            out.push(members);
        }
        out
    }

    /// Punctures and genus from the Euler identity
    /// `punctures - arcs + triangles = 2 * components - 2 * genus`, where the
    /// genus of a disconnected surface is the sum over components.
    pub fn surface_invariants(&self) -> Result<SurfaceInvariants> {
        let n = self.n_triangles() as i64;
        let arcs = (self.n_darts() / 2) as i64;
        let p = self.n_punctures() as i64;
        let c = self.components().len() as i64;
        let twice_genus = 2 * c - (p - arcs + n);
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(Error::Internal(format!(
                "Euler characteristic {} of {c} components gives non-integral or negative genus",
                p - arcs + n
            )));
        }
        Ok(SurfaceInvariants {
            n_triangles: n as usize,
            n_arcs: arcs as usize,
            n_punctures: p as usize,
            n_components: c as usize,
            genus: (twice_genus / 2) as usize,
        })
    }

    /// Relabel darts: dart `d` becomes `perm[d]`.
    pub fn relabeled(&self, perm: &[usize]) -> CombinatorialMap {
        let n = self.n_darts();
        let mut sigma = vec![0u32; n];
        let mut alpha = vec![0u32; n];
        for d in 0..n {
            sigma[perm[d]] = perm[self.sigma(d)] as u32;
            alpha[perm[d]] = perm[self.alpha(d)] as u32;
        }
        CombinatorialMap { sigma, alpha }
    }

    /// Code equal for two maps iff some dart bijection carries one's sigma
    /// and alpha onto the other's. Components are coded separately.
    pub fn canonical_code(&self) -> Vec<u8> {
        let codes = self.component_codes();
        let mut out = (codes.len() as u16).to_be_bytes().to_vec();
        for (c, _) in codes {
            out.extend(c.iter().flat_map(|x| (*x as u16).to_be_bytes()));
        }
        out
    }

    /// Number of dart bijections commuting with sigma and alpha.
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

    fn component_codes(&self) -> Vec<(Vec<u32>, u64)> {
        let comps = self.components();
        let mut codes: Vec<(Vec<u32>, u64)> = comps.iter().map(|c| connected_map_code(self, c)).collect();
        codes.sort();
        codes
    }
}

/// Minimal traversal code over all start darts of one component. A start
/// dart determines a unique labeling by breadth-first traversal along
/// (sigma, alpha); start darts giving the minimal code form one orbit of the
/// automorphism group, which acts freely on darts.
fn connected_map_code(m: &CombinatorialMap, darts: &[usize]) -> (Vec<u32>, u64) {
    let size = darts.len();
    let mut label = vec![u32::MAX; m.n_darts()];
    let mut queue: Vec<usize> = Vec::with_capacity(size);
    let mut best: Vec<u32> = Vec::new();
    let mut cur: Vec<u32> = Vec::with_capacity(2 * size + 1);
    let mut count = 0u64;
    for &start in darts {
        for &d in &queue {
            label[d] = u32::MAX;
        }
        queue.clear();
        cur.clear();
        cur.push(size as u32);
        label[start] = 0;
        queue.push(start);
        // Equal: prefix ties best so far; Less: already smaller
        let mut state = if best.is_empty() { std::cmp::Ordering::Less } else { std::cmp::Ordering::Equal };
        let mut i = 0;
        let mut aborted = false;
        while i < queue.len() {
            let d = queue[i];
            i += 1;
            for e in [m.sigma(d), m.alpha(d)] {
                if label[e] == u32::MAX {
                    label[e] = queue.len() as u32;
                    queue.push(e);
                }
                cur.push(label[e]);
                if state == std::cmp::Ordering::Equal {
                    let k = cur.len() - 1;
                    match cur[k].cmp(&best[k]) {
                        std::cmp::Ordering::Less => state = std::cmp::Ordering::Less,
                        std::cmp::Ordering::Greater => {
                            aborted = true;
                            break;
                        }
                        std::cmp::Ordering::Equal => {}
                    }
                }
            }
            if aborted {
                break;
            }
        }
        if aborted {
            continue;
        }
        if state == std::cmp::Ordering::Less {
            std::mem::swap(&mut best, &mut cur);
            count = 1;
        } else {
            count += 1;
        }
    }
    label[..m.n_darts()].fill(u32::MAX);
    (best, count)
}

impl fmt::Display for CombinatorialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n_triangles())?;
        for [a, b, c] in self.triangles() {
            writeln!(f, "{a} {b} {c}")?;
        }
        for (a, b) in self.arcs() {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

impl FromStr for CombinatorialMap {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| structural("empty map text"))?
            .parse()
            .map_err(|_| structural("first line must be the triangle count"))?;
        let darts = 3 * n;
        let mut sigma = vec![u32::MAX; darts];
        let mut alpha = vec![u32::MAX; darts];
        let parse_row = |line: &str| -> Result<Vec<u32>> {
            line.split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|_| structural(format!("bad row '{line}'"))))
                .collect()
        };
        for _ in 0..n {
            let line = lines.next().ok_or_else(|| structural("missing triangle row"))?;
            let row = parse_row(line)?;
            if row.len() != 3 || row.iter().any(|&d| d as usize >= darts) {
                return Err(structural(format!("bad triangle row '{line}'")));
            }
            for k in 0..3 {
                if sigma[row[k] as usize] != u32::MAX {
                    return Err(structural(format!("dart {} appears in two triangles", row[k])));
                }
                sigma[row[k] as usize] = row[(k + 1) % 3];
            }
        }
        for line in lines {
            let row = parse_row(line)?;
            if row.len() != 2 || row.iter().any(|&d| d as usize >= darts) {
                return Err(structural(format!("bad arc row '{line}'")));
            }
            let (a, b) = (row[0] as usize, row[1] as usize);
            if alpha[a] != u32::MAX || alpha[b] != u32::MAX {
                return Err(structural(format!("dart in arc '{line}' already glued")));
            }
            alpha[a] = b as u32;
            alpha[b] = a as u32;
        }
        if sigma.contains(&u32::MAX) || alpha.contains(&u32::MAX) {
            return Err(structural("every dart needs a triangle and an arc"));
        }
        CombinatorialMap::new(sigma, alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn torus() -> CombinatorialMap {
        CombinatorialMap::from_pairing(&Pairing::new(2, &[(0, 3), (1, 4), (2, 5)]).unwrap())
    }

    #[test]
    fn torus_trace() {
        let m = torus();
        // hand trace: 0 -> 4 -> 2 -> 3 -> 1 -> 5 -> 0
        assert_eq!(m.boundary_walks(), vec![vec![0, 4, 2, 3, 1, 5]]);
        let inv = m.surface_invariants().unwrap();
        assert_eq!((inv.n_punctures, inv.genus), (1, 1));
    }

    #[test]
    fn reversed_triple_edge_is_a_sphere() {
        let p = Pairing::new(2, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        let m = CombinatorialMap::from_pairing_oriented(&p, |v| v == 1);
        let inv = m.surface_invariants().unwrap();
        assert_eq!((inv.n_punctures, inv.genus), (3, 0));
    }

    #[test]
    fn tetrahedron_boundary() {
        let k4 = crate::CubicMultigraph::k4().to_pairing();
        let found: Vec<u32> = (0..16u32)
            .filter(|&mask| {
                let m = CombinatorialMap::from_pairing_oriented(&k4, |v| mask >> v & 1 == 1);
                let inv = m.surface_invariants().unwrap();
                (inv.n_punctures, inv.genus) == (4, 0)
            })
            .collect();
        // a planar rotation and its mirror image
        assert_eq!(found.len(), 2);
        assert_eq!(found[0] ^ found[1], 15);
    }

    #[test]
    fn format_round_trip() {
        let m = torus();
        let text = m.to_string();
        assert_eq!(text, "2\n0 1 2\n3 4 5\n0 3\n1 4\n2 5\n");
        let back: CombinatorialMap = text.parse().unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_string(), text);
        assert_eq!(m.to_pairing().unwrap().to_string(), "2\n0 3\n1 4\n2 5\n");
    }

    #[test]
    fn rejects_bad_maps() {
        assert!("2\n0 1 2\n3 4 5\n0 3\n1 4\n".parse::<CombinatorialMap>().is_err());
        assert!("2\n0 1 2\n2 4 5\n0 3\n1 4\n2 5\n".parse::<CombinatorialMap>().is_err());
        assert!(CombinatorialMap::new(vec![1, 0, 2, 3, 4, 5], vec![3, 4, 5, 0, 1, 2]).is_err());
    }

    #[test]
    fn canonical_code_ignores_dart_labels() {
        let m = torus();
        let perm = [4, 0, 5, 2, 1, 3];
        let r = m.relabeled(&perm);
        assert_eq!(m.canonical_code(), r.canonical_code());
        assert_eq!(m.surface_invariants().unwrap(), r.surface_invariants().unwrap());
        assert_eq!(r.normalized().canonical_code(), m.canonical_code());
    }
}
