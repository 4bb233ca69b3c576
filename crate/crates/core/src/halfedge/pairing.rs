use std::fmt;
use std::str::FromStr;

use crate::error::{structural, Error, Result};

/// A perfect matching on the `3N` half-edges of `N` cubic vertices.
///
/// Half-edge `h` belongs to vertex `h / 3`. Internally stored as the mate
/// involution, which makes every pair query O(1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pairing {
    n_vertices: usize,
    mate: Vec<u32>,
}

impl Pairing {
    pub fn new(n_vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if n_vertices < 2 || !n_vertices.is_multiple_of(2) {
            return Err(structural(format!("N must be even and at least 2, got {n_vertices}")));
        }
        let h = 3 * n_vertices;
        if pairs.len() != h / 2 {
            return Err(structural(format!("expected {} pairs, got {}", h / 2, pairs.len())));
        }
        let mut mate = vec![u32::MAX; h];
        for &(a, b) in pairs {
            if a >= h || b >= h {
                return Err(structural(format!("half-edge index out of range in pair ({a}, {b})")));
            }
            if a == b {
                return Err(structural(format!("half-edge {a} paired with itself")));
            }
            if mate[a] != u32::MAX || mate[b] != u32::MAX {
                return Err(structural(format!("duplicate half-edge in pair ({a}, {b})")));
            }
            mate[a] = b as u32;
            mate[b] = a as u32;
        }
        Ok(Pairing { n_vertices, mate })
    }

    /// Build from a mate involution. Checks that it is fixed-point free.
    pub fn from_mate(mate: Vec<u32>) -> Result<Self> {
        let h = mate.len();
        if h == 0 || !h.is_multiple_of(6) {
            return Err(structural(format!("half-edge count {h} is not 3N for even N")));
        }
        for (a, &b) in mate.iter().enumerate() {
            let b = b as usize;
            if b >= h || b == a || mate[b] as usize != a {
                return Err(structural(format!("mate array is not a fixed-point-free involution at {a}")));
            }
        }
        Ok(Pairing { n_vertices: h / 3, mate })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_half_edges(&self) -> usize {
        self.mate.len()
    }

    pub fn mate(&self, h: usize) -> usize {
        self.mate[h] as usize
    }

    pub fn mates(&self) -> &[u32] {
        &self.mate
    }

    /// Pairs `(a, b)` with `a < b`, sorted by `a`.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.mate
            .iter()
            .enumerate()
            .filter(|&(a, &b)| a < b as usize)
            .map(|(a, &b)| (a, b as usize))
            .collect()
    }

    /// Relabel half-edges by swapping `x` and `y` and return the result.
    pub fn with_swapped(&self, x: usize, y: usize) -> Pairing {
        let swap = |h: usize| if h == x { y } else if h == y { x } else { h };
        let mut mate = vec![0u32; self.mate.len()];
        for (a, &b) in self.mate.iter().enumerate() {
            mate[swap(a)] = swap(b as usize) as u32;
        }
        Pairing { n_vertices: self.n_vertices, mate }
    }
}

impl fmt::Display for Pairing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.n_vertices)?;
        for (a, b) in self.pairs() {
            writeln!(f, "{a} {b}")?;
        }
        Ok(())
    }
}

impl FromStr for Pairing {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lines = s.lines().map(str::trim).filter(|l| !l.is_empty());
        let n: usize = lines
            .next()
            .ok_or_else(|| structural("empty pairing text"))?
            .parse()
            .map_err(|_| structural("first line must be the vertex count"))?;
        let mut pairs = Vec::new();
        for line in lines {
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => pairs.push((a, b)),
                _ => return Err(structural(format!("bad pair line '{line}'"))),
            }
        }
        Pairing::new(n, &pairs)
    }
}

/// Visit every perfect matching on `0..2m` elements as a mate array.
pub(crate) fn for_each_matching(n_points: usize, mut f: impl FnMut(&[u32])) {
    let mut mate = vec![u32::MAX; n_points];
    fn rec(mate: &mut [u32], f: &mut impl FnMut(&[u32])) {
        let Some(a) = mate.iter().position(|&m| m == u32::MAX) else {
            f(mate);
            return;
        };
        for b in a + 1..mate.len() {
            if mate[b] == u32::MAX {
                mate[a] = b as u32;
                mate[b] = a as u32;
                rec(mate, f);
                mate[a] = u32::MAX;
                mate[b] = u32::MAX;
            }
        }
    }
    rec(&mut mate, &mut f);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_missing() {
        assert!(Pairing::new(2, &[(0, 1), (1, 2), (3, 4)]).is_err());
        assert!(Pairing::new(2, &[(0, 1), (2, 3)]).is_err());
        assert!(Pairing::new(3, &[(0, 1), (2, 3), (4, 5), (6, 7)]).is_err());
        assert!(Pairing::new(2, &[(0, 6), (1, 2), (3, 4)]).is_err());
    }

    #[test]
    fn text_round_trip() {
        let p = Pairing::new(2, &[(3, 0), (1, 4), (2, 5)]).unwrap();
        let text = p.to_string();
        assert_eq!(text, "2\n0 3\n1 4\n2 5\n");
        let q: Pairing = text.parse().unwrap();
        assert_eq!(p, q);
        assert_eq!(q.to_string(), text);
    }

    #[test]
    fn matching_enumeration_counts() {
        let mut c = 0;
        for_each_matching(6, |_| c += 1);
        assert_eq!(c, 15);
        let mut c = 0;
        for_each_matching(12, |_| c += 1);
        assert_eq!(c, 10395);
    }
}
