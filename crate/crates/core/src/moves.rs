//! Elementary moves on cubic multigraphs and flips on triangulations.

use serde::{Deserialize, Serialize};

use crate::error::{domain, structural, Error, Result};
use crate::halfedge::CubicMultigraph;
use crate::ribbon::CombinatorialMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MoveKind {
    RewireA,
    RewireB,
    LoopMove,
    Flip,
}

#[derive(Debug, Clone)]
pub struct MoveOutcome<T> {
    pub result: T,
    /// Half-edge pair of the edge, or dart pair of the arc, with `site.0 < site.1`.
    pub site: (usize, usize),
    pub kind: MoveKind,
    pub is_self: Option<bool>,
}

/// The two other half-edges at the vertex owning `h`, in increasing order.
fn other_slots(h: usize) -> (usize, usize) {
    let base = 3 * (h / 3);
    let mut it = (base..base + 3).filter(|&x| x != h);
    (it.next().unwrap(), it.next().unwrap())
}

/// All elementary moves. For an edge with half-edges `h1` at `u` and `h2` at
/// `v`, let `a < b` be the other slots at `u` and `c < d` those at `v`.
/// Variant A exchanges slots `b` and `c`, so `u` keeps the attachments of
/// `a` and `c`; variant B exchanges `b` and `d`. Loops give a loop-move that
/// leaves the graph unchanged.
pub fn pants_move_neighbors(g: &CubicMultigraph) -> Result<Vec<MoveOutcome<CubicMultigraph>>> {
    if !g.is_connected() {
        return Err(domain("elementary moves need a connected cubic multigraph"));
    }
    let pairing = g.to_pairing();
    let own = g.canonical_code();
    let mut out = Vec::new();
    for (h1, h2) in g.half_edge_pairs() {
        if h1 / 3 == h2 / 3 {
            out.push(MoveOutcome { result: g.clone(), site: (h1, h2), kind: MoveKind::LoopMove, is_self: Some(true) });
            continue;
        }
        let (_, b) = other_slots(h1);
        let (c, d) = other_slots(h2);
        for (kind, y) in [(MoveKind::RewireA, c), (MoveKind::RewireB, d)] {
            let result = CubicMultigraph::from_pairing(&pairing.with_swapped(b, y));
            let is_self = Some(result.canonical_code() == own);
            out.push(MoveOutcome { result, site: (h1, h2), kind, is_self });
        }
    }
    Ok(out)
}

/// Replace the arc `{e, e'}` by the other diagonal of the quadrilateral formed
/// by its two triangles `(e, p, q)` and `(e', r, s)`. The result has
/// triangles `(e, s, p)` and `(e', q, r)` with `e` still glued to `e'`.
pub fn flip(m: &CombinatorialMap, arc: (usize, usize)) -> Result<CombinatorialMap> {
    let (e, f) = arc;
    if e >= m.n_darts() || m.alpha(e) != f {
        return Err(structural(format!("({e}, {f}) is not an arc of the map")));
    }
    let (p, r) = (m.sigma(e), m.sigma(f));
    let (q, s) = (m.sigma(p), m.sigma(r));
    if p == f || q == f {
        return Err(Error::UnflippableArc(e.min(f), e.max(f)));
    }
    let mut sigma = m.sigma_slice().to_vec();
    sigma[e] = s as u32;
    sigma[s] = p as u32;
    sigma[p] = e as u32;
    sigma[f] = q as u32;
    sigma[q] = r as u32;
    sigma[r] = f as u32;
    Ok(CombinatorialMap::new_unchecked(sigma, m.alpha_slice().to_vec()))
}

/// One flip per arc, in arc order.
pub fn flip_neighbors(m: &CombinatorialMap) -> Result<Vec<MoveOutcome<CombinatorialMap>>> {
    let own = m.canonical_code();
    m.arcs()
        .into_iter()
        .map(|site| {
            let result = flip(m, site)?;
            let is_self = Some(result.canonical_code() == own);
            Ok(MoveOutcome { result, site, kind: MoveKind::Flip, is_self })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ribbon::sample_one_puncture;

    fn codes(out: &[MoveOutcome<CubicMultigraph>]) -> Vec<Vec<u8>> {
        out.iter().map(|o| o.result.canonical_code().to_vec()).collect()
    }

    #[test]
    fn triple_edge_moves() {
        let t = CubicMultigraph::triple_edge();
        let out = pants_move_neighbors(&t).unwrap();
        assert_eq!(out.len(), 6);
        let db = CubicMultigraph::dumbbell();
        for site in out.chunks(2) {
            let mut got = codes(site);
            got.sort();
            let mut want = vec![db.canonical_code().to_vec(), t.canonical_code().to_vec()];
            want.sort();
            assert_eq!(got, want);
        }
    }

    #[test]
    fn dumbbell_moves() {
        let db = CubicMultigraph::dumbbell();
        let out = pants_move_neighbors(&db).unwrap();
        assert_eq!(out.len(), 2 + 2);
        let t = CubicMultigraph::triple_edge();
        for o in &out {
            match o.kind {
                MoveKind::LoopMove => assert_eq!(o.result, db),
                _ => {
                    assert_eq!(o.result.canonical_code(), t.canonical_code());
                    assert_eq!(o.is_self, Some(false));
                }
            }
        }
    }

    #[test]
    fn outcome_count_and_cubicness() {
        for g in [CubicMultigraph::k4(), CubicMultigraph::prism(), CubicMultigraph::petersen()] {
            let out = pants_move_neighbors(&g).unwrap();
            assert_eq!(out.len(), 3 * g.n_vertices());
            assert!(out.iter().all(|o| o.result.n_vertices() == g.n_vertices()));
        }
        let two = CubicMultigraph::triple_edge().disjoint_union(&CubicMultigraph::dumbbell());
        assert!(matches!(pants_move_neighbors(&two), Err(Error::Domain(_))));
    }

    #[test]
    fn torus_flips_are_self_moves() {
        let m = sample_one_puncture(2, 0, 1000).unwrap();
        let out = flip_neighbors(&m).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.iter().all(|o| o.is_self == Some(true)));
    }

    #[test]
    fn flips_preserve_surface_and_invert() {
        for seed in 0..100 {
            let m = sample_one_puncture(6, seed, 1_000_000).unwrap();
            let before = m.surface_invariants().unwrap();
            let out = flip_neighbors(&m).unwrap();
            assert_eq!(out.len(), 9);
            for o in &out {
                assert_eq!(o.result.surface_invariants().unwrap(), before);
                let back = flip(&o.result, o.site).unwrap();
                assert_eq!(back.canonical_code(), m.canonical_code());
            }
        }
    }

    #[test]
    fn unflippable_arc() {
        // the dumbbell's loops glue two sides of the same triangle
        let m = CombinatorialMap::from_pairing(&CubicMultigraph::dumbbell().to_pairing());
        let inside = (0..m.n_darts()).find(|&d| m.alpha(d) / 3 == d / 3).unwrap();
        let arc = (inside, m.alpha(inside));
        assert!(matches!(flip(&m, arc), Err(Error::UnflippableArc(_, _))));
        assert!(matches!(flip(&m, (0, 0)), Err(Error::Structural(_))));
    }
}
