//! Closed-form genus values, the vertex/edge/girth genus bounds, and
//! asymptotic growth envelopes evaluated in log space.

use std::f64::consts::{E, PI};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{domain, Error, Result};
use crate::graph::Multigraph;

pub type Rational = Ratio<i64>;

/// Genus bounds from vertex count `p`, edge count `q` and girth `h`, with
/// an optional exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenusReport {
    pub lower: Rational,
    pub upper: Rational,
    pub exact: Option<u64>,
    pub method_notes: String,
}

impl GenusReport {
    /// `max(0, ceil(lower))`: the lower bound tightened to an integer.
    pub fn lower_int(&self) -> u64 {
        self.lower.ceil().to_integer().max(0) as u64
    }

    /// `floor(upper)`.
    pub fn upper_int(&self) -> u64 {
        self.upper.floor().to_integer().max(0) as u64
    }

    pub fn brackets(&self, genus: u64) -> bool {
        self.lower_int() <= genus && genus <= self.upper_int()
    }

    pub fn with_exact(mut self, genus: u64, note: &str) -> Self {
        self.exact = Some(genus);
        if !self.method_notes.is_empty() {
            self.method_notes.push_str("; ");
        }
        self.method_notes.push_str(note);
        self
    }
}

#[derive(Serialize)]
struct ReportRow<'a> {
    lower: String,
    upper: String,
    lower_value: f64,
    upper_value: f64,
    lower_int: u64,
    upper_int: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<u64>,
    method_notes: &'a str,
}

fn ratio_text(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

impl Serialize for GenusReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ReportRow {
            lower: ratio_text(&self.lower),
            upper: ratio_text(&self.upper),
            lower_value: ratio_f64(&self.lower),
            upper_value: ratio_f64(&self.upper),
            lower_int: self.lower_int(),
            upper_int: self.upper_int(),
            exact: self.exact,
            method_notes: &self.method_notes,
        }
        .serialize(s)
    }
}

/// Bounds for a connected simple graph with `p` vertices, `q` edges and
/// girth `h` (`None` for acyclic graphs):
/// `1 + (1 - 2/h) q / 2 - p / 2 <= genus <= 1/2 + q/2 - p/2`.
pub fn betti_genus_bounds(p: u64, q: u64, h: Option<u64>) -> Result<GenusReport> {
    if p == 0 {
        return Err(domain("a graph needs at least one vertex"));
    }
    if q + 1 < p {
        return Err(domain(format!("q = {q} < p - 1 = {}: the graph is disconnected", p - 1)));
    }
    let (p, q) = (p as i64, q as i64);
    let Some(h) = h else {
        if q != p - 1 {
            return Err(domain(format!("an acyclic connected graph has q = p - 1, got p = {p}, q = {q}")));
        }
        return Ok(GenusReport {
            lower: Rational::from_integer(0),
            upper: Rational::from_integer(0),
            exact: None,
            method_notes: "tree".into(),
        });
    };
    if h < 3 {
        return Err(domain(format!("girth {h} < 3: bounds take the simple graph")));
    }
    let h = h as i64;
    let half = Rational::new(1, 2);
    let lower = Rational::from_integer(1) + half * (Rational::from_integer(1) - Rational::new(2, h)) * q - half * p;
    let upper = half + half * q - half * p;
    Ok(GenusReport { lower, upper, exact: None, method_notes: "vertex/edge/girth bounds".into() })
}

/// Bounds for the underlying simple graph of `g`; loops and repeated edges
/// are ignored since they never change the genus.
pub fn genus_bounds_of(g: &Multigraph) -> Result<GenusReport> {
    if !g.is_connected() {
        return Err(domain("genus bounds need a connected graph"));
    }
    let p = g.n_vertices() as u64;
    let q = g.simple_edge_count() as u64;
    betti_genus_bounds(p, q, g.simple_girth().map(|h| h as u64))
}

fn ceil_div(a: i64, b: i64) -> i64 {
    Integer::div_ceil(&a, &b)
}

/// `ceil((n - 3)(n - 4) / 12)` for the complete graph on `n >= 3` vertices.
pub fn genus_complete(n: u64) -> Result<u64> {
    if n < 3 {
        return Err(domain(format!("complete-graph formula needs n >= 3, got {n}")));
    }
    let n = n as i64;
    Ok(ceil_div((n - 3) * (n - 4), 12) as u64)
}

/// `ceil((m - 2)(n - 2) / 4)` for the complete bipartite graph, `m, n >= 2`.
pub fn genus_bipartite(m: u64, n: u64) -> Result<u64> {
    if m < 2 || n < 2 {
        return Err(domain(format!("bipartite formula needs m, n >= 2, got {m}, {n}")));
    }
    Ok(ceil_div((m as i64 - 2) * (n as i64 - 2), 4) as u64)
}

/// Genus of the modular curve graph: a complete graph on `floor(g/2) + 1`
/// vertices with loops, hence `ceil((floor(g/2) - 2)(floor(g/2) - 3) / 12)`.
/// For `g` in {2, 3} the graph is a single edge, which is planar.
pub fn genus_modular_curve(g: u64) -> Result<u64> {
    if g < 2 {
        return Err(domain(format!("the curve graph needs genus at least 2, got {g}")));
    }
    let k = (g / 2) as i64;
    if k < 2 {
        return Ok(0);
    }
    Ok(ceil_div((k - 2) * (k - 3), 12) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvelopeKind {
    /// Growth of the modular pants graph genus, in `g`.
    Pants,
    /// Growth of the modular flip graph genus, in `g`.
    Flip,
    /// Cubic multigraph classes on `N` vertices.
    MultigraphCount,
    /// Simple cubic graph classes on `N` vertices.
    SimpleCount,
    /// One-vertex triangulation classes of the once-punctured genus `g` surface.
    TriangulationCount,
    /// Pairings of `3N` half-edges whose surface has one puncture.
    OnePunctureMatchings,
}

impl EnvelopeKind {
    pub const ALL: [EnvelopeKind; 6] = [
        EnvelopeKind::Pants,
        EnvelopeKind::Flip,
        EnvelopeKind::MultigraphCount,
        EnvelopeKind::SimpleCount,
        EnvelopeKind::TriangulationCount,
        EnvelopeKind::OnePunctureMatchings,
    ];

    pub fn name(self) -> &'static str {
        match self {
            EnvelopeKind::Pants => "pants",
            EnvelopeKind::Flip => "flip",
            EnvelopeKind::MultigraphCount => "multigraph_count",
            EnvelopeKind::SimpleCount => "simple_count",
            EnvelopeKind::TriangulationCount => "triangulation_count",
            EnvelopeKind::OnePunctureMatchings => "one_puncture_matchings",
        }
    }

    /// Whether the argument is a genus (otherwise a vertex count).
    pub fn takes_genus(self) -> bool {
        matches!(self, EnvelopeKind::Pants | EnvelopeKind::Flip | EnvelopeKind::TriangulationCount)
    }

    pub fn shape(self) -> &'static str {
        match self {
            EnvelopeKind::Pants => "(1/sqrt(2g-2)) * ((6g-6)/(4e))^g",
            EnvelopeKind::Flip => "(1/(4g-2)^(3/2)) * ((12g-6)/e)^(2g)",
            EnvelopeKind::MultigraphCount => "e^2/sqrt(pi N) * (3N/(4e))^(N/2)",
            EnvelopeKind::SimpleCount => "1/(e^2 sqrt(pi N)) * (3N/(4e))^(N/2)",
            EnvelopeKind::TriangulationCount => "2/(3 sqrt(pi) (4g-2)^(3/2)) * ((12g-6)/e)^(2g-1)",
            EnvelopeKind::OnePunctureMatchings => "2 sqrt(2)/(3N) * (3N/e)^(3N/2)",
        }
    }
}

impl FromStr for EnvelopeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        EnvelopeKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| domain(format!("unknown envelope kind '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnvelopeConstants {
    pub c1: f64,
    pub c2: f64,
    pub shape: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Envelope {
    pub kind: EnvelopeKind,
    pub arg: u64,
    pub log_value: f64,
    pub constants: Option<EnvelopeConstants>,
}

/// Natural log of the named growth expression at `arg` (a genus or a vertex
/// count, see [`EnvelopeKind::takes_genus`]), with the two-sided constants
/// where they exist.
pub fn envelope(kind: EnvelopeKind, arg: u64) -> Result<Envelope> {
    let x = arg as f64;
    let sqrt_pi = PI.sqrt();
    let (log_value, constants) = match kind {
        EnvelopeKind::Pants => {
            if arg < 2 {
                return Err(domain("pants envelope needs g >= 2"));
            }
            let v = -0.5 * (2.0 * x - 2.0).ln() + x * ((6.0 * x - 6.0) / (4.0 * E)).ln();
            (v, Some((1.0 / (3.0 * E * sqrt_pi), E.powi(3) / sqrt_pi)))
        }
        EnvelopeKind::Flip => {
            if arg < 1 {
                return Err(domain("flip envelope needs g >= 1"));
            }
            let v = -1.5 * (4.0 * x - 2.0).ln() + 2.0 * x * ((12.0 * x - 6.0) / E).ln();
            (v, Some((E / (18.0 * sqrt_pi), E / (6.0 * sqrt_pi))))
        }
        EnvelopeKind::MultigraphCount | EnvelopeKind::SimpleCount => {
            if arg < 2 {
                return Err(domain("count envelopes need N >= 2"));
            }
            let e2 = if kind == EnvelopeKind::MultigraphCount { 2.0 } else { -2.0 };
            let v = e2 - 0.5 * (PI * x).ln() + 0.5 * x * (3.0 * x / (4.0 * E)).ln();
            (v, None)
        }
        EnvelopeKind::TriangulationCount => {
            if arg < 1 {
                return Err(domain("triangulation envelope needs g >= 1"));
            }
            let v = (2.0 / (3.0 * sqrt_pi)).ln() - 1.5 * (4.0 * x - 2.0).ln()
                + (2.0 * x - 1.0) * ((12.0 * x - 6.0) / E).ln();
            (v, None)
        }
        EnvelopeKind::OnePunctureMatchings => {
            if arg < 2 {
                return Err(domain("one-puncture envelope needs N >= 2"));
            }
            let v = (2.0 * 2f64.sqrt() / (3.0 * x)).ln() + 1.5 * x * (3.0 * x / E).ln();
            (v, None)
        }
    };
    let constants = constants.map(|(c1, c2)| EnvelopeConstants { c1, c2, shape: kind.shape().into() });
    Ok(Envelope { kind, arg, log_value, constants })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        let k4 = betti_genus_bounds(4, 6, Some(3)).unwrap();
        assert_eq!((k4.lower, k4.upper), (Rational::from_integer(0), Rational::new(3, 2)));
        assert_eq!((k4.lower_int(), k4.upper_int()), (0, 1));
        let k33 = betti_genus_bounds(6, 9, Some(4)).unwrap();
        assert_eq!((k33.lower, k33.upper), (Rational::new(1, 4), Rational::from_integer(2)));
        assert_eq!(k33.lower_int(), 1);
        let tree = betti_genus_bounds(7, 6, None).unwrap();
        assert_eq!((tree.lower_int(), tree.upper_int()), (0, 0));
        assert!(betti_genus_bounds(7, 5, None).is_err());
        assert!(betti_genus_bounds(7, 5, Some(3)).is_err());
    }

    #[test]
    fn closed_forms() {
        assert_eq!(genus_complete(4).unwrap(), 0);
        assert_eq!(genus_complete(5).unwrap(), 1);
        assert_eq!(genus_complete(7).unwrap(), 1);
        assert_eq!(genus_complete(8).unwrap(), 2);
        assert!(genus_complete(2).is_err());
        assert_eq!(genus_bipartite(2, 9).unwrap(), 0);
        assert_eq!(genus_bipartite(3, 3).unwrap(), 1);
        assert_eq!(genus_bipartite(4, 4).unwrap(), 1);
        assert!(genus_bipartite(1, 4).is_err());
        assert_eq!(genus_modular_curve(4).unwrap(), 0);
        assert_eq!(genus_modular_curve(5).unwrap(), 0);
        assert_eq!(genus_modular_curve(10).unwrap(), 1);
        assert_eq!(genus_modular_curve(2).unwrap(), 0);
        assert!(genus_modular_curve(1).is_err());
    }

    #[test]
    fn envelope_examples() {
        let m = envelope(EnvelopeKind::MultigraphCount, 2).unwrap();
        let direct = (E * E / (2.0 * PI).sqrt() * (6.0 / (4.0 * E))).ln();
        assert!((m.log_value - direct).abs() < 1e-12);
        let c = envelope(EnvelopeKind::Pants, 5).unwrap().constants.unwrap();
        assert!((c.c1 - 1.0 / (3.0 * E * PI.sqrt())).abs() < 1e-15);
        assert!((c.c2 - E.powi(3) / PI.sqrt()).abs() < 1e-13);
        let c = envelope(EnvelopeKind::Flip, 5).unwrap().constants.unwrap();
        assert!((c.c1 - E / (18.0 * PI.sqrt())).abs() < 1e-15);
        assert!((c.c2 - E / (6.0 * PI.sqrt())).abs() < 1e-15);
        assert!("nonsense".parse::<EnvelopeKind>().is_err());
        for k in EnvelopeKind::ALL {
            assert_eq!(k.name().parse::<EnvelopeKind>().unwrap(), k);
        }
    }

    #[test]
    fn report_json() {
        let r = betti_genus_bounds(4, 6, Some(3)).unwrap().with_exact(0, "exhaustive search");
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["upper"], "3/2");
        assert_eq!(v["exact"], 0);
    }
}
