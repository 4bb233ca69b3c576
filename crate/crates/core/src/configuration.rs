//! Configuration model: uniform pairings of `3N` half-edges, exact fiber
//! sizes, and Monte Carlo estimates of circuit and automorphism statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::halfedge::{count_subgraph_copies, CubicMultigraph, Pairing, Pattern};

/// Largest circuit length tracked by the statistics collector.
pub const MAX_STATS_K: usize = 8;

pub(crate) fn check_even(n: usize) -> Result<()> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(domain(format!("N must be even and at least 2, got {n}")));
    }
    Ok(())
}

/// `|Omega_N| = (3N - 1)!!`.
pub fn matching_count(n: usize) -> Result<BigUint> {
    check_even(n)?;
    Ok((1..3 * n as u64).step_by(2).fold(BigUint::one(), |acc, k| acc * k))
}

/// Deterministic generator for `(seed, stream)`; streams are independent
/// so sample `i` never depends on how many samples ran before it.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer, used to derive sub-seeds.
pub fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Uniform pairing: shuffle all half-edges and pair consecutive entries.
pub fn sample_pairing_with(n: usize, rng: &mut ChaCha8Rng) -> Result<Pairing> {
    check_even(n)?;
    let mut halves: Vec<u32> = (0..3 * n as u32).collect();
    halves.shuffle(rng);
    let mut mate = vec![0u32; 3 * n];
    for pair in halves.chunks_exact(2) {
        mate[pair[0] as usize] = pair[1];
        mate[pair[1] as usize] = pair[0];
    }
    Pairing::from_mate(mate)
}

pub fn sample_pairing(n: usize, seed: u64) -> Result<Pairing> {
    sample_pairing_with(n, &mut rng_for(seed, 0))
}

fn factorial(k: u64) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, i| acc * i)
}

/// Number of pairings whose (vertex-labeled) graph is exactly `g`:
/// `6^N / (prod m_uv! * prod (loops(v)! 2^loops(v)))`.
pub fn fiber_size_labeled(g: &CubicMultigraph) -> BigUint {
    let n = g.n_vertices();
    let mut denom = BigUint::one();
    for v in 0..n {
        let l = g.loops(v) as u64;
        denom *= factorial(l) * (BigUint::one() << l);
        for &(w, m) in g.neighbors(v) {
            if w as usize > v {
                denom *= factorial(m as u64);
            }
        }
    }
    BigUint::from(6u32).pow(n as u32) / denom
}

/// Number of pairings whose graph is isomorphic to `g`.
pub fn fiber_size_class(g: &CubicMultigraph) -> BigUint {
    factorial(g.n_vertices() as u64) / g.automorphism_count() * fiber_size_labeled(g)
}

/// `lambda_k = 2^k / (2k)`, the limiting Poisson mean of `X_{N,k}`.
pub fn poisson_mean(k: usize) -> f64 {
    2f64.powi(k as i32) / (2.0 * k as f64)
}

#[derive(Debug, Clone)]
pub struct StatsOptions {
    pub k_max: usize,
    pub automorphisms: bool,
    pub pattern: Option<Pattern>,
}

impl StatsOptions {
    pub fn circuits(k_max: usize) -> Self {
        StatsOptions { k_max, automorphisms: false, pattern: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleStats {
    pub n_vertices: usize,
    pub n_samples: u64,
    pub seed: u64,
    pub one_puncture: bool,
    pub circuit_means: BTreeMap<usize, f64>,
    pub circuit_histograms: BTreeMap<usize, Vec<u64>>,
    pub poisson_means: BTreeMap<usize, f64>,
    pub automorphism_fraction: Option<f64>,
    pub subgraph_copy_mean: Option<f64>,
}

// Integer partial sums; merging is exact, so the result does not depend on
// how samples are split across workers.
#[derive(Debug, Clone, Default)]
struct Partial {
    samples: u64,
    hist: Vec<Vec<u64>>,
    with_aut: u64,
    copies: u64,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.samples += other.samples;
        self.with_aut += other.with_aut;
        self.copies += other.copies;
        if self.hist.len() < other.hist.len() {
            self.hist.resize(other.hist.len(), Vec::new());
        }
        for (k, h) in other.hist.into_iter().enumerate() {
            let mine = &mut self.hist[k];
            if mine.len() < h.len() {
                mine.resize(h.len(), 0);
            }
            for (i, c) in h.into_iter().enumerate() {
                mine[i] += c;
            }
        }
        self
    }
}

impl SampleStats {
    /// Collect statistics over `n_samples` pairings produced by `sampler`,
    /// which receives the sample index.
    pub fn collect<F>(n: usize, n_samples: u64, seed: u64, one_puncture: bool, opts: &StatsOptions, sampler: F) -> Result<Self>
    where
        F: Fn(u64) -> Result<Pairing> + Sync,
    {
        if opts.k_max > MAX_STATS_K {
            return Err(domain(format!("k_max {} exceeds {MAX_STATS_K}", opts.k_max)));
        }
        let k_max = opts.k_max;
        let partial = (0..n_samples)
            .into_par_iter()
            .map(|i| -> Result<Partial> {
                let g = CubicMultigraph::from_pairing(&sampler(i)?);
                let mut p = Partial { samples: 1, hist: vec![Vec::new(); k_max + 1], ..Default::default() };
                for k in 1..=k_max {
                    let x = g.count_circuits(k) as usize;
                    p.hist[k] = vec![0; x + 1];
                    p.hist[k][x] = 1;
                }
                if opts.automorphisms && g.has_nontrivial_automorphism() {
                    p.with_aut = 1;
                }
                if let Some(pat) = &opts.pattern {
                    p.copies = count_subgraph_copies(&g, pat);
                }
                Ok(p)
            })
            .try_reduce(Partial::default, |a, b| Ok(a.merge(b)))?;

        let mut stats = SampleStats {
            n_vertices: n,
            n_samples,
            seed,
            one_puncture,
            circuit_means: BTreeMap::new(),
            circuit_histograms: BTreeMap::new(),
            poisson_means: BTreeMap::new(),
            automorphism_fraction: None,
            subgraph_copy_mean: None,
        };
        let denom = n_samples.max(1) as f64;
        for k in 1..=k_max {
            let hist = partial.hist.get(k).cloned().unwrap_or_default();
            let total: u64 = hist.iter().enumerate().map(|(x, &c)| x as u64 * c).sum();
            stats.circuit_means.insert(k, total as f64 / denom);
            stats.circuit_histograms.insert(k, hist);
            stats.poisson_means.insert(k, poisson_mean(k));
        }
        if opts.automorphisms {
            stats.automorphism_fraction = Some(partial.with_aut as f64 / denom);
        }
        if opts.pattern.is_some() {
            stats.subgraph_copy_mean = Some(partial.copies as f64 / denom);
        }
        Ok(stats)
    }

    /// CSV with columns `k, count_0..count_M, mean, poisson_mean`, where `M`
    /// is the largest value observed for any `k`.
    pub fn to_csv(&self) -> String {
        let width = self.circuit_histograms.values().map(Vec::len).max().unwrap_or(0);
        let mut out = String::from("k");
        for i in 0..width {
            write!(out, ",count_{i}").unwrap();
        }
        out.push_str(",mean,poisson_mean\n");
        for (k, hist) in &self.circuit_histograms {
            write!(out, "{k}").unwrap();
            for i in 0..width {
                write!(out, ",{}", hist.get(i).copied().unwrap_or(0)).unwrap();
            }
            writeln!(out, ",{},{}", self.circuit_means[k], self.poisson_means[k]).unwrap();
        }
        out
    }
}

/// Empirical means and histograms of `X_{N,1..k_max}` under the uniform
/// configuration model.
pub fn estimate_circuit_stats(n: usize, k_max: usize, n_samples: u64, seed: u64) -> Result<SampleStats> {
    check_even(n)?;
    SampleStats::collect(n, n_samples, seed, false, &StatsOptions::circuits(k_max), |i| {
        sample_pairing_with(n, &mut rng_for(seed, i))
    })
}

/// Fraction of sampled graphs with a nontrivial vertex automorphism.
pub fn estimate_automorphism_fraction(n: usize, n_samples: u64, seed: u64) -> Result<f64> {
    check_even(n)?;
    let opts = StatsOptions { k_max: 0, automorphisms: true, pattern: None };
    let stats = SampleStats::collect(n, n_samples, seed, false, &opts, |i| sample_pairing_with(n, &mut rng_for(seed, i)))?;
    Ok(stats.automorphism_fraction.unwrap_or(0.0))
}

/// Mean number of copies of `pattern` per sampled graph.
pub fn estimate_subgraph_copy_mean(n: usize, pattern: &Pattern, n_samples: u64, seed: u64) -> Result<f64> {
    check_even(n)?;
    let opts = StatsOptions { k_max: 0, automorphisms: false, pattern: Some(pattern.clone()) };
    let stats = SampleStats::collect(n, n_samples, seed, false, &opts, |i| sample_pairing_with(n, &mut rng_for(seed, i)))?;
    Ok(stats.subgraph_copy_mean.unwrap_or(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::halfedge::for_each_matching;

    #[test]
    fn matching_counts() {
        assert_eq!(matching_count(2).unwrap(), BigUint::from(15u32));
        assert_eq!(matching_count(4).unwrap(), BigUint::from(10395u32));
        assert_eq!(matching_count(6).unwrap(), BigUint::from(34459425u32));
        assert!(matching_count(3).is_err());
        assert!(matching_count(0).is_err());
    }

    // Oracle: tally labeled graphs over all pairings.
    fn labeled_fiber_oracle(n: usize, target: &CubicMultigraph) -> u64 {
        let mut count = 0;
        for_each_matching(3 * n, |mate| {
            if CubicMultigraph::from_mate_unchecked(mate.to_vec()) == *target {
                count += 1;
            }
        });
        count
    }

    #[test]
    fn fiber_sizes_match_brute_force() {
        let t = CubicMultigraph::triple_edge();
        let d = CubicMultigraph::dumbbell();
        assert_eq!(labeled_fiber_oracle(2, &t), 6);
        assert_eq!(labeled_fiber_oracle(2, &d), 9);
        assert_eq!(fiber_size_labeled(&t), BigUint::from(6u32));
        assert_eq!(fiber_size_labeled(&d), BigUint::from(9u32));
        let k4 = CubicMultigraph::k4();
        assert_eq!(labeled_fiber_oracle(4, &k4), 1296);
        assert_eq!(fiber_size_labeled(&k4), BigUint::from(1296u32));
        assert_eq!(fiber_size_class(&t), BigUint::from(6u32));
        assert_eq!(fiber_size_class(&d), BigUint::from(9u32));
    }

    #[test]
    fn sampler_is_deterministic() {
        assert_eq!(sample_pairing(10, 42).unwrap(), sample_pairing(10, 42).unwrap());
        assert_ne!(sample_pairing(10, 42).unwrap(), sample_pairing(10, 43).unwrap());
        assert!(sample_pairing(5, 1).is_err());
    }

    #[test]
    fn n2_exact_mean_of_loops() {
        // exact enumeration: dumbbell class holds 9 of 15 pairings with 2 loops each
        let mut loops = 0;
        let mut count = 0;
        for_each_matching(6, |mate| {
            loops += CubicMultigraph::from_mate_unchecked(mate.to_vec()).count_circuits(1);
            count += 1;
        });
        assert_eq!((loops, count), (18, 15));
        assert!((loops as f64 / count as f64 - 18.0 / 15.0).abs() < 1e-15);
    }

    #[test]
    fn n2_graphs_always_have_automorphisms() {
        assert_eq!(estimate_automorphism_fraction(2, 200, 5).unwrap(), 1.0);
    }

    #[test]
    fn stats_are_consistent_and_csv_shaped() {
        let s = estimate_circuit_stats(20, 3, 500, 11).unwrap();
        for k in 1..=3 {
            let h = &s.circuit_histograms[&k];
            assert_eq!(h.iter().sum::<u64>(), 500);
            let mean = h.iter().enumerate().map(|(x, &c)| x as f64 * c as f64).sum::<f64>() / 500.0;
            assert!((mean - s.circuit_means[&k]).abs() < 1e-12);
        }
        let csv = s.to_csv();
        let header = csv.lines().next().unwrap();
        assert!(header.starts_with("k,count_0"));
        assert!(header.ends_with(",mean,poisson_mean"));
        assert_eq!(csv.lines().count(), 4);
    }

    #[test]
    fn poisson_reference_means() {
        assert_eq!(poisson_mean(1), 1.0);
        assert_eq!(poisson_mean(2), 1.0);
        assert!((poisson_mean(3) - 4.0 / 3.0).abs() < 1e-15);
    }
}
