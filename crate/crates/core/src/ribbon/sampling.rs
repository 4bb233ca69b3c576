use rayon::prelude::*;

use crate::configuration::{mix_seed, rng_for, sample_pairing_with, SampleStats, StatsOptions};
use crate::error::{domain, Error, Result};
use crate::halfedge::Pairing;

use super::CombinatorialMap;

/// Default rejection budget for one-puncture sampling.
pub const DEFAULT_MAX_ATTEMPTS: u64 = 1_000_000;

const BATCH: u64 = 256;

pub(crate) fn check_one_puncture_size(n: usize) -> Result<usize> {
    if n < 2 || n % 4 != 2 {
        return Err(domain(format!(
            "N = {n} is not 2 mod 4; one-puncture surfaces need N = 4g - 2 triangles"
        )));
    }
    Ok((n + 2) / 4)
}

fn punctures_of(p: &Pairing) -> usize {
    CombinatorialMap::from_pairing(p).n_punctures()
}

/// Uniform pairing whose glued surface has a single puncture. Attempt `j`
/// draws from stream `j` of `seed`, and the first success in attempt order
/// is returned, so the result does not depend on the thread count.
pub fn sample_one_puncture_pairing(n: usize, seed: u64, max_attempts: u64) -> Result<Pairing> {
    check_one_puncture_size(n)?;
    let mut start = 0;
    while start < max_attempts {
        let end = (start + BATCH).min(max_attempts);
        let hit = (start..end).into_par_iter().find_map_first(|j| {
            let p = sample_pairing_with(n, &mut rng_for(seed, j)).ok()?;
            (punctures_of(&p) == 1).then_some(p)
        });
        if let Some(p) = hit {
            return Ok(p);
        }
        start = end;
    }
    Err(Error::RetryBudget { attempts: max_attempts })
}

pub fn sample_one_puncture(n: usize, seed: u64, max_attempts: u64) -> Result<CombinatorialMap> {
    sample_one_puncture_pairing(n, seed, max_attempts).map(|p| CombinatorialMap::from_pairing(&p))
}

/// Circuit statistics over pairings conditioned on one puncture. Sample `i`
/// is drawn by rejection from sub-seed `mix_seed(seed, i)`.
pub fn one_puncture_stats(n: usize, n_samples: u64, seed: u64, max_attempts: u64, opts: &StatsOptions) -> Result<SampleStats> {
    check_one_puncture_size(n)?;
    SampleStats::collect(n, n_samples, seed, true, opts, |i| {
        sample_one_puncture_pairing(n, mix_seed(seed, i), max_attempts)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_follows_size() {
        for (n, g) in [(2, 1), (6, 2), (10, 3)] {
            let m = sample_one_puncture(n, 11, DEFAULT_MAX_ATTEMPTS).unwrap();
            let inv = m.surface_invariants().unwrap();
            assert_eq!((inv.n_punctures, inv.genus), (1, g));
        }
    }

    #[test]
    fn conditioned_stats_have_no_loops_at_genus_one() {
        let s = one_puncture_stats(2, 50, 1, DEFAULT_MAX_ATTEMPTS, &StatsOptions::circuits(2)).unwrap();
        // the only one-puncture graph at N = 2 is the triple edge
        assert_eq!(s.circuit_means[&1], 0.0);
        assert_eq!(s.circuit_means[&2], 3.0);
        assert!(s.one_puncture);
    }

    #[test]
    fn wrong_size_is_domain_error() {
        assert!(matches!(sample_one_puncture(4, 1, 10), Err(Error::Domain(_))));
        assert!(matches!(sample_one_puncture(3, 1, 10), Err(Error::Domain(_))));
    }

    #[test]
    fn tiny_budget_runs_out() {
        // one-puncture pairings are rare at N = 102
        let r = sample_one_puncture(102, 5, 1);
        assert!(matches!(r, Err(Error::RetryBudget { attempts: 1 })) || r.is_ok());
        assert_eq!(
            sample_one_puncture(10, 3, 500).unwrap(),
            sample_one_puncture(10, 3, 500).unwrap()
        );
    }
}
