//! Degree probes: iterate the reduced map on a random line with exact
//! coefficients, stripping the common factor of the tuple after every step.

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::field::{random_prime, Field, PrimeField, Rationals};
use crate::arith::upoly::{max_degree, tuple_content_reduce, UPoly};
use crate::degree::record::{DegreeRecord, Method};
use crate::error::{Error, Result};
use crate::maps::matrix::{proj_eq, Matrix, RandomElem};
use crate::maps::tuple::{khat_tuple_cofactor, khat_tuple_interpolate, line_tuple, tuple_is_zero};

/// Number of fresh lines tried before a run gives up.
pub const MAX_RESAMPLES: usize = 5;

/// Coefficient domain of a probe.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldConfig {
    /// Random primes with the given bit length (61..=63), one per run.
    Modular { prime_bits: u32 },
    /// Exact rationals; slow, meant for small certification runs.
    Rational,
}

impl Default for FieldConfig {
    fn default() -> Self {
        FieldConfig::Modular { prime_bits: 61 }
    }
}

/// How one application of the reduced map to a tuple is computed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TupleRoute {
    /// Pointwise evaluation at consecutive integers, then interpolation.
    #[default]
    Interpolation,
    /// Reciprocal-numerator products, signed minors, exact division.
    Cofactor,
}

/// Outcome of one independent run on one line.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeRun {
    pub seed: u64,
    pub prime: Option<u64>,
    /// Lines discarded because the iterate vanished identically.
    pub resamples: usize,
    /// `degrees[n]` for `n = 0..=n_max`.
    pub degrees: Vec<usize>,
    /// Degree of the tuple before content removal, per step (index `n - 1`).
    pub unreduced: Vec<usize>,
    /// Degree of the removed common factor, per step.
    pub removed: Vec<usize>,
}

/// Records plus the individual runs behind them.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeOutcome {
    pub records: Vec<DegreeRecord>,
    pub runs: Vec<ProbeRun>,
}

/// SplitMix64 step, used to derive per-run seeds from a root seed.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of run `k` under root seed `root`.
pub fn derive_seed(root: u64, k: u64) -> u64 {
    splitmix64(root ^ splitmix64(k))
}

fn apply<F: Field>(tuple: &[UPoly<F>], route: TupleRoute) -> Result<Vec<UPoly<F>>> {
    match route {
        TupleRoute::Interpolation => khat_tuple_interpolate(tuple),
        TupleRoute::Cofactor => khat_tuple_cofactor(tuple),
    }
}

/// Iterates along the line `a + t b`; `None` when an iterate vanishes identically.
fn iterate_line<F: Field>(
    a: &Matrix<F>,
    b: &Matrix<F>,
    n_max: usize,
    route: TupleRoute,
) -> Result<Option<(Vec<usize>, Vec<usize>, Vec<usize>)>> {
    let mut tuple = line_tuple(a, b)?;
    let mut degrees = vec![max_degree(&tuple).unwrap_or(0)];
    let mut unreduced = Vec::with_capacity(n_max);
    let mut removed = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        let next = match apply(&tuple, route) {
            Ok(t) => t,
            Err(Error::Degenerate(_)) => return Ok(None),
            Err(e) => return Err(e),
        };
        if tuple_is_zero(&next) {
            return Ok(None);
        }
        unreduced.push(max_degree(&next).unwrap_or(0));
        let (reduced, r) = tuple_content_reduce(&next)?;
        removed.push(r);
        degrees.push(max_degree(&reduced).unwrap_or(0));
        tuple = reduced;
    }
    Ok(Some((degrees, unreduced, removed)))
}

fn run_in_field<F: RandomElem>(
    field: F,
    q: usize,
    n_max: usize,
    route: TupleRoute,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, Vec<usize>, Vec<usize>, Vec<usize>)> {
    for attempt in 0..=MAX_RESAMPLES {
        let a = Matrix::random_nonzero(field.clone(), q, rng);
        let b = Matrix::random_nonzero(field.clone(), q, rng);
        if proj_eq(&a, &b) {
            continue;
        }
        if let Some((d, u, r)) = iterate_line(&a, &b, n_max, route)? {
            return Ok((attempt, d, u, r));
        }
    }
    Err(Error::ProbeFailure(format!(
        "iterate vanished on {} consecutive lines (q = {q})",
        MAX_RESAMPLES + 1
    )))
}

/// One independent run: draws the prime (if modular) and the line from `seed`.
pub fn probe_run(
    q: usize,
    n_max: usize,
    seed: u64,
    field: FieldConfig,
    route: TupleRoute,
    avoid_prime: Option<u64>,
) -> Result<ProbeRun> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (prime, (resamples, degrees, unreduced, removed)) = match field {
        FieldConfig::Modular { prime_bits } => {
            let mut f = random_prime(prime_bits, &mut rng)?;
            while Some(f.modulus()) == avoid_prime {
                f = random_prime(prime_bits, &mut rng)?;
            }
            (Some(f.modulus()), run_in_field::<PrimeField>(f, q, n_max, route, &mut rng)?)
        }
        FieldConfig::Rational => (None, run_in_field(Rationals, q, n_max, route, &mut rng)?),
    };
    Ok(ProbeRun {
        seed,
        prime,
        resamples,
        degrees,
        unreduced,
        removed,
    })
}

fn run_many(
    q: usize,
    n_max: usize,
    seeds: &[u64],
    field: FieldConfig,
    route: TupleRoute,
) -> Vec<Result<ProbeRun>> {
    std::thread::scope(|s| {
        let handles: Vec<_> = seeds
            .iter()
            .map(|&seed| s.spawn(move || probe_run(q, n_max, seed, field, route, None)))
            .collect();
        handles.into_iter().map(|h| h.join().expect("probe thread panicked")).collect()
    })
}

/// Two-run agreement protocol, escalating to a third run on any mismatch.
///
/// The two runs use different lines and different primes. Each reported degree
/// is backed by at least two runs that produced it.
pub fn probe_degrees_detailed(
    q: usize,
    n_max: usize,
    seed: u64,
    field: FieldConfig,
    route: TupleRoute,
) -> Result<ProbeOutcome> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    let seeds = [derive_seed(seed, 0), derive_seed(seed, 1)];
    let mut runs = run_many(q, n_max, &seeds, field, route)
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    if runs[0].prime.is_some() && runs[0].prime == runs[1].prime {
        runs[1] = probe_run(q, n_max, seeds[1], field, route, runs[0].prime)?;
    }
    if runs[0].degrees != runs[1].degrees {
        runs.push(probe_run(q, n_max, derive_seed(seed, 2), field, route, None)?);
    }
    let mut records = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut best: Option<(usize, Vec<&ProbeRun>)> = None;
        for r in &runs {
            let d = r.degrees[n];
            let agreeing: Vec<&ProbeRun> = runs.iter().filter(|x| x.degrees[n] == d).collect();
            if agreeing.len() >= 2 && best.as_ref().map_or(true, |(bd, _)| d > *bd) {
                best = Some((d, agreeing));
            }
        }
        let (degree, agreeing) = best.ok_or_else(|| {
            Error::ProbeFailure(format!(
                "no two runs agree at q = {q}, n = {n}: {:?}",
                runs.iter().map(|r| r.degrees[n]).collect::<Vec<_>>()
            ))
        })?;
        records.push(DegreeRecord {
            q,
            n,
            degree: degree as u128,
            method: Method::Probe,
            seeds: agreeing.iter().map(|r| r.seed).collect(),
            primes: agreeing.iter().filter_map(|r| r.prime).collect(),
            agreement: agreeing.len(),
        });
    }
    Ok(ProbeOutcome { records, runs })
}

/// Measured `deg(K^n)` for `n = 0..=n_max` (interpolation route).
pub fn probe_degrees(q: usize, n_max: usize, seed: u64, field: FieldConfig) -> Result<Vec<DegreeRecord>> {
    Ok(probe_degrees_detailed(q, n_max, seed, field, TupleRoute::Interpolation)?.records)
}

/// Crude growth-rate diagnostics from a degree sequence.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthEstimate {
    pub n: usize,
    /// `d_n / d_(n-1)` at the largest `n`.
    pub last_ratio: String,
    pub last_ratio_approx: f64,
    /// `(d_n - d_(n-1)) / (d_(n-1) - d_(n-2))`; 1 on a constant tail.
    pub fitted_ratio: Option<String>,
    pub fitted_ratio_approx: Option<f64>,
}

/// Growth diagnostics from at least three consecutive records. Diagnostic only:
/// the certified value comes from the Picard action.
pub fn estimate_delta(records: &[DegreeRecord]) -> Result<GrowthEstimate> {
    let mut rs: Vec<&DegreeRecord> = records.iter().collect();
    rs.sort_by_key(|r| r.n);
    if rs.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "need at least 3 records, got {}",
            rs.len()
        )));
    }
    let tail = &rs[rs.len() - 3..];
    if tail[1].n != tail[0].n + 1 || tail[2].n != tail[1].n + 1 || tail.iter().any(|r| r.q != tail[0].q) {
        return Err(Error::InsufficientData("last three records are not consecutive".into()));
    }
    let d = |k: usize| BigRational::from_integer(tail[k].degree.into());
    if tail[1].degree == 0 {
        return Err(Error::InsufficientData("zero degree in the sequence".into()));
    }
    let last = d(2) / d(1);
    let num = d(2) - d(1);
    let den = d(1) - d(0);
    let fitted = if den != BigRational::from_integer(0.into()) {
        Some(num / den)
    } else if num == BigRational::from_integer(0.into()) {
        Some(BigRational::from_integer(1.into()))
    } else {
        None
    };
    let fmt = crate::arith::field::format_rational;
    Ok(GrowthEstimate {
        n: tail[2].n,
        last_ratio: fmt(&last),
        last_ratio_approx: last.to_f64().unwrap_or(f64::NAN),
        fitted_ratio_approx: fitted.as_ref().and_then(|f| f.to_f64()),
        fitted_ratio: fitted.as_ref().map(fmt),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn recs(q: usize, ds: &[u128]) -> Vec<DegreeRecord> {
        ds.iter()
            .enumerate()
            .map(|(n, &d)| DegreeRecord::exact(q, n, d, Method::Picard))
            .collect()
    }

    #[test]
    fn q3_small_sequence() {
        let out = probe_degrees_detailed(3, 3, 1, FieldConfig::default(), TupleRoute::Interpolation).unwrap();
        let ds: Vec<u128> = out.records.iter().map(|r| r.degree).collect();
        assert_eq!(ds, vec![1, 7, 16, 19]);
        assert!(out.records.iter().all(|r| r.is_consistent()));
        let r = &out.runs[0];
        assert_eq!(r.removed, vec![0, 33, 93]);
        for n in 1..=3 {
            assert_eq!(r.unreduced[n - 1], 7 * r.degrees[n - 1]);
            assert_eq!(r.unreduced[n - 1] - r.removed[n - 1], r.degrees[n]);
        }
    }

    #[test]
    fn cofactor_route_agrees() {
        let a = probe_degrees_detailed(3, 2, 9, FieldConfig::default(), TupleRoute::Cofactor).unwrap();
        assert_eq!(a.records.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![1, 7, 16]);
    }

    #[test]
    fn runs_use_different_primes_and_are_deterministic() {
        let a = probe_degrees_detailed(2, 2, 5, FieldConfig::default(), TupleRoute::Interpolation).unwrap();
        let b = probe_degrees_detailed(2, 2, 5, FieldConfig::default(), TupleRoute::Interpolation).unwrap();
        assert_ne!(a.runs[0].prime, a.runs[1].prime);
        assert_ne!(a.runs[0].seed, a.runs[1].seed);
        assert_eq!(a.runs, b.runs);
        assert_eq!(a.records, b.records);
    }

    #[test]
    fn rational_probe() {
        let r = probe_degrees(3, 2, 3, FieldConfig::Rational).unwrap();
        assert_eq!(r.iter().map(|r| r.degree).collect::<Vec<_>>(), vec![1, 7, 16]);
        assert!(r.iter().all(|r| r.primes.is_empty() && r.agreement >= 2));
    }

    #[test]
    fn growth_estimates() {
        let e = estimate_delta(&recs(5, &[1, 21, 206, 1531])).unwrap();
        assert_eq!(e.last_ratio, "1531/206");
        assert!((e.last_ratio_approx - 7.432).abs() < 1e-3);
        let c = estimate_delta(&recs(3, &[4, 4, 4])).unwrap();
        assert_eq!(c.last_ratio, "1");
        assert_eq!(c.fitted_ratio.as_deref(), Some("1"));
        let q4 = [1u128, 13, 65, 189, 417];
        let ratios: Vec<f64> = (3..=5)
            .map(|k| estimate_delta(&recs(4, &q4[..k])).unwrap().last_ratio_approx)
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]));
        assert!(matches!(estimate_delta(&recs(3, &[1, 7])), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn seeds_are_spread() {
        assert_ne!(derive_seed(0, 0), derive_seed(0, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(0, 0));
    }
}
