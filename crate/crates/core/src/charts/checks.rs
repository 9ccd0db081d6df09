//! Exact checks of the reduced map in the charts. Every check resamples a
//! degenerate draw up to [`MAX_RESAMPLES`] times and then reports a failure.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Pi1Chart, Pi2Chart, Pi3Chart, DEFAULT_R, DEFAULT_SLOT};
use crate::arith::field::{random_prime, Field, PrimeField, Rationals, Ring};
use crate::arith::upoly::{tuple_content_reduce, UPoly};
use crate::degree::probe::derive_seed;
use crate::error::{Error, Result};
use crate::maps::matrix::{chi_scale, proj_eq, Matrix, ProjPoint, RandomElem};
use crate::maps::pointwise::{ihat_matrix, khat_matrix};
use crate::maps::tuple::{det_tuple, eval_tuple, jhat_tuple, khat_tuple_cofactor, khat_tuple_interpolate, tuple_product};

pub const MAX_RESAMPLES: usize = 5;
const MAX_FAILURE_SAMPLES: usize = 5;

/// Names accepted by [`run_named_check`].
pub const CHECK_NAMES: [&str; 5] = ["limit", "rank-one", "image", "homogeneity", "valuations"];

/// Expected against observed valuation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Observation {
    pub label: String,
    pub expected: usize,
    pub observed: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChartReport {
    pub proposition: String,
    pub q: usize,
    pub trials: usize,
    pub passes: usize,
    pub failures: usize,
    pub samples_of_failure: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub observations: Vec<Observation>,
}

impl ChartReport {
    fn new(name: &str, q: usize, trials: usize) -> Self {
        ChartReport {
            proposition: name.to_string(),
            q,
            trials,
            passes: 0,
            failures: 0,
            samples_of_failure: Vec::new(),
            observations: Vec::new(),
        }
    }

    fn record(&mut self, outcome: std::result::Result<(), String>) {
        match outcome {
            Ok(()) => self.passes += 1,
            Err(msg) => {
                self.failures += 1;
                if self.samples_of_failure.len() < MAX_FAILURE_SAMPLES {
                    self.samples_of_failure.push(msg);
                }
            }
        }
    }

    pub fn ok(&self) -> bool {
        self.failures == 0 && self.passes == self.trials
    }
}

fn trial_rng(seed: u64, trial: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, trial as u64))
}

fn trial_field(rng: &mut ChaCha8Rng) -> Result<PrimeField> {
    random_prime(61, rng)
}

fn show<F: Field>(m: &Matrix<F>) -> String {
    let f = m.field();
    let rows: Vec<String> = m
        .rows()
        .iter()
        .map(|r| {
            let cells: Vec<String> = r
                .iter()
                .map(|e| crate::arith::field::format_rational(&f.to_rational(e)))
                .collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    format!("[{}]", rows.join(","))
}

/// Limit of the reduced map at a point of the rank-one locus, against the
/// closed form `B diag(0, inv(v')) A` with `v'_jk = -v_jk / (lambda_j^2 nu_k^2)`,
/// `A` unit lower-triangular with first column `-1/lambda_j` and `B` unit
/// upper-triangular with first row `-1/nu_k`. Exact over the rationals.
pub fn limit_check(q: usize, trials: usize, seed: u64) -> Result<ChartReport> {
    if q < 3 {
        return Err(Error::InvalidSize(q));
    }
    let f = Rationals;
    let mut report = ChartReport::new("limit", q, trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let mut outcome = Err(format!("trial {trial}: every draw had singular v'"));
        for _ in 0..=MAX_RESAMPLES {
            let chart = Pi1Chart::random(&f, q, DEFAULT_SLOT, &mut rng)?;
            let Some(pred) = limit_prediction(&chart)? else { continue };
            let image = khat_tuple_interpolate(&chart.tuple())?;
            let (reduced, _) = tuple_content_reduce(&image)?;
            let at0 = eval_tuple(&reduced, &f.zero())?;
            outcome = if at0.is_zero() {
                Err(format!("trial {trial}: reduced image vanishes at s = 0"))
            } else if !proj_eq(&at0, &pred) {
                Err(format!("trial {trial}: limit {} != prediction {}", show(&at0), show(&pred)))
            } else if pred.rank() != q - 1 {
                Err(format!("trial {trial}: prediction has rank {}", pred.rank()))
            } else {
                Ok(())
            };
            break;
        }
        report.record(outcome);
    }
    Ok(report)
}

/// Closed-form limit at `s = 0`; `None` when `v'` is singular.
pub fn limit_prediction<F: Field>(chart: &Pi1Chart<F>) -> Result<Option<Matrix<F>>> {
    let q = chart.q();
    let f = chart.v.field().clone();
    let inv = |e: &F::Elem| f.inv(e).ok_or_else(|| Error::Degenerate("zero chart coordinate".into()));
    let mut vp = Matrix::zeros(f.clone(), q - 1);
    for j in 1..q {
        for k in 1..q {
            let d = f.mul(&f.mul(&chart.lambda[j], &chart.lambda[j]), &f.mul(&chart.nu[k], &chart.nu[k]));
            vp.set(j - 1, k - 1, f.neg(&f.mul(chart.v.get(j, k), &inv(&d)?)));
        }
    }
    let Some(vinv) = vp.inverse() else { return Ok(None) };
    let mut a = Matrix::identity(f.clone(), q);
    let mut b = Matrix::identity(f.clone(), q);
    for j in 1..q {
        a.set(j, 0, f.neg(&inv(&chart.lambda[j])?));
        b.set(0, j, f.neg(&inv(&chart.nu[j])?));
    }
    let mut mid = Matrix::zeros(f.clone(), q);
    for j in 1..q {
        for k in 1..q {
            mid.set(j, k, vinv.get(j - 1, k - 1).clone());
        }
    }
    Ok(Some(b.mul(&mid)?.mul(&a)?))
}

/// The cofactor map sends matrices of rank `q - 1` to rank-one matrices.
pub fn rank_one_check(q: usize, trials: usize, seed: u64) -> Result<ChartReport> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    let mut report = ChartReport::new("rank-one", q, trials);
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = trial_field(&mut rng)?;
        let a = Matrix::random_nonzero(f, q, &mut rng);
        let b = Matrix::random_nonzero(f, q, &mut rng);
        // Product of a q x (q-1) and a (q-1) x q factor.
        let m = Matrix::from_fn(f, q, |i, j| {
            (0..q - 1).fold(f.zero(), |acc, k| f.add(&acc, &f.mul(a.get(i, k), b.get(k, j))))
        });
        let outcome = if m.rank() != q - 1 {
            Err(format!("trial {trial}: sample has rank {}", m.rank()))
        } else {
            let img = ihat_matrix(&m)?;
            match img.rank() {
                1 => Ok(()),
                r => Err(format!("trial {trial}: image of {} has rank {r}", show(&m))),
            }
        };
        report.record(outcome);
    }
    Ok(report)
}

/// With `x_rs = 0` the image has row `s` and column `r` zero, for every `(r, s)`.
/// At `(0, 0)` the lower block of the image is the product of the other
/// first-row and first-column entries times the reduced map of the lower block.
pub fn image_check(q: usize, trials: usize, seed: u64) -> Result<ChartReport> {
    if q < 3 {
        return Err(Error::InvalidSize(q));
    }
    let mut report = ChartReport::new("image", q, trials * q * q);
    let mut idx = 0;
    for r in 0..q {
        for s in 0..q {
            for _ in 0..trials {
                let mut rng = trial_rng(seed, idx);
                idx += 1;
                let f = trial_field(&mut rng)?;
                let mut x = Matrix::random_nonzero(f, q, &mut rng);
                x.set(r, s, 0);
                let y = khat_matrix(&x)?;
                let zero_lines = (0..q).all(|j| f.is_zero(y.get(s, j)) && f.is_zero(y.get(j, r)));
                let outcome = if !zero_lines {
                    Err(format!("x_({r},{s}) = 0: image {} has nonzero row {s} or column {r}", show(&y)))
                } else if r == 0 && s == 0 {
                    lower_block_identity(&x, &y)
                } else {
                    Ok(())
                };
                report.record(outcome);
            }
        }
    }
    Ok(report)
}

fn lower_block_identity(x: &Matrix<PrimeField>, y: &Matrix<PrimeField>) -> std::result::Result<(), String> {
    let f = *x.field();
    let q = x.q();
    let mut c = f.one();
    for k in 1..q {
        c = f.mul(&c, &f.mul(x.get(0, k), x.get(k, 0)));
    }
    let small = khat_matrix(&x.lower_block()).map_err(|e| e.to_string())?;
    let block = y.lower_block();
    if block.is_zero() {
        return Err(format!("lower block of the image of {} vanishes", show(x)));
    }
    if block != small.scale(&c) {
        return Err(format!("lower block {} is not the scaled smaller map {}", show(&block), show(&small)));
    }
    Ok(())
}

fn valuation_gap<F: Field>(y: &[UPoly<F>], q: usize, num: (usize, usize), den: (usize, usize)) -> Option<isize> {
    let a = y[num.0 * q + num.1].valuation()? as isize;
    let b = y[den.0 * q + den.1].valuation()? as isize;
    Some(a - b)
}

/// Scaling row and column 0 by `t` commutes with the reduced map (projectively).
/// In the center chart the exceptional coordinate of the image has order 1
/// in `t`; from the hyperplane chart the image's exceptional coordinate has
/// order 1 in `s`.
pub fn homogeneity_check(q: usize, trials: usize, seed: u64) -> Result<ChartReport> {
    if q < 3 {
        return Err(Error::InvalidSize(q));
    }
    let mut report = ChartReport::new("homogeneity", q, trials);
    let (k, l) = DEFAULT_SLOT;
    let r = DEFAULT_R;
    for trial in 0..trials {
        let mut rng = trial_rng(seed, trial);
        let f = trial_field(&mut rng)?;
        let outcome = (|| -> std::result::Result<(), String> {
            let x = ProjPoint::new(Matrix::random_nonzero(f, q, &mut rng)).map_err(|e| e.to_string())?;
            let t = f.random_nonzero_elem(&mut rng);
            let lhs = khat_matrix(chi_scale(&x, &t, 0).map_err(|e| e.to_string())?.matrix())
                .map_err(|e| e.to_string())?;
            let base = ProjPoint::new(khat_matrix(x.matrix()).map_err(|e| e.to_string())?)
                .map_err(|e| e.to_string())?;
            let rhs = chi_scale(&base, &t, 0).map_err(|e| e.to_string())?;
            if !proj_eq(&lhs, rhs.matrix()) {
                return Err(format!("trial {trial}: scaling pattern fails at {}", show(x.matrix())));
            }
            let mut gaps = [None, None];
            for _ in 0..=MAX_RESAMPLES {
                let c3 = Pi3Chart::random(&f, q, DEFAULT_SLOT, r, &mut rng).map_err(|e| e.to_string())?;
                let y3 = khat_tuple_interpolate(&c3.tuple()).map_err(|e| e.to_string())?;
                let c2 = Pi2Chart::random(&f, q, DEFAULT_SLOT, r, &mut rng).map_err(|e| e.to_string())?;
                let y2 = khat_tuple_interpolate(&c2.tuple()).map_err(|e| e.to_string())?;
                gaps = [valuation_gap(&y3, q, (0, r), (k, l)), valuation_gap(&y2, q, (0, r), (k, l))];
                if gaps.iter().all(|g| g.is_some_and(|g| g <= 1)) {
                    break;
                }
            }
            match gaps {
                [Some(1), Some(1)] => Ok(()),
                g => Err(format!("trial {trial}: exceptional-coordinate orders {g:?}, expected [1, 1]")),
            }
        })();
        report.record(outcome);
    }
    Ok(report)
}

/// `P(x) = prod(x) det(1/x)`, as `det(J(x)) / prod(x)^(q-1)` on a tuple.
fn p_tuple<F: Field>(tuple: &[UPoly<F>], q: usize) -> Result<UPoly<F>> {
    let d = det_tuple(&jhat_tuple(tuple)?)?;
    let prod = tuple_product(tuple)?;
    d.exact_div(&prod.pow(q as u32 - 1))?
        .ok_or_else(|| Error::Inconsistency("det(J) not divisible by prod^(q-1)".into()))
}

fn hyperplane<F: Field>(coeffs: &[F::Elem], comps: &[UPoly<F>]) -> UPoly<F> {
    let f = comps[0].field().clone();
    comps
        .iter()
        .zip(coeffs)
        .fold(UPoly::zero(f), |acc, (p, c)| &acc + &p.scale(c))
}

/// Orders of vanishing along the three exceptional loci: of `P` (expected
/// `q-1`, `2q-3`, `2q-2`) and of a generic hyperplane pulled back by the
/// reduced map (expected `q-2`, `2q-3`, `2q-2`). Each observed order is the
/// minimum over three samples; the reduced map is computed by the cofactor route.
pub fn valuation_orders_check(q: usize, seed: u64) -> Result<ChartReport> {
    if q < 3 {
        return Err(Error::InvalidSize(q));
    }
    let expected = [
        ("P along rank-one chart", q - 1),
        ("P along hyperplane chart", 2 * q - 3),
        ("P along center chart", 2 * q - 2),
        ("hyperplane along rank-one chart", q - 2),
        ("hyperplane along hyperplane chart", 2 * q - 3),
        ("hyperplane along center chart", 2 * q - 2),
    ];
    let mut observed: [Option<usize>; 6] = [None; 6];
    let mut draws = 0;
    let sample = |draw: usize| -> Result<[Option<usize>; 6]> {
        let mut rng = trial_rng(seed, draw);
        let f = trial_field(&mut rng)?;
        let tuples = [
            Pi1Chart::random(&f, q, DEFAULT_SLOT, &mut rng)?.tuple(),
            Pi2Chart::random(&f, q, DEFAULT_SLOT, DEFAULT_R, &mut rng)?.tuple(),
            Pi3Chart::random(&f, q, DEFAULT_SLOT, DEFAULT_R, &mut rng)?.tuple(),
        ];
        let h: Vec<u64> = (0..q * q).map(|_| f.random_nonzero_elem(&mut rng)).collect();
        let mut out = [None; 6];
        for (c, t) in tuples.iter().enumerate() {
            out[c] = p_tuple(t, q)?.valuation();
            out[3 + c] = hyperplane(&h, &khat_tuple_cofactor(t)?).valuation();
        }
        Ok(out)
    };
    let merge = |acc: &mut [Option<usize>; 6], s: [Option<usize>; 6]| {
        for (a, b) in acc.iter_mut().zip(s) {
            *a = match (*a, b) {
                (Some(x), Some(y)) => Some(x.min(y)),
                (x, y) => x.or(y),
            };
        }
    };
    for _ in 0..3 {
        let s = sample(draws)?;
        draws += 1;
        merge(&mut observed, s);
    }
    for _ in 0..MAX_RESAMPLES {
        if observed.iter().zip(&expected).all(|(o, e)| o.is_some_and(|o| o <= e.1)) {
            break;
        }
        let s = sample(draws)?;
        draws += 1;
        merge(&mut observed, s);
    }
    let mut report = ChartReport::new("valuations", q, expected.len());
    for ((label, e), o) in expected.iter().zip(observed) {
        report.observations.push(Observation {
            label: label.to_string(),
            expected: *e,
            observed: o,
        });
        report.record(if o == Some(*e) {
            Ok(())
        } else {
            Err(format!("{label}: order {o:?}, expected {e} ({draws} samples)"))
        });
    }
    Ok(report)
}

/// Runs a check by name (see [`CHECK_NAMES`]).
pub fn run_named_check(name: &str, q: usize, trials: usize, seed: u64) -> Result<ChartReport> {
    match name {
        "limit" => limit_check(q, trials, seed),
        "rank-one" => rank_one_check(q, trials, seed),
        "image" => image_check(q, trials, seed),
        "homogeneity" => homogeneity_check(q, trials, seed),
        "valuations" => valuation_orders_check(q, seed),
        other => Err(Error::InvalidInput(format!(
            "unknown check '{other}'; expected one of {}",
            CHECK_NAMES.join(", ")
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn limit_q3() {
        let r = limit_check(3, 5, 1).unwrap();
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn limit_is_invariant_under_scaling_v() {
        let f = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let c = Pi1Chart::random(&f, 3, DEFAULT_SLOT, &mut rng).unwrap();
        let mut d = c.clone();
        d.v = c.v.scale(&f.from_i64(5));
        let (a, b) = (limit_prediction(&c).unwrap().unwrap(), limit_prediction(&d).unwrap().unwrap());
        assert!(proj_eq(&a, &b));
    }

    #[test]
    fn rank_one_and_image() {
        assert!(rank_one_check(4, 10, 2).unwrap().ok());
        let r = image_check(3, 20, 3).unwrap();
        assert_eq!(r.trials, 180);
        assert!(r.ok(), "{r:?}");
    }

    #[test]
    fn homogeneity_q3_q4() {
        for q in [3, 4] {
            let r = homogeneity_check(q, 10, 4).unwrap();
            assert!(r.ok(), "{r:?}");
        }
    }

    #[test]
    fn valuation_orders() {
        let r = valuation_orders_check(3, 5).unwrap();
        let obs: Vec<_> = r.observations.iter().map(|o| o.observed).collect();
        assert_eq!(obs, [2, 3, 4, 1, 3, 4].map(Some));
        assert!(r.ok());
        let r5 = valuation_orders_check(5, 6).unwrap();
        assert_eq!(r5.observations[..3].iter().map(|o| o.observed).collect::<Vec<_>>(), [4, 7, 8].map(Some));
        assert!(r5.ok(), "{r5:?}");
    }

    #[test]
    fn unknown_name() {
        assert!(matches!(run_named_check("nope", 3, 1, 0), Err(Error::InvalidInput(_))));
    }
}
