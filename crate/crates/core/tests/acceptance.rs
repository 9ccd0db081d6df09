mod common;

use std::io::Write;
use std::time::{Duration, Instant};

use common::*;
use matinv_degree::arith::field::{Rationals, Ring};
use matinv_degree::arith::linalg::integer_coeffs;
use matinv_degree::arith::roots::max_root_modulus;
use matinv_degree::arith::upoly::UPoly;
use matinv_degree::charts::run_named_check;
use matinv_degree::degree::probe::probe_degrees_detailed;
use matinv_degree::degree::{probe_degrees, FieldConfig, TupleRoute};
use matinv_degree::maps::symbolic::common_factor_identity;
use matinv_degree::picard::{
    charpoly_factor_check, delta, p_factor, predicted_degrees_exact, pullback_matrix, restricted_block,
    SignConvention,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

const NEG: SignConvention = SignConvention::AllNegative;
const LIT: SignConvention = SignConvention::PaperLiteral;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    ensure(start.elapsed() <= budget, format!("over budget: {:?} > {:?}", start.elapsed(), budget))
}

fn predicted(q: usize, n: usize) -> Vec<i128> {
    predicted_degrees_exact(q, n, NEG)
        .unwrap()
        .iter()
        .map(|d| d.to_i128().unwrap())
        .collect()
}

fn anchor() -> Check {
    let start = Instant::now();
    for q in 2..=6 {
        let d = probe_degrees(q, 1, 100 + q as u64, FieldConfig::default()).map_err(|e| e.to_string())?;
        ensure(d[1].degree == (q * q - q + 1) as u128, format!("q = {q}: degree {}", d[1].degree))?;
    }
    within(start, Duration::from_secs(30))?;
    Ok("n = 1 degree is q^2 - q + 1 for q = 2..6".into())
}

fn cross_method() -> Check {
    let expected: [(usize, &[i128]); 3] = [(3, &[1, 7, 16, 19, 25]), (4, &[1, 13, 65, 189]), (5, &[1, 21, 206, 1531])];
    let mut notes = Vec::new();
    for (q, want) in expected {
        let n = want.len() - 1;
        ensure(degrees_by_hand(q, n) == want, format!("hand oracle disagrees at q = {q}"))?;
        ensure(predicted(q, n) == want, format!("picard prediction disagrees at q = {q}"))?;
        let start = Instant::now();
        let out = probe_degrees_detailed(q, n, 7, FieldConfig::default(), TupleRoute::Interpolation)
            .map_err(|e| e.to_string())?;
        let got: Vec<i128> = out.records.iter().map(|r| r.degree as i128).collect();
        ensure(got == want, format!("q = {q}: probe {got:?}, expected {want:?}"))?;
        ensure(out.records.iter().all(|r| r.agreement >= 2), format!("q = {q}: fewer than two agreeing runs"))?;
        ensure(out.runs[0].seed != out.runs[1].seed, "runs share a seed")?;
        ensure(out.runs[0].prime != out.runs[1].prime, "runs share a prime")?;
        if q == 5 {
            within(start, Duration::from_secs(300))?;
        }
        notes.push(format!("q={q} {:.1}s", start.elapsed().as_secs_f64()));
    }
    Ok(format!("probe equals picard ({})", notes.join(", ")))
}

fn common_factor() -> Check {
    let start = Instant::now();
    let f = fp();
    for q in [3, 4] {
        let cf = common_factor_identity(q).map_err(|e| e.to_string())?;
        ensure(cf.khat.degree() as usize == q * q - q + 1, format!("q = {q}: reduced degree {}", cf.khat.degree()))?;
        // Pointwise: composed(x) = prod(x)^(q-2) * reduced(x).
        for seed in 0..5 {
            let x = random_fp(q, 900 + seed);
            let prod = f.pow(&x.entry_product(), q as u64 - 2);
            for (c, k) in cf.composed.components().iter().zip(cf.khat.components()) {
                let lhs = c.eval(&f, x.entries());
                let rhs = f.mul(&prod, &k.eval(&f, x.entries()));
                ensure(lhs == rhs, format!("q = {q}: pointwise mismatch"))?;
            }
        }
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("exact for q = 3, 4 in {:.1}s", start.elapsed().as_secs_f64()))
}

fn big_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn big_pow(a: &[BigInt], e: usize) -> Vec<BigInt> {
    (0..e).fold(vec![BigInt::one()], |acc, _| big_mul(&acc, a))
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn factorization() -> Check {
    let start = Instant::now();
    for q in 3..=8 {
        let r = charpoly_factor_check(q, NEG).map_err(|e| e.to_string())?;
        ensure(r.success, format!("q = {q}: failed at {:?}", r.failed_stage))?;
        let cp = integer_coeffs(&pullback_matrix(q, NEG).unwrap().charpoly()).unwrap();
        ensure(cp.len() - 1 == 2 * q * q + 2, format!("q = {q}: charpoly degree {}", cp.len() - 1))?;
        let a = (q * q) as i64 - 4 * q as i64 + 2;
        let c = (q as i64 - 2).pow(2);
        let mut prod = ints(&[1, -a, 1]);
        prod = big_mul(&prod, &big_pow(&ints(&[1, 0, 2 - c, 0, 1]), q - 1));
        prod = big_mul(&prod, &big_pow(&ints(&[-1, 1]), q * q - q + 2));
        prod = big_mul(&prod, &big_pow(&ints(&[1, 1]), q * q - 3 * q + 2));
        ensure(prod == cp, format!("q = {q}: product of factors differs from charpoly"))?;
    }
    within(start, Duration::from_secs(120))?;
    Ok(format!("q = 3..8 in {:.1}s", start.elapsed().as_secs_f64()))
}

fn sign_disambiguation() -> Check {
    let neg = restricted_block(3, NEG).map_err(|e| e.to_string())?.det();
    let lit = restricted_block(3, LIT).map_err(|e| e.to_string())?.det();
    ensure(neg.abs().is_one(), format!("all-negative det {neg}"))?;
    ensure(lit.abs() == BigInt::from(71), format!("paper-literal det {lit}"))?;
    let ok_neg = charpoly_factor_check(3, NEG).unwrap();
    let ok_lit = charpoly_factor_check(3, LIT).unwrap();
    ensure(ok_neg.success, "all-negative factorization failed")?;
    ensure(!ok_lit.success, "paper-literal factorization succeeded")?;
    Ok(format!(
        "all-negative: det {neg}, factors; paper-literal: det {lit}, fails at {}",
        ok_lit.failed_stage.unwrap_or_default()
    ))
}

fn spectral_radius() -> Check {
    let prec = BigRational::new(BigInt::one(), BigInt::from(10).pow(14));
    for q in 3..=8 {
        let r = delta(q, &prec).map_err(|e| e.to_string())?;
        ensure(r.agree, format!("q = {q}: intervals do not overlap"))?;
        let p = max_root_modulus(&p_factor(q), &prec).unwrap();
        ensure(p.overlaps(&r.full_matrix_radius), format!("q = {q}: independent overlap fails"))?;
    }
    let d5 = delta(5, &BigRational::new(BigInt::one(), BigInt::from(10).pow(14))).unwrap().delta;
    let want = (7.0 + 3.0 * 5f64.sqrt()) / 2.0;
    ensure((d5.approx() - want).abs() < 1e-10, format!("delta(5) = {}", d5.approx()))?;
    ensure(d5.width() < BigRational::new(BigInt::one(), BigInt::from(10).pow(10)), "delta(5) interval too wide")?;
    for q in [3, 4] {
        let d = delta(q, &prec).unwrap().delta;
        let one = BigRational::one();
        ensure(d.contains(&one) && d.width() < prec, format!("delta({q}) is not 1"))?;
    }
    Ok(format!("overlap for q = 3..8, delta(5) = {:.12}", d5.approx()))
}

fn recurrence() -> Check {
    ensure(25 == 19 + 7 - 1, "q = 3 spot check")?;
    ensure(417 == 4 * 189 - 6 * 65 + 4 * 13 - 1, "q = 4 spot check")?;
    for q in 3..=8 {
        let d = predicted(q, 12);
        ensure(satisfies_recurrence(q, &d), format!("predicted q = {q}: {d:?}"))?;
    }
    let p3: Vec<i128> = probe_degrees(3, 6, 31, FieldConfig::default())
        .unwrap()
        .iter()
        .map(|r| r.degree as i128)
        .collect();
    ensure(satisfies_recurrence(3, &p3), format!("probed q = 3: {p3:?}"))?;
    ensure(p3[4] == 25, "probed q = 3 spot check")?;
    let p4: Vec<i128> = probe_degrees(4, 4, 32, FieldConfig::default())
        .unwrap()
        .iter()
        .map(|r| r.degree as i128)
        .collect();
    ensure(satisfies_recurrence(4, &p4), format!("probed q = 4: {p4:?}"))?;
    ensure(p4[4] == 417, "probed q = 4 spot check")?;
    Ok("predicted q = 3..8 to n = 12, probed q = 3 to n = 6, q = 4 to n = 4".into())
}

fn chart_suite() -> Check {
    let start = Instant::now();
    let plan: [(&str, &[usize], usize); 5] = [
        ("limit", &[3, 4], 10),
        ("rank-one", &[3, 4, 5], 100),
        ("image", &[3, 4], 20),
        ("homogeneity", &[3, 4], 50),
        ("valuations", &[3, 4, 5], 1),
    ];
    let mut runs = 0;
    for (name, qs, trials) in plan {
        for &q in qs {
            let r = run_named_check(name, q, trials, 40 + q as u64).map_err(|e| e.to_string())?;
            ensure(r.ok(), format!("{name} q = {q}: {:?}", r.samples_of_failure))?;
            if name == "valuations" {
                let want = [q - 1, 2 * q - 3, 2 * q - 2, q - 2, 2 * q - 3, 2 * q - 2];
                let got: Vec<Option<usize>> = r.observations.iter().map(|o| o.observed).collect();
                let want: Vec<Option<usize>> = want.iter().map(|&w| Some(w)).collect();
                ensure(got == want, format!("valuations q = {q}: {got:?}"))?;
            }
            runs += 1;
        }
    }
    within(start, Duration::from_secs(180))?;
    Ok(format!("{runs} check runs, zero failures, {:.1}s", start.elapsed().as_secs_f64()))
}

fn differences(d: &[i128]) -> Vec<i128> {
    d.windows(2).map(|w| w[1] - w[0]).collect()
}

fn polynomial_growth() -> Check {
    let d4 = predicted(4, 12);
    let third = differences(&differences(&differences(&d4)));
    ensure(third.iter().all(|&x| x == 32), format!("q = 4 third differences {third:?}"))?;
    let d3 = predicted(3, 12);
    let step = d3[3] - d3[0];
    ensure((0..d3.len() - 3).all(|n| d3[n + 3] - d3[n] == step), format!("q = 3 not periodic-linear: {d3:?}"))?;
    let slope = step / 3 + 1;
    let offset = *d3[..3].iter().max().unwrap();
    ensure(
        d3.iter().enumerate().all(|(n, &x)| x <= offset + slope * n as i128),
        format!("q = 3 exceeds {offset} + {slope} n: {d3:?}"),
    )?;
    Ok(format!("q = 4 third difference 32 to n = 12; q = 3 below {offset} + {slope} n"))
}

#[test]
fn acceptance_criteria() {
    let criteria: [(&str, fn() -> Check); 9] = [
        ("degree anchor", anchor),
        ("cross-method degree equality", cross_method),
        ("common-factor identity", common_factor),
        ("characteristic polynomial factorization", factorization),
        ("sign disambiguation", sign_disambiguation),
        ("spectral radius", spectral_radius),
        ("recurrence", recurrence),
        ("chart suite", chart_suite),
        ("polynomial growth at small q", polynomial_growth),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Ok(msg) => format!("[PASS] {}. {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => format!("[FAIL] {}. {name} ({secs:.1}s): {msg}", i + 1),
        };
        let _ = writeln!(err, "{line}");
        if outcome.is_err() {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

#[test]
fn rational_and_field_oracles_agree_on_block() {
    // The restricted block computed over the rationals matches the integer one.
    let m = restricted_block(3, NEG).unwrap();
    let rows: Vec<Vec<BigRational>> = m
        .rows()
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let cp = matinv_degree::arith::linalg::charpoly_rational(&rows);
    let expect = &(&p_factor(3) * &UPoly::from_i64s(Rationals, &[-1, 1])) * &UPoly::from_i64s(Rationals, &[-1, 1]);
    assert_eq!(cp, expect);
}
