//! Certified real-root isolation (Sturm sequences) and maximum root modulus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::arith::field::{format_rational, Rationals};
use crate::arith::upoly::UPoly;
use crate::error::{Error, Result};

/// Closed rational interval `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealInterval {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl RealInterval {
    pub fn new(lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidInput("interval with lo > hi".into()));
        }
        Ok(RealInterval { lo, hi })
    }

    pub fn point(v: BigRational) -> Self {
        RealInterval { lo: v.clone(), hi: v }
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> BigRational {
        (&self.lo + &self.hi) / BigInt::from(2)
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn overlaps(&self, other: &RealInterval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn approx(&self) -> f64 {
        self.midpoint().to_f64().unwrap_or(f64::NAN)
    }

    /// Midpoint as a decimal string truncated to `digits` fractional digits.
    pub fn decimal(&self, digits: usize) -> String {
        format_decimal(&self.midpoint(), digits)
    }
}

impl Serialize for RealInterval {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("RealInterval", 4)?;
        st.serialize_field("lo", &format_rational(&self.lo))?;
        st.serialize_field("hi", &format_rational(&self.hi))?;
        st.serialize_field("approx", &self.decimal(12))?;
        st.serialize_field("width", &self.width().to_f64().unwrap_or(f64::NAN))?;
        st.end()
    }
}

/// Decimal expansion of a rational, rounded toward zero.
pub fn format_decimal(v: &BigRational, digits: usize) -> String {
    let neg = v.is_negative();
    let a = v.abs();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac_part = &scaled % &scale;
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{:0>width$}", frac_part.to_string(), width = digits)
    }
}

/// Result of a largest-real-root query.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaxRealRoot {
    Root(RealInterval),
    NoRealRoot,
}

impl MaxRealRoot {
    pub fn interval(&self) -> Option<&RealInterval> {
        match self {
            MaxRealRoot::Root(iv) => Some(iv),
            MaxRealRoot::NoRealRoot => None,
        }
    }
}

/// Sturm sequence of a square-free polynomial.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<UPoly<Rationals>>,
}

impl Sturm {
    pub fn new(p: &UPoly<Rationals>) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Degenerate("Sturm sequence of the zero polynomial".into()));
        }
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let r = seq[n - 2].rem(&seq[n - 1])?;
            seq.push(-&r);
        }
        seq.pop();
        Ok(Sturm { seq })
    }

    /// Sign changes at `x`, zeros skipped.
    pub fn variations(&self, x: &BigRational) -> usize {
        let mut count = 0;
        let mut last = 0i8;
        for p in &self.seq {
            let v = p.eval(x);
            let s = if v.is_positive() {
                1
            } else if v.is_negative() {
                -1
            } else {
                0
            };
            if s != 0 {
                if last != 0 && s != last {
                    count += 1;
                }
                last = s;
            }
        }
        count
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// Strict bound on the modulus of every root: `1 + max |a_i / a_n|`.
pub fn cauchy_bound(p: &UPoly<Rationals>) -> BigRational {
    let lead = p.leading_coeff().expect("nonzero polynomial").abs();
    let n = p.coeffs().len() - 1;
    let m = p.coeffs()[..n]
        .iter()
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(BigRational::zero);
    BigRational::one() + m.ceil()
}

fn two() -> BigInt {
    BigInt::from(2)
}

/// Isolates the largest real root of `p` in an interval of width at most `precision`.
///
/// The interval `[lo, hi]` satisfies: the square-free part of `p` has exactly one
/// root in `(lo, hi]`, by Sturm count. Integer roots are detected and returned as
/// point intervals.
pub fn isolate_max_real_root(p: &UPoly<Rationals>, precision: &BigRational) -> Result<MaxRealRoot> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial has no isolated roots".into()));
    }
    if !precision.is_positive() {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let sqf = p.squarefree_part()?;
    if sqf.degree() == Some(0) {
        return Ok(MaxRealRoot::NoRealRoot);
    }
    let sturm = Sturm::new(&sqf)?;
    let bound = cauchy_bound(&sqf);
    let mut lo = -bound.clone();
    let mut hi = bound;
    if sturm.count(&lo, &hi) == 0 {
        return Ok(MaxRealRoot::NoRealRoot);
    }
    let mut integer_checked = false;
    loop {
        let inside = sturm.count(&lo, &hi);
        if inside == 1 {
            if !integer_checked && &hi - &lo < BigRational::one() {
                integer_checked = true;
                let k = BigRational::from_integer(hi.floor().to_integer());
                if k > lo && sqf.eval(&k).is_zero() {
                    return Ok(MaxRealRoot::Root(RealInterval::point(k)));
                }
            }
            if &hi - &lo <= *precision {
                return Ok(MaxRealRoot::Root(RealInterval { lo, hi }));
            }
        }
        let mid = (&lo + &hi) / two();
        if sturm.count(&mid, &hi) >= 1 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Sign change certificate: `p(lo)` and `p(hi)` have opposite signs (or one is zero).
pub fn brackets_sign_change(p: &UPoly<Rationals>, iv: &RealInterval) -> bool {
    let a = p.eval(&iv.lo);
    let b = p.eval(&iv.hi);
    a.is_zero() || b.is_zero() || (a.is_positive() != b.is_positive())
}

/// Power sums `s_1..=s_m` of the roots of monic-normalized `p` (Newton's identities).
fn power_sums(p: &UPoly<Rationals>, m: usize) -> Vec<BigRational> {
    let mp = p.monic();
    let n = mp.coeffs().len() - 1;
    // e_k with sign: p = x^n + c_{n-1} x^{n-1} + ... ; c_{n-k} = (-1)^k e_k.
    let c = |k: usize| -> BigRational {
        if k > n {
            BigRational::zero()
        } else {
            mp.coeffs()[n - k].clone()
        }
    };
    let mut s = vec![BigRational::zero(); m + 1];
    for k in 1..=m {
        // s_k + c1 s_{k-1} + ... + c_{k-1} s_1 + k c_k = 0, with c_i the i-th coefficient below the top.
        let mut acc = BigRational::from_integer(BigInt::from(k as i64)) * c(k);
        for i in 1..k {
            acc += c(i) * &s[k - i];
        }
        s[k] = -acc;
    }
    s
}

/// Monic polynomial of degree `m` with the given power sums `s_1..=s_m`.
fn from_power_sums(s: &[BigRational], m: usize) -> UPoly<Rationals> {
    // c_k = -(s_k + c_1 s_{k-1} + ... + c_{k-1} s_1) / k
    let mut c = vec![BigRational::one()];
    for k in 1..=m {
        let mut acc = s[k].clone();
        for i in 1..k {
            acc += &c[i] * &s[k - i];
        }
        c.push(-acc / BigInt::from(k as i64));
    }
    c.reverse();
    UPoly::new(Rationals, c)
}

/// Polynomial whose roots are all products `a_i a_j` of roots of `p` (with multiplicity).
pub fn composed_product_self(p: &UPoly<Rationals>) -> UPoly<Rationals> {
    let n = p.degree().unwrap_or(0);
    let m = n * n;
    let s = power_sums(p, m);
    let sq: Vec<BigRational> = s.iter().map(|v| v * v).collect();
    from_power_sums(&sq, m)
}

/// Exact rational square root when one exists.
fn exact_sqrt(v: &BigRational) -> Option<BigRational> {
    if v.is_negative() {
        return None;
    }
    let n = v.numer().sqrt();
    let d = v.denom().sqrt();
    (&n * &n == *v.numer() && &d * &d == *v.denom()).then(|| BigRational::new(n, d))
}

/// `[a, b]` with `a^2 <= lo`, `b^2 >= hi`, `b - a <= width + (sqrt hi - sqrt lo)`.
fn sqrt_bracket(lo: &BigRational, hi: &BigRational, width: &BigRational) -> (BigRational, BigRational) {
    let lower = {
        let (mut a, mut b) = (BigRational::zero(), BigRational::one() + lo.ceil());
        while &b - &a > *width {
            let mid = (&a + &b) / two();
            if &mid * &mid <= *lo {
                a = mid;
            } else {
                b = mid;
            }
        }
        a
    };
    let upper = {
        let (mut a, mut b) = (BigRational::zero(), BigRational::one() + hi.ceil());
        while &b - &a > *width {
            let mid = (&a + &b) / two();
            if &mid * &mid >= *hi {
                b = mid;
            } else {
                a = mid;
            }
        }
        b
    };
    (lower, upper)
}

/// Certified interval for the maximum modulus over all complex roots of `p`.
///
/// Works on `p ⊗ p`, whose roots are the pairwise products of roots of `p`: its
/// largest real root is exactly `max |root|^2` (conjugate pairs and squares of
/// real roots reach it, no product exceeds it).
pub fn max_root_modulus(p: &UPoly<Rationals>, precision: &BigRational) -> Result<RealInterval> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial has no roots".into()));
    }
    if !precision.is_positive() {
        return Err(Error::InvalidInput("precision must be positive".into()));
    }
    let sqf = p.squarefree_part()?;
    match sqf.degree() {
        Some(0) => {
            return Err(Error::Degenerate("constant polynomial has no roots".into()));
        }
        Some(1) => {
            let root = -(&sqf.coeffs()[0] / &sqf.coeffs()[1]);
            return Ok(RealInterval::point(root.abs()));
        }
        _ => {}
    }
    let prod = composed_product_self(&sqf);
    let mut target = precision * precision / BigInt::from(4);
    loop {
        let sq = match isolate_max_real_root(&prod, &target)? {
            MaxRealRoot::Root(iv) => iv,
            MaxRealRoot::NoRealRoot => {
                return Err(Error::Inconsistency(
                    "composed product has no real root".into(),
                ))
            }
        };
        if sq.is_point() {
            if let Some(r) = exact_sqrt(&sq.lo) {
                return Ok(RealInterval::point(r));
            }
        }
        let lo = if sq.lo.is_negative() { BigRational::zero() } else { sq.lo.clone() };
        let (a, b) = sqrt_bracket(&lo, &sq.hi, &(precision / BigInt::from(4)));
        if &b - &a <= *precision {
            return Ok(RealInterval { lo: a, hi: b });
        }
        target = target / BigInt::from(16);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> UPoly<Rationals> {
        UPoly::from_i64s(Rationals, c)
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn golden_ratio_sq() -> f64 {
        (7.0 + 3.0 * 5f64.sqrt()) / 2.0
    }

    #[test]
    fn quadratic_max_real_root() {
        let p = poly(&[1, -7, 1]);
        let prec = rat(1, 10_000_000_000);
        let iv = isolate_max_real_root(&p, &prec).unwrap();
        let iv = iv.interval().unwrap();
        assert!(iv.width() <= prec);
        assert!((iv.approx() - golden_ratio_sq()).abs() < 1e-9);
        assert!(brackets_sign_change(&p, iv));
    }

    #[test]
    fn no_real_root_and_double_root() {
        let prec = rat(1, 1000);
        assert_eq!(
            isolate_max_real_root(&poly(&[1, 1, 1]), &prec).unwrap(),
            MaxRealRoot::NoRealRoot
        );
        let iv = isolate_max_real_root(&poly(&[1, -2, 1]), &prec).unwrap();
        assert!(iv.interval().unwrap().contains(&rat(1, 1)));
        assert!(isolate_max_real_root(&poly(&[]), &prec).is_err());
    }

    #[test]
    fn max_modulus_examples() {
        let prec = rat(1, 10_000_000_000);
        let unit = max_root_modulus(&poly(&[1, 1, 1]), &prec).unwrap();
        assert!(unit.contains(&rat(1, 1)));
        let big = max_root_modulus(&poly(&[1, -7, 1]), &prec).unwrap();
        assert!((big.approx() - golden_ratio_sq()).abs() < 1e-9);
        assert!(big.width() <= prec);
        assert_eq!(max_root_modulus(&poly(&[-5, 1]), &prec).unwrap(), RealInterval::point(rat(5, 1)));
    }

    #[test]
    fn max_modulus_sees_complex_dominant_roots() {
        // (x^2 + 9)(x - 2): dominant roots are +-3i.
        let p = &poly(&[9, 0, 1]) * &poly(&[-2, 1]);
        let iv = max_root_modulus(&p, &rat(1, 1_000_000)).unwrap();
        assert!(iv.contains(&rat(3, 1)));
        let real = isolate_max_real_root(&p, &rat(1, 1_000_000)).unwrap();
        assert!(real.interval().unwrap().contains(&rat(2, 1)));
    }

    #[test]
    fn sturm_counts_half_open() {
        let p = poly(&[-2, 1]).pow(1);
        let s = Sturm::new(&(&p * &poly(&[-5, 1]))).unwrap();
        assert_eq!(s.count(&rat(2, 1), &rat(5, 1)), 1);
        assert_eq!(s.count(&rat(1, 1), &rat(5, 1)), 2);
        assert_eq!(s.count(&rat(0, 1), &rat(1, 1)), 0);
    }

    #[test]
    fn decimal_formatting() {
        assert_eq!(format_decimal(&rat(1, 3), 4), "0.3333");
        assert_eq!(format_decimal(&rat(-7, 2), 1), "-3.5");
        assert_eq!(format_decimal(&rat(5, 1), 0), "5");
    }

    #[test]
    fn composed_product_roots() {
        // Roots 2, 3 -> products 4, 6, 6, 9.
        let p = &poly(&[-2, 1]) * &poly(&[-3, 1]);
        let c = composed_product_self(&p);
        let expect = &(&poly(&[-4, 1]) * &poly(&[-6, 1]).pow(2)) * &poly(&[-9, 1]);
        assert_eq!(c, expect);
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        #[test]
        fn isolated_interval_is_certified(roots in proptest::collection::vec(-40i64..40, 1..6), extra in 0i64..20) {
            // Real roots r/3 plus a complex pair x^2 + extra + 1.
            let mut p = poly(&[1 + extra, 0, 1]);
            for &r in &roots {
                p = &p * &poly(&[-r, 3]);
            }
            let prec = rat(1, 1 << 20);
            let res = isolate_max_real_root(&p, &prec).unwrap();
            let iv = res.interval().unwrap();
            let top = rat(*roots.iter().max().unwrap(), 3);
            proptest::prop_assert!(iv.contains(&top));
            proptest::prop_assert!(iv.width() <= prec);
            let sqf = p.squarefree_part().unwrap();
            let sturm = Sturm::new(&sqf).unwrap();
            proptest::prop_assert!(
                iv.is_point() || sturm.count(&iv.lo, &iv.hi) == 1 || brackets_sign_change(&sqf, iv)
            );
        }
    }
}
