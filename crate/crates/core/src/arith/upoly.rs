//! Dense univariate polynomials over a field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::field::{Field, Ring};
use crate::error::{Error, Result};

/// Dense polynomial, constant term first, over the domain `field`.
///
/// The coefficient vector never ends in a zero; the zero polynomial is the
/// empty vector.
#[derive(Clone, PartialEq)]
pub struct UPoly<F: Field> {
    field: F,
    coeffs: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for UPoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPoly[{}]{:?}", self.field.tag(), self.coeffs)
    }
}

impl<F: Field> UPoly<F> {
    pub fn new(field: F, mut coeffs: Vec<F::Elem>) -> Self {
        while coeffs.last().is_some_and(|c| field.is_zero(c)) {
            coeffs.pop();
        }
        UPoly { field, coeffs }
    }

    pub fn from_i64s(field: F, coeffs: &[i64]) -> Self {
        let c = coeffs.iter().map(|&v| field.from_i64(v)).collect();
        Self::new(field, c)
    }

    pub fn zero(field: F) -> Self {
        UPoly {
            field,
            coeffs: Vec::new(),
        }
    }

    pub fn constant(field: F, c: F::Elem) -> Self {
        Self::new(field, vec![c])
    }

    pub fn one(field: F) -> Self {
        let one = field.one();
        Self::constant(field, one)
    }

    /// The polynomial `t`.
    pub fn x(field: F) -> Self {
        let c = vec![field.zero(), field.one()];
        Self::new(field, c)
    }

    /// `a + b t`.
    pub fn linear(field: F, a: F::Elem, b: F::Elem) -> Self {
        Self::new(field, vec![a, b])
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn coeffs(&self) -> &[F::Elem] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<F::Elem> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Index of the first nonzero coefficient; `None` is the infinite
    /// valuation of the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !self.field.is_zero(c))
    }

    pub fn coeff(&self, i: usize) -> F::Elem {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.field.zero())
    }

    pub fn leading_coeff(&self) -> Option<&F::Elem> {
        self.coeffs.last()
    }

    pub fn same_domain(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::DomainMismatch(format!(
                "{} vs {}",
                self.field.tag(),
                other.field.tag()
            )))
        }
    }

    fn assert_domain(&self, other: &Self) {
        if let Err(e) = self.same_domain(other) {
            panic!("{e}");
        }
    }

    pub fn eval(&self, t: &F::Elem) -> F::Elem {
        let f = &self.field;
        let mut acc = f.zero();
        for c in self.coeffs.iter().rev() {
            acc = f.add(&f.mul(&acc, t), c);
        }
        acc
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        if f.is_zero(c) {
            return Self::zero(f.clone());
        }
        UPoly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|a| f.mul(a, c)).collect(),
        }
    }

    /// Multiplies by `t^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![self.field.zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        UPoly {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn derivative(&self) -> Self {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| f.mul(c, &f.from_i64(i as i64)))
            .collect();
        Self::new(f.clone(), coeffs)
    }

    /// Normalizes to leading coefficient 1; the zero polynomial stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_coeff() {
            None => self.clone(),
            Some(lc) => {
                let inv = self.field.inv(lc).expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.field.clone());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        self.same_domain(d)?;
        let f = &self.field;
        let Some(dl) = d.leading_coeff() else {
            return Err(Error::Degenerate("division by the zero polynomial".into()));
        };
        let dn = d.coeffs.len();
        if self.coeffs.len() < dn {
            return Ok((Self::zero(f.clone()), self.clone()));
        }
        let inv = f.inv(dl).expect("leading coefficient is nonzero");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![f.zero(); rem.len() - dn + 1];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dn - 1];
            if f.is_zero(c) {
                continue;
            }
            let qc = f.mul(c, &inv);
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = f.sub(&rem[i + j], &f.mul(&qc, dc));
            }
            quot[i] = qc;
        }
        rem.truncate(dn - 1);
        Ok((Self::new(f.clone(), quot), Self::new(f.clone(), rem)))
    }

    pub fn rem(&self, d: &Self) -> Result<Self> {
        Ok(self.div_rem(d)?.1)
    }

    /// Quotient when `d` divides `self` exactly, `None` otherwise.
    pub fn exact_div(&self, d: &Self) -> Result<Option<Self>> {
        let (q, r) = self.div_rem(d)?;
        Ok(r.is_zero().then_some(q))
    }

    pub fn divides(&self, other: &Self) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    /// Monic greatest common divisor; `gcd(a, 0)` is `monic(a)`.
    pub fn gcd(&self, other: &Self) -> Result<Self> {
        self.same_domain(other)?;
        let (mut a, mut b) = (self.monic(), other.monic());
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r.monic();
        }
        Ok(a.monic())
    }

    /// Square-free part `self / gcd(self, self')`, made monic.
    pub fn squarefree_part(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Degenerate("square-free part of zero".into()));
        }
        let g = self.gcd(&self.derivative())?;
        let q = self
            .exact_div(&g)?
            .ok_or_else(|| Error::Inconsistency("gcd does not divide".into()))?;
        Ok(q.monic())
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        self.assert_domain(other);
        let f = &self.field;
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b, negate) {
                (Some(a), Some(b), false) => f.add(a, b),
                (Some(a), Some(b), true) => f.sub(a, b),
                (Some(a), None, _) => a.clone(),
                (None, Some(b), false) => b.clone(),
                (None, Some(b), true) => f.neg(b),
                (None, None, _) => unreachable!(),
            });
        }
        Self::new(f.clone(), out)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        self.assert_domain(other);
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f.clone());
        }
        let mut out = vec![f.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.add(&out[i + j], &f.mul(a, b));
            }
        }
        Self::new(f.clone(), out)
    }
}

impl<F: Field> Add for &UPoly<F> {
    type Output = UPoly<F>;
    fn add(self, rhs: Self) -> UPoly<F> {
        self.add_impl(rhs, false)
    }
}

impl<F: Field> Sub for &UPoly<F> {
    type Output = UPoly<F>;
    fn sub(self, rhs: Self) -> UPoly<F> {
        self.add_impl(rhs, true)
    }
}

impl<F: Field> Mul for &UPoly<F> {
    type Output = UPoly<F>;
    fn mul(self, rhs: Self) -> UPoly<F> {
        self.mul_impl(rhs)
    }
}

impl<F: Field> Neg for &UPoly<F> {
    type Output = UPoly<F>;
    fn neg(self) -> UPoly<F> {
        let f = &self.field;
        UPoly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|c| f.neg(c)).collect(),
        }
    }
}

/// The polynomial ring `F[t]` as a [`Ring`] context, for generic linear algebra.
#[derive(Clone, Debug, PartialEq)]
pub struct UPolyRing<F: Field> {
    pub field: F,
}

impl<F: Field> UPolyRing<F> {
    pub fn new(field: F) -> Self {
        UPolyRing { field }
    }
}

impl<F: Field> Ring for UPolyRing<F> {
    type Elem = UPoly<F>;

    fn zero(&self) -> UPoly<F> {
        UPoly::zero(self.field.clone())
    }
    fn one(&self) -> UPoly<F> {
        UPoly::one(self.field.clone())
    }
    fn is_zero(&self, a: &UPoly<F>) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
        a + b
    }
    fn sub(&self, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
        a - b
    }
    fn mul(&self, a: &UPoly<F>, b: &UPoly<F>) -> UPoly<F> {
        a * b
    }
    fn neg(&self, a: &UPoly<F>) -> UPoly<F> {
        -a
    }
    fn from_i64(&self, v: i64) -> UPoly<F> {
        UPoly::constant(self.field.clone(), self.field.from_i64(v))
    }
}

/// Divides every entry of a tuple by the gcd of the whole tuple.
///
/// Returns the reduced tuple and the degree of the removed gcd. The gcd is
/// seeded from one entry and a fixed linear combination of the others, then
/// refined against every entry that it fails to divide, so the result is the
/// exact tuple gcd regardless of how good the seed was.
pub fn tuple_content_reduce<F: Field>(polys: &[UPoly<F>]) -> Result<(Vec<UPoly<F>>, usize)> {
    let Some(first) = polys.iter().position(|p| !p.is_zero()) else {
        return Err(Error::Degenerate("all entries of the tuple are zero".into()));
    };
    for p in polys {
        polys[first].same_domain(p)?;
    }
    let field = polys[first].field.clone();
    let mut combo = UPoly::zero(field.clone());
    for (i, p) in polys.iter().enumerate() {
        if i != first && !p.is_zero() {
            combo = &combo + &p.scale(&field.from_i64(i as i64 + 1));
        }
    }
    let mut g = polys[first].gcd(&combo)?;
    for p in polys {
        if g.degree() == Some(0) {
            break;
        }
        if !g.divides(p)? {
            g = g.gcd(p)?;
        }
    }
    let removed = g.degree().unwrap_or(0);
    if removed == 0 {
        return Ok((polys.to_vec(), 0));
    }
    let reduced = polys
        .iter()
        .map(|p| {
            p.exact_div(&g)?
                .ok_or_else(|| Error::Inconsistency("tuple gcd does not divide an entry".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((reduced, removed))
}

/// Maximum degree over a tuple (`None` when every entry is zero).
pub fn max_degree<F: Field>(polys: &[UPoly<F>]) -> Option<usize> {
    polys.iter().filter_map(UPoly::degree).max()
}
