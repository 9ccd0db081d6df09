//! Square matrices over a field and projective points of `P(M_q)`.

use std::fmt;

use num_rational::BigRational;
use rand::Rng;
use serde_json::Value;

use crate::arith::field::{parse_rational, Field, PrimeField, Rationals};
use crate::arith::linalg::{det_field, inverse_field, rank_bareiss};
use crate::error::{Error, Result};

/// Affine `q x q` matrix with entries in `F`, stored row-major.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    q: usize,
    entries: Vec<F::Elem>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix[{}]", self.field.tag())?;
        for r in 0..self.q {
            write!(f, "\n  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, q: usize, entries: Vec<F::Elem>) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidSize(q));
        }
        if entries.len() != q * q {
            return Err(Error::InvalidInput(format!(
                "expected {} entries for q = {q}, got {}",
                q * q,
                entries.len()
            )));
        }
        Ok(Matrix { field, q, entries })
    }

    pub fn from_rows(field: F, rows: Vec<Vec<F::Elem>>) -> Result<Self> {
        let q = rows.len();
        if rows.iter().any(|r| r.len() != q) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Self::new(field, q, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(field: F, q: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let entries = (0..q * q).map(|k| f(k / q, k % q)).collect();
        Matrix { field, q, entries }
    }

    pub fn zeros(field: F, q: usize) -> Self {
        let z = field.zero();
        Self::from_fn(field, q, |_, _| z.clone())
    }

    pub fn identity(field: F, q: usize) -> Self {
        let (z, o) = (field.zero(), field.one());
        Self::from_fn(field, q, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    /// Matrix with independent uniform nonzero entries.
    pub fn random_nonzero<R: Rng + ?Sized>(field: F, q: usize, rng: &mut R) -> Self
    where
        F: RandomElem,
    {
        Self::from_fn(field.clone(), q, |_, _| field.random_nonzero_elem(rng))
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn entries(&self) -> &[F::Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<F::Elem> {
        self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.entries[i * self.q + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.entries[i * self.q + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.entries[i * self.q..(i + 1) * self.q]
    }

    pub fn rows(&self) -> Vec<Vec<F::Elem>> {
        (0..self.q).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| self.field.is_zero(e))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.field.clone(), self.q, |i, j| self.get(j, i).clone())
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        Self::from_fn(self.field.clone(), self.q, |i, j| self.field.mul(c, self.get(i, j)))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.q != other.q || self.field != other.field {
            return Err(Error::DomainMismatch("matrix product operands differ".into()));
        }
        let f = &self.field;
        Ok(Self::from_fn(f.clone(), self.q, |i, j| {
            (0..self.q).fold(f.zero(), |acc, k| {
                f.add(&acc, &f.mul(self.get(i, k), other.get(k, j)))
            })
        }))
    }

    /// Submatrix with row `r` and column `c` removed.
    pub fn minor(&self, r: usize, c: usize) -> Self {
        let n = self.q - 1;
        Self::from_fn(self.field.clone(), n, |i, j| {
            let a = if i < r { i } else { i + 1 };
            let b = if j < c { j } else { j + 1 };
            self.get(a, b).clone()
        })
    }

    /// Lower-right block obtained by dropping the first row and column.
    pub fn lower_block(&self) -> Self {
        self.minor(0, 0)
    }

    pub fn rank(&self) -> usize {
        rank_bareiss(&self.field, &self.rows())
    }

    pub fn det(&self) -> F::Elem {
        det_field(&self.field, &self.rows())
    }

    pub fn inverse(&self) -> Option<Self> {
        let (inv, _) = inverse_field(&self.field, &self.rows())?;
        Some(Self::from_rows(self.field.clone(), inv).expect("square"))
    }

    /// Entrywise reciprocal; `None` if an entry is zero.
    pub fn hadamard_inverse(&self) -> Option<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| self.field.inv(e))
            .collect::<Option<Vec<_>>>()?;
        Some(Matrix {
            field: self.field.clone(),
            q: self.q,
            entries,
        })
    }

    /// Product of all entries.
    pub fn entry_product(&self) -> F::Elem {
        self.entries
            .iter()
            .fold(self.field.one(), |acc, e| self.field.mul(&acc, e))
    }
}

/// Fields that can draw random nonzero elements.
pub trait RandomElem: Field {
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Elem;
}

impl RandomElem for PrimeField {
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.random_nonzero(rng)
    }
}

impl RandomElem for Rationals {
    /// Uniform integer in `[1, 10^6]`.
    fn random_nonzero_elem<R: Rng + ?Sized>(&self, rng: &mut R) -> BigRational {
        BigRational::from_integer(rng.gen_range(1i64..=1_000_000).into())
    }
}

/// Outer product `(a_i b_j)`.
pub fn outer<F: Field>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Result<Matrix<F>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::InvalidInput("outer product of vectors of different lengths".into()));
    }
    if a.iter().all(|x| field.is_zero(x)) || b.iter().all(|x| field.is_zero(x)) {
        return Err(Error::InvalidInput("outer product with a zero vector".into()));
    }
    Ok(Matrix::from_fn(field.clone(), a.len(), |i, j| field.mul(&a[i], &b[j])))
}

/// A point of `P(M_q)`: a nonzero matrix up to scaling.
#[derive(Clone)]
pub struct ProjPoint<F: Field> {
    m: Matrix<F>,
}

impl<F: Field> fmt::Debug for ProjPoint<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ProjPoint({:?})", self.m)
    }
}

impl<F: Field> ProjPoint<F> {
    pub fn new(m: Matrix<F>) -> Result<Self> {
        if m.is_zero() {
            return Err(Error::Degenerate("all coordinates vanish".into()));
        }
        Ok(ProjPoint { m })
    }

    pub fn matrix(&self) -> &Matrix<F> {
        &self.m
    }

    pub fn into_matrix(self) -> Matrix<F> {
        self.m
    }

    pub fn q(&self) -> usize {
        self.m.q
    }

    /// Representative whose first nonzero coordinate is 1.
    pub fn normalized(&self) -> Matrix<F> {
        let f = &self.m.field;
        let pivot = self.m.entries.iter().find(|e| !f.is_zero(e)).unwrap();
        self.m.scale(&f.inv(pivot).unwrap())
    }

    /// Representative with coordinate `(i, j)` equal to 1.
    pub fn dehomogenize(&self, i: usize, j: usize) -> Result<Matrix<F>> {
        let f = &self.m.field;
        let inv = f
            .inv(self.m.get(i, j))
            .ok_or_else(|| Error::ChartOutOfDomain(format!("coordinate ({i},{j}) vanishes")))?;
        Ok(self.m.scale(&inv))
    }
}

impl<F: Field> PartialEq for ProjPoint<F> {
    fn eq(&self, other: &Self) -> bool {
        proj_eq(&self.m, &other.m)
    }
}

/// Projective equality of two nonzero matrices: proportional coordinates.
pub fn proj_eq<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> bool {
    if a.q != b.q || a.field != b.field {
        return false;
    }
    let f = &a.field;
    let Some(k) = a.entries.iter().position(|e| !f.is_zero(e)) else {
        return false;
    };
    let (ak, bk) = (&a.entries[k], &b.entries[k]);
    if f.is_zero(bk) {
        return false;
    }
    a.entries
        .iter()
        .zip(&b.entries)
        .all(|(x, y)| f.mul(x, bk) == f.mul(y, ak))
}

/// `chi_t`: scales row `k` and column `k` by `t` (the shared entry by `t^2`).
pub fn chi_scale<F: Field>(x: &ProjPoint<F>, t: &F::Elem, k: usize) -> Result<ProjPoint<F>> {
    let f = x.m.field.clone();
    if f.is_zero(t) {
        return Err(Error::InvalidInput("chi scaling by zero".into()));
    }
    if k >= x.q() {
        return Err(Error::InvalidIndex(format!("{k} >= q = {}", x.q())));
    }
    let mut m = x.m.clone();
    for j in 0..m.q {
        let v = f.mul(m.get(k, j), t);
        m.set(k, j, v);
    }
    for i in 0..m.q {
        let v = f.mul(m.get(i, k), t);
        m.set(i, k, v);
    }
    ProjPoint::new(m)
}

/// Entry permutations interchanging two rows or two columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Swap {
    Rows(usize, usize),
    Cols(usize, usize),
}

impl Swap {
    pub fn transposed(self) -> Swap {
        match self {
            Swap::Rows(a, b) => Swap::Cols(a, b),
            Swap::Cols(a, b) => Swap::Rows(a, b),
        }
    }
}

pub fn permute<F: Field>(x: &ProjPoint<F>, swap: Swap) -> Result<ProjPoint<F>> {
    let q = x.q();
    let (a, b) = match swap {
        Swap::Rows(a, b) | Swap::Cols(a, b) => (a, b),
    };
    if a >= q || b >= q {
        return Err(Error::InvalidIndex(format!("swap ({a},{b}) with q = {q}")));
    }
    let tr = |i: usize| if i == a { b } else if i == b { a } else { i };
    let m = &x.m;
    let out = match swap {
        Swap::Rows(..) => Matrix::from_fn(m.field.clone(), q, |i, j| m.get(tr(i), j).clone()),
        Swap::Cols(..) => Matrix::from_fn(m.field.clone(), q, |i, j| m.get(i, tr(j)).clone()),
    };
    Ok(ProjPoint { m: out })
}

/// Parses a JSON matrix literal: an array of rows holding integers or `"num/den"` strings.
pub fn parse_matrix_literal(text: &str) -> Result<Matrix<Rationals>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse("matrix literal must be an array of rows".into()))?;
    let mut out = Vec::with_capacity(rows.len());
    for row in rows {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Parse("each row must be an array".into()))?;
        let mut r = Vec::with_capacity(row.len());
        for e in row {
            r.push(match e {
                Value::Number(n) if n.is_i64() || n.is_u64() => parse_rational(&n.to_string())?,
                Value::String(s) => parse_rational(s)?,
                other => return Err(Error::Parse(format!("unsupported entry {other}"))),
            });
        }
        out.push(r);
    }
    Matrix::from_rows(Rationals, out)
}
