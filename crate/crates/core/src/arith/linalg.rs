//! Dense linear algebra: division-free determinants and characteristic
//! polynomials over any commutative ring, elimination over fields, and an
//! arbitrary-precision integer matrix type.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::arith::field::{Field, Integers, Rationals, Ring};
use crate::arith::upoly::UPoly;
use crate::error::{Error, Result};

/// Division-free determinant by expansion over column subsets.
///
/// Costs `O(n 2^n)` ring multiplications, which is what the small
/// polynomial-entry matrices here need (no exact division in the entry ring).
pub fn det_expand<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> R::Elem {
    let n = m.len();
    if n == 0 {
        return ring.one();
    }
    assert!(n <= 20, "subset expansion is limited to n <= 20");
    let mut dp: Vec<Option<R::Elem>> = vec![None; 1 << n];
    dp[0] = Some(ring.one());
    for (row, entries) in m.iter().enumerate() {
        let mut next: Vec<Option<R::Elem>> = vec![None; 1 << n];
        for mask in 0usize..(1 << n) {
            if mask.count_ones() as usize != row {
                continue;
            }
            let Some(acc) = dp[mask].take() else { continue };
            if ring.is_zero(&acc) {
                continue;
            }
            for (col, entry) in entries.iter().enumerate() {
                if mask & (1 << col) != 0 || ring.is_zero(entry) {
                    continue;
                }
                let above = (mask >> (col + 1)).count_ones();
                let term = ring.mul(&acc, entry);
                let slot = &mut next[mask | (1 << col)];
                *slot = Some(match slot.take() {
                    None if above % 2 == 0 => term,
                    None => ring.neg(&term),
                    Some(s) if above % 2 == 0 => ring.add(&s, &term),
                    Some(s) => ring.sub(&s, &term),
                });
            }
        }
        dp = next;
    }
    dp[(1 << n) - 1].take().unwrap_or_else(|| ring.zero())
}

/// Matrix with row `skip_row` and column `skip_col` removed.
pub fn minor_matrix<T: Clone>(m: &[Vec<T>], skip_row: usize, skip_col: usize) -> Vec<Vec<T>> {
    m.iter()
        .enumerate()
        .filter(|(r, _)| *r != skip_row)
        .map(|(_, row)| {
            row.iter()
                .enumerate()
                .filter(|(c, _)| *c != skip_col)
                .map(|(_, v)| v.clone())
                .collect()
        })
        .collect()
}

/// Adjugate (transposed cofactor matrix): `adj[i][j] = (-1)^(i+j) det(m_[j,i])`.
pub fn adjugate_expand<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Vec<Vec<R::Elem>> {
    let n = m.len();
    let mut out = vec![vec![ring.zero(); n]; n];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, slot) in row.iter_mut().enumerate() {
            let d = det_expand(ring, &minor_matrix(m, j, i));
            *slot = if (i + j) % 2 == 0 { d } else { ring.neg(&d) };
        }
    }
    out
}

/// Berkowitz's division-free characteristic polynomial `det(t I - m)`.
///
/// Returned highest degree first: `[1, c_{n-1}, ..., c_0]`.
pub fn berkowitz<R: Ring>(ring: &R, m: &[Vec<R::Elem>]) -> Vec<R::Elem> {
    let n = m.len();
    let mut poly = vec![ring.one()];
    for k in 0..n {
        // Leading (k+1)x(k+1) block: [[A_k, C], [R, a]].
        let a = &m[k][k];
        let column: Vec<R::Elem> = (0..k).map(|i| m[i][k].clone()).collect();
        let rows: Vec<Vec<(usize, &R::Elem)>> = (0..k)
            .map(|i| {
                (0..k)
                    .filter(|&j| !ring.is_zero(&m[i][j]))
                    .map(|j| (j, &m[i][j]))
                    .collect()
            })
            .collect();
        let row_k: Vec<(usize, &R::Elem)> = (0..k)
            .filter(|&j| !ring.is_zero(&m[k][j]))
            .map(|j| (j, &m[k][j]))
            .collect();
        // Toeplitz column: 1, -a, -R C, -R A C, ..., -R A^{k-1} C.
        let mut toeplitz = Vec::with_capacity(k + 2);
        toeplitz.push(ring.one());
        toeplitz.push(ring.neg(a));
        let mut v = column;
        for step in 0..k {
            let mut dot = ring.zero();
            for &(j, e) in &row_k {
                if !ring.is_zero(&v[j]) {
                    dot = ring.add(&dot, &ring.mul(e, &v[j]));
                }
            }
            toeplitz.push(ring.neg(&dot));
            if step + 1 < k {
                v = rows
                    .iter()
                    .map(|r| {
                        let mut s = ring.zero();
                        for &(j, e) in r {
                            if !ring.is_zero(&v[j]) {
                                s = ring.add(&s, &ring.mul(e, &v[j]));
                            }
                        }
                        s
                    })
                    .collect();
            }
        }
        let mut next = Vec::with_capacity(k + 2);
        for i in 0..k + 2 {
            let mut s = ring.zero();
            for (j, pj) in poly.iter().enumerate() {
                if j > i {
                    break;
                }
                let t = &toeplitz[i - j];
                if !ring.is_zero(t) && !ring.is_zero(pj) {
                    s = ring.add(&s, &ring.mul(t, pj));
                }
            }
            next.push(s);
        }
        poly = next;
    }
    poly
}

/// Determinant over a field by Gaussian elimination.
pub fn det_field<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> F::Elem {
    let n = m.len();
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let mut det = field.one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !field.is_zero(&a[r][col])) else {
            return field.zero();
        };
        if piv != col {
            a.swap(piv, col);
            det = field.neg(&det);
        }
        let p = a[col][col].clone();
        det = field.mul(&det, &p);
        let inv = field.inv(&p).unwrap();
        for r in col + 1..n {
            if field.is_zero(&a[r][col]) {
                continue;
            }
            let factor = field.mul(&a[r][col], &inv);
            for c in col..n {
                let v = field.mul(&factor, &a[col][c]);
                a[r][c] = field.sub(&a[r][c], &v);
            }
        }
    }
    det
}

/// Inverse and determinant over a field; `None` when singular.
pub fn inverse_field<F: Field>(
    field: &F,
    m: &[Vec<F::Elem>],
) -> Option<(Vec<Vec<F::Elem>>, F::Elem)> {
    let n = m.len();
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let mut inv: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect())
        .collect();
    let mut det = field.one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !field.is_zero(&a[r][col]))?;
        if piv != col {
            a.swap(piv, col);
            inv.swap(piv, col);
            det = field.neg(&det);
        }
        let p = a[col][col].clone();
        det = field.mul(&det, &p);
        let pinv = field.inv(&p).unwrap();
        for c in 0..n {
            a[col][c] = field.mul(&a[col][c], &pinv);
            inv[col][c] = field.mul(&inv[col][c], &pinv);
        }
        for r in 0..n {
            if r == col || field.is_zero(&a[r][col]) {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let v = field.mul(&factor, &a[col][c]);
                a[r][c] = field.sub(&a[r][c], &v);
                let w = field.mul(&factor, &inv[col][c]);
                inv[r][c] = field.sub(&inv[r][c], &w);
            }
        }
    }
    Some((inv, det))
}

/// Rank by fraction-free (Bareiss) elimination.
pub fn rank_bareiss<F: Field>(field: &F, m: &[Vec<F::Elem>]) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut a: Vec<Vec<F::Elem>> = m.to_vec();
    let mut prev = field.one();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| !field.is_zero(&a[r][col])) else {
            continue;
        };
        a.swap(piv, rank);
        let p = a[rank][col].clone();
        for r in rank + 1..rows {
            for c in col + 1..cols {
                let v = field.sub(
                    &field.mul(&p, &a[r][c]),
                    &field.mul(&a[r][col], &a[rank][c]),
                );
                a[r][c] = field.div(&v, &prev).expect("Bareiss pivot is nonzero");
            }
            a[r][col] = field.zero();
        }
        prev = p;
        rank += 1;
    }
    rank
}

/// Coordinates of `target` in the span of `basis` (columns), or `None`.
pub fn solve_in_span(basis: &[Vec<BigRational>], target: &[BigRational]) -> Option<Vec<BigRational>> {
    let k = basis.len();
    let n = target.len();
    // Augmented n x (k+1) system.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|r| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b[r].clone()).collect();
            row.push(target[r].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(piv) = (row..n).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(piv, row);
        let p = a[row][col].clone();
        for c in col..=k {
            a[row][c] = &a[row][c] / &p;
        }
        for r in 0..n {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=k {
                    let v = &f * &a[row][c];
                    a[r][c] -= v;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if a[row..].iter().any(|r| !r[k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = a[r][k].clone();
    }
    Some(x)
}

/// Characteristic polynomial of a rational matrix, constant term first.
pub fn charpoly_rational(m: &[Vec<BigRational>]) -> UPoly<Rationals> {
    let mut c = berkowitz(&Rationals, m);
    c.reverse();
    UPoly::new(Rationals, c)
}

/// Square matrix of arbitrary-precision integers.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    n: usize,
    rows: Vec<Vec<BigInt>>,
}

impl fmt::Debug for IntMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMat {}x{}", self.n, self.n)?;
        for r in &self.rows {
            writeln!(f, "  {r:?}")?;
        }
        Ok(())
    }
}

impl Serialize for IntMat {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // Entries here are small; fall back to strings if one ever is not.
        let rows: Vec<Vec<serde_json::Value>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(bigint_json).collect())
            .collect();
        rows.serialize(s)
    }
}

/// JSON number when the integer fits in `i64`, decimal string otherwise.
pub fn bigint_json(v: &BigInt) -> serde_json::Value {
    use num_traits::ToPrimitive;
    match v.to_i64() {
        Some(x) => serde_json::Value::from(x),
        None => serde_json::Value::String(v.to_string()),
    }
}

impl IntMat {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("matrix is not square".into()));
        }
        Ok(IntMat { n, rows })
    }

    pub fn from_i64(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
                .collect(),
        )
    }

    pub fn zeros(n: usize) -> Self {
        assert!(n > 0);
        IntMat {
            n,
            rows: vec![vec![BigInt::zero(); n]; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.rows[i][i] = BigInt::one();
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.rows[r][c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.rows[r][c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: i64) {
        self.rows[r][c] += v;
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        self.rows.iter().map(|r| r[c].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.n);
        for r in 0..self.n {
            for c in 0..self.n {
                t.rows[c][r] = self.rows[r][c].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let mut out = Self::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = &self.rows[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = &other.rows[k][j];
                    if !b.is_zero() {
                        out.rows[i][j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.n);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn scale_add(&self, k: &BigInt, other: &Self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.rows[i][j] = &self.rows[i][j] * k + &other.rows[i][j];
            }
        }
        out
    }

    /// Principal submatrix on the given indices.
    pub fn submatrix(&self, idx: &[usize]) -> Result<Self> {
        Self::new(
            idx.iter()
                .map(|&r| idx.iter().map(|&c| self.rows[r][c].clone()).collect())
                .collect(),
        )
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        let n = self.n;
        let mut a = self.rows.clone();
        let mut prev = BigInt::one();
        let mut sign = BigInt::one();
        for k in 0..n {
            let Some(piv) = (k..n).find(|&r| !a[r][k].is_zero()) else {
                return BigInt::zero();
            };
            if piv != k {
                a.swap(piv, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[k][k] * &a[i][j] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = BigInt::zero();
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    /// Exact characteristic polynomial `det(t I - m)`, constant term first,
    /// computed division-free over the integers.
    pub fn charpoly(&self) -> UPoly<Rationals> {
        let mut c = berkowitz(&Integers, &self.rows);
        c.reverse();
        UPoly::new(
            Rationals,
            c.into_iter().map(BigRational::from_integer).collect(),
        )
    }

    /// Evaluates an integer-coefficient polynomial at this matrix (Horner).
    pub fn eval_poly(&self, p: &[BigInt]) -> Self {
        let mut acc = Self::zeros(self.n);
        for c in p.iter().rev() {
            acc = acc.mul(self).expect("square");
            for i in 0..self.n {
                acc.rows[i][i] += c;
            }
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.iter().all(Zero::is_zero))
    }
}

/// Integer coefficients of a rational polynomial, if all are integral.
pub fn integer_coeffs(p: &UPoly<Rationals>) -> Option<Vec<BigInt>> {
    p.coeffs()
        .iter()
        .map(|c| c.is_integer().then(|| c.to_integer()))
        .collect()
}
