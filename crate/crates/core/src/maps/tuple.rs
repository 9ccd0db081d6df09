//! The maps applied to tuples of univariate polynomials (a curve in `P(M_q)`).
//!
//! A tuple holds `q^2` entries, row-major. Two routes compute the reduced
//! composition on a tuple: the cofactor route (reciprocal-numerator products,
//! signed minors, exact division by `prod^(q-2)`) and the interpolation route
//! (pointwise evaluation at consecutive integers, then Newton interpolation).

use crate::arith::field::Field;
use crate::arith::linalg::{det_expand, minor_matrix};
use crate::arith::upoly::{max_degree, UPoly, UPolyRing};
use crate::error::{Error, Result};
use crate::maps::matrix::Matrix;
use crate::maps::pointwise::{all_but_one, khat_matrix};

fn check_tuple<F: Field>(tuple: &[UPoly<F>]) -> Result<(usize, F)> {
    let q = (tuple.len() as f64).sqrt().round() as usize;
    if q < 2 || q * q != tuple.len() {
        return Err(Error::InvalidInput(format!(
            "tuple of length {} is not q^2 with q >= 2",
            tuple.len()
        )));
    }
    let field = tuple[0].field().clone();
    for p in tuple {
        tuple[0].same_domain(p)?;
    }
    Ok((q, field))
}

fn as_rows<F: Field>(q: usize, tuple: &[UPoly<F>]) -> Vec<Vec<UPoly<F>>> {
    tuple.chunks(q).map(|r| r.to_vec()).collect()
}

/// Product of every entry.
pub fn tuple_product<F: Field>(tuple: &[UPoly<F>]) -> Result<UPoly<F>> {
    let (_, field) = check_tuple(tuple)?;
    Ok(tuple.iter().fold(UPoly::one(field), |acc, p| &acc * p))
}

/// Reciprocal-numerator map on a tuple, by prefix and suffix products.
pub fn jhat_tuple<F: Field>(tuple: &[UPoly<F>]) -> Result<Vec<UPoly<F>>> {
    let (_, field) = check_tuple(tuple)?;
    Ok(all_but_one(&UPolyRing::new(field), tuple))
}

/// Cofactor map on a tuple: signed minors, computed division-free.
pub fn ihat_tuple<F: Field>(tuple: &[UPoly<F>]) -> Result<Vec<UPoly<F>>> {
    let (q, field) = check_tuple(tuple)?;
    let ring = UPolyRing::new(field);
    let rows = as_rows(q, tuple);
    let mut out = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            let d = det_expand(&ring, &minor_matrix(&rows, j, i));
            out.push(if (i + j) % 2 == 0 { d } else { -&d });
        }
    }
    Ok(out)
}

/// Determinant of the `q x q` matrix held by a tuple.
pub fn det_tuple<F: Field>(tuple: &[UPoly<F>]) -> Result<UPoly<F>> {
    let (q, field) = check_tuple(tuple)?;
    Ok(det_expand(&UPolyRing::new(field), &as_rows(q, tuple)))
}

/// Reduced composition on a tuple by the cofactor route.
///
/// Fails with an internal-inconsistency error if some component is not
/// divisible by `prod^(q-2)`, and with a degenerate-input error if the
/// product vanishes identically (the curve lies in a coordinate hyperplane).
pub fn khat_tuple_cofactor<F: Field>(tuple: &[UPoly<F>]) -> Result<Vec<UPoly<F>>> {
    let (q, _) = check_tuple(tuple)?;
    let prod = tuple_product(tuple)?;
    if prod.is_zero() {
        return Err(Error::Degenerate(
            "curve lies in a coordinate hyperplane; cofactor route needs a nonzero product".into(),
        ));
    }
    let composed = ihat_tuple(&jhat_tuple(tuple)?)?;
    let divisor = prod.pow(q as u32 - 2);
    composed
        .iter()
        .map(|c| {
            c.exact_div(&divisor)?.ok_or_else(|| {
                Error::Inconsistency("composed component not divisible by prod^(q-2)".into())
            })
        })
        .collect()
}

/// Polynomial of degree `< values.len()` taking `values[k]` at `t = k`.
///
/// Newton forward differences; requires the characteristic to exceed the
/// number of nodes.
pub fn interpolate_consecutive<F: Field>(field: &F, values: &[F::Elem]) -> UPoly<F> {
    let n = values.len();
    if n == 0 {
        return UPoly::zero(field.clone());
    }
    let mut d = values.to_vec();
    for k in 1..n {
        for i in (k..n).rev() {
            d[i] = field.sub(&d[i], &d[i - 1]);
        }
    }
    // Divided differences c_k = Delta^k f(0) / k!.
    let mut fact_inv = field.one();
    for (k, dk) in d.iter_mut().enumerate().skip(1) {
        let kk = field.from_i64(k as i64);
        fact_inv = field.mul(&fact_inv, &field.inv(&kk).expect("characteristic exceeds node count"));
        *dk = field.mul(dk, &fact_inv);
    }
    // Horner in the Newton basis t (t-1) ... (t-k+1).
    let mut acc: Vec<F::Elem> = vec![d[n - 1].clone()];
    for k in (0..n - 1).rev() {
        // acc = acc * (t - k) + d[k]
        let shift = field.from_i64(k as i64);
        let mut next = vec![field.zero(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = field.add(&next[i + 1], a);
            next[i] = field.sub(&next[i], &field.mul(a, &shift));
        }
        next[0] = field.add(&next[0], &d[k]);
        acc = next;
    }
    UPoly::new(field.clone(), acc)
}

/// Reduced composition on a tuple by evaluation and interpolation.
///
/// The components have degree at most `(q^2 - q + 1) * D` for input degree `D`,
/// so that many plus one consecutive nodes determine them.
pub fn khat_tuple_interpolate<F: Field>(tuple: &[UPoly<F>]) -> Result<Vec<UPoly<F>>> {
    let (q, field) = check_tuple(tuple)?;
    let d = max_degree(tuple).unwrap_or(0);
    let nodes = (q * q - q + 1) * d + 1;
    let mut columns: Vec<Vec<F::Elem>> = vec![Vec::with_capacity(nodes); q * q];
    for k in 0..nodes {
        let t = field.from_i64(k as i64);
        let entries: Vec<F::Elem> = tuple.iter().map(|p| p.eval(&t)).collect();
        let x = Matrix::new(field.clone(), q, entries)?;
        let y = khat_matrix(&x)?;
        for (col, v) in columns.iter_mut().zip(y.into_entries()) {
            col.push(v);
        }
    }
    Ok(columns
        .iter()
        .map(|vals| interpolate_consecutive(&field, vals))
        .collect())
}

/// Restricts a point-valued `q x q` matrix of polynomials to its value at `t`.
pub fn eval_tuple<F: Field>(tuple: &[UPoly<F>], t: &F::Elem) -> Result<Matrix<F>> {
    let (q, field) = check_tuple(tuple)?;
    Matrix::new(field, q, tuple.iter().map(|p| p.eval(t)).collect())
}

/// The line `a + t b` as a tuple.
pub fn line_tuple<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Result<Vec<UPoly<F>>> {
    if a.q() != b.q() || a.field() != b.field() {
        return Err(Error::DomainMismatch("line endpoints differ".into()));
    }
    let f = a.field().clone();
    Ok(a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| UPoly::linear(f.clone(), x.clone(), y.clone()))
        .collect())
}

/// True when every entry of the tuple is the zero polynomial.
pub fn tuple_is_zero<F: Field>(tuple: &[UPoly<F>]) -> bool {
    tuple.iter().all(|p| p.is_zero())
}
