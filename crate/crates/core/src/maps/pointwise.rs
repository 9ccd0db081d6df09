//! Point evaluation of the cofactor map, the reciprocal-numerator map and their
//! reduced composition, for any `q` and any point (zeros allowed).

use crate::arith::field::{Field, Ring};
use crate::error::{Error, Result};
use crate::maps::matrix::{Matrix, ProjPoint};

/// Outcome of evaluating a map at a point.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalOutcome<F: Field> {
    Point(ProjPoint<F>),
    /// Every component vanished: the point is in the indeterminacy locus.
    Indeterminate,
}

impl<F: Field> EvalOutcome<F> {
    pub fn from_matrix(m: Matrix<F>) -> Self {
        match ProjPoint::new(m) {
            Ok(p) => EvalOutcome::Point(p),
            Err(_) => EvalOutcome::Indeterminate,
        }
    }

    pub fn point(&self) -> Option<&ProjPoint<F>> {
        match self {
            EvalOutcome::Point(p) => Some(p),
            EvalOutcome::Indeterminate => None,
        }
    }

    pub fn is_indeterminate(&self) -> bool {
        matches!(self, EvalOutcome::Indeterminate)
    }
}

fn check_q<F: Field>(x: &Matrix<F>) -> Result<()> {
    if x.q() < 2 {
        return Err(Error::InvalidSize(x.q()));
    }
    Ok(())
}

/// Cofactor map: `(i, j) -> (-1)^(i+j) det(x_[j,i])`, i.e. the adjugate.
pub fn ihat_matrix<F: Field>(x: &Matrix<F>) -> Result<Matrix<F>> {
    check_q(x)?;
    let f = x.field().clone();
    Ok(Matrix::from_fn(f.clone(), x.q(), |i, j| {
        let d = x.minor(j, i).det();
        if (i + j) % 2 == 0 {
            d
        } else {
            f.neg(&d)
        }
    }))
}

/// Products of all entries but one, by prefix and suffix products.
pub fn all_but_one<R: Ring>(field: &R, v: &[R::Elem]) -> Vec<R::Elem> {
    let n = v.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(field.one());
    for e in v {
        let next = field.mul(prefix.last().unwrap(), e);
        prefix.push(next);
    }
    let mut out = vec![field.one(); n];
    let mut suffix = field.one();
    for k in (0..n).rev() {
        out[k] = field.mul(&prefix[k], &suffix);
        suffix = field.mul(&suffix, &v[k]);
    }
    out
}

/// Reciprocal-numerator map: `(i, j) ->` product of every entry except `x_ij`.
pub fn jhat_matrix<F: Field>(x: &Matrix<F>) -> Result<Matrix<F>> {
    check_q(x)?;
    let f = x.field().clone();
    let entries = all_but_one(&f, x.entries());
    Matrix::new(f, x.q(), entries)
}

/// Reduced composition `K(x)_ij = C_ji(1/x) * prod(x)`.
///
/// With all entries nonzero and `1/x` invertible this is `prod(x) det(y) y^-1`
/// for `y = 1/x`. Otherwise each component is expanded zero-safely as
/// `(-1)^(i+j) * prod(row j, col i) * det(G)`, where on the minor `m = x_[j,i]`
/// `G_ab` is the product of row `a` of `m` without column `b`.
pub fn khat_matrix<F: Field>(x: &Matrix<F>) -> Result<Matrix<F>> {
    check_q(x)?;
    if let Some(y) = x.hadamard_inverse() {
        if let Some(inv) = y.inverse() {
            let c = x.field().mul(&x.entry_product(), &y.det());
            return Ok(inv.scale(&c));
        }
    }
    Ok(khat_matrix_expanded(x))
}

/// Zero-safe expansion of the reduced composition (see [`khat_matrix`]).
pub fn khat_matrix_expanded<F: Field>(x: &Matrix<F>) -> Matrix<F> {
    let q = x.q();
    let f = x.field().clone();
    Matrix::from_fn(f.clone(), q, |i, j| {
        // Entries of row j and column i are never in a minor pattern.
        let mut cross = f.one();
        for b in 0..q {
            cross = f.mul(&cross, x.get(j, b));
        }
        for a in 0..q {
            if a != j {
                cross = f.mul(&cross, x.get(a, i));
            }
        }
        if f.is_zero(&cross) {
            return f.zero();
        }
        let m = x.minor(j, i);
        let g: Vec<Vec<F::Elem>> = (0..q - 1).map(|a| all_but_one(&f, m.row(a))).collect();
        let d = if q == 2 {
            f.one()
        } else {
            Matrix::from_rows(f.clone(), g).expect("square").det()
        };
        let v = f.mul(&cross, &d);
        if (i + j) % 2 == 0 {
            v
        } else {
            f.neg(&v)
        }
    })
}

pub fn eval_ihat<F: Field>(x: &ProjPoint<F>) -> Result<EvalOutcome<F>> {
    Ok(EvalOutcome::from_matrix(ihat_matrix(x.matrix())?))
}

pub fn eval_jhat<F: Field>(x: &ProjPoint<F>) -> Result<EvalOutcome<F>> {
    Ok(EvalOutcome::from_matrix(jhat_matrix(x.matrix())?))
}

pub fn eval_khat<F: Field>(x: &ProjPoint<F>) -> Result<EvalOutcome<F>> {
    Ok(EvalOutcome::from_matrix(khat_matrix(x.matrix())?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals, Ring};
    use crate::maps::matrix::RandomElem;
    use num_rational::BigRational;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn field() -> PrimeField {
        PrimeField::new((1u64 << 61) - 1).unwrap()
    }

    #[test]
    fn fast_and_expanded_routes_agree() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in 2..=5 {
            for _ in 0..10 {
                let x = Matrix::random_nonzero(f, q, &mut rng);
                assert_eq!(khat_matrix(&x).unwrap(), khat_matrix_expanded(&x));
            }
        }
    }

    #[test]
    fn khat_is_ihat_after_jhat() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for q in 2..=5 {
            let x = ProjPoint::new(Matrix::random_nonzero(f, q, &mut rng)).unwrap();
            let j = eval_jhat(&x).unwrap();
            let composed = eval_ihat(j.point().unwrap()).unwrap();
            assert_eq!(composed, eval_khat(&x).unwrap());
        }
    }

    #[test]
    fn expansion_matches_rational_definition() {
        // Direct oracle: prod(x) * adj(1/x) over Q.
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = Matrix::random_nonzero(Rationals, 4, &mut rng);
        let y = x.hadamard_inverse().unwrap();
        let adj = ihat_matrix(&y).unwrap();
        let expect = adj.scale(&x.entry_product());
        assert_eq!(khat_matrix_expanded(&x), expect);
    }

    #[test]
    fn jhat_with_one_zero_entry() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut x = Matrix::random_nonzero(f, 3, &mut rng);
        x.set(1, 2, 0);
        let j = jhat_matrix(&x).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(f.is_zero(j.get(a, b)), (a, b) != (1, 2));
            }
        }
    }

    #[test]
    fn ihat_indeterminate_on_low_rank() {
        // Rank q-2 = 1 at q = 3.
        let r = |v: i64| BigRational::from_integer(v.into());
        let x = crate::maps::matrix::outer(&Rationals, &[r(1), r(2), r(3)], &[r(4), r(5), r(6)]).unwrap();
        assert!(eval_ihat(&ProjPoint::new(x).unwrap()).unwrap().is_indeterminate());
    }

    #[test]
    fn adjugate_identity_on_singular_matrices() {
        let f = field();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for q in 2..=5 {
            let mut x = Matrix::random_nonzero(f, q, &mut rng);
            // Make the last row a combination of the first two (singular when q >= 3).
            let c = f.random_nonzero_elem(&mut rng);
            for j in 0..q {
                let v = if q >= 3 {
                    f.add(x.get(0, j), &f.mul(&c, x.get(1, j)))
                } else {
                    f.mul(&c, x.get(0, j))
                };
                x.set(q - 1, j, v);
            }
            let adj = ihat_matrix(&x).unwrap();
            let prod = adj.mul(&x).unwrap();
            assert_eq!(prod, Matrix::identity(f, q).scale(&x.det()));
            assert!(f.is_zero(&x.det()));
        }
    }
}
