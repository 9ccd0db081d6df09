//! Local coordinate charts on the blown-up space, and exact checks of the
//! local behaviour of the reduced map in those charts.
//!
//! Indices are 0-based: the distinguished row and column are index 0, the
//! normalization slot `(k, l)` lies in the lower block (`1 <= k, l < q`), and
//! the cross-shaped normalization sits at `(0, r)` with `r >= 1`.

pub mod checks;

use serde::Serialize;

use crate::arith::field::Field;
use crate::arith::upoly::UPoly;
use crate::error::{Error, Result};
use crate::maps::matrix::{Matrix, ProjPoint, RandomElem};

pub use checks::{
    homogeneity_check, image_check, limit_check, rank_one_check, run_named_check,
    valuation_orders_check, ChartReport, Observation, CHECK_NAMES,
};

/// Default normalization slot in the lower block.
pub const DEFAULT_SLOT: (usize, usize) = (1, 1);
/// Default normalization column of the cross-shaped part.
pub const DEFAULT_R: usize = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ChartKind {
    /// Near the rank-one locus: `lambda (x) nu + s v`.
    RankOne,
    /// Near a coordinate hyperplane: `s zeta + v`.
    Hyperplane,
    /// Near the codimension-two center: `[[t^2 tau, t xi], [t xi, v]]`.
    Center,
}

fn check_slots(q: usize, slot: (usize, usize), r: usize) -> Result<()> {
    if q < 3 {
        return Err(Error::InvalidSize(q));
    }
    let (k, l) = slot;
    if k == 0 || l == 0 || k >= q || l >= q || r == 0 || r >= q {
        return Err(Error::InvalidIndex(format!("slot ({k},{l}), r = {r} with q = {q}")));
    }
    Ok(())
}

fn is_lower_block<F: Field>(v: &Matrix<F>) -> bool {
    let f = v.field();
    (0..v.q()).all(|i| f.is_zero(v.get(0, i)) && f.is_zero(v.get(i, 0)))
}

fn is_cross<F: Field>(z: &Matrix<F>) -> bool {
    let f = z.field();
    (1..z.q()).all(|i| (1..z.q()).all(|j| f.is_zero(z.get(i, j))))
}

fn scalar_div<F: Field>(m: &Matrix<F>, c: &F::Elem) -> Result<Matrix<F>> {
    let inv = m
        .field()
        .inv(c)
        .ok_or_else(|| Error::ChartOutOfDomain("normalization entry vanishes".into()))?;
    Ok(m.scale(&inv))
}

fn random_lower<F: RandomElem, R: rand::Rng + ?Sized>(
    f: &F,
    q: usize,
    slot: (usize, usize),
    rng: &mut R,
) -> Matrix<F> {
    let mut v = Matrix::from_fn(f.clone(), q, |i, j| {
        if i == 0 || j == 0 {
            f.zero()
        } else {
            f.random_nonzero_elem(rng)
        }
    });
    v.set(slot.0, slot.1, f.one());
    v
}

fn random_cross<F: RandomElem, R: rand::Rng + ?Sized>(
    f: &F,
    q: usize,
    r: usize,
    with_corner: bool,
    rng: &mut R,
) -> Matrix<F> {
    let mut z = Matrix::from_fn(f.clone(), q, |i, j| {
        if (i == 0 || j == 0) && (with_corner || i + j > 0) {
            f.random_nonzero_elem(rng)
        } else {
            f.zero()
        }
    });
    z.set(0, r, f.one());
    z
}

/// Matrix-valued polynomial `a + b u + c u^2` as a tuple.
fn quadratic_tuple<F: Field>(a: &Matrix<F>, b: &Matrix<F>, c: &Matrix<F>) -> Vec<UPoly<F>> {
    let f = a.field().clone();
    (0..a.entries().len())
        .map(|k| {
            UPoly::new(
                f.clone(),
                vec![a.entries()[k].clone(), b.entries()[k].clone(), c.entries()[k].clone()],
            )
        })
        .collect()
}

/// Point `lambda (x) nu + s v` with `lambda_0 = nu_0 = 1` and `v` in the lower block, `v_kl = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi1Chart<F: Field> {
    pub slot: (usize, usize),
    pub s: F::Elem,
    pub lambda: Vec<F::Elem>,
    pub nu: Vec<F::Elem>,
    pub v: Matrix<F>,
}

impl<F: Field> Pi1Chart<F> {
    pub fn new(
        slot: (usize, usize),
        s: F::Elem,
        lambda: Vec<F::Elem>,
        nu: Vec<F::Elem>,
        v: Matrix<F>,
    ) -> Result<Self> {
        let q = v.q();
        check_slots(q, slot, 1)?;
        let f = v.field();
        if lambda.len() != q || nu.len() != q {
            return Err(Error::InvalidInput("vector lengths differ from q".into()));
        }
        if !f.is_one(&lambda[0]) || !f.is_one(&nu[0]) || !f.is_one(v.get(slot.0, slot.1)) {
            return Err(Error::InvalidInput("normalization entries must equal 1".into()));
        }
        if !is_lower_block(&v) {
            return Err(Error::InvalidInput("v must vanish on the first row and column".into()));
        }
        Ok(Pi1Chart { slot, s, lambda, nu, v })
    }

    pub fn random<R: rand::Rng + ?Sized>(f: &F, q: usize, slot: (usize, usize), rng: &mut R) -> Result<Self>
    where
        F: RandomElem,
    {
        check_slots(q, slot, 1)?;
        let vec1 = |rng: &mut R| {
            let mut x: Vec<F::Elem> = (0..q).map(|_| f.random_nonzero_elem(rng)).collect();
            x[0] = f.one();
            x
        };
        let lambda = vec1(rng);
        let nu = vec1(rng);
        let v = random_lower(f, q, slot, rng);
        let s = f.random_nonzero_elem(rng);
        Pi1Chart::new(slot, s, lambda, nu, v)
    }

    pub fn q(&self) -> usize {
        self.v.q()
    }

    fn outer(&self) -> Matrix<F> {
        let f = self.v.field().clone();
        Matrix::from_fn(f.clone(), self.q(), |i, j| f.mul(&self.lambda[i], &self.nu[j]))
    }

    pub fn matrix(&self) -> Matrix<F> {
        let f = self.v.field().clone();
        let o = self.outer();
        let sv = self.v.scale(&self.s);
        Matrix::from_fn(f.clone(), self.q(), |i, j| f.add(o.get(i, j), sv.get(i, j)))
    }

    pub fn project(&self) -> Result<ProjPoint<F>> {
        ProjPoint::new(self.matrix())
    }

    /// The chart curve with `s` as the variable.
    pub fn tuple(&self) -> Vec<UPoly<F>> {
        let z = Matrix::zeros(self.v.field().clone(), self.q());
        quadratic_tuple(&self.outer(), &self.v, &z)
    }

    /// Normalizes at `(0, 0)`, reads `lambda` and `nu` off the first column
    /// and row, and `s` off the slot of the remainder.
    pub fn invert(x: &Matrix<F>, slot: (usize, usize)) -> Result<Self> {
        let q = x.q();
        check_slots(q, slot, 1)?;
        let f = x.field().clone();
        let y = scalar_div(x, x.get(0, 0))?;
        let lambda: Vec<F::Elem> = (0..q).map(|i| y.get(i, 0).clone()).collect();
        let nu: Vec<F::Elem> = y.row(0).to_vec();
        let rest = Matrix::from_fn(f.clone(), q, |i, j| {
            f.sub(y.get(i, j), &f.mul(&lambda[i], &nu[j]))
        });
        let s = rest.get(slot.0, slot.1).clone();
        if f.is_zero(&s) {
            return Err(Error::ChartOutOfDomain("point lies on the rank-one locus (s = 0)".into()));
        }
        let v = scalar_div(&rest, &s)?;
        Pi1Chart::new(slot, s, lambda, nu, v)
    }
}

/// Point `s zeta + v` with cross-shaped `zeta` (`zeta_0r = 1`) and lower-block `v` (`v_kl = 1`).
#[derive(Clone, Debug, PartialEq)]
pub struct Pi2Chart<F: Field> {
    pub slot: (usize, usize),
    pub r: usize,
    pub s: F::Elem,
    pub zeta: Matrix<F>,
    pub v: Matrix<F>,
}

impl<F: Field> Pi2Chart<F> {
    pub fn new(slot: (usize, usize), r: usize, s: F::Elem, zeta: Matrix<F>, v: Matrix<F>) -> Result<Self> {
        let q = v.q();
        check_slots(q, slot, r)?;
        let f = v.field();
        if zeta.q() != q || !is_cross(&zeta) || !is_lower_block(&v) {
            return Err(Error::InvalidInput("zeta must be cross-shaped and v lower-block".into()));
        }
        if !f.is_one(zeta.get(0, r)) || !f.is_one(v.get(slot.0, slot.1)) {
            return Err(Error::InvalidInput("normalization entries must equal 1".into()));
        }
        Ok(Pi2Chart { slot, r, s, zeta, v })
    }

    pub fn random<R: rand::Rng + ?Sized>(
        f: &F,
        q: usize,
        slot: (usize, usize),
        r: usize,
        rng: &mut R,
    ) -> Result<Self>
    where
        F: RandomElem,
    {
        check_slots(q, slot, r)?;
        let zeta = random_cross(f, q, r, true, rng);
        let v = random_lower(f, q, slot, rng);
        let s = f.random_nonzero_elem(rng);
        Pi2Chart::new(slot, r, s, zeta, v)
    }

    pub fn q(&self) -> usize {
        self.v.q()
    }

    pub fn matrix(&self) -> Matrix<F> {
        let f = self.v.field().clone();
        let sz = self.zeta.scale(&self.s);
        Matrix::from_fn(f.clone(), self.q(), |i, j| f.add(sz.get(i, j), self.v.get(i, j)))
    }

    pub fn project(&self) -> Result<ProjPoint<F>> {
        ProjPoint::new(self.matrix())
    }

    pub fn tuple(&self) -> Vec<UPoly<F>> {
        let z = Matrix::zeros(self.v.field().clone(), self.q());
        quadratic_tuple(&self.v, &self.zeta, &z)
    }

    pub fn invert(x: &Matrix<F>, slot: (usize, usize), r: usize) -> Result<Self> {
        let q = x.q();
        check_slots(q, slot, r)?;
        let f = x.field().clone();
        let y = scalar_div(x, x.get(slot.0, slot.1))?;
        let v = Matrix::from_fn(f.clone(), q, |i, j| {
            if i == 0 || j == 0 {
                f.zero()
            } else {
                y.get(i, j).clone()
            }
        });
        let s = y.get(0, r).clone();
        if f.is_zero(&s) {
            return Err(Error::ChartOutOfDomain("point lies on the exceptional hypersurface (s = 0)".into()));
        }
        let cross = Matrix::from_fn(f.clone(), q, |i, j| f.sub(y.get(i, j), v.get(i, j)));
        let zeta = scalar_div(&cross, &s)?;
        Pi2Chart::new(slot, r, s, zeta, v)
    }
}

/// Point `[[t^2 tau, t xi], [t xi, v]]` with `xi_00 = 0`, `xi_0r = 1`, `v_kl = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pi3Chart<F: Field> {
    pub slot: (usize, usize),
    pub r: usize,
    pub t: F::Elem,
    pub tau: F::Elem,
    pub xi: Matrix<F>,
    pub v: Matrix<F>,
}

impl<F: Field> Pi3Chart<F> {
    pub fn new(
        slot: (usize, usize),
        r: usize,
        t: F::Elem,
        tau: F::Elem,
        xi: Matrix<F>,
        v: Matrix<F>,
    ) -> Result<Self> {
        let q = v.q();
        check_slots(q, slot, r)?;
        let f = v.field();
        if xi.q() != q || !is_cross(&xi) || !f.is_zero(xi.get(0, 0)) || !is_lower_block(&v) {
            return Err(Error::InvalidInput(
                "xi must be cross-shaped with zero corner and v lower-block".into(),
            ));
        }
        if !f.is_one(xi.get(0, r)) || !f.is_one(v.get(slot.0, slot.1)) {
            return Err(Error::InvalidInput("normalization entries must equal 1".into()));
        }
        Ok(Pi3Chart { slot, r, t, tau, xi, v })
    }

    pub fn random<R: rand::Rng + ?Sized>(
        f: &F,
        q: usize,
        slot: (usize, usize),
        r: usize,
        rng: &mut R,
    ) -> Result<Self>
    where
        F: RandomElem,
    {
        check_slots(q, slot, r)?;
        let xi = random_cross(f, q, r, false, rng);
        let v = random_lower(f, q, slot, rng);
        let t = f.random_nonzero_elem(rng);
        let tau = f.random_nonzero_elem(rng);
        Pi3Chart::new(slot, r, t, tau, xi, v)
    }

    pub fn q(&self) -> usize {
        self.v.q()
    }

    fn corner(&self) -> Matrix<F> {
        let f = self.v.field().clone();
        let mut c = Matrix::zeros(f, self.q());
        c.set(0, 0, self.tau.clone());
        c
    }

    pub fn matrix(&self) -> Matrix<F> {
        let f = self.v.field().clone();
        let t2 = f.mul(&self.t, &self.t);
        let c = self.corner().scale(&t2);
        let x = self.xi.scale(&self.t);
        Matrix::from_fn(f.clone(), self.q(), |i, j| {
            f.add(&f.add(c.get(i, j), x.get(i, j)), self.v.get(i, j))
        })
    }

    pub fn project(&self) -> Result<ProjPoint<F>> {
        ProjPoint::new(self.matrix())
    }

    /// The chart curve with `t` as the variable.
    pub fn tuple(&self) -> Vec<UPoly<F>> {
        quadratic_tuple(&self.v, &self.xi, &self.corner())
    }

    pub fn invert(x: &Matrix<F>, slot: (usize, usize), r: usize) -> Result<Self> {
        let q = x.q();
        check_slots(q, slot, r)?;
        let f = x.field().clone();
        let y = scalar_div(x, x.get(slot.0, slot.1))?;
        let v = Matrix::from_fn(f.clone(), q, |i, j| {
            if i == 0 || j == 0 {
                f.zero()
            } else {
                y.get(i, j).clone()
            }
        });
        let t = y.get(0, r).clone();
        let t_inv = f
            .inv(&t)
            .ok_or_else(|| Error::ChartOutOfDomain("point lies on the exceptional locus (t = 0)".into()))?;
        let tau = f.mul(y.get(0, 0), &f.mul(&t_inv, &t_inv));
        let xi = Matrix::from_fn(f.clone(), q, |i, j| {
            if (i == 0) != (j == 0) {
                f.mul(y.get(i, j), &t_inv)
            } else {
                f.zero()
            }
        });
        Pi3Chart::new(slot, r, t, tau, xi, v)
    }
}
