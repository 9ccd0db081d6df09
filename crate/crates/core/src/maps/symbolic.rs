//! Homogeneous polynomial representatives of the maps, as sparse multivariate
//! polynomials in the `q^2` entries `x_ij` (variable index `i * q + j`).

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::field::Field;
use crate::arith::linalg::{det_expand, minor_matrix};
use crate::arith::mpoly::{MPoly, MPolyRing};
use crate::error::{Error, Result};
use crate::maps::matrix::{Matrix, ProjPoint};
use crate::maps::pointwise::EvalOutcome;

/// Largest size for which the reduced composition is expanded symbolically.
pub const SYMBOLIC_MAX_Q: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapLabel {
    IHat,
    JHat,
    KHat,
    Composed,
}

impl fmt::Display for MapLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MapLabel::IHat => "I-hat",
            MapLabel::JHat => "J-hat",
            MapLabel::KHat => "K-hat",
            MapLabel::Composed => "composed",
        })
    }
}

/// A self-map of `P(M_q)` given by `q^2` homogeneous components of one degree.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjMapRep {
    q: usize,
    label: MapLabel,
    degree: u32,
    components: Vec<MPoly>,
}

impl ProjMapRep {
    pub fn new(q: usize, label: MapLabel, components: Vec<MPoly>) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidSize(q));
        }
        if components.len() != q * q || components.iter().any(|c| c.nvars() != q * q) {
            return Err(Error::InvalidInput("components do not match q".into()));
        }
        let mut degree = None;
        for c in &components {
            if !c.is_homogeneous() {
                return Err(Error::InvalidInput("component is not homogeneous".into()));
            }
            if let Some(d) = c.total_degree() {
                match degree {
                    None => degree = Some(d),
                    Some(e) if e != d => {
                        return Err(Error::InvalidInput("components of different degrees".into()))
                    }
                    _ => {}
                }
            }
        }
        let degree =
            degree.ok_or_else(|| Error::Degenerate("all components are zero".into()))?;
        Ok(ProjMapRep {
            q,
            label,
            degree,
            components,
        })
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn label(&self) -> MapLabel {
        self.label
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn components(&self) -> &[MPoly] {
        &self.components
    }

    pub fn component(&self, i: usize, j: usize) -> &MPoly {
        &self.components[i * self.q + j]
    }

    /// `self ∘ inner`, by substitution.
    pub fn compose(&self, inner: &ProjMapRep) -> Result<ProjMapRep> {
        if self.q != inner.q {
            return Err(Error::InvalidInput("composition of maps of different sizes".into()));
        }
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect();
        ProjMapRep::new(self.q, MapLabel::Composed, comps)
    }

    /// Variables dividing every component (none for a reduced representative).
    pub fn common_variables(&self) -> Vec<(usize, usize)> {
        (0..self.q * self.q)
            .filter(|&v| {
                self.components
                    .iter()
                    .filter(|c| !c.is_zero())
                    .all(|c| c.min_exponent(v).unwrap_or(0) > 0)
            })
            .map(|v| (v / self.q, v % self.q))
            .collect()
    }

    pub fn eval<F: Field>(&self, x: &ProjPoint<F>) -> Result<EvalOutcome<F>> {
        if x.q() != self.q {
            return Err(Error::InvalidInput("point and map sizes differ".into()));
        }
        let f = x.matrix().field().clone();
        let entries = self
            .components
            .iter()
            .map(|c| c.eval(&f, x.matrix().entries()))
            .collect();
        Ok(EvalOutcome::from_matrix(Matrix::new(f, self.q, entries)?))
    }
}

/// Componentwise evaluation, reporting indeterminacy as a distinguished outcome.
pub fn eval_map<F: Field>(f: &ProjMapRep, x: &ProjPoint<F>) -> Result<EvalOutcome<F>> {
    f.eval(x)
}

fn variable_matrix(q: usize) -> Vec<Vec<MPoly>> {
    (0..q)
        .map(|i| (0..q).map(|j| MPoly::var(q * q, i * q + j)).collect())
        .collect()
}

/// Product of all entries.
pub fn entry_product(q: usize) -> MPoly {
    MPoly::monomial(vec![1; q * q], BigInt::from(1))
}

/// Cofactor map: component `(i, j)` is `(-1)^(i+j) det(x_[j,i])`.
pub fn build_ihat(q: usize) -> Result<ProjMapRep> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    let ring = MPolyRing { nvars: q * q };
    let x = variable_matrix(q);
    let mut comps = Vec::with_capacity(q * q);
    for i in 0..q {
        for j in 0..q {
            let d = det_expand(&ring, &minor_matrix(&x, j, i));
            comps.push(if (i + j) % 2 == 0 { d } else { d.neg() });
        }
    }
    ProjMapRep::new(q, MapLabel::IHat, comps)
}

/// Reciprocal-numerator map: component `(i, j)` is the product of every other entry.
pub fn build_jhat(q: usize) -> Result<ProjMapRep> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    let comps = (0..q * q)
        .map(|k| {
            let mut e = vec![1u16; q * q];
            e[k] = 0;
            MPoly::monomial(e, BigInt::from(1))
        })
        .collect();
    ProjMapRep::new(q, MapLabel::JHat, comps)
}

/// Reduced composition: the cofactor map after the reciprocal-numerator map,
/// divided exactly by `prod^(q-2)`. Expanded only for `q <= 4`.
pub fn build_khat(q: usize) -> Result<ProjMapRep> {
    Ok(common_factor_identity(q)?.khat)
}

/// Result of composing and dividing out the common factor.
#[derive(Clone, Debug)]
pub struct CommonFactor {
    pub composed: ProjMapRep,
    pub khat: ProjMapRep,
    /// Degree of `prod^(q-2)`.
    pub removed_degree: u32,
}

/// Builds the composition and verifies that every component equals
/// `prod^(q-2)` times a component of the reduced map.
pub fn common_factor_identity(q: usize) -> Result<CommonFactor> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    if q > SYMBOLIC_MAX_Q {
        return Err(Error::Scope(format!(
            "symbolic expansion is limited to q <= {SYMBOLIC_MAX_Q}; use point or tuple evaluation"
        )));
    }
    let composed = build_ihat(q)?.compose(&build_jhat(q)?)?;
    let divisor = entry_product(q).pow(q as u32 - 2);
    let comps = composed
        .components()
        .iter()
        .map(|c| {
            c.div_monomial(&divisor)?.ok_or_else(|| {
                Error::Inconsistency("composed component not divisible by prod^(q-2)".into())
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let khat = ProjMapRep::new(q, MapLabel::KHat, comps)?;
    let removed_degree = (q * q * (q - 2)) as u32;
    if composed.degree() != khat.degree() + removed_degree {
        return Err(Error::Inconsistency("degree bookkeeping of the common factor".into()));
    }
    // Exactness: multiplying back reproduces the composition.
    for (c, k) in composed.components().iter().zip(khat.components()) {
        if k.mul(&divisor) != *c {
            return Err(Error::Inconsistency("common factor identity fails".into()));
        }
    }
    Ok(CommonFactor {
        composed,
        khat,
        removed_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::field::{PrimeField, Rationals, Ring};
    use crate::maps::pointwise::{eval_khat, ihat_matrix};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn ihat_q2_is_the_classical_adjugate() {
        let m = build_ihat(2).unwrap();
        let v = |i| MPoly::var(4, i);
        assert_eq!(m.components(), &[v(3), v(1).neg(), v(2).neg(), v(0)]);
        assert_eq!(m.degree(), 1);
    }

    #[test]
    fn ihat_q3_shape() {
        let m = build_ihat(3).unwrap();
        assert_eq!(m.components().len(), 9);
        assert!(m.components().iter().all(|c| c.num_terms() == 2 && c.total_degree() == Some(2)));
    }

    #[test]
    fn jhat_components_are_squarefree_monomials() {
        let m = build_jhat(2).unwrap();
        // (1,1) component is b c d.
        assert_eq!(m.component(0, 0), &MPoly::monomial(vec![0, 1, 1, 1], BigInt::from(1)));
        let m3 = build_jhat(3).unwrap();
        for c in m3.components() {
            assert_eq!(c.num_terms(), 1);
            assert!(c.terms().all(|(e, _)| e.iter().all(|&x| x <= 1)));
        }
        let ones = ProjPoint::new(Matrix::from_fn(Rationals, 3, |_, _| Rationals.one())).unwrap();
        assert_eq!(m3.eval(&ones).unwrap().point().unwrap(), &ones);
    }

    #[test]
    fn khat_degrees() {
        assert_eq!(build_khat(2).unwrap().degree(), 3);
        assert_eq!(build_khat(3).unwrap().degree(), 7);
        assert_eq!(build_khat(4).unwrap().degree(), 13);
        assert!(matches!(build_khat(5), Err(Error::Scope(_))));
        assert!(matches!(build_khat(1), Err(Error::InvalidSize(1))));
    }

    #[test]
    fn common_factor_at_q3() {
        let cf = common_factor_identity(3).unwrap();
        assert_eq!(cf.composed.degree(), 16);
        assert_eq!(cf.removed_degree, 9);
    }

    #[test]
    fn khat_is_reduced() {
        for q in 2..=4 {
            assert!(build_khat(q).unwrap().common_variables().is_empty());
        }
        // The unreduced composition is divisible by every variable when q >= 3.
        assert_eq!(common_factor_identity(3).unwrap().composed.common_variables().len(), 9);
    }

    #[test]
    fn symbolic_and_pointwise_khat_agree() {
        let f = PrimeField::new((1u64 << 61) - 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for q in 2..=4 {
            let k = build_khat(q).unwrap();
            for _ in 0..5 {
                let mut m = Matrix::random_nonzero(f, q, &mut rng);
                m.set(0, q - 1, 0);
                let x = ProjPoint::new(m).unwrap();
                assert_eq!(k.eval(&x).unwrap(), eval_khat(&x).unwrap());
            }
        }
    }

    #[test]
    fn symbolic_ihat_matches_adjugate_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        let m = Matrix::random_nonzero(Rationals, 3, &mut rng);
        let sym = build_ihat(3).unwrap();
        let vals: Vec<_> = sym
            .components()
            .iter()
            .map(|c| c.eval(&Rationals, m.entries()))
            .collect();
        assert_eq!(Matrix::new(Rationals, 3, vals).unwrap(), ihat_matrix(&m).unwrap());
    }
}
