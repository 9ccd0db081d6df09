//! Symbolic degree oracle for small cases, independent of the tuple routes.

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::field::random_prime;
use crate::arith::mpoly::MPoly;
use crate::arith::upoly::{max_degree, tuple_content_reduce, UPoly};
use crate::degree::probe::derive_seed;
use crate::degree::record::{DegreeRecord, Method};
use crate::error::{Error, Result};
use crate::maps::symbolic::{build_khat, common_factor_identity};

/// Lines restricted from the symbolic plane composition.
pub const ORACLE_LINES: u64 = 3;

/// Generic projective plane `u A + v B + w C` in `P(M_q)`, as `q^2` linear forms in 3 variables.
fn random_plane(q: usize, rng: &mut ChaCha8Rng) -> Vec<MPoly> {
    (0..q * q)
        .map(|_| {
            (0..3).fold(MPoly::zero(3), |acc, k| {
                let c: i64 = rng.gen_range(1..=97) * if rng.gen_bool(0.5) { 1 } else { -1 };
                acc.add(&MPoly::var(3, k).scale(&BigInt::from(c)))
            })
        })
        .collect()
}

/// `deg(K^n)` for `q <= 3`, `n <= 2` from explicit polynomial representatives.
///
/// `n = 1` is the degree of the reduced representative. `n = 2` composes the
/// representative with itself on a random plane, restricts the result to
/// several lines inside the plane, strips the common factor on each and
/// requires the lines to agree.
pub fn symbolic_degree_oracle(q: usize, n: usize, seed: u64) -> Result<DegreeRecord> {
    if q < 2 {
        return Err(Error::InvalidSize(q));
    }
    if q > 3 || n > 2 {
        return Err(Error::Scope(format!(
            "symbolic degree oracle covers q <= 3 and n <= 2, got q = {q}, n = {n}"
        )));
    }
    match n {
        0 => return Ok(DegreeRecord::exact(q, 0, 1, Method::Symbolic)),
        1 => {
            let cf = common_factor_identity(q)?;
            return Ok(DegreeRecord::exact(q, 1, cf.khat.degree() as u128, Method::Symbolic));
        }
        _ => {}
    }
    let khat = build_khat(q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let plane = random_plane(q, &mut rng);
    let once: Vec<MPoly> = khat.components().iter().map(|c| c.substitute(&plane)).collect();
    let twice: Vec<MPoly> = khat.components().iter().map(|c| c.substitute(&once)).collect();

    let mut seeds = Vec::new();
    let mut primes = Vec::new();
    let mut degrees = Vec::new();
    for k in 0..ORACLE_LINES {
        let s = derive_seed(seed, 100 + k);
        let mut lr = ChaCha8Rng::seed_from_u64(s);
        let f = random_prime(61, &mut lr)?;
        let line: Vec<UPoly<_>> = (0..3)
            .map(|_| UPoly::linear(f, f.random_nonzero(&mut lr), f.random_nonzero(&mut lr)))
            .collect();
        let restricted: Vec<_> = twice.iter().map(|c| c.substitute_upoly(&f, &line)).collect();
        if restricted.iter().all(|p| p.is_zero()) {
            continue;
        }
        let (reduced, _) = tuple_content_reduce(&restricted)?;
        seeds.push(s);
        primes.push(f.modulus());
        degrees.push(max_degree(&reduced).unwrap_or(0));
    }
    let degree = *degrees
        .iter()
        .max()
        .ok_or_else(|| Error::ProbeFailure("every oracle line was degenerate".into()))?;
    let agree: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == degree).collect();
    if agree.len() < 2 {
        return Err(Error::ProbeFailure(format!("oracle lines disagree: {degrees:?}")));
    }
    Ok(DegreeRecord {
        q,
        n,
        degree: degree as u128,
        method: Method::Symbolic,
        seeds: agree.iter().map(|&i| seeds[i]).collect(),
        primes: agree.iter().map(|&i| primes[i]).collect(),
        agreement: agree.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_values() {
        assert_eq!(symbolic_degree_oracle(3, 1, 0).unwrap().degree, 7);
        assert_eq!(symbolic_degree_oracle(2, 1, 0).unwrap().degree, 3);
        let r = symbolic_degree_oracle(3, 2, 4).unwrap();
        assert_eq!(r.degree, 16);
        assert!(r.agreement >= 2);
        assert!(matches!(symbolic_degree_oracle(4, 1, 0), Err(Error::Scope(_))));
        assert!(matches!(symbolic_degree_oracle(3, 3, 0), Err(Error::Scope(_))));
    }

    #[test]
    fn q2_matches_probe() {
        let o = symbolic_degree_oracle(2, 2, 1).unwrap();
        let p = crate::degree::probe::probe_degrees(2, 2, 1, Default::default()).unwrap();
        assert_eq!(o.degree, p[2].degree);
    }
}
