#![allow(dead_code)]

use matinv_degree::arith::field::{PrimeField, Rationals};
use matinv_degree::maps::matrix::{Matrix, RandomElem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const P61: u64 = (1u64 << 61) - 1;

pub fn fp() -> PrimeField {
    PrimeField::new(P61).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_fp(q: usize, seed: u64) -> Matrix<PrimeField> {
    Matrix::random_nonzero(fp(), q, &mut rng(seed))
}

pub fn random_q(q: usize, seed: u64) -> Matrix<Rationals> {
    Matrix::random_nonzero(Rationals, q, &mut rng(seed))
}

pub fn random_elem<F: RandomElem>(f: &F, seed: u64) -> F::Elem {
    f.random_nonzero_elem(&mut rng(seed))
}

/// Action on coordinates `(h, r, a, b)` of `h H + r R + a sum A + b sum B`,
/// written out by hand (columns are images).
pub fn block_by_hand(q: i128) -> [[i128; 4]; 4] {
    let (a, b) = (2 * q - 3, 2 * q - 2);
    // columns: H, R, sum A, sum B
    let cols = [
        [q * q - q + 1, -(q - 2), -a, -b],
        [q * q - q, -(q - 1), -a, -b],
        [q * q, 0, -(2 * q - 1), -2 * q],
        [0, 0, 1, 1],
    ];
    let mut m = [[0; 4]; 4];
    for (c, col) in cols.iter().enumerate() {
        for r in 0..4 {
            m[r][c] = col[r];
        }
    }
    m
}

/// `H`-coefficient of `M^n H` from the hand-written block.
pub fn degrees_by_hand(q: usize, n_max: usize) -> Vec<i128> {
    let m = block_by_hand(q as i128);
    let mut v = [1i128, 0, 0, 0];
    let mut out = vec![1];
    for _ in 0..n_max {
        let mut w = [0i128; 4];
        for r in 0..4 {
            w[r] = (0..4).map(|c| m[r][c] * v[c]).sum();
        }
        v = w;
        out.push(v[0]);
    }
    out
}

/// `d_(n+4) = (a+2) d_(n+3) - (2a+2) d_(n+2) + (a+2) d_(n+1) - d_n`, `a = q^2 - 4q + 2`.
pub fn satisfies_recurrence(q: usize, d: &[i128]) -> bool {
    let a = (q * q) as i128 - 4 * q as i128 + 2;
    d.windows(5)
        .all(|w| w[4] == (a + 2) * w[3] - (2 * a + 2) * w[2] + (a + 2) * w[1] - w[0])
}
