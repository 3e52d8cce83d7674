//! Seeded test-corpus generation: random unimodular matrices as products
//! of elementary operations, deterministic per seed.

use num_bigint::BigInt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exactmat::Mat;

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random unimodular n x n matrix built from `ops` elementary operations:
/// row additions with coefficients in [-3, 3], row swaps, row negations.
/// `ops = 0` yields the identity. |det| = 1 by construction.
pub fn random_unimodular(n: usize, ops: usize, rng: &mut impl Rng) -> Mat {
    random_unimodular_with_inverse(n, ops, rng).0
}

/// As [`random_unimodular`], also accumulating the exact inverse by
/// applying each elementary inverse on the other side.
pub fn random_unimodular_with_inverse(n: usize, ops: usize, rng: &mut impl Rng) -> (Mat, Mat) {
    let mut m = Mat::identity(n);
    let mut inv = Mat::identity(n);
    for _ in 0..ops {
        match rng.gen_range(0..3) {
            0 if n >= 2 => {
                // row add: row_i += c * row_j on m; col_j -= c * col_i on inv
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let c = BigInt::from(rng.gen_range(-3i64..=3));
                for col in 0..n {
                    let v = m.at(i, col) + &c * m.at(j, col);
                    m.set(i, col, v);
                }
                for row in 0..n {
                    let v = inv.at(row, j) - &c * inv.at(row, i);
                    inv.set(row, j, v);
                }
            }
            1 if n >= 2 => {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                for col in 0..n {
                    let tmp = m.at(i, col).clone();
                    m.set(i, col, m.at(j, col).clone());
                    m.set(j, col, tmp);
                }
                for row in 0..n {
                    let tmp = inv.at(row, i).clone();
                    inv.set(row, i, inv.at(row, j).clone());
                    inv.set(row, j, tmp);
                }
            }
            _ => {
                let i = rng.gen_range(0..n);
                for col in 0..n {
                    let v = -m.at(i, col);
                    m.set(i, col, v);
                }
                for row in 0..n {
                    let v = -inv.at(row, i);
                    inv.set(row, i, v);
                }
            }
        }
    }
    debug_assert!(m.checked_mul(&inv).unwrap().is_identity());
    (m, inv)
}

/// Random square matrix with entries uniform in [-bound, bound]; not
/// necessarily invertible.
pub fn random_integer_matrix(n: usize, bound: i64, rng: &mut impl Rng) -> Mat {
    Mat::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-bound..=bound)))
}
