//! Reference oracles used only by tests and the acceptance suite.
//!
//! Everything here is deliberately naive — cofactor expansion, exhaustive
//! minor enumeration, brute-force coefficient search — so it shares no code
//! path with the production kernel it double-checks.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::exactmat::{ColVec, Mat};

/// Determinant by recursive cofactor expansion along the first row.
pub fn det_cofactor(a: &Mat) -> BigInt {
    assert!(a.is_square());
    let n = a.rows();
    if n == 1 {
        return a.at(0, 0).clone();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if a.at(0, j).is_zero() {
            continue;
        }
        let minor = Mat::from_fn(n - 1, n - 1, |r, c| {
            a.at(r + 1, if c < j { c } else { c + 1 }).clone()
        });
        let term = a.at(0, j) * det_cofactor(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k == 0 || k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// All k x k minors of `a`, by exhaustive row/column subset enumeration.
pub fn all_k_minors(a: &Mat, k: usize) -> Vec<BigInt> {
    let mut out = Vec::new();
    for rows in combinations(a.rows(), k) {
        for cols in combinations(a.cols(), k) {
            let sub = Mat::from_fn(k, k, |i, j| a.at(rows[i], cols[j]).clone());
            out.push(det_cofactor(&sub));
        }
    }
    out
}

/// Gcd of all k x k minors of `a` — the k-th determinantal divisor.
pub fn minor_gcd(a: &Mat, k: usize) -> BigInt {
    let mut g = BigInt::zero();
    for m in all_k_minors(a, k) {
        g = g.gcd(&m);
    }
    g
}

fn gcd_three(v1: &ColVec, v2: &ColVec, v3: &ColVec) -> BigInt {
    crate::exactmat::gcd_of_vecs(&[v1, v2, v3])
}

/// Smallest |k| with gcd(v1, v3 + k*v2) = gcd(v1, v2, v3), searched over
/// |k| <= bound. Independent of the constructive prime-set choice.
pub fn enumerate_gcd_coefficient(
    v1: &ColVec,
    v2: &ColVec,
    v3: &ColVec,
    bound: i64,
) -> Option<BigInt> {
    let target = gcd_three(v1, v2, v3);
    for mag in 0..=bound {
        for k in [BigInt::from(mag), BigInt::from(-mag)] {
            let shifted = v3.add_scaled(&k, v2).unwrap();
            if crate::exactmat::gcd_of_vecs(&[v1, &shifted]) == target {
                return Some(k);
            }
            if mag == 0 {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cofactor_det_hand_cases() {
        assert_eq!(det_cofactor(&Mat::identity(4)), BigInt::from(1));
        let a = Mat::from_i64_rows(&[&[1, 2], &[3, 4]]);
        assert_eq!(det_cofactor(&a), BigInt::from(-2));
        let b = Mat::from_i64_rows(&[&[2, 0, 1], &[1, 1, 0], &[0, 3, 1]]);
        // 2*(1*1-0*3) - 0 + 1*(1*3-0) = 2 + 3
        assert_eq!(det_cofactor(&b), BigInt::from(5));
    }

    #[test]
    fn minor_enumeration_counts() {
        let a = Mat::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert_eq!(all_k_minors(&a, 1).len(), 6);
        assert_eq!(all_k_minors(&a, 2).len(), 3);
        assert_eq!(minor_gcd(&a, 2), BigInt::from(3));
    }
}
