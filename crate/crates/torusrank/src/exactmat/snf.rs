//! Smith normal form with transformation witnesses, plus the two consumers
//! that make it load-bearing here: unimodular inversion and basis extension.
//!
//! For an input `X` the decomposition is `U * X * V = D` with `U`, `V`
//! unimodular and `D` diagonal, nonnegative, each diagonal entry dividing
//! the next (every integer divides 0). These conventions make `D` unique,
//! so golden tests can pin it down.

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use super::intops::ext_gcd;
use super::mat::Mat;
use crate::error::{Error, Result};

/// Witnessed Smith decomposition `U * X * V = D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomp {
    pub u: Mat,
    pub d: Mat,
    pub v: Mat,
}

impl SmithDecomp {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.at(i, i).clone())
            .collect()
    }

    /// Replays every invariant against the original input.
    pub fn verify(&self, x: &Mat) -> Result<()> {
        if &self.u.checked_mul(x)?.checked_mul(&self.v)? != &self.d {
            return Err(Error::Internal("U*X*V != D".into()));
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return Err(Error::Internal("SNF transform not unimodular".into()));
        }
        let diag = self.diagonal();
        for (i, e) in diag.iter().enumerate() {
            if e.is_negative() {
                return Err(Error::Internal("negative SNF diagonal entry".into()));
            }
            if i + 1 < diag.len() && !e.is_zero() && !(&diag[i + 1] % e).is_zero() {
                return Err(Error::Internal("SNF divisibility chain broken".into()));
            }
            if e.is_zero() && i + 1 < diag.len() && !diag[i + 1].is_zero() {
                return Err(Error::Internal("SNF divisibility chain broken".into()));
            }
        }
        for i in 0..self.d.rows() {
            for j in 0..self.d.cols() {
                if i != j && !self.d.at(i, j).is_zero() {
                    return Err(Error::Internal("SNF result not diagonal".into()));
                }
            }
        }
        Ok(())
    }
}

struct SnfState {
    d: Mat,
    u: Mat,
    v: Mat,
}

impl SnfState {
    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.d.cols() {
            let tmp = self.d.at(i, c).clone();
            self.d.set(i, c, self.d.at(j, c).clone());
            self.d.set(j, c, tmp);
        }
        for c in 0..self.u.cols() {
            let tmp = self.u.at(i, c).clone();
            self.u.set(i, c, self.u.at(j, c).clone());
            self.u.set(j, c, tmp);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.d.rows() {
            let tmp = self.d.at(r, i).clone();
            self.d.set(r, i, self.d.at(r, j).clone());
            self.d.set(r, j, tmp);
        }
        for r in 0..self.v.rows() {
            let tmp = self.v.at(r, i).clone();
            self.v.set(r, i, self.v.at(r, j).clone());
            self.v.set(r, j, tmp);
        }
    }

    /// row_dst += q * row_src
    fn row_addmul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.d.cols() {
            let val = self.d.at(dst, c) + q * self.d.at(src, c);
            self.d.set(dst, c, val);
        }
        for c in 0..self.u.cols() {
            let val = self.u.at(dst, c) + q * self.u.at(src, c);
            self.u.set(dst, c, val);
        }
    }

    /// col_dst += q * col_src
    fn col_addmul(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.d.rows() {
            let val = self.d.at(r, dst) + q * self.d.at(r, src);
            self.d.set(r, dst, val);
        }
        for r in 0..self.v.rows() {
            let val = self.v.at(r, dst) + q * self.v.at(r, src);
            self.v.set(r, dst, val);
        }
    }

    /// (row_i, row_j) <- (a*row_i + b*row_j, c*row_i + e*row_j), det(a e - b c) = +-1
    fn row_transform(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, e: &BigInt) {
        for col in 0..self.d.cols() {
            let (x, y) = (self.d.at(i, col).clone(), self.d.at(j, col).clone());
            self.d.set(i, col, a * &x + b * &y);
            self.d.set(j, col, c * &x + e * &y);
        }
        for col in 0..self.u.cols() {
            let (x, y) = (self.u.at(i, col).clone(), self.u.at(j, col).clone());
            self.u.set(i, col, a * &x + b * &y);
            self.u.set(j, col, c * &x + e * &y);
        }
    }

    fn col_transform(&mut self, i: usize, j: usize, a: &BigInt, b: &BigInt, c: &BigInt, e: &BigInt) {
        for row in 0..self.d.rows() {
            let (x, y) = (self.d.at(row, i).clone(), self.d.at(row, j).clone());
            self.d.set(row, i, a * &x + b * &y);
            self.d.set(row, j, c * &x + e * &y);
        }
        for row in 0..self.v.rows() {
            let (x, y) = (self.v.at(row, i).clone(), self.v.at(row, j).clone());
            self.v.set(row, i, a * &x + b * &y);
            self.v.set(row, j, c * &x + e * &y);
        }
    }

    fn row_negate(&mut self, i: usize) {
        for c in 0..self.d.cols() {
            let val = -self.d.at(i, c);
            self.d.set(i, c, val);
        }
        for c in 0..self.u.cols() {
            let val = -self.u.at(i, c);
            self.u.set(i, c, val);
        }
    }
}

/// Computes the Smith normal form of `x` with unimodular witnesses.
pub fn smith_normal_form(x: &Mat) -> SmithDecomp {
    let (r, c) = (x.rows(), x.cols());
    let mut st = SnfState {
        d: x.clone(),
        u: Mat::identity(r),
        v: Mat::identity(c),
    };

    for k in 0..r.min(c) {
        'pivot: loop {
            // Smallest nonzero entry of the trailing block becomes the pivot.
            let mut best: Option<(usize, usize)> = None;
            for i in k..r {
                for j in k..c {
                    if st.d.at(i, j).is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if st.d.at(bi, bj).abs() <= st.d.at(i, j).abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                // Trailing block is zero; the form is complete.
                break 'pivot;
            };
            st.row_swap(k, pi);
            st.col_swap(k, pj);

            let mut dirty = true;
            while dirty {
                dirty = false;
                for i in k + 1..r {
                    if st.d.at(i, k).is_zero() {
                        continue;
                    }
                    let (a, b) = (st.d.at(k, k).clone(), st.d.at(i, k).clone());
                    if (&b % &a).is_zero() {
                        let q = -(&b / &a);
                        st.row_addmul(i, k, &q);
                    } else {
                        let (g, s, t) = ext_gcd(&a, &b);
                        let (bg, ag) = (-(&b / &g), &a / &g);
                        st.row_transform(k, i, &s, &t, &bg, &ag);
                        dirty = true;
                    }
                }
                for j in k + 1..c {
                    if st.d.at(k, j).is_zero() {
                        continue;
                    }
                    let (a, b) = (st.d.at(k, k).clone(), st.d.at(k, j).clone());
                    if (&b % &a).is_zero() {
                        let q = -(&b / &a);
                        st.col_addmul(j, k, &q);
                    } else {
                        let (g, s, t) = ext_gcd(&a, &b);
                        let (bg, ag) = (-(&b / &g), &a / &g);
                        st.col_transform(k, j, &s, &t, &bg, &ag);
                        // Column elimination may have refilled column k.
                        dirty = true;
                    }
                }
            }

            // Fold in any trailing entry the pivot does not divide yet.
            let pivot = st.d.at(k, k).clone();
            for i in k + 1..r {
                for j in k + 1..c {
                    if !(st.d.at(i, j) % &pivot).is_zero() {
                        st.row_addmul(k, i, &BigInt::one());
                        continue 'pivot;
                    }
                }
            }
            break 'pivot;
        }
    }

    for k in 0..r.min(c) {
        if st.d.at(k, k).is_negative() {
            st.row_negate(k);
        }
    }

    let out = SmithDecomp {
        u: st.u,
        d: st.d,
        v: st.v,
    };
    debug_assert!(out.verify(x).is_ok());
    out
}

/// Exact inverse of a unimodular matrix, via `U X V = I  =>  X^-1 = V U`.
pub fn inverse_unimodular(x: &Mat) -> Result<Mat> {
    if !x.is_square() {
        return Err(Error::NotSquare {
            rows: x.rows(),
            cols: x.cols(),
        });
    }
    let snf = smith_normal_form(x);
    if !snf.d.is_identity() {
        return Err(Error::NotUnimodular {
            det: x.det()?.to_string(),
        });
    }
    let inv = snf.v.checked_mul(&snf.u)?;
    debug_assert!(x.checked_mul(&inv).unwrap().is_identity());
    Ok(inv)
}

/// Extends the columns of `y` (n x m, m <= n, all determinantal divisors 1)
/// to a basis of Z^n: returns a unimodular n x n matrix whose first m
/// columns are exactly the columns of `y`.
///
/// Recipe: with `U y V = [I_m; 0]`, the columns of `U^-1` are a basis whose
/// first m columns span the same sublattice as `y`; swapping those m columns
/// for `y`'s own changes the determinant by det(V) = +-1 only.
pub fn extend_to_basis(y: &Mat) -> Result<Mat> {
    let (n, m) = (y.rows(), y.cols());
    if m > n {
        return Err(Error::DimensionMismatch(format!(
            "cannot extend {m} columns in dimension {n}"
        )));
    }
    let snf = smith_normal_form(y);
    for (i, e) in snf.diagonal().iter().enumerate() {
        if !e.is_one() {
            return Err(Error::NotExtendable {
                index: i + 1,
                value: e.to_string(),
            });
        }
    }
    let u_inv = inverse_unimodular(&snf.u)?;
    let out = Mat::from_fn(n, n, |i, j| {
        if j < m {
            y.at(i, j).clone()
        } else {
            u_inv.at(i, j).clone()
        }
    });
    if !out.is_unimodular() {
        return Err(Error::Internal("basis extension lost unimodularity".into()));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsupport::minor_gcd;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn snf_of_identity_is_identity() {
        for n in 1..=4 {
            let snf = smith_normal_form(&Mat::identity(n));
            assert!(snf.d.is_identity());
            assert!(snf.u.is_identity());
            assert!(snf.v.is_identity());
        }
    }

    #[test]
    fn snf_of_coprime_diagonal() {
        let x = Mat::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&x);
        snf.verify(&x).unwrap();
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn snf_determinantal_divisors_match_minor_gcds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x51F7);
        for _ in 0..20 {
            let x = Mat::from_fn(5, 3, |_, _| BigInt::from(rng.gen_range(-9i64..=9)));
            let snf = smith_normal_form(&x);
            snf.verify(&x).unwrap();
            let diag = snf.diagonal();
            let mut prod = BigInt::one();
            for (k, e) in diag.iter().enumerate() {
                prod *= e;
                assert_eq!(prod, minor_gcd(&x, k + 1), "d_{} mismatch for {x:?}", k + 1);
            }
        }
    }

    #[test]
    fn inverse_unimodular_round_trip() {
        let x = Mat::from_i64_rows(&[&[1, 2, 0], &[0, 1, 5], &[0, 0, 1]]);
        let inv = inverse_unimodular(&x).unwrap();
        assert!(x.checked_mul(&inv).unwrap().is_identity());
        assert!(inv.checked_mul(&x).unwrap().is_identity());
    }

    #[test]
    fn inverse_rejects_non_unimodular() {
        let x = Mat::from_i64_rows(&[&[2, 0], &[0, 1]]);
        assert!(matches!(
            inverse_unimodular(&x),
            Err(Error::NotUnimodular { .. })
        ));
    }

    #[test]
    fn extend_to_basis_examples() {
        // [e1, e2] in Z^3
        let y = Mat::from_i64_rows(&[&[1, 0], &[0, 1], &[0, 0]]);
        let b = extend_to_basis(&y).unwrap();
        assert!(b.is_unimodular());
        for j in 0..2 {
            assert_eq!(b.col(j), y.col(j));
        }

        // single column e1 in Z^3
        let y = Mat::from_i64_rows(&[&[1], &[0], &[0]]);
        let b = extend_to_basis(&y).unwrap();
        assert!(b.is_unimodular());
        assert_eq!(b.col(0), y.col(0));

        // the spec's 3x2 example
        let y = Mat::from_i64_rows(&[&[1, 0], &[1, 1], &[2, 3]]);
        let b = extend_to_basis(&y).unwrap();
        assert!(b.is_unimodular());
        for j in 0..2 {
            assert_eq!(b.col(j), y.col(j));
        }
    }

    #[test]
    fn extend_to_basis_rejects_imprimitive_columns() {
        let y = Mat::from_i64_rows(&[&[2], &[0], &[0]]);
        assert!(matches!(extend_to_basis(&y), Err(Error::NotExtendable { .. })));
    }
}
