//! Column-style Hermite normal form, the workhorse behind every lattice
//! membership and generation check in this crate.
//!
//! For `X` (n x m) we compute `H = X * U` with `U` unimodular, using column
//! operations only, so the column lattice of `H` equals that of `X`. `H` is
//! in column echelon form: pivot rows strictly increase left to right,
//! pivots are positive, entries to the left of a pivot in its row are
//! reduced into `[0, pivot)`, and zero columns sit at the right.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::intops::ext_gcd;
use super::mat::{ColVec, Mat};
use crate::error::{Error, Result};

/// Witnessed Hermite form `X * U = H`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermiteForm {
    pub h: Mat,
    pub u: Mat,
    pivots: Vec<(usize, usize)>,
}

impl HermiteForm {
    /// `(row, col)` positions of the pivots, in increasing row order.
    pub fn pivots(&self) -> &[(usize, usize)] {
        &self.pivots
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// True iff the column lattice is all of Z^n, i.e. n unit pivots.
    pub fn is_full_lattice(&self) -> bool {
        self.pivots.len() == self.h.rows() && self.pivots.iter().all(|&(r, c)| self.h.at(r, c).is_one())
    }

    /// Lattice membership by echelon back-substitution.
    pub fn contains(&self, v: &ColVec) -> bool {
        if v.dim() != self.h.rows() {
            return false;
        }
        let mut w: Vec<BigInt> = v.entries().to_vec();
        for &(r, c) in &self.pivots {
            let (q, rem) = w[r].div_rem(self.h.at(r, c));
            if !rem.is_zero() {
                return false;
            }
            if q.is_zero() {
                continue;
            }
            for i in 0..w.len() {
                w[i] -= &q * self.h.at(i, c);
            }
        }
        w.iter().all(|e| e.is_zero())
    }

    /// Replays the defining identity and shape invariants.
    pub fn verify(&self, x: &Mat) -> Result<()> {
        if &x.checked_mul(&self.u)? != &self.h {
            return Err(Error::Internal("X*U != H".into()));
        }
        if !self.u.is_unimodular() {
            return Err(Error::Internal("HNF transform not unimodular".into()));
        }
        let mut last_row = None;
        for (idx, &(r, c)) in self.pivots.iter().enumerate() {
            if idx != c {
                return Err(Error::Internal("pivot columns not leftmost".into()));
            }
            if let Some(lr) = last_row {
                if r <= lr {
                    return Err(Error::Internal("pivot rows not increasing".into()));
                }
            }
            last_row = Some(r);
            let p = self.h.at(r, c);
            if !p.is_positive() {
                return Err(Error::Internal("pivot not positive".into()));
            }
            for cc in 0..c {
                let e = self.h.at(r, cc);
                if e.is_negative() || e >= p {
                    return Err(Error::Internal("entry left of pivot not reduced".into()));
                }
            }
            for cc in c + 1..self.h.cols() {
                if !self.h.at(r, cc).is_zero() {
                    return Err(Error::Internal("entry right of pivot not zero".into()));
                }
            }
        }
        for c in self.pivots.len()..self.h.cols() {
            for r in 0..self.h.rows() {
                if !self.h.at(r, c).is_zero() {
                    return Err(Error::Internal("trailing column not zero".into()));
                }
            }
        }
        Ok(())
    }
}

/// Computes the column Hermite normal form of `x` with its transform.
pub fn hermite_normal_form(x: &Mat) -> HermiteForm {
    let (n, m) = (x.rows(), x.cols());
    let mut h = x.clone();
    let mut u = Mat::identity(m);
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut pc = 0; // next pivot column

    let col_swap = |h: &mut Mat, u: &mut Mat, a: usize, b: usize| {
        if a == b {
            return;
        }
        for r in 0..h.rows() {
            let tmp = h.at(r, a).clone();
            h.set(r, a, h.at(r, b).clone());
            h.set(r, b, tmp);
        }
        for r in 0..u.rows() {
            let tmp = u.at(r, a).clone();
            u.set(r, a, u.at(r, b).clone());
            u.set(r, b, tmp);
        }
    };

    for row in 0..n {
        if pc == m {
            break;
        }
        if h.at(row, pc).is_zero() {
            if let Some(j) = (pc + 1..m).find(|&j| !h.at(row, j).is_zero()) {
                col_swap(&mut h, &mut u, pc, j);
            } else {
                continue;
            }
        }
        // Fold all later columns into the pivot column via gcd transforms.
        for j in pc + 1..m {
            if h.at(row, j).is_zero() {
                continue;
            }
            let (a, b) = (h.at(row, pc).clone(), h.at(row, j).clone());
            let (g, s, t) = ext_gcd(&a, &b);
            let (bg, ag) = (-(&b / &g), &a / &g);
            for r in 0..n {
                let (xc, yc) = (h.at(r, pc).clone(), h.at(r, j).clone());
                h.set(r, pc, &s * &xc + &t * &yc);
                h.set(r, j, &bg * &xc + &ag * &yc);
            }
            for r in 0..m {
                let (xc, yc) = (u.at(r, pc).clone(), u.at(r, j).clone());
                u.set(r, pc, &s * &xc + &t * &yc);
                u.set(r, j, &bg * &xc + &ag * &yc);
            }
        }
        if h.at(row, pc).is_negative() {
            for r in 0..n {
                let v = -h.at(r, pc);
                h.set(r, pc, v);
            }
            for r in 0..m {
                let v = -u.at(r, pc);
                u.set(r, pc, v);
            }
        }
        // Reduce this row's entries in earlier pivot columns into [0, pivot).
        let pivot = h.at(row, pc).clone();
        for j in 0..pc {
            let q = h.at(row, j).div_floor(&pivot);
            if q.is_zero() {
                continue;
            }
            for r in 0..n {
                let v = h.at(r, j) - &q * h.at(r, pc);
                h.set(r, j, v);
            }
            for r in 0..m {
                let v = u.at(r, j) - &q * u.at(r, pc);
                u.set(r, j, v);
            }
        }
        pivots.push((row, pc));
        pc += 1;
    }

    let out = HermiteForm { h, u, pivots };
    debug_assert!(out.verify(x).is_ok());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hnf_of_identity() {
        let hf = hermite_normal_form(&Mat::identity(3));
        assert!(hf.h.is_identity());
        assert!(hf.u.is_identity());
        assert!(hf.is_full_lattice());
    }

    #[test]
    fn hnf_single_column_normalizes_sign() {
        let x = Mat::from_i64_rows(&[&[-2], &[-4]]);
        let hf = hermite_normal_form(&x);
        hf.verify(&x).unwrap();
        assert_eq!(hf.h, Mat::from_i64_rows(&[&[2], &[4]]));

        let x = Mat::from_i64_rows(&[&[2], &[4]]);
        let hf = hermite_normal_form(&x);
        assert_eq!(hf.h, x);
    }

    #[test]
    fn hnf_index_two_sublattice() {
        // columns e1+e2 and e1-e2 span an index-2 sublattice of Z^2
        let x = Mat::from_i64_rows(&[&[1, 1], &[1, -1]]);
        let hf = hermite_normal_form(&x);
        hf.verify(&x).unwrap();
        assert_eq!(hf.rank(), 2);
        let idx: BigInt = hf.pivots().iter().map(|&(r, c)| hf.h.at(r, c)).product();
        assert_eq!(idx, BigInt::from(2));
        assert!(!hf.is_full_lattice());
        // membership: e1+e2 in lattice, e1 not
        assert!(hf.contains(&ColVec::from_i64(&[1, 1])));
        assert!(!hf.contains(&ColVec::from_i64(&[1, 0])));
        assert!(hf.contains(&ColVec::from_i64(&[2, 0])));
    }

    #[test]
    fn hnf_preserves_column_lattice() {
        let x = Mat::from_i64_rows(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let hf = hermite_normal_form(&x);
        hf.verify(&x).unwrap();
        for j in 0..x.cols() {
            assert!(hf.contains(&x.col(j)));
        }
        // and conversely each H column lies in the lattice of X (via U^-1 replay)
        let back = hermite_normal_form(&hf.h);
        for j in 0..x.cols() {
            assert!(back.contains(&x.col(j)));
        }
    }

    #[test]
    fn hnf_wide_matrix_with_zero_rows() {
        let x = Mat::from_i64_rows(&[&[0, 0, 0], &[2, 4, 6]]);
        let hf = hermite_normal_form(&x);
        hf.verify(&x).unwrap();
        assert_eq!(hf.rank(), 1);
        assert_eq!(hf.pivots()[0], (1, 0));
        assert_eq!(hf.h.at(1, 0), &BigInt::from(2));
    }
}
