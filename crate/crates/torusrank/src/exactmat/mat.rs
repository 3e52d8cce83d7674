//! Dense matrices and column vectors over arbitrary-precision integers.
//!
//! Every operation here is exact: no floating point, no modular shortcuts,
//! no overflow. Entries are `BigInt` throughout.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl Mat {
    /// Builds a matrix from row-major entries. `data.len()` must equal `rows * cols`.
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Mat { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Mat {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    /// Convenience constructor for literals in tests and small fixtures.
    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        let r = rows.len();
        assert!(r > 0, "at least one row required");
        let c = rows[0].len();
        assert!(c > 0 && rows.iter().all(|row| row.len() == c), "ragged rows");
        Mat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> impl Iterator<Item = &BigInt> {
        self.data.iter()
    }

    pub fn col(&self, j: usize) -> ColVec {
        ColVec::new((0..self.rows).map(|i| self.at(i, j).clone()).collect()).unwrap()
    }

    pub fn from_cols(cols: &[ColVec]) -> Result<Self> {
        if cols.is_empty() {
            return Err(Error::DimensionMismatch("no columns given".into()));
        }
        let n = cols[0].dim();
        if cols.iter().any(|c| c.dim() != n) {
            return Err(Error::DimensionMismatch("columns of unequal dimension".into()));
        }
        Ok(Mat::from_fn(n, cols.len(), |i, j| cols[j].at(i).clone()))
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Mat) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "hstack of {} and {} rows",
                self.rows, other.rows
            )));
        }
        Ok(Mat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        }))
    }

    pub fn checked_mul(&self, rhs: &Mat) -> Result<Mat> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Mat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let aik = self.at(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let v = out.at(i, j) + aik * rhs.at(k, j);
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_col(&self, v: &ColVec) -> Result<ColVec> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * vector of dim {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let data = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * v.at(j)).sum())
            .collect();
        ColVec::new(data)
    }

    /// `self - lambda * I` for square matrices.
    pub fn sub_scalar_diag(&self, lambda: &BigInt) -> Result<Mat> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            let v = out.at(i, i) - lambda;
            out.set(i, i, v);
        }
        Ok(out)
    }

    /// Gcd of absolute values of all entries; 0 iff the matrix is zero.
    pub fn gcd_entries(&self) -> BigInt {
        let mut g = BigInt::zero();
        for e in &self.data {
            g = g.gcd(e);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.at(i, j).is_one()
                    } else {
                        self.at(i, j).is_zero()
                    }
                })
            })
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<BigInt> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n.saturating_sub(1) {
            if m.at(k, k).is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !m.at(r, k).is_zero()) else {
                    return Ok(BigInt::zero());
                };
                for j in 0..n {
                    let tmp = m.at(k, j).clone();
                    m.set(k, j, m.at(r, j).clone());
                    m.set(r, j, tmp);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j);
                    let (q, r) = num.div_rem(&prev);
                    debug_assert!(r.is_zero(), "Bareiss division must be exact");
                    m.set(i, j, q);
                }
                m.set(i, k, BigInt::zero());
            }
            prev = m.at(k, k).clone();
        }
        Ok(sign * m.at(n - 1, n - 1).clone())
    }

    pub fn is_unimodular(&self) -> bool {
        matches!(self.det(), Ok(d) if d.abs().is_one())
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.data
            .iter()
            .map(|e| e.abs())
            .max()
            .unwrap_or_else(BigInt::zero)
    }
}

impl Index<(usize, usize)> for Mat {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        self.at(i, j)
    }
}

impl Mul for &Mat {
    type Output = Mat;
    fn mul(self, rhs: &Mat) -> Mat {
        self.checked_mul(rhs).expect("matrix product dimension mismatch")
    }
}

impl Add for &Mat {
    type Output = Mat;
    fn add(self, rhs: &Mat) -> Mat {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix sum dimension mismatch"
        );
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &Mat {
    type Output = Mat;
    fn sub(self, rhs: &Mat) -> Mat {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "matrix difference dimension mismatch"
        );
        Mat::from_fn(self.rows, self.cols, |i, j| self.at(i, j) - rhs.at(i, j))
    }
}

impl Neg for &Mat {
    type Output = Mat;
    fn neg(self) -> Mat {
        Mat::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{} ", self.at(i, j))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widths: Vec<usize> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.at(i, j).to_string().len()).max().unwrap_or(1))
            .collect();
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{:>w$}", self.at(i, j).to_string(), w = widths[j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Integer column vector of dimension >= 1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ColVec {
    data: Vec<BigInt>,
}

impl ColVec {
    pub fn new(data: Vec<BigInt>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::DimensionMismatch("empty vector".into()));
        }
        Ok(ColVec { data })
    }

    pub fn from_i64(entries: &[i64]) -> Self {
        ColVec::new(entries.iter().map(|&e| BigInt::from(e)).collect()).expect("nonempty")
    }

    pub fn zeros(dim: usize) -> Self {
        ColVec::new(vec![BigInt::zero(); dim]).expect("positive dim")
    }

    pub fn unit(dim: usize, idx: usize) -> Self {
        let mut v = ColVec::zeros(dim);
        v.data[idx] = BigInt::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn at(&self, i: usize) -> &BigInt {
        &self.data[i]
    }

    pub fn set(&mut self, i: usize, v: BigInt) {
        self.data[i] = v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn gcd_entries(&self) -> BigInt {
        let mut g = BigInt::zero();
        for e in &self.data {
            g = g.gcd(e);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// `self + k * other`, entrywise.
    pub fn add_scaled(&self, k: &BigInt, other: &ColVec) -> Result<ColVec> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "vector dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        ColVec::new(
            self.data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + k * b)
                .collect(),
        )
    }

    /// Exact entrywise division; errors if any entry is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Result<ColVec> {
        let mut out = Vec::with_capacity(self.dim());
        for e in &self.data {
            let (q, r) = e.div_rem(d);
            if !r.is_zero() {
                return Err(Error::Internal(format!("{e} not divisible by {d}")));
            }
            out.push(q);
        }
        ColVec::new(out)
    }
}

impl fmt::Debug for ColVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, e) in self.data.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "]^T")
    }
}

impl fmt::Display for ColVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Gcd of absolute values across several vectors, with gcd() = 0 on all-zero input.
pub fn gcd_of_vecs(vs: &[&ColVec]) -> BigInt {
    let mut g = BigInt::zero();
    for v in vs {
        for e in v.entries() {
            g = g.gcd(e);
            if g.is_one() {
                return g;
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsupport::det_cofactor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn mul_identity_fixes_matrix() {
        let a = Mat::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let i3 = Mat::identity(3);
        assert_eq!(&i3 * &a, a);
        assert_eq!(&a * &i3, a);
    }

    #[test]
    fn mul_involution_and_hand_product() {
        let swap = Mat::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert!((&swap * &swap).is_identity());

        let a = Mat::from_i64_rows(&[&[2, 0], &[0, 3]]);
        let b = Mat::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(&a * &b, Mat::from_i64_rows(&[&[2, 2], &[3, 3]]));
    }

    #[test]
    fn mul_dimension_mismatch_is_an_error() {
        let a = Mat::from_i64_rows(&[&[1, 2]]);
        let b = Mat::from_i64_rows(&[&[1, 2]]);
        assert!(matches!(a.checked_mul(&b), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn det_identity_and_zero() {
        for n in 1..=5 {
            assert_eq!(Mat::identity(n).det().unwrap(), BigInt::one());
            assert_eq!(Mat::zeros(n, n).det().unwrap(), BigInt::zero());
        }
    }

    #[test]
    fn det_rejects_non_square() {
        let a = Mat::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(a.det(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn det_matches_cofactor_oracle_on_random_6x6() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xB41E55);
        for _ in 0..25 {
            let a = Mat::from_fn(6, 6, |_, _| BigInt::from(rng.gen_range(-10i64..=10)));
            assert_eq!(a.det().unwrap(), det_cofactor(&a));
        }
    }

    #[test]
    fn det_of_product_is_product_of_dets() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xD07);
        for _ in 0..20 {
            let n = rng.gen_range(2..=5);
            let a = Mat::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
            let b = Mat::from_fn(n, n, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
            assert_eq!(
                (&a * &b).det().unwrap(),
                a.det().unwrap() * b.det().unwrap()
            );
        }
    }

    #[test]
    fn gcd_entries_conventions() {
        assert_eq!(Mat::zeros(3, 4).gcd_entries(), BigInt::zero());
        assert_eq!(
            Mat::from_i64_rows(&[&[2, 4], &[6, 8]]).gcd_entries(),
            BigInt::from(2)
        );
        assert_eq!(Mat::identity(3).gcd_entries(), BigInt::one());
    }

    #[test]
    fn sub_scalar_diag_shifts_diagonal_only() {
        let a = Mat::from_i64_rows(&[&[5, 2], &[3, 7]]);
        let s = a.sub_scalar_diag(&BigInt::from(5)).unwrap();
        assert_eq!(s, Mat::from_i64_rows(&[&[0, 2], &[3, 2]]));
    }
}
