//! Integral-conjugation normal forms.
//!
//! Two reductions are provided, each returning the reduced matrix together
//! with an exact unimodular conjugator chain witnessing it:
//!
//! * [`to_type_h`] clears the first column below row 2 while preserving the
//!   (1,1) entry, via swap-like and Bezout conjugations acting on rows and
//!   columns 2 and k.
//! * [`to_type_hn`] takes a type-H0 matrix with entry gcd 1 to type H_n,
//!   either through a Smith-form column rearrangement (zero first column)
//!   or through an upper-triangular conjugator built from iterated
//!   gcd-combining coefficients ([`choose_k`]).
//!
//! All conjugations are canonicalized to the `P * A * P^-1` orientation;
//! constructions that naturally produce a `T^-1 * A * T` witness are
//! converted on ingestion.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmat::{
    ext_gcd, factorize, gcd_of_vecs, inverse_unimodular, smith_normal_form, ColVec, Mat,
};

/// Shape classification, strongest tag first: `Hn => H0 => H`.
///
/// Type H: first column supported on rows 1-2. Type H0: additionally the
/// (1,1) entry is zero. Type H_n: additionally gcd of the (2,1) entry and
/// the whole last column is 1. Tags are always recomputed from entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TypeTag {
    General,
    H,
    H0,
    Hn,
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            TypeTag::General => "GENERAL",
            TypeTag::H => "H",
            TypeTag::H0 => "H0",
            TypeTag::Hn => "HN",
        };
        f.write_str(s)
    }
}

/// Strongest applicable tag for a square matrix with n >= 3.
pub fn classify(a: &Mat) -> Result<TypeTag> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n < 3 {
        return Err(Error::TooSmall { n });
    }
    if (2..n).any(|i| !a.at(i, 0).is_zero()) {
        return Ok(TypeTag::General);
    }
    if !a.at(0, 0).is_zero() {
        return Ok(TypeTag::H);
    }
    let mut g = a.at(1, 0).clone();
    for i in 0..n {
        g = g.gcd(a.at(i, n - 1));
    }
    if g.is_one() {
        Ok(TypeTag::Hn)
    } else {
        Ok(TypeTag::H0)
    }
}

/// Accumulated unimodular conjugator `P` with its exact inverse.
/// The reduced matrix always equals `p * original * p_inv`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodChain {
    pub p: Mat,
    pub p_inv: Mat,
}

impl UnimodChain {
    pub fn identity(n: usize) -> Self {
        UnimodChain {
            p: Mat::identity(n),
            p_inv: Mat::identity(n),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.p.is_identity()
    }

    /// Appends a conjugation step: `p <- x * p`, `p_inv <- p_inv * x_inv`.
    pub fn push_left(&mut self, x: &Mat, x_inv: &Mat) {
        debug_assert!(x.checked_mul(x_inv).unwrap().is_identity());
        self.p = x * &self.p;
        self.p_inv = &self.p_inv * x_inv;
    }

    /// Chain equivalent to conjugating by `inner` first, then `outer`.
    pub fn compose(outer: &UnimodChain, inner: &UnimodChain) -> UnimodChain {
        UnimodChain {
            p: &outer.p * &inner.p,
            p_inv: &inner.p_inv * &outer.p_inv,
        }
    }

    pub fn conjugate(&self, a: &Mat) -> Mat {
        &(&self.p * a) * &self.p_inv
    }

    /// Ingests a conjugator given in the `T^-1 * A * T` orientation.
    pub fn from_right_conjugator(t: &Mat) -> Result<Self> {
        Ok(UnimodChain {
            p: inverse_unimodular(t)?,
            p_inv: t.clone(),
        })
    }

    /// The `T` with `T^-1 * A * T = p * A * p_inv`; inverse of ingestion.
    pub fn to_right_conjugator(&self) -> Mat {
        self.p_inv.clone()
    }

    pub fn verify(&self) -> Result<()> {
        if !self.p.checked_mul(&self.p_inv)?.is_identity() {
            return Err(Error::Internal("chain inverse mismatch".into()));
        }
        if !self.p.is_unimodular() {
            return Err(Error::Internal("chain conjugator not unimodular".into()));
        }
        Ok(())
    }
}

/// Identity matrix with a 2x2 block planted at rows/cols `(i, j)`.
fn planted_block(n: usize, i: usize, j: usize, block: [&BigInt; 4]) -> Mat {
    let mut m = Mat::identity(n);
    m.set(i, i, block[0].clone());
    m.set(i, j, block[1].clone());
    m.set(j, i, block[2].clone());
    m.set(j, j, block[3].clone());
    m
}

/// Conjugates `a` (square, n >= 3) to type H, preserving the (1,1) entry.
///
/// While some entry below row 2 of the first column is nonzero: if the
/// (2,1) entry is zero, a swap-like conjugation moves the offender up;
/// otherwise a Bezout conjugation on rows/cols 2 and k plants
/// gcd(a21, ak1) at (2,1) and zeroes (k,1). Rows are processed in
/// increasing order, which makes the output deterministic.
pub fn to_type_h(a: &Mat) -> Result<(Mat, UnimodChain)> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let n = a.rows();
    if n < 3 {
        return Err(Error::TooSmall { n });
    }
    let one = BigInt::one();
    let zero = BigInt::zero();
    let neg_one = -&one;

    let mut m = a.clone();
    let mut chain = UnimodChain::identity(n);
    for k in 2..n {
        if m.at(k, 0).is_zero() {
            continue;
        }
        if m.at(1, 0).is_zero() {
            // swap-like step: moves the (k,1) entry to (2,1)
            let x = planted_block(n, 1, k, [&zero, &one, &neg_one, &zero]);
            let x_inv = planted_block(n, 1, k, [&zero, &neg_one, &one, &zero]);
            m = &(&x * &m) * &x_inv;
            chain.push_left(&x, &x_inv);
            debug_assert!(m.at(k, 0).is_zero());
            continue;
        }
        let (a21, ak1) = (m.at(1, 0).clone(), m.at(k, 0).clone());
        let (d, s, t) = ext_gcd(&a21, &ak1);
        let (ak1_d, a21_d) = (&ak1 / &d, &a21 / &d);
        let y = planted_block(n, 1, k, [&s, &t, &-&ak1_d, &a21_d]);
        let y_inv = planted_block(n, 1, k, [&a21_d, &-&t, &ak1_d, &s]);
        m = &(&y * &m) * &y_inv;
        chain.push_left(&y, &y_inv);
        debug_assert!(m.at(k, 0).is_zero());
        debug_assert_eq!(m.at(1, 0), &d);
    }
    debug_assert_eq!(m.at(0, 0), a.at(0, 0));
    debug_assert!(classify(&m)? != TypeTag::General);
    Ok((m, chain))
}

/// Prime-set partition backing a constructed gcd-combining coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSets {
    /// primes dividing gcd(v1 / d)
    pub all: Vec<BigUint>,
    pub p1: Vec<BigUint>,
    pub p2: Vec<BigUint>,
    pub p3: Vec<BigUint>,
}

#[derive(Clone, Debug)]
pub struct ChosenK {
    pub k: BigInt,
    /// Present when the constructive prime-set route was taken; absent when
    /// the factorization cap forced the bounded-enumeration fallback.
    pub prime_sets: Option<PrimeSets>,
}

/// Fallback search range when factorization is refused by the size cap.
pub const ENUMERATION_BOUND: i64 = 1_000_000;

/// Finds `k` with `gcd(v1, v3 + k*v2) = gcd(v1, v2, v3)` (v1 nonzero).
pub fn choose_k(v1: &ColVec, v2: &ColVec, v3: &ColVec) -> Result<BigInt> {
    choose_k_detailed(v1, v2, v3).map(|c| c.k)
}

/// As [`choose_k`], also reporting the prime-set partition used.
///
/// Construction: with `d = gcd(v1, v2, v3)`, let P be the primes dividing
/// `gcd(v1/d)`; P1 those also dividing `gcd(v3/d)`; P2 those not in P1
/// dividing `gcd(v2/d)`; P3 the rest. Then `k` is the product over P3
/// (1 when empty). If the factorization cap refuses `gcd(v1/d)`, a bounded
/// enumeration over `|k| <= 10^6` stands in; exhausting the bound is
/// reported as an explicit error, never a silent wrong answer.
pub fn choose_k_detailed(v1: &ColVec, v2: &ColVec, v3: &ColVec) -> Result<ChosenK> {
    if v1.is_zero() {
        return Err(Error::ZeroVector);
    }
    if v1.dim() != v2.dim() || v1.dim() != v3.dim() {
        return Err(Error::DimensionMismatch(format!(
            "vector dims {}, {}, {}",
            v1.dim(),
            v2.dim(),
            v3.dim()
        )));
    }
    let d = gcd_of_vecs(&[v1, v2, v3]);
    let g1 = v1.gcd_entries() / &d;
    let g2 = v2.gcd_entries() / &d;
    let g3 = v3.gcd_entries() / &d;

    let check = |k: &BigInt| -> Result<bool> {
        let shifted = v3.add_scaled(k, v2)?;
        Ok(gcd_of_vecs(&[v1, &shifted]) == d)
    };

    match factorize(&g1.to_biguint().expect("g1 positive")) {
        Ok(mut primes) => {
            primes.dedup();
            let divides = |p: &BigUint, x: &BigInt| (x % BigInt::from(p.clone())).is_zero();
            let mut sets = PrimeSets {
                all: primes.clone(),
                p1: Vec::new(),
                p2: Vec::new(),
                p3: Vec::new(),
            };
            for p in primes {
                if divides(&p, &g3) {
                    sets.p1.push(p);
                } else if divides(&p, &g2) {
                    sets.p2.push(p);
                } else {
                    sets.p3.push(p);
                }
            }
            let k = if sets.p3.is_empty() {
                BigInt::one()
            } else {
                BigInt::from(sets.p3.iter().product::<BigUint>())
            };
            if !check(&k)? {
                return Err(Error::Internal(format!(
                    "constructed k = {k} misses the gcd target {d}"
                )));
            }
            Ok(ChosenK {
                k,
                prime_sets: Some(sets),
            })
        }
        Err(Error::FactorCapExceeded { .. }) => {
            for mag in 0..=ENUMERATION_BOUND {
                for k in [BigInt::from(mag), BigInt::from(-mag)] {
                    if check(&k)? {
                        return Ok(ChosenK {
                            k,
                            prime_sets: None,
                        });
                    }
                    if mag == 0 {
                        break;
                    }
                }
            }
            Err(Error::EnumerationExhausted {
                bound: ENUMERATION_BOUND,
            })
        }
        Err(e) => Err(e),
    }
}

/// Conjugates a type-H0 matrix with entry gcd 1 to type H_n.
///
/// Zero first column: take the Smith form of the remaining columns, then a
/// cyclic column permutation parks a primitive column last. Nonzero first
/// column (necessarily `a21 * e2`): fold columns right-to-left with
/// [`choose_k`] so the last column becomes coprime to the first.
pub fn to_type_hn(h0: &Mat) -> Result<(Mat, UnimodChain)> {
    let tag = classify(h0)?;
    match tag {
        TypeTag::Hn => return Ok((h0.clone(), UnimodChain::identity(h0.rows()))),
        TypeTag::H0 => {}
        other => {
            return Err(Error::WrongType {
                expected: "H0 or HN".into(),
                found: other.to_string(),
            })
        }
    }
    let g = h0.gcd_entries();
    if !g.is_one() {
        return Err(Error::GcdNotOne { gcd: g.to_string() });
    }
    let n = h0.rows();
    let v1 = h0.col(0);

    let chain = if v1.is_zero() {
        // Smith route. gcd of the remaining columns is 1, so the form
        // starts with a unit; the cyclic permutation moves the resulting
        // primitive column (a unimodular image of e1) into last position.
        let rest = Mat::from_fn(n, n - 1, |i, j| h0.at(i, j + 1).clone());
        let snf = smith_normal_form(&rest);
        if !snf.d.at(0, 0).is_one() {
            return Err(Error::Internal(
                "leading Smith divisor is not 1 despite entry gcd 1".into(),
            ));
        }
        let perm = Mat::from_fn(n - 1, n - 1, |i, j| {
            if (i == 0 && j == n - 2) || (i > 0 && j == i - 1) {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        });
        let cd = &snf.v * &perm;
        let t = Mat::from_fn(n, n, |i, j| {
            if i == 0 && j == 0 {
                BigInt::one()
            } else if i == 0 || j == 0 {
                BigInt::zero()
            } else {
                cd.at(i - 1, j - 1).clone()
            }
        });
        UnimodChain::from_right_conjugator(&t)?
    } else {
        // The H0 shape forces v1 = a21 * e2; re-check rather than trust.
        if (0..n).any(|i| i != 1 && !v1.at(i).is_zero()) {
            return Err(Error::Internal("type H0 matrix with malformed first column".into()));
        }
        let mut vtilde = h0.col(1);
        let mut ks: Vec<BigInt> = Vec::with_capacity(n - 2);
        for j in 2..n {
            let vj = h0.col(j);
            let k = choose_k(&v1, &vtilde, &vj)?;
            vtilde = vj.add_scaled(&k, &vtilde)?;
            ks.push(k);
        }
        // Unit upper-triangular accumulator: t[i][j] = prod of ks over the
        // window (i..j], rows/cols 1-based from the second row on.
        let t = Mat::from_fn(n, n, |i, j| {
            if i == j {
                BigInt::one()
            } else if i >= 1 && j > i {
                ks[i - 1..=j - 2].iter().product()
            } else {
                BigInt::zero()
            }
        });
        UnimodChain::from_right_conjugator(&t)?
    };

    let hn = chain.conjugate(h0);
    if classify(&hn)? != TypeTag::Hn {
        return Err(Error::Internal(format!(
            "reduction did not reach type HN:\n{hn}"
        )));
    }
    Ok((hn, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testsupport::enumerate_gcd_coefficient;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn classify_spec_fixtures() {
        let hn = Mat::from_i64_rows(&[&[0, 1, 2], &[5, 0, 0], &[0, 3, 4]]);
        assert_eq!(classify(&hn).unwrap(), TypeTag::Hn);

        assert_eq!(classify(&Mat::identity(3)).unwrap(), TypeTag::H);

        let cyc = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        assert_eq!(classify(&cyc).unwrap(), TypeTag::General);
    }

    #[test]
    fn classify_rejects_small_or_rectangular() {
        assert!(matches!(
            classify(&Mat::identity(2)),
            Err(Error::TooSmall { n: 2 })
        ));
        let rect = Mat::from_i64_rows(&[&[1, 2, 3], &[4, 5, 6]]);
        assert!(matches!(classify(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn to_type_h_leaves_type_h_untouched() {
        let h = Mat::from_i64_rows(&[&[7, 1, 2], &[3, 0, 0], &[0, 3, 4]]);
        let (out, chain) = to_type_h(&h).unwrap();
        assert_eq!(out, h);
        assert!(chain.is_identity());
    }

    #[test]
    fn to_type_h_on_three_cycle() {
        let a = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let (h, chain) = to_type_h(&a).unwrap();
        chain.verify().unwrap();
        assert_eq!(chain.conjugate(&a), h);
        assert!(h.at(2, 0).is_zero());
        assert!(h.at(0, 0).is_zero()); // (1,1) preserved
        assert!(classify(&h).unwrap() != TypeTag::General);
    }

    #[test]
    fn to_type_h_random_postconditions() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x70E);
        for _ in 0..30 {
            let a = Mat::from_fn(4, 4, |_, _| BigInt::from(rng.gen_range(-5i64..=5)));
            let (h, chain) = to_type_h(&a).unwrap();
            chain.verify().unwrap();
            assert_eq!(chain.conjugate(&a), h);
            assert_eq!(h.at(0, 0), a.at(0, 0));
            assert!(classify(&h).unwrap() != TypeTag::General);
            // entry gcd is a conjugation invariant
            assert_eq!(h.gcd_entries(), a.gcd_entries());
        }
    }

    #[test]
    fn choose_k_spec_fixtures() {
        let v1 = ColVec::from_i64(&[2, 0]);
        let v2 = ColVec::from_i64(&[1, 0]);
        let v3 = ColVec::from_i64(&[0, 0]);
        let got = choose_k_detailed(&v1, &v2, &v3).unwrap();
        assert_eq!(got.k, BigInt::one());
        let shifted = v3.add_scaled(&got.k, &v2).unwrap();
        assert_eq!(gcd_of_vecs(&[&v1, &shifted]), BigInt::one());

        let v1 = ColVec::from_i64(&[6]);
        let v2 = ColVec::from_i64(&[2]);
        let v3 = ColVec::from_i64(&[3]);
        let got = choose_k_detailed(&v1, &v2, &v3).unwrap();
        assert_eq!(got.k, BigInt::one());
        let sets = got.prime_sets.unwrap();
        assert_eq!(sets.all, vec![BigUint::from(2u32), BigUint::from(3u32)]);
        assert_eq!(sets.p1, vec![BigUint::from(3u32)]);
        assert_eq!(sets.p2, vec![BigUint::from(2u32)]);
        assert!(sets.p3.is_empty());

        // v3 already compatible: the k = 1 branch stays valid
        let v1 = ColVec::from_i64(&[4]);
        let v2 = ColVec::from_i64(&[2]);
        let v3 = ColVec::from_i64(&[1]);
        assert_eq!(choose_k(&v1, &v2, &v3).unwrap(), BigInt::one());
    }

    #[test]
    fn choose_k_rejects_zero_v1() {
        let z = ColVec::from_i64(&[0, 0]);
        let v = ColVec::from_i64(&[1, 2]);
        assert!(matches!(choose_k(&z, &v, &v), Err(Error::ZeroVector)));
    }

    #[test]
    fn choose_k_agrees_with_enumeration_on_random_triples() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        for _ in 0..200 {
            let dim = rng.gen_range(1..=4);
            let rand_vec = |rng: &mut ChaCha8Rng| {
                ColVec::new((0..dim).map(|_| BigInt::from(rng.gen_range(-30i64..=30))).collect())
                    .unwrap()
            };
            let v1 = rand_vec(&mut rng);
            if v1.is_zero() {
                continue;
            }
            let v2 = rand_vec(&mut rng);
            let v3 = rand_vec(&mut rng);
            let k = choose_k(&v1, &v2, &v3).unwrap();
            let target = gcd_of_vecs(&[&v1, &v2, &v3]);
            let shifted = v3.add_scaled(&k, &v2).unwrap();
            assert_eq!(gcd_of_vecs(&[&v1, &shifted]), target);
            // an independent enumeration must also hit the target
            assert!(enumerate_gcd_coefficient(&v1, &v2, &v3, 1000).is_some());
        }
    }

    #[test]
    fn to_type_hn_short_circuits_on_hn_input() {
        let hn = Mat::from_i64_rows(&[&[0, 1, 2], &[5, 0, 0], &[0, 3, 4]]);
        let (out, chain) = to_type_hn(&hn).unwrap();
        assert_eq!(out, hn);
        assert!(chain.is_identity());
    }

    #[test]
    fn to_type_hn_zero_first_column_case() {
        let h0 = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 0], &[0, 0, 1]]);
        let (hn, chain) = to_type_hn(&h0).unwrap();
        chain.verify().unwrap();
        assert_eq!(chain.conjugate(&h0), hn);
        assert_eq!(classify(&hn).unwrap(), TypeTag::Hn);
    }

    #[test]
    fn to_type_hn_nonzero_first_column_case() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x42);
        let mut seen = 0;
        while seen < 25 {
            let mut h0 = Mat::from_fn(3, 3, |_, _| BigInt::from(rng.gen_range(-6i64..=6)));
            h0.set(0, 0, BigInt::zero());
            h0.set(1, 0, BigInt::from(3));
            h0.set(2, 0, BigInt::zero());
            if !h0.gcd_entries().is_one() {
                continue;
            }
            seen += 1;
            let (hn, chain) = to_type_hn(&h0).unwrap();
            chain.verify().unwrap();
            assert_eq!(chain.conjugate(&h0), hn);
            assert_eq!(classify(&hn).unwrap(), TypeTag::Hn);
            assert_eq!(hn.gcd_entries(), h0.gcd_entries());
        }
    }

    #[test]
    fn to_type_hn_rejects_bad_preconditions() {
        let h = Mat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(matches!(to_type_hn(&h), Err(Error::WrongType { .. })));

        let h0 = Mat::from_i64_rows(&[&[0, 2, 0], &[2, 0, 2], &[0, 2, 0]]);
        assert!(matches!(to_type_hn(&h0), Err(Error::GcdNotOne { .. })));
    }

    #[test]
    fn conjugator_orientation_round_trip() {
        let t = Mat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 7], &[0, 0, 1]]);
        let chain = UnimodChain::from_right_conjugator(&t).unwrap();
        assert_eq!(chain.to_right_conjugator(), t);
        chain.verify().unwrap();
    }
}
