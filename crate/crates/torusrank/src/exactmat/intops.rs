//! Scalar integer helpers shared by the normal-form engines.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

/// Extended gcd with a canonical Bezout pair: returns `(g, s, t)` with
/// `s*a + t*b = g`, `g >= 0`, and — when both inputs are nonzero — `s`
/// reduced into `[0, |b|/g)` so repeated runs pick the same coefficients.
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    if a.is_zero() && b.is_zero() {
        return (BigInt::zero(), BigInt::zero(), BigInt::zero());
    }
    if b.is_zero() {
        return (a.abs(), BigInt::from(a.signum()), BigInt::zero());
    }
    if a.is_zero() {
        return (b.abs(), BigInt::zero(), BigInt::from(b.signum()));
    }
    let e = a.extended_gcd(b);
    let (g, mut s) = (e.gcd, e.x);
    let modulus = (b / &g).abs();
    s = s.mod_floor(&modulus);
    let t = (&g - &s * a) / b;
    debug_assert_eq!(&s * a + &t * b, g);
    (g, s, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(a: i64, b: i64) {
        let (g, s, t) = ext_gcd(&BigInt::from(a), &BigInt::from(b));
        assert_eq!(&s * a + &t * b, g);
        assert!(g >= BigInt::zero());
        if a != 0 || b != 0 {
            assert_eq!(g, BigInt::from(a).gcd(&BigInt::from(b)));
        }
    }

    #[test]
    fn bezout_identity_holds() {
        for a in -12..=12 {
            for b in -12..=12 {
                check(a, b);
            }
        }
        check(0, 0);
        check(462, 1071);
    }

    #[test]
    fn canonical_pair_is_stable() {
        let (g, s, t) = ext_gcd(&BigInt::from(6), &BigInt::from(4));
        assert_eq!((g, s.clone(), t), (BigInt::from(2), BigInt::from(1), BigInt::from(-1)));
        let (_, s2, _) = ext_gcd(&BigInt::from(6), &BigInt::from(4));
        assert_eq!(s, s2);
    }
}
