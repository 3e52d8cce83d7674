//! Small-integer factorization: trial division, then a Brent-cycle rho
//! split for larger cofactors, with deterministic primality confirmation.
//!
//! Inputs above a configurable bit-size cap are refused so the tool stays
//! total; callers that only need *some* valid coefficient (not the prime
//! sets themselves) fall back to bounded enumeration when refused.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default refusal threshold: inputs above 2^128 are rejected.
pub const DEFAULT_FACTOR_CAP_BITS: u64 = 128;

/// Environment variable that overrides the factorization size cap (in bits).
pub const FACTOR_CAP_ENV: &str = "TORUSRANK_FACTOR_CAP";

/// Current cap in bits, honoring the `TORUSRANK_FACTOR_CAP` override.
pub fn factor_cap_bits() -> u64 {
    std::env::var(FACTOR_CAP_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&b| b > 0)
        .unwrap_or(DEFAULT_FACTOR_CAP_BITS)
}

/// Prime factorization of `n >= 1` with multiplicity, sorted ascending.
pub fn factorize(n: &BigUint) -> Result<Vec<BigUint>> {
    factorize_with_cap(n, factor_cap_bits())
}

pub fn factorize_with_cap(n: &BigUint, cap_bits: u64) -> Result<Vec<BigUint>> {
    if n.is_zero() {
        return Err(Error::ZeroInput);
    }
    if n.bits() > cap_bits {
        return Err(Error::FactorCapExceeded { cap_bits });
    }
    let mut factors = Vec::new();
    let mut m = n.clone();
    trial_divide(&mut m, &mut factors);
    let mut stack = vec![m];
    while let Some(c) = stack.pop() {
        if c.is_one() {
            continue;
        }
        if is_prime(&c) {
            factors.push(c);
            continue;
        }
        let d = brent_rho(&c);
        stack.push(&c / &d);
        stack.push(d);
    }
    factors.sort();
    debug_assert_eq!(&factors.iter().product::<BigUint>(), n);
    Ok(factors)
}

const TRIAL_LIMIT: u64 = 10_000;

fn trial_divide(n: &mut BigUint, factors: &mut Vec<BigUint>) {
    let mut try_p = |p: u64, n: &mut BigUint| {
        let pb = BigUint::from(p);
        while (&*n % &pb).is_zero() {
            factors.push(pb.clone());
            *n /= &pb;
        }
    };
    try_p(2, n);
    try_p(3, n);
    let mut p = 5u64;
    while p <= TRIAL_LIMIT {
        if BigUint::from(p) * p > *n {
            break;
        }
        try_p(p, n);
        try_p(p + 2, n);
        p += 6;
    }
    if !n.is_one() && n.bits() <= 27 {
        // below TRIAL_LIMIT^2 the survivor must itself be prime
        factors.push(std::mem::replace(n, BigUint::one()));
    }
}

/// Deterministic Miller-Rabin below 2^64; above that, the fixed-base
/// Miller-Rabin battery plus a strong Lucas test (no counterexample to the
/// combination is known, and the tool never meets such sizes by default).
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for p in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let pb = BigUint::from(p);
        if *n == pb {
            return true;
        }
        if (n % &pb).is_zero() {
            return false;
        }
    }
    let bases: &[u32] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if !bases.iter().all(|&b| miller_rabin(n, &BigUint::from(b))) {
        return false;
    }
    if n.bits() <= 64 {
        // this base set is a proven witness battery for u64
        return true;
    }
    strong_lucas_prp(n)
}

fn miller_rabin(n: &BigUint, base: &BigUint) -> bool {
    let one = BigUint::one();
    let nm1 = n - &one;
    let s = nm1.trailing_zeros().unwrap_or(0);
    let d = &nm1 >> s;
    let mut x = base.modpow(&d, n);
    if x == one || x == nm1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if x == nm1 {
            return true;
        }
    }
    false
}

fn jacobi(a: &BigInt, n: &BigUint) -> i32 {
    // n odd positive
    let mut a = a.mod_floor(&BigInt::from(n.clone()));
    let mut n = BigInt::from(n.clone());
    let mut t = 1i32;
    while !a.is_zero() {
        while a.is_even() {
            a /= 2;
            let r = (&n % 8u32).to_u32().unwrap();
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if (&a % 4u32).to_u32().unwrap() == 3 && (&n % 4u32).to_u32().unwrap() == 3 {
            t = -t;
        }
        a = a.mod_floor(&n);
    }
    if n.is_one() {
        t
    } else {
        0
    }
}

fn strong_lucas_prp(n: &BigUint) -> bool {
    let sq = n.sqrt();
    if &(&sq * &sq) == n {
        return false;
    }
    // Selfridge parameters: first D = 5, -7, 9, -11, ... with (D/n) = -1.
    let mut d = BigInt::from(5);
    loop {
        match jacobi(&d, n) {
            -1 => break,
            0 => return false,
            _ => {}
        }
        d = if d.is_negative() { -&d + 2 } else { -(&d + BigInt::from(2)) };
    }
    let nb = BigInt::from(n.clone());
    let modn = |x: &BigInt| x.mod_floor(&nb);
    let half = (&nb + 1) / 2; // inverse of 2 mod n (n odd)
    let q = modn(&((BigInt::one() - &d) / 4));

    let np1 = n + BigUint::one();
    let s = np1.trailing_zeros().unwrap_or(0);
    let t = &np1 >> s;

    // Lucas ladder for U_t, V_t with P = 1.
    let mut u = BigInt::one();
    let mut v = BigInt::one();
    let mut qk = q.clone();
    let bits = t.bits();
    for i in (0..bits - 1).rev() {
        // double: (U, V, Q^k) -> (U V, V^2 - 2 Q^k, Q^2k)
        u = modn(&(&u * &v));
        v = modn(&(&v * &v - 2 * &qk));
        qk = modn(&(&qk * &qk));
        if t.bit(i) {
            // increment: U' = (U + V)/2, V' = (D U + V)/2
            let nu = modn(&((&u + &v) * &half));
            let nv = modn(&((&d * &u + &v) * &half));
            u = nu;
            v = nv;
            qk = modn(&(&qk * &q));
        }
    }
    if u.is_zero() || v.is_zero() {
        return true;
    }
    for _ in 1..s {
        v = modn(&(&v * &v - 2 * &qk));
        if v.is_zero() {
            return true;
        }
        qk = modn(&(&qk * &qk));
    }
    false
}

/// Brent-cycle Pollard rho with a deterministic parameter schedule.
fn brent_rho(n: &BigUint) -> BigUint {
    debug_assert!(!is_prime(n) && n > &BigUint::one());
    if n.is_even() {
        return BigUint::from(2u32);
    }
    for c in 1u64.. {
        let cb = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &cb) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = BigUint::one();
        let mut g = BigUint::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 64u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0u64;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = &q * &diff % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
        }
        if &g == n {
            // backtrack one step at a time
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n && !g.is_one() {
            return g;
        }
        // cycle collapsed onto n itself; retry with the next polynomial
    }
    unreachable!()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn fz(n: u128) -> Vec<BigUint> {
        factorize(&BigUint::from(n)).unwrap()
    }

    #[test]
    fn one_has_empty_factorization() {
        assert!(fz(1).is_empty());
    }

    #[test]
    fn twelve() {
        assert_eq!(fz(12), vec![2u32.into(), 2u32.into(), 3u32.into()]);
    }

    #[test]
    fn zero_is_rejected() {
        assert!(matches!(factorize(&BigUint::zero()), Err(Error::ZeroInput)));
    }

    #[test]
    fn cap_refusal() {
        let big = BigUint::one() << 200;
        assert!(matches!(
            factorize_with_cap(&big, 128),
            Err(Error::FactorCapExceeded { cap_bits: 128 })
        ));
        assert!(factorize_with_cap(&big, 256).is_ok());
    }

    fn random_prime_32(rng: &mut impl Rng) -> u64 {
        loop {
            let c = rng.gen_range(1u64 << 31..1 << 32) | 1;
            if is_prime(&BigUint::from(c)) {
                return c;
            }
        }
    }

    #[test]
    fn recovers_random_32bit_prime_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xFAC7);
        for _ in 0..5 {
            let p = random_prime_32(&mut rng);
            let q = random_prime_32(&mut rng);
            let n = BigUint::from(p) * BigUint::from(q);
            let fs = factorize(&n).unwrap();
            assert_eq!(fs.iter().product::<BigUint>(), n, "multiply-back failed");
            let mut expect = vec![BigUint::from(p), BigUint::from(q)];
            expect.sort();
            assert_eq!(fs, expect);
        }
    }

    #[test]
    fn primality_spot_checks() {
        assert!(is_prime(&BigUint::from(2u32)));
        assert!(is_prime(&BigUint::from(97u32)));
        assert!(!is_prime(&BigUint::from(1u32)));
        assert!(!is_prime(&BigUint::from(561u32))); // Carmichael
        assert!(is_prime(&BigUint::from(2u128.pow(89) - 1))); // Mersenne prime
        assert!(!is_prime(&BigUint::from(2u128.pow(89) + 1)));
        // 128-bit scale: exercise the Lucas branch
        let p = BigUint::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap();
        assert!(is_prime(&p)); // 2^127 - 1
        assert!(!is_prime(&(&p * &p)));
    }
}
