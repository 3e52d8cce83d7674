//! Exact arbitrary-precision integer matrix kernel: products, fraction-free
//! determinants, entry gcds, Smith/Hermite normal forms with transformation
//! witnesses, basis extension, and small-integer factorization.
//!
//! All values are immutable from the caller's point of view and every
//! operation is a pure function, so callers may parallelize freely.

mod factor;
mod hnf;
mod intops;
mod mat;
mod snf;

pub use factor::{
    factor_cap_bits, factorize, factorize_with_cap, is_prime, DEFAULT_FACTOR_CAP_BITS,
    FACTOR_CAP_ENV,
};
pub use hnf::{hermite_normal_form, HermiteForm};
pub use intops::ext_gcd;
pub use mat::{gcd_of_vecs, ColVec, Mat};
pub use snf::{extend_to_basis, inverse_unimodular, smith_normal_form, SmithDecomp};
