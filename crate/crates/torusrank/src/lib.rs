//! Certified decision procedure for whether the mapping torus
//! `Z^n x|_phi Z` of an automorphism of `Z^n` has full rank n + 1.
//!
//! Writing the automorphism as a matrix `A` in GL_n(Z) and `m_A` for the
//! minimum number of A-orbits generating `Z^n`, the group rank equals
//! `m_A + 1`, and for n >= 3 a single exact computation settles it:
//!
//! > `m_A = n`  if and only if  `gcd(A - a11 * I) != 1`.
//!
//! Everything here is exact arbitrary-precision integer arithmetic, and
//! every answer carries an independently checkable certificate:
//!
//! * full rank — a divisibility obstruction (`A = a11*I (mod d)` with
//!   `d != 1`, where `d = 0` means `A = a11*I` exactly);
//! * not full rank — an explicit generating orbit set of size n - 1,
//!   produced by a constructive reduction chain (type H, shift, type H_n,
//!   minor-certified witness vector, basis extension, pull-back) and
//!   re-verified against the original matrix before being emitted.
//!
//! Modules: [`exactmat`] (bigint kernel: products, fraction-free
//! determinants, Smith/Hermite forms with witnesses, factorization),
//! [`reduce`] (conjugation normal forms), [`witness`] (orbit-set
//! construction), [`decide`] (verdicts and certificates), [`oracle`]
//! (independent generation checks and bounded brute-force search) and
//! [`corpus`] (seeded random unimodular matrices).

pub mod corpus;
pub mod decide;
mod error;
pub mod exactmat;
pub mod oracle;
pub mod reduce;
#[doc(hidden)]
pub mod testsupport;
pub mod witness;

pub use decide::{decide_full_rank, Certificate, Decision, Verdict};
pub use error::{Error, Result};
pub use exactmat::{ColVec, HermiteForm, Mat, SmithDecomp};
pub use reduce::{TypeTag, UnimodChain};
pub use witness::{full_pipeline_witness, OrbitSet, PipelineWitness, WitnessTrace};
