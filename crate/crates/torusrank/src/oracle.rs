//! Independent verification machinery: orbit-subgroup computation through
//! the Hermite form, generation checks, and a bounded brute-force search
//! for small generating orbit sets.
//!
//! The brute search enumerates candidate vectors up to sign with entries in
//! a box, smallest set size first, and reports an upper bound for the
//! minimal orbit count; absence of a find is never a proof. Enumeration
//! over disjoint candidate ranges is embarrassingly parallel; with the
//! `parallel` feature the first-index loop fans out over rayon while
//! keeping the sequential result order (`find_map_first`), so both modes
//! return identical answers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exactmat::{hermite_normal_form, ColVec, HermiteForm, Mat};
use crate::witness::OrbitSet;

/// Columns `A^k v` for `k = 0..powers`, `v` in `s`.
///
/// The monic integer characteristic polynomial lets every higher power be
/// rewritten as an integer combination of the first n, so `powers = n`
/// captures the whole orbit subgroup.
pub fn orbit_matrix(a: &Mat, s: &OrbitSet, powers: usize) -> Result<Mat> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if s.dim() != a.rows() {
        return Err(Error::DimensionMismatch(format!(
            "orbit vectors of dim {} against a {}x{} matrix",
            s.dim(),
            a.rows(),
            a.cols()
        )));
    }
    let mut cols = Vec::with_capacity(s.len() * powers.max(1));
    for v in s.vectors() {
        let mut w = v.clone();
        for _ in 0..powers.max(1) {
            cols.push(w.clone());
            w = a.mul_col(&w)?;
        }
    }
    Mat::from_cols(&cols)
}

/// Hermite basis of the orbit subgroup generated by `{A^k v | k >= 0, v in s}`.
pub fn orbit_subgroup_basis(a: &Mat, s: &OrbitSet) -> Result<HermiteForm> {
    let m = orbit_matrix(a, s, a.rows())?;
    Ok(hermite_normal_form(&m))
}

/// True iff the orbit subgroup is all of Z^n (n unit pivots in the Hermite basis).
pub fn is_generating(a: &Mat, s: &OrbitSet) -> Result<bool> {
    Ok(orbit_subgroup_basis(a, s)?.is_full_lattice())
}

/// A successful brute-force find: the smallest set size reached within the
/// search bounds, with one witnessing set.
#[derive(Clone, Debug)]
pub struct BruteFind {
    pub size: usize,
    pub set: OrbitSet,
}

/// Searches for a generating orbit set of at most `max_size` vectors with
/// entries in `[-entry_bound, entry_bound]`, smallest size first.
///
/// Candidates are enumerated in lexicographic order, skipping zero and
/// fixing the first nonzero entry positive (orbit subgroups are invariant
/// under negating a generator), so the bounded search space is halved
/// without losing completeness. Returns the first find in that order, or
/// `None` — which only means "nothing within these bounds".
pub fn brute_min_upper(a: &Mat, entry_bound: i64, max_size: usize) -> Option<BruteFind> {
    #[cfg(feature = "parallel")]
    {
        brute_min_upper_par(a, entry_bound, max_size)
    }
    #[cfg(not(feature = "parallel"))]
    {
        brute_min_upper_seq(a, entry_bound, max_size)
    }
}

/// Single-threaded search; reference semantics for the parallel version.
pub fn brute_min_upper_seq(a: &Mat, entry_bound: i64, max_size: usize) -> Option<BruteFind> {
    let ctx = search::SearchCtx::prepare(a, entry_bound);
    for size in 1..=max_size {
        let found = (0..ctx.cands.len()).find_map(|i| ctx.subtree(i, size));
        if let Some(indices) = found {
            return Some(ctx.assemble(a, indices, size));
        }
    }
    None
}

/// Work-stealing search over the first candidate index. `find_map_first`
/// keeps the leftmost match, so the result equals the sequential one.
#[cfg(feature = "parallel")]
pub fn brute_min_upper_par(a: &Mat, entry_bound: i64, max_size: usize) -> Option<BruteFind> {
    let ctx = search::SearchCtx::prepare(a, entry_bound);
    for size in 1..=max_size {
        let found = (0..ctx.cands.len())
            .into_par_iter()
            .find_map_first(|i| ctx.subtree(i, size));
        if let Some(indices) = found {
            return Some(ctx.assemble(a, indices, size));
        }
    }
    None
}

mod search {
    //! Search internals. The union of orbit sublattices is maintained as a
    //! column-echelon basis, in `i128` with checked arithmetic and a
    //! transparent promotion to `BigInt` on overflow. Cheap necessary
    //! conditions (rank sum, spans modulo 2 and 3) discard most
    //! non-generating combinations before any echelon work; each filter is
    //! an exact linear-algebra fact, independent of the gcd criterion this
    //! oracle is used to cross-check.

    use super::*;

    const FILTER_MAX_N: usize = 16;

    /// Reduced basis of a subspace of F_2^n, one bitmask per basis vector.
    #[derive(Clone, Copy)]
    pub struct SpanF2 {
        basis: [u64; FILTER_MAX_N],
        len: usize,
    }

    impl SpanF2 {
        fn empty() -> Self {
            SpanF2 {
                basis: [0; FILTER_MAX_N],
                len: 0,
            }
        }

        fn insert(&mut self, mut v: u64) {
            // basis kept sorted descending, one distinct leading bit each,
            // so a single forward pass fully reduces v
            for i in 0..self.len {
                let b = self.basis[i];
                if (v ^ b) < v {
                    v ^= b;
                }
            }
            if v != 0 && self.len < FILTER_MAX_N {
                self.basis[self.len] = v;
                self.len += 1;
                self.basis[..self.len].sort_unstable_by(|a, b| b.cmp(a));
            }
        }

        pub fn rank(&self) -> usize {
            self.len
        }

        fn joined(&self, other: &SpanF2) -> SpanF2 {
            let mut out = *self;
            for i in 0..other.len {
                out.insert(other.basis[i]);
            }
            out
        }
    }

    /// Reduced echelon basis of a subspace of F_3^n.
    #[derive(Clone, Copy)]
    pub struct SpanF3 {
        basis: [[u8; FILTER_MAX_N]; FILTER_MAX_N],
        lead: [usize; FILTER_MAX_N],
        len: usize,
        n: usize,
    }

    impl SpanF3 {
        fn empty(n: usize) -> Self {
            SpanF3 {
                basis: [[0; FILTER_MAX_N]; FILTER_MAX_N],
                lead: [0; FILTER_MAX_N],
                len: 0,
                n,
            }
        }

        fn insert(&mut self, mut v: [u8; FILTER_MAX_N]) {
            for i in 0..self.len {
                let c = v[self.lead[i]];
                if c != 0 {
                    // leading coefficient of each basis vector is 1
                    for j in 0..self.n {
                        v[j] = (v[j] + (3 - c) * self.basis[i][j]) % 3;
                    }
                }
            }
            if let Some(l) = (0..self.n).find(|&j| v[j] != 0) {
                if v[l] == 2 {
                    for x in v.iter_mut().take(self.n) {
                        *x = (*x * 2) % 3;
                    }
                }
                if self.len < FILTER_MAX_N {
                    self.basis[self.len] = v;
                    self.lead[self.len] = l;
                    self.len += 1;
                }
            }
        }

        pub fn rank(&self) -> usize {
            self.len
        }

        fn joined(&self, other: &SpanF3) -> SpanF3 {
            let mut out = *self;
            for i in 0..other.len {
                out.insert(other.basis[i]);
            }
            out
        }
    }

    /// Echelon column basis of a sublattice of Z^n, small or promoted.
    #[derive(Clone, PartialEq, Eq)]
    pub enum Lat {
        Small(Vec<Vec<i128>>),
        Big(Vec<Vec<BigInt>>),
    }

    impl Lat {
        fn empty() -> Self {
            Lat::Small(Vec::new())
        }

        fn rank(&self) -> usize {
            match self {
                Lat::Small(c) => c.len(),
                Lat::Big(c) => c.len(),
            }
        }

        fn is_full(&self, n: usize) -> bool {
            if self.rank() != n {
                return false;
            }
            match self {
                Lat::Small(cols) => cols
                    .iter()
                    .all(|c| c.iter().find(|&&x| x != 0) == Some(&1)),
                Lat::Big(cols) => cols
                    .iter()
                    .all(|c| c.iter().find(|x| !x.is_zero()).map(|x| x.is_one()) == Some(true)),
            }
        }

        fn to_big(&self) -> Vec<Vec<BigInt>> {
            match self {
                Lat::Small(cols) => cols
                    .iter()
                    .map(|c| c.iter().map(|&x| BigInt::from(x)).collect())
                    .collect(),
                Lat::Big(cols) => cols.clone(),
            }
        }

        fn same_lattice(&self, other: &Lat) -> bool {
            match (self, other) {
                (Lat::Small(a), Lat::Small(b)) => a == b,
                (Lat::Big(a), Lat::Big(b)) => a == b,
                _ => self.to_big() == other.to_big(),
            }
        }
    }

    /// Column-echelon reduction over i128 without transform tracking.
    /// Canonical: pivot rows increasing, pivots positive, entries left of a
    /// pivot reduced into [0, pivot). `None` signals overflow.
    fn echelon_i128(n: usize, mut cols: Vec<Vec<i128>>) -> Option<Vec<Vec<i128>>> {
        let mut pc = 0usize;
        for row in 0..n {
            if pc == cols.len() {
                break;
            }
            if cols[pc][row] == 0 {
                if let Some(j) = (pc + 1..cols.len()).find(|&j| cols[j][row] != 0) {
                    cols.swap(pc, j);
                } else {
                    continue;
                }
            }
            for j in pc + 1..cols.len() {
                while cols[j][row] != 0 {
                    let q = cols[pc][row].checked_div(cols[j][row])?;
                    if q != 0 {
                        for r in row..n {
                            let sub = q.checked_mul(cols[j][r])?;
                            cols[pc][r] = cols[pc][r].checked_sub(sub)?;
                        }
                    }
                    cols.swap(pc, j);
                }
            }
            if cols[pc][row] < 0 {
                for r in row..n {
                    cols[pc][r] = cols[pc][r].checked_neg()?;
                }
            }
            let pivot = cols[pc][row];
            for j in 0..pc {
                let q = num_integer::Integer::div_floor(&cols[j][row], &pivot);
                if q != 0 {
                    for r in 0..n {
                        let sub = q.checked_mul(cols[pc][r])?;
                        cols[j][r] = cols[j][r].checked_sub(sub)?;
                    }
                }
            }
            pc += 1;
        }
        cols.truncate(pc);
        Some(cols)
    }

    /// BigInt fallback with the same canonical output.
    fn echelon_big(n: usize, cols: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
        if cols.is_empty() {
            return cols;
        }
        let mat = Mat::from_fn(n, cols.len(), |i, j| cols[j][i].clone());
        let hf = hermite_normal_form(&mat);
        (0..hf.rank())
            .map(|j| (0..n).map(|i| hf.h.at(i, j).clone()).collect())
            .collect()
    }

    pub struct Cand {
        pub vec: ColVec,
        basis_small: Option<Vec<Vec<i128>>>,
        basis_big: Vec<Vec<BigInt>>,
        rank: usize,
        span2: Option<SpanF2>,
        span3: Option<SpanF3>,
    }

    pub struct SearchCtx {
        n: usize,
        pub cands: Vec<Cand>,
    }

    fn lat_join(n: usize, lat: &Lat, cand: &Cand) -> Lat {
        if let (Lat::Small(cols), Some(extra)) = (lat, &cand.basis_small) {
            let mut all = cols.clone();
            all.extend(extra.iter().cloned());
            if let Some(e) = echelon_i128(n, all) {
                return Lat::Small(e);
            }
        }
        let mut all = lat.to_big();
        all.extend(cand.basis_big.iter().cloned());
        Lat::Big(echelon_big(n, all))
    }

    impl SearchCtx {
        pub fn prepare(a: &Mat, entry_bound: i64) -> SearchCtx {
            assert!(a.is_square(), "orbit search needs a square matrix");
            assert!(entry_bound >= 1, "entry bound must be positive");
            let n = a.rows();
            let mut cands = Vec::new();
            for raw in canonical_vectors(n, entry_bound) {
                let vec = ColVec::new(raw.iter().map(|&x| BigInt::from(x)).collect()).unwrap();
                let single = OrbitSet::new(vec![vec.clone()]).unwrap();
                let hf = orbit_subgroup_basis(a, &single).expect("dims fixed by construction");
                let rank = hf.rank();
                let basis_big: Vec<Vec<BigInt>> = (0..rank)
                    .map(|j| (0..n).map(|i| hf.h.at(i, j).clone()).collect())
                    .collect();
                let basis_small = basis_big
                    .iter()
                    .map(|c| c.iter().map(|x| x.to_i128()).collect::<Option<Vec<_>>>())
                    .collect::<Option<Vec<_>>>();
                let (span2, span3) = if n <= FILTER_MAX_N {
                    let mut s2 = SpanF2::empty();
                    let mut s3 = SpanF3::empty(n);
                    for c in &basis_big {
                        let mut bits = 0u64;
                        let mut tr = [0u8; FILTER_MAX_N];
                        for (i, x) in c.iter().enumerate() {
                            let m3 = x.mod_floor(&BigInt::from(3)).to_u8().unwrap();
                            tr[i] = m3;
                            if x.is_odd() {
                                bits |= 1 << i;
                            }
                        }
                        s2.insert(bits);
                        s3.insert(tr);
                    }
                    (Some(s2), Some(s3))
                } else {
                    (None, None)
                };
                cands.push(Cand {
                    vec,
                    basis_small,
                    basis_big,
                    rank,
                    span2,
                    span3,
                });
            }
            SearchCtx { n, cands }
        }

        /// Explores all sets of `size` candidates whose smallest index is `i`.
        pub fn subtree(&self, i: usize, size: usize) -> Option<Vec<usize>> {
            let c = &self.cands[i];
            if size == 1 {
                if c.rank == self.n {
                    let lat = lat_join(self.n, &Lat::empty(), c);
                    if lat.is_full(self.n) {
                        return Some(vec![i]);
                    }
                }
                return None;
            }
            let lat = lat_join(self.n, &Lat::empty(), c);
            let mut picked = vec![i];
            self.dfs(
                i + 1,
                size - 1,
                &lat,
                c.span2.as_ref(),
                c.span3.as_ref(),
                &mut picked,
            )
        }

        fn dfs(
            &self,
            start: usize,
            remaining: usize,
            lat: &Lat,
            s2: Option<&SpanF2>,
            s3: Option<&SpanF3>,
            picked: &mut Vec<usize>,
        ) -> Option<Vec<usize>> {
            for i in start..self.cands.len() {
                let c = &self.cands[i];
                if remaining == 1 {
                    if lat.rank() + c.rank < self.n {
                        continue;
                    }
                    if let (Some(s2), Some(c2)) = (s2, c.span2.as_ref()) {
                        if s2.joined(c2).rank() < self.n {
                            continue;
                        }
                    }
                    if let (Some(s3), Some(c3)) = (s3, c.span3.as_ref()) {
                        if s3.joined(c3).rank() < self.n {
                            continue;
                        }
                    }
                    let joined = lat_join(self.n, lat, c);
                    if joined.is_full(self.n) {
                        picked.push(i);
                        return Some(picked.clone());
                    }
                } else {
                    let joined = lat_join(self.n, lat, c);
                    if joined.same_lattice(lat) {
                        // adding c changes nothing; smaller sizes covered this
                        continue;
                    }
                    let j2 = match (s2, c.span2.as_ref()) {
                        (Some(a), Some(b)) => Some(a.joined(b)),
                        _ => None,
                    };
                    let j3 = match (s3, c.span3.as_ref()) {
                        (Some(a), Some(b)) => Some(a.joined(b)),
                        _ => None,
                    };
                    picked.push(i);
                    if let Some(hit) =
                        self.dfs(i + 1, remaining - 1, &joined, j2.as_ref(), j3.as_ref(), picked)
                    {
                        return Some(hit);
                    }
                    picked.pop();
                }
            }
            None
        }

        pub fn assemble(&self, a: &Mat, indices: Vec<usize>, size: usize) -> BruteFind {
            let set = OrbitSet::new(indices.iter().map(|&i| self.cands[i].vec.clone()).collect())
                .expect("distinct candidates");
            debug_assert!(is_generating(a, &set).unwrap());
            BruteFind { size, set }
        }
    }

    /// Nonzero vectors with entries in [-bound, bound], first nonzero entry
    /// positive, in ascending lexicographic order.
    pub fn canonical_vectors(n: usize, bound: i64) -> Vec<Vec<i64>> {
        let mut out = Vec::new();
        let mut cur = vec![-bound; n];
        loop {
            if let Some(&first_nz) = cur.iter().find(|&&x| x != 0) {
                if first_nz > 0 {
                    out.push(cur.clone());
                }
            }
            let mut i = n;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if cur[i] < bound {
                    cur[i] += 1;
                    for x in cur.iter_mut().skip(i + 1) {
                        *x = -bound;
                    }
                    break;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set_of(vs: &[&[i64]]) -> OrbitSet {
        OrbitSet::new(vs.iter().map(|v| ColVec::from_i64(v)).collect()).unwrap()
    }

    #[test]
    fn orbit_basis_identity_single_vector() {
        let a = Mat::identity(3);
        let s = set_of(&[&[1, 0, 0]]);
        let hf = orbit_subgroup_basis(&a, &s).unwrap();
        assert_eq!(hf.rank(), 1);
        assert!(!hf.is_full_lattice());
        assert!(!is_generating(&a, &s).unwrap());
    }

    #[test]
    fn three_cycle_is_generated_by_e1() {
        let a = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let s = set_of(&[&[1, 0, 0]]);
        assert!(is_generating(&a, &s).unwrap());
    }

    #[test]
    fn full_standard_basis_always_generates() {
        let a = Mat::from_i64_rows(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]);
        let s = set_of(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert!(is_generating(&a, &s).unwrap());
    }

    #[test]
    fn reflection_blocks_e3() {
        let a = Mat::from_i64_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let s = set_of(&[&[1, 0, 0], &[0, 1, 0]]);
        assert!(!is_generating(&a, &s).unwrap());
    }

    #[test]
    fn truncation_at_n_powers_is_enough() {
        let a = Mat::from_i64_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let s = set_of(&[&[1, 2, 0], &[0, 0, 3]]);
        let short = hermite_normal_form(&orbit_matrix(&a, &s, 3).unwrap());
        let long = hermite_normal_form(&orbit_matrix(&a, &s, 6).unwrap());
        assert_eq!(short.rank(), long.rank());
        for j in 0..short.rank() {
            assert_eq!(short.h.col(j), long.h.col(j));
        }
    }

    #[test]
    fn monotone_under_adding_vectors() {
        let a = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let s = set_of(&[&[1, 0, 0]]);
        let bigger = set_of(&[&[1, 0, 0], &[5, -3, 2]]);
        assert!(is_generating(&a, &s).unwrap());
        assert!(is_generating(&a, &bigger).unwrap());
    }

    #[test]
    fn brute_find_on_three_cycle() {
        let a = Mat::from_i64_rows(&[&[0, 1, 0], &[0, 0, 1], &[1, 0, 0]]);
        let hit = brute_min_upper(&a, 1, 2).expect("must find a singleton");
        assert_eq!(hit.size, 1);
        assert!(is_generating(&a, &hit.set).unwrap());
    }

    #[test]
    fn brute_finds_nothing_for_identity() {
        assert!(brute_min_upper(&Mat::identity(3), 3, 2).is_none());
    }

    #[test]
    fn brute_on_companion_matrix() {
        let a = Mat::from_i64_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let hit = brute_min_upper(&a, 1, 2).expect("companion orbit of e1 generates");
        assert_eq!(hit.size, 1);
    }

    #[test]
    fn seq_and_par_agree() {
        let a = Mat::from_i64_rows(&[&[0, 0, 1], &[1, 0, 1], &[0, 1, 0]]);
        let s = brute_min_upper_seq(&a, 2, 2);
        #[cfg(feature = "parallel")]
        {
            let p = brute_min_upper_par(&a, 2, 2);
            match (s, p) {
                (Some(x), Some(y)) => {
                    assert_eq!(x.size, y.size);
                    assert_eq!(x.set, y.set);
                }
                (None, None) => {}
                _ => panic!("seq/par disagree"),
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = s;
        }
    }

    #[test]
    fn canonical_enumeration_starts_at_last_unit_vector() {
        let vs = search::canonical_vectors(3, 1);
        assert_eq!(vs[0], vec![0, 0, 1]);
        assert_eq!(vs.len(), (27 - 1) / 2);
        for v in &vs {
            assert_eq!(v.iter().find(|&&x| x != 0).map(|&x| x > 0), Some(true));
        }
    }
}
