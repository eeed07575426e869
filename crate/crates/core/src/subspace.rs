//! Subspaces of `F_q^n` in canonical reduced row-echelon form.
//!
//! A [`Subspace`] is stored as its unique RREF basis, so equality and hashing
//! of subspaces are plain byte comparisons. [`ProjectiveSpace`] carries the
//! field and ambient dimension and implements the lattice operations.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{Elem, Field};
use crate::qarith::QParams;

/// A subspace of `F_q^n` given by its RREF basis (row spans).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    dim: usize,
    rows: Vec<Elem>,
}

impl Subspace {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.rows[r * self.n..(r + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Elem]> {
        self.rows.chunks(self.n.max(1)).take(self.dim)
    }

    pub fn is_zero(&self) -> bool {
        self.dim == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim == self.n
    }

    /// Pivot column of each basis row.
    pub fn pivots(&self) -> Vec<usize> {
        self.rows()
            .map(|r| r.iter().position(|&x| x != 0).expect("RREF rows are nonzero"))
            .collect()
    }

    /// Text form: entries joined by `,`, rows joined by `;`.
    pub fn to_text(&self) -> String {
        self.rows()
            .map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            .collect::<Vec<_>>()
            .join(";")
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(n={}, [{}])", self.n, self.to_text())
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Index of a 1-dimensional subspace in the lexicographic order of normalized
/// representatives (first nonzero coordinate equal to 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PointId(pub u32);

impl PointId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Square matrix over `F_q`, acting on row vectors from the right.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FqMatrix {
    n: usize,
    data: Vec<Elem>,
}

impl FqMatrix {
    pub fn from_rows(n: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch(data.len(), n * n));
        }
        Ok(FqMatrix { n, data })
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        FqMatrix { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.n + c]
    }

    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.n..(r + 1) * self.n]
    }
}

/// Row-reduces the `nrows x n` matrix in place to RREF, returning the rank.
/// Nonzero rows end up first.
fn rref_in_place(field: &Field, m: &mut [Elem], nrows: usize, n: usize) -> usize {
    let mut rank = 0;
    for col in 0..n {
        if rank == nrows {
            break;
        }
        let Some(pivot) = (rank..nrows).find(|&r| m[r * n + col] != 0) else {
            continue;
        };
        if pivot != rank {
            for c in 0..n {
                m.swap(pivot * n + c, rank * n + c);
            }
        }
        let inv = field.inv(m[rank * n + col]);
        if inv != 1 {
            for c in col..n {
                m[rank * n + c] = field.mul(m[rank * n + c], inv);
            }
        }
        for r in 0..nrows {
            if r == rank {
                continue;
            }
            let f = m[r * n + col];
            if f == 0 {
                continue;
            }
            for c in col..n {
                let t = field.mul(f, m[rank * n + c]);
                m[r * n + c] = field.sub(m[r * n + c], t);
            }
        }
        rank += 1;
    }
    rank
}

/// The projective geometry of `F_q^n`: field, ambient dimension and the
/// ordered list of points.
#[derive(Clone, Debug)]
pub struct ProjectiveSpace {
    field: Field,
    n: usize,
    /// `q^j` for `0 <= j <= n`.
    powers: Vec<usize>,
    points: Vec<Elem>,
}

impl ProjectiveSpace {
    pub fn new(q: u32, n: usize) -> Result<Self> {
        let field = Field::new(q)?;
        let qs = field.q();
        let powers: Vec<usize> = (0..=n).map(|j| qs.pow(j as u32)).collect();
        let count = (powers[n] - 1) / (qs - 1);
        if count > u32::MAX as usize {
            return Err(Error::Overflow("point count"));
        }
        let mut points = Vec::with_capacity(count * n);
        for lead in (0..n).rev() {
            let tail = n - 1 - lead;
            for t in 0..powers[tail] {
                let start = points.len();
                points.resize(start + n, 0);
                points[start + lead] = 1;
                let mut v = t;
                for j in (lead + 1..n).rev() {
                    points[start + j] = (v % qs) as Elem;
                    v /= qs;
                }
            }
        }
        Ok(ProjectiveSpace { field, n, powers, points })
    }

    pub fn for_params(p: &QParams) -> Result<Self> {
        Self::new(p.q, p.n)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> usize {
        self.field.q()
    }

    /// `[n]`, the number of points.
    pub fn point_count(&self) -> usize {
        self.points.len() / self.n
    }

    fn check_n(&self, got: usize) -> Result<()> {
        if got == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(got, self.n))
        }
    }

    pub(crate) fn canonical_from_flat(&self, mut m: Vec<Elem>, nrows: usize) -> Subspace {
        let rank = rref_in_place(&self.field, &mut m, nrows, self.n);
        m.truncate(rank * self.n);
        Subspace { n: self.n, dim: rank, rows: m }
    }

    /// Canonical form of the span of `vectors`.
    pub fn rref_canonical<V: AsRef<[Elem]>>(&self, vectors: &[V]) -> Result<Subspace> {
        let mut m = Vec::with_capacity(vectors.len() * self.n);
        for v in vectors {
            let v = v.as_ref();
            self.check_n(v.len())?;
            if let Some(&bad) = v.iter().find(|&&x| x as usize >= self.q()) {
                return Err(Error::OutOfRange {
                    what: "field element",
                    value: bad as i64,
                    allowed: format!("0..{}", self.q()),
                });
            }
            m.extend_from_slice(v);
        }
        Ok(self.canonical_from_flat(m, vectors.len()))
    }

    pub fn zero(&self) -> Subspace {
        Subspace { n: self.n, dim: 0, rows: Vec::new() }
    }

    pub fn full(&self) -> Subspace {
        let mut rows = vec![0; self.n * self.n];
        for i in 0..self.n {
            rows[i * self.n + i] = 1;
        }
        Subspace { n: self.n, dim: self.n, rows }
    }

    /// Span of standard basis vectors `e_i`, `i in idx`.
    pub fn coordinate_subspace(&self, idx: &[usize]) -> Result<Subspace> {
        let vecs: Vec<Vec<Elem>> = idx
            .iter()
            .map(|&i| {
                let mut v = vec![0; self.n];
                v[i] = 1;
                v
            })
            .collect();
        self.rref_canonical(&vecs)
    }

    pub fn join(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_n(u.n)?;
        self.check_n(v.n)?;
        let mut m = Vec::with_capacity((u.dim + v.dim) * self.n);
        m.extend_from_slice(&u.rows);
        m.extend_from_slice(&v.rows);
        Ok(self.canonical_from_flat(m, u.dim + v.dim))
    }

    /// `u^perp` with respect to the standard dot product.
    pub fn annihilator(&self, u: &Subspace) -> Subspace {
        let n = self.n;
        let pivots = u.pivots();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
        let mut m = vec![0; free.len() * n];
        for (j, &f) in free.iter().enumerate() {
            m[j * n + f] = 1;
            for (r, &p) in pivots.iter().enumerate() {
                m[j * n + p] = self.field.neg(u.row(r)[f]);
            }
        }
        self.canonical_from_flat(m, free.len())
    }

    pub fn meet(&self, u: &Subspace, v: &Subspace) -> Result<Subspace> {
        self.check_n(u.n)?;
        self.check_n(v.n)?;
        let s = self.join(&self.annihilator(u), &self.annihilator(v))?;
        Ok(self.annihilator(&s))
    }

    /// Whether `vec` lies in `u`.
    pub fn contains_vector(&self, u: &Subspace, vec: &[Elem]) -> bool {
        // Reduce vec against the RREF rows; it lies in u iff it reduces to zero.
        let mut v = vec.to_vec();
        for (r, p) in u.pivots().into_iter().enumerate() {
            let f = v[p];
            if f != 0 {
                for (c, &x) in u.row(r).iter().enumerate() {
                    v[c] = self.field.sub(v[c], self.field.mul(f, x));
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    /// Whether `inner ⊆ outer`.
    pub fn contains(&self, outer: &Subspace, inner: &Subspace) -> bool {
        inner.dim <= outer.dim && inner.rows().all(|r| self.contains_vector(outer, r))
    }

    /// All `ell`-dimensional subspaces, each once, in deterministic order.
    pub fn enumerate_subspaces(&self, ell: usize) -> Result<SubspaceIter<'_>> {
        if ell > self.n {
            return Err(Error::OutOfRange {
                what: "subspace dimension",
                value: ell as i64,
                allowed: format!("0..={}", self.n),
            });
        }
        Ok(SubspaceIter::new(self, ell))
    }

    /// Normalized representative of a point.
    pub fn point_vector(&self, id: PointId) -> &[Elem] {
        &self.points[id.index() * self.n..(id.index() + 1) * self.n]
    }

    pub fn point(&self, id: PointId) -> Subspace {
        Subspace { n: self.n, dim: 1, rows: self.point_vector(id).to_vec() }
    }

    pub fn points(&self) -> impl Iterator<Item = PointId> {
        (0..self.point_count() as u32).map(PointId)
    }

    /// Point spanned by a nonzero vector.
    pub fn point_of_vector(&self, v: &[Elem]) -> Option<PointId> {
        let lead = v.iter().position(|&x| x != 0)?;
        let inv = self.field.inv(v[lead]);
        let q = self.q();
        // Points with a later leading position come first: there are [n-1-lead] of them.
        let offset = (self.powers[self.n - 1 - lead] - 1) / (q - 1);
        let mut t = 0usize;
        for &x in &v[lead + 1..] {
            t = t * q + self.field.mul(x, inv) as usize;
        }
        Some(PointId((offset + t) as u32))
    }

    pub fn point_of_subspace(&self, s: &Subspace) -> Option<PointId> {
        if s.dim != 1 {
            return None;
        }
        self.point_of_vector(s.row(0))
    }

    /// The points contained in `u`, sorted; `|omega(u)| = [dim u]`.
    pub fn omega(&self, u: &Subspace) -> Vec<PointId> {
        let d = u.dim;
        let q = self.q();
        let mut out = Vec::with_capacity((self.powers[d].saturating_sub(1)) / (q - 1));
        let mut v = vec![0; self.n];
        // Coefficient vectors with leading coefficient 1 at position `lead`.
        for lead in 0..d {
            let tail = d - 1 - lead;
            for t in 0..self.powers[tail] {
                v.copy_from_slice(u.row(lead));
                let mut rest = t;
                for r in (lead + 1..d).rev() {
                    let c = (rest % q) as Elem;
                    rest /= q;
                    if c != 0 {
                        for (j, &x) in u.row(r).iter().enumerate() {
                            v[j] = self.field.add(v[j], self.field.mul(c, x));
                        }
                    }
                }
                out.push(self.point_of_vector(&v).expect("nonzero combination"));
            }
        }
        out.sort_unstable();
        out
    }

    /// Rank of an `n x n` matrix.
    pub fn matrix_rank(&self, m: &FqMatrix) -> usize {
        let mut d = m.data.clone();
        rref_in_place(&self.field, &mut d, m.n, m.n)
    }

    pub fn is_invertible(&self, m: &FqMatrix) -> bool {
        m.n == self.n && self.matrix_rank(m) == self.n
    }

    /// Deterministic pseudo-random element of `GL(n, q)` (rejection sampling).
    pub fn gl_random(&self, seed: u64) -> FqMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.gl_random_with(&mut rng)
    }

    pub fn gl_random_with<R: Rng>(&self, rng: &mut R) -> FqMatrix {
        let q = self.q();
        loop {
            let data: Vec<Elem> = (0..self.n * self.n)
                .map(|_| rng.gen_range(0..q) as Elem)
                .collect();
            let m = FqMatrix { n: self.n, data };
            if self.is_invertible(&m) {
                return m;
            }
        }
    }

    /// `v * sigma` for a row vector `v`.
    pub fn apply_to_vector(&self, sigma: &FqMatrix, v: &[Elem]) -> Vec<Elem> {
        let n = self.n;
        let mut out = vec![0; n];
        for (i, &vi) in v.iter().enumerate() {
            if vi == 0 {
                continue;
            }
            for (o, &s) in out.iter_mut().zip(&sigma.data[i * n..(i + 1) * n]) {
                *o = self.field.add(*o, self.field.mul(vi, s));
            }
        }
        out
    }

    /// Image of `u` under `sigma`, canonicalized.
    pub fn gl_apply(&self, sigma: &FqMatrix, u: &Subspace) -> Result<Subspace> {
        self.check_n(u.n)?;
        if !self.is_invertible(sigma) {
            return Err(Error::NotInvertible);
        }
        Ok(self.gl_apply_unchecked(sigma, u))
    }

    pub(crate) fn gl_apply_unchecked(&self, sigma: &FqMatrix, u: &Subspace) -> Subspace {
        let mut m = Vec::with_capacity(u.dim * self.n);
        for r in u.rows() {
            m.extend(self.apply_to_vector(sigma, r));
        }
        self.canonical_from_flat(m, u.dim)
    }

    /// Permutation of point indices induced by `sigma`.
    pub fn point_permutation(&self, sigma: &FqMatrix) -> Result<Vec<PointId>> {
        if !self.is_invertible(sigma) {
            return Err(Error::NotInvertible);
        }
        Ok(self
            .points()
            .map(|p| {
                let img = self.apply_to_vector(sigma, self.point_vector(p));
                self.point_of_vector(&img).expect("invertible image is nonzero")
            })
            .collect())
    }

    /// Inverse of an invertible matrix.
    pub fn matrix_inverse(&self, m: &FqMatrix) -> Result<FqMatrix> {
        let n = self.n;
        self.check_n(m.n)?;
        let w = 2 * n;
        let mut aug = vec![0; n * w];
        for r in 0..n {
            aug[r * w..r * w + n].copy_from_slice(m.row(r));
            aug[r * w + n + r] = 1;
        }
        let rank = rref_in_place(&self.field, &mut aug, n, w);
        if rank < n || (0..n).any(|r| aug[r * w + r] != 1) {
            return Err(Error::NotInvertible);
        }
        let data = (0..n).flat_map(|r| aug[r * w + n..(r + 1) * w].to_vec()).collect();
        Ok(FqMatrix { n, data })
    }

    pub fn matrix_mul(&self, a: &FqMatrix, b: &FqMatrix) -> FqMatrix {
        let data = (0..a.n).flat_map(|r| self.apply_to_vector(b, a.row(r))).collect();
        FqMatrix { n: a.n, data }
    }

    /// A uniformly random subspace of the given dimension.
    pub fn random_subspace<R: Rng>(&self, dim: usize, rng: &mut R) -> Subspace {
        let q = self.q();
        loop {
            let m: Vec<Elem> = (0..dim * self.n).map(|_| rng.gen_range(0..q) as Elem).collect();
            let s = self.canonical_from_flat(m, dim);
            if s.dim == dim {
                return s;
            }
        }
    }

    /// Parses the `,`/`;` text form. The empty string is the zero subspace.
    pub fn parse_subspace(&self, text: &str) -> Result<Subspace> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(self.zero());
        }
        let mut rows = Vec::new();
        for row in text.split(';') {
            let v = row
                .split(',')
                .map(|t| {
                    t.trim().parse::<Elem>().map_err(|e| Error::Parse {
                        line: 1,
                        msg: format!("bad entry {t:?}: {e}"),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            rows.push(v);
        }
        self.rref_canonical(&rows)
    }
}

/// Iterator over all `ell`-dimensional subspaces in RREF, ordered by pivot
/// set (lexicographic) and then by the free entries counted in base `q`.
pub struct SubspaceIter<'a> {
    space: &'a ProjectiveSpace,
    ell: usize,
    pivots: Vec<usize>,
    free: Vec<usize>,
    counter: Vec<Elem>,
    done: bool,
}

impl<'a> SubspaceIter<'a> {
    fn new(space: &'a ProjectiveSpace, ell: usize) -> Self {
        let mut it = SubspaceIter {
            space,
            ell,
            pivots: (0..ell).collect(),
            free: Vec::new(),
            counter: Vec::new(),
            done: false,
        };
        it.reset_free();
        it
    }

    fn reset_free(&mut self) {
        let n = self.space.n;
        self.free.clear();
        for (r, &p) in self.pivots.iter().enumerate() {
            for c in p + 1..n {
                if !self.pivots.contains(&c) {
                    self.free.push(r * n + c);
                }
            }
        }
        self.counter = vec![0; self.free.len()];
    }

    fn advance_pivots(&mut self) -> bool {
        let n = self.space.n;
        let l = self.ell;
        let Some(i) = (0..l).rev().find(|&i| self.pivots[i] < n - l + i) else {
            return false;
        };
        self.pivots[i] += 1;
        for j in i + 1..l {
            self.pivots[j] = self.pivots[j - 1] + 1;
        }
        true
    }
}

impl Iterator for SubspaceIter<'_> {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.done {
            return None;
        }
        let n = self.space.n;
        let mut rows = vec![0; self.ell * n];
        for (r, &p) in self.pivots.iter().enumerate() {
            rows[r * n + p] = 1;
        }
        for (&pos, &val) in self.free.iter().zip(&self.counter) {
            rows[pos] = val;
        }
        let out = Subspace { n, dim: self.ell, rows };

        let q = self.space.q() as Elem;
        let mut carried = true;
        for d in self.counter.iter_mut().rev() {
            *d += 1;
            if *d < q {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            if self.ell == 0 || !self.advance_pivots() {
                self.done = true;
            } else {
                self.reset_free();
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qarith::gauss_binom;
    use rand::seq::SliceRandom;

    fn f2(n: usize) -> ProjectiveSpace {
        ProjectiveSpace::new(2, n).unwrap()
    }

    #[test]
    fn rref_example() {
        let s = f2(3);
        let u = s.rref_canonical(&[[1, 1, 0], [0, 1, 1], [1, 0, 1]]).unwrap();
        assert_eq!(u.dim(), 2);
        assert_eq!(u.to_text(), "1,0,1;0,1,1");
    }

    #[test]
    fn rref_trivial_cases() {
        let s = f2(5);
        let empty: [[Elem; 5]; 0] = [];
        assert_eq!(s.rref_canonical(&empty).unwrap(), s.zero());
        let std: Vec<Vec<Elem>> = (0..5)
            .map(|i| (0..5).map(|j| (i == j) as Elem).collect())
            .collect();
        assert_eq!(s.rref_canonical(&std).unwrap(), s.full());
        assert!(s.rref_canonical(&[[1, 0]]).is_err());
        assert!(s.rref_canonical(&[[1, 0, 2, 0, 0]]).is_err());
    }

    #[test]
    fn points_are_ordered_and_indexed() {
        for q in [2u32, 3, 4] {
            let s = ProjectiveSpace::new(q, 4).unwrap();
            let mut prev: Option<Vec<Elem>> = None;
            for p in s.points() {
                let v = s.point_vector(p).to_vec();
                assert_eq!(s.point_of_vector(&v), Some(p));
                if let Some(pv) = prev {
                    assert!(pv < v, "lexicographic order");
                }
                prev = Some(v);
            }
            assert_eq!(s.point_count() as i128, gauss_binom(4, 1, q).unwrap());
        }
    }

    #[test]
    fn point_round_trip_through_subspace() {
        let s = ProjectiveSpace::new(3, 4).unwrap();
        for p in s.points() {
            assert_eq!(s.point_of_subspace(&s.point(p)), Some(p));
        }
        // A non-normalized representative maps to the same point.
        let p = s.point_of_vector(&[0, 2, 1, 0]).unwrap();
        assert_eq!(s.point_vector(p), &[0, 1, 2, 0]);
    }

    #[test]
    fn enumeration_counts_match_gauss_binom() {
        for (q, n) in [(2u32, 6usize), (3, 4), (4, 3), (2, 7)] {
            let s = ProjectiveSpace::new(q, n).unwrap();
            for ell in 0..=n {
                let all: Vec<_> = s.enumerate_subspaces(ell).unwrap().collect();
                assert_eq!(
                    all.len() as i128,
                    gauss_binom(n as i64, ell as i64, q).unwrap(),
                    "q={q} n={n} ell={ell}"
                );
                let mut sorted = all.clone();
                sorted.sort();
                sorted.dedup();
                assert_eq!(sorted.len(), all.len(), "distinct");
                for u in all.iter().take(50) {
                    assert_eq!(&s.rref_canonical(&u.rows().collect::<Vec<_>>()).unwrap(), u);
                    assert_eq!(u.dim(), ell);
                }
            }
        }
        assert!(f2(3).enumerate_subspaces(4).is_err());
    }

    #[test]
    fn enumerate_zero_subspace() {
        let s = f2(4);
        let v: Vec<_> = s.enumerate_subspaces(0).unwrap().collect();
        assert_eq!(v, vec![s.zero()]);
    }

    #[test]
    fn meet_join_identities() {
        let s = ProjectiveSpace::new(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let u = s.random_subspace(rng.gen_range(0..=5), &mut rng);
            let v = s.random_subspace(rng.gen_range(0..=5), &mut rng);
            assert_eq!(s.meet(&u, &s.full()).unwrap(), u);
            assert_eq!(s.meet(&u, &u).unwrap(), u);
            assert_eq!(s.join(&u, &s.zero()).unwrap(), u);
            assert_eq!(s.join(&u, &u).unwrap(), u);
            let m = s.meet(&u, &v).unwrap();
            let j = s.join(&u, &v).unwrap();
            assert_eq!(m.dim() + j.dim(), u.dim() + v.dim());
            assert!(s.contains(&u, &m) && s.contains(&v, &m));
            assert!(s.contains(&j, &u) && s.contains(&j, &v));
            assert_eq!(s.meet(&u, &j).unwrap(), u);
            assert_eq!(s.join(&u, &m).unwrap(), u);
        }
    }

    #[test]
    fn meet_and_join_reject_mismatched_ambient() {
        let a = f2(4).full();
        let s = f2(5);
        assert!(s.meet(&a, &s.full()).is_err());
        assert!(s.join(&s.full(), &a).is_err());
    }

    #[test]
    fn omega_sizes_and_intersection() {
        let s = f2(7);
        assert_eq!(s.omega(&s.full()).len(), 127);
        assert_eq!(s.omega(&s.zero()).len(), 0);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100 {
            let u = s.random_subspace(rng.gen_range(0..=7), &mut rng);
            let v = s.random_subspace(rng.gen_range(0..=7), &mut rng);
            let ou = s.omega(&u);
            assert_eq!(ou.len(), (1usize << u.dim()) - 1);
            for p in &ou {
                assert!(s.contains(&u, &s.point(*p)));
            }
            let ov = s.omega(&v);
            let both: Vec<_> = ou.iter().filter(|p| ov.binary_search(p).is_ok()).copied().collect();
            assert_eq!(both, s.omega(&s.meet(&u, &v).unwrap()));
        }
    }

    #[test]
    fn canonical_form_independent_of_spanning_set() {
        let s = ProjectiveSpace::new(3, 6).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = s.random_subspace(3, &mut rng);
        for _ in 0..200 {
            // random spanning set: random combinations plus the basis, shuffled
            let mut vecs: Vec<Vec<Elem>> = (0..4)
                .map(|_| {
                    let mut v = vec![0; 6];
                    for r in u.rows() {
                        let c = rng.gen_range(0..3) as Elem;
                        for j in 0..6 {
                            v[j] = s.field().add(v[j], s.field().mul(c, r[j]));
                        }
                    }
                    v
                })
                .collect();
            vecs.extend(u.rows().map(|r| {
                let c = rng.gen_range(1..3) as Elem;
                r.iter().map(|&x| s.field().mul(c, x)).collect::<Vec<_>>()
            }));
            vecs.shuffle(&mut rng);
            assert_eq!(s.rref_canonical(&vecs).unwrap(), u);
        }
    }

    #[test]
    fn gl_action() {
        let s = ProjectiveSpace::new(2, 7).unwrap();
        let id = FqMatrix::identity(7);
        assert!(s.is_invertible(&id));
        let sigma = s.gl_random(42);
        assert_eq!(sigma, s.gl_random(42));
        assert_eq!(s.matrix_rank(&sigma), 7);
        let inv = s.matrix_inverse(&sigma).unwrap();
        assert_eq!(s.matrix_mul(&sigma, &inv), id);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let u = s.random_subspace(rng.gen_range(0..=7), &mut rng);
            let v = s.random_subspace(rng.gen_range(0..=7), &mut rng);
            assert_eq!(s.gl_apply(&id, &u).unwrap(), u);
            let su = s.gl_apply(&sigma, &u).unwrap();
            let sv = s.gl_apply(&sigma, &v).unwrap();
            assert_eq!(su.dim(), u.dim());
            assert_eq!(
                s.meet(&su, &sv).unwrap().dim(),
                s.meet(&u, &v).unwrap().dim()
            );
            assert_eq!(s.gl_apply(&inv, &su).unwrap(), u);
        }
        let singular = FqMatrix::from_rows(7, vec![0; 49]).unwrap();
        assert!(matches!(
            s.gl_apply(&singular, &s.full()),
            Err(Error::NotInvertible)
        ));
    }

    #[test]
    fn text_round_trip() {
        let s = ProjectiveSpace::new(3, 5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in 0..=5 {
            let u = s.random_subspace(d, &mut rng);
            assert_eq!(s.parse_subspace(&u.to_text()).unwrap(), u);
        }
        assert!(s.parse_subspace("1,x,0,0,0").is_err());
    }

    #[test]
    fn extension_field_geometry() {
        for q in [4u32, 8, 9] {
            let s = ProjectiveSpace::new(q, 3).unwrap();
            let lines: Vec<_> = s.enumerate_subspaces(2).unwrap().collect();
            assert_eq!(lines.len() as i128, gauss_binom(3, 2, q).unwrap());
            // any two distinct lines of a projective plane meet in a point
            for v in lines.iter().skip(1).take(20) {
                assert_eq!(s.meet(&lines[0], v).unwrap().dim(), 1);
            }
        }
    }
}
