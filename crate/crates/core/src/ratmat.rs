//! Dense matrices over `Q` and exact rank of integer vector families.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigRational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::InvalidParams("ragged matrix rows".into()));
        }
        Ok(RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_ints(rows: usize, cols: usize, vals: &[i128]) -> Result<Self> {
        if vals.len() != rows * cols {
            return Err(Error::DimensionMismatch(vals.len(), rows * cols));
        }
        let data = vals
            .iter()
            .map(|&v| BigRational::from_integer(BigInt::from(v)))
            .collect();
        Ok(RatMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigRational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigRational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[BigRational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigRational> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = BigRational::zero();
                for j in 0..self.cols {
                    acc += self.get(r, j) * other.get(j, c);
                }
                out.set(r, c, acc);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigRational) -> RatMatrix {
        RatMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows) && self.is_square()
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && *self == self.transpose()
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|v| v.is_integer())
    }

    /// Row echelon form by Gaussian elimination; returns the reduced copy,
    /// the rank and the determinant sign/scale factor of the row operations.
    fn eliminate(&self) -> (RatMatrix, usize, BigRational) {
        let mut m = self.clone();
        let mut factor = BigRational::one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if p != rank {
                for c in 0..m.cols {
                    m.data.swap(p * m.cols + c, rank * m.cols + c);
                }
                factor = -factor;
            }
            let piv = m.get(rank, col).clone();
            factor *= &piv;
            for c in 0..m.cols {
                let v = m.get(rank, c) / &piv;
                m.set(rank, c, v);
            }
            for r in 0..m.rows {
                if r == rank || m.get(r, col).is_zero() {
                    continue;
                }
                let f = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = m.get(r, c) - &f * m.get(rank, c);
                    m.set(r, c, v);
                }
            }
            rank += 1;
        }
        (m, rank, factor)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn det(&self) -> Result<BigRational> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        let (_, rank, factor) = self.eliminate();
        Ok(if rank < self.rows { BigRational::zero() } else { factor })
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(self.rows, self.cols));
        }
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, BigRational::one());
        }
        let (red, _, _) = aug.eliminate();
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            if !red.get(r, r).is_one() {
                return Err(Error::NotInvertible);
            }
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Ok(inv)
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Incremental fraction-free echelon basis of integer vectors.
#[derive(Clone, Debug, Default)]
pub struct IntEchelon {
    rows: BTreeMap<usize, Vec<BigInt>>,
}

fn primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

impl IntEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` to the span; returns whether it increased the rank.
    pub fn insert(&mut self, v: &[i128]) -> bool {
        let mut v: Vec<BigInt> = v.iter().map(|&x| BigInt::from(x)).collect();
        loop {
            let Some(lead) = v.iter().position(|x| !x.is_zero()) else {
                return false;
            };
            match self.rows.get(&lead) {
                Some(r) => {
                    let a = &r[lead];
                    let b = v[lead].clone();
                    for (x, y) in v.iter_mut().zip(r) {
                        *x = &*x * a - y * &b;
                    }
                    primitive(&mut v);
                }
                None => {
                    primitive(&mut v);
                    if v[lead].is_negative() {
                        for x in v.iter_mut() {
                            *x = -&*x;
                        }
                    }
                    self.rows.insert(lead, v);
                    return true;
                }
            }
        }
    }
}

/// Exact rank over `Q` of integer vectors.
pub fn int_rank<'a, I>(vectors: I) -> usize
where
    I: IntoIterator<Item = &'a [i128]>,
{
    let mut e = IntEchelon::new();
    for v in vectors {
        e.insert(v);
    }
    e.rank()
}

/// Rank of the reductions mod the prime `p`; a lower bound for the rank over `Q`.
pub fn int_rank_mod_p<'a, I>(vectors: I, p: u64) -> usize
where
    I: IntoIterator<Item = &'a [i128]>,
{
    let pm = p as i128;
    let red = |x: i128| x.rem_euclid(pm) as u64;
    let inv = |a: u64| {
        let (mut base, mut e, mut acc) = (a as u128, p - 2, 1u128);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p as u128;
            }
            base = base * base % p as u128;
            e >>= 1;
        }
        acc as u64
    };
    let mut rows: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
    for v in vectors {
        let mut v: Vec<u64> = v.iter().map(|&x| red(x)).collect();
        while let Some(lead) = v.iter().position(|&x| x != 0) {
            match rows.get(&lead) {
                Some(r) => {
                    let f = v[lead];
                    for (x, &y) in v.iter_mut().zip(r) {
                        *x = ((*x as u128 + (p as u128 - y as u128 * f as u128 % p as u128))
                            % p as u128) as u64;
                    }
                }
                None => {
                    let s = inv(v[lead]);
                    for x in v.iter_mut() {
                        *x = (*x as u128 * s as u128 % p as u128) as u64;
                    }
                    rows.insert(lead, v);
                    break;
                }
            }
        }
    }
    rows.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn inverse_and_det_small() {
        let m = RatMatrix::from_ints(2, 2, &[2, 1, 7, 4]).unwrap();
        assert_eq!(m.det().unwrap(), r(1, 1));
        let inv = m.inverse().unwrap();
        assert_eq!(inv, RatMatrix::from_ints(2, 2, &[4, -1, -7, 2]).unwrap());
        assert!(m.mul(&inv).unwrap().is_identity());
    }

    #[test]
    fn singular_matrix() {
        let m = RatMatrix::from_ints(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]).unwrap();
        assert_eq!(m.rank(), 2);
        assert_eq!(m.det().unwrap(), r(0, 1));
        assert!(matches!(m.inverse(), Err(Error::NotInvertible)));
    }

    #[test]
    fn det_with_row_swap() {
        let m = RatMatrix::from_ints(3, 3, &[0, 1, 0, 1, 0, 0, 0, 0, 5]).unwrap();
        assert_eq!(m.det().unwrap(), r(-5, 1));
    }

    #[test]
    fn int_rank_examples() {
        let vs: Vec<Vec<i128>> = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 1], vec![1, 3, 4]];
        assert_eq!(int_rank(vs.iter().map(Vec::as_slice)), 2);
        assert_eq!(int_rank_mod_p(vs.iter().map(Vec::as_slice), 1_000_000_007), 2);
        // rank 2 over Q, rank 1 mod 2
        let vs: Vec<Vec<i128>> = vec![vec![1, 1], vec![1, -1]];
        assert_eq!(int_rank(vs.iter().map(Vec::as_slice)), 2);
        assert_eq!(int_rank_mod_p(vs.iter().map(Vec::as_slice), 2), 1);
    }

    proptest! {
        #[test]
        fn inverse_round_trip(vals in proptest::collection::vec(-9i128..10, 16)) {
            let m = RatMatrix::from_ints(4, 4, &vals).unwrap();
            let det = m.det().unwrap();
            match m.inverse() {
                Ok(inv) => {
                    prop_assert!(!det.is_zero());
                    prop_assert!(m.mul(&inv).unwrap().is_identity());
                    prop_assert!(inv.mul(&m).unwrap().is_identity());
                    prop_assert_eq!(inv.det().unwrap() * det, BigRational::one());
                }
                Err(_) => prop_assert!(det.is_zero()),
            }
        }

        #[test]
        fn integer_rank_matches_rational(vals in proptest::collection::vec(-3i128..4, 20)) {
            let m = RatMatrix::from_ints(4, 5, &vals).unwrap();
            let rows: Vec<&[i128]> = vals.chunks(5).collect();
            prop_assert_eq!(int_rank(rows.iter().copied()), m.rank());
            prop_assert!(int_rank_mod_p(rows.iter().copied(), 101) <= m.rank());
        }
    }
}
