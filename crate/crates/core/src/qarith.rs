//! q-integers, Gaussian binomials and the closed-form parameters of `J_q(n,k)`.
//!
//! All values are exact. Integer quantities use checked `i128` arithmetic and
//! report [`Error::Overflow`] instead of wrapping.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Returns `Some(p)` when `q = p^e` for a prime `p` and `e >= 1`.
pub fn prime_power_base(q: u32) -> Option<u32> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q.is_multiple_of(p) {
            break;
        }
        p += 1;
    }
    if p * p > q {
        return Some(q);
    }
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
    }
    (r == 1).then_some(p)
}

fn checked_pow(q: u32, e: u32) -> Result<i128> {
    (q as i128).checked_pow(e).ok_or(Error::Overflow("q-power"))
}

/// `[m] = (q^m - 1)/(q - 1)`, i.e. `1 + q + ... + q^(m-1)`.
pub fn qint(m: i64, q: u32) -> Result<i128> {
    if m < 0 {
        return Err(Error::OutOfRange {
            what: "q-integer argument",
            value: m,
            allowed: ">= 0".into(),
        });
    }
    if prime_power_base(q).is_none() {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    let top = checked_pow(q, m as u32)?;
    Ok((top - 1) / (q as i128 - 1))
}

/// Number of `r`-dimensional subspaces of an `m`-dimensional space over `F_q`.
pub fn gauss_binom(m: i64, r: i64, q: u32) -> Result<i128> {
    if r < 0 || r > m {
        return Err(Error::OutOfRange {
            what: "Gaussian binomial lower index",
            value: r,
            allowed: format!("0..={m}"),
        });
    }
    if prime_power_base(q).is_none() {
        return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
    }
    // G(m, j+1) = G(m, j) (q^{m-j} - 1) / (q^{j+1} - 1); every prefix is an integer.
    let r = r.min(m - r);
    let mut acc: i128 = 1;
    for j in 0..r {
        let num = checked_pow(q, (m - j) as u32)? - 1;
        let den = checked_pow(q, (j + 1) as u32)? - 1;
        acc = acc.checked_mul(num).ok_or(Error::Overflow("gaussian binomial"))? / den;
    }
    Ok(acc)
}

/// `q^e` as an exact rational; `e` may be negative.
pub fn qpow_rat(q: u32, e: i64) -> BigRational {
    let base = BigInt::from(q).pow(e.unsigned_abs() as u32);
    if e >= 0 {
        BigRational::from_integer(base)
    } else {
        BigRational::new(BigInt::one(), base)
    }
}

/// `(kappa, b, a, c)`.
type IntersectionArrays = (i128, Vec<i128>, Vec<i128>, Vec<i128>);

/// Validated `(q, n, k)` with `n > 2k >= 6`, plus the derived intersection
/// array and eigenvalues of `J_q(n,k)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QParams {
    pub q: u32,
    pub n: usize,
    pub k: usize,
    #[serde(skip)]
    qints: Vec<i128>,
    pub kappa: i128,
    pub b: Vec<i128>,
    pub a: Vec<i128>,
    pub c: Vec<i128>,
    pub theta: Vec<i128>,
}

impl QParams {
    pub fn new(q: u32, n: usize, k: usize) -> Result<Self> {
        if prime_power_base(q).is_none() {
            return Err(Error::InvalidParams(format!("q = {q} is not a prime power")));
        }
        if 2 * k < 6 {
            return Err(Error::InvalidParams(format!("need 2k >= 6, got k = {k}")));
        }
        if n <= 2 * k {
            return Err(Error::InvalidParams(format!(
                "need n > 2k, got n = {n}, k = {k}"
            )));
        }
        let qints = (0..=n as i64)
            .map(|m| qint(m, q))
            .collect::<Result<Vec<_>>>()?;
        let mut p = QParams {
            q,
            n,
            k,
            qints,
            kappa: 0,
            b: Vec::new(),
            a: Vec::new(),
            c: Vec::new(),
            theta: Vec::new(),
        };
        let (kappa, b, a, c) = p.compute_intersection_numbers()?;
        p.kappa = kappa;
        p.b = b;
        p.a = a;
        p.c = c;
        p.theta = (0..=k)
            .map(|i| p.compute_eigenvalue(i))
            .collect::<Result<Vec<_>>>()?;
        Ok(p)
    }

    /// `[m]` for `0 <= m <= n`, from the precomputed table.
    pub fn qint(&self, m: usize) -> i128 {
        self.qints[m]
    }

    pub fn qpow(&self, e: u32) -> Result<i128> {
        checked_pow(self.q, e)
    }

    fn mul(a: i128, b: i128) -> Result<i128> {
        a.checked_mul(b).ok_or(Error::Overflow("intersection numbers"))
    }

    fn compute_intersection_numbers(&self) -> Result<IntersectionArrays> {
        let (n, k) = (self.n, self.k);
        let kappa = Self::mul(
            Self::mul(self.q as i128, self.qint(k))?,
            self.qint(n - k),
        )?;
        let mut b = Vec::with_capacity(k + 1);
        let mut a = Vec::with_capacity(k + 1);
        let mut c = Vec::with_capacity(k + 1);
        for i in 0..=k {
            let bi = Self::mul(
                Self::mul(self.qpow((2 * i + 1) as u32)?, self.qint(k - i))?,
                self.qint(n - k - i),
            )?;
            let ci = Self::mul(self.qint(i), self.qint(i))?;
            b.push(bi);
            c.push(ci);
            a.push(kappa - bi - ci);
        }
        Ok((kappa, b, a, c))
    }

    fn compute_eigenvalue(&self, i: usize) -> Result<i128> {
        let (n, k) = (self.n, self.k);
        let t = Self::mul(
            Self::mul(self.qpow((i + 1) as u32)?, self.qint(k - i))?,
            self.qint(n - k - i),
        )?;
        Ok(t - self.qint(i))
    }

    /// `(kappa, b, a, c)`; `b[k] = 0`, `c[0] = 0`.
    pub fn intersection_numbers(&self) -> (i128, &[i128], &[i128], &[i128]) {
        (self.kappa, &self.b, &self.a, &self.c)
    }

    pub fn eigenvalue(&self, i: usize) -> Result<i128> {
        self.theta.get(i).copied().ok_or(Error::OutOfRange {
            what: "eigenvalue index",
            value: i as i64,
            allowed: format!("0..={}", self.k),
        })
    }

    pub fn theta1(&self) -> i128 {
        self.theta[1]
    }

    /// Sizes `k_0..k_k` of the distance spheres around a vertex, from
    /// `k_{i+1} = k_i b_i / c_{i+1}`.
    pub fn sphere_sizes(&self) -> Result<Vec<i128>> {
        let mut out = vec![1i128];
        for i in 0..self.k {
            // k_i * b_i can exceed i128 even when k_{i+1} does not
            let prod = BigInt::from(out[i]) * BigInt::from(self.b[i]);
            let c = BigInt::from(self.c[i + 1]);
            if !(&prod % &c).is_zero() {
                return Err(Error::InexactDivision(format!(
                    "sphere size k_{} not integral",
                    i + 1
                )));
            }
            let next = (prod / c)
                .to_i128()
                .ok_or(Error::Overflow("sphere sizes"))?;
            out.push(next);
        }
        Ok(out)
    }

    /// `|X|`, the number of `k`-subspaces of `F_q^n`.
    pub fn vertex_count(&self) -> Result<i128> {
        gauss_binom(self.n as i64, self.k as i64, self.q)
    }

    pub fn point_count(&self) -> i128 {
        self.qint(self.n)
    }

    /// Checks `1 < i < k`, the range where the fixed-space machinery applies.
    pub fn check_mid_distance(&self, i: usize) -> Result<()> {
        if i > 1 && i < self.k {
            Ok(())
        } else {
            Err(Error::DistancePrecondition {
                distance: i,
                k: self.k,
            })
        }
    }

    /// `[m]` as a rational.
    pub(crate) fn qr(&self, m: usize) -> BigRational {
        BigRational::from_integer(BigInt::from(self.qint(m)))
    }

    /// `q^e` as a rational, `e` may be negative.
    pub(crate) fn qp(&self, e: i64) -> BigRational {
        qpow_rat(self.q, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn qint_examples() {
        assert_eq!(qint(0, 2).unwrap(), 0);
        assert_eq!(qint(3, 2).unwrap(), 7);
        assert_eq!(qint(7, 2).unwrap(), 127);
        assert!(qint(-1, 2).is_err());
        assert!(qint(3, 6).is_err());
    }

    #[test]
    fn qint_overflow_is_signalled() {
        assert!(matches!(qint(200, 9), Err(Error::Overflow(_))));
    }

    #[test]
    fn gauss_binom_examples() {
        for m in 0..8 {
            assert_eq!(gauss_binom(m, 0, 3).unwrap(), 1);
        }
        assert_eq!(gauss_binom(7, 1, 2).unwrap(), 127);
        assert_eq!(gauss_binom(7, 3, 2).unwrap(), 11811);
        assert_eq!(gauss_binom(6, 2, 2).unwrap(), 651);
        assert!(gauss_binom(3, 4, 2).is_err());
        assert!(gauss_binom(3, -1, 2).is_err());
    }

    #[test]
    fn gauss_binom_pascal_rule() {
        // [m r] = [m-1 r-1] + q^r [m-1 r]
        for q in [2u32, 3, 4, 5] {
            for m in 1..10i64 {
                for r in 1..m {
                    let lhs = gauss_binom(m, r, q).unwrap();
                    let rhs = gauss_binom(m - 1, r - 1, q).unwrap()
                        + (q as i128).pow(r as u32) * gauss_binom(m - 1, r, q).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn params_273() {
        let p = QParams::new(2, 7, 3).unwrap();
        assert_eq!(p.kappa, 210);
        assert_eq!(p.b, vec![210, 168, 96, 0]);
        assert_eq!(p.c, vec![0, 1, 9, 49]);
        assert_eq!(p.a[0], 0);
        assert_eq!(p.theta, vec![210, 83, 21, -7]);
        assert_eq!(p.eigenvalue(1).unwrap(), 83);
        assert_eq!(p.eigenvalue(3).unwrap(), -7);
        assert!(p.eigenvalue(4).is_err());
        assert_eq!(p.sphere_sizes().unwrap(), vec![1, 210, 3920, 7680]);
    }

    #[test]
    fn params_373() {
        let p = QParams::new(3, 7, 3).unwrap();
        assert_eq!(p.c[3], 169);
        assert_eq!(p.theta1(), 467);
    }

    #[test]
    fn params_validation() {
        assert!(QParams::new(2, 6, 3).is_err());
        assert!(QParams::new(2, 9, 2).is_err());
        assert!(QParams::new(6, 9, 4).is_err());
        assert!(QParams::new(9, 7, 3).is_ok());
    }

    #[test]
    fn prime_powers() {
        let pp: Vec<u32> = (1..30).filter(|&q| prime_power_base(q).is_some()).collect();
        assert_eq!(
            pp,
            vec![2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29]
        );
        assert_eq!(prime_power_base(9), Some(3));
        assert_eq!(prime_power_base(8), Some(2));
    }

    #[test]
    fn qpow_rational_negative() {
        assert_eq!(qpow_rat(2, -1), BigRational::new(1.into(), 2.into()));
        assert_eq!(qpow_rat(3, 2), BigRational::from_integer(9.into()));
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn parameter_identities(q in prop::sample::select(vec![2u32, 3, 4, 5, 7]), k in 3usize..6, extra in 1usize..4) {
                let n = 2 * k + extra;
                let p = QParams::new(q, n, k).unwrap();
                prop_assert_eq!(p.b[0], p.kappa);
                prop_assert_eq!(p.c[1], 1);
                prop_assert_eq!(p.a[0], 0);
                for i in 0..=k {
                    prop_assert_eq!(p.b[i] + p.a[i] + p.c[i], p.kappa);
                }
                prop_assert_eq!(p.theta[0], p.kappa);
                for w in p.theta.windows(2) {
                    prop_assert!(w[0] > w[1]);
                }
                let t1 = (q as i128).pow(2) * p.qint(k - 1) * p.qint(n - k - 1) - 1;
                prop_assert_eq!(p.theta1(), t1);
                let total: i128 = p.sphere_sizes().unwrap().iter().sum();
                prop_assert_eq!(total, p.vertex_count().unwrap());
            }
        }
    }
}
