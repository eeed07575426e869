//! Finite fields `F_q` with precomputed operation tables.
//!
//! Prime fields use residues `0..p`. The extension fields `F_4`, `F_8`, `F_9`
//! encode `c_0 + c_1 t + c_2 t^2` as the integer `c_0 + c_1 p + c_2 p^2` and
//! reduce modulo `t^2+t+1`, `t^3+t+1` and `t^2+1` respectively.

use crate::error::{Error, Result};
use crate::qarith::prime_power_base;

pub type Elem = u8;

#[derive(Clone, Debug)]
pub struct Field {
    q: usize,
    p: usize,
    add: Vec<Elem>,
    mul: Vec<Elem>,
    neg: Vec<Elem>,
    inv: Vec<Elem>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for Field {}

/// Low-order coefficients of the reduction polynomial (monic, leading term implied).
fn reduction_poly(q: u32) -> Option<(usize, Vec<usize>)> {
    match q {
        4 => Some((2, vec![1, 1])),    // t^2 = t + 1 over F_2 (t^2+t+1)
        8 => Some((3, vec![1, 1, 0])), // t^3 + t + 1
        9 => Some((2, vec![1, 0])),    // t^2 + 1
        _ => None,
    }
}

impl Field {
    pub fn new(q: u32) -> Result<Self> {
        let p = prime_power_base(q)
            .ok_or_else(|| Error::InvalidParams(format!("q = {q} is not a prime power")))?
            as usize;
        let qs = q as usize;
        if qs > 251 {
            return Err(Error::InvalidParams(format!("q = {q} too large")));
        }
        let (add, mul) = if p == qs {
            let add = (0..qs * qs).map(|i| ((i / qs + i % qs) % qs) as Elem).collect();
            let mul = (0..qs * qs).map(|i| ((i / qs) * (i % qs) % qs) as Elem).collect();
            (add, mul)
        } else {
            let (deg, low) = reduction_poly(q).ok_or_else(|| {
                Error::InvalidParams(format!("extension field F_{q} not supported (use 4, 8, 9)"))
            })?;
            Self::extension_tables(p, deg, &low)
        };
        let mut neg = vec![0; qs];
        let mut inv = vec![0; qs];
        for a in 0..qs {
            for b in 0..qs {
                if add[a * qs + b] == 0 {
                    neg[a] = b as Elem;
                }
                if mul[a * qs + b] == 1 {
                    inv[a] = b as Elem;
                }
            }
        }
        Ok(Field { q: qs, p, add, mul, neg, inv })
    }

    fn extension_tables(p: usize, deg: usize, low: &[usize]) -> (Vec<Elem>, Vec<Elem>) {
        let q = p.pow(deg as u32);
        let digits = |mut x: usize| -> Vec<usize> {
            (0..deg)
                .map(|_| {
                    let d = x % p;
                    x /= p;
                    d
                })
                .collect()
        };
        let encode = |d: &[usize]| d.iter().rev().fold(0, |acc, &c| acc * p + c);
        let mut add = vec![0; q * q];
        let mut mul = vec![0; q * q];
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let s: Vec<usize> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                add[a * q + b] = encode(&s) as Elem;
                let mut prod = vec![0usize; 2 * deg - 1];
                for (i, x) in da.iter().enumerate() {
                    for (j, y) in db.iter().enumerate() {
                        prod[i + j] = (prod[i + j] + x * y) % p;
                    }
                }
                // t^deg = -(low[0] + low[1] t + ...)
                for top in (deg..prod.len()).rev() {
                    let c = prod[top];
                    if c == 0 {
                        continue;
                    }
                    prod[top] = 0;
                    for (j, l) in low.iter().enumerate() {
                        let idx = top - deg + j;
                        prod[idx] = (prod[idx] + (p - (c * l) % p)) % p;
                    }
                }
                mul[a * q + b] = encode(&prod[..deg]) as Elem;
            }
        }
        (add, mul)
    }

    #[inline]
    pub fn q(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        self.add[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.mul[a as usize * self.q + b as usize]
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        self.neg[a as usize]
    }

    /// Multiplicative inverse; `a` must be nonzero.
    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        debug_assert!(a != 0);
        self.inv[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.q).map(|x| x as Elem)
    }

    /// Exhaustive check of the field axioms over the operation tables.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let els: Vec<Elem> = self.elements().collect();
        for &a in &els {
            if self.add(a, 0) != a || self.mul(a, 1) != a {
                return Err(format!("identity fails at {a}"));
            }
            if self.add(a, self.neg(a)) != 0 {
                return Err(format!("additive inverse fails at {a}"));
            }
            if a != 0 && self.mul(a, self.inv(a)) != 1 {
                return Err(format!("multiplicative inverse fails at {a}"));
            }
            for &b in &els {
                if self.add(a, b) != self.add(b, a) || self.mul(a, b) != self.mul(b, a) {
                    return Err(format!("commutativity fails at ({a},{b})"));
                }
                if a != 0 && b != 0 && self.mul(a, b) == 0 {
                    return Err(format!("zero divisor ({a},{b})"));
                }
                for &c in &els {
                    if self.add(self.add(a, b), c) != self.add(a, self.add(b, c))
                        || self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c))
                    {
                        return Err(format!("associativity fails at ({a},{b},{c})"));
                    }
                    if self.mul(a, self.add(b, c)) != self.add(self.mul(a, b), self.mul(a, c)) {
                        return Err(format!("distributivity fails at ({a},{b},{c})"));
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn axioms_hold_for_small_fields() {
        for q in [2u32, 3, 4, 5, 7, 8, 9] {
            let f = Field::new(q).unwrap();
            f.check_axioms().unwrap_or_else(|e| panic!("F_{q}: {e}"));
            assert_eq!(f.q(), q as usize);
        }
    }

    #[test]
    fn characteristic() {
        assert_eq!(Field::new(8).unwrap().characteristic(), 2);
        assert_eq!(Field::new(9).unwrap().characteristic(), 3);
        assert_eq!(Field::new(7).unwrap().characteristic(), 7);
    }

    #[test]
    fn f4_multiplication() {
        // t * t = t + 1, encoded 2 * 2 = 3
        let f = Field::new(4).unwrap();
        assert_eq!(f.mul(2, 2), 3);
        assert_eq!(f.mul(2, 3), 1);
    }

    #[test]
    fn f9_has_square_root_of_minus_one() {
        let f = Field::new(9).unwrap();
        // t encoded as 3; t^2 = -1 = 2
        assert_eq!(f.mul(3, 3), 2);
    }

    #[test]
    fn unsupported_fields_rejected() {
        assert!(Field::new(6).is_err());
        assert!(Field::new(16).is_err());
        assert!(Field::new(1).is_err());
    }
}
