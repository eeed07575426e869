//! The Euclidean representation of `J_q(n,k)` for the eigenvalue `θ_1`.
//!
//! The space `E` is modelled inside `Z^{[n]}`, one coordinate per point. A
//! point `s` is stored as `[n] e_s - 1`, which is `sqrt([n])` times `ŝ`;
//! the inner product divides the dot product by `[n]`. Then
//! `<ŝ,ŝ> = [n]-1`, `<ŝ,t̂> = -1` and `Σ ŝ = 0`, all in integers.

use std::collections::HashMap;
use std::sync::RwLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grassmann::Grassmann;
use crate::qarith::QParams;
use crate::ratmat::{int_rank, int_rank_mod_p};
use crate::subspace::{PointId, ProjectiveSpace, Subspace};

/// Largest prime below 2^61, used for modular rank bounds.
pub const RANK_PRIME: u64 = 2_305_843_009_213_693_951;

/// Integer coordinates of `sqrt([n])` times a vector of `E`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RepVector {
    coords: Vec<i128>,
}

fn overflow() -> Error {
    Error::Overflow("representation vector")
}

impl RepVector {
    pub fn zero(len: usize) -> Self {
        RepVector { coords: vec![0; len] }
    }

    pub fn from_coords(coords: Vec<i128>) -> Self {
        RepVector { coords }
    }

    pub fn coords(&self) -> &[i128] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }

    pub fn coord_sum(&self) -> i128 {
        self.coords.iter().sum()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(i128, i128) -> Option<i128>) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch(self.len(), other.len()));
        }
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(&a, &b)| f(a, b).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()
            .map(RepVector::from_coords)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, i128::checked_add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, i128::checked_sub)
    }

    pub fn scale(&self, s: i128) -> Result<Self> {
        self.coords
            .iter()
            .map(|&a| a.checked_mul(s).ok_or_else(overflow))
            .collect::<Result<Vec<_>>>()
            .map(RepVector::from_coords)
    }

    /// `Σ c_j v_j` for rational `c_j`, required to land back on the lattice.
    pub fn combination(terms: &[(BigRational, &RepVector)]) -> Result<RepVector> {
        let len = terms
            .first()
            .map(|(_, v)| v.len())
            .ok_or_else(|| Error::InvalidParams("empty linear combination".into()))?;
        let lcd = terms
            .iter()
            .fold(BigInt::one(), |acc, (c, _)| acc.lcm(c.denom()));
        let mut acc = vec![BigInt::zero(); len];
        for (c, v) in terms {
            if v.len() != len {
                return Err(Error::DimensionMismatch(v.len(), len));
            }
            let scaled = c * BigRational::from_integer(lcd.clone());
            let a = scaled.to_integer();
            if a.is_zero() {
                continue;
            }
            for (s, &x) in acc.iter_mut().zip(&v.coords) {
                *s += &a * BigInt::from(x);
            }
        }
        acc.into_iter()
            .enumerate()
            .map(|(idx, s)| {
                let (quot, rem) = s.div_rem(&lcd);
                if !rem.is_zero() {
                    return Err(Error::InexactDivision(format!(
                        "coordinate {idx} of a rational combination is not integral"
                    )));
                }
                quot.to_i128().ok_or_else(overflow)
            })
            .collect::<Result<Vec<_>>>()
            .map(RepVector::from_coords)
    }

    /// Image under the point permutation `perm` (`s ↦ perm[s]`).
    pub fn permute(&self, perm: &[PointId]) -> Result<RepVector> {
        if perm.len() != self.len() {
            return Err(Error::DimensionMismatch(perm.len(), self.len()));
        }
        let mut out = vec![0; self.len()];
        for (s, &c) in self.coords.iter().enumerate() {
            out[perm[s].index()] = c;
        }
        Ok(RepVector::from_coords(out))
    }
}

/// Hat map, inner product and rank utilities over one projective space.
pub struct Representation {
    space: ProjectiveSpace,
    qn: i128,
    memo: RwLock<HashMap<Subspace, RepVector>>,
}

impl Representation {
    pub fn new(space: ProjectiveSpace) -> Self {
        let qn = space.point_count() as i128;
        Representation { space, qn, memo: RwLock::new(HashMap::new()) }
    }

    pub fn for_grassmann(g: &Grassmann) -> Self {
        Self::new(g.space.clone())
    }

    pub fn space(&self) -> &ProjectiveSpace {
        &self.space
    }

    /// `[n]`, the length of every vector and the inner-product divisor.
    pub fn scale(&self) -> i128 {
        self.qn
    }

    pub fn zero(&self) -> RepVector {
        RepVector::zero(self.qn as usize)
    }

    fn compute_hat(&self, u: &Subspace) -> RepVector {
        let omega = self.space.omega(u);
        let m = omega.len() as i128;
        let mut coords = vec![-m; self.qn as usize];
        for p in omega {
            coords[p.index()] += self.qn;
        }
        RepVector::from_coords(coords)
    }

    /// `û = Σ_{s ∈ Ω(u)} ŝ`; memoized per canonical form.
    pub fn hat(&self, u: &Subspace) -> RepVector {
        if let Some(v) = self.memo.read().expect("memo lock").get(u) {
            return v.clone();
        }
        let v = self.compute_hat(u);
        self.memo
            .write()
            .expect("memo lock")
            .entry(u.clone())
            .or_insert(v)
            .clone()
    }

    pub fn point_hat(&self, s: PointId) -> RepVector {
        let mut coords = vec![-1; self.qn as usize];
        coords[s.index()] += self.qn;
        RepVector::from_coords(coords)
    }

    /// `Σ_j û_j`, accumulated without materializing each term.
    pub fn hat_sum<'a, I>(&self, subspaces: I) -> RepVector
    where
        I: IntoIterator<Item = &'a Subspace>,
    {
        let mut counts = vec![0i128; self.qn as usize];
        let mut total = 0i128;
        for u in subspaces {
            for p in self.space.omega(u) {
                counts[p.index()] += 1;
                total += 1;
            }
        }
        RepVector::from_coords(counts.into_iter().map(|c| c * self.qn - total).collect())
    }

    /// `Σ_s α_s ŝ` scaled by the common denominator of the `α_s`.
    fn point_combination(&self, coeffs: &[BigRational]) -> Result<RepVector> {
        if coeffs.len() != self.qn as usize {
            return Err(Error::DimensionMismatch(coeffs.len(), self.qn as usize));
        }
        let lcd = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = coeffs
            .iter()
            .map(|c| {
                (c * BigRational::from_integer(lcd.clone()))
                    .to_integer()
                    .to_i128()
                    .ok_or_else(overflow)
            })
            .collect::<Result<Vec<i128>>>()?;
        let total: i128 = ints.iter().sum();
        ints.iter()
            .map(|&a| {
                a.checked_mul(self.qn)
                    .and_then(|x| x.checked_sub(total))
                    .ok_or_else(overflow)
            })
            .collect::<Result<Vec<_>>>()
            .map(RepVector::from_coords)
    }

    /// `<a, b>`; errors when the scaled dot product is not divisible by `[n]`.
    pub fn inner(&self, a: &RepVector, b: &RepVector) -> Result<i128> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(a.len(), b.len()));
        }
        let mut dot: i128 = 0;
        for (&x, &y) in a.coords.iter().zip(&b.coords) {
            dot = x
                .checked_mul(y)
                .and_then(|p| dot.checked_add(p))
                .ok_or_else(overflow)?;
        }
        if dot % self.qn != 0 {
            return Err(Error::InexactDivision(format!(
                "dot product {dot} not divisible by [n] = {}",
                self.qn
            )));
        }
        Ok(dot / self.qn)
    }

    /// Gram matrix of a vector family.
    pub fn gram(&self, vs: &[&RepVector]) -> Result<Vec<Vec<i128>>> {
        vs.iter()
            .map(|a| vs.iter().map(|b| self.inner(a, b)).collect())
            .collect()
    }

    /// Exact rank over `Q`.
    pub fn rank(&self, vs: &[&RepVector]) -> usize {
        int_rank(vs.iter().map(|v| v.coords()))
    }

    /// Rank modulo [`RANK_PRIME`]; never exceeds the exact rank.
    pub fn rank_lower_bound(&self, vs: &[&RepVector]) -> usize {
        int_rank_mod_p(vs.iter().map(|v| v.coords()), RANK_PRIME)
    }

    /// Whether `Σ α_s ŝ = 0` holds exactly when all `α_s` coincide.
    pub fn kernel_constant_check(&self, coeffs: &[BigRational]) -> Result<bool> {
        let v = self.point_combination(coeffs)?;
        let constant = coeffs.windows(2).all(|w| w[0] == w[1]);
        Ok(v.is_zero() == constant)
    }

    /// `Σ_{z ∈ Γ(x)} ẑ - θ_1 x̂`, which is zero for a genuine representation.
    pub fn theta1_residual(&self, g: &Grassmann, x: &Subspace) -> Result<RepVector> {
        let ns = g.neighbors(x)?;
        let sum = self.hat_sum(&ns);
        sum.sub(&self.hat(x).scale(g.params.theta1())?)
    }
}

/// `[n][h] - [i][j]` for subspaces of dimensions `i`, `j` meeting in dimension `h`.
pub fn predicted_inner(params: &QParams, dim_u: usize, dim_v: usize, dim_meet: usize) -> Result<i128> {
    let n = params.n;
    let lo = (dim_u + dim_v).saturating_sub(n);
    if dim_u > n || dim_v > n || dim_meet < lo || dim_meet > dim_u.min(dim_v) {
        return Err(Error::InvalidParams(format!(
            "inconsistent dimensions ({dim_u}, {dim_v}, meet {dim_meet}) in F_q^{n}"
        )));
    }
    let lhs = params.qint(n).checked_mul(params.qint(dim_meet)).ok_or_else(overflow)?;
    let rhs = params.qint(dim_u).checked_mul(params.qint(dim_v)).ok_or_else(overflow)?;
    Ok(lhs - rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn setup() -> (Grassmann, Representation) {
        let g = Grassmann::from_qnk(2, 7, 3).unwrap();
        let rep = Representation::for_grassmann(&g);
        (g, rep)
    }

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn point_axioms() {
        let (_, rep) = setup();
        let s = rep.point_hat(PointId(0));
        let t = rep.point_hat(PointId(5));
        assert_eq!(rep.inner(&s, &s).unwrap(), 126);
        assert_eq!(rep.inner(&s, &t).unwrap(), -1);
        let all: Vec<RepVector> = (0..127).map(|i| rep.point_hat(PointId(i))).collect();
        let refs: Vec<&RepVector> = all.iter().collect();
        assert!(rep.hat_sum(&[rep.space().full()]).is_zero());
        let mut sum = rep.zero();
        for v in &all {
            sum = sum.add(v).unwrap();
        }
        assert!(sum.is_zero());
        assert_eq!(rep.rank(&refs), 126);
        assert_eq!(rep.rank(&refs[1..]), 126);
        assert_eq!(rep.rank_lower_bound(&refs), 126);
    }

    #[test]
    fn hat_of_trivial_subspaces() {
        let (g, rep) = setup();
        assert!(rep.hat(&g.space.zero()).is_zero());
        assert!(rep.hat(&g.space.full()).is_zero());
    }

    #[test]
    fn hat_memo_matches_direct() {
        let (g, rep) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = g.random_vertex(&mut rng);
        let a = rep.hat(&x);
        let b = rep.hat(&x);
        assert_eq!(a, b);
        assert_eq!(a, rep.hat_sum([&x]));
        assert_eq!(a.coord_sum(), 0);
    }

    #[test]
    fn distance_two_inner_product() {
        let (g, rep) = setup();
        let (x, y) = g.witness_pair(2, 4).unwrap();
        assert_eq!(rep.inner(&rep.hat(&x), &rep.hat(&y)).unwrap(), 78);
        assert_eq!(rep.inner(&rep.hat(&x), &rep.hat(&x)).unwrap(), 840);
    }

    #[test]
    fn predicted_inner_examples() {
        let p = QParams::new(2, 7, 3).unwrap();
        assert_eq!(predicted_inner(&p, 3, 3, 1).unwrap(), 78);
        assert_eq!(predicted_inner(&p, 3, 3, 3).unwrap(), 840);
        for i in 0..=7 {
            let expect = 2i128.pow(i as u32) * p.qint(i) * p.qint(7 - i);
            assert_eq!(predicted_inner(&p, i, i, i).unwrap(), expect);
        }
        assert!(predicted_inner(&p, 3, 3, 4).is_err());
        assert!(predicted_inner(&p, 5, 5, 2).is_err());
    }

    #[test]
    fn eigen_sum_residual_vanishes() {
        let (g, rep) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..3 {
            let x = g.random_vertex(&mut rng);
            assert!(rep.theta1_residual(&g, &x).unwrap().is_zero());
        }
    }

    #[test]
    fn kernel_check() {
        let (g, rep) = setup();
        assert!(rep.kernel_constant_check(&vec![r(1); 127]).unwrap());
        let mut ind = vec![r(0); 127];
        ind[3] = r(1);
        assert!(rep.kernel_constant_check(&ind).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = g.space.random_subspace(3, &mut rng);
        let mut om = vec![r(0); 127];
        for p in g.space.omega(&u) {
            om[p.index()] = r(1);
        }
        assert!(rep.kernel_constant_check(&om).unwrap());
        assert!(!rep.point_combination(&om).unwrap().is_zero());
    }

    #[test]
    fn rational_combination_checks_integrality() {
        let v = RepVector::from_coords(vec![2, 4, -6]);
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(
            RepVector::combination(&[(half.clone(), &v)]).unwrap().coords(),
            &[1, 2, -3]
        );
        let w = RepVector::from_coords(vec![1, 0, 0]);
        assert!(matches!(
            RepVector::combination(&[(half, &w)]),
            Err(Error::InexactDivision(_))
        ));
    }

    #[test]
    fn gl_isometry() {
        let (g, rep) = setup();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let du = rng.gen_range(1..7);
            let dv = rng.gen_range(1..7);
            let u = g.space.random_subspace(du, &mut rng);
            let v = g.space.random_subspace(dv, &mut rng);
            let sigma = g.space.gl_random_with(&mut rng);
            let perm = g.space.point_permutation(&sigma).unwrap();
            let su = g.space.gl_apply(&sigma, &u).unwrap();
            let sv = g.space.gl_apply(&sigma, &v).unwrap();
            assert_eq!(rep.hat(&u).permute(&perm).unwrap(), rep.hat(&su));
            assert_eq!(
                rep.inner(&rep.hat(&su), &rep.hat(&sv)).unwrap(),
                rep.inner(&rep.hat(&u), &rep.hat(&v)).unwrap()
            );
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn inner_product_law(seed in any::<u64>(), du in 0usize..=7, dv in 0usize..=7) {
            let (g, rep) = setup();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let u = g.space.random_subspace(du, &mut rng);
            let v = g.space.random_subspace(dv, &mut rng);
            let h = g.space.meet(&u, &v).unwrap().dim();
            let got = rep.inner(&rep.hat(&u), &rep.hat(&v)).unwrap();
            prop_assert_eq!(got, predicted_inner(&g.params, du, dv, h).unwrap());
            prop_assert_eq!(rep.hat(&u).coord_sum(), 0);
        }
    }
}
