//! Bases of the space fixed by the stabilizer of a vertex pair, their Gram
//! tables and transition matrices, and reconstruction of `(x∩y)^` and
//! `(x+y)^` from `x̂`, `ŷ` and the neighbour sums `B`, `C`.
//!
//! Bases and their labels:
//! - geometric: `x̂, ŷ, (x∩y)^, (x+y)^`
//! - combinatorial: `x̂, ŷ, B, C`
//! - bar: `x̂+ŷ, (x∩y)^, (x+y)^` against `x̂+ŷ, B̄, C̄`
//! - check: `(x∩y)^, (x+y)^` against `B̌, Č`
//!
//! A transition matrix from basis `P` to basis `Q` has as column `j` the
//! coordinates of `Q_j` in `P`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::Result;
use crate::euclid::{RepVector, Representation};
use crate::grassmann::Grassmann;
use crate::qarith::QParams;
use crate::ratmat::RatMatrix;
use crate::subspace::Subspace;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GramKind {
    Geometric,
    Mixed,
    Combinatorial,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    Full,
    Bar,
    Check,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    GeoToComb,
    CombToGeo,
}

impl GramKind {
    pub const ALL: [GramKind; 3] = [GramKind::Geometric, GramKind::Mixed, GramKind::Combinatorial];

    pub fn name(self) -> &'static str {
        match self {
            GramKind::Geometric => "geometric",
            GramKind::Mixed => "mixed",
            GramKind::Combinatorial => "combinatorial",
        }
    }
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::Bar, Variant::Check];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Bar => "bar",
            Variant::Check => "check",
        }
    }

    pub fn geometric_labels(self) -> Vec<&'static str> {
        match self {
            Variant::Full => vec!["x_hat", "y_hat", "meet_hat", "join_hat"],
            Variant::Bar => vec!["x_hat+y_hat", "meet_hat", "join_hat"],
            Variant::Check => vec!["meet_hat", "join_hat"],
        }
    }

    pub fn combinatorial_labels(self) -> Vec<&'static str> {
        match self {
            Variant::Full => vec!["x_hat", "y_hat", "B", "C"],
            Variant::Bar => vec!["x_hat+y_hat", "B_bar", "C_bar"],
            Variant::Check => vec!["B_check", "C_check"],
        }
    }
}

impl Direction {
    pub fn name(self) -> &'static str {
        match self {
            Direction::GeoToComb => "geo-to-comb",
            Direction::CombToGeo => "comb-to-geo",
        }
    }
}

/// Inner products between two labelled vector families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramTable {
    pub kind: GramKind,
    pub i: usize,
    pub row_labels: Vec<&'static str>,
    pub col_labels: Vec<&'static str>,
    pub entries: RatMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    pub direction: Direction,
    pub variant: Variant,
    pub i: usize,
    pub entries: RatMatrix,
}

impl TransitionMatrix {
    pub fn from_labels(&self) -> Vec<&'static str> {
        match self.direction {
            Direction::GeoToComb => self.variant.geometric_labels(),
            Direction::CombToGeo => self.variant.combinatorial_labels(),
        }
    }

    pub fn to_labels(&self) -> Vec<&'static str> {
        match self.direction {
            Direction::GeoToComb => self.variant.combinatorial_labels(),
            Direction::CombToGeo => self.variant.geometric_labels(),
        }
    }
}

/// `x̂, ŷ, (x∩y)^, (x+y)^, B, C` for one pair.
#[derive(Clone, Debug)]
pub struct FixVectors {
    pub i: usize,
    pub x: RepVector,
    pub y: RepVector,
    pub meet: RepVector,
    pub join: RepVector,
    pub b: RepVector,
    pub c: RepVector,
}

/// Reconstructed `(x∩y)^` and `(x+y)^` with the coefficients used.
#[derive(Clone, Debug)]
pub struct Recovery {
    pub variant: Variant,
    pub meet_coeffs: Vec<BigRational>,
    pub join_coeffs: Vec<BigRational>,
    pub meet: RepVector,
    pub join: RepVector,
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Closed-form helpers: `[m]` and `q^e` as rationals.
struct Sym<'a> {
    p: &'a QParams,
    i: usize,
}

impl Sym<'_> {
    fn b(&self, m: usize) -> BigRational {
        self.p.qr(m)
    }

    fn qe(&self, e: i64) -> BigRational {
        self.p.qp(e)
    }

    fn n(&self) -> usize {
        self.p.n
    }

    fn k(&self) -> usize {
        self.p.k
    }

    fn ki(&self) -> i64 {
        self.p.k as i64
    }

    fn ii(&self) -> i64 {
        self.i as i64
    }

    fn zeta(&self) -> BigRational {
        let (n, k, i) = (self.n(), self.k(), self.i);
        self.qe(2 * self.ii()) * self.b(k - i) * self.b(n - k - i)
    }

    fn xi(&self) -> BigRational {
        self.qe(1) * self.b(self.i) * self.b(self.i - 2)
    }

    fn b_count(&self) -> BigRational {
        let (n, k, i) = (self.n(), self.k(), self.i);
        self.qe(2 * self.ii() + 1) * self.b(k - i) * self.b(n - k - i)
    }

    fn c_count(&self) -> BigRational {
        self.b(self.i) * self.b(self.i)
    }
}

fn sym(p: &QParams, i: usize) -> Result<Sym<'_>> {
    p.check_mid_distance(i)?;
    Ok(Sym { p, i })
}

fn mat(rows: Vec<Vec<BigRational>>) -> RatMatrix {
    RatMatrix::from_rows(rows).expect("closed-form tables are rectangular")
}

/// `q^k[k][n-k]` and `[n][k-j]-[k]^2`, the inner products `<x̂,ŷ>` at distance `j`.
fn cosine(s: &Sym<'_>, j: usize) -> BigRational {
    let (n, k) = (s.n(), s.k());
    s.b(n) * s.b(k - j) - s.b(k) * s.b(k)
}

/// Gram table of `x̂, ŷ, (x∩y)^, (x+y)^` from the closed forms.
pub fn geometric_gram(p: &QParams, i: usize) -> Result<RatMatrix> {
    let s = sym(p, i)?;
    let (n, k, ki, ii) = (s.n(), s.k(), s.ki(), s.ii());
    let xx = s.qe(ki) * s.b(k) * s.b(n - k);
    let xy = cosine(&s, i);
    let xm = s.qe(ki) * s.b(k - i) * s.b(n - k);
    let xj = s.qe(ki + ii) * s.b(k) * s.b(n - k - i);
    let mm = s.qe(ki - ii) * s.b(k - i) * s.b(n - k + i);
    let mj = s.qe(ki + ii) * s.b(k - i) * s.b(n - k - i);
    let jj = s.qe(ki + ii) * s.b(k + i) * s.b(n - k - i);
    Ok(mat(vec![
        vec![xx.clone(), xy.clone(), xm.clone(), xj.clone()],
        vec![xy, xx, xm.clone(), xj.clone()],
        vec![xm.clone(), xm, mm, mj.clone()],
        vec![xj.clone(), xj, mj, jj],
    ]))
}

/// Rows `B`, `C` against columns `x̂, ŷ, (x∩y)^, (x+y)^`.
pub fn mixed_gram(p: &QParams, i: usize) -> Result<RatMatrix> {
    let s = sym(p, i)?;
    let (n, k, ki, ii) = (s.n(), s.k(), s.ki(), s.ii());
    let (qn, qk) = (s.b(n), s.b(k));
    let bi = s.b_count();
    let ci = s.c_count();
    let brow = vec![
        &bi * (&qn * s.b(k - 1) - &qk * &qk),
        &bi * (&qn * s.b(k - i - 1) - &qk * &qk),
        &bi * (&qn * s.b(k - i - 1) - s.b(k - i) * &qk),
        &bi * (&qn * s.b(k - 1) - &qk * s.b(k + i)),
    ];
    let crow = vec![
        &ci * (&qn * s.b(k - 1) - &qk * &qk),
        &ci * (&qn * s.b(k - i + 1) - &qk * &qk),
        s.qe(ki) * &ci * s.b(k - i) * s.b(n - k),
        s.qe(ki + ii) * &ci * &qk * s.b(n - k - i),
    ];
    Ok(mat(vec![brow, crow]))
}

/// Gram table of `x̂, ŷ, B, C` from the closed forms.
pub fn combinatorial_gram(p: &QParams, i: usize) -> Result<RatMatrix> {
    let s = sym(p, i)?;
    let (n, k, ki, ii) = (s.n(), s.k(), s.ki(), s.ii());
    let geo = geometric_gram(p, i)?;
    let mixed = mixed_gram(p, i)?;
    let (qn, qk) = (s.b(n), s.b(k));
    let base = &qn * s.b(k - 2) - &qk * &qk;
    let (bki, bnki) = (s.b(k - i), s.b(n - k - i));
    let bb = s.qe(4 * ii + 2)
        * &bki
        * &bnki
        * (s.qe(ki - ii - 2) * &qn * (&bki + &bnki) + &bki * &bnki * &base);
    let bc = s.b_count() * s.c_count() * &base;
    let two_q = s.qe(1) * r(2, 1);
    let cc = s.c_count()
        * (s.qe(ki - 2) * &qn * (two_q * s.b(i - 1) + s.qe(1) + BigRational::one())
            + s.c_count() * &base);
    let g = |a: usize, b: usize| geo.get(a, b).clone();
    let m = |a: usize, b: usize| mixed.get(a, b).clone();
    Ok(mat(vec![
        vec![g(0, 0), g(0, 1), m(0, 0), m(1, 0)],
        vec![g(1, 0), g(1, 1), m(0, 1), m(1, 1)],
        vec![m(0, 0), m(0, 1), bb.clone(), bc.clone()],
        vec![m(1, 0), m(1, 1), bc, cc],
    ]))
}

pub fn gram_table(kind: GramKind, p: &QParams, i: usize) -> Result<GramTable> {
    let full = Variant::Full;
    let (entries, row_labels, col_labels) = match kind {
        GramKind::Geometric => (
            geometric_gram(p, i)?,
            full.geometric_labels(),
            full.geometric_labels(),
        ),
        GramKind::Mixed => (mixed_gram(p, i)?, vec!["B", "C"], full.geometric_labels()),
        GramKind::Combinatorial => (
            combinatorial_gram(p, i)?,
            full.combinatorial_labels(),
            full.combinatorial_labels(),
        ),
    };
    Ok(GramTable { kind, i, row_labels, col_labels, entries })
}

/// The same table computed from actual vectors.
pub fn gram_table_empirical(
    kind: GramKind,
    rep: &Representation,
    fv: &FixVectors,
) -> Result<GramTable> {
    let geo = [&fv.x, &fv.y, &fv.meet, &fv.join];
    let comb = [&fv.x, &fv.y, &fv.b, &fv.c];
    let bc = [&fv.b, &fv.c];
    let (rows, cols): (&[&RepVector], &[&RepVector]) = match kind {
        GramKind::Geometric => (&geo, &geo),
        GramKind::Mixed => (&bc, &geo),
        GramKind::Combinatorial => (&comb, &comb),
    };
    let mut vals = Vec::with_capacity(rows.len() * cols.len());
    for a in rows {
        for b in cols {
            vals.push(rep.inner(a, b)?);
        }
    }
    let template = gram_table_labels(kind);
    Ok(GramTable {
        kind,
        i: fv.i,
        row_labels: template.0,
        col_labels: template.1,
        entries: RatMatrix::from_ints(rows.len(), cols.len(), &vals)?,
    })
}

fn gram_table_labels(kind: GramKind) -> (Vec<&'static str>, Vec<&'static str>) {
    let full = Variant::Full;
    match kind {
        GramKind::Geometric => (full.geometric_labels(), full.geometric_labels()),
        GramKind::Mixed => (vec!["B", "C"], full.geometric_labels()),
        GramKind::Combinatorial => (full.combinatorial_labels(), full.combinatorial_labels()),
    }
}

/// `M_i^{-1}` from its closed form, `M_i` being the geometric Gram table.
pub fn m_inverse(p: &QParams, i: usize) -> Result<RatMatrix> {
    let s = sym(p, i)?;
    let (n, k, ki, ii) = (s.n(), s.k(), s.ki(), s.ii());
    let qi = s.qe(ii);
    let one = BigRational::one();
    let e33 = (&qi * s.b(k) - s.b(i)) / s.b(k - i);
    let e44 = (&qi * s.b(n - k) - s.b(i)) / (s.qe(2 * ii) * s.b(n - k - i));
    let m = mat(vec![
        vec![qi.clone(), one.clone(), -qi.clone(), -one.clone()],
        vec![one.clone(), qi.clone(), -qi.clone(), -one.clone()],
        vec![-qi.clone(), -qi.clone(), e33, one.clone()],
        vec![-one.clone(), -one.clone(), one, e44],
    ]);
    let pre = s.qe(ki - ii) * (s.qe(1) - BigRational::one()) * s.b(i) * s.b(i) * s.b(n);
    Ok(m.scale(&(BigRational::one() / pre)))
}

/// Coordinates of the combinatorial vectors (`B`, `C` or their bar/check
/// forms) in the corresponding geometric basis, one column per vector.
pub fn coeffs_in_geometric(variant: Variant, p: &QParams, i: usize) -> Result<RatMatrix> {
    let t = transition(Direction::GeoToComb, variant, p, i)?.entries;
    let skip = match variant {
        Variant::Full => 2,
        Variant::Bar => 1,
        Variant::Check => 0,
    };
    let rows = (0..t.rows())
        .map(|row| t.row(row)[skip..].to_vec())
        .collect();
    RatMatrix::from_rows(rows)
}

/// `ζ = q^{2i}[k-i][n-k-i]` and `ξ = q[i][i-2]`, with
/// `B_xy - B_yx = ζ(x̂-ŷ)` and `C_xy - C_yx = ξ(x̂-ŷ)`.
pub fn balance_constants(p: &QParams, i: usize) -> Result<(BigRational, BigRational)> {
    let s = sym(p, i)?;
    Ok((s.zeta(), s.xi()))
}

pub fn transition(direction: Direction, variant: Variant, p: &QParams, i: usize) -> Result<TransitionMatrix> {
    let s = sym(p, i)?;
    let (n, k, ki, ii) = (s.n(), s.k(), s.ki(), s.ii());
    let z = BigRational::zero;
    let one = BigRational::one;
    let nk = s.b(n - 2 * k);
    let im1 = s.b(i - 1);
    let (bki, bnki) = (s.b(k - i), s.b(n - k - i));
    // Shared lower-right 2x2 blocks.
    let g2c = [
        [-s.qe(2 * ii) * &bnki, s.qe(ii) * &im1],
        [-s.qe(ii) * &bki, im1.clone()],
    ];
    let c2g = [
        [
            -one() / (s.qe(ki + ii) * &nk),
            one() / (s.qe(ki) * &nk),
        ],
        [
            -&bki / (s.qe(ki) * &im1 * &nk),
            &bnki / (s.qe(ki - ii) * &im1 * &nk),
        ],
    ];
    // Coordinates of (x∩y)^, (x+y)^ on ŷ (equivalently x̂+ŷ in the bar basis).
    let y_row = [
        &bki / (s.qe(ki - ii + 1) * &im1 * &nk),
        -&bnki / (s.qe(ki - 2 * ii + 1) * &im1 * &nk),
    ];
    let entries = match (direction, variant) {
        (Direction::GeoToComb, Variant::Full) => mat(vec![
            vec![one(), z(), s.zeta(), s.qe(1) * &im1 * &im1],
            vec![z(), one(), z(), s.qe(ii - 1)],
            vec![z(), z(), g2c[0][0].clone(), g2c[0][1].clone()],
            vec![z(), z(), g2c[1][0].clone(), g2c[1][1].clone()],
        ]),
        (Direction::CombToGeo, Variant::Full) => mat(vec![
            vec![
                one(),
                z(),
                &bki * s.b(n - k - 1) / (s.qe(ki - 1) * &nk),
                -s.b(k - 1) * &bnki / (s.qe(ki - ii - 1) * &nk),
            ],
            vec![z(), one(), y_row[0].clone(), y_row[1].clone()],
            vec![z(), z(), c2g[0][0].clone(), c2g[0][1].clone()],
            vec![z(), z(), c2g[1][0].clone(), c2g[1][1].clone()],
        ]),
        (Direction::GeoToComb, Variant::Bar) => mat(vec![
            vec![one(), z(), s.qe(ii - 1)],
            vec![z(), g2c[0][0].clone(), g2c[0][1].clone()],
            vec![z(), g2c[1][0].clone(), g2c[1][1].clone()],
        ]),
        (Direction::CombToGeo, Variant::Bar) => mat(vec![
            vec![one(), y_row[0].clone(), y_row[1].clone()],
            vec![z(), c2g[0][0].clone(), c2g[0][1].clone()],
            vec![z(), c2g[1][0].clone(), c2g[1][1].clone()],
        ]),
        (Direction::GeoToComb, Variant::Check) => mat(vec![
            g2c[0].to_vec(),
            g2c[1].to_vec(),
        ]),
        (Direction::CombToGeo, Variant::Check) => mat(vec![
            c2g[0].to_vec(),
            c2g[1].to_vec(),
        ]),
    };
    Ok(TransitionMatrix { direction, variant, i, entries })
}

/// `-q^{k+i}[i-1][n-2k]`, the determinant of the full geo-to-comb matrix.
pub fn predicted_transition_det(p: &QParams, i: usize) -> Result<BigRational> {
    let s = sym(p, i)?;
    Ok(-s.qe(s.ki() + s.ii()) * s.b(i - 1) * s.b(s.n() - 2 * s.k()))
}

/// `(B, C)`: sums of `ẑ` over the two neighbour sets of the pair.
pub fn bc_vectors(g: &Grassmann, rep: &Representation, x: &Subspace, y: &Subspace) -> Result<(RepVector, RepVector)> {
    let (b, c) = g.bc_sets(x, y)?;
    Ok((rep.hat_sum(&b), rep.hat_sum(&c)))
}

impl FixVectors {
    pub fn compute(g: &Grassmann, rep: &Representation, x: &Subspace, y: &Subspace) -> Result<Self> {
        let ctx = g.pair_context(x, y)?;
        let (b, c) = bc_vectors(g, rep, x, y)?;
        Ok(FixVectors {
            i: ctx.i,
            x: rep.hat(x),
            y: rep.hat(y),
            meet: rep.hat(&ctx.meet_xy),
            join: rep.hat(&ctx.join_xy),
            b,
            c,
        })
    }

    pub fn sum_xy(&self) -> Result<RepVector> {
        self.x.add(&self.y)
    }

    /// `B̄ = B - ζ x̂`.
    pub fn b_bar(&self, p: &QParams) -> Result<RepVector> {
        let (zeta, _) = balance_constants(p, self.i)?;
        RepVector::combination(&[(BigRational::one(), &self.b), (-zeta, &self.x)])
    }

    /// `C̄ = C - ξ x̂`.
    pub fn c_bar(&self, p: &QParams) -> Result<RepVector> {
        let (_, xi) = balance_constants(p, self.i)?;
        RepVector::combination(&[(BigRational::one(), &self.c), (-xi, &self.x)])
    }

    /// `Č = C̄ - q^{i-1}(x̂+ŷ)`.
    pub fn c_check(&self, p: &QParams) -> Result<RepVector> {
        let cbar = self.c_bar(p)?;
        let s = self.sum_xy()?;
        RepVector::combination(&[(BigRational::one(), &cbar), (-p.qp(self.i as i64 - 1), &s)])
    }

    /// The vectors of the geometric basis of `variant`.
    pub fn geometric_basis(&self, variant: Variant) -> Result<Vec<RepVector>> {
        Ok(match variant {
            Variant::Full => vec![self.x.clone(), self.y.clone(), self.meet.clone(), self.join.clone()],
            Variant::Bar => vec![self.sum_xy()?, self.meet.clone(), self.join.clone()],
            Variant::Check => vec![self.meet.clone(), self.join.clone()],
        })
    }

    /// The vectors of the combinatorial basis of `variant`; built only from
    /// `x̂`, `ŷ`, `B` and `C`.
    pub fn combinatorial_basis(&self, p: &QParams, variant: Variant) -> Result<Vec<RepVector>> {
        Ok(match variant {
            Variant::Full => vec![self.x.clone(), self.y.clone(), self.b.clone(), self.c.clone()],
            Variant::Bar => vec![self.sum_xy()?, self.b_bar(p)?, self.c_bar(p)?],
            Variant::Check => vec![self.b_bar(p)?, self.c_check(p)?],
        })
    }
}

/// Reconstructs `(x∩y)^`, `(x+y)^` from the combinatorial basis of `variant`
/// using the comb-to-geo transition matrix.
pub fn recover_from_vectors(p: &QParams, fv: &FixVectors, variant: Variant) -> Result<Recovery> {
    let inv = transition(Direction::CombToGeo, variant, p, fv.i)?.entries;
    let comb = fv.combinatorial_basis(p, variant)?;
    let (meet_col, join_col) = match variant {
        Variant::Full => (2, 3),
        Variant::Bar => (1, 2),
        Variant::Check => (0, 1),
    };
    let build = |col: usize| -> Result<(Vec<BigRational>, RepVector)> {
        let coeffs = inv.column(col);
        let terms: Vec<(BigRational, &RepVector)> =
            coeffs.iter().cloned().zip(comb.iter()).collect();
        Ok((coeffs, RepVector::combination(&terms)?))
    };
    let (meet_coeffs, meet) = build(meet_col)?;
    let (join_coeffs, join) = build(join_col)?;
    Ok(Recovery { variant, meet_coeffs, join_coeffs, meet, join })
}

/// Recovery for a concrete pair, with `B`, `C` taken from graph distances.
pub fn recover_meet_join(
    g: &Grassmann,
    rep: &Representation,
    x: &Subspace,
    y: &Subspace,
    variant: Variant,
) -> Result<Recovery> {
    let fv = FixVectors::compute(g, rep, x, y)?;
    recover_from_vectors(&g.params, &fv, variant)
}

/// `(q^i+1)(x̂+ŷ) - 2q^i (x∩y)^ - 2 (x+y)^`.
pub fn perp_vector(p: &QParams, fv: &FixVectors) -> Result<RepVector> {
    p.check_mid_distance(fv.i)?;
    let qi = p.qp(fv.i as i64);
    let s = fv.sum_xy()?;
    RepVector::combination(&[
        (&qi + BigRational::one(), &s),
        (-(r(2, 1) * &qi), &fv.meet),
        (r(-2, 1), &fv.join),
    ])
}

/// `((q^{i-1}+1)[i](x̂+ŷ) - 2C̄) / [i-1]`, built from combinatorial data only.
pub fn perp_from_combinatorial(p: &QParams, fv: &FixVectors) -> Result<RepVector> {
    p.check_mid_distance(fv.i)?;
    let i = fv.i;
    let denom = p.qr(i - 1);
    let a = (p.qp(i as i64 - 1) + BigRational::one()) * p.qr(i) / &denom;
    let cbar = fv.c_bar(p)?;
    let s = fv.sum_xy()?;
    RepVector::combination(&[(a, &s), (r(-2, 1) / denom, &cbar)])
}

/// `(B_xy - B_yx - ζ(x̂-ŷ), C_xy - C_yx - ξ(x̂-ŷ))`; both vanish.
pub fn balanced_residuals(
    g: &Grassmann,
    rep: &Representation,
    x: &Subspace,
    y: &Subspace,
) -> Result<(RepVector, RepVector)> {
    let i = g.distance(x, y)?;
    let (zeta, xi) = balance_constants(&g.params, i)?;
    let (bxy, cxy) = bc_vectors(g, rep, x, y)?;
    let (byx, cyx) = bc_vectors(g, rep, y, x)?;
    let diff = rep.hat(x).sub(&rep.hat(y))?;
    let one = BigRational::one;
    let rb = RepVector::combination(&[(one(), &bxy), (-one(), &byx), (-zeta, &diff)])?;
    let rc = RepVector::combination(&[(one(), &cxy), (-one(), &cyx), (-xi, &diff)])?;
    Ok((rb, rc))
}

/// For the element swapping `x` and `y`: `x̂-ŷ` is negated while `x̂+ŷ`,
/// `(x∩y)^`, `(x+y)^`, `B̄` and `C̄` are fixed.
pub fn swap_eigen_check(g: &Grassmann, fv: &FixVectors, x: &Subspace, y: &Subspace) -> Result<bool> {
    let sigma = g.swap_element(x, y)?;
    if g.space.gl_apply(&sigma, x)? != *y || g.space.gl_apply(&sigma, y)? != *x {
        return Ok(false);
    }
    let perm = g.space.point_permutation(&sigma)?;
    let diff = fv.x.sub(&fv.y)?;
    if diff.permute(&perm)? != diff.scale(-1)? {
        return Ok(false);
    }
    let p = &g.params;
    for v in [fv.sum_xy()?, fv.meet.clone(), fv.join.clone(), fv.b_bar(p)?, fv.c_bar(p)?] {
        if v.permute(&perm)? != v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Rank of a vector family, computed from its Gram matrix.
pub fn gram_rank(rep: &Representation, vs: &[RepVector]) -> Result<usize> {
    let refs: Vec<&RepVector> = vs.iter().collect();
    let g = rep.gram(&refs)?;
    let flat: Vec<i128> = g.into_iter().flatten().collect();
    Ok(RatMatrix::from_ints(vs.len(), vs.len(), &flat)?.rank())
}

/// `count` pairs at distance `i`, seeded consecutively from `seed`.
pub fn witness_pairs(g: &Grassmann, i: usize, count: usize, seed: u64) -> Result<Vec<(Subspace, Subspace)>> {
    (0..count as u64)
        .map(|j| g.witness_pair(i, seed.wrapping_add(j)))
        .collect()
}

fn rat_pair(v: &BigRational) -> Value {
    json!([v.numer().to_string(), v.denom().to_string()])
}

fn matrix_json(m: &RatMatrix) -> Value {
    Value::Array(m.entries().iter().map(rat_pair).collect())
}

fn params_json(p: &QParams) -> Value {
    json!({"q": p.q, "n": p.n, "k": p.k})
}

impl GramTable {
    /// Entries are row-major `[numerator, denominator]` pairs as decimal strings.
    pub fn to_json(&self, p: &QParams) -> Value {
        json!({
            "params": params_json(p),
            "i": self.i,
            "kind": self.kind.name(),
            "labels": self.col_labels,
            "row_labels": self.row_labels,
            "shape": [self.entries.rows(), self.entries.cols()],
            "entries": matrix_json(&self.entries),
        })
    }
}

impl TransitionMatrix {
    pub fn to_json(&self, p: &QParams) -> Value {
        let mut v = json!({
            "params": params_json(p),
            "i": self.i,
            "kind": format!("transition/{}/{}", self.variant.name(), self.direction.name()),
            "labels": self.to_labels(),
            "row_labels": self.from_labels(),
            "shape": [self.entries.rows(), self.entries.cols()],
            "entries": matrix_json(&self.entries),
        });
        if let Ok(d) = self.entries.det() {
            v["det"] = rat_pair(&d);
        }
        v
    }
}

/// `num/den` or `num` when integral.
pub fn rat_string(v: &BigRational) -> String {
    if v.is_integer() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
