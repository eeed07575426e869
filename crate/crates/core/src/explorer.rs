//! Diagnostics for graphs that claim the intersection array of `J_q(n,k)`.
//!
//! Everything here works from BFS distances alone. The normalized `θ_1`
//! representation `ρ` has `<ρ(a), ρ(b)> = w_{∂(a,b)}` with `w` the cosine
//! table, which is enough to evaluate the vectors that imitate `(x∩y)^` and
//! `(x+y)^` against any vertex.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Write};
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::fix::rat_string;
use crate::graph::{AdjacencyGraph, UNREACHED};
use crate::grassmann::sample_ids;
use crate::qarith::QParams;

/// A graph read from disk together with its claimed parameters.
#[derive(Clone, Debug)]
pub struct ExternalGraph {
    pub params: QParams,
    pub adjacency: AdjacencyGraph,
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub degree: i128,
    pub edges_checked_a1: usize,
    pub sampled_roots: Vec<u32>,
}

/// `w_i = <ρ(a), ρ(b)>` for `∂(a,b) = i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CosineTable {
    pub w: Vec<i128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Problem1Report {
    pub i: usize,
    /// `[n][k-i-l] - [k-i][k]` for `0 <= l <= k-i`.
    pub allowed: Vec<i128>,
    /// Observed value -> number of vertices, values as `num/den` strings.
    pub spectrum: BTreeMap<String, usize>,
    pub all_allowed: bool,
    #[serde(skip)]
    pub values: Vec<BigRational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartnerClass {
    pub value: String,
    pub size: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Problem2Report {
    pub classes: Vec<PartnerClass>,
    /// `quotient[a][b]`: neighbours in class `b` of a vertex of class `a`,
    /// `None` when not constant over class `a`.
    pub quotient: Vec<Vec<Option<usize>>>,
    pub equitable: bool,
    #[serde(skip)]
    pub class_of: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Problem3Report {
    pub set_size: usize,
    pub geodesically_closed: bool,
    pub diameter: usize,
    pub expected_diameter: usize,
    pub passes: bool,
}

fn to_rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Cosine table from `c_i w_{i-1} + a_i w_i + b_i w_{i+1} = θ_1 w_i` with
/// `w_0 = q^k[k][n-k]`; must agree with `[n][k-i] - [k]^2`.
pub fn cosine_table(p: &QParams) -> Result<CosineTable> {
    let (n, k) = (p.n, p.k);
    let theta = p.theta1();
    let mut w: Vec<i128> = vec![p.qpow(k as u32)? * p.qint(k) * p.qint(n - k)];
    for i in 0..k {
        let prev = if i == 0 { 0 } else { w[i - 1] };
        let num = (theta - p.a[i]) * w[i] - p.c[i] * prev;
        if num % p.b[i] != 0 {
            return Err(Error::InexactDivision(format!("cosine w_{} not integral", i + 1)));
        }
        w.push(num / p.b[i]);
    }
    let last = p.c[k] * w[k - 1] + p.a[k] * w[k] - theta * w[k];
    if last != 0 {
        return Err(Error::Validation(format!("cosine recurrence residual {last} at i = k")));
    }
    for (i, &wi) in w.iter().enumerate() {
        let closed = p.qint(n) * p.qint(k - i) - p.qint(k) * p.qint(k);
        if wi != closed {
            return Err(Error::Validation(format!(
                "cosine w_{i} = {wi} differs from closed form {closed}"
            )));
        }
    }
    Ok(CosineTable { w })
}

/// Coefficients of the vectors imitating `(x∩y)^` and `(x+y)^` over
/// `ρ(x'), ρ(y'), B_{x'y'}, C_{x'y'}`.
pub fn rho_meet_join_coeffs(p: &QParams, i: usize) -> Result<([BigRational; 4], [BigRational; 4])> {
    p.check_mid_distance(i)?;
    let (n, k) = (p.n, p.k);
    let (ki, ii) = (k as i64, i as i64);
    let b = |m: usize| p.qr(m);
    let qe = |e: i64| p.qp(e);
    let nk = b(n - 2 * k);
    let im1 = b(i - 1);
    let one = BigRational::one;
    let meet = [
        b(k - i) * b(n - k - 1) / (qe(ki - 1) * &nk),
        b(k - i) / (qe(ki - ii + 1) * &im1 * &nk),
        -one() / (qe(ki + ii) * &nk),
        -b(k - i) / (qe(ki) * &im1 * &nk),
    ];
    let join = [
        -b(k - 1) * b(n - k - i) / (qe(ki - ii - 1) * &nk),
        -b(n - k - i) / (qe(ki - 2 * ii + 1) * &im1 * &nk),
        one() / (qe(ki) * &nk),
        b(n - k - i) / (qe(ki - ii) * &im1 * &nk),
    ];
    Ok((meet, join))
}

/// `[n][k-i-l] - [k-i][k]` for `l = 0..=k-i`.
pub fn allowed_values(p: &QParams, i: usize) -> Vec<i128> {
    let (n, k) = (p.n, p.k);
    (0..=k - i)
        .map(|l| p.qint(n) * p.qint(k - i - l) - p.qint(k - i) * p.qint(k))
        .collect()
}

impl ExternalGraph {
    pub fn load(path: &Path) -> Result<Self> {
        let f = File::open(path)?;
        Self::from_reader(BufReader::new(f))
    }

    pub fn from_reader<R: std::io::BufRead>(r: R) -> Result<Self> {
        let ((q, n, k), adjacency) = AdjacencyGraph::read_text(r)?;
        let params = QParams::new(q, n, k)?;
        Ok(ExternalGraph { params, adjacency })
    }

    pub fn new(params: QParams, adjacency: AdjacencyGraph) -> Self {
        ExternalGraph { params, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.vertex_count()
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> Result<()> {
        let p = &self.params;
        self.adjacency.write_text(out, (p.q, p.n, p.k))
    }

    /// Structure, connectivity, regularity, vertex count, `a_1` on every
    /// edge and `b_i`, `c_i` from the BFS layers of `roots` sampled roots.
    pub fn validate(&self, roots: usize, seed: u64, strategy: Strategy) -> Result<ValidationReport> {
        let g = &self.adjacency;
        let p = &self.params;
        g.check_simple_undirected()?;
        let expected: i128 = p.sphere_sizes()?.iter().sum();
        if g.vertex_count() as i128 != expected {
            return Err(Error::Validation(format!(
                "{} vertices, intersection array requires {expected}",
                g.vertex_count()
            )));
        }
        let nv = g.vertex_count() as u32;
        for v in 0..nv {
            if g.degree(v) as i128 != p.kappa {
                return Err(Error::Validation(format!(
                    "vertex {v} has degree {}, expected {}",
                    g.degree(v),
                    p.kappa
                )));
            }
        }
        if g.bfs(0).contains(&UNREACHED) {
            return Err(Error::Validation("graph is disconnected".into()));
        }
        let a1 = p.a[1] as usize;
        let bad = strategy.map_range(nv as usize, |v| {
            let v = v as u32;
            let nv_list = g.neighbors(v);
            nv_list
                .iter()
                .filter(|&&w| w > v)
                .find(|&&w| sorted_common(nv_list, g.neighbors(w)) != a1)
                .map(|&w| (v, w))
        });
        if let Some((v, w)) = bad.into_iter().flatten().next() {
            return Err(Error::Validation(format!(
                "edge {v}-{w} has {} common neighbours, expected a_1 = {a1}",
                sorted_common(g.neighbors(v), g.neighbors(w))
            )));
        }
        let sampled = sample_ids(nv as usize, roots, seed);
        let errs = strategy.map(&sampled, |&r| self.check_layers(r));
        if let Some(e) = errs.into_iter().find_map(|e| e.err()) {
            return Err(e);
        }
        Ok(ValidationReport {
            vertex_count: nv as usize,
            degree: p.kappa,
            edges_checked_a1: g.edge_count(),
            sampled_roots: sampled,
        })
    }

    fn check_layers(&self, root: u32) -> Result<()> {
        let g = &self.adjacency;
        let p = &self.params;
        let d = g.bfs(root);
        let sizes = p.sphere_sizes()?;
        let mut counts = vec![0i128; p.k + 1];
        for (v, &dv) in d.iter().enumerate() {
            let dv = dv as usize;
            if dv > p.k {
                return Err(Error::Validation(format!(
                    "vertex {v} at distance {dv} from {root} exceeds diameter {}",
                    p.k
                )));
            }
            counts[dv] += 1;
            let (mut c, mut b) = (0i128, 0i128);
            for &w in g.neighbors(v as u32) {
                let dw = d[w as usize] as usize;
                if dw + 1 == dv {
                    c += 1;
                } else if dw == dv + 1 {
                    b += 1;
                }
            }
            if b != p.b[dv] || c != p.c[dv] {
                return Err(Error::Validation(format!(
                    "from root {root}: vertex {v} at distance {dv} has (b, c) = ({b}, {c}), \
                     expected ({}, {})",
                    p.b[dv], p.c[dv]
                )));
            }
        }
        if counts != sizes {
            return Err(Error::Validation(format!(
                "sphere sizes around {root} are {counts:?}, expected {sizes:?}"
            )));
        }
        Ok(())
    }

    /// Vertex 0 and the first vertex at distance `i` from it.
    pub fn pair_at_distance(&self, i: usize) -> Result<(u32, u32)> {
        let d = self.adjacency.bfs(0);
        d.iter()
            .position(|&x| x as usize == i)
            .map(|y| (0, y as u32))
            .ok_or_else(|| Error::Validation(format!("no vertex at distance {i} from 0")))
    }

    /// `(B, C)`: neighbours of `x` at distance `i+1` resp. `i-1` from `y`.
    pub fn bc_sets(&self, x: u32, y: u32) -> Result<(usize, Vec<u32>, Vec<u32>)> {
        let dy = self.adjacency.bfs(y);
        let i = dy[x as usize] as usize;
        self.params.check_mid_distance(i)?;
        let mut b = Vec::new();
        let mut c = Vec::new();
        for &z in self.adjacency.neighbors(x) {
            let d = dy[z as usize] as usize;
            if d == i + 1 {
                b.push(z);
            } else if d + 1 == i {
                c.push(z);
            }
        }
        Ok((i, b, c))
    }

    /// `<ρ(x'∩y'), ρ(z')>` for every vertex `z'`, and membership of each value
    /// in the allowed set.
    pub fn problem1(&self, x: u32, y: u32, strategy: Strategy) -> Result<Problem1Report> {
        let p = &self.params;
        let nv = self.vertex_count();
        if x as usize >= nv || y as usize >= nv {
            return Err(Error::InvalidParams("pair vertex out of range".into()));
        }
        let (i, b, c) = self.bc_sets(x, y)?;
        let w = cosine_table(p)?.w;
        let (coeffs, _) = rho_meet_join_coeffs(p, i)?;
        let layer_sum = |members: &[u32]| -> Result<Vec<i128>> {
            let dists = strategy.map(members, |&m| self.adjacency.bfs(m));
            let mut acc = vec![0i128; nv];
            for d in dists {
                for (a, &dz) in acc.iter_mut().zip(&d) {
                    if dz == UNREACHED {
                        return Err(Error::Validation("graph is disconnected".into()));
                    }
                    *a += w[dz as usize];
                }
            }
            Ok(acc)
        };
        let sx = layer_sum(&[x])?;
        let sy = layer_sum(&[y])?;
        let sb = layer_sum(&b)?;
        let sc = layer_sum(&c)?;
        let values: Vec<BigRational> = (0..nv)
            .map(|z| {
                &coeffs[0] * to_rat(sx[z])
                    + &coeffs[1] * to_rat(sy[z])
                    + &coeffs[2] * to_rat(sb[z])
                    + &coeffs[3] * to_rat(sc[z])
            })
            .collect();
        let allowed = allowed_values(p, i);
        let allowed_rat: Vec<BigRational> = allowed.iter().map(|&a| to_rat(a)).collect();
        let mut spectrum = BTreeMap::new();
        for v in &values {
            *spectrum.entry(rat_string(v)).or_insert(0) += 1;
        }
        let all_allowed = values.iter().all(|v| allowed_rat.contains(v));
        Ok(Problem1Report { i, allowed, spectrum, all_allowed, values })
    }

    /// Classes of equal problem-1 value and whether they form an equitable
    /// partition. Classes are ordered by decreasing value.
    pub fn problem2(&self, values: &[BigRational]) -> Result<Problem2Report> {
        let nv = self.vertex_count();
        if values.len() != nv {
            return Err(Error::DimensionMismatch(values.len(), nv));
        }
        let mut distinct: Vec<&BigRational> = values.iter().collect();
        distinct.sort_unstable_by(|a, b| b.cmp(a));
        distinct.dedup();
        let class_of: Vec<usize> = values
            .iter()
            .map(|v| distinct.iter().position(|d| *d == v).expect("value present"))
            .collect();
        let nc = distinct.len();
        let mut sizes = vec![0usize; nc];
        for &c in &class_of {
            sizes[c] += 1;
        }
        let mut quotient: Vec<Vec<Option<usize>>> = vec![vec![None; nc]; nc];
        let mut seen = vec![false; nc];
        let mut equitable = true;
        let mut counts = vec![0usize; nc];
        for v in 0..nv {
            counts.iter_mut().for_each(|c| *c = 0);
            for &w in self.adjacency.neighbors(v as u32) {
                counts[class_of[w as usize]] += 1;
            }
            let a = class_of[v];
            if !seen[a] {
                seen[a] = true;
                quotient[a] = counts.iter().map(|&c| Some(c)).collect();
                continue;
            }
            for (b, &cnt) in counts.iter().enumerate() {
                if quotient[a][b].is_some_and(|q| q != cnt) {
                    quotient[a][b] = None;
                    equitable = false;
                }
            }
        }
        let classes = distinct
            .iter()
            .zip(&sizes)
            .map(|(v, &size)| PartnerClass { value: rat_string(v), size })
            .collect();
        Ok(Problem2Report { classes, quotient, equitable, class_of })
    }

    /// Whether `set` contains every vertex of every shortest path between
    /// two of its members, and whether its diameter is `expected_diameter`.
    pub fn problem3(&self, set: &[u32], expected_diameter: usize, strategy: Strategy) -> Result<Problem3Report> {
        if set.is_empty() {
            return Err(Error::InvalidParams("geodesic closure needs a nonempty set".into()));
        }
        let nv = self.vertex_count();
        let mut member = vec![false; nv];
        for &s in set {
            if s as usize >= nv {
                return Err(Error::InvalidParams(format!("vertex {s} out of range")));
            }
            member[s as usize] = true;
        }
        let depth = expected_diameter.min(UNREACHED as usize - 1) as u8;
        let per_root = |bound: u8| {
            strategy.map(set, |&a| {
                let d = self.adjacency.bfs_bounded(a, bound);
                let far = set.iter().map(|&b| d[b as usize]).max().unwrap_or(0);
                (far, far == UNREACHED || self.geodesics_stay_inside(&d, &member))
            })
        };
        let mut results = per_root(depth);
        if results.iter().any(|&(far, _)| far == UNREACHED) {
            results = per_root(UNREACHED - 1);
        }
        if results.iter().any(|&(far, _)| far == UNREACHED) {
            return Err(Error::Validation("set spans several components".into()));
        }
        let diameter = results.iter().map(|&(far, _)| far as usize).max().unwrap_or(0);
        let closed = results.iter().all(|&(_, ok)| ok);
        Ok(Problem3Report {
            set_size: set.len(),
            geodesically_closed: closed,
            diameter,
            expected_diameter,
            passes: closed && diameter == expected_diameter,
        })
    }

    /// With `d` the distances from a member `a`, marks every vertex lying on
    /// a shortest path from `a` to a member, walking layers outward-in.
    fn geodesics_stay_inside(&self, d: &[u8], member: &[bool]) -> bool {
        let far = member
            .iter()
            .zip(d)
            .filter(|(&m, _)| m)
            .map(|(_, &x)| x)
            .max()
            .unwrap_or(0);
        let mut layers: Vec<Vec<u32>> = vec![Vec::new(); far as usize + 1];
        for (v, &dv) in d.iter().enumerate() {
            if dv <= far {
                layers[dv as usize].push(v as u32);
            }
        }
        let mut on_path = member.to_vec();
        for layer in (0..far as usize).rev() {
            for &v in &layers[layer] {
                if on_path[v as usize] {
                    continue;
                }
                let reaches = self
                    .adjacency
                    .neighbors(v)
                    .iter()
                    .any(|&w| d[w as usize] as usize == layer + 1 && on_path[w as usize]);
                if reaches {
                    on_path[v as usize] = true;
                }
            }
        }
        on_path.iter().zip(member).all(|(&on, &m)| !on || m)
    }
}

fn sorted_common(a: &[u32], b: &[u32]) -> usize {
    let (mut i, mut j, mut n) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                n += 1;
                i += 1;
                j += 1;
            }
        }
    }
    n
}

/// Members of the class whose value is the largest allowed one (`l = 0`).
pub fn top_class_members(report: &Problem1Report) -> Vec<u32> {
    let top = to_rat(report.allowed[0]);
    report
        .values
        .iter()
        .enumerate()
        .filter(|(_, v)| **v == top)
        .map(|(z, _)| z as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fix::{transition, Direction, Variant};

    fn cycle(n: u32) -> AdjacencyGraph {
        AdjacencyGraph::from_lists((0..n).map(|v| vec![(v + 1) % n, (v + n - 1) % n]).collect())
    }

    #[test]
    fn cosine_examples() {
        let p = QParams::new(2, 7, 3).unwrap();
        assert_eq!(cosine_table(&p).unwrap().w, vec![840, 332, 78, -49]);
        for (q, n, k) in [(2, 9, 4), (3, 7, 3), (2, 11, 5), (4, 7, 3)] {
            let p = QParams::new(q, n, k).unwrap();
            let w = cosine_table(&p).unwrap().w;
            assert_eq!(w.len(), k + 1);
        }
    }

    #[test]
    fn rho_coeffs_match_transition_columns() {
        for (q, n, k, i) in [(2, 7, 3, 2), (2, 9, 4, 2), (2, 9, 4, 3), (3, 7, 3, 2), (3, 11, 5, 4)] {
            let p = QParams::new(q, n, k).unwrap();
            let (m, j) = rho_meet_join_coeffs(&p, i).unwrap();
            let inv = transition(Direction::CombToGeo, Variant::Full, &p, i).unwrap().entries;
            assert_eq!(inv.column(2), m.to_vec());
            assert_eq!(inv.column(3), j.to_vec());
        }
        let p = QParams::new(2, 7, 3).unwrap();
        let (m, j) = rho_meet_join_coeffs(&p, 2).unwrap();
        let s = |v: &[BigRational]| v.iter().map(rat_string).collect::<Vec<_>>();
        assert_eq!(s(&m), vec!["7/4", "1/4", "-1/32", "-1/8"]);
        assert_eq!(s(&j), vec!["-9", "-3", "1/8", "3/2"]);
    }

    #[test]
    fn allowed_set_at_smallest_point() {
        let p = QParams::new(2, 7, 3).unwrap();
        assert_eq!(allowed_values(&p, 2), vec![120, -7]);
    }

    #[test]
    fn closure_on_small_graphs() {
        let p = QParams::new(2, 7, 3).unwrap();
        let g = ExternalGraph::new(p, cycle(8));
        let s = Strategy::Sequential;
        let r = g.problem3(&[3], 0, s).unwrap();
        assert!(r.passes);
        let r = g.problem3(&[3, 4], 1, s).unwrap();
        assert!(r.passes);
        // 0 and 2 are joined by the path through 1 only.
        let r = g.problem3(&[0, 2], 2, s).unwrap();
        assert!(!r.geodesically_closed);
        let r = g.problem3(&[0, 1, 2], 2, s).unwrap();
        assert!(r.passes);
        // Antipodal pair: both halves of the cycle are geodesics.
        let r = g.problem3(&[0, 1, 2, 3, 4], 4, s).unwrap();
        assert!(!r.geodesically_closed);
        assert_eq!(r.diameter, 4);
        let r = g.problem3(&[0, 3], 1, s).unwrap();
        assert_eq!(r.diameter, 3);
        assert!(!r.passes);
        assert!(g.problem3(&[], 0, s).is_err());
    }

    #[test]
    fn equitable_check_on_cycle() {
        let p = QParams::new(2, 7, 3).unwrap();
        let g = ExternalGraph::new(p, cycle(6));
        let alt: Vec<BigRational> = (0..6).map(|v| to_rat(v % 2)).collect();
        let rep = g.problem2(&alt).unwrap();
        assert!(rep.equitable);
        assert_eq!(rep.quotient, vec![vec![Some(0), Some(2)], vec![Some(2), Some(0)]]);
        let lone: Vec<BigRational> = (0..6).map(|v| to_rat((v == 0) as i128)).collect();
        assert!(!g.problem2(&lone).unwrap().equitable);
    }

    #[test]
    fn validation_rejects_wrong_vertex_count() {
        let p = QParams::new(2, 7, 3).unwrap();
        let g = ExternalGraph::new(p, cycle(8));
        assert!(matches!(g.validate(1, 0, Strategy::Sequential), Err(Error::Validation(_))));
    }
}
