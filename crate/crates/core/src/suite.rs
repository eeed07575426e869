//! The `verify` check list: every identity the library implements, run
//! against one parameter triple and reported check by check.
//!
//! Global mode enumerates the whole vertex set; sampled mode, used when
//! `gauss_binom(n,k,q)` exceeds the cap, works from random and witness pairs.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclid::{predicted_inner, RepVector, Representation};
use crate::exec::Strategy;
use crate::explorer::{cosine_table, rho_meet_join_coeffs, top_class_members, ExternalGraph};
use crate::field::Field;
use crate::fix::{
    balanced_residuals, gram_rank, gram_table, gram_table_empirical, m_inverse,
    perp_from_combinatorial, perp_vector, predicted_transition_det, recover_from_vectors,
    swap_eigen_check, transition, witness_pairs, Direction, FixVectors, GramKind, Variant,
};
use crate::grassmann::{Grassmann, GrassmannGraph, DEFAULT_VERTEX_CAP};
use crate::qarith::{gauss_binom, QParams};
use crate::subspace::PointId;

/// Largest `[n]` for which ranks are computed with exact big-integer
/// elimination; above it the modular lower bound is combined with `Σ ŝ = 0`.
pub const EXACT_RANK_LIMIT: usize = 255;

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub seed: u64,
    pub sample: usize,
    pub cap: u128,
    pub strategy: Strategy,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 1, sample: 20, cap: DEFAULT_VERTEX_CAP, strategy: Strategy::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Global,
    Sampled,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: u128,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub params: QParams,
    pub mode: Mode,
    pub seed: u64,
    pub sample: usize,
    pub checks: Vec<CheckResult>,
    pub all_passed: bool,
}

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, ok: impl Into<String>, fail: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(ok.into())
    } else {
        Err(fail())
    }
}

struct Runner {
    checks: Vec<CheckResult>,
}

impl Runner {
    fn run(&mut self, name: impl Into<String>, f: impl FnOnce() -> Result<Outcome>) {
        let start = Instant::now();
        let (passed, detail) = match f() {
            Ok(Ok(d)) => (true, d),
            Ok(Err(d)) => (false, d),
            Err(e) => (false, format!("error: {e}")),
        };
        self.checks.push(CheckResult {
            name: name.into(),
            passed,
            detail,
            millis: start.elapsed().as_millis(),
        });
    }
}

pub fn run_verify(params: QParams, cfg: &VerifyConfig) -> Result<VerifyReport> {
    let count = params.vertex_count()? as u128;
    let mode = if count <= cfg.cap { Mode::Global } else { Mode::Sampled };
    let g = Grassmann::new(params.clone())?;
    let rep = Representation::for_grassmann(&g);
    let mut r = Runner { checks: Vec::new() };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let p = &g.params;
    let sample = cfg.sample.max(1);

    parameter_checks(&mut r, p);
    field_checks(&mut r, p);
    lattice_checks(&mut r, &g, &mut rng, sample, mode);
    graph_checks(&mut r, &g, &mut rng, sample);
    representation_checks(&mut r, &g, &rep, &mut rng, sample);
    for i in 2..p.k {
        fixed_space_checks(&mut r, &g, &rep, i, sample, cfg.seed);
    }
    explorer_checks(&mut r, p);
    if mode == Mode::Global {
        global_checks(&mut r, &g, &rep, cfg, &mut rng, sample);
    }

    let all_passed = r.checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        params: params.clone(),
        mode,
        seed: cfg.seed,
        sample,
        checks: r.checks,
        all_passed,
    })
}

fn parameter_checks(r: &mut Runner, p: &QParams) {
    r.run("parameters: b_i + a_i + c_i = kappa", || {
        let bad = (0..=p.k).find(|&i| p.b[i] + p.a[i] + p.c[i] != p.kappa);
        Ok(ensure(bad.is_none(), format!("kappa = {}", p.kappa), || format!("fails at i = {bad:?}")))
    });
    r.run("parameters: b_0 = kappa, c_1 = 1, a_0 = 0", || {
        Ok(ensure(p.b[0] == p.kappa && p.c[1] == 1 && p.a[0] == 0, "ok", || {
            format!("b_0 = {}, c_1 = {}, a_0 = {}", p.b[0], p.c[1], p.a[0])
        }))
    });
    r.run("parameters: eigenvalues strictly decreasing from kappa", || {
        let dec = p.theta.windows(2).all(|w| w[0] > w[1]);
        Ok(ensure(dec && p.theta[0] == p.kappa, format!("theta = {:?}", p.theta), || {
            format!("theta = {:?}", p.theta)
        }))
    });
    r.run("parameters: theta_1 = q^2[k-1][n-k-1] - 1", || {
        let v = p.qpow(2)? * p.qint(p.k - 1) * p.qint(p.n - p.k - 1) - 1;
        Ok(ensure(v == p.theta1(), format!("theta_1 = {v}"), || {
            format!("{v} vs {}", p.theta1())
        }))
    });
    r.run("parameters: sphere sizes sum to the Gaussian binomial", || {
        let s: i128 = p.sphere_sizes()?.iter().sum();
        let gb = gauss_binom(p.n as i64, p.k as i64, p.q)?;
        Ok(ensure(s == gb, format!("{s}"), || format!("{s} vs {gb}")))
    });
}

fn field_checks(r: &mut Runner, p: &QParams) {
    r.run("field: axioms by exhaustive table check", || {
        let f = Field::new(p.q)?;
        Ok(f.check_axioms().map(|_| format!("F_{}", p.q)))
    });
}

fn lattice_checks(r: &mut Runner, g: &Grassmann, rng: &mut ChaCha8Rng, sample: usize, mode: Mode) {
    let sp = &g.space;
    let n = g.params.n;
    r.run("lattice: point enumeration count = [n]", || {
        let c = sp.enumerate_subspaces(1)?.count();
        Ok(ensure(c == sp.point_count(), format!("{c}"), || format!("{c}")))
    });
    if mode == Mode::Global {
        r.run("lattice: k-subspace enumeration count = Gaussian binomial", || {
            let c = sp.enumerate_subspaces(g.params.k)?.count() as i128;
            let gb = g.params.vertex_count()?;
            Ok(ensure(c == gb, format!("{c}"), || format!("{c} vs {gb}")))
        });
    }
    let pairs: Vec<_> = (0..sample * 5)
        .map(|_| {
            let du = rng.gen_range(0..=n);
            let dv = rng.gen_range(0..=n);
            (sp.random_subspace(du, rng), sp.random_subspace(dv, rng))
        })
        .collect();
    r.run("lattice: modularity and absorption on random pairs", || {
        for (u, v) in &pairs {
            let m = sp.meet(u, v)?;
            let j = sp.join(u, v)?;
            if u.dim() + v.dim() != m.dim() + j.dim() {
                return Ok(Err(format!("modularity fails for {u} and {v}")));
            }
            if sp.meet(u, &j)? != *u || sp.join(u, &m)? != *u {
                return Ok(Err(format!("absorption fails for {u} and {v}")));
            }
        }
        Ok(Ok(format!("{} pairs", pairs.len())))
    });
    r.run("lattice: |omega(u)| = [dim u] and omega(u∩v) = omega(u) ∩ omega(v)", || {
        for (u, v) in &pairs {
            let ou = sp.omega(u);
            if ou.len() as i128 != g.params.qint(u.dim()) {
                return Ok(Err(format!("|omega| wrong for {u}")));
            }
            let ov = sp.omega(v);
            let both: Vec<PointId> = ou.iter().filter(|s| ov.binary_search(s).is_ok()).copied().collect();
            if both != sp.omega(&sp.meet(u, v)?) {
                return Ok(Err(format!("omega of meet wrong for {u}, {v}")));
            }
        }
        Ok(Ok(format!("{} pairs", pairs.len())))
    });
    r.run("lattice: GL action preserves dimension and distance", || {
        for (u, v) in pairs.iter().take(sample) {
            let sigma = sp.gl_random_with(rng);
            let su = sp.gl_apply(&sigma, u)?;
            let sv = sp.gl_apply(&sigma, v)?;
            if su.dim() != u.dim() || sp.meet(&su, &sv)?.dim() != sp.meet(u, v)?.dim() {
                return Ok(Err(format!("GL action changed dimensions for {u}, {v}")));
            }
        }
        Ok(Ok("ok".into()))
    });
}

fn graph_checks(r: &mut Runner, g: &Grassmann, rng: &mut ChaCha8Rng, sample: usize) {
    let p = &g.params;
    let xs: Vec<_> = (0..sample.min(10)).map(|_| g.random_vertex(rng)).collect();
    r.run("graph: neighbour count = kappa, each at distance 1", || {
        for x in &xs {
            let ns = g.neighbors(x)?;
            if ns.len() as i128 != p.kappa {
                return Ok(Err(format!("{} neighbours of {x}", ns.len())));
            }
            for z in &ns {
                if g.distance(x, z)? != 1 {
                    return Ok(Err(format!("{z} not adjacent to {x}")));
                }
            }
        }
        Ok(Ok(format!("{} vertices", xs.len())))
    });
    r.run("graph: intersection numbers reproduced by neighbour profiles", || {
        for h in 0..=p.k {
            for s in 0..sample.min(10) as u64 {
                let (x, y) = g.witness_pair(h, rng.gen::<u64>() ^ s)?;
                let prof = g.neighbor_distance_profile(&x, &y)?;
                let b = if h < p.k { prof[h + 1] as i128 } else { 0 };
                let c = if h > 0 { prof[h - 1] as i128 } else { 0 };
                let a = prof[h] as i128;
                if (b, a, c) != (p.b[h], p.a[h], p.c[h]) {
                    return Ok(Err(format!("distance {h}: (b, a, c) = ({b}, {a}, {c})")));
                }
            }
        }
        Ok(Ok(format!("b = {:?}, a = {:?}, c = {:?}", p.b, p.a, p.c)))
    });
    for i in 2..p.k {
        r.run(format!("graph: |B| = b_i, |C| = c_i, x∩y ⊆ z ⊆ x+y for z in C (i = {i})"), || {
            for s in 0..sample.min(5) as u64 {
                let (x, y) = g.witness_pair(i, rng.gen::<u64>() ^ s)?;
                let (b, c) = g.bc_sets(&x, &y)?;
                if b.len() as i128 != p.b[i] || c.len() as i128 != p.c[i] {
                    return Ok(Err(format!("|B| = {}, |C| = {}", b.len(), c.len())));
                }
                let ctx = g.pair_context(&x, &y)?;
                if c.iter().any(|z| !g.space.contains(z, &ctx.meet_xy) || !g.space.contains(&ctx.join_xy, z)) {
                    return Ok(Err("C member outside the interval".into()));
                }
            }
            Ok(Ok(format!("|B| = {}, |C| = {}", p.b[i], p.c[i])))
        });
    }
    r.run("graph: B/C sets commute with the GL action", || {
        let i = 2;
        let (x, y) = g.witness_pair(i, rng.gen())?;
        let sigma = g.space.gl_random_with(rng);
        let (b, c) = g.bc_sets(&x, &y)?;
        let (sb, sc) = g.bc_sets(&g.space.gl_apply(&sigma, &x)?, &g.space.gl_apply(&sigma, &y)?)?;
        let map = |v: &[crate::Subspace]| -> Result<Vec<crate::Subspace>> {
            let mut out = v.iter().map(|z| g.space.gl_apply(&sigma, z)).collect::<Result<Vec<_>>>()?;
            out.sort();
            Ok(out)
        };
        Ok(ensure(map(&b)? == sb && map(&c)? == sc, "ok", || "sets differ".into()))
    });
    r.run("graph: orbit-partition cells are a partition with q-integer sizes", || {
        for i in 1..=p.k {
            let (x, y) = g.witness_pair(i, rng.gen())?;
            let part = g.stab_partition_p1(&x, &y)?;
            if !part.is_partition_of(g.space.point_count()) {
                return Ok(Err(format!("not a partition at distance {i}")));
            }
            let (n, k) = (p.n, p.k);
            let qi = |m: usize| p.qint(m) as usize;
            let expect = if i == k {
                // x ∩ y = 0
                if 2 * k == n {
                    vec![qi(k), qi(k), qi(n) - 2 * qi(k)]
                } else {
                    vec![qi(k), qi(k), qi(2 * k) - 2 * qi(k), qi(n) - qi(2 * k)]
                }
            } else {
                vec![
                    qi(k - i),
                    qi(k) - qi(k - i),
                    qi(k) - qi(k - i),
                    qi(k + i) - 2 * qi(k) + qi(k - i),
                    qi(n) - qi(k + i),
                ]
            };
            if part.sizes() != expect {
                return Ok(Err(format!("distance {i}: sizes {:?}, expected {expect:?}", part.sizes())));
            }
        }
        Ok(Ok("ok".into()))
    });
}

fn rank_of(rep: &Representation, vs: &[&RepVector]) -> (usize, &'static str) {
    if rep.scale() as usize <= EXACT_RANK_LIMIT {
        (rep.rank(vs), "exact")
    } else {
        (rep.rank_lower_bound(vs), "modular lower bound")
    }
}

fn representation_checks(r: &mut Runner, g: &Grassmann, rep: &Representation, rng: &mut ChaCha8Rng, sample: usize) {
    let p = &g.params;
    let qn = rep.scale();
    let points: Vec<RepVector> = g.space.points().map(|s| rep.point_hat(s)).collect();
    r.run("representation: <ŝ,ŝ> = [n]-1 and <ŝ,t̂> = -1", || {
        let m = points.len().min(64);
        for a in 0..m {
            for b in 0..m {
                let want = if a == b { qn - 1 } else { -1 };
                if rep.inner(&points[a], &points[b])? != want {
                    return Ok(Err(format!("points {a}, {b}")));
                }
            }
        }
        Ok(Ok(format!("{m} x {m} block")))
    });
    r.run("representation: point vectors sum to zero", || {
        let mut s = rep.zero();
        for v in &points {
            s = s.add(v)?;
        }
        Ok(ensure(s.is_zero(), "ok", || "nonzero sum".into()))
    });
    r.run("representation: rank of point vectors = [n]-1", || {
        let refs: Vec<&RepVector> = points.iter().collect();
        let (rk, how) = rank_of(rep, &refs);
        let rk_minus = rank_of(rep, &refs[1..]).0;
        Ok(ensure(rk == qn as usize - 1 && rk_minus == rk, format!("{rk} ({how})"), || {
            format!("rank {rk}, without one point {rk_minus} ({how})")
        }))
    });
    r.run("representation: kernel of the point map is the constants", || {
        let len = qn as usize;
        let one = BigRational::one();
        let mut cases = vec![vec![one.clone(); len]];
        let mut ind = vec![BigRational::zero(); len];
        ind[rng.gen_range(0..len)] = one.clone();
        cases.push(ind);
        let u = g.space.random_subspace(rng.gen_range(1..p.n), rng);
        let mut om = vec![BigRational::zero(); len];
        for s in g.space.omega(&u) {
            om[s.index()] = one.clone();
        }
        cases.push(om);
        for c in &cases {
            if !rep.kernel_constant_check(c)? {
                return Ok(Err("kernel check failed".into()));
            }
        }
        Ok(Ok(format!("{} coefficient vectors", cases.len())))
    });
    r.run("representation: inner product law [n][h] - [i][j]", || {
        for _ in 0..sample * 10 {
            let du = rng.gen_range(0..=p.n);
            let dv = rng.gen_range(0..=p.n);
            let u = g.space.random_subspace(du, rng);
            let v = g.space.random_subspace(dv, rng);
            let h = g.space.meet(&u, &v)?.dim();
            let got = rep.inner(&rep.hat(&u), &rep.hat(&v))?;
            let want = predicted_inner(p, du, dv, h)?;
            if got != want {
                return Ok(Err(format!("dims ({du}, {dv}, {h}): {got} vs {want}")));
            }
        }
        Ok(Ok(format!("{} pairs", sample * 10)))
    });
    r.run("representation: GL action is an isometry", || {
        for _ in 0..sample {
            let u = g.space.random_subspace(rng.gen_range(1..p.n), rng);
            let sigma = g.space.gl_random_with(rng);
            let perm = g.space.point_permutation(&sigma)?;
            if rep.hat(&u).permute(&perm)? != rep.hat(&g.space.gl_apply(&sigma, &u)?) {
                return Ok(Err(format!("σ(û) ≠ (σu)^ for {u}")));
            }
        }
        Ok(Ok(format!("{sample} elements")))
    });
    r.run("representation: neighbour sum = theta_1 x̂", || {
        for _ in 0..sample.min(10) {
            let x = g.random_vertex(rng);
            if !rep.theta1_residual(g, &x)?.is_zero() {
                return Ok(Err(format!("nonzero residual at {x}")));
            }
        }
        Ok(Ok(format!("theta_1 = {}", p.theta1())))
    });
    r.run("representation: vertex vectors span E", || {
        let m = (2 * qn as usize).max(sample);
        let vs: Vec<RepVector> = (0..m).map(|_| rep.hat(&g.random_vertex(rng))).collect();
        let refs: Vec<&RepVector> = vs.iter().collect();
        let (rk, how) = rank_of(rep, &refs);
        Ok(ensure(rk == qn as usize - 1, format!("rank {rk} of {m} vertices ({how})"), || {
            format!("rank {rk} of {m} vertices ({how})")
        }))
    });
}

fn fixed_space_checks(r: &mut Runner, g: &Grassmann, rep: &Representation, i: usize, sample: usize, seed: u64) {
    let p = &g.params;
    let pairs = match witness_pairs(g, i, sample.min(10), seed.wrapping_mul(31).wrapping_add(i as u64)) {
        Ok(v) => v,
        Err(e) => {
            r.run(format!("fixed space: witness pairs (i = {i})"), || Err(e));
            return;
        }
    };
    let fvs: Vec<FixVectors> = match pairs
        .iter()
        .map(|(x, y)| FixVectors::compute(g, rep, x, y))
        .collect::<Result<Vec<_>>>()
    {
        Ok(v) => v,
        Err(e) => {
            r.run(format!("fixed space: vectors (i = {i})"), || Err(e));
            return;
        }
    };
    for kind in GramKind::ALL {
        r.run(format!("fixed space: {} Gram table, closed form = vectors (i = {i})", kind.name()), || {
            let closed = gram_table(kind, p, i)?;
            for fv in &fvs {
                if gram_table_empirical(kind, rep, fv)? != closed {
                    return Ok(Err("tables differ".into()));
                }
            }
            Ok(Ok(format!("{} pairs", fvs.len())))
        });
    }
    r.run(format!("fixed space: M_i times closed-form inverse = I (i = {i})"), || {
        let m = gram_table(GramKind::Geometric, p, i)?.entries;
        Ok(ensure(m.mul(&m_inverse(p, i)?)?.is_identity(), "ok", || "not identity".into()))
    });
    r.run(format!("fixed space: transition pairs are inverse, det = -q^(k+i)[i-1][n-2k] (i = {i})"), || {
        for v in Variant::ALL {
            let a = transition(Direction::GeoToComb, v, p, i)?.entries;
            let b = transition(Direction::CombToGeo, v, p, i)?.entries;
            if !a.mul(&b)?.is_identity() {
                return Ok(Err(format!("{} pair not inverse", v.name())));
            }
        }
        let d = transition(Direction::GeoToComb, Variant::Full, p, i)?.entries.det()?;
        let want = predicted_transition_det(p, i)?;
        Ok(ensure(d == want, format!("det = {d}"), || format!("det {d} vs {want}")))
    });
    r.run(format!("fixed space: basis ranks 4, 4, 3, 2 (i = {i})"), || {
        for fv in &fvs {
            let ranks = [
                gram_rank(rep, &fv.geometric_basis(Variant::Full)?)?,
                gram_rank(rep, &fv.combinatorial_basis(p, Variant::Full)?)?,
                gram_rank(rep, &fv.geometric_basis(Variant::Bar)?)?,
                gram_rank(rep, &fv.geometric_basis(Variant::Check)?)?,
            ];
            if ranks != [4, 4, 3, 2] {
                return Ok(Err(format!("ranks {ranks:?}")));
            }
        }
        Ok(Ok("ok".into()))
    });
    for v in Variant::ALL {
        r.run(format!("fixed space: recovery of meet and join, {} variant (i = {i})", v.name()), || {
            for fv in &fvs {
                let rec = recover_from_vectors(p, fv, v)?;
                if rec.meet != fv.meet || rec.join != fv.join {
                    return Ok(Err("recovered vectors differ".into()));
                }
            }
            Ok(Ok(format!("{} pairs", fvs.len())))
        });
    }
    r.run(format!("fixed space: balanced-set identities (i = {i})"), || {
        for (x, y) in pairs.iter().take(3) {
            let (rb, rc) = balanced_residuals(g, rep, x, y)?;
            if !rb.is_zero() || !rc.is_zero() {
                return Ok(Err("nonzero residual".into()));
            }
        }
        Ok(Ok("ok".into()))
    });
    r.run(format!("fixed space: perpendicular vector (i = {i})"), || {
        for fv in &fvs {
            let v = perp_vector(p, fv)?;
            if v.is_zero()
                || rep.inner(&v, &fv.meet)? != 0
                || rep.inner(&v, &fv.join)? != 0
                || perp_from_combinatorial(p, fv)? != v
            {
                return Ok(Err("perpendicular vector identities fail".into()));
            }
        }
        Ok(Ok("ok".into()))
    });
    r.run(format!("fixed space: swap element eigenvectors (i = {i})"), || {
        for ((x, y), fv) in pairs.iter().zip(&fvs).take(3) {
            if !swap_eigen_check(g, fv, x, y)? {
                return Ok(Err("swap check failed".into()));
            }
        }
        Ok(Ok("ok".into()))
    });
}

fn explorer_checks(r: &mut Runner, p: &QParams) {
    r.run("explorer: cosine recurrence = [n][k-i] - [k]^2", || {
        let w = cosine_table(p)?.w;
        Ok(Ok(format!("w = {w:?}")))
    });
    r.run("explorer: imitation coefficients = comb-to-geo columns", || {
        for i in 2..p.k {
            let (m, j) = rho_meet_join_coeffs(p, i)?;
            let inv = transition(Direction::CombToGeo, Variant::Full, p, i)?.entries;
            if inv.column(2) != m.to_vec() || inv.column(3) != j.to_vec() {
                return Ok(Err(format!("mismatch at i = {i}")));
            }
        }
        Ok(Ok("ok".into()))
    });
}

fn global_checks(
    r: &mut Runner,
    g: &Grassmann,
    rep: &Representation,
    cfg: &VerifyConfig,
    rng: &mut ChaCha8Rng,
    sample: usize,
) {
    let p = &g.params;
    let graph = match GrassmannGraph::build(g, cfg.cap, cfg.strategy) {
        Ok(gr) => gr,
        Err(e) => {
            r.run("graph: materialize vertex set", || Err(e));
            return;
        }
    };
    let nv = graph.vertices().len();
    r.run("graph: BFS distance = k - dim(x∩y)", || {
        for _ in 0..sample.min(5) {
            let x = graph.vertex(rng.gen_range(0..nv as u32)).clone();
            let d = graph.bfs_oracle(&x)?;
            for (v, &dv) in graph.vertices().iter().zip(&d) {
                if g.distance(&x, v)? != dv as usize {
                    return Ok(Err(format!("{x} to {v}")));
                }
            }
        }
        Ok(Ok(format!("{} roots over {nv} vertices", sample.min(5))))
    });
    r.run("graph: sphere sizes and eccentricity k", || {
        let want = p.sphere_sizes()?;
        let x = graph.vertex(rng.gen_range(0..nv as u32)).clone();
        let d = graph.bfs_oracle(&x)?;
        let mut counts = vec![0i128; p.k + 1];
        for &dv in &d {
            if dv as usize > p.k {
                return Ok(Err(format!("distance {dv} beyond k")));
            }
            counts[dv as usize] += 1;
        }
        Ok(ensure(counts == want, format!("{counts:?}"), || format!("{counts:?} vs {want:?}")))
    });
    let ext = ExternalGraph::new(p.clone(), graph.adjacency().clone());
    r.run("explorer: native graph validates", || {
        ext.validate(4, cfg.seed, cfg.strategy)?;
        Ok(Ok("ok".into()))
    });
    for i in 2..p.k {
        r.run(format!("explorer: problems 1-3 on the native graph (i = {i})"), || {
            let (x, y) = ext.pair_at_distance(i)?;
            let p1 = ext.problem1(x, y, cfg.strategy)?;
            if !p1.all_allowed {
                return Ok(Err(format!("spectrum {:?} outside {:?}", p1.spectrum, p1.allowed)));
            }
            // Cross-check against the subspace model.
            let xs = graph.vertex(x);
            let meet = g.space.meet(xs, graph.vertex(y))?;
            let mh = rep.hat(&meet);
            for (z, v) in graph.vertices().iter().zip(&p1.values).step_by(97) {
                let want = rep.inner(&mh, &rep.hat(z))?;
                if *v != BigRational::from_integer(want.into()) {
                    return Ok(Err(format!("value at {z} differs from <(x∩y)^, ẑ> = {want}")));
                }
            }
            let p2 = ext.problem2(&p1.values)?;
            if !p2.equitable {
                return Ok(Err("partner classes not equitable".into()));
            }
            let top = top_class_members(&p1);
            let expect = gauss_binom((p.n - p.k + i) as i64, i as i64, p.q)?;
            if top.len() as i128 != expect {
                return Ok(Err(format!("top class size {} vs {expect}", top.len())));
            }
            let p3 = ext.problem3(&top, i, cfg.strategy)?;
            Ok(ensure(p3.passes, format!("classes {:?}", p2.classes.iter().map(|c| c.size).collect::<Vec<_>>()), || {
                format!("closed = {}, diameter {}", p3.geodesically_closed, p3.diameter)
            }))
        });
    }
}

/// Short text rendering, one line per check.
pub fn render_text(report: &VerifyReport) -> String {
    let mut out = format!(
        "verify q={} n={} k={} mode={:?} seed={}\n",
        report.params.q, report.params.n, report.params.k, report.mode, report.seed
    );
    for c in &report.checks {
        out.push_str(&format!(
            "{} {} ({} ms): {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.millis,
            c.detail
        ));
    }
    let failed = report.checks.iter().filter(|c| !c.passed).count();
    out.push_str(&format!("{} checks, {} failed\n", report.checks.len(), failed));
    out
}

pub fn ensure_passed(report: &VerifyReport) -> Result<()> {
    if report.all_passed {
        Ok(())
    } else {
        Err(Error::Validation("verification failed".into()))
    }
}
