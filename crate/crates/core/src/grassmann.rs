//! The Grassmann graph `J_q(n,k)`: algebraic distances, local neighbour
//! generation, the `B`/`C` neighbour sets of a pair, the orbit partition of
//! the points under the stabilizer of two subspaces, and an explicitly
//! materialized graph used as a BFS oracle.

use std::collections::{HashMap, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Strategy;
use crate::field::Elem;
use crate::graph::{AdjacencyGraph, UNREACHED};
use crate::qarith::QParams;
use crate::subspace::{FqMatrix, PointId, ProjectiveSpace, Subspace};

pub const DEFAULT_VERTEX_CAP: u128 = 50_000;

/// Parameters together with the projective space they live in.
#[derive(Clone, Debug)]
pub struct Grassmann {
    pub params: QParams,
    pub space: ProjectiveSpace,
    /// `F_q^k`, used to enumerate hyperplanes of a vertex.
    local: ProjectiveSpace,
}

/// A pair of vertices with their meet and join.
#[derive(Clone, Debug)]
pub struct VertexPairContext {
    pub x: Subspace,
    pub y: Subspace,
    pub i: usize,
    pub meet_xy: Subspace,
    pub join_xy: Subspace,
}

/// Cells of `P_1` cut out by containment in `u`, `v`, `u ∩ v`, `u + v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitPartition {
    pub case_id: u8,
    pub cells: Vec<Vec<PointId>>,
}

impl OrbitPartition {
    pub fn sizes(&self) -> Vec<usize> {
        self.cells.iter().map(Vec::len).collect()
    }

    /// Disjoint cells covering exactly `0..point_count`.
    pub fn is_partition_of(&self, point_count: usize) -> bool {
        let mut seen = vec![false; point_count];
        for p in self.cells.iter().flatten() {
            if p.index() >= point_count || seen[p.index()] {
                return false;
            }
            seen[p.index()] = true;
        }
        seen.into_iter().all(|s| s)
    }
}

impl Grassmann {
    pub fn new(params: QParams) -> Result<Self> {
        let space = ProjectiveSpace::for_params(&params)?;
        let local = ProjectiveSpace::new(params.q, params.k)?;
        Ok(Grassmann { params, space, local })
    }

    pub fn from_qnk(q: u32, n: usize, k: usize) -> Result<Self> {
        Self::new(QParams::new(q, n, k)?)
    }

    pub fn k(&self) -> usize {
        self.params.k
    }

    fn check_vertex(&self, x: &Subspace) -> Result<()> {
        if x.n() != self.params.n {
            return Err(Error::DimensionMismatch(x.n(), self.params.n));
        }
        if x.dim() != self.params.k {
            return Err(Error::WrongDimension { expected: self.params.k, got: x.dim() });
        }
        Ok(())
    }

    /// `k - dim(x ∩ y)`.
    pub fn distance(&self, x: &Subspace, y: &Subspace) -> Result<usize> {
        self.check_vertex(x)?;
        self.check_vertex(y)?;
        Ok(self.params.k - self.space.meet(x, y)?.dim())
    }

    pub fn pair_context(&self, x: &Subspace, y: &Subspace) -> Result<VertexPairContext> {
        let i = self.distance(x, y)?;
        Ok(VertexPairContext {
            x: x.clone(),
            y: y.clone(),
            i,
            meet_xy: self.space.meet(x, y)?,
            join_xy: self.space.join(x, y)?,
        })
    }

    /// The `(k-1)`-subspaces of `x`.
    pub fn hyperplanes(&self, x: &Subspace) -> Result<Vec<Subspace>> {
        self.check_vertex(x)?;
        let k = self.params.k;
        let n = self.params.n;
        let f = self.space.field();
        let mut out = Vec::new();
        for h in self.local.enumerate_subspaces(k - 1)? {
            let mut m = vec![0; (k - 1) * n];
            for (r, coeffs) in h.rows().enumerate() {
                for (c, &a) in coeffs.iter().enumerate() {
                    if a == 0 {
                        continue;
                    }
                    for (j, &xv) in x.row(c).iter().enumerate() {
                        m[r * n + j] = f.add(m[r * n + j], f.mul(a, xv));
                    }
                }
            }
            out.push(self.space.canonical_from_flat(m, k - 1));
        }
        Ok(out)
    }

    /// The `kappa` vertices adjacent to `x`, sorted, generated as `w + s` for
    /// a hyperplane `w` of `x` and a point `s` outside `x`.
    pub fn neighbors(&self, x: &Subspace) -> Result<Vec<Subspace>> {
        let n = self.params.n;
        let mut inside = vec![false; self.space.point_count()];
        for p in self.space.omega(x) {
            inside[p.index()] = true;
        }
        let hyper = self.hyperplanes(x)?;
        let mut seen: HashSet<Subspace> = HashSet::new();
        let mut buf: Vec<Elem> = Vec::with_capacity(self.params.k * n);
        for w in &hyper {
            for s in self.space.points() {
                if inside[s.index()] {
                    continue;
                }
                buf.clear();
                for r in w.rows() {
                    buf.extend_from_slice(r);
                }
                buf.extend_from_slice(self.space.point_vector(s));
                seen.insert(self.space.canonical_from_flat(buf.clone(), self.params.k));
            }
        }
        let mut out: Vec<Subspace> = seen.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// `(B, C)`: neighbours of `x` at distance `i+1` resp. `i-1` from `y`.
    pub fn bc_sets(&self, x: &Subspace, y: &Subspace) -> Result<(Vec<Subspace>, Vec<Subspace>)> {
        let i = self.distance(x, y)?;
        self.params.check_mid_distance(i)?;
        let mut b = Vec::new();
        let mut c = Vec::new();
        for z in self.neighbors(x)? {
            let d = self.distance(y, &z)?;
            if d == i + 1 {
                b.push(z);
            } else if d + 1 == i {
                c.push(z);
            }
        }
        Ok((b, c))
    }

    /// Counts of `z ∈ Γ(x)` by `∂(y, z)`, indexed `0..=k`.
    pub fn neighbor_distance_profile(&self, x: &Subspace, y: &Subspace) -> Result<Vec<usize>> {
        let mut counts = vec![0; self.params.k + 1];
        for z in self.neighbors(x)? {
            counts[self.distance(y, &z)?] += 1;
        }
        Ok(counts)
    }

    pub fn random_vertex<R: Rng>(&self, rng: &mut R) -> Subspace {
        self.space.random_subspace(self.params.k, rng)
    }

    /// Deterministic pair at distance `i`: `x = <e_0..e_{k-1}>`,
    /// `y = <e_0..e_{k-i-1}, e_k..e_{k+i-1}>`, both moved by a random
    /// element of `GL(V)` drawn from `seed`.
    pub fn witness_pair(&self, i: usize, seed: u64) -> Result<(Subspace, Subspace)> {
        let k = self.params.k;
        if i > k {
            return Err(Error::OutOfRange {
                what: "pair distance",
                value: i as i64,
                allowed: format!("0..={k}"),
            });
        }
        let xs: Vec<usize> = (0..k).collect();
        let ys: Vec<usize> = (0..k - i).chain(k..k + i).collect();
        let x0 = self.space.coordinate_subspace(&xs)?;
        let y0 = self.space.coordinate_subspace(&ys)?;
        let sigma = self.space.gl_random(seed);
        Ok((
            self.space.gl_apply_unchecked(&sigma, &x0),
            self.space.gl_apply_unchecked(&sigma, &y0),
        ))
    }

    /// An element of `GL(V)` exchanging `x` and `y`: with `R` a basis of
    /// `x ∩ y`, `R ∪ S` a basis of `x`, `R ∪ T` a basis of `y` and `W` a
    /// complement of `x + y`, it swaps `S` and `T` and fixes `R` and `W`.
    pub fn swap_element(&self, x: &Subspace, y: &Subspace) -> Result<FqMatrix> {
        let sp = &self.space;
        let n = self.params.n;
        let meet = sp.meet(x, y)?;
        let extend = |base: &[Vec<Elem>], target: &Subspace| -> Vec<Vec<Elem>> {
            let mut basis = base.to_vec();
            let mut span = sp.rref_canonical(&basis).expect("lengths match");
            for r in target.rows() {
                if !sp.contains_vector(&span, r) {
                    basis.push(r.to_vec());
                    span = sp.rref_canonical(&basis).expect("lengths match");
                }
            }
            basis[base.len()..].to_vec()
        };
        let r: Vec<Vec<Elem>> = meet.rows().map(<[Elem]>::to_vec).collect();
        let s = extend(&r, x);
        let t = extend(&r, y);
        let mut xy: Vec<Vec<Elem>> = r.iter().chain(&s).chain(&t).cloned().collect();
        let full = sp.full();
        let w = extend(&xy, &full);
        xy.extend(w.iter().cloned());
        let source: Vec<Elem> = xy.concat();
        let image: Vec<Elem> = r.iter().chain(&t).chain(&s).chain(&w).flatten().copied().collect();
        let src = FqMatrix::from_rows(n, source)?;
        let img = FqMatrix::from_rows(n, image)?;
        // rows: src * sigma = img
        Ok(sp.matrix_mul(&sp.matrix_inverse(&src)?, &img))
    }

    /// Partition of `P_1` by containment relative to `u` and `v`, in the
    /// row order of the six-case table.
    pub fn stab_partition_p1(&self, u: &Subspace, v: &Subspace) -> Result<OrbitPartition> {
        let sp = &self.space;
        for w in [u, v] {
            if w.is_zero() || w.is_full() {
                return Err(Error::InvalidParams(
                    "orbit partition needs proper nonzero subspaces".into(),
                ));
            }
        }
        if u == v {
            return Err(Error::InvalidParams("orbit partition needs u != v".into()));
        }
        let meet = sp.meet(u, v)?;
        let join = sp.join(u, v)?;
        let np = sp.point_count();
        let flags = |s: &Subspace| {
            let mut f = vec![false; np];
            for p in sp.omega(s) {
                f[p.index()] = true;
            }
            f
        };
        let (in_u, in_v, in_m, in_j) = (flags(u), flags(v), flags(&meet), flags(&join));
        let collect = |pred: &dyn Fn(usize) -> bool| -> Vec<PointId> {
            (0..np).filter(|&i| pred(i)).map(|i| PointId(i as u32)).collect()
        };
        let uv = |i: usize| in_u[i] || in_v[i];
        let (case_id, cells) = if sp.contains(v, u) {
            (5, vec![
                collect(&|i| in_u[i]),
                collect(&|i| in_v[i] && !in_u[i]),
                collect(&|i| !in_v[i]),
            ])
        } else if sp.contains(u, v) {
            (6, vec![
                collect(&|i| in_v[i]),
                collect(&|i| in_u[i] && !in_v[i]),
                collect(&|i| !in_u[i]),
            ])
        } else {
            match (meet.is_zero(), join.is_full()) {
                (false, false) => (1, vec![
                    collect(&|i| in_m[i]),
                    collect(&|i| in_u[i] && !in_m[i]),
                    collect(&|i| in_v[i] && !in_m[i]),
                    collect(&|i| in_j[i] && !uv(i)),
                    collect(&|i| !in_j[i]),
                ]),
                (false, true) => (2, vec![
                    collect(&|i| in_m[i]),
                    collect(&|i| in_u[i] && !in_m[i]),
                    collect(&|i| in_v[i] && !in_m[i]),
                    collect(&|i| !uv(i)),
                ]),
                (true, false) => (3, vec![
                    collect(&|i| in_u[i]),
                    collect(&|i| in_v[i]),
                    collect(&|i| in_j[i] && !uv(i)),
                    collect(&|i| !in_j[i]),
                ]),
                (true, true) => (4, vec![
                    collect(&|i| in_u[i]),
                    collect(&|i| in_v[i]),
                    collect(&|i| !uv(i)),
                ]),
            }
        };
        Ok(OrbitPartition { case_id, cells })
    }
}

/// `J_q(n,k)` with every vertex enumerated and adjacency stored explicitly.
pub struct GrassmannGraph {
    vertices: Vec<Subspace>,
    index: HashMap<Subspace, u32>,
    adjacency: AdjacencyGraph,
}

impl GrassmannGraph {
    pub fn build(g: &Grassmann, cap: u128, strategy: Strategy) -> Result<Self> {
        let count = g.params.vertex_count()? as u128;
        if count > cap {
            return Err(Error::CapExceeded { count, cap });
        }
        let vertices: Vec<Subspace> = g.space.enumerate_subspaces(g.params.k)?.collect();
        let index: HashMap<Subspace, u32> = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i as u32))
            .collect();
        let lists = strategy.map(&vertices, |x| {
            g.neighbors(x)
                .expect("enumerated vertices have dimension k")
                .iter()
                .map(|z| index[z])
                .collect::<Vec<u32>>()
        });
        Ok(GrassmannGraph {
            vertices,
            index,
            adjacency: AdjacencyGraph::from_lists(lists),
        })
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn vertex(&self, id: u32) -> &Subspace {
        &self.vertices[id as usize]
    }

    pub fn vertex_id(&self, x: &Subspace) -> Option<u32> {
        self.index.get(x).copied()
    }

    pub fn adjacency(&self) -> &AdjacencyGraph {
        &self.adjacency
    }

    pub fn into_adjacency(self) -> AdjacencyGraph {
        self.adjacency
    }

    /// BFS distances from `x` to every vertex, indexed by vertex id.
    pub fn bfs_oracle(&self, x: &Subspace) -> Result<Vec<u8>> {
        let id = self
            .vertex_id(x)
            .ok_or_else(|| Error::InvalidParams("subspace is not a vertex".into()))?;
        let d = self.adjacency.bfs(id);
        if d.contains(&UNREACHED) {
            return Err(Error::Validation("graph is disconnected".into()));
        }
        Ok(d)
    }

    /// BFS distances keyed by subspace.
    pub fn bfs_oracle_map(&self, x: &Subspace) -> Result<HashMap<Subspace, usize>> {
        let d = self.bfs_oracle(x)?;
        Ok(self
            .vertices
            .iter()
            .cloned()
            .zip(d.into_iter().map(usize::from))
            .collect())
    }
}

/// Deterministic sample of `count` vertex ids.
pub fn sample_ids(total: usize, count: usize, seed: u64) -> Vec<u32> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rand::seq::index::sample(&mut rng, total, count.min(total))
        .into_iter()
        .map(|i| i as u32)
        .collect()
}
