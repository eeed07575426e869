//! Compact adjacency-list graphs, breadth-first search, and the text format
//! used to exchange graphs with `explore`.
//!
//! ```text
//! drg q n k
//! vertices N
//! 0: 1 5 9
//! 1: 0 ...
//! ```
//! Vertex ids are 0-based, neighbour lists sorted ascending; blank lines and
//! `#` comments are ignored.

use std::collections::VecDeque;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub const UNREACHED: u8 = u8::MAX;

/// Undirected graph in compressed sparse row form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjacencyGraph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl AdjacencyGraph {
    /// Builds from per-vertex neighbour lists (each sorted on output).
    pub fn from_lists(mut lists: Vec<Vec<u32>>) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::with_capacity(lists.iter().map(Vec::len).sum());
        offsets.push(0);
        for l in &mut lists {
            l.sort_unstable();
            targets.extend_from_slice(l);
            offsets.push(targets.len());
        }
        AdjacencyGraph { offsets, targets }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        let v = v as usize;
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    /// Distances from `root`; [`UNREACHED`] marks unreachable vertices.
    pub fn bfs(&self, root: u32) -> Vec<u8> {
        self.bfs_bounded(root, UNREACHED - 1)
    }

    /// BFS that stops expanding past `max_depth`.
    pub fn bfs_bounded(&self, root: u32, max_depth: u8) -> Vec<u8> {
        let mut dist = vec![UNREACHED; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[root as usize] = 0;
        queue.push_back(root);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            if d >= max_depth {
                continue;
            }
            for &w in self.neighbors(v) {
                if dist[w as usize] == UNREACHED {
                    dist[w as usize] = d + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Structural problems: self-loops, duplicate or asymmetric edges.
    pub fn check_simple_undirected(&self) -> Result<()> {
        let nv = self.vertex_count() as u32;
        for v in 0..nv {
            let ns = self.neighbors(v);
            for w in ns.windows(2) {
                if w[0] == w[1] {
                    return Err(Error::Validation(format!("duplicate edge {v}-{}", w[0])));
                }
            }
            for &w in ns {
                if w >= nv {
                    return Err(Error::Validation(format!("vertex {v} lists unknown id {w}")));
                }
                if w == v {
                    return Err(Error::Validation(format!("self-loop at {v}")));
                }
                if !self.has_edge(w, v) {
                    return Err(Error::Validation(format!("edge {v}-{w} is not symmetric")));
                }
            }
        }
        Ok(())
    }

    pub fn write_text<W: Write>(&self, out: &mut W, header: (u32, usize, usize)) -> Result<()> {
        let (q, n, k) = header;
        writeln!(out, "drg {q} {n} {k}")?;
        writeln!(out, "vertices {}", self.vertex_count())?;
        let mut line = String::new();
        for v in 0..self.vertex_count() as u32 {
            line.clear();
            line.push_str(&v.to_string());
            line.push(':');
            for w in self.neighbors(v) {
                line.push(' ');
                line.push_str(&w.to_string());
            }
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Parses the text format; returns the `(q, n, k)` header and the graph.
    pub fn read_text<R: BufRead>(input: R) -> Result<((u32, usize, usize), Self)> {
        let mut header = None;
        let mut count: Option<usize> = None;
        let mut lists: Vec<Option<Vec<u32>>> = Vec::new();
        for (lineno, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = lineno + 1;
            let body = line.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let perr = |msg: String| Error::Parse { line: lineno, msg };
            if header.is_none() {
                let f: Vec<&str> = body.split_whitespace().collect();
                if f.len() != 4 || f[0] != "drg" {
                    return Err(perr(format!("expected `drg q n k`, got {body:?}")));
                }
                let num = |s: &str| s.parse::<usize>().map_err(|e| perr(format!("{s:?}: {e}")));
                header = Some((num(f[1])? as u32, num(f[2])?, num(f[3])?));
                continue;
            }
            if count.is_none() {
                let f: Vec<&str> = body.split_whitespace().collect();
                if f.len() != 2 || f[0] != "vertices" {
                    return Err(perr(format!("expected `vertices N`, got {body:?}")));
                }
                let c = f[1].parse::<usize>().map_err(|e| perr(format!("{e}")))?;
                count = Some(c);
                lists = vec![None; c];
                continue;
            }
            let (id, rest) = body
                .split_once(':')
                .ok_or_else(|| perr(format!("expected `v: n1 n2 ...`, got {body:?}")))?;
            let id: usize = id.trim().parse().map_err(|e| perr(format!("vertex id: {e}")))?;
            if id >= lists.len() {
                return Err(perr(format!("vertex id {id} out of range")));
            }
            if lists[id].is_some() {
                return Err(perr(format!("vertex {id} listed twice")));
            }
            let ns = rest
                .split_whitespace()
                .map(|t| t.parse::<u32>().map_err(|e| perr(format!("neighbour {t:?}: {e}"))))
                .collect::<Result<Vec<u32>>>()?;
            if ns.windows(2).any(|w| w[0] >= w[1]) {
                return Err(perr(format!("neighbours of {id} not strictly ascending")));
            }
            lists[id] = Some(ns);
        }
        let header = header.ok_or(Error::Parse { line: 0, msg: "missing header".into() })?;
        if count.is_none() {
            return Err(Error::Parse { line: 0, msg: "missing `vertices N` line".into() });
        }
        let lists = lists
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                l.ok_or_else(|| Error::Parse { line: 0, msg: format!("vertex {i} missing") })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok((header, AdjacencyGraph::from_lists(lists)))
    }
}
