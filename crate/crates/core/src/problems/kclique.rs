//! Erdos-Renyi graphs and k-clique target spaces over vertex masks.

use rand::Rng;

use crate::error::{Error, Result};
use crate::space::TargetSpace;

pub const MAX_VERTICES: u32 = 24;

/// Undirected simple graph stored as per-vertex adjacency masks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: u32,
    adjacency: Vec<u32>,
}

impl Graph {
    pub fn empty(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::usage(format!(
                "{n} vertices outside 1..={MAX_VERTICES}"
            )));
        }
        Ok(Self {
            n,
            adjacency: vec![0; n as usize],
        })
    }

    pub fn complete(n: u32) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let all = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        for v in 0..n {
            g.adjacency[v as usize] = all & !(1 << v);
        }
        Ok(g)
    }

    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            g.add_edge(a, b)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, a: u32, b: u32) -> Result<()> {
        if a == b || a >= self.n || b >= self.n {
            return Err(Error::usage(format!(
                "invalid edge ({a}, {b}) for {} vertices",
                self.n
            )));
        }
        self.adjacency[a as usize] |= 1 << b;
        self.adjacency[b as usize] |= 1 << a;
        Ok(())
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        a < self.n && b < self.n && self.adjacency[a as usize] >> b & 1 == 1
    }

    /// Edges as ascending `(a, b)` pairs with `a < b`.
    pub fn edges(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let mut higher = self.adjacency[a as usize] >> (a + 1);
            let mut b = a + 1;
            while higher != 0 {
                if higher & 1 == 1 {
                    out.push((a, b));
                }
                higher >>= 1;
                b += 1;
            }
        }
        out
    }
}

/// `G(n, p)`: every vertex pair becomes an edge independently with probability `edge_prob`.
pub fn gen_graph<R: Rng + ?Sized>(n: u32, edge_prob: f64, rng: &mut R) -> Result<Graph> {
    if !(0.0..=1.0).contains(&edge_prob) {
        return Err(Error::usage(format!(
            "edge probability {edge_prob} outside [0, 1]"
        )));
    }
    let mut g = Graph::empty(n)?;
    for a in 0..n {
        for b in a + 1..n {
            if rng.random_bool(edge_prob) {
                g.add_edge(a, b)?;
            }
        }
    }
    Ok(g)
}

/// Vertex masks of all `k`-cliques, or `None` when there is none.
pub fn enumerate_kcliques(graph: &Graph, k: u32) -> Result<Option<TargetSpace>> {
    if k < 2 || k > graph.n {
        return Err(Error::usage(format!(
            "clique size {k} outside 2..={}",
            graph.n
        )));
    }
    let mut found = Vec::new();
    let all = (0..graph.n).fold(0u32, |m, v| m | 1 << v);
    extend(graph, 0, all, k, &mut found);
    if found.is_empty() {
        return Ok(None);
    }
    found.sort_unstable();
    TargetSpace::new(graph.n, found).map(Some)
}

// Candidates only ever contain vertices above the highest vertex already in
// the clique, so each clique is produced once.
fn extend(graph: &Graph, clique: u32, candidates: u32, remaining: u32, out: &mut Vec<u32>) {
    if remaining == 0 {
        out.push(clique);
        return;
    }
    if candidates.count_ones() < remaining {
        return;
    }
    let mut rest = candidates;
    while rest != 0 {
        let v = rest.trailing_zeros();
        rest &= rest - 1;
        extend(
            graph,
            clique | 1 << v,
            rest & graph.adjacency[v as usize],
            remaining - 1,
            out,
        );
    }
}
