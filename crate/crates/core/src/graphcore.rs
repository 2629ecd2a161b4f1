//! Small labelled graphs, token maps and the join / disjoint-union
//! constructions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pathcount::parse_int_list;

/// Largest graph the exhaustive solvers accept.
pub const MAX_SOLVER_VERTICES: usize = 16;

/// Undirected simple graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    adj: Vec<Vec<bool>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphKind {
    Complete,
    Edgeless,
    Path,
    Explicit,
}

impl SimpleGraph {
    pub fn edgeless(n: usize) -> Self {
        SimpleGraph { adj: vec![vec![false; n]; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::edgeless(n);
        for i in 0..n {
            for j in 0..n {
                g.adj[i][j] = i != j;
            }
        }
        g
    }

    /// `P_n`: vertices `0 − 1 − … − (n−1)`.
    pub fn path(n: usize) -> Self {
        let edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges).expect("path edges are valid")
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::edgeless(n);
        for &(a, b) in edges {
            if a == b || a >= n || b >= n {
                return Err(Error::InvalidEdge(a, b));
            }
            g.adj[a][b] = true;
            g.adj[b][a] = true;
        }
        Ok(g)
    }

    pub fn build(kind: GraphKind, n: usize, edges: Option<&[(usize, usize)]>) -> Result<Self> {
        match kind {
            GraphKind::Complete => Ok(Self::complete(n)),
            GraphKind::Edgeless => Ok(Self::edgeless(n)),
            GraphKind::Path => Ok(Self::path(n)),
            GraphKind::Explicit => Self::from_edges(n, edges.unwrap_or(&[])),
        }
    }

    pub fn n_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adj[a][b]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&e| e).count()
    }

    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().enumerate().filter(|(_, &e)| e).map(|(u, _)| u)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n_vertices();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.adj[i][j])
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.edges().len()
    }

    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter()
            .enumerate()
            .all(|(k, &a)| set[k + 1..].iter().all(|&b| !self.adj[a][b]))
    }

    /// Adjacency rows as bitmasks; requires at most 32 vertices.
    pub(crate) fn masks(&self) -> Vec<u32> {
        assert!(self.n_vertices() <= 32);
        self.adj
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &e)| e).fold(0u32, |m, (j, _)| m | 1 << j))
            .collect()
    }

    /// Subgraph induced by `keep` (in the given order).
    pub fn induced(&self, keep: &[usize]) -> SimpleGraph {
        SimpleGraph {
            adj: keep.iter().map(|&a| keep.iter().map(|&b| self.adj[a][b]).collect()).collect(),
        }
    }

    pub fn without_vertex(&self, v: usize) -> SimpleGraph {
        let keep: Vec<usize> = (0..self.n_vertices()).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// `G ⊕ H`: `H`'s vertices follow `G`'s and every cross pair is joined.
    pub fn join(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = self.disjoint_union(other);
        let n = self.n_vertices();
        for a in 0..n {
            for b in n..g.n_vertices() {
                g.adj[a][b] = true;
                g.adj[b][a] = true;
            }
        }
        g
    }

    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let (n, k) = (self.n_vertices(), other.n_vertices());
        let mut g = Self::edgeless(n + k);
        for a in 0..n {
            for b in 0..n {
                g.adj[a][b] = self.adj[a][b];
            }
        }
        for a in 0..k {
            for b in 0..k {
                g.adj[n + a][n + b] = other.adj[a][b];
            }
        }
        g
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n_vertices();
        (0..n).all(|i| (0..n).all(|j| i == j || self.adj[i][j]))
    }

    pub fn is_edgeless(&self) -> bool {
        self.adj.iter().all(|r| r.iter().all(|&e| !e))
    }

    pub fn check_solver_size(&self) -> Result<()> {
        if self.n_vertices() > MAX_SOLVER_VERTICES {
            return Err(Error::CapExceeded {
                what: format!("graph with {} vertices", self.n_vertices()),
                limit: MAX_SOLVER_VERTICES as u64,
            });
        }
        Ok(())
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph(n={}, edges={:?})", self.n_vertices(), self.edges())
    }
}

/// Per-vertex token counts / list sizes, each at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct TokenMap(Vec<u32>);

impl TokenMap {
    pub fn new(values: Vec<u32>) -> Result<Self> {
        if let Some(pos) = values.iter().position(|&v| v == 0) {
            return Err(Error::Validation(format!("token value at vertex {pos} must be >= 1")));
        }
        Ok(TokenMap(values))
    }

    pub fn values(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).product()
    }

    pub fn sum(&self) -> u64 {
        self.0.iter().map(|&v| v as u64).sum()
    }

    pub fn check_for(&self, g: &SimpleGraph) -> Result<()> {
        if self.len() != g.n_vertices() {
            return Err(Error::SizeMismatch { expected: g.n_vertices(), actual: self.len() });
        }
        Ok(())
    }

    /// Sorted copy together with the permutation `perm[k] = original index`
    /// of the `k`-th smallest value (ties keep their original order).
    pub fn sorted_with_permutation(&self) -> (TokenMap, Vec<usize>) {
        let mut perm: Vec<usize> = (0..self.len()).collect();
        perm.sort_by_key(|&i| self.0[i]);
        (TokenMap(perm.iter().map(|&i| self.0[i]).collect()), perm)
    }

    pub fn as_i64(&self) -> Vec<i64> {
        self.0.iter().map(|&v| v as i64).collect()
    }
}

impl TryFrom<Vec<u32>> for TokenMap {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        TokenMap::new(v)
    }
}

impl From<TokenMap> for Vec<u32> {
    fn from(t: TokenMap) -> Self {
        t.0
    }
}

impl std::str::FromStr for TokenMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let ints = parse_int_list(s)?;
        let vals = ints
            .into_iter()
            .map(|v| u32::try_from(v).map_err(|_| Error::Validation(format!("bad token value {v}"))))
            .collect::<Result<Vec<_>>>()?;
        TokenMap::new(vals)
    }
}

impl fmt::Display for TokenMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `(G ⊕ K̄_m, f^(m))`: the `m` new vertices come last and carry `|V(G)|`
/// tokens each.
pub fn join_instance(g: &SimpleGraph, f: &TokenMap, m: usize) -> Result<(SimpleGraph, TokenMap)> {
    f.check_for(g)?;
    if g.n_vertices() == 0 && m > 0 {
        return Err(Error::Validation("joined vertices of an empty graph would carry no tokens".into()));
    }
    let joined = g.join(&SimpleGraph::edgeless(m));
    let mut values = f.values().to_vec();
    values.extend(std::iter::repeat_n(g.n_vertices() as u32, m));
    Ok((joined, TokenMap(values)))
}

/// Disjoint union of `(G_i, f_i)` with concatenated token maps.
pub fn union_instance(parts: &[(SimpleGraph, TokenMap)]) -> Result<(SimpleGraph, TokenMap)> {
    let Some((first, rest)) = parts.split_first() else {
        return Err(Error::Validation("union of zero parts".into()));
    };
    first.1.check_for(&first.0)?;
    let mut g = first.0.clone();
    let mut values = first.1.values().to_vec();
    for (h, fh) in rest {
        fh.check_for(h)?;
        g = g.disjoint_union(h);
        values.extend_from_slice(fh.values());
    }
    Ok((g, TokenMap(values)))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub kind: GraphKind,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub edges: Vec<[usize; 2]>,
}

impl GraphSpec {
    pub fn build(&self) -> Result<SimpleGraph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|e| (e[0], e[1])).collect();
        SimpleGraph::build(self.kind, self.n, Some(&edges))
    }
}

/// JSON game / colouring instance:
/// `{"graph": {"kind": …, "n": …, "edges": [[i,j],…]}, "f": […], "m": …}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    pub graph: GraphSpec,
    pub f: Vec<u32>,
    #[serde(default)]
    pub m: usize,
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Validation(format!("instance JSON: {e}")))
    }

    /// Base graph `G` and its token map.
    pub fn base(&self) -> Result<(SimpleGraph, TokenMap)> {
        let g = self.graph.build()?;
        let f = TokenMap::new(self.f.clone())?;
        f.check_for(&g)?;
        Ok((g, f))
    }

    /// For a complete base graph, reorders `f` increasingly so that the
    /// clique vertices satisfy `f(v_1) ≤ … ≤ f(v_n)`; returns the permutation
    /// used (`perm[k]` = original index of the new vertex `k`).
    pub fn sorted_clique(&self) -> Result<(TokenMap, Vec<usize>)> {
        let (g, f) = self.base()?;
        if !g.is_complete() {
            return Err(Error::Validation("base graph is not complete".into()));
        }
        Ok(f.sorted_with_permutation())
    }
}
