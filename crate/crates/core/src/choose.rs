//! List colouring: colourability, the colour-set family `Φ(G, L)` and its
//! size `κ(G, L)`, extendability to joins, `m_c` by exhaustive enumeration
//! and the adversarial assignment that makes `K_n ⊕ K̄_ψ` uncolourable.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graphcore::{SimpleGraph, TokenMap};
use crate::pathcount::{enumerate_paths, psi, x_of_f, Method};

pub type Colour = u32;

/// Limit on `∏ |L(v)|` for exhaustive colouring enumeration.
pub const MAX_COLOURINGS: u64 = 1_000_000;
/// `m_c_small` accepts at most this many vertices…
pub const MC_MAX_VERTICES: usize = 3;
/// …and at most this total list size.
pub const MC_MAX_TOTAL: u64 = 9;
/// Largest number of joined vertices [`lemma2_assignment`] will build.
pub const MAX_BAD_LIST_VERTICES: u64 = 4096;

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ListAssignment {
    pub lists: Vec<BTreeSet<Colour>>,
}

impl ListAssignment {
    pub fn new(lists: Vec<BTreeSet<Colour>>) -> Self {
        ListAssignment { lists }
    }

    pub fn from_vecs(lists: &[&[Colour]]) -> Self {
        ListAssignment { lists: lists.iter().map(|l| l.iter().copied().collect()).collect() }
    }

    pub fn len(&self) -> usize {
        self.lists.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lists.is_empty()
    }

    pub fn colours(&self) -> BTreeSet<Colour> {
        self.lists.iter().flatten().copied().collect()
    }

    pub fn sizes(&self) -> Vec<u32> {
        self.lists.iter().map(|l| l.len() as u32).collect()
    }

    pub fn relabel(&self, map: impl Fn(Colour) -> Colour) -> ListAssignment {
        ListAssignment { lists: self.lists.iter().map(|l| l.iter().map(|&c| map(c)).collect()).collect() }
    }

    fn check_for(&self, g: &SimpleGraph) -> Result<()> {
        if self.len() != g.n_vertices() {
            return Err(Error::SizeMismatch { expected: g.n_vertices(), actual: self.len() });
        }
        Ok(())
    }

    fn colouring_count(&self) -> u64 {
        self.lists.iter().fold(1u64, |acc, l| acc.saturating_mul(l.len() as u64))
    }
}

/// `κ` takes values in the naturals extended by `∞`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kappa {
    Finite(u64),
    Infinite,
}

impl Kappa {
    /// `m < κ`.
    pub fn exceeds(&self, m: u64) -> bool {
        match self {
            Kappa::Finite(k) => m < *k,
            Kappa::Infinite => true,
        }
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Finite(k) => write!(f, "{k}"),
            Kappa::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Kappa {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Kappa::Finite(k) => s.serialize_u64(*k),
            Kappa::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Kappa {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            N(u64),
            S(String),
        }
        match Raw::deserialize(d)? {
            Raw::N(k) => Ok(Kappa::Finite(k)),
            Raw::S(s) if s == "inf" => Ok(Kappa::Infinite),
            Raw::S(s) => s.parse().map(Kappa::Finite).map_err(serde::de::Error::custom),
        }
    }
}

/// Some proper colouring with `φ(v) ∈ L(v)`, if one exists.
///
/// Vertices are visited in a fixed order: smallest slack `|L(v)| − d(v)`
/// first, then smallest list, then index. A vertex whose neighbours are all
/// coloured takes its first free colour without branching.
pub fn find_colouring(g: &SimpleGraph, l: &ListAssignment) -> Result<Option<Vec<Colour>>> {
    l.check_for(g)?;
    let n = g.n_vertices();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (l.lists[v].len() as i64 - g.degree(v) as i64, l.lists[v].len(), v));
    let mut position = vec![0usize; n];
    for (k, &v) in order.iter().enumerate() {
        position[v] = k;
    }
    let neighbours: Vec<Vec<usize>> = (0..n).map(|v| g.neighbours(v).collect()).collect();
    let mut colour: Vec<Option<Colour>> = vec![None; n];

    fn has_free(v: usize, l: &ListAssignment, nb: &[Vec<usize>], colour: &[Option<Colour>]) -> bool {
        l.lists[v].iter().any(|&c| nb[v].iter().all(|&u| colour[u] != Some(c)))
    }

    fn assign(
        k: usize,
        order: &[usize],
        position: &[usize],
        l: &ListAssignment,
        nb: &[Vec<usize>],
        colour: &mut Vec<Option<Colour>>,
    ) -> bool {
        let Some(&v) = order.get(k) else {
            return true;
        };
        let free: Vec<Colour> = l.lists[v]
            .iter()
            .copied()
            .filter(|&c| nb[v].iter().all(|&u| colour[u] != Some(c)))
            .collect();
        let later: Vec<usize> = nb[v].iter().copied().filter(|&u| position[u] > k).collect();
        let tries = if later.is_empty() { free.len().min(1) } else { free.len() };
        for &c in &free[..tries] {
            colour[v] = Some(c);
            // forward check: no later neighbour may lose its last option
            if later.iter().all(|&u| has_free(u, l, nb, colour)) && assign(k + 1, order, position, l, nb, colour) {
                return true;
            }
        }
        colour[v] = None;
        false
    }

    if assign(0, &order, &position, l, &neighbours, &mut colour) {
        Ok(Some(colour.into_iter().map(|c| c.expect("all assigned")).collect()))
    } else {
        Ok(None)
    }
}

pub fn is_colorable(g: &SimpleGraph, l: &ListAssignment) -> Result<bool> {
    Ok(find_colouring(g, l)?.is_some())
}

/// Every proper `L`-colouring, in order of vertex index then colour value.
pub fn all_colourings(g: &SimpleGraph, l: &ListAssignment) -> Result<Vec<Vec<Colour>>> {
    l.check_for(g)?;
    if l.colouring_count() > MAX_COLOURINGS {
        return Err(Error::CapExceeded { what: "list colouring enumeration".into(), limit: MAX_COLOURINGS });
    }
    let n = g.n_vertices();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn walk(v: usize, g: &SimpleGraph, l: &ListAssignment, cur: &mut Vec<Colour>, out: &mut Vec<Vec<Colour>>) {
        if v == g.n_vertices() {
            out.push(cur.clone());
            return;
        }
        for &c in &l.lists[v] {
            if (0..v).any(|u| g.has_edge(u, v) && cur[u] == c) {
                continue;
            }
            cur.push(c);
            walk(v + 1, g, l, cur, out);
            cur.pop();
        }
    }
    walk(0, g, l, &mut cur, &mut out);
    Ok(out)
}

/// `(Φ(G, L), κ(G, L))`. `κ = ∞` when some colouring repeats a colour and
/// `0` when there is no colouring; `Φ` is returned in every case.
pub fn phi_kappa(g: &SimpleGraph, l: &ListAssignment) -> Result<(BTreeSet<BTreeSet<Colour>>, Kappa)> {
    let colourings = all_colourings(g, l)?;
    let n = g.n_vertices();
    let mut repeats = false;
    let mut phi = BTreeSet::new();
    for c in colourings {
        let used: BTreeSet<Colour> = c.into_iter().collect();
        if used.len() < n {
            repeats = true;
        }
        phi.insert(used);
    }
    let kappa = if repeats { Kappa::Infinite } else { Kappa::Finite(phi.len() as u64) };
    Ok((phi, kappa))
}

/// `L` is `m`-extendable iff `m < κ(G, L)`.
pub fn is_m_extendable(g: &SimpleGraph, l: &ListAssignment, m: u64) -> Result<bool> {
    Ok(phi_kappa(g, l)?.1.exceeds(m))
}

/// Direct check of `m`-extendability: tries every extension of `L` to
/// `G ⊕ K̄_m` whose new lists are `|V(G)|`-subsets of `colours(L)` plus
/// `|V(G)|` fresh colours. Repeated joined lists act like a single one, so
/// only sets of `min(m, #lists)` distinct lists are tried.
pub fn is_m_extendable_by_extensions(g: &SimpleGraph, l: &ListAssignment, m: u64) -> Result<bool> {
    l.check_for(g)?;
    if m == 0 {
        return is_colorable(g, l);
    }
    let n = g.n_vertices();
    let used = l.colours();
    let fresh_start = used.iter().next_back().map_or(0, |c| c + 1);
    let universe: Vec<Colour> = used.iter().copied().chain(fresh_start..fresh_start + n as Colour).collect();
    let candidates: Vec<BTreeSet<Colour>> = combinations(&universe, n);
    let pick = (m as usize).min(candidates.len());
    let joined = SimpleGraph::edgeless(pick);
    let graph = g.join(&joined);
    let mut ok = true;
    for_each_combination(candidates.len(), pick, &mut |idx| {
        let mut lists = l.lists.clone();
        lists.extend(idx.iter().map(|&i| candidates[i].clone()));
        match is_colorable(&graph, &ListAssignment::new(lists)) {
            Ok(true) => true,
            _ => {
                ok = false;
                false
            }
        }
    });
    Ok(ok)
}

fn combinations(items: &[Colour], k: usize) -> Vec<BTreeSet<Colour>> {
    let mut out = Vec::new();
    for_each_combination(items.len(), k, &mut |idx| {
        out.push(idx.iter().map(|&i| items[i]).collect());
        true
    });
    out
}

// Calls `visit` on each k-subset of 0..n in lexicographic order; stops early
// when it returns false.
fn for_each_combination(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] < n - k + i) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// `f`-list assignments up to colour renaming: colours are introduced in
/// order of first use, so every class is produced at least once.
pub fn canonical_assignments(f: &[u32]) -> Vec<ListAssignment> {
    let mut out = Vec::new();
    fn extend(v: usize, used: u32, f: &[u32], acc: &mut Vec<BTreeSet<Colour>>, out: &mut Vec<ListAssignment>) {
        if v == f.len() {
            out.push(ListAssignment::new(acc.clone()));
            return;
        }
        let size = f[v] as usize;
        let old: Vec<Colour> = (0..used).collect();
        for reuse in 0..=size.min(old.len()) {
            let fresh = (size - reuse) as u32;
            for_each_combination(old.len(), reuse, &mut |idx| {
                let mut list: BTreeSet<Colour> = idx.iter().map(|&i| old[i]).collect();
                list.extend(used..used + fresh);
                acc.push(list);
                extend(v + 1, used + fresh, f, acc, out);
                acc.pop();
                true
            });
        }
    }
    extend(0, 0, f, &mut Vec::new(), &mut out);
    out
}

/// `m_c(G, f) = min κ(G, L)` over all `f`-list assignments, by enumeration.
pub fn m_c_small(g: &SimpleGraph, f: &TokenMap) -> Result<Kappa> {
    f.check_for(g)?;
    if g.n_vertices() > MC_MAX_VERTICES {
        return Err(Error::CapExceeded {
            what: format!("m_c enumeration on {} vertices", g.n_vertices()),
            limit: MC_MAX_VERTICES as u64,
        });
    }
    if f.sum() > MC_MAX_TOTAL {
        return Err(Error::CapExceeded {
            what: format!("m_c enumeration with total list size {}", f.sum()),
            limit: MC_MAX_TOTAL,
        });
    }
    let mut best = Kappa::Infinite;
    for l in canonical_assignments(f.values()) {
        let (_, k) = phi_kappa(g, &l)?;
        best = best.min(k);
        if best == Kappa::Finite(0) {
            break;
        }
    }
    Ok(best)
}

/// `K_n ⊕ K̄_m` with `m = ψ(x(f))` and a list assignment it cannot be
/// coloured from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BadListInstance {
    pub f: TokenMap,
    pub m: u64,
    #[serde(skip)]
    pub graph: SimpleGraph,
    #[serde(flatten)]
    pub lists: ListAssignment,
}

/// Clique vertex `v_i` gets `{1, …, f(v_i)}`; the joined vertices get the
/// up-step encodings `s(P)` of the `ψ(x(f))` dominated paths, one each.
/// `f` must be weakly increasing.
pub fn lemma2_assignment(f: &TokenMap) -> Result<BadListInstance> {
    let x = x_of_f(&f.as_i64())?;
    let count = psi(&x, Method::Dp);
    let m = match count.to_u64() {
        Some(m) if m <= MAX_BAD_LIST_VERTICES => m,
        _ => {
            return Err(Error::CapExceeded {
                what: format!("{count} joined vertices"),
                limit: MAX_BAD_LIST_VERTICES,
            })
        }
    };
    let paths = enumerate_paths(&x, MAX_BAD_LIST_VERTICES)?;
    let n = f.len();
    let mut lists: Vec<BTreeSet<Colour>> = f.values().iter().map(|&k| (1..=k).collect()).collect();
    lists.extend(paths.iter().map(|p| p.encode().into_iter().map(|c| c as Colour).collect()));
    let graph = SimpleGraph::complete(n).join(&SimpleGraph::edgeless(m as usize));
    Ok(BadListInstance { f: f.clone(), m, graph, lists: ListAssignment::new(lists) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(v: &[u32]) -> TokenMap {
        TokenMap::new(v.to_vec()).unwrap()
    }

    fn set(v: &[Colour]) -> BTreeSet<Colour> {
        v.iter().copied().collect()
    }

    const A: Colour = 0;
    const B: Colour = 1;
    const C: Colour = 2;

    #[test]
    fn colourability_examples() {
        let k2 = SimpleGraph::complete(2);
        assert!(!is_colorable(&k2, &ListAssignment::from_vecs(&[&[A], &[A]])).unwrap());
        assert!(is_colorable(&k2, &ListAssignment::from_vecs(&[&[A], &[B]])).unwrap());
        let k3 = SimpleGraph::complete(3);
        assert!(!is_colorable(&k3, &ListAssignment::from_vecs(&[&[A, B], &[A, B], &[A, B]])).unwrap());
        let c = find_colouring(&SimpleGraph::path(3), &ListAssignment::from_vecs(&[&[A, B], &[A], &[A, C]]))
            .unwrap()
            .unwrap();
        assert_eq!(c, vec![B, A, C]);
    }

    #[test]
    fn backtracking_agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..500 {
            let n = rng.gen_range(1..=5);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                .filter(|_| rng.gen_bool(0.5))
                .collect();
            let g = SimpleGraph::from_edges(n, &edges).unwrap();
            let l = ListAssignment::new(
                (0..n)
                    .map(|_| (0..rng.gen_range(1..=3)).map(|_| rng.gen_range(0..4)).collect())
                    .collect(),
            );
            let any = !all_colourings(&g, &l).unwrap().is_empty();
            assert_eq!(is_colorable(&g, &l).unwrap(), any, "{g:?} {l:?}");
        }
    }

    #[test]
    fn phi_kappa_examples() {
        let k2 = SimpleGraph::complete(2);
        let (phi, k) = phi_kappa(&k2, &ListAssignment::from_vecs(&[&[A, B], &[A, B]])).unwrap();
        assert_eq!(phi, BTreeSet::from([set(&[A, B])]));
        assert_eq!(k, Kappa::Finite(1));

        let (phi, k) = phi_kappa(&k2, &ListAssignment::from_vecs(&[&[A], &[A, B, C]])).unwrap();
        assert_eq!(phi, BTreeSet::from([set(&[A, B]), set(&[A, C])]));
        assert_eq!(k, Kappa::Finite(2));

        let e2 = SimpleGraph::edgeless(2);
        assert_eq!(phi_kappa(&e2, &ListAssignment::from_vecs(&[&[A], &[B]])).unwrap().1, Kappa::Finite(1));
        assert_eq!(phi_kappa(&e2, &ListAssignment::from_vecs(&[&[A], &[A]])).unwrap().1, Kappa::Infinite);
        assert_eq!(phi_kappa(&k2, &ListAssignment::from_vecs(&[&[A], &[A]])).unwrap().1, Kappa::Finite(0));
    }

    #[test]
    fn extendability_examples() {
        let k2 = SimpleGraph::complete(2);
        let l = ListAssignment::from_vecs(&[&[A, B], &[A, B]]);
        assert!(is_m_extendable(&k2, &l, 0).unwrap());
        assert!(!is_m_extendable(&k2, &l, 1).unwrap());
        let e2 = SimpleGraph::edgeless(2);
        assert!(is_m_extendable(&e2, &ListAssignment::from_vecs(&[&[A], &[A]]), 1_000_000).unwrap());
        let k1 = SimpleGraph::complete(1);
        let l1 = ListAssignment::from_vecs(&[&[A]]);
        assert!(is_m_extendable(&k1, &l1, 0).unwrap());
        assert!(!is_m_extendable(&k1, &l1, 1).unwrap());
        for m in 0..=3 {
            assert_eq!(
                is_m_extendable_by_extensions(&k2, &l, m).unwrap(),
                is_m_extendable(&k2, &l, m).unwrap()
            );
        }
    }

    #[test]
    fn kappa_json() {
        assert_eq!(serde_json::to_string(&Kappa::Infinite).unwrap(), "\"inf\"");
        assert_eq!(serde_json::to_string(&Kappa::Finite(3)).unwrap(), "3");
        assert_eq!(serde_json::from_str::<Kappa>("\"inf\"").unwrap(), Kappa::Infinite);
        assert_eq!(serde_json::from_str::<Kappa>("4").unwrap(), Kappa::Finite(4));
        let l: ListAssignment = serde_json::from_str(r#"{"lists": [[1,2],[3]]}"#).unwrap();
        assert_eq!(l, ListAssignment::from_vecs(&[&[1, 2], &[3]]));
    }

    #[test]
    fn m_c_examples() {
        assert_eq!(m_c_small(&SimpleGraph::complete(2), &t(&[2, 2])).unwrap(), Kappa::Finite(1));
        assert_eq!(m_c_small(&SimpleGraph::edgeless(2), &t(&[2, 2])).unwrap(), Kappa::Finite(4));
        assert_eq!(m_c_small(&SimpleGraph::complete(2), &t(&[1, 3])).unwrap(), Kappa::Finite(2));
        assert_eq!(m_c_small(&SimpleGraph::complete(2), &t(&[1, 1])).unwrap(), Kappa::Finite(0));
        assert!(m_c_small(&SimpleGraph::complete(4), &t(&[1, 1, 1, 1])).unwrap_err().is_cap());
        assert!(m_c_small(&SimpleGraph::complete(3), &t(&[3, 3, 4])).unwrap_err().is_cap());
    }

    #[test]
    fn canonical_assignments_cover_small_case() {
        // two lists of size 2 up to renaming: equal, overlapping in one, disjoint
        let classes: BTreeSet<usize> = canonical_assignments(&[2, 2])
            .iter()
            .map(|l| l.lists[0].intersection(&l.lists[1]).count())
            .collect();
        assert_eq!(classes, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn bad_list_examples() {
        let bad = lemma2_assignment(&t(&[1, 3])).unwrap();
        assert_eq!(bad.m, 2);
        assert_eq!(bad.lists.lists[0], set(&[1]));
        assert_eq!(bad.lists.lists[1], set(&[1, 2, 3]));
        let joined: BTreeSet<BTreeSet<Colour>> = bad.lists.lists[2..].iter().cloned().collect();
        assert_eq!(joined, BTreeSet::from([set(&[1, 2]), set(&[1, 3])]));
        assert!(!is_colorable(&bad.graph, &bad.lists).unwrap());

        let bad = lemma2_assignment(&t(&[1, 2, 3])).unwrap();
        assert_eq!(bad.m, 1);
        assert_eq!(bad.lists.lists[3], set(&[1, 2, 3]));

        let bad = lemma2_assignment(&t(&[3, 6, 6, 9])).unwrap();
        assert_eq!(bad.m, 72);
        assert_eq!(bad.graph.n_vertices(), 76);
        assert!(bad.lists.lists[4..].iter().all(|l| l.len() == 4));
        assert!(!is_colorable(&bad.graph, &bad.lists).unwrap());

        assert!(lemma2_assignment(&t(&[3, 2])).is_err());
    }
}
