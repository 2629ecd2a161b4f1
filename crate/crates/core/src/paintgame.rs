//! The Lister/Painter token game.
//!
//! Each round Lister marks a non-empty set `M` of uncoloured vertices and
//! removes one token from each; Painter colours an independent `I ⊆ M`.
//! Lister wins as soon as an uncoloured vertex is left without tokens,
//! Painter wins once everything is coloured.
//!
//! [`Solver`] decides positions of `G ⊕ K̄_m` exhaustively. The joined
//! vertices are interchangeable, so a position stores only how many of them
//! hold each token count. Vertices with more tokens than uncoloured
//! neighbours are dropped before every lookup: Painter can always colour
//! them in time, so they never change the outcome.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphcore::{join_instance, SimpleGraph, TokenMap};
use crate::pathcount::{psi, x_of_f, BigCount, Method};

/// Default bound on the number of distinct positions one solver may store.
pub const DEFAULT_MAX_POSITIONS: usize = 5_000_000;

/// Canonical position with Lister to move.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Position {
    /// Uncoloured base vertices.
    live: u32,
    /// Tokens per base vertex, zero once coloured.
    tokens: Vec<u8>,
    /// `pool[t]`: uncoloured joined vertices holding `t` tokens.
    pool: Vec<u16>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverStats {
    pub positions: u64,
    pub memo_hits: u64,
}

/// Exhaustive win/loss solver for `G ⊕ K̄_m` with a private memo table.
pub struct Solver {
    adj: Vec<u32>,
    memo: HashMap<Position, bool>,
    mis_cache: HashMap<u32, Vec<u32>>,
    max_positions: usize,
    stats: SolverStats,
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

fn to_u8(v: u32) -> Result<u8> {
    u8::try_from(v).map_err(|_| Error::CapExceeded { what: format!("token count {v}"), limit: 255 })
}

impl Solver {
    pub fn new(base: &SimpleGraph) -> Result<Self> {
        base.check_solver_size()?;
        Ok(Solver {
            adj: base.masks(),
            memo: HashMap::new(),
            mis_cache: HashMap::new(),
            max_positions: DEFAULT_MAX_POSITIONS,
            stats: SolverStats::default(),
        })
    }

    pub fn with_max_positions(mut self, limit: usize) -> Self {
        self.max_positions = limit;
        self
    }

    pub fn stats(&self) -> SolverStats {
        self.stats
    }

    fn n(&self) -> usize {
        self.adj.len()
    }

    /// Start of the `f^(m)` game on `G ⊕ K̄_m`. `tokens` may contain zeros
    /// (such a game is lost before it starts); `None` means Lister has
    /// already won.
    pub fn initial_position(&self, tokens: &[u32], m: usize) -> Result<Option<Position>> {
        let n = self.n();
        if tokens.len() != n {
            return Err(Error::SizeMismatch { expected: n, actual: tokens.len() });
        }
        if tokens.contains(&0) || (n == 0 && m > 0) {
            return Ok(None);
        }
        let mut pool = vec![0u16; n + 1];
        if m > 0 {
            pool[n] = u16::try_from(m)
                .map_err(|_| Error::CapExceeded { what: format!("{m} joined vertices"), limit: u16::MAX as u64 })?;
        }
        Ok(Some(Position {
            live: if n == 0 { 0 } else { u32::MAX >> (32 - n) },
            tokens: tokens.iter().map(|&t| to_u8(t)).collect::<Result<_>>()?,
            pool,
        }))
    }

    /// Position for an explicit game state whose first `n` vertices are the
    /// base graph and the rest are joined vertices. `None` if Lister has won.
    pub fn position_of(&self, state: &GameState) -> Result<Option<Position>> {
        let n = self.n();
        let mut live = 0u32;
        let mut tokens = vec![0u8; n];
        let mut pool = vec![0u16; n + 1];
        for v in 0..state.graph.n_vertices() {
            if state.coloured[v] {
                continue;
            }
            let t = state.tokens[v];
            if t == 0 {
                return Ok(None);
            }
            if v < n {
                live |= 1 << v;
                tokens[v] = to_u8(t)?;
            } else {
                // joined vertices never gain tokens
                let t = (t as usize).min(n);
                pool[t] += 1;
            }
        }
        Ok(Some(Position { live, tokens, pool }))
    }

    /// Whether `G ⊕ K̄_m` is `f^(m)`-paintable.
    pub fn paintable(&mut self, tokens: &[u32], m: usize) -> Result<bool> {
        match self.initial_position(tokens, m)? {
            None => Ok(false),
            Some(p) => self.painter_wins(p),
        }
    }

    // Deletion of vertices with more tokens than live
    // neighbours, to a fixed point.
    fn normalize(&self, p: &mut Position) {
        loop {
            let mut changed = false;
            let pool_total: u32 = p.pool.iter().map(|&c| c as u32).sum();
            for v in bits(p.live) {
                let deg = (self.adj[v] & p.live).count_ones() + pool_total;
                if p.tokens[v] as u32 > deg {
                    p.live &= !(1 << v);
                    p.tokens[v] = 0;
                    changed = true;
                }
            }
            let live_count = p.live.count_ones() as usize;
            for t in live_count + 1..p.pool.len() {
                if p.pool[t] > 0 {
                    p.pool[t] = 0;
                    changed = true;
                }
            }
            if !changed {
                return;
            }
        }
    }

    fn maximal_independent_sets(&mut self, within: u32) -> Vec<u32> {
        if let Some(v) = self.mis_cache.get(&within) {
            return v.clone();
        }
        let mut out = Vec::new();
        fn expand(adj: &[u32], chosen: u32, cand: u32, excl: u32, out: &mut Vec<u32>) {
            if cand == 0 {
                if excl == 0 {
                    out.push(chosen);
                }
                return;
            }
            let mut cand = cand;
            let mut excl = excl;
            for v in bits(cand) {
                let keep = !adj[v] & !(1 << v);
                expand(adj, chosen | 1 << v, cand & keep, excl & keep, out);
                cand &= !(1 << v);
                excl |= 1 << v;
            }
        }
        expand(&self.adj, 0, within, 0, &mut out);
        out.sort_unstable_by(|a, b| b.count_ones().cmp(&a.count_ones()).then(a.cmp(b)));
        self.mis_cache.insert(within, out.clone());
        out
    }

    /// `true` iff Painter wins from `p` with Lister to move.
    pub fn painter_wins(&mut self, mut p: Position) -> Result<bool> {
        self.normalize(&mut p);
        if p.live == 0 && p.pool.iter().all(|&c| c == 0) {
            return Ok(true);
        }
        if let Some(&v) = self.memo.get(&p) {
            self.stats.memo_hits += 1;
            return Ok(v);
        }
        if self.memo.len() >= self.max_positions {
            return Err(Error::CapExceeded {
                what: "game positions".into(),
                limit: self.max_positions as u64,
            });
        }
        let result = !self.lister_has_winning_move(&p)?;
        self.stats.positions += 1;
        self.memo.insert(p, result);
        Ok(result)
    }

    fn lister_has_winning_move(&mut self, p: &Position) -> Result<bool> {
        let classes: Vec<usize> = (1..p.pool.len()).filter(|&t| p.pool[t] > 0).collect();
        let ones: u32 = bits(p.live).filter(|&v| p.tokens[v] == 1).fold(0, |m, v| m | 1 << v);
        let mut marks = vec![0u16; p.pool.len()];
        let mut u = p.live;
        loop {
            // joined-side marks as a mixed-radix counter, largest first
            for &t in &classes {
                marks[t] = p.pool[t];
            }
            loop {
                let any_joined = classes.iter().any(|&t| marks[t] > 0);
                if (u != 0 || any_joined) && self.move_wins_for_lister(p, u, &marks, ones)? {
                    return Ok(true);
                }
                let mut k = 0;
                while k < classes.len() && marks[classes[k]] == 0 {
                    marks[classes[k]] = p.pool[classes[k]];
                    k += 1;
                }
                if k == classes.len() {
                    break;
                }
                marks[classes[k]] -= 1;
            }
            if u == 0 {
                return Ok(false);
            }
            u = (u - 1) & p.live;
        }
    }

    fn move_wins_for_lister(&mut self, p: &Position, u: u32, marks: &[u16], ones: u32) -> Result<bool> {
        let any_joined = marks.iter().any(|&k| k > 0);
        // Painter colours every marked joined vertex
        if any_joined && u & ones == 0 {
            let mut next = p.clone();
            for v in bits(u) {
                next.tokens[v] -= 1;
            }
            for (slot, &k) in next.pool.iter_mut().zip(marks) {
                *slot -= k;
            }
            if self.painter_wins(next)? {
                return Ok(false);
            }
        }
        // Painter colours a maximal independent set of the marked base part
        if u != 0 && marks.get(1).copied().unwrap_or(0) == 0 {
            for set in self.maximal_independent_sets(u) {
                if (u & !set) & ones != 0 {
                    continue;
                }
                let mut next = p.clone();
                for v in bits(set) {
                    next.tokens[v] = 0;
                }
                next.live &= !set;
                for v in bits(u & !set) {
                    next.tokens[v] -= 1;
                }
                for t in 1..marks.len() {
                    next.pool[t] -= marks[t];
                    next.pool[t - 1] += marks[t];
                }
                if self.painter_wins(next)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Whether `G` is `f`-paintable.
pub fn is_paintable(g: &SimpleGraph, f: &TokenMap) -> Result<bool> {
    f.check_for(g)?;
    Solver::new(g)?.paintable(f.values(), 0)
}

/// Smallest `m` such that `G ⊕ K̄_m` is not `f^(m)`-paintable.
pub fn m_p(g: &SimpleGraph, f: &TokenMap) -> Result<u64> {
    f.check_for(g)?;
    let mut solver = Solver::new(g)?;
    m_p_with(&mut solver, f.values())
}

/// [`m_p`] on a caller-owned solver; `tokens` may contain zeros, giving 0.
pub fn m_p_with(solver: &mut Solver, tokens: &[u32]) -> Result<u64> {
    // m = ∏ f(v) is never paintable, so the scan always terminates there
    let bound: u64 = tokens.iter().map(|&t| t as u64).product();
    for m in 0..=bound {
        let m_usize = usize::try_from(m).map_err(|_| Error::CapExceeded {
            what: "joined vertex count".into(),
            limit: usize::MAX as u64,
        })?;
        if !solver.paintable(tokens, m_usize)? {
            return Ok(m);
        }
    }
    Err(Error::Precondition(format!(
        "no unpaintable join found up to m = {bound}"
    )))
}

fn m_p_raw(g: &SimpleGraph, tokens: &[u32]) -> Result<u64> {
    let mut solver = Solver::new(g)?;
    m_p_with(&mut solver, tokens)
}

fn paintable_raw(g: &SimpleGraph, tokens: &[u32]) -> Result<bool> {
    Solver::new(g)?.paintable(tokens, 0)
}

/// Repeatedly deletes vertices with `f(v) > d(v)`; returns the remaining
/// induced subgraph, its tokens and the original indices kept.
pub fn prune_with_indices(g: &SimpleGraph, f: &TokenMap) -> Result<(SimpleGraph, TokenMap, Vec<usize>)> {
    f.check_for(g)?;
    let mut keep: Vec<usize> = (0..g.n_vertices()).collect();
    loop {
        let drop = keep.iter().position(|&v| {
            let deg = keep.iter().filter(|&&u| g.has_edge(v, u)).count();
            f.values()[v] as usize > deg
        });
        match drop {
            Some(k) => {
                keep.remove(k);
            }
            None => break,
        }
    }
    let tokens = TokenMap::new(keep.iter().map(|&v| f.values()[v]).collect())?;
    Ok((g.induced(&keep), tokens, keep))
}

pub fn prune(g: &SimpleGraph, f: &TokenMap) -> Result<(SimpleGraph, TokenMap)> {
    prune_with_indices(g, f).map(|(g, f, _)| (g, f))
}

/// Evaluates the two round-one conditions that bracket `m_p(G, f)`:
/// `cond1` holds iff some non-empty `U ⊆ V(G)` makes `U + (m − m_p(G, f−δ_U))`
/// a winning Lister move, `cond2` iff every non-empty `U` leaves Painter a
/// good reply. Requires `G` to be `f`-paintable.
pub fn lemma3_conditions(g: &SimpleGraph, f: &TokenMap, m: i64) -> Result<(bool, bool)> {
    if !is_paintable(g, f)? {
        return Err(Error::Precondition("graph is not f-paintable".into()));
    }
    let n = g.n_vertices();
    let mut cond1 = false;
    let mut cond2 = true;
    for u in 1u32..(1u32 << n) {
        let members: Vec<usize> = bits(u).collect();
        let reduced: Vec<u32> = (0..n).map(|v| f.values()[v] - (u >> v & 1)).collect();
        let whole = m_p_raw(g, &reduced)? as i64;
        let mut per_vertex = Vec::with_capacity(members.len());
        for &v in &members {
            let rest: Vec<u32> = (0..n).filter(|&w| w != v).map(|w| reduced[w]).collect();
            per_vertex.push(m_p_raw(&g.without_vertex(v), &rest)? as i64);
        }
        let mut big_set_survives = false;
        for i in 1u32..=u {
            if i & u != i || i.count_ones() < 2 {
                continue;
            }
            let set: Vec<usize> = bits(i).collect();
            if !g.is_independent(&set) {
                continue;
            }
            let keep: Vec<usize> = (0..n).filter(|&w| i >> w & 1 == 0).collect();
            let rest: Vec<u32> = keep.iter().map(|&w| reduced[w]).collect();
            if paintable_raw(&g.induced(&keep), &rest)? {
                big_set_survives = true;
                break;
            }
        }
        let slack = m - whole;
        if !big_set_survives && per_vertex.iter().all(|&b| slack >= b) {
            cond1 = true;
        }
        if !(big_set_survives || per_vertex.iter().any(|&b| slack <= b)) {
            cond2 = false;
        }
    }
    Ok((cond1, cond2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lister,
    Painter,
}

/// A join game `G ⊕ K̄_m` with tokens `f^(m)`; plain games use `m = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GameInstance {
    pub base: SimpleGraph,
    pub f: TokenMap,
    pub m: usize,
}

impl GameInstance {
    pub fn new(base: SimpleGraph, f: TokenMap, m: usize) -> Result<Self> {
        f.check_for(&base)?;
        let inst = GameInstance { base, f, m };
        inst.graph()?.check_solver_size()?;
        Ok(inst)
    }

    pub fn clique_join(f: &TokenMap, m: usize) -> Result<Self> {
        Self::new(SimpleGraph::complete(f.len()), f.clone(), m)
    }

    pub fn n_base(&self) -> usize {
        self.base.n_vertices()
    }

    pub fn graph(&self) -> Result<SimpleGraph> {
        Ok(join_instance(&self.base, &self.f, self.m)?.0)
    }

    pub fn initial_state(&self) -> Result<GameState> {
        let (graph, tokens) = join_instance(&self.base, &self.f, self.m)?;
        let n = graph.n_vertices();
        Ok(GameState {
            graph,
            tokens: tokens.values().to_vec(),
            coloured: vec![false; n],
            n_base: self.n_base(),
        })
    }
}

/// Explicit labelled game state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub graph: SimpleGraph,
    pub tokens: Vec<u32>,
    pub coloured: Vec<bool>,
    /// Vertices `0..n_base` form the base graph, the rest are joined.
    pub n_base: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    pub marked: Vec<usize>,
    pub colored: Vec<usize>,
}

impl GameState {
    pub fn uncoloured(&self) -> Vec<usize> {
        (0..self.graph.n_vertices()).filter(|&v| !self.coloured[v]).collect()
    }

    pub fn winner(&self) -> Option<Side> {
        let open = self.uncoloured();
        if open.is_empty() {
            Some(Side::Painter)
        } else if open.iter().any(|&v| self.tokens[v] == 0) {
            Some(Side::Lister)
        } else {
            None
        }
    }

    pub fn check_marks(&self, marked: &[usize]) -> Result<()> {
        let illegal = |reason: String| Error::IllegalMove { side: "lister", reason };
        if marked.is_empty() {
            return Err(illegal("marked set is empty".into()));
        }
        let mut seen = HashSet::new();
        for &v in marked {
            if v >= self.graph.n_vertices() {
                return Err(illegal(format!("vertex {v} does not exist")));
            }
            if self.coloured[v] {
                return Err(illegal(format!("vertex {v} is already coloured")));
            }
            if !seen.insert(v) {
                return Err(illegal(format!("vertex {v} marked twice")));
            }
        }
        Ok(())
    }

    pub fn check_colours(&self, marked: &[usize], colours: &[usize]) -> Result<()> {
        let illegal = |reason: String| Error::IllegalMove { side: "painter", reason };
        let mut seen = HashSet::new();
        for &v in colours {
            if !marked.contains(&v) {
                return Err(illegal(format!("vertex {v} was not marked")));
            }
            if !seen.insert(v) {
                return Err(illegal(format!("vertex {v} coloured twice")));
            }
        }
        if !self.graph.is_independent(colours) {
            return Err(illegal(format!("{colours:?} is not independent")));
        }
        Ok(())
    }

    /// Plays one validated round and returns the new state.
    pub fn play_round(&self, marked: &[usize], colours: &[usize]) -> Result<GameState> {
        self.check_marks(marked)?;
        self.check_colours(marked, colours)?;
        let mut next = self.clone();
        for &v in marked {
            next.tokens[v] -= 1;
        }
        for &v in colours {
            next.coloured[v] = true;
        }
        Ok(next)
    }

    pub fn total_tokens(&self) -> u64 {
        self.uncoloured().iter().map(|&v| self.tokens[v] as u64).sum()
    }

    fn key(&self) -> (Vec<bool>, Vec<u32>) {
        (self.coloured.clone(), self.tokens.clone())
    }
}

pub trait ListerStrategy {
    fn choose_marks(&mut self, state: &GameState) -> Vec<usize>;
}

pub trait PainterStrategy {
    /// `state` is the position before the marked tokens are removed.
    fn choose_colours(&mut self, state: &GameState, marked: &[usize]) -> Vec<usize>;
}

impl<F: FnMut(&GameState) -> Vec<usize>> ListerStrategy for F {
    fn choose_marks(&mut self, state: &GameState) -> Vec<usize> {
        self(state)
    }
}

impl<F: FnMut(&GameState, &[usize]) -> Vec<usize>> PainterStrategy for F {
    fn choose_colours(&mut self, state: &GameState, marked: &[usize]) -> Vec<usize> {
        self(state, marked)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameRecord {
    pub winner: Side,
    pub transcript: Vec<Round>,
}

/// Referee. `max_rounds` defaults to ten times the total token count.
pub fn run_game(
    start: &GameState,
    lister: &mut dyn ListerStrategy,
    painter: &mut dyn PainterStrategy,
    max_rounds: Option<usize>,
) -> Result<GameRecord> {
    let cap = max_rounds.unwrap_or(10 * start.total_tokens() as usize);
    let mut state = start.clone();
    let mut transcript = Vec::new();
    loop {
        if let Some(winner) = state.winner() {
            return Ok(GameRecord { winner, transcript });
        }
        if transcript.len() >= cap {
            return Err(Error::CapExceeded { what: "game rounds".into(), limit: cap as u64 });
        }
        let mut marked = lister.choose_marks(&state);
        marked.sort_unstable();
        state.check_marks(&marked)?;
        let mut colored = painter.choose_colours(&state, &marked);
        colored.sort_unstable();
        state = state.play_round(&marked, &colored)?;
        transcript.push(Round { marked, colored });
    }
}

/// The constructive Painter for `K_n ⊕ K̄_m` with `m < ψ(x(f))`.
///
/// Clique vertices are `0..n`. Each round the uncoloured clique vertices are
/// ranked by remaining tokens (ties by index) and `v_i` is the
/// lowest-ranked marked one. With `m'` marked joined vertices that still
/// hold exactly as many tokens as there are uncoloured clique vertices,
/// Painter colours `v_i` when `m' < ψ(x↑i)` and the marked joined vertices
/// otherwise.
#[derive(Clone, Debug)]
pub struct JoinPainter {
    n: usize,
}

impl JoinPainter {
    pub fn new(f: &TokenMap, m: u64) -> Result<Self> {
        let (sorted, _) = f.sorted_with_permutation();
        let bound = psi(&x_of_f(&sorted.as_i64())?, Method::Dp);
        if bound <= BigCount::from(m) {
            return Err(Error::Precondition(format!(
                "m = {m} is not below ψ(x(f)) = {bound}"
            )));
        }
        Ok(JoinPainter { n: f.len() })
    }

    /// Decision on an arbitrary state; no precondition is checked here.
    pub fn respond(n: usize, state: &GameState, marked: &[usize]) -> Vec<usize> {
        let mut clique: Vec<usize> = (0..n).filter(|&v| !state.coloured[v]).collect();
        clique.sort_by_key(|&v| (state.tokens[v], v));
        let joined_marked: Vec<usize> = marked.iter().copied().filter(|&v| v >= n).collect();
        let Some(i) = clique.iter().position(|v| marked.contains(v)) else {
            return joined_marked;
        };
        let live = clique.len() as u32;
        let m_prime = joined_marked.iter().filter(|&&v| state.tokens[v] <= live).count() as u64;
        let values: Vec<i64> = clique.iter().map(|&v| state.tokens[v] as i64).collect();
        let x = x_of_f(&values).expect("sorted by tokens");
        let (_, up) = x.branch(i + 1).expect("index within clique");
        if psi(&up, Method::Dp) > m_prime.into() {
            vec![clique[i]]
        } else {
            joined_marked
        }
    }
}

impl PainterStrategy for JoinPainter {
    fn choose_colours(&mut self, state: &GameState, marked: &[usize]) -> Vec<usize> {
        JoinPainter::respond(self.n, state, marked)
    }
}

/// Solver-backed optimal play for either side.
///
/// Lister tries marked sets by decreasing size, lexicographically within a
/// size, and takes the first after which every Painter reply loses; Painter
/// tries independent subsets in the same order and takes the first that
/// keeps a won position. A side without a winning move plays the first
/// legal move in that order.
pub struct SolverStrategy {
    solver: Solver,
    n_base: usize,
}

fn subsets_by_size(items: &[usize]) -> Vec<Vec<usize>> {
    let k = items.len();
    let mut out: Vec<Vec<usize>> = (0u32..(1u32 << k))
        .map(|mask| (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| items[i]).collect())
        .collect();
    out.sort_by(|a: &Vec<usize>, b: &Vec<usize>| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    out
}

impl SolverStrategy {
    pub fn new(instance: &GameInstance) -> Result<Self> {
        Ok(SolverStrategy { solver: Solver::new(&instance.base)?, n_base: instance.n_base() })
    }

    pub fn with_max_positions(mut self, limit: usize) -> Self {
        self.solver = self.solver.with_max_positions(limit);
        self
    }

    pub fn stats(&self) -> SolverStats {
        self.solver.stats()
    }

    /// Whether Painter wins from `state` (Lister to move).
    pub fn painter_wins(&mut self, state: &GameState) -> Result<bool> {
        debug_assert_eq!(state.n_base, self.n_base);
        match self.solver.position_of(state)? {
            None => Ok(false),
            Some(p) => self.solver.painter_wins(p),
        }
    }

    fn painter_wins_after(&mut self, state: &GameState, marked: &[usize], colours: &[usize]) -> Result<bool> {
        let next = state.play_round(marked, colours)?;
        self.painter_wins(&next)
    }

    pub fn best_marks(&mut self, state: &GameState) -> Result<Vec<usize>> {
        let candidates: Vec<Vec<usize>> =
            subsets_by_size(&state.uncoloured()).into_iter().filter(|s| !s.is_empty()).collect();
        for marked in &candidates {
            let mut wins = true;
            for reply in maximal_independent_subsets(&state.graph, marked) {
                if self.painter_wins_after(state, marked, &reply)? {
                    wins = false;
                    break;
                }
            }
            if wins {
                return Ok(marked.clone());
            }
        }
        Ok(candidates.into_iter().next().unwrap_or_default())
    }

    pub fn best_colours(&mut self, state: &GameState, marked: &[usize]) -> Result<Vec<usize>> {
        let candidates: Vec<Vec<usize>> = subsets_by_size(marked)
            .into_iter()
            .filter(|s| state.graph.is_independent(s))
            .collect();
        for reply in &candidates {
            if self.painter_wins_after(state, marked, reply)? {
                return Ok(reply.clone());
            }
        }
        Ok(candidates.into_iter().next().unwrap_or_default())
    }
}

impl ListerStrategy for SolverStrategy {
    fn choose_marks(&mut self, state: &GameState) -> Vec<usize> {
        self.best_marks(state).expect("solver within limits")
    }
}

impl PainterStrategy for SolverStrategy {
    fn choose_colours(&mut self, state: &GameState, marked: &[usize]) -> Vec<usize> {
        self.best_colours(state, marked).expect("solver within limits")
    }
}

/// Strategy extracted from the solver for `(G, f)` (`m = 0`).
pub fn optimal_strategy_from_solver(g: &SimpleGraph, f: &TokenMap) -> Result<SolverStrategy> {
    SolverStrategy::new(&GameInstance::new(g.clone(), f.clone(), 0)?)
}

/// Maximal independent subsets of `within`, largest first.
pub fn maximal_independent_subsets(g: &SimpleGraph, within: &[usize]) -> Vec<Vec<usize>> {
    let all: Vec<Vec<usize>> = subsets_by_size(within)
        .into_iter()
        .filter(|s| g.is_independent(s))
        .collect();
    all.iter()
        .filter(|s| {
            within
                .iter()
                .filter(|v| !s.contains(v))
                .all(|&v| s.iter().any(|&u| g.has_edge(u, v)))
        })
        .cloned()
        .collect()
}

/// Plays `painter` against every Lister move sequence; `true` iff Painter
/// never loses.
pub fn painter_survives_all_listers(start: &GameState, painter: &mut dyn PainterStrategy) -> Result<bool> {
    let mut safe = HashSet::new();
    survive(start, painter, &mut safe)
}

fn survive(
    state: &GameState,
    painter: &mut dyn PainterStrategy,
    safe: &mut HashSet<(Vec<bool>, Vec<u32>)>,
) -> Result<bool> {
    match state.winner() {
        Some(Side::Painter) => return Ok(true),
        Some(Side::Lister) => return Ok(false),
        None => {}
    }
    if safe.contains(&state.key()) {
        return Ok(true);
    }
    for marked in subsets_by_size(&state.uncoloured()) {
        if marked.is_empty() {
            continue;
        }
        let colours = painter.choose_colours(state, &marked);
        let next = state.play_round(&marked, &colours)?;
        if !survive(&next, painter, safe)? {
            return Ok(false);
        }
    }
    safe.insert(state.key());
    Ok(true)
}

/// Plays `lister` against every legal Painter reply; `true` iff Lister
/// always wins.
pub fn lister_beats_all_painters(start: &GameState, lister: &mut dyn ListerStrategy) -> Result<bool> {
    let mut won = HashSet::new();
    beat(start, lister, &mut won)
}

fn beat(
    state: &GameState,
    lister: &mut dyn ListerStrategy,
    won: &mut HashSet<(Vec<bool>, Vec<u32>)>,
) -> Result<bool> {
    match state.winner() {
        Some(Side::Lister) => return Ok(true),
        Some(Side::Painter) => return Ok(false),
        None => {}
    }
    if won.contains(&state.key()) {
        return Ok(true);
    }
    let mut marked = lister.choose_marks(state);
    marked.sort_unstable();
    state.check_marks(&marked)?;
    for colours in subsets_by_size(&marked) {
        if !state.graph.is_independent(&colours) {
            continue;
        }
        let next = state.play_round(&marked, &colours)?;
        if !beat(&next, lister, won)? {
            return Ok(false);
        }
    }
    won.insert(state.key());
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::SimpleGraph as G;

    fn t(v: &[u32]) -> TokenMap {
        TokenMap::new(v.to_vec()).unwrap()
    }

    // Plain recursion from the definition on explicit states, without symmetry or
    // pruning: the oracle for the canonical solver.
    fn naive_paintable(g: &G, tokens: &[u32]) -> bool {
        fn rec(g: &G, tokens: &mut Vec<u32>, coloured: &mut Vec<bool>, memo: &mut HashMap<(Vec<u32>, Vec<bool>), bool>) -> bool {
            let open: Vec<usize> = (0..g.n_vertices()).filter(|&v| !coloured[v]).collect();
            if open.is_empty() {
                return true;
            }
            if open.iter().any(|&v| tokens[v] == 0) {
                return false;
            }
            let key = (tokens.clone(), coloured.clone());
            if let Some(&v) = memo.get(&key) {
                return v;
            }
            let mut painter = true;
            'lister: for mask in 1u32..(1 << open.len()) {
                let marked: Vec<usize> = (0..open.len()).filter(|&i| mask >> i & 1 == 1).map(|i| open[i]).collect();
                for sub in 0u32..(1 << marked.len()) {
                    let set: Vec<usize> = (0..marked.len()).filter(|&i| sub >> i & 1 == 1).map(|i| marked[i]).collect();
                    if !g.is_independent(&set) {
                        continue;
                    }
                    for &v in &marked {
                        tokens[v] -= 1;
                    }
                    for &v in &set {
                        coloured[v] = true;
                    }
                    let ok = rec(g, tokens, coloured, memo);
                    for &v in &marked {
                        tokens[v] += 1;
                    }
                    for &v in &set {
                        coloured[v] = false;
                    }
                    if ok {
                        continue 'lister;
                    }
                }
                painter = false;
                break;
            }
            memo.insert(key, painter);
            painter
        }
        rec(g, &mut tokens.to_vec(), &mut vec![false; g.n_vertices()], &mut HashMap::new())
    }

    #[test]
    fn paintable_examples() {
        for n in 1..=4 {
            let f: Vec<u32> = (1..=n as u32).collect();
            assert!(is_paintable(&G::complete(n), &t(&f)).unwrap());
        }
        assert!(!is_paintable(&G::complete(2), &t(&[1, 1])).unwrap());
        let (k24, f) = join_instance(&G::edgeless(2), &t(&[2, 2]), 4).unwrap();
        assert!(!is_paintable(&k24, &f).unwrap());
        let (k23, f) = join_instance(&G::edgeless(2), &t(&[2, 2]), 3).unwrap();
        assert!(is_paintable(&k23, &f).unwrap());
    }

    #[test]
    fn solver_matches_naive_recursion() {
        let graphs = [
            G::complete(3),
            G::path(3),
            G::path(4),
            G::edgeless(3),
            G::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap(),
            G::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap(),
        ];
        for g in &graphs {
            let n = g.n_vertices();
            for code in 0..3u32.pow(n as u32) {
                let f: Vec<u32> = (0..n).map(|i| code / 3u32.pow(i as u32) % 3 + 1).collect();
                let expect = naive_paintable(g, &f);
                assert_eq!(is_paintable(g, &t(&f)).unwrap(), expect, "{g:?} {f:?}");
            }
        }
        // joins solved through the symmetric pool agree with explicit graphs
        for (g, f, m) in [(G::complete(2), vec![1, 3], 1), (G::complete(2), vec![1, 3], 2), (G::path(2), vec![2, 2], 3), (G::edgeless(2), vec![1, 2], 2)] {
            let mut s = Solver::new(&g).unwrap();
            let (jg, jf) = join_instance(&g, &t(&f), m).unwrap();
            assert_eq!(s.paintable(&f, m).unwrap(), naive_paintable(&jg, jf.values()), "{g:?} {f:?} {m}");
        }
    }

    #[test]
    fn m_p_examples() {
        assert_eq!(m_p(&G::edgeless(2), &t(&[2, 2])).unwrap(), 4);
        assert_eq!(m_p(&G::complete(2), &t(&[1, 3])).unwrap(), 2);
        assert_eq!(m_p(&G::complete(1), &t(&[1])).unwrap(), 1);
        assert_eq!(m_p(&G::complete(2), &t(&[1, 1])).unwrap(), 0);
        assert_eq!(m_p(&G::edgeless(0), &t(&[])).unwrap(), 1);
    }

    #[test]
    fn prune_examples() {
        let (g, f) = prune(&G::complete(1), &t(&[1])).unwrap();
        assert_eq!((g.n_vertices(), f.len()), (0, 0));
        let (g, f) = prune(&G::complete(2), &t(&[1, 1])).unwrap();
        assert_eq!((g, f), (G::complete(2), t(&[1, 1])));
        let star = G::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let (g, _) = prune(&star, &t(&[1, 2, 2, 2])).unwrap();
        assert_eq!(g.n_vertices(), 0);
        assert!(is_paintable(&star, &t(&[1, 2, 2, 2])).unwrap());
    }

    #[test]
    fn join_condition_examples() {
        let k1 = G::complete(1);
        assert_eq!(lemma3_conditions(&k1, &t(&[1]), 1).unwrap(), (true, true));
        assert_eq!(lemma3_conditions(&k1, &t(&[1]), 0).unwrap(), (false, true));
        assert_eq!(lemma3_conditions(&k1, &t(&[1]), 2).unwrap(), (true, false));
        assert!(lemma3_conditions(&G::complete(2), &t(&[1, 1]), 0).is_err());
    }

    #[test]
    fn join_painter_examples() {
        // n=1, f=(2), m=1: both marked, m' = 1 is not below ψ(()) = 1
        let inst = GameInstance::clique_join(&t(&[2]), 1).unwrap();
        let s = inst.initial_state().unwrap();
        let mut p = JoinPainter::new(&t(&[2]), 1).unwrap();
        assert_eq!(p.choose_colours(&s, &[0, 1]), vec![1]);

        let inst = GameInstance::clique_join(&t(&[1, 3]), 1).unwrap();
        let s = inst.initial_state().unwrap();
        let mut p = JoinPainter::new(&t(&[1, 3]), 1).unwrap();
        assert_eq!(p.choose_colours(&s, &[0]), vec![0]);
        assert_eq!(p.choose_colours(&s, &[2]), vec![2]);

        assert!(JoinPainter::new(&t(&[1, 3]), 2).is_err());
    }

    #[test]
    fn run_game_examples() {
        let inst = GameInstance::clique_join(&t(&[1]), 0).unwrap();
        let s = inst.initial_state().unwrap();
        let rec = run_game(&s, &mut |_: &GameState| vec![0], &mut |_: &GameState, m: &[usize]| m.to_vec(), None).unwrap();
        assert_eq!(rec.winner, Side::Painter);
        assert_eq!(rec.transcript, vec![Round { marked: vec![0], colored: vec![0] }]);

        let inst = GameInstance::new(G::complete(2), t(&[1, 1]), 0).unwrap();
        let s = inst.initial_state().unwrap();
        let mut lister = SolverStrategy::new(&inst).unwrap();
        let mut painter = SolverStrategy::new(&inst).unwrap();
        let rec = run_game(&s, &mut lister, &mut painter, None).unwrap();
        assert_eq!(rec.winner, Side::Lister);
        assert_eq!(rec.transcript[0].marked, vec![0, 1]);

        let f = t(&[1, 3]);
        let inst = GameInstance::clique_join(&f, 1).unwrap();
        let s = inst.initial_state().unwrap();
        let mut lister = SolverStrategy::new(&inst).unwrap();
        let mut painter = JoinPainter::new(&f, 1).unwrap();
        assert_eq!(run_game(&s, &mut lister, &mut painter, None).unwrap().winner, Side::Painter);
    }

    #[test]
    fn referee_rejects_illegal_moves() {
        let inst = GameInstance::new(G::complete(2), t(&[2, 2]), 0).unwrap();
        let s = inst.initial_state().unwrap();
        let err = run_game(&s, &mut |_: &GameState| vec![], &mut |_: &GameState, m: &[usize]| m.to_vec(), None).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { side: "lister", .. }));
        let err = run_game(&s, &mut |_: &GameState| vec![0, 1], &mut |_: &GameState, m: &[usize]| m.to_vec(), None).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { side: "painter", .. }));
        let err = run_game(&s, &mut |_: &GameState| vec![0], &mut |_: &GameState, _: &[usize]| vec![1], None).unwrap_err();
        assert!(matches!(err, Error::IllegalMove { side: "painter", .. }));
    }

    #[test]
    fn solver_strategy_examples() {
        let g = G::complete(2);
        let mut s = optimal_strategy_from_solver(&g, &t(&[1, 1])).unwrap();
        let st = GameInstance::new(g, t(&[1, 1]), 0).unwrap().initial_state().unwrap();
        assert_eq!(s.best_marks(&st).unwrap(), vec![0, 1]);

        let g = G::complete(1);
        let mut s = optimal_strategy_from_solver(&g, &t(&[1])).unwrap();
        let st = GameInstance::new(g, t(&[1]), 0).unwrap().initial_state().unwrap();
        assert_eq!(s.best_colours(&st, &[0]).unwrap(), vec![0]);

        let f = t(&[1, 3]);
        let inst = GameInstance::clique_join(&f, 2).unwrap();
        let st = inst.initial_state().unwrap();
        let mut lister = SolverStrategy::new(&inst).unwrap();
        let first = lister.best_marks(&st).unwrap();
        for reply in maximal_independent_subsets(&st.graph, &first) {
            let next = st.play_round(&first, &reply).unwrap();
            assert!(!lister.painter_wins(&next).unwrap());
        }
        assert!(lister_beats_all_painters(&st, &mut lister).unwrap());
    }

    #[test]
    fn game_cap_is_enforced() {
        assert!(Solver::new(&G::complete(17)).err().unwrap().is_cap());
        let mut s = Solver::new(&G::edgeless(2)).unwrap().with_max_positions(3);
        assert!(s.paintable(&[3, 3], 8).unwrap_err().is_cap());
    }
}
