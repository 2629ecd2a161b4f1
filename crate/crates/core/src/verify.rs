//! Sweeps over instance families that check the identities between `ψ`,
//! `m_p` and `m_c`, with reports as TSV or JSON.
//!
//! A row fails with [`Status::Violation`] only when an identity is
//! contradicted. Rows that hit a solver or enumeration cap are reported as
//! [`Status::CapExceeded`] and do not abort the sweep.

use std::fmt;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;

use crate::choose::{self, is_colorable, lemma2_assignment, m_c_small, Kappa};
use crate::error::{Error, Result};
use crate::graphcore::{union_instance, SimpleGraph, TokenMap};
use crate::paintgame::{
    lister_beats_all_painters, m_p, painter_survives_all_listers, GameInstance, JoinPainter, SolverStrategy,
};
use crate::pathcount::{psi, x_of_f, BigCount, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Violation,
    CapExceeded,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::CapExceeded => "cap_exceeded",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Row {
    pub instance: String,
    pub psi_dp: Option<BigCount>,
    pub psi_rec: Option<BigCount>,
    pub psi_det: Option<BigCount>,
    pub m_p: Option<u64>,
    pub m_c: Option<Kappa>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Row {
    fn new(instance: String) -> Self {
        Row {
            instance,
            psi_dp: None,
            psi_rec: None,
            psi_det: None,
            m_p: None,
            m_c: None,
            status: Status::Pass,
            note: None,
        }
    }

    fn fail(&mut self, why: String) {
        self.status = Status::Violation;
        self.push_note(why);
    }

    fn capped(&mut self, err: &Error) {
        if self.status == Status::Pass {
            self.status = Status::CapExceeded;
        }
        self.push_note(err.to_string());
    }

    fn push_note(&mut self, s: String) {
        match &mut self.note {
            Some(n) => {
                n.push_str("; ");
                n.push_str(&s);
            }
            None => self.note = Some(s),
        }
    }

    /// Fills the three `ψ` columns; returns the common value, or `None`
    /// after recording a violation if they differ.
    fn fill_psi(&mut self, f: &TokenMap) -> Result<Option<BigCount>> {
        let x = x_of_f(&f.as_i64())?;
        let dp = psi(&x, Method::Dp);
        let rec = psi(&x, Method::Rec);
        let det = psi(&x, Method::Det);
        let agree = dp == rec && rec == det;
        self.psi_dp = Some(dp.clone());
        self.psi_rec = Some(rec);
        self.psi_det = Some(det);
        if agree {
            Ok(Some(dp))
        } else {
            self.fail(format!("ψ algorithms disagree for x = {x}"));
            Ok(None)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub violation: usize,
    pub cap_exceeded: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub name: String,
    pub rows: Vec<Row>,
}

impl Report {
    pub fn summary(&self) -> Summary {
        let count = |s| self.rows.iter().filter(|r| r.status == s).count();
        Summary {
            pass: count(Status::Pass),
            violation: count(Status::Violation),
            cap_exceeded: count(Status::CapExceeded),
        }
    }

    pub fn violations(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.status == Status::Violation)
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::from("instance\tpsi_dp\tpsi_rec\tpsi_det\tm_p\tm_c\tstatus\n");
        let dash = |o: Option<String>| o.unwrap_or_else(|| "-".into());
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.instance,
                dash(r.psi_dp.as_ref().map(|v| v.to_string())),
                dash(r.psi_rec.as_ref().map(|v| v.to_string())),
                dash(r.psi_det.as_ref().map(|v| v.to_string())),
                dash(r.m_p.map(|v| v.to_string())),
                dash(r.m_c.map(|v| v.to_string())),
                r.status
            );
        }
        out
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            name: &'a str,
            summary: Summary,
            rows: &'a [Row],
        }
        serde_json::to_string_pretty(&Out { name: &self.name, summary: self.summary(), rows: &self.rows })
            .expect("report serializes")
    }
}

fn run_rows<T: Sync>(items: &[T], f: impl Fn(&T) -> Row + Sync + Send) -> Vec<Row> {
    items.par_iter().map(f).collect()
}

/// Weakly increasing vectors of length `n` with entries in `1..=max`.
pub fn monotone_vectors(n: usize, max: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    fn go(n: usize, lo: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in lo..=max {
            cur.push(v);
            go(n, v, max, cur, out);
            cur.pop();
        }
    }
    go(n, 1, max, &mut Vec::new(), &mut out);
    out
}

/// All vectors of length `n` with entries in `1..=max`, lexicographically.
pub fn all_vectors(n: usize, max: u32) -> Vec<Vec<u32>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|v| {
                (1..=max).map(move |k| {
                    let mut w = v.clone();
                    w.push(k);
                    w
                })
            })
            .collect()
    })
}

fn m_c_feasible(g: &SimpleGraph, f: &TokenMap) -> bool {
    g.n_vertices() <= choose::MC_MAX_VERTICES && f.sum() <= choose::MC_MAX_TOTAL
}

fn token_map(v: &[u32]) -> TokenMap {
    TokenMap::new(v.to_vec()).expect("positive entries")
}

/// `m_p(K_n, f) = ψ(x(f))` for `n ≤ n_max` and weakly increasing `f ≤ f_max`,
/// and `m_c(K_n, f) = ψ(x(f))` where `m_c_small` applies.
pub fn verify_theorem2(n_max: usize, f_max: u32) -> Report {
    let items: Vec<Vec<u32>> = (1..=n_max).flat_map(|n| monotone_vectors(n, f_max)).collect();
    let rows = run_rows(&items, |v| {
        let f = token_map(v);
        let g = SimpleGraph::complete(v.len());
        let mut row = Row::new(format!("K{} f={f}", v.len()));
        let expected = match row.fill_psi(&f) {
            Ok(Some(p)) => p,
            Ok(None) => return row,
            Err(e) => {
                row.fail(e.to_string());
                return row;
            }
        };
        match m_p(&g, &f) {
            Ok(mp) => {
                row.m_p = Some(mp);
                if expected != mp {
                    row.fail(format!("m_p = {mp} but ψ = {expected}"));
                }
            }
            Err(e) => row.capped(&e),
        }
        if m_c_feasible(&g, &f) {
            match m_c_small(&g, &f) {
                Ok(mc) => {
                    row.m_c = Some(mc);
                    if expected.to_u64().map(Kappa::Finite) != Some(mc) {
                        row.fail(format!("m_c = {mc} but ψ = {expected}"));
                    }
                }
                Err(e) => row.capped(&e),
            }
        }
        row
    });
    Report { name: format!("thm2 n_max={n_max} f_max={f_max}"), rows }
}

/// `m_p(K̄_n, f) = m_c(K̄_n, f) = ∏ f` for `n ≤ n_max` and all `f ≤ f_max`.
pub fn verify_theorem1(n_max: usize, f_max: u32) -> Report {
    let items: Vec<Vec<u32>> = (1..=n_max).flat_map(|n| all_vectors(n, f_max)).collect();
    let rows = run_rows(&items, |v| {
        let f = token_map(v);
        let g = SimpleGraph::edgeless(v.len());
        let expected = f.product();
        let mut row = Row::new(format!("Kbar{} f={f} prod={expected}", v.len()));
        match m_p(&g, &f) {
            Ok(mp) => {
                row.m_p = Some(mp);
                if mp != expected {
                    row.fail(format!("m_p = {mp} but ∏f = {expected}"));
                }
            }
            Err(e) => row.capped(&e),
        }
        if m_c_feasible(&g, &f) {
            match m_c_small(&g, &f) {
                Ok(mc) => {
                    row.m_c = Some(mc);
                    if mc != Kappa::Finite(expected) {
                        row.fail(format!("m_c = {mc} but ∏f = {expected}"));
                    }
                }
                Err(e) => row.capped(&e),
            }
        }
        row
    });
    Report { name: format!("thm1 n_max={n_max} f_max={f_max}"), rows }
}

/// A labelled graph with token counts, used as a component of a union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub label: String,
    pub graph: SimpleGraph,
    pub f: TokenMap,
}

impl Part {
    pub fn new(label: &str, graph: SimpleGraph, f: &[u32]) -> Part {
        let f = token_map(f);
        Part { label: format!("{label}{f}"), graph, f }
    }
}

/// `K_1`, `K_2`, `K̄_2` and `K_3` with weakly increasing `f ≤ f_max`.
pub fn default_catalog(f_max: u32) -> Vec<Part> {
    let mut parts = Vec::new();
    for v in monotone_vectors(1, f_max) {
        parts.push(Part::new("K1", SimpleGraph::complete(1), &v));
    }
    for v in monotone_vectors(2, f_max) {
        parts.push(Part::new("K2", SimpleGraph::complete(2), &v));
    }
    for v in monotone_vectors(2, f_max) {
        parts.push(Part::new("Kbar2", SimpleGraph::edgeless(2), &v));
    }
    for v in monotone_vectors(3, f_max) {
        parts.push(Part::new("K3", SimpleGraph::complete(3), &v));
    }
    parts
}

/// Multisets of `arity` catalog indices, as sorted index tuples.
fn index_multisets(len: usize, arity: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn go(len: usize, arity: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == arity {
            out.push(cur.clone());
            return;
        }
        for i in lo..len {
            cur.push(i);
            go(len, arity, i, cur, out);
            cur.pop();
        }
    }
    go(len, arity, 0, &mut Vec::new(), &mut out);
    out
}

/// `m_p` of every union of `arity` catalog parts (with repetition) against
/// the product of the parts' `m_p`, and the same for `m_c` where the union
/// is small enough for `m_c_small`.
pub fn verify_multiplicativity(catalog: &[Part], arity: usize) -> Report {
    let part_mp: Vec<Result<u64>> = catalog.par_iter().map(|p| m_p(&p.graph, &p.f)).collect();
    let part_mc: Vec<Option<Result<Kappa>>> = catalog
        .par_iter()
        .map(|p| m_c_feasible(&p.graph, &p.f).then(|| m_c_small(&p.graph, &p.f)))
        .collect();
    let combos = index_multisets(catalog.len(), arity);
    let rows = run_rows(&combos, |idx| {
        let label = idx.iter().map(|&i| catalog[i].label.as_str()).collect::<Vec<_>>().join(" + ");
        let mut row = Row::new(label);
        let pieces: Vec<(SimpleGraph, TokenMap)> =
            idx.iter().map(|&i| (catalog[i].graph.clone(), catalog[i].f.clone())).collect();
        let (g, f) = match union_instance(&pieces) {
            Ok(u) => u,
            Err(e) => {
                row.fail(e.to_string());
                return row;
            }
        };
        let mut product = Some(1u64);
        for &i in idx {
            match &part_mp[i] {
                Ok(v) => product = product.map(|p| p * v),
                Err(e) => {
                    row.capped(e);
                    product = None;
                }
            }
        }
        if let Some(product) = product {
            match m_p(&g, &f) {
                Ok(mp) => {
                    row.m_p = Some(mp);
                    if mp != product {
                        row.fail(format!("m_p = {mp} but the parts multiply to {product}"));
                    }
                }
                Err(e) => row.capped(&e),
            }
        }
        if m_c_feasible(&g, &f) {
            let mut product = Some(Kappa::Finite(1));
            for &i in idx {
                product = match (product, &part_mc[i]) {
                    (Some(acc), Some(Ok(k))) => Some(kappa_mul(acc, *k)),
                    _ => None,
                };
            }
            match m_c_small(&g, &f) {
                Ok(mc) => {
                    row.m_c = Some(mc);
                    if let Some(p) = product {
                        if p != mc {
                            row.fail(format!("m_c = {mc} but the parts multiply to {p}"));
                        }
                    }
                }
                Err(e) => row.capped(&e),
            }
        }
        row
    });
    Report { name: format!("mult arity={arity} parts={}", catalog.len()), rows }
}

fn kappa_mul(a: Kappa, b: Kappa) -> Kappa {
    match (a, b) {
        (Kappa::Finite(0), _) | (_, Kappa::Finite(0)) => Kappa::Finite(0),
        (Kappa::Finite(x), Kappa::Finite(y)) => Kappa::Finite(x * y),
        _ => Kappa::Infinite,
    }
}

/// `m_p(P_3, f)` for every `f ∈ {1..f_max}^3`, plus `m_c` where feasible.
/// A row is a violation only if `m_p > m_c`.
pub fn explore_p3(f_max: u32) -> Report {
    let items = all_vectors(3, f_max);
    let g = SimpleGraph::path(3);
    let rows = run_rows(&items, |v| {
        let f = token_map(v);
        let mut row = Row::new(format!("P3 f={f}"));
        match m_p(&g, &f) {
            Ok(mp) => row.m_p = Some(mp),
            Err(e) => row.capped(&e),
        }
        if m_c_feasible(&g, &f) {
            match m_c_small(&g, &f) {
                Ok(mc) => row.m_c = Some(mc),
                Err(e) => row.capped(&e),
            }
        }
        if let (Some(mp), Some(mc)) = (row.m_p, row.m_c) {
            if !Kappa::Finite(mp).le(&mc) {
                row.fail(format!("m_p = {mp} exceeds m_c = {mc}"));
            }
        }
        row
    });
    Report { name: format!("p3 f_max={f_max}"), rows }
}

/// The adversarial list assignment on `K_n ⊕ K̄_ψ` is not colourable, for
/// every weakly increasing `f ≤ f_max` with `n ≤ n_max` and `ψ ≤ psi_max`.
/// Larger `ψ` are skipped, not reported.
pub fn verify_bad_lists(n_max: usize, f_max: u32, psi_max: u64) -> Report {
    let items: Vec<Vec<u32>> = (1..=n_max)
        .flat_map(|n| monotone_vectors(n, f_max))
        .filter(|v| {
            let x = x_of_f(&token_map(v).as_i64()).expect("monotone");
            psi(&x, Method::Dp).to_u64().is_some_and(|p| p <= psi_max)
        })
        .collect();
    let rows = run_rows(&items, |v| {
        let f = token_map(v);
        let mut row = Row::new(format!("K{} f={f} bad lists", v.len()));
        if let Ok(None) | Err(_) = row.fill_psi(&f) {
            return row;
        }
        match lemma2_assignment(&f).and_then(|bad| is_colorable(&bad.graph, &bad.lists)) {
            Ok(false) => {}
            Ok(true) => row.fail("assignment is colourable".into()),
            Err(e) => row.capped(&e),
        }
        row
    });
    Report { name: format!("badlists n_max={n_max} f_max={f_max} psi_max={psi_max}"), rows }
}

/// Strategy duels on `K_n ⊕ K̄_m` for every `f ∈ {1..f_max}^n`, `n ≤ n_max`:
/// the constructive Painter survives every Lister line at `m = ψ − 1`, and
/// the solver's Lister beats every Painter line at `m = ψ`.
pub fn verify_duels(n_max: usize, f_max: u32) -> Report {
    let items: Vec<Vec<u32>> = (1..=n_max).flat_map(|n| all_vectors(n, f_max)).collect();
    let rows = run_rows(&items, |v| {
        let f = token_map(v);
        let mut row = Row::new(format!("K{} f={f} duel", v.len()));
        let (sorted, _) = f.sorted_with_permutation();
        let Ok(Some(p)) = row.fill_psi(&sorted) else {
            return row;
        };
        let Some(p) = p.to_u64() else {
            row.capped(&Error::CapExceeded { what: "ψ".into(), limit: u64::MAX });
            return row;
        };
        if p > 0 {
            let outcome = JoinPainter::new(&f, p - 1).and_then(|mut painter| {
                let start = GameInstance::clique_join(&f, (p - 1) as usize)?.initial_state()?;
                painter_survives_all_listers(&start, &mut painter)
            });
            match outcome {
                Ok(true) => {}
                Ok(false) => row.fail(format!("constructive Painter loses at m = {}", p - 1)),
                Err(e) => row.capped(&e),
            }
        }
        let outcome = GameInstance::clique_join(&f, p as usize).and_then(|inst| {
            let mut lister = SolverStrategy::new(&inst)?;
            lister_beats_all_painters(&inst.initial_state()?, &mut lister)
        });
        match outcome {
            Ok(true) => {}
            Ok(false) => row.fail(format!("solver Lister fails at m = {p}")),
            Err(e) => row.capped(&e),
        }
        row
    });
    Report { name: format!("duel n_max={n_max} f_max={f_max}"), rows }
}
