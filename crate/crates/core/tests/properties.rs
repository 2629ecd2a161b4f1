use std::collections::BTreeSet;

use dyckpaint::choose::{
    all_colourings, is_colorable, is_m_extendable, is_m_extendable_by_extensions, lemma2_assignment, m_c_small,
    phi_kappa, Kappa, ListAssignment,
};
use dyckpaint::graphcore::{join_instance, union_instance, SimpleGraph, TokenMap};
use dyckpaint::paintgame::{is_paintable, lemma3_conditions, m_p, prune};
use dyckpaint::pathcount::{
    catalan, encoding_is_dominated, enumerate_paths, psi, x_of_f, LatticePath, Method, Step, XVector,
};
use dyckpaint::verify::monotone_vectors;
use proptest::prelude::*;

fn xvec(max_len: usize, lo: i64, hi: i64) -> impl Strategy<Value = XVector> {
    prop::collection::vec(lo..=hi, 0..=max_len).prop_map(XVector::new)
}

fn graph_with_tokens(max_n: usize, max_f: u32) -> impl Strategy<Value = (SimpleGraph, TokenMap)> {
    (1..=max_n).prop_flat_map(move |n| {
        let pairs = n * (n - 1) / 2;
        (prop::collection::vec(any::<bool>(), pairs), prop::collection::vec(1..=max_f, n)).prop_map(
            move |(bits, f)| {
                let mut edges = Vec::new();
                let mut k = 0;
                for i in 0..n {
                    for j in i + 1..n {
                        if bits[k] {
                            edges.push((i, j));
                        }
                        k += 1;
                    }
                }
                (SimpleGraph::from_edges(n, &edges).unwrap(), TokenMap::new(f).unwrap())
            },
        )
    })
}

fn path_strategy(max_len: usize) -> impl Strategy<Value = LatticePath> {
    prop::collection::vec(any::<bool>(), 0..=max_len)
        .prop_map(|b| LatticePath::new(b.into_iter().map(|u| if u { Step::U } else { Step::R }).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn psi_algorithms_agree(x in xvec(8, -1, 10)) {
        let dp = psi(&x, Method::Dp);
        prop_assert_eq!(&dp, &psi(&x, Method::Rec));
        prop_assert_eq!(&dp, &psi(&x, Method::Det));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn psi_counts_enumerated_paths(x in xvec(5, 0, 5)) {
        let paths = enumerate_paths(&x, 1_000_000).unwrap();
        prop_assert_eq!(psi(&x, Method::Auto), paths.len() as u64);
        prop_assert!(paths.iter().all(|p| p.dominated_by(&x)));
        let strings: Vec<String> = paths.iter().map(|p| p.to_string()).collect();
        let mut sorted = strings.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(strings, sorted);
    }

    #[test]
    fn reduction_preserves_paths(x in xvec(6, -1, 8)) {
        let r = x.reduce();
        prop_assert!(r.is_reduced());
        prop_assert_eq!(r.reduce(), r.clone());
        prop_assert_eq!(psi(&x, Method::Dp), psi(&r, Method::Dp));
        prop_assert_eq!(enumerate_paths(&x, 1_000_000).unwrap(), enumerate_paths(&r, 1_000_000).unwrap());
    }

    #[test]
    fn branch_identity(x in xvec(6, 1, 6)) {
        let x = x.reduce();
        for i in 1..=x.len() {
            let (right, up) = x.branch(i).unwrap();
            prop_assert_eq!(psi(&x, Method::Dp), psi(&right, Method::Dp) + psi(&up, Method::Dp));
        }
    }

    #[test]
    fn psi_is_monotone(x in xvec(6, -1, 7), bumps in prop::collection::vec(0i64..3, 6)) {
        let y = XVector::new(x.entries().iter().zip(&bumps).map(|(a, b)| a + b).collect());
        prop_assert!(x.le_entrywise(&y));
        prop_assert!(psi(&x, Method::Dp).0 <= psi(&y, Method::Dp).0);
    }

    #[test]
    fn encoding_round_trips(p in path_strategy(12), x in xvec(6, 0, 6)) {
        let total = p.len();
        prop_assert_eq!(LatticePath::decode(&p.encode(), total).unwrap(), p.clone());
        let (_, ups) = p.endpoint();
        if ups as usize == x.len() && p.endpoint().0 == x.last().unwrap_or(0) {
            prop_assert_eq!(encoding_is_dominated(&p.encode(), &x, total), p.dominated_by(&x));
        }
    }

    #[test]
    fn join_and_union_counts((g, f) in graph_with_tokens(6, 3), (h, _) in graph_with_tokens(5, 3)) {
        let j = g.join(&h);
        prop_assert_eq!(j.n_edges(), g.n_edges() + h.n_edges() + g.n_vertices() * h.n_vertices());
        for v in 0..g.n_vertices() {
            prop_assert_eq!(j.degree(v), g.degree(v) + h.n_vertices());
        }
        prop_assert_eq!(g.disjoint_union(&h).n_edges(), g.n_edges() + h.n_edges());
        let (jg, jf) = join_instance(&g, &f, 2).unwrap();
        prop_assert_eq!(jg.n_vertices(), g.n_vertices() + 2);
        prop_assert!(jf.values()[g.n_vertices()..].iter().all(|&t| t as usize == g.n_vertices()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn pruning_preserves_paintability((g, f) in graph_with_tokens(6, 3)) {
        let (pg, pf) = prune(&g, &f).unwrap();
        let direct = is_paintable(&g, &f).unwrap();
        let pruned = if pg.n_vertices() == 0 { true } else { is_paintable(&pg, &pf).unwrap() };
        prop_assert_eq!(direct, pruned);
    }

    #[test]
    fn paintable_implies_choosable(
        (g, f) in graph_with_tokens(5, 3),
        seeds in prop::collection::vec(prop::collection::vec(0u32..6, 3), 5),
    ) {
        prop_assume!(is_paintable(&g, &f).unwrap());
        // a list of size f(v) drawn from a 6-colour universe
        let lists: Vec<BTreeSet<u32>> = f.values().iter().zip(&seeds).map(|(&k, s)| {
            let mut l = BTreeSet::new();
            let mut c = s[0];
            for step in s.iter().cycle().skip(1) {
                if l.len() == k as usize { break; }
                while l.contains(&c) { c = (c + 1) % 6; }
                l.insert(c);
                c = (c + step + 1) % 6;
            }
            l
        }).collect();
        prop_assert!(is_colorable(&g, &ListAssignment::new(lists)).unwrap());
    }

    #[test]
    fn m_p_is_monotone_in_tokens((g, f) in graph_with_tokens(3, 3), v in 0usize..3) {
        let v = v % f.len();
        let mut bumped = f.values().to_vec();
        bumped[v] += 1;
        let bumped = TokenMap::new(bumped).unwrap();
        prop_assert!(m_p(&g, &f).unwrap() <= m_p(&g, &bumped).unwrap());
    }

    #[test]
    fn m_p_at_most_m_c((g, f) in graph_with_tokens(3, 3)) {
        prop_assume!(f.sum() <= 9);
        let mp = m_p(&g, &f).unwrap();
        prop_assert!(Kappa::Finite(mp) <= m_c_small(&g, &f).unwrap());
    }

    #[test]
    fn colour_renaming_keeps_kappa(
        (g, f) in graph_with_tokens(4, 3),
        seed in prop::collection::vec(0u32..6, 12),
        shift in 1u32..50,
    ) {
        let mut it = seed.iter().copied();
        let lists: Vec<BTreeSet<u32>> = f.values().iter()
            .map(|&k| (0..k).map(|_| it.next().unwrap_or(0)).collect())
            .collect();
        let l = ListAssignment::new(lists);
        // an arbitrary bijection on the naturals: swap 0 and 3, then offset
        let sigma = |c: u32| (match c { 0 => 3, 3 => 0, c => c }) * 7 + shift;
        prop_assert_eq!(phi_kappa(&g, &l).unwrap().1, phi_kappa(&g, &l.relabel(sigma)).unwrap().1);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn join_conditions_track_m_p((g, f) in graph_with_tokens(3, 3)) {
        prop_assume!(is_paintable(&g, &f).unwrap());
        let mp = m_p(&g, &f).unwrap() as i64;
        for m in 0..=mp + 1 {
            let (c1, c2) = lemma3_conditions(&g, &f, m).unwrap();
            prop_assert_eq!(c1, mp <= m, "cond1 at m = {}", m);
            prop_assert_eq!(c2, mp >= m, "cond2 at m = {}", m);
        }
    }

    #[test]
    fn extendability_matches_direct_check(
        (g, f) in graph_with_tokens(3, 2),
        seed in prop::collection::vec(0u32..5, 6),
        m in 0u64..=4,
    ) {
        let mut it = seed.iter().copied();
        let lists: Vec<BTreeSet<u32>> = f.values().iter()
            .map(|&k| (0..k).map(|_| it.next().unwrap()).collect())
            .collect();
        let l = ListAssignment::new(lists);
        prop_assert_eq!(is_m_extendable(&g, &l, m).unwrap(), is_m_extendable_by_extensions(&g, &l, m).unwrap());
    }
}

#[test]
fn staircase_is_catalan() {
    for n in 0..=14i64 {
        let x = XVector::new((0..n).collect());
        for method in [Method::Dp, Method::Rec, Method::Det] {
            assert_eq!(psi(&x, method), catalan(n as u64));
        }
    }
}

#[test]
fn marking_dominates_branches() {
    // x is taken positionally here, as the marked vector need not be sorted
    let positional = |g: &[i64]| XVector::new(g.iter().enumerate().map(|(j, v)| v - (j as i64 + 1)).collect());
    for n in 1..=4 {
        for f in monotone_vectors(n, 5) {
            let f: Vec<i64> = f.into_iter().map(i64::from).collect();
            let x = x_of_f(&f).unwrap();
            for mask in 1u32..(1 << n) {
                let i = mask.trailing_zeros() as usize;
                let g: Vec<i64> = (0..n).map(|j| f[j] - i64::from(mask >> j & 1)).collect();
                let (right, up) = x.branch(i + 1).unwrap();
                assert!(right.le_entrywise(&positional(&g)), "f={f:?} mask={mask:b}");
                let mut rest = g.clone();
                rest.remove(i);
                assert!(up.le_entrywise(&positional(&rest)), "f={f:?} mask={mask:b}");
            }
        }
    }
}

#[test]
fn path_encoding_lists_are_not_colourable() {
    let mut checked = 0;
    for n in 1..=4 {
        for f in monotone_vectors(n, 6) {
            let f = TokenMap::new(f).unwrap();
            let x = x_of_f(&f.as_i64()).unwrap();
            if psi(&x, Method::Dp).to_u64().is_some_and(|p| p <= 200) {
                let bad = lemma2_assignment(&f).unwrap();
                assert!(!is_colorable(&bad.graph, &bad.lists).unwrap(), "f = {f}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn clique_choosability_matches_psi() {
    for n in 1..=3 {
        for f in monotone_vectors(n, 3) {
            let f = TokenMap::new(f).unwrap();
            if f.sum() > 9 {
                continue;
            }
            let expected = psi(&x_of_f(&f.as_i64()).unwrap(), Method::Dp).to_u64().unwrap();
            assert_eq!(m_c_small(&SimpleGraph::complete(n), &f).unwrap(), Kappa::Finite(expected), "f = {f}");
        }
    }
}

#[test]
fn union_of_unpaintable_part_is_unpaintable() {
    let parts = vec![
        (SimpleGraph::complete(2), TokenMap::new(vec![1, 1]).unwrap()),
        (SimpleGraph::edgeless(2), TokenMap::new(vec![3, 3]).unwrap()),
    ];
    let (g, f) = union_instance(&parts).unwrap();
    assert_eq!(m_p(&g, &f).unwrap(), 0);
    assert!(all_colourings(&g, &ListAssignment::from_vecs(&[&[1], &[1], &[1, 2, 3], &[1, 2, 3]])).unwrap().is_empty());
}
