mod common;

use std::collections::BTreeSet;

use common::*;
use gridpaths::cli_io::{read_dimacs, read_graph, read_representation, write_dimacs, write_graph, write_representation};
use gridpaths::embedding::validate_embedding;
use gridpaths::graph_core::LabeledGraph;
use gridpaths::grid_geom::{path_intersection, Dir, GridPath, GridPoint, Intersection, PointClass};
use gridpaths::representation::{contact_report, derive_graph, refine, validate};
use gridpaths::sat_reduction::{incidence_graph, Formula, Literal};
use gridpaths::solvers::{is_k_colorable, max_independent_set, min_clique_cover, sat_solve, SatResult, SearchBudget};
use proptest::prelude::*;

fn arb_path() -> impl Strategy<Value = GridPath> {
    let start = (-4i64..5, -4i64..5);
    let legs = prop::collection::vec((0usize..4, 1i64..4), 1..4);
    (start, legs, any::<bool>()).prop_filter_map("self-crossing", |((x, y), legs, turn)| {
        let mut seq = vec![GridPoint::new(x, y)];
        let mut d = Dir::ALL[legs[0].0];
        for (i, &(_, len)) in legs.iter().enumerate() {
            if i > 0 {
                d = if turn ^ (legs[i].0 % 2 == 0) { d.rotate_ccw() } else { d.rotate_cw() };
            }
            seq.push(seq.last().unwrap().offset(d, len));
        }
        GridPath::new(seq).ok()
    })
}

/// Common lattice points, or overlap when some unit edge lies on both paths.
fn lattice_intersection(p: &GridPath, q: &GridPath) -> Intersection {
    let unit_edges = |r: &GridPath| -> BTreeSet<(GridPoint, GridPoint)> {
        r.lattice_points().windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect()
    };
    if !unit_edges(p).is_disjoint(&unit_edges(q)) {
        return Intersection::Overlap;
    }
    let ps: BTreeSet<GridPoint> = p.lattice_points().into_iter().collect();
    Intersection::Finite(q.lattice_points().into_iter().filter(|x| ps.contains(x)).collect())
}

fn brute_alpha(g: &LabeledGraph) -> usize {
    let (_, adj) = g.indexed();
    let n = adj.len();
    (0u32..1 << n)
        .filter(|&s| (0..n).all(|v| s >> v & 1 == 0 || adj[v].iter().all(|&w| s >> w & 1 == 0)))
        .map(u32::count_ones)
        .max()
        .unwrap_or(0) as usize
}

fn brute_colorable(adj: &[Vec<usize>], k: usize) -> bool {
    let n = adj.len();
    (0..k.pow(n as u32)).any(|mut code| {
        let mut c = vec![0; n];
        for slot in c.iter_mut() {
            *slot = code % k;
            code /= k;
        }
        (0..n).all(|v| adj[v].iter().all(|&w| c[v] != c[w]))
    })
}

fn complement(g: &LabeledGraph) -> Vec<Vec<usize>> {
    let (_, adj) = g.indexed();
    let n = adj.len();
    (0..n).map(|v| (0..n).filter(|&w| w != v && !adj[v].contains(&w)).collect()).collect()
}

fn small_graph() -> impl Strategy<Value = LabeledGraph> {
    (any::<u64>(), 1usize..8, 0usize..14).prop_map(|(seed, n, m)| random_bounded_graph(&mut rng(seed), n, m, n, false))
}

fn small_formula() -> impl Strategy<Value = Formula> {
    prop::collection::vec(prop::collection::btree_map(0usize..5, any::<bool>(), 1..4), 1..8).prop_map(|clauses| {
        let names = ["a", "b", "c", "d", "e"];
        let clauses: Vec<Vec<Literal>> = clauses
            .into_iter()
            .map(|c| c.into_iter().map(|(v, pos)| Literal { var: names[v].to_string(), positive: pos }).collect())
            .collect();
        Formula::new(&names, clauses)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn intersection_matches_lattice_oracle(p in arb_path(), q in arb_path()) {
        prop_assert_eq!(path_intersection(&p, &q), lattice_intersection(&p, &q));
    }

    #[test]
    fn intersection_is_symmetric_and_scales(p in arb_path(), q in arb_path()) {
        let pq = path_intersection(&p, &q);
        prop_assert_eq!(&pq, &path_intersection(&q, &p));
        let scaled = path_intersection(&p.scaled(2), &q.scaled(2));
        match pq {
            Intersection::Overlap => prop_assert_eq!(scaled, Intersection::Overlap),
            Intersection::Finite(pts) => {
                prop_assert_eq!(scaled, Intersection::Finite(pts.into_iter().map(|x| x.scale(2)).collect()));
            }
        }
    }

    #[test]
    fn exactly_two_endpoints(p in arb_path()) {
        let ends = p.lattice_points().into_iter().filter(|&x| p.classify(x) == PointClass::Endpoint).count();
        prop_assert_eq!(ends, 2);
    }

    #[test]
    fn representation_text_round_trips(seed in any::<u64>(), paths in 2usize..9) {
        let (_, rep) = random_straight_rep(&mut rng(seed), paths, 7);
        prop_assert_eq!(read_representation(&write_representation(&rep)).unwrap(), rep);
    }

    #[test]
    fn refinement_keeps_graph_and_weights(seed in any::<u64>(), paths in 2usize..9, times in 1u32..3) {
        let (g, rep) = random_straight_rep(&mut rng(seed), paths, 7);
        let fine = refine(&rep, times);
        prop_assert!(validate(&fine).is_valid());
        prop_assert_eq!(derive_graph(&fine).unwrap(), g);
        let before = contact_report(&rep).unwrap().doubled_weight_sum();
        prop_assert_eq!(contact_report(&fine).unwrap().doubled_weight_sum(), before);
    }

    #[test]
    fn graph_text_round_trips(g in small_graph()) {
        prop_assert_eq!(read_graph(&write_graph(&g)).unwrap(), g);
    }

    #[test]
    fn dimacs_round_trips(f in small_formula()) {
        let back = read_dimacs(&write_dimacs(&f)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn sat_agrees_with_truth_tables(f in small_formula()) {
        let any_model = (0u32..32).any(|bits| {
            let a = f.variables.iter().enumerate().map(|(i, v)| (v.clone(), bits >> i & 1 == 1)).collect();
            f.satisfied_by(&a)
        });
        match sat_solve(&f) {
            SatResult::Sat(a) => prop_assert!(any_model && f.satisfied_by(&a)),
            _ => prop_assert!(!any_model),
        }
    }

    #[test]
    fn independence_number_matches_subsets(g in small_graph()) {
        let (alpha, s) = max_independent_set(&g, &SearchBudget::default()).unwrap();
        prop_assert_eq!(alpha, brute_alpha(&g));
        prop_assert_eq!(s.len(), alpha);
    }

    #[test]
    fn clique_cover_is_complement_colouring(g in small_graph()) {
        let (theta, cover) = min_clique_cover(&g, &SearchBudget::default()).unwrap();
        prop_assert_eq!(cover.len(), theta);
        let co = complement(&g);
        let chi = (1..=g.vertex_count()).find(|&k| brute_colorable(&co, k)).unwrap_or(0);
        prop_assert_eq!(theta, chi);
    }

    #[test]
    fn colouring_matches_enumeration(g in small_graph(), k in 1usize..4) {
        let (_, adj) = g.indexed();
        let got = is_k_colorable(&g, k, &SearchBudget::default()).unwrap();
        prop_assert_eq!(got.is_some(), brute_colorable(&adj, k));
        if let Some(c) = got {
            prop_assert!(g.edges().iter().all(|(u, v)| c[u] != c[v] && c[u] < k));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn doubled_embeddings_stay_valid(seed in any::<u64>(), prism in any::<bool>()) {
        let f = random_formula(&mut rng(seed), 4, prism);
        let h = incidence_graph(&f);
        let emb = embed_small(&h, 2).expect("small planar graph embeds");
        prop_assert!(validate_embedding(&h, &emb).is_valid());
        prop_assert!(validate_embedding(&h, &emb.scaled(2)).is_valid());
    }
}
