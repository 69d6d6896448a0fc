mod common;

use proptest::prelude::*;
use wedgekit::dataset::{
    compute_stats, parse_json_str, parse_tudataset, synthesize, synthesize_shaped, to_json_string, write_tudataset,
    ClassShape, Dataset, Perturbation, SynthConfig, SIGN_NAMES,
};
use wedgekit::ged::{self, CostModel, Method};
use wedgekit::graph::{expected_edge_count, expected_vertex_count, CuneiformGraph, GlyphType, WedgeSpec};

fn any_wedge() -> impl Strategy<Value = WedgeSpec> {
    let coord = prop_oneof![-1e6f64..1e6, Just(0.0), Just(-0.0), Just(1e-300)];
    (0usize..3, prop::array::uniform8(coord))
        .prop_map(|(g, c)| WedgeSpec::new(GlyphType::ALL[g], [[c[0], c[1]], [c[2], c[3]], [c[4], c[5]], [c[6], c[7]]]))
}

fn any_dataset() -> impl Strategy<Value = Dataset> {
    prop::collection::vec((prop::collection::vec(any_wedge(), 1..6), 0usize..3), 1..5).prop_map(|gs| {
        let graphs = gs
            .iter()
            .enumerate()
            .map(|(i, (ws, label))| CuneiformGraph::build_from_wedges((i + 1).to_string(), *label, ws).unwrap())
            .collect();
        Dataset::new(graphs, vec!["a".into(), "b".into(), "c".into()])
    })
}

proptest! {
    #[test]
    fn built_graphs_obey_count_laws(ws in prop::collection::vec(any_wedge(), 0..12)) {
        let g = CuneiformGraph::build_from_wedges("x", 0, &ws).unwrap();
        prop_assert_eq!(g.vertices().len(), expected_vertex_count(ws.len()));
        prop_assert_eq!(g.edges().len(), expected_edge_count(ws.len()));
        prop_assert_eq!(g.vertices().len(), 4 * ws.len());
        prop_assert_eq!(g.edges().len(), 12 * ws.len() + ws.len() * ws.len().saturating_sub(1));
        prop_assert!(g.validate().is_empty());
        prop_assert_eq!(g.wedge_specs(), ws);
    }

    #[test]
    fn json_round_trip_is_exact(d in any_dataset()) {
        let text = to_json_string(&d);
        let back = parse_json_str(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(to_json_string(&back), text);
    }
}

#[test]
fn benchmark_files_with_thirty_classes_use_sign_names() {
    let shapes: Vec<ClassShape> =
        (0..30).map(|k| ClassShape { name: format!("k{k}"), wedges: 1 + k % 5, count: 2 }).collect();
    let d = synthesize_shaped(&shapes, &Perturbation::default(), 3);
    let dir = tempfile::tempdir().unwrap();
    write_tudataset(&d, dir.path(), "Cuneiform").unwrap();
    let back = parse_tudataset(dir.path()).unwrap();
    assert_eq!(back.class_names, SIGN_NAMES.map(String::from).to_vec());
    assert_eq!(back.len(), 60);
    for (a, b) in d.graphs.iter().zip(&back.graphs) {
        assert_eq!(a.label, b.label);
        assert_eq!(a.vertices(), b.vertices());
        assert_eq!(a.edges().len(), b.edges().len());
    }
    let s = compute_stats(&back).unwrap();
    assert_eq!(s.total_graphs, 60);
    assert_eq!(s.class("ba").unwrap().vertices, 4);
}

#[test]
fn zero_perturbation_pairs_are_at_distance_zero() {
    let d = synthesize(&SynthConfig {
        classes: 1,
        per_class: 2,
        perturbation: Perturbation::NONE,
        ..SynthConfig::default()
    });
    for m in Method::ALL {
        assert_eq!(ged::distance(&d.graphs[0], &d.graphs[1], m, &CostModel::default()).unwrap(), 0.0);
    }
}
