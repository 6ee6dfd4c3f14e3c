use bootperc::degree_model::{sample_degree_sequence, DegreeSequence, DistConfig};
use bootperc::graph::{build_matching, StubMatching};
use bootperc::rng::stream_from_seed;
use proptest::prelude::*;

#[test]
fn self_loops_stay_bounded() {
    // For a (3,3)-regular sequence the mean self-loop count is sum(d_in d_out) / m = 3.
    for n in [100, 1_000, 10_000] {
        let seq = DegreeSequence::new(vec![(3, 3); n]).unwrap();
        let total: usize = (0..50)
            .map(|s| build_matching(&seq, &mut stream_from_seed(s)).count_self_loops())
            .sum();
        let mean = total as f64 / 50.0;
        assert!((mean - 3.0).abs() < 1.0, "n={n}: mean self-loops {mean}");
    }
}

#[test]
fn two_matchings_equally_likely() {
    let seq = DegreeSequence::new(vec![(1, 1), (1, 1)]).unwrap();
    let trials = 10_000;
    let loops = (0..trials)
        .filter(|&s| build_matching(&seq, &mut stream_from_seed(s)).count_self_loops() == 2)
        .count();
    let freq = loops as f64 / trials as f64;
    assert!((freq - 0.5).abs() < 0.02, "{freq}");
}

#[test]
fn in_neighbourhoods_have_in_degree_size() {
    let dist = DistConfig::poisson(3.0, 30).build().unwrap();
    let mut rng = stream_from_seed(7);
    let seq = sample_degree_sequence(&dist, 50, &mut rng).unwrap();
    let m = build_matching(&seq, &mut rng);
    for v in 0..50 {
        assert_eq!(m.in_neighbors_multiset(v).unwrap().len(), seq.in_degree(v) as usize);
        assert_eq!(m.out_neighbors(v).count(), seq.out_degree(v) as usize);
    }
}

#[test]
fn matching_is_deterministic() {
    let seq = DegreeSequence::new(vec![(2, 1), (1, 2), (3, 3), (0, 0)]).unwrap();
    let a = build_matching(&seq, &mut stream_from_seed(99));
    let b = build_matching(&seq, &mut stream_from_seed(99));
    assert_eq!(a, b);
}

#[test]
fn edge_list_has_one_row_per_edge() {
    let seq = DegreeSequence::new(vec![(3, 3); 10]).unwrap();
    let m = build_matching(&seq, &mut stream_from_seed(1));
    let mut buf = Vec::new();
    m.write_edge_list(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert_eq!(text.lines().count(), 31);
    assert!(text.starts_with("out_vertex,in_vertex\n"));
}

fn sequences() -> impl Strategy<Value = DegreeSequence> {
    prop::collection::vec((0u32..6, 0u32..6), 1..60).prop_map(|mut pairs| {
        let ins: u32 = pairs.iter().map(|p| p.0).sum();
        let outs: u32 = pairs.iter().map(|p| p.1).sum();
        if ins > outs {
            pairs[0].1 += ins - outs;
        } else {
            pairs[0].0 += outs - ins;
        }
        DegreeSequence::new(pairs).unwrap()
    })
}

proptest! {
    #[test]
    fn matching_preserves_degrees(seq in sequences(), seed in 0u64..10_000) {
        let m = build_matching(&seq, &mut stream_from_seed(seed));
        prop_assert_eq!(m.recount_degrees(), seq.pairs().to_vec());
        let mut seen = vec![false; m.edge_count()];
        for &t in m.mate() {
            prop_assert!(!std::mem::replace(&mut seen[t as usize], true));
        }
        let again = StubMatching::from_mate(&seq, m.mate().to_vec()).unwrap();
        prop_assert_eq!(again, m);
    }
}
