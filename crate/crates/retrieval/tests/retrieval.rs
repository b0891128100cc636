use gsmatch_core::params::CostParams;
use gsmatch_retrieval::dataset::{Dataset, Entry};
use gsmatch_retrieval::matrix::DistanceMatrix;
use gsmatch_retrieval::perturb::{occluded_dataset, OCCLUSION_PERCENT};
use gsmatch_retrieval::score::{bullseye_score, topk_recognition};
use gsmatch_retrieval::synth::{generate, Deformation, ShapeClass};
use proptest::prelude::*;

fn matrix(n: usize, values: &[f64]) -> DistanceMatrix {
    let ids: Vec<String> = (0..n).map(|k| format!("s{k}")).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else { values[(i * n + j) % values.len()] }).collect())
        .collect();
    DistanceMatrix::from_rows(ids, &rows).unwrap()
}

fn labels(n: usize, classes: usize) -> Vec<String> {
    (0..n).map(|k| format!("c{}", k % classes)).collect()
}

fn dataset(per_class: usize, seed: u64) -> Dataset {
    let shapes = generate(&[ShapeClass::Star, ShapeClass::Cross], per_class, seed, &Deformation::default()).unwrap();
    Dataset::from_entries(shapes.into_iter().map(|(id, label, contour)| Entry { id, label, contour }).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Rankings only see the order of distances, so any increasing map of
    /// the matrix leaves both scores alone.
    #[test]
    fn scores_depend_on_ranks_only(
        values in prop::collection::vec(0.0f64..100.0, 64),
        n in 4usize..9,
        classes in 2usize..4,
        shift in 0.0f64..50.0,
    ) {
        let dm = matrix(n, &values);
        let warped = matrix(n, &values.iter().map(|v| (v + shift).powf(1.5)).collect::<Vec<_>>());
        let l = labels(n, classes);
        for top in [1, 2, n] {
            let s = bullseye_score(&dm, &l, top);
            prop_assert!((0.0..=100.0).contains(&s));
            prop_assert_eq!(s, bullseye_score(&warped, &l, top));
        }
        prop_assert_eq!(topk_recognition(&dm, &l, 1), topk_recognition(&warped, &l, 1));
    }

    #[test]
    fn matrix_text_round_trips(values in prop::collection::vec(0.0f64..1e4, 36)) {
        let dm = matrix(6, &values);
        prop_assert_eq!(DistanceMatrix::parse(&dm.to_text()).unwrap(), dm);
    }
}

#[test]
fn class_separated_matrix_scores_perfectly() {
    let n = 9;
    let l = labels(n, 3);
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 0.0 } else if l[i] == l[j] { 1.0 } else { 5.0 }).collect())
        .collect();
    let dm = DistanceMatrix::from_rows(l.clone(), &rows).unwrap();
    assert_eq!(bullseye_score(&dm, &l, 3), 100.0);
    assert_eq!(topk_recognition(&dm, &l, 1), 100.0);
}

#[test]
fn saved_dataset_loads_back() {
    let ds = dataset(3, 17);
    let dir = tempfile::tempdir().unwrap();
    ds.save_dir(dir.path()).unwrap();
    let back = Dataset::load_dir(dir.path()).unwrap();
    assert!(back.failures.is_empty());
    assert_eq!(back.ids(), ds.ids());
    assert_eq!(back.labels(), ds.labels());
    for (a, b) in ds.entries.iter().zip(&back.entries) {
        assert_eq!(a.contour.len(), b.contour.len());
        for (p, q) in a.contour.points().iter().zip(b.contour.points()) {
            assert!(p.distance(*q) < 1e-6);
        }
    }
}

#[test]
fn occluded_datasets_are_reproducible_and_within_protocol() {
    let p = CostParams::default();
    let ds = dataset(4, 23);
    let (a, rec_a, fail_a) = occluded_dataset(&ds, 77, &p);
    let (b, rec_b, _) = occluded_dataset(&ds, 77, &p);
    assert!(fail_a.is_empty(), "{fail_a:?}");
    assert_eq!(a.ids(), ds.ids());
    assert_eq!(a.ids(), b.ids());
    for (x, y) in a.entries.iter().zip(&b.entries) {
        assert_eq!(x.contour, y.contour);
    }
    for r in &rec_a {
        let lo = (OCCLUSION_PERCENT.0 * r.segments as f64 / 100.0).ceil() as usize;
        let hi = (OCCLUSION_PERCENT.1 * r.segments as f64 / 100.0).floor() as usize;
        assert!(r.removed >= 1 && r.removed < r.segments, "{}", r.id);
        if lo <= hi {
            assert!((lo..=hi).contains(&r.removed), "{}: {} of {}", r.id, r.removed, r.segments);
        }
    }
    assert_eq!(rec_a.len(), rec_b.len());
}
