use gsmatch_core::affine::{affine_normalize, moment_matrix};
use gsmatch_core::contour::Contour;
use gsmatch_core::cost::{match_list_cost, validate_match_list, GsInfo};
use gsmatch_core::dp::{exact_cyclic, match_bundles, match_cyclic, match_shapes, Side};
use gsmatch_core::geometry::{Affine2, Point};
use gsmatch_core::params::CostParams;
use gsmatch_core::shape::{CdcTable, ShapeBundle};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Star-shaped polygon with `k` vertices and jittered radii.
fn star_polygon(k: usize, seed: u64) -> Vec<Point<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k)
        .map(|i| {
            let t = std::f64::consts::TAU * (i as f64 + rng.gen_range(-0.3..0.3)) / k as f64;
            let r = rng.gen_range(40.0..100.0);
            Point::new(r * t.cos(), r * t.sin())
        })
        .collect()
}

fn toy_side(n: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, Vec<GsInfo<f64>>) {
    let pt = |rng: &mut ChaCha8Rng| Point::new(rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0));
    let mut gss = Vec::new();
    for s in 0..n {
        for c in 1..=n {
            if c == 1 || rng.gen_bool(0.6) {
                gss.push(GsInfo {
                    start_seg: s,
                    seg_count: c,
                    point_count: 20 * c,
                    weight: c as f64 / n as f64,
                    complexity: if c == 1 { 0.0 } else { rng.gen_range(20.0..300.0) },
                    start: pt(rng),
                    end: pt(rng),
                    mid: pt(rng),
                    is_closed: c == n,
                });
            }
        }
    }
    (vec![1.0 / n as f64; n], gss)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn resampling_is_uniform_and_keeps_the_length(k in 3usize..9, seed in any::<u64>(), n in 60usize..200) {
        let c = Contour::new(star_polygon(k, seed)).unwrap();
        let r = c.resample(n).unwrap();
        prop_assert_eq!(r.len(), n);
        let step = r.perimeter() / n as f64;
        prop_assert!((r.perimeter() - c.perimeter()).abs() < 0.05 * c.perimeter());
        for i in 0..n {
            let d = r.points()[i].distance(r.points()[(i + 1) % n]);
            prop_assert!(d < 1.5 * step && d > 0.0);
        }
    }

    #[test]
    fn whitened_points_have_unit_moments(k in 3usize..9, seed in any::<u64>()) {
        let c = Contour::new(star_polygon(k, seed)).unwrap().resample(120).unwrap();
        let (w, _) = affine_normalize(c.points()).unwrap();
        let m = moment_matrix(&w).unwrap();
        prop_assert!(m.mean.norm() < 1e-9);
        prop_assert!((m.m[0][0] - 1.0).abs() < 1e-9 && (m.m[1][1] - 1.0).abs() < 1e-9);
        prop_assert!(m.m[0][1].abs() < 1e-9);
    }

    /// Whitening removes any invertible linear map up to an orthogonal one,
    /// so inner products of the whitened points do not change.
    #[test]
    fn whitening_absorbs_affine_maps(
        seed in any::<u64>(),
        a in -3.0f64..3.0, b in -3.0f64..3.0, c in -3.0f64..3.0, d in -3.0f64..3.0,
        tx in -100.0f64..100.0, ty in -100.0f64..100.0,
    ) {
        prop_assume!((a * d - b * c).abs() > 0.2);
        let pts = star_polygon(7, seed);
        let tf = Affine2::linear([[a, b], [c, d]]).compose(&Affine2::translation(Point::new(tx, ty)));
        let mapped: Vec<Point<f64>> = pts.iter().map(|&q| tf.apply(q)).collect();
        let (w0, _) = affine_normalize(&pts).unwrap();
        let (w1, _) = affine_normalize(&mapped).unwrap();
        for i in 0..pts.len() {
            for j in 0..pts.len() {
                prop_assert!((w0[i].dot(w0[j]) - w1[i].dot(w1[j])).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn dp_never_beats_the_exact_optimum(seed in any::<u64>(), n in 2usize..5, m in 2usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (wa, ga) = toy_side(n, &mut rng);
        let (wb, gb) = toy_side(m, &mut rng);
        let vals: Vec<f64> = (0..ga.len() * gb.len()).map(|_| rng.gen_range(0.0..1.0)).collect();
        let cdc = CdcTable::from_fn(ga.len(), gb.len(), |i, j| vals[i * gb.len() + j]);
        let p = CostParams::default();
        let (sa, sb) = (Side::new(&wa, &ga), Side::new(&wb, &gb));
        let dp = match_cyclic(sa, sb, &cdc, &p);
        let exact = exact_cyclic(sa, sb, &cdc, &p);
        prop_assert!(dp.cost >= exact.cost - 1e-9);
        validate_match_list(&dp.match_list).unwrap();
        let recomputed = match_list_cost(&dp.match_list, &p).unwrap();
        prop_assert!((recomputed - dp.cost).abs() < 1e-9 * dp.cost.max(1.0));
        // skipping everything is always available
        prop_assert!(dp.cost <= 2.0 * p.beta_skip + 1e-9);
    }

    #[test]
    fn config_text_round_trips(beta in 1.0f64..500.0, alpha in 1.0f64..500.0, tau in 1.0f64..85.0) {
        let mut p = CostParams::<f64>::default();
        p.beta_skip = beta;
        p.alpha_c = alpha;
        p.tau_clamp = tau;
        let back = CostParams::from_config_str(&p.to_config_string()).unwrap();
        prop_assert_eq!(back, p);
    }
}

#[test]
fn chamfer_table_is_symmetric_under_swap() {
    let p = CostParams::default();
    let a = ShapeBundle::build(&Contour::new(star_polygon(6, 1)).unwrap(), &p).unwrap();
    let b = ShapeBundle::build(&Contour::new(star_polygon(5, 2)).unwrap(), &p).unwrap();
    let ab = CdcTable::compute(&a, &b, &p).unwrap();
    let ba = CdcTable::compute(&b, &a, &p).unwrap();
    assert_eq!(ab.transposed(), ba);
}

#[test]
fn rotated_copy_recovers_the_offset() {
    let p = CostParams::default();
    let a = ShapeBundle::build(&Contour::new(star_polygon(6, 9)).unwrap(), &p).unwrap();
    let own = match_bundles(&a, &a, &p).unwrap();
    let n = a.n_segments();
    for k in [1, n / 2, n - 1] {
        let rot = a.rotated(k, &p).unwrap();
        let cdc = CdcTable::compute(&rot, &a, &p).unwrap();
        let r = match_shapes(&rot, &a, &cdc, &p);
        assert_eq!(r.cost, own.cost, "k = {k}");
        assert_eq!(r.start_offset, (own.start_offset + n - k) % n, "k = {k}");
    }
}

#[test]
fn f32_and_f64_agree_on_a_self_match() {
    let pts = star_polygon(5, 4);
    let p64 = CostParams::<f64>::default();
    let p32 = CostParams::<f32>::default();
    let a64 = ShapeBundle::build(&Contour::new(pts.clone()).unwrap(), &p64).unwrap();
    let pts32: Vec<Point<f32>> = pts.iter().map(|q| q.cast()).collect();
    let a32 = ShapeBundle::build(&Contour::new(pts32).unwrap(), &p32).unwrap();
    assert_eq!(a64.n_segments(), a32.n_segments());
    let r64 = match_bundles(&a64, &a64, &p64).unwrap();
    let r32 = match_bundles(&a32, &a32, &p32).unwrap();
    assert!((r64.cost - r32.cost as f64).abs() < 1e-2 * r64.cost.max(1.0));
}
