use hybridfrac::{build_first_order, build_generalized, frac_integrate, Grid, HfSeries};
use proptest::prelude::*;

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

prop_compose! {
    fn grid()(m in 1usize..40, h in 0.005f64..0.5) -> Grid {
        Grid::new(m, h).unwrap()
    }
}

prop_compose! {
    fn series_on(g: Grid, lo: f64)(samples in prop::collection::vec(lo..5.0f64, g.m() + 1)) -> HfSeries {
        HfSeries::from_samples(&samples, g).unwrap()
    }
}

fn grid_and_series(lo: f64) -> impl Strategy<Value = (Grid, HfSeries)> {
    grid().prop_flat_map(move |g| (Just(g), series_on(g, lo)))
}

fn grid_and_three() -> impl Strategy<Value = (HfSeries, HfSeries, HfSeries)> {
    grid().prop_flat_map(|g| (series_on(g, -5.0), series_on(g, -5.0), series_on(g, -5.0)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn reconstruction_at_nodes(g in grid(), seed in prop::collection::vec(-10.0f64..10.0, 64)) {
        let samples: Vec<f64> = (0..=g.m()).map(|j| seed[j % seed.len()]).collect();
        let s = HfSeries::from_samples(&samples, g).unwrap();
        for (j, &want) in samples.iter().enumerate() {
            prop_assert!((s.eval(g.node(j)).unwrap() - want).abs() <= 1e-15);
        }
    }

    #[test]
    fn linear_functions_are_exact(g in grid(), a in -4.0f64..4.0, b in -4.0f64..4.0, u in 0.0f64..=1.0) {
        let s = HfSeries::from_fn(g, |t| a * t + b);
        let t = u * g.horizon();
        let want = a * t + b;
        let got = s.eval(t).unwrap();
        prop_assert!((got - want).abs() <= 1e-14 * want.abs().max(a.abs() * g.horizon()).max(b.abs()).max(1.0),
            "t={t}: {got} vs {want}");
    }

    #[test]
    fn product_is_nodewise((a, b, _) in grid_and_three()) {
        let p = a.multiply(&b).unwrap();
        for j in 0..=a.grid().m() {
            prop_assert!(rel_close(p.node(j), a.node(j) * b.node(j), 1e-13));
        }
    }

    #[test]
    fn product_commutes_and_associates((a, b, c) in grid_and_three()) {
        let ab = a.multiply(&b).unwrap();
        let ba = b.multiply(&a).unwrap();
        let left = ab.multiply(&c).unwrap();
        let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        for j in 0..=a.grid().m() {
            prop_assert!(rel_close(ab.node(j), ba.node(j), 1e-13));
            prop_assert!(rel_close(left.node(j), right.node(j), 1e-13));
        }
    }

    #[test]
    fn power_is_iterated_product((_, a) in grid_and_series(-2.0), n in 1u32..6) {
        let mut iterated = a.clone();
        for _ in 1..n {
            iterated = iterated.multiply(&a).unwrap();
        }
        let p = a.power(n);
        for j in 0..=a.grid().m() {
            prop_assert!(rel_close(p.node(j), iterated.node(j), 1e-13));
        }
    }

    #[test]
    fn pulse_indicators_are_idempotent_and_orthogonal(g in grid(), i in 0usize..40, k in 0usize..40) {
        let m = g.m();
        let (i, k) = (i % m, k % m);
        let indicator = |i: usize| {
            let mut cs = vec![0.0; m];
            cs[i] = 1.0;
            HfSeries::from_parts(g, cs, vec![0.0; m], 0.0).unwrap()
        };
        let p = indicator(i).multiply(&indicator(k)).unwrap();
        let want = if i == k { indicator(i) } else { HfSeries::from_parts(g, vec![0.0; m], vec![0.0; m], 0.0).unwrap() };
        prop_assert_eq!(p.cs(), want.cs());
        prop_assert_eq!(p.ct(), want.ct());
    }

    #[test]
    fn integration_is_causal((g, s) in grid_and_series(-5.0), alpha in 0.1f64..2.5, j in 0usize..40, bump in 0.1f64..3.0) {
        prop_assume!(g.m() >= 1);
        let j = j % g.m();
        let mats = build_generalized(alpha, g).unwrap();
        let base = frac_integrate(&s, &mats).unwrap();
        let mut samples = s.nodes();
        samples[j + 1] += bump;
        let moved = frac_integrate(&HfSeries::from_samples(&samples, g).unwrap(), &mats).unwrap();
        for k in 0..=j {
            prop_assert_eq!(base.node(k), moved.node(k));
        }
        prop_assert!(moved.node(j + 1) != base.node(j + 1));
    }

    #[test]
    fn integration_preserves_sign((g, s) in grid_and_series(0.0), alpha in 0.05f64..2.5) {
        let mats = build_generalized(alpha, g).unwrap();
        let out = frac_integrate(&s, &mats).unwrap();
        for v in out.nodes() {
            prop_assert!(v >= 0.0, "{v}");
        }
    }

    #[test]
    fn unit_order_matches_first_order_set(m in 1usize..=64, h in 0.001f64..1.0) {
        let g = Grid::new(m, h).unwrap();
        let a = build_generalized(1.0, g).unwrap();
        let b = build_first_order(g);
        for (x, y) in [(&a.pss, &b.pss), (&a.pst, &b.pst), (&a.pts, &b.pts), (&a.ptt, &b.ptt)] {
            for (u, v) in x.first_row().iter().zip(y.first_row()) {
                prop_assert!((u - v).abs() <= 1e-14 * v.abs(), "{u} vs {v}");
            }
        }
    }

    #[test]
    fn integration_is_linear((a, b, _) in grid_and_three(), k in -3.0f64..3.0, alpha in 0.2f64..2.0) {
        let mats = build_generalized(alpha, *a.grid()).unwrap();
        let lhs = frac_integrate(&a.add(&b.scale(k)).unwrap(), &mats).unwrap();
        let ia = frac_integrate(&a, &mats).unwrap();
        let ib = frac_integrate(&b, &mats).unwrap();
        let scale = ia.nodes().iter().chain(ib.nodes().iter()).fold(1.0f64, |acc, v| acc.max(v.abs()));
        for j in 0..=a.grid().m() {
            prop_assert!((lhs.node(j) - (ia.node(j) + k * ib.node(j))).abs() <= 1e-12 * scale * (1.0 + k.abs()));
        }
    }
}

fn half_twice_vs_once(m: usize) -> f64 {
    let g = Grid::with_steps(1.0, m).unwrap();
    let f = HfSeries::from_fn(g, |t| t);
    let half = build_generalized(0.5, g).unwrap();
    let twice = frac_integrate(&frac_integrate(&f, &half).unwrap(), &half).unwrap();
    let once = frac_integrate(&f, &build_first_order(g)).unwrap();
    (0..=m)
        .map(|j| (twice.node(j) - once.node(j)).abs())
        .fold(0.0, f64::max)
}

// Defect of composing two half-order integrals against one unit-order
// integral, from 30-digit quadrature of the interpolated intermediate.
const COMPOSITION_DEFECT: [(usize, f64); 3] = [
    (8, 1.185084227222876e-3),
    (16, 3.046162667194139e-4),
    (32, 7.76652249595875e-5),
];

#[test]
fn half_order_composition_approaches_unit_order() {
    for (m, want) in COMPOSITION_DEFECT {
        let got = half_twice_vs_once(m);
        assert!(
            ((got - want) / want).abs() <= 1e-9,
            "m={m}: {got:e} vs {want:e}"
        );
    }
    let mut last = half_twice_vs_once(8);
    for m in [16, 32, 64, 128] {
        let d = half_twice_vs_once(m);
        assert!(
            d < last / 3.5,
            "defect did not shrink at m={m}: {d:e} vs {last:e}"
        );
        last = d;
    }
}

#[test]
fn repeated_integrals_of_t_sum() {
    let g = Grid::new(8, 0.125).unwrap();
    let f = HfSeries::from_fn(g, |t| t);
    let mut sum = HfSeries::constant(g, 0.0);
    for k in 1..=3 {
        sum = sum
            .add(&frac_integrate(&f, &build_generalized(k as f64, g).unwrap()).unwrap())
            .unwrap();
    }
    for (j, t) in g.nodes().into_iter().enumerate() {
        let want = t * t / 2.0 + t.powi(3) / 6.0 + t.powi(4) / 24.0;
        assert!((sum.node(j) - want).abs() <= 1e-15, "node {j}");
    }
}
