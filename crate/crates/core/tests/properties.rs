use proptest::prelude::*;

use removability::curves::{curve_integral, gap_sum_bound, PathPolyline, ProductSet};
use removability::geometry::{dist_to_set, gap_census, salli_check};
use removability::oscillation::{build_cover, dyadic_chain, CurveFamily, HeightMap};
use removability::quadrature::QuadratureSpec;
use removability::witness::{extension_gradient, extension_value, WitnessField};
use removability::*;

fn log3_2() -> f64 {
    2f64.ln() / 3f64.ln()
}

fn valid<T: Scalar>(set: &IntervalSet<T>) -> bool {
    set.parts().iter().all(|p| p.lo <= p.hi) && set.parts().windows(2).all(|w| w[0].hi <= w[1].lo)
}

fn rational_set() -> impl Strategy<Value = IntervalSet<Rational>> {
    prop::collection::vec((0i128..64, 0i128..16), 0..8).prop_map(|raw| {
        IntervalSet::from_unsorted(
            raw.into_iter()
                .map(|(a, l)| Interval {
                    lo: Rational::new(a, 64),
                    hi: Rational::new(a + l, 64),
                })
                .collect(),
        )
    })
}

fn float_set(max_parts: usize) -> impl Strategy<Value = IntervalSet<f64>> {
    prop::collection::vec((0.0f64..1.0, 0.001f64..0.1), 1..max_parts)
        .prop_map(|raw| IntervalSet::from_unsorted(raw.into_iter().map(|(a, l)| Interval { lo: a, hi: a + l }).collect()))
}

fn middle_thirds(depth: u32) -> IntervalSet<f64> {
    ThinCantorSpec::middle_thirds(depth).build().unwrap().to_f64()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn set_operations_stay_valid_and_lengths_add(a in rational_set(), b in rational_set(), r in 0i128..8) {
        let union = a.union(&b);
        let inter = a.intersection(&b);
        let window = Interval { lo: Rational::new(-1, 8), hi: Rational::new(9, 8) };
        let comp = a.complement_within(&window);
        let dil = a.dilate(Rational::new(r, 128));
        for set in [&union, &inter, &comp, &dil] {
            prop_assert!(valid(set));
        }
        prop_assert_eq!(union.total_length() + inter.total_length(), a.total_length() + b.total_length());
        prop_assert_eq!(comp.total_length() + a.clip(&window).total_length(), window.len());
    }

    #[test]
    fn thin_cantor_refines(depth in 0u32..8, num in 1i128..8) {
        let spec = ThinCantorSpec::new(
            Interval { lo: Rational::from_integer(0), hi: Rational::from_integer(1) },
            Rational::new(num, 17),
            depth + 1,
        ).unwrap();
        let coarse = spec.build_level(depth);
        let fine = spec.build_level(depth + 1);
        prop_assert_eq!(fine.len(), 2 * coarse.len());
        for part in fine.parts() {
            prop_assert!(coarse.parts().iter().any(|c| c.lo <= part.lo && part.hi <= c.hi));
        }
    }

    #[test]
    fn census_obeys_one_constant(lo in 0.0f64..0.9, width in 0.001f64..1.0, k in 0.0f64..8.0) {
        let c = middle_thirds(8);
        let window = Interval { lo, hi: lo + width };
        let delta = 3f64.powf(-k);
        let census = gap_census(&c, &window, delta, log3_2()).unwrap();
        prop_assert!(census.fitted_c_s <= 4.0, "{census:?}");
    }

    #[test]
    fn distance_to_f_is_lipschitz(a in -0.5f64..1.5, b in -0.5f64..1.5) {
        let fat = build_fat_cantor(&FatCantorSpec::quarter_powers(6)).unwrap();
        let gaps = fat.gaps.to_f64();
        let base = Interval { lo: 0.0, hi: 1.0 };
        let d = (dist_to_set(a, &gaps, &base) - dist_to_set(b, &gaps, &base)).abs();
        prop_assert!(d <= (a - b).abs() + 1e-15);
    }

    #[test]
    fn salli_lhs_grows_with_delta(d1 in 0.0001f64..1.0, d2 in 0.0001f64..1.0) {
        let c = middle_thirds(9);
        let w = Interval { lo: 0.0, hi: 1.0 };
        let (small, big) = if d1 <= d2 { (d1, d2) } else { (d2, d1) };
        let a = salli_check(&c, &w, small, 0.25).unwrap().lhs;
        let b = salli_check(&c, &w, big, 0.25).unwrap().lhs;
        prop_assert!(a <= b);
    }

    #[test]
    fn staircase_is_monotone(mut xs in prop::collection::vec(-0.2f64..1.2, 2..64)) {
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(10)).unwrap();
        xs.sort_by(f64::total_cmp);
        for w in xs.windows(2) {
            prop_assert!(m.cdf(w[0]) <= m.cdf(w[1]));
        }
    }

    #[test]
    fn integral_matches_breakpoint_trapezoid(a in -0.2f64..1.2, len in 0.0f64..1.0) {
        // piecewise linear between breakpoints, so the trapezoid rule on them is exact
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(8)).unwrap();
        let b = a + len;
        let mut nodes = vec![a];
        nodes.extend(m.breakpoints().iter().copied().filter(|&x| x > a && x < b));
        nodes.push(b);
        let trapezoid: f64 = nodes.windows(2).map(|w| 0.5 * (w[1] - w[0]) * (m.cdf(w[0]) + m.cdf(w[1]))).sum();
        let exact = m.integral(a, b);
        prop_assert!((exact - trapezoid).abs() <= 1e-10 * exact.abs().max(1e-300) + 1e-15, "{exact} {trapezoid}");
    }

    #[test]
    fn ball_mass_is_a_cdf_difference(x in -0.2f64..1.2, r in 1e-6f64..0.7) {
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(10)).unwrap();
        prop_assert_eq!(m.ball_mass(x, r), m.cdf(x + r) - m.cdf(x - r));
    }

    #[test]
    fn extension_is_sandwiched_and_gradient_bounded(x in -0.3f64..1.3, y in 1e-4f64..1.0) {
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(10)).unwrap();
        let v = extension_value(&m, x, y);
        prop_assert!(m.cdf(x - y) <= v + 1e-15 && v <= m.cdf(x + y) + 1e-15);
        let [gx, gy] = extension_gradient(&m, x, y);
        let bound = m.ball_mass(x, y) / (2f64.sqrt() * y);
        prop_assert!(gx.hypot(gy) <= bound * (1.0 + 1e-12) + 1e-15);
    }

    #[test]
    fn witness_trace_on_f(x in -0.5f64..1.5, k in 0usize..1000) {
        let params = ParamSet::new(log3_2(), 2.0, 2.0).unwrap();
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(8)).unwrap();
        let w = WitnessField::new(m, &FatCantorSpec::quarter_powers(5), params).unwrap();
        let f = build_fat_cantor(&FatCantorSpec::quarter_powers(5)).unwrap().retained.to_f64();
        let part = f.parts()[k % f.len()];
        let y = part.lo + (k as f64 / 1000.0) * part.len();
        prop_assert_eq!(w.eval_u(x, y), w.measure().cdf(x));
    }

    #[test]
    fn height_map_pushes_forward_length(k in float_set(10)) {
        let map = HeightMap::new(&k).unwrap();
        let n = 20_000;
        let mut ys: Vec<f64> = (0..n).map(|i| map.height((i as f64 + 0.5) / n as f64)).collect();
        ys.sort_by(f64::total_cmp);
        let total = k.total_length();
        let cdf = |y: f64| k.clip(&Interval { lo: f64::MIN, hi: y }).total_length() / total;
        let ks = ys.iter().enumerate().map(|(i, &y)| {
            let c = cdf(y);
            (c - i as f64 / n as f64).abs().max((c - (i + 1) as f64 / n as f64).abs())
        }).fold(0.0, f64::max);
        prop_assert!(ks < 0.01, "{ks}");
        prop_assert!(ys.iter().all(|&y| k.contains(y)));
    }

    #[test]
    fn curves_stay_in_their_square(lo in 0.0f64..0.5, len in 0.01f64..0.4, shift in 0.0f64..1.0, y_idx in 0usize..64) {
        let f = build_fat_cantor(&FatCantorSpec::quarter_powers(5)).unwrap();
        let gaps = f.gaps.to_f64();
        let gap = gaps.parts()[y_idx % gaps.len()];
        let y = gap.lo;
        let j = Interval { lo, hi: lo + len };
        let i_lo = lo + shift * 0.5 * len;
        let i = Interval { lo: i_lo, hi: i_lo + 0.5 * len };
        let fam = CurveFamily::new(j, i, y, &f.retained.to_f64()).unwrap();
        for step in 0..=32 {
            for v in fam.sample_curve(step as f64 / 32.0) {
                prop_assert!(v[0] >= j.lo - 1e-15 && v[0] <= j.hi + 1e-15);
                prop_assert!((v[1] - y).abs() <= 0.5 * len + 1e-15);
            }
        }
    }

    #[test]
    fn covers_overlap_at_most_twice(c in float_set(12), delta in 0.005f64..0.5) {
        let cover = build_cover(&c, 0.5, delta, 1e9).unwrap();
        prop_assert!(cover.multiplicity() <= 2);
        prop_assert!(cover.covers(&c));
        prop_assert!(cover.intervals.iter().all(|j| j.len() < delta));
    }

    #[test]
    fn dyadic_chains_telescope(lo in -1.0f64..1.0, len in 0.001f64..2.0, t in 0.0f64..1.0) {
        let j = Interval { lo, hi: lo + len };
        let z = lo + t * len;
        let chain = dyadic_chain(j, z, 30);
        prop_assert_eq!(chain[0], j);
        for w in chain.windows(2) {
            let ulp = 4.0 * f64::EPSILON * (lo.abs() + len);
            prop_assert!((w[0].len() - 2.0 * w[1].len()).abs() <= 1e-12 * w[0].len() + ulp);
            prop_assert!(w[1].lo >= w[0].lo && w[1].hi <= w[0].hi);
            prop_assert!(w[1].lo <= z && z <= w[1].hi);
        }
    }

    #[test]
    fn product_distance_matches_brute_force(x in -0.2f64..1.2, y in -0.2f64..1.2) {
        let c = middle_thirds(4);
        let f = build_fat_cantor(&FatCantorSpec::quarter_powers(3)).unwrap().retained.to_f64();
        let e = ProductSet::new(c.clone(), f.clone());
        let grid = |set: &IntervalSet<f64>| -> Vec<f64> {
            set.parts().iter().flat_map(|p| (0..=200).map(move |k| p.lo + p.len() * k as f64 / 200.0)).collect()
        };
        let (gc, gf) = (grid(&c), grid(&f));
        let dc = gc.iter().map(|&a| (x - a).abs()).fold(f64::INFINITY, f64::min);
        let df = gf.iter().map(|&b| (y - b).abs()).fold(f64::INFINITY, f64::min);
        let brute = dc.hypot(df);
        let resolution = 0.5 / 200.0 * 3f64.powi(-4) + 0.5 / 200.0 * 0.5;
        prop_assert!(e.dist([x, y]) <= brute + 1e-15);
        prop_assert!(brute - e.dist([x, y]) <= resolution);
    }

    #[test]
    fn curve_integrals_add_over_segments(x0 in -0.1f64..1.1, x1 in -0.1f64..1.1, y0 in 0.0f64..1.0, y1 in 0.0f64..1.0) {
        let c = middle_thirds(6);
        let fat = build_fat_cantor(&FatCantorSpec::quarter_powers(4)).unwrap();
        let e = ProductSet::new(c, fat.retained.to_f64());
        let y0 = e.nudge_height(y0).unwrap();
        let quad = QuadratureSpec::default();
        let first = PathPolyline::new(vec![[x0, y0], [x1, y0]]).unwrap();
        let second = PathPolyline::new(vec![[x1, y0], [x1, y1]]).unwrap();
        let both = first.concat(&second).unwrap();
        let a = curve_integral(&first, &e, 3.5, &quad).unwrap();
        let b = curve_integral(&second, &e, 3.5, &quad).unwrap();
        let ab = curve_integral(&both, &e, 3.5, &quad).unwrap();
        prop_assert_eq!(ab.divergent, a.divergent || b.divergent);
        if !ab.divergent {
            prop_assert!((ab.value - a.value - b.value).abs() <= 1e-12 * ab.value.max(1.0));
        }
    }

    #[test]
    fn horizontal_integral_below_gap_sum(x0 in -0.1f64..1.1, x1 in -0.1f64..1.1, y in 0.0f64..1.0, p in 2.2f64..6.0) {
        let c = middle_thirds(7);
        let fat = build_fat_cantor(&FatCantorSpec::quarter_powers(4)).unwrap();
        let e = ProductSet::new(c.clone(), fat.retained.to_f64());
        let y = e.nudge_height(y).unwrap();
        let path = PathPolyline::new(vec![[x0, y], [x1, y]]).unwrap();
        let v = curve_integral(&path, &e, p, &QuadratureSpec::default()).unwrap().value;
        let bound = gap_sum_bound(x0, x1, &c, e.dist_f(y), p);
        prop_assert!(v <= bound * (1.0 + 1e-9), "{v} > {bound}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn frostman_bound_out_of_sample(x in -0.5f64..1.5, log_r in -12.0f64..0.5) {
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(12)).unwrap();
        let s = log3_2();
        let c_hat = m.frostman_constant(s, &removability::measure::geometric_scales(1.0, 0.5, 40), 1024).c_hat;
        let r = 10f64.powf(log_r);
        prop_assert!(m.ball_mass(x, r) <= c_hat * r.powf(s) * (1.0 + 1e-12));
    }

    #[test]
    fn finite_differences_match_gradient(x in -0.2f64..1.2, y in 0.01f64..0.9) {
        let m = StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(12)).unwrap();
        let h = 1e-6;
        // stay clear of the kinks of f at x +- y
        prop_assume!(m.breakpoint_distance(x - y) > 2.0 * h && m.breakpoint_distance(x + y) > 2.0 * h);
        let [gx, gy] = extension_gradient(&m, x, y);
        let fx = (extension_value(&m, x + h, y) - extension_value(&m, x - h, y)) / (2.0 * h);
        let fy = (extension_value(&m, x, y + h) - extension_value(&m, x, y - h)) / (2.0 * h);
        let scale = gx.hypot(gy).max(1e-3);
        prop_assert!((fx - gx).abs() / scale < 1e-5 && (fy - gy).abs() / scale < 1e-5, "{gx} {fx} {gy} {fy}");
    }
}
