use removability::curves::{build_three_segment_path, curve_integral, PathPolyline, ProductSet};
use removability::geometry::{box_dimension_estimate, dist_to_set, gap_census, porosity_estimate, regularity_constants, salli_check, salli_exponent};
use removability::measure::{exact, geometric_scales};
use removability::quadrature::QuadratureSpec;
use removability::witness::{Verdict, WitnessField};
use removability::*;

fn q(text: &str) -> Rational {
    parse_rational(text).unwrap()
}

fn iv(lo: &str, hi: &str) -> Interval<Rational> {
    Interval::new(q(lo), q(hi)).unwrap()
}

fn unit() -> Interval<f64> {
    Interval { lo: 0.0, hi: 1.0 }
}

fn thirds(depth: u32) -> StaircaseMeasure {
    StaircaseMeasure::new(&ThinCantorSpec::middle_thirds(depth)).unwrap()
}

fn log3_2() -> f64 {
    2f64.ln() / 3f64.ln()
}

#[test]
fn thin_cantor_levels() {
    let spec = ThinCantorSpec::middle_thirds(2);
    let set = build_thin_cantor(&spec).unwrap();
    let expected = [iv("0", "1/9"), iv("2/9", "1/3"), iv("2/3", "7/9"), iv("8/9", "1")];
    assert_eq!(set.parts(), &expected);
    assert_eq!(build_thin_cantor(&spec.with_depth(0)).unwrap().parts(), &[iv("0", "1")]);
    assert_eq!(set.total_length(), q("4/9"));
    assert!(ThinCantorSpec::new(iv("0", "1"), q("1/2"), 3).is_err());
}

#[test]
fn fat_cantor_first_gap_and_limit() {
    let fat = build_fat_cantor(&FatCantorSpec::quarter_powers(1)).unwrap();
    assert_eq!(fat.gaps.parts(), &[iv("3/8", "5/8")]);
    assert_eq!(FatCantorSpec::quarter_powers(5).limit_measure(), Some(q("1/2")));
    let deep = build_fat_cantor(&FatCantorSpec::quarter_powers(6)).unwrap();
    let removed: Rational = (1..=6u32).map(|k| Rational::from_integer(1 << (k - 1)) * q("1/4").pow(k as i32)).sum();
    assert_eq!(deep.retained.total_length(), q("1") - removed);
    let none = FatCantorSpec {
        base: iv("0", "1"),
        schedule: GapSchedule::Explicit(vec![]),
        depth: 3,
    };
    let built = build_fat_cantor(&none).unwrap();
    assert!(built.gaps.is_empty());
    assert_eq!(built.retained.parts(), &[iv("0", "1")]);
    let exhausting = FatCantorSpec {
        base: iv("0", "1"),
        schedule: GapSchedule::Explicit(vec![q("1")]),
        depth: 1,
    };
    assert!(build_fat_cantor(&exhausting).is_err());
}

#[test]
fn distance_to_fat_set() {
    let gaps = IntervalSet::single(Interval { lo: 0.375, hi: 0.625 });
    assert_eq!(dist_to_set(0.5, &gaps, &unit()), 0.125);
    assert!((dist_to_set(0.4, &gaps, &unit()) - 0.025).abs() < 1e-15);
    assert_eq!(dist_to_set(0.2, &gaps, &unit()), 0.0);
    assert_eq!(dist_to_set(1.5, &gaps, &unit()), 0.5);
}

#[test]
fn census_examples() {
    let c = ThinCantorSpec::middle_thirds(10).build().unwrap();
    let window = iv("0", "1");
    assert_eq!(gap_census(&c, &window, q("1/3"), log3_2()).unwrap().count, 0);
    assert_eq!(gap_census(&c, &window, q("3/10"), log3_2()).unwrap().count, 1);
    let empty = IntervalSet::<f64>::empty();
    assert_eq!(gap_census(&empty, &unit(), 0.5, 0.5).unwrap().count, 1);
    assert_eq!(gap_census(&empty, &unit(), 1.0, 0.5).unwrap().count, 0);
    assert!(gap_census(&empty, &Interval { lo: 0.5, hi: 0.5 }, 0.5, 0.5).is_err());
}

#[test]
fn porosity_examples() {
    let c = ThinCantorSpec::middle_thirds(8).build().unwrap();
    let cert = porosity_estimate(&c, &[1.0], 64).unwrap();
    assert!(cert.alpha >= 1.0 / 6.0 - 1e-12);
    let point = IntervalSet::single(Interval { lo: 0.0, hi: 0.0 });
    let cert = porosity_estimate(&point, &[0.1, 0.01], 8).unwrap();
    assert!(cert.alpha > 0.49, "{cert:?}");
    let solid = IntervalSet::single(Interval { lo: 0.0, hi: 1.0 });
    let cert = porosity_estimate(&solid, &[0.1, 0.01], 64).unwrap();
    assert!(cert.alpha < 0.01, "{cert:?}");
}

#[test]
fn regularity_examples() {
    let m = thirds(10);
    let c = m.spec().build().unwrap();
    let exact = regularity_constants(&c, &m, log3_2(), &[1.0 / 3.0]).unwrap();
    assert!(exact.c_lower > 0.0 && exact.c_upper < 3.0);
    let ratio = m.ball_mass(0.0, 1.0 / 3.0) / (1.0f64 / 3.0).powf(log3_2());
    assert!((ratio - 1.0).abs() < 1e-12);
    let scales = geometric_scales(0.5, 1.0 / 3.0, 9);
    let wrong = regularity_constants(&c, &m, 0.9, &scales).unwrap();
    let right = regularity_constants(&c, &m, log3_2(), &scales).unwrap();
    assert!(wrong.c_upper / wrong.c_lower > 3.0 * right.c_upper / right.c_lower, "{wrong:?} {right:?}");
}

#[test]
fn box_dimension_examples() {
    let c = ThinCantorSpec::middle_thirds(12).build().unwrap().to_f64();
    let scales: Vec<f64> = (2..=10).map(|k| 3f64.powi(-k)).collect();
    assert!((box_dimension_estimate(&c, &scales).unwrap() - log3_2()).abs() < 0.02);
    let line = IntervalSet::single(unit());
    assert!((box_dimension_estimate(&line, &scales).unwrap() - 1.0).abs() < 0.02);
    let point = IntervalSet::single(Interval { lo: 0.3, hi: 0.3 });
    assert!(box_dimension_estimate(&point, &scales).unwrap().abs() < 0.02);
}

#[test]
fn salli_examples() {
    assert!((salli_exponent(1.0 / 3.0) - 2f64.ln() / 2.5f64.ln()).abs() < 1e-15);
    let c = ThinCantorSpec::middle_thirds(10).build().unwrap().to_f64();
    assert_eq!(salli_check(&c, &unit(), 1.0, 0.25).unwrap().lhs, 1.0);
    let coeffs: Vec<f64> = (2..=8).map(|k| salli_check(&c, &unit(), 3f64.powi(-k), 1.0 / 3.0).unwrap().rhs_coeff).collect();
    let (lo, hi) = coeffs.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    assert!(hi / lo < 4.0, "{coeffs:?}");
}

#[test]
fn staircase_values() {
    let m = thirds(12);
    assert_eq!(m.cdf(0.0), 0.0);
    assert_eq!(m.cdf(1.0), 1.0);
    assert_eq!(m.cdf(0.5), 0.5);
    for x in [0.34, 0.4, 0.5, 0.6, 0.66] {
        assert_eq!(m.cdf(x), 0.5);
    }
    let spec = ThinCantorSpec::middle_thirds(12);
    assert_eq!(exact::cdf(&spec, q("1/3")), q("1/2"));
    assert_eq!(exact::integral(&spec, q("0"), q("1/3")), q("1/12"));
    assert_eq!(exact::integral(&spec, q("0"), q("1")), q("1/2"));
    assert_eq!(m.integral(-2.0, 0.0), 0.0);
    assert!((m.integral(0.0, 1.0) - 0.5).abs() < 1e-15);
}

#[test]
fn ball_masses() {
    let m = thirds(12);
    // 1/3 is not a double; the staircase is steep there at depth 12
    assert!((m.ball_mass(0.0, 1.0 / 3.0) - 0.5).abs() < 1e-12);
    assert_eq!(m.ball_mass(0.5, 1.0 / 6.0), 0.0);
    assert_eq!(m.ball_mass(0.5, 0.7), 1.0);
}

#[test]
fn frostman_is_stable_across_depths() {
    let s = log3_2();
    let scales = geometric_scales(1.0, 0.5, 40);
    let values: Vec<f64> = [10, 11, 12].iter().map(|&n| thirds(n).frostman_constant(s, &scales, 1024).c_hat).collect();
    for v in &values {
        assert!((v / values[0] - 1.0).abs() < 0.05, "{values:?}");
    }
    let m = thirds(10);
    let cyl = m.ball_mass(2.0 / 9.0, 1.0 / 9.0) / (1.0f64 / 9.0).powf(s);
    assert!((cyl - 1.0).abs() < 1e-12);
}

#[test]
fn extension_worked_point() {
    let spec = ThinCantorSpec::middle_thirds(12);
    let (v, grad) = exact::extension(&spec, q("0"), q("1/3"));
    assert_eq!(v, q("1/8"));
    assert_eq!(grad, [q("3/4"), q("3/8")]);
    let w = witness(12, 4, 2.0);
    assert!((w.eval_v(0.5, 0.5).unwrap() - 0.5).abs() < 1e-15);
    assert_eq!(w.eval_v(0.5, 0.1).unwrap(), 0.5);
    assert_eq!(w.grad_v(0.5, 0.1).unwrap(), [0.0, 0.0]);
    assert!(w.eval_v(0.5, 0.0).is_err());
    let norm = 0.375 * 5f64.sqrt();
    assert!(norm <= 3.0 / (2.0 * 2f64.sqrt()));
}

fn witness(thin: u32, fat: u32, p: f64) -> WitnessField {
    let params = ParamSet::new(log3_2(), p, 2.0).unwrap();
    WitnessField::new(thirds(thin), &FatCantorSpec::quarter_powers(fat), params).unwrap()
}

#[test]
fn witness_trace_and_gap_midpoints() {
    let w = witness(10, 4, 2.0);
    let m = w.measure();
    for x in [-0.5, 0.1, 0.25, 0.7, 1.2] {
        assert_eq!(w.eval_u(x, 0.05), m.cdf(x));
        assert_eq!(w.eval_u(x, 0.5), extension(&w, x, 0.125));
    }
    assert_eq!(w.eval_u(1.3, 0.5), 1.0);
}

fn extension(w: &WitnessField, x: f64, y: f64) -> f64 {
    w.eval_v(x, y).unwrap()
}

#[test]
fn strip_energy_power_law_at_p2() {
    let w = witness(14, 4, 2.0);
    let quad = QuadratureSpec::default();
    let mut engine = w.strip_engine(&[2.0], &quad).unwrap();
    let rs: Vec<f64> = (3..=9).map(|k| 2f64.powi(-k)).collect();
    let es: Vec<f64> = rs.iter().map(|&r| engine.energies(r).unwrap()[0].value).collect();
    let fit = removability::regression::log_log_slope(&rs, &es).unwrap();
    let beta = 1.0 + (log3_2() - 1.0);
    assert!((fit.slope - beta).abs() < 0.1, "{}", fit.slope);
}

#[test]
fn gap_energy_is_twice_the_half_strip() {
    let w = witness(10, 4, 2.2);
    let quad = QuadratureSpec::default();
    let len = 4f64.powi(-3);
    let gap = Interval { lo: 0.1, hi: 0.1 + len };
    let g = w.gap_energy(&gap, &quad).unwrap();
    let half = w.strip_energy(0.5 * len, &quad).unwrap();
    assert!((g.numeric - 2.0 * half.value).abs() <= 1e-12 * g.numeric);
    assert!(g.numeric <= g.bound);
}

#[test]
fn p2_verdict_is_convergent() {
    let w = witness(12, 7, 2.0);
    let report = w.total_energy(7, &QuadratureSpec::default(), 0.02).unwrap();
    assert_eq!(report.verdict, Verdict::Convergent);
    assert!(report.partial_sums.windows(2).all(|s| s[0] <= s[1]));
}

#[test]
fn gapless_fat_set_is_rejected() {
    let params = ParamSet::new(log3_2(), 2.0, 2.0).unwrap();
    let fat = FatCantorSpec {
        base: iv("0", "1"),
        schedule: GapSchedule::Explicit(vec![]),
        depth: 3,
    };
    assert!(WitnessField::new(thirds(6), &fat, params).is_err());
}

#[test]
fn critical_exponent_values() {
    let s = log3_2();
    assert!((critical_exponent(s) - (2.0 - s) / (1.0 - s)).abs() < 1e-15);
    let threshold = 1.0 + 1.0 / (2.0 * (1.0 - s));
    assert!((threshold - 2.3547).abs() < 1e-4);
    let params = ParamSet::new(s, 3.0, 2.0).unwrap();
    assert!((1.0 / params.p + 1.0 / params.q - 1.0).abs() < 1e-15);
    assert_eq!(params.alpha, (1.0 - s) * 2.0);
}

#[test]
fn three_segment_examples() {
    let c = ThinCantorSpec::middle_thirds(8).build().unwrap().to_f64();
    let path = build_three_segment_path([0.0, 0.2], [0.8, 0.8], &c, 0.1).unwrap();
    assert_eq!(path.vertices()[1], [0.5, 0.2]);
    let e = ProductSet::new(IntervalSet::empty(), IntervalSet::single(unit()));
    let path = build_three_segment_path([0.4, 0.2], [0.8, 0.8], &e.c, 0.1).unwrap();
    assert_eq!(path.vertices()[1], [0.4, 0.2]);
    assert_eq!(curve_integral(&path, &e, 3.0, &QuadratureSpec::default()).unwrap().value, 0.0);
}

#[test]
fn vertical_hole_segment_bound() {
    let c = ThinCantorSpec::middle_thirds(10).build().unwrap().to_f64();
    let f = build_fat_cantor(&FatCantorSpec::quarter_powers(6)).unwrap().retained.to_f64();
    let e = ProductSet::new(c, f);
    let p = 4.0;
    let alpha = 0.1;
    let (z1, z2): ([f64; 2], [f64; 2]) = ([0.3, 0.3], [0.35, 0.7]);
    let r = (z1[0] - z2[0]).hypot(z1[1] - z2[1]);
    let path = build_three_segment_path(z1, z2, &e.c, alpha).unwrap();
    let x = path.vertices()[1][0];
    let vertical = PathPolyline::new(vec![[x, z1[1]], [x, z2[1]]]).unwrap();
    let v = curve_integral(&vertical, &e, p, &QuadratureSpec::default()).unwrap().value;
    assert!(v <= (alpha * r).powf(1.0 / (1.0 - p)) * (z1[1] - z2[1]).abs());
    assert!(v <= alpha.powf(1.0 / (1.0 - p)) * r.powf((p - 2.0) / (p - 1.0)));
}

#[test]
fn single_point_set_has_bounded_ratios() {
    let c = IntervalSet::single(Interval { lo: 0.0, hi: 0.0 });
    let f = build_fat_cantor(&FatCantorSpec::quarter_powers(6)).unwrap().retained.to_f64();
    let e = ProductSet::new(c, f);
    let scales: Vec<f64> = (1..=6).map(|k| 2f64.powi(-k)).collect();
    for p in [2.5, 4.0] {
        let opts = removability::curves::SweepOptions { p, alpha: 0.25, pairs: 100, seed: 3, quad: QuadratureSpec::default() };
        let report = removability::curves::curve_condition_sweep(&e, &scales, &opts).unwrap();
        assert!(report.spread() < 10.0, "{p}: {:?}", report.per_scale);
    }
}
