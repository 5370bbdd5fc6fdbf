//! The five experiments. Each returns plot-ready tables plus a JSON summary;
//! every table row starts with the tuple `s, p, q, alpha, depth`.

use rayon::prelude::*;
use removability::curves::{curve_condition_sweep, pair_ratio, ProductSet, SweepOptions};
use removability::geometry::{
    box_dimension_estimate, gap_census, porosity_estimate, regularity_constants, salli_check, salli_exponent,
};
use removability::measure::geometric_scales;
use removability::oscillation::{
    build_cover, oscillation_check, LinearField, OscillationOptions, OscillationReport, ScalarField, SmoothField,
};
use removability::witness::{default_frostman, Verdict, WitnessField};
use removability::{build_fat_cantor, critical_exponent, GapSchedule, Interval, ParamSet, Result, StaircaseMeasure};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, ExperimentKind, FieldKind};

/// A CSV table: header plus rows of already formatted cells.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &str, extra: &[&str]) -> Self {
        let header = ["s", "p", "q", "alpha", "depth"]
            .iter()
            .chain(extra)
            .map(|h| h.to_string())
            .collect();
        Self {
            name: name.to_string(),
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, params: &ParamSet, depth: u32, cells: Vec<String>) {
        let mut row = vec![
            num(params.s),
            num(params.p),
            num(params.q),
            num(params.alpha),
            depth.to_string(),
        ];
        row.extend(cells);
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Index of a column by header name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub tables: Vec<Table>,
    pub summary: Value,
}

/// Shortest round-trip formatting, so identical numbers give identical bytes.
fn num(x: f64) -> String {
    format!("{x}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<Outcome> {
    match config.experiment {
        ExperimentKind::WitnessEnergy => witness_energy(config),
        ExperimentKind::CriticalityScan => criticality_scan(config),
        ExperimentKind::OscillationVerify => oscillation_verify(config),
        ExperimentKind::CurveConditionSweep => curve_sweep(config),
        ExperimentKind::GeometryEstimators => geometry(config),
    }
}

fn params(config: &ExperimentConfig, p: f64) -> Result<ParamSet> {
    ParamSet::new(config.s(), p, config.grid.radius.to_f64())
}

fn witness(config: &ExperimentConfig, p: f64) -> Result<WitnessField> {
    let measure = StaircaseMeasure::new(&config.thin_spec()?)?;
    WitnessField::new(measure, &config.fat_spec()?, params(config, p)?)
}

/// `p` below which `sum 2^(k-1) g_k^beta` converges for `g_k = a f^k`.
fn predicted_threshold(config: &ExperimentConfig) -> Option<f64> {
    match config.fat_spec().ok()?.schedule {
        GapSchedule::Geometric { factor, .. } => {
            let f = removability::Scalar::to_f64(factor);
            let beta_min = 2f64.ln() / (1.0 / f).ln();
            Some(1.0 + (1.0 - beta_min) / (1.0 - config.s()))
        }
        GapSchedule::Explicit(_) => None,
    }
}

#[derive(Serialize)]
struct EnergySummary {
    p: f64,
    verdict: Verdict,
    tail_ratio: Option<f64>,
    total_energy: f64,
    divergent_flag: bool,
    exponent_fit: Option<f64>,
    expected_slope: f64,
    max_gap_ratio: f64,
    max_strip_ratio: Option<f64>,
}

fn witness_energy(config: &ExperimentConfig) -> Result<Outcome> {
    let c = &config.witness_energy;
    let ps = config.p_values();
    let depth = config.thin.depth;
    let field = witness(config, ps[0])?;
    let reports = field.energy_scan(&ps, c.generations, &config.quadrature, c.margin.to_f64())?;
    let radii: Vec<f64> = c.strip_radii.iter().map(|r| r.to_f64()).collect();
    let strips = radii
        .par_iter()
        .map(|&r| field.strip_energies(r, &ps, &config.quadrature))
        .collect::<Result<Vec<_>>>()?;

    let mut gaps = Table::new(
        "gaps",
        &["generation", "gap_id", "gap_length", "numeric_energy", "analytic_bound", "ratio"],
    );
    let mut strip_table = Table::new(
        "strips",
        &["r", "numeric_energy", "analytic_bound", "ratio", "divergent"],
    );
    let mut summaries = Vec::new();
    for (pi, report) in reports.iter().enumerate() {
        let ps_i = report.params;
        for row in &report.per_gap {
            gaps.push(
                &ps_i,
                depth,
                vec![
                    row.generation.to_string(),
                    row.gap_id.to_string(),
                    num(row.gap_length),
                    num(row.numeric_energy),
                    num(row.analytic_bound),
                    num(row.ratio()),
                ],
            );
        }
        let mut max_strip: Option<f64> = None;
        for (&r, energies) in radii.iter().zip(&strips) {
            let e = energies[pi];
            let bound = field.strip_bound(r, ps_i.p);
            let ratio = e.value / bound;
            max_strip = Some(max_strip.map_or(ratio, |m| m.max(ratio)));
            strip_table.push(
                &ps_i,
                depth,
                vec![num(r), num(e.value), num(bound), num(ratio), e.divergent.to_string()],
            );
        }
        summaries.push(EnergySummary {
            p: ps_i.p,
            verdict: report.verdict,
            tail_ratio: report.tail_ratio,
            total_energy: report.total(),
            divergent_flag: report.divergent_flag,
            exponent_fit: report.exponent_fit,
            expected_slope: ps_i.gap_exponent(),
            max_gap_ratio: report.per_gap.iter().map(|r| r.ratio()).fold(0.0, f64::max),
            max_strip_ratio: max_strip,
        });
    }
    Ok(Outcome {
        tables: vec![gaps, strip_table],
        summary: json!({
            "frostman_constant": field.frostman(),
            "fat_depth": config.fat.depth,
            "per_p": summaries,
        }),
    })
}

fn criticality_scan(config: &ExperimentConfig) -> Result<Outcome> {
    let c = &config.criticality_scan;
    let ps = config.p_values();
    let depth = config.thin.depth;
    let field = witness(config, ps[0])?;
    let reports = field.energy_scan(&ps, c.generations, &config.quadrature, c.margin.to_f64())?;
    let mut table = Table::new(
        "scan",
        &["fat_depth", "generations", "total_energy", "tail_ratio", "verdict", "divergent_flag"],
    );
    for report in &reports {
        table.push(
            &report.params,
            depth,
            vec![
                config.fat.depth.to_string(),
                report.generation_sums.len().to_string(),
                num(report.total()),
                opt(report.tail_ratio),
                report.verdict.to_string(),
                report.divergent_flag.to_string(),
            ],
        );
    }
    let last_convergent = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Convergent)
        .map(|r| r.params.p)
        .fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.max(p))));
    let first_divergent = reports
        .iter()
        .filter(|r| r.verdict == Verdict::Divergent)
        .map(|r| r.params.p)
        .fold(None, |m: Option<f64>, p| Some(m.map_or(p, |m| m.min(p))));
    let monotone = {
        let rank = |v: Verdict| match v {
            Verdict::Convergent => 0,
            Verdict::Inconclusive => 1,
            Verdict::Divergent => 2,
        };
        let mut order: Vec<_> = reports.iter().map(|r| (r.params.p, rank(r.verdict))).collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        order.windows(2).all(|w| w[0].1 <= w[1].1)
    };
    Ok(Outcome {
        tables: vec![table],
        summary: json!({
            "frostman_constant": field.frostman(),
            "critical_exponent": critical_exponent(config.s()),
            "predicted_threshold": predicted_threshold(config),
            "last_convergent_p": last_convergent,
            "first_divergent_p": first_divergent,
            "verdicts_monotone": monotone,
        }),
    })
}

fn smooth_field() -> impl ScalarField {
    SmoothField::new(
        |x: f64, y: f64| (3.0 * x).sin() + x * y,
        |x: f64, y: f64| [3.0 * (3.0 * x).cos() + y, x],
    )
}

#[derive(Serialize)]
struct OscillationSummary {
    field: &'static str,
    p: f64,
    delta: f64,
    intervals: usize,
    sum_osc: f64,
    holder_bound: f64,
    uniform_bound: f64,
    worst_ratio: f64,
    all_hold: bool,
}

fn oscillation_verify(config: &ExperimentConfig) -> Result<Outcome> {
    let c = &config.oscillation_verify;
    let depth = config.thin.depth;
    let thin = config.thin_spec()?.build()?;
    let s = config.s();
    let retained = build_fat_cantor(&config.fat_spec()?)?.retained.to_f64();
    let budget = c.budget.to_f64();
    let y = c.height.to_f64();
    let deltas: Vec<f64> = c.deltas.iter().map(|d| d.to_f64()).collect();
    let covers = deltas
        .iter()
        .map(|&d| build_cover(&thin, s, d, budget))
        .collect::<Result<Vec<_>>>()?;

    let mut jobs = Vec::new();
    for &p in &config.p_values() {
        for &kind in &c.fields {
            for ci in 0..covers.len() {
                jobs.push((p, kind, ci));
            }
        }
    }
    let reports = jobs
        .par_iter()
        .map(|&(p, kind, ci)| -> Result<OscillationReport> {
            let mut opts = OscillationOptions::new(p);
            opts.samples = c.samples;
            opts.quad = config.quadrature;
            let cover = &covers[ci];
            match kind {
                FieldKind::Witness => oscillation_check(&witness(config, p)?, cover, y, &retained, budget, &opts),
                FieldKind::Smooth => oscillation_check(&smooth_field(), cover, y, &retained, budget, &opts),
                FieldKind::Linear => {
                    let linear = LinearField { a: 1.0, b: 2.0, c: 0.0 };
                    oscillation_check(&linear, cover, y, &retained, budget, &opts)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "intervals",
        &["field", "delta", "j_lo", "j_hi", "osc", "rhs", "norm", "constant", "chain_steps", "holds"],
    );
    let mut summaries = Vec::new();
    let mut decreasing = Vec::new();
    for (&(p, kind, _), report) in jobs.iter().zip(&reports) {
        let ps = params(config, p)?;
        for row in &report.rows {
            table.push(
                &ps,
                depth,
                vec![
                    kind.name().to_string(),
                    num(report.delta),
                    num(row.interval.lo),
                    num(row.interval.hi),
                    num(row.osc),
                    num(row.rhs),
                    num(row.norm),
                    num(row.constant),
                    row.chain_steps.to_string(),
                    (row.osc <= row.rhs).to_string(),
                ],
            );
        }
        summaries.push(OscillationSummary {
            field: kind.name(),
            p,
            delta: report.delta,
            intervals: report.rows.len(),
            sum_osc: report.sum_osc,
            holder_bound: report.holder_bound,
            uniform_bound: report.uniform_bound,
            worst_ratio: report.rows.iter().map(|r| r.osc / r.rhs).fold(0.0, f64::max),
            all_hold: report.all_hold(),
        });
    }
    for chunk in summaries.chunks(covers.len()) {
        let mut by_delta: Vec<&OscillationSummary> = chunk.iter().collect();
        by_delta.sort_by(|a, b| b.delta.total_cmp(&a.delta));
        decreasing.push(json!({
            "field": chunk[0].field,
            "p": chunk[0].p,
            "sum_osc_decreasing": by_delta.windows(2).all(|w| w[1].sum_osc < w[0].sum_osc),
        }));
    }
    Ok(Outcome {
        tables: vec![table],
        summary: json!({
            "height": y,
            "budget": budget,
            "cover_multiplicity": covers.iter().map(|c| c.multiplicity()).collect::<Vec<_>>(),
            "cover_hausdorff_sums": covers.iter().map(|c| c.hausdorff_sum).collect::<Vec<_>>(),
            "checks": summaries,
            "monotonicity": decreasing,
        }),
    })
}

fn curve_sweep(config: &ExperimentConfig) -> Result<Outcome> {
    let c = &config.curve_condition_sweep;
    let depth = config.thin.depth;
    let thin = config.thin_spec()?.build()?.to_f64();
    let retained = build_fat_cantor(&config.fat_spec()?)?.retained.to_f64();
    let e = ProductSet::new(thin, retained);
    let scales: Vec<f64> = c.scales.iter().map(|r| r.to_f64()).collect();
    let ps = config.p_values();
    let hole_alpha = c.hole_alpha.to_f64();

    let mut ratios = Table::new(
        "ratios",
        &["hole_alpha", "z1x", "z1y", "z2x", "z2y", "scale", "integral", "ratio"],
    );
    let mut covariance = Table::new(
        "covariance",
        &["lambda", "z1x", "z1y", "z2x", "z2y", "integral", "scaled_integral", "relative_error"],
    );
    let mut summaries = Vec::new();
    for &p in &ps {
        let ps_i = params(config, p)?;
        let opts = SweepOptions {
            p,
            alpha: hole_alpha,
            pairs: c.pairs,
            seed: config.seed(),
            quad: config.quadrature,
        };
        let report = curve_condition_sweep(&e, &scales, &opts)?;
        for row in &report.rows {
            ratios.push(
                &ps_i,
                depth,
                vec![
                    num(hole_alpha),
                    num(row.z1[0]),
                    num(row.z1[1]),
                    num(row.z2[0]),
                    num(row.z2[1]),
                    num(row.scale),
                    num(row.integral),
                    num(row.ratio),
                ],
            );
        }

        let exponent = ps_i.curve_exponent();
        let step = (report.rows.len() / c.covariance_pairs.max(1)).max(1);
        let sample: Vec<_> = report.rows.iter().step_by(step).take(c.covariance_pairs).collect();
        let jobs: Vec<_> = c
            .covariance
            .iter()
            .flat_map(|l| sample.iter().map(move |row| (l.to_f64(), *row)))
            .collect();
        let scaled = jobs
            .par_iter()
            .map(|&(lambda, row)| {
                let es = e.scaled(lambda);
                let z1 = [row.z1[0] * lambda, row.z1[1] * lambda];
                let z2 = [row.z2[0] * lambda, row.z2[1] * lambda];
                pair_ratio(&es, z1, z2, &opts)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut worst_cov = 0.0f64;
        for (&(lambda, row), s_row) in jobs.iter().zip(&scaled) {
            let err = if row.integral > 0.0 {
                s_row.integral / (row.integral * lambda.powf(exponent)) - 1.0
            } else {
                s_row.integral
            };
            worst_cov = worst_cov.max(err.abs());
            covariance.push(
                &ps_i,
                depth,
                vec![
                    num(lambda),
                    num(row.z1[0]),
                    num(row.z1[1]),
                    num(row.z2[0]),
                    num(row.z2[1]),
                    num(row.integral),
                    num(s_row.integral),
                    num(err),
                ],
            );
        }
        summaries.push(json!({
            "p": p,
            "per_scale": report.per_scale,
            "growth_exponent": report.growth_exponent,
            "max_ratio": report.max_ratio(),
            "spread": report.spread(),
            "skipped": report.skipped,
            "max_covariance_error": worst_cov,
        }));
    }
    Ok(Outcome {
        tables: vec![ratios, covariance],
        summary: json!({
            "hole_alpha": hole_alpha,
            "fat_depth": config.fat.depth,
            "per_p": summaries,
        }),
    })
}

fn spread(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (lo, hi) = values
        .filter(|v| *v > 0.0)
        .fold((f64::INFINITY, 0.0f64), |(lo, hi), v| (lo.min(v), hi.max(v)));
    (hi > 0.0).then_some(hi / lo)
}

fn geometry(config: &ExperimentConfig) -> Result<Outcome> {
    let g = &config.geometry_estimators;
    let spec = config.thin_spec()?;
    let depth = spec.depth;
    let c = spec.build()?;
    let s = config.s();
    let measure = StaircaseMeasure::new(&spec)?;
    let window = c.hull().expect("a Cantor set is non-empty").to_f64();
    let diam = window.len();

    // exact grids when possible: cylinder ends sit on the triadic grid
    let exact_scales: Option<Vec<_>> = g.box_scales.iter().map(|e| e.exact()).collect();
    let box_dimension = match exact_scales {
        Some(scales) => box_dimension_estimate(&c, &scales)?,
        None => {
            let scales: Vec<f64> = g.box_scales.iter().map(|e| e.to_f64()).collect();
            box_dimension_estimate(&c.to_f64(), &scales)?
        }
    };
    let porosity_scales: Vec<f64> = (0..g.porosity_scales)
        .map(|k| 0.9 * diam * 2f64.powf(-(k as f64) / 6.0))
        .collect();
    let porosity = porosity_estimate(&c, &porosity_scales, g.porosity_samples)?;
    let regularity_scales = geometric_scales(diam, spec.ratio_f64(), depth as usize + 1);
    let regularity = regularity_constants(&c, &measure, s, &regularity_scales)?;
    let frostman = default_frostman(&measure, s);
    let salli_alpha = g.salli_alpha.map_or(porosity.alpha, |a| a.to_f64());
    let s_salli = salli_exponent(salli_alpha);
    let p_hat = critical_exponent(s_salli);

    let c64 = c.to_f64();
    let deltas = g.deltas.values();
    let rows = deltas
        .par_iter()
        .map(|&d| Ok((d, gap_census(&c64, &window, d, s)?, salli_check(&c64, &window, d, salli_alpha)?)))
        .collect::<Result<Vec<_>>>()?;

    let mut table = Table::new(
        "census",
        &["delta", "gap_count", "fitted_c_s", "salli_lhs", "salli_coeff", "s_salli", "p_hat", "above_p_hat"],
    );
    for &p in &config.p_values() {
        let ps = params(config, p)?;
        for (d, census, salli) in &rows {
            table.push(
                &ps,
                depth,
                vec![
                    num(*d),
                    census.count.to_string(),
                    num(census.fitted_c_s),
                    num(salli.lhs),
                    num(salli.rhs_coeff),
                    num(s_salli),
                    num(p_hat),
                    (p > p_hat).to_string(),
                ],
            );
        }
    }
    Ok(Outcome {
        tables: vec![table],
        summary: json!({
            "similarity_dimension": spec.dimension(),
            "box_dimension": box_dimension,
            "porosity": porosity,
            "regularity": regularity,
            "frostman_constant": frostman,
            "salli_alpha": salli_alpha,
            "s_salli": s_salli,
            "p_hat": p_hat,
            "census_spread": spread(rows.iter().map(|r| r.1.fitted_c_s)),
            "salli_spread": spread(rows.iter().map(|r| r.2.rhs_coeff)),
            "window": Interval { lo: window.lo, hi: window.hi },
        }),
    })
}
