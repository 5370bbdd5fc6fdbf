//! Experiment configuration: a TOML document with rational literals
//! (`"1/3"`, `"0.25"`, `3`) wherever an exact number is meaningful.

use std::fmt;
use std::path::{Path, PathBuf};

use removability::quadrature::QuadratureSpec;
use removability::{parse_rational, FatCantorSpec, GapSchedule, Interval, Rational, Scalar, ThinCantorSpec};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

/// A number as written in the config: exact unless it was a TOML float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Literal {
    Exact(Rational),
    Float(f64),
}

impl Literal {
    pub fn to_f64(self) -> f64 {
        match self {
            Literal::Exact(r) => r.to_f64(),
            Literal::Float(x) => x,
        }
    }

    /// Floats are read back from their shortest decimal form, so `0.6` is
    /// exactly `3/5`.
    pub fn exact(self) -> Option<Rational> {
        match self {
            Literal::Exact(r) => Some(r),
            Literal::Float(x) => parse_rational(&x.to_string()).ok(),
        }
    }
}

impl From<i64> for Literal {
    fn from(n: i64) -> Self {
        Literal::Exact(Rational::from_integer(n as i128))
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Literal::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Literal::Float(x) => write!(f, "{x}"),
        }
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct Visitor;
        impl de::Visitor<'_> for Visitor {
            type Value = Literal;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a number or a rational literal such as \"1/3\"")
            }
            fn visit_i64<E: de::Error>(self, n: i64) -> Result<Literal, E> {
                Ok(n.into())
            }
            fn visit_u64<E: de::Error>(self, n: u64) -> Result<Literal, E> {
                Ok(Literal::Exact(Rational::from_integer(n as i128)))
            }
            fn visit_f64<E: de::Error>(self, x: f64) -> Result<Literal, E> {
                Ok(Literal::Float(x))
            }
            fn visit_str<E: de::Error>(self, s: &str) -> Result<Literal, E> {
                parse_rational(s).map(Literal::Exact).map_err(|_| E::custom(format!("not a number: {s:?}")))
            }
        }
        d.deserialize_any(Visitor)
    }
}

impl Serialize for Literal {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Literal::Float(x) => s.serialize_f64(*x),
            exact => s.serialize_str(&exact.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    WitnessEnergy,
    CriticalityScan,
    OscillationVerify,
    CurveConditionSweep,
    GeometryEstimators,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 5] = [
        ExperimentKind::WitnessEnergy,
        ExperimentKind::CriticalityScan,
        ExperimentKind::OscillationVerify,
        ExperimentKind::CurveConditionSweep,
        ExperimentKind::GeometryEstimators,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::WitnessEnergy => "witness-energy",
            ExperimentKind::CriticalityScan => "criticality-scan",
            ExperimentKind::OscillationVerify => "oscillation-verify",
            ExperimentKind::CurveConditionSweep => "curve-condition-sweep",
            ExperimentKind::GeometryEstimators => "geometry-estimators",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            ExperimentKind::WitnessEnergy => "per-gap and strip energies of the witness against their closed-form bounds",
            ExperimentKind::CriticalityScan => "convergence verdict of the total witness energy over a range of p",
            ExperimentKind::OscillationVerify => "one-scale oscillation inequality on delta-covers of C for several fields",
            ExperimentKind::CurveConditionSweep => "three-segment curve integrals against |z1 - z2|^((p-2)/(p-1)) across scales",
            ExperimentKind::GeometryEstimators => "box dimension, porosity, regularity, gap census and Salli coefficients of C",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThinConfig {
    #[serde(default = "unit_base")]
    pub base: [Literal; 2],
    #[serde(default = "one_third")]
    pub ratio: Literal,
    #[serde(default = "default_thin_depth")]
    pub depth: u32,
}

impl Default for ThinConfig {
    fn default() -> Self {
        Self {
            base: unit_base(),
            ratio: one_third(),
            depth: default_thin_depth(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ScheduleConfig {
    /// `g_k = scale * factor^k`.
    Geometric { scale: Literal, factor: Literal },
    Explicit { lengths: Vec<Literal> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FatConfig {
    #[serde(default = "unit_base")]
    pub base: [Literal; 2],
    #[serde(default = "quarter_powers")]
    pub schedule: ScheduleConfig,
    #[serde(default = "default_fat_depth")]
    pub depth: u32,
}

impl Default for FatConfig {
    fn default() -> Self {
        Self {
            base: unit_base(),
            schedule: quarter_powers(),
            depth: default_fat_depth(),
        }
    }
}

/// Either an explicit list or an arithmetic range `from..=to` in steps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueList {
    List(Vec<Literal>),
    Range { from: Literal, to: Literal, step: Literal },
}

impl ValueList {
    /// Range ends are included when hit exactly (in rational arithmetic when
    /// all three are exact).
    pub fn values(&self) -> Vec<f64> {
        match self {
            ValueList::List(v) => v.iter().map(|x| x.to_f64()).collect(),
            ValueList::Range { from, to, step } => match (from.exact(), to.exact(), step.exact()) {
                (Some(a), Some(b), Some(h)) if h > Rational::from_integer(0) => {
                    let mut out = Vec::new();
                    let mut x = a;
                    while x <= b {
                        out.push(Literal::Exact(x).to_f64());
                        x += h;
                    }
                    out
                }
                _ => {
                    let (a, b, h) = (from.to_f64(), to.to_f64(), step.to_f64());
                    if !(h > 0.0) {
                        return Vec::new();
                    }
                    let n = ((b - a) / h * (1.0 + 1e-12)).floor();
                    if !(n >= 0.0) {
                        return Vec::new();
                    }
                    (0..=n as usize).map(|k| a + k as f64 * h).collect()
                }
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub p: ValueList,
    /// Defaults to the similarity dimension of the thin set.
    #[serde(default)]
    pub s: Option<Literal>,
    #[serde(default = "default_radius")]
    pub radius: Literal,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            p: ValueList::List(vec![Literal::from(2)]),
            s: None,
            radius: default_radius(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WitnessEnergyConfig {
    pub generations: u32,
    /// Half-widths `r` of the strips compared with the strip bound.
    pub strip_radii: Vec<Literal>,
    pub margin: Literal,
}

impl Default for WitnessEnergyConfig {
    fn default() -> Self {
        Self {
            generations: 8,
            strip_radii: vec![lit(1, 10), lit(1, 100), lit(1, 1000)],
            margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalityConfig {
    pub generations: u32,
    pub margin: Literal,
}

impl Default for CriticalityConfig {
    fn default() -> Self {
        Self {
            generations: 8,
            margin: default_margin(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FieldKind {
    /// The witness `u(x, y) = v(x, dist(y, F))`.
    Witness,
    /// `sin(3x) + xy`.
    Smooth,
    /// `x + 2y`.
    Linear,
}

impl FieldKind {
    pub fn name(self) -> &'static str {
        match self {
            FieldKind::Witness => "witness",
            FieldKind::Smooth => "smooth",
            FieldKind::Linear => "linear",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillationConfig {
    pub deltas: Vec<Literal>,
    /// Height of the horizontal line; must lie in F.
    pub height: Literal,
    /// Hausdorff-content budget the covers must respect (up to a factor 2).
    pub budget: Literal,
    pub fields: Vec<FieldKind>,
    pub samples: usize,
}

impl Default for OscillationConfig {
    fn default() -> Self {
        Self {
            // a hair above 3^-k so that level-k cylinders fit in one piece
            deltas: vec![lit(101, 8100), lit(101, 24300), lit(101, 72900)],
            height: lit(3, 8),
            budget: Literal::from(1),
            fields: vec![FieldKind::Witness, FieldKind::Smooth, FieldKind::Linear],
            samples: 4096,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CurveSweepConfig {
    pub scales: Vec<Literal>,
    pub pairs: usize,
    /// Porosity constant used to place the vertical segment.
    pub hole_alpha: Literal,
    /// Dilations checked for scale covariance.
    pub covariance: Vec<Literal>,
    pub covariance_pairs: usize,
}

impl Default for CurveSweepConfig {
    fn default() -> Self {
        Self {
            scales: (1..=6).map(|k| lit(1, 1 << k)).collect(),
            pairs: 1000,
            hole_alpha: lit(1, 10),
            covariance: vec![lit(1, 3), lit(1, 9)],
            covariance_pairs: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometryConfig {
    /// Relative gap thresholds for the census and the Salli check.
    pub deltas: ValueList,
    pub box_scales: Vec<Literal>,
    pub porosity_scales: usize,
    pub porosity_samples: usize,
    /// Porosity constant for the Salli check; defaults to the certified one.
    pub salli_alpha: Option<Literal>,
}

impl Default for GeometryConfig {
    fn default() -> Self {
        Self {
            deltas: ValueList::List([2, 5, 10, 20, 50, 100, 200, 500, 1000].into_iter().map(|n| lit(1, n)).collect()),
            box_scales: (1..=8).map(|k| lit(1, 3i128.pow(k))).collect(),
            porosity_scales: 60,
            porosity_samples: 2000,
            salli_alpha: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub thin: ThinConfig,
    #[serde(default)]
    pub fat: FatConfig,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default, rename = "witness-energy")]
    pub witness_energy: WitnessEnergyConfig,
    #[serde(default, rename = "criticality-scan")]
    pub criticality_scan: CriticalityConfig,
    #[serde(default, rename = "oscillation-verify")]
    pub oscillation_verify: OscillationConfig,
    #[serde(default, rename = "curve-condition-sweep")]
    pub curve_condition_sweep: CurveSweepConfig,
    #[serde(default, rename = "geometry-estimators")]
    pub geometry_estimators: GeometryConfig,
}

/// One problem found in a config file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: Option<usize>,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(line) => write!(f, "line {line}: {}: {}", self.field, self.message),
            None => write!(f, "{}: {}", self.field, self.message),
        }
    }
}

/// A parsed and validated config together with the warnings raised.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ExperimentConfig,
    pub warnings: Vec<String>,
}

pub fn load(path: &Path) -> Result<Loaded, Vec<Diagnostic>> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        vec![Diagnostic {
            line: None,
            field: path.display().to_string(),
            message: format!("cannot read: {e}"),
        }]
    })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Loaded, Vec<Diagnostic>> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of(text, s.start));
        vec![Diagnostic {
            line,
            field: "config".into(),
            message: e.message().trim().to_string(),
        }]
    })?;
    let mut warnings = Vec::new();
    if config.seed.is_none() {
        warnings.push("no seed given; using seed 0".to_string());
    }
    let problems = config.problems();
    if !problems.is_empty() {
        return Err(problems
            .into_iter()
            .map(|(field, message)| Diagnostic {
                line: locate(text, &field),
                field,
                message,
            })
            .collect());
    }
    Ok(Loaded { config, warnings })
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// Line of a dotted field path such as `thin.ratio` or `grid.p.1`.
fn locate(text: &str, field: &str) -> Option<usize> {
    let root = toml::de::DeTable::parse(text).ok()?;
    let mut keys = field.split('.');
    let mut node = root.get_ref().get(keys.next()?)?;
    let mut offset = node.span().start;
    for key in keys {
        let next = match key.parse::<usize>() {
            Ok(i) => node.get_ref().get(i),
            Err(_) => node.get_ref().get(key),
        };
        match next {
            Some(n) => {
                node = n;
                offset = n.span().start;
            }
            None => break,
        }
    }
    Some(line_of(text, offset))
}

impl ExperimentConfig {
    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn p_values(&self) -> Vec<f64> {
        self.grid.p.values()
    }

    pub fn thin_spec(&self) -> removability::Result<ThinCantorSpec> {
        let base = interval(&self.thin.base).ok_or_else(|| removability::Error::InvalidSpec("base must be exact".into()))?;
        let ratio = self
            .thin
            .ratio
            .exact()
            .ok_or_else(|| removability::Error::InvalidSpec("ratio must be exact".into()))?;
        ThinCantorSpec::new(base, ratio, self.thin.depth)
    }

    pub fn fat_spec(&self) -> removability::Result<FatCantorSpec> {
        let bad = |what: &str| removability::Error::InvalidSpec(format!("{what} must be exact"));
        let base = interval(&self.fat.base).ok_or_else(|| bad("base"))?;
        let schedule = match &self.fat.schedule {
            ScheduleConfig::Geometric { scale, factor } => GapSchedule::Geometric {
                scale: scale.exact().ok_or_else(|| bad("scale"))?,
                factor: factor.exact().ok_or_else(|| bad("factor"))?,
            },
            ScheduleConfig::Explicit { lengths } => GapSchedule::Explicit(
                lengths
                    .iter()
                    .map(|g| g.exact().ok_or_else(|| bad("lengths")))
                    .collect::<removability::Result<_>>()?,
            ),
        };
        let spec = FatCantorSpec {
            base,
            schedule,
            depth: self.fat.depth,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Dimension used in the parameter tuple.
    pub fn s(&self) -> f64 {
        match self.grid.s {
            Some(s) => s.to_f64(),
            None => self.thin_spec().map(|t| t.dimension()).unwrap_or(f64::NAN),
        }
    }

    /// Every semantic problem, as `(field path, message)`.
    pub fn problems(&self) -> Vec<(String, String)> {
        let mut out: Vec<(String, String)> = Vec::new();
        let mut push = |field: &str, message: String| out.push((field.to_string(), message));

        if interval(&self.thin.base).is_none() {
            push("thin.base", "base must be an exact interval with lo < hi".into());
        }
        match self.thin.ratio.exact() {
            None => push("thin.ratio", "ratio must be a finite number such as \"1/3\"".into()),
            Some(_) => {
                if let Err(e) = self.thin_spec() {
                    push(
                        if e.to_string().contains("depth") { "thin.depth" } else { "thin.ratio" },
                        strip(e),
                    );
                }
            }
        }
        if interval(&self.fat.base).is_none() {
            push("fat.base", "base must be an exact interval with lo < hi".into());
        } else if let Err(e) = self.fat_spec() {
            push(
                if e.to_string().contains("depth") { "fat.depth" } else { "fat.schedule" },
                strip(e),
            );
        }

        let ps = self.p_values();
        if ps.is_empty() {
            push("grid.p", "grid is empty".into());
        }
        if let Some((i, p)) = ps.iter().enumerate().find(|(_, p)| !(p.is_finite() && **p >= 1.0)) {
            push(&format!("grid.p.{i}"), format!("p = {p} must be a finite number >= 1"));
        }
        let s = self.s();
        if (self.grid.s.is_some() || !s.is_nan()) && !(s > 0.0 && s < 1.0) {
            push("grid.s", format!("s = {s} must lie in (0, 1)"));
        }
        if !(self.grid.radius.to_f64() > 1.0) {
            push("grid.radius", "radius must exceed 1".into());
        }
        if let Err(e) = self.quadrature.validate() {
            push("quadrature", strip(e));
        }

        let needs_fat = matches!(
            self.experiment,
            ExperimentKind::WitnessEnergy | ExperimentKind::CriticalityScan | ExperimentKind::OscillationVerify | ExperimentKind::CurveConditionSweep
        );
        if needs_fat {
            if let Ok(fat) = self.fat_spec() {
                if (1..=fat.depth).all(|k| fat.gap(k) == Rational::from_integer(0)) {
                    push("fat.schedule", "F must be totally disconnected: the schedule removes no gaps".into());
                }
            }
        }

        match self.experiment {
            ExperimentKind::WitnessEnergy => {
                let c = &self.witness_energy;
                if c.generations == 0 {
                    push("witness-energy.generations", "need at least one generation".into());
                }
                if let Some(i) = c.strip_radii.iter().position(|r| !(r.to_f64() > 0.0)) {
                    push(&format!("witness-energy.strip_radii.{i}"), "strip radii must be positive".into());
                }
                check_margin(&mut push, "witness-energy.margin", c.margin);
            }
            ExperimentKind::CriticalityScan => {
                let c = &self.criticality_scan;
                if c.generations < 4 {
                    push("criticality-scan.generations", "the verdict needs at least 4 generations".into());
                }
                check_margin(&mut push, "criticality-scan.margin", c.margin);
            }
            ExperimentKind::OscillationVerify => {
                let c = &self.oscillation_verify;
                if c.deltas.is_empty() {
                    push("oscillation-verify.deltas", "grid is empty".into());
                }
                if let Some(i) = c.deltas.iter().position(|d| !(d.to_f64() > 0.0 && d.to_f64() <= 1.0)) {
                    push(&format!("oscillation-verify.deltas.{i}"), "delta must lie in (0, 1]".into());
                }
                if let Some((i, p)) = ps.iter().enumerate().find(|(_, p)| !(**p > 2.0)) {
                    push(&format!("grid.p.{i}"), format!("p = {p}: the oscillation bound needs p > 2"));
                }
                if let Ok(fat) = self.fat_spec().and_then(|f| f.build()) {
                    if !fat.retained.to_f64().contains(c.height.to_f64()) {
                        push("oscillation-verify.height", format!("height {} does not lie in F", c.height));
                    }
                }
                if !(c.budget.to_f64() > 0.0) {
                    push("oscillation-verify.budget", "budget must be positive".into());
                }
                if c.fields.is_empty() {
                    push("oscillation-verify.fields", "no fields selected".into());
                }
                if c.samples < 2 {
                    push("oscillation-verify.samples", "need at least 2 samples".into());
                }
            }
            ExperimentKind::CurveConditionSweep => {
                let c = &self.curve_condition_sweep;
                if c.scales.is_empty() {
                    push("curve-condition-sweep.scales", "grid is empty".into());
                }
                if let Some(i) = c.scales.iter().position(|r| !(r.to_f64() > 0.0)) {
                    push(&format!("curve-condition-sweep.scales.{i}"), "scales must be positive".into());
                }
                if c.pairs == 0 {
                    push("curve-condition-sweep.pairs", "need at least one pair".into());
                }
                let a = c.hole_alpha.to_f64();
                if !(a > 0.0 && a <= 0.5) {
                    push("curve-condition-sweep.hole_alpha", "hole_alpha must lie in (0, 1/2]".into());
                }
                if let Some(i) = c.covariance.iter().position(|l| !(l.to_f64() > 0.0)) {
                    push(&format!("curve-condition-sweep.covariance.{i}"), "dilations must be positive".into());
                }
                if let Some((i, p)) = ps.iter().enumerate().find(|(_, p)| !(**p > 2.0)) {
                    push(&format!("grid.p.{i}"), format!("p = {p}: the curve condition needs p > 2"));
                }
            }
            ExperimentKind::GeometryEstimators => {
                let c = &self.geometry_estimators;
                let deltas = c.deltas.values();
                if deltas.is_empty() {
                    push("geometry-estimators.deltas", "grid is empty".into());
                }
                if deltas.iter().any(|d| !(*d > 0.0 && *d <= 1.0)) {
                    push("geometry-estimators.deltas", "delta must lie in (0, 1]".into());
                }
                let scales: Vec<f64> = c.box_scales.iter().map(|e| e.to_f64()).collect();
                if scales.len() < 3 || scales.iter().any(|e| !(*e > 0.0)) {
                    push("geometry-estimators.box_scales", "need at least 3 positive box scales".into());
                } else {
                    let (lo, hi) = scales.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &e| (l.min(e), h.max(e)));
                    if hi / lo < 100.0 * (1.0 - 1e-12) {
                        push("geometry-estimators.box_scales", "box scales must span two decades".into());
                    }
                }
                if c.porosity_scales == 0 || c.porosity_samples == 0 {
                    push("geometry-estimators.porosity_samples", "porosity needs scales and samples".into());
                }
                if let Some(a) = c.salli_alpha {
                    if !(a.to_f64() > 0.0 && a.to_f64() < 1.0) {
                        push("geometry-estimators.salli_alpha", "salli_alpha must lie in (0, 1)".into());
                    }
                }
            }
        }
        out
    }
}

fn check_margin(push: &mut impl FnMut(&str, String), field: &str, margin: Literal) {
    let m = margin.to_f64();
    if !(0.0..1.0).contains(&m) {
        push(field, "margin must lie in [0, 1)".into());
    }
}

/// Core error text without its category prefix.
fn strip(e: removability::Error) -> String {
    let text = e.to_string();
    text.strip_prefix("invalid spec: ").unwrap_or(&text).to_string()
}

fn interval(base: &[Literal; 2]) -> Option<Interval<Rational>> {
    Interval::new(base[0].exact()?, base[1].exact()?).ok()
}

fn lit(n: i128, d: i128) -> Literal {
    Literal::Exact(Rational::new(n, d))
}

fn unit_base() -> [Literal; 2] {
    [Literal::from(0), Literal::from(1)]
}

fn one_third() -> Literal {
    lit(1, 3)
}

fn quarter_powers() -> ScheduleConfig {
    ScheduleConfig::Geometric {
        scale: Literal::from(1),
        factor: lit(1, 4),
    }
}

fn default_thin_depth() -> u32 {
    12
}

fn default_fat_depth() -> u32 {
    8
}

fn default_radius() -> Literal {
    Literal::from(2)
}

fn default_margin() -> Literal {
    lit(1, 50)
}
