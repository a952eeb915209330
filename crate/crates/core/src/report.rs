//! JSON-configured verification runs, their reports and CSV plot data.
//!
//! A [`RunConfig`] names a Hamiltonian and the estimator settings; [`execute`]
//! runs the requested experiments and returns a [`VerificationReport`] whose
//! `findings` depend only on the configuration and the seed. Wall-clock time
//! and the worker count are kept outside `findings`.

use std::f64::consts::TAU;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::calabi::{calabi, CalabiOrders};
use crate::cauchy::{
    cauchy_calabi_identity, cauchy_pompeiu, lemma1_bound_check, singular_mass, CauchyOrders, IdentityOrders,
    Lemma1Orders, SmoothFunction,
};
use crate::error::{Error, Result};
use crate::flow::{flow_diagnostics, integrate, FlowSettings, JacobianSettings};
use crate::geometry::{sample_disc_uniform, ComplexPoint, DiscDomain, PairConfiguration};
use crate::hamiltonian::{HamiltonianConfig, HamiltonianSpec};
use crate::linking::{
    average_rotation_mc, average_rotation_radial, pair_average, pair_winding_arg, symmetry_reduction_check,
    MonteCarloSettings,
};
use crate::rng::StreamRoot;

const MAX_SAMPLES: u64 = 1_000_000_000;
const MAX_WORKERS: usize = 1024;
const MAX_ORDER: usize = 4096;
/// Times at which the fixed-time diagnostics are evaluated.
pub const DIAGNOSTIC_TIMES: [f64; 3] = [0.0, 0.5, 1.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    TheoremCheck,
    Diagnostics,
    All,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorConfig {
    pub samples: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub flow: FlowSettings,
    #[serde(default)]
    pub calabi: CalabiOrders,
    /// Gauss–Legendre order of the radial closed form.
    #[serde(default = "default_radial_order")]
    pub radial_order: usize,
    #[serde(default = "default_histogram_bins")]
    pub histogram_bins: usize,
}

fn default_workers() -> usize {
    1
}

fn default_radial_order() -> usize {
    64
}

fn default_histogram_bins() -> usize {
    64
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsConfig {
    /// Pairs per Monte Carlo diagnostic (difference-quotient bound chain, symmetrization).
    pub samples: u64,
    pub jacobian_probes: usize,
    pub cauchy_points: usize,
    #[serde(default)]
    pub cauchy: CauchyOrders,
    #[serde(default)]
    pub identity: IdentityOrders,
    #[serde(default)]
    pub lemma1: Lemma1Orders,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            samples: 20_000,
            jacobian_probes: 100,
            cauchy_points: 16,
            cauchy: CauchyOrders::default(),
            identity: IdentityOrders::default(),
            lemma1: Lemma1Orders::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AssertionConfig {
    /// Multiplier `k` in every `≤ kσ` assertion.
    #[serde(default = "default_sigmas")]
    pub sigmas: f64,
    /// Bound on `|Φ + 2 Cal| / |Cal|`, when set.
    #[serde(default)]
    pub max_relative_residual: Option<f64>,
    /// Bound on `σ(Φ) / |Φ|`, when set.
    #[serde(default)]
    pub max_relative_standard_error: Option<f64>,
    /// Tolerance of the deterministic diagnostics.
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_sigmas() -> f64 {
    3.0
}

fn default_tolerance() -> f64 {
    1e-6
}

impl Default for AssertionConfig {
    fn default() -> Self {
        Self {
            sigmas: default_sigmas(),
            max_relative_residual: None,
            max_relative_standard_error: None,
            tolerance: default_tolerance(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub report: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plot_dir: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub hamiltonian: HamiltonianConfig,
    pub estimator: EstimatorConfig,
    pub experiments: Vec<Experiment>,
    #[serde(default)]
    pub diagnostics: DiagnosticsConfig,
    #[serde(default)]
    pub assertions: AssertionConfig,
    /// Pairs `[[x1, y1], [x2, y2]]` whose trajectories go into the report.
    #[serde(default)]
    pub trace_pairs: Vec<[ComplexPoint; 2]>,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Command-line overrides of the estimator settings.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
}

fn check_order(name: &str, n: usize) -> Result<()> {
    if (1..=MAX_ORDER).contains(&n) {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must lie in [1, {MAX_ORDER}], got {n}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    pub fn apply(&mut self, overrides: &Overrides) {
        if let Some(seed) = overrides.seed {
            self.estimator.seed = seed;
        }
        if let Some(samples) = overrides.samples {
            self.estimator.samples = samples;
        }
        if let Some(workers) = overrides.workers {
            self.estimator.workers = workers;
        }
    }

    pub fn spec(&self) -> Result<HamiltonianSpec> {
        HamiltonianSpec::try_from(&self.hamiltonian)
    }

    pub fn runs(&self, experiment: Experiment) -> bool {
        self.experiments.contains(&experiment) || self.experiments.contains(&Experiment::All)
    }

    pub fn validate(&self) -> Result<()> {
        self.spec().map_err(|e| Error::Config(e.to_string()))?;
        let est = &self.estimator;
        if !(100..=MAX_SAMPLES).contains(&est.samples) {
            return Err(Error::Config(format!("samples must lie in [100, {MAX_SAMPLES}]")));
        }
        if !(1..=MAX_WORKERS).contains(&est.workers) {
            return Err(Error::Config(format!("workers must lie in [1, {MAX_WORKERS}]")));
        }
        est.flow.validate()?;
        check_order("calabi.radial", est.calabi.radial)?;
        check_order("calabi.angular", est.calabi.angular)?;
        check_order("calabi.time", est.calabi.time)?;
        check_order("radial_order", est.radial_order)?;
        check_order("histogram_bins", est.histogram_bins)?;
        if self.experiments.is_empty() {
            return Err(Error::Config("experiments must not be empty".into()));
        }
        let diag = &self.diagnostics;
        if !(100..=MAX_SAMPLES).contains(&diag.samples) {
            return Err(Error::Config("diagnostics.samples must lie in [100, 1e9]".into()));
        }
        check_order("diagnostics.jacobian_probes", diag.jacobian_probes)?;
        check_order("diagnostics.cauchy_points", diag.cauchy_points)?;
        for (name, n) in [
            ("cauchy.radial", diag.cauchy.radial),
            ("cauchy.angular", diag.cauchy.angular),
            ("identity.outer_radial", diag.identity.outer_radial),
            ("identity.outer_angular", diag.identity.outer_angular),
            ("identity.inner.radial", diag.identity.inner.radial),
            ("identity.inner.angular", diag.identity.inner.angular),
            ("lemma1.radial", diag.lemma1.radial),
            ("lemma1.angular", diag.lemma1.angular),
            ("lemma1.mass_angular", diag.lemma1.mass_angular),
        ] {
            check_order(name, n)?;
        }
        let a = &self.assertions;
        let positive = |x: f64| x.is_finite() && x > 0.0;
        if !positive(a.sigmas) || !positive(a.tolerance) {
            return Err(Error::Config("sigmas and tolerance must be positive".into()));
        }
        if a.max_relative_residual.is_some_and(|x| !positive(x))
            || a.max_relative_standard_error.is_some_and(|x| !positive(x))
        {
            return Err(Error::Config("relative bounds must be positive".into()));
        }
        for [z1, z2] in &self.trace_pairs {
            if !z1.is_in_disc() || !z2.is_in_disc() {
                return Err(Error::Config("trace pair leaves the unit disc".into()));
            }
            PairConfiguration::new(*z1, *z2).map_err(|e| Error::Config(e.to_string()))?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiEstimate {
    pub value: f64,
    pub standard_error: f64,
    pub samples: u64,
    pub redraws: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LambdaEstimate {
    pub value: Complex64,
    pub re_standard_error: f64,
    pub im_standard_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub lower: f64,
    pub upper: f64,
    pub count: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunningMean {
    pub n: u64,
    pub phi: f64,
    pub standard_error: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub z1: Complex64,
    pub z2: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairTrace {
    pub winding: f64,
    pub rows: Vec<TraceRow>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheoremSection {
    pub calabi: Estimate,
    pub phi: PhiEstimate,
    pub lambda: LambdaEstimate,
    /// `Φ` from the one-dimensional radial formula, for radial Hamiltonians.
    pub phi_closed_form: Option<f64>,
    /// `|Φ + 2 Cal|`.
    pub residual: f64,
    /// `|Φ + 2 Cal| / |Cal|`, absent when `Cal = 0`.
    pub relative_residual: Option<f64>,
    pub histogram: Vec<HistogramBin>,
    pub running_mean: Vec<RunningMean>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Entry {
    pub t: f64,
    pub estimate: f64,
    pub sigma: f64,
    pub middle: f64,
    pub majorant: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: f64,
    pub relative_residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryEntry {
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub sigma: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsSection {
    pub jacobian_max_deviation: f64,
    pub max_radius_excess: f64,
    pub lemma1: Vec<Lemma1Entry>,
    /// Largest `|reconstructed - f(w)| / (1 + |f(w)|)` over the probes.
    pub cauchy_pompeiu_max_error: f64,
    pub cauchy_calabi: Vec<IdentityEntry>,
    pub symmetry: Vec<SymmetryEntry>,
    pub singular_mass_origin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssertionOutcome {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RunStatus {
    Pass,
    AssertionFailure,
    NumericDivergence,
}

impl RunStatus {
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Pass => 0,
            RunStatus::AssertionFailure => 1,
            RunStatus::NumericDivergence => 3,
        }
    }
}

/// Everything a run computes. Identical for identical configurations and
/// seeds, whatever the worker count.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Findings {
    pub seed: u64,
    pub family: String,
    /// Exponent `k` of a polynomial profile, which limits smoothness to `C^(k-1)`.
    pub polynomial_exponent: Option<u32>,
    pub theorem: Option<TheoremSection>,
    pub diagnostics: Option<DiagnosticsSection>,
    pub traces: Vec<PairTrace>,
    pub assertions: Vec<AssertionOutcome>,
    pub error: Option<String>,
    pub status: RunStatus,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub wall_seconds: f64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub version: String,
    pub config: RunConfig,
    pub findings: Findings,
    pub timing: Timing,
}

impl VerificationReport {
    pub fn status(&self) -> RunStatus {
        self.findings.status
    }

    /// The serialized findings; equal strings mean bit-identical numbers.
    pub fn fingerprint(&self) -> String {
        serde_json::to_string(&self.findings).expect("findings serialize")
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        Ok(serde_json::from_str(&fs::read_to_string(path)?)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            fs::create_dir_all(dir)?;
        }
        fs::write(path, self.to_json())?;
        Ok(())
    }
}

struct Asserter {
    outcomes: Vec<AssertionOutcome>,
}

impl Asserter {
    fn at_most(&mut self, name: &str, value: f64, threshold: f64) {
        self.outcomes.push(AssertionOutcome {
            name: name.into(),
            passed: value <= threshold,
            value,
            threshold,
        });
    }
}

fn histogram(values: &[f64], bins: usize) -> Vec<HistogramBin> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if values.is_empty() {
        return Vec::new();
    }
    if hi == lo {
        return vec![HistogramBin {
            lower: lo,
            upper: hi,
            count: values.len() as u64,
        }];
    }
    let width = (hi - lo) / bins as f64;
    let mut counts = vec![0u64; bins];
    for &v in values {
        let i = (((v - lo) / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            lower: lo + i as f64 * width,
            upper: if i + 1 == bins { hi } else { lo + (i + 1) as f64 * width },
            count,
        })
        .collect()
}

/// Running estimate at four checkpoints per octave and at `N`; the last row
/// is the final estimate itself.
fn running_mean(windings: &[f64], final_standard_error: f64) -> Vec<RunningMean> {
    let n = windings.len() as u64;
    let mut checkpoints: Vec<u64> = (16..)
        .map(|j| 2f64.powf(j as f64 / 4.0).round() as u64)
        .take_while(|&c| c < n)
        .collect();
    checkpoints.dedup();
    checkpoints.push(n);
    let mut out = Vec::with_capacity(checkpoints.len());
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    let mut next = checkpoints.iter().peekable();
    for (i, &w) in windings.iter().enumerate() {
        sum += w;
        sum_sq += w * w;
        let count = i as u64 + 1;
        if next.peek() == Some(&&count) {
            next.next();
            let c = count as f64;
            let var = ((sum_sq - sum * sum / c) / (c - 1.0)).max(0.0);
            // the last row repeats the estimator's own summation
            let (total, se) = if count == n {
                (windings.iter().sum(), final_standard_error)
            } else {
                (sum, DiscDomain::PAIR_AREA * (var / c).sqrt())
            };
            out.push(RunningMean {
                n: count,
                phi: pair_average(total, count),
                standard_error: se,
            });
        }
    }
    out
}

fn theorem_check(config: &RunConfig, spec: &HamiltonianSpec, checks: &mut Asserter) -> Result<TheoremSection> {
    let est = &config.estimator;
    let k = config.assertions.sigmas;
    let cal = calabi(spec, est.calabi);
    let settings = MonteCarloSettings {
        samples: est.samples,
        root: StreamRoot::new(est.seed),
        workers: est.workers,
    };
    let mc = average_rotation_mc(spec, &settings, &est.flow)?;
    let phi = mc.phi.phi;
    let se = mc.phi.standard_error;
    let phi_closed_form = match spec.radial_profile() {
        Some(_) => Some(average_rotation_radial(spec, est.radial_order)?.phi),
        None => None,
    };

    let residual = (phi + 2.0 * cal.value).abs();
    let relative_residual = (cal.value != 0.0).then(|| residual / cal.value.abs());
    let combined = se.hypot(2.0 * cal.estimated_error);
    checks.at_most("theorem-residual", residual, k * combined);
    if let (Some(bound), Some(rel)) = (config.assertions.max_relative_residual, relative_residual) {
        checks.at_most("theorem-relative-residual", rel, bound);
    }
    if let Some(bound) = config.assertions.max_relative_standard_error {
        let rel = if se == 0.0 { 0.0 } else { se / phi.abs() };
        checks.at_most("relative-standard-error", rel, bound);
    }
    if let Some(closed) = phi_closed_form {
        checks.at_most("closed-form-vs-calabi", (closed + 2.0 * cal.value).abs(), 1e-10);
        checks.at_most("closed-form-vs-monte-carlo", (phi - closed).abs(), k * se);
    }
    checks.at_most("lambda-real-part", mc.lambda.value.re.abs(), k * mc.lambda.re_standard_error);
    checks.at_most("lambda-imaginary-part", (mc.lambda.value.im - phi).abs(), 0.0);

    Ok(TheoremSection {
        calabi: Estimate {
            value: cal.value,
            error: cal.estimated_error,
        },
        phi: PhiEstimate {
            value: phi,
            standard_error: se,
            samples: mc.phi.sample_count,
            redraws: mc.samples.redraws,
        },
        lambda: LambdaEstimate {
            value: mc.lambda.value,
            re_standard_error: mc.lambda.re_standard_error,
            im_standard_error: mc.lambda.im_standard_error,
        },
        phi_closed_form,
        residual,
        relative_residual,
        histogram: histogram(&mc.samples.windings, est.histogram_bins),
        running_mean: running_mean(&mc.samples.windings, se),
    })
}

fn diagnostics(config: &RunConfig, spec: &HamiltonianSpec, checks: &mut Asserter) -> Result<DiagnosticsSection> {
    let diag = &config.diagnostics;
    let tol = config.assertions.tolerance;
    let k = config.assertions.sigmas;
    let root = StreamRoot::new(config.estimator.seed);

    let mut rng = root.child(1).stream(0);
    let probes: Vec<(ComplexPoint, f64)> = (0..diag.jacobian_probes)
        .map(|_| {
            // keep the finite-difference stencil inside the disc
            let z = loop {
                let z = sample_disc_uniform(&mut rng);
                if z.norm() < 0.999 {
                    break z;
                }
            };
            (z, rng.random::<f64>())
        })
        .collect();
    let flow = flow_diagnostics(spec, &probes, &JacobianSettings::default(), &config.estimator.flow)?;
    checks.at_most("jacobian", flow.max_jacobian_deviation, tol);

    let settings = |label| MonteCarloSettings {
        samples: diag.samples,
        root: root.child(label),
        workers: config.estimator.workers,
    };
    let mut lemma1 = Vec::new();
    let mut symmetry = Vec::new();
    let mut cauchy_calabi = Vec::new();
    for (i, &t) in DIAGNOSTIC_TIMES.iter().enumerate() {
        let l = lemma1_bound_check(spec, t, &settings(10 + i as u64), diag.lemma1)?;
        checks.at_most(&format!("lemma1-bound-t{t}"), l.estimate, l.majorant + k * l.sigma);
        lemma1.push(Lemma1Entry {
            t,
            estimate: l.estimate,
            sigma: l.sigma,
            middle: l.middle,
            majorant: l.majorant,
        });
        let s = symmetry_reduction_check(spec, t, &settings(20 + i as u64))?;
        checks.at_most(&format!("symmetry-t{t}"), s.discrepancy(), k * s.sigma);
        symmetry.push(SymmetryEntry {
            t,
            lhs: s.lhs,
            rhs: s.rhs,
            sigma: s.sigma,
        });
        let c = cauchy_calabi_identity(spec, t, diag.identity)?;
        cauchy_calabi.push(IdentityEntry {
            t,
            lhs: c.lhs,
            rhs: c.rhs,
            relative_residual: c.relative_residual(),
        });
    }
    let worst_identity = cauchy_calabi.iter().map(|c| c.relative_residual).fold(0.0, f64::max);
    checks.at_most("cauchy-calabi-identity", worst_identity, tol);

    let mut rng = root.child(2).stream(0);
    let mut cauchy_pompeiu_max_error: f64 = 0.0;
    for _ in 0..diag.cauchy_points {
        let w = sample_disc_uniform(&mut rng);
        let t = rng.random::<f64>();
        let f = SmoothFunction::Hamiltonian { spec: spec.clone(), t };
        let exact = f.value(w.to_complex());
        let cp = cauchy_pompeiu(&f, w, diag.cauchy)?;
        let err = (cp.reconstructed - exact).norm() / (1.0 + exact.norm());
        cauchy_pompeiu_max_error = cauchy_pompeiu_max_error.max(err);
    }
    checks.at_most("cauchy-pompeiu", cauchy_pompeiu_max_error, tol);

    let singular_mass_origin = singular_mass(ComplexPoint::origin(), diag.cauchy)?;
    checks.at_most("singular-mass-origin", (singular_mass_origin - TAU).abs(), 1e-8);

    Ok(DiagnosticsSection {
        jacobian_max_deviation: flow.max_jacobian_deviation,
        max_radius_excess: flow.max_radius_excess,
        lemma1,
        cauchy_pompeiu_max_error,
        cauchy_calabi,
        symmetry,
        singular_mass_origin,
    })
}

fn traces(config: &RunConfig, spec: &HamiltonianSpec) -> Result<Vec<PairTrace>> {
    config
        .trace_pairs
        .iter()
        .map(|[z1, z2]| {
            let a = integrate(spec, *z1, &config.estimator.flow)?;
            let b = integrate(spec, *z2, &config.estimator.flow)?;
            let winding = pair_winding_arg(&a, &b)?.winding;
            let rows = a
                .times()
                .iter()
                .zip(a.points().iter().zip(b.points()))
                .map(|(&t, (&z1, &z2))| TraceRow { t, z1, z2 })
                .collect();
            Ok(PairTrace { winding, rows })
        })
        .collect()
}

/// Runs the configured experiments.
///
/// Numeric failures (divergence, collisions, sampling degeneracy) end the run
/// early and are recorded in the report; other errors are returned.
pub fn execute(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let start = Instant::now();
    let spec = config.spec()?;
    let mut checks = Asserter { outcomes: Vec::new() };
    let mut findings = Findings {
        seed: config.estimator.seed,
        family: spec.family_name().into(),
        polynomial_exponent: spec.polynomial_exponent(),
        theorem: None,
        diagnostics: None,
        traces: Vec::new(),
        assertions: Vec::new(),
        error: None,
        status: RunStatus::Pass,
    };

    let outcome = (|| -> Result<()> {
        if config.runs(Experiment::TheoremCheck) {
            findings.theorem = Some(theorem_check(config, &spec, &mut checks)?);
        }
        if config.runs(Experiment::Diagnostics) {
            findings.diagnostics = Some(diagnostics(config, &spec, &mut checks)?);
        }
        findings.traces = traces(config, &spec)?;
        Ok(())
    })();

    findings.assertions = checks.outcomes;
    match outcome {
        Err(e) if e.is_numeric() => {
            findings.error = Some(e.to_string());
            findings.status = RunStatus::NumericDivergence;
        }
        Err(e) => return Err(e),
        Ok(()) if findings.assertions.iter().any(|a| !a.passed) => {
            findings.status = RunStatus::AssertionFailure;
        }
        Ok(()) => {}
    }
    Ok(VerificationReport {
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        findings,
        timing: Timing {
            wall_seconds: start.elapsed().as_secs_f64(),
            workers: config.estimator.workers,
        },
    })
}

/// Loads `path`, applies `overrides`, executes and writes the configured outputs.
pub fn run(path: &Path, overrides: &Overrides) -> Result<VerificationReport> {
    let mut config = RunConfig::load(path)?;
    config.apply(overrides);
    let report = execute(&config)?;
    if let Some(out) = &config.output.report {
        report.write(out)?;
    }
    if let Some(dir) = &config.output.plot_dir {
        emit_plot_data(&report, dir)?;
    }
    Ok(report)
}

fn csv_file(path: &Path, header: &str) -> Result<fs::File> {
    let mut file = fs::File::create(path)?;
    writeln!(file, "{header}")?;
    Ok(file)
}

/// Writes `histogram.csv`, `running_mean.csv` and `traces.csv` into `dir`
/// and returns their paths. Each file starts with a header line.
pub fn emit_plot_data(report: &VerificationReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if let Some(theorem) = &report.findings.theorem {
        let path = dir.join("histogram.csv");
        let mut f = csv_file(&path, "lower,upper,count")?;
        for b in &theorem.histogram {
            writeln!(f, "{},{},{}", b.lower, b.upper, b.count)?;
        }
        written.push(path);

        let path = dir.join("running_mean.csv");
        let mut f = csv_file(&path, "n,phi,standard_error")?;
        for r in &theorem.running_mean {
            writeln!(f, "{},{},{}", r.n, r.phi, r.standard_error)?;
        }
        written.push(path);
    }
    if !report.findings.traces.is_empty() {
        let path = dir.join("traces.csv");
        let mut f = csv_file(&path, "pair,t,x1,y1,x2,y2,r1,r2")?;
        for (i, trace) in report.findings.traces.iter().enumerate() {
            for r in &trace.rows {
                writeln!(
                    f,
                    "{i},{},{},{},{},{},{},{}",
                    r.t,
                    r.z1.re,
                    r.z1.im,
                    r.z2.re,
                    r.z2.im,
                    r.z1.norm(),
                    r.z2.norm()
                )?;
            }
        }
        written.push(path);
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero_config() -> RunConfig {
        RunConfig::from_json(
            r#"{
                "hamiltonian": {"name": "zero"},
                "estimator": {"samples": 200, "seed": 1},
                "experiments": ["theorem-check"],
                "trace_pairs": [[[0.1, 0.0], [-0.5, 0.5]]]
            }"#,
        )
        .unwrap()
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = RunConfig::from_json(
            r#"{"hamiltonain": {"name": "zero"}, "estimator": {"samples": 200, "seed": 1}, "experiments": ["all"]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }

    #[test]
    fn out_of_range_settings_are_rejected() {
        let mut config = zero_config();
        config.estimator.workers = 0;
        assert!(config.validate().is_err());
        let mut config = zero_config();
        config.estimator.samples = 10;
        assert!(config.validate().is_err());
        let mut config = zero_config();
        config.trace_pairs = vec![[ComplexPoint::origin(), ComplexPoint::origin()]];
        assert!(config.validate().is_err());
    }

    #[test]
    fn zero_hamiltonian_run() {
        let report = execute(&zero_config()).unwrap();
        let theorem = report.findings.theorem.as_ref().unwrap();
        assert_eq!(theorem.calabi.value, 0.0);
        assert_eq!(theorem.phi.value, 0.0);
        assert_eq!(theorem.residual, 0.0);
        assert_eq!(theorem.histogram.len(), 1);
        assert_eq!(theorem.histogram[0].count, 200);
        assert_eq!(report.status().exit_code(), 0);
        assert_eq!(report.findings.traces[0].winding, 0.0);
    }

    #[test]
    fn running_mean_ends_at_phi() {
        let w: Vec<f64> = (0..1000).map(|i| ((i * 37) % 11) as f64 * 0.01).collect();
        let rows = running_mean(&w, 0.5);
        assert_eq!(rows.last().unwrap().n, 1000);
        assert_eq!(rows.last().unwrap().phi, pair_average(w.iter().sum(), 1000));
        assert!(rows.windows(2).all(|p| p[0].n < p[1].n));
    }

    #[test]
    fn histogram_counts_everything() {
        let w = [0.0, 0.1, 0.2, 0.2, 1.0];
        let bins = histogram(&w, 4);
        assert_eq!(bins.iter().map(|b| b.count).sum::<u64>(), 5);
        assert_eq!(bins[3].count, 1);
        assert_eq!(bins[3].upper, 1.0);
    }

    #[test]
    fn overrides_replace_estimator_settings() {
        let mut config = zero_config();
        config.apply(&Overrides {
            seed: Some(9),
            samples: Some(300),
            workers: Some(2),
        });
        assert_eq!((config.estimator.seed, config.estimator.samples, config.estimator.workers), (9, 300, 2));
    }
}
