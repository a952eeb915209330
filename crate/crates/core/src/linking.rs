//! Winding of point pairs under the isotopy and the average rotation number
//!
//! ```text
//! Φ(φ) = ∫_{X₂} dm²(x) ∫_{φ_t·x} θ,    θ = Im α,    α = (1/2π) d(z₁ - z₂)/(z₁ - z₂)
//! ```
//!
//! Windings are measured in turns (the `1/2π` of `α` is included), and pair
//! averages are scaled by the mass `π²` of `D × D`.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{advance, integrate_from, FlowSettings, Trajectory};
use crate::geometry::{sample_disc, DiscDomain};
use crate::hamiltonian::{Hamiltonian, HamiltonianSpec};
use crate::quadrature::GaussLegendre;
use crate::rng::{par_samples, StreamRoot};

/// Pairs closer than this are treated as collided.
pub const COLLISION_DISTANCE: f64 = 1e-14;
/// Maximum bisection depth when resolving a fast-turning grid interval.
pub const MAX_UNWRAP_DEPTH: u32 = 40;
/// Redraws allowed for a single sample before the run is declared degenerate.
const MAX_REDRAWS_PER_SAMPLE: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WindingMethod {
    ArgumentTracking,
    IntegrandQuadrature,
}

/// `∫θ` and `∫α` along one pair curve.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairWinding {
    /// Turns of `z₁(t) - z₂(t)` around the origin.
    pub winding: f64,
    pub line_integral: Complex64,
    pub method: WindingMethod,
}

fn same_grid(a: &Trajectory, b: &Trajectory) -> Result<()> {
    if a.times() != b.times() {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

fn collision_guard(t: f64, d: Complex64) -> Result<()> {
    let distance = d.norm();
    if !(distance >= COLLISION_DISTANCE) {
        return Err(Error::NearCollision { t, distance });
    }
    Ok(())
}

/// Winding of the difference curve by continuous argument tracking.
///
/// Grid intervals over which the argument moves by more than `π/2` are
/// bisected with the trajectories' dense output until every piece turns by
/// less than `π/2`.
pub fn pair_winding_arg(first: &Trajectory, second: &Trajectory) -> Result<PairWinding> {
    same_grid(first, second)?;
    let times = first.times();
    let p1 = first.points();
    let p2 = second.points();
    let d0 = p1[0] - p2[0];
    collision_guard(0.0, d0)?;
    let mut angle = 0.0;
    let mut prev = d0;
    for i in 0..first.intervals() {
        let next = p1[i + 1] - p2[i + 1];
        collision_guard(times[i + 1], next)?;
        let step = (next / prev).arg();
        angle += if step.abs() < FRAC_PI_2 {
            step
        } else {
            let diff = |t: f64| first.interpolate_in(i, t) - second.interpolate_in(i, t);
            refine_turn(&diff, times[i], times[i + 1], prev, next, 0)?
        };
        prev = next;
    }
    let d1 = prev;
    let winding = angle / TAU;
    Ok(PairWinding {
        winding,
        line_integral: Complex64::new((d1.norm() / d0.norm()).ln() / TAU, winding),
        method: WindingMethod::ArgumentTracking,
    })
}

fn refine_turn<F: Fn(f64) -> Complex64>(
    diff: &F,
    ta: f64,
    tb: f64,
    da: Complex64,
    db: Complex64,
    depth: u32,
) -> Result<f64> {
    let step = (db / da).arg();
    if step.abs() < FRAC_PI_2 {
        return Ok(step);
    }
    if depth >= MAX_UNWRAP_DEPTH {
        return Err(Error::UnwrapFailed { t: ta });
    }
    let tm = 0.5 * (ta + tb);
    let dm = diff(tm);
    collision_guard(tm, dm)?;
    Ok(refine_turn(diff, ta, tm, da, dm, depth + 1)? + refine_turn(diff, tm, tb, dm, db, depth + 1)?)
}

/// Nodes per grid interval for [`pair_winding_integrand`].
const INTEGRAND_ORDER: usize = 6;

/// `∫α` by quadrature of `(1/2π)(ξ_t(z₁) - ξ_t(z₂))/(z₁ - z₂)` in time.
///
/// Quadrature nodes are reached by integrating on from each grid point with
/// the trajectories' own step policy.
pub fn pair_winding_integrand<H: Hamiltonian + ?Sized>(
    field: &H,
    first: &Trajectory,
    second: &Trajectory,
) -> Result<PairWinding> {
    same_grid(first, second)?;
    let rule = GaussLegendre::new(INTEGRAND_ORDER);
    let times = first.times();
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..first.intervals() {
        collision_guard(times[i], first.points()[i] - second.points()[i])?;
        let (mut t_prev, mut z1, mut z2) = (times[i], first.points()[i], second.points()[i]);
        for (t, w) in rule.on_interval(times[i], times[i + 1]) {
            z1 = advance(field, z1, t_prev, t, first.policy())?;
            z2 = advance(field, z2, t_prev, t, second.policy())?;
            t_prev = t;
            let d = z1 - z2;
            collision_guard(t, d)?;
            let dxi = field.velocity(t, z1) - field.velocity(t, z2);
            if dxi != Complex64::new(0.0, 0.0) {
                total += w * dxi / d;
            }
        }
    }
    let line_integral = total / TAU;
    Ok(PairWinding {
        winding: line_integral.im,
        line_integral,
        method: WindingMethod::IntegrandQuadrature,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationEstimator {
    MonteCarlo,
    RadialQuadrature,
    ClosedFormRadial,
}

/// An estimate of `Φ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RotationEstimate {
    pub phi: f64,
    pub standard_error: f64,
    pub sample_count: u64,
    pub estimator: RotationEstimator,
}

/// Monte Carlo estimate of `Λ = ∫_{X₂} dm² ∫ α`, with per-component errors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub re_standard_error: f64,
    pub im_standard_error: f64,
}

/// Per-pair contributions of a Monte Carlo run, kept in sample order.
#[derive(Clone, Debug)]
pub struct RotationSamples {
    /// Turns of each sampled pair.
    pub windings: Vec<f64>,
    /// `Re ∫α` of each sampled pair.
    pub log_ratios: Vec<f64>,
    pub redraws: u64,
}

/// Outcome of [`average_rotation_mc`].
#[derive(Clone, Debug)]
pub struct MonteCarloRotation {
    pub phi: RotationEstimate,
    pub lambda: ComplexEstimate,
    pub samples: RotationSamples,
}

/// Monte Carlo settings shared by the pair estimators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MonteCarloSettings {
    pub samples: u64,
    pub root: StreamRoot,
    pub workers: usize,
}

fn mean_and_standard_error(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// `π² · (mean of the first n values)`, the running estimate of `Φ`.
pub fn pair_average(sum: f64, n: u64) -> f64 {
    DiscDomain::PAIR_AREA * (sum / n as f64)
}

/// Draws a pair with `z₁ ≠ z₂` from `rng`, counting redraws.
fn draw_pair<R: Rng + ?Sized>(rng: &mut R, redraws: &mut u64) -> Result<(Complex64, Complex64)> {
    loop {
        let z1 = sample_disc(rng);
        let z2 = sample_disc(rng);
        if (z1 - z2).norm() >= COLLISION_DISTANCE {
            return Ok((z1, z2));
        }
        bump_redraws(redraws)?;
    }
}

fn bump_redraws(redraws: &mut u64) -> Result<()> {
    *redraws += 1;
    if *redraws > MAX_REDRAWS_PER_SAMPLE {
        return Err(Error::SamplingDegeneracy {
            redraws: *redraws,
            samples: 1,
        });
    }
    Ok(())
}

/// Winding and `Re ∫α` of one random pair, redrawing on collisions.
fn sample_pair_winding<H: Hamiltonian + ?Sized, R: Rng + ?Sized>(
    field: &H,
    flow: &FlowSettings,
    rng: &mut R,
) -> Result<(f64, f64, u64)> {
    let mut redraws = 0;
    loop {
        let (z1, z2) = draw_pair(rng, &mut redraws)?;
        let a = integrate_from(field, z1, flow)?;
        let b = integrate_from(field, z2, flow)?;
        match pair_winding_arg(&a, &b) {
            Ok(w) => return Ok((w.winding, w.line_integral.re, redraws)),
            Err(Error::NearCollision { .. }) => bump_redraws(&mut redraws)?,
            Err(e) => return Err(e),
        }
    }
}

/// Monte Carlo estimate of `Φ` (and of `Λ` from the same pairs).
///
/// Sample `i` draws from stream `i` of `settings.root`, so the result is
/// bit-identical for any worker count.
pub fn average_rotation_mc<H: Hamiltonian + ?Sized>(
    field: &H,
    settings: &MonteCarloSettings,
    flow: &FlowSettings,
) -> Result<MonteCarloRotation> {
    if settings.samples < 100 {
        return Err(Error::Domain("Monte Carlo needs at least 100 samples".into()));
    }
    let draws = par_samples(settings.root, settings.samples, settings.workers, |_, rng| {
        sample_pair_winding(field, flow, rng)
    })
    .map_err(|e| match e {
        Error::SamplingDegeneracy { redraws, .. } => Error::SamplingDegeneracy {
            redraws,
            samples: settings.samples,
        },
        e => e,
    })?;
    let redraws: u64 = draws.iter().map(|d| d.2).sum();
    if redraws as f64 > 0.01 * settings.samples as f64 {
        return Err(Error::SamplingDegeneracy {
            redraws,
            samples: settings.samples,
        });
    }
    let windings: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let log_ratios: Vec<f64> = draws.iter().map(|d| d.1).collect();
    Ok(summarize(RotationSamples {
        windings,
        log_ratios,
        redraws,
    }))
}

fn summarize(samples: RotationSamples) -> MonteCarloRotation {
    let n = samples.windings.len() as u64;
    let mass = DiscDomain::PAIR_AREA;
    let (_, im_se) = mean_and_standard_error(&samples.windings);
    let (_, re_se) = mean_and_standard_error(&samples.log_ratios);
    let im = pair_average(samples.windings.iter().sum(), n);
    let re = pair_average(samples.log_ratios.iter().sum(), n);
    MonteCarloRotation {
        phi: RotationEstimate {
            phi: im,
            standard_error: mass * im_se,
            sample_count: n,
            estimator: RotationEstimator::MonteCarlo,
        },
        lambda: ComplexEstimate {
            value: Complex64::new(re, im),
            re_standard_error: mass * re_se,
            im_standard_error: mass * im_se,
        },
        samples,
    }
}

/// `Φ` of an autonomous radial Hamiltonian `H = h(|z|²)`: `-2π ∫₀¹ h(s) ds`.
///
/// A pair at radii `r₁ < r₂` with uniformly distributed angles winds on
/// average by the turns of the outer point, `h'(r₂²)/π`; integrating over
/// both radii gives the formula.
pub fn average_rotation_radial(spec: &HamiltonianSpec, radial_order: usize) -> Result<RotationEstimate> {
    let profile = spec.radial_profile().ok_or_else(|| {
        Error::Domain(format!(
            "radial quadrature needs an autonomous radial Hamiltonian, got {}",
            spec.family_name()
        ))
    })?;
    let support = profile.support();
    let integral = if support == 0.0 {
        0.0
    } else {
        GaussLegendre::new(radial_order).integrate(0.0, support, |s| profile.value(s))
    };
    Ok(RotationEstimate {
        phi: -TAU * integral,
        standard_error: 0.0,
        sample_count: 0,
        estimator: RotationEstimator::RadialQuadrature,
    })
}

/// The two sides of `∫∫ (ξ(z₁) - ξ(z₂))/(z₁ - z₂) dm² = 2 ∫∫ ξ(z)/(z - w) dm(w) dm(z)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetryCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    /// Standard error of the paired difference.
    pub sigma: f64,
}

impl SymmetryCheck {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).norm()
    }
}

/// Monte Carlo check of the symmetrization step at fixed `t`, with both sides
/// evaluated on the same pairs.
pub fn symmetry_reduction_check<H: Hamiltonian + ?Sized>(
    field: &H,
    t: f64,
    settings: &MonteCarloSettings,
) -> Result<SymmetryCheck> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("time {t} outside [0, 1]")));
    }
    if settings.samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let values = par_samples(settings.root, settings.samples, settings.workers, |_, rng| {
        let mut redraws = 0;
        let (z1, z2) = draw_pair(rng, &mut redraws)?;
        let (xi1, xi2) = (field.velocity(t, z1), field.velocity(t, z2));
        let d = z1 - z2;
        Ok(((xi1 - xi2) / d, 2.0 * xi1 / d))
    })?;
    let n = settings.samples as f64;
    let mass = DiscDomain::PAIR_AREA;
    let (sum_l, sum_r) = values.iter().fold(
        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)),
        |(l, r), &(a, b)| (l + a, r + b),
    );
    let mean_diff = (sum_l - sum_r) / n;
    let var = values
        .iter()
        .map(|&(a, b)| (a - b - mean_diff).norm_sqr())
        .sum::<f64>()
        / (n - 1.0);
    Ok(SymmetryCheck {
        lhs: mass * (sum_l / n),
        rhs: mass * (sum_r / n),
        sigma: mass * (var / n).sqrt(),
    })
}
