//! Integration of the Hamiltonian isotopy `φ_t` and a posteriori checks of
//! area preservation.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{sample_disc, ComplexPoint, DiscDomain, GEOM_SLACK};
use crate::hamiltonian::Hamiltonian;
use crate::rng::{par_samples, StreamRoot};

/// Smallest step the adaptive controller will take before accepting anyway.
const MIN_STEP: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "method", deny_unknown_fields)]
pub enum StepPolicy {
    /// Classical RK4 with step-doubling error control (absolute tolerance).
    Adaptive { tolerance: f64, max_step: f64 },
    /// Classical RK4 with steps no longer than `step`.
    Fixed { step: f64 },
}

impl Default for StepPolicy {
    fn default() -> Self {
        StepPolicy::Adaptive {
            tolerance: 1e-10,
            max_step: 1.0 / 64.0,
        }
    }
}

/// Integrator policy plus the uniform output grid shared by all trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSettings {
    pub policy: StepPolicy,
    /// Number of uniform output intervals on `[0, 1]`.
    pub grid_intervals: usize,
}

impl Default for FlowSettings {
    fn default() -> Self {
        Self {
            policy: StepPolicy::default(),
            grid_intervals: 256,
        }
    }
}

impl FlowSettings {
    pub fn validate(&self) -> Result<()> {
        if self.grid_intervals == 0 {
            return Err(Error::Config("grid_intervals must be positive".into()));
        }
        match self.policy {
            StepPolicy::Adaptive {
                tolerance,
                max_step,
            } => {
                if !(tolerance > 0.0 && tolerance < 1e-3) || !(max_step > 0.0 && max_step <= 1.0) {
                    return Err(Error::Config(
                        "adaptive policy needs tolerance in (0, 1e-3) and max_step in (0, 1]".into(),
                    ));
                }
            }
            StepPolicy::Fixed { step } => {
                if !(step > 0.0 && step <= 1.0) {
                    return Err(Error::Config("fixed step must lie in (0, 1]".into()));
                }
            }
        }
        Ok(())
    }
}

/// An integral curve `t ↦ φ_t(z₀)` sampled on a uniform grid of `[0, 1]`.
#[derive(Clone, Debug)]
pub struct Trajectory {
    times: Vec<f64>,
    points: Vec<Complex64>,
    velocities: Vec<Complex64>,
    policy: StepPolicy,
    step_count: usize,
    max_radius_excess: f64,
}

impl Trajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// `ξ_t(φ_t(z₀))` at the grid times.
    pub fn velocities(&self) -> &[Complex64] {
        &self.velocities
    }

    pub fn policy(&self) -> StepPolicy {
        self.policy
    }

    pub fn step_count(&self) -> usize {
        self.step_count
    }

    pub fn max_radius_excess(&self) -> f64 {
        self.max_radius_excess
    }

    pub fn initial(&self) -> Complex64 {
        self.points[0]
    }

    pub fn last(&self) -> Complex64 {
        *self.points.last().expect("trajectory has at least two samples")
    }

    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    /// Dense output by cubic Hermite interpolation inside grid interval `i`.
    pub fn interpolate_in(&self, i: usize, t: f64) -> Complex64 {
        let (t0, t1) = (self.times[i], self.times[i + 1]);
        let h = t1 - t0;
        let s = (t - t0) / h;
        let (p0, p1) = (self.points[i], self.points[i + 1]);
        let (m0, m1) = (self.velocities[i] * h, self.velocities[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        p0 * (2.0 * s3 - 3.0 * s2 + 1.0)
            + m0 * (s3 - 2.0 * s2 + s)
            + p1 * (-2.0 * s3 + 3.0 * s2)
            + m1 * (s3 - s2)
    }

    /// Dense output at any `t ∈ [0, 1]`.
    pub fn at(&self, t: f64) -> Complex64 {
        let n = self.intervals();
        let i = ((t * n as f64).floor() as usize).min(n - 1);
        self.interpolate_in(i, t)
    }
}

/// Qualitative witnesses of a flow: area preservation and disc containment.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FlowDiagnostics {
    pub max_jacobian_deviation: f64,
    pub max_radius_excess: f64,
    pub step_count: u64,
}

/// The classical RK4 increment over `[t, t + dt]`.
#[inline]
fn rk4_increment<H: Hamiltonian + ?Sized>(
    h: &H,
    t: f64,
    z: Complex64,
    k1: Complex64,
    dt: f64,
) -> Complex64 {
    let half = 0.5 * dt;
    let k2 = h.velocity(t + half, z + half * k1);
    let k3 = h.velocity(t + half, z + half * k2);
    let k4 = h.velocity(t + dt, z + dt * k3);
    dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
}

#[inline]
fn rk4_step<H: Hamiltonian + ?Sized>(
    h: &H,
    t: f64,
    z: Complex64,
    k1: Complex64,
    dt: f64,
) -> Complex64 {
    z + rk4_increment(h, t, z, k1, dt)
}

struct Stepper<'a, H: ?Sized> {
    field: &'a H,
    policy: StepPolicy,
    next_step: f64,
    steps: usize,
    max_excess: f64,
}

impl<'a, H: Hamiltonian + ?Sized> Stepper<'a, H> {
    fn new(field: &'a H, policy: StepPolicy) -> Self {
        let next_step = match policy {
            StepPolicy::Adaptive { max_step, .. } => max_step,
            StepPolicy::Fixed { step } => step,
        };
        Self {
            field,
            policy,
            next_step,
            steps: 0,
            max_excess: 0.0,
        }
    }

    fn check(&mut self, t: f64, z: Complex64) -> Result<()> {
        let r = z.norm();
        if !r.is_finite() || r > 1.0 + GEOM_SLACK {
            return Err(Error::IntegrationDiverged { t, radius: r });
        }
        self.max_excess = self.max_excess.max(r - 1.0);
        Ok(())
    }

    /// Advances `z` from `t0` to `t1`, landing exactly on `t1`.
    fn advance(&mut self, t0: f64, t1: f64, mut z: Complex64) -> Result<Complex64> {
        match self.policy {
            StepPolicy::Fixed { step } => {
                let n = ((t1 - t0) / step).ceil().max(1.0) as usize;
                let dt = (t1 - t0) / n as f64;
                // Kahan-compensated accumulation of the increments
                let mut carry = Complex64::new(0.0, 0.0);
                for j in 0..n {
                    let t = t0 + j as f64 * dt;
                    let k1 = self.field.velocity(t, z);
                    let increment = rk4_increment(self.field, t, z, k1, dt) - carry;
                    let next = z + increment;
                    carry = (next - z) - increment;
                    z = next;
                    self.steps += 1;
                    self.check(t + dt, z)?;
                }
                Ok(z)
            }
            StepPolicy::Adaptive {
                tolerance,
                max_step,
            } => {
                let mut t = t0;
                while t < t1 {
                    let remaining = t1 - t;
                    let last = self.next_step >= remaining;
                    let dt = if last { remaining } else { self.next_step };
                    let k1 = self.field.velocity(t, z);
                    let full = rk4_step(self.field, t, z, k1, dt);
                    let mid = rk4_step(self.field, t, z, k1, 0.5 * dt);
                    let k1_mid = self.field.velocity(t + 0.5 * dt, mid);
                    let fine = rk4_step(self.field, t + 0.5 * dt, mid, k1_mid, 0.5 * dt);
                    let err = (fine - full).norm() / 15.0;
                    let factor = if err == 0.0 {
                        4.0
                    } else {
                        (0.9 * (tolerance / err).powf(0.2)).clamp(0.2, 4.0)
                    };
                    if err <= tolerance || dt <= MIN_STEP {
                        z = fine;
                        t = if last { t1 } else { t + dt };
                        self.steps += 1;
                        self.check(t, z)?;
                        if !last || factor < 1.0 {
                            self.next_step = (dt * factor).clamp(MIN_STEP, max_step);
                        }
                    } else {
                        self.next_step = (dt * factor).clamp(MIN_STEP, max_step);
                    }
                }
                Ok(z)
            }
        }
    }
}

/// Integrates `ż = ξ_t(z)` from `z0` over `[0, 1]`.
pub fn integrate<H: Hamiltonian + ?Sized>(
    field: &H,
    z0: ComplexPoint,
    settings: &FlowSettings,
) -> Result<Trajectory> {
    let z0 = z0.to_complex();
    if !DiscDomain::default().contains(z0) {
        return Err(Error::Domain(format!("initial point {z0} outside the disc")));
    }
    integrate_from(field, z0, settings)
}

pub(crate) fn integrate_from<H: Hamiltonian + ?Sized>(
    field: &H,
    z0: Complex64,
    settings: &FlowSettings,
) -> Result<Trajectory> {
    let n = settings.grid_intervals;
    let times: Vec<f64> = (0..=n).map(|i| i as f64 / n as f64).collect();
    let rho = field.support_radius();
    if z0.norm_sqr() >= rho * rho {
        // outside the support the field vanishes for all t
        return Ok(Trajectory {
            times,
            points: vec![z0; n + 1],
            velocities: vec![Complex64::new(0.0, 0.0); n + 1],
            policy: settings.policy,
            step_count: 0,
            max_radius_excess: (z0.norm() - 1.0).max(0.0),
        });
    }
    let mut stepper = Stepper::new(field, settings.policy);
    stepper.check(0.0, z0)?;
    let mut points = Vec::with_capacity(n + 1);
    let mut velocities = Vec::with_capacity(n + 1);
    let mut z = z0;
    points.push(z);
    velocities.push(field.velocity(0.0, z));
    for w in times.windows(2) {
        z = stepper.advance(w[0], w[1], z)?;
        points.push(z);
        velocities.push(field.velocity(w[1], z));
    }
    Ok(Trajectory {
        times,
        points,
        velocities,
        policy: settings.policy,
        step_count: stepper.steps,
        max_radius_excess: stepper.max_excess,
    })
}

/// `φ_{t1} ∘ φ_{t0}⁻¹ (z)`: transports `z` from time `t0` to `t1 ≥ t0`.
pub fn advance<H: Hamiltonian + ?Sized>(
    field: &H,
    z: Complex64,
    t0: f64,
    t1: f64,
    policy: StepPolicy,
) -> Result<Complex64> {
    if !(0.0..=1.0).contains(&t0) || !(t0..=1.0).contains(&t1) {
        return Err(Error::Domain(format!("need 0 ≤ t0 ≤ t1 ≤ 1, got [{t0}, {t1}]")));
    }
    let rho = field.support_radius();
    if z.norm_sqr() >= rho * rho || t1 == t0 {
        return Ok(z);
    }
    let mut stepper = Stepper::new(field, policy);
    stepper.advance(t0, t1, z)
}

/// `φ_t(z)`.
pub fn flow_map<H: Hamiltonian + ?Sized>(
    field: &H,
    z: Complex64,
    t: f64,
    policy: StepPolicy,
) -> Result<Complex64> {
    advance(field, z, 0.0, t, policy)
}

/// Settings for finite-difference Jacobians of the flow.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JacobianSettings {
    /// Inner offset of the auxiliary initial points; the stencil also uses `2δ`.
    pub delta: f64,
    /// Fixed RK4 step shared by all auxiliary trajectories.
    pub step: f64,
}

impl Default for JacobianSettings {
    fn default() -> Self {
        Self {
            delta: 1e-6,
            step: 1.0 / 8192.0,
        }
    }
}

/// `det Dφ_t(z₀)` by fourth-order central differences (steps `δ` and `2δ`)
/// of eight auxiliary trajectories.
///
/// The auxiliary trajectories use a common fixed step so the discrete flow
/// map they sample is itself smooth in `z₀`.
pub fn jacobian_determinant<H: Hamiltonian + ?Sized>(
    field: &H,
    z0: ComplexPoint,
    t: f64,
    settings: &JacobianSettings,
) -> Result<f64> {
    let z0 = z0.to_complex();
    let delta = settings.delta;
    if z0.norm() >= 1.0 - 2.0 * delta {
        return Err(Error::Domain(format!(
            "finite-difference stencil at {z0} leaves the disc"
        )));
    }
    let policy = StepPolicy::Fixed {
        step: settings.step,
    };
    let map = |z: Complex64| flow_map(field, z, t, policy);
    // divide by the perturbation actually represented, so the identity gives 1 exactly
    let quotient = |e: Complex64, h: f64| -> Result<Complex64> {
        let (p, m) = (z0 + e * h, z0 - e * h);
        let run = ((p - m) * e.conj()).re;
        Ok((map(p)? - map(m)?) / run)
    };
    let derivative = |e: Complex64| -> Result<Complex64> {
        Ok((4.0 * quotient(e, delta)? - quotient(e, 2.0 * delta)?) / 3.0)
    };
    let d_dx = derivative(Complex64::new(1.0, 0.0))?;
    let d_dy = derivative(Complex64::new(0.0, 1.0))?;
    Ok(d_dx.re * d_dy.im - d_dx.im * d_dy.re)
}

/// Maximum Jacobian deviation and radius excess over a set of `(z, t)` probes.
pub fn flow_diagnostics<H: Hamiltonian + ?Sized>(
    field: &H,
    probes: &[(ComplexPoint, f64)],
    jacobian: &JacobianSettings,
    settings: &FlowSettings,
) -> Result<FlowDiagnostics> {
    let mut out = FlowDiagnostics::default();
    for &(z, t) in probes {
        let det = jacobian_determinant(field, z, t, jacobian)?;
        out.max_jacobian_deviation = out.max_jacobian_deviation.max((det - 1.0).abs());
        let traj = integrate(field, z, settings)?;
        out.max_radius_excess = out.max_radius_excess.max(traj.max_radius_excess());
        out.step_count += traj.step_count() as u64;
    }
    Ok(out)
}

/// Monte Carlo estimates of `∫F dm²` before and after transport by `φ_t`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PushforwardCheck {
    pub before: f64,
    pub after: f64,
    /// Standard error of the paired difference `after - before`.
    pub sigma: f64,
}

impl PushforwardCheck {
    pub fn difference(&self) -> f64 {
        self.after - self.before
    }
}

/// Compares `∫F(z₁, z₂) dm²` with `∫F(φ_t z₁, φ_t z₂) dm²` on one sample stream.
pub fn pushforward_invariance_check<H, F>(
    field: &H,
    functional: F,
    t: f64,
    samples: u64,
    root: StreamRoot,
    workers: usize,
    policy: StepPolicy,
) -> Result<PushforwardCheck>
where
    H: Hamiltonian + ?Sized,
    F: Fn(Complex64, Complex64) -> f64 + Sync,
{
    if samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let values = par_samples(root, samples, workers, |_, rng| {
        let z1 = sample_disc(rng);
        let z2 = sample_disc(rng);
        let before = functional(z1, z2);
        let after = functional(
            flow_map(field, z1, t, policy)?,
            flow_map(field, z2, t, policy)?,
        );
        Ok((before, after))
    })?;
    let n = samples as f64;
    let mass = DiscDomain::PAIR_AREA;
    let (sum_b, sum_a) = values
        .iter()
        .fold((0.0, 0.0), |(b, a), &(vb, va)| (b + vb, a + va));
    let mean_diff = (sum_a - sum_b) / n;
    let var = values
        .iter()
        .map(|&(b, a)| {
            let d = a - b - mean_diff;
            d * d
        })
        .sum::<f64>()
        / (n - 1.0);
    Ok(PushforwardCheck {
        before: mass * (sum_b / n),
        after: mass * (sum_a / n),
        sigma: mass * (var / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hamiltonian::HamiltonianSpec;

    fn quadratic() -> HamiltonianSpec {
        HamiltonianSpec::radial_polynomial(1.0, 2, 1.0).unwrap()
    }

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn zero_field_gives_constant_trajectory() {
        let traj = integrate(&HamiltonianSpec::Zero, pt(0.3, 0.4), &FlowSettings::default()).unwrap();
        assert!(traj.points().iter().all(|&z| z == Complex64::new(0.3, 0.4)));
        assert_eq!(traj.times()[0], 0.0);
        assert_eq!(*traj.times().last().unwrap(), 1.0);
        assert_eq!(traj.times().len(), 257);
    }

    #[test]
    fn radial_orbit_matches_closed_form() {
        let traj = integrate(&quadratic(), pt(0.5, 0.0), &FlowSettings::default()).unwrap();
        for &z in traj.points() {
            assert!((z.norm() - 0.5).abs() < 1e-9);
        }
        let exact = Complex64::from_polar(0.5, -3.0);
        assert!((traj.last() - exact).norm() < 1e-9);
    }

    #[test]
    fn points_outside_support_never_move() {
        let h = HamiltonianSpec::radial_bump(1.0, 0.5).unwrap();
        let z0 = pt(0.6, -0.2);
        let traj = integrate(&h, z0, &FlowSettings::default()).unwrap();
        assert!(traj.points().iter().all(|&z| z == z0.to_complex()));
        assert_eq!(traj.step_count(), 0);
    }

    #[test]
    fn group_property_restart() {
        let h = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4).unwrap();
        let policy = StepPolicy::default();
        let z0 = Complex64::new(0.35, 0.1);
        let whole = flow_map(&h, z0, 1.0, policy).unwrap();
        let half = flow_map(&h, z0, 0.5, policy).unwrap();
        let rest = advance(&h, half, 0.5, 1.0, policy).unwrap();
        assert!((whole - rest).norm() < 1e-9);
    }

    #[test]
    fn escaping_field_is_reported() {
        struct Outward;
        impl Hamiltonian for Outward {
            fn value(&self, _: f64, _: Complex64) -> f64 {
                0.0
            }
            // ξ = z, pushes points radially out
            fn dzbar(&self, _: f64, z: Complex64) -> Complex64 {
                -0.5 * Complex64::i() * z
            }
            fn support_radius(&self) -> f64 {
                f64::INFINITY
            }
        }
        let err = integrate(&Outward, pt(0.9, 0.0), &FlowSettings::default()).unwrap_err();
        assert!(matches!(err, Error::IntegrationDiverged { .. }));
    }

    #[test]
    fn jacobian_of_identity_is_one() {
        let det = jacobian_determinant(&HamiltonianSpec::Zero, pt(0.2, 0.1), 0.7, &JacobianSettings::default()).unwrap();
        assert_eq!(det, 1.0);
        let h = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4).unwrap();
        let det = jacobian_determinant(&h, pt(0.0, 0.0), 1.0, &JacobianSettings::default()).unwrap();
        assert_eq!(det, 1.0);
    }

    #[test]
    fn jacobian_stencil_must_fit() {
        let err = jacobian_determinant(&quadratic(), pt(1.0, 0.0), 0.5, &JacobianSettings::default());
        assert!(matches!(err, Err(Error::Domain(_))));
    }

    #[test]
    fn hermite_dense_output_is_accurate() {
        let traj = integrate(&quadratic(), pt(0.5, 0.0), &FlowSettings::default()).unwrap();
        for k in 0..50 {
            let t = (k as f64 + 0.37) / 50.0;
            let exact = Complex64::from_polar(0.5, -3.0 * t);
            assert!((traj.at(t) - exact).norm() < 1e-10);
        }
    }

    #[test]
    fn settings_validation() {
        assert!(FlowSettings::default().validate().is_ok());
        let bad = FlowSettings {
            policy: StepPolicy::Fixed { step: 0.0 },
            grid_intervals: 8,
        };
        assert!(bad.validate().is_err());
    }
}
