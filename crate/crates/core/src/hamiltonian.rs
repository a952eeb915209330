//! Compactly supported time-dependent Hamiltonians on the disc and their
//! generating vector fields.
//!
//! The field `X_t` with `ι_{X_t} ω = -dH_t` is handled through its complex
//! reading `ξ_t = dz(X_t)`, which satisfies `ξ_t = 2i ∂H_t/∂z̄`. Every catalog
//! family supplies `∂H/∂z̄ = ½(∂H/∂x + i ∂H/∂y)` in closed form.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::ComplexPoint;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A time-dependent Hamiltonian on the disc, evaluated without argument checks.
///
/// Implementations must return exactly zero from [`value`](Self::value) and
/// [`dzbar`](Self::dzbar) whenever `|z| ≥ support_radius()`.
pub trait Hamiltonian: Sync {
    fn value(&self, t: f64, z: Complex64) -> f64;

    /// `∂H_t/∂z̄` at `z`.
    fn dzbar(&self, t: f64, z: Complex64) -> Complex64;

    fn support_radius(&self) -> f64;

    /// A disc `(centre, radius)` containing the support of `H_t`.
    fn support_disc(&self, _t: f64) -> (Complex64, f64) {
        (Complex64::new(0.0, 0.0), self.support_radius())
    }

    /// `ξ_t(z) = 2i ∂H_t/∂z̄`.
    fn velocity(&self, t: f64, z: Complex64) -> Complex64 {
        2.0 * I * self.dzbar(t, z)
    }

    /// Interior times where the Hamiltonian is only finitely smooth in `t`.
    fn time_breakpoints(&self) -> Vec<f64> {
        Vec::new()
    }
}

/// The value `ξ_t(z)` of the generating field in the complex coordinate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VelocityValue {
    pub xi: Complex64,
}

impl VelocityValue {
    /// The real vector field `X_t = (Re ξ, Im ξ)`.
    pub fn as_vector(&self) -> [f64; 2] {
        [self.xi.re, self.xi.im]
    }
}

/// Catalog of Hamiltonians with hand-coded derivatives.
#[derive(Clone, Debug, PartialEq)]
pub enum HamiltonianSpec {
    Zero,
    /// `A (1 - |z|²/ρ²)^k` inside `|z| < ρ`.
    RadialPolynomial { amplitude: f64, exponent: u32, radius: f64 },
    /// `A exp(1 - 1/(1 - |z|²/ρ²))` inside `|z| < ρ`.
    RadialBump { amplitude: f64, radius: f64 },
    /// A radial bump of radius `bump_radius` whose centre runs once around the
    /// circle of radius `orbit_radius`: `H_t(z) = B(z - R e^{2πit})`.
    MovingBump { amplitude: f64, bump_radius: f64, orbit_radius: f64 },
    /// `g(t) · H⁰_t(z)` with `g(t) = Σ cᵢ tⁱ`.
    TimeScaled { coefficients: Vec<f64>, inner: Box<HamiltonianSpec> },
    /// Runs `first` on `[0, ½]` and `second` on `[½, 1]`.
    Concatenation { first: Box<HamiltonianSpec>, second: Box<HamiltonianSpec> },
}

fn invalid(family: &str, reason: impl Into<String>) -> Error {
    Error::InvalidParameters {
        family: family.into(),
        reason: reason.into(),
    }
}

impl HamiltonianSpec {
    pub fn zero() -> Self {
        Self::Zero
    }

    pub fn radial_polynomial(amplitude: f64, exponent: u32, radius: f64) -> Result<Self> {
        let family = "radial-polynomial";
        if !amplitude.is_finite() {
            return Err(invalid(family, "amplitude must be finite"));
        }
        if exponent < 2 {
            return Err(invalid(family, "exponent k must be at least 2"));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(invalid(family, "support radius must lie in (0, 1]"));
        }
        Ok(Self::RadialPolynomial {
            amplitude,
            exponent,
            radius,
        })
    }

    pub fn radial_bump(amplitude: f64, radius: f64) -> Result<Self> {
        let family = "radial-bump";
        if !amplitude.is_finite() {
            return Err(invalid(family, "amplitude must be finite"));
        }
        if !(radius > 0.0 && radius <= 1.0) {
            return Err(invalid(family, "support radius must lie in (0, 1]"));
        }
        Ok(Self::RadialBump { amplitude, radius })
    }

    pub fn moving_bump(amplitude: f64, bump_radius: f64, orbit_radius: f64) -> Result<Self> {
        let family = "moving-bump";
        if !amplitude.is_finite() {
            return Err(invalid(family, "amplitude must be finite"));
        }
        if !(bump_radius > 0.0) || !(orbit_radius >= 0.0) {
            return Err(invalid(family, "radii must be positive"));
        }
        if !(bump_radius + orbit_radius < 1.0) {
            return Err(invalid(family, "orbit radius + bump radius must be < 1"));
        }
        Ok(Self::MovingBump {
            amplitude,
            bump_radius,
            orbit_radius,
        })
    }

    pub fn time_scaled(coefficients: Vec<f64>, inner: HamiltonianSpec) -> Result<Self> {
        if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
            return Err(invalid("time-scaled", "need at least one finite coefficient"));
        }
        Ok(Self::TimeScaled {
            coefficients,
            inner: Box::new(inner),
        })
    }

    /// `c · H`.
    pub fn scaled(self, factor: f64) -> Result<Self> {
        Self::time_scaled(vec![factor], self)
    }

    /// The Hamiltonian whose isotopy runs `first` then `second`.
    pub fn concatenate(first: HamiltonianSpec, second: HamiltonianSpec) -> Self {
        Self::Concatenation {
            first: Box::new(first),
            second: Box::new(second),
        }
    }

    pub fn family_name(&self) -> &'static str {
        match self {
            Self::Zero => "zero",
            Self::RadialPolynomial { .. } => "radial-polynomial",
            Self::RadialBump { .. } => "radial-bump",
            Self::MovingBump { .. } => "moving-bump",
            Self::TimeScaled { .. } => "time-scaled",
            Self::Concatenation { .. } => "concatenation",
        }
    }

    /// `H = h(|z|²)` with no time dependence, if this spec has that form.
    pub fn radial_profile(&self) -> Option<RadialProfile> {
        match *self {
            Self::Zero => Some(RadialProfile::Zero),
            Self::RadialPolynomial {
                amplitude,
                exponent,
                radius,
            } => Some(RadialProfile::Polynomial {
                amplitude,
                exponent,
                radius,
            }),
            Self::RadialBump { amplitude, radius } => {
                Some(RadialProfile::Bump { amplitude, radius })
            }
            _ => None,
        }
    }

    /// Largest smoothness exponent known for the spec, for reporting.
    pub fn polynomial_exponent(&self) -> Option<u32> {
        match self {
            Self::RadialPolynomial { exponent, .. } => Some(*exponent),
            Self::TimeScaled { inner, .. } => inner.polynomial_exponent(),
            Self::Concatenation { first, second } => {
                match (first.polynomial_exponent(), second.polynomial_exponent()) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                }
            }
            _ => None,
        }
    }

    /// `H_t(z)`.
    pub fn evaluate(&self, t: f64, z: ComplexPoint) -> Result<f64> {
        check_time(t)?;
        Ok(self.value(t, z.to_complex()))
    }

    /// `∂H_t/∂z̄(z)`.
    pub fn wirtinger_dzbar(&self, t: f64, z: ComplexPoint) -> Result<Complex64> {
        check_time(t)?;
        Ok(Hamiltonian::dzbar(self, t, z.to_complex()))
    }

    /// `ξ_t(z)`.
    pub fn velocity_at(&self, t: f64, z: ComplexPoint) -> Result<VelocityValue> {
        check_time(t)?;
        Ok(VelocityValue {
            xi: Hamiltonian::velocity(self, t, z.to_complex()),
        })
    }
}

fn check_time(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Domain(format!("time {t} outside [0, 1]")))
    }
}

/// Profile `h` of an autonomous radial Hamiltonian `H = h(|z|²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RadialProfile {
    Zero,
    Polynomial { amplitude: f64, exponent: u32, radius: f64 },
    Bump { amplitude: f64, radius: f64 },
}

impl RadialProfile {
    /// `h(s)`.
    pub fn value(&self, s: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Polynomial {
                amplitude,
                exponent,
                radius,
            } => {
                let rho2 = radius * radius;
                if outside(s, rho2) {
                    0.0
                } else {
                    amplitude * (1.0 - s / rho2).powi(exponent as i32)
                }
            }
            Self::Bump { amplitude, radius } => bump_value(amplitude, radius * radius, s),
        }
    }

    /// `h'(s)`.
    pub fn derivative(&self, s: f64) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Polynomial {
                amplitude,
                exponent,
                radius,
            } => {
                let rho2 = radius * radius;
                if outside(s, rho2) {
                    0.0
                } else {
                    let k = exponent as i32;
                    -amplitude * k as f64 / rho2 * (1.0 - s / rho2).powi(k - 1)
                }
            }
            Self::Bump { amplitude, radius } => bump_derivative(amplitude, radius * radius, s),
        }
    }

    /// `h` vanishes for `s ≥ support()`.
    pub fn support(&self) -> f64 {
        match *self {
            Self::Zero => 0.0,
            Self::Polynomial { radius, .. } | Self::Bump { radius, .. } => radius * radius,
        }
    }
}

/// `s ≥ ρ²`, with points within rounding of the support circle counted as
/// outside so that `|z| = ρ` evaluates to exactly zero.
#[inline]
fn outside(s: f64, rho2: f64) -> bool {
    s >= rho2 * (1.0 - 4.0 * f64::EPSILON)
}

fn bump_value(amplitude: f64, rho2: f64, s: f64) -> f64 {
    if outside(s, rho2) {
        return 0.0;
    }
    let gap = 1.0 - s / rho2;
    amplitude * (1.0 - 1.0 / gap).exp()
}

fn bump_derivative(amplitude: f64, rho2: f64, s: f64) -> f64 {
    if outside(s, rho2) {
        return 0.0;
    }
    let gap = 1.0 - s / rho2;
    -amplitude * (1.0 - 1.0 / gap).exp() / (gap * gap * rho2)
}

/// `x³(10 - 15x + 6x²)`: monotone on `[0, 1]` with first and second
/// derivatives vanishing at both ends.
pub fn smootherstep(x: f64) -> f64 {
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

pub fn smootherstep_derivative(x: f64) -> f64 {
    let y = x * (1.0 - x);
    30.0 * y * y
}

fn smootherstep_inverse(y: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..64 {
        let mid = 0.5 * (lo + hi);
        if smootherstep(mid) < y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Local time and speed factor of the concatenation half containing `t`.
fn concatenation_phase(t: f64) -> (bool, f64, f64) {
    if t <= 0.5 {
        let x = 2.0 * t;
        (true, smootherstep(x), 2.0 * smootherstep_derivative(x))
    } else {
        let x = 2.0 * t - 1.0;
        (false, smootherstep(x), 2.0 * smootherstep_derivative(x))
    }
}

fn polynomial(coefficients: &[f64], t: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, c| acc * t + c)
}

impl Hamiltonian for HamiltonianSpec {
    fn value(&self, t: f64, z: Complex64) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::RadialPolynomial { .. } | Self::RadialBump { .. } => {
                let profile = self.radial_profile().expect("radial family");
                profile.value(z.norm_sqr())
            }
            &Self::MovingBump {
                amplitude,
                bump_radius,
                orbit_radius,
            } => {
                let rho = bump_radius + orbit_radius;
                if outside(z.norm_sqr(), rho * rho) {
                    return 0.0;
                }
                let centre = Complex64::from_polar(orbit_radius, 2.0 * PI * t);
                bump_value(amplitude, bump_radius * bump_radius, (z - centre).norm_sqr())
            }
            Self::TimeScaled {
                coefficients,
                inner,
            } => {
                let g = polynomial(coefficients, t);
                if g == 0.0 {
                    return 0.0;
                }
                g * inner.value(t, z)
            }
            Self::Concatenation { first, second } => {
                let (is_first, local, speed) = concatenation_phase(t);
                if speed == 0.0 {
                    return 0.0;
                }
                let h = if is_first { first } else { second };
                speed * h.value(local, z)
            }
        }
    }

    fn dzbar(&self, t: f64, z: Complex64) -> Complex64 {
        match self {
            Self::Zero => Complex64::new(0.0, 0.0),
            Self::RadialPolynomial { .. } | Self::RadialBump { .. } => {
                let profile = self.radial_profile().expect("radial family");
                profile.derivative(z.norm_sqr()) * z
            }
            &Self::MovingBump {
                amplitude,
                bump_radius,
                orbit_radius,
            } => {
                let rho = bump_radius + orbit_radius;
                if outside(z.norm_sqr(), rho * rho) {
                    return Complex64::new(0.0, 0.0);
                }
                let centre = Complex64::from_polar(orbit_radius, 2.0 * PI * t);
                let d = z - centre;
                bump_derivative(amplitude, bump_radius * bump_radius, d.norm_sqr()) * d
            }
            Self::TimeScaled {
                coefficients,
                inner,
            } => {
                let g = polynomial(coefficients, t);
                if g == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                g * inner.dzbar(t, z)
            }
            Self::Concatenation { first, second } => {
                let (is_first, local, speed) = concatenation_phase(t);
                if speed == 0.0 {
                    return Complex64::new(0.0, 0.0);
                }
                let h = if is_first { first } else { second };
                speed * h.dzbar(local, z)
            }
        }
    }

    fn support_radius(&self) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::RadialPolynomial { radius, .. } | Self::RadialBump { radius, .. } => *radius,
            Self::MovingBump {
                bump_radius,
                orbit_radius,
                ..
            } => bump_radius + orbit_radius,
            Self::TimeScaled { inner, .. } => inner.support_radius(),
            Self::Concatenation { first, second } => {
                first.support_radius().max(second.support_radius())
            }
        }
    }

    fn support_disc(&self, t: f64) -> (Complex64, f64) {
        match self {
            &Self::MovingBump {
                bump_radius,
                orbit_radius,
                ..
            } => (Complex64::from_polar(orbit_radius, 2.0 * PI * t), bump_radius),
            Self::TimeScaled { inner, .. } => inner.support_disc(t),
            Self::Concatenation { first, second } => {
                let (is_first, local, _) = concatenation_phase(t);
                if is_first {
                    first.support_disc(local)
                } else {
                    second.support_disc(local)
                }
            }
            _ => (Complex64::new(0.0, 0.0), self.support_radius()),
        }
    }

    fn time_breakpoints(&self) -> Vec<f64> {
        match self {
            Self::TimeScaled { inner, .. } => inner.time_breakpoints(),
            Self::Concatenation { first, second } => {
                let mut out: Vec<f64> = first
                    .time_breakpoints()
                    .into_iter()
                    .map(|b| 0.5 * smootherstep_inverse(b))
                    .collect();
                out.push(0.5);
                out.extend(
                    second
                        .time_breakpoints()
                        .into_iter()
                        .map(|b| 0.5 + 0.5 * smootherstep_inverse(b)),
                );
                out
            }
            _ => Vec::new(),
        }
    }
}

/// `[0, b₁, …, 1]` for the Hamiltonian's time breakpoints.
pub fn time_segments<H: Hamiltonian + ?Sized>(h: &H) -> Vec<f64> {
    let mut breaks = vec![0.0];
    breaks.extend(h.time_breakpoints().into_iter().filter(|b| *b > 0.0 && *b < 1.0));
    breaks.push(1.0);
    breaks
}

/// JSON shape of a catalog entry: `{"name": …, "params": […]}` plus nested
/// entries for `time-scaled` (`inner`) and `concatenation` (`first`, `second`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub params: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inner: Option<Box<HamiltonianConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first: Option<Box<HamiltonianConfig>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub second: Option<Box<HamiltonianConfig>>,
}

impl TryFrom<&HamiltonianConfig> for HamiltonianSpec {
    type Error = Error;

    fn try_from(cfg: &HamiltonianConfig) -> Result<Self> {
        let name = cfg.name.as_str();
        let p = &cfg.params;
        let expect_len = |n: usize| {
            if p.len() == n {
                Ok(())
            } else {
                Err(invalid(name, format!("expected {n} parameters, got {}", p.len())))
            }
        };
        let no_children = || {
            if cfg.inner.is_some() || cfg.first.is_some() || cfg.second.is_some() {
                Err(invalid(name, "family takes no nested Hamiltonians"))
            } else {
                Ok(())
            }
        };
        match name {
            "zero" => {
                expect_len(0)?;
                no_children()?;
                Ok(Self::Zero)
            }
            "radial-polynomial" => {
                expect_len(3)?;
                no_children()?;
                let k = p[1];
                if k.fract() != 0.0 || !(2.0..=64.0).contains(&k) {
                    return Err(invalid(name, "exponent k must be an integer in [2, 64]"));
                }
                Self::radial_polynomial(p[0], k as u32, p[2])
            }
            "radial-bump" => {
                expect_len(2)?;
                no_children()?;
                Self::radial_bump(p[0], p[1])
            }
            "moving-bump" => {
                expect_len(3)?;
                no_children()?;
                Self::moving_bump(p[0], p[1], p[2])
            }
            "time-scaled" => {
                let inner = cfg
                    .inner
                    .as_deref()
                    .ok_or_else(|| invalid(name, "missing `inner`"))?;
                if cfg.first.is_some() || cfg.second.is_some() {
                    return Err(invalid(name, "only `inner` may be nested"));
                }
                Self::time_scaled(p.clone(), Self::try_from(inner)?)
            }
            "concatenation" => {
                expect_len(0)?;
                let first = cfg
                    .first
                    .as_deref()
                    .ok_or_else(|| invalid(name, "missing `first`"))?;
                let second = cfg
                    .second
                    .as_deref()
                    .ok_or_else(|| invalid(name, "missing `second`"))?;
                if cfg.inner.is_some() {
                    return Err(invalid(name, "only `first` and `second` may be nested"));
                }
                Ok(Self::concatenate(Self::try_from(first)?, Self::try_from(second)?))
            }
            other => Err(invalid(other, "unknown Hamiltonian family")),
        }
    }
}

impl From<&HamiltonianSpec> for HamiltonianConfig {
    fn from(spec: &HamiltonianSpec) -> Self {
        let leaf = |name: &str, params: Vec<f64>| HamiltonianConfig {
            name: name.into(),
            params,
            inner: None,
            first: None,
            second: None,
        };
        match spec {
            HamiltonianSpec::Zero => leaf("zero", vec![]),
            HamiltonianSpec::RadialPolynomial {
                amplitude,
                exponent,
                radius,
            } => leaf(
                "radial-polynomial",
                vec![*amplitude, f64::from(*exponent), *radius],
            ),
            HamiltonianSpec::RadialBump { amplitude, radius } => {
                leaf("radial-bump", vec![*amplitude, *radius])
            }
            HamiltonianSpec::MovingBump {
                amplitude,
                bump_radius,
                orbit_radius,
            } => leaf("moving-bump", vec![*amplitude, *bump_radius, *orbit_radius]),
            HamiltonianSpec::TimeScaled {
                coefficients,
                inner,
            } => HamiltonianConfig {
                inner: Some(Box::new(inner.as_ref().into())),
                ..leaf("time-scaled", coefficients.clone())
            },
            HamiltonianSpec::Concatenation { first, second } => HamiltonianConfig {
                first: Some(Box::new(first.as_ref().into())),
                second: Some(Box::new(second.as_ref().into())),
                ..leaf("concatenation", vec![])
            },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    fn quadratic() -> HamiltonianSpec {
        HamiltonianSpec::radial_polynomial(1.0, 2, 1.0).unwrap()
    }

    /// `H = Re z`; not compactly supported, only used to check conventions.
    struct LinearField;

    impl Hamiltonian for LinearField {
        fn value(&self, _: f64, z: Complex64) -> f64 {
            z.re
        }
        fn dzbar(&self, _: f64, _: Complex64) -> Complex64 {
            Complex64::new(0.5, 0.0)
        }
        fn support_radius(&self) -> f64 {
            f64::INFINITY
        }
    }

    #[test]
    fn radial_polynomial_values() {
        let h = quadratic();
        assert_eq!(h.evaluate(0.0, pt(0.0, 0.0)).unwrap(), 1.0);
        let direct = (1.0f64 - 0.25).powi(2);
        assert!((h.evaluate(0.3, pt(0.5, 0.0)).unwrap() - 0.5625).abs() < 1e-15);
        assert!((direct - 0.5625).abs() < 1e-15);
    }

    #[test]
    fn radial_polynomial_derivatives() {
        let h = quadratic();
        let d = h.wirtinger_dzbar(0.0, pt(0.5, 0.0)).unwrap();
        assert!((d - Complex64::new(-0.75, 0.0)).norm() < 1e-15);
        let v = h.velocity_at(0.0, pt(0.5, 0.0)).unwrap();
        assert!((v.xi - Complex64::new(0.0, -1.5)).norm() < 1e-15);
    }

    #[test]
    fn linear_field_conventions() {
        let z = Complex64::new(0.2, -0.7);
        assert_eq!(LinearField.dzbar(0.0, z), Complex64::new(0.5, 0.0));
        assert_eq!(LinearField.velocity(0.0, z), Complex64::new(0.0, 1.0));
    }

    #[test]
    fn out_of_range_time_is_a_domain_error() {
        let h = quadratic();
        assert!(matches!(h.evaluate(1.5, pt(0.0, 0.0)), Err(Error::Domain(_))));
        assert!(h.velocity_at(-0.1, pt(0.0, 0.0)).is_err());
    }

    #[test]
    fn boundary_values_vanish_for_every_family() {
        let specs = [
            quadratic(),
            HamiltonianSpec::radial_bump(2.0, 0.8).unwrap(),
            HamiltonianSpec::moving_bump(1.0, 0.25, 0.4).unwrap(),
            HamiltonianSpec::time_scaled(vec![1.0, 2.0], quadratic()).unwrap(),
            HamiltonianSpec::concatenate(quadratic(), HamiltonianSpec::radial_bump(1.0, 0.5).unwrap()),
        ];
        for h in &specs {
            for k in 0..32 {
                let z = Complex64::from_polar(1.0, k as f64 * 0.2);
                let p = pt(z.re, z.im);
                for t in [0.0, 0.3, 0.5, 1.0] {
                    assert_eq!(h.evaluate(t, p).unwrap(), 0.0);
                    assert_eq!(h.wirtinger_dzbar(t, p).unwrap(), Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn parameter_validation() {
        assert!(HamiltonianSpec::radial_polynomial(1.0, 1, 1.0).is_err());
        assert!(HamiltonianSpec::radial_polynomial(1.0, 2, 1.1).is_err());
        assert!(HamiltonianSpec::radial_bump(1.0, 0.0).is_err());
        assert!(HamiltonianSpec::moving_bump(1.0, 0.5, 0.5).is_err());
        assert!(HamiltonianSpec::time_scaled(vec![], quadratic()).is_err());
    }

    #[test]
    fn concatenation_speed_profile() {
        assert_eq!(smootherstep(0.0), 0.0);
        assert_eq!(smootherstep(1.0), 1.0);
        assert_eq!(smootherstep_derivative(0.0), 0.0);
        assert_eq!(smootherstep_derivative(1.0), 0.0);
        let h = HamiltonianSpec::concatenate(quadratic(), quadratic());
        assert_eq!(h.time_breakpoints(), vec![0.5]);
        // at the junction the generator is at rest
        assert_eq!(h.value(0.5, Complex64::new(0.1, 0.0)), 0.0);
        let nested = HamiltonianSpec::concatenate(h.clone(), quadratic());
        let b = nested.time_breakpoints();
        assert_eq!(b.len(), 2);
        assert!((b[0] - 0.25).abs() < 1e-12);
    }

    #[test]
    fn config_round_trip() {
        let spec = HamiltonianSpec::concatenate(
            HamiltonianSpec::time_scaled(vec![0.0, 2.0], quadratic()).unwrap(),
            HamiltonianSpec::moving_bump(1.0, 0.25, 0.4).unwrap(),
        );
        let cfg = HamiltonianConfig::from(&spec);
        let json = serde_json::to_string(&cfg).unwrap();
        let back: HamiltonianConfig = serde_json::from_str(&json).unwrap();
        assert_eq!(HamiltonianSpec::try_from(&back).unwrap(), spec);
    }

    #[test]
    fn config_rejects_bad_entries() {
        let parse = |s: &str| -> Result<HamiltonianSpec> {
            let cfg: HamiltonianConfig = serde_json::from_str(s)?;
            HamiltonianSpec::try_from(&cfg)
        };
        assert!(parse(r#"{"name":"radial-polynomial","params":[1,2.5,1]}"#).is_err());
        assert!(parse(r#"{"name":"radial-bump","params":[1]}"#).is_err());
        assert!(parse(r#"{"name":"spiral","params":[]}"#).is_err());
        assert!(parse(r#"{"name":"zero","parms":[]}"#).is_err());
        assert!(parse(r#"{"name":"time-scaled","params":[1]}"#).is_err());
    }
}
