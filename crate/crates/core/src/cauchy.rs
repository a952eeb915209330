//! Weakly singular area integrals on the disc: the Cauchy–Pompeiu formula and
//! the `1/|z - w|` bounds that justify exchanging integration order.
//!
//! Orientation: `dz ∧ dz̄ = -2i dx dy`. Hence the area term
//! `(1/2πi) ∫_D (∂f/∂z̄) dz ∧ dz̄ / (z - w)` equals
//! `-(1/π) ∫_D (∂f/∂z̄) / (z - w) dm`.
//!
//! All singular integrals are taken in polar coordinates centred at the
//! singular point, `z = w + r e^{iφ}`, so that `dm = r dr dφ` cancels the
//! `1/|z - w|` singularity.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::calabi::space_integral;
use crate::error::{Error, Result};
use crate::geometry::{exit_distance, ComplexPoint, DiscDomain, DiscRule};
use crate::hamiltonian::{Hamiltonian, HamiltonianSpec};
use crate::linking::{MonteCarloSettings, COLLISION_DISTANCE};
use crate::quadrature::GaussLegendre;
use crate::rng::par_samples;

/// Minimum distance of a Cauchy–Pompeiu evaluation point from `∂D`.
pub const BOUNDARY_CLEARANCE: f64 = 1e-3;

/// Orders for source-centred polar rules and the boundary trapezoid rule.
///
/// Angular and boundary orders are lower bounds: both rules are refined
/// automatically as the evaluation point approaches a circle where the
/// integrand loses analyticity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CauchyOrders {
    /// Gauss–Legendre nodes per smooth piece of each ray.
    pub radial: usize,
    pub angular: usize,
    pub boundary: usize,
}

impl Default for CauchyOrders {
    fn default() -> Self {
        Self {
            radial: 48,
            angular: 128,
            boundary: 256,
        }
    }
}

/// `∫_D g dm` in polar coordinates about `w`, with `f(r, e)` returning
/// `r · g(w + r e)`.
///
/// `support = (centre, radius)` bounds the support of `g`. Rays are split
/// where they cross its circle and pieces outside it are skipped; when `w`
/// lies outside the support disc only the cone of rays that hit it is
/// integrated, with a Gauss–Legendre rule in angle.
fn polar_integrate<F>(
    w: Complex64,
    support: Option<(Complex64, f64)>,
    orders: CauchyOrders,
    f: F,
) -> Complex64
where
    F: Fn(f64, Complex64) -> Complex64,
{
    let rule = GaussLegendre::new(orders.radial);
    if let Some((centre, rho)) = support {
        let to_centre = centre - w;
        let distance = to_centre.norm();
        if distance >= rho {
            let half_width = (rho / distance).asin();
            let axis = to_centre.arg();
            let angular = GaussLegendre::new(orders.angular);
            let mut total = Complex64::new(0.0, 0.0);
            for (phi, wphi) in angular.on_interval(axis - half_width, axis + half_width) {
                let e = Complex64::from_polar(1.0, phi);
                let Some((a, b)) = chord(w - centre, e, rho) else {
                    continue;
                };
                let b = b.min(exit_distance(w, e));
                if b <= a {
                    continue;
                }
                let ray: Complex64 = rule.on_interval(a, b).map(|(r, wr)| wr * f(r, e)).sum();
                total += wphi * ray;
            }
            return total;
        }
    }
    let angular = angular_order(w, support, orders.angular);
    let dphi = TAU / angular as f64;
    let mut total = Complex64::new(0.0, 0.0);
    let mut breaks: Vec<f64> = Vec::with_capacity(4);
    for k in 0..angular {
        let e = Complex64::from_polar(1.0, k as f64 * dphi);
        let r_max = exit_distance(w, e);
        breaks.clear();
        breaks.push(0.0);
        if let Some((centre, rho)) = support {
            if let Some((a, b)) = chord(w - centre, e, rho) {
                for r in [a, b] {
                    if r > 0.0 && r < r_max {
                        breaks.push(r);
                    }
                }
            }
        }
        breaks.push(r_max);
        let mut ray = Complex64::new(0.0, 0.0);
        for ab in breaks.windows(2) {
            let (a, b) = (ab[0], ab[1]);
            if b <= a {
                continue;
            }
            if let Some((centre, rho)) = support {
                let mid = w + 0.5 * (a + b) * e;
                if (mid - centre).norm() >= rho {
                    continue;
                }
            }
            for (r, wr) in rule.on_interval(a, b) {
                ray += wr * f(r, e);
            }
        }
        total += ray;
    }
    total * dphi
}

/// Parameters `r₁ ≤ r₂` where the line `v + r e` meets the circle of radius `ρ`.
fn chord(v: Complex64, e: Complex64, rho: f64) -> Option<(f64, f64)> {
    let b = v.re * e.re + v.im * e.im;
    let disc = b * b - (v.norm_sqr() - rho * rho);
    if disc < 0.0 {
        return None;
    }
    let root = disc.sqrt();
    Some(((-b - root).max(0.0), -b + root))
}

/// Trapezoid order needed near a circle at distance `gap` from `w`.
fn angular_order(w: Complex64, support: Option<(Complex64, f64)>, base: usize) -> usize {
    let mut gap = (1.0 - w.norm()).abs();
    if let Some((centre, rho)) = support {
        gap = gap.min(((w - centre).norm() - rho).abs());
    }
    // the integrand is analytic in a strip of half-width ~ √(2 gap)
    let needed = (36.0 / (2.0 * gap.max(1e-8)).sqrt()).ceil();
    base.max(needed.min(65536.0) as usize)
}

/// A `C¹` function on the closed disc with closed-form `∂f/∂z̄`.
#[derive(Clone, Debug, PartialEq)]
pub enum SmoothFunction {
    /// `Σ cₖ zᵏ`.
    HolomorphicPolynomial(Vec<Complex64>),
    /// `Σ cₖ z̄ᵏ`.
    AntiholomorphicPolynomial(Vec<Complex64>),
    /// `H_t` for a catalog Hamiltonian at fixed time.
    Hamiltonian { spec: HamiltonianSpec, t: f64 },
}

fn horner(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
}

fn horner_derivative(coefficients: &[Complex64], z: Complex64) -> Complex64 {
    coefficients
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * z + c * k as f64)
}

impl SmoothFunction {
    pub fn value(&self, z: Complex64) -> Complex64 {
        match self {
            Self::HolomorphicPolynomial(c) => horner(c, z),
            Self::AntiholomorphicPolynomial(c) => horner(c, z.conj()),
            Self::Hamiltonian { spec, t } => Complex64::new(spec.value(*t, z), 0.0),
        }
    }

    pub fn dzbar(&self, z: Complex64) -> Complex64 {
        match self {
            Self::HolomorphicPolynomial(_) => Complex64::new(0.0, 0.0),
            Self::AntiholomorphicPolynomial(c) => horner_derivative(c, z.conj()),
            Self::Hamiltonian { spec, t } => spec.dzbar(*t, z),
        }
    }

    fn support(&self) -> Option<(Complex64, f64)> {
        match self {
            Self::Hamiltonian { spec, t } => {
                let (centre, rho) = spec.support_disc(*t);
                (rho < 1.0).then_some((centre, rho))
            }
            _ => None,
        }
    }
}

/// The two terms of the Cauchy–Pompeiu formula at `w`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyPompeiu {
    pub reconstructed: Complex64,
    pub boundary_term: Complex64,
    pub area_term: Complex64,
}

/// `(1/2πi) ∮_{∂D} f(z)/(z - w) dz` by the trapezoid rule on `z = e^{iφ}`.
fn boundary_term(f: &SmoothFunction, w: Complex64, base: usize) -> Complex64 {
    // the periodic integrand is analytic in |Im φ| < -ln|w|; aim for |w|^M < e^-40
    let decay = -w.norm().ln();
    let needed = if decay.is_finite() { (40.0 / decay).ceil() } else { 0.0 };
    let m = base.max(needed.min((1u32 << 20) as f64) as usize);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let z = Complex64::from_polar(1.0, TAU * k as f64 / m as f64);
        let fz = f.value(z);
        if fz != Complex64::new(0.0, 0.0) {
            // dz = i z dφ, so (1/2πi) f dz/(z - w) = (1/2π) f z/(z - w) dφ
            sum += fz * z / (z - w);
        }
    }
    sum / m as f64
}

/// `-(1/π) ∫_D (∂f/∂z̄)(z) / (z - w) dm(z)`, for any `w` in the disc.
pub fn area_term(f: &SmoothFunction, w: Complex64, orders: CauchyOrders) -> Complex64 {
    // r · 1/(z - w) = e^{-iφ}
    let integral = polar_integrate(w, f.support(), orders, |r, e| f.dzbar(w + r * e) * e.conj());
    -integral / PI
}

/// Reconstructs `f(w)` from its boundary values and `∂f/∂z̄`.
pub fn cauchy_pompeiu(f: &SmoothFunction, w: ComplexPoint, orders: CauchyOrders) -> Result<CauchyPompeiu> {
    let w = w.to_complex();
    if w.norm() >= 1.0 - BOUNDARY_CLEARANCE {
        return Err(Error::Domain(format!(
            "evaluation point {w} is within {BOUNDARY_CLEARANCE} of the boundary"
        )));
    }
    let boundary = boundary_term(f, w, orders.boundary);
    let area = area_term(f, w, orders);
    Ok(CauchyPompeiu {
        reconstructed: boundary + area,
        boundary_term: boundary,
        area_term: area,
    })
}

/// `∫_{D∖{z}} dm(w) / |z - w|`.
pub fn singular_mass(z: ComplexPoint, orders: CauchyOrders) -> Result<f64> {
    if !z.is_in_disc() {
        return Err(Error::Domain(format!("{z:?} lies outside the disc")));
    }
    Ok(singular_mass_at(z.to_complex(), orders))
}

fn singular_mass_at(z: Complex64, orders: CauchyOrders) -> f64 {
    // r · 1/|z - w| = 1
    let z = if z.norm() > 1.0 { z / z.norm() } else { z };
    polar_integrate(z, None, orders, |_, _| Complex64::new(1.0, 0.0)).re
}

/// The absolute-integrability chain at fixed `t`:
/// `estimate ≤ middle ≤ majorant`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Check {
    /// Monte Carlo estimate of `∫∫ |ξ_t(z₁) - ξ_t(z₂)| / |z₁ - z₂| dm²`.
    pub estimate: f64,
    pub sigma: f64,
    /// `2 ∫ |ξ_t(z)| ∫ dm(w)/|z - w| dm(z)` by quadrature.
    pub middle: f64,
    /// `8π ∫ |ξ_t| dm` by quadrature.
    pub majorant: f64,
}

impl Lemma1Check {
    /// `majorant + k σ - estimate`; non-negative when the bound holds.
    pub fn margin(&self, sigmas: f64) -> f64 {
        self.majorant + sigmas * self.sigma - self.estimate
    }
}

/// Orders for the quadrature sides of [`lemma1_bound_check`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Lemma1Orders {
    pub radial: usize,
    pub angular: usize,
    /// Angular order of the inner `1/|z - w|` integrals.
    pub mass_angular: usize,
}

impl Default for Lemma1Orders {
    fn default() -> Self {
        Self {
            radial: 48,
            angular: 96,
            mass_angular: 256,
        }
    }
}

pub fn lemma1_bound_check<H: Hamiltonian + ?Sized>(
    field: &H,
    t: f64,
    settings: &MonteCarloSettings,
    orders: Lemma1Orders,
) -> Result<Lemma1Check> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("time {t} outside [0, 1]")));
    }
    if settings.samples < 2 {
        return Err(Error::Domain("need at least two samples".into()));
    }
    let values = par_samples(settings.root, settings.samples, settings.workers, |_, rng| {
        let (z1, z2) = loop {
            let z1 = crate::geometry::sample_disc(rng);
            let z2 = crate::geometry::sample_disc(rng);
            if (z1 - z2).norm() >= COLLISION_DISTANCE {
                break (z1, z2);
            }
        };
        Ok((field.velocity(t, z1) - field.velocity(t, z2)).norm() / (z1 - z2).norm())
    })?;
    let n = settings.samples as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    let mass = DiscDomain::PAIR_AREA;

    let rho = field.support_radius().min(1.0);
    let (middle, abs_xi) = if rho <= 0.0 {
        (0.0, 0.0)
    } else {
        let disc = DiscRule::with_radius(rho, orders.radial, orders.angular);
        let mass_orders = CauchyOrders {
            radial: 1,
            angular: orders.mass_angular,
            boundary: 0,
        };
        let abs_xi = disc.integrate(|z| field.velocity(t, z).norm());
        let middle = 2.0
            * disc.integrate(|z| {
                let speed = field.velocity(t, z).norm();
                if speed == 0.0 {
                    0.0
                } else {
                    speed * singular_mass_at(z, mass_orders)
                }
            });
        (middle, abs_xi)
    };
    Ok(Lemma1Check {
        estimate: mass * mean,
        sigma: mass * (var / n).sqrt(),
        middle,
        majorant: 8.0 * PI * abs_xi,
    })
}

/// Both sides of `∫_D dm(w) (1/2πi) ∫_D (∂H_t/∂z̄) dz∧dz̄/(z - w) = ∫_D H_t dm`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyCalabi {
    pub lhs: Complex64,
    pub rhs: f64,
}

impl CauchyCalabi {
    pub fn relative_residual(&self) -> f64 {
        (self.lhs - self.rhs).norm() / (1.0 + self.rhs.abs())
    }
}

/// Orders for [`cauchy_calabi_identity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityOrders {
    pub outer_radial: usize,
    pub outer_angular: usize,
    pub inner: CauchyOrders,
}

impl Default for IdentityOrders {
    fn default() -> Self {
        Self {
            outer_radial: 24,
            outer_angular: 48,
            inner: CauchyOrders {
                radial: 48,
                angular: 128,
                boundary: 0,
            },
        }
    }
}

/// Nested quadrature of the Cauchy step. The outer rule covers the whole
/// disc in polar coordinates about the centre of the support of `H_t`; the
/// inner one is the singularity-removing polar rule.
pub fn cauchy_calabi_identity(spec: &HamiltonianSpec, t: f64, orders: IdentityOrders) -> Result<CauchyCalabi> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain(format!("time {t} outside [0, 1]")));
    }
    let (centre, rho) = spec.support_disc(t);
    if rho <= 0.0 {
        return Ok(CauchyCalabi {
            lhs: Complex64::new(0.0, 0.0),
            rhs: 0.0,
        });
    }
    let f = SmoothFunction::Hamiltonian {
        spec: spec.clone(),
        t,
    };
    let lhs = DiscRule::centred(centre, rho, orders.outer_radial, orders.outer_angular)
        .integrate_complex(|w| area_term(&f, w, orders.inner));
    let rhs = space_integral(spec, t, 64, 128);
    Ok(CauchyCalabi { lhs, rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> ComplexPoint {
        ComplexPoint::new(re, im).unwrap()
    }

    #[test]
    fn holomorphic_square() {
        let f = SmoothFunction::HolomorphicPolynomial(vec![0.0.into(), 0.0.into(), 1.0.into()]);
        let r = cauchy_pompeiu(&f, pt(0.3, 0.2), CauchyOrders::default()).unwrap();
        assert!((r.reconstructed - Complex64::new(0.05, 0.12)).norm() < 1e-12);
        assert_eq!(r.area_term, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn conjugate_at_origin() {
        let f = SmoothFunction::AntiholomorphicPolynomial(vec![0.0.into(), 1.0.into()]);
        let r = cauchy_pompeiu(&f, pt(0.0, 0.0), CauchyOrders::default()).unwrap();
        assert!(r.reconstructed.norm() < 1e-8);
        assert!(r.boundary_term.norm() < 1e-12);
    }

    #[test]
    fn conjugate_off_centre() {
        let f = SmoothFunction::AntiholomorphicPolynomial(vec![0.0.into(), 1.0.into()]);
        let w = pt(0.6, -0.5);
        let r = cauchy_pompeiu(&f, w, CauchyOrders::default()).unwrap();
        assert!((r.reconstructed - w.to_complex().conj()).norm() < 1e-8);
    }

    #[test]
    fn evaluation_point_must_clear_boundary() {
        let f = SmoothFunction::HolomorphicPolynomial(vec![1.0.into()]);
        assert!(cauchy_pompeiu(&f, pt(0.9995, 0.0), CauchyOrders::default()).is_err());
    }

    #[test]
    fn singular_mass_at_centre_and_boundary() {
        let centre = singular_mass(pt(0.0, 0.0), CauchyOrders::default()).unwrap();
        assert!((centre - TAU).abs() < 1e-12);
        // on the boundary the mass is ∫_{-π/2}^{π/2} 2cos ψ dψ = 4
        let edge = singular_mass(pt(1.0, 0.0), CauchyOrders { angular: 4096, ..Default::default() }).unwrap();
        assert!((edge - 4.0).abs() < 1e-4);
    }

    #[test]
    fn horner_derivative_matches_coefficients() {
        let c = vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 1.0), Complex64::new(0.0, 3.0)];
        let z = Complex64::new(0.2, -0.4);
        let want = c[1] + 2.0 * c[2] * z;
        assert!((horner_derivative(&c, z) - want).norm() < 1e-15);
    }

    #[test]
    fn zero_hamiltonian_identity() {
        let r = cauchy_calabi_identity(&HamiltonianSpec::Zero, 0.5, IdentityOrders::default()).unwrap();
        assert_eq!(r.lhs, Complex64::new(0.0, 0.0));
        assert_eq!(r.rhs, 0.0);
    }
}
