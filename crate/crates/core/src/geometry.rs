//! The closed unit disc, its Lebesgue measure and the two-point configuration space.
//!
//! Conventions: the symplectic form `ω = (i/2) dz ∧ dz̄` equals `dx dy`, so the
//! disc has total mass `π` and the product `D × D` has mass `π²`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::GaussLegendre;

/// Slack allowed on `|z| ≤ 1` before a point counts as having left the disc.
pub const GEOM_SLACK: f64 = 1e-12;

/// A finite point of the complex plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ComplexPoint {
    re: f64,
    im: f64,
}

impl ComplexPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if !(re.is_finite() && im.is_finite()) {
            return Err(Error::Domain(format!("non-finite point ({re}, {im})")));
        }
        Ok(Self { re, im })
    }

    /// A point that must lie in the closed disc (with [`GEOM_SLACK`]).
    pub fn in_disc(re: f64, im: f64) -> Result<Self> {
        let p = Self::new(re, im)?;
        if !p.is_in_disc() {
            return Err(Error::Domain(format!(
                "point ({re}, {im}) lies outside the unit disc"
            )));
        }
        Ok(p)
    }

    pub fn origin() -> Self {
        Self { re: 0.0, im: 0.0 }
    }

    pub fn re(self) -> f64 {
        self.re
    }

    pub fn im(self) -> f64 {
        self.im
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn norm_sqr(self) -> f64 {
        self.re * self.re + self.im * self.im
    }

    pub fn is_in_disc(self) -> bool {
        self.norm() <= 1.0 + GEOM_SLACK
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

impl TryFrom<Complex64> for ComplexPoint {
    type Error = Error;

    fn try_from(z: Complex64) -> Result<Self> {
        Self::new(z.re, z.im)
    }
}

impl TryFrom<[f64; 2]> for ComplexPoint {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        Self::new(v[0], v[1])
    }
}

impl From<ComplexPoint> for [f64; 2] {
    fn from(p: ComplexPoint) -> Self {
        [p.re, p.im]
    }
}

impl From<ComplexPoint> for Complex64 {
    fn from(p: ComplexPoint) -> Self {
        p.to_complex()
    }
}

/// A point `(z1, z2)` of `X₂ = D × D ∖ Δ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairConfiguration {
    z1: ComplexPoint,
    z2: ComplexPoint,
}

impl PairConfiguration {
    pub fn new(z1: ComplexPoint, z2: ComplexPoint) -> Result<Self> {
        if (z1.to_complex() - z2.to_complex()).norm() == 0.0 {
            return Err(Error::Domain("pair lies on the diagonal".into()));
        }
        Ok(Self { z1, z2 })
    }

    pub fn z1(&self) -> ComplexPoint {
        self.z1
    }

    pub fn z2(&self) -> ComplexPoint {
        self.z2
    }

    pub fn swapped(&self) -> Self {
        Self {
            z1: self.z2,
            z2: self.z1,
        }
    }
}

/// Measure conventions of the disc.
#[derive(Clone, Copy, Debug)]
pub struct DiscDomain {
    pub slack: f64,
}

impl Default for DiscDomain {
    fn default() -> Self {
        Self { slack: GEOM_SLACK }
    }
}

impl DiscDomain {
    /// Lebesgue measure of the disc.
    pub const AREA: f64 = PI;
    /// Mass of `D × D`, the normalizer of every pair average.
    pub const PAIR_AREA: f64 = PI * PI;

    pub fn contains(&self, z: Complex64) -> bool {
        z.norm() <= 1.0 + self.slack
    }
}

/// Draws a point uniformly from the open unit disc (`r = √u`, `φ = 2πv`).
pub fn sample_disc_uniform<R: Rng + ?Sized>(rng: &mut R) -> ComplexPoint {
    let z = sample_disc(rng);
    ComplexPoint { re: z.re, im: z.im }
}

pub(crate) fn sample_disc<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let u: f64 = rng.random();
    let v: f64 = rng.random();
    Complex64::from_polar(u.sqrt(), 2.0 * PI * v)
}

/// Tensor rule on a disc: Gauss–Legendre in `s = r²` times the trapezoid rule in angle.
#[derive(Clone, Debug)]
pub struct DiscRule {
    points: Vec<(Complex64, f64)>,
}

impl DiscRule {
    /// Rule on the unit disc.
    pub fn new(radial_order: usize, angular_order: usize) -> Self {
        Self::annulus(0.0, 1.0, radial_order, angular_order)
    }

    /// Rule on the disc of the given radius centred at the origin.
    pub fn with_radius(radius: f64, radial_order: usize, angular_order: usize) -> Self {
        Self::annulus(0.0, radius, radial_order, angular_order)
    }

    /// Rule on `inner ≤ |z| ≤ outer`.
    pub fn annulus(inner: f64, outer: f64, radial_order: usize, angular_order: usize) -> Self {
        assert!(radial_order >= 1 && angular_order >= 1);
        let radial = GaussLegendre::new(radial_order);
        let dphi = 2.0 * PI / angular_order as f64;
        let mut points = Vec::with_capacity(radial_order * angular_order);
        // dm = r dr dφ = ½ ds dφ
        for (s, ws) in radial.on_interval(inner * inner, outer * outer) {
            let r = s.sqrt();
            for k in 0..angular_order {
                let phi = k as f64 * dphi;
                points.push((Complex64::from_polar(r, phi), 0.5 * ws * dphi));
            }
        }
        Self { points }
    }

    /// Rule on the whole unit disc in polar coordinates about `centre`
    /// (which must lie inside the disc), with each ray split at `split`.
    ///
    /// Suited to integrands concentrated on the disc `|z - centre| ≤ split`.
    pub fn centred(centre: Complex64, split: f64, radial_order: usize, angular_order: usize) -> Self {
        assert!(radial_order >= 1 && angular_order >= 1);
        let radial = GaussLegendre::new(radial_order);
        let dphi = 2.0 * PI / angular_order as f64;
        let mut points = Vec::with_capacity(2 * radial_order * angular_order);
        for k in 0..angular_order {
            let e = Complex64::from_polar(1.0, k as f64 * dphi);
            let r_max = exit_distance(centre, e);
            let mut push = |a: f64, b: f64| {
                for (r, wr) in radial.on_interval(a, b) {
                    points.push((centre + r * e, wr * r * dphi));
                }
            };
            if split < r_max {
                push(0.0, split);
                push(split, r_max);
            } else {
                push(0.0, r_max);
            }
        }
        Self { points }
    }

    pub fn points(&self) -> &[(Complex64, f64)] {
        &self.points
    }

    pub fn integrate<F: FnMut(Complex64) -> f64>(&self, mut f: F) -> f64 {
        self.points.iter().map(|&(z, w)| w * f(z)).sum()
    }

    pub fn integrate_complex<F: FnMut(Complex64) -> Complex64>(&self, mut f: F) -> Complex64 {
        self.points.iter().map(|&(z, w)| w * f(z)).sum()
    }
}

/// Distance from `w` (inside the unit disc) to the unit circle along `e`.
pub(crate) fn exit_distance(w: Complex64, e: Complex64) -> f64 {
    let b = w.re * e.re + w.im * e.im;
    let c = (w.norm_sqr() - 1.0).min(0.0);
    let root = (b * b - c).sqrt();
    if b > 0.0 {
        -c / (b + root)
    } else {
        root - b
    }
}

/// Nodes and weights of [`DiscRule::new`] as disc points.
pub fn disc_quadrature(radial_order: usize, angular_order: usize) -> Vec<(ComplexPoint, f64)> {
    DiscRule::new(radial_order, angular_order)
        .points
        .into_iter()
        .map(|(z, w)| (ComplexPoint { re: z.re, im: z.im }, w))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamRoot;

    #[test]
    fn rejects_non_finite_points() {
        assert!(ComplexPoint::new(f64::NAN, 0.0).is_err());
        assert!(ComplexPoint::new(0.0, f64::INFINITY).is_err());
        assert!(ComplexPoint::in_disc(1.0, 1e-5).is_err());
        assert!(ComplexPoint::in_disc(1.0 + 1e-13, 0.0).is_ok());
    }

    #[test]
    fn diagonal_pairs_are_rejected() {
        let z = ComplexPoint::new(0.3, -0.1).unwrap();
        assert!(PairConfiguration::new(z, z).is_err());
        let w = ComplexPoint::new(0.3, -0.1 + 1e-15).unwrap();
        assert!(PairConfiguration::new(z, w).is_ok());
    }

    #[test]
    fn first_draw_is_inside() {
        let mut rng = StreamRoot::new(7).stream(0);
        assert!(sample_disc_uniform(&mut rng).norm() < 1.0);
    }

    #[test]
    fn quadrature_weights_sum_to_pi() {
        let nodes = disc_quadrature(8, 16);
        let total: f64 = nodes.iter().map(|(_, w)| w).sum();
        assert!((total - PI).abs() < 1e-12);
        assert!(nodes.iter().all(|(z, w)| z.norm() < 1.0 && *w > 0.0));
    }

    #[test]
    fn quadrature_integrates_catalog_moments() {
        let rule = DiscRule::new(8, 16);
        assert!((rule.integrate(|z| z.norm_sqr()) - PI / 2.0).abs() < 1e-10);
        assert!(rule.integrate(|z| z.re).abs() < 1e-12);
        // x²y² has ∫ = π/24
        let got = rule.integrate(|z| z.re * z.re * z.im * z.im);
        assert!((got - PI / 24.0).abs() < 1e-13);
    }

    #[test]
    fn off_centre_rule_covers_the_disc() {
        let rule = DiscRule::centred(Complex64::new(0.3, -0.2), 0.25, 24, 96);
        assert!((rule.integrate(|_| 1.0) - PI).abs() < 1e-9);
        assert!((rule.integrate(|z| z.norm_sqr()) - PI / 2.0).abs() < 1e-9);
        assert!(rule.points().iter().all(|(z, _)| z.norm() <= 1.0));
    }

    #[test]
    fn annulus_and_disc_tile_the_unit_disc() {
        let inner = DiscRule::with_radius(0.4, 10, 20).integrate(|z| z.norm_sqr().powi(2));
        let outer = DiscRule::annulus(0.4, 1.0, 10, 20).integrate(|z| z.norm_sqr().powi(2));
        // ∫ r⁴ dm = 2π/6
        assert!((inner + outer - PI / 3.0).abs() < 1e-13);
    }
}
