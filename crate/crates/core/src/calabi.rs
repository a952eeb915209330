//! The Calabi invariant `Cal = ∫₀¹ dt ∫_D H_t dm` by tensor quadrature.

use serde::{Deserialize, Serialize};

use crate::geometry::DiscRule;
use crate::hamiltonian::{time_segments, Hamiltonian};
use crate::quadrature::GaussLegendre;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalabiOrders {
    pub radial: usize,
    pub angular: usize,
    /// Gauss–Legendre nodes per smooth time segment.
    pub time: usize,
}

impl Default for CalabiOrders {
    fn default() -> Self {
        Self {
            radial: 64,
            angular: 64,
            time: 32,
        }
    }
}

impl CalabiOrders {
    pub fn doubled(self) -> Self {
        Self {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
            time: 2 * self.time,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CalabiResult {
    pub value: f64,
    pub orders: CalabiOrders,
    /// `|value - value at doubled orders|`.
    pub estimated_error: f64,
}

/// `∫₀¹ dt ∫_D H_t dm` at fixed orders, without an error estimate.
///
/// At each time node the disc rule is laid over the Hamiltonian's support
/// disc, outside of which `H_t` vanishes identically; time is split at the
/// Hamiltonian's breakpoints.
pub fn calabi_value<H: Hamiltonian + ?Sized>(field: &H, orders: CalabiOrders) -> f64 {
    if field.support_radius() <= 0.0 {
        return 0.0;
    }
    let time = GaussLegendre::new(orders.time);
    time.integrate_composite(&time_segments(field), |t| {
        space_integral(field, t, orders.radial, orders.angular)
    })
}

/// `∫_D H_t dm` at a single time.
pub fn space_integral<H: Hamiltonian + ?Sized>(field: &H, t: f64, radial: usize, angular: usize) -> f64 {
    let (centre, rho) = field.support_disc(t);
    let rho = rho.min(1.0);
    if rho <= 0.0 {
        return 0.0;
    }
    DiscRule::with_radius(rho, radial, angular).integrate(|z| field.value(t, z + centre))
}

/// The Calabi invariant with an order-doubling error estimate.
pub fn calabi<H: Hamiltonian + ?Sized>(field: &H, orders: CalabiOrders) -> CalabiResult {
    let value = calabi_value(field, orders);
    let refined = calabi_value(field, orders.doubled());
    CalabiResult {
        value,
        orders,
        estimated_error: (value - refined).abs(),
    }
}
