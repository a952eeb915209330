// Reconstructing a function from its boundary values and `∂f/∂z̄`, and the
// space integral of `H_t` from its Cauchy transform.

use calabi_lab::cauchy::{cauchy_calabi_identity, cauchy_pompeiu, CauchyOrders, IdentityOrders, SmoothFunction};
use calabi_lab::{ComplexPoint, HamiltonianSpec};
use num_complex::Complex64;

pub fn run_example() -> calabi_lab::Result<()> {
    let orders = CauchyOrders::default();
    let w = ComplexPoint::new(0.3, -0.45)?;

    let p = SmoothFunction::HolomorphicPolynomial(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 2.0)]);
    let cp = cauchy_pompeiu(&p, w, orders)?;
    println!("holomorphic: error {:.1e}, area term {:.1e}", (cp.reconstructed - p.value(w.into())).norm(), cp.area_term.norm());

    let h = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4)?;
    let f = SmoothFunction::Hamiltonian { spec: h.clone(), t: 0.1 };
    let cp = cauchy_pompeiu(&f, w, orders)?;
    println!(
        "moving bump: error {:.1e}, boundary term {}",
        (cp.reconstructed - f.value(w.into())).norm(),
        cp.boundary_term
    );

    let id = cauchy_calabi_identity(&h, 0.1, IdentityOrders::default())?;
    println!("∫ Cauchy transform = {:.10}, ∫ H = {:.10}", id.lhs.re, id.rhs);
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
