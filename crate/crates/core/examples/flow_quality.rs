// Area preservation of the computed flow and the convergence order of RK4
// on an orbit with a closed form.

use num_complex::Complex64;

use calabi_lab::flow::{flow_map, jacobian_determinant, JacobianSettings, StepPolicy};
use calabi_lab::{ComplexPoint, Hamiltonian, HamiltonianSpec};

pub fn run_example() -> calabi_lab::Result<()> {
    let h = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4)?;
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let z = ComplexPoint::new(0.4 + 0.02 * k as f64, 0.05 * k as f64)?;
        let det = jacobian_determinant(&h, z, 0.1 * k as f64 + 0.2, &JacobianSettings::default())?;
        worst = worst.max((det - 1.0).abs());
    }
    println!("max |det Dφ - 1| = {worst:.2e}");

    // φ_t(z) = z exp(2i h'(|z|²) t) for H = h(|z|²)
    let h = HamiltonianSpec::radial_polynomial(1.0, 3, 1.0)?;
    let z0 = Complex64::new(0.5, 0.2);
    let omega = 2.0 * (h.dzbar(0.0, z0) / z0).re;
    let exact = z0 * Complex64::new(0.0, omega).exp();
    let mut last = None;
    for steps in [8, 16, 32, 64] {
        let got = flow_map(&h, z0, 1.0, StepPolicy::Fixed { step: 1.0 / steps as f64 })?;
        let err = (got - exact).norm();
        match last {
            Some(prev) => println!("{steps:3} steps: error {err:.3e}, order {:.2}", f64::log2(prev / err)),
            None => println!("{steps:3} steps: error {err:.3e}"),
        }
        last = Some(err);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
