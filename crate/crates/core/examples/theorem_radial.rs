// `Φ = -2 Cal` for `H = (1 - |z|²)²`, where both sides are known in closed form.

use std::f64::consts::PI;

use calabi_lab::calabi::{calabi, CalabiOrders};
use calabi_lab::flow::FlowSettings;
use calabi_lab::linking::{average_rotation_mc, average_rotation_radial, MonteCarloSettings};
use calabi_lab::rng::StreamRoot;
use calabi_lab::HamiltonianSpec;

pub fn run_example() -> calabi_lab::Result<()> {
    let h = HamiltonianSpec::radial_polynomial(1.0, 2, 1.0)?;

    let cal = calabi(&h, CalabiOrders::default());
    let closed = average_rotation_radial(&h, 64)?;
    let settings = MonteCarloSettings {
        samples: 4_000,
        root: StreamRoot::new(42),
        workers: 1,
    };
    let mc = average_rotation_mc(&h, &settings, &FlowSettings::default())?;

    println!("Cal          = {:.12} (π/3 = {:.12})", cal.value, PI / 3.0);
    println!("Φ closed     = {:.12}", closed.phi);
    println!("Φ Monte Carlo = {:.5} ± {:.5}", mc.phi.phi, mc.phi.standard_error);
    println!("Φ + 2 Cal    = {:.3e}", mc.phi.phi + 2.0 * cal.value);
    assert!((closed.phi + 2.0 * cal.value).abs() < 1e-10);
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
