// Winding of one pair computed by argument tracking and by integrating the
// Arnold form along the trajectories.

use calabi_lab::flow::{integrate, FlowSettings};
use calabi_lab::linking::{pair_winding_arg, pair_winding_integrand};
use calabi_lab::{ComplexPoint, HamiltonianSpec, PairConfiguration};

pub fn run_example() -> calabi_lab::Result<()> {
    let h = HamiltonianSpec::moving_bump(1.0, 0.25, 0.4)?;
    let pair = PairConfiguration::new(ComplexPoint::new(0.45, 0.0)?, ComplexPoint::new(0.3, 0.1)?)?;
    let settings = FlowSettings::default();
    let a = integrate(&h, pair.z1(), &settings)?;
    let b = integrate(&h, pair.z2(), &settings)?;

    let by_arg = pair_winding_arg(&a, &b)?;
    let by_form = pair_winding_integrand(&h, &a, &b)?;
    println!("argument tracking: {:.10} turns", by_arg.winding);
    println!("Arnold form:       {:.10} turns", by_form.winding);
    println!("Re ∫α = {:.10} vs {:.10}", by_arg.line_integral.re, by_form.line_integral.re);
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
