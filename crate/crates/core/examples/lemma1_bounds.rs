// The absolute-integrability chain behind exchanging the pair and time
// integrals: `∫|ξ(z₁) - ξ(z₂)|/|z₁ - z₂| ≤ 2∫|ξ| m(z) ≤ 8π ∫|ξ|`.

use std::f64::consts::PI;

use calabi_lab::cauchy::{lemma1_bound_check, singular_mass, CauchyOrders, Lemma1Orders};
use calabi_lab::linking::MonteCarloSettings;
use calabi_lab::rng::StreamRoot;
use calabi_lab::{ComplexPoint, HamiltonianSpec};

pub fn run_example() -> calabi_lab::Result<()> {
    let orders = CauchyOrders::default();
    for x in [0.0, 0.5, 0.9, 1.0] {
        let m = singular_mass(ComplexPoint::new(x, 0.0)?, orders)?;
        println!("m({x}) = {m:.8}  (2π = {:.8}, 4π = {:.8})", 2.0 * PI, 4.0 * PI);
    }

    let h = HamiltonianSpec::radial_bump(1.0, 0.8)?;
    let settings = MonteCarloSettings {
        samples: 5_000,
        root: StreamRoot::new(11),
        workers: 1,
    };
    for t in [0.0, 0.5, 1.0] {
        let c = lemma1_bound_check(&h, t, &settings, Lemma1Orders::default())?;
        println!(
            "t = {t}: {:.4} ± {:.4} ≤ {:.4} ≤ {:.4}",
            c.estimate, c.sigma, c.middle, c.majorant
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
