// A JSON-configured run, its report and the CSV plot data.

use calabi_lab::report::{emit_plot_data, execute, RunConfig};

const CONFIG: &str = r#"{
    "hamiltonian": {
        "name": "time-scaled",
        "params": [0.0, 2.0],
        "inner": { "name": "radial-bump", "params": [1.0, 0.7] }
    },
    "estimator": { "samples": 1000, "seed": 42 },
    "experiments": ["theorem-check"],
    "trace_pairs": [[[0.2, 0.0], [0.0, -0.5]]]
}"#;

pub fn run_example() -> calabi_lab::Result<()> {
    let config = RunConfig::from_json(CONFIG)?;
    let report = execute(&config)?;
    let theorem = report.findings.theorem.as_ref().expect("theorem check requested");
    println!("Cal = {:.8}, Φ = {:.5} ± {:.5}", theorem.calabi.value, theorem.phi.value, theorem.phi.standard_error);
    for a in &report.findings.assertions {
        println!("{} {}", if a.passed { "pass" } else { "FAIL" }, a.name);
    }
    let dir = std::env::temp_dir().join(format!("calabi-lab-example-{}", std::process::id()));
    for path in emit_plot_data(&report, &dir)? {
        println!("wrote {}", path.display());
    }
    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> calabi_lab::Result<()> {
    run_example()
}
