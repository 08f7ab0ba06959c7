//! Build the 8-cycle point, decompose it into 2-edge-connected multigraphs, then bin all k = 10 points.

use fdt::ec2::{fdt_2ec, verify_2ec_certificate};
use fdt::gen::cv::{fig3_matching, gen_cv};
use fdt::harness::run_cv_experiment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = gen_cv(8, &fig3_matching(), &[1; 4], 0)?;
    let cycle: Vec<String> = inst.cycle_values().iter().map(|v| v.to_string()).collect();
    println!("cycle values {cycle:?}");
    let cert = fdt_2ec(&inst.point)?;
    println!("factor {} from {} multigraphs", cert.factor, cert.len());
    for (w, z) in cert.weights.iter().zip(&cert.solutions) {
        println!("  {w:>8}  {z:?}");
    }
    println!("valid: {}", verify_2ec_certificate(&cert, &inst.point.graph)?.is_valid());

    let report = run_cv_experiment(&[10], 0, None)?;
    print!("{}", report.summary());
    Ok(())
}
