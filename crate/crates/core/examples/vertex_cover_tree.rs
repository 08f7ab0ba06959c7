//! Decompose the vertex cover LP optimum of a random graph and check the certificate.

use fdt::fdt::{fdt_tree_with, FdtOptions};
use fdt::gen::{gen_vc, random_graph};
use fdt::harness::lp_optimum;
use fdt::verify_certificate;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let g = random_graph(16, 0.3, 7);
    let inst = gen_vc(&g, None)?;
    let (x, lp) = lp_optimum::<f64>(&inst)?;
    let run = fdt_tree_with(&inst, &x, &FdtOptions::default())?;
    for level in &run.levels {
        println!(
            "coordinate {:>2}: {} branched, {} passed, {} -> {} nodes",
            level.coordinate,
            level.branch_masses.len(),
            level.passed_through,
            level.unpruned.len(),
            level.nodes.len()
        );
    }
    let cert = &run.certificate;
    let (_, best) = cert.cheapest_by(|z| inst.integer_cost(z)).expect("nonempty");
    println!("LP {lp}, factor {:.4}, {} covers, cheapest {best}", cert.factor, cert.len());
    println!("valid: {}", verify_certificate(cert, &inst)?.is_valid());
    Ok(())
}
