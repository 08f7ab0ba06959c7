//! Save a certificate, tamper with it and watch the checker reject it.

use fdt::fdt::fdt_tree;
use fdt::gen::gen_vc;
use fdt::graph::Graph;
use fdt::{verify_certificate, Certificate, Rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = gen_vc(&Graph::cycle(3), None)?;
    let half = Rational::new(1.into(), 2.into());
    let cert = fdt_tree(&inst, &vec![half; 3])?;
    println!("{}", serde_json::to_string_pretty(&cert.to_json())?);
    println!("original: {:?}", verify_certificate(&cert, &inst)?.failure);

    let mut bad = Certificate::<Rational>::from_json(&cert.to_json())?;
    bad.weights[0] = Rational::from_integer(1.into());
    println!("heavier weight: {}", verify_certificate(&bad, &inst)?.failure.unwrap());

    let mut bad = cert.clone();
    bad.solutions[0] = vec![0, 0, 1];
    println!("non-cover: {}", verify_certificate(&bad, &inst)?.failure.unwrap());
    Ok(())
}
