//! Best of several seeded dives against the full tree.

use fdt::fdt::{fdt_dive, fdt_tree};
use fdt::gen::{gen_vc, random_graph};
use fdt::harness::lp_optimum;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = gen_vc(&random_graph(30, 0.15, 2), None)?;
    let (x, lp) = lp_optimum::<f64>(&inst)?;
    let mut best = None;
    for seed in 0..20 {
        let run = fdt_dive(&inst, &x, seed)?;
        let cost = inst.integer_cost(&run.solution);
        if let Some(step) = run.root_choice() {
            if seed < 3 {
                println!("seed {seed}: root gamma ({:.3}, {:.3}) took branch {}", step.gamma.0, step.gamma.1, step.branch);
            }
        }
        best = Some(best.map_or(cost.clone(), |b: fdt::Rational| b.min(cost)));
    }
    let tree = fdt_tree(&inst, &x)?;
    let (_, tree_best) = tree.cheapest_by(|z| inst.integer_cost(z)).expect("nonempty");
    println!("LP {lp:.2}: best dive {}, tree {tree_best}", best.unwrap());
    Ok(())
}
