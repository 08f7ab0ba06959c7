//! Ratio of the cheapest tree leaf to the LP bound on random tree augmentation instances.

use fdt::harness::run_tap_experiment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = run_tap_experiment(3..=5, 20, 0, None);
    print!("{}", report.summary());
    println!("share at most 4/3: {:.2}", report.fraction_at_most(4.0 / 3.0));
    Ok(())
}
