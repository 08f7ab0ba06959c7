//! Repair a rounded-up LP point into a feasible 0/1 solution below it.

use fdt::domtoip::{dom_to_ip, dom_to_ip_traced};
use fdt::gen::gen_vc;
use fdt::graph::Graph;
use fdt::Rational;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let inst = gen_vc(&Graph::cycle(5), None)?;
    let all_ones = vec![1u8; 5];
    let trace = dom_to_ip_traced::<Rational>(&inst, &all_ones)?;
    for (l, x) in trace.states.iter().enumerate() {
        println!("after {l} coordinates: {x:?}");
    }
    println!("cover: {:?}", dom_to_ip::<Rational>(&inst, &all_ones)?);

    // 2x0 + 2x1 = 1 has a fractional solution but no 0/1 one.
    let mut gap = fdt::IpInstance::new("no-integer-point", 2, fdt::VarKind::Binary);
    let two = Rational::from_integer(2.into());
    gap.push_row([(0, two.clone()), (1, two.clone())], Rational::from_integer(1.into()));
    gap.push_le_row([(0, two.clone()), (1, two)], Rational::from_integer(1.into()));
    match dom_to_ip::<Rational>(&gap, &[1, 1]) {
        Err(e) => println!("{e}"),
        Ok(z) => println!("unexpected solution {z:?}"),
    }
    Ok(())
}
