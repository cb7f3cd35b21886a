//! Programs for CNOT, its mirror, the swap and Toffoli from the flip and a
//! universal word swap.

use gatecalc::bitcore::BitWord;
use gatecalc::gates::evaluate_expr;
use gatecalc::synth::{swap_dict, synthesize_nct};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let u: BitWord = args.next().as_deref().unwrap_or("00000").parse()?;
    let v: BitWord = args.next().as_deref().unwrap_or("00100").parse()?;
    let dict = swap_dict(&u, &v)?;
    for (gate, expr) in synthesize_nct(&u, &v)? {
        let value = evaluate_expr(&expr, &dict)?;
        println!("{gate:>3} = {value}  ({} atoms)", expr.len());
        println!("      {expr}");
    }
    Ok(())
}
