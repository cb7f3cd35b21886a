//! Evaluates the 50-letter flip word under both letter placements and both
//! reading orders.

use gatecalc::gates::{check_flip_identity, FLIP_WORD};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{FLIP_WORD}");
    for r in check_flip_identity()?.results {
        println!("{:?} letters, {:?}: equals c0 = {}", r.convention, r.order, r.equals_target);
    }
    Ok(())
}
