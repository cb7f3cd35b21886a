//! The action of a gate on periodic points, as a permutation of {0,1}^n,
//! and the parity of the ring rotation.

use gatecalc::cyclic::{necklace_count_formula, project_formula, project_periodic, CyclicPerm};
use gatecalc::gates::make_eca;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = make_eca(57)?;
    for n in 4..=8 {
        let p = project_formula(&e, n)?;
        assert_eq!(p, project_periodic(&e, n)?);
        println!("e57 on n = {n}: {} cycles, sign {}", p.cycle_count(), p.sign());
    }
    println!("{}", project_formula(&e, 4)?.cycle_notation());

    println!("{:>3} {:>8} {:>6}", "n", "p_n", "sign");
    for n in 1..=16 {
        println!("{n:>3} {:>8} {:>6}", necklace_count_formula(n), CyclicPerm::rotation(n, 1)?.sign());
    }
    Ok(())
}
