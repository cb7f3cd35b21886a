//! Expands the straight-line grammar for the standard gates and checks each
//! program on the full shift and on small rings.

use gatecalc::grammar::{adjacent_repeats, verify_on_ring, verify_semantics, Nonterminal, Slg};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let slg = Slg::standard()?;
    for start in Nonterminal::STARTS {
        let s = slg.expand(start)?;
        let target = start.target()?;
        let report = verify_semantics(&slg, start, &target)?;
        let rings: Vec<u32> = (4..=12)
            .filter(|&n| verify_on_ring(&slg, start, &target, n).map(|r| r.holds).unwrap_or(false))
            .collect();
        println!(
            "{start}: {} letters, equals {target} at cell {:?}, rings {:?}, adjacent repeats at {:?}",
            s.len(),
            report.anchor(),
            rings,
            adjacent_repeats(&s)
        );
        println!("    {}...", &s[..s.len().min(60)]);
    }
    Ok(())
}
