//! Universality verdicts for every word swap of a given length.

use std::collections::BTreeMap;

use gatecalc::analysis::classify_swap;
use gatecalc::bitcore::BitWord;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let len: usize = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(3);
    let mut tally = BTreeMap::new();
    for u in BitWord::all(len) {
        for v in BitWord::all(len) {
            if u.to_int() >= v.to_int() {
                continue;
            }
            let class = classify_swap(&u, &v)?;
            println!("f_({u},{v})  d = {}  {:?}  {:?}", class.diff, class.verdict, class.witness);
            *tally.entry(format!("{:?}", class.verdict)).or_insert(0) += 1;
        }
    }
    println!("{tally:?}");
    Ok(())
}
