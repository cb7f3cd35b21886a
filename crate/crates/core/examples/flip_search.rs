//! Rediscovers a word over three neighbouring copies of ECA 57 that equals
//! the flip, by meet-in-the-middle over the ball of radius 25.

use std::time::Instant;

use gatecalc::gates::{make_eca, named};
use gatecalc::search::{search, SearchConfig, SearchOutcome, Strategy};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let e = make_eca(57)?;
    // a acts at cell -1, b at 0, c at +1
    let gens = vec![e.shift_conjugate(-1), e.clone(), e.shift_conjugate(1)];
    let cfg = SearchConfig::new(gens, named("c0")?)
        .labels(vec!["a".into(), "b".into(), "c".into()])
        .strategy(Strategy::Mitm)
        .max_depth(25)
        .memory_budget(4 << 30);
    let started = Instant::now();
    let outcome = search(&cfg)?;
    let stats = outcome.stats();
    println!("ball: {} elements, {} bytes", stats.states, stats.bytes);
    match &outcome {
        SearchOutcome::Found { expr, minimal, .. } => {
            println!("found {} letters: {expr}", expr.len());
            if *minimal {
                println!("no shorter word exists");
            }
        }
        other => println!("{other:?}"),
    }
    println!("{:.2?}", started.elapsed());
    Ok(())
}
