//! Building, composing and inspecting gates in normal form.

use gatecalc::bitcore::BitWord;
use gatecalc::gates::{make_eca, named, GateExpr, GeneratorDict, GroupElement};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c0 = named("c0")?;
    let c1 = named("c1")?;
    let e = make_eca(57)?;
    println!("c0  = {c0}");
    println!("c1  = {c1}");
    println!("e57 = {e}");

    // f . g applies g first
    let g = c0.compose(&e)?;
    println!("c0 . e57 = {g}");
    println!("c0 . e57 . (c0 . e57)^-1 is identity: {}", g.compose(&g.inverse())?.is_identity());

    // conjugating by the shift translates the window
    let moved = c1.shift_conjugate(3);
    println!("c1 moved by 3: window {:?}", moved.inert().window());
    println!("R c1 R = {}", c1.reverse_conjugate());

    let shifted = GroupElement::sigma(2).compose(&c1)?;
    println!("sigma^2 . c1 has shift power {} and inert window {:?}", shifted.shift_power(), shifted.inert().window());

    let x: BitWord = "0110100".parse()?;
    let (y, anchor) = e.apply(&x, -3)?;
    println!("e57 on {x} @ -3 gives {y} @ {anchor}");

    let dict = GeneratorDict::new().with("c0", c0.clone()).with("e", e.clone());
    let expr: GateExpr = "e@-1 c0 e@1 c0".parse()?;
    println!("{expr} = {}", gatecalc::gates::evaluate_expr(&expr, &dict)?);

    let record = serde_json::to_string(&e.to_record())?;
    println!("record: {record}");
    Ok(())
}
