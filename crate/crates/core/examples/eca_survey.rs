//! Which asynchronous elementary CA rules are bijective, and which of those
//! generate everything together with the shift.

use gatecalc::analysis::{classify_eca, EcaClass};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for b in 0..256 {
        match classify_eca(b)? {
            EcaClass::NotBijective => {}
            EcaClass::NonUniversal { reason } => println!("{b:>3}  non-universal  {reason:?}"),
            EcaClass::Universal(cert) => println!(
                "{b:>3}  universal      flip word under {:?} letters, c0 . e = f_({},{}) at {}",
                cert.convention, cert.swap_u, cert.swap_v, cert.swap_offset
            ),
        }
    }
    Ok(())
}
