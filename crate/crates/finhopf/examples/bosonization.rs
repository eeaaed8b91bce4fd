//! R # kΓ for the Jordan block over F_3: structure maps on generators and the Hopf axioms.

use finhopf::core::Field;
use finhopf::nichols::{bosonize, Nichols, PaperData};

fn main() -> finhopf::core::Result<()> {
    let f = Field::prime(3)?;
    let r = Nichols::build(&PaperData::jordan(&f), 3)?;
    let b = bosonize(&r)?;
    let h = &b.hopf;
    println!("dim H = {}", h.dim());
    for x in 0..h.alg.ngens() as u16 {
        let g = h.alg.gen_vec(x);
        println!("Δ({}) has {} terms, S({0}) = {}", h.alg.gen_names[x as usize], h.delta(&g).0.len(), h.alg.render(&h.antipode(&g)));
    }
    print!("{}", h.check_hopf());
    Ok(())
}
