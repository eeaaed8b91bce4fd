//! q = -1 against q = 1 twisted by a cocycle on (Z/6)^2, over F_3.

use finhopf::core::Field;
use finhopf::nichols::PaperData;
use finhopf::twist::verify_twist_iso;

fn main() -> finhopf::core::Result<()> {
    let f = Field::prime(3)?;
    let d = PaperData::laestrygonian(&f, f.from_i64(-1), 1)?;
    let iso = verify_twist_iso(&d, 6, 42)?;
    println!("dims {:?}", iso.dims);
    println!("Hilbert {:?}\n        {:?}", iso.hilbert.0, iso.hilbert.1);
    print!("{}", iso.report);
    Ok(())
}
