//! K → H → L for a block and a point over F_3, then H rebuilt as K # L.

use finhopf::core::{Fe, Field};
use finhopf::extension::{bicrossed_product, paper_extension, round_trip, Scope};
use finhopf::nichols::PaperData;

fn main() -> finhopf::core::Result<()> {
    let f = Field::prime(3)?;
    let d = PaperData::laestrygonian(&f, Fe::ONE, 1)?;
    let pe = paper_extension(&d, 3)?;
    let e = &pe.ext;
    println!("dim K = {}, dim H = {}, dim L = {}", e.k.dim(), e.h.dim(), e.l.dim());
    print!("{}", pe.verify(Scope::Full)?);

    let datum = e.extract_datum(&pe.cleaving)?;
    println!("{}\n{}", datum.sigma_trivial().name, datum.tau_trivial().name);
    let b = bicrossed_product(&e.k, &e.l, &datum)?;
    print!("{}", round_trip(e, &pe.cleaving, &b));
    Ok(())
}
