//! Build Nichols algebras for a few braidings and compare with the PBW count.

use finhopf::core::{Fe, Field};
use finhopf::nichols::{Nichols, PaperData};

fn main() -> finhopf::core::Result<()> {
    for p in [3, 5] {
        let f = Field::prime(p)?;
        let mut cases = vec![("Jordan block".to_string(), PaperData::jordan(&f))];
        for g in 1..p.min(3) {
            cases.push((format!("block + point, ghost {g}"), PaperData::laestrygonian(&f, Fe::ONE, g)?));
        }
        for (name, d) in cases {
            let r = Nichols::build(&d, d.min_f())?;
            println!("p={p} {name:<26} dim {:>5} (formula {:>5})  Hilbert {:?}", r.dim(), d.nichols_dim_formula(), r.alg.hilbert_series());
        }
    }
    Ok(())
}
