//! Betti numbers by the bar complex and by a minimal resolution.

use finhopf::cohomology::{bar_betti, fgc_probe, invariant_betti, minimal_graded_betti, Budget, GroupAction};
use finhopf::core::{Fe, Field};
use finhopf::nichols::{Nichols, PaperData};
use finhopf::scenario::truncated_polynomial;

fn main() -> finhopf::core::Result<()> {
    let f = Field::prime(3)?;
    let tp = truncated_polynomial(&f, 3)?;
    println!("k[x]/(x^3) bar     {:?}", bar_betti(&tp, 5, Budget::default()).values);

    let r = Nichols::build(&PaperData::jordan(&f), 3)?;
    let jordan = r.alg.with_counit(vec![Fe::ZERO; 2]);
    let bar = bar_betti(&jordan, 4, Budget::default());
    let min = minimal_graded_betti(&jordan, 8)?;
    println!("Jordan bar          {:?}", bar.values);
    println!("Jordan minimal      {:?}", min.values);
    println!("sign invariants     {:?}", invariant_betti(&jordan, &GroupAction::sign(&jordan), 4, Budget::default())?.values);
    println!("{}", fgc_probe(&min.values).note);
    Ok(())
}
