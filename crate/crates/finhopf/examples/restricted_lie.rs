//! The restricted Lie algebra l attached to a ghost matrix, its matched pair and u(l).

use finhopf::core::Field;
use finhopf::lie::{build_l, restricted_enveloping};

fn main() -> finhopf::core::Result<()> {
    let f = Field::prime(5)?;
    for ghost in [vec![vec![1]], vec![vec![2]], vec![vec![3]]] {
        let gl = build_l(&f, 1, &ghost)?;
        let mut rep = gl.lie.verify(1, 100);
        rep.extend(gl.pair.verify());
        let u = restricted_enveloping(&gl.lie, "u(l)")?;
        println!("ghost {ghost:?}: dim l = {}, dim u(l) = {}, checks {}", gl.lie.dim(), u.dim(), if rep.all_pass() { "pass" } else { "FAIL" });
    }
    Ok(())
}
