use std::sync::OnceLock;

use finhopf::core::{Fe, Field, SparseVec};
use finhopf::hopf::tensor_mul;
use finhopf::nichols::{bosonize, group_exponents, Bosonization, Nichols, PaperData};
use finhopf::twist::GroupCocycle;
use proptest::prelude::*;

fn jordan_bos() -> &'static Bosonization {
    static B: OnceLock<Bosonization> = OnceLock::new();
    B.get_or_init(|| {
        let f = Field::prime(3).unwrap();
        bosonize(&Nichols::build(&PaperData::jordan(&f), 3).unwrap()).unwrap()
    })
}

fn arb_vec(dim: u32) -> impl Strategy<Value = Vec<(u32, i64)>> {
    prop::collection::vec((0..dim, 1i64..3), 1..4)
}

fn to_vec(f: &Field, v: &[(u32, i64)]) -> SparseVec {
    SparseVec::from_pairs(f, v.iter().map(|&(i, c)| (i, f.from_i64(c))).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn structure_maps_respect_products(a in arb_vec(27), b in arb_vec(27)) {
        let h = &jordan_bos().hopf;
        let f = h.field().clone();
        let (a, b) = (to_vec(&f, &a), to_vec(&f, &b));
        let ab = h.alg.mul(&a, &b);
        prop_assert_eq!(h.delta(&ab), tensor_mul(&h.alg, &h.alg, &h.delta(&a), &h.delta(&b)));
        prop_assert_eq!(h.counit(&ab), f.mul(h.counit(&a), h.counit(&b)));
        prop_assert_eq!(h.antipode(&ab), h.alg.mul(&h.antipode(&b), &h.antipode(&a)));
    }

    // over F_7 every entry of a 6-torsion table is allowed
    #[test]
    fn bicharacters_are_cocycles(ex in prop::collection::vec(0i64..6, 4), a in 0u32..36, b in 0u32..36, c in 0u32..36) {
        let f = Field::prime(7).unwrap();
        let z = f.root_of_unity(6).unwrap();
        let mut s = GroupCocycle::trivial(&f, 6, 2);
        for (k, &e) in ex.iter().enumerate() {
            s.table[k / 2][k % 2] = f.pow(z, e);
        }
        prop_assert!(s.check_well_defined().pass);
        let g = |i| group_exponents(i, 6, 2);
        let add = |x: &[u32], y: &[u32]| x.iter().zip(y).map(|(p, q)| (p + q) % 6).collect::<Vec<_>>();
        let (ga, gb, gc) = (g(a), g(b), g(c));
        let lhs = f.mul(s.eval(&ga, &gb), s.eval(&add(&ga, &gb), &gc));
        let rhs = f.mul(s.eval(&gb, &gc), s.eval(&ga, &add(&gb, &gc)));
        prop_assert_eq!(lhs, rhs);
        prop_assert_eq!(f.mul(s.eval(&ga, &gb), s.inverse().eval(&ga, &gb)), Fe::ONE);
    }
}
