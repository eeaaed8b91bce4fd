use finhopf_core::linalg::sparse_rank;
use finhopf_core::{ColumnSolver, Fe, Field, FinBasisAlgebra, Generator, NcPoly, Presentation, SparseVec, Word};
use proptest::prelude::*;

fn jordan(p: u32) -> Presentation {
    let f = Field::prime(p).unwrap();
    let mut pr = Presentation::new("jordan", &f, vec![Generator::new("x"), Generator::new("y")]);
    pr.push_str("y*x - x*y + 1/2*x^2").unwrap();
    pr.push_str(&format!("x^{p}")).unwrap();
    pr.push_str(&format!("y^{p}")).unwrap();
    pr
}

// quantum plane at q = 2 in F_5 (order 4), truncated at x^4, y^4
fn quantum_plane() -> Presentation {
    let f = Field::prime(5).unwrap();
    let mut pr = Presentation::new("qplane", &f, vec![Generator::new("x"), Generator::new("y")]);
    pr.push_str("y*x - 2*x*y").unwrap();
    pr.push_str("x^4").unwrap();
    pr.push_str("y^4").unwrap();
    pr
}

fn arb_word(n: u16) -> impl Strategy<Value = Vec<u16>> {
    prop::collection::vec(0..n, 0..9)
}

fn f9() -> Field {
    Field::make(3, 2, None).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn field_axioms_f9(a in 0u32..9, b in 0u32..9, c in 0u32..9) {
        let f = f9();
        let (a, b, c) = (f.from_coeffs(&[a % 3, a / 3]), f.from_coeffs(&[b % 3, b / 3]), f.from_coeffs(&[c % 3, c / 3]));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a)), Fe::ONE);
            prop_assert_eq!(f.pow(a, 8), Fe::ONE);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
    }

    #[test]
    fn normal_form_is_idempotent(w in arb_word(2), v in arb_word(2)) {
        for pr in [jordan(3), jordan(5), quantum_plane()] {
            let a = FinBasisAlgebra::from_presentation(&pr, None).unwrap();
            let f = &pr.field;
            let p = NcPoly::from_terms(f, vec![(Word::from_slice(&w), Fe::ONE), (Word::from_slice(&v), f.from_i64(2))]);
            let once = a.normal_form(&p);
            prop_assert_eq!(a.normal_form(&once), once.clone());
            prop_assert_eq!(a.eval_poly(&once), a.eval_poly(&p));
        }
    }

    #[test]
    fn multiplication_is_associative(i in 0u32..1000, j in 0u32..1000, k in 0u32..1000) {
        for pr in [jordan(5), quantum_plane()] {
            let a = FinBasisAlgebra::from_presentation(&pr, None).unwrap();
            let n = a.dim() as u32;
            prop_assert!(a.associator_vanishes(i % n, j % n, k % n));
        }
    }

    #[test]
    fn solver_agrees_with_rank(rows in prop::collection::vec(prop::collection::vec((0u32..12, 1i64..7), 0..5), 1..10), target in prop::collection::vec((0u32..12, 1i64..7), 0..5)) {
        let f = Field::prime(7).unwrap();
        let vecs: Vec<SparseVec> = rows.iter().map(|r| SparseVec::from_pairs(&f, r.iter().map(|&(i, c)| (i, f.from_i64(c))).collect())).collect();
        let b = SparseVec::from_pairs(&f, target.iter().map(|&(i, c)| (i, f.from_i64(c))).collect());
        let mut s = ColumnSolver::new(&f, vecs.len());
        for v in &vecs {
            s.push(v);
        }
        prop_assert_eq!(s.rank(), sparse_rank(&f, &vecs));
        let mut with_b = vecs.clone();
        with_b.push(b.clone());
        let in_span = sparse_rank(&f, &with_b) == sparse_rank(&f, &vecs);
        match s.solve(&b) {
            Some(x) => {
                prop_assert!(in_span);
                let back = x.iter().fold(SparseVec::zero(), |acc, &(i, c)| acc.add_scaled(&f, &vecs[i as usize], c));
                prop_assert_eq!(back, b);
            }
            None => prop_assert!(!in_span),
        }
    }
}

#[test]
fn dimensions_of_small_presentations() {
    assert_eq!(FinBasisAlgebra::from_presentation(&jordan(3), None).unwrap().dim(), 9);
    assert_eq!(FinBasisAlgebra::from_presentation(&jordan(5), None).unwrap().dim(), 25);
    assert_eq!(FinBasisAlgebra::from_presentation(&quantum_plane(), None).unwrap().dim(), 16);
}
