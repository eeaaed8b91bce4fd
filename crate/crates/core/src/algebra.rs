//! Finite-dimensional algebras with a basis of words and left multiplication
//! tables for the generators.

use std::sync::OnceLock;

use rustc_hash::FxHashMap;

use crate::error::{CoreError, Result};
use crate::field::{Fe, Field};
use crate::graded::graded_completion;
use crate::linalg::{Accumulator, SparseVec};
use crate::presentation::Presentation;
use crate::rewrite::{overlap_completion, RewriteSystem};
use crate::word::{Letter, MonomialOrder, NcPoly, Word};

/// Basis element `i` is the product of the letters of `basis[i]`; index 0 is the unit.
pub struct FinBasisAlgebra {
    pub name: String,
    pub field: Field,
    pub gen_names: Vec<String>,
    pub order: MonomialOrder,
    basis: Vec<Word>,
    index: FxHashMap<Word, u32>,
    left: Vec<Vec<SparseVec>>,
    right: OnceLock<Vec<Vec<SparseVec>>>,
    /// augmentation on generators
    pub counit_gen: Vec<Fe>,
    pub rws: Option<RewriteSystem>,
    pub presentation: Option<Presentation>,
}

impl std::fmt::Debug for FinBasisAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FinBasisAlgebra({}, dim {}, {} generators)", self.name, self.dim(), self.ngens())
    }
}

/// Degree bound used when the caller gives none. With a declared dimension d the
/// top degree is at most (d - 1) times the largest weight; the engines stop at
/// the first empty stretch, so a generous bound costs nothing for finite algebras.
pub fn default_bound(pres: &Presentation) -> u32 {
    let o = pres.order();
    let maxw = o.weights.iter().copied().max().unwrap_or(1).max(1);
    let maxdeg = pres.relations.iter().filter_map(|r| r.degree(&o)).max().unwrap_or(1);
    let guess = match pres.expected_dim {
        Some(d) => d as u32 * maxw + maxw,
        None => 40,
    };
    guess.max(2 * maxdeg + 2)
}

impl FinBasisAlgebra {
    /// Complete the presentation and build tables. Homogeneous presentations
    /// use the graded engine, everything else the overlap engine.
    pub fn from_presentation(pres: &Presentation, bound: Option<u32>) -> Result<Self> {
        let bound = bound.unwrap_or_else(|| default_bound(pres));
        let rws = if pres.is_weight_graded() { graded_completion(pres, bound)? } else { overlap_completion(pres, bound)? };
        Self::from_rewrite_system(pres, rws)
    }

    pub fn from_rewrite_system(pres: &Presentation, mut rws: RewriteSystem) -> Result<Self> {
        if !rws.complete {
            return Err(CoreError::Inconclusive(format!(
                "completion of {} not certified at bound {}",
                pres.name, rws.degree_bound
            )));
        }
        if let Some(d) = pres.expected_dim {
            if d != rws.dim() {
                return Err(CoreError::Dimension(format!("{}: expected {d}, found {}", pres.name, rws.dim())));
            }
        }
        let left = match rws.tables.take() {
            Some(t) => t,
            None => rws.compute_tables(pres.ngens()),
        };
        let basis = rws.normal_words.clone();
        let mut a = FinBasisAlgebra::from_tables(&pres.name, &pres.field, pres.names(), pres.order(), basis, left);
        a.rws = Some(rws);
        a.presentation = Some(pres.clone());
        Ok(a)
    }

    /// Algebra given directly by basis words and left tables.
    pub fn from_tables(
        name: &str,
        field: &Field,
        gen_names: Vec<String>,
        order: MonomialOrder,
        basis: Vec<Word>,
        left: Vec<Vec<SparseVec>>,
    ) -> Self {
        assert!(basis.first().is_some_and(|w| w.is_empty()), "basis must start with the unit");
        assert_eq!(left.len(), gen_names.len());
        let index = basis.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let n = gen_names.len();
        FinBasisAlgebra {
            name: name.to_string(),
            field: field.clone(),
            gen_names,
            order,
            basis,
            index,
            left,
            right: OnceLock::new(),
            counit_gen: vec![Fe::ZERO; n],
            rws: None,
            presentation: None,
        }
    }

    /// Algebra from a multiplication on basis indices. Basis element 0 must be
    /// the unit; every other basis element becomes a generator.
    pub fn from_structure_constants(
        name: &str,
        field: &Field,
        labels: Vec<String>,
        mult: impl Fn(u32, u32) -> SparseVec,
    ) -> Self {
        let dim = labels.len();
        let gen_names: Vec<String> = labels[1..].to_vec();
        let basis: Vec<Word> =
            std::iter::once(Word::empty()).chain((0..dim - 1).map(|i| Word::letter(i as Letter))).collect();
        let left = (1..dim as u32).map(|x| (0..dim as u32).map(|b| mult(x, b)).collect()).collect();
        let order = MonomialOrder::deglex(dim - 1);
        FinBasisAlgebra::from_tables(name, field, gen_names, order, basis, left)
    }

    /// Algebra given by left multiplication operators on some coordinate space
    /// with a distinguished unit vector. A basis of words is chosen breadth
    /// first (shortest words, smallest in `order`), so it is suffix closed.
    /// Returns the algebra and the new basis in the old coordinates. Fails if
    /// the operators do not generate the whole space from the unit.
    pub fn from_left_action(
        name: &str,
        field: &Field,
        gen_names: Vec<String>,
        order: MonomialOrder,
        dim: usize,
        left: &[Vec<SparseVec>],
        unit: &SparseVec,
    ) -> Result<(Self, Vec<SparseVec>)> {
        let apply = |x: usize, v: &SparseVec| -> SparseVec {
            let mut acc = Vec::new();
            for &(i, c) in &v.0 {
                for &(j, a) in &left[x][i as usize].0 {
                    acc.push((j, field.mul(a, c)));
                }
            }
            SparseVec::from_pairs(field, acc)
        };
        let mut ech = crate::linalg::Echelon::new(field);
        ech.insert(unit);
        let mut words = vec![Word::empty()];
        let mut vecs = vec![unit.clone()];
        let mut level: Vec<u32> = vec![0];
        while !level.is_empty() && words.len() < dim {
            let mut cands: Vec<(Word, SparseVec)> = Vec::new();
            for &i in &level {
                for x in 0..gen_names.len() {
                    let mut w = Word::letter(x as Letter);
                    w.0.extend_from_slice(&words[i as usize].0);
                    cands.push((w, apply(x, &vecs[i as usize])));
                }
            }
            cands.sort_by(|a, b| order.cmp(&a.0 .0, &b.0 .0));
            let mut next = Vec::new();
            for (w, v) in cands {
                if ech.insert(&v) {
                    next.push(words.len() as u32);
                    words.push(w);
                    vecs.push(v);
                }
            }
            level = next;
        }
        if words.len() != dim {
            return Err(CoreError::Dimension(format!("{name}: generators span {} of {dim} dimensions", words.len())));
        }
        let index: FxHashMap<Word, u32> = words.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
        let mut solver = crate::linalg::ColumnSolver::new(field, dim);
        for v in &vecs {
            solver.push(v);
        }
        let mut tables = Vec::with_capacity(gen_names.len());
        for x in 0..gen_names.len() {
            let mut col = Vec::with_capacity(dim);
            for i in 0..dim {
                let mut w = Word::letter(x as Letter);
                w.0.extend_from_slice(&words[i].0);
                let c = match index.get(&w) {
                    Some(&j) => SparseVec::unit(j),
                    None => solver.solve(&apply(x, &vecs[i])).expect("basis spans"),
                };
                col.push(c);
            }
            tables.push(col);
        }
        let a = FinBasisAlgebra::from_tables(name, field, gen_names, order, words, tables);
        Ok((a, vecs))
    }

    pub fn with_counit(mut self, counit_gen: Vec<Fe>) -> Self {
        assert_eq!(counit_gen.len(), self.ngens());
        self.counit_gen = counit_gen;
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
    #[inline]
    pub fn ngens(&self) -> usize {
        self.gen_names.len()
    }
    pub fn basis(&self) -> &[Word] {
        &self.basis
    }
    pub fn word(&self, i: u32) -> &Word {
        &self.basis[i as usize]
    }
    pub fn index_of(&self, w: &Word) -> Option<u32> {
        self.index.get(w).copied()
    }
    pub fn gen_index(&self, name: &str) -> Option<Letter> {
        self.gen_names.iter().position(|g| g == name).map(|i| i as Letter)
    }
    pub fn left_table(&self, x: Letter) -> &[SparseVec] {
        &self.left[x as usize]
    }

    pub fn unit(&self) -> SparseVec {
        SparseVec::unit(0)
    }

    /// The generator as an element.
    pub fn gen_vec(&self, x: Letter) -> SparseVec {
        self.left[x as usize][0].clone()
    }

    pub fn render_basis(&self, i: u32) -> String {
        self.basis[i as usize].render(&self.gen_names)
    }

    pub fn render(&self, v: &SparseVec) -> String {
        self.to_poly(v).render(&self.field, &self.gen_names, &self.order)
    }

    /// Weighted degree of each basis word.
    pub fn degree(&self, i: u32) -> u32 {
        self.order.degree(&self.basis[i as usize].0)
    }

    pub fn hilbert_series(&self) -> Vec<usize> {
        let mut h = Vec::new();
        for i in 0..self.dim() as u32 {
            let d = self.degree(i) as usize;
            if h.len() <= d {
                h.resize(d + 1, 0);
            }
            h[d] += 1;
        }
        h
    }

    /// x * v
    pub fn left_mul_gen(&self, x: Letter, v: &SparseVec) -> SparseVec {
        let tab = &self.left[x as usize];
        let mut pairs = Vec::new();
        for &(i, c) in &v.0 {
            for &(j, a) in &tab[i as usize].0 {
                pairs.push((j, self.field.mul(a, c)));
            }
        }
        SparseVec::from_pairs(&self.field, pairs)
    }

    /// x * v using a caller-provided accumulator.
    pub fn left_mul_gen_acc(&self, x: Letter, v: &SparseVec, acc: &mut Accumulator) -> SparseVec {
        let tab = &self.left[x as usize];
        for &(i, c) in &v.0 {
            acc.add_vec(&tab[i as usize], c);
        }
        acc.drain()
    }

    /// w * v, letters applied right to left.
    pub fn apply_word(&self, w: &[Letter], v: &SparseVec) -> SparseVec {
        let mut cur = v.clone();
        for &x in w.iter().rev() {
            if cur.is_zero() {
                break;
            }
            cur = self.left_mul_gen(x, &cur);
        }
        cur
    }

    pub fn eval_word(&self, w: &[Letter]) -> SparseVec {
        if let Some(&i) = self.index.get(w) {
            return SparseVec::unit(i);
        }
        self.apply_word(w, &self.unit())
    }

    pub fn eval_poly(&self, p: &NcPoly) -> SparseVec {
        let mut pairs = Vec::new();
        for (w, c) in p.terms() {
            for &(j, a) in &self.eval_word(&w.0).0 {
                pairs.push((j, self.field.mul(a, *c)));
            }
        }
        SparseVec::from_pairs(&self.field, pairs)
    }

    pub fn to_poly(&self, v: &SparseVec) -> NcPoly {
        NcPoly::from_terms(&self.field, v.0.iter().map(|&(i, c)| (self.basis[i as usize].clone(), c)).collect())
    }

    /// Normal form of a polynomial in the generators.
    pub fn normal_form(&self, p: &NcPoly) -> NcPoly {
        match &self.rws {
            Some(r) => r.reduce(p),
            None => self.to_poly(&self.eval_poly(p)),
        }
    }

    pub fn mul(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        if a.is_zero() || b.is_zero() {
            return SparseVec::zero();
        }
        let mut pairs = Vec::new();
        for &(i, c) in &a.0 {
            let prod = self.apply_word(&self.basis[i as usize].0, b);
            for &(j, x) in &prod.0 {
                pairs.push((j, self.field.mul(x, c)));
            }
        }
        SparseVec::from_pairs(&self.field, pairs)
    }

    pub fn mul_basis(&self, i: u32, j: u32) -> SparseVec {
        self.apply_word(&self.basis[i as usize].0, &SparseVec::unit(j))
    }

    pub fn pow(&self, a: &SparseVec, n: u32) -> SparseVec {
        let mut r = self.unit();
        for _ in 0..n {
            r = self.mul(&r, a);
        }
        r
    }

    pub fn add(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        a.add(&self.field, b)
    }

    pub fn sub(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        a.sub(&self.field, b)
    }

    /// [a, b]_q = ab - q ba
    pub fn q_commutator(&self, a: &SparseVec, b: &SparseVec, q: Fe) -> SparseVec {
        let ab = self.mul(a, b);
        let ba = self.mul(b, a);
        ab.add_scaled(&self.field, &ba, self.field.neg(q))
    }

    /// Right multiplication tables, built on first use.
    pub fn right_tables(&self) -> &Vec<Vec<SparseVec>> {
        self.right.get_or_init(|| {
            (0..self.ngens() as Letter)
                .map(|x| {
                    let g = self.gen_vec(x);
                    (0..self.dim()).map(|b| self.apply_word(&self.basis[b].0, &g)).collect()
                })
                .collect()
        })
    }

    /// v * x
    pub fn right_mul_gen(&self, v: &SparseVec, x: Letter) -> SparseVec {
        let tab = &self.right_tables()[x as usize];
        let mut pairs = Vec::new();
        for &(i, c) in &v.0 {
            for &(j, a) in &tab[i as usize].0 {
                pairs.push((j, self.field.mul(a, c)));
            }
        }
        SparseVec::from_pairs(&self.field, pairs)
    }

    /// Augmentation of each basis word (product of generator counits).
    pub fn counit_basis(&self) -> Vec<Fe> {
        self.basis
            .iter()
            .map(|w| w.0.iter().fold(Fe::ONE, |acc, &x| self.field.mul(acc, self.counit_gen[x as usize])))
            .collect()
    }

    pub fn counit(&self, v: &SparseVec) -> Fe {
        let e = self.counit_basis();
        v.dot_dense(&self.field, &e)
    }

    /// Check that each basis label really is the product of its letters and that
    /// every generator table has full length.
    pub fn validate_labels(&self) -> Result<()> {
        for t in &self.left {
            if t.len() != self.dim() {
                return Err(CoreError::Dimension(format!("{}: table length {} != dim {}", self.name, t.len(), self.dim())));
            }
        }
        for (i, w) in self.basis.iter().enumerate() {
            if w.is_empty() {
                continue;
            }
            let v = self.apply_word(&w.0, &self.unit());
            if v != SparseVec::unit(i as u32) {
                return Err(CoreError::Presentation(format!("{}: basis label {} is not its own product", self.name, self.render_basis(i as u32))));
            }
        }
        Ok(())
    }

    /// Associativity on triples (a, b, c) of basis indices.
    pub fn associator_vanishes(&self, a: u32, b: u32, c: u32) -> bool {
        let ab = self.mul_basis(a, b);
        let bc = self.mul_basis(b, c);
        self.mul(&ab, &SparseVec::unit(c)) == self.mul(&SparseVec::unit(a), &bc)
    }

    /// Dense matrix of left multiplication by `a`, as columns.
    pub fn left_mul_columns(&self, a: &SparseVec) -> Vec<SparseVec> {
        (0..self.dim() as u32).map(|j| self.mul(a, &SparseVec::unit(j))).collect()
    }

    /// Inverse of `a` if it has one.
    pub fn inverse(&self, a: &SparseVec) -> Option<SparseVec> {
        let cols = self.left_mul_columns(a);
        let mut s = crate::linalg::ColumnSolver::new(&self.field, cols.len());
        for c in &cols {
            s.push(c);
        }
        let x = s.solve(&self.unit())?;
        // left inverse of left multiplication; a finite-dimensional algebra has
        // equal one-sided inverses
        (self.mul(&x, a) == self.unit()).then_some(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;
    use rand::{Rng, SeedableRng};

    fn jordan(p: u32) -> Presentation {
        let f = Field::prime(p).unwrap();
        let mut pr = Presentation::new("jordan", &f, vec![Generator::new("x"), Generator::new("y")]);
        pr.push_str("y*x - x*y + 1/2*x^2").unwrap();
        pr.push_str(&format!("x^{p}")).unwrap();
        pr.push_str(&format!("y^{p}")).unwrap();
        pr.expected_dim = Some((p * p) as usize);
        pr
    }

    #[test]
    fn left_action_rebuild() {
        let pr = jordan(3);
        let a = FinBasisAlgebra::from_presentation(&pr, None).unwrap();
        let tabs: Vec<Vec<SparseVec>> = (0..2).map(|x| a.left_table(x).to_vec()).collect();
        let (b, vecs) =
            FinBasisAlgebra::from_left_action("j", &a.field, a.gen_names.clone(), a.order.clone(), 9, &tabs, &a.unit()).unwrap();
        b.validate_labels().unwrap();
        assert_eq!(b.hilbert_series(), a.hilbert_series());
        for (i, v) in vecs.iter().enumerate() {
            assert_eq!(*v, a.eval_word(&b.word(i as u32).0));
        }
    }

    #[test]
    fn jordan_hilbert_and_products() {
        let pr = jordan(3);
        let a = FinBasisAlgebra::from_presentation(&pr, Some(7)).unwrap();
        assert_eq!(a.hilbert_series(), vec![1, 2, 3, 2, 1]);
        a.validate_labels().unwrap();
        let x = a.gen_vec(0);
        let y = a.gen_vec(1);
        let yx = a.mul(&y, &x);
        let expect = a.eval_poly(&pr.parse("x*y + x^2", &Default::default()).unwrap());
        assert_eq!(yx, expect);
        assert_eq!(a.mul(&a.unit(), &y), y);
        for i in 0..9 {
            for j in 0..9 {
                for k in 0..9 {
                    assert!(a.associator_vanishes(i, j, k));
                }
            }
        }
    }

    #[test]
    fn truncated_polynomial() {
        let f = Field::prime(3).unwrap();
        let mut pr = Presentation::new("x2", &f, vec![Generator::new("x")]);
        pr.push_str("x^2").unwrap();
        let a = FinBasisAlgebra::from_presentation(&pr, None).unwrap();
        assert_eq!(a.hilbert_series(), vec![1, 1]);
    }

    #[test]
    fn dimension_mismatch_reported() {
        let mut pr = jordan(3);
        pr.expected_dim = Some(10);
        assert!(matches!(FinBasisAlgebra::from_presentation(&pr, Some(7)), Err(CoreError::Dimension(_))));
    }

    #[test]
    fn normal_form_idempotent_random() {
        let pr = jordan(5);
        let a = FinBasisAlgebra::from_presentation(&pr, Some(20)).unwrap();
        let f = &pr.field;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for _ in 0..1000 {
            let terms = (0..rng.gen_range(0..5))
                .map(|_| {
                    let len = rng.gen_range(0..6);
                    (Word((0..len).map(|_| rng.gen_range(0..2u16)).collect()), Fe(rng.gen_range(0..5)))
                })
                .collect();
            let p = NcPoly::from_terms(f, terms);
            let n1 = a.normal_form(&p);
            assert_eq!(a.normal_form(&n1), n1);
            // rewriting and table evaluation agree
            assert_eq!(a.to_poly(&a.eval_poly(&p)), n1);
        }
    }
}
