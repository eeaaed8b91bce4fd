//! Hopf structures on finite-dimensional algebras: comultiplication, counit and
//! antipode given on generators, extended (anti)multiplicatively, with axiom
//! checks, linear maps between algebras, convolution inverses and duals.

use std::collections::HashMap;
use std::sync::OnceLock;

use finhopf_core::expr::{parse_tensor, Scope};
use finhopf_core::presentation::{eval_scalars, PresFile};
use finhopf_core::{ColumnSolver, CoreError, Fe, Field, FinBasisAlgebra, Letter, NcPoly, Result, SparseVec, Word};
use petgraph::graph::DiGraph;
use rustc_hash::FxHashMap;
use serde::Deserialize;

use crate::check::{Check, Report};

/// Finitely supported element of A ⊗ B in basis coordinates, sorted by index pair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tensor(pub Vec<((u32, u32), Fe)>);

impl Tensor {
    pub fn zero() -> Tensor {
        Tensor(Vec::new())
    }

    pub fn single(i: u32, j: u32, c: Fe) -> Tensor {
        if c.is_zero() {
            Tensor::zero()
        } else {
            Tensor(vec![((i, j), c)])
        }
    }

    pub fn from_map(map: FxHashMap<(u32, u32), Fe>) -> Tensor {
        let mut v: Vec<_> = map.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        v.sort_unstable_by_key(|t| t.0);
        Tensor(v)
    }

    pub fn from_pairs(field: &Field, pairs: Vec<((u32, u32), Fe)>) -> Tensor {
        let mut m = FxHashMap::default();
        for (k, c) in pairs {
            let e = m.entry(k).or_insert(Fe::ZERO);
            *e = field.add(*e, c);
        }
        Tensor::from_map(m)
    }

    /// a ⊗ b for two vectors.
    pub fn outer(field: &Field, a: &SparseVec, b: &SparseVec) -> Tensor {
        let mut v = Vec::with_capacity(a.len() * b.len());
        for &(i, x) in &a.0 {
            for &(j, y) in &b.0 {
                v.push(((i, j), field.mul(x, y)));
            }
        }
        Tensor(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_scaled(&self, field: &Field, other: &Tensor, c: Fe) -> Tensor {
        let mut pairs = self.0.clone();
        pairs.extend(other.0.iter().map(|&(k, x)| (k, field.mul(x, c))));
        Tensor::from_pairs(field, pairs)
    }

    pub fn sub(&self, field: &Field, other: &Tensor) -> Tensor {
        self.add_scaled(field, other, field.neg(Fe::ONE))
    }

    pub fn scale(&self, field: &Field, c: Fe) -> Tensor {
        if c.is_zero() {
            return Tensor::zero();
        }
        Tensor(self.0.iter().map(|&(k, x)| (k, field.mul(x, c))).collect())
    }

    pub fn flip(&self) -> Tensor {
        let mut v: Vec<_> = self.0.iter().map(|&((i, j), c)| ((j, i), c)).collect();
        v.sort_unstable_by_key(|t| t.0);
        Tensor(v)
    }

    /// (f ⊗ g) applied leg by leg.
    pub fn map(&self, field: &Field, f: impl Fn(u32) -> SparseVec, g: impl Fn(u32) -> SparseVec) -> Tensor {
        let mut acc: FxHashMap<(u32, u32), Fe> = FxHashMap::default();
        for &((i, j), c) in &self.0 {
            let a = f(i);
            if a.is_zero() {
                continue;
            }
            let b = g(j);
            for &(k, x) in &a.0 {
                let xc = field.mul(x, c);
                for &(l, y) in &b.0 {
                    let e = acc.entry((k, l)).or_insert(Fe::ZERO);
                    *e = field.mul_add(*e, xc, y);
                }
            }
        }
        Tensor::from_map(acc)
    }

    /// (f ⊗ f) for a linear map given as a closure on vectors; each distinct
    /// left leg is mapped once.
    pub fn transform(&self, field: &Field, f: &mut dyn FnMut(&SparseVec) -> SparseVec) -> Tensor {
        let mut by_left: FxHashMap<u32, Vec<(u32, Fe)>> = FxHashMap::default();
        for &((i, j), c) in &self.0 {
            by_left.entry(i).or_default().push((j, c));
        }
        let mut acc: FxHashMap<(u32, u32), Fe> = FxHashMap::default();
        for (i, rights) in by_left {
            let l = f(&SparseVec::unit(i));
            let r = f(&SparseVec::from_pairs(field, rights));
            for &(a, x) in &l.0 {
                for &(b, y) in &r.0 {
                    let e = acc.entry((a, b)).or_insert(Fe::ZERO);
                    *e = field.mul_add(*e, x, y);
                }
            }
        }
        Tensor::from_map(acc)
    }

    /// Σ c · f(i) · g(j) for a bilinear contraction into an algebra.
    pub fn contract(&self, alg: &FinBasisAlgebra, f: impl Fn(u32) -> SparseVec, g: impl Fn(u32) -> SparseVec) -> SparseVec {
        let field = &alg.field;
        let mut out = SparseVec::zero();
        for &((i, j), c) in &self.0 {
            let a = f(i);
            if a.is_zero() {
                continue;
            }
            let b = g(j);
            out = out.add_scaled(field, &alg.mul(&a, &b), c);
        }
        out
    }

    pub fn render(&self, a: &FinBasisAlgebra, b: &FinBasisAlgebra) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|&((i, j), c)| {
                let s = a.field.show(c);
                format!("{}{}⊗{}", if s == "1" { String::new() } else { format!("{s}·") }, a.render_basis(i), b.render_basis(j))
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// Product in A ⊗ B.
pub fn tensor_mul(a: &FinBasisAlgebra, b: &FinBasisAlgebra, s: &Tensor, t: &Tensor) -> Tensor {
    let field = &a.field;
    let mut acc: FxHashMap<(u32, u32), Fe> = FxHashMap::default();
    for &((i, j), c) in &s.0 {
        let wi = &a.word(i).0;
        let wj = &b.word(j).0;
        for &((k, l), d) in &t.0 {
            let left = a.apply_word(wi, &SparseVec::unit(k));
            if left.is_zero() {
                continue;
            }
            let right = b.apply_word(wj, &SparseVec::unit(l));
            let cd = field.mul(c, d);
            for &(x, u) in &left.0 {
                let uc = field.mul(u, cd);
                for &(y, v) in &right.0 {
                    let e = acc.entry((x, y)).or_insert(Fe::ZERO);
                    *e = field.mul_add(*e, uc, v);
                }
            }
        }
    }
    Tensor::from_map(acc)
}

type Triple = FxHashMap<(u32, u32, u32), Fe>;

fn triple_add(field: &Field, m: &mut Triple, k: (u32, u32, u32), c: Fe) {
    let e = m.entry(k).or_insert(Fe::ZERO);
    *e = field.add(*e, c);
}

fn triple_eq(a: &Triple, b: &Triple) -> bool {
    let nz = |m: &Triple| m.iter().filter(|(_, c)| !c.is_zero()).map(|(k, c)| (*k, *c)).collect::<FxHashMap<_, _>>();
    nz(a) == nz(b)
}

/// A finite-dimensional Hopf algebra. Δ, ε and S are stored on generators; on
/// basis words Δ is extended multiplicatively and S anti-multiplicatively.
pub struct HopfAlgebra {
    pub alg: FinBasisAlgebra,
    pub delta_gen: Vec<Tensor>,
    pub antipode_gen: Vec<SparseVec>,
    pub grouplikes: Vec<Letter>,
    /// Defining relations checked for well-definedness. When empty the check
    /// falls back to multiplicativity on all (generator, basis) pairs.
    pub relations: Vec<NcPoly>,
    eps_basis: Vec<Fe>,
    delta_memo: Vec<OnceLock<Tensor>>,
    antipode_memo: Vec<OnceLock<SparseVec>>,
}

impl std::fmt::Debug for HopfAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "HopfAlgebra({:?})", self.alg)
    }
}

impl HopfAlgebra {
    pub fn new(
        alg: FinBasisAlgebra,
        delta_gen: Vec<Tensor>,
        eps_gen: Vec<Fe>,
        antipode_gen: Vec<SparseVec>,
        grouplikes: Vec<Letter>,
    ) -> HopfAlgebra {
        assert_eq!(delta_gen.len(), alg.ngens());
        assert_eq!(antipode_gen.len(), alg.ngens());
        let alg = alg.with_counit(eps_gen);
        let relations = alg.presentation.as_ref().map(|p| p.relations.clone()).unwrap_or_default();
        let eps_basis = alg.counit_basis();
        let n = alg.dim();
        HopfAlgebra {
            alg,
            delta_gen,
            antipode_gen,
            grouplikes,
            relations,
            eps_basis,
            delta_memo: (0..n).map(|_| OnceLock::new()).collect(),
            antipode_memo: (0..n).map(|_| OnceLock::new()).collect(),
        }
    }

    pub fn with_relations(mut self, rels: Vec<NcPoly>) -> Self {
        self.relations = rels;
        self
    }

    pub fn with_antipode(mut self, antipode_gen: Vec<SparseVec>) -> Self {
        self.antipode_gen = antipode_gen;
        self.antipode_memo = (0..self.dim()).map(|_| OnceLock::new()).collect();
        self
    }

    pub fn field(&self) -> &Field {
        &self.alg.field
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn name(&self) -> &str {
        &self.alg.name
    }

    pub fn eps_basis(&self) -> &[Fe] {
        &self.eps_basis
    }

    pub fn counit(&self, v: &SparseVec) -> Fe {
        v.dot_dense(self.field(), &self.eps_basis)
    }

    /// Δ of a word in the generators.
    pub fn delta_word(&self, w: &[Letter]) -> Tensor {
        let mut t = Tensor::single(0, 0, Fe::ONE);
        for &x in w.iter().rev() {
            t = tensor_mul(&self.alg, &self.alg, &self.delta_gen[x as usize], &t);
            if t.is_zero() {
                break;
            }
        }
        t
    }

    /// Δ of basis element `b`, memoized through the suffix of its word.
    pub fn delta_basis(&self, b: u32) -> &Tensor {
        self.delta_memo[b as usize].get_or_init(|| {
            let w = self.alg.word(b).clone();
            if w.is_empty() {
                return Tensor::single(0, 0, Fe::ONE);
            }
            let rest = Word::from_slice(&w.0[1..]);
            match self.alg.index_of(&rest) {
                Some(r) => tensor_mul(&self.alg, &self.alg, &self.delta_gen[w.0[0] as usize], self.delta_basis(r)),
                None => self.delta_word(&w.0),
            }
        })
    }

    pub fn delta(&self, v: &SparseVec) -> Tensor {
        let field = self.field();
        let mut acc: FxHashMap<(u32, u32), Fe> = FxHashMap::default();
        for &(b, c) in &v.0 {
            for &(k, x) in &self.delta_basis(b).0 {
                let e = acc.entry(k).or_insert(Fe::ZERO);
                *e = field.mul_add(*e, x, c);
            }
        }
        Tensor::from_map(acc)
    }

    pub fn delta_poly(&self, p: &NcPoly) -> Tensor {
        let field = self.field();
        let mut acc = Tensor::zero();
        for (w, c) in p.terms() {
            acc = acc.add_scaled(field, &self.delta_word(&w.0), *c);
        }
        acc
    }

    pub fn antipode_word(&self, w: &[Letter]) -> SparseVec {
        let mut acc = self.alg.unit();
        for &x in w {
            acc = self.alg.mul(&self.antipode_gen[x as usize], &acc);
            if acc.is_zero() {
                break;
            }
        }
        acc
    }

    pub fn antipode_basis(&self, b: u32) -> &SparseVec {
        self.antipode_memo[b as usize].get_or_init(|| {
            let w = self.alg.word(b).clone();
            if w.is_empty() {
                return self.alg.unit();
            }
            let rest = Word::from_slice(&w.0[1..]);
            match self.alg.index_of(&rest) {
                Some(r) => self.alg.mul(self.antipode_basis(r), &self.antipode_gen[w.0[0] as usize]),
                None => self.antipode_word(&w.0),
            }
        })
    }

    pub fn antipode(&self, v: &SparseVec) -> SparseVec {
        let field = self.field();
        let mut out = SparseVec::zero();
        for &(b, c) in &v.0 {
            out = out.add_scaled(field, self.antipode_basis(b), c);
        }
        out
    }

    pub fn antipode_map(&self) -> LinearMap {
        LinearMap::new("S", self.dim(), (0..self.dim() as u32).map(|b| self.antipode_basis(b).clone()).collect())
    }

    fn eps_word(&self, w: &[Letter]) -> Fe {
        let f = self.field();
        w.iter().fold(Fe::ONE, |acc, &x| f.mul(acc, self.alg.counit_gen[x as usize]))
    }

    fn gen_name(&self, x: Letter) -> &str {
        &self.alg.gen_names[x as usize]
    }

    /// Δ, ε, S annihilate every defining relation, or (without relations) are
    /// multiplicative on all (generator, basis element) pairs.
    pub fn check_well_defined(&self) -> Check {
        let name = "well-defined";
        let f = self.field();
        if !self.relations.is_empty() {
            for r in &self.relations {
                let rs = self.alg.presentation.as_ref().map_or_else(|| format!("{:?}", r), |p| p.render(r));
                if !self.delta_poly(r).is_zero() {
                    return Check::fail(name, format!("Δ does not vanish on relation {rs}"));
                }
                let e = f.sum(r.terms().iter().map(|(w, c)| f.mul(*c, self.eps_word(&w.0))));
                if !e.is_zero() {
                    return Check::fail(name, format!("ε does not vanish on relation {rs}"));
                }
                let mut s = SparseVec::zero();
                for (w, c) in r.terms() {
                    s = s.add_scaled(f, &self.antipode_word(&w.0), *c);
                }
                if !s.is_zero() {
                    return Check::fail(name, format!("S does not vanish on relation {rs}"));
                }
            }
            return Check::pass(name);
        }
        for x in 0..self.alg.ngens() as Letter {
            for b in 0..self.dim() as u32 {
                let xb = &self.alg.left_table(x)[b as usize];
                let lhs = self.delta(xb);
                let rhs = tensor_mul(&self.alg, &self.alg, &self.delta_gen[x as usize], self.delta_basis(b));
                if lhs != rhs {
                    return Check::fail(name, format!("Δ({}·{}) ≠ Δ({0})Δ({1})", self.gen_name(x), self.alg.render_basis(b)));
                }
                if self.counit(xb) != f.mul(self.alg.counit_gen[x as usize], self.eps_basis[b as usize]) {
                    return Check::fail(name, format!("ε not multiplicative at ({}, {})", self.gen_name(x), self.alg.render_basis(b)));
                }
                let s = self.antipode(xb);
                let t = self.alg.mul(self.antipode_basis(b), &self.antipode_gen[x as usize]);
                if s != t {
                    return Check::fail(name, format!("S not anti-multiplicative at ({}, {})", self.gen_name(x), self.alg.render_basis(b)));
                }
            }
        }
        Check::pass(name)
    }

    fn coassoc_at(&self, d: &Tensor) -> bool {
        let f = self.field();
        let mut lhs = Triple::default();
        let mut rhs = Triple::default();
        for &((i, j), c) in &d.0 {
            for &((a, b), x) in &self.delta_basis(i).0 {
                triple_add(f, &mut lhs, (a, b, j), f.mul(c, x));
            }
            for &((a, b), x) in &self.delta_basis(j).0 {
                triple_add(f, &mut rhs, (i, a, b), f.mul(c, x));
            }
        }
        triple_eq(&lhs, &rhs)
    }

    fn counit_at(&self, d: &Tensor, v: &SparseVec) -> bool {
        let f = self.field();
        let mut l = Vec::new();
        let mut r = Vec::new();
        for &((i, j), c) in &d.0 {
            l.push((j, f.mul(c, self.eps_basis[i as usize])));
            r.push((i, f.mul(c, self.eps_basis[j as usize])));
        }
        SparseVec::from_pairs(f, l) == *v && SparseVec::from_pairs(f, r) == *v
    }

    fn antipode_at(&self, d: &Tensor, eps: Fe) -> bool {
        let f = self.field();
        let target = SparseVec::single(0, eps);
        let mut l = SparseVec::zero();
        let mut r = SparseVec::zero();
        for &((i, j), c) in &d.0 {
            l = l.add_scaled(f, &self.alg.mul(self.antipode_basis(i), &SparseVec::unit(j)), c);
            r = r.add_scaled(f, &self.alg.mul(&SparseVec::unit(i), self.antipode_basis(j)), c);
        }
        l == target && r == target
    }

    pub fn check_coassociative(&self) -> Check {
        for x in 0..self.alg.ngens() as Letter {
            if !self.coassoc_at(&self.delta_gen[x as usize]) {
                return Check::fail("coassociative", format!("generator {}", self.gen_name(x)));
            }
        }
        Check::pass("coassociative")
    }

    pub fn check_counit(&self) -> Check {
        for x in 0..self.alg.ngens() as Letter {
            if !self.counit_at(&self.delta_gen[x as usize], &self.alg.gen_vec(x)) {
                return Check::fail("counit", format!("generator {}", self.gen_name(x)));
            }
        }
        Check::pass("counit")
    }

    pub fn check_antipode(&self) -> Check {
        for x in 0..self.alg.ngens() as Letter {
            if !self.antipode_at(&self.delta_gen[x as usize], self.alg.counit_gen[x as usize]) {
                return Check::fail("antipode", format!("generator {}", self.gen_name(x)));
            }
        }
        Check::pass("antipode")
    }

    pub fn check_grouplikes(&self) -> Check {
        let f = self.field();
        for &g in &self.grouplikes {
            let gv = self.alg.gen_vec(g);
            let ok = self.delta(&gv) == Tensor::outer(f, &gv, &gv)
                && self.alg.counit_gen[g as usize] == Fe::ONE
                && self.alg.mul(&self.antipode_gen[g as usize], &gv) == self.alg.unit();
            if !ok {
                return Check::fail("grouplikes", format!("{} is not grouplike", self.gen_name(g)));
            }
        }
        Check::pass("grouplikes")
    }

    /// The four generator-level checks plus consistency of declared grouplikes.
    pub fn check_hopf(&self) -> Report {
        let mut r = Report::default();
        r.push(self.check_well_defined());
        r.push(self.check_coassociative());
        r.push(self.check_counit());
        r.push(self.check_antipode());
        r.push(self.check_grouplikes());
        r
    }

    /// Axioms on every basis element; for small algebras as a cross-check.
    pub fn check_hopf_exhaustive(&self) -> Report {
        let mut r = Report::default();
        let mut bad: [Option<u32>; 3] = [None; 3];
        for b in 0..self.dim() as u32 {
            let d = self.delta_basis(b);
            if bad[0].is_none() && !self.coassoc_at(d) {
                bad[0] = Some(b);
            }
            if bad[1].is_none() && !self.counit_at(d, &SparseVec::unit(b)) {
                bad[1] = Some(b);
            }
            if bad[2].is_none() && !self.antipode_at(d, self.eps_basis[b as usize]) {
                bad[2] = Some(b);
            }
        }
        for (k, name) in ["coassociative (all basis)", "counit (all basis)", "antipode (all basis)"].iter().enumerate() {
            r.push(match bad[k] {
                None => Check::pass(*name),
                Some(b) => Check::fail(*name, format!("basis element {}", self.alg.render_basis(b))),
            });
        }
        r
    }

    /// ε∘S = ε and Δ∘S = (S⊗S)∘flip∘Δ on all basis elements.
    pub fn check_antipode_anticoalgebra(&self) -> Check {
        let f = self.field();
        for b in 0..self.dim() as u32 {
            let s = self.antipode_basis(b);
            if self.counit(s) != self.eps_basis[b as usize] {
                return Check::fail("antipode anti-coalgebra", format!("ε∘S at {}", self.alg.render_basis(b)));
            }
            let lhs = self.delta(s);
            let rhs = self.delta_basis(b).flip().map(f, |i| self.antipode_basis(i).clone(), |j| self.antipode_basis(j).clone());
            if lhs != rhs {
                return Check::fail("antipode anti-coalgebra", format!("Δ∘S at {}", self.alg.render_basis(b)));
            }
        }
        Check::pass("antipode anti-coalgebra")
    }

    pub fn is_cocommutative(&self) -> bool {
        (0..self.alg.ngens()).all(|x| self.delta_gen[x].flip() == self.delta_gen[x])
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.alg.ngens() as Letter;
        (0..n).all(|x| {
            (0..n).all(|y| {
                let xy = self.alg.left_mul_gen(x, &self.alg.gen_vec(y));
                let yx = self.alg.left_mul_gen(y, &self.alg.gen_vec(x));
                xy == yx
            })
        })
    }
}

/// Linear map given by the images of the source basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    pub name: String,
    pub src_dim: usize,
    pub dst_dim: usize,
    pub cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn new(name: &str, dst_dim: usize, cols: Vec<SparseVec>) -> LinearMap {
        LinearMap { name: name.to_string(), src_dim: cols.len(), dst_dim, cols }
    }

    pub fn identity(n: usize) -> LinearMap {
        LinearMap::new("id", n, (0..n as u32).map(SparseVec::unit).collect())
    }

    /// x ↦ ε(x)·1
    pub fn unit_counit(src: &HopfAlgebra, dst_dim: usize) -> LinearMap {
        LinearMap::new("uε", dst_dim, src.eps_basis().iter().map(|&e| SparseVec::single(0, e)).collect())
    }

    pub fn apply(&self, field: &Field, v: &SparseVec) -> SparseVec {
        let mut acc = finhopf_core::Accumulator::new(field, self.dst_dim);
        for &(i, c) in &v.0 {
            acc.add_vec(&self.cols[i as usize], c);
        }
        acc.drain()
    }

    /// self ∘ other
    pub fn compose(&self, field: &Field, other: &LinearMap) -> LinearMap {
        LinearMap {
            name: format!("{}∘{}", self.name, other.name),
            src_dim: other.src_dim,
            dst_dim: self.dst_dim,
            cols: other.cols.iter().map(|c| self.apply(field, c)).collect(),
        }
    }

    pub fn rank(&self, field: &Field) -> usize {
        finhopf_core::linalg::sparse_rank(field, &self.cols)
    }

    /// Algebra map determined by generator images, extended along basis words.
    pub fn algebra_map(name: &str, src: &FinBasisAlgebra, dst: &FinBasisAlgebra, images: &[SparseVec]) -> LinearMap {
        assert_eq!(images.len(), src.ngens());
        let mut cols: Vec<SparseVec> = Vec::with_capacity(src.dim());
        let mut memo: FxHashMap<u32, SparseVec> = FxHashMap::default();
        for b in 0..src.dim() as u32 {
            cols.push(word_image(src, dst, images, b, &mut memo, false));
        }
        LinearMap::new(name, dst.dim(), cols)
    }

    /// Anti-algebra map determined by generator images.
    pub fn anti_algebra_map(name: &str, src: &FinBasisAlgebra, dst: &FinBasisAlgebra, images: &[SparseVec]) -> LinearMap {
        let mut memo: FxHashMap<u32, SparseVec> = FxHashMap::default();
        let cols = (0..src.dim() as u32).map(|b| word_image(src, dst, images, b, &mut memo, true)).collect();
        LinearMap::new(name, dst.dim(), cols)
    }
}

fn word_image(
    src: &FinBasisAlgebra,
    dst: &FinBasisAlgebra,
    images: &[SparseVec],
    b: u32,
    memo: &mut FxHashMap<u32, SparseVec>,
    anti: bool,
) -> SparseVec {
    if let Some(v) = memo.get(&b) {
        return v.clone();
    }
    let w = src.word(b).clone();
    let v = if w.is_empty() {
        dst.unit()
    } else {
        let rest = Word::from_slice(&w.0[1..]);
        let tail = match src.index_of(&rest) {
            Some(r) => word_image(src, dst, images, r, memo, anti),
            None => {
                let mut acc = dst.unit();
                for &x in rest.0.iter().rev() {
                    acc = if anti { dst.mul(&acc, &images[x as usize]) } else { dst.mul(&images[x as usize], &acc) };
                }
                acc
            }
        };
        let head = &images[w.0[0] as usize];
        if anti {
            dst.mul(&tail, head)
        } else {
            dst.mul(head, &tail)
        }
    };
    memo.insert(b, v.clone());
    v
}

/// f(1) = 1 and f(x·b) = f(x)f(b) for every generator x and basis element b.
/// Since the generators generate, this is equivalent to multiplicativity.
pub fn is_algebra_map(f: &LinearMap, src: &FinBasisAlgebra, dst: &FinBasisAlgebra) -> Check {
    let name = format!("{} algebra map", f.name);
    let field = &src.field;
    if f.cols[0] != dst.unit() {
        return Check::fail(name, "f(1) ≠ 1");
    }
    for x in 0..src.ngens() as Letter {
        let fx = f.apply(field, &src.gen_vec(x));
        for b in 0..src.dim() as u32 {
            let lhs = f.apply(field, &src.left_table(x)[b as usize]);
            let rhs = dst.mul(&fx, &f.cols[b as usize]);
            if lhs != rhs {
                return Check::fail(name, format!("f({}·{}) ≠ f({0})f({1})", src.gen_names[x as usize], src.render_basis(b)));
            }
        }
    }
    Check::pass(name)
}

/// (f⊗f)Δ = Δf and ε∘f = ε on the given source basis elements.
pub fn is_coalgebra_map_on(
    f: &LinearMap,
    src: &HopfAlgebra,
    dst: &HopfAlgebra,
    basis: impl Iterator<Item = u32>,
) -> Check {
    let name = format!("{} coalgebra map", f.name);
    let field = src.field();
    for b in basis {
        let fb = &f.cols[b as usize];
        if dst.counit(fb) != src.eps_basis()[b as usize] {
            return Check::fail(name, format!("ε∘f ≠ ε at {}", src.alg.render_basis(b)));
        }
        let lhs = src.delta_basis(b).map(field, |i| f.cols[i as usize].clone(), |j| f.cols[j as usize].clone());
        let rhs = dst.delta(fb);
        if lhs != rhs {
            return Check::fail(name, format!("(f⊗f)Δ ≠ Δf at {}", src.alg.render_basis(b)));
        }
    }
    Check::pass(name)
}

pub fn is_coalgebra_map(f: &LinearMap, src: &HopfAlgebra, dst: &HopfAlgebra) -> Check {
    is_coalgebra_map_on(f, src, dst, 0..src.dim() as u32)
}

/// Convolution f * g for f, g: C → A.
pub fn convolve(f: &LinearMap, g: &LinearMap, c: &HopfAlgebra, a: &FinBasisAlgebra) -> LinearMap {
    let cols = (0..c.dim() as u32)
        .map(|b| c.delta_basis(b).contract(a, |i| f.cols[i as usize].clone(), |j| g.cols[j as usize].clone()))
        .collect();
    LinearMap::new(&format!("{}*{}", f.name, g.name), a.dim(), cols)
}

/// Is f * g = g * f = uε on the listed basis elements of C.
pub fn is_convolution_inverse_on(
    f: &LinearMap,
    g: &LinearMap,
    c: &HopfAlgebra,
    a: &FinBasisAlgebra,
    basis: impl Iterator<Item = u32>,
) -> Check {
    let name = format!("{} convolution inverse of {}", g.name, f.name);
    for b in basis {
        let d = c.delta_basis(b);
        let target = SparseVec::single(0, c.eps_basis()[b as usize]);
        let fg = d.contract(a, |i| f.cols[i as usize].clone(), |j| g.cols[j as usize].clone());
        let gf = d.contract(a, |i| g.cols[i as usize].clone(), |j| f.cols[j as usize].clone());
        if fg != target || gf != target {
            return Check::fail(name, format!("at {}", c.alg.render_basis(b)));
        }
    }
    Check::pass(name)
}

/// Solve f * g = uε for g. The equations for basis element c involve g on the
/// second legs of Δ(c); they are solved strongly connected component by
/// component in dependency order. Returns None when f is not invertible.
pub fn convolution_inverse(f: &LinearMap, c: &HopfAlgebra, a: &FinBasisAlgebra) -> Result<Option<LinearMap>> {
    let field = &a.field;
    let n = c.dim();
    let mut graph: DiGraph<u32, ()> = DiGraph::with_capacity(n, n * 4);
    let nodes: Vec<_> = (0..n as u32).map(|i| graph.add_node(i)).collect();
    for b in 0..n as u32 {
        let mut seen = rustc_hash::FxHashSet::default();
        for &((_, j), _) in &c.delta_basis(b).0 {
            if seen.insert(j) {
                graph.add_edge(nodes[b as usize], nodes[j as usize], ());
            }
        }
    }
    let sccs = petgraph::algo::tarjan_scc(&graph);
    let mut g: Vec<Option<SparseVec>> = vec![None; n];
    let mut inverse_cache: FxHashMap<SparseVec, Option<SparseVec>> = FxHashMap::default();
    for comp in sccs {
        let members: Vec<u32> = comp.iter().map(|&ni| graph[ni]).collect();
        let pos: FxHashMap<u32, usize> = members.iter().enumerate().map(|(k, &m)| (m, k)).collect();
        // coefficient elements M[c][j] and right-hand sides
        let mut coef: Vec<FxHashMap<usize, SparseVec>> = vec![FxHashMap::default(); members.len()];
        let mut rhs: Vec<SparseVec> = Vec::with_capacity(members.len());
        for (k, &b) in members.iter().enumerate() {
            let mut r = SparseVec::single(0, c.eps_basis()[b as usize]);
            for &((i, j), d) in &c.delta_basis(b).0 {
                let fi = &f.cols[i as usize];
                match pos.get(&j) {
                    Some(&jk) => {
                        let e = coef[k].entry(jk).or_default();
                        *e = e.add_scaled(field, fi, d);
                    }
                    None => {
                        let gj = g[j as usize].as_ref().expect("dependency solved first");
                        r = r.sub(field, &a.mul(fi, gj).scale(field, d));
                    }
                }
            }
            rhs.push(r);
        }
        if members.len() == 1 {
            let m = coef[0].remove(&0).unwrap_or_default();
            let sol = if m.len() == 1 && m.0[0].0 == 0 {
                Some(rhs[0].scale(field, field.inv(m.0[0].1)))
            } else {
                let inv = inverse_cache.entry(m.clone()).or_insert_with(|| a.inverse(&m)).clone();
                inv.map(|mi| a.mul(&mi, &rhs[0]))
            };
            match sol {
                Some(s) => g[members[0] as usize] = Some(s),
                None => return Ok(None),
            }
            continue;
        }
        let da = a.dim();
        let unknowns = members.len() * da;
        if unknowns > 200_000 {
            return Err(CoreError::Budget(format!("convolution system with {unknowns} unknowns")));
        }
        // column (j, e) holds M[c][j]·e stacked over equations c
        let mut solver = ColumnSolver::new(field, unknowns);
        for jk in 0..members.len() {
            for e in 0..da as u32 {
                let mut col = Vec::new();
                for (k, row) in coef.iter().enumerate() {
                    if let Some(m) = row.get(&jk) {
                        for &(idx, x) in &a.mul(m, &SparseVec::unit(e)).0 {
                            col.push(((k * da) as u32 + idx, x));
                        }
                    }
                }
                solver.push(&SparseVec::from_pairs(field, col));
            }
        }
        let mut b = Vec::new();
        for (k, r) in rhs.iter().enumerate() {
            for &(idx, x) in &r.0 {
                b.push(((k * da) as u32 + idx, x));
            }
        }
        let Some(sol) = solver.solve(&SparseVec::from_pairs(field, b)) else {
            return Ok(None);
        };
        for (jk, &m) in members.iter().enumerate() {
            let part: Vec<(u32, Fe)> = sol
                .0
                .iter()
                .filter(|(i, _)| (*i as usize) / da == jk)
                .map(|&(i, x)| (i - (jk * da) as u32, x))
                .collect();
            g[m as usize] = Some(SparseVec::from_pairs(field, part));
        }
    }
    let cols: Vec<SparseVec> = g.into_iter().map(|v| v.unwrap_or_default()).collect();
    let inv = LinearMap::new(&format!("{}⁻¹", f.name), a.dim(), cols);
    // a one-sided inverse in the finite-dimensional convolution algebra is two-sided
    Ok(Some(inv))
}

/// Dual Hopf algebra A*. The basis is the dual basis with e^1 replaced by the
/// unit ε so that index 0 is the unit; every other basis element is a generator.
pub fn dual_hopf(h: &HopfAlgebra, cap: usize) -> Result<HopfAlgebra> {
    let n = h.dim();
    if n > cap {
        return Err(CoreError::Budget(format!("dual of dimension {n} exceeds cap {cap}")));
    }
    let f = h.field().clone();
    let eps: Vec<Fe> = h.eps_basis().to_vec();
    // product of dual basis: e^i e^j = Σ_k Δ_k[i,j] e^k
    let mut prod: FxHashMap<(u32, u32), Vec<(u32, Fe)>> = FxHashMap::default();
    for k in 0..n as u32 {
        for &((i, j), c) in &h.delta_basis(k).0 {
            prod.entry((i, j)).or_default().push((k, c));
        }
    }
    let old_mul = |i: u32, j: u32| -> SparseVec {
        prod.get(&(i, j)).map_or_else(SparseVec::zero, |v| SparseVec::from_pairs(&f, v.clone()))
    };
    // coordinates: new f_0 = Σ ε_k e^k, f_i = e^i (i ≥ 1)
    let to_new = |v: &SparseVec| -> SparseVec {
        let v0 = v.get(0);
        let mut pairs: Vec<(u32, Fe)> = v.0.to_vec();
        if !v0.is_zero() {
            for (i, &e) in eps.iter().enumerate().skip(1) {
                if !e.is_zero() {
                    pairs.push((i as u32, f.neg(f.mul(v0, e))));
                }
            }
        }
        SparseVec::from_pairs(&f, pairs)
    };
    let old_of_new = |a: u32| -> SparseVec {
        if a == 0 {
            SparseVec::from_dense(&eps)
        } else {
            SparseVec::unit(a)
        }
    };
    let bilinear = |x: &SparseVec, y: &SparseVec| -> SparseVec {
        let mut out = SparseVec::zero();
        for &(i, a) in &x.0 {
            for &(j, b) in &y.0 {
                out = out.add_scaled(&f, &old_mul(i, j), f.mul(a, b));
            }
        }
        out
    };
    let labels: Vec<String> = (0..n as u32)
        .map(|i| if i == 0 { "ε".to_string() } else { format!("e[{}]", h.alg.render_basis(i)) })
        .collect();
    let alg = FinBasisAlgebra::from_structure_constants(&format!("{}*", h.name()), &f, labels, |a, b| {
        to_new(&bilinear(&old_of_new(a), &old_of_new(b)))
    });
    // Δ(e^k) = Σ m_ij^k e^i ⊗ e^j from the products in A
    let mut coprod: Vec<Vec<((u32, u32), Fe)>> = vec![Vec::new(); n];
    for i in 0..n as u32 {
        for j in 0..n as u32 {
            for &(k, c) in &h.alg.mul_basis(i, j).0 {
                coprod[k as usize].push(((i, j), c));
            }
        }
    }
    let conv: Vec<SparseVec> = (0..n as u32).map(|i| to_new(&SparseVec::unit(i))).collect();
    let delta_gen: Vec<Tensor> = (1..n)
        .map(|k| Tensor::from_pairs(&f, coprod[k].clone()).map(&f, |i| conv[i as usize].clone(), |j| conv[j as usize].clone()))
        .collect();
    // S*(e^i) = Σ_j S_ij e^j with S(e_j) = Σ_i S_ij e_i
    let mut sdual: Vec<Vec<(u32, Fe)>> = vec![Vec::new(); n];
    for j in 0..n as u32 {
        for &(i, c) in &h.antipode_basis(j).0 {
            sdual[i as usize].push((j, c));
        }
    }
    let antipode_gen = (1..n).map(|i| to_new(&SparseVec::from_pairs(&f, sdual[i].clone()))).collect();
    let eps_gen = vec![Fe::ZERO; n - 1];
    Ok(HopfAlgebra::new(alg, delta_gen, eps_gen, antipode_gen, Vec::new()))
}

/// The evaluation map A → A** is a bijective algebra and coalgebra map.
pub fn double_dual_check(h: &HopfAlgebra) -> Result<Check> {
    let d = dual_hopf(h, 2000)?;
    let dd = dual_hopf(&d, 2000)?;
    let f = h.field();
    // Φ(e_k) = Σ_a f_a(e_k) F_a with f_0 = ε and f_a = e^a
    let cols = (0..h.dim() as u32)
        .map(|k| {
            let mut v = vec![(0u32, h.eps_basis()[k as usize])];
            if k > 0 {
                v.push((k, Fe::ONE));
            }
            SparseVec::from_pairs(f, v)
        })
        .collect();
    let phi = LinearMap::new("ev", dd.dim(), cols);
    let alg = is_algebra_map(&phi, &h.alg, &dd.alg);
    if !alg.pass {
        return Ok(alg);
    }
    let coalg = is_coalgebra_map(&phi, h, &dd);
    if !coalg.pass {
        return Ok(coalg);
    }
    if phi.rank(f) != h.dim() {
        return Ok(Check::fail("double dual", "evaluation map not bijective"));
    }
    Ok(Check::pass("double dual"))
}

/// Group algebra of Z/n_1 × ... × Z/n_k on generators g1..gk.
pub fn group_algebra(field: &Field, orders: &[u32]) -> Result<HopfAlgebra> {
    use finhopf_core::{Generator, Presentation};
    let names: Vec<String> = (1..=orders.len()).map(|i| format!("g{i}")).collect();
    let mut pres = Presentation::new("group algebra", field, names.iter().map(Generator::new).collect());
    for (i, &n) in orders.iter().enumerate() {
        pres.push_str(&format!("{}^{n} - 1", names[i]))?;
        for j in 0..i {
            pres.push_str(&format!("{0}*{1} - {1}*{0}", names[i], names[j]))?;
        }
    }
    pres.expected_dim = Some(orders.iter().product::<u32>() as usize);
    let alg = FinBasisAlgebra::from_presentation(&pres, None)?;
    let k = orders.len();
    let delta = (0..k as Letter).map(|x| {
        let i = alg.index_of(&Word::letter(x)).unwrap();
        Tensor::single(i, i, Fe::ONE)
    });
    let delta: Vec<Tensor> = delta.collect();
    let antipode = (0..k as Letter).map(|x| alg.eval_word(&Word::letter(x).pow(orders[x as usize] as usize - 1).0)).collect();
    Ok(HopfAlgebra::new(alg, delta, vec![Fe::ONE; k], antipode, (0..k as Letter).collect()))
}

#[derive(Deserialize)]
struct HopfFile {
    #[serde(flatten)]
    pres: PresFile,
    coalgebra: HashMap<String, String>,
    #[serde(default)]
    counit: HashMap<String, i64>,
    antipode: HashMap<String, String>,
    #[serde(default)]
    grouplikes: Vec<String>,
}

/// Hopf algebra from a presentation file with `[coalgebra]`, `[counit]` and
/// `[antipode]` tables keyed by generator name, e.g. `x = "x@1 + g@x"`.
/// Missing counit entries default to 1 for grouplikes and 0 otherwise.
pub fn hopf_from_toml(text: &str, bound: Option<u32>) -> Result<HopfAlgebra> {
    let file: HopfFile = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
    let scalars_def = file.pres.scalars.clone();
    let pres = file.pres.into_presentation()?;
    let alg = FinBasisAlgebra::from_presentation(&pres, bound)?;
    let field = pres.field.clone();
    let mut scalars = eval_scalars(&field, &scalars_def)?;
    if field.m() > 1 {
        scalars.entry("t".into()).or_insert(field.generator_t());
    }
    let names = pres.names();
    let scope = Scope { field: &field, generators: &names, scalars: &scalars };
    let mut delta = Vec::new();
    let mut anti = Vec::new();
    let mut eps = Vec::new();
    let grouplikes: Vec<Letter> = file
        .grouplikes
        .iter()
        .map(|g| pres.letter(g).ok_or_else(|| CoreError::Presentation(format!("unknown grouplike {g}"))))
        .collect::<Result<_>>()?;
    for (x, name) in names.iter().enumerate() {
        let src = file.coalgebra.get(name).ok_or_else(|| CoreError::Presentation(format!("no coalgebra entry for {name}")))?;
        let mut t = Tensor::zero();
        for (a, b) in parse_tensor(src, &scope)? {
            t = t.add_scaled(&field, &Tensor::outer(&field, &alg.eval_poly(&a), &alg.eval_poly(&b)), Fe::ONE);
        }
        delta.push(t);
        let s = file.antipode.get(name).ok_or_else(|| CoreError::Presentation(format!("no antipode entry for {name}")))?;
        anti.push(alg.eval_poly(&finhopf_core::expr::parse_poly(s, &scope)?));
        let default = if grouplikes.contains(&(x as Letter)) { 1 } else { 0 };
        eps.push(field.from_i64(*file.counit.get(name).unwrap_or(&default)));
    }
    Ok(HopfAlgebra::new(alg, delta, eps, anti, grouplikes))
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const JORDAN_BOSONIZATION: &str = r#"
name = "jordan-bosonization"
expected_dimension = 27
grouplikes = ["g"]
[field]
p = 3
[generators]
names = ["x", "y", "g"]
[relations]
list = ["y*x - x*y + 1/2*x^2", "x^3", "y^3", "g^3 - 1", "g*x - x*g", "g*y - y*g - x*g"]
[coalgebra]
x = "x@1 + g@x"
y = "y@1 + g@y"
g = "g@g"
[antipode]
x = "-g^2*x"
y = "-g^2*y"
g = "g^2"
"#;

    #[test]
    fn group_algebra_passes() {
        let f = Field::prime(3).unwrap();
        let h = group_algebra(&f, &[3]).unwrap();
        assert!(h.check_hopf().all_pass());
        assert!(h.check_hopf_exhaustive().all_pass());
    }

    #[test]
    fn jordan_bosonization_passes() {
        let h = hopf_from_toml(JORDAN_BOSONIZATION, None).unwrap();
        assert_eq!(h.dim(), 27);
        let r = h.check_hopf();
        assert!(r.all_pass(), "{r}");
        assert!(h.check_hopf_exhaustive().all_pass());
        assert!(h.check_antipode_anticoalgebra().pass);
    }

    #[test]
    fn delta_of_x_squared() {
        let h = hopf_from_toml(JORDAN_BOSONIZATION, None).unwrap();
        let a = &h.alg;
        let x2 = a.eval_poly(&a.presentation.as_ref().unwrap().parse("x^2", &HashMap::new()).unwrap());
        let d = h.delta(&x2);
        let p = |s: &str| a.eval_poly(&a.presentation.as_ref().unwrap().parse(s, &HashMap::new()).unwrap());
        let f = &a.field;
        let expect = Tensor::outer(f, &p("x^2"), &p("1"))
            .add_scaled(f, &Tensor::outer(f, &p("x*g"), &p("x")), Fe(2))
            .add_scaled(f, &Tensor::outer(f, &p("g^2"), &p("x^2")), Fe::ONE);
        assert_eq!(d, expect);
    }

    #[test]
    fn corrupted_delta_fails_well_definedness() {
        let bad = JORDAN_BOSONIZATION.replace("y = \"y@1 + g@y\"", "y = \"y@1\"");
        let h = hopf_from_toml(&bad, None).unwrap();
        let c = h.check_well_defined();
        assert!(!c.pass);
        let w = c.witness.unwrap();
        assert!(w.contains("Δ") && w.contains("y"), "{w}");
    }

    #[test]
    fn convolution_inverse_of_identity_is_antipode() {
        let h = hopf_from_toml(JORDAN_BOSONIZATION, None).unwrap();
        let id = LinearMap::identity(h.dim());
        let inv = convolution_inverse(&id, &h, &h.alg).unwrap().unwrap();
        assert_eq!(inv.cols, h.antipode_map().cols);
        let ue = LinearMap::unit_counit(&h, h.dim());
        assert_eq!(convolution_inverse(&ue, &h, &h.alg).unwrap().unwrap().cols, ue.cols);
    }

    #[test]
    fn zero_map_not_invertible() {
        let f = Field::prime(3).unwrap();
        let h = group_algebra(&f, &[3]).unwrap();
        let z = LinearMap::new("0", 3, vec![SparseVec::zero(); 3]);
        assert!(convolution_inverse(&z, &h, &h.alg).unwrap().is_none());
    }

    #[test]
    fn dual_of_cyclic_group_algebra() {
        let f = Field::prime(3).unwrap();
        let h = group_algebra(&f, &[3]).unwrap();
        let d = dual_hopf(&h, 100).unwrap();
        assert!(d.check_hopf().all_pass());
        // e^1 = ε - e^g - e^{g²}, e^g, e^{g²} are orthogonal idempotents
        let a = &d.alg;
        let e1 = SparseVec::from_pairs(&f, vec![(0, Fe(1)), (1, Fe(2)), (2, Fe(2))]);
        let idem = [e1, SparseVec::unit(1), SparseVec::unit(2)];
        for (i, x) in idem.iter().enumerate() {
            for (j, y) in idem.iter().enumerate() {
                let p = a.mul(x, y);
                assert_eq!(p, if i == j { x.clone() } else { SparseVec::zero() });
            }
        }
        // the dual of a group algebra is not generated by grouplike data; the
        // convolution inverse still exists for the identity
        let inv = convolution_inverse(&LinearMap::identity(3), &d, &d.alg).unwrap().unwrap();
        assert_eq!(inv.cols, d.antipode_map().cols);
        assert!(double_dual_check(&h).unwrap().pass);
    }

    #[test]
    fn jordan_double_dual() {
        let h = hopf_from_toml(JORDAN_BOSONIZATION, None).unwrap();
        let d = dual_hopf(&h, 100).unwrap();
        let r = d.check_hopf();
        assert!(r.all_pass(), "{r}");
        assert!(double_dual_check(&h).unwrap().pass);
    }
}
