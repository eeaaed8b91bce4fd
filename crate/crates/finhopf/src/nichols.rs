//! Braided vector spaces of block-point type, their realizations over
//! (Z/f)^θ, the Nichols algebra presentations and bosonizations.
//!
//! Indexing is 0-based. Components 0..t are blocks (basis x_j, y_j), components
//! t..θ are points (basis x_h). Letters of the Nichols algebra follow the PBW
//! order x_1, y_1, ..., x_t, y_t, x_{t+1}, ..., x_θ.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use finhopf_core::presentation::{FieldSection, ScalarDef};
use finhopf_core::{
    CoreError, DenseMatrix, Fe, Field, FinBasisAlgebra, Generator, Letter, MonomialOrder, NcPoly, Presentation, Result,
    SparseVec, Word,
};
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::hopf::{HopfAlgebra, Tensor};

/// Integer lift of a ∈ F_p: the unique 𝒢 ∈ {1..p-1} with -𝒢 ≡ 2a, or 0 when a = 0.
pub fn ghost_from_a(a: i64, p: u32) -> u32 {
    let p = p as i64;
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    for r in (1 - p)..0 {
        if (r - 2 * a).rem_euclid(p) == 0 {
            return (-r) as u32;
        }
    }
    unreachable!("residue window covers every nonzero class")
}

/// All n with 0 ≤ n ≤ g componentwise, in lexicographic order.
pub fn ahz_lattice(g: &[u32]) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for &gi in g {
        let mut next = Vec::with_capacity(out.len() * (gi as usize + 1));
        for v in &out {
            for k in 0..=gi {
                let mut w = v.clone();
                w.push(k);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Data (𝔮, 𝐚): t blocks, θ - t points, a matrix 𝔮 with q_ii = 1 and
/// q_ij q_ji = 1, and a[h - t][j] ∈ F_p for each point h and block j.
#[derive(Clone, Debug)]
pub struct PaperData {
    pub field: Field,
    pub t: usize,
    pub theta: usize,
    pub q: Vec<Vec<Fe>>,
    pub a: Vec<Vec<u32>>,
}

impl PaperData {
    pub fn new(field: &Field, t: usize, theta: usize, q: Vec<Vec<Fe>>, a: Vec<Vec<u32>>) -> Result<PaperData> {
        let err = |s: String| Err(CoreError::Presentation(s));
        if t == 0 || t > theta {
            return err(format!("need 1 ≤ t ≤ θ, got t = {t}, θ = {theta}"));
        }
        if q.len() != theta || q.iter().any(|r| r.len() != theta) {
            return err("q must be θ×θ".into());
        }
        if a.len() != theta - t || a.iter().any(|r| r.len() != t) {
            return err("a must be (θ-t)×t".into());
        }
        for i in 0..theta {
            if q[i][i] != Fe::ONE {
                return err(format!("q_{0}{0} ≠ 1", i + 1));
            }
            for j in 0..theta {
                if q[i][j].is_zero() || field.mul(q[i][j], q[j][i]) != Fe::ONE {
                    return err(format!("q_{}{} q_{}{} ≠ 1", i + 1, j + 1, j + 1, i + 1));
                }
            }
        }
        let p = field.p();
        let a = a.into_iter().map(|r| r.into_iter().map(|x| x % p).collect()).collect();
        Ok(PaperData { field: field.clone(), t, theta, q, a })
    }

    pub fn trivial_q(theta: usize) -> Vec<Vec<Fe>> {
        vec![vec![Fe::ONE; theta]; theta]
    }

    /// One Jordan block.
    pub fn jordan(field: &Field) -> PaperData {
        PaperData::new(field, 1, 1, PaperData::trivial_q(1), Vec::new()).unwrap()
    }

    /// One block and one point with q_12 = q and ghost 𝒢.
    pub fn laestrygonian(field: &Field, q: Fe, ghost: u32) -> Result<PaperData> {
        let a = a_for_ghost(ghost, field.p())?;
        let qm = vec![vec![Fe::ONE, q], vec![field.inv(q), Fe::ONE]];
        PaperData::new(field, 1, 2, qm, vec![vec![a]])
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn npoints(&self) -> usize {
        self.theta - self.t
    }

    pub fn is_block(&self, k: usize) -> bool {
        k < self.t
    }

    /// 𝒢 as a (θ-t)×t matrix.
    pub fn ghost(&self) -> Vec<Vec<u32>> {
        self.a.iter().map(|r| r.iter().map(|&x| ghost_from_a(x as i64, self.p())).collect()).collect()
    }

    pub fn ghost_row(&self, h: usize) -> Vec<u32> {
        self.ghost()[h - self.t].clone()
    }

    /// The coefficient of x_ℓ in g_k·y_ℓ / q_kℓ: 1 on the block itself, a_kℓ from a point, 0 otherwise.
    pub fn a_entry(&self, k: usize, l: usize) -> Fe {
        if !self.is_block(l) {
            return Fe::ZERO;
        }
        if k == l {
            Fe::ONE
        } else if self.is_block(k) {
            Fe::ZERO
        } else {
            self.field.from_i64(self.a[k - self.t][l] as i64)
        }
    }

    pub fn is_q_trivial(&self) -> bool {
        self.q.iter().all(|r| r.iter().all(|&x| x == Fe::ONE))
    }

    /// lcm of the multiplicative orders of the q_ij.
    pub fn q_order(&self) -> u32 {
        let mut d = 1u32;
        for r in &self.q {
            for &x in r {
                let o = self.field.mult_order(x);
                d = d / gcd(d, o) * o;
            }
        }
        d
    }

    /// Smallest admissible f, namely p·d.
    pub fn min_f(&self) -> u32 {
        self.p() * self.q_order()
    }

    pub fn dim_v(&self) -> usize {
        self.theta + self.t
    }

    pub fn letter_x(&self, k: usize) -> Letter {
        if k < self.t {
            (2 * k) as Letter
        } else {
            (2 * self.t + k - self.t) as Letter
        }
    }

    pub fn letter_y(&self, j: usize) -> Letter {
        assert!(j < self.t);
        (2 * j + 1) as Letter
    }

    /// Component (block or point) of a letter.
    pub fn component(&self, x: Letter) -> usize {
        let x = x as usize;
        if x < 2 * self.t {
            x / 2
        } else {
            self.t + x - 2 * self.t
        }
    }

    pub fn is_y(&self, x: Letter) -> bool {
        (x as usize) < 2 * self.t && x % 2 == 1
    }

    pub fn names(&self) -> Vec<String> {
        let mut v = Vec::new();
        for j in 0..self.t {
            if self.theta == 1 {
                v.push("x".into());
                v.push("y".into());
            } else {
                v.push(format!("x{}", j + 1));
                v.push(format!("y{}", j + 1));
            }
        }
        for h in self.t..self.theta {
            v.push(format!("x{}", h + 1));
        }
        v
    }

    pub fn group_names(&self) -> Vec<String> {
        if self.theta == 1 {
            vec!["g".into()]
        } else {
            (1..=self.theta).map(|k| format!("g{k}")).collect()
        }
    }

    /// Bilinear form on Q = Z^{θ+t}: coordinates α_1..α_θ then β_1..β_t.
    pub fn bilinear(&self, gamma: &[i64], delta: &[i64]) -> Fe {
        let f = &self.field;
        let idx = |k: usize| if k < self.theta { k } else { k - self.theta };
        let mut r = Fe::ONE;
        for (i, &a) in gamma.iter().enumerate() {
            for (j, &b) in delta.iter().enumerate() {
                if a != 0 && b != 0 {
                    r = f.mul(r, f.pow(self.q[idx(i)][idx(j)], a * b));
                }
            }
        }
        r
    }

    /// Q-degree of щ_{h,n}.
    pub fn sch_degree(&self, h: usize, n: &[u32]) -> Vec<i64> {
        let mut d = vec![0i64; self.theta + self.t];
        d[h] = 1;
        for (j, &nj) in n.iter().enumerate() {
            d[self.theta + j] += nj as i64;
        }
        d
    }

    /// 𝐩_{h,ℓ;m,n}
    pub fn p_scalar(&self, h: usize, l: usize, m: &[u32], n: &[u32]) -> Fe {
        self.bilinear(&self.sch_degree(h, m), &self.sch_degree(l, n))
    }

    /// щ_{h,n} as iterated q-commutators: щ = y_j щ̃ - q щ̃ y_j with j the first
    /// nonzero entry of n and q = q_jh ∏_{i ≥ j} q_ji^{n_i}.
    pub fn sch_poly(&self, h: usize, n: &[u32]) -> NcPoly {
        let f = &self.field;
        let Some(j) = n.iter().position(|&x| x != 0) else {
            return NcPoly::letter(self.letter_x(h));
        };
        let mut nt = n.to_vec();
        nt[j] -= 1;
        let inner = self.sch_poly(h, &nt);
        let mut q = self.q[j][h];
        for (i, &ni) in n.iter().enumerate().skip(j) {
            q = f.mul(q, f.pow(self.q[j][i], ni as i64));
        }
        NcPoly::q_commutator(f, &NcPoly::letter(self.letter_y(j)), &inner, q)
    }

    /// (ad y_1)^{n_1} ⋯ (ad y_t)^{n_t} x_h with ordinary commutators.
    pub fn sch_poly_plain(&self, h: usize, n: &[u32]) -> NcPoly {
        let f = &self.field;
        let mut cur = NcPoly::letter(self.letter_x(h));
        for j in (0..self.t).rev() {
            for _ in 0..n[j] {
                cur = NcPoly::q_commutator(f, &NcPoly::letter(self.letter_y(j)), &cur, Fe::ONE);
            }
        }
        cur
    }

    /// Predicted dim 𝓑 = p^{2t + Σ_h |𝒜_h|}.
    pub fn nichols_dim_formula(&self) -> u64 {
        let e: usize = 2 * self.t + self.ghost().iter().map(|g| ahz_lattice(g).len()).sum::<usize>();
        (self.p() as u64).pow(e as u32)
    }

    /// The same data as an ab-triple: n_j = 2 on blocks, 1 on points; t_kℓ(y_ℓ) = a x_ℓ.
    pub fn to_ab_triple(&self) -> AbTriple {
        let n: Vec<usize> = (0..self.theta).map(|k| if self.is_block(k) { 2 } else { 1 }).collect();
        let mut tm = Vec::new();
        for k in 0..self.theta {
            let mut row = Vec::new();
            for l in 0..self.theta {
                let mut m = DenseMatrix::zeros(n[l], n[l]);
                if n[l] == 2 {
                    // basis (x_ℓ, y_ℓ); column y_ℓ has a x_ℓ
                    m.set(0, 1, self.a_entry(k, l));
                }
                row.push(m);
            }
            tm.push(row);
        }
        AbTriple { field: self.field.clone(), n, q: self.q.clone(), t: tm }
    }
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Some a ∈ F_p whose ghost is 𝒢.
pub fn a_for_ghost(ghost: u32, p: u32) -> Result<u32> {
    (0..p)
        .find(|&a| ghost_from_a(a as i64, p) == ghost)
        .ok_or_else(|| CoreError::Presentation(format!("no a with ghost {ghost} at p = {p}")))
}

/// Family block of a scenario file.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct FamilyConfig {
    pub t: usize,
    pub theta: usize,
    /// q entries are powers of a primitive root of unity of this order
    #[serde(default)]
    pub root_of_unity: Option<u32>,
    /// exponent matrix; omitted means 𝔮 = 𝟏
    #[serde(default)]
    pub q: Option<Vec<Vec<i64>>>,
    /// a entries, or give `ghost` instead
    #[serde(default)]
    pub a: Option<Vec<Vec<i64>>>,
    #[serde(default)]
    pub ghost: Option<Vec<Vec<u32>>>,
    #[serde(default)]
    pub f: Option<u32>,
}

impl FamilyConfig {
    pub fn build(&self, field: &Field) -> Result<PaperData> {
        let theta = self.theta;
        let q = match &self.q {
            None => PaperData::trivial_q(theta),
            Some(ex) => {
                let d = self.root_of_unity.ok_or_else(|| CoreError::Presentation("q given without root_of_unity".into()))?;
                let z = field.root_of_unity(d)?;
                ex.iter().map(|r| r.iter().map(|&e| field.pow(z, e)).collect()).collect()
            }
        };
        let p = field.p();
        let a = match (&self.a, &self.ghost) {
            (Some(a), _) => a.iter().map(|r| r.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect()).collect(),
            (None, Some(g)) => g.iter().map(|r| r.iter().map(|&x| a_for_ghost(x, p)).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?,
            (None, None) => vec![vec![0; self.t]; theta - self.t],
        };
        PaperData::new(field, self.t, theta, q, a)
    }
}

/// Field block plus family block; the common head of every scenario file.
#[derive(Clone, Debug, Deserialize, Serialize)]
pub struct DataFile {
    pub field: FieldSection,
    pub family: FamilyConfig,
    #[serde(default)]
    pub scalars: BTreeMap<String, ScalarDef>,
}

/// Ab-triple (n, 𝔮, 𝐭): c(x ⊗ y) = q_ij (y + t_ij(y)) ⊗ x for x ∈ V_i, y ∈ V_j.
#[derive(Clone, Debug)]
pub struct AbTriple {
    pub field: Field,
    pub n: Vec<usize>,
    pub q: Vec<Vec<Fe>>,
    pub t: Vec<Vec<DenseMatrix>>,
}

impl AbTriple {
    pub fn validate(&self) -> Result<()> {
        let f = &self.field;
        let th = self.n.len();
        for i in 0..th {
            for j in 0..th {
                if self.q[i][j].is_zero() {
                    return Err(CoreError::Presentation(format!("q_{}{} = 0", i + 1, j + 1)));
                }
                if self.n[j] == 1 && !self.t[i][j].is_zero() {
                    return Err(CoreError::Presentation(format!("t_{}{} ≠ 0 on a point", i + 1, j + 1)));
                }
            }
        }
        for k in 0..th {
            for i in 0..th {
                for j in 0..th {
                    let a = self.t[i][k].mul(f, &self.t[j][k]);
                    let b = self.t[j][k].mul(f, &self.t[i][k]);
                    if a != b {
                        return Err(CoreError::Presentation(format!("t_{}{} and t_{}{} do not commute", i + 1, k + 1, j + 1, k + 1)));
                    }
                }
            }
        }
        Ok(())
    }

    /// Braided space with basis ordered component by component.
    pub fn braided(&self, labels: Vec<String>) -> BraidedSpace {
        let f = &self.field;
        let mut comp = Vec::new();
        let mut offset = Vec::new();
        for (k, &nk) in self.n.iter().enumerate() {
            offset.push(comp.len());
            comp.extend(std::iter::repeat_n(k, nk));
        }
        let dim = comp.len();
        let mut c = vec![vec![SparseVec::zero(); dim]; dim];
        for u in 0..dim {
            let i = comp[u];
            for v in 0..dim {
                let j = comp[v];
                let local = v - offset[j];
                let mut pairs = vec![((v * dim + u) as u32, self.q[i][j])];
                for r in 0..self.n[j] {
                    let e = self.t[i][j].get(r, local);
                    if !e.is_zero() {
                        pairs.push((((offset[j] + r) * dim + u) as u32, f.mul(self.q[i][j], e)));
                    }
                }
                c[u][v] = SparseVec::from_pairs(f, pairs);
            }
        }
        BraidedSpace { field: f.clone(), labels, component: comp, c }
    }
}

/// Braided vector space. c[u][v] is c(e_u ⊗ e_v) with e_a ⊗ e_b stored at a·dim + b.
#[derive(Clone, Debug, PartialEq)]
pub struct BraidedSpace {
    pub field: Field,
    pub labels: Vec<String>,
    pub component: Vec<usize>,
    pub c: Vec<Vec<SparseVec>>,
}

impl BraidedSpace {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    fn apply_c12(&self, v: &FxHashMap<(u32, u32, u32), Fe>, acc: &mut FxHashMap<(u32, u32, u32), Fe>) {
        let n = self.dim() as u32;
        let f = &self.field;
        for (&(a, b, cc), &x) in v {
            for &(k, y) in &self.c[a as usize][b as usize].0 {
                let e = acc.entry((k / n, k % n, cc)).or_insert(Fe::ZERO);
                *e = f.mul_add(*e, x, y);
            }
        }
    }

    fn apply_c23(&self, v: &FxHashMap<(u32, u32, u32), Fe>, acc: &mut FxHashMap<(u32, u32, u32), Fe>) {
        let n = self.dim() as u32;
        let f = &self.field;
        for (&(a, b, cc), &x) in v {
            for &(k, y) in &self.c[b as usize][cc as usize].0 {
                let e = acc.entry((a, k / n, k % n)).or_insert(Fe::ZERO);
                *e = f.mul_add(*e, x, y);
            }
        }
    }

    /// Exhaustive braid equation on all basis triples; the witness names the first failing triple.
    pub fn check_braid_equation(&self) -> Check {
        let n = self.dim() as u32;
        let clean = |m: FxHashMap<(u32, u32, u32), Fe>| -> Vec<((u32, u32, u32), Fe)> {
            let mut v: Vec<_> = m.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            v.sort_unstable();
            v
        };
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let start: FxHashMap<_, _> = [((a, b, c), Fe::ONE)].into_iter().collect();
                    let mut l1 = FxHashMap::default();
                    self.apply_c12(&start, &mut l1);
                    let mut l2 = FxHashMap::default();
                    self.apply_c23(&l1, &mut l2);
                    let mut l3 = FxHashMap::default();
                    self.apply_c12(&l2, &mut l3);
                    let mut r1 = FxHashMap::default();
                    self.apply_c23(&start, &mut r1);
                    let mut r2 = FxHashMap::default();
                    self.apply_c12(&r1, &mut r2);
                    let mut r3 = FxHashMap::default();
                    self.apply_c23(&r2, &mut r3);
                    if clean(l3) != clean(r3) {
                        let l = &self.labels;
                        return Check::fail(
                            "braid equation",
                            format!("{}⊗{}⊗{}", l[a as usize], l[b as usize], l[c as usize]),
                        );
                    }
                }
            }
        }
        Check::pass("braid equation")
    }

    /// c as a dim²×dim² matrix.
    pub fn matrix(&self) -> DenseMatrix {
        let n = self.dim();
        let mut m = DenseMatrix::zeros(n * n, n * n);
        for u in 0..n {
            for v in 0..n {
                for &(k, x) in &self.c[u][v].0 {
                    m.set(k as usize, u * n + v, x);
                }
            }
        }
        m
    }

    pub fn is_invertible(&self) -> bool {
        let n = self.dim();
        self.matrix().rank(&self.field) == n * n
    }

    /// Entrywise comparison, witness on the first differing pair.
    pub fn compare(&self, other: &BraidedSpace, name: &str) -> Check {
        for u in 0..self.dim() {
            for v in 0..self.dim() {
                if self.c[u][v] != other.c[u][v] {
                    return Check::fail(name, format!("c({}⊗{})", self.labels[u], self.labels[v]));
                }
            }
        }
        Check::pass(name)
    }
}

/// 𝒱(𝔮, 𝐚) from the explicit block/point formulas, braid equation verified.
pub fn braided_from_paper_data(d: &PaperData) -> Result<BraidedSpace> {
    let f = &d.field;
    let n = d.dim_v();
    let labels = d.names();
    let comp: Vec<usize> = (0..n).map(|x| d.component(x as Letter)).collect();
    let mut c = vec![vec![SparseVec::zero(); n]; n];
    for u in 0..n {
        let k = comp[u];
        for v in 0..n {
            let l = comp[v];
            let q = d.q[k][l];
            let vl = v as Letter;
            let mut pairs = vec![((v * n + u) as u32, q)];
            if d.is_y(vl) {
                let a = d.a_entry(k, l);
                let xl = d.letter_x(l) as usize;
                pairs.push(((xl * n + u) as u32, f.mul(q, a)));
            }
            c[u][v] = SparseVec::from_pairs(f, pairs);
        }
    }
    let bs = BraidedSpace { field: f.clone(), labels, component: comp, c };
    let chk = bs.check_braid_equation();
    if !chk.pass {
        return Err(CoreError::Presentation(format!("braid equation fails at {}", chk.witness.unwrap_or_default())));
    }
    Ok(bs)
}

/// Realization of a braided space over Γ = (Z/f)^θ: every basis vector of
/// component k has degree g_k; action[k][v] = g_k · e_v.
#[derive(Clone, Debug)]
pub struct Realization {
    pub field: Field,
    pub f: u32,
    pub theta: usize,
    pub labels: Vec<String>,
    pub degree: Vec<usize>,
    pub action: Vec<Vec<SparseVec>>,
}

impl Realization {
    pub fn dim(&self) -> usize {
        self.degree.len()
    }

    pub fn act(&self, k: usize, v: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut out = Vec::new();
        for &(i, c) in &v.0 {
            for &(j, a) in &self.action[k][i as usize].0 {
                out.push((j, f.mul(a, c)));
            }
        }
        SparseVec::from_pairs(f, out)
    }

    /// c(u ⊗ v) = (g_{deg u} · v) ⊗ u
    pub fn induced_braiding(&self) -> BraidedSpace {
        let n = self.dim();
        let mut c = vec![vec![SparseVec::zero(); n]; n];
        for u in 0..n {
            for v in 0..n {
                let gv = &self.action[self.degree[u]][v];
                c[u][v] = SparseVec(gv.0.iter().map(|&(w, x)| ((w as usize * n + u) as u32, x)).collect());
            }
        }
        BraidedSpace { field: self.field.clone(), labels: self.labels.clone(), component: self.degree.clone(), c }
    }

    /// Actions commute, have order dividing f, and preserve each graded component.
    pub fn check_module(&self) -> Check {
        let f = &self.field;
        let n = self.dim();
        for k in 0..self.theta {
            for v in 0..n {
                let e = SparseVec::unit(v as u32);
                let mut cur = e.clone();
                for _ in 0..self.f {
                    cur = self.act(k, &cur);
                }
                if cur != e {
                    return Check::fail("realization", format!("g{}^{} ≠ 1 on {}", k + 1, self.f, self.labels[v]));
                }
                if self.action[k][v].0.iter().any(|&(w, _)| self.degree[w as usize] != self.degree[v]) {
                    return Check::fail("realization", format!("g{} does not preserve the component of {}", k + 1, self.labels[v]));
                }
                for l in 0..k {
                    if self.act(k, &self.act(l, &e)) != self.act(l, &self.act(k, &e)) {
                        return Check::fail("realization", format!("g{} and g{} do not commute", k + 1, l + 1));
                    }
                }
            }
        }
        let _ = f;
        Check::pass("realization")
    }
}

/// Realization of 𝒱(𝔮, 𝐚) over (Z/f)^θ; f must be a multiple of p·d.
pub fn realize(d: &PaperData, f: u32) -> Result<Realization> {
    let need = d.min_f();
    if f == 0 || !f.is_multiple_of(need) {
        return Err(CoreError::Presentation(format!("f = {f} is not a multiple of p·d = {need}")));
    }
    let fld = &d.field;
    let n = d.dim_v();
    let degree: Vec<usize> = (0..n).map(|x| d.component(x as Letter)).collect();
    let mut action = Vec::new();
    for k in 0..d.theta {
        let mut col = Vec::new();
        for v in 0..n {
            let l = degree[v];
            let q = d.q[k][l];
            let mut pairs = vec![(v as u32, q)];
            if d.is_y(v as Letter) {
                pairs.push((d.letter_x(l) as u32, fld.mul(q, d.a_entry(k, l))));
            }
            col.push(SparseVec::from_pairs(fld, pairs));
        }
        action.push(col);
    }
    let r = Realization { field: fld.clone(), f, theta: d.theta, labels: d.names(), degree, action };
    let m = r.check_module();
    if !m.pass {
        return Err(CoreError::Presentation(m.witness.unwrap_or_default()));
    }
    let declared = braided_from_paper_data(d)?;
    let chk = r.induced_braiding().compare(&declared, "induced braiding");
    if !chk.pass {
        return Err(CoreError::Presentation(format!("induced braiding differs at {}", chk.witness.unwrap_or_default())));
    }
    Ok(r)
}

/// Relations of 𝓑(𝒱(𝔮, 𝐚)) in the order: Jordan relations, block
/// commutations, block-point commutations, truncated adjoints, p-th powers of
/// the щ, and щ-commutations.
pub fn nichols_presentation(d: &PaperData) -> Presentation {
    let f = &d.field;
    let p = d.p();
    let names = d.names();
    let mut pres = Presentation::new(nichols_name(d), f, names.iter().map(Generator::new).collect());
    let l = |x: Letter| NcPoly::letter(x);
    let qc = |a: &NcPoly, b: &NcPoly, q: Fe| NcPoly::q_commutator(f, a, b, q);
    let half = f.inv(f.from_i64(2));
    for j in 0..d.t {
        let (x, y) = (l(d.letter_x(j)), l(d.letter_y(j)));
        pres.push(x.pow(f, p));
        pres.push(y.pow(f, p));
        let r = y.mul(f, &x).sub(f, &x.mul(f, &y)).add(f, &x.pow(f, 2).scale(f, half));
        pres.push(r);
    }
    for k in 0..d.t {
        for j in 0..d.t {
            if k == j {
                continue;
            }
            let q = d.q[k][j];
            if k < j {
                pres.push(qc(&l(d.letter_x(k)), &l(d.letter_x(j)), q));
                pres.push(qc(&l(d.letter_y(k)), &l(d.letter_y(j)), q));
            }
            pres.push(qc(&l(d.letter_x(k)), &l(d.letter_y(j)), q));
        }
    }
    for j in 0..d.t {
        for h in d.t..d.theta {
            pres.push(qc(&l(d.letter_x(j)), &l(d.letter_x(h)), d.q[j][h]));
        }
    }
    let ghost = d.ghost();
    for h in d.t..d.theta {
        for j in 0..d.t {
            let mut n = vec![0u32; d.t];
            n[j] = ghost[h - d.t][j] + 1;
            pres.push(d.sch_poly(h, &n));
        }
    }
    let mut schs: Vec<(usize, Vec<u32>, NcPoly)> = Vec::new();
    for h in d.t..d.theta {
        for n in ahz_lattice(&ghost[h - d.t]) {
            let s = d.sch_poly(h, &n);
            schs.push((h, n, s));
        }
    }
    for (_, _, s) in &schs {
        pres.push(s.pow(f, p));
    }
    for a in 0..schs.len() {
        for b in a + 1..schs.len() {
            let (h, m, s1) = &schs[a];
            let (k, n, s2) = &schs[b];
            pres.push(qc(s1, s2, d.p_scalar(*h, *k, m, n)));
        }
    }
    pres.expected_dim = Some(d.nichols_dim_formula() as usize);
    pres
}

fn nichols_name(d: &PaperData) -> String {
    format!("B(V(q,a)) t={} θ={} p={}", d.t, d.theta, d.p())
}

/// Completed Nichols algebra with its realization.
pub struct Nichols {
    pub data: PaperData,
    pub real: Realization,
    pub alg: FinBasisAlgebra,
    /// action_basis[k][b] = g_k ▷ e_b
    pub action_basis: Vec<Vec<SparseVec>>,
    /// Γ-degree of each basis word as exponents mod f
    pub gamma_degree: Vec<Vec<u32>>,
    delta_memo: Vec<OnceLock<Tensor>>,
}

impl Nichols {
    /// Complete the presentation. The dimension is compared against the formula
    /// by the caller; a mismatch is a finding, not an error here.
    pub fn build(d: &PaperData, f: u32) -> Result<Nichols> {
        let real = realize(d, f)?;
        let mut pres = nichols_presentation(d);
        pres.expected_dim = None;
        let alg = FinBasisAlgebra::from_presentation(&pres, None)?;
        Ok(Nichols::from_parts(d.clone(), real, alg))
    }

    /// Nichols algebra from an already built algebra whose letters are the basis of V.
    pub fn from_parts(data: PaperData, real: Realization, alg: FinBasisAlgebra) -> Nichols {
        let n = alg.dim();
        let mut action_basis = Vec::new();
        for k in 0..real.theta {
            let letter_img: Vec<SparseVec> = (0..alg.ngens())
                .map(|x| {
                    let v = &real.action[k][x];
                    SparseVec(v.0.iter().map(|&(y, c)| (alg.gen_vec(y as Letter).0[0].0, c)).collect())
                })
                .collect();
            let mut col: Vec<SparseVec> = Vec::with_capacity(n);
            for b in 0..n as u32 {
                let w = alg.word(b);
                if w.is_empty() {
                    col.push(alg.unit());
                    continue;
                }
                let rest = alg.index_of(&Word::from_slice(&w.0[1..])).expect("normal words are suffix closed");
                col.push(alg.mul(&letter_img[w.0[0] as usize], &col[rest as usize]));
            }
            action_basis.push(col);
        }
        let gamma_degree = (0..n as u32)
            .map(|b| {
                let mut e = vec![0u32; real.theta];
                for &x in &alg.word(b).0 {
                    let k = real.degree[x as usize];
                    e[k] = (e[k] + 1) % real.f;
                }
                e
            })
            .collect();
        Nichols { data, real, alg, action_basis, gamma_degree, delta_memo: (0..n).map(|_| OnceLock::new()).collect() }
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn act(&self, k: usize, v: &SparseVec) -> SparseVec {
        let f = &self.alg.field;
        let mut out = Vec::new();
        for &(i, c) in &v.0 {
            for &(j, a) in &self.action_basis[k][i as usize].0 {
                out.push((j, f.mul(a, c)));
            }
        }
        SparseVec::from_pairs(f, out)
    }

    /// Braided comultiplication on a basis element: generators primitive,
    /// (a ⊗ b)(c ⊗ d) = a (deg b · c) ⊗ b d.
    pub fn braided_delta_basis(&self, b: u32) -> &Tensor {
        self.delta_memo[b as usize].get_or_init(|| {
            let alg = &self.alg;
            let f = &alg.field;
            let w = alg.word(b);
            if w.is_empty() {
                return Tensor::single(0, 0, Fe::ONE);
            }
            let x = w.0[0];
            let k = self.real.degree[x as usize];
            let rest = alg.index_of(&Word::from_slice(&w.0[1..])).unwrap();
            let d = self.braided_delta_basis(rest).clone();
            let mut pairs = Vec::new();
            for &((i, j), c) in &d.0 {
                for &(a, u) in &alg.left_table(x)[i as usize].0 {
                    pairs.push(((a, j), f.mul(u, c)));
                }
                let gi = &self.action_basis[k][i as usize];
                let xj = &alg.left_table(x)[j as usize];
                for &(a, u) in &gi.0 {
                    for &(bb, v) in &xj.0 {
                        pairs.push(((a, bb), f.mul(f.mul(u, v), c)));
                    }
                }
            }
            Tensor::from_pairs(f, pairs)
        })
    }

    /// Γ acts by algebra automorphisms and Δ is Γ-equivariant on all basis pairs/elements.
    pub fn check_yd_compatibility(&self) -> Check {
        let alg = &self.alg;
        for k in 0..self.real.theta {
            for x in 0..alg.ngens() as Letter {
                let gx = self.act(k, &alg.gen_vec(x));
                for b in 0..self.dim() as u32 {
                    let lhs = self.act(k, &alg.left_table(x)[b as usize]);
                    let rhs = alg.mul(&gx, &self.action_basis[k][b as usize]);
                    if lhs != rhs {
                        return Check::fail("Γ acts by automorphisms", format!("g{} on {}·{}", k + 1, alg.gen_names[x as usize], alg.render_basis(b)));
                    }
                }
            }
        }
        Check::pass("Γ acts by automorphisms")
    }
}

/// R # kΓ with basis u·g^a: index = b·|Γ| + mixed-radix(a).
pub struct Bosonization {
    pub hopf: HopfAlgebra,
    pub nichols_dim: usize,
    pub f: u32,
    pub theta: usize,
    /// number of Nichols letters; group letters follow
    pub nletters: usize,
}

impl Bosonization {
    pub fn group_order(&self) -> usize {
        (self.f as usize).pow(self.theta as u32)
    }

    pub fn index(&self, b: u32, a: &[u32]) -> u32 {
        b * self.group_order() as u32 + group_index(a, self.f)
    }

    pub fn split(&self, idx: u32) -> (u32, Vec<u32>) {
        let g = self.group_order() as u32;
        (idx / g, group_exponents(idx % g, self.f, self.theta))
    }

    pub fn group_letter(&self, k: usize) -> Letter {
        (self.nletters + k) as Letter
    }
}

pub fn group_index(a: &[u32], f: u32) -> u32 {
    a.iter().fold(0, |acc, &x| acc * f + x % f)
}

pub fn group_exponents(mut i: u32, f: u32, theta: usize) -> Vec<u32> {
    let mut a = vec![0; theta];
    for k in (0..theta).rev() {
        a[k] = i % f;
        i /= f;
    }
    a
}

/// The smash product 𝓑 # kΓ with Δ(v) = v ⊗ 1 + g_{deg v} ⊗ v, Δ(g) = g ⊗ g.
pub fn bosonize(r: &Nichols) -> Result<Bosonization> {
    let alg = &r.alg;
    let fld = alg.field.clone();
    let theta = r.real.theta;
    let f = r.real.f;
    let gorder = (f as usize).pow(theta as u32);
    let nl = alg.ngens();
    let nr = alg.dim();
    let dim = nr * gorder;
    let gwords: Vec<Word> = (0..gorder as u32)
        .map(|gi| {
            let a = group_exponents(gi, f, theta);
            let mut w = Word::empty();
            for (k, &e) in a.iter().enumerate() {
                for _ in 0..e {
                    w.0.push((nl + k) as Letter);
                }
            }
            w
        })
        .collect();
    let mut basis = Vec::with_capacity(dim);
    for b in 0..nr as u32 {
        for gw in &gwords {
            basis.push(alg.word(b).concat(gw));
        }
    }
    let mut left: Vec<Vec<SparseVec>> = Vec::with_capacity(nl + theta);
    for x in 0..nl as Letter {
        let tab = alg.left_table(x);
        let mut col = Vec::with_capacity(dim);
        for b in 0..nr {
            for gi in 0..gorder as u32 {
                col.push(SparseVec(tab[b].0.iter().map(|&(c, v)| (c * gorder as u32 + gi, v)).collect()));
            }
        }
        left.push(col);
    }
    for k in 0..theta {
        let mut col = Vec::with_capacity(dim);
        for b in 0..nr {
            let gb = &r.action_basis[k][b];
            for gi in 0..gorder as u32 {
                let mut a = group_exponents(gi, f, theta);
                a[k] = (a[k] + 1) % f;
                let ng = group_index(&a, f);
                col.push(SparseVec(gb.0.iter().map(|&(c, v)| (c * gorder as u32 + ng, v)).collect()));
            }
        }
        left.push(col);
    }
    let gnames = r.data.group_names();
    let mut names = alg.gen_names.clone();
    names.extend(gnames.iter().cloned());
    let mut weights = vec![1u32; nl];
    weights.extend(std::iter::repeat_n(0, theta));
    let order = MonomialOrder::weighted(weights);
    let mut h = FinBasisAlgebra::from_tables(&format!("{} # kΓ", alg.name), &fld, names.clone(), order, basis, left);
    h.presentation = Some(bosonization_presentation(r, &names)?);
    let bos_index = |b: u32, a: &[u32]| b * gorder as u32 + group_index(a, f);
    let mut delta = Vec::new();
    let mut antipode = Vec::new();
    let mut eps = Vec::new();
    for x in 0..nl as Letter {
        let k = r.real.degree[x as usize];
        let xi = bos_index(alg.gen_vec(x).0[0].0, &vec![0; theta]);
        let mut ek = vec![0; theta];
        ek[k] = 1;
        let gk = bos_index(0, &ek);
        delta.push(Tensor::from_pairs(&fld, vec![((xi, 0), Fe::ONE), ((gk, xi), Fe::ONE)]));
        let mut inv = vec![0; theta];
        inv[k] = f - 1;
        let ginv = SparseVec::unit(bos_index(0, &inv));
        let s = h.mul(&ginv, &SparseVec::unit(xi)).neg(&fld);
        antipode.push(s);
        eps.push(Fe::ZERO);
    }
    for k in 0..theta {
        let mut ek = vec![0; theta];
        ek[k] = 1;
        let gk = bos_index(0, &ek);
        delta.push(Tensor::single(gk, gk, Fe::ONE));
        let mut inv = vec![0; theta];
        inv[k] = f - 1;
        antipode.push(SparseVec::unit(bos_index(0, &inv)));
        eps.push(Fe::ONE);
    }
    let grouplikes = (nl..nl + theta).map(|x| x as Letter).collect();
    let hopf = HopfAlgebra::new(h, delta, eps, antipode, grouplikes);
    Ok(Bosonization { hopf, nichols_dim: nr, f, theta, nletters: nl })
}

/// Presentation of 𝓑 # kΓ: Nichols relations, g v - (g·v) g, g^f - 1, group commutators.
pub fn bosonization_presentation(r: &Nichols, names: &[String]) -> Result<Presentation> {
    let fld = &r.alg.field;
    let base = r.alg.presentation.as_ref().ok_or_else(|| CoreError::Presentation("Nichols algebra without presentation".into()))?;
    let nl = r.alg.ngens();
    let theta = r.real.theta;
    let mut pres = Presentation::new(format!("{} # kΓ", base.name), fld, names.iter().map(|n| Generator::new(n.clone())).collect());
    for rel in &base.relations {
        pres.push(rel.clone());
    }
    for k in 0..theta {
        let g = NcPoly::letter((nl + k) as Letter);
        for x in 0..nl {
            let gx = NcPoly::from_terms(fld, r.real.action[k][x].0.iter().map(|&(y, c)| (Word::letter(y as Letter), c)).collect());
            pres.push(g.mul(fld, &NcPoly::letter(x as Letter)).sub(fld, &gx.mul(fld, &g)));
        }
        pres.push(g.pow(fld, r.real.f).sub(fld, &NcPoly::one()));
        for l in 0..k {
            let h = NcPoly::letter((nl + l) as Letter);
            pres.push(NcPoly::q_commutator(fld, &g, &h, Fe::ONE));
        }
    }
    pres.expected_dim = Some(r.dim() * (r.real.f as usize).pow(theta as u32));
    Ok(pres)
}

/// YD-triple over k[Z/n_1 × ... × Z/n_k]: χ and η given on the generators, g as exponents.
pub fn check_yd_triple(field: &Field, orders: &[u32], g: &[u32], chi: &[Fe], eta: &[Fe]) -> Check {
    let name = "YD triple";
    for (i, &n) in orders.iter().enumerate() {
        if field.pow(chi[i], n as i64) != Fe::ONE {
            return Check::fail(name, format!("χ(γ{})^{n} ≠ 1", i + 1));
        }
        // η(γ^n) = n χ(γ)^{n-1} η(γ) must equal η(1) = 0
        let v = field.mul(field.from_i64(n as i64), field.mul(field.pow(chi[i], n as i64 - 1), eta[i]));
        if !v.is_zero() {
            return Check::fail(name, format!("η not well defined on γ{}^{n}", i + 1));
        }
    }
    // χ(g) and η(g) by the derivation rule along g = ∏ γ_i^{g_i}
    let mut c = Fe::ONE;
    let mut e = Fe::ZERO;
    for (i, &gi) in g.iter().enumerate() {
        for _ in 0..gi {
            e = field.add(field.mul(c, eta[i]), field.mul(e, chi[i]));
            c = field.mul(c, chi[i]);
        }
    }
    if c != Fe::ONE {
        return Check::fail(name, "χ(g) ≠ 1");
    }
    if e != Fe::ONE {
        return Check::fail(name, format!("η(g) = {} ≠ 1", field.show(e)));
    }
    Check::pass(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn ghost_values() {
        assert_eq!(ghost_from_a(0, 3), 0);
        assert_eq!(ghost_from_a(1, 3), 1);
        assert_eq!(ghost_from_a(1, 5), 3);
        assert_eq!(ghost_from_a(2, 3), 2);
        for p in [3u32, 5, 7] {
            for a in 1..p as i64 {
                let g = ghost_from_a(a, p) as i64;
                assert!((1..p as i64).contains(&g));
                assert_eq!((g + 2 * a).rem_euclid(p as i64), 0);
            }
        }
    }

    #[test]
    fn lattice() {
        assert_eq!(ahz_lattice(&[0]), vec![vec![0]]);
        assert_eq!(ahz_lattice(&[1, 1]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn jordan_block_braiding() {
        let d = PaperData::jordan(&f3());
        let b = braided_from_paper_data(&d).unwrap();
        // c(x⊗y) = (y + x)⊗x
        assert_eq!(b.c[0][1], SparseVec(vec![(0, Fe::ONE), (2, Fe::ONE)]));
        assert!(b.is_invertible());
        let tri = d.to_ab_triple();
        tri.validate().unwrap();
        assert!(tri.braided(d.names()).compare(&b, "ab").pass);
    }

    #[test]
    fn corrupted_block_fails_braid_equation() {
        let d = PaperData::jordan(&f3());
        let mut b = braided_from_paper_data(&d).unwrap();
        // c(x⊗y) = y⊗x but c(y⊗y) = (y + x)⊗y
        b.c[0][1] = SparseVec(vec![(2, Fe::ONE)]);
        b.c[1][1] = SparseVec(vec![(1, Fe::ONE), (3, Fe::ONE)]);
        let c = b.check_braid_equation();
        assert!(!c.pass);
        assert!(c.witness.is_some());
    }

    #[test]
    fn q_matrix_precondition() {
        let f = f3();
        let q = vec![vec![Fe::ONE, Fe(2)], vec![Fe(2), Fe::ONE]];
        assert!(PaperData::new(&f, 1, 2, q.clone(), vec![vec![1]]).is_ok());
        let bad = vec![vec![Fe::ONE, Fe(2)], vec![Fe::ONE, Fe::ONE]];
        assert!(PaperData::new(&f, 1, 2, bad, vec![vec![1]]).is_err());
    }

    #[test]
    fn laestrygonian_braiding_entry() {
        let f = f3();
        let q = Fe(2);
        let d = PaperData::laestrygonian(&f, q, 1).unwrap();
        let b = braided_from_paper_data(&d).unwrap();
        let a = f.from_i64(d.a[0][0] as i64);
        // c(x2⊗y1) = q^{-1}(y1 + a x1)⊗x2, basis x1=0, y1=1, x2=2; u⊗v sits at 3u + v
        let qi = f.inv(q);
        let expect = SparseVec::from_pairs(&f, vec![(5, qi), (2, f.mul(qi, a))]);
        assert_eq!(b.c[2][1], expect);
        assert!(realize(&d, 6).is_ok());
        assert!(realize(&d, 3).is_err());
    }

    #[test]
    fn jordan_presentation_is_three_relations() {
        let d = PaperData::jordan(&f3());
        let pr = nichols_presentation(&d);
        let rendered: Vec<String> = pr.relations.iter().map(|r| pr.render(r)).collect();
        assert_eq!(pr.relations.len(), 3, "{rendered:?}");
        let alg = FinBasisAlgebra::from_presentation(&pr, None).unwrap();
        assert_eq!(alg.dim(), 9);
    }

    #[test]
    fn sch_recursion_matches_plain_commutators_at_trivial_q() {
        let f = f3();
        let d = PaperData::new(&f, 2, 3, PaperData::trivial_q(3), vec![vec![2, 2]]).unwrap();
        for n in ahz_lattice(&[1, 1]) {
            assert_eq!(d.sch_poly(2, &n), d.sch_poly_plain(2, &n));
        }
    }

    #[test]
    fn p_form_is_inverse_symmetric() {
        let f = Field::prime(7).unwrap();
        let z = f.root_of_unity(3).unwrap();
        let q = vec![vec![Fe::ONE, z, Fe::ONE], vec![f.inv(z), Fe::ONE, z], vec![Fe::ONE, f.inv(z), Fe::ONE]];
        let d = PaperData::new(&f, 2, 3, q, vec![vec![1, 3]]).unwrap();
        let g = vec![1i64, 0, 2, 1, 0];
        let h = vec![0i64, 1, 1, 2, 3];
        assert_eq!(f.mul(d.bilinear(&g, &h), d.bilinear(&h, &g)), Fe::ONE);
    }

    #[test]
    fn jordan_bosonization_dim_27() {
        let d = PaperData::jordan(&f3());
        let r = Nichols::build(&d, 3).unwrap();
        assert!(r.check_yd_compatibility().pass);
        let b = bosonize(&r).unwrap();
        assert_eq!(b.hopf.dim(), 27);
        b.hopf.alg.validate_labels().unwrap();
        let rep = b.hopf.check_hopf();
        assert!(rep.all_pass(), "{rep}");
        assert!(b.hopf.check_hopf_exhaustive().all_pass());
        // overlap completion of the full presentation agrees
        let pres = b.hopf.alg.presentation.clone().unwrap();
        let other = FinBasisAlgebra::from_presentation(&pres, None).unwrap();
        assert_eq!(other.dim(), 27);
    }

    #[test]
    fn yd_triples() {
        let f = f3();
        assert!(check_yd_triple(&f, &[3], &[1], &[Fe::ONE], &[Fe::ONE]).pass);
        assert!(!check_yd_triple(&f, &[3], &[1], &[Fe::ONE], &[Fe::ZERO]).pass);
        // over Z/2 a nonzero derivation is not well defined in characteristic 3
        assert!(!check_yd_triple(&f, &[2], &[1], &[Fe::ONE], &[Fe::ONE]).pass);
    }
}
