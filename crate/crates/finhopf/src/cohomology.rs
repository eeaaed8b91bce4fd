//! Betti numbers b_n = dim Ext^n_A(k, k) of augmented finite-dimensional
//! algebras, by the reduced bar complex and by a minimal graded resolution.

use finhopf_core::linalg::sparse_rank;
use finhopf_core::{ColumnSolver, CoreError, Echelon, Fe, Field, FinBasisAlgebra, Letter, Result, SparseVec};
use rustc_hash::FxHashMap;
use serde::Serialize;

use crate::check::Check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bar,
    Minimal,
}

#[derive(Clone, Debug, Serialize)]
pub struct BettiTable {
    pub algebra: String,
    pub method: Method,
    pub values: Vec<usize>,
    /// set when the budget stopped the computation before the requested degree
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cutoff: Option<usize>,
}

/// Limits on the bar complex: total number of chain basis elements in one
/// homological degree.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub max_chains: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_chains: 10_000_000 }
    }
}

impl Budget {
    /// rough conversion: a chain costs a few dozen bytes in the index plus its column
    pub fn from_mb(mb: usize) -> Budget {
        Budget { max_chains: mb.saturating_mul(1 << 20) / 64 }
    }
}

/// A⁺ with basis a_i = e_{i+1} - ε(e_{i+1})·1, its products, and an internal
/// degree per basis element (all zero when A is not graded connected).
pub struct Augmented<'a> {
    pub alg: &'a FinBasisAlgebra,
    pub prod: Vec<Vec<SparseVec>>,
    pub deg: Vec<u32>,
    pub graded: bool,
}

/// Graded with A_0 = k: only the unit has degree 0 and generators act homogeneously.
pub fn is_graded_connected(a: &FinBasisAlgebra) -> bool {
    if a.dim() == 0 || (1..a.dim() as u32).any(|b| a.degree(b) == 0) {
        return false;
    }
    for x in 0..a.ngens() as Letter {
        let dx = a.order.degree(&[x]);
        for b in 0..a.dim() as u32 {
            if a.left_table(x)[b as usize].0.iter().any(|&(i, _)| a.degree(i) != a.degree(b) + dx) {
                return false;
            }
        }
    }
    true
}

impl<'a> Augmented<'a> {
    pub fn new(alg: &'a FinBasisAlgebra) -> Augmented<'a> {
        let f = &alg.field;
        let n = alg.dim();
        let eps = alg.counit_basis();
        let graded = is_graded_connected(alg);
        let aug = |b: usize| -> SparseVec { SparseVec::unit(b as u32).sub(f, &SparseVec::single(0, eps[b])) };
        let coords = |v: &SparseVec| -> SparseVec { SparseVec(v.0.iter().filter(|&&(i, _)| i > 0).map(|&(i, c)| (i - 1, c)).collect()) };
        let mut prod = Vec::with_capacity(n - 1);
        for i in 1..n {
            let ai = aug(i);
            prod.push((1..n).map(|j| coords(&alg.mul(&ai, &aug(j)))).collect());
        }
        let deg = (1..n as u32).map(|b| if graded { alg.degree(b) } else { 0 }).collect();
        Augmented { alg, prod, deg, graded }
    }

    pub fn dim(&self) -> usize {
        self.deg.len()
    }

    fn max_deg(&self) -> u32 {
        self.deg.iter().copied().max().unwrap_or(0)
    }
}

/// Bar chains (A⁺)^{⊗n} of one internal degree, with an index.
struct Chains {
    list: Vec<Vec<u32>>,
    index: FxHashMap<Vec<u32>, u32>,
}

fn enumerate(a: &Augmented, n: usize, s: u32, cap: usize) -> Option<Chains> {
    let mut list = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(a: &Augmented, n: usize, rem: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>, cap: usize) -> bool {
        if cur.len() == n {
            if rem == 0 {
                if out.len() >= cap {
                    return false;
                }
                out.push(cur.clone());
            }
            return true;
        }
        let left = (n - cur.len() - 1) as u32;
        for i in 0..a.dim() as u32 {
            let d = a.deg[i as usize];
            if d > rem || (a.graded && rem - d < left) {
                continue;
            }
            cur.push(i);
            let ok = rec(a, n, rem - d, cur, out, cap);
            cur.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    if !rec(a, n, s, &mut cur, &mut list, cap) {
        return None;
    }
    let index = list.iter().enumerate().map(|(i, w)| (w.clone(), i as u32)).collect();
    Some(Chains { list, index })
}

/// ∂(a_1|…|a_n) = Σ_{i=1}^{n-1} (-1)^i a_1|…|a_i a_{i+1}|…|a_n
fn boundary(a: &Augmented, chain: &[u32], target: &Chains) -> SparseVec {
    let f = &a.alg.field;
    let mut pairs = Vec::new();
    let mut buf: Vec<u32> = Vec::with_capacity(chain.len());
    for i in 0..chain.len() - 1 {
        let sign = if (i + 1) % 2 == 1 { f.neg(Fe::ONE) } else { Fe::ONE };
        for &(k, c) in &a.prod[chain[i] as usize][chain[i + 1] as usize].0 {
            buf.clear();
            buf.extend_from_slice(&chain[..i]);
            buf.push(k);
            buf.extend_from_slice(&chain[i + 2..]);
            let idx = *target.index.get(buf.as_slice()).expect("boundary stays in the same internal degree");
            pairs.push((idx, f.mul(sign, c)));
        }
    }
    SparseVec::from_pairs(f, pairs)
}

fn degrees_for(a: &Augmented, n: usize) -> Vec<u32> {
    if a.graded {
        (n as u32..=n as u32 * a.max_deg()).collect()
    } else {
        vec![0]
    }
}

/// Chain complex pieces for n = 0..=top, per internal degree.
struct BarComplex {
    chains: Vec<FxHashMap<u32, Chains>>,
}

fn build_bar(a: &Augmented, top: usize, budget: Budget) -> (BarComplex, usize) {
    let mut chains: Vec<FxHashMap<u32, Chains>> = Vec::new();
    for n in 0..=top {
        let mut m = FxHashMap::default();
        let mut total = 0usize;
        let mut ok = true;
        for s in if n == 0 { vec![0] } else { degrees_for(a, n) } {
            match enumerate(a, n, s, budget.max_chains.saturating_sub(total)) {
                Some(c) => {
                    total += c.list.len();
                    if !c.list.is_empty() {
                        m.insert(s, c);
                    }
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            return (BarComplex { chains }, n);
        }
        chains.push(m);
    }
    (BarComplex { chains }, top + 1)
}

fn boundary_rank(a: &Augmented, bc: &BarComplex, n: usize) -> usize {
    if n <= 1 || n >= bc.chains.len() {
        return 0;
    }
    let mut r = 0;
    for (s, src) in &bc.chains[n] {
        let Some(dst) = bc.chains[n - 1].get(s) else { continue };
        let cols: Vec<SparseVec> = src.list.iter().map(|c| boundary(a, c, dst)).collect();
        r += sparse_rank(&a.alg.field, &cols);
    }
    r
}

fn chain_dim(bc: &BarComplex, n: usize) -> usize {
    bc.chains[n].values().map(|c| c.list.len()).sum()
}

/// b_n = dim B_n - rank ∂_n - rank ∂_{n+1} on the reduced bar complex.
pub fn bar_betti(alg: &FinBasisAlgebra, max_degree: usize, budget: Budget) -> BettiTable {
    let a = Augmented::new(alg);
    let (bc, built) = build_bar(&a, max_degree + 1, budget);
    let mut values = Vec::new();
    let mut ranks: Vec<usize> = (0..built).map(|n| boundary_rank(&a, &bc, n)).collect();
    ranks.push(0);
    // b_n needs B_{n+1}
    for n in 0..=max_degree {
        if n + 1 >= built {
            break;
        }
        values.push(chain_dim(&bc, n) - ranks[n] - ranks[n + 1]);
    }
    let cutoff = if values.len() <= max_degree { Some(values.len()) } else { None };
    BettiTable { algebra: alg.name.clone(), method: Method::Bar, values, cutoff }
}

/// ∂∘∂ = 0 on every bar chain up to homological degree `top`.
pub fn check_bar_dd(alg: &FinBasisAlgebra, top: usize, budget: Budget) -> Check {
    let a = Augmented::new(alg);
    let f = &alg.field;
    let (bc, built) = build_bar(&a, top, budget);
    for n in 3..built {
        for (s, src) in &bc.chains[n] {
            let (Some(mid), Some(dst)) = (bc.chains[n - 1].get(s), bc.chains[n - 2].get(s)) else { continue };
            for c in &src.list {
                let d1 = boundary(&a, c, mid);
                let mut acc = SparseVec::zero();
                for &(i, x) in &d1.0 {
                    acc = acc.add_scaled(f, &boundary(&a, &mid.list[i as usize], dst), x);
                }
                if !acc.is_zero() {
                    return Check::fail("∂∘∂ = 0", format!("on a chain of length {n}: {c:?}"));
                }
            }
        }
    }
    Check::pass("∂∘∂ = 0")
}

/// Minimal graded free resolution of k over a graded connected algebra.
/// Each step: Ω ⊂ F_{n-1} a graded submodule; minimal generators are a
/// complement of A⁺Ω in Ω degree by degree; Ω' = ker(F_n → F_{n-1}).
pub fn minimal_graded_betti(alg: &FinBasisAlgebra, max_degree: usize) -> Result<BettiTable> {
    if !is_graded_connected(alg) {
        return Err(CoreError::Presentation(format!("{} is not graded connected; use the bar method", alg.name)));
    }
    let f = &alg.field;
    let d = alg.dim();
    let bdeg: Vec<u32> = (0..d as u32).map(|b| alg.degree(b)).collect();
    // Ω^0 = A⁺ inside F_0 = A
    let mut omega: Vec<(u32, SparseVec)> = (1..d as u32).map(|b| (bdeg[b as usize], SparseVec::unit(b))).collect();
    let mut values = vec![1usize];
    for n in 1..=max_degree {
        let gens = minimal_generators(alg, &omega);
        values.push(gens.len());
        if n == max_degree || gens.is_empty() {
            if gens.is_empty() {
                values.resize(max_degree + 1, 0);
            }
            break;
        }
        // columns e_b · w_i of F_n → F_{n-1}, grouped by degree
        let mut by_deg: FxHashMap<u32, Vec<(u32, SparseVec)>> = FxHashMap::default();
        for (i, (gd, w)) in gens.iter().enumerate() {
            for b in 0..d as u32 {
                let word = alg.word(b).0.clone();
                let v = apply_blocks(alg, &word, w);
                by_deg.entry(gd + bdeg[b as usize]).or_default().push((i as u32 * d as u32 + b, v));
            }
        }
        let mut degs: Vec<u32> = by_deg.keys().copied().collect();
        degs.sort_unstable();
        omega = Vec::new();
        for s in degs {
            let cols = &by_deg[&s];
            let mut solver = ColumnSolver::new(f, cols.len());
            for (_, v) in cols {
                solver.push(v);
            }
            for k in solver.kernel() {
                let v = SparseVec::from_pairs(f, k.0.iter().map(|&(j, c)| (cols[j as usize].0, c)).collect());
                omega.push((s, v));
            }
        }
    }
    Ok(BettiTable { algebra: alg.name.clone(), method: Method::Minimal, values, cutoff: None })
}

/// word · v on a free module A^r, with v indexed i·dim A + b
fn apply_blocks(alg: &FinBasisAlgebra, word: &[Letter], v: &SparseVec) -> SparseVec {
    let d = alg.dim() as u32;
    let f = &alg.field;
    let mut blocks: FxHashMap<u32, Vec<(u32, Fe)>> = FxHashMap::default();
    for &(i, c) in &v.0 {
        blocks.entry(i / d).or_default().push((i % d, c));
    }
    let mut out = Vec::new();
    for (blk, entries) in blocks {
        let w = alg.apply_word(word, &SparseVec::from_pairs(f, entries));
        out.extend(w.0.iter().map(|&(b, c)| (blk * d + b, c)));
    }
    SparseVec::from_pairs(f, out)
}

fn minimal_generators(alg: &FinBasisAlgebra, omega: &[(u32, SparseVec)]) -> Vec<(u32, SparseVec)> {
    let f = &alg.field;
    let mut by_deg: FxHashMap<u32, Vec<&SparseVec>> = FxHashMap::default();
    for (s, v) in omega {
        by_deg.entry(*s).or_default().push(v);
    }
    let mut degs: Vec<u32> = by_deg.keys().copied().collect();
    degs.sort_unstable();
    let mut gens = Vec::new();
    for &s in &degs {
        let mut ech = Echelon::new(f);
        for x in 0..alg.ngens() as Letter {
            let dx = alg.order.degree(&[x]);
            if dx > s {
                continue;
            }
            if let Some(lower) = by_deg.get(&(s - dx)) {
                for v in lower {
                    ech.insert(&apply_blocks(alg, &[x], v));
                }
            }
        }
        for v in &by_deg[&s] {
            if ech.insert(v) {
                gens.push((s, (*v).clone()));
            }
        }
    }
    gens
}

/// Γ = ∏ ℤ/orders[k] acting on A by commuting automorphisms that fix ε;
/// action[k][b] is g_k applied to basis element b.
pub struct GroupAction {
    pub orders: Vec<u32>,
    pub action: Vec<Vec<SparseVec>>,
}

impl GroupAction {
    pub fn trivial(dim: usize) -> GroupAction {
        GroupAction { orders: vec![1], action: vec![(0..dim as u32).map(SparseVec::unit).collect()] }
    }

    /// basis words of length ℓ scaled by (-1)^ℓ
    pub fn sign(alg: &FinBasisAlgebra) -> GroupAction {
        let f = &alg.field;
        let col = (0..alg.dim() as u32)
            .map(|b| {
                let c = if alg.word(b).len().is_multiple_of(2) { Fe::ONE } else { f.neg(Fe::ONE) };
                SparseVec::single(b, c)
            })
            .collect();
        GroupAction { orders: vec![2], action: vec![col] }
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().map(|&o| o as u64).product()
    }
}

/// dim of Γ-invariant cohomology, via the averaging idempotent on bar chains.
/// Refuses when p divides |Γ|.
pub fn invariant_betti(alg: &FinBasisAlgebra, g: &GroupAction, max_degree: usize, budget: Budget) -> Result<BettiTable> {
    let f = &alg.field;
    let p = f.p() as u64;
    if g.order().is_multiple_of(p) {
        return Err(CoreError::Presentation(format!(
            "kΓ is not semisimple: p = {p} divides |Γ| = {}; invariant cohomology needs kΓ semisimple",
            g.order()
        )));
    }
    let a = Augmented::new(alg);
    let m = a.dim();
    // g_k on A⁺ coordinates
    let act: Vec<Vec<SparseVec>> = g
        .action
        .iter()
        .map(|col| (1..=m).map(|b| SparseVec(col[b].0.iter().filter(|&&(i, _)| i > 0).map(|&(i, c)| (i - 1, c)).collect())).collect())
        .collect();
    let (bc, built) = build_bar(&a, max_degree + 1, budget);
    // invariant subspace of each (n, s) piece: image of the averaging map
    let mut inv: Vec<FxHashMap<u32, Vec<SparseVec>>> = Vec::new();
    for n in 0..built {
        let mut per = FxHashMap::default();
        for (s, ch) in &bc.chains[n] {
            let mut ech = Echelon::new(f);
            for c in &ch.list {
                let mut v = SparseVec::unit(ch.index[c]);
                for (k, &o) in g.orders.iter().enumerate() {
                    let mut sum = SparseVec::zero();
                    let mut cur = v.clone();
                    for _ in 0..o {
                        sum = sum.add(f, &cur);
                        cur = act_chain(f, &act[k], ch, &cur);
                    }
                    v = sum;
                }
                ech.insert(&v);
            }
            per.insert(*s, ech.rows().to_vec());
        }
        inv.push(per);
    }
    let rank_at = |n: usize| -> usize {
        if n <= 1 || n >= built {
            return 0;
        }
        let mut r = 0;
        for (s, vs) in &inv[n] {
            let (src, Some(dst)) = (&bc.chains[n][s], bc.chains[n - 1].get(s)) else { continue };
            let cols: Vec<SparseVec> = vs
                .iter()
                .map(|v| v.0.iter().fold(SparseVec::zero(), |acc, &(i, x)| acc.add_scaled(f, &boundary(&a, &src.list[i as usize], dst), x)))
                .collect();
            r += sparse_rank(f, &cols);
        }
        r
    };
    let ranks: Vec<usize> = (0..=built).map(rank_at).collect();
    let mut values = Vec::new();
    for n in 0..=max_degree {
        if n + 1 >= built {
            break;
        }
        let dim: usize = inv[n].values().map(|v| v.len()).sum();
        values.push(dim - ranks[n] - ranks[n + 1]);
    }
    let cutoff = if values.len() <= max_degree { Some(values.len()) } else { None };
    Ok(BettiTable { algebra: alg.name.clone(), method: Method::Bar, values, cutoff })
}

/// diagonal action of one automorphism on a combination of chains of one (n, s) piece
fn act_chain(f: &Field, g: &[SparseVec], ch: &Chains, v: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    for &(i, c) in &v.0 {
        let chain = &ch.list[i as usize];
        let mut terms: Vec<(Vec<u32>, Fe)> = vec![(Vec::with_capacity(chain.len()), c)];
        for &x in chain {
            let mut next = Vec::new();
            for (w, a) in &terms {
                for &(y, b) in &g[x as usize].0 {
                    let mut w2 = w.clone();
                    w2.push(y);
                    next.push((w2, f.mul(*a, b)));
                }
            }
            terms = next;
        }
        for (w, a) in terms {
            let idx = *ch.index.get(&w).expect("automorphisms preserve internal degree");
            out.push((idx, a));
        }
    }
    SparseVec::from_pairs(f, out)
}

/// Heuristic growth read-off for a Betti table. Never a proof of finite generation.
#[derive(Clone, Debug, Serialize)]
pub struct FgcProbe {
    pub heuristic: bool,
    pub apparent_degree: Option<usize>,
    pub note: String,
}

/// Smallest d such that the (d+1)-th finite differences of b_1, b_2, … vanish
/// with at least two witnessed zeros.
pub fn fgc_probe(values: &[usize]) -> FgcProbe {
    if values.len() < 4 {
        return FgcProbe { heuristic: true, apparent_degree: None, note: "table too short (need at least 4 entries)".into() };
    }
    let tail: Vec<i64> = values[1..].iter().map(|&v| v as i64).collect();
    let mut diff = tail.clone();
    for d in 0..tail.len() {
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
        if diff.len() < 2 {
            break;
        }
        if diff.iter().all(|&x| x == 0) {
            return FgcProbe {
                heuristic: true,
                apparent_degree: Some(d),
                note: format!("HEURISTIC: polynomial growth of degree {d} within the table, consistent with fgc"),
            };
        }
    }
    FgcProbe { heuristic: true, apparent_degree: None, note: "HEURISTIC: no polynomial fit within table".into() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use finhopf_core::{Generator, NcPoly, Presentation};

    fn truncated(p: u32, e: u32) -> FinBasisAlgebra {
        let f = Field::prime(p).unwrap();
        let mut pres = Presentation::new(format!("k[x]/(x^{e})"), &f, vec![Generator::new("x")]);
        pres.push(NcPoly::letter(0).pow(&f, e));
        FinBasisAlgebra::from_presentation(&pres, None).unwrap().with_counit(vec![Fe::ZERO])
    }

    #[test]
    fn ground_field() {
        let f = Field::prime(3).unwrap();
        let mut pres = Presentation::new("k", &f, vec![Generator::new("x")]);
        pres.push(NcPoly::letter(0));
        let k = FinBasisAlgebra::from_presentation(&pres, None).unwrap().with_counit(vec![Fe::ZERO]);
        assert_eq!(bar_betti(&k, 4, Budget::default()).values, vec![1, 0, 0, 0, 0]);
    }

    #[test]
    fn truncated_polynomial() {
        let a = truncated(3, 3);
        let bar = bar_betti(&a, 6, Budget::default());
        assert_eq!(bar.values, vec![1; 7]);
        assert_eq!(minimal_graded_betti(&a, 6).unwrap().values, vec![1; 7]);
        assert!(check_bar_dd(&a, 5, Budget::default()).pass);
    }

    #[test]
    fn polynomial_in_two_variables_mod_squares() {
        // k[x,y]/(x^2, y^2, xy - yx) at p = 3: Ext has Poincaré series 1/(1-t)^2
        let f = Field::prime(3).unwrap();
        let mut pres = Presentation::new("ext", &f, vec![Generator::new("x"), Generator::new("y")]);
        pres.push(NcPoly::letter(0).pow(&f, 2));
        pres.push(NcPoly::letter(1).pow(&f, 2));
        pres.push(NcPoly::q_commutator(&f, &NcPoly::letter(1), &NcPoly::letter(0), Fe::ONE));
        let a = FinBasisAlgebra::from_presentation(&pres, None).unwrap().with_counit(vec![Fe::ZERO; 2]);
        let bar = bar_betti(&a, 4, Budget::default());
        let min = minimal_graded_betti(&a, 4).unwrap();
        assert_eq!(bar.values, vec![1, 2, 3, 4, 5]);
        assert_eq!(min.values, bar.values);
    }

    #[test]
    fn invariants_refuse_when_not_semisimple() {
        let a = truncated(3, 3);
        let g = GroupAction { orders: vec![3], action: vec![(0..3).map(SparseVec::unit).collect()] };
        assert!(invariant_betti(&a, &g, 3, Budget::default()).is_err());
        let triv = invariant_betti(&a, &GroupAction::trivial(3), 4, Budget::default()).unwrap();
        assert_eq!(triv.values, bar_betti(&a, 4, Budget::default()).values);
    }

    #[test]
    fn probe() {
        assert_eq!(fgc_probe(&[1, 1, 1, 1, 1]).apparent_degree, Some(0));
        assert_eq!(fgc_probe(&[1, 2, 3, 4, 5, 6]).apparent_degree, Some(1));
        assert_eq!(fgc_probe(&[1, 2, 4, 8, 16, 32, 64]).apparent_degree, None);
        assert_eq!(fgc_probe(&[1, 2]).apparent_degree, None);
    }

    #[test]
    fn budget_gives_partial_table() {
        let a = truncated(3, 3);
        let t = bar_betti(&a, 10, Budget { max_chains: 20 });
        assert!(t.cutoff.is_some());
        assert!(t.values.len() < 11);
        assert_eq!(t.values, vec![1; t.values.len()]);
    }
}
