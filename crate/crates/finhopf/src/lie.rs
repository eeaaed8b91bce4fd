//! Restricted Lie algebras, matched pairs, double crossproducts and
//! restricted enveloping algebras.

use finhopf_core::{CoreError, DenseMatrix, Fe, Field, FinBasisAlgebra, Generator, Letter, NcPoly, Presentation, Result, SparseVec, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::check::{Check, Report};
use crate::hopf::{HopfAlgebra, Tensor};
use crate::nichols::ahz_lattice;

/// Bracket on basis pairs and a p-operation on basis elements.
#[derive(Clone, Debug)]
pub struct RestrictedLie {
    pub field: Field,
    pub names: Vec<String>,
    /// bracket[i][j] = [e_i, e_j]
    pub bracket: Vec<Vec<SparseVec>>,
    /// pop[i] = e_i^[p]
    pub pop: Vec<SparseVec>,
    /// positive weights making the bracket homogeneous, when known
    pub weights: Option<Vec<u32>>,
}

impl RestrictedLie {
    /// Brackets [e_i, e_j] for listed pairs; the rest are zero or filled by antisymmetry.
    pub fn new(field: &Field, names: Vec<String>, brackets: &[(usize, usize, SparseVec)], pop: Vec<SparseVec>) -> RestrictedLie {
        let n = names.len();
        let mut bracket = vec![vec![SparseVec::zero(); n]; n];
        for (i, j, v) in brackets {
            bracket[*i][*j] = v.clone();
            bracket[*j][*i] = v.neg(field);
        }
        RestrictedLie { field: field.clone(), names, bracket, pop, weights: None }
    }

    pub fn abelian(field: &Field, names: Vec<String>) -> RestrictedLie {
        let n = names.len();
        RestrictedLie::new(field, names, &[], vec![SparseVec::zero(); n])
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn p(&self) -> u32 {
        self.field.p()
    }

    pub fn br(&self, a: &SparseVec, b: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut out = Vec::new();
        for &(i, x) in &a.0 {
            for &(j, y) in &b.0 {
                let c = f.mul(x, y);
                for &(k, z) in &self.bracket[i as usize][j as usize].0 {
                    out.push((k, f.mul(c, z)));
                }
            }
        }
        SparseVec::from_pairs(f, out)
    }

    pub fn ad_matrix(&self, a: &SparseVec) -> DenseMatrix {
        let n = self.dim();
        let cols: Vec<SparseVec> = (0..n as u32).map(|j| self.br(a, &SparseVec::unit(j))).collect();
        DenseMatrix::from_sparse_columns(n, &cols)
    }

    /// Coefficients of X^0..X^{p-2} in ad(Xs + t)^{p-1}(s).
    pub fn s_coeffs(&self, s: &SparseVec, t: &SparseVec) -> Vec<SparseVec> {
        let f = &self.field;
        let p = self.p() as usize;
        let mut cur = vec![s.clone()];
        for _ in 0..p - 1 {
            let mut next = vec![SparseVec::zero(); cur.len() + 1];
            for (k, v) in cur.iter().enumerate() {
                if v.is_zero() {
                    continue;
                }
                next[k] = next[k].add(f, &self.br(t, v));
                next[k + 1] = next[k + 1].add(f, &self.br(s, v));
            }
            cur = next;
        }
        cur.truncate(p - 1);
        cur
    }

    /// s_i(s, t) for 1 ≤ i ≤ p-1.
    pub fn s_poly(&self, i: usize, s: &SparseVec, t: &SparseVec) -> SparseVec {
        assert!(i >= 1 && i < self.p() as usize);
        self.s_coeffs(s, t).swap_remove(i - 1)
    }

    /// Σ s_i(s, t)/i
    pub fn s_sum(&self, s: &SparseVec, t: &SparseVec) -> SparseVec {
        let f = &self.field;
        let mut acc = SparseVec::zero();
        for (k, v) in self.s_coeffs(s, t).iter().enumerate() {
            acc = acc.add_scaled(f, v, f.inv(f.from_i64(k as i64 + 1)));
        }
        acc
    }

    /// Extension of the basis p-operation by (ks)^[p] = k^p s^[p] and the s_i sum rule.
    pub fn p_power(&self, v: &SparseVec) -> SparseVec {
        let f = &self.field;
        let p = self.p() as i64;
        let mut acc = SparseVec::zero();
        let mut acc_p = SparseVec::zero();
        for &(i, c) in &v.0 {
            let term = SparseVec::single(i, c);
            let term_p = self.pop[i as usize].scale(f, f.pow(c, p));
            let mixed = self.s_sum(&acc, &term);
            acc_p = acc_p.add(f, &term_p).add(f, &mixed);
            acc = acc.add(f, &term);
        }
        acc_p
    }

    pub fn random_element(&self, rng: &mut impl Rng) -> SparseVec {
        let q = self.field.order();
        let dense: Vec<Fe> = (0..self.dim()).map(|_| Fe(rng.gen_range(0..q))).collect();
        SparseVec::from_dense(&dense)
    }

    pub fn check_antisymmetry(&self) -> Check {
        let f = &self.field;
        for i in 0..self.dim() {
            if !self.bracket[i][i].is_zero() {
                return Check::fail("antisymmetry", format!("[{0},{0}] ≠ 0", self.names[i]));
            }
            for j in 0..i {
                if self.bracket[i][j] != self.bracket[j][i].neg(f) {
                    return Check::fail("antisymmetry", format!("[{},{}]", self.names[i], self.names[j]));
                }
            }
        }
        Check::pass("antisymmetry")
    }

    pub fn check_jacobi(&self) -> Check {
        let f = &self.field;
        let n = self.dim() as u32;
        let e = SparseVec::unit;
        for a in 0..n {
            for b in a + 1..n {
                for c in b + 1..n {
                    let s = self
                        .br(&e(a), &self.br(&e(b), &e(c)))
                        .add(f, &self.br(&e(b), &self.br(&e(c), &e(a))))
                        .add(f, &self.br(&e(c), &self.br(&e(a), &e(b))));
                    if !s.is_zero() {
                        let l = &self.names;
                        return Check::fail("Jacobi", format!("{}, {}, {}", l[a as usize], l[b as usize], l[c as usize]));
                    }
                }
            }
        }
        Check::pass("Jacobi")
    }

    fn check_ad_p(&self, s: &SparseVec) -> bool {
        let f = &self.field;
        self.ad_matrix(&self.p_power(s)) == self.ad_matrix(s).pow(f, self.p() as u64)
    }

    /// Antisymmetry, Jacobi, and the three p-operation identities; the latter on
    /// the basis and on `samples` seeded random elements.
    pub fn verify(&self, seed: u64, samples: usize) -> Report {
        let f = &self.field;
        let mut rep = Report::default();
        rep.push(self.check_antisymmetry());
        rep.push(self.check_jacobi());
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ad = Check::pass("ad(s^[p]) = ad(s)^p");
        for i in 0..self.dim() as u32 {
            if !self.check_ad_p(&SparseVec::unit(i)) {
                ad = Check::fail("ad(s^[p]) = ad(s)^p", format!("s = {}", self.names[i as usize]));
                break;
            }
        }
        if ad.pass {
            for k in 0..samples {
                let s = self.random_element(&mut rng);
                if !self.check_ad_p(&s) {
                    ad = Check::fail("ad(s^[p]) = ad(s)^p", format!("random sample {k}"));
                    break;
                }
            }
        }
        rep.push(ad);
        let mut semi = Check::pass("(ks)^[p] = k^p s^[p]");
        let mut sum = Check::pass("(s+t)^[p] sum rule");
        let p = self.p() as i64;
        for k in 0..samples {
            let s = self.random_element(&mut rng);
            let t = self.random_element(&mut rng);
            let c = Fe(rng.gen_range(0..f.order()));
            if semi.pass && self.p_power(&s.scale(f, c)) != self.p_power(&s).scale(f, f.pow(c, p)) {
                semi = Check::fail("(ks)^[p] = k^p s^[p]", format!("random sample {k}"));
            }
            let lhs = self.p_power(&s.add(f, &t));
            let rhs = self.p_power(&s).add(f, &self.p_power(&t)).add(f, &self.s_sum(&s, &t));
            if sum.pass && lhs != rhs {
                sum = Check::fail("(s+t)^[p] sum rule", format!("random sample {k}"));
            }
        }
        rep.push(semi);
        rep.push(sum);
        rep
    }

    /// Subalgebra spanned by the basis elements `idx`, assumed closed.
    pub fn restrict(&self, idx: &[usize]) -> Result<RestrictedLie> {
        let f = &self.field;
        let pos = |k: u32| idx.iter().position(|&i| i == k as usize);
        let map = |v: &SparseVec| -> Result<SparseVec> {
            let mut out = Vec::new();
            for &(k, c) in &v.0 {
                let j = pos(k).ok_or_else(|| CoreError::Presentation(format!("{} leaves the subalgebra", self.names[k as usize])))?;
                out.push((j as u32, c));
            }
            Ok(SparseVec::from_pairs(f, out))
        };
        let names = idx.iter().map(|&i| self.names[i].clone()).collect();
        let bracket = idx.iter().map(|&i| idx.iter().map(|&j| map(&self.bracket[i][j])).collect::<Result<Vec<_>>>()).collect::<Result<Vec<_>>>()?;
        let pop = idx.iter().map(|&i| map(&self.pop[i])).collect::<Result<Vec<_>>>()?;
        let weights = self.weights.as_ref().map(|w| idx.iter().map(|&i| w[i]).collect());
        Ok(RestrictedLie { field: f.clone(), names, bracket, pop, weights })
    }

    pub fn same_as(&self, other: &RestrictedLie) -> bool {
        self.bracket == other.bracket && self.pop == other.pop
    }
}

/// (𝔤, 𝔩, ▷, ◁) with ▷: 𝔩 × 𝔤 → 𝔤 and ◁: 𝔩 × 𝔤 → 𝔩 on basis pairs.
#[derive(Clone, Debug)]
pub struct MatchedPair {
    pub g: RestrictedLie,
    pub l: RestrictedLie,
    /// act[ℓ][x] = ℓ ▷ x
    pub act: Vec<Vec<SparseVec>>,
    /// ract[ℓ][x] = ℓ ◁ x
    pub ract: Vec<Vec<SparseVec>>,
}

fn bilinear(f: &Field, table: &[Vec<SparseVec>], a: &SparseVec, b: &SparseVec) -> SparseVec {
    let mut out = Vec::new();
    for &(i, x) in &a.0 {
        for &(j, y) in &b.0 {
            let c = f.mul(x, y);
            for &(k, z) in &table[i as usize][j as usize].0 {
                out.push((k, f.mul(c, z)));
            }
        }
    }
    SparseVec::from_pairs(f, out)
}

impl MatchedPair {
    pub fn trivial(g: RestrictedLie, l: RestrictedLie) -> MatchedPair {
        let (ng, nl) = (g.dim(), l.dim());
        MatchedPair { act: vec![vec![SparseVec::zero(); ng]; nl], ract: vec![vec![SparseVec::zero(); ng]; nl], g, l }
    }

    fn field(&self) -> &Field {
        &self.g.field
    }

    pub fn tr(&self, l: &SparseVec, x: &SparseVec) -> SparseVec {
        bilinear(self.field(), &self.act, l, x)
    }

    pub fn tl(&self, l: &SparseVec, x: &SparseVec) -> SparseVec {
        bilinear(self.field(), &self.ract, l, x)
    }

    /// Lie algebra on 𝔤 ⊕ 𝔩 (𝔤 first) with [ℓ, y] = ℓ ▷ y + ℓ ◁ y.
    pub fn double_cross_unchecked(&self) -> RestrictedLie {
        let f = self.field();
        let (ng, nl) = (self.g.dim(), self.l.dim());
        let n = ng + nl;
        let shift = |v: &SparseVec, s: usize| SparseVec(v.0.iter().map(|&(i, c)| (i + s as u32, c)).collect());
        let mut bracket = vec![vec![SparseVec::zero(); n]; n];
        for i in 0..ng {
            for j in 0..ng {
                bracket[i][j] = self.g.bracket[i][j].clone();
            }
        }
        for i in 0..nl {
            for j in 0..nl {
                bracket[ng + i][ng + j] = shift(&self.l.bracket[i][j], ng);
            }
            for y in 0..ng {
                let v = self.act[i][y].add(f, &shift(&self.ract[i][y], ng));
                bracket[y][ng + i] = v.neg(f);
                bracket[ng + i][y] = v;
            }
        }
        let mut pop: Vec<SparseVec> = self.g.pop.clone();
        pop.extend(self.l.pop.iter().map(|v| shift(v, ng)));
        let mut names = self.g.names.clone();
        names.extend(self.l.names.iter().cloned());
        let weights = match (&self.g.weights, &self.l.weights) {
            (Some(a), Some(b)) => Some(a.iter().chain(b).copied().collect()),
            _ => None,
        };
        RestrictedLie { field: f.clone(), names, bracket, pop, weights }
    }

    /// Module axioms, the two matched-pair identities, and the restricted
    /// conditions on every basis pair.
    pub fn verify(&self) -> Report {
        let f = self.field();
        let (ng, nl) = (self.g.dim() as u32, self.l.dim() as u32);
        let e = SparseVec::unit;
        let gn = &self.g.names;
        let ln = &self.l.names;
        let mut rep = Report::default();
        let mut left = Check::pass("▷ is a left action");
        let mut right = Check::pass("◁ is a right action");
        let mut mp1 = Check::pass("ℓ▷[x,y] identity");
        let mut mp2 = Check::pass("[ℓ,m]◁x identity");
        'outer: for a in 0..nl {
            for b in 0..nl {
                for x in 0..ng {
                    let (l, m, xx) = (e(a), e(b), e(x));
                    let lhs = self.tr(&self.l.br(&l, &m), &xx);
                    let rhs = self.tr(&l, &self.tr(&m, &xx)).sub(f, &self.tr(&m, &self.tr(&l, &xx)));
                    if left.pass && lhs != rhs {
                        left = Check::fail("▷ is a left action", format!("[{},{}]▷{}", ln[a as usize], ln[b as usize], gn[x as usize]));
                    }
                    let lhs = self.tl(&self.l.br(&l, &m), &xx);
                    let rhs = self
                        .l
                        .br(&self.tl(&l, &xx), &m)
                        .add(f, &self.l.br(&l, &self.tl(&m, &xx)))
                        .add(f, &self.tl(&l, &self.tr(&m, &xx)))
                        .sub(f, &self.tl(&m, &self.tr(&l, &xx)));
                    if mp2.pass && lhs != rhs {
                        mp2 = Check::fail("[ℓ,m]◁x identity", format!("ℓ={}, m={}, x={}", ln[a as usize], ln[b as usize], gn[x as usize]));
                    }
                    if !left.pass && !mp2.pass {
                        break 'outer;
                    }
                }
            }
        }
        'outer2: for a in 0..nl {
            for x in 0..ng {
                for y in 0..ng {
                    let (l, xx, yy) = (e(a), e(x), e(y));
                    let lhs = self.tl(&l, &self.g.br(&xx, &yy));
                    let rhs = self.tl(&self.tl(&l, &xx), &yy).sub(f, &self.tl(&self.tl(&l, &yy), &xx));
                    if right.pass && lhs != rhs {
                        right = Check::fail("◁ is a right action", format!("{}◁[{},{}]", ln[a as usize], gn[x as usize], gn[y as usize]));
                    }
                    let lhs = self.tr(&l, &self.g.br(&xx, &yy));
                    let rhs = self
                        .g
                        .br(&self.tr(&l, &xx), &yy)
                        .add(f, &self.g.br(&xx, &self.tr(&l, &yy)))
                        .add(f, &self.tr(&self.tl(&l, &xx), &yy))
                        .sub(f, &self.tr(&self.tl(&l, &yy), &xx));
                    if mp1.pass && lhs != rhs {
                        mp1 = Check::fail("ℓ▷[x,y] identity", format!("ℓ={}, x={}, y={}", ln[a as usize], gn[x as usize], gn[y as usize]));
                    }
                    if !right.pass && !mp1.pass {
                        break 'outer2;
                    }
                }
            }
        }
        rep.push(left);
        rep.push(right);
        rep.push(mp1);
        rep.push(mp2);
        rep.extend(self.verify_restricted_conditions());
        rep
    }

    /// ℓ^[p] acts on 𝔤 as ℓ^p, y^[p] acts on 𝔩 as y^p, and ad(s^[p]) = ad(s)^p
    /// on the opposite factor for basis s of each factor, computed in 𝔤 ⋈ 𝔩.
    fn verify_restricted_conditions(&self) -> Report {
        let f = self.field();
        let p = self.g.p();
        let (ng, nl) = (self.g.dim() as u32, self.l.dim() as u32);
        let e = SparseVec::unit;
        let mut rep = Report::default();
        let mut pa = Check::pass("ℓ^[p]▷y = ℓ^p▷y");
        let mut pb = Check::pass("ℓ◁y^[p] = ℓ◁y^p");
        for a in 0..nl {
            for y in 0..ng {
                let mut v = e(y);
                for _ in 0..p {
                    v = self.tr(&e(a), &v);
                }
                if pa.pass && self.tr(&self.l.pop[a as usize], &e(y)) != v {
                    pa = Check::fail("ℓ^[p]▷y = ℓ^p▷y", format!("ℓ={}, y={}", self.l.names[a as usize], self.g.names[y as usize]));
                }
                let mut w = e(a);
                for _ in 0..p {
                    w = self.tl(&w, &e(y));
                }
                if pb.pass && self.tl(&e(a), &self.g.pop[y as usize]) != w {
                    pb = Check::fail("ℓ◁y^[p] = ℓ◁y^p", format!("ℓ={}, y={}", self.l.names[a as usize], self.g.names[y as usize]));
                }
            }
        }
        rep.push(pa);
        rep.push(pb);
        let s = self.double_cross_unchecked();
        let mut ga = Check::pass("ad(y^[p]) = ad(y)^p on 𝔩");
        let mut la = Check::pass("ad(ℓ^[p]) = ad(ℓ)^p on 𝔤");
        let adp = |u: u32, v: u32| -> bool {
            let mut w = e(v);
            for _ in 0..p {
                w = s.br(&e(u), &w);
            }
            s.br(&s.pop[u as usize], &e(v)) == w
        };
        for y in 0..ng {
            for a in 0..nl {
                if ga.pass && !adp(y, ng + a) {
                    ga = Check::fail("ad(y^[p]) = ad(y)^p on 𝔩", format!("y={}, ℓ={}", self.g.names[y as usize], self.l.names[a as usize]));
                }
                if la.pass && !adp(ng + a, y) {
                    la = Check::fail("ad(ℓ^[p]) = ad(ℓ)^p on 𝔤", format!("ℓ={}, y={}", self.l.names[a as usize], self.g.names[y as usize]));
                }
            }
        }
        let _ = f;
        rep.push(ga);
        rep.push(la);
        rep
    }

    /// 𝔤 ⋈ 𝔩, rejected unless the matched pair verifies and the result is restricted.
    pub fn double_cross(&self, seed: u64) -> Result<RestrictedLie> {
        let rep = self.verify();
        if let Some(c) = rep.failures().first() {
            return Err(CoreError::Presentation(format!("matched pair fails {}: {}", c.name, c.witness.clone().unwrap_or_default())));
        }
        let s = self.double_cross_unchecked();
        let rep = s.verify(seed, 50);
        if let Some(c) = rep.failures().first() {
            return Err(CoreError::Presentation(format!("double cross fails {}: {}", c.name, c.witness.clone().unwrap_or_default())));
        }
        Ok(s)
    }
}

/// Restricted enveloping algebra with primitive generators.
pub fn restricted_enveloping(l: &RestrictedLie, name: &str) -> Result<HopfAlgebra> {
    let f = &l.field;
    let n = l.dim();
    let gens: Vec<Generator> = match &l.weights {
        Some(w) => l.names.iter().zip(w).map(|(s, &w)| Generator::weighted(s.clone(), w)).collect(),
        None => l.names.iter().map(Generator::new).collect(),
    };
    let mut pres = Presentation::new(name, f, gens);
    let lin = |v: &SparseVec| NcPoly::from_terms(f, v.0.iter().map(|&(k, c)| (Word::letter(k as Letter), c)).collect());
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (NcPoly::letter(i as Letter), NcPoly::letter(j as Letter));
            pres.push(NcPoly::q_commutator(f, &a, &b, Fe::ONE).sub(f, &lin(&l.bracket[i][j])));
        }
    }
    for i in 0..n {
        pres.push(NcPoly::letter(i as Letter).pow(f, l.p()).sub(f, &lin(&l.pop[i])));
    }
    pres.expected_dim = Some((l.p() as usize).pow(n as u32));
    let alg = FinBasisAlgebra::from_presentation(&pres, None)?;
    let mut delta = Vec::new();
    let mut anti = Vec::new();
    for x in 0..n as Letter {
        let v = alg.gen_vec(x);
        let xi = v.0[0].0;
        delta.push(Tensor::from_pairs(f, vec![((xi, 0), Fe::ONE), ((0, xi), Fe::ONE)]));
        anti.push(v.neg(f));
    }
    Ok(HopfAlgebra::new(alg, delta, vec![Fe::ZERO; n], anti, Vec::new()))
}

/// V(𝒢) ⋊ 𝔫 with its matched-pair description and index helpers.
#[derive(Clone, Debug)]
pub struct GhostLie {
    pub t: usize,
    /// one row per point
    pub ghost: Vec<Vec<u32>>,
    /// (point, multi-index) for each v, in basis order after the E's
    pub v_index: Vec<(usize, Vec<u32>)>,
    pub pair: MatchedPair,
    pub lie: RestrictedLie,
}

impl GhostLie {
    pub fn e(&self, j: usize) -> usize {
        j
    }

    /// basis index of v_{h,𝐦}; h counts points from 0
    pub fn v(&self, h: usize, m: &[u32]) -> Option<usize> {
        self.v_index.iter().position(|(hh, mm)| *hh == h && mm == m).map(|k| self.t + k)
    }
}

fn v_name(t: usize, h: usize, m: &[u32], theta: usize) -> String {
    let hh = t + h + 1;
    if theta == 0 {
        return format!("v{}", m.iter().map(|x| x.to_string()).collect::<String>());
    }
    format!("v{hh}_{}", m.iter().map(|x| x.to_string()).collect::<String>())
}

/// 𝔩 = V(𝒢) ⋊ 𝔫 as the double cross of 𝔫 = span{E_j} and the abelian V(𝒢),
/// with v ◁ E_j = -E_j·v, ▷ = 0, and zero p-operation.
pub fn build_l(field: &Field, t: usize, ghost: &[Vec<u32>]) -> Result<GhostLie> {
    let p = field.p();
    if ghost.iter().any(|r| r.len() != t || r.iter().any(|&g| g >= p)) {
        return Err(CoreError::Presentation(format!("ghost entries must lie in 0..{p} with {t} columns")));
    }
    let theta = t + ghost.len();
    let enames: Vec<String> = if t == 1 { vec!["E".into()] } else { (1..=t).map(|j| format!("E{j}")).collect() };
    let mut v_index = Vec::new();
    for (h, g) in ghost.iter().enumerate() {
        for m in ahz_lattice(g) {
            v_index.push((h, m));
        }
    }
    let vnames: Vec<String> = v_index.iter().map(|(h, m)| v_name(t, *h, m, theta)).collect();
    let mut n = RestrictedLie::abelian(field, enames);
    n.weights = Some(vec![1; t]);
    let mut v = RestrictedLie::abelian(field, vnames);
    v.weights = Some(v_index.iter().map(|(_, m)| 1 + m.iter().sum::<u32>()).collect());
    let mut pair = MatchedPair::trivial(n, v);
    for (k, (h, m)) in v_index.iter().enumerate() {
        for j in 0..t {
            if m[j] < ghost[*h][j] {
                let mut m2 = m.clone();
                m2[j] += 1;
                let k2 = v_index.iter().position(|(hh, mm)| hh == h && *mm == m2).unwrap();
                pair.ract[k][j] = SparseVec::single(k2 as u32, field.neg(Fe::ONE));
            }
        }
    }
    let lie = pair.double_cross(0)?;
    Ok(GhostLie { t, ghost: ghost.to_vec(), v_index, pair, lie })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    fn sl2(f: &Field) -> RestrictedLie {
        // E, F, H with [E,F] = H, [H,E] = 2E, [H,F] = -2F; E^[p] = F^[p] = 0, H^[p] = H
        let names = vec!["E".into(), "F".into(), "H".into()];
        let br = vec![
            (0, 1, SparseVec::unit(2)),
            (2, 0, SparseVec::single(0, f.from_i64(2))),
            (2, 1, SparseVec::single(1, f.from_i64(-2))),
        ];
        RestrictedLie::new(f, names, &br, vec![SparseVec::zero(), SparseVec::zero(), SparseVec::unit(2)])
    }

    #[test]
    fn abelian_s_polys_vanish() {
        let f = f3();
        let l = RestrictedLie::abelian(&f, vec!["a".into(), "b".into()]);
        for i in 1..3 {
            assert!(l.s_poly(i, &SparseVec::unit(0), &SparseVec::unit(1)).is_zero());
        }
        assert!(l.verify(1, 20).all_pass());
    }

    #[test]
    fn sl2_is_restricted() {
        for p in [3, 5] {
            let f = Field::prime(p).unwrap();
            let rep = sl2(&f).verify(7, 100);
            assert!(rep.all_pass(), "{rep}");
        }
    }

    #[test]
    fn corrupted_p_operation_fails() {
        let f = f3();
        let mut l = build_l(&f, 1, &[vec![1]]).unwrap().lie;
        l.pop[0] = SparseVec::unit(0);
        let rep = l.verify(3, 10);
        let c = rep.get("ad(s^[p]) = ad(s)^p").unwrap();
        assert!(!c.pass);
        assert_eq!(c.witness.as_deref(), Some("s = E"));
    }

    #[test]
    fn sl2_factorization_matched_pair() {
        let f = f3();
        let s = sl2(&f);
        let g = s.restrict(&[1]).unwrap();
        let l = s.restrict(&[2, 0]).unwrap();
        let mut mp = MatchedPair::trivial(g, l);
        // [H,F] = -2F = H▷F, [E,F] = H = E◁F
        mp.act[0][0] = SparseVec::single(0, f.from_i64(-2));
        mp.ract[1][0] = SparseVec::unit(0);
        let rep = mp.verify();
        assert!(rep.all_pass(), "{rep}");
        let d = mp.double_cross(1).unwrap();
        assert!(d.restrict(&[0]).unwrap().same_as(&mp.g));
        assert!(d.restrict(&[1, 2]).unwrap().same_as(&mp.l));
        // a wrong action breaks the identities
        mp.act[0][0] = SparseVec::zero();
        assert!(!mp.verify().all_pass());
    }

    #[test]
    fn l_for_single_ghost() {
        let f = f3();
        let gl = build_l(&f, 1, &[vec![1]]).unwrap();
        assert_eq!(gl.lie.dim(), 3);
        assert_eq!(gl.lie.names, vec!["E", "v2_0", "v2_1"]);
        let e = SparseVec::unit(0);
        assert_eq!(gl.lie.br(&e, &SparseVec::unit(1)), SparseVec::unit(2));
        assert!(gl.lie.br(&e, &SparseVec::unit(2)).is_zero());
        // (ad E)^{1+𝒢}(v) = 0
        let ad = gl.lie.ad_matrix(&e);
        let col = ad.pow(&f, 2).column_sparse(1);
        assert!(col.is_zero());
        let u = restricted_enveloping(&gl.lie, "u(l)").unwrap();
        assert_eq!(u.dim(), 27);
        assert!(u.check_hopf().all_pass());
    }

    #[test]
    fn l_for_two_blocks() {
        let f = f3();
        let gl = build_l(&f, 2, &[vec![1, 1]]).unwrap();
        assert_eq!(gl.lie.dim(), 6);
        let u = restricted_enveloping(&gl.lie, "u(l)").unwrap();
        assert_eq!(u.dim(), 729);
        // v_{h,m} = (ad E1)^{m1} (ad E2)^{m2} v_h inside u(l)
        let a = &u.alg;
        for (h, m) in &gl.v_index {
            let mut cur = a.gen_vec(gl.v(*h, &[0, 0]).unwrap() as Letter);
            for j in (0..2).rev() {
                for _ in 0..m[j] {
                    cur = a.q_commutator(&a.gen_vec(j as Letter), &cur, Fe::ONE);
                }
            }
            assert_eq!(cur, a.gen_vec(gl.v(*h, m).unwrap() as Letter));
        }
    }
}
