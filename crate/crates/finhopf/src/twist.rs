//! Bicharacter 2-cocycles on Γ = (ℤ/f)^θ and the twists they induce on
//! realizations, graded braided algebras and bosonizations.

use finhopf_core::{ColumnSolver, CoreError, Fe, Field, FinBasisAlgebra, Letter, Result, SparseVec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustc_hash::FxHashMap;

use crate::check::{Check, Report};
use crate::hopf::{convolution_inverse, is_algebra_map, is_coalgebra_map, HopfAlgebra, LinearMap, Tensor};
use crate::nichols::{braided_from_paper_data, group_exponents, group_index, Bosonization, Nichols, PaperData, Realization};

/// σ(g^a, g^b) = ∏ table[i][j]^{a_i b_j}
#[derive(Clone, Debug)]
pub struct GroupCocycle {
    pub field: Field,
    pub f: u32,
    pub theta: usize,
    pub table: Vec<Vec<Fe>>,
}

impl GroupCocycle {
    pub fn trivial(field: &Field, f: u32, theta: usize) -> GroupCocycle {
        GroupCocycle { field: field.clone(), f, theta, table: vec![vec![Fe::ONE; theta]; theta] }
    }

    pub fn group_order(&self) -> u32 {
        self.f.pow(self.theta as u32)
    }

    pub fn eval(&self, a: &[u32], b: &[u32]) -> Fe {
        let fl = &self.field;
        let mut acc = Fe::ONE;
        for i in 0..self.theta {
            for j in 0..self.theta {
                let e = (a[i] as i64) * (b[j] as i64);
                if e != 0 {
                    acc = fl.mul(acc, fl.pow(self.table[i][j], e));
                }
            }
        }
        acc
    }

    pub fn eval_index(&self, a: u32, b: u32) -> Fe {
        self.eval(&group_exponents(a, self.f, self.theta), &group_exponents(b, self.f, self.theta))
    }

    /// ϑ(g, h) = σ(g, h) σ(h, g)⁻¹
    pub fn vartheta(&self, a: &[u32], b: &[u32]) -> Fe {
        self.field.div(self.eval(a, b), self.eval(b, a))
    }

    /// entrywise inverse, which is the convolution inverse of a bicharacter
    pub fn inverse(&self) -> GroupCocycle {
        let table = self.table.iter().map(|r| r.iter().map(|&c| self.field.inv(c)).collect()).collect();
        GroupCocycle { table, ..self.clone() }
    }

    pub fn is_trivial(&self) -> bool {
        self.table.iter().flatten().all(|&c| c == Fe::ONE)
    }

    /// Each σ(g_i, g_j) has order dividing f, so the table descends to (ℤ/f)^θ.
    pub fn check_well_defined(&self) -> Check {
        for i in 0..self.theta {
            for j in 0..self.theta {
                let c = self.table[i][j];
                if c.is_zero() || !self.f.is_multiple_of(self.field.mult_order(c)) {
                    return Check::fail("σ well defined on Γ", format!("σ(g{}, g{}) has order not dividing {}", i + 1, j + 1, self.f));
                }
            }
        }
        Check::pass("σ well defined on Γ")
    }

    fn random_element(&self, rng: &mut ChaCha8Rng) -> Vec<u32> {
        (0..self.theta).map(|_| rng.gen_range(0..self.f)).collect()
    }

    /// σ(gh, k)σ(g, h) = σ(g, hk)σ(h, k) on random triples
    pub fn check_cocycle(&self, seed: u64, samples: usize) -> Check {
        let fl = &self.field;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let add = |a: &[u32], b: &[u32]| -> Vec<u32> { a.iter().zip(b).map(|(x, y)| (x + y) % self.f).collect() };
        for _ in 0..samples {
            let (g, h, k) = (self.random_element(&mut rng), self.random_element(&mut rng), self.random_element(&mut rng));
            let lhs = fl.mul(self.eval(&add(&g, &h), &k), self.eval(&g, &h));
            let rhs = fl.mul(self.eval(&g, &add(&h, &k)), self.eval(&h, &k));
            if lhs != rhs {
                return Check::fail("2-cocycle identity", format!("g = {g:?}, h = {h:?}, k = {k:?}"));
            }
        }
        Check::pass("2-cocycle identity")
    }

    /// ϑ(g, g) = 1 and ϑ(g, h)ϑ(h, g) = 1 on all generator pairs and random pairs
    pub fn check_alternating(&self, seed: u64, samples: usize) -> Check {
        let fl = &self.field;
        let mut pairs: Vec<(Vec<u32>, Vec<u32>)> = Vec::new();
        for i in 0..self.theta {
            for j in 0..self.theta {
                let mut a = vec![0; self.theta];
                let mut b = vec![0; self.theta];
                a[i] = 1;
                b[j] = 1;
                pairs.push((a, b));
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..samples {
            pairs.push((self.random_element(&mut rng), self.random_element(&mut rng)));
        }
        for (a, b) in pairs {
            if self.vartheta(&a, &a) != Fe::ONE {
                return Check::fail("ϑ alternating", format!("ϑ(g, g) ≠ 1 at g = {a:?}"));
            }
            if fl.mul(self.vartheta(&a, &b), self.vartheta(&b, &a)) != Fe::ONE {
                return Check::fail("ϑ alternating", format!("ϑ(g, h)ϑ(h, g) ≠ 1 at g = {a:?}, h = {b:?}"));
            }
        }
        Check::pass("ϑ alternating")
    }
}

/// σ(g_i, g_j) = q'_ij / q_ij for i ≤ j and 1 for i > j.
pub fn cocycle_from_matrices(field: &Field, q: &[Vec<Fe>], q2: &[Vec<Fe>], f: u32) -> Result<GroupCocycle> {
    let theta = q.len();
    if q2.len() != theta {
        return Err(CoreError::Presentation("q matrices of different sizes".into()));
    }
    for m in [q, q2] {
        for (i, row) in m.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c.is_zero() || !f.is_multiple_of(field.mult_order(c)) {
                    return Err(CoreError::Field(format!("ord q_{}{} does not divide f = {f}", i + 1, j + 1)));
                }
            }
        }
    }
    let mut table = vec![vec![Fe::ONE; theta]; theta];
    for i in 0..theta {
        for j in i..theta {
            table[i][j] = field.div(q2[i][j], q[i][j]);
        }
    }
    let s = GroupCocycle { field: field.clone(), f, theta, table };
    if !s.check_well_defined().pass {
        return Err(CoreError::Field(format!("cocycle values have order not dividing f = {f}")));
    }
    Ok(s)
}

fn unit_exp(theta: usize, k: usize) -> Vec<u32> {
    let mut e = vec![0; theta];
    e[k] = 1;
    e
}

/// F_σ(V): same grading, g ⇀_σ v = ϑ(g, deg v) g ⇀ v.
pub fn twist_functor(v: &Realization, s: &GroupCocycle) -> Realization {
    let fl = &v.field;
    let mut action = v.action.clone();
    for (k, row) in action.iter_mut().enumerate() {
        for (u, col) in row.iter_mut().enumerate() {
            let c = s.vartheta(&unit_exp(v.theta, k), &unit_exp(v.theta, v.degree[u]));
            *col = col.scale(fl, c);
        }
    }
    Realization { action, ..v.clone() }
}

/// x ·_σ y = σ(deg x, deg y) xy for an algebra whose letters are Γ-homogeneous
/// of degree g_{letter_degree[x]}. Returns the twisted algebra and its basis in
/// the coordinates of `alg`.
pub fn twist_graded(alg: &FinBasisAlgebra, letter_degree: &[usize], s: &GroupCocycle) -> Result<(FinBasisAlgebra, Vec<SparseVec>)> {
    let fl = &alg.field;
    let n = alg.dim();
    let deg = |b: u32| -> Vec<u32> {
        let mut e = vec![0u32; s.theta];
        for &x in &alg.word(b).0 {
            let k = letter_degree[x as usize];
            e[k] = (e[k] + 1) % s.f;
        }
        e
    };
    let degs: Vec<Vec<u32>> = (0..n as u32).map(deg).collect();
    let mut left = Vec::with_capacity(alg.ngens());
    for x in 0..alg.ngens() as Letter {
        let dx = unit_exp(s.theta, letter_degree[x as usize]);
        let col: Vec<SparseVec> = (0..n).map(|b| alg.left_table(x)[b].scale(fl, s.eval(&dx, &degs[b]))).collect();
        left.push(col);
    }
    FinBasisAlgebra::from_left_action(&format!("{}_σ", alg.name), fl, alg.gen_names.clone(), alg.order.clone(), n, &left, &alg.unit())
}

/// R_σ for a Nichols algebra, with the basis of R_σ in the coordinates of R.
pub struct TwistedBraided {
    pub alg: FinBasisAlgebra,
    pub basis: Vec<SparseVec>,
}

pub fn twist_braided(r: &Nichols, s: &GroupCocycle) -> Result<TwistedBraided> {
    let (alg, basis) = twist_graded(&r.alg, &r.real.degree, s)?;
    Ok(TwistedBraided { alg, basis })
}

/// Generator identity between two algebras on the same letters: algebra map and bijective.
pub fn generator_identity(name: &str, src: &FinBasisAlgebra, dst: &FinBasisAlgebra) -> (LinearMap, Report) {
    let imgs: Vec<SparseVec> = (0..src.ngens() as Letter).map(|x| dst.gen_vec(x)).collect();
    let m = LinearMap::algebra_map(name, src, dst, &imgs);
    let mut rep = Report::default();
    rep.push(is_algebra_map(&m, src, dst));
    let rk = m.rank(&src.field);
    rep.push(if rk == src.dim() && rk == dst.dim() {
        Check::pass(format!("{name} bijective"))
    } else {
        Check::fail(format!("{name} bijective"), format!("rank {rk}, dims {} and {}", src.dim(), dst.dim()))
    });
    (m, rep)
}

/// π: R # kΓ → kΓ in group-index coordinates
pub fn group_projection(bos: &Bosonization) -> LinearMap {
    let cols = (0..bos.hopf.dim() as u32)
        .map(|i| {
            let (b, a) = bos.split(i);
            if b == 0 {
                SparseVec::unit(group_index(&a, bos.f))
            } else {
                SparseVec::zero()
            }
        })
        .collect();
    LinearMap::new("π", bos.group_order(), cols)
}

/// (π ⊗ id ⊗ π)Δ²(a) as (gL, mid, gR, c)
fn sandwich(h: &HopfAlgebra, pi: &LinearMap, a: u32) -> Vec<(u32, u32, u32, Fe)> {
    let fl = h.field();
    let mut acc: FxHashMap<(u32, u32, u32), Fe> = FxHashMap::default();
    for &((i, j), c) in &h.delta_basis(a).0 {
        let pj = &pi.cols[j as usize];
        if pj.is_zero() {
            continue;
        }
        for &((i1, i2), d) in &h.delta_basis(i).0 {
            let pi1 = &pi.cols[i1 as usize];
            for &(gl, x) in &pi1.0 {
                for &(gr, y) in &pj.0 {
                    let e = acc.entry((gl, i2, gr)).or_insert(Fe::ZERO);
                    *e = fl.add(*e, fl.mul(fl.mul(c, d), fl.mul(x, y)));
                }
            }
        }
    }
    let mut v: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).map(|((a, b, c), x)| (a, b, c, x)).collect();
    v.sort_unstable_by_key(|t| (t.0, t.1, t.2));
    v
}

/// x ·_σ y = σ(π x1, π y1) x2 y2 σ⁻¹(π x3, π y3), with `base` the product being twisted.
pub struct TwistedProduct<'a> {
    h: &'a HopfAlgebra,
    pi: &'a LinearMap,
    s: &'a GroupCocycle,
    sinv: GroupCocycle,
    memo: FxHashMap<u32, Vec<(u32, u32, u32, Fe)>>,
}

impl<'a> TwistedProduct<'a> {
    pub fn new(h: &'a HopfAlgebra, pi: &'a LinearMap, s: &'a GroupCocycle) -> Self {
        TwistedProduct { h, pi, s, sinv: s.inverse(), memo: FxHashMap::default() }
    }

    fn sw(&mut self, a: u32) -> Vec<(u32, u32, u32, Fe)> {
        if let Some(v) = self.memo.get(&a) {
            return v.clone();
        }
        let v = sandwich(self.h, self.pi, a);
        self.memo.insert(a, v.clone());
        v
    }

    pub fn mul_basis(&mut self, a: u32, b: u32, base: &mut dyn FnMut(u32, u32) -> SparseVec) -> SparseVec {
        let fl = self.h.field().clone();
        let sa = self.sw(a);
        let sb = self.sw(b);
        let mut out = SparseVec::zero();
        for &(la, ma, ra, ca) in &sa {
            for &(lb, mb, rb, cb) in &sb {
                let c = fl.mul(fl.mul(ca, cb), fl.mul(self.s.eval_index(la, lb), self.sinv.eval_index(ra, rb)));
                out = out.add_scaled(&fl, &base(ma, mb), c);
            }
        }
        out
    }

    pub fn mul(&mut self, a: &SparseVec, b: &SparseVec, base: &mut dyn FnMut(u32, u32) -> SparseVec) -> SparseVec {
        let fl = self.h.field().clone();
        let mut out = SparseVec::zero();
        for &(i, x) in &a.0 {
            for &(j, y) in &b.0 {
                out = out.add_scaled(&fl, &self.mul_basis(i, j, base), fl.mul(x, y));
            }
        }
        out
    }
}

/// H_σ with the same coalgebra; basis in the coordinates of H, π carried over.
pub struct TwistedHopf {
    pub hopf: HopfAlgebra,
    pub basis: Vec<SparseVec>,
    pub pi: LinearMap,
}

/// Twist a Hopf algebra with a projection π: H → kΓ by σ∘(π⊗π).
pub fn twist_hopf(h: &HopfAlgebra, pi: &LinearMap, s: &GroupCocycle) -> Result<TwistedHopf> {
    let fl = h.field().clone();
    let n = h.dim();
    let ha = &h.alg;
    let mut tp = TwistedProduct::new(h, pi, s);
    let mut base = |i: u32, j: u32| ha.mul_basis(i, j);
    let mut left = Vec::with_capacity(ha.ngens());
    for x in 0..ha.ngens() as Letter {
        let gx = ha.gen_vec(x);
        let col: Vec<SparseVec> = (0..n as u32).map(|b| tp.mul(&gx, &SparseVec::unit(b), &mut base)).collect();
        left.push(col);
    }
    let (alg, basis) = FinBasisAlgebra::from_left_action(&format!("{}_σ", ha.name), &fl, ha.gen_names.clone(), ha.order.clone(), n, &left, &ha.unit())?;
    let mut solver = ColumnSolver::new(&fl, n);
    for v in &basis {
        solver.push(v);
    }
    let mut to_new = |v: &SparseVec| -> SparseVec { solver.solve(v).expect("twisted basis spans H") };
    let mut delta = Vec::new();
    let mut eps = Vec::new();
    let mut placeholder = Vec::new();
    for x in 0..ha.ngens() as Letter {
        let gx = ha.gen_vec(x);
        delta.push(h.delta(&gx).transform(&fl, &mut to_new));
        eps.push(h.counit(&gx));
        placeholder.push(SparseVec::zero());
    }
    let pi_new = LinearMap::new("π", pi.dst_dim, basis.iter().map(|v| pi.apply(&fl, v)).collect());
    let gens: Vec<SparseVec> = (0..ha.ngens() as Letter).map(|x| alg.gen_vec(x)).collect();
    let tmp = HopfAlgebra::new(alg, delta, eps, placeholder, h.grouplikes.clone());
    let id = LinearMap::identity(n);
    let s_map = convolution_inverse(&id, &tmp, &tmp.alg)?.ok_or_else(|| CoreError::Presentation("twisted bialgebra has no antipode".into()))?;
    let anti: Vec<SparseVec> = gens.iter().map(|g| s_map.apply(&fl, g)).collect();
    Ok(TwistedHopf { hopf: tmp.with_antipode(anti), basis, pi: pi_new })
}

/// On pairs (letter of R, basis element of R) inside R # kΓ the general formula
/// must reduce to σ(deg x, deg y) xy.
pub fn check_scalar_shortcut(bos: &Bosonization, r: &Nichols, s: &GroupCocycle) -> Check {
    let name = "general twist = scalar twist on R";
    let h = &bos.hopf;
    let fl = h.field();
    let pi = group_projection(bos);
    let mut tp = TwistedProduct::new(h, &pi, s);
    let mut base = |i: u32, j: u32| h.alg.mul_basis(i, j);
    let zero = vec![0; bos.theta];
    for x in 0..bos.nletters as Letter {
        let xi = bos.index(r.alg.gen_vec(x).0[0].0, &zero);
        let dx = unit_exp(s.theta, r.real.degree[x as usize]);
        for b in 0..r.alg.dim() as u32 {
            let bi = bos.index(b, &zero);
            let general = tp.mul_basis(xi, bi, &mut base);
            let scalar = h.alg.mul_basis(xi, bi).scale(fl, s.eval(&dx, &r.gamma_degree[b as usize]));
            if general != scalar {
                return Check::fail(name, format!("{} · {}", r.alg.gen_names[x as usize], r.alg.render_basis(b)));
            }
        }
    }
    Check::pass(name)
}

/// Twist by σ and then by σ⁻¹; the generator identity back to H must be a
/// bijective algebra and coalgebra map.
pub fn hopf_round_trip(h: &HopfAlgebra, pi: &LinearMap, s: &GroupCocycle) -> Result<Report> {
    let once = twist_hopf(h, pi, s)?;
    let twice = twist_hopf(&once.hopf, &once.pi, &s.inverse())?;
    let (m, mut rep) = generator_identity("H → (H_σ)_σ⁻¹", &h.alg, &twice.hopf.alg);
    rep.push(is_coalgebra_map(&m, h, &twice.hopf));
    Ok(rep)
}

pub fn graded_round_trip(alg: &FinBasisAlgebra, letter_degree: &[usize], s: &GroupCocycle) -> Result<Report> {
    let (once, _) = twist_graded(alg, letter_degree, s)?;
    let (twice, _) = twist_graded(&once, letter_degree, &s.inverse())?;
    Ok(generator_identity("R → (R_σ)_σ⁻¹", alg, &twice).1)
}

/// Twisted bosonization vs the independently built one: generator identity
/// must be a bijective algebra and coalgebra map.
pub fn compare_bosonizations(twisted: &TwistedHopf, direct: &Bosonization) -> Report {
    let (m, mut rep) = generator_identity("H_q → (H_1)_σ", &direct.hopf.alg, &twisted.hopf.alg);
    rep.push(is_coalgebra_map(&m, &direct.hopf, &twisted.hopf));
    rep
}

/// 𝓑(𝒱(𝔮, 𝐚)) ≅ 𝓑(𝒱(𝟏, 𝐚))_σ, with σ built from (𝟏, 𝔮).
pub struct TwistIso {
    pub report: Report,
    pub dims: (usize, usize),
    pub hilbert: (Vec<usize>, Vec<usize>),
}

pub fn verify_twist_iso(d: &PaperData, f: u32, seed: u64) -> Result<TwistIso> {
    let fl = &d.field;
    let d1 = PaperData::new(fl, d.t, d.theta, PaperData::trivial_q(d.theta), d.a.clone())?;
    let s = cocycle_from_matrices(fl, &d1.q, &d.q, f)?;
    let mut rep = Report::default();
    rep.push(s.check_well_defined());
    rep.push(s.check_cocycle(seed, 200));
    rep.push(s.check_alternating(seed.wrapping_add(1), 200));
    let r1 = Nichols::build(&d1, f)?;
    let rq = Nichols::build(d, f)?;
    let fv = twist_functor(&r1.real, &s);
    rep.push(if fv.action == rq.real.action && fv.degree == rq.real.degree {
        Check::pass("F_σ(V(1)) = V(q) as realizations")
    } else {
        Check::fail("F_σ(V(1)) = V(q) as realizations", "action tables differ")
    });
    rep.push(fv.induced_braiding().compare(&braided_from_paper_data(d)?, "F_σ braiding = c_q"));
    let tw = twist_braided(&r1, &s)?;
    // relations of 𝓑(𝒱(𝔮, 𝐚)) hold in 𝓑(𝒱(𝟏, 𝐚))_σ
    let mut rel = Check::pass("relations of R_q hold in (R_1)_σ");
    if let Some(p) = &rq.alg.presentation {
        for r in &p.relations {
            if !tw.alg.eval_poly(r).is_zero() {
                rel = Check::fail("relations of R_q hold in (R_1)_σ", p.render(r));
                break;
            }
        }
    }
    rep.push(rel);
    let (psi, iso) = generator_identity("ψ: R_q → (R_1)_σ", &rq.alg, &tw.alg);
    rep.extend(iso);
    // ψ into the coordinates of R_1
    let psi_old: Vec<SparseVec> = psi
        .cols
        .iter()
        .map(|c| c.0.iter().fold(SparseVec::zero(), |acc, &(i, x)| acc.add_scaled(fl, &tw.basis[i as usize], x)))
        .collect();
    let psi_v = |v: &SparseVec| -> SparseVec { v.0.iter().fold(SparseVec::zero(), |acc, &(i, x)| acc.add_scaled(fl, &psi_old[i as usize], x)) };
    let sinv = s.inverse();
    let mut coalg = Check::pass("ψ braided coalgebra map");
    for b in 0..rq.alg.dim() as u32 {
        let lhs = rq.braided_delta_basis(b).map(fl, |i| psi_old[i as usize].clone(), |j| psi_old[j as usize].clone());
        // the braided coproduct of R_σ is Δ_σ(r) = σ⁻¹(deg r(1), deg r(2)) r(1) ⊗ r(2)
        let mut rhs = Tensor::zero();
        for &(i, x) in &psi_old[b as usize].0 {
            let t = r1.braided_delta_basis(i);
            let scaled = Tensor(t.0.iter().map(|&((u, v), c)| ((u, v), fl.mul(c, sinv.eval(&r1.gamma_degree[u as usize], &r1.gamma_degree[v as usize])))).collect());
            rhs = rhs.add_scaled(fl, &scaled, x);
        }
        if lhs != rhs {
            coalg = Check::fail("ψ braided coalgebra map", format!("at {}", rq.alg.render_basis(b)));
            break;
        }
    }
    rep.push(coalg);
    let mut yd = Check::pass("ψ Γ-graded and Γ-linear for ⇀_σ");
    'outer: for b in 0..rq.alg.dim() as u32 {
        let db = &rq.gamma_degree[b as usize];
        let pb = &psi_old[b as usize];
        if pb.0.iter().any(|&(i, _)| &r1.gamma_degree[i as usize] != db) {
            yd = Check::fail("ψ Γ-graded and Γ-linear for ⇀_σ", format!("degree of {}", rq.alg.render_basis(b)));
            break;
        }
        for k in 0..d.theta {
            let lhs = psi_v(&rq.action_basis[k][b as usize]);
            let theta = s.vartheta(&unit_exp(d.theta, k), db);
            let mut rhs = SparseVec::zero();
            for &(i, x) in &pb.0 {
                rhs = rhs.add_scaled(fl, &r1.action_basis[k][i as usize], fl.mul(x, theta));
            }
            if lhs != rhs {
                yd = Check::fail("ψ Γ-graded and Γ-linear for ⇀_σ", format!("g{} on {}", k + 1, rq.alg.render_basis(b)));
                break 'outer;
            }
        }
    }
    rep.push(yd);
    let (h1, hq, ht) = (r1.alg.hilbert_series(), rq.alg.hilbert_series(), tw.alg.hilbert_series());
    rep.push(if h1 == hq && ht == hq {
        Check::pass("Hilbert series equal")
    } else {
        Check::fail("Hilbert series equal", format!("{hq:?} vs {ht:?} (untwisted {h1:?})"))
    });
    Ok(TwistIso { report: rep, dims: (rq.alg.dim(), tw.alg.dim()), hilbert: (hq, ht) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nichols::bosonize;

    fn f3() -> Field {
        Field::prime(3).unwrap()
    }

    #[test]
    fn laestrygonian_cocycle_table() {
        let f = f3();
        let m1 = Fe(2);
        let q = vec![vec![Fe::ONE, m1], vec![m1, Fe::ONE]];
        let s = cocycle_from_matrices(&f, &PaperData::trivial_q(2), &q, 6).unwrap();
        assert_eq!(s.table, vec![vec![Fe::ONE, m1], vec![Fe::ONE, Fe::ONE]]);
        assert_eq!(s.vartheta(&[1, 0], &[0, 1]), m1);
        assert_eq!(s.vartheta(&[0, 1], &[1, 0]), f.inv(m1));
        assert!(s.check_cocycle(7, 200).pass);
        assert!(s.check_alternating(7, 200).pass);
        assert!(cocycle_from_matrices(&f, &PaperData::trivial_q(2), &q, 3).is_err());
        let same = cocycle_from_matrices(&f, &q, &q, 6).unwrap();
        assert!(same.is_trivial());
    }

    #[test]
    fn twist_iso_q_minus_one() {
        let d = PaperData::laestrygonian(&f3(), Fe(2), 1).unwrap();
        let iso = verify_twist_iso(&d, 6, 1).unwrap();
        assert!(iso.report.all_pass(), "{}", iso.report);
        assert_eq!(iso.dims, (81, 81));
        assert_eq!(iso.hilbert.0.iter().sum::<usize>(), 81);
    }

    #[test]
    fn trivial_q_is_identity() {
        let d = PaperData::laestrygonian(&f3(), Fe::ONE, 1).unwrap();
        let iso = verify_twist_iso(&d, 3, 1).unwrap();
        assert!(iso.report.all_pass(), "{}", iso.report);
    }

    #[test]
    fn graded_twist_round_trip() {
        let d = PaperData::laestrygonian(&f3(), Fe::ONE, 1).unwrap();
        let r = Nichols::build(&d, 6).unwrap();
        let mut s = GroupCocycle::trivial(&d.field, 6, 2);
        s.table[0][1] = Fe(2);
        let rep = graded_round_trip(&r.alg, &r.real.degree, &s).unwrap();
        assert!(rep.all_pass(), "{rep}");
        let (tw, _) = twist_graded(&r.alg, &r.real.degree, &s).unwrap();
        assert_eq!(tw.hilbert_series(), r.alg.hilbert_series());
    }

    #[test]
    fn bosonization_twist_matches_direct() {
        let f = f3();
        let d1 = PaperData::laestrygonian(&f, Fe::ONE, 1).unwrap();
        let dq = PaperData::laestrygonian(&f, Fe(2), 1).unwrap();
        let r1 = Nichols::build(&d1, 6).unwrap();
        let b1 = bosonize(&r1).unwrap();
        let bq = bosonize(&Nichols::build(&dq, 6).unwrap()).unwrap();
        let s = cocycle_from_matrices(&f, &d1.q, &dq.q, 6).unwrap();
        assert!(check_scalar_shortcut(&b1, &r1, &s).pass);
        let tw = twist_hopf(&b1.hopf, &group_projection(&b1), &s).unwrap();
        let hr = tw.hopf.check_hopf();
        assert!(hr.all_pass(), "{hr}");
        let rep = compare_bosonizations(&tw, &bq);
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn hopf_twist_round_trip() {
        let f = f3();
        let d = PaperData::laestrygonian(&f, Fe::ONE, 1).unwrap();
        let b = bosonize(&Nichols::build(&d, 6).unwrap()).unwrap();
        let mut s = GroupCocycle::trivial(&f, 6, 2);
        s.table[0][1] = Fe(2);
        let rep = hopf_round_trip(&b.hopf, &group_projection(&b), &s).unwrap();
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn twisted_functor_changes_only_action() {
        let d = PaperData::laestrygonian(&f3(), Fe::ONE, 1).unwrap();
        let r = Nichols::build(&d, 6).unwrap();
        let s = GroupCocycle::trivial(&d.field, 6, 2);
        let v = twist_functor(&r.real, &s);
        assert_eq!(v.action, r.real.action);
        let mut s2 = s.clone();
        s2.table[0][1] = Fe(2);
        let v2 = twist_functor(&r.real, &s2);
        assert_eq!(v2.degree, r.real.degree);
        assert_ne!(v2.action, r.real.action);
    }
}
