//! One line per acceptance criterion: verdict, elapsed time and limit.
//! Runs without the libtest harness so the lines show up in `cargo test` output.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use finhopf::check::Report;
use finhopf::cohomology::{bar_betti, minimal_graded_betti, Budget};
use finhopf::core::{Fe, Field, NcPoly, SparseVec, Word};
use finhopf::extension::{bicrossed_product, paper_extension, round_trip, Scope};
use finhopf::hopf::{convolution_inverse, HopfAlgebra, LinearMap};
use finhopf::lie::{build_l, restricted_enveloping};
use finhopf::nichols::{bosonize, braided_from_paper_data, Nichols, PaperData};
use finhopf::scenario::{truncated_polynomial, ScenarioConfig, FIXTURES};
use finhopf::twist::{cocycle_from_matrices, graded_round_trip, group_projection, hopf_round_trip, verify_twist_iso, GroupCocycle};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn f(p: u32) -> Field {
    Field::prime(p).unwrap()
}

fn laes(p: u32, g: u32) -> PaperData {
    PaperData::laestrygonian(&f(p), Fe::ONE, g).unwrap()
}

fn t2(ghost: [u32; 2]) -> PaperData {
    let fl = f(3);
    let a = ghost.iter().map(|&g| finhopf::nichols::a_for_ghost(g, 3).unwrap()).collect();
    PaperData::new(&fl, 2, 3, PaperData::trivial_q(3), vec![a]).unwrap()
}

fn need(r: &Report) -> Result<(), String> {
    match r.failures().first() {
        None => Ok(()),
        Some(c) => Err(format!("{}: {}", c.name, c.witness.as_deref().unwrap_or(""))),
    }
}

fn eq(what: &str, got: usize, want: usize) -> Result<(), String> {
    if got == want {
        Ok(())
    } else {
        Err(format!("{what}: got {got}, want {want}"))
    }
}

fn timed<T>(limit: Duration, what: &str, run: impl FnOnce() -> Result<T, String>) -> Result<(T, Duration), String> {
    let t = Instant::now();
    let v = run()?;
    let e = t.elapsed();
    if e > limit {
        return Err(format!("{what} took {:.1} s, limit {} s", e.as_secs_f64(), limit.as_secs()));
    }
    Ok((v, e))
}

fn c1() -> Outcome {
    let cases: Vec<(&str, PaperData, usize)> = vec![
        ("𝓑(𝒱(1,2)) p=3", PaperData::jordan(&f(3)), 9),
        ("𝓑(𝒱(1,2)) p=5", PaperData::jordan(&f(5)), 25),
        ("𝔏(1,1) p=3", laes(3, 1), 81),
        ("𝔏(1,2) p=3", laes(3, 2), 243),
        ("𝔏(1,1) p=5", laes(5, 1), 625),
        ("t=2 𝒢=(1,1) p=3", t2([1, 1]), 6561),
    ];
    let mut out = Vec::new();
    for (name, d, want) in cases {
        let (n, e) = timed(Duration::from_secs(60), name, || Nichols::build(&d, d.min_f()).map_err(|e| e.to_string()))?;
        eq(name, n.dim(), want)?;
        eq(&format!("{name} formula"), d.nichols_dim_formula() as usize, want)?;
        out.push(format!("{want} ({:.1}s)", e.as_secs_f64()));
    }
    Ok(out.join(", "))
}

fn c2() -> Outcome {
    let cases = [("Jordan p=3", PaperData::jordan(&f(3)), 27), ("𝔏(1,1) p=3", laes(3, 1), 729), ("t=2 𝒢=(1,1) p=3", t2([1, 1]), 177147)];
    let mut out = Vec::new();
    for (name, d, want) in cases {
        let (dim, e) = timed(Duration::from_secs(120), name, || {
            let b = bosonize(&Nichols::build(&d, 3).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
            need(&b.hopf.check_hopf())?;
            Ok(b.hopf.dim())
        })?;
        eq(name, dim, want)?;
        out.push(format!("{want} ({:.1}s)", e.as_secs_f64()));
    }
    Ok(out.join(", "))
}

fn full_chain(d: &PaperData, round: bool) -> Result<(usize, usize, usize), String> {
    let pe = paper_extension(d, 3).map_err(|e| e.to_string())?;
    need(&pe.verify(Scope::Full).map_err(|e| e.to_string())?)?;
    let e = &pe.ext;
    if round {
        let datum = e.extract_datum(&pe.cleaving).map_err(|e| e.to_string())?;
        if !datum.sigma_trivial().pass || !datum.tau_trivial().pass {
            return Err("σ or τ not trivial".into());
        }
        let b = bicrossed_product(&e.k, &e.l, &datum).map_err(|e| e.to_string())?;
        need(&b.ext.h.check_hopf())?;
        need(&round_trip(e, &pe.cleaving, &b))?;
    }
    Ok((e.k.dim(), e.l.dim(), e.h.dim()))
}

fn c3() -> Outcome {
    let ((k, l, h), e) = timed(Duration::from_secs(30), "Jordan extension", || full_chain(&PaperData::jordan(&f(3)), true))?;
    eq("dim H", h, 27)?;
    Ok(format!("K {k}, L {l}, H {h}, σ τ trivial, K#L ≅ H ({:.1}s)", e.as_secs_f64()))
}

fn c4() -> Outcome {
    let ((k, l, h), e) = timed(Duration::from_secs(300), "block and point", || full_chain(&laes(3, 1), true))?;
    eq("dim K", k, 27)?;
    eq("dim L", l, 27)?;
    eq("dim H", h, 729)?;
    eq("dim K·dim L", k * l, h)?;
    Ok(format!("K {k}, L {l}, H {h} ({:.1}s)", e.as_secs_f64()))
}

fn c5() -> Outcome {
    let ((_, _, h1), e1) = timed(Duration::from_secs(1200), "t=1 θ=2", || full_chain(&laes(3, 1), false))?;
    eq("dim H (t=1)", h1, 729)?;
    let ((k, l, h), e2) = timed(Duration::from_secs(1200), "t=2 θ=3", || full_chain(&t2([1, 0]), false))?;
    eq("dim L", l, 81)?;
    eq("dim K", k, 243)?;
    eq("dim K·dim L", k * l, h)?;
    Ok(format!("t=1: H {h1} ({:.1}s); t=2: K {k}, L {l}, H {h} ({:.1}s)", e1.as_secs_f64(), e2.as_secs_f64()))
}

fn c6() -> Outcome {
    let cases: [(u32, usize, Vec<Vec<u32>>); 6] =
        [(3, 1, vec![vec![1]]), (3, 1, vec![vec![2]]), (5, 1, vec![vec![1]]), (5, 1, vec![vec![3]]), (3, 2, vec![vec![1, 0]]), (3, 2, vec![vec![1, 1]])];
    let (dims, e) = timed(Duration::from_secs(60), "restricted Lie suite", || {
        let mut dims = Vec::new();
        for (i, (p, t, g)) in cases.iter().enumerate() {
            let gl = build_l(&f(*p), *t, g).map_err(|e| e.to_string())?;
            need(&gl.lie.verify(i as u64, 200))?;
            need(&gl.pair.verify())?;
            let dc = gl.pair.double_cross(i as u64).map_err(|e| e.to_string())?;
            if !dc.same_as(&gl.lie) {
                return Err(format!("p={p} 𝒢={g:?}: double cross bracket differs"));
            }
            let u = restricted_enveloping(&gl.lie, "u").map_err(|e| e.to_string())?;
            eq("dim u(l)", u.dim(), (*p as usize).pow(gl.lie.dim() as u32))?;
            dims.push(u.dim());
        }
        Ok(dims)
    })?;
    Ok(format!("{} ghost matrices, dim u(l) = {dims:?} ({:.1}s)", cases.len(), e.as_secs_f64()))
}

fn c7() -> Outcome {
    let fl = f(3);
    let d = PaperData::laestrygonian(&fl, fl.from_i64(-1), 1).unwrap();
    let (iso, e) = timed(Duration::from_secs(300), "twist", || verify_twist_iso(&d, 6, 7).map_err(|e| e.to_string()))?;
    need(&iso.report)?;
    eq("dim R_q", iso.dims.0, 81)?;
    eq("dim (R_1)_σ", iso.dims.1, 81)?;
    if iso.hilbert.0 != iso.hilbert.1 || iso.hilbert.0.iter().sum::<usize>() != 81 {
        return Err(format!("Hilbert series {:?} vs {:?}", iso.hilbert.0, iso.hilbert.1));
    }
    Ok(format!("dims 81/81, Hilbert series {:?} ({:.1}s)", iso.hilbert.0, e.as_secs_f64()))
}

fn c8() -> Outcome {
    let (s, e) = timed(Duration::from_secs(600), "Betti", || {
        let budget = Budget::default();
        let tp = truncated_polynomial(&f(3), 3).map_err(|e| e.to_string())?;
        let bar = bar_betti(&tp, 6, budget);
        let min = minimal_graded_betti(&tp, 6).map_err(|e| e.to_string())?;
        if bar.values != vec![1; 7] || min.values != vec![1; 7] {
            return Err(format!("k[x]/(x^3): bar {:?}, minimal {:?}", bar.values, min.values));
        }
        let n = Nichols::build(&PaperData::jordan(&f(3)), 3).map_err(|e| e.to_string())?;
        let alg = n.alg.with_counit(vec![Fe::ZERO; 2]);
        let bar = bar_betti(&alg, 4, budget);
        let min = minimal_graded_betti(&alg, 4).map_err(|e| e.to_string())?;
        if bar.cutoff.is_some() || bar.values != min.values || bar.values[1] != 2 || bar.values[2] != 3 {
            return Err(format!("Jordan: bar {:?}, minimal {:?}", bar.values, min.values));
        }
        Ok(format!("k[x]/(x^3) 1^7 both; Jordan {:?} both", bar.values))
    })?;
    Ok(format!("{s} ({:.1}s)", e.as_secs_f64()))
}

/// Σ b1 S(b2) = Σ S(b1) b2 = ε(b)1 on sampled basis elements.
fn antipode_is_convolution_inverse(h: &HopfAlgebra, rng: &mut ChaCha8Rng, samples: usize) -> Result<(), String> {
    let n = h.dim() as u32;
    let sample: Vec<u32> = if n as usize <= samples { (0..n).collect() } else { (0..samples).map(|_| rng.gen_range(0..n)).collect() };
    for b in sample {
        let d = h.delta_basis(b).clone();
        let want = SparseVec::single(0, h.eps_basis()[b as usize]);
        let l = d.contract(&h.alg, SparseVec::unit, |j| h.antipode_basis(j).clone());
        let r = d.contract(&h.alg, |i| h.antipode_basis(i).clone(), SparseVec::unit);
        if l != want || r != want {
            return Err(format!("{}: id * S ≠ uε at {}", h.alg.name, h.alg.render_basis(b)));
        }
    }
    Ok(())
}

fn c9() -> Outcome {
    let (n, e) = timed(Duration::from_secs(900), "property suites", || {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut count = 0;
        for fx in FIXTURES {
            let cfg = ScenarioConfig::parse(fx.text).map_err(|e| format!("{}: {e}", fx.name))?;
            let Some(fam) = &cfg.family else { continue };
            let fl = cfg.field.build().map_err(|e| e.to_string())?;
            let d = fam.build(&fl).map_err(|e| e.to_string())?;
            let ff = fam.f.unwrap_or_else(|| d.min_f());
            let ctx = |e: String| format!("{}: {e}", fx.name);
            let bs = braided_from_paper_data(&d).map_err(|e| ctx(e.to_string()))?;
            if !bs.check_braid_equation().pass {
                return Err(ctx("braid equation".into()));
            }
            let r = Nichols::build(&d, ff).map_err(|e| ctx(e.to_string()))?;
            let ng = r.alg.ngens() as u16;
            for _ in 0..50 {
                let w: Vec<u16> = (0..rng.gen_range(0..8)).map(|_| rng.gen_range(0..ng)).collect();
                let p = NcPoly::word(Word::from_slice(&w));
                let once = r.alg.normal_form(&p);
                if r.alg.normal_form(&once) != once {
                    return Err(ctx(format!("normal form not idempotent on {w:?}")));
                }
            }
            let dim = r.dim() as u32;
            for _ in 0..200 {
                let (a, b, c) = (rng.gen_range(0..dim), rng.gen_range(0..dim), rng.gen_range(0..dim));
                if !r.alg.associator_vanishes(a, b, c) {
                    return Err(ctx(format!("associator at ({a}, {b}, {c})")));
                }
            }
            let d1 = PaperData::new(&fl, d.t, d.theta, PaperData::trivial_q(d.theta), d.a.clone()).map_err(|e| e.to_string())?;
            let s = cocycle_from_matrices(&fl, &d1.q, &d.q, ff).map_err(|e| ctx(e.to_string()))?;
            let bos = bosonize(&r).map_err(|e| ctx(e.to_string()))?;
            // top-degree elements of the large bosonizations cost ~0.5 s each
            let samples = if bos.hopf.dim() <= 3000 { 3000 } else { 40 };
            antipode_is_convolution_inverse(&bos.hopf, &mut rng, samples).map_err(ctx)?;
            if bos.hopf.dim() <= 3000 {
                let id = LinearMap::identity(bos.hopf.dim());
                let inv = convolution_inverse(&id, &bos.hopf, &bos.hopf.alg).map_err(|e| ctx(e.to_string()))?.ok_or_else(|| ctx("id not convolution invertible".into()))?;
                if inv != bos.hopf.antipode_map().renamed(&inv.name) {
                    return Err(ctx("convolution inverse of id differs from S".into()));
                }
                need(&hopf_round_trip(&bos.hopf, &group_projection(&bos), &s).map_err(|e| ctx(e.to_string()))?).map_err(ctx)?;
            }
            if r.dim() <= 1000 {
                need(&graded_round_trip(&r.alg, &r.real.degree, &s).map_err(|e| ctx(e.to_string()))?).map_err(ctx)?;
                if ff % 2 == 0 {
                    let mut s2 = GroupCocycle::trivial(&fl, ff, d.theta);
                    s2.table[0][d.theta - 1] = fl.from_i64(-1);
                    need(&graded_round_trip(&r.alg, &r.real.degree, &s2).map_err(|e| ctx(e.to_string()))?).map_err(ctx)?;
                }
            }
            count += 1;
        }
        Ok(count)
    })?;
    Ok(format!("{n} fixtures, zero failures ({:.1}s)", e.as_secs_f64()))
}

fn main() -> ExitCode {
    let criteria: [(&str, u64, fn() -> Outcome); 9] = [
        ("dimension formulas", 60, c1),
        ("Hopf axioms on bosonizations", 120, c2),
        ("Jordan extension exact, cleft, split", 30, c3),
        ("block-and-point extension, full chain", 300, c4),
        ("split extensions at t=1 and t=2", 1200, c5),
        ("restricted Lie suite", 60, c6),
        ("twist equivalence at q = -1", 300, c7),
        ("bar = minimal Betti numbers", 600, c8),
        ("property suites over fixtures", 900, c9),
    ];
    let mut ok = true;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let res = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(s) => println!("criterion {} PASS {name} [{secs:.1} s, limit {limit} s] {s}", i + 1),
            Err(s) => {
                ok = false;
                println!("criterion {} FAIL {name} [{secs:.1} s, limit {limit} s] {s}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
