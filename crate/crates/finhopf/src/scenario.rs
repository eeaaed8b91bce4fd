//! Scenario files in, JSON reports out. Used by the `finhopf` binary and the
//! acceptance suite.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use finhopf_core::presentation::{FieldSection, PresFile};
use finhopf_core::{CoreError, Fe, Field, FinBasisAlgebra, Generator, NcPoly, Presentation, Result, Word};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::check::{Check, Report};
use crate::cohomology::{bar_betti, check_bar_dd, fgc_probe, invariant_betti, minimal_graded_betti, BettiTable, Budget, GroupAction};
use crate::extension::{bicrossed_product, paper_extension, round_trip, Scope};
use crate::lie::{build_l, restricted_enveloping};
use crate::nichols::{bosonization_presentation, bosonize, braided_from_paper_data, FamilyConfig, Nichols, PaperData};
use crate::twist::{cocycle_from_matrices, compare_bosonizations, group_projection, twist_hopf, verify_twist_iso};

pub const SCHEMA: &str = "finhopf.report.v1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Task {
    Build,
    VerifyHopf,
    VerifyLie,
    VerifyExtension,
    TwistCheck,
    Betti,
}

impl Task {
    pub fn name(self) -> &'static str {
        match self {
            Task::Build => "build",
            Task::VerifyHopf => "verify-hopf",
            Task::VerifyLie => "verify-lie",
            Task::VerifyExtension => "verify-extension",
            Task::TwistCheck => "twist-check",
            Task::Betti => "betti",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Exact,
    Cleft,
    #[default]
    Split,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodSel {
    Bar,
    Minimal,
    #[default]
    Both,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioHead {
    pub id: String,
    pub tasks: Vec<Task>,
    #[serde(default)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ExtensionOpts {
    #[serde(default)]
    pub level: Level,
    /// check (a)-(e) on generators and their products only
    #[serde(default)]
    pub generators_only: bool,
    /// rebuild H as a bicrossed product when dim H is at most this
    #[serde(default = "default_round_trip")]
    pub round_trip_max_dim: usize,
    /// extract (⇀, ρ, σ, τ) only when dim L is at most this; σ costs O(dim L² · |Δ|²) products in H
    #[serde(default = "default_datum_l")]
    pub datum_max_l: usize,
}

fn default_datum_l() -> usize {
    100
}

impl Default for ExtensionOpts {
    fn default() -> Self {
        ExtensionOpts { level: Level::Split, generators_only: false, round_trip_max_dim: default_round_trip(), datum_max_l: default_datum_l() }
    }
}

fn default_round_trip() -> usize {
    1000
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgebraSource {
    #[default]
    Nichols,
    /// k[x]/(x^exponent)
    Truncated,
    /// a presentation file, relative to the scenario file
    Presentation,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct BettiOpts {
    #[serde(default)]
    pub algebra: AlgebraSource,
    #[serde(default)]
    pub exponent: Option<u32>,
    #[serde(default)]
    pub presentation: Option<String>,
    #[serde(default)]
    pub method: MethodSel,
    #[serde(default = "default_max_degree")]
    pub max_degree: usize,
    /// also compute invariants under x ↦ -x on every generator
    #[serde(default)]
    pub sign_invariants: bool,
}

fn default_max_degree() -> usize {
    4
}

impl Default for BettiOpts {
    fn default() -> Self {
        BettiOpts { algebra: AlgebraSource::Nichols, exponent: None, presentation: None, method: MethodSel::Both, max_degree: 4, sign_invariants: false }
    }
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct TwistOpts {
    /// also twist the bosonization and compare with the direct one when its dimension is at most this
    #[serde(default = "default_hopf_twist")]
    pub hopf_max_dim: usize,
}

fn default_hopf_twist() -> usize {
    3000
}

#[derive(Clone, Debug, Default, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct Expect {
    pub nichols_dim: Option<usize>,
    pub hopf_dim: Option<usize>,
    pub k_dim: Option<usize>,
    pub l_dim: Option<usize>,
    pub betti: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize, Serialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub scenario: ScenarioHead,
    pub field: FieldSection,
    #[serde(default)]
    pub family: Option<FamilyConfig>,
    #[serde(default)]
    pub extension: ExtensionOpts,
    #[serde(default)]
    pub betti: BettiOpts,
    #[serde(default)]
    pub twist: TwistOpts,
    #[serde(default)]
    pub budget_mb: Option<usize>,
    #[serde(default)]
    pub expect: Expect,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<ScenarioConfig> {
        let cfg: ScenarioConfig = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let has = |t: Task| self.scenario.tasks.contains(&t);
        for t in [Task::VerifyHopf, Task::VerifyExtension] {
            if has(t) && !has(Task::Build) {
                return Err(CoreError::Parse(format!("task {} requires build", t.name())));
            }
        }
        let needs_family = self.scenario.tasks.iter().any(|&t| t != Task::Betti) || matches!(self.betti.algebra, AlgebraSource::Nichols);
        if needs_family && self.family.is_none() {
            return Err(CoreError::Parse("a [family] block is required for these tasks".into()));
        }
        Ok(())
    }
}

/// Command-line overrides.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub max_degree: Option<usize>,
    pub budget_mb: Option<usize>,
    pub seed: Option<u64>,
    pub level: Option<Level>,
    pub method: Option<MethodSel>,
    pub tasks: Option<Vec<Task>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Inconclusive,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Inconclusive => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TaskReport {
    pub task: &'static str,
    pub verdict: Verdict,
    pub dims: BTreeMap<String, usize>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub betti: Vec<BettiTable>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub elapsed_ms: u64,
}

impl TaskReport {
    pub fn new(task: Task) -> TaskReport {
        TaskReport { task: task.name(), verdict: Verdict::Pass, dims: BTreeMap::new(), checks: Vec::new(), betti: Vec::new(), notes: Vec::new(), elapsed_ms: 0 }
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    fn extend(&mut self, r: Report) {
        self.checks.extend(r.checks);
    }

    fn dim(&mut self, k: &str, v: usize) {
        self.dims.insert(k.to_string(), v);
    }

    fn expect(&mut self, what: &str, want: Option<usize>, got: usize) {
        if let Some(w) = want {
            self.push(if w == got { Check::pass(format!("{what} = {w}")) } else { Check::fail(format!("{what} = {w}"), format!("got {got}")) });
        }
    }

    pub fn finish(&mut self, started: Instant) {
        if self.checks.iter().any(|c| !c.pass) {
            self.verdict = Verdict::Fail;
        }
        self.elapsed_ms = started.elapsed().as_millis() as u64;
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub tool_version: &'static str,
    pub scenario: String,
    pub config_sha256: String,
    pub field: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub verdict: Verdict,
    pub tasks: Vec<TaskReport>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn task(&self, name: &str) -> Option<&TaskReport> {
        self.tasks.iter().find(|t| t.task == name)
    }
}

pub fn sha256_hex(text: &str) -> String {
    let d = Sha256::digest(text.as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

struct Ctx<'a> {
    cfg: &'a ScenarioConfig,
    base: Option<&'a Path>,
    field: Field,
    data: Option<PaperData>,
    f: u32,
    seed: u64,
    level: Level,
    method: MethodSel,
    max_degree: usize,
    budget: Budget,
}

/// Run every task of a scenario in dependency order.
pub fn run_scenario(text: &str, base: Option<&Path>, ov: &Overrides) -> Result<RunReport> {
    let mut cfg = ScenarioConfig::parse(text)?;
    if let Some(t) = &ov.tasks {
        cfg.scenario.tasks = t.clone();
        cfg.validate()?;
    }
    let field = cfg.field.build()?;
    let data = match &cfg.family {
        Some(fam) => Some(fam.build(&field)?),
        None => None,
    };
    let f = match (&cfg.family, &data) {
        (Some(fam), Some(d)) => fam.f.unwrap_or_else(|| d.min_f()),
        _ => 1,
    };
    let seed = ov.seed.or(cfg.scenario.seed).unwrap_or(0);
    let budget = match ov.budget_mb.or(cfg.budget_mb) {
        Some(mb) => Budget::from_mb(mb),
        None => Budget::default(),
    };
    let ctx = Ctx {
        cfg: &cfg,
        base,
        field: field.clone(),
        data,
        f,
        seed,
        level: ov.level.unwrap_or(cfg.extension.level),
        method: ov.method.unwrap_or(cfg.betti.method),
        max_degree: ov.max_degree.unwrap_or(cfg.betti.max_degree),
        budget,
    };
    let mut tasks = cfg.scenario.tasks.clone();
    tasks.sort();
    tasks.dedup();
    let mut reports = Vec::new();
    for t in tasks {
        let started = Instant::now();
        let mut tr = TaskReport::new(t);
        let res = match t {
            Task::Build => task_build(&ctx, &mut tr),
            Task::VerifyHopf => task_hopf(&ctx, &mut tr),
            Task::VerifyLie => task_lie(&ctx, &mut tr),
            Task::VerifyExtension => task_extension(&ctx, &mut tr),
            Task::TwistCheck => task_twist(&ctx, &mut tr),
            Task::Betti => task_betti(&ctx, &mut tr),
        };
        if let Err(e) = res {
            match e {
                CoreError::Inconclusive(_) | CoreError::Budget(_) => {
                    tr.verdict = Verdict::Inconclusive;
                    tr.notes.push(e.to_string());
                }
                e => tr.push(Check::fail("task completed", e.to_string())),
            }
        }
        tr.finish(started);
        reports.push(tr);
    }
    let verdict = reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
    Ok(RunReport {
        schema: SCHEMA,
        tool_version: env!("CARGO_PKG_VERSION"),
        scenario: cfg.scenario.id.clone(),
        config_sha256: sha256_hex(text),
        field: field.to_string(),
        seed: cfg.scenario.seed.or(ov.seed),
        verdict,
        tasks: reports,
    })
}

impl Ctx<'_> {
    fn data(&self) -> Result<&PaperData> {
        self.data.as_ref().ok_or_else(|| CoreError::Parse("missing [family]".into()))
    }
}

fn task_build(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let d = c.data()?;
    let bs = braided_from_paper_data(d)?;
    tr.push(bs.check_braid_equation());
    let r = Nichols::build(d, c.f)?;
    tr.push(r.real.check_module());
    let formula = d.nichols_dim_formula() as usize;
    tr.dim("V", d.dim_v());
    tr.dim("nichols", r.dim());
    tr.dim("formula", formula);
    tr.dim("f", c.f as usize);
    tr.push(if r.dim() == formula { Check::pass("dim 𝓑(V) = formula") } else { Check::fail("dim 𝓑(V) = formula", format!("{} ≠ {formula}", r.dim())) });
    tr.expect("dim 𝓑(V)", c.cfg.expect.nichols_dim, r.dim());
    tr.notes.push(format!("Hilbert series {:?}", r.alg.hilbert_series()));
    Ok(())
}

fn task_hopf(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let d = c.data()?;
    let r = Nichols::build(d, c.f)?;
    tr.push(r.check_yd_compatibility());
    let b = bosonize(&r)?;
    tr.dim("hopf", b.hopf.dim());
    tr.expect("dim H", c.cfg.expect.hopf_dim, b.hopf.dim());
    tr.extend(b.hopf.check_hopf());
    Ok(())
}

fn task_lie(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let d = c.data()?;
    let gl = build_l(&c.field, d.t, &d.ghost())?;
    tr.dim("l", gl.lie.dim());
    tr.extend(gl.lie.verify(c.seed, 200));
    tr.extend(gl.pair.verify());
    let dc = gl.pair.double_cross(c.seed)?;
    tr.push(if dc.same_as(&gl.lie) { Check::pass("g ⋈ l equals the declared bracket") } else { Check::fail("g ⋈ l equals the declared bracket", "brackets differ") });
    let u = restricted_enveloping(&gl.lie, "u(l)")?;
    let want = (c.field.p() as usize).pow(gl.lie.dim() as u32);
    tr.dim("u(l)", u.dim());
    tr.push(if u.dim() == want { Check::pass("dim u(l) = p^dim l") } else { Check::fail("dim u(l) = p^dim l", format!("{} ≠ {want}", u.dim())) });
    tr.expect("dim u(l)", c.cfg.expect.l_dim, u.dim());
    Ok(())
}

fn task_extension(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let d = c.data()?;
    let pe = paper_extension(d, c.f)?;
    let e = &pe.ext;
    let (dk, dh, dl) = (e.k.dim(), e.h.dim(), e.l.dim());
    tr.dim("K", dk);
    tr.dim("H", dh);
    tr.dim("L", dl);
    tr.push(if dk * dl == dh { Check::pass("dim K · dim L = dim H") } else { Check::fail("dim K · dim L = dim H", format!("{dk}·{dl} ≠ {dh}")) });
    tr.expect("dim K", c.cfg.expect.k_dim, dk);
    tr.expect("dim L", c.cfg.expect.l_dim, dl);
    tr.expect("dim H", c.cfg.expect.hopf_dim, dh);
    tr.extend(e.check_exact());
    if c.level == Level::Exact || tr.checks.iter().any(|x| !x.pass) {
        return Ok(());
    }
    let scope = if c.cfg.extension.generators_only { Scope::Generators } else { Scope::Full };
    tr.extend(e.check_cleaving(&pe.cleaving, scope));
    if c.level == Level::Cleft || tr.checks.iter().any(|x| !x.pass) {
        return Ok(());
    }
    tr.extend(e.check_split(&pe.cleaving));
    if tr.checks.iter().any(|x| !x.pass) {
        return Ok(());
    }
    if dl > c.cfg.extension.datum_max_l {
        tr.notes.push(format!("datum extraction skipped: dim L = {dl} above {}", c.cfg.extension.datum_max_l));
        return Ok(());
    }
    let datum = e.extract_datum(&pe.cleaving)?;
    tr.push(datum.sigma_trivial());
    tr.push(datum.tau_trivial());
    if dh <= c.cfg.extension.round_trip_max_dim {
        let b = bicrossed_product(&e.k, &e.l, &datum)?;
        let mut hr = b.ext.h.check_hopf();
        for ch in &mut hr.checks {
            ch.name = format!("K # L: {}", ch.name);
        }
        tr.extend(hr);
        tr.extend(round_trip(e, &pe.cleaving, &b));
    } else {
        tr.notes.push(format!("bicrossed round trip skipped: dim H = {dh} above {}", c.cfg.extension.round_trip_max_dim));
    }
    Ok(())
}

fn task_twist(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let d = c.data()?;
    let iso = verify_twist_iso(d, c.f, c.seed)?;
    tr.dim("R_q", iso.dims.0);
    tr.dim("(R_1)_σ", iso.dims.1);
    tr.notes.push(format!("Hilbert series {:?} / {:?}", iso.hilbert.0, iso.hilbert.1));
    tr.extend(iso.report);
    let gsize = (c.f as usize).pow(d.theta as u32);
    if iso.dims.0 * gsize <= c.cfg.twist.hopf_max_dim {
        let d1 = PaperData::new(&c.field, d.t, d.theta, PaperData::trivial_q(d.theta), d.a.clone())?;
        let s = cocycle_from_matrices(&c.field, &d1.q, &d.q, c.f)?;
        let b1 = bosonize(&Nichols::build(&d1, c.f)?)?;
        let bq = bosonize(&Nichols::build(d, c.f)?)?;
        let tw = twist_hopf(&b1.hopf, &group_projection(&b1), &s)?;
        tr.dim("H", tw.hopf.dim());
        let mut hr = tw.hopf.check_hopf();
        for ch in &mut hr.checks {
            ch.name = format!("H_σ: {}", ch.name);
        }
        tr.extend(hr);
        tr.extend(compare_bosonizations(&tw, &bq));
    }
    Ok(())
}

/// k[x]/(x^e), augmented by x ↦ 0
pub fn truncated_polynomial(field: &Field, e: u32) -> Result<FinBasisAlgebra> {
    let mut pres = Presentation::new(format!("k[x]/(x^{e})"), field, vec![Generator::new("x")]);
    pres.push(NcPoly::word(Word::letter(0).pow(e as usize)));
    Ok(FinBasisAlgebra::from_presentation(&pres, None)?.with_counit(vec![Fe::ZERO]))
}

/// algebra from a presentation file, augmented by sending every generator to 0
pub fn algebra_from_presentation(text: &str) -> Result<FinBasisAlgebra> {
    let file: PresFile = toml::from_str(text).map_err(|e| CoreError::Parse(e.to_string()))?;
    let pres = file.into_presentation()?;
    let n = pres.ngens();
    Ok(FinBasisAlgebra::from_presentation(&pres, None)?.with_counit(vec![Fe::ZERO; n]))
}

fn betti_algebra(c: &Ctx) -> Result<FinBasisAlgebra> {
    let o = &c.cfg.betti;
    match o.algebra {
        AlgebraSource::Nichols => {
            let r = Nichols::build(c.data()?, c.f)?;
            let n = r.alg.ngens();
            Ok(r.alg.with_counit(vec![Fe::ZERO; n]))
        }
        AlgebraSource::Truncated => truncated_polynomial(&c.field, o.exponent.ok_or_else(|| CoreError::Parse("truncated algebra needs exponent".into()))?),
        AlgebraSource::Presentation => {
            let rel = o.presentation.as_ref().ok_or_else(|| CoreError::Parse("presentation path missing".into()))?;
            let path = c.base.map(|b| b.join(rel)).unwrap_or_else(|| PathBuf::from(rel));
            let text = std::fs::read_to_string(&path).map_err(|e| CoreError::Parse(format!("{}: {e}", path.display())))?;
            algebra_from_presentation(&text)
        }
    }
}

/// Betti tables for one algebra; shared by the scenario task and the `betti` verb.
pub fn betti_checks(alg: &FinBasisAlgebra, method: MethodSel, max_degree: usize, budget: Budget, sign_invariants: bool, tr: &mut TaskReport) -> Result<()> {
    tr.dim("A", alg.dim());
    let mut tables = Vec::new();
    if method != MethodSel::Minimal {
        let bar = bar_betti(alg, max_degree, budget);
        if let Some(n) = bar.cutoff {
            tr.verdict = Verdict::Inconclusive;
            tr.notes.push(format!("bar complex stopped by budget after degree {}", n.saturating_sub(1)));
        }
        tr.push(check_bar_dd(alg, (max_degree + 1).min(bar.values.len() + 1), budget));
        tables.push(bar);
    }
    if method != MethodSel::Bar {
        tables.push(minimal_graded_betti(alg, max_degree)?);
    }
    for t in tables.iter().filter(|t| !t.values.is_empty()) {
        tr.push(if t.values.first() == Some(&1) { Check::pass(format!("b_0 = 1 ({:?})", t.method).to_lowercase()) } else { Check::fail(format!("b_0 = 1 ({:?})", t.method).to_lowercase(), format!("{:?}", t.values)) });
    }
    let n = tables.iter().map(|t| t.values.len()).min().unwrap_or(0);
    if tables.len() == 2 && n > 0 {
        let agree = tables[0].values[..n] == tables[1].values[..n];
        tr.push(if agree { Check::pass(format!("bar = minimal for n < {n}")) } else { Check::fail(format!("bar = minimal for n < {n}"), format!("{:?} vs {:?}", tables[0].values, tables[1].values)) });
    }
    if let Some(longest) = tables.iter().max_by_key(|t| t.values.len()) {
        tr.notes.push(fgc_probe(&longest.values).note);
    }
    if sign_invariants {
        let inv = invariant_betti(alg, &GroupAction::sign(alg), max_degree, budget)?;
        if inv.cutoff.is_some() {
            tr.verdict = Verdict::Inconclusive;
            tr.notes.push("invariant bar complex stopped by budget".into());
        }
        let base = &tables[0].values;
        let le = inv.values.iter().zip(base).all(|(a, b)| a <= b);
        tr.push(if le { Check::pass("b_n^Γ ≤ b_n") } else { Check::fail("b_n^Γ ≤ b_n", format!("{:?} vs {base:?}", inv.values)) });
        tr.notes.push(format!("sign-invariant Betti numbers {:?}", inv.values));
    }
    tr.betti = tables;
    Ok(())
}

fn task_betti(c: &Ctx, tr: &mut TaskReport) -> Result<()> {
    let alg = betti_algebra(c)?;
    betti_checks(&alg, c.method, c.max_degree, c.budget, c.cfg.betti.sign_invariants, tr)?;
    if let Some(want) = &c.cfg.expect.betti {
        for t in tr.betti.clone() {
            let n = want.len().min(t.values.len());
            let ok = want[..n] == t.values[..n];
            tr.push(if ok { Check::pass(format!("expected Betti numbers ({:?})", t.method).to_lowercase()) } else { Check::fail(format!("expected Betti numbers ({:?})", t.method).to_lowercase(), format!("{:?} vs {want:?}", t.values)) });
        }
    }
    Ok(())
}

/// Presentation of 𝓑(V), or of the bosonization, for a scenario's family.
pub fn emit_presentation(text: &str, bosonization: bool) -> Result<String> {
    let cfg = ScenarioConfig::parse(text)?;
    let field = cfg.field.build()?;
    let fam = cfg.family.as_ref().ok_or_else(|| CoreError::Parse("missing [family]".into()))?;
    let d = fam.build(&field)?;
    if !bosonization {
        let mut p = crate::nichols::nichols_presentation(&d);
        p.expected_dim = Some(d.nichols_dim_formula() as usize);
        return Ok(p.to_toml());
    }
    let f = fam.f.unwrap_or_else(|| d.min_f());
    let r = Nichols::build(&d, f)?;
    let mut names = d.names();
    names.extend(d.group_names());
    Ok(bosonization_presentation(&r, &names)?.to_toml())
}

/// Bundled scenarios.
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! fixture {
    ($n:literal) => {
        Fixture { name: $n, text: include_str!(concat!("../fixtures/", $n, ".toml")) }
    };
}

pub const FIXTURES: &[Fixture] = &[
    fixture!("jordan-p3"),
    fixture!("jordan-p5"),
    fixture!("laestry-p3-g1"),
    fixture!("laestry-p3-g2"),
    fixture!("laestry-p5-g1"),
    fixture!("general-t2"),
    fixture!("prop63-t2"),
    fixture!("laestry-p3-q-1"),
    fixture!("twist-trivial-q"),
    fixture!("lie-p5-g2"),
    fixture!("betti-jordan"),
    fixture!("betti-truncated"),
    fixture!("betti-laestry"),
    fixture!("betti-jordan-sign"),
];

impl Fixture {
    /// first comment line of the file
    pub fn anchor(&self) -> &'static str {
        self.text.lines().find_map(|l| l.strip_prefix("# anchor:")).map(str::trim).unwrap_or("")
    }
}

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// A path on disk, or the name of a bundled fixture.
pub fn load(spec: &str) -> Result<(String, Option<PathBuf>)> {
    let p = Path::new(spec);
    if p.exists() {
        let text = std::fs::read_to_string(p).map_err(|e| CoreError::Parse(format!("{spec}: {e}")))?;
        return Ok((text, p.parent().map(Path::to_path_buf)));
    }
    match fixture(spec.trim_end_matches(".toml")) {
        Some(f) => Ok((f.text.to_string(), None)),
        None => Err(CoreError::Parse(format!("{spec}: no such file or bundled fixture"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_fixture_parses_and_has_an_anchor() {
        assert!(FIXTURES.len() >= 12);
        for f in FIXTURES {
            ScenarioConfig::parse(f.text).unwrap_or_else(|e| panic!("{}: {e}", f.name));
            assert!(!f.anchor().is_empty(), "{} has no anchor", f.name);
        }
    }

    #[test]
    fn extension_needs_build() {
        let text = "[scenario]\nid = \"x\"\ntasks = [\"verify-extension\"]\n[field]\np = 3\n[family]\nt = 1\ntheta = 1\n";
        assert!(ScenarioConfig::parse(text).is_err());
    }

    #[test]
    fn parse_errors_carry_position() {
        let e = ScenarioConfig::parse("[scenario]\nid = 3\n").unwrap_err().to_string();
        assert!(e.contains("line"), "{e}");
    }

    #[test]
    fn jordan_report_is_deterministic() {
        let f = fixture("jordan-p3").unwrap();
        let strip = |r: &RunReport| {
            let mut r = r.clone();
            r.tasks.iter_mut().for_each(|t| t.elapsed_ms = 0);
            r.to_json()
        };
        let a = run_scenario(f.text, None, &Overrides::default()).unwrap();
        let b = run_scenario(f.text, None, &Overrides::default()).unwrap();
        assert_eq!(a.verdict, Verdict::Pass, "{}", a.to_json());
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.task("verify-extension").unwrap().dims["H"], 27);
    }

    #[test]
    fn budget_makes_betti_inconclusive() {
        let f = fixture("betti-truncated").unwrap();
        let ov = Overrides { budget_mb: Some(0), method: Some(MethodSel::Bar), ..Default::default() };
        let r = run_scenario(f.text, None, &ov).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert_eq!(r.verdict.exit_code(), 2);
    }
}
