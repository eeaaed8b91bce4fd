//! Rewriting systems and the overlap (Buchberger) completion for
//! noncommutative polynomials.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::error::{CoreError, Result};
use crate::field::{Fe, Field};
use crate::linalg::SparseVec;
use crate::presentation::Presentation;
use crate::word::{Letter, MonomialOrder, NcPoly, Word};

/// `lead -> tail`, every tail word smaller than `lead`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rule {
    pub lead: Word,
    pub tail: NcPoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// degree-by-degree linear algebra, homogeneous input only
    Graded,
    /// pairwise overlap completion
    Overlap,
}

#[derive(Clone)]
pub struct RewriteSystem {
    pub field: Field,
    pub order: MonomialOrder,
    pub rules: Vec<Rule>,
    lookup: FxHashMap<Word, u32>,
    lead_lens: Vec<usize>,
    pub complete: bool,
    pub degree_bound: u32,
    pub engine: Engine,
    /// Normal words in increasing monomial order; index 0 is the empty word.
    pub normal_words: Vec<Word>,
    /// Left multiplication by each letter on the normal-word basis, when known.
    pub tables: Option<Vec<Vec<SparseVec>>>,
}

impl std::fmt::Debug for RewriteSystem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "RewriteSystem({} rules, {} normal words, complete={}, bound={})",
            self.rules.len(),
            self.normal_words.len(),
            self.complete,
            self.degree_bound
        )
    }
}

type Key = SmallVec<[u16; 16]>;

impl RewriteSystem {
    pub fn from_rules(field: &Field, order: &MonomialOrder, rules: Vec<Rule>, engine: Engine) -> Self {
        let mut rs = RewriteSystem {
            field: field.clone(),
            order: order.clone(),
            rules,
            lookup: FxHashMap::default(),
            lead_lens: Vec::new(),
            complete: false,
            degree_bound: 0,
            engine,
            normal_words: Vec::new(),
            tables: None,
        };
        rs.reindex();
        rs
    }

    fn reindex(&mut self) {
        self.lookup = self.rules.iter().enumerate().map(|(i, r)| (r.lead.clone(), i as u32)).collect();
        let mut lens: Vec<usize> = self.rules.iter().map(|r| r.lead.len()).collect();
        lens.sort_unstable();
        lens.dedup();
        self.lead_lens = lens;
    }

    pub fn dim(&self) -> usize {
        self.normal_words.len()
    }

    /// Leftmost occurrence of a leading word: (position, rule index).
    pub fn find_match(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for &l in &self.lead_lens {
                if start + l > w.len() {
                    break;
                }
                if let Some(&r) = self.lookup.get(&w[start..start + l]) {
                    return Some((start, r as usize));
                }
            }
        }
        None
    }

    pub fn is_normal(&self, w: &[Letter]) -> bool {
        self.find_match(w).is_none()
    }

    /// True when no leading word is a suffix of `w`.
    fn suffix_ok(&self, w: &[Letter]) -> bool {
        for &l in &self.lead_lens {
            if l > w.len() {
                break;
            }
            if self.lookup.contains_key(&w[w.len() - l..]) {
                return false;
            }
        }
        true
    }

    /// Full reduction to a combination of normal words.
    pub fn reduce(&self, p: &NcPoly) -> NcPoly {
        let f = &self.field;
        let mut work: BTreeMap<Key, (Word, Fe)> = BTreeMap::new();
        let push = |work: &mut BTreeMap<Key, (Word, Fe)>, w: Word, c: Fe| {
            let k = self.order.key(&w.0);
            let e = work.entry(k).or_insert((w, Fe::ZERO));
            e.1 = f.add(e.1, c);
        };
        for (w, c) in p.terms() {
            push(&mut work, w.clone(), *c);
        }
        let mut out = Vec::new();
        while let Some((_, (w, c))) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find_match(&w.0) {
                None => out.push((w, c)),
                Some((pos, r)) => {
                    let rule = &self.rules[r];
                    let (pre, post) = (&w.0[..pos], &w.0[pos + rule.lead.len()..]);
                    for (tw, tc) in rule.tail.terms() {
                        push(&mut work, Word::concat3(pre, &tw.0, post), f.mul(c, *tc));
                    }
                }
            }
        }
        NcPoly::from_terms(f, out)
    }

    pub fn reduce_word(&self, w: &Word) -> NcPoly {
        self.reduce(&NcPoly::word(w.clone()))
    }

    /// Enumerate normal words by length. Fails if words of length `max_len`
    /// still exist or the count passes `cap`.
    pub fn enumerate_normal_words(&self, ngens: usize, max_len: usize, cap: usize) -> Result<Vec<Word>> {
        let mut all = vec![Word::empty()];
        let mut level = vec![Word::empty()];
        for len in 1..=max_len + 1 {
            let mut next = Vec::new();
            for w in &level {
                for x in 0..ngens as Letter {
                    let mut v = w.clone();
                    v.0.push(x);
                    if self.suffix_ok(&v.0) {
                        next.push(v);
                    }
                }
            }
            if next.is_empty() {
                all.sort_by(|a, b| self.order.cmp(&a.0, &b.0));
                return Ok(all);
            }
            if len > max_len {
                return Err(CoreError::Inconclusive(format!("normal words of length {len} remain")));
            }
            all.extend(next.iter().cloned());
            if all.len() > cap {
                return Err(CoreError::Budget(format!("more than {cap} normal words")));
            }
            level = next;
        }
        unreachable!()
    }

    /// Independent confluence check: every overlap of two rules (up to the
    /// given length) reduces to zero. Returns the first failure.
    pub fn check_overlaps(&self, max_len: usize) -> std::result::Result<usize, (usize, usize, NcPoly)> {
        let f = &self.field;
        let mut checked = 0;
        for (i, a) in self.rules.iter().enumerate() {
            for (j, b) in self.rules.iter().enumerate() {
                let (la, lb) = (a.lead.len(), b.lead.len());
                for k in 1..la.min(lb) {
                    if a.lead.0[la - k..] != b.lead.0[..k] || la + lb - k > max_len {
                        continue;
                    }
                    let u = &a.lead.0[..la - k];
                    let v = &b.lead.0[k..];
                    let s = a.tail.sandwich(&[], v).sub(f, &b.tail.sandwich(u, &[]));
                    let r = self.reduce(&s);
                    checked += 1;
                    if !r.is_zero() {
                        return Err((i, j, r));
                    }
                }
                // inclusions
                if i != j && la > lb {
                    if let Some(pos) = a.lead.find(&b.lead.0) {
                        let u = &a.lead.0[..pos];
                        let v = &a.lead.0[pos + lb..];
                        let s = a.tail.sub(f, &b.tail.sandwich(u, v));
                        let r = self.reduce(&s);
                        checked += 1;
                        if !r.is_zero() {
                            return Err((i, j, r));
                        }
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Left multiplication tables computed by rewriting.
    pub fn compute_tables(&self, ngens: usize) -> Vec<Vec<SparseVec>> {
        let index: FxHashMap<&Word, u32> = self.normal_words.iter().enumerate().map(|(i, w)| (w, i as u32)).collect();
        (0..ngens as Letter)
            .map(|x| {
                self.normal_words
                    .iter()
                    .map(|w| {
                        let mut v = Word::letter(x);
                        v.0.extend_from_slice(&w.0);
                        let nf = self.reduce_word(&v);
                        SparseVec::from_pairs(&self.field, nf.terms().iter().map(|(w, c)| (index[w], *c)).collect())
                    })
                    .collect()
            })
            .collect()
    }

    /// Reduce every tail and sort rules by leading word.
    fn interreduce_tails(&mut self) {
        for i in 0..self.rules.len() {
            let t = self.rules[i].tail.clone();
            self.rules[i].tail = self.reduce(&t);
        }
        let o = self.order.clone();
        self.rules.sort_by(|a, b| o.cmp(&a.lead.0, &b.lead.0));
        self.reindex();
    }
}

/// Monic rule from a nonzero polynomial.
pub fn rule_from_poly(f: &Field, order: &MonomialOrder, p: &NcPoly) -> Option<Rule> {
    let (lead, c) = p.leading(order)?.clone();
    let inv = f.neg(f.inv(c));
    let tail: Vec<(Word, Fe)> =
        p.terms().iter().filter(|t| t.0 != lead).map(|(w, v)| (w.clone(), f.mul(*v, inv))).collect();
    Some(Rule { lead, tail: NcPoly::from_terms(f, tail) })
}

fn rule_poly(f: &Field, r: &Rule) -> NcPoly {
    NcPoly::word(r.lead.clone()).sub(f, &r.tail)
}

struct Completion {
    field: Field,
    order: MonomialOrder,
    rules: Vec<Option<Rule>>,
    lookup: FxHashMap<Word, u32>,
    lead_lens: BTreeMap<usize, usize>,
    queue: BinaryHeap<Reverse<(usize, u32, u32, usize)>>,
    bound: usize,
    skipped: bool,
    budget: usize,
}

impl Completion {
    fn live_system(&self) -> RewriteSystem {
        let rules = self.rules.iter().flatten().cloned().collect();
        RewriteSystem::from_rules(&self.field, &self.order, rules, Engine::Overlap)
    }

    fn find(&self, w: &[Letter]) -> Option<(usize, usize)> {
        for start in 0..w.len() {
            for &l in self.lead_lens.keys() {
                if start + l > w.len() {
                    break;
                }
                if let Some(&r) = self.lookup.get(&w[start..start + l]) {
                    return Some((start, r as usize));
                }
            }
        }
        None
    }

    fn reduce(&self, p: &NcPoly) -> NcPoly {
        let f = &self.field;
        let mut work: BTreeMap<Key, (Word, Fe)> = BTreeMap::new();
        for (w, c) in p.terms() {
            let e = work.entry(self.order.key(&w.0)).or_insert((w.clone(), Fe::ZERO));
            e.1 = f.add(e.1, *c);
        }
        let mut out = Vec::new();
        while let Some((_, (w, c))) = work.pop_last() {
            if c.is_zero() {
                continue;
            }
            match self.find(&w.0) {
                None => out.push((w, c)),
                Some((pos, r)) => {
                    let rule = self.rules[r].as_ref().unwrap();
                    let (pre, post) = (&w.0[..pos], &w.0[pos + rule.lead.len()..]);
                    for (tw, tc) in rule.tail.terms() {
                        let nw = Word::concat3(pre, &tw.0, post);
                        let e = work.entry(self.order.key(&nw.0)).or_insert((nw, Fe::ZERO));
                        e.1 = f.add(e.1, f.mul(c, *tc));
                    }
                }
            }
        }
        NcPoly::from_terms(f, out)
    }

    fn kill(&mut self, id: usize) -> Rule {
        let r = self.rules[id].take().unwrap();
        self.lookup.remove(&r.lead);
        let n = self.lead_lens.get_mut(&r.lead.len()).unwrap();
        *n -= 1;
        if *n == 0 {
            self.lead_lens.remove(&r.lead.len());
        }
        r
    }

    fn add(&mut self, p: NcPoly) -> Result<()> {
        let mut pending = vec![p];
        while let Some(p) = pending.pop() {
            let p = self.reduce(&p);
            let Some(rule) = rule_from_poly(&self.field, &self.order, &p) else { continue };
            let id = self.rules.len();
            if id > self.budget {
                return Err(CoreError::Budget(format!("more than {} rules", self.budget)));
            }
            // leads containing the new lead are no longer reduced
            let victims: Vec<usize> = self
                .rules
                .iter()
                .enumerate()
                .filter_map(|(i, r)| r.as_ref().filter(|r| r.lead.find(&rule.lead.0).is_some()).map(|_| i))
                .collect();
            for v in victims {
                let old = self.kill(v);
                pending.push(rule_poly(&self.field, &old));
            }
            self.lookup.insert(rule.lead.clone(), id as u32);
            *self.lead_lens.entry(rule.lead.len()).or_insert(0) += 1;
            self.rules.push(Some(rule));
            self.enqueue(id);
        }
        Ok(())
    }

    fn enqueue(&mut self, id: usize) {
        let new = self.rules[id].as_ref().unwrap().lead.clone();
        for (j, r) in self.rules.iter().enumerate() {
            let Some(r) = r else { continue };
            for (a, la, b, lb) in [(id, &new, j, &r.lead), (j, &r.lead, id, &new)] {
                if a == b && a != id {
                    continue;
                }
                let (na, nb) = (la.len(), lb.len());
                for k in 1..na.min(nb) {
                    if la.0[na - k..] == lb.0[..k] {
                        self.queue.push(Reverse((na + nb - k, a as u32, b as u32, k)));
                    }
                }
                if a == b {
                    break;
                }
            }
        }
    }

    fn run(&mut self) -> Result<()> {
        while let Some(Reverse((len, a, b, k))) = self.queue.pop() {
            let (Some(ra), Some(rb)) = (&self.rules[a as usize], &self.rules[b as usize]) else { continue };
            if len > self.bound {
                self.skipped = true;
                continue;
            }
            let la = ra.lead.len();
            let u = &ra.lead.0[..la - k];
            let v = &rb.lead.0[k..];
            let s = ra.tail.sandwich(&[], v).sub(&self.field, &rb.tail.sandwich(u, &[]));
            self.add(s)?;
        }
        Ok(())
    }
}

/// Overlap completion. `bound` caps the length of overlap words that are
/// resolved and of normal words that are enumerated.
pub fn overlap_completion(pres: &Presentation, bound: u32) -> Result<RewriteSystem> {
    overlap_completion_with(pres, bound, 200_000, 5_000_000)
}

pub fn overlap_completion_with(pres: &Presentation, bound: u32, rule_budget: usize, word_cap: usize) -> Result<RewriteSystem> {
    pres.validate()?;
    let mut c = Completion {
        field: pres.field.clone(),
        order: pres.order(),
        rules: Vec::new(),
        lookup: FxHashMap::default(),
        lead_lens: BTreeMap::new(),
        queue: BinaryHeap::new(),
        bound: bound as usize,
        skipped: false,
        budget: rule_budget,
    };
    let mut rels = pres.relations.clone();
    let o = c.order.clone();
    rels.sort_by(|a, b| {
        let la = &a.leading(&o).unwrap().0;
        let lb = &b.leading(&o).unwrap().0;
        o.cmp(&la.0, &lb.0)
    });
    for r in rels {
        c.add(r)?;
    }
    c.run()?;
    let mut rs = c.live_system();
    rs.interreduce_tails();
    rs.degree_bound = bound;
    let words = rs.enumerate_normal_words(pres.ngens(), bound as usize, word_cap);
    match words {
        Ok(w) => {
            rs.normal_words = w;
            rs.complete = !c.skipped;
        }
        Err(CoreError::Inconclusive(_)) => {
            rs.complete = false;
        }
        Err(e) => return Err(e),
    }
    Ok(rs)
}

/// Set of normal words as a hash set, for membership tests.
pub fn word_set(words: &[Word]) -> FxHashSet<Word> {
    words.iter().cloned().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::Generator;

    fn jordan(p: u32) -> Presentation {
        let f = Field::prime(p).unwrap();
        let mut pr = Presentation::new("jordan", &f, vec![Generator::new("x"), Generator::new("y")]);
        pr.push_str("y*x - x*y + 1/2*x^2").unwrap();
        pr.push_str(&format!("x^{p}")).unwrap();
        pr.push_str(&format!("y^{p}")).unwrap();
        pr
    }

    #[test]
    fn jordan_plane_basis() {
        for p in [3, 5] {
            let rs = overlap_completion(&jordan(p), 4 * p).unwrap();
            assert!(rs.complete);
            assert_eq!(rs.dim(), (p * p) as usize);
            for w in &rs.normal_words {
                // every normal word is x^a y^b
                let s = w.letters();
                assert!(s.windows(2).all(|v| v[0] <= v[1]));
            }
        }
    }

    #[test]
    fn normal_form_examples() {
        let pr = jordan(3);
        let rs = overlap_completion(&pr, 12).unwrap();
        let yx = pr.parse("y*x", &Default::default()).unwrap();
        let expect = pr.parse("x*y + x^2", &Default::default()).unwrap();
        assert_eq!(rs.reduce(&yx), expect);
        assert!(rs.reduce(&NcPoly::zero()).is_zero());
        let x3 = pr.parse("x^3", &Default::default()).unwrap();
        assert!(rs.reduce(&x3).is_zero());
        assert!(rs.check_overlaps(30).is_ok());
    }

    #[test]
    fn single_square() {
        let f = Field::prime(5).unwrap();
        let mut pr = Presentation::new("sq", &f, vec![Generator::new("x")]);
        pr.push_str("x^2").unwrap();
        let rs = overlap_completion(&pr, 4).unwrap();
        assert!(rs.complete);
        assert_eq!(rs.dim(), 2);
    }

    #[test]
    fn group_algebra_z3() {
        let f = Field::prime(5).unwrap();
        let mut pr = Presentation::new("z3", &f, vec![Generator::new("g")]);
        pr.push_str("g^3 - 1").unwrap();
        let rs = overlap_completion(&pr, 6).unwrap();
        assert!(rs.complete);
        assert_eq!(rs.dim(), 3);
    }

    #[test]
    fn free_algebra_is_inconclusive() {
        let f = Field::prime(3).unwrap();
        let mut pr = Presentation::new("poly", &f, vec![Generator::new("x"), Generator::new("y")]);
        pr.push_str("y*x - x*y").unwrap();
        let rs = overlap_completion(&pr, 6).unwrap();
        assert!(!rs.complete);
    }
}
