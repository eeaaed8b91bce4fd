//! Words in free generators, the degree-lexicographic order, and
//! noncommutative polynomials.

use std::borrow::Borrow;
use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::field::{Fe, Field};

pub type Letter = u16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub SmallVec<[Letter; 14]>);

impl Borrow<[Letter]> for Word {
    fn borrow(&self) -> &[Letter] {
        &self.0
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl Word {
    pub fn empty() -> Word {
        Word(SmallVec::new())
    }
    pub fn letter(l: Letter) -> Word {
        Word(smallvec::smallvec![l])
    }
    pub fn from_slice(s: &[Letter]) -> Word {
        Word(SmallVec::from_slice(s))
    }
    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }
    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn letters(&self) -> &[Letter] {
        &self.0
    }
    pub fn concat(&self, other: &Word) -> Word {
        let mut w = self.0.clone();
        w.extend_from_slice(&other.0);
        Word(w)
    }
    pub fn concat3(a: &[Letter], b: &[Letter], c: &[Letter]) -> Word {
        let mut w = SmallVec::with_capacity(a.len() + b.len() + c.len());
        w.extend_from_slice(a);
        w.extend_from_slice(b);
        w.extend_from_slice(c);
        Word(w)
    }
    pub fn pow(&self, n: usize) -> Word {
        let mut w = SmallVec::new();
        for _ in 0..n {
            w.extend_from_slice(&self.0);
        }
        Word(w)
    }
    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }
    /// Occurrence position of `sub` inside `self`, if any.
    pub fn find(&self, sub: &[Letter]) -> Option<usize> {
        if sub.len() > self.len() {
            return None;
        }
        (0..=self.len() - sub.len()).find(|&i| &self.0[i..i + sub.len()] == sub)
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_empty() {
            return "1".into();
        }
        // group runs as powers
        let mut parts = Vec::new();
        let mut i = 0;
        let l = &self.0;
        while i < l.len() {
            let mut j = i;
            while j < l.len() && l[j] == l[i] {
                j += 1;
            }
            let name = &names[l[i] as usize];
            parts.push(if j - i == 1 { name.clone() } else { format!("{name}^{}", j - i) });
            i = j;
        }
        parts.join("*")
    }
}

/// Degree-lexicographic order: weighted degree, then length, then lexicographic
/// comparison of letters through their precedence rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    pub weights: Vec<u32>,
    pub rank: Vec<u16>,
}

impl MonomialOrder {
    /// Plain deglex on `n` letters of weight 1 with letter i ranked i.
    pub fn deglex(n: usize) -> Self {
        MonomialOrder { weights: vec![1; n], rank: (0..n as u16).collect() }
    }

    pub fn weighted(weights: Vec<u32>) -> Self {
        let n = weights.len();
        MonomialOrder { weights, rank: (0..n as u16).collect() }
    }

    /// Order with an explicit precedence: `precedence[k]` is the k-th smallest letter.
    pub fn with_precedence(weights: Vec<u32>, precedence: &[Letter]) -> Self {
        let mut rank = vec![0u16; weights.len()];
        for (k, &l) in precedence.iter().enumerate() {
            rank[l as usize] = k as u16;
        }
        MonomialOrder { weights, rank }
    }

    pub fn ngens(&self) -> usize {
        self.weights.len()
    }

    #[inline]
    pub fn degree(&self, w: &[Letter]) -> u32 {
        w.iter().map(|&l| self.weights[l as usize]).sum()
    }

    pub fn cmp(&self, a: &[Letter], b: &[Letter]) -> Ordering {
        self.degree(a)
            .cmp(&self.degree(b))
            .then(a.len().cmp(&b.len()))
            .then_with(|| {
                for (x, y) in a.iter().zip(b) {
                    let c = self.rank[*x as usize].cmp(&self.rank[*y as usize]);
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }

    /// Totally ordered key; comparing keys equals comparing words.
    pub fn key(&self, w: &[Letter]) -> SmallVec<[u16; 16]> {
        let mut k = SmallVec::with_capacity(w.len() + 2);
        k.push(self.degree(w) as u16);
        k.push(w.len() as u16);
        k.extend(w.iter().map(|&l| self.rank[l as usize]));
        k
    }

    pub fn all_weights_positive(&self) -> bool {
        self.weights.iter().all(|&w| w > 0)
    }
}

/// Finitely supported map Word -> Fe. Terms sorted by the natural `Word` order
/// (not the monomial order) so equality is structural.
#[derive(Clone, PartialEq, Eq, Hash, Default, Debug)]
pub struct NcPoly {
    terms: Vec<(Word, Fe)>,
}

impl NcPoly {
    pub fn zero() -> Self {
        NcPoly { terms: Vec::new() }
    }

    pub fn constant(c: Fe) -> Self {
        NcPoly::term(Word::empty(), c)
    }

    pub fn one() -> Self {
        NcPoly::constant(Fe::ONE)
    }

    pub fn term(w: Word, c: Fe) -> Self {
        if c.is_zero() {
            NcPoly::zero()
        } else {
            NcPoly { terms: vec![(w, c)] }
        }
    }

    pub fn word(w: Word) -> Self {
        NcPoly::term(w, Fe::ONE)
    }

    pub fn letter(l: Letter) -> Self {
        NcPoly::word(Word::letter(l))
    }

    pub fn from_terms(field: &Field, mut terms: Vec<(Word, Fe)>) -> Self {
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        let mut out: Vec<(Word, Fe)> = Vec::with_capacity(terms.len());
        for (w, c) in terms {
            match out.last_mut() {
                Some(last) if last.0 == w => last.1 = field.add(last.1, c),
                _ => out.push((w, c)),
            }
        }
        out.retain(|t| !t.1.is_zero());
        NcPoly { terms: out }
    }

    pub fn terms(&self) -> &[(Word, Fe)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Word, Fe)> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Fe {
        match self.terms.binary_search_by(|t| t.0.cmp(w)) {
            Ok(k) => self.terms[k].1,
            Err(_) => Fe::ZERO,
        }
    }

    /// Constant term, when the polynomial is a scalar.
    pub fn as_scalar(&self) -> Option<Fe> {
        match self.terms.as_slice() {
            [] => Some(Fe::ZERO),
            [(w, c)] if w.is_empty() => Some(*c),
            _ => None,
        }
    }

    pub fn add(&self, f: &Field, other: &NcPoly) -> NcPoly {
        let mut t = self.terms.clone();
        t.extend(other.terms.iter().cloned());
        NcPoly::from_terms(f, t)
    }

    pub fn sub(&self, f: &Field, other: &NcPoly) -> NcPoly {
        self.add(f, &other.scale(f, f.neg(Fe::ONE)))
    }

    pub fn scale(&self, f: &Field, c: Fe) -> NcPoly {
        if c.is_zero() {
            return NcPoly::zero();
        }
        NcPoly { terms: self.terms.iter().map(|(w, v)| (w.clone(), f.mul(*v, c))).collect() }
    }

    pub fn mul(&self, f: &Field, other: &NcPoly) -> NcPoly {
        let mut t = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                t.push((a.concat(b), f.mul(*x, *y)));
            }
        }
        NcPoly::from_terms(f, t)
    }

    pub fn pow(&self, f: &Field, n: u32) -> NcPoly {
        let mut r = NcPoly::one();
        for _ in 0..n {
            r = r.mul(f, self);
        }
        r
    }

    /// u*self*v for words u, v
    pub fn sandwich(&self, u: &[Letter], v: &[Letter]) -> NcPoly {
        let mut terms: Vec<(Word, Fe)> =
            self.terms.iter().map(|(w, c)| (Word::concat3(u, w.letters(), v), *c)).collect();
        terms.sort_by(|a, b| a.0.cmp(&b.0));
        NcPoly { terms }
    }

    /// a*b - q*b*a
    pub fn q_commutator(f: &Field, a: &NcPoly, b: &NcPoly, q: Fe) -> NcPoly {
        a.mul(f, b).sub(f, &b.mul(f, a).scale(f, q))
    }

    pub fn leading(&self, order: &MonomialOrder) -> Option<&(Word, Fe)> {
        self.terms.iter().max_by(|a, b| order.cmp(&a.0 .0, &b.0 .0))
    }

    /// Maximal weighted degree of a term.
    pub fn degree(&self, order: &MonomialOrder) -> Option<u32> {
        self.terms.iter().map(|(w, _)| order.degree(w.letters())).max()
    }

    /// All terms share one weighted degree.
    pub fn is_homogeneous(&self, order: &MonomialOrder) -> bool {
        let mut d = self.terms.iter().map(|(w, _)| order.degree(w.letters()));
        match d.next() {
            None => true,
            Some(first) => d.all(|x| x == first),
        }
    }

    /// Homogeneous with respect to an integer multidegree per letter.
    pub fn is_multihomogeneous(&self, multideg: &[Vec<i64>]) -> bool {
        let deg = |w: &Word| -> Vec<i64> {
            let s = multideg.first().map_or(0, |v| v.len());
            let mut d = vec![0i64; s];
            for &l in w.letters() {
                for (k, x) in multideg[l as usize].iter().enumerate() {
                    d[k] += x;
                }
            }
            d
        };
        let mut it = self.terms.iter().map(|(w, _)| deg(w));
        match it.next() {
            None => true,
            Some(first) => it.all(|d| d == first),
        }
    }

    /// Letters replaced by polynomials, as an algebra map.
    pub fn substitute(&self, f: &Field, images: &[NcPoly]) -> NcPoly {
        let mut acc = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut p = NcPoly::constant(*c);
            for &l in w.letters() {
                p = p.mul(f, &images[l as usize]);
            }
            acc = acc.add(f, &p);
        }
        acc
    }

    /// Letters replaced by polynomials, reversing every word (anti-algebra map).
    pub fn substitute_anti(&self, f: &Field, images: &[NcPoly]) -> NcPoly {
        let mut acc = NcPoly::zero();
        for (w, c) in &self.terms {
            let mut p = NcPoly::constant(*c);
            for &l in w.letters().iter().rev() {
                p = p.mul(f, &images[l as usize]);
            }
            acc = acc.add(f, &p);
        }
        acc
    }

    pub fn map_letters(&self, f: &Field, map: impl Fn(Letter) -> Letter) -> NcPoly {
        NcPoly::from_terms(
            f,
            self.terms.iter().map(|(w, c)| (Word(w.0.iter().map(|&l| map(l)).collect()), *c)).collect(),
        )
    }

    /// Human readable form; terms listed in decreasing monomial order.
    pub fn render(&self, f: &Field, names: &[String], order: &MonomialOrder) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut ts: Vec<&(Word, Fe)> = self.terms.iter().collect();
        ts.sort_by(|a, b| order.cmp(&b.0 .0, &a.0 .0));
        let mut s = String::new();
        for (k, (w, c)) in ts.into_iter().enumerate() {
            let shown = f.show(*c);
            let (neg, mag) = match shown.strip_prefix('-') {
                Some(m) if f.m() == 1 => (true, m.to_string()),
                _ => (false, shown.clone()),
            };
            if k == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let coeff = if f.m() == 1 { mag } else { format!("({mag})") };
            if w.is_empty() {
                s.push_str(&coeff);
            } else if coeff == "1" {
                s.push_str(&w.render(names));
            } else {
                s.push_str(&format!("{coeff}*{}", w.render(names)));
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_word() -> impl Strategy<Value = Vec<u16>> {
        prop::collection::vec(0u16..4, 0..6)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn order_is_multiplicative(u in arb_word(), v in arb_word(), w in arb_word(), wts in prop::collection::vec(1u32..3, 4)) {
            let o = MonomialOrder::with_precedence(wts, &[2, 0, 3, 1]);
            if o.cmp(&u, &v) == Ordering::Less {
                let wu: Vec<u16> = w.iter().chain(&u).copied().collect();
                let wv: Vec<u16> = w.iter().chain(&v).copied().collect();
                let uw: Vec<u16> = u.iter().chain(&w).copied().collect();
                let vw: Vec<u16> = v.iter().chain(&w).copied().collect();
                prop_assert_eq!(o.cmp(&wu, &wv), Ordering::Less);
                prop_assert_eq!(o.cmp(&uw, &vw), Ordering::Less);
            }
        }

        #[test]
        fn key_order_matches_cmp(u in arb_word(), v in arb_word()) {
            let o = MonomialOrder::with_precedence(vec![1, 2, 1, 1], &[3, 1, 0, 2]);
            prop_assert_eq!(o.key(&u).cmp(&o.key(&v)), o.cmp(&u, &v));
        }
    }

    #[test]
    fn poly_arithmetic() {
        let f = Field::prime(3).unwrap();
        let x = NcPoly::letter(0);
        let y = NcPoly::letter(1);
        let c = NcPoly::q_commutator(&f, &y, &x, Fe::ONE);
        assert_eq!(c.len(), 2);
        assert!(c.add(&f, &c.scale(&f, f.from_i64(2))).is_zero());
        let sq = x.add(&f, &y).pow(&f, 3);
        assert_eq!(sq.len(), 8);
        let names = vec!["x".to_string(), "y".to_string()];
        let o = MonomialOrder::deglex(2);
        assert_eq!(c.render(&f, &names, &o), "y*x - x*y");
    }
}
