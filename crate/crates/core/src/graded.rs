//! Completion for presentations homogeneous in positive weights, one degree at
//! a time. In degree n the algebra is
//! `(sum_x x * A_{n - w(x)}) / span{ r * u : r relation, u normal }`;
//! eliminating with largest-word pivots yields the normal words of degree n,
//! the left multiplication tables, and the reduced Groebner basis.

use rustc_hash::FxHashMap;

use crate::error::{CoreError, Result};
use crate::field::Fe;
use crate::linalg::{Accumulator, Echelon, SparseVec};
use crate::presentation::Presentation;
use crate::rewrite::{Engine, RewriteSystem, Rule};
use crate::word::{Letter, MonomialOrder, NcPoly, Word};

struct Graded {
    order: MonomialOrder,
    /// normal words per degree, increasing order
    words: Vec<Vec<Word>>,
    /// table[x][d][i] = NF(x * words[d][i]) over words[d + w(x)]
    table: Vec<Vec<Vec<SparseVec>>>,
    index: FxHashMap<Word, (u32, u32)>,
}

/// Relation terms sorted by reversed word, so shared suffixes are applied once.
struct SuffixPoly {
    terms: Vec<(Vec<Letter>, Fe)>,
    degree: u32,
}

impl Graded {
    fn weight(&self, x: Letter) -> u32 {
        self.order.weights[x as usize]
    }

    /// Apply letter x (degree-d input vector) using known tables.
    fn apply(&self, x: Letter, d: u32, v: &SparseVec, acc: &mut Accumulator) -> SparseVec {
        let tab = &self.table[x as usize][d as usize];
        for &(i, c) in &v.0 {
            acc.add_vec(&tab[i as usize], c);
        }
        acc.drain()
    }

    /// Walk the suffix tree of `rel` from vector `v` of degree `d`. The last
    /// (outermost) letter of each term is not applied: `emit(x, vec)` receives it.
    fn walk(
        &self,
        terms: &[(Vec<Letter>, Fe)],
        depth: usize,
        v: &SparseVec,
        d: u32,
        acc: &mut Accumulator,
        emit: &mut dyn FnMut(Letter, &SparseVec, Fe),
    ) {
        let mut i = 0;
        while i < terms.len() {
            let x = terms[i].0[depth];
            let mut j = i;
            while j < terms.len() && terms[j].0[depth] == x {
                j += 1;
            }
            let group = &terms[i..j];
            // terms that end here: x is their first letter
            let mut k = 0;
            while k < group.len() && group[k].0.len() == depth + 1 {
                emit(x, v, group[k].1);
                k += 1;
            }
            if k < group.len() {
                let nv = self.apply(x, d, v, acc);
                if !nv.is_zero() {
                    self.walk(&group[k..], depth + 1, &nv, d + self.weight(x), acc, emit);
                }
            }
            i = j;
        }
    }
}

/// Graded completion up to weighted degree `bound`.
pub fn graded_completion(pres: &Presentation, bound: u32) -> Result<RewriteSystem> {
    pres.validate()?;
    if !pres.is_weight_graded() {
        return Err(CoreError::Presentation("graded completion needs positive weights and homogeneous relations".into()));
    }
    let field = pres.field.clone();
    let order = pres.order();
    let ngens = pres.ngens();
    let maxw = *order.weights.iter().max().unwrap();
    let mut g = Graded {
        order: order.clone(),
        words: vec![vec![Word::empty()]],
        table: vec![Vec::new(); ngens],
        index: FxHashMap::default(),
    };
    g.index.insert(Word::empty(), (0, 0));

    let rels: Vec<SuffixPoly> = pres
        .relations
        .iter()
        .map(|r| {
            let mut terms: Vec<(Vec<Letter>, Fe)> =
                r.terms().iter().map(|(w, c)| (w.letters().iter().rev().copied().collect(), *c)).collect();
            terms.sort();
            SuffixPoly { degree: r.degree(&order).unwrap(), terms }
        })
        .collect();
    if rels.iter().any(|r| r.terms.iter().any(|t| t.0.is_empty())) {
        return Err(CoreError::Presentation("constant term in a graded relation".into()));
    }

    let mut rules = Vec::new();
    let mut empty_run = 0u32;
    let mut acc = Accumulator::new(&field, 256);
    let mut complete = false;
    let mut n = 0u32;
    while n < bound {
        n += 1;
        // candidate columns x * u
        let mut cands: Vec<(Letter, u32)> = Vec::new();
        let mut cand_words: Vec<Word> = Vec::new();
        for x in 0..ngens as Letter {
            let w = g.weight(x);
            if w > n {
                continue;
            }
            for (i, u) in g.words[(n - w) as usize].iter().enumerate() {
                cands.push((x, i as u32));
                let mut cw = Word::letter(x);
                cw.0.extend_from_slice(&u.0);
                cand_words.push(cw);
            }
        }
        let mut perm: Vec<u32> = (0..cands.len() as u32).collect();
        perm.sort_by(|&a, &b| order.cmp(&cand_words[a as usize].0, &cand_words[b as usize].0));
        // column index of (x, i)
        let mut col_of: FxHashMap<(Letter, u32), u32> = FxHashMap::default();
        for (col, &k) in perm.iter().enumerate() {
            col_of.insert(cands[k as usize], col as u32);
        }

        let mut ech = Echelon::new(&field);
        let mut row_acc = Accumulator::new(&field, cands.len().max(1));
        for rel in &rels {
            if rel.degree > n {
                continue;
            }
            let d0 = n - rel.degree;
            for i in 0..g.words[d0 as usize].len() {
                let start = SparseVec::unit(i as u32);
                let mut emit = |x: Letter, v: &SparseVec, c: Fe| {
                    for &(j, a) in &v.0 {
                        let col = col_of[&(x, j)];
                        row_acc.add(col, field.mul(a, c));
                    }
                };
                g.walk(&rel.terms, 0, &start, d0, &mut acc, &mut emit);
                let row = row_acc.drain();
                if !row.is_zero() {
                    ech.insert(&row);
                }
            }
        }
        ech.make_reduced();

        // normal words of degree n: non-pivot columns
        let mut new_index = vec![u32::MAX; cands.len()];
        let mut level = Vec::new();
        for col in 0..cands.len() as u32 {
            if !ech.is_pivot(col) {
                new_index[col as usize] = level.len() as u32;
                level.push(cand_words[perm[col as usize] as usize].clone());
            }
        }
        let nf_of_col = |col: u32| -> SparseVec {
            match ech.pivot_row(col) {
                None => SparseVec::unit(new_index[col as usize]),
                Some(row) => {
                    let pairs = row.0[..row.len() - 1]
                        .iter()
                        .map(|&(j, c)| (new_index[j as usize], field.neg(c)))
                        .collect::<Vec<_>>();
                    debug_assert!(pairs.iter().all(|p| p.0 != u32::MAX));
                    SparseVec::from_pairs(&field, pairs)
                }
            }
        };
        // tables and rules
        for x in 0..ngens as Letter {
            let w = g.weight(x);
            if w > n {
                continue;
            }
            let d = (n - w) as usize;
            let mut col_tab = Vec::with_capacity(g.words[d].len());
            for i in 0..g.words[d].len() as u32 {
                col_tab.push(nf_of_col(col_of[&(x, i)]));
            }
            let t = &mut g.table[x as usize];
            if t.len() <= d {
                t.resize(d + 1, Vec::new());
            }
            t[d] = col_tab;
        }
        for col in 0..cands.len() as u32 {
            if !ech.is_pivot(col) {
                continue;
            }
            let w = &cand_words[perm[col as usize] as usize];
            let prefix = &w.0[..w.len() - 1];
            if g.index.contains_key(prefix) {
                let tail = nf_of_col(col);
                let terms = tail.0.iter().map(|&(j, c)| (level[j as usize].clone(), c)).collect();
                rules.push(Rule { lead: w.clone(), tail: NcPoly::from_terms(&field, terms) });
            }
        }
        for (i, w) in level.iter().enumerate() {
            g.index.insert(w.clone(), (n, i as u32));
        }
        let empty = level.is_empty();
        g.words.push(level);
        if empty {
            empty_run += 1;
            if empty_run >= maxw {
                complete = true;
                break;
            }
        } else {
            empty_run = 0;
        }
    }
    let top_nonempty = g.words.last().is_some_and(|l| !l.is_empty());
    if !complete && top_nonempty {
        return Err(CoreError::Inconclusive(format!(
            "normal words remain in degree {n} of {}; raise the degree bound",
            pres.name
        )));
    }
    if !complete {
        // bound reached with trailing empty degrees shorter than the max weight
        return Err(CoreError::Inconclusive(format!("bound {bound} too small to certify {}", pres.name)));
    }

    // flatten to a global basis in increasing order
    let mut all: Vec<(Word, u32, u32)> = Vec::new();
    for (d, lv) in g.words.iter().enumerate() {
        for (i, w) in lv.iter().enumerate() {
            all.push((w.clone(), d as u32, i as u32));
        }
    }
    all.sort_by(|a, b| order.cmp(&a.0 .0, &b.0 .0));
    let mut global: FxHashMap<(u32, u32), u32> = FxHashMap::default();
    for (k, (_, d, i)) in all.iter().enumerate() {
        global.insert((*d, *i), k as u32);
    }
    let tables: Vec<Vec<SparseVec>> = (0..ngens as Letter)
        .map(|x| {
            let w = g.weight(x);
            all.iter()
                .map(|(_, d, i)| {
                    // the last max-weight degrees are empty, so every table exists
                    let v = &g.table[x as usize][*d as usize][*i as usize];
                    SparseVec::from_pairs(&field, v.0.iter().map(|&(j, c)| (global[&(d + w, j)], c)).collect())
                })
                .collect()
        })
        .collect();
    let mut rs = RewriteSystem::from_rules(&field, &order, rules, Engine::Graded);
    rs.complete = true;
    rs.degree_bound = bound;
    rs.normal_words = all.into_iter().map(|t| t.0).collect();
    rs.tables = Some(tables);
    Ok(rs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Field;
    use crate::presentation::Generator;
    use crate::rewrite::overlap_completion;

    fn jordan(p: u32) -> Presentation {
        let f = Field::prime(p).unwrap();
        let mut pr = Presentation::new("jordan", &f, vec![Generator::new("x"), Generator::new("y")]);
        pr.push_str("y*x - x*y + 1/2*x^2").unwrap();
        pr.push_str(&format!("x^{p}")).unwrap();
        pr.push_str(&format!("y^{p}")).unwrap();
        pr
    }

    #[test]
    fn agrees_with_overlap_engine() {
        for p in [3, 5] {
            let pr = jordan(p);
            let a = graded_completion(&pr, 4 * p).unwrap();
            let b = overlap_completion(&pr, 4 * p).unwrap();
            assert_eq!(a.normal_words, b.normal_words);
            assert_eq!(a.rules, b.rules);
            assert!(a.check_overlaps(40).is_ok());
            assert_eq!(a.tables.as_ref().unwrap(), &b.compute_tables(2));
        }
    }

    #[test]
    fn weighted_generators() {
        // k<a,b>/(ab - ba, a^3, b^2) with deg b = 2
        let f = Field::prime(3).unwrap();
        let mut pr = Presentation::new("w", &f, vec![Generator::weighted("a", 1), Generator::weighted("b", 2)]);
        pr.push_str("b*a - a*b").unwrap();
        pr.push_str("a^3").unwrap();
        pr.push_str("b^2").unwrap();
        let rs = graded_completion(&pr, 12).unwrap();
        assert_eq!(rs.dim(), 6);
        let b = overlap_completion(&pr, 12).unwrap();
        assert_eq!(rs.rules, b.rules);
    }

    #[test]
    fn small_bound_inconclusive() {
        let pr = jordan(3);
        assert!(matches!(graded_completion(&pr, 3), Err(CoreError::Inconclusive(_))));
    }
}
