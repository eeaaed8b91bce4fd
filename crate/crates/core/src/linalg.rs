//! Exact linear algebra over [`Field`]: sparse vectors, an incremental echelon
//! form with largest-index pivots, and small dense matrices.

use std::collections::BinaryHeap;

use rustc_hash::FxHashMap;

use crate::field::{Fe, Field};

/// Sparse vector: strictly increasing indices, no stored zeros.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SparseVec(pub Vec<(u32, Fe)>);

impl SparseVec {
    pub fn zero() -> Self {
        SparseVec(Vec::new())
    }

    pub fn unit(i: u32) -> Self {
        SparseVec(vec![(i, Fe::ONE)])
    }

    pub fn single(i: u32, c: Fe) -> Self {
        if c.is_zero() {
            SparseVec::zero()
        } else {
            SparseVec(vec![(i, c)])
        }
    }

    /// Combine an arbitrary list of (index, coefficient) pairs.
    pub fn from_pairs(field: &Field, mut pairs: Vec<(u32, Fe)>) -> Self {
        pairs.sort_unstable_by_key(|e| e.0);
        let mut out: Vec<(u32, Fe)> = Vec::with_capacity(pairs.len());
        for (i, c) in pairs {
            match out.last_mut() {
                Some(last) if last.0 == i => last.1 = field.add(last.1, c),
                _ => out.push((i, c)),
            }
        }
        out.retain(|e| !e.1.is_zero());
        SparseVec(out)
    }

    pub fn from_dense(v: &[Fe]) -> Self {
        SparseVec(
            v.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, &c)| (i as u32, c))
                .collect(),
        )
    }

    pub fn to_dense(&self, n: usize) -> Vec<Fe> {
        let mut v = vec![Fe::ZERO; n];
        for &(i, c) in &self.0 {
            v[i as usize] = c;
        }
        v
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &(u32, Fe)> {
        self.0.iter()
    }

    pub fn get(&self, i: u32) -> Fe {
        match self.0.binary_search_by_key(&i, |e| e.0) {
            Ok(k) => self.0[k].1,
            Err(_) => Fe::ZERO,
        }
    }

    /// Entry with the largest index.
    pub fn leading(&self) -> Option<(u32, Fe)> {
        self.0.last().copied()
    }

    pub fn scale(&self, field: &Field, c: Fe) -> SparseVec {
        if c.is_zero() {
            return SparseVec::zero();
        }
        SparseVec(self.0.iter().map(|&(i, v)| (i, field.mul(v, c))).collect())
    }

    pub fn neg(&self, field: &Field) -> SparseVec {
        SparseVec(self.0.iter().map(|&(i, v)| (i, field.neg(v))).collect())
    }

    /// self + c * other
    pub fn add_scaled(&self, field: &Field, other: &SparseVec, c: Fe) -> SparseVec {
        if c.is_zero() || other.is_zero() {
            return self.clone();
        }
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                out.push(a[i]);
                i += 1;
            } else if i == a.len() || b[j].0 < a[i].0 {
                out.push((b[j].0, field.mul(b[j].1, c)));
                j += 1;
            } else {
                let v = field.add(a[i].1, field.mul(b[j].1, c));
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        SparseVec(out)
    }

    pub fn add(&self, field: &Field, other: &SparseVec) -> SparseVec {
        self.add_scaled(field, other, Fe::ONE)
    }

    pub fn sub(&self, field: &Field, other: &SparseVec) -> SparseVec {
        self.add_scaled(field, other, field.neg(Fe::ONE))
    }

    pub fn dot_dense(&self, field: &Field, dense: &[Fe]) -> Fe {
        self.0.iter().fold(Fe::ZERO, |acc, &(i, c)| field.add(acc, field.mul(c, dense[i as usize])))
    }

    /// Re-index entries through `f`, combining collisions.
    pub fn map_indices(&self, field: &Field, f: impl Fn(u32) -> u32) -> SparseVec {
        SparseVec::from_pairs(field, self.0.iter().map(|&(i, c)| (f(i), c)).collect())
    }
}

/// Dense scratch accumulator for summing many sparse vectors.
pub struct Accumulator {
    field: Field,
    vals: Vec<Fe>,
    mark: Vec<bool>,
    touched: Vec<u32>,
}

impl Accumulator {
    pub fn new(field: &Field, size_hint: usize) -> Self {
        Accumulator {
            field: field.clone(),
            vals: vec![Fe::ZERO; size_hint],
            mark: vec![false; size_hint],
            touched: Vec::new(),
        }
    }

    #[inline]
    fn ensure(&mut self, i: usize) {
        if i >= self.vals.len() {
            let n = (i + 1).max(self.vals.len() * 2);
            self.vals.resize(n, Fe::ZERO);
            self.mark.resize(n, false);
        }
    }

    #[inline]
    pub fn add(&mut self, i: u32, c: Fe) {
        if c.is_zero() {
            return;
        }
        let iu = i as usize;
        self.ensure(iu);
        if !self.mark[iu] {
            self.mark[iu] = true;
            self.touched.push(i);
        }
        self.vals[iu] = self.field.add(self.vals[iu], c);
    }

    pub fn add_vec(&mut self, v: &SparseVec, c: Fe) {
        if c.is_zero() {
            return;
        }
        for &(i, x) in &v.0 {
            let y = self.field.mul(x, c);
            self.add(i, y);
        }
    }

    #[inline]
    pub fn get(&self, i: u32) -> Fe {
        self.vals.get(i as usize).copied().unwrap_or(Fe::ZERO)
    }

    #[inline]
    pub fn set(&mut self, i: u32, c: Fe) {
        let iu = i as usize;
        self.ensure(iu);
        if !self.mark[iu] {
            self.mark[iu] = true;
            self.touched.push(i);
        }
        self.vals[iu] = c;
    }

    /// Collect the sum and reset to zero.
    pub fn drain(&mut self) -> SparseVec {
        self.touched.sort_unstable();
        let mut out = Vec::with_capacity(self.touched.len());
        for &i in &self.touched {
            let iu = i as usize;
            let c = self.vals[iu];
            if !c.is_zero() {
                out.push((i, c));
            }
            self.vals[iu] = Fe::ZERO;
            self.mark[iu] = false;
        }
        self.touched.clear();
        SparseVec(out)
    }
}

/// Incremental row echelon form. Every stored row is monic at its largest index,
/// and no two rows share that pivot index.
pub struct Echelon {
    field: Field,
    rows: Vec<SparseVec>,
    pivots: FxHashMap<u32, u32>,
    acc: Accumulator,
    heap: BinaryHeap<u32>,
}

impl Echelon {
    pub fn new(field: &Field) -> Self {
        Echelon {
            field: field.clone(),
            rows: Vec::new(),
            pivots: FxHashMap::default(),
            acc: Accumulator::new(field, 64),
            heap: BinaryHeap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn is_pivot(&self, i: u32) -> bool {
        self.pivots.contains_key(&i)
    }

    pub fn pivot_row(&self, i: u32) -> Option<&SparseVec> {
        self.pivots.get(&i).map(|&r| &self.rows[r as usize])
    }

    pub fn pivot_indices(&self) -> impl Iterator<Item = u32> + '_ {
        self.pivots.keys().copied()
    }

    /// Reduce `v`. With `full`, every pivot index is eliminated; otherwise stops
    /// as soon as the leading entry is not a pivot.
    pub fn reduce(&mut self, v: &SparseVec, full: bool) -> SparseVec {
        let f = self.field.clone();
        self.heap.clear();
        for &(i, c) in &v.0 {
            self.acc.add(i, c);
            self.heap.push(i);
        }
        let mut last = u32::MAX;
        while let Some(i) = self.heap.pop() {
            if i == last {
                continue;
            }
            last = i;
            let c = self.acc.get(i);
            if c.is_zero() {
                continue;
            }
            match self.pivots.get(&i) {
                Some(&r) => {
                    let nc = f.neg(c);
                    let row = &self.rows[r as usize];
                    for &(j, x) in &row.0 {
                        if j == i {
                            continue;
                        }
                        let y = f.mul(x, nc);
                        self.acc.add(j, y);
                        self.heap.push(j);
                    }
                    self.acc.set(i, Fe::ZERO);
                }
                None => {
                    if !full {
                        break;
                    }
                }
            }
        }
        self.heap.clear();
        self.acc.drain()
    }

    /// Insert `v`; returns true when the rank grew.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let r = self.reduce(v, false);
        self.push_reduced(r)
    }

    fn push_reduced(&mut self, r: SparseVec) -> bool {
        match r.leading() {
            None => false,
            Some((i, c)) => {
                let r = if c == Fe::ONE { r } else { r.scale(&self.field, self.field.inv(c)) };
                self.pivots.insert(i, self.rows.len() as u32);
                self.rows.push(r);
                true
            }
        }
    }

    pub fn contains(&mut self, v: &SparseVec) -> bool {
        self.reduce(v, false).is_zero()
    }

    /// Back-substitute so every row is zero at all other pivots.
    pub fn make_reduced(&mut self) {
        let mut order: Vec<(u32, u32)> = self.pivots.iter().map(|(&i, &r)| (i, r)).collect();
        order.sort_unstable();
        for (_, r) in order {
            let row = std::mem::take(&mut self.rows[r as usize]);
            let (lead, rest) = row.0.split_last().unwrap();
            let tail = self.reduce(&SparseVec(rest.to_vec()), true);
            let mut v = tail.0;
            v.push(*lead);
            self.rows[r as usize] = SparseVec(v);
        }
    }
}

/// Column space solver: tracks how each stored row is built from input columns,
/// so it can report kernel relations and solve A x = b.
/// Column ids live below `max_cols`, row indices are shifted above it, so the
/// largest-index pivot rule always eliminates real entries first.
pub struct ColumnSolver {
    ech: Echelon,
    ncols: u32,
    high: u32,
    kernel: Vec<SparseVec>,
}

impl ColumnSolver {
    pub fn new(field: &Field, max_cols: usize) -> Self {
        ColumnSolver { ech: Echelon::new(field), ncols: 0, high: max_cols as u32, kernel: Vec::new() }
    }

    fn lift(&self, v: &SparseVec) -> Vec<(u32, Fe)> {
        v.0.iter().map(|&(i, c)| (i + self.high, c)).collect()
    }

    /// Append a column; returns its id.
    pub fn push(&mut self, v: &SparseVec) -> u32 {
        let id = self.ncols;
        assert!(id < self.high, "more columns than declared");
        self.ncols += 1;
        let mut e = vec![(id, Fe::ONE)];
        e.extend(self.lift(v));
        let r = self.ech.reduce(&SparseVec(e), false);
        match r.leading() {
            Some((i, _)) if i >= self.high => {
                self.ech.push_reduced(r);
            }
            Some(_) => {
                // real part vanished, what is left is a kernel relation
                self.kernel.push(r);
            }
            None => unreachable!(),
        }
        id
    }

    pub fn rank(&self) -> usize {
        self.ech.rank()
    }

    pub fn ncols(&self) -> u32 {
        self.ncols
    }

    /// Basis of the kernel of the column map, as combinations of column ids.
    pub fn kernel(&self) -> &[SparseVec] {
        &self.kernel
    }

    /// Some x with sum x_i col_i = b, if b is in the column span.
    pub fn solve(&mut self, b: &SparseVec) -> Option<SparseVec> {
        let f = self.ech.field.clone();
        let lifted = SparseVec(self.lift(b));
        let r = self.ech.reduce(&lifted, false);
        match r.leading() {
            Some((i, _)) if i >= self.high => None,
            _ => Some(r.neg(&f)),
        }
    }
}

/// Dense matrix, row-major.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix { rows, cols, data: vec![Fe::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Fe::ONE);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Fe>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let data = rows.into_iter().flatten().collect::<Vec<_>>();
        assert_eq!(data.len(), r * c);
        DenseMatrix { rows: r, cols: c, data }
    }

    /// Matrix whose j-th column is `cols[j]` (length `nrows`).
    pub fn from_sparse_columns(nrows: usize, cols: &[SparseVec]) -> Self {
        let mut m = DenseMatrix::zeros(nrows, cols.len());
        for (j, v) in cols.iter().enumerate() {
            for &(i, c) in &v.0 {
                m.set(i as usize, j, c);
            }
        }
        m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Fe {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Fe) {
        self.data[i * self.cols + j] = v;
    }

    pub fn column(&self, j: usize) -> Vec<Fe> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn column_sparse(&self, j: usize) -> SparseVec {
        SparseVec::from_dense(&self.column(j))
    }

    pub fn transpose(&self) -> Self {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, f: &Field, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = f.add(out.data[idx], f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[Fe]) -> Vec<Fe> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Fe::ZERO, |acc, j| f.add(acc, f.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn add(&self, f: &Field, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn scale(&self, f: &Field, c: Fe) -> DenseMatrix {
        DenseMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, c)).collect() }
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> DenseMatrix {
        assert_eq!(self.rows, self.cols);
        let mut base = self.clone();
        let mut r = DenseMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(f, &base);
            }
            base = base.mul(f, &base);
            e >>= 1;
        }
        r
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|c| c.is_zero())
    }

    /// Reduced row echelon form in place; returns pivot columns.
    pub fn rref(&mut self, f: &Field) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(k) = (r..self.rows).find(|&k| !self.get(k, c).is_zero()) else { continue };
            if k != r {
                for j in 0..self.cols {
                    self.data.swap(k * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = self.get(r, j);
                self.set(r, j, f.mul(v, inv));
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let a = self.get(i, c);
                if a.is_zero() {
                    continue;
                }
                let na = f.neg(a);
                for j in 0..self.cols {
                    let v = self.get(r, j);
                    if !v.is_zero() {
                        let idx = i * self.cols + j;
                        self.data[idx] = f.add(self.data[idx], f.mul(na, v));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self, f: &Field) -> usize {
        self.clone().rref(f).len()
    }

    /// Basis of {x : A x = 0}.
    pub fn kernel(&self, f: &Field) -> Vec<Vec<Fe>> {
        let mut m = self.clone();
        let piv = m.rref(f);
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut x = vec![Fe::ZERO; self.cols];
                x[fc] = Fe::ONE;
                for (r, &pc) in piv.iter().enumerate() {
                    x[pc] = f.neg(m.get(r, fc));
                }
                x
            })
            .collect()
    }

    /// Some x with A x = b.
    pub fn solve(&self, f: &Field, b: &[Fe]) -> Option<Vec<Fe>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = DenseMatrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, self.cols, b[i]);
        }
        let piv = aug.rref(f);
        if piv.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![Fe::ZERO; self.cols];
        for (r, &pc) in piv.iter().enumerate() {
            x[pc] = aug.get(r, self.cols);
        }
        Some(x)
    }

    pub fn inverse(&self, f: &Field) -> Option<DenseMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = DenseMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, Fe::ONE);
        }
        let piv = aug.rref(f);
        if piv.len() < n || piv[n - 1] != n - 1 {
            return None;
        }
        let mut inv = DenseMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j));
            }
        }
        Some(inv)
    }
}

/// Rank of a list of sparse vectors.
pub fn sparse_rank(field: &Field, vecs: &[SparseVec]) -> usize {
    let mut e = Echelon::new(field);
    for v in vecs {
        e.insert(v);
    }
    e.rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sparse(f: &Field, rng: &mut ChaCha8Rng, n: u32, k: usize) -> SparseVec {
        let pairs = (0..k).map(|_| (rng.gen_range(0..n), Fe(rng.gen_range(0..f.p())))).collect();
        SparseVec::from_pairs(f, pairs)
    }

    #[test]
    fn sparse_and_dense_rank_agree() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..40 {
            let n = rng.gen_range(1..12u32);
            let cols: Vec<SparseVec> = (0..rng.gen_range(1..14)).map(|_| random_sparse(&f, &mut rng, n, 3)).collect();
            let dense = DenseMatrix::from_sparse_columns(n as usize, &cols);
            assert_eq!(sparse_rank(&f, &cols), dense.rank(&f));
        }
    }

    #[test]
    fn solver_kernel_and_solve() {
        let f = Field::prime(7).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..30 {
            let n = rng.gen_range(1..9u32);
            let cols: Vec<SparseVec> = (0..rng.gen_range(1..12)).map(|_| random_sparse(&f, &mut rng, n, 3)).collect();
            let mut s = ColumnSolver::new(&f, cols.len());
            for c in &cols {
                s.push(c);
            }
            assert_eq!(s.rank() + s.kernel().len(), cols.len());
            for k in s.kernel() {
                let mut acc = Accumulator::new(&f, n as usize);
                for &(id, c) in &k.0 {
                    acc.add_vec(&cols[id as usize], c);
                }
                assert!(acc.drain().is_zero());
            }
            // b in span
            let mut acc = Accumulator::new(&f, n as usize);
            for c in &cols {
                acc.add_vec(c, Fe(rng.gen_range(0..7)));
            }
            let b = acc.drain();
            let x = s.solve(&b).expect("b is in span");
            let mut acc = Accumulator::new(&f, n as usize);
            for &(id, c) in &x.0 {
                acc.add_vec(&cols[id as usize], c);
            }
            assert_eq!(acc.drain(), b);
        }
    }

    #[test]
    fn dense_inverse_and_kernel() {
        let f = Field::prime(3).unwrap();
        let a = DenseMatrix::from_rows(vec![
            vec![Fe(1), Fe(2), Fe(0)],
            vec![Fe(0), Fe(1), Fe(1)],
            vec![Fe(1), Fe(0), Fe(1)],
        ]);
        // det = 1*(1-0) - 2*(0-1) = 3 = 0 mod 3: singular
        assert!(a.inverse(&f).is_none());
        let k = a.kernel(&f);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&f, &k[0]).iter().all(|c| c.is_zero()));
        let b = DenseMatrix::from_rows(vec![vec![Fe(1), Fe(1)], vec![Fe(0), Fe(2)]]);
        let bi = b.inverse(&f).unwrap();
        assert_eq!(b.mul(&f, &bi), DenseMatrix::identity(2));
    }

    #[test]
    fn make_reduced_keeps_span() {
        let f = Field::prime(5).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vs: Vec<SparseVec> = (0..10).map(|_| random_sparse(&f, &mut rng, 12, 4)).collect();
        let mut e = Echelon::new(&f);
        for v in &vs {
            e.insert(v);
        }
        let r = e.rank();
        e.make_reduced();
        for v in &vs {
            assert!(e.contains(v));
        }
        let rows: Vec<SparseVec> = e.rows().to_vec();
        for row in &rows {
            let lead = row.leading().unwrap().0;
            for other in &rows {
                if other != row {
                    assert!(other.get(lead).is_zero());
                }
            }
        }
        assert_eq!(r, e.rank());
    }
}
