//! Exact sparse linear algebra over the rationals.
//!
//! Elimination is fraction-free: every row is scaled to a primitive integer
//! vector before it enters the echelon store, and row combinations use
//! cross-multiplication followed by content division.

use std::collections::BTreeMap;

use crate::scalar::Scalar;

/// Sparse vector: strictly increasing indices, no zero entries.
pub type SparseVec = Vec<(usize, Scalar)>;

pub fn sv_from_map(m: BTreeMap<usize, Scalar>) -> SparseVec {
    m.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

pub fn sv_axpy(x: &SparseVec, a: &Scalar, y: &SparseVec, b: &Scalar) -> SparseVec {
    // a*x + b*y
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, b * &y[j].1));
            j += 1;
        } else {
            let v = &(a * &x[i].1) + &(b * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_scale(x: &SparseVec, a: &Scalar) -> SparseVec {
    if a.is_zero() {
        return Vec::new();
    }
    x.iter().map(|(i, v)| (*i, v * a)).collect()
}

/// Scale a rational vector to a primitive integer vector with positive lead.
pub fn sv_primitive(x: &SparseVec) -> SparseVec {
    if x.is_empty() {
        return Vec::new();
    }
    let mut l = Scalar::one();
    for (_, v) in x {
        let d = Scalar::from_bigint(v.denom());
        if !d.is_one() {
            let g = l.gcd_int(&d);
            l = &(&l * &d) / &g;
        }
    }
    let mut y: SparseVec = x.iter().map(|(i, v)| (*i, v * &l)).collect();
    let mut g = Scalar::zero();
    for (_, v) in &y {
        g = g.gcd_int(v);
        if g.is_one() {
            break;
        }
    }
    if y[0].1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in y.iter_mut() {
            *v = &*v / &g;
        }
    }
    y
}

/// Incremental row echelon store keyed by leading column.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    pub rows: BTreeMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Insert `v`; returns true when it enlarged the span. Only leading
    /// entries are reduced, so the stored rows are in echelon form.
    pub fn insert(&mut self, v: &SparseVec) -> bool {
        let mut r = sv_primitive(v);
        loop {
            let Some((lead, a)) = r.first().cloned() else { return false };
            match self.rows.get(&lead) {
                None => {
                    self.rows.insert(lead, r);
                    return true;
                }
                Some(prow) => {
                    let p = prow[0].1.clone();
                    let g = a.gcd_int(&p);
                    let (pa, aa) = (&p / &g, &a / &g);
                    r = sv_primitive(&sv_axpy(&r, &pa, prow, &(-aa)));
                }
            }
        }
    }

    /// Lowest-lead-first insertion order. Shorter rows first keeps fill-in
    /// down on the very sparse operator images met in practice.
    pub fn from_rows(mut rows: Vec<SparseVec>) -> Self {
        rows.sort_by_key(|r| r.len());
        let mut e = Echelon::new();
        for r in &rows {
            e.insert(r);
        }
        e
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v).is_empty()
    }

    /// Full fraction-free reduction: every entry sitting in a pivot column is
    /// eliminated.
    pub fn reduce(&self, v: &SparseVec) -> SparseVec {
        let mut r = sv_primitive(v);
        loop {
            let hit = r.iter().find(|(c, _)| self.rows.contains_key(c)).cloned();
            let Some((c, a)) = hit else { return r };
            let prow = &self.rows[&c];
            let p = prow[0].1.clone();
            let g = a.gcd_int(&p);
            r = sv_primitive(&sv_axpy(&r, &(&p / &g), prow, &(-(&a / &g))));
        }
    }

    /// Reduced row echelon form with rational entries and unit pivots.
    pub fn rref(&self) -> Vec<SparseVec> {
        let leads: Vec<usize> = self.rows.keys().copied().collect();
        let mut done: BTreeMap<usize, SparseVec> = BTreeMap::new();
        for &l in leads.iter().rev() {
            let row = &self.rows[&l];
            let inv = row[0].1.recip();
            let mut r = sv_scale(row, &inv);
            loop {
                let hit = r.iter().skip(1).find(|(c, _)| done.contains_key(c)).cloned();
                let Some((c, a)) = hit else { break };
                r = sv_axpy(&r, &Scalar::one(), &done[&c], &(-a));
            }
            done.insert(l, r);
        }
        done.into_values().collect()
    }
}

/// Column-major sparse matrix over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrixQ {
    pub rows: usize,
    pub cols: usize,
    pub columns: Vec<SparseVec>,
}

impl SparseMatrixQ {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrixQ { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        SparseMatrixQ {
            rows: n,
            cols: n,
            columns: (0..n).map(|i| vec![(i, Scalar::one())]).collect(),
        }
    }

    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        SparseMatrixQ { rows, cols: columns.len(), columns }
    }

    pub fn from_triplets(rows: usize, cols: usize, t: &[(usize, usize, Scalar)]) -> Self {
        let mut cm: Vec<BTreeMap<usize, Scalar>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in t {
            let e = cm[*c].entry(*r).or_default();
            *e += v;
        }
        SparseMatrixQ { rows, cols, columns: cm.into_iter().map(sv_from_map).collect() }
    }

    /// Sorted (row, col, value) triplets without zeros.
    pub fn triplets(&self) -> Vec<(usize, usize, Scalar)> {
        let mut t: Vec<_> = self
            .columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v.clone())))
            .collect();
        t.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        t
    }

    pub fn get(&self, r: usize, c: usize) -> Scalar {
        self.columns[c].iter().find(|(i, _)| *i == r).map(|(_, v)| v.clone()).unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|c| c.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(|c| c.len()).sum()
    }

    pub fn apply(&self, x: &SparseVec) -> SparseVec {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (j, xj) in x {
            for (i, v) in &self.columns[*j] {
                *acc.entry(*i).or_default() += &(v * xj);
            }
        }
        sv_from_map(acc)
    }

    pub fn mul(&self, other: &SparseMatrixQ) -> SparseMatrixQ {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let columns = other.columns.iter().map(|c| self.apply(c)).collect();
        SparseMatrixQ { rows: self.rows, cols: other.cols, columns }
    }

    pub fn add(&self, other: &SparseMatrixQ) -> SparseMatrixQ {
        self.lin(other, &Scalar::one())
    }

    pub fn sub(&self, other: &SparseMatrixQ) -> SparseMatrixQ {
        self.lin(other, &Scalar::int(-1))
    }

    fn lin(&self, other: &SparseMatrixQ, b: &Scalar) -> SparseMatrixQ {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(x, y)| sv_axpy(x, &Scalar::one(), y, b))
            .collect();
        SparseMatrixQ { rows: self.rows, cols: self.cols, columns }
    }

    pub fn scale(&self, a: &Scalar) -> SparseMatrixQ {
        SparseMatrixQ {
            rows: self.rows,
            cols: self.cols,
            columns: self.columns.iter().map(|c| sv_scale(c, a)).collect(),
        }
    }

    pub fn transpose(&self) -> SparseMatrixQ {
        let mut cols: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                cols[*i].push((j, v.clone()));
            }
        }
        SparseMatrixQ { rows: self.cols, cols: self.rows, columns: cols }
    }

    /// Row vectors of the matrix.
    pub fn row_vectors(&self) -> Vec<SparseVec> {
        self.transpose().columns
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.columns.clone()).rank()
    }

    /// Basis of the null space, one vector per free column, in reduced
    /// echelon form (entry 1 at the free column, 0 at the other free columns).
    pub fn kernel(&self) -> Vec<SparseVec> {
        kernel_from_rows(self.row_vectors(), self.cols)
    }

    /// Some x with `self * x = b`, free variables set to zero.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        let n = self.cols;
        let mut rows = self.row_vectors();
        for (i, v) in b {
            rows[*i].push((n, v.clone()));
        }
        let e = Echelon::from_rows(rows);
        if e.rows.contains_key(&n) {
            return None;
        }
        let mut x = BTreeMap::new();
        for r in e.rref() {
            let lead = r[0].0;
            if let Some((_, v)) = r.iter().find(|(c, _)| *c == n) {
                x.insert(lead, v.clone());
            }
        }
        Some(sv_from_map(x))
    }

    /// Dense rendering, for tests and small reports.
    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let mut d = vec![vec![Scalar::zero(); self.cols]; self.rows];
        for (j, col) in self.columns.iter().enumerate() {
            for (i, v) in col {
                d[*i][j] = v.clone();
            }
        }
        d
    }
}

/// Null space of the matrix whose rows are given.
pub fn kernel_from_rows(rows: Vec<SparseVec>, ncols: usize) -> Vec<SparseVec> {
    let e = Echelon::from_rows(rows);
    let rref = e.rref();
    let pivots: BTreeMap<usize, &SparseVec> = rref.iter().map(|r| (r[0].0, r)).collect();
    let mut out = Vec::new();
    for f in 0..ncols {
        if pivots.contains_key(&f) {
            continue;
        }
        let mut v: BTreeMap<usize, Scalar> = BTreeMap::new();
        v.insert(f, Scalar::one());
        for (&l, r) in &pivots {
            if let Some((_, a)) = r.iter().find(|(c, _)| *c == f) {
                v.insert(l, -a.clone());
            }
        }
        out.push(sv_from_map(v));
    }
    out
}

/// Plain dense Gaussian elimination over the rationals; independent of the
/// sparse path and used as a cross-check.
pub fn dense_rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let rows = m.len();
    if rows == 0 {
        return 0;
    }
    let cols = m[0].len();
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, p);
        let inv = m[rank][c].recip();
        for r in 0..rows {
            if r != rank && !m[r][c].is_zero() {
                let f = &m[r][c] * &inv;
                for k in c..cols {
                    let t = &m[rank][k] * &f;
                    m[r][k] -= &t;
                }
            }
        }
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}
