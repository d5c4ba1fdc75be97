//! Exact integer linear algebra over arbitrary-precision integers:
//! Smith normal form with optional transforms, incremental column
//! lattices (Hermite-style) for spanning-set selection and surjectivity
//! certificates, cokernels of presented abelian groups, and integer
//! image-membership solving.

// index loops mirror the matrix notation here
#![allow(clippy::needless_range_loop)]

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Sparse integer vector: `(index, value)` pairs, indices ascending.
pub type SparseVec = Vec<(usize, BigInt)>;

/// Sparse integer matrix; at most one entry per position, no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SparseIntMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        SparseIntMatrix {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_triples<I, V>(rows: usize, cols: usize, triples: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, V)>,
        V: Into<BigInt>,
    {
        let mut m = SparseIntMatrix::new(rows, cols);
        for (r, c, v) in triples {
            if r >= rows || c >= cols {
                return Err(Error::DimensionMismatch(format!(
                    "entry ({r}, {c}) outside {rows} x {cols}"
                )));
            }
            let v: BigInt = v.into();
            if v.is_zero() {
                continue;
            }
            if m.entries.insert((r, c), v).is_some() {
                return Err(Error::MalformedDiagram(format!(
                    "duplicate entry at ({r}, {c})"
                )));
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.entries.get(&(r, c)).cloned().unwrap_or_default()
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        assert!(r < self.rows && c < self.cols);
        if v.is_zero() {
            self.entries.remove(&(r, c));
        } else {
            self.entries.insert((r, c), v);
        }
    }

    /// Entries as `(row, col, value)` in row-major order.
    pub fn triples(&self) -> impl Iterator<Item = (usize, usize, &BigInt)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    /// Column-major copy of the entries.
    pub fn columns(&self) -> Vec<Vec<(usize, BigInt)>> {
        let mut cols = vec![Vec::new(); self.cols];
        for (&(r, c), v) in &self.entries {
            cols[c].push((r, v.clone()));
        }
        cols
    }

    /// `self * y` for a dense integer vector.
    pub fn mul_vec(&self, y: &[BigInt]) -> Result<Vec<BigInt>> {
        if y.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector length {} != cols {}",
                y.len(),
                self.cols
            )));
        }
        let mut out = vec![BigInt::zero(); self.rows];
        for (&(r, c), v) in &self.entries {
            if !y[c].is_zero() {
                out[r] += v * &y[c];
            }
        }
        Ok(out)
    }
}

/// Dense integer matrix used for the unimodular transforms.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseIntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>, // row-major
}

impl DenseIntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseIntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = DenseIntMatrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &BigInt {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: BigInt) {
        self.data[r * self.cols + c] = v;
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + i, r * self.cols + j);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = self.get(src, c) * q;
            self.data[dst * self.cols + c] += t;
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for r in 0..self.rows {
            let t = self.get(r, src) * q;
            self.data[r * self.cols + dst] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for c in 0..self.cols {
            let v = -self.get(i, c).clone();
            self.set(i, c, v);
        }
    }

    fn negate_col(&mut self, j: usize) {
        for r in 0..self.rows {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    pub fn mul(&self, other: &DenseIntMatrix) -> DenseIntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = DenseIntMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        out.data[r * other.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, y: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, y.len());
        let mut out = vec![BigInt::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let a = self.get(r, c);
                if !a.is_zero() && !y[c].is_zero() {
                    out[r] += a * &y[c];
                }
            }
        }
        out
    }
}

/// Unimodular factors accumulated during Smith reduction. With input `M`
/// and diagonal `D`: `D = row_ops * M * col_ops` and
/// `M = row_ops_inv * D * col_ops_inv`.
#[derive(Clone, Debug)]
pub struct SnfTransforms {
    pub row_ops: DenseIntMatrix,
    pub row_ops_inv: DenseIntMatrix,
    pub col_ops: DenseIntMatrix,
    pub col_ops_inv: DenseIntMatrix,
}

/// Invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix.
#[derive(Clone, Debug)]
pub struct SnfResult {
    rows: usize,
    cols: usize,
    invariant_factors: Vec<BigInt>,
    transforms: Option<SnfTransforms>,
}

impl SnfResult {
    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.invariant_factors
    }

    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    pub fn transforms(&self) -> Option<&SnfTransforms> {
        self.transforms.as_ref()
    }

    /// The diagonal matrix `D` with the invariant factors.
    pub fn diagonal(&self) -> DenseIntMatrix {
        let mut d = DenseIntMatrix::zeros(self.rows, self.cols);
        for (i, f) in self.invariant_factors.iter().enumerate() {
            d.set(i, i, f.clone());
        }
        d
    }

    /// Cokernel of the matrix as an abstract abelian group.
    pub fn cokernel(&self) -> AbelianGroup {
        AbelianGroup {
            free_rank: self.rows - self.rank(),
            torsion_factors: self
                .invariant_factors
                .iter()
                .filter(|d| !d.is_one())
                .cloned()
                .collect(),
        }
    }
}

/// Finitely generated abelian group descriptor: `Z^free ( + ) Z/d_i`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AbelianGroup {
    pub free_rank: usize,
    /// Nontrivial invariant factors, each dividing the next.
    pub torsion_factors: Vec<BigInt>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup {
            free_rank: 0,
            torsion_factors: Vec::new(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion_factors.is_empty()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".to_string());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for d in &self.torsion_factors {
            parts.push(format!("Z/{d}"));
        }
        f.write_str(&parts.join(" + "))
    }
}

/// Smith normal form by exact integer elimination.
///
/// Pivots are chosen by least absolute value, then fewest fill-in
/// (Markowitz cost), then position, so runs are reproducible. With
/// `want_transforms` the four unimodular factors are accumulated.
pub fn smith_normal_form(m: &SparseIntMatrix, want_transforms: bool) -> SnfResult {
    let mut work = SnfWork::new(m, want_transforms);
    work.reduce();
    work.into_result()
}

struct SnfWork {
    rows: usize,
    cols: usize,
    row_data: Vec<BTreeMap<usize, BigInt>>,
    row_nnz: Vec<usize>,
    col_nnz: Vec<usize>,
    row_ops: Option<DenseIntMatrix>,
    row_ops_inv: Option<DenseIntMatrix>,
    col_ops: Option<DenseIntMatrix>,
    col_ops_inv: Option<DenseIntMatrix>,
    factors: Vec<BigInt>,
}

impl SnfWork {
    fn new(m: &SparseIntMatrix, want_transforms: bool) -> Self {
        let mut row_data = vec![BTreeMap::new(); m.rows];
        let mut col_nnz = vec![0usize; m.cols];
        let mut row_nnz = vec![0usize; m.rows];
        for (r, c, v) in m.triples() {
            row_data[r].insert(c, v.clone());
            row_nnz[r] += 1;
            col_nnz[c] += 1;
        }
        let (row_ops, row_ops_inv, col_ops, col_ops_inv) = if want_transforms {
            (
                Some(DenseIntMatrix::identity(m.rows)),
                Some(DenseIntMatrix::identity(m.rows)),
                Some(DenseIntMatrix::identity(m.cols)),
                Some(DenseIntMatrix::identity(m.cols)),
            )
        } else {
            (None, None, None, None)
        };
        SnfWork {
            rows: m.rows,
            cols: m.cols,
            row_data,
            row_nnz,
            col_nnz,
            row_ops,
            row_ops_inv,
            col_ops,
            col_ops_inv,
            factors: Vec::new(),
        }
    }

    fn get(&self, r: usize, c: usize) -> Option<&BigInt> {
        self.row_data[r].get(&c)
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.row_data.swap(i, j);
        self.row_nnz.swap(i, j);
        if let Some(l) = &mut self.row_ops {
            l.swap_rows(i, j);
        }
        // inverse of a row swap is the same swap, applied as a column op
        if let Some(p) = &mut self.row_ops_inv {
            p.swap_cols(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in &mut self.row_data {
            match (row.remove(&i), row.remove(&j)) {
                (Some(a), Some(b)) => {
                    row.insert(i, b);
                    row.insert(j, a);
                }
                (Some(a), None) => {
                    row.insert(j, a);
                }
                (None, Some(b)) => {
                    row.insert(i, b);
                }
                (None, None) => {}
            }
        }
        self.col_nnz.swap(i, j);
        if let Some(r) = &mut self.col_ops {
            r.swap_cols(i, j);
        }
        if let Some(q) = &mut self.col_ops_inv {
            q.swap_rows(i, j);
        }
    }

    /// `row[dst] += q * row[src]`
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        let src_row: Vec<(usize, BigInt)> =
            self.row_data[src].iter().map(|(&c, v)| (c, v.clone())).collect();
        for (c, v) in src_row {
            let slot = self.row_data[dst].entry(c);
            match slot {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += q * &v;
                    if e.get().is_zero() {
                        e.remove();
                        self.row_nnz[dst] -= 1;
                        self.col_nnz[c] -= 1;
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(q * &v);
                    self.row_nnz[dst] += 1;
                    self.col_nnz[c] += 1;
                }
            }
        }
        if let Some(l) = &mut self.row_ops {
            l.add_row(dst, src, q);
        }
        // inverse: subtract, applied on the other side
        if let Some(p) = &mut self.row_ops_inv {
            p.add_col(src, dst, &-q.clone());
        }
    }

    /// `col[dst] += q * col[src]`
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let Some(v) = self.row_data[r].get(&src).cloned() else {
                continue;
            };
            let slot = self.row_data[r].entry(dst);
            match slot {
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += q * &v;
                    if e.get().is_zero() {
                        e.remove();
                        self.row_nnz[r] -= 1;
                        self.col_nnz[dst] -= 1;
                    }
                }
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(q * &v);
                    self.row_nnz[r] += 1;
                    self.col_nnz[dst] += 1;
                }
            }
        }
        if let Some(right) = &mut self.col_ops {
            right.add_col(dst, src, q);
        }
        if let Some(qm) = &mut self.col_ops_inv {
            qm.add_row(src, dst, &-q.clone());
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in self.row_data[i].values_mut() {
            *v = -v.clone();
        }
        if let Some(l) = &mut self.row_ops {
            l.negate_row(i);
        }
        if let Some(p) = &mut self.row_ops_inv {
            p.negate_col(i);
        }
    }

    /// Least `(|value|, fill-in, row, col)` entry of the trailing
    /// submatrix, or `None` when it is zero.
    fn best_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize, usize)> = None;
        for r in k..self.rows {
            for (&c, v) in self.row_data[r].range(k..) {
                let a = v.abs();
                let fill = (self.row_nnz[r] - 1) * (self.col_nnz[c] - 1);
                let better = match &best {
                    None => true,
                    Some((ba, bf, br, bc)) => {
                        (&a, fill, r, c) < (ba, *bf, *br, *bc)
                    }
                };
                if better {
                    best = Some((a, fill, r, c));
                }
            }
        }
        best.map(|(_, _, r, c)| (r, c))
    }

    fn reduce(&mut self) {
        let steps = self.rows.min(self.cols);
        for k in 0..steps {
            loop {
                let Some((pr, pc)) = self.best_pivot(k) else {
                    return; // trailing submatrix is zero
                };
                self.swap_rows(k, pr);
                self.swap_cols(k, pc);
                if self.get(k, k).map(Signed::is_negative).unwrap_or(false) {
                    self.negate_row(k);
                }
                let d = self.get(k, k).cloned().expect("pivot present");

                // clear below, leaving residues in [0, d)
                let below: Vec<usize> = (k + 1..self.rows)
                    .filter(|&r| self.row_data[r].contains_key(&k))
                    .collect();
                for r in below {
                    let v = self.row_data[r].get(&k).cloned().unwrap();
                    let q = v.div_floor(&d);
                    self.add_row(r, k, &-q);
                }
                // clear to the right
                let right: Vec<usize> = self.row_data[k]
                    .range(k + 1..)
                    .map(|(&c, _)| c)
                    .collect();
                for c in right {
                    let v = self.row_data[k].get(&c).cloned().unwrap();
                    let q = v.div_floor(&d);
                    self.add_col(c, k, &-q);
                }

                let col_clear = (k + 1..self.rows).all(|r| !self.row_data[r].contains_key(&k));
                let row_clear = self.row_data[k].range(k + 1..).next().is_none();
                if !(col_clear && row_clear) {
                    continue; // smaller residues exist; re-pick the pivot
                }

                // pivot must divide everything that remains
                let offender = (k + 1..self.rows).find_map(|r| {
                    self.row_data[r]
                        .range(k + 1..)
                        .find(|(_, v)| !v.mod_floor(&d).is_zero())
                        .map(|_| r)
                });
                match offender {
                    Some(r) => {
                        self.add_row(k, r, &BigInt::one());
                        continue;
                    }
                    None => break,
                }
            }
            let d = self.get(k, k).cloned().expect("pivot survived");
            debug_assert!(d.is_positive());
            self.factors.push(d);
        }
    }

    fn into_result(self) -> SnfResult {
        let transforms = match (self.row_ops, self.row_ops_inv, self.col_ops, self.col_ops_inv) {
            (Some(l), Some(p), Some(r), Some(q)) => Some(SnfTransforms {
                row_ops: l,
                row_ops_inv: p,
                col_ops: r,
                col_ops_inv: q,
            }),
            _ => None,
        };
        SnfResult {
            rows: self.rows,
            cols: self.cols,
            invariant_factors: self.factors,
            transforms,
        }
    }
}

/// Solves `M y = v` exactly using a transform-carrying SNF of `M`.
/// Returns `None` when `v` is not in the integer column span.
pub fn solve_with_snf(snf: &SnfResult, v: &[BigInt]) -> Result<Option<Vec<BigInt>>> {
    if v.len() != snf.rows {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} != rows {}",
            v.len(),
            snf.rows
        )));
    }
    let t = snf.transforms().ok_or_else(|| {
        Error::InternalConsistency("solve requires SNF transforms".into())
    })?;
    let lv = t.row_ops.mul_vec(v);
    let mut z = vec![BigInt::zero(); snf.cols];
    for (i, lvi) in lv.iter().enumerate() {
        if i < snf.rank() {
            let d = &snf.invariant_factors[i];
            let (q, rem) = lvi.div_rem(d);
            if !rem.is_zero() {
                return Ok(None);
            }
            z[i] = q;
        } else if !lvi.is_zero() {
            return Ok(None);
        }
    }
    Ok(Some(t.col_ops.mul_vec(&z)))
}

/// Incrementally built integer column lattice in `Z^rows`, kept in
/// column-Hermite shape: one stored column per pivot row, each pivot being
/// the topmost nonzero entry of its column, positive.
///
/// Feeding columns in a fixed order yields a deterministic basis. The
/// retained column ids always span the same lattice as everything fed so
/// far, which makes the structure double as a spanning-subset selector.
pub struct ColumnLattice {
    rows: usize,
    pivots: BTreeMap<usize, SparseVec>,
    retained: Vec<usize>,
    unit_pivots: usize,
}

impl ColumnLattice {
    pub fn new(rows: usize) -> Self {
        ColumnLattice {
            rows,
            pivots: BTreeMap::new(),
            retained: Vec::new(),
            unit_pivots: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn pivot_count(&self) -> usize {
        self.pivots.len()
    }

    /// True when the lattice is all of `Z^rows`.
    pub fn is_full_unimodular(&self) -> bool {
        self.pivots.len() == self.rows && self.unit_pivots == self.rows
    }

    pub fn retained_ids(&self) -> &[usize] {
        &self.retained
    }

    /// Current pivot values by pivot row.
    pub fn pivot_values(&self) -> Vec<(usize, BigInt)> {
        self.pivots
            .iter()
            .map(|(&r, col)| (r, col[0].1.clone()))
            .collect()
    }

    /// Basis columns as a sparse matrix (`rows x pivot_count`), pivot rows
    /// ascending.
    pub fn basis_matrix(&self) -> SparseIntMatrix {
        let mut m = SparseIntMatrix::new(self.rows, self.pivots.len());
        for (j, col) in self.pivots.values().enumerate() {
            for (r, v) in col {
                m.set(*r, j, v.clone());
            }
        }
        m
    }

    /// Inserts a column (sparse, rows ascending, duplicate-free). Returns
    /// `true` when the column changed the lattice (and was retained),
    /// `false` when it already lay inside.
    pub fn add_column(&mut self, id: usize, entries: SparseVec) -> bool {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.iter().all(|(r, v)| *r < self.rows && !v.is_zero()));
        let mut v = entries;
        let mut changed = false;
        while let Some(&(top, _)) = v.first() {
            match self.pivots.get_mut(&top) {
                None => {
                    if v[0].1.is_negative() {
                        for (_, x) in &mut v {
                            *x = -std::mem::take(x);
                        }
                    }
                    if v[0].1.is_one() {
                        self.unit_pivots += 1;
                    }
                    self.pivots.insert(top, v);
                    changed = true;
                    break;
                }
                Some(pivot_col) => {
                    let d = pivot_col[0].1.clone();
                    let a = v[0].1.clone();
                    let q = a.div_floor(&d);
                    if !q.is_zero() {
                        v = sparse_sub_mul(&v, pivot_col, &q);
                    }
                    if v.first().map(|(r, _)| *r) == Some(top) {
                        // 0 < v[top] < d (so d >= 2 here): swap roles and
                        // keep reducing; pair ops are invertible, so the
                        // span is preserved
                        std::mem::swap(pivot_col, &mut v);
                        if pivot_col[0].1.is_one() {
                            self.unit_pivots += 1;
                        }
                        changed = true;
                    }
                    // else: entry at `top` cleared; continue at lower rows
                }
            }
        }
        if changed {
            self.retained.push(id);
        }
        changed
    }

    /// Cokernel `Z^rows / lattice`.
    pub fn cokernel(&self) -> AbelianGroup {
        smith_normal_form(&self.basis_matrix(), false).cokernel()
    }
}

/// `a - q * b` on sparse columns sorted by row.
fn sparse_sub_mul(a: &[(usize, BigInt)], b: &[(usize, BigInt)], q: &BigInt) -> SparseVec {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        match (a.get(i), b.get(j)) {
            (Some((ra, va)), Some((rb, vb))) if ra == rb => {
                let v = va - q * vb;
                if !v.is_zero() {
                    out.push((*ra, v));
                }
                i += 1;
                j += 1;
            }
            (Some((ra, va)), Some((rb, _))) if ra < rb => {
                out.push((*ra, va.clone()));
                i += 1;
            }
            (Some(_), Some((rb, vb))) => {
                let v = -(q * vb);
                if !v.is_zero() {
                    out.push((*rb, v));
                }
                j += 1;
            }
            (Some((ra, va)), None) => {
                out.push((*ra, va.clone()));
                i += 1;
            }
            (None, Some((rb, vb))) => {
                let v = -(q * vb);
                if !v.is_zero() {
                    out.push((*rb, v));
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

/// Augments `m` with one column `2 e_j` per torsion row, so lattice and
/// cokernel computations see the order-2 relations of the target group.
/// Augmented column ids `>= m.cols()` refer to torsion relations.
pub fn augmented_columns(
    m: &SparseIntMatrix,
    torsion_rows: &[usize],
) -> Vec<(usize, SparseVec)> {
    let mut cols: Vec<(usize, SparseVec)> = m
        .columns()
        .into_iter()
        .enumerate()
        .collect();
    for (i, &r) in torsion_rows.iter().enumerate() {
        cols.push((m.cols() + i, vec![(r, BigInt::from(2))]));
    }
    cols
}

/// Cokernel of `Z^cols -> Z^rows / <2 e_j : j torsion>`: the invariant
/// factors of the matrix augmented by the torsion relations.
pub fn cokernel_with_torsion(m: &SparseIntMatrix, torsion_rows: &[usize]) -> AbelianGroup {
    let mut lattice = ColumnLattice::new(m.rows());
    for (id, col) in augmented_columns(m, torsion_rows) {
        lattice.add_column(id, col);
        if lattice.is_full_unimodular() {
            return AbelianGroup::trivial();
        }
    }
    lattice.cokernel()
}

/// An integer witness that a vector lies in the image of the augmented
/// map; coefficients indexed by augmented column id.
#[derive(Clone, Debug)]
pub struct PreimageCertificate {
    pub coefficients: SparseVec,
}

impl PreimageCertificate {
    /// Splits into (matrix-column coefficients, torsion-relation
    /// coefficients by torsion index).
    pub fn split(&self, cols: usize) -> (SparseVec, SparseVec) {
        let mut on_cols = Vec::new();
        let mut on_torsion = Vec::new();
        for (id, v) in &self.coefficients {
            if *id < cols {
                on_cols.push((*id, v.clone()));
            } else {
                on_torsion.push((*id - cols, v.clone()));
            }
        }
        (on_cols, on_torsion)
    }
}

/// Solves `[M | 2 e_torsion] y = v` over the integers. The returned
/// certificate is re-verified by exact multiplication before it is handed
/// back; `None` means `v` is not in the image.
pub fn solve_with_torsion(
    m: &SparseIntMatrix,
    torsion_rows: &[usize],
    v: &[BigInt],
) -> Result<Option<PreimageCertificate>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "vector length {} != rows {}",
            v.len(),
            m.rows()
        )));
    }
    // select a spanning subset first; certificates only need those columns
    let augmented = augmented_columns(m, torsion_rows);
    let mut lattice = ColumnLattice::new(m.rows());
    for (id, col) in &augmented {
        lattice.add_column(*id, col.clone());
    }
    let selected = lattice.retained_ids().to_vec();
    let mut sub = SparseIntMatrix::new(m.rows(), selected.len());
    for (j, &id) in selected.iter().enumerate() {
        for (r, val) in &augmented[id].1 {
            sub.set(*r, j, val.clone());
        }
    }
    let snf = smith_normal_form(&sub, true);
    let Some(y_sub) = solve_with_snf(&snf, v)? else {
        return Ok(None);
    };
    let mut coefficients: SparseVec = selected
        .iter()
        .zip(y_sub)
        .filter(|(_, y)| !y.is_zero())
        .map(|(&id, y)| (id, y))
        .collect();
    coefficients.sort_by_key(|(id, _)| *id);

    // re-verify against the full augmented map
    let mut check = vec![BigInt::zero(); m.rows()];
    for (id, y) in &coefficients {
        for (r, val) in &augmented[*id].1 {
            check[*r] += val * y;
        }
    }
    if check[..] != *v {
        return Err(Error::InternalConsistency(
            "preimage certificate failed re-verification".into(),
        ));
    }
    Ok(Some(PreimageCertificate { coefficients }))
}

/// Rank of `m` over the prime field `F_p` (dense elimination; intended for
/// cross-checks on small matrices).
pub fn rank_mod_p(m: &SparseIntMatrix, p: u64) -> usize {
    assert!(p >= 2);
    let pb = BigInt::from(p);
    let mut rows: Vec<Vec<u64>> = vec![vec![0; m.cols()]; m.rows()];
    for (r, c, v) in m.triples() {
        rows[r][c] = v.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0);
    }
    let mut rank = 0;
    for c in 0..m.cols() {
        let Some(pivot_row) = (rank..m.rows()).find(|&r| !rows[r][c].is_multiple_of(p)) else {
            continue;
        };
        rows.swap(rank, pivot_row);
        let inv = mod_inverse(rows[rank][c] % p, p);
        for r in 0..m.rows() {
            if r != rank && !rows[r][c].is_multiple_of(p) {
                let factor = (rows[r][c] % p) * inv % p;
                for j in c..m.cols() {
                    let sub = factor * (rows[rank][j] % p) % p;
                    rows[r][j] = (rows[r][j] % p + p - sub) % p;
                }
            }
        }
        rank += 1;
        if rank == m.rows() {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p prime
    let mut result = 1u128;
    let mut base = (a % p) as u128;
    let mut exp = p - 2;
    let p128 = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            result = result * base % p128;
        }
        base = base * base % p128;
        exp >>= 1;
    }
    result as u64
}
