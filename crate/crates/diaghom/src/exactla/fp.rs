//! Streaming column echelon over a prime field F_p.
//!
//! Columns arrive one at a time and are reduced against the stored echelon;
//! the pivot of a column is its largest row index, and stored pivots are
//! normalized to 1. Optional history tracking expresses every incoming column
//! as a combination of original columns, which yields kernel bases.

use super::ring::{mul_mod, pow_mod};

/// Sparse F_p vector: (index, value) sorted by index, values in 1..p-1.
pub type FpVec = Vec<(u32, u64)>;

#[derive(Clone, Copy, Debug)]
pub struct FpCtx {
    pub p: u64,
}

impl FpCtx {
    pub fn new(p: u64) -> Self {
        FpCtx { p }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.p)
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.p != 0, "inverse of zero");
        pow_mod(a, self.p - 2, self.p)
    }

    pub fn reduce_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.p as i64) as u64
    }

    /// result = a - m*b, merging sorted sparse vectors.
    pub fn sub_scaled(&self, a: &FpVec, b: &FpVec, m: u64) -> FpVec {
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(&(ra, va)), Some(&(rb, vb))) if ra == rb => {
                    let v = self.sub(va, self.mul(m, vb));
                    if v != 0 {
                        out.push((ra, v));
                    }
                    i += 1;
                    j += 1;
                }
                (Some(&(ra, va)), Some(&(rb, _))) if ra < rb => {
                    out.push((ra, va));
                    i += 1;
                }
                (Some(_), Some(&(rb, vb))) => {
                    let v = self.neg(self.mul(m, vb));
                    if v != 0 {
                        out.push((rb, v));
                    }
                    j += 1;
                }
                (Some(&(ra, va)), None) => {
                    out.push((ra, va));
                    i += 1;
                }
                (None, Some(&(rb, vb))) => {
                    let v = self.neg(self.mul(m, vb));
                    if v != 0 {
                        out.push((rb, v));
                    }
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        out
    }

    pub fn scale(&self, a: &mut FpVec, m: u64) {
        for (_, v) in a.iter_mut() {
            *v = self.mul(*v, m);
        }
    }
}

struct FpSlot {
    col: FpVec,
    hist: Option<FpVec>,
}

/// Outcome of adding one column to an echelon.
pub enum FpAdd {
    /// Column reduced to zero; carries the tracked history (a kernel vector
    /// of the streamed matrix) when tracking is on.
    Vanished(Option<FpVec>),
    /// Column was inserted with this pivot row.
    Inserted(u32),
}

pub struct FpEchelon {
    ctx: FpCtx,
    nrows: usize,
    slots: Vec<Option<Box<FpSlot>>>,
    rank: usize,
    track: bool,
}

impl FpEchelon {
    pub fn new(p: u64, nrows: usize, track: bool) -> Self {
        FpEchelon {
            ctx: FpCtx::new(p),
            nrows,
            slots: (0..nrows).map(|_| None).collect(),
            rank: 0,
            track,
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn ctx(&self) -> FpCtx {
        self.ctx
    }

    pub fn add(&mut self, col: FpVec, hist: Option<FpVec>) -> FpAdd {
        debug_assert!(col.iter().all(|&(r, v)| (r as usize) < self.nrows && v % self.ctx.p != 0));
        let mut col = col;
        let mut hist = if self.track { hist } else { None };
        loop {
            let Some(&(r, v)) = col.last() else {
                return FpAdd::Vanished(hist);
            };
            match &self.slots[r as usize] {
                Some(slot) => {
                    // Stored pivot is 1, so subtracting v * slot clears row r.
                    col = self.ctx.sub_scaled(&col, &slot.col, v);
                    debug_assert!(col.last().map_or(true, |&(lr, _)| lr < r));
                    if let Some(h) = hist.as_mut() {
                        let sh = slot.hist.as_ref().expect("tracked echelon");
                        *h = self.ctx.sub_scaled(h, sh, v);
                    }
                }
                None => {
                    let inv = self.ctx.inv(v);
                    self.ctx.scale(&mut col, inv);
                    if let Some(h) = hist.as_mut() {
                        self.ctx.scale(h, inv);
                    }
                    self.slots[r as usize] = Some(Box::new(FpSlot { col, hist }));
                    self.rank += 1;
                    return FpAdd::Inserted(r);
                }
            }
        }
    }

    /// Reduces a column without inserting it; returns the remainder.
    pub fn reduce(&self, col: FpVec) -> FpVec {
        let mut col = col;
        while let Some(&(r, v)) = col.last() {
            match &self.slots[r as usize] {
                Some(slot) => col = self.ctx.sub_scaled(&col, &slot.col, v),
                None => break,
            }
        }
        col
    }

    /// Expresses `col` in terms of the stored columns' histories: returns
    /// the accumulated history combination when the column lies in the span,
    /// None otherwise. Requires tracking.
    pub fn solve_in_span(&self, col: FpVec) -> Option<FpVec> {
        debug_assert!(self.track);
        let mut col = col;
        let mut acc: FpVec = Vec::new();
        loop {
            let Some(&(r, v)) = col.last() else {
                return Some(acc);
            };
            let slot = self.slots[r as usize].as_ref()?;
            col = self.ctx.sub_scaled(&col, &slot.col, v);
            let sh = slot.hist.as_ref().expect("tracked echelon");
            acc = self.ctx.sub_scaled(&acc, sh, self.ctx.neg(v));
        }
    }

    pub fn pivot_rows(&self) -> Vec<u32> {
        (0..self.nrows as u32)
            .filter(|&r| self.slots[r as usize].is_some())
            .collect()
    }
}

/// Rank and kernel of a matrix given as field columns; kernel vectors are in
/// original column coordinates.
pub fn fp_rank_kernel(p: u64, nrows: usize, columns: &[FpVec]) -> (usize, Vec<FpVec>) {
    let mut ech = FpEchelon::new(p, nrows, true);
    let mut kernel = Vec::new();
    for (j, col) in columns.iter().enumerate() {
        match ech.add(col.clone(), Some(vec![(j as u32, 1)])) {
            FpAdd::Vanished(h) => kernel.push(h.expect("tracking on")),
            FpAdd::Inserted(_) => {}
        }
    }
    (ech.rank(), kernel)
}

/// Dense Gaussian elimination rank over F_p; reference implementation used to
/// cross-check the sparse engine.
pub fn fp_dense_rank(p: u64, dense: &[Vec<u64>]) -> usize {
    let ctx = FpCtx::new(p);
    let nrows = dense.len();
    let ncols = dense.first().map_or(0, Vec::len);
    let mut m: Vec<Vec<u64>> = dense
        .iter()
        .map(|row| row.iter().map(|&v| v % p).collect())
        .collect();
    let mut rank = 0;
    let mut row = 0;
    for col in 0..ncols {
        let Some(pr) = (row..nrows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, pr);
        let inv = ctx.inv(m[row][col]);
        for c in col..ncols {
            m[row][c] = ctx.mul(m[row][c], inv);
        }
        for r in 0..nrows {
            if r != row && m[r][col] != 0 {
                let f = m[r][col];
                for c in col..ncols {
                    let t = ctx.mul(f, m[row][c]);
                    m[r][c] = ctx.sub(m[r][c], t);
                }
            }
        }
        rank += 1;
        row += 1;
        if row == nrows {
            break;
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_to_cols(p: u64, dense: &[Vec<u64>]) -> (usize, Vec<FpVec>) {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|c| {
                (0..nrows)
                    .filter_map(|r| {
                        let v = dense[r][c] % p;
                        (v != 0).then_some((r as u32, v))
                    })
                    .collect()
            })
            .collect();
        (nrows, cols)
    }

    #[test]
    fn identity_has_full_rank_no_kernel() {
        let dense = vec![vec![1, 0], vec![0, 1]];
        let (rows, cols) = dense_to_cols(2, &dense);
        let (rank, kernel) = fp_rank_kernel(2, rows, &cols);
        assert_eq!(rank, 2);
        assert!(kernel.is_empty());
    }

    #[test]
    fn kernel_vectors_annihilate() {
        // Column 2 = column 0 + column 1 over F_5.
        let dense = vec![vec![1, 2, 3], vec![4, 1, 0]];
        let (rows, cols) = dense_to_cols(5, &dense);
        let (rank, kernel) = fp_rank_kernel(5, rows, &cols);
        assert_eq!(rank, 2);
        assert_eq!(kernel.len(), 1);
        let ctx = FpCtx::new(5);
        // Check A * k = 0.
        let k = &kernel[0];
        for r in 0..rows {
            let mut acc = 0u64;
            for &(c, v) in k {
                acc = ctx.add(acc, ctx.mul(v, dense[r][c as usize] % 5));
            }
            assert_eq!(acc, 0);
        }
    }

    #[test]
    fn sparse_rank_matches_dense_on_random_matrices() {
        // Deterministic xorshift generator; no external crate needed here.
        let mut state = 0x243F6A8885A308D3u64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for p in [2u64, 3, 5, 97] {
            for _ in 0..25 {
                let rows = (next() % 12 + 1) as usize;
                let colsn = (next() % 12 + 1) as usize;
                let dense: Vec<Vec<u64>> = (0..rows)
                    .map(|_| {
                        (0..colsn)
                            .map(|_| if next() % 3 == 0 { next() % p } else { 0 })
                            .collect()
                    })
                    .collect();
                let (nr, cols) = dense_to_cols(p, &dense);
                let (rank, kernel) = fp_rank_kernel(p, nr, &cols);
                assert_eq!(rank, fp_dense_rank(p, &dense));
                assert_eq!(rank + kernel.len(), colsn);
            }
        }
    }
}
