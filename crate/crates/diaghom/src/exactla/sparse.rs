//! Column-major sparse matrices with exact integer entries.
//!
//! Entries are `BigInt`, so one representation serves Z, Q (integer lifts
//! suffice for every matrix this crate produces) and the canonical lifts used
//! for F_p and Z/m computations.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// A sparse vector: (row, value) pairs sorted by row, values nonzero.
pub type SparseVec = Vec<(u32, BigInt)>;

/// Column-major sparse matrix; each column is sorted by row index and stores
/// no zero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    col_data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            col_data: vec![Vec::new(); cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            m.col_data[i].push((i as u32, BigInt::from(1)));
        }
        m
    }

    /// Builds from (row, col, value) triplets; duplicate positions are summed.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, i64)>,
    {
        Self::from_triplets_big(
            rows,
            cols,
            triplets
                .into_iter()
                .map(|(r, c, v)| (r, c, BigInt::from(v))),
        )
    }

    pub fn from_triplets_big<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, BigInt)>,
    {
        let mut cols_acc: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "triplet ({r},{c}) out of bounds");
            cols_acc[c].push((r as u32, v));
        }
        let col_data = cols_acc
            .into_iter()
            .map(|mut col| {
                col.sort_by_key(|&(r, _)| r);
                let mut out: SparseVec = Vec::with_capacity(col.len());
                for (r, v) in col {
                    match out.last_mut() {
                        Some((lr, lv)) if *lr == r => *lv += v,
                        _ => out.push((r, v)),
                    }
                }
                out.retain(|(_, v)| !v.is_zero());
                out
            })
            .collect();
        SparseMatrix {
            rows,
            cols,
            col_data,
        }
    }

    /// Builds from per-column sparse vectors (each sorted by row, nonzero).
    pub fn from_columns(rows: usize, columns: Vec<SparseVec>) -> Self {
        for col in &columns {
            debug_assert!(col.windows(2).all(|w| w[0].0 < w[1].0));
            debug_assert!(col.iter().all(|(r, v)| (*r as usize) < rows && !v.is_zero()));
        }
        SparseMatrix {
            rows,
            cols: columns.len(),
            col_data: columns,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.col_data.iter().map(Vec::len).sum()
    }

    pub fn column(&self, c: usize) -> &SparseVec {
        &self.col_data[c]
    }

    pub fn columns(&self) -> impl Iterator<Item = &SparseVec> {
        self.col_data.iter()
    }

    pub fn entry(&self, r: usize, c: usize) -> BigInt {
        self.col_data[c]
            .binary_search_by_key(&(r as u32), |&(row, _)| row)
            .map(|i| self.col_data[c][i].1.clone())
            .unwrap_or_else(|_| BigInt::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.col_data.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> SparseMatrix {
        let mut cols_acc: Vec<SparseVec> = vec![Vec::new(); self.rows];
        for (c, col) in self.col_data.iter().enumerate() {
            for (r, v) in col {
                cols_acc[*r as usize].push((c as u32, v.clone()));
            }
        }
        // Row order within each transposed column follows column order, which
        // is already increasing.
        SparseMatrix {
            rows: self.cols,
            cols: self.rows,
            col_data: cols_acc,
        }
    }

    /// Matrix product self * other.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in mul");
        let mut out_cols: Vec<SparseVec> = Vec::with_capacity(other.cols);
        for bcol in &other.col_data {
            let mut acc: std::collections::BTreeMap<u32, BigInt> = std::collections::BTreeMap::new();
            for (k, bv) in bcol {
                for (r, av) in &self.col_data[*k as usize] {
                    let slot = acc.entry(*r).or_insert_with(BigInt::zero);
                    *slot += av * bv;
                }
            }
            out_cols.push(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
        }
        SparseMatrix {
            rows: self.rows,
            cols: other.cols,
            col_data: out_cols,
        }
    }

    /// Matrix-vector product self * v.
    pub fn mul_vec(&self, v: &SparseVec) -> SparseVec {
        let mut acc: std::collections::BTreeMap<u32, BigInt> = std::collections::BTreeMap::new();
        for (k, xv) in v {
            for (r, av) in &self.col_data[*k as usize] {
                let slot = acc.entry(*r).or_insert_with(BigInt::zero);
                *slot += av * xv;
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Columns reduced mod p into field representation.
    pub fn columns_mod(&self, p: u64) -> Vec<Vec<(u32, u64)>> {
        let pb = BigInt::from(p);
        self.col_data
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, v)| {
                        let mut m = v % &pb;
                        if m.is_negative() {
                            m += &pb;
                        }
                        let val = u64::try_from(m).expect("reduced value fits u64");
                        (val != 0).then_some((*r, val))
                    })
                    .collect()
            })
            .collect()
    }

    /// Dense copy, for oracles and small-scale checks.
    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut dense = vec![vec![BigInt::zero(); self.cols]; self.rows];
        for (c, col) in self.col_data.iter().enumerate() {
            for (r, v) in col {
                dense[*r as usize][c] = v.clone();
            }
        }
        dense
    }

    /// Builds from a flat row-major grid of length rows*cols.
    pub fn from_dense_grid(rows: usize, cols: usize, grid: &[BigInt]) -> SparseMatrix {
        debug_assert_eq!(grid.len(), rows * cols);
        SparseMatrix::from_triplets_big(
            rows,
            cols,
            (0..rows).flat_map(|r| {
                (0..cols).filter_map(move |c| {
                    let v = &grid[r * cols + c];
                    (!v.is_zero()).then(|| (r, c, v.clone()))
                })
            }),
        )
    }

    pub fn from_dense(dense: &[Vec<BigInt>]) -> SparseMatrix {
        let rows = dense.len();
        let cols = dense.first().map_or(0, Vec::len);
        SparseMatrix::from_triplets_big(
            rows,
            cols,
            dense.iter().enumerate().flat_map(|(r, row)| {
                row.iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(move |(c, v)| (r, c, v.clone()))
            }),
        )
    }

    /// Entrywise difference self - other.
    pub fn sub(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in sub");
        assert_eq!(self.cols, other.cols, "shape mismatch in sub");
        let col_data = self
            .col_data
            .iter()
            .zip(&other.col_data)
            .map(|(a, b)| {
                let mut out: SparseVec = Vec::with_capacity(a.len() + b.len());
                let (mut i, mut j) = (0, 0);
                while i < a.len() || j < b.len() {
                    let (r, v) = if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
                        i += 1;
                        (a[i - 1].0, a[i - 1].1.clone())
                    } else if i >= a.len() || b[j].0 < a[i].0 {
                        j += 1;
                        (b[j - 1].0, -b[j - 1].1.clone())
                    } else {
                        i += 1;
                        j += 1;
                        (a[i - 1].0, &a[i - 1].1 - &b[j - 1].1)
                    };
                    if !v.is_zero() {
                        out.push((r, v));
                    }
                }
                out
            })
            .collect();
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            col_data,
        }
    }

    /// Horizontal concatenation [self | other].
    pub fn hcat(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.rows, other.rows, "shape mismatch in hcat");
        let mut col_data = self.col_data.clone();
        col_data.extend(other.col_data.iter().cloned());
        SparseMatrix {
            rows: self.rows,
            cols: self.cols + other.cols,
            col_data,
        }
    }
}

/// Writes the matrix in the plain-text triplet interchange format:
/// a `rows cols nnz` header line, then one `row col value` line per entry
/// in column-major order.
pub fn write_triplets<W: std::io::Write>(m: &SparseMatrix, w: &mut W) -> std::io::Result<()> {
    writeln!(w, "{} {} {}", m.rows(), m.cols(), m.nnz())?;
    for (c, col) in m.col_data.iter().enumerate() {
        for (r, v) in col {
            writeln!(w, "{r} {c} {v}")?;
        }
    }
    Ok(())
}

/// Reads the plain-text triplet interchange format written by
/// [`write_triplets`]. Tolerates arbitrary untrusted input: any malformed
/// content yields an error, never a panic.
pub fn read_triplets(text: &str) -> Result<SparseMatrix, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty triplet file")?;
    let mut parts = header.split_ascii_whitespace();
    let mut next_num = |what: &str| -> Result<usize, String> {
        parts
            .next()
            .ok_or_else(|| format!("missing {what} in header"))?
            .parse::<usize>()
            .map_err(|e| format!("bad {what}: {e}"))
    };
    let rows = next_num("rows")?;
    let cols = next_num("cols")?;
    let nnz = next_num("nnz")?;
    if rows > u32::MAX as usize || cols > u32::MAX as usize {
        return Err("matrix dimensions exceed u32 index range".into());
    }
    if nnz > rows.saturating_mul(cols) {
        return Err(format!("nnz {nnz} exceeds rows*cols"));
    }
    let mut triplets = Vec::new();
    for line in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let mut it = line.split_ascii_whitespace();
        let r: usize = it
            .next()
            .ok_or("missing row")?
            .parse()
            .map_err(|e| format!("bad row: {e}"))?;
        let c: usize = it
            .next()
            .ok_or("missing col")?
            .parse()
            .map_err(|e| format!("bad col: {e}"))?;
        let v: BigInt = it
            .next()
            .ok_or("missing value")?
            .parse()
            .map_err(|e| format!("bad value: {e}"))?;
        if r >= rows || c >= cols {
            return Err(format!("entry ({r},{c}) out of bounds {rows}x{cols}"));
        }
        if triplets.len() >= nnz {
            return Err("more entries than header nnz".into());
        }
        triplets.push((r, c, v));
    }
    if triplets.len() != nnz {
        return Err(format!(
            "header promised {nnz} entries, found {}",
            triplets.len()
        ));
    }
    Ok(SparseMatrix::from_triplets_big(rows, cols, triplets))
}
