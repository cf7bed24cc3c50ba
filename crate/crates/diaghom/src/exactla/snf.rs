//! Dense Smith normal form over the integers with arbitrary precision.
//!
//! The transform-carrying variant returns unimodular matrices L, R with
//! L * M * R diagonal and the divisibility chain d1 | d2 | ... ; it is meant
//! for matrices small enough to hold densely. Large sparse work goes through
//! the lattice engine, which only needs the diagonal.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::sparse::SparseMatrix;
use super::LinAlgError;

/// Cell guard for the transform-carrying routine.
const TRANSFORM_DENSE_CELLS: usize = 4_000_000;

pub struct SmithNormalForm {
    /// Full diagonal of length min(rows, cols): nonzero factors first
    /// (positive, each dividing the next), then zeros.
    pub diagonal: Vec<BigInt>,
    pub left: SparseMatrix,
    pub right: SparseMatrix,
}

impl SmithNormalForm {
    pub fn nonzero_factors(&self) -> Vec<BigInt> {
        self.diagonal
            .iter()
            .take_while(|d| !d.is_zero())
            .cloned()
            .collect()
    }
}

struct DenseSnf {
    nr: usize,
    nc: usize,
    m: Vec<BigInt>,
    left: Option<Vec<BigInt>>,
    right: Option<Vec<BigInt>>,
}

impl DenseSnf {
    fn new(nr: usize, nc: usize, m: Vec<BigInt>, transforms: bool) -> Self {
        debug_assert_eq!(m.len(), nr * nc);
        let ident = |n: usize| {
            let mut id = vec![BigInt::zero(); n * n];
            for i in 0..n {
                id[i * n + i] = BigInt::one();
            }
            id
        };
        DenseSnf {
            nr,
            nc,
            m,
            left: transforms.then(|| ident(nr)),
            right: transforms.then(|| ident(nc)),
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.m[i * self.nc + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.nc {
            self.m.swap(a * self.nc + j, b * self.nc + j);
        }
        if let Some(l) = self.left.as_mut() {
            for k in 0..self.nr {
                l.swap(a * self.nr + k, b * self.nr + k);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.nr {
            self.m.swap(i * self.nc + a, i * self.nc + b);
        }
        if let Some(r) = self.right.as_mut() {
            for k in 0..self.nc {
                r.swap(k * self.nc + a, k * self.nc + b);
            }
        }
    }

    /// row a -= q * row b
    fn row_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for j in 0..self.nc {
            let t = q * &self.m[b * self.nc + j];
            self.m[a * self.nc + j] -= t;
        }
        if let Some(l) = self.left.as_mut() {
            for k in 0..self.nr {
                let t = q * &l[b * self.nr + k];
                l[a * self.nr + k] -= t;
            }
        }
    }

    /// col a -= q * col b
    fn col_sub(&mut self, a: usize, b: usize, q: &BigInt) {
        for i in 0..self.nr {
            let t = q * &self.m[i * self.nc + b];
            self.m[i * self.nc + a] -= t;
        }
        if let Some(r) = self.right.as_mut() {
            for k in 0..self.nc {
                let t = q * &r[k * self.nc + b];
                r[k * self.nc + a] -= t;
            }
        }
    }

    /// row a += row b
    fn row_add(&mut self, a: usize, b: usize) {
        for j in 0..self.nc {
            let t = self.m[b * self.nc + j].clone();
            self.m[a * self.nc + j] += t;
        }
        if let Some(l) = self.left.as_mut() {
            for k in 0..self.nr {
                let t = l[b * self.nr + k].clone();
                l[a * self.nr + k] += t;
            }
        }
    }

    fn neg_row(&mut self, a: usize) {
        for j in 0..self.nc {
            let v = std::mem::take(&mut self.m[a * self.nc + j]);
            self.m[a * self.nc + j] = -v;
        }
        if let Some(l) = self.left.as_mut() {
            for k in 0..self.nr {
                let v = std::mem::take(&mut l[a * self.nr + k]);
                l[a * self.nr + k] = -v;
            }
        }
    }

    fn min_pivot(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.nr {
            for j in t..self.nc {
                if !self.at(i, j).is_zero()
                    && best.map_or(true, |(bi, bj)| {
                        self.at(i, j).magnitude() < self.at(bi, bj).magnitude()
                    })
                {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) {
        let steps = self.nr.min(self.nc);
        for t in 0..steps {
            let Some((pi, pj)) = self.min_pivot(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear row and column t; a nonzero remainder becomes the
                // new, strictly smaller pivot via a swap.
                let mut changed = true;
                while changed {
                    changed = false;
                    for i in t + 1..self.nr {
                        if self.at(i, t).is_zero() {
                            continue;
                        }
                        let q = self.at(i, t) / self.at(t, t);
                        if !q.is_zero() {
                            self.row_sub(i, t, &q);
                        }
                        if !self.at(i, t).is_zero() {
                            self.swap_rows(t, i);
                            changed = true;
                        }
                    }
                    for j in t + 1..self.nc {
                        if self.at(t, j).is_zero() {
                            continue;
                        }
                        let q = self.at(t, j) / self.at(t, t);
                        if !q.is_zero() {
                            self.col_sub(j, t, &q);
                        }
                        if !self.at(t, j).is_zero() {
                            self.swap_cols(t, j);
                            changed = true;
                        }
                    }
                }
                // Enforce the divisibility chain: fold a non-multiple into
                // row t and keep reducing.
                let p = self.at(t, t).clone();
                let offender = (t + 1..self.nr).find(|&i| {
                    (t + 1..self.nc).any(|j| !(self.at(i, j) % &p).is_zero())
                });
                match offender {
                    Some(i) => self.row_add(t, i),
                    None => break,
                }
            }
            if self.at(t, t).is_negative() {
                self.neg_row(t);
            }
        }
    }

    fn diagonal(&self) -> Vec<BigInt> {
        (0..self.nr.min(self.nc))
            .map(|t| self.at(t, t).clone())
            .collect()
    }
}

/// Diagonal-only Smith normal form of a dense grid (row-major, nr*nc).
/// Returns the nonzero invariant factors, positive, in divisibility order.
pub fn snf_diagonal(nr: usize, nc: usize, grid: Vec<BigInt>) -> Vec<BigInt> {
    if nr == 0 || nc == 0 {
        return Vec::new();
    }
    let mut s = DenseSnf::new(nr, nc, grid, false);
    s.run();
    s.diagonal()
        .into_iter()
        .take_while(|d| !d.is_zero())
        .collect()
}

/// Smith normal form with unimodular transforms: left * m * right is the
/// returned diagonal. Dense computation, guarded by a cell budget.
pub fn smith_normal_form(m: &SparseMatrix) -> Result<SmithNormalForm, LinAlgError> {
    let (nr, nc) = (m.rows(), m.cols());
    if nr * nc > TRANSFORM_DENSE_CELLS {
        return Err(LinAlgError::TransformTooLarge { rows: nr, cols: nc });
    }
    let mut grid = vec![BigInt::zero(); nr * nc];
    for j in 0..nc {
        for (r, v) in m.column(j) {
            grid[*r as usize * nc + j] = v.clone();
        }
    }
    let mut s = DenseSnf::new(nr, nc, grid, true);
    s.run();
    let diagonal = s.diagonal();
    let left = SparseMatrix::from_dense_grid(nr, nr, &s.left.unwrap());
    let right = SparseMatrix::from_dense_grid(nc, nc, &s.right.unwrap());
    Ok(SmithNormalForm {
        diagonal,
        left,
        right,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::ToPrimitive;

    fn from_rows(rows: &[Vec<i64>]) -> SparseMatrix {
        let nr = rows.len();
        let nc = rows.first().map_or(0, Vec::len);
        let mut trips = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                if v != 0 {
                    trips.push((i, j, v));
                }
            }
        }
        SparseMatrix::from_triplets(nr, nc, trips)
    }

    fn bareiss_det(grid: &SparseMatrix) -> BigInt {
        let n = grid.rows();
        assert_eq!(n, grid.cols());
        let mut m = vec![BigInt::zero(); n * n];
        for j in 0..n {
            for (r, v) in grid.column(j) {
                m[*r as usize * n + j] = v.clone();
            }
        }
        let mut sign = 1i64;
        let mut prev = BigInt::one();
        for t in 0..n {
            if m[t * n + t].is_zero() {
                let Some(sw) = (t + 1..n).find(|&i| !m[i * n + t].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    m.swap(t * n + j, sw * n + j);
                }
                sign = -sign;
            }
            for i in t + 1..n {
                for j in t + 1..n {
                    let v = (&m[t * n + t] * &m[i * n + j] - &m[i * n + t] * &m[t * n + j])
                        / &prev;
                    m[i * n + j] = v;
                }
                m[i * n + t] = BigInt::zero();
            }
            prev = m[t * n + t].clone();
        }
        m[(n - 1) * n + (n - 1)].clone() * BigInt::from(sign)
    }

    #[test]
    fn frozen_small_forms() {
        let d = snf_diagonal(
            2,
            2,
            vec![2.into(), 0.into(), 0.into(), 4.into()],
        );
        assert_eq!(d, vec![BigInt::from(2), BigInt::from(4)]);

        let d = snf_diagonal(
            2,
            2,
            vec![2.into(), 0.into(), 0.into(), 3.into()],
        );
        assert_eq!(d, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn transforms_reconstruct_and_are_unimodular() {
        let mut state = 0x853C49E6748FEA9Bu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..30 {
            let nr = (next() % 6 + 1) as usize;
            let nc = (next() % 6 + 1) as usize;
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| {
                            if next() % 2 == 0 {
                                (next() % 15) as i64 - 7
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let m = from_rows(&rows);
            let s = smith_normal_form(&m).unwrap();
            // left * m * right equals the diagonal.
            let prod = s.left.mul(&m).mul(&s.right);
            for i in 0..nr {
                for j in 0..nc {
                    let got = prod.entry(i, j);
                    let want = if i == j && i < s.diagonal.len() {
                        s.diagonal[i].clone()
                    } else {
                        BigInt::zero()
                    };
                    assert_eq!(got, want, "entry ({i},{j})");
                }
            }
            // Divisibility chain and positivity.
            let nz = s.nonzero_factors();
            for w in nz.windows(2) {
                assert!((&w[1] % &w[0]).is_zero());
            }
            assert!(nz.iter().all(|d| d.is_positive()));
            // Unimodular transforms.
            assert_eq!(bareiss_det(&s.left).magnitude().to_u64(), Some(1));
            assert_eq!(bareiss_det(&s.right).magnitude().to_u64(), Some(1));
        }
    }

    #[test]
    fn sparse_stripper_agrees_with_dense() {
        use super::super::lattice::{invariant_factors, IntCol};
        let mut state = 0xDA3E39CB94B95BDBu64;
        let mut next = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state
        };
        for _ in 0..40 {
            let nr = (next() % 7 + 1) as usize;
            let nc = (next() % 7 + 1) as usize;
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|_| {
                    (0..nc)
                        .map(|_| {
                            if next() % 3 == 0 {
                                (next() % 9) as i64 - 4
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let mut grid = vec![BigInt::zero(); nr * nc];
            for i in 0..nr {
                for j in 0..nc {
                    grid[i * nc + j] = BigInt::from(rows[i][j]);
                }
            }
            let dense = snf_diagonal(nr, nc, grid);
            let cols: Vec<IntCol> = (0..nc)
                .map(|j| {
                    IntCol::from_entries(
                        (0..nr)
                            .filter_map(|i| {
                                (rows[i][j] != 0).then_some((i as u32, rows[i][j]))
                            })
                            .collect(),
                    )
                })
                .collect();
            let sparse = invariant_factors(nr, cols).unwrap();
            assert_eq!(sparse, dense);
        }
    }

    #[test]
    fn size_guard_refuses_huge_transforms() {
        let m = SparseMatrix::zero(3000, 3000);
        assert!(matches!(
            smith_normal_form(&m),
            Err(LinAlgError::TransformTooLarge { .. })
        ));
    }
}
