//! Streaming integer column echelon and sparse invariant-factor extraction.
//!
//! Columns live in a `Vec<Option<..>>` indexed by pivot row, where the pivot
//! of a column is its largest row index. Adding a column reduces it against
//! resident columns; a divisibility fast path handles the dominant case of
//! unit pivots, and the general case performs a unimodular two-column gcd
//! update that may shrink a resident pivot (the spanned lattice only grows).
//!
//! Column values start as i64 and are promoted per column to BigInt on
//! overflow, so the engine is exact at any scale while staying compact on the
//! typical all-small workload.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::LinAlgError;

#[derive(Clone, Debug)]
pub enum Vals {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// Sparse integer column: row indices sorted ascending, values nonzero.
#[derive(Clone, Debug)]
pub struct IntCol {
    pub rows: Vec<u32>,
    pub vals: Vals,
}

/// Scalar coefficient for column combinations.
#[derive(Clone, Debug)]
pub enum Co {
    S(i64),
    B(BigInt),
}

impl Co {
    fn to_i64(&self) -> Option<i64> {
        match self {
            Co::S(v) => Some(*v),
            Co::B(v) => v.to_i64(),
        }
    }

    fn to_big(&self) -> BigInt {
        match self {
            Co::S(v) => BigInt::from(*v),
            Co::B(v) => v.clone(),
        }
    }

    fn neg(self) -> Co {
        match self {
            Co::S(v) => match v.checked_neg() {
                Some(n) => Co::S(n),
                None => Co::B(-BigInt::from(v)),
            },
            Co::B(v) => Co::B(-v),
        }
    }
}

impl IntCol {
    pub fn empty() -> Self {
        IntCol {
            rows: Vec::new(),
            vals: Vals::Small(Vec::new()),
        }
    }

    /// Builds a column from possibly unsorted, possibly duplicated entries.
    pub fn from_entries(mut entries: Vec<(u32, i64)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut rows = Vec::with_capacity(entries.len());
        let mut vals = Vec::with_capacity(entries.len());
        for (r, v) in entries {
            if rows.last() == Some(&r) {
                let i = vals.len() - 1;
                // Merged duplicates can overflow i64; route through i128.
                let s = vals[i] as i128 + v as i128;
                match i64::try_from(s) {
                    Ok(sv) => {
                        vals[i] = sv;
                        if sv == 0 {
                            rows.pop();
                            vals.pop();
                        }
                    }
                    Err(_) => {
                        let mut col = IntCol {
                            rows: rows.clone(),
                            vals: Vals::Small(vals.clone()),
                        };
                        col.promote();
                        // Redo from current position in big arithmetic.
                        let Vals::Big(bv) = &mut col.vals else { unreachable!() };
                        let last = bv.len() - 1;
                        bv[last] = BigInt::from(s);
                        return col;
                    }
                }
            } else if v != 0 {
                rows.push(r);
                vals.push(v);
            }
        }
        IntCol {
            rows,
            vals: Vals::Small(vals),
        }
    }

    pub fn from_big_entries(mut entries: Vec<(u32, BigInt)>) -> Self {
        entries.sort_by(|a, b| a.0.cmp(&b.0));
        let mut rows = Vec::new();
        let mut vals: Vec<BigInt> = Vec::new();
        for (r, v) in entries {
            if rows.last() == Some(&r) {
                let i = vals.len() - 1;
                vals[i] += v;
                if vals[i].is_zero() {
                    rows.pop();
                    vals.pop();
                }
            } else if !v.is_zero() {
                rows.push(r);
                vals.push(v);
            }
        }
        let mut col = IntCol {
            rows,
            vals: Vals::Big(vals),
        };
        col.demote();
        col
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn last_row(&self) -> Option<u32> {
        self.rows.last().copied()
    }

    pub fn pivot(&self) -> Option<Co> {
        if self.rows.is_empty() {
            return None;
        }
        Some(match &self.vals {
            Vals::Small(v) => Co::S(*v.last().unwrap()),
            Vals::Big(v) => Co::B(v.last().unwrap().clone()),
        })
    }

    pub fn value_at(&self, idx: usize) -> BigInt {
        match &self.vals {
            Vals::Small(v) => BigInt::from(v[idx]),
            Vals::Big(v) => v[idx].clone(),
        }
    }

    pub fn big_entries(&self) -> Vec<(u32, BigInt)> {
        (0..self.rows.len())
            .map(|i| (self.rows[i], self.value_at(i)))
            .collect()
    }

    pub fn negate(&mut self) {
        match &mut self.vals {
            Vals::Small(v) => {
                if v.iter().all(|x| *x != i64::MIN) {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                } else {
                    self.promote();
                    self.negate();
                }
            }
            Vals::Big(v) => {
                for x in v.iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
    }

    fn promote(&mut self) {
        if let Vals::Small(v) = &self.vals {
            self.vals = Vals::Big(v.iter().map(|&x| BigInt::from(x)).collect());
        }
    }

    fn demote(&mut self) {
        if let Vals::Big(v) = &self.vals {
            if let Some(small) = v.iter().map(|x| x.to_i64()).collect::<Option<Vec<i64>>>() {
                self.vals = Vals::Small(small);
            }
        }
    }
}

fn merge_small(
    ar: &[u32],
    av: &[i64],
    xa: i64,
    br: &[u32],
    bv: &[i64],
    xb: i64,
) -> Option<(Vec<u32>, Vec<i64>)> {
    let mut rows = Vec::with_capacity(ar.len() + br.len());
    let mut vals = Vec::with_capacity(ar.len() + br.len());
    let (mut i, mut j) = (0, 0);
    while i < ar.len() || j < br.len() {
        let (r, v) = if j >= br.len() || (i < ar.len() && ar[i] < br[j]) {
            let v = xa.checked_mul(av[i])?;
            i += 1;
            (ar[i - 1], v)
        } else if i >= ar.len() || br[j] < ar[i] {
            let v = xb.checked_mul(bv[j])?;
            j += 1;
            (br[j - 1], v)
        } else {
            let v = xa
                .checked_mul(av[i])?
                .checked_add(xb.checked_mul(bv[j])?)?;
            i += 1;
            j += 1;
            (ar[i - 1], v)
        };
        if v != 0 {
            rows.push(r);
            vals.push(v);
        }
    }
    Some((rows, vals))
}

fn merge_big(a: &IntCol, xa: &BigInt, b: &IntCol, xb: &BigInt) -> IntCol {
    let mut rows = Vec::with_capacity(a.len() + b.len());
    let mut vals = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let (r, v) = if j >= b.len() || (i < a.len() && a.rows[i] < b.rows[j]) {
            let v = xa * a.value_at(i);
            i += 1;
            (a.rows[i - 1], v)
        } else if i >= a.len() || b.rows[j] < a.rows[i] {
            let v = xb * b.value_at(j);
            j += 1;
            (b.rows[j - 1], v)
        } else {
            let v = xa * a.value_at(i) + xb * b.value_at(j);
            i += 1;
            j += 1;
            (a.rows[i - 1], v)
        };
        if !v.is_zero() {
            rows.push(r);
            vals.push(v);
        }
    }
    let mut col = IntCol {
        rows,
        vals: Vals::Big(vals),
    };
    col.demote();
    col
}

/// xa * a + xb * b.
pub fn lin2(a: &IntCol, xa: &Co, b: &IntCol, xb: &Co) -> IntCol {
    if let (Vals::Small(av), Vals::Small(bv), Some(sa), Some(sb)) =
        (&a.vals, &b.vals, xa.to_i64(), xb.to_i64())
    {
        if let Some((rows, vals)) = merge_small(&a.rows, av, sa, &b.rows, bv, sb) {
            return IntCol {
                rows,
                vals: Vals::Small(vals),
            };
        }
    }
    merge_big(a, &xa.to_big(), b, &xb.to_big())
}

/// Extended gcd: (g, x, y) with g = gcd(a, b) > 0 and x*a + y*b = g.
fn xgcd_i64(a: i64, b: i64) -> Option<(i64, i64, i64)> {
    let (mut r0, mut r1) = (a as i128, b as i128);
    let (mut x0, mut x1) = (1i128, 0i128);
    let (mut y0, mut y1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (x0, x1) = (x1, x0 - q * x1);
        (y0, y1) = (y1, y0 - q * y1);
    }
    if r0 < 0 {
        (r0, x0, y0) = (-r0, -x0, -y0);
    }
    Some((
        i64::try_from(r0).ok()?,
        i64::try_from(x0).ok()?,
        i64::try_from(y0).ok()?,
    ))
}

enum Step {
    /// Resident pivot divides incoming pivot; quotient q, reduce c -= q*e.
    Div(Co),
    /// General gcd update: x*e + y*c has pivot g; (a/g)*c - (b/g)*e clears it.
    Gcd { x: Co, y: Co, ag: Co, bg: Co },
}

fn pivot_step(a: &Co, b: &Co) -> Step {
    if let (Some(sa), Some(sb)) = (a.to_i64(), b.to_i64()) {
        if let Some(step) = pivot_step_small(sa, sb) {
            return step;
        }
    }
    let (ab, bb) = (a.to_big(), b.to_big());
    if (&bb % &ab).is_zero() {
        return Step::Div(Co::B(&bb / &ab));
    }
    let e = ab.extended_gcd(&bb);
    debug_assert!(e.gcd.is_positive());
    Step::Gcd {
        x: Co::B(e.x),
        y: Co::B(e.y),
        ag: Co::B(&ab / &e.gcd),
        bg: Co::B(&bb / &e.gcd),
    }
}

fn pivot_step_small(a: i64, b: i64) -> Option<Step> {
    if b % a == 0 {
        return Some(Step::Div(Co::S(b.checked_div(a)?)));
    }
    let (g, x, y) = xgcd_i64(a, b)?;
    Some(Step::Gcd {
        x: Co::S(x),
        y: Co::S(y),
        ag: Co::S(a / g),
        bg: Co::S(b / g),
    })
}

struct Slot {
    col: IntCol,
    hist: Option<IntCol>,
    dirty: bool,
}

/// Result of streaming one column into the echelon.
pub struct IntAddOutcome {
    /// True when the spanned lattice strictly grew (insertion or pivot
    /// refinement along the way).
    pub grew: bool,
    pub inserted: Option<u32>,
    /// History of a vanished column when tracking is on: the combination of
    /// original columns that reduced to zero, i.e. a kernel vector.
    pub kernel_hist: Option<IntCol>,
}

pub struct IntEchelon {
    nrows: usize,
    slots: Vec<Option<Box<Slot>>>,
    rank: usize,
    track: bool,
    dirty_stack: Vec<u32>,
}

impl IntEchelon {
    pub fn new(nrows: usize, track: bool) -> Self {
        IntEchelon {
            nrows,
            slots: (0..nrows).map(|_| None).collect(),
            rank: 0,
            track,
            dirty_stack: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    fn mark_dirty(&mut self, r: u32) {
        if let Some(slot) = self.slots[r as usize].as_mut() {
            if !slot.dirty {
                slot.dirty = true;
                self.dirty_stack.push(r);
            }
        }
    }

    pub fn drain_dirty(&mut self) -> Vec<u32> {
        let stack = std::mem::take(&mut self.dirty_stack);
        for &r in &stack {
            if let Some(slot) = self.slots[r as usize].as_mut() {
                slot.dirty = false;
            }
        }
        stack
    }

    pub fn add(&mut self, col: IntCol, hist: Option<IntCol>) -> IntAddOutcome {
        debug_assert!(col.rows.last().map_or(true, |&r| (r as usize) < self.nrows));
        let mut col = col;
        let mut hist = if self.track { hist } else { None };
        let mut grew = false;
        loop {
            let Some(r) = col.last_row() else {
                return IntAddOutcome {
                    grew,
                    inserted: None,
                    kernel_hist: hist,
                };
            };
            let Some(slot) = self.slots[r as usize].as_mut() else {
                if matches!(col.pivot(), Some(p) if matches!(p, Co::S(v) if v < 0)
                    || matches!(&p, Co::B(v) if v.is_negative()))
                {
                    col.negate();
                    if let Some(h) = hist.as_mut() {
                        h.negate();
                    }
                }
                self.slots[r as usize] = Some(Box::new(Slot {
                    col,
                    hist,
                    dirty: false,
                }));
                self.rank += 1;
                self.mark_dirty(r);
                return IntAddOutcome {
                    grew: true,
                    inserted: Some(r),
                    kernel_hist: None,
                };
            };
            let a = slot.col.pivot().expect("resident nonempty");
            let b = col.pivot().expect("nonempty");
            match pivot_step(&a, &b) {
                Step::Div(q) => {
                    let nq = q.neg();
                    col = lin2(&col, &Co::S(1), &slot.col, &nq);
                    debug_assert!(col.last_row().map_or(true, |lr| lr < r));
                    if let Some(h) = hist.as_mut() {
                        let sh = slot.hist.as_ref().expect("tracked echelon");
                        *h = lin2(h, &Co::S(1), sh, &nq);
                    }
                }
                Step::Gcd { x, y, ag, bg } => {
                    let nbg = bg.neg();
                    let new_res = lin2(&slot.col, &x, &col, &y);
                    let new_col = lin2(&col, &ag, &slot.col, &nbg);
                    debug_assert_eq!(new_res.last_row(), Some(r));
                    debug_assert!(new_col.last_row().map_or(true, |lr| lr < r));
                    if self.track {
                        let sh = slot.hist.as_ref().expect("tracked echelon");
                        let h = hist.as_ref().expect("tracked add");
                        let new_res_h = lin2(sh, &x, h, &y);
                        let new_col_h = lin2(h, &ag, sh, &nbg);
                        slot.hist = Some(new_res_h);
                        hist = Some(new_col_h);
                    }
                    slot.col = new_res;
                    col = new_col;
                    grew = true;
                    self.mark_dirty(r);
                }
            }
        }
    }

    /// Membership reduction: returns the remainder of `col` against the
    /// stored lattice using division-only steps. Empty remainder means the
    /// column lies in the lattice.
    pub fn reduce_member(&self, col: IntCol) -> IntCol {
        let mut col = col;
        loop {
            let Some(r) = col.last_row() else {
                return col;
            };
            let Some(slot) = self.slots[r as usize].as_ref() else {
                return col;
            };
            let a = slot.col.pivot().expect("resident nonempty");
            let b = col.pivot().expect("nonempty");
            match pivot_step(&a, &b) {
                Step::Div(q) => {
                    col = lin2(&col, &Co::S(1), &slot.col, &q.neg());
                }
                Step::Gcd { .. } => return col,
            }
        }
    }

    pub fn contains(&self, col: IntCol) -> bool {
        self.reduce_member(col).is_empty()
    }

    /// Expresses `col` as an integer combination of the stored columns'
    /// histories. With pivots on distinct rows, top-down division decides
    /// lattice membership exactly, so None means "not in the lattice".
    /// Requires tracking.
    pub fn solve_in_span(&self, col: IntCol) -> Option<IntCol> {
        debug_assert!(self.track);
        let mut col = col;
        let mut acc = IntCol::empty();
        loop {
            let Some(r) = col.last_row() else {
                return Some(acc);
            };
            let slot = self.slots[r as usize].as_ref()?;
            let a = slot.col.pivot().expect("resident nonempty");
            let b = col.pivot().expect("nonempty");
            match pivot_step(&a, &b) {
                Step::Div(q) => {
                    let sh = slot.hist.as_ref().expect("tracked echelon");
                    acc = lin2(&acc, &Co::S(1), sh, &q);
                    col = lin2(&col, &Co::S(1), &slot.col, &q.neg());
                }
                Step::Gcd { .. } => return None,
            }
        }
    }

    pub fn live_pivot_rows(&self) -> Vec<u32> {
        (0..self.nrows as u32)
            .filter(|&r| self.slots[r as usize].is_some())
            .collect()
    }

    pub fn col_clone(&self, r: u32) -> Option<IntCol> {
        self.slots[r as usize].as_ref().map(|s| s.col.clone())
    }

    pub fn hist_clone(&self, r: u32) -> Option<IntCol> {
        self.slots[r as usize].as_ref().and_then(|s| s.hist.clone())
    }

    /// True when the lattice is all of Z^nrows: with pivots on distinct
    /// rows the lattice index equals the product of pivot magnitudes.
    pub fn is_full(&self) -> bool {
        if self.rank != self.nrows {
            return false;
        }
        self.slots.iter().all(|s| match s {
            Some(slot) => match slot.col.pivot() {
                Some(Co::S(v)) => v == 1 || v == -1,
                Some(Co::B(v)) => v.magnitude().is_one(),
                None => false,
            },
            None => false,
        })
    }

    pub fn into_live_cols(self) -> Vec<IntCol> {
        self.slots
            .into_iter()
            .flatten()
            .map(|slot| slot.col)
            .collect()
    }

    /// Saturates the lattice under a family of operators: repeatedly applies
    /// each operator to every column whose slot changed and streams the
    /// products back in, until a full sweep changes nothing. On return the
    /// lattice L satisfies apply(j, v) in L for every v in L and every j.
    pub fn close_under<F: FnMut(usize, &IntCol) -> IntCol>(&mut self, n_ops: usize, mut apply: F) {
        loop {
            let dirty = self.drain_dirty();
            if dirty.is_empty() {
                return;
            }
            for r in dirty {
                let Some(snapshot) = self.col_clone(r) else {
                    continue;
                };
                for j in 0..n_ops {
                    let prod = apply(j, &snapshot);
                    self.add(prod, None);
                }
            }
        }
    }
}

/// Two echelons span the same lattice iff each one's columns reduce to zero
/// against the other.
pub fn lattice_equal(a: &IntEchelon, b: &IntEchelon) -> bool {
    if a.rank() != b.rank() {
        return false;
    }
    a.live_pivot_rows()
        .iter()
        .all(|&r| b.contains(a.col_clone(r).unwrap()))
        && b.live_pivot_rows()
            .iter()
            .all(|&r| a.contains(b.col_clone(r).unwrap()))
}

/// Integer rank of a set of sparse columns.
pub fn integer_rank(nrows: usize, cols: impl IntoIterator<Item = IntCol>) -> usize {
    let mut ech = IntEchelon::new(nrows, false);
    for c in cols {
        ech.add(c, None);
    }
    ech.rank()
}

/// Dense cell limit for handing a stripped core to the dense routine.
const CORE_DENSE_CELLS: usize = 9_000_000;

/// Invariant factors (full divisor chain, units included) of the integer
/// matrix whose columns are given. Dependent and zero columns are fine; the
/// number of factors returned equals the rank.
///
/// Strategy: peel off unit pivots that need no arithmetic (unit entries that
/// are alone in their column, or alone in their row) with a worklist, then
/// eliminate remaining unit entries with real fill, and hand the small
/// residual core to a dense routine.
pub fn invariant_factors(nrows: usize, cols: Vec<IntCol>) -> Result<Vec<BigInt>, LinAlgError> {
    let mut st = Strip::new(nrows, cols);
    st.peel();
    st.eliminate_units()?;
    st.finish()
}

struct Strip {
    cols: Vec<Option<IntCol>>,
    live_nnz: Vec<u32>,
    row_count: Vec<u32>,
    row_occ: Vec<Vec<u32>>,
    dead_row: Vec<bool>,
    units: usize,
    col_queue: Vec<u32>,
    row_queue: Vec<u32>,
}

impl Strip {
    fn new(nrows: usize, cols: Vec<IntCol>) -> Self {
        let mut row_count = vec![0u32; nrows];
        let mut row_occ: Vec<Vec<u32>> = vec![Vec::new(); nrows];
        let mut live_nnz = Vec::with_capacity(cols.len());
        for (ci, col) in cols.iter().enumerate() {
            for &r in &col.rows {
                row_count[r as usize] += 1;
                row_occ[r as usize].push(ci as u32);
            }
            live_nnz.push(col.len() as u32);
        }
        let col_queue: Vec<u32> = (0..cols.len() as u32).rev().collect();
        let row_queue: Vec<u32> = (0..nrows as u32)
            .rev()
            .filter(|&r| row_count[r as usize] == 1)
            .collect();
        Strip {
            cols: cols.into_iter().map(Some).collect(),
            live_nnz,
            row_count,
            row_occ,
            dead_row: vec![false; nrows],
            units: 0,
            col_queue,
            row_queue,
        }
    }

    fn is_unit(col: &IntCol, idx: usize) -> bool {
        match &col.vals {
            Vals::Small(v) => v[idx] == 1 || v[idx] == -1,
            Vals::Big(v) => v[idx].magnitude().is_one(),
        }
    }

    /// Index of the single live entry, if the column has exactly one.
    fn single_live(&self, col: &IntCol) -> Result<Option<usize>, u32> {
        let mut found = None;
        let mut n = 0;
        for (i, &r) in col.rows.iter().enumerate() {
            if !self.dead_row[r as usize] {
                n += 1;
                if n > 1 {
                    return Err(n);
                }
                found = Some(i);
            }
        }
        Ok(found)
    }

    fn kill_col_entries(&mut self, ci: u32) {
        // Removes a live column's contribution to row counts; rows hitting
        // count 1 become row-singleton candidates.
        let col = self.cols[ci as usize].take().expect("live col");
        for &r in &col.rows {
            if !self.dead_row[r as usize] {
                self.row_count[r as usize] -= 1;
                if self.row_count[r as usize] == 1 {
                    self.row_queue.push(r);
                }
            }
        }
    }

    fn peel(&mut self) {
        while !self.col_queue.is_empty() || !self.row_queue.is_empty() {
            if let Some(ci) = self.col_queue.pop() {
                let Some(col) = self.cols[ci as usize].as_ref() else {
                    continue;
                };
                match self.single_live(col) {
                    Ok(None) => {
                        // Column vanished on live rows: dependent input.
                        self.cols[ci as usize] = None;
                    }
                    Ok(Some(idx)) if Self::is_unit(col, idx) => {
                        let r = col.rows[idx];
                        // Unit column singleton: implicit column ops clear
                        // row r everywhere else without fill.
                        self.units += 1;
                        self.cols[ci as usize] = None;
                        self.dead_row[r as usize] = true;
                        // Occupancy may hold stale or duplicate ids once
                        // elimination with fill has run; verify membership.
                        let mut occ = std::mem::take(&mut self.row_occ[r as usize]);
                        occ.sort_unstable();
                        occ.dedup();
                        for cj in occ {
                            if cj == ci {
                                continue;
                            }
                            let Some(c) = self.cols[cj as usize].as_ref() else {
                                continue;
                            };
                            if c.rows.binary_search(&r).is_ok() {
                                self.live_nnz[cj as usize] -= 1;
                                if self.live_nnz[cj as usize] <= 1 {
                                    self.col_queue.push(cj);
                                }
                            }
                        }
                    }
                    _ => {}
                }
                continue;
            }
            if let Some(r) = self.row_queue.pop() {
                if self.dead_row[r as usize] || self.row_count[r as usize] != 1 {
                    continue;
                }
                // Occupancy can be stale after fill; require the entry.
                let Some(ci) = self.row_occ[r as usize].iter().copied().find(|&c| {
                    self.cols[c as usize]
                        .as_ref()
                        .is_some_and(|col| col.rows.binary_search(&r).is_ok())
                }) else {
                    continue;
                };
                let col = self.cols[ci as usize].as_ref().unwrap();
                let idx = col.rows.binary_search(&r).unwrap();
                if Self::is_unit(col, idx) {
                    // Unit row singleton: implicit row ops clear the rest of
                    // this column; nothing else is touched.
                    self.units += 1;
                    self.dead_row[r as usize] = true;
                    self.kill_col_entries(ci);
                }
            }
        }
    }

    /// Eliminates remaining unit entries with actual arithmetic (fill), then
    /// re-peels, until no unit entries remain or the core fits densely.
    fn eliminate_units(&mut self) -> Result<(), LinAlgError> {
        loop {
            if self.core_cells() <= CORE_DENSE_CELLS {
                return Ok(());
            }
            // Markowitz-style: cheapest unit entry by fill bound.
            let mut best: Option<(u64, u32, usize)> = None;
            for ci in 0..self.cols.len() as u32 {
                let Some(col) = self.cols[ci as usize].as_ref() else {
                    continue;
                };
                for (idx, &r) in col.rows.iter().enumerate() {
                    if self.dead_row[r as usize] || !Self::is_unit(col, idx) {
                        continue;
                    }
                    let score = (self.live_nnz[ci as usize] as u64 - 1)
                        * (self.row_count[r as usize] as u64 - 1);
                    if best.map_or(true, |(s, _, _)| score < s) {
                        best = Some((score, ci, idx));
                    }
                }
            }
            let Some((_, ci, idx)) = best else {
                return Ok(());
            };
            self.eliminate_at(ci, idx);
            self.peel();
        }
    }

    fn eliminate_at(&mut self, ci: u32, idx: usize) {
        let pivot_col = self.cols[ci as usize].clone().expect("live col");
        let r = pivot_col.rows[idx];
        let pv = pivot_col.value_at(idx);
        debug_assert!(pv.magnitude().is_one());
        // Clear row r in all other live columns by adding multiples of the
        // pivot column; this introduces fill.
        let holders: Vec<u32> = self.row_occ[r as usize]
            .iter()
            .copied()
            .filter(|&c| c != ci && self.cols[c as usize].is_some())
            .collect();
        for cj in holders {
            let col = self.cols[cj as usize].as_ref().unwrap();
            let Ok(jdx) = col.rows.binary_search(&r) else {
                continue;
            };
            let w = col.value_at(jdx);
            let q = -(&w / &pv);
            let updated = lin2(col, &Co::S(1), &pivot_col, &Co::B(q));
            self.replace_col(cj, updated);
        }
        // Row r is now a singleton held by ci; kill both.
        self.units += 1;
        self.dead_row[r as usize] = true;
        self.kill_col_entries(ci);
        self.row_occ[r as usize].clear();
    }

    fn replace_col(&mut self, ci: u32, updated: IntCol) {
        let old = self.cols[ci as usize].take().expect("live col");
        for &r in &old.rows {
            if !self.dead_row[r as usize] {
                self.row_count[r as usize] -= 1;
            }
        }
        let mut nnz = 0;
        for &r in &updated.rows {
            if !self.dead_row[r as usize] {
                self.row_count[r as usize] += 1;
                self.row_occ[r as usize].push(ci);
                nnz += 1;
                if self.row_count[r as usize] == 1 {
                    self.row_queue.push(r);
                }
            }
        }
        // Rows that lost their last live entry become empty, which is fine.
        self.live_nnz[ci as usize] = nnz;
        if nnz <= 1 {
            self.col_queue.push(ci);
        }
        self.cols[ci as usize] = Some(updated);
    }

    fn core_cells(&self) -> usize {
        let live_cols = self.cols.iter().flatten().count();
        let live_rows: std::collections::HashSet<u32> = self
            .cols
            .iter()
            .flatten()
            .flat_map(|c| c.rows.iter().copied())
            .filter(|&r| !self.dead_row[r as usize])
            .collect();
        live_cols * live_rows.len()
    }

    fn finish(self) -> Result<Vec<BigInt>, LinAlgError> {
        let live: Vec<&IntCol> = self.cols.iter().flatten().collect();
        let mut live_rows: Vec<u32> = live
            .iter()
            .flat_map(|c| c.rows.iter().copied())
            .filter(|&r| !self.dead_row[r as usize])
            .collect();
        live_rows.sort_unstable();
        live_rows.dedup();
        let nr = live_rows.len();
        let nc = live.len();
        if nr * nc > CORE_DENSE_CELLS {
            return Err(LinAlgError::CoreTooLarge {
                rows: nr,
                cols: nc,
            });
        }
        let rindex: std::collections::HashMap<u32, usize> = live_rows
            .iter()
            .enumerate()
            .map(|(i, &r)| (r, i))
            .collect();
        let mut grid = vec![BigInt::zero(); nr * nc];
        for (cj, col) in live.iter().enumerate() {
            for (i, &r) in col.rows.iter().enumerate() {
                if let Some(&ri) = rindex.get(&r) {
                    grid[ri * nc + cj] = col.value_at(i);
                }
            }
        }
        let mut factors = vec![BigInt::one(); self.units];
        factors.extend(super::snf::snf_diagonal(nr, nc, grid));
        Ok(factors)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_cols(dense: &[Vec<i64>]) -> (usize, Vec<IntCol>) {
        let nrows = dense.len();
        let ncols = dense.first().map_or(0, Vec::len);
        let cols = (0..ncols)
            .map(|c| {
                IntCol::from_entries(
                    (0..nrows)
                        .filter_map(|r| {
                            (dense[r][c] != 0).then_some((r as u32, dense[r][c]))
                        })
                        .collect(),
                )
            })
            .collect();
        (nrows, cols)
    }

    /// Exact rank by fraction-free (Bareiss) elimination over BigInt.
    fn bareiss_rank(dense: &[Vec<i64>]) -> usize {
        let mut m: Vec<Vec<BigInt>> = dense
            .iter()
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let nrows = m.len();
        let ncols = m.first().map_or(0, Vec::len);
        let mut rank = 0;
        let mut prev = BigInt::one();
        let mut row = 0;
        for col in 0..ncols {
            let Some(pr) = (row..nrows).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, pr);
            for r in row + 1..nrows {
                for c in col + 1..ncols {
                    let v = (&m[row][col] * &m[r][c] - &m[r][col] * &m[row][c]) / &prev;
                    m[r][c] = v;
                }
                m[r][col] = BigInt::zero();
            }
            prev = m[row][col].clone();
            rank += 1;
            row += 1;
            if row == nrows {
                break;
            }
        }
        rank
    }

    fn xorshift(state: &mut u64) -> u64 {
        *state ^= *state << 13;
        *state ^= *state >> 7;
        *state ^= *state << 17;
        *state
    }

    #[test]
    fn rank_matches_fraction_free_oracle() {
        let mut state = 0x9E3779B97F4A7C15u64;
        for _ in 0..60 {
            let rows = (xorshift(&mut state) % 9 + 1) as usize;
            let colsn = (xorshift(&mut state) % 9 + 1) as usize;
            let dense: Vec<Vec<i64>> = (0..rows)
                .map(|_| {
                    (0..colsn)
                        .map(|_| {
                            if xorshift(&mut state) % 2 == 0 {
                                (xorshift(&mut state) % 19) as i64 - 9
                            } else {
                                0
                            }
                        })
                        .collect()
                })
                .collect();
            let (nr, cols) = dense_cols(&dense);
            assert_eq!(integer_rank(nr, cols), bareiss_rank(&dense));
        }
    }

    #[test]
    fn kernel_history_annihilates() {
        // col2 = 3*col0 - col1.
        let dense = vec![vec![1, 2, 1], vec![0, 5, -5], vec![2, 0, 6]];
        let (nr, cols) = dense_cols(&dense);
        let mut ech = IntEchelon::new(nr, true);
        let mut kernels = Vec::new();
        for (j, c) in cols.into_iter().enumerate() {
            let out = ech.add(c, Some(IntCol::from_entries(vec![(j as u32, 1)])));
            if let Some(k) = out.kernel_hist {
                kernels.push(k);
            }
        }
        assert_eq!(ech.rank(), 2);
        assert_eq!(kernels.len(), 1);
        for r in 0..3 {
            let mut acc = BigInt::zero();
            for (c, v) in kernels[0].big_entries() {
                acc += v * BigInt::from(dense[r][c as usize]);
            }
            assert!(acc.is_zero());
        }
    }

    #[test]
    fn membership_and_fullness() {
        let (nr, cols) = dense_cols(&[vec![2, 0], vec![0, 3]].to_vec());
        let mut ech = IntEchelon::new(nr, false);
        for c in cols {
            ech.add(c, None);
        }
        assert!(ech.contains(IntCol::from_entries(vec![(0, 4)])));
        assert!(!ech.contains(IntCol::from_entries(vec![(0, 3)])));
        assert!(!ech.is_full());
        // Adding (1, 1) refines both pivots to units.
        let out = ech.add(IntCol::from_entries(vec![(0, 1), (1, 1)]), None);
        assert!(out.grew);
        assert!(ech.is_full());
    }

    #[test]
    fn gcd_update_refines_pivot_and_reports_growth() {
        let mut ech = IntEchelon::new(1, false);
        ech.add(IntCol::from_entries(vec![(0, 6)]), None);
        let out = ech.add(IntCol::from_entries(vec![(0, 4)]), None);
        assert!(out.grew);
        assert!(out.inserted.is_none());
        assert!(ech.contains(IntCol::from_entries(vec![(0, 2)])));
        assert!(!ech.contains(IntCol::from_entries(vec![(0, 1)])));
    }

    #[test]
    fn overflow_promotes_to_bigint() {
        let big = 3_000_000_000_000_000_000i64;
        let mut ech = IntEchelon::new(2, false);
        ech.add(IntCol::from_entries(vec![(0, big), (1, 1)]), None);
        // Reduction multiplies by 4, overflowing i64 in row 0.
        let out = ech.add(IntCol::from_entries(vec![(0, 2), (1, 4)]), None);
        assert!(out.grew);
        let expect = BigInt::from(2) - BigInt::from(big) * BigInt::from(4);
        let r0 = ech.col_clone(0).unwrap();
        assert_eq!(r0.big_entries()[0].1, expect.clone().into_parts().1.into());
        // Sign was normalized positive on insert.
        assert!(ech.contains(IntCol::from_big_entries(vec![(0, expect)])));
    }

    #[test]
    fn invariant_factors_of_diagonal_and_coupled() {
        let (nr, cols) = dense_cols(&[vec![2, 0], vec![0, 4]].to_vec());
        let f = invariant_factors(nr, cols).unwrap();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(4)]);

        let (nr, cols) = dense_cols(&[vec![2, 0], vec![0, 3]].to_vec());
        let f = invariant_factors(nr, cols).unwrap();
        assert_eq!(f, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn invariant_factors_strips_identity_block() {
        // Identity 60x60 with one extra coupled torsion block.
        let n = 60;
        let mut cols: Vec<IntCol> = (0..n)
            .map(|i| IntCol::from_entries(vec![(i as u32, 1)]))
            .collect();
        cols.push(IntCol::from_entries(vec![(n as u32, 2), (n as u32 + 1, 1)]));
        cols.push(IntCol::from_entries(vec![(n as u32, 0), (n as u32 + 1, 5)]));
        let f = invariant_factors(n + 2, cols).unwrap();
        let nonunit: Vec<&BigInt> = f.iter().filter(|d| !d.is_one()).collect();
        // [[2,0],[1,5]] has determinant 10 and a unit entry: factors 1, 10.
        assert_eq!(nonunit, vec![&BigInt::from(10)]);
        assert_eq!(f.len(), n + 2);
    }

    #[test]
    fn invariant_factors_handle_dependent_columns() {
        let dense = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 0]];
        let (nr, cols) = dense_cols(&dense);
        let f = invariant_factors(nr, cols).unwrap();
        assert_eq!(f, vec![BigInt::from(1)]);
    }

    #[test]
    fn closure_reaches_krylov_lattice() {
        // Operator M = [[0,1],[2,0]] acting on Z^2; start from e0.
        // Lattice closure of {e0} under M contains M*e0 = (0,2), M^2*e0 = (2,0), ...
        let mul = |_: usize, v: &IntCol| -> IntCol {
            let mut entries = Vec::new();
            for (r, val) in v.big_entries() {
                match r {
                    0 => entries.push((1u32, val * 2)),
                    1 => entries.push((0u32, val)),
                    _ => unreachable!(),
                }
            }
            IntCol::from_big_entries(entries)
        };
        let mut ech = IntEchelon::new(2, false);
        ech.add(IntCol::from_entries(vec![(0, 1)]), None);
        ech.close_under(1, mul);
        assert!(ech.contains(IntCol::from_entries(vec![(1, 2)])));
        assert!(!ech.contains(IntCol::from_entries(vec![(1, 1)])));
        assert_eq!(ech.rank(), 2);
    }

    #[test]
    fn lattice_equality_detects_index() {
        let (nr, c1) = dense_cols(&[vec![1, 0], vec![0, 1]].to_vec());
        let (_, c2) = dense_cols(&[vec![1, 0], vec![0, 2]].to_vec());
        let mut e1 = IntEchelon::new(nr, false);
        let mut e2 = IntEchelon::new(nr, false);
        let mut e3 = IntEchelon::new(nr, false);
        for c in c1.clone() {
            e1.add(c, None);
        }
        for c in c2 {
            e2.add(c, None);
        }
        // Same lattice as e1, different generators.
        for c in dense_cols(&[vec![1, 1], vec![1, 2]].to_vec()).1 {
            e3.add(c, None);
        }
        assert!(!lattice_equal(&e1, &e2));
        assert!(lattice_equal(&e1, &e3));
    }
}
