//! Set partitions of the 2n boundary labels and their composition.

use super::{DiagramError, VertexLabel, MAX_STRANDS};

/// A set partition of {1..n, 1'..n'} in canonical form: each block sorted by
/// vertex code, blocks sorted by their least code. Codes 0..n are the bottom
/// (unprimed) row, n..2n the top (primed) row.
///
/// The derived `Ord` on the canonical block lists is the ordering used for
/// every enumerated basis.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SetPartition {
    n: u8,
    blocks: Vec<Vec<u8>>,
}

impl SetPartition {
    /// Builds from blocks of raw vertex codes, validating that they partition
    /// the 2n codes. Input order is arbitrary.
    pub fn from_code_blocks(n: usize, mut blocks: Vec<Vec<u8>>) -> Result<Self, DiagramError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(DiagramError::BadStrandCount(n));
        }
        let total = 2 * n;
        let mut seen = vec![false; total];
        let mut count = 0usize;
        for block in &blocks {
            if block.is_empty() {
                return Err(DiagramError::InvalidPartition("empty block".into()));
            }
            for &c in block {
                let c = c as usize;
                if c >= total {
                    return Err(DiagramError::InvalidPartition(format!(
                        "code {c} out of range for n = {n}"
                    )));
                }
                if seen[c] {
                    return Err(DiagramError::InvalidPartition(format!(
                        "label {} repeated",
                        VertexLabel::from_code(c as u8, n)
                    )));
                }
                seen[c] = true;
                count += 1;
            }
        }
        if count != total {
            return Err(DiagramError::InvalidPartition(format!(
                "{count} of {total} labels covered"
            )));
        }
        for block in &mut blocks {
            block.sort_unstable();
        }
        blocks.sort_unstable();
        Ok(SetPartition { n: n as u8, blocks })
    }

    /// Builds from labeled blocks.
    pub fn from_blocks(n: usize, blocks: &[Vec<VertexLabel>]) -> Result<Self, DiagramError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(DiagramError::BadStrandCount(n));
        }
        let mut code_blocks = Vec::with_capacity(blocks.len());
        for block in blocks {
            let mut codes = Vec::with_capacity(block.len());
            for &v in block {
                if v.index == 0 || v.index as usize > n {
                    return Err(DiagramError::InvalidPartition(format!(
                        "label {v} out of range for n = {n}"
                    )));
                }
                codes.push(v.code(n));
            }
            code_blocks.push(codes);
        }
        Self::from_code_blocks(n, code_blocks)
    }

    /// Rebuilds a partition from a vector assigning each code a class
    /// representative (as produced by union-find). Infallible by construction.
    pub(crate) fn from_class_reps(n: usize, reps: &[usize]) -> Self {
        debug_assert_eq!(reps.len(), 2 * n);
        let mut index_of_rep = vec![usize::MAX; 2 * n];
        let mut blocks: Vec<Vec<u8>> = Vec::new();
        for (c, &r) in reps.iter().enumerate() {
            if index_of_rep[r] == usize::MAX {
                index_of_rep[r] = blocks.len();
                blocks.push(Vec::new());
            }
            blocks[index_of_rep[r]].push(c as u8);
        }
        // Codes are visited in increasing order, so blocks are sorted and
        // block order by first element is already the canonical order.
        SetPartition { n: n as u8, blocks }
    }

    /// Wraps blocks that are already canonical: each block sorted, blocks
    /// sorted by least element, together covering all 2n codes. Used by the
    /// enumerators, which produce canonical output directly.
    pub(crate) fn from_canonical_blocks_unchecked(n: usize, blocks: Vec<Vec<u8>>) -> Self {
        debug_assert_eq!(
            Self::from_code_blocks(n, blocks.clone()).as_ref().map(|p| &p.blocks),
            Ok(&blocks)
        );
        SetPartition { n: n as u8, blocks }
    }

    pub fn identity(n: usize) -> Self {
        let blocks = (0..n as u8).map(|i| vec![i, i + n as u8]).collect();
        SetPartition { n: n as u8, blocks }
    }

    /// The diagram of a permutation: block {sigma(j), j'} for each j, with
    /// sigma given on 0-based codes.
    pub fn permutation_diagram(sigma: &[u8]) -> Result<Self, DiagramError> {
        let n = sigma.len();
        let blocks = sigma
            .iter()
            .enumerate()
            .map(|(j, &sj)| vec![sj, n as u8 + j as u8])
            .collect();
        Self::from_code_blocks(n, blocks)
    }

    /// If this is a permutation diagram, the 0-based map j -> unprimed
    /// partner of j'.
    pub fn as_permutation(&self) -> Option<Vec<u8>> {
        let n = self.n as usize;
        let mut sigma = vec![0u8; n];
        for block in &self.blocks {
            if block.len() != 2 {
                return None;
            }
            let (a, b) = (block[0] as usize, block[1] as usize);
            if a >= n || b < n {
                return None;
            }
            sigma[b - n] = a as u8;
        }
        Some(sigma)
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    /// Canonical blocks of vertex codes.
    pub fn blocks(&self) -> &[Vec<u8>] {
        &self.blocks
    }

    pub fn labeled_blocks(&self) -> Vec<Vec<VertexLabel>> {
        let n = self.n as usize;
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&c| VertexLabel::from_code(c, n)).collect())
            .collect()
    }

    /// Number of blocks containing both an unprimed and a primed label.
    pub fn propagating_number(&self) -> usize {
        let n = self.n;
        self.blocks
            .iter()
            .filter(|b| b[0] < n && *b.last().unwrap() >= n)
            .count()
    }

    pub fn is_perfect_matching(&self) -> bool {
        self.blocks.iter().all(|b| b.len() == 2)
    }

    /// Composition product self * other with loop count, gluing the primed
    /// row of `self` to the unprimed row of `other`. The result keeps the
    /// unprimed row of `self` as its bottom and the primed row of `other` as
    /// its top.
    pub fn compose(&self, other: &SetPartition) -> Result<(SetPartition, u32), DiagramError> {
        compose(self, other)
    }
}

/// See [`SetPartition::compose`].
pub fn compose(
    mu: &SetPartition,
    nu: &SetPartition,
) -> Result<(SetPartition, u32), DiagramError> {
    if mu.n != nu.n {
        return Err(DiagramError::StrandMismatch { left: mu.n(), right: nu.n() });
    }
    let n = mu.n as usize;
    // Union-find over three rows: 0..n bottom of mu, n..2n the glued middle
    // (mu primed = nu unprimed), 2n..3n top of nu.
    let mut uf = UnionFind::new(3 * n);
    for block in &mu.blocks {
        let first = block[0] as usize;
        for &c in &block[1..] {
            uf.union(first, c as usize);
        }
    }
    for block in &nu.blocks {
        // Shifting nu by n sends its unprimed row onto the middle and its
        // primed row onto the top.
        let first = n + block[0] as usize;
        for &c in &block[1..] {
            uf.union(first, n + c as usize);
        }
    }
    // Loops are components living entirely in the middle row.
    let mut middle_only: Vec<bool> = vec![false; 3 * n];
    for v in n..2 * n {
        middle_only[uf.find(v)] = true;
    }
    for v in (0..n).chain(2 * n..3 * n) {
        middle_only[uf.find(v)] = false;
    }
    let loops = (0..3 * n).filter(|&v| v == uf.find(v) && middle_only[v]).count() as u32;

    // Restrict to the outer rows. Representatives are remapped through the
    // smallest outer member of each class so they index within 0..2n.
    let mut outer_rep = vec![usize::MAX; 3 * n];
    let mut reps = vec![0usize; 2 * n];
    for (slot, v) in (0..n).chain(2 * n..3 * n).enumerate() {
        let r = uf.find(v);
        if outer_rep[r] == usize::MAX {
            outer_rep[r] = slot;
        }
        reps[slot] = outer_rep[r];
    }
    Ok((SetPartition::from_class_reps(n, &reps), loops))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(size: usize) -> Self {
        UnionFind { parent: (0..size).collect() }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Attach the larger representative so roots stay minimal.
            if ra < rb {
                self.parent[rb] = ra;
            } else {
                self.parent[ra] = rb;
            }
        }
    }
}
