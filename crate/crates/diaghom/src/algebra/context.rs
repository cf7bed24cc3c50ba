//! Algebra contexts: a canonical basis with fast index lookup, structural
//! product data, and full-propagation bookkeeping for the quotient maps.

use super::table::MultiplicationTable;
use super::AlgebraError;
use crate::diagrams::{
    decompose_annular, enumerate_basis, DiagramFamily, SetPartition,
};
use std::collections::HashMap;
use std::sync::OnceLock;

/// The algebras handled by the toolkit. Diagram families multiply with loop
/// powers of delta; the two group algebras are their full-propagation
/// quotients and never produce loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraFamily {
    Partition,
    Brauer,
    TemperleyLieb,
    JonesAnnular,
    GroupAlgebraSymmetric,
    GroupAlgebraCyclic,
}

impl AlgebraFamily {
    pub fn diagram_family(self) -> Option<DiagramFamily> {
        match self {
            AlgebraFamily::Partition => Some(DiagramFamily::Partition),
            AlgebraFamily::Brauer => Some(DiagramFamily::Brauer),
            AlgebraFamily::TemperleyLieb => Some(DiagramFamily::TemperleyLieb),
            AlgebraFamily::JonesAnnular => Some(DiagramFamily::JonesAnnular),
            _ => None,
        }
    }

    pub fn is_group_algebra(self) -> bool {
        self.diagram_family().is_none()
    }
}

impl From<DiagramFamily> for AlgebraFamily {
    fn from(f: DiagramFamily) -> Self {
        match f {
            DiagramFamily::Partition => AlgebraFamily::Partition,
            DiagramFamily::Brauer => AlgebraFamily::Brauer,
            DiagramFamily::TemperleyLieb => AlgebraFamily::TemperleyLieb,
            DiagramFamily::JonesAnnular => AlgebraFamily::JonesAnnular,
        }
    }
}

impl std::fmt::Display for AlgebraFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            AlgebraFamily::Partition => "partition",
            AlgebraFamily::Brauer => "brauer",
            AlgebraFamily::TemperleyLieb => "tl",
            AlgebraFamily::JonesAnnular => "jones",
            AlgebraFamily::GroupAlgebraSymmetric => "symmetric-group",
            AlgebraFamily::GroupAlgebraCyclic => "cyclic-group",
        };
        f.write_str(name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct AlgebraId {
    pub family: AlgebraFamily,
    pub n: usize,
}

impl AlgebraId {
    pub fn new(family: AlgebraFamily, n: usize) -> Self {
        AlgebraId { family, n }
    }

    /// The group algebra this one retracts onto by killing diagrams of
    /// deficient propagating number.
    pub fn quotient_target(self) -> Option<AlgebraId> {
        match self.family {
            AlgebraFamily::Partition | AlgebraFamily::Brauer | AlgebraFamily::TemperleyLieb => {
                Some(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, self.n))
            }
            AlgebraFamily::JonesAnnular => {
                Some(AlgebraId::new(AlgebraFamily::GroupAlgebraCyclic, self.n))
            }
            _ => None,
        }
    }
}

impl std::fmt::Display for AlgebraId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} n={}", self.family, self.n)
    }
}

enum BasisKind {
    Diagrams {
        basis: Vec<SetPartition>,
        index: HashMap<SetPartition, u32>,
        /// For each basis diagram of full propagating number, its index in
        /// the quotient group algebra; None for deficient diagrams.
        full_prop: Vec<Option<u32>>,
    },
    /// Permutations of n letters, ranked lexicographically.
    Symmetric,
    /// Rotations 0..n.
    Cyclic,
}

/// An algebra with its canonical ordered basis. Multiplication data is
/// structural (product index plus loop exponent) so a single context serves
/// every coefficient ring and delta.
pub struct Algebra {
    id: AlgebraId,
    dim: usize,
    kind: BasisKind,
    table: OnceLock<MultiplicationTable>,
}

impl Algebra {
    pub fn new(id: AlgebraId) -> Result<Self, AlgebraError> {
        let (dim, kind) = match id.family.diagram_family() {
            Some(diagram_family) => {
                let basis = enumerate_basis(diagram_family, id.n);
                let index: HashMap<SetPartition, u32> = basis
                    .iter()
                    .enumerate()
                    .map(|(i, d)| (d.clone(), i as u32))
                    .collect();
                let full_prop = basis
                    .iter()
                    .map(|d| full_prop_image(id.family, d))
                    .collect::<Vec<_>>();
                (basis.len(), BasisKind::Diagrams { basis, index, full_prop })
            }
            None => match id.family {
                AlgebraFamily::GroupAlgebraSymmetric => {
                    let dim = checked_factorial(id.n).ok_or(AlgebraError::TooLarge(id))?;
                    (dim, BasisKind::Symmetric)
                }
                AlgebraFamily::GroupAlgebraCyclic => (id.n, BasisKind::Cyclic),
                _ => unreachable!(),
            },
        };
        Ok(Algebra { id, dim, kind, table: OnceLock::new() })
    }

    pub fn id(&self) -> AlgebraId {
        self.id
    }

    pub fn n(&self) -> usize {
        self.id.n
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Index of the multiplicative unit in the canonical basis.
    pub fn unit_index(&self) -> u32 {
        match &self.kind {
            BasisKind::Diagrams { index, .. } => index[&SetPartition::identity(self.id.n)],
            // The identity permutation and the zero rotation rank first.
            BasisKind::Symmetric | BasisKind::Cyclic => 0,
        }
    }

    /// The basis diagrams, when this is a diagram algebra.
    pub fn diagram_basis(&self) -> Option<&[SetPartition]> {
        match &self.kind {
            BasisKind::Diagrams { basis, .. } => Some(basis),
            _ => None,
        }
    }

    pub fn diagram(&self, i: u32) -> Option<&SetPartition> {
        self.diagram_basis().and_then(|b| b.get(i as usize))
    }

    pub fn index_of(&self, d: &SetPartition) -> Option<u32> {
        match &self.kind {
            BasisKind::Diagrams { index, .. } => index.get(d).copied(),
            _ => None,
        }
    }

    /// Whether basis element i survives the quotient map, and the index of
    /// its image in the quotient group algebra if so. For group algebras
    /// every element is its own image.
    pub fn full_prop_image(&self, i: u32) -> Option<u32> {
        match &self.kind {
            BasisKind::Diagrams { full_prop, .. } => full_prop[i as usize],
            BasisKind::Symmetric | BasisKind::Cyclic => Some(i),
        }
    }

    /// A human-readable name for basis element i, stable across runs.
    pub fn basis_name(&self, i: u32) -> String {
        match &self.kind {
            BasisKind::Diagrams { basis, .. } => basis[i as usize].to_string(),
            BasisKind::Symmetric => {
                let sigma = perm_unrank(self.id.n, i as u64);
                let images: Vec<String> =
                    sigma.iter().map(|&v| (v + 1).to_string()).collect();
                format!("[{}]", images.join(","))
            }
            BasisKind::Cyclic => format!("r{i}"),
        }
    }

    /// Structural product of basis elements: the index of the underlying
    /// basis product and the loop exponent of delta it carries.
    pub fn product_indices(&self, i: u32, j: u32) -> (u32, u8) {
        if let Some(table) = self.table.get() {
            return table.entry(i, j);
        }
        self.compose_raw(i, j)
    }

    fn compose_raw(&self, i: u32, j: u32) -> (u32, u8) {
        match &self.kind {
            BasisKind::Diagrams { basis, index, .. } => {
                let (product, loops) = basis[i as usize]
                    .compose(&basis[j as usize])
                    .expect("basis diagrams share n");
                debug_assert!(loops <= self.id.n as u32);
                (index[&product], loops as u8)
            }
            BasisKind::Symmetric => {
                let sigma = perm_unrank(self.id.n, i as u64);
                let tau = perm_unrank(self.id.n, j as u64);
                let composite: Vec<u8> =
                    (0..self.id.n).map(|x| sigma[tau[x] as usize]).collect();
                (perm_rank(&composite) as u32, 0)
            }
            BasisKind::Cyclic => (((i as usize + j as usize) % self.id.n) as u32, 0),
        }
    }

    /// Builds (or returns) the full multiplication table.
    pub fn table(&self, budget: &crate::budget::Budget) -> Result<&MultiplicationTable, AlgebraError> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        budget.check(
            (self.dim as u64).saturating_mul(self.dim as u64),
            "multiplication table entries",
        )?;
        let built = MultiplicationTable::build(self);
        Ok(self.table.get_or_init(|| built))
    }

    /// Installs a table loaded from cache. Ignored if one is already set.
    pub fn install_table(&self, table: MultiplicationTable) -> &MultiplicationTable {
        self.table.get_or_init(|| table)
    }

    pub fn has_table(&self) -> bool {
        self.table.get().is_some()
    }

    /// Permutation of 0-based letters for a symmetric-group basis index.
    pub fn permutation(&self, i: u32) -> Option<Vec<u8>> {
        match &self.kind {
            BasisKind::Symmetric => Some(perm_unrank(self.id.n, i as u64)),
            _ => None,
        }
    }
}

fn full_prop_image(family: AlgebraFamily, d: &SetPartition) -> Option<u32> {
    if d.propagating_number() != d.n() {
        return None;
    }
    match family {
        AlgebraFamily::JonesAnnular => {
            let ann = decompose_annular(d).expect("full propagation annular diagram");
            Some(ann.rotation as u32)
        }
        _ => {
            // Full propagation in an ambient of partition diagrams forces
            // every block to be a single through pair.
            let sigma = d.as_permutation().expect("full propagation is a permutation");
            Some(perm_rank(&sigma) as u32)
        }
    }
}

pub(crate) fn checked_factorial(n: usize) -> Option<usize> {
    let mut acc: u64 = 1;
    for k in 2..=n as u64 {
        acc = acc.checked_mul(k)?;
        if acc > u32::MAX as u64 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Lexicographic rank of a permutation of 0..n via its Lehmer code.
pub(crate) fn perm_rank(sigma: &[u8]) -> u64 {
    let n = sigma.len();
    let mut rank: u64 = 0;
    let mut factorial: u64 = (1..n as u64).product::<u64>().max(1);
    for i in 0..n {
        let smaller_later = sigma[i + 1..].iter().filter(|&&v| v < sigma[i]).count() as u64;
        rank += smaller_later * factorial;
        if n - i > 1 {
            factorial /= (n - i - 1) as u64;
        }
    }
    rank
}

/// Inverse of `perm_rank`.
pub(crate) fn perm_unrank(n: usize, mut rank: u64) -> Vec<u8> {
    let mut remaining: Vec<u8> = (0..n as u8).collect();
    let mut factorial: u64 = (1..n as u64).product::<u64>().max(1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let digit = (rank / factorial) as usize;
        rank %= factorial;
        out.push(remaining.remove(digit));
        if n - i > 1 {
            factorial /= (n - i - 1) as u64;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_rank_round_trip() {
        for n in 1..=5usize {
            let dim = checked_factorial(n).unwrap();
            for r in 0..dim as u64 {
                let sigma = perm_unrank(n, r);
                assert_eq!(perm_rank(&sigma), r);
            }
            // Lex order: rank 0 is the identity.
            assert_eq!(perm_unrank(n, 0), (0..n as u8).collect::<Vec<_>>());
        }
    }

    #[test]
    fn dimensions() {
        let p2 = Algebra::new(AlgebraId::new(AlgebraFamily::Partition, 2)).unwrap();
        assert_eq!(p2.dim(), 15);
        let j4 = Algebra::new(AlgebraId::new(AlgebraFamily::JonesAnnular, 4)).unwrap();
        assert_eq!(j4.dim(), 40);
        let s3 = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, 3)).unwrap();
        assert_eq!(s3.dim(), 6);
        let c5 = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraCyclic, 5)).unwrap();
        assert_eq!(c5.dim(), 5);
        assert!(Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, 13)).is_err());
    }

    #[test]
    fn unit_index_is_the_identity() {
        for family in [
            AlgebraFamily::Partition,
            AlgebraFamily::JonesAnnular,
            AlgebraFamily::GroupAlgebraSymmetric,
            AlgebraFamily::GroupAlgebraCyclic,
        ] {
            let a = Algebra::new(AlgebraId::new(family, 3)).unwrap();
            let u = a.unit_index();
            for i in 0..a.dim() as u32 {
                assert_eq!(a.product_indices(u, i), (i, 0));
                assert_eq!(a.product_indices(i, u), (i, 0));
            }
        }
    }

    #[test]
    fn cyclic_products_follow_the_group_law() {
        let c6 = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraCyclic, 6)).unwrap();
        for i in 0..6u32 {
            for j in 0..6u32 {
                assert_eq!(c6.product_indices(i, j), ((i + j) % 6, 0));
            }
        }
    }

    #[test]
    fn symmetric_products_compose_permutations() {
        let s4 = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, 4)).unwrap();
        for i in 0..s4.dim() as u32 {
            let sigma = s4.permutation(i).unwrap();
            for j in 0..s4.dim() as u32 {
                let tau = s4.permutation(j).unwrap();
                let (k, e) = s4.product_indices(i, j);
                assert_eq!(e, 0);
                let expected: Vec<u8> = (0..4).map(|x| sigma[tau[x] as usize]).collect();
                assert_eq!(s4.permutation(k).unwrap(), expected);
            }
        }
    }

    #[test]
    fn full_prop_images_biject_with_the_group() {
        let j5 = Algebra::new(AlgebraId::new(AlgebraFamily::JonesAnnular, 5)).unwrap();
        let mut images: Vec<u32> =
            (0..j5.dim() as u32).filter_map(|i| j5.full_prop_image(i)).collect();
        images.sort_unstable();
        assert_eq!(images, (0..5).collect::<Vec<u32>>());

        let p3 = Algebra::new(AlgebraId::new(AlgebraFamily::Partition, 3)).unwrap();
        let mut images: Vec<u32> =
            (0..p3.dim() as u32).filter_map(|i| p3.full_prop_image(i)).collect();
        images.sort_unstable();
        assert_eq!(images, (0..6).collect::<Vec<u32>>());
    }

    #[test]
    fn quotient_respects_products_on_full_diagrams() {
        // When both factors survive the quotient, the product must survive
        // with the group product as image and no loops.
        let p3 = Algebra::new(AlgebraId::new(AlgebraFamily::Partition, 3)).unwrap();
        let s3 = Algebra::new(AlgebraId::new(AlgebraFamily::GroupAlgebraSymmetric, 3)).unwrap();
        for i in 0..p3.dim() as u32 {
            let Some(gi) = p3.full_prop_image(i) else { continue };
            for j in 0..p3.dim() as u32 {
                let Some(gj) = p3.full_prop_image(j) else { continue };
                let (k, e) = p3.product_indices(i, j);
                assert_eq!(e, 0, "full propagation products acquire no loops");
                assert_eq!(p3.full_prop_image(k), Some(s3.product_indices(gi, gj).0));
            }
        }
    }
}
