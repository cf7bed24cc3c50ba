//! Diagram families and basis enumeration.

use super::annular::{build_annular, decompose_annular, link_states};
use super::{SetPartition, MAX_STRANDS};

/// The four diagram families carried by the toolkit. Each one indexes a basis
/// of set partitions closed under composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramFamily {
    Partition,
    Brauer,
    TemperleyLieb,
    JonesAnnular,
}

impl DiagramFamily {
    pub const ALL: [DiagramFamily; 4] = [
        DiagramFamily::Partition,
        DiagramFamily::Brauer,
        DiagramFamily::TemperleyLieb,
        DiagramFamily::JonesAnnular,
    ];

    /// Stable one-byte tag used in binary cache headers.
    pub fn tag(self) -> u8 {
        match self {
            DiagramFamily::Partition => 0,
            DiagramFamily::Brauer => 1,
            DiagramFamily::TemperleyLieb => 2,
            DiagramFamily::JonesAnnular => 3,
        }
    }

    pub fn from_tag(tag: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.tag() == tag)
    }
}

impl std::fmt::Display for DiagramFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            DiagramFamily::Partition => "partition",
            DiagramFamily::Brauer => "brauer",
            DiagramFamily::TemperleyLieb => "tl",
            DiagramFamily::JonesAnnular => "jones",
        };
        f.write_str(name)
    }
}

impl std::str::FromStr for DiagramFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "partition" | "p" => Ok(DiagramFamily::Partition),
            "brauer" | "br" => Ok(DiagramFamily::Brauer),
            "tl" | "temperley-lieb" | "temperleylieb" => Ok(DiagramFamily::TemperleyLieb),
            "jones" | "annular" | "jones-annular" | "jonesannular" => {
                Ok(DiagramFamily::JonesAnnular)
            }
            other => Err(format!(
                "unknown family {other:?}, expected partition, brauer, tl, or jones"
            )),
        }
    }
}

/// Whether a perfect matching is planar when drawn in the rectangle, i.e.
/// non-crossing for the boundary order 1..n, n'..1'.
pub fn is_planar_rectangular(rho: &SetPartition) -> bool {
    if !rho.is_perfect_matching() {
        return false;
    }
    let n = rho.n() as u8;
    // Boundary position of a code on the rectangle walk.
    let pos = |c: u8| -> u8 {
        if c < n {
            c
        } else {
            2 * n - 1 - (c - n)
        }
    };
    let arcs: Vec<(u8, u8)> = rho
        .blocks()
        .iter()
        .map(|b| {
            let (x, y) = (pos(b[0]), pos(b[1]));
            (x.min(y), x.max(y))
        })
        .collect();
    for (i, &(a, b)) in arcs.iter().enumerate() {
        for &(c, d) in &arcs[i + 1..] {
            let inside = |x: u8| a < x && x < b;
            if inside(c) != inside(d) {
                return false;
            }
        }
    }
    true
}

/// Whether the diagram belongs to the family's basis.
pub fn family_contains(family: DiagramFamily, rho: &SetPartition) -> bool {
    match family {
        DiagramFamily::Partition => true,
        DiagramFamily::Brauer => rho.is_perfect_matching(),
        DiagramFamily::TemperleyLieb => is_planar_rectangular(rho),
        DiagramFamily::JonesAnnular => decompose_annular(rho).is_some(),
    }
}

/// All basis diagrams of the family, sorted by canonical form.
///
/// Partition enumeration grows as Bell(2n) and Brauer as (2n-1)!!, so large
/// n will take time and memory proportional to those counts.
pub fn enumerate_basis(family: DiagramFamily, n: usize) -> Vec<SetPartition> {
    assert!(n >= 1 && n <= MAX_STRANDS, "strand count out of range");
    let mut basis = match family {
        DiagramFamily::Partition => all_set_partitions(n),
        DiagramFamily::Brauer => all_matchings(n),
        DiagramFamily::TemperleyLieb => {
            let mut v = all_matchings(n);
            v.retain(is_planar_rectangular);
            v
        }
        DiagramFamily::JonesAnnular => {
            let mut v = Vec::new();
            for t in (n % 2..=n).step_by(2) {
                let states = link_states(n, t);
                let rotations = if t == 0 { 1 } else { t };
                for p in &states {
                    for q in &states {
                        for s in 0..rotations {
                            v.push(build_annular(p, q, s).unwrap());
                        }
                    }
                }
            }
            v
        }
    };
    basis.sort_unstable();
    debug_assert!(basis.windows(2).all(|w| w[0] != w[1]));
    basis
}

/// Every set partition of the 2n labels, via restricted growth strings.
fn all_set_partitions(n: usize) -> Vec<SetPartition> {
    let total = 2 * n;
    let mut out = Vec::new();
    // rgs[i] is the block id of code i; ids appear in first-use order.
    let mut rgs = vec![0u8; total];
    let mut maxes = vec![0u8; total];
    let mut i = 1usize;
    loop {
        if i == total {
            let mut blocks: Vec<Vec<u8>> = Vec::new();
            for (c, &id) in rgs.iter().enumerate() {
                let id = id as usize;
                if id == blocks.len() {
                    blocks.push(Vec::new());
                }
                blocks[id].push(c as u8);
            }
            out.push(SetPartition::from_canonical_blocks_unchecked(n, blocks));
            // Backtrack to the rightmost position that can still grow.
            i = total - 1;
            while i > 0 && rgs[i] > maxes[i - 1] {
                rgs[i] = 0;
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            rgs[i] += 1;
            maxes[i] = maxes[i - 1].max(rgs[i]);
            i += 1;
        } else {
            maxes[i] = maxes[i - 1].max(rgs[i]);
            i += 1;
        }
    }
}

/// Every perfect matching of the 2n labels.
fn all_matchings(n: usize) -> Vec<SetPartition> {
    let total = 2 * n;
    let mut out = Vec::new();
    let mut paired = vec![false; total];
    let mut arcs: Vec<Vec<u8>> = Vec::new();
    fn recurse(
        n: usize,
        total: usize,
        paired: &mut [bool],
        arcs: &mut Vec<Vec<u8>>,
        out: &mut Vec<SetPartition>,
    ) {
        let first = match paired.iter().position(|&p| !p) {
            None => {
                out.push(SetPartition::from_canonical_blocks_unchecked(n, arcs.clone()));
                return;
            }
            Some(f) => f,
        };
        paired[first] = true;
        for partner in first + 1..total {
            if paired[partner] {
                continue;
            }
            paired[partner] = true;
            arcs.push(vec![first as u8, partner as u8]);
            recurse(n, total, paired, arcs, out);
            arcs.pop();
            paired[partner] = false;
        }
        paired[first] = false;
    }
    recurse(n, total, &mut paired, &mut arcs, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::parse_set_partition;

    #[test]
    fn partition_dimensions_are_bell_numbers() {
        assert_eq!(enumerate_basis(DiagramFamily::Partition, 1).len(), 2);
        assert_eq!(enumerate_basis(DiagramFamily::Partition, 2).len(), 15);
        assert_eq!(enumerate_basis(DiagramFamily::Partition, 3).len(), 203);
        assert_eq!(enumerate_basis(DiagramFamily::Partition, 4).len(), 4140);
    }

    #[test]
    fn brauer_dimensions_are_double_factorials() {
        assert_eq!(enumerate_basis(DiagramFamily::Brauer, 2).len(), 3);
        assert_eq!(enumerate_basis(DiagramFamily::Brauer, 3).len(), 15);
        assert_eq!(enumerate_basis(DiagramFamily::Brauer, 4).len(), 105);
    }

    #[test]
    fn temperley_lieb_dimensions_are_catalan_numbers() {
        assert_eq!(enumerate_basis(DiagramFamily::TemperleyLieb, 2).len(), 2);
        assert_eq!(enumerate_basis(DiagramFamily::TemperleyLieb, 3).len(), 5);
        assert_eq!(enumerate_basis(DiagramFamily::TemperleyLieb, 4).len(), 14);
    }

    #[test]
    fn jones_annular_dimensions() {
        assert_eq!(enumerate_basis(DiagramFamily::JonesAnnular, 2).len(), 3);
        assert_eq!(enumerate_basis(DiagramFamily::JonesAnnular, 3).len(), 12);
        assert_eq!(enumerate_basis(DiagramFamily::JonesAnnular, 4).len(), 40);
        assert_eq!(enumerate_basis(DiagramFamily::JonesAnnular, 5).len(), 180);
        assert_eq!(enumerate_basis(DiagramFamily::JonesAnnular, 6).len(), 625);
    }

    #[test]
    fn jones_n2_is_identity_rotation_and_cap() {
        let basis = enumerate_basis(DiagramFamily::JonesAnnular, 2);
        let expected = [
            parse_set_partition("{1,2}{1',2'}").unwrap(),
            parse_set_partition("{1,1'}{2,2'}").unwrap(),
            parse_set_partition("{1,2'}{2,1'}").unwrap(),
        ];
        assert_eq!(basis.len(), 3);
        for d in expected {
            assert!(basis.contains(&d));
        }
    }

    #[test]
    fn bases_are_sorted_and_nested() {
        for n in 1..=3 {
            let partitions = enumerate_basis(DiagramFamily::Partition, n);
            assert!(partitions.windows(2).all(|w| w[0] < w[1]));
            for family in [
                DiagramFamily::Brauer,
                DiagramFamily::TemperleyLieb,
                DiagramFamily::JonesAnnular,
            ] {
                let sub = enumerate_basis(family, n);
                assert!(sub.windows(2).all(|w| w[0] < w[1]));
                for d in &sub {
                    assert!(partitions.contains(d));
                    assert!(family_contains(family, d));
                }
            }
        }
    }

    #[test]
    fn annular_membership_matches_enumeration_within_brauer() {
        for n in 1..=4 {
            let annular = enumerate_basis(DiagramFamily::JonesAnnular, n);
            for d in enumerate_basis(DiagramFamily::Brauer, n) {
                assert_eq!(
                    annular.contains(&d),
                    family_contains(DiagramFamily::JonesAnnular, &d),
                    "membership mismatch at n = {n} for {d}"
                );
            }
        }
    }

    #[test]
    fn two_permutation_diagrams_at_n2() {
        let full: Vec<SetPartition> = enumerate_basis(DiagramFamily::Partition, 2)
            .into_iter()
            .filter(|d| d.propagating_number() == 2)
            .collect();
        let perms: Vec<_> = full.iter().filter(|d| d.as_permutation().is_some()).collect();
        assert_eq!(perms.len(), 2);
    }

    #[test]
    fn planarity_test_matches_known_diagrams() {
        assert!(is_planar_rectangular(
            &parse_set_partition("{1,2}{3,3'}{1',2'}").unwrap()
        ));
        assert!(!is_planar_rectangular(
            &parse_set_partition("{1,2'}{2,1'}{3,3'}").unwrap()
        ));
        // Rotation by 1 wraps around the rectangle and crosses.
        assert!(!is_planar_rectangular(
            &parse_set_partition("{2,1'}{3,2'}{1,3'}").unwrap()
        ));
        assert!(!is_planar_rectangular(
            &parse_set_partition("{1,2,1',2'}").unwrap()
        ));
    }

    #[test]
    fn family_parsing_accepts_cli_names() {
        for (name, family) in [
            ("partition", DiagramFamily::Partition),
            ("brauer", DiagramFamily::Brauer),
            ("tl", DiagramFamily::TemperleyLieb),
            ("TL", DiagramFamily::TemperleyLieb),
            ("jones", DiagramFamily::JonesAnnular),
            ("annular", DiagramFamily::JonesAnnular),
        ] {
            assert_eq!(name.parse::<DiagramFamily>().unwrap(), family);
        }
        assert!("octonion".parse::<DiagramFamily>().is_err());
        for family in DiagramFamily::ALL {
            assert_eq!(DiagramFamily::from_tag(family.tag()), Some(family));
            assert_eq!(family.to_string().parse::<DiagramFamily>().unwrap(), family);
        }
    }
}
