//! Annular cover combinatorics: which arc subsets admit a common diagram,
//! and the rotation-like right-multiplier that installs one more arc.

use std::collections::BTreeSet;

use crate::diagrams::SetPartition;

use super::CoverError;

fn succ(n: usize, i: u8) -> u8 {
    (i as usize % n) as u8 + 1
}

fn pred(n: usize, i: u8) -> u8 {
    if i == 1 {
        n as u8
    } else {
        i - 1
    }
}

/// The arc labels together with their cyclic successors: the labels whose
/// primed vertices are pinned by the requested arcs.
pub fn moral_support(n: usize, arcs: &BTreeSet<u8>) -> BTreeSet<u8> {
    let mut out = arcs.clone();
    for &i in arcs {
        out.insert(succ(n, i));
    }
    out
}

/// True when no two distinct labels in the set are cyclically adjacent, so
/// the requested arcs are pairwise disjoint as vertex pairs.
pub fn is_innermost(n: usize, arcs: &BTreeSet<u8>) -> bool {
    arcs.iter().all(|&j| {
        let s = succ(n, j);
        s == j || !arcs.contains(&s)
    })
}

/// Chooses the anchor for the next arc to install: the least label `b`
/// outside the moral support whose predecessor is inside it, stepped back
/// twice. Returns None when every label is morally supported (the alternating
/// even-strand configuration) or none is (the empty set).
pub fn pick_arc_anchor(n: usize, arcs: &BTreeSet<u8>) -> Option<u8> {
    let support = moral_support(n, arcs);
    (1..=n as u8)
        .find(|&b| !support.contains(&b) && support.contains(&pred(n, b)))
        .map(|b| pred(n, pred(n, b)))
}

/// The annular diagram whose right action installs the arc `{a', (a+1)'}`:
/// an arc `{a+1, a+2}` below, a strand from `a` to `(a+2)'`, the new arc on
/// the primed side, and identity strands elsewhere (labels cyclic).
pub fn build_omega(a: u8, n: usize) -> Result<SetPartition, CoverError> {
    if n < 3 {
        return Err(CoverError::Precondition(format!(
            "arc installer needs at least 3 strands, got {n}"
        )));
    }
    if a == 0 || a as usize > n {
        return Err(CoverError::Precondition(format!("anchor {a} out of range 1..={n}")));
    }
    let prime = |i: u8| (n as u8) + i - 1;
    let plain = |i: u8| i - 1;
    let a1 = succ(n, a);
    let a2 = succ(n, a1);
    let mut blocks: Vec<Vec<u8>> = vec![
        vec![plain(a1), plain(a2)],
        vec![plain(a), prime(a2)],
        vec![prime(a), prime(a1)],
    ];
    for i in 1..=n as u8 {
        if i != a && i != a1 && i != a2 {
            blocks.push(vec![plain(i), prime(i)]);
        }
    }
    Ok(SetPartition::from_code_blocks(n, blocks).expect("constructed blocks partition 2n points"))
}

/// The diagram with the arc `{i, i+1}` on both rows for every requested
/// label; only defined when those arcs tile the whole circle (the alternating
/// configuration that the anchor-chase cannot reach).
pub(crate) fn full_arc_diagram(n: usize, arcs: &BTreeSet<u8>) -> Result<SetPartition, CoverError> {
    let mut covered: BTreeSet<u8> = BTreeSet::new();
    for &i in arcs {
        covered.insert(i);
        covered.insert(succ(n, i));
    }
    if covered.len() != n || 2 * arcs.len() != n {
        return Err(CoverError::Precondition(
            "full-arc diagram needs arcs that tile the circle".into(),
        ));
    }
    let prime = |i: u8| (n as u8) + i - 1;
    let plain = |i: u8| i - 1;
    let mut blocks: Vec<Vec<u8>> = Vec::with_capacity(n);
    for &i in arcs {
        let j = succ(n, i);
        blocks.push(vec![plain(i), plain(j)]);
        blocks.push(vec![prime(i), prime(j)]);
    }
    Ok(SetPartition::from_code_blocks(n, blocks).expect("tiling arcs partition 2n points"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagrams::decompose_annular;

    fn set(v: &[u8]) -> BTreeSet<u8> {
        v.iter().copied().collect()
    }

    #[test]
    fn moral_support_wraps() {
        assert_eq!(moral_support(6, &set(&[1, 3])), set(&[1, 2, 3, 4]));
        assert_eq!(moral_support(6, &set(&[6])), set(&[1, 6]));
        assert_eq!(moral_support(8, &set(&[1, 3, 5, 7])), set(&[1, 2, 3, 4, 5, 6, 7, 8]));
    }

    #[test]
    fn innermost_detects_cyclic_adjacency() {
        assert!(is_innermost(6, &set(&[1, 3, 5])));
        assert!(!is_innermost(6, &set(&[1, 2])));
        assert!(!is_innermost(6, &set(&[1, 6])));
        assert!(is_innermost(5, &set(&[2])));
        assert!(is_innermost(5, &set(&[])));
        // Two labels that are mutual successors on a 2-cycle.
        assert!(!is_innermost(2, &set(&[1, 2])));
        assert!(is_innermost(1, &set(&[1])));
    }

    #[test]
    fn anchor_choice_matches_known_cases() {
        assert_eq!(pick_arc_anchor(6, &set(&[1, 3])), Some(3));
        assert_eq!(pick_arc_anchor(8, &set(&[1, 3, 5, 7])), None);
        assert_eq!(pick_arc_anchor(3, &set(&[1])), Some(1));
        assert_eq!(pick_arc_anchor(6, &set(&[])), None);
        assert_eq!(pick_arc_anchor(2, &set(&[1])), None);
    }

    #[test]
    fn anchor_lies_in_the_set_and_chain_peels_to_empty() {
        // Over every innermost subset for n <= 8, repeatedly picking and
        // removing the anchor empties the set or reaches the alternating
        // configuration.
        for n in 3..=8usize {
            for mask in 0u32..(1 << n) {
                let arcs: BTreeSet<u8> =
                    (0..n as u8).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
                if !is_innermost(n, &arcs) {
                    continue;
                }
                let mut cur = arcs.clone();
                while let Some(a) = pick_arc_anchor(n, &cur) {
                    assert!(cur.contains(&a), "anchor {a} outside {cur:?} for n={n}");
                    cur.remove(&a);
                }
                if !cur.is_empty() {
                    // Stuck: must be the alternating configuration.
                    assert_eq!(moral_support(n, &cur).len(), n);
                    assert_eq!(2 * cur.len(), n);
                }
            }
        }
    }

    #[test]
    fn arc_installer_matches_known_form() {
        let omega = build_omega(3, 8).unwrap();
        assert_eq!(
            omega.to_string(),
            "{1,1'}{2,2'}{3,5'}{4,5}{6,6'}{7,7'}{8,8'}{3',4'}"
        );
        assert!(decompose_annular(&omega).is_some());
    }

    #[test]
    fn arc_installer_wraps_labels() {
        // Anchor n - 1 wraps the arc over the seam.
        let omega = build_omega(4, 5).unwrap();
        assert_eq!(omega.to_string(), "{1,5}{2,2'}{3,3'}{4,1'}{4',5'}");
        assert!(decompose_annular(&omega).is_some());
        let omega = build_omega(5, 5).unwrap();
        assert_eq!(omega.to_string(), "{1,2}{3,3'}{4,4'}{5,2'}{1',5'}");
        assert!(decompose_annular(&omega).is_some());
    }

    #[test]
    fn arc_installers_are_annular_and_idempotent() {
        for n in 3..=7usize {
            for a in 1..=n as u8 {
                let omega = build_omega(a, n).unwrap();
                assert!(decompose_annular(&omega).is_some(), "omega({a},{n}) not annular");
                let (sq, loops) = omega.compose(&omega).unwrap();
                assert_eq!(loops, 0, "omega({a},{n}) squared picked up a loop");
                assert_eq!(sq, omega);
            }
        }
    }

    #[test]
    fn full_arc_diagram_squares_to_delta_power() {
        let d = full_arc_diagram(4, &set(&[1, 3])).unwrap();
        assert_eq!(d.to_string(), "{1,2}{3,4}{1',2'}{3',4'}");
        assert!(decompose_annular(&d).is_some());
        let (sq, loops) = d.compose(&d).unwrap();
        assert_eq!(sq, d);
        assert_eq!(loops, 2);
        assert!(full_arc_diagram(4, &set(&[1, 2])).is_err());
        assert!(full_arc_diagram(4, &set(&[1])).is_err());
    }

    #[test]
    fn installer_rejects_small_or_bad_input() {
        assert!(build_omega(1, 2).is_err());
        assert!(build_omega(0, 5).is_err());
        assert!(build_omega(6, 5).is_err());
    }
}
