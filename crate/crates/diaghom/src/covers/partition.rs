//! Right-multipliers that retract a partition algebra onto cover
//! intersections: one detaches a chosen primed vertex into a singleton, the
//! other joins two primed vertices into a shared block.

use std::collections::BTreeSet;

use crate::diagrams::SetPartition;

use super::CoverError;

fn check_range(n: usize, label: u8, what: &str) -> Result<(), CoverError> {
    if label == 0 || label as usize > n {
        return Err(CoverError::Precondition(format!(
            "{what} label {label} out of range 1..={n}"
        )));
    }
    Ok(())
}

/// The diagram whose right action detaches vertex `a'`: block of `a'` loses
/// `a'`, and the rest of that block is merged into the block of `b'`.
///
/// Parts: `{a'}`, `{a, b, b'}`, and `{i, i'}` for every other label. The
/// context sets `s` (detached labels already imposed) and `t` (joined pairs)
/// describe the ideal being retracted; they constrain the choice of `a` and
/// `b` but do not enter the diagram itself.
pub fn build_mu(
    s: &BTreeSet<u8>,
    t: &BTreeSet<(u8, u8)>,
    a: u8,
    b: u8,
    n: usize,
) -> Result<SetPartition, CoverError> {
    check_range(n, a, "detach")?;
    check_range(n, b, "carrier")?;
    for &i in s {
        check_range(n, i, "context")?;
    }
    for &(i, j) in t {
        check_range(n, i, "context")?;
        check_range(n, j, "context")?;
        if i >= j {
            return Err(CoverError::Precondition(format!("unordered context pair {i}-{j}")));
        }
    }
    if s.contains(&a) {
        return Err(CoverError::Precondition(format!("label {a} is already detached")));
    }
    if b == a || s.contains(&b) {
        return Err(CoverError::Precondition(format!(
            "carrier {b} must avoid the detached labels and {a}"
        )));
    }

    let prime = |i: u8| (n as u8) + i - 1;
    let plain = |i: u8| i - 1;
    let mut blocks: Vec<Vec<u8>> = vec![vec![prime(a)], vec![plain(a), plain(b), prime(b)]];
    for i in 1..=n as u8 {
        if i != a && i != b {
            blocks.push(vec![plain(i), prime(i)]);
        }
    }
    Ok(SetPartition::from_code_blocks(n, blocks).expect("constructed blocks partition 2n points"))
}

/// The diagram whose right action merges the blocks of `a'` and `b'`.
///
/// Parts: `{a, b, a', b'}` and `{i, i'}` for every other label.
pub fn build_nu(a: u8, b: u8, n: usize) -> Result<SetPartition, CoverError> {
    check_range(n, a, "join")?;
    check_range(n, b, "join")?;
    if a >= b {
        return Err(CoverError::Precondition(format!(
            "join labels must be ordered, got {a},{b}"
        )));
    }
    let prime = |i: u8| (n as u8) + i - 1;
    let plain = |i: u8| i - 1;
    let mut blocks: Vec<Vec<u8>> = vec![vec![plain(a), plain(b), prime(a), prime(b)]];
    for i in 1..=n as u8 {
        if i != a && i != b {
            blocks.push(vec![plain(i), prime(i)]);
        }
    }
    Ok(SetPartition::from_code_blocks(n, blocks).expect("constructed blocks partition 2n points"))
}

/// The all-singletons diagram: right multiplication rescales any diagram
/// whose primed vertices are all detached by delta to the strand count, so
/// over a ring where delta is invertible it scales to an idempotent
/// generator for the full detached intersection.
pub(crate) fn all_detached_diagram(n: usize) -> SetPartition {
    let blocks: Vec<Vec<u8>> = (0..2 * n as u8).map(|c| vec![c]).collect();
    SetPartition::from_code_blocks(n, blocks).expect("singletons partition 2n points")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn detach_diagram_matches_known_form() {
        let mu = build_mu(&BTreeSet::new(), &BTreeSet::new(), 1, 2, 4).unwrap();
        assert_eq!(mu.to_string(), "{1,2,2'}{3,3'}{4,4'}{1'}");
    }

    #[test]
    fn join_diagram_matches_known_form() {
        let nu = build_nu(1, 3, 3).unwrap();
        assert_eq!(nu.to_string(), "{1,3,1',3'}{2,2'}");
    }

    #[test]
    fn join_diagram_is_idempotent_without_loops() {
        for n in 2..=4usize {
            for a in 1..=n as u8 {
                for b in (a + 1)..=n as u8 {
                    let nu = build_nu(a, b, n).unwrap();
                    let (sq, loops) = nu.compose(&nu).unwrap();
                    assert_eq!(loops, 0);
                    assert_eq!(sq, nu);
                }
            }
        }
    }

    #[test]
    fn detach_diagram_is_idempotent_without_loops() {
        for n in 2..=4usize {
            for a in 1..=n as u8 {
                for b in 1..=n as u8 {
                    if a == b {
                        continue;
                    }
                    let mu = build_mu(&BTreeSet::new(), &BTreeSet::new(), a, b, n).unwrap();
                    let (sq, loops) = mu.compose(&mu).unwrap();
                    assert_eq!(loops, 0);
                    assert_eq!(sq, mu);
                }
            }
        }
    }

    #[test]
    fn detach_action_detaches_and_merges() {
        // Right action on the identity: the block {a, a'} loses a', and a is
        // rerouted into the block of b.
        let mu = build_mu(&BTreeSet::new(), &BTreeSet::new(), 1, 2, 3).unwrap();
        let id = SetPartition::identity(3);
        let (prod, loops) = id.compose(&mu).unwrap();
        assert_eq!(loops, 0);
        assert_eq!(prod, mu);

        // A diagram already in the target is fixed, whatever the carrier.
        let rho =
            SetPartition::from_code_blocks(3, vec![vec![0, 4], vec![1, 5], vec![2], vec![3]])
                .unwrap();
        for b in 2..=3 {
            let mu_b = build_mu(&BTreeSet::new(), &BTreeSet::new(), 1, b, 3).unwrap();
            let (fixed, loops) = rho.compose(&mu_b).unwrap();
            assert_eq!(loops, 0);
            assert_eq!(fixed, rho);
        }
    }

    #[test]
    fn precondition_violations_are_rejected() {
        let empty = BTreeSet::new();
        let no_pairs = BTreeSet::new();
        assert!(build_mu(&empty, &no_pairs, 0, 2, 3).is_err());
        assert!(build_mu(&empty, &no_pairs, 1, 1, 3).is_err());
        assert!(build_mu(&empty, &no_pairs, 1, 4, 3).is_err());
        let s: BTreeSet<u8> = [2].into();
        assert!(build_mu(&s, &no_pairs, 2, 3, 3).is_err());
        assert!(build_mu(&s, &no_pairs, 1, 2, 3).is_err());
        let s_all_but_one: BTreeSet<u8> = [1, 2].into();
        assert!(build_mu(&s_all_but_one, &no_pairs, 3, 1, 3).is_err());
        assert!(build_nu(2, 2, 3).is_err());
        assert!(build_nu(3, 1, 3).is_err());
        assert!(build_nu(1, 4, 3).is_err());
    }
}
