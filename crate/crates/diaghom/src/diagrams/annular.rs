//! Annular link states, the annular diagram basis, and the decomposition of
//! a set partition into (bottom state, top state, rotation).

use super::{DiagramError, SetPartition, MAX_STRANDS};

/// A one-row link state on n circle points (codes 0..n): a set of arcs plus
/// defect points, where arcs are pairwise non-crossing on the circle and
/// every arc has all defects on one side.
///
/// Defects are stored in increasing label order; that order is the one used
/// to index through-strands.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnularLinkState {
    n: u8,
    arcs: Vec<(u8, u8)>,
    defects: Vec<u8>,
}

impl AnnularLinkState {
    /// Validates and canonicalizes. Arcs may come in any order and
    /// orientation; defects may come unsorted.
    pub fn new(
        n: usize,
        arcs: Vec<(u8, u8)>,
        defects: Vec<u8>,
    ) -> Result<Self, DiagramError> {
        if n == 0 || n > MAX_STRANDS {
            return Err(DiagramError::BadStrandCount(n));
        }
        let mut seen = vec![false; n];
        let mut mark = |c: u8| -> Result<(), DiagramError> {
            let idx = c as usize;
            if idx >= n {
                return Err(DiagramError::InvalidLinkState(format!(
                    "point {idx} out of range for n = {n}"
                )));
            }
            if seen[idx] {
                return Err(DiagramError::InvalidLinkState(format!("point {idx} repeated")));
            }
            seen[idx] = true;
            Ok(())
        };
        let mut arcs: Vec<(u8, u8)> = arcs
            .into_iter()
            .map(|(a, b)| if a <= b { (a, b) } else { (b, a) })
            .collect();
        for &(a, b) in &arcs {
            if a == b {
                return Err(DiagramError::InvalidLinkState(format!("arc ({a},{a}) is a point")));
            }
            mark(a)?;
            mark(b)?;
        }
        let mut defects = defects;
        for &d in &defects {
            mark(d)?;
        }
        if !seen.iter().all(|&s| s) {
            return Err(DiagramError::InvalidLinkState("points left uncovered".into()));
        }
        arcs.sort_unstable();
        defects.sort_unstable();

        for (i, &(a, b)) in arcs.iter().enumerate() {
            for &(c, d) in &arcs[i + 1..] {
                if arcs_cross_cyclically(a, b, c, d) {
                    return Err(DiagramError::InvalidLinkState(format!(
                        "arcs ({a},{b}) and ({c},{d}) cross"
                    )));
                }
            }
            // All defects must sit in a single open side of the arc.
            let mut inside = 0usize;
            for &d in &defects {
                if a < d && d < b {
                    inside += 1;
                }
            }
            if inside != 0 && inside != defects.len() {
                return Err(DiagramError::InvalidLinkState(format!(
                    "arc ({a},{b}) separates the defects"
                )));
            }
        }
        Ok(AnnularLinkState { n: n as u8, arcs, defects })
    }

    /// The all-defects state, t = n.
    pub fn all_defects(n: usize) -> Self {
        AnnularLinkState {
            n: n as u8,
            arcs: Vec::new(),
            defects: (0..n as u8).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.n as usize
    }

    pub fn arcs(&self) -> &[(u8, u8)] {
        &self.arcs
    }

    /// Defect points in increasing label order.
    pub fn defects(&self) -> &[u8] {
        &self.defects
    }

    pub fn defect_count(&self) -> usize {
        self.defects.len()
    }
}

/// Whether chords {a,b} and {c,d} on circled points 0..n cross, i.e. exactly
/// one of c, d lies in the open cyclic interval (a, b). Assumes a < b.
fn arcs_cross_cyclically(a: u8, b: u8, c: u8, d: u8) -> bool {
    let inside = |x: u8| a < x && x < b;
    inside(c) != inside(d)
}

/// The set M(t) of link states on n points with exactly t defects, sorted.
/// Empty when n - t is odd.
pub fn link_states(n: usize, t: usize) -> Vec<AnnularLinkState> {
    assert!(n >= 1 && n <= MAX_STRANDS && t <= n);
    if (n - t) % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    if t == 0 {
        // Arcs only: pick the partner of point 0; both sides of that chord
        // close up independently as linear intervals.
        let points: Vec<u8> = (0..n as u8).collect();
        for j in (1..n).step_by(2) {
            for inner_arcs in linear_noncrossing_matchings(&points[1..j]) {
                for outer_arcs in linear_noncrossing_matchings(&points[j + 1..]) {
                    let mut arcs = vec![(0u8, j as u8)];
                    arcs.extend(inner_arcs.iter().copied());
                    arcs.extend(outer_arcs.iter().copied());
                    out.push(AnnularLinkState::new(n, arcs, Vec::new()).unwrap());
                }
            }
        }
    } else {
        // Choose the defect set; every cyclic gap between consecutive
        // defects must close up on its own, in the order walked.
        for defects in combinations(n, t) {
            let mut per_gap: Vec<Vec<Vec<(u8, u8)>>> = Vec::new();
            let mut ok = true;
            for g in 0..t {
                let from = defects[g] as usize;
                let to = defects[(g + 1) % t] as usize;
                let mut gap: Vec<u8> = Vec::new();
                let mut v = (from + 1) % n;
                while v != to {
                    gap.push(v as u8);
                    v = (v + 1) % n;
                }
                if gap.len() % 2 != 0 {
                    ok = false;
                    break;
                }
                per_gap.push(linear_noncrossing_matchings(&gap));
            }
            if !ok {
                continue;
            }
            let mut stack: Vec<Vec<(u8, u8)>> = vec![Vec::new()];
            for gap_options in &per_gap {
                let mut next = Vec::new();
                for partial in &stack {
                    for option in gap_options {
                        let mut arcs = partial.clone();
                        arcs.extend(option.iter().copied());
                        next.push(arcs);
                    }
                }
                stack = next;
            }
            for arcs in stack {
                out.push(AnnularLinkState::new(n, arcs, defects.clone()).unwrap());
            }
        }
    }
    out.sort_unstable();
    out
}

/// All non-crossing perfect matchings of a sequence of points, treated in
/// the given linear order. Point labels are arbitrary.
fn linear_noncrossing_matchings(points: &[u8]) -> Vec<Vec<(u8, u8)>> {
    if points.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let first = points[0];
    for j in (1..points.len()).step_by(2) {
        let partner = points[j];
        for inner_arcs in linear_noncrossing_matchings(&points[1..j]) {
            for rest_arcs in linear_noncrossing_matchings(&points[j + 1..]) {
                let mut arcs = vec![(first.min(partner), first.max(partner))];
                arcs.extend(inner_arcs.iter().copied());
                arcs.extend(rest_arcs.iter().copied());
                out.push(arcs);
            }
        }
    }
    out
}

fn combinations(n: usize, k: usize) -> Vec<Vec<u8>> {
    use itertools::Itertools;
    (0..n as u8).combinations(k).collect()
}

/// An annular basis diagram: bottom and top link states with matching defect
/// counts, plus the rotation pairing their defects. The rotation is reduced
/// mod t and is 0 when t = 0.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AnnularDiagram {
    pub bottom: AnnularLinkState,
    pub top: AnnularLinkState,
    pub rotation: u8,
}

/// The pairing whose bottom restriction is p, top restriction is q, and
/// whose through-strands connect defect i of q to defect (i + sigma) of p,
/// indices taken in increasing-label order mod t.
pub fn build_annular(
    p: &AnnularLinkState,
    q: &AnnularLinkState,
    sigma: usize,
) -> Result<SetPartition, DiagramError> {
    if p.n != q.n {
        return Err(DiagramError::StrandMismatch { left: p.n(), right: q.n() });
    }
    let t = p.defect_count();
    if t != q.defect_count() {
        return Err(DiagramError::DefectMismatch { bottom: t, top: q.defect_count() });
    }
    let n = p.n();
    let mut blocks: Vec<Vec<u8>> = Vec::new();
    for &(a, b) in p.arcs() {
        blocks.push(vec![a, b]);
    }
    for &(a, b) in q.arcs() {
        blocks.push(vec![n as u8 + a, n as u8 + b]);
    }
    if t > 0 {
        let s = sigma % t;
        for (i, &qd) in q.defects().iter().enumerate() {
            let pd = p.defects()[(i + s) % t];
            blocks.push(vec![pd, n as u8 + qd]);
        }
    }
    SetPartition::from_code_blocks(n, blocks)
}

/// Inverse of `build_annular` on its image; `None` when the partition is not
/// an annular diagram.
pub fn decompose_annular(rho: &SetPartition) -> Option<AnnularDiagram> {
    let n = rho.n();
    let mut bottom_arcs: Vec<(u8, u8)> = Vec::new();
    let mut top_arcs: Vec<(u8, u8)> = Vec::new();
    let mut through: Vec<(u8, u8)> = Vec::new();
    for block in rho.blocks() {
        if block.len() != 2 {
            return None;
        }
        let (a, b) = (block[0], block[1]);
        let n8 = n as u8;
        if b < n8 {
            bottom_arcs.push((a, b));
        } else if a >= n8 {
            top_arcs.push((a - n8, b - n8));
        } else {
            through.push((a, b - n8));
        }
    }
    let bottom_defects: Vec<u8> = {
        let mut d: Vec<u8> = through.iter().map(|&(a, _)| a).collect();
        d.sort_unstable();
        d
    };
    let top_defects: Vec<u8> = {
        let mut d: Vec<u8> = through.iter().map(|&(_, b)| b).collect();
        d.sort_unstable();
        d
    };
    let bottom = AnnularLinkState::new(n, bottom_arcs, bottom_defects).ok()?;
    let top = AnnularLinkState::new(n, top_arcs, top_defects).ok()?;
    let t = bottom.defect_count();

    let mut rotation = 0u8;
    if t > 0 {
        // The through-strand pattern must be a rotation in defect indices.
        let pos_in = |list: &[u8], x: u8| list.iter().position(|&v| v == x).unwrap();
        let first_partner = through
            .iter()
            .find(|&&(_, b)| b == top.defects()[0])
            .map(|&(a, _)| a)
            .unwrap();
        let s = pos_in(bottom.defects(), first_partner);
        for &(a, b) in &through {
            let i = pos_in(top.defects(), b);
            if bottom.defects()[(i + s) % t] != a {
                return None;
            }
        }
        rotation = s as u8;
    }
    let diagram = AnnularDiagram { bottom, top, rotation };
    debug_assert_eq!(
        build_annular(&diagram.bottom, &diagram.top, diagram.rotation as usize).as_ref(),
        Ok(rho)
    );
    Some(diagram)
}

/// The rotation diagram pairing i' with i + s mod n.
pub fn rotation_diagram(n: usize, s: usize) -> SetPartition {
    let all = AnnularLinkState::all_defects(n);
    build_annular(&all, &all, s % n).unwrap()
}
