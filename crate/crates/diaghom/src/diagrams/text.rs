//! Canonical text form of a set partition, e.g. `{1,2}{1',2'}`, and a
//! hardened parser for it.
//!
//! The writer emits blocks in canonical order with no whitespace. The parser
//! accepts ASCII whitespace between tokens, never panics, and reports byte
//! positions in its errors. The strand count is inferred from the labels: the
//! input must cover 1..=n and 1'..=n' exactly once each for some n.

use super::{DiagramError, SetPartition, VertexLabel, MAX_STRANDS};

impl std::fmt::Display for SetPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let n = self.n();
        for block in self.blocks() {
            f.write_str("{")?;
            for (k, &c) in block.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", VertexLabel::from_code(c, n))?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// Parses the `{1,2}{1',2'}` form. Inverse of `Display` on canonical output.
pub fn parse_set_partition(input: &str) -> Result<SetPartition, DiagramError> {
    let bytes = input.as_bytes();
    let mut pos = 0usize;
    let mut blocks: Vec<Vec<(u8, bool)>> = Vec::new();
    let mut max_index = 0u8;

    let err = |pos: usize, msg: &str| DiagramError::Parse { pos, msg: msg.into() };

    skip_ws(bytes, &mut pos);
    if pos == bytes.len() {
        return Err(err(pos, "empty input"));
    }
    while pos < bytes.len() {
        if bytes[pos] != b'{' {
            return Err(err(pos, "expected '{'"));
        }
        pos += 1;
        let mut block = Vec::new();
        loop {
            skip_ws(bytes, &mut pos);
            let start = pos;
            let mut value = 0u32;
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                value = value * 10 + (bytes[pos] - b'0') as u32;
                if value > MAX_STRANDS as u32 {
                    return Err(err(start, "label index too large"));
                }
                pos += 1;
            }
            if pos == start {
                return Err(err(pos, "expected a label"));
            }
            if value == 0 {
                return Err(err(start, "label indices start at 1"));
            }
            let primed = pos < bytes.len() && bytes[pos] == b'\'';
            if primed {
                pos += 1;
            }
            max_index = max_index.max(value as u8);
            block.push((value as u8, primed));
            skip_ws(bytes, &mut pos);
            match bytes.get(pos) {
                Some(b',') => pos += 1,
                Some(b'}') => {
                    pos += 1;
                    break;
                }
                _ => return Err(err(pos, "expected ',' or '}'")),
            }
        }
        blocks.push(block);
        skip_ws(bytes, &mut pos);
    }

    let n = max_index as usize;
    let code_blocks = blocks
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|(index, primed)| VertexLabel::new(index, primed).code(n))
                .collect()
        })
        .collect();
    // from_code_blocks enforces that every label below the inferred n is
    // present exactly once, which also pins the inference itself.
    SetPartition::from_code_blocks(n, code_blocks)
}

fn skip_ws(bytes: &[u8], pos: &mut usize) {
    while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
        *pos += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_matches_frozen_form() {
        let e = SetPartition::from_code_blocks(2, vec![vec![0, 1], vec![2, 3]]).unwrap();
        assert_eq!(e.to_string(), "{1,2}{1',2'}");
        assert_eq!(SetPartition::identity(2).to_string(), "{1,1'}{2,2'}");
    }

    #[test]
    fn parse_round_trips_canonical_output() {
        for text in [
            "{1,2}{1',2'}",
            "{1,1'}{2,2'}{3,3'}",
            "{1,11}{2,10}{3,7'}{4,5}{6,7}{8,1'}{9,4'}{2',3'}{5',6'}{8',11'}{9',10'}",
            "{1}{2}{1'}{2'}",
        ] {
            let p = parse_set_partition(text).unwrap();
            assert_eq!(p.to_string(), text);
            assert_eq!(parse_set_partition(&p.to_string()).unwrap(), p);
        }
    }

    #[test]
    fn parse_accepts_whitespace_and_block_order() {
        let a = parse_set_partition(" {2', 1'}  {2 ,1} ").unwrap();
        let b = parse_set_partition("{1,2}{1',2'}").unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_rejects_malformed_input() {
        for bad in [
            "",
            "   ",
            "{1,2}{1'}",
            "{1,2}",
            "{0,1}{1',2'}",
            "{1,1}{1',2'}{2}",
            "{1,2}{1',2'}x",
            "{1,2}{1',2'}{",
            "{}",
            "{1,,2}{1',2'}",
            "{1,2}{1'',2'}",
            "{101}",
            "{99999999999999999999}",
            "{1,2'",
        ] {
            assert!(parse_set_partition(bad).is_err(), "accepted {bad:?}");
        }
    }

    #[test]
    fn parse_never_panics_on_junk_bytes() {
        for seed in 0..200u32 {
            let mut s = String::new();
            let mut x = seed.wrapping_mul(2654435761);
            for _ in 0..(seed % 24) {
                x = x.wrapping_mul(1103515245).wrapping_add(12345);
                let c = b"{}',0123456789 ab\xc3\xa9"[(x >> 16) as usize % 19];
                if let Some(ch) = char::from_u32(c as u32) {
                    s.push(ch);
                }
            }
            let _ = parse_set_partition(&s);
        }
    }
}
