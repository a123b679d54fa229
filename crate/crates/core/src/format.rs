//! Text formats: generator matrices, design block lists, and known-count maps.
//!
//! All parsers accept untrusted input and report the first offending
//! position instead of panicking.

use std::collections::BTreeMap;
use std::io::Write;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::geometry::Design;
use crate::gf2::{BitMatrix, BitVector};

/// Parses a generator matrix: one row per line of `0`/`1` characters.
/// Whitespace inside a line is ignored, blank lines are skipped, and every
/// row must have the same length.
pub fn parse_generator_matrix(text: &str) -> Result<BitMatrix> {
    let mut rows = Vec::new();
    let mut width: Option<(usize, usize)> = None;
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let mut bits = Vec::new();
        for (col, ch) in line.chars().enumerate() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                c if c.is_whitespace() => {}
                c => {
                    return Err(Error::Parse {
                        line: line_no,
                        column: col + 1,
                        message: format!("unexpected character {c:?}"),
                    })
                }
            }
        }
        if bits.is_empty() {
            continue;
        }
        match width {
            None => width = Some((bits.len(), line_no)),
            Some((w, first)) if w != bits.len() => {
                return Err(Error::Parse {
                    line: line_no,
                    column: 1,
                    message: format!("ragged rows: row has {} entries but line {first} has {w}", bits.len()),
                })
            }
            Some(_) => {}
        }
        rows.push(BitVector::from_bools(&bits));
    }
    if rows.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no rows".into(),
        });
    }
    BitMatrix::from_rows(rows)
}

pub fn write_generator_matrix(m: &BitMatrix, mut out: impl Write) -> Result<()> {
    for row in m.row_vectors() {
        writeln!(out, "{row}")?;
    }
    Ok(())
}

/// One block per line: sorted 0-based point indices separated by spaces.
pub fn write_design(d: &Design, mut out: impl Write) -> Result<()> {
    for block in d.blocks() {
        let line: Vec<String> = block.iter_ones().map(|p| p.to_string()).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

/// Parses the block-list format written by [`write_design`]. Without an
/// explicit `point_count`, the point set is `0..=max index`.
pub fn parse_design(text: &str, point_count: Option<usize>) -> Result<Design> {
    const MAX_POINTS: usize = 1 << 24;
    const MAX_INCIDENCE_BITS: usize = 1 << 31;
    let mut blocks: Vec<(usize, Vec<usize>)> = Vec::new();
    let mut max_point = 0usize;
    for (line_no, line) in text.lines().enumerate() {
        let line_no = line_no + 1;
        let mut points = Vec::new();
        let mut column = 1;
        for token in line.split_whitespace() {
            column = line.find(token).map_or(column, |c| c + 1);
            let p: usize = token.parse().map_err(|_| Error::Parse {
                line: line_no,
                column,
                message: format!("expected a point index, found {token:?}"),
            })?;
            if p >= MAX_POINTS || point_count.is_some_and(|v| p >= v) {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    message: format!("point index {p} out of range"),
                });
            }
            if points.last().is_some_and(|&last| last >= p) {
                return Err(Error::Parse {
                    line: line_no,
                    column,
                    message: "point indices must be strictly increasing".into(),
                });
            }
            max_point = max_point.max(p);
            points.push(p);
        }
        if !points.is_empty() {
            blocks.push((line_no, points));
        }
    }
    if blocks.is_empty() {
        return Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no blocks".into(),
        });
    }
    let v = point_count.unwrap_or(max_point + 1);
    if v.saturating_mul(blocks.len()) > MAX_INCIDENCE_BITS {
        return Err(Error::TooLarge(format!(
            "{} blocks over {v} points exceeds the incidence limit",
            blocks.len()
        )));
    }
    let k = blocks[0].1.len();
    if let Some((line, b)) = blocks.iter().find(|(_, b)| b.len() != k) {
        return Err(Error::Parse {
            line: *line,
            column: 1,
            message: format!("block has {} points, expected {k}", b.len()),
        });
    }
    let rows = blocks.into_iter().map(|(_, b)| BitVector::from_indices(v, b)).collect();
    Design::new(v, rows)
}

/// Parses a JSON object mapping weights to counts, e.g. `{"0":1,"4":0}`.
/// Counts may be JSON integers or decimal strings (for values beyond 64 bits).
pub fn parse_known_counts(text: &str) -> Result<BTreeMap<usize, BigInt>> {
    let value: serde_json::Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let obj = value.as_object().ok_or_else(|| Error::Parse {
        line: 1,
        column: 1,
        message: "expected a JSON object of weight -> count".into(),
    })?;
    let bad = |message: String| Error::Parse {
        line: 1,
        column: 1,
        message,
    };
    let mut out = BTreeMap::new();
    for (key, val) in obj {
        let w: usize = key
            .parse()
            .map_err(|_| bad(format!("weight key {key:?} is not a nonnegative integer")))?;
        let count: BigInt = match val {
            serde_json::Value::Number(n) => n
                .as_i64()
                .map(BigInt::from)
                .or_else(|| n.as_u64().map(BigInt::from))
                .ok_or_else(|| bad(format!("count for weight {w} is not an integer")))?,
            serde_json::Value::String(s) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit() || b == b'-') => s
                .parse()
                .map_err(|_| bad(format!("count for weight {w} is not an integer")))?,
            _ => return Err(bad(format!("count for weight {w} is not an integer"))),
        };
        out.insert(w, count);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn identity_parses() {
        assert_eq!(parse_generator_matrix("10\n01\n").unwrap(), BitMatrix::identity(2));
        assert_eq!(parse_generator_matrix("1 0\r\n\n0\t1").unwrap(), BitMatrix::identity(2));
    }

    #[test]
    fn parse_errors_carry_positions() {
        match parse_generator_matrix("10\n011\n") {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("ragged"));
            }
            other => panic!("{other:?}"),
        }
        match parse_generator_matrix("10\n0x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 2)),
            other => panic!("{other:?}"),
        }
        assert!(parse_generator_matrix("").is_err());
        assert!(parse_generator_matrix(" \n\n").is_err());
    }

    #[test]
    fn design_format() {
        let d = parse_design("0 1 2\n0 3 4\n", None).unwrap();
        assert_eq!((d.point_count(), d.block_count(), d.block_size()), (5, 2, 3));
        let mut buf = Vec::new();
        write_design(&d, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "0 1 2\n0 3 4\n");
        assert!(parse_design("0 1\n0 1 2\n", None).is_err());
        assert!(parse_design("1 0\n", None).is_err());
        assert!(parse_design("0 9\n", Some(5)).is_err());
        assert!(parse_design("0 a\n", None).is_err());
        assert!(parse_design("", None).is_err());
    }

    #[test]
    fn known_counts() {
        let k = parse_known_counts(r#"{"0":1,"4":0,"16":"94488"}"#).unwrap();
        assert_eq!(k[&0], BigInt::from(1));
        assert_eq!(k[&16], BigInt::from(94488));
        assert!(parse_known_counts("[1]").is_err());
        assert!(parse_known_counts(r#"{"x":1}"#).is_err());
        assert!(parse_known_counts(r#"{"4":1.5}"#).is_err());
        assert!(parse_known_counts("{").is_err());
    }

    proptest! {
        #[test]
        fn generator_text_round_trip(rows in 1usize..10, cols in 1usize..140, seed in any::<u64>()) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let m = BitMatrix::from_rows(
                (0..rows).map(|_| BitVector::from_words(cols, (0..3).map(|_| rng.gen()).collect())).collect(),
            ).unwrap();
            let mut buf = Vec::new();
            write_generator_matrix(&m, &mut buf).unwrap();
            let text = String::from_utf8(buf).unwrap();
            prop_assert_eq!(parse_generator_matrix(&text).unwrap(), m);
        }

        #[test]
        fn parsers_never_panic(s in "\\PC{0,200}") {
            let _ = parse_generator_matrix(&s);
            let _ = parse_design(&s, None);
            let _ = parse_known_counts(&s);
        }
    }
}
