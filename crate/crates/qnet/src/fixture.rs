//! Plain-text code fixtures.
//!
//! ```text
//! 3 1 3
//! HX 0
//! HZ 2
//! 110
//! 011
//! LX 1
//! 111
//! LZ 1
//! 111
//! ```
//!
//! The header is `n k d`, with `?` when the distance is unknown. Each block
//! header gives its row count and is followed by that many rows of `0`/`1`
//! characters, column 0 first. Blank lines and lines starting with `#` are
//! ignored when reading.

use std::fmt::Write as _;
use std::path::Path;

use qnet_core::codes::CssCode;
use qnet_core::{BitMatrix, BitVec, Error};

use crate::CliError;

pub fn write_code(code: &CssCode) -> String {
    let mut out = String::new();
    let d = code.distance().map_or_else(|| "?".to_string(), |d| d.to_string());
    writeln!(out, "{} {} {}", code.n(), code.k(), d).unwrap();
    for (tag, m) in [("HX", code.h_x()), ("HZ", code.h_z()), ("LX", code.logical_x()), ("LZ", code.logical_z())] {
        writeln!(out, "{tag} {}", m.num_rows()).unwrap();
        for row in m.rows() {
            writeln!(out, "{}", row.to_bit_string()).unwrap();
        }
    }
    out
}

fn parse_err(line: usize, msg: impl std::fmt::Display) -> Error {
    Error::Parse(format!("line {line}: {msg}"))
}

pub fn parse_code(text: &str, name: &str) -> Result<CssCode, Error> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (ln, header) = lines.next().ok_or_else(|| Error::Parse("empty fixture".into()))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let [n, k, d] = fields[..] else {
        return Err(parse_err(ln, "header must be `n k d`"));
    };
    let n: usize = n.parse().map_err(|e| parse_err(ln, format!("bad n: {e}")))?;
    let k: usize = k.parse().map_err(|e| parse_err(ln, format!("bad k: {e}")))?;
    let d = match d {
        "?" => None,
        d => Some(d.parse::<usize>().map_err(|e| parse_err(ln, format!("bad d: {e}")))?),
    };

    let mut blocks = Vec::with_capacity(4);
    for tag in ["HX", "HZ", "LX", "LZ"] {
        let (ln, head) = lines.next().ok_or_else(|| Error::Parse(format!("missing {tag} block")))?;
        let rows: usize = match head.split_whitespace().collect::<Vec<_>>()[..] {
            [t, r] if t == tag => r.parse().map_err(|e| parse_err(ln, format!("bad row count: {e}")))?,
            _ => return Err(parse_err(ln, format!("expected `{tag} <rows>`"))),
        };
        let mut m = BitMatrix::empty(n);
        for _ in 0..rows {
            let (ln, row) = lines.next().ok_or_else(|| Error::Parse(format!("{tag} block ends early")))?;
            if row.len() != n {
                return Err(parse_err(ln, format!("row has {} columns, expected {n}", row.len())));
            }
            let bits: BitVec = BitVec::parse_bits(row).map_err(|e| parse_err(ln, e))?;
            m.push_row(bits)?;
        }
        blocks.push(m);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "trailing content"));
    }
    let [h_x, h_z, lx, lz]: [BitMatrix; 4] = blocks.try_into().expect("four blocks");
    if lx.num_rows() != k {
        return Err(Error::Parse(format!("header says k = {k} but LX has {} rows", lx.num_rows())));
    }
    let code = CssCode::from_parts(name, h_x, h_z, lx, lz, d)?;
    let report = code.validate();
    if !report.passed() {
        return Err(Error::Structural(format!("invalid code: {:?}", report.violations)));
    }
    Ok(code)
}

pub fn load_code(path: &Path) -> Result<CssCode, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let name = format!("file:{}", path.display());
    parse_code(&text, &name).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use qnet_core::codes::{rep3, rotated_surface, shor9};

    #[test]
    fn rep3_text() {
        let text = write_code(&rep3());
        assert!(text.starts_with("3 1 "));
        assert!(text.contains("HX 0\nHZ 2\n"));
        let back = parse_code(&text, rep3().name()).unwrap();
        assert_eq!(back, rep3());
    }

    #[test]
    fn round_trips() {
        for code in [rep3(), shor9(), rotated_surface(5).unwrap()] {
            let text = write_code(&code);
            let back = parse_code(&text, code.name()).unwrap();
            assert_eq!(back, code);
            assert_eq!(write_code(&back), text);
        }
    }

    #[test]
    fn unknown_distance_and_comments() {
        let text = "# pair\n2 1 ?\nHX 0\n\nHZ 1\n11\nLX 1\n11\nLZ 1\n10\n";
        let code = parse_code(text, "pair").unwrap();
        assert_eq!(code.distance(), None);
        assert_eq!(code.k(), 1);
        assert!(write_code(&code).starts_with("2 1 ?\n"));
    }

    #[test]
    fn malformed_inputs() {
        let good = write_code(&rep3());
        for bad in [
            "",
            "3 1\nHX 0\nHZ 0\nLX 0\nLZ 0\n",
            &good.replace("HZ 2", "HZ 3"),
            &good.replace("110", "11"),
            &good.replace("110", "1a0"),
            &good.replace("LX 1", "LZ 1"),
            &format!("{good}000\n"),
            &good.replacen("3 1", "3 2", 1),
        ] {
            assert!(parse_code(bad, "x").is_err(), "{bad:?}");
        }
        // logical pair that commutes
        let broken = good.replace("LZ 1\n111", "LZ 1\n110");
        assert_ne!(broken, good);
        assert!(matches!(parse_code(&broken, "x"), Err(Error::Structural(_))));
    }
}
