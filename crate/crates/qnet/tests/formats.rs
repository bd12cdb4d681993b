use proptest::prelude::*;

use qnet::fixture::{parse_code, write_code};
use qnet_core::codes::{hypergraph_product, CssCode};
use qnet_core::{BitMatrix, BitVec};

fn code_from_bits(rows: usize, bits: &[bool]) -> CssCode {
    let cols = bits.len() / rows;
    let mut bits = bits.to_vec();
    bits[0] = true;
    let h = BitMatrix::from_rows(cols, bits.chunks(cols).map(BitVec::from_bools).collect()).unwrap();
    hypergraph_product(&h, &h).unwrap()
}

fn checks() -> impl Strategy<Value = (usize, Vec<bool>)> {
    (1usize..4, 2usize..5).prop_flat_map(|(r, c)| (Just(r), prop::collection::vec(any::<bool>(), r * c)))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fixture_round_trip((rows, bits) in checks(), with_d in any::<bool>()) {
        let code = code_from_bits(rows, &bits);
        let code = if with_d {
            CssCode::from_parts(code.name(), code.h_x().clone(), code.h_z().clone(), code.logical_x().clone(), code.logical_z().clone(), Some(2)).unwrap()
        } else {
            code
        };
        let text = write_code(&code);
        let back = parse_code(&text, code.name()).unwrap();
        prop_assert_eq!(&back, &code);
        prop_assert_eq!(write_code(&back), text);
    }

    #[test]
    fn random_bit_flips_are_caught((rows, bits) in checks(), line_pick in any::<prop::sample::Index>(), col in 0usize..64) {
        let code = code_from_bits(rows, &bits);
        let text = write_code(&code);
        let mut lines: Vec<String> = text.lines().map(String::from).collect();
        let rows: Vec<usize> = (0..lines.len()).filter(|&i| lines[i].chars().all(|c| c == '0' || c == '1') && !lines[i].is_empty()).collect();
        let i = rows[line_pick.index(rows.len())];
        let c = col % lines[i].len();
        let mut bytes = lines[i].clone().into_bytes();
        bytes[c] = if bytes[c] == b'0' { b'1' } else { b'0' };
        lines[i] = String::from_utf8(bytes).unwrap();
        let edited = lines.join("\n") + "\n";
        // a flipped bit either still parses to a different code or is rejected
        if let Ok(other) = parse_code(&edited, code.name()) {
            prop_assert_ne!(other, code);
        }
    }
}

#[test]
fn empty_check_blocks() {
    let code = CssCode::from_checks("free", BitMatrix::empty(2), BitMatrix::empty(2), None).unwrap();
    let text = write_code(&code);
    assert!(text.starts_with("2 2 ?\nHX 0\nHZ 0\nLX 2\n"));
    assert_eq!(parse_code(&text, "free").unwrap(), code);
}
