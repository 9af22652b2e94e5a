//! Expression parser: never panics, and anything it accepts survives a
//! print/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use qcoord::expr::parse_expression;

fuzz_target!(|data: &[u8]| {
    let Some((&rank, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let n = 1 + (rank % 4) as usize;
    if let Ok(e) = parse_expression(text, n) {
        let printed = e.to_string();
        let again = parse_expression(&printed, n).expect("printed form re-parses");
        assert_eq!(again, e);
    }
});
