//! Replays the checked-in fuzz seeds through the same properties the fuzz
//! targets assert.

use std::fs;
use std::path::PathBuf;

use qcoord::classical::{eval_web_description, parse_web};
use qcoord::expr::parse_expression;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.file_name().unwrap().to_string_lossy().into_owned(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    out
}

#[test]
fn expression_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("parse_expression") {
        let Some((&rank, rest)) = data.split_first() else { continue };
        let text = std::str::from_utf8(rest).unwrap();
        let n = 1 + (rank % 4) as usize;
        match parse_expression(text, n) {
            Ok(e) => {
                accepted += 1;
                assert_eq!(parse_expression(&e.to_string(), n).unwrap(), e, "{name}");
            }
            Err(err) => assert!(name.contains("range") || name.contains("negative"), "{name}: {err}"),
        }
    }
    assert!(accepted >= 4);
}

#[test]
fn web_seeds() {
    for (name, data) in seeds("parse_web") {
        let text = String::from_utf8(data).unwrap();
        let parsed = parse_web(&text);
        let should_parse = !matches!(name.as_str(), "unknown_generator.json" | "open_knot.json" | "unknown_field.json");
        assert_eq!(parsed.is_ok(), should_parse, "{name}: {parsed:?}");
        if let Ok(desc) = parsed {
            assert!(eval_web_description(&desc, 2, 0).unwrap().norm().is_finite(), "{name}");
        }
    }
}
