#![no_main]

use libfuzzer_sys::fuzz_target;
use qcoord::classical::{eval_web_description, parse_web};

fuzz_target!(|data: &str| {
    if let Ok(desc) = parse_web(data) {
        // Evaluation may reject states outside 1..n but must not panic.
        let _ = eval_web_description(&desc, 2, 0);
    }
});
