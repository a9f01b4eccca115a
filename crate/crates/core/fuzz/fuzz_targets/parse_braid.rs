#![no_main]

use casson_lin::braid::parse_braid;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Some((&n, text)) = data.split_first() else {
        return;
    };
    let Ok(text) = std::str::from_utf8(text) else {
        return;
    };
    let strands = usize::from(n % 8) + 1;
    if let Ok(word) = parse_braid(text, strands) {
        if !word.is_empty() {
            assert_eq!(parse_braid(&word.to_string(), strands).unwrap(), word);
        }
    }
});
