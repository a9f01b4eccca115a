#![no_main]

use casson_lin::braid::{linking_number, parse_braid};
use casson_lin::cassonlin::casson_lin_h2;
use casson_lin::Error;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let Ok(word) = parse_braid(text, 2) else {
        return;
    };
    if word.exponent_sum().abs() > 40 {
        return;
    }
    match casson_lin_h2(&word) {
        Ok(result) => {
            assert_eq!(result.lk, word.exponent_sum() / 2);
            if result.is_complete() {
                assert_eq!(result.h2, -result.lk);
            }
        }
        Err(Error::NotTwoComponents { .. }) => assert!(linking_number(&word).is_err()),
        Err(e) => panic!("unexpected error {e}"),
    }
});
