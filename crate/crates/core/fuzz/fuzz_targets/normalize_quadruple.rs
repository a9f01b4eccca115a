#![no_main]

use casson_lin::pillowcase::{conj_quadruple, normalize_with_conjugator, param_g};
use casson_lin::quat::TracelessElement;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 96 {
        return;
    }
    let mut values = data.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap()));
    let mut entry = || {
        let (y, z, w) = (values.next()?, values.next()?, values.next()?);
        let n = (y * y + z * z + w * w).sqrt();
        if !n.is_finite() || n < 1e-6 {
            return None;
        }
        TracelessElement::new(y / n, z / n, w / n).ok()
    };
    let (Some(a), Some(b), Some(c), Some(d)) = (entry(), entry(), entry(), entry()) else {
        return;
    };
    let q = [a, b, c, d];
    if let Ok((lift, h)) = normalize_with_conjugator(&q) {
        let rebuilt = param_g(lift.theta1, lift.theta2);
        let moved = conj_quadruple(&q, h);
        let err = moved.iter().zip(&rebuilt).map(|(x, y)| x.distance(*y)).fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }
});
