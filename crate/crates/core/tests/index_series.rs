use num_bigint::BigInt;
use transindex::series::integer_coefficients;
use transindex::{b_poly, index_series_formula, IndexSeriesReport, LaurentPoly, Window};

fn binom(top: i64, bottom: i64) -> BigInt {
    if bottom < 0 || top < bottom {
        return BigInt::from(0);
    }
    (0..bottom).fold(BigInt::from(1), |acc, i| acc * (top - i) / (i + 1))
}

/// Holomorphic Euler characteristic of O(-l) on CP^n.
fn euler(n: i64, l: i64) -> BigInt {
    if l >= 0 {
        binom(l + n, n)
    } else if l <= -n - 1 {
        let b = binom(-l - 1, n);
        if n % 2 == 0 {
            b
        } else {
            -b
        }
    } else {
        BigInt::from(0)
    }
}

#[test]
fn formula_at_identity_counts_sections() {
    let win = Window::new(-10, 10).unwrap();
    for n in 1..=3usize {
        for k in -3..=3i64 {
            let s = index_series_formula(n, k, win).unwrap();
            let got = integer_coefficients(&s);
            for (m, v) in win.indices().zip(got) {
                assert_eq!(v, euler(n as i64, -k * m), "n={n} k={k} m={m}");
            }
        }
    }
}

#[test]
fn b_at_identity() {
    // For k = 0 every t_j^k is 1 and B is (1 - t)^n.
    for n in 0..5usize {
        let b = b_poly(n, 0, 0).unwrap();
        let coeffs: Vec<BigInt> = (0..=n as i64)
            .map(|l| b.circle_parts().get(&l).map(LaurentPoly::at_identity).unwrap_or_default())
            .collect();
        for (l, c) in coeffs.iter().enumerate() {
            let sign = if l % 2 == 0 { 1 } else { -1 };
            assert_eq!(*c, binom(n as i64, l as i64) * sign);
        }
    }
}

#[test]
fn delta_case_is_the_plain_character_series() {
    let win = Window::new(-6, 6).unwrap();
    for n in 1..=3 {
        let r = IndexSeriesReport::compute(n, -1, win).unwrap();
        assert!(r.matches);
        assert!(b_poly(n, -1, 0).unwrap().is_one());
    }
}

#[test]
fn report_json_shape() {
    let r = IndexSeriesReport::compute(1, 2, Window::new(-2, 2).unwrap()).unwrap();
    let v: serde_json::Value = serde_json::to_value(&r).unwrap();
    assert_eq!(v["n"], 1);
    assert_eq!(v["k"], 2);
    assert_eq!(v["window"], serde_json::json!([-2, 2]));
    assert_eq!(v["match"], true);
    assert!(v["first_mismatch"].is_null());
    assert_eq!(v["direct"]["coeffs"].as_array().unwrap().len(), 5);
    assert_eq!(v["direct"], v["formula"]);
}
