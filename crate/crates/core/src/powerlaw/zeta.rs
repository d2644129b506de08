//! Hurwitz zeta function `ζ(s, q) = Σ_{k≥0} (q + k)^{−s}` for `s > 1`.

/// `B_{2j} / (2j)!` for j = 1..=8.
const BERNOULLI_OVER_FACTORIAL: [f64; 8] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40_320.0,
    5.0 / 66.0 / 3_628_800.0,
    -691.0 / 2730.0 / 479_001_600.0,
    7.0 / 6.0 / 87_178_291_200.0,
    -3617.0 / 510.0 / 20_922_789_888_000.0,
];

/// Shift point of the Euler–Maclaurin expansion; terms below it are summed
/// directly.
const DIRECT_SUM_BOUND: f64 = 15.0;

/// Euler–Maclaurin evaluation, accurate to about 1e−13 relative for
/// `1 < s ≤ 20` and `q > 0`.
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    debug_assert!(s > 1.0 && q > 0.0);
    let mut sum = 0.0;
    let mut a = q;
    while a < DIRECT_SUM_BOUND {
        sum += a.powf(-s);
        a += 1.0;
    }
    let a_pow = a.powf(-s);
    sum += a * a_pow / (s - 1.0) + 0.5 * a_pow;
    // term_j = B2j/(2j)! * s(s+1)...(s+2j-2) * a^(-s-2j+1)
    let inv_a2 = 1.0 / (a * a);
    let mut rising = s;
    let mut power = a_pow / a;
    for (j, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += coeff * rising * power;
        let k = 2.0 * j as f64;
        rising *= (s + k + 1.0) * (s + k + 2.0);
        power *= inv_a2;
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::excessive_precision)]
    fn matches_reference_values() {
        // 20-digit values from an arbitrary-precision library
        let cases = [
            (2.5, 1.0, 1.3414872572509171798),
            (2.5, 5.0, 0.069310532044321880378),
            (2.18, 16.0, 0.033368224936720691143),
            (1.5, 1.0, 2.6123753486854883433),
            (6.0, 1.0, 1.0173430619844491397),
            (3.0, 100.0, 0.0000505024999166749985),
            (1.01, 2.0, 99.577943338496783673),
            (2.0, 1.0, 1.6449340668482264365),
            (4.3, 7.5, 0.00048695906259792201851),
            (2.5, 1000.0, 0.000021097669044166766758),
        ];
        for (s, q, expected) in cases {
            let got = hurwitz_zeta(s, q);
            assert!(((got - expected) / expected).abs() < 1e-12, "zeta({s}, {q}) = {got}, want {expected}");
        }
    }

    #[test]
    fn shift_identity() {
        for &s in &[1.2, 2.5, 5.9] {
            for q in 1..40 {
                let q = q as f64;
                let lhs = hurwitz_zeta(s, q) - hurwitz_zeta(s, q + 1.0);
                assert!(((lhs - q.powf(-s)) / q.powf(-s)).abs() < 1e-9);
            }
        }
    }
}
