use crate::error::{Error, Result};

/// Bisection stops once the bracket is narrower than this.
pub const FANO_TOLERANCE: f64 = 1e-10;

/// Binary entropy in bits, with `0 log 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x <= 0.0 { 0.0 } else { -x * x.log2() };
    term(p) + term(1.0 - p)
}

/// Entropy (bits) of a distribution putting `pi` on one state and spreading
/// `1 - pi` evenly over the other `m - 1`.
pub fn fano_rhs(pi: f64, m: usize) -> f64 {
    binary_entropy(pi) + (1.0 - pi) * ((m - 1) as f64).log2()
}

/// Solves `fano_rhs(pi, m) = h` for `pi` in `[1/m, 1]`.
///
/// The right-hand side decreases strictly from `log2 m` at `1/m` to `0` at
/// `1`. Entropies at or above `log2 m` give `1/m`, entropies at or below
/// zero give `1`.
pub fn fano_solve(h: f64, m: usize) -> Result<f64> {
    if m < 2 {
        return Err(Error::param(
            "M",
            format!("alphabet size must be >= 2, got {m}"),
        ));
    }
    if h.is_nan() {
        return Err(Error::param("H", "entropy is NaN"));
    }
    let floor = 1.0 / m as f64;
    if h >= (m as f64).log2() {
        return Ok(floor);
    }
    if h <= 0.0 {
        return Ok(1.0);
    }
    let (mut lo, mut hi) = (floor, 1.0);
    while hi - lo > FANO_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        if fano_rhs(mid, m) > h {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn boundary_values() {
        assert_eq!(fano_solve(0.0, 3).unwrap(), 1.0);
        assert_eq!(fano_solve(-0.5, 3).unwrap(), 1.0);
        assert_eq!(fano_solve(3f64.log2(), 3).unwrap(), 1.0 / 3.0);
        assert_eq!(fano_solve(10.0, 3).unwrap(), 1.0 / 3.0);
        assert_eq!(fano_solve(1.0, 2).unwrap(), 0.5);
    }

    #[test]
    fn binary_case() {
        // h2(0.9) computed directly.
        let h = -(0.9f64 * 0.9f64.log2() + 0.1 * 0.1f64.log2());
        assert!((h - 0.4690).abs() < 1e-4);
        assert!((fano_solve(0.4690, 2).unwrap() - 0.9).abs() < 1e-3);
        assert!((fano_solve(h, 2).unwrap() - 0.9).abs() < 1e-9);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            fano_solve(1.0, 1),
            Err(Error::Parameter { name: "M", .. })
        ));
        assert!(matches!(
            fano_solve(f64::NAN, 3),
            Err(Error::Parameter { name: "H", .. })
        ));
    }

    #[test]
    fn rhs_endpoints() {
        for m in [2usize, 3, 10, 100] {
            assert!((fano_rhs(1.0 / m as f64, m) - (m as f64).log2()).abs() < 1e-12);
            assert_eq!(fano_rhs(1.0, m), 0.0);
        }
    }

    #[test]
    fn monotone_on_grid() {
        for m in [2usize, 3, 5, 20, 100] {
            let mut prev = f64::INFINITY;
            for k in 0..=80 {
                let h = k as f64 * 0.1;
                let p = fano_solve(h, m).unwrap();
                assert!(p <= prev, "M={m} H={h}");
                prev = p;
            }
        }
        // For fixed H the root moves right as M grows (the right-hand side
        // grows with M), once M is past the clamp region log2 M <= H.
        for k in 0..=40 {
            let h = k as f64 * 0.05;
            let mut prev = 0.0;
            for m in (2..60).filter(|&m| (m as f64).log2() > h) {
                let p = fano_solve(h, m).unwrap();
                assert!(p >= prev - 1e-12, "H={h} M={m}");
                prev = p;
            }
        }
        // Inside the clamp region the answer is 1/M, decreasing in M.
        assert!(fano_solve(2.0, 4).unwrap() < fano_solve(2.0, 3).unwrap());
    }

    proptest! {
        #[test]
        fn round_trip(m in 2usize..200, t in 0.0001f64..0.9999) {
            let floor = 1.0 / m as f64;
            let pi = floor + t * (1.0 - floor);
            let back = fano_solve(fano_rhs(pi, m), m).unwrap();
            prop_assert!((back - pi).abs() <= 1e-8, "pi={} back={}", pi, back);
        }
    }
}
