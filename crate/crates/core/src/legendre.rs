//! Shifted Legendre polynomials `Q_k(t) = P_k(2t - 1)` on `[0, 1]`.
//!
//! Evaluation uses Bonnet's three-term recurrence at `x = 2t - 1`.
//! Antiderivatives come from `Q_k = (Q'_{k+1} - Q'_{k-1}) / (2(2k+1))`, so
//! `∫_0^t Q_k = (Q_{k+1}(t) - Q_{k-1}(t)) / (2(2k+1))` for `k ≥ 1`.

use alloc::vec::Vec;

use crate::error::{check_unit, Error, Result};

/// `Q_k(t)`.
pub fn eval_q(k: usize, t: f64) -> Result<f64> {
    check_unit("t", t)?;
    Ok(bonnet(k, 2.0 * t - 1.0).1)
}

/// `Q_0(t), …, Q_{max_k}(t)`.
pub fn eval_q_all(max_k: usize, t: f64) -> Result<Vec<f64>> {
    check_unit("t", t)?;
    let x = 2.0 * t - 1.0;
    let mut out = Vec::with_capacity(max_k + 1);
    out.push(1.0);
    if max_k >= 1 {
        out.push(x);
    }
    for k in 1..max_k {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0);
        out.push(next);
    }
    Ok(out)
}

/// `∫_0^t Q_k(r) dr` for `k ≥ 1`.
pub fn integral_q(k: usize, t: f64) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("integral_q needs k >= 1"));
    }
    check_unit("t", t)?;
    let x = 2.0 * t - 1.0;
    let (prev, cur) = bonnet(k, x);
    let kf = k as f64;
    let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
    Ok((next - prev) / (2.0 * (2 * k + 1) as f64))
}

/// `∫_0^t Q_k` for `k = 1..=max_k`; index 0 of the result is unused (zero).
pub fn integral_q_all(max_k: usize, t: f64) -> Result<Vec<f64>> {
    let q = eval_q_all(max_k + 1, t)?;
    let mut out = alloc::vec![0.0; max_k + 1];
    for k in 1..=max_k {
        out[k] = (q[k + 1] - q[k - 1]) / (2.0 * (2 * k + 1) as f64);
    }
    Ok(out)
}

/// `∫_0^1 (∫_0^t Q_k) d(∫_0^t Q_l)` for `k, l ≥ 1`.
///
/// Non-zero only for `|k - l| = 1`; this tridiagonal structure is what turns
/// the polynomial expansion of `∫ B dB` into the nearest-neighbour sum of the
/// polynomial Lévy-area formula.
pub fn cross_integral(k: usize, l: usize) -> Result<f64> {
    if k == 0 || l == 0 {
        return Err(Error::InvalidArgument("cross_integral needs k, l >= 1"));
    }
    let k64 = k as u64;
    Ok(if l == k + 1 {
        1.0 / (2 * (2 * k64 + 1) * (2 * k64 + 3)) as f64
    } else if l + 1 == k {
        -1.0 / (2 * (2 * k64 + 1) * (2 * k64 - 1)) as f64
    } else {
        0.0
    })
}

/// Returns `(P_{k-1}(x), P_k(x))`, with `P_{-1} := 0`.
fn bonnet(k: usize, x: f64) -> (f64, f64) {
    if k == 0 {
        return (0.0, 1.0);
    }
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 1..k {
        let jf = j as f64;
        let p2 = ((2.0 * jf + 1.0) * x * p1 - jf * p0) / (jf + 1.0);
        p0 = p1;
        p1 = p2;
    }
    (p0, p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::GaussLegendre;

    #[test]
    fn low_degree_values() {
        assert_eq!(eval_q(0, 0.3).unwrap(), 1.0);
        assert_eq!(eval_q(1, 0.5).unwrap(), 0.0);
        assert_eq!(eval_q(4, 0.0).unwrap(), 1.0);
        assert_eq!(eval_q(3, 0.0).unwrap(), -1.0);
        assert_eq!(eval_q(7, 1.0).unwrap(), 1.0);
        // Q_2(t) = 6t² - 6t + 1
        let t = 0.37;
        assert!((eval_q(2, t).unwrap() - (6.0 * t * t - 6.0 * t + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn endpoint_identities() {
        for k in 0..=30 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert!((eval_q(k, 0.0).unwrap() - sign).abs() <= 1e-12);
            assert!((eval_q(k, 1.0).unwrap() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(eval_q(2, -0.1), Err(Error::Domain { .. })));
        assert!(matches!(eval_q(2, f64::NAN), Err(Error::Domain { .. })));
        assert!(integral_q(0, 0.5).is_err());
        assert!(integral_q(2, 1.5).is_err());
        assert!(cross_integral(0, 1).is_err());
    }

    #[test]
    fn integral_examples() {
        assert_eq!(integral_q(1, 1.0).unwrap(), 0.0);
        assert_eq!(integral_q(5, 0.0).unwrap(), 0.0);
        // quadrature of 2r - 1 over [0, 0.5]
        let g = GaussLegendre::new(4);
        let oracle = g.integrate(0.0, 0.5, |r| 2.0 * r - 1.0);
        assert!((oracle + 0.25).abs() < 1e-15);
        assert!((integral_q(1, 0.5).unwrap() - oracle).abs() < 1e-15);
    }

    #[test]
    fn integral_over_unit_interval_vanishes() {
        for k in 1..=40 {
            assert_eq!(integral_q(k, 1.0).unwrap(), 0.0, "k={k}");
        }
    }

    #[test]
    fn batch_evaluation_matches_single() {
        let t = 0.813;
        let q = eval_q_all(25, t).unwrap();
        let iq = integral_q_all(25, t).unwrap();
        for k in 0..=25 {
            assert_eq!(q[k], eval_q(k, t).unwrap());
        }
        for k in 1..=25 {
            assert!((iq[k] - integral_q(k, t).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn cross_integral_examples() {
        assert!((cross_integral(1, 2).unwrap() - 1.0 / 30.0).abs() < 1e-17);
        assert!((cross_integral(2, 1).unwrap() + 1.0 / 30.0).abs() < 1e-17);
        assert_eq!(cross_integral(1, 3).unwrap(), 0.0);
        assert_eq!(cross_integral(4, 4).unwrap(), 0.0);
    }

    #[test]
    fn cross_integral_antisymmetric() {
        for k in 1..=30 {
            for l in 1..=30 {
                assert_eq!(cross_integral(k, l).unwrap(), -cross_integral(l, k).unwrap());
            }
        }
    }

    #[test]
    fn cross_integral_matches_quadrature() {
        // ∫_0^1 Q_l(t) ∫_0^t Q_k dt, integrand of degree k + l + 1
        let g = GaussLegendre::new(64);
        for k in 1..=12 {
            for l in 1..=12 {
                let q = g.integrate(0.0, 1.0, |t| {
                    eval_q(l, t).unwrap() * integral_q(k, t).unwrap()
                });
                assert!((q - cross_integral(k, l).unwrap()).abs() < 1e-14, "k={k} l={l}");
            }
        }
    }

    #[test]
    fn orthogonality_by_quadrature() {
        let g = GaussLegendre::new(64);
        for k in 0..=20 {
            for l in 0..=20 {
                let ip = g.integrate(0.0, 1.0, |t| eval_q(k, t).unwrap() * eval_q(l, t).unwrap());
                let expect = if k == l { 1.0 / (2 * k + 1) as f64 } else { 0.0 };
                assert!((ip - expect).abs() <= 1e-10, "k={k} l={l}: {ip}");
            }
        }
    }

    #[test]
    fn antiderivative_by_central_difference() {
        let h = 1e-5;
        for k in [1, 2, 5, 11, 20] {
            for i in 1..=50 {
                let t = i as f64 / 51.0;
                let d = (integral_q(k, t + h).unwrap() - integral_q(k, t - h).unwrap()) / (2.0 * h);
                assert!((d - eval_q(k, t).unwrap()).abs() < 1e-6, "k={k} t={t}");
            }
        }
    }
}
