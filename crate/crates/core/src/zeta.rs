//! Sine moments `e_{k,n} = ∫_0^1 2 sin²(kπt) tⁿ dt`, Bernoulli numbers,
//! `ζ(2n)` and the tails `Σ_{k≥n} 1/k²`.
//!
//! Summing the moment relation `Σ_k e_{k,n} / (k²π²) = 1 / ((n+2)(n+3))`
//! against the closed form of `e_{k,n}` and comparing with the Bernoulli
//! recurrence is what pins down `ζ(2n)`; the functions here expose every
//! piece of that chain so each can be checked numerically.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::dd::{self, Dd};
use crate::error::{Error, Result};
use crate::math::{exp, ln, PI};
use crate::sum::KahanSum;

/// `4 k² π²` in double-double.
fn four_k2_pi2(k: u64) -> Dd {
    dd::PI * dd::PI * (4.0 * (k as f64) * (k as f64))
}

/// `e_{k,n}` through the two-step recurrence
/// `e_{k,n} = 1/(n+1) - n(n-1)/(4k²π²) e_{k,n-2}`, `e_{k,0} = 1`, `e_{k,1} = 1/2`.
///
/// The recurrence is run in double-double: for `n ≳ 2kπ` each step multiplies
/// the previous error by more than one.
pub fn moment_e(k: u64, n: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("moment_e needs k >= 1"));
    }
    let inv = four_k2_pi2(k).recip();
    let mut e = if n % 2 == 0 { Dd::from_f64(1.0) } else { Dd::from_f64(0.5) };
    let mut m = if n % 2 == 0 { 2 } else { 3 };
    while m <= n {
        let mf = m as f64;
        e = Dd::from_f64(1.0) / (mf + 1.0) - inv * (mf * (mf - 1.0)) * e;
        m += 2;
    }
    Ok(e.to_f64())
}

/// `e_{k,n}` from the explicit finite sums (even and odd `n` separately),
/// evaluated in double-double.
pub fn moment_e_closed(k: u64, n: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("moment_e_closed needs k >= 1"));
    }
    // y = 1/(k²π²); the j-th term carries (-1)^j y^j / 2^{2j} times a ratio
    // of factorials that is updated term by term.
    let y = (dd::PI * dd::PI * ((k as f64) * (k as f64))).recip();
    let m = (n / 2) as i64;
    let odd = n % 2 == 1;
    let mut term = Dd::from_f64(1.0) / (n as f64 + 1.0);
    let mut acc = term;
    for j in 1..=m {
        // (2m)!/(2(m-j)+1)! over (2m)!/(2(m-j)+3)!  = (2(m-j)+3)(2(m-j)+2), shifted by one if odd
        let base = 2 * (m - j) + if odd { 3 } else { 2 };
        let ratio = ((base + 1) * base) as f64 / 4.0;
        term = -(term * y * ratio);
        acc = acc + term;
    }
    Ok(acc.to_f64())
}

/// `|Σ_{k=1}^{K} e_{k,n}/(k²π²) - 1/((n+2)(n+3))|`.
pub fn moment_identity_residual(n: u32, terms: u64) -> Result<f64> {
    if terms == 0 {
        return Err(Error::InvalidArgument("moment_identity_residual needs K >= 1"));
    }
    let mut acc = KahanSum::new();
    for k in 1..=terms {
        let kpi = k as f64 * PI;
        acc.add(moment_e(k, n)? / (kpi * kpi));
    }
    let target = 1.0 / ((n as f64 + 2.0) * (n as f64 + 3.0));
    Ok((acc.value() - target).abs())
}

/// Exact Bernoulli numbers `B_1, …, B_max` (convention `B_1 = -1/2`).
#[derive(Debug, Clone)]
pub struct BernoulliTable {
    // values[m] = B_m; values[0] = B_0 = 1
    values: Vec<BigRational>,
}

fn binomial_row(n: u64) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    row.push(c.clone());
    for k in 0..n {
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
        row.push(c.clone());
    }
    row
}

impl BernoulliTable {
    pub fn max_index(&self) -> usize {
        self.values.len() - 1
    }

    /// `B_m` for `1 ≤ m ≤ max_index()`.
    pub fn get(&self, m: usize) -> &BigRational {
        assert!(m >= 1 && m <= self.max_index(), "Bernoulli index {m} out of range");
        &self.values[m]
    }

    pub fn to_f64(&self, m: usize) -> f64 {
        self.get(m).to_f64().unwrap_or(f64::NAN)
    }

    /// `1 + Σ_{n=1}^{m} C(m+1, n) B_n`, zero for every valid table.
    pub fn recurrence_residual(&self, m: usize) -> BigRational {
        assert!(m >= 1 && m <= self.max_index());
        let row = binomial_row(m as u64 + 1);
        let mut acc = BigRational::one();
        for n in 1..=m {
            acc += BigRational::from_integer(row[n].clone()) * &self.values[n];
        }
        acc
    }

    /// `Σ_{n=1}^{m} C(2m+1, 2n) B_{2n} - (2m-1)/2`, zero for every valid table.
    pub fn even_residual(&self, m: usize) -> BigRational {
        assert!(m >= 1 && 2 * m <= self.max_index());
        let row = binomial_row(2 * m as u64 + 1);
        let mut acc = BigRational::zero();
        for n in 1..=m {
            acc += BigRational::from_integer(row[2 * n].clone()) * &self.values[2 * n];
        }
        acc - BigRational::new(BigInt::from(2 * m as i64 - 1), BigInt::from(2))
    }
}

/// Solves `1 + Σ_{n=1}^{m} C(m+1, n) B_n = 0` for `m = 1..=max_m` in exact
/// rational arithmetic.
pub fn bernoulli(max_m: usize) -> Result<BernoulliTable> {
    if max_m == 0 {
        return Err(Error::InvalidArgument("bernoulli needs max_m >= 1"));
    }
    let mut values: Vec<BigRational> = Vec::with_capacity(max_m + 1);
    values.push(BigRational::one());
    for m in 1..=max_m {
        let row = binomial_row(m as u64 + 1);
        let mut acc = BigRational::one();
        for n in 1..m {
            if !values[n].is_zero() {
                acc += BigRational::from_integer(row[n].clone()) * &values[n];
            }
        }
        // C(m+1, m) = m + 1
        let bm = -acc / BigRational::from_integer(BigInt::from(m as u64 + 1));
        values.push(bm);
    }
    Ok(BernoulliTable { values })
}

/// `ζ(2n)` for `n ≥ 1`.
pub fn zeta_even(n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("zeta_even needs n >= 1"));
    }
    let table = bernoulli(2 * n as usize)?;
    zeta_even_from(&table, n)
}

/// `ζ(2n) = (-1)^{n+1} (2π)^{2n} B_{2n} / (2 (2n)!)` using a precomputed table.
pub fn zeta_even_from(table: &BernoulliTable, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("zeta_even needs n >= 1"));
    }
    let two_n = 2 * n as usize;
    if two_n > table.max_index() {
        return Err(Error::InvalidArgument("Bernoulli table too short for zeta_even"));
    }
    // r = 2^{2n-1} |B_{2n}| / (2n)!, exact; ζ(2n) = r π^{2n}.
    let mut fact = BigInt::one();
    for j in 2..=two_n as u64 {
        fact *= BigInt::from(j);
    }
    let b = table.get(two_n).abs();
    let r = b * BigRational::from_integer(BigInt::one() << (two_n - 1)) / BigRational::from_integer(fact);
    if n <= 100 {
        let mut pow = Dd::from_f64(1.0);
        for _ in 0..two_n {
            pow = pow * dd::PI;
        }
        let (r_hi, r_lo) = split_rational(&r);
        Ok((pow * Dd { hi: r_hi, lo: r_lo }).to_f64())
    } else {
        // π^{2n} overflows long before the product does; go through logs.
        Ok(exp(ln_rational(&r) + two_n as f64 * ln(PI)))
    }
}

/// Nearest f64 to `r` plus a correction term, i.e. `r` as a double-double.
fn split_rational(r: &BigRational) -> (f64, f64) {
    let hi = r.to_f64().unwrap_or(f64::NAN);
    let hi_exact = BigRational::from_float(hi).unwrap_or_else(BigRational::zero);
    let lo = (r - hi_exact).to_f64().unwrap_or(0.0);
    (hi, lo)
}

fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint(r.numer()) - ln_bigint(r.denom())
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return ln(x.to_f64().unwrap_or(f64::NAN));
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    ln(top.to_f64().unwrap_or(f64::NAN)) + shift as f64 * core::f64::consts::LN_2
}

/// `Σ_{k=n}^∞ 1/k² = ζ(2) - Σ_{k=1}^{n-1} 1/k²`, the partial sum compensated.
pub fn tail_inv_sq(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("tail_inv_sq needs n >= 1"));
    }
    let zeta2 = zeta2();
    let mut acc = KahanSum::new();
    acc.add(zeta2.hi);
    acc.add(zeta2.lo);
    for k in 1..n {
        let kf = k as f64;
        acc.add(-1.0 / (kf * kf));
    }
    Ok(acc.value())
}

/// Tails `Σ_{k≥j} 1/k²` for every `j = 1..=n`, in one pass.
pub fn tail_inv_sq_table(n: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidArgument("tail_inv_sq_table needs n >= 1"));
    }
    let zeta2 = zeta2();
    let mut acc = KahanSum::new();
    acc.add(zeta2.hi);
    acc.add(zeta2.lo);
    let mut out = Vec::with_capacity(n as usize + 1);
    out.push(f64::NAN);
    out.push(acc.value());
    for k in 1..n {
        let kf = k as f64;
        acc.add(-1.0 / (kf * kf));
        out.push(acc.value());
    }
    Ok(out)
}

// ζ(2) via the Bernoulli route, as a double-double (B_2 = 1/6 is cheap).
fn zeta2() -> Dd {
    dd::PI * dd::PI / 6.0
}
