//! Binomial probabilities by multiplicative recurrence.
//!
//! A tail sum starts at its boundary term, the largest one, whose log is
//! evaluated once. The remaining terms follow from the ratio
//! `i / (j - i + 1) * (1 - p) / p` in plain arithmetic and the loop stops once
//! they no longer change the sum. Only the tail away from the mode is summed;
//! the other is its complement, so the two always add up to 1.

use crate::error::{Error, Result};

/// `j` above which a term-by-term evaluation starting from `(1 - p)^j` would
/// underflow for moderate `p`; kept for reference by callers sizing tables.
pub const LINEAR_MAX_TRIALS: u32 = 2000;

fn check_p(p: f64) -> Result<()> {
    if p.is_finite() && (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p))
    }
}

/// `P(Bin(j, p) < omega)`.
pub fn binom_tail_below(j: u32, p: f64, omega: u32) -> Result<f64> {
    check_p(p)?;
    Ok(tail_below(j, p, omega))
}

/// `P(Bin(j, p) >= omega)`, computed as `P(Bin(j, 1 - p) <= j - omega)`.
pub fn binom_tail_at_least(j: u32, p: f64, omega: u32) -> Result<f64> {
    check_p(p)?;
    Ok(tail_at_least(j, p, omega))
}

/// `P(Bin(j, p) = i)`.
pub fn binom_pmf(j: u32, i: u32, p: f64) -> Result<f64> {
    check_p(p)?;
    Ok(pmf(j, i, p))
}

pub(crate) fn tail_at_least(j: u32, p: f64, omega: u32) -> f64 {
    if omega == 0 {
        return 1.0;
    }
    if omega > j {
        return 0.0;
    }
    tail_below(j, 1.0 - p, j - omega + 1)
}

pub(crate) fn tail_below(j: u32, p: f64, omega: u32) -> f64 {
    if omega == 0 {
        return 0.0;
    }
    if omega > j {
        return 1.0;
    }
    if p == 0.0 {
        return 1.0;
    }
    if p == 1.0 {
        return 0.0;
    }
    if (omega - 1) as f64 >= j as f64 * p {
        1.0 - lower_sum(j, 1.0 - p, j - omega + 1)
    } else {
        lower_sum(j, p, omega)
    }
}

/// `P(Bin(j, p) <= b)` with `b = omega - 1` below the mean `j p`, summed
/// downward from the term at `b`.
fn lower_sum(j: u32, p: f64, omega: u32) -> f64 {
    let b = omega - 1;
    let top = log_pmf(j, b, p);
    if top < -745.0 {
        return 0.0;
    }
    let odds = (1.0 - p) / p;
    let (mut rel, mut sum) = (1.0f64, 1.0f64);
    for i in (1..=b).rev() {
        rel *= i as f64 / (j - i + 1) as f64 * odds;
        sum += rel;
        if rel < f64::EPSILON * 1e-3 * sum {
            break;
        }
    }
    (top.exp() * sum).clamp(0.0, 1.0)
}

/// Compensated sum; the log-binomial adds up to `j / 2` terms.
fn neumaier(terms: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in terms {
        let t = sum + x;
        comp += if sum.abs() >= x.abs() { (sum - t) + x } else { (x - t) + sum };
        sum = t;
    }
    sum + comp
}

/// `ln C(j, i) + i ln p + (j - i) ln(1 - p)` for `0 < p < 1`.
fn log_pmf(j: u32, i: u32, p: f64) -> f64 {
    let k = i.min(j - i);
    let log_c = neumaier((0..k).map(|r| ((j - r) as f64 / (r + 1) as f64).ln()));
    neumaier([log_c, i as f64 * p.ln(), (j - i) as f64 * (-p).ln_1p()].into_iter())
}

pub(crate) fn pmf(j: u32, i: u32, p: f64) -> f64 {
    if i > j {
        return 0.0;
    }
    if p == 0.0 {
        return if i == 0 { 1.0 } else { 0.0 };
    }
    if p == 1.0 {
        return if i == j { 1.0 } else { 0.0 };
    }
    log_pmf(j, i, p).exp()
}
