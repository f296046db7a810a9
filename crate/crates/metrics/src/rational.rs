//! Exact-rational mirror of the scoring algebra.
//!
//! Double precision is plenty for the tables, but the algebraic identities
//! (weighted-mean value, mean of relative scores equal to one) are exact
//! statements; this mirror makes them exact in tests and audits.

use num::{One, Zero};
pub use num::{BigInt, BigRational};

/// Parses a plain decimal literal ("0.85", "1", ".5") into an exact ratio.
pub fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (sign, digits) = match s.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, s),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return None;
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part.parse().ok()?
    };
    let mut denom = BigInt::one();
    for c in frac_part.chars() {
        numer = numer * 10 + (c as u8 - b'0');
        denom *= 10;
    }
    Some(BigRational::new(numer * sign, denom))
}

/// Exact weighted mean: sum(acc_j * gsize_j) / sum(gsize_j).
pub fn u_score(points: &[(u32, BigRational)]) -> BigRational {
    let mut weighted = BigRational::zero();
    let mut total = BigRational::zero();
    for (gsize, accuracy) in points {
        let g = BigRational::from_integer(BigInt::from(*gsize));
        weighted += accuracy * &g;
        total += g;
    }
    weighted / total
}

/// Exact relative scores of one (aspect, property) cell: each unified
/// score divided by the mean over models.
pub fn relative_scores(u: &[BigRational]) -> Vec<BigRational> {
    let n = BigRational::from_integer(BigInt::from(u.len() as u64));
    let mean: BigRational = u.iter().sum::<BigRational>() / n;
    u.iter().map(|v| v / &mean).collect()
}
