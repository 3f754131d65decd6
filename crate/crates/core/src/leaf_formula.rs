//! The leaf function of the kite/dart adjacency graph: largest number of
//! leaves of an induced subtree with `n` vertices.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("k = {k} outside [1, {n})")]
    DomainError { n: u64, k: u64 },
}

/// 0 for n ≤ 1, ⌊n/2⌋+1 up to 18, then period 17 with increment 8.
pub fn leaf_recursive(n: u64) -> u64 {
    if n <= 1 {
        return 0;
    }
    // unwind n -> n - 17 until it lands in the base range 2..=18
    let steps = if n > 18 { (n - 2) / 17 } else { 0 };
    let base = n - 17 * steps;
    base / 2 + 1 + 8 * steps
}

/// Closed form by `q = ⌊n/17⌋`, `r = n mod 17`.
///
/// For `n ≥ 36` and `r ∈ {0, 1}` the base value is `L(17 + r)`, not `L(r)`:
/// the period only starts at 2, so those residues gain one extra leaf over
/// the literal closed form (see [`leaf_closed_published`]).
pub fn leaf_closed(n: u64) -> u64 {
    match n {
        0..=1 => 0,
        2..=18 => n / 2 + 1,
        19..=35 => n.div_ceil(2),
        _ => {
            let (q, r) = (n / 17, n % 17);
            if r <= 1 {
                8 * q + 1 + r
            } else {
                8 * q + r / 2 + 1
            }
        }
    }
}

/// The four-case closed form exactly as usually quoted, with
/// `8q + ⌊r/2⌋ + [r > 1]` for `n ≥ 36`. Disagrees with the recursion at
/// every `n ≥ 51` with `n mod 17 ∈ {0, 1}`.
pub fn leaf_closed_published(n: u64) -> u64 {
    match n {
        0..=1 => 0,
        2..=18 => n / 2 + 1,
        19..=35 => n.div_ceil(2),
        _ => {
            let (q, r) = (n / 17, n % 17);
            8 * q + r / 2 + u64::from(r > 1)
        }
    }
}

/// `L(n - k) + ⌈k/2⌉`, an upper bound on `L(n)`.
pub fn upper_bound_k(n: u64, k: u64) -> Result<u64, FormulaError> {
    if k == 0 || k >= n {
        return Err(FormulaError::DomainError { n, k });
    }
    Ok(leaf_closed(n - k) + k.div_ceil(2))
}

/// First `n ≤ limit` where the closed form disagrees with the recursion, or
/// where the recursion breaks the step rules `L(n) - L(n-1) ∈ {0,1}` and
/// `L(n) ≤ L(n-2) + 1`.
pub fn check_equivalence(limit: u64) -> Result<(), u64> {
    check_equivalence_with(limit, leaf_closed)
}

pub fn check_equivalence_with(limit: u64, closed: impl Fn(u64) -> u64) -> Result<(), u64> {
    let mut prev = [0u64; 2];
    for n in 0..=limit {
        let l = leaf_recursive(n);
        if closed(n) != l {
            return Err(n);
        }
        let step_ok = n < 3 || (l >= prev[1] && l <= prev[1] + 1);
        if !step_ok || (n >= 4 && l > prev[0] + 1) {
            return Err(n);
        }
        prev = [prev[1], l];
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_values() {
        assert_eq!(leaf_recursive(0), 0);
        assert_eq!(leaf_recursive(12), 7);
        assert_eq!(leaf_recursive(19), 10);
        assert_eq!(leaf_recursive(116), 56);
        assert_eq!(leaf_recursive(133), 64);
        assert_eq!(leaf_recursive(830), 392);
        assert_eq!(leaf_recursive(1_000_000), 470_589);
        assert_eq!(leaf_closed(35), 18);
        assert_eq!(leaf_closed(36), 18);
        assert_eq!(leaf_closed(17), 9);
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(upper_bound_k(20, 1), Ok(11));
        assert_eq!(upper_bound_k(20, 2), Ok(11));
        assert_eq!(upper_bound_k(19, 17), Ok(11));
        assert_eq!(upper_bound_k(5, 5), Err(FormulaError::DomainError { n: 5, k: 5 }));
        assert!(upper_bound_k(5, 0).is_err());
    }

    #[test]
    fn published_form_fails_only_on_two_residues() {
        assert_eq!(check_equivalence_with(10_000, leaf_closed_published), Err(51));
        for n in 0..5_000 {
            let agree = leaf_closed_published(n) == leaf_recursive(n);
            assert_eq!(agree, n < 51 || n % 17 > 1, "n = {n}");
        }
        assert_eq!(leaf_recursive(52), 26);
        assert_eq!(leaf_closed_published(52), 24);
    }

    #[test]
    fn small_range_equivalence() {
        assert_eq!(check_equivalence(18), Ok(()));
        assert_eq!(check_equivalence(10_000), Ok(()));
    }
}
