//! Closed-form split counts of the DP and IDP table fills.

use num_bigint::BigUint;
use num_traits::Zero;

use crate::counting::binomial;

/// Number of ways to split a coalition of `s1 + s2` agents into parts of
/// sizes `s1` and `s2`, counting `{A, B}` once when the sizes are equal.
pub fn split_count(s1: usize, s2: usize) -> BigUint {
    let c = binomial(s1 + s2, s2);
    if s1 == s2 {
        c / 2u32
    } else {
        c
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitCounts {
    pub dp: BigUint,
    pub idp: BigUint,
}

/// Total splits evaluated by DP and by IDP over `n` agents.
///
/// A coalition of size `s` is split into parts of sizes `s - k` and `k` for
/// `k = ceil(s/2) ..= s-1`; IDP keeps only those with `k <= n - s` or `s = n`.
pub fn splitting_counts(n: usize) -> SplitCounts {
    let mut dp = BigUint::zero();
    let mut idp = BigUint::zero();
    for s in 1..=n {
        let coalitions = binomial(n, s);
        let mut all = BigUint::zero();
        let mut kept = BigUint::zero();
        for k in s.div_ceil(2)..s {
            let c = split_count(s - k, k);
            if k <= n - s || s == n {
                kept += &c;
            }
            all += c;
        }
        dp += &coalitions * all;
        idp += &coalitions * kept;
    }
    SplitCounts { dp, idp }
}

/// Whether IDP evaluates a split of a size-`s` coalition whose larger part has `larger` agents.
#[inline]
pub(crate) fn idp_keeps(n: usize, s: usize, larger: usize) -> bool {
    s == n || larger <= n - s
}
