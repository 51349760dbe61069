//! Counting coalition structures.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{CsgError, Result};

/// Row `Z(n, 0..=n)` of the Stirling numbers of the second kind.
pub fn stirling2_row(n: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for m in 1..=n {
        let mut next = vec![BigUint::zero(); m + 1];
        for i in 1..=m {
            let mut z = BigUint::zero();
            if i < m {
                z += &row[i] * BigUint::from(i);
            }
            z += &row[i - 1];
            next[i] = z;
        }
        row = next;
    }
    row
}

/// `Z(n, i)`: number of structures over `n` agents with exactly `i` coalitions.
pub fn stirling2(n: usize, i: usize) -> Result<BigUint> {
    if i == 0 || i > n {
        return Err(CsgError::StirlingOutOfRange { n, i });
    }
    Ok(stirling2_row(n).swap_remove(i))
}

/// Bell number: total count of coalition structures over `n` agents.
pub fn count_structures(n: usize) -> BigUint {
    stirling2_row(n).into_iter().skip(1).sum()
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for j in 0..k {
        acc *= BigUint::from(n - j);
        acc /= BigUint::from(j + 1);
    }
    acc
}
