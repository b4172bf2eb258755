#![no_std]

extern crate alloc;

pub mod error;
pub mod exact;
pub mod intertwiner;

pub use error::{Error, Result};

pub mod dimer;
pub mod link;
pub mod spin;
pub mod structure;
pub mod tl;
mod union_find;

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// `binomial` extended to signed arguments (zero when `k < 0` or `k > n`).
pub fn binomial_signed(n: i64, k: i64) -> u128 {
    if n < 0 || k < 0 || k > n {
        0
    } else {
        binomial(n as u64, k as u64)
    }
}
