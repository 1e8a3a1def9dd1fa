//! Pairwise (tree) summation in a fixed order.

use num_complex::Complex64 as C64;

const BLOCK: usize = 32;

pub(crate) trait Summand: Copy + std::ops::Add<Output = Self> {
    const ZERO: Self;
}

impl Summand for f64 {
    const ZERO: Self = 0.0;
}

impl Summand for C64 {
    const ZERO: Self = C64 { re: 0.0, im: 0.0 };
}

/// Sums `xs` left to right in blocks of 32, combining blocks as a balanced tree.
pub(crate) fn pairwise<T: Summand>(xs: &[T]) -> T {
    if xs.len() <= BLOCK {
        return xs.iter().fold(T::ZERO, |acc, &x| acc + x);
    }
    let mid = (xs.len() / 2).div_ceil(BLOCK) * BLOCK;
    let mid = mid.min(xs.len() - 1);
    pairwise(&xs[..mid]) + pairwise(&xs[mid..])
}

/// Pairwise sum of `f(i)` for `i in 0..n` without materializing the terms.
pub(crate) fn pairwise_map<T: Summand>(n: usize, f: &impl Fn(usize) -> T) -> T {
    fn go<T: Summand>(lo: usize, hi: usize, f: &impl Fn(usize) -> T) -> T {
        if hi - lo <= BLOCK {
            return (lo..hi).fold(T::ZERO, |acc, i| acc + f(i));
        }
        let mid = lo + ((hi - lo) / 2).div_ceil(BLOCK) * BLOCK;
        let mid = mid.min(hi - 1);
        go(lo, mid, f) + go(mid, hi, f)
    }
    if n == 0 {
        T::ZERO
    } else {
        go(0, n, f)
    }
}

pub(crate) fn norm_sqr(xs: &[C64]) -> f64 {
    pairwise_map(xs.len(), &|i| xs[i].norm_sqr())
}
