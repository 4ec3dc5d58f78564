use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::Rational;

/// Rational vector as integer numerators over one common denominator, with
/// the positions of nonzero entries.
#[derive(Clone, Debug)]
pub struct PackedRat {
    nums: Vec<BigInt>,
    den: BigInt,
    support: Vec<usize>,
}

impl PackedRat {
    pub fn new(v: &[Rational]) -> Self {
        let mut den = BigInt::one();
        for r in v {
            if !r.is_zero() && !r.denom().is_one() {
                den = den.lcm(r.denom());
            }
        }
        let mut support = Vec::new();
        let nums = v
            .iter()
            .enumerate()
            .map(|(i, r)| {
                if r.is_zero() {
                    return BigInt::zero();
                }
                support.push(i);
                if r.denom() == &den {
                    r.numer().clone()
                } else {
                    r.numer() * (&den / r.denom())
                }
            })
            .collect();
        PackedRat { nums, den, support }
    }

    /// The one-element vector `[1]`.
    pub fn unit() -> Self {
        PackedRat {
            nums: vec![BigInt::one()],
            den: BigInt::one(),
            support: vec![0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }
}

/// Sum of convolutions kept as integers over a running common denominator.
#[derive(Clone, Debug)]
pub struct RatAcc {
    nums: Vec<BigInt>,
    den: BigInt,
    scratch: Vec<BigInt>,
    touched: bool,
}

impl RatAcc {
    pub fn new(len: usize) -> Self {
        RatAcc {
            nums: vec![BigInt::zero(); len],
            den: BigInt::one(),
            scratch: Vec::new(),
            touched: false,
        }
    }

    pub fn add_conv(&mut self, a: &PackedRat, b: &PackedRat) {
        if a.is_zero() || b.is_zero() {
            return;
        }
        let den = &a.den * &b.den;
        if !self.touched {
            self.den = den.clone();
            self.touched = true;
        }
        if den == self.den {
            for &i in &a.support {
                let ai = &a.nums[i];
                for &j in &b.support {
                    self.nums[i + j] += ai * &b.nums[j];
                }
            }
            return;
        }
        let g = self.den.gcd(&den);
        let up = &den / &g;
        let conv_factor = &self.den / &g;
        if !up.is_one() {
            for n in self.nums.iter_mut() {
                if !n.is_zero() {
                    *n *= &up;
                }
            }
            self.den *= &up;
        }
        self.scratch.clear();
        self.scratch.resize(self.nums.len(), BigInt::zero());
        for &i in &a.support {
            let ai = &a.nums[i];
            for &j in &b.support {
                self.scratch[i + j] += ai * &b.nums[j];
            }
        }
        for (n, s) in self.nums.iter_mut().zip(self.scratch.iter()) {
            if !s.is_zero() {
                *n += s * &conv_factor;
            }
        }
    }

    pub fn finish(self) -> Vec<Rational> {
        let den = self.den;
        self.nums
            .into_iter()
            .map(|n| {
                if n.is_zero() {
                    Rational::zero()
                } else {
                    Rational::new(n, den.clone())
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use proptest::prelude::*;

    fn naive(a: &[Rational], b: &[Rational], out: &mut [Rational]) {
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
    }

    proptest! {
        #[test]
        fn accumulated_convolutions_match_naive(
            pairs in prop::collection::vec(
                (prop::collection::vec((-9i64..9, 1i64..7), 4),
                 prop::collection::vec((-9i64..9, 1i64..7), 3)),
                1..5)
        ) {
            let mut acc = RatAcc::new(6);
            let mut want = vec![Rational::zero(); 6];
            for (a, b) in &pairs {
                let a: Vec<Rational> = a.iter().map(|&(n, d)| rat(n, d)).collect();
                let b: Vec<Rational> = b.iter().map(|&(n, d)| rat(n, d)).collect();
                acc.add_conv(&PackedRat::new(&a), &PackedRat::new(&b));
                naive(&a, &b, &mut want);
            }
            prop_assert_eq!(acc.finish(), want);
        }
    }
}
