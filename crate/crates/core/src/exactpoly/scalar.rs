use std::fmt;

use num_traits::{One, Zero};

use super::packed::{PackedRat, RatAcc};
use super::Rational;

/// Coefficient ring for [`BivarPoly`](super::BivarPoly) and the saddle-value
/// engines.
///
/// Some scalars carry shape (a jet has a truncation order); `Ctx` captures
/// that shape so zeros and constants can be built without a sample value.
/// Mixing scalars whose contexts differ is a caller error; polynomial-level
/// operations check contexts and report a mismatch instead of panicking.
pub trait Scalar: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    type Ctx: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn ctx(&self) -> Self::Ctx;
    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_rational(r: &Rational, ctx: &Self::Ctx) -> Self;
    fn vanishes(&self) -> bool;

    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplies by a rational constant.
    fn scale(&self, r: &Rational) -> Self;

    fn add_assign_ref(&mut self, other: &Self) {
        *self = self.add_ref(other);
    }

    /// `self += a * b`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        let prod = a.mul_ref(b);
        self.add_assign_ref(&prod);
    }

    /// Coefficient vector prepared for repeated convolution.
    type Packed: Clone + fmt::Debug + Send + Sync;
    /// Running sum of convolutions of packed vectors.
    type Acc;

    fn pack(v: &[Self]) -> Self::Packed;
    fn acc_new(len: usize, ctx: &Self::Ctx) -> Self::Acc;
    /// `acc[i + j] += a[i] * b[j]`.
    fn acc_conv(acc: &mut Self::Acc, a: &Self::Packed, b: &Self::Packed);
    /// `acc += v`.
    fn acc_add(acc: &mut Self::Acc, v: &[Self]);
    fn acc_finish(acc: Self::Acc) -> Vec<Self>;
}

impl Scalar for Rational {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero_in(_: &()) -> Self {
        Zero::zero()
    }

    fn one_in(_: &()) -> Self {
        One::one()
    }

    fn from_rational(r: &Rational, _: &()) -> Self {
        r.clone()
    }

    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }

    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn neg_ref(&self) -> Self {
        -self
    }

    fn scale(&self, r: &Rational) -> Self {
        self * r
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    type Packed = PackedRat;
    type Acc = RatAcc;

    fn pack(v: &[Self]) -> PackedRat {
        PackedRat::new(v)
    }

    fn acc_new(len: usize, _: &()) -> RatAcc {
        RatAcc::new(len)
    }

    fn acc_conv(acc: &mut RatAcc, a: &PackedRat, b: &PackedRat) {
        acc.add_conv(a, b);
    }

    fn acc_add(acc: &mut RatAcc, v: &[Self]) {
        acc.add_conv(&PackedRat::new(v), &PackedRat::unit());
    }

    fn acc_finish(acc: RatAcc) -> Vec<Self> {
        acc.finish()
    }
}
