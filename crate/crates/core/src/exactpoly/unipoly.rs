use std::fmt;

use num_traits::{One, Zero};

use super::{format_rational, Rational, Scalar};

/// Dense univariate polynomial in a parameter (the deformation parameter
/// `mu` of the unit factor), coefficients ascending, no trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The parameter itself.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * at + c)
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{}", format_rational(c))?,
                1 => write!(f, "{}*mu", format_rational(c))?,
                _ => write!(f, "{}*mu^{}", format_rational(c), k)?,
            }
        }
        Ok(())
    }
}

impl Scalar for UniPoly {
    type Ctx = ();

    fn ctx(&self) {}

    fn zero_in(_: &()) -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    fn one_in(_: &()) -> Self {
        Self::constant(Rational::one())
    }

    fn from_rational(r: &Rational, _: &()) -> Self {
        Self::constant(r.clone())
    }

    fn vanishes(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_ref(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Self::zero_in(&());
        out.mul_add_assign(self, other);
        out
    }

    fn neg_ref(&self) -> Self {
        UniPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| c * r).collect())
    }

    fn add_assign_ref(&mut self, other: &Self) {
        if self.coeffs.len() < other.coeffs.len() {
            self.coeffs.resize(other.coeffs.len(), Rational::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return;
        }
        let len = a.coeffs.len() + b.coeffs.len() - 1;
        if self.coeffs.len() < len {
            self.coeffs.resize(len, Rational::zero());
        }
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                if !bj.is_zero() {
                    self.coeffs[i + j] += ai * bj;
                }
            }
        }
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    type Packed = Vec<UniPoly>;
    type Acc = Vec<UniPoly>;

    fn pack(v: &[Self]) -> Vec<UniPoly> {
        v.to_vec()
    }

    fn acc_new(len: usize, _: &()) -> Vec<UniPoly> {
        vec![UniPoly::default(); len]
    }

    fn acc_conv(acc: &mut Vec<UniPoly>, a: &Vec<UniPoly>, b: &Vec<UniPoly>) {
        for (i, ai) in a.iter().enumerate() {
            if ai.vanishes() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                acc[i + j].mul_add_assign(ai, bj);
            }
        }
    }

    fn acc_add(acc: &mut Vec<UniPoly>, v: &[Self]) {
        for (a, x) in acc.iter_mut().zip(v) {
            a.add_assign_ref(x);
        }
    }

    fn acc_finish(acc: Vec<UniPoly>) -> Vec<Self> {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn arithmetic_and_eval() {
        let mu = UniPoly::var();
        let a = UniPoly::one_in(&()).add_ref(&mu); // 1 + mu
        let sq = a.mul_ref(&a);
        assert_eq!(sq.coeffs(), &[rat(1, 1), rat(2, 1), rat(1, 1)]);
        assert_eq!(sq.eval(&rat(1, 2)), rat(9, 4));
        assert!(a.sub_ref(&a).vanishes());
        assert_eq!(sq.to_string(), "1*mu^2 + 2*mu + 1");
    }
}
