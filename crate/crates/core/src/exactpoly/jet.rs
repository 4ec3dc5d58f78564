use std::fmt;

use num_traits::Zero;

use super::packed::{PackedRat, RatAcc};
use super::{format_rational, Rational, Scalar};

/// Truncated power series `c_0 + c_1 e + ... + c_J e^J + O(e^{J+1})` in the
/// perturbation parameter `e`.
///
/// All arithmetic truncates at the common order `J`. Combining jets of
/// different orders panics; polynomial code checks orders up front through
/// [`Scalar::ctx`].
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Jet {
    coeffs: Vec<Rational>,
}

impl Jet {
    pub fn zero(order: usize) -> Self {
        Jet {
            coeffs: vec![Rational::zero(); order + 1],
        }
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        let mut j = Jet::zero(order);
        j.coeffs[0] = c;
        j
    }

    /// `c * e^power`, or zero if `power > order`.
    pub fn monomial(c: Rational, power: usize, order: usize) -> Self {
        let mut j = Jet::zero(order);
        if power <= order {
            j.coeffs[power] = c;
        }
        j
    }

    /// Builds a jet from explicit coefficients `c_0..c_J`.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least the constant term");
        Jet { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `e^k`; zero beyond the order.
    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Drops every coefficient above `order`.
    ///
    /// Panics if `order` exceeds the current order.
    pub fn truncate(&self, order: usize) -> Jet {
        assert!(order <= self.order(), "cannot raise jet order by truncation");
        Jet {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn check(&self, other: &Jet) {
        assert_eq!(
            self.order(),
            other.order(),
            "jet order mismatch: {} vs {}",
            self.order(),
            other.order()
        );
    }
}

impl fmt::Display for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(c))?;
        }
        write!(f, ")")
    }
}

impl Scalar for Jet {
    type Ctx = usize;

    fn ctx(&self) -> usize {
        self.order()
    }

    fn zero_in(order: &usize) -> Self {
        Jet::zero(*order)
    }

    fn one_in(order: &usize) -> Self {
        Jet::constant(Rational::from_integer(1.into()), *order)
    }

    fn from_rational(r: &Rational, order: &usize) -> Self {
        Jet::constant(r.clone(), *order)
    }

    fn vanishes(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    fn add_ref(&self, other: &Self) -> Self {
        self.check(other);
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    fn sub_ref(&self, other: &Self) -> Self {
        self.check(other);
        Jet {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn mul_ref(&self, other: &Self) -> Self {
        let mut out = Jet::zero(self.order());
        out.mul_add_assign(self, other);
        out
    }

    fn neg_ref(&self) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    fn scale(&self, r: &Rational) -> Self {
        Jet {
            coeffs: self.coeffs.iter().map(|a| a * r).collect(),
        }
    }

    fn add_assign_ref(&mut self, other: &Self) {
        self.check(other);
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        self.check(a);
        self.check(b);
        let order = self.order();
        for (i, ai) in a.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.coeffs[..=order - i].iter().enumerate() {
                if !bj.is_zero() {
                    self.coeffs[i + j] += ai * bj;
                }
            }
        }
    }

    type Packed = Vec<PackedRat>;
    type Acc = Vec<RatAcc>;

    fn pack(v: &[Self]) -> Vec<PackedRat> {
        let order = v.first().map_or(0, Jet::order);
        (0..=order)
            .map(|k| {
                let part: Vec<Rational> = v
                    .iter()
                    .map(|x| {
                        assert_eq!(x.order(), order, "jet order mismatch");
                        x.coeffs[k].clone()
                    })
                    .collect();
                PackedRat::new(&part)
            })
            .collect()
    }

    fn acc_new(len: usize, order: &usize) -> Vec<RatAcc> {
        (0..=*order).map(|_| RatAcc::new(len)).collect()
    }

    fn acc_conv(acc: &mut Vec<RatAcc>, a: &Vec<PackedRat>, b: &Vec<PackedRat>) {
        assert!(a.len() == acc.len() && b.len() == acc.len(), "jet order mismatch");
        let order = acc.len() - 1;
        for (r, ar) in a.iter().enumerate() {
            if ar.is_zero() {
                continue;
            }
            for (s, bs) in b[..=order - r].iter().enumerate() {
                acc[r + s].add_conv(ar, bs);
            }
        }
    }

    fn acc_add(acc: &mut Vec<RatAcc>, v: &[Self]) {
        let parts = Self::pack(v);
        assert_eq!(parts.len(), acc.len(), "jet order mismatch");
        for (a, part) in acc.iter_mut().zip(&parts) {
            a.add_conv(part, &PackedRat::unit());
        }
    }

    fn acc_finish(acc: Vec<RatAcc>) -> Vec<Self> {
        let parts: Vec<Vec<Rational>> = acc.into_iter().map(RatAcc::finish).collect();
        let len = parts[0].len();
        let mut cols: Vec<_> = parts.into_iter().map(Vec::into_iter).collect();
        (0..len)
            .map(|_| Jet {
                coeffs: cols.iter_mut().map(|c| c.next().unwrap()).collect(),
            })
            .collect()
    }
}
