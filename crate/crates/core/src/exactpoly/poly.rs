use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::{format_rational, Rational, Scalar};
use crate::error::{Error, Result};

/// Exponent pair of `x^x y^y`.
///
/// Ordered graded-lexicographically with `x > y`: higher total degree first
/// wins, ties broken by the `x` exponent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Monomial {
    pub x: u32,
    pub y: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x: 0, y: 0 };

    pub fn new(x: u32, y: u32) -> Self {
        Monomial { x, y }
    }

    pub fn degree(self) -> u32 {
        self.x + self.y
    }

    pub fn mul(self, other: Monomial) -> Monomial {
        Monomial::new(self.x + other.x, self.y + other.y)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x.cmp(&other.x))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `(x, y)` with coefficients in `S`.
///
/// Zero coefficients are never stored; the empty map is the zero
/// polynomial. Iteration order is ascending grlex, so `terms().rev()` is the
/// canonical printing order.
#[derive(Clone, PartialEq, Debug)]
pub struct BivarPoly<S: Scalar> {
    terms: BTreeMap<Monomial, S>,
    ctx: S::Ctx,
}

fn mismatch<C: fmt::Debug>(a: &C, b: &C) -> Error {
    Error::ContextMismatch {
        left: format!("{a:?}"),
        right: format!("{b:?}"),
    }
}

impl<S: Scalar> BivarPoly<S> {
    pub fn zero(ctx: S::Ctx) -> Self {
        BivarPoly {
            terms: BTreeMap::new(),
            ctx,
        }
    }

    pub fn one(ctx: S::Ctx) -> Self {
        let c = S::one_in(&ctx);
        Self::monomial(0, 0, c)
    }

    pub fn monomial(i: u32, j: u32, c: S) -> Self {
        let mut p = Self::zero(c.ctx());
        if !c.vanishes() {
            p.terms.insert(Monomial::new(i, j), c);
        }
        p
    }

    /// Collects terms, summing duplicates and dropping zeros.
    pub fn from_terms(ctx: S::Ctx, terms: impl IntoIterator<Item = (u32, u32, S)>) -> Result<Self> {
        let mut p = Self::zero(ctx);
        for (i, j, c) in terms {
            if c.ctx() != p.ctx {
                return Err(mismatch(&p.ctx, &c.ctx()));
            }
            p.add_term(Monomial::new(i, j), &c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: &S) {
        if c.vanishes() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(slot) => {
                slot.add_assign_ref(c);
                if slot.vanishes() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending grlex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &S)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    /// Stored coefficient of `x^i y^j`, or zero.
    pub fn coeff(&self, i: u32, j: u32) -> S {
        self.terms
            .get(&Monomial::new(i, j))
            .cloned()
            .unwrap_or_else(|| S::zero_in(&self.ctx))
    }

    /// Signed-exponent lookup; negative exponents give zero.
    pub fn coeff_signed(&self, i: i64, j: i64) -> S {
        if i < 0 || j < 0 {
            S::zero_in(&self.ctx)
        } else {
            self.coeff(i as u32, j as u32)
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().next_back().map(|m| m.degree())
    }

    /// Smallest total degree among stored terms.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|m| m.degree())
    }

    pub fn is_homogeneous(&self, degree: u32) -> bool {
        self.terms.keys().all(|m| m.degree() == degree)
    }

    pub fn constant_term(&self) -> S {
        self.coeff(0, 0)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ctx == other.ctx {
            Ok(())
        } else {
            Err(mismatch(&self.ctx, &other.ctx))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        BivarPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, c.neg_ref())).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &S) -> Result<Self> {
        if c.ctx() != self.ctx {
            return Err(mismatch(&self.ctx, &c.ctx()));
        }
        let mut out = Self::zero(self.ctx.clone());
        for (m, a) in self.terms() {
            out.add_term(m, &a.mul_ref(c));
        }
        Ok(out)
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        let mut out = Self::zero(self.ctx.clone());
        for (m, a) in self.terms() {
            out.add_term(m, &a.scale(r));
        }
        out
    }

    /// Multiplies by the monomial `x^i y^j`.
    pub fn shift(&self, i: u32, j: u32) -> Self {
        let s = Monomial::new(i, j);
        BivarPoly {
            terms: self.terms.iter().map(|(m, c)| (m.mul(s), c.clone())).collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Exact product; with `cap`, terms of total degree above the cap are
    /// never formed.
    pub fn mul(&self, other: &Self, cap: Option<u32>) -> Result<Self> {
        self.check(other)?;
        let cap = cap.unwrap_or(u32::MAX);
        let mut acc: BTreeMap<Monomial, S> = BTreeMap::new();
        for (ma, ca) in self.terms() {
            if ma.degree() > cap {
                break;
            }
            for (mb, cb) in other.terms() {
                let m = ma.mul(mb);
                if m.degree() > cap {
                    break;
                }
                match acc.get_mut(&m) {
                    Some(slot) => slot.mul_add_assign(ca, cb),
                    None => {
                        acc.insert(m, ca.mul_ref(cb));
                    }
                }
            }
        }
        acc.retain(|_, c| !c.vanishes());
        Ok(BivarPoly {
            terms: acc,
            ctx: self.ctx.clone(),
        })
    }

    /// `self^k` by binary exponentiation, applying the cap at every multiply.
    pub fn pow(&self, k: u32, cap: Option<u32>) -> Self {
        let mut result = Self::one(self.ctx.clone()).truncate(cap.unwrap_or(u32::MAX));
        let mut base = self.truncate(cap.unwrap_or(u32::MAX));
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base, cap).expect("same context");
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, cap).expect("same context");
            }
        }
        result
    }

    /// Drops all terms of total degree above `cap`.
    pub fn truncate(&self, cap: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= cap)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Homogeneous component of the given degree.
    pub fn homogeneous_part(&self, degree: u32) -> Self {
        BivarPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
            ctx: self.ctx.clone(),
        }
    }

    /// Applies `f` to every coefficient, changing the scalar type.
    pub fn map_coeffs<T: Scalar>(&self, ctx: T::Ctx, f: impl Fn(&S) -> T) -> BivarPoly<T> {
        let mut out = BivarPoly::zero(ctx);
        for (m, c) in self.terms() {
            out.add_term(m, &f(c));
        }
        out
    }
}

impl BivarPoly<Rational> {
    pub fn x() -> Self {
        Self::monomial(1, 0, Rational::from_integer(1.into()))
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, Rational::from_integer(1.into()))
    }

    /// Builds a rational polynomial from `(i, j, num, den)` tuples.
    pub fn from_ints(terms: &[(u32, u32, i64, i64)]) -> Self {
        Self::from_terms(
            (),
            terms
                .iter()
                .map(|&(i, j, n, d)| (i, j, super::rat(n, d))),
        )
        .expect("rational context is unit")
    }
}

/// Sum `1 + U + U^2 + ... + U^I` truncated to total degree `cap`, where
/// `I = ceil(cap / mindeg(U))`; agrees with the formal series `1/(1-U)`
/// through degree `cap`.
pub fn geom_series<S: Scalar>(u: &BivarPoly<S>, cap: u32) -> Result<BivarPoly<S>> {
    if !u.constant_term().vanishes() {
        return Err(Error::ConstantTerm);
    }
    let one = BivarPoly::one(u.ctx().clone());
    let Some(min_deg) = u.min_degree() else {
        return Ok(one);
    };
    let iterations = cap.div_ceil(min_deg);
    // Horner: G <- 1 + U G
    let mut acc = one.clone();
    for _ in 0..iterations {
        acc = one.add(&u.mul(&acc, Some(cap))?)?;
    }
    Ok(acc)
}

impl<S: Scalar> fmt::Display for BivarPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().rev().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let cs = c.to_string();
            if cs.contains(" + ") {
                write!(f, "({cs})")?;
            } else {
                write!(f, "{cs}")?;
            }
            match (m.x, m.y) {
                (0, 0) => {}
                (i, j) => {
                    write!(f, "*")?;
                    let mut first = true;
                    for (v, e) in [("x", i), ("y", j)] {
                        if e == 0 {
                            continue;
                        }
                        if !first {
                            write!(f, "*")?;
                        }
                        first = false;
                        if e == 1 {
                            write!(f, "{v}")?;
                        } else {
                            write!(f, "{v}^{e}")?;
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

impl BivarPoly<Rational> {
    /// Human-readable form, e.g. `x^2*y - 1/2*y^3`.
    pub fn pretty(&self) -> String {
        pretty(self)
    }
}

fn pretty(poly: &BivarPoly<Rational>) -> String {
    use num_traits::{One, Signed};
    if poly.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, (m, c)) in poly.terms().rev().enumerate() {
        let neg = c.is_negative();
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        let mono = match (m.x, m.y) {
            (0, 0) => String::new(),
            (i, j) => {
                let mut parts = vec![];
                for (v, e) in [("x", i), ("y", j)] {
                    match e {
                        0 => {}
                        1 => parts.push(v.to_string()),
                        e => parts.push(format!("{v}^{e}")),
                    }
                }
                parts.join("*")
            }
        };
        if mono.is_empty() {
            out.push_str(&format_rational(&a));
        } else if a.is_one() {
            out.push_str(&mono);
        } else {
            out.push_str(&format!("{}*{}", format_rational(&a), mono));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, Jet};
    use proptest::prelude::*;

    type P = BivarPoly<Rational>;

    fn p(terms: &[(u32, u32, i64)]) -> P {
        P::from_ints(&terms.iter().map(|&(i, j, c)| (i, j, c, 1)).collect::<Vec<_>>())
    }

    #[test]
    fn add_examples() {
        let a = p(&[(1, 0, 1), (0, 1, 1)]);
        let b = p(&[(1, 0, 1), (0, 1, -1)]);
        assert_eq!(a.add(&b).unwrap(), p(&[(1, 0, 2)]));
        assert_eq!(a.add(&P::zero(())).unwrap(), a);
        let c = p(&[(2, 1, 1)]);
        let s = c.add(&c.neg()).unwrap();
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn mul_examples() {
        let a = p(&[(1, 0, 1), (0, 1, 1)]);
        let b = p(&[(1, 0, 1), (0, 1, -1)]);
        assert_eq!(a.mul(&b, None).unwrap(), p(&[(2, 0, 1), (0, 2, -1)]));
        assert!(a.mul(&a, Some(1)).unwrap().is_zero());
        // x^{p'} (x^{N1} + y^{N1}) with p' = 1, N1 = 4
        let f = P::x().mul(&p(&[(4, 0, 1), (0, 4, 1)]), None).unwrap();
        assert_eq!(f, p(&[(5, 0, 1), (1, 4, 1)]));
    }

    #[test]
    fn pow_and_coeff_examples() {
        assert_eq!(p(&[(3, 0, 1)]).pow(5, None), p(&[(15, 0, 1)]));
        let s = p(&[(1, 0, 1), (0, 1, 1)]);
        let cube = s.pow(3, None);
        assert_eq!(cube.coeff(2, 1), rat(3, 1));
        assert_eq!(P::zero(()).coeff(5, 5), rat(0, 1));
        let f = p(&[(5, 0, 1), (1, 4, 1)]);
        let f3 = f.pow(3, None);
        for l in 0..=3u32 {
            let c = [1, 3, 3, 1][l as usize];
            assert_eq!(f3.coeff(15 - 4 * l, 4 * l), rat(c, 1));
        }
        assert_eq!(f3.len(), 4);
        assert_eq!(f.pow(0, None), P::one(()));
    }

    #[test]
    fn coeff_of_cube_by_brute_force() {
        // enumerate the 8 ordered choices of factors in (x^5 + x y^4)^3
        let f = p(&[(5, 0, 1), (1, 4, 1)]);
        let factors = [(5u32, 0u32), (1, 4)];
        let mut count = 0;
        for a in factors {
            for b in factors {
                for c in factors {
                    if (a.0 + b.0 + c.0, a.1 + b.1 + c.1) == (7, 8) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(count, 3);
        assert_eq!(f.pow(3, None).coeff(7, 8), rat(count, 1));
    }

    #[test]
    fn geom_series_examples() {
        let u = p(&[(1, 1, 1)]);
        assert_eq!(
            geom_series(&u, 4).unwrap(),
            p(&[(0, 0, 1), (1, 1, 1), (2, 2, 1)])
        );
        assert_eq!(geom_series(&P::zero(()), 7).unwrap(), P::one(()));
        let u = p(&[(2, 0, 1), (0, 2, 1)]);
        // direct expansion 1 + U + U^2
        let direct = P::one(())
            .add(&u)
            .unwrap()
            .add(&u.mul(&u, None).unwrap())
            .unwrap();
        assert_eq!(geom_series(&u, 4).unwrap(), direct);
        assert_eq!(
            direct,
            p(&[(0, 0, 1), (2, 0, 1), (0, 2, 1), (4, 0, 1), (2, 2, 2), (0, 4, 1)])
        );
        assert_eq!(
            geom_series(&p(&[(0, 0, 1), (1, 0, 1)]), 3),
            Err(Error::ConstantTerm)
        );
    }

    #[test]
    fn jet_context_mismatch_is_reported() {
        let a = BivarPoly::monomial(1, 0, Jet::zero(1).add_ref(&Jet::constant(rat(1, 1), 1)));
        let b = BivarPoly::monomial(1, 0, Jet::constant(rat(1, 1), 2));
        assert!(matches!(a.add(&b), Err(Error::ContextMismatch { .. })));
        assert!(matches!(a.mul(&b, None), Err(Error::ContextMismatch { .. })));
    }

    #[test]
    fn ordering_and_printing() {
        let q = p(&[(0, 2, 1), (2, 0, 1), (1, 1, -1), (1, 0, 3), (0, 0, 2)]);
        let order: Vec<_> = q.terms().rev().map(|(m, _)| (m.x, m.y)).collect();
        assert_eq!(order, vec![(2, 0), (1, 1), (0, 2), (1, 0), (0, 0)]);
        assert_eq!(pretty(&q), "x^2 - x*y + y^2 + 3*x + 2");
    }

    fn arb_poly() -> impl Strategy<Value = P> {
        prop::collection::vec((0u32..4, 0u32..4, -3i64..=3), 0..6).prop_map(|ts| p(&ts))
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b).unwrap(), b.add(&a).unwrap());
            prop_assert_eq!(a.mul(&b, None).unwrap(), b.mul(&a, None).unwrap());
            prop_assert_eq!(
                a.mul(&b, None).unwrap().mul(&c, None).unwrap(),
                a.mul(&b.mul(&c, None).unwrap(), None).unwrap()
            );
            prop_assert_eq!(
                a.mul(&b.add(&c).unwrap(), None).unwrap(),
                a.mul(&b, None).unwrap().add(&a.mul(&c, None).unwrap()).unwrap()
            );
            prop_assert_eq!(
                a.add(&b).unwrap().add(&c).unwrap(),
                a.add(&b.add(&c).unwrap()).unwrap()
            );
        }

        #[test]
        fn pow_matches_repeated_mul(a in arb_poly(), k in 0u32..=6) {
            let mut acc = P::one(());
            for _ in 0..k {
                acc = acc.mul(&a, None).unwrap();
            }
            prop_assert_eq!(a.pow(k, None), acc);
        }

        #[test]
        fn capped_mul_is_truncated_mul(a in arb_poly(), b in arb_poly(), cap in 0u32..8) {
            prop_assert_eq!(
                a.mul(&b, Some(cap)).unwrap(),
                a.mul(&b, None).unwrap().truncate(cap)
            );
        }

        #[test]
        fn geom_series_inverts_one_minus_u(u in arb_poly(), cap in 0u32..9) {
            let u = u.sub(&P::monomial(0, 0, u.constant_term())).unwrap();
            let g = geom_series(&u, cap).unwrap();
            let one_minus_u = P::one(()).sub(&u).unwrap();
            prop_assert_eq!(g.mul(&one_minus_u, None).unwrap().truncate(cap), P::one(()));
        }
    }
}
