use super::{BivarPoly, Monomial, Scalar};

/// Dense homogeneous components of a truncated series in `(x, y)`.
///
/// `comps[m][j]` is the coefficient of `x^(m-j) y^j`; an empty vector stands
/// for a zero component. Each nonzero component is also cached in packed
/// form for convolution.
#[derive(Clone, Debug)]
pub(crate) struct Graded<S: Scalar> {
    comps: Vec<Vec<S>>,
    packed: Vec<Option<S::Packed>>,
    ctx: S::Ctx,
}

impl<S: Scalar> Graded<S> {
    pub fn new(max_degree: usize, ctx: S::Ctx) -> Self {
        Graded {
            comps: vec![Vec::new(); max_degree + 1],
            packed: vec![None; max_degree + 1],
            ctx,
        }
    }

    pub fn from_poly(poly: &BivarPoly<S>, max_degree: usize) -> Self {
        let ctx = poly.ctx().clone();
        let mut comps: Vec<Vec<S>> = vec![Vec::new(); max_degree + 1];
        for (m, c) in poly.terms() {
            let deg = m.degree() as usize;
            if deg > max_degree {
                continue;
            }
            if comps[deg].is_empty() {
                comps[deg] = vec![S::zero_in(&ctx); deg + 1];
            }
            comps[deg][m.y as usize] = c.clone();
        }
        let mut g = Graded::new(max_degree, ctx);
        for (deg, comp) in comps.into_iter().enumerate() {
            g.set_comp(deg, comp);
        }
        g
    }

    pub fn to_poly(&self) -> BivarPoly<S> {
        let mut p = BivarPoly::zero(self.ctx.clone());
        for m in 0..self.comps.len() {
            for (j, c) in self.comps[m].iter().enumerate() {
                p.add_term(Monomial::new((m - j) as u32, j as u32), c);
            }
        }
        p
    }

    /// Component of degree `m` as a polynomial.
    pub fn homogeneous(&self, m: usize) -> BivarPoly<S> {
        let mut p = BivarPoly::zero(self.ctx.clone());
        for (j, c) in self.comp(m).iter().enumerate() {
            p.add_term(Monomial::new((m - j) as u32, j as u32), c);
        }
        p
    }

    pub fn max_degree(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn ctx(&self) -> &S::Ctx {
        &self.ctx
    }

    /// Component of degree `m`, empty if zero or out of range.
    pub fn comp(&self, m: usize) -> &[S] {
        self.comps.get(m).map(|c| c.as_slice()).unwrap_or(&[])
    }

    /// Packed component of degree `m`, `None` if zero or out of range.
    pub fn packed(&self, m: usize) -> Option<&S::Packed> {
        self.packed.get(m).and_then(Option::as_ref)
    }

    /// Installs a component, dropping it if all entries are zero.
    pub fn set_comp(&mut self, m: usize, comp: Vec<S>) {
        debug_assert!(comp.is_empty() || comp.len() == m + 1);
        if comp.iter().all(|c| c.vanishes()) {
            self.comps[m] = Vec::new();
            self.packed[m] = None;
        } else {
            self.packed[m] = Some(S::pack(&comp));
            self.comps[m] = comp;
        }
    }


    /// Degrees with a nonzero component.
    pub fn support(&self) -> Vec<usize> {
        (0..self.comps.len())
            .filter(|&m| !self.comps[m].is_empty())
            .collect()
    }
}

/// Packs a component, `None` when it vanishes.
pub(crate) fn pack_nonzero<S: Scalar>(comp: &[S]) -> Option<S::Packed> {
    (!comp.iter().all(|c| c.vanishes())).then(|| S::pack(comp))
}

/// Sum of a convolution stream for a component of degree `m`.
pub(crate) struct ConvSum<S: Scalar> {
    acc: S::Acc,
}

impl<S: Scalar> ConvSum<S> {
    pub fn new(m: usize, ctx: &S::Ctx) -> Self {
        ConvSum {
            acc: S::acc_new(m + 1, ctx),
        }
    }

    pub fn add(&mut self, a: Option<&S::Packed>, b: Option<&S::Packed>) {
        if let (Some(a), Some(b)) = (a, b) {
            S::acc_conv(&mut self.acc, a, b);
        }
    }

    pub fn add_plain(&mut self, v: &[S]) {
        if !v.is_empty() {
            S::acc_add(&mut self.acc, v);
        }
    }

    pub fn finish(self) -> Vec<S> {
        S::acc_finish(self.acc)
    }
}

/// `x`-derivative of a homogeneous component of degree `len-1`.
pub(crate) fn d_dx<S: Scalar>(comp: &[S]) -> Vec<S> {
    if comp.len() <= 1 {
        return Vec::new();
    }
    let m = comp.len() - 1;
    (0..m)
        .map(|j| comp[j].scale(&super::rat((m - j) as i64, 1)))
        .collect()
}

/// `y`-derivative of a homogeneous component of degree `len-1`.
pub(crate) fn d_dy<S: Scalar>(comp: &[S]) -> Vec<S> {
    if comp.len() <= 1 {
        return Vec::new();
    }
    (1..comp.len())
        .map(|j| comp[j].scale(&super::rat(j as i64, 1)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::Rational;

    #[test]
    fn round_trip_and_convolution() {
        let p = BivarPoly::<Rational>::from_ints(&[(2, 0, 1, 1), (1, 1, -3, 1), (0, 3, 2, 5)]);
        let g = Graded::from_poly(&p, 5);
        assert_eq!(g.to_poly(), p);
        assert_eq!(g.support(), vec![2, 3]);
        let mut sum = ConvSum::<Rational>::new(5, &());
        sum.add(g.packed(2), g.packed(3));
        sum.add(g.packed(1), g.packed(4));
        let mut h = Graded::new(5, ());
        h.set_comp(5, sum.finish());
        let direct = p
            .homogeneous_part(2)
            .mul(&p.homogeneous_part(3), None)
            .unwrap();
        assert_eq!(h.to_poly(), direct);
    }

    #[test]
    fn derivatives() {
        // x^2 y -> d/dx = 2 x y, d/dy = x^2
        let g = Graded::from_poly(&BivarPoly::<Rational>::from_ints(&[(2, 1, 1, 1)]), 3);
        let dx = d_dx(g.comp(3));
        let dy = d_dy(g.comp(3));
        let mut h = Graded::new(2, ());
        h.set_comp(2, dx);
        assert_eq!(h.to_poly(), BivarPoly::from_ints(&[(1, 1, 2, 1)]));
        h.set_comp(2, dy);
        assert_eq!(h.to_poly(), BivarPoly::from_ints(&[(2, 0, 1, 1)]));
    }
}
