use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactpoly::{geom_series, BivarPoly, Rational, Scalar};

/// Planar system with a `p:-q` resonant saddle at the origin:
///
/// ```text
/// x' = s p x (1 - U) + P(x, y)
/// y' = -s q y (1 - U) + Q(x, y)
/// ```
///
/// `s` is a nonzero rational time scale (1 unless the system was produced
/// by a constant rescaling) and `U`, when present, is a unit factor with no
/// constant term. `P` and `Q` carry only terms of total degree >= 2.
#[derive(Clone, Debug, PartialEq)]
pub struct SaddleSystem<S: Scalar> {
    pub p: u32,
    pub q: u32,
    pub time_scale: Rational,
    pub nonlin_x: BivarPoly<S>,
    pub nonlin_y: BivarPoly<S>,
    pub unit: Option<BivarPoly<S>>,
}

impl<S: Scalar> SaddleSystem<S> {
    pub fn new(p: u32, q: u32, nonlin_x: BivarPoly<S>, nonlin_y: BivarPoly<S>) -> Result<Self> {
        let sys = SaddleSystem {
            p,
            q,
            time_scale: Rational::one(),
            nonlin_x,
            nonlin_y,
            unit: None,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_unit(mut self, unit: BivarPoly<S>) -> Result<Self> {
        self.unit = Some(unit);
        self.validate()?;
        Ok(self)
    }

    pub fn with_time_scale(mut self, s: Rational) -> Result<Self> {
        self.time_scale = s;
        self.validate()?;
        Ok(self)
    }

    pub fn ctx(&self) -> &S::Ctx {
        self.nonlin_x.ctx()
    }

    pub fn validate(&self) -> Result<()> {
        if self.p == 0 || self.q == 0 {
            return Err(Error::InvalidSystem("p and q must be positive".into()));
        }
        if self.p.gcd(&self.q) != 1 {
            return Err(Error::InvalidSystem(format!(
                "gcd({}, {}) != 1",
                self.p, self.q
            )));
        }
        if self.time_scale.is_zero() {
            return Err(Error::InvalidSystem("time scale must be nonzero".into()));
        }
        if self.nonlin_x.ctx() != self.nonlin_y.ctx() {
            return Err(Error::ContextMismatch {
                left: format!("{:?}", self.nonlin_x.ctx()),
                right: format!("{:?}", self.nonlin_y.ctx()),
            });
        }
        for (name, poly) in [("P", &self.nonlin_x), ("Q", &self.nonlin_y)] {
            if let Some(low) = poly.min_degree() {
                if low < 2 {
                    return Err(Error::InvalidSystem(format!(
                        "{name} has a term of degree {low}; only nonlinear terms are allowed"
                    )));
                }
            }
        }
        if let Some(u) = &self.unit {
            if u.ctx() != self.ctx() {
                return Err(Error::ContextMismatch {
                    left: format!("{:?}", u.ctx()),
                    right: format!("{:?}", self.ctx()),
                });
            }
            if !u.constant_term().vanishes() {
                return Err(Error::ConstantTerm);
            }
        }
        Ok(())
    }

    /// Highest total degree appearing in the right-hand side.
    pub fn degree(&self) -> u32 {
        let lin = 1;
        let px = self.nonlin_x.total_degree().unwrap_or(0);
        let py = self.nonlin_y.total_degree().unwrap_or(0);
        let pu = self.unit.as_ref().and_then(|u| u.total_degree()).map_or(0, |d| d + 1);
        lin.max(px).max(py).max(pu)
    }

    /// The same vector field with the unit factor multiplied out:
    /// `P - s p x U`, `Q + s q y U`.
    pub fn expanded(&self) -> Result<Self> {
        let Some(u) = &self.unit else {
            return Ok(self.clone());
        };
        let sx = self.time_scale.clone() * Rational::from_integer(self.p.into());
        let sy = self.time_scale.clone() * Rational::from_integer(self.q.into());
        let nonlin_x = self.nonlin_x.sub(&u.shift(1, 0).scale_rational(&sx))?;
        let nonlin_y = self.nonlin_y.add(&u.shift(0, 1).scale_rational(&sy))?;
        Ok(SaddleSystem {
            nonlin_x,
            nonlin_y,
            unit: None,
            ..self.clone()
        })
    }

    /// Divides the field by `1 - U`: returns `x' = s p x + P sum U^i`,
    /// `y' = -s q y + Q sum U^i` with the series truncated at total degree
    /// `cap`.
    ///
    /// Every term of the result of total degree `<= cap + 2` is exact, so
    /// `cap = (K+1)(p+q) - 1` covers everything saddle values up to order `K`
    /// can see.
    pub fn rescale_unit(&self, cap: u32) -> Result<Self> {
        let Some(u) = &self.unit else {
            return Ok(self.clone());
        };
        let series = geom_series(u, cap)?;
        let keep = cap + 2;
        Ok(SaddleSystem {
            nonlin_x: self.nonlin_x.mul(&series, Some(keep))?,
            nonlin_y: self.nonlin_y.mul(&series, Some(keep))?,
            unit: None,
            ..self.clone()
        })
    }

    /// Both nonlinear parts truncated at total degree `cap`.
    pub fn truncated(&self, cap: u32) -> Self {
        SaddleSystem {
            nonlin_x: self.nonlin_x.truncate(cap),
            nonlin_y: self.nonlin_y.truncate(cap),
            unit: self.unit.as_ref().map(|u| u.truncate(cap)),
            ..self.clone()
        }
    }

    /// Multiplies both right-hand sides by `1 + x^r`.
    ///
    /// For `r = 0` this doubles the field, which is recorded in the time
    /// scale.
    pub fn lift_degree(&self, r: u32) -> Result<Self> {
        let sys = self.expanded()?;
        let ctx = sys.ctx().clone();
        let one = BivarPoly::one(ctx.clone());
        if r == 0 {
            let two = Rational::from_integer(2.into());
            return Ok(SaddleSystem {
                time_scale: sys.time_scale.clone() * &two,
                nonlin_x: sys.nonlin_x.scale_rational(&two),
                nonlin_y: sys.nonlin_y.scale_rational(&two),
                ..sys
            });
        }
        let factor = one.add(&BivarPoly::monomial(r, 0, S::one_in(&ctx)))?;
        let sx = sys.time_scale.clone() * Rational::from_integer(sys.p.into());
        let sy = sys.time_scale.clone() * Rational::from_integer(sys.q.into());
        // (s p x + P)(1 + x^r) - s p x = P (1 + x^r) + s p x^(r+1)
        let lin_x = BivarPoly::monomial(r + 1, 0, S::from_rational(&sx, &ctx));
        let lin_y = BivarPoly::monomial(r, 1, S::from_rational(&sy, &ctx));
        Ok(SaddleSystem {
            nonlin_x: sys.nonlin_x.mul(&factor, None)?.add(&lin_x)?,
            nonlin_y: sys.nonlin_y.mul(&factor, None)?.sub(&lin_y)?,
            ..sys
        })
    }
}
