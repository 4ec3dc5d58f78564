//! First-order (in the perturbation parameter) saddle values.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{geom_series, rat, BivarPoly, Jet, Rational};
use crate::saddle::{saddle_values_nf, SaddleSystem};

/// How the perturbation parameter enters the vector field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum EpsForm {
    /// `x' = p x + e p P`, `y' = -q y + e q Q`.
    #[default]
    #[serde(rename = "pertsys1")]
    Plain,
    /// `x' = p x (1 - U) + e p P`, `y' = -q y (1 - U) + e q Q`.
    #[serde(rename = "pertsys")]
    Unit,
    /// `x' = p x + e p P sum U^i`, `y' = -q y + e q Q sum U^i`.
    #[serde(rename = "pertsys2")]
    Rescaled,
}

impl EpsForm {
    pub fn tag(self) -> &'static str {
        match self {
            EpsForm::Plain => "pertsys1",
            EpsForm::Unit => "pertsys",
            EpsForm::Rescaled => "pertsys2",
        }
    }
}

impl fmt::Display for EpsForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for EpsForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "pertsys1" => Ok(EpsForm::Plain),
            "pertsys" => Ok(EpsForm::Unit),
            "pertsys2" => Ok(EpsForm::Rescaled),
            other => Err(Error::parse(
                "eps_form",
                format!("unknown form {other:?}; expected pertsys1, pertsys or pertsys2"),
            )),
        }
    }
}

/// One-parameter family of `p:-q` saddles, linear in `e`.
#[derive(Clone, Debug, PartialEq)]
pub struct PerturbFamily {
    pub p: u32,
    pub q: u32,
    pub nonlin_x: BivarPoly<Rational>,
    pub nonlin_y: BivarPoly<Rational>,
    pub unit: Option<BivarPoly<Rational>>,
    pub form: EpsForm,
}

impl PerturbFamily {
    pub fn new(
        p: u32,
        q: u32,
        nonlin_x: BivarPoly<Rational>,
        nonlin_y: BivarPoly<Rational>,
        unit: Option<BivarPoly<Rational>>,
        form: EpsForm,
    ) -> Result<Self> {
        let fam = PerturbFamily {
            p,
            q,
            nonlin_x,
            nonlin_y,
            unit,
            form,
        };
        fam.validate()?;
        Ok(fam)
    }

    pub fn validate(&self) -> Result<()> {
        let sys = SaddleSystem::new(self.p, self.q, self.nonlin_x.clone(), self.nonlin_y.clone())?;
        if let Some(u) = &self.unit {
            sys.with_unit(u.clone())?;
            if self.form == EpsForm::Plain && !u.is_zero() {
                return Err(Error::InvalidSystem(
                    "form pertsys1 takes no unit factor U".into(),
                ));
            }
        }
        Ok(())
    }

    fn unit_or_zero(&self) -> BivarPoly<Rational> {
        self.unit.clone().unwrap_or_else(|| BivarPoly::zero(()))
    }

    /// The family as a system over jets of order `order` in `e`, exact for
    /// saddle values through `k_max`.
    pub fn jet_system(&self, order: usize, k_max: u32) -> Result<SaddleSystem<Jet>> {
        let cap = (k_max + 1) * (self.p + self.q) - 1;
        let (px, qy) = match self.form {
            EpsForm::Rescaled if self.unit.is_some() => {
                let series = geom_series(&self.unit_or_zero(), cap)?;
                (
                    self.nonlin_x.mul(&series, Some(cap + 2))?,
                    self.nonlin_y.mul(&series, Some(cap + 2))?,
                )
            }
            _ => (self.nonlin_x.clone(), self.nonlin_y.clone()),
        };
        let eps = |c: &Rational, w: u32| {
            let mut coeffs = vec![Rational::zero(); order + 1];
            if order >= 1 {
                coeffs[1] = c * rat(w.into(), 1);
            }
            Jet::from_coeffs(coeffs)
        };
        let px = px.map_coeffs(order, |c| eps(c, self.p));
        let qy = qy.map_coeffs(order, |c| eps(c, self.q));
        let sys = SaddleSystem::new(self.p, self.q, px, qy)?;
        match (self.form, &self.unit) {
            (EpsForm::Unit, Some(u)) => {
                sys.with_unit(u.map_coeffs(order, |c| Jet::constant(c.clone(), order)))
            }
            _ => Ok(sys),
        }
    }
}

/// `c_k + d_k`: the resonant coefficients `P[1+kq, kp] + Q[kq, 1+kp]`.
pub fn linear_saddle_coeff(fam: &PerturbFamily, k: u32) -> Result<Rational> {
    crate::saddle::check_order(k)?;
    if fam.unit.as_ref().is_some_and(|u| !u.is_zero()) {
        return Err(Error::InvalidSystem(
            "linear_saddle_coeff needs a family without U".into(),
        ));
    }
    let (p, q) = (fam.p, fam.q);
    Ok(fam.nonlin_x.coeff(1 + k * q, k * p) + fam.nonlin_y.coeff(k * q, 1 + k * p))
}

/// `e`-linear parts of the saddle values `1..=k_max` by coefficient
/// extraction from `(x^(q-1) y^p P + x^q y^(p-1) Q) sum U^i`.
pub fn linear_saddle_values(fam: &PerturbFamily, k_max: u32) -> Result<Vec<Rational>> {
    crate::saddle::check_order(k_max)?;
    let (p, q) = (fam.p, fam.q);
    let top = (k_max + 1) * (p + q);
    let f = fam
        .nonlin_x
        .shift(q - 1, p)
        .add(&fam.nonlin_y.shift(q, p - 1))?
        .truncate(top);
    let Some(low) = f.min_degree() else {
        return Ok(vec![Rational::zero(); k_max as usize]);
    };
    let product = match &fam.unit {
        Some(u) if !u.is_zero() => {
            let series = geom_series(u, top.saturating_sub(low))?;
            f.mul(&series, Some(top))?
        }
        _ => f,
    };
    Ok((1..=k_max)
        .map(|k| product.coeff((k + 1) * q, (k + 1) * p))
        .collect())
}

pub fn linear_saddle_value(fam: &PerturbFamily, k: u32) -> Result<Rational> {
    Ok(linear_saddle_values(fam, k)?.pop().unwrap_or_else(Rational::zero))
}

/// Saddle values `1..=k_max` of the family as jets of order `order` in `e`,
/// by the normal-form engine.
pub fn jet_saddle_values(fam: &PerturbFamily, k_max: u32, order: usize) -> Result<Vec<Jet>> {
    if order == 0 {
        return Err(Error::NonPositiveOrder(0));
    }
    let sys = fam.jet_system(order, k_max)?;
    Ok(saddle_values_nf(&sys, k_max)?
        .into_iter()
        .map(|r| r.value)
        .collect())
}
