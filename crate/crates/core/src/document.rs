//! JSON exchange format for systems and perturbation families.
//!
//! ```json
//! {
//!   "schema_version": 1,
//!   "p": 1, "q": 1,
//!   "P": [{"i": 2, "j": 1, "c": "1/2"}],
//!   "Q": [],
//!   "U": [{"i": 1, "j": 0, "c": "1"}],
//!   "eps_form": "pertsys"
//! }
//! ```
//!
//! Without `eps_form` the document is the system
//! `x' = s p x (1 - U) + P`, `y' = -s q y (1 - U) + Q` with `s` the optional
//! `time_scale` (default 1). With `eps_form` it is the family of that shape.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::{format_rational, parse_rational, poly_from_literals, poly_to_literals, Rational, TermLiteral};
use crate::perturb::{EpsForm, PerturbFamily};
use crate::saddle::SaddleSystem;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDocument {
    pub schema_version: u32,
    pub p: u32,
    pub q: u32,
    #[serde(rename = "P")]
    pub nonlin_x: Vec<TermLiteral>,
    #[serde(rename = "Q")]
    pub nonlin_y: Vec<TermLiteral>,
    #[serde(rename = "U", default, skip_serializing_if = "Option::is_none")]
    pub unit: Option<Vec<TermLiteral>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eps_form: Option<EpsForm>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_scale: Option<String>,
}

impl SystemDocument {
    /// Parses and validates; JSON errors carry line and column.
    pub fn parse(text: &str) -> Result<Self> {
        let doc: SystemDocument = serde_json::from_str(text)
            .map_err(|e| Error::parse(format!("line {} column {}", e.line(), e.column()), strip_position(&e)))?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(Error::parse(
                "schema_version",
                format!("unsupported version {}, expected {SCHEMA_VERSION}", doc.schema_version),
            ));
        }
        doc.time_scale()?;
        match doc.eps_form {
            Some(_) => {
                doc.to_family()?;
            }
            None => {
                doc.to_system()?;
            }
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    pub fn from_system(sys: &SaddleSystem<Rational>) -> Self {
        let one = Rational::from_integer(1.into());
        SystemDocument {
            schema_version: SCHEMA_VERSION,
            p: sys.p,
            q: sys.q,
            nonlin_x: poly_to_literals(&sys.nonlin_x),
            nonlin_y: poly_to_literals(&sys.nonlin_y),
            unit: sys.unit.as_ref().map(poly_to_literals),
            eps_form: None,
            time_scale: (sys.time_scale != one).then(|| format_rational(&sys.time_scale)),
        }
    }

    pub fn from_family(fam: &PerturbFamily) -> Self {
        SystemDocument {
            schema_version: SCHEMA_VERSION,
            p: fam.p,
            q: fam.q,
            nonlin_x: poly_to_literals(&fam.nonlin_x),
            nonlin_y: poly_to_literals(&fam.nonlin_y),
            unit: fam.unit.as_ref().map(poly_to_literals),
            eps_form: Some(fam.form),
            time_scale: None,
        }
    }

    fn time_scale(&self) -> Result<Rational> {
        match &self.time_scale {
            None => Ok(Rational::from_integer(1.into())),
            Some(s) => {
                let r = parse_rational(s).map_err(|_| Error::parse("time_scale", format!("bad rational {s:?}")))?;
                if r == Rational::from_integer(0.into()) {
                    return Err(Error::parse("time_scale", "must be nonzero"));
                }
                Ok(r)
            }
        }
    }

    pub fn to_system(&self) -> Result<SaddleSystem<Rational>> {
        let px = poly_from_literals("P", &self.nonlin_x)?;
        let qy = poly_from_literals("Q", &self.nonlin_y)?;
        let mut sys = SaddleSystem::new(self.p, self.q, px, qy)?.with_time_scale(self.time_scale()?)?;
        if let Some(u) = &self.unit {
            sys = sys.with_unit(poly_from_literals("U", u)?)?;
        }
        Ok(sys)
    }

    /// The document as a family; a missing `eps_form` reads as `pertsys1`.
    pub fn to_family(&self) -> Result<PerturbFamily> {
        if self.time_scale.is_some() {
            return Err(Error::parse("time_scale", "not allowed in a family document"));
        }
        let px = poly_from_literals("P", &self.nonlin_x)?;
        let qy = poly_from_literals("Q", &self.nonlin_y)?;
        let unit = self.unit.as_ref().map(|u| poly_from_literals("U", u)).transpose()?;
        PerturbFamily::new(self.p, self.q, px, qy, unit, self.eps_form.unwrap_or_default())
    }
}

fn strip_position(e: &serde_json::Error) -> String {
    let s = e.to_string();
    match s.rfind(" at line ") {
        Some(k) => s[..k].to_string(),
        None => s,
    }
}
