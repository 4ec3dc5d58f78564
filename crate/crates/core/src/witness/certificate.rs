use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactpoly::{binomial, format_rational, Rational};
use crate::resonance::{resonance_data, row_index, ResonanceData};

use super::choose::f_poly;
use super::matrix::{build_matrix_rows, closed_form_rows};

fn ser_big<Z: Serializer>(v: &BigInt, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_rat<Z: Serializer>(v: &Option<Rational>, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    match v {
        Some(r) => s.serialize_some(&format_rational(r)),
        None => s.serialize_none(),
    }
}

/// `C(i, l) xi_j + C(i, l-1) xi_{j+N1}`: the first-order part of
/// `L_{m n1}` restricted to the two columns `j_{N2}` and `j_{N2} + N1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BinomialForm {
    pub m: u64,
    pub i: u64,
    pub l: u64,
    pub j: u64,
    #[serde(serialize_with = "ser_big")]
    pub c_l: BigInt,
    #[serde(serialize_with = "ser_big")]
    pub c_l_minus_1: BigInt,
    /// `C(i, l) / C(i, l-1) = (i + 1 - l) / l`, absent when `l = 0`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub ratio: Option<Rational>,
}

impl BinomialForm {
    fn at(rd: &ResonanceData, m: u64) -> Result<Self> {
        let ri = row_index(rd, m)?;
        let (i, l) = (ri.i_m as i64, ri.l_m as i64);
        let c_l = binomial(i, l);
        let c_l_minus_1 = binomial(i, l - 1);
        let ratio = (!c_l_minus_1.is_zero()).then(|| Rational::new(c_l.clone(), c_l_minus_1.clone()));
        Ok(BinomialForm {
            m,
            i: ri.i_m,
            l: ri.l_m,
            j: ri.j_m,
            c_l,
            c_l_minus_1,
            ratio,
        })
    }
}

/// First-order witness that `L_{k0}` is not in the ideal of the earlier
/// saddle values, `k0 = (N1 + N2) n1`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonMembershipCertificate {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub resonance: ResonanceData,
    #[serde(rename = "N1")]
    pub big_n1: u64,
    #[serde(rename = "N2")]
    pub big_n2: u64,
    pub k0: u64,
    /// Rows of `A` at `U = f` agree with the binomial closed form.
    pub rows_checked: usize,
    pub structure_ok: bool,
    /// `0 < j_{N2} <= 3 + p'`.
    pub column_ok: bool,
    pub form_n2: BinomialForm,
    pub form_top: BinomialForm,
    /// `(i_top + 1)/l_top - (i_{N2} + 1)/l_{N2}`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub difference: Option<Rational>,
    /// `(p+q)((d l_{N2} - p N2) N1 - N2 p p') / (d^2 l_{N2} l_top)`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub factored_difference: Option<Rational>,
    /// `(i_top + 1) l_{N2} != (i_{N2} + 1) l_top`.
    pub ratios_differ: bool,
    pub verdict: bool,
    pub bound: String,
}

/// Certificate for homogeneous nonlinearities of degree `n`.
pub fn theorem3_certificate(p: u64, q: u64, n: u64) -> Result<NonMembershipCertificate> {
    let rd = resonance_data(p, q, n)?;
    rd.check_gate()?;
    let big_n1 = rd.big_n1()?;
    let big_n2 = rd.big_n2()?;
    let top = big_n1 + big_n2;

    let rows = top.max(n + 1) as usize;
    let built = build_matrix_rows(&rd, &f_poly(&rd)?, rows)?;
    let structure_ok = built == closed_form_rows(&rd, rows)?;

    let form_n2 = BinomialForm::at(&rd, big_n2)?;
    let form_top = BinomialForm::at(&rd, top)?;
    let column_ok = 0 < form_n2.j && form_n2.j <= 3 + rd.p_prime;

    let lhs = BigInt::from(form_top.i + 1) * BigInt::from(form_n2.l);
    let rhs = BigInt::from(form_n2.i + 1) * BigInt::from(form_top.l);
    let ratios_differ = lhs != rhs;
    let (l2, lt) = (form_n2.l as i64, form_top.l as i64);
    let difference = (l2 != 0 && lt != 0)
        .then(|| Rational::new((form_top.i as i64 + 1).into(), lt.into()) - Rational::new((form_n2.i as i64 + 1).into(), l2.into()));
    let factored_difference = (l2 != 0 && lt != 0).then(|| {
        let (p, q, d) = (p as i64, q as i64, rd.d as i64);
        let (n1b, n2b, pp) = (big_n1 as i64, big_n2 as i64, rd.p_prime as i64);
        let num = (p + q) * ((d * l2 - p * n2b) * n1b - n2b * p * pp);
        Rational::new(num.into(), (d * d * l2 * lt).into())
    });

    Ok(NonMembershipCertificate {
        p,
        q,
        n,
        big_n1,
        big_n2,
        k0: top * rd.n1,
        rows_checked: rows,
        structure_ok,
        column_ok,
        form_n2,
        form_top,
        difference,
        factored_difference,
        ratios_differ,
        verdict: structure_ok && column_ok && ratios_differ,
        bound: bound_text("M_h^I", p, rd.d),
        resonance: rd,
    })
}

fn bound_text(name: &str, p: u64, d: u64) -> String {
    let (c, den) = if p == 1 { (2, d) } else { (3, 2 * d) };
    if den == 1 {
        format!("{name} >= {c}n^2 + O(n)")
    } else {
        format!("{name} >= {c}n^2/{den} + O(n)")
    }
}

/// Certificate for arbitrary (not necessarily homogeneous) nonlinearities:
/// the homogeneous certificate at `n' = n - r`, `r = n mod (p+q)`, carried to
/// degree `n` by the factor `1 + x^r`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftedCertificate {
    pub n: u64,
    pub r: u64,
    pub n_prime: u64,
    pub base: NonMembershipCertificate,
    pub k0: u64,
    pub verdict: bool,
    pub bound: String,
}

pub fn theorem4_certificate(p: u64, q: u64, n: u64) -> Result<LiftedCertificate> {
    let r = n % (p + q);
    let n_prime = n - r;
    if n_prime < p + q + 3 {
        return Err(Error::Gate {
            n,
            min: (p + q + 3).div_ceil(p + q) * (p + q),
        });
    }
    let base = theorem3_certificate(p, q, n_prime)?;
    Ok(LiftedCertificate {
        n,
        r,
        n_prime,
        k0: base.k0,
        verdict: base.verdict,
        bound: bound_text("M^I", p, 1),
        base,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;

    #[test]
    fn example_1_1_6() {
        let c = theorem3_certificate(1, 1, 6).unwrap();
        assert_eq!((c.big_n1, c.big_n2, c.k0), (4, 3, 35));
        assert_eq!((c.form_n2.i, c.form_n2.l), (5, 4));
        assert_eq!((c.form_top.i, c.form_top.l), (13, 9));
        assert_eq!(c.form_n2.ratio, Some(rat(2, 4)));
        assert_eq!(c.difference, Some(rat(1, 18)));
        assert_eq!(c.factored_difference, c.difference);
        assert!(c.verdict);
        assert_eq!(c.bound, "M_h^I >= 2n^2 + O(n)");
        assert_eq!(theorem3_certificate(1, 1, 7).unwrap().bound, "M_h^I >= 2n^2/2 + O(n)");
    }

    #[test]
    fn unit_p_family() {
        for n in [6u64, 8, 10, 12, 14] {
            let c = theorem3_certificate(1, 1, n).unwrap();
            let d = c.resonance.d;
            assert_eq!(c.k0, (2 * n - 4 - d) * (n - 1) / d, "n = {n}");
            assert!(c.verdict);
        }
    }

    #[test]
    fn grid_verdicts() {
        for (p, q, n) in [(2, 3, 12), (1, 2, 9), (1, 3, 7), (2, 5, 16), (3, 4, 15)] {
            let c = theorem3_certificate(p, q, n).unwrap();
            assert!(c.structure_ok && c.column_ok, "({p},{q},{n})");
            assert!(c.verdict, "({p},{q},{n})");
            assert_eq!(c.difference, c.factored_difference, "({p},{q},{n})");
        }
    }

    #[test]
    fn gate_is_enforced() {
        assert!(matches!(theorem3_certificate(1, 1, 4), Err(Error::Gate { .. })));
    }

    #[test]
    fn lifted_certificate() {
        let c = theorem4_certificate(1, 1, 9).unwrap();
        assert_eq!((c.r, c.n_prime), (1, 8));
        assert_eq!(c.k0, theorem3_certificate(1, 1, 8).unwrap().k0);
        assert!(c.verdict);
        assert_eq!(c.bound, "M^I >= 2n^2 + O(n)");
        assert_eq!(theorem4_certificate(2, 3, 13).unwrap().bound, "M^I >= 3n^2/2 + O(n)");
    }
}
