use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{format_rational, parse_rational, BivarPoly, Monomial, Rational};
use crate::error::{Error, Result};

/// One term `c * x^i * y^j` of a polynomial literal; `c` is `"num"` or
/// `"num/den"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermLiteral {
    pub i: u32,
    pub j: u32,
    pub c: String,
}

/// Canonical literal list: descending grlex order, reduced coefficients.
pub fn poly_to_literals(poly: &BivarPoly<Rational>) -> Vec<TermLiteral> {
    poly.terms()
        .rev()
        .map(|(m, c)| TermLiteral {
            i: m.x,
            j: m.y,
            c: format_rational(c),
        })
        .collect()
}

/// Parses a literal list. `field` names the polynomial in error messages.
///
/// Repeated exponent pairs are rejected; zero coefficients are accepted and
/// dropped.
pub fn poly_from_literals(field: &str, terms: &[TermLiteral]) -> Result<BivarPoly<Rational>> {
    let mut seen = BTreeSet::new();
    let mut poly = BivarPoly::zero(());
    for (k, t) in terms.iter().enumerate() {
        let at = format!("{field}[{k}]");
        if !seen.insert((t.i, t.j)) {
            return Err(Error::parse(
                at,
                format!("duplicate term x^{} y^{}", t.i, t.j),
            ));
        }
        let c = parse_rational(&t.c).map_err(|e| match e {
            Error::Parse { msg, .. } => Error::parse(format!("{field}[{k}].c"), msg),
            other => other,
        })?;
        poly.add_term(Monomial::new(t.i, t.j), &c);
    }
    Ok(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_order_and_reduction() {
        let lits = vec![
            TermLiteral { i: 0, j: 2, c: "2/4".into() },
            TermLiteral { i: 3, j: 0, c: "-3".into() },
            TermLiteral { i: 1, j: 1, c: "0".into() },
        ];
        let p = poly_from_literals("P", &lits).unwrap();
        let out = poly_to_literals(&p);
        assert_eq!(
            out,
            vec![
                TermLiteral { i: 3, j: 0, c: "-3".into() },
                TermLiteral { i: 0, j: 2, c: "1/2".into() },
            ]
        );
    }

    #[test]
    fn errors_are_position_annotated() {
        let dup = vec![
            TermLiteral { i: 1, j: 0, c: "1".into() },
            TermLiteral { i: 1, j: 0, c: "2".into() },
        ];
        let err = poly_from_literals("Q", &dup).unwrap_err();
        assert_eq!(
            err,
            Error::Parse { at: "Q[1]".into(), msg: "duplicate term x^1 y^0".into() }
        );
        let bad = vec![TermLiteral { i: 1, j: 0, c: "1/0".into() }];
        let err = poly_from_literals("P", &bad).unwrap_err();
        assert!(matches!(err, Error::Parse { ref at, .. } if at == "P[0].c"));
    }

    proptest! {
        #[test]
        fn json_round_trip_is_bit_exact(
            terms in prop::collection::btree_map((0u32..6, 0u32..6), (-50i64..50, 1i64..20), 0..8)
        ) {
            let p = BivarPoly::from_ints(
                &terms.iter().map(|(&(i, j), &(n, d))| (i, j, n, d)).collect::<Vec<_>>(),
            );
            let json = serde_json::to_string(&poly_to_literals(&p)).unwrap();
            let back: Vec<TermLiteral> = serde_json::from_str(&json).unwrap();
            let q = poly_from_literals("P", &back).unwrap();
            prop_assert_eq!(&q, &p);
            prop_assert_eq!(serde_json::to_string(&poly_to_literals(&q)).unwrap(), json);
        }
    }
}
