use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{BivarPoly, Rational, Scalar, UniPoly};
use crate::resonance::{row_index, ResonanceData};

/// Which rule produced the perturbation direction `g` of `U = f + mu g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GBranch {
    /// `g = sum x^(n-1-delta_m) y^delta_m`, used when `(p-1)p' > 1` or
    /// `d > 2 + p'`.
    Generic,
    /// One of the fixed small-parameter rows, keyed by `(p, p', d)`.
    Table { p: u64, p_prime: u64, d: u64 },
    /// Random homogeneous `g` drawn from `ChaCha8Rng::seed_from_u64(seed)`.
    Random { seed: u64, attempt: u32 },
}

impl fmt::Display for GBranch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GBranch::Generic => write!(f, "generic"),
            GBranch::Table { p, p_prime, d } => write!(f, "table p={p} p'={p_prime} d={d}"),
            GBranch::Random { seed, attempt } => write!(f, "random seed={seed} attempt={attempt}"),
        }
    }
}

/// Outcome of the explicit choice of `g`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GChoice {
    pub branch: GBranch,
    /// Exponent pairs `(x, y)` of the monomials of `g`; may be out of range
    /// at small `n`.
    pub exponents: Vec<(i64, i64)>,
    /// `g` itself, `None` when some exponent is negative or some `delta`
    /// leaves `(0, N1)`.
    #[serde(skip)]
    pub g: Option<BivarPoly<Rational>>,
}

/// `f = x^p' (x^N1 + y^N1)`.
pub fn f_poly(rd: &ResonanceData) -> Result<BivarPoly<Rational>> {
    let n1 = rd.big_n1()? as u32;
    let pp = rd.p_prime as u32;
    Ok(BivarPoly::from_ints(&[(pp + n1, 0, 1, 1), (pp, n1, 1, 1)]))
}

/// The explicit `g` that makes `A(mu)` full rank for large `n`.
pub fn choose_g(rd: &ResonanceData) -> Result<GChoice> {
    let (p, pp, d) = (rd.p, rd.p_prime, rd.d);
    let n = rd.n as i64;
    let big_n1 = rd.big_n1()? as i64;
    let j = |m: u64| -> Result<i64> { Ok(row_index(rd, m)?.j_m as i64) };
    let generic = (p - 1) * pp > 1 || d > 2 + pp;
    let (branch, exponents, deltas_ok) = if generic {
        let mut deltas = Vec::new();
        for m in 1..=1 + pp {
            deltas.push(j(m)? - (pp as i64 + 4 - m as i64));
        }
        deltas.push(j(2 + pp)? - 1);
        let ok = deltas.iter().all(|&dl| 0 < dl && dl < big_n1);
        let exps = deltas.iter().map(|&dl| (n - 1 - dl, dl)).collect();
        (GBranch::Generic, exps, ok)
    } else {
        let exps = match (p, pp, d) {
            (1, 1, 1) => vec![(n - 5, 4)],
            (1, 1, 2) => vec![(n + 3 - j(1)?, j(1)? - 4), (n - j(3)?, j(3)? - 1)],
            (1, 1, 3) => vec![(n + 3 - j(1)?, j(1)? - 4), (n - j(2)?, j(2)? - 1)],
            (2, 1, 1) => vec![(n - 4, 3), (n - 8, 7)],
            (2, 1, 3) => vec![(n + 2 - j(1)?, j(1)? - 3), (n - j(2)?, j(2)? - 1)],
            _ => {
                return Err(Error::Resonance(format!(
                    "no rule for g at (p, p', d) = ({p}, {pp}, {d})"
                )))
            }
        };
        (GBranch::Table { p, p_prime: pp, d }, exps, true)
    };
    let valid = deltas_ok && exponents.iter().all(|&(a, b)| a >= 0 && b >= 0);
    let g = valid.then(|| {
        let mut g = BivarPoly::zero(());
        for &(a, b) in &exponents {
            g = g
                .add(&BivarPoly::from_ints(&[(a as u32, b as u32, 1, 1)]))
                .expect("rational context");
        }
        g
    });
    Ok(GChoice {
        branch,
        exponents,
        g,
    })
}

/// Random homogeneous `g` of degree `n - 1` with coefficients in
/// `{-2, ..., 2}`, at least one nonzero.
pub fn random_g(rd: &ResonanceData, seed: u64, attempt: u32) -> BivarPoly<Rational> {
    let deg = (rd.n - 1) as u32;
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt as u64));
    loop {
        let terms: Vec<(u32, u32, i64, i64)> = (0..=deg)
            .filter_map(|j| {
                let c: i64 = rng.gen_range(-2..=2);
                (c != 0).then_some((deg - j, j, c, 1))
            })
            .collect();
        if !terms.is_empty() {
            return BivarPoly::from_ints(&terms);
        }
    }
}

/// `f + mu g` at a rational `mu`.
pub fn build_u(rd: &ResonanceData, g: &BivarPoly<Rational>, mu: &Rational) -> Result<BivarPoly<Rational>> {
    f_poly(rd)?.add(&g.scale_rational(mu))
}

/// `f + mu g` with `mu` kept as an indeterminate.
pub fn build_u_symbolic(rd: &ResonanceData, g: &BivarPoly<Rational>) -> Result<BivarPoly<UniPoly>> {
    let f = f_poly(rd)?.map_coeffs((), |c| UniPoly::constant(c.clone()));
    let mg = g.map_coeffs((), |c| UniPoly::from_coeffs(vec![Rational::from_integer(0.into()), c.clone()]));
    f.add(&mg)
}

pub(crate) fn check_homogeneous<S: Scalar>(u: &BivarPoly<S>, degree: u32) -> Result<()> {
    if u.is_zero() || !u.is_homogeneous(degree) {
        return Err(Error::NotHomogeneous { expected: degree });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::rat;
    use crate::resonance::resonance_data;

    #[test]
    fn f_examples() {
        let rd = resonance_data(1, 1, 6).unwrap();
        assert_eq!(f_poly(&rd).unwrap(), BivarPoly::from_ints(&[(5, 0, 1, 1), (1, 4, 1, 1)]));
        for (p, q, n) in [(1, 2, 6), (2, 3, 12), (1, 3, 7)] {
            let rd = resonance_data(p, q, n).unwrap();
            let f = f_poly(&rd).unwrap();
            assert_eq!(f.len(), 2);
            assert!(f.is_homogeneous(n as u32 - 1));
        }
    }

    #[test]
    fn table_rows() {
        // p = p' = 1, d = 1
        let g = choose_g(&resonance_data(1, 1, 6).unwrap()).unwrap();
        assert_eq!(g.branch, GBranch::Table { p: 1, p_prime: 1, d: 1 });
        assert_eq!(g.g.unwrap(), BivarPoly::from_ints(&[(1, 4, 1, 1)]));
        let u = build_u(&resonance_data(1, 1, 6).unwrap(), &BivarPoly::from_ints(&[(1, 4, 1, 1)]), &rat(1, 1)).unwrap();
        assert_eq!(u, BivarPoly::from_ints(&[(5, 0, 1, 1), (1, 4, 2, 1)]));
        // p = 2, p' = 1, d = 1 needs 2 | n - 1
        let rd = resonance_data(2, 3, 11).unwrap();
        assert_eq!((rd.p_prime, rd.d), (1, 5));
        let rd = resonance_data(2, 5, 9).unwrap();
        assert_eq!((rd.p_prime, rd.d), (1, 1));
        let g = choose_g(&rd).unwrap();
        assert_eq!(g.exponents, vec![(5, 3), (1, 7)]);
        // p = p' = 1, d = 3
        let rd = resonance_data(1, 2, 7).unwrap();
        assert_eq!(rd.d, 3);
        let g = choose_g(&rd).unwrap();
        let j1 = row_index(&rd, 1).unwrap().j_m as i64;
        let j2 = row_index(&rd, 2).unwrap().j_m as i64;
        assert_eq!(g.exponents, vec![(7 + 3 - j1, j1 - 4), (7 - j2, j2 - 1)]);
    }

    #[test]
    fn generic_deltas_in_range() {
        for (p, q, n) in [(2, 3, 24), (2, 3, 26), (3, 4, 36), (2, 5, 30)] {
            let rd = resonance_data(p, q, n).unwrap();
            let g = choose_g(&rd).unwrap();
            assert_eq!(g.branch, GBranch::Generic, "({p},{q},{n})");
            let n1 = rd.big_n1.unwrap() as i64;
            for &(a, b) in &g.exponents {
                assert!(0 < b && b < n1, "({p},{q},{n}) delta {b}");
                assert_eq!(a + b, n as i64 - 1);
            }
            assert!(g.g.is_some());
        }
    }

    #[test]
    fn generic_deltas_can_leave_range_at_small_n() {
        // j_2 wraps around mod N1 = 9
        let rd = resonance_data(2, 3, 12).unwrap();
        let g = choose_g(&rd).unwrap();
        assert_eq!(g.branch, GBranch::Generic);
        assert_eq!(g.exponents[1].1, -3);
        assert!(g.g.is_none());
    }

    #[test]
    fn every_table_row_is_homogeneous() {
        for (p, q) in [(1, 1), (1, 2), (1, 3), (2, 3), (2, 5), (1, 4)] {
            for n in (p + q + 3)..=20 {
                let Ok(rd) = resonance_data(p, q, n) else { continue };
                if rd.congruence.is_none() {
                    continue;
                }
                let g = choose_g(&rd).unwrap();
                for &(a, b) in &g.exponents {
                    assert_eq!(a + b, n as i64 - 1, "({p},{q},{n}) {:?}", g.branch);
                }
            }
        }
    }

    #[test]
    fn small_n_table_row_is_rejected() {
        let rd = resonance_data(1, 1, 4).unwrap();
        let g = choose_g(&rd).unwrap();
        assert_eq!(g.exponents, vec![(-1, 4)]);
        assert!(g.g.is_none());
    }

    #[test]
    fn random_g_is_seeded() {
        let rd = resonance_data(1, 1, 6).unwrap();
        assert_eq!(random_g(&rd, 5, 0), random_g(&rd, 5, 0));
        assert!(random_g(&rd, 5, 1).is_homogeneous(5));
    }

    #[test]
    fn symbolic_u_specializes() {
        let rd = resonance_data(1, 2, 6).unwrap();
        let g = choose_g(&rd).unwrap().g.unwrap();
        let sym = build_u_symbolic(&rd, &g).unwrap();
        let at = sym.map_coeffs((), |c| c.eval(&rat(3, 7)));
        assert_eq!(at, build_u(&rd, &g, &rat(3, 7)).unwrap());
    }
}
