use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactpoly::{format_rational, rat, Rational, UniPoly};

use super::matrix::CoeffMatrix;

/// Exact rank with the pivots `(row, col)` (1-based, original row numbers)
/// in elimination order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankResult {
    pub rank: usize,
    pub pivots: Vec<(usize, usize)>,
}

/// How a symbolic rank was established.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "kebab-case")]
pub enum RankMethod {
    /// Full rank at one rational `mu`, which bounds the generic rank from
    /// below; the pivots are those of that specialization.
    Specialization {
        #[serde(serialize_with = "ser_rat")]
        mu: Rational,
    },
    /// Fraction-free elimination over `Q[mu]`.
    Elimination,
}

fn ser_rat<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymbolicRank {
    #[serde(flatten)]
    pub result: RankResult,
    #[serde(flatten)]
    pub method: RankMethod,
}

/// Ring with exact division, enough for Bareiss elimination.
trait BareissRing: Clone {
    fn is_zero(&self) -> bool;
    fn one() -> Self;
    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self;
    fn div_exact(&self, by: &Self) -> Self;
}

impl BareissRing for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn one() -> Self {
        One::one()
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        a * b - c * d
    }

    fn div_exact(&self, by: &Self) -> Self {
        let (q, r) = self.div_rem(by);
        debug_assert!(Zero::is_zero(&r), "inexact Bareiss division");
        q
    }
}

impl BareissRing for UniPoly {
    fn is_zero(&self) -> bool {
        self.coeffs().is_empty()
    }

    fn one() -> Self {
        UniPoly::constant(Rational::one())
    }

    fn mul_sub(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        use crate::exactpoly::Scalar;
        a.mul_ref(b).sub_ref(&c.mul_ref(d))
    }

    fn div_exact(&self, by: &Self) -> Self {
        let (q, r) = poly_div_rem(self, by);
        debug_assert!(r.coeffs().is_empty(), "inexact Bareiss division");
        q
    }
}

pub(crate) fn poly_div_rem(a: &UniPoly, b: &UniPoly) -> (UniPoly, UniPoly) {
    let bc = b.coeffs();
    let lead = bc.last().expect("division by zero polynomial");
    let mut rem = a.coeffs().to_vec();
    if rem.len() < bc.len() {
        return (UniPoly::default(), a.clone());
    }
    let mut quot = vec![Rational::zero(); rem.len() - bc.len() + 1];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + bc.len() - 1] / lead;
        if !c.is_zero() {
            for (t, b) in bc.iter().enumerate() {
                rem[k + t] -= &c * b;
            }
        }
        quot[k] = c;
    }
    rem.truncate(bc.len() - 1);
    (UniPoly::from_coeffs(quot), UniPoly::from_coeffs(rem))
}

fn bareiss<R: BareissRing>(mut m: Vec<Vec<R>>) -> RankResult {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut order: Vec<usize> = (0..nrows).collect();
    let mut prev = R::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        order.swap(r, pr);
        for i in r + 1..nrows {
            for k in c + 1..ncols {
                m[i][k] = R::mul_sub(&m[r][c], &m[i][k], &m[i][c], &m[r][k]).div_exact(&prev);
            }
            m[i][c] = R::mul_sub(&m[r][c], &m[i][c], &m[i][c], &m[r][c]);
        }
        prev = m[r][c].clone();
        pivots.push((order[r] + 1, c + 1));
        r += 1;
    }
    RankResult { rank: r, pivots }
}

/// Exact rank by fraction-free elimination after clearing row denominators.
pub fn rank_exact(a: &CoeffMatrix<Rational>) -> RankResult {
    let rows = a
        .rows()
        .iter()
        .map(|row| {
            let l = row.iter().fold(<BigInt as One>::one(), |acc, c| acc.lcm(c.denom()));
            row.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect()
        })
        .collect();
    bareiss(rows)
}

/// Fraction-free elimination over `Q[mu]`.
pub fn rank_polynomial(a: &CoeffMatrix<UniPoly>) -> RankResult {
    bareiss(a.rows().to_vec())
}

/// Sample points `1, 2, 1/2, 3, 1/3, ..., k, 1/k`.
pub fn mu_candidates(k: i64) -> Vec<Rational> {
    let mut out = vec![rat(1, 1)];
    for t in 2..=k {
        out.push(rat(t, 1));
        out.push(rat(1, t));
    }
    out
}

/// Rank over `Q(mu)`: tries the specializations first (any full-rank one
/// settles it) and falls back to elimination over `Q[mu]`.
pub fn rank_symbolic(a: &CoeffMatrix<UniPoly>, candidates: &[Rational]) -> SymbolicRank {
    let full = a.nrows().min(a.ncols());
    for mu in candidates {
        let r = rank_exact(&a.map(|c| c.eval(mu)));
        if r.rank == full {
            return SymbolicRank {
                result: r,
                method: RankMethod::Specialization { mu: mu.clone() },
            };
        }
    }
    SymbolicRank {
        result: rank_polynomial(a),
        method: RankMethod::Elimination,
    }
}

/// Solution of `A xi = target` with one column held at zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub xi: Vec<Rational>,
    /// The column (1-based) whose variable was set to zero.
    pub free_column: usize,
}

/// Solves the `r x (r+1)` system `A xi = target` exactly, setting the
/// variable of column `free` to zero; if the remaining square block is
/// singular the other columns are tried in order.
pub fn solve_target(a: &CoeffMatrix<Rational>, target: &[Rational], free: usize) -> Result<Solution> {
    let (nr, nc) = (a.nrows(), a.ncols());
    if nc != nr + 1 || target.len() != nr {
        return Err(Error::InvalidSystem(format!(
            "solve_target needs an r x (r+1) system, got {nr} x {nc} with {} targets",
            target.len()
        )));
    }
    let order = std::iter::once(free).chain((1..=nc).filter(|&c| c != free));
    for col in order {
        let Some(reduced) = solve_square(a, target, col) else {
            continue;
        };
        let mut xi = reduced;
        xi.insert(col - 1, Rational::zero());
        if a.apply(&xi) != target {
            return Err(Error::Falsified("A xi differs from the target after solving".into()));
        }
        return Ok(Solution {
            xi,
            free_column: col,
        });
    }
    let rank = rank_exact(a).rank;
    Err(Error::RankDeficient { rank, required: nr })
}

fn solve_square(a: &CoeffMatrix<Rational>, target: &[Rational], skip: usize) -> Option<Vec<Rational>> {
    let n = a.nrows();
    let mut m: Vec<Vec<Rational>> = a
        .rows()
        .iter()
        .zip(target)
        .map(|(row, t)| {
            let mut r: Vec<Rational> = row
                .iter()
                .enumerate()
                .filter(|&(j, _)| j + 1 != skip)
                .map(|(_, c)| c.clone())
                .collect();
            r.push(t.clone());
            r
        })
        .collect();
    for c in 0..n {
        let pr = (c..n).find(|&i| !m[i][c].is_zero())?;
        m.swap(c, pr);
        let inv = m[c][c].recip();
        for k in c..=n {
            m[c][k] = &m[c][k] * &inv;
        }
        for i in 0..n {
            if i != c && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in c..=n {
                    let delta = &f * &m[c][k];
                    m[i][k] -= delta;
                }
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn mat(rows: &[&[i64]]) -> CoeffMatrix<Rational> {
        CoeffMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| rat(c, 1)).collect()).collect()).unwrap()
    }

    /// Rank by plain Gaussian elimination over the rationals.
    fn rank_oracle(a: &CoeffMatrix<Rational>) -> usize {
        let mut m = a.rows().to_vec();
        let mut r = 0;
        for c in 0..a.ncols() {
            let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
            m.swap(r, p);
            for i in r + 1..m.len() {
                let f = &m[i][c] / &m[r][c];
                for k in c..a.ncols() {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
            r += 1;
        }
        r
    }

    #[test]
    fn small_ranks() {
        assert_eq!(rank_exact(&mat(&[&[1, 0], &[0, 1]])).rank, 2);
        assert_eq!(rank_exact(&mat(&[&[1, 2], &[2, 4]])).rank, 1);
        let r = rank_exact(&mat(&[&[0, 0, 1], &[0, 2, 0]]));
        assert_eq!(r.pivots, vec![(2, 2), (1, 3)]);
    }

    #[test]
    fn toy_solve() {
        let a = mat(&[&[1, 0, 0], &[0, 1, 0]]);
        let s = solve_target(&a, &[rat(0, 1), rat(1, 1)], 3).unwrap();
        assert_eq!(s.xi, vec![rat(0, 1), rat(1, 1), rat(0, 1)]);
        assert_eq!(s.free_column, 3);
        // free column 1 leaves a singular block; another column takes over
        let s = solve_target(&a, &[rat(0, 1), rat(1, 1)], 1).unwrap();
        assert_eq!(s.free_column, 3);
        let deficient = mat(&[&[1, 1, 0], &[2, 2, 0]]);
        assert!(matches!(
            solve_target(&deficient, &[rat(0, 1), rat(1, 1)], 3),
            Err(Error::RankDeficient { rank: 1, required: 2 })
        ));
    }

    #[test]
    fn polynomial_division() {
        let a = UniPoly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let b = UniPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]);
        let (q, r) = poly_div_rem(&a, &b);
        assert_eq!(q, UniPoly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]));
        assert!(r.coeffs().is_empty());
    }

    #[test]
    fn symbolic_rank_falls_back_to_elimination() {
        // det = mu^2 - 2 has no rational root
        let p = |c: &[i64]| UniPoly::from_coeffs(c.iter().map(|&v| rat(v, 1)).collect());
        let a = CoeffMatrix::from_rows(vec![vec![p(&[0, 1]), p(&[2])], vec![p(&[1]), p(&[0, 1])]]).unwrap();
        let s = rank_symbolic(&a, &mu_candidates(3));
        assert_eq!(s.result.rank, 2);
        assert!(matches!(s.method, RankMethod::Specialization { .. }));
        // (mu - 1) kills the only candidate, elimination still finds rank 2
        let b = CoeffMatrix::from_rows(vec![vec![p(&[-1, 1]), p(&[0])], vec![p(&[0]), p(&[0, 0, 1])]]).unwrap();
        let s = rank_symbolic(&b, &[rat(1, 1)]);
        assert_eq!(s.result.rank, 2);
        assert_eq!(s.method, RankMethod::Elimination);
        let z = CoeffMatrix::from_rows(vec![vec![p(&[0, 1]), p(&[0, 2])], vec![p(&[1]), p(&[2])]]).unwrap();
        assert_eq!(rank_symbolic(&z, &mu_candidates(3)).result.rank, 1);
    }

    proptest! {
        #[test]
        fn bareiss_matches_gauss(entries in prop::collection::vec(-3i64..=3, 20), zero_row in any::<bool>()) {
            let mut rows: Vec<Vec<Rational>> = entries.chunks(5).map(|c| c.iter().map(|&v| rat(v, 2)).collect()).collect();
            if zero_row {
                rows[2] = rows[0].iter().zip(&rows[1]).map(|(a, b)| a + b).collect();
            }
            let a = CoeffMatrix::from_rows(rows).unwrap();
            prop_assert_eq!(rank_exact(&a).rank, rank_oracle(&a));
        }

        #[test]
        fn solution_satisfies_system(entries in prop::collection::vec(-4i64..=4, 12), t in prop::collection::vec(-3i64..=3, 3)) {
            let a = CoeffMatrix::from_rows(entries.chunks(4).map(|c| c.iter().map(|&v| rat(v, 1)).collect()).collect()).unwrap();
            let target: Vec<Rational> = t.iter().map(|&v| rat(v, 1)).collect();
            match solve_target(&a, &target, 4) {
                Ok(s) => {
                    prop_assert_eq!(a.apply(&s.xi), target);
                    prop_assert!(s.xi[s.free_column - 1].is_zero());
                }
                Err(Error::RankDeficient { rank, .. }) => prop_assert!(rank < 3),
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
