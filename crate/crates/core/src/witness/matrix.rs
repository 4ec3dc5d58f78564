use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactpoly::{binomial, BivarPoly, Rational, Scalar};
use crate::resonance::{row_index, ResonanceData};

use super::choose::check_homogeneous;

/// Dense matrix with rows `m = 1..` and columns `j = 1..`; row `m` is
/// stored at index `m - 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffMatrix<S: Scalar> {
    rows: Vec<Vec<S>>,
    ncols: usize,
}

impl<S: Scalar> CoeffMatrix<S> {
    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::InvalidSystem("ragged matrix rows".into()));
        }
        Ok(CoeffMatrix { rows, ncols })
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    /// Entry `a_{mj}`, 1-based.
    pub fn entry(&self, m: usize, j: usize) -> &S {
        &self.rows[m - 1][j - 1]
    }

    /// First `k` rows.
    pub fn top(&self, k: usize) -> Self {
        CoeffMatrix {
            rows: self.rows[..k.min(self.rows.len())].to_vec(),
            ncols: self.ncols,
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> CoeffMatrix<T> {
        CoeffMatrix {
            rows: self.rows.iter().map(|r| r.iter().map(&f).collect()).collect(),
            ncols: self.ncols,
        }
    }

    /// `A v`.
    pub fn apply(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.ncols, "vector length");
        self.rows
            .iter()
            .map(|row| {
                let mut acc = row[0].mul_ref(&v[0]);
                for (a, x) in row.iter().zip(v).skip(1) {
                    acc.mul_add_assign(a, x);
                }
                acc
            })
            .collect()
    }

    /// Rows as lists of strings, for CSV or text output.
    pub fn to_strings(&self) -> Vec<Vec<String>> {
        self.rows
            .iter()
            .map(|r| r.iter().map(|c| c.to_string()).collect())
            .collect()
    }
}

impl<S: Scalar> Serialize for CoeffMatrix<S> {
    fn serialize<Ser: Serializer>(&self, ser: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        let mut seq = ser.serialize_seq(Some(self.rows.len()))?;
        for row in self.to_strings() {
            seq.serialize_element(&row)?;
        }
        seq.end()
    }
}

/// The `(n+1) x (n+2)` matrix `a_{mj} = [x^(q m n1 - n - 1 + j) y^(p m n1 + 2 - j)] U^(i_m)`.
pub fn build_matrix_a<S: Scalar>(rd: &ResonanceData, u: &BivarPoly<S>) -> Result<CoeffMatrix<S>> {
    build_matrix_rows(rd, u, rd.n as usize + 1)
}

/// Same definition, for rows `m = 1..=rows` (possibly more than `n + 1`).
pub fn build_matrix_rows<S: Scalar>(rd: &ResonanceData, u: &BivarPoly<S>, rows: usize) -> Result<CoeffMatrix<S>> {
    let n = rd.n as usize;
    check_homogeneous(u, n as u32 - 1)?;
    let ctx = u.ctx().clone();
    let (p, q, n1) = (rd.p as usize, rd.q as usize, rd.n1 as usize);
    // U(x, y) = x^(n-1) u(y/x)
    let sparse: Vec<(usize, S)> = u.terms().map(|(mono, c)| (mono.y as usize, c.clone())).collect();
    let len = p * rows * n1 + 2;
    let mut power = vec![S::zero_in(&ctx); len];
    power[0] = S::one_in(&ctx);
    let mut have = 0u64;
    let mut out = Vec::with_capacity(rows);
    for m in 1..=rows {
        let i_m = rd.i_m(m as u64);
        while have < i_m {
            power = mul_sparse(&power, &sparse, &ctx);
            have += 1;
        }
        let row = (1..=n + 2)
            .map(|j| {
                let xe = (q * m * n1) as i64 - n as i64 - 1 + j as i64;
                let ye = (p * m * n1 + 2) as i64 - j as i64;
                if xe < 0 || ye < 0 {
                    S::zero_in(&ctx)
                } else {
                    power[ye as usize].clone()
                }
            })
            .collect();
        out.push(row);
    }
    CoeffMatrix::from_rows(out)
}

fn mul_sparse<S: Scalar>(dense: &[S], sparse: &[(usize, S)], ctx: &S::Ctx) -> Vec<S> {
    let mut out = vec![S::zero_in(ctx); dense.len()];
    for (k, a) in dense.iter().enumerate() {
        if a.vanishes() {
            continue;
        }
        for (b, c) in sparse {
            if k + b < out.len() {
                out[k + b].mul_add_assign(a, c);
            }
        }
    }
    out
}

/// Binomial structure of the rows at `U = f`: `C(i_m, l_m)` at `j_m` and,
/// when `j_m <= 3 + p'` and `j_m + N1 <= n + 2`, `C(i_m, l_m - 1)` at
/// `j_m + N1`.
pub fn closed_form_rows(rd: &ResonanceData, rows: usize) -> Result<CoeffMatrix<Rational>> {
    let n = rd.n as usize;
    let big_n1 = rd.big_n1()? as usize;
    let mut out = Vec::with_capacity(rows);
    for m in 1..=rows {
        let ri = row_index(rd, m as u64)?;
        let (i, l, j) = (ri.i_m as i64, ri.l_m as i64, ri.j_m as usize);
        let mut row = vec![Rational::from_integer(0.into()); n + 2];
        if j <= n + 2 {
            row[j - 1] = Rational::from_integer(binomial(i, l));
        }
        if j as u64 <= 3 + rd.p_prime && j + big_n1 <= n + 2 {
            row[j + big_n1 - 1] = Rational::from_integer(binomial(i, l - 1));
        }
        out.push(row);
    }
    CoeffMatrix::from_rows(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, UniPoly};
    use crate::perturb::{linear_saddle_values, EpsForm, PerturbFamily};
    use crate::resonance::resonance_data;
    use crate::witness::choose::{build_u, build_u_symbolic, choose_g, f_poly, random_g};
    use num_traits::Zero;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct definition through the bivariate power.
    fn matrix_oracle(rd: &ResonanceData, u: &BivarPoly<Rational>, rows: usize) -> Vec<Vec<Rational>> {
        let n = rd.n as i64;
        (1..=rows as i64)
            .map(|m| {
                let pw = u.pow(rd.i_m(m as u64) as u32, None);
                (1..=n + 2)
                    .map(|j| {
                        let xe = rd.q as i64 * m * rd.n1 as i64 - n - 1 + j;
                        let ye = rd.p as i64 * m * rd.n1 as i64 + 2 - j;
                        pw.coeff_signed(xe, ye)
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn monomial_unit() {
        let rd = resonance_data(1, 1, 4).unwrap();
        let a = build_matrix_a(&rd, &BivarPoly::from_ints(&[(3, 0, 1, 1)])).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (5, 6));
        for m in 1..=5 {
            for j in 1..=6 {
                let want = if (m, j) == (1, 5) { rat(1, 1) } else { rat(0, 1) };
                assert_eq!(a.entry(m, j), &want, "({m},{j})");
            }
        }
    }

    #[test]
    fn not_homogeneous_rejected() {
        let rd = resonance_data(1, 1, 4).unwrap();
        let u = BivarPoly::from_ints(&[(3, 0, 1, 1), (1, 0, 1, 1)]);
        assert!(matches!(build_matrix_a(&rd, &u), Err(Error::NotHomogeneous { expected: 3 })));
    }

    #[test]
    fn matches_bivariate_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, q, n) in [(1, 1, 6), (1, 2, 6), (2, 3, 12), (1, 3, 7)] {
            let rd = resonance_data(p, q, n).unwrap();
            let g = random_g(&rd, rng.gen(), 0);
            let u = build_u(&rd, &g, &rat(rng.gen_range(1..4), 2)).unwrap();
            let rows = n as usize + 1;
            let a = build_matrix_a(&rd, &u).unwrap();
            assert_eq!(a.rows(), matrix_oracle(&rd, &u, rows).as_slice(), "({p},{q},{n})");
        }
    }

    #[test]
    fn binomial_rows_at_f() {
        for (p, q, n) in [(1, 1, 6), (1, 1, 8), (1, 2, 6), (1, 2, 9), (2, 3, 12), (1, 3, 7)] {
            let rd = resonance_data(p, q, n).unwrap();
            let rows = (rd.big_n1().unwrap() + rd.big_n2().unwrap()).max(n + 1) as usize;
            let a = build_matrix_rows(&rd, &f_poly(&rd).unwrap(), rows).unwrap();
            assert_eq!(a, closed_form_rows(&rd, rows).unwrap(), "({p},{q},{n})");
        }
    }

    #[test]
    fn leading_block_is_a_permutation() {
        for (p, q, n) in [(1, 1, 8), (1, 2, 9), (2, 3, 12), (2, 5, 16)] {
            let rd = resonance_data(p, q, n).unwrap();
            let n1 = rd.big_n1().unwrap() as usize;
            let a = build_matrix_rows(&rd, &f_poly(&rd).unwrap(), n1).unwrap();
            let mut seen = vec![false; n1];
            for m in 1..=n1 {
                let nz: Vec<usize> = (1..=n1).filter(|&j| !a.entry(m, j).is_zero()).collect();
                assert_eq!(nz.len(), 1, "({p},{q},{n}) row {m}");
                assert!(!seen[nz[0] - 1]);
                seen[nz[0] - 1] = true;
            }
        }
    }

    #[test]
    fn rows_are_linear_saddle_values() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, q, n) in [(1, 1, 6), (1, 2, 6), (1, 3, 7)] {
            let rd = resonance_data(p, q, n).unwrap();
            let u = build_u(&rd, &choose_g(&rd).unwrap().g.unwrap(), &rat(1, 1)).unwrap();
            let a = build_matrix_a(&rd, &u).unwrap();
            for _ in 0..5 {
                let xi: Vec<Rational> = (0..n + 2).map(|_| rat(rng.gen_range(-4..=4), 1)).collect();
                let (px, qy) = super::super::synth::witness_pq(&xi, n as u32);
                let fam = PerturbFamily::new(p as u32, q as u32, px, qy, Some(u.clone()), EpsForm::Rescaled).unwrap();
                let k_max = ((n + 1) * rd.n1) as u32;
                let vals = linear_saddle_values(&fam, k_max).unwrap();
                let ax = a.apply(&xi);
                for m in 1..=(n + 1) as usize {
                    assert_eq!(vals[m * rd.n1 as usize - 1], ax[m - 1], "({p},{q},{n}) m={m}");
                }
            }
        }
    }

    #[test]
    fn symbolic_matrix_specializes() {
        let rd = resonance_data(1, 2, 6).unwrap();
        let g = choose_g(&rd).unwrap().g.unwrap();
        let sym = build_matrix_a(&rd, &build_u_symbolic(&rd, &g).unwrap()).unwrap();
        let mu = rat(-2, 5);
        let at = sym.map(|c: &UniPoly| c.eval(&mu));
        assert_eq!(at, build_matrix_a(&rd, &build_u(&rd, &g, &mu).unwrap()).unwrap());
    }

    #[test]
    fn binomial_ratio_identity() {
        for i in 1..30i64 {
            for l in 1..=i {
                let lhs = Rational::new(binomial(i, l), binomial(i, l - 1));
                assert_eq!(lhs, rat(i - l + 1, l));
            }
        }
    }
}
