//! Number-theoretic data attached to a `p:-q` resonance and a degree `n`.
//!
//! * `d = gcd(n-1, p+q)`, `n1 = (n-1)/d`, `q1 = (p+q)/d`
//! * `p'`, a divisor of `p` with `gcd(n-1-p', p p') = 1`
//! * `N1 = n-1-p'`, the residues `s_j` with `s_j p p' = d (j-2) (mod N1)` and
//!   `N2 = max s_j` over `1 <= j <= 3+p', j != 2`
//! * per-row indices `i_m`, `j_m`, `l_m` of the coefficient matrix

use std::collections::BTreeMap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};

/// The `s_j` table; only defined once `N1 > p' + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Congruence {
    #[serde(rename = "N2")]
    pub big_n2: u64,
    /// `j -> s_j` for `1 <= j <= 3 + p'`, `j != 2`.
    pub s_table: BTreeMap<u64, u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResonanceData {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub d: u64,
    pub n1: u64,
    pub q1: u64,
    pub p_prime: u64,
    /// `N1 = n - 1 - p'`, `None` when that is not positive.
    #[serde(rename = "N1")]
    pub big_n1: Option<u64>,
    /// `None` when `n` is too small for `N1 > p' + 1`.
    pub congruence: Option<Congruence>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RowIndexData {
    pub m: u64,
    pub i_m: u64,
    pub j_m: u64,
    pub l_m: u64,
}

impl ResonanceData {
    pub fn congruence(&self) -> Result<&Congruence> {
        self.congruence.as_ref().ok_or_else(|| {
            Error::Resonance(format!(
                "n = {} too small: N1 = n - 1 - p' must exceed p' + 1 = {}",
                self.n,
                self.p_prime + 1
            ))
        })
    }

    pub fn big_n1(&self) -> Result<u64> {
        self.big_n1.ok_or_else(|| {
            Error::Resonance(format!("N1 = n - 1 - p' is not positive for n = {}", self.n))
        })
    }

    pub fn big_n2(&self) -> Result<u64> {
        Ok(self.congruence()?.big_n2)
    }

    /// `i_m = m (p+q)/d - 1`.
    pub fn i_m(&self, m: u64) -> u64 {
        m * self.q1 - 1
    }

    /// Smallest degree for which the witness constructions are attempted.
    pub fn gate(&self) -> u64 {
        self.p + self.q + 3
    }

    pub fn check_gate(&self) -> Result<()> {
        if self.n < self.gate() {
            Err(Error::Gate {
                n: self.n,
                min: self.gate(),
            })
        } else {
            Ok(())
        }
    }
}

fn prime_factors(mut v: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut f = 2;
    while f * f <= v {
        if v.is_multiple_of(f) {
            out.push(f);
            while v.is_multiple_of(f) {
                v /= f;
            }
        }
        f += 1;
    }
    if v > 1 {
        out.push(v);
    }
    out
}

/// Product of the primes of `p` that do not divide `n - 1` (1 if none).
pub fn find_p_prime(p: u64, n: u64) -> u64 {
    prime_factors(p)
        .into_iter()
        .filter(|f| !(n - 1).is_multiple_of(*f))
        .product()
}

/// Inverse of `a` modulo `m` (`m >= 1`), if it exists.
pub(crate) fn mod_inverse(a: i64, m: i64) -> Option<i64> {
    if m == 1 {
        return Some(0);
    }
    let eg = a.rem_euclid(m).extended_gcd(&m);
    (eg.gcd == 1).then(|| eg.x.rem_euclid(m))
}

pub fn resonance_data(p: u64, q: u64, n: u64) -> Result<ResonanceData> {
    if p == 0 || q == 0 {
        return Err(Error::Resonance("p and q must be positive".into()));
    }
    if p.gcd(&q) != 1 {
        return Err(Error::Resonance(format!("gcd({p}, {q}) != 1")));
    }
    if p > q {
        return Err(Error::Resonance(format!("expected p <= q, got p = {p}, q = {q}")));
    }
    if n < 2 {
        return Err(Error::Resonance(format!("degree n = {n} must be at least 2")));
    }
    let d = (n - 1).gcd(&(p + q));
    let p_prime = find_p_prime(p, n);
    let big_n1 = (n - 1 > p_prime).then(|| n - 1 - p_prime);
    let congruence = match big_n1 {
        Some(b) if b > p_prime + 1 => Some(congruence_data(p, b, d, p_prime)?),
        _ => None,
    };
    Ok(ResonanceData {
        p,
        q,
        n,
        d,
        n1: (n - 1) / d,
        q1: (p + q) / d,
        p_prime,
        big_n1,
        congruence,
    })
}

fn congruence_data(p: u64, big_n1: u64, d: u64, p_prime: u64) -> Result<Congruence> {
    let modulus = big_n1 as i64;
    let inv = mod_inverse((p * p_prime) as i64, modulus).ok_or_else(|| {
        Error::Congruence(format!("p p' = {} not invertible mod N1 = {big_n1}", p * p_prime))
    })?;
    let mut s_table = BTreeMap::new();
    for j in (1..=3 + p_prime).filter(|&j| j != 2) {
        let rhs = d as i64 * (j as i64 - 2);
        let mut s = (rhs * inv).rem_euclid(modulus) as u64;
        if s == 0 {
            s = big_n1;
        }
        if s >= big_n1 {
            return Err(Error::Congruence(format!("s_{j} = {s} not below N1 = {big_n1}")));
        }
        s_table.insert(j, s);
    }
    let big_n2 = *s_table.values().max().expect("table has j = 1");
    Ok(Congruence {
        big_n2,
        s_table,
    })
}

/// Row data for row `m`: `i_m`, the unique `j_m` in `[1, N1]` with
/// `d (j_m - 2) = m p p' (mod N1)`, and `l_m` from
/// `d l_m = m p + (m p p' - d (j_m - 2)) / N1`.
///
/// `l_m` is the exponent of `y^N1` picked out of `(x^N1 + y^N1)^(i_m)`; it
/// can be 0 for small `m` when `d` is large, which is still a valid index.
pub fn row_index(rd: &ResonanceData, m: u64) -> Result<RowIndexData> {
    if m == 0 {
        return Err(Error::Congruence("row index m must be positive".into()));
    }
    let big_n1 = rd.big_n1()? as i64;
    let d = rd.d as i64;
    let ppp = (rd.p * rd.p_prime) as i64;
    let m_i = m as i64;
    let d_inv = mod_inverse(d, big_n1)
        .ok_or_else(|| Error::Congruence(format!("d = {d} not invertible mod N1 = {big_n1}")))?;
    // j - 2 = m p p' / d  (mod N1), folded into [1, N1]
    let shift = (m_i * ppp % big_n1 * d_inv).rem_euclid(big_n1);
    let j_m = (shift + 2 - 1).rem_euclid(big_n1) + 1;
    let num = m_i * ppp - d * (j_m - 2);
    if num % big_n1 != 0 {
        return Err(Error::Congruence(format!("N1 does not divide m p p' - d (j_m - 2) at m = {m}")));
    }
    let dl = m_i * rd.p as i64 + num / big_n1;
    if dl < 0 || dl % d != 0 {
        return Err(Error::Congruence(format!(
            "l_m is not a nonnegative integer at m = {m} (d l_m = {dl})"
        )));
    }
    Ok(RowIndexData {
        m,
        i_m: rd.i_m(m),
        j_m: j_m as u64,
        l_m: (dl / d) as u64,
    })
}
