//! The acceptance suite: eleven exact checks, each reported as one line.

use std::fmt;
use std::time::Instant;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Result;
use crate::exactpoly::{BivarPoly, Rational};
use crate::perturb::{jet_saddle_values, linear_saddle_coeff, linear_saddle_values, EpsForm, PerturbFamily};
use crate::resonance::resonance_data;
use crate::saddle::{saddle_order, saddle_values_integral, saddle_values_nf, SaddleOrder, SaddleSystem};
use crate::witness::{
    build_matrix_a, certify_unit, closed_form_rows, f_poly, synth_theorem1, synth_theorem2, theorem3_certificate,
    SynthOptions,
};

/// Titles of the criteria, indexed from 1.
pub const CRITERIA: [&str; 11] = [
    "cross-engine saddle order agreement",
    "homogeneous vanishing off multiples of n1",
    "linear part equals resonant coefficients",
    "coefficient extraction equals rescaled jet engine",
    "binomial row structure at U = f",
    "full rank of A(mu)",
    "witness of first-order saddle order 35 at (1,1,6)",
    "eps-refinement at (1,1,4), J = 2",
    "degree lift preserves first-order transcript",
    "non-membership certificates",
    "number-theoretic invariants of N1, N2, s_j",
];

/// Parameter grid shared by the matrix criteria.
pub const MATRIX_GRID: [(u64, u64, u64); 6] = [(1, 1, 6), (1, 1, 8), (1, 2, 6), (1, 2, 9), (2, 3, 12), (1, 3, 7)];

#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Outcome {
    /// The one-line summary, optionally with the wall time.
    pub fn line(&self, timing: bool) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        let mut s = format!("[{status}] criterion {:>2}: {}: {}", self.id, self.title, self.detail);
        if timing {
            s.push_str(&format!(" ({:.1} s)", self.seconds));
        }
        s
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.line(true))
    }
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize) -> Outcome {
    assert!((1..=CRITERIA.len()).contains(&id), "no criterion {id}");
    let start = Instant::now();
    let result = match id {
        1 => engine_agreement(),
        2 => homogeneous_vanishing(),
        3 => linear_part(),
        4 => extraction(),
        5 => binomial_structure(),
        6 => full_rank(),
        7 => witness_1_1_6(),
        8 => refinement(),
        9 => lift(),
        10 => certificates(),
        _ => number_theory(),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    Outcome {
        id,
        title: CRITERIA[id - 1],
        passed,
        detail,
        seconds: start.elapsed().as_secs_f64(),
    }
}

pub fn run_all() -> Vec<Outcome> {
    (1..=CRITERIA.len()).map(run).collect()
}

type Check = Result<(bool, String)>;

fn random_poly(rng: &mut ChaCha8Rng, lo: u32, hi: u32, density: f64, c: i64) -> BivarPoly<Rational> {
    let mut t = Vec::new();
    for d in lo..=hi {
        for j in 0..=d {
            if rng.gen_bool(density) {
                let v = rng.gen_range(-c..=c);
                if v != 0 {
                    t.push((d - j, j, v, 1));
                }
            }
        }
    }
    BivarPoly::from_ints(&t)
}

const SMALL_PAIRS: [(u32, u32); 7] = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2)];

fn engine_agreement() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut agree, mut total, mut deep) = (0, 0, 0);
    let mut bad = Vec::new();
    for i in 0..100 {
        let (p, q) = SMALL_PAIRS[i % SMALL_PAIRS.len()];
        let density = [0.2, 0.4, 0.7][i % 3];
        let sys = SaddleSystem::new(
            p,
            q,
            random_poly(&mut rng, 2, 4, density, 2),
            random_poly(&mut rng, 2, 4, density, 2),
        )?;
        let r = saddle_order(&sys, 10)?;
        total += 1;
        if r.agree {
            agree += 1;
        } else {
            bad.push(format!("#{i} ({p},{q}): {} vs {}", r.normal_form, r.first_integral));
        }
        if r.normal_form != SaddleOrder::Finite(1) {
            deep += 1;
        }
    }
    let mut detail = format!("{agree}/{total} agree, {deep} with order > 1");
    if !bad.is_empty() {
        detail.push_str(&format!("; mismatches: {}", bad.join(", ")));
    }
    Ok((agree == total, detail))
}

fn homogeneous_vanishing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let pairs = [(1, 1), (1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1), (2, 3), (3, 2)];
    let (mut systems, mut checked, mut violations) = (0, 0, Vec::new());
    for (p, q) in pairs {
        for n in [3u32, 4, 5] {
            let sys = SaddleSystem::new(p, q, random_poly(&mut rng, n, n, 0.8, 2), random_poly(&mut rng, n, n, 0.8, 2))?;
            let n1 = (n - 1) / num_integer::gcd(n - 1, p + q);
            let nf = saddle_values_nf(&sys, 12)?;
            let fi = saddle_values_integral(&sys, 12)?;
            systems += 1;
            for k in (1..=12u32).filter(|k| k % n1 != 0) {
                checked += 1;
                let i = k as usize - 1;
                if !nf[i].value.is_zero() || !fi[i].value.is_zero() {
                    violations.push(format!("({p},{q},n={n}) k={k}"));
                }
            }
        }
    }
    let detail = format!("{systems} systems, {checked} constrained values, {} nonzero", violations.len());
    Ok((violations.is_empty() && systems >= 20, detail))
}

fn linear_part() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut fams, mut bad) = (0, 0);
    for i in 0..20 {
        let (p, q) = SMALL_PAIRS[i % SMALL_PAIRS.len()];
        let fam = PerturbFamily::new(
            p,
            q,
            random_poly(&mut rng, 2, 8, 0.5, 3),
            random_poly(&mut rng, 2, 8, 0.5, 3),
            None,
            EpsForm::Plain,
        )?;
        let jets = jet_saddle_values(&fam, 6, 1)?;
        for k in 1..=6 {
            let j = &jets[k as usize - 1];
            if !j.coeff(0).is_zero() || j.coeff(1) != linear_saddle_coeff(&fam, k)? {
                bad += 1;
            }
        }
        fams += 1;
    }
    Ok((bad == 0, format!("{fams} families, {} values, {bad} mismatches", fams * 6)))
}

fn extraction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut fams, mut bad) = (0, 0);
    for i in 0..20 {
        let (p, q) = SMALL_PAIRS[i % SMALL_PAIRS.len()];
        let deg_u = 1 + (i as u32 % 3);
        let mut u = random_poly(&mut rng, 1, deg_u, 0.6, 2);
        if u.is_zero() {
            u = BivarPoly::from_ints(&[(deg_u, 0, 1, 1)]);
        }
        let fam = PerturbFamily::new(
            p,
            q,
            random_poly(&mut rng, 2, 4, 0.5, 2),
            random_poly(&mut rng, 2, 4, 0.5, 2),
            Some(u),
            EpsForm::Rescaled,
        )?;
        let want = linear_saddle_values(&fam, 8)?;
        let got = jet_saddle_values(&fam, 8, 1)?;
        bad += got.iter().zip(&want).filter(|(j, w)| j.coeff(1) != **w).count();
        fams += 1;
    }
    Ok((bad == 0, format!("{fams} families, {} values, {bad} mismatches", fams * 8)))
}

fn binomial_structure() -> Check {
    let mut bad = Vec::new();
    for (p, q, n) in MATRIX_GRID {
        let rd = resonance_data(p, q, n)?;
        let a = build_matrix_a(&rd, &f_poly(&rd)?)?;
        if a != closed_form_rows(&rd, n as usize + 1)? {
            bad.push(format!("({p},{q},{n})"));
        }
    }
    let detail = if bad.is_empty() {
        format!("{} matrices equal entry by entry", MATRIX_GRID.len())
    } else {
        format!("mismatch at {}", bad.join(", "))
    };
    Ok((bad.is_empty(), detail))
}

fn full_rank() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, q, n) in MATRIX_GRID {
        let rd = resonance_data(p, q, n)?;
        match certify_unit(&rd, 0) {
            Ok(c) => {
                let full = c.certificate.symbolic_rank == n as usize + 1 && c.certificate.rank == n as usize + 1;
                ok &= full;
                parts.push(format!("({p},{q},{n}) rank {} via {}", c.certificate.symbolic_rank, c.certificate.branch));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("({p},{q},{n}) {e}"));
            }
        }
    }
    Ok((ok, parts.join("; ")))
}

fn witness_1_1_6() -> Check {
    let w = synth_theorem1(1, 1, 6, &SynthOptions::default())?;
    let mut ok = w.verified && w.agreement && w.claimed_order == 35 && w.first_order == SaddleOrder::Finite(35);
    for m in 1..=7 {
        let c1 = w.transcript[5 * m - 1].coeff(1);
        let want = if m == 7 { Rational::from_integer(1.into()) } else { Rational::zero() };
        ok &= c1 == want;
    }
    Ok((ok, format!("first-order order {}, U = {}", w.first_order, w.unit.pretty())))
}

fn refinement() -> Check {
    let opts = SynthOptions {
        jet_order: 2,
        allow_below_gate: true,
        ..SynthOptions::default()
    };
    let w = synth_theorem1(1, 1, 4, &opts)?;
    let one = Rational::from_integer(1.into());
    let mut ok = w.below_gate && w.claimed_order == 15;
    for m in 1..=4 {
        let l = &w.transcript[3 * m - 1];
        ok &= l.coeff(1).is_zero() && l.coeff(2).is_zero();
    }
    ok &= w.transcript[14].coeff(1) == one;
    Ok((ok, format!("(1,1,4) below the degree gate, g via {}, L_15 = {}", w.rank.branch, w.transcript[14])))
}

fn lift() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in [1, 2] {
        let l = synth_theorem2(1, 1, 6, r, &SynthOptions::default())?;
        let good = l.preserved && l.first_order == SaddleOrder::Finite(35) && l.bound == 35 && l.lifted_degree == 6 + r;
        ok &= good;
        parts.push(format!("r={r}: degree {} order {} bound {}", l.lifted_degree, l.first_order, l.bound));
    }
    Ok((ok, parts.join("; ")))
}

fn certificates() -> Check {
    let mut ok = true;
    let mut parts = Vec::new();
    for n in [6u64, 8, 10] {
        let c = theorem3_certificate(1, 1, n)?;
        let d = c.resonance.d;
        let good = c.verdict && c.k0 == (2 * n - 4 - d) * (n - 1) / d;
        ok &= good;
        parts.push(format!("(1,1,{n}) k0={}", c.k0));
    }
    let c = theorem3_certificate(2, 3, 12)?;
    ok &= c.verdict;
    parts.push(format!("(2,3,12) k0={} verdict {}", c.k0, c.verdict));
    Ok((ok, parts.join(", ")))
}

/// Points of the invariant grid where each clause fails.
#[derive(Clone, Debug, Default, Serialize)]
pub struct InvariantScan {
    pub points: usize,
    pub sum_fails: Vec<(u64, u64, u64)>,
    pub half_fails: Vec<(u64, u64, u64)>,
    pub unit_p_fails: Vec<(u64, u64, u64)>,
}

/// All coprime `p <= q` with `p + q <= 7` and `p + q + 3 <= n <= 20`.
pub fn scan_invariants() -> Result<InvariantScan> {
    let mut scan = InvariantScan::default();
    for s in 2..=7u64 {
        for p in 1..s {
            let q = s - p;
            if p > q || num_integer::gcd(p, q) != 1 {
                continue;
            }
            for n in (s + 3)..=20 {
                let rd = resonance_data(p, q, n)?;
                let n1 = rd.big_n1()?;
                let c = rd.congruence()?;
                scan.points += 1;
                if c.s_table[&1] + c.s_table[&3] != n1 {
                    scan.sum_fails.push((p, q, n));
                }
                if 2 * c.big_n2 < n1 {
                    scan.half_fails.push((p, q, n));
                }
                if p == 1 && c.big_n2 != n1 - rd.d {
                    scan.unit_p_fails.push((p, q, n));
                }
            }
        }
    }
    Ok(scan)
}

fn number_theory() -> Check {
    let scan = scan_invariants()?;
    let list = |v: &[(u64, u64, u64)]| v.iter().map(|(p, q, n)| format!("({p},{q},{n})")).collect::<Vec<_>>().join(" ");
    let mut detail = format!(
        "{} points; s1+s3=N1 fails {}, N2>=N1/2 fails {}, p=1 N2=N1-d fails {}",
        scan.points,
        scan.sum_fails.len(),
        scan.half_fails.len(),
        scan.unit_p_fails.len()
    );
    if !scan.unit_p_fails.is_empty() {
        detail.push_str(&format!(" [{}]", list(&scan.unit_p_fails)));
    }
    let passed = scan.sum_fails.is_empty() && scan.half_fails.is_empty() && scan.unit_p_fails.is_empty();
    Ok((passed, detail))
}
