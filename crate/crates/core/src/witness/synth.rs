use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::document::SystemDocument;
use crate::error::{Error, Result};
use crate::exactpoly::{format_rational, geom_series, rat, BivarPoly, Jet, Rational, Scalar};
use crate::perturb::{linear_saddle_values, EpsForm, PerturbFamily};
use crate::resonance::{resonance_data, ResonanceData};
use crate::saddle::{saddle_values_nf, SaddleOrder, SaddleSystem};

use super::choose::{build_u, build_u_symbolic, choose_g, random_g, GBranch};
use super::matrix::{build_matrix_a, CoeffMatrix};
use super::rank::{mu_candidates, rank_exact, rank_symbolic, solve_target, RankMethod, RankResult};

/// Attempts of the randomized search for `g`.
pub const MAX_FALLBACK_ATTEMPTS: u32 = 200;

/// `P = xi_{n+2} y^n`, `Q = sum_{j <= n+1} xi_j x^(n-j+1) y^(j-1)`.
pub fn witness_pq<S: Scalar>(xi: &[S], n: u32) -> (BivarPoly<S>, BivarPoly<S>) {
    assert_eq!(xi.len(), n as usize + 2, "need n + 2 coefficients");
    let ctx = xi[0].ctx();
    let px = BivarPoly::from_terms(ctx.clone(), [(0, n, xi[n as usize + 1].clone())]).expect("one context");
    let qy = BivarPoly::from_terms(
        ctx,
        (1..=n + 1).map(|j| (n + 1 - j, j - 1, xi[j as usize - 1].clone())),
    )
    .expect("one context");
    (px, qy)
}

fn ser_rat<Z: Serializer>(r: &Rational, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&format_rational(r))
}

fn ser_poly<Z: Serializer>(p: &BivarPoly<Rational>, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.serialize_str(&p.pretty())
}

fn ser_rats<Z: Serializer>(v: &[Rational], s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.collect_seq(v.iter().map(format_rational))
}

fn ser_jets<Z: Serializer>(v: &[Jet], s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.collect_seq(v.iter().map(|j| j.coeffs().iter().map(format_rational).collect::<Vec<_>>()))
}

fn ser_series<Z: Serializer>(v: &[Vec<Rational>], s: Z) -> std::result::Result<Z::Ok, Z::Error> {
    s.collect_seq(v.iter().map(|c| c.iter().map(format_rational).collect::<Vec<_>>()))
}

/// How the unit factor `U = f + mu g` was fixed and why `A` has full rank.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankCertificate {
    pub branch: GBranch,
    #[serde(serialize_with = "ser_poly")]
    pub g: BivarPoly<Rational>,
    #[serde(serialize_with = "ser_rat")]
    pub mu: Rational,
    /// Rank over `Q(mu)`, and how it was obtained.
    pub symbolic_rank: usize,
    pub symbolic_method: RankMethod,
    /// Rank of `A` at `mu` with its pivots.
    pub rank: usize,
    pub pivots: Vec<(usize, usize)>,
    pub required: usize,
    /// Randomized attempts used (0 when the explicit `g` worked).
    pub fallback_attempts: u32,
    /// Column whose variable is held at zero in every solve.
    pub free_column: usize,
}

/// The unit factor, its matrix and the certificate.
#[derive(Clone, Debug)]
pub struct UnitChoice {
    pub u: BivarPoly<Rational>,
    pub a: CoeffMatrix<Rational>,
    pub certificate: RankCertificate,
}

/// Symbolic rank of `A(mu)` for this `g`, and a full-rank specialization
/// when there is one.
fn try_g(rd: &ResonanceData, g: &BivarPoly<Rational>) -> Result<(usize, Option<(Rational, RankMethod, RankResult)>)> {
    let need = rd.n as usize + 1;
    let sym = build_matrix_a(rd, &build_u_symbolic(rd, g)?)?;
    let sr = rank_symbolic(&sym, &mu_candidates(10));
    if sr.result.rank < need {
        return Ok((sr.result.rank, None));
    }
    match sr.method {
        RankMethod::Specialization { ref mu } => Ok((need, Some((mu.clone(), sr.method.clone(), sr.result)))),
        RankMethod::Elimination => {
            let hit = mu_candidates(200).into_iter().find_map(|mu| {
                let r = rank_exact(&sym.map(|c| c.eval(&mu)));
                (r.rank == need).then_some((mu, RankMethod::Elimination, r))
            });
            Ok((need, hit))
        }
    }
}

/// Picks `U = f + mu g` with `rank A = n + 1`: the explicit `g` first, then
/// seeded random `g`.
pub fn certify_unit(rd: &ResonanceData, seed: u64) -> Result<UnitChoice> {
    let need = rd.n as usize + 1;
    let free_column = rd.big_n1()? as usize + 2;
    let explicit = choose_g(rd)?;
    let random = (0..MAX_FALLBACK_ATTEMPTS).map(|attempt| (GBranch::Random { seed, attempt }, random_g(rd, seed, attempt), attempt + 1));
    let candidates = explicit.g.map(|g| (explicit.branch, g, 0)).into_iter().chain(random);
    let mut best = 0;
    for (branch, g, attempts) in candidates {
        let (symbolic_rank, hit) = try_g(rd, &g)?;
        best = best.max(symbolic_rank);
        let Some((mu, method, at_mu)) = hit else {
            continue;
        };
        let u = build_u(rd, &g, &mu)?;
        let a = build_matrix_a(rd, &u)?;
        return Ok(UnitChoice {
            u,
            a,
            certificate: RankCertificate {
                branch,
                g,
                mu,
                symbolic_rank,
                symbolic_method: method,
                rank: at_mu.rank,
                pivots: at_mu.pivots,
                required: need,
                fallback_attempts: attempts,
                free_column,
            },
        });
    }
    Err(Error::RankDeficient {
        rank: best,
        required: need,
    })
}

#[derive(Clone, Debug)]
pub struct SynthOptions {
    pub eps: Rational,
    /// Jet order `J >= 1` of the transcript; `xi` is refined to degree `J - 1`.
    pub jet_order: usize,
    pub seed: u64,
    /// Run below `n = p + q + 3`; the report is flagged.
    pub allow_below_gate: bool,
}

impl Default for SynthOptions {
    fn default() -> Self {
        SynthOptions {
            eps: rat(1, 100),
            jet_order: 1,
            seed: 0,
            allow_below_gate: false,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub p: u64,
    pub q: u64,
    pub n: u64,
    pub resonance: ResonanceData,
    pub below_gate: bool,
    #[serde(rename = "U", serialize_with = "ser_poly")]
    pub unit: BivarPoly<Rational>,
    pub rank: RankCertificate,
    /// `xi_j(eps)` as coefficient lists in ascending powers of `eps`.
    #[serde(serialize_with = "ser_series")]
    pub xi: Vec<Vec<Rational>>,
    #[serde(serialize_with = "ser_rat")]
    pub eps: Rational,
    pub eps_order: usize,
    /// `x' = p x (1 - U) + eps p P`, `y' = -q y (1 - U) + eps q Q` at the
    /// given `eps`.
    pub system: SystemDocument,
    pub claimed_order: u64,
    /// Saddle values `k = 1..=claimed_order` of the system above as jets in
    /// `eps`, by the normal-form engine.
    #[serde(serialize_with = "ser_jets")]
    pub transcript: Vec<Jet>,
    /// The same for `x' = p x + eps p P sum U^i`, `y' = -q y + eps q Q sum U^i`.
    #[serde(serialize_with = "ser_jets")]
    pub transcript_rescaled: Vec<Jet>,
    /// `eps`-linear parts predicted by coefficient extraction at `xi(0)`.
    #[serde(serialize_with = "ser_rats")]
    pub linear_prediction: Vec<Rational>,
    pub first_order: SaddleOrder,
    /// The transcript has the claimed shape through `eps_order`.
    pub verified: bool,
    /// Both engine transcripts match the extraction at first order.
    pub agreement: bool,
}

impl WitnessReport {
    pub fn rd(&self) -> &ResonanceData {
        &self.resonance
    }
}

fn eps_jets(xi: &[Vec<Rational>], weight: u32, order: usize) -> Vec<Jet> {
    xi.iter()
        .map(|series| {
            let mut c = vec![Rational::zero(); order + 1];
            for (t, v) in series.iter().enumerate() {
                if t < order {
                    c[t + 1] = v * rat(weight.into(), 1);
                }
            }
            Jet::from_coeffs(c)
        })
        .collect()
}

/// The eq.-(6) system with `xi = xi(eps)` as jets of order `order`.
pub(crate) fn jet_witness(
    rd: &ResonanceData,
    u: &BivarPoly<Rational>,
    xi: &[Vec<Rational>],
    order: usize,
    k_max: u32,
    form: EpsForm,
) -> Result<SaddleSystem<Jet>> {
    let (p, q, n) = (rd.p as u32, rd.q as u32, rd.n as u32);
    let (px, _) = witness_pq(&eps_jets(xi, p, order), n);
    let (_, qy) = witness_pq(&eps_jets(xi, q, order), n);
    let lift = |c: &Rational| Jet::constant(c.clone(), order);
    match form {
        EpsForm::Unit => SaddleSystem::new(p, q, px, qy)?.with_unit(u.map_coeffs(order, lift)),
        EpsForm::Rescaled => {
            let cap = (k_max + 1) * (p + q) - 1;
            let series = geom_series(u, cap)?.map_coeffs(order, lift);
            SaddleSystem::new(p, q, px.mul(&series, Some(cap + 2))?, qy.mul(&series, Some(cap + 2))?)
        }
        EpsForm::Plain => SaddleSystem::new(p, q, px, qy),
    }
}

fn values(sys: &SaddleSystem<Jet>, k_max: u32) -> Result<Vec<Jet>> {
    Ok(saddle_values_nf(sys, k_max)?.into_iter().map(|r| r.value).collect())
}

/// Values `L_{m n1}`, `m = 1..=n+1`, from a transcript.
fn rows_of(rd: &ResonanceData, t: &[Jet]) -> Vec<Jet> {
    (1..=rd.n as usize + 1).map(|m| t[m * rd.n1 as usize - 1].clone()).collect()
}

/// Checks `L_k = O(eps^(J+1))` for `k < K` and `L_K = eps + O(eps^(J+1))`.
pub fn transcript_has_shape(t: &[Jet], order: usize) -> bool {
    let Some((last, rest)) = t.split_last() else {
        return false;
    };
    rest.iter().all(|j| (0..=order).all(|c| j.coeff(c).is_zero()))
        && (0..=order).all(|c| last.coeff(c) == if c == 1 { rat(1, 1) } else { rat(0, 1) })
}

/// Witness of first-order saddle order `(n+1) n1 = (n^2 - 1)/d`.
pub fn synth_theorem1(p: u64, q: u64, n: u64, opts: &SynthOptions) -> Result<WitnessReport> {
    if opts.jet_order == 0 {
        return Err(Error::NonPositiveOrder(0));
    }
    if opts.eps.is_zero() {
        return Err(Error::InvalidSystem("epsilon must be nonzero".into()));
    }
    let rd = resonance_data(p, q, n)?;
    let below_gate = rd.check_gate().is_err();
    if below_gate && !opts.allow_below_gate {
        rd.check_gate()?;
    }
    let choice = certify_unit(&rd, opts.seed)?;
    let (a, u) = (&choice.a, &choice.u);
    let free = choice.certificate.free_column;
    let rows = n as usize + 1;
    let k_max = ((n + 1) * rd.n1) as u32;
    let j = opts.jet_order;

    let mut target = vec![Rational::zero(); rows];
    target[rows - 1] = rat(1, 1);
    let xi0 = solve_target(a, &target, free)?.xi;
    let mut xi: Vec<Vec<Rational>> = xi0.iter().map(|v| vec![v.clone()]).collect();
    for t in 1..j {
        let sys = jet_witness(&rd, u, &xi, t + 1, k_max, EpsForm::Rescaled)?;
        let vals = values(&sys, k_max)?;
        let residual: Vec<Rational> = rows_of(&rd, &vals).iter().map(|l| -l.coeff(t + 1)).collect();
        let step = solve_target(a, &residual, free)?.xi;
        for (series, v) in xi.iter_mut().zip(step) {
            series.push(v);
        }
    }

    let transcript = values(&jet_witness(&rd, u, &xi, j, k_max, EpsForm::Unit)?, k_max)?;
    let transcript_rescaled = values(&jet_witness(&rd, u, &xi, j, k_max, EpsForm::Rescaled)?, k_max)?;
    let (px0, qy0) = witness_pq(&xi0, n as u32);
    let fam = PerturbFamily::new(p as u32, q as u32, px0, qy0, Some(u.clone()), EpsForm::Rescaled)?;
    let linear_prediction = linear_saddle_values(&fam, k_max)?;
    let first = |t: &[Jet]| t.iter().map(|l| l.coeff(1)).collect::<Vec<_>>();
    let agreement = first(&transcript) == linear_prediction && first(&transcript_rescaled) == linear_prediction;
    let verified = transcript_has_shape(&transcript, j) && transcript_has_shape(&transcript_rescaled, j);
    let first_order = {
        let recs: Vec<_> = first(&transcript);
        match recs.iter().position(|c| !c.is_zero()) {
            Some(k) => SaddleOrder::Finite(k as u32 + 1),
            None => SaddleOrder::AtLeast(k_max + 1),
        }
    };

    let system = instantiate(&rd, u, &xi, &opts.eps)?;
    Ok(WitnessReport {
        p,
        q,
        n,
        resonance: rd,
        below_gate,
        unit: u.clone(),
        rank: choice.certificate,
        xi,
        eps: opts.eps.clone(),
        eps_order: j,
        system: SystemDocument::from_system(&system),
        claimed_order: k_max as u64,
        transcript,
        transcript_rescaled,
        linear_prediction,
        first_order,
        verified,
        agreement,
    })
}

/// The unit-form witness at a concrete `eps`.
pub fn instantiate(
    rd: &ResonanceData,
    u: &BivarPoly<Rational>,
    xi: &[Vec<Rational>],
    eps: &Rational,
) -> Result<SaddleSystem<Rational>> {
    let at: Vec<Rational> = xi
        .iter()
        .map(|s| s.iter().rev().fold(Rational::zero(), |acc, c| acc * eps + c) * eps)
        .collect();
    let (px, qy) = witness_pq(&at, rd.n as u32);
    let p = rat(rd.p as i64, 1);
    let q = rat(rd.q as i64, 1);
    SaddleSystem::new(rd.p as u32, rd.q as u32, px.scale_rational(&p), qy.scale_rational(&q))?.with_unit(u.clone())
}

/// Witness at degree `n'` lifted by `1 + x^r` to degree `n' + r`.
#[derive(Clone, Debug, Serialize)]
pub struct LiftReport {
    pub n_prime: u64,
    pub r: u32,
    pub n: u64,
    pub witness: WitnessReport,
    /// The lifted system at the witness `eps`.
    pub lifted_system: SystemDocument,
    pub lifted_degree: u32,
    #[serde(serialize_with = "ser_jets")]
    pub lifted_transcript: Vec<Jet>,
    pub first_order: SaddleOrder,
    /// `n^2 - 2 r n + r^2 - 1`.
    pub bound: i64,
    /// Lifted and unlifted transcripts agree at first order.
    pub preserved: bool,
}

pub fn synth_theorem2(p: u64, q: u64, n_prime: u64, r: u32, opts: &SynthOptions) -> Result<LiftReport> {
    let witness = synth_theorem1(p, q, n_prime, &SynthOptions { jet_order: 1, ..opts.clone() })?;
    let rd = &witness.resonance;
    let k_max = witness.claimed_order as u32;
    let xi0: Vec<Vec<Rational>> = witness.xi.iter().map(|s| vec![s[0].clone()]).collect();
    let lifted = jet_witness(rd, &witness.unit, &xi0, 1, k_max, EpsForm::Unit)?.lift_degree(r)?;
    let lifted_transcript = values(&lifted, k_max)?;
    let first = |t: &[Jet]| t.iter().map(|l| (l.coeff(0), l.coeff(1))).collect::<Vec<_>>();
    let preserved = first(&lifted_transcript) == first(&witness.transcript);
    let first_order = match lifted_transcript.iter().position(|l| !l.coeff(1).is_zero()) {
        Some(k) => SaddleOrder::Finite(k as u32 + 1),
        None => SaddleOrder::AtLeast(k_max + 1),
    };
    let lifted_system = instantiate(rd, &witness.unit, &witness.xi, &witness.eps)?.lift_degree(r)?;
    let n = n_prime as i64 + r as i64;
    Ok(LiftReport {
        n_prime,
        r,
        n: n as u64,
        lifted_degree: lifted_system.degree(),
        lifted_system: SystemDocument::from_system(&lifted_system),
        lifted_transcript,
        first_order,
        bound: n * n - 2 * r as i64 * n + (r as i64) * (r as i64) - 1,
        preserved,
        witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::saddle::saddle_values_integral;

    #[test]
    fn witness_pq_layout() {
        let xi: Vec<Rational> = (1..=5).map(|v| rat(v, 1)).collect();
        let (px, qy) = witness_pq(&xi, 3);
        assert_eq!(px, BivarPoly::from_ints(&[(0, 3, 5, 1)]));
        assert_eq!(qy, BivarPoly::from_ints(&[(3, 0, 1, 1), (2, 1, 2, 1), (1, 2, 3, 1), (0, 3, 4, 1)]));
    }

    #[test]
    fn unit_certificate_small_grid() {
        for (p, q, n) in [(1, 1, 6), (1, 2, 6), (1, 3, 7)] {
            let rd = resonance_data(p, q, n).unwrap();
            let c = certify_unit(&rd, 0).unwrap();
            assert_eq!(c.certificate.rank, n as usize + 1);
            assert_eq!(rank_exact(&c.a).rank, n as usize + 1);
        }
    }

    #[test]
    fn witness_1_2_6() {
        let w = synth_theorem1(1, 2, 6, &SynthOptions::default()).unwrap();
        assert_eq!(w.claimed_order, 35);
        assert!(w.verified && w.agreement);
        assert_eq!(w.first_order, SaddleOrder::Finite(35));
        assert_eq!(w.system.p, 1);
    }

    #[test]
    fn refinement_below_gate() {
        let opts = SynthOptions {
            jet_order: 3,
            allow_below_gate: true,
            ..SynthOptions::default()
        };
        let w = synth_theorem1(1, 1, 4, &opts).unwrap();
        assert!(w.below_gate);
        assert!(matches!(w.rank.branch, GBranch::Random { .. }));
        assert!(w.verified, "{:?}", w.transcript);
        assert!(w.xi.iter().all(|s| s.len() == 3));
        assert!(synth_theorem1(1, 1, 4, &SynthOptions::default()).is_err());
    }

    #[test]
    fn first_integral_engine_sees_the_same_order() {
        let w = synth_theorem1(1, 1, 4, &SynthOptions { allow_below_gate: true, ..SynthOptions::default() }).unwrap();
        let xi0: Vec<Vec<Rational>> = w.xi.clone();
        let sys = jet_witness(w.rd(), &w.unit, &xi0, 1, 15, EpsForm::Unit).unwrap();
        let fi = saddle_values_integral(&sys, 15).unwrap();
        let pos = fi.iter().position(|r| !r.value.coeff(1).is_zero());
        assert_eq!(pos, Some(14));
    }

    #[test]
    fn lift_preserves_first_order() {
        let opts = SynthOptions {
            allow_below_gate: true,
            ..SynthOptions::default()
        };
        for r in [0, 1, 2] {
            let l = synth_theorem2(1, 1, 4, r, &opts).unwrap();
            assert!(l.preserved, "r = {r}");
            assert_eq!(l.first_order, SaddleOrder::Finite(15));
            assert_eq!(l.bound, 15);
            assert_eq!(l.lifted_degree, 4 + r);
        }
    }
}
