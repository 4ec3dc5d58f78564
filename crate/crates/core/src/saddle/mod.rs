//! Saddle values of `p:-q` resonant saddles by two independent engines.

mod first_integral;
mod normal_form;
mod system;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactpoly::Scalar;

pub use first_integral::{first_integral, saddle_values_integral};
pub use normal_form::{normal_form_steps, saddle_values_nf, NormalFormStep};
pub use system::SaddleSystem;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    NormalForm,
    FirstIntegral,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::NormalForm => "normal-form",
            Method::FirstIntegral => "first-integral",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SaddleValueRecord<S: Scalar> {
    pub k: u32,
    pub value: S,
    pub method: Method,
}

/// Index of the first nonzero saddle value, or a lower bound when every
/// value through the computed order vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SaddleOrder {
    Finite(u32),
    AtLeast(u32),
}

impl SaddleOrder {
    pub fn of<S: Scalar>(records: &[SaddleValueRecord<S>]) -> SaddleOrder {
        match records.iter().find(|r| !r.value.vanishes()) {
            Some(r) => SaddleOrder::Finite(r.k),
            None => SaddleOrder::AtLeast(records.last().map_or(1, |r| r.k + 1)),
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            SaddleOrder::Finite(k) => Some(k),
            SaddleOrder::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for SaddleOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SaddleOrder::Finite(k) => write!(f, "{k}"),
            SaddleOrder::AtLeast(k) => write!(f, "≥{k}"),
        }
    }
}

impl Serialize for SaddleOrder {
    fn serialize<Z: serde::Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        match self {
            SaddleOrder::Finite(k) => s.serialize_u32(*k),
            SaddleOrder::AtLeast(_) => s.serialize_str(&self.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderReport {
    pub normal_form: SaddleOrder,
    pub first_integral: SaddleOrder,
    pub agree: bool,
}

impl OrderReport {
    pub fn order(&self) -> SaddleOrder {
        self.normal_form
    }
}

/// Saddle order by both engines, with an agreement flag.
pub fn saddle_order<S: Scalar>(sys: &SaddleSystem<S>, k_max: u32) -> Result<OrderReport> {
    let nf = SaddleOrder::of(&saddle_values_nf(sys, k_max)?);
    let fi = SaddleOrder::of(&saddle_values_integral(sys, k_max)?);
    Ok(OrderReport {
        normal_form: nf,
        first_integral: fi,
        agree: nf == fi,
    })
}

pub(crate) fn check_order(k: u32) -> Result<()> {
    if k == 0 {
        return Err(Error::NonPositiveOrder(0));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactpoly::{rat, BivarPoly, Jet, Rational};
    use num_integer::Integer;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type P = BivarPoly<Rational>;

    fn sys(p: u32, q: u32, px: &[(u32, u32, i64, i64)], qy: &[(u32, u32, i64, i64)]) -> SaddleSystem<Rational> {
        SaddleSystem::new(p, q, P::from_ints(px), P::from_ints(qy)).unwrap()
    }

    fn values<S: Scalar>(r: &[SaddleValueRecord<S>]) -> Vec<S> {
        r.iter().map(|r| r.value.clone()).collect()
    }

    fn random_system(rng: &mut ChaCha8Rng, p: u32, q: u32, deg: u32) -> SaddleSystem<Rational> {
        let terms = |rng: &mut ChaCha8Rng| {
            let mut t = Vec::new();
            for d in 2..=deg {
                for j in 0..=d {
                    let c: i64 = rng.gen_range(-2..=2);
                    if c != 0 && rng.gen_bool(0.5) {
                        t.push((d - j, j, c, 1));
                    }
                }
            }
            P::from_ints(&t)
        };
        let px = terms(rng);
        let qy = terms(rng);
        SaddleSystem::new(p, q, px, qy).unwrap()
    }

    #[test]
    fn linear_system_has_no_order() {
        let s = sys(2, 3, &[], &[]);
        let r = saddle_values_nf(&s, 5).unwrap();
        assert!(values(&r).iter().all(|v| v.vanishes()));
        let rep = saddle_order(&s, 5).unwrap();
        assert_eq!(rep.order(), SaddleOrder::AtLeast(6));
        assert_eq!(rep.order().to_string(), "≥6");
        assert!(rep.agree);
        assert_eq!(first_integral(&s, 5).unwrap(), P::from_ints(&[(3, 2, 1, 1)]));
    }

    #[test]
    fn normal_form_example() {
        let s = sys(1, 1, &[(2, 1, 1, 1)], &[(1, 2, 1, 1)]);
        let steps = normal_form_steps(&s, 1).unwrap();
        let res = steps.iter().find_map(|s| s.resonant.clone()).unwrap();
        assert_eq!(res, (1, rat(1, 1), rat(-1, 1)));
        assert_eq!(saddle_values_nf(&s, 1).unwrap()[0].value, rat(2, 1));
        assert_eq!(saddle_values_integral(&s, 1).unwrap()[0].value, rat(2, 1));
        let rep = saddle_order(&s, 4).unwrap();
        assert_eq!(rep.order(), SaddleOrder::Finite(1));
        assert!(rep.agree);
    }

    #[test]
    fn integrable_example() {
        let s = sys(1, 1, &[(2, 1, 1, 1)], &[(1, 2, -1, 1)]);
        assert!(values(&saddle_values_nf(&s, 8).unwrap()).iter().all(|v| v.vanishes()));
        assert!(values(&saddle_values_integral(&s, 8).unwrap())
            .iter()
            .all(|v| v.vanishes()));
    }

    #[test]
    fn zero_order_rejected() {
        let s = sys(1, 1, &[], &[]);
        assert_eq!(saddle_values_nf(&s, 0), Err(Error::NonPositiveOrder(0)));
        assert!(saddle_values_integral(&s, 0).is_err());
    }

    #[test]
    fn first_values_related_by_spq() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = 0;
        for (p, q) in [(1, 1), (1, 2), (2, 3), (1, 3), (3, 2)] {
            for _ in 0..6 {
                let s = random_system(&mut rng, p, q, 3)
                    .with_time_scale(rat(3, 2))
                    .unwrap();
                let nf = saddle_values_nf(&s, 4).unwrap();
                let fi = saddle_values_integral(&s, 4).unwrap();
                let Some(k) = SaddleOrder::of(&nf).finite() else { continue };
                let factor = rat(3, 2) * rat((p * q) as i64, 1);
                assert_eq!(fi[k as usize - 1].value, nf[k as usize - 1].value.clone() * factor);
                seen += 1;
            }
        }
        assert!(seen > 10);
    }

    #[test]
    fn engines_agree_on_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for (p, q) in [(1, 1), (1, 2), (2, 1), (1, 3), (2, 3)] {
            for _ in 0..4 {
                let s = random_system(&mut rng, p, q, 4);
                let rep = saddle_order(&s, 6).unwrap();
                assert!(rep.agree, "{s:?}: {rep:?}");
            }
        }
    }

    #[test]
    fn homogeneous_vanishing() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, q) in [(1, 1), (1, 2), (1, 3), (2, 3)] {
            for n in [3u32, 4] {
                let d = (n - 1).gcd(&(p + q));
                let n1 = (n - 1) / d;
                let hom = |rng: &mut ChaCha8Rng| {
                    let t: Vec<_> = (0..=n).map(|j| (n - j, j, rng.gen_range(-2..=2), 1)).collect();
                    P::from_ints(&t)
                };
                let s = SaddleSystem::new(p, q, hom(&mut rng), hom(&mut rng)).unwrap();
                for r in saddle_values_nf(&s, 8).unwrap() {
                    if r.k % n1 != 0 {
                        assert!(r.value.vanishes(), "({p},{q},{n}) k={}", r.k);
                    }
                }
            }
        }
    }

    #[test]
    fn unit_form_matches_expansion_and_rescaling() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for (p, q) in [(1, 1), (1, 2), (2, 3)] {
            for _ in 0..3 {
                let base = random_system(&mut rng, p, q, 3);
                let u = P::from_ints(&[(1, 0, rng.gen_range(-2..=2), 1), (0, 2, 1, 1), (1, 1, -1, 1)]);
                let s = base.with_unit(u).unwrap();
                let k = 5;
                let a = saddle_order(&s, k).unwrap();
                let b = saddle_order(&s.expanded().unwrap(), k).unwrap();
                let cap = (k + 1) * (p + q) - 1;
                let c = saddle_order(&s.rescale_unit(cap).unwrap(), k).unwrap();
                assert_eq!(a, b);
                assert_eq!(a.order(), c.order());
                assert!(a.agree && c.agree);
            }
        }
    }

    #[test]
    fn jet_runs_reduce_to_rational_runs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for (p, q) in [(1, 1), (1, 2)] {
            let s = random_system(&mut rng, p, q, 3);
            let e = random_system(&mut rng, p, q, 3);
            let lift = |a: &P, b: &P| {
                let mut t = Vec::new();
                for d in 2..=3u32 {
                    for j in 0..=d {
                        let c0 = a.coeff(d - j, j);
                        let c1 = b.coeff(d - j, j);
                        t.push((d - j, j, Jet::from_coeffs(vec![c0, c1, rat(0, 1)])));
                    }
                }
                BivarPoly::from_terms(2, t).unwrap()
            };
            let js = SaddleSystem::new(p, q, lift(&s.nonlin_x, &e.nonlin_x), lift(&s.nonlin_y, &e.nonlin_y)).unwrap();
            let plain_nf = saddle_values_nf(&s, 5).unwrap();
            let plain_fi = saddle_values_integral(&s, 5).unwrap();
            for (jr, r) in saddle_values_nf(&js, 5).unwrap().iter().zip(&plain_nf) {
                assert_eq!(jr.value.coeff(0), r.value);
            }
            for (jr, r) in saddle_values_integral(&js, 5).unwrap().iter().zip(&plain_fi) {
                assert_eq!(jr.value.coeff(0), r.value);
            }
        }
    }

    #[test]
    fn lift_preserves_order() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for r in 0..3 {
            let s = random_system(&mut rng, 1, 2, 3);
            let a = saddle_order(&s, 5).unwrap();
            let b = saddle_order(&s.lift_degree(r).unwrap(), 5).unwrap();
            assert_eq!(a, b);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn order_agreement_random(seed in any::<u64>(), pq in 0usize..5) {
            let (p, q) = [(1, 1), (1, 2), (2, 1), (1, 3), (2, 3)][pq];
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_system(&mut rng, p, q, 3);
            prop_assert!(saddle_order(&s, 5).unwrap().agree);
        }

        #[test]
        fn truncation_beyond_reach_is_invisible(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = random_system(&mut rng, 1, 2, 4);
            let k = 2;
            let t = s.truncated(k * 3 + 1);
            prop_assert_eq!(values(&saddle_values_nf(&s, k).unwrap()), values(&saddle_values_nf(&t, k).unwrap()));
        }
    }
}
