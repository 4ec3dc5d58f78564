use super::system::SaddleSystem;
use super::{check_order, Method, SaddleValueRecord};
use crate::error::Result;
use crate::exactpoly::graded::{d_dx, d_dy, pack_nonzero, ConvSum};
use crate::exactpoly::{rat, BivarPoly, Graded, Scalar};

pub(crate) struct Integral<S: Scalar> {
    pub h: Graded<S>,
    pub values: Vec<S>,
}

pub(crate) fn run<S: Scalar>(sys: &SaddleSystem<S>, k_max: u32) -> Result<Integral<S>> {
    check_order(k_max)?;
    let sys = sys.expanded()?;
    let ctx = sys.ctx().clone();
    let (p, q) = (sys.p as usize, sys.q as usize);
    let top = (k_max as usize + 1) * (p + q);
    let f = Graded::from_poly(&sys.nonlin_x, top);
    let g = Graded::from_poly(&sys.nonlin_y, top);
    let f_deg = f.support();
    let g_deg = g.support();

    let mut h = Graded::new(top, ctx.clone());
    let mut lead = vec![S::zero_in(&ctx); p + q + 1];
    lead[p] = S::one_in(&ctx);
    h.set_comp(p + q, lead);
    let mut hx: Vec<Option<S::Packed>> = vec![None; top + 1];
    let mut hy: Vec<Option<S::Packed>> = vec![None; top + 1];
    hx[p + q] = pack_nonzero(&d_dx(h.comp(p + q)));
    hy[p + q] = pack_nonzero(&d_dy(h.comp(p + q)));

    let mut values = vec![S::zero_in(&ctx); k_max as usize + 1];
    for m in (p + q + 1)..=top {
        // [H_x P + H_y Q]_m from components of H below degree m
        let mut known = ConvSum::new(m, &ctx);
        for &d in &f_deg {
            if d + p + q <= m + 1 {
                known.add(hx[m + 1 - d].as_ref(), f.packed(d));
            }
        }
        for &d in &g_deg {
            if d + p + q <= m + 1 {
                known.add(hy[m + 1 - d].as_ref(), g.packed(d));
            }
        }
        let known = known.finish();
        let mut comp = vec![S::zero_in(&ctx); m + 1];
        for (j, kn) in known.into_iter().enumerate() {
            let i = m - j;
            let e = (p * i) as i64 - (q * j) as i64;
            if e == 0 {
                let t = i / q;
                values[t - 1] = kn;
            } else if !kn.vanishes() {
                comp[j] = kn.scale(&(rat(-1, e) / &sys.time_scale));
            }
        }
        hx[m] = pack_nonzero(&d_dx(&comp));
        hy[m] = pack_nonzero(&d_dy(&comp));
        h.set_comp(m, comp);
    }
    values.truncate(k_max as usize + 1);
    Ok(Integral { h, values })
}

/// Saddle values `L_k`, `k = 1..=k_max`, from the formal first integral
/// `H = x^q y^p + ...` with `H' = sum L_k (x^q y^p)^(k+1)`.
///
/// Resonant coefficients of `H` are set to zero. The first nonzero `L_k`
/// equals `s p q pi_k`.
pub fn saddle_values_integral<S: Scalar>(
    sys: &SaddleSystem<S>,
    k_max: u32,
) -> Result<Vec<SaddleValueRecord<S>>> {
    let run = run(sys, k_max)?;
    Ok((1..=k_max)
        .map(|k| SaddleValueRecord {
            k,
            value: run.values[k as usize].clone(),
            method: Method::FirstIntegral,
        })
        .collect())
}

/// The truncated first integral built along the way, through total degree
/// `(k_max + 1)(p + q)`.
pub fn first_integral<S: Scalar>(sys: &SaddleSystem<S>, k_max: u32) -> Result<BivarPoly<S>> {
    Ok(run(sys, k_max)?.h.to_poly())
}
