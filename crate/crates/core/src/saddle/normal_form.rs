use super::system::SaddleSystem;
use super::{check_order, Method, SaddleValueRecord};
use crate::error::Result;
use crate::exactpoly::graded::{d_dx, d_dy, pack_nonzero, ConvSum};
use crate::exactpoly::{rat, BivarPoly, Graded, Rational, Scalar};

/// One degree of the normalizing change of variables.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalFormStep<S: Scalar> {
    pub degree: u32,
    pub phi: BivarPoly<S>,
    pub psi: BivarPoly<S>,
    /// `(k, pi_{1,k}, pi_{2,k})` for the resonance met at this degree.
    pub resonant: Option<(u32, S, S)>,
}

pub(crate) struct NormalForm<S: Scalar> {
    pub phi: Graded<S>,
    pub psi: Graded<S>,
    pub r1: Graded<S>,
    pub r2: Graded<S>,
}

/// Coefficient table `f[a][b]` of `x^a y^b`.
fn table<S: Scalar>(poly: &BivarPoly<S>, max_deg: u32) -> Vec<Vec<Option<S>>> {
    let mut t: Vec<Vec<Option<S>>> = Vec::new();
    for (m, c) in poly.terms() {
        if m.degree() > max_deg {
            continue;
        }
        let (a, b) = (m.x as usize, m.y as usize);
        if t.len() <= a {
            t.resize(a + 1, Vec::new());
        }
        if t[a].len() <= b {
            t[a].resize(b + 1, None);
        }
        t[a][b] = Some(c.clone());
    }
    t
}

fn zeros<S: Scalar>(len: usize, ctx: &S::Ctx) -> Vec<S> {
    vec![S::zero_in(ctx); len]
}

/// Stores `G_a(T_y)[m] = sum_b f[a][b] T_y^b [m]` in `out[a]`.
fn fill_inner<S: Scalar>(
    out: &mut [Graded<S>],
    f: &[Vec<Option<S>>],
    ypow: &[Graded<S>],
    a: usize,
    m: usize,
) {
    let Some(row) = f.get(a) else { return };
    let ctx = out[a].ctx().clone();
    let mut comp: Vec<S> = zeros(m + 1, &ctx);
    for (b, c) in row.iter().enumerate() {
        let Some(c) = c else { continue };
        for (d, y) in comp.iter_mut().zip(ypow[b].comp(m)) {
            if !y.vanishes() {
                d.mul_add_assign(c, y);
            }
        }
    }
    out[a].set_comp(m, comp);
}

pub(crate) fn run<S: Scalar>(sys: &SaddleSystem<S>, k_max: u32) -> Result<NormalForm<S>> {
    check_order(k_max)?;
    let sys = sys.expanded()?;
    let (p, q) = (sys.p as i64, sys.q as i64);
    let ctx = sys.ctx().clone();
    let top = 1 + k_max as usize * (p + q) as usize;
    let fx = table(&sys.nonlin_x, top as u32);
    let fy = table(&sys.nonlin_y, top as u32);
    let max_a = fx.len().max(fy.len()).max(2);
    let max_b = fx
        .iter()
        .chain(fy.iter())
        .map(|r| r.len())
        .max()
        .unwrap_or(0)
        .max(2);

    let one = S::one_in(&ctx);
    let blank = || Graded::new(top, ctx.clone());
    let power = |e: usize, y: bool| {
        let mut g = blank();
        let mut v = zeros(e + 1, &ctx);
        v[if y { e } else { 0 }] = one.clone();
        g.set_comp(e, v);
        g
    };
    // xpow[1] and ypow[1] are the coordinate series X + phi, Y + psi.
    let mut xpow: Vec<Graded<S>> = (0..max_a).map(|e| power(e, false)).collect();
    let mut ypow: Vec<Graded<S>> = (0..max_b).map(|e| power(e, true)).collect();

    let mut gx: Vec<Graded<S>> = (0..max_a).map(|_| blank()).collect();
    let mut gy: Vec<Graded<S>> = (0..max_a).map(|_| blank()).collect();
    for a in 0..max_a {
        for m in 0..=1 {
            fill_inner(&mut gx, &fx, &ypow, a, m);
            fill_inner(&mut gy, &fy, &ypow, a, m);
        }
    }

    let mut nf = NormalForm {
        phi: blank(),
        psi: blank(),
        r1: blank(),
        r2: blank(),
    };
    // negated resonant parts and derivatives of phi, psi, packed
    let mut neg_r: Vec<(usize, Option<S::Packed>, Option<S::Packed>)> = Vec::new();
    type Derivs<P> = (Option<P>, Option<P>);
    let mut dphi: Vec<Derivs<S::Packed>> = vec![(None, None); top + 1];
    let mut dpsi: Vec<Derivs<S::Packed>> = vec![(None, None); top + 1];
    let inv_scale = |e: i64| -> Rational { rat(1, e) / &sys.time_scale };

    for m in 2..=top {
        for (pows, lim) in [(&mut xpow, max_a), (&mut ypow, max_b)] {
            for e in 2..lim {
                if m <= e {
                    continue;
                }
                let mut sum = ConvSum::new(m, &ctx);
                for c in 1..=(m - (e - 1)) {
                    sum.add(pows[1].packed(c), pows[e - 1].packed(m - c));
                }
                pows[e].set_comp(m, sum.finish());
            }
        }
        fill_inner(&mut gx, &fx, &ypow, 0, m);
        fill_inner(&mut gy, &fy, &ypow, 0, m);

        let mut sum_x = ConvSum::new(m, &ctx);
        let mut sum_y = ConvSum::new(m, &ctx);
        sum_x.add_plain(gx[0].comp(m));
        sum_y.add_plain(gy[0].comp(m));
        for a in 1..max_a {
            for c in a..=m {
                let xa = xpow[a].packed(c);
                if xa.is_none() {
                    continue;
                }
                sum_x.add(xa, gx[a].packed(m - c));
                sum_y.add(xa, gy[a].packed(m - c));
            }
        }
        for (r, nr1, nr2) in &neg_r {
            let s = m + 1 - r;
            if s < 2 {
                continue;
            }
            sum_x.add(dphi[s].0.as_ref(), nr1.as_ref());
            sum_x.add(dphi[s].1.as_ref(), nr2.as_ref());
            sum_y.add(dpsi[s].0.as_ref(), nr1.as_ref());
            sum_y.add(dpsi[s].1.as_ref(), nr2.as_ref());
        }
        let rhs_x = sum_x.finish();
        let rhs_y = sum_y.finish();

        let mut phi = zeros(m + 1, &ctx);
        let mut psi = zeros(m + 1, &ctx);
        let mut r1 = zeros(m + 1, &ctx);
        let mut r2 = zeros(m + 1, &ctx);
        for (j, (bx, by)) in rhs_x.into_iter().zip(rhs_y).enumerate() {
            let i = (m - j) as i64;
            let jj = j as i64;
            let ex = p * (i - 1) - q * jj;
            if ex == 0 {
                r1[j] = bx;
            } else if !bx.vanishes() {
                phi[j] = bx.scale(&inv_scale(ex));
            }
            let ey = p * i - q * (jj - 1);
            if ey == 0 {
                r2[j] = by;
            } else if !by.vanishes() {
                psi[j] = by.scale(&inv_scale(ey));
            }
        }
        dphi[m] = (pack_nonzero(&d_dx(&phi)), pack_nonzero(&d_dy(&phi)));
        dpsi[m] = (pack_nonzero(&d_dx(&psi)), pack_nonzero(&d_dy(&psi)));
        let neg = |v: &[S]| pack_nonzero(&v.iter().map(|c| c.neg_ref()).collect::<Vec<_>>());
        let (n1, n2) = (neg(&r1), neg(&r2));
        if n1.is_some() || n2.is_some() {
            neg_r.push((m, n1, n2));
        }
        xpow[1].set_comp(m, phi.clone());
        ypow[1].set_comp(m, psi.clone());
        nf.phi.set_comp(m, phi);
        nf.psi.set_comp(m, psi);
        nf.r1.set_comp(m, r1);
        nf.r2.set_comp(m, r2);
        for a in 1..max_a {
            fill_inner(&mut gx, &fx, &ypow, a, m);
            fill_inner(&mut gy, &fy, &ypow, a, m);
        }
    }
    Ok(nf)
}

/// `(pi_{1,k}, pi_{2,k})` read off the resonant part of the normal form.
fn resonant_pair<S: Scalar>(sys: &SaddleSystem<S>, nf: &NormalForm<S>, k: u32) -> (S, S) {
    let (p, q) = (sys.p as usize, sys.q as usize);
    let deg = 1 + k as usize * (p + q);
    let at = |g: &Graded<S>, j: usize| {
        g.comp(deg)
            .get(j)
            .cloned()
            .unwrap_or_else(|| S::zero_in(g.ctx()))
    };
    let sp = sys.time_scale.clone() * rat(sys.p as i64, 1);
    let sq = sys.time_scale.clone() * rat(-(sys.q as i64), 1);
    let pi1 = at(&nf.r1, k as usize * p).scale(&(rat(1, 1) / sp));
    let pi2 = at(&nf.r2, 1 + k as usize * p).scale(&(rat(1, 1) / sq));
    (pi1, pi2)
}

/// Saddle values `pi_k = pi_{1,k} - pi_{2,k}`, `k = 1..=k_max`, by
/// degree-by-degree reduction to the resonant normal form
///
/// ```text
/// X' = s p X (1 + sum pi_{1,k} (X^q Y^p)^k)
/// Y' = -s q Y (1 + sum pi_{2,k} (X^q Y^p)^k)
/// ```
///
/// with the transformation vanishing on resonant monomials.
pub fn saddle_values_nf<S: Scalar>(
    sys: &SaddleSystem<S>,
    k_max: u32,
) -> Result<Vec<SaddleValueRecord<S>>> {
    let nf = run(sys, k_max)?;
    Ok((1..=k_max)
        .map(|k| {
            let (pi1, pi2) = resonant_pair(sys, &nf, k);
            SaddleValueRecord {
                k,
                value: pi1.sub_ref(&pi2),
                method: Method::NormalForm,
            }
        })
        .collect())
}

/// The normalizing transformation degree by degree.
pub fn normal_form_steps<S: Scalar>(
    sys: &SaddleSystem<S>,
    k_max: u32,
) -> Result<Vec<NormalFormStep<S>>> {
    let nf = run(sys, k_max)?;
    let pq = (sys.p + sys.q) as usize;
    let top = nf.phi.max_degree();
    Ok((2..=top)
        .map(|m| {
            let resonant = ((m - 1) % pq == 0).then(|| {
                let k = ((m - 1) / pq) as u32;
                let (a, b) = resonant_pair(sys, &nf, k);
                (k, a, b)
            });
            NormalFormStep {
                degree: m as u32,
                phi: nf.phi.homogeneous(m),
                psi: nf.psi.homogeneous(m),
                resonant,
            }
        })
        .collect())
}
