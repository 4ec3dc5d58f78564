use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use rayon::prelude::*;
use saddle_core::acceptance::{self, CRITERIA};
use saddle_core::saddle::{saddle_order, saddle_values_integral, saddle_values_nf};
use saddle_core::witness::{
    build_matrix_a, build_u, build_u_symbolic, certify_unit, mu_candidates, rank_exact, rank_symbolic, RankMethod,
};
use saddle_core::{
    format_rational, perturb, resonance_data, row_index, synth_theorem1, theorem3_certificate, theorem4_certificate,
    BivarPoly, EpsForm, Rational, SaddleOrder, Scalar, SaddleSystem, SynthOptions, SystemDocument,
};
use serde_json::{json, Value};

use crate::args::*;

/// What a command produced, before it is wrapped into a report.
pub struct Output {
    pub result: Value,
    pub resonance: Option<Value>,
    pub text: String,
    /// Header and rows.
    pub csv: Option<Vec<Vec<String>>>,
    pub falsified: bool,
}

impl Output {
    fn new(result: Value, text: String) -> Self {
        Output {
            result,
            resonance: None,
            text,
            csv: None,
            falsified: false,
        }
    }
}

/// Reads and validates a document.
pub fn load(path: &Path) -> Result<SystemDocument> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    SystemDocument::parse(&text).with_context(|| format!("in {}", path.display()))
}

fn load_system(path: &Path, cmd: &str) -> Result<(SystemDocument, SaddleSystem<Rational>)> {
    let doc = load(path)?;
    if doc.eps_form.is_some() {
        bail!("{cmd} takes a system document, but {} has eps_form; use linearize", path.display());
    }
    let sys = doc.to_system()?;
    Ok((doc, sys))
}

/// Common degree of `P` and `Q` when both are homogeneous and there is no
/// unit factor.
fn homogeneous_degree(sys: &SaddleSystem<Rational>) -> Option<u32> {
    if sys.unit.is_some() {
        return None;
    }
    let n = sys.nonlin_x.total_degree().or(sys.nonlin_y.total_degree())?;
    (sys.nonlin_x.is_homogeneous(n) && sys.nonlin_y.is_homogeneous(n)).then_some(n)
}

fn n1_of(p: u32, q: u32, n: u32) -> u32 {
    (n - 1) / num_integer::gcd(n - 1, p + q)
}

fn default_order(sys: &SaddleSystem<Rational>) -> u32 {
    match homogeneous_degree(sys) {
        Some(n) => n1_of(sys.p, sys.q, n) * (n + 2),
        None => 12,
    }
}

fn order_str(o: SaddleOrder) -> String {
    o.to_string()
}

pub fn saddle_values(a: &SaddleValuesArgs) -> Result<(Output, Vec<String>)> {
    let (doc, sys) = load_system(&a.input, "saddle-values")?;
    let k_max = a.max_order.unwrap_or_else(|| default_order(&sys));
    let nf = (a.method != MethodChoice::Integral).then(|| saddle_values_nf(&sys, k_max)).transpose()?;
    let fi = (a.method != MethodChoice::Nf).then(|| saddle_values_integral(&sys, k_max)).transpose()?;

    let mut values = Vec::new();
    let mut rows = Vec::new();
    for k in 0..k_max as usize {
        for rec in nf.iter().chain(fi.iter()).map(|v| &v[k]) {
            let value = format_rational(&rec.value);
            values.push(json!({"k": rec.k, "method": rec.method, "value": value}));
            rows.push(vec![rec.k.to_string(), rec.method.to_string(), value]);
        }
    }
    let nf_order = nf.as_deref().map(SaddleOrder::of);
    let fi_order = fi.as_deref().map(SaddleOrder::of);
    let agree = match (nf_order, fi_order) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    let result = json!({
        "p": sys.p,
        "q": sys.q,
        "degree": sys.degree(),
        "homogeneous_degree": homogeneous_degree(&sys),
        "max_order": k_max,
        "values": values,
        "order": {"normal-form": nf_order, "first-integral": fi_order},
        "agree": agree,
    });

    let mut text = format!("p = {}, q = {}, degree {}, K = {k_max}\n", sys.p, sys.q, sys.degree());
    for row in &rows {
        if row[2] != "0" {
            writeln!(text, "  L_{} [{}] = {}", row[0], row[1], row[2])?;
        }
    }
    if rows.iter().all(|r| r[2] == "0") {
        writeln!(text, "  all saddle values through K vanish")?;
    }
    if let Some(o) = nf_order {
        writeln!(text, "saddle order (normal form): {}", order_str(o))?;
    }
    if let Some(o) = fi_order {
        writeln!(text, "saddle order (first integral): {}", order_str(o))?;
    }

    let mut out = Output::new(result, text);
    out.csv = Some(std::iter::once(vec!["k".into(), "method".into(), "value".into()]).chain(rows).collect());
    out.falsified = agree == Some(false);
    Ok((out, vec![doc.to_json()]))
}

pub fn linearize(a: &LinearizeArgs) -> Result<(Output, Vec<String>)> {
    let doc = load(&a.input)?;
    let fam = doc.to_family()?;
    ensure!(a.jet >= 1, "--jet must be at least 1");
    let jets = perturb::jet_saddle_values(&fam, a.max_order, a.jet)?;
    let prediction = perturb::linear_saddle_values(&fam, a.max_order)?;
    // The extraction predicts the unit-free and rescaled forms value by value.
    let checked = fam.form != EpsForm::Unit || fam.unit.as_ref().is_none_or(BivarPoly::is_zero);

    let mut values = Vec::new();
    let mut rows = Vec::new();
    let mut mismatches = Vec::new();
    let mut nonzero_at_zero = Vec::new();
    for (k, (jet, pred)) in (1..).zip(jets.iter().zip(&prediction)) {
        let coeffs: Vec<String> = jet.coeffs().iter().map(format_rational).collect();
        if !jet.coeff(0).vanishes() {
            nonzero_at_zero.push(k);
        }
        if checked && jet.coeff(1) != *pred {
            mismatches.push(k);
        }
        values.push(json!({"k": k, "jet": coeffs, "prediction": format_rational(pred)}));
        rows.push(std::iter::once(k.to_string()).chain(coeffs).chain([format_rational(pred)]).collect::<Vec<_>>());
    }
    let first_order = jets
        .iter()
        .position(|j| !j.coeff(1).vanishes())
        .map_or(SaddleOrder::AtLeast(a.max_order + 1), |i| SaddleOrder::Finite(i as u32 + 1));
    let result = json!({
        "p": fam.p,
        "q": fam.q,
        "eps_form": fam.form,
        "jet_order": a.jet,
        "max_order": a.max_order,
        "values": values,
        "first_order": first_order,
        "prediction_checked": checked,
        "mismatches": mismatches,
        "nonzero_at_eps_zero": nonzero_at_zero,
    });

    let mut text = format!("family {} with p = {}, q = {}, jets of order {}\n", fam.form, fam.p, fam.q, a.jet);
    for (k, (jet, pred)) in (1..).zip(jets.iter().zip(&prediction)) {
        writeln!(text, "  L_{k} = {jet}   extracted linear part {}", format_rational(pred))?;
    }
    writeln!(text, "first-order saddle order: {first_order}")?;
    if !checked {
        writeln!(text, "(form pertsys with U: extraction predicts the rescaled form, not compared)")?;
    }

    let mut header = vec!["k".to_string()];
    header.extend((0..=a.jet).map(|i| format!("eps^{i}")));
    header.push("prediction".into());
    let mut out = Output::new(result, text);
    out.csv = Some(std::iter::once(header).chain(rows).collect());
    out.falsified = !mismatches.is_empty() || !nonzero_at_zero.is_empty();
    Ok((out, vec![doc.to_json()]))
}

pub fn resonance(a: &Pqn) -> Result<(Output, Vec<String>)> {
    let rd = resonance_data(a.p, a.q, a.n)?;
    let rows: Vec<_> = match rd.congruence {
        Some(_) => (1..=a.n + 1).map(|m| row_index(&rd, m)).collect::<saddle_core::Result<_>>()?,
        None => Vec::new(),
    };
    let result = json!({
        "gate": rd.gate(),
        "gate_ok": rd.check_gate().is_ok(),
        "rows": rows,
    });

    let mut text = format!(
        "p = {}, q = {}, n = {}\nd = {}, n1 = {}, q1 = {}, p' = {}\n",
        rd.p, rd.q, rd.n, rd.d, rd.n1, rd.q1, rd.p_prime
    );
    match rd.big_n1 {
        Some(v) => writeln!(text, "N1 = {v}")?,
        None => writeln!(text, "N1 undefined (n - 1 <= p')")?,
    }
    if let Some(c) = &rd.congruence {
        writeln!(text, "N2 = {}", c.big_n2)?;
        for (j, s) in &c.s_table {
            writeln!(text, "  s_{j} = {s}")?;
        }
    }
    writeln!(text, "degree gate n >= {}: {}", rd.gate(), if rd.check_gate().is_ok() { "met" } else { "not met" })?;
    if !rows.is_empty() {
        writeln!(text, "   m   i_m   j_m   l_m")?;
        for r in &rows {
            writeln!(text, "{:>4}{:>6}{:>6}{:>6}", r.m, r.i_m, r.j_m, r.l_m)?;
        }
    }

    let csv = std::iter::once(["m", "i_m", "j_m", "l_m"].map(String::from).to_vec())
        .chain(rows.iter().map(|r| vec![r.m.to_string(), r.i_m.to_string(), r.j_m.to_string(), r.l_m.to_string()]))
        .collect();
    let mut out = Output::new(result, text);
    out.resonance = Some(serde_json::to_value(&rd)?);
    out.csv = Some(csv);
    Ok((out, Vec::new()))
}

fn matrix_csv(rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    let header = (1..=rows.first().map_or(0, Vec::len)).map(|j| format!("xi_{j}")).collect();
    std::iter::once(header).chain(rows).collect()
}

pub fn matrix(a: &MatrixArgs) -> Result<(Output, Vec<String>)> {
    let Pqn { p, q, n } = a.pqn;
    let rd = resonance_data(p, q, n)?;
    let choice = certify_unit(&rd, a.seed)?;
    let cert = &choice.certificate;
    let need = n as usize + 1;
    let (result, text, csv) = match &a.mu {
        Some(mu) => {
            let u = build_u(&rd, &cert.g, mu)?;
            let m = build_matrix_a(&rd, &u)?;
            let r = rank_exact(&m);
            let result = json!({
                "U": u.pretty(),
                "g": cert.g.pretty(),
                "branch": cert.branch,
                "mu": format_rational(mu),
                "rows": m.nrows(),
                "cols": m.ncols(),
                "entries": m,
                "rank": r.rank,
                "pivots": r.pivots,
                "required": need,
                "full_rank": r.rank == need,
            });
            let text = format!(
                "U = {} at mu = {}\nA is {} x {}, rank {} of {need}\n{}",
                u.pretty(),
                format_rational(mu),
                m.nrows(),
                m.ncols(),
                r.rank,
                grid(&m.to_strings())
            );
            (result, text, matrix_csv(m.to_strings()))
        }
        None => {
            let u = build_u_symbolic(&rd, &cert.g)?;
            let m = build_matrix_a(&rd, &u)?;
            let sr = rank_symbolic(&m, &mu_candidates(10));
            let how = match &sr.method {
                RankMethod::Specialization { mu } => format!("full rank at mu = {}", format_rational(mu)),
                RankMethod::Elimination => "fraction-free elimination over Q[mu]".into(),
            };
            let result = json!({
                "U": u.to_string(),
                "g": cert.g.pretty(),
                "branch": cert.branch,
                "rows": m.nrows(),
                "cols": m.ncols(),
                "entries": m,
                "symbolic_rank": sr,
                "required": need,
                "full_rank": sr.result.rank == need,
                "certificate": cert,
            });
            let text = format!(
                "U = {u}\ng from {}\nA(mu) is {} x {}, rank {} of {need} ({how})\n{}",
                cert.branch,
                m.nrows(),
                m.ncols(),
                sr.result.rank,
                grid(&m.to_strings())
            );
            (result, text, matrix_csv(m.to_strings()))
        }
    };
    let mut out = Output::new(result, text);
    out.resonance = Some(serde_json::to_value(&rd)?);
    out.csv = Some(csv);
    Ok((out, Vec::new()))
}

fn grid(rows: &[Vec<String>]) -> String {
    let ncols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..ncols).map(|j| rows.iter().map(|r| r[j].len()).max().unwrap_or(1)).collect();
    rows.iter()
        .map(|r| r.iter().zip(&widths).map(|(c, &w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ") + "\n")
        .collect()
}

pub fn witness(a: &WitnessArgs) -> Result<(Output, Vec<String>)> {
    let Pqn { p, q, n } = a.pqn;
    ensure!(a.jet >= 1, "--jet must be at least 1");
    let opts = SynthOptions {
        eps: a.eps.clone(),
        jet_order: a.jet,
        seed: a.seed,
        allow_below_gate: a.allow_below_gate,
    };
    let w = synth_theorem1(p, q, n, &opts)?;
    let sys = w.system.to_system()?;
    let mut text = format!("witness at p = {p}, q = {q}, n = {n}\n");
    if w.below_gate {
        writeln!(text, "BELOW THE DEGREE GATE n >= {}", w.resonance.gate())?;
    }
    writeln!(text, "U = {}", w.unit.pretty())?;
    writeln!(
        text,
        "g from {}, mu = {}, rank {} of {}",
        w.rank.branch,
        format_rational(&w.rank.mu),
        w.rank.rank,
        w.rank.required
    )?;
    let xi0: Vec<String> = w.xi.iter().map(|s| format_rational(&s[0])).collect();
    writeln!(text, "xi(0) = [{}]", xi0.join(", "))?;
    writeln!(text, "eps = {}", format_rational(&w.eps))?;
    writeln!(text, "P = {}", sys.nonlin_x.pretty())?;
    writeln!(text, "Q = {}", sys.nonlin_y.pretty())?;
    if let Some(u) = &sys.unit {
        writeln!(text, "system unit factor = {}", u.pretty())?;
    }
    writeln!(text, "claimed order {}, first-order saddle order {}", w.claimed_order, w.first_order)?;
    writeln!(text, "verified: {}, engines agree: {}", w.verified, w.agreement)?;

    let mut out = Output::new(serde_json::to_value(&w)?, text);
    out.resonance = Some(serde_json::to_value(&w.resonance)?);
    out.falsified = !(w.verified && w.agreement);
    Ok((out, Vec::new()))
}

pub fn certificate(a: &CertificateArgs) -> Result<(Output, Vec<String>)> {
    let Pqn { p, q, n } = a.pqn;
    let (base, result, verdict, header) = if a.general {
        let c = theorem4_certificate(p, q, n)?;
        let header = format!("general degree n = {n}: homogeneous certificate at n' = {} lifted by r = {}\n", c.n_prime, c.r);
        (c.base.clone(), serde_json::to_value(&c)?, c.verdict, header)
    } else {
        let c = theorem3_certificate(p, q, n)?;
        (c.clone(), serde_json::to_value(&c)?, c.verdict, String::new())
    };
    let mut text = header;
    writeln!(text, "p = {}, q = {}, n = {}: N1 = {}, N2 = {}, k0 = {}", base.p, base.q, base.n, base.big_n1, base.big_n2, base.k0)?;
    writeln!(text, "binomial structure of {} rows at U = f: {}", base.rows_checked, base.structure_ok)?;
    for (name, f) in [("N2", &base.form_n2), ("N1+N2", &base.form_top)] {
        writeln!(text, "row m = {} ({name}): i = {}, l = {}, column {}, C(i,l) = {}, C(i,l-1) = {}", f.m, f.i, f.l, f.j, f.c_l, f.c_l_minus_1)?;
    }
    if let Some(d) = &base.difference {
        writeln!(text, "ratio difference = {}", format_rational(d))?;
    }
    writeln!(text, "verdict: {}", if verdict { "L_k0 is not in the ideal at first order" } else { "NOT CERTIFIED" })?;
    writeln!(text, "{}", if a.general { theorem4_certificate(p, q, n)?.bound } else { base.bound.clone() })?;

    let mut out = Output::new(result, text);
    out.resonance = Some(serde_json::to_value(&base.resonance)?);
    out.falsified = !verdict;
    Ok((out, Vec::new()))
}

pub fn lift(a: &LiftArgs) -> Result<(Output, Vec<String>)> {
    let (doc, sys) = load_system(&a.input, "lift")?;
    let k_max = a.max_order.unwrap_or_else(|| default_order(&sys));
    let lifted = sys.lift_degree(a.r)?;
    let before = saddle_order(&sys, k_max)?;
    let after = saddle_order(&lifted, k_max)?;
    let preserved = before == after && before.agree;
    let lifted_doc = SystemDocument::from_system(&lifted);
    let result = json!({
        "r": a.r,
        "max_order": k_max,
        "original": {"degree": sys.degree(), "order": before},
        "lifted": {"degree": lifted.degree(), "order": after, "system": lifted_doc},
        "preserved": preserved,
    });
    let text = format!(
        "lift by 1 + x^{}: degree {} -> {}\norder (normal form / first integral): {} / {} -> {} / {}\npreserved: {preserved}\nlifted system:\n{}\n",
        a.r,
        sys.degree(),
        lifted.degree(),
        before.normal_form,
        before.first_integral,
        after.normal_form,
        after.first_integral,
        lifted_doc.to_json()
    );
    let mut out = Output::new(result, text);
    out.falsified = !preserved;
    Ok((out, vec![doc.to_json()]))
}

pub fn verify_homo(a: &VerifyHomoArgs) -> Result<(Output, Vec<String>)> {
    let (doc, sys) = load_system(&a.input, "verify-homo")?;
    let Some(n) = homogeneous_degree(&sys) else {
        bail!("non-homogeneous input: verify-homo needs P and Q homogeneous of one degree and no unit factor");
    };
    let n1 = n1_of(sys.p, sys.q, n);
    let k_max = a.max_order.unwrap_or(n1 * (n + 2));
    let nf = saddle_values_nf(&sys, k_max)?;
    let fi = saddle_values_integral(&sys, k_max)?;
    let constrained: Vec<u32> = (1..=k_max).filter(|k| k % n1 != 0).collect();
    let mut violations = Vec::new();
    let mut rows = Vec::new();
    for &k in &constrained {
        for rec in [&nf[k as usize - 1], &fi[k as usize - 1]] {
            let value = format_rational(&rec.value);
            if !rec.value.vanishes() {
                violations.push(json!({"k": k, "method": rec.method, "value": value}));
            }
            rows.push(vec![k.to_string(), rec.method.to_string(), value]);
        }
    }
    let result = json!({
        "p": sys.p,
        "q": sys.q,
        "n": n,
        "d": num_integer::gcd(n - 1, sys.p + sys.q),
        "n1": n1,
        "max_order": k_max,
        "constrained": constrained,
        "violations": violations,
        "order": saddle_order(&sys, k_max)?,
    });
    let mut text = format!("homogeneous degree {n}, p = {}, q = {}, n1 = {n1}, K = {k_max}\n", sys.p, sys.q);
    if constrained.is_empty() {
        writeln!(text, "n1 divides every k: nothing to check")?;
    } else {
        writeln!(text, "checked L_k = 0 for {} indices k not divisible by n1", constrained.len())?;
    }
    writeln!(text, "violations: {}", violations.len())?;
    for v in &violations {
        writeln!(text, "  L_{} [{}] = {}", v["k"], v["method"].as_str().unwrap_or(""), v["value"].as_str().unwrap_or(""))?;
    }
    let mut out = Output::new(result, text);
    out.csv = Some(std::iter::once(vec!["k".into(), "method".into(), "value".into()]).chain(rows).collect());
    out.falsified = !violations.is_empty();
    Ok((out, vec![doc.to_json()]))
}

pub fn selftest(a: &SelftestArgs, timing: bool) -> Result<(Output, Vec<String>)> {
    let ids: Vec<usize> = if a.only.is_empty() { (1..=CRITERIA.len()).collect() } else { a.only.clone() };
    for &id in &ids {
        ensure!((1..=CRITERIA.len()).contains(&id), "no criterion {id}; criteria are 1..={}", CRITERIA.len());
    }
    let outcomes: Vec<_> = ids.par_iter().map(|&id| acceptance::run(id)).collect();
    let mut criteria = Vec::new();
    let mut text = String::new();
    for o in &outcomes {
        let mut v = serde_json::to_value(o)?;
        if !timing {
            v.as_object_mut().map(|m| m.remove("seconds"));
        }
        criteria.push(v);
        writeln!(text, "{}", o.line(timing))?;
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    writeln!(text, "{} of {} criteria passed", outcomes.len() - failed.len(), outcomes.len())?;
    let mut out = Output::new(json!({"criteria": criteria, "failed": failed}), text);
    out.falsified = !failed.is_empty();
    Ok((out, Vec::new()))
}
