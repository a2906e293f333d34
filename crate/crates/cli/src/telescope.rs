//! The indefinite-summation driver: telescope the summand, assemble the
//! rewritten sum identity, and verify it by exact evaluation over the
//! requested range before reporting anything.

use num_traits::Zero;
use pisigma_core::arith::Elem;
use pisigma_core::linsolve::{first_row_reduce, SolutionRow};
use pisigma_core::pt::solve_pt;
use pisigma_core::refined::{first_entry_pt, reduced_pt};
use pisigma_core::{Config, Flags};

use crate::compile::{compile_summand, eval_elem_q, eval_elem_symbolic, Compiled};
use crate::eval::{eval_q, eval_symbolic, Env};
use crate::expr::Expr;
use crate::{CliError, Q};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Full,
    FirstEntry,
    Reduced,
}

impl Mode {
    pub fn name(&self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::FirstEntry => "first-entry",
            Mode::Reduced => "reduced",
        }
    }
}

/// A verified simplification
/// S(m) = C + G(m) + sum_{k=delta_eff}^{m-1} Psi(k).
pub struct TelescopeReport {
    pub mode: Mode,
    pub compiled: Compiled,
    pub summand: Expr,
    pub index: String,
    pub bound_symbol: String,
    pub delta: i64,
    /// Validity threshold: poles of the certificate may push it above delta.
    pub delta_eff: i64,
    /// None when the requested mode found nothing (no first-entry row).
    pub certificate: Option<Certificate>,
    pub verified_to: i64,
    pub flags: Flags,
}

pub struct Certificate {
    /// The solver's first coefficient; the identity divides through by it.
    pub c1: Elem,
    pub g: Elem,
    pub psi: Elem,
    pub psi_level: usize,
    /// Boundary constant of the assembled identity (constant-field element).
    pub constant: Elem,
}

/// Accepts either `Sum(idx, lo, m, body)` or a bare summand (index `k`,
/// delta 1, bound symbol `m`).
pub fn split_sum_expr(e: &Expr) -> Result<(String, i64, String, Expr), CliError> {
    if let Expr::Sum { idx, lo, hi, body } = e {
        let delta = lo
            .as_q()
            .filter(|q| q.is_integer())
            .and_then(|q| i64::try_from(q.numer()).ok())
            .ok_or_else(|| {
                CliError::Unsupported("the lower summation bound must be an integer".into())
            })?;
        let Expr::Sym(bound) = &**hi else {
            return Err(CliError::Unsupported(
                "the upper summation bound must be a free symbol".into(),
            ));
        };
        return Ok((idx.clone(), delta, bound.clone(), (**body).clone()));
    }
    Ok(("k".to_string(), 1, "m".to_string(), e.clone()))
}

pub fn telescope(
    e: &Expr,
    mode: Mode,
    cfg: &Config,
    verify_to: i64,
) -> Result<TelescopeReport, CliError> {
    let (idx, delta, bound, body) = split_sum_expr(e)?;
    if body.free_symbols().iter().any(|s| *s == bound) {
        return Err(CliError::Unsupported(
            "the summand must not contain the upper bound symbol".into(),
        ));
    }
    let mut comp = compile_summand(&body, &idx, cfg)?;
    let mut flags = comp.flags;
    // telescope f = sigma(f~), i.e. F(k+1), so that the sum from delta to m
    // collapses against G(m) - G(delta)
    let f = comp.tower.sigma(&comp.elem);
    let level = comp.tower.height();

    let row: Option<(Elem, SolutionRow)> = match mode {
        Mode::Full => {
            let (basis, fl) = solve_pt(&comp.tower, level, &[f.clone()], cfg)?;
            flags.merge(fl);
            let reduced = first_row_reduce(&basis);
            reduced.first_entry_row().map(|r| (Elem::zero(), r.clone()))
        }
        Mode::FirstEntry => {
            let (fe, fl) = first_entry_pt(&comp.tower, level, &[f.clone()], cfg)?;
            flags.merge(fl);
            fe.map(|r| (Elem::zero(), r))
        }
        Mode::Reduced => {
            let (sp, fl) = reduced_pt(&comp.tower, level, &[f.clone()], cfg)?;
            flags.merge(fl);
            Some((sp.psi, SolutionRow::new(sp.coeffs, sp.g)))
        }
    };

    let Some((psi_raw, row)) = row else {
        comp.flags = flags;
        return Ok(TelescopeReport {
            mode,
            compiled: comp,
            summand: body,
            index: idx,
            bound_symbol: bound,
            delta,
            delta_eff: delta,
            certificate: None,
            verified_to: 0,
            flags,
        });
    };

    // normalize by c1: sigma(G) - G + Psi = F(k+1)
    let c1 = row.coeffs[0].clone();
    let g = row.g.div(&c1)?;
    let psi = psi_raw.div(&c1)?;
    let psi_level = comp.tower.split_level(&psi);

    // validity threshold: push past any pole of G or Psi in the range
    let env = Env::new();
    let params_present = !comp.tower.params().is_empty();
    let mut delta_eff = delta;
    let limit = delta + 64;
    'search: while delta_eff < limit {
        for probe in delta_eff..=(verify_to.max(delta_eff + 4)) {
            let ok = if params_present {
                eval_elem_symbolic(&comp, &g, probe).is_ok()
                    && eval_elem_symbolic(&comp, &psi, probe).is_ok()
            } else {
                eval_elem_q(&comp, &g, probe, &env).is_ok()
                    && eval_elem_q(&comp, &psi, probe, &env).is_ok()
            };
            if !ok {
                delta_eff = probe + 1;
                continue 'search;
            }
        }
        break;
    }
    if delta_eff >= limit {
        return Err(CliError::Verification("certificate has poles everywhere in range".into()));
    }

    // boundary constant C = sum_{k=delta}^{delta_eff} F(k) - G(delta_eff),
    // kept symbolic in the parameters
    let constant = {
        let mut c = Elem::zero();
        for k in delta..=delta_eff {
            c = c.add(&summand_value_symbolic(&comp, &body, k)?);
        }
        c.sub(&eval_elem_symbolic(&comp, &g, delta_eff)?)
    };

    // hard verification: LHS sum vs assembled RHS for every m in range, at
    // a few parameter specializations when parameters are present
    let p_assignments: Vec<Env> = if params_present {
        [2i64, 3, 5]
            .iter()
            .map(|&v| {
                let mut penv = Env::new();
                for p in comp.tower.params() {
                    penv.insert(p.clone(), Q::from_integer(v.into()));
                }
                penv
            })
            .collect()
    } else {
        vec![Env::new()]
    };
    let target = verify_to.max(delta_eff);
    let mut verified_to = delta_eff;
    for penv in &p_assignments {
        let cval = eval_elem_q(&comp, &constant, delta_eff, penv)?;
        let mut lhs = Q::zero();
        for k in delta..delta_eff {
            lhs += summand_value(&comp, &body, k, penv)?;
        }
        let mut psi_sum = Q::zero();
        for m in delta_eff..=target {
            lhs += summand_value(&comp, &body, m, penv)?;
            if m > delta_eff {
                psi_sum += eval_elem_q(&comp, &psi, m - 1, penv)?;
            }
            let rhs = &cval + eval_elem_q(&comp, &g, m, penv)? + &psi_sum;
            if lhs != rhs {
                return Err(CliError::Verification(format!(
                    "identity failed at {bound} = {m}: LHS {lhs} != RHS {rhs}"
                )));
            }
            verified_to = verified_to.max(m);
        }
    }

    comp.flags = flags;
    Ok(TelescopeReport {
        mode,
        compiled: comp,
        summand: body,
        index: idx,
        bound_symbol: bound,
        delta,
        delta_eff,
        certificate: Some(Certificate { c1, g, psi, psi_level, constant }),
        verified_to,
        flags,
    })
}

fn summand_value(comp: &Compiled, body: &Expr, k: i64, params: &Env) -> Result<Q, CliError> {
    let mut env = params.clone();
    env.insert(comp.index.clone(), Q::from_integer(k.into()));
    eval_q(body, &env)
}

fn summand_value_symbolic(comp: &Compiled, body: &Expr, k: i64) -> Result<Elem, CliError> {
    let mut ints = std::collections::HashMap::new();
    ints.insert(comp.index.clone(), k);
    let params: std::collections::HashMap<String, u32> = comp
        .tower
        .params()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    eval_symbolic(body, &ints, &params)
}

/// Render the identity's right-hand side as readable text.
pub fn identity_text(rep: &TelescopeReport) -> Option<String> {
    let cert = rep.certificate.as_ref()?;
    let t = &rep.compiled.tower;
    let m = &rep.bound_symbol;
    let idx = &rep.index;
    let mut parts: Vec<String> = Vec::new();
    if !cert.psi.is_zero() {
        parts.push(format!(
            "Sum({idx}, {}, {m} - 1, {})",
            rep.delta_eff,
            t.render_elem(&cert.psi)
        ));
    }
    parts.push(format!("[{}] at {idx} = {m}", t.render_elem(&cert.g)));
    if !cert.constant.is_zero() {
        parts.push(t.render_elem(&cert.constant));
    }
    Some(format!(
        "Sum({idx}, {}, {m}, {}) = {}",
        rep.delta,
        rep.summand,
        parts.join(" + ")
    ))
}

/// Exact equality of two expressions over an integer range of a variable.
pub fn check_identity(
    lhs: &Expr,
    rhs: &Expr,
    var: &str,
    from: i64,
    to: i64,
    params: &Env,
) -> Result<bool, CliError> {
    let mut env = params.clone();
    for n in from..=to {
        env.insert(var.to_string(), Q::from_integer(n.into()));
        let a = eval_q(lhs, &env)?;
        let b = eval_q(rhs, &env)?;
        if a != b {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn sum_of_ones_telescopes_to_m() {
        let e = parse("Sum(k,1,m,1)").unwrap();
        let rep = telescope(&e, Mode::Full, &Config::default(), 20).unwrap();
        let cert = rep.certificate.unwrap();
        assert!(cert.psi.is_zero());
        // G + C = m exactly: G = k (up to the constant fold)
        let k = rep.compiled.tower.gen_elem(1);
        assert_eq!(cert.g.add(&cert.constant), k);
    }

    #[test]
    fn harmonic_sum_identity() {
        // Sum H_k = (m+1) H_m - m
        let e = parse("Sum(k,1,m,H(k))").unwrap();
        let rep = telescope(&e, Mode::Reduced, &Config::default(), 30).unwrap();
        let cert = rep.certificate.unwrap();
        assert!(cert.psi.is_zero(), "the harmonic sum telescopes without a remainder");
        assert_eq!(rep.verified_to, 30);
        let t = &rep.compiled.tower;
        let k = t.gen_elem(1);
        let h = t.gen_elem(2);
        let want = k.add(&Elem::one()).mul(&h).sub(&k);
        assert_eq!(cert.g.add(&cert.constant), want);
    }

    #[test]
    fn no_first_entry_reported_as_none() {
        // H_k itself has no rational telescoper at level 1... but it does
        // telescope in its own tower; use a summand with no telescoper in
        // first-entry mode: k! H_k^2 (k^2+1) -- handled by reduced mode only
        let e = parse("Sum(k,1,m,(k^2+1)*k!*H(k)^2)").unwrap();
        let rep = telescope(&e, Mode::FirstEntry, &Config::default(), 10).unwrap();
        assert!(rep.certificate.is_none());
        let rep = telescope(&e, Mode::Reduced, &Config::default(), 25).unwrap();
        let cert = rep.certificate.unwrap();
        assert!(!cert.psi.is_zero());
        assert_eq!(cert.psi_level, 2);
        assert_eq!(rep.verified_to, 25);
    }

    #[test]
    fn check_identity_ranges() {
        let lhs = parse("Sum(k,1,m,H(k))").unwrap();
        let rhs = parse("(m+1)*H(m) - m").unwrap();
        assert!(check_identity(&lhs, &rhs, "m", 1, 25, &Env::new()).unwrap());
        let wrong = parse("(m+1)*H(m)").unwrap();
        assert!(!check_identity(&lhs, &wrong, "m", 1, 5, &Env::new()).unwrap());
    }
}
