//! Compile summand expressions into Pi/Sigma* towers.
//!
//! All hypergeometric factors of one product (factorials, binomials,
//! Pochhammer symbols, geometric powers, rational-body products) fold into a
//! single Pi generator whose alpha is the product of their shift quotients;
//! harmonic numbers and nested sums become Sigma* generators through the
//! telescoping test, which also deduplicates them: a sum whose increment
//! already telescopes in the tower comes back as an element instead of a
//! new generator.

use std::collections::HashMap;

use num_traits::Signed;
use pisigma_core::arith::Elem;
use pisigma_core::structure::{try_sigma_star_extension, ExtendOutcome};
use pisigma_core::tower::{GenKind, Tower};
use pisigma_core::{Config, Flags};

use crate::eval::{eval_q, eval_symbolic, harmonic_q, pow_q, Env};
use crate::expr::Expr;
use crate::{CliError, Q};

/// A compiled summand: the tower, the element representing F at the index
/// value, and per-generator defining expressions for exact evaluation.
pub struct Compiled {
    pub tower: Tower,
    /// Defining expression (in the index variable and the parameters) of
    /// each generator, aligned with `tower.gens()`.
    pub defs: Vec<Expr>,
    pub elem: Elem,
    pub index: String,
    pub summand: Expr,
    pub flags: Flags,
}

pub fn compile_summand(summand: &Expr, index: &str, cfg: &Config) -> Result<Compiled, CliError> {
    let mut params: Vec<String> = summand
        .free_symbols()
        .into_iter()
        .filter(|s| s != index)
        .collect();
    params.sort();
    let tower = Tower::constant_field(&params.iter().map(|s| s.as_str()).collect::<Vec<_>>());
    let tower = tower
        .extend(index, GenKind::SigmaStar, Elem::one(), Elem::one())
        .map_err(CliError::Core)?;
    let mut c = Compiler {
        tower,
        defs: vec![Expr::sym(index)],
        index: index.to_string(),
        cfg: cfg.clone(),
        flags: Flags::default(),
    };
    let elem = c.compile_expr(summand)?;
    Ok(Compiled {
        tower: c.tower,
        defs: c.defs,
        elem,
        index: index.to_string(),
        summand: summand.clone(),
        flags: c.flags,
    })
}

struct Compiler {
    tower: Tower,
    defs: Vec<Expr>,
    index: String,
    cfg: Config,
    flags: Flags,
}

impl Compiler {
    fn param_vars(&self) -> HashMap<String, u32> {
        self.tower
            .params()
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect()
    }

    /// Evaluate an index-free, atom-free expression to a constant-field or
    /// rational-function element (parameters and the index allowed).
    fn scalar_elem(&self, e: &Expr) -> Result<Elem, CliError> {
        let mut params = self.param_vars();
        params.insert(self.index.clone(), self.tower.var_of_level(1));
        eval_symbolic(e, &HashMap::new(), &params)
    }

    fn compile_expr(&mut self, e: &Expr) -> Result<Elem, CliError> {
        match e {
            Expr::Int(n) => Ok(Elem::from_q(Q::from_integer(n.clone()))),
            Expr::Sym(s) => {
                if s == &self.index {
                    Ok(self.tower.gen_elem(1))
                } else if let Some(v) = self.tower.var_by_name(s) {
                    Ok(Elem::var(v))
                } else {
                    Err(CliError::Unsupported(format!("unknown symbol {s}")))
                }
            }
            Expr::Add(a, b) => Ok(self.compile_expr(a)?.add(&self.compile_expr(b)?)),
            Expr::Sub(a, b) => Ok(self.compile_expr(a)?.sub(&self.compile_expr(b)?)),
            Expr::Neg(a) => Ok(self.compile_expr(a)?.neg()),
            _ => self.compile_product(e),
        }
    }

    /// Multiplicative path: split into factors, fold the hypergeometric
    /// atoms into one Pi generator, compile the rest recursively.
    fn compile_product(&mut self, e: &Expr) -> Result<Elem, CliError> {
        let mut factors = Vec::new();
        flatten_product(e, 1, &mut factors);
        let mut result = Elem::one();
        let mut alpha = Elem::one();
        let mut atom_value: Option<Expr> = None;
        let mut atoms: Vec<(Expr, i64)> = Vec::new();
        for (factor, exp) in factors {
            if exp == 0 {
                continue;
            }
            match self.classify(&factor)? {
                Class::Hyper => {
                    let ratio = self.atom_shift_ratio(&factor, &self.index.clone())?;
                    if ratio.is_zero() {
                        return Err(CliError::Unsupported(format!(
                            "vanishing shift quotient in {factor}"
                        )));
                    }
                    alpha = alpha.mul(&ratio.pow_i64(exp).map_err(CliError::Core)?);
                    let powered = if exp == 1 {
                        factor.clone()
                    } else {
                        Expr::Pow(factor.clone().into(), Expr::int(exp).into())
                    };
                    atom_value = Some(match atom_value {
                        None => powered,
                        Some(prev) => Expr::Mul(prev.into(), powered.into()),
                    });
                    atoms.push((factor, exp));
                }
                Class::SigmaAtom => {
                    let g = self.compile_sigma_atom(&factor)?;
                    result = result.mul(&g.pow_i64(exp).map_err(CliError::Core)?);
                }
                Class::Other => {
                    let g = self.compile_expr(&factor)?;
                    if g.is_zero() && exp < 0 {
                        return Err(CliError::Eval("division by zero".into()));
                    }
                    result = result.mul(&g.pow_i64(exp).map_err(CliError::Core)?);
                }
            }
        }
        if let Some(value) = atom_value {
            let gen = self.pi_generator(alpha, value)?;
            result = result.mul(&gen);
        }
        Ok(result)
    }

    /// Find or create the Pi generator for a combined hypergeometric part.
    fn pi_generator(&mut self, alpha: Elem, value: Expr) -> Result<Elem, CliError> {
        if alpha.is_one() {
            // shift-invariant product: a constant sequence
            return self.symbolic_value_at_small_point(&value);
        }
        if alpha == Elem::from_i64(-1) {
            return Err(CliError::Unsupported(
                "alternating sign alone (alpha = -1) would grow the constant field; \
                 combine it with a hypergeometric factor"
                    .into(),
            ));
        }
        // reuse an existing generator with the same shift quotient
        for level in 2..=self.tower.height() {
            let gen = self.tower.gen(level);
            if gen.kind == GenKind::Pi && gen.alpha == alpha {
                let old = self.defs[level - 1].clone();
                let scale = self.value_ratio(&value, &old)?;
                return Ok(scale.mul(&self.tower.gen_elem(level)));
            }
        }
        let name = self.fresh_name("p");
        self.tower = self
            .tower
            .extend(&name, GenKind::Pi, alpha, Elem::zero())
            .map_err(CliError::Core)?;
        self.defs.push(value);
        Ok(self.tower.gen_elem(self.tower.height()))
    }

    /// Two sequences with the same shift quotient differ by the constant
    /// ratio of their values at any common point.
    fn value_ratio(&self, new: &Expr, old: &Expr) -> Result<Elem, CliError> {
        for k0 in 0..8i64 {
            let mut ints = HashMap::new();
            ints.insert(self.index.clone(), k0);
            let params = self.param_vars();
            let Ok(a) = eval_symbolic(new, &ints, &params) else { continue };
            let Ok(b) = eval_symbolic(old, &ints, &params) else { continue };
            if b.is_zero() {
                continue;
            }
            return Ok(a.div(&b).map_err(CliError::Core)?);
        }
        Err(CliError::Unsupported("could not align two equal-quotient products".into()))
    }

    fn symbolic_value_at_small_point(&self, value: &Expr) -> Result<Elem, CliError> {
        for k0 in 0..8i64 {
            let mut ints = HashMap::new();
            ints.insert(self.index.clone(), k0);
            if let Ok(v) = eval_symbolic(value, &ints, &self.param_vars()) {
                return Ok(v);
            }
        }
        Err(CliError::Unsupported(format!("cannot evaluate the constant product {value}")))
    }

    fn fresh_name(&self, base: &str) -> String {
        if self.tower.var_by_name(base).is_none() {
            return base.to_string();
        }
        let mut i = 2;
        loop {
            let cand = format!("{base}{i}");
            if self.tower.var_by_name(&cand).is_none() {
                return cand;
            }
            i += 1;
        }
    }

    /// Harmonic numbers and nested sums: compile the increment and run the
    /// telescoping test; an extension is added only when nothing in the
    /// current tower telescopes it.
    fn compile_sigma_atom(&mut self, atom: &Expr) -> Result<Elem, CliError> {
        match atom {
            Expr::Harmonic(u) => {
                if **u != Expr::Sym(self.index.clone()) {
                    return Err(CliError::Unsupported(format!(
                        "harmonic numbers are supported at the summation index only, got H({u})"
                    )));
                }
                let x = self.tower.gen_elem(1);
                let beta = Elem::one()
                    .div(&x.add(&Elem::one()))
                    .map_err(CliError::Core)?;
                self.sigma_extend(beta, Expr::Harmonic(u.clone()), "h")
            }
            Expr::Sum { idx, lo: _, hi, body } => {
                if **hi != Expr::Sym(self.index.clone()) {
                    return Err(CliError::Unsupported(
                        "nested sums must run up to the summation index".into(),
                    ));
                }
                let body_at_index = body.subst(idx, &Expr::sym(&self.index));
                let btilde = self.compile_expr(&body_at_index)?;
                let beta = self.tower.sigma(&btilde);
                self.sigma_extend(beta, atom.clone(), "s")
            }
            other => Err(CliError::Unsupported(format!("unsupported atom {other}"))),
        }
    }

    fn sigma_extend(&mut self, beta: Elem, value: Expr, base_name: &str) -> Result<Elem, CliError> {
        let name = self.fresh_name(base_name);
        let (out, fl) =
            try_sigma_star_extension(&self.tower, &beta, &name, &self.cfg).map_err(CliError::Core)?;
        self.flags.merge(fl);
        match out {
            ExtendOutcome::Extended(t) => {
                self.tower = t;
                self.defs.push(value);
                Ok(self.tower.gen_elem(self.tower.height()))
            }
            ExtendOutcome::Telescoper(g) => {
                // value(k) = g(k) + constant; pin the constant at a point
                // where both sides evaluate
                for k0 in 0..8i64 {
                    let mut ints = HashMap::new();
                    ints.insert(self.index.clone(), k0);
                    let Ok(v) = eval_symbolic(&value, &ints, &self.param_vars()) else { continue };
                    let Ok(gv) = eval_elem_symbolic_at(self, &g, k0) else { continue };
                    return Ok(g.add(&v.sub(&gv)));
                }
                Err(CliError::Unsupported("could not pin the telescoped sum's constant".into()))
            }
        }
    }

    /// Shift quotient atom(sym+1)/atom(sym) as a rational-function element.
    fn atom_shift_ratio(&mut self, atom: &Expr, sym: &str) -> Result<Elem, CliError> {
        let frat = |w: &Elem, delta: i64| -> Result<Elem, CliError> {
            // (w + delta)! / w!
            let mut acc = Elem::one();
            if delta >= 0 {
                for j in 1..=delta {
                    acc = acc.mul(&w.add(&Elem::from_i64(j)));
                }
            } else {
                for j in 0..(-delta) {
                    let t = w.sub(&Elem::from_i64(j));
                    if t.is_zero() {
                        return Err(CliError::Unsupported("factorial shift through zero".into()));
                    }
                    acc = acc.div(&t).map_err(CliError::Core)?;
                }
            }
            Ok(acc)
        };
        match atom {
            Expr::Factorial(u) => {
                let (a, _) = affine_in(u, sym).ok_or_else(|| {
                    CliError::Unsupported(format!("factorial argument not affine in {sym}: {u}"))
                })?;
                let w = self.scalar_elem(u)?;
                frat(&w, a)
            }
            Expr::Binomial(u, v) => {
                let (au, _) = affine_in(u, sym).ok_or_else(|| {
                    CliError::Unsupported(format!("binomial argument not affine in {sym}: {u}"))
                })?;
                let (av, _) = affine_in(v, sym).ok_or_else(|| {
                    CliError::Unsupported(format!("binomial argument not affine in {sym}: {v}"))
                })?;
                let ue = self.scalar_elem(u)?;
                let ve = self.scalar_elem(v)?;
                let top = frat(&ue, au)?;
                let bot1 = frat(&ve, av)?;
                let bot2 = frat(&ue.sub(&ve), au - av)?;
                top.div(&bot1.mul(&bot2)).map_err(CliError::Core)
            }
            Expr::Pochhammer(b, u) => {
                let (a, _) = affine_in(u, sym).ok_or_else(|| {
                    CliError::Unsupported("Pochhammer length not affine in the index".into())
                })?;
                if affine_in(b, sym).map(|(c, _)| c) != Some(0) {
                    return Err(CliError::Unsupported(
                        "Pochhammer base must be free of the shifted variable".into(),
                    ));
                }
                let be = self.scalar_elem(b)?;
                let ue = self.scalar_elem(u)?;
                let mut acc = Elem::one();
                if a >= 0 {
                    for j in 0..a {
                        acc = acc.mul(&be.add(&ue).add(&Elem::from_i64(j)));
                    }
                } else {
                    for j in 1..=(-a) {
                        let t = be.add(&ue).sub(&Elem::from_i64(j));
                        acc = acc.div(&t).map_err(CliError::Core)?;
                    }
                }
                Ok(acc)
            }
            Expr::Pow(base, expo) => {
                let (a, _) = affine_in(expo, sym).ok_or_else(|| {
                    CliError::Unsupported(format!("exponent not affine in {sym}: {expo}"))
                })?;
                if !base.free_symbols().iter().all(|s| s != sym) {
                    return Err(CliError::Unsupported(format!(
                        "geometric base must be free of {sym}: {base}"
                    )));
                }
                let b = self.scalar_elem(base)?;
                if b.is_zero() {
                    return Err(CliError::Eval("zero base in a geometric factor".into()));
                }
                b.pow_i64(a).map_err(CliError::Core)
            }
            Expr::Product { idx, lo: _, hi, body } => {
                if sym != self.index || **hi != Expr::Sym(self.index.clone()) {
                    return Err(CliError::Unsupported(
                        "products shift only in their own upper index".into(),
                    ));
                }
                let body_at_index = body.subst(idx, &Expr::sym(&self.index));
                let b = self.compile_expr(&body_at_index)?;
                if self.tower.split_level(&b) > 1 {
                    self.flags.unverified_extension = true;
                }
                Ok(self.tower.sigma(&b))
            }
            other => Err(CliError::Unsupported(format!("not a hypergeometric atom: {other}"))),
        }
    }
}

#[derive(PartialEq)]
enum Class {
    Hyper,
    SigmaAtom,
    Other,
}

impl Compiler {
    fn classify(&self, factor: &Expr) -> Result<Class, CliError> {
        Ok(match factor {
            Expr::Factorial(_) | Expr::Binomial(..) | Expr::Pochhammer(..) => Class::Hyper,
            Expr::Harmonic(_) | Expr::Sum { .. } => Class::SigmaAtom,
            Expr::Product { .. } => Class::Hyper,
            Expr::Pow(base, expo) => {
                // a symbolic exponent makes a geometric factor; integer
                // exponents were already flattened away
                if expo.as_q().is_none() && affine_in(expo, &self.index).is_some() {
                    if base.free_symbols().contains(&self.index) {
                        return Err(CliError::Unsupported(format!(
                            "exponent and base both involve the index: {factor}"
                        )));
                    }
                    Class::Hyper
                } else {
                    Class::Other
                }
            }
            _ => Class::Other,
        })
    }
}

/// Flatten a multiplicative expression into (factor, exponent) pairs;
/// integer powers multiply exponents, Div contributes negatively.
fn flatten_product(e: &Expr, exp: i64, out: &mut Vec<(Expr, i64)>) {
    match e {
        Expr::Mul(a, b) => {
            flatten_product(a, exp, out);
            flatten_product(b, exp, out);
        }
        Expr::Div(a, b) => {
            flatten_product(a, exp, out);
            flatten_product(b, -exp, out);
        }
        Expr::Neg(a) => {
            out.push((Expr::int(-1), exp));
            flatten_product(a, exp, out);
        }
        Expr::Pow(base, expo) => {
            if let Some(q) = expo.as_q() {
                if q.is_integer() {
                    if let Ok(n) = i64::try_from(q.numer()) {
                        flatten_product(base, exp * n, out);
                        return;
                    }
                }
            }
            out.push((e.clone(), exp));
        }
        _ => out.push((e.clone(), exp)),
    }
}

/// u = a * sym + rest with a an integer and rest free of sym.
pub fn affine_in(u: &Expr, sym: &str) -> Option<(i64, ())> {
    fn go(u: &Expr, sym: &str) -> Option<i64> {
        match u {
            Expr::Sym(s) => Some(if s == sym { 1 } else { 0 }),
            Expr::Int(_) => Some(0),
            Expr::Add(a, b) => Some(go(a, sym)? + go(b, sym)?),
            Expr::Sub(a, b) => Some(go(a, sym)? - go(b, sym)?),
            Expr::Neg(a) => Some(-go(a, sym)?),
            Expr::Mul(a, b) => {
                let (ca, cb) = (go(a, sym)?, go(b, sym)?);
                if ca == 0 && b.free_symbols().iter().all(|s| s != sym) {
                    // sym-free * sym-free
                    if cb == 0 {
                        return Some(0);
                    }
                }
                // integer-literal times affine
                if let Some(q) = a.as_q() {
                    if q.is_integer() {
                        return Some(i64::try_from(q.numer()).ok()? * cb);
                    }
                }
                if let Some(q) = b.as_q() {
                    if q.is_integer() {
                        return Some(ca * i64::try_from(q.numer()).ok()?);
                    }
                }
                if ca == 0 && cb == 0 {
                    Some(0)
                } else {
                    None
                }
            }
            Expr::Div(a, b) => {
                if go(b, sym)? == 0 && go(a, sym)? == 0 {
                    Some(0)
                } else {
                    None
                }
            }
            other => {
                if other.free_symbols().iter().all(|s| s != sym) {
                    Some(0)
                } else {
                    None
                }
            }
        }
    }
    go(u, sym).map(|a| (a, ()))
}

// ---- exact evaluation of tower elements through the generator definitions ----

/// Numeric value of a tower element at index = k with the given parameter
/// values. Errors on poles (the certificate's validity threshold).
pub fn eval_elem_q(comp: &Compiled, e: &Elem, k: i64, params: &Env) -> Result<Q, CliError> {
    let values = gen_values_q(comp, k, params)?;
    eval_elem_with(comp, e, &values, params)
}

fn gen_values_q(comp: &Compiled, k: i64, params: &Env) -> Result<Vec<Q>, CliError> {
    let mut env: Env = params.clone();
    env.insert(comp.index.clone(), Q::from_integer(k.into()));
    comp.defs.iter().map(|d| eval_q(d, &env)).collect()
}

fn eval_elem_with(
    comp: &Compiled,
    e: &Elem,
    gen_values: &[Q],
    params: &Env,
) -> Result<Q, CliError> {
    use num_traits::Zero;
    match e.top_var() {
        None => Ok(e.as_q().unwrap().clone()),
        Some(v) => {
            let xval = if (v as usize) < comp.tower.nparams() {
                params
                    .get(&comp.tower.params()[v as usize])
                    .cloned()
                    .ok_or_else(|| CliError::Eval("missing parameter value".into()))?
            } else {
                gen_values[v as usize - comp.tower.nparams()].clone()
            };
            let (num, den) = e.num_den_at(v);
            let horner = |p: &[Elem]| -> Result<Q, CliError> {
                let mut acc = Q::zero();
                for c in p.iter().rev() {
                    acc = acc * &xval + eval_elem_with(comp, c, gen_values, params)?;
                }
                Ok(acc)
            };
            let d = horner(&den)?;
            if d.is_zero() {
                return Err(CliError::Eval("pole while evaluating an element".into()));
            }
            Ok(horner(&num)? / d)
        }
    }
}

/// Value at index = k with the parameters kept symbolic (a constant-field
/// element).
fn eval_elem_symbolic_at(c: &Compiler, e: &Elem, k: i64) -> Result<Elem, CliError> {
    let mut ints = HashMap::new();
    ints.insert(c.index.clone(), k);
    let params = c.param_vars();
    let gen_values: Vec<Elem> = c
        .defs
        .iter()
        .map(|d| eval_symbolic(d, &ints, &params))
        .collect::<Result<_, _>>()?;
    eval_elem_symbolic_with(c.tower.nparams(), e, &gen_values)
}

/// Same, for a finished compilation.
pub fn eval_elem_symbolic(comp: &Compiled, e: &Elem, k: i64) -> Result<Elem, CliError> {
    let mut ints = HashMap::new();
    ints.insert(comp.index.clone(), k);
    let params: HashMap<String, u32> = comp
        .tower
        .params()
        .iter()
        .enumerate()
        .map(|(i, s)| (s.clone(), i as u32))
        .collect();
    let gen_values: Vec<Elem> = comp
        .defs
        .iter()
        .map(|d| eval_symbolic(d, &ints, &params))
        .collect::<Result<_, _>>()?;
    eval_elem_symbolic_with(comp.tower.nparams(), e, &gen_values)
}

fn eval_elem_symbolic_with(
    nparams: usize,
    e: &Elem,
    gen_values: &[Elem],
) -> Result<Elem, CliError> {
    match e.top_var() {
        None => Ok(e.clone()),
        Some(v) if (v as usize) < nparams => Ok(e.clone()),
        Some(v) => {
            let xval = gen_values[v as usize - nparams].clone();
            let (num, den) = e.num_den_at(v);
            let horner = |p: &[Elem]| -> Result<Elem, CliError> {
                let mut acc = Elem::zero();
                for c in p.iter().rev() {
                    acc = acc.mul(&xval).add(&eval_elem_symbolic_with(nparams, c, gen_values)?);
                }
                Ok(acc)
            };
            let d = horner(&den)?;
            if d.is_zero() {
                return Err(CliError::Eval("pole while evaluating an element".into()));
            }
            horner(&num)?.div(&d).map_err(CliError::Core)
        }
    }
}

/// Shift quotient F(r+1, k)/F(r, k) of a multiplicative summand, as a
/// rational-function element; errors when a factor's quotient is not
/// rational in (r, k).
pub fn r_shift_quotient(comp: &Compiled, rsym: &str, cfg: &Config) -> Result<Elem, CliError> {
    let rvar = comp
        .tower
        .var_by_name(rsym)
        .filter(|v| (*v as usize) < comp.tower.nparams())
        .ok_or_else(|| CliError::Unsupported(format!("{rsym} is not a parameter")))?;
    let mut c = Compiler {
        tower: comp.tower.clone(),
        defs: comp.defs.clone(),
        index: comp.index.clone(),
        cfg: cfg.clone(),
        flags: Flags::default(),
    };
    let mut factors = Vec::new();
    flatten_product(&comp.summand, 1, &mut factors);
    let mut ratio = Elem::one();
    let rplus = Elem::var(rvar).add(&Elem::one());
    for (factor, exp) in factors {
        if exp == 0 {
            continue;
        }
        let part = match c.classify(&factor)? {
            Class::Hyper => c.atom_shift_ratio(&factor, rsym)?,
            Class::SigmaAtom => {
                if factor.free_symbols().iter().any(|s| s == rsym) {
                    return Err(CliError::Unsupported(format!(
                        "sum atom depends on the recurrence parameter: {factor}"
                    )));
                }
                Elem::one()
            }
            Class::Other => {
                if factor.free_symbols().iter().any(|s| s == rsym) {
                    let g = c.compile_expr(&factor)?;
                    if g.is_zero() {
                        return Err(CliError::Eval("zero factor".into()));
                    }
                    let shifted = g.subst_var(rvar, &rplus);
                    shifted.div(&g).map_err(CliError::Core)?
                } else {
                    Elem::one()
                }
            }
        };
        if part.is_zero() {
            return Err(CliError::Unsupported("vanishing shift quotient".into()));
        }
        ratio = ratio.mul(&part.pow_i64(exp).map_err(CliError::Core)?);
    }
    Ok(ratio)
}

/// Verify a telescoped identity piecewise; shared by the drivers.
pub fn values_of_summand(
    comp: &Compiled,
    from: i64,
    to: i64,
    params: &Env,
) -> Result<Vec<Q>, CliError> {
    let mut env = params.clone();
    let mut out = Vec::new();
    for n in from..=to {
        env.insert(comp.index.clone(), Q::from_integer(n.into()));
        out.push(eval_q(&comp.summand, &env)?);
    }
    Ok(out)
}

/// Harmonic evaluated through `eval` (re-exported convenience used by the
/// verification paths).
pub fn harmonic_value(n: i64) -> Result<Q, CliError> {
    harmonic_q(n)
}

/// Integer power on rationals for the drivers.
pub fn q_pow(base: &Q, n: i64) -> Q {
    pow_q(base, n)
}

/// Sign normalization helper: true when the rational is negative.
pub fn q_is_negative(q: &Q) -> bool {
    q.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse;

    #[test]
    fn factorial_harmonic_square() {
        // (k^2+1) k! H(k)^2 -> Q(k)(p)(h) with element (k^2+1) p h^2
        let e = parse("(k^2+1)*k!*H(k)^2").unwrap();
        let comp = compile_summand(&e, "k", &Config::default()).unwrap();
        assert_eq!(comp.tower.height(), 3);
        let k = comp.tower.gen_elem(1);
        let p = comp.tower.gen_elem(2);
        let h = comp.tower.gen_elem(3);
        let want = k.mul(&k).add(&Elem::one()).mul(&p).mul(&h).mul(&h);
        assert_eq!(comp.elem, want);
        // sigma(p) = (k+1) p
        assert_eq!(comp.tower.gen(2).alpha, k.add(&Elem::one()));
    }

    #[test]
    fn binomial_cube_with_sign() {
        // (-1)^k Binomial(2r, k)^3 H(k): sigma(p) = -(2r-k)^3/(k+1)^3 p
        let e = parse("(-1)^k*Binomial(2*r,k)^3*H(k)").unwrap();
        let comp = compile_summand(&e, "k", &Config::default()).unwrap();
        assert_eq!(comp.tower.params(), &["r".to_string()]);
        assert_eq!(comp.tower.height(), 3);
        let r = Elem::var(0);
        let k = comp.tower.gen_elem(1);
        let two_r_minus_k = r.mul(&Elem::from_i64(2)).sub(&k);
        let k1 = k.add(&Elem::one());
        let want_alpha = two_r_minus_k
            .pow_i64(3)
            .unwrap()
            .div(&k1.pow_i64(3).unwrap())
            .unwrap()
            .neg();
        assert_eq!(comp.tower.gen(2).alpha, want_alpha);
        let p = comp.tower.gen_elem(2);
        let h = comp.tower.gen_elem(3);
        assert_eq!(comp.elem, p.mul(&h));
    }

    #[test]
    fn harmonic_alone_and_dedupe() {
        let e = parse("H(k)").unwrap();
        let comp = compile_summand(&e, "k", &Config::default()).unwrap();
        assert_eq!(comp.tower.height(), 2);
        assert_eq!(comp.elem, comp.tower.gen_elem(2));
        // H(k)*H(k) reuses one generator
        let e = parse("H(k)*H(k)").unwrap();
        let comp = compile_summand(&e, "k", &Config::default()).unwrap();
        assert_eq!(comp.tower.height(), 2);
        let h = comp.tower.gen_elem(2);
        assert_eq!(comp.elem, h.mul(&h));
    }

    #[test]
    fn nested_sum_telescopes_to_existing_generator() {
        // Sum(i,1,k,1/i) is H(k) again: the increment telescopes once h exists
        let e = parse("H(k) + Sum(i,1,k,1/i)").unwrap();
        let comp = compile_summand(&e, "k", &Config::default()).unwrap();
        assert_eq!(comp.tower.height(), 2, "no second generator for the same sum");
        let h = comp.tower.gen_elem(2);
        assert_eq!(comp.elem, h.mul(&Elem::from_i64(2)));
    }

    #[test]
    fn compile_round_trip_evaluation() {
        let cases = [
            "(k^2+1)*k!*H(k)^2",
            "Binomial(2*k, k)/(k+1)",
            "2^k*k! - H(k)",
            "Sum(i,1,k,i!*i) + k",
            "Pochhammer(3, k)*(1-2*k)",
        ];
        for src in cases {
            let e = parse(src).unwrap();
            let comp = compile_summand(&e, "k", &Config::default()).unwrap();
            let env = Env::new();
            for k in 1..=20 {
                let direct = eval_q(&e, &{
                    let mut env = env.clone();
                    env.insert("k".into(), Q::from_integer(k.into()));
                    env
                })
                .unwrap();
                let via_elem = eval_elem_q(&comp, &comp.elem, k, &env).unwrap();
                assert_eq!(direct, via_elem, "mismatch for {src} at k={k}");
            }
        }
    }

    #[test]
    fn r_quotient_of_binomial_cube() {
        let e = parse("(-1)^k*Binomial(2*r,k)^3*H(k)").unwrap();
        let cfg = Config::default();
        let comp = compile_summand(&e, "k", &cfg).unwrap();
        let q = r_shift_quotient(&comp, "r", &cfg).unwrap();
        // (2r+1)^3 (2r+2)^3 / ((2r-k+1)^3 (2r-k+2)^3)
        let r = Elem::var(0);
        let k = comp.tower.gen_elem(1);
        let t1 = r.mul(&Elem::from_i64(2)).add(&Elem::one());
        let t2 = r.mul(&Elem::from_i64(2)).add(&Elem::from_i64(2));
        let b1 = t1.sub(&k);
        let b2 = t2.sub(&k);
        let want = t1
            .mul(&t2)
            .pow_i64(3)
            .unwrap()
            .div(&b1.mul(&b2).pow_i64(3).unwrap())
            .unwrap();
        assert_eq!(q, want);
    }
}
