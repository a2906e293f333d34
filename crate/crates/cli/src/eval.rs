//! Exact evaluation of summand expressions: plain rational values, and a
//! symbolic variant that keeps constant-field parameters as indeterminates
//! (used to pin boundary constants like F(delta) - G(delta) with a free r).

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use pisigma_core::arith::Elem;

use crate::expr::Expr;
use crate::{CliError, Q};

pub type Env = HashMap<String, Q>;

fn q_to_i64(q: &Q) -> Result<i64, CliError> {
    if !q.is_integer() {
        return Err(CliError::Eval(format!("expected an integer, got {q}")));
    }
    i64::try_from(q.numer()).map_err(|_| CliError::Eval("integer out of range".into()))
}

pub fn factorial_q(n: i64) -> Result<Q, CliError> {
    if n < 0 {
        return Err(CliError::Eval(format!("factorial of a negative integer {n}")));
    }
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    Ok(Q::from_integer(acc))
}

pub fn harmonic_q(n: i64) -> Result<Q, CliError> {
    if n < 0 {
        return Err(CliError::Eval(format!("harmonic number of a negative index {n}")));
    }
    let mut acc = Q::zero();
    for i in 1..=n {
        acc += Q::new(BigInt::one(), BigInt::from(i));
    }
    Ok(acc)
}

/// Generalized binomial C(u, v) for integer v: 0 when v < 0, otherwise the
/// falling-factorial product (u may be any rational).
pub fn binomial_q(u: &Q, v: i64) -> Q {
    if v < 0 {
        return Q::zero();
    }
    let mut acc = Q::one();
    for j in 0..v {
        acc = acc * (u - Q::from_integer(BigInt::from(j))) / Q::from_integer(BigInt::from(j + 1));
    }
    acc
}

/// Evaluate to an exact rational in the given environment.
pub fn eval_q(e: &Expr, env: &Env) -> Result<Q, CliError> {
    match e {
        Expr::Int(n) => Ok(Q::from_integer(n.clone())),
        Expr::Sym(s) => env
            .get(s)
            .cloned()
            .ok_or_else(|| CliError::Eval(format!("unbound symbol {s}"))),
        Expr::Add(a, b) => Ok(eval_q(a, env)? + eval_q(b, env)?),
        Expr::Sub(a, b) => Ok(eval_q(a, env)? - eval_q(b, env)?),
        Expr::Mul(a, b) => Ok(eval_q(a, env)? * eval_q(b, env)?),
        Expr::Div(a, b) => {
            let d = eval_q(b, env)?;
            if d.is_zero() {
                return Err(CliError::Eval("division by zero".into()));
            }
            Ok(eval_q(a, env)? / d)
        }
        Expr::Neg(a) => Ok(-eval_q(a, env)?),
        Expr::Pow(a, n) => {
            let base = eval_q(a, env)?;
            let n = q_to_i64(&eval_q(n, env)?)?;
            if n < 0 && base.is_zero() {
                return Err(CliError::Eval("zero to a negative power".into()));
            }
            Ok(pow_q(&base, n))
        }
        Expr::Factorial(a) => factorial_q(q_to_i64(&eval_q(a, env)?)?),
        Expr::Harmonic(a) => harmonic_q(q_to_i64(&eval_q(a, env)?)?),
        Expr::Binomial(a, b) => {
            let u = eval_q(a, env)?;
            let v = q_to_i64(&eval_q(b, env)?)?;
            Ok(binomial_q(&u, v))
        }
        Expr::Pochhammer(a, b) => {
            let base = eval_q(a, env)?;
            let n = q_to_i64(&eval_q(b, env)?)?;
            if n < 0 {
                return Err(CliError::Eval("Pochhammer with a negative length".into()));
            }
            let mut acc = Q::one();
            for j in 0..n {
                acc *= &base + Q::from_integer(BigInt::from(j));
            }
            Ok(acc)
        }
        Expr::Sum { idx, lo, hi, body } => {
            let lo = q_to_i64(&eval_q(lo, env)?)?;
            let hi = q_to_i64(&eval_q(hi, env)?)?;
            let mut acc = Q::zero();
            let mut inner = env.clone();
            for i in lo..=hi {
                inner.insert(idx.clone(), Q::from_integer(BigInt::from(i)));
                acc += eval_q(body, &inner)?;
            }
            Ok(acc)
        }
        Expr::Product { idx, lo, hi, body } => {
            let lo = q_to_i64(&eval_q(lo, env)?)?;
            let hi = q_to_i64(&eval_q(hi, env)?)?;
            let mut acc = Q::one();
            let mut inner = env.clone();
            for i in lo..=hi {
                inner.insert(idx.clone(), Q::from_integer(BigInt::from(i)));
                acc *= eval_q(body, &inner)?;
            }
            Ok(acc)
        }
    }
}

pub fn pow_q(base: &Q, n: i64) -> Q {
    if n == 0 {
        return Q::one();
    }
    let b = if n < 0 { base.recip() } else { base.clone() };
    let mut acc = Q::one();
    let mut e = n.unsigned_abs();
    let mut p = b;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &p;
        }
        e >>= 1;
        if e > 0 {
            p = &p * &p;
        }
    }
    acc
}

/// Exact values of a sequence expression over an integer range of `var`.
pub fn evaluate_sequence(
    e: &Expr,
    var: &str,
    from: i64,
    to: i64,
    params: &Env,
) -> Result<Vec<Q>, CliError> {
    let mut env = params.clone();
    let mut out = Vec::new();
    for n in from..=to {
        env.insert(var.to_string(), Q::from_integer(BigInt::from(n)));
        out.push(eval_q(e, &env)?);
    }
    Ok(out)
}

/// Evaluate with some symbols bound to integers and the rest kept as
/// constant-field indeterminates (tower parameter variables). Integer-only
/// atoms (factorials, harmonic numbers, bounds) must come out numeric.
pub fn eval_symbolic(
    e: &Expr,
    int_env: &HashMap<String, i64>,
    param_vars: &HashMap<String, u32>,
) -> Result<Elem, CliError> {
    let as_int = |x: &Elem| -> Result<i64, CliError> {
        match x.as_q() {
            Some(q) if q.is_integer() => {
                i64::try_from(q.numer()).map_err(|_| CliError::Eval("integer out of range".into()))
            }
            _ => Err(CliError::Eval("expected an integer-valued argument".into())),
        }
    };
    match e {
        Expr::Int(n) => Ok(Elem::from_q(Q::from_integer(n.clone()))),
        Expr::Sym(s) => {
            if let Some(n) = int_env.get(s) {
                return Ok(Elem::from_i64(*n));
            }
            param_vars
                .get(s)
                .map(|v| Elem::var(*v))
                .ok_or_else(|| CliError::Eval(format!("unbound symbol {s}")))
        }
        Expr::Add(a, b) => {
            Ok(eval_symbolic(a, int_env, param_vars)?.add(&eval_symbolic(b, int_env, param_vars)?))
        }
        Expr::Sub(a, b) => {
            Ok(eval_symbolic(a, int_env, param_vars)?.sub(&eval_symbolic(b, int_env, param_vars)?))
        }
        Expr::Mul(a, b) => {
            Ok(eval_symbolic(a, int_env, param_vars)?.mul(&eval_symbolic(b, int_env, param_vars)?))
        }
        Expr::Div(a, b) => {
            let d = eval_symbolic(b, int_env, param_vars)?;
            if d.is_zero() {
                return Err(CliError::Eval("division by zero".into()));
            }
            Ok(eval_symbolic(a, int_env, param_vars)?.div(&d)?)
        }
        Expr::Neg(a) => Ok(eval_symbolic(a, int_env, param_vars)?.neg()),
        Expr::Pow(a, n) => {
            let base = eval_symbolic(a, int_env, param_vars)?;
            let n = as_int(&eval_symbolic(n, int_env, param_vars)?)?;
            if n < 0 && base.is_zero() {
                return Err(CliError::Eval("zero to a negative power".into()));
            }
            Ok(base.pow_i64(n)?)
        }
        Expr::Factorial(a) => {
            let n = as_int(&eval_symbolic(a, int_env, param_vars)?)?;
            Ok(Elem::from_q(factorial_q(n)?))
        }
        Expr::Harmonic(a) => {
            let n = as_int(&eval_symbolic(a, int_env, param_vars)?)?;
            Ok(Elem::from_q(harmonic_q(n)?))
        }
        Expr::Binomial(a, b) => {
            let u = eval_symbolic(a, int_env, param_vars)?;
            let v = as_int(&eval_symbolic(b, int_env, param_vars)?)?;
            if v < 0 {
                return Ok(Elem::zero());
            }
            let mut acc = Elem::one();
            for j in 0..v {
                let num = u.sub(&Elem::from_i64(j));
                acc = acc.mul(&num).div(&Elem::from_i64(j + 1))?;
            }
            Ok(acc)
        }
        Expr::Pochhammer(a, b) => {
            let base = eval_symbolic(a, int_env, param_vars)?;
            let n = as_int(&eval_symbolic(b, int_env, param_vars)?)?;
            if n < 0 {
                return Err(CliError::Eval("Pochhammer with a negative length".into()));
            }
            let mut acc = Elem::one();
            for j in 0..n {
                acc = acc.mul(&base.add(&Elem::from_i64(j)));
            }
            Ok(acc)
        }
        Expr::Sum { idx, lo, hi, body } => {
            let lo = as_int(&eval_symbolic(lo, int_env, param_vars)?)?;
            let hi = as_int(&eval_symbolic(hi, int_env, param_vars)?)?;
            let mut acc = Elem::zero();
            let mut inner = int_env.clone();
            for i in lo..=hi {
                inner.insert(idx.clone(), i);
                acc = acc.add(&eval_symbolic(body, &inner, param_vars)?);
            }
            Ok(acc)
        }
        Expr::Product { idx, lo, hi, body } => {
            let lo = as_int(&eval_symbolic(lo, int_env, param_vars)?)?;
            let hi = as_int(&eval_symbolic(hi, int_env, param_vars)?)?;
            let mut acc = Elem::one();
            let mut inner = int_env.clone();
            for i in lo..=hi {
                inner.insert(idx.clone(), i);
                acc = acc.mul(&eval_symbolic(body, &inner, param_vars)?);
            }
            Ok(acc)
        }
    }
}
