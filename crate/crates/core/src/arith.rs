//! Exact arithmetic for recursive rational-function towers.
//!
//! An [`Elem`] is an element of Q(v_0)(v_1)...(v_{m-1}) stored as a nested
//! fraction: at its top variable it is num/den with both sides dense
//! polynomials whose coefficients are elements over the variables below.
//! Variables are plain indices; what they *mean* (constant-field parameter
//! vs. tower generator) is the tower's business, not arithmetic's.
//!
//! Canonical form, maintained by every constructor:
//! - zero is always the rational 0 (never a fraction node),
//! - den is monic and coprime to num,
//! - a fraction node genuinely involves its variable (degree >= 1 somewhere),
//! - coefficients are canonical recursively.
//!
//! Canonical form makes structural equality a zero test, which the solvers
//! use everywhere.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Render a rational as `a` or `a/b` in lowest terms.
pub fn q_to_string(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
enum Node {
    Rat(Q),
    /// num/den as dense polynomials in `var`, coefficients strictly below.
    RatFun { var: u32, num: Vec<Elem>, den: Vec<Elem> },
}

/// An element of the nested rational-function field. Immutable; clones are
/// cheap (shared `Arc`), so concurrent readers are safe.
#[derive(Clone, PartialEq, Eq)]
pub struct Elem(Arc<Node>);

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render_raw())
    }
}

// ---- constructors ----

impl Elem {
    pub fn zero() -> Elem {
        Elem(Arc::new(Node::Rat(Q::zero())))
    }

    pub fn one() -> Elem {
        Elem(Arc::new(Node::Rat(Q::one())))
    }

    pub fn from_q(q: Q) -> Elem {
        Elem(Arc::new(Node::Rat(q)))
    }

    pub fn from_i64(n: i64) -> Elem {
        Elem::from_q(q_int(n))
    }

    /// The variable `v` itself.
    pub fn var(v: u32) -> Elem {
        Elem::from_poly(v, vec![Elem::zero(), Elem::one()])
    }

    /// Polynomial in `var` with the given coefficients (lowest degree first).
    /// Coefficients must live strictly below `var`.
    pub fn from_poly(var: u32, coeffs: Vec<Elem>) -> Elem {
        Elem::ratfun(var, coeffs, vec![Elem::one()])
    }

    /// num/den at `var`, canonicalized. Panics if den is the zero polynomial.
    pub fn ratfun(var: u32, num: Vec<Elem>, den: Vec<Elem>) -> Elem {
        let mut num = ptrim(num);
        let mut den = ptrim(den);
        assert!(!den.is_empty(), "ratfun: zero denominator");
        if num.is_empty() {
            return Elem::zero();
        }
        debug_assert!(num.iter().chain(den.iter()).all(|c| c.top_var().map_or(true, |w| w < var)));
        if den.len() > 1 || num.len() > 1 {
            let g = pgcd(&num, &den);
            if pdeg(&g) > 0 {
                num = pdiv_exact(&num, &g);
                den = pdiv_exact(&den, &g);
            }
        }
        // monic denominator
        let lc = den.last().unwrap().clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero leading coefficient");
            num = pscale(&num, &inv);
            den = pscale(&den, &inv);
        }
        if num.len() == 1 && den.len() == 1 {
            return num.into_iter().next().unwrap();
        }
        Elem(Arc::new(Node::RatFun { var, num, den }))
    }
}

// ---- basic queries ----

impl Elem {
    pub fn is_zero(&self) -> bool {
        matches!(&*self.0, Node::Rat(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&*self.0, Node::Rat(q) if q.is_one())
    }

    /// Highest variable occurring, or `None` for a rational constant.
    pub fn top_var(&self) -> Option<u32> {
        match &*self.0 {
            Node::Rat(_) => None,
            Node::RatFun { var, .. } => Some(*var),
        }
    }

    pub fn as_q(&self) -> Option<&Q> {
        match &*self.0 {
            Node::Rat(q) => Some(q),
            _ => None,
        }
    }

    /// True if no variable >= `v0` occurs anywhere (including denominators).
    pub fn is_below(&self, v0: u32) -> bool {
        self.top_var().map_or(true, |v| v < v0)
    }

    /// View as a fraction of polynomials in `var`. Requires `top_var <= var`.
    pub fn num_den_at(&self, var: u32) -> (Vec<Elem>, Vec<Elem>) {
        match &*self.0 {
            Node::RatFun { var: v, num, den } if *v == var => (num.clone(), den.clone()),
            _ => {
                assert!(self.is_below(var), "num_den_at: element above requested variable");
                (vec![self.clone()], vec![Elem::one()])
            }
        }
    }

    /// True if the element is a polynomial in `var` (denominator free of it).
    pub fn is_poly_at(&self, var: u32) -> bool {
        match &*self.0 {
            Node::RatFun { var: v, den, .. } if *v == var => den.len() == 1,
            _ => self.is_below(var),
        }
    }

    /// Coefficient list in `var`, lowest degree first. Errors if the
    /// denominator involves `var`.
    pub fn poly_coeffs_at(&self, var: u32) -> Result<Vec<Elem>> {
        match &*self.0 {
            Node::RatFun { var: v, num, den } if *v == var => {
                if den.len() == 1 {
                    Ok(num.clone())
                } else {
                    Err(Error::NotPolynomial { level: var as usize, what: self.render_raw() })
                }
            }
            _ if self.is_below(var) => {
                if self.is_zero() {
                    Ok(vec![])
                } else {
                    Ok(vec![self.clone()])
                }
            }
            _ => Err(Error::NotPolynomial { level: var as usize, what: self.render_raw() }),
        }
    }

    /// Degree in `var`; deg(0) = -1 by convention.
    pub fn deg_at(&self, var: u32) -> Result<i64> {
        Ok(self.poly_coeffs_at(var)?.len() as i64 - 1)
    }

    /// coeff(f, i) with respect to `var`.
    pub fn coeff_at(&self, var: u32, i: usize) -> Result<Elem> {
        let cs = self.poly_coeffs_at(var)?;
        Ok(cs.get(i).cloned().unwrap_or_else(Elem::zero))
    }

    /// `var`-adic valuation: val(num) - val(den). `None` for zero.
    pub fn val_at(&self, var: u32) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        let (num, den) = self.num_den_at(var);
        Some(pval(&num) as i64 - pval(&den) as i64)
    }

    /// Split f = r + p at `var` with r a proper fraction (deg num < deg den)
    /// and p a polynomial in `var`.
    pub fn split_fraction_at(&self, var: u32) -> (Elem, Elem) {
        let (num, den) = self.num_den_at(var);
        if den.len() == 1 {
            return (Elem::zero(), self.clone());
        }
        let (q, r) = pdivrem(&num, &den);
        (Elem::ratfun(var, r, den), Elem::from_poly(var, q))
    }

    /// True if the element is polynomial in every variable >= `v0`
    /// (denominators may involve only variables < `v0`).
    pub fn is_poly_in_vars_ge(&self, v0: u32) -> bool {
        match &*self.0 {
            Node::Rat(_) => true,
            Node::RatFun { var, num, den } => {
                if *var < v0 {
                    true
                } else {
                    den.len() == 1 && num.iter().all(|c| c.is_poly_in_vars_ge(v0))
                }
            }
        }
    }
}

// ---- field operations ----

impl Elem {
    pub fn neg(&self) -> Elem {
        match &*self.0 {
            Node::Rat(q) => Elem::from_q(-q.clone()),
            Node::RatFun { var, num, den } => {
                Elem(Arc::new(Node::RatFun { var: *var, num: pneg(num), den: den.clone() }))
            }
        }
    }

    pub fn add(&self, other: &Elem) -> Elem {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        match (&*self.0, &*other.0) {
            (Node::Rat(a), Node::Rat(b)) => Elem::from_q(a + b),
            _ => {
                let v = self.top_var().unwrap_or(0).max(other.top_var().unwrap_or(0));
                let (an, ad) = self.num_den_at(v);
                let (bn, bd) = other.num_den_at(v);
                let num = padd(&pmul(&an, &bd), &pmul(&bn, &ad));
                let den = pmul(&ad, &bd);
                Elem::ratfun(v, num, den)
            }
        }
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Elem) -> Elem {
        if self.is_zero() || other.is_zero() {
            return Elem::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        match (&*self.0, &*other.0) {
            (Node::Rat(a), Node::Rat(b)) => Elem::from_q(a * b),
            _ => {
                let v = self.top_var().unwrap_or(0).max(other.top_var().unwrap_or(0));
                let (an, ad) = self.num_den_at(v);
                let (bn, bd) = other.num_den_at(v);
                // cross-cancel before multiplying
                let g1 = pgcd(&an, &bd);
                let g2 = pgcd(&bn, &ad);
                let an = if pdeg(&g1) > 0 { pdiv_exact(&an, &g1) } else { an };
                let bd = if pdeg(&g1) > 0 { pdiv_exact(&bd, &g1) } else { bd };
                let bn = if pdeg(&g2) > 0 { pdiv_exact(&bn, &g2) } else { bn };
                let ad = if pdeg(&g2) > 0 { pdiv_exact(&ad, &g2) } else { ad };
                Elem::ratfun(v, pmul(&an, &bn), pmul(&ad, &bd))
            }
        }
    }

    pub fn inv(&self) -> Result<Elem> {
        match &*self.0 {
            Node::Rat(q) => {
                if q.is_zero() {
                    Err(Error::DivisionByZero)
                } else {
                    Ok(Elem::from_q(q.recip()))
                }
            }
            Node::RatFun { var, num, den } => Ok(Elem::ratfun(*var, den.clone(), num.clone())),
        }
    }

    pub fn div(&self, other: &Elem) -> Result<Elem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow_i64(&self, n: i64) -> Result<Elem> {
        if n == 0 {
            return Ok(Elem::one());
        }
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = Elem::one();
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        Ok(acc)
    }

    /// Substitute `repl` for variable `v` everywhere (used by sigma and the
    /// tower isomorphisms).
    pub fn subst_var(&self, v: u32, repl: &Elem) -> Elem {
        match &*self.0 {
            Node::Rat(_) => self.clone(),
            Node::RatFun { var, num, den } => {
                if *var < v {
                    return self.clone();
                }
                let num2: Vec<Elem> = num.iter().map(|c| c.subst_var(v, repl)).collect();
                let den2: Vec<Elem> = den.iter().map(|c| c.subst_var(v, repl)).collect();
                if *var == v {
                    let n = peval_at(&num2, repl);
                    let d = peval_at(&den2, repl);
                    n.div(&d).expect("substitution hit a zero denominator")
                } else {
                    // rebuild: the substitution may have raised coefficient levels
                    let t = Elem::var(*var);
                    let n = peval_at(&num2, &t);
                    let d = peval_at(&den2, &t);
                    n.div(&d).expect("nonzero denominator")
                }
            }
        }
    }
}

/// Simultaneous substitution: variable i is replaced by images[i] where
/// present. Unlike chained `subst_var` calls, images are never re-visited.
pub fn subst_many(e: &Elem, images: &[Option<Elem>]) -> Elem {
    match e.top_var() {
        None => e.clone(),
        Some(v) => {
            let (num, den) = e.num_den_at(v);
            let n: Vec<Elem> = num.iter().map(|c| subst_many(c, images)).collect();
            let d: Vec<Elem> = den.iter().map(|c| subst_many(c, images)).collect();
            let x = match images.get(v as usize).and_then(|i| i.as_ref()) {
                Some(img) => img.clone(),
                None => Elem::var(v),
            };
            peval_at(&n, &x).div(&peval_at(&d, &x)).expect("substitution hit a zero denominator")
        }
    }
}

impl std::ops::Add for &Elem {
    type Output = Elem;
    fn add(self, rhs: &Elem) -> Elem {
        Elem::add(self, rhs)
    }
}
impl std::ops::Sub for &Elem {
    type Output = Elem;
    fn sub(self, rhs: &Elem) -> Elem {
        Elem::sub(self, rhs)
    }
}
impl std::ops::Mul for &Elem {
    type Output = Elem;
    fn mul(self, rhs: &Elem) -> Elem {
        Elem::mul(self, rhs)
    }
}
impl std::ops::Neg for &Elem {
    type Output = Elem;
    fn neg(self) -> Elem {
        Elem::neg(self)
    }
}

// ---- dense polynomial helpers (coefficients are Elems below the variable) ----

pub fn ptrim(mut v: Vec<Elem>) -> Vec<Elem> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// deg; -1 for the zero polynomial.
pub fn pdeg(p: &[Elem]) -> i64 {
    p.len() as i64 - 1
}

fn pval(p: &[Elem]) -> usize {
    p.iter().position(|c| !c.is_zero()).unwrap_or(0)
}

pub fn padd(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(Elem::zero);
        let y = b.get(i).cloned().unwrap_or_else(Elem::zero);
        out.push(x.add(&y));
    }
    ptrim(out)
}

pub fn pneg(a: &[Elem]) -> Vec<Elem> {
    a.iter().map(|c| c.neg()).collect()
}

pub fn psub(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    padd(a, &pneg(b))
}

pub fn pmul(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Elem::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    ptrim(out)
}

pub fn pscale(a: &[Elem], s: &Elem) -> Vec<Elem> {
    ptrim(a.iter().map(|c| c.mul(s)).collect())
}

/// Exact polynomial division with remainder over the coefficient field.
/// Returns (quotient, remainder) with deg(rem) < deg(divisor).
pub fn pdivrem(a: &[Elem], b: &[Elem]) -> (Vec<Elem>, Vec<Elem>) {
    let b = ptrim(b.to_vec());
    assert!(!b.is_empty(), "pdivrem: division by the zero polynomial");
    let mut rem = ptrim(a.to_vec());
    if rem.len() < b.len() {
        return (vec![], rem);
    }
    let lcinv = b.last().unwrap().inv().expect("nonzero leading coefficient");
    let mut quot = vec![Elem::zero(); rem.len() - b.len() + 1];
    while rem.len() >= b.len() && !rem.is_empty() {
        let k = rem.len() - b.len();
        let c = rem.last().unwrap().mul(&lcinv);
        quot[k] = c.clone();
        for (i, bc) in b.iter().enumerate() {
            let t = rem[k + i].sub(&c.mul(bc));
            rem[k + i] = t;
        }
        rem = ptrim(rem);
    }
    (ptrim(quot), rem)
}

/// Quotient of an exact division; debug-asserts the remainder vanishes.
pub fn pdiv_exact(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    let (q, r) = pdivrem(a, b);
    debug_assert!(r.is_empty(), "pdiv_exact: nonzero remainder");
    q
}

pub fn pmonic(a: &[Elem]) -> Vec<Elem> {
    let a = ptrim(a.to_vec());
    match a.last() {
        None => a,
        Some(lc) if lc.is_one() => a,
        Some(lc) => {
            let inv = lc.inv().expect("nonzero leading coefficient");
            pscale(&a, &inv)
        }
    }
}

/// Monic gcd over the coefficient field (Euclid). gcd(0,0) = 0.
pub fn pgcd(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    // units short-circuit the whole Euclid loop
    if (a.len() == 1 && !a[0].is_zero()) || (b.len() == 1 && !b[0].is_zero()) {
        return vec![Elem::one()];
    }
    let mut a = pmonic(a);
    let mut b = pmonic(b);
    while !b.is_empty() {
        if b.len() == 1 {
            return vec![Elem::one()];
        }
        let r = pdivrem(&a, &b).1;
        a = b;
        b = pmonic(&r);
    }
    a
}

pub fn plcm(a: &[Elem], b: &[Elem]) -> Vec<Elem> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let g = pgcd(a, b);
    pmonic(&pmul(a, &pdiv_exact(b, &g)))
}

/// Horner evaluation with an Elem argument.
pub fn peval_at(p: &[Elem], x: &Elem) -> Elem {
    let mut acc = Elem::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

// ---- clearing denominators / flattening over the constant field ----

/// Write `e` as num/den with both sides polynomial in every variable >= v0.
/// The pair is not reduced; it is only used to clear denominators.
pub fn separate(e: &Elem, v0: u32) -> (Elem, Elem) {
    match &*e.0 {
        Node::Rat(_) => (e.clone(), Elem::one()),
        Node::RatFun { var, num, den } => {
            if *var < v0 {
                return (e.clone(), Elem::one());
            }
            let t = Elem::var(*var);
            let sep = |p: &[Elem]| -> (Elem, Elem) {
                // common denominator across the coefficients
                let parts: Vec<(Elem, Elem)> = p.iter().map(|c| separate(c, v0)).collect();
                let mut common = Elem::one();
                for (_, d) in &parts {
                    common = common.mul(d);
                }
                let mut acc = Elem::zero();
                let mut pw = Elem::one();
                for (n, d) in &parts {
                    let scale = common.div(d).expect("denominator product");
                    acc = acc.add(&n.mul(&scale).mul(&pw));
                    pw = pw.mul(&t);
                }
                (acc, common)
            };
            let (nn, nd) = sep(num);
            let (dn, dd) = sep(den);
            (nn.mul(&dd), dn.mul(&nd))
        }
    }
}

/// Product of a vector's separated denominators, so that multiplying every
/// entry by it makes them polynomial in all variables >= v0.
pub fn common_poly_multiplier(es: &[Elem], v0: u32) -> Elem {
    let mut m = Elem::one();
    for e in es {
        let (_, d) = separate(&e.mul(&m), v0);
        m = m.mul(&d);
    }
    m
}

/// Coefficients of the monomials in variables >= v0. Requires the element to
/// be polynomial in those variables; coefficients live below v0.
pub fn gen_monomials(e: &Elem, v0: u32) -> Result<BTreeMap<Vec<u32>, Elem>> {
    let mut out = BTreeMap::new();
    collect_monomials(e, v0, &mut vec![], &mut out)?;
    Ok(out)
}

fn collect_monomials(
    e: &Elem,
    v0: u32,
    exps: &mut Vec<u32>,
    out: &mut BTreeMap<Vec<u32>, Elem>,
) -> Result<()> {
    match &*e.0 {
        Node::RatFun { var, num, den } if *var >= v0 => {
            if den.len() != 1 {
                return Err(Error::NotPolynomial { level: *var as usize, what: e.render_raw() });
            }
            for (i, c) in num.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                // key only the positive powers so that the constant part of
                // a polynomial and a plain constant share a monomial
                if i > 0 {
                    exps.push(*var - v0);
                    exps.push(i as u32);
                }
                collect_monomials(c, v0, exps, out)?;
                if i > 0 {
                    exps.pop();
                    exps.pop();
                }
            }
            Ok(())
        }
        _ => {
            if !e.is_zero() {
                let key = exps.clone();
                let entry = out.entry(key).or_insert_with(Elem::zero);
                *entry = entry.add(e);
            }
            Ok(())
        }
    }
}

// ---- rendering ----

impl Elem {
    /// Render with `v{i}` variable names (debugging).
    pub fn render_raw(&self) -> String {
        let maxv = self.top_var().map_or(0, |v| v as usize + 1);
        let names: Vec<String> = (0..maxv).map(|i| format!("v{i}")).collect();
        self.render(&names)
    }

    /// Canonical fully parenthesized text form. `names[i]` is the display
    /// name of variable i.
    pub fn render(&self, names: &[String]) -> String {
        match &*self.0 {
            Node::Rat(q) => {
                if q.is_negative() {
                    format!("-{}", q_to_string(&q.abs()))
                } else {
                    q_to_string(q)
                }
            }
            Node::RatFun { var, num, den } => {
                let n = render_poly(num, *var, names);
                if den.len() == 1 {
                    n
                } else {
                    format!("({})/({})", n, render_poly(den, *var, names))
                }
            }
        }
    }

    fn is_atom_text(&self) -> bool {
        match &*self.0 {
            Node::Rat(q) => !q.is_negative() && q.denom().is_one(),
            Node::RatFun { .. } => false,
        }
    }
}

fn render_poly(p: &[Elem], var: u32, names: &[String]) -> String {
    let name = names
        .get(var as usize)
        .cloned()
        .unwrap_or_else(|| format!("v{var}"));
    let mut parts: Vec<String> = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let pow = match i {
            0 => String::new(),
            1 => name.clone(),
            _ => format!("{name}^{i}"),
        };
        let s = if pow.is_empty() {
            let inner = c.render(names);
            if c.is_atom_text() {
                inner
            } else {
                format!("({inner})")
            }
        } else if c.is_one() {
            pow
        } else {
            let inner = c.render(names);
            if c.is_atom_text() {
                format!("{inner}*{pow}")
            } else {
                format!("({inner})*{pow}")
            }
        };
        parts.push(s);
    }
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

/// Deterministic ordering for test output stability: compare rendered forms.
impl PartialOrd for Elem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Elem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.render_raw().cmp(&other.render_raw())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Elem {
        Elem::var(0)
    }

    #[test]
    fn div_identity_and_content() {
        let k1 = x().add(&Elem::one()); // k+1
        assert!(k1.div(&k1).unwrap().is_one());
        // (2k+2)/2 -> k+1
        let two = Elem::from_i64(2);
        let e = k1.mul(&two).div(&two).unwrap();
        assert_eq!(e, k1);
    }

    #[test]
    fn gcd_and_deg_conventions() {
        // gcd(k^2-1, k-1) = k-1
        let k = x();
        let k2m1 = k.mul(&k).sub(&Elem::one());
        let km1 = k.sub(&Elem::one());
        let g = pgcd(
            &k2m1.poly_coeffs_at(0).unwrap(),
            &km1.poly_coeffs_at(0).unwrap(),
        );
        assert_eq!(Elem::from_poly(0, g), km1);
        assert_eq!(Elem::zero().deg_at(0).unwrap(), -1);
        assert_eq!(Elem::zero().poly_coeffs_at(0).unwrap().len(), 0);
    }

    #[test]
    fn split_polynomial_division() {
        // (k^2+1)/k -> (1/k, k)
        let k = x();
        let f = k.mul(&k).add(&Elem::one()).div(&k).unwrap();
        let (r, p) = f.split_fraction_at(0);
        assert_eq!(p, k);
        assert_eq!(r, Elem::one().div(&k).unwrap());
        assert_eq!(r.add(&p), f);
        // polynomial input stays put
        let g = k.mul(&k);
        let (r2, p2) = g.split_fraction_at(0);
        assert!(r2.is_zero());
        assert_eq!(p2, g);
    }

    #[test]
    fn nested_fraction_canonical() {
        // build (k+1)*h / (k+1) at a second level and watch it collapse
        let k = Elem::var(0);
        let h = Elem::var(1);
        let k1 = k.add(&Elem::one());
        let e = k1.mul(&h).div(&k1).unwrap();
        assert_eq!(e, h);
        let z = e.sub(&h);
        assert!(z.is_zero());
    }

    #[test]
    fn valuation() {
        let k = x();
        let e = Elem::one().div(&k.mul(&k)).unwrap(); // k^-2
        assert_eq!(e.val_at(0), Some(-2));
        assert_eq!(k.val_at(0), Some(1));
        assert_eq!(Elem::one().val_at(0), Some(0));
        assert_eq!(Elem::zero().val_at(0), None);
    }
}
