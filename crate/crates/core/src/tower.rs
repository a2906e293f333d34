//! Towers of Pi/Sigma* extensions over a constant field Q(r_1,...,r_s).
//!
//! Variable layout: parameters of the constant field come first (sigma fixes
//! them), then one variable per generator. "Level" counts generators: level 0
//! is the constant field, level i is the field generated by the first i
//! generators. The shift automorphism acts by sigma(t) = alpha*t + beta with
//! alpha, beta from strictly below.

use std::fmt;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::arith::{peval_at, Elem};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum GenKind {
    /// sigma(t) = alpha * t, alpha != 0, 1 (product-like).
    Pi,
    /// sigma(t) = t + beta (sum-like).
    SigmaStar,
}

#[derive(Clone, Debug)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    pub alpha: Elem,
    pub beta: Elem,
}

#[derive(Clone, Debug)]
pub struct Tower {
    params: Vec<String>,
    gens: Vec<Generator>,
}

impl Tower {
    /// Constant field Q(params) with no generators yet.
    pub fn constant_field(params: &[&str]) -> Tower {
        Tower { params: params.iter().map(|s| s.to_string()).collect(), gens: Vec::new() }
    }

    /// Q(params)(x) with sigma(x) = x + 1.
    pub fn rational(params: &[&str]) -> Tower {
        let t = Tower::constant_field(params);
        t.extend("k", GenKind::SigmaStar, Elem::one(), Elem::one()).unwrap()
    }

    pub fn extend(&self, name: &str, kind: GenKind, alpha: Elem, beta: Elem) -> Result<Tower> {
        let var = self.nvars() as u32;
        let reason = |r: &str| Error::InvalidGenerator { name: name.to_string(), reason: r.into() };
        if self.names_iter().any(|n| n == name) {
            return Err(reason("name already used"));
        }
        if !alpha.is_below(var) || !beta.is_below(var) {
            return Err(reason("alpha/beta must live strictly below the new generator"));
        }
        match kind {
            GenKind::Pi => {
                if alpha.is_zero() || alpha.is_one() {
                    return Err(reason("Pi generator needs alpha not in {0, 1}"));
                }
                if !beta.is_zero() {
                    return Err(reason("Pi generator needs beta = 0"));
                }
            }
            GenKind::SigmaStar => {
                if !alpha.is_one() {
                    return Err(reason("Sigma* generator needs alpha = 1"));
                }
            }
        }
        if self.gens.is_empty() {
            // the base generator must be the rational x with sigma(x) = x + 1
            if kind != GenKind::SigmaStar || !beta.is_one() {
                return Err(reason("the first generator must be the rational one (sigma(x) = x+1)"));
            }
        }
        let mut gens = self.gens.clone();
        gens.push(Generator { name: name.to_string(), kind, alpha, beta });
        Ok(Tower { params: self.params.clone(), gens })
    }

    pub fn nparams(&self) -> usize {
        self.params.len()
    }

    pub fn height(&self) -> usize {
        self.gens.len()
    }

    pub fn nvars(&self) -> usize {
        self.params.len() + self.gens.len()
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    /// Generator of the given level (1-based).
    pub fn gen(&self, level: usize) -> &Generator {
        &self.gens[level - 1]
    }

    pub fn var_of_level(&self, level: usize) -> u32 {
        debug_assert!(level >= 1 && level <= self.height());
        (self.params.len() + level - 1) as u32
    }

    /// First generator variable; elements below it are constants.
    pub fn first_gen_var(&self) -> u32 {
        self.params.len() as u32
    }

    pub fn param_elem(&self, i: usize) -> Elem {
        Elem::var(i as u32)
    }

    pub fn gen_elem(&self, level: usize) -> Elem {
        Elem::var(self.var_of_level(level))
    }

    fn names_iter(&self) -> impl Iterator<Item = &str> {
        self.params.iter().map(|s| s.as_str()).chain(self.gens.iter().map(|g| g.name.as_str()))
    }

    pub fn var_names(&self) -> Vec<String> {
        self.names_iter().map(|s| s.to_string()).collect()
    }

    pub fn var_by_name(&self, name: &str) -> Option<u32> {
        self.names_iter().position(|n| n == name).map(|i| i as u32)
    }

    /// True for elements of the constant field.
    pub fn is_constant(&self, e: &Elem) -> bool {
        e.is_below(self.first_gen_var())
    }

    /// Smallest i with f in Q(params)(t_1)...(t_i); 0 for constants.
    pub fn split_level(&self, e: &Elem) -> usize {
        match e.top_var() {
            None => 0,
            Some(v) => {
                if (v as usize) < self.params.len() {
                    0
                } else {
                    v as usize - self.params.len() + 1
                }
            }
        }
    }

    /// Apply sigma^power (negative powers use the inverse automorphism).
    pub fn sigma_pow(&self, e: &Elem, power: i64) -> Elem {
        let mut out = e.clone();
        for _ in 0..power.unsigned_abs() {
            out = self.sigma_rec(&out, power < 0);
        }
        out
    }

    pub fn sigma(&self, e: &Elem) -> Elem {
        self.sigma_rec(e, false)
    }

    pub fn sigma_inv(&self, e: &Elem) -> Elem {
        self.sigma_rec(e, true)
    }

    fn sigma_rec(&self, e: &Elem, inverse: bool) -> Elem {
        match e.top_var() {
            None => e.clone(),
            Some(v) if (v as usize) < self.params.len() => e.clone(),
            Some(v) => {
                let g = &self.gens[v as usize - self.params.len()];
                let t = Elem::var(v);
                let t_image = if inverse {
                    let ia = self.sigma_rec(&g.alpha, true);
                    let ib = self.sigma_rec(&g.beta, true);
                    t.sub(&ib).div(&ia).expect("alpha is nonzero")
                } else {
                    g.alpha.mul(&t).add(&g.beta)
                };
                let (num, den) = e.num_den_at(v);
                let n: Vec<Elem> = num.iter().map(|c| self.sigma_rec(c, inverse)).collect();
                let d: Vec<Elem> = den.iter().map(|c| self.sigma_rec(c, inverse)).collect();
                peval_at(&n, &t_image)
                    .div(&peval_at(&d, &t_image))
                    .expect("automorphism image of a nonzero polynomial")
            }
        }
    }

    /// True iff every generator above `from_level` is Sigma* with beta
    /// polynomial in the generators above `from_level`.
    pub fn is_polynomial_sigma_tower(&self, from_level: usize) -> bool {
        if from_level >= self.height() {
            return true;
        }
        let v0 = self.var_of_level(from_level + 1);
        self.gens[from_level..].iter().all(|g| {
            g.kind == GenKind::SigmaStar && g.beta.is_poly_in_vars_ge(v0)
        })
    }

    /// True if `other` extends `self` by zero or more generators.
    pub fn is_prefix_of(&self, other: &Tower) -> bool {
        self.params == other.params
            && self.gens.len() <= other.gens.len()
            && self
                .gens
                .iter()
                .zip(&other.gens)
                .all(|(a, b)| a.name == b.name && a.kind == b.kind && a.alpha == b.alpha && a.beta == b.beta)
    }

    pub fn render_elem(&self, e: &Elem) -> String {
        e.render(&self.var_names())
    }

    /// Parse canonical element text (names, rationals, + - * / ^ and parens).
    pub fn parse_elem(&self, text: &str) -> Result<Elem> {
        parse_element(text, self)
    }

    // ---- JSON description ----

    pub fn to_json(&self) -> Value {
        json!({
            "params": self.params,
            "generators": self.gens.iter().map(|g| json!({
                "name": g.name,
                "kind": match g.kind { GenKind::Pi => "pi", GenKind::SigmaStar => "sigma*" },
                "alpha": self.render_elem(&g.alpha),
                "beta": self.render_elem(&g.beta),
            })).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Tower> {
        let bad = |m: &str| Error::Invalid(format!("tower json: {m}"));
        let params: Vec<&str> = v["params"]
            .as_array()
            .ok_or_else(|| bad("missing params"))?
            .iter()
            .map(|p| p.as_str().ok_or_else(|| bad("param must be a string")))
            .collect::<Result<_>>()?;
        let mut tower = Tower::constant_field(&params);
        for g in v["generators"].as_array().ok_or_else(|| bad("missing generators"))? {
            let name = g["name"].as_str().ok_or_else(|| bad("generator name"))?;
            let kind = match g["kind"].as_str().ok_or_else(|| bad("generator kind"))? {
                "pi" => GenKind::Pi,
                "sigma*" | "sigma" => GenKind::SigmaStar,
                other => return Err(bad(&format!("unknown kind {other:?}"))),
            };
            let alpha = tower.parse_elem(g["alpha"].as_str().ok_or_else(|| bad("alpha"))?)?;
            let beta = tower.parse_elem(g["beta"].as_str().ok_or_else(|| bad("beta"))?)?;
            tower = tower.extend(name, kind, alpha, beta)?;
        }
        Ok(tower)
    }
}

impl fmt::Display for Tower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q")?;
        if !self.params.is_empty() {
            write!(f, "({})", self.params.join(","))?;
        }
        for g in &self.gens {
            write!(f, "({})", g.name)?;
        }
        Ok(())
    }
}

/// An element tied to its tower; the CLI-facing value type.
#[derive(Clone, Debug)]
pub struct TowerElement {
    tower: Arc<Tower>,
    elem: Elem,
}

impl TowerElement {
    pub fn new(tower: Arc<Tower>, elem: Elem) -> Result<TowerElement> {
        if !elem.is_below(tower.nvars() as u32) {
            return Err(Error::LevelTooHigh { level: tower.height(), what: elem.render_raw() });
        }
        Ok(TowerElement { tower, elem })
    }

    pub fn tower(&self) -> &Arc<Tower> {
        &self.tower
    }

    pub fn elem(&self) -> &Elem {
        &self.elem
    }

    fn same_tower(&self, other: &TowerElement) -> Result<()> {
        if Arc::ptr_eq(&self.tower, &other.tower)
            || (self.tower.is_prefix_of(&other.tower) && other.tower.is_prefix_of(&self.tower))
        {
            Ok(())
        } else {
            Err(Error::TowerMismatch)
        }
    }

    pub fn add(&self, other: &TowerElement) -> Result<TowerElement> {
        self.same_tower(other)?;
        Ok(TowerElement { tower: self.tower.clone(), elem: self.elem.add(&other.elem) })
    }

    pub fn sub(&self, other: &TowerElement) -> Result<TowerElement> {
        self.same_tower(other)?;
        Ok(TowerElement { tower: self.tower.clone(), elem: self.elem.sub(&other.elem) })
    }

    pub fn mul(&self, other: &TowerElement) -> Result<TowerElement> {
        self.same_tower(other)?;
        Ok(TowerElement { tower: self.tower.clone(), elem: self.elem.mul(&other.elem) })
    }

    pub fn div(&self, other: &TowerElement) -> Result<TowerElement> {
        self.same_tower(other)?;
        if other.elem.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(TowerElement { tower: self.tower.clone(), elem: self.elem.div(&other.elem)? })
    }

    pub fn sigma(&self, power: i64) -> TowerElement {
        TowerElement { tower: self.tower.clone(), elem: self.tower.sigma_pow(&self.elem, power) }
    }

    pub fn split_level(&self) -> usize {
        self.tower.split_level(&self.elem)
    }

    pub fn render(&self) -> String {
        self.tower.render_elem(&self.elem)
    }
}

// ---- element text parser ----

struct ElemParser<'a> {
    bytes: &'a [u8],
    pos: usize,
    tower: &'a Tower,
}

fn parse_element(text: &str, tower: &Tower) -> Result<Elem> {
    let mut p = ElemParser { bytes: text.as_bytes(), pos: 0, tower };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(Error::Parse { offset: p.pos, msg: "trailing input".into() });
    }
    Ok(e)
}

impl<'a> ElemParser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { offset: self.pos, msg: msg.into() })
    }

    fn expr(&mut self) -> Result<Elem> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Elem> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.factor()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.factor()?;
                    if d.is_zero() {
                        return self.err("division by zero");
                    }
                    acc = acc.div(&d)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Elem> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let neg = if self.bytes.get(self.pos) == Some(&b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let n = self.integer()?;
            let n = if neg { -n } else { n };
            return base.pow_i64(n).map_err(|_| Error::Parse {
                offset: self.pos,
                msg: "zero to a negative power".into(),
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Elem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(Elem::from_i64(n))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                match self.tower.var_by_name(name) {
                    Some(v) => Ok(Elem::var(v)),
                    None => Err(Error::Parse { offset: start, msg: format!("unknown symbol {name}") }),
                }
            }
            _ => self.err("expected an atom"),
        }
    }

    fn integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { offset: start, msg: "integer out of range".into() })
    }
}

/// Q(k)(p)(h) with sigma(p) = (k+1)p and sigma(h) = h + 1/(k+1), the tower
/// representing k! and the harmonic numbers. Used pervasively in tests.
pub fn factorial_harmonic_tower() -> Tower {
    let t = Tower::rational(&[]);
    let k = t.gen_elem(1);
    let k1 = k.add(&Elem::one());
    let t = t.extend("p", GenKind::Pi, k1.clone(), Elem::zero()).unwrap();
    t.extend("h", GenKind::SigmaStar, Elem::one(), Elem::one().div(&k1).unwrap()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Elem;

    #[test]
    fn sigma_on_generators() {
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let h = t.gen_elem(3);
        let k1 = k.add(&Elem::one());
        assert_eq!(t.sigma(&k), k1);
        assert_eq!(t.sigma(&p), k1.mul(&p));
        assert_eq!(t.sigma(&h), h.add(&Elem::one().div(&k1).unwrap()));
    }

    #[test]
    fn sigma_inverse_roundtrip() {
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let h = t.gen_elem(3);
        // a messy element
        let e = k
            .mul(&p)
            .add(&h.mul(&h).div(&k.add(&Elem::from_i64(3))).unwrap())
            .sub(&Elem::from_i64(7).div(&p).unwrap());
        assert_eq!(t.sigma_inv(&t.sigma(&e)), e);
        assert_eq!(t.sigma(&t.sigma_inv(&e)), e);
        assert_eq!(t.sigma_pow(&e, 3), t.sigma(&t.sigma(&t.sigma(&e))));
    }

    #[test]
    fn split_levels() {
        let t = factorial_harmonic_tower();
        let k = t.gen_elem(1);
        let p = t.gen_elem(2);
        let h = t.gen_elem(3);
        assert_eq!(t.split_level(&Elem::from_q(crate::arith::q_ratio(3, 2))), 0);
        // (k+2)p/(2(k+1)) lives at level 2
        let e = k
            .add(&Elem::from_i64(2))
            .mul(&p)
            .div(&k.add(&Elem::one()).mul(&Elem::from_i64(2)))
            .unwrap();
        assert_eq!(t.split_level(&e), 2);
        assert_eq!(t.split_level(&h), 3);
    }

    #[test]
    fn polynomial_sigma_shape() {
        let t = factorial_harmonic_tower();
        // above p everything is Sigma* with beta below: polynomial
        assert!(t.is_polynomial_sigma_tower(2));
        // above k there is the Pi generator p
        assert!(!t.is_polynomial_sigma_tower(1));
        // vacuous above the top
        assert!(t.is_polynomial_sigma_tower(3));
    }

    #[test]
    fn json_roundtrip() {
        let t = factorial_harmonic_tower();
        let j = t.to_json();
        let t2 = Tower::from_json(&j).unwrap();
        assert!(t.is_prefix_of(&t2) && t2.is_prefix_of(&t));
        assert_eq!(j, t2.to_json());
    }

    #[test]
    fn parse_render_roundtrip() {
        let t = factorial_harmonic_tower();
        let e = t
            .parse_elem("((k^2 + 2*k + 2)*p*(h*(k + 1) + 1)^2)/(k + 1)")
            .unwrap();
        let text = t.render_elem(&e);
        assert_eq!(t.parse_elem(&text).unwrap(), e);
    }

    #[test]
    fn tower_element_ops_check_towers() {
        let t1 = Arc::new(factorial_harmonic_tower());
        let t2 = Arc::new(Tower::rational(&[]));
        let a = TowerElement::new(t1.clone(), t1.gen_elem(2)).unwrap();
        let b = TowerElement::new(t2.clone(), t2.gen_elem(1)).unwrap();
        assert!(matches!(a.add(&b), Err(Error::TowerMismatch)));
        let z = TowerElement::new(t1.clone(), Elem::zero()).unwrap();
        assert!(matches!(a.div(&z), Err(Error::DivisionByZero)));
    }

    #[test]
    fn first_generator_must_be_rational() {
        let t = Tower::constant_field(&[]);
        let bad = t.extend("p", GenKind::Pi, Elem::from_i64(2), Elem::zero());
        assert!(bad.is_err());
    }
}
