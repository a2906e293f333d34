//! Summand expression AST and its printer.

use num_bigint::BigInt;
use num_rational::BigRational as Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigInt),
    Sym(String),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Factorial(Box<Expr>),
    Harmonic(Box<Expr>),
    Binomial(Box<Expr>, Box<Expr>),
    Pochhammer(Box<Expr>, Box<Expr>),
    Sum { idx: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
    Product { idx: String, lo: Box<Expr>, hi: Box<Expr>, body: Box<Expr> },
}

impl Expr {
    pub fn int(n: i64) -> Expr {
        Expr::Int(BigInt::from(n))
    }

    pub fn sym(s: &str) -> Expr {
        Expr::Sym(s.to_string())
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Expr::Int(n) => Some(n),
            _ => None,
        }
    }

    pub fn as_q(&self) -> Option<Q> {
        use num_traits::Zero;
        match self {
            Expr::Int(n) => Some(Q::from_integer(n.clone())),
            Expr::Neg(e) => e.as_q().map(|q| -q),
            Expr::Div(a, b) => match (a.as_q(), b.as_q()) {
                (Some(x), Some(y)) if !y.is_zero() => Some(x / y),
                _ => None,
            },
            _ => None,
        }
    }

    /// All free symbols (bound summation indices excluded).
    pub fn free_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Expr::Int(_) => {}
            Expr::Sym(s) => {
                if !bound.contains(s) {
                    out.push(s.clone());
                }
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Pow(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Neg(a) | Expr::Factorial(a) | Expr::Harmonic(a) => a.collect_free(bound, out),
            Expr::Binomial(a, b) | Expr::Pochhammer(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Expr::Sum { idx, lo, hi, body } | Expr::Product { idx, lo, hi, body } => {
                lo.collect_free(bound, out);
                hi.collect_free(bound, out);
                bound.push(idx.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Substitute every free occurrence of `sym` by `repl`.
    pub fn subst(&self, sym: &str, repl: &Expr) -> Expr {
        match self {
            Expr::Int(_) => self.clone(),
            Expr::Sym(s) => {
                if s == sym {
                    repl.clone()
                } else {
                    self.clone()
                }
            }
            Expr::Add(a, b) => Expr::Add(a.subst(sym, repl).into(), b.subst(sym, repl).into()),
            Expr::Sub(a, b) => Expr::Sub(a.subst(sym, repl).into(), b.subst(sym, repl).into()),
            Expr::Mul(a, b) => Expr::Mul(a.subst(sym, repl).into(), b.subst(sym, repl).into()),
            Expr::Div(a, b) => Expr::Div(a.subst(sym, repl).into(), b.subst(sym, repl).into()),
            Expr::Pow(a, n) => Expr::Pow(a.subst(sym, repl).into(), n.subst(sym, repl).into()),
            Expr::Neg(a) => Expr::Neg(a.subst(sym, repl).into()),
            Expr::Factorial(a) => Expr::Factorial(a.subst(sym, repl).into()),
            Expr::Harmonic(a) => Expr::Harmonic(a.subst(sym, repl).into()),
            Expr::Binomial(a, b) => {
                Expr::Binomial(a.subst(sym, repl).into(), b.subst(sym, repl).into())
            }
            Expr::Pochhammer(a, b) => {
                Expr::Pochhammer(a.subst(sym, repl).into(), b.subst(sym, repl).into())
            }
            Expr::Sum { idx, lo, hi, body } => {
                let body = if idx == sym { body.clone() } else { body.subst(sym, repl).into() };
                Expr::Sum {
                    idx: idx.clone(),
                    lo: lo.subst(sym, repl).into(),
                    hi: hi.subst(sym, repl).into(),
                    body,
                }
            }
            Expr::Product { idx, lo, hi, body } => {
                let body = if idx == sym { body.clone() } else { body.subst(sym, repl).into() };
                Expr::Product {
                    idx: idx.clone(),
                    lo: lo.subst(sym, repl).into(),
                    hi: hi.subst(sym, repl).into(),
                    body,
                }
            }
        }
    }

    /// Shift substitution sym -> sym + c.
    pub fn shift(&self, sym: &str, c: i64) -> Expr {
        if c == 0 {
            return self.clone();
        }
        let repl = if c > 0 {
            Expr::Add(Expr::sym(sym).into(), Expr::int(c).into())
        } else {
            Expr::Sub(Expr::sym(sym).into(), Expr::int(-c).into())
        };
        self.subst(sym, &repl)
    }

    fn prec(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) | Expr::Neg(..) => 1,
            Expr::Mul(..) | Expr::Div(..) => 2,
            Expr::Pow(..) | Expr::Factorial(..) => 3,
            _ => 4,
        }
    }

    fn print_into(&self, min_prec: u8, out: &mut String) {
        let p = self.prec();
        let paren = p < min_prec;
        if paren {
            out.push('(');
        }
        match self {
            Expr::Int(n) => out.push_str(&n.to_string()),
            Expr::Sym(s) => out.push_str(s),
            Expr::Add(a, b) => {
                a.print_into(1, out);
                out.push_str(" + ");
                b.print_into(2, out);
            }
            Expr::Sub(a, b) => {
                a.print_into(1, out);
                out.push_str(" - ");
                b.print_into(2, out);
            }
            Expr::Neg(a) => {
                out.push('-');
                a.print_into(2, out);
            }
            Expr::Mul(a, b) => {
                a.print_into(2, out);
                out.push('*');
                b.print_into(3, out);
            }
            Expr::Div(a, b) => {
                a.print_into(2, out);
                out.push('/');
                b.print_into(3, out);
            }
            Expr::Pow(a, n) => {
                a.print_into(4, out);
                out.push('^');
                match &**n {
                    Expr::Int(v) => out.push_str(&v.to_string()),
                    Expr::Sym(s) => out.push_str(s),
                    other => {
                        out.push('(');
                        other.print_into(0, out);
                        out.push(')');
                    }
                }
            }
            Expr::Factorial(a) => {
                a.print_into(4, out);
                out.push('!');
            }
            Expr::Harmonic(a) => {
                out.push_str("H(");
                a.print_into(1, out);
                out.push(')');
            }
            Expr::Binomial(a, b) => {
                out.push_str("Binomial(");
                a.print_into(1, out);
                out.push_str(", ");
                b.print_into(1, out);
                out.push(')');
            }
            Expr::Pochhammer(a, b) => {
                out.push_str("Pochhammer(");
                a.print_into(1, out);
                out.push_str(", ");
                b.print_into(1, out);
                out.push(')');
            }
            Expr::Sum { idx, lo, hi, body } => {
                out.push_str("Sum(");
                out.push_str(idx);
                out.push_str(", ");
                lo.print_into(1, out);
                out.push_str(", ");
                hi.print_into(1, out);
                out.push_str(", ");
                body.print_into(1, out);
                out.push(')');
            }
            Expr::Product { idx, lo, hi, body } => {
                out.push_str("Product(");
                out.push_str(idx);
                out.push_str(", ");
                lo.print_into(1, out);
                out.push_str(", ");
                hi.print_into(1, out);
                out.push_str(", ");
                body.print_into(1, out);
                out.push(')');
            }
        }
        if paren {
            out.push(')');
        }
    }
}

impl std::fmt::Display for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let mut s = String::new();
        self.print_into(0, &mut s);
        f.write_str(&s)
    }
}
