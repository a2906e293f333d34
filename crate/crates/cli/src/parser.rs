//! Recursive-descent parser for summand expressions. Errors carry the byte
//! offset of the failure.
//!
//! expr    := '-'? term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor)*
//! factor  := base '!'* ('^' '-'? int)?
//! base    := int | symbol | 'H' '(' expr ')' | 'Binomial' '(' expr ',' expr ')'
//!          | 'Pochhammer' '(' expr ',' expr ')'
//!          | 'Sum' '(' sym ',' expr ',' expr ',' expr ')'
//!          | 'Product' '(' sym ',' expr ',' expr ',' expr ')'
//!          | '(' expr ')'

use num_bigint::BigInt;

use crate::expr::Expr;
use crate::CliError;

pub fn parse(text: &str) -> Result<Expr, CliError> {
    let mut p = Parser { bytes: text.as_bytes(), pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err_at(p.pos, "unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err_at(&self, offset: usize, msg: &str) -> CliError {
        CliError::Parse { offset, msg: msg.to_string() }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> Result<(), CliError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err_at(self.pos, &format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, CliError> {
        let mut acc = if self.peek() == Some(b'-') {
            self.pos += 1;
            Expr::Neg(self.term()?.into())
        } else {
            self.term()?
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Expr::Add(acc.into(), self.term()?.into());
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Expr::Sub(acc.into(), self.term()?.into());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, CliError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Expr::Mul(acc.into(), self.factor()?.into());
                }
                Some(b'/') => {
                    self.pos += 1;
                    acc = Expr::Div(acc.into(), self.factor()?.into());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<Expr, CliError> {
        let mut base = self.base()?;
        while self.peek() == Some(b'!') {
            self.pos += 1;
            base = Expr::Factorial(base.into());
        }
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let expo = match self.peek() {
                Some(b'(') => {
                    self.pos += 1;
                    let e = self.expr()?;
                    self.eat(b')')?;
                    e
                }
                Some(c) if c.is_ascii_digit() => Expr::Int(BigInt::from(self.integer()?)),
                Some(c) if c.is_ascii_alphabetic() || c == b'_' => Expr::Sym(self.ident()),
                _ => return Err(self.err_at(self.pos, "expected an exponent")),
            };
            base = Expr::Pow(base.into(), expo.into());
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Expr, CliError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.eat(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(BigInt::from(self.integer()?))),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let name = self.ident();
                match name.as_str() {
                    "H" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b')')?;
                        Ok(Expr::Harmonic(a.into()))
                    }
                    "Binomial" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b',')?;
                        let b = self.expr()?;
                        self.eat(b')')?;
                        Ok(Expr::Binomial(a.into(), b.into()))
                    }
                    "Pochhammer" => {
                        self.eat(b'(')?;
                        let a = self.expr()?;
                        self.eat(b',')?;
                        let b = self.expr()?;
                        self.eat(b')')?;
                        Ok(Expr::Pochhammer(a.into(), b.into()))
                    }
                    "Sum" | "Product" => {
                        self.eat(b'(')?;
                        self.skip_ws();
                        let start = self.pos;
                        let idx = self.ident();
                        if idx.is_empty() {
                            return Err(self.err_at(start, "expected a summation index"));
                        }
                        self.eat(b',')?;
                        let lo = self.expr()?;
                        self.eat(b',')?;
                        let hi = self.expr()?;
                        self.eat(b',')?;
                        let body = self.expr()?;
                        self.eat(b')')?;
                        if name == "Sum" {
                            Ok(Expr::Sum {
                                idx,
                                lo: lo.into(),
                                hi: hi.into(),
                                body: body.into(),
                            })
                        } else {
                            Ok(Expr::Product {
                                idx,
                                lo: lo.into(),
                                hi: hi.into(),
                                body: body.into(),
                            })
                        }
                    }
                    _ => Ok(Expr::Sym(name)),
                }
            }
            _ => Err(self.err_at(self.pos, "expected an expression")),
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn integer(&mut self) -> Result<u64, CliError> {
        self.skip_ws();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err_at(start, "expected an integer"));
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos])
            .parse()
            .map_err(|_| self.err_at(start, "integer literal out of range"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nested_sum_ast() {
        let e = parse("Sum(i,1,k,(i^2+1)*i!*H(i)^2)").unwrap();
        match &e {
            Expr::Sum { idx, body, .. } => {
                assert_eq!(idx, "i");
                assert!(format!("{body}").contains("H(i)^2"));
            }
            other => panic!("expected a sum, got {other:?}"),
        }
    }

    #[test]
    fn parameterized_summand() {
        let e = parse("(-1)^k*Binomial(2*r,k)^3*H(k)").unwrap();
        assert_eq!(e.free_symbols(), vec!["k".to_string(), "r".to_string()]);
    }

    #[test]
    fn error_offset() {
        let err = parse("H(").unwrap_err();
        match err {
            CliError::Parse { offset, .. } => assert_eq!(offset, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn print_parse_fixpoint_examples() {
        for src in [
            "Sum(i,1,k,(i^2+1)*i!*H(i)^2)",
            "(-1)^k*Binomial(2*r,k)^3*H(k)",
            "k!/(k+1) - Pochhammer(1/2, k)",
            "2^k*(k - 1)^(-2)",
            "2^(2*k + 1)*r^k",
        ] {
            let e1 = parse(src).unwrap();
            let printed = e1.to_string();
            let e2 = parse(&printed).unwrap();
            assert_eq!(e1, e2, "fixpoint failed for {src} -> {printed}");
        }
    }
}
