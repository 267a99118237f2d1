use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use super::{ModPPoly, Monomial, MpolyError, Poly, Var, VarSpace};
use crate::exactnum::Rational;

pub(super) fn render_monomial(space: &Arc<VarSpace>, m: &Monomial) -> String {
    if m.is_unit() {
        return "1".into();
    }
    let mut parts = Vec::new();
    for (i, v) in space.vars().iter().enumerate() {
        let e = m.exponent(i);
        if e == 1 {
            parts.push(format!("{v}"));
        } else if e >= 2 {
            parts.push(format!("{v}^{e}"));
        }
    }
    parts.join("*")
}

fn render_terms<C: fmt::Display>(
    space: &Arc<VarSpace>,
    terms: impl Iterator<Item = (Monomial, C, bool)>,
) -> String {
    // items: (monomial, |coefficient| display, is_negative)
    let mut out = String::new();
    let mut first = true;
    for (m, coeff, neg) in terms {
        if first {
            if neg {
                out.push('-');
            }
            first = false;
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let c = coeff.to_string();
        if m.is_unit() {
            out.push_str(&c);
        } else if c == "1" {
            out.push_str(&render_monomial(space, &m));
        } else {
            out.push_str(&c);
            out.push('*');
            out.push_str(&render_monomial(space, &m));
        }
    }
    if first {
        out.push('0');
    }
    out
}

impl Poly {
    /// Canonical text form: descending grevlex, ` + `/` - ` joins.
    pub fn render(&self) -> String {
        render_terms(
            self.space(),
            self.terms()
                .iter()
                .map(|(m, c)| (*m, c.abs(), c.is_negative())),
        )
    }

    pub fn parse(space: &Arc<VarSpace>, text: &str) -> Result<Poly, MpolyError> {
        let raw = Parser::new(space, text).parse_terms()?;
        Ok(Poly::from_terms(space, raw))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl ModPPoly {
    /// Serialized form carries no annotation.
    pub fn render(&self) -> String {
        render_terms(
            self.space(),
            self.terms().iter().map(|&(m, c)| (m, c, false)),
        )
    }

    /// Report form with the trailing modulus annotation.
    pub fn render_annotated(&self) -> String {
        format!("{} (mod {})", self.render(), self.modulus())
    }

    pub fn parse(space: &Arc<VarSpace>, p: u64, text: &str) -> Result<ModPPoly, MpolyError> {
        Poly::parse(space, text)?.reduce_mod_p(p)
    }
}

impl fmt::Display for ModPPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

struct Parser<'a> {
    space: &'a Arc<VarSpace>,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(space: &'a Arc<VarSpace>, text: &'a str) -> Self {
        Parser {
            space,
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, msg: impl Into<String>) -> MpolyError {
        MpolyError::Parse {
            pos: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn parse_terms(&mut self) -> Result<Vec<(Monomial, Rational)>, MpolyError> {
        let mut out = Vec::new();
        self.skip_ws();
        if self.pos == self.bytes.len() {
            return Err(self.err("empty input"));
        }
        let mut sign = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            self.skip_ws();
            let (m, c) = self.parse_term()?;
            out.push((m, if sign { -c } else { c }));
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => {
                    sign = false;
                    self.pos += 1;
                }
                Some(b'-') => {
                    sign = true;
                    self.pos += 1;
                }
                Some(c) => return Err(self.err(format!("unexpected character `{}`", c as char))),
            }
        }
        Ok(out)
    }

    fn parse_term(&mut self) -> Result<(Monomial, Rational), MpolyError> {
        let mut coeff = Rational::one();
        let mut exps = vec![0u32; self.space.arity()];
        loop {
            self.skip_ws();
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    coeff = coeff * self.parse_number()?;
                }
                Some(c) if c.is_ascii_alphabetic() => {
                    let (idx, e) = self.parse_varpow()?;
                    exps[idx] = exps[idx]
                        .checked_add(e)
                        .filter(|&t| t <= super::MAX_EXPONENT)
                        .ok_or_else(|| self.err("exponent too large"))?;
                }
                _ => return Err(self.err("expected a number or variable")),
            }
            self.skip_ws();
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((Monomial::from_exponents(&exps), coeff))
    }

    fn parse_integer(&mut self) -> Result<BigInt, MpolyError> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected digits"));
        }
        let s = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        BigInt::from_str(s).map_err(|e| self.err(format!("bad integer: {e}")))
    }

    fn parse_number(&mut self) -> Result<Rational, MpolyError> {
        let num = self.parse_integer()?;
        let den = if self.peek() == Some(b'/') {
            self.pos += 1;
            let d = self.parse_integer()?;
            if d == BigInt::from(0) {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        Ok(Rational::from_big(num, den))
    }

    fn parse_varpow(&mut self) -> Result<(usize, u32), MpolyError> {
        let start = self.pos;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        let var = parse_var_name(name).ok_or_else(|| {
            MpolyError::Parse {
                pos: start,
                msg: format!("unknown variable `{name}`"),
            }
        })?;
        let idx = self.space.index_of(var).ok_or_else(|| MpolyError::Parse {
            pos: start,
            msg: format!("variable `{name}` not in this space"),
        })?;
        let e = if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.parse_integer()?;
            u32::try_from(n.clone())
                .ok()
                .filter(|&v| v >= 1 && v <= super::MAX_EXPONENT)
                .ok_or_else(|| self.err(format!("exponent {n} out of range")))?
        } else {
            1
        };
        Ok((idx, e))
    }
}

fn parse_var_name(name: &str) -> Option<Var> {
    match name {
        "z" => Some(Var::Z),
        "b" => Some(Var::B),
        _ => {
            let idx: u32 = name.strip_prefix('a')?.parse().ok()?;
            if idx >= 1 {
                Some(Var::A(idx))
            } else {
                None
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp() -> Arc<VarSpace> {
        VarSpace::unhatted(3)
    }

    #[test]
    fn round_trip_canonical() {
        let s = sp();
        for text in [
            "b - a1",
            "b^3 - 3*a1^2*b + 2*a1^3",
            "z^2 + 1/2*a2 - 5",
            "0",
            "-b",
            "3",
            "-5/2",
            "a1*a2*b",
        ] {
            let p = Poly::parse(&s, text).unwrap();
            assert_eq!(p.render(), text, "round trip of {text}");
        }
    }

    #[test]
    fn parse_non_canonical() {
        let s = sp();
        // 3*b^2*a1 + 1/2 parses; renders with variables in space order
        let p = Poly::parse(&s, "3*b^2*a1 + 1/2").unwrap();
        assert_eq!(p.render(), "3*a1*b^2 + 1/2");
        // merging duplicate monomials
        let q = Poly::parse(&s, "b + b - a1 + 2*a1").unwrap();
        assert_eq!(q.render(), "2*b + a1");
    }

    #[test]
    fn parse_errors() {
        let s = sp();
        assert!(matches!(
            Poly::parse(&s, "b + x"),
            Err(MpolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse(&s, "a7"),
            Err(MpolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse(&s, ""),
            Err(MpolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse(&s, "b + "),
            Err(MpolyError::Parse { .. })
        ));
        assert!(matches!(
            Poly::parse(&s, "1/0"),
            Err(MpolyError::Parse { .. })
        ));
    }

    #[test]
    fn modp_render() {
        let s = sp();
        let g = ModPPoly::parse(&s, 3, "4*b + 5*a1").unwrap();
        assert_eq!(g.render(), "b + 2*a1");
        assert_eq!(g.render_annotated(), "b + 2*a1 (mod 3)");
    }
}
