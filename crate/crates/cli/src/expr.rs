//! Rational expressions in named variables: `x^5 + x + 1`, `1/(z*(z-1))`,
//! `-2 - 3a`, `1/2 s^2`.

use polar_core::arith::{parse_rat, MPoly, Poly, Rat};

/// `num/den` as polynomials in the given variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fraction {
    pub num: MPoly,
    pub den: MPoly,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rat),
    Ident(String),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < cs.len() && (cs[i].is_ascii_digit() || cs[i] == '.') {
                i += 1;
            }
            let lit: String = cs[start..i].iter().collect();
            out.push(Tok::Num(decimal(&lit)?));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

fn decimal(lit: &str) -> Result<Rat, String> {
    let bad = || format!("bad number {lit:?}");
    let text = match lit.split_once('.') {
        None => lit.to_string(),
        Some((a, b)) if !b.contains('.') && !(a.is_empty() && b.is_empty()) => {
            format!("{a}{b}/1{}", "0".repeat(b.len()))
        }
        _ => return Err(bad()),
    };
    parse_rat(&text).map_err(|_| bad())
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    vars: &'a [&'a str],
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn n(&self) -> usize {
        self.vars.len()
    }

    fn expr(&mut self) -> Result<Fraction, String> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = add(&acc, &self.term()?);
            } else if self.eat('-') {
                acc = add(&acc, &neg(&self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Fraction, String> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = mul(&acc, &self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                if d.num.is_zero() {
                    return Err("division by zero".into());
                }
                acc = mul(&acc, &Fraction { num: d.den, den: d.num });
            } else if matches!(self.peek(), Some(Tok::Num(_) | Tok::Ident(_)) | Some(Tok::Op('('))) {
                acc = mul(&acc, &self.power()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Fraction, String> {
        if self.eat('-') {
            return Ok(neg(&self.unary()?));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Fraction, String> {
        let base = self.atom()?;
        if self.eat('^') {
            let e = match self.toks.get(self.pos) {
                Some(Tok::Num(r)) if r.is_integer() => r.to_integer(),
                _ => return Err("exponent must be a nonnegative integer".into()),
            };
            self.pos += 1;
            let e: u32 = e.try_into().map_err(|_| "exponent out of range".to_string())?;
            return Ok(Fraction { num: base.num.pow(e), den: base.den.pow(e) });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Fraction, String> {
        let n = self.n();
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Num(r)) => {
                self.pos += 1;
                Ok(Fraction { num: MPoly::constant(n, r), den: MPoly::one(n) })
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                let i = self
                    .vars
                    .iter()
                    .position(|v| *v == name)
                    .ok_or_else(|| format!("unknown variable {name:?} (expected one of {:?})", self.vars))?;
                Ok(Fraction { num: MPoly::var(n, i), den: MPoly::one(n) })
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err("missing ')'".into());
                }
                Ok(e)
            }
            Some(t) => Err(format!("unexpected token {t:?}")),
            None => Err("unexpected end of expression".into()),
        }
    }
}

fn add(a: &Fraction, b: &Fraction) -> Fraction {
    if a.den == b.den {
        return Fraction { num: &a.num + &b.num, den: a.den.clone() };
    }
    Fraction { num: &(&a.num * &b.den) + &(&b.num * &a.den), den: &a.den * &b.den }
}

fn neg(a: &Fraction) -> Fraction {
    Fraction { num: -&a.num, den: a.den.clone() }
}

fn mul(a: &Fraction, b: &Fraction) -> Fraction {
    Fraction { num: &a.num * &b.num, den: &a.den * &b.den }
}

/// Parses a rational expression in `vars`.
pub fn parse_fraction(s: &str, vars: &[&str]) -> Result<Fraction, String> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    let mut p = Parser { toks, pos: 0, vars };
    let f = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(format!("trailing input at token {}", p.pos + 1));
    }
    Ok(f)
}

/// Parses a polynomial in `vars`; denominators must be constants.
pub fn parse_mpoly(s: &str, vars: &[&str]) -> Result<MPoly, String> {
    let f = parse_fraction(s, vars)?;
    if !f.den.is_constant() {
        return Err("expected a polynomial".into());
    }
    Ok(f.num.scale(&(Rat::from_integer(1.into()) / f.den.constant_term())))
}

/// Parses a univariate polynomial in `var`.
pub fn parse_poly(s: &str, var: &str) -> Result<Poly<Rat>, String> {
    Ok(parse_mpoly(s, &[var])?.to_univariate(0).expect("univariate"))
}

/// Parses a univariate rational function as `(num, den)`.
pub fn parse_ratfunc(s: &str, var: &str) -> Result<(Poly<Rat>, Poly<Rat>), String> {
    let f = parse_fraction(s, &[var])?;
    Ok((f.num.to_univariate(0).expect("univariate"), f.den.to_univariate(0).expect("univariate")))
}

/// Parses a rational number, allowing expressions such as `-3/4`.
pub fn parse_number(s: &str) -> Result<Rat, String> {
    let p = parse_mpoly(s, &[])?;
    Ok(p.constant_term())
}
