//! Recursive descent parser for ODE and recipe expressions.
//!
//! ```text
//! expr   := term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | base ('^' uint)?
//! base   := 'x' | 'y' | 'z' | 'i' | number | '(' expr ')'
//! number := uint ('.' digits)? | uint '/' uint
//! ```
//!
//! Whitespace is ignored, `i` is the imaginary unit and products must be
//! written with `*`. Decimal literals are converted exactly (`0.1` is `1/10`).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::cpx::CRat;
use crate::poly::{TriPoly, UniPoly};

/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("at byte {offset}: expected {}, found {found}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<&'static str>,
        found: String,
    },
    #[error("at byte {offset}: exponents must be nonnegative integers")]
    NegativeExponent { offset: usize },
    #[error("at byte {offset}: unknown identifier `{name}`")]
    UnknownIdentifier { offset: usize, name: String },
    #[error("at byte {offset}: zero denominator")]
    ZeroDenominator { offset: usize },
    #[error("at byte {offset}: exponent {value} exceeds {MAX_EXPONENT}")]
    ExponentTooLarge { offset: usize, value: String },
}

/// Parses `F(z, y, x)`.
pub fn parse_ode(text: &str) -> Result<TriPoly, ParseError> {
    Parser::new(text, &["x", "y", "z"]).parse()
}

/// Parses a recipe polynomial in `x` only.
pub fn parse_recipe(text: &str) -> Result<UniPoly, ParseError> {
    let p = Parser::new(text, &["x"]).parse()?;
    let deg = p.terms().map(|(k, _)| k.x as usize).max().unwrap_or(0);
    let mut coeffs = vec![CRat::zero(); deg + 1];
    for (k, c) in p.into_terms() {
        coeffs[k.x as usize] = c;
    }
    Ok(UniPoly::new(coeffs))
}

/// Parses a single number: `3`, `-1/2`, `0.25`, `1+2*i`.
pub fn parse_number(text: &str) -> Result<CRat, ParseError> {
    let p = Parser::new(text, &[]).parse()?;
    Ok(p.coeff(&Default::default()))
}

const EXPECT_OPERAND: &[&str] = &["number", "variable", "'('", "'-'"];

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    allowed: &'a [&'a str],
}

impl<'a> Parser<'a> {
    fn new(text: &'a str, allowed: &'a [&'a str]) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
            allowed,
        }
    }

    fn parse(mut self) -> Result<TriPoly, ParseError> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.unexpected(&["'+'", "'-'", "'*'", "'^'", "end of input"]));
        }
        Ok(p)
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        let found = match self.src.get(self.pos) {
            None => "end of input".to_string(),
            Some(_) => {
                let rest = String::from_utf8_lossy(&self.src[self.pos..]);
                format!("`{}`", rest.chars().next().unwrap_or('?'))
            }
        };
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_vec(),
            found,
        }
    }

    fn expr(&mut self) -> Result<TriPoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<TriPoly, ParseError> {
        let mut acc = self.factor()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<TriPoly, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.factor()?);
        }
        let base = self.base()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            match self.peek() {
                Some(b'-') => return Err(ParseError::NegativeExponent { offset: self.pos }),
                Some(c) if c.is_ascii_digit() => {}
                _ => return Err(self.unexpected(&["nonnegative integer exponent"])),
            }
            let start = self.pos;
            let digits = self.digits();
            let exp: u32 = match digits.parse() {
                Ok(e) if e <= MAX_EXPONENT => e,
                _ => {
                    return Err(ParseError::ExponentTooLarge {
                        offset: start,
                        value: digits.to_string(),
                    })
                }
            };
            return Ok(base.pow(exp));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<TriPoly, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.unexpected(&["')'"]));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => self.number().map(TriPoly::constant),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.identifier(),
            _ => Err(self.unexpected(EXPECT_OPERAND)),
        }
    }

    fn identifier(&mut self) -> Result<TriPoly, ParseError> {
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        if name == "i" {
            return Ok(TriPoly::constant(CRat::i()));
        }
        if !self.allowed.contains(&name) {
            return Err(ParseError::UnknownIdentifier {
                offset: start,
                name: name.to_string(),
            });
        }
        Ok(match name {
            "x" => TriPoly::var_x(),
            "y" => TriPoly::var_y(),
            _ => TriPoly::var_z(),
        })
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn number(&mut self) -> Result<CRat, ParseError> {
        let int: BigInt = self.digits().parse().expect("digit run");
        match self.src.get(self.pos) {
            Some(b'.') => {
                self.pos += 1;
                let frac = self.digits();
                if frac.is_empty() {
                    return Err(self.unexpected(&["digits after '.'"]));
                }
                let scale = BigInt::from(10).pow(frac.len() as u32);
                let frac: BigInt = frac.parse().expect("digit run");
                Ok(CRat::real(BigRational::new(int * &scale + frac, scale)))
            }
            Some(b'/') => {
                self.pos += 1;
                let at = self.pos;
                let den = self.digits();
                if den.is_empty() {
                    return Err(self.unexpected(&["denominator"]));
                }
                let den: BigInt = den.parse().expect("digit run");
                if den.is_zero() {
                    return Err(ParseError::ZeroDenominator { offset: at });
                }
                Ok(CRat::real(BigRational::new(int, den)))
            }
            _ => Ok(CRat::real(BigRational::from_integer(int))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::TriExp;

    fn tri(terms: &[((u32, u32, u32), CRat)]) -> TriPoly {
        TriPoly::from_terms(
            terms
                .iter()
                .map(|((z, y, x), c)| (TriExp::new(*z, *y, *x), c.clone())),
        )
    }

    #[test]
    fn log_equation() {
        let f = parse_ode("(x+1)*z - 1").unwrap();
        let expected = tri(&[
            ((1, 0, 1), CRat::from_int(1)),
            ((1, 0, 0), CRat::from_int(1)),
            ((0, 0, 0), CRat::from_int(-1)),
        ]);
        assert_eq!(f, expected);
    }

    #[test]
    fn exp_equation_and_zero() {
        let f = parse_ode("z - y").unwrap();
        assert_eq!(
            f,
            tri(&[
                ((1, 0, 0), CRat::from_int(1)),
                ((0, 1, 0), CRat::from_int(-1))
            ])
        );
        assert!(parse_ode("0").unwrap().is_zero());
    }

    #[test]
    fn recipes() {
        let f = parse_recipe("1 + x + 1/2*x^2").unwrap();
        assert_eq!(
            f.coeffs(),
            &[CRat::from_int(1), CRat::from_int(1), CRat::ratio(1, 2)]
        );
        let g = parse_recipe("x - 1/2*x^2").unwrap();
        assert_eq!(
            g.coeffs(),
            &[CRat::zero(), CRat::from_int(1), CRat::ratio(-1, 2)]
        );
    }

    #[test]
    fn empty_input_is_rejected() {
        match parse_recipe("") {
            Err(ParseError::Syntax {
                offset: 0,
                expected,
                found,
            }) => {
                assert_eq!(expected, EXPECT_OPERAND);
                assert_eq!(found, "end of input");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_number("0.1").unwrap(), CRat::ratio(1, 10));
        assert_eq!(parse_number("0.5").unwrap(), CRat::ratio(1, 2));
        assert_eq!(parse_number("12.250").unwrap(), CRat::ratio(49, 4));
    }

    #[test]
    fn complex_numbers() {
        let z = parse_number("1/2 - 3*i").unwrap();
        assert_eq!(z, CRat::ratio(1, 2) - CRat::from_int(3) * CRat::i());
        assert_eq!(parse_number("i^2").unwrap(), CRat::from_int(-1));
    }

    #[test]
    fn precedence() {
        assert_eq!(
            parse_ode("-x^2").unwrap(),
            tri(&[((0, 0, 2), CRat::from_int(-1))])
        );
        assert_eq!(
            parse_ode("2*x - 3 - -x").unwrap(),
            tri(&[
                ((0, 0, 1), CRat::from_int(3)),
                ((0, 0, 0), CRat::from_int(-3))
            ])
        );
    }

    #[test]
    fn error_kinds() {
        assert_eq!(
            parse_ode("x^-1"),
            Err(ParseError::NegativeExponent { offset: 2 })
        );
        assert_eq!(
            parse_ode("xy"),
            Err(ParseError::UnknownIdentifier {
                offset: 0,
                name: "xy".into()
            })
        );
        assert!(matches!(
            parse_recipe("x + y"),
            Err(ParseError::UnknownIdentifier { offset: 4, .. })
        ));
        assert_eq!(
            parse_ode("1/0"),
            Err(ParseError::ZeroDenominator { offset: 2 })
        );
        assert!(matches!(
            parse_ode("(x+1"),
            Err(ParseError::Syntax { offset: 4, .. })
        ));
        assert!(matches!(
            parse_ode("2 x"),
            Err(ParseError::Syntax { offset: 2, .. })
        ));
        assert!(matches!(
            parse_ode("x^99999"),
            Err(ParseError::ExponentTooLarge { .. })
        ));
    }
}
