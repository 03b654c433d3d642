//! Parser for the bundle-expression mini-language accepted by `coh`.
//!
//! Grammar (whitespace is allowed between any two tokens):
//!
//! ```text
//!     expr   := "xi" "^" int "*" target | atom
//!     target := atom | "(" expr ")"
//!     atom   := "L"   "(" int "," int ")"
//!             | "E"   "(" int "," int ")"
//!             | "S2E" "(" int "," int ")"
//!             | "IZ"  "(" int "," int ";" int ")"
//!             | "ext" "(" expr "," expr ")"
//!     int    := ("-" | "+")? digit+
//! ```
//!
//! `L` is a line bundle on the base surface, `E` the defining rank-2
//! bundle twisted by a line bundle, `S2E` its symmetric square, `IZ` an
//! ideal sheaf of points twisted by a line bundle, `ext(s, q)` an
//! extension of `q` by `s`, and `xi^a*...` tensors by the `a`-th power of
//! the tautological class.  The grammar round-trips with the `Display`
//! implementation of [`BundleExpr`].

use std::fmt;
use std::str::FromStr;

use ulrich_scrolls::hirzebruch::SurfaceDivisor;
use ulrich_scrolls::{BundleExpr, Int};

/// A parse failure with byte position and message.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.pos, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(input: &str) -> Result<BundleExpr, ParseError> {
    let mut p = Parser {
        bytes: input.as_bytes(),
        pos: 0,
    };
    let expr = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.error("trailing input after expression"));
    }
    Ok(expr)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            pos: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self
            .bytes
            .get(self.pos)
            .is_some_and(u8::is_ascii_whitespace)
        {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, token: u8) -> Result<(), ParseError> {
        if self.peek() == Some(token) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", token as char)))
        }
    }

    fn ident(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric())
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn int(&mut self) -> Result<Int, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.bytes.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        Int::from_str(text).map_err(|_| ParseError {
            pos: start,
            message: "expected an integer".to_string(),
        })
    }

    fn expr(&mut self) -> Result<BundleExpr, ParseError> {
        self.skip_ws();
        let save = self.pos;
        let head = self.ident();
        if head == "xi" {
            self.expect(b'^')?;
            let a = self.int()?;
            self.expect(b'*')?;
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                return Ok(BundleExpr::scroll_twist(a, inner));
            }
            let atom = self.atom()?;
            // A twisted line bundle is a line bundle on the scroll.
            if let BundleExpr::Line(d) = atom {
                return Ok(BundleExpr::ScrollLine(a, d));
            }
            return Ok(BundleExpr::scroll_twist(a, atom));
        }
        self.pos = save;
        self.atom()
    }

    fn atom(&mut self) -> Result<BundleExpr, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let head = self.ident();
        match head.as_str() {
            "L" | "E" | "S2E" => {
                self.expect(b'(')?;
                let alpha = self.int()?;
                self.expect(b',')?;
                let beta = self.int()?;
                self.expect(b')')?;
                let d = SurfaceDivisor::new(alpha, beta);
                Ok(match head.as_str() {
                    "L" => BundleExpr::Line(d),
                    "E" => BundleExpr::TwistedE(d),
                    _ => BundleExpr::SymSquareE(d),
                })
            }
            "IZ" => {
                self.expect(b'(')?;
                let alpha = self.int()?;
                self.expect(b',')?;
                let beta = self.int()?;
                self.expect(b';')?;
                let ell = self.int()?;
                self.expect(b')')?;
                Ok(BundleExpr::IdealTwist(
                    SurfaceDivisor::new(alpha, beta),
                    ell,
                ))
            }
            "ext" => {
                self.expect(b'(')?;
                let sub = self.expr()?;
                self.expect(b',')?;
                let quot = self.expr()?;
                self.expect(b')')?;
                Ok(BundleExpr::extension(sub, quot))
            }
            "" => Err(ParseError {
                pos: start,
                message: "expected an expression (L, E, S2E, IZ, ext, or xi^a*...)".to_string(),
            }),
            other => Err(ParseError {
                pos: start,
                message: format!("unknown constructor '{other}'"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ulrich_scrolls::int;

    fn roundtrip(text: &str) {
        let e = parse(text).expect(text);
        let shown = e.to_string();
        assert_eq!(parse(&shown).expect(&shown), e, "{text} -> {shown}");
    }

    #[test]
    fn parses_every_constructor() {
        assert_eq!(
            parse("L(3,-4)").unwrap(),
            BundleExpr::Line(SurfaceDivisor::new(3, -4))
        );
        assert_eq!(
            parse(" E( -1 , 2 ) ").unwrap(),
            BundleExpr::TwistedE(SurfaceDivisor::new(-1, 2))
        );
        assert_eq!(
            parse("S2E(-3,-8)").unwrap(),
            BundleExpr::SymSquareE(SurfaceDivisor::new(-3, -8))
        );
        assert_eq!(
            parse("IZ(1,4;5)").unwrap(),
            BundleExpr::IdealTwist(SurfaceDivisor::new(1, 4), int(5))
        );
        assert_eq!(
            parse("xi^-2*L(3,8)").unwrap(),
            BundleExpr::ScrollLine(int(-2), SurfaceDivisor::new(3, 8))
        );
        assert_eq!(
            parse("xi^1*E(0,0)").unwrap(),
            BundleExpr::scroll_twist(1, BundleExpr::TwistedE(SurfaceDivisor::zero()))
        );
        assert_eq!(
            parse("ext(L(0,0), xi^1*(L(1,1)))").unwrap(),
            BundleExpr::extension(
                BundleExpr::Line(SurfaceDivisor::zero()),
                BundleExpr::scroll_twist(1, BundleExpr::Line(SurfaceDivisor::new(1, 1)))
            )
        );
    }

    #[test]
    fn display_round_trips() {
        for text in [
            "L(3,-4)",
            "E(-1,2)",
            "S2E(-3,-8)",
            "IZ(1,4;5)",
            "xi^2*L(-1,-3)",
            "xi^-4*S2E(0,1)",
            "ext(ext(L(1,0),L(0,1)),IZ(2,2;3))",
            "xi^1*(ext(L(2,-1),L(-1,3)))",
        ] {
            roundtrip(text);
        }
    }

    #[test]
    fn rejects_malformed_input() {
        for text in [
            "",
            "L(1)",
            "L(1,2",
            "Q(1,2)",
            "xi*L(0,0)",
            "xi^a*L(0,0)",
            "L(1,2)garbage",
            "IZ(1,2,3)",
            "ext(L(1,2))",
        ] {
            assert!(parse(text).is_err(), "{text} should not parse");
        }
    }
}
