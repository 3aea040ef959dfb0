use thiserror::Error;

use super::{is_prime, prime_power_base, DefaultHeight, GroupExpr, Height, HeightType};

/// Largest modulus or prime accepted by the parser.
pub const MAX_PARAMETER: u64 = 1_000_000_000_000;
/// Largest exponent accepted after `^`.
pub const MAX_EXPONENT: u64 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("{value} at byte {offset} is not a prime")]
    NotPrime { offset: usize, value: u64 },
    #[error("number at byte {offset} exceeds {max}")]
    OutOfRange { offset: usize, max: u64 },
}

impl ParseError {
    pub fn offset(&self) -> usize {
        match self {
            ParseError::Syntax { offset, .. }
            | ParseError::NotPrime { offset, .. }
            | ParseError::OutOfRange { offset, .. } => *offset,
        }
    }
}

/// Parses the surface grammar:
///
/// ```text
/// expr     := term ( "x" term )*
/// term     := atom ( "^" nat )?
/// atom     := "R" | "T" | "Z" | "Q" | "0" | "Z(" nat ")" | "Prufer(" prime ")"
///           | "Zp(" prime ")" | "Qp(" prime ")" | "QSub{" heights "}" | "Sol{" heights "}"
///           | "BohrZ" | "BohrR" | "BohrZ0" | "Zhat" | "LP[" lpentries? "]"
/// heights  := entry ("," entry)* ( ";" "default" ("0"|"inf") )? | "default" ("0"|"inf")
/// entry    := prime ":" (nat | "inf")
/// lpentries:= prime ":" atom ( "," prime ":" atom )*
/// ```
///
/// Whitespace between tokens is ignored. Products come out flat.
pub fn parse(text: &str) -> Result<GroupExpr, ParseError> {
    let mut p = Parser { src: text, pos: 0 };
    let mut factors = p.term()?;
    loop {
        p.skip_ws();
        if p.pos == p.src.len() {
            break;
        }
        if !p.eat("x") {
            return Err(p.syntax("'x' or end of input"));
        }
        factors.extend(p.term()?);
    }
    Ok(if factors.len() == 1 {
        factors.pop().unwrap()
    } else {
        GroupExpr::Product(factors)
    })
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

const KEYWORDS: &[&str] = &[
    "BohrZ0", "BohrZ", "BohrR", "Prufer", "QSub", "Qp", "Q", "Sol", "Zhat", "Zp", "Z", "R", "T",
    "LP", "0",
];

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, lit: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &str) -> Result<(), ParseError> {
        if self.eat(lit) {
            Ok(())
        } else {
            Err(self.syntax(&format!("'{lit}'")))
        }
    }

    fn syntax(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        }
    }

    fn nat(&mut self, max: u64) -> Result<(u64, usize), ParseError> {
        self.skip_ws();
        let start = self.pos;
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.syntax("a natural number"));
        }
        let text = &self.src[start..start + digits];
        self.pos += digits;
        match text.parse::<u64>() {
            Ok(v) if v <= max => Ok((v, start)),
            _ => Err(ParseError::OutOfRange { offset: start, max }),
        }
    }

    fn prime(&mut self) -> Result<u64, ParseError> {
        let (v, offset) = self.nat(MAX_PARAMETER)?;
        if is_prime(v) {
            Ok(v)
        } else {
            Err(ParseError::NotPrime { offset, value: v })
        }
    }

    fn term(&mut self) -> Result<Vec<GroupExpr>, ParseError> {
        let atom = self.atom()?;
        if self.eat("^") {
            let (n, offset) = self.nat(MAX_EXPONENT)?;
            if n == 0 {
                return Err(ParseError::Syntax {
                    offset,
                    expected: "an exponent of at least 1".into(),
                });
            }
            Ok(vec![atom; n as usize])
        } else {
            Ok(vec![atom])
        }
    }

    fn keyword(&mut self) -> Option<&'static str> {
        self.skip_ws();
        let rest = self.rest();
        let kw = KEYWORDS.iter().copied().find(|k| rest.starts_with(k))?;
        self.pos += kw.len();
        Some(kw)
    }

    fn atom(&mut self) -> Result<GroupExpr, ParseError> {
        let start = {
            self.skip_ws();
            self.pos
        };
        let Some(kw) = self.keyword() else {
            return Err(self.syntax("a group atom"));
        };
        let g = match kw {
            "R" => GroupExpr::Reals,
            "T" => GroupExpr::Circle,
            "Q" => GroupExpr::Rationals,
            "0" => GroupExpr::Trivial,
            "BohrZ" => GroupExpr::BohrIntegers,
            "BohrR" => GroupExpr::BohrReals,
            "BohrZ0" => GroupExpr::BohrIntegersIdentity,
            "Zhat" => GroupExpr::ProfiniteIntegers,
            "Z" => {
                self.skip_ws();
                if self.rest().starts_with('(') {
                    self.expect("(")?;
                    let (n, offset) = self.nat(MAX_PARAMETER)?;
                    self.expect(")")?;
                    match n {
                        0 => {
                            return Err(ParseError::Syntax {
                                offset,
                                expected: "a modulus of at least 1".into(),
                            })
                        }
                        1 => GroupExpr::Trivial,
                        n => GroupExpr::Cyclic(n),
                    }
                } else {
                    GroupExpr::Integers
                }
            }
            "Prufer" | "Zp" | "Qp" => {
                self.expect("(")?;
                let p = self.prime()?;
                self.expect(")")?;
                match kw {
                    "Prufer" => GroupExpr::Prufer(p),
                    "Zp" => GroupExpr::PadicIntegers(p),
                    _ => GroupExpr::PadicNumbers(p),
                }
            }
            "QSub" | "Sol" => {
                self.expect("{")?;
                let h = self.heights()?;
                self.expect("}")?;
                if kw == "QSub" {
                    GroupExpr::RationalSubgroup(h)
                } else {
                    GroupExpr::Solenoid(h)
                }
            }
            "LP" => self.local_product()?,
            _ => {
                self.pos = start;
                return Err(self.syntax("a group atom"));
            }
        };
        Ok(g)
    }

    fn default_height(&mut self) -> Result<DefaultHeight, ParseError> {
        if self.eat("inf") {
            Ok(DefaultHeight::Infinite)
        } else if self.eat("0") {
            Ok(DefaultHeight::Zero)
        } else {
            Err(self.syntax("'0' or 'inf'"))
        }
    }

    fn heights(&mut self) -> Result<HeightType, ParseError> {
        if self.eat("default") {
            return Ok(HeightType::new(self.default_height()?));
        }
        let mut entries: Vec<(u64, Height, usize)> = Vec::new();
        loop {
            self.skip_ws();
            let offset = self.pos;
            let p = self.prime()?;
            self.expect(":")?;
            let h = if self.eat("inf") {
                Height::Infinite
            } else {
                let (k, _) = self.nat(u32::MAX as u64)?;
                Height::Finite(k as u32)
            };
            if entries.iter().any(|(q, _, _)| *q == p) {
                return Err(ParseError::Syntax {
                    offset,
                    expected: format!("a prime other than {p} (already listed)"),
                });
            }
            entries.push((p, h, offset));
            if !self.eat(",") {
                break;
            }
        }
        let default = if self.eat(";") {
            self.expect("default")?;
            self.default_height()?
        } else {
            DefaultHeight::Zero
        };
        let mut ht = HeightType::new(default);
        for (p, h, _) in entries {
            ht.set(p, h);
        }
        Ok(ht)
    }

    fn local_product(&mut self) -> Result<GroupExpr, ParseError> {
        self.expect("[")?;
        let mut entries: Vec<(u64, GroupExpr)> = Vec::new();
        if self.eat("]") {
            return Ok(GroupExpr::LocalProduct(entries));
        }
        loop {
            self.skip_ws();
            let offset = self.pos;
            let p = self.prime()?;
            if entries.iter().any(|(q, _)| *q == p) {
                return Err(ParseError::Syntax {
                    offset,
                    expected: format!("a prime other than {p} (already listed)"),
                });
            }
            self.expect(":")?;
            self.skip_ws();
            let comp_offset = self.pos;
            let comp = self.atom()?;
            let ok = match &comp {
                GroupExpr::Cyclic(n) => prime_power_base(*n).is_some_and(|(q, _)| q == p),
                GroupExpr::Prufer(q) | GroupExpr::PadicIntegers(q) | GroupExpr::PadicNumbers(q) => {
                    *q == p
                }
                GroupExpr::Trivial => true,
                _ => false,
            };
            if !ok {
                return Err(ParseError::Syntax {
                    offset: comp_offset,
                    expected: format!("a {p}-primary component: Z({p}^k), Prufer({p}), Zp({p}) or Qp({p})"),
                });
            }
            entries.push((p, comp));
            if !self.eat(",") {
                break;
            }
        }
        self.expect("]")?;
        Ok(GroupExpr::LocalProduct(entries))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::GroupExpr as G;

    #[test]
    fn product_with_cyclic() {
        assert_eq!(
            parse("R x Z(4)").unwrap(),
            G::Product(vec![G::Reals, G::Cyclic(4)])
        );
        assert_eq!(
            parse("RxQp(3)").unwrap(),
            G::Product(vec![G::Reals, G::PadicNumbers(3)])
        );
    }

    #[test]
    fn exponent_expands() {
        assert_eq!(parse("R^2").unwrap(), G::Product(vec![G::Reals, G::Reals]));
        assert_eq!(parse("R^1").unwrap(), G::Reals);
        assert_eq!(
            parse("RxZ(2)^2").unwrap(),
            G::Product(vec![G::Reals, G::Cyclic(2), G::Cyclic(2)])
        );
    }

    #[test]
    fn dyadic_rationals() {
        let expected = HeightType::new(DefaultHeight::Zero).with(2, Height::Infinite);
        assert_eq!(
            parse("QSub{2:inf; default 0}").unwrap(),
            G::RationalSubgroup(expected.clone())
        );
        assert_eq!(parse(" QSub { 2 : inf } ").unwrap(), G::RationalSubgroup(expected));
    }

    #[test]
    fn local_product_entries() {
        let g = parse("LP[2:Qp(2), 5:Z(25)]").unwrap();
        assert_eq!(
            g,
            G::LocalProduct(vec![(2, G::PadicNumbers(2)), (5, G::Cyclic(25))])
        );
        assert!(parse("LP[2:Z(9)]").is_err());
        assert!(parse("LP[2:Zp(2), 2:Z(2)]").is_err());
    }

    #[test]
    fn composite_in_prime_slot() {
        assert_eq!(
            parse("Zp(6)"),
            Err(ParseError::NotPrime { offset: 3, value: 6 })
        );
        assert!(matches!(
            parse("QSub{4:1}"),
            Err(ParseError::NotPrime { value: 4, .. })
        ));
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        let err = parse("R x ").unwrap_err();
        assert_eq!(err.offset(), 4);
        let err = parse("R y T").unwrap_err();
        assert_eq!(err.offset(), 2);
        assert!(parse("").is_err());
        assert!(parse("Z(0)").is_err());
        assert!(parse("R^0").is_err());
        assert!(parse("R^65").is_err());
    }

    #[test]
    fn bohr_and_extra_atoms() {
        assert_eq!(
            parse("BohrZ0 x BohrZ x Zhat x 0").unwrap(),
            G::Product(vec![
                G::BohrIntegersIdentity,
                G::BohrIntegers,
                G::ProfiniteIntegers,
                G::Trivial
            ])
        );
    }
}
