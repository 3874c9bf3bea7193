//! Text form of polynomials, shared by the CLI and report files.
//!
//! Grammar (ASCII, spaces allowed between tokens):
//!
//! ```text
//! poly   := term ('+' term)* ;
//! term   := coeff | coeff '*' mono | mono ;
//! mono   := 'T' | 'T' '^' uint ;
//! coeff  := uint | '(' uint ('+' uint '*' 'i')? ')' ;
//! ```
//!
//! Coefficients are reduced modulo the characteristic. Repeated powers
//! accumulate, so parsing is total on grammatical input. Canonical output is
//! descending powers, zero terms omitted, unit coefficients elided, extension
//! coefficients with a nonzero `x`-part parenthesized as `(a+b*i)`; the zero
//! polynomial prints as `0`. `format ∘ parse` is the identity on canonical
//! text and `parse ∘ format` is the identity on values.

use crate::field::{FieldCtx, Fq2Elem, FqElem};
use super::{BasePoly, ExtPoly, Poly, PolyError};

/// Upper bound on accepted exponents — far above any degree the crate can
/// handle, low enough to keep hostile input from allocating absurd vectors.
const MAX_EXPONENT: u64 = 1 << 16;

/// Parses base-field polynomial text. Parenthesized coefficients are
/// accepted only when their `i`-part is absent or reduces to zero.
pub fn parse_base_poly(ctx: &FieldCtx, text: &str) -> Result<BasePoly, PolyError> {
    let terms = parse_terms(text)?;
    let mut coeffs: Vec<FqElem> = Vec::new();
    for term in terms {
        let c = match term.coeff {
            RawCoeff::Unit => ctx.base(1),
            RawCoeff::Plain(v) => ctx.base(v),
            RawCoeff::Pair { re, im, im_pos, .. } => {
                if ctx.base(im).0 != 0 {
                    return Err(PolyError::Syntax {
                        pos: im_pos,
                        msg: "imaginary part in base-field polynomial".into(),
                    });
                }
                ctx.base(re)
            }
        };
        accumulate(&mut coeffs, term.power, c, |a, b| ctx.base_add(a, b), FqElem(0));
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Parses extension-field polynomial text.
pub fn parse_ext_poly(ctx: &FieldCtx, text: &str) -> Result<ExtPoly, PolyError> {
    let terms = parse_terms(text)?;
    let mut coeffs: Vec<Fq2Elem> = Vec::new();
    for term in terms {
        let c = match term.coeff {
            RawCoeff::Unit => ctx.ext(1, 0),
            RawCoeff::Plain(v) => ctx.ext(v, 0),
            RawCoeff::Pair { re, im, .. } => ctx.ext(re, im),
        };
        accumulate(&mut coeffs, term.power, c, |a, b| ctx.ext_add(a, b), ctx.ext(0, 0));
    }
    Ok(Poly::from_coeffs(coeffs))
}

/// Canonical text for a base polynomial.
pub fn format_base_poly(f: &BasePoly) -> String {
    format_impl(f.coeffs().iter().map(|c| (c.0, 0)).collect())
}

/// Canonical text for an extension polynomial.
pub fn format_ext_poly(f: &ExtPoly) -> String {
    format_impl(f.coeffs().iter().map(|c| (c.re.0, c.im.0)).collect())
}

fn format_impl(coeffs: Vec<(u16, u16)>) -> String {
    let mut pieces: Vec<String> = Vec::new();
    for (k, &(re, im)) in coeffs.iter().enumerate().rev() {
        if re == 0 && im == 0 {
            continue;
        }
        let mono = match k {
            0 => None,
            1 => Some("T".to_string()),
            _ => Some(format!("T^{k}")),
        };
        let coeff = if im != 0 {
            Some(format!("({re}+{im}*i)"))
        } else if re == 1 && mono.is_some() {
            None
        } else {
            Some(format!("{re}"))
        };
        pieces.push(match (coeff, mono) {
            (Some(c), Some(m)) => format!("{c}*{m}"),
            (Some(c), None) => c,
            (None, Some(m)) => m,
            (None, None) => unreachable!("term with neither coefficient nor monomial"),
        });
    }
    if pieces.is_empty() {
        "0".to_string()
    } else {
        pieces.join("+")
    }
}

fn accumulate<C: Copy>(
    coeffs: &mut Vec<C>,
    power: usize,
    c: C,
    add: impl Fn(C, C) -> C,
    zero: C,
) {
    if coeffs.len() <= power {
        coeffs.resize(power + 1, zero);
    }
    coeffs[power] = add(coeffs[power], c);
}

// ---- Recursive-descent parser over a byte cursor ----

enum RawCoeff {
    /// No explicit coefficient (bare monomial).
    Unit,
    Plain(u64),
    Pair { re: u64, im: u64, im_pos: usize },
}

struct RawTerm {
    coeff: RawCoeff,
    power: usize,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(text: &'a str) -> Self {
        Cursor { bytes: text.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.bytes.get(self.pos) == Some(&b' ') {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn expect(&mut self, want: u8, what: &str) -> Result<(), PolyError> {
        match self.peek() {
            Some(b) if b == want => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.error(format!("expected {what}"))),
        }
    }

    fn error(&self, msg: String) -> PolyError {
        PolyError::Syntax { pos: self.pos, msg }
    }

    fn uint(&mut self) -> Result<(u64, usize), PolyError> {
        let start_ok = matches!(self.peek(), Some(b) if b.is_ascii_digit());
        if !start_ok {
            return Err(self.error("expected integer".into()));
        }
        let start = self.pos;
        let mut v: u64 = 0;
        while let Some(b) = self.bytes.get(self.pos).copied() {
            if !b.is_ascii_digit() {
                break;
            }
            v = v
                .checked_mul(10)
                .and_then(|v| v.checked_add((b - b'0') as u64))
                .ok_or(PolyError::CoefficientOutOfRange { pos: start })?;
            self.pos += 1;
        }
        Ok((v, start))
    }
}

fn parse_terms(text: &str) -> Result<Vec<RawTerm>, PolyError> {
    let mut cur = Cursor::new(text);
    let mut terms = Vec::new();
    loop {
        terms.push(parse_term(&mut cur)?);
        match cur.peek() {
            None => return Ok(terms),
            Some(b'+') => {
                cur.bump();
            }
            Some(_) => return Err(cur.error("expected '+' or end of input".into())),
        }
    }
}

fn parse_term(cur: &mut Cursor) -> Result<RawTerm, PolyError> {
    match cur.peek() {
        Some(b'T') => {
            let power = parse_mono(cur)?;
            Ok(RawTerm { coeff: RawCoeff::Unit, power })
        }
        Some(b'(') => {
            cur.bump();
            let (re, re_pos) = cur.uint()?;
            let coeff = if cur.peek() == Some(b'+') {
                cur.bump();
                let (im, im_pos) = cur.uint()?;
                cur.expect(b'*', "'*' before i")?;
                cur.expect(b'i', "'i'")?;
                RawCoeff::Pair { re, im, im_pos }
            } else {
                RawCoeff::Pair { re, im: 0, im_pos: re_pos }
            };
            cur.expect(b')', "')'")?;
            parse_term_tail(cur, coeff)
        }
        Some(b) if b.is_ascii_digit() => {
            let (v, _) = cur.uint()?;
            parse_term_tail(cur, RawCoeff::Plain(v))
        }
        _ => Err(cur.error("expected term".into())),
    }
}

/// After a coefficient: either `'*' mono` or nothing (constant term).
fn parse_term_tail(cur: &mut Cursor, coeff: RawCoeff) -> Result<RawTerm, PolyError> {
    if cur.peek() == Some(b'*') {
        cur.bump();
        if cur.peek() != Some(b'T') {
            return Err(cur.error("expected 'T' after '*'".into()));
        }
        let power = parse_mono(cur)?;
        Ok(RawTerm { coeff, power })
    } else {
        Ok(RawTerm { coeff, power: 0 })
    }
}

fn parse_mono(cur: &mut Cursor) -> Result<usize, PolyError> {
    cur.expect(b'T', "'T'")?;
    if cur.peek() == Some(b'^') {
        cur.bump();
        let (e, pos) = cur.uint()?;
        if e > MAX_EXPONENT {
            return Err(PolyError::Syntax { pos, msg: "exponent too large".into() });
        }
        Ok(e as usize)
    } else {
        Ok(1)
    }
}
