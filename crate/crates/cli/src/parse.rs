//! Parsers for the three textual file formats (EM statements, AM
//! elements, annotation functions) plus the small fragments that show
//! up as command-line arguments: formulas, literals, worlds.
//!
//! Errors carry an exact position, and every probability is read as an
//! exact rational: the decimal `0.45` becomes `9/20`, never a float.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use ppredelp::lang::{AmElement, Atom, ElementId, Formula, Literal};

/// A parse or well-formedness failure, located in the input text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

/// The contents of an EM file: interval statements and `oneOf`
/// integrity constraints, in file order.
#[derive(Clone, Debug, Default)]
pub struct EmFile {
    pub statements: Vec<EmStatement>,
    pub one_ofs: Vec<OneOf>,
}

/// One probabilistic statement `formula : p +- eps.`
#[derive(Clone, Debug)]
pub struct EmStatement {
    pub formula: Formula,
    pub p: BigRational,
    pub eps: BigRational,
    pub line: usize,
}

/// One `oneOf{a, b, c}.` constraint.
#[derive(Clone, Debug)]
pub struct OneOf {
    pub atoms: Vec<Atom>,
    pub line: usize,
}

/// One annotation entry `label : formula.`
#[derive(Clone, Debug)]
pub struct AfEntry {
    pub label: ElementId,
    pub formula: Formula,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Number(BigRational),
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Dot,
    Amp,
    Pipe,
    Bang,
    Tilde,
    PlusMinus,
    StrArrow,
    DefArrow,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Number(_) => write!(f, "a number"),
            Tok::LParen => write!(f, "`(`"),
            Tok::RParen => write!(f, "`)`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::LBracket => write!(f, "`[`"),
            Tok::RBracket => write!(f, "`]`"),
            Tok::Comma => write!(f, "`,`"),
            Tok::Colon => write!(f, "`:`"),
            Tok::Dot => write!(f, "`.`"),
            Tok::Amp => write!(f, "`&`"),
            Tok::Pipe => write!(f, "`|`"),
            Tok::Bang => write!(f, "`!`"),
            Tok::Tilde => write!(f, "`~`"),
            Tok::PlusMinus => write!(f, "`+-`"),
            Tok::StrArrow => write!(f, "`<-`"),
            Tok::DefArrow => write!(f, "`-<`"),
        }
    }
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer { src: src.as_bytes(), pos: 0, line: 1, col: 1 }
    }

    fn peek_byte(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek_byte()?;
        self.pos += 1;
        if b == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(b)
    }

    fn skip_trivia(&mut self) {
        while let Some(b) = self.peek_byte() {
            if b == b'#' {
                while self.peek_byte().is_some_and(|b| b != b'\n') {
                    self.bump();
                }
            } else if b.is_ascii_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next_tok(&mut self) -> Result<Option<(Tok, usize, usize)>, ParseError> {
        self.skip_trivia();
        let (line, col) = (self.line, self.col);
        let Some(b) = self.peek_byte() else {
            return Ok(None);
        };
        let tok = match b {
            b'(' => {
                self.bump();
                Tok::LParen
            }
            b')' => {
                self.bump();
                Tok::RParen
            }
            b'{' => {
                self.bump();
                Tok::LBrace
            }
            b'}' => {
                self.bump();
                Tok::RBrace
            }
            b'[' => {
                self.bump();
                Tok::LBracket
            }
            b']' => {
                self.bump();
                Tok::RBracket
            }
            b',' => {
                self.bump();
                Tok::Comma
            }
            b':' => {
                self.bump();
                Tok::Colon
            }
            b'&' => {
                self.bump();
                Tok::Amp
            }
            b'|' => {
                self.bump();
                Tok::Pipe
            }
            b'!' => {
                self.bump();
                Tok::Bang
            }
            b'~' => {
                self.bump();
                Tok::Tilde
            }
            b'+' => {
                self.bump();
                if self.peek_byte() == Some(b'-') {
                    self.bump();
                    Tok::PlusMinus
                } else {
                    return Err(ParseError::new(line, col, "expected `+-`"));
                }
            }
            b'<' => {
                self.bump();
                if self.peek_byte() == Some(b'-') {
                    self.bump();
                    Tok::StrArrow
                } else {
                    return Err(ParseError::new(line, col, "expected `<-`"));
                }
            }
            b'-' => {
                self.bump();
                if self.peek_byte() == Some(b'<') {
                    self.bump();
                    Tok::DefArrow
                } else {
                    return Err(ParseError::new(line, col, "expected `-<`"));
                }
            }
            b'.' => {
                self.bump();
                Tok::Dot
            }
            b'0'..=b'9' => self.lex_number(line, col)?,
            b if b.is_ascii_alphabetic() || b == b'_' => {
                let mut s = String::new();
                while let Some(b) = self.peek_byte() {
                    if b.is_ascii_alphanumeric() || b == b'_' {
                        s.push(b as char);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(s)
            }
            other => {
                return Err(ParseError::new(
                    line,
                    col,
                    format!("unexpected character `{}`", other as char),
                ));
            }
        };
        Ok(Some((tok, line, col)))
    }

    fn lex_digits(&mut self) -> String {
        let mut s = String::new();
        while let Some(b) = self.peek_byte() {
            if b.is_ascii_digit() {
                s.push(b as char);
                self.bump();
            } else {
                break;
            }
        }
        s
    }

    fn lex_number(&mut self, line: usize, col: usize) -> Result<Tok, ParseError> {
        let int = self.lex_digits();
        let mut frac = String::new();
        if self.peek_byte() == Some(b'.')
            && self.src.get(self.pos + 1).is_some_and(u8::is_ascii_digit)
        {
            self.bump();
            frac = self.lex_digits();
        }
        let mut value = digits_to_rational(&int);
        if !frac.is_empty() {
            value = value + digits_to_rational(&frac) / pow10(frac.len());
        }
        if self.peek_byte() == Some(b'/') {
            if !frac.is_empty() {
                return Err(ParseError::new(line, col, "a fraction needs integer parts"));
            }
            self.bump();
            let d = self.lex_digits();
            if d.is_empty() {
                return Err(ParseError::new(line, col, "expected digits after `/`"));
            }
            let d = digits_to_rational(&d);
            if d.is_zero() {
                return Err(ParseError::new(line, col, "denominator must not be zero"));
            }
            value /= d;
        }
        Ok(Tok::Number(value))
    }
}

fn digits_to_rational(digits: &str) -> BigRational {
    let ten = BigRational::from_integer(10.into());
    let mut v = BigRational::zero();
    for c in digits.chars() {
        let d = BigRational::from_integer(i64::from(c as u8 - b'0').into());
        v = v * &ten + d;
    }
    v
}

fn pow10(n: usize) -> BigRational {
    let ten = BigRational::from_integer(10.into());
    let mut v = BigRational::one();
    for _ in 0..n {
        v *= &ten;
    }
    v
}

struct Tokens {
    toks: Vec<(Tok, usize, usize)>,
    idx: usize,
    end_line: usize,
    end_col: usize,
}

impl Tokens {
    fn lex(src: &str) -> Result<Self, ParseError> {
        let mut lx = Lexer::new(src);
        let mut toks = Vec::new();
        while let Some(t) = lx.next_tok()? {
            toks.push(t);
        }
        Ok(Tokens { toks, idx: 0, end_line: lx.line, end_col: lx.col })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|(t, _, _)| t)
    }

    fn pos(&self) -> (usize, usize) {
        self.toks
            .get(self.idx)
            .map(|&(_, l, c)| (l, c))
            .unwrap_or((self.end_line, self.end_col))
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.idx).map(|(t, _, _)| t.clone());
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok) -> Result<(), ParseError> {
        let (line, col) = self.pos();
        match self.peek() {
            Some(t) if t == want => {
                self.bump();
                Ok(())
            }
            Some(t) => Err(ParseError::new(line, col, format!("expected {want}, found {t}"))),
            None => Err(ParseError::new(line, col, format!("expected {want}, found end of input"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize, usize), ParseError> {
        let (line, col) = self.pos();
        match self.peek() {
            Some(Tok::Ident(_)) => {
                let Some(Tok::Ident(s)) = self.bump() else { unreachable!() };
                Ok((s, line, col))
            }
            Some(t) => Err(ParseError::new(line, col, format!("expected {what}, found {t}"))),
            None => {
                Err(ParseError::new(line, col, format!("expected {what}, found end of input")))
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<(BigRational, usize, usize), ParseError> {
        let (line, col) = self.pos();
        match self.peek() {
            Some(Tok::Number(_)) => {
                let Some(Tok::Number(n)) = self.bump() else { unreachable!() };
                Ok((n, line, col))
            }
            Some(t) => Err(ParseError::new(line, col, format!("expected {what}, found {t}"))),
            None => {
                Err(ParseError::new(line, col, format!("expected {what}, found end of input")))
            }
        }
    }

    fn at_end(&self) -> bool {
        self.idx == self.toks.len()
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => {
                let (line, col) = self.pos();
                Err(ParseError::new(line, col, format!("expected end of input, found {t}")))
            }
        }
    }
}

fn lower_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_ascii_lowercase())
        && name.chars().all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

fn atom_name(name: &str, line: usize, col: usize) -> Result<Atom, ParseError> {
    if lower_name(name) {
        Ok(Atom::prop(name))
    } else {
        Err(ParseError::new(
            line,
            col,
            format!("`{name}` is not a valid atom (lowercase letter, then lowercase letters, digits, `_`)"),
        ))
    }
}

fn element_label(label: &str, line: usize, col: usize) -> Result<ElementId, ParseError> {
    if lower_name(label) {
        Ok(ElementId::new(label))
    } else {
        Err(ParseError::new(
            line,
            col,
            format!("`{label}` is not a valid label (lowercase letter, then lowercase letters, digits, `_`)"),
        ))
    }
}

fn parse_formula(toks: &mut Tokens) -> Result<Formula, ParseError> {
    parse_or(toks)
}

fn parse_or(toks: &mut Tokens) -> Result<Formula, ParseError> {
    let mut f = parse_and(toks)?;
    while toks.peek() == Some(&Tok::Pipe) {
        toks.bump();
        let rhs = parse_and(toks)?;
        f = Formula::or(f, rhs);
    }
    Ok(f)
}

fn parse_and(toks: &mut Tokens) -> Result<Formula, ParseError> {
    let mut f = parse_unary(toks)?;
    while toks.peek() == Some(&Tok::Amp) {
        toks.bump();
        let rhs = parse_unary(toks)?;
        f = Formula::and(f, rhs);
    }
    Ok(f)
}

fn parse_unary(toks: &mut Tokens) -> Result<Formula, ParseError> {
    let (line, col) = toks.pos();
    match toks.peek() {
        Some(Tok::Bang) => {
            toks.bump();
            Ok(Formula::not(parse_unary(toks)?))
        }
        Some(Tok::LParen) => {
            toks.bump();
            let f = parse_formula(toks)?;
            toks.expect(&Tok::RParen)?;
            Ok(f)
        }
        Some(Tok::Ident(s)) if s == "true" => {
            toks.bump();
            Ok(Formula::True)
        }
        Some(Tok::Ident(s)) if s == "false" => {
            toks.bump();
            Ok(Formula::False)
        }
        Some(Tok::Ident(_)) => {
            let (name, line, col) = toks.ident("an atom")?;
            Ok(Formula::Atom(atom_name(&name, line, col)?))
        }
        Some(t) => Err(ParseError::new(line, col, format!("expected a formula, found {t}"))),
        None => Err(ParseError::new(line, col, "expected a formula, found end of input")),
    }
}

fn parse_probability(toks: &mut Tokens) -> Result<(BigRational, BigRational), ParseError> {
    let (p, line, col) = toks.number("a probability")?;
    if p < BigRational::zero() || p > BigRational::one() {
        return Err(ParseError::new(line, col, "probability must lie in [0, 1]"));
    }
    toks.expect(&Tok::PlusMinus)?;
    let (eps, eline, ecol) = toks.number("a margin")?;
    let one_minus = BigRational::one() - &p;
    let cap = if p <= one_minus { p.clone() } else { one_minus };
    if eps < BigRational::zero() || eps > cap {
        return Err(ParseError::new(
            eline,
            ecol,
            format!("margin must lie in [0, min(p, 1 - p)]; here that is [0, {cap}]"),
        ));
    }
    Ok((p, eps))
}

/// Parses an EM file: `formula : p +- eps.` statements and
/// `oneOf{a, b, c}.` constraints, with `#` comments.
pub fn parse_em(src: &str) -> Result<EmFile, ParseError> {
    let mut toks = Tokens::lex(src)?;
    let mut file = EmFile::default();
    while !toks.at_end() {
        let (line, _) = toks.pos();
        if toks.peek() == Some(&Tok::Ident("oneOf".to_string())) {
            toks.bump();
            toks.expect(&Tok::LBrace)?;
            let mut atoms = Vec::new();
            loop {
                let (name, l, c) = toks.ident("an atom")?;
                atoms.push(atom_name(&name, l, c)?);
                if toks.peek() == Some(&Tok::Comma) {
                    toks.bump();
                } else {
                    break;
                }
            }
            toks.expect(&Tok::RBrace)?;
            toks.expect(&Tok::Dot)?;
            file.one_ofs.push(OneOf { atoms, line });
        } else {
            let formula = parse_formula(&mut toks)?;
            toks.expect(&Tok::Colon)?;
            let (p, eps) = parse_probability(&mut toks)?;
            toks.expect(&Tok::Dot)?;
            file.statements.push(EmStatement { formula, p, eps, line });
        }
    }
    Ok(file)
}

fn parse_literal(toks: &mut Tokens) -> Result<Literal, ParseError> {
    let negated = toks.peek() == Some(&Tok::Tilde);
    if negated {
        toks.bump();
    }
    let (name, line, col) = toks.ident("an atom")?;
    let atom = atom_name(&name, line, col)?;
    Ok(if negated { Literal::neg(atom) } else { Literal::pos(atom) })
}

fn parse_body(toks: &mut Tokens) -> Result<Vec<Literal>, ParseError> {
    let mut body = vec![parse_literal(toks)?];
    while toks.peek() == Some(&Tok::Comma) {
        toks.bump();
        body.push(parse_literal(toks)?);
    }
    Ok(body)
}

fn parse_element(toks: &mut Tokens) -> Result<AmElement, ParseError> {
    let (eline, ecol) = toks.pos();
    toks.expect(&Tok::LBracket)?;
    let (label, lline, lcol) = toks.ident("a label")?;
    element_label(&label, lline, lcol)?;
    toks.expect(&Tok::RBracket)?;
    let head = parse_literal(toks)?;
    let element = match toks.peek() {
        Some(Tok::Dot) => AmElement::fact(&label, head),
        Some(Tok::StrArrow) => {
            toks.bump();
            let body = parse_body(toks)?;
            AmElement::strict_rule(&label, head, body)
                .map_err(|e| ParseError::new(eline, ecol, e.to_string()))?
        }
        Some(Tok::DefArrow) => {
            toks.bump();
            if toks.peek() == Some(&Tok::Dot) {
                AmElement::presumption(&label, head)
            } else {
                let body = parse_body(toks)?;
                AmElement::defeasible_rule(&label, head, body)
                    .map_err(|e| ParseError::new(eline, ecol, e.to_string()))?
            }
        }
        _ => {
            let (line, col) = toks.pos();
            return Err(ParseError::new(line, col, "expected `.`, `<-` or `-<` after the head"));
        }
    };
    toks.expect(&Tok::Dot)?;
    Ok(element)
}

/// Parses an AM file: one element per statement, each of the forms
/// `[label] lit.`, `[label] lit -< .`, `[label] h <- b1, b2.`,
/// `[label] h -< b1, b2.`.
pub fn parse_am(src: &str) -> Result<Vec<AmElement>, ParseError> {
    let mut toks = Tokens::lex(src)?;
    let mut elements: Vec<AmElement> = Vec::new();
    while !toks.at_end() {
        let (line, col) = toks.pos();
        let e = parse_element(&mut toks)?;
        if elements.iter().any(|prev| prev.id() == e.id()) {
            return Err(ParseError::new(line, col, format!("duplicate label `{}`", e.id())));
        }
        elements.push(e);
    }
    Ok(elements)
}

/// Parses an annotation-function file: `label : formula.` entries.
/// Duplicate labels are rejected here; totality against an AM is
/// checked when the two files are combined.
pub fn parse_af(src: &str) -> Result<Vec<AfEntry>, ParseError> {
    let mut toks = Tokens::lex(src)?;
    let mut entries: Vec<AfEntry> = Vec::new();
    while !toks.at_end() {
        let (line, col) = toks.pos();
        let (label, lline, lcol) = toks.ident("a label")?;
        let label = element_label(&label, lline, lcol)?;
        toks.expect(&Tok::Colon)?;
        let formula = parse_formula(&mut toks)?;
        toks.expect(&Tok::Dot)?;
        if entries.iter().any(|prev| prev.label == label) {
            return Err(ParseError::new(line, col, format!("duplicate label `{label}`")));
        }
        entries.push(AfEntry { label, formula, line });
    }
    Ok(entries)
}

fn fragment<T>(
    src: &str,
    parse: impl FnOnce(&mut Tokens) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let mut toks = Tokens::lex(src)?;
    let value = parse(&mut toks)?;
    if toks.peek() == Some(&Tok::Dot) {
        toks.bump();
    }
    toks.expect_end()?;
    Ok(value)
}

/// Parses a formula given on the command line; a trailing `.` is
/// allowed but not required.
pub fn parse_formula_str(src: &str) -> Result<Formula, ParseError> {
    fragment(src, parse_formula)
}

/// Parses a literal given on the command line.
pub fn parse_literal_str(src: &str) -> Result<Literal, ParseError> {
    fragment(src, parse_literal)
}

/// Parses a single AM element given on the command line.
pub fn parse_element_str(src: &str) -> Result<AmElement, ParseError> {
    fragment(src, parse_element)
}

/// Parses a world description: a comma-separated list of the atoms
/// that hold, or `empty` for the world in which every atom is false.
pub fn parse_world_str(src: &str) -> Result<Vec<Atom>, ParseError> {
    if src.trim() == "empty" {
        return Ok(Vec::new());
    }
    fragment(src, |toks| {
        let mut atoms = Vec::new();
        loop {
            let (name, l, c) = toks.ident("an atom")?;
            atoms.push(atom_name(&name, l, c)?);
            if toks.peek() == Some(&Tok::Comma) {
                toks.bump();
            } else {
                break;
            }
        }
        Ok(atoms)
    })
}
