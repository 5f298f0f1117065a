//! Lexer and recursive-descent parser for `.hott` surface files.
//!
//! ```text
//! decl   ::= ("def" | "goal") name binder* ":" term ":=" term
//!          | "axiom" name binder* ":" term
//! binder ::= "(" name+ ":" term ")"
//! term   ::= "fun" name+ "=>" term
//!          | binder+ "->" term | binder+ "*" term
//!          | prod ("->" term)?
//! prod   ::= app ("*" prod)?
//! app    ::= head atom*
//! ```
//! A `--|` comment directly before a declaration becomes its provenance tag;
//! any other `--` comment runs to end of line.

use std::sync::Arc;

use crate::syntax::{DeclKind, Declaration};
use crate::syntax::{Diagnostic, Name, SBinder, Span, Surface, SurfaceDecl, SurfaceTerm};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(Name),
    Universe(u32),
    Num(u64),
    ZeroTwo,
    OneTwo,
    Doc(String),
    LParen,
    RParen,
    LBracket,
    RBracket,
    Comma,
    Colon,
    Define,
    FatArrow,
    Arrow,
    Star,
    Dot,
    Eof,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    span: Span,
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(src: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let end_of = |i: usize| chars.get(i).map_or(src.len(), |(o, _)| *o);
    let mut i = 0;
    while i < chars.len() {
        let (start, c) = chars[i];
        let next = chars.get(i + 1).map(|(_, c)| *c);
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '-' && next == Some('-') {
            let doc = chars.get(i + 2).map(|(_, c)| *c) == Some('|');
            let mut j = i;
            while j < chars.len() && chars[j].1 != '\n' {
                j += 1;
            }
            if doc {
                let text = src[start + 3..end_of(j)].trim();
                out.push(Token {
                    tok: Tok::Doc(text.to_string()),
                    span: Span::new(start, end_of(j)),
                });
            }
            i = j;
            continue;
        }
        let single = |tok| Some((tok, 1));
        let sym = match c {
            '(' => single(Tok::LParen),
            ')' => single(Tok::RParen),
            '[' => single(Tok::LBracket),
            ']' => single(Tok::RBracket),
            ',' => single(Tok::Comma),
            '.' => single(Tok::Dot),
            '*' | '×' => single(Tok::Star),
            '→' => single(Tok::Arrow),
            '⇒' => single(Tok::FatArrow),
            ':' if next == Some('=') => Some((Tok::Define, 2)),
            ':' => single(Tok::Colon),
            '=' if next == Some('>') => Some((Tok::FatArrow, 2)),
            '-' if next == Some('>') => Some((Tok::Arrow, 2)),
            _ => None,
        };
        if let Some((tok, len)) = sym {
            out.push(Token {
                tok,
                span: Span::new(start, end_of(i + len)),
            });
            i += len;
            continue;
        }
        if c.is_ascii_digit() {
            let mut j = i;
            while j < chars.len() && chars[j].1.is_ascii_digit() {
                j += 1;
            }
            let digits = &src[start..end_of(j)];
            // `0₂`, `1₂` and their ASCII spellings `0_2`, `1_2`
            let tail: String = chars[j..].iter().take(2).map(|(_, c)| *c).collect();
            let two = if tail.starts_with('₂') {
                Some(1)
            } else if tail == "_2" {
                Some(2)
            } else {
                None
            };
            if let Some(extra) = two {
                let tok = match digits {
                    "0" => Tok::ZeroTwo,
                    "1" => Tok::OneTwo,
                    _ => {
                        return Err(Diagnostic::error(
                            "syntax",
                            format!("`{digits}` is not an element of Two"),
                            Span::new(start, end_of(j + extra)),
                        ))
                    }
                };
                out.push(Token {
                    tok,
                    span: Span::new(start, end_of(j + extra)),
                });
                i = j + extra;
                continue;
            }
            let n = digits.parse::<u64>().map_err(|_| {
                Diagnostic::error("syntax", "numeral too large", Span::new(start, end_of(j)))
            })?;
            out.push(Token {
                tok: Tok::Num(n),
                span: Span::new(start, end_of(j)),
            });
            i = j;
            continue;
        }
        if is_ident_start(c) {
            let mut j = i + 1;
            while j < chars.len() {
                let cj = chars[j].1;
                if is_ident_char(cj) {
                    j += 1;
                } else if cj == '-'
                    && chars
                        .get(j + 1)
                        .is_some_and(|(_, n)| is_ident_char(*n) && *n != '\'')
                {
                    j += 2;
                } else {
                    break;
                }
            }
            let text = &src[start..end_of(j)];
            let tok = match text.strip_prefix('U') {
                Some(d) if !d.is_empty() && d.chars().all(|c| c.is_ascii_digit()) => {
                    match d.parse::<u32>() {
                        Ok(n) => Tok::Universe(n),
                        Err(_) => {
                            return Err(Diagnostic::error(
                                "syntax",
                                "universe index too large",
                                Span::new(start, end_of(j)),
                            ))
                        }
                    }
                }
                _ => Tok::Ident(Arc::from(text)),
            };
            out.push(Token {
                tok,
                span: Span::new(start, end_of(j)),
            });
            i = j;
            continue;
        }
        let tok = match c {
            'λ' => Tok::Ident(Arc::from("fun")),
            '★' => Tok::Ident(Arc::from("star")),
            _ => {
                return Err(Diagnostic::error(
                    "syntax",
                    format!("unexpected character `{c}`"),
                    Span::new(start, end_of(i + 1)),
                ))
            }
        };
        out.push(Token {
            tok,
            span: Span::new(start, end_of(i + 1)),
        });
        i += 1;
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}

const KEYWORDS: &[&str] = &[
    "def", "axiom", "goal", "fun", "Id", "refl", "fst", "snd", "J", "Nat", "suc", "natrec",
    "Empty", "absurd", "Unit", "star", "Two", "twoelim",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    src: &'a str,
}

type PResult<T> = Result<T, Diagnostic>;

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn prev_end(&self) -> usize {
        if self.pos == 0 {
            0
        } else {
            self.toks[self.pos - 1].span.end
        }
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(n) if &**n == kw)
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Eof => "end of input".to_string(),
            _ => {
                let s = self.span();
                format!("`{}`", &self.src[s.start..s.end])
            }
        }
    }

    fn unexpected(&self, what: &str) -> Diagnostic {
        if *self.peek() == Tok::Eof {
            Diagnostic::error(
                "unterminated",
                format!("expected {what}, found end of input"),
                self.span(),
            )
        } else {
            Diagnostic::error(
                "syntax",
                format!("expected {what}, found {}", self.describe()),
                self.span(),
            )
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> PResult<Span> {
        if *self.peek() == tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(what))
        }
    }

    fn name(&mut self) -> PResult<(Name, Span)> {
        match self.peek().clone() {
            Tok::Ident(n) if !is_keyword(&n) => {
                let sp = self.bump().span;
                Ok((n, sp))
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn at_name(&self) -> bool {
        matches!(self.peek(), Tok::Ident(n) if !is_keyword(n))
    }

    fn decl(&mut self, provenance: String) -> PResult<SurfaceDecl> {
        let start = self.span().start;
        let kind = match self.peek() {
            Tok::Ident(n) if &**n == "def" => DeclKind::Def,
            Tok::Ident(n) if &**n == "axiom" => DeclKind::Axiom,
            Tok::Ident(n) if &**n == "goal" => DeclKind::Goal,
            _ => return Err(self.unexpected("`def`, `axiom` or `goal`")),
        };
        self.bump();
        let (name, _) = self.name()?;
        let mut binders = Vec::new();
        while *self.peek() == Tok::LParen {
            binders.push(self.binder()?);
        }
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.term()?;
        let body = if kind == DeclKind::Axiom {
            None
        } else {
            self.expect(Tok::Define, "`:=`")?;
            if self.at_decl_start() || *self.peek() == Tok::Eof {
                let at = self.prev_end();
                return Err(Diagnostic::error(
                    "syntax",
                    format!("missing body for `{name}`"),
                    Span::new(at, self.span().start.max(at)),
                ));
            }
            Some(self.term()?)
        };
        let span = Span::new(start, self.prev_end());
        let ty = wrap_binders(&binders, ty, true);
        let body = body.map(|b| {
            let names: Vec<(Name, Span)> = binders.iter().flat_map(|b| b.names.clone()).collect();
            if names.is_empty() {
                b
            } else {
                let sp = b.span;
                SurfaceTerm {
                    node: Surface::Lam(names, Box::new(b)),
                    span: sp,
                }
            }
        });
        Ok(Declaration {
            kind,
            name,
            ty,
            body,
            provenance,
            span,
        })
    }

    fn at_decl_start(&self) -> bool {
        matches!(self.peek(), Tok::Ident(n) if matches!(&**n, "def" | "axiom" | "goal"))
            || matches!(self.peek(), Tok::Doc(_))
    }

    fn binder(&mut self) -> PResult<SBinder> {
        self.expect(Tok::LParen, "`(`")?;
        let mut names = vec![self.name()?];
        while self.at_name() {
            names.push(self.name()?);
        }
        self.expect(Tok::Colon, "`:`")?;
        let ty = self.term()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(SBinder {
            names,
            ty: Box::new(ty),
        })
    }

    /// Tries to read `binder+` followed by `->` or `*`; rewinds on failure.
    fn try_binder_group(&mut self) -> Option<(Vec<SBinder>, bool)> {
        let save = self.pos;
        let mut bs = Vec::new();
        while *self.peek() == Tok::LParen && self.binder_lookahead() {
            match self.binder() {
                Ok(b) => bs.push(b),
                Err(_) => {
                    self.pos = save;
                    return None;
                }
            }
        }
        if bs.is_empty() {
            self.pos = save;
            return None;
        }
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                Some((bs, true))
            }
            Tok::Star => {
                self.bump();
                Some((bs, false))
            }
            _ => {
                self.pos = save;
                None
            }
        }
    }

    fn binder_lookahead(&self) -> bool {
        let mut k = 1;
        let mut saw = false;
        while let Tok::Ident(n) = self.peek_at(k) {
            if is_keyword(n) {
                return false;
            }
            saw = true;
            k += 1;
        }
        saw && *self.peek_at(k) == Tok::Colon
    }

    fn term(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span().start;
        if self.is_kw("fun") {
            self.bump();
            let mut names = vec![self.name()?];
            while self.at_name() {
                names.push(self.name()?);
            }
            self.expect(Tok::FatArrow, "`=>`")?;
            let body = self.term()?;
            return Ok(SurfaceTerm {
                node: Surface::Lam(names, Box::new(body)),
                span: Span::new(start, self.prev_end()),
            });
        }
        if let Some((bs, is_pi)) = self.try_binder_group() {
            let body = self.term()?;
            let node = if is_pi {
                Surface::Pi(bs, Box::new(body))
            } else {
                Surface::Sigma(bs, Box::new(body))
            };
            return Ok(SurfaceTerm {
                node,
                span: Span::new(start, self.prev_end()),
            });
        }
        let lhs = self.prod()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.term()?;
            return Ok(SurfaceTerm {
                node: Surface::Arrow(Box::new(lhs), Box::new(rhs)),
                span: Span::new(start, self.prev_end()),
            });
        }
        Ok(lhs)
    }

    fn prod(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span().start;
        let lhs = self.app()?;
        if *self.peek() == Tok::Star {
            self.bump();
            let rhs = if let Some((bs, is_pi)) = self.try_binder_group() {
                let s2 = bs[0].names[0].1.start;
                let body = self.term()?;
                let node = if is_pi {
                    Surface::Pi(bs, Box::new(body))
                } else {
                    Surface::Sigma(bs, Box::new(body))
                };
                SurfaceTerm {
                    node,
                    span: Span::new(s2, self.prev_end()),
                }
            } else {
                self.prod()?
            };
            return Ok(SurfaceTerm {
                node: Surface::Product(Box::new(lhs), Box::new(rhs)),
                span: Span::new(start, self.prev_end()),
            });
        }
        Ok(lhs)
    }

    fn at_atom_start(&self) -> bool {
        match self.peek() {
            Tok::Ident(n) => {
                !is_keyword(n)
                    || matches!(
                        &**n,
                        "Nat"
                            | "Empty"
                            | "Unit"
                            | "Two"
                            | "star"
                            | "Id"
                            | "refl"
                            | "fst"
                            | "snd"
                            | "suc"
                            | "J"
                            | "natrec"
                            | "absurd"
                            | "twoelim"
                    )
            }
            Tok::Universe(_) | Tok::Num(_) | Tok::ZeroTwo | Tok::OneTwo | Tok::LParen => true,
            _ => false,
        }
    }

    fn app(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span().start;
        let mut f = self.head()?;
        while self.at_atom_start() {
            let a = self.head()?;
            f = SurfaceTerm {
                node: Surface::App(Box::new(f), Box::new(a)),
                span: Span::new(start, self.prev_end()),
            };
        }
        Ok(f)
    }

    fn bracket(&mut self, arity: usize) -> PResult<(Vec<(Name, Span)>, Box<SurfaceTerm>)> {
        let open = self.expect(Tok::LBracket, "`[`")?;
        let mut names = Vec::new();
        for _ in 0..arity {
            names.push(self.name()?);
        }
        self.expect(Tok::Dot, "`.`")?;
        let body = self.term()?;
        if *self.peek() == Tok::Eof {
            return Err(Diagnostic::error(
                "unterminated",
                "unclosed `[`",
                Span::new(open.start, self.span().end),
            ));
        }
        self.expect(Tok::RBracket, "`]`")?;
        Ok((names, Box::new(body)))
    }

    /// A head form: an atom, or a built-in former applied to its fixed arguments.
    fn head(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span().start;
        let kw = match self.peek() {
            Tok::Ident(n) if is_keyword(n) => Some(n.clone()),
            _ => None,
        };
        let node = match kw.as_deref() {
            Some("Id") => {
                self.bump();
                let a = self.atom()?;
                let x = self.atom()?;
                let y = self.atom()?;
                Surface::IdType(Box::new(a), Box::new(x), Box::new(y))
            }
            Some("refl") => {
                self.bump();
                Surface::Refl(Box::new(self.atom()?))
            }
            Some("fst") => {
                self.bump();
                Surface::Fst(Box::new(self.atom()?))
            }
            Some("snd") => {
                self.bump();
                Surface::Snd(Box::new(self.atom()?))
            }
            Some("suc") => {
                self.bump();
                Surface::Suc(Box::new(self.atom()?))
            }
            Some("J") => {
                self.bump();
                let motive = self.bracket(3)?;
                let base = self.bracket(1)?;
                let path = self.atom()?;
                Surface::J {
                    motive,
                    base,
                    path: Box::new(path),
                }
            }
            Some("natrec") => {
                self.bump();
                let motive = self.bracket(1)?;
                let base = self.atom()?;
                let step = self.bracket(2)?;
                let target = self.atom()?;
                Surface::NatElim {
                    motive,
                    base: Box::new(base),
                    step,
                    target: Box::new(target),
                }
            }
            Some("absurd") => {
                self.bump();
                let motive = self.bracket(1)?;
                let target = self.atom()?;
                Surface::EmptyElim {
                    motive,
                    target: Box::new(target),
                }
            }
            Some("twoelim") => {
                self.bump();
                let motive = self.bracket(1)?;
                let c0 = self.atom()?;
                let c1 = self.atom()?;
                let target = self.atom()?;
                Surface::TwoElim {
                    motive,
                    case0: Box::new(c0),
                    case1: Box::new(c1),
                    target: Box::new(target),
                }
            }
            _ => return self.atom(),
        };
        Ok(SurfaceTerm {
            node,
            span: Span::new(start, self.prev_end()),
        })
    }

    fn atom(&mut self) -> PResult<SurfaceTerm> {
        let tok = self.peek().clone();
        let sp = self.span();
        let leaf = |node| Ok(SurfaceTerm { node, span: sp });
        match tok {
            Tok::Ident(n) => {
                let node = match &*n {
                    "Nat" => Surface::NatType,
                    "Empty" => Surface::EmptyType,
                    "Unit" => Surface::UnitType,
                    "Two" => Surface::TwoType,
                    "star" => Surface::Star,
                    k if is_keyword(k) => return Err(self.unexpected("an argument")),
                    _ => Surface::Name(n.clone()),
                };
                self.bump();
                leaf(node)
            }
            Tok::Universe(i) => {
                self.bump();
                leaf(Surface::Universe(i))
            }
            Tok::Num(n) => {
                self.bump();
                leaf(Surface::Numeral(n))
            }
            Tok::ZeroTwo => {
                self.bump();
                leaf(Surface::ZeroTwo)
            }
            Tok::OneTwo => {
                self.bump();
                leaf(Surface::OneTwo)
            }
            Tok::LParen => {
                let open = self.bump().span;
                let inner = self.term()?;
                let node = match self.peek() {
                    Tok::RParen => {
                        self.bump();
                        return Ok(SurfaceTerm {
                            node: inner.node,
                            span: Span::new(open.start, self.prev_end()),
                        });
                    }
                    Tok::Colon => {
                        self.bump();
                        let ty = self.term()?;
                        Surface::Ann(Box::new(inner), Box::new(ty))
                    }
                    Tok::Comma => {
                        self.bump();
                        let rest = self.pair_tail()?;
                        Surface::Pair(Box::new(inner), Box::new(rest))
                    }
                    Tok::Eof => {
                        return Err(Diagnostic::error(
                            "unterminated",
                            "unclosed `(`",
                            Span::new(open.start, self.span().end),
                        ))
                    }
                    _ => return Err(self.unexpected("`)`")),
                };
                if *self.peek() == Tok::Eof {
                    return Err(Diagnostic::error(
                        "unterminated",
                        "unclosed `(`",
                        Span::new(open.start, self.span().end),
                    ));
                }
                self.expect(Tok::RParen, "`)`")?;
                Ok(SurfaceTerm {
                    node,
                    span: Span::new(open.start, self.prev_end()),
                })
            }
            _ => Err(self.unexpected("a term")),
        }
    }

    /// The remainder of `(a, b, c)`, right-nested.
    fn pair_tail(&mut self) -> PResult<SurfaceTerm> {
        let start = self.span().start;
        let first = self.term()?;
        if *self.peek() == Tok::Comma {
            self.bump();
            let rest = self.pair_tail()?;
            return Ok(SurfaceTerm {
                node: Surface::Pair(Box::new(first), Box::new(rest)),
                span: Span::new(start, self.prev_end()),
            });
        }
        Ok(first)
    }

    fn skip_to_next_decl(&mut self) {
        self.bump();
        while *self.peek() != Tok::Eof && !self.at_decl_start() {
            self.bump();
        }
    }
}

fn wrap_binders(binders: &[SBinder], body: SurfaceTerm, _pi: bool) -> SurfaceTerm {
    if binders.is_empty() {
        return body;
    }
    let sp = binders[0].names[0].1.merge(body.span);
    SurfaceTerm {
        node: Surface::Pi(binders.to_vec(), Box::new(body)),
        span: sp,
    }
}

/// Parses a whole file. Never panics; on failure at least one error carries
/// a span inside the input.
pub fn parse(source: &str) -> Result<Vec<SurfaceDecl>, Vec<Diagnostic>> {
    let toks = match lex(source) {
        Ok(t) => t,
        Err(d) => return Err(vec![d]),
    };
    let mut p = Parser {
        toks,
        pos: 0,
        src: source,
    };
    let mut decls = Vec::new();
    let mut errors = Vec::new();
    while *p.peek() != Tok::Eof {
        let mut provenance = String::new();
        while let Tok::Doc(text) = p.peek().clone() {
            if !provenance.is_empty() {
                provenance.push(' ');
            }
            provenance.push_str(&text);
            p.bump();
        }
        if *p.peek() == Tok::Eof {
            break;
        }
        match p.decl(provenance) {
            Ok(d) => decls.push(d),
            Err(e) => {
                errors.push(e);
                p.skip_to_next_decl();
            }
        }
    }
    if errors.is_empty() {
        Ok(decls)
    } else {
        Err(errors)
    }
}

/// Parses a single term (used by tests and the printer round trip).
pub fn parse_term(source: &str) -> Result<SurfaceTerm, Diagnostic> {
    let toks = lex(source)?;
    let mut p = Parser {
        toks,
        pos: 0,
        src: source,
    };
    let t = p.term()?;
    if *p.peek() != Tok::Eof {
        return Err(p.unexpected("end of input"));
    }
    Ok(t)
}
