//! Tokenizer shared by the behaviour, expression, and context parsers.

use std::fmt;

use super::parse::ParseError;

/// A byte range in the source text.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Span {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.start, self.end)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TokKind {
    Ident(String),
    Int(i32),
    Long(i64),
    Double(f64),
    Str(String),
    // Keywords.
    KwNil,
    KwIf,
    KwThen,
    KwElse,
    KwWhile,
    KwInputChoice,
    KwWait,
    KwExec,
    KwTrue,
    KwFalse,
    // Type names are keywords too.
    KwBool,
    KwInt,
    KwDouble,
    KwLong,
    KwString,
    KwRaw,
    KwVoid,
    // Punctuation.
    Semi,
    Pipe,
    PipePipe,
    Amp,
    AmpAmp,
    Bang,
    Assign,
    EqEq,
    Lt,
    Gt,
    At,
    Colon,
    Comma,
    Dot,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Eof,
}

impl TokKind {
    /// Short rendering for "found …" in error messages.
    pub fn describe(&self) -> String {
        match self {
            TokKind::Ident(s) => format!("identifier \"{s}\""),
            TokKind::Int(n) => format!("integer {n}"),
            TokKind::Long(n) => format!("long {n}L"),
            TokKind::Double(d) => format!("double {d:?}"),
            TokKind::Str(_) => "string literal".to_string(),
            TokKind::KwNil => "\"nil\"".to_string(),
            TokKind::KwIf => "\"if\"".to_string(),
            TokKind::KwThen => "\"then\"".to_string(),
            TokKind::KwElse => "\"else\"".to_string(),
            TokKind::KwWhile => "\"while\"".to_string(),
            TokKind::KwInputChoice => "\"inputchoice\"".to_string(),
            TokKind::KwWait => "\"wait\"".to_string(),
            TokKind::KwExec => "\"exec\"".to_string(),
            TokKind::KwTrue => "\"true\"".to_string(),
            TokKind::KwFalse => "\"false\"".to_string(),
            TokKind::KwBool => "\"bool\"".to_string(),
            TokKind::KwInt => "\"int\"".to_string(),
            TokKind::KwDouble => "\"double\"".to_string(),
            TokKind::KwLong => "\"long\"".to_string(),
            TokKind::KwString => "\"string\"".to_string(),
            TokKind::KwRaw => "\"raw\"".to_string(),
            TokKind::KwVoid => "\"void\"".to_string(),
            TokKind::Semi => "\";\"".to_string(),
            TokKind::Pipe => "\"|\"".to_string(),
            TokKind::PipePipe => "\"||\"".to_string(),
            TokKind::Amp => "\"&\"".to_string(),
            TokKind::AmpAmp => "\"&&\"".to_string(),
            TokKind::Bang => "\"!\"".to_string(),
            TokKind::Assign => "\"=\"".to_string(),
            TokKind::EqEq => "\"==\"".to_string(),
            TokKind::Lt => "\"<\"".to_string(),
            TokKind::Gt => "\">\"".to_string(),
            TokKind::At => "\"@\"".to_string(),
            TokKind::Colon => "\":\"".to_string(),
            TokKind::Comma => "\",\"".to_string(),
            TokKind::Dot => "\".\"".to_string(),
            TokKind::LParen => "\"(\"".to_string(),
            TokKind::RParen => "\")\"".to_string(),
            TokKind::LBrace => "\"{\"".to_string(),
            TokKind::RBrace => "\"}\"".to_string(),
            TokKind::LBracket => "\"[\"".to_string(),
            TokKind::RBracket => "\"]\"".to_string(),
            TokKind::Eof => "end of input".to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Token {
    pub kind: TokKind,
    pub span: Span,
}

fn keyword(s: &str) -> Option<TokKind> {
    Some(match s {
        "nil" => TokKind::KwNil,
        "if" => TokKind::KwIf,
        "then" => TokKind::KwThen,
        "else" => TokKind::KwElse,
        "while" => TokKind::KwWhile,
        "inputchoice" => TokKind::KwInputChoice,
        "wait" => TokKind::KwWait,
        "exec" => TokKind::KwExec,
        "true" => TokKind::KwTrue,
        "false" => TokKind::KwFalse,
        "bool" => TokKind::KwBool,
        "int" => TokKind::KwInt,
        "double" => TokKind::KwDouble,
        "long" => TokKind::KwLong,
        "string" => TokKind::KwString,
        "raw" => TokKind::KwRaw,
        "void" => TokKind::KwVoid,
        _ => return None,
    })
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn error(&self, span: Span, found: impl Into<String>, expected: &str) -> ParseError {
        ParseError::Syntax {
            span,
            found: found.into(),
            expected: expected.to_string(),
        }
    }

    fn ident(&mut self) -> Token {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.bump();
        }
        let text = &self.src[start..self.pos];
        let kind = keyword(text).unwrap_or_else(|| TokKind::Ident(text.to_string()));
        Token {
            kind,
            span: Span::new(start, self.pos),
        }
    }

    fn digits(&mut self) -> usize {
        let mut n = 0;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.bump();
            n += 1;
        }
        n
    }

    fn number(&mut self) -> Result<Token, ParseError> {
        let start = self.pos;
        if self.peek() == Some('-') {
            self.bump();
        }
        self.digits();
        let mut is_double = false;
        if self.peek() == Some('.') && matches!(self.peek2(), Some(c) if c.is_ascii_digit()) {
            is_double = true;
            self.bump();
            self.digits();
        }
        // An exponent part only counts when digits actually follow, so
        // `1e` stays an integer and a trailing identifier.
        if matches!(self.peek(), Some('e' | 'E')) {
            let exponent_follows = match self.peek2() {
                Some(c) if c.is_ascii_digit() => true,
                Some('+' | '-') => {
                    let mut it = self.src[self.pos..].chars();
                    it.next();
                    it.next();
                    matches!(it.next(), Some(c) if c.is_ascii_digit())
                }
                _ => false,
            };
            if exponent_follows {
                is_double = true;
                self.bump();
                if matches!(self.peek(), Some('+' | '-')) {
                    self.bump();
                }
                self.digits();
            }
        }
        let span = Span::new(start, self.pos);
        let text = &self.src[start..self.pos];
        if is_double {
            let value: f64 = text
                .parse()
                .map_err(|_| self.error(span, format!("\"{text}\""), "a double literal"))?;
            if !value.is_finite() {
                return Err(self.error(span, format!("\"{text}\""), "a finite double literal"));
            }
            return Ok(Token {
                kind: TokKind::Double(value),
                span,
            });
        }
        if self.peek() == Some('L') {
            self.bump();
            let span = Span::new(start, self.pos);
            let value: i64 = text.parse().map_err(|_| {
                self.error(span, format!("\"{text}L\""), "a 64-bit integer literal")
            })?;
            return Ok(Token {
                kind: TokKind::Long(value),
                span,
            });
        }
        let value: i32 = text
            .parse()
            .map_err(|_| self.error(span, format!("\"{text}\""), "a 32-bit integer literal"))?;
        Ok(Token {
            kind: TokKind::Int(value),
            span,
        })
    }

    fn string(&mut self) -> Result<Token, ParseError> {
        let start = self.pos;
        self.bump(); // opening quote
        let mut value = String::new();
        loop {
            match self.bump() {
                None => {
                    return Err(self.error(
                        Span::new(start, self.pos),
                        "end of input",
                        "a closing '\"'",
                    ))
                }
                Some('"') => break,
                Some('\\') => {
                    let esc_start = self.pos - 1;
                    match self.bump() {
                        Some('\\') => value.push('\\'),
                        Some('"') => value.push('"'),
                        Some('n') => value.push('\n'),
                        Some('r') => value.push('\r'),
                        Some('t') => value.push('\t'),
                        c => {
                            let found = match c {
                                Some(c) => format!("\"\\{c}\""),
                                None => "end of input".to_string(),
                            };
                            return Err(self.error(
                                Span::new(esc_start, self.pos),
                                found,
                                "an escape among \\\\ \\\" \\n \\r \\t",
                            ));
                        }
                    }
                }
                Some(c) => value.push(c),
            }
        }
        Ok(Token {
            kind: TokKind::Str(value),
            span: Span::new(start, self.pos),
        })
    }

    fn punct(&mut self) -> Result<Token, ParseError> {
        let start = self.pos;
        let c = self.bump().expect("punct called at end of input");
        let two = |lx: &mut Lexer<'a>, next: char, double: TokKind, single: TokKind| {
            if lx.peek() == Some(next) {
                lx.bump();
                double
            } else {
                single
            }
        };
        let kind = match c {
            ';' => TokKind::Semi,
            '|' => two(self, '|', TokKind::PipePipe, TokKind::Pipe),
            '&' => two(self, '&', TokKind::AmpAmp, TokKind::Amp),
            '=' => two(self, '=', TokKind::EqEq, TokKind::Assign),
            '!' => TokKind::Bang,
            '<' => TokKind::Lt,
            '>' => TokKind::Gt,
            '@' => TokKind::At,
            ':' => TokKind::Colon,
            ',' => TokKind::Comma,
            '.' => TokKind::Dot,
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            '{' => TokKind::LBrace,
            '}' => TokKind::RBrace,
            '[' => TokKind::LBracket,
            ']' => TokKind::RBracket,
            other => {
                return Err(self.error(
                    Span::new(start, self.pos),
                    format!("character {other:?}"),
                    "a token",
                ))
            }
        };
        Ok(Token {
            kind,
            span: Span::new(start, self.pos),
        })
    }
}

pub fn lex(src: &str) -> Result<Vec<Token>, ParseError> {
    let mut lx = Lexer { src, pos: 0 };
    let mut out = Vec::new();
    while let Some(c) = lx.peek() {
        if c.is_whitespace() {
            lx.bump();
        } else if c == '#' {
            while !matches!(lx.peek(), None | Some('\n')) {
                lx.bump();
            }
        } else if c.is_ascii_alphabetic() || c == '_' {
            out.push(lx.ident());
        } else if c.is_ascii_digit()
            || (c == '-' && matches!(lx.peek2(), Some(d) if d.is_ascii_digit()))
        {
            out.push(lx.number()?);
        } else if c == '"' {
            out.push(lx.string()?);
        } else {
            out.push(lx.punct()?);
        }
    }
    out.push(Token {
        kind: TokKind::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}
