//! Recursive-descent parsers for behaviours, expressions, and contexts.

use std::fmt;

use super::lexer::{lex, Span, TokKind, Token};
use crate::ast::{
    Behaviour, BinOp, ChildSel, Eta, EtaHat, Expr, Ident, Position, Variable, VariableEnumeration,
    VariablePath,
};
use crate::context::{Context, Ctx, CtxError, NativeType, TypeDecl};

/// How variable positions in the source are interpreted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum VarMode {
    /// Variables are written with explicit indices: `x0`, `x1`, …
    #[default]
    Indexed,
    /// Variables are dotted names, numbered by first occurrence.
    Paths,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("syntax error at {span}: found {found}, expected {expected}")]
    Syntax {
        span: Span,
        found: String,
        expected: String,
    },
    #[error("syntax error at {span}: input choice needs at least one \"[\u{3b7}]{{B}}\" branch")]
    EmptyChoice { span: Span },
    #[error("invalid declaration block at {span}: {source}")]
    DuplicateDecl {
        span: Span,
        #[source]
        source: CtxError,
    },
}

impl ParseError {
    pub fn span(&self) -> Span {
        match self {
            ParseError::Syntax { span, .. }
            | ParseError::EmptyChoice { span }
            | ParseError::DuplicateDecl { span, .. } => *span,
        }
    }
}

/// Source spans for a parsed behaviour, one node per behaviour node,
/// addressed by the same [`Position`]s used everywhere else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpanTree {
    pub span: Span,
    children: Vec<(ChildSel, SpanTree)>,
}

impl SpanTree {
    fn leaf(span: Span) -> SpanTree {
        SpanTree {
            span,
            children: Vec::new(),
        }
    }

    pub fn children(&self) -> &[(ChildSel, SpanTree)] {
        &self.children
    }

    /// Span of the node at `pos`, if the position exists.
    pub fn at(&self, pos: &Position) -> Option<Span> {
        let mut node = self;
        for sel in pos.steps() {
            node = node
                .children
                .iter()
                .find(|(s, _)| s == sel)
                .map(|(_, t)| t)?;
        }
        Some(node.span)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParsedBehaviour {
    pub behaviour: Behaviour,
    pub spans: SpanTree,
}

/// A parsing session: holds the variable mode and the running
/// first-occurrence numbering, so several inputs (say a context and a
/// behaviour) can share one numbering.
#[derive(Debug, Default)]
pub struct Session {
    mode: VarMode,
    vars: VariableEnumeration,
}

impl Session {
    pub fn new(mode: VarMode) -> Session {
        Session {
            mode,
            vars: VariableEnumeration::default(),
        }
    }

    /// The dotted names seen so far, in numbering order.
    pub fn vars(&self) -> &VariableEnumeration {
        &self.vars
    }

    pub fn parse_behaviour(&mut self, src: &str) -> Result<ParsedBehaviour, ParseError> {
        let mut p = P::new(src, self.mode, &mut self.vars)?;
        let (behaviour, spans) = p.par()?;
        p.expect_eof()?;
        Ok(ParsedBehaviour { behaviour, spans })
    }

    pub fn parse_context(&mut self, src: &str) -> Result<Context, ParseError> {
        let mut p = P::new(src, self.mode, &mut self.vars)?;
        let g = p.context()?;
        p.expect_eof()?;
        Ok(g)
    }
}

/// Parses a behaviour with indexed variables (`x0`, `x1`, …).
pub fn parse_behaviour(src: &str) -> Result<Behaviour, ParseError> {
    Session::new(VarMode::Indexed)
        .parse_behaviour(src)
        .map(|p| p.behaviour)
}

/// Parses a context with indexed variables.
pub fn parse_context(src: &str) -> Result<Context, ParseError> {
    Session::new(VarMode::Indexed).parse_context(src)
}

// ---------------------------------------------------------------------------
// Parser machinery
// ---------------------------------------------------------------------------

struct P<'v> {
    toks: Vec<Token>,
    i: usize,
    mode: VarMode,
    vars: &'v mut VariableEnumeration,
}

impl<'v> P<'v> {
    fn new(
        src: &str,
        mode: VarMode,
        vars: &'v mut VariableEnumeration,
    ) -> Result<P<'v>, ParseError> {
        Ok(P {
            toks: lex(src)?,
            i: 0,
            mode,
            vars,
        })
    }

    fn peek(&self) -> &Token {
        &self.toks[self.i]
    }

    fn peek_kind(&self) -> &TokKind {
        &self.toks[self.i].kind
    }

    fn peek2_kind(&self) -> &TokKind {
        &self.toks[(self.i + 1).min(self.toks.len() - 1)].kind
    }

    fn prev_span(&self) -> Span {
        self.toks[self.i.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.i].clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        ParseError::Syntax {
            span: self.peek().span,
            found: self.peek_kind().describe(),
            expected: expected.to_string(),
        }
    }

    fn expect(&mut self, kind: TokKind, expected: &str) -> Result<Token, ParseError> {
        if *self.peek_kind() == kind {
            Ok(self.bump())
        } else {
            Err(self.err(expected))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        if *self.peek_kind() == TokKind::Eof {
            Ok(())
        } else {
            Err(self.err("end of input"))
        }
    }

    fn ident(&mut self, expected: &str) -> Result<(Ident, Span), ParseError> {
        match self.peek_kind() {
            TokKind::Ident(_) => {
                let t = self.bump();
                let TokKind::Ident(s) = t.kind else {
                    unreachable!()
                };
                let id = Ident::new(&s).expect("lexer yields well-formed identifiers");
                Ok((id, t.span))
            }
            _ => Err(self.err(expected)),
        }
    }

    /// A variable occurrence: `xN` in indexed mode, a dotted name in
    /// paths mode.
    fn variable(&mut self) -> Result<(Variable, Span), ParseError> {
        match self.mode {
            VarMode::Indexed => {
                let (id, span) = self.ident("a variable like x0")?;
                let name = id.as_str();
                let index = name
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                    .ok_or_else(|| ParseError::Syntax {
                        span,
                        found: format!("identifier \"{name}\""),
                        expected: "a variable like x0".to_string(),
                    })?;
                let index: u32 = index.parse().map_err(|_| ParseError::Syntax {
                    span,
                    found: format!("identifier \"{name}\""),
                    expected: "a variable index below 2^32".to_string(),
                })?;
                Ok((Variable(index), span))
            }
            VarMode::Paths => {
                let (first, start) = self.ident("a variable name")?;
                let mut segments = vec![first.as_str().to_string()];
                let mut end = start;
                while *self.peek_kind() == TokKind::Dot {
                    self.bump();
                    let (seg, span) = self.ident("a name segment after \".\"")?;
                    segments.push(seg.as_str().to_string());
                    end = span;
                }
                let path = VariablePath::new(segments).expect("segments are identifiers");
                Ok((self.vars.insert(path), start.join(end)))
            }
        }
    }

    // -- Behaviours ---------------------------------------------------------

    fn par(&mut self) -> Result<(Behaviour, SpanTree), ParseError> {
        let (first, s1) = self.seq()?;
        if *self.peek_kind() != TokKind::Pipe {
            return Ok((first, s1));
        }
        self.bump();
        let (rest, s2) = self.par()?;
        let spans = SpanTree {
            span: s1.span.join(s2.span),
            children: vec![(ChildSel::ParLeft, s1), (ChildSel::ParRight, s2)],
        };
        Ok((Behaviour::par(first, rest), spans))
    }

    fn seq(&mut self) -> Result<(Behaviour, SpanTree), ParseError> {
        let (first, s1) = self.atom()?;
        if *self.peek_kind() != TokKind::Semi {
            return Ok((first, s1));
        }
        self.bump();
        let (rest, s2) = self.seq()?;
        let spans = SpanTree {
            span: s1.span.join(s2.span),
            children: vec![(ChildSel::SeqFirst, s1), (ChildSel::SeqSecond, s2)],
        };
        Ok((Behaviour::seq(first, rest), spans))
    }

    fn atom(&mut self) -> Result<(Behaviour, SpanTree), ParseError> {
        let start = self.peek().span;
        match self.peek_kind() {
            TokKind::KwNil => {
                self.bump();
                Ok((Behaviour::Nil, SpanTree::leaf(start)))
            }
            TokKind::KwIf => {
                self.bump();
                let guard = self.expr()?;
                self.expect(TokKind::KwThen, "\"then\"")?;
                let (then_b, then_s) = self.atom()?;
                self.expect(TokKind::KwElse, "\"else\"")?;
                let (else_b, else_s) = self.atom()?;
                let spans = SpanTree {
                    span: start.join(self.prev_span()),
                    children: vec![(ChildSel::IfThen, then_s), (ChildSel::IfElse, else_s)],
                };
                Ok((Behaviour::if_then_else(guard, then_b, else_b), spans))
            }
            TokKind::KwWhile => {
                self.bump();
                self.expect(TokKind::LBracket, "\"[\" before the loop guard")?;
                let guard = self.expr()?;
                self.expect(TokKind::RBracket, "\"]\" after the loop guard")?;
                let (body, body_s) = self.atom()?;
                let spans = SpanTree {
                    span: start.join(self.prev_span()),
                    children: vec![(ChildSel::WhileBody, body_s)],
                };
                Ok((Behaviour::while_do(guard, body), spans))
            }
            TokKind::LParen => {
                self.bump();
                let (inner, inner_s) = self.par()?;
                self.expect(TokKind::RParen, "\")\"")?;
                let spans = SpanTree {
                    span: start.join(self.prev_span()),
                    children: inner_s.children,
                };
                Ok((inner, spans))
            }
            TokKind::KwInputChoice => {
                self.bump();
                let mut branches = Vec::new();
                let mut children = Vec::new();
                while *self.peek_kind() == TokKind::LBracket {
                    self.bump();
                    let i = branches.len();
                    let (eta, eta_body_s) = self.eta()?;
                    self.expect(TokKind::RBracket, "\"]\" after the input guard")?;
                    self.expect(TokKind::LBrace, "\"{\" before the branch body")?;
                    let (body, body_s) = self.par()?;
                    self.expect(TokKind::RBrace, "\"}\" after the branch body")?;
                    if let Some(s) = eta_body_s {
                        children.push((ChildSel::ChoiceInputBody(i), s));
                    }
                    children.push((ChildSel::ChoiceBody(i), body_s));
                    branches.push((eta, body));
                }
                if branches.is_empty() {
                    return Err(ParseError::EmptyChoice { span: start });
                }
                let spans = SpanTree {
                    span: start.join(self.prev_span()),
                    children,
                };
                Ok((Behaviour::InputChoice(branches), spans))
            }
            TokKind::KwWait => {
                self.bump();
                self.expect(TokKind::LParen, "\"(\"")?;
                let (chan, _) = self.ident("a channel name")?;
                self.expect(TokKind::Comma, "\",\"")?;
                let (op, _) = self.ident("an operation name")?;
                self.expect(TokKind::Comma, "\",\"")?;
                let (loc, _) = self.ident("a location name")?;
                self.expect(TokKind::Comma, "\",\"")?;
                let (x, _) = self.variable()?;
                self.expect(TokKind::RParen, "\")\"")?;
                let spans = SpanTree::leaf(start.join(self.prev_span()));
                Ok((Behaviour::Wait(chan, op, loc, x), spans))
            }
            TokKind::KwExec => {
                self.bump();
                self.expect(TokKind::LParen, "\"(\"")?;
                let (chan, _) = self.ident("a channel name")?;
                self.expect(TokKind::Comma, "\",\"")?;
                let (op, _) = self.ident("an operation name")?;
                self.expect(TokKind::Comma, "\",\"")?;
                let (x, _) = self.variable()?;
                self.expect(TokKind::RParen, "\")\"")?;
                self.expect(TokKind::LBrace, "\"{\" before the handler body")?;
                let (body, body_s) = self.par()?;
                self.expect(TokKind::RBrace, "\"}\" after the handler body")?;
                let spans = SpanTree {
                    span: start.join(self.prev_span()),
                    children: vec![(ChildSel::ExecBody, body_s)],
                };
                Ok((Behaviour::Exec(chan, op, x, Box::new(body)), spans))
            }
            TokKind::Ident(_) => match self.peek2_kind() {
                TokKind::Assign | TokKind::Dot => {
                    let (x, _) = self.variable()?;
                    self.expect(TokKind::Assign, "\"=\"")?;
                    let e = self.expr()?;
                    let spans = SpanTree::leaf(start.join(self.prev_span()));
                    Ok((Behaviour::assign(x, e), spans))
                }
                TokKind::At => {
                    let (op, _) = self.ident("an operation name")?;
                    self.bump(); // @
                    let (loc, _) = self.ident("a location name")?;
                    self.expect(TokKind::LParen, "\"(\" before the message expression")?;
                    let e = self.expr()?;
                    self.expect(TokKind::RParen, "\")\"")?;
                    let out = if *self.peek_kind() == TokKind::LParen {
                        self.bump();
                        let (x, _) = self.variable()?;
                        self.expect(TokKind::RParen, "\")\"")?;
                        EtaHat::SolicitResponse(op, loc, e, x)
                    } else {
                        EtaHat::Notification(op, loc, e)
                    };
                    let spans = SpanTree::leaf(start.join(self.prev_span()));
                    Ok((Behaviour::Output(out), spans))
                }
                TokKind::LParen => {
                    let (eta, body_s) = self.eta()?;
                    let children = body_s
                        .map(|s| vec![(ChildSel::InputBody, s)])
                        .unwrap_or_default();
                    let spans = SpanTree {
                        span: start.join(self.prev_span()),
                        children,
                    };
                    Ok((Behaviour::Input(eta), spans))
                }
                _ => {
                    self.bump(); // the identifier; the error points after it
                    Err(self.err("\"=\", \"(\", or \"@\" after an identifier"))
                }
            },
            _ => Err(self.err("a behaviour")),
        }
    }

    /// An input guard: `o(x)` or `o(x)(y){ B }`.  Returns the span tree
    /// of the request-response body, when there is one.
    fn eta(&mut self) -> Result<(Eta, Option<SpanTree>), ParseError> {
        let (op, _) = self.ident("an operation name")?;
        self.expect(TokKind::LParen, "\"(\"")?;
        let (x, _) = self.variable()?;
        self.expect(TokKind::RParen, "\")\"")?;
        if *self.peek_kind() != TokKind::LParen {
            return Ok((Eta::OneWay(op, x), None));
        }
        self.bump();
        let (y, _) = self.variable()?;
        self.expect(TokKind::RParen, "\")\"")?;
        self.expect(TokKind::LBrace, "\"{\" before the reply body")?;
        let (body, body_s) = self.par()?;
        self.expect(TokKind::RBrace, "\"}\" after the reply body")?;
        Ok((Eta::RequestResponse(op, x, y, Box::new(body)), Some(body_s)))
    }

    // -- Expressions --------------------------------------------------------

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.and_expr()?;
        while *self.peek_kind() == TokKind::PipePipe {
            self.bump();
            e = Expr::bin(BinOp::Or, e, self.and_expr()?);
        }
        Ok(e)
    }

    fn and_expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.cmp_expr()?;
        while *self.peek_kind() == TokKind::AmpAmp {
            self.bump();
            e = Expr::bin(BinOp::And, e, self.cmp_expr()?);
        }
        Ok(e)
    }

    fn cmp_expr(&mut self) -> Result<Expr, ParseError> {
        let e = self.not_expr()?;
        let op = match self.peek_kind() {
            TokKind::EqEq => BinOp::Eq,
            TokKind::Lt => BinOp::Lt,
            _ => return Ok(e),
        };
        self.bump();
        Ok(Expr::bin(op, e, self.not_expr()?))
    }

    fn not_expr(&mut self) -> Result<Expr, ParseError> {
        if *self.peek_kind() == TokKind::Bang {
            self.bump();
            return Ok(Expr::negate(self.not_expr()?));
        }
        self.primary_expr()
    }

    fn primary_expr(&mut self) -> Result<Expr, ParseError> {
        match self.peek_kind() {
            TokKind::KwTrue => {
                self.bump();
                Ok(Expr::BoolLit(true))
            }
            TokKind::KwFalse => {
                self.bump();
                Ok(Expr::BoolLit(false))
            }
            TokKind::Int(n) => {
                let n = *n;
                self.bump();
                Ok(Expr::IntLit(n))
            }
            TokKind::Long(n) => {
                let n = *n;
                self.bump();
                Ok(Expr::LongLit(n))
            }
            TokKind::Double(d) => {
                let d = *d;
                self.bump();
                Ok(Expr::double(d))
            }
            TokKind::Str(_) => {
                let t = self.bump();
                let TokKind::Str(s) = t.kind else {
                    unreachable!()
                };
                Ok(Expr::StringLit(s))
            }
            TokKind::Ident(_) => {
                let (x, _) = self.variable()?;
                Ok(Expr::Var(x))
            }
            TokKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokKind::RParen, "\")\"")?;
                Ok(e)
            }
            _ => Err(self.err("an expression")),
        }
    }

    // -- Contexts -----------------------------------------------------------

    fn context(&mut self) -> Result<Context, ParseError> {
        let mut g = self.ctx_atom()?;
        while *self.peek_kind() == TokKind::Amp {
            self.bump();
            g = Context::par(g, self.ctx_atom()?);
        }
        Ok(g)
    }

    fn ctx_atom(&mut self) -> Result<Context, ParseError> {
        match self.peek_kind() {
            TokKind::LBrace => self.ctx_block(),
            TokKind::LParen => {
                self.bump();
                let g = self.context()?;
                self.expect(TokKind::RParen, "\")\"")?;
                Ok(g)
            }
            _ => Err(self.err("a declaration block")),
        }
    }

    fn ctx_block(&mut self) -> Result<Context, ParseError> {
        let open = self.expect(TokKind::LBrace, "\"{\"")?;
        let mut decls = Vec::new();
        if *self.peek_kind() != TokKind::RBrace {
            loop {
                decls.push(self.decl()?);
                if *self.peek_kind() == TokKind::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        let close = self.expect(TokKind::RBrace, "\"}\" or \",\"")?;
        Ctx::new(decls)
            .map(Context::Leaf)
            .map_err(|source| ParseError::DuplicateDecl {
                span: open.span.join(close.span),
                source,
            })
    }

    fn decl(&mut self) -> Result<TypeDecl, ParseError> {
        if !matches!(self.peek_kind(), TokKind::Ident(_)) {
            return Err(self.err("a declaration"));
        }
        match self.peek2_kind() {
            TokKind::At => {
                let (op, _) = self.ident("an operation name")?;
                self.bump(); // @
                let (loc, _) = self.ident("a location name")?;
                self.expect(TokKind::Colon, "\":\"")?;
                let (t, t2) = self.port_types()?;
                Ok(match t2 {
                    Some(t2) => TypeDecl::OutputReqRes(op, loc, t, t2),
                    None => TypeDecl::OutputOneWay(op, loc, t),
                })
            }
            TokKind::Dot => {
                // A dotted name can only be a variable declaration.
                let (x, _) = self.variable()?;
                self.expect(TokKind::Colon, "\":\"")?;
                let t = self.native_type()?;
                Ok(TypeDecl::VarDecl(x, t))
            }
            _ => {
                let (name, span) = self.ident("a declaration")?;
                self.expect(TokKind::Colon, "\":\"")?;
                if *self.peek_kind() == TokKind::Lt {
                    let (t, t2) = self.port_types()?;
                    return Ok(match t2 {
                        Some(t2) => TypeDecl::InputReqRes(name, t, t2),
                        None => TypeDecl::InputOneWay(name, t),
                    });
                }
                let x = self.decl_variable(&name, span)?;
                let t = self.native_type()?;
                Ok(TypeDecl::VarDecl(x, t))
            }
        }
    }

    /// Interprets an already-consumed single-segment name as the
    /// variable of a declaration.
    fn decl_variable(&mut self, name: &Ident, span: Span) -> Result<Variable, ParseError> {
        match self.mode {
            VarMode::Indexed => {
                let index = name
                    .as_str()
                    .strip_prefix('x')
                    .filter(|rest| !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()))
                    .and_then(|rest| rest.parse::<u32>().ok())
                    .ok_or_else(|| ParseError::Syntax {
                        span,
                        found: format!("identifier \"{name}\""),
                        expected: "a variable like x0".to_string(),
                    })?;
                Ok(Variable(index))
            }
            VarMode::Paths => {
                let path = VariablePath::new(vec![name.as_str().to_string()])
                    .expect("segments are identifiers");
                Ok(self.vars.insert(path))
            }
        }
    }

    fn port_types(&mut self) -> Result<(NativeType, Option<NativeType>), ParseError> {
        self.expect(TokKind::Lt, "\"<\"")?;
        let t = self.native_type()?;
        let t2 = if *self.peek_kind() == TokKind::Comma {
            self.bump();
            Some(self.native_type()?)
        } else {
            None
        };
        self.expect(TokKind::Gt, "\">\"")?;
        Ok((t, t2))
    }

    fn native_type(&mut self) -> Result<NativeType, ParseError> {
        let t = match self.peek_kind() {
            TokKind::KwBool => NativeType::Bool,
            TokKind::KwInt => NativeType::Int,
            TokKind::KwDouble => NativeType::Double,
            TokKind::KwLong => NativeType::Long,
            TokKind::KwString => NativeType::String,
            TokKind::KwRaw => NativeType::Raw,
            TokKind::KwVoid => NativeType::Void,
            _ => return Err(self.err("a type (bool, int, double, long, string, raw, void)")),
        };
        self.bump();
        Ok(t)
    }
}

impl fmt::Display for VarMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarMode::Indexed => f.write_str("indexed"),
            VarMode::Paths => f.write_str("paths"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ast::positions;

    fn b(src: &str) -> Behaviour {
        parse_behaviour(src).unwrap()
    }

    fn nil() -> Behaviour {
        Behaviour::Nil
    }

    #[test]
    fn parses_nil_and_assignment() {
        assert_eq!(b("nil"), nil());
        assert_eq!(
            b("x3 = 42"),
            Behaviour::assign(Variable(3), Expr::IntLit(42))
        );
    }

    #[test]
    fn seq_binds_tighter_than_par() {
        assert_eq!(
            b("nil; nil | nil"),
            Behaviour::par(Behaviour::seq(nil(), nil()), nil())
        );
    }

    #[test]
    fn seq_and_par_associate_to_the_right() {
        assert_eq!(
            b("nil; nil; nil"),
            Behaviour::seq(nil(), Behaviour::seq(nil(), nil()))
        );
        assert_eq!(
            b("nil | nil | nil"),
            Behaviour::par(nil(), Behaviour::par(nil(), nil()))
        );
    }

    #[test]
    fn parentheses_override_grouping() {
        assert_eq!(
            b("(nil | nil); nil"),
            Behaviour::seq(Behaviour::par(nil(), nil()), nil())
        );
        assert_eq!(
            b("(nil; nil); nil"),
            Behaviour::seq(Behaviour::seq(nil(), nil()), nil())
        );
    }

    #[test]
    fn if_and_while_take_atom_bodies() {
        assert_eq!(
            b("if true then x0 = 1 else nil; nil"),
            Behaviour::seq(
                Behaviour::if_then_else(
                    Expr::BoolLit(true),
                    Behaviour::assign(Variable(0), Expr::IntLit(1)),
                    nil()
                ),
                nil()
            )
        );
        assert_eq!(
            b("while [x0 < 2] (x0 = 1; nil)"),
            Behaviour::while_do(
                Expr::bin(BinOp::Lt, Expr::Var(Variable(0)), Expr::IntLit(2)),
                Behaviour::seq(Behaviour::assign(Variable(0), Expr::IntLit(1)), nil())
            )
        );
    }

    #[test]
    fn parses_communication_atoms() {
        let o = || Ident::new("o").unwrap();
        let l = || Ident::new("l").unwrap();
        assert_eq!(b("o(x0)"), Behaviour::Input(Eta::OneWay(o(), Variable(0))));
        assert_eq!(
            b("o(x0)(x1){ nil }"),
            Behaviour::Input(Eta::RequestResponse(
                o(),
                Variable(0),
                Variable(1),
                Box::new(nil())
            ))
        );
        assert_eq!(
            b("o @ l(1)"),
            Behaviour::Output(EtaHat::Notification(o(), l(), Expr::IntLit(1)))
        );
        assert_eq!(
            b("o @ l(1)(x2)"),
            Behaviour::Output(EtaHat::SolicitResponse(
                o(),
                l(),
                Expr::IntLit(1),
                Variable(2)
            ))
        );
        assert_eq!(
            b("wait(c, o, l, x0)"),
            Behaviour::Wait(Ident::new("c").unwrap(), o(), l(), Variable(0))
        );
        assert_eq!(
            b("exec(c, o, x0){ nil }"),
            Behaviour::Exec(Ident::new("c").unwrap(), o(), Variable(0), Box::new(nil()))
        );
    }

    #[test]
    fn parses_input_choice() {
        let parsed = b("inputchoice [o(x0)]{ nil } [p(x1)(x2){ nil }]{ x0 = 1 }");
        let Behaviour::InputChoice(branches) = parsed else {
            panic!("expected an input choice");
        };
        assert_eq!(branches.len(), 2);
        assert!(matches!(branches[0].0, Eta::OneWay(_, Variable(0))));
        assert!(matches!(branches[1].0, Eta::RequestResponse(..)));
    }

    #[test]
    fn input_choice_requires_a_branch() {
        assert!(matches!(
            parse_behaviour("inputchoice"),
            Err(ParseError::EmptyChoice { .. })
        ));
    }

    #[test]
    fn expression_precedence_and_associativity() {
        assert_eq!(
            b("x0 = true || false && 1 < 2"),
            Behaviour::assign(
                Variable(0),
                Expr::bin(
                    BinOp::Or,
                    Expr::BoolLit(true),
                    Expr::bin(
                        BinOp::And,
                        Expr::BoolLit(false),
                        Expr::bin(BinOp::Lt, Expr::IntLit(1), Expr::IntLit(2))
                    )
                )
            )
        );
        assert_eq!(
            b("x0 = true || false || true"),
            Behaviour::assign(
                Variable(0),
                Expr::bin(
                    BinOp::Or,
                    Expr::bin(BinOp::Or, Expr::BoolLit(true), Expr::BoolLit(false)),
                    Expr::BoolLit(true)
                )
            )
        );
        assert_eq!(
            b("x0 = !x1 == true"),
            Behaviour::assign(
                Variable(0),
                Expr::bin(
                    BinOp::Eq,
                    Expr::negate(Expr::Var(Variable(1))),
                    Expr::BoolLit(true)
                )
            )
        );
    }

    #[test]
    fn comparisons_do_not_chain() {
        assert!(parse_behaviour("x0 = 1 < 2 < 3").is_err());
        assert_eq!(
            b("x0 = (1 < 2) == true"),
            Behaviour::assign(
                Variable(0),
                Expr::bin(
                    BinOp::Eq,
                    Expr::bin(BinOp::Lt, Expr::IntLit(1), Expr::IntLit(2)),
                    Expr::BoolLit(true)
                )
            )
        );
    }

    #[test]
    fn span_tree_covers_every_position() {
        let src = "nil; (nil | x0 = true)";
        let parsed = Session::new(VarMode::Indexed).parse_behaviour(src).unwrap();
        for pos in positions(&parsed.behaviour) {
            let span = parsed.spans.at(&pos).unwrap();
            assert!(span.start < span.end, "empty span at {pos}");
        }
        assert_eq!(
            parsed.spans.at(&Position::root()).unwrap(),
            Span::new(0, 22)
        );
        let par_pos = Position::root().child(ChildSel::SeqSecond);
        // The parenthesised group includes its parentheses.
        assert_eq!(parsed.spans.at(&par_pos).unwrap(), Span::new(5, 22));
        let assign_pos = par_pos.child(ChildSel::ParRight);
        assert_eq!(parsed.spans.at(&assign_pos).unwrap(), Span::new(12, 21));
    }

    #[test]
    fn paths_mode_numbers_variables_by_first_occurrence() {
        let mut session = Session::new(VarMode::Paths);
        let g = session
            .parse_context("{ amount : int, amount.fruit : bool }")
            .unwrap();
        let parsed = session
            .parse_behaviour("amount.fruit = true; amount = 2; total = 3")
            .unwrap();
        assert_eq!(
            g,
            Context::leaf(vec![
                TypeDecl::VarDecl(Variable(0), NativeType::Int),
                TypeDecl::VarDecl(Variable(1), NativeType::Bool),
            ])
            .unwrap()
        );
        assert_eq!(
            parsed.behaviour,
            Behaviour::seq(
                Behaviour::assign(Variable(1), Expr::BoolLit(true)),
                Behaviour::seq(
                    Behaviour::assign(Variable(0), Expr::IntLit(2)),
                    Behaviour::assign(Variable(2), Expr::IntLit(3))
                )
            )
        );
        assert_eq!(session.vars().len(), 3);
    }

    #[test]
    fn indexed_mode_rejects_dotted_names() {
        assert!(parse_behaviour("a.b = 1").is_err());
        assert!(parse_behaviour("amount = 1").is_err());
    }

    #[test]
    fn parses_context_declarations() {
        assert_eq!(parse_context("{ }").unwrap(), Context::empty_leaf());
        assert_eq!(parse_context("{}").unwrap(), Context::empty_leaf());
        let g = parse_context(
            "{ x0 : int, o : <string>, p : <int, bool>, q @ l : <raw>, r @ l : <void, long> }",
        )
        .unwrap();
        let o = |s: &str| Ident::new(s).unwrap();
        assert_eq!(
            g,
            Context::leaf(vec![
                TypeDecl::VarDecl(Variable(0), NativeType::Int),
                TypeDecl::InputOneWay(o("o"), NativeType::String),
                TypeDecl::InputReqRes(o("p"), NativeType::Int, NativeType::Bool),
                TypeDecl::OutputOneWay(o("q"), o("l"), NativeType::Raw),
                TypeDecl::OutputReqRes(o("r"), o("l"), NativeType::Void, NativeType::Long),
            ])
            .unwrap()
        );
    }

    #[test]
    fn context_ampersand_is_left_associative() {
        let a = parse_context("{ } & { x0 : int } & { }").unwrap();
        assert_eq!(
            a,
            Context::par(
                Context::par(
                    Context::empty_leaf(),
                    Context::leaf(vec![TypeDecl::VarDecl(Variable(0), NativeType::Int)]).unwrap()
                ),
                Context::empty_leaf()
            )
        );
        let g = parse_context("{ } & ({ } & { })").unwrap();
        assert_eq!(
            g,
            Context::par(
                Context::empty_leaf(),
                Context::par(Context::empty_leaf(), Context::empty_leaf())
            )
        );
    }

    #[test]
    fn duplicate_declarations_are_reported_with_the_block_span() {
        let err = parse_context("{ x0 : int, x0 : bool }").unwrap_err();
        match err {
            ParseError::DuplicateDecl { span, source } => {
                assert_eq!(span, Span::new(0, 23));
                assert_eq!(source, CtxError::DuplicateVar(Variable(0)));
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn trailing_tokens_are_rejected() {
        assert!(parse_behaviour("nil nil").is_err());
        assert!(parse_context("{ } { }").is_err());
    }

    #[test]
    fn error_spans_point_at_the_offending_token() {
        let err = parse_behaviour("nil;; nil").unwrap_err();
        assert_eq!(err.span(), Span::new(4, 5));
        let err = parse_behaviour("if true nil else nil").unwrap_err();
        assert_eq!(err.span(), Span::new(8, 11));
    }
}
