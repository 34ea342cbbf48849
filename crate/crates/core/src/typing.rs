//! The flow-sensitive typing judgment `Γ ⊢ B ▷ Γ′`.
//!
//! Checking a behaviour under a context either fails with a
//! [`TypeError`] or produces a [`Derivation`]: a tree with one node per
//! applied rule, recording the rule name, the input and output
//! contexts, the subject behaviour, and the premises.  Derivations are
//! plain data — [`verify_derivation`] re-checks every node against its
//! rule independently of the checker, so a derivation can be stored,
//! transformed, and re-validated.
//!
//! The core rules cover `nil`, conditionals, loops, sequencing, and
//! parallel composition, whose contexts split across a `&`-pairing.
//! The remaining constructs (assignment, communication, input choice)
//! are extensions, and their rule names carry a `*` suffix.  `wait` and
//! `exec` are runtime artifacts: they parse, but no typing rule covers
//! them.

use std::fmt;

use crate::ast::{Behaviour, BinOp, ChildSel, Eta, EtaHat, Expr, Position};
use crate::context::{
    find_input, find_output, lookup_var, update_var, Context, NativeType, TypeDecl,
};

// ---------------------------------------------------------------------------
// Rules and derivations
// ---------------------------------------------------------------------------

/// The typing rule applied at a derivation node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RuleTag {
    TNil,
    TIf,
    TWhile,
    TSeq,
    TPar,
    TAssign,
    TInOneWay,
    TInReqRes,
    TOutNotify,
    TOutSolicit,
    TChoice,
}

impl RuleTag {
    /// Rule names as they appear in rendered derivations.  A `*` marks
    /// the rules that extend the core judgment.
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::TNil => "t-nil",
            RuleTag::TIf => "t-if",
            RuleTag::TWhile => "t-while",
            RuleTag::TSeq => "t-seq",
            RuleTag::TPar => "t-par",
            RuleTag::TAssign => "t-assign*",
            RuleTag::TInOneWay => "t-in-ow*",
            RuleTag::TInReqRes => "t-in-rr*",
            RuleTag::TOutNotify => "t-out-notify*",
            RuleTag::TOutSolicit => "t-out-solicit*",
            RuleTag::TChoice => "t-choice*",
        }
    }

    pub fn is_core(self) -> bool {
        matches!(
            self,
            RuleTag::TNil | RuleTag::TIf | RuleTag::TWhile | RuleTag::TSeq | RuleTag::TPar
        )
    }
}

impl fmt::Display for RuleTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A recorded expression judgment `e : T`, kept as a side premise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExprTyping {
    pub expr: Expr,
    pub ty: NativeType,
}

/// One node of a typing derivation: `input ⊢ subject ▷ output` by
/// `rule`, from the sub-derivations in `premises` and the expression
/// judgments in `expr_premises`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Derivation {
    pub rule: RuleTag,
    pub input: Context,
    pub subject: Behaviour,
    pub output: Context,
    pub expr_premises: Vec<ExprTyping>,
    pub premises: Vec<Derivation>,
}

impl Derivation {
    /// Renders the derivation as one judgment per line, premises
    /// indented two spaces below their conclusion.
    fn render(&self, depth: usize, out: &mut String) {
        for _ in 0..depth {
            out.push_str("  ");
        }
        out.push_str(&format!(
            "{}  {} \u{22a2} {} \u{25b7} {}\n",
            self.rule, self.input, self.subject, self.output
        ));
        for p in &self.premises {
            p.render(depth + 1, out);
        }
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        self.render(0, &mut out);
        f.write_str(out.trim_end_matches('\n'))
    }
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeErrorKind {
    /// An expression reads a variable the context does not declare.
    UnboundVariable,
    /// No input (or output at the right location) declaration matches.
    UndeclaredOperation,
    /// The declaration exists but is the wrong kind of port.
    OperationMismatch,
    /// An expression or reply has a type other than the required one.
    ExprTypeMismatch,
    /// An `if` or `while` guard is not a bool.
    GuardNotBool,
    /// The branches of an `if` or input choice end in different contexts.
    BranchMismatch,
    /// A `while` body does not restore its starting context.
    LoopContextChanged,
    /// Parallel composition needs a `&`-paired context.
    ContextShape,
    /// The construct has no typing rule (or is outside the core rules).
    Unsupported,
}

impl TypeErrorKind {
    pub fn slug(self) -> &'static str {
        match self {
            TypeErrorKind::UnboundVariable => "unbound-variable",
            TypeErrorKind::UndeclaredOperation => "undeclared-operation",
            TypeErrorKind::OperationMismatch => "operation-mismatch",
            TypeErrorKind::ExprTypeMismatch => "expr-type",
            TypeErrorKind::GuardNotBool => "guard-not-bool",
            TypeErrorKind::BranchMismatch => "branch-mismatch",
            TypeErrorKind::LoopContextChanged => "loop-context",
            TypeErrorKind::ContextShape => "context-shape",
            TypeErrorKind::Unsupported => "unsupported",
        }
    }
}

impl fmt::Display for TypeErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

/// A typing failure, with the position of the behaviour node that
/// caused it (when one is known).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{kind}: {detail}")]
pub struct TypeError {
    pub kind: TypeErrorKind,
    pub at: Option<Position>,
    pub detail: String,
}

impl TypeError {
    fn new(kind: TypeErrorKind, detail: impl Into<String>) -> TypeError {
        TypeError {
            kind,
            at: None,
            detail: detail.into(),
        }
    }

    /// Attaches `pos` unless an inner (deeper) position is already set.
    fn located(mut self, pos: &Position) -> TypeError {
        if self.at.is_none() {
            self.at = Some(pos.clone());
        }
        self
    }
}

/// A defect found while re-checking a derivation node.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid derivation at {at}: {detail}")]
pub struct VerifyError {
    pub at: Position,
    pub detail: String,
}

// ---------------------------------------------------------------------------
// Expression typing
// ---------------------------------------------------------------------------

/// Types an expression under a context.  Comparisons and the boolean
/// connectives yield `bool`; `==` takes operands of one shared type,
/// `<` additionally requires that type to be numeric.
pub fn type_of_expr(e: &Expr, g: &Context) -> Result<NativeType, TypeError> {
    match e {
        Expr::BoolLit(_) => Ok(NativeType::Bool),
        Expr::IntLit(_) => Ok(NativeType::Int),
        Expr::DoubleLit(_) => Ok(NativeType::Double),
        Expr::LongLit(_) => Ok(NativeType::Long),
        Expr::StringLit(_) => Ok(NativeType::String),
        Expr::Var(x) => lookup_var(*x, g).map(|(t, _)| t).ok_or_else(|| {
            TypeError::new(
                TypeErrorKind::UnboundVariable,
                format!("variable {x} is not declared in {g}"),
            )
        }),
        Expr::Not(inner) => {
            let t = type_of_expr(inner, g)?;
            if t == NativeType::Bool {
                Ok(NativeType::Bool)
            } else {
                Err(TypeError::new(
                    TypeErrorKind::ExprTypeMismatch,
                    format!("operand of ! has type {t}, expected bool"),
                ))
            }
        }
        Expr::BinOp(op, a, b) => {
            let ta = type_of_expr(a, g)?;
            let tb = type_of_expr(b, g)?;
            match op {
                BinOp::And | BinOp::Or => {
                    if ta == NativeType::Bool && tb == NativeType::Bool {
                        Ok(NativeType::Bool)
                    } else {
                        Err(TypeError::new(
                            TypeErrorKind::ExprTypeMismatch,
                            format!(
                                "operands of {} have types {ta} and {tb}, expected bool",
                                op.symbol()
                            ),
                        ))
                    }
                }
                BinOp::Eq => {
                    if ta == tb {
                        Ok(NativeType::Bool)
                    } else {
                        Err(TypeError::new(
                            TypeErrorKind::ExprTypeMismatch,
                            format!("operands of == have different types {ta} and {tb}"),
                        ))
                    }
                }
                BinOp::Lt => {
                    if ta == tb && ta.is_numeric() {
                        Ok(NativeType::Bool)
                    } else {
                        Err(TypeError::new(
                            TypeErrorKind::ExprTypeMismatch,
                            format!(
                                "operands of < have types {ta} and {tb}, expected one numeric type"
                            ),
                        ))
                    }
                }
            }
        }
    }
}

// ---------------------------------------------------------------------------
// The checker
// ---------------------------------------------------------------------------

/// Which rules the checker may use.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum CheckMode {
    /// All rules, including the `*`-extensions.
    #[default]
    Full,
    /// Core rules only: `nil`, `if`, `while`, `;`, `|`.
    CoreOnly,
}

/// Checks `b` under `g` with every rule available.
pub fn check_behaviour(g: &Context, b: &Behaviour) -> Result<Derivation, TypeError> {
    check_behaviour_mode(g, b, CheckMode::Full)
}

/// Checks `b` under `g`, optionally restricted to the core rules.
pub fn check_behaviour_mode(
    g: &Context,
    b: &Behaviour,
    mode: CheckMode,
) -> Result<Derivation, TypeError> {
    Checker { mode }.check(g, b, &Position::root())
}

struct Checker {
    mode: CheckMode,
}

impl Checker {
    fn check(&self, g: &Context, b: &Behaviour, pos: &Position) -> Result<Derivation, TypeError> {
        match b {
            Behaviour::Nil => Ok(Derivation {
                rule: RuleTag::TNil,
                input: g.clone(),
                subject: b.clone(),
                output: g.clone(),
                expr_premises: Vec::new(),
                premises: Vec::new(),
            }),

            Behaviour::If(guard, then_b, else_b) => {
                self.check_guard(guard, g, pos)?;
                let d_then = self.check(g, then_b, &pos.child(ChildSel::IfThen))?;
                let d_else = self.check(g, else_b, &pos.child(ChildSel::IfElse))?;
                if d_then.output != d_else.output {
                    return Err(TypeError::new(
                        TypeErrorKind::BranchMismatch,
                        format!(
                            "the branches end in different contexts: {} vs {}",
                            d_then.output, d_else.output
                        ),
                    )
                    .located(pos));
                }
                Ok(Derivation {
                    rule: RuleTag::TIf,
                    input: g.clone(),
                    subject: b.clone(),
                    output: d_then.output.clone(),
                    expr_premises: vec![ExprTyping {
                        expr: guard.clone(),
                        ty: NativeType::Bool,
                    }],
                    premises: vec![d_then, d_else],
                })
            }

            Behaviour::While(guard, body) => {
                self.check_guard(guard, g, pos)?;
                let d_body = self.check(g, body, &pos.child(ChildSel::WhileBody))?;
                if d_body.output != *g {
                    return Err(TypeError::new(
                        TypeErrorKind::LoopContextChanged,
                        format!(
                            "the loop body changes the context from {} to {}",
                            g, d_body.output
                        ),
                    )
                    .located(pos));
                }
                Ok(Derivation {
                    rule: RuleTag::TWhile,
                    input: g.clone(),
                    subject: b.clone(),
                    output: g.clone(),
                    expr_premises: vec![ExprTyping {
                        expr: guard.clone(),
                        ty: NativeType::Bool,
                    }],
                    premises: vec![d_body],
                })
            }

            Behaviour::Seq(first, second) => {
                let d1 = self.check(g, first, &pos.child(ChildSel::SeqFirst))?;
                let d2 = self.check(&d1.output, second, &pos.child(ChildSel::SeqSecond))?;
                Ok(Derivation {
                    rule: RuleTag::TSeq,
                    input: g.clone(),
                    subject: b.clone(),
                    output: d2.output.clone(),
                    expr_premises: Vec::new(),
                    premises: vec![d1, d2],
                })
            }

            Behaviour::Par(left, right) => {
                let Context::Par(g1, g2) = g else {
                    return Err(TypeError::new(
                        TypeErrorKind::ContextShape,
                        format!("parallel composition needs a \"&\"-paired context, got {g}"),
                    )
                    .located(pos));
                };
                let d1 = self.check(g1, left, &pos.child(ChildSel::ParLeft))?;
                let d2 = self.check(g2, right, &pos.child(ChildSel::ParRight))?;
                Ok(Derivation {
                    rule: RuleTag::TPar,
                    input: g.clone(),
                    subject: b.clone(),
                    output: Context::par(d1.output.clone(), d2.output.clone()),
                    expr_premises: Vec::new(),
                    premises: vec![d1, d2],
                })
            }

            Behaviour::Assign(x, e) => {
                self.extension(b, pos)?;
                let t = type_of_expr(e, g).map_err(|err| err.located(pos))?;
                Ok(Derivation {
                    rule: RuleTag::TAssign,
                    input: g.clone(),
                    subject: b.clone(),
                    output: update_var(*x, t, g),
                    expr_premises: vec![ExprTyping {
                        expr: e.clone(),
                        ty: t,
                    }],
                    premises: Vec::new(),
                })
            }

            Behaviour::Input(eta) => {
                self.extension(b, pos)?;
                self.check_eta(g, eta, pos, pos.child(ChildSel::InputBody))
            }

            Behaviour::Output(eta_hat) => {
                self.extension(b, pos)?;
                self.check_eta_hat(g, eta_hat, b, pos)
            }

            Behaviour::InputChoice(branches) => {
                self.extension(b, pos)?;
                if branches.is_empty() {
                    return Err(TypeError::new(
                        TypeErrorKind::Unsupported,
                        "an input choice needs at least one branch",
                    )
                    .located(pos));
                }
                let mut premises = Vec::new();
                let mut output: Option<Context> = None;
                for (i, (eta, body)) in branches.iter().enumerate() {
                    let d_in =
                        self.check_eta(g, eta, pos, pos.child(ChildSel::ChoiceInputBody(i)))?;
                    let d_body =
                        self.check(&d_in.output, body, &pos.child(ChildSel::ChoiceBody(i)))?;
                    match &output {
                        None => output = Some(d_body.output.clone()),
                        Some(prev) if *prev != d_body.output => {
                            return Err(TypeError::new(
                                TypeErrorKind::BranchMismatch,
                                format!(
                                    "choice branch {} ends in {}, but earlier branches end in {}",
                                    i + 1,
                                    d_body.output,
                                    prev
                                ),
                            )
                            .located(pos));
                        }
                        Some(_) => {}
                    }
                    premises.push(d_in);
                    premises.push(d_body);
                }
                Ok(Derivation {
                    rule: RuleTag::TChoice,
                    input: g.clone(),
                    subject: b.clone(),
                    output: output.expect("input choices have at least one branch"),
                    expr_premises: Vec::new(),
                    premises,
                })
            }

            Behaviour::Wait(_, _, _, _) | Behaviour::Exec(_, _, _, _) => Err(TypeError::new(
                TypeErrorKind::Unsupported,
                "wait/exec are runtime artifacts with no typing rule",
            )
            .located(pos)),
        }
    }

    /// Types an input guard η used as a behaviour: either directly
    /// (`Input`) or as the guard of a choice branch.  `body_pos` is
    /// where the request-response body lives in the enclosing
    /// behaviour.
    fn check_eta(
        &self,
        g: &Context,
        eta: &Eta,
        pos: &Position,
        body_pos: Position,
    ) -> Result<Derivation, TypeError> {
        let subject = Behaviour::Input(eta.clone());
        match eta {
            Eta::OneWay(op, x) => {
                let decl = find_input(g, op).ok_or_else(|| {
                    TypeError::new(
                        TypeErrorKind::UndeclaredOperation,
                        format!("no input declaration for operation {op} in {g}"),
                    )
                    .located(pos)
                })?;
                let TypeDecl::InputOneWay(_, t) = decl.1 else {
                    return Err(TypeError::new(
                        TypeErrorKind::OperationMismatch,
                        format!("operation {op} is declared request-response but used one-way"),
                    )
                    .located(pos));
                };
                Ok(Derivation {
                    rule: RuleTag::TInOneWay,
                    input: g.clone(),
                    subject,
                    output: update_var(*x, t, g),
                    expr_premises: Vec::new(),
                    premises: Vec::new(),
                })
            }
            Eta::RequestResponse(op, x, reply, body) => {
                let decl = find_input(g, op).ok_or_else(|| {
                    TypeError::new(
                        TypeErrorKind::UndeclaredOperation,
                        format!("no input declaration for operation {op} in {g}"),
                    )
                    .located(pos)
                })?;
                let TypeDecl::InputReqRes(_, t_req, t_resp) = decl.1 else {
                    return Err(TypeError::new(
                        TypeErrorKind::OperationMismatch,
                        format!("operation {op} is declared one-way but used request-response"),
                    )
                    .located(pos));
                };
                let g_body = update_var(*x, t_req, g);
                let d_body = self.check(&g_body, body, &body_pos)?;
                match lookup_var(*reply, &d_body.output) {
                    None => {
                        return Err(TypeError::new(
                            TypeErrorKind::UnboundVariable,
                            format!(
                                "reply variable {reply} is not declared after the body, in {}",
                                d_body.output
                            ),
                        )
                        .located(pos))
                    }
                    Some((t, _)) if t != t_resp => {
                        return Err(TypeError::new(
                            TypeErrorKind::ExprTypeMismatch,
                            format!(
                            "reply variable {reply} has type {t} after the body, expected {t_resp}"
                        ),
                        )
                        .located(pos))
                    }
                    Some(_) => {}
                }
                let output = d_body.output.clone();
                Ok(Derivation {
                    rule: RuleTag::TInReqRes,
                    input: g.clone(),
                    subject,
                    output,
                    expr_premises: Vec::new(),
                    premises: vec![d_body],
                })
            }
        }
    }

    fn check_eta_hat(
        &self,
        g: &Context,
        eta_hat: &EtaHat,
        b: &Behaviour,
        pos: &Position,
    ) -> Result<Derivation, TypeError> {
        match eta_hat {
            EtaHat::Notification(op, loc, e) => {
                let decl = find_output(g, op, loc).ok_or_else(|| {
                    TypeError::new(
                        TypeErrorKind::UndeclaredOperation,
                        format!("no output declaration for {op} @ {loc} in {g}"),
                    )
                    .located(pos)
                })?;
                let TypeDecl::OutputOneWay(_, _, t) = decl.1 else {
                    return Err(TypeError::new(
                        TypeErrorKind::OperationMismatch,
                        format!(
                            "{op} @ {loc} is declared request-response but used as a notification"
                        ),
                    )
                    .located(pos));
                };
                let te = type_of_expr(e, g).map_err(|err| err.located(pos))?;
                if te != t {
                    return Err(TypeError::new(
                        TypeErrorKind::ExprTypeMismatch,
                        format!("message has type {te}, but {op} @ {loc} carries {t}"),
                    )
                    .located(pos));
                }
                Ok(Derivation {
                    rule: RuleTag::TOutNotify,
                    input: g.clone(),
                    subject: b.clone(),
                    output: g.clone(),
                    expr_premises: vec![ExprTyping {
                        expr: e.clone(),
                        ty: t,
                    }],
                    premises: Vec::new(),
                })
            }
            EtaHat::SolicitResponse(op, loc, e, x) => {
                let decl = find_output(g, op, loc).ok_or_else(|| {
                    TypeError::new(
                        TypeErrorKind::UndeclaredOperation,
                        format!("no output declaration for {op} @ {loc} in {g}"),
                    )
                    .located(pos)
                })?;
                let TypeDecl::OutputReqRes(_, _, t_req, t_resp) = decl.1 else {
                    return Err(TypeError::new(
                        TypeErrorKind::OperationMismatch,
                        format!("{op} @ {loc} is declared one-way but used as a solicit-response"),
                    )
                    .located(pos));
                };
                let te = type_of_expr(e, g).map_err(|err| err.located(pos))?;
                if te != t_req {
                    return Err(TypeError::new(
                        TypeErrorKind::ExprTypeMismatch,
                        format!("request has type {te}, but {op} @ {loc} expects {t_req}"),
                    )
                    .located(pos));
                }
                Ok(Derivation {
                    rule: RuleTag::TOutSolicit,
                    input: g.clone(),
                    subject: b.clone(),
                    output: update_var(*x, t_resp, g),
                    expr_premises: vec![ExprTyping {
                        expr: e.clone(),
                        ty: t_req,
                    }],
                    premises: Vec::new(),
                })
            }
        }
    }

    fn check_guard(&self, guard: &Expr, g: &Context, pos: &Position) -> Result<(), TypeError> {
        let t = type_of_expr(guard, g).map_err(|err| err.located(pos))?;
        if t != NativeType::Bool {
            return Err(TypeError::new(
                TypeErrorKind::GuardNotBool,
                format!("guard {guard} has type {t}, expected bool"),
            )
            .located(pos));
        }
        Ok(())
    }

    fn extension(&self, b: &Behaviour, pos: &Position) -> Result<(), TypeError> {
        if self.mode == CheckMode::CoreOnly {
            return Err(TypeError::new(
                TypeErrorKind::Unsupported,
                format!("\"{b}\" is outside the core rules (nil, if, while, \";\", \"|\")"),
            )
            .located(pos));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Verification
// ---------------------------------------------------------------------------

/// Re-checks every node of a derivation against its rule.  Succeeds
/// exactly when each node's conclusion follows from its premises: the
/// rule fits the subject, contexts are threaded as the rule demands,
/// and every side condition holds under the node's input context.
pub fn verify_derivation(d: &Derivation) -> Result<(), VerifyError> {
    verify_at(d, &Position::root())
}

fn verify_at(d: &Derivation, pos: &Position) -> Result<(), VerifyError> {
    verify_node_local(d).map_err(|detail| VerifyError {
        at: pos.clone(),
        detail,
    })?;
    if d.rule == RuleTag::TChoice {
        // Choice premises alternate between an input-guard derivation
        // and the branch continuation; the guard's body premise sits at
        // the branch's `choice.N.eta` position.
        for (i, pair) in d.premises.chunks(2).enumerate() {
            let d_in = &pair[0];
            verify_node_local(d_in).map_err(|detail| VerifyError {
                at: pos.clone(),
                detail: format!("branch {} input guard: {detail}", i + 1),
            })?;
            if let Some(body) = d_in.premises.first() {
                verify_at(body, &pos.child(ChildSel::ChoiceInputBody(i)))?;
            }
            verify_at(&pair[1], &pos.child(ChildSel::ChoiceBody(i)))?;
        }
        return Ok(());
    }
    let sels = premise_selectors(d.rule);
    for (premise, sel) in d.premises.iter().zip(sels) {
        verify_at(premise, &pos.child(*sel))?;
    }
    Ok(())
}

/// The behaviour-child selector of each premise, for the rules whose
/// premises line up with the subject's children.
fn premise_selectors(rule: RuleTag) -> &'static [ChildSel] {
    match rule {
        RuleTag::TIf => &[ChildSel::IfThen, ChildSel::IfElse],
        RuleTag::TWhile => &[ChildSel::WhileBody],
        RuleTag::TSeq => &[ChildSel::SeqFirst, ChildSel::SeqSecond],
        RuleTag::TPar => &[ChildSel::ParLeft, ChildSel::ParRight],
        RuleTag::TInReqRes => &[ChildSel::InputBody],
        _ => &[],
    }
}

fn ensure(cond: bool, detail: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(detail())
    }
}

fn expect_expr_premises(d: &Derivation, expected: &[(&Expr, NativeType)]) -> Result<(), String> {
    ensure(d.expr_premises.len() == expected.len(), || {
        format!(
            "{} records {} expression premises, expected {}",
            d.rule,
            d.expr_premises.len(),
            expected.len()
        )
    })?;
    for (recorded, (expr, ty)) in d.expr_premises.iter().zip(expected) {
        ensure(recorded.expr == **expr && recorded.ty == *ty, || {
            format!(
                "recorded expression premise {} : {} does not match required {} : {}",
                recorded.expr, recorded.ty, expr, ty
            )
        })?;
        match type_of_expr(expr, &d.input) {
            Ok(t) => ensure(t == *ty, || {
                format!(
                    "expression {expr} has type {t} under {}, premise claims {ty}",
                    d.input
                )
            })?,
            Err(e) => return Err(format!("expression premise {expr} does not type: {e}")),
        }
    }
    Ok(())
}

fn expect_premises(d: &Derivation, n: usize) -> Result<(), String> {
    ensure(d.premises.len() == n, || {
        format!("{} has {} premises, expected {n}", d.rule, d.premises.len())
    })
}

/// Checks one derivation node in isolation: does its conclusion follow
/// from its rule, its premises' conclusions, and the side conditions
/// evaluated in its input context?  Premise sub-derivations are taken
/// at face value; [`verify_derivation`] recurses over them.
pub fn verify_node_local(d: &Derivation) -> Result<(), String> {
    match (d.rule, &d.subject) {
        (RuleTag::TNil, Behaviour::Nil) => {
            expect_premises(d, 0)?;
            expect_expr_premises(d, &[])?;
            ensure(d.output == d.input, || {
                "t-nil must leave the context unchanged".to_string()
            })
        }

        (RuleTag::TIf, Behaviour::If(guard, then_b, else_b)) => {
            expect_premises(d, 2)?;
            expect_expr_premises(d, &[(guard, NativeType::Bool)])?;
            let (p_then, p_else) = (&d.premises[0], &d.premises[1]);
            ensure(
                p_then.subject == **then_b && p_else.subject == **else_b,
                || "t-if premises must cover the two branches".to_string(),
            )?;
            ensure(p_then.input == d.input && p_else.input == d.input, || {
                "t-if must check both branches under the node's context".to_string()
            })?;
            ensure(p_then.output == p_else.output, || {
                format!(
                    "t-if branches end in different contexts: {} vs {}",
                    p_then.output, p_else.output
                )
            })?;
            ensure(d.output == p_then.output, || {
                "t-if conclusion must take the branches' common context".to_string()
            })
        }

        (RuleTag::TWhile, Behaviour::While(guard, body)) => {
            expect_premises(d, 1)?;
            expect_expr_premises(d, &[(guard, NativeType::Bool)])?;
            let p = &d.premises[0];
            ensure(p.subject == **body, || {
                "t-while premise must cover the loop body".to_string()
            })?;
            ensure(p.input == d.input, || {
                "t-while must check the body under the node's context".to_string()
            })?;
            ensure(p.output == d.input, || {
                format!(
                    "t-while body must restore the context, but {} became {}",
                    d.input, p.output
                )
            })?;
            ensure(d.output == d.input, || {
                "t-while must leave the context unchanged".to_string()
            })
        }

        (RuleTag::TSeq, Behaviour::Seq(first, second)) => {
            expect_premises(d, 2)?;
            expect_expr_premises(d, &[])?;
            let (p1, p2) = (&d.premises[0], &d.premises[1]);
            ensure(p1.subject == **first && p2.subject == **second, || {
                "t-seq premises must cover the two steps".to_string()
            })?;
            ensure(p1.input == d.input, || {
                "t-seq must start the first step in the node's context".to_string()
            })?;
            ensure(p2.input == p1.output, || {
                format!(
                    "t-seq must thread the context: first step ends in {}, second starts in {}",
                    p1.output, p2.input
                )
            })?;
            ensure(d.output == p2.output, || {
                "t-seq conclusion must take the second step's context".to_string()
            })
        }

        (RuleTag::TPar, Behaviour::Par(left, right)) => {
            expect_premises(d, 2)?;
            expect_expr_premises(d, &[])?;
            let Context::Par(g1, g2) = &d.input else {
                return Err("t-par needs a \"&\"-paired input context".to_string());
            };
            let (p1, p2) = (&d.premises[0], &d.premises[1]);
            ensure(p1.subject == **left && p2.subject == **right, || {
                "t-par premises must cover the two sides".to_string()
            })?;
            ensure(p1.input == **g1 && p2.input == **g2, || {
                "t-par must split the paired context between the sides".to_string()
            })?;
            ensure(
                d.output == Context::par(p1.output.clone(), p2.output.clone()),
                || "t-par conclusion must pair the sides' contexts".to_string(),
            )
        }

        (RuleTag::TAssign, Behaviour::Assign(x, e)) => {
            expect_premises(d, 0)?;
            let t = match type_of_expr(e, &d.input) {
                Ok(t) => t,
                Err(err) => return Err(format!("assigned expression does not type: {err}")),
            };
            expect_expr_premises(d, &[(e, t)])?;
            ensure(d.output == update_var(*x, t, &d.input), || {
                format!("t-assign* must set {x} : {t} in the context")
            })
        }

        (RuleTag::TInOneWay, Behaviour::Input(Eta::OneWay(op, x))) => {
            expect_premises(d, 0)?;
            expect_expr_premises(d, &[])?;
            match find_input(&d.input, op) {
                Some((_, TypeDecl::InputOneWay(_, t))) => {
                    ensure(d.output == update_var(*x, t, &d.input), || {
                        format!("t-in-ow* must set {x} : {t} in the context")
                    })
                }
                Some(_) => Err(format!("operation {op} is not declared one-way")),
                None => Err(format!("no input declaration for operation {op}")),
            }
        }

        (RuleTag::TInReqRes, Behaviour::Input(Eta::RequestResponse(op, x, reply, body))) => {
            expect_premises(d, 1)?;
            expect_expr_premises(d, &[])?;
            let Some((_, TypeDecl::InputReqRes(_, t_req, t_resp))) = find_input(&d.input, op)
            else {
                return Err(format!("operation {op} is not declared request-response"));
            };
            let p = &d.premises[0];
            ensure(p.subject == **body, || {
                "t-in-rr* premise must cover the reply body".to_string()
            })?;
            ensure(p.input == update_var(*x, t_req, &d.input), || {
                format!("t-in-rr* must check the body with {x} : {t_req}")
            })?;
            match lookup_var(*reply, &p.output) {
                Some((t, _)) if t == t_resp => {}
                Some((t, _)) => {
                    return Err(format!(
                        "reply variable {reply} has type {t} after the body, expected {t_resp}"
                    ))
                }
                None => return Err(format!("reply variable {reply} is unbound after the body")),
            }
            ensure(d.output == p.output, || {
                "t-in-rr* conclusion must take the body's context".to_string()
            })
        }

        (RuleTag::TOutNotify, Behaviour::Output(EtaHat::Notification(op, loc, e))) => {
            expect_premises(d, 0)?;
            let Some((_, TypeDecl::OutputOneWay(_, _, t))) = find_output(&d.input, op, loc) else {
                return Err(format!("no one-way output declaration for {op} @ {loc}"));
            };
            expect_expr_premises(d, &[(e, t)])?;
            ensure(d.output == d.input, || {
                "t-out-notify* must leave the context unchanged".to_string()
            })
        }

        (RuleTag::TOutSolicit, Behaviour::Output(EtaHat::SolicitResponse(op, loc, e, x))) => {
            expect_premises(d, 0)?;
            let Some((_, TypeDecl::OutputReqRes(_, _, t_req, t_resp))) =
                find_output(&d.input, op, loc)
            else {
                return Err(format!(
                    "no request-response output declaration for {op} @ {loc}"
                ));
            };
            expect_expr_premises(d, &[(e, t_req)])?;
            ensure(d.output == update_var(*x, t_resp, &d.input), || {
                format!("t-out-solicit* must set {x} : {t_resp} in the context")
            })
        }

        (RuleTag::TChoice, Behaviour::InputChoice(branches)) => {
            ensure(!branches.is_empty(), || {
                "t-choice* needs at least one branch".to_string()
            })?;
            expect_expr_premises(d, &[])?;
            expect_premises(d, 2 * branches.len())?;
            for (i, (eta, body)) in branches.iter().enumerate() {
                let d_in = &d.premises[2 * i];
                let d_body = &d.premises[2 * i + 1];
                ensure(d_in.subject == Behaviour::Input(eta.clone()), || {
                    format!("branch {} guard premise must cover its input", i + 1)
                })?;
                ensure(d_in.input == d.input, || {
                    format!("branch {} guard must start in the node's context", i + 1)
                })?;
                ensure(d_body.subject == *body, || {
                    format!("branch {} premise must cover its continuation", i + 1)
                })?;
                ensure(d_body.input == d_in.output, || {
                    format!("branch {} must continue in its guard's context", i + 1)
                })?;
                ensure(d_body.output == d.output, || {
                    format!(
                        "branch {} ends in {}, but the conclusion claims {}",
                        i + 1,
                        d_body.output,
                        d.output
                    )
                })?;
            }
            Ok(())
        }

        (rule, subject) => Err(format!("rule {rule} does not apply to \"{subject}\"")),
    }
}

// ---------------------------------------------------------------------------
