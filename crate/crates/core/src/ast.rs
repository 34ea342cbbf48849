//! Abstract syntax for behaviours.
//!
//! A behaviour is a process-calculus style term: sequencing, parallel
//! composition, conditionals, loops, assignment and message passing
//! over named operations.  Input ports ([`Eta`]) receive on an
//! operation; output ports ([`EtaHat`]) send towards a located
//! operation.  Expressions are side-effect free and are typed by the
//! [`crate::typing`] module.
//!
//! Variables are plain indices ([`Variable`]); source programs that use
//! hierarchical variable paths (`amount.fruit.apple`) are bridged into
//! indices by [`enumerate_variables`].

use std::collections::BTreeSet;
use std::collections::HashMap;
use std::fmt;

use ordered_float::OrderedFloat;

// ---------------------------------------------------------------------------
// Identifiers and variables
// ---------------------------------------------------------------------------

/// A behavioural variable, identified by its index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(pub u32);

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// Error raised when constructing an identifier or variable path from
/// text that does not have identifier syntax.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid identifier {0:?}: expected [A-Za-z_][A-Za-z0-9_]*")]
pub struct InvalidIdent(pub String);

fn is_ident(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// A validated identifier: nonempty, `[A-Za-z_][A-Za-z0-9_]*`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ident(String);

impl Ident {
    pub fn new(s: impl Into<String>) -> Result<Ident, InvalidIdent> {
        let s = s.into();
        if is_ident(&s) {
            Ok(Ident(s))
        } else {
            Err(InvalidIdent(s))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Ident {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::str::FromStr for Ident {
    type Err = InvalidIdent;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ident::new(s)
    }
}

/// Name of a communication operation.
pub type Operation = Ident;
/// Name of a remote location an output is directed at.
pub type Location = Ident;
/// Name of a session channel (used by `wait`/`exec`).
pub type Channel = Ident;

/// A hierarchical variable path such as `amount.fruit.apple`: one or
/// more identifier segments.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VariablePath(Vec<String>);

impl VariablePath {
    pub fn new(segments: Vec<String>) -> Result<VariablePath, InvalidIdent> {
        if segments.is_empty() {
            return Err(InvalidIdent(String::new()));
        }
        for s in &segments {
            if !is_ident(s) {
                return Err(InvalidIdent(s.clone()));
            }
        }
        Ok(VariablePath(segments))
    }

    pub fn segments(&self) -> &[String] {
        &self.0
    }
}

impl fmt::Display for VariablePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0.join("."))
    }
}

impl std::str::FromStr for VariablePath {
    type Err = InvalidIdent;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VariablePath::new(s.split('.').map(str::to_owned).collect())
    }
}

/// The mapping produced by [`enumerate_variables`]: each distinct path
/// is assigned the index of its first occurrence, counting from zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct VariableEnumeration {
    order: Vec<VariablePath>,
    index: HashMap<VariablePath, Variable>,
}

impl VariableEnumeration {
    pub fn index_of(&self, path: &VariablePath) -> Option<Variable> {
        self.index.get(path).copied()
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Pairs `(path, variable)` in first-occurrence order.
    pub fn iter(&self) -> impl Iterator<Item = (&VariablePath, Variable)> {
        self.order
            .iter()
            .enumerate()
            .map(|(i, p)| (p, Variable(i as u32)))
    }

    /// Records `path`, assigning a fresh index on first sight.
    pub fn insert(&mut self, path: VariablePath) -> Variable {
        if let Some(v) = self.index.get(&path) {
            return *v;
        }
        let v = Variable(self.order.len() as u32);
        self.order.push(path.clone());
        self.index.insert(path, v);
        v
    }
}

/// Assigns consecutive indices to variable paths in order of first
/// occurrence.  Repeated paths keep their first index.
pub fn enumerate_variables(paths: &[VariablePath]) -> VariableEnumeration {
    let mut e = VariableEnumeration::default();
    for p in paths {
        e.insert(p.clone());
    }
    e
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

/// Binary operators available in expressions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    /// Logical conjunction `&&` (bool × bool → bool).
    And,
    /// Logical disjunction `||` (bool × bool → bool).
    Or,
    /// Equality `==` (T × T → bool, any native T).
    Eq,
    /// Strict order `<` (numeric T × T → bool).
    Lt,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::And => "&&",
            BinOp::Or => "||",
            BinOp::Eq => "==",
            BinOp::Lt => "<",
        }
    }
}

/// Side-effect free expressions.
///
/// Double literals are stored as [`OrderedFloat`] so that expressions
/// (and the behaviours containing them) have total structural equality
/// and hashing.  The parser only ever produces finite values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    BoolLit(bool),
    IntLit(i32),
    DoubleLit(OrderedFloat<f64>),
    LongLit(i64),
    StringLit(String),
    Var(Variable),
    Not(Box<Expr>),
    BinOp(BinOp, Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn double(v: f64) -> Expr {
        Expr::DoubleLit(OrderedFloat(v))
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::Not(Box::new(e))
    }

    pub fn bin(op: BinOp, l: Expr, r: Expr) -> Expr {
        Expr::BinOp(op, Box::new(l), Box::new(r))
    }
}

// ---------------------------------------------------------------------------
// Communication ports
// ---------------------------------------------------------------------------

/// An input port: how a behaviour receives on an operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Eta {
    /// `o(x)` — receive a one-way message on `o` into `x`.
    OneWay(Operation, Variable),
    /// `o(x)(x'){B}` — receive a request into `x`, run `B`, answer with
    /// the value of `x'`.
    RequestResponse(Operation, Variable, Variable, Box<Behaviour>),
}

impl Eta {
    pub fn operation(&self) -> &Operation {
        match self {
            Eta::OneWay(o, _) | Eta::RequestResponse(o, _, _, _) => o,
        }
    }
}

/// An output port: how a behaviour sends towards a located operation.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum EtaHat {
    /// `o @ l(e)` — send a one-way notification.
    Notification(Operation, Location, Expr),
    /// `o @ l(e)(x)` — send a request, bind the response to `x`.
    SolicitResponse(Operation, Location, Expr, Variable),
}

// ---------------------------------------------------------------------------
// Behaviours
// ---------------------------------------------------------------------------

/// Behavioural terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Behaviour {
    /// `if e then B1 else B2`
    If(Expr, Box<Behaviour>, Box<Behaviour>),
    /// `while [e] B`
    While(Expr, Box<Behaviour>),
    /// `B1 ; B2`
    Seq(Box<Behaviour>, Box<Behaviour>),
    /// `B1 | B2`
    Par(Box<Behaviour>, Box<Behaviour>),
    /// `x = e`
    Assign(Variable, Expr),
    /// `nil`
    Nil,
    /// `inputchoice [η1]{B1} … [ηk]{Bk}` — external choice over input
    /// ports.  Invariant: at least one branch (the parser rejects empty
    /// choices, and [`Behaviour::input_choice`] asserts it).
    InputChoice(Vec<(Eta, Behaviour)>),
    /// `wait(c, o, l, x)` — runtime construct, parse-only.
    Wait(Channel, Operation, Location, Variable),
    /// `exec(c, o, x){B}` — runtime construct, parse-only.
    Exec(Channel, Operation, Variable, Box<Behaviour>),
    /// A single input port used as a behaviour.
    Input(Eta),
    /// A single output port used as a behaviour.
    Output(EtaHat),
}

impl Behaviour {
    pub fn seq(a: Behaviour, b: Behaviour) -> Behaviour {
        Behaviour::Seq(Box::new(a), Box::new(b))
    }

    pub fn par(a: Behaviour, b: Behaviour) -> Behaviour {
        Behaviour::Par(Box::new(a), Box::new(b))
    }

    pub fn if_then_else(e: Expr, t: Behaviour, f: Behaviour) -> Behaviour {
        Behaviour::If(e, Box::new(t), Box::new(f))
    }

    pub fn while_do(e: Expr, body: Behaviour) -> Behaviour {
        Behaviour::While(e, Box::new(body))
    }

    pub fn assign(x: Variable, e: Expr) -> Behaviour {
        Behaviour::Assign(x, e)
    }

    /// Builds an input choice.  Panics if `branches` is empty.
    pub fn input_choice(branches: Vec<(Eta, Behaviour)>) -> Behaviour {
        assert!(
            !branches.is_empty(),
            "input choice needs at least one branch"
        );
        Behaviour::InputChoice(branches)
    }

    /// Number of behaviour nodes in the term.  Request-response input
    /// bodies count through their surrounding node; expressions are not
    /// counted.
    pub fn size(&self) -> usize {
        match self {
            Behaviour::Nil
            | Behaviour::Assign(_, _)
            | Behaviour::Output(_)
            | Behaviour::Wait(_, _, _, _) => 1,
            Behaviour::If(_, t, f) => 1 + t.size() + f.size(),
            Behaviour::While(_, b) => 1 + b.size(),
            Behaviour::Seq(a, b) | Behaviour::Par(a, b) => 1 + a.size() + b.size(),
            Behaviour::Input(eta) => 1 + eta_size(eta),
            Behaviour::Exec(_, _, _, b) => 1 + b.size(),
            Behaviour::InputChoice(branches) => {
                1 + branches
                    .iter()
                    .map(|(eta, b)| eta_size(eta) + b.size())
                    .sum::<usize>()
            }
        }
    }
}

fn eta_size(eta: &Eta) -> usize {
    match eta {
        Eta::OneWay(_, _) => 0,
        Eta::RequestResponse(_, _, _, body) => body.size(),
    }
}

/// All variable indices occurring anywhere in the behaviour: in
/// expressions, assignment targets, port binders and nested bodies.
pub fn free_variables(b: &Behaviour) -> BTreeSet<Variable> {
    let mut out = BTreeSet::new();
    collect_behaviour_vars(b, &mut out);
    out
}

fn collect_expr_vars(e: &Expr, out: &mut BTreeSet<Variable>) {
    match e {
        Expr::Var(v) => {
            out.insert(*v);
        }
        Expr::Not(inner) => collect_expr_vars(inner, out),
        Expr::BinOp(_, l, r) => {
            collect_expr_vars(l, out);
            collect_expr_vars(r, out);
        }
        Expr::BoolLit(_)
        | Expr::IntLit(_)
        | Expr::DoubleLit(_)
        | Expr::LongLit(_)
        | Expr::StringLit(_) => {}
    }
}

fn collect_eta_vars(eta: &Eta, out: &mut BTreeSet<Variable>) {
    match eta {
        Eta::OneWay(_, x) => {
            out.insert(*x);
        }
        Eta::RequestResponse(_, x, x2, body) => {
            out.insert(*x);
            out.insert(*x2);
            collect_behaviour_vars(body, out);
        }
    }
}

fn collect_behaviour_vars(b: &Behaviour, out: &mut BTreeSet<Variable>) {
    match b {
        Behaviour::Nil => {}
        Behaviour::If(e, t, f) => {
            collect_expr_vars(e, out);
            collect_behaviour_vars(t, out);
            collect_behaviour_vars(f, out);
        }
        Behaviour::While(e, body) => {
            collect_expr_vars(e, out);
            collect_behaviour_vars(body, out);
        }
        Behaviour::Seq(a, b2) | Behaviour::Par(a, b2) => {
            collect_behaviour_vars(a, out);
            collect_behaviour_vars(b2, out);
        }
        Behaviour::Assign(x, e) => {
            out.insert(*x);
            collect_expr_vars(e, out);
        }
        Behaviour::InputChoice(branches) => {
            for (eta, body) in branches {
                collect_eta_vars(eta, out);
                collect_behaviour_vars(body, out);
            }
        }
        Behaviour::Wait(_, _, _, x) => {
            out.insert(*x);
        }
        Behaviour::Exec(_, _, x, body) => {
            out.insert(*x);
            collect_behaviour_vars(body, out);
        }
        Behaviour::Input(eta) => collect_eta_vars(eta, out),
        Behaviour::Output(EtaHat::Notification(_, _, e)) => collect_expr_vars(e, out),
        Behaviour::Output(EtaHat::SolicitResponse(_, _, e, x)) => {
            collect_expr_vars(e, out);
            out.insert(*x);
        }
    }
}

// ---------------------------------------------------------------------------
// Positions: addressing sub-behaviours
// ---------------------------------------------------------------------------

/// One step from a behaviour node to one of its behaviour children.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ChildSel {
    IfThen,
    IfElse,
    WhileBody,
    SeqFirst,
    SeqSecond,
    ParLeft,
    ParRight,
    ExecBody,
    /// Body of a request-response input port used as a behaviour.
    InputBody,
    /// Continuation behaviour of input-choice branch `i` (0-based).
    ChoiceBody(usize),
    /// Body inside the request-response port of input-choice branch `i`.
    ChoiceInputBody(usize),
}

impl fmt::Display for ChildSel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChildSel::IfThen => write!(f, "if.then"),
            ChildSel::IfElse => write!(f, "if.else"),
            ChildSel::WhileBody => write!(f, "while.body"),
            ChildSel::SeqFirst => write!(f, "seq.1"),
            ChildSel::SeqSecond => write!(f, "seq.2"),
            ChildSel::ParLeft => write!(f, "par.L"),
            ChildSel::ParRight => write!(f, "par.R"),
            ChildSel::ExecBody => write!(f, "exec.body"),
            ChildSel::InputBody => write!(f, "eta.body"),
            ChildSel::ChoiceBody(i) => write!(f, "choice.{}.body", i + 1),
            ChildSel::ChoiceInputBody(i) => write!(f, "choice.{}.eta", i + 1),
        }
    }
}

/// A path of child selectors from the root of a behaviour.  The empty
/// path addresses the root itself and prints as `root`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Position(Vec<ChildSel>);

impl Position {
    pub fn root() -> Position {
        Position(Vec::new())
    }

    pub fn new(steps: Vec<ChildSel>) -> Position {
        Position(steps)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[ChildSel] {
        &self.0
    }

    pub fn child(&self, sel: ChildSel) -> Position {
        let mut steps = self.0.clone();
        steps.push(sel);
        Position(steps)
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let mut first = true;
        for sel in &self.0 {
            if !first {
                write!(f, ".")?;
            }
            write!(f, "{sel}")?;
            first = false;
        }
        Ok(())
    }
}

/// The behaviour child selected by `sel`, if `b` has one.
pub fn child(b: &Behaviour, sel: ChildSel) -> Option<&Behaviour> {
    match (sel, b) {
        (ChildSel::IfThen, Behaviour::If(_, t, _)) => Some(t),
        (ChildSel::IfElse, Behaviour::If(_, _, f)) => Some(f),
        (ChildSel::WhileBody, Behaviour::While(_, body)) => Some(body),
        (ChildSel::SeqFirst, Behaviour::Seq(a, _)) => Some(a),
        (ChildSel::SeqSecond, Behaviour::Seq(_, b2)) => Some(b2),
        (ChildSel::ParLeft, Behaviour::Par(a, _)) => Some(a),
        (ChildSel::ParRight, Behaviour::Par(_, b2)) => Some(b2),
        (ChildSel::ExecBody, Behaviour::Exec(_, _, _, body)) => Some(body),
        (ChildSel::InputBody, Behaviour::Input(Eta::RequestResponse(_, _, _, body))) => Some(body),
        (ChildSel::ChoiceBody(i), Behaviour::InputChoice(branches)) => {
            branches.get(i).map(|(_, b2)| b2)
        }
        (ChildSel::ChoiceInputBody(i), Behaviour::InputChoice(branches)) => match branches.get(i) {
            Some((Eta::RequestResponse(_, _, _, body), _)) => Some(body),
            _ => None,
        },
        _ => None,
    }
}

/// The sub-behaviour at `pos`, if the path is valid in `b`.
pub fn subterm<'a>(b: &'a Behaviour, pos: &Position) -> Option<&'a Behaviour> {
    let mut cur = b;
    for sel in pos.steps() {
        cur = child(cur, *sel)?;
    }
    Some(cur)
}

fn with_child(b: &Behaviour, sel: ChildSel, new: Behaviour) -> Option<Behaviour> {
    let mut out = b.clone();
    match (sel, &mut out) {
        (ChildSel::IfThen, Behaviour::If(_, t, _)) => **t = new,
        (ChildSel::IfElse, Behaviour::If(_, _, f)) => **f = new,
        (ChildSel::WhileBody, Behaviour::While(_, body)) => **body = new,
        (ChildSel::SeqFirst, Behaviour::Seq(a, _)) => **a = new,
        (ChildSel::SeqSecond, Behaviour::Seq(_, b2)) => **b2 = new,
        (ChildSel::ParLeft, Behaviour::Par(a, _)) => **a = new,
        (ChildSel::ParRight, Behaviour::Par(_, b2)) => **b2 = new,
        (ChildSel::ExecBody, Behaviour::Exec(_, _, _, body)) => **body = new,
        (ChildSel::InputBody, Behaviour::Input(Eta::RequestResponse(_, _, _, body))) => {
            **body = new
        }
        (ChildSel::ChoiceBody(i), Behaviour::InputChoice(branches)) => {
            let (_, b2) = branches.get_mut(i)?;
            *b2 = new;
        }
        (ChildSel::ChoiceInputBody(i), Behaviour::InputChoice(branches)) => {
            match branches.get_mut(i) {
                Some((Eta::RequestResponse(_, _, _, body), _)) => **body = new,
                _ => return None,
            }
        }
        _ => return None,
    }
    Some(out)
}

/// Rebuilds `b` with the sub-behaviour at `pos` replaced by `new`.
/// Returns `None` when the position is not valid in `b`.
pub fn with_subterm(b: &Behaviour, pos: &Position, new: Behaviour) -> Option<Behaviour> {
    match pos.steps() {
        [] => Some(new),
        [sel, rest @ ..] => {
            let sub = child(b, *sel)?;
            let rebuilt = with_subterm(sub, &Position::new(rest.to_vec()), new)?;
            with_child(b, *sel, rebuilt)
        }
    }
}

/// Selectors leading to each behaviour child of `b`, in left-to-right
/// order.
pub fn child_selectors(b: &Behaviour) -> Vec<ChildSel> {
    match b {
        Behaviour::If(_, _, _) => vec![ChildSel::IfThen, ChildSel::IfElse],
        Behaviour::While(_, _) => vec![ChildSel::WhileBody],
        Behaviour::Seq(_, _) => vec![ChildSel::SeqFirst, ChildSel::SeqSecond],
        Behaviour::Par(_, _) => vec![ChildSel::ParLeft, ChildSel::ParRight],
        Behaviour::Exec(_, _, _, _) => vec![ChildSel::ExecBody],
        Behaviour::Input(Eta::RequestResponse(_, _, _, _)) => vec![ChildSel::InputBody],
        Behaviour::InputChoice(branches) => {
            let mut sels = Vec::new();
            for (i, (eta, _)) in branches.iter().enumerate() {
                if matches!(eta, Eta::RequestResponse(_, _, _, _)) {
                    sels.push(ChildSel::ChoiceInputBody(i));
                }
                sels.push(ChildSel::ChoiceBody(i));
            }
            sels
        }
        _ => Vec::new(),
    }
}

/// All node positions of `b` in pre-order (root first).
pub fn positions(b: &Behaviour) -> Vec<Position> {
    let mut out = Vec::new();
    let mut stack = vec![(Position::root(), b)];
    while let Some((pos, node)) = stack.pop() {
        out.push(pos.clone());
        // Push children in reverse so they pop in left-to-right order.
        for sel in child_selectors(node).into_iter().rev() {
            if let Some(c) = child(node, sel) {
                stack.push((pos.child(sel), c));
            }
        }
    }
    out
}

/// First position (in pre-order) whose subterm equals `target`.
pub fn find_position(root: &Behaviour, target: &Behaviour) -> Option<Position> {
    positions(root)
        .into_iter()
        .find(|p| subterm(root, p) == Some(target))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(s: &str) -> VariablePath {
        s.parse().unwrap()
    }

    #[test]
    fn enumeration_assigns_first_occurrence_indices() {
        let paths = [
            path("amount"),
            path("amount.fruit.apple"),
            path("amount.fruit.description"),
        ];
        let e = enumerate_variables(&paths);
        assert_eq!(e.len(), 3);
        assert_eq!(e.index_of(&path("amount")), Some(Variable(0)));
        assert_eq!(e.index_of(&path("amount.fruit.apple")), Some(Variable(1)));
        assert_eq!(
            e.index_of(&path("amount.fruit.description")),
            Some(Variable(2))
        );
    }

    #[test]
    fn enumeration_is_stable_under_repeats() {
        let paths = [path("a"), path("b"), path("a"), path("c"), path("b")];
        let e = enumerate_variables(&paths);
        assert_eq!(e.len(), 3);
        assert_eq!(e.index_of(&path("a")), Some(Variable(0)));
        assert_eq!(e.index_of(&path("b")), Some(Variable(1)));
        assert_eq!(e.index_of(&path("c")), Some(Variable(2)));
        let collected: Vec<_> = e.iter().map(|(p, v)| (p.to_string(), v)).collect();
        assert_eq!(
            collected,
            vec![
                ("a".to_owned(), Variable(0)),
                ("b".to_owned(), Variable(1)),
                ("c".to_owned(), Variable(2)),
            ]
        );
    }

    #[test]
    fn enumeration_is_injective_on_distinct_paths() {
        let paths: Vec<_> = (0..50).map(|i| path(&format!("v{i}"))).collect();
        let e = enumerate_variables(&paths);
        let mut seen = std::collections::HashSet::new();
        for p in &paths {
            assert!(seen.insert(e.index_of(p).unwrap()));
        }
    }

    #[test]
    fn invalid_paths_are_rejected() {
        assert!(VariablePath::new(vec![]).is_err());
        assert!("a..b".parse::<VariablePath>().is_err());
        assert!("9a".parse::<VariablePath>().is_err());
        assert!("a.b".parse::<VariablePath>().is_ok());
        assert!(Ident::new("").is_err());
        assert!(Ident::new("x y").is_err());
        assert!(Ident::new("_ok9").is_ok());
    }

    #[test]
    fn free_variables_reach_every_binder() {
        // x0 = true ; o(x1)(x2){ x3 = x4 }
        let body = Behaviour::assign(Variable(3), Expr::Var(Variable(4)));
        let eta = Eta::RequestResponse(
            Ident::new("o").unwrap(),
            Variable(1),
            Variable(2),
            Box::new(body),
        );
        let b = Behaviour::seq(
            Behaviour::assign(Variable(0), Expr::BoolLit(true)),
            Behaviour::Input(eta),
        );
        let vars: Vec<_> = free_variables(&b).into_iter().collect();
        assert_eq!(
            vars,
            vec![
                Variable(0),
                Variable(1),
                Variable(2),
                Variable(3),
                Variable(4)
            ]
        );
    }

    #[test]
    fn free_variables_of_nil_is_empty() {
        assert!(free_variables(&Behaviour::Nil).is_empty());
    }

    #[test]
    fn positions_enumerate_nil() {
        assert_eq!(positions(&Behaviour::Nil), vec![Position::root()]);
    }

    #[test]
    fn positions_enumerate_nested_terms_preorder() {
        // (nil ; nil) | nil  — positions: root, par.L, par.L.seq.1, par.L.seq.2, par.R
        let b = Behaviour::par(
            Behaviour::seq(Behaviour::Nil, Behaviour::Nil),
            Behaviour::Nil,
        );
        let ps: Vec<String> = positions(&b).iter().map(|p| p.to_string()).collect();
        assert_eq!(
            ps,
            vec!["root", "par.L", "par.L.seq.1", "par.L.seq.2", "par.R"]
        );
    }

    #[test]
    fn subterm_and_replace_round_trip() {
        let b = Behaviour::seq(
            Behaviour::Nil,
            Behaviour::par(
                Behaviour::assign(Variable(0), Expr::IntLit(1)),
                Behaviour::Nil,
            ),
        );
        let pos = Position::new(vec![ChildSel::SeqSecond, ChildSel::ParLeft]);
        assert_eq!(
            subterm(&b, &pos),
            Some(&Behaviour::assign(Variable(0), Expr::IntLit(1)))
        );
        let replaced = with_subterm(&b, &pos, Behaviour::Nil).unwrap();
        assert_eq!(
            replaced,
            Behaviour::seq(
                Behaviour::Nil,
                Behaviour::par(Behaviour::Nil, Behaviour::Nil)
            )
        );
        // Replacing at the root swaps the whole term.
        assert_eq!(
            with_subterm(&b, &Position::root(), Behaviour::Nil),
            Some(Behaviour::Nil)
        );
        // Invalid positions are rejected.
        let bad = Position::new(vec![ChildSel::IfThen]);
        assert_eq!(subterm(&b, &bad), None);
        assert_eq!(with_subterm(&b, &bad, Behaviour::Nil), None);
    }

    #[test]
    fn sizes_count_behaviour_nodes() {
        assert_eq!(Behaviour::Nil.size(), 1);
        assert_eq!(
            Behaviour::assign(Variable(0), Expr::BoolLit(true)).size(),
            1
        );
        let b = Behaviour::seq(
            Behaviour::par(Behaviour::Nil, Behaviour::Nil),
            Behaviour::while_do(Expr::BoolLit(true), Behaviour::Nil),
        );
        assert_eq!(b.size(), 6);
    }

    #[test]
    fn find_position_returns_first_preorder_match() {
        let b = Behaviour::seq(Behaviour::Nil, Behaviour::Nil);
        assert_eq!(
            find_position(&b, &Behaviour::Nil),
            Some(Position::new(vec![ChildSel::SeqFirst]))
        );
        assert_eq!(find_position(&b, &b), Some(Position::root()));
        assert_eq!(
            find_position(&b, &Behaviour::par(Behaviour::Nil, Behaviour::Nil)),
            None
        );
    }
}
