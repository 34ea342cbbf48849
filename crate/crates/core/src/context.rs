//! Typing contexts.
//!
//! A context is a tree: leaves hold ordered lists of declarations
//! ([`Ctx`]), and `&`-nodes pair the contexts of the two sides of a
//! parallel composition.  Contexts are flow-sensitive state: the typing
//! rules thread them left to right, and assignment/communication update
//! the type recorded for a variable.
//!
//! Membership is witnessed by a [`MemberPath`]: a replayable route to a
//! declaration.  Search order is fixed — inside a leaf, front to back;
//! across a `&`-node, the whole left subtree before the right — and
//! `lookup_var`/`update_var` follow it, so lookups are deterministic
//! even when several leaves declare the same variable.

use std::fmt;

use crate::ast::{Location, Operation, Variable};

// ---------------------------------------------------------------------------
// Native types and declarations
// ---------------------------------------------------------------------------

/// The native data types messages and variables range over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NativeType {
    Bool,
    Int,
    Double,
    Long,
    String,
    Raw,
    Void,
}

impl NativeType {
    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            NativeType::Int | NativeType::Double | NativeType::Long
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            NativeType::Bool => "bool",
            NativeType::Int => "int",
            NativeType::Double => "double",
            NativeType::Long => "long",
            NativeType::String => "string",
            NativeType::Raw => "raw",
            NativeType::Void => "void",
        }
    }
}

impl fmt::Display for NativeType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One declaration in a context leaf.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TypeDecl {
    /// `o @ l : <T>` — output one-way port.
    OutputOneWay(Operation, Location, NativeType),
    /// `o @ l : <T, T'>` — output request-response port.
    OutputReqRes(Operation, Location, NativeType, NativeType),
    /// `o : <T>` — input one-way port.
    InputOneWay(Operation, NativeType),
    /// `o : <T, T'>` — input request-response port.
    InputReqRes(Operation, NativeType, NativeType),
    /// `x : T` — variable typing.
    VarDecl(Variable, NativeType),
}

impl fmt::Display for TypeDecl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeDecl::OutputOneWay(o, l, t) => write!(f, "{o} @ {l} : <{t}>"),
            TypeDecl::OutputReqRes(o, l, t, t2) => write!(f, "{o} @ {l} : <{t}, {t2}>"),
            TypeDecl::InputOneWay(o, t) => write!(f, "{o} : <{t}>"),
            TypeDecl::InputReqRes(o, t, t2) => write!(f, "{o} : <{t}, {t2}>"),
            TypeDecl::VarDecl(x, t) => write!(f, "{x} : {t}"),
        }
    }
}

/// Declarations that target the same name: two colliding declarations
/// in one leaf must be identical.
fn collides(a: &TypeDecl, b: &TypeDecl) -> bool {
    use TypeDecl::*;
    match (a, b) {
        (VarDecl(x, _), VarDecl(y, _)) => x == y,
        (InputOneWay(o, _) | InputReqRes(o, _, _), InputOneWay(p, _) | InputReqRes(p, _, _)) => {
            o == p
        }
        (
            OutputOneWay(o, l, _) | OutputReqRes(o, l, _, _),
            OutputOneWay(p, m, _) | OutputReqRes(p, m, _, _),
        ) => o == p && l == m,
        _ => false,
    }
}

/// Error raised when a declaration list violates the leaf invariants.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CtxError {
    #[error("variable {0} is declared twice in one context block")]
    DuplicateVar(Variable),
    #[error("conflicting declarations for operation {0} in one context block")]
    ConflictingOperation(Operation),
}

/// An ordered list of declarations (a context leaf).
///
/// Invariants, enforced at construction: no two `VarDecl`s share a
/// variable index, and operation declarations for the same name (input)
/// or name-and-location (output) may repeat only when identical.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Ctx(Vec<TypeDecl>);

impl Ctx {
    pub fn new(decls: Vec<TypeDecl>) -> Result<Ctx, CtxError> {
        for (i, d) in decls.iter().enumerate() {
            for earlier in &decls[..i] {
                if collides(earlier, d) {
                    return match d {
                        TypeDecl::VarDecl(x, _) => Err(CtxError::DuplicateVar(*x)),
                        TypeDecl::OutputOneWay(o, _, _)
                        | TypeDecl::OutputReqRes(o, _, _, _)
                        | TypeDecl::InputOneWay(o, _)
                        | TypeDecl::InputReqRes(o, _, _) => {
                            if earlier == d {
                                continue; // identical repeat is allowed
                            }
                            Err(CtxError::ConflictingOperation(o.clone()))
                        }
                    };
                }
            }
        }
        Ok(Ctx(decls))
    }

    pub fn empty() -> Ctx {
        Ctx(Vec::new())
    }

    pub fn decls(&self) -> &[TypeDecl] {
        &self.0
    }

    /// Duplicate `VarDecl` indices are impossible by construction, so a
    /// replaced or appended variable declaration keeps the invariants.
    fn set_var(&mut self, x: Variable, t: NativeType) {
        for d in &mut self.0 {
            if let TypeDecl::VarDecl(y, old) = d {
                if *y == x {
                    *old = t;
                    return;
                }
            }
        }
        self.0.push(TypeDecl::VarDecl(x, t));
    }
}

// ---------------------------------------------------------------------------
// Context trees
// ---------------------------------------------------------------------------

/// A context tree: a leaf of declarations, or the pairing of the
/// contexts of two parallel branches.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Context {
    Leaf(Ctx),
    Par(Box<Context>, Box<Context>),
}

impl Context {
    pub fn leaf(decls: Vec<TypeDecl>) -> Result<Context, CtxError> {
        Ok(Context::Leaf(Ctx::new(decls)?))
    }

    pub fn empty_leaf() -> Context {
        Context::Leaf(Ctx::empty())
    }

    pub fn par(l: Context, r: Context) -> Context {
        Context::Par(Box::new(l), Box::new(r))
    }

    pub fn leaf_count(&self) -> usize {
        match self {
            Context::Leaf(_) => 1,
            Context::Par(l, r) => l.leaf_count() + r.leaf_count(),
        }
    }
}

/// One step of a membership witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PathStep {
    /// The declaration is the head of the current leaf.
    HereLeaf,
    /// Skip the head of the current leaf.
    ThereLeaf,
    /// Descend into the left branch of a `&`-node.
    DescendLeft,
    /// Descend into the right branch of a `&`-node.
    DescendRight,
}

/// A replayable route to a declaration inside a context tree.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct MemberPath(Vec<PathStep>);

impl MemberPath {
    pub fn steps(&self) -> &[PathStep] {
        &self.0
    }

    /// Follows the path through `g`.  Returns the declaration it lands
    /// on, or `None` if the path does not fit the tree.
    pub fn replay<'a>(&self, g: &'a Context) -> Option<&'a TypeDecl> {
        let mut node = g;
        let mut skip = 0usize; // declarations skipped in the current leaf
        for (i, step) in self.0.iter().enumerate() {
            match (step, node) {
                (PathStep::DescendLeft, Context::Par(l, _)) if skip == 0 => node = l,
                (PathStep::DescendRight, Context::Par(_, r)) if skip == 0 => node = r,
                (PathStep::ThereLeaf, Context::Leaf(ctx)) => {
                    skip += 1;
                    if skip > ctx.decls().len() {
                        return None;
                    }
                }
                (PathStep::HereLeaf, Context::Leaf(ctx)) => {
                    if i + 1 != self.0.len() {
                        return None; // HereLeaf must be the final step
                    }
                    return ctx.decls().get(skip);
                }
                _ => return None,
            }
        }
        None
    }
}

/// Enumerates every declaration of `g` with its witness, in search
/// order: within a leaf front to back, and for a `&`-node the whole
/// left subtree before the right.
pub fn all_members(g: &Context) -> Vec<(MemberPath, &TypeDecl)> {
    fn walk<'a>(
        g: &'a Context,
        prefix: &mut Vec<PathStep>,
        out: &mut Vec<(MemberPath, &'a TypeDecl)>,
    ) {
        match g {
            Context::Leaf(ctx) => {
                for (i, d) in ctx.decls().iter().enumerate() {
                    let mut steps = prefix.clone();
                    steps.extend(std::iter::repeat_n(PathStep::ThereLeaf, i));
                    steps.push(PathStep::HereLeaf);
                    out.push((MemberPath(steps), d));
                }
            }
            Context::Par(l, r) => {
                prefix.push(PathStep::DescendLeft);
                walk(l, prefix, out);
                prefix.pop();
                prefix.push(PathStep::DescendRight);
                walk(r, prefix, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(g, &mut Vec::new(), &mut out);
    out
}

fn find_member(
    g: &Context,
    mut pred: impl FnMut(&TypeDecl) -> bool,
) -> Option<(MemberPath, &TypeDecl)> {
    all_members(g).into_iter().find(|(_, d)| pred(d))
}

/// Witness that `decl` occurs in `g`, if it does (first occurrence in
/// search order).
pub fn member(decl: &TypeDecl, g: &Context) -> Option<MemberPath> {
    find_member(g, |d| d == decl).map(|(p, _)| p)
}

/// Type and witness of the first declaration of variable `x`.
pub fn lookup_var(x: Variable, g: &Context) -> Option<(NativeType, MemberPath)> {
    find_member(g, |d| matches!(d, TypeDecl::VarDecl(y, _) if *y == x)).map(|(p, d)| match d {
        TypeDecl::VarDecl(_, t) => (*t, p),
        _ => unreachable!(),
    })
}

/// First input declaration (one-way or request-response) for `op`.
pub fn find_input(g: &Context, op: &Operation) -> Option<(MemberPath, TypeDecl)> {
    find_member(
        g,
        |d| matches!(d, TypeDecl::InputOneWay(o, _) | TypeDecl::InputReqRes(o, _, _) if o == op),
    )
    .map(|(p, d)| (p, d.clone()))
}

/// First output declaration for `op` directed at `loc`.
pub fn find_output(g: &Context, op: &Operation, loc: &Location) -> Option<(MemberPath, TypeDecl)> {
    find_member(g, |d| {
        matches!(d,
            TypeDecl::OutputOneWay(o, l, _) | TypeDecl::OutputReqRes(o, l, _, _) if o == op && l == loc)
    })
    .map(|(p, d)| (p, d.clone()))
}

/// Sets the type of `x` to `t`: the first `VarDecl` for `x` (in search
/// order) is replaced; if there is none, `x : t` is appended to the
/// leftmost leaf.  The tree shape is preserved.
pub fn update_var(x: Variable, t: NativeType, g: &Context) -> Context {
    fn replace_first(g: &Context, x: Variable, t: NativeType) -> Option<Context> {
        match g {
            Context::Leaf(ctx) => {
                if ctx
                    .decls()
                    .iter()
                    .any(|d| matches!(d, TypeDecl::VarDecl(y, _) if *y == x))
                {
                    let mut new = ctx.clone();
                    new.set_var(x, t);
                    Some(Context::Leaf(new))
                } else {
                    None
                }
            }
            Context::Par(l, r) => {
                if let Some(l2) = replace_first(l, x, t) {
                    Some(Context::par(l2, (**r).clone()))
                } else {
                    replace_first(r, x, t).map(|r2| Context::par((**l).clone(), r2))
                }
            }
        }
    }

    fn append_leftmost(g: &Context, x: Variable, t: NativeType) -> Context {
        match g {
            Context::Leaf(ctx) => {
                let mut new = ctx.clone();
                new.set_var(x, t);
                Context::Leaf(new)
            }
            Context::Par(l, r) => Context::par(append_leftmost(l, x, t), (**r).clone()),
        }
    }

    replace_first(g, x, t).unwrap_or_else(|| append_leftmost(g, x, t))
}
