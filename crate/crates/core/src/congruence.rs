//! Structural congruence of behaviours.
//!
//! Two behaviours are congruent when one rewrites to the other using
//! the axioms below, applied at any position:
//!
//! ```text
//! nil; b    =  b          (NilSeqElim / NilSeqIntro)
//! b | nil   =  b          (ParNilElim / ParNilIntro)
//! b1 | b2   =  b2 | b1    (ParComm)
//! b1 | (b2 | b3)  =  (b1 | b2) | b3   (ParAssocL / ParAssocR)
//! ```
//!
//! Note the asymmetry: `nil; b = b` is an axiom but `b; nil = b` is
//! not, so `x0 = 1; nil` and `x0 = 1` are *not* congruent.
//!
//! Congruence is decided by reduction to a normal form ([`normalize`]):
//! `nil`-prefixes are dropped and every parallel group is flattened,
//! purged of `nil`s, sorted, and re-associated to the right.  The
//! normalizer can also emit the elementary rewrite steps it takes
//! ([`normalize_with_trace`]), which is how [`congruent`] produces a
//! replayable [`CongruenceTrace`] from one behaviour to the other.
//!
//! The companion [`transport`] operation rewrites a typing derivation
//! along a congruence step, so that typability demonstrably survives
//! the rewrite.

mod transport;

pub use transport::{transport, transport_trace, TransportError};

use std::fmt;

use crate::ast::{positions, subterm, with_subterm, Behaviour, ChildSel, Position};

// ---------------------------------------------------------------------------
// Rules and steps
// ---------------------------------------------------------------------------

/// One congruence axiom, oriented left-to-right.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CongruenceRule {
    /// `b → b`.
    Refl,
    /// `nil; b → b`.
    NilSeqElim,
    /// `b → nil; b`.
    NilSeqIntro,
    /// `b | nil → b`.
    ParNilElim,
    /// `b → b | nil`.
    ParNilIntro,
    /// `b1 | b2 → b2 | b1`.
    ParComm,
    /// `b1 | (b2 | b3) → (b1 | b2) | b3`.
    ParAssocL,
    /// `(b1 | b2) | b3 → b1 | (b2 | b3)`.
    ParAssocR,
}

impl CongruenceRule {
    pub const ALL: [CongruenceRule; 8] = [
        CongruenceRule::Refl,
        CongruenceRule::NilSeqElim,
        CongruenceRule::NilSeqIntro,
        CongruenceRule::ParNilElim,
        CongruenceRule::ParNilIntro,
        CongruenceRule::ParComm,
        CongruenceRule::ParAssocL,
        CongruenceRule::ParAssocR,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CongruenceRule::Refl => "Refl",
            CongruenceRule::NilSeqElim => "NilSeqElim",
            CongruenceRule::NilSeqIntro => "NilSeqIntro",
            CongruenceRule::ParNilElim => "ParNilElim",
            CongruenceRule::ParNilIntro => "ParNilIntro",
            CongruenceRule::ParComm => "ParComm",
            CongruenceRule::ParAssocL => "ParAssocL",
            CongruenceRule::ParAssocR => "ParAssocR",
        }
    }

    /// The rule that undoes this one at the same position.
    pub fn inverse(self) -> CongruenceRule {
        match self {
            CongruenceRule::Refl => CongruenceRule::Refl,
            CongruenceRule::NilSeqElim => CongruenceRule::NilSeqIntro,
            CongruenceRule::NilSeqIntro => CongruenceRule::NilSeqElim,
            CongruenceRule::ParNilElim => CongruenceRule::ParNilIntro,
            CongruenceRule::ParNilIntro => CongruenceRule::ParNilElim,
            CongruenceRule::ParComm => CongruenceRule::ParComm,
            CongruenceRule::ParAssocL => CongruenceRule::ParAssocR,
            CongruenceRule::ParAssocR => CongruenceRule::ParAssocL,
        }
    }
}

impl fmt::Display for CongruenceRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rule applied at a position.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CongruenceStep {
    pub position: Position,
    pub rule: CongruenceRule,
}

impl CongruenceStep {
    pub fn new(position: Position, rule: CongruenceRule) -> CongruenceStep {
        CongruenceStep { position, rule }
    }

    pub fn at_root(rule: CongruenceRule) -> CongruenceStep {
        CongruenceStep::new(Position::root(), rule)
    }

    pub fn inverse(&self) -> CongruenceStep {
        CongruenceStep::new(self.position.clone(), self.rule.inverse())
    }
}

impl fmt::Display for CongruenceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}  {}", self.position, self.rule)
    }
}

/// Applies `rule` to the root of `b`.  `None` when the rule does not
/// fit `b`'s shape.
pub fn apply_rule(rule: CongruenceRule, b: &Behaviour) -> Option<Behaviour> {
    use Behaviour::{Nil, Par, Seq};
    match rule {
        CongruenceRule::Refl => Some(b.clone()),
        CongruenceRule::NilSeqElim => match b {
            Seq(first, rest) if **first == Nil => Some((**rest).clone()),
            _ => None,
        },
        CongruenceRule::NilSeqIntro => Some(Behaviour::seq(Nil, b.clone())),
        CongruenceRule::ParNilElim => match b {
            Par(left, right) if **right == Nil => Some((**left).clone()),
            _ => None,
        },
        CongruenceRule::ParNilIntro => Some(Behaviour::par(b.clone(), Nil)),
        CongruenceRule::ParComm => match b {
            Par(left, right) => Some(Behaviour::par((**right).clone(), (**left).clone())),
            _ => None,
        },
        CongruenceRule::ParAssocL => match b {
            Par(a, rest) => match &**rest {
                Par(b2, c) => Some(Behaviour::par(
                    Behaviour::par((**a).clone(), (**b2).clone()),
                    (**c).clone(),
                )),
                _ => None,
            },
            _ => None,
        },
        CongruenceRule::ParAssocR => match b {
            Par(rest, c) => match &**rest {
                Par(a, b2) => Some(Behaviour::par(
                    (**a).clone(),
                    Behaviour::par((**b2).clone(), (**c).clone()),
                )),
                _ => None,
            },
            _ => None,
        },
    }
}

/// Applies a positioned step to a whole behaviour.  `None` when the
/// position is invalid or the rule does not fit the subterm there.
pub fn apply_step(b: &Behaviour, step: &CongruenceStep) -> Option<Behaviour> {
    let target = subterm(b, &step.position)?;
    let rewritten = apply_rule(step.rule, target)?;
    with_subterm(b, &step.position, rewritten)
}

/// Every step applicable to `b`, including the (ubiquitous) `Refl` and
/// introduction rules, ordered by position then rule.
pub fn applicable_steps(b: &Behaviour) -> Vec<CongruenceStep> {
    let mut out = Vec::new();
    for pos in positions(b) {
        let target = subterm(b, &pos).expect("enumerated positions are valid");
        for rule in CongruenceRule::ALL {
            if apply_rule(rule, target).is_some() {
                out.push(CongruenceStep::new(pos.clone(), rule));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

/// A sequence of congruence steps, replayable in order.  Prints one
/// step per line as `position  RuleName`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CongruenceTrace(Vec<CongruenceStep>);

impl CongruenceTrace {
    pub fn new(steps: Vec<CongruenceStep>) -> CongruenceTrace {
        CongruenceTrace(steps)
    }

    pub fn steps(&self) -> &[CongruenceStep] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Applies every step in order.  `None` as soon as a step fails.
    pub fn replay(&self, b: &Behaviour) -> Option<Behaviour> {
        let mut cur = b.clone();
        for step in &self.0 {
            cur = apply_step(&cur, step)?;
        }
        Some(cur)
    }

    /// The reversed trace with every step inverted: replaying it undoes
    /// this trace.
    pub fn inverted(&self) -> CongruenceTrace {
        CongruenceTrace(self.0.iter().rev().map(CongruenceStep::inverse).collect())
    }
}

impl fmt::Display for CongruenceTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, step) in self.0.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{step}")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Normalization
// ---------------------------------------------------------------------------

/// The congruence normal form of `b`: `nil;`-prefixes dropped, every
/// parallel group flattened, `nil`-free, sorted by rendered text, and
/// associated to the right — recursively, in every body.  Two
/// behaviours are congruent exactly when their normal forms are equal.
pub fn normalize(b: &Behaviour) -> Behaviour {
    normalize_with_trace(b).0
}

/// Like [`normalize`], also returning the elementary steps that rewrite
/// `b` into its normal form (so the trace replays to the result).
pub fn normalize_with_trace(b: &Behaviour) -> (Behaviour, CongruenceTrace) {
    let mut steps = Vec::new();
    let normal = normalize_steps(b, &mut steps, &Position::root());
    (normal, CongruenceTrace(steps))
}

/// `pos` extended with `i` `par.R` descents: the `i`-th node of a
/// right-associated parallel spine rooted at `pos`.
fn spine_pos(pos: &Position, i: usize) -> Position {
    let mut p = pos.clone();
    for _ in 0..i {
        p = p.child(ChildSel::ParRight);
    }
    p
}

/// The elements of a right-associated parallel spine (a normalized
/// parallel never nests another parallel on the left).
fn spine_elements(b: &Behaviour) -> Vec<Behaviour> {
    let mut out = Vec::new();
    let mut cur = b;
    while let Behaviour::Par(left, right) = cur {
        out.push((**left).clone());
        cur = right;
    }
    out.push(cur.clone());
    out
}

fn rebuild_spine(mut elems: Vec<Behaviour>) -> Behaviour {
    let mut acc = elems.pop().expect("spines have at least one element");
    while let Some(e) = elems.pop() {
        acc = Behaviour::par(e, acc);
    }
    acc
}

fn normalize_steps(b: &Behaviour, steps: &mut Vec<CongruenceStep>, pos: &Position) -> Behaviour {
    match b {
        Behaviour::Seq(first, rest) => {
            let first_n = normalize_steps(first, steps, &pos.child(ChildSel::SeqFirst));
            let rest_n = normalize_steps(rest, steps, &pos.child(ChildSel::SeqSecond));
            if first_n == Behaviour::Nil {
                steps.push(CongruenceStep::new(pos.clone(), CongruenceRule::NilSeqElim));
                rest_n
            } else {
                Behaviour::seq(first_n, rest_n)
            }
        }

        Behaviour::Par(left, right) => {
            let left_n = normalize_steps(left, steps, &pos.child(ChildSel::ParLeft));
            let right_n = normalize_steps(right, steps, &pos.child(ChildSel::ParRight));

            // 1. Right-associate: peel elements off the left spine.
            let left_elems = spine_elements(&left_n);
            for i in 0..left_elems.len() - 1 {
                steps.push(CongruenceStep::new(
                    spine_pos(pos, i),
                    CongruenceRule::ParAssocR,
                ));
            }
            let mut elems = left_elems;
            elems.extend(spine_elements(&right_n));

            // 2. Drop nil elements.  A trailing nil is one elimination;
            //    any other nil is rotated to the back of its node first.
            while let Some(i) = elems.iter().position(|e| *e == Behaviour::Nil) {
                let m = elems.len();
                if m == 1 {
                    break; // everything was nil: the spine *is* nil
                }
                if i == m - 1 {
                    steps.push(CongruenceStep::new(
                        spine_pos(pos, m - 2),
                        CongruenceRule::ParNilElim,
                    ));
                } else {
                    steps.push(CongruenceStep::new(
                        spine_pos(pos, i),
                        CongruenceRule::ParComm,
                    ));
                    steps.push(CongruenceStep::new(
                        spine_pos(pos, i),
                        CongruenceRule::ParNilElim,
                    ));
                }
                elems.remove(i);
            }

            // 3. Sort the remaining elements by their rendering, with
            //    adjacent swaps.  Swapping the final pair is a plain
            //    commutation; elsewhere a swap needs a rotation.
            let mut keyed: Vec<(String, Behaviour)> =
                elems.into_iter().map(|e| (e.to_string(), e)).collect();
            let m = keyed.len();
            for pass in 0..m.saturating_sub(1) {
                for j in 0..m - 1 - pass {
                    if keyed[j].0 > keyed[j + 1].0 {
                        if j + 1 == m - 1 {
                            steps.push(CongruenceStep::new(
                                spine_pos(pos, j),
                                CongruenceRule::ParComm,
                            ));
                        } else {
                            let q = spine_pos(pos, j);
                            steps.push(CongruenceStep::new(q.clone(), CongruenceRule::ParAssocL));
                            steps.push(CongruenceStep::new(
                                q.child(ChildSel::ParLeft),
                                CongruenceRule::ParComm,
                            ));
                            steps.push(CongruenceStep::new(q, CongruenceRule::ParAssocR));
                        }
                        keyed.swap(j, j + 1);
                    }
                }
            }

            rebuild_spine(keyed.into_iter().map(|(_, e)| e).collect())
        }

        Behaviour::If(guard, then_b, else_b) => Behaviour::if_then_else(
            guard.clone(),
            normalize_steps(then_b, steps, &pos.child(ChildSel::IfThen)),
            normalize_steps(else_b, steps, &pos.child(ChildSel::IfElse)),
        ),

        Behaviour::While(guard, body) => Behaviour::while_do(
            guard.clone(),
            normalize_steps(body, steps, &pos.child(ChildSel::WhileBody)),
        ),

        Behaviour::Input(crate::ast::Eta::RequestResponse(op, x, reply, body)) => {
            let body_n = normalize_steps(body, steps, &pos.child(ChildSel::InputBody));
            Behaviour::Input(crate::ast::Eta::RequestResponse(
                op.clone(),
                *x,
                *reply,
                Box::new(body_n),
            ))
        }

        Behaviour::InputChoice(branches) => {
            let mut out = Vec::with_capacity(branches.len());
            for (i, (eta, body)) in branches.iter().enumerate() {
                let eta_n = match eta {
                    crate::ast::Eta::OneWay(_, _) => eta.clone(),
                    crate::ast::Eta::RequestResponse(op, x, reply, eta_body) => {
                        let eta_body_n = normalize_steps(
                            eta_body,
                            steps,
                            &pos.child(ChildSel::ChoiceInputBody(i)),
                        );
                        crate::ast::Eta::RequestResponse(
                            op.clone(),
                            *x,
                            *reply,
                            Box::new(eta_body_n),
                        )
                    }
                };
                let body_n = normalize_steps(body, steps, &pos.child(ChildSel::ChoiceBody(i)));
                out.push((eta_n, body_n));
            }
            Behaviour::InputChoice(out)
        }

        Behaviour::Exec(chan, op, x, body) => {
            let body_n = normalize_steps(body, steps, &pos.child(ChildSel::ExecBody));
            Behaviour::Exec(chan.clone(), op.clone(), *x, Box::new(body_n))
        }

        // Leaves: nothing to rewrite.
        Behaviour::Nil
        | Behaviour::Assign(_, _)
        | Behaviour::Input(crate::ast::Eta::OneWay(_, _))
        | Behaviour::Output(_)
        | Behaviour::Wait(_, _, _, _) => b.clone(),
    }
}

// ---------------------------------------------------------------------------
// Deciding congruence
// ---------------------------------------------------------------------------

/// Drops adjacent mutually-inverse steps at one position (and bare
/// `Refl` steps), which arise when two normalization traces are glued
/// back to back.
fn simplify(steps: Vec<CongruenceStep>) -> Vec<CongruenceStep> {
    let mut out: Vec<CongruenceStep> = Vec::with_capacity(steps.len());
    for step in steps {
        if step.rule == CongruenceRule::Refl {
            continue;
        }
        match out.last() {
            Some(prev) if prev.position == step.position && prev.rule.inverse() == step.rule => {
                out.pop();
            }
            _ => out.push(step),
        }
    }
    out
}

/// Decides whether `b1` and `b2` are congruent.  On success the trace
/// replays `b1` into exactly `b2`; equal behaviours get the empty
/// trace.
pub fn congruent(b1: &Behaviour, b2: &Behaviour) -> Option<CongruenceTrace> {
    if b1 == b2 {
        return Some(CongruenceTrace::default());
    }
    let (n1, t1) = normalize_with_trace(b1);
    let (n2, t2) = normalize_with_trace(b2);
    if n1 != n2 {
        return None;
    }
    let mut steps = t1.0;
    steps.extend(t2.inverted().0);
    Some(CongruenceTrace(simplify(steps)))
}

// ---------------------------------------------------------------------------
