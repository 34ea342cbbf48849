//! Transport of typing derivations along congruence steps.
//!
//! Given a derivation of `Γ ⊢ b ▷ Γ′` and a congruence step rewriting
//! `b` to `b2`, [`transport`] produces a derivation for `b2` — the
//! constructive content of "typability is invariant under structural
//! congruence".
//!
//! Most rules transport purely, by rearranging the premises of the
//! original derivation.  The parallel axioms reshape the context tree
//! alongside the behaviour: commuting `b1 | b2` swaps the context pair,
//! re-associating a parallel re-associates the pair, and `b → b | nil`
//! pairs the context with a fresh empty one.  When such a reshaped
//! context surfaces from below a `;`, `if`, `while` or input node, the
//! ancestor is re-threaded around it; if no re-threading yields a valid
//! node, the subtree is re-checked from scratch under a few candidate
//! contexts before giving up.
//!
//! An error therefore does not mean the implementation ran out of
//! ideas at random: whenever `transport` fails on a valid derivation,
//! the rewritten behaviour genuinely does not type under the original
//! root context.

use thiserror::Error;

use crate::ast::{subterm, with_subterm, Behaviour, ChildSel, Eta, Position};
use crate::congruence::{apply_rule, CongruenceRule, CongruenceStep, CongruenceTrace};
use crate::context::Context;
use crate::typing::{check_behaviour, verify_node_local, Derivation, RuleTag};

/// Why a derivation could not be transported.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TransportError {
    /// The step's position or rule does not fit the derivation's
    /// subject.
    #[error("step does not apply: {0}")]
    InvalidPosition(String),
    /// The derivation is not shaped the way its subject demands (it
    /// would not pass verification either).
    #[error("derivation shape mismatch: {0}")]
    ShapeMismatch(String),
    /// The rewritten behaviour does not type under any context the
    /// transport can justify — including the original one.
    #[error("no valid re-threading: {0}")]
    Rethread(String),
}

/// Rewrites `d` along `step`.  The result derives the rewritten
/// behaviour and always passes verification; its root contexts match
/// `d`'s unless the step reshapes the context tree itself (the
/// parallel axioms at the root do, e.g. commuting `Γ1 & Γ2`).
pub fn transport(d: &Derivation, step: &CongruenceStep) -> Result<Derivation, TransportError> {
    let target = subterm(&d.subject, &step.position).ok_or_else(|| {
        TransportError::InvalidPosition(format!(
            "\"{}\" has no subterm at {}",
            d.subject, step.position
        ))
    })?;
    if apply_rule(step.rule, target).is_none() {
        return Err(TransportError::InvalidPosition(format!(
            "{} does not apply to \"{target}\"",
            step.rule
        )));
    }
    transport_at(d, step.position.steps(), step.rule)
}

/// Folds [`transport`] over a whole trace.
pub fn transport_trace(
    d: &Derivation,
    trace: &CongruenceTrace,
) -> Result<Derivation, TransportError> {
    let mut cur = d.clone();
    for step in trace.steps() {
        cur = transport(&cur, step)?;
    }
    Ok(cur)
}

fn transport_at(
    d: &Derivation,
    path: &[ChildSel],
    rule: CongruenceRule,
) -> Result<Derivation, TransportError> {
    let Some((sel, rest)) = path.split_first() else {
        return transport_root(d, rule);
    };

    // Locate the premise that derives the child at `sel`.  A choice
    // guard's body sits two derivation levels down: inside the guard
    // premise, which is an input derivation of its own.
    let (idx, inner): (usize, Vec<ChildSel>) = match (d.rule, *sel) {
        (RuleTag::TIf, ChildSel::IfThen) => (0, rest.to_vec()),
        (RuleTag::TIf, ChildSel::IfElse) => (1, rest.to_vec()),
        (RuleTag::TWhile, ChildSel::WhileBody) => (0, rest.to_vec()),
        (RuleTag::TSeq, ChildSel::SeqFirst) => (0, rest.to_vec()),
        (RuleTag::TSeq, ChildSel::SeqSecond) => (1, rest.to_vec()),
        (RuleTag::TPar, ChildSel::ParLeft) => (0, rest.to_vec()),
        (RuleTag::TPar, ChildSel::ParRight) => (1, rest.to_vec()),
        (RuleTag::TInReqRes, ChildSel::InputBody) => (0, rest.to_vec()),
        (RuleTag::TChoice, ChildSel::ChoiceBody(i)) => (2 * i + 1, rest.to_vec()),
        (RuleTag::TChoice, ChildSel::ChoiceInputBody(i)) => {
            let mut inner = Vec::with_capacity(rest.len() + 1);
            inner.push(ChildSel::InputBody);
            inner.extend_from_slice(rest);
            (2 * i, inner)
        }
        (rule, sel) => {
            return Err(TransportError::ShapeMismatch(format!(
                "rule {rule} has no premise for selector {sel}"
            )))
        }
    };
    let old = d.premises.get(idx).ok_or_else(|| {
        TransportError::ShapeMismatch(format!("premise {idx} missing under {}", d.rule))
    })?;
    let new_premise = transport_at(old, &inner, rule)?;
    rebuild(d, *sel, idx, new_premise)
}

/// A `t-nil` leaf for the given context.
fn nil_axiom(g: Context) -> Derivation {
    Derivation {
        rule: RuleTag::TNil,
        input: g.clone(),
        subject: Behaviour::Nil,
        output: g,
        expr_premises: Vec::new(),
        premises: Vec::new(),
    }
}

/// Applies the rule at the root of the derivation's subject.
fn transport_root(d: &Derivation, rule: CongruenceRule) -> Result<Derivation, TransportError> {
    let rewritten = apply_rule(rule, &d.subject).ok_or_else(|| {
        TransportError::InvalidPosition(format!("{rule} does not apply to \"{}\"", d.subject))
    })?;
    let shape = |what: &str| TransportError::ShapeMismatch(format!("{rule} needs {what}"));

    match rule {
        CongruenceRule::Refl => Ok(d.clone()),

        // nil; b  →  b: the second premise already derives b.
        CongruenceRule::NilSeqElim => {
            if d.rule != RuleTag::TSeq || d.premises.len() != 2 {
                return Err(shape("a sequence derivation with two premises"));
            }
            Ok(d.premises[1].clone())
        }

        // b  →  nil; b: prepend a t-nil step in the same context.
        CongruenceRule::NilSeqIntro => Ok(Derivation {
            rule: RuleTag::TSeq,
            input: d.input.clone(),
            subject: rewritten,
            output: d.output.clone(),
            expr_premises: Vec::new(),
            premises: vec![nil_axiom(d.input.clone()), d.clone()],
        }),

        // b | nil  →  b: the left premise stands alone; the root
        // context narrows from `Γ1 & Γ2` to `Γ1`.
        CongruenceRule::ParNilElim => {
            if d.rule != RuleTag::TPar || d.premises.len() != 2 {
                return Err(shape("a parallel derivation with two premises"));
            }
            Ok(d.premises[0].clone())
        }

        // b  →  b | nil: pair the context with a fresh empty one for
        // the nil side.
        CongruenceRule::ParNilIntro => Ok(Derivation {
            rule: RuleTag::TPar,
            input: Context::par(d.input.clone(), Context::empty_leaf()),
            subject: rewritten,
            output: Context::par(d.output.clone(), Context::empty_leaf()),
            expr_premises: Vec::new(),
            premises: vec![d.clone(), nil_axiom(Context::empty_leaf())],
        }),

        // b1 | b2  →  b2 | b1: swap the premises and the context pair.
        CongruenceRule::ParComm => {
            if d.rule != RuleTag::TPar || d.premises.len() != 2 {
                return Err(shape("a parallel derivation with two premises"));
            }
            let (p1, p2) = (d.premises[0].clone(), d.premises[1].clone());
            Ok(Derivation {
                rule: RuleTag::TPar,
                input: Context::par(p2.input.clone(), p1.input.clone()),
                subject: rewritten,
                output: Context::par(p2.output.clone(), p1.output.clone()),
                expr_premises: Vec::new(),
                premises: vec![p2, p1],
            })
        }

        // b1 | (b2 | b3)  →  (b1 | b2) | b3 and its mirror image:
        // re-associate the premise tree and the context tree together.
        CongruenceRule::ParAssocL => {
            if d.rule != RuleTag::TPar || d.premises.len() != 2 {
                return Err(shape("a parallel derivation with two premises"));
            }
            let p1 = d.premises[0].clone();
            let p23 = &d.premises[1];
            if p23.rule != RuleTag::TPar || p23.premises.len() != 2 {
                return Err(shape("a parallel derivation on the right of the root"));
            }
            let (p2, p3) = (p23.premises[0].clone(), p23.premises[1].clone());
            let left = Derivation {
                rule: RuleTag::TPar,
                input: Context::par(p1.input.clone(), p2.input.clone()),
                subject: Behaviour::par(p1.subject.clone(), p2.subject.clone()),
                output: Context::par(p1.output.clone(), p2.output.clone()),
                expr_premises: Vec::new(),
                premises: vec![p1, p2],
            };
            Ok(Derivation {
                rule: RuleTag::TPar,
                input: Context::par(left.input.clone(), p3.input.clone()),
                subject: rewritten,
                output: Context::par(left.output.clone(), p3.output.clone()),
                expr_premises: Vec::new(),
                premises: vec![left, p3],
            })
        }

        CongruenceRule::ParAssocR => {
            if d.rule != RuleTag::TPar || d.premises.len() != 2 {
                return Err(shape("a parallel derivation with two premises"));
            }
            let p12 = &d.premises[0];
            let p3 = d.premises[1].clone();
            if p12.rule != RuleTag::TPar || p12.premises.len() != 2 {
                return Err(shape("a parallel derivation on the left of the root"));
            }
            let (p1, p2) = (p12.premises[0].clone(), p12.premises[1].clone());
            let right = Derivation {
                rule: RuleTag::TPar,
                input: Context::par(p2.input.clone(), p3.input.clone()),
                subject: Behaviour::par(p2.subject.clone(), p3.subject.clone()),
                output: Context::par(p2.output.clone(), p3.output.clone()),
                expr_premises: Vec::new(),
                premises: vec![p2, p3],
            };
            Ok(Derivation {
                rule: RuleTag::TPar,
                input: Context::par(p1.input.clone(), right.input.clone()),
                subject: rewritten,
                output: Context::par(p1.output.clone(), right.output.clone()),
                expr_premises: Vec::new(),
                premises: vec![p1, right],
            })
        }
    }
}

/// Reassembles an ancestor node around a transported premise.
fn rebuild(
    d: &Derivation,
    sel: ChildSel,
    idx: usize,
    new_premise: Derivation,
) -> Result<Derivation, TransportError> {
    let old = &d.premises[idx];
    let contexts_unchanged = new_premise.input == old.input && new_premise.output == old.output;

    // The ancestor's new subject: its child at `sel` replaced.  For a
    // choice guard the premise derives `Input(eta)` while the selector
    // addresses the eta's reply body, so peel the body back out.
    let new_child = match sel {
        ChildSel::ChoiceInputBody(_) => match &new_premise.subject {
            Behaviour::Input(Eta::RequestResponse(_, _, _, body)) => (**body).clone(),
            other => {
                return Err(TransportError::ShapeMismatch(format!(
                    "choice guard premise derives \"{other}\", not a request-response input"
                )))
            }
        },
        _ => new_premise.subject.clone(),
    };
    let one_step = Position::root().child(sel);
    let new_subject = with_subterm(&d.subject, &one_step, new_child).ok_or_else(|| {
        TransportError::ShapeMismatch(format!("\"{}\" has no child at {sel}", d.subject))
    })?;

    let mut premises = d.premises.clone();
    premises[idx] = new_premise;

    // Same premise contexts: the node's own conclusion still stands.
    if contexts_unchanged {
        let node = Derivation {
            rule: d.rule,
            input: d.input.clone(),
            subject: new_subject,
            output: d.output.clone(),
            expr_premises: d.expr_premises.clone(),
            premises,
        };
        debug_assert_eq!(verify_node_local(&node), Ok(()));
        return Ok(node);
    }

    // A parallel ancestor re-threads unconditionally: its conclusion is
    // just the pairing of whatever the sides conclude.
    if d.rule == RuleTag::TPar {
        return Ok(Derivation {
            rule: RuleTag::TPar,
            input: Context::par(premises[0].input.clone(), premises[1].input.clone()),
            subject: new_subject,
            output: Context::par(premises[0].output.clone(), premises[1].output.clone()),
            expr_premises: Vec::new(),
            premises,
        });
    }

    // Other ancestors: re-derive the conclusion the rule would draw
    // from the updated premises and keep it if it verifies.
    let (input, output) = match d.rule {
        RuleTag::TSeq => (premises[0].input.clone(), premises[1].output.clone()),
        RuleTag::TWhile => (premises[0].input.clone(), premises[0].input.clone()),
        RuleTag::TIf => (premises[0].input.clone(), premises[0].output.clone()),
        RuleTag::TChoice => (premises[0].input.clone(), premises[1].output.clone()),
        RuleTag::TInReqRes => (d.input.clone(), premises[0].output.clone()),
        rule => {
            return Err(TransportError::ShapeMismatch(format!(
                "rule {rule} cannot sit above a congruence step"
            )))
        }
    };
    let candidate = Derivation {
        rule: d.rule,
        input,
        subject: new_subject.clone(),
        output,
        expr_premises: d.expr_premises.clone(),
        premises: premises.clone(),
    };
    if verify_node_local(&candidate).is_ok() {
        return Ok(candidate);
    }

    // Last resort: re-check the whole subtree from scratch.  Candidate
    // contexts: the rule's recomputed input, the inputs the sibling
    // premises were checked under, and the node's original input.
    let mut inputs = vec![candidate.input.clone()];
    if matches!(d.rule, RuleTag::TIf | RuleTag::TChoice) {
        inputs.extend(premises.iter().map(|p| p.input.clone()));
    }
    inputs.push(d.input.clone());
    inputs.dedup();
    for g in &inputs {
        if let Ok(rechecked) = check_behaviour(g, &new_subject) {
            return Ok(rechecked);
        }
    }
    Err(TransportError::Rethread(format!(
        "\"{new_subject}\" does not type under {}",
        inputs
            .iter()
            .map(|g| g.to_string())
            .collect::<Vec<_>>()
            .join(" nor ")
    )))
}

// ---------------------------------------------------------------------------
