//! Congruence decided the slow way: breadth-first search over the
//! elementary rewrites, as an oracle for the normalization-based
//! procedure.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::ast::Behaviour;
use crate::congruence::{
    applicable_steps, apply_step, CongruenceRule, CongruenceStep, CongruenceTrace,
};

/// Searches breadth-first from `start` through every elementary
/// rewrite (reflexivity aside), visiting only terms of size at most
/// `size_cap`, until `target` turns up or the space is exhausted.
///
/// Congruent behaviours are always linked through their common normal
/// form, and sizes never grow along a normalization, so any cap of at
/// least `max(|start|, |target|)` decides congruence exactly; callers
/// usually add slack to also explore growing detours.
pub fn exhaustive_congruence_search(
    start: &Behaviour,
    target: &Behaviour,
    size_cap: usize,
) -> Option<CongruenceTrace> {
    if start == target {
        return Some(CongruenceTrace::default());
    }
    if target.size() > size_cap {
        return None;
    }
    let mut parent: HashMap<Behaviour, (Behaviour, CongruenceStep)> = HashMap::new();
    let mut seen: HashSet<Behaviour> = HashSet::from([start.clone()]);
    let mut queue: VecDeque<Behaviour> = VecDeque::from([start.clone()]);
    while let Some(cur) = queue.pop_front() {
        for step in applicable_steps(&cur) {
            if step.rule == CongruenceRule::Refl {
                continue;
            }
            let Some(next) = apply_step(&cur, &step) else {
                continue;
            };
            if next.size() > size_cap || !seen.insert(next.clone()) {
                continue;
            }
            parent.insert(next.clone(), (cur.clone(), step));
            if next == *target {
                let mut path = Vec::new();
                let mut node = &next;
                while let Some((prev, step)) = parent.get(node) {
                    path.push(step.clone());
                    node = prev;
                }
                path.reverse();
                return Some(CongruenceTrace::new(path));
            }
            queue.push_back(next);
        }
    }
    None
}

/// Every behaviour reachable from `b` in at most `max_steps`
/// elementary rewrites without growing past `size_cap`, including `b`
/// itself.
pub fn congruence_reach(b: &Behaviour, max_steps: usize, size_cap: usize) -> HashSet<Behaviour> {
    let mut seen: HashSet<Behaviour> = HashSet::from([b.clone()]);
    let mut frontier = vec![b.clone()];
    for _ in 0..max_steps {
        let mut next_frontier = Vec::new();
        for cur in frontier {
            for step in applicable_steps(&cur) {
                if step.rule == CongruenceRule::Refl {
                    continue;
                }
                if let Some(next) = apply_step(&cur, &step) {
                    if next.size() <= size_cap && seen.insert(next.clone()) {
                        next_frontier.push(next);
                    }
                }
            }
        }
        if next_frontier.is_empty() {
            break;
        }
        frontier = next_frontier;
    }
    seen
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;
    use crate::congruence::congruent;
    use crate::parser::parse_behaviour;

    fn b(src: &str) -> Behaviour {
        parse_behaviour(src).unwrap()
    }

    #[test]
    fn the_search_finds_single_step_rewrites() {
        let trace =
            exhaustive_congruence_search(&b("nil | x0 = true"), &b("x0 = true | nil"), 6).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(
            trace.replay(&b("nil | x0 = true")),
            Some(b("x0 = true | nil"))
        );
    }

    #[test]
    fn the_search_rules_out_trailing_nil_sequences() {
        // The cap leaves plenty of slack; exhaustion is a real "no".
        assert!(exhaustive_congruence_search(&b("x0 = 1; nil"), &b("x0 = 1"), 8).is_none());
        assert!(
            exhaustive_congruence_search(&b("x0 = 1 | x1 = 2"), &b("x0 = 1; x1 = 2"), 9).is_none()
        );
    }

    #[test]
    fn search_and_decision_procedure_agree_on_shuffles() {
        let pairs = [
            ("x0 = 1 | (x1 = 2 | x2 = 3)", "(x2 = 3 | x1 = 2) | x0 = 1"),
            ("nil; (nil; x0 = 1)", "x0 = 1"),
            ("while [true] (nil | x0 = 1)", "while [true] (x0 = 1 | nil)"),
        ];
        for (left, right) in pairs {
            let (b1, b2) = (b(left), b(right));
            let cap = b1.size().max(b2.size()) + 4;
            let found = exhaustive_congruence_search(&b1, &b2, cap);
            assert!(found.is_some(), "{left} vs {right}");
            assert_eq!(found.unwrap().replay(&b1), Some(b2.clone()));
            assert!(congruent(&b1, &b2).is_some());
        }
    }

    #[test]
    fn everything_reached_is_congruent_to_the_start() {
        let start = b("(nil | x0 = 1) | nil");
        let reach = congruence_reach(&start, 4, start.size() + 2);
        assert!(reach.len() > 5);
        for member in &reach {
            let trace = congruent(&start, member)
                .unwrap_or_else(|| panic!("not congruent to reached {member}"));
            assert_eq!(trace.replay(&start).as_ref(), Some(member));
        }
    }
}
