//! The bundled self-test suites behind the `selftest` command: each
//! section sweeps an exhaustively generated corpus and cross-checks a
//! component against an independent oracle.

use std::fmt;

use crate::ast::Behaviour;
use crate::congruence::{
    applicable_steps, apply_step, congruent, normalize, normalize_with_trace, transport,
};
use crate::context::Context;
use crate::parser::{parse_behaviour, parse_context};
use crate::typing::{check_behaviour, verify_derivation};

use super::{
    brute_force_outputs, comm_context_pool, congruence_reach, context_pool, enumerate_behaviours,
    exhaustive_congruence_search, inject_fault, EnumConfig, FaultKind,
};

/// What `selftest` should sweep.
#[derive(Debug, Clone)]
pub struct SelftestConfig {
    /// Largest term size in the generated corpus (clamped to 8).
    pub max_size: usize,
    /// When set, corrupt every accepted derivation with this bug
    /// before verifying it.  The sweep is then expected to FAIL: each
    /// rejection is a counterexample proving the harness catches the
    /// bug.
    pub fault: Option<FaultKind>,
}

impl Default for SelftestConfig {
    fn default() -> SelftestConfig {
        SelftestConfig {
            max_size: 4,
            fault: None,
        }
    }
}

/// One suite's tally.
#[derive(Debug, Clone)]
pub struct SuiteSection {
    pub name: String,
    pub checks: usize,
    pub failures: usize,
    /// Up to three failure descriptions, for the report.
    pub examples: Vec<String>,
}

impl SuiteSection {
    fn new(name: impl Into<String>) -> SuiteSection {
        SuiteSection {
            name: name.into(),
            checks: 0,
            failures: 0,
            examples: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
            if self.examples.len() < 3 {
                self.examples.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// The whole report: one section per suite.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub sections: Vec<SuiteSection>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(SuiteSection::passed)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.sections.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            if s.passed() {
                write!(f, "ok    {} ({} checks)", s.name, s.checks)?;
            } else {
                write!(
                    f,
                    "FAIL  {} ({} of {} checks failed)",
                    s.name, s.failures, s.checks
                )?;
                for e in &s.examples {
                    write!(f, "\n        {e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Runs the suites and tallies a report.  Deterministic: the corpora
/// are exhaustive enumerations and any thinning is by fixed stride.
pub fn run_selftest(cfg: &SelftestConfig) -> SuiteReport {
    // A zero-sized corpus tallies zero checks everywhere: a vacuous
    // pass, by design.
    let max_size = cfg.max_size.min(8);
    if let Some(fault) = cfg.fault {
        return SuiteReport {
            sections: vec![injected_fault_section(max_size, fault)],
        };
    }
    let core = enumerate_behaviours(&EnumConfig::core(max_size));
    let comm = enumerate_behaviours(&EnumConfig::with_communications(max_size.min(3)));
    let pool = context_pool();
    let comm_pool = comm_context_pool();
    SuiteReport {
        sections: vec![
            typing_section(&core, &pool, &comm, &comm_pool),
            congruence_section(&core),
            normalization_section(&core, &comm),
            transport_section(&core, &pool),
            round_trip_section(&core, &comm, &pool, &comm_pool),
            fault_section(max_size, &FaultKind::ALL),
        ],
    }
}

/// Deterministic thinning: enough of `items`, evenly spaced, to keep
/// `items.len() * per_item` within `budget`.
fn stride<T>(items: &[T], per_item: usize, budget: usize) -> Vec<&T> {
    let total = items.len().saturating_mul(per_item.max(1));
    let step = total.div_ceil(budget).max(1);
    items.iter().step_by(step).collect()
}

fn typing_section(
    core: &[Behaviour],
    pool: &[Context],
    comm: &[Behaviour],
    comm_pool: &[Context],
) -> SuiteSection {
    let mut s = SuiteSection::new("typing agrees with the brute-force search");
    let mut sweep = |corpus: &[Behaviour], contexts: &[Context]| {
        for g in stride(contexts, corpus.len(), 150_000) {
            for b in corpus {
                let brute = brute_force_outputs(g, b);
                let verdict = match (check_behaviour(g, b), brute.as_slice()) {
                    (Ok(d), [out]) => {
                        if d.output != *out {
                            Err("the two typings disagree on the output context")
                        } else if d.input != *g || d.subject != *b {
                            Err("the derivation does not conclude what was asked")
                        } else if verify_derivation(&d).is_err() {
                            Err("the checker's derivation does not verify")
                        } else {
                            Ok(())
                        }
                    }
                    (Ok(_), []) => Err("the checker accepts, the search finds nothing"),
                    (Err(_), []) => Ok(()),
                    (Err(_), [_]) => Err("the search finds a typing the checker rejects"),
                    (_, _) => Err("the search found several outputs for one judgment"),
                };
                s.check(verdict.is_ok(), || {
                    format!("{} under {g}: {}", b, verdict.unwrap_err())
                });
            }
        }
    };
    sweep(core, pool);
    sweep(comm, comm_pool);
    s
}

fn congruence_section(core: &[Behaviour]) -> SuiteSection {
    let mut s = SuiteSection::new("congruence agrees with the exhaustive search");
    let small: Vec<&Behaviour> = core.iter().filter(|b| b.size() <= 3).collect();

    // Everything the rewrites can reach must be accepted, with a
    // replayable trace.
    for b in &small {
        for member in congruence_reach(b, 5, b.size() + 2) {
            match congruent(b, &member) {
                Some(trace) => s.check(trace.replay(b).as_ref() == Some(&member), || {
                    format!("trace from {b} to {member} does not replay")
                }),
                None => s.check(false, || {
                    format!("{member} reachable from {b} but rejected")
                }),
            }
        }
    }

    // Deterministically sampled pairs: the decision procedure and the
    // exhaustive search must return the same verdict.
    for (i, b1) in small.iter().enumerate() {
        let b2 = small[(i * 7 + 3) % small.len()];
        let cap = b1.size().max(b2.size()) + 2;
        let found = exhaustive_congruence_search(b1, b2, cap);
        let decided = congruent(b1, b2);
        s.check(found.is_some() == decided.is_some(), || {
            format!(
                "{b1} vs {b2}: search says {}, decision says {}",
                found.is_some(),
                decided.is_some()
            )
        });
        if let Some(trace) = decided {
            s.check(trace.replay(b1).as_ref() == Some(b2), || {
                format!("trace from {b1} to {b2} does not replay")
            });
        }
    }

    // The asymmetric axiom: a trailing nil sequence is not congruent.
    let fixtures: &[(&str, &str)] = if core.is_empty() {
        &[]
    } else {
        &[
            ("x0 = 1; nil", "x0 = 1"),
            ("nil; x0 = 1", "x0 = 1"),
            ("x0 = 1 | nil", "x0 = 1"),
        ]
    };
    for &(left, right) in fixtures {
        let b1 = parse_behaviour(left).expect("suite sources parse");
        let b2 = parse_behaviour(right).expect("suite sources parse");
        let cap = b1.size() + 2;
        let same = congruent(&b1, &b2).is_some();
        s.check(
            same == exhaustive_congruence_search(&b1, &b2, cap).is_some(),
            || format!("{left} vs {right}: decision and search disagree"),
        );
    }
    s
}

fn normalization_section(core: &[Behaviour], comm: &[Behaviour]) -> SuiteSection {
    let mut s = SuiteSection::new("normal forms are canonical and traces replay");
    for b in core.iter().chain(comm) {
        let (normal, trace) = normalize_with_trace(b);
        let verdict = if normal != normalize(b) {
            Err("tracing changes the normal form")
        } else if normalize(&normal) != normal {
            Err("normalization is not idempotent")
        } else if trace.replay(b).as_ref() != Some(&normal) {
            Err("the normalization trace does not replay")
        } else if congruent(b, &normal).is_none() {
            Err("a term is not congruent to its own normal form")
        } else {
            Ok(())
        };
        s.check(verdict.is_ok(), || format!("{b}: {}", verdict.unwrap_err()));
    }
    s
}

fn transport_section(core: &[Behaviour], pool: &[Context]) -> SuiteSection {
    let mut s = SuiteSection::new("derivations survive congruence steps");
    for g in stride(pool, core.len(), 30_000) {
        for b in core {
            let Ok(d) = check_behaviour(g, b) else {
                continue;
            };
            for step in applicable_steps(b) {
                let rewritten = apply_step(b, &step).expect("applicable step applies");
                match transport(&d, &step) {
                    Ok(d2) => {
                        let verdict = if d2.subject != rewritten {
                            Err("transport derived the wrong behaviour")
                        } else if verify_derivation(&d2).is_err() {
                            Err("the transported derivation does not verify")
                        } else {
                            Ok(())
                        };
                        s.check(verdict.is_ok(), || {
                            format!("{b} under {g}, step {step}: {}", verdict.unwrap_err())
                        });
                    }
                    Err(_) => s.check(check_behaviour(g, &rewritten).is_err(), || {
                        format!(
                            "{b} under {g}, step {step}: transport failed but the rewrite types"
                        )
                    }),
                }
            }
        }
    }
    s
}

fn round_trip_section(
    core: &[Behaviour],
    comm: &[Behaviour],
    pool: &[Context],
    comm_pool: &[Context],
) -> SuiteSection {
    let mut s = SuiteSection::new("rendered terms re-parse to themselves");
    for b in core.iter().chain(comm) {
        s.check(parse_behaviour(&b.to_string()).as_ref() == Ok(b), || {
            format!("behaviour {b} does not round-trip")
        });
    }
    if !core.is_empty() {
        for g in pool.iter().chain(comm_pool) {
            s.check(parse_context(&g.to_string()).as_ref() == Ok(g), || {
                format!("context {g} does not round-trip")
            });
        }
    }
    s
}

/// Simulates a checker bug: every accepted derivation is corrupted
/// (where the bug bites) and then verified as if it were the checker's
/// real answer.  A correct verifier turns each corruption into a
/// reported failure, so this section passing would mean the bug went
/// unnoticed.
fn injected_fault_section(max_size: usize, fault: FaultKind) -> SuiteSection {
    let mut s = SuiteSection::new(format!("accepted derivations verify ({fault} injected)"));
    let corpus = enumerate_behaviours(&EnumConfig::core(max_size));
    let pool = context_pool();
    for g in stride(&pool, corpus.len(), 30_000) {
        for b in &corpus {
            let Ok(d) = check_behaviour(g, b) else {
                continue;
            };
            let d = inject_fault(&d, fault).unwrap_or(d);
            let err = verify_derivation(&d).err();
            let ok = err.is_none();
            s.check(ok, || {
                format!(
                    "{b} under {g}: {}",
                    err.as_ref().expect("failure has an error")
                )
            });
        }
    }
    s
}

fn fault_section(max_size: usize, kinds: &[FaultKind]) -> SuiteSection {
    let name = match kinds {
        [one] => format!("corrupted derivations are rejected ({one})"),
        _ => "corrupted derivations are rejected".to_string(),
    };
    let mut s = SuiteSection::new(name);
    let corpus = enumerate_behaviours(&EnumConfig::core(max_size));
    let pool = context_pool();
    for kind in kinds {
        let mut planted = 0usize;
        for g in stride(&pool, corpus.len(), 30_000) {
            for b in &corpus {
                let Ok(d) = check_behaviour(g, b) else {
                    continue;
                };
                let Some(bad) = inject_fault(&d, *kind) else {
                    continue;
                };
                planted += 1;
                let verdict = if bad == d {
                    Err("the injector returned the derivation unchanged")
                } else if verify_derivation(&bad).is_ok() {
                    Err("a corrupted derivation passed verification")
                } else {
                    Ok(())
                };
                s.check(verdict.is_ok(), || {
                    format!("{kind} on {b} under {g}: {}", verdict.unwrap_err())
                });
            }
        }
        // The smallest term any injector can target is a compound of
        // size 3 (`if`, `;`, or `|`); below that the sweep is vacuous.
        if max_size >= 3 {
            s.check(planted > 0, || {
                format!("{kind} never applied to the swept corpus")
            });
        }
    }
    s
}

// ---------------------------------------------------------------------------

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn the_default_suites_pass_on_a_small_corpus() {
        let report = run_selftest(&SelftestConfig {
            max_size: 3,
            fault: None,
        });
        assert!(report.passed(), "{report}");
        assert_eq!(report.sections.len(), 6);
        assert!(report.sections.iter().all(|s| s.checks > 0));
        assert!(report.to_string().starts_with("ok    "));
    }

    #[test]
    fn a_zero_sized_corpus_passes_vacuously() {
        let report = run_selftest(&SelftestConfig {
            max_size: 0,
            fault: None,
        });
        assert!(report.passed(), "{report}");
        assert!(report.sections.iter().all(|s| s.checks == 0), "{report}");
    }

    #[test]
    fn injected_faults_make_the_sweep_fail_with_counterexamples() {
        for fault in FaultKind::ALL {
            let report = run_selftest(&SelftestConfig {
                max_size: 3,
                fault: Some(fault),
            });
            assert!(!report.passed(), "{fault} went unnoticed: {report}");
            assert_eq!(report.sections.len(), 1);
            let s = &report.sections[0];
            assert!(s.name.contains(fault.name()));
            assert!(s.failures > 0 && s.failures < s.checks, "{fault}: {report}");
            assert!(
                !s.examples.is_empty(),
                "{fault}: no counterexample reported"
            );
        }
    }
}
