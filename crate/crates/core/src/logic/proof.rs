//! Hilbert-style proof checking for C1.

use super::formula::Formula;
use super::parser::{parse_formula, ParseError};
use std::fmt;
use thiserror::Error;

/// The axiom schemas of C1; modus ponens is the only rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AxiomSchema {
    /// `A -> (B -> A)`
    K,
    /// `(A -> (B -> C)) -> ((A -> B) -> (A -> C))`
    S,
    /// `A -> (B -> (A & B))`
    AndIntro,
    /// `(A & B) -> A`
    AndElimLeft,
    /// `(A & B) -> B`
    AndElimRight,
    /// `A -> (A | B)`
    OrIntroLeft,
    /// `B -> (A | B)`
    OrIntroRight,
    /// `(A -> C) -> ((B -> C) -> ((A | B) -> C))`
    OrElim,
    /// `A | ~A`
    ExcludedMiddle,
    /// `~~A -> A`
    DoubleNegation,
    /// `B° -> ((A -> B) -> ((A -> ~B) -> ~A))`
    Reductio,
    /// `(A° & B°) -> ((A & B)° & (A | B)° & (A -> B)°)`
    BallPropagation,
}

impl AxiomSchema {
    pub const ALL: [AxiomSchema; 12] = [
        AxiomSchema::K,
        AxiomSchema::S,
        AxiomSchema::AndIntro,
        AxiomSchema::AndElimLeft,
        AxiomSchema::AndElimRight,
        AxiomSchema::OrIntroLeft,
        AxiomSchema::OrIntroRight,
        AxiomSchema::OrElim,
        AxiomSchema::ExcludedMiddle,
        AxiomSchema::DoubleNegation,
        AxiomSchema::Reductio,
        AxiomSchema::BallPropagation,
    ];

    /// 1-based position in [`AxiomSchema::ALL`].
    pub fn number(self) -> usize {
        Self::ALL.iter().position(|&s| s == self).unwrap() + 1
    }

    pub fn name(self) -> &'static str {
        match self {
            AxiomSchema::K => "K",
            AxiomSchema::S => "S",
            AxiomSchema::AndIntro => "and-intro",
            AxiomSchema::AndElimLeft => "and-elim-left",
            AxiomSchema::AndElimRight => "and-elim-right",
            AxiomSchema::OrIntroLeft => "or-intro-left",
            AxiomSchema::OrIntroRight => "or-intro-right",
            AxiomSchema::OrElim => "or-elim",
            AxiomSchema::ExcludedMiddle => "excluded-middle",
            AxiomSchema::DoubleNegation => "double-negation",
            AxiomSchema::Reductio => "reductio",
            AxiomSchema::BallPropagation => "ball-propagation",
        }
    }

    /// Looks a schema up by name (case-insensitive) or by number.
    pub fn lookup(key: &str) -> Option<AxiomSchema> {
        let key = key.trim();
        if let Ok(n) = key.parse::<usize>() {
            return n.checked_sub(1).and_then(|i| Self::ALL.get(i).copied());
        }
        Self::ALL
            .iter()
            .copied()
            .find(|s| s.name().eq_ignore_ascii_case(key))
    }

    /// Instantiates the schema with `a`, `b`, `c` for its metavariables.
    pub fn instantiate(self, a: &Formula, b: &Formula, c: &Formula) -> Formula {
        self.pattern().substitute(&[a, b, c])
    }

    fn pattern(self) -> Pattern {
        use Pattern as P;
        let (a, b, c) = (P::Meta(0), P::Meta(1), P::Meta(2));
        match self {
            AxiomSchema::K => P::imp(a.clone(), P::imp(b, a)),
            AxiomSchema::S => P::imp(
                P::imp(a.clone(), P::imp(b.clone(), c.clone())),
                P::imp(P::imp(a.clone(), b), P::imp(a, c)),
            ),
            AxiomSchema::AndIntro => P::imp(a.clone(), P::imp(b.clone(), P::and(a, b))),
            AxiomSchema::AndElimLeft => P::imp(P::and(a.clone(), b), a),
            AxiomSchema::AndElimRight => P::imp(P::and(a, b.clone()), b),
            AxiomSchema::OrIntroLeft => P::imp(a.clone(), P::or(a, b)),
            AxiomSchema::OrIntroRight => P::imp(b.clone(), P::or(a, b)),
            AxiomSchema::OrElim => P::imp(
                P::imp(a.clone(), c.clone()),
                P::imp(P::imp(b.clone(), c.clone()), P::imp(P::or(a, b), c)),
            ),
            AxiomSchema::ExcludedMiddle => P::or(a.clone(), P::neg(a)),
            AxiomSchema::DoubleNegation => P::imp(P::neg(P::neg(a.clone())), a),
            AxiomSchema::Reductio => P::imp(
                P::ball(b.clone()),
                P::imp(
                    P::imp(a.clone(), b.clone()),
                    P::imp(P::imp(a.clone(), P::neg(b)), P::neg(a)),
                ),
            ),
            AxiomSchema::BallPropagation => P::imp(
                P::and(P::ball(a.clone()), P::ball(b.clone())),
                P::and(
                    P::and(
                        P::ball(P::and(a.clone(), b.clone())),
                        P::ball(P::or(a.clone(), b.clone())),
                    ),
                    P::ball(P::imp(a, b)),
                ),
            ),
        }
    }

    /// Whether `f` is an instance of this schema.
    pub fn matches(self, f: &Formula) -> bool {
        let mut bindings: [Option<&Formula>; 3] = [None; 3];
        self.pattern().match_into(f, &mut bindings)
    }
}

impl fmt::Display for AxiomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (#{})", self.name(), self.number())
    }
}

#[derive(Debug, Clone)]
enum Pattern {
    Meta(usize),
    Conj(Box<Pattern>, Box<Pattern>),
    Disj(Box<Pattern>, Box<Pattern>),
    Impl(Box<Pattern>, Box<Pattern>),
    Neg(Box<Pattern>),
}

impl Pattern {
    fn imp(l: Pattern, r: Pattern) -> Pattern {
        Pattern::Impl(Box::new(l), Box::new(r))
    }
    fn and(l: Pattern, r: Pattern) -> Pattern {
        Pattern::Conj(Box::new(l), Box::new(r))
    }
    fn or(l: Pattern, r: Pattern) -> Pattern {
        Pattern::Disj(Box::new(l), Box::new(r))
    }
    fn neg(p: Pattern) -> Pattern {
        Pattern::Neg(Box::new(p))
    }
    fn ball(p: Pattern) -> Pattern {
        Pattern::neg(Pattern::and(p.clone(), Pattern::neg(p)))
    }

    fn match_into<'f>(&self, f: &'f Formula, bindings: &mut [Option<&'f Formula>; 3]) -> bool {
        match (self, f) {
            (Pattern::Meta(i), _) => match bindings[*i] {
                Some(bound) => bound == f,
                None => {
                    bindings[*i] = Some(f);
                    true
                }
            },
            (Pattern::Conj(pl, pr), Formula::Conj(l, r))
            | (Pattern::Disj(pl, pr), Formula::Disj(l, r))
            | (Pattern::Impl(pl, pr), Formula::Impl(l, r)) => {
                pl.match_into(l, bindings) && pr.match_into(r, bindings)
            }
            (Pattern::Neg(p), Formula::WeakNeg(inner)) => p.match_into(inner, bindings),
            _ => false,
        }
    }

    fn substitute(&self, metas: &[&Formula; 3]) -> Formula {
        match self {
            Pattern::Meta(i) => metas[*i].clone(),
            Pattern::Conj(l, r) => Formula::conj(l.substitute(metas), r.substitute(metas)),
            Pattern::Disj(l, r) => Formula::disj(l.substitute(metas), r.substitute(metas)),
            Pattern::Impl(l, r) => Formula::implies(l.substitute(metas), r.substitute(metas)),
            Pattern::Neg(p) => Formula::weak_neg(p.substitute(metas)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Justification {
    Axiom(AxiomSchema),
    /// 1-based step numbers of `A` and of `A -> B`.
    ModusPonens {
        minor: usize,
        major: usize,
    },
    Hypothesis,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofStep {
    pub formula: Formula,
    pub justification: Justification,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ProofScript {
    pub steps: Vec<ProofStep>,
}

impl ProofScript {
    pub fn push(&mut self, formula: Formula, justification: Justification) -> &mut Self {
        self.steps.push(ProofStep {
            formula,
            justification,
        });
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RejectReason {
    #[error("empty proof script")]
    Empty,
    #[error("not an instance of axiom schema {0}")]
    NotAnInstance(AxiomSchema),
    #[error("step {0} is not an earlier step")]
    ForwardReference(usize),
    #[error("step {0} is not an implication")]
    NotAnImplication(usize),
    #[error("antecedent of step {major} differs from step {minor}")]
    AntecedentMismatch { minor: usize, major: usize },
    #[error("modus ponens yields a different formula than the one stated")]
    WrongConclusion,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("proof rejected at step {step}: {reason}")]
pub struct Rejection {
    /// 1-based; 0 for an empty script.
    pub step: usize,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Proved {
    pub formula: Formula,
    pub hypotheses: Vec<Formula>,
}

/// Checks each step in order and returns the last formula on success.
pub fn check_proof(script: &ProofScript) -> Result<Proved, Rejection> {
    if script.steps.is_empty() {
        return Err(Rejection {
            step: 0,
            reason: RejectReason::Empty,
        });
    }
    let mut hypotheses = Vec::new();
    for (i, step) in script.steps.iter().enumerate() {
        let number = i + 1;
        let reject = |reason| Rejection {
            step: number,
            reason,
        };
        match &step.justification {
            Justification::Hypothesis => hypotheses.push(step.formula.clone()),
            Justification::Axiom(schema) => {
                if !schema.matches(&step.formula) {
                    return Err(reject(RejectReason::NotAnInstance(*schema)));
                }
            }
            &Justification::ModusPonens { minor, major } => {
                for r in [minor, major] {
                    if r == 0 || r >= number {
                        return Err(reject(RejectReason::ForwardReference(r)));
                    }
                }
                let Formula::Impl(antecedent, consequent) = &script.steps[major - 1].formula else {
                    return Err(reject(RejectReason::NotAnImplication(major)));
                };
                if **antecedent != script.steps[minor - 1].formula {
                    return Err(reject(RejectReason::AntecedentMismatch { minor, major }));
                }
                if **consequent != step.formula {
                    return Err(reject(RejectReason::WrongConclusion));
                }
            }
        }
    }
    Ok(Proved {
        formula: script.steps.last().unwrap().formula.clone(),
        hypotheses,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScriptParseError {
    #[error("line {line}: {source}")]
    Formula { line: usize, source: ParseError },
    #[error("line {line}: {message}")]
    Justification { line: usize, message: String },
}

/// Parses the line-oriented proof format:
///
/// ```text
/// # comment
/// A -> (B -> A) ; ax K
/// A             ; hyp
/// B -> A        ; mp 2 1
/// ```
///
/// Axioms are named or numbered (`ax 1`, `axiom or-elim`).
pub fn parse_proof_script(text: &str) -> Result<ProofScript, ScriptParseError> {
    let mut script = ProofScript::default();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let bad = |message: String| ScriptParseError::Justification { line, message };
        let (formula_text, just_text) = content
            .rsplit_once(';')
            .ok_or_else(|| bad("expected `<formula> ; <justification>`".into()))?;
        let formula = parse_formula(formula_text)
            .map_err(|source| ScriptParseError::Formula { line, source })?;
        let words: Vec<&str> = just_text.split_whitespace().collect();
        let justification = match words.as_slice() {
            ["hyp" | "hypothesis"] => Justification::Hypothesis,
            ["ax" | "axiom", key] => Justification::Axiom(
                AxiomSchema::lookup(key)
                    .ok_or_else(|| bad(format!("unknown axiom schema `{key}`")))?,
            ),
            ["mp", a, b] => {
                let minor = a
                    .parse()
                    .map_err(|_| bad(format!("bad step number `{a}`")))?;
                let major = b
                    .parse()
                    .map_err(|_| bad(format!("bad step number `{b}`")))?;
                Justification::ModusPonens { minor, major }
            }
            _ => {
                return Err(bad(format!(
                    "unrecognised justification `{}`",
                    just_text.trim()
                )))
            }
        };
        script.push(formula, justification);
    }
    Ok(script)
}
