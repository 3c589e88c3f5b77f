use std::fmt;

/// A formula of the propositional calculus C1.
///
/// Only the primitive connectives are stored. Strong negation and the
/// consistency operator are abbreviations and are expanded by their
/// constructors, so they never appear as nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom(String),
    Conj(Box<Formula>, Box<Formula>),
    Disj(Box<Formula>, Box<Formula>),
    Impl(Box<Formula>, Box<Formula>),
    WeakNeg(Box<Formula>),
}

impl Formula {
    /// Builds an atom. Panics on names that are not identifiers; use the
    /// parser for untrusted input.
    pub fn atom(name: impl Into<String>) -> Self {
        let name = name.into();
        assert!(is_identifier(&name), "invalid atom name {name:?}");
        Formula::Atom(name)
    }

    pub fn conj(left: Formula, right: Formula) -> Self {
        Formula::Conj(Box::new(left), Box::new(right))
    }

    pub fn disj(left: Formula, right: Formula) -> Self {
        Formula::Disj(Box::new(left), Box::new(right))
    }

    pub fn implies(left: Formula, right: Formula) -> Self {
        Formula::Impl(Box::new(left), Box::new(right))
    }

    pub fn weak_neg(inner: Formula) -> Self {
        Formula::WeakNeg(Box::new(inner))
    }

    /// `A°`, i.e. `~(A & ~A)`.
    pub fn ball(inner: Formula) -> Self {
        let contradiction = Formula::conj(inner.clone(), Formula::weak_neg(inner));
        Formula::weak_neg(contradiction)
    }

    /// `~*A`, i.e. `~A & A°`.
    pub fn strong_neg(inner: Formula) -> Self {
        Formula::conj(Formula::weak_neg(inner.clone()), Formula::ball(inner))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// If this formula has the shape `X & ~X`, returns `X`.
    pub fn as_weak_contradiction(&self) -> Option<&Formula> {
        match self {
            Formula::Conj(left, right) => match right.as_ref() {
                Formula::WeakNeg(inner) if inner == left => Some(left),
                _ => None,
            },
            _ => None,
        }
    }

    /// If this formula has the shape `~(X & ~X)`, returns `X`.
    pub fn as_ball(&self) -> Option<&Formula> {
        match self {
            Formula::WeakNeg(inner) => inner.as_weak_contradiction(),
            _ => None,
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::WeakNeg(inner) => 1 + inner.size(),
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => {
                1 + l.size() + r.size()
            }
        }
    }

    /// Number of weak-negation occurrences.
    pub fn negation_count(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::WeakNeg(inner) => 1 + inner.negation_count(),
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => {
                l.negation_count() + r.negation_count()
            }
        }
    }

    /// Distinct atom names, sorted.
    pub fn atoms(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            Formula::Atom(name) => out.push(name),
            Formula::WeakNeg(inner) => inner.collect_atoms(out),
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Top-level conjuncts, flattening nested conjunctions.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            match f {
                Formula::Conj(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
                other => out.push(other),
            }
        }
        out
    }

    /// Replaces every weak negation by strong negation.
    pub fn strengthen_negations(&self) -> Formula {
        match self {
            Formula::Atom(_) => self.clone(),
            Formula::WeakNeg(inner) => Formula::strong_neg(inner.strengthen_negations()),
            Formula::Conj(l, r) => {
                Formula::conj(l.strengthen_negations(), r.strengthen_negations())
            }
            Formula::Disj(l, r) => {
                Formula::disj(l.strengthen_negations(), r.strengthen_negations())
            }
            Formula::Impl(l, r) => {
                Formula::implies(l.strengthen_negations(), r.strengthen_negations())
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Impl(..) => 1,
            Formula::Disj(..) => 2,
            Formula::Conj(..) => 3,
            Formula::WeakNeg(_) | Formula::Atom(_) => 4,
        }
    }
}

pub(crate) fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Prints with the minimum parentheses the grammar needs; binary
/// connectives associate to the left.
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(name) => f.write_str(name),
            Formula::WeakNeg(inner) => {
                f.write_str("~")?;
                if inner.precedence() < 4 {
                    write!(f, "({inner})")
                } else {
                    write!(f, "{inner}")
                }
            }
            Formula::Conj(l, r) | Formula::Disj(l, r) | Formula::Impl(l, r) => {
                let op = match self {
                    Formula::Conj(..) => "&",
                    Formula::Disj(..) => "|",
                    _ => "->",
                };
                let prec = self.precedence();
                if l.precedence() < prec {
                    write!(f, "({l})")?;
                } else {
                    write!(f, "{l}")?;
                }
                write!(f, " {op} ")?;
                if r.precedence() <= prec {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a() -> Formula {
        Formula::atom("A")
    }

    #[test]
    fn strong_negation_expands() {
        let expected = Formula::conj(
            Formula::weak_neg(a()),
            Formula::weak_neg(Formula::conj(a(), Formula::weak_neg(a()))),
        );
        assert_eq!(Formula::strong_neg(a()), expected);
    }

    #[test]
    fn ball_shape_is_recognised() {
        let ball = Formula::ball(a());
        assert_eq!(ball.as_ball(), Some(&a()));
        assert_eq!(ball.to_string(), "~(A & ~A)");
        assert!(a().as_ball().is_none());
    }

    #[test]
    fn display_parenthesises_right_nested_implication() {
        let b = Formula::atom("B");
        let c = Formula::atom("C");
        let f = Formula::implies(a(), Formula::implies(b.clone(), c.clone()));
        assert_eq!(f.to_string(), "A -> (B -> C)");
        let g = Formula::implies(Formula::implies(a(), b), c);
        assert_eq!(g.to_string(), "A -> B -> C");
    }

    #[test]
    fn conjuncts_flatten() {
        let b = Formula::atom("B");
        let f = Formula::conj(Formula::conj(a(), b.clone()), Formula::weak_neg(a()));
        let parts = f.conjuncts();
        assert_eq!(parts, vec![&a(), &b, &Formula::weak_neg(a())]);
    }

    #[test]
    #[should_panic]
    fn atom_rejects_non_identifier() {
        Formula::atom("1x");
    }
}
