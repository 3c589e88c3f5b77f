//! Bivaluation semantics and the quasi-matrix decision procedure for C1.
//!
//! Admissible valuations are searched over a *semantic closure*: the
//! subformula closure of the input, extended with `~D` and `~E` for every
//! negated binary formula `~(D # E)` it contains. On that set the C1
//! bivaluation clauses are equivalent to the following local rules:
//!
//! - binary connectives are classical;
//! - `v(X) = 0` forces `v(~X) = 1`;
//! - `v(~~X) = 1` forces `v(X) = 1`;
//! - `v(X & ~X) = 1` forces `v(~(X & ~X)) = 0`;
//! - `v(D # E) = v(~(D # E)) = 1` requires `D` or `E` to be inconsistent,
//!   where `X` is inconsistent when `v(X) = v(~X) = 1`.
//!
//! Every locally admissible assignment extends to a full bivaluation by
//! setting `v(~X) = 0` whenever `v(X) = 1` for formulas outside the
//! closure. Valuations are reported on the subformula closure only; the
//! extra negations are existentially checked.

use super::formula::Formula;
use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;
use thiserror::Error;

pub const DEFAULT_MAX_CLOSURE: usize = 64;

/// Environment variable overriding [`DEFAULT_MAX_CLOSURE`].
pub const MAX_CLOSURE_ENV: &str = "PAQS_MAX_CLOSURE";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("subformula closure has {size} nodes, above the cap of {cap}")]
    ResourceLimit { size: usize, cap: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_closure: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_closure: DEFAULT_MAX_CLOSURE,
        }
    }
}

impl Limits {
    /// Default limits, with the closure cap taken from `PAQS_MAX_CLOSURE`
    /// when it is set to a positive integer.
    pub fn from_env() -> Self {
        std::env::var(MAX_CLOSURE_ENV)
            .ok()
            .and_then(|s| s.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .map(|max_closure| Limits { max_closure })
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Node {
    Atom,
    Conj(usize, usize),
    Disj(usize, usize),
    Impl(usize, usize),
    Neg(usize),
}

#[derive(Debug, Clone, Copy)]
enum Rule {
    /// `v(~~X) = 1 => v(X) = 1`: (double negation, inner formula).
    DoubleNeg { outer: usize, inner: usize },
    /// `v(X & ~X) = 1 => v(~(X & ~X)) = 0`.
    Ball { neg: usize, contradiction: usize },
    /// `v(C) = v(~C) = 1 => inconsistent(D) or inconsistent(E)` for `C = D # E`.
    Propagate {
        neg: usize,
        binary: usize,
        left: usize,
        left_neg: usize,
        right: usize,
        right_neg: usize,
    },
}

impl Rule {
    fn holds(&self, v: &[bool]) -> bool {
        match *self {
            Rule::DoubleNeg { outer, inner } => !v[outer] || v[inner],
            Rule::Ball { neg, contradiction } => !(v[contradiction] && v[neg]),
            Rule::Propagate {
                neg,
                binary,
                left,
                left_neg,
                right,
                right_neg,
            } => !(v[binary] && v[neg]) || (v[left] && v[left_neg]) || (v[right] && v[right_neg]),
        }
    }

    fn trigger(&self) -> usize {
        match *self {
            Rule::DoubleNeg { outer, inner } => outer.max(inner),
            Rule::Ball { neg, contradiction } => neg.max(contradiction),
            Rule::Propagate {
                neg,
                binary,
                left,
                left_neg,
                right,
                right_neg,
            } => [neg, binary, left, left_neg, right, right_neg]
                .into_iter()
                .max()
                .unwrap_or(0),
        }
    }
}

/// Indexed semantic closure of a formula set.
#[derive(Debug, Clone)]
pub(crate) struct Closure {
    formulas: Vec<Formula>,
    nodes: Vec<Node>,
    index: HashMap<Formula, usize>,
    /// Number of nodes in the plain subformula closure; these come first.
    visible: usize,
    rules_at: Vec<Vec<Rule>>,
}

impl Closure {
    pub(crate) fn build(targets: &[Formula], limits: &Limits) -> Result<Self, LogicError> {
        let mut closure = Closure {
            formulas: Vec::new(),
            nodes: Vec::new(),
            index: HashMap::new(),
            visible: 0,
            rules_at: Vec::new(),
        };
        for f in targets {
            closure.insert(f);
        }
        closure.visible = closure.formulas.len();
        if closure.visible > limits.max_closure {
            return Err(LogicError::ResourceLimit {
                size: closure.visible,
                cap: limits.max_closure,
            });
        }

        // Every extra node is `~X` with `X` already visible, so this loop
        // adds at most `visible` nodes.
        let mut cursor = 0;
        while cursor < closure.nodes.len() {
            if let Node::Neg(inner) = closure.nodes[cursor] {
                if let Some((l, r)) = closure.children(inner) {
                    for child in [l, r] {
                        let neg = Formula::weak_neg(closure.formulas[child].clone());
                        closure.insert(&neg);
                    }
                }
            }
            cursor += 1;
        }

        closure.rules_at = vec![Vec::new(); closure.nodes.len()];
        for (i, node) in closure.nodes.clone().into_iter().enumerate() {
            let Node::Neg(inner) = node else { continue };
            if let Node::Neg(innermost) = closure.nodes[inner] {
                closure.add_rule(Rule::DoubleNeg {
                    outer: i,
                    inner: innermost,
                });
            }
            if closure.formulas[inner].as_weak_contradiction().is_some() {
                closure.add_rule(Rule::Ball {
                    neg: i,
                    contradiction: inner,
                });
            }
            if let Some((left, right)) = closure.children(inner) {
                let left_neg = closure.neg_of(left);
                let right_neg = closure.neg_of(right);
                closure.add_rule(Rule::Propagate {
                    neg: i,
                    binary: inner,
                    left,
                    left_neg,
                    right,
                    right_neg,
                });
            }
        }
        Ok(closure)
    }

    fn add_rule(&mut self, rule: Rule) {
        let at = rule.trigger();
        self.rules_at[at].push(rule);
    }

    fn neg_of(&self, idx: usize) -> usize {
        let neg = Formula::weak_neg(self.formulas[idx].clone());
        self.index[&neg]
    }

    fn children(&self, idx: usize) -> Option<(usize, usize)> {
        match self.nodes[idx] {
            Node::Conj(l, r) | Node::Disj(l, r) | Node::Impl(l, r) => Some((l, r)),
            _ => None,
        }
    }

    fn insert(&mut self, f: &Formula) -> usize {
        if let Some(&i) = self.index.get(f) {
            return i;
        }
        let node = match f {
            Formula::Atom(_) => Node::Atom,
            Formula::Conj(l, r) => Node::Conj(self.insert(l), self.insert(r)),
            Formula::Disj(l, r) => Node::Disj(self.insert(l), self.insert(r)),
            Formula::Impl(l, r) => Node::Impl(self.insert(l), self.insert(r)),
            Formula::WeakNeg(inner) => Node::Neg(self.insert(inner)),
        };
        let i = self.formulas.len();
        self.formulas.push(f.clone());
        self.nodes.push(node);
        self.index.insert(f.clone(), i);
        i
    }

    pub(crate) fn index_of(&self, f: &Formula) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    #[cfg(test)]
    pub(crate) fn visible_len(&self) -> usize {
        self.visible
    }

    /// The `k`-th candidate value of node `i`, given values of earlier nodes.
    fn option(&self, i: usize, k: u8, v: &[bool]) -> Option<bool> {
        let only = |val: bool| if k == 0 { Some(val) } else { None };
        match self.nodes[i] {
            Node::Atom => [Some(false), Some(true), None][k as usize],
            Node::Conj(l, r) => only(v[l] && v[r]),
            Node::Disj(l, r) => only(v[l] || v[r]),
            Node::Impl(l, r) => only(!v[l] || v[r]),
            Node::Neg(inner) if !v[inner] => only(true),
            Node::Neg(_) => [Some(false), Some(true), None][k as usize],
        }
    }

    /// Whether `v[..=i]` satisfies every rule that becomes checkable at `i`.
    pub(crate) fn locally_consistent(&self, i: usize, v: &[bool]) -> bool {
        self.rules_at[i].iter().all(|r| r.holds(v))
    }

    /// Checks the full rule set and the connective tables on a complete
    /// assignment of the semantic closure.
    #[cfg(test)]
    pub(crate) fn admits(&self, v: &[bool]) -> bool {
        (0..self.len()).all(|i| {
            let shape_ok = match self.nodes[i] {
                Node::Atom => true,
                Node::Conj(l, r) => v[i] == (v[l] && v[r]),
                Node::Disj(l, r) => v[i] == (v[l] || v[r]),
                Node::Impl(l, r) => v[i] == (!v[l] || v[r]),
                Node::Neg(inner) => v[inner] || v[i],
            };
            shape_ok && self.locally_consistent(i, v)
        })
    }
}

/// An admissible C1 valuation restricted to a subformula closure.
#[derive(Clone, PartialEq, Eq)]
pub struct Valuation {
    formulas: Arc<[Formula]>,
    values: Vec<bool>,
}

impl Valuation {
    /// Value of `f`, if it belongs to the closure this valuation covers.
    pub fn value(&self, f: &Formula) -> Option<bool> {
        self.formulas
            .iter()
            .position(|g| g == f)
            .map(|i| self.values[i])
    }

    pub fn atom(&self, name: &str) -> Option<bool> {
        self.value(&Formula::Atom(name.to_string()))
    }

    /// Entries in closure order (children before parents).
    pub fn entries(&self) -> impl Iterator<Item = (&Formula, bool)> {
        self.formulas.iter().zip(self.values.iter().copied())
    }

    /// Values packed as a bit string in closure order, for comparisons.
    pub fn bits(&self) -> &[bool] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Atom assignments, sorted, followed by the negated subformulas in
    /// closure order.
    pub fn assignments(&self) -> Vec<(String, bool)> {
        let mut atoms: Vec<(String, bool)> = Vec::new();
        let mut negs: Vec<(String, bool)> = Vec::new();
        for (f, b) in self.entries() {
            match f {
                Formula::Atom(name) => atoms.push((name.clone(), b)),
                Formula::WeakNeg(_) => negs.push((f.to_string(), b)),
                _ => {}
            }
        }
        atoms.sort();
        atoms.extend(negs);
        atoms
    }

    /// [`Valuation::assignments`] as one `formula=bit` line each.
    pub fn render(&self) -> String {
        self.assignments()
            .into_iter()
            .map(|(f, b)| format!("{f}={}\n", u8::from(b)))
            .collect()
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.entries().map(|(k, v)| (k.to_string(), u8::from(v))))
            .finish()
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Depth-first quasi-matrix search. Visible nodes are enumerated in
/// lexicographic order (0 before 1, lower closure index first); the extra
/// negations only need one admissible completion.
struct Search {
    closure: Closure,
    shared: Arc<[Formula]>,
    goals: Vec<Option<bool>>,
    values: Vec<bool>,
    tried: Vec<u8>,
    depth: usize,
    started: bool,
    done: bool,
}

impl Search {
    fn new(closure: Closure, goals: &[(usize, bool)]) -> Self {
        let n = closure.len();
        let mut goal_vec = vec![None; n];
        for &(i, b) in goals {
            goal_vec[i] = Some(b);
        }
        let shared: Arc<[Formula]> = closure.formulas[..closure.visible].to_vec().into();
        Search {
            closure,
            shared,
            goals: goal_vec,
            values: vec![false; n],
            tried: vec![0; n + 1],
            depth: 0,
            started: false,
            done: false,
        }
    }

    /// Extends the assignment of `start..depth` until `depth == end`.
    /// Returns false once the options at `start` are exhausted.
    fn descend(&mut self, start: usize, end: usize) -> bool {
        loop {
            if self.depth == end {
                return true;
            }
            let i = self.depth;
            match self.closure.option(i, self.tried[i], &self.values) {
                Some(val) => {
                    self.tried[i] += 1;
                    self.values[i] = val;
                    let goal_ok = self.goals[i].is_none_or(|g| g == val);
                    if goal_ok && self.closure.locally_consistent(i, &self.values) {
                        self.depth += 1;
                        self.tried[self.depth] = 0;
                    }
                }
                None => {
                    if i == start {
                        return false;
                    }
                    self.depth -= 1;
                }
            }
        }
    }

    fn next_valuation(&mut self) -> Option<Valuation> {
        let visible = self.closure.visible;
        let total = self.closure.len();
        loop {
            if self.done {
                return None;
            }
            let found = if !self.started {
                self.started = true;
                self.depth = 0;
                self.tried[0] = 0;
                self.descend(0, visible)
            } else if visible == 0 {
                false
            } else {
                self.depth = visible - 1;
                self.descend(0, visible)
            };
            if !found {
                self.done = true;
                return None;
            }
            self.depth = visible;
            self.tried[visible] = 0;
            if self.descend(visible, total) {
                return Some(Valuation {
                    formulas: Arc::clone(&self.shared),
                    values: self.values[..visible].to_vec(),
                });
            }
        }
    }
}

/// Deterministic stream of admissible valuations.
pub struct Valuations {
    search: Search,
}

impl Iterator for Valuations {
    type Item = Valuation;

    fn next(&mut self) -> Option<Valuation> {
        self.search.next_valuation()
    }
}

/// Streams every admissible valuation over the subformula closure of
/// `formulas`, in lexicographic order of closure index.
pub fn enumerate_valuations(
    formulas: &[Formula],
    limits: &Limits,
) -> Result<Valuations, LogicError> {
    let closure = Closure::build(formulas, limits)?;
    Ok(Valuations {
        search: Search::new(closure, &[]),
    })
}

fn first_with_goals(
    formulas: &[Formula],
    goals: &[(Formula, bool)],
    limits: &Limits,
) -> Result<Option<Valuation>, LogicError> {
    let closure = Closure::build(formulas, limits)?;
    let goal_idx: Vec<(usize, bool)> = goals
        .iter()
        .map(|(f, b)| {
            (
                closure
                    .index_of(f)
                    .expect("goal formulas are in the closure"),
                *b,
            )
        })
        .collect();
    Ok(Search::new(closure, &goal_idx).next_valuation())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { countermodel: Valuation },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Decides C1 validity: true in every admissible valuation.
pub fn is_valid(f: &Formula, limits: &Limits) -> Result<Validity, LogicError> {
    let targets = std::slice::from_ref(f);
    Ok(
        match first_with_goals(targets, &[(f.clone(), false)], limits)? {
            None => Validity::Valid,
            Some(countermodel) => Validity::Invalid { countermodel },
        },
    )
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    Nontrivial { witness: Valuation },
}

impl Triviality {
    pub fn is_trivial(&self) -> bool {
        matches!(self, Triviality::Trivial)
    }
}

/// A set is trivial when it has no admissible model; then every formula,
/// in particular a fresh atom, follows from it.
pub fn trivializes(gamma: &[Formula], limits: &Limits) -> Result<Triviality, LogicError> {
    let goals: Vec<(Formula, bool)> = gamma.iter().map(|f| (f.clone(), true)).collect();
    Ok(match first_with_goals(gamma, &goals, limits)? {
        None => Triviality::Trivial,
        Some(witness) => Triviality::Nontrivial { witness },
    })
}

/// Whether `gamma` entails `conclusion`: every admissible valuation making
/// all of `gamma` true makes `conclusion` true.
pub fn entails(
    gamma: &[Formula],
    conclusion: &Formula,
    limits: &Limits,
) -> Result<bool, LogicError> {
    let mut targets = gamma.to_vec();
    targets.push(conclusion.clone());
    let mut goals: Vec<(Formula, bool)> = gamma.iter().map(|f| (f.clone(), true)).collect();
    goals.push((conclusion.clone(), false));
    Ok(first_with_goals(&targets, &goals, limits)?.is_none())
}

/// A name not used as an atom anywhere in `formulas`.
pub fn fresh_atom(formulas: &[Formula]) -> Formula {
    let used: std::collections::HashSet<&str> = formulas.iter().flat_map(|f| f.atoms()).collect();
    (0..)
        .map(|i| format!("Z{i}"))
        .find(|name| !used.contains(name.as_str()))
        .map(Formula::Atom)
        .expect("unbounded name supply")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse_formula;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn all(fs: &[&str]) -> Vec<Valuation> {
        let fs: Vec<Formula> = fs.iter().map(|s| p(s)).collect();
        enumerate_valuations(&fs, &Limits::default())
            .unwrap()
            .collect()
    }

    fn valid(s: &str) -> bool {
        is_valid(&p(s), &Limits::default()).unwrap().is_valid()
    }

    #[test]
    fn single_atom_has_two_valuations() {
        let vs = all(&["A"]);
        assert_eq!(vs.len(), 2);
        assert_eq!(vs[0].atom("A"), Some(false));
        assert_eq!(vs[1].atom("A"), Some(true));
    }

    #[test]
    fn weak_negation_branches_only_on_true_argument() {
        let vs = all(&["~A"]);
        let got: Vec<Vec<bool>> = vs.iter().map(|v| v.bits().to_vec()).collect();
        assert_eq!(
            got,
            vec![vec![false, true], vec![true, false], vec![true, true]]
        );
    }

    #[test]
    fn double_negation_clause_prunes() {
        let vs = all(&["~~A"]);
        let nna = p("~~A");
        assert!(vs
            .iter()
            .all(|v| !(v.value(&nna) == Some(true) && v.atom("A") == Some(false))));
        assert_eq!(vs.len(), 4);
    }

    #[test]
    fn empty_set_has_one_empty_valuation() {
        let vs: Vec<Valuation> = enumerate_valuations(&[], &Limits::default())
            .unwrap()
            .collect();
        assert_eq!(vs.len(), 1);
        assert!(vs[0].is_empty());
    }

    #[test]
    fn weak_explosion_fails_with_expected_countermodel() {
        match is_valid(&p("(A & ~A) -> B"), &Limits::default()).unwrap() {
            Validity::Invalid { countermodel } => {
                assert_eq!(countermodel.atom("A"), Some(true));
                assert_eq!(countermodel.value(&p("~A")), Some(true));
                assert_eq!(countermodel.atom("B"), Some(false));
            }
            Validity::Valid => panic!("weak explosion must not be valid"),
        }
    }

    #[test]
    fn strong_explosion_is_valid() {
        assert!(valid("(A & ~*A) -> B"));
    }

    #[test]
    fn textbook_verdicts() {
        assert!(valid("A -> A"));
        assert!(valid("A | ~A"));
        assert!(!valid("~(A & ~A)"));
        assert!(valid("~~A -> A"));
        assert!(!valid("A -> ~~A"));
        assert!(!valid("~A -> (A -> B)"));
        assert!(valid("@A -> (A -> (~A -> B))"));
        assert!(valid("@A -> (~A -> ~*A)"));
        assert!(valid("~*A -> ~A"));
        assert!(valid("A | ~*A"));
        assert!(valid("~*~*A -> A"));
        assert!(valid("A -> ~*~*A"));
        assert!(valid("@A & @B -> @(A -> B)"));
        // With A and B both false, both are well-behaved, so A -> B is
        // well-behaved and cannot be true together with its negation.
        assert!(valid("~A & ~B & ~(A -> B) -> (A | B)"));
    }

    #[test]
    fn strong_negation_is_classical_on_compounds() {
        assert!(valid("~*(A & B) -> (~*A | ~*B)"));
        assert!(valid("(~*A | ~*B) -> ~*(A & B)"));
        assert!(valid("((A -> B) -> A) -> A"));
    }

    #[test]
    fn triviality_dichotomy() {
        let lim = Limits::default();
        assert!(!trivializes(&[p("A"), p("~A")], &lim).unwrap().is_trivial());
        assert!(trivializes(&[p("A"), p("~*A")], &lim).unwrap().is_trivial());
        assert!(!trivializes(&[], &lim).unwrap().is_trivial());
    }

    #[test]
    fn triviality_matches_fresh_atom_entailment() {
        let lim = Limits::default();
        for set in [
            vec!["A", "~A"],
            vec!["A", "~*A"],
            vec!["A & ~A", "B -> ~B"],
            vec![],
        ] {
            let gamma: Vec<Formula> = set.iter().map(|s| p(s)).collect();
            let z = fresh_atom(&gamma);
            assert_eq!(
                trivializes(&gamma, &lim).unwrap().is_trivial(),
                entails(&gamma, &z, &lim).unwrap(),
                "{set:?}"
            );
        }
    }

    #[test]
    fn resource_cap_is_enforced() {
        let big = (0..40).fold(p("A0"), |acc, i| {
            Formula::conj(acc, Formula::atom(format!("A{}", i + 1)))
        });
        let err = is_valid(&big, &Limits::default()).unwrap_err();
        assert!(matches!(err, LogicError::ResourceLimit { cap: 64, .. }));
        assert!(is_valid(&big, &Limits { max_closure: 200 }).is_ok());
    }

    #[test]
    fn countermodel_rendering() {
        let Validity::Invalid { countermodel } =
            is_valid(&p("(A & ~A) -> B"), &Limits::default()).unwrap()
        else {
            panic!()
        };
        assert_eq!(countermodel.render(), "A=1\nB=0\n~A=1\n");
    }

    #[test]
    fn limits_from_env_falls_back_on_garbage() {
        // Only checks the parsing path; the variable is not set in tests.
        assert_eq!(Limits::from_env().max_closure, DEFAULT_MAX_CLOSURE);
    }

    /// Brute force over every bit pattern of the semantic closure; the
    /// projection onto visible nodes must equal the streamed valuations.
    #[test]
    fn search_agrees_with_exhaustive_filter() {
        for text in [
            "~(A & ~A)",
            "~(A -> B) & ~~A",
            "~*A | ~(B & ~C)",
            "~~(A | ~B)",
        ] {
            let f = p(text);
            let closure = Closure::build(std::slice::from_ref(&f), &Limits::default()).unwrap();
            let n = closure.len();
            assert!(n <= 20);
            let mut expected: Vec<Vec<bool>> = Vec::new();
            for mask in 0u32..(1 << n) {
                let v: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                if closure.admits(&v) {
                    expected.push(v[..closure.visible_len()].to_vec());
                }
            }
            expected.sort();
            expected.dedup();
            let mut got: Vec<Vec<bool>> = enumerate_valuations(&[f], &Limits::default())
                .unwrap()
                .map(|v| v.bits().to_vec())
                .collect();
            let streamed = got.clone();
            got.sort();
            assert_eq!(streamed, got, "stream must already be sorted for {text}");
            assert_eq!(got, expected, "{text}");
        }
    }
}
