//! Formula and term ASTs.
//!
//! Atoms and equalities take variables only; flexible constants enter a
//! formula exclusively through the abstraction binder `<x. body>(t)`.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;

/// Identifiers reserved for the temporal operators in the concrete syntax.
pub const RESERVED: [&str; 6] = ["G", "F", "X", "H", "O", "Y"];

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            Term::Var(n) | Term::Const(n) => n,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Atom { pred: String, args: Vec<String> },
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    /// `X`: holds at the successor moment.
    Next(Box<Formula>),
    /// `F`: holds at some moment from now on.
    Eventually(Box<Formula>),
    /// `G`: holds at every moment from now on.
    Always(Box<Formula>),
    /// `Y`: holds at the previous moment (false at moment 0).
    Yesterday(Box<Formula>),
    /// `O`: held at some moment up to and including now.
    Once(Box<Formula>),
    /// `H`: held at every moment up to and including now.
    Historically(Box<Formula>),
    /// `<var. body>(arg)`: evaluate `body` with `var` bound to the current
    /// designation of `arg`.
    Abstract {
        var: String,
        body: Box<Formula>,
        arg: Term,
    },
}

impl Formula {
    pub fn atom<S: Into<String>>(pred: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        Formula::Atom {
            pred: pred.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn eq(left: impl Into<String>, right: impl Into<String>) -> Self {
        Formula::Eq(left.into(), right.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn implies(l: Formula, r: Formula) -> Self {
        Formula::Implies(Box::new(l), Box::new(r))
    }

    pub fn next(f: Formula) -> Self {
        Formula::Next(Box::new(f))
    }

    pub fn eventually(f: Formula) -> Self {
        Formula::Eventually(Box::new(f))
    }

    pub fn always(f: Formula) -> Self {
        Formula::Always(Box::new(f))
    }

    pub fn yesterday(f: Formula) -> Self {
        Formula::Yesterday(Box::new(f))
    }

    pub fn once(f: Formula) -> Self {
        Formula::Once(Box::new(f))
    }

    pub fn historically(f: Formula) -> Self {
        Formula::Historically(Box::new(f))
    }

    pub fn abstraction(var: impl Into<String>, body: Formula, arg: Term) -> Self {
        Formula::Abstract {
            var: var.into(),
            body: Box::new(body),
            arg,
        }
    }

    /// Left-nested conjunction of `parts`; `None` when empty.
    pub fn conjunction(parts: impl IntoIterator<Item = Formula>) -> Option<Self> {
        parts.into_iter().reduce(Formula::and)
    }

    /// Direct children, left to right.
    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom { .. } | Formula::Eq(..) => vec![],
            Formula::Not(f)
            | Formula::Next(f)
            | Formula::Eventually(f)
            | Formula::Always(f)
            | Formula::Yesterday(f)
            | Formula::Once(f)
            | Formula::Historically(f) => vec![f],
            Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => vec![l, r],
            Formula::Abstract { body, .. } => vec![body],
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        1 + self.children().into_iter().map(Formula::size).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self
            .children()
            .into_iter()
            .map(Formula::depth)
            .max()
            .unwrap_or(0)
    }

    pub fn free_variables(&self) -> BTreeSet<String> {
        free_variables(self)
    }

    pub fn is_sentence(&self) -> bool {
        self.free_variables().is_empty()
    }

    /// Constant symbols occurring as abstraction arguments.
    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Abstract {
                arg: Term::Const(c),
                ..
            } = f
            {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Predicate symbols with the arity of their first occurrence.
    pub fn predicates(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |f| {
            if let Formula::Atom { pred, args } = f {
                out.entry(pred.clone()).or_insert(args.len());
            }
        });
        out
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom { args, .. } => out.extend(args.iter().cloned()),
            Formula::Eq(l, r) => {
                out.insert(l.clone());
                out.insert(r.clone());
            }
            Formula::Abstract { var, arg, .. } => {
                out.insert(var.clone());
                if let Term::Var(v) = arg {
                    out.insert(v.clone());
                }
            }
            _ => {}
        });
        out
    }

    /// Pre-order traversal.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        for c in self.children() {
            c.visit(f);
        }
    }

    /// Splits nested top-level conjunctions into their conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        let mut out = Vec::new();
        fn go<'a>(f: &'a Formula, out: &mut Vec<&'a Formula>) {
            if let Formula::And(l, r) = f {
                go(l, out);
                go(r, out);
            } else {
                out.push(f);
            }
        }
        go(self, &mut out);
        out
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print_formula(self))
    }
}

pub fn free_variables(f: &Formula) -> BTreeSet<String> {
    match f {
        Formula::Atom { args, .. } => args.iter().cloned().collect(),
        Formula::Eq(l, r) => [l.clone(), r.clone()].into_iter().collect(),
        Formula::Not(g)
        | Formula::Next(g)
        | Formula::Eventually(g)
        | Formula::Always(g)
        | Formula::Yesterday(g)
        | Formula::Once(g)
        | Formula::Historically(g) => free_variables(g),
        Formula::And(l, r) | Formula::Or(l, r) | Formula::Implies(l, r) => {
            let mut s = free_variables(l);
            s.extend(free_variables(r));
            s
        }
        Formula::Abstract { var, body, arg } => {
            let mut s = free_variables(body);
            s.remove(var);
            if let Term::Var(v) = arg {
                s.insert(v.clone());
            }
            s
        }
    }
}

/// All distinct subformulas, children before parents. `f` itself is last.
pub fn subformulas(f: &Formula) -> Vec<&Formula> {
    fn go<'a>(f: &'a Formula, seen: &mut HashSet<&'a Formula>, out: &mut Vec<&'a Formula>) {
        if seen.contains(f) {
            return;
        }
        for c in f.children() {
            go(c, seen, out);
        }
        seen.insert(f);
        out.push(f);
    }
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    go(f, &mut seen, &mut out);
    out
}

/// The declared symbols a formula may use.
///
/// Variables and constants occupy disjoint namespaces. Variables need not be
/// declared when they are bound by an enclosing abstraction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    pub vars: BTreeSet<String>,
    pub consts: BTreeSet<String>,
    pub preds: BTreeMap<String, usize>,
    pub equality: bool,
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet {
            vars: BTreeSet::new(),
            consts: BTreeSet::new(),
            preds: BTreeMap::new(),
            equality: true,
        }
    }
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vars<S: Into<String>>(mut self, vars: impl IntoIterator<Item = S>) -> Self {
        self.vars.extend(vars.into_iter().map(Into::into));
        self
    }

    pub fn with_consts<S: Into<String>>(mut self, consts: impl IntoIterator<Item = S>) -> Self {
        self.consts.extend(consts.into_iter().map(Into::into));
        self
    }

    pub fn with_preds<S: Into<String>>(
        mut self,
        preds: impl IntoIterator<Item = (S, usize)>,
    ) -> Self {
        self.preds
            .extend(preds.into_iter().map(|(n, a)| (n.into(), a)));
        self
    }

    pub fn without_equality(mut self) -> Self {
        self.equality = false;
        self
    }

    /// The smallest alphabet under which `f` is well formed: its constants,
    /// predicates and free variables.
    pub fn of(f: &Formula) -> Self {
        Alphabet {
            vars: f.free_variables(),
            consts: f.constants(),
            preds: f.predicates(),
            equality: true,
        }
    }

    pub fn merge(mut self, other: &Alphabet) -> Self {
        self.vars.extend(other.vars.iter().cloned());
        self.consts.extend(other.consts.iter().cloned());
        for (p, a) in &other.preds {
            self.preds.entry(p.clone()).or_insert(*a);
        }
        self.equality |= other.equality;
        self
    }

    /// Checks the alphabet itself: disjoint namespaces, identifier shape,
    /// no reserved operator names.
    pub fn check(&self) -> Result<(), Vec<Diagnostic>> {
        let mut diags = Vec::new();
        for v in self.vars.intersection(&self.consts) {
            diags.push(Diagnostic::new(Rule::NamespaceClash, v));
        }
        let names = self
            .vars
            .iter()
            .chain(self.consts.iter())
            .chain(self.preds.keys());
        for n in names {
            if !is_identifier(n) {
                diags.push(Diagnostic::new(Rule::BadIdentifier, n));
            } else if RESERVED.contains(&n.as_str()) {
                diags.push(Diagnostic::new(Rule::ReservedName, n));
            }
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(diags)
        }
    }
}

pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'')
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    ConstantUnderRelation,
    UndeclaredPredicate,
    ArityMismatch,
    UndeclaredVariable,
    UndeclaredConstant,
    BinderIsConstant,
    EqualityNotInAlphabet,
    NamespaceClash,
    ReservedName,
    BadIdentifier,
    NotASentence,
}

impl Rule {
    pub fn message(self) -> &'static str {
        match self {
            Rule::ConstantUnderRelation => "constant under relation symbol",
            Rule::UndeclaredPredicate => "undeclared predicate",
            Rule::ArityMismatch => "arity mismatch",
            Rule::UndeclaredVariable => "undeclared variable",
            Rule::UndeclaredConstant => "undeclared constant",
            Rule::BinderIsConstant => "abstraction binds a constant symbol",
            Rule::EqualityNotInAlphabet => "equality not in alphabet",
            Rule::NamespaceClash => "name declared as both variable and constant",
            Rule::ReservedName => "reserved operator name",
            Rule::BadIdentifier => "not an identifier",
            Rule::NotASentence => "free variables in sentence",
        }
    }
}

/// A well-formedness violation: the rule broken and the offending subterm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub rule: Rule,
    pub subterm: String,
}

impl Diagnostic {
    pub fn new(rule: Rule, subterm: impl Into<String>) -> Self {
        Diagnostic {
            rule,
            subterm: subterm.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule.message(), self.subterm)
    }
}

/// Checks `f` against `alphabet`. Collects every violation rather than
/// stopping at the first.
pub fn well_formed(f: &Formula, alphabet: &Alphabet) -> Result<(), Vec<Diagnostic>> {
    let mut diags = Vec::new();
    let mut bound = Vec::new();
    check(f, alphabet, &mut bound, &mut diags);
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

/// `well_formed` plus the sentence condition.
pub fn well_formed_sentence(f: &Formula, alphabet: &Alphabet) -> Result<(), Vec<Diagnostic>> {
    let mut diags = well_formed(f, alphabet).err().unwrap_or_default();
    for v in f.free_variables() {
        diags.push(Diagnostic::new(Rule::NotASentence, v));
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

fn check_var(v: &str, alphabet: &Alphabet, bound: &[&str], ctx: &Formula, diags: &mut Vec<Diagnostic>) {
    if alphabet.consts.contains(v) {
        diags.push(Diagnostic::new(Rule::ConstantUnderRelation, ctx.to_string()));
    } else if !bound.contains(&v) && !alphabet.vars.contains(v) {
        diags.push(Diagnostic::new(Rule::UndeclaredVariable, format!("{v} in {ctx}")));
    }
}

fn check<'a>(f: &'a Formula, alphabet: &Alphabet, bound: &mut Vec<&'a str>, diags: &mut Vec<Diagnostic>) {
    match f {
        Formula::Atom { pred, args } => {
            match alphabet.preds.get(pred) {
                None => diags.push(Diagnostic::new(Rule::UndeclaredPredicate, f.to_string())),
                Some(&n) if n != args.len() => {
                    diags.push(Diagnostic::new(Rule::ArityMismatch, f.to_string()))
                }
                _ => {}
            }
            for a in args {
                check_var(a, alphabet, bound, f, diags);
            }
        }
        Formula::Eq(l, r) => {
            if !alphabet.equality {
                diags.push(Diagnostic::new(Rule::EqualityNotInAlphabet, f.to_string()));
            }
            check_var(l, alphabet, bound, f, diags);
            check_var(r, alphabet, bound, f, diags);
        }
        Formula::Abstract { var, body, arg } => {
            if alphabet.consts.contains(var) {
                diags.push(Diagnostic::new(Rule::BinderIsConstant, f.to_string()));
            }
            match arg {
                Term::Const(c) => {
                    if !alphabet.consts.contains(c) {
                        diags.push(Diagnostic::new(Rule::UndeclaredConstant, c.clone()));
                    }
                }
                Term::Var(v) => check_var(v, alphabet, bound, f, diags),
            }
            bound.push(var);
            check(body, alphabet, bound, diags);
            bound.pop();
        }
        _ => {
            for c in f.children() {
                check(c, alphabet, bound, diags);
            }
        }
    }
}
