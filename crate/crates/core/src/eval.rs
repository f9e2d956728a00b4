//! Truth of formulas on trace models.
//!
//! Lasso mode is two-valued and exact on the infinite trace. Bounded mode is
//! three-valued on a finite prefix: a definite answer holds on every infinite
//! extension of the prefix. `Y` at moment 0 is false.
//!
//! Formulas are compiled once into a [`Compiled`] program that can be run
//! against any [`Frame`], so the small-scope search evaluates candidates
//! without building a [`TraceModel`].

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use thiserror::Error;

use crate::model::{Assignment, Elem, Lasso, ModelError, PredicateTimeline, TraceModel};
use crate::syntax::{Formula, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Unknown,
}

impl Verdict {
    pub fn is_definite(self) -> bool {
        self != Verdict::Unknown
    }

    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::False, _) | (_, Verdict::False) => Verdict::False,
            (Verdict::True, Verdict::True) => Verdict::True,
            _ => Verdict::Unknown,
        }
    }

    pub fn or(self, other: Verdict) -> Verdict {
        !(!self).and(!other)
    }

    pub fn implies(self, other: Verdict) -> Verdict {
        (!self).or(other)
    }
}

impl From<bool> for Verdict {
    fn from(b: bool) -> Self {
        if b {
            Verdict::True
        } else {
            Verdict::False
        }
    }
}

impl std::ops::Not for Verdict {
    type Output = Verdict;

    fn not(self) -> Verdict {
        match self {
            Verdict::True => Verdict::False,
            Verdict::False => Verdict::True,
            Verdict::Unknown => Verdict::Unknown,
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Verdict::True => "True",
            Verdict::False => "False",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0} is free and unassigned")]
    UnboundVariable(String),
    #[error("variable {var} is assigned {element}, which is not in the domain")]
    NotInDomain { var: String, element: String },
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("predicate {pred} has arity {expected} but is used with {found} arguments")]
    ArityMismatch { pred: String, expected: usize, found: usize },
    #[error("lasso evaluation needs a model with a loop")]
    NoLasso,
    #[error("bounded evaluation needs a model without a loop")]
    HasLasso,
    #[error("moment {moment} is beyond the observed prefix of length {len}")]
    OutOfHorizon { moment: usize, len: usize },
    #[error("not a sentence; free variables: {}", .0.join(", "))]
    NotSentence(Vec<String>),
}

impl From<ModelError> for EvalError {
    fn from(e: ModelError) -> Self {
        match e {
            ModelError::UnknownConstant(c) => EvalError::UnknownConstant(c),
            ModelError::UnknownPredicate(p) => EvalError::UnknownPredicate(p),
            ModelError::OutOfHorizon { moment, len } => EvalError::OutOfHorizon { moment, len },
            other => EvalError::UnknownConstant(other.to_string()),
        }
    }
}

/// A structure the compiled program can be run against. Constant and
/// predicate ids index [`Compiled::constants`] and [`Compiled::predicates`];
/// positions are stored positions `< horizon()`.
pub trait Frame {
    fn horizon(&self) -> usize;
    fn lasso(&self) -> Option<Lasso>;
    fn domain_len(&self) -> usize;
    fn constant(&self, id: usize, pos: usize) -> Elem;
    fn holds(&self, pred: usize, pos: usize, args: &[Elem]) -> bool;
}

type Slot = usize;

#[derive(Debug, Clone)]
enum Arg {
    Const(usize),
    Var(Slot),
}

#[derive(Debug, Clone)]
enum Op {
    Atom(usize, Vec<Slot>),
    Eq(Slot, Slot),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Next(usize),
    Eventually(usize),
    Always(usize),
    Yesterday(usize),
    Once(usize),
    Historically(usize),
    Abstract(Slot, usize, Arg),
}

#[derive(Debug, Clone)]
struct Node {
    op: Op,
    /// Slots free in this subformula, used as the memo key.
    free: Vec<Slot>,
}

/// A formula compiled for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Compiled {
    nodes: Vec<Node>,
    root: usize,
    slots: Vec<String>,
    constants: Vec<String>,
    predicates: Vec<(String, usize)>,
}

struct Builder {
    nodes: Vec<Node>,
    slots: BTreeMap<String, Slot>,
    constants: Vec<String>,
    predicates: Vec<(String, usize)>,
    dedup: HashMap<Formula, usize>,
}

impl Builder {
    fn slot(&mut self, v: &str) -> Slot {
        let n = self.slots.len();
        *self.slots.entry(v.to_string()).or_insert(n)
    }

    fn constant(&mut self, c: &str) -> usize {
        match self.constants.iter().position(|k| k == c) {
            Some(i) => i,
            None => {
                self.constants.push(c.to_string());
                self.constants.len() - 1
            }
        }
    }

    fn predicate(&mut self, p: &str, arity: usize) -> Result<usize, EvalError> {
        match self.predicates.iter().position(|(k, _)| k == p) {
            Some(i) if self.predicates[i].1 == arity => Ok(i),
            Some(i) => Err(EvalError::ArityMismatch {
                pred: p.to_string(),
                expected: self.predicates[i].1,
                found: arity,
            }),
            None => {
                self.predicates.push((p.to_string(), arity));
                Ok(self.predicates.len() - 1)
            }
        }
    }

    fn compile(&mut self, f: &Formula) -> Result<usize, EvalError> {
        if let Some(&i) = self.dedup.get(f) {
            return Ok(i);
        }
        let op = match f {
            Formula::Atom { pred, args } => {
                let p = self.predicate(pred, args.len())?;
                Op::Atom(p, args.iter().map(|a| self.slot(a)).collect())
            }
            Formula::Eq(l, r) => Op::Eq(self.slot(l), self.slot(r)),
            Formula::Not(a) => Op::Not(self.compile(a)?),
            Formula::And(a, b) => Op::And(self.compile(a)?, self.compile(b)?),
            Formula::Or(a, b) => Op::Or(self.compile(a)?, self.compile(b)?),
            Formula::Implies(a, b) => Op::Implies(self.compile(a)?, self.compile(b)?),
            Formula::Next(a) => Op::Next(self.compile(a)?),
            Formula::Eventually(a) => Op::Eventually(self.compile(a)?),
            Formula::Always(a) => Op::Always(self.compile(a)?),
            Formula::Yesterday(a) => Op::Yesterday(self.compile(a)?),
            Formula::Once(a) => Op::Once(self.compile(a)?),
            Formula::Historically(a) => Op::Historically(self.compile(a)?),
            Formula::Abstract { var, body, arg } => {
                let s = self.slot(var);
                let b = self.compile(body)?;
                let arg = match arg {
                    Term::Const(c) => Arg::Const(self.constant(c)),
                    Term::Var(v) => Arg::Var(self.slot(v)),
                };
                Op::Abstract(s, b, arg)
            }
        };
        let free: BTreeSet<Slot> = f
            .free_variables()
            .iter()
            .map(|v| self.slots[v.as_str()])
            .collect();
        self.nodes.push(Node {
            op,
            free: free.into_iter().collect(),
        });
        let i = self.nodes.len() - 1;
        self.dedup.insert(f.clone(), i);
        Ok(i)
    }
}

/// Ultimately periodic boolean sequence: `pre` followed by `per` forever.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Seq {
    pre: Vec<bool>,
    per: Vec<bool>,
}

impl Seq {
    fn get(&self, n: usize) -> bool {
        if n < self.pre.len() {
            self.pre[n]
        } else {
            self.per[(n - self.pre.len()) % self.per.len()]
        }
    }

    /// Builds from values at `0..start + p`, where moments `>= start` repeat
    /// with period `p`.
    fn from_fn(start: usize, p: usize, f: impl Fn(usize) -> bool) -> Seq {
        let vals: Vec<bool> = (0..start + p).map(f).collect();
        let mut s = Seq {
            pre: vals[..start].to_vec(),
            per: vals[start..].to_vec(),
        };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        while let Some(&last) = self.pre.last() {
            if last != *self.per.last().unwrap() {
                break;
            }
            self.pre.pop();
            self.per.rotate_right(1);
        }
    }
}

struct LassoRun<'a, F: Frame> {
    prog: &'a Compiled,
    frame: &'a F,
    lasso: Lasso,
    env: Vec<Elem>,
    memo: Vec<HashMap<u64, Rc<Seq>>>,
}

fn env_key(free: &[Slot], env: &[Elem], radix: u64) -> Option<u64> {
    let mut key: u64 = 0;
    for &s in free {
        key = key.checked_mul(radix)?.checked_add(env[s] as u64)?;
    }
    Some(key)
}

impl<'a, F: Frame> LassoRun<'a, F> {
    fn leaf(&self, f: impl Fn(usize) -> bool) -> Seq {
        let l = self.lasso;
        Seq::from_fn(l.prefix, l.period, |n| f(l.resolve(n)))
    }

    fn eval(&mut self, i: usize) -> Rc<Seq> {
        let node = &self.prog.nodes[i];
        let key = env_key(&node.free, &self.env, self.frame.domain_len() as u64 + 1);
        if let Some(k) = key {
            if let Some(s) = self.memo[i].get(&k) {
                return s.clone();
            }
        }
        let s = Rc::new(self.compute(i));
        if let Some(k) = key {
            self.memo[i].insert(k, s.clone());
        }
        s
    }

    fn pointwise(&mut self, a: usize, b: usize, op: impl Fn(bool, bool) -> bool) -> Seq {
        let x = self.eval(a);
        let y = self.eval(b);
        let start = x.pre.len().max(y.pre.len());
        Seq::from_fn(start, self.lasso.period, |n| op(x.get(n), y.get(n)))
    }

    fn compute(&mut self, i: usize) -> Seq {
        let p = self.lasso.period;
        match self.prog.nodes[i].op.clone() {
            Op::Atom(pred, args) => {
                let vals: Vec<Elem> = args.iter().map(|&s| self.env[s]).collect();
                self.leaf(|pos| self.frame.holds(pred, pos, &vals))
            }
            Op::Eq(l, r) => {
                let v = self.env[l] == self.env[r];
                Seq { pre: vec![], per: vec![v] }
            }
            Op::Not(a) => {
                let s = self.eval(a);
                Seq {
                    pre: s.pre.iter().map(|b| !b).collect(),
                    per: s.per.iter().map(|b| !b).collect(),
                }
            }
            Op::And(a, b) => self.pointwise(a, b, |x, y| x && y),
            Op::Or(a, b) => self.pointwise(a, b, |x, y| x || y),
            Op::Implies(a, b) => self.pointwise(a, b, |x, y| !x || y),
            Op::Next(a) => {
                let s = self.eval(a);
                let mut out = (*s).clone();
                if out.pre.is_empty() {
                    out.per.rotate_left(1);
                } else {
                    out.pre.remove(0);
                }
                out
            }
            Op::Yesterday(a) => {
                let s = self.eval(a);
                let mut pre = vec![false];
                pre.extend_from_slice(&s.pre);
                let mut out = Seq { pre, per: s.per.clone() };
                out.normalize();
                out
            }
            Op::Eventually(a) | Op::Always(a) => {
                let exists = matches!(self.prog.nodes[i].op, Op::Eventually(_));
                let s = self.eval(a);
                // Every loop position recurs, so the loop value is uniform.
                let tail = if exists {
                    s.per.iter().any(|&b| b)
                } else {
                    s.per.iter().all(|&b| b)
                };
                let mut pre = s.pre.clone();
                let mut acc = tail;
                for v in pre.iter_mut().rev() {
                    acc = if exists { *v || acc } else { *v && acc };
                    *v = acc;
                }
                let mut out = Seq { pre, per: vec![tail; p] };
                out.normalize();
                out
            }
            Op::Once(a) | Op::Historically(a) => {
                let exists = matches!(self.prog.nodes[i].op, Op::Once(_));
                let s = self.eval(a);
                // After one full loop pass the accumulator is constant.
                let len = s.pre.len() + p;
                let mut acc = !exists;
                let mut pre = Vec::with_capacity(len);
                for n in 0..len {
                    acc = if exists { acc || s.get(n) } else { acc && s.get(n) };
                    pre.push(acc);
                }
                let mut out = Seq { pre, per: vec![acc; p] };
                out.normalize();
                out
            }
            Op::Abstract(slot, body, arg) => {
                let saved = self.env[slot];
                let out = match arg {
                    Arg::Var(v) => {
                        self.env[slot] = self.env[v];
                        (*self.eval(body)).clone()
                    }
                    Arg::Const(c) => {
                        let lasso = self.lasso;
                        let mut per_elem: HashMap<Elem, Rc<Seq>> = HashMap::new();
                        let mut start = lasso.prefix;
                        for pos in 0..lasso.len() {
                            let e = self.frame.constant(c, pos);
                            if let std::collections::hash_map::Entry::Vacant(v) = per_elem.entry(e) {
                                self.env[slot] = e;
                                let s = self.eval(body);
                                start = start.max(s.pre.len());
                                v.insert(s);
                            }
                        }
                        let frame = self.frame;
                        Seq::from_fn(start, p, |n| {
                            per_elem[&frame.constant(c, lasso.resolve(n))].get(n)
                        })
                    }
                };
                self.env[slot] = saved;
                out
            }
        }
    }
}

struct BoundedRun<'a, F: Frame> {
    prog: &'a Compiled,
    frame: &'a F,
    len: usize,
    env: Vec<Elem>,
    memo: Vec<HashMap<u64, Rc<Vec<Verdict>>>>,
}

impl<'a, F: Frame> BoundedRun<'a, F> {
    fn eval(&mut self, i: usize) -> Rc<Vec<Verdict>> {
        let node = &self.prog.nodes[i];
        let key = env_key(&node.free, &self.env, self.frame.domain_len() as u64 + 1);
        if let Some(k) = key {
            if let Some(s) = self.memo[i].get(&k) {
                return s.clone();
            }
        }
        let s = Rc::new(self.compute(i));
        if let Some(k) = key {
            self.memo[i].insert(k, s.clone());
        }
        s
    }

    fn zip(&mut self, a: usize, b: usize, op: impl Fn(Verdict, Verdict) -> Verdict) -> Vec<Verdict> {
        let x = self.eval(a);
        let y = self.eval(b);
        x.iter().zip(y.iter()).map(|(&p, &q)| op(p, q)).collect()
    }

    fn compute(&mut self, i: usize) -> Vec<Verdict> {
        let t = self.len;
        match self.prog.nodes[i].op.clone() {
            Op::Atom(pred, args) => {
                let vals: Vec<Elem> = args.iter().map(|&s| self.env[s]).collect();
                (0..t).map(|pos| self.frame.holds(pred, pos, &vals).into()).collect()
            }
            Op::Eq(l, r) => vec![(self.env[l] == self.env[r]).into(); t],
            Op::Not(a) => self.eval(a).iter().map(|v| !*v).collect(),
            Op::And(a, b) => self.zip(a, b, Verdict::and),
            Op::Or(a, b) => self.zip(a, b, Verdict::or),
            Op::Implies(a, b) => self.zip(a, b, Verdict::implies),
            Op::Next(a) => {
                let s = self.eval(a);
                let mut out: Vec<Verdict> = s[1..].to_vec();
                out.push(Verdict::Unknown);
                out
            }
            Op::Yesterday(a) => {
                let s = self.eval(a);
                let mut out = vec![Verdict::False];
                out.extend_from_slice(&s[..t - 1]);
                out
            }
            Op::Eventually(a) | Op::Always(a) => {
                let exists = matches!(self.prog.nodes[i].op, Op::Eventually(_));
                let s = self.eval(a);
                let mut out = vec![Verdict::Unknown; t];
                let mut acc = Verdict::Unknown;
                for n in (0..t).rev() {
                    acc = if exists { s[n].or(acc) } else { s[n].and(acc) };
                    out[n] = acc;
                }
                out
            }
            Op::Once(a) | Op::Historically(a) => {
                let exists = matches!(self.prog.nodes[i].op, Op::Once(_));
                let s = self.eval(a);
                let mut acc = Verdict::from(!exists);
                s.iter()
                    .map(|&v| {
                        acc = if exists { acc.or(v) } else { acc.and(v) };
                        acc
                    })
                    .collect()
            }
            Op::Abstract(slot, body, arg) => {
                let saved = self.env[slot];
                let out = match arg {
                    Arg::Var(v) => {
                        self.env[slot] = self.env[v];
                        (*self.eval(body)).clone()
                    }
                    Arg::Const(c) => {
                        let mut per_elem: HashMap<Elem, Rc<Vec<Verdict>>> = HashMap::new();
                        let mut out = Vec::with_capacity(t);
                        for pos in 0..t {
                            let e = self.frame.constant(c, pos);
                            let s = match per_elem.get(&e) {
                                Some(s) => s.clone(),
                                None => {
                                    self.env[slot] = e;
                                    let s = self.eval(body);
                                    per_elem.insert(e, s.clone());
                                    s
                                }
                            };
                            out.push(s[pos]);
                        }
                        out
                    }
                };
                self.env[slot] = saved;
                out
            }
        }
    }
}

const UNBOUND: Elem = Elem::MAX;

/// A [`TraceModel`] with symbols resolved to a program's ids.
struct Bound<'a> {
    model: &'a TraceModel,
    constants: Vec<&'a [Elem]>,
    predicates: Vec<&'a PredicateTimeline>,
}

impl Frame for Bound<'_> {
    fn horizon(&self) -> usize {
        self.model.len()
    }
    fn lasso(&self) -> Option<Lasso> {
        self.model.lasso()
    }
    fn domain_len(&self) -> usize {
        self.model.domain().len()
    }
    fn constant(&self, id: usize, pos: usize) -> Elem {
        self.constants[id][pos]
    }
    fn holds(&self, pred: usize, pos: usize, args: &[Elem]) -> bool {
        self.predicates[pred].steps[pos].contains(args)
    }
}

impl Compiled {
    pub fn new(f: &Formula) -> Result<Compiled, EvalError> {
        let mut b = Builder {
            nodes: Vec::new(),
            slots: BTreeMap::new(),
            constants: Vec::new(),
            predicates: Vec::new(),
            dedup: HashMap::new(),
        };
        let root = b.compile(f)?;
        let mut slots = vec![String::new(); b.slots.len()];
        for (name, s) in b.slots {
            slots[s] = name;
        }
        Ok(Compiled {
            nodes: b.nodes,
            root,
            slots,
            constants: b.constants,
            predicates: b.predicates,
        })
    }

    /// Constants in id order.
    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    /// Predicates with arities in id order.
    pub fn predicates(&self) -> &[(String, usize)] {
        &self.predicates
    }

    fn bind<'a>(&self, m: &'a TraceModel) -> Result<Bound<'a>, EvalError> {
        let constants = self
            .constants
            .iter()
            .map(|c| m.timeline(c).map_err(EvalError::from))
            .collect::<Result<_, _>>()?;
        let predicates = self
            .predicates
            .iter()
            .map(|(p, arity)| {
                let tl = m
                    .predicate_timeline(p)
                    .ok_or_else(|| EvalError::UnknownPredicate(p.clone()))?;
                if tl.arity != *arity {
                    return Err(EvalError::ArityMismatch {
                        pred: p.clone(),
                        expected: tl.arity,
                        found: *arity,
                    });
                }
                Ok(tl)
            })
            .collect::<Result<_, _>>()?;
        Ok(Bound {
            model: m,
            constants,
            predicates,
        })
    }

    fn env(&self, m: &TraceModel, a: &Assignment) -> Result<Vec<Elem>, EvalError> {
        let mut env = vec![UNBOUND; self.slots.len()];
        for &s in &self.nodes[self.root].free {
            let var = &self.slots[s];
            let element = a
                .get(var)
                .ok_or_else(|| EvalError::UnboundVariable(var.clone()))?;
            env[s] = m.element(element).ok_or_else(|| EvalError::NotInDomain {
                var: var.clone(),
                element: element.clone(),
            })?;
        }
        Ok(env)
    }

    fn run_lasso<F: Frame>(&self, frame: &F, env: Vec<Elem>) -> Seq {
        let lasso = frame.lasso().expect("frame has a lasso");
        let mut run = LassoRun {
            prog: self,
            frame,
            lasso,
            env,
            memo: vec![HashMap::new(); self.nodes.len()],
        };
        let s = run.eval(self.root);
        (*s).clone()
    }

    fn run_bounded<F: Frame>(&self, frame: &F, env: Vec<Elem>) -> Vec<Verdict> {
        let mut run = BoundedRun {
            prog: self,
            frame,
            len: frame.horizon(),
            env,
            memo: vec![HashMap::new(); self.nodes.len()],
        };
        let s = run.eval(self.root);
        (*s).clone()
    }

    /// Truth values at moments `0..upto` on a lasso model.
    pub fn lasso_values(&self, m: &TraceModel, a: &Assignment, upto: usize) -> Result<Vec<bool>, EvalError> {
        if m.lasso().is_none() {
            return Err(EvalError::NoLasso);
        }
        let frame = self.bind(m)?;
        let s = self.run_lasso(&frame, self.env(m, a)?);
        Ok((0..upto).map(|n| s.get(n)).collect())
    }

    /// Verdicts at every stored position of a prefix model.
    pub fn bounded_values(&self, m: &TraceModel, a: &Assignment) -> Result<Vec<Verdict>, EvalError> {
        if m.lasso().is_some() {
            return Err(EvalError::HasLasso);
        }
        let frame = self.bind(m)?;
        Ok(self.run_bounded(&frame, self.env(m, a)?))
    }

    /// Truth of a sentence at moment `n` of a lasso frame.
    ///
    /// Panics if the program has free variables or the frame has no lasso.
    pub fn sentence_holds<F: Frame>(&self, frame: &F, n: usize) -> bool {
        assert!(self.nodes[self.root].free.is_empty(), "not a sentence");
        self.run_lasso(frame, vec![UNBOUND; self.slots.len()]).get(n)
    }
}

/// Truth of `f` at moment `n` of the infinite trace denoted by a lasso model.
pub fn eval_lasso(m: &TraceModel, f: &Formula, a: &Assignment, n: usize) -> Result<bool, EvalError> {
    let prog = Compiled::new(f)?;
    if m.lasso().is_none() {
        return Err(EvalError::NoLasso);
    }
    let frame = prog.bind(m)?;
    let s = prog.run_lasso(&frame, prog.env(m, a)?);
    Ok(s.get(n))
}

/// Three-valued truth of `f` at moment `n` of a prefix model.
pub fn eval_bounded(m: &TraceModel, f: &Formula, a: &Assignment, n: usize) -> Result<Verdict, EvalError> {
    if n >= m.len() {
        return Err(EvalError::OutOfHorizon { moment: n, len: m.len() });
    }
    let prog = Compiled::new(f)?;
    Ok(prog.bounded_values(m, a)?[n])
}

/// Evaluates a sentence in the mode matching the model.
pub fn eval_sentence(m: &TraceModel, f: &Formula, n: usize) -> Result<Verdict, EvalError> {
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(EvalError::NotSentence(free.into_iter().collect()));
    }
    let a = Assignment::new();
    match m.lasso() {
        Some(_) => eval_lasso(m, f, &a, n).map(Verdict::from),
        None => eval_bounded(m, f, &a, n),
    }
}
