//! Finitely represented temporal structures.
//!
//! A [`TraceModel`] has a finite domain of named elements and, for every
//! constant and predicate, a timeline of `len()` positions. With a lasso
//! `(prefix, period)` the timelines denote the infinite trace
//! `prefix · loop^ω`; without one they denote the observed prefix of an
//! unknown infinite trace.
//!
//! Equality is not stored: it is identity of element names at every moment.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

use crate::syntax::is_identifier;

/// Rigid variable bindings: variable name to element name.
pub type Assignment = BTreeMap<String, String>;

/// Element index into [`TraceModel::domain`].
pub(crate) type Elem = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Lasso {
    pub prefix: usize,
    pub period: usize,
}

impl Lasso {
    pub fn new(prefix: usize, period: usize) -> Self {
        Lasso { prefix, period }
    }

    pub fn len(&self) -> usize {
        self.prefix + self.period
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Position in the stored timelines that moment `n` maps to.
    pub fn resolve(&self, n: usize) -> usize {
        if n < self.prefix {
            n
        } else {
            self.prefix + (n - self.prefix) % self.period
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct PredicateTimeline {
    pub(crate) arity: usize,
    pub(crate) steps: Vec<BTreeSet<Vec<Elem>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceModel {
    domain: Vec<String>,
    index: HashMap<String, Elem>,
    constants: BTreeMap<String, Vec<Elem>>,
    predicates: BTreeMap<String, PredicateTimeline>,
    lasso: Option<Lasso>,
    len: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown constant {0}")]
    UnknownConstant(String),
    #[error("unknown predicate {0}")]
    UnknownPredicate(String),
    #[error("moment {moment} is beyond the observed prefix of length {len}")]
    OutOfHorizon { moment: usize, len: usize },
    #[error("unknown element {0}")]
    UnknownElement(String),
    #[error("invalid model: {}", join_diagnostics(.0))]
    Invalid(Vec<ModelDiagnostic>),
}

fn join_diagnostics(d: &[ModelDiagnostic]) -> String {
    d.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

/// One violated model invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelDiagnostic {
    EmptyDomain,
    BadName(String),
    DuplicateElement(String),
    DuplicateSymbol(String),
    EmptyTimeline(String),
    UnequalLength { symbol: String, len: usize, expected: usize },
    ZeroPeriod,
    LassoLength { prefix: usize, period: usize, len: usize },
    UnknownElement { symbol: String, moment: usize, element: String },
    TupleArity { symbol: String, moment: usize, arity: usize },
}

impl fmt::Display for ModelDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelDiagnostic::EmptyDomain => write!(f, "domain is empty"),
            ModelDiagnostic::BadName(n) => write!(f, "{n:?} is not an identifier"),
            ModelDiagnostic::DuplicateElement(e) => write!(f, "element {e} listed twice"),
            ModelDiagnostic::DuplicateSymbol(s) => write!(f, "symbol {s} defined twice"),
            ModelDiagnostic::EmptyTimeline(s) => write!(f, "timeline of {s} is empty"),
            ModelDiagnostic::UnequalLength { symbol, len, expected } => {
                write!(f, "timeline of {symbol} has length {len}, expected {expected}")
            }
            ModelDiagnostic::ZeroPeriod => write!(f, "loop period must be at least 1"),
            ModelDiagnostic::LassoLength { prefix, period, len } => write!(
                f,
                "loop {prefix} {period} does not cover timelines of length {len}"
            ),
            ModelDiagnostic::UnknownElement { symbol, moment, element } => write!(
                f,
                "{symbol} at moment {moment} uses {element}, which is not in the domain"
            ),
            ModelDiagnostic::TupleArity { symbol, moment, arity } => write!(
                f,
                "{symbol} at moment {moment} has a tuple of the wrong size (arity {arity})"
            ),
        }
    }
}

/// Tuples per stored position, by element name.
pub type NamedSteps = Vec<Vec<Vec<String>>>;

/// Unvalidated model description in terms of element names.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ModelBuilder {
    pub domain: Vec<String>,
    pub constants: Vec<(String, Vec<String>)>,
    pub predicates: Vec<(String, usize, NamedSteps)>,
    pub lasso: Option<Lasso>,
}

fn owned<S: AsRef<str>>(xs: impl IntoIterator<Item = S>) -> Vec<String> {
    xs.into_iter().map(|s| s.as_ref().to_string()).collect()
}

impl ModelBuilder {
    pub fn new<S: AsRef<str>>(domain: impl IntoIterator<Item = S>) -> Self {
        ModelBuilder {
            domain: owned(domain),
            ..Default::default()
        }
    }

    pub fn constant<S: AsRef<str>>(mut self, name: &str, timeline: impl IntoIterator<Item = S>) -> Self {
        self.constants.push((name.to_string(), owned(timeline)));
        self
    }

    /// `steps[i]` lists the tuples in the predicate at position `i`.
    pub fn predicate<S: AsRef<str>>(mut self, name: &str, arity: usize, steps: Vec<Vec<Vec<S>>>) -> Self {
        let steps = steps
            .into_iter()
            .map(|set| set.into_iter().map(owned).collect())
            .collect();
        self.predicates.push((name.to_string(), arity, steps));
        self
    }

    pub fn lasso(mut self, prefix: usize, period: usize) -> Self {
        self.lasso = Some(Lasso::new(prefix, period));
        self
    }

    pub fn build(self) -> Result<TraceModel, ModelError> {
        validate_model(&self).map_err(ModelError::Invalid)?;
        let index: HashMap<String, Elem> = self
            .domain
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i as Elem))
            .collect();
        let len = self.timeline_len();
        let constants = self
            .constants
            .into_iter()
            .map(|(n, tl)| (n, tl.iter().map(|e| index[e]).collect()))
            .collect();
        let predicates = self
            .predicates
            .into_iter()
            .map(|(n, arity, steps)| {
                let steps = steps
                    .iter()
                    .map(|set| set.iter().map(|t| t.iter().map(|e| index[e]).collect()).collect())
                    .collect();
                (n, PredicateTimeline { arity, steps })
            })
            .collect();
        Ok(TraceModel {
            domain: self.domain,
            index,
            constants,
            predicates,
            lasso: self.lasso,
            len,
        })
    }

    fn timeline_len(&self) -> usize {
        self.constants
            .first()
            .map(|(_, t)| t.len())
            .or_else(|| self.predicates.first().map(|(_, _, s)| s.len()))
            .or_else(|| self.lasso.map(|l| l.len()))
            .unwrap_or(1)
    }
}

/// Checks every model invariant, reporting all violations.
pub fn validate_model(m: &ModelBuilder) -> Result<(), Vec<ModelDiagnostic>> {
    let mut diags = Vec::new();
    if m.domain.is_empty() {
        diags.push(ModelDiagnostic::EmptyDomain);
    }
    let mut seen = BTreeSet::new();
    for e in &m.domain {
        if !is_identifier(e) {
            diags.push(ModelDiagnostic::BadName(e.clone()));
        }
        if !seen.insert(e.as_str()) {
            diags.push(ModelDiagnostic::DuplicateElement(e.clone()));
        }
    }
    let expected = m.timeline_len();
    let mut symbols = BTreeSet::new();
    let mut check_len = |name: &str, len: usize, diags: &mut Vec<ModelDiagnostic>| {
        if !is_identifier(name) {
            diags.push(ModelDiagnostic::BadName(name.to_string()));
        }
        if !symbols.insert(name.to_string()) {
            diags.push(ModelDiagnostic::DuplicateSymbol(name.to_string()));
        }
        if len == 0 {
            diags.push(ModelDiagnostic::EmptyTimeline(name.to_string()));
        } else if len != expected {
            diags.push(ModelDiagnostic::UnequalLength {
                symbol: name.to_string(),
                len,
                expected,
            });
        }
    };
    for (name, tl) in &m.constants {
        check_len(name, tl.len(), &mut diags);
        for (i, e) in tl.iter().enumerate() {
            if !seen.contains(e.as_str()) {
                diags.push(ModelDiagnostic::UnknownElement {
                    symbol: name.clone(),
                    moment: i,
                    element: e.clone(),
                });
            }
        }
    }
    for (name, arity, steps) in &m.predicates {
        check_len(name, steps.len(), &mut diags);
        for (i, set) in steps.iter().enumerate() {
            for t in set {
                if t.len() != *arity {
                    diags.push(ModelDiagnostic::TupleArity {
                        symbol: name.clone(),
                        moment: i,
                        arity: *arity,
                    });
                }
                for e in t {
                    if !seen.contains(e.as_str()) {
                        diags.push(ModelDiagnostic::UnknownElement {
                            symbol: name.clone(),
                            moment: i,
                            element: e.clone(),
                        });
                    }
                }
            }
        }
    }
    if let Some(l) = m.lasso {
        if l.period == 0 {
            diags.push(ModelDiagnostic::ZeroPeriod);
        }
        if l.prefix + l.period != expected {
            diags.push(ModelDiagnostic::LassoLength {
                prefix: l.prefix,
                period: l.period,
                len: expected,
            });
        }
    }
    if diags.is_empty() {
        Ok(())
    } else {
        Err(diags)
    }
}

impl TraceModel {
    /// Number of stored positions.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn lasso(&self) -> Option<Lasso> {
        self.lasso
    }

    pub fn domain(&self) -> &[String] {
        &self.domain
    }

    pub fn constant_names(&self) -> impl Iterator<Item = &str> {
        self.constants.keys().map(String::as_str)
    }

    /// Predicate names with arities.
    pub fn predicate_names(&self) -> impl Iterator<Item = (&str, usize)> {
        self.predicates.iter().map(|(n, p)| (n.as_str(), p.arity))
    }

    pub fn has_constant(&self, c: &str) -> bool {
        self.constants.contains_key(c)
    }

    pub fn predicate_arity(&self, p: &str) -> Option<usize> {
        self.predicates.get(p).map(|t| t.arity)
    }

    /// Stored position for moment `n`.
    pub fn position(&self, n: usize) -> Result<usize, ModelError> {
        match self.lasso {
            Some(l) => Ok(l.resolve(n)),
            None if n < self.len => Ok(n),
            None => Err(ModelError::OutOfHorizon {
                moment: n,
                len: self.len,
            }),
        }
    }

    pub fn constant_at(&self, c: &str, n: usize) -> Result<&str, ModelError> {
        let tl = self.timeline(c)?;
        let pos = self.position(n)?;
        Ok(&self.domain[tl[pos] as usize])
    }

    /// Elements designated by `c` at moments `0..=n`.
    pub fn visited(&self, c: &str, n: usize) -> Result<BTreeSet<&str>, ModelError> {
        let tl = self.timeline(c)?;
        self.position(n)?;
        let upto = n.min(self.len - 1);
        Ok(tl[..=upto].iter().map(|&e| self.domain[e as usize].as_str()).collect())
    }

    pub fn predicate_at(&self, p: &str, n: usize) -> Result<BTreeSet<Vec<&str>>, ModelError> {
        let tl = self
            .predicates
            .get(p)
            .ok_or_else(|| ModelError::UnknownPredicate(p.to_string()))?;
        let pos = self.position(n)?;
        Ok(tl.steps[pos]
            .iter()
            .map(|t| t.iter().map(|&e| self.domain[e as usize].as_str()).collect())
            .collect())
    }

    pub(crate) fn element(&self, name: &str) -> Option<Elem> {
        self.index.get(name).copied()
    }

    pub(crate) fn element_name(&self, e: Elem) -> &str {
        &self.domain[e as usize]
    }

    pub(crate) fn timeline(&self, c: &str) -> Result<&[Elem], ModelError> {
        self.constants
            .get(c)
            .map(Vec::as_slice)
            .ok_or_else(|| ModelError::UnknownConstant(c.to_string()))
    }

    pub(crate) fn predicate_timeline(&self, p: &str) -> Option<&PredicateTimeline> {
        self.predicates.get(p)
    }

    /// Converts back to a name-based description.
    pub fn to_builder(&self) -> ModelBuilder {
        let name = |e: &Elem| self.domain[*e as usize].clone();
        ModelBuilder {
            domain: self.domain.clone(),
            constants: self
                .constants
                .iter()
                .map(|(n, tl)| (n.clone(), tl.iter().map(name).collect()))
                .collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(n, p)| {
                    let steps = p
                        .steps
                        .iter()
                        .map(|set| set.iter().map(|t| t.iter().map(name).collect()).collect())
                        .collect();
                    (n.clone(), p.arity, steps)
                })
                .collect(),
            lasso: self.lasso,
        }
    }

    /// Re-samples the model at `moments` (each a moment of this model) into
    /// a new model with the given lasso.
    fn resample(&self, moments: &[usize], lasso: Option<Lasso>) -> Result<TraceModel, ModelError> {
        let positions = moments
            .iter()
            .map(|&n| self.position(n))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(TraceModel {
            domain: self.domain.clone(),
            index: self.index.clone(),
            constants: self
                .constants
                .iter()
                .map(|(n, tl)| (n.clone(), positions.iter().map(|&p| tl[p]).collect()))
                .collect(),
            predicates: self
                .predicates
                .iter()
                .map(|(n, p)| {
                    let steps = positions.iter().map(|&i| p.steps[i].clone()).collect();
                    (n.clone(), PredicateTimeline { arity: p.arity, steps })
                })
                .collect(),
            lasso,
            len: moments.len(),
        })
    }

    /// The first `len` moments as a model without a lasso.
    pub fn prefix(&self, len: usize) -> Result<TraceModel, ModelError> {
        if len == 0 {
            return Err(ModelError::OutOfHorizon { moment: 0, len: 0 });
        }
        let moments: Vec<usize> = (0..len).collect();
        self.resample(&moments, None)
    }

    /// Same infinite trace with the loop entered `extra` moments later.
    pub fn unroll_prefix(&self, extra: usize) -> Result<TraceModel, ModelError> {
        let l = self.require_lasso()?;
        let moments: Vec<usize> = (0..l.len() + extra).collect();
        self.resample(&moments, Some(Lasso::new(l.prefix + extra, l.period)))
    }

    /// Same infinite trace with the loop body repeated twice.
    pub fn double_period(&self) -> Result<TraceModel, ModelError> {
        let l = self.require_lasso()?;
        let moments: Vec<usize> = (0..l.prefix + 2 * l.period).collect();
        self.resample(&moments, Some(Lasso::new(l.prefix, 2 * l.period)))
    }

    fn require_lasso(&self) -> Result<Lasso, ModelError> {
        self.lasso.ok_or(ModelError::Invalid(vec![ModelDiagnostic::LassoLength {
            prefix: 0,
            period: 0,
            len: self.len,
        }]))
    }

    /// Adds an empty predicate if `name` is not already present.
    pub fn ensure_predicate(&self, name: &str, arity: usize) -> Result<TraceModel, ModelError> {
        match self.predicates.get(name) {
            Some(p) if p.arity == arity => Ok(self.clone()),
            Some(_) => Err(ModelError::Invalid(vec![ModelDiagnostic::TupleArity {
                symbol: name.to_string(),
                moment: 0,
                arity,
            }])),
            None => {
                let mut b = self.to_builder();
                b.predicates.push((name.to_string(), arity, vec![Vec::new(); self.len]));
                b.build()
            }
        }
    }
}

/// Error from reading the model text format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ModelParseError {
    pub line: usize,
    pub message: String,
}

fn perr(line: usize, message: impl Into<String>) -> ModelParseError {
    ModelParseError {
        line,
        message: message.into(),
    }
}

fn loop_marker() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\s+\[?loop\s+(\d+)\s+(\d+)\]?\s*$").unwrap())
}

fn tuple_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| Regex::new(r"\(([^()]*)\)").unwrap())
}

fn split_loop(body: &str) -> (&str, Option<Lasso>) {
    match loop_marker().captures(body) {
        Some(c) => {
            let whole = c.get(0).unwrap();
            let k = c[1].parse().unwrap_or(usize::MAX);
            let p = c[2].parse().unwrap_or(usize::MAX);
            (&body[..whole.start()], Some(Lasso::new(k, p)))
        }
        None => (body, None),
    }
}

fn parse_set(text: &str, line: usize) -> Result<Vec<Vec<String>>, ModelParseError> {
    let t = text.trim();
    let inner = t
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .ok_or_else(|| perr(line, format!("expected {{...}}, found {t:?}")))?;
    let mut tuples = Vec::new();
    let mut rest = String::new();
    let mut last = 0;
    for c in tuple_re().captures_iter(inner) {
        let m = c.get(0).unwrap();
        rest.push_str(&inner[last..m.start()]);
        last = m.end();
        let elems: Vec<String> = c[1]
            .split(',')
            .map(|e| e.trim().to_string())
            .filter(|e| !e.is_empty())
            .collect();
        tuples.push(elems);
    }
    rest.push_str(&inner[last..]);
    if rest.chars().any(|c| c != ',' && !c.is_whitespace()) {
        return Err(perr(line, format!("malformed tuple set {t:?}")));
    }
    Ok(tuples)
}

/// Reads the model text format:
///
/// ```text
/// domain: u0, u1
/// const a: u0, u1 loop 1 1
/// pred E/2: {(u0, u1)}; {} loop 1 1
/// ```
///
/// A `loop k p` marker must appear on every timeline line or on none.
pub fn parse_model(text: &str) -> Result<TraceModel, ModelParseError> {
    let mut b = ModelBuilder::default();
    let mut domain_seen = false;
    let mut markers: Vec<(usize, Option<Lasso>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if let Some(rest) = content.strip_prefix("domain:") {
            if domain_seen {
                return Err(perr(line, "domain declared twice"));
            }
            domain_seen = true;
            b.domain = rest
                .split(',')
                .map(|e| e.trim().to_string())
                .filter(|e| !e.is_empty())
                .collect();
        } else if let Some(rest) = content.strip_prefix("const ") {
            let (name, body) = rest
                .split_once(':')
                .ok_or_else(|| perr(line, "expected `const name: ...`"))?;
            let (body, marker) = split_loop(body);
            markers.push((line, marker));
            let tl = body.split(',').map(|e| e.trim().to_string()).collect();
            b.constants.push((name.trim().to_string(), tl));
        } else if let Some(rest) = content.strip_prefix("pred ") {
            let (head, body) = rest
                .split_once(':')
                .ok_or_else(|| perr(line, "expected `pred name: ...`"))?;
            let (body, marker) = split_loop(body);
            markers.push((line, marker));
            let steps = body
                .split(';')
                .map(|s| parse_set(s, line))
                .collect::<Result<Vec<_>, _>>()?;
            let (name, arity) = match head.split_once('/') {
                Some((n, a)) => (
                    n.trim().to_string(),
                    a.trim()
                        .parse()
                        .map_err(|_| perr(line, format!("bad arity {a:?}")))?,
                ),
                None => {
                    let arity = steps
                        .iter()
                        .flatten()
                        .next()
                        .map(Vec::len)
                        .ok_or_else(|| perr(line, "cannot infer arity of an empty predicate; write name/arity"))?;
                    (head.trim().to_string(), arity)
                }
            };
            b.predicates.push((name, arity, steps));
        } else {
            return Err(perr(line, format!("unrecognised line {content:?}")));
        }
    }
    if !domain_seen {
        return Err(perr(1, "missing `domain:` line"));
    }
    if let Some((_, first)) = markers.first() {
        for (line, m) in &markers {
            if m != first {
                return Err(perr(*line, "loop markers differ between timelines"));
            }
        }
        b.lasso = *first;
    }
    b.build().map_err(|e| perr(0, e.to_string()))
}

/// Writes the model text format. `parse_model` reads it back to an equal
/// model, and writing that again reproduces the same bytes.
pub fn write_model(m: &TraceModel) -> String {
    let mut out = String::new();
    out.push_str("domain: ");
    out.push_str(&m.domain.join(", "));
    out.push('\n');
    let marker = m
        .lasso
        .map(|l| format!(" loop {} {}", l.prefix, l.period))
        .unwrap_or_default();
    for (name, tl) in &m.constants {
        let elems: Vec<&str> = tl.iter().map(|&e| m.element_name(e)).collect();
        out.push_str(&format!("const {name}: {}{marker}\n", elems.join(", ")));
    }
    for (name, p) in &m.predicates {
        let sets: Vec<String> = p
            .steps
            .iter()
            .map(|set| {
                let tuples: Vec<String> = set
                    .iter()
                    .map(|t| {
                        let names: Vec<&str> = t.iter().map(|&e| m.element_name(e)).collect();
                        format!("({})", names.join(", "))
                    })
                    .collect();
                format!("{{{}}}", tuples.join(", "))
            })
            .collect();
        out.push_str(&format!("pred {name}/{}: {}{marker}\n", p.arity, sets.join("; ")));
    }
    out
}

impl fmt::Display for TraceModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_model(self))
    }
}
