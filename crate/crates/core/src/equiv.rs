//! Pebble equivalence of models and the flicker extension.
//!
//! Two models are pebble equivalent when every constant designates the same
//! element at every moment and every predicate agrees at every moment on
//! tuples built from elements some constant visits. Sentences cannot tell
//! such models apart.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::model::{Lasso, ModelError, TraceModel};

/// Which symbols to compare, and how far for prefix models.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivScope {
    pub horizon: usize,
    /// Constants and predicates to compare; `None` means the models' own
    /// alphabets, which must then coincide.
    pub symbols: Option<(Vec<String>, Vec<String>)>,
}

impl EquivScope {
    pub fn new(horizon: usize) -> Self {
        EquivScope { horizon, symbols: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub moment: usize,
    pub symbol: String,
    /// Differing tuple for a predicate; the two designations for a constant.
    pub tuple: Vec<String>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "moment {}, {} ({})", self.moment, self.symbol, self.tuple.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Equivalence {
    /// `bounded` is set when only a finite prefix was compared.
    Equivalent { bounded: bool },
    NotEquivalent(Witness),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EquivError {
    #[error("alphabets differ: {0}")]
    AlphabetMismatch(String),
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("prefix model has {len} positions, fewer than the horizon {horizon}")]
    ShortPrefix { len: usize, horizon: usize },
    #[error("loop period {0} is odd; double it first")]
    OddPeriod(usize),
    #[error("{0} must be a binary predicate")]
    NotBinary(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn alphabet(m: &TraceModel) -> (BTreeSet<String>, BTreeSet<(String, usize)>) {
    (
        m.constant_names().map(String::from).collect(),
        m.predicate_names().map(|(p, a)| (p.to_string(), a)).collect(),
    )
}

/// Number of moments that determine both traces, and whether that is only
/// the requested prefix.
fn span(m1: &TraceModel, m2: &TraceModel, horizon: usize) -> Result<(usize, bool), EquivError> {
    match (m1.lasso(), m2.lasso()) {
        (Some(l1), Some(l2)) => {
            let lcm = l1.period / gcd(l1.period, l2.period) * l2.period;
            Ok((l1.prefix.max(l2.prefix) + lcm, false))
        }
        _ => {
            for m in [m1, m2] {
                if m.lasso().is_none() && m.len() < horizon {
                    return Err(EquivError::ShortPrefix {
                        len: m.len(),
                        horizon,
                    });
                }
            }
            Ok((horizon, true))
        }
    }
}

pub fn pebble_equivalent(m1: &TraceModel, m2: &TraceModel, scope: &EquivScope) -> Result<Equivalence, EquivError> {
    if scope.horizon == 0 {
        return Err(EquivError::ZeroHorizon);
    }
    let (consts, preds): (Vec<String>, Vec<String>) = match &scope.symbols {
        Some((c, p)) => {
            for m in [m1, m2] {
                if let Some(c) = c.iter().find(|c| !m.has_constant(c)) {
                    return Err(EquivError::AlphabetMismatch(format!("constant {c} missing")));
                }
                if let Some(p) = p.iter().find(|p| m.predicate_arity(p).is_none()) {
                    return Err(EquivError::AlphabetMismatch(format!("predicate {p} missing")));
                }
            }
            if let Some(p) = p.iter().find(|p| m1.predicate_arity(p) != m2.predicate_arity(p)) {
                return Err(EquivError::AlphabetMismatch(format!("predicate {p} arity")));
            }
            (c.clone(), p.clone())
        }
        None => {
            let (c1, p1) = alphabet(m1);
            let (c2, p2) = alphabet(m2);
            if c1 != c2 || p1 != p2 {
                return Err(EquivError::AlphabetMismatch(format!(
                    "{:?} {:?} vs {:?} {:?}",
                    c1, p1, c2, p2
                )));
            }
            (c1.into_iter().collect(), p1.into_iter().map(|(p, _)| p).collect())
        }
    };
    let (moments, bounded) = span(m1, m2, scope.horizon)?;

    for n in 0..moments {
        for c in &consts {
            let (e1, e2) = (m1.constant_at(c, n)?, m2.constant_at(c, n)?);
            if e1 != e2 {
                return Ok(Equivalence::NotEquivalent(Witness {
                    moment: n,
                    symbol: c.clone(),
                    tuple: vec![e1.to_string(), e2.to_string()],
                }));
            }
        }
    }
    // Constants coincide, so both models visit the same elements.
    let mut visited: BTreeSet<&str> = BTreeSet::new();
    for c in &consts {
        visited.extend(m1.visited(c, moments - 1)?);
    }
    for n in 0..moments {
        for p in &preds {
            let restrict = |m: &TraceModel| -> Result<BTreeSet<Vec<String>>, EquivError> {
                Ok(m.predicate_at(p, n)?
                    .into_iter()
                    .filter(|t| t.iter().all(|e| visited.contains(e)))
                    .map(|t| t.into_iter().map(String::from).collect())
                    .collect())
            };
            let (s1, s2) = (restrict(m1)?, restrict(m2)?);
            if let Some(t) = s1.symmetric_difference(&s2).next() {
                return Ok(Equivalence::NotEquivalent(Witness {
                    moment: n,
                    symbol: p.clone(),
                    tuple: t.clone(),
                }));
            }
        }
    }
    Ok(Equivalence::Equivalent { bounded })
}

/// Names for the two fresh elements, avoiding clashes with the domain.
fn fresh_names(domain: &[String]) -> [String; 2] {
    let taken: BTreeSet<&str> = domain.iter().map(String::as_str).collect();
    let mut suffix = String::new();
    let mut i = 0;
    loop {
        let names = [format!("flicker0{suffix}"), format!("flicker1{suffix}")];
        if names.iter().all(|n| !taken.contains(n.as_str())) {
            return names;
        }
        i += 1;
        suffix = format!("_{i}");
    }
}

/// Adds two fresh elements that no constant visits, and makes every pair of
/// them belong to `e` exactly at even moments. `e` is added empty if absent.
pub fn extend_with_flicker(m: &TraceModel, e: &str) -> Result<TraceModel, EquivError> {
    if let Some(Lasso { period, .. }) = m.lasso() {
        if period % 2 == 1 {
            return Err(EquivError::OddPeriod(period));
        }
    }
    match m.predicate_arity(e) {
        Some(2) | None => {}
        Some(_) => return Err(EquivError::NotBinary(e.to_string())),
    }
    let m = m.ensure_predicate(e, 2)?;
    let mut b = m.to_builder();
    let fresh = fresh_names(&b.domain);
    b.domain.extend(fresh.iter().cloned());
    let (_, _, steps) = b
        .predicates
        .iter_mut()
        .find(|(name, _, _)| name == e)
        .expect("predicate ensured above");
    for (pos, set) in steps.iter_mut().enumerate() {
        if pos % 2 == 0 {
            for x in &fresh {
                for y in &fresh {
                    set.push(vec![x.clone(), y.clone()]);
                }
            }
        }
    }
    Ok(b.build()?)
}
