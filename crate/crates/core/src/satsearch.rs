//! Bounded search for lasso models of a sentence.
//!
//! The search is incomplete by design: "none in scope" says nothing about
//! larger models. Candidates are enumerated by domain size, then by total
//! length `prefix + period`, then lexicographically. Constant timelines are
//! generated in canonical form (elements numbered by first use), so no two
//! candidates differ only by renaming elements, and every domain element is
//! visited by some constant. Predicates range over all tuples of the domain.
//!
//! Top-level conjuncts that mention only constants are checked as soon as
//! their constants are fully assigned, which cuts whole subtrees.

use std::cell::Cell;
use std::ops::ControlFlow;

use thiserror::Error;

use crate::eval::{eval_lasso, Compiled, EvalError, Frame};
use crate::model::{Assignment, Elem, Lasso, ModelBuilder, TraceModel};
use crate::syntax::Formula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchScope {
    pub max_domain: usize,
    pub max_prefix: usize,
    pub max_period: usize,
    pub max_predicates: usize,
    pub max_arity: usize,
    /// Upper bound on the number of candidates, computed before searching.
    pub ceiling: u128,
    /// Canonical element numbering and early conjunct checks.
    pub prune: bool,
}

impl SearchScope {
    pub fn new(max_domain: usize, max_prefix: usize, max_period: usize) -> Self {
        SearchScope {
            max_domain,
            max_prefix,
            max_period,
            max_predicates: 2,
            max_arity: 2,
            ceiling: 50_000_000,
            prune: true,
        }
    }

    pub fn unpruned(mut self) -> Self {
        self.prune = false;
        self
    }

    /// Lasso shapes in search order.
    fn shapes(&self) -> Vec<Lasso> {
        let mut out = Vec::new();
        for total in 1..=self.max_prefix + self.max_period {
            for prefix in 0..=self.max_prefix.min(total - 1) {
                let period = total - prefix;
                if period <= self.max_period {
                    out.push(Lasso::new(prefix, period));
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("scope bounds must be at least 1")]
    EmptyScope,
    #[error("not a sentence; free variables: {}", .0.join(", "))]
    NotSentence(Vec<String>),
    #[error("scope has {candidates} candidates, above the ceiling {ceiling}")]
    ScopeTooLarge { candidates: u128, ceiling: u128 },
    #[error("formula uses {count} predicates of arity up to {arity}; scope allows {max_predicates} of arity up to {max_arity}")]
    PredicateBudget {
        count: usize,
        arity: usize,
        max_predicates: usize,
        max_arity: usize,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(TraceModel),
    NoneInScope,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    pub outcome: SearchOutcome,
    /// Formula evaluations performed, on complete and partial candidates.
    pub evaluations: u64,
}

/// Stirling numbers of the second kind, `S(n, k)`.
fn stirling2(n: usize, k: usize) -> u128 {
    let mut row = vec![0u128; k + 1];
    row[0] = 1;
    for i in 1..=n {
        for j in (1..=k.min(i)).rev() {
            row[j] = row[j]
                .saturating_mul(j as u128)
                .saturating_add(row[j - 1]);
        }
        row[0] = 0;
    }
    row[k]
}

/// Number of candidates the scope would enumerate.
fn candidate_count(constants: usize, arities: &[usize], scope: &SearchScope) -> u128 {
    let mut total: u128 = 0;
    for n in 1..=scope.max_domain {
        for shape in scope.shapes() {
            let cells = constants * shape.len();
            let timelines = if constants == 0 {
                u128::from(n == 1)
            } else if scope.prune {
                stirling2(cells, n)
            } else {
                (n as u128).saturating_pow(cells as u32)
            };
            let bits: u32 = arities
                .iter()
                .map(|&r| (n as u32).saturating_pow(r as u32).saturating_mul(shape.len() as u32))
                .sum();
            let preds = 2u128.checked_pow(bits).unwrap_or(u128::MAX);
            total = total.saturating_add(timelines.saturating_mul(preds));
        }
    }
    total
}

/// One conjunct with its symbols mapped to search-wide ids.
struct Part {
    prog: Compiled,
    constants: Vec<usize>,
    predicates: Vec<usize>,
    /// Index of the constant after whose timeline the part can be checked,
    /// or `None` if it needs predicates.
    ready_after: Option<usize>,
}

struct Candidate<'a> {
    domain: usize,
    lasso: Lasso,
    /// `cells[c * len + pos]`.
    cells: &'a [Elem],
    /// `preds[p][pos * domain^arity + tuple index]`.
    preds: &'a [Vec<bool>],
    arities: &'a [usize],
}

struct View<'a, 'b> {
    cand: &'b Candidate<'a>,
    part: &'b Part,
}

impl Frame for View<'_, '_> {
    fn horizon(&self) -> usize {
        self.cand.lasso.len()
    }
    fn lasso(&self) -> Option<Lasso> {
        Some(self.cand.lasso)
    }
    fn domain_len(&self) -> usize {
        self.cand.domain
    }
    fn constant(&self, id: usize, pos: usize) -> Elem {
        self.cand.cells[self.part.constants[id] * self.cand.lasso.len() + pos]
    }
    fn holds(&self, pred: usize, pos: usize, args: &[Elem]) -> bool {
        let p = self.part.predicates[pred];
        let width = self.cand.domain.pow(self.cand.arities[p] as u32);
        let tuple = args.iter().fold(0usize, |acc, &e| acc * self.cand.domain + e as usize);
        self.cand.preds[p][pos * width + tuple]
    }
}

struct Search<'s> {
    constants: Vec<String>,
    predicates: Vec<(String, usize)>,
    parts: Vec<Part>,
    scope: &'s SearchScope,
    evaluations: Cell<u64>,
}

impl Search<'_> {
    fn new<'s>(f: &Formula, scope: &'s SearchScope) -> Result<Search<'s>, SearchError> {
        let whole = Compiled::new(f)?;
        let constants: Vec<String> = whole.constants().to_vec();
        let predicates: Vec<(String, usize)> = whole.predicates().to_vec();
        let pieces: Vec<&Formula> = if scope.prune { f.conjuncts() } else { vec![f] };
        let mut parts = Vec::new();
        for piece in pieces {
            let prog = Compiled::new(piece)?;
            let cmap: Vec<usize> = prog
                .constants()
                .iter()
                .map(|c| constants.iter().position(|k| k == c).unwrap())
                .collect();
            let pmap: Vec<usize> = prog
                .predicates()
                .iter()
                .map(|(p, _)| predicates.iter().position(|(k, _)| k == p).unwrap())
                .collect();
            let ready_after = if pmap.is_empty() && !cmap.is_empty() && scope.prune {
                Some(cmap.iter().copied().max().unwrap_or(0))
            } else {
                None
            };
            parts.push(Part {
                prog,
                constants: cmap,
                predicates: pmap,
                ready_after,
            });
        }
        Ok(Search {
            constants,
            predicates,
            parts,
            scope,
            evaluations: Cell::new(0),
        })
    }

    fn holds(&self, cand: &Candidate, part: &Part) -> bool {
        self.evaluations.set(self.evaluations.get() + 1);
        part.prog.sentence_holds(&View { cand, part }, 0)
    }

    /// Visits every candidate satisfying all parts, in search order.
    fn run(&mut self, visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>) -> ControlFlow<()> {
        let arities: Vec<usize> = self.predicates.iter().map(|(_, a)| *a).collect();
        for n in 1..=self.scope.max_domain {
            for lasso in self.scope.shapes() {
                let cells_len = self.constants.len() * lasso.len();
                if self.constants.is_empty() && n > 1 {
                    continue;
                }
                let mut cells = vec![0 as Elem; cells_len];
                self.fill(n, lasso, &arities, &mut cells, 0, 0, visit)?;
            }
        }
        ControlFlow::Continue(())
    }

    #[allow(clippy::too_many_arguments)]
    fn fill(
        &mut self,
        n: usize,
        lasso: Lasso,
        arities: &[usize],
        cells: &mut Vec<Elem>,
        i: usize,
        used: usize,
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let len = lasso.len();
        if i > 0 && i.is_multiple_of(len) && self.scope.prune {
            let finished = i / len - 1;
            let no_preds: Vec<Vec<bool>> = Vec::new();
            let cand = Candidate {
                domain: n,
                lasso,
                cells,
                preds: &no_preds,
                arities,
            };
            for part in &self.parts {
                if part.ready_after == Some(finished) && !self.holds(&cand, part) {
                    return ControlFlow::Continue(());
                }
            }
        }
        if i == cells.len() {
            if self.scope.prune && used < n {
                return ControlFlow::Continue(());
            }
            return self.fill_predicates(n, lasso, arities, cells, visit);
        }
        let limit = if self.scope.prune {
            // Canonical numbering, leaving room to use all n elements.
            let remaining = cells.len() - i;
            if used + remaining < n {
                return ControlFlow::Continue(());
            }
            (used + 1).min(n)
        } else {
            n
        };
        for e in 0..limit {
            cells[i] = e as Elem;
            let used = used.max(e + 1);
            self.fill(n, lasso, arities, cells, i + 1, used, visit)?;
        }
        ControlFlow::Continue(())
    }

    fn fill_predicates(
        &mut self,
        n: usize,
        lasso: Lasso,
        arities: &[usize],
        cells: &[Elem],
        visit: &mut dyn FnMut(&Candidate) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        let widths: Vec<usize> = arities.iter().map(|&r| n.pow(r as u32) * lasso.len()).collect();
        let bits: usize = widths.iter().sum();
        let mut preds: Vec<Vec<bool>> = widths.iter().map(|&w| vec![false; w]).collect();
        for mask in 0u64..(1u64 << bits) {
            let mut b = 0;
            for p in preds.iter_mut() {
                for slot in p.iter_mut() {
                    *slot = mask >> b & 1 == 1;
                    b += 1;
                }
            }
            let cand = Candidate {
                domain: n,
                lasso,
                cells,
                preds: &preds,
                arities,
            };
            let ok = self
                .parts
                .iter()
                .filter(|p| p.ready_after.is_none())
                .all(|p| self.holds(&cand, p));
            if ok {
                visit(&cand)?;
            }
        }
        ControlFlow::Continue(())
    }

    fn to_model(&self, cand: &Candidate) -> TraceModel {
        let len = cand.lasso.len();
        let name = |e: usize| format!("u{e}");
        let mut b = ModelBuilder::new((0..cand.domain).map(name));
        for (c, cname) in self.constants.iter().enumerate() {
            b = b.constant(cname, (0..len).map(|pos| name(cand.cells[c * len + pos] as usize)));
        }
        for (p, (pname, arity)) in self.predicates.iter().enumerate() {
            let width = cand.domain.pow(*arity as u32);
            let steps = (0..len)
                .map(|pos| {
                    (0..width)
                        .filter(|t| cand.preds[p][pos * width + t])
                        .map(|t| {
                            let mut digits = vec![String::new(); *arity];
                            let mut rest = t;
                            for d in digits.iter_mut().rev() {
                                *d = name(rest % cand.domain);
                                rest /= cand.domain;
                            }
                            digits
                        })
                        .collect()
                })
                .collect();
            b = b.predicate(pname, *arity, steps);
        }
        b.lasso(cand.lasso.prefix, cand.lasso.period)
            .build()
            .expect("enumerated candidates are valid models")
    }
}

fn check_scope(f: &Formula, scope: &SearchScope) -> Result<(), SearchError> {
    if scope.max_domain == 0 || scope.max_period == 0 {
        return Err(SearchError::EmptyScope);
    }
    let free = f.free_variables();
    if !free.is_empty() {
        return Err(SearchError::NotSentence(free.into_iter().collect()));
    }
    let preds = f.predicates();
    let arity = preds.values().copied().max().unwrap_or(0);
    if preds.len() > scope.max_predicates || arity > scope.max_arity {
        return Err(SearchError::PredicateBudget {
            count: preds.len(),
            arity,
            max_predicates: scope.max_predicates,
            max_arity: scope.max_arity,
        });
    }
    let constants = f.constants().len();
    let arities: Vec<usize> = preds.values().copied().collect();
    let candidates = candidate_count(constants, &arities, scope);
    let bits_ok = scope.shapes().iter().all(|l| {
        arities
            .iter()
            .map(|&r| scope.max_domain.pow(r as u32) * l.len())
            .sum::<usize>()
            < 63
    });
    if candidates > scope.ceiling || !bits_ok {
        return Err(SearchError::ScopeTooLarge {
            candidates,
            ceiling: scope.ceiling,
        });
    }
    Ok(())
}

/// Number of candidates `find_model` may examine for `f` under `scope`.
pub fn scope_size(f: &Formula, scope: &SearchScope) -> u128 {
    let arities: Vec<usize> = f.predicates().values().copied().collect();
    candidate_count(f.constants().len(), &arities, scope)
}

/// First lasso model in scope satisfying `f` at moment 0.
pub fn find_model(f: &Formula, scope: &SearchScope) -> Result<SearchReport, SearchError> {
    check_scope(f, scope)?;
    let mut search = Search::new(f, scope)?;
    let mut found = None;
    let mut visit = |cand: &Candidate| {
        found = Some((cand.domain, cand.lasso, cand.cells.to_vec(), cand.preds.to_vec()));
        ControlFlow::Break(())
    };
    let _ = search.run(&mut visit);
    let evaluations = search.evaluations.get();
    let outcome = match found {
        Some((domain, lasso, cells, preds)) => {
            let arities: Vec<usize> = search.predicates.iter().map(|(_, a)| *a).collect();
            let cand = Candidate {
                domain,
                lasso,
                cells: &cells,
                preds: &preds,
                arities: &arities,
            };
            let model = search.to_model(&cand);
            assert!(
                eval_lasso(&model, f, &Assignment::new(), 0)?,
                "search returned a model that does not satisfy the formula"
            );
            SearchOutcome::Found(model)
        }
        None => SearchOutcome::NoneInScope,
    };
    Ok(SearchReport { outcome, evaluations })
}

/// Looks for a model of `~f`; a found model is a counterexample to validity.
pub fn check_validity_small_scope(f: &Formula, scope: &SearchScope) -> Result<SearchReport, SearchError> {
    find_model(&Formula::not(f.clone()), scope)
}

/// Calls `visit` on every in-scope lasso model satisfying `f` at moment 0.
pub fn for_each_model(
    f: &Formula,
    scope: &SearchScope,
    mut visit: impl FnMut(&TraceModel) -> ControlFlow<()>,
) -> Result<u64, SearchError> {
    check_scope(f, scope)?;
    let mut search = Search::new(f, scope)?;
    let constants = search.constants.clone();
    let predicates = search.predicates.clone();
    let shadow = Search {
        constants,
        predicates,
        parts: Vec::new(),
        scope,
        evaluations: Cell::new(0),
    };
    let mut cb = |cand: &Candidate| visit(&shadow.to_model(cand));
    let _ = search.run(&mut cb);
    Ok(search.evaluations.get())
}
