//! Seeded formula and model generators for sweeps.

use pebble_ltl::model::{ModelBuilder, TraceModel};
use pebble_ltl::syntax::{Formula, Term};
use rand::seq::SliceRandom;
use rand::Rng;

/// Random formulas over a fixed signature.
#[derive(Clone, Debug)]
pub struct FormulaGen {
    pub consts: Vec<String>,
    pub preds: Vec<(String, usize)>,
    pub vars: Vec<String>,
    pub max_depth: usize,
    /// Percent chance that an abstraction takes a bound variable as argument.
    pub var_arg_percent: u32,
}

impl FormulaGen {
    pub fn new(consts: &[&str], preds: &[(&str, usize)], max_depth: usize) -> Self {
        FormulaGen {
            consts: consts.iter().map(|s| s.to_string()).collect(),
            preds: preds.iter().map(|(p, a)| (p.to_string(), *a)).collect(),
            vars: vec!["x".into(), "y".into()],
            max_depth,
            var_arg_percent: 20,
        }
    }

    pub fn sentence<R: Rng>(&self, rng: &mut R) -> Formula {
        let depth = rng.gen_range(1..=self.max_depth);
        self.go(rng, depth, &mut Vec::new())
    }

    /// A formula whose free variables are drawn from `free`.
    pub fn open<R: Rng>(&self, rng: &mut R, free: &[&str]) -> Formula {
        let depth = rng.gen_range(0..=self.max_depth);
        let mut bound: Vec<String> = free.iter().map(|s| s.to_string()).collect();
        self.go(rng, depth, &mut bound)
    }

    fn leaf<R: Rng>(&self, rng: &mut R, bound: &mut Vec<String>) -> Formula {
        if bound.is_empty() {
            let var = self.vars.choose(rng).unwrap().clone();
            let arg = Term::constant(self.consts.choose(rng).unwrap().clone());
            bound.push(var.clone());
            let body = self.leaf(rng, bound);
            bound.pop();
            return Formula::abstraction(var, body, arg);
        }
        let usable: Vec<&(String, usize)> = self.preds.iter().collect();
        if !usable.is_empty() && rng.gen_bool(0.5) {
            let (p, arity) = usable.choose(rng).unwrap();
            let args: Vec<String> = (0..*arity).map(|_| bound.choose(rng).unwrap().clone()).collect();
            Formula::atom(p.clone(), args)
        } else {
            Formula::eq(bound.choose(rng).unwrap().clone(), bound.choose(rng).unwrap().clone())
        }
    }

    fn go<R: Rng>(&self, rng: &mut R, depth: usize, bound: &mut Vec<String>) -> Formula {
        if depth == 0 {
            return self.leaf(rng, bound);
        }
        let d = depth - 1;
        match rng.gen_range(0..13) {
            0 => Formula::not(self.go(rng, d, bound)),
            1 => Formula::and(self.go(rng, d, bound), self.go(rng, d, bound)),
            2 => Formula::or(self.go(rng, d, bound), self.go(rng, d, bound)),
            3 => Formula::implies(self.go(rng, d, bound), self.go(rng, d, bound)),
            4 => Formula::next(self.go(rng, d, bound)),
            5 => Formula::eventually(self.go(rng, d, bound)),
            6 => Formula::always(self.go(rng, d, bound)),
            7 => Formula::yesterday(self.go(rng, d, bound)),
            8 => Formula::once(self.go(rng, d, bound)),
            9 => Formula::historically(self.go(rng, d, bound)),
            _ => {
                let var = self.vars.choose(rng).unwrap().clone();
                let arg = if !bound.is_empty() && rng.gen_range(0..100) < self.var_arg_percent {
                    Term::var(bound.choose(rng).unwrap().clone())
                } else {
                    Term::constant(self.consts.choose(rng).unwrap().clone())
                };
                bound.push(var.clone());
                let body = self.go(rng, d, bound);
                bound.pop();
                Formula::abstraction(var, body, arg)
            }
        }
    }
}

/// Lasso shapes `(prefix, period)` with `prefix <= max_prefix` and
/// `1 <= period <= max_period`.
pub fn shapes(max_prefix: usize, max_period: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for k in 0..=max_prefix {
        for p in 1..=max_period {
            out.push((k, p));
        }
    }
    out
}

/// Restricted growth strings of length `len` using at most `max_blocks`
/// symbols: each set partition of the cells is listed once.
pub fn restricted_growth(len: usize, max_blocks: usize) -> Vec<Vec<usize>> {
    fn go(cur: &mut Vec<usize>, len: usize, max_blocks: usize, used: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for v in 0..(used + 1).min(max_blocks) {
            cur.push(v);
            go(cur, len, max_blocks, used.max(v + 1), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, max_blocks, 0, &mut out);
    out
}

fn element(i: usize) -> String {
    format!("e{i}")
}

/// Builds a lasso model. `cells` lists the element index of every constant,
/// constant-major; `pred_bits[j]` holds the extension of predicate `j` as a
/// bitmask over (moment, tuple) in moment-major order.
pub fn build_model(
    domain: usize,
    (k, p): (usize, usize),
    consts: &[&str],
    cells: &[usize],
    preds: &[(&str, usize)],
    pred_bits: &[u64],
) -> TraceModel {
    let len = k + p;
    let mut b = ModelBuilder::new((0..domain).map(element));
    for (ci, c) in consts.iter().enumerate() {
        b = b.constant(c, cells[ci * len..(ci + 1) * len].iter().map(|&e| element(e)));
    }
    for (pi, (name, arity)) in preds.iter().enumerate() {
        let tuples = domain.pow(*arity as u32);
        let mut steps = Vec::with_capacity(len);
        for t in 0..len {
            let mut step = Vec::new();
            for ti in 0..tuples {
                if pred_bits[pi] >> (t * tuples + ti) & 1 == 1 {
                    let mut tuple = Vec::with_capacity(*arity);
                    let mut rest = ti;
                    for _ in 0..*arity {
                        tuple.push(element(rest % domain));
                        rest /= domain;
                    }
                    step.push(tuple);
                }
            }
            steps.push(step);
        }
        b = b.predicate(name, *arity, steps);
    }
    b.lasso(k, p).build().expect("generated model is valid")
}

/// Every lasso model up to isomorphism of the constant assignment, with
/// every predicate extension, for the given bounds.
pub fn all_models(
    max_domain: usize,
    max_prefix: usize,
    max_period: usize,
    consts: &[&str],
    preds: &[(&str, usize)],
    mut visit: impl FnMut(&TraceModel),
) -> usize {
    let mut count = 0;
    for shape in shapes(max_prefix, max_period) {
        let len = shape.0 + shape.1;
        for cells in restricted_growth(consts.len() * len, max_domain) {
            let domain = cells.iter().max().map_or(1, |m| m + 1);
            let widths: Vec<usize> = preds
                .iter()
                .map(|(_, a)| domain.pow(*a as u32) * len)
                .collect();
            let total: usize = widths.iter().sum();
            assert!(total < 40, "predicate space too large for exhaustive sweep");
            for mask in 0u64..(1u64 << total) {
                let mut bits = Vec::with_capacity(preds.len());
                let mut rest = mask;
                for w in &widths {
                    bits.push(rest & ((1u64 << w) - 1));
                    rest >>= w;
                }
                visit(&build_model(domain, shape, consts, &cells, preds, &bits));
                count += 1;
            }
        }
    }
    count
}

/// A uniformly random lasso model with the given domain size and shape.
pub fn random_model<R: Rng>(
    rng: &mut R,
    domain: usize,
    shape: (usize, usize),
    consts: &[&str],
    preds: &[(&str, usize)],
) -> TraceModel {
    let len = shape.0 + shape.1;
    let cells: Vec<usize> = (0..consts.len() * len).map(|_| rng.gen_range(0..domain)).collect();
    let bits: Vec<u64> = preds
        .iter()
        .map(|(_, a)| {
            let w = domain.pow(*a as u32) * len;
            assert!(w <= 64);
            let all = if w == 64 { u64::MAX } else { (1u64 << w) - 1 };
            rng.gen::<u64>() & all
        })
        .collect();
    build_model(domain, shape, consts, &cells, preds, &bits)
}
