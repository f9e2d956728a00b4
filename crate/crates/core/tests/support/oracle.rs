//! Reference semantics by direct quantification over an unrolled trace.
//!
//! The lasso is unrolled to `k + p * (size + 2)` moments; every
//! subformula is periodic from `N - p` on, so later moments are folded back
//! into the last period. Temporal clauses are applied literally.

use std::collections::HashMap;

use pebble_ltl::model::TraceModel;
use pebble_ltl::syntax::{Formula, Term};

type MemoKey = (*const Formula, usize, Vec<(String, String)>);

pub struct Oracle<'m> {
    model: &'m TraceModel,
    len: usize,
    period: usize,
    memo: HashMap<MemoKey, bool>,
}

impl<'m> Oracle<'m> {
    pub fn new(model: &'m TraceModel, f: &Formula) -> Self {
        let lasso = model.lasso().expect("oracle needs a lasso");
        let len = lasso.prefix + lasso.period * (f.size() + 2);
        Oracle {
            model,
            len,
            period: lasso.period,
            memo: HashMap::new(),
        }
    }

    fn fold(&self, n: usize) -> usize {
        if n < self.len {
            n
        } else {
            let base = self.len - self.period;
            base + (n - base) % self.period
        }
    }

    /// Truth of `f` at moment `n` under `env` (variable, element) pairs.
    pub fn holds(&mut self, f: &Formula, n: usize, env: &[(String, String)]) -> bool {
        let n = self.fold(n);
        let mut env_key: Vec<(String, String)> = Vec::new();
        for (v, e) in env.iter().rev() {
            if !env_key.iter().any(|(w, _)| w == v) {
                env_key.push((v.clone(), e.clone()));
            }
        }
        env_key.sort();
        let key = (f as *const Formula, n, env_key);
        if let Some(&v) = self.memo.get(&key) {
            return v;
        }
        let v = self.compute(f, n, env);
        self.memo.insert(key, v);
        v
    }

    fn lookup<'e>(env: &'e [(String, String)], var: &str) -> &'e str {
        // Later bindings shadow earlier ones.
        &env.iter().rev().find(|(v, _)| v == var).expect("bound variable").1
    }

    fn compute(&mut self, f: &Formula, n: usize, env: &[(String, String)]) -> bool {
        // Moments m >= n up to one full period past the unrolled region.
        let future_end = n.max(self.len - self.period) + self.period;
        match f {
            Formula::Atom { pred, args } => {
                let tuple: Vec<&str> = args.iter().map(|a| Self::lookup(env, a)).collect();
                self.model.predicate_at(pred, n).unwrap().contains(&tuple)
            }
            Formula::Eq(x, y) => Self::lookup(env, x) == Self::lookup(env, y),
            Formula::Not(a) => !self.holds(a, n, env),
            Formula::And(a, b) => self.holds(a, n, env) && self.holds(b, n, env),
            Formula::Or(a, b) => self.holds(a, n, env) || self.holds(b, n, env),
            Formula::Implies(a, b) => !self.holds(a, n, env) || self.holds(b, n, env),
            Formula::Next(a) => self.holds(a, n + 1, env),
            Formula::Eventually(a) => (n..future_end).any(|m| self.holds(a, m, env)),
            Formula::Always(a) => (n..future_end).all(|m| self.holds(a, m, env)),
            Formula::Yesterday(a) => n > 0 && self.holds(a, n - 1, env),
            Formula::Once(a) => (0..=n).any(|m| self.holds(a, m, env)),
            Formula::Historically(a) => (0..=n).all(|m| self.holds(a, m, env)),
            Formula::Abstract { var, body, arg } => {
                let value = match arg {
                    Term::Const(c) => self.model.constant_at(c, n).unwrap().to_string(),
                    Term::Var(v) => Self::lookup(env, v).to_string(),
                };
                let mut inner = env.to_vec();
                inner.push((var.clone(), value));
                self.holds(body, n, &inner)
            }
        }
    }
}
