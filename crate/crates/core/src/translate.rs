//! Encoding of Minsky machines as sentences, with the canonical model of a
//! run and a bounded certifier that checks one against the other.
//!
//! Constants: `e0..eL` mark instructions, `f` points at the current one
//! (so `Q_l` is `Same(e_l, f)`), `d` walks a fresh element at every moment,
//! and counter `k` is the number of elements visited by `a_k` but not yet by
//! `b_k`.
//!
//! Alignment: moment 0 carries `Q_0`; moment `j >= 1` carries the label of
//! the run's `j`-th state, and the counters after that state are read from
//! the visited sets at moment `j + 1`.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::eval::{Compiled, EvalError, Verdict};
use crate::minsky::{run, Counter, Instruction, Label, MinskyMachine};
use crate::model::{Assignment, ModelBuilder, ModelError, TraceModel};
use crate::props::{always_new, next_new2, no_change, same};
use crate::syntax::Formula;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("label {label} is outside 0..={max}")]
    LabelOutOfRange { label: Label, max: Label },
    #[error("STOP at label {0} has no translation")]
    StopInstruction(Label),
    #[error("horizon must be at least 2, got {0}")]
    HorizonTooSmall(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// Constant names for a machine with `L` instructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TranslationAlphabet {
    labels: Label,
}

impl TranslationAlphabet {
    pub fn new(labels: Label) -> Self {
        assert!(labels >= 1, "a machine has at least one instruction");
        TranslationAlphabet { labels }
    }

    pub fn for_machine(m: &MinskyMachine) -> Self {
        Self::new(m.len())
    }

    pub fn labels(&self) -> Label {
        self.labels
    }

    pub fn e(&self, l: Label) -> String {
        format!("e{l}")
    }

    pub fn f(&self) -> &'static str {
        "f"
    }

    pub fn d(&self) -> &'static str {
        "d"
    }

    pub fn a(&self, k: Counter) -> String {
        format!("a{}", k.number())
    }

    pub fn b(&self, k: Counter) -> String {
        format!("b{}", k.number())
    }

    /// All constant names, `e0..eL` first.
    pub fn constants(&self) -> Vec<String> {
        let mut out: Vec<String> = (0..=self.labels).map(|l| self.e(l)).collect();
        out.extend(["f", "d", "a1", "b1", "a2", "b2"].map(String::from));
        out
    }
}

/// `Q_l`: instruction `l` executes now.
pub fn q_formula(l: Label, alpha: &TranslationAlphabet) -> Result<Formula, TranslateError> {
    if l > alpha.labels {
        return Err(TranslateError::LabelOutOfRange {
            label: l,
            max: alpha.labels,
        });
    }
    Ok(same(&alpha.e(l), alpha.f()))
}

fn q(l: Label, alpha: &TranslationAlphabet) -> Formula {
    same(&alpha.e(l), alpha.f())
}

fn and_all(parts: Vec<Formula>) -> Formula {
    Formula::conjunction(parts).expect("non-empty conjunction")
}

/// Named conjuncts of the translation of instruction `l`: `A1..A5` for ADD,
/// `B1..B7` for the conditional subtraction.
pub fn instruction_rules(
    l: Label,
    instr: &Instruction,
    alpha: &TranslationAlphabet,
) -> Result<Vec<(String, Formula)>, TranslateError> {
    if l == 0 || l > alpha.labels {
        return Err(TranslateError::LabelOutOfRange {
            label: l,
            max: alpha.labels,
        });
    }
    let g = |guard: Formula, then: Formula| Formula::always(Formula::implies(guard, then));
    let d = alpha.d();
    let rules = match *instr {
        Instruction::Stop => return Err(TranslateError::StopInstruction(l)),
        Instruction::Add { counter: k, goto } => {
            let (ak, bk) = (alpha.a(k), alpha.b(k));
            let (ao, bo) = (alpha.a(k.other()), alpha.b(k.other()));
            vec![
                ("A1", g(q(l, alpha), next_new2(&ak, d))),
                ("A2", g(q(l, alpha), no_change(&bk))),
                ("A3", g(q(l, alpha), no_change(&ao))),
                ("A4", g(q(l, alpha), no_change(&bo))),
                ("A5", g(q(l, alpha), Formula::next(q(goto, alpha)))),
            ]
        }
        Instruction::SubOrJump { counter: k, nonzero, zero } => {
            let (ak, bk) = (alpha.a(k), alpha.b(k));
            let (ao, bo) = (alpha.a(k.other()), alpha.b(k.other()));
            let nz = || Formula::and(q(l, alpha), Formula::not(same(&ak, &bk)));
            let z = || Formula::and(q(l, alpha), same(&ak, &bk));
            vec![
                ("B1", g(nz(), no_change(&ak))),
                ("B2", g(nz(), next_new2(&bk, d))),
                ("B3", g(nz(), no_change(&ao))),
                ("B4", g(nz(), no_change(&bo))),
                (
                    "B5",
                    g(
                        z(),
                        and_all(vec![no_change(&ak), no_change(&bk), no_change(&ao), no_change(&bo)]),
                    ),
                ),
                ("B6", g(nz(), Formula::next(q(nonzero, alpha)))),
                ("B7", g(z(), Formula::next(q(zero, alpha)))),
            ]
        }
    };
    Ok(rules.into_iter().map(|(n, f)| (n.to_string(), f)).collect())
}

pub fn translate_instruction(
    l: Label,
    instr: &Instruction,
    alpha: &TranslationAlphabet,
) -> Result<Formula, TranslateError> {
    let rules = instruction_rules(l, instr, alpha)?;
    Ok(and_all(rules.into_iter().map(|(_, f)| f).collect()))
}

/// The three initial-configuration conjuncts. With a single instruction the
/// pairwise-distinctness part is empty and only `AlwaysNew(d)` remains.
pub fn chi_zero_parts(alpha: &TranslationAlphabet) -> Vec<(String, Formula)> {
    let (a1, b1) = (alpha.a(Counter::S1), alpha.b(Counter::S1));
    let (a2, b2) = (alpha.a(Counter::S2), alpha.b(Counter::S2));
    let d = alpha.d();
    let start = and_all(vec![
        q(0, alpha),
        same(d, &a1),
        same(&a1, &b1),
        same(&b1, &a2),
        same(&a2, &b2),
    ]);
    let first = Formula::next(and_all(vec![
        q(1, alpha),
        same(&a1, &a2),
        same(&a2, &b1),
        same(&b1, &b2),
        Formula::not(same(&a1, d)),
    ]));
    let mut pairs = Vec::new();
    for i in 1..=alpha.labels {
        for j in i + 1..=alpha.labels {
            pairs.push(Formula::not(same(&alpha.e(i), &alpha.e(j))));
        }
    }
    let fresh = match Formula::conjunction(pairs) {
        Some(distinct) => Formula::and(always_new(d), Formula::always(distinct)),
        None => always_new(d),
    };
    vec![
        ("chi0.1".to_string(), start),
        ("chi0.2".to_string(), first),
        ("chi0.3".to_string(), fresh),
    ]
}

pub fn chi_zero(alpha: &TranslationAlphabet) -> Formula {
    and_all(chi_zero_parts(alpha).into_iter().map(|(_, f)| f).collect())
}

/// The conjunction over instructions `1..L-1`, or `None` when `L = 1`.
pub fn chi_machine(m: &MinskyMachine) -> Option<Formula> {
    let alpha = TranslationAlphabet::for_machine(m);
    let blocks = m
        .instructions()
        .filter(|(_, ins)| **ins != Instruction::Stop)
        .map(|(l, ins)| translate_instruction(l, ins, &alpha).expect("validated machine"));
    Formula::conjunction(blocks)
}

/// `chi_0 & chi^M`.
pub fn translate_machine(m: &MinskyMachine) -> Formula {
    let chi0 = chi_zero(&TranslationAlphabet::for_machine(m));
    match chi_machine(m) {
        Some(chi) => Formula::and(chi0, chi),
        None => chi0,
    }
}

/// Every named conjunct of `translate_machine(m)`, rule names prefixed by
/// their label (`l1.A1`).
pub fn machine_rules(m: &MinskyMachine) -> Vec<(String, Formula)> {
    let alpha = TranslationAlphabet::for_machine(m);
    let mut out = chi_zero_parts(&alpha);
    for (l, ins) in m.instructions() {
        if *ins != Instruction::Stop {
            for (name, f) in instruction_rules(l, ins, &alpha).expect("validated machine") {
                out.push((format!("l{l}.{name}"), f));
            }
        }
    }
    out
}

/// Prefix model of length `horizon + 1` following the machine's run.
pub fn canonical_model(m: &MinskyMachine, horizon: usize) -> Result<TraceModel, TranslateError> {
    if horizon < 2 {
        return Err(TranslateError::HorizonTooSmall(horizon));
    }
    let alpha = TranslationAlphabet::for_machine(m);
    let states = run(m, horizon).states;
    let big_l = m.len();
    let path = |j: usize| format!("n{j}");
    let marker = |l: Label| format!("q{l}");

    let mut domain: Vec<String> = (0..=big_l).map(marker).collect();
    domain.extend((0..=horizon).map(path));

    let label_at = |j: usize| -> Label {
        if j == 0 {
            0
        } else {
            states.get(j - 1).map_or(big_l, |s| s.label)
        }
    };

    // Pebble positions as indices into d's path: a1, b1, a2, b2.
    let mut pebbles = vec![[0usize; 4]; horizon + 1];
    for j in 1..horizon {
        let mut next = pebbles[j];
        if let Some(s) = states.get(j - 1) {
            match m.instruction(s.label) {
                Some(Instruction::Add { counter, .. }) => next[2 * counter.index()] += 1,
                Some(Instruction::SubOrJump { counter, .. }) => {
                    let (a, b) = (2 * counter.index(), 2 * counter.index() + 1);
                    if next[a] != next[b] {
                        next[b] += 1;
                    }
                }
                _ => {}
            }
        }
        pebbles[j + 1] = next;
    }

    let mut b = ModelBuilder::new(domain);
    for l in 0..=big_l {
        b = b.constant(&alpha.e(l), vec![marker(l); horizon + 1]);
    }
    b = b.constant(alpha.f(), (0..=horizon).map(|j| marker(label_at(j))));
    b = b.constant(alpha.d(), (0..=horizon).map(path));
    let names = [
        alpha.a(Counter::S1),
        alpha.b(Counter::S1),
        alpha.a(Counter::S2),
        alpha.b(Counter::S2),
    ];
    for (i, name) in names.iter().enumerate() {
        b = b.constant(name, pebbles.iter().map(|p| path(p[i])));
    }
    Ok(b.build()?)
}

/// Verdicts of one rule at the positions where it was checked.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleRow {
    pub name: String,
    pub verdicts: Vec<(usize, Verdict)>,
}

impl RuleRow {
    pub fn has_false(&self) -> bool {
        self.verdicts.iter().any(|(_, v)| *v == Verdict::False)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertReport {
    pub horizon: usize,
    pub rules: Vec<RuleRow>,
    /// No rule is definitely false at any checked position.
    pub no_violation: bool,
    /// First moment at which `Q_stop` is true.
    pub q_stop_seen_at: Option<usize>,
    /// The simulator reached STOP within the horizon.
    pub halted: bool,
    /// Counter/visited-set relation checks performed and failed.
    pub counter_checks: usize,
    pub counter_failures: Vec<String>,
    /// Exactly one `Q_l` holds at each moment, and it is the run's label.
    pub single_q_ok: bool,
    /// `Same(a_k, b_k)` at moment `j + 1` iff counter `k` is zero after state `j`.
    pub zero_test_ok: bool,
}

impl CertReport {
    pub fn all_ok(&self) -> bool {
        self.no_violation && self.counter_failures.is_empty() && self.single_q_ok && self.zero_test_ok
    }
}

impl fmt::Display for CertReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "horizon: {}", self.horizon)?;
        writeln!(f, "no_violation: {}", self.no_violation)?;
        match self.q_stop_seen_at {
            Some(n) => writeln!(f, "q_stop_seen_at: {n}")?,
            None => writeln!(f, "q_stop_seen_at: none")?,
        }
        writeln!(f, "halted: {}", self.halted)?;
        writeln!(
            f,
            "counter_relation: {} checks, {} failures",
            self.counter_checks,
            self.counter_failures.len()
        )?;
        for msg in &self.counter_failures {
            writeln!(f, "  {msg}")?;
        }
        writeln!(f, "single_q: {}", self.single_q_ok)?;
        writeln!(f, "zero_test: {}", self.zero_test_ok)?;
        for row in &self.rules {
            let cells: Vec<&str> = row
                .verdicts
                .iter()
                .map(|(_, v)| match v {
                    Verdict::True => "T",
                    Verdict::False => "F",
                    Verdict::Unknown => "?",
                })
                .collect();
            let first = row.verdicts.first().map_or(0, |(n, _)| *n);
            writeln!(f, "{:<10} @{first} {}", row.name, cells.concat())?;
        }
        Ok(())
    }
}

/// Verdicts of a conjunct: for `G ψ`, ψ at every position; otherwise the
/// conjunct itself at moment 0.
pub fn check_conjunct(m: &TraceModel, f: &Formula) -> Result<Vec<(usize, Verdict)>, EvalError> {
    let a = Assignment::new();
    match f {
        Formula::Always(body) => {
            let vals = Compiled::new(body)?.bounded_values(m, &a)?;
            Ok(vals.into_iter().enumerate().collect())
        }
        Formula::And(..) => {
            // Split `AlwaysNew(d) & G ...` style conjuncts into their parts.
            let mut out: Vec<(usize, Verdict)> = Vec::new();
            for part in f.conjuncts() {
                let vals = check_conjunct(m, part)?;
                if out.is_empty() {
                    out = vals;
                } else if out.len() == vals.len() {
                    for (o, (_, v)) in out.iter_mut().zip(vals) {
                        o.1 = o.1.and(v);
                    }
                } else {
                    return Ok(vec![(0, Compiled::new(f)?.bounded_values(m, &a)?[0])]);
                }
            }
            Ok(out)
        }
        _ => Ok(vec![(0, Compiled::new(f)?.bounded_values(m, &a)?[0])]),
    }
}

/// Builds the canonical model and checks every translation rule on it,
/// together with the counter, instruction-marker and zero-test relations.
pub fn certify(m: &MinskyMachine, horizon: usize) -> Result<CertReport, TranslateError> {
    let model = canonical_model(m, horizon)?;
    certify_model(m, &model, horizon)
}

/// As [`certify`], against a given prefix model.
pub fn certify_model(m: &MinskyMachine, model: &TraceModel, horizon: usize) -> Result<CertReport, TranslateError> {
    let alpha = TranslationAlphabet::for_machine(m);
    let sim = run(m, horizon);
    let a = Assignment::new();

    let mut rules = Vec::new();
    for (name, f) in machine_rules(m) {
        rules.push(RuleRow {
            name,
            verdicts: check_conjunct(model, &f)?,
        });
    }
    let no_violation = !rules.iter().any(RuleRow::has_false);

    let qs = (0..=m.len())
        .map(|l| Compiled::new(&q(l, &alpha))?.bounded_values(model, &a))
        .collect::<Result<Vec<_>, _>>()?;
    let q_stop_seen_at = qs[m.len()].iter().position(|v| *v == Verdict::True);
    let expected_label = |j: usize| -> Label {
        if j == 0 {
            0
        } else {
            sim.states.get(j - 1).map_or(m.len(), |s| s.label)
        }
    };
    let single_q_ok = (0..model.len()).all(|n| {
        let holding: Vec<Label> = (0..=m.len()).filter(|&l| qs[l][n] == Verdict::True).collect();
        holding == vec![expected_label(n)]
    });

    let mut counter_checks = 0;
    let mut counter_failures = Vec::new();
    let mut zero_test_ok = true;
    for k in [Counter::S1, Counter::S2] {
        let (ak, bk) = (alpha.a(k), alpha.b(k));
        let zero = Compiled::new(&same(&ak, &bk))?.bounded_values(model, &a)?;
        for (j, state) in sim.states.iter().enumerate() {
            if j + 1 >= model.len() {
                break;
            }
            counter_checks += 1;
            let va = model.visited(&ak, j + 1)?;
            let vb = model.visited(&bk, j + 1)?;
            let vd = model.visited(alpha.d(), j + 1)?;
            let value = state.counter(k);
            if va.len() as i64 - vb.len() as i64 != value as i64 {
                counter_failures.push(format!(
                    "{k} after state {j}: |V_{ak}| - |V_{bk}| = {} - {}, simulator says {value}",
                    va.len(),
                    vb.len()
                ));
            }
            if !vb.is_subset(&va) || !va.is_subset(&vd) {
                counter_failures.push(format!("{k} after state {j}: visited sets not nested"));
            }
            let diff: BTreeSet<&&str> = va.difference(&vb).collect();
            if diff.len() as u64 != value {
                counter_failures.push(format!("{k} after state {j}: |V_a minus V_b| = {}", diff.len()));
            }
            if (zero[j + 1] == Verdict::True) != (value == 0) {
                zero_test_ok = false;
            }
        }
    }

    Ok(CertReport {
        horizon,
        rules,
        no_violation,
        q_stop_seen_at,
        halted: sim.halted,
        counter_checks,
        counter_failures,
        single_q_ok,
        zero_test_ok,
    })
}
