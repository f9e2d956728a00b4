//! Acceptance criteria. Each test prints one PASS/FAIL line to stderr.

mod support;

use std::io::Write;
use std::time::Instant;

use pebble_ltl::eval::{Compiled, Verdict};
use pebble_ltl::model::{Assignment, TraceModel};
use pebble_ltl::syntax::Formula;

use support::gen::{all_models, random_model, FormulaGen};
use support::oracle::Oracle;

fn report(n: u32, title: &str, result: Result<String, String>) {
    let line = match &result {
        Ok(detail) => format!("PASS criterion {n} ({title}): {detail}"),
        Err(detail) => format!("FAIL criterion {n} ({title}): {detail}"),
    };
    // Written to the raw handle so the line shows without --nocapture.
    let _ = writeln!(std::io::stderr(), "{line}");
    if let Err(e) = result {
        panic!("{e}");
    }
}

const EQ_CONSTS: &[&str] = &["a", "b"];
const P_CONSTS: &[&str] = &["a"];
const P_PREDS: &[(&str, usize)] = &[("P", 1)];

fn corpus(seed: u64, gen: &FormulaGen, count: usize) -> Vec<Formula> {
    let mut rng = support::rng(seed);
    (0..count).map(|_| gen.sentence(&mut rng)).collect()
}

/// Checks every corpus formula against the oracle at moments `0..moments`.
fn oracle_agrees(m: &TraceModel, progs: &[(Formula, Compiled)], moments: usize) -> Result<(), String> {
    let empty = Assignment::new();
    for (f, prog) in progs {
        let fast = prog.lasso_values(m, &empty, moments).map_err(|e| e.to_string())?;
        let mut oracle = Oracle::new(m, f);
        for (n, &v) in fast.iter().enumerate() {
            if oracle.holds(f, n, &[]) != v {
                return Err(format!(
                    "{} at moment {n} on\n{}",
                    pebble_ltl::parser::print_formula(f),
                    pebble_ltl::model::write_model(m)
                ));
            }
        }
    }
    Ok(())
}

fn compile(fs: Vec<Formula>) -> Vec<(Formula, Compiled)> {
    fs.into_iter()
        .map(|f| {
            let c = Compiled::new(&f).unwrap();
            (f, c)
        })
        .collect()
}

#[test]
fn criterion_1_lasso_semantics_match_oracle() {
    let start = Instant::now();
    let result = (|| {
        let eq_progs = compile(corpus(1, &FormulaGen::new(EQ_CONSTS, &[], 4), 200));
        let p_progs = compile(corpus(2, &FormulaGen::new(P_CONSTS, P_PREDS, 4), 200));
        let mut models = 0usize;
        let mut failure = None;
        models += all_models(3, 3, 2, EQ_CONSTS, &[], |m| {
            if failure.is_none() {
                failure = oracle_agrees(m, &eq_progs, 4).err();
            }
        });
        models += all_models(2, 3, 2, P_CONSTS, P_PREDS, |m| {
            if failure.is_none() {
                failure = oracle_agrees(m, &p_progs, 4).err();
            }
        });
        let mut rng = support::rng(3);
        for _ in 0..2000 {
            let shape = (rng_range(&mut rng, 0, 3), rng_range(&mut rng, 1, 2));
            let m = random_model(&mut rng, 3, shape, P_CONSTS, P_PREDS);
            oracle_agrees(&m, &p_progs, 4)?;
            models += 1;
        }
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(format!(
            "{} formulas x {models} models agree at moments 0..4 in {:.1?}",
            eq_progs.len() + p_progs.len(),
            start.elapsed()
        ))
    })();
    report(1, "lasso evaluation vs reference semantics", result);
}

fn rng_range<R: rand::Rng>(rng: &mut R, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}

/// Prefix of `m` with elements renamed by first appearance, as a grouping key.
fn prefix_key(m: &TraceModel, len: usize) -> Vec<u32> {
    let mut names: Vec<String> = Vec::new();
    let mut id = |e: &str| -> u32 {
        match names.iter().position(|n| n == e) {
            Some(i) => i as u32,
            None => {
                names.push(e.to_string());
                (names.len() - 1) as u32
            }
        }
    };
    let mut key = Vec::new();
    let consts: Vec<String> = m.constant_names().map(str::to_string).collect();
    let preds: Vec<String> = m.predicate_names().map(|(p, _)| p.to_string()).collect();
    for n in 0..len {
        for c in &consts {
            key.push(id(m.constant_at(c, n).unwrap()));
        }
    }
    for n in 0..len {
        for p in &preds {
            key.push(u32::MAX);
            for tuple in m.predicate_at(p, n).unwrap() {
                key.extend(tuple.into_iter().map(&mut id));
            }
        }
    }
    key
}

struct SoundnessTally {
    prefixes: std::collections::HashMap<Vec<u32>, Vec<Vec<Verdict>>>,
    definite: u64,
    unknown: u64,
    failure: Option<String>,
}

impl SoundnessTally {
    fn check(&mut self, m: &TraceModel, progs: &[(Formula, Compiled)], max_prefix: usize) {
        if self.failure.is_some() {
            return;
        }
        let empty = Assignment::new();
        let upto = max_prefix.min(m.len() + 2);
        let lasso: Vec<Vec<bool>> = progs
            .iter()
            .map(|(_, p)| p.lasso_values(m, &empty, upto).unwrap())
            .collect();
        for len in 1..=upto {
            let key = prefix_key(m, len);
            let bounded = self.prefixes.entry(key).or_insert_with(|| {
                let pre = m.prefix(len).unwrap();
                progs
                    .iter()
                    .map(|(_, p)| p.bounded_values(&pre, &empty).unwrap())
                    .collect()
            });
            for (fi, verdicts) in bounded.iter().enumerate() {
                for (n, v) in verdicts.iter().enumerate() {
                    match v {
                        Verdict::Unknown => self.unknown += 1,
                        v => {
                            self.definite += 1;
                            if *v != Verdict::from(lasso[fi][n]) {
                                self.failure = Some(format!(
                                    "{} is {v} at moment {n} of a {len}-prefix but {} on\n{}",
                                    pebble_ltl::parser::print_formula(&progs[fi].0),
                                    lasso[fi][n],
                                    pebble_ltl::model::write_model(m)
                                ));
                                return;
                            }
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn criterion_2_bounded_verdicts_are_sound() {
    let start = Instant::now();
    let result = (|| {
        let eq_progs = compile(corpus(11, &FormulaGen::new(EQ_CONSTS, &[], 4), 100));
        let p_progs = compile(corpus(12, &FormulaGen::new(P_CONSTS, P_PREDS, 4), 100));
        let mut eq = SoundnessTally {
            prefixes: Default::default(),
            definite: 0,
            unknown: 0,
            failure: None,
        };
        let mut models = all_models(3, 3, 2, EQ_CONSTS, &[], |m| eq.check(m, &eq_progs, 6));
        let mut p = SoundnessTally {
            prefixes: Default::default(),
            definite: 0,
            unknown: 0,
            failure: None,
        };
        models += all_models(2, 3, 2, P_CONSTS, P_PREDS, |m| p.check(m, &p_progs, 6));
        if let Some(e) = eq.failure.or(p.failure) {
            return Err(e);
        }
        if eq.definite == 0 || eq.unknown == 0 {
            return Err("sweep did not exercise both definite and unknown verdicts".into());
        }
        Ok(format!(
            "{models} lassos, {} distinct prefixes, {} definite verdicts agree with every completion ({} unknown) in {:.1?}",
            eq.prefixes.len() + p.prefixes.len(),
            eq.definite + p.definite,
            eq.unknown + p.unknown,
            start.elapsed()
        ))
    })();
    report(2, "bounded verdicts are sound for completions", result);
}

const ABC: &[&str] = &["a", "b", "c"];
const E_PRED: &[(&str, usize)] = &[("E", 2)];

/// Every property builder instantiated over `a, b, c` and `E`, with the
/// negation of each, plus random sentences over the same signature.
fn props_corpus(random: usize) -> Vec<Formula> {
    use pebble_ltl::props::*;
    let mut out = vec![
        same("a", "b"),
        same("b", "c"),
        always_new("a"),
        same_in_past("a", "b"),
        same_in_past("c", "a"),
        no_change("c"),
        always_return("a"),
        next_new1("a", "b", "c"),
        next_new2("a", "b"),
        rigid_on_visited("E", "a", "b"),
        rigid_on_visited("E", "c", "c"),
        forwarding_protocol("a", "b", "c").unwrap(),
    ];
    let negated: Vec<Formula> = out.iter().cloned().map(Formula::not).collect();
    out.extend(negated);
    let mut rng = support::rng(31);
    let gen = FormulaGen::new(ABC, E_PRED, 4);
    out.extend((0..random).map(|_| gen.sentence(&mut rng)));
    out
}

/// Adds an element no constant visits, with random `E` tuples through it.
fn with_spare<R: rand::Rng>(m: &TraceModel, rng: &mut R) -> TraceModel {
    let mut b = m.to_builder();
    let spare = "spare".to_string();
    let others = b.domain.clone();
    b.domain.push(spare.clone());
    let (_, _, steps) = b.predicates.iter_mut().find(|(n, _, _)| n == "E").unwrap();
    for step in steps.iter_mut() {
        for o in others.iter().chain([&spare]) {
            if rng.gen_bool(0.5) {
                step.push(vec![spare.clone(), o.clone()]);
            }
            if o != &spare && rng.gen_bool(0.5) {
                step.push(vec![o.clone(), spare.clone()]);
            }
        }
    }
    b.build().unwrap()
}

fn even_period(m: &TraceModel) -> TraceModel {
    if m.lasso().unwrap().period % 2 == 1 {
        m.double_period().unwrap()
    } else {
        m.clone()
    }
}

fn verdicts_at_zero(m: &TraceModel, corpus: &[Formula]) -> Vec<Verdict> {
    corpus
        .iter()
        .map(|f| pebble_ltl::eval::eval_sentence(m, f, 0).unwrap())
        .collect()
}

#[test]
fn criterion_3_sentences_cannot_distinguish_pebble_equivalent_models() {
    use pebble_ltl::equiv::{extend_with_flicker, pebble_equivalent, EquivScope};
    let start = Instant::now();
    let result = (|| {
        let corpus = props_corpus(60);
        let mut rng = support::rng(32);
        let (mut pairs, mut bounded_pairs, mut flicker_pairs) = (0, 0, 0);
        for _ in 0..250 {
            let shape = (rng_range(&mut rng, 0, 3), rng_range(&mut rng, 1, 2));
            let domain = rng_range(&mut rng, 1, 3);
            let m = random_model(&mut rng, domain, shape, ABC, E_PRED);
            let m1 = with_spare(&m, &mut rng);
            let m2 = with_spare(&m, &mut rng);
            let candidates = [
                (m.clone(), extend_with_flicker(&even_period(&m), "E").unwrap(), true),
                (m1.clone(), extend_with_flicker(&even_period(&m2), "E").unwrap(), true),
                (m.clone(), m1.clone(), false),
                (m1.clone(), m2.clone(), false),
                (m.clone(), m2.unroll_prefix(rng_range(&mut rng, 1, 2)).unwrap(), false),
                (m1.double_period().unwrap(), m2.clone(), false),
            ];
            for (x, y, flicker) in candidates {
                let scope = EquivScope::new(1);
                if !pebble_equivalent(&x, &y, &scope).unwrap().holds() {
                    return Err("generated pair is not pebble equivalent".into());
                }
                if verdicts_at_zero(&x, &corpus) != verdicts_at_zero(&y, &corpus) {
                    return Err(format!(
                        "verdicts differ between\n{}and\n{}",
                        pebble_ltl::model::write_model(&x),
                        pebble_ltl::model::write_model(&y)
                    ));
                }
                pairs += 1;
                flicker_pairs += flicker as usize;
                // The same pair cut to a common prefix, compared in bounded mode.
                let len = rng_range(&mut rng, 1, 6);
                let (px, py) = (x.prefix(len).unwrap(), y.prefix(len).unwrap());
                if !pebble_equivalent(&px, &py, &EquivScope::new(len)).unwrap().holds() {
                    return Err("prefix pair is not pebble equivalent".into());
                }
                if verdicts_at_zero(&px, &corpus) != verdicts_at_zero(&py, &corpus) {
                    return Err(format!("bounded verdicts differ on {len}-prefixes"));
                }
                pairs += 1;
                bounded_pairs += 1;
            }
        }
        if pairs < 1000 {
            return Err(format!("only {pairs} pairs generated"));
        }
        Ok(format!(
            "{pairs} equivalent pairs ({flicker_pairs} flicker, {bounded_pairs} bounded) agree on {} sentences in {:.1?}",
            corpus.len(),
            start.elapsed()
        ))
    })();
    report(3, "pebble-equivalent models agree on sentences", result);
}

#[test]
fn criterion_4_flicker_extension_preserves_models() {
    use pebble_ltl::equiv::extend_with_flicker;
    use pebble_ltl::satsearch::{find_model, SearchOutcome, SearchScope};
    let start = Instant::now();
    let result = (|| {
        let corpus = props_corpus(60);
        let scope = SearchScope::new(2, 1, 2);
        let (mut satisfiable, mut none, mut too_large) = (0, 0, 0);
        for f in &corpus {
            let report = match find_model(f, &scope) {
                Ok(r) => r,
                Err(pebble_ltl::satsearch::SearchError::ScopeTooLarge { .. }) => {
                    too_large += 1;
                    continue;
                }
                Err(e) => return Err(e.to_string()),
            };
            let SearchOutcome::Found(m) = report.outcome else {
                none += 1;
                continue;
            };
            satisfiable += 1;
            let base = even_period(&m);
            let ext = extend_with_flicker(&base, "E").map_err(|e| e.to_string())?;
            let fresh: Vec<&String> = ext.domain().iter().filter(|e| !base.domain().contains(e)).collect();
            if fresh.len() != 2 {
                return Err("flicker must add exactly two elements".into());
            }
            let pairs: Vec<Vec<&str>> = fresh
                .iter()
                .flat_map(|x| fresh.iter().map(move |y| vec![x.as_str(), y.as_str()]))
                .collect();
            for n in 0..ext.len() {
                let e = ext.predicate_at("E", n).unwrap();
                let want_in = n % 2 == 0;
                if pairs.iter().any(|p| e.contains(p) != want_in) {
                    return Err(format!("fresh pairs wrong at step {n}"));
                }
                for c in ext.constant_names() {
                    if ext.constant_at(c, n).unwrap() != base.constant_at(c, n).unwrap() {
                        return Err("flicker moved a constant".into());
                    }
                }
            }
            if ext.predicate_at("E", 0).unwrap() == ext.predicate_at("E", 1).unwrap() {
                return Err("E is persistent on the extension".into());
            }
            if pebble_ltl::eval::eval_sentence(&ext, f, 0).unwrap() != Verdict::True {
                return Err(format!(
                    "{} fails on the flicker extension",
                    pebble_ltl::parser::print_formula(f)
                ));
            }
        }
        if satisfiable == 0 {
            return Err("no corpus sentence was satisfiable in scope".into());
        }
        Ok(format!(
            "{satisfiable} satisfiable sentences keep their models under flicker ({none} none in scope, {too_large} above ceiling) in {:.1?}",
            start.elapsed()
        ))
    })();
    report(4, "flicker extension", result);
}

/// Machine corpus: (name, program, halts).
const MACHINES: &[(&str, &str, bool)] = &[
    ("add_stop", "1: ADD 1 TO S1; GOTO 2\n2: STOP", true),
    ("add_s2_stop", "1: ADD 1 TO S2; GOTO 2\n2: STOP", true),
    (
        "add_two_drain",
        "1: ADD 1 TO S1; GOTO 2\n2: ADD 1 TO S1; GOTO 3\n\
         3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 3 ELSE GOTO 4\n4: STOP",
        true,
    ),
    (
        "zero_jump",
        "1: IF S2 != 0 THEN SUB 1 FROM S2; GOTO 1 ELSE GOTO 2\n2: STOP",
        true,
    ),
    (
        "transfer",
        "1: ADD 1 TO S1; GOTO 2\n2: ADD 1 TO S1; GOTO 3\n3: ADD 1 TO S1; GOTO 4\n\
         4: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 5 ELSE GOTO 6\n5: ADD 1 TO S2; GOTO 4\n6: STOP",
        true,
    ),
    (
        // Nested loops: for each of two units in S1, add two to S2.
        "double",
        "1: ADD 1 TO S1; GOTO 2\n2: ADD 1 TO S1; GOTO 3\n\
         3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 6\n\
         4: ADD 1 TO S2; GOTO 5\n5: ADD 1 TO S2; GOTO 3\n6: STOP",
        true,
    ),
    (
        // Nested loops draining S2 once per unit of S1.
        "nested_drain",
        "1: ADD 1 TO S1; GOTO 2\n2: ADD 1 TO S1; GOTO 3\n\
         3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 8\n\
         4: ADD 1 TO S2; GOTO 5\n5: ADD 1 TO S2; GOTO 6\n\
         6: IF S2 != 0 THEN SUB 1 FROM S2; GOTO 6 ELSE GOTO 7\n\
         7: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 8\n8: STOP",
        true,
    ),
    ("self_loop_add", "1: ADD 1 TO S1; GOTO 1\n2: STOP", false),
    (
        "ping_pong",
        "1: ADD 1 TO S1; GOTO 2\n2: ADD 1 TO S2; GOTO 1\n3: STOP",
        false,
    ),
    (
        "zero_spin",
        "1: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 1 ELSE GOTO 1\n2: STOP",
        false,
    ),
    (
        "add_sub_cycle",
        "1: ADD 1 TO S2; GOTO 2\n2: IF S2 != 0 THEN SUB 1 FROM S2; GOTO 1 ELSE GOTO 3\n3: STOP",
        false,
    ),
    (
        "shuttle",
        "1: ADD 1 TO S1; GOTO 2\n\
         2: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 3 ELSE GOTO 4\n\
         3: ADD 1 TO S2; GOTO 2\n\
         4: IF S2 != 0 THEN SUB 1 FROM S2; GOTO 5 ELSE GOTO 1\n\
         5: ADD 1 TO S1; GOTO 4\n6: STOP",
        false,
    ),
];

fn machines() -> Vec<(&'static str, pebble_ltl::minsky::MinskyMachine, bool)> {
    MACHINES
        .iter()
        .map(|(name, text, halts)| (*name, pebble_ltl::minsky::parse_machine(text).unwrap(), *halts))
        .collect()
}

#[test]
fn criterion_5_canonical_models_satisfy_translation() {
    use pebble_ltl::minsky::run;
    use pebble_ltl::translate::certify;
    let start = Instant::now();
    let result = (|| {
        let corpus = machines();
        let mut checks = 0;
        for (name, m, halts) in &corpus {
            let sim = run(m, 1000);
            if sim.halted != *halts {
                return Err(format!("{name}: simulator disagrees with the corpus label"));
            }
            // States 1..=s lead to Q_stop at moment s.
            let horizon = if sim.halted { (2 * sim.states.len()).max(4) } else { 50 };
            let report = certify(m, horizon).map_err(|e| e.to_string())?;
            if !report.no_violation {
                return Err(format!("{name}: violation\n{report}"));
            }
            if report.q_stop_seen_at.is_some() != sim.halted {
                return Err(format!("{name}: q_stop_seen_at {:?}", report.q_stop_seen_at));
            }
            if sim.halted && report.q_stop_seen_at != Some(sim.states.len()) {
                return Err(format!("{name}: Q_stop at {:?}", report.q_stop_seen_at));
            }
            if !report.counter_failures.is_empty() || report.counter_checks == 0 {
                return Err(format!("{name}: counter relation\n{report}"));
            }
            if !report.single_q_ok || !report.zero_test_ok {
                return Err(format!("{name}: instruction markers or zero test\n{report}"));
            }
            checks += report.counter_checks;
        }
        Ok(format!(
            "{} machines certified, {checks} counter checks, 0 exceptions in {:.1?}",
            corpus.len(),
            start.elapsed()
        ))
    })();
    report(5, "canonical models certify the translation", result);
}

#[test]
fn criterion_6_non_halting_machines_never_reach_stop() {
    use pebble_ltl::satsearch::{find_model, SearchOutcome, SearchScope};
    use pebble_ltl::translate::{canonical_model, q_formula, translate_machine, TranslationAlphabet};
    let start = Instant::now();
    let result = (|| {
        let mut searched = 0;
        let mut evaluations = 0;
        for (name, m, halts) in machines() {
            if halts {
                continue;
            }
            let alpha = TranslationAlphabet::for_machine(&m);
            let q_stop = q_formula(m.stop_label(), &alpha).unwrap();
            let model = canonical_model(&m, 50).map_err(|e| e.to_string())?;
            let values = Compiled::new(&q_stop)
                .unwrap()
                .bounded_values(&model, &Assignment::new())
                .unwrap();
            if values.iter().any(|v| *v != Verdict::False) {
                return Err(format!("{name}: Q_stop not definitely false"));
            }
            let goal = Formula::and(translate_machine(&m), Formula::eventually(q_stop));
            let mut scope = SearchScope::new(3, 3, 2);
            // The candidate count is astronomical; conjunct pruning keeps the run short.
            scope.ceiling = u128::MAX;
            let report = find_model(&goal, &scope).map_err(|e| e.to_string())?;
            if let SearchOutcome::Found(_) = report.outcome {
                return Err(format!("{name}: search found a model reaching Q_stop"));
            }
            searched += 1;
            evaluations += report.evaluations;
        }
        Ok(format!(
            "{searched} non-halting machines: Q_stop false through moment 50; no model at |D| <= 3, prefix <= 3, period <= 2 ({evaluations} evaluations; evidence only) in {:.1?}",
            start.elapsed()
        ))
    })();
    report(6, "non-halting machines never reach Q_stop", result);
}

fn with_constant(m: &TraceModel, name: &str, element: &str) -> TraceModel {
    let mut b = m.to_builder();
    b.constants.push((name.to_string(), vec![element.to_string(); m.len()]));
    b.build().unwrap()
}

#[test]
fn criterion_7_property_formulas_behave_as_described() {
    use pebble_ltl::eval::eval_sentence;
    use pebble_ltl::model::parse_model;
    use pebble_ltl::props::{always_new, forwarding_protocol, next_new1, next_new2};
    use pebble_ltl::satsearch::{check_validity_small_scope, SearchOutcome, SearchScope};
    let start = Instant::now();
    let result = (|| {
        // NextNew2 holds iff some value of the auxiliary constant makes
        // NextNew1 hold. Only the auxiliary's moment-0 value is read.
        let nn2 = next_new2("a", "d");
        let nn1 = next_new1("a", "d", "c");
        let mut failure = None;
        let sweep = all_models(3, 3, 2, &["a", "d"], &[], |m| {
            if failure.is_some() {
                return;
            }
            let v2 = eval_sentence(m, &nn2, 0).unwrap();
            let v1 = m
                .domain()
                .iter()
                .any(|e| eval_sentence(&with_constant(m, "c", e), &nn1, 0).unwrap() == Verdict::True);
            if v2 != Verdict::from(v1) {
                failure = Some(format!(
                    "NextNew1 (some c) = {v1}, NextNew2 = {v2} on\n{}",
                    pebble_ltl::model::write_model(m)
                ));
            }
        });
        if let Some(e) = failure {
            return Err(e);
        }
        let one_way = Formula::implies(nn1.clone(), nn2.clone());
        let report = check_validity_small_scope(&one_way, &SearchScope::new(3, 3, 2)).map_err(|e| e.to_string())?;
        if let SearchOutcome::Found(m) = report.outcome {
            return Err(format!(
                "NextNew1 -> NextNew2 refuted by\n{}",
                pebble_ltl::model::write_model(&m)
            ));
        }

        let an = always_new("d");
        let mut lassos = 0;
        let mut not_false = None;
        all_models(3, 3, 2, &["d"], &[], |m| {
            lassos += 1;
            if eval_sentence(m, &an, 0).unwrap() != Verdict::False {
                not_false = Some(pebble_ltl::model::write_model(m));
            }
        });
        if let Some(m) = not_false {
            return Err(format!("AlwaysNew holds on\n{m}"));
        }

        let scenario = parse_model(include_str!("../data/forwarding.mdl")).unwrap();
        let protocol = forwarding_protocol("s", "r", "m").unwrap();
        let parts: Vec<Formula> = protocol.conjuncts().into_iter().cloned().collect();
        let verdicts = |model: &TraceModel| -> Vec<Verdict> {
            parts.iter().map(|p| eval_sentence(model, p, 0).unwrap()).collect()
        };
        let good = verdicts(&scenario);
        if scenario.len() != 6 || good.contains(&Verdict::False) || !good.contains(&Verdict::True) {
            return Err(format!("scenario verdicts {good:?}"));
        }
        let mut b = scenario.to_builder();
        b.constants.iter_mut().find(|(n, _)| n == "m").unwrap().1[3] = "h4".into();
        let mutant = verdicts(&b.build().unwrap());
        let failing: Vec<usize> = (0..mutant.len()).filter(|&i| mutant[i] == Verdict::False).collect();
        if failing != vec![2] {
            return Err(format!("mutant verdicts {mutant:?}"));
        }
        Ok(format!(
            "NextNew variants agree on {sweep} lassos; AlwaysNew false on {lassos} lassos; \
             scenario verdicts {good:?}, mutant fails only conjunct 3 in {:.1?}",
            start.elapsed()
        ))
    })();
    report(7, "property formulas", result);
}

#[test]
fn criterion_8_print_then_parse_is_identity() {
    use pebble_ltl::parser::{parse_formula, parse_formula_file, print_formula, write_formula_file};
    use pebble_ltl::syntax::Alphabet;
    use pebble_ltl::translate::translate_machine;
    let start = Instant::now();
    let result = (|| {
        let mut rng = support::rng(81);
        let mut gen = FormulaGen::new(&["a", "b", "c"], &[("P", 1), ("E", 2), ("R", 3)], 6);
        gen.vars = vec!["x".into(), "y".into(), "z".into()];
        gen.var_arg_percent = 30;
        let check = |f: &Formula| -> Result<(), String> {
            // Free variables are declared: as abstraction arguments they
            // would otherwise read back as constants.
            let alphabet = Alphabet::of(f);
            let text = print_formula(f);
            let back = parse_formula(&text, &alphabet).map_err(|e| format!("{text}: {e}"))?;
            if &back != f {
                return Err(format!("round trip changed {text} into {}", print_formula(&back)));
            }
            let file = write_formula_file(&alphabet, f);
            let parsed = parse_formula_file(&file).map_err(|e| format!("{file}: {e}"))?;
            if &parsed.formula != f || parsed.alphabet != alphabet {
                return Err(format!("file round trip changed {file}"));
            }
            Ok(())
        };
        for i in 0..10_000 {
            let f = if i % 4 == 0 {
                gen.open(&mut rng, &["x", "z"])
            } else {
                gen.sentence(&mut rng)
            };
            check(&f)?;
        }
        let corpus = machines();
        for (_, m, _) in &corpus {
            check(&translate_machine(m))?;
        }
        Ok(format!(
            "10000 generated formulas and {} machine translations round-trip in {:.1?}",
            corpus.len(),
            start.elapsed()
        ))
    })();
    report(8, "print/parse round trip", result);
}
