//! Look for small models and small counterexamples.

use pebble_ltl::model::write_model;
use pebble_ltl::props::{always_new, next_new1, next_new2, same};
use pebble_ltl::satsearch::{check_validity_small_scope, find_model, SearchOutcome, SearchScope};
use pebble_ltl::syntax::Formula;

fn show(label: &str, outcome: &SearchOutcome, evaluations: u64) {
    match outcome {
        SearchOutcome::Found(m) => print!("{label}: found after {evaluations} evaluations\n{}", write_model(m)),
        SearchOutcome::NoneInScope => println!("{label}: none in scope ({evaluations} evaluations)"),
    }
}

fn main() {
    let scope = SearchScope::new(3, 2, 2);
    let r = find_model(&Formula::not(same("a", "b")), &scope).unwrap();
    show("model of ~Same(a, b)", &r.outcome, r.evaluations);
    let r = find_model(&always_new("d"), &scope).unwrap();
    show("model of AlwaysNew(d)", &r.outcome, r.evaluations);
    let r = check_validity_small_scope(&same("a", "b"), &scope).unwrap();
    show("counterexample to Same(a, b)", &r.outcome, r.evaluations);
    let one_way = Formula::implies(next_new1("a", "d", "c"), next_new2("a", "d"));
    let r = check_validity_small_scope(&one_way, &SearchScope::new(2, 2, 2)).unwrap();
    show("counterexample to NextNew1 -> NextNew2", &r.outcome, r.evaluations);
}
