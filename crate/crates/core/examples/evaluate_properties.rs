//! Evaluate the property formulas on a lasso and on its finite prefix.

use pebble_ltl::eval::eval_sentence;
use pebble_ltl::model::ModelBuilder;
use pebble_ltl::props;

fn main() {
    // d walks u, v, w and then alternates between v and w forever.
    let lasso = ModelBuilder::new(["u", "v", "w"])
        .constant("a", ["u", "u", "v", "w"])
        .constant("d", ["u", "v", "w", "v"])
        .lasso(2, 2)
        .build()
        .expect("valid model");
    let prefix = lasso.prefix(3).expect("prefix");

    let formulas = [
        ("Same(a, d)", props::same("a", "d")),
        ("AlwaysNew(d)", props::always_new("d")),
        ("SameInPast(a, d)", props::same_in_past("a", "d")),
        ("NoChange(a)", props::no_change("a")),
        ("NextNew2(a, d)", props::next_new2("a", "d")),
    ];
    println!("{:<18} {:>8} {:>8}", "formula", "lasso", "prefix");
    for (name, f) in &formulas {
        let l = eval_sentence(&lasso, f, 0).expect("evaluates");
        let p = eval_sentence(&prefix, f, 0).expect("evaluates");
        println!("{name:<18} {l:>8} {p:>8}");
    }
}
