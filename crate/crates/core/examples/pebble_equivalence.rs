//! Build a flicker extension and confirm that no sentence tells it apart.

use pebble_ltl::equiv::{extend_with_flicker, pebble_equivalent, EquivScope};
use pebble_ltl::eval::eval_sentence;
use pebble_ltl::model::{write_model, ModelBuilder};
use pebble_ltl::props::rigid_on_visited;

fn main() {
    let m = ModelBuilder::new(["u", "v"])
        .constant("a", ["u", "v"])
        .constant("b", ["v", "u"])
        .predicate("E", 2, vec![vec![vec!["u", "v"]], vec![vec!["u", "v"]]])
        .lasso(0, 2)
        .build()
        .expect("valid model");
    let ext = extend_with_flicker(&m, "E").expect("even period");
    print!("{}", write_model(&ext));

    let verdict = pebble_equivalent(&m, &ext, &EquivScope::new(1)).expect("same alphabet");
    println!("pebble equivalent: {}", verdict.holds());

    let rigid = rigid_on_visited("E", "a", "b");
    println!(
        "rigid on visited pairs: {} on the original, {} on the extension",
        eval_sentence(&m, &rigid, 0).unwrap(),
        eval_sentence(&ext, &rigid, 0).unwrap()
    );
    let fresh = &ext.domain()[2..];
    for n in 0..2 {
        let e = ext.predicate_at("E", n).unwrap();
        let on = e.iter().filter(|t| t.iter().all(|x| fresh.iter().any(|f| f == x))).count();
        println!("step {n}: {on} fresh pairs in E");
    }
}
