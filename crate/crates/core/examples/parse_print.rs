//! Parse formulas, check them against an alphabet, and print them back.

use pebble_ltl::parser::{parse_formula, parse_formula_inferred, print_formula};
use pebble_ltl::syntax::{well_formed_sentence, Alphabet};

fn main() {
    let text = "G <x. X F <y. ~(x = y)>(d)>(d)";
    let (f, inferred) = parse_formula_inferred(text).expect("valid formula");
    println!("input:     {text}");
    println!("printed:   {}", print_formula(&f));
    println!("constants: {:?}", inferred.consts);
    println!("depth {}, size {}", f.depth(), f.size());

    let alphabet = Alphabet::new().with_consts(["a", "b"]).with_preds([("E", 2)]);
    let sugar = parse_formula("@Same(a, b) & E(a, b)", &alphabet);
    match sugar {
        Ok(f) => println!("parsed:    {f}"),
        Err(e) => println!("rejected:  {e}"),
    }
    let g = parse_formula("<x. <y. E(x, y)>(b)>(a)", &alphabet).expect("valid formula");
    println!("sentence:  {} ({:?})", g, well_formed_sentence(&g, &alphabet).is_ok());
}
