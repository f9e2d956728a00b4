//! Check the forwarding-pointer protocol on a six-step run and a mutant.

use pebble_ltl::eval::eval_sentence;
use pebble_ltl::model::{ModelBuilder, TraceModel};
use pebble_ltl::props::forwarding_protocol;

fn scenario(message: [&str; 6]) -> TraceModel {
    ModelBuilder::new(["h0", "h1", "h2", "h3", "h4", "h5"])
        .constant("s", ["h0", "h1", "h1", "h1", "h1", "h1"])
        .constant("r", ["h4", "h1", "h2", "h3", "h5", "h5"])
        .constant("m", message)
        .build()
        .expect("valid model")
}

fn main() {
    let protocol = forwarding_protocol("s", "r", "m").expect("distinct constants");
    let runs = [
        ("follows r", scenario(["h0", "h1", "h2", "h3", "h5", "h5"])),
        ("jumps at step 3", scenario(["h0", "h1", "h2", "h4", "h5", "h5"])),
    ];
    for (name, model) in &runs {
        let parts: Vec<String> = protocol
            .conjuncts()
            .into_iter()
            .map(|c| eval_sentence(model, c, 0).unwrap().to_string())
            .collect();
        println!(
            "{name}: {} (conjuncts: {})",
            eval_sentence(model, &protocol, 0).unwrap(),
            parts.join(", ")
        );
    }
}
