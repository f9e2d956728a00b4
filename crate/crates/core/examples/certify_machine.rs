//! Translate a machine into a formula and check it on the canonical model.

use pebble_ltl::minsky::parse_machine;
use pebble_ltl::translate::{certify, machine_rules, translate_machine};

fn main() {
    let m = parse_machine(
        "1: ADD 1 TO S1; GOTO 2\n\
         2: ADD 1 TO S1; GOTO 3\n\
         3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 3 ELSE GOTO 4\n\
         4: STOP",
    )
    .expect("valid machine");
    let f = translate_machine(&m);
    println!("translation: {} rules, size {}", machine_rules(&m).len(), f.size());
    let report = certify(&m, 12).expect("horizon at least 2");
    print!("{report}");
    println!("all checks pass: {}", report.all_ok());
}
