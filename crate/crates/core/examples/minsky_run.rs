//! Parse a two-counter machine and trace its run.

use pebble_ltl::minsky::{parse_machine, run};

const MULTIPLY: &str = "\
1: ADD 1 TO S1; GOTO 2
2: ADD 1 TO S1; GOTO 3
3: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 4 ELSE GOTO 6
4: ADD 1 TO S2; GOTO 5
5: ADD 1 TO S2; GOTO 3
6: STOP
";

fn main() {
    let m = parse_machine(MULTIPLY).expect("valid machine");
    print!("{m}");
    let r = run(&m, 50);
    println!("step label S1 S2");
    for (j, s) in r.states.iter().enumerate() {
        println!("{j:>4} {:>5} {:>2} {:>2}", s.label, s.counters[0], s.counters[1]);
    }
    println!("halted: {}", r.halted);
}
