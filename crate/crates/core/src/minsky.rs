//! Two-counter Minsky machines.
//!
//! Machine text, one labelled instruction per line (`#` starts a comment):
//!
//! ```text
//! 1: ADD 1 TO S1; GOTO 2
//! 2: IF S1 != 0 THEN SUB 1 FROM S1; GOTO 2 ELSE GOTO 3
//! 3: STOP
//! ```
//!
//! Labels run from 1 to L and the only `STOP` is at L. `SUBTRACT` is
//! accepted in place of `SUB`.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use regex::Regex;
use thiserror::Error;

pub type Label = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Counter {
    S1,
    S2,
}

impl Counter {
    /// 0 for `S1`, 1 for `S2`.
    pub fn index(self) -> usize {
        match self {
            Counter::S1 => 0,
            Counter::S2 => 1,
        }
    }

    pub fn other(self) -> Counter {
        match self {
            Counter::S1 => Counter::S2,
            Counter::S2 => Counter::S1,
        }
    }

    /// The `k` in `S_k`.
    pub fn number(self) -> usize {
        self.index() + 1
    }
}

impl fmt::Display for Counter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "S{}", self.number())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Instruction {
    Add { counter: Counter, goto: Label },
    SubOrJump { counter: Counter, nonzero: Label, zero: Label },
    Stop,
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Add { counter, goto } => write!(f, "ADD 1 TO {counter}; GOTO {goto}"),
            Instruction::SubOrJump { counter, nonzero, zero } => write!(
                f,
                "IF {counter} != 0 THEN SUB 1 FROM {counter}; GOTO {nonzero} ELSE GOTO {zero}"
            ),
            Instruction::Stop => write!(f, "STOP"),
        }
    }
}

/// A validated machine; `instructions[l - 1]` is the instruction at label `l`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinskyMachine {
    instructions: Vec<Instruction>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MachineState {
    pub label: Label,
    pub counters: [u64; 2],
}

impl MachineState {
    pub fn new(label: Label, s1: u64, s2: u64) -> Self {
        MachineState {
            label,
            counters: [s1, s2],
        }
    }

    pub fn counter(&self, k: Counter) -> u64 {
        self.counters[k.index()]
    }
}

impl fmt::Display for MachineState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.label, self.counters[0], self.counters[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    Next(MachineState),
    Halted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Run {
    pub states: Vec<MachineState>,
    pub halted: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MachineError {
    #[error("line {line}: cannot read instruction {text:?}")]
    Syntax { line: usize, text: String },
    #[error("line {line}: IF tests {tested} but subtracts from {changed}")]
    CounterMismatch { line: usize, tested: Counter, changed: Counter },
    #[error("label {0} defined twice")]
    DuplicateLabel(Label),
    #[error("labels must be 1..{max}; label {missing} is missing")]
    MissingLabel { missing: Label, max: Label },
    #[error("label 0 is not allowed")]
    ZeroLabel,
    #[error("instruction {label} jumps to {target}, outside 1..{max}")]
    BadTarget { label: Label, target: Label, max: Label },
    #[error("machine has no STOP instruction")]
    NoStop,
    #[error("STOP must be the last instruction only; found STOP at label {0}")]
    MisplacedStop(Label),
    #[error("machine has no instructions")]
    Empty,
}

fn instruction_re() -> &'static Regex {
    static RE: OnceLock<Regex> = OnceLock::new();
    RE.get_or_init(|| {
        Regex::new(concat!(
            r"^(\d+)\s*:\s*(?:",
            r"ADD\s+1\s+TO\s+S([12])\s*;\s*GOTO\s+(\d+)",
            r"|IF\s+S([12])\s*!=\s*0\s+THEN\s+SUB(?:TRACT)?\s+1\s+FROM\s+S([12])\s*;\s*GOTO\s+(\d+)\s+ELSE\s+GOTO\s+(\d+)",
            r"|(STOP)",
            r")\s*$"
        ))
        .unwrap()
    })
}

fn counter(s: &str) -> Counter {
    if s == "1" {
        Counter::S1
    } else {
        Counter::S2
    }
}

fn label(s: &str, line: usize) -> Result<Label, MachineError> {
    s.parse().map_err(|_| MachineError::Syntax {
        line,
        text: s.to_string(),
    })
}

impl MinskyMachine {
    /// Validates an instruction list given in label order.
    pub fn new(instructions: Vec<Instruction>) -> Result<Self, MachineError> {
        let max = instructions.len();
        if max == 0 {
            return Err(MachineError::Empty);
        }
        for (i, ins) in instructions.iter().enumerate() {
            let l = i + 1;
            let targets = match *ins {
                Instruction::Add { goto, .. } => vec![goto],
                Instruction::SubOrJump { nonzero, zero, .. } => vec![nonzero, zero],
                Instruction::Stop if l != max => return Err(MachineError::MisplacedStop(l)),
                Instruction::Stop => vec![],
            };
            if let Some(&t) = targets.iter().find(|&&t| t == 0 || t > max) {
                return Err(MachineError::BadTarget {
                    label: l,
                    target: t,
                    max,
                });
            }
        }
        if instructions[max - 1] != Instruction::Stop {
            return Err(MachineError::NoStop);
        }
        Ok(MinskyMachine { instructions })
    }

    /// Number of instructions, L.
    pub fn len(&self) -> Label {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn stop_label(&self) -> Label {
        self.len()
    }

    /// Instruction at label `l` (1-based).
    pub fn instruction(&self, l: Label) -> Option<&Instruction> {
        l.checked_sub(1).and_then(|i| self.instructions.get(i))
    }

    /// `(label, instruction)` pairs in label order.
    pub fn instructions(&self) -> impl Iterator<Item = (Label, &Instruction)> {
        self.instructions.iter().enumerate().map(|(i, ins)| (i + 1, ins))
    }
}

impl fmt::Display for MinskyMachine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (l, ins) in self.instructions() {
            writeln!(f, "{l}: {ins}")?;
        }
        Ok(())
    }
}

pub fn parse_machine(text: &str) -> Result<MinskyMachine, MachineError> {
    let mut by_label: BTreeMap<Label, Instruction> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let caps = instruction_re().captures(content).ok_or_else(|| MachineError::Syntax {
            line,
            text: content.to_string(),
        })?;
        let l = label(&caps[1], line)?;
        if l == 0 {
            return Err(MachineError::ZeroLabel);
        }
        let ins = if let Some(k) = caps.get(2) {
            Instruction::Add {
                counter: counter(k.as_str()),
                goto: label(&caps[3], line)?,
            }
        } else if let Some(k) = caps.get(4) {
            let tested = counter(k.as_str());
            let changed = counter(&caps[5]);
            if tested != changed {
                return Err(MachineError::CounterMismatch { line, tested, changed });
            }
            Instruction::SubOrJump {
                counter: tested,
                nonzero: label(&caps[6], line)?,
                zero: label(&caps[7], line)?,
            }
        } else {
            Instruction::Stop
        };
        if by_label.insert(l, ins).is_some() {
            return Err(MachineError::DuplicateLabel(l));
        }
    }
    let max = by_label.keys().next_back().copied().unwrap_or(0);
    if let Some(missing) = (1..=max).find(|l| !by_label.contains_key(l)) {
        return Err(MachineError::MissingLabel { missing, max });
    }
    MinskyMachine::new(by_label.into_values().collect())
}

/// Successor of `s`, or `Halted` at the STOP label.
pub fn step(m: &MinskyMachine, s: MachineState) -> Step {
    let mut next = s;
    match m.instruction(s.label) {
        Some(Instruction::Add { counter, goto }) => {
            next.counters[counter.index()] += 1;
            next.label = *goto;
        }
        Some(Instruction::SubOrJump { counter, nonzero, zero }) => {
            let c = &mut next.counters[counter.index()];
            if *c == 0 {
                next.label = *zero;
            } else {
                *c -= 1;
                next.label = *nonzero;
            }
        }
        Some(Instruction::Stop) | None => return Step::Halted,
    }
    Step::Next(next)
}

/// At most `max_steps` states of the run from `(1, 0, 0)`.
pub fn run(m: &MinskyMachine, max_steps: usize) -> Run {
    run_from(m, MachineState::new(1, 0, 0), max_steps)
}

fn run_from(m: &MinskyMachine, start: MachineState, max_steps: usize) -> Run {
    let mut states = vec![start];
    loop {
        let last = *states.last().unwrap();
        match step(m, last) {
            Step::Halted => return Run { states, halted: true },
            Step::Next(_) if states.len() >= max_steps => return Run { states, halted: false },
            Step::Next(s) => states.push(s),
        }
    }
}

#[cfg(test)]
pub(crate) fn run_with_counters(m: &MinskyMachine, s1: u64, s2: u64, max_steps: usize) -> Run {
    run_from(m, MachineState::new(1, s1, s2), max_steps)
}
