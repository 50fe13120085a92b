use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use rram_exact::{rational_sqrt_exact, Rational};
use thiserror::Error;

use crate::instruction::{Instruction, RealOp, WordOp};
use crate::program::Program;

pub const DEFAULT_FUEL: u64 = 1_000_000;
pub const MEMORY_CAP: u64 = 1 << 16;

/// Word size, step budget and addressable-register bound of one machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineConfig {
    pub word_size: u32,
    pub fuel: u64,
    pub memory_bound: u64,
}

impl MachineConfig {
    /// Memory defaults to min(2^w, 2^16) registers per array.
    pub fn new(word_size: u32) -> Self {
        assert!(
            (1..=63).contains(&word_size),
            "word size must be in 1..=63"
        );
        let memory_bound = if word_size >= 16 {
            MEMORY_CAP
        } else {
            1u64 << word_size
        };
        MachineConfig {
            word_size,
            fuel: DEFAULT_FUEL,
            memory_bound,
        }
    }

    pub fn with_fuel(mut self, fuel: u64) -> Self {
        assert!(fuel >= 1);
        self.fuel = fuel;
        self
    }

    pub fn with_memory_bound(mut self, bound: u64) -> Self {
        assert!(bound >= 1 && bound <= (1u64 << self.word_size).min(MEMORY_CAP));
        self.memory_bound = bound;
        self
    }

    pub fn word_mask(&self) -> u64 {
        (1u64 << self.word_size) - 1
    }

    pub fn modulus(&self) -> u128 {
        1u128 << self.word_size
    }
}

/// Program input: `n` reals into R[0..n) and `m` words into W[0..m).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MachineInput {
    pub reals: Vec<Rational>,
    pub words: Vec<u64>,
}

impl MachineInput {
    pub fn new(reals: Vec<Rational>, words: Vec<u64>) -> Self {
        MachineInput { reals, words }
    }

    pub fn arity(&self) -> (usize, usize) {
        (self.reals.len(), self.words.len())
    }
}

/// Full register file plus program counter; pc 0 means halted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MachineState {
    pub words: Vec<u64>,
    pub reals: Vec<Rational>,
    pub pc: usize,
}

impl MachineState {
    pub fn initial(input: &MachineInput, cfg: &MachineConfig) -> Self {
        let mem = cfg.memory_bound as usize;
        let mut words = vec![0u64; mem];
        let mut reals = vec![Rational::zero(); mem];
        for (i, v) in input.words.iter().enumerate() {
            words[i] = *v;
        }
        for (i, v) in input.reals.iter().enumerate() {
            reals[i] = v.clone();
        }
        MachineState {
            words,
            reals,
            pc: 1,
        }
    }
}

/// Runtime faults; these terminate the run with `Outcome::Faulted`.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineFault {
    #[error("division by zero at step {step}, line {pc}")]
    DivisionByZero { step: u64, pc: usize },
    #[error("address {addr} out of range (memory bound {bound}) at step {step}, line {pc}")]
    AddressOutOfRange {
        addr: u64,
        bound: u64,
        step: u64,
        pc: usize,
    },
    #[error("operand of RSQRT at step {step}, line {pc} is not a square of a rational")]
    UnsupportedExactRoot { step: u64, pc: usize },
}

/// Pre-condition violations detected before any step runs.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MachineError {
    #[error("invalid program: {0}")]
    InvalidProgram(String),
    #[error("input arity ({reals} reals, {words} words) exceeds memory bound {bound}")]
    InputTooLarge {
        reals: usize,
        words: usize,
        bound: u64,
    },
    #[error("trans-dichotomy violated: word size {w} too small for {n} input values")]
    TransDichotomy { w: u32, n: usize },
    #[error("word input {value} does not fit word size {w}")]
    WordInputTooWide { value: u64, w: u32 },
    #[error("execution faulted: {0}")]
    Fault(#[from] MachineFault),
}

/// How a run ended.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Accepted,
    Rejected,
    Halted,
    FuelExhausted,
    Faulted(MachineFault),
}

impl Outcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, Outcome::Accepted)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Accepted => write!(f, "ACCEPT"),
            Outcome::Rejected => write!(f, "REJECT"),
            Outcome::Halted => write!(f, "HALT"),
            Outcome::FuelExhausted => write!(f, "FUEL-EXHAUSTED"),
            Outcome::Faulted(fault) => write!(f, "FAULT({fault})"),
        }
    }
}

/// A register mutation performed by one step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RegisterWrite {
    Word { addr: u64, value: u64 },
    Real { addr: u64, value: Rational },
}

/// One executed step: time, line, instruction, branch outcome if the
/// instruction was a comparison, and the registers it wrote.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub t: u64,
    pub pc: usize,
    pub instruction: Instruction,
    pub branch: Option<bool>,
    pub writes: Vec<RegisterWrite>,
}

/// The complete execution history of one run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub steps: Vec<TraceStep>,
    pub outcome: Outcome,
}

impl ExecutionTrace {
    /// Line-oriented export: `t pc opcode [branch=0|1]`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for step in &self.steps {
            out.push_str(&format!("{} {} {}", step.t, step.pc, step.instruction.opcode()));
            if let Some(b) = step.branch {
                out.push_str(&format!(" branch={}", u8::from(b)));
            }
            out.push('\n');
        }
        out
    }
}

/// Result of a completed (possibly faulted) run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutput {
    pub outcome: Outcome,
    pub trace: ExecutionTrace,
    pub final_state: MachineState,
}

fn validate(program: &Program, input: &MachineInput, cfg: &MachineConfig) -> Result<(), MachineError> {
    let (n, m) = input.arity();
    if n.max(m) as u64 > cfg.memory_bound {
        return Err(MachineError::InputTooLarge {
            reals: n,
            words: m,
            bound: cfg.memory_bound,
        });
    }
    // w >= ceil(log2(n + m)): direct constant-time access to the input.
    let total = (n + m) as u64;
    if total > (1u64 << cfg.word_size) {
        return Err(MachineError::TransDichotomy {
            w: cfg.word_size,
            n: n + m,
        });
    }
    for &v in &input.words {
        if v > cfg.word_mask() {
            return Err(MachineError::WordInputTooWide {
                value: v,
                w: cfg.word_size,
            });
        }
    }
    for (idx, instr) in program.instructions().iter().enumerate() {
        let line = idx + 1;
        let check_addr = |a: u64| -> Result<(), MachineError> {
            if a >= cfg.memory_bound {
                Err(MachineError::InvalidProgram(format!(
                    "line {line}: address {a} outside memory bound {}",
                    cfg.memory_bound
                )))
            } else {
                Ok(())
            }
        };
        match *instr {
            Instruction::WConst { dst, value } => {
                check_addr(dst)?;
                if value > cfg.word_mask() {
                    return Err(MachineError::InvalidProgram(format!(
                        "line {line}: constant {value} does not fit word size {}",
                        cfg.word_size
                    )));
                }
            }
            Instruction::RConstW { dst, value } => {
                check_addr(dst)?;
                if value > cfg.word_mask() {
                    return Err(MachineError::InvalidProgram(format!(
                        "line {line}: constant {value} does not fit word size {}",
                        cfg.word_size
                    )));
                }
            }
            Instruction::WMov { dst, src }
            | Instruction::WStore {
                addr_of: dst,
                src,
            }
            | Instruction::WLoad {
                dst,
                addr_of: src,
            }
            | Instruction::RCastW { dst, src }
            | Instruction::RMov { dst, src }
            | Instruction::RStore {
                addr_of: dst,
                src,
            }
            | Instruction::RLoad {
                dst,
                addr_of: src,
            }
            | Instruction::RSqrt { dst, src } => {
                check_addr(dst)?;
                check_addr(src)?;
            }
            Instruction::WArith { dst, lhs, rhs, .. }
            | Instruction::RArith { dst, lhs, rhs, .. } => {
                check_addr(dst)?;
                check_addr(lhs)?;
                check_addr(rhs)?;
            }
            Instruction::RZero { dst } | Instruction::ROne { dst } => check_addr(dst)?,
            Instruction::WJeq { lhs, rhs, .. } | Instruction::WJlt { lhs, rhs, .. } => {
                check_addr(lhs)?;
                check_addr(rhs)?;
            }
            Instruction::RJz { reg, .. } | Instruction::RJpos { reg, .. } => check_addr(reg)?,
            Instruction::Goto { .. }
            | Instruction::Halt
            | Instruction::Accept
            | Instruction::Reject => {}
        }
    }
    Ok(())
}

fn word_arith(
    op: WordOp,
    y: u64,
    z: u64,
    cfg: &MachineConfig,
    step: u64,
    pc: usize,
) -> Result<u64, MachineFault> {
    let modulus = cfg.modulus();
    let (y, z) = (y as u128, z as u128);
    let result = match op {
        WordOp::Add => (y + z) % modulus,
        WordOp::Sub => (y + modulus - z) % modulus,
        WordOp::MulLo => (y * z) % modulus,
        WordOp::MulHi => (y * z) / modulus,
        WordOp::Div => {
            if z == 0 {
                return Err(MachineFault::DivisionByZero { step, pc });
            }
            y / z
        }
        WordOp::Mod => {
            if z == 0 {
                return Err(MachineFault::DivisionByZero { step, pc });
            }
            y % z
        }
        WordOp::Nand => !(y & z) & (modulus - 1),
    };
    Ok(result as u64)
}

/// Run a program on an input with exact semantics.
///
/// Runtime faults become `Outcome::Faulted` so callers can census them;
/// only pre-condition violations return `Err`.
pub fn execute(
    program: &Program,
    input: &MachineInput,
    cfg: &MachineConfig,
) -> Result<RunOutput, MachineError> {
    validate(program, input, cfg)?;

    let mut state = MachineState::initial(input, cfg);
    let mut steps: Vec<TraceStep> = Vec::new();
    let bound = cfg.memory_bound;

    let outcome = 'run: {
        for t in 1..=cfg.fuel {
            let pc = state.pc;
            let Some(&instr) = program.line(pc) else {
                // pc ran past the last line: treated as a clean halt.
                state.pc = 0;
                break 'run Outcome::Halted;
            };

            let mut branch = None;
            let mut writes = Vec::new();
            let mut next_pc = pc + 1;

            macro_rules! fault {
                ($f:expr) => {{
                    steps.push(TraceStep {
                        t,
                        pc,
                        instruction: instr,
                        branch: None,
                        writes: Vec::new(),
                    });
                    break 'run Outcome::Faulted($f);
                }};
            }
            macro_rules! checked_addr {
                ($a:expr) => {{
                    let a = $a;
                    if a >= bound {
                        fault!(MachineFault::AddressOutOfRange {
                            addr: a,
                            bound,
                            step: t,
                            pc,
                        });
                    }
                    a as usize
                }};
            }

            match instr {
                Instruction::WConst { dst, value } => {
                    state.words[dst as usize] = value;
                    writes.push(RegisterWrite::Word { addr: dst, value });
                }
                Instruction::WMov { dst, src } => {
                    let value = state.words[src as usize];
                    state.words[dst as usize] = value;
                    writes.push(RegisterWrite::Word { addr: dst, value });
                }
                Instruction::WStore { addr_of, src } => {
                    let addr = checked_addr!(state.words[addr_of as usize]);
                    let value = state.words[src as usize];
                    state.words[addr] = value;
                    writes.push(RegisterWrite::Word {
                        addr: addr as u64,
                        value,
                    });
                }
                Instruction::WLoad { dst, addr_of } => {
                    let addr = checked_addr!(state.words[addr_of as usize]);
                    let value = state.words[addr];
                    state.words[dst as usize] = value;
                    writes.push(RegisterWrite::Word { addr: dst, value });
                }
                Instruction::WArith { op, dst, lhs, rhs } => {
                    let y = state.words[lhs as usize];
                    let z = state.words[rhs as usize];
                    match word_arith(op, y, z, cfg, t, pc) {
                        Ok(value) => {
                            state.words[dst as usize] = value;
                            writes.push(RegisterWrite::Word { addr: dst, value });
                        }
                        Err(f) => fault!(f),
                    }
                }
                Instruction::RZero { dst } => {
                    state.reals[dst as usize] = Rational::zero();
                    writes.push(RegisterWrite::Real {
                        addr: dst,
                        value: Rational::zero(),
                    });
                }
                Instruction::ROne { dst } => {
                    let value = Rational::from(1i64);
                    state.reals[dst as usize] = value.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value });
                }
                Instruction::RConstW { dst, value } => {
                    let v = Rational::from(value);
                    state.reals[dst as usize] = v.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value: v });
                }
                Instruction::RCastW { dst, src } => {
                    let v = Rational::from(state.words[src as usize]);
                    state.reals[dst as usize] = v.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value: v });
                }
                Instruction::RMov { dst, src } => {
                    let v = state.reals[src as usize].clone();
                    state.reals[dst as usize] = v.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value: v });
                }
                Instruction::RStore { addr_of, src } => {
                    let addr = checked_addr!(state.words[addr_of as usize]);
                    let v = state.reals[src as usize].clone();
                    state.reals[addr] = v.clone();
                    writes.push(RegisterWrite::Real {
                        addr: addr as u64,
                        value: v,
                    });
                }
                Instruction::RLoad { dst, addr_of } => {
                    let addr = checked_addr!(state.words[addr_of as usize]);
                    let v = state.reals[addr].clone();
                    state.reals[dst as usize] = v.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value: v });
                }
                Instruction::RArith { op, dst, lhs, rhs } => {
                    let y = &state.reals[lhs as usize];
                    let z = &state.reals[rhs as usize];
                    let value = match op {
                        RealOp::Add => y + z,
                        RealOp::Sub => y - z,
                        RealOp::Mul => y * z,
                        RealOp::Div => {
                            if z.is_zero() {
                                fault!(MachineFault::DivisionByZero { step: t, pc });
                            }
                            y / z
                        }
                    };
                    state.reals[dst as usize] = value.clone();
                    writes.push(RegisterWrite::Real { addr: dst, value });
                }
                Instruction::RSqrt { dst, src } => {
                    let y = &state.reals[src as usize];
                    match rational_sqrt_exact(y) {
                        Some(root) => {
                            state.reals[dst as usize] = root.clone();
                            writes.push(RegisterWrite::Real {
                                addr: dst,
                                value: root,
                            });
                        }
                        None => fault!(MachineFault::UnsupportedExactRoot { step: t, pc }),
                    }
                }
                Instruction::WJeq { lhs, rhs, target } => {
                    let taken = state.words[lhs as usize] == state.words[rhs as usize];
                    branch = Some(taken);
                    if taken {
                        next_pc = target;
                    }
                }
                Instruction::WJlt { lhs, rhs, target } => {
                    let taken = state.words[lhs as usize] < state.words[rhs as usize];
                    branch = Some(taken);
                    if taken {
                        next_pc = target;
                    }
                }
                Instruction::RJz { reg, target } => {
                    let taken = state.reals[reg as usize].is_zero();
                    branch = Some(taken);
                    if taken {
                        next_pc = target;
                    }
                }
                Instruction::RJpos { reg, target } => {
                    let taken = state.reals[reg as usize].signum() > 0;
                    branch = Some(taken);
                    if taken {
                        next_pc = target;
                    }
                }
                Instruction::Goto { target } => {
                    next_pc = target;
                }
                Instruction::Halt => {
                    steps.push(TraceStep {
                        t,
                        pc,
                        instruction: instr,
                        branch: None,
                        writes,
                    });
                    state.pc = 0;
                    break 'run Outcome::Halted;
                }
                Instruction::Accept => {
                    steps.push(TraceStep {
                        t,
                        pc,
                        instruction: instr,
                        branch: None,
                        writes,
                    });
                    state.pc = 0;
                    break 'run Outcome::Accepted;
                }
                Instruction::Reject => {
                    steps.push(TraceStep {
                        t,
                        pc,
                        instruction: instr,
                        branch: None,
                        writes,
                    });
                    state.pc = 0;
                    break 'run Outcome::Rejected;
                }
            }

            steps.push(TraceStep {
                t,
                pc,
                instruction: instr,
                branch,
                writes,
            });
            state.pc = next_pc;
        }
        Outcome::FuelExhausted
    };

    Ok(RunOutput {
        outcome: outcome.clone(),
        trace: ExecutionTrace { steps, outcome },
        final_state: state,
    })
}

/// Word arithmetic on unbounded integers, reduced mod 2^w.
///
/// Independent reference route for the differential tests; shares nothing
/// with `word_arith` above except the operation labels.
pub fn word_arith_reference(op: WordOp, y: u64, z: u64, w: u32) -> Option<u64> {
    let modulus = BigInt::from(1u64) << w;
    let (y, z) = (BigInt::from(y), BigInt::from(z));
    let result: BigInt = match op {
        WordOp::Add => (y + z) % &modulus,
        WordOp::Sub => ((y - z) % &modulus + &modulus) % &modulus,
        WordOp::MulLo => (y * z) % &modulus,
        WordOp::MulHi => (y * z) / &modulus,
        WordOp::Div => {
            if z.is_zero() {
                return None;
            }
            y / z
        }
        WordOp::Mod => {
            if z.is_zero() {
                return None;
            }
            y % z
        }
        WordOp::Nand => {
            let mut bits = BigInt::zero();
            for b in 0..w {
                let yb = (&y >> b) & BigInt::from(1);
                let zb = (&z >> b) & BigInt::from(1);
                let nand = BigInt::from(1) - yb * zb;
                bits += nand << b;
            }
            bits
        }
    };
    let (_, digits) = result.to_u64_digits();
    Some(digits.first().copied().unwrap_or(0))
}
