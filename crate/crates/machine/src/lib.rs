//! The real RAM: a word RAM extended with exact real-valued registers.
//!
//! A machine has two register arrays, `W` (words, integers mod 2^w) and `R`
//! (exact rationals), a program counter starting at line 1, and the fixed
//! instruction set listed in [`Instruction`]. Execution is exact: word
//! arithmetic reduces mod 2^w, real arithmetic runs on arbitrary-precision
//! rationals, and every comparison outcome is recorded in the trace.

mod equivalence;
mod instruction;
mod machine;
mod program;
mod shadow;

pub use equivalence::{comparison_signature, equivalent, snapped_bit_complexity};
pub use instruction::{Instruction, RealOp, WordOp};
pub use machine::{
    execute, word_arith_reference, ExecutionTrace, MachineConfig, MachineError, MachineFault,
    MachineInput, MachineState, Outcome, RegisterWrite, RunOutput, TraceStep,
};
pub use program::{parse_program, ParseError, Program};
pub use shadow::{shadow_execute, DegreeShadow, RegShadow, ShadowError};
