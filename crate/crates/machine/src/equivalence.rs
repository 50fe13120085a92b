use rram_exact::{DyadicGrid, Rational};

use crate::machine::{execute, ExecutionTrace, MachineConfig, MachineError, MachineInput, Outcome};
use crate::program::Program;

/// The ordered branch outcomes of a run, one entry per executed comparison.
pub fn comparison_signature(trace: &ExecutionTrace) -> Vec<bool> {
    trace.steps.iter().filter_map(|s| s.branch).collect()
}

/// Input equivalence: two inputs are equivalent for a program when every
/// comparison instruction resolves the same way, which forces an identical
/// program-counter path.
pub fn equivalent(
    program: &Program,
    a: &MachineInput,
    b: &MachineInput,
    cfg: &MachineConfig,
) -> Result<bool, MachineError> {
    let run_a = execute(program, a, cfg)?;
    if let Outcome::Faulted(f) = run_a.outcome {
        return Err(MachineError::Fault(f));
    }
    let run_b = execute(program, b, cfg)?;
    if let Outcome::Faulted(f) = run_b.outcome {
        return Err(MachineError::Fault(f));
    }
    Ok(comparison_signature(&run_a.trace) == comparison_signature(&run_b.trace))
}

/// Smallest word size w' <= wmax whose grid-snapped input is equivalent to
/// the original, or `None` when no such w' exists.
///
/// This is an upper-bound proxy for the input bit complexity: the true
/// measure minimizes over all equivalent rational inputs, which is not
/// computable here; snapping gives the bound the analysis actually uses.
/// The scan is linear because equivalence is not monotone in w'.
pub fn snapped_bit_complexity(
    program: &Program,
    reals: &[Rational],
    words: &[u64],
    cfg: &MachineConfig,
    wmax: u32,
) -> Result<Option<u32>, MachineError> {
    let base_input = MachineInput::new(reals.to_vec(), words.to_vec());
    let base = execute(program, &base_input, cfg)?;
    if let Outcome::Faulted(f) = base.outcome {
        return Err(MachineError::Fault(f));
    }
    let base_sig = comparison_signature(&base.trace);

    for w in 1..=wmax {
        let grid = DyadicGrid::new(w);
        let snapped: Vec<Rational> = reals.iter().map(|x| grid.snap_lattice(x)).collect();
        let input = MachineInput::new(snapped, words.to_vec());
        let run = execute(program, &input, cfg)?;
        // A snapped run that faults is simply not equivalent at this w'.
        if matches!(run.outcome, Outcome::Faulted(_)) {
            continue;
        }
        if comparison_signature(&run.trace) == base_sig {
            return Ok(Some(w));
        }
    }
    Ok(None)
}
