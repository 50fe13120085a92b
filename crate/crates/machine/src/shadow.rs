use std::collections::BTreeSet;
use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::One;
use thiserror::Error;

use crate::instruction::{Instruction, RealOp};
use crate::machine::MachineConfig;
use crate::program::Program;

/// Bounds for one polynomial: total degree, max |coefficient| and number
/// of monomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBound {
    pub deg: u64,
    pub coeff: BigInt,
    pub mono: BigInt,
}

impl PolyBound {
    fn constant(c: BigInt) -> Self {
        PolyBound {
            deg: 0,
            coeff: if c < BigInt::one() { BigInt::one() } else { c },
            mono: BigInt::one(),
        }
    }

    fn variable() -> Self {
        PolyBound {
            deg: 1,
            coeff: BigInt::one(),
            mono: BigInt::one(),
        }
    }

    /// C(deg + d, d): all monomials a (deg, d)-polynomial can have.
    fn mono_cap(deg: u64, dims: u64) -> BigInt {
        let mut acc = BigInt::one();
        for i in 1..=dims {
            acc = acc * BigInt::from(deg + i) / BigInt::from(i);
        }
        acc
    }

    /// Bounds for a product of two polynomials with these bounds.
    fn product(a: &PolyBound, b: &PolyBound, dims: u64) -> PolyBound {
        let deg = a.deg + b.deg;
        // Each product coefficient sums at most min(mono_a, mono_b) terms.
        let coeff = &a.coeff * &b.coeff * (&a.mono).min(&b.mono);
        let mono = (&a.mono * &b.mono).min(Self::mono_cap(deg, dims));
        PolyBound { deg, coeff, mono }
    }

    /// Bounds for a sum of two polynomials with these bounds.
    fn sum(a: &PolyBound, b: &PolyBound, dims: u64) -> PolyBound {
        let deg = a.deg.max(b.deg);
        let coeff = &a.coeff + &b.coeff;
        let mono = (&a.mono + &b.mono).min(Self::mono_cap(deg, dims));
        PolyBound { deg, coeff, mono }
    }

    fn join(&mut self, other: &PolyBound) -> bool {
        let mut changed = false;
        if other.deg > self.deg {
            self.deg = other.deg;
            changed = true;
        }
        if other.coeff > self.coeff {
            self.coeff = other.coeff.clone();
            changed = true;
        }
        if other.mono > self.mono {
            self.mono = other.mono.clone();
            changed = true;
        }
        changed
    }
}

/// Degree/dimension/coefficient bounds for the rational function p/q held
/// in one real register.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegShadow {
    pub num: PolyBound,
    pub den: PolyBound,
    pub vars: BTreeSet<u32>,
}

impl RegShadow {
    fn constant(c: BigInt) -> Self {
        RegShadow {
            num: PolyBound::constant(c),
            den: PolyBound::constant(BigInt::one()),
            vars: BTreeSet::new(),
        }
    }

    fn input_var(i: u32) -> Self {
        RegShadow {
            num: PolyBound::variable(),
            den: PolyBound::constant(BigInt::one()),
            vars: [i].into(),
        }
    }

    pub fn num_deg(&self) -> u64 {
        self.num.deg
    }

    pub fn den_deg(&self) -> u64 {
        self.den.deg
    }

    pub fn degree(&self) -> u64 {
        self.num.deg.max(self.den.deg)
    }

    pub fn dimension(&self) -> usize {
        self.vars.len()
    }

    pub fn max_coeff(&self) -> BigInt {
        (&self.num.coeff).max(&self.den.coeff).clone()
    }

    fn join(&mut self, other: &RegShadow) -> bool {
        let mut changed = self.num.join(&other.num);
        changed |= self.den.join(&other.den);
        if !other.vars.is_subset(&self.vars) {
            self.vars.extend(other.vars.iter().copied());
            changed = true;
        }
        changed
    }

    fn combine(op: RealOp, a: &RegShadow, b: &RegShadow) -> RegShadow {
        let mut vars = a.vars.clone();
        vars.extend(b.vars.iter().copied());
        let d = vars.len() as u64;
        let (num, den) = match op {
            // p1/q1 +- p2/q2 = (p1 q2 +- p2 q1) / (q1 q2)
            RealOp::Add | RealOp::Sub => (
                PolyBound::sum(
                    &PolyBound::product(&a.num, &b.den, d),
                    &PolyBound::product(&b.num, &a.den, d),
                    d,
                ),
                PolyBound::product(&a.den, &b.den, d),
            ),
            RealOp::Mul => (
                PolyBound::product(&a.num, &b.num, d),
                PolyBound::product(&a.den, &b.den, d),
            ),
            RealOp::Div => (
                PolyBound::product(&a.num, &b.den, d),
                PolyBound::product(&a.den, &b.num, d),
            ),
        };
        RegShadow { num, den, vars }
    }
}

/// Aggregate report: per-register shadows joined over every reachable
/// program point, plus the derived global (Delta, d, c).
#[derive(Debug, Clone)]
pub struct DegreeShadow {
    pub registers: Vec<RegShadow>,
    pub degree: u64,
    pub dimension: usize,
    pub max_coeff: BigInt,
}

impl DegreeShadow {
    /// Bit-growth bound p * Delta^2 * ceil(log d) * ceil(log c) with
    /// explicit constant 1, for a given input bit length p. The log
    /// factors are floored at 1 so the bound never degenerates to zero.
    pub fn bit_bound(&self, input_bits: u64) -> BigInt {
        let log_d = ceil_log2(&BigInt::from(self.dimension.max(1) as u64)).max(1);
        let log_c = ceil_log2(&self.max_coeff).max(1);
        BigInt::from(input_bits)
            * BigInt::from(self.degree.max(1))
            * BigInt::from(self.degree.max(1))
            * BigInt::from(log_d)
            * BigInt::from(log_c)
    }
}

/// Smallest e with 2^e >= n (0 for n <= 1).
pub fn ceil_log2(n: &BigInt) -> u64 {
    if n <= &BigInt::one() {
        return 0;
    }
    (n - BigInt::one()).bits()
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShadowError {
    #[error("program uses RSQRT; square roots are outside the degree analysis")]
    SqrtNotSupportedInShadow,
    #[error("degree analysis did not converge at line {pc} (loop grows register degrees)")]
    Divergence { pc: usize },
}

const JOIN_CAP: u32 = 256;

/// Static degree analysis: abstractly execute the program on symbolic
/// inputs (n fresh real variables, m unconstrained words), exploring both
/// sides of every branch and joining states per line until fixpoint.
pub fn shadow_execute(
    program: &Program,
    real_arity: usize,
    _word_arity: usize,
    cfg: &MachineConfig,
) -> Result<DegreeShadow, ShadowError> {
    if program.uses_sqrt() {
        return Err(ShadowError::SqrtNotSupportedInShadow);
    }

    let mem = cfg.memory_bound as usize;
    let fresh: Vec<RegShadow> = (0..mem)
        .map(|i| {
            if i < real_arity {
                RegShadow::input_var(i as u32)
            } else {
                RegShadow::constant(BigInt::one())
            }
        })
        .collect();
    // Word registers only ever contribute constants up to 2^w - 1.
    let word_const = RegShadow::constant(BigInt::from(cfg.word_mask().max(1)));

    // Entry state per line; line 1 sees the fresh inputs.
    let lines = program.len();
    let mut entry: Vec<Option<Vec<RegShadow>>> = vec![None; lines + 1];
    entry[1] = Some(fresh.clone());
    let mut joins = vec![0u32; lines + 1];
    let mut accumulated = fresh;

    let mut worklist: VecDeque<usize> = VecDeque::from([1]);
    while let Some(pc) = worklist.pop_front() {
        let state = entry[pc].clone().expect("queued lines have entry states");
        let Some(&instr) = program.line(pc) else {
            continue;
        };

        let mut next = state.clone();
        match instr {
            Instruction::RZero { dst } | Instruction::ROne { dst } => {
                next[dst as usize] = RegShadow::constant(BigInt::one());
            }
            Instruction::RConstW { dst, value } => {
                next[dst as usize] = RegShadow::constant(BigInt::from(value));
            }
            Instruction::RCastW { dst, .. } => {
                next[dst as usize] = word_const.clone();
            }
            Instruction::RMov { dst, src } => {
                next[dst as usize] = state[src as usize].clone();
            }
            Instruction::RArith { op, dst, lhs, rhs } => {
                next[dst as usize] =
                    RegShadow::combine(op, &state[lhs as usize], &state[rhs as usize]);
            }
            Instruction::RLoad { dst, .. } => {
                // Address unknown statically: join over every register.
                let mut joined = RegShadow::constant(BigInt::one());
                for shadow in &state {
                    joined.join(shadow);
                }
                next[dst as usize] = joined;
            }
            Instruction::RStore { src, .. } => {
                // Could write anywhere: weak update of every register.
                let src_shadow = state[src as usize].clone();
                for shadow in next.iter_mut() {
                    shadow.join(&src_shadow);
                }
            }
            Instruction::RSqrt { .. } => unreachable!("checked above"),
            // Word instructions never touch real-register shadows.
            _ => {}
        }

        for (acc, shadow) in accumulated.iter_mut().zip(next.iter()) {
            acc.join(shadow);
        }

        let mut successors: Vec<usize> = Vec::new();
        match instr {
            Instruction::Halt | Instruction::Accept | Instruction::Reject => {}
            Instruction::Goto { target } => successors.push(target),
            _ => {
                if let Some(target) = instr.branch_target() {
                    successors.push(target);
                }
                if pc + 1 <= lines {
                    successors.push(pc + 1);
                }
            }
        }

        for succ in successors {
            let changed = match &mut entry[succ] {
                Some(existing) => {
                    let mut any = false;
                    for (e, n) in existing.iter_mut().zip(next.iter()) {
                        any |= e.join(n);
                    }
                    any
                }
                slot @ None => {
                    *slot = Some(next.clone());
                    true
                }
            };
            if changed {
                joins[succ] += 1;
                if joins[succ] > JOIN_CAP {
                    return Err(ShadowError::Divergence { pc: succ });
                }
                if !worklist.contains(&succ) {
                    worklist.push_back(succ);
                }
            }
        }
    }

    let degree = accumulated.iter().map(RegShadow::degree).max().unwrap_or(0);
    let mut vars = BTreeSet::new();
    for s in &accumulated {
        vars.extend(s.vars.iter().copied());
    }
    let max_coeff = accumulated
        .iter()
        .map(RegShadow::max_coeff)
        .max()
        .unwrap_or_else(BigInt::one);

    Ok(DegreeShadow {
        registers: accumulated,
        degree,
        dimension: vars.len(),
        max_coeff,
    })
}
