use std::fmt;

/// Word-register arithmetic and boolean operations, all mod 2^w.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WordOp {
    /// x <- (y + z) mod 2^w
    Add,
    /// x <- (y - z) mod 2^w
    Sub,
    /// lower multiplication: x <- (y * z) mod 2^w
    MulLo,
    /// upper multiplication: x <- floor(y * z / 2^w)
    MulHi,
    /// rounded division: x <- floor(y / z), z != 0
    Div,
    /// remainder: x <- y mod z, z != 0
    Mod,
    /// bitwise nand on all w bits
    Nand,
}

impl WordOp {
    pub fn mnemonic(self) -> &'static str {
        match self {
            WordOp::Add => "WADD",
            WordOp::Sub => "WSUB",
            WordOp::MulLo => "WMULLO",
            WordOp::MulHi => "WMULHI",
            WordOp::Div => "WDIV",
            WordOp::Mod => "WMOD",
            WordOp::Nand => "WNAND",
        }
    }

    pub const ALL: [WordOp; 7] = [
        WordOp::Add,
        WordOp::Sub,
        WordOp::MulLo,
        WordOp::MulHi,
        WordOp::Div,
        WordOp::Mod,
        WordOp::Nand,
    ];
}

/// Exact real-register arithmetic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RealOp {
    Add,
    Sub,
    Mul,
    /// exact division, z != 0
    Div,
}

impl RealOp {
    pub fn mnemonic(self) -> &'static str {
        match self {
            RealOp::Add => "RADD",
            RealOp::Sub => "RSUB",
            RealOp::Mul => "RMUL",
            RealOp::Div => "RDIV",
        }
    }
}

/// One line of a real RAM program.
///
/// Addresses `i, j, k` are constant words baked into the instruction;
/// branch targets are 1-based line numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    /// W[i] <- c
    WConst { dst: u64, value: u64 },
    /// W[i] <- W[j]
    WMov { dst: u64, src: u64 },
    /// W[W[i]] <- W[j]
    WStore { addr_of: u64, src: u64 },
    /// W[i] <- W[W[j]]
    WLoad { dst: u64, addr_of: u64 },
    /// W[i] <- W[j] op W[k]
    WArith {
        op: WordOp,
        dst: u64,
        lhs: u64,
        rhs: u64,
    },
    /// R[i] <- 0
    RZero { dst: u64 },
    /// R[i] <- 1
    ROne { dst: u64 },
    /// R[i] <- c (cast of a constant word)
    RConstW { dst: u64, value: u64 },
    /// R[i] <- W[j] (cast)
    RCastW { dst: u64, src: u64 },
    /// R[i] <- R[j]
    RMov { dst: u64, src: u64 },
    /// R[W[i]] <- R[j]
    RStore { addr_of: u64, src: u64 },
    /// R[i] <- R[W[j]]
    RLoad { dst: u64, addr_of: u64 },
    /// R[i] <- R[j] op R[k]
    RArith {
        op: RealOp,
        dst: u64,
        lhs: u64,
        rhs: u64,
    },
    /// R[i] <- +sqrt(R[j]); only exact rational roots are supported
    RSqrt { dst: u64, src: u64 },
    /// if W[i] = W[j] goto target
    WJeq { lhs: u64, rhs: u64, target: usize },
    /// if W[i] < W[j] goto target
    WJlt { lhs: u64, rhs: u64, target: usize },
    /// if R[i] = 0 goto target
    RJz { reg: u64, target: usize },
    /// if R[i] > 0 goto target
    RJpos { reg: u64, target: usize },
    Goto { target: usize },
    Halt,
    Accept,
    Reject,
}

impl Instruction {
    pub fn is_comparison(&self) -> bool {
        matches!(
            self,
            Instruction::WJeq { .. }
                | Instruction::WJlt { .. }
                | Instruction::RJz { .. }
                | Instruction::RJpos { .. }
        )
    }

    pub fn branch_target(&self) -> Option<usize> {
        match self {
            Instruction::WJeq { target, .. }
            | Instruction::WJlt { target, .. }
            | Instruction::RJz { target, .. }
            | Instruction::RJpos { target, .. }
            | Instruction::Goto { target } => Some(*target),
            _ => None,
        }
    }

    pub fn opcode(&self) -> &'static str {
        match self {
            Instruction::WConst { .. } => "WCONST",
            Instruction::WMov { .. } => "WMOV",
            Instruction::WStore { .. } => "WSTORE",
            Instruction::WLoad { .. } => "WLOAD",
            Instruction::WArith { op, .. } => op.mnemonic(),
            Instruction::RZero { .. } => "RZERO",
            Instruction::ROne { .. } => "RONE",
            Instruction::RConstW { .. } => "RCONSTW",
            Instruction::RCastW { .. } => "RCASTW",
            Instruction::RMov { .. } => "RMOV",
            Instruction::RStore { .. } => "RSTORE",
            Instruction::RLoad { .. } => "RLOAD",
            Instruction::RArith { op, .. } => op.mnemonic(),
            Instruction::RSqrt { .. } => "RSQRT",
            Instruction::WJeq { .. } => "WJEQ",
            Instruction::WJlt { .. } => "WJLT",
            Instruction::RJz { .. } => "RJZ",
            Instruction::RJpos { .. } => "RJPOS",
            Instruction::Goto { .. } => "GOTO",
            Instruction::Halt => "HALT",
            Instruction::Accept => "ACCEPT",
            Instruction::Reject => "REJECT",
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Instruction::WConst { dst, value } => write!(f, "WCONST {dst} {value}"),
            Instruction::WMov { dst, src } => write!(f, "WMOV {dst} {src}"),
            Instruction::WStore { addr_of, src } => write!(f, "WSTORE {addr_of} {src}"),
            Instruction::WLoad { dst, addr_of } => write!(f, "WLOAD {dst} {addr_of}"),
            Instruction::WArith { op, dst, lhs, rhs } => {
                write!(f, "{} {dst} {lhs} {rhs}", op.mnemonic())
            }
            Instruction::RZero { dst } => write!(f, "RZERO {dst}"),
            Instruction::ROne { dst } => write!(f, "RONE {dst}"),
            Instruction::RConstW { dst, value } => write!(f, "RCONSTW {dst} {value}"),
            Instruction::RCastW { dst, src } => write!(f, "RCASTW {dst} {src}"),
            Instruction::RMov { dst, src } => write!(f, "RMOV {dst} {src}"),
            Instruction::RStore { addr_of, src } => write!(f, "RSTORE {addr_of} {src}"),
            Instruction::RLoad { dst, addr_of } => write!(f, "RLOAD {dst} {addr_of}"),
            Instruction::RArith { op, dst, lhs, rhs } => {
                write!(f, "{} {dst} {lhs} {rhs}", op.mnemonic())
            }
            Instruction::RSqrt { dst, src } => write!(f, "RSQRT {dst} {src}"),
            Instruction::WJeq { lhs, rhs, target } => write!(f, "WJEQ {lhs} {rhs} {target}"),
            Instruction::WJlt { lhs, rhs, target } => write!(f, "WJLT {lhs} {rhs} {target}"),
            Instruction::RJz { reg, target } => write!(f, "RJZ {reg} {target}"),
            Instruction::RJpos { reg, target } => write!(f, "RJPOS {reg} {target}"),
            Instruction::Goto { target } => write!(f, "GOTO {target}"),
            Instruction::Halt => write!(f, "HALT"),
            Instruction::Accept => write!(f, "ACCEPT"),
            Instruction::Reject => write!(f, "REJECT"),
        }
    }
}
