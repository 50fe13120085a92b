use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::instruction::{Instruction, RealOp, WordOp};

/// A fixed, finite, read-only sequence of instructions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    instructions: Vec<Instruction>,
    pub name: Option<String>,
}

impl Program {
    pub fn new(instructions: Vec<Instruction>) -> Self {
        Program {
            instructions,
            name: None,
        }
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    /// Instruction at 1-based line number.
    pub fn line(&self, pc: usize) -> Option<&Instruction> {
        if pc == 0 {
            None
        } else {
            self.instructions.get(pc - 1)
        }
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn uses_sqrt(&self) -> bool {
        self.instructions
            .iter()
            .any(|i| matches!(i, Instruction::RSqrt { .. }))
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for instr in &self.instructions {
            writeln!(f, "{instr}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: unknown opcode `{opcode}`")]
    UnknownOpcode { line: usize, opcode: String },
    #[error("line {line}: {opcode} expects {expected} operand(s), got {got}")]
    BadArity {
        line: usize,
        opcode: String,
        expected: usize,
        got: usize,
    },
    #[error("line {line}: invalid operand `{token}`")]
    BadOperand { line: usize, token: String },
    #[error("line {line}: branch target {target} outside program of {len} instruction(s)")]
    DanglingLabel {
        line: usize,
        target: usize,
        len: usize,
    },
    #[error("empty program")]
    Empty,
}

/// Parse assembly text: one instruction per line, `#` starts a comment.
pub fn parse_program(text: &str) -> Result<Program, ParseError> {
    let mut instructions = Vec::new();
    // (source line, instruction index) for label checking diagnostics.
    let mut sources = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let source_line = idx + 1;
        let line = match raw.split_once('#') {
            Some((code, _comment)) => code,
            None => raw,
        };
        let mut tokens = line.split_whitespace();
        let Some(opcode) = tokens.next() else {
            continue;
        };
        let operands: Vec<&str> = tokens.collect();
        let instr = decode(source_line, opcode, &operands)?;
        instructions.push(instr);
        sources.push(source_line);
    }

    if instructions.is_empty() {
        return Err(ParseError::Empty);
    }

    let len = instructions.len();
    for (i, instr) in instructions.iter().enumerate() {
        if let Some(target) = instr.branch_target() {
            if target == 0 || target > len {
                return Err(ParseError::DanglingLabel {
                    line: sources[i],
                    target,
                    len,
                });
            }
        }
    }

    Ok(Program::new(instructions))
}

impl FromStr for Program {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_program(s)
    }
}

fn decode(line: usize, opcode: &str, operands: &[&str]) -> Result<Instruction, ParseError> {
    let upper = opcode.to_ascii_uppercase();

    let expect = |n: usize| -> Result<(), ParseError> {
        if operands.len() == n {
            Ok(())
        } else {
            Err(ParseError::BadArity {
                line,
                opcode: upper.clone(),
                expected: n,
                got: operands.len(),
            })
        }
    };
    let word = |tok: &str| -> Result<u64, ParseError> {
        tok.parse::<u64>().map_err(|_| ParseError::BadOperand {
            line,
            token: tok.to_string(),
        })
    };
    let label = |tok: &str| -> Result<usize, ParseError> {
        tok.parse::<usize>().map_err(|_| ParseError::BadOperand {
            line,
            token: tok.to_string(),
        })
    };

    let word_op = match upper.as_str() {
        "WADD" => Some(WordOp::Add),
        "WSUB" => Some(WordOp::Sub),
        "WMULLO" => Some(WordOp::MulLo),
        "WMULHI" => Some(WordOp::MulHi),
        "WDIV" => Some(WordOp::Div),
        "WMOD" => Some(WordOp::Mod),
        "WNAND" => Some(WordOp::Nand),
        _ => None,
    };
    if let Some(op) = word_op {
        expect(3)?;
        return Ok(Instruction::WArith {
            op,
            dst: word(operands[0])?,
            lhs: word(operands[1])?,
            rhs: word(operands[2])?,
        });
    }

    let real_op = match upper.as_str() {
        "RADD" => Some(RealOp::Add),
        "RSUB" => Some(RealOp::Sub),
        "RMUL" => Some(RealOp::Mul),
        "RDIV" => Some(RealOp::Div),
        _ => None,
    };
    if let Some(op) = real_op {
        expect(3)?;
        return Ok(Instruction::RArith {
            op,
            dst: word(operands[0])?,
            lhs: word(operands[1])?,
            rhs: word(operands[2])?,
        });
    }

    match upper.as_str() {
        "WCONST" => {
            expect(2)?;
            Ok(Instruction::WConst {
                dst: word(operands[0])?,
                value: word(operands[1])?,
            })
        }
        "WMOV" => {
            expect(2)?;
            Ok(Instruction::WMov {
                dst: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "WSTORE" => {
            expect(2)?;
            Ok(Instruction::WStore {
                addr_of: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "WLOAD" => {
            expect(2)?;
            Ok(Instruction::WLoad {
                dst: word(operands[0])?,
                addr_of: word(operands[1])?,
            })
        }
        "RZERO" => {
            expect(1)?;
            Ok(Instruction::RZero {
                dst: word(operands[0])?,
            })
        }
        "RONE" => {
            expect(1)?;
            Ok(Instruction::ROne {
                dst: word(operands[0])?,
            })
        }
        "RCONSTW" => {
            expect(2)?;
            Ok(Instruction::RConstW {
                dst: word(operands[0])?,
                value: word(operands[1])?,
            })
        }
        "RCASTW" => {
            expect(2)?;
            Ok(Instruction::RCastW {
                dst: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "RMOV" => {
            expect(2)?;
            Ok(Instruction::RMov {
                dst: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "RSTORE" => {
            expect(2)?;
            Ok(Instruction::RStore {
                addr_of: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "RLOAD" => {
            expect(2)?;
            Ok(Instruction::RLoad {
                dst: word(operands[0])?,
                addr_of: word(operands[1])?,
            })
        }
        "RSQRT" => {
            expect(2)?;
            Ok(Instruction::RSqrt {
                dst: word(operands[0])?,
                src: word(operands[1])?,
            })
        }
        "WJEQ" => {
            expect(3)?;
            Ok(Instruction::WJeq {
                lhs: word(operands[0])?,
                rhs: word(operands[1])?,
                target: label(operands[2])?,
            })
        }
        "WJLT" => {
            expect(3)?;
            Ok(Instruction::WJlt {
                lhs: word(operands[0])?,
                rhs: word(operands[1])?,
                target: label(operands[2])?,
            })
        }
        "RJZ" => {
            expect(2)?;
            Ok(Instruction::RJz {
                reg: word(operands[0])?,
                target: label(operands[1])?,
            })
        }
        "RJPOS" => {
            expect(2)?;
            Ok(Instruction::RJpos {
                reg: word(operands[0])?,
                target: label(operands[1])?,
            })
        }
        "GOTO" => {
            expect(1)?;
            Ok(Instruction::Goto {
                target: label(operands[0])?,
            })
        }
        "HALT" => {
            expect(0)?;
            Ok(Instruction::Halt)
        }
        "ACCEPT" => {
            expect(0)?;
            Ok(Instruction::Accept)
        }
        "REJECT" => {
            expect(0)?;
            Ok(Instruction::Reject)
        }
        _ => Err(ParseError::UnknownOpcode {
            line,
            opcode: opcode.to_string(),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_halt() {
        let p = parse_program("HALT").unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.line(1), Some(&Instruction::Halt));
    }

    #[test]
    fn unknown_opcode_names_line() {
        let err = parse_program("FROB 1 2").unwrap_err();
        assert_eq!(
            err,
            ParseError::UnknownOpcode {
                line: 1,
                opcode: "FROB".into()
            }
        );
    }

    #[test]
    fn arity_is_checked() {
        let err = parse_program("WADD 1 2").unwrap_err();
        assert!(matches!(err, ParseError::BadArity { line: 1, .. }));
    }

    #[test]
    fn dangling_label() {
        let err = parse_program("GOTO 5\nHALT").unwrap_err();
        assert!(matches!(
            err,
            ParseError::DanglingLabel {
                line: 1,
                target: 5,
                len: 2
            }
        ));
    }

    #[test]
    fn comments_and_blank_lines_skipped() {
        let text = "# leading comment\n\nWCONST 0 3  # trailing\nHALT\n";
        let p = parse_program(text).unwrap();
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn roundtrip_display() {
        let text = "WCONST 0 3\nWJLT 0 1 4\nGOTO 1\nHALT\n";
        let p = parse_program(text).unwrap();
        let q = parse_program(&p.to_string()).unwrap();
        assert_eq!(p, q);
    }
}
