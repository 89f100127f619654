//! TinyPF: a two-register counter machine with self-delimiting programs.
//!
//! Programs are sequences of 3-bit opcodes:
//!
//! | bits | instruction |
//! |------|-------------|
//! | 000  | END         |
//! | 001  | INC A       |
//! | 010  | INC B       |
//! | 011  | DECJNZ A, k |
//! | 100  | DECJNZ B, k |
//! | 101  | OUT0        |
//! | 110  | OUT1        |
//! | 111  | NOP         |
//!
//! DECJNZ is followed by a 3-bit offset `k`. It decrements the register if
//! positive, then jumps back `k + 1` instructions when the register is still
//! positive; otherwise execution falls through.
//!
//! A code is accepted iff decoding reaches its first END exactly at the last
//! bit. Every proper prefix of an accepted code lacks that END and every
//! proper extension has bits after it, so the accepted set is prefix-free.

use std::fmt;

use thiserror::Error;

use crate::bitseq::{BitString, BitStringBuilder};

pub const OPCODE_BITS: usize = 3;
pub const OFFSET_BITS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Register {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instruction {
    End,
    Inc(Register),
    /// Jump distance `back` is in `1..=8`.
    DecJnz { reg: Register, back: u8 },
    Out0,
    Out1,
    Nop,
}

impl Instruction {
    /// Every instruction other than END that can sit at `index`.
    pub(crate) fn non_end_at(index: usize) -> impl Iterator<Item = Instruction> {
        let simple = [
            Instruction::Inc(Register::A),
            Instruction::Inc(Register::B),
            Instruction::Out0,
            Instruction::Out1,
            Instruction::Nop,
        ];
        let jumps = [Register::A, Register::B].into_iter().flat_map(move |reg| {
            (1..=8u8)
                .filter(move |&back| back as usize <= index)
                .map(move |back| Instruction::DecJnz { reg, back })
        });
        simple.into_iter().chain(jumps)
    }

    pub fn bit_len(self) -> usize {
        match self {
            Instruction::DecJnz { .. } => OPCODE_BITS + OFFSET_BITS,
            _ => OPCODE_BITS,
        }
    }

    pub fn encode_into(self, out: &mut BitStringBuilder) {
        let opcode = match self {
            Instruction::End => 0b000,
            Instruction::Inc(Register::A) => 0b001,
            Instruction::Inc(Register::B) => 0b010,
            Instruction::DecJnz { reg: Register::A, .. } => 0b011,
            Instruction::DecJnz { reg: Register::B, .. } => 0b100,
            Instruction::Out0 => 0b101,
            Instruction::Out1 => 0b110,
            Instruction::Nop => 0b111,
        };
        out.push_word(opcode, OPCODE_BITS);
        if let Instruction::DecJnz { back, .. } = self {
            out.push_word(back as u64 - 1, OFFSET_BITS);
        }
    }
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::End => f.write_str("END"),
            Instruction::Inc(r) => write!(f, "INC {r:?}"),
            Instruction::DecJnz { reg, back } => write!(f, "DECJNZ {reg:?} -{back}"),
            Instruction::Out0 => f.write_str("OUT0"),
            Instruction::Out1 => f.write_str("OUT1"),
            Instruction::Nop => f.write_str("NOP"),
        }
    }
}

/// Why a code is not an accepted program.
#[derive(Error, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rejection {
    #[error("code ends inside an opcode or offset field ({pending} of {needed} bits read)")]
    TruncatedOpcode { pending: usize, needed: usize },
    #[error("{extra} bit(s) follow the first END")]
    TrailingBits { extra: usize },
    #[error("code ends without an END instruction")]
    NoEnd,
    #[error("instruction {index} jumps back {back}, before instruction 0")]
    JumpBeforeStart { index: usize, back: u8 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Opcode,
    Offset(Register),
}

/// Outcome after feeding one bit to a [`Decoder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecodeStatus {
    /// The bits so far are a proper prefix of some accepted code, or are
    /// mid-field.
    Incomplete,
    /// The bits so far form an accepted program.
    Accepted,
    /// No extension of the bits so far is accepted.
    Rejected(Rejection),
}

/// Incremental decoder; accepts bits one at a time.
#[derive(Debug, Clone)]
pub struct Decoder {
    instructions: Vec<Instruction>,
    field: Field,
    pending: u64,
    pending_bits: usize,
    bits_read: usize,
    status: DecodeStatus,
}

impl Default for Decoder {
    fn default() -> Self {
        Self::new()
    }
}

impl Decoder {
    pub fn new() -> Self {
        Self {
            instructions: Vec::new(),
            field: Field::Opcode,
            pending: 0,
            pending_bits: 0,
            bits_read: 0,
            status: DecodeStatus::Incomplete,
        }
    }

    pub fn status(&self) -> DecodeStatus {
        self.status
    }

    pub fn bits_read(&self) -> usize {
        self.bits_read
    }

    pub fn push(&mut self, bit: bool) -> DecodeStatus {
        self.bits_read += 1;
        match self.status {
            DecodeStatus::Incomplete => {}
            DecodeStatus::Accepted => {
                self.status = DecodeStatus::Rejected(Rejection::TrailingBits { extra: 1 });
                return self.status;
            }
            DecodeStatus::Rejected(Rejection::TrailingBits { extra }) => {
                self.status = DecodeStatus::Rejected(Rejection::TrailingBits { extra: extra + 1 });
                return self.status;
            }
            DecodeStatus::Rejected(_) => return self.status,
        }
        self.pending = (self.pending << 1) | bit as u64;
        self.pending_bits += 1;
        let needed = match self.field {
            Field::Opcode => OPCODE_BITS,
            Field::Offset(_) => OFFSET_BITS,
        };
        if self.pending_bits < needed {
            return self.status;
        }
        let value = self.pending;
        self.pending = 0;
        self.pending_bits = 0;
        match self.field {
            Field::Opcode => {
                let instruction = match value {
                    0b000 => Instruction::End,
                    0b001 => Instruction::Inc(Register::A),
                    0b010 => Instruction::Inc(Register::B),
                    0b011 => {
                        self.field = Field::Offset(Register::A);
                        return self.status;
                    }
                    0b100 => {
                        self.field = Field::Offset(Register::B);
                        return self.status;
                    }
                    0b101 => Instruction::Out0,
                    0b110 => Instruction::Out1,
                    _ => Instruction::Nop,
                };
                self.instructions.push(instruction);
                if instruction == Instruction::End {
                    self.status = DecodeStatus::Accepted;
                }
            }
            Field::Offset(reg) => {
                let back = value as u8 + 1;
                let index = self.instructions.len();
                self.field = Field::Opcode;
                if back as usize > index {
                    self.status = DecodeStatus::Rejected(Rejection::JumpBeforeStart { index, back });
                } else {
                    self.instructions.push(Instruction::DecJnz { reg, back });
                }
            }
        }
        self.status
    }

    /// Verdict once the code has ended.
    pub fn finish(self) -> Result<Vec<Instruction>, Rejection> {
        match self.status {
            DecodeStatus::Accepted => Ok(self.instructions),
            DecodeStatus::Rejected(reason) => Err(reason),
            DecodeStatus::Incomplete if self.pending_bits > 0 || self.field != Field::Opcode => {
                let needed = match self.field {
                    Field::Opcode => OPCODE_BITS,
                    Field::Offset(_) => OFFSET_BITS,
                };
                Err(Rejection::TruncatedOpcode {
                    pending: self.pending_bits,
                    needed,
                })
            }
            DecodeStatus::Incomplete => Err(Rejection::NoEnd),
        }
    }
}

/// An accepted TinyPF program.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Program {
    code: BitString,
    instructions: Vec<Instruction>,
}

impl Program {
    pub fn code(&self) -> &BitString {
        &self.code
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.code.len()
    }

    pub fn is_empty(&self) -> bool {
        self.code.is_empty()
    }

    /// Builds the program for `instructions`, which must end in END and
    /// contain no other END.
    pub fn assemble(instructions: &[Instruction]) -> Result<Program, Rejection> {
        let mut builder = BitStringBuilder::new();
        for instruction in instructions {
            instruction.encode_into(&mut builder);
        }
        decode(&builder.finish())
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let listing: Vec<String> = self.instructions.iter().map(|i| i.to_string()).collect();
        write!(f, "{} [{}]", self.code, listing.join("; "))
    }
}

/// Decodes `code`, accepting it iff its first END is its last instruction
/// and ends exactly at the final bit.
pub fn decode(code: &BitString) -> Result<Program, Rejection> {
    let mut decoder = Decoder::new();
    for bit in code.iter() {
        if let DecodeStatus::Rejected(reason) = decoder.push(bit) {
            if let Rejection::TrailingBits { .. } = reason {
                let extra = code.len() - (decoder.bits_read() - 1);
                return Err(Rejection::TrailingBits { extra });
            }
            return Err(reason);
        }
    }
    let instructions = decoder.finish()?;
    Ok(Program {
        code: code.clone(),
        instructions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Halted,
    BudgetExhausted,
}

/// Registers, instruction pointer and output of a running program.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MachineState {
    pub instruction_pointer: usize,
    pub reg_a: u64,
    pub reg_b: u64,
    pub output: BitStringBuilder,
    pub steps_used: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub output: BitString,
    pub steps_used: u64,
}

impl RunOutcome {
    pub fn halted(&self) -> bool {
        self.status == RunStatus::Halted
    }
}

impl MachineState {
    /// Executes one instruction. Returns `true` when it was END.
    fn step(&mut self, program: &Program) -> bool {
        let instruction = program.instructions[self.instruction_pointer];
        self.steps_used += 1;
        let mut next = self.instruction_pointer + 1;
        match instruction {
            Instruction::End => return true,
            Instruction::Inc(Register::A) => self.reg_a = self.reg_a.saturating_add(1),
            Instruction::Inc(Register::B) => self.reg_b = self.reg_b.saturating_add(1),
            Instruction::DecJnz { reg, back } => {
                let value = match reg {
                    Register::A => &mut self.reg_a,
                    Register::B => &mut self.reg_b,
                };
                *value = value.saturating_sub(1);
                if *value > 0 {
                    next = self.instruction_pointer - back as usize;
                }
            }
            Instruction::Out0 => self.output.push(false),
            Instruction::Out1 => self.output.push(true),
            Instruction::Nop => {}
        }
        self.instruction_pointer = next;
        false
    }
}

/// Runs `program` from instruction 0 for at most `budget` steps. Every
/// instruction, including a taken jump, costs one step.
pub fn run(program: &Program, budget: u64) -> RunOutcome {
    let mut state = MachineState::default();
    let mut status = RunStatus::BudgetExhausted;
    while state.steps_used < budget {
        if state.step(program) {
            status = RunStatus::Halted;
            break;
        }
    }
    RunOutcome {
        status,
        output: state.output.snapshot(),
        steps_used: state.steps_used,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Instruction::*;
    use Register::*;

    fn code(s: &str) -> BitString {
        BitString::from_ascii(s)
    }

    #[test]
    fn minimal_programs() {
        assert_eq!(decode(&code("000")).unwrap().instructions(), &[End]);
        assert_eq!(decode(&code("001000")).unwrap().instructions(), &[Inc(A), End]);
        assert_eq!(
            decode(&code("110 110 000")).unwrap().instructions(),
            &[Out1, Out1, End]
        );
    }

    #[test]
    fn rejection_reasons() {
        assert_eq!(decode(&code("")), Err(Rejection::NoEnd));
        assert_eq!(decode(&code("001")), Err(Rejection::NoEnd));
        assert_eq!(
            decode(&code("00")),
            Err(Rejection::TruncatedOpcode { pending: 2, needed: 3 })
        );
        assert_eq!(
            decode(&code("001 011 00")),
            Err(Rejection::TruncatedOpcode { pending: 2, needed: 3 })
        );
        assert_eq!(decode(&code("000 1")), Err(Rejection::TrailingBits { extra: 1 }));
        assert_eq!(decode(&code("000 000")), Err(Rejection::TrailingBits { extra: 3 }));
        assert_eq!(
            decode(&code("011 000 000")),
            Err(Rejection::JumpBeforeStart { index: 0, back: 1 })
        );
        assert_eq!(
            decode(&code("001 100 001 000")),
            Err(Rejection::JumpBeforeStart { index: 1, back: 2 })
        );
    }

    #[test]
    fn extensions_of_accepted_codes_are_rejected() {
        let accepted = code("001000");
        for tail in ["0", "1", "000", "101010"] {
            let longer = accepted.concat(&code(tail));
            assert!(matches!(decode(&longer), Err(Rejection::TrailingBits { .. })));
        }
        for len in 0..accepted.len() {
            assert!(decode(&accepted.slice(0, len).unwrap()).is_err());
        }
    }

    #[test]
    fn assemble_round_trip() {
        let program = Program::assemble(&[Inc(A), Inc(A), DecJnz { reg: A, back: 1 }, End]).unwrap();
        assert_eq!(program.code().to_string(), "001001011000000");
        assert_eq!(decode(program.code()).unwrap(), program);
    }

    #[test]
    fn run_examples() {
        let end = decode(&code("000")).unwrap();
        let outcome = run(&end, 10);
        assert_eq!(outcome.status, RunStatus::Halted);
        assert!(outcome.output.is_empty());
        assert_eq!(outcome.steps_used, 1);

        let two_ones = decode(&code("110110000")).unwrap();
        let outcome = run(&two_ones, 10);
        assert!(outcome.halted());
        assert_eq!(outcome.output.to_string(), "11");
        assert_eq!(outcome.steps_used, 3);
    }

    #[test]
    fn self_loop_exhausts_budget() {
        // INC A; loop: INC A; DECJNZ A -> loop. A oscillates between 2 and 1.
        let program = Program::assemble(&[Inc(A), Inc(A), DecJnz { reg: A, back: 1 }, End]).unwrap();
        let outcome = run(&program, 10_000);
        assert_eq!(outcome.status, RunStatus::BudgetExhausted);
        assert_eq!(outcome.steps_used, 10_000);
    }

    #[test]
    fn countdown_loop_halts() {
        // INC A x3; OUT1; DECJNZ A -> OUT1; END: emits three 1s.
        let program = Program::assemble(&[
            Inc(A),
            Inc(A),
            Inc(A),
            Out1,
            DecJnz { reg: A, back: 1 },
            End,
        ])
        .unwrap();
        let outcome = run(&program, 100);
        assert!(outcome.halted());
        assert_eq!(outcome.output.to_string(), "111");
        assert_eq!(outcome.steps_used, 3 + 3 * 2 + 1);
        assert_eq!(run(&program, 9).status, RunStatus::BudgetExhausted);
        assert_eq!(run(&program, 0).steps_used, 0);
    }
}
