//! A line-oriented circuit language (`.iqc`).
//!
//! ```text
//! QUBITS n
//! H q | X q | Z q
//! CNOT c t | CPHASE c t phi
//! QFT lo hi            # inclusive qubit range
//! ORACLE m | R2 | DIFFUSION
//! BITFLIP q p | PHASEFLIP q p
//! MEASURE q1 [q2 ...]
//! TRACE label
//! ```
//!
//! One instruction per line, keywords are case-insensitive and `#` starts a
//! comment. `QUBITS` must come first and appear once. Angles are radians.
//! `p` in the error channels is the probability that no error occurs.

use std::fmt;

use crate::channels::QuantumChannel;
use crate::error::{capacity, Result};
use crate::gates::{GateSpec, MAX_QUBITS};
use crate::protocols::{accumulate, InterferenceTrace, Operation, Step};

/// Register widths above this are rejected while parsing.
const MAX_DECLARED_QUBITS: usize = 62;

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate(GateSpec),
    Bitflip { qubit: usize, p: f64 },
    Phaseflip { qubit: usize, p: f64 },
    Measure(Vec<usize>),
    Trace(String),
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Gate(g) => write!(f, "{g}"),
            Instruction::Bitflip { qubit, p } => write!(f, "BITFLIP {qubit} {p:?}"),
            Instruction::Phaseflip { qubit, p } => write!(f, "PHASEFLIP {qubit} {p:?}"),
            Instruction::Measure(qs) => {
                write!(f, "MEASURE")?;
                qs.iter().try_for_each(|q| write!(f, " {q}"))
            }
            Instruction::Trace(label) => write!(f, "TRACE {label}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CircuitProgram {
    qubits: usize,
    instructions: Vec<Instruction>,
}

impl CircuitProgram {
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    /// Steps for the trace engine, one per instruction.
    pub fn to_steps(&self) -> Result<Vec<Step>> {
        self.instructions
            .iter()
            .map(|ins| {
                let op = match ins {
                    Instruction::Gate(g) => Operation::Gates(vec![g.clone()]),
                    Instruction::Bitflip { qubit, p } => Operation::LocalChannel {
                        qubit: *qubit,
                        channel: QuantumChannel::bitflip(*p)?,
                    },
                    Instruction::Phaseflip { qubit, p } => Operation::LocalChannel {
                        qubit: *qubit,
                        channel: QuantumChannel::phaseflip(*p)?,
                    },
                    Instruction::Measure(qs) => Operation::Measure(qs.clone()),
                    Instruction::Trace(_) => Operation::Checkpoint,
                };
                let label = match ins {
                    Instruction::Trace(label) => label.clone(),
                    other => other.to_string(),
                };
                Ok(Step::new(label, op))
            })
            .collect()
    }
}

impl fmt::Display for CircuitProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QUBITS {}", self.qubits)?;
        self.instructions.iter().try_for_each(|ins| writeln!(f, "{ins}"))
    }
}

/// A parse problem at a 1-based line and column.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.message)
    }
}

#[derive(Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokenize(line: &str) -> Vec<Token<'_>> {
    let mut tokens = Vec::new();
    let mut start = None;
    for (idx, ch) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                tokens.push(Token {
                    text: &line[s..idx],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(idx),
            _ => {}
        }
    }
    tokens
}

type LineResult<T> = std::result::Result<T, (usize, String)>;

struct LineParser<'a> {
    keyword: Token<'a>,
    args: &'a [Token<'a>],
    qubits: Option<usize>,
}

impl LineParser<'_> {
    fn arity(&self, expected: usize) -> LineResult<()> {
        if self.args.len() == expected {
            Ok(())
        } else {
            let plural = if expected == 1 { "" } else { "s" };
            Err((
                self.keyword.column,
                format!("{} expects {expected} argument{plural}, got {}", self.keyword.text.to_uppercase(), self.args.len()),
            ))
        }
    }

    fn integer(&self, k: usize) -> LineResult<usize> {
        let t = self.args[k];
        t.text
            .parse()
            .map_err(|_| (t.column, format!("malformed number '{}'", t.text)))
    }

    fn real(&self, k: usize) -> LineResult<f64> {
        let t = self.args[k];
        match t.text.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err((t.column, format!("malformed number '{}'", t.text))),
        }
    }

    fn qubit(&self, k: usize) -> LineResult<usize> {
        let q = self.integer(k)?;
        match self.qubits {
            Some(n) if q >= n => Err((self.args[k].column, format!("qubit {q} out of range"))),
            _ => Ok(q),
        }
    }

    fn probability(&self, k: usize) -> LineResult<f64> {
        let p = self.real(k)?;
        if (0.0..=1.0).contains(&p) {
            Ok(p)
        } else {
            Err((self.args[k].column, format!("probability {p} outside [0, 1]")))
        }
    }

    fn distinct(&self, first: usize, second: usize, at: usize) -> LineResult<()> {
        if first == second {
            Err((self.args[at].column, format!("qubit {second} used twice")))
        } else {
            Ok(())
        }
    }

    fn instruction(&self) -> LineResult<Instruction> {
        let gate = |g: GateSpec| Ok(Instruction::Gate(g));
        match self.keyword.text.to_ascii_uppercase().as_str() {
            "H" | "X" | "Z" => {
                self.arity(1)?;
                let q = self.qubit(0)?;
                match self.keyword.text.to_ascii_uppercase().as_str() {
                    "H" => gate(GateSpec::H(q)),
                    "X" => gate(GateSpec::X(q)),
                    _ => gate(GateSpec::Z(q)),
                }
            }
            "CNOT" => {
                self.arity(2)?;
                let (control, target) = (self.qubit(0)?, self.qubit(1)?);
                self.distinct(control, target, 1)?;
                gate(GateSpec::Cnot { control, target })
            }
            "CPHASE" => {
                self.arity(3)?;
                let (control, target) = (self.qubit(0)?, self.qubit(1)?);
                self.distinct(control, target, 1)?;
                gate(GateSpec::Cphase {
                    control,
                    target,
                    phi: self.real(2)?,
                })
            }
            "QFT" => {
                self.arity(2)?;
                let (lo, hi) = (self.qubit(0)?, self.qubit(1)?);
                if lo > hi {
                    return Err((self.args[0].column, format!("QFT range {lo}..{hi} has lo > hi")));
                }
                gate(GateSpec::Qft { lo, hi })
            }
            "ORACLE" => {
                self.arity(1)?;
                let marked = self.integer(0)?;
                if let Some(n) = self.qubits {
                    if n >= usize::BITS as usize || marked >> n != 0 {
                        return Err((self.args[0].column, format!("marked state {marked} out of range")));
                    }
                }
                gate(GateSpec::Oracle { marked })
            }
            "R2" => {
                self.arity(0)?;
                gate(GateSpec::R2)
            }
            "DIFFUSION" => {
                self.arity(0)?;
                gate(GateSpec::Diffusion)
            }
            "BITFLIP" | "PHASEFLIP" => {
                self.arity(2)?;
                let qubit = self.qubit(0)?;
                let p = self.probability(1)?;
                if self.keyword.text.eq_ignore_ascii_case("BITFLIP") {
                    Ok(Instruction::Bitflip { qubit, p })
                } else {
                    Ok(Instruction::Phaseflip { qubit, p })
                }
            }
            "MEASURE" => {
                if self.args.is_empty() {
                    return Err((self.keyword.column, "MEASURE expects at least one qubit".into()));
                }
                let mut qs = Vec::with_capacity(self.args.len());
                for k in 0..self.args.len() {
                    let q = self.qubit(k)?;
                    if qs.contains(&q) {
                        return Err((self.args[k].column, format!("qubit {q} used twice")));
                    }
                    qs.push(q);
                }
                Ok(Instruction::Measure(qs))
            }
            "QUBITS" => Err((self.keyword.column, "QUBITS declared more than once".into())),
            _ => Err((self.keyword.column, format!("unknown keyword '{}'", self.keyword.text))),
        }
    }
}

/// Parses a program. On failure every offending line contributes exactly
/// one diagnostic, in line order.
pub fn parse(source: &str) -> std::result::Result<CircuitProgram, Vec<Diagnostic>> {
    let mut qubits: Option<usize> = None;
    let mut instructions = Vec::new();
    let mut diagnostics = Vec::new();
    let mut first_line = None;

    for (idx, raw) in source.lines().enumerate() {
        let line_no = idx + 1;
        let code = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(code);
        let Some(&keyword) = tokens.first() else {
            continue;
        };
        first_line.get_or_insert(line_no);
        let mut fail = |column: usize, message: String| {
            diagnostics.push(Diagnostic {
                line: line_no,
                column,
                message,
            })
        };

        if keyword.text.eq_ignore_ascii_case("QUBITS") && qubits.is_none() {
            if !instructions.is_empty() || first_line != Some(line_no) {
                fail(keyword.column, "QUBITS must precede all instructions".into());
                continue;
            }
            match tokens.len() {
                2 => match tokens[1].text.parse::<usize>() {
                    Ok(n) if (1..=MAX_DECLARED_QUBITS).contains(&n) => qubits = Some(n),
                    Ok(n) => fail(tokens[1].column, format!("qubit count {n} outside 1..={MAX_DECLARED_QUBITS}")),
                    Err(_) => fail(tokens[1].column, format!("malformed number '{}'", tokens[1].text)),
                },
                k => fail(keyword.column, format!("QUBITS expects 1 argument, got {}", k - 1)),
            }
            continue;
        }

        if keyword.text.eq_ignore_ascii_case("TRACE") {
            let label = code[code.find(keyword.text).unwrap_or(0) + keyword.text.len()..].trim();
            if label.is_empty() {
                fail(keyword.column, "TRACE expects a label".into());
            } else if qubits.is_none() {
                fail(keyword.column, "instruction before QUBITS declaration".into());
            } else {
                instructions.push(Instruction::Trace(label.to_string()));
            }
            continue;
        }

        let parser = LineParser {
            keyword,
            args: &tokens[1..],
            qubits,
        };
        match parser.instruction() {
            Ok(_) if qubits.is_none() => fail(keyword.column, "instruction before QUBITS declaration".into()),
            Ok(ins) => instructions.push(ins),
            Err((column, message)) => fail(column, message),
        }
    }

    if qubits.is_none() && diagnostics.is_empty() {
        diagnostics.push(Diagnostic {
            line: first_line.unwrap_or(1),
            column: 1,
            message: "missing QUBITS declaration".into(),
        });
    }
    match qubits {
        Some(qubits) if diagnostics.is_empty() => Ok(CircuitProgram { qubits, instructions }),
        _ => Err(diagnostics),
    }
}

/// Accumulated interference with one record per instruction.
pub fn run(program: &CircuitProgram) -> Result<InterferenceTrace> {
    if program.qubits > MAX_QUBITS {
        return Err(capacity(format!("{} qubits exceed the {MAX_QUBITS}-qubit limit", program.qubits)));
    }
    let mut trace = accumulate(&program.to_steps()?, 1 << program.qubits)?;
    trace.metadata.insert("qubits".into(), program.qubits.to_string());
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn final_value(src: &str) -> f64 {
        run(&parse(src).unwrap()).unwrap().final_value().unwrap()
    }

    #[test]
    fn minimal_program() {
        let p = parse("QUBITS 1\nH 0").unwrap();
        assert_eq!(p.qubits(), 1);
        assert_eq!(p.instructions(), &[Instruction::Gate(GateSpec::H(0))]);
    }

    #[test]
    fn runs() {
        assert!((final_value("QUBITS 1\nH 0") - 1.0).abs() < 1e-12);
        assert!(final_value("QUBITS 1\nH 0\nH 0").abs() < 1e-12);
        assert!((final_value("QUBITS 1\nH 0\nPHASEFLIP 0 0.3") - 1.0).abs() < 1e-12);
        assert!((final_value("QUBITS 1\nH 0\nBITFLIP 0 0.3") - 0.16).abs() < 1e-12);
    }

    #[test]
    fn trace_lines_add_records() {
        let t = run(&parse("qubits 2\nh 0\ntrace after first\nh 1 # second\n").unwrap()).unwrap();
        let labels: Vec<&str> = t.records.iter().map(|r| r.label.as_str()).collect();
        assert_eq!(labels, ["H 0", "after first", "H 1"]);
        assert_eq!(t.records[0].interference, t.records[1].interference);
        assert!((t.records[2].interference - 3.0).abs() < 1e-12);
    }

    #[test]
    fn range_error_position() {
        let d = parse("QUBITS 2\nH 5").unwrap_err();
        assert_eq!(d.len(), 1);
        assert_eq!((d[0].line, d[0].column), (2, 3));
        assert_eq!(d[0].message, "qubit 5 out of range");
    }

    #[test]
    fn every_bad_line_is_reported() {
        let src = "QUBITS 2\nFOO 1\nH 0\nCNOT 1\nBITFLIP 0 1.5\nCPHASE 0 1 abc\nMEASURE 0 0\nQUBITS 3\nQFT 1 0\nH 0";
        let d = parse(src).unwrap_err();
        let lines: Vec<usize> = d.iter().map(|x| x.line).collect();
        assert_eq!(lines, [2, 4, 5, 6, 7, 8, 9]);
        assert_eq!(d[0].message, "unknown keyword 'FOO'");
        assert_eq!(d[1].message, "CNOT expects 2 arguments, got 1");
        assert_eq!(d[3].column, 12);
    }

    #[test]
    fn qubits_declaration_rules() {
        assert_eq!(parse("").unwrap_err()[0].message, "missing QUBITS declaration");
        let d = parse("H 0\nQUBITS 1").unwrap_err();
        assert_eq!(d.len(), 2);
        assert!(parse("QUBITS 0").is_err());
        assert!(parse("QUBITS 2 3").is_err());
        assert!(parse("# header\n\nQUBITS 2\n").is_ok());
    }

    #[test]
    fn display_round_trips() {
        let src = "QUBITS 3\nH 2\nCPHASE 0 2 0.7853981633974483\nQFT 0 2\nORACLE 5\nR2\nDIFFUSION\nBITFLIP 1 0.25\nPHASEFLIP 0 1.0\nMEASURE 2 0\nTRACE the end\nX 1\nZ 0\nCNOT 0 1\n";
        let p = parse(src).unwrap();
        assert_eq!(p.to_string(), src);
        assert_eq!(parse(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn oversized_register_is_a_capacity_error() {
        let p = parse("QUBITS 13\nH 0").unwrap();
        assert!(matches!(run(&p), Err(crate::Error::Capacity(_))));
    }
}
