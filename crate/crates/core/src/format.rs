//! Circuit serialization: a qasm-like text form and a JSON form.
//!
//! Both forms use 0-based wire indices externally; the in-memory circuit is
//! 1-based, so wire = qubit − 1. Angles are written with Rust's shortest
//! round-trip float formatting (at most 17 significant digits), which makes
//! emit → parse → emit byte-identical.
//!
//! Text grammar, one gate per line, LF endings, `#` starts a comment:
//!
//! ```text
//! qubits 3
//! cx q[0], q[2];
//! ry(0.5) q[1];
//! rz(-0.25) q[0];
//! gphase(1.5707963267948966);
//! ```

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::circuit::{Axis, Circuit, Gate};
use crate::error::{Error, Result};

/// Supported serialization formats.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CircuitFormat {
    Qasm,
    Json,
}

/// Serializes a circuit. Deterministic; inverse of [`parse`].
pub fn emit(circuit: &Circuit, format: CircuitFormat) -> String {
    match format {
        CircuitFormat::Qasm => emit_qasm(circuit),
        CircuitFormat::Json => emit_json(circuit),
    }
}

/// Parses a circuit serialized by [`emit`].
pub fn parse(input: &str, format: CircuitFormat) -> Result<Circuit> {
    match format {
        CircuitFormat::Qasm => parse_qasm(input),
        CircuitFormat::Json => parse_json(input),
    }
}

fn emit_qasm(circuit: &Circuit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "qubits {}", circuit.n());
    for gate in circuit.gates() {
        match *gate {
            Gate::Cnot { control, target } => {
                let _ = writeln!(out, "cx q[{}], q[{}];", control - 1, target - 1);
            }
            Gate::Rot { axis, qubit, angle } => {
                let name = match axis {
                    Axis::Y => "ry",
                    Axis::Z => "rz",
                };
                let _ = writeln!(out, "{}({}) q[{}];", name, angle, qubit - 1);
            }
            Gate::GlobalPhase { angle } => {
                let _ = writeln!(out, "gphase({});", angle);
            }
        }
    }
    out
}

struct Cursor<'a> {
    chars: Vec<char>,
    pos: usize,
    line: usize,
    _input: &'a str,
}

impl<'a> Cursor<'a> {
    fn new(line_text: &'a str, line: usize) -> Self {
        Self {
            chars: line_text.chars().collect(),
            pos: 0,
            line,
            _input: line_text,
        }
    }

    fn column(&self) -> usize {
        self.pos + 1
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax {
            line: self.line,
            column: self.column(),
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected `{c}`")))
        }
    }

    fn ident(&mut self) -> String {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn uint(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error("expected an unsigned integer"));
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        text.parse().map_err(|_| self.error("integer out of range"))
    }

    fn float_until(&mut self, delim: char) -> Result<f64> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c != delim) {
            self.pos += 1;
        }
        let text: String = self.chars[start..self.pos].iter().collect();
        let trimmed = text.trim();
        if trimmed.is_empty() {
            return Err(self.error("expected a number"));
        }
        trimmed.parse().map_err(|_| {
            self.pos = start;
            self.error(format!("invalid number `{trimmed}`"))
        })
    }

    fn wire(&mut self) -> Result<usize> {
        self.skip_ws();
        if self.ident() != "q" {
            return Err(self.error("expected a wire reference `q[<index>]`"));
        }
        self.expect('[')?;
        self.skip_ws();
        let index = self.uint()?;
        self.skip_ws();
        self.expect(']')?;
        Ok(index)
    }

    fn finish_statement(&mut self) -> Result<()> {
        self.skip_ws();
        self.expect(';')?;
        self.skip_ws();
        if self.peek().is_some() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(idx) => &line[..idx],
        None => line,
    }
}

fn check_wire(wire: usize, n: usize, line: usize) -> Result<usize> {
    if wire >= n {
        return Err(Error::WireOutOfRange { line, wire, n });
    }
    Ok(wire + 1)
}

fn parse_qasm(input: &str) -> Result<Circuit> {
    let mut n: Option<usize> = None;
    let mut gates: Vec<Gate> = Vec::new();

    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let text = strip_comment(raw);
        if text.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor::new(text, line_no);
        cur.skip_ws();
        let name = cur.ident();
        if name.is_empty() {
            return Err(cur.error("expected a gate name"));
        }

        let width = match n {
            None => {
                if name != "qubits" {
                    return Err(cur.error("expected `qubits <n>` header"));
                }
                cur.skip_ws();
                let declared = cur.uint()?;
                if declared == 0 {
                    return Err(cur.error("qubit count must be positive"));
                }
                cur.skip_ws();
                if cur.peek().is_some() {
                    return Err(cur.error("unexpected trailing input"));
                }
                n = Some(declared);
                continue;
            }
            Some(width) => width,
        };

        match name.as_str() {
            "cx" => {
                let control = check_wire(cur.wire()?, width, line_no)?;
                cur.skip_ws();
                cur.expect(',')?;
                let target = check_wire(cur.wire()?, width, line_no)?;
                cur.finish_statement()?;
                gates.push(Gate::Cnot { control, target });
            }
            "ry" | "rz" => {
                let axis = if name == "ry" { Axis::Y } else { Axis::Z };
                cur.skip_ws();
                cur.expect('(')?;
                let angle = cur.float_until(')')?;
                cur.expect(')')?;
                let qubit = check_wire(cur.wire()?, width, line_no)?;
                cur.finish_statement()?;
                gates.push(Gate::Rot { axis, qubit, angle });
            }
            "gphase" => {
                cur.skip_ws();
                cur.expect('(')?;
                let angle = cur.float_until(')')?;
                cur.expect(')')?;
                cur.finish_statement()?;
                gates.push(Gate::GlobalPhase { angle });
            }
            other => {
                return Err(Error::UnknownGate {
                    line: line_no,
                    name: other.to_string(),
                });
            }
        }
    }

    let n = n.ok_or(Error::Syntax {
        line: input.lines().count() + 1,
        column: 1,
        message: "missing `qubits <n>` header".to_string(),
    })?;
    Circuit::new(n, gates)
}

#[derive(Serialize, Deserialize)]
struct CircuitJson {
    n: usize,
    gates: Vec<GateJson>,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum GateJson {
    Cx { control: usize, target: usize },
    Ry { qubit: usize, angle: f64 },
    Rz { qubit: usize, angle: f64 },
    Gphase { angle: f64 },
}

fn emit_json(circuit: &Circuit) -> String {
    let gates = circuit
        .gates()
        .iter()
        .map(|gate| match *gate {
            Gate::Cnot { control, target } => GateJson::Cx {
                control: control - 1,
                target: target - 1,
            },
            Gate::Rot {
                axis: Axis::Y,
                qubit,
                angle,
            } => GateJson::Ry {
                qubit: qubit - 1,
                angle,
            },
            Gate::Rot {
                axis: Axis::Z,
                qubit,
                angle,
            } => GateJson::Rz {
                qubit: qubit - 1,
                angle,
            },
            Gate::GlobalPhase { angle } => GateJson::Gphase { angle },
        })
        .collect();
    let doc = CircuitJson {
        n: circuit.n(),
        gates,
    };
    let mut out = serde_json::to_string(&doc).expect("gate serialization cannot fail");
    out.push('\n');
    out
}

fn parse_json(input: &str) -> Result<Circuit> {
    let doc: CircuitJson = serde_json::from_str(input).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    if doc.n == 0 {
        return Err(Error::Syntax {
            line: 1,
            column: 1,
            message: "qubit count must be positive".to_string(),
        });
    }
    let gates = doc
        .gates
        .into_iter()
        .map(|gate| {
            Ok(match gate {
                GateJson::Cx { control, target } => Gate::Cnot {
                    control: check_wire(control, doc.n, 1)?,
                    target: check_wire(target, doc.n, 1)?,
                },
                GateJson::Ry { qubit, angle } => Gate::Rot {
                    axis: Axis::Y,
                    qubit: check_wire(qubit, doc.n, 1)?,
                    angle,
                },
                GateJson::Rz { qubit, angle } => Gate::Rot {
                    axis: Axis::Z,
                    qubit: check_wire(qubit, doc.n, 1)?,
                    angle,
                },
                GateJson::Gphase { angle } => Gate::GlobalPhase { angle },
            })
        })
        .collect::<Result<Vec<Gate>>>()?;
    Circuit::new(doc.n, gates)
}
