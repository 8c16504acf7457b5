//! Random 3-SAT instances, exhaustive model enumeration and DIMACS CNF.

use std::fmt::Write as _;

use rand::Rng;

use crate::error::{Error, Result};
use crate::space::TargetSpace;

/// Largest formula that [`enumerate_sat`] will scan.
pub const MAX_ENUMERATION_VARS: u32 = 24;

/// A possibly negated variable. Variables are 0-indexed; variable `i` is bit `i`
/// of an assignment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Literal {
    pub var: u32,
    pub negated: bool,
}

impl Literal {
    pub fn pos(var: u32) -> Self {
        Self {
            var,
            negated: false,
        }
    }

    pub fn neg(var: u32) -> Self {
        Self { var, negated: true }
    }
}

pub type Clause = [Literal; 3];

/// A 3-CNF formula whose clauses each mention three distinct variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    num_vars: u32,
    clauses: Vec<Clause>,
}

impl Cnf {
    pub fn new(num_vars: u32, clauses: Vec<Clause>) -> Result<Self> {
        if num_vars == 0 || num_vars > 32 {
            return Err(Error::usage(format!("{num_vars} variables outside 1..=32")));
        }
        for (i, c) in clauses.iter().enumerate() {
            if c.iter().any(|l| l.var >= num_vars) {
                return Err(Error::usage(format!(
                    "clause {i} references an unknown variable"
                )));
            }
            if c[0].var == c[1].var || c[0].var == c[2].var || c[1].var == c[2].var {
                return Err(Error::usage(format!("clause {i} repeats a variable")));
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_vars(&self) -> u32 {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Clause-to-variable ratio.
    pub fn alpha(&self) -> f64 {
        self.clauses.len() as f64 / self.num_vars as f64
    }

    /// True when `assignment` satisfies every clause.
    pub fn is_satisfied_by(&self, assignment: u32) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|l| ((assignment >> l.var) & 1 == 1) != l.negated)
        })
    }

    /// DIMACS CNF text: `p cnf` header, 1-indexed signed literals,
    /// 0-terminated clauses, one clause per line.
    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                let v = l.var as i64 + 1;
                let _ = write!(out, "{} ", if l.negated { -v } else { v });
            }
            out.push_str("0\n");
        }
        out
    }

    /// Parses DIMACS CNF. Comment lines (`c ...`) are skipped and clauses may
    /// span lines; every clause must have exactly three distinct variables.
    pub fn from_dimacs(text: &str) -> Result<Self> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current: Vec<Literal> = Vec::with_capacity(3);
        for (lineno, line) in text.lines().enumerate() {
            let line_err = |msg: String| Error::parse(format!("DIMACS line {}: {msg}", lineno + 1));
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('c') || trimmed.starts_with('%') {
                continue;
            }
            if trimmed.starts_with('p') {
                if header.is_some() {
                    return Err(line_err("duplicate header".into()));
                }
                let parts: Vec<&str> = trimmed.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(line_err(format!("malformed header `{trimmed}`")));
                }
                let vars = parts[2]
                    .parse()
                    .map_err(|_| line_err(format!("bad variable count `{}`", parts[2])))?;
                let count = parts[3]
                    .parse()
                    .map_err(|_| line_err(format!("bad clause count `{}`", parts[3])))?;
                header = Some((vars, count));
                continue;
            }
            let (vars, _) =
                header.ok_or_else(|| line_err("clause before `p cnf` header".into()))?;
            for tok in trimmed.split_whitespace() {
                let lit: i64 = tok
                    .parse()
                    .map_err(|_| line_err(format!("bad literal `{tok}`")))?;
                if lit == 0 {
                    if current.len() != 3 {
                        return Err(line_err(format!(
                            "clause with {} literals, expected 3",
                            current.len()
                        )));
                    }
                    clauses.push([current[0], current[1], current[2]]);
                    current.clear();
                    continue;
                }
                let var = lit.unsigned_abs();
                if var > vars as u64 {
                    return Err(line_err(format!("literal {lit} exceeds {vars} variables")));
                }
                if current.len() == 3 {
                    return Err(line_err("clause with more than 3 literals".into()));
                }
                current.push(Literal {
                    var: var as u32 - 1,
                    negated: lit < 0,
                });
            }
        }
        let (vars, count) = header.ok_or_else(|| Error::parse("missing `p cnf` header"))?;
        if !current.is_empty() {
            return Err(Error::parse("unterminated final clause"));
        }
        if clauses.len() != count {
            return Err(Error::parse(format!(
                "header announces {count} clauses, found {}",
                clauses.len()
            )));
        }
        Cnf::new(vars, clauses).map_err(|e| Error::parse(e.to_string()))
    }
}

/// Random 3-SAT: each clause picks three distinct variables uniformly and
/// negates each literal with probability 1/2.
pub fn gen_sat<R: Rng + ?Sized>(n: u32, num_clauses: usize, rng: &mut R) -> Result<Cnf> {
    if n < 3 {
        return Err(Error::usage(format!("random 3-SAT needs n >= 3, got {n}")));
    }
    let clauses = (0..num_clauses)
        .map(|_| {
            let vars = rand::seq::index::sample(rng, n as usize, 3);
            let mut clause = [Literal::pos(0); 3];
            for (slot, v) in clause.iter_mut().zip(vars.iter()) {
                *slot = Literal {
                    var: v as u32,
                    negated: rng.random_bool(0.5),
                };
            }
            clause
        })
        .collect();
    Cnf::new(n, clauses)
}

/// All satisfying assignments by exhaustive scan. `None` when unsatisfiable.
pub fn enumerate_sat(cnf: &Cnf) -> Result<Option<TargetSpace>> {
    let n = cnf.num_vars;
    if n > MAX_ENUMERATION_VARS {
        return Err(Error::usage(format!(
            "exhaustive enumeration limited to {MAX_ENUMERATION_VARS} variables, got {n}"
        )));
    }
    // A clause is violated exactly when the assignment restricted to its three
    // variables equals its unique falsifying pattern.
    let forbidden: Vec<(u32, u32)> = cnf
        .clauses
        .iter()
        .map(|c| {
            c.iter().fold((0u32, 0u32), |(mask, value), l| {
                let bit = 1u32 << l.var;
                (mask | bit, if l.negated { value | bit } else { value })
            })
        })
        .collect();
    let states: Vec<u32> = (0..1u32 << n)
        .filter(|&z| forbidden.iter().all(|&(mask, value)| z & mask != value))
        .collect();
    if states.is_empty() {
        Ok(None)
    } else {
        TargetSpace::new(n, states).map(Some)
    }
}
