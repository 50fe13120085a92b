use std::collections::HashMap;
use std::fmt;

use rram_exact::Rational;
use thiserror::Error;

/// Scalar gadget temporaries from the word-arithmetic encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TempKind {
    /// z: unreduced sum or difference
    Sum,
    /// u: upper word of a product
    Upper,
    /// l: lower word of a product
    Lower,
    /// q: quotient
    Quot,
    /// r: remainder
    Rem,
}

impl TempKind {
    fn letter(self) -> char {
        match self {
            TempKind::Sum => 'z',
            TempKind::Upper => 'u',
            TempKind::Lower => 'l',
            TempKind::Quot => 'q',
            TempKind::Rem => 'r',
        }
    }
}

/// Structured variable names; every name is unique across one formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VarName {
    /// pow2(b) = 2^b
    Pow2(u32),
    /// W(i, t): word register i at time t
    Word { addr: u64, t: u32 },
    /// R(i, t): real register i at time t
    Real { addr: u64, t: u32 },
    /// pc(t)
    Pc(u32),
    /// gadget scalar with a unique allocation site
    Temp { site: u32, kind: TempKind },
    /// bit b of the IsWord gadget at an allocation site
    Bit { site: u32, b: u32 },
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            VarName::Pow2(b) => write!(f, "pow2_{b}"),
            VarName::Word { addr, t } => write!(f, "W_{addr}_{t}"),
            VarName::Real { addr, t } => write!(f, "R_{addr}_{t}"),
            VarName::Pc(t) => write!(f, "pc_{t}"),
            VarName::Temp { site, kind } => write!(f, "{}_{site}", kind.letter()),
            VarName::Bit { site, b } => write!(f, "bit_{site}_{b}"),
        }
    }
}

impl VarName {
    /// Inverse of `Display`, used by the text-format readers.
    pub fn parse(s: &str) -> Option<VarName> {
        let mut parts = s.split('_');
        let head = parts.next()?;
        let nums: Vec<&str> = parts.collect();
        let one = |i: usize| nums.get(i).and_then(|x| x.parse::<u32>().ok());
        let one64 = |i: usize| nums.get(i).and_then(|x| x.parse::<u64>().ok());
        match (head, nums.len()) {
            ("pow2", 1) => Some(VarName::Pow2(one(0)?)),
            ("W", 2) => Some(VarName::Word {
                addr: one64(0)?,
                t: one(1)?,
            }),
            ("R", 2) => Some(VarName::Real {
                addr: one64(0)?,
                t: one(1)?,
            }),
            ("pc", 1) => Some(VarName::Pc(one(0)?)),
            ("z", 1) | ("u", 1) | ("l", 1) | ("q", 1) | ("r", 1) => {
                let kind = match head {
                    "z" => TempKind::Sum,
                    "u" => TempKind::Upper,
                    "l" => TempKind::Lower,
                    "q" => TempKind::Quot,
                    _ => TempKind::Rem,
                };
                Some(VarName::Temp {
                    site: one(0)?,
                    kind,
                })
            }
            ("bit", 2) => Some(VarName::Bit {
                site: one(0)?,
                b: one(1)?,
            }),
            _ => None,
        }
    }
}

pub type VarId = u32;

/// Arithmetic terms over the alphabet {0, 1, +, *} and variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Zero,
    One,
    Var(VarId),
    Add(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
}

/// Quantifier-free formulas over {=, <=, <, and, or, not}.
///
/// Conjunction and disjunction are stored n-ary; they stand for the
/// left-nested binary connectives of the alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    Eq(Term, Term),
    Le(Term, Term),
    Lt(Term, Term),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Not(Box<Formula>),
}

impl Formula {
    pub const TRUE: Formula = Formula::And(Vec::new());

    pub fn is_false_literal(&self) -> bool {
        matches!(self, Formula::Eq(Term::Zero, Term::One))
    }
}

/// An existential formula: variable list plus quantifier-free body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtrFormula {
    vars: Vec<VarName>,
    index: HashMap<VarName, VarId>,
    pub body: Formula,
}

impl EtrFormula {
    pub fn new(vars: Vec<VarName>, body: Formula) -> Self {
        let index = vars
            .iter()
            .enumerate()
            .map(|(i, v)| (*v, i as VarId))
            .collect();
        EtrFormula { vars, index, body }
    }

    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn var_id(&self, name: &VarName) -> Option<VarId> {
        self.index.get(name).copied()
    }

    pub fn var_name(&self, id: VarId) -> VarName {
        self.vars[id as usize]
    }

    pub fn stats(&self) -> FormulaStats {
        let (nodes, depth) = formula_size(&self.body);
        FormulaStats {
            variables: self.vars.len(),
            nodes,
            depth,
        }
    }
}

/// Exact size accounting of a formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FormulaStats {
    pub variables: usize,
    pub nodes: u64,
    pub depth: u32,
}

fn term_size(t: &Term) -> (u64, u32) {
    match t {
        Term::Zero | Term::One | Term::Var(_) => (1, 1),
        Term::Add(a, b) | Term::Mul(a, b) => {
            let (na, da) = term_size(a);
            let (nb, db) = term_size(b);
            (na + nb + 1, da.max(db) + 1)
        }
    }
}

fn formula_size(f: &Formula) -> (u64, u32) {
    match f {
        Formula::Eq(a, b) | Formula::Le(a, b) | Formula::Lt(a, b) => {
            let (na, da) = term_size(a);
            let (nb, db) = term_size(b);
            (na + nb + 1, da.max(db) + 1)
        }
        Formula::And(fs) | Formula::Or(fs) => {
            let mut nodes = 1;
            let mut depth = 0;
            for sub in fs {
                let (n, d) = formula_size(sub);
                nodes += n;
                depth = depth.max(d);
            }
            (nodes, depth + 1)
        }
        Formula::Not(sub) => {
            let (n, d) = formula_size(sub);
            (n + 1, d + 1)
        }
    }
}

/// A total map from the formula's variables to rationals.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    values: HashMap<VarName, Rational>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn set(&mut self, name: VarName, value: Rational) {
        self.values.insert(name, value);
    }

    pub fn get(&self, name: &VarName) -> Option<&Rational> {
        self.values.get(name)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarName, &Rational)> {
        self.values.iter()
    }

    /// Witness files are `name value` lines sorted by name.
    pub fn export(&self) -> String {
        let mut entries: Vec<(String, &Rational)> = self
            .values
            .iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect();
        entries.sort();
        let mut out = String::new();
        for (name, value) in entries {
            out.push_str(&format!("{name} {value}\n"));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Assignment, EvalError> {
        let mut a = Assignment::new();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(name), Some(value)) = (parts.next(), parts.next()) else {
                return Err(EvalError::BadWitnessLine(idx + 1));
            };
            let name = VarName::parse(name).ok_or(EvalError::BadWitnessLine(idx + 1))?;
            let value: Rational = value
                .parse()
                .map_err(|_| EvalError::BadWitnessLine(idx + 1))?;
            a.set(name, value);
        }
        Ok(a)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound variable {0}")]
    UnboundVariable(String),
    #[error("invalid witness line {0}")]
    BadWitnessLine(usize),
}

/// Exact truth value of a formula under a total assignment.
pub fn evaluate(formula: &EtrFormula, assignment: &Assignment) -> Result<bool, EvalError> {
    // Resolve names once into a dense table.
    let mut table: Vec<Option<&Rational>> = vec![None; formula.vars.len()];
    for (i, name) in formula.vars.iter().enumerate() {
        table[i] = assignment.get(name);
    }
    eval_formula(&formula.body, formula, &table)
}

fn eval_term<'a>(
    t: &Term,
    f: &EtrFormula,
    table: &[Option<&'a Rational>],
) -> Result<Rational, EvalError> {
    Ok(match t {
        Term::Zero => Rational::from(0i64),
        Term::One => Rational::from(1i64),
        Term::Var(id) => table[*id as usize]
            .ok_or_else(|| EvalError::UnboundVariable(f.var_name(*id).to_string()))?
            .clone(),
        Term::Add(a, b) => eval_term(a, f, table)? + eval_term(b, f, table)?,
        Term::Mul(a, b) => eval_term(a, f, table)? * eval_term(b, f, table)?,
    })
}

fn eval_formula(
    node: &Formula,
    f: &EtrFormula,
    table: &[Option<&Rational>],
) -> Result<bool, EvalError> {
    Ok(match node {
        Formula::Eq(a, b) => eval_term(a, f, table)? == eval_term(b, f, table)?,
        Formula::Le(a, b) => eval_term(a, f, table)? <= eval_term(b, f, table)?,
        Formula::Lt(a, b) => eval_term(a, f, table)? < eval_term(b, f, table)?,
        Formula::And(fs) => {
            for sub in fs {
                if !eval_formula(sub, f, table)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(fs) => {
            let mut any = false;
            for sub in fs {
                if eval_formula(sub, f, table)? {
                    any = true;
                    break;
                }
            }
            any
        }
        Formula::Not(sub) => !eval_formula(sub, f, table)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_equals_one_is_false_and_has_three_nodes() {
        let f = EtrFormula::new(vec![], Formula::Eq(Term::Zero, Term::One));
        assert_eq!(evaluate(&f, &Assignment::new()), Ok(false));
        let stats = f.stats();
        assert_eq!(stats.variables, 0);
        assert_eq!(stats.nodes, 3);
    }

    #[test]
    fn x_squared_equals_one() {
        let x = VarName::Real { addr: 0, t: 0 };
        let body = Formula::Eq(
            Term::Mul(Box::new(Term::Var(0)), Box::new(Term::Var(0))),
            Term::One,
        );
        let f = EtrFormula::new(vec![x], body);
        let mut a = Assignment::new();
        a.set(x, Rational::from(1i64));
        assert_eq!(evaluate(&f, &a), Ok(true));
        a.set(x, Rational::new(1, 2));
        assert_eq!(evaluate(&f, &a), Ok(false));
    }

    #[test]
    fn unbound_variable_is_reported() {
        let x = VarName::Pc(3);
        let f = EtrFormula::new(vec![x], Formula::Eq(Term::Var(0), Term::Zero));
        assert_eq!(
            evaluate(&f, &Assignment::new()),
            Err(EvalError::UnboundVariable("pc_3".into()))
        );
    }

    #[test]
    fn var_name_roundtrip() {
        let names = [
            VarName::Pow2(7),
            VarName::Word { addr: 3, t: 11 },
            VarName::Real { addr: 0, t: 2 },
            VarName::Pc(0),
            VarName::Temp {
                site: 9,
                kind: TempKind::Upper,
            },
            VarName::Bit { site: 4, b: 2 },
        ];
        for n in names {
            assert_eq!(VarName::parse(&n.to_string()), Some(n));
        }
    }

    #[test]
    fn witness_roundtrip() {
        let mut a = Assignment::new();
        a.set(VarName::Pc(0), Rational::from(1i64));
        a.set(VarName::Real { addr: 2, t: 1 }, Rational::new(-7, 3));
        let text = a.export();
        let b = Assignment::parse(&text).unwrap();
        assert_eq!(a, b);
    }
}
