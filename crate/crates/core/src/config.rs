//! JSON description of a custom homomorphism to verify.
//!
//! ```json
//! {
//!   "source": {"weights": [4, 4, 2], "params": []},
//!   "target": {"weights": [2, 2, 2, 2], "params": ["-1"]},
//!   "field": "rationals",
//!   "constants": [{"name": "i", "poly": ["1", "0", "1"]}],
//!   "pi": ["0;1,0,0,0", "0;0,1,0,0", "0;0,0,1,1"],
//!   "phi": [[{"coeff": "1", "exp": [1, 0, 0, 0]}], ...],
//!   "window": 20
//! }
//! ```
//!
//! Coefficients and parameters are arithmetic expressions over integers and
//! previously defined constants. A constant is a root of the polynomial whose
//! coefficients are listed in ascending degree order.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, CoordinateAlgebra, Monomial};
use crate::cases::CaseSpec;
use crate::constants::{ConstantBindings, ConstantError};
use crate::field::{find_root_with, FieldElement, FieldError, FieldSpec, RootChoice};
use crate::group::{GroupError, WeightSequence};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("invalid config JSON: {0}")]
    Json(String),
    #[error("in expression {expr:?}: {reason}")]
    Expr { expr: String, reason: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraConfig {
    pub weights: Vec<i64>,
    /// Either the free parameters `lambda_4..` or the full list starting with `1`.
    #[serde(default)]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstantConfig {
    pub name: String,
    pub poly: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermConfig {
    pub coeff: String,
    pub exp: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub source: AlgebraConfig,
    pub target: AlgebraConfig,
    pub field: String,
    #[serde(default)]
    pub constants: Vec<ConstantConfig>,
    pub pi: Vec<String>,
    pub phi: Vec<Vec<TermConfig>>,
    pub window: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<Vec<String>>,
}

impl VerifyConfig {
    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(s).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn field_spec(&self) -> Result<FieldSpec, ConfigError> {
        Ok(FieldSpec::parse(&self.field)?)
    }

    /// Binds constants in order, each one visible to the ones after it.
    pub fn resolve_constants(&self, field: &FieldSpec, choice: RootChoice) -> Result<ConstantBindings, ConfigError> {
        let mut bindings = ConstantBindings::new(*field);
        for c in &self.constants {
            let poly: Vec<FieldElement> =
                c.poly.iter().map(|e| eval_expr(e, field, &bindings)).collect::<Result<_, _>>()?;
            let root = solve(&poly, field, choice)?
                .ok_or_else(|| ConstantError::ConstantUnavailable { name: c.name.clone(), field: *field })?;
            bindings.insert(c.name.clone(), root);
        }
        Ok(bindings)
    }

    pub fn build(&self, choice: RootChoice) -> Result<CaseSpec, ConfigError> {
        let field = self.field_spec()?;
        self.build_over(&field, choice)
    }

    /// Same as [`VerifyConfig::build`] with the field overridden.
    pub fn build_over(&self, field: &FieldSpec, choice: RootChoice) -> Result<CaseSpec, ConfigError> {
        if self.window < 0 {
            return Err(ConfigError::Invalid(format!("window must be nonnegative, got {}", self.window)));
        }
        let constants = self.resolve_constants(field, choice)?;
        let source = self.algebra(&self.source, field, &constants)?;
        let target = self.algebra(&self.target, field, &constants)?;
        let pi_images =
            self.pi.iter().map(|s| target.weights().parse_element(s)).collect::<Result<Vec<_>, _>>()?;
        let mut phi_images = Vec::with_capacity(self.phi.len());
        for terms in &self.phi {
            let mut image = AlgebraElement::zero();
            for t in terms {
                if t.exp.len() != target.num_vars() {
                    return Err(ConfigError::Invalid(format!(
                        "exponent vector {:?} has {} entries, target has {} generators",
                        t.exp,
                        t.exp.len(),
                        target.num_vars()
                    )));
                }
                let c = eval_expr(&t.coeff, field, &constants)?;
                image = image.add(&target.reduce(&Monomial(t.exp.clone()), &c));
            }
            phi_images.push(image);
        }
        let expected_kernel = match &self.kernel {
            Some(ks) => Some(
                ks.iter()
                    .map(|s| source.weights().parse_element(s))
                    .collect::<Result<Vec<_>, _>>()?,
            ),
            None => None,
        };
        Ok(CaseSpec {
            name: self.name.clone().unwrap_or_else(|| "config".into()),
            field: *field,
            source: Arc::new(source),
            target: Arc::new(target),
            pi_images,
            phi_images,
            constants,
            expected_kernel,
            kernel_generator: None,
            tampered: Vec::new(),
        })
    }

    fn algebra(
        &self,
        cfg: &AlgebraConfig,
        field: &FieldSpec,
        constants: &ConstantBindings,
    ) -> Result<CoordinateAlgebra, ConfigError> {
        let weights = WeightSequence::new(cfg.weights.clone())?;
        let values: Vec<FieldElement> =
            cfg.params.iter().map(|e| eval_expr(e, field, constants)).collect::<Result<_, _>>()?;
        Ok(algebra_from_params(weights, values, field)?)
    }
}

/// Accepts either the free parameters `lambda_4..lambda_t` or the full list
/// `lambda_3..lambda_t` with `lambda_3 = 1`.
pub fn algebra_from_params(
    weights: WeightSequence,
    values: Vec<FieldElement>,
    field: &FieldSpec,
) -> Result<CoordinateAlgebra, AlgebraError> {
    if weights.len() >= 3 && values.len() == weights.len() - 2 {
        CoordinateAlgebra::new(weights, values, *field)
    } else {
        CoordinateAlgebra::normalized(weights, &values, *field)
    }
}

fn solve(poly: &[FieldElement], field: &FieldSpec, choice: RootChoice) -> Result<Option<FieldElement>, ConfigError> {
    let degree = poly.iter().rposition(|c| !c.is_zero());
    match degree {
        Some(1) => Ok(Some(poly[0].neg().try_div(&poly[1])?)),
        _ => Ok(find_root_with(poly, field, choice)?),
    }
}

/// Evaluates `+ - * / ^`, parentheses, integer literals and constant names.
pub fn eval_expr(expr: &str, field: &FieldSpec, constants: &ConstantBindings) -> Result<FieldElement, ConfigError> {
    let tokens = tokenize(expr)?;
    let mut p = Parser { expr, tokens, pos: 0, field, constants };
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(p.error("trailing input"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Name(String),
    Op(char),
}

fn tokenize(expr: &str) -> Result<Vec<Token>, ConfigError> {
    let mut out = Vec::new();
    let chars: Vec<char> = expr.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push(Token::Num(s.parse().expect("digits")));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push(Token::Name(chars[start..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Token::Op(c));
            i += 1;
        } else {
            return Err(ConfigError::Expr { expr: expr.into(), reason: format!("unexpected character {c:?}") });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    expr: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    field: &'a FieldSpec,
    constants: &'a ConstantBindings,
}

impl Parser<'_> {
    fn error(&self, reason: impl Into<String>) -> ConfigError {
        ConfigError::Expr { expr: self.expr.into(), reason: reason.into() }
    }

    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Token::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<FieldElement, ConfigError> {
        let mut acc = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            acc = if op == '+' { acc.try_add(&rhs)? } else { acc.try_sub(&rhs)? };
        }
        Ok(acc)
    }

    fn product(&mut self) -> Result<FieldElement, ConfigError> {
        let mut acc = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if op == '*' { acc.try_mul(&rhs)? } else { acc.try_div(&rhs)? };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FieldElement, ConfigError> {
        match self.peek_op() {
            Some('-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<FieldElement, ConfigError> {
        let base = self.atom()?;
        if self.peek_op() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.tokens.get(self.pos) {
            Some(Token::Num(n)) => {
                let e: u64 = n.try_into().map_err(|_| self.error("exponent too large"))?;
                self.pos += 1;
                Ok(base.pow(e))
            }
            _ => Err(self.error("exponent must be a nonnegative integer literal")),
        }
    }

    fn atom(&mut self) -> Result<FieldElement, ConfigError> {
        let tok = self.tokens.get(self.pos).cloned().ok_or_else(|| self.error("unexpected end of input"))?;
        self.pos += 1;
        match tok {
            Token::Num(n) => Ok(self.field.from_bigint(&n)),
            Token::Name(name) => {
                self.constants.get(&name).cloned().ok_or_else(|| self.error(format!("unknown constant {name:?}")))
            }
            Token::Op('(') => {
                let v = self.sum()?;
                if self.peek_op() != Some(')') {
                    return Err(self.error("missing ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Token::Op(c) => Err(self.error(format!("unexpected {c:?}"))),
        }
    }
}
