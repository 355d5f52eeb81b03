//! Algebraic constants needed by the built-in homomorphisms, realized in a
//! concrete field.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::field::{find_roots, FieldElement, FieldError, FieldSpec, RootChoice};

/// The four built-in equivariantization cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    /// `L(4,4,2) -> L(2,2,2,2)`, target parameter `-1`.
    A,
    /// `L(6,3,2) -> L(2,2,2,2)`, target parameter `epsilon`.
    B,
    /// `L(6,3,2) -> L(3,3,3)`.
    C,
    /// `L(2,2,2,2) -> L(2,2,2,2)`, parameters `lambda'` and `lambda`.
    D,
}

impl CaseId {
    pub const ALL: [CaseId; 4] = [CaseId::A, CaseId::B, CaseId::C, CaseId::D];

    pub fn name(&self) -> &'static str {
        match self {
            CaseId::A => "A",
            CaseId::B => "B",
            CaseId::C => "C",
            CaseId::D => "D",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for CaseId {
    type Err = ConstantError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(CaseId::A),
            "B" => Ok(CaseId::B),
            "C" => Ok(CaseId::C),
            "D" => Ok(CaseId::D),
            _ => Err(ConstantError::UnknownCase(s.to_string())),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstantError {
    #[error("{name} does not exist over {field}; try another prime (--auto-prime)")]
    ConstantUnavailable { name: String, field: FieldSpec },
    #[error("invalid lambda: {0}")]
    InvalidLambda(String),
    #[error("unknown case {0:?}")]
    UnknownCase(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("bound constant {name} = {value} violates its defining equation")]
    Violated { name: String, value: String },
}

pub const EPSILON: &str = "epsilon";
pub const DELTA: &str = "delta";
pub const SQRT_MINUS_ONE: &str = "sqrt_minus_one";
pub const CBRT_MINUS_FOUR: &str = "cbrt_minus_four";
pub const LAMBDA: &str = "lambda";
pub const SQRT_ONE_MINUS_LAMBDA: &str = "sqrt_one_minus_lambda";
pub const XI_PLUS: &str = "xi_plus";
pub const XI_MINUS: &str = "xi_minus";
pub const SQRT_XI_PLUS: &str = "sqrt_xi_plus";
pub const LAMBDA_PRIME: &str = "lambda_prime";

/// Named constants bound in a field. Only the constants a case needs are present.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstantBindings {
    field: Option<FieldSpec>,
    values: BTreeMap<String, FieldElement>,
}

impl ConstantBindings {
    pub fn new(field: FieldSpec) -> Self {
        Self { field: Some(field), values: BTreeMap::new() }
    }

    pub fn insert(&mut self, name: impl Into<String>, value: FieldElement) {
        self.values.insert(name.into(), value);
    }

    pub fn get(&self, name: &str) -> Option<&FieldElement> {
        self.values.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &FieldElement)> {
        self.values.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn epsilon(&self) -> Option<&FieldElement> {
        self.get(EPSILON)
    }

    pub fn delta(&self) -> Option<&FieldElement> {
        self.get(DELTA)
    }

    pub fn lambda_prime(&self) -> Option<&FieldElement> {
        self.get(LAMBDA_PRIME)
    }

    /// Re-evaluates the defining equation of every bound constant.
    pub fn verify(&self) -> Result<(), ConstantError> {
        let Some(field) = self.field else { return Ok(()) };
        let int = |n: i64| field.from_i64(n);
        let violated = |name: &str, value: &FieldElement| ConstantError::Violated {
            name: name.to_string(),
            value: value.to_string(),
        };
        for (name, value) in self.iter() {
            let ok = match name {
                EPSILON => (&(&value.pow(2) - value) + &int(1)).is_zero(),
                DELTA => match self.epsilon() {
                    Some(eps) => value.pow(2) == &(&int(6) * eps) - &int(3) && !value.is_zero(),
                    None => false,
                },
                SQRT_MINUS_ONE => value.pow(2) == int(-1),
                CBRT_MINUS_FOUR => value.pow(3) == int(-4),
                SQRT_ONE_MINUS_LAMBDA => match self.get(LAMBDA) {
                    Some(l) => value.pow(2) == &int(1) - l,
                    None => false,
                },
                XI_PLUS | XI_MINUS => match (self.get(LAMBDA), self.get(SQRT_ONE_MINUS_LAMBDA)) {
                    (Some(l), Some(s)) => {
                        let two_s = &int(2) * s;
                        let base = &int(2) - l;
                        let expect = if name == XI_PLUS { &base + &two_s } else { &base - &two_s };
                        *value == expect
                    }
                    _ => false,
                },
                SQRT_XI_PLUS => self.get(XI_PLUS).is_some_and(|x| value.pow(2) == *x),
                LAMBDA_PRIME => match (self.get(XI_PLUS), self.get(XI_MINUS)) {
                    (Some(p), Some(m)) => &(value * p) == m,
                    _ => false,
                },
                _ => true,
            };
            if !ok {
                return Err(violated(name, value));
            }
        }
        Ok(())
    }
}

fn roots(field: &FieldSpec, coeffs: &[FieldElement], choice: RootChoice) -> Result<Vec<FieldElement>, ConstantError> {
    let mut r = find_roots(coeffs, field)?;
    if choice == RootChoice::Largest {
        r.reverse();
    }
    Ok(r)
}

/// Binds the constants the case needs. `lambda` is required for case D.
pub fn resolve_constants(
    case: CaseId,
    field: &FieldSpec,
    lambda: Option<&FieldElement>,
    choice: RootChoice,
) -> Result<ConstantBindings, ConstantError> {
    let int = |n: i64| field.from_i64(n);
    let mut out = ConstantBindings::new(*field);
    match case {
        CaseId::A => {}
        CaseId::B => {
            // Delta exists for at most one of the two epsilons in general.
            let eps_roots = roots(field, &[int(1), int(-1), int(1)], choice)?;
            if eps_roots.is_empty() {
                return Err(ConstantError::ConstantUnavailable { name: EPSILON.into(), field: *field });
            }
            let mut found = None;
            for eps in eps_roots {
                let target = &(&int(6) * &eps) - &int(3);
                if target.is_zero() {
                    continue;
                }
                if let Some(delta) = roots(field, &[target.neg(), int(0), int(1)], choice)?.into_iter().next() {
                    found = Some((eps, delta));
                    break;
                }
            }
            let (eps, delta) = found.ok_or(ConstantError::ConstantUnavailable { name: DELTA.into(), field: *field })?;
            out.insert(EPSILON, eps);
            out.insert(DELTA, delta);
        }
        CaseId::C => {
            let i = roots(field, &[int(1), int(0), int(1)], choice)?
                .into_iter()
                .next()
                .ok_or(ConstantError::ConstantUnavailable { name: SQRT_MINUS_ONE.into(), field: *field })?;
            let r = roots(field, &[int(4), int(0), int(0), int(1)], choice)?
                .into_iter()
                .next()
                .ok_or(ConstantError::ConstantUnavailable { name: CBRT_MINUS_FOUR.into(), field: *field })?;
            out.insert(SQRT_MINUS_ONE, i);
            out.insert(CBRT_MINUS_FOUR, r);
        }
        CaseId::D => {
            let lambda = lambda.ok_or_else(|| ConstantError::InvalidLambda("case D needs a lambda".into()))?;
            if lambda.field() != *field {
                return Err(FieldError::BackendMismatch(lambda.field().to_string(), field.to_string()).into());
            }
            if lambda.is_zero() || lambda.is_one() {
                return Err(ConstantError::InvalidLambda(format!("lambda = {lambda} must avoid 0 and 1")));
            }
            let one_minus = &int(1) - lambda;
            let s_roots = roots(field, &[one_minus.neg(), int(0), int(1)], choice)?;
            if s_roots.is_empty() {
                return Err(ConstantError::ConstantUnavailable { name: SQRT_ONE_MINUS_LAMBDA.into(), field: *field });
            }
            let mut chosen = None;
            for s in s_roots {
                let two_s = &int(2) * &s;
                let xi_plus = &(&int(2) - lambda) + &two_s;
                let xi_minus = &(&int(2) - lambda) - &two_s;
                if xi_plus.is_zero() {
                    continue;
                }
                if let Some(u) = roots(field, &[xi_plus.neg(), int(0), int(1)], choice)?.into_iter().next() {
                    chosen = Some((s, xi_plus, xi_minus, u));
                    break;
                }
            }
            let (s, xi_plus, xi_minus, u) =
                chosen.ok_or(ConstantError::ConstantUnavailable { name: SQRT_XI_PLUS.into(), field: *field })?;
            let lambda_prime = xi_minus.try_div(&xi_plus)?;
            if lambda_prime.is_zero() || lambda_prime.is_one() {
                return Err(ConstantError::InvalidLambda(format!(
                    "resolved lambda' = {lambda_prime} must avoid 0 and 1"
                )));
            }
            out.insert(LAMBDA, lambda.clone());
            out.insert(SQRT_ONE_MINUS_LAMBDA, s);
            out.insert(XI_PLUS, xi_plus);
            out.insert(XI_MINUS, xi_minus);
            out.insert(SQRT_XI_PLUS, u);
            out.insert(LAMBDA_PRIME, lambda_prime);
        }
    }
    out.verify()?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fq(q: u64, n: i64) -> FieldElement {
        FieldSpec::Prime(q).from_i64(n)
    }

    #[test]
    fn case_b_mod_seven_backtracks_to_epsilon_three() {
        let f = FieldSpec::Prime(7);
        let c = resolve_constants(CaseId::B, &f, None, RootChoice::Smallest).unwrap();
        assert_eq!(c.epsilon(), Some(&fq(7, 3)));
        assert_eq!(c.delta(), Some(&fq(7, 1)));
        // starting from the largest root, epsilon = 5 is tried first and rejected
        let c = resolve_constants(CaseId::B, &f, None, RootChoice::Largest).unwrap();
        assert_eq!(c.epsilon(), Some(&fq(7, 3)));
        assert_eq!(c.delta(), Some(&fq(7, 6)));
    }

    #[test]
    fn case_c_mod_five() {
        let c = resolve_constants(CaseId::C, &FieldSpec::Prime(5), None, RootChoice::Smallest).unwrap();
        assert_eq!(c.get(SQRT_MINUS_ONE), Some(&fq(5, 2)));
        assert_eq!(c.get(CBRT_MINUS_FOUR), Some(&fq(5, 1)));
    }

    #[test]
    fn case_d_mod_seven() {
        let f = FieldSpec::Prime(7);
        let c = resolve_constants(CaseId::D, &f, Some(&fq(7, -1)), RootChoice::Smallest).unwrap();
        assert_eq!(c.get(SQRT_ONE_MINUS_LAMBDA), Some(&fq(7, 3)));
        assert_eq!(c.get(XI_PLUS), Some(&fq(7, 2)));
        assert_eq!(c.get(SQRT_XI_PLUS), Some(&fq(7, 3)));
        assert_eq!(c.get(XI_MINUS), Some(&fq(7, 4)));
        assert_eq!(c.lambda_prime(), Some(&fq(7, 2)));
        // 17 - 12 sqrt(2) with sqrt(2) = 3
        assert_eq!(c.lambda_prime(), Some(&fq(7, 17 - 36)));
    }

    #[test]
    fn case_d_over_rationals() {
        let q = FieldSpec::Rationals;
        let c = resolve_constants(CaseId::D, &q, Some(&q.from_i64(-3)), RootChoice::Smallest).unwrap();
        // sqrt(4) = -2 is the smallest root: xi+ = 5 - 4 = 1, xi- = 9
        assert_eq!(c.get(SQRT_ONE_MINUS_LAMBDA).unwrap().to_string(), "-2");
        assert_eq!(c.lambda_prime().unwrap().to_string(), "9");
    }

    #[test]
    fn unavailable_constants() {
        let err = resolve_constants(CaseId::B, &FieldSpec::Rationals, None, RootChoice::Smallest).unwrap_err();
        assert!(matches!(err, ConstantError::ConstantUnavailable { ref name, .. } if name == EPSILON));
        // -1 is not a square mod 7
        let err = resolve_constants(CaseId::C, &FieldSpec::Prime(7), None, RootChoice::Smallest).unwrap_err();
        assert!(matches!(err, ConstantError::ConstantUnavailable { ref name, .. } if name == SQRT_MINUS_ONE));
    }

    #[test]
    fn invalid_lambda() {
        let f = FieldSpec::Prime(7);
        for bad in [0, 1] {
            let err = resolve_constants(CaseId::D, &f, Some(&fq(7, bad)), RootChoice::Smallest).unwrap_err();
            assert!(matches!(err, ConstantError::InvalidLambda(_)));
        }
        assert!(resolve_constants(CaseId::D, &f, None, RootChoice::Smallest).is_err());
    }

    #[test]
    fn tampered_binding_is_caught() {
        let f = FieldSpec::Prime(7);
        let mut c = resolve_constants(CaseId::B, &f, None, RootChoice::Smallest).unwrap();
        c.insert(DELTA, fq(7, 2));
        assert!(matches!(c.verify(), Err(ConstantError::Violated { .. })));
    }
}
