//! Built-in equivariantization cases, registered by name.
//!
//! Each case is a [`CaseStrategy`] that, given a field (and a parameter for
//! case D), produces a fully populated [`CaseSpec`]: source and target
//! algebras, the images of the generators under `pi` and `phi`, and the kernel
//! the construction is expected to have.

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, CoordinateAlgebra};
use crate::constants::{
    resolve_constants, CaseId, ConstantBindings, ConstantError, CBRT_MINUS_FOUR, DELTA, EPSILON, LAMBDA_PRIME,
    SQRT_MINUS_ONE, SQRT_ONE_MINUS_LAMBDA, SQRT_XI_PLUS,
};
use crate::field::{admissible_primes, FieldElement, FieldSpec, RootChoice};
use crate::group::{GroupElement, GroupError, WeightSequence};
use crate::group_hom::GroupHom;
use crate::verifier::{AlgebraHom, VerifyError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error(transparent)]
    Constant(#[from] ConstantError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("unknown case {0:?}")]
    Unknown(String),
    #[error("invalid tamper: {0}")]
    Tamper(String),
}

/// Everything needed to run the verification pipeline on one homomorphism.
#[derive(Debug, Clone)]
pub struct CaseSpec {
    pub name: String,
    pub field: FieldSpec,
    pub source: Arc<CoordinateAlgebra>,
    pub target: Arc<CoordinateAlgebra>,
    pub pi_images: Vec<GroupElement>,
    pub phi_images: Vec<AlgebraElement>,
    pub constants: ConstantBindings,
    pub expected_kernel: Option<Vec<GroupElement>>,
    /// Element of the source whose cyclic subgroup is the expected kernel.
    pub kernel_generator: Option<GroupElement>,
    pub tampered: Vec<String>,
}

impl CaseSpec {
    pub fn group_hom(&self) -> Result<GroupHom, VerifyError> {
        Ok(GroupHom::new(
            self.source.weights().clone(),
            self.target.weights().clone(),
            self.pi_images.clone(),
        )?)
    }

    pub fn algebra_hom(&self) -> Result<AlgebraHom, VerifyError> {
        AlgebraHom::new(
            Arc::clone(&self.source),
            Arc::clone(&self.target),
            self.group_hom()?,
            self.phi_images.clone(),
        )
    }

    pub fn apply_tamper(&mut self, tamper: &Tamper) -> Result<(), CaseError> {
        match tamper {
            Tamper::TargetLambda(value) => {
                let mut params = self.target.params().to_vec();
                if params.len() < 2 {
                    return Err(CaseError::Tamper(format!(
                        "S({}) has no free parameter to replace",
                        self.target.weights()
                    )));
                }
                *params.last_mut().expect("nonempty") = value.clone();
                self.target =
                    Arc::new(CoordinateAlgebra::new(self.target.weights().clone(), params, self.field)?);
            }
            Tamper::PiImage { index, image } => {
                let slot = self
                    .pi_images
                    .get_mut(*index)
                    .ok_or_else(|| CaseError::Tamper(format!("no generator {}", index + 1)))?;
                *slot = image.clone();
            }
            Tamper::PhiImage { index, image } => {
                let slot = self
                    .phi_images
                    .get_mut(*index)
                    .ok_or_else(|| CaseError::Tamper(format!("no generator {}", index + 1)))?;
                *slot = image.clone();
            }
            Tamper::ZeroPhi => {
                self.phi_images.iter_mut().for_each(|p| *p = AlgebraElement::zero());
            }
        }
        self.tampered.push(tamper.describe());
        Ok(())
    }

    /// Parses `lambda=<v>`, `pi<j>=<l;l1,...>`, `phi<j>=<element>` or `phi=zero`.
    pub fn parse_tamper(&self, s: &str) -> Result<Tamper, CaseError> {
        let (key, value) = s.split_once('=').ok_or_else(|| CaseError::Tamper(format!("{s:?} has no '='")))?;
        let key = key.trim();
        let index = |prefix: &str| -> Result<usize, CaseError> {
            let j: usize = key[prefix.len()..]
                .parse()
                .map_err(|_| CaseError::Tamper(format!("bad generator index in {key:?}")))?;
            j.checked_sub(1).ok_or_else(|| CaseError::Tamper("generators are numbered from 1".into()))
        };
        if key == "lambda" {
            let v = self.field.parse_element(value).map_err(ConstantError::from)?;
            Ok(Tamper::TargetLambda(v))
        } else if key == "phi" && value.trim() == "zero" {
            Ok(Tamper::ZeroPhi)
        } else if key.starts_with("pi") {
            Ok(Tamper::PiImage { index: index("pi")?, image: self.target.weights().parse_element(value)? })
        } else if key.starts_with("phi") {
            Ok(Tamper::PhiImage { index: index("phi")?, image: self.target.parse_element(value)? })
        } else {
            Err(CaseError::Tamper(format!("unknown key {key:?}")))
        }
    }
}

/// Deliberate perturbations used as negative controls.
#[derive(Debug, Clone, PartialEq)]
pub enum Tamper {
    /// Replace the last parameter of the target algebra.
    TargetLambda(FieldElement),
    PiImage { index: usize, image: GroupElement },
    PhiImage { index: usize, image: AlgebraElement },
    /// Send every generator to zero.
    ZeroPhi,
}

impl Tamper {
    pub fn describe(&self) -> String {
        match self {
            Tamper::TargetLambda(v) => format!("lambda={v}"),
            Tamper::PiImage { index, image } => format!("pi{}={image}", index + 1),
            Tamper::PhiImage { index, image } => format!("phi{}={}", index + 1, image.render('x')),
            Tamper::ZeroPhi => "phi=zero".to_string(),
        }
    }
}

/// One built-in case.
pub trait CaseStrategy: Send + Sync {
    fn id(&self) -> CaseId;

    fn description(&self) -> &'static str;

    fn needs_lambda(&self) -> bool {
        false
    }

    /// The string-group part, which does not depend on the field.
    fn group_hom(&self) -> GroupHom;

    fn expected_kernel(&self) -> Vec<GroupElement>;

    fn build(&self, field: &FieldSpec, lambda: Option<&FieldElement>, choice: RootChoice)
        -> Result<CaseSpec, CaseError>;
}

fn weights(w: &[i64]) -> WeightSequence {
    WeightSequence::new(w.to_vec()).expect("built-in weights are valid")
}

fn elem(p: &WeightSequence, s: &str) -> GroupElement {
    p.parse_element(s).expect("built-in literal")
}

/// Sum of terms `coeff * monomial`, reduced in `alg`.
fn poly(alg: &CoordinateAlgebra, terms: &[(FieldElement, &[u32])]) -> AlgebraElement {
    terms.iter().fold(AlgebraElement::zero(), |acc, (c, e)| {
        acc.add(&alg.reduce(&crate::algebra::Monomial(e.to_vec()), c))
    })
}

fn bound<'a>(c: &'a ConstantBindings, name: &str) -> &'a FieldElement {
    c.get(name).expect("resolve_constants binds every constant the case needs")
}

struct CaseA;

impl CaseStrategy for CaseA {
    fn id(&self) -> CaseId {
        CaseId::A
    }

    fn group_hom(&self) -> GroupHom {
        let (q, p) = (weights(&[4, 4, 2]), weights(&[2, 2, 2, 2]));
        let images = ["0;1,0,0,0", "0;0,1,0,0", "0;0,0,1,1"].iter().map(|s| elem(&p, s)).collect();
        GroupHom::new(q, p, images).expect("built-in images are well defined")
    }

    fn expected_kernel(&self) -> Vec<GroupElement> {
        let q = weights(&[4, 4, 2]);
        ["0;0,0,0", "-1;2,2,0"].iter().map(|s| elem(&q, s)).collect()
    }

    fn description(&self) -> &'static str {
        "L(4,4,2) -> L(2,2,2,2), S(4,4,2) -> S(2,2,2,2;-1), kernel Z(2w)"
    }

    fn build(&self, field: &FieldSpec, _: Option<&FieldElement>, choice: RootChoice) -> Result<CaseSpec, CaseError> {
        let constants = resolve_constants(CaseId::A, field, None, choice)?;
        let (q, p) = (weights(&[4, 4, 2]), weights(&[2, 2, 2, 2]));
        let source = CoordinateAlgebra::normalized(q.clone(), &[], *field)?;
        let target = CoordinateAlgebra::normalized(p.clone(), &[field.from_i64(-1)], *field)?;
        let one = field.one();
        let phi = vec![
            poly(&target, &[(one.clone(), &[1, 0, 0, 0])]),
            poly(&target, &[(one.clone(), &[0, 1, 0, 0])]),
            poly(&target, &[(one, &[0, 0, 1, 1])]),
        ];
        Ok(CaseSpec {
            name: "A".into(),
            field: *field,
            pi_images: self.group_hom().gen_images().to_vec(),
            phi_images: phi,
            constants,
            expected_kernel: Some(self.expected_kernel()),
            kernel_generator: Some(q.dualizing().smul(2)),
            source: Arc::new(source),
            target: Arc::new(target),
            tampered: Vec::new(),
        })
    }
}

struct CaseB;

impl CaseStrategy for CaseB {
    fn id(&self) -> CaseId {
        CaseId::B
    }

    fn group_hom(&self) -> GroupHom {
        let (q, p) = (weights(&[6, 3, 2]), weights(&[2, 2, 2, 2]));
        let images = ["0;0,0,0,1", "1;0,0,0,0", "0;1,1,1,0"].iter().map(|s| elem(&p, s)).collect();
        GroupHom::new(q, p, images).expect("built-in images are well defined")
    }

    fn expected_kernel(&self) -> Vec<GroupElement> {
        let q = weights(&[6, 3, 2]);
        ["0;0,0,0", "-1;4,1,0", "-1;2,2,0"].iter().map(|s| elem(&q, s)).collect()
    }

    fn description(&self) -> &'static str {
        "L(6,3,2) -> L(2,2,2,2), S(6,3,2) -> S(2,2,2,2;eps), kernel Z(2w)"
    }

    fn build(&self, field: &FieldSpec, _: Option<&FieldElement>, choice: RootChoice) -> Result<CaseSpec, CaseError> {
        let constants = resolve_constants(CaseId::B, field, None, choice)?;
        let eps = bound(&constants, EPSILON);
        let delta = bound(&constants, DELTA);
        let (q, p) = (weights(&[6, 3, 2]), weights(&[2, 2, 2, 2]));
        let source = CoordinateAlgebra::normalized(q.clone(), &[], *field)?;
        let target = CoordinateAlgebra::normalized(p.clone(), std::slice::from_ref(eps), *field)?;
        let one = field.one();
        let phi = vec![
            poly(&target, &[(one.clone(), &[0, 0, 0, 1])]),
            poly(&target, &[(one, &[0, 2, 0, 0]), (eps - &field.one(), &[2, 0, 0, 0])]),
            poly(&target, &[(delta.clone(), &[1, 1, 1, 0])]),
        ];
        Ok(CaseSpec {
            name: "B".into(),
            field: *field,
            pi_images: self.group_hom().gen_images().to_vec(),
            phi_images: phi,
            expected_kernel: Some(self.expected_kernel()),
            kernel_generator: Some(q.dualizing().smul(2)),
            constants,
            source: Arc::new(source),
            target: Arc::new(target),
            tampered: Vec::new(),
        })
    }
}

struct CaseC;

impl CaseStrategy for CaseC {
    fn id(&self) -> CaseId {
        CaseId::C
    }

    fn group_hom(&self) -> GroupHom {
        let (q, p) = (weights(&[6, 3, 2]), weights(&[3, 3, 3]));
        let images = ["0;0,0,1", "0;1,1,0", "1;0,0,0"].iter().map(|s| elem(&p, s)).collect();
        GroupHom::new(q, p, images).expect("built-in images are well defined")
    }

    fn expected_kernel(&self) -> Vec<GroupElement> {
        let q = weights(&[6, 3, 2]);
        ["0;0,0,0", "-1;3,0,1"].iter().map(|s| elem(&q, s)).collect()
    }

    fn description(&self) -> &'static str {
        "L(6,3,2) -> L(3,3,3), S(6,3,2) -> S(3,3,3), kernel Z(3w)"
    }

    fn build(&self, field: &FieldSpec, _: Option<&FieldElement>, choice: RootChoice) -> Result<CaseSpec, CaseError> {
        let constants = resolve_constants(CaseId::C, field, None, choice)?;
        let i = bound(&constants, SQRT_MINUS_ONE);
        let r = bound(&constants, CBRT_MINUS_FOUR);
        let (q, p) = (weights(&[6, 3, 2]), weights(&[3, 3, 3]));
        let source = CoordinateAlgebra::normalized(q.clone(), &[], *field)?;
        let target = CoordinateAlgebra::normalized(p.clone(), &[], *field)?;
        let phi = vec![
            poly(&target, &[(field.one(), &[0, 0, 1])]),
            poly(&target, &[(r.clone(), &[1, 1, 0])]),
            poly(&target, &[(i.clone(), &[3, 0, 0]), (i.clone(), &[0, 3, 0])]),
        ];
        Ok(CaseSpec {
            name: "C".into(),
            field: *field,
            pi_images: self.group_hom().gen_images().to_vec(),
            phi_images: phi,
            expected_kernel: Some(self.expected_kernel()),
            kernel_generator: Some(q.dualizing().smul(3)),
            constants,
            source: Arc::new(source),
            target: Arc::new(target),
            tampered: Vec::new(),
        })
    }
}

/// `S(2,2,2,2; lambda') -> S(2,2,2,2; lambda)`: the generator images satisfy the
/// relations of the algebra with parameter `lambda'` inside the algebra with
/// parameter `lambda`.
struct CaseD;

impl CaseStrategy for CaseD {
    fn id(&self) -> CaseId {
        CaseId::D
    }

    fn group_hom(&self) -> GroupHom {
        let (q, p) = (weights(&[2, 2, 2, 2]), weights(&[2, 2, 2, 2]));
        let images = ["0;1,0,1,0", "0;0,1,0,1", "1;0,0,0,0", "1;0,0,0,0"].iter().map(|s| elem(&p, s)).collect();
        GroupHom::new(q, p, images).expect("built-in images are well defined")
    }

    fn expected_kernel(&self) -> Vec<GroupElement> {
        let q = weights(&[2, 2, 2, 2]);
        ["0;0,0,0,0", "-1;0,0,1,1"].iter().map(|s| elem(&q, s)).collect()
    }

    fn description(&self) -> &'static str {
        "L(2,2,2,2) -> L(2,2,2,2), S(2,2,2,2;lambda') -> S(2,2,2,2;lambda), kernel Z(x3-x4)"
    }

    fn needs_lambda(&self) -> bool {
        true
    }

    fn build(
        &self,
        field: &FieldSpec,
        lambda: Option<&FieldElement>,
        choice: RootChoice,
    ) -> Result<CaseSpec, CaseError> {
        let constants = resolve_constants(CaseId::D, field, lambda, choice)?;
        let lambda = lambda.expect("checked by resolve_constants");
        let s = bound(&constants, SQRT_ONE_MINUS_LAMBDA);
        let u = bound(&constants, SQRT_XI_PLUS);
        let lambda_prime = bound(&constants, LAMBDA_PRIME);
        let p = weights(&[2, 2, 2, 2]);
        let source = CoordinateAlgebra::normalized(p.clone(), std::slice::from_ref(lambda_prime), *field)?;
        let target = CoordinateAlgebra::normalized(p.clone(), std::slice::from_ref(lambda), *field)?;
        let one = field.one();
        let phi = vec![
            poly(&target, &[(u.clone(), &[1, 0, 1, 0])]),
            poly(&target, &[(one.clone(), &[0, 1, 0, 1])]),
            poly(&target, &[(one.clone(), &[0, 2, 0, 0]), ((&one + s).neg(), &[2, 0, 0, 0])]),
            poly(&target, &[(one.clone(), &[0, 2, 0, 0]), ((&one - s).neg(), &[2, 0, 0, 0])]),
        ];
        Ok(CaseSpec {
            name: "D".into(),
            field: *field,
            pi_images: self.group_hom().gen_images().to_vec(),
            phi_images: phi,
            expected_kernel: Some(self.expected_kernel()),
            kernel_generator: Some(&p.generator(2) - &p.generator(3)),
            constants,
            source: Arc::new(source),
            target: Arc::new(target),
            tampered: Vec::new(),
        })
    }
}

/// Named collection of case strategies.
pub struct CaseRegistry {
    cases: BTreeMap<String, Box<dyn CaseStrategy>>,
}

impl Default for CaseRegistry {
    fn default() -> Self {
        Self::builtin()
    }
}

impl CaseRegistry {
    pub fn empty() -> Self {
        Self { cases: BTreeMap::new() }
    }

    pub fn builtin() -> Self {
        let mut r = Self::empty();
        r.register(Box::new(CaseA));
        r.register(Box::new(CaseB));
        r.register(Box::new(CaseC));
        r.register(Box::new(CaseD));
        r
    }

    pub fn register(&mut self, case: Box<dyn CaseStrategy>) {
        self.cases.insert(case.id().name().to_string(), case);
    }

    pub fn get(&self, name: &str) -> Result<&dyn CaseStrategy, CaseError> {
        self.cases
            .get(&name.trim().to_ascii_uppercase())
            .map(AsRef::as_ref)
            .ok_or_else(|| CaseError::Unknown(name.to_string()))
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.cases.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn CaseStrategy> {
        self.cases.values().map(AsRef::as_ref)
    }
}

/// Convenience wrapper over the built-in registry.
pub fn builtin_case(
    id: CaseId,
    field: &FieldSpec,
    lambda: Option<&FieldElement>,
) -> Result<CaseSpec, CaseError> {
    CaseRegistry::builtin().get(id.name())?.build(field, lambda, RootChoice::Smallest)
}

/// Smallest primes in `5..=max` over which the case can be built. `lambda` is
/// an integer literal reduced into each candidate field.
pub fn auto_primes(
    case: &dyn CaseStrategy,
    lambda: Option<&str>,
    count: usize,
    max: u64,
    choice: RootChoice,
) -> Vec<CaseSpec> {
    admissible_primes(5, max)
        .filter_map(|q| {
            let field = FieldSpec::Prime(q);
            let lambda = match lambda {
                Some(s) => Some(field.parse_element(s).ok()?),
                None => None,
            };
            case.build(&field, lambda.as_ref(), choice).ok()
        })
        .take(count)
        .collect()
}
