//! Graded algebra homomorphisms `S(q, mu) -> S(p, lambda)` over a group
//! homomorphism `pi: L(q) -> L(p)`, and the degree-wise check that the induced
//! map from `pi_* S(q, mu)` onto the restriction subalgebra `S(p, lambda)_{Im pi}`
//! is bijective.
//!
//! The pushed-forward algebra is never built: its component in degree `x` is
//! the direct sum of the source components over the fiber `pi^{-1}(x)`.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, CoordinateAlgebra, Monomial};
use crate::group::GroupElement;
use crate::group_hom::{AdmissibilityReport, GroupHom, HomError};
use crate::linalg;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum VerifyError {
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("group homomorphism L({pi_source}) -> L({pi_target}) does not match algebras S({algebra_source}) -> S({algebra_target})")]
    WeightMismatch { pi_source: String, pi_target: String, algebra_source: String, algebra_target: String },
    #[error("expected {expected} generator images, got {got}")]
    ImageCount { expected: usize, got: usize },
    #[error("not graded: image of generator {} has degree {found}, expected pi(y{}) = {expected}", index + 1, index + 1)]
    Gradedness { index: usize, expected: String, found: String },
    #[error("relation {} is not preserved: residual {residual}", index + 1)]
    Relation { index: usize, residual: String },
}

impl VerifyError {
    /// Short error-class name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            VerifyError::Hom(HomError::WellDefinedness { .. }) => "WellDefinednessError",
            VerifyError::Hom(HomError::InfiniteFiber) => "InfiniteFiberError",
            VerifyError::Hom(_) => "GroupHomError",
            VerifyError::Algebra(_) => "AlgebraError",
            VerifyError::WeightMismatch { .. } | VerifyError::ImageCount { .. } => "ShapeError",
            VerifyError::Gradedness { .. } => "GradednessError",
            VerifyError::Relation { .. } => "RelationError",
        }
    }
}

/// An algebra homomorphism determined by generator images, validated to be
/// graded along `pi` and to respect the defining relations of the source.
#[derive(Debug, Clone)]
pub struct AlgebraHom {
    source: Arc<CoordinateAlgebra>,
    target: Arc<CoordinateAlgebra>,
    group_hom: GroupHom,
    gen_images: Vec<AlgebraElement>,
}

impl AlgebraHom {
    pub fn new(
        source: Arc<CoordinateAlgebra>,
        target: Arc<CoordinateAlgebra>,
        group_hom: GroupHom,
        gen_images: Vec<AlgebraElement>,
    ) -> Result<Self, VerifyError> {
        if group_hom.source() != source.weights() || group_hom.target() != target.weights() {
            return Err(VerifyError::WeightMismatch {
                pi_source: group_hom.source().to_string(),
                pi_target: group_hom.target().to_string(),
                algebra_source: source.weights().to_string(),
                algebra_target: target.weights().to_string(),
            });
        }
        if gen_images.len() != source.num_vars() {
            return Err(VerifyError::ImageCount { expected: source.num_vars(), got: gen_images.len() });
        }
        for (index, img) in gen_images.iter().enumerate() {
            target.check_element(img)?;
            if img.is_zero() {
                continue;
            }
            let expected = &group_hom.gen_images()[index];
            match target.degree_of(img)? {
                Some(d) if d == *expected => {}
                found => {
                    return Err(VerifyError::Gradedness {
                        index,
                        expected: expected.to_string(),
                        found: found.map_or_else(|| "inhomogeneous".to_string(), |d| d.to_string()),
                    })
                }
            }
        }
        let hom = Self { source, target, group_hom, gen_images };
        hom.check_relations()?;
        Ok(hom)
    }

    /// `phi(y_j)^{q_j} = phi(y_2)^{q_2} - mu_j phi(y_1)^{q_1}` for every `j >= 3`.
    fn check_relations(&self) -> Result<(), VerifyError> {
        let t = &self.target;
        let q = self.source.weights();
        if q.len() < 3 {
            return Ok(());
        }
        let first = t.pow(&self.gen_images[0], q.weight(0) as u32);
        let second = t.pow(&self.gen_images[1], q.weight(1) as u32);
        for j in 2..q.len() {
            let mu = &self.source.params()[j - 2];
            let lhs = t.pow(&self.gen_images[j], q.weight(j) as u32);
            let rhs = t.sub(&second, &first.scale(mu));
            let residual = t.sub(&lhs, &rhs);
            if !residual.is_zero() {
                return Err(VerifyError::Relation { index: j, residual: residual.render(t.symbol()) });
            }
        }
        Ok(())
    }

    pub fn source(&self) -> &Arc<CoordinateAlgebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<CoordinateAlgebra> {
        &self.target
    }

    pub fn group_hom(&self) -> &GroupHom {
        &self.group_hom
    }

    pub fn gen_images(&self) -> &[AlgebraElement] {
        &self.gen_images
    }

    pub fn apply(&self, a: &AlgebraElement) -> Result<AlgebraElement, VerifyError> {
        self.source.check_element(a)?;
        let mut cache = PowerCache::new(self);
        let mut out = AlgebraElement::zero();
        for (m, c) in a.terms() {
            out = out.add(&cache.image(m).scale(c));
        }
        Ok(out)
    }

    /// Checks degree `x` of the target: the images of the pooled source bases
    /// over the fiber must span the target component, and the dimensions must agree.
    pub fn check_surjective_at(&self, x: &GroupElement) -> Result<DegreeRecord, VerifyError> {
        let fiber = self.group_hom.fiber(x)?;
        self.record_for(x, fiber, &mut PowerCache::new(self))
    }

    fn record_for(
        &self,
        x: &GroupElement,
        fiber: Vec<GroupElement>,
        cache: &mut PowerCache<'_>,
    ) -> Result<DegreeRecord, VerifyError> {
        let target_basis = self.target.component_basis(x)?;
        let column: HashMap<&Monomial, usize> =
            target_basis.monomials.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let field = self.target.field();
        let mut rows = Vec::new();
        let mut source_dim = 0;
        for y in &fiber {
            let basis = self.source.component_basis(y)?;
            source_dim += basis.dim();
            for m in &basis.monomials {
                let img = cache.image(m);
                let mut row = vec![field.zero(); target_basis.dim()];
                for (tm, c) in img.terms() {
                    // graded images only hit monomials of degree x
                    let col = *column.get(tm).ok_or_else(|| VerifyError::Gradedness {
                        index: 0,
                        expected: x.to_string(),
                        found: self.target.monomial_degree(tm).to_string(),
                    })?;
                    row[col] = c.clone();
                }
                rows.push(row);
            }
        }
        let image_rank = if target_basis.dim() == 0 { 0 } else { linalg::rank(&rows) };
        Ok(DegreeRecord {
            degree: x.clone(),
            fiber,
            source_dim,
            target_dim: target_basis.dim(),
            image_rank,
        })
    }

    /// Admissibility of `pi` plus a degree record for every `x` in the image
    /// with `l`-coefficient in `[-window, window]`, sorted by degree.
    pub fn verify_iso_window(&self, window: i64) -> Result<IsoVerification, VerifyError> {
        let admissibility = self.group_hom.is_admissible(window)?;
        let candidates = self.target.weights().elements_in_window(-window, window);
        let mut records: Vec<DegreeRecord> = candidates
            .into_par_iter()
            .map_init(
                || PowerCache::new(self),
                |cache, x| -> Result<Option<DegreeRecord>, VerifyError> {
                    let fiber = self.group_hom.fiber(&x)?;
                    if fiber.is_empty() {
                        return Ok(None);
                    }
                    self.record_for(&x, fiber, cache).map(Some)
                },
            )
            .filter_map(Result::transpose)
            .collect::<Result<_, _>>()?;
        records.sort_by(|a, b| a.degree.cmp(&b.degree));
        Ok(IsoVerification { window, admissibility, records })
    }
}

/// Memoized powers of the generator images.
struct PowerCache<'a> {
    hom: &'a AlgebraHom,
    powers: Vec<Vec<AlgebraElement>>,
}

impl<'a> PowerCache<'a> {
    fn new(hom: &'a AlgebraHom) -> Self {
        let one = hom.target.one();
        Self { hom, powers: vec![vec![one]; hom.gen_images.len()] }
    }

    fn power(&mut self, j: usize, e: u32) -> &AlgebraElement {
        let e = e as usize;
        while self.powers[j].len() <= e {
            let next = self
                .hom
                .target
                .mul_unchecked(self.powers[j].last().expect("nonempty"), &self.hom.gen_images[j]);
            self.powers[j].push(next);
        }
        &self.powers[j][e]
    }

    fn image(&mut self, m: &Monomial) -> AlgebraElement {
        let mut acc = self.hom.target.one();
        for (j, &e) in m.exponents().iter().enumerate() {
            if e > 0 {
                let p = self.power(j, e).clone();
                acc = self.hom.target.mul_unchecked(&acc, &p);
            }
        }
        acc
    }
}

/// Dimension bookkeeping for one target degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeRecord {
    pub degree: GroupElement,
    pub fiber: Vec<GroupElement>,
    /// Sum of `mult` over the fiber.
    pub source_dim: usize,
    /// `mult(degree)`.
    pub target_dim: usize,
    pub image_rank: usize,
}

impl DegreeRecord {
    /// Surjective in this degree with matching dimensions, hence bijective.
    pub fn passes(&self) -> bool {
        self.source_dim == self.target_dim && self.target_dim == self.image_rank
    }
}

#[derive(Debug, Clone)]
pub struct IsoVerification {
    pub window: i64,
    pub admissibility: AdmissibilityReport,
    pub records: Vec<DegreeRecord>,
}

impl IsoVerification {
    pub fn failing_records(&self) -> impl Iterator<Item = &DegreeRecord> {
        self.records.iter().filter(|r| !r.passes())
    }

    pub fn passes(&self) -> bool {
        self.admissibility.is_admissible() && self.records.iter().all(DegreeRecord::passes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldSpec;
    use crate::group::WeightSequence;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn case_a(target_lambda: i64, z3_image: &str) -> Result<AlgebraHom, VerifyError> {
        let q = WeightSequence::new(vec![4, 4, 2]).unwrap();
        let p = WeightSequence::new(vec![2, 2, 2, 2]).unwrap();
        let src = Arc::new(CoordinateAlgebra::normalized(q.clone(), &[], Q).unwrap());
        let tgt = Arc::new(CoordinateAlgebra::normalized(p.clone(), &[Q.from_i64(target_lambda)], Q).unwrap());
        let pi = GroupHom::new(
            q,
            p.clone(),
            vec![p.generator(0), p.generator(1), p.parse_element("0;0,0,1,1").unwrap()],
        )?;
        let imgs = vec![
            tgt.parse_element("x1").unwrap(),
            tgt.parse_element("x2").unwrap(),
            tgt.parse_element(z3_image).unwrap(),
        ];
        AlgebraHom::new(src, tgt, pi, imgs)
    }

    #[test]
    fn case_a_is_a_hom() {
        let h = case_a(-1, "x3*x4").unwrap();
        let z1_sq = h.source().parse_element("z1^2").unwrap();
        assert_eq!(h.apply(&z1_sq).unwrap(), h.target().parse_element("x1^2").unwrap());
        assert_eq!(h.apply(&h.source().one()).unwrap(), h.target().one());
    }

    #[test]
    fn wrong_lambda_breaks_relation() {
        let err = case_a(2, "x3*x4").unwrap_err();
        assert_eq!(err.kind(), "RelationError");
    }

    #[test]
    fn inhomogeneous_image_is_not_graded() {
        let err = case_a(-1, "x3*x4 + x1").unwrap_err();
        assert_eq!(err.kind(), "GradednessError");
    }

    #[test]
    fn zero_image_violates_relation() {
        assert_eq!(case_a(-1, "0").unwrap_err().kind(), "RelationError");
    }

    #[test]
    fn surjective_at_c() {
        let h = case_a(-1, "x3*x4").unwrap();
        let r = h.check_surjective_at(&h.target().weights().canonical()).unwrap();
        assert_eq!(r.fiber.len(), 2);
        assert_eq!((r.source_dim, r.target_dim, r.image_rank), (2, 2, 2));
        assert!(r.passes());
        let w = h.target().weights().parse_element("-2;0,0,1,1").unwrap();
        let r = h.check_surjective_at(&w).unwrap();
        assert_eq!((r.source_dim, r.target_dim, r.image_rank), (0, 0, 0));
        assert!(r.passes());
    }

    #[test]
    fn window_verification_case_a() {
        let h = case_a(-1, "x3*x4").unwrap();
        let v = h.verify_iso_window(6).unwrap();
        assert!(v.passes());
        // Im pi = {l_3 = l_4}: 8 torsion classes per l
        assert_eq!(v.records.len(), 8 * 13);
    }
}
