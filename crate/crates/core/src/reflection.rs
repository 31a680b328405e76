//! Pseudo-reflections of a [`GroupAction`] and reflection functions on them.
//!
//! Conventions: matrices act on 𝔥 = K^n (column vectors, basis t₁…tₙ) and
//! contragrediently on 𝔥* (dual basis t*₁…t*ₙ). For a pseudo-reflection g,
//!
//! * `alpha` is the covector α_g ∈ 𝔥* vanishing on the fixed hyperplane,
//!   scaled so its first nonzero coordinate is 1;
//! * `lambda` is the nontrivial eigenvalue of g on 𝔥*, i.e. g·α_g = λ_g α_g;
//! * `coroot` is α_g^∨ ∈ 𝔥 spanning the image of g − Id with (α_g^∨, α_g) = 2.
//!   It is an eigenvector of g on 𝔥 with eigenvalue λ_g^{-1}.
//!
//! With these conventions the deformed Euler element
//! `Σ t*ᵢtᵢ + n/2 − Σ 2c(g)/(1−λ_g)·g` grades the algebra for every
//! pseudo-reflection, real or complex.

use thiserror::Error;

use crate::group::GroupAction;
use crate::linalg::{dot, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoReflection {
    pub element: usize,
    pub lambda: Scalar,
    pub alpha: Vec<Scalar>,
    pub coroot: Vec<Scalar>,
    /// Index of the conjugacy class in [`GroupAction::classes`].
    pub class: usize,
}

/// Every element g with rank(g − Id) = 1, in element order.
pub fn find_reflections(group: &GroupAction) -> Vec<PseudoReflection> {
    let n = group.dim();
    let id = Matrix::identity(n);
    let mut out = Vec::new();
    for g in 0..group.order() {
        let diff = group.element(g).sub(&id);
        if diff.rank() != 1 {
            continue;
        }
        // diff = u αᵀ with α's first nonzero coordinate equal to 1
        let row = (0..n)
            .map(|i| diff.row(i))
            .find(|r| r.iter().any(|x| !x.is_zero()))
            .expect("rank one");
        let pivot = row.iter().position(|x| !x.is_zero()).expect("nonzero row");
        let lead = row[pivot].inv().expect("nonzero");
        let alpha: Vec<Scalar> = row.iter().map(|x| x * &lead).collect();
        let u = diff.column(pivot);
        // g u = (1 + α·u) u, and α·u ≠ 0 because g has finite order
        let pairing = dot(&alpha, &u);
        let mu = Scalar::one() + &pairing;
        let lambda = mu.inv().expect("invertible matrix has nonzero eigenvalues");
        let scale = Scalar::from_int(2) / pairing;
        let coroot = u.iter().map(|x| x * &scale).collect();
        out.push(PseudoReflection {
            element: g,
            lambda,
            alpha,
            coroot,
            class: group.class_of(g),
        });
    }
    out
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReflectionFunctionError {
    #[error("expected {expected} reflection-class values, got {got}")]
    WrongCount { expected: usize, got: usize },
}

/// A conjugation-invariant function c on the pseudo-reflections, stored per class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReflectionFunction {
    /// Group conjugacy-class indices of the reflection classes, ascending.
    classes: Vec<usize>,
    values: Vec<Scalar>,
}

/// Conjugacy classes containing pseudo-reflections, ascending.
pub fn reflection_classes(reflections: &[PseudoReflection]) -> Vec<usize> {
    let mut classes: Vec<usize> = reflections.iter().map(|r| r.class).collect();
    classes.sort_unstable();
    classes.dedup();
    classes
}

impl ReflectionFunction {
    pub fn constant(reflections: &[PseudoReflection], value: Scalar) -> Self {
        let classes = reflection_classes(reflections);
        let values = vec![value; classes.len()];
        ReflectionFunction { classes, values }
    }

    pub fn zero(reflections: &[PseudoReflection]) -> Self {
        ReflectionFunction::constant(reflections, Scalar::zero())
    }

    /// One value per reflection class, in ascending class order.
    pub fn per_class(
        reflections: &[PseudoReflection],
        values: Vec<Scalar>,
    ) -> Result<Self, ReflectionFunctionError> {
        let classes = reflection_classes(reflections);
        if classes.len() != values.len() {
            return Err(ReflectionFunctionError::WrongCount {
                expected: classes.len(),
                got: values.len(),
            });
        }
        Ok(ReflectionFunction { classes, values })
    }

    pub fn classes(&self) -> &[usize] {
        &self.classes
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    /// c(g) for a reflection in the given conjugacy class.
    pub fn value_for_class(&self, class: usize) -> &Scalar {
        let k = self
            .classes
            .binary_search(&class)
            .expect("class carries no reflections");
        &self.values[k]
    }

    pub fn value(&self, reflection: &PseudoReflection) -> &Scalar {
        self.value_for_class(reflection.class)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Scalar::is_zero)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> GroupAction {
        GroupAction::enumerate(&[
            Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]),
            Matrix::from_int_rows(&[&[1, 0], &[1, -1]]),
        ])
        .unwrap()
    }

    #[test]
    fn z2_reflection() {
        let g = GroupAction::enumerate(&[Matrix::from_int_rows(&[&[-1]])]).unwrap();
        let r = find_reflections(&g);
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].lambda, Scalar::from_int(-1));
        assert_eq!(r[0].alpha, vec![Scalar::one()]);
        assert_eq!(r[0].coroot, vec![Scalar::from_int(2)]);
    }

    #[test]
    fn s3_has_three_reflections() {
        let g = s3();
        let r = find_reflections(&g);
        assert_eq!(r.len(), 3);
        assert!(r.iter().all(|s| s.lambda == Scalar::from_int(-1)));
        assert!(r.iter().all(|s| s.element != g.identity()));
        assert_eq!(reflection_classes(&r).len(), 1);
    }

    #[test]
    fn eigen_data_invariants() {
        let z = Scalar::zeta(5).unwrap();
        let g = GroupAction::enumerate(&[Matrix::from_rows(vec![vec![z]])]).unwrap();
        for group in [s3(), g] {
            for r in find_reflections(&group) {
                let m = group.element(r.element);
                assert_eq!(dot(&r.coroot, &r.alpha), Scalar::from_int(2));
                // g α^∨ = λ^{-1} α^∨
                let image = m.mul_vec(&r.coroot);
                let expected: Vec<Scalar> =
                    r.coroot.iter().map(|x| x * &r.lambda.inv().unwrap()).collect();
                assert_eq!(image, expected);
                // αᵀ g = λ^{-1} αᵀ, equivalently g·α = λ α under the contragredient action
                let row_image = m.transpose().mul_vec(&r.alpha);
                let expected: Vec<Scalar> =
                    r.alpha.iter().map(|x| x * &r.lambda.inv().unwrap()).collect();
                assert_eq!(row_image, expected);
            }
        }
    }

    #[test]
    fn reflections_closed_under_conjugation() {
        let g = s3();
        let refl = find_reflections(&g);
        for r in &refl {
            for h in 0..g.order() {
                let c = g.conjugate(h, r.element);
                let other = refl.iter().find(|s| s.element == c).expect("closed");
                assert_eq!(other.lambda, r.lambda);
            }
        }
    }

    #[test]
    fn per_class_count_is_checked() {
        let refl = find_reflections(&s3());
        assert!(ReflectionFunction::per_class(&refl, vec![Scalar::one()]).is_ok());
        assert_eq!(
            ReflectionFunction::per_class(&refl, vec![]),
            Err(ReflectionFunctionError::WrongCount { expected: 1, got: 0 })
        );
    }
}
