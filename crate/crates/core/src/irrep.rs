//! Split irreducible representations of a finite group and isotypic projection.

use thiserror::Error;

use crate::group::GroupAction;
use crate::linalg::{Matrix, Subspace};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error("representation {label}: expected {expected} matrices, got {got}")]
    WrongCount {
        label: String,
        expected: usize,
        got: usize,
    },
    #[error("representation {label}: matrices must all be {dim}x{dim}")]
    DimensionMismatch { label: String, dim: usize },
    #[error("representation {label}: ρ(g{g}·g{h}) ≠ ρ(g{g})·ρ(g{h})")]
    NotHomomorphism { label: String, g: usize, h: usize },
    #[error("representation {label} is not irreducible: ⟨χ,χ⟩ = {norm}")]
    NotIrreducible { label: String, norm: Scalar },
}

/// A validated absolutely irreducible representation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Irrep {
    label: String,
    dim: usize,
    matrices: Vec<Matrix>,
    character: Vec<Scalar>,
}

impl Irrep {
    /// Extends generator images to all of G along the enumeration words, then validates.
    pub fn from_generator_images(
        label: impl Into<String>,
        group: &GroupAction,
        images: &[Matrix],
    ) -> Result<Self, RepError> {
        let label = label.into();
        if images.len() != group.generators().len() {
            return Err(RepError::WrongCount {
                label,
                expected: group.generators().len(),
                got: images.len(),
            });
        }
        let dim = images.first().map_or(0, Matrix::rows);
        if images.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return Err(RepError::DimensionMismatch { label, dim });
        }
        let mut matrices: Vec<Matrix> = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let m = match group.parent(g) {
                None => Matrix::identity(dim),
                Some((p, k)) => matrices[p].mul(&images[k]),
            };
            matrices.push(m);
        }
        validate_irrep(label, matrices, group)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self, g: usize) -> &Matrix {
        &self.matrices[g]
    }

    pub fn character(&self) -> &[Scalar] {
        &self.character
    }
}

/// ⟨χ, ψ⟩ = (1/|G|) Σ_g χ(g) ψ(g⁻¹).
pub fn character_inner(group: &GroupAction, chi: &[Scalar], psi: &[Scalar]) -> Scalar {
    let sum = (0..group.order()).fold(Scalar::zero(), |acc, g| acc + &chi[g] * &psi[group.inv(g)]);
    sum / Scalar::from_int(group.order() as i64)
}

/// Checks the homomorphism property on all pairs and that ⟨χ,χ⟩ = 1.
pub fn validate_irrep(
    label: impl Into<String>,
    matrices: Vec<Matrix>,
    group: &GroupAction,
) -> Result<Irrep, RepError> {
    let label = label.into();
    if matrices.len() != group.order() {
        return Err(RepError::WrongCount {
            label,
            expected: group.order(),
            got: matrices.len(),
        });
    }
    let dim = matrices[0].rows();
    if matrices.iter().any(|m| m.rows() != dim || m.cols() != dim) {
        return Err(RepError::DimensionMismatch { label, dim });
    }
    for g in 0..group.order() {
        for h in 0..group.order() {
            if matrices[group.mul(g, h)] != matrices[g].mul(&matrices[h]) {
                return Err(RepError::NotHomomorphism { label, g, h });
            }
        }
    }
    let character: Vec<Scalar> = matrices.iter().map(Matrix::trace).collect();
    let norm = character_inner(group, &character, &character);
    if !norm.is_one() {
        return Err(RepError::NotIrreducible { label, norm });
    }
    Ok(Irrep {
        label,
        dim,
        matrices,
        character,
    })
}

/// A finite-dimensional space with a linear G-action.
pub trait GModule {
    fn module_dim(&self) -> usize;
    fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar>;
}

/// A G-module given by explicit matrices, one per group element.
pub struct MatrixModule<'a> {
    pub matrices: &'a [Matrix],
}

impl GModule for MatrixModule<'_> {
    fn module_dim(&self) -> usize {
        self.matrices.first().map_or(0, Matrix::rows)
    }

    fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        self.matrices[g].mul_vec(v)
    }
}

/// The regular representation K[G] in the basis of group elements.
pub struct RegularModule<'a> {
    pub group: &'a GroupAction,
}

impl GModule for RegularModule<'_> {
    fn module_dim(&self) -> usize {
        self.group.order()
    }

    fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); v.len()];
        for (h, x) in v.iter().enumerate() {
            if !x.is_zero() {
                out[self.group.mul(g, h)] = x.clone();
            }
        }
        out
    }
}

/// e_W(v) = (dim W/|G|) Σ_g χ_W(g⁻¹) g·v.
pub fn isotypic_apply<M: GModule + ?Sized>(
    group: &GroupAction,
    irrep: &Irrep,
    module: &M,
    v: &[Scalar],
) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); v.len()];
    for g in 0..group.order() {
        let coeff = &irrep.character()[group.inv(g)];
        if coeff.is_zero() {
            continue;
        }
        let gv = module.act(g, v);
        for (o, x) in out.iter_mut().zip(&gv) {
            if !x.is_zero() {
                *o += &(coeff * x);
            }
        }
    }
    let factor = Scalar::from_ratio(irrep.dim() as i64, group.order() as i64);
    out.iter().map(|x| x * &factor).collect()
}

/// Image of the isotypic projector e_W on the span of `vectors`
/// (the whole module when `vectors` is `None`).
pub fn isotypic_project<M: GModule + ?Sized>(
    group: &GroupAction,
    irrep: &Irrep,
    module: &M,
    vectors: Option<&[Vec<Scalar>]>,
) -> Subspace {
    let n = module.module_dim();
    let images: Vec<Vec<Scalar>> = match vectors {
        Some(vs) => vs.iter().map(|v| isotypic_apply(group, irrep, module, v)).collect(),
        None => Subspace::full(n)
            .basis()
            .iter()
            .map(|v| isotypic_apply(group, irrep, module, v))
            .collect(),
    };
    Subspace::from_vectors(n, images)
}
