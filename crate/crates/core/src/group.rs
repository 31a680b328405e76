//! Finite matrix groups G ⊂ GL_n acting on 𝔥 = K^n.

use std::collections::HashMap;
use std::collections::VecDeque;

use thiserror::Error;

use crate::linalg::Matrix;

/// Default bound on the closure size in [`GroupAction::enumerate`].
pub const DEFAULT_GROUP_CAP: usize = 10_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("group closure exceeded the cap of {0} elements")]
    CapExceeded(usize),
    #[error("generator {generator} has a non-integral entry at ({row}, {col})")]
    NonIntegralEntry {
        generator: usize,
        row: usize,
        col: usize,
    },
    #[error("generator {0} is not invertible")]
    NotInvertible(usize),
    #[error("generator {generator} is {rows}x{cols}, expected {dim}x{dim}")]
    DimensionMismatch {
        generator: usize,
        rows: usize,
        cols: usize,
        dim: usize,
    },
    #[error("at least one generator is required")]
    NoGenerators,
}

/// The closure of a set of integral matrices, with its multiplication data.
///
/// Element 0 is the identity; the remaining elements appear in breadth-first
/// order of words in the generators, so indices are deterministic.
#[derive(Clone, Debug)]
pub struct GroupAction {
    dim: usize,
    conductor: u32,
    elements: Vec<Matrix>,
    generators: Vec<usize>,
    /// `table[g * order + h] = index of g·h`
    table: Vec<u32>,
    inverse: Vec<usize>,
    /// (parent, generator position) with element = parent · generator
    parent: Vec<Option<(usize, usize)>>,
    classes: Vec<Vec<usize>>,
    class_of: Vec<usize>,
}

impl GroupAction {
    pub fn enumerate(generators: &[Matrix]) -> Result<Self, GroupError> {
        GroupAction::enumerate_with_cap(generators, DEFAULT_GROUP_CAP)
    }

    pub fn enumerate_with_cap(generators: &[Matrix], cap: usize) -> Result<Self, GroupError> {
        let dim = generators.first().ok_or(GroupError::NoGenerators)?.rows();
        let mut conductor = 1;
        for (k, g) in generators.iter().enumerate() {
            if g.rows() != dim || g.cols() != dim {
                return Err(GroupError::DimensionMismatch {
                    generator: k,
                    rows: g.rows(),
                    cols: g.cols(),
                    dim,
                });
            }
            for i in 0..dim {
                for j in 0..dim {
                    let x = &g[(i, j)];
                    if !x.is_integral() {
                        return Err(GroupError::NonIntegralEntry {
                            generator: k,
                            row: i,
                            col: j,
                        });
                    }
                    conductor = conductor.max(x.conductor());
                }
            }
            if g.inverse().is_none() {
                return Err(GroupError::NotInvertible(k));
            }
        }

        let mut elements = vec![Matrix::identity(dim)];
        let mut index: HashMap<Matrix, usize> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut parent = vec![None];
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (k, g) in generators.iter().enumerate() {
                let prod = elements[e].mul(g);
                if index.contains_key(&prod) {
                    continue;
                }
                if elements.len() == cap {
                    return Err(GroupError::CapExceeded(cap));
                }
                index.insert(prod.clone(), elements.len());
                elements.push(prod);
                parent.push(Some((e, k)));
                queue.push_back(elements.len() - 1);
            }
        }

        let order = elements.len();
        let mut table = vec![0u32; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = elements[a].mul(&elements[b]);
                table[a * order + b] = index[&prod] as u32;
            }
        }
        let inverse: Vec<usize> = (0..order)
            .map(|a| {
                (0..order)
                    .find(|&b| table[a * order + b] == 0)
                    .expect("finite closure contains inverses")
            })
            .collect();
        let generator_indices = generators.iter().map(|g| index[g]).collect();

        let mut class_of = vec![usize::MAX; order];
        let mut classes = Vec::new();
        for g in 0..order {
            if class_of[g] != usize::MAX {
                continue;
            }
            let mut class: Vec<usize> = (0..order)
                .map(|h| table[table[h * order + g] as usize * order + inverse[h]] as usize)
                .collect();
            class.sort_unstable();
            class.dedup();
            for &c in &class {
                class_of[c] = classes.len();
            }
            classes.push(class);
        }

        Ok(GroupAction {
            dim,
            conductor,
            elements,
            generators: generator_indices,
            table,
            inverse,
            parent,
            classes,
            class_of,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Conductor of the field generated by the matrix entries (1 for ℚ).
    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn identity(&self) -> usize {
        0
    }

    pub fn element(&self, g: usize) -> &Matrix {
        &self.elements[g]
    }

    pub fn elements(&self) -> &[Matrix] {
        &self.elements
    }

    /// Indices of the generators, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.order() + h] as usize
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inverse[g]
    }

    pub fn conjugate(&self, h: usize, g: usize) -> usize {
        self.mul(self.mul(h, g), self.inv(h))
    }

    /// `Some((parent, k))` when `g = parent · generator_k`; `None` for the identity.
    pub fn parent(&self, g: usize) -> Option<(usize, usize)> {
        self.parent[g]
    }

    pub fn classes(&self) -> &[Vec<usize>] {
        &self.classes
    }

    pub fn class_of(&self, g: usize) -> usize {
        self.class_of[g]
    }

    pub fn index_of(&self, m: &Matrix) -> Option<usize> {
        self.elements.iter().position(|e| e == m)
    }

    /// Exhaustive associativity check of the multiplication table.
    pub fn check_associative(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    #[test]
    fn order_two() {
        let g = GroupAction::enumerate(&[Matrix::from_int_rows(&[&[-1]])]).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.inv(1), 1);
        assert_eq!(g.classes().len(), 2);
    }

    #[test]
    fn s3_reflection_representation() {
        let s1 = Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]);
        let s2 = Matrix::from_int_rows(&[&[1, 0], &[1, -1]]);
        let g = GroupAction::enumerate(&[s1, s2]).unwrap();
        assert_eq!(g.order(), 6);
        assert!(g.check_associative());
        // identity, three transpositions, two 3-cycles
        let mut sizes: Vec<usize> = g.classes().iter().map(Vec::len).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 2, 3]);
        for a in 0..6 {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn trivial_group() {
        let g = GroupAction::enumerate(&[Matrix::identity(3)]).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn rejects_bad_generators() {
        let half = Matrix::from_rows(vec![vec![Scalar::from_ratio(1, 2)]]);
        assert!(matches!(
            GroupAction::enumerate(&[half]),
            Err(GroupError::NonIntegralEntry { .. })
        ));
        let shear = Matrix::from_int_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(
            GroupAction::enumerate_with_cap(&[shear], 50).unwrap_err(),
            GroupError::CapExceeded(50)
        );
        assert_eq!(
            GroupAction::enumerate(&[Matrix::from_int_rows(&[&[0]])]).unwrap_err(),
            GroupError::NotInvertible(0)
        );
    }

    #[test]
    fn cyclic_by_root_of_unity() {
        let z = Scalar::zeta(5).unwrap();
        let g = GroupAction::enumerate(&[Matrix::from_rows(vec![vec![z]])]).unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.conductor(), 5);
    }
}
