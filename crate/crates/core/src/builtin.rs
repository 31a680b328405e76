//! Built-in reflection groups with complete tables of split irreducibles.

use thiserror::Error;

use crate::group::{GroupAction, GroupError};
use crate::irrep::{Irrep, RepError};
use crate::linalg::Matrix;
use crate::reflection::{find_reflections, PseudoReflection};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuiltinError {
    #[error("unknown built-in group `{0}` (expected cyclic:ℓ, dihedral:ℓ, S3 or S4)")]
    Unknown(String),
    #[error("{family} requires {range}, got {value}")]
    OutOfRange {
        family: &'static str,
        range: &'static str,
        value: u32,
    },
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("duplicate irrep label `{0}`")]
    DuplicateLabel(String),
}

/// A finite group acting on 𝔥 together with its reflections and a list of
/// validated irreducibles.
#[derive(Clone, Debug)]
pub struct ReflectionGroup {
    name: String,
    group: GroupAction,
    reflections: Vec<PseudoReflection>,
    irreps: Vec<Irrep>,
}

impl ReflectionGroup {
    pub fn new(name: impl Into<String>, group: GroupAction, irreps: Vec<Irrep>) -> Result<Self, BuiltinError> {
        for (k, w) in irreps.iter().enumerate() {
            if irreps[..k].iter().any(|v| v.label() == w.label()) {
                return Err(BuiltinError::DuplicateLabel(w.label().to_string()));
            }
        }
        let reflections = find_reflections(&group);
        Ok(ReflectionGroup {
            name: name.into(),
            group,
            reflections,
            irreps,
        })
    }

    /// Parses `cyclic:ℓ`, `dihedral:ℓ`, `S3` or `S4`.
    pub fn builtin(spec: &str) -> Result<Self, BuiltinError> {
        let spec = spec.trim();
        if let Some(l) = spec.strip_prefix("cyclic:") {
            let l = l.trim().parse().map_err(|_| BuiltinError::Unknown(spec.to_string()))?;
            return cyclic(l);
        }
        if let Some(l) = spec.strip_prefix("dihedral:") {
            let l = l.trim().parse().map_err(|_| BuiltinError::Unknown(spec.to_string()))?;
            return dihedral(l);
        }
        match spec {
            "S3" => symmetric3(),
            "S4" => symmetric4(),
            _ => Err(BuiltinError::Unknown(spec.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn group(&self) -> &GroupAction {
        &self.group
    }

    pub fn reflections(&self) -> &[PseudoReflection] {
        &self.reflections
    }

    pub fn irreps(&self) -> &[Irrep] {
        &self.irreps
    }

    pub fn irrep(&self, label: &str) -> Option<&Irrep> {
        self.irreps.iter().find(|w| w.label() == label)
    }

    pub fn irrep_index(&self, label: &str) -> Option<usize> {
        self.irreps.iter().position(|w| w.label() == label)
    }

    /// Σ (dim W)² = |G|.
    pub fn is_complete(&self) -> bool {
        let total: usize = self.irreps.iter().map(|w| w.dim() * w.dim()).sum();
        total == self.group.order()
    }
}

fn zeta_pow(l: u32, k: i64) -> Scalar {
    Scalar::zeta_pow(l, k).expect("supported conductor")
}

fn scalar1(s: Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![s]])
}

fn diag2(a: Scalar, b: Scalar) -> Matrix {
    Matrix::from_rows(vec![vec![a, Scalar::zero()], vec![Scalar::zero(), b]])
}

/// ℤ/ℓ acting on K¹ by ζ_ℓ, 1 ≤ ℓ ≤ 12.
pub fn cyclic(l: u32) -> Result<ReflectionGroup, BuiltinError> {
    if !(1..=12).contains(&l) {
        return Err(BuiltinError::OutOfRange {
            family: "cyclic",
            range: "1 ≤ ℓ ≤ 12",
            value: l,
        });
    }
    let group = GroupAction::enumerate(&[scalar1(zeta_pow(l, 1))])?;
    let irreps = (0..l)
        .map(|k| {
            let label = match (l, k) {
                (_, 0) => "triv".to_string(),
                (2, 1) => "sgn".to_string(),
                _ => format!("chi{k}"),
            };
            Irrep::from_generator_images(label, &group, &[scalar1(zeta_pow(l, k as i64))])
        })
        .collect::<Result<Vec<_>, _>>()?;
    ReflectionGroup::new(format!("cyclic:{l}"), group, irreps)
}

/// The dihedral group of order 2ℓ on K² via r = diag(ζ_ℓ, ζ_ℓ⁻¹) and s = swap, 2 ≤ ℓ ≤ 8.
pub fn dihedral(l: u32) -> Result<ReflectionGroup, BuiltinError> {
    if !(2..=8).contains(&l) {
        return Err(BuiltinError::OutOfRange {
            family: "dihedral",
            range: "2 ≤ ℓ ≤ 8",
            value: l,
        });
    }
    let swap = Matrix::from_int_rows(&[&[0, 1], &[1, 0]]);
    let r = diag2(zeta_pow(l, 1), zeta_pow(l, -1));
    let group = GroupAction::enumerate(&[r, swap.clone()])?;
    let one = || scalar1(Scalar::one());
    let minus = || scalar1(Scalar::from_int(-1));
    let mut irreps = vec![
        Irrep::from_generator_images("triv", &group, &[one(), one()])?,
        Irrep::from_generator_images("sgn", &group, &[one(), minus()])?,
    ];
    if l % 2 == 0 {
        irreps.push(Irrep::from_generator_images("eps1", &group, &[minus(), one()])?);
        irreps.push(Irrep::from_generator_images("eps2", &group, &[minus(), minus()])?);
    }
    for k in 1..l.div_ceil(2) {
        let rk = diag2(zeta_pow(l, k as i64), zeta_pow(l, -(k as i64)));
        irreps.push(Irrep::from_generator_images(
            format!("rho{k}"),
            &group,
            &[rk, swap.clone()],
        )?);
    }
    ReflectionGroup::new(format!("dihedral:{l}"), group, irreps)
}

/// S₃ in its reflection representation over ℚ.
pub fn symmetric3() -> Result<ReflectionGroup, BuiltinError> {
    let s1 = Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]);
    let s2 = Matrix::from_int_rows(&[&[1, 0], &[1, -1]]);
    let group = GroupAction::enumerate(&[s1.clone(), s2.clone()])?;
    let one = || scalar1(Scalar::one());
    let minus = || scalar1(Scalar::from_int(-1));
    let irreps = vec![
        Irrep::from_generator_images("triv", &group, &[one(), one()])?,
        Irrep::from_generator_images("sgn", &group, &[minus(), minus()])?,
        Irrep::from_generator_images("std", &group, &[s1, s2])?,
    ];
    ReflectionGroup::new("S3", group, irreps)
}

/// S₄ in its reflection representation on the A₃ root lattice.
pub fn symmetric4() -> Result<ReflectionGroup, BuiltinError> {
    let cartan: [[i64; 3]; 3] = [[2, -1, 0], [-1, 2, -1], [0, -1, 2]];
    let gens: Vec<Matrix> = (0..3)
        .map(|i| {
            let mut m = Matrix::identity(3);
            for (j, &a) in cartan[i].iter().enumerate() {
                m[(i, j)] = &m[(i, j)] - &Scalar::from_int(a);
            }
            m
        })
        .collect();
    let group = GroupAction::enumerate(&gens)?;
    let one = || scalar1(Scalar::one());
    let minus = || scalar1(Scalar::from_int(-1));
    let neg: Vec<Matrix> = gens.iter().map(|m| m.scale(&Scalar::from_int(-1))).collect();
    let a = Matrix::from_int_rows(&[&[-1, 1], &[0, 1]]);
    let b = Matrix::from_int_rows(&[&[1, 0], &[1, -1]]);
    let irreps = vec![
        Irrep::from_generator_images("triv", &group, &[one(), one(), one()])?,
        Irrep::from_generator_images("sgn", &group, &[minus(), minus(), minus()])?,
        Irrep::from_generator_images("std", &group, &gens)?,
        Irrep::from_generator_images("std_sgn", &group, &neg)?,
        Irrep::from_generator_images("two", &group, &[a.clone(), b, a])?,
    ];
    ReflectionGroup::new("S4", group, irreps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::irrep::{isotypic_project, RegularModule};

    fn all_builtins() -> Vec<ReflectionGroup> {
        let mut out: Vec<ReflectionGroup> = (1..=12).map(|l| cyclic(l).unwrap()).collect();
        out.extend((2..=8).map(|l| dihedral(l).unwrap()));
        out.push(symmetric3().unwrap());
        out.push(symmetric4().unwrap());
        out
    }

    #[test]
    fn tables_are_complete() {
        for g in all_builtins() {
            assert!(g.is_complete(), "{}", g.name());
        }
    }

    #[test]
    fn orders_and_reflection_counts() {
        let s4 = symmetric4().unwrap();
        assert_eq!(s4.group().order(), 24);
        assert_eq!(s4.reflections().len(), 6);
        let d4 = dihedral(4).unwrap();
        assert_eq!(d4.group().order(), 8);
        assert_eq!(d4.reflections().len(), 4);
        let z5 = cyclic(5).unwrap();
        assert_eq!(z5.reflections().len(), 4);
        assert_eq!(cyclic(1).unwrap().reflections().len(), 0);
    }

    #[test]
    fn s3_regular_isotypic_dims() {
        let s3 = symmetric3().unwrap();
        let dims: Vec<usize> = s3
            .irreps()
            .iter()
            .map(|w| isotypic_project(s3.group(), w, &RegularModule { group: s3.group() }, None).dim())
            .collect();
        assert_eq!(dims, vec![1, 1, 4]);
    }

    #[test]
    fn parse_names() {
        assert_eq!(ReflectionGroup::builtin("cyclic:3").unwrap().group().order(), 3);
        assert_eq!(ReflectionGroup::builtin("dihedral:5").unwrap().group().order(), 10);
        assert!(matches!(ReflectionGroup::builtin("B2"), Err(BuiltinError::Unknown(_))));
        assert!(matches!(
            ReflectionGroup::builtin("cyclic:13"),
            Err(BuiltinError::OutOfRange { .. })
        ));
    }
}
