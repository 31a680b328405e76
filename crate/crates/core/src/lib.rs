//! Exact computations with rational Cherednik algebras H_c(𝔥, G): PBW
//! straightening, truncated category O, and the level-m p-adic Banach
//! completions with their weighted Gauss norms.

pub mod banach;
pub mod builtin;
pub mod category_o;
pub mod expr;
pub mod group;
pub mod groupdata;
pub mod irrep;
pub mod linalg;
pub mod padic;
pub mod pbw;
pub mod poly;
pub mod reflection;
pub mod scalar;

pub use banach::{BanachElement, BanachError, LevelParams};
pub use builtin::{BuiltinError, ReflectionGroup};
pub use category_o::{CategoryError, GradedCharacter, ModuleVector, VermaSlice};
pub use group::{GroupAction, GroupError};
pub use irrep::{Irrep, RepError};
pub use linalg::{Matrix, Subspace};
pub use padic::{PadicContext, PadicError, Valuation};
pub use pbw::{CherednikAlgebra, PbwElement, PbwError, PbwKey};
pub use poly::{Mono, Poly};
pub use reflection::{PseudoReflection, ReflectionFunction};
pub use scalar::{Scalar, ScalarError};
