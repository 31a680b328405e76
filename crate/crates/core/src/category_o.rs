//! Degree-truncated category O: Verma modules Δ(W), their quotients, singular
//! vectors, simple quotients L(W), the highest-weight order and decomposition
//! numbers [Δ(W) : L(E)].
//!
//! A slice stores Δ(W) in degrees 0..=N with basis x^P ⊗ e_a, indexed as
//! `monomial_index * dim W + a`. Quotients keep a killed subspace per degree;
//! quotient coordinates are the free (non-pivot) columns of that subspace.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use thiserror::Error;

use crate::irrep::{character_inner, isotypic_project, GModule, Irrep};
use crate::linalg::{is_zero_vec, unit_vector, Matrix, SparseMatrix, Subspace};
use crate::pbw::{CherednikAlgebra, PbwElement, PbwError};
use crate::poly::{monomials_of_degree, Mono, Poly};
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("∂₀ does not act on `{label}` by a scalar")]
    NotScalarAction { label: String },
    #[error("result reaches degree {degree}, beyond the cutoff {cutoff}")]
    CutoffExceeded { degree: u32, cutoff: u32 },
    #[error("character of Δ({verma}) cannot be resolved at degree {degree} with cutoff {cutoff}: {reason}")]
    InconsistentTruncation {
        verma: String,
        degree: u32,
        cutoff: u32,
        reason: String,
    },
    #[error("unknown irrep `{0}`")]
    UnknownIrrep(String),
    #[error(transparent)]
    Pbw(#[from] PbwError),
}

/// The scalar c(W) by which ∂₀ acts on W.
pub fn c_scalar(alg: &CherednikAlgebra, w: &Irrep) -> Result<Scalar, CategoryError> {
    let n = alg.dim();
    let d = w.dim();
    let mut m = Matrix::scalar(d, &Scalar::from_ratio(n as i64, 2));
    for (s, coeff) in alg.euler_coefficients() {
        m = m.sub(&w.matrix(*s).scale(coeff));
    }
    m.as_scalar().ok_or_else(|| CategoryError::NotScalarAction {
        label: w.label().to_string(),
    })
}

/// c(W) for every irrep of the algebra's group, in table order.
pub fn c_values(alg: &CherednikAlgebra) -> Result<Vec<Scalar>, CategoryError> {
    alg.reflection_group()
        .irreps()
        .iter()
        .map(|w| c_scalar(alg, w))
        .collect()
}

/// A vector of a slice, stored per degree in ambient coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModuleVector {
    parts: BTreeMap<u32, Vec<Scalar>>,
}

impl ModuleVector {
    pub fn zero() -> Self {
        ModuleVector::default()
    }

    pub fn homogeneous(degree: u32, v: Vec<Scalar>) -> Self {
        let mut out = ModuleVector::zero();
        out.set(degree, v);
        out
    }

    /// Sets the degree component, dropping it if zero.
    pub fn set(&mut self, degree: u32, v: Vec<Scalar>) {
        if is_zero_vec(&v) {
            self.parts.remove(&degree);
        } else {
            self.parts.insert(degree, v);
        }
    }

    pub fn parts(&self) -> &BTreeMap<u32, Vec<Scalar>> {
        &self.parts
    }

    pub fn part(&self, degree: u32) -> Option<&Vec<Scalar>> {
        self.parts.get(&degree)
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }
}

type SparseCol = Vec<(usize, Scalar)>;

fn accumulate(acc: &mut BTreeMap<usize, Scalar>, idx: usize, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = acc.entry(idx).or_default();
    *e += &c;
    if e.is_zero() {
        acc.remove(&idx);
    }
}

fn finish(acc: BTreeMap<usize, Scalar>) -> SparseCol {
    acc.into_iter().collect()
}

/// Δ(W) (or a quotient of it) in degrees 0..=cutoff.
#[derive(Clone, Debug)]
pub struct VermaSlice {
    alg: Arc<CherednikAlgebra>,
    irrep: usize,
    cutoff: u32,
    c_w: Scalar,
    monomials: Vec<Vec<Mono>>,
    index: Vec<HashMap<Mono, usize>>,
    /// `y_ops[d][i]`: degree d → degree d−1.
    y_ops: Vec<Vec<SparseMatrix>>,
    /// `refl_mono[r][d][k]` = s_r(monomial k of degree d), aligned with the algebra's commutators.
    refl_mono: Vec<Vec<Vec<SparseCol>>>,
    killed: Vec<Subspace>,
}

impl VermaSlice {
    pub fn new(alg: Arc<CherednikAlgebra>, irrep: usize, cutoff: u32) -> Result<Self, CategoryError> {
        let rg = alg.reflection_group().clone();
        let w = &rg.irreps()[irrep];
        let c_w = c_scalar(&alg, w)?;
        let n = alg.dim();
        let dw = w.dim();
        let monomials: Vec<Vec<Mono>> = (0..=cutoff).map(|d| monomials_of_degree(n, d)).collect();
        let index: Vec<HashMap<Mono, usize>> = monomials
            .iter()
            .map(|ms| ms.iter().cloned().enumerate().map(|(k, m)| (m, k)).collect())
            .collect();

        let mut refl_mono = Vec::new();
        for com in alg.commutators() {
            let mut per_degree: Vec<Vec<SparseCol>> = vec![vec![vec![(0, Scalar::one())]]];
            for d in 1..=cutoff as usize {
                let cols = monomials[d]
                    .iter()
                    .map(|p| {
                        let j = p.first_var().expect("positive degree");
                        let q = p.div_var(j).expect("divides");
                        let image = alg.x_image(com.element, j);
                        let mut acc = BTreeMap::new();
                        for (qi, a) in &per_degree[d - 1][index[d - 1][&q]] {
                            let qm = &monomials[d - 1][*qi];
                            for (lin, b) in image.terms() {
                                let v = lin.first_var().expect("linear");
                                accumulate(&mut acc, index[d][&qm.mul_var(v)], a * b);
                            }
                        }
                        finish(acc)
                    })
                    .collect();
                per_degree.push(cols);
            }
            refl_mono.push(per_degree);
        }

        let mut y_ops: Vec<Vec<SparseMatrix>> =
            vec![(0..n).map(|_| SparseMatrix::new(0, vec![Vec::new(); dw])).collect()];
        for d in 1..=cutoff as usize {
            let rows = monomials[d - 1].len() * dw;
            let mut ops = Vec::with_capacity(n);
            for i in 0..n {
                let mut cols = Vec::with_capacity(monomials[d].len() * dw);
                for p in &monomials[d] {
                    let j = p.first_var().expect("positive degree");
                    let q = p.div_var(j).expect("divides");
                    let qk = index[d - 1][&q];
                    for a in 0..dw {
                        let mut acc = BTreeMap::new();
                        // x_j · y_i(x^Q ⊗ e_a)
                        for (idx, c) in y_ops[d - 1][i].column(qk * dw + a) {
                            let (mk, b) = (idx / dw, idx % dw);
                            let m = monomials[d - 2][mk].mul_var(j);
                            accumulate(&mut acc, index[d - 1][&m] * dw + b, c.clone());
                        }
                        if i == j {
                            accumulate(&mut acc, qk * dw + a, Scalar::one());
                        }
                        for (r, com) in alg.commutators().iter().enumerate() {
                            let kappa = &com.kappa[i][j];
                            if kappa.is_zero() {
                                continue;
                            }
                            let rho = w.matrix(com.element);
                            for (mk, c) in &refl_mono[r][d - 1][qk] {
                                let ck = kappa * c;
                                for b in 0..dw {
                                    let e = &rho[(b, a)];
                                    if !e.is_zero() {
                                        accumulate(&mut acc, mk * dw + b, &ck * e);
                                    }
                                }
                            }
                        }
                        cols.push(finish(acc));
                    }
                }
                ops.push(SparseMatrix::new(rows, cols));
            }
            y_ops.push(ops);
        }

        let killed = (0..=cutoff as usize)
            .map(|d| Subspace::zero(monomials[d].len() * dw))
            .collect();
        Ok(VermaSlice {
            alg,
            irrep,
            cutoff,
            c_w,
            monomials,
            index,
            y_ops,
            refl_mono,
            killed,
        })
    }

    /// Builds Δ(W) for the irrep with the given label.
    pub fn for_label(alg: Arc<CherednikAlgebra>, label: &str, cutoff: u32) -> Result<Self, CategoryError> {
        let k = alg
            .reflection_group()
            .irrep_index(label)
            .ok_or_else(|| CategoryError::UnknownIrrep(label.to_string()))?;
        VermaSlice::new(alg, k, cutoff)
    }

    pub fn algebra(&self) -> &Arc<CherednikAlgebra> {
        &self.alg
    }

    pub fn irrep_index(&self) -> usize {
        self.irrep
    }

    pub fn irrep(&self) -> &Irrep {
        &self.alg.reflection_group().irreps()[self.irrep]
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// c(W).
    pub fn c_w(&self) -> &Scalar {
        &self.c_w
    }

    pub fn monomials(&self, d: u32) -> &[Mono] {
        &self.monomials[d as usize]
    }

    pub fn monomial_index(&self, m: &Mono) -> Option<usize> {
        self.index.get(m.degree() as usize)?.get(m).copied()
    }

    pub fn ambient_dim(&self, d: u32) -> usize {
        self.monomials[d as usize].len() * self.irrep().dim()
    }

    /// Dimension of the (possibly quotiented) degree-d component.
    pub fn dim(&self, d: u32) -> usize {
        self.ambient_dim(d) - self.killed[d as usize].dim()
    }

    pub fn killed(&self, d: u32) -> &Subspace {
        &self.killed[d as usize]
    }

    pub fn is_quotient(&self) -> bool {
        self.killed.iter().any(|k| !k.is_zero())
    }

    /// (monomial, irrep basis index) of an ambient basis vector.
    pub fn basis_label(&self, d: u32, idx: usize) -> (&Mono, usize) {
        let dw = self.irrep().dim();
        (&self.monomials[d as usize][idx / dw], idx % dw)
    }

    /// x_i: degree d → degree d+1.
    pub fn apply_x(&self, i: usize, d: u32, v: &[Scalar]) -> Result<Vec<Scalar>, CategoryError> {
        if d >= self.cutoff {
            return Err(CategoryError::CutoffExceeded {
                degree: d + 1,
                cutoff: self.cutoff,
            });
        }
        let dw = self.irrep().dim();
        let mut out = vec![Scalar::zero(); self.ambient_dim(d + 1)];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let m = self.monomials[d as usize][idx / dw].mul_var(i);
            out[self.index[d as usize + 1][&m] * dw + idx % dw] = c.clone();
        }
        Ok(out)
    }

    /// y_i: degree d → degree d−1 (the zero space for d = 0).
    pub fn apply_y(&self, i: usize, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        self.y_ops[d as usize][i].apply(v)
    }

    /// The action of the group element g on degree d.
    pub fn apply_group(&self, g: usize, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.irrep();
        let dw = w.dim();
        let rho = w.matrix(g);
        let mut out = vec![Scalar::zero(); v.len()];
        let mut cache: HashMap<usize, Poly> = HashMap::new();
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mk, a) = (idx / dw, idx % dw);
            let image = cache.entry(mk).or_insert_with(|| {
                self.alg.act_x(
                    g,
                    &Poly::monomial(self.monomials[d as usize][mk].clone(), Scalar::one()),
                )
            });
            for (m, e) in image.terms() {
                let k = self.index[d as usize][m];
                let ce = c * e;
                for b in 0..dw {
                    let r = &rho[(b, a)];
                    if !r.is_zero() {
                        out[k * dw + b] += &(&ce * r);
                    }
                }
            }
        }
        out
    }

    fn apply_reflection(&self, r: usize, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        let w = self.irrep();
        let dw = w.dim();
        let rho = w.matrix(self.alg.commutators()[r].element);
        let mut out = vec![Scalar::zero(); v.len()];
        for (idx, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mk, a) = (idx / dw, idx % dw);
            for (k, e) in &self.refl_mono[r][d as usize][mk] {
                let ce = c * e;
                for b in 0..dw {
                    let x = &rho[(b, a)];
                    if !x.is_zero() {
                        out[k * dw + b] += &(&ce * x);
                    }
                }
            }
        }
        out
    }

    /// ∂ = Σ x_i y_i + ∂₀ on degree d.
    pub fn apply_euler(&self, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        let n = self.alg.dim();
        let mut out: Vec<Scalar> = v
            .iter()
            .map(|c| c * &Scalar::from_ratio(n as i64, 2))
            .collect();
        if d > 0 {
            for i in 0..n {
                let yv = self.apply_y(i, d, v);
                let xyv = self.apply_x(i, d - 1, &yv).expect("d − 1 < cutoff");
                for (o, t) in out.iter_mut().zip(&xyv) {
                    *o += t;
                }
            }
        }
        for (r, (_, coeff)) in self.alg.euler_coefficients().iter().enumerate() {
            let sv = self.apply_reflection(r, d, v);
            for (o, t) in out.iter_mut().zip(&sv) {
                if !t.is_zero() {
                    *o -= &(coeff * t);
                }
            }
        }
        out
    }

    /// Canonical representative modulo the killed subspace.
    pub fn reduce(&self, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        self.killed[d as usize].reduce(v)
    }

    /// Coordinates in the quotient basis (free columns).
    pub fn to_quotient(&self, d: u32, v: &[Scalar]) -> Vec<Scalar> {
        let r = self.reduce(d, v);
        self.killed[d as usize]
            .free_columns()
            .into_iter()
            .map(|c| r[c].clone())
            .collect()
    }

    /// Ambient representative of quotient coordinates.
    pub fn lift(&self, d: u32, q: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.ambient_dim(d)];
        for (c, x) in self.killed[d as usize].free_columns().into_iter().zip(q) {
            out[c] = x.clone();
        }
        out
    }

    /// Basis of the joint kernel of y_1..y_n on the degree-d quotient, in
    /// quotient coordinates and reduced echelon form.
    fn singular_basis(&self, d: u32) -> Vec<Vec<Scalar>> {
        let dq = self.dim(d);
        if d == 0 {
            return (0..dq).map(|i| unit_vector(dq, i)).collect();
        }
        let free = self.killed[d as usize].free_columns();
        let n = self.alg.dim();
        let target = self.dim(d - 1);
        let mut m = Matrix::zeros(n * target, dq);
        for (j, &col) in free.iter().enumerate() {
            let e = unit_vector(self.ambient_dim(d), col);
            for i in 0..n {
                let img = self.to_quotient(d - 1, &self.apply_y(i, d, &e));
                for (r, x) in img.into_iter().enumerate() {
                    m[(i * target + r, j)] = x;
                }
            }
        }
        m.nullspace()
    }

    /// Adds the submodule generated by `vectors` (ambient, degree d, assumed
    /// G-stable span of singular vectors) to the killed subspaces.
    fn kill_generated(&mut self, d: u32, vectors: Vec<Vec<Scalar>>) {
        let n = self.alg.dim();
        let mut added: Vec<Vec<Scalar>> = Vec::new();
        let mut current = self.killed[d as usize].clone();
        for v in vectors {
            let r = current.reduce(&v);
            if !is_zero_vec(&r) {
                current = current.join([r.clone()]);
                added.push(r);
            }
        }
        self.killed[d as usize] = current;
        let mut deg = d;
        while deg < self.cutoff && !added.is_empty() {
            let mut next_added = Vec::new();
            let mut next = self.killed[deg as usize + 1].clone();
            for v in &added {
                for i in 0..n {
                    let xv = self.apply_x(i, deg, v).expect("below cutoff");
                    let r = next.reduce(&xv);
                    if !is_zero_vec(&r) {
                        next = next.join([r.clone()]);
                        next_added.push(r);
                    }
                }
            }
            self.killed[deg as usize + 1] = next;
            added = next_added;
            deg += 1;
        }
    }

    /// The trace of g on each degree of the (quotient) slice.
    pub fn traces(&self, g: usize) -> Vec<Scalar> {
        (0..=self.cutoff)
            .map(|d| {
                let free = self.killed[d as usize].free_columns();
                let mut t = Scalar::zero();
                for (j, &col) in free.iter().enumerate() {
                    let e = unit_vector(self.ambient_dim(d), col);
                    let img = self.to_quotient(d, &self.apply_group(g, d, &e));
                    t += &img[j];
                }
                t
            })
            .collect()
    }

    /// Graded G-character of the slice, from traces of conjugacy-class representatives.
    pub fn character(&self) -> GradedCharacter {
        let rg = self.alg.reflection_group();
        let group = rg.group();
        let reps: Vec<usize> = group.classes().iter().map(|c| c[0]).collect();
        let traces: Vec<Vec<Scalar>> = reps.iter().map(|&g| self.traces(g)).collect();
        let mults = (0..=self.cutoff as usize)
            .map(|d| {
                let chi: Vec<Scalar> = (0..group.order())
                    .map(|g| traces[group.class_of(g)][d].clone())
                    .collect();
                decompose_character(group, rg.irreps(), &chi)
            })
            .collect();
        GradedCharacter {
            labels: rg.irreps().iter().map(|w| w.label().to_string()).collect(),
            dims: rg.irreps().iter().map(Irrep::dim).collect(),
            mults,
        }
    }
}

/// Multiplicities of each irrep in a class function; panics if not a genuine character.
fn decompose_character(
    group: &crate::group::GroupAction,
    irreps: &[Irrep],
    chi: &[Scalar],
) -> Vec<usize> {
    irreps
        .iter()
        .map(|w| {
            let m = character_inner(group, chi, w.character());
            let k = m.as_integer().expect("character multiplicities are integers");
            usize::try_from(k).expect("character multiplicities are nonnegative")
        })
        .collect()
}

/// The G-module structure on one degree of a slice, in quotient coordinates.
struct DegreeModule<'a> {
    slice: &'a VermaSlice,
    degree: u32,
}

impl GModule for DegreeModule<'_> {
    fn module_dim(&self) -> usize {
        self.slice.dim(self.degree)
    }

    fn act(&self, g: usize, v: &[Scalar]) -> Vec<Scalar> {
        let lifted = self.slice.lift(self.degree, v);
        let image = self.slice.apply_group(g, self.degree, &lifted);
        self.slice.to_quotient(self.degree, &image)
    }
}

/// One isotypic component of a singular space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicComponent {
    pub label: String,
    pub multiplicity: usize,
    /// Ambient representatives in reduced echelon form.
    pub basis: Vec<Vec<Scalar>>,
}

/// Singular vectors of one degree with their isotypic decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularSpace {
    pub degree: u32,
    /// Ambient representatives, reduced echelon in quotient coordinates.
    pub basis: Vec<Vec<Scalar>>,
    /// Nonzero components only, in irrep table order.
    pub components: Vec<IsotypicComponent>,
}

impl SingularSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn multiplicity(&self, label: &str) -> usize {
        self.components
            .iter()
            .find(|c| c.label == label)
            .map_or(0, |c| c.multiplicity)
    }
}

/// Vectors of degree d killed by every y_i, labelled by isotype.
pub fn singular_vectors(slice: &VermaSlice, d: u32) -> SingularSpace {
    let basis_q = slice.singular_basis(d);
    let rg = slice.alg.reflection_group();
    let module = DegreeModule { slice, degree: d };
    let mut components = Vec::new();
    if !basis_q.is_empty() {
        for w in rg.irreps() {
            let sub = isotypic_project(rg.group(), w, &module, Some(&basis_q));
            if sub.dim() > 0 {
                components.push(IsotypicComponent {
                    label: w.label().to_string(),
                    multiplicity: sub.dim() / w.dim(),
                    basis: sub.basis().iter().map(|v| slice.lift(d, v)).collect(),
                });
            }
        }
    }
    SingularSpace {
        degree: d,
        basis: basis_q.iter().map(|v| slice.lift(d, v)).collect(),
        components,
    }
}

/// Multiplicity of E in the singular vectors of all degrees ≤ cutoff.
pub fn hom_dim(e: &str, slice: &VermaSlice) -> usize {
    (0..=slice.cutoff())
        .map(|d| singular_vectors(slice, d).multiplicity(e))
        .sum()
}

/// Graded multiplicities of irreps, one row per degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedCharacter {
    pub labels: Vec<String>,
    pub dims: Vec<usize>,
    /// `mults[d][k]` = multiplicity of irrep k in degree d.
    pub mults: Vec<Vec<usize>>,
}

impl GradedCharacter {
    pub fn degree_dim(&self, d: usize) -> usize {
        self.mults[d].iter().zip(&self.dims).map(|(m, k)| m * k).sum()
    }

    pub fn graded_dims(&self) -> Vec<usize> {
        (0..self.mults.len()).map(|d| self.degree_dim(d)).collect()
    }

    pub fn cutoff(&self) -> u32 {
        self.mults.len() as u32 - 1
    }
}

/// Character of Δ(W) from the trace formula tr(g | A_d ⊗ W) = h_d(eigenvalues of g on 𝔥*)·χ_W(g).
pub fn verma_character_formula(alg: &CherednikAlgebra, w: &Irrep, cutoff: u32) -> GradedCharacter {
    let rg = alg.reflection_group();
    let group = rg.group();
    let n = alg.dim();
    let reps: Vec<usize> = group.classes().iter().map(|c| c[0]).collect();
    let complete: Vec<Vec<Scalar>> = reps
        .iter()
        .map(|&g| {
            let a = group.element(g).inverse().expect("invertible").transpose();
            // power sums p_k = tr(A^k), then k·h_k = Σ_{i=1..k} p_i h_{k−i}
            let mut power = Matrix::identity(n);
            let mut p = vec![Scalar::zero()];
            for _ in 1..=cutoff {
                power = power.mul(&a);
                p.push(power.trace());
            }
            let mut h = vec![Scalar::one()];
            for k in 1..=cutoff as usize {
                let mut s = Scalar::zero();
                for i in 1..=k {
                    s += &(&p[i] * &h[k - i]);
                }
                h.push(&s / &Scalar::from_int(k as i64));
            }
            h
        })
        .collect();
    let mults = (0..=cutoff as usize)
        .map(|d| {
            let chi: Vec<Scalar> = (0..group.order())
                .map(|g| &complete[group.class_of(g)][d] * &w.character()[g])
                .collect();
            decompose_character(group, rg.irreps(), &chi)
        })
        .collect();
    GradedCharacter {
        labels: rg.irreps().iter().map(|v| v.label().to_string()).collect(),
        dims: rg.irreps().iter().map(Irrep::dim).collect(),
        mults,
    }
}

/// The truncated simple quotient L(W) with its character.
#[derive(Clone, Debug)]
pub struct SimpleQuotient {
    pub slice: VermaSlice,
    pub character: GradedCharacter,
    /// No singular vectors remain in degrees 1..=cutoff.
    pub stable_under_cutoff: bool,
    pub passes: usize,
}

/// Quotients Δ(W) by submodules generated by positive-degree singular
/// vectors until a full pass over degrees 1..=cutoff finds none.
pub fn simple_quotient_slice(
    alg: Arc<CherednikAlgebra>,
    irrep: usize,
    cutoff: u32,
) -> Result<SimpleQuotient, CategoryError> {
    let mut slice = VermaSlice::new(alg, irrep, cutoff)?;
    let mut passes = 0;
    loop {
        passes += 1;
        let mut found = false;
        for d in 1..=cutoff {
            let basis = slice.singular_basis(d);
            if basis.is_empty() {
                continue;
            }
            found = true;
            let lifted = basis.iter().map(|v| slice.lift(d, v)).collect();
            slice.kill_generated(d, lifted);
        }
        if !found {
            break;
        }
    }
    let stable = (1..=cutoff).all(|d| slice.singular_basis(d).is_empty());
    let character = slice.character();
    Ok(SimpleQuotient {
        slice,
        character,
        stable_under_cutoff: stable,
        passes,
    })
}

/// Edges (W, E) of the highest-weight order: c(E) − c(W) ∈ ℤ_{>0}.
pub fn highest_weight_order(alg: &CherednikAlgebra) -> Result<Vec<(usize, usize)>, CategoryError> {
    let cs = c_values(alg)?;
    let mut edges = Vec::new();
    for (w, cw) in cs.iter().enumerate() {
        for (e, ce) in cs.iter().enumerate() {
            if let Some(k) = (ce - cw).as_integer() {
                if k > 0.into() {
                    edges.push((w, e));
                }
            }
        }
    }
    Ok(edges)
}

/// Connected components of the linkage c(E) − c(W) ∈ ℤ ∖ {0}, ordered by first member.
pub fn blocks(alg: &CherednikAlgebra) -> Result<Vec<Vec<usize>>, CategoryError> {
    let cs = c_values(alg)?;
    let k = cs.len();
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for a in 0..k {
        for b in a + 1..k {
            if let Some(d) = (&cs[b] - &cs[a]).as_integer() {
                if d != 0.into() {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for a in 0..k {
        let r = find(&mut parent, a);
        groups.entry(r).or_default().push(a);
    }
    Ok(groups.into_values().collect())
}

/// Decomposition numbers [Δ(W) : L(E)], rows W and columns E in irrep table order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionMatrix {
    pub labels: Vec<String>,
    pub entries: Vec<Vec<usize>>,
    pub cutoff: u32,
}

/// Expresses ch Δ(W) through the characters of the L(E), peeling off the
/// lowest remaining weight each time.
pub fn decompose_verma_character(
    alg: &CherednikAlgebra,
    w: usize,
    verma: &GradedCharacter,
    simples: &[GradedCharacter],
) -> Result<Vec<usize>, CategoryError> {
    let cs = c_values(alg)?;
    let labels = &verma.labels;
    let cutoff = verma.cutoff();
    let mut residual: Vec<Vec<i64>> = verma
        .mults
        .iter()
        .map(|row| row.iter().map(|&m| m as i64).collect())
        .collect();
    let mut result = vec![0usize; cs.len()];
    let inconsistent = |degree: u32, reason: String| CategoryError::InconsistentTruncation {
        verma: labels[w].clone(),
        degree,
        cutoff,
        reason,
    };
    for d in 0..=cutoff {
        for e in 0..cs.len() {
            let m = residual[d as usize][e];
            if m == 0 {
                continue;
            }
            if m < 0 {
                return Err(inconsistent(d, format!("negative multiplicity of {}", labels[e])));
            }
            let shift = (&cs[e] - &cs[w]).as_integer();
            if shift != Some((d as i64).into()) {
                return Err(inconsistent(
                    d,
                    format!("{} appears at weight c({}) + {d} ≠ c({})", labels[e], labels[w], labels[e]),
                ));
            }
            let simple = &simples[e];
            if simple.cutoff() + d < cutoff {
                return Err(inconsistent(d, format!("L({}) is not computed far enough", labels[e])));
            }
            for k in 0..=(cutoff - d) {
                for (f, x) in simple.mults[k as usize].iter().enumerate() {
                    residual[(d + k) as usize][f] -= m * *x as i64;
                }
            }
            result[e] += m as usize;
        }
    }
    Ok(result)
}

/// The full matrix [Δ(W) : L(E)] up to the cutoff.
pub fn decomposition_matrix(alg: Arc<CherednikAlgebra>, cutoff: u32) -> Result<DecompositionMatrix, CategoryError> {
    let k = alg.reflection_group().irreps().len();
    let simples = (0..k)
        .map(|e| simple_quotient_slice(alg.clone(), e, cutoff).map(|q| q.character))
        .collect::<Result<Vec<_>, _>>()?;
    let mut entries = Vec::with_capacity(k);
    for w in 0..k {
        let verma = verma_character_formula(&alg, &alg.reflection_group().irreps()[w], cutoff);
        entries.push(decompose_verma_character(&alg, w, &verma, &simples)?);
    }
    Ok(DecompositionMatrix {
        labels: alg
            .reflection_group()
            .irreps()
            .iter()
            .map(|w| w.label().to_string())
            .collect(),
        entries,
        cutoff,
    })
}

/// a·v with a straightened in the algebra, t-factors killing degree 0, and
/// the group acting through W.
pub fn verma_action(slice: &VermaSlice, a: &PbwElement, v: &ModuleVector) -> Result<ModuleVector, CategoryError> {
    let alg = slice.algebra();
    let n = alg.dim();
    let w = slice.irrep();
    let dw = w.dim();
    let mut out: BTreeMap<u32, Vec<Scalar>> = BTreeMap::new();
    for (&d, part) in v.parts() {
        for (idx, c) in part.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (mk, a_idx) = (idx / dw, idx % dw);
            let f = PbwElement::from_x_poly(
                n,
                &Poly::monomial(slice.monomials(d)[mk].clone(), Scalar::one()),
            );
            let prod = alg.multiply(a, &f)?;
            for (key, coeff) in prod.terms() {
                if !key.y.is_one() {
                    continue;
                }
                let deg = key.x.degree();
                if deg > slice.cutoff() {
                    return Err(CategoryError::CutoffExceeded {
                        degree: deg,
                        cutoff: slice.cutoff(),
                    });
                }
                let k = slice.monomial_index(&key.x).expect("monomial within cutoff");
                let rho = w.matrix(key.g);
                let target = out
                    .entry(deg)
                    .or_insert_with(|| vec![Scalar::zero(); slice.ambient_dim(deg)]);
                let cc = c * coeff;
                for b in 0..dw {
                    let r = &rho[(b, a_idx)];
                    if !r.is_zero() {
                        target[k * dw + b] += &(&cc * r);
                    }
                }
            }
        }
    }
    let mut result = ModuleVector::zero();
    for (d, part) in out {
        result.set(d, slice.reduce(d, &part));
    }
    Ok(result)
}

/// The Dunkl operator of v ∈ 𝔥 on Δ(W) = K[𝔥] ⊗ W:
/// ∂_v f ⊗ w − Σ_s 2c(s)/(1−λ_s)·(v, α_s)·(f − s(f))/α_s ⊗ s·w.
pub fn dunkl_action(slice: &VermaSlice, v: &[Scalar], u: &ModuleVector) -> ModuleVector {
    let alg = slice.algebra();
    let n = alg.dim();
    let w = slice.irrep();
    let dw = w.dim();
    let mut result = ModuleVector::zero();
    for (&d, part) in u.parts() {
        if d == 0 {
            continue;
        }
        // split into Σ_a f_a ⊗ e_a
        let mut fs = vec![Poly::zero(); dw];
        for (idx, c) in part.iter().enumerate() {
            if !c.is_zero() {
                fs[idx % dw].add_term(slice.monomials(d)[idx / dw].clone(), c.clone());
            }
        }
        let mut out = vec![Scalar::zero(); slice.ambient_dim(d - 1)];
        let mut put = |f: &Poly, wv: &[Scalar], scale: &Scalar| {
            for (m, a) in f.terms() {
                let k = slice.monomial_index(m).expect("degree d − 1");
                let sa = a * scale;
                for (b, x) in wv.iter().enumerate() {
                    if !x.is_zero() {
                        out[k * dw + b] += &(&sa * x);
                    }
                }
            }
        };
        for (a, f) in fs.iter().enumerate() {
            if f.is_zero() {
                continue;
            }
            let e_a = unit_vector(dw, a);
            let mut grad = Poly::zero();
            for (i, vi) in v.iter().enumerate() {
                grad.add_assign_scaled(&f.derivative(i), vi);
            }
            put(&grad, &e_a, &Scalar::one());
            for s in alg.reflections() {
                let cs = alg.c().value(s);
                if cs.is_zero() {
                    continue;
                }
                let pairing = (0..n).fold(Scalar::zero(), |acc, i| acc + &v[i] * &s.alpha[i]);
                if pairing.is_zero() {
                    continue;
                }
                let coeff = &(&(cs * &Scalar::from_int(2)) / &(Scalar::one() - s.lambda.clone())) * &pairing;
                let diff = f.sub(&alg.act_x(s.element, f));
                let q = diff
                    .div_linear(&s.alpha)
                    .expect("f − s(f) is divisible by α_s");
                let sw = w.matrix(s.element).mul_vec(&e_a);
                put(&q, &sw, &-coeff);
            }
        }
        result.set(d - 1, slice.reduce(d - 1, &out));
    }
    result
}

/// Weight spaces of the slice: (weight, dim ker(∂ − weight)) per degree, with
/// a flag telling whether ∂ acts on that degree by the scalar c(W) + d.
pub fn weight_spaces(slice: &VermaSlice) -> Vec<(Scalar, usize, bool)> {
    (0..=slice.cutoff())
        .map(|d| {
            let lambda = slice.c_w() + &Scalar::from_int(d as i64);
            let dim = slice.ambient_dim(d);
            let mut m = Matrix::zeros(dim, dim);
            for j in 0..dim {
                let img = slice.apply_euler(d, &unit_vector(dim, j));
                for (i, x) in img.into_iter().enumerate() {
                    m[(i, j)] = if i == j { &x - &lambda } else { x };
                }
            }
            let kernel = dim - m.rank();
            (lambda, kernel, m.is_zero())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtin::{cyclic, symmetric3};
    use crate::reflection::ReflectionFunction;

    fn z2(c: Scalar) -> Arc<CherednikAlgebra> {
        let rg = Arc::new(cyclic(2).unwrap());
        let f = ReflectionFunction::constant(rg.reflections(), c);
        Arc::new(CherednikAlgebra::new(rg, f))
    }

    #[test]
    fn c_scalar_examples() {
        let g = Scalar::from_ratio(3, 7);
        let alg = z2(g.clone());
        let cs = c_values(&alg).unwrap();
        assert_eq!(cs, vec![&Scalar::from_ratio(1, 2) - &g, &Scalar::from_ratio(1, 2) + &g]);

        let rg = Arc::new(symmetric3().unwrap());
        let f = ReflectionFunction::constant(rg.reflections(), g.clone());
        let alg3 = CherednikAlgebra::new(rg, f);
        let cs = c_values(&alg3).unwrap();
        assert_eq!(cs[0], &Scalar::one() - &(&g * &Scalar::from_int(3)));
        assert_eq!(cs[2], Scalar::one());
    }

    #[test]
    fn rank_one_singular_vector() {
        let alg = z2(Scalar::from_ratio(1, 2));
        let slice = VermaSlice::new(alg.clone(), 0, 6).unwrap();
        let s1 = singular_vectors(&slice, 1);
        assert_eq!(s1.dim(), 1);
        assert_eq!(s1.multiplicity("sgn"), 1);
        for d in 2..=6 {
            assert_eq!(singular_vectors(&slice, d).dim(), 0);
        }
        let sgn = VermaSlice::new(alg, 1, 20).unwrap();
        assert!((1..=20).all(|d| singular_vectors(&sgn, d).dim() == 0));
    }

    #[test]
    fn simple_quotient_z2() {
        let alg = z2(Scalar::from_ratio(1, 2));
        let l = simple_quotient_slice(alg, 0, 20).unwrap();
        let mut expected = vec![0; 21];
        expected[0] = 1;
        assert_eq!(l.character.graded_dims(), expected);
        assert!(l.stable_under_cutoff);

        let generic = simple_quotient_slice(z2(Scalar::from_ratio(1, 3)), 0, 20).unwrap();
        assert_eq!(generic.character.graded_dims(), vec![1; 21]);
    }

    #[test]
    fn decomposition_z2() {
        let m = decomposition_matrix(z2(Scalar::from_ratio(1, 2)), 10).unwrap();
        assert_eq!(m.entries, vec![vec![1, 1], vec![0, 1]]);
        let m = decomposition_matrix(z2(Scalar::from_ratio(1, 3)), 10).unwrap();
        assert_eq!(m.entries, vec![vec![1, 0], vec![0, 1]]);
    }

    #[test]
    fn order_and_blocks_z2() {
        let alg = z2(Scalar::from_ratio(1, 2));
        assert_eq!(highest_weight_order(&alg).unwrap(), vec![(0, 1)]);
        assert_eq!(blocks(&alg).unwrap(), vec![vec![0, 1]]);
        let alg = z2(Scalar::from_ratio(1, 3));
        assert!(highest_weight_order(&alg).unwrap().is_empty());
        assert_eq!(blocks(&alg).unwrap(), vec![vec![0], vec![1]]);
        let alg = z2(Scalar::zero());
        assert_eq!(blocks(&alg).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn action_examples() {
        let alg = z2(Scalar::from_ratio(1, 2));
        let slice = VermaSlice::new(alg.clone(), 0, 4).unwrap();
        let x = ModuleVector::homogeneous(1, vec![Scalar::one()]);
        let t = PbwElement::y(1, 0);
        assert!(verma_action(&slice, &t, &x).unwrap().is_zero());
        assert!(dunkl_action(&slice, &[Scalar::one()], &x).is_zero());
        let one = ModuleVector::homogeneous(0, vec![Scalar::one()]);
        assert!(verma_action(&slice, &t, &one).unwrap().is_zero());
        let x2 = ModuleVector::homogeneous(2, vec![Scalar::one()]);
        let e = verma_action(&slice, &alg.euler_element(), &x2).unwrap();
        assert_eq!(e, ModuleVector::homogeneous(2, vec![Scalar::from_int(2)]));
        let x4 = ModuleVector::homogeneous(4, vec![Scalar::one()]);
        assert!(matches!(
            verma_action(&slice, &PbwElement::x(1, 0), &x4),
            Err(CategoryError::CutoffExceeded { .. })
        ));
    }

    #[test]
    fn hom_dims() {
        let alg = z2(Scalar::from_ratio(1, 2));
        let triv = VermaSlice::new(alg.clone(), 0, 8).unwrap();
        let sgn = VermaSlice::new(alg, 1, 8).unwrap();
        assert_eq!(hom_dim("triv", &triv), 1);
        assert_eq!(hom_dim("sgn", &triv), 1);
        assert_eq!(hom_dim("triv", &sgn), 0);
    }
}
