//! The rational Cherednik algebra H_c(𝔥, G) in the PBW basis t*^I · g · t^J.
//!
//! Variables: `x_i` = t*ᵢ ∈ 𝔥* and `y_i` = tᵢ ∈ 𝔥. Defining relations:
//!
//! * g·x·g⁻¹ = g(x), g·y·g⁻¹ = g(y);
//! * [x_i, x_j] = 0 = [y_i, y_j];
//! * y_i·x_j = x_j·y_i + δ_ij − Σ_s c(s)(y_i, α_s)(α_s^∨, x_j)·s.
//!
//! Products are straightened with a closed form for y_i·x^P: pushing y_i
//! through the word x^P produces x^P·y_i, the derivative ∂_i x^P, and for
//! every reflection s and position k a term x_{<k} · s(x_{>k}) · s.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use thiserror::Error;

use crate::builtin::ReflectionGroup;
use crate::poly::{Mono, Poly};
use crate::reflection::{PseudoReflection, ReflectionFunction};
use crate::scalar::Scalar;

/// Default bound on coefficient bit size before [`PbwError::CoefficientBlowup`].
pub const DEFAULT_MAX_BITS: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbwError {
    #[error("element does not belong to this algebra: {0}")]
    AlgebraMismatch(String),
    #[error("coefficient of {bits} bits exceeds the limit of {limit}")]
    CoefficientBlowup { bits: u64, limit: u64 },
}

/// Index of a PBW basis vector t*^x · g · t^y.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct PbwKey {
    pub x: Mono,
    pub g: usize,
    pub y: Mono,
}

impl PbwKey {
    /// |I| − |J|.
    pub fn grade(&self) -> i64 {
        self.x.degree() as i64 - self.y.degree() as i64
    }
}

/// A finite linear combination of PBW monomials with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct PbwElement {
    terms: BTreeMap<PbwKey, Scalar>,
}

impl PbwElement {
    pub fn zero() -> Self {
        PbwElement::default()
    }

    pub fn monomial(key: PbwKey, c: Scalar) -> Self {
        let mut e = PbwElement::zero();
        e.add_term(key, c);
        e
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        PbwElement::monomial(
            PbwKey {
                x: Mono::one(n),
                g: 0,
                y: Mono::one(n),
            },
            c,
        )
    }

    pub fn one(n: usize) -> Self {
        PbwElement::scalar(n, Scalar::one())
    }

    pub fn x(n: usize, i: usize) -> Self {
        PbwElement::monomial(
            PbwKey {
                x: Mono::var(n, i),
                g: 0,
                y: Mono::one(n),
            },
            Scalar::one(),
        )
    }

    pub fn y(n: usize, i: usize) -> Self {
        PbwElement::monomial(
            PbwKey {
                x: Mono::one(n),
                g: 0,
                y: Mono::var(n, i),
            },
            Scalar::one(),
        )
    }

    pub fn group_element(n: usize, g: usize) -> Self {
        PbwElement::monomial(
            PbwKey {
                x: Mono::one(n),
                g,
                y: Mono::one(n),
            },
            Scalar::one(),
        )
    }

    /// f(t*) · 1 for a polynomial f in the x variables.
    pub fn from_x_poly(n: usize, f: &Poly) -> Self {
        let mut e = PbwElement::zero();
        for (m, c) in f.terms() {
            e.add_term(
                PbwKey {
                    x: m.clone(),
                    g: 0,
                    y: Mono::one(n),
                },
                c.clone(),
            );
        }
        e
    }

    pub fn terms(&self) -> &BTreeMap<PbwKey, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, key: &PbwKey) -> Scalar {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, key: PbwKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_scaled(&mut self, other: &PbwElement, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (k, a) in &other.terms {
            self.add_term(k.clone(), a * c);
        }
    }

    pub fn scale(&self, c: &Scalar) -> PbwElement {
        let mut out = PbwElement::zero();
        out.add_scaled(self, c);
        out
    }

    /// Largest |I| + |J| over the support, 0 for the zero element.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| k.x.degree() + k.y.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn max_bits(&self) -> u64 {
        self.terms.values().map(Scalar::bit_size).max().unwrap_or(0)
    }
}

impl Add for &PbwElement {
    type Output = PbwElement;
    fn add(self, rhs: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::one());
        out
    }
}

impl Sub for &PbwElement {
    type Output = PbwElement;
    fn sub(self, rhs: &PbwElement) -> PbwElement {
        let mut out = self.clone();
        out.add_scaled(rhs, &Scalar::from_int(-1));
        out
    }
}

impl Neg for &PbwElement {
    type Output = PbwElement;
    fn neg(self) -> PbwElement {
        self.scale(&Scalar::from_int(-1))
    }
}

/// Structure constants of one reflection in y_i·x_j = x_j·y_i + δ_ij + Σ_s κ_s[i][j]·s.
#[derive(Clone, Debug)]
pub struct Commutator {
    pub element: usize,
    pub kappa: Vec<Vec<Scalar>>,
}

/// An immutable algebra instance H_c(𝔥, G).
#[derive(Clone, Debug)]
pub struct CherednikAlgebra {
    rg: Arc<ReflectionGroup>,
    c: ReflectionFunction,
    reflections: Vec<PseudoReflection>,
    /// g(x_j) as a linear form in the x variables, per element.
    x_images: Vec<Vec<Poly>>,
    /// g(y_j) as a linear form in the y variables, per element.
    y_images: Vec<Vec<Poly>>,
    commutators: Vec<Commutator>,
    /// (s, 2c(s)/(1−λ_s)) for every reflection with c(s) ≠ 0.
    euler_coeffs: Vec<(usize, Scalar)>,
    max_bits: u64,
}

impl CherednikAlgebra {
    pub fn new(rg: Arc<ReflectionGroup>, c: ReflectionFunction) -> Self {
        let reflections = rg.reflections().to_vec();
        CherednikAlgebra::with_reflections(rg, c, reflections)
    }

    /// Builds the algebra from explicitly supplied (α_s, α_s^∨) data, e.g. rescaled pairs.
    pub fn with_reflections(
        rg: Arc<ReflectionGroup>,
        c: ReflectionFunction,
        reflections: Vec<PseudoReflection>,
    ) -> Self {
        let group = rg.group();
        let n = group.dim();
        let mut x_images = Vec::with_capacity(group.order());
        let mut y_images = Vec::with_capacity(group.order());
        for g in 0..group.order() {
            let m = group.element(g);
            let a = m.inverse().expect("group elements are invertible").transpose();
            x_images.push((0..n).map(|j| Poly::linear(&a.column(j))).collect());
            y_images.push((0..n).map(|j| Poly::linear(&m.column(j))).collect());
        }
        let mut commutators = Vec::new();
        let mut euler_coeffs = Vec::new();
        for s in &reflections {
            let cs = c.value(s);
            if cs.is_zero() {
                continue;
            }
            let kappa = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| -(&(cs * &s.alpha[i]) * &s.coroot[j]))
                        .collect()
                })
                .collect();
            commutators.push(Commutator {
                element: s.element,
                kappa,
            });
            let denom = Scalar::one() - s.lambda.clone();
            euler_coeffs.push((s.element, &(cs * &Scalar::from_int(2)) / &denom));
        }
        CherednikAlgebra {
            rg,
            c,
            reflections,
            x_images,
            y_images,
            commutators,
            euler_coeffs,
            max_bits: DEFAULT_MAX_BITS,
        }
    }

    pub fn with_max_bits(mut self, limit: u64) -> Self {
        self.max_bits = limit;
        self
    }

    pub fn reflection_group(&self) -> &Arc<ReflectionGroup> {
        &self.rg
    }

    pub fn c(&self) -> &ReflectionFunction {
        &self.c
    }

    pub fn reflections(&self) -> &[PseudoReflection] {
        &self.reflections
    }

    pub fn dim(&self) -> usize {
        self.rg.group().dim()
    }

    pub fn order(&self) -> usize {
        self.rg.group().order()
    }

    /// κ tables for the reflections with c(s) ≠ 0, aligned with [`Self::euler_coefficients`].
    pub fn commutators(&self) -> &[Commutator] {
        &self.commutators
    }

    /// (s, 2c(s)/(1−λ_s)) for the reflections with c(s) ≠ 0.
    pub fn euler_coefficients(&self) -> &[(usize, Scalar)] {
        &self.euler_coeffs
    }

    /// g(x_j) as a linear polynomial.
    pub fn x_image(&self, g: usize, j: usize) -> &Poly {
        &self.x_images[g][j]
    }

    /// g(f) for a polynomial f in the x variables.
    pub fn act_x(&self, g: usize, f: &Poly) -> Poly {
        if g == 0 {
            return f.clone();
        }
        f.substitute(&self.x_images[g])
    }

    /// g(f) for a polynomial f in the y variables.
    pub fn act_y(&self, g: usize, f: &Poly) -> Poly {
        if g == 0 {
            return f.clone();
        }
        f.substitute(&self.y_images[g])
    }

    fn act_x_mono(&self, g: usize, m: &Mono) -> Poly {
        self.act_x(g, &Poly::monomial(m.clone(), Scalar::one()))
    }

    pub fn check_element(&self, a: &PbwElement) -> Result<(), PbwError> {
        let n = self.dim();
        for k in a.terms.keys() {
            if k.x.nvars() != n || k.y.nvars() != n {
                return Err(PbwError::AlgebraMismatch(format!(
                    "term has {} variables, algebra has {n}",
                    k.x.nvars().max(k.y.nvars())
                )));
            }
            if k.g >= self.order() {
                return Err(PbwError::AlgebraMismatch(format!(
                    "group index {} out of range for order {}",
                    k.g,
                    self.order()
                )));
            }
        }
        Ok(())
    }

    /// y_i · x^P in PBW form.
    pub fn y_times_x(&self, i: usize, p: &Mono) -> PbwElement {
        let n = self.dim();
        let one = Mono::one(n);
        let mut out = PbwElement::monomial(
            PbwKey {
                x: p.clone(),
                g: 0,
                y: Mono::var(n, i),
            },
            Scalar::one(),
        );
        if let Some(d) = p.div_var(i) {
            out.add_term(
                PbwKey {
                    x: d,
                    g: 0,
                    y: one.clone(),
                },
                Scalar::from_int(p.get(i) as i64),
            );
        }
        if self.commutators.is_empty() || p.is_one() {
            return out;
        }
        let word = p.word();
        for com in &self.commutators {
            // suffix = s(x_{word[k+1..]}), built right to left
            let mut suffix = Poly::constant(n, Scalar::one());
            for k in (0..word.len()).rev() {
                let j = word[k];
                let coeff = &com.kappa[i][j];
                if !coeff.is_zero() {
                    let prefix = Mono::from_exps({
                        let mut e = vec![0u16; n];
                        for &v in &word[..k] {
                            e[v] += 1;
                        }
                        e
                    });
                    for (m, a) in suffix.terms() {
                        out.add_term(
                            PbwKey {
                                x: m.mul(&prefix),
                                g: com.element,
                                y: one.clone(),
                            },
                            a * coeff,
                        );
                    }
                }
                suffix = self.x_images[com.element][j].mul(&suffix);
            }
        }
        out
    }

    /// y^J · x^K in PBW form.
    pub fn straighten(&self, j: &Mono, k: &Mono) -> PbwElement {
        let mut memo = HashMap::new();
        self.straighten_memo(j, k, &mut memo)
    }

    fn straighten_memo(
        &self,
        j: &Mono,
        k: &Mono,
        memo: &mut HashMap<(Mono, Mono), PbwElement>,
    ) -> PbwElement {
        if j.is_one() || k.is_one() {
            return PbwElement::monomial(
                PbwKey {
                    x: k.clone(),
                    g: 0,
                    y: j.clone(),
                },
                Scalar::one(),
            );
        }
        if let Some(hit) = memo.get(&(j.clone(), k.clone())) {
            return hit.clone();
        }
        let i = j.first_var().expect("nonconstant");
        let rest = j.div_var(i).expect("divides");
        let inner = self.straighten_memo(&rest, k, memo);
        let mut out = PbwElement::zero();
        let mut yx_cache: HashMap<Mono, PbwElement> = HashMap::new();
        for (key, a) in &inner.terms {
            let yx = yx_cache
                .entry(key.x.clone())
                .or_insert_with(|| self.y_times_x(i, &key.x));
            // (x^{P'} k' y^{Q'}) · g · y^Q = x^{P'} (k'g) g⁻¹(y^{Q'}) y^Q
            let ginv = self.rg.group().inv(key.g);
            for (t, b) in &yx.terms {
                let coeff = a * b;
                let g = self.rg.group().mul(t.g, key.g);
                if t.y.is_one() {
                    out.add_term(
                        PbwKey {
                            x: t.x.clone(),
                            g,
                            y: key.y.clone(),
                        },
                        coeff,
                    );
                } else {
                    let moved = self.act_y(ginv, &Poly::monomial(t.y.clone(), Scalar::one()));
                    for (m, c) in moved.terms() {
                        out.add_term(
                            PbwKey {
                                x: t.x.clone(),
                                g,
                                y: m.mul(&key.y),
                            },
                            &coeff * c,
                        );
                    }
                }
            }
        }
        memo.insert((j.clone(), k.clone()), out.clone());
        out
    }

    /// The straightened product a·b.
    pub fn multiply(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement, PbwError> {
        self.check_element(a)?;
        self.check_element(b)?;
        let group = self.rg.group();
        let mut memo = HashMap::new();
        let mut gx_cache: HashMap<(usize, Mono), Poly> = HashMap::new();
        let mut hy_cache: HashMap<(usize, Mono), Poly> = HashMap::new();
        let mut out = PbwElement::zero();
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let cab = ca * cb;
                let s = self.straighten_memo(&ka.y, &kb.x, &mut memo);
                let hinv = group.inv(kb.g);
                for (ks, cs) in &s.terms {
                    let gx = gx_cache
                        .entry((ka.g, ks.x.clone()))
                        .or_insert_with(|| self.act_x_mono(ka.g, &ks.x))
                        .clone();
                    let hy = hy_cache
                        .entry((hinv, ks.y.clone()))
                        .or_insert_with(|| self.act_y(hinv, &Poly::monomial(ks.y.clone(), Scalar::one())))
                        .clone();
                    let g = group.mul(group.mul(ka.g, ks.g), kb.g);
                    let c = &cab * cs;
                    for (mx, ax) in gx.terms() {
                        let x = mx.mul(&ka.x);
                        let cx = &c * ax;
                        for (my, ay) in hy.terms() {
                            out.add_term(
                                PbwKey {
                                    x: x.clone(),
                                    g,
                                    y: my.mul(&kb.y),
                                },
                                &cx * ay,
                            );
                        }
                    }
                }
            }
        }
        let bits = out.max_bits();
        if bits > self.max_bits {
            return Err(PbwError::CoefficientBlowup {
                bits,
                limit: self.max_bits,
            });
        }
        Ok(out)
    }

    /// ∂₀ = dim(𝔥)/2 − Σ_s 2c(s)/(1−λ_s)·s.
    pub fn euler_central(&self) -> PbwElement {
        let n = self.dim();
        let mut e = PbwElement::scalar(n, Scalar::from_ratio(n as i64, 2));
        for (s, coeff) in &self.euler_coeffs {
            e.add_term(
                PbwKey {
                    x: Mono::one(n),
                    g: *s,
                    y: Mono::one(n),
                },
                -coeff,
            );
        }
        e
    }

    /// ∂ = Σ x_i y_i + ∂₀.
    pub fn euler_element(&self) -> PbwElement {
        let n = self.dim();
        let mut e = self.euler_central();
        for i in 0..n {
            e.add_term(
                PbwKey {
                    x: Mono::var(n, i),
                    g: 0,
                    y: Mono::var(n, i),
                },
                Scalar::one(),
            );
        }
        e
    }

    /// [∂, a].
    pub fn ad_euler(&self, a: &PbwElement) -> Result<PbwElement, PbwError> {
        let d = self.euler_element();
        Ok(&self.multiply(&d, a)? - &self.multiply(a, &d)?)
    }

    pub fn commutator(&self, a: &PbwElement, b: &PbwElement) -> Result<PbwElement, PbwError> {
        Ok(&self.multiply(a, b)? - &self.multiply(b, a)?)
    }
}

/// Splits an element by |I| − |J|.
pub fn grade_decompose(a: &PbwElement) -> BTreeMap<i64, PbwElement> {
    let mut out: BTreeMap<i64, PbwElement> = BTreeMap::new();
    for (k, c) in &a.terms {
        out.entry(k.grade()).or_default().add_term(k.clone(), c.clone());
    }
    out
}
