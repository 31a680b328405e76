//! The level-m Banach completions Ĥ(m)_{c,K} = 𝒜(m) ⊗̂ K[G] ⊗̂ ℬ(r(m)).
//!
//! Norms are never materialized as reals: the norm of a PBW term a·t*^I g t^J
//! is |π|^w with weighted valuation w = v_p(a) − m|I| − r|J|, and the Gauss
//! norm exponent of an element is the minimum of w over its terms. The
//! uniformizer π is p.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use thiserror::Error;

use crate::category_o::{weight_spaces, CategoryError, VermaSlice};
use crate::linalg::unit_vector;
use crate::padic::{PadicContext, Valuation};
use crate::pbw::{grade_decompose, CherednikAlgebra, PbwElement, PbwError, PbwKey};
use crate::poly::count_monomials;
use crate::scalar::Scalar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BanachError {
    #[error("every stored term has weighted valuation ≥ the tail bound {tau}; increase the precision")]
    TailDominated { tau: i64 },
    #[error("lattice violation at level {level} (r = {r}): {product} has norm exponent {exponent}")]
    LatticeViolation {
        level: u32,
        r: u32,
        product: String,
        exponent: Valuation,
    },
    #[error("generator {generator} has operator-norm exponent {exponent} < 0 on degree {degree}")]
    UnboundedGenerator {
        generator: String,
        degree: u32,
        exponent: i64,
    },
    #[error("family is incompatible at level {level}")]
    IncompatibleFamily { level: u32 },
    #[error("elements live at different levels or primes")]
    LevelMismatch,
    #[error("the normed slice does not recover the algebraic Verma module at degree {degree}")]
    WeightRecovery { degree: u32 },
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

/// Level m, the exponent r = r(m) and the p-adic context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelParams {
    m: u32,
    r: u32,
    ctx: PadicContext,
}

impl LevelParams {
    /// Unchecked parameters; [`choose_r`] produces checked ones.
    pub fn new(m: u32, r: u32, ctx: PadicContext) -> Self {
        LevelParams { m, r, ctx }
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn ctx(&self) -> &PadicContext {
        &self.ctx
    }

    /// v_p(a) − m|I| − r|J|.
    pub fn weight(&self, key: &PbwKey, a: &Scalar) -> Valuation {
        self.ctx.val(a).shift(
            -(self.m as i64) * key.x.degree() as i64 - self.r as i64 * key.y.degree() as i64,
        )
    }

    fn prime_power(&self, e: u32) -> Scalar {
        Scalar::from_bigint(BigInt::from(self.ctx.prime()).pow(e))
    }
}

/// ρ_c = max(0, ⌈−min_s v_p(2c(s)/(1−λ_s))⌉); inexact valuations count as their lower bound.
pub fn rho_c(alg: &CherednikAlgebra, ctx: &PadicContext) -> u32 {
    alg.euler_coefficients()
        .iter()
        .filter_map(|(_, a)| ctx.val(a).value())
        .map(|v| (-v).max(0) as u32)
        .max()
        .unwrap_or(0)
}

/// r(m) = max(r(m−1) + 1, m + ρ_c), with r(−1) = 0, raised until [`lattice_check`] passes.
pub fn choose_r(
    alg: &CherednikAlgebra,
    m: u32,
    ctx: &PadicContext,
    previous: Option<u32>,
) -> LevelParams {
    let floor = previous.map_or(1, |r| r + 1);
    let mut r = floor.max(m + rho_c(alg, ctx));
    loop {
        let params = LevelParams::new(m, r, ctx.clone());
        if lattice_check(alg, &params).is_ok() {
            return params;
        }
        r += 1;
    }
}

/// r(0), …, r(levels − 1) by repeated [`choose_r`].
pub fn choose_levels(alg: &CherednikAlgebra, ctx: &PadicContext, levels: u32) -> Vec<LevelParams> {
    let mut out: Vec<LevelParams> = Vec::new();
    for m in 0..levels {
        let prev = out.last().map(LevelParams::r);
        out.push(choose_r(alg, m, ctx, prev));
    }
    out
}

/// A truncated element of Ĥ(m): stored terms plus a bound τ such that every
/// omitted term has weighted valuation ≥ τ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BanachElement {
    elem: PbwElement,
    params: LevelParams,
    tau: i64,
}

impl BanachElement {
    /// Drops the terms whose weighted valuation reaches τ.
    pub fn new(elem: PbwElement, params: LevelParams, tau: i64) -> Self {
        let mut kept = PbwElement::zero();
        for (k, a) in elem.terms() {
            if params.weight(k, a).cmp_value(&Valuation::exact(tau)) == Ordering::Less {
                kept.add_term(k.clone(), a.clone());
            }
        }
        BanachElement {
            elem: kept,
            params,
            tau,
        }
    }

    /// τ equal to the working precision.
    pub fn with_default_tail(elem: PbwElement, params: LevelParams) -> Self {
        let tau = params.ctx.precision() as i64;
        BanachElement::new(elem, params, tau)
    }

    pub fn element(&self) -> &PbwElement {
        &self.elem
    }

    pub fn params(&self) -> &LevelParams {
        &self.params
    }

    pub fn tau(&self) -> i64 {
        self.tau
    }

    /// Minimum weighted valuation of the stored terms, τ if there are none.
    pub fn min_weight(&self) -> Valuation {
        self.elem
            .terms()
            .iter()
            .map(|(k, a)| self.params.weight(k, a))
            .fold(Valuation::exact(self.tau), Valuation::min)
    }

    /// (term, weighted valuation) for every stored term.
    pub fn weighted_terms(&self) -> Vec<(PbwKey, Scalar, Valuation)> {
        self.elem
            .terms()
            .iter()
            .map(|(k, a)| (k.clone(), a.clone(), self.params.weight(k, a)))
            .collect()
    }
}

/// The Gauss norm exponent min_terms (v_p(a) − m|I| − r|J|).
pub fn gauss_norm(x: &BanachElement) -> Result<Valuation, BanachError> {
    let w = x
        .elem
        .terms()
        .iter()
        .map(|(k, a)| x.params.weight(k, a))
        .fold(Valuation::Infinite, Valuation::min);
    if w.cmp_value(&Valuation::exact(x.tau)) == Ordering::Less {
        Ok(w)
    } else {
        Err(BanachError::TailDominated { tau: x.tau })
    }
}

/// a·b with τ(ab) = min(τ_a + minw(b), τ_b + minw(a)).
pub fn banach_multiply(
    alg: &CherednikAlgebra,
    a: &BanachElement,
    b: &BanachElement,
) -> Result<BanachElement, BanachError> {
    if a.params != b.params {
        return Err(BanachError::LevelMismatch);
    }
    let prod = alg.multiply(&a.elem, &b.elem)?;
    let low = |v: Valuation, tau: i64| v.value().unwrap_or(tau);
    let tau = (a.tau + low(b.min_weight(), b.tau)).min(b.tau + low(a.min_weight(), a.tau));
    Ok(BanachElement::new(prod, a.params.clone(), tau))
}

/// Lattice generators π^m t*_j, g, π^r t_i with display names.
fn lattice_generators(alg: &CherednikAlgebra, params: &LevelParams) -> Vec<(String, PbwElement)> {
    let n = alg.dim();
    let pm = params.prime_power(params.m);
    let pr = params.prime_power(params.r);
    let mut out = Vec::new();
    for j in 0..n {
        out.push((format!("p^{}*x{}", params.m, j + 1), PbwElement::x(n, j).scale(&pm)));
    }
    for g in 0..alg.order() {
        out.push((format!("g{g}"), PbwElement::group_element(n, g)));
    }
    for i in 0..n {
        out.push((format!("p^{}*y{}", params.r, i + 1), PbwElement::y(n, i).scale(&pr)));
    }
    out
}

/// Summary of a passing lattice check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeReport {
    pub level: u32,
    pub r: u32,
    pub products_checked: usize,
    /// Smallest norm exponent among all checked products and commutators.
    pub min_exponent: Valuation,
}

/// Checks that all products a·b and commutators [a, b] of lattice generators
/// lie in the unit ball.
pub fn lattice_check(alg: &CherednikAlgebra, params: &LevelParams) -> Result<LatticeReport, BanachError> {
    let gens = lattice_generators(alg, params);
    let mut checked = 0;
    let mut min = Valuation::Infinite;
    for (na, a) in &gens {
        for (nb, b) in &gens {
            let ab = alg.multiply(a, b)?;
            let ba = alg.multiply(b, a)?;
            let comm = &ab - &ba;
            for (label, e) in [(format!("{na}·{nb}"), ab), (format!("[{na}, {nb}]"), comm)] {
                checked += 1;
                let w = e
                    .terms()
                    .iter()
                    .map(|(k, c)| params.weight(k, c))
                    .fold(Valuation::Infinite, Valuation::min);
                if w.cmp_value(&Valuation::exact(0)) == Ordering::Less {
                    return Err(BanachError::LatticeViolation {
                        level: params.m,
                        r: params.r,
                        product: label,
                        exponent: w,
                    });
                }
                min = min.min(w);
            }
        }
    }
    Ok(LatticeReport {
        level: params.m,
        r: params.r,
        products_checked: checked,
        min_exponent: min,
    })
}

/// Components of an element by ad(∂)-eigenvalue |I| − |J|, all with the original τ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightDecomposition {
    pub components: BTreeMap<i64, BanachElement>,
}

impl WeightDecomposition {
    pub fn weights(&self) -> Vec<i64> {
        self.components.keys().copied().collect()
    }

    /// Σ of the components.
    pub fn resum(&self) -> Option<BanachElement> {
        let mut it = self.components.values();
        let first = it.next()?;
        let mut total = first.elem.clone();
        for c in it {
            total = &total + &c.elem;
        }
        Some(BanachElement {
            elem: total,
            params: first.params.clone(),
            tau: first.tau,
        })
    }
}

pub fn weight_decompose_banach(x: &BanachElement) -> WeightDecomposition {
    let components = grade_decompose(&x.elem)
        .into_iter()
        .map(|(k, e)| {
            (
                k,
                BanachElement {
                    elem: e,
                    params: x.params.clone(),
                    tau: x.tau,
                },
            )
        })
        .collect();
    WeightDecomposition { components }
}

/// Restriction from level m+1 to level m: same coefficients and τ, norms re-weighted.
pub fn transition(x: &BanachElement, target: &LevelParams) -> Result<BanachElement, BanachError> {
    if target.ctx != x.params.ctx || target.m + 1 != x.params.m || target.r >= x.params.r {
        return Err(BanachError::LevelMismatch);
    }
    Ok(BanachElement {
        elem: x.elem.clone(),
        params: target.clone(),
        tau: x.tau,
    })
}

/// Checks transition(x_{m+1}) = x_m for consecutive levels, comparing the
/// terms below the common tail bound.
pub fn coadmissible_check(family: &[BanachElement]) -> Result<(), BanachError> {
    for m in 0..family.len().saturating_sub(1) {
        let lower = &family[m];
        let image = transition(&family[m + 1], &lower.params)?;
        let tau = lower.tau.min(image.tau);
        let a = BanachElement::new(lower.elem.clone(), lower.params.clone(), tau);
        let b = BanachElement::new(image.elem, lower.params.clone(), tau);
        if a.elem != b.elem {
            return Err(BanachError::IncompatibleFamily {
                level: m as u32 + 1,
            });
        }
    }
    Ok(())
}

/// Per-degree data of a normed Verma slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormedDegree {
    pub degree: u32,
    pub weight: Scalar,
    pub dim: usize,
    /// Norm exponent of the unit-lattice basis vectors π^{m·d}·x^P ⊗ e_a is 0;
    /// the plain basis vectors x^P ⊗ e_a have exponent −m·d.
    pub basis_exponent: i64,
}

/// Operator-norm exponent of one lattice generator on the slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorBound {
    pub generator: String,
    pub exponent: Valuation,
}

#[derive(Clone, Debug)]
pub struct AnalyticVerma {
    pub degrees: Vec<NormedDegree>,
    pub generators: Vec<GeneratorBound>,
}

fn vector_exponent(ctx: &PadicContext, v: &[Scalar], basis_exponent: i64) -> Valuation {
    v.iter()
        .map(|a| ctx.val(a).shift(basis_exponent))
        .fold(Valuation::Infinite, Valuation::min)
}

/// Equips a Verma slice with the level-m norms, bounds the generators
/// π^m t*_i, π^r t_i and the group generators, and checks that the weight
/// vectors are exactly the algebraic slice.
pub fn analytic_verma_slice(slice: &VermaSlice, params: &LevelParams) -> Result<AnalyticVerma, BanachError> {
    let alg = slice.algebra();
    let n = alg.dim();
    let ctx = params.ctx();
    let m = params.m as i64;
    let cutoff = slice.cutoff();
    let dw = slice.irrep().dim();
    let ws = weight_spaces(slice);
    let mut degrees = Vec::new();
    for (d, (weight, kernel, scalar)) in ws.into_iter().enumerate() {
        let d = d as u32;
        let expected = count_monomials(n, d) * dw;
        if !scalar || kernel != expected || slice.dim(d) != expected {
            return Err(BanachError::WeightRecovery { degree: d });
        }
        degrees.push(NormedDegree {
            degree: d,
            weight,
            dim: kernel,
            basis_exponent: -m * d as i64,
        });
    }

    let pm = params.prime_power(params.m);
    let pr = params.prime_power(params.r);
    let mut generators = Vec::new();
    let mut bound = |name: String,
                     op: &dyn Fn(u32, &[Scalar]) -> Option<(u32, Vec<Scalar>)>|
     -> Result<(), BanachError> {
        let mut best = Valuation::Infinite;
        for d in 0..=cutoff {
            for k in 0..slice.ambient_dim(d) {
                let e = unit_vector(slice.ambient_dim(d), k);
                let Some((td, img)) = op(d, &e) else { continue };
                let exp = vector_exponent(ctx, &img, -m * td as i64).shift(m * d as i64);
                if let Some(v) = exp.value() {
                    if v < 0 {
                        return Err(BanachError::UnboundedGenerator {
                            generator: name,
                            degree: d,
                            exponent: v,
                        });
                    }
                }
                best = best.min(exp);
            }
        }
        generators.push(GeneratorBound {
            generator: name,
            exponent: best,
        });
        Ok(())
    };
    for i in 0..n {
        bound(format!("p^{}*x{}", params.m, i + 1), &|d, v| {
            (d < cutoff).then(|| {
                let img = slice.apply_x(i, d, v).expect("below cutoff");
                (d + 1, img.iter().map(|a| a * &pm).collect())
            })
        })?;
    }
    for i in 0..n {
        bound(format!("p^{}*y{}", params.r, i + 1), &|d, v| {
            (d > 0).then(|| (d - 1, slice.apply_y(i, d, v).iter().map(|a| a * &pr).collect()))
        })?;
    }
    for &g in alg.reflection_group().group().generators() {
        bound(format!("g{g}"), &|d, v| Some((d, slice.apply_group(g, d, v))))?;
    }
    Ok(AnalyticVerma { degrees, generators })
}
