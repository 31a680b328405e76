//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use cherednik_core::poly::Mono;
use cherednik_core::{
    CherednikAlgebra, ModuleVector, PbwElement, PbwKey, ReflectionFunction, ReflectionGroup, Scalar, VermaSlice,
};
use rand::Rng;

pub fn algebra(spec: &str, c: Scalar) -> Arc<CherednikAlgebra> {
    let rg = Arc::new(ReflectionGroup::builtin(spec).unwrap());
    let f = ReflectionFunction::constant(rg.reflections(), c);
    Arc::new(CherednikAlgebra::new(rg, f))
}

/// Distinct values 1/(k+2) on the reflection classes.
pub fn algebra_per_class(spec: &str) -> Arc<CherednikAlgebra> {
    let rg = Arc::new(ReflectionGroup::builtin(spec).unwrap());
    let k = ReflectionFunction::zero(rg.reflections()).classes().len();
    let values = (0..k).map(|i| Scalar::from_ratio(1, i as i64 + 2)).collect();
    let f = ReflectionFunction::per_class(rg.reflections(), values).unwrap();
    Arc::new(CherednikAlgebra::new(rg, f))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

pub fn random_rational(rng: &mut impl Rng) -> Scalar {
    Scalar::from_ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

/// ±u·p^e with a small unit u and −2 ≤ e ≤ 3.
pub fn random_padic(rng: &mut impl Rng, p: i64) -> Scalar {
    let e: i32 = rng.gen_range(-2..=3);
    let mut u = rng.gen_range(1..=12);
    while u % p == 0 {
        u = rng.gen_range(1..=12);
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let pe = if e >= 0 {
        Scalar::from_int(p.pow(e as u32))
    } else {
        Scalar::from_ratio(1, p.pow((-e) as u32))
    };
    &Scalar::from_int(sign * u) * &pe
}

pub fn random_mono(rng: &mut impl Rng, n: usize, max_deg: u32) -> Mono {
    let d = rng.gen_range(0..=max_deg);
    let mut e = vec![0u16; n];
    for _ in 0..d {
        e[rng.gen_range(0..n)] += 1;
    }
    Mono::from_exps(e)
}

/// A random element whose terms have |I| + |J| ≤ max_deg.
pub fn random_element(
    rng: &mut impl Rng,
    alg: &CherednikAlgebra,
    max_deg: u32,
    max_terms: usize,
    coeff: &mut dyn FnMut(&mut dyn rand::RngCore) -> Scalar,
) -> PbwElement {
    let n = alg.dim();
    let mut e = PbwElement::zero();
    while e.is_zero() {
        for _ in 0..rng.gen_range(1..=max_terms) {
            let dx = rng.gen_range(0..=max_deg);
            let x = random_mono(rng, n, dx);
            let y = random_mono(rng, n, max_deg - x.degree());
            let g = rng.gen_range(0..alg.order());
            let c = coeff(rng);
            e.add_term(PbwKey { x, g, y }, c);
        }
    }
    e
}

/// A random nonzero vector of the slice supported in degrees ≤ max_deg.
pub fn random_module_vector(rng: &mut impl Rng, slice: &VermaSlice, max_deg: u32) -> ModuleVector {
    let mut v = ModuleVector::zero();
    while v.is_zero() {
        for d in 0..=max_deg.min(slice.cutoff()) {
            if rng.gen_bool(0.5) {
                let part = (0..slice.ambient_dim(d))
                    .map(|_| {
                        if rng.gen_bool(0.6) {
                            random_rational(rng)
                        } else {
                            Scalar::zero()
                        }
                    })
                    .collect();
                v.set(d, part);
            }
        }
    }
    v
}
