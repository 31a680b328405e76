//! Commutative monomials and polynomials in n variables with [`Scalar`] coefficients.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

/// An exponent vector. Ordered by total degree, then lexicographically with
/// x₁ ≻ x₂ ≻ …, so iteration lists x₁ before x₂ within a degree.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Mono(Box<[u16]>);

impl Mono {
    pub fn one(n: usize) -> Self {
        Mono(vec![0; n].into_boxed_slice())
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Mono(e.into_boxed_slice())
    }

    pub fn from_exps(exps: Vec<u16>) -> Self {
        Mono(exps.into_boxed_slice())
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn exps(&self) -> &[u16] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u16 {
        self.0[i]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    pub fn mul_var(&self, i: usize) -> Mono {
        let mut e = self.0.clone();
        e[i] += 1;
        Mono(e)
    }

    /// `self / x_i`, or `None` when x_i does not divide.
    pub fn div_var(&self, i: usize) -> Option<Mono> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(Mono(e))
    }

    /// Index of the first variable with a positive exponent.
    pub fn first_var(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// Variable indices with multiplicity, ascending.
    pub fn word(&self) -> Vec<usize> {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat(i).take(e as usize))
            .collect()
    }

    /// Writes `x1^2*x3` style text; the empty monomial writes nothing.
    pub fn write_with(&self, f: &mut impl fmt::Write, prefix: &str) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_char('*')?;
            }
            first = false;
            write!(f, "{prefix}{}", i + 1)?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }

    pub fn to_string_with(&self, prefix: &str) -> String {
        let mut s = String::new();
        self.write_with(&mut s, prefix).expect("writing to a String");
        s
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// All monomials of total degree `d` in `n` variables, ascending.
pub fn monomials_of_degree(n: usize, d: u32) -> Vec<Mono> {
    fn go(n: usize, i: usize, left: u32, cur: &mut Vec<u16>, out: &mut Vec<Mono>) {
        if i + 1 == n {
            cur[i] = left as u16;
            out.push(Mono::from_exps(cur.clone()));
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e as u16;
            go(n, i + 1, left - e, cur, out);
        }
    }
    if n == 0 {
        return if d == 0 { vec![Mono::one(0)] } else { Vec::new() };
    }
    let mut out = Vec::new();
    go(n, 0, d, &mut vec![0; n], &mut out);
    out
}

/// C(d + n − 1, n − 1), the number of monomials of degree d in n variables.
pub fn count_monomials(n: usize, d: u32) -> usize {
    if n == 0 {
        return usize::from(d == 0);
    }
    let (mut num, mut den) = (1u128, 1u128);
    for k in 1..n as u128 {
        num *= d as u128 + k;
        den *= k;
    }
    (num / den) as usize
}

/// A polynomial as a sparse map with no stored zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Poly {
    terms: BTreeMap<Mono, Scalar>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(Mono::one(n), c);
        p
    }

    pub fn monomial(m: Mono, c: Scalar) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    /// Σ coeffs[i] x_i.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let n = coeffs.len();
        let mut p = Poly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(Mono::var(n, i), c.clone());
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Mono, Scalar> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<Mono, Scalar> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Mono) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
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

    pub fn add_assign_scaled(&mut self, other: &Poly, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        for (m, a) in &other.terms {
            self.add_term(m.clone(), a * c);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::one());
        out
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.add_assign_scaled(other, &Scalar::from_int(-1));
        out
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        out.add_assign_scaled(self, c);
        out
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            for (k, b) in &other.terms {
                out.add_term(m.mul(k), a * b);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono, c: &Scalar) -> Poly {
        let mut out = Poly::zero();
        for (k, a) in &self.terms {
            out.add_term(k.mul(m), a * c);
        }
        out
    }

    /// ∂/∂x_i.
    pub fn derivative(&self, i: usize) -> Poly {
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            if let Some(d) = m.div_var(i) {
                out.add_term(d, a * &Scalar::from_int(m.get(i) as i64));
            }
        }
        out
    }

    /// Substitutes x_j ↦ images[j] (each a polynomial).
    pub fn substitute(&self, images: &[Poly]) -> Poly {
        let n = images.len();
        let mut out = Poly::zero();
        for (m, a) in &self.terms {
            let mut acc = Poly::constant(n, a.clone());
            for (j, &e) in m.exps().iter().enumerate() {
                for _ in 0..e {
                    acc = acc.mul(&images[j]);
                }
            }
            out.add_assign_scaled(&acc, &Scalar::one());
        }
        out
    }

    /// Exact division by a nonzero linear form; `None` when the remainder is nonzero.
    pub fn div_linear(&self, form: &[Scalar]) -> Option<Poly> {
        let pivot = form.iter().position(|a| !a.is_zero())?;
        let lead_inv = form[pivot].inv().ok()?;
        // divide by x_pivot + Σ_{j≠pivot} (a_j/a_pivot) x_j, then by a_pivot
        let mut rest = self.clone();
        let mut quot = Poly::zero();
        while let Some((m, a)) = rest
            .terms
            .iter()
            .rev()
            .find(|(m, _)| m.get(pivot) > 0)
            .map(|(m, a)| (m.clone(), a.clone()))
        {
            let q = m.div_var(pivot).expect("pivot divides");
            quot.add_term(q.clone(), a.clone());
            for (j, c) in form.iter().enumerate() {
                if !c.is_zero() {
                    rest.add_term(q.mul_var(j), -(&a * &(c * &lead_inv)));
                }
            }
        }
        if !rest.is_zero() {
            return None;
        }
        Some(quot.scale(&lead_inv))
    }
}
