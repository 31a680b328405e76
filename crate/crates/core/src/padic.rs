//! p-adic valuations on ℚ and ℚ(ζ_ℓ) through a Hensel-lifted embedding into ℤ/p^N.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::scalar::{cyclotomic_polynomial, Scalar, ScalarError};

/// Working precision used when none is requested.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PadicError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("precision must be at least 1")]
    ZeroPrecision,
    #[error("ℚ(ζ_{conductor}) does not split at p = {prime}: need p ≡ 1 (mod {conductor})")]
    Splitting { conductor: u32, prime: u64 },
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A p-adic valuation, or a lower bound for it when the working precision ran out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Infinite,
    /// `exact == false` means the true value is at least `value`.
    Finite { value: i64, exact: bool },
}

impl Valuation {
    pub fn exact(value: i64) -> Self {
        Valuation::Finite { value, exact: true }
    }

    pub fn value(&self) -> Option<i64> {
        match self {
            Valuation::Infinite => None,
            Valuation::Finite { value, .. } => Some(*value),
        }
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Valuation::Infinite => true,
            Valuation::Finite { exact, .. } => *exact,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Valuation::Infinite)
    }

    /// Shift by an integer, keeping the exactness flag.
    pub fn shift(self, by: i64) -> Self {
        match self {
            Valuation::Infinite => Valuation::Infinite,
            Valuation::Finite { value, exact } => Valuation::Finite {
                value: value + by,
                exact,
            },
        }
    }

    pub fn add(self, other: Self) -> Self {
        match (self, other) {
            (Valuation::Finite { value: a, exact: ea }, Valuation::Finite { value: b, exact: eb }) => {
                Valuation::Finite {
                    value: a + b,
                    exact: ea && eb,
                }
            }
            _ => Valuation::Infinite,
        }
    }

    /// Ordering on values, with `+∞` largest. Exactness flags are ignored.
    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self.value(), other.value()) {
            (None, None) => Ordering::Equal,
            (None, Some(_)) => Ordering::Greater,
            (Some(_), None) => Ordering::Less,
            (Some(a), Some(b)) => a.cmp(&b),
        }
    }

    /// Minimum of two valuations; an inexact bound taking part in the minimum
    /// makes the result inexact.
    pub fn min(self, other: Self) -> Self {
        match (self, other) {
            (Valuation::Infinite, v) | (v, Valuation::Infinite) => v,
            (Valuation::Finite { value: a, exact: ea }, Valuation::Finite { value: b, exact: eb }) => {
                match a.cmp(&b) {
                    Ordering::Less => Valuation::Finite { value: a, exact: ea },
                    Ordering::Greater => Valuation::Finite { value: b, exact: eb },
                    Ordering::Equal => Valuation::Finite {
                        value: a,
                        exact: ea && eb,
                    },
                }
            }
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Infinite => f.write_str("inf"),
            Valuation::Finite { value, exact: true } => write!(f, "{value}"),
            Valuation::Finite { value, exact: false } => write!(f, ">={value}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn eval_mod(poly: &[i64], x: &BigInt, modulus: &BigInt) -> BigInt {
    poly.iter()
        .rev()
        .fold(BigInt::zero(), |acc, &c| (acc * x + c).mod_floor(modulus))
}

fn derivative(poly: &[i64]) -> Vec<i64> {
    poly.iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| c * i as i64)
        .collect()
}

fn inverse_mod(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    g.gcd.is_one().then(|| g.x.mod_floor(m))
}

/// A root of Φ_ℓ modulo p^N: the smallest root modulo p, lifted by Newton iteration.
pub fn hensel_embed(conductor: u32, prime: u64, precision: u32) -> Result<BigInt, PadicError> {
    if precision == 0 {
        return Err(PadicError::ZeroPrecision);
    }
    if !is_prime(prime) {
        return Err(PadicError::NotPrime(prime));
    }
    if prime % conductor as u64 != 1 % conductor as u64 {
        return Err(PadicError::Splitting { conductor, prime });
    }
    let phi = cyclotomic_polynomial(conductor)?;
    let p = BigInt::from(prime);
    let root = (0..prime)
        .map(BigInt::from)
        .find(|r| eval_mod(phi, r, &p).is_zero())
        .ok_or(PadicError::Splitting { conductor, prime })?;
    let modulus = p.pow(precision);
    let dphi = derivative(phi);
    let mut r = root;
    loop {
        let f = eval_mod(phi, &r, &modulus);
        if f.is_zero() {
            return Ok(r);
        }
        let df = eval_mod(&dphi, &r, &modulus);
        // Φ_ℓ is separable mod p because p ∤ ℓ, so Φ_ℓ'(r) is a unit
        let inv = inverse_mod(&df, &modulus).expect("Φ_ℓ'(r) is a unit mod p");
        r = (r - f * inv).mod_floor(&modulus);
    }
}

/// Data needed to compute v_p on a fixed coefficient field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicContext {
    prime: u64,
    precision: u32,
    conductor: u32,
    modulus: BigInt,
    root: Option<BigInt>,
}

impl PadicContext {
    pub fn new(prime: u64, precision: u32, conductor: u32) -> Result<Self, PadicError> {
        if precision == 0 {
            return Err(PadicError::ZeroPrecision);
        }
        if !is_prime(prime) {
            return Err(PadicError::NotPrime(prime));
        }
        let conductor = if conductor <= 2 { 1 } else { conductor };
        let root = if conductor == 1 {
            None
        } else {
            Some(hensel_embed(conductor, prime, precision)?)
        };
        Ok(PadicContext {
            prime,
            precision,
            conductor,
            modulus: BigInt::from(prime).pow(precision),
            root,
        })
    }

    pub fn rational(prime: u64) -> Result<Self, PadicError> {
        PadicContext::new(prime, DEFAULT_PRECISION, 1)
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn root(&self) -> Option<&BigInt> {
        self.root.as_ref()
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Image of an algebraic integer of the field in ℤ/p^N.
    ///
    /// Panics if `x` is not integral or belongs to a different field.
    pub fn embed_integral(&self, x: &Scalar) -> BigInt {
        assert!(x.is_integral(), "embed_integral needs an algebraic integer");
        let coords = self.field_coords(x);
        self.horner(coords.iter().map(|c| c.to_integer()))
    }

    fn field_coords(&self, x: &Scalar) -> Vec<BigRational> {
        let l = x.conductor();
        assert!(
            l == 1 || l == self.conductor,
            "field mismatch: value in ℚ(ζ_{l}), context for ℚ(ζ_{})",
            self.conductor
        );
        x.coords_in(l)
    }

    fn horner(&self, coeffs: impl DoubleEndedIterator<Item = BigInt>) -> BigInt {
        let r = self.root.clone().unwrap_or_else(BigInt::one);
        coeffs
            .rev()
            .fold(BigInt::zero(), |acc, c| (acc * &r + c).mod_floor(&self.modulus))
    }

    pub fn valuation_of_int(&self, n: &BigInt) -> Option<i64> {
        if n.is_zero() {
            return None;
        }
        let p = BigInt::from(self.prime);
        let mut n = n.clone();
        let mut v = 0;
        while n.is_multiple_of(&p) {
            n /= &p;
            v += 1;
        }
        Some(v)
    }

    /// v_p(x). Exact for rationals; for cyclotomic values the residue at the
    /// Hensel root is used and the result is flagged when it vanishes mod p^N.
    pub fn val(&self, x: &Scalar) -> Valuation {
        if x.is_zero() {
            return Valuation::Infinite;
        }
        if let Some(q) = x.as_rational() {
            let v = self.valuation_of_int(q.numer()).expect("nonzero")
                - self.valuation_of_int(q.denom()).expect("nonzero");
            return Valuation::exact(v);
        }
        let coords = self.field_coords(x);
        let den = coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let den_val = self.valuation_of_int(&den).expect("nonzero");
        let numerators = coords
            .iter()
            .map(|c| (c * BigRational::from_integer(den.clone())).to_integer())
            .collect::<Vec<_>>();
        let residue = self.horner(numerators.into_iter());
        match self.valuation_of_int(&residue) {
            Some(v) => Valuation::exact(v - den_val),
            None => Valuation::Finite {
                value: self.precision as i64 - den_val,
                exact: false,
            },
        }
    }
}
