//! Exact scalars in ℚ and in cyclotomic fields ℚ(ζ_ℓ).
//!
//! A cyclotomic element is stored in the power basis `1, ζ, …, ζ^{φ(ℓ)-1}`,
//! reduced modulo the ℓ-th cyclotomic polynomial. Elements whose irrational
//! coordinates all vanish are demoted to the rational representation, so that
//! structural equality coincides with field equality across conductors.

use std::fmt;
use std::hash::Hash;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::LazyLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Largest supported conductor ℓ for ℚ(ζ_ℓ).
pub const MAX_CONDUCTOR: u32 = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} is not supported (expected 1..={MAX_CONDUCTOR})")]
    UnsupportedConductor(u32),
}

static CYCLOTOMIC_POLYS: LazyLock<Vec<Vec<i64>>> = LazyLock::new(|| {
    // index n holds Φ_n, coefficients from the constant term upwards
    let mut table: Vec<Vec<i64>> = vec![Vec::new(); MAX_CONDUCTOR as usize + 1];
    for n in 1..=MAX_CONDUCTOR as usize {
        let mut num = vec![0i128; n + 1];
        num[0] = -1;
        num[n] = 1;
        for d in 1..n {
            if n % d == 0 {
                let div: Vec<i128> = table[d].iter().map(|&c| c as i128).collect();
                num = exact_monic_div(&num, &div);
            }
        }
        table[n] = num.into_iter().map(|c| c as i64).collect();
    }
    table
});

fn exact_monic_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![0i128; num.len() - dn];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dn];
        quot[k] = c;
        for (j, &d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

/// Coefficients of Φ_ℓ from the constant term upwards.
pub fn cyclotomic_polynomial(conductor: u32) -> Result<&'static [i64], ScalarError> {
    if conductor == 0 || conductor > MAX_CONDUCTOR {
        return Err(ScalarError::UnsupportedConductor(conductor));
    }
    Ok(&CYCLOTOMIC_POLYS[conductor as usize])
}

/// Euler's totient, i.e. the degree of ℚ(ζ_ℓ) over ℚ.
pub fn totient(n: u32) -> usize {
    (1..=n).filter(|k| k.gcd(&n) == 1).count()
}

/// ℓ = 1 and ℓ = 2 both describe ℚ.
fn normalize_conductor(conductor: u32) -> u32 {
    if conductor <= 2 {
        1
    } else {
        conductor
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Rational(BigRational),
    Cyclotomic {
        conductor: u32,
        coords: Box<[BigRational]>,
    },
}

/// An exact element of ℚ or ℚ(ζ_ℓ).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Rational(BigRational::zero()))
    }

    pub fn one() -> Self {
        Scalar(Repr::Rational(BigRational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Rational(BigRational::from_integer(BigInt::from(n))))
    }

    /// `num/den`; panics if `den == 0`.
    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Scalar(Repr::Rational(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        )))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Scalar(Repr::Rational(BigRational::from_integer(n)))
    }

    pub fn from_rational(q: BigRational) -> Self {
        Scalar(Repr::Rational(q))
    }

    /// ζ_ℓ^k. For ℓ ≤ 2 this is ±1.
    pub fn zeta_pow(conductor: u32, k: i64) -> Result<Self, ScalarError> {
        cyclotomic_polynomial(conductor)?;
        let l = conductor as i64;
        let k = k.rem_euclid(l) as usize;
        let mut coords = vec![BigRational::zero(); k + 1];
        coords[k] = BigRational::one();
        Scalar::from_coords(conductor, coords)
    }

    pub fn zeta(conductor: u32) -> Result<Self, ScalarError> {
        Scalar::zeta_pow(conductor, 1)
    }

    /// Builds `Σ coords[i] ζ_ℓ^i`, reducing modulo Φ_ℓ. `coords` may have any length.
    pub fn from_coords(conductor: u32, coords: Vec<BigRational>) -> Result<Self, ScalarError> {
        let phi = cyclotomic_polynomial(conductor)?;
        let mut v = coords;
        reduce_mod(&mut v, phi);
        Ok(Scalar::canonical(normalize_conductor(conductor), v))
    }

    fn canonical(conductor: u32, mut coords: Vec<BigRational>) -> Self {
        if conductor == 1 {
            return Scalar(Repr::Rational(coords.into_iter().next().unwrap_or_default()));
        }
        let deg = CYCLOTOMIC_POLYS[conductor as usize].len() - 1;
        coords.resize(deg, BigRational::zero());
        if coords[1..].iter().all(Zero::is_zero) {
            let c = coords.swap_remove(0);
            Scalar(Repr::Rational(c))
        } else {
            Scalar(Repr::Cyclotomic {
                conductor,
                coords: coords.into_boxed_slice(),
            })
        }
    }

    /// 1 for rational values, otherwise the ℓ of the smallest declared field.
    pub fn conductor(&self) -> u32 {
        match &self.0 {
            Repr::Rational(_) => 1,
            Repr::Cyclotomic { conductor, .. } => *conductor,
        }
    }

    /// Power-basis coordinates in ℚ(ζ_ℓ) for the given conductor.
    pub fn coords_in(&self, conductor: u32) -> Vec<BigRational> {
        let conductor = normalize_conductor(conductor);
        let deg = if conductor == 1 {
            1
        } else {
            CYCLOTOMIC_POLYS[conductor as usize].len() - 1
        };
        match &self.0 {
            Repr::Rational(q) => {
                let mut v = vec![BigRational::zero(); deg];
                v[0] = q.clone();
                v
            }
            Repr::Cyclotomic { conductor: c, coords } => {
                assert_eq!(*c, conductor, "field mismatch: ℚ(ζ_{c}) vs ℚ(ζ_{conductor})");
                coords.to_vec()
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Cyclotomic { .. } => None,
        }
    }

    /// The value as an integer, if it is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational()
            .filter(|q| q.is_integer())
            .map(|q| q.to_integer())
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rational(q) if q.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rational(q) if q.is_one())
    }

    /// Whether the value lies in ℤ[ζ_ℓ], the ring of integers of its field.
    pub fn is_integral(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_integer(),
            Repr::Cyclotomic { coords, .. } => coords.iter().all(|c| c.is_integer()),
        }
    }

    /// Largest bit length among numerators and denominators.
    pub fn bit_size(&self) -> u64 {
        let bits = |q: &BigRational| q.numer().bits().max(q.denom().bits());
        match &self.0 {
            Repr::Rational(q) => bits(q),
            Repr::Cyclotomic { coords, .. } => coords.iter().map(bits).max().unwrap_or(0),
        }
    }

    /// Image under the Galois automorphism ζ ↦ ζ^k.
    pub fn galois(&self, k: u32) -> Self {
        match &self.0 {
            Repr::Rational(_) => self.clone(),
            Repr::Cyclotomic { conductor, coords } => {
                let l = *conductor as usize;
                let mut v = vec![BigRational::zero(); l];
                for (i, c) in coords.iter().enumerate() {
                    v[(i * k as usize) % l] += c;
                }
                Scalar::from_coords(*conductor, v).expect("conductor already validated")
            }
        }
    }

    /// Complex-conjugation analogue ζ ↦ ζ^{-1}.
    pub fn conj(&self) -> Self {
        let l = self.conductor();
        self.galois(l.max(1) - 1)
    }

    pub fn inv(&self) -> Result<Self, ScalarError> {
        match &self.0 {
            Repr::Rational(q) => {
                if q.is_zero() {
                    Err(ScalarError::DivisionByZero)
                } else {
                    Ok(Scalar(Repr::Rational(q.recip())))
                }
            }
            Repr::Cyclotomic { conductor, .. } => {
                // x^{-1} = Π_{σ≠1} σ(x) / N(x)
                let mut others = Scalar::one();
                for k in 2..*conductor {
                    if k.gcd(conductor) == 1 {
                        others = &others * &self.galois(k);
                    }
                }
                let norm = &others * self;
                let n = norm
                    .as_rational()
                    .expect("field norm is rational")
                    .clone();
                Ok(others.scale(&n.recip()))
            }
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        match &self.0 {
            Repr::Rational(a) => Scalar(Repr::Rational(a * q)),
            Repr::Cyclotomic { conductor, coords } => {
                if q.is_zero() {
                    return Scalar::zero();
                }
                Scalar(Repr::Cyclotomic {
                    conductor: *conductor,
                    coords: coords.iter().map(|c| c * q).collect(),
                })
            }
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    fn binary(&self, other: &Self, op: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(op(a, b))),
            _ => {
                let l = common_conductor(self, other);
                let a = self.coords_in(l);
                let b = other.coords_in(l);
                let v = a.iter().zip(&b).map(|(x, y)| op(x, y)).collect();
                Scalar::canonical(l, v)
            }
        }
    }
}

fn common_conductor(a: &Scalar, b: &Scalar) -> u32 {
    match (a.conductor(), b.conductor()) {
        (1, l) | (l, 1) => l,
        (l, m) => {
            assert_eq!(l, m, "field mismatch: ℚ(ζ_{l}) vs ℚ(ζ_{m})");
            l
        }
    }
}

fn reduce_mod(v: &mut Vec<BigRational>, phi: &[i64]) {
    let deg = phi.len() - 1;
    while v.len() > deg {
        let c = v.pop().expect("nonempty");
        if c.is_zero() {
            continue;
        }
        let base = v.len() - deg;
        for (j, &p) in phi[..deg].iter().enumerate() {
            if p != 0 {
                v[base + j] -= &c * BigRational::from_integer(BigInt::from(p));
            }
        }
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(q: BigRational) -> Self {
        Scalar::from_rational(q)
    }
}

impl<'a> Add<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a + b)
    }
}

impl<'a> Sub<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.binary(rhs, |a, b| a - b)
    }
}

impl<'a> Mul<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        match (&self.0, &rhs.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Rational(a), _) => rhs.scale(a),
            (_, Repr::Rational(b)) => self.scale(b),
            _ => {
                let l = common_conductor(self, rhs);
                let a = self.coords_in(l);
                let b = rhs.coords_in(l);
                let mut v = vec![BigRational::zero(); a.len() + b.len() - 1];
                for (i, x) in a.iter().enumerate() {
                    if x.is_zero() {
                        continue;
                    }
                    for (j, y) in b.iter().enumerate() {
                        if !y.is_zero() {
                            v[i + j] += x * y;
                        }
                    }
                }
                reduce_mod(&mut v, &CYCLOTOMIC_POLYS[l as usize]);
                Scalar::canonical(l, v)
            }
        }
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    /// Panics on division by zero; use [`Scalar::inv`] for a checked inverse.
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.scale(&-BigRational::one())
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar { (&self).$m(rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Scalar {
    /// Rationals print as `a` or `a/b`; cyclotomic values as a sum in `z = ζ_ℓ`,
    /// e.g. `1/2 - 3*z^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => f.write_str(&fmt_rational(q)),
            Repr::Cyclotomic { coords, .. } => {
                let mut first = true;
                for (i, c) in coords.iter().enumerate() {
                    if c.is_zero() {
                        continue;
                    }
                    let neg = c.is_negative();
                    let a = c.abs();
                    if first {
                        if neg {
                            f.write_str("-")?;
                        }
                    } else {
                        f.write_str(if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    let var = match i {
                        0 => String::new(),
                        1 => "z".to_string(),
                        _ => format!("z^{i}"),
                    };
                    if i == 0 {
                        f.write_str(&fmt_rational(&a))?;
                    } else if a.is_one() {
                        f.write_str(&var)?;
                    } else {
                        write!(f, "{}*{}", fmt_rational(&a), var)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(_) => write!(f, "{self}"),
            Repr::Cyclotomic { conductor, .. } => write!(f, "({self})@ζ{conductor}"),
        }
    }
}
