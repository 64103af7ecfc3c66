//! Scalar fields used by the exact linear algebra: prime fields with a
//! compile-time modulus and arbitrary-precision rationals.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;

use crate::error::{Error, Result};

/// An exact field. Everything in the crate that does elimination is generic
/// over this trait.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn from_i64(v: i64) -> Self;

    /// Characteristic of the field (0 for the rationals).
    fn characteristic() -> u64;

    /// `dst[j] -= factor * src[j]` for every `j`.
    fn sub_scaled(dst: &mut [Self], factor: &Self, src: &[Self]) {
        for (d, s) in dst.iter_mut().zip(src) {
            *d = d.clone() - factor.clone() * s.clone();
        }
    }
}

/// A prime field small enough that every product fits a `u64`.
pub trait PrimeField: Field + Copy + Send + Sync + fmt::Display + 'static {
    const MODULUS: u32;

    fn from_u64(v: u64) -> Self;

    /// Canonical representative in `[0, p)`.
    fn value(self) -> u32;

    /// Uniformly random element.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_u64(rng.gen_range(0..Self::MODULUS as u64))
    }
}

/// Multiplicative inverse that reports division by zero as an error.
pub fn field_inverse<F: Field>(a: &F) -> Result<F> {
    a.inverse().ok_or(Error::DivisionByZero)
}

pub const fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Element of `F_P`, stored as its canonical residue.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    const PRIME_MODULUS: () = assert!(is_prime(P as u64), "Fp modulus must be prime");

    pub fn new(v: u64) -> Self {
        #[allow(clippy::let_unit_value)]
        let _ = Self::PRIME_MODULUS;
        Fp((v % P as u64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let s = self.0 as u64 + rhs.0 as u64;
        Fp(if s >= P as u64 { s - P as u64 } else { s } as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        if self.0 >= rhs.0 {
            Fp(self.0 - rhs.0)
        } else {
            Fp((self.0 as u64 + P as u64 - rhs.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp(P - self.0)
        }
    }
}

impl<const P: u32> AddAssign for Fp<P> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl<const P: u32> SubAssign for Fp<P> {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl<const P: u32> MulAssign for Fp<P> {
    fn mul_assign(&mut self, rhs: Self) {
        *self = *self * rhs;
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp::new(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            return None;
        }
        // extended Euclid on (a, p)
        let (mut r0, mut r1) = (P as i64, self.0 as i64);
        let (mut t0, mut t1) = (0i64, 1i64);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Some(Fp(t0.rem_euclid(P as i64) as u32))
    }

    fn from_i64(v: i64) -> Self {
        Fp::new(v.rem_euclid(P as i64) as u64)
    }

    fn characteristic() -> u64 {
        P as u64
    }

    #[inline]
    fn sub_scaled(dst: &mut [Self], factor: &Self, src: &[Self]) {
        let p = P as u64;
        let neg = (p - factor.0 as u64) % p;
        for (d, s) in dst.iter_mut().zip(src) {
            d.0 = ((d.0 as u64 + neg * s.0 as u64) % p) as u32;
        }
    }
}

impl<const P: u32> PrimeField for Fp<P> {
    const MODULUS: u32 = P;

    fn from_u64(v: u64) -> Self {
        Fp::new(v)
    }

    fn value(self) -> u32 {
        self.0
    }
}

impl Field for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn characteristic() -> u64 {
        0
    }
}

/// Primes the runtime dispatcher knows how to instantiate.
pub const SUPPORTED_PRIMES: &[u32] = &[307, 1009, 7919, 32003, 65521, 1_000_003, 2_147_483_647];

/// Run a block with `$F` bound to `Fp<p>` for a runtime prime `p`.
///
/// Evaluates to `Err(Error::UnsupportedPrime(p))` when `p` is not in
/// [`SUPPORTED_PRIMES`]; the body must itself evaluate to a `Result`.
#[macro_export]
macro_rules! with_prime {
    ($p:expr, $F:ident => $body:expr) => {{
        match $p {
            307 => {
                type $F = $crate::gf::Fp<307>;
                $body
            }
            1009 => {
                type $F = $crate::gf::Fp<1009>;
                $body
            }
            7919 => {
                type $F = $crate::gf::Fp<7919>;
                $body
            }
            32003 => {
                type $F = $crate::gf::Fp<32003>;
                $body
            }
            65521 => {
                type $F = $crate::gf::Fp<65521>;
                $body
            }
            1_000_003 => {
                type $F = $crate::gf::Fp<1_000_003>;
                $body
            }
            2_147_483_647 => {
                type $F = $crate::gf::Fp<2_147_483_647>;
                $body
            }
            other => Err($crate::Error::UnsupportedPrime(other as u64)),
        }
    }};
}
