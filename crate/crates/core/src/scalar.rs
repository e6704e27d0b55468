//! Scalar abstractions.
//!
//! Probability computations are generic over [`Real`] (`f32` or `f64`);
//! polyhedral projection is generic over [`Exact`], which is only
//! implemented for exact rational types.

use std::fmt::{Debug, Display};
use std::iter::Sum;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive};

/// Floating-point scalar used by the probability engine.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Normalization tolerance a constructed table must satisfy.
    fn norm_tol() -> Self;
    /// Largest deviation from 1 that is silently renormalized at ingestion.
    fn ingest_tol() -> Self;

    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::from_usize(v).expect("usize representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    fn norm_tol() -> Self {
        1e-12
    }
    fn ingest_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn norm_tol() -> Self {
        1e-5
    }
    fn ingest_tol() -> Self {
        1e-4
    }
}

/// Exact ordered field used by Fourier-Motzkin elimination and the rational LP.
pub trait Exact:
    Clone + Ord + Num + Signed + Debug + Display + FromStr + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;
    /// Exact value of a finite float (dyadic rational); `None` if not representable.
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;
}

impl Exact for Ratio<BigInt> {
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(BigInt::from(v))
    }
    fn from_f64(v: f64) -> Option<Self> {
        Ratio::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! small_ratio {
    ($t:ty) => {
        impl Exact for Ratio<$t> {
            fn from_i64(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }
            fn from_f64(v: f64) -> Option<Self> {
                let big = Ratio::<BigInt>::from_float(v)?;
                let n = <$t>::try_from(big.numer().clone()).ok()?;
                let d = <$t>::try_from(big.denom().clone()).ok()?;
                Some(Ratio::new(n, d))
            }
            fn to_f64(&self) -> f64 {
                *self.numer() as f64 / *self.denom() as f64
            }
        }
    };
}

small_ratio!(i64);
small_ratio!(i128);
