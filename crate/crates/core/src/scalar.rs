//! Scalar abstraction shared by every module.
//!
//! All numerics are written against [`Real`], which is implemented for `f32`
//! and `f64`. Complex values are `num_complex::Complex<T>`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the library is generic over.
pub trait Real: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + Sum + 'static {}

/// Complex scalar over `T`.
pub type C<T> = Complex<T>;

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal representable in scalar type")
}

/// A tolerance of `x`, floored at a small multiple of the type's epsilon so
/// that double-precision thresholds stay meaningful for `f32`.
#[inline]
pub fn tol<T: Real>(x: f64) -> T {
    lit::<T>(x).max(T::epsilon() * lit(128.0))
}

#[inline]
pub fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[inline]
pub fn cplx<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub fn creal<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// `e^{iθ}`.
#[inline]
pub fn cis<T: Real>(theta: T) -> C<T> {
    Complex::new(theta.cos(), theta.sin())
}

/// Hermitian inner product `⟨a, b⟩ = Σ a_j conj(b_j)`.
pub fn inner<T: Real>(a: &[C<T>], b: &[C<T>]) -> C<T> {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).fold(C::new(T::zero(), T::zero()), |s, t| s + t)
}

/// Euclidean length of a complex vector, computed without overflow.
pub fn euclid<T: Real>(v: &[C<T>]) -> T {
    let scale = v.iter().map(|x| x.norm()).fold(T::zero(), T::max);
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let s: T = v.iter().map(|x| (x.norm() / scale).powi(2)).sum();
    scale * s.sqrt()
}

pub fn scale_vec<T: Real>(v: &[C<T>], s: C<T>) -> Vec<C<T>> {
    v.iter().map(|x| x * s).collect()
}

pub fn add_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_vec<T: Real>(a: &[C<T>], b: &[C<T>]) -> Vec<C<T>> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn conj_vec<T: Real>(v: &[C<T>]) -> Vec<C<T>> {
    v.iter().map(|x| x.conj()).collect()
}

pub fn zeros<T: Real>(n: usize) -> Vec<C<T>> {
    vec![C::new(T::zero(), T::zero()); n]
}

/// `j`-th standard basis vector of `ℂⁿ`.
pub fn basis<T: Real>(n: usize, j: usize) -> Vec<C<T>> {
    let mut v = zeros(n);
    v[j] = C::new(T::one(), T::zero());
    v
}

/// Converts a vector of `(re, im)` pairs into complex values.
pub fn from_pairs<T: Real>(pairs: &[(f64, f64)]) -> Vec<C<T>> {
    pairs.iter().map(|&(re, im)| C::new(lit(re), lit(im))).collect()
}

/// Maximizes a continuous function of one real variable over `[0, period)`
/// by a dense grid followed by golden-section refinement around the best
/// grid node. Returns `(argmax, max)`.
pub fn maximize_periodic<T: Real, F: Fn(T) -> T>(f: F, period: T, grid: usize) -> (T, T) {
    let n = grid.max(8);
    let step = period / lit(n as f64);
    let mut best = (T::zero(), f(T::zero()));
    for i in 1..n {
        let t = step * lit(i as f64);
        let v = f(t);
        if v > best.1 {
            best = (t, v);
        }
    }
    let (mut lo, mut hi) = (best.0 - step, best.0 + step);
    let g = lit::<T>(0.618_033_988_749_894_9);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..90 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (t, v);
        }
    }
    best
}
