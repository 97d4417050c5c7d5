//! Finite-dimensional complex normed spaces and their support functionals.

mod operator;

pub use operator::{sphere_sup, LinearMap, NormEstimate, RealLinearMap, SphereSearch};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{euclid, lit, tol, Real, C};

/// Which norm a space carries.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NormKind<T> {
    Euclidean,
    Sup,
    One,
    P {
        p: T,
    },
    /// Max over consecutive blocks of the blocks' Euclidean lengths.
    Product {
        blocks: Vec<usize>,
    },
}

/// `ℂⁿ` (or `ℝⁿ` when `real_restricted`) with a norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Space<T> {
    pub dim: usize,
    #[serde(flatten)]
    pub kind: NormKind<T>,
    #[serde(default)]
    pub real_restricted: bool,
}

/// Linear functional `v ↦ Σ c_j v_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct Functional<T> {
    pub coefficients: Vec<C<T>>,
}

impl<T: Real> Functional<T> {
    pub fn eval(&self, v: &[C<T>]) -> C<T> {
        self.coefficients.iter().zip(v).fold(C::new(T::zero(), T::zero()), |s, (c, x)| s + c * x)
    }
}

impl<T: Real> Space<T> {
    pub fn new(dim: usize, kind: NormKind<T>, real_restricted: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be positive".into()));
        }
        match &kind {
            NormKind::P { p } if !(*p > T::one()) || !p.is_finite() => {
                return Err(Error::InvalidParameter(format!("exponent p = {p} must lie in (1, ∞)")));
            }
            NormKind::Product { blocks } if blocks.contains(&0) || blocks.iter().sum::<usize>() != dim => {
                return Err(Error::InvalidParameter(format!("blocks {blocks:?} must be positive and sum to {dim}")));
            }
            _ => {}
        }
        Ok(Self { dim, kind, real_restricted })
    }

    pub fn euclidean(dim: usize) -> Self {
        Self::new(dim, NormKind::Euclidean, false).expect("positive dimension")
    }

    pub fn sup(dim: usize) -> Self {
        Self::new(dim, NormKind::Sup, false).expect("positive dimension")
    }

    pub fn one(dim: usize) -> Self {
        Self::new(dim, NormKind::One, false).expect("positive dimension")
    }

    pub fn lp(dim: usize, p: T) -> Result<Self> {
        Self::new(dim, NormKind::P { p }, false)
    }

    pub fn real_euclidean(dim: usize) -> Self {
        Self::new(dim, NormKind::Euclidean, true).expect("positive dimension")
    }

    /// Max-norm product of Euclidean balls of the given sizes.
    pub fn product(blocks: &[usize]) -> Result<Self> {
        Self::new(blocks.iter().sum(), NormKind::Product { blocks: blocks.to_vec() }, false)
    }

    /// The same space over another scalar type.
    pub fn cast<U: Real>(&self) -> Space<U> {
        let kind = match &self.kind {
            NormKind::Euclidean => NormKind::Euclidean,
            NormKind::Sup => NormKind::Sup,
            NormKind::One => NormKind::One,
            NormKind::P { p } => NormKind::P { p: lit(crate::scalar::to_f64(*p)) },
            NormKind::Product { blocks } => NormKind::Product { blocks: blocks.clone() },
        };
        Space { dim: self.dim, kind, real_restricted: self.real_restricted }
    }

    /// The same norm on the full complex space.
    pub fn complexified(&self) -> Self {
        Self { real_restricted: false, ..self.clone() }
    }

    /// Whether the norm comes from an inner product.
    pub fn is_inner_product(&self) -> bool {
        match &self.kind {
            NormKind::Euclidean => true,
            NormKind::Product { blocks } => blocks.len() == 1,
            _ => self.dim == 1,
        }
    }

    /// Block decomposition when the unit ball is a product of Euclidean balls.
    pub fn euclidean_blocks(&self) -> Option<Vec<(usize, usize)>> {
        match &self.kind {
            NormKind::Euclidean => Some(vec![(0, self.dim)]),
            NormKind::Sup => Some((0..self.dim).map(|j| (j, 1)).collect()),
            NormKind::Product { blocks } => {
                let mut start = 0;
                Some(
                    blocks
                        .iter()
                        .map(|&b| {
                            let s = (start, b);
                            start += b;
                            s
                        })
                        .collect(),
                )
            }
            _ if self.dim == 1 => Some(vec![(0, 1)]),
            _ => None,
        }
    }

    /// Rejects vectors of the wrong length, or with an imaginary part in a
    /// real space.
    pub fn check(&self, v: &[C<T>]) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: v.len() });
        }
        if self.real_restricted {
            let t = tol::<T>(1e-14);
            if v.iter().any(|x| x.im.abs() > t * x.re.abs().max(T::one())) {
                return Err(Error::NotReal);
            }
        }
        Ok(())
    }

    pub fn norm(&self, v: &[C<T>]) -> Result<T> {
        self.check(v)?;
        Ok(self.norm_unchecked(v))
    }

    /// Norm ignoring realness; the vector must have the right length.
    pub fn norm_unchecked(&self, v: &[C<T>]) -> T {
        debug_assert_eq!(v.len(), self.dim);
        let v: Vec<C<T>> = if self.real_restricted { v.iter().map(|x| C::new(x.re, T::zero())).collect() } else { v.to_vec() };
        match &self.kind {
            NormKind::Euclidean => euclid(&v),
            NormKind::Sup => v.iter().map(|x| x.norm()).fold(T::zero(), T::max),
            NormKind::One => v.iter().map(|x| x.norm()).sum(),
            NormKind::P { p } => lp_norm(&v, *p),
            NormKind::Product { .. } => {
                self.euclidean_blocks().expect("product has blocks").iter().map(|&(s, l)| euclid(&v[s..s + l])).fold(T::zero(), T::max)
            }
        }
    }

    /// Norm of the functional `v ↦ Σ c_j v_j` with respect to this norm.
    pub fn dual_norm(&self, c: &[C<T>]) -> T {
        match &self.kind {
            NormKind::Euclidean => euclid(c),
            NormKind::Sup => c.iter().map(|x| x.norm()).sum(),
            NormKind::One => c.iter().map(|x| x.norm()).fold(T::zero(), T::max),
            NormKind::P { p } => lp_norm(c, *p / (*p - T::one())),
            NormKind::Product { .. } => {
                self.euclidean_blocks().expect("product has blocks").iter().map(|&(s, l)| euclid(&c[s..s + l])).sum()
            }
        }
    }

    /// A norm-one functional `l` with `l(x) = ‖x‖`.
    ///
    /// Ties between coordinates or blocks go to the lowest index, and zero
    /// coordinates get a zero coefficient.
    pub fn support_functional(&self, x: &[C<T>]) -> Result<Functional<T>> {
        self.check(x)?;
        let nx = self.norm_unchecked(x);
        if nx == T::zero() {
            return Err(Error::ZeroVector);
        }
        let zero = C::new(T::zero(), T::zero());
        let phase = |z: C<T>| if z.norm() == T::zero() { zero } else { z.conj() / z.norm() };
        let tie = T::one() - lit::<T>(4.0) * T::epsilon();
        let coefficients = match &self.kind {
            NormKind::Euclidean => x.iter().map(|z| z.conj() / nx).collect(),
            NormKind::Sup => {
                let j = x.iter().position(|z| z.norm() >= nx * tie).expect("max attained");
                let mut c = vec![zero; self.dim];
                c[j] = phase(x[j]);
                c
            }
            NormKind::One => x.iter().map(|z| phase(*z)).collect(),
            NormKind::P { p } => x.iter().map(|z| phase(*z) * (z.norm() / nx).powf(*p - T::one())).collect(),
            NormKind::Product { .. } => {
                let blocks = self.euclidean_blocks().expect("product has blocks");
                let &(s, l) = blocks.iter().find(|&&(s, l)| euclid(&x[s..s + l]) >= nx * tie).expect("max attained");
                let nb = euclid(&x[s..s + l]);
                let mut c = vec![zero; self.dim];
                for j in s..s + l {
                    c[j] = x[j].conj() / nb;
                }
                c
            }
        };
        Ok(Functional { coefficients })
    }

    /// Whether the norm is differentiable at `x`, i.e. `x ≠ 0` has a unique
    /// support functional. Near-ties within relative `t` count as ties.
    pub fn norm_differentiable_at(&self, x: &[C<T>], t: f64) -> bool {
        let nx = self.norm_unchecked(x);
        if nx == T::zero() {
            return false;
        }
        let close = T::one() - tol::<T>(t);
        let count_near_max = |norms: Vec<T>| norms.iter().filter(|&&v| v >= nx * close).count() == 1;
        match &self.kind {
            NormKind::Euclidean | NormKind::P { .. } => true,
            NormKind::One if self.real_restricted => x.iter().all(|z| z.re.abs() > nx * tol::<T>(t)),
            NormKind::One => x.iter().all(|z| z.norm() > nx * tol::<T>(t)),
            NormKind::Sup => count_near_max(x.iter().map(|z| z.norm()).collect()),
            NormKind::Product { .. } => {
                count_near_max(self.euclidean_blocks().expect("product has blocks").iter().map(|&(s, l)| euclid(&x[s..s + l])).collect())
            }
        }
    }

    /// A random vector, Gaussian in every real coordinate, normalized to norm one.
    pub fn unit_sphere_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C<T>> {
        loop {
            let v = self.gaussian(rng);
            let n = self.norm_unchecked(&v);
            if n > lit(1e-8) {
                return v.iter().map(|z| z / n).collect();
            }
        }
    }

    /// A random point of the open unit ball with norm in `[0, radius)`.
    pub fn ball_sample<R: Rng + ?Sized>(&self, radius: T, rng: &mut R) -> Vec<C<T>> {
        let u = self.unit_sphere_sample(rng);
        let t: f64 = rng.random();
        let r = radius * lit(t);
        u.iter().map(|z| z * r).collect()
    }

    pub fn gaussian<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<C<T>> {
        (0..self.dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = if self.real_restricted { 0.0 } else { rng.sample(StandardNormal) };
                C::new(lit(re), lit(im))
            })
            .collect()
    }

    /// Short human-readable name such as `euclid3` or `prod[2,1]`.
    pub fn label(&self) -> String {
        let base = match &self.kind {
            NormKind::Euclidean => format!("euclid{}", self.dim),
            NormKind::Sup => format!("sup{}", self.dim),
            NormKind::One => format!("one{}", self.dim),
            NormKind::P { p } => format!("l{p}_{}", self.dim),
            NormKind::Product { blocks } => format!("prod{blocks:?}"),
        };
        if self.real_restricted {
            format!("real_{base}")
        } else {
            base
        }
    }
}

fn lp_norm<T: Real>(v: &[C<T>], p: T) -> T {
    let scale = v.iter().map(|x| x.norm()).fold(T::zero(), T::max);
    if scale == T::zero() {
        return scale;
    }
    let s: T = v.iter().map(|x| (x.norm() / scale).powf(p)).sum();
    scale * s.powf(T::one() / p)
}
