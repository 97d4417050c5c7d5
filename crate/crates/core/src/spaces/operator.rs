//! Operator norms of complex-linear and real-linear maps between spaces.
//!
//! Closed forms are used whenever the pair of norms admits one; the rest is
//! a deterministic sampled search over the unit sphere that can only
//! under-estimate, and is flagged as such.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{NormKind, Space};
use crate::error::{Error, Result};
use crate::linalg::{real_linear_form, CMat, RMat};
use crate::scalar::{cis, euclid, lit, maximize_periodic, Real, C};

/// A norm value together with whether it is exact or only a lower bound.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate<T> {
    pub value: T,
    pub lower_bound_only: bool,
}

impl<T: Real> NormEstimate<T> {
    pub fn exact(value: T) -> Self {
        Self { value, lower_bound_only: false }
    }

    pub fn lower(value: T) -> Self {
        Self { value, lower_bound_only: true }
    }

    /// The value, or an error naming `what` when it is only a lower bound.
    pub fn require_exact(&self, what: &str) -> Result<T> {
        if self.lower_bound_only {
            Err(Error::InexactNorm(what.to_string()))
        } else {
            Ok(self.value)
        }
    }
}

/// Parameters of the sampled sphere search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereSearch {
    pub samples: usize,
    /// How many times the ascent step may halve before stopping.
    pub levels: usize,
    pub seed: u64,
}

impl Default for SphereSearch {
    fn default() -> Self {
        Self { samples: 512, levels: 32, seed: 0x5c4a_12c0_ffee }
    }
}

/// Maximizes `f` over the unit sphere of `space` by random sampling followed
/// by coordinate-wise phase and magnitude ascent from the best few samples.
/// Returns the best value and the point attaining it.
pub fn sphere_sup<T: Real>(space: &Space<T>, f: &dyn Fn(&[C<T>]) -> T, search: &SphereSearch) -> (T, Vec<C<T>>) {
    const STARTS: usize = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    let mut pool: Vec<(T, Vec<C<T>>)> = (0..search.samples.max(1))
        .map(|_| {
            let v = space.unit_sphere_sample(&mut rng);
            (f(&v), v)
        })
        .collect();
    pool.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    pool.truncate(STARTS);
    let mut best = (T::neg_infinity(), Vec::new());
    for (val, v) in pool {
        let r = ascend(space, f, search.levels, val, v, &mut rng);
        if r.0 > best.0 {
            best = r;
        }
    }
    best
}

fn ascend<T: Real>(
    space: &Space<T>,
    f: &dyn Fn(&[C<T>]) -> T,
    levels: usize,
    mut best: T,
    mut best_v: Vec<C<T>>,
    rng: &mut ChaCha8Rng,
) -> (T, Vec<C<T>>) {
    let mut step = lit::<T>(0.5);
    let mut level = 0;
    let mut evals = 0usize;
    let half = lit::<T>(0.5);
    while level < levels && evals < 50_000 {
        let mut candidates = Vec::new();
        for j in 0..space.dim {
            for w_j in coordinate_moves(best_v[j], step, space.real_restricted) {
                let mut w = best_v.clone();
                w[j] = w_j;
                candidates.push(w);
            }
        }
        // Random directions let the search cross ridges of non-smooth objectives.
        for _ in 0..2 * space.dim {
            let g = space.unit_sphere_sample(rng);
            candidates.push(best_v.iter().zip(&g).map(|(x, y)| x + y * step).collect());
        }
        let mut improved = false;
        for mut w in candidates {
            let n = space.norm_unchecked(&w);
            if !(n > T::zero()) {
                continue;
            }
            for x in w.iter_mut() {
                *x = *x / n;
            }
            let val = f(&w);
            evals += 1;
            if val > best {
                best = val;
                best_v = w;
                improved = true;
            }
        }
        if !improved {
            step = step * half;
            level += 1;
        }
    }
    (best, best_v)
}

fn coordinate_moves<T: Real>(z: C<T>, step: T, real: bool) -> Vec<C<T>> {
    let one = T::one();
    let mut out = vec![z * (one + step), z * (one - step), z + C::new(step, T::zero()), z - C::new(step, T::zero())];
    if !real {
        out.extend([z * cis(step), z * cis(-step), z + C::new(T::zero(), step), z - C::new(T::zero(), step)]);
    }
    out
}

/// A complex-linear map given by a matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<T> {
    pub matrix: CMat<T>,
    pub dom: Space<T>,
    pub codom: Space<T>,
}

impl<T: Real> LinearMap<T> {
    pub fn new(matrix: CMat<T>, dom: Space<T>, codom: Space<T>) -> Result<Self> {
        if matrix.cols != dom.dim {
            return Err(Error::DimensionMismatch { expected: dom.dim, got: matrix.cols });
        }
        if matrix.rows != codom.dim {
            return Err(Error::DimensionMismatch { expected: codom.dim, got: matrix.rows });
        }
        Ok(Self { matrix, dom, codom })
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        self.matrix.mul_vec(v)
    }

    pub fn operator_norm(&self) -> NormEstimate<T> {
        RealLinearMap::complex_linear(self.matrix.clone(), self.dom.clone(), self.codom.clone()).norm()
    }
}

/// The real-linear map `v ↦ A v + conj(B v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct RealLinearMap<T> {
    pub a: CMat<T>,
    pub b: CMat<T>,
    pub dom: Space<T>,
    pub codom: Space<T>,
}

impl<T: Real> RealLinearMap<T> {
    pub fn new(a: CMat<T>, b: CMat<T>, dom: Space<T>, codom: Space<T>) -> Result<Self> {
        for m in [&a, &b] {
            if m.cols != dom.dim {
                return Err(Error::DimensionMismatch { expected: dom.dim, got: m.cols });
            }
            if m.rows != codom.dim {
                return Err(Error::DimensionMismatch { expected: codom.dim, got: m.rows });
            }
        }
        Ok(Self { a, b, dom, codom })
    }

    fn complex_linear(a: CMat<T>, dom: Space<T>, codom: Space<T>) -> Self {
        let b = CMat::zeros(a.rows, a.cols);
        Self { a, b, dom, codom }
    }

    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        let av = self.a.mul_vec(v);
        let bv = self.b.mul_vec(v);
        av.iter().zip(&bv).map(|(x, y)| x + y.conj()).collect()
    }

    /// Operator norm with respect to the domain and codomain norms.
    pub fn norm(&self) -> NormEstimate<T> {
        self.norm_with(&SphereSearch::default())
    }

    pub fn norm_with(&self, search: &SphereSearch) -> NormEstimate<T> {
        let dom = &self.dom;
        let cod = self.codom.complexified();
        let (r, c) = (self.a.rows, self.a.cols);
        let full = real_linear_form(&self.a, &self.b);
        let m = if dom.real_restricted { full.select_cols(&(0..c).collect::<Vec<_>>()) } else { full };

        if dom.is_inner_product() && cod.is_inner_product() {
            return NormEstimate::exact(m.spectral_norm());
        }
        if dom.real_restricted {
            return self.sampled(&cod, search);
        }
        if self.b.is_zero() {
            if let Some(v) = complex_linear_closed_form(&self.a, dom, &cod) {
                return NormEstimate::exact(v);
            }
        }
        if let Some(blocks) = cod.euclidean_blocks() {
            let mut best = T::zero();
            let mut exact = true;
            for (s, l) in blocks {
                let rows: Vec<usize> = (s..s + l).chain(r + s..r + s + l).collect();
                let mb = m.select_rows(&rows);
                let v = if l == 1 {
                    functional_sup(&mb, dom)
                } else if dom.is_inner_product() {
                    Some(mb.spectral_norm())
                } else if matches!(dom.kind, NormKind::One) {
                    Some((0..c).map(|j| mb.select_cols(&[j, c + j]).spectral_norm()).fold(T::zero(), T::max))
                } else {
                    None
                };
                let v = match v {
                    Some(v) => v,
                    None => {
                        exact = false;
                        let sub = RealLinearMap {
                            a: self.a.row_block(s, l),
                            b: self.b.row_block(s, l),
                            dom: dom.clone(),
                            codom: Space::euclidean(l),
                        };
                        sub.sampled(&Space::euclidean(l), search).value
                    }
                };
                best = best.max(v);
            }
            return NormEstimate { value: best, lower_bound_only: !exact };
        }
        if matches!(dom.kind, NormKind::One) {
            let mut best = T::zero();
            for j in 0..c {
                let (aj, bj) = (self.a.column(j), self.b.column(j));
                let f = |t: T| {
                    let e = cis(t);
                    let v: Vec<C<T>> = aj.iter().zip(&bj).map(|(x, y)| x * e + (y * e).conj()).collect();
                    cod.norm_unchecked(&v)
                };
                best = best.max(maximize_periodic(f, T::TAU(), 2048).1);
            }
            return NormEstimate::exact(best);
        }
        self.sampled(&cod, search)
    }

    fn sampled(&self, cod: &Space<T>, search: &SphereSearch) -> NormEstimate<T> {
        let f = |v: &[C<T>]| cod.norm_unchecked(&self.apply(v));
        NormEstimate::lower(sphere_sup(&self.dom, &f, search).0)
    }
}

/// Closed-form norm of a complex-linear map, when one applies.
fn complex_linear_closed_form<T: Real>(a: &CMat<T>, dom: &Space<T>, cod: &Space<T>) -> Option<T> {
    let (r, c) = (a.rows, a.cols);
    if let (Some(db), Some(cb)) = (dom.euclidean_blocks(), cod.euclidean_blocks()) {
        if db == cb && is_block_diagonal(a, &db) {
            return Some(db.iter().map(|&(s, l)| a.row_block(s, l).col_block(s, l).spectral_norm()).fold(T::zero(), T::max));
        }
    }
    if matches!(dom.kind, NormKind::One) || dom.dim == 1 {
        return Some((0..c).map(|j| cod.norm_unchecked(&a.column(j))).fold(T::zero(), T::max));
    }
    if let Some(blocks) = cod.euclidean_blocks() {
        let mut best = T::zero();
        let mut ok = true;
        for (s, l) in blocks {
            if l == 1 {
                best = best.max(dom.dual_norm(&a.row(s)));
            } else if dom.is_inner_product() {
                best = best.max(a.row_block(s, l).spectral_norm());
            } else {
                ok = false;
                break;
            }
        }
        if ok {
            return Some(best);
        }
    }
    // Rank one: A = y cᵀ.
    let (jmax, ymax) = (0..c).map(|j| (j, euclid(&a.column(j)))).fold((0, T::zero()), |b, x| if x.1 > b.1 { x } else { b });
    if ymax == T::zero() {
        return Some(T::zero());
    }
    let y = a.column(jmax);
    let yy = ymax * ymax;
    let coef: Vec<C<T>> = (0..c).map(|j| crate::scalar::inner(&a.column(j), &y) / yy).collect();
    let resid = a.sub(&CMat::outer(&y, &coef)).max_abs();
    if resid <= lit::<T>(1e-13) * a.max_abs() * lit(r.max(c) as f64) {
        return Some(cod.norm_unchecked(&y) * dom.dual_norm(&coef));
    }
    None
}

fn is_block_diagonal<T: Real>(a: &CMat<T>, blocks: &[(usize, usize)]) -> bool {
    let mut owner = vec![0; a.cols];
    for (b, &(s, l)) in blocks.iter().enumerate() {
        owner[s..s + l].fill(b);
    }
    (0..a.rows).all(|i| (0..a.cols).all(|j| owner[i] == owner[j] || (a[(i, j)].re == T::zero() && a[(i, j)].im == T::zero())))
}

/// Supremum of `|L(β)|` over the unit sphere of `dom`, where `L` is a
/// real-linear functional given by its `2 × 2c` real form.
fn functional_sup<T: Real>(m: &RMat<T>, dom: &Space<T>) -> Option<T> {
    let c = dom.dim;
    if dom.is_inner_product() {
        return Some(m.spectral_norm());
    }
    if matches!(dom.kind, NormKind::One) {
        return Some((0..c).map(|j| m.select_cols(&[j, c + j]).spectral_norm()).fold(T::zero(), T::max));
    }
    let blocks = dom.euclidean_blocks()?;
    // |L(β)| = max over unit u ∈ ℝ² of u·(Mβ), and for fixed u each block of
    // β contributes the length of the matching slice of Mᵀu.
    let f = |phi: T| {
        let (cs, sn) = (phi.cos(), phi.sin());
        blocks
            .iter()
            .map(|&(s, l)| {
                let mut acc = T::zero();
                for j in (s..s + l).chain(c + s..c + s + l) {
                    let v = cs * m[(0, j)] + sn * m[(1, j)];
                    acc = acc + v * v;
                }
                acc.sqrt()
            })
            .sum::<T>()
    };
    Some(maximize_periodic(f, T::PI(), 2048).1)
}
