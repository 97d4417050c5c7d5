//! Random maps that come with a proof of ball containment.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::poly::{MultiIndex, PluriharmonicMap, Terms};
use super::{BallCertificate, Mapping};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{cis, euclid, inner, lit, to_f64, tol, Real, C};
use crate::spaces::{NormKind, Space};

/// How a random ball map is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RandomFamily {
    /// Random polynomial rescaled below its coefficient-sum bound.
    PolyScaled,
    /// A finite Blaschke product composed with a scaled norm-one functional,
    /// times a unit vector.
    SliceBlaschke,
    /// A real combination of the real and imaginary parts of a disc
    /// automorphism, composed with a scaled functional, times a unit vector.
    HarmonicSlice,
}

/// Extra structure requested of a random map.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapConstraints {
    pub holomorphic: bool,
    pub vanish_at_origin: bool,
}

/// Maps with a norm-one value at a prescribed boundary point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryFamily {
    /// `[P(l(z)) + conj(Q(l(z)))]·y` with `l` supporting the boundary point.
    Slice,
    /// Monomials in all coordinates rotated to peak at a torus point of the
    /// polydisc.
    Torus,
}

/// Largest number of monomials a slice expansion may produce.
const MAX_TERMS: usize = 20_000;
/// Default truncation degree of Taylor series in slice families.
const SERIES_DEGREE: usize = 24;
const MARGIN: f64 = 1e-3;

pub fn random_ball_map<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    family: RandomFamily,
    degree: u32,
    rng: &mut R,
) -> Result<(PluriharmonicMap<T>, BallCertificate<T>)> {
    random_ball_map_with(dom, codom, family, degree, MapConstraints::default(), rng)
}

/// A random map `B_dom → B_codom` with certificate `sup_bound ≤ 1 − 10⁻³`.
pub fn random_ball_map_with<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    family: RandomFamily,
    degree: u32,
    constraints: MapConstraints,
    rng: &mut R,
) -> Result<(PluriharmonicMap<T>, BallCertificate<T>)> {
    if dom.real_restricted {
        return Err(Error::InvalidParameter("random maps need a complex domain".into()));
    }
    let map = match family {
        RandomFamily::PolyScaled => poly_scaled(dom, codom, degree, constraints, rng)?,
        RandomFamily::SliceBlaschke => slice_blaschke(dom, codom, degree, constraints, rng)?,
        RandomFamily::HarmonicSlice => harmonic_slice(dom, codom, constraints, rng)?,
    };
    let cert = map.certificate().expect("polynomial maps carry a certificate");
    debug_assert!(cert.sup_bound <= T::one() - lit(MARGIN) + tol(1e-12));
    Ok((map, cert))
}

fn gaussian_c<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(rand_distr::StandardNormal);
    let im: f64 = rng.sample(rand_distr::StandardNormal);
    C::new(lit(re), lit(im))
}

fn uniform<T: Real, R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> T {
    lit(rng.random_range(lo..hi))
}

/// All exponent vectors in `n` variables with total degree in `lo..=hi`.
pub(crate) fn multi_indices(n: usize, lo: u32, hi: u32) -> Vec<MultiIndex> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(j: usize, left: u32, cur: &mut Vec<u32>, lo: u32, hi: u32, out: &mut Vec<MultiIndex>) {
        if j + 1 == cur.len() {
            for e in 0..=left {
                cur[j] = e;
                let d: u32 = cur.iter().sum();
                if d >= lo && d <= hi {
                    out.push(cur.clone());
                }
            }
            cur[j] = 0;
            return;
        }
        for e in 0..=left {
            cur[j] = e;
            rec(j + 1, left - e, cur, lo, hi, out);
        }
        cur[j] = 0;
    }
    rec(0, hi, &mut cur, lo, hi, &mut out);
    out
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Highest truncation degree whose expansion in `n` variables stays below
/// [`MAX_TERMS`] monomials.
fn truncation_degree(n: usize, wanted: usize) -> usize {
    let mut total = 0.0;
    for d in 0..=wanted {
        total += binomial(d + n - 1, n - 1);
        if total > MAX_TERMS as f64 {
            return d.saturating_sub(1).max(1);
        }
    }
    wanted
}

/// Powers `(c·z)^k` for `k = 0..=n` as scalar polynomials.
fn functional_powers<T: Real>(c: &[C<T>], n: usize) -> Vec<BTreeMap<MultiIndex, C<T>>> {
    let dim = c.len();
    let mut out = Vec::with_capacity(n + 1);
    let mut cur = BTreeMap::new();
    cur.insert(vec![0u32; dim], C::new(T::one(), T::zero()));
    out.push(cur.clone());
    for _ in 0..n {
        let mut next: BTreeMap<MultiIndex, C<T>> = BTreeMap::new();
        for (alpha, v) in &cur {
            for (j, cj) in c.iter().enumerate() {
                if cj.re == T::zero() && cj.im == T::zero() {
                    continue;
                }
                let mut a = alpha.clone();
                a[j] += 1;
                let e = next.entry(a).or_insert(C::new(T::zero(), T::zero()));
                *e = *e + v * cj;
            }
        }
        cur = next;
        out.push(cur.clone());
    }
    out
}

/// Terms of `z ↦ [P(c·z) + conj(Q(c·z))]·y` for power series `P`, `Q`.
pub(crate) fn slice_terms<T: Real>(c: &[C<T>], y: &[C<T>], p: &[C<T>], q: &[C<T>]) -> (Terms<T>, Terms<T>) {
    let n = p.len().max(q.len()).saturating_sub(1);
    let powers = functional_powers(c, n);
    let yc: Vec<C<T>> = y.iter().map(|x| x.conj()).collect();
    let build = |series: &[C<T>], vec: &[C<T>]| {
        let mut terms = Terms::new();
        for (k, s) in series.iter().enumerate() {
            if s.re == T::zero() && s.im == T::zero() {
                continue;
            }
            for (alpha, v) in &powers[k] {
                let coef = s * v;
                let e = terms.entry(alpha.clone()).or_insert_with(|| vec![C::new(T::zero(), T::zero()); vec.len()]);
                for (ei, yi) in e.iter_mut().zip(vec) {
                    *ei = *ei + coef * yi;
                }
            }
        }
        terms
    };
    (build(p, y), build(q, &yc))
}

/// Taylor coefficients up to degree `n` of `ρ e^{iθ} Π (ζ − a_k)/(1 − conj(a_k) ζ)`.
fn blaschke_series<T: Real>(lead: C<T>, zeros: &[C<T>], n: usize) -> Vec<C<T>> {
    let zero = C::new(T::zero(), T::zero());
    let mut s = vec![zero; n + 1];
    s[0] = lead;
    for a in zeros {
        let ab = a.conj();
        let one_minus = T::one() - a.norm_sqr();
        // (ζ − a)/(1 − āζ) = −a + Σ_{m≥1} ā^{m−1}(1 − |a|²) ζ^m
        let mut factor = vec![zero; n + 1];
        factor[0] = -a;
        let mut pw = C::new(T::one(), T::zero());
        for f in factor.iter_mut().skip(1) {
            *f = pw * one_minus;
            pw = pw * ab;
        }
        let mut next = vec![zero; n + 1];
        for i in 0..=n {
            for j in 0..=n - i {
                next[i + j] = next[i + j] + s[i] * factor[j];
            }
        }
        s = next;
    }
    s
}

fn poly_scaled<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    degree: u32,
    cons: MapConstraints,
    rng: &mut R,
) -> Result<PluriharmonicMap<T>> {
    let lo = if cons.vanish_at_origin { 1 } else { 0 };
    let degree = degree.max(1);
    let idx = multi_indices(dom.dim, lo, degree);
    let cod = codom.complexified();
    let draw = |rng: &mut R| -> Vec<C<T>> { (0..cod.dim).map(|_| gaussian_c::<T, R>(rng)).collect() };
    let mut h = Terms::new();
    let mut g = Terms::new();
    for alpha in &idx {
        let linear = alpha.iter().sum::<u32>() == 1;
        if linear || rng.random_bool(0.6) {
            h.insert(alpha.clone(), draw(rng));
        }
        if !cons.holomorphic && !codom.real_restricted && rng.random_bool(0.5) {
            g.insert(alpha.clone(), draw(rng));
        }
    }
    if codom.real_restricted {
        if cons.holomorphic {
            return Err(Error::InvalidParameter("a holomorphic map into a real space is constant".into()));
        }
        g = h.clone();
    }
    let raw: T = h.values().chain(g.values()).map(|c| cod.norm_unchecked(c)).sum();
    if raw == T::zero() {
        return Err(Error::InvalidParameter("empty random polynomial".into()));
    }
    let target: T = uniform(rng, 0.3, 1.0);
    let s = C::new((T::one() - lit(MARGIN)) * target / raw, T::zero());
    for c in h.values_mut().chain(g.values_mut()) {
        for x in c.iter_mut() {
            *x = *x * s;
        }
    }
    let map = PluriharmonicMap::new(dom.clone(), codom.clone(), h, g)?;
    let cert = map.coefficient_sup_bound();
    if cert.sup_bound > T::one() - lit(MARGIN) {
        // Rounding pushed the sum over the margin; shave it.
        let f = C::new((T::one() - lit(MARGIN)) / cert.sup_bound * (T::one() - T::epsilon() * lit(16.0)), T::zero());
        let scale = |t: &Terms<T>| -> Terms<T> { t.iter().map(|(a, c)| (a.clone(), c.iter().map(|x| x * f).collect())).collect() };
        return PluriharmonicMap::new(dom.clone(), codom.clone(), scale(map.h()), scale(map.g()));
    }
    Ok(map)
}

fn random_slice_data<T: Real, R: Rng + ?Sized>(dom: &Space<T>, codom: &Space<T>, rng: &mut R) -> Result<(Vec<C<T>>, Vec<C<T>>)> {
    let u = dom.unit_sphere_sample(rng);
    let l = dom.support_functional(&u)?;
    let y = codom.unit_sphere_sample(rng);
    Ok((l.coefficients, y))
}

fn slice_blaschke<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    degree: u32,
    cons: MapConstraints,
    rng: &mut R,
) -> Result<PluriharmonicMap<T>> {
    if codom.real_restricted {
        return Err(Error::InvalidParameter("a holomorphic map into a real space is constant".into()));
    }
    if degree == 0 && cons.vanish_at_origin {
        return Err(Error::InvalidParameter("a constant map vanishing at the origin is zero".into()));
    }
    let (c, y) = random_slice_data(dom, codom, rng)?;
    let zeros: Vec<C<T>> = (0..degree)
        .map(|k| {
            if k == 0 && cons.vanish_at_origin {
                C::new(T::zero(), T::zero())
            } else {
                let r: T = uniform(rng, 0.0, 0.8);
                cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU)) * r
            }
        })
        .collect();
    let rho: T = uniform(rng, 0.5, 1.0);
    let lead = cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU)) * rho;
    let n = if degree == 0 { 0 } else { truncation_degree(dom.dim, SERIES_DEGREE) };
    let series = blaschke_series(lead, &zeros, n);
    let mut s: T = uniform(rng, 0.3, 0.95);
    let limit = T::one() - lit(MARGIN);
    loop {
        let coef_sum: T = series.iter().enumerate().map(|(k, a)| a.norm() * s.powi(k as i32)).sum();
        let product: T = zeros.iter().map(|a| (s + a.norm()) / (T::one() + a.norm() * s)).fold(rho, |p, x| p * x);
        let tail = if n == 0 { T::zero() } else { rho * s.powi(n as i32 + 1) / (T::one() - s) };
        let bound = coef_sum.min(product + tail);
        if bound <= limit {
            let p: Vec<C<T>> = series.iter().enumerate().map(|(k, a)| a * s.powi(k as i32)).collect();
            let (h, g) = slice_terms(&c, &y, &p, &[]);
            let map = PluriharmonicMap::new(dom.clone(), codom.clone(), h, g)?;
            let yn = codom.norm_unchecked(&y);
            return Ok(map.with_certificate(BallCertificate { sup_bound: bound * yn, method: "slice_blaschke".into() }));
        }
        s = s * lit(0.9);
    }
}

fn harmonic_slice<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    cons: MapConstraints,
    rng: &mut R,
) -> Result<PluriharmonicMap<T>> {
    if cons.holomorphic {
        return Err(Error::InvalidParameter("harmonic slices are not holomorphic".into()));
    }
    let (c, y) = random_slice_data(dom, codom, rng)?;
    let a = if cons.vanish_at_origin {
        C::new(T::zero(), T::zero())
    } else {
        let r: T = uniform(rng, 0.0, 0.8);
        cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU)) * r
    };
    let lead = cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU));
    let n = truncation_degree(dom.dim, SERIES_DEGREE);
    let m = blaschke_series(lead, &[a], n);
    let total: T = uniform(rng, 0.3, 1.0);
    let split: T = uniform(rng, 0.0, 1.0);
    let (t1, t2) = if codom.real_restricted {
        let sign = |rng: &mut R| if rng.random_bool(0.5) { T::one() } else { -T::one() };
        (C::new(total * split * sign(rng), T::zero()), C::new(total * (T::one() - split) * sign(rng), T::zero()))
    } else {
        (
            cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU)) * (total * split),
            cis(uniform::<T, R>(rng, 0.0, std::f64::consts::TAU)) * (total * (T::one() - split)),
        )
    };
    let half = lit::<T>(0.5);
    let i = C::new(T::zero(), T::one());
    // t1 Re m + t2 Im m = (t1/2 − i t2/2) m + (t1/2 + i t2/2) conj(m)
    let kh = t1 * half - i * t2 * half;
    let kg = (t1 * half + i * t2 * half).conj();
    let weight = t1.norm() + t2.norm();
    let mut s: T = uniform(rng, 0.3, 0.95);
    let limit = T::one() - lit(MARGIN);
    loop {
        let coef_sum: T = m.iter().enumerate().map(|(k, x)| x.norm() * s.powi(k as i32)).sum();
        let analytic = (s + a.norm()) / (T::one() + a.norm() * s) + s.powi(n as i32 + 1) / (T::one() - s);
        let bound = weight * coef_sum.min(analytic);
        if bound <= limit {
            let scaled: Vec<C<T>> = m.iter().enumerate().map(|(k, x)| x * s.powi(k as i32)).collect();
            let p: Vec<C<T>> = scaled.iter().map(|x| x * kh).collect();
            let q: Vec<C<T>> = scaled.iter().map(|x| x * kg).collect();
            let (h, g) = slice_terms(&c, &y, &p, &q);
            let g = if codom.real_restricted { h.clone() } else { g };
            let map = PluriharmonicMap::new(dom.clone(), codom.clone(), h, g)?;
            let yn = codom.norm_unchecked(&y);
            return Ok(map.with_certificate(BallCertificate { sup_bound: bound * yn, method: "harmonic_slice".into() }));
        }
        s = s * lit(0.9);
    }
}

/// Random nonnegative coefficients `(p, q)` on `0..=degree` summing to one,
/// with positive total weight in positive degrees and `q₀ = 0`.
fn boundary_weights<R: Rng + ?Sized>(degree: u32, cons: MapConstraints, rng: &mut R) -> (Vec<f64>, Vec<f64>) {
    let d = degree as usize;
    loop {
        let mut p: Vec<f64> = (0..=d).map(|_| rng.random::<f64>()).collect();
        let mut q: Vec<f64> = (0..=d).map(|_| if cons.holomorphic { 0.0 } else { rng.random::<f64>() }).collect();
        q[0] = 0.0;
        if cons.vanish_at_origin {
            p[0] = 0.0;
        }
        if rng.random_bool(0.3) {
            // Sparse draws keep low-degree extremal shapes in the mix.
            for x in p.iter_mut().chain(q.iter_mut()).filter(|_| rng.random_bool(0.5)) {
                *x = 0.0;
            }
        }
        let tail: f64 = p.iter().skip(1).chain(q.iter()).sum();
        let total = tail + p[0];
        if tail > 1e-3 {
            return (p.iter().map(|x| x / total).collect(), q.iter().map(|x| x / total).collect());
        }
    }
}

/// A random map `B_dom → B_codom` with `f(b) = y` at the unit vector `b`.
///
/// `y` must have codomain norm at most one. The certificate bound equals
/// `‖y‖`, so with `‖y‖ = 1` the map reaches the boundary at `b`.
pub fn random_boundary_map<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    codom: &Space<T>,
    b: &[C<T>],
    y: &[C<T>],
    family: BoundaryFamily,
    degree: u32,
    constraints: MapConstraints,
    rng: &mut R,
) -> Result<PluriharmonicMap<T>> {
    super::derived::check_on_sphere(dom, b, 1e-12)?;
    let yn = codom.norm(y)?;
    if yn > T::one() + tol(1e-12) {
        return Err(Error::OutsideBall { norm: to_f64(yn) });
    }
    if codom.real_restricted {
        return Err(Error::InvalidParameter("boundary families target complex spaces".into()));
    }
    let (p, q) = boundary_weights(degree.max(1), constraints, rng);
    match family {
        BoundaryFamily::Slice => {
            let l = dom.support_functional(b)?;
            let pc: Vec<C<T>> = p.iter().map(|&x| C::new(lit(x), T::zero())).collect();
            let qc: Vec<C<T>> = q.iter().map(|&x| C::new(lit(x), T::zero())).collect();
            let (h, g) = slice_terms(&l.coefficients, y, &pc, &qc);
            let map = PluriharmonicMap::new(dom.clone(), codom.clone(), h, g)?;
            Ok(map.with_certificate(BallCertificate { sup_bound: yn, method: "boundary_slice".into() }))
        }
        BoundaryFamily::Torus => {
            if !matches!(dom.kind, NormKind::Sup) || b.iter().any(|x| (x.norm() - T::one()).abs() > tol(1e-12)) {
                return Err(Error::InvalidParameter("torus family needs a torus point of a polydisc".into()));
            }
            let yc: Vec<C<T>> = y.iter().map(|x| x.conj()).collect();
            let mut h = Terms::new();
            let mut g = Terms::new();
            for (deg, (&wp, &wq)) in p.iter().zip(&q).enumerate() {
                let idx = multi_indices(dom.dim, deg as u32, deg as u32);
                // Spread each degree's weight over a few random monomials of that degree.
                let picks: Vec<&MultiIndex> = idx.iter().filter(|_| rng.random_bool(0.5)).collect();
                let picks = if picks.is_empty() { vec![&idx[0]] } else { picks };
                let share: Vec<f64> = picks.iter().map(|_| rng.random::<f64>() + 0.05).collect();
                let total: f64 = share.iter().sum();
                for (alpha, sh) in picks.iter().zip(&share) {
                    let rot = alpha.iter().enumerate().fold(C::new(T::one(), T::zero()), |acc, (j, &e)| acc * b[j].conj().powu(e));
                    if wp > 0.0 {
                        let c = rot * lit::<T>(wp * sh / total);
                        h.insert((*alpha).clone(), y.iter().map(|v| v * c).collect());
                    }
                    if wq > 0.0 {
                        let c = rot * lit::<T>(wq * sh / total);
                        g.insert((*alpha).clone(), yc.iter().map(|v| v * c).collect());
                    }
                }
            }
            let map = PluriharmonicMap::new(dom.clone(), codom.clone(), h, g)?;
            Ok(map.with_certificate(BallCertificate { sup_bound: yn, method: "boundary_torus".into() }))
        }
    }
}

/// A Haar-like random unitary from Gram-Schmidt on Gaussian columns.
pub fn random_unitary<T: Real, R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat<T> {
    let mut cols: Vec<Vec<C<T>>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<C<T>> = (0..n).map(|_| gaussian_c(rng)).collect();
        for q in &cols {
            let p = inner(&v, q);
            for (x, y) in v.iter_mut().zip(q) {
                *x = *x - y * p;
            }
        }
        let nv = euclid(&v);
        if nv > lit(1e-6) {
            cols.push(v.iter().map(|x| x / nv).collect());
        }
    }
    CMat::from_columns(&cols)
}

/// A random map `f = s(h + conj(W h))` from `B_dom` into the Euclidean ball
/// of the same dimension, with `h = z + (small higher-order terms)` and
/// `‖W‖ = k`, so that the dilatation is the constant matrix `W`.
pub fn random_quasiregular_map<T: Real, R: Rng + ?Sized>(
    dom: &Space<T>,
    k: T,
    degree: u32,
    rng: &mut R,
) -> Result<(PluriharmonicMap<T>, CMat<T>)> {
    if !(k >= T::zero() && k < T::one()) {
        return Err(Error::InvalidParameter(format!("dilatation bound k = {k} must lie in [0, 1)")));
    }
    let n = dom.dim;
    let w = random_unitary::<T, R>(n, rng).scale(C::new(k, T::zero()));
    let mut h = Terms::new();
    for j in 0..n {
        let mut alpha = vec![0; n];
        alpha[j] = 1;
        let mut e = vec![C::new(T::zero(), T::zero()); n];
        e[j] = C::new(T::one(), T::zero());
        h.insert(alpha, e);
    }
    let higher = multi_indices(n, 2, degree.max(1));
    if !higher.is_empty() {
        let raw: Vec<Vec<C<T>>> = higher.iter().map(|_| (0..n).map(|_| gaussian_c(rng)).collect()).collect();
        let weight: T = higher.iter().zip(&raw).map(|(a, c)| lit::<T>(a.iter().sum::<u32>() as f64) * euclid(c)).sum();
        // Keeps ‖Dh − I‖ ≤ 0.3 on the ball, so Dh stays invertible.
        let s = lit::<T>(0.3) / weight;
        for (a, c) in higher.into_iter().zip(raw) {
            h.insert(a, c.iter().map(|x| x * s).collect());
        }
    }
    let g: Terms<T> = h.iter().map(|(a, c)| (a.clone(), w.mul_vec(c))).collect();
    let codom = Space::euclidean(n);
    let raw: T = h.values().chain(g.values()).map(|c| euclid(c)).sum();
    let target: T = uniform(rng, 0.3, 1.0);
    let s = C::new((T::one() - lit(MARGIN)) * target / raw, T::zero());
    let scale = |t: &Terms<T>| -> Terms<T> { t.iter().map(|(a, c)| (a.clone(), c.iter().map(|x| x * s).collect())).collect() };
    let map = PluriharmonicMap::new(dom.clone(), codom, scale(&h), scale(&g))?;
    Ok((map, w))
}
