//! Brute-force reference computations. Nothing here calls the closed forms
//! it is meant to validate.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::mappings::{random_ball_map_with, DerivPair, MapConstraints, Mapping, RandomFamily};
use crate::scalar::{lit, Real, C};
use crate::spaces::{LinearMap, NormKind, RealLinearMap, Space};
use crate::symmetric::TripleSystem;
use crate::theorems::{extremal, ExtremalSetup, Instance, TheoremId};

/// One comparison between a primary value and its oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub quantity: String,
    pub reference_value: f64,
    pub primary_value: f64,
    pub abs_error: f64,
    pub method: String,
}

impl OracleReport {
    pub fn new(quantity: impl Into<String>, reference_value: f64, primary_value: f64, method: impl Into<String>) -> Self {
        Self {
            quantity: quantity.into(),
            reference_value,
            primary_value,
            abs_error: (reference_value - primary_value).abs(),
            method: method.into(),
        }
    }
}

/// Wirtinger derivatives from central differences with step `h` in every
/// real coordinate direction.
///
/// # Panics
/// When `h` lies outside `[1e-8, 1e-3]`.
pub fn fd_derivatives<T: Real>(map: &dyn Mapping<T>, z: &[C<T>], h: T) -> DerivPair<T> {
    assert!(h >= lit(1e-8) && h <= lit(1e-3), "step {h} outside [1e-8, 1e-3]");
    let (n, m) = (map.dom().dim, map.codom().dim);
    let mut dh = CMat::zeros(m, n);
    let mut dg = CMat::zeros(m, n);
    let two_h = h + h;
    let half = lit::<T>(0.5);
    for j in 0..n {
        let diff = |step: C<T>| -> Vec<C<T>> {
            let mut plus = z.to_vec();
            let mut minus = z.to_vec();
            plus[j] = plus[j] + step;
            minus[j] = minus[j] - step;
            let (a, b) = (map.eval(&plus), map.eval(&minus));
            a.iter().zip(&b).map(|(p, q)| (p - q) / two_h).collect()
        };
        let fx = diff(C::new(h, T::zero()));
        let fy = diff(C::new(T::zero(), h));
        let i = C::new(T::zero(), T::one());
        for r in 0..m {
            dh[(r, j)] = (fx[r] - i * fy[r]) * half;
            dg[(r, j)] = ((fx[r] + i * fy[r]) * half).conj();
        }
    }
    DerivPair { dh, dg }
}

/// Radial derivative `lim (f(b) − f(rb))/(1 − r)` from the quotients at
/// `r = 1 − 2^{−j}`, `j = 4..=12`, extrapolated by a Richardson table.
/// Returns the entry whose last correction was smallest.
pub fn radial_richardson<T: Real>(map: &dyn Mapping<T>, b: &[C<T>]) -> Vec<C<T>> {
    let fb = map.eval(b);
    let quotient = |j: i32| -> Vec<C<T>> {
        let t = lit::<T>(2f64.powi(-j));
        let inner: Vec<C<T>> = b.iter().map(|x| x * (T::one() - t)).collect();
        fb.iter().zip(map.eval(&inner)).map(|(p, q)| (p - q) / t).collect()
    };
    let rows: Vec<Vec<C<T>>> = (4..=12).map(quotient).collect();
    let mut table: Vec<Vec<Vec<C<T>>>> = Vec::with_capacity(rows.len());
    let mut best = rows[rows.len() - 1].clone();
    let mut best_err = T::infinity();
    for (i, row) in rows.into_iter().enumerate() {
        let mut cur = vec![row];
        for k in 1..=i {
            let factor = lit::<T>(2f64.powi(k as i32));
            let prev_row = &table[i - 1][k - 1];
            let next: Vec<C<T>> = cur[k - 1].iter().zip(prev_row).map(|(a, p)| (a * factor - p) / (factor - T::one())).collect();
            let err = next.iter().zip(&cur[k - 1]).map(|(a, b)| (a - b).norm()).fold(T::zero(), T::max);
            if err < best_err {
                best_err = err;
                best = next.clone();
            }
            cur.push(next);
        }
        table.push(cur);
    }
    best
}

/// Unit vector of `space` in the direction of a Gaussian sample, normalized
/// here rather than through the space's own sampler.
fn unit_sample<T: Real, R: Rng + ?Sized>(space: &Space<T>, rng: &mut R) -> Vec<C<T>> {
    loop {
        let v: Vec<C<T>> = (0..space.dim)
            .map(|_| {
                let re: f64 = rng.sample(rand_distr::StandardNormal);
                let im: f64 = if space.real_restricted { 0.0 } else { rng.sample(rand_distr::StandardNormal) };
                C::new(lit(re), lit(im))
            })
            .collect();
        let n = space.norm_unchecked(&v);
        if n > lit(1e-8) {
            return v.iter().map(|x| x / n).collect();
        }
    }
}

const ASCENT_STEPS: usize = 64;

fn sampled_norm<T: Real, F, G>(dom: &Space<T>, codom: &Space<T>, apply: F, adjoint: G, samples: usize, seed: u64) -> T
where
    F: Fn(&[C<T>]) -> Vec<C<T>>,
    G: Fn(&[C<T>]) -> Vec<C<T>>,
{
    assert!(samples >= 1, "at least one sample");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let value = |v: &[C<T>]| codom.norm_unchecked(&apply(v)) / dom.norm_unchecked(v);
    let mut best = unit_sample(dom, &mut rng);
    let mut best_val = value(&best);
    for _ in 1..samples {
        let v = unit_sample(dom, &mut rng);
        let val = value(&v);
        if val > best_val {
            best = v;
            best_val = val;
        }
    }
    let euclidean = |s: &Space<T>| matches!(s.kind, NormKind::Euclidean);
    if euclidean(dom) && euclidean(codom) {
        // Power iteration on AᵀA for the real inner product.
        for _ in 0..ASCENT_STEPS {
            let next = adjoint(&apply(&best));
            let n = dom.norm_unchecked(&next);
            if n <= T::zero() {
                break;
            }
            let cand: Vec<C<T>> = next.iter().map(|x| x / n).collect();
            let val = value(&cand);
            best = cand;
            best_val = best_val.max(val);
        }
    } else {
        let mut step = lit::<T>(0.25);
        for _ in 0..ASCENT_STEPS {
            let dir = unit_sample(dom, &mut rng);
            let cand: Vec<C<T>> = best.iter().zip(&dir).map(|(a, d)| a + d * step).collect();
            let val = value(&cand);
            if val > best_val {
                best = cand;
                best_val = val;
            } else {
                step = step * lit(0.85);
            }
        }
    }
    best_val
}

/// Sampled lower bound for the operator norm of a complex-linear map.
pub fn numeric_operator_norm<T: Real>(a: &LinearMap<T>, samples: usize, seed: u64) -> T {
    let adj = a.matrix.adjoint();
    sampled_norm(&a.dom, &a.codom, |v| a.matrix.mul_vec(v), |w| adj.mul_vec(w), samples, seed)
}

/// Sampled lower bound for the operator norm of `v ↦ Av + conj(Bv)`.
pub fn numeric_real_operator_norm<T: Real>(map: &RealLinearMap<T>, samples: usize, seed: u64) -> T {
    let (aa, ba) = (map.a.adjoint(), map.b.adjoint());
    let apply = |v: &[C<T>]| -> Vec<C<T>> {
        let (p, q) = (map.a.mul_vec(v), map.b.mul_vec(v));
        p.iter().zip(&q).map(|(x, y)| x + y.conj()).collect()
    };
    let adjoint = |w: &[C<T>]| -> Vec<C<T>> {
        let wc: Vec<C<T>> = w.iter().map(|x| x.conj()).collect();
        let (p, q) = (aa.mul_vec(w), ba.mul_vec(&wc));
        p.iter().zip(&q).map(|(x, y)| x + y).collect()
    };
    sampled_norm(&map.dom, &map.codom, apply, adjoint, samples, seed)
}

/// `log K(z, z)` of the Bergman kernel, up to an additive constant.
fn log_kernel(sys: &TripleSystem, z: &[C<f64>]) -> f64 {
    let mut total = 0.0;
    for (s, l) in sys.blocks() {
        let r2: f64 = z[s..s + l].iter().map(|x| x.norm_sqr()).sum();
        total -= (l as f64 + 1.0) * (1.0 - r2).ln();
    }
    total
}

const BERGMAN_STEP: f64 = 1e-3;

/// Complex Hessian `∂²/∂z_i∂z̄_j log K` at the origin by fourth-order
/// central differences of the explicit kernels.
pub fn numeric_bergman_hessian0(sys: &TripleSystem) -> CMat<f64> {
    let n = sys.dim();
    let h = BERGMAN_STEP;
    // Second derivative of log K along a real direction of ℂⁿ = ℝ²ⁿ.
    let d2 = |dir: &[C<f64>]| -> f64 {
        let at = |t: f64| log_kernel(sys, &dir.iter().map(|x| x * t).collect::<Vec<_>>());
        (-at(2.0 * h) + 16.0 * at(h) - 30.0 * at(0.0) + 16.0 * at(-h) - at(-2.0 * h)) / (12.0 * h * h)
    };
    let unit = |j: usize, imag: bool| -> Vec<C<f64>> {
        let mut v = vec![C::new(0.0, 0.0); n];
        v[j] = if imag { C::new(0.0, 1.0) } else { C::new(1.0, 0.0) };
        v
    };
    let mixed = |u: &[C<f64>], v: &[C<f64>]| -> f64 {
        let sum: Vec<C<f64>> = u.iter().zip(v).map(|(a, b)| a + b).collect();
        (d2(&sum) - d2(u) - d2(v)) / 2.0
    };
    let mut out = CMat::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let (xi, yi, xj, yj) = (unit(i, false), unit(i, true), unit(j, false), unit(j, true));
            let (xx, yy) = (mixed(&xi, &xj), mixed(&yi, &yj));
            let (xy, yx) = (mixed(&xi, &yj), mixed(&yi, &xj));
            out[(i, j)] = C::new(xx + yy, xy - yx) * 0.25;
        }
    }
    out
}

/// `Σ_{ij} H_ij x_i conj(y_j)` with the numeric Hessian `H`.
pub fn numeric_bergman_metric0(sys: &TripleSystem, x: &[C<f64>], y: &[C<f64>]) -> Result<C<f64>> {
    let n = sys.dim();
    for v in [x, y] {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: v.len() });
        }
    }
    let hess = numeric_bergman_hessian0(sys);
    let mut s = C::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            s += hess[(i, j)] * x[i] * y[j].conj();
        }
    }
    Ok(s)
}

/// `½ sup |h₀(x, y)|` over the unit ball from the numeric Hessian: the
/// supremum over `y` is the dual norm of `Hᵀx`, and the one over `x` is
/// sampled on the distinguished boundary.
pub fn numeric_c_constant(sys: &TripleSystem, samples: usize, seed: u64) -> f64 {
    let hess = numeric_bergman_hessian0(sys);
    let space = sys.space::<f64>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = sys.dim();
    let mut best = 0.0f64;
    for _ in 0..samples.max(1) {
        let mut x = vec![C::new(0.0, 0.0); n];
        for (s, l) in sys.blocks() {
            let part = unit_sample(&Space::euclidean(l), &mut rng);
            x[s..s + l].copy_from_slice(&part);
        }
        // h₀(x, y) = Σ_j conj(y_j) (Hᵀx)_j, so the functional has coefficients Hᵀx.
        let coeffs: Vec<C<f64>> = (0..n).map(|j| (0..n).map(|i| hess[(i, j)] * x[i]).sum()).collect();
        best = best.max(space.dual_norm(&coeffs));
    }
    best / 2.0
}

/// Mesh resolution for [`univalent_radius_1d`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MeshGrid {
    pub radial: usize,
    pub angular: usize,
}

impl Default for MeshGrid {
    fn default() -> Self {
        Self { radial: 256, angular: 512 }
    }
}

/// Heuristic radius of the largest disc about `f(z0)` covered univalently by
/// a planar harmonic self-map of the disc.
///
/// Nodes of a polar mesh on the unit disc whose images lie within `r` of
/// `f(z0)` form a graph; the component containing the node nearest `z0` must
/// avoid the outermost ring, keep the Jacobian sign of `z0`, and show no
/// image collisions between distant nodes. The largest passing `r` on a grid
/// of step `R/radial` is returned, `R` being the largest image distance on
/// the outer ring.
pub fn univalent_radius_1d(map: &dyn Mapping<f64>, z0: C<f64>, grid: MeshGrid) -> Result<f64> {
    if map.dom().dim != 1 || map.codom().dim != 1 || map.codom().real_restricted {
        return Err(Error::InvalidParameter("univalent radius needs a planar map".into()));
    }
    if z0.norm() >= 1.0 {
        return Err(Error::OutsideBall { norm: z0.norm() });
    }
    let MeshGrid { radial, angular } = grid;
    if radial < 2 || angular < 3 {
        return Err(Error::InvalidParameter("mesh too coarse".into()));
    }
    let mesh = Mesh::new(map, radial, angular);
    let start = mesh.nearest(z0);
    let center = map.eval(&[z0])[0];
    let sign = mesh.jacobian[start].signum();
    if sign == 0.0 {
        return Err(Error::MeshExhausted);
    }
    let reach = (0..angular).map(|j| (mesh.value[mesh.index(radial, j)] - center).norm()).fold(0.0, f64::max);
    let cell = reach / radial as f64;
    let ok = |m: usize| mesh.univalent_within(start, center, m as f64 * cell, sign);
    let (mut lo, mut hi) = (0usize, radial);
    if ok(hi) {
        return Ok(hi as f64 * cell);
    }
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 0 {
        return Err(Error::MeshExhausted);
    }
    Ok(lo as f64 * cell)
}

struct Mesh {
    radial: usize,
    angular: usize,
    point: Vec<C<f64>>,
    value: Vec<C<f64>>,
    jacobian: Vec<f64>,
}

impl Mesh {
    fn new(map: &dyn Mapping<f64>, radial: usize, angular: usize) -> Self {
        let mut point = vec![C::new(0.0, 0.0)];
        for i in 1..=radial {
            let r = i as f64 / radial as f64;
            for j in 0..angular {
                point.push(C::from_polar(r, std::f64::consts::TAU * j as f64 / angular as f64));
            }
        }
        let h = 1e-6;
        let value: Vec<C<f64>> = point.iter().map(|z| map.eval(&[*z])[0]).collect();
        let jacobian = point
            .iter()
            .map(|z| {
                // Stay inside the closed disc on the outer ring.
                let z = if z.norm() > 1.0 - 2.0 * h { z * (1.0 - 2.0 * h) } else { *z };
                let d = fd_derivatives(map, &[z], h);
                d.dh[(0, 0)].norm_sqr() - d.dg[(0, 0)].norm_sqr()
            })
            .collect();
        Self { radial, angular, point, value, jacobian }
    }

    fn index(&self, ring: usize, j: usize) -> usize {
        if ring == 0 {
            0
        } else {
            1 + (ring - 1) * self.angular + j % self.angular
        }
    }

    fn ring_of(&self, k: usize) -> (usize, usize) {
        if k == 0 {
            (0, 0)
        } else {
            (1 + (k - 1) / self.angular, (k - 1) % self.angular)
        }
    }

    fn nearest(&self, z: C<f64>) -> usize {
        (0..self.point.len()).min_by(|&a, &b| (self.point[a] - z).norm().total_cmp(&(self.point[b] - z).norm())).expect("nonempty mesh")
    }

    fn neighbours(&self, k: usize) -> Vec<usize> {
        let (ring, j) = self.ring_of(k);
        if ring == 0 {
            return (0..self.angular).map(|j| self.index(1, j)).collect();
        }
        let mut out = vec![self.index(ring, j + 1), self.index(ring, j + self.angular - 1), self.index(ring - 1, j)];
        if ring < self.radial {
            out.push(self.index(ring + 1, j));
        }
        out
    }

    fn univalent_within(&self, start: usize, center: C<f64>, r: f64, sign: f64) -> bool {
        let inside = |k: usize| (self.value[k] - center).norm() < r;
        if !inside(start) {
            return true;
        }
        let mut seen = vec![false; self.point.len()];
        let mut queue = VecDeque::from([start]);
        let mut comp = Vec::new();
        seen[start] = true;
        while let Some(k) = queue.pop_front() {
            if self.ring_of(k).0 == self.radial || self.jacobian[k] * sign <= 0.0 {
                return false;
            }
            comp.push(k);
            for nb in self.neighbours(k) {
                if !seen[nb] && inside(nb) {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        !self.has_collision(&comp)
    }

    /// Two nodes far apart in the disc whose images share a hash cell and lie
    /// closer than the finest image edge.
    fn has_collision(&self, comp: &[usize]) -> bool {
        let mut edge = f64::INFINITY;
        for &k in comp {
            for nb in self.neighbours(k) {
                let d = (self.value[k] - self.value[nb]).norm();
                if d > 0.0 {
                    edge = edge.min(d);
                }
            }
        }
        if !edge.is_finite() {
            return false;
        }
        let eps = edge / 2.0;
        let far = 3.0 * std::f64::consts::TAU / self.angular as f64;
        let key = |v: C<f64>| ((v.re / eps).floor() as i64, (v.im / eps).floor() as i64);
        let mut cells: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for &k in comp {
            let (cx, cy) = key(self.value[k]);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    if let Some(others) = cells.get(&(cx + dx, cy + dy)) {
                        for &o in others {
                            if (self.value[o] - self.value[k]).norm() < eps && (self.point[o] - self.point[k]).norm() > far {
                                return true;
                            }
                        }
                    }
                }
            }
            cells.entry((cx, cy)).or_default().push(k);
        }
        false
    }
}

/// Outcome of one oracle gate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateResult {
    pub gate: String,
    pub checks: usize,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// The comparison with the largest error.
    pub worst: Option<OracleReport>,
}

impl GateResult {
    fn from_reports(gate: &str, tolerance: f64, reports: Vec<OracleReport>, relative: bool) -> Self {
        let err = |r: &OracleReport| if relative { r.abs_error / r.reference_value.abs().max(1e-300) } else { r.abs_error };
        let worst = reports.iter().max_by(|a, b| err(a).total_cmp(&err(b))).cloned();
        let max_error = worst.as_ref().map_or(0.0, err);
        Self { gate: gate.into(), checks: reports.len(), max_error, tolerance, passed: max_error <= tolerance, worst }
    }
}

/// How many random instances each gate draws.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateSizes {
    pub derivatives: usize,
    pub operator_norms: usize,
}

impl Default for GateSizes {
    fn default() -> Self {
        Self { derivatives: 1000, operator_norms: 100 }
    }
}

pub const DERIVATIVE_GATE_TOL: f64 = 1e-6;
pub const OPERATOR_NORM_GATE_TOL: f64 = 1e-3;
pub const BERGMAN_GATE_TOL: f64 = 1e-5;
pub const RADIAL_GATE_TOL: f64 = 1e-6;

fn gate_spaces() -> Vec<Space<f64>> {
    vec![Space::euclidean(1), Space::euclidean(2), Space::sup(2), Space::product(&[2, 1]).expect("valid blocks"), Space::one(2)]
}

fn derivative_gate(count: usize, rng: &mut ChaCha8Rng) -> Result<GateResult> {
    let spaces = gate_spaces();
    let families = [RandomFamily::PolyScaled, RandomFamily::SliceBlaschke, RandomFamily::HarmonicSlice];
    let mut reports = Vec::with_capacity(count);
    for i in 0..count {
        let dom = &spaces[i % spaces.len()];
        let codom = &spaces[(i / spaces.len()) % spaces.len()];
        let family = families[i % families.len()];
        let (map, _) = random_ball_map_with(dom, codom, family, 3, MapConstraints::default(), rng)?;
        let radius = 0.9 * rng.random::<f64>();
        let z: Vec<C<f64>> = dom.ball_sample(radius, rng);
        let exact = map.derivatives(&z);
        let fd = fd_derivatives(&map, &z, 1e-5);
        let mut worst = (0.0f64, C::new(0.0, 0.0), C::new(0.0, 0.0));
        for (e, f) in exact.dh.data.iter().chain(&exact.dg.data).zip(fd.dh.data.iter().chain(&fd.dg.data)) {
            let d = (e - f).norm();
            if d >= worst.0 {
                worst = (d, *f, *e);
            }
        }
        let mut r = OracleReport::new(
            "derivative entry",
            worst.1.norm(),
            worst.2.norm(),
            format!("central differences h=1e-5, {}→{}", dom.label(), codom.label()),
        );
        r.abs_error = worst.0;
        reports.push(r);
    }
    Ok(GateResult::from_reports("derivatives", DERIVATIVE_GATE_TOL, reports, false))
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat<f64> {
    let mut m = CMat::zeros(rows, cols);
    for x in m.data.iter_mut() {
        *x = C::new(rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal));
    }
    m
}

fn operator_norm_gate(count: usize, rng: &mut ChaCha8Rng) -> Result<GateResult> {
    let mut reports = Vec::with_capacity(2 * count);
    for i in 0..count {
        let (n, m) = (1 + i % 3, 1 + (i / 3) % 3);
        let (dom, codom) = (Space::euclidean(n), Space::euclidean(m));
        let a = gaussian_matrix(m, n, rng);
        let b = gaussian_matrix(m, n, rng);
        let seed = rng.random();
        let lin = LinearMap::new(a.clone(), dom.clone(), codom.clone())?;
        let primary = lin.operator_norm().value;
        reports.push(OracleReport::new("operator norm", numeric_operator_norm(&lin, 256, seed), primary, "256 samples + 64 power steps"));
        let real = RealLinearMap::new(a, b, dom, codom)?;
        let primary = real.norm().value;
        reports.push(OracleReport::new(
            "real operator norm",
            numeric_real_operator_norm(&real, 256, seed),
            primary,
            "256 samples + 64 power steps",
        ));
    }
    Ok(GateResult::from_reports("operator_norms", OPERATOR_NORM_GATE_TOL, reports, true))
}

fn bergman_gate() -> Result<GateResult> {
    let systems = [
        TripleSystem::hilbert_ball(1)?,
        TripleSystem::hilbert_ball(2)?,
        TripleSystem::hilbert_ball(3)?,
        TripleSystem::polydisc(2)?,
        TripleSystem::product_of_balls(&[2, 1])?,
    ];
    let mut reports = Vec::new();
    for sys in &systems {
        let hess = numeric_bergman_hessian0(sys);
        let n = sys.dim();
        for i in 0..n {
            for j in 0..n {
                let (ei, ej) = (crate::scalar::basis::<f64>(n, i), crate::scalar::basis::<f64>(n, j));
                let primary = sys.h0(&ei, &ej)?;
                let mut r = OracleReport::new(
                    format!("h0(e{i}, e{j}) on {}", sys.label()),
                    hess[(i, j)].re,
                    primary.re,
                    format!("4th-order differences of log K, step {BERGMAN_STEP}"),
                );
                r.abs_error = (hess[(i, j)] - primary).norm();
                reports.push(r);
            }
        }
    }
    Ok(GateResult::from_reports("bergman_metric", BERGMAN_GATE_TOL, reports, false))
}

fn radial_gate() -> Result<GateResult> {
    let mut reports = Vec::new();
    let setups = [
        ExtremalSetup::basic(Space::euclidean(1), Space::euclidean(1), C::new(0.4, 0.0), 0.3),
        ExtremalSetup::basic(Space::euclidean(2), Space::euclidean(2), C::new(0.2, -0.3), 0.6),
        {
            let mut s = ExtremalSetup::basic(Space::sup(2), Space::sup(2), C::new(0.5, 0.1), 0.5);
            s.y = vec![C::new(1.0, 0.0), C::new(0.0, 1.0)];
            s.sys = Some(TripleSystem::polydisc(2)?);
            s
        },
    ];
    for setup in &setups {
        for id in [TheoremId::T2_4, TheoremId::T3_3, TheoremId::T2_6, TheoremId::T2_5, TheoremId::T3_5] {
            let (map, b) = match extremal(id, setup) {
                Ok(Instance::Boundary { map, b }) => (map, b),
                Ok(Instance::Pairing { map, alpha, .. }) => (map, alpha),
                _ => continue,
            };
            let exact = map.radial_derivative(&b);
            let numeric = radial_richardson(map.as_ref(), &b);
            let diff = exact.iter().zip(&numeric).map(|(a, c)| (a - c).norm()).fold(0.0, f64::max);
            let mut r = OracleReport::new(
                format!("radial derivative of the {id} extremal on {}", setup.dom.label()),
                crate::scalar::euclid(&numeric),
                crate::scalar::euclid(&exact),
                "Richardson over r = 1 - 2^-j, j = 4..12",
            );
            r.abs_error = diff;
            reports.push(r);
        }
    }
    Ok(GateResult::from_reports("radial_derivatives", RADIAL_GATE_TOL, reports, false))
}

/// Runs every oracle gate with a fixed seed.
pub fn run_gates(seed: u64, sizes: GateSizes) -> Result<Vec<GateResult>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(vec![
        derivative_gate(sizes.derivatives, &mut rng)?,
        operator_norm_gate(sizes.operator_norms, &mut rng)?,
        bergman_gate()?,
        radial_gate()?,
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{PluriharmonicMap, Terms};

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn disc_map(h: &[(u32, C<f64>)], g: &[(u32, C<f64>)]) -> PluriharmonicMap<f64> {
        let terms = |t: &[(u32, C<f64>)]| -> Terms<f64> { t.iter().map(|&(p, c)| (vec![p], vec![c])).collect() };
        PluriharmonicMap::new(Space::euclidean(1), Space::euclidean(1), terms(h), terms(g)).unwrap()
    }

    #[test]
    fn finite_differences_of_simple_maps() {
        let id = disc_map(&[(1, c(1.0, 0.0))], &[]);
        let d = fd_derivatives(&id, &[c(0.2, 0.1)], 1e-5);
        assert!((d.dh[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10 && d.dg[(0, 0)].norm() < 1e-10);
        let sq = disc_map(&[(2, c(1.0, 0.0))], &[]);
        let d = fd_derivatives(&sq, &[c(0.5, 0.0)], 1e-5);
        assert!((d.dh[(0, 0)] - c(1.0, 0.0)).norm() < 1e-9);
        let conj = disc_map(&[], &[(1, c(1.0, 0.0))]);
        let d = fd_derivatives(&conj, &[c(0.1, -0.3)], 1e-5);
        assert!((d.dg[(0, 0)] - c(1.0, 0.0)).norm() < 1e-10 && d.dh[(0, 0)].norm() < 1e-10);
    }

    #[test]
    #[should_panic(expected = "outside")]
    fn step_outside_range_panics() {
        let id = disc_map(&[(1, c(1.0, 0.0))], &[]);
        fd_derivatives(&id, &[c(0.0, 0.0)], 1e-2);
    }

    #[test]
    fn sampled_operator_norms() {
        let e2 = Space::<f64>::euclidean(2);
        let id = LinearMap::new(CMat::identity(2), e2.clone(), e2.clone()).unwrap();
        assert!((numeric_operator_norm(&id, 16, 1) - 1.0).abs() < 1e-12);
        let mut d = CMat::zeros(2, 2);
        d[(0, 0)] = c(2.0, 0.0);
        d[(1, 1)] = c(0.5, 0.0);
        let diag = LinearMap::new(d, e2.clone(), e2.clone()).unwrap();
        assert!((numeric_operator_norm(&diag, 10_000, 2) - 2.0).abs() < 1e-4);
        let shear =
            LinearMap::new(CMat::from_rows(&[vec![c(1.0, 0.0), c(1.0, 0.0)], vec![c(0.0, 0.0), c(1.0, 0.0)]]), e2.clone(), e2).unwrap();
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        let est = numeric_operator_norm(&shear, 1000, 3);
        assert!(est <= golden + 1e-12 && golden - est < 1e-3);
        // Non-Euclidean pairs use the random ascent and stay below the truth.
        let sup = Space::<f64>::sup(2);
        let l1 = LinearMap::new(CMat::identity(2), sup, Space::one(2)).unwrap();
        let est = numeric_operator_norm(&l1, 2000, 4);
        assert!(est <= 2.0 + 1e-12 && est > 1.9);
    }

    #[test]
    fn bergman_hessians() {
        let disc = TripleSystem::hilbert_ball(1).unwrap();
        let v = numeric_bergman_metric0(&disc, &[c(1.0, 0.0)], &[c(1.0, 0.0)]).unwrap();
        assert!((v - c(2.0, 0.0)).norm() < 1e-6);
        let b2 = TripleSystem::hilbert_ball(2).unwrap();
        let e1 = [c(1.0, 0.0), c(0.0, 0.0)];
        let e2 = [c(0.0, 0.0), c(1.0, 0.0)];
        assert!(numeric_bergman_metric0(&b2, &e1, &e2).unwrap().norm() < 1e-8);
        assert!((numeric_bergman_metric0(&b2, &e1, &e1).unwrap() - c(3.0, 0.0)).norm() < 1e-6);
        let mixed = [c(0.3, 0.4), c(-0.2, 0.7)];
        let other = [c(0.1, -0.5), c(0.6, 0.2)];
        let num = numeric_bergman_metric0(&b2, &mixed, &other).unwrap();
        assert!((num - b2.h0(&mixed, &other).unwrap()).norm() < 1e-6);
        assert!(numeric_bergman_metric0(&b2, &e1[..1], &e2).is_err());
    }

    #[test]
    fn c_constants() {
        for n in 1..=3 {
            let ball = TripleSystem::hilbert_ball(n).unwrap();
            assert!((numeric_c_constant(&ball, 16, 5) - (n as f64 + 1.0) / 2.0).abs() < 1e-4);
            let poly = TripleSystem::polydisc(n).unwrap();
            assert!((numeric_c_constant(&poly, 16, 5) - n as f64).abs() < 1e-4);
        }
    }

    #[test]
    fn richardson_on_polynomials() {
        let f = disc_map(&[(3, c(0.5, 0.0)), (1, c(0.25, 0.0))], &[(2, c(0.25, 0.0))]);
        let b = [c(0.6, 0.8)];
        let exact = f.radial_derivative(&b);
        let num = radial_richardson(&f, &b);
        assert!((exact[0] - num[0]).norm() < 1e-9, "{exact:?} {num:?}");
    }

    #[test]
    fn univalent_radii() {
        let grid = MeshGrid::default();
        let step = 1.0 / grid.radial as f64;
        let id = disc_map(&[(1, c(1.0, 0.0))], &[]);
        let r = univalent_radius_1d(&id, c(0.0, 0.0), grid).unwrap();
        assert!((r - 1.0).abs() <= 2.0 * step, "{r}");
        let shear = disc_map(&[(1, c(1.0 / 1.5, 0.0))], &[(1, c(0.5 / 1.5, 0.0))]);
        let r = univalent_radius_1d(&shear, c(0.0, 0.0), grid).unwrap();
        assert!((r - 0.5 / 1.5).abs() <= 2.0 * 1.5 / 1.5 * step, "{r}");
        let sq = disc_map(&[(2, c(1.0, 0.0))], &[]);
        let r = univalent_radius_1d(&sq, c(0.5, 0.0), grid).unwrap();
        assert!(r > 0.0 && r <= 0.25 + 1e-12, "{r}");
    }

    #[test]
    fn gates_pass_on_a_small_run() {
        let gates = run_gates(3, GateSizes { derivatives: 100, operator_norms: 20 }).unwrap();
        for g in &gates {
            assert!(g.passed, "{g:?}");
            assert!(g.checks > 0);
        }
    }
}
