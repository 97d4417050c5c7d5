use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{CheckReport, TheoremId};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::mappings::{lambda0, nabla_norm, omega, Mapping, SUPPORT_ZERO_THRESHOLD};
use crate::scalar::{inner, lit, scale_vec, sub_vec, to_f64, tol, zeros, Real, C};
use crate::spaces::{LinearMap, NormEstimate, NormKind, RealLinearMap, Space};
use crate::symmetric::TripleSystem;

/// Points at which the dilatation bound is sampled before a quasiregular check.
pub const OMEGA_SAMPLES: usize = 64;
const BOUNDARY_TOL: f64 = 1e-9;
const OMEGA_SEED: u64 = 0x0e6a_5eed;

/// The codomain pairing used by the boundary checks at a point `β`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "pairing", rename_all = "snake_case")]
pub enum PairingTarget {
    /// `h₀(x, β)/(2c)` on a bounded symmetric domain.
    Triple { sys: TripleSystem },
    /// `⟨x, β⟩` on the Euclidean ball.
    Hilbert,
}

fn four_over_pi<T: Real>() -> T {
    lit::<T>(4.0) / T::PI()
}

fn norm_of<T: Real>(space: &Space<T>, v: &[C<T>]) -> T {
    space.complexified().norm_unchecked(v)
}

fn flag_estimate<T: Real>(flags: &mut Vec<String>, what: &str, e: &NormEstimate<T>) -> T {
    if e.lower_bound_only {
        flags.push(format!("lower_bound_only:{what}"));
    }
    e.value
}

fn require_certificate<T: Real>(map: &dyn Mapping<T>) -> Result<()> {
    match map.certificate() {
        Some(c) if c.sup_bound <= T::one() + tol(1e-12) => Ok(()),
        Some(c) => Err(Error::Hypothesis(format!("ball certificate {} exceeds 1", to_f64(c.sup_bound)))),
        None => Err(Error::Hypothesis("map has no ball certificate".into())),
    }
}

fn require_holomorphic<T: Real>(id: TheoremId, map: &dyn Mapping<T>) -> Result<()> {
    if map.is_holomorphic() {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{id} needs a holomorphic map")))
    }
}

fn value_at_origin<T: Real>(map: &dyn Mapping<T>) -> (Vec<C<T>>, T) {
    let f0 = map.eval(&zeros(map.dom().dim));
    let n = norm_of(map.codom(), &f0);
    (f0, n)
}

fn require_vanishing<T: Real>(id: TheoremId, map: &dyn Mapping<T>) -> Result<()> {
    let (_, n) = value_at_origin(map);
    if n > tol(SUPPORT_ZERO_THRESHOLD) {
        return Err(Error::Hypothesis(format!("{id} needs f(0) = 0, got ‖f(0)‖ = {}", to_f64(n))));
    }
    Ok(())
}

fn interior_norm<T: Real>(space: &Space<T>, z: &[C<T>]) -> Result<T> {
    let n = space.norm(z)?;
    if n >= T::one() {
        return Err(Error::OutsideBall { norm: to_f64(n) });
    }
    Ok(n)
}

fn unit_norm<T: Real>(space: &Space<T>, b: &[C<T>]) -> Result<()> {
    let n = space.norm(b)?;
    if (n - T::one()).abs() > tol(1e-12) {
        return Err(Error::NotOnSphere { norm: to_f64(n) });
    }
    Ok(())
}

/// Whether the domain is the unit ball of a triple system in the library:
/// a Hilbert ball, a polydisc or a max-product of balls.
fn is_symmetric_domain<T: Real>(space: &Space<T>) -> bool {
    !space.real_restricted && matches!(space.kind, NormKind::Euclidean | NormKind::Sup | NormKind::Product { .. })
}

fn require_euclidean_codomain<T: Real>(id: TheoremId, map: &dyn Mapping<T>) -> Result<()> {
    if matches!(map.codom().kind, NormKind::Euclidean) {
        Ok(())
    } else {
        Err(Error::Hypothesis(format!("{id} needs a Euclidean codomain")))
    }
}

/// Growth bounds at an interior point `z`.
pub fn interior_bound<T: Real>(id: TheoremId, map: &dyn Mapping<T>, z: &[C<T>], tolerance: f64) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    let x = interior_norm(map.dom(), z)?;
    if matches!(id, T2_1 | T2_2 | HARRIS) {
        require_holomorphic(id, map)?;
    }
    if matches!(id, T2_2 | T3_2) {
        require_vanishing(id, map)?;
    }
    let cod = map.codom();
    let (f0, a) = value_at_origin(map);
    let fz = map.eval(z);
    let one = T::one();
    let mut flags = Vec::new();
    let (lhs, rhs) = match id {
        T2_1 => (norm_of(cod, &fz), (a + x) / (one + a * x)),
        T2_2 => {
            let d = map.derivatives(&zeros(map.dom().dim));
            let cod_c = cod.complexified();
            let est = RealLinearMap::new(d.dh, CMat::zeros(cod.dim, map.dom().dim), map.dom().clone(), cod_c)?.norm();
            // A low estimate of ‖Df(0)‖ only shrinks the bound.
            let nd = flag_estimate(&mut flags, "norm_df0", &est);
            (norm_of(cod, &fz), (nd + x) / (one + nd * x) * x)
        }
        HARRIS => {
            if map.dom().dim != 1 || cod.dim != 1 {
                return Err(Error::Hypothesis("HARRIS is a one-variable bound".into()));
            }
            (norm_of(cod, &sub_vec(&fz, &f0)), x * (one - a * a) / (one - a * x))
        }
        T3_1 => {
            let damp = (one - x * x) / (one + x * x);
            let shifted = sub_vec(&fz, &scale_vec(&f0, C::new(damp, T::zero())));
            (norm_of(cod, &shifted), four_over_pi::<T>() * x.atan())
        }
        T3_2 => {
            let rhs = if x == T::zero() {
                T::zero()
            } else {
                let w = scale_vec(z, C::new(one / x, T::zero()));
                let est = lambda0(map, &w)?;
                // The bound increases with Λ, so a low estimate is conservative.
                let lam = flag_estimate(&mut flags, "lambda", &est) * T::PI() / lit(4.0);
                four_over_pi::<T>() * ((x + lam) / (one + lam * x) * x).atan()
            };
            (norm_of(cod, &fz), rhs)
        }
        _ => return Err(Error::InvalidParameter(format!("{id} is not an interior bound"))),
    };
    Ok(CheckReport::upper(id, lhs, rhs, tolerance, flags))
}

fn check_boundary_value<T: Real>(map: &dyn Mapping<T>, b: &[C<T>]) -> Result<Vec<C<T>>> {
    let fb = map.eval(b);
    let n = norm_of(map.codom(), &fb);
    if (n - T::one()).abs() > tol(BOUNDARY_TOL) {
        return Err(Error::BoundaryHypothesis(format!("‖f(b)‖ = {} ≠ 1", to_f64(n))));
    }
    Ok(fb)
}

/// Lower bounds for the radial derivative `‖Df(b)b‖` at a boundary point
/// where `‖f(b)‖ = 1`.
pub fn boundary_bound<T: Real>(id: TheoremId, map: &dyn Mapping<T>, b: &[C<T>], tolerance: f64) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    unit_norm(map.dom(), b)?;
    check_boundary_value(map, b)?;
    if matches!(id, T2_4 | T3_4) {
        require_vanishing(id, map)?;
    }
    if id == T2_4 {
        require_holomorphic(id, map)?;
    }
    let cod = map.codom();
    let lhs = norm_of(cod, &map.radial_derivative(b));
    let (_, a) = value_at_origin(map);
    let one = T::one();
    let two = lit::<T>(2.0);
    let mut flags = Vec::new();
    let rhs = match id {
        T2_4 => {
            let d = map.derivatives(&zeros(map.dom().dim));
            let est = LinearMap::new(d.dh, map.dom().clone(), cod.complexified())?.operator_norm();
            // A low estimate of ‖Df(0)‖ raises the bound, so it can only fail spuriously.
            let nd = flag_estimate(&mut flags, "norm_df0", &est);
            two / (one + nd)
        }
        T3_3 => (two / T::PI() - a).max((one - a) / two),
        T3_4 => {
            let lam = lambda0(map, b)?.require_exact("Λ in a lower bound")?;
            four_over_pi::<T>() / (one + T::PI() / lit(4.0) * lam)
        }
        _ => return Err(Error::InvalidParameter(format!("{id} is not a boundary bound"))),
    };
    Ok(CheckReport::lower(id, lhs, rhs, tolerance, flags))
}

/// Boundary bounds for the pairing of the radial derivative with the
/// boundary value `β = f(α)`.
pub fn pairing_boundary_bound<T: Real>(
    id: TheoremId,
    target: &PairingTarget,
    map: &dyn Mapping<T>,
    alpha: &[C<T>],
    beta: &[C<T>],
    tolerance: f64,
) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    let cod = map.codom();
    let pair: Box<dyn Fn(&[C<T>]) -> Result<C<T>>> = match (id, target) {
        (T2_5 | T3_5, PairingTarget::Triple { sys }) => {
            if cod.real_restricted || *cod != sys.space::<T>() {
                return Err(Error::Hypothesis(format!("codomain {} is not the ball of {}", cod.label(), sys.label())));
            }
            if !sys.is_maximal_tripotent(beta) {
                return Err(Error::NotMaximalTripotent);
            }
            let sys = sys.clone();
            let beta = beta.to_vec();
            Box::new(move |x: &[C<T>]| sys.pairing(x, &beta))
        }
        (T2_6 | T3_6, PairingTarget::Hilbert) => {
            if cod.real_restricted || !matches!(cod.kind, NormKind::Euclidean) {
                return Err(Error::Hypothesis(format!("{id} needs a complex Euclidean codomain")));
            }
            unit_norm(cod, beta)?;
            let beta = beta.to_vec();
            Box::new(move |x: &[C<T>]| Ok(inner(x, &beta)))
        }
        _ => return Err(Error::InvalidParameter(format!("{id} does not pair with {target:?}"))),
    };
    unit_norm(map.dom(), alpha)?;
    let fa = map.eval(alpha);
    let gap = crate::scalar::euclid(&sub_vec(&fa, beta));
    if gap > tol(BOUNDARY_TOL) {
        return Err(Error::BoundaryHypothesis(format!("f(α) misses β by {}", to_f64(gap))));
    }
    let one = T::one();
    let mut flags = Vec::new();
    let paired = pair(&map.radial_derivative(alpha))?;
    let rhs = match id {
        T2_5 | T2_6 => {
            require_holomorphic(id, map)?;
            if paired.im.abs() >= lit(1e-8) {
                flags.push(format!("imaginary_part:{:e}", to_f64(paired.im)));
            }
            let (f0, _) = value_at_origin(map);
            let a = pair(&f0)?;
            let d = map.derivatives(&zeros(map.dom().dim));
            let slope = norm_of(cod, &d.dh.mul_vec(alpha));
            lit::<T>(2.0) * (C::new(one, T::zero()) - a).norm_sqr() / (one - a.norm_sqr() + slope)
        }
        T3_5 | T3_6 => {
            require_vanishing(id, map)?;
            let lam = lambda0(map, alpha)?.require_exact("Λ in a lower bound")?;
            four_over_pi::<T>() / (one + T::PI() / lit(4.0) * lam)
        }
        _ => unreachable!("matched above"),
    };
    Ok(CheckReport::lower(id, paired.re, rhs, tolerance, flags))
}

/// Gradient-of-norm bounds at an interior point.
pub fn gradient_bound<T: Real>(id: TheoremId, map: &dyn Mapping<T>, z0: &[C<T>], tolerance: f64) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    let x = interior_norm(map.dom(), z0)?;
    let cod = map.codom();
    match id {
        T3_7 | T3_8A | T3_8B => {
            if !is_symmetric_domain(map.dom()) {
                return Err(Error::Hypothesis(format!("{id} needs the ball of a triple system as domain")));
            }
        }
        P3_9 => require_euclidean_codomain(id, map)?,
        _ => return Err(Error::InvalidParameter(format!("{id} is not a gradient bound"))),
    }
    let fz = map.eval(z0);
    if matches!(id, T3_8A | T3_8B) {
        if !cod.real_restricted {
            return Err(Error::Hypothesis(format!("{id} needs a real codomain")));
        }
        cod.check(&fz)?;
    }
    let nf = norm_of(cod, &fz);
    if nf > tol(SUPPORT_ZERO_THRESHOLD) && !cod.norm_differentiable_at(&fz, 1e-9) {
        return Err(Error::Hypothesis("the codomain norm is not differentiable at f(z0)".into()));
    }
    let mut flags = Vec::new();
    // An underestimated left side could hide a violation; the flag records it.
    let lhs = flag_estimate(&mut flags, "nabla", &nabla_norm(map, z0)?);
    let one = T::one();
    let denom = one - x * x;
    let rhs = match id {
        T3_7 => four_over_pi::<T>() / denom,
        T3_8A => four_over_pi::<T>() * (one - nf * nf) / denom,
        T3_8B => four_over_pi::<T>() * (T::FRAC_PI_2() * nf).cos() / denom,
        P3_9 => {
            let d = map.derivatives(z0);
            let cod_c = cod.complexified();
            let nh = LinearMap::new(d.dh, map.dom().clone(), cod_c.clone())?.operator_norm();
            let ng = LinearMap::new(d.dg, map.dom().clone(), cod_c)?.operator_norm();
            flag_estimate(&mut flags, "norm_dh", &nh) + flag_estimate(&mut flags, "norm_dg", &ng)
        }
        _ => unreachable!("matched above"),
    };
    Ok(CheckReport::upper(id, lhs, rhs, tolerance, flags))
}

fn product_blocks<T: Real>(id: TheoremId, map: &dyn Mapping<T>) -> Result<Vec<(usize, usize)>> {
    let dom = map.dom();
    if dom.real_restricted {
        return Err(Error::Hypothesis(format!("{id} needs a complex domain")));
    }
    match (&dom.kind, dom.euclidean_blocks()) {
        (NormKind::Euclidean | NormKind::Sup | NormKind::Product { .. }, Some(b)) => Ok(b),
        _ => Err(Error::Hypothesis(format!("{id} needs a product of Euclidean balls as domain"))),
    }
}

/// Sums of squared Wirtinger derivatives on a product of balls into the
/// Euclidean ball.
pub fn directional_sum_bound<T: Real>(
    id: TheoremId,
    map: &dyn Mapping<T>,
    z: &[C<T>],
    directions: Option<&[Vec<C<T>>]>,
    tolerance: f64,
) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    let blocks = product_blocks(id, map)?;
    require_euclidean_codomain(id, map)?;
    let x = interior_norm(map.dom(), z)?;
    let d = map.derivatives(z);
    let n = map.dom().dim;
    let sq = |v: &[C<T>]| -> T {
        let a = crate::scalar::euclid(&d.dh.mul_vec(v));
        let b = crate::scalar::euclid(&d.dg.mul_vec(v));
        a * a + b * b
    };
    let (lhs, factor) = match (id, directions) {
        (T3_10, Some(dirs)) => {
            if dirs.len() != blocks.len() {
                return Err(Error::DimensionMismatch { expected: blocks.len(), got: dirs.len() });
            }
            let mut total = T::zero();
            for (&(s, l), w) in blocks.iter().zip(dirs) {
                if w.len() != l {
                    return Err(Error::DimensionMismatch { expected: l, got: w.len() });
                }
                let nw = crate::scalar::euclid(w);
                if (nw - T::one()).abs() > tol(1e-12) {
                    return Err(Error::InvalidParameter(format!("direction has norm {} in its factor", to_f64(nw))));
                }
                let mut full = zeros(n);
                full[s..s + l].copy_from_slice(w);
                total = total + sq(&full);
            }
            (total, T::one())
        }
        (C3_11, None) => {
            let f = d.dh.frobenius();
            let g = d.dg.frobenius();
            let kappa = blocks.iter().map(|b| b.1).max().expect("nonempty");
            (f * f + g * g, lit(kappa as f64))
        }
        (T3_10 | C3_11, _) => return Err(Error::InvalidParameter(format!("{id} got the wrong kind of directions"))),
        _ => return Err(Error::InvalidParameter(format!("{id} is not a directional bound"))),
    };
    let nf = norm_of(map.codom(), &map.eval(z));
    let denom = T::one() - x * x;
    let rhs = factor * (T::one() - nf * nf) / (denom * denom);
    Ok(CheckReport::upper(id, lhs, rhs, tolerance, Vec::new()))
}

/// Frobenius-norm and quasiregular bounds into the Euclidean ball.
pub fn frobenius_quasiregular_bound<T: Real>(
    id: TheoremId,
    map: &dyn Mapping<T>,
    z: &[C<T>],
    k: Option<T>,
    tolerance: f64,
) -> Result<CheckReport> {
    use TheoremId::*;
    require_certificate(map)?;
    require_euclidean_codomain(id, map)?;
    let dom = map.dom();
    let x = interior_norm(dom, z)?;
    let d = map.derivatives(z);
    let fh = d.dh.frobenius();
    let fg = d.dg.frobenius();
    let two = lit::<T>(2.0);
    let one = T::one();
    let nf = norm_of(map.codom(), &map.eval(z));
    let denom = one - x * x;
    let mut flags = Vec::new();
    let cod_c = map.codom().complexified();
    let report = match id {
        P3_12 => {
            if !matches!(dom.kind, NormKind::Euclidean) || dom.real_restricted {
                return Err(Error::Hypothesis("P3_12 needs a Euclidean domain".into()));
            }
            let sh = d.dh.spectral_norm();
            let sg = d.dg.spectral_norm();
            let m = lit::<T>(dom.dim as f64);
            let lhs = (two * (fh * fh + fg * fg)).sqrt();
            CheckReport::upper(id, lhs, (two * m * (sh * sh + sg * sg)).sqrt(), tolerance, flags)
        }
        C3_13 => {
            let blocks = product_blocks(id, map)?;
            let kappa = lit::<T>(blocks.iter().map(|b| b.1).max().expect("nonempty") as f64);
            let lhs = two * (fh * fh + fg * fg);
            CheckReport::upper(id, lhs, two * kappa * (one - nf * nf) / (denom * denom), tolerance, flags)
        }
        T3_14 => {
            if !is_symmetric_domain(dom) {
                return Err(Error::Hypothesis("T3_14 needs the ball of a triple system as domain".into()));
            }
            if dom.dim != map.codom().dim {
                return Err(Error::DimensionMismatch { expected: dom.dim, got: map.codom().dim });
            }
            let k = k.ok_or_else(|| Error::InvalidParameter("T3_14 needs a dilatation bound k".into()))?;
            if !(k >= T::zero() && k < one) {
                return Err(Error::InvalidParameter(format!("k = {k} must lie in [0, 1)")));
            }
            let worst = sampled_dilatation(map, z)?;
            if worst > k * (one + tol(1e-12)) + tol(1e-12) {
                return Err(Error::Hypothesis(format!("‖ω_f‖ ≤ k unverified: sampled {} > {}", to_f64(worst), to_f64(k))));
            }
            let nh = LinearMap::new(d.dh.clone(), dom.clone(), cod_c.clone())?.operator_norm();
            let ng = LinearMap::new(d.dg.clone(), dom.clone(), cod_c)?.operator_norm();
            let lhs = flag_estimate(&mut flags, "norm_dh", &nh) + flag_estimate(&mut flags, "norm_dg", &ng);
            let big_k = (one + k) / (one - k);
            let factor = two * big_k / (two * (big_k * big_k + one)).sqrt();
            CheckReport::upper(id, lhs, factor * (one - nf * nf).max(T::zero()).sqrt() / denom, tolerance, flags)
        }
        _ => return Err(Error::InvalidParameter(format!("{id} is not a Frobenius or quasiregular bound"))),
    };
    Ok(report)
}

/// Largest `‖ω_f‖` (Euclidean operator norm) over `z` and a fixed set of
/// sample points of the ball.
fn sampled_dilatation<T: Real>(map: &dyn Mapping<T>, z: &[C<T>]) -> Result<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(OMEGA_SEED);
    let mut worst = omega(map, z)?.spectral_norm();
    for _ in 0..OMEGA_SAMPLES {
        let p = map.dom().ball_sample(lit(0.999), &mut rng);
        worst = worst.max(omega(map, &p)?.spectral_norm());
    }
    Ok(worst)
}

/// The multiplier in `Df(z₀)* w₀ = λ z₀` at a boundary point of a map
/// between Euclidean balls.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AdjointLambda<T> {
    pub lambda: T,
    /// `‖Df(z₀)* w₀ − λ z₀‖`.
    pub collinearity_error: T,
    /// `λ − max{2/π − ‖f(0)‖, (1 − Re⟨f(0), w₀⟩)/2}`.
    pub bound_residual: T,
    pub bound: T,
}

pub fn boundary_adjoint_lambda<T: Real>(map: &dyn Mapping<T>, z0: &[C<T>], w0: &[C<T>]) -> Result<AdjointLambda<T>> {
    for s in [map.dom(), map.codom()] {
        if s.real_restricted || !matches!(s.kind, NormKind::Euclidean) {
            return Err(Error::Hypothesis("the adjoint bound needs complex Euclidean balls".into()));
        }
    }
    unit_norm(map.dom(), z0)?;
    unit_norm(map.codom(), w0)?;
    let gap = crate::scalar::euclid(&sub_vec(&map.eval(z0), w0));
    if gap > tol(BOUNDARY_TOL) {
        return Err(Error::BoundaryHypothesis(format!("f(z0) misses w0 by {}", to_f64(gap))));
    }
    let adj = map.derivatives(z0).adjoint_apply(w0);
    let lambda = inner(&adj, z0).re;
    let collinearity_error = crate::scalar::euclid(&sub_vec(&adj, &scale_vec(z0, C::new(lambda, T::zero()))));
    let (f0, nf0) = value_at_origin(map);
    let two = lit::<T>(2.0);
    let bound = (two / T::PI() - nf0).max((T::one() - inner(&f0, w0).re) / two);
    Ok(AdjointLambda { lambda, collinearity_error, bound_residual: lambda - bound, bound })
}

/// [`boundary_adjoint_lambda`] as a check report; a collinearity error
/// above `10⁻⁸` is recorded as a flag.
pub fn boundary_adjoint_check<T: Real>(map: &dyn Mapping<T>, z0: &[C<T>], w0: &[C<T>], tolerance: f64) -> Result<CheckReport> {
    let r = boundary_adjoint_lambda(map, z0, w0)?;
    let mut flags = Vec::new();
    if r.collinearity_error > lit(1e-8) {
        flags.push(format!("collinearity_error:{:e}", to_f64(r.collinearity_error)));
    }
    Ok(CheckReport::lower(TheoremId::S5_LAMBDA, r.lambda, r.bound, tolerance, flags))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{PluriharmonicMap, Profile, SliceMap, Terms};
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn disc() -> Space<f64> {
        Space::euclidean(1)
    }

    fn monomial(power: u32, coef: C<f64>) -> Terms<f64> {
        let mut t = Terms::new();
        t.insert(vec![power], vec![coef]);
        t
    }

    fn identity() -> PluriharmonicMap<f64> {
        PluriharmonicMap::new(disc(), disc(), monomial(1, c(1.0, 0.0)), Terms::new()).unwrap()
    }

    fn square() -> PluriharmonicMap<f64> {
        PluriharmonicMap::new(disc(), disc(), monomial(2, c(1.0, 0.0)), Terms::new()).unwrap()
    }

    #[test]
    fn schwarz_equality_for_the_identity() {
        let r = interior_bound(TheoremId::T2_1, &identity(), &[c(0.3, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 0.3).abs() < 1e-15 && (r.rhs - 0.3).abs() < 1e-15 && r.residual.abs() < 1e-15);
    }

    #[test]
    fn lindelof_extremal_is_sharp() {
        let f = SliceMap::through(disc(), disc(), &[c(1.0, 0.0)], vec![c(1.0, 0.0)], Profile::Mobius { a: c(0.4, 0.0) }).unwrap();
        let r = interior_bound(TheoremId::T2_1, &f, &[c(0.3, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 0.625).abs() < 1e-15);
        assert!(r.residual.abs() < 1e-10);
        let h = interior_bound(TheoremId::HARRIS, &f, &[c(-0.3, 0.0)], 1e-9).unwrap();
        assert!(h.residual.abs() < 1e-12);
    }

    #[test]
    fn interior_hypotheses() {
        let mut g = Terms::new();
        g.insert(vec![1], vec![c(0.5, 0.0)]);
        let f = PluriharmonicMap::new(disc(), disc(), monomial(1, c(0.4, 0.0)), g).unwrap();
        assert!(matches!(interior_bound(TheoremId::T2_1, &f, &[c(0.3, 0.0)], 1e-9), Err(Error::Hypothesis(_))));
        assert!(matches!(interior_bound(TheoremId::T2_1, &identity(), &[c(1.0, 0.0)], 1e-9), Err(Error::OutsideBall { .. })));
        let shifted = PluriharmonicMap::new(
            disc(),
            disc(),
            {
                let mut t = monomial(1, c(0.5, 0.0));
                t.insert(vec![0], vec![c(0.2, 0.0)]);
                t
            },
            Terms::new(),
        )
        .unwrap();
        assert!(matches!(interior_bound(TheoremId::T2_2, &shifted, &[c(0.3, 0.0)], 1e-9), Err(Error::Hypothesis(_))));
        let big = PluriharmonicMap::new(disc(), disc(), monomial(1, c(1.5, 0.0)), Terms::new()).unwrap();
        assert!(matches!(interior_bound(TheoremId::T2_1, &big, &[c(0.3, 0.0)], 1e-9), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn heinz_surrogate_meets_the_arctan_bound() {
        let f = SliceMap::through(disc(), disc(), &[c(1.0, 0.0)], vec![c(1.0, 0.0)], Profile::Heinz).unwrap();
        for r in [0.1, 0.5, 0.9] {
            let rep = interior_bound(TheoremId::T3_1, &f, &[c(r, 0.0)], 1e-9).unwrap();
            assert!((rep.lhs - 4.0 / PI * f64::atan(r)).abs() < 1e-14);
            assert!(rep.residual.abs() < 1e-14);
            let rep2 = interior_bound(TheoremId::T3_2, &f, &[c(r, 0.0)], 1e-9).unwrap();
            assert!(rep2.residual.abs() < 1e-13, "{rep2:?}");
        }
    }

    #[test]
    fn boundary_examples() {
        let r = boundary_bound(TheoremId::T2_4, &identity(), &[c(1.0, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let r = boundary_bound(TheoremId::T2_4, &square(), &[c(1.0, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 2.0).abs() < 1e-15 && (r.rhs - 2.0).abs() < 1e-15);
        let o = SliceMap::through(disc(), disc(), &[c(1.0, 0.0)], vec![c(1.0, 0.0)], Profile::Osserman { r: 0.5 }).unwrap();
        let r = boundary_bound(TheoremId::T2_4, &o, &[c(1.0, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 4.0 / 3.0).abs() < 1e-14 && r.residual.abs() < 1e-10);
        let r = boundary_bound(TheoremId::T3_3, &identity(), &[c(1.0, 0.0)], 1e-9).unwrap();
        assert!((r.rhs - 2.0 / PI).abs() < 1e-15 && r.passed());
        let half = PluriharmonicMap::new(disc(), disc(), monomial(1, c(0.5, 0.0)), Terms::new()).unwrap();
        assert!(matches!(boundary_bound(TheoremId::T3_3, &half, &[c(1.0, 0.0)], 1e-9), Err(Error::BoundaryHypothesis(_))));
    }

    #[test]
    fn pairing_identity_on_the_disc() {
        let sys = TripleSystem::polydisc(1).unwrap();
        let f = PluriharmonicMap::new(Space::euclidean(1), Space::sup(1), monomial(1, c(1.0, 0.0)), Terms::new()).unwrap();
        let r = pairing_boundary_bound(TheoremId::T2_5, &PairingTarget::Triple { sys }, &f, &[c(1.0, 0.0)], &[c(1.0, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let r = pairing_boundary_bound(TheoremId::T2_6, &PairingTarget::Hilbert, &identity(), &[c(1.0, 0.0)], &[c(1.0, 0.0)], 1e-9);
        assert!(r.unwrap().residual.abs() < 1e-15);
        let wrong = pairing_boundary_bound(
            TheoremId::T2_5,
            &PairingTarget::Triple { sys: TripleSystem::polydisc(1).unwrap() },
            &PluriharmonicMap::new(Space::euclidean(1), Space::sup(1), monomial(1, c(0.5, 0.0)), Terms::new()).unwrap(),
            &[c(1.0, 0.0)],
            &[c(0.5, 0.0)],
            1e-9,
        );
        assert_eq!(wrong, Err(Error::NotMaximalTripotent));
    }

    #[test]
    fn gradient_examples() {
        // (2/π)(arctan ζ + conj arctan ζ) has gradient (2/π)(ζ + conj ζ) at 0.
        let f = SliceMap::through(disc(), Space::real_euclidean(1), &[c(1.0, 0.0)], vec![c(1.0, 0.0)], Profile::Heinz).unwrap();
        let r = gradient_bound(TheoremId::T3_7, &f, &[c(0.0, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 4.0 / PI).abs() < 1e-14 && r.residual.abs() < 1e-14);
        let constant =
            PluriharmonicMap::new(disc(), Space::real_euclidean(1), monomial(0, c(0.25, 0.0)), monomial(0, c(0.25, 0.0))).unwrap();
        let r = gradient_bound(TheoremId::T3_8A, &constant, &[c(0.4, 0.1)], 1e-9).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert!(r.passed());
        let r = gradient_bound(TheoremId::P3_9, &identity(), &[c(0.2, 0.0)], 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        assert!(matches!(gradient_bound(TheoremId::T3_8A, &identity(), &[c(0.2, 0.0)], 1e-9), Err(Error::Hypothesis(_))));
        let one_dom = PluriharmonicMap::new(
            Space::one(2),
            disc(),
            {
                let mut t = Terms::new();
                t.insert(vec![1, 0], vec![c(0.5, 0.0)]);
                t
            },
            Terms::new(),
        )
        .unwrap();
        assert!(matches!(gradient_bound(TheoremId::T3_7, &one_dom, &[c(0.1, 0.0), c(0.0, 0.0)], 1e-9), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn colonna_extremal_at_its_zero() {
        let r0 = 0.5;
        let f = SliceMap::through(
            disc(),
            Space::real_euclidean(1),
            &[c(1.0, 0.0)],
            vec![c(1.0, 0.0)],
            Profile::Colonna { r: r0, gamma: c(1.0, 0.0) },
        )
        .unwrap();
        for id in [TheoremId::T3_7, TheoremId::T3_8A, TheoremId::T3_8B] {
            let r = gradient_bound(id, &f, &[c(r0, 0.0)], 1e-9).unwrap();
            assert!(r.residual.abs() < 1e-12, "{id}: {r:?}");
        }
    }

    #[test]
    fn directional_examples() {
        let r = directional_sum_bound(TheoremId::T3_10, &identity(), &[c(0.0, 0.0)], Some(&[vec![c(1.0, 0.0)]]), 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        let bad = directional_sum_bound(TheoremId::T3_10, &identity(), &[c(0.0, 0.0)], Some(&[vec![c(0.5, 0.0)]]), 1e-9);
        assert!(matches!(bad, Err(Error::InvalidParameter(_))));
        assert!(directional_sum_bound(TheoremId::C3_11, &identity(), &[c(0.1, 0.0)], None, 1e-9).unwrap().passed());
    }

    #[test]
    fn frobenius_examples() {
        let m = 3;
        let eye = PluriharmonicMap::linear(Space::euclidean(m), Space::euclidean(m), &CMat::identity(m), &CMat::zeros(m, m))
            .unwrap()
            .with_certificate(crate::mappings::BallCertificate { sup_bound: 1.0, method: "unitary".into() });
        let z = vec![c(0.0, 0.0); m];
        let r = frobenius_quasiregular_bound(TheoremId::P3_12, &eye, &z, None, 1e-9).unwrap();
        assert!((r.lhs - (2.0 * m as f64).sqrt()).abs() < 1e-14 && r.residual.abs() < 1e-14);
        let r = frobenius_quasiregular_bound(TheoremId::T3_14, &identity(), &[c(0.0, 0.0)], Some(0.0), 1e-9).unwrap();
        assert!((r.lhs - 1.0).abs() < 1e-15 && (r.rhs - 1.0).abs() < 1e-15);
        // z + k conj(z) scaled into the disc, with k = 0.5 and K = 3.
        let (k, s) = (0.5, 0.6);
        let f = PluriharmonicMap::new(disc(), disc(), monomial(1, c(s, 0.0)), monomial(1, c(s * k, 0.0))).unwrap();
        let r = frobenius_quasiregular_bound(TheoremId::T3_14, &f, &[c(0.0, 0.0)], Some(k), 1e-9).unwrap();
        assert!((r.rhs - 6.0 / 20f64.sqrt()).abs() < 1e-14 && r.passed());
        let err = frobenius_quasiregular_bound(TheoremId::T3_14, &f, &[c(0.0, 0.0)], Some(0.3), 1e-9);
        assert!(matches!(err, Err(Error::Hypothesis(_))));
    }

    #[test]
    fn adjoint_examples() {
        let one = [c(1.0, 0.0)];
        let r = boundary_adjoint_lambda(&identity(), &one, &one).unwrap();
        assert!((r.lambda - 1.0).abs() < 1e-15 && r.collinearity_error < 1e-15);
        assert!((r.bound_residual - (1.0 - 2.0 / PI)).abs() < 1e-15);
        assert!((boundary_adjoint_lambda(&square(), &one, &one).unwrap().lambda - 2.0).abs() < 1e-15);
        let heinz = SliceMap::through(disc(), disc(), &one, vec![c(1.0, 0.0)], Profile::Heinz).unwrap();
        let r = boundary_adjoint_lambda(&heinz, &one, &one).unwrap();
        assert!((r.lambda - 2.0 / PI).abs() < 1e-15 && r.bound_residual.abs() < 1e-15);
    }
}
