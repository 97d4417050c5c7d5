use super::{CheckReport, TheoremId};
use crate::error::{Error, Result};
use crate::linalg::{real_linear_form, CMat};
use crate::scalar::{lit, to_f64, Real};
use crate::symmetric::TripleSystem;

fn check_k<T: Real>(k: T) -> Result<()> {
    if k >= T::zero() && k < T::one() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("dilatation bound {k} must lie in [0, 1)")))
    }
}

/// `μ_k(x) = 1 + k[1/x + (1 − 1/x²) ln(1 + x)]`, continued by `1 + k/2` at 0.
pub fn mu_k<T: Real>(k: T, x: T) -> Result<T> {
    check_k(k)?;
    if !(x >= T::zero() && x <= T::one()) {
        return Err(Error::InvalidParameter(format!("x = {x} must lie in [0, 1]")));
    }
    let bracket = if x < lit(0.25) {
        // Alternating series; the closed form cancels catastrophically near 0.
        let mut sum = lit::<T>(0.5);
        let mut power = T::one();
        let mut sign = T::one();
        for m in 1..200u32 {
            power = power * x;
            let mf = lit::<T>(m as f64);
            let term = lit::<T>(2.0) * power / (mf * (mf + lit(2.0)));
            sum = sum + sign * term;
            sign = -sign;
            if term <= T::epsilon() * sum {
                break;
            }
        }
        sum
    } else {
        T::one() / x + (T::one() - T::one() / (x * x)) * x.ln_1p()
    };
    Ok(T::one() + k * bracket)
}

/// Checks `1 − k ≤ μ_k(x) ≤ 1 + k`; the residual is the smaller margin.
pub fn mu_bound<T: Real>(k: T, x: T, tolerance: f64) -> Result<CheckReport> {
    let mu = mu_k(k, x)?;
    let one = T::one();
    let residual = (one + k - mu).min(mu - (one - k));
    Ok(CheckReport::new(TheoremId::T2_3_MU, mu, one + k, residual, tolerance, Vec::new()))
}

fn smallest_singular_value<T: Real>(a: &CMat<T>, b: &CMat<T>) -> T {
    real_linear_form(a, b).singular_values().into_iter().fold(T::infinity(), T::min)
}

/// Builds `f(z) = Uz + k·conj(Uz)` on a Hilbert ball and compares the
/// smallest stretch of `Df` against that of its holomorphic part; the
/// ratio is exactly `1 − k`.
pub fn bloch_ratio_extremal<T: Real>(k: T, sys: &TripleSystem, u: &CMat<T>, tolerance: f64) -> Result<CheckReport> {
    check_k(k)?;
    if !matches!(sys, TripleSystem::HilbertBall { .. }) {
        return Err(Error::InvalidParameter(format!("the extremal is built on a Hilbert ball, not {}", sys.label())));
    }
    let n = sys.dim();
    if u.rows != n || u.cols != n {
        return Err(Error::DimensionMismatch { expected: n, got: u.rows.max(u.cols) });
    }
    let defect = u.adjoint().mul(u).sub(&CMat::identity(n)).max_abs();
    if defect > lit(1e-12) {
        return Err(Error::NonUnitary { defect: to_f64(defect) });
    }
    let dg = u.scale(crate::scalar::creal(k));
    let omega = dg.mul(&u.inverse()?).spectral_norm();
    if (omega - k).abs() > lit(1e-12) {
        return Err(Error::Hypothesis(format!("dilatation {} differs from k = {}", to_f64(omega), to_f64(k))));
    }
    let full = smallest_singular_value(u, &dg);
    let holo = smallest_singular_value(u, &CMat::zeros(n, n));
    let lhs = full / holo;
    Ok(CheckReport::lower(TheoremId::T2_3_EXTREMAL, lhs, T::one() - k, tolerance, Vec::new()))
}
