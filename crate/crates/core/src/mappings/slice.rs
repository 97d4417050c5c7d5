use serde::{Deserialize, Serialize};

use super::{BallCertificate, DerivPair, Mapping};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{lit, to_f64, Real, C};
use crate::spaces::Space;

/// A one-variable profile `ψ = p + conj(q)` with `p`, `q` holomorphic near
/// the closed disc (or at least near the points where it is evaluated).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum Profile<T> {
    /// Disc automorphism `(ζ + a)/(1 + conj(a) ζ)`, `|a| < 1`.
    Mobius { a: C<T> },
    /// `ζ(ζ + r)/(1 + rζ)`, `r ∈ [0, 1]`.
    Osserman { r: T },
    /// Holomorphic self-map of the disc with `φ(0) = a`, `|φ'(0)| = |b|` and
    /// `φ(1) = 1`, for `|b| ≤ 1 − |a|²`.
    Boundary { a: C<T>, b: T },
    /// `(4/π) Re arctan ζ`.
    Heinz,
    /// `(2/π) Im(γ · 2 artanh((ζ − r)/(1 − rζ)))` for real `r ∈ (−1, 1)` and unimodular `γ`.
    Colonna { r: T, gamma: C<T> },
}

/// Values and first derivatives of `p` and `q` at a point.
#[derive(Clone, Copy, Debug)]
pub struct ProfileJet<T> {
    pub p: C<T>,
    pub dp: C<T>,
    pub q: C<T>,
    pub dq: C<T>,
}

impl<T: Real> Profile<T> {
    /// Rejects parameters outside the admissible range.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParameter(m));
        match self {
            Profile::Mobius { a } if !(a.norm() < T::one()) => bad(format!("|a| = {} must be < 1", a.norm())),
            Profile::Osserman { r } if !(*r >= T::zero() && *r <= T::one()) => bad(format!("r = {r} must lie in [0, 1]")),
            Profile::Boundary { a, b } => {
                if !(a.norm() < T::one()) {
                    bad(format!("|a| = {} must be < 1", a.norm()))
                } else if !(*b >= T::zero() && *b <= T::one() - a.norm_sqr()) {
                    bad(format!("|b| = {b} must lie in [0, 1 − |a|²]"))
                } else {
                    Ok(())
                }
            }
            Profile::Colonna { r, gamma } => {
                if !(r.abs() < T::one()) {
                    bad(format!("r = {r} must lie in (−1, 1)"))
                } else if (gamma.norm() - T::one()).abs() > lit(1e-12) {
                    bad("gamma must be unimodular".into())
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    /// Whether `q ≡ 0`.
    pub fn is_holomorphic(&self) -> bool {
        matches!(self, Profile::Mobius { .. } | Profile::Osserman { .. } | Profile::Boundary { .. })
    }

    /// Whether `ψ` takes only real values.
    pub fn is_real(&self) -> bool {
        matches!(self, Profile::Heinz) || matches!(self, Profile::Colonna { gamma, .. } if gamma.im == T::zero())
    }

    pub fn jet(&self, z: C<T>) -> ProfileJet<T> {
        let one = C::new(T::one(), T::zero());
        let zero = C::new(T::zero(), T::zero());
        let pi = T::PI();
        match *self {
            Profile::Mobius { a } => {
                let d = one + a.conj() * z;
                let p = (z + a) / d;
                let dp = C::new(T::one() - a.norm_sqr(), T::zero()) / (d * d);
                ProfileJet { p, dp, q: zero, dq: zero }
            }
            Profile::Osserman { r } => {
                let d = one + z * r;
                let p = z * (z + r) / d;
                let dp = (z * z * r + z * lit::<T>(2.0) + r) / (d * d);
                ProfileJet { p, dp, q: zero, dq: zero }
            }
            Profile::Boundary { a, b } => {
                let s = T::one() - a.norm_sqr();
                let gamma = (one - a) / (one - a).conj();
                // A(ζ) = ζ(sζ + b)/(s + bζ), then the automorphism sending 0 to a.
                let den = z * b + s;
                let big = z * (z * s + b) / den;
                let dbig = (z * z * (s * b) + z * (s * s * lit::<T>(2.0)) + s * b) / (den * den);
                let w = gamma * big;
                let m = one + a.conj() * w;
                let p = (w + a) / m;
                let dp = gamma * dbig * s / (m * m);
                ProfileJet { p, dp, q: zero, dq: zero }
            }
            Profile::Heinz => {
                let k = lit::<T>(2.0) / pi;
                let p = z.atan() * k;
                let dp = one * k / (one + z * z);
                ProfileJet { p, dp, q: p, dq: dp }
            }
            Profile::Colonna { r, gamma } => {
                let d = one - z * r;
                let phi = (z - r) / d;
                let dphi = C::new(T::one() - r * r, T::zero()) / (d * d);
                let big = phi.atanh() * lit::<T>(2.0);
                let dbig = dphi * lit::<T>(2.0) / (one - phi * phi);
                let ipi = C::new(T::zero(), pi);
                ProfileJet { p: gamma * big / ipi, dp: gamma * dbig / ipi, q: gamma.conj() * big / ipi, dq: gamma.conj() * dbig / ipi }
            }
        }
    }

    /// `ψ(ζ) = p(ζ) + conj(q(ζ))`.
    pub fn value(&self, z: C<T>) -> C<T> {
        let j = self.jet(z);
        j.p + j.q.conj()
    }
}

/// `f(z) = ψ(l(z))·y` for a profile `ψ`, a functional `l(z) = Σ c_j z_j`
/// and a codomain vector `y`.
///
/// With `ψ = p + conj(q)`, the holomorphic parts are `h = p(l(z))·y` and
/// `g = q(l(z))·conj(y)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SliceMap<T> {
    dom: Space<T>,
    codom: Space<T>,
    functional: Vec<C<T>>,
    vector: Vec<C<T>>,
    profile: Profile<T>,
}

impl<T: Real> SliceMap<T> {
    /// Builds the map. `functional` must have dual norm at most one and
    /// `vector` norm at most one, so that `‖f‖ ≤ sup|ψ|` on the ball.
    pub fn new(dom: Space<T>, codom: Space<T>, functional: Vec<C<T>>, vector: Vec<C<T>>, profile: Profile<T>) -> Result<Self> {
        profile.validate()?;
        if functional.len() != dom.dim {
            return Err(Error::DimensionMismatch { expected: dom.dim, got: functional.len() });
        }
        codom.check(&vector)?;
        if codom.real_restricted && !profile.is_real() {
            return Err(Error::NotReal);
        }
        let slack = T::one() + lit(1e-12);
        let dn = dom.dual_norm(&functional);
        if dn > slack {
            return Err(Error::InvalidParameter(format!("functional has dual norm {dn} > 1")));
        }
        let yn = codom.norm_unchecked(&vector);
        if yn > slack {
            return Err(Error::OutsideBall { norm: to_f64(yn) });
        }
        Ok(Self { dom, codom, functional, vector, profile })
    }

    /// The slice through the unit vector `w`: `l` is the support functional of `w`.
    pub fn through(dom: Space<T>, codom: Space<T>, w: &[C<T>], vector: Vec<C<T>>, profile: Profile<T>) -> Result<Self> {
        let l = dom.support_functional(w)?;
        Self::new(dom, codom, l.coefficients, vector, profile)
    }

    pub fn profile(&self) -> &Profile<T> {
        &self.profile
    }

    pub fn functional(&self) -> &[C<T>] {
        &self.functional
    }

    pub fn vector(&self) -> &[C<T>] {
        &self.vector
    }

    fn slice_point(&self, z: &[C<T>]) -> C<T> {
        assert_eq!(z.len(), self.dom.dim, "point dimension");
        self.functional.iter().zip(z).fold(C::new(T::zero(), T::zero()), |s, (c, x)| s + c * x)
    }
}

fn pair<T: Real>(v: &[C<T>]) -> Vec<[f64; 2]> {
    v.iter().map(|x| [to_f64(x.re), to_f64(x.im)]).collect()
}

impl<T: Real> Mapping<T> for SliceMap<T> {
    fn dom(&self) -> &Space<T> {
        &self.dom
    }

    fn codom(&self) -> &Space<T> {
        &self.codom
    }

    fn eval(&self, z: &[C<T>]) -> Vec<C<T>> {
        let psi = self.profile.value(self.slice_point(z));
        let v: Vec<C<T>> = self.vector.iter().map(|y| y * psi).collect();
        if self.codom.real_restricted {
            v.iter().map(|x| C::new(x.re, T::zero())).collect()
        } else {
            v
        }
    }

    fn derivatives(&self, z: &[C<T>]) -> DerivPair<T> {
        let j = self.profile.jet(self.slice_point(z));
        let yc: Vec<C<T>> = self.vector.iter().map(|y| y.conj()).collect();
        DerivPair { dh: CMat::outer(&self.vector, &self.functional).scale(j.dp), dg: CMat::outer(&yc, &self.functional).scale(j.dq) }
    }

    fn is_holomorphic(&self) -> bool {
        self.profile.is_holomorphic()
    }

    /// `sup|ψ| ≤ 1` on the disc for every profile, and `|l(z)| < 1` on the ball.
    fn certificate(&self) -> Option<BallCertificate<T>> {
        Some(BallCertificate { sup_bound: self.codom.norm_unchecked(&self.vector), method: "closed_form".into() })
    }

    fn describe(&self) -> serde_json::Value {
        let profile = serde_json::to_value(self.profile.clone_f64()).expect("profile JSON");
        serde_json::json!({
            "kind": "slice",
            "dom": serde_json::to_value(self.dom.cast::<f64>()).expect("space JSON"),
            "codom": serde_json::to_value(self.codom.cast::<f64>()).expect("space JSON"),
            "functional": pair(&self.functional),
            "vector": pair(&self.vector),
            "profile": profile,
        })
    }
}

impl<T: Real> Profile<T> {
    fn clone_f64(&self) -> Profile<f64> {
        let c = |z: C<T>| C::new(to_f64(z.re), to_f64(z.im));
        match *self {
            Profile::Mobius { a } => Profile::Mobius { a: c(a) },
            Profile::Osserman { r } => Profile::Osserman { r: to_f64(r) },
            Profile::Boundary { a, b } => Profile::Boundary { a: c(a), b: to_f64(b) },
            Profile::Heinz => Profile::Heinz,
            Profile::Colonna { r, gamma } => Profile::Colonna { r: to_f64(r), gamma: c(gamma) },
        }
    }
}
