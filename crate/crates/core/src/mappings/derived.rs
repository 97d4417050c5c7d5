use super::Mapping;
use crate::error::{Error, Result};
use crate::linalg::{CMat, RMat};
use crate::scalar::{to_f64, tol, zeros, Real, C};
use crate::spaces::{sphere_sup, NormEstimate, NormKind, RealLinearMap, Space, SphereSearch};

/// Values with norm at or below this are treated as zero when choosing
/// between the two branches of [`nabla_norm`].
pub const SUPPORT_ZERO_THRESHOLD: f64 = 1e-12;

fn check_in_ball<T: Real>(space: &Space<T>, z: &[C<T>]) -> Result<()> {
    let n = space.norm(z)?;
    if n >= T::one() {
        return Err(Error::OutsideBall { norm: to_f64(n) });
    }
    Ok(())
}

pub(crate) fn check_on_sphere<T: Real>(space: &Space<T>, w: &[C<T>], t: f64) -> Result<()> {
    let n = space.norm(w)?;
    if (n - T::one()).abs() > tol::<T>(t) {
        return Err(Error::NotOnSphere { norm: to_f64(n) });
    }
    Ok(())
}

/// Norm of the gradient of `‖f‖` at `z0`.
///
/// When `f(z0) ≠ 0` this is the norm of `β ↦ l(Df(z0)β)` for the support
/// functional `l` of `f(z0)`; at a zero of `f` it is the operator norm of the
/// real differential.
pub fn nabla_norm<T: Real>(map: &dyn Mapping<T>, z0: &[C<T>]) -> Result<NormEstimate<T>> {
    let dom = map.dom();
    check_in_ball(dom, z0)?;
    let cod = map.codom().complexified();
    let fz = map.eval(z0);
    let d = map.derivatives(z0);
    if cod.norm_unchecked(&fz) <= tol::<T>(SUPPORT_ZERO_THRESHOLD) {
        return Ok(d.real_linear(dom, &cod).norm());
    }
    let l = cod.support_functional(&fz)?;
    let n = dom.dim;
    let mut a = CMat::zeros(1, n);
    let mut b = CMat::zeros(1, n);
    for j in 0..n {
        for (i, c) in l.coefficients.iter().enumerate() {
            a[(0, j)] = a[(0, j)] + c * d.dh[(i, j)];
            b[(0, j)] = b[(0, j)] + c.conj() * d.dg[(i, j)];
        }
    }
    Ok(RealLinearMap::new(a, b, dom.clone(), Space::euclidean(1))?.norm())
}

/// Size of the first-order part of `f` at the origin along a unit vector
/// `w`: the best holomorphic slope plus the best antiholomorphic slope over
/// all norm-one functionals of the codomain.
///
/// For a complex codomain both suprema are attained, giving
/// `‖Dh(0)w‖ + ‖Dg(0)w‖`. A real Euclidean codomain has its own closed form;
/// other real codomains fall back to [`lambda0_sampled`].
pub fn lambda0<T: Real>(map: &dyn Mapping<T>, w: &[C<T>]) -> Result<NormEstimate<T>> {
    check_on_sphere(map.dom(), w, 1e-12)?;
    let d = map.derivatives(&zeros(map.dom().dim));
    let a = d.dh.mul_vec(w);
    let b = d.dg.mul_vec(w);
    let cod = map.codom();
    if !cod.real_restricted {
        return Ok(NormEstimate::exact(cod.norm_unchecked(&a) + cod.norm_unchecked(&b)));
    }
    if matches!(cod.kind, NormKind::Euclidean) {
        // Real functionals see a complex vector through its real and imaginary parts.
        let part = |v: &[C<T>]| {
            let mut m = RMat::zeros(v.len(), 2);
            for (i, x) in v.iter().enumerate() {
                m[(i, 0)] = x.re;
                m[(i, 1)] = x.im;
            }
            m.spectral_norm()
        };
        return Ok(NormEstimate::exact(part(&a) + part(&b)));
    }
    lambda0_sampled(map, w, &SphereSearch::default())
}

/// The same quantity as [`lambda0`], estimated by searching the codomain
/// sphere for the best support functionals. Always a lower bound.
pub fn lambda0_sampled<T: Real>(map: &dyn Mapping<T>, w: &[C<T>], search: &SphereSearch) -> Result<NormEstimate<T>> {
    check_on_sphere(map.dom(), w, 1e-12)?;
    let d = map.derivatives(&zeros(map.dom().dim));
    let a = d.dh.mul_vec(w);
    let b: Vec<C<T>> = d.dg.mul_vec(w).iter().map(|x| x.conj()).collect();
    let cod = map.codom();
    let best = |v: &[C<T>]| {
        let f = |u: &[C<T>]| match cod.support_functional(u) {
            Ok(l) => l.eval(v).norm(),
            Err(_) => T::zero(),
        };
        sphere_sup(cod, &f, search).0
    };
    Ok(NormEstimate::lower(best(&a) + best(&b)))
}

/// Complex dilatation `Dg(z) Dh(z)⁻¹`.
pub fn omega<T: Real>(map: &dyn Mapping<T>, z: &[C<T>]) -> Result<CMat<T>> {
    map.dom().check(z)?;
    if map.dom().dim != map.codom().dim {
        return Err(Error::DimensionMismatch { expected: map.dom().dim, got: map.codom().dim });
    }
    let d = map.derivatives(z);
    let inv = d.dh.inverse_checked(1e12)?;
    Ok(d.dg.mul(&inv))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mappings::{PluriharmonicMap, Terms};

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn linear(a: CMat<f64>, b: CMat<f64>, dom: Space<f64>, cod: Space<f64>) -> PluriharmonicMap<f64> {
        PluriharmonicMap::linear(dom, cod, &a, &b).unwrap()
    }

    #[test]
    fn nabla_of_identity_on_the_disc() {
        let f = linear(CMat::identity(1), CMat::zeros(1, 1), Space::euclidean(1), Space::euclidean(1));
        let v = nabla_norm(&f, &[c(0.3, 0.2)]).unwrap();
        assert!((v.value - 1.0).abs() < 1e-14 && !v.lower_bound_only);
        let v0 = nabla_norm(&f, &[c(0.0, 0.0)]).unwrap();
        assert!((v0.value - 1.0).abs() < 1e-14);
    }

    #[test]
    fn nabla_of_harmonic_shear() {
        // f(z) = z + k conj(z): at 0 the real differential stretches by 1 + k.
        let k = 0.4;
        let f = linear(CMat::identity(1), CMat::identity(1).scale(c(k, 0.0)), Space::euclidean(1), Space::euclidean(1));
        assert!((nabla_norm(&f, &[c(0.0, 0.0)]).unwrap().value - (1.0 + k)).abs() < 1e-14);
        // Away from 0 the gradient of |f| is |f_z + conj(f_zbar)·phase| maximized, again 1 + k.
        assert!((nabla_norm(&f, &[c(0.2, 0.1)]).unwrap().value - (1.0 + k)).abs() < 1e-9);
        assert!(nabla_norm(&f, &[c(1.0, 0.0)]).is_err());
    }

    #[test]
    fn lambda0_closed_forms() {
        let a = CMat::from_rows(&[vec![c(0.3, 0.0), c(0.0, 0.1)], vec![c(0.0, 0.2), c(0.1, 0.1)]]);
        let b = CMat::from_rows(&[vec![c(0.1, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(0.2, 0.0)]]);
        let w = vec![c(0.6, 0.0), c(0.0, 0.8)];
        for cod in [Space::euclidean(2), Space::sup(2), Space::one(2)] {
            let f = linear(a.clone(), b.clone(), Space::euclidean(2), cod.clone());
            let exact = lambda0(&f, &w).unwrap();
            assert!(!exact.lower_bound_only);
            let expect = cod.norm(&a.mul_vec(&w)).unwrap() + cod.norm(&b.mul_vec(&w)).unwrap();
            assert!((exact.value - expect).abs() < 1e-15);
            let sampled = lambda0_sampled(&f, &w, &SphereSearch::default()).unwrap();
            assert!(sampled.value <= exact.value + 1e-12);
            assert!(exact.value - sampled.value < 1e-3, "{cod:?}: {} vs {}", exact.value, sampled.value);
        }
    }

    #[test]
    fn lambda0_real_target() {
        // f = 2 Re(i z) on the disc into ℝ: φ_ζ(0) = i, so each slope is 1.
        let mut h = Terms::new();
        h.insert(vec![1], vec![c(0.0, 1.0)]);
        let f = PluriharmonicMap::new(Space::euclidean(1), Space::real_euclidean(1), h.clone(), h).unwrap();
        let v = lambda0(&f, &[c(1.0, 0.0)]).unwrap();
        assert!((v.value - 2.0).abs() < 1e-15);
        assert!(lambda0(&f, &[c(0.5, 0.0)]).is_err());
    }

    #[test]
    fn omega_of_a_shear() {
        let k = c(0.3, 0.1);
        let f = linear(CMat::identity(2), CMat::identity(2).scale(k), Space::euclidean(2), Space::euclidean(2));
        let w = omega(&f, &[c(0.1, 0.0), c(0.0, 0.1)]).unwrap();
        assert!(w.sub(&CMat::identity(2).scale(k)).max_abs() < 1e-15);
        let degenerate = linear(CMat::zeros(2, 2), CMat::identity(2), Space::euclidean(2), Space::euclidean(2));
        assert!(matches!(omega(&degenerate, &[c(0.0, 0.0), c(0.0, 0.0)]), Err(Error::Singular { .. })));
    }
}
