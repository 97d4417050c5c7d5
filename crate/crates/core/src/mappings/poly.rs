use std::collections::BTreeMap;

use super::{BallCertificate, DerivPair, Mapping};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{to_f64, zeros, Real, C};
use crate::spaces::Space;

/// Exponent vector `α` of a monomial `z^α`.
pub type MultiIndex = Vec<u32>;

/// Monomial coefficients: `Σ_α c_α z^α` with `c_α` a codomain vector.
pub type Terms<T> = BTreeMap<MultiIndex, Vec<C<T>>>;

/// Polynomial pluriharmonic map `f(z) = h(z) + conj(g(z))`.
#[derive(Clone, Debug, PartialEq)]
pub struct PluriharmonicMap<T> {
    dom: Space<T>,
    codom: Space<T>,
    h: Terms<T>,
    g: Terms<T>,
    certificate: Option<BallCertificate<T>>,
}

impl<T: Real> PluriharmonicMap<T> {
    /// Builds a map, checking every exponent and coefficient length.
    ///
    /// A real codomain requires `g = h`, which makes `f = 2 Re h` real.
    pub fn new(dom: Space<T>, codom: Space<T>, h: Terms<T>, g: Terms<T>) -> Result<Self> {
        for (alpha, c) in h.iter().chain(g.iter()) {
            if alpha.len() != dom.dim {
                return Err(Error::DimensionMismatch { expected: dom.dim, got: alpha.len() });
            }
            if c.len() != codom.dim {
                return Err(Error::DimensionMismatch { expected: codom.dim, got: c.len() });
            }
        }
        if codom.real_restricted && h != g {
            return Err(Error::NotReal);
        }
        Ok(Self { dom, codom, h, g, certificate: None })
    }

    /// `z ↦ A z + conj(B z)`.
    pub fn linear(dom: Space<T>, codom: Space<T>, a: &CMat<T>, b: &CMat<T>) -> Result<Self> {
        let mut h = Terms::new();
        let mut g = Terms::new();
        for j in 0..a.cols {
            let mut alpha = vec![0; dom.dim];
            alpha[j] = 1;
            if !column_is_zero(a, j) {
                h.insert(alpha.clone(), a.column(j));
            }
            if !column_is_zero(b, j) {
                g.insert(alpha, b.column(j));
            }
        }
        if a.rows != codom.dim {
            return Err(Error::DimensionMismatch { expected: codom.dim, got: a.rows });
        }
        Self::new(dom, codom, h, g)
    }

    pub fn dom_space(&self) -> &Space<T> {
        &self.dom
    }

    pub fn h(&self) -> &Terms<T> {
        &self.h
    }

    pub fn g(&self) -> &Terms<T> {
        &self.g
    }

    /// Attaches a certificate known from the construction, replacing the
    /// coefficient-sum bound.
    pub fn with_certificate(mut self, cert: BallCertificate<T>) -> Self {
        self.certificate = Some(cert);
        self
    }

    pub fn degree(&self) -> u32 {
        self.h.keys().chain(self.g.keys()).map(|a| a.iter().sum()).max().unwrap_or(0)
    }

    /// `Σ_α ‖h_α‖ + ‖g_α‖`, an upper bound for `‖f‖` on the closed unit
    /// ball since every monomial has modulus at most one there.
    ///
    /// Only valid when each coordinate of a ball point has modulus at most one,
    /// which holds for every norm in [`Space`] since all dominate the sup norm.
    pub fn coefficient_sup_bound(&self) -> BallCertificate<T> {
        let cod = self.codom.complexified();
        let s: T = self.h.values().chain(self.g.values()).map(|c| cod.norm_unchecked(c)).sum();
        BallCertificate { sup_bound: s, method: "coefficient_sum".into() }
    }

    /// The holomorphic part `h` as its own map.
    pub fn holomorphic_part(&self) -> Self {
        Self { dom: self.dom.clone(), codom: self.codom.complexified(), h: self.h.clone(), g: Terms::new(), certificate: None }
    }
}

fn column_is_zero<T: Real>(m: &CMat<T>, j: usize) -> bool {
    (0..m.rows).all(|i| m[(i, j)].re == T::zero() && m[(i, j)].im == T::zero())
}

/// `z_j^e` for every coordinate and exponent up to `max`.
fn power_table<T: Real>(z: &[C<T>], max: u32) -> Vec<Vec<C<T>>> {
    z.iter()
        .map(|&x| {
            let mut p = Vec::with_capacity(max as usize + 1);
            let mut acc = C::new(T::one(), T::zero());
            for _ in 0..=max {
                p.push(acc);
                acc = acc * x;
            }
            p
        })
        .collect()
}

fn monomial<T: Real>(pow: &[Vec<C<T>>], alpha: &[u32]) -> C<T> {
    alpha.iter().enumerate().fold(C::new(T::one(), T::zero()), |acc, (j, &e)| acc * pow[j][e as usize])
}

pub(crate) fn eval_terms<T: Real>(terms: &Terms<T>, pow: &[Vec<C<T>>], out: usize) -> Vec<C<T>> {
    let mut v = zeros(out);
    for (alpha, c) in terms {
        let m = monomial(pow, alpha);
        for (vi, ci) in v.iter_mut().zip(c) {
            *vi = *vi + ci * m;
        }
    }
    v
}

pub(crate) fn jacobian_terms<T: Real>(terms: &Terms<T>, pow: &[Vec<C<T>>], n_in: usize, n_out: usize) -> CMat<T> {
    let mut d = CMat::zeros(n_out, n_in);
    for (alpha, c) in terms {
        for j in 0..n_in {
            if alpha[j] == 0 {
                continue;
            }
            let mut a = alpha.clone();
            a[j] -= 1;
            let m = monomial(pow, &a) * T::from_u32(alpha[j]).expect("small exponent");
            for i in 0..n_out {
                d[(i, j)] = d[(i, j)] + c[i] * m;
            }
        }
    }
    d
}

impl<T: Real> Mapping<T> for PluriharmonicMap<T> {
    fn dom(&self) -> &Space<T> {
        &self.dom
    }

    fn codom(&self) -> &Space<T> {
        &self.codom
    }

    fn eval(&self, z: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(z.len(), self.dom.dim, "point dimension");
        let pow = power_table(z, self.degree());
        let h = eval_terms(&self.h, &pow, self.codom.dim);
        let g = eval_terms(&self.g, &pow, self.codom.dim);
        h.iter().zip(&g).map(|(a, b)| a + b.conj()).collect()
    }

    fn derivatives(&self, z: &[C<T>]) -> DerivPair<T> {
        assert_eq!(z.len(), self.dom.dim, "point dimension");
        let pow = power_table(z, self.degree());
        DerivPair {
            dh: jacobian_terms(&self.h, &pow, self.dom.dim, self.codom.dim),
            dg: jacobian_terms(&self.g, &pow, self.dom.dim, self.codom.dim),
        }
    }

    fn is_holomorphic(&self) -> bool {
        self.g.values().all(|c| c.iter().all(|x| x.re == T::zero() && x.im == T::zero()))
    }

    fn certificate(&self) -> Option<BallCertificate<T>> {
        Some(self.certificate.clone().unwrap_or_else(|| self.coefficient_sup_bound()))
    }

    fn describe(&self) -> serde_json::Value {
        let json = super::MapJson::from_map(self);
        let mut v = serde_json::to_value(json).expect("map JSON");
        if let Some(c) = &self.certificate {
            v["certificate"] = serde_json::json!({ "sup_bound": to_f64(c.sup_bound), "method": c.method });
        }
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::basis;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    /// f(z1, z2) = (z1² + conj(i z2), z1 z2)
    fn sample() -> PluriharmonicMap<f64> {
        let mut h = Terms::new();
        h.insert(vec![2, 0], vec![c(1.0, 0.0), c(0.0, 0.0)]);
        h.insert(vec![1, 1], vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let mut g = Terms::new();
        g.insert(vec![0, 1], vec![c(0.0, 1.0), c(0.0, 0.0)]);
        PluriharmonicMap::new(Space::euclidean(2), Space::euclidean(2), h, g).unwrap()
    }

    #[test]
    fn evaluates_by_hand() {
        let f = sample();
        let z = vec![c(0.5, 0.1), c(-0.2, 0.3)];
        let v = f.eval(&z);
        let expect0 = z[0] * z[0] + (c(0.0, 1.0) * z[1]).conj();
        assert!((v[0] - expect0).norm() < 1e-15);
        assert!((v[1] - z[0] * z[1]).norm() < 1e-15);
    }

    #[test]
    fn derivatives_by_hand() {
        let f = sample();
        let z = vec![c(0.5, 0.1), c(-0.2, 0.3)];
        let d = f.derivatives(&z);
        assert!((d.dh[(0, 0)] - z[0] * 2.0).norm() < 1e-15);
        assert!((d.dh[(1, 0)] - z[1]).norm() < 1e-15);
        assert!((d.dh[(1, 1)] - z[0]).norm() < 1e-15);
        assert_eq!(d.dg[(0, 1)], c(0.0, 1.0));
        // Df v for v = e2 adds conj(i).
        let dv = d.apply(&basis(2, 1));
        assert!((dv[0] - c(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_bad_shapes_and_nonreal_targets() {
        let mut h = Terms::new();
        h.insert(vec![1], vec![c(1.0, 0.0)]);
        assert!(PluriharmonicMap::new(Space::euclidean(2), Space::euclidean(1), h.clone(), Terms::new()).is_err());
        assert_eq!(PluriharmonicMap::new(Space::euclidean(1), Space::real_euclidean(1), h.clone(), Terms::new()), Err(Error::NotReal));
        let f = PluriharmonicMap::new(Space::euclidean(1), Space::real_euclidean(1), h.clone(), h).unwrap();
        let v = f.eval(&[c(0.3, 0.4)]);
        assert_eq!(v[0].im, 0.0);
        assert_eq!(v[0].re, 0.6);
    }

    #[test]
    fn certificate_is_coefficient_sum() {
        let f = sample();
        assert_eq!(f.certificate().unwrap().sup_bound, 3.0);
        assert!(!f.is_holomorphic());
        assert!(f.holomorphic_part().is_holomorphic());
    }
}
