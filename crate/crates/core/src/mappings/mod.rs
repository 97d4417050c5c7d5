//! Pluriharmonic maps `f = h + conj(g)` between normed balls and the
//! derivative quantities built from them.

mod derived;
mod json;
mod poly;
mod random;
mod slice;

pub use derived::{lambda0, lambda0_sampled, nabla_norm, omega, SUPPORT_ZERO_THRESHOLD};
pub use json::{MapJson, TermJson};
pub use poly::{MultiIndex, PluriharmonicMap, Terms};
pub use random::{
    random_ball_map, random_ball_map_with, random_boundary_map, random_quasiregular_map, random_unitary, BoundaryFamily, MapConstraints,
    RandomFamily,
};
pub use slice::{Profile, ProfileJet, SliceMap};

use serde::{Deserialize, Serialize};

use crate::linalg::CMat;
use crate::scalar::{Real, C};
use crate::spaces::{RealLinearMap, Space};

/// Jacobians of the two holomorphic parts at a point.
///
/// `dh = ∂f/∂z` and `dg = conj(∂f/∂z̄)`, so that the real differential is
/// `Df(z)v = dh·v + conj(dg·v)`.
#[derive(Clone, Debug, PartialEq)]
pub struct DerivPair<T> {
    pub dh: CMat<T>,
    pub dg: CMat<T>,
}

impl<T: Real> DerivPair<T> {
    pub fn apply(&self, v: &[C<T>]) -> Vec<C<T>> {
        let a = self.dh.mul_vec(v);
        let b = self.dg.mul_vec(v);
        a.iter().zip(&b).map(|(x, y)| x + y.conj()).collect()
    }

    pub fn real_linear(&self, dom: &Space<T>, codom: &Space<T>) -> RealLinearMap<T> {
        RealLinearMap::new(self.dh.clone(), self.dg.clone(), dom.clone(), codom.clone()).expect("derivative shapes match the spaces")
    }

    /// Adjoint of the real differential for the real inner product
    /// `Re⟨·,·⟩`: `Df*w = dhᴴ w + dgᴴ conj(w)`.
    pub fn adjoint_apply(&self, w: &[C<T>]) -> Vec<C<T>> {
        let a = self.dh.adjoint().mul_vec(w);
        let wc: Vec<C<T>> = w.iter().map(|x| x.conj()).collect();
        let b = self.dg.adjoint().mul_vec(&wc);
        a.iter().zip(&b).map(|(x, y)| x + y).collect()
    }
}

/// Evidence that a map sends the open unit ball into the closed ball of
/// radius `sup_bound`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BallCertificate<T> {
    pub sup_bound: T,
    pub method: String,
}

/// A pluriharmonic map between balls of two normed spaces.
///
/// Points passed in must have the domain's dimension; implementations may
/// panic otherwise. Callers that take untrusted points validate first.
pub trait Mapping<T: Real>: Send + Sync {
    fn dom(&self) -> &Space<T>;
    fn codom(&self) -> &Space<T>;
    fn eval(&self, z: &[C<T>]) -> Vec<C<T>>;
    fn derivatives(&self, z: &[C<T>]) -> DerivPair<T>;
    fn is_holomorphic(&self) -> bool;
    fn certificate(&self) -> Option<BallCertificate<T>>;

    /// `Df(b)b`, the derivative along the ray through `b`.
    fn radial_derivative(&self, b: &[C<T>]) -> Vec<C<T>> {
        self.derivatives(b).apply(b)
    }

    /// A JSON description precise enough to rebuild the map.
    fn describe(&self) -> serde_json::Value;
}
