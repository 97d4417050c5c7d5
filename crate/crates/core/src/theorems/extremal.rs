use super::{Instance, PairingTarget, TheoremId};
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::mappings::{Mapping, Profile, SliceMap};
use crate::scalar::{creal, euclid, lit, scale_vec, to_f64, Real, C};
use crate::spaces::Space;
use crate::symmetric::TripleSystem;

/// Inputs shared by the closed-form extremal maps.
///
/// `w` is a unit vector of the domain giving the slice direction and `y` a
/// unit vector of the codomain giving the image direction. `a` is a profile
/// parameter in the open disc and `s ∈ [0, 1)` a radius; each builder uses
/// the ones it needs.
#[derive(Clone, Debug)]
pub struct ExtremalSetup<T: Real> {
    pub dom: Space<T>,
    pub codom: Space<T>,
    /// Required for the triple-system pairing and the dilatation extremal.
    pub sys: Option<TripleSystem>,
    pub w: Vec<C<T>>,
    pub y: Vec<C<T>>,
    pub a: C<T>,
    pub s: T,
}

impl<T: Real> ExtremalSetup<T> {
    /// `w` and `y` are the first basis vectors, scaled to unit norm.
    pub fn basic(dom: Space<T>, codom: Space<T>, a: C<T>, s: T) -> Self {
        let first = |sp: &Space<T>| {
            let mut v = vec![C::new(T::zero(), T::zero()); sp.dim];
            v[0] = C::new(T::one(), T::zero());
            v
        };
        let (w, y) = (first(&dom), first(&codom));
        Self { dom, codom, sys: None, w, y, a, s }
    }
}

pub(super) fn builds(id: TheoremId) -> bool {
    use TheoremId::*;
    matches!(
        id,
        T2_1 | T2_2
            | HARRIS
            | T2_3_EXTREMAL
            | T2_4
            | T2_5
            | T2_6
            | T3_1
            | T3_2
            | T3_3
            | T3_4
            | T3_5
            | T3_6
            | T3_7
            | T3_8A
            | T3_8B
            | T3_10
            | S5_LAMBDA
    )
}

fn unit_phase<T: Real>(a: C<T>) -> C<T> {
    let n = a.norm();
    if n > T::zero() {
        a / n
    } else {
        C::new(T::one(), T::zero())
    }
}

impl<T: Real> ExtremalSetup<T> {
    fn validate(&self) -> Result<()> {
        if !(self.s >= T::zero() && self.s < T::one()) {
            return Err(Error::InvalidParameter(format!("radius s = {} must lie in [0, 1)", self.s)));
        }
        if !(self.a.norm() < T::one()) {
            return Err(Error::InvalidParameter(format!("|a| = {} must be below 1", self.a.norm())));
        }
        for (space, v) in [(&self.dom, &self.w), (&self.codom, &self.y)] {
            let n = space.norm(v)?;
            if (n - T::one()).abs() > lit(1e-12) {
                return Err(Error::NotOnSphere { norm: to_f64(n) });
            }
        }
        Ok(())
    }

    fn slice(&self, profile: Profile<T>) -> Result<Box<dyn Mapping<T>>> {
        Ok(Box::new(SliceMap::through(self.dom.clone(), self.codom.clone(), &self.w, self.y.clone(), profile)?))
    }

    fn at_radius(&self, factor: C<T>) -> Vec<C<T>> {
        scale_vec(&self.w, factor * self.s)
    }

    fn target(&self, id: TheoremId) -> Result<PairingTarget> {
        match id {
            TheoremId::T2_5 | TheoremId::T3_5 => {
                let sys = self.sys.clone().ok_or_else(|| Error::InvalidParameter(format!("{id} needs a triple system")))?;
                Ok(PairingTarget::Triple { sys })
            }
            _ => Ok(PairingTarget::Hilbert),
        }
    }

    /// A real codomain and unit real vector for the real-valued extremals.
    fn real_target(&self) -> (Space<T>, Vec<C<T>>) {
        if self.codom.real_restricted {
            (self.codom.clone(), self.y.clone())
        } else {
            (Space::real_euclidean(1), vec![C::new(T::one(), T::zero())])
        }
    }

    /// The point `s·ŵ` where every Euclidean factor of `ŵ` has unit length.
    fn balanced_point(&self) -> Result<(Vec<C<T>>, Vec<Vec<C<T>>>)> {
        let blocks =
            self.dom.euclidean_blocks().ok_or_else(|| Error::Hypothesis("the domain is not a product of Euclidean balls".into()))?;
        let mut point = Vec::with_capacity(self.dom.dim);
        let mut dirs = Vec::with_capacity(blocks.len());
        for (s, l) in blocks {
            let part = &self.w[s..s + l];
            let n = euclid(part);
            let unit = if n > T::zero() {
                scale_vec(part, creal(T::one() / n))
            } else {
                let mut e = vec![C::new(T::zero(), T::zero()); l];
                e[0] = C::new(T::one(), T::zero());
                e
            };
            point.extend(scale_vec(&unit, creal(self.s)));
            dirs.push(unit);
        }
        Ok((point, dirs))
    }
}

/// An instance on which the bound for `id` holds with equality, or as
/// tightly as the closed-form family allows.
pub fn extremal<T: Real>(id: TheoremId, setup: &ExtremalSetup<T>) -> Result<Instance<T>> {
    use TheoremId::*;
    setup.validate()?;
    let abs_a = setup.a.norm();
    let phase = unit_phase(setup.a);
    let one = C::new(T::one(), T::zero());
    Ok(match id {
        T2_1 => Instance::Interior { map: setup.slice(Profile::Mobius { a: setup.a })?, z: setup.at_radius(phase) },
        HARRIS => Instance::Interior { map: setup.slice(Profile::Mobius { a: setup.a })?, z: setup.at_radius(-phase) },
        T2_2 => Instance::Interior { map: setup.slice(Profile::Osserman { r: abs_a })?, z: setup.at_radius(one) },
        T3_1 | T3_2 => Instance::Interior { map: setup.slice(Profile::Heinz)?, z: setup.at_radius(one) },
        T2_4 => Instance::Boundary { map: setup.slice(Profile::Osserman { r: abs_a })?, b: setup.w.clone() },
        T3_3 | T3_4 => Instance::Boundary { map: setup.slice(Profile::Heinz)?, b: setup.w.clone() },
        T2_5 | T2_6 => {
            let b = setup.s * (T::one() - abs_a * abs_a);
            Instance::Pairing {
                target: setup.target(id)?,
                map: setup.slice(Profile::Boundary { a: setup.a, b })?,
                alpha: setup.w.clone(),
                beta: setup.y.clone(),
            }
        }
        T3_5 | T3_6 => Instance::Pairing {
            target: setup.target(id)?,
            map: setup.slice(Profile::Heinz)?,
            alpha: setup.w.clone(),
            beta: setup.y.clone(),
        },
        T3_7 | T3_8A | T3_8B => {
            let (codom, y) = setup.real_target();
            let map = SliceMap::through(setup.dom.clone(), codom, &setup.w, y, Profile::Colonna { r: setup.s, gamma: one })?;
            Instance::Gradient { map: Box::new(map), z0: setup.at_radius(one) }
        }
        T3_10 => {
            let (z, dirs) = setup.balanced_point()?;
            let map =
                SliceMap::through(setup.dom.clone(), setup.codom.clone(), &z, setup.y.clone(), Profile::Mobius { a: creal(-setup.s) })?;
            Instance::Directional { map: Box::new(map), z, directions: Some(dirs) }
        }
        T2_3_EXTREMAL => {
            let sys = TripleSystem::hilbert_ball(setup.dom.dim)?;
            Instance::Bloch { k: setup.s, sys, u: CMat::identity(setup.dom.dim) }
        }
        S5_LAMBDA => Instance::Adjoint { map: setup.slice(Profile::Heinz)?, z0: setup.w.clone(), w0: setup.y.clone() },
        _ => return Err(Error::InvalidParameter(format!("no closed-form extremal for {id}"))),
    })
}
