//! Which spaces each tag runs on, and seeded instance generators.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use schwarz_core::mappings::{
    random_ball_map_with, random_boundary_map, random_quasiregular_map, random_unitary, BoundaryFamily, MapConstraints, Mapping,
    RandomFamily,
};
use schwarz_core::spaces::{NormKind, Space};
use schwarz_core::symmetric::TripleSystem;
use schwarz_core::theorems::{ExtremalSetup, Instance, PairingTarget, TheoremId};
use schwarz_core::C64;

use crate::config::triple_system_of;

/// A domain and codomain a tag is checked on.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpacePair {
    pub dom: Space<f64>,
    pub codom: Space<f64>,
}

impl SpacePair {
    pub fn new(dom: Space<f64>, codom: Space<f64>) -> Self {
        Self { dom, codom }
    }

    pub fn label(&self) -> String {
        format!("{} -> {}", self.dom.label(), self.codom.label())
    }

    /// Largest Euclidean factor of the domain, where it has factors.
    pub fn kappa(&self) -> Option<usize> {
        self.dom.euclidean_blocks().map(|b| b.iter().map(|x| x.1).max().unwrap_or(1))
    }
}

/// Disc, ℂ² ball, bidisc, product(2,1) and ℓ¹(2), each to itself, a few
/// mixed pairs, and real Euclidean targets.
pub fn default_pairs() -> Vec<SpacePair> {
    let disc = Space::euclidean(1);
    let ball = Space::euclidean(2);
    let bidisc = Space::sup(2);
    let prod = Space::product(&[2, 1]).expect("valid blocks");
    let l1 = Space::one(2);
    let p = SpacePair::new;
    vec![
        p(disc.clone(), disc.clone()),
        p(ball.clone(), ball.clone()),
        p(bidisc.clone(), bidisc.clone()),
        p(prod.clone(), prod.clone()),
        p(l1.clone(), l1.clone()),
        p(ball.clone(), bidisc.clone()),
        p(bidisc.clone(), ball.clone()),
        p(prod.clone(), Space::euclidean(3)),
        p(prod.clone(), ball.clone()),
        p(l1.clone(), ball.clone()),
        p(disc, Space::real_euclidean(1)),
        p(ball, Space::real_euclidean(1)),
        p(bidisc, Space::real_euclidean(2)),
        p(prod, Space::real_euclidean(1)),
        p(l1, Space::real_euclidean(1)),
    ]
}

fn is_euclidean(s: &Space<f64>) -> bool {
    matches!(s.kind, NormKind::Euclidean)
}

fn is_symmetric(s: &Space<f64>) -> bool {
    !s.real_restricted && matches!(s.kind, NormKind::Euclidean | NormKind::Sup | NormKind::Product { .. })
}

fn has_factors(s: &Space<f64>) -> bool {
    is_symmetric(s) && s.euclidean_blocks().is_some()
}

/// Why `id` cannot run on `pair`, if it cannot.
pub fn unsatisfiable(id: TheoremId, pair: &SpacePair) -> Option<String> {
    use TheoremId::*;
    let (d, c) = (&pair.dom, &pair.codom);
    let need = |ok: bool, why: &str| if ok { None } else { Some(format!("{id} on {}: {why}", pair.label())) };
    if d.real_restricted {
        return need(false, "the domain must be complex");
    }
    match id {
        T2_1 | T2_2 => need(!c.real_restricted, "holomorphic maps into a real space are constant"),
        T3_1 | T3_2 => None,
        HARRIS => need(d.dim == 1 && c.dim == 1 && !c.real_restricted, "needs planar domain and codomain"),
        T2_3_MU => None,
        T2_3_EXTREMAL => need(is_euclidean(d), "the dilatation extremal lives on a Hilbert ball"),
        T2_4 | T3_3 | T3_4 => need(!c.real_restricted, "boundary families target complex spaces"),
        T2_5 | T3_5 => need(triple_system_of(c).is_some(), "the codomain is not the ball of a triple system"),
        T2_6 | T3_6 | S5_LAMBDA => {
            let dom_ok = id != S5_LAMBDA || is_euclidean(d);
            need(dom_ok && is_euclidean(c) && !c.real_restricted, "needs complex Euclidean spaces")
        }
        T3_7 => need(is_symmetric(d), "the domain is not the ball of a triple system"),
        T3_8A | T3_8B => need(is_symmetric(d) && c.real_restricted, "needs a symmetric domain and a real codomain"),
        P3_9 => need(is_euclidean(c), "needs a Euclidean codomain"),
        T3_10 | C3_11 | C3_13 => need(has_factors(d) && is_euclidean(c), "needs a product of balls into a Euclidean ball"),
        P3_12 => need(is_euclidean(d) && is_euclidean(c), "needs Euclidean spaces"),
        T3_14 => need(
            is_symmetric(d) && is_euclidean(c) && !c.real_restricted && c.dim == d.dim,
            "needs a symmetric domain into the complex Euclidean ball of the same dimension",
        ),
    }
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}

fn interior_point(dom: &Space<f64>, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let r = uniform(rng, 0.0, 0.99);
    dom.ball_sample(r, rng)
}

fn family(rng: &mut ChaCha8Rng, holomorphic: bool, real: bool) -> RandomFamily {
    let choices: &[RandomFamily] = match (holomorphic, real) {
        (true, _) => &[RandomFamily::PolyScaled, RandomFamily::SliceBlaschke],
        (false, true) => &[RandomFamily::PolyScaled, RandomFamily::HarmonicSlice],
        (false, false) => &[RandomFamily::PolyScaled, RandomFamily::SliceBlaschke, RandomFamily::HarmonicSlice],
    };
    choices[rng.random_range(0..choices.len())]
}

type Gen<T> = Result<T, String>;

fn ball_map(pair: &SpacePair, cons: MapConstraints, degree: u32, rng: &mut ChaCha8Rng) -> Gen<Box<dyn Mapping<f64>>> {
    let fam = family(rng, cons.holomorphic, pair.codom.real_restricted);
    let (map, _) = random_ball_map_with(&pair.dom, &pair.codom, fam, degree, cons, rng).map_err(|e| e.to_string())?;
    Ok(Box::new(map))
}

fn maximal_tripotent(sys: &TripleSystem, rng: &mut ChaCha8Rng) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); sys.dim()];
    for (s, l) in sys.blocks() {
        let part = Space::<f64>::euclidean(l).unit_sphere_sample(rng);
        v[s..s + l].copy_from_slice(&part);
    }
    v
}

/// A boundary point of `dom` and a map through it with value `y` there.
fn boundary_map(
    pair: &SpacePair,
    y: &[C64],
    cons: MapConstraints,
    degree: u32,
    rng: &mut ChaCha8Rng,
) -> Gen<(Box<dyn Mapping<f64>>, Vec<C64>)> {
    let torus = matches!(pair.dom.kind, NormKind::Sup) && rng.random_bool(0.5);
    let (b, fam) = if torus {
        let b: Vec<C64> = (0..pair.dom.dim).map(|_| C64::from_polar(1.0, uniform(rng, 0.0, std::f64::consts::TAU))).collect();
        (b, BoundaryFamily::Torus)
    } else {
        (pair.dom.unit_sphere_sample(rng), BoundaryFamily::Slice)
    };
    let map = random_boundary_map(&pair.dom, &pair.codom, &b, y, fam, degree, cons, rng).map_err(|e| e.to_string())?;
    Ok((Box::new(map), b))
}

/// One seeded random instance for `id` on `pair`.
pub fn random_instance(id: TheoremId, pair: &SpacePair, degree: u32, rng: &mut ChaCha8Rng) -> Gen<Instance<f64>> {
    use TheoremId::*;
    let holo = MapConstraints { holomorphic: true, vanish_at_origin: false };
    let any = MapConstraints::default();
    let vanish = |holomorphic| MapConstraints { holomorphic, vanish_at_origin: true };
    let maybe_vanish = |rng: &mut ChaCha8Rng| MapConstraints { holomorphic: false, vanish_at_origin: rng.random_bool(0.5) };
    Ok(match id {
        T2_1 | HARRIS => Instance::Interior { map: ball_map(pair, holo, degree, rng)?, z: interior_point(&pair.dom, rng) },
        T2_2 => Instance::Interior { map: ball_map(pair, vanish(true), degree, rng)?, z: interior_point(&pair.dom, rng) },
        T3_1 => {
            let cons = maybe_vanish(rng);
            Instance::Interior { map: ball_map(pair, cons, degree, rng)?, z: interior_point(&pair.dom, rng) }
        }
        T3_2 => Instance::Interior { map: ball_map(pair, vanish(false), degree, rng)?, z: interior_point(&pair.dom, rng) },
        T2_3_MU => Instance::Mu { k: uniform(rng, 0.0, 1.0), x: uniform(rng, 0.0, 1.0) },
        T2_3_EXTREMAL => {
            let n = pair.dom.dim;
            Instance::Bloch {
                k: uniform(rng, 0.0, 1.0),
                sys: TripleSystem::hilbert_ball(n).map_err(|e| e.to_string())?,
                u: random_unitary(n, rng),
            }
        }
        T2_4 | T3_4 => {
            let y = pair.codom.unit_sphere_sample(rng);
            let (map, b) = boundary_map(pair, &y, vanish(id == T2_4), degree, rng)?;
            Instance::Boundary { map, b }
        }
        T3_3 => {
            let y = pair.codom.unit_sphere_sample(rng);
            let cons = maybe_vanish(rng);
            let (map, b) = boundary_map(pair, &y, cons, degree, rng)?;
            Instance::Boundary { map, b }
        }
        T2_5 | T3_5 => {
            let sys = triple_system_of(&pair.codom).ok_or("no triple system")?;
            let beta = maximal_tripotent(&sys, rng);
            let cons = if id == T2_5 { holo } else { vanish(false) };
            let (map, alpha) = boundary_map(pair, &beta, cons, degree, rng)?;
            Instance::Pairing { target: PairingTarget::Triple { sys }, map, alpha, beta }
        }
        T2_6 | T3_6 => {
            let beta = pair.codom.unit_sphere_sample(rng);
            let cons = if id == T2_6 { holo } else { vanish(false) };
            let (map, alpha) = boundary_map(pair, &beta, cons, degree, rng)?;
            Instance::Pairing { target: PairingTarget::Hilbert, map, alpha, beta }
        }
        T3_7 | T3_8A | T3_8B | P3_9 => Instance::Gradient { map: ball_map(pair, any, degree, rng)?, z0: interior_point(&pair.dom, rng) },
        T3_10 => {
            let blocks = pair.dom.euclidean_blocks().ok_or("no Euclidean factors")?;
            let directions = blocks.iter().map(|&(_, l)| Space::<f64>::euclidean(l).unit_sphere_sample(rng)).collect();
            Instance::Directional {
                map: ball_map(pair, any, degree, rng)?,
                z: interior_point(&pair.dom, rng),
                directions: Some(directions),
            }
        }
        C3_11 => Instance::Directional { map: ball_map(pair, any, degree, rng)?, z: interior_point(&pair.dom, rng), directions: None },
        P3_12 | C3_13 => Instance::Frobenius { map: ball_map(pair, any, degree, rng)?, z: interior_point(&pair.dom, rng), k: None },
        T3_14 => {
            let k = uniform(rng, 0.0, 0.9);
            let (map, _) = random_quasiregular_map(&pair.dom, k, degree, rng).map_err(|e| e.to_string())?;
            Instance::Frobenius { map: Box::new(map), z: interior_point(&pair.dom, rng), k: Some(k) }
        }
        S5_LAMBDA => {
            let w0 = pair.codom.unit_sphere_sample(rng);
            let (map, z0) = boundary_map(pair, &w0, any, degree, rng)?;
            Instance::Adjoint { map, z0, w0 }
        }
    })
}

/// Seeded inputs for the closed-form extremal of `id` on `pair`.
/// Whether the closed-form extremal for `id` can be built on `pair`.
///
/// The complex-valued profiles have no image in a real codomain.
pub fn extremal_host(id: TheoremId, pair: &SpacePair) -> bool {
    use TheoremId::*;
    id.has_extremal() && !(pair.codom.real_restricted && matches!(id, T2_1 | T2_2 | HARRIS | T2_4 | T2_5 | T2_6 | T3_10))
}

pub fn extremal_setup(id: TheoremId, pair: &SpacePair, rng: &mut ChaCha8Rng) -> ExtremalSetup<f64> {
    let a = C64::from_polar(uniform(rng, 0.0, 0.8), uniform(rng, 0.0, std::f64::consts::TAU));
    let s = uniform(rng, 0.1, 0.9);
    let mut setup = ExtremalSetup::basic(pair.dom.clone(), pair.codom.clone(), a, s);
    setup.w = pair.dom.unit_sphere_sample(rng);
    setup.sys = triple_system_of(&pair.codom);
    setup.y = match (&setup.sys, id) {
        (Some(sys), TheoremId::T2_5 | TheoremId::T3_5) => maximal_tripotent(sys, rng),
        _ => pair.codom.unit_sphere_sample(rng),
    };
    setup
}
