use serde::{Deserialize, Serialize};

use super::poly::{PluriharmonicMap, Terms};
use crate::error::Result;
use crate::scalar::{lit, to_f64, Real, C};
use crate::spaces::Space;

/// One monomial: exponent vector and coefficient as `[re, im]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermJson {
    pub alpha: Vec<u32>,
    pub coeff: Vec<[f64; 2]>,
}

/// Serialized form of a [`PluriharmonicMap`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapJson {
    pub dom: Space<f64>,
    pub codom: Space<f64>,
    pub h: Vec<TermJson>,
    pub g: Vec<TermJson>,
}

fn terms_to_json<T: Real>(terms: &Terms<T>) -> Vec<TermJson> {
    terms
        .iter()
        .map(|(alpha, c)| TermJson { alpha: alpha.clone(), coeff: c.iter().map(|x| [to_f64(x.re), to_f64(x.im)]).collect() })
        .collect()
}

fn terms_from_json<T: Real>(terms: &[TermJson]) -> Terms<T> {
    terms.iter().map(|t| (t.alpha.clone(), t.coeff.iter().map(|&[re, im]| C::new(lit(re), lit(im))).collect())).collect()
}

impl MapJson {
    pub fn from_map<T: Real>(map: &PluriharmonicMap<T>) -> Self {
        use super::Mapping;
        Self { dom: map.dom().cast(), codom: map.codom().cast(), h: terms_to_json(map.h()), g: terms_to_json(map.g()) }
    }

    pub fn to_map<T: Real>(&self) -> Result<PluriharmonicMap<T>> {
        let dom = Space::new(self.dom.dim, self.dom.cast::<T>().kind, self.dom.real_restricted)?;
        let codom = Space::new(self.codom.dim, self.codom.cast::<T>().kind, self.codom.real_restricted)?;
        PluriharmonicMap::new(dom, codom, terms_from_json(&self.h), terms_from_json(&self.g))
    }
}

impl<T: Real> PluriharmonicMap<T> {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MapJson::from_map(self)).expect("map JSON")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let j: MapJson = serde_json::from_str(s)?;
        j.to_map()
    }
}
