//! One executable check per bound: each evaluator computes both sides of an
//! inequality and reports a residual that is nonnegative exactly when the
//! inequality holds.

mod bloch;
mod bounds;
mod extremal;

pub use bloch::{bloch_ratio_extremal, mu_bound, mu_k};
pub use bounds::{
    boundary_adjoint_check, boundary_adjoint_lambda, boundary_bound, directional_sum_bound, frobenius_quasiregular_bound, gradient_bound,
    interior_bound, pairing_boundary_bound, AdjointLambda, PairingTarget, OMEGA_SAMPLES,
};
pub use extremal::{extremal, ExtremalSetup};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::mappings::Mapping;
use crate::scalar::{to_f64, Real, C};
use crate::symmetric::TripleSystem;

#[allow(non_camel_case_types)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    T2_1,
    T2_2,
    HARRIS,
    T2_3_MU,
    T2_3_EXTREMAL,
    T2_4,
    T2_5,
    T2_6,
    T3_1,
    T3_2,
    T3_3,
    T3_4,
    T3_5,
    T3_6,
    T3_7,
    T3_8A,
    T3_8B,
    P3_9,
    T3_10,
    C3_11,
    P3_12,
    C3_13,
    T3_14,
    S5_LAMBDA,
}

impl TheoremId {
    pub const ALL: [TheoremId; 24] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::HARRIS,
        TheoremId::T2_3_MU,
        TheoremId::T2_3_EXTREMAL,
        TheoremId::T2_4,
        TheoremId::T2_5,
        TheoremId::T2_6,
        TheoremId::T3_1,
        TheoremId::T3_2,
        TheoremId::T3_3,
        TheoremId::T3_4,
        TheoremId::T3_5,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_8A,
        TheoremId::T3_8B,
        TheoremId::P3_9,
        TheoremId::T3_10,
        TheoremId::C3_11,
        TheoremId::P3_12,
        TheoremId::C3_13,
        TheoremId::T3_14,
        TheoremId::S5_LAMBDA,
    ];

    /// Tags whose bound is attained by a closed-form map built by [`extremal`].
    pub const SHARP: [TheoremId; 10] = [
        TheoremId::T2_1,
        TheoremId::T2_2,
        TheoremId::T2_4,
        TheoremId::T2_5,
        TheoremId::T2_6,
        TheoremId::T3_1,
        TheoremId::T3_5,
        TheoremId::T3_6,
        TheoremId::T3_7,
        TheoremId::T3_10,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T2_1 => "T2_1",
            TheoremId::T2_2 => "T2_2",
            TheoremId::HARRIS => "HARRIS",
            TheoremId::T2_3_MU => "T2_3_MU",
            TheoremId::T2_3_EXTREMAL => "T2_3_EXTREMAL",
            TheoremId::T2_4 => "T2_4",
            TheoremId::T2_5 => "T2_5",
            TheoremId::T2_6 => "T2_6",
            TheoremId::T3_1 => "T3_1",
            TheoremId::T3_2 => "T3_2",
            TheoremId::T3_3 => "T3_3",
            TheoremId::T3_4 => "T3_4",
            TheoremId::T3_5 => "T3_5",
            TheoremId::T3_6 => "T3_6",
            TheoremId::T3_7 => "T3_7",
            TheoremId::T3_8A => "T3_8A",
            TheoremId::T3_8B => "T3_8B",
            TheoremId::P3_9 => "P3_9",
            TheoremId::T3_10 => "T3_10",
            TheoremId::C3_11 => "C3_11",
            TheoremId::P3_12 => "P3_12",
            TheoremId::C3_13 => "C3_13",
            TheoremId::T3_14 => "T3_14",
            TheoremId::S5_LAMBDA => "S5_LAMBDA",
        }
    }

    /// Whether [`extremal`] has a builder for this tag.
    pub fn has_extremal(self) -> bool {
        extremal::builds(self)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .iter()
            .copied()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown theorem tag {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

/// Outcome of one check. `residual ≥ 0` means the inequality holds; the
/// verdict passes when `residual ≥ −tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub verdict: Verdict,
    pub flags: Vec<String>,
    pub instance_digest: String,
    pub seed: Option<u64>,
}

impl CheckReport {
    pub fn new<T: Real>(theorem: TheoremId, lhs: T, rhs: T, residual: T, tolerance: f64, flags: Vec<String>) -> Self {
        let residual = to_f64(residual);
        let verdict = if residual >= -tolerance { Verdict::Pass } else { Verdict::Fail };
        Self {
            theorem,
            lhs: to_f64(lhs),
            rhs: to_f64(rhs),
            residual,
            tolerance,
            verdict,
            flags,
            instance_digest: String::new(),
            seed: None,
        }
    }

    /// An upper bound `lhs ≤ rhs`.
    pub fn upper<T: Real>(theorem: TheoremId, lhs: T, rhs: T, tolerance: f64, flags: Vec<String>) -> Self {
        Self::new(theorem, lhs, rhs, rhs - lhs, tolerance, flags)
    }

    /// A lower bound `lhs ≥ rhs`.
    pub fn lower<T: Real>(theorem: TheoremId, lhs: T, rhs: T, tolerance: f64, flags: Vec<String>) -> Self {
        Self::new(theorem, lhs, rhs, lhs - rhs, tolerance, flags)
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn with_provenance(mut self, digest: String, seed: Option<u64>) -> Self {
        self.instance_digest = digest;
        self.seed = seed;
        self
    }
}

/// Everything one check needs besides the tag and tolerance.
pub enum Instance<T: Real> {
    Interior {
        map: Box<dyn Mapping<T>>,
        z: Vec<C<T>>,
    },
    Boundary {
        map: Box<dyn Mapping<T>>,
        b: Vec<C<T>>,
    },
    Pairing {
        target: PairingTarget,
        map: Box<dyn Mapping<T>>,
        alpha: Vec<C<T>>,
        beta: Vec<C<T>>,
    },
    Gradient {
        map: Box<dyn Mapping<T>>,
        z0: Vec<C<T>>,
    },
    /// `directions` holds one unit vector per factor for the per-factor sum,
    /// and is `None` for the full coordinate sum.
    Directional {
        map: Box<dyn Mapping<T>>,
        z: Vec<C<T>>,
        directions: Option<Vec<Vec<C<T>>>>,
    },
    Frobenius {
        map: Box<dyn Mapping<T>>,
        z: Vec<C<T>>,
        k: Option<T>,
    },
    Mu {
        k: T,
        x: T,
    },
    Bloch {
        k: T,
        sys: TripleSystem,
        u: CMat<T>,
    },
    Adjoint {
        map: Box<dyn Mapping<T>>,
        z0: Vec<C<T>>,
        w0: Vec<C<T>>,
    },
}

fn pairs<T: Real>(v: &[C<T>]) -> Vec<[f64; 2]> {
    v.iter().map(|x| [to_f64(x.re), to_f64(x.im)]).collect()
}

impl<T: Real> Instance<T> {
    /// JSON of every input, stable enough to hash.
    pub fn describe(&self) -> serde_json::Value {
        use serde_json::json;
        match self {
            Instance::Interior { map, z } => json!({"kind": "interior", "map": map.describe(), "z": pairs(z)}),
            Instance::Boundary { map, b } => json!({"kind": "boundary", "map": map.describe(), "b": pairs(b)}),
            Instance::Pairing { target, map, alpha, beta } => json!({
                "kind": "pairing", "target": target, "map": map.describe(), "alpha": pairs(alpha), "beta": pairs(beta)
            }),
            Instance::Gradient { map, z0 } => json!({"kind": "gradient", "map": map.describe(), "z0": pairs(z0)}),
            Instance::Directional { map, z, directions } => json!({
                "kind": "directional", "map": map.describe(), "z": pairs(z),
                "directions": directions.as_ref().map(|d| d.iter().map(|v| pairs(v)).collect::<Vec<_>>())
            }),
            Instance::Frobenius { map, z, k } => {
                json!({"kind": "frobenius", "map": map.describe(), "z": pairs(z), "k": k.map(to_f64)})
            }
            Instance::Mu { k, x } => json!({"kind": "mu", "k": to_f64(*k), "x": to_f64(*x)}),
            Instance::Bloch { k, sys, u } => {
                let rows: Vec<Vec<[f64; 2]>> = (0..u.rows).map(|i| pairs(&u.row(i))).collect();
                json!({"kind": "bloch", "k": to_f64(*k), "sys": sys, "u": rows})
            }
            Instance::Adjoint { map, z0, w0 } => {
                json!({"kind": "adjoint", "map": map.describe(), "z0": pairs(z0), "w0": pairs(w0)})
            }
        }
    }
}

/// Runs the evaluator that belongs to `id` on a matching instance.
pub fn evaluate<T: Real>(id: TheoremId, inst: &Instance<T>, tol: f64) -> Result<CheckReport> {
    use TheoremId::*;
    match (id, inst) {
        (T2_1 | T2_2 | HARRIS | T3_1 | T3_2, Instance::Interior { map, z }) => interior_bound(id, map.as_ref(), z, tol),
        (T2_4 | T3_3 | T3_4, Instance::Boundary { map, b }) => boundary_bound(id, map.as_ref(), b, tol),
        (T2_5 | T2_6 | T3_5 | T3_6, Instance::Pairing { target, map, alpha, beta }) => {
            pairing_boundary_bound(id, target, map.as_ref(), alpha, beta, tol)
        }
        (T3_7 | T3_8A | T3_8B | P3_9, Instance::Gradient { map, z0 }) => gradient_bound(id, map.as_ref(), z0, tol),
        (T3_10 | C3_11, Instance::Directional { map, z, directions }) => {
            directional_sum_bound(id, map.as_ref(), z, directions.as_deref(), tol)
        }
        (P3_12 | C3_13 | T3_14, Instance::Frobenius { map, z, k }) => frobenius_quasiregular_bound(id, map.as_ref(), z, *k, tol),
        (T2_3_MU, Instance::Mu { k, x }) => mu_bound(*k, *x, tol),
        (T2_3_EXTREMAL, Instance::Bloch { k, sys, u }) => bloch_ratio_extremal(*k, sys, u, tol),
        (S5_LAMBDA, Instance::Adjoint { map, z0, w0 }) => boundary_adjoint_check(map.as_ref(), z0, w0, tol),
        _ => Err(Error::InvalidParameter(format!("instance kind does not fit {id}"))),
    }
}
