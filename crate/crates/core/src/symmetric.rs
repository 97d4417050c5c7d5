//! Bounded symmetric domains built from Euclidean balls: the Hilbert ball,
//! the polydisc and max-norm products of balls.
//!
//! Every operation works block by block. On a single ball block of
//! dimension `k` the triple product is `{x,y,z} = (⟨x,y⟩z + ⟨z,y⟩x)/2`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::scalar::{euclid, inner, lit, to_f64, tol, zeros, Real, C};
use crate::spaces::Space;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TripleSystem {
    HilbertBall { n: usize },
    Polydisc { n: usize },
    ProductOfBalls { blocks: Vec<usize> },
}

impl TripleSystem {
    pub fn hilbert_ball(n: usize) -> Result<Self> {
        Self::HilbertBall { n }.validated()
    }

    pub fn polydisc(n: usize) -> Result<Self> {
        Self::Polydisc { n }.validated()
    }

    pub fn product_of_balls(blocks: &[usize]) -> Result<Self> {
        Self::ProductOfBalls { blocks: blocks.to_vec() }.validated()
    }

    fn validated(self) -> Result<Self> {
        let ok = match &self {
            Self::HilbertBall { n } | Self::Polydisc { n } => *n > 0,
            Self::ProductOfBalls { blocks } => !blocks.is_empty() && blocks.iter().all(|&b| b > 0),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::InvalidParameter(format!("empty triple system {self:?}")))
        }
    }

    /// Sizes of the ball factors.
    pub fn block_sizes(&self) -> Vec<usize> {
        match self {
            Self::HilbertBall { n } => vec![*n],
            Self::Polydisc { n } => vec![1; *n],
            Self::ProductOfBalls { blocks } => blocks.clone(),
        }
    }

    /// `(start, len)` of every factor.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let mut start = 0;
        self.block_sizes()
            .into_iter()
            .map(|l| {
                let s = (start, l);
                start += l;
                s
            })
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.block_sizes().iter().sum()
    }

    pub fn rank(&self) -> usize {
        self.block_sizes().len()
    }

    /// The normed space whose open unit ball is this domain.
    pub fn space<T: Real>(&self) -> Space<T> {
        match self {
            Self::HilbertBall { n } => Space::euclidean(*n),
            Self::Polydisc { n } => Space::sup(*n),
            Self::ProductOfBalls { blocks } => Space::product(blocks).expect("validated blocks"),
        }
    }

    pub fn label(&self) -> String {
        match self {
            Self::HilbertBall { n } => format!("hilbert_ball({n})"),
            Self::Polydisc { n } => format!("polydisc({n})"),
            Self::ProductOfBalls { blocks } => format!("product_of_balls{blocks:?}"),
        }
    }

    fn check<T: Real>(&self, v: &[C<T>]) -> Result<()> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    fn norm<T: Real>(&self, v: &[C<T>]) -> T {
        self.blocks().iter().map(|&(s, l)| euclid(&v[s..s + l])).fold(T::zero(), T::max)
    }

    pub fn triple_product<T: Real>(&self, x: &[C<T>], y: &[C<T>], z: &[C<T>]) -> Result<Vec<C<T>>> {
        for v in [x, y, z] {
            self.check(v)?;
        }
        Ok(self.triple_unchecked(x, y, z))
    }

    fn triple_unchecked<T: Real>(&self, x: &[C<T>], y: &[C<T>], z: &[C<T>]) -> Vec<C<T>> {
        let half = lit::<T>(0.5);
        let mut out = zeros(x.len());
        for (s, l) in self.blocks() {
            let r = s..s + l;
            let xy = inner(&x[r.clone()], &y[r.clone()]);
            let zy = inner(&z[r.clone()], &y[r.clone()]);
            for j in r {
                out[j] = (xy * z[j] + zy * x[j]) * half;
            }
        }
        out
    }

    /// Matrix of the complex-linear operator `w ↦ {x, y, w}`.
    pub fn box_operator<T: Real>(&self, x: &[C<T>], y: &[C<T>]) -> Result<CMat<T>> {
        self.check(x)?;
        self.check(y)?;
        let n = self.dim();
        let cols: Vec<Vec<C<T>>> = (0..n).map(|j| self.triple_unchecked(x, y, &crate::scalar::basis(n, j))).collect();
        Ok(CMat::from_columns(&cols))
    }

    /// Bergman operator `B(x, y) = I − 2 x□y + Q_x Q_y` as a matrix.
    pub fn bergman<T: Real>(&self, x: &[C<T>], y: &[C<T>]) -> Result<CMat<T>> {
        self.check(x)?;
        self.check(y)?;
        let n = self.dim();
        let two = lit::<T>(2.0);
        let cols: Vec<Vec<C<T>>> = (0..n)
            .map(|j| {
                let e = crate::scalar::basis(n, j);
                let xyw = self.triple_unchecked(x, y, &e);
                let qy = self.triple_unchecked(y, &e, y);
                let qxqy = self.triple_unchecked(x, &qy, x);
                (0..n).map(|i| e[i] - xyw[i] * two + qxqy[i]).collect()
            })
            .collect();
        Ok(CMat::from_columns(&cols))
    }

    /// Positive square root of `B(a, a)` for `a` in the open ball.
    ///
    /// On a ball block it scales the direction of `a` by `1 − ‖a‖²` and its
    /// orthogonal complement by `√(1 − ‖a‖²)`.
    pub fn bergman_sqrt<T: Real>(&self, a: &[C<T>]) -> Result<CMat<T>> {
        self.check(a)?;
        let na = self.norm(a);
        if na >= T::one() {
            return Err(Error::OutsideBall { norm: to_f64(na) });
        }
        let n = self.dim();
        let mut m = CMat::zeros(n, n);
        for (s, l) in self.blocks() {
            let ab = &a[s..s + l];
            let r2 = euclid(ab).powi(2);
            let root = (T::one() - r2).sqrt();
            for i in 0..l {
                m[(s + i, s + i)] = C::new(root, T::zero());
            }
            if r2 > T::zero() {
                // root·I + (root² − root)·a a*/‖a‖²
                let k = (root * root - root) / r2;
                for i in 0..l {
                    for j in 0..l {
                        m[(s + i, s + j)] = m[(s + i, s + j)] + ab[i] * ab[j].conj() * k;
                    }
                }
            }
        }
        Ok(m)
    }

    /// The Möbius transformation `g_a` exchanging `0` and `a`.
    pub fn mobius<T: Real>(&self, a: &[C<T>]) -> Result<Mobius<T>> {
        let sqrt = self.bergman_sqrt(a)?;
        Ok(Mobius { sys: self.clone(), a: a.to_vec(), sqrt })
    }

    /// Operator norm of `Dg_{−z}(z)`, which equals `1/(1 − ‖z‖²)`.
    pub fn kaup_norm<T: Real>(&self, z: &[C<T>]) -> Result<T> {
        let minus: Vec<C<T>> = z.iter().map(|x| -x).collect();
        let g = self.mobius(&minus)?;
        let d = g.jacobian(z)?;
        let space = self.space::<T>();
        crate::spaces::LinearMap::new(d, space.clone(), space)?.operator_norm().require_exact("Kaup norm")
    }

    /// Bergman metric at the origin, `Σ_b (k_b + 1)⟨x_b, y_b⟩`.
    pub fn h0<T: Real>(&self, x: &[C<T>], y: &[C<T>]) -> Result<C<T>> {
        self.check(x)?;
        self.check(y)?;
        Ok(self
            .blocks()
            .iter()
            .map(|&(s, l)| inner(&x[s..s + l], &y[s..s + l]) * lit::<T>((l + 1) as f64))
            .fold(C::new(T::zero(), T::zero()), |a, b| a + b))
    }

    /// `½ sup |h₀(x, y)|` over the ball, `Σ_b (k_b + 1)/2`.
    pub fn c_constant<T: Real>(&self) -> T {
        lit(self.block_sizes().iter().map(|&l| (l + 1) as f64).sum::<f64>() / 2.0)
    }

    /// `h₀(x, β)/(2c)`, the normalized pairing with a boundary point.
    pub fn pairing<T: Real>(&self, x: &[C<T>], beta: &[C<T>]) -> Result<C<T>> {
        Ok(self.h0(x, beta)? / (self.c_constant::<T>() * lit(2.0)))
    }

    /// A maximal tripotent here is a vector whose every block has unit length.
    pub fn is_maximal_tripotent<T: Real>(&self, x: &[C<T>]) -> bool {
        if self.check(x).is_err() {
            return false;
        }
        let t = tol::<T>(1e-9);
        if !self.blocks().iter().all(|&(s, l)| (euclid(&x[s..s + l]) - T::one()).abs() <= t) {
            return false;
        }
        let xxx = self.triple_unchecked(x, x, x);
        euclid(&crate::scalar::sub_vec(&xxx, x)) <= t
    }
}

/// `g_a(z) = a + B(a,a)^{1/2} (I + z□a)⁻¹ z`.
#[derive(Clone, Debug, PartialEq)]
pub struct Mobius<T> {
    sys: TripleSystem,
    a: Vec<C<T>>,
    sqrt: CMat<T>,
}

impl<T: Real> Mobius<T> {
    pub fn center(&self) -> &[C<T>] {
        &self.a
    }

    /// Evaluates by solving `(I + z□a) x = z`.
    pub fn eval(&self, z: &[C<T>]) -> Result<Vec<C<T>>> {
        let n = self.sys.dim();
        let m = CMat::identity(n).add(&self.sys.box_operator(z, &self.a)?);
        let x = m.inverse()?.mul_vec(z);
        let s = self.sqrt.mul_vec(&x);
        Ok(self.a.iter().zip(&s).map(|(p, q)| p + q).collect())
    }

    /// Complex Jacobian; on a ball block `S/D − S z a*/D²` with
    /// `D = 1 + ⟨z, a⟩`.
    pub fn jacobian(&self, z: &[C<T>]) -> Result<CMat<T>> {
        self.sys.check(z)?;
        let n = self.sys.dim();
        let mut inner_jac = CMat::zeros(n, n);
        for (s, l) in self.sys.blocks() {
            let zb = &z[s..s + l];
            let ab = &self.a[s..s + l];
            let d = C::new(T::one(), T::zero()) + inner(zb, ab);
            if d.norm() == T::zero() {
                return Err(Error::Singular { cond: f64::INFINITY });
            }
            let d2 = d * d;
            for i in 0..l {
                for j in 0..l {
                    let id = if i == j { d.inv() } else { C::new(T::zero(), T::zero()) };
                    inner_jac[(s + i, s + j)] = id - zb[i] * ab[j].conj() / d2;
                }
            }
        }
        Ok(self.sqrt.mul(&inner_jac))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    fn systems() -> Vec<TripleSystem> {
        vec![
            TripleSystem::hilbert_ball(1).unwrap(),
            TripleSystem::hilbert_ball(3).unwrap(),
            TripleSystem::polydisc(2).unwrap(),
            TripleSystem::product_of_balls(&[2, 1]).unwrap(),
        ]
    }

    fn inside(sys: &TripleSystem, r: f64, rng: &mut ChaCha8Rng) -> Vec<C<f64>> {
        sys.space::<f64>().ball_sample(r, rng)
    }

    #[test]
    fn bergman_sqrt_squares_to_bergman() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for sys in systems() {
            let a = inside(&sys, 0.9, &mut rng);
            let b = sys.bergman(&a, &a).unwrap();
            let s = sys.bergman_sqrt(&a).unwrap();
            assert!(s.mul(&s).sub(&b).max_abs() < 1e-14, "{sys:?}");
        }
    }

    #[test]
    fn ball_bergman_closed_form() {
        let sys = TripleSystem::hilbert_ball(2).unwrap();
        let a = vec![c(0.3, 0.1), c(-0.2, 0.4)];
        let r2 = euclid(&a).powi(2);
        let aa = CMat::outer(&a, &crate::scalar::conj_vec(&a));
        let expect = CMat::identity(2).sub(&aa).scale(c(1.0 - r2, 0.0));
        assert!(sys.bergman(&a, &a).unwrap().sub(&expect).max_abs() < 1e-15);
    }

    #[test]
    fn mobius_swaps_zero_and_center_and_is_an_involution_pair() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for sys in systems() {
            let a = inside(&sys, 0.8, &mut rng);
            let g = sys.mobius(&a).unwrap();
            let at0 = g.eval(&zeros(sys.dim())).unwrap();
            assert!(euclid(&crate::scalar::sub_vec(&at0, &a)) < 1e-15);
            let minus: Vec<C<f64>> = a.iter().map(|x| -x).collect();
            let back = g.eval(&minus).unwrap();
            assert!(euclid(&back) < 1e-14, "{sys:?}");
            // g_{-a} ∘ g_a = id
            let ginv = sys.mobius(&minus).unwrap();
            let z = inside(&sys, 0.9, &mut rng);
            let zz = ginv.eval(&g.eval(&z).unwrap()).unwrap();
            assert!(euclid(&crate::scalar::sub_vec(&zz, &z)) < 1e-13);
        }
    }

    #[test]
    fn mobius_maps_ball_into_ball() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for sys in systems() {
            let space = sys.space::<f64>();
            let g = sys.mobius(&inside(&sys, 0.95, &mut rng)).unwrap();
            for _ in 0..100 {
                let z = inside(&sys, 1.0, &mut rng);
                assert!(space.norm(&g.eval(&z).unwrap()).unwrap() < 1.0);
            }
        }
    }

    #[test]
    fn jacobian_matches_difference_quotient() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for sys in systems() {
            let g = sys.mobius(&inside(&sys, 0.7, &mut rng)).unwrap();
            let z = inside(&sys, 0.5, &mut rng);
            let jac = g.jacobian(&z).unwrap();
            let h = 1e-6;
            for j in 0..sys.dim() {
                let mut zp = z.clone();
                let mut zm = z.clone();
                zp[j] += c(h, 0.0);
                zm[j] -= c(h, 0.0);
                let fp = g.eval(&zp).unwrap();
                let fm = g.eval(&zm).unwrap();
                for i in 0..sys.dim() {
                    let fd = (fp[i] - fm[i]) / (2.0 * h);
                    assert!((fd - jac[(i, j)]).norm() < 1e-8, "{sys:?}");
                }
            }
        }
    }

    #[test]
    fn kaup_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for sys in systems() {
            let z = inside(&sys, 0.9, &mut rng);
            let nz = sys.space::<f64>().norm(&z).unwrap();
            let k = sys.kaup_norm(&z).unwrap();
            assert!((k - 1.0 / (1.0 - nz * nz)).abs() < 1e-12 * k, "{sys:?}: {k}");
        }
    }

    #[test]
    fn metric_constants() {
        let disc = TripleSystem::hilbert_ball(1).unwrap();
        let t = 0.37;
        assert!((disc.h0(&[c(t, 0.0)], &[c(t, 0.0)]).unwrap().re - 2.0 * t * t).abs() < 1e-15);
        assert_eq!(disc.c_constant::<f64>(), 1.0);
        let bi = TripleSystem::polydisc(2).unwrap();
        let v = [c(t, 0.0), c(t, 0.0)];
        assert!((bi.h0(&v, &v).unwrap().re - 4.0 * t * t).abs() < 1e-15);
        for sys in systems() {
            let cc: f64 = sys.c_constant();
            let (d, r) = (sys.dim() as f64, sys.rank() as f64);
            assert!((d + r) / 2.0 <= cc + 1e-15 && cc <= d + 1e-15);
        }
    }

    #[test]
    fn pairing_is_inner_product_on_the_ball() {
        let sys = TripleSystem::hilbert_ball(3).unwrap();
        let x = vec![c(0.1, 0.2), c(0.3, -0.1), c(0.0, 0.5)];
        let b = vec![c(0.6, 0.0), c(0.0, 0.8), c(0.0, 0.0)];
        assert!((sys.pairing(&x, &b).unwrap() - inner(&x, &b)).norm() < 1e-15);
    }

    #[test]
    fn maximal_tripotents() {
        let ball = TripleSystem::hilbert_ball(2).unwrap();
        assert!(ball.is_maximal_tripotent(&[c(0.6, 0.0), c(0.8, 0.0)]));
        let bi = TripleSystem::polydisc(2).unwrap();
        assert!(bi.is_maximal_tripotent(&[c(0.0, 1.0), c(-1.0, 0.0)]));
        assert!(!bi.is_maximal_tripotent(&[c(1.0, 0.0), c(0.0, 0.0)]));
        let prod = TripleSystem::product_of_balls(&[2, 1]).unwrap();
        assert!(prod.is_maximal_tripotent(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, -1.0)]));
        assert!(!prod.is_maximal_tripotent(&[c(0.6, 0.0), c(0.0, 0.8), c(0.0, -0.5)]));
        for sys in systems() {
            let e: Vec<C<f64>> = sys
                .blocks()
                .iter()
                .flat_map(|&(_, l)| {
                    let mut v = vec![c(0.0, 0.0); l];
                    v[0] = c(1.0, 0.0);
                    v
                })
                .collect();
            assert!((sys.pairing(&e, &e).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        }
    }
}
