//! Numeric foundations: generic scalar, dual numbers, small vectors/matrices,
//! and rigid isometries usable on both the plain and the derivative path.

mod scalar;
mod vec3;

pub use scalar::{Dual, Real, MAX_PARAMS};
pub use vec3::{Mat3, Mat3d, Mat3f, Vec3, Vec3d, Vec3f};

/// Rigid isometry (rotation + translation) over a generic scalar.
#[derive(Clone, Copy, Debug)]
pub struct Iso3<S> {
    pub rotation: Mat3<S>,
    pub translation: Vec3<S>,
}

pub type Iso3f = Iso3<f64>;
pub type Iso3d = Iso3<Dual>;

impl<S: Real> Iso3<S> {
    #[inline]
    pub fn new(rotation: Mat3<S>, translation: Vec3<S>) -> Self {
        Iso3 { rotation, translation }
    }

    #[inline]
    pub fn identity() -> Self {
        Iso3::new(Mat3::identity(), Vec3::zero())
    }

    #[inline]
    pub fn from_translation(t: Vec3<S>) -> Self {
        Iso3::new(Mat3::identity(), t)
    }

    /// Apply to a point: `R p + t`.
    #[inline]
    pub fn apply(&self, p: Vec3<S>) -> Vec3<S> {
        self.rotation.mul_vec(p) + self.translation
    }

    /// Apply the inverse without forming it: `R^T (p - t)`.
    #[inline]
    pub fn apply_inverse(&self, p: Vec3<S>) -> Vec3<S> {
        self.rotation.tr_mul_vec(p - self.translation)
    }

    /// Composition `self ∘ rhs` (apply `rhs` first).
    #[inline]
    pub fn compose(&self, rhs: &Iso3<S>) -> Iso3<S> {
        Iso3::new(
            self.rotation.mul_mat(&rhs.rotation),
            self.rotation.mul_vec(rhs.translation) + self.translation,
        )
    }

    pub fn inverse(&self) -> Iso3<S> {
        let rt = self.rotation.transpose();
        Iso3::new(rt, -rt.mul_vec(self.translation))
    }

    pub fn lift(t: &Iso3f) -> Self {
        Iso3::new(Mat3::lift(&t.rotation), Vec3::lift(t.translation))
    }

    pub fn value(&self) -> Iso3f {
        Iso3f::new(self.rotation.value(), self.translation.value())
    }
}

/// SplitMix64 step; used to derive independent child seeds from a master seed.
pub fn derive_seed(master: u64, salt: u64) -> u64 {
    let mut z = master ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}
