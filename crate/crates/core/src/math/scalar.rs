//! Scalar abstraction shared by the plain and derivative-carrying numeric paths.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

/// Capacity of the gradient carried by [`Dual`]. A grasp parameter vector is
/// `3 (offset) + 6 (rotation) + dof` wide, so hands with up to
/// `MAX_PARAMS - 9` joints are supported.
pub const MAX_PARAMS: usize = 32;

/// Scalar usable in the geometry and kinematics kernels.
///
/// Implemented by `f64` (plain evaluation) and [`Dual`] (forward-mode
/// derivative propagation). Branch decisions (`lt`, `select_max`, ...)
/// always look at the primal value only, so both paths take identical
/// branches at the same configuration.
pub trait Real:
    Copy
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
{
    fn from_f64(v: f64) -> Self;
    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    /// Primal (value) part.
    fn value(self) -> f64;

    fn sqrt(self) -> Self;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn exp(self) -> Self;
    fn abs(self) -> Self;

    fn lt(self, other: Self) -> bool {
        self.value() < other.value()
    }
    /// `max` keeping the whole operand; ties select `self`.
    fn select_max(self, other: Self) -> Self {
        if other.value() > self.value() {
            other
        } else {
            self
        }
    }
    /// `min` keeping the whole operand; ties select `self`.
    fn select_min(self, other: Self) -> Self {
        if other.value() < self.value() {
            other
        } else {
            self
        }
    }
    /// Clamp into `[lo, hi]`; at the boundary the unclamped operand wins,
    /// so derivatives still flow for parameters sitting exactly on a limit.
    fn clamp_to(self, lo: f64, hi: f64) -> Self {
        self.select_min(Self::from_f64(hi)).select_max(Self::from_f64(lo))
    }
}

impl Real for f64 {
    #[inline]
    fn from_f64(v: f64) -> Self {
        v
    }
    #[inline]
    fn value(self) -> f64 {
        self
    }
    #[inline]
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    #[inline]
    fn sin(self) -> Self {
        f64::sin(self)
    }
    #[inline]
    fn cos(self) -> Self {
        f64::cos(self)
    }
    #[inline]
    fn exp(self) -> Self {
        f64::exp(self)
    }
    #[inline]
    fn abs(self) -> Self {
        f64::abs(self)
    }
}

/// Forward-mode dual number with a fixed-capacity gradient.
///
/// All `MAX_PARAMS` lanes are propagated unconditionally; callers seed the
/// lanes they use and read back as many as the active parameter dimension.
#[derive(Clone, Copy, Debug)]
pub struct Dual {
    pub re: f64,
    pub dx: [f64; MAX_PARAMS],
}

impl Dual {
    #[inline]
    pub fn constant(re: f64) -> Self {
        Dual { re, dx: [0.0; MAX_PARAMS] }
    }

    /// A variable seeded on gradient lane `lane`.
    #[inline]
    pub fn variable(re: f64, lane: usize) -> Self {
        let mut dx = [0.0; MAX_PARAMS];
        dx[lane] = 1.0;
        Dual { re, dx }
    }

    /// Gradient restricted to the first `dim` lanes.
    pub fn gradient(&self, dim: usize) -> Vec<f64> {
        self.dx[..dim].to_vec()
    }

    #[inline]
    fn map(self, re: f64, scale: f64) -> Self {
        let mut dx = self.dx;
        for d in dx.iter_mut() {
            *d *= scale;
        }
        Dual { re, dx }
    }
}

impl Add for Dual {
    type Output = Dual;
    #[inline]
    fn add(self, rhs: Dual) -> Dual {
        let mut dx = self.dx;
        for (d, r) in dx.iter_mut().zip(rhs.dx.iter()) {
            *d += r;
        }
        Dual { re: self.re + rhs.re, dx }
    }
}

impl Sub for Dual {
    type Output = Dual;
    #[inline]
    fn sub(self, rhs: Dual) -> Dual {
        let mut dx = self.dx;
        for (d, r) in dx.iter_mut().zip(rhs.dx.iter()) {
            *d -= r;
        }
        Dual { re: self.re - rhs.re, dx }
    }
}

impl Mul for Dual {
    type Output = Dual;
    #[inline]
    fn mul(self, rhs: Dual) -> Dual {
        let mut dx = [0.0; MAX_PARAMS];
        for i in 0..MAX_PARAMS {
            dx[i] = self.dx[i] * rhs.re + rhs.dx[i] * self.re;
        }
        Dual { re: self.re * rhs.re, dx }
    }
}

impl Div for Dual {
    type Output = Dual;
    #[inline]
    fn div(self, rhs: Dual) -> Dual {
        let inv = 1.0 / rhs.re;
        let re = self.re * inv;
        let mut dx = [0.0; MAX_PARAMS];
        for i in 0..MAX_PARAMS {
            dx[i] = (self.dx[i] - re * rhs.dx[i]) * inv;
        }
        Dual { re, dx }
    }
}

impl Neg for Dual {
    type Output = Dual;
    #[inline]
    fn neg(self) -> Dual {
        self.map(-self.re, -1.0)
    }
}

impl AddAssign for Dual {
    #[inline]
    fn add_assign(&mut self, rhs: Dual) {
        *self = *self + rhs;
    }
}

impl SubAssign for Dual {
    #[inline]
    fn sub_assign(&mut self, rhs: Dual) {
        *self = *self - rhs;
    }
}

impl Real for Dual {
    #[inline]
    fn from_f64(v: f64) -> Self {
        Dual::constant(v)
    }
    #[inline]
    fn value(self) -> f64 {
        self.re
    }
    #[inline]
    fn sqrt(self) -> Self {
        let r = self.re.sqrt();
        self.map(r, 0.5 / r)
    }
    #[inline]
    fn sin(self) -> Self {
        self.map(self.re.sin(), self.re.cos())
    }
    #[inline]
    fn cos(self) -> Self {
        self.map(self.re.cos(), -self.re.sin())
    }
    #[inline]
    fn exp(self) -> Self {
        let e = self.re.exp();
        self.map(e, e)
    }
    #[inline]
    fn abs(self) -> Self {
        if self.re < 0.0 {
            -self
        } else {
            self
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(re: f64, lane: usize) -> Dual {
        Dual::variable(re, lane)
    }

    #[test]
    fn product_rule() {
        let x = d(3.0, 0);
        let y = d(5.0, 1);
        let p = x * y;
        assert_eq!(p.re, 15.0);
        assert_eq!(p.dx[0], 5.0);
        assert_eq!(p.dx[1], 3.0);
    }

    #[test]
    fn quotient_and_sqrt() {
        let x = d(4.0, 0);
        let q = Dual::constant(1.0) / x; // d(1/x) = -1/x^2
        assert!((q.dx[0] + 1.0 / 16.0).abs() < 1e-15);
        let s = x.sqrt(); // d(sqrt x) = 1/(2 sqrt x)
        assert!((s.re - 2.0).abs() < 1e-15);
        assert!((s.dx[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn trig_exp_chain() {
        let x = d(0.7, 2);
        let f = (x.sin() * x.exp()).cos();
        // f(x) = cos(sin(x) e^x); f'(x) = -sin(sin x e^x) (cos x e^x + sin x e^x)
        let u = 0.7_f64.sin() * 0.7_f64.exp();
        let du = 0.7_f64.cos() * 0.7_f64.exp() + 0.7_f64.sin() * 0.7_f64.exp();
        assert!((f.re - u.cos()).abs() < 1e-15);
        assert!((f.dx[2] + u.sin() * du).abs() < 1e-14);
    }

    #[test]
    fn clamp_keeps_gradient_at_boundary() {
        let x = d(2.0, 0);
        let c = x.clamp_to(0.0, 2.0);
        assert_eq!(c.re, 2.0);
        assert_eq!(c.dx[0], 1.0); // ties select the variable, not the bound
        let over = d(2.5, 0).clamp_to(0.0, 2.0);
        assert_eq!(over.re, 2.0);
        assert_eq!(over.dx[0], 0.0);
    }
}
