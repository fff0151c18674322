use serde::{Deserialize, Serialize};
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// A point w = x + iy of the profile plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: f64,
    pub y: f64,
}

impl PlanarPoint {
    pub const ORIGIN: PlanarPoint = PlanarPoint { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        PlanarPoint { x, y }
    }

    #[inline]
    pub fn polar(r: f64, phi: f64) -> Self {
        PlanarPoint::new(r * phi.cos(), r * phi.sin())
    }

    #[inline]
    pub fn r(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn r2(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    #[inline]
    pub fn phi(self) -> f64 {
        self.y.atan2(self.x)
    }

    #[inline]
    pub fn dot(self, o: Self) -> f64 {
        self.x * o.x + self.y * o.y
    }

    #[inline]
    pub fn cross(self, o: Self) -> f64 {
        self.x * o.y - self.y * o.x
    }

    #[inline]
    pub fn conj(self) -> Self {
        PlanarPoint::new(self.x, -self.y)
    }

    /// Rotation by +π/2.
    #[inline]
    pub fn perp(self) -> Self {
        PlanarPoint::new(-self.y, self.x)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.r()
    }

    pub fn normalized(self) -> Self {
        let n = self.norm();
        PlanarPoint::new(self.x / n, self.y / n)
    }

    #[inline]
    pub fn dist(self, o: Self) -> f64 {
        (self - o).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for PlanarPoint {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        PlanarPoint::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for PlanarPoint {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for PlanarPoint {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        PlanarPoint::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for PlanarPoint {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        PlanarPoint::new(-self.x, -self.y)
    }
}

impl Mul<f64> for PlanarPoint {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        PlanarPoint::new(self.x * s, self.y * s)
    }
}

impl Mul<PlanarPoint> for f64 {
    type Output = PlanarPoint;
    #[inline]
    fn mul(self, p: PlanarPoint) -> PlanarPoint {
        p * self
    }
}

/// Distance from `p` to the segment `[a, b]`.
pub(crate) fn point_segment_distance(p: PlanarPoint, a: PlanarPoint, b: PlanarPoint) -> f64 {
    let d = b - a;
    let l2 = d.r2();
    if l2 == 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(d) / l2).clamp(0.0, 1.0);
    p.dist(a + d * t)
}
