use super::{ComponentSpline, PlanarPoint, ProfileCurve};
use serde::{Deserialize, Serialize};

/// The cone C^b_a: the union of the full lines through 0 at angles b ± a/2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConeSpec {
    pub axis_angle: f64,
    pub opening: f64,
}

impl ConeSpec {
    pub fn new(axis_angle: f64, opening: f64) -> Self {
        ConeSpec { axis_angle, opening }
    }

    /// C^0_a.
    pub fn symmetric(opening: f64) -> Self {
        ConeSpec { axis_angle: 0.0, opening }
    }

    pub fn line_angles(&self) -> [f64; 2] {
        [self.axis_angle - 0.5 * self.opening, self.axis_angle + 0.5 * self.opening]
    }
}

/// A transversal crossing of a curve edge with a cone line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCrossing {
    pub point: PlanarPoint,
    pub component: usize,
    /// Spline parameter of the crossing.
    pub parameter: f64,
    pub line_angle: f64,
}

const TIE: f64 = 1e-12;

/// Signed distances of the vertices to the line through 0 at `angle`, with
/// vertices lying on the line nudged along the inward normal.
fn signed_distances(c: &[PlanarPoint], angle: f64) -> Vec<f64> {
    let nrm = PlanarPoint::new(-angle.sin(), angle.cos());
    let n = c.len();
    (0..n)
        .map(|i| {
            let s = nrm.dot(c[i]);
            if s.abs() >= TIE {
                return s;
            }
            let tangent = (c[(i + 1) % n] - c[(i + n - 1) % n]).normalized();
            let nudged = nrm.dot(c[i] + tangent.perp() * TIE);
            if nudged.abs() >= 0.5 * TIE {
                return nudged;
            }
            // a normal crossing at right angles: the normal nudge slides
            // along the line, so fall back to the forward tangent
            nrm.dot(c[i] + tangent * TIE)
        })
        .collect()
}

/// Transversal crossings of the curve with both lines of `cone`, sorted by
/// radius.
pub fn cone_intersections(curve: &ProfileCurve, cone: &ConeSpec) -> (usize, Vec<ConeCrossing>) {
    let mut out = vec![];
    for (k, c) in curve.components.iter().enumerate() {
        let sp = ComponentSpline::new(c);
        for angle in cone.line_angles() {
            let nrm = PlanarPoint::new(-angle.sin(), angle.cos());
            let s = signed_distances(c, angle);
            let n = c.len();
            for i in 0..n {
                let (a, b) = (s[i], s[(i + 1) % n]);
                if a * b < 0.0 {
                    let u = if nrm.dot(c[i]).abs() < TIE {
                        i as f64
                    } else if nrm.dot(c[(i + 1) % n]).abs() < TIE {
                        (i + 1) as f64
                    } else {
                        sp.refine_crossing(i, |p| nrm.dot(p))
                    };
                    out.push(ConeCrossing { point: sp.eval(u), component: k, parameter: u, line_angle: angle });
                }
            }
        }
    }
    out.sort_by(|a, b| a.point.r().partial_cmp(&b.point.r()).unwrap());
    (out.len(), out)
}

/// Number of crossings with the round circle of radius `r` about 0.
pub fn circle_crossings(curve: &ProfileCurve, r: f64) -> usize {
    let mut count = 0;
    for c in &curve.components {
        let n = c.len();
        for i in 0..n {
            let a = tie_break(c[i].r() - r);
            let b = tie_break(c[(i + 1) % n].r() - r);
            if a * b < 0.0 {
                count += 1;
            }
        }
    }
    count
}

/// Vertices on the circle count as outside; tangential touches then give
/// no crossing and transversal ones exactly one.
fn tie_break(d: f64) -> f64 {
    if d.abs() < TIE {
        TIE
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Brute-force oracle: count sign changes of the cross product directly.
    fn brute(curve: &ProfileCurve, cone: &ConeSpec) -> usize {
        let mut n = 0;
        for c in &curve.components {
            for ang in cone.line_angles() {
                let d = PlanarPoint::polar(1.0, ang);
                for i in 0..c.len() {
                    let a = d.cross(c[i]);
                    let b = d.cross(c[(i + 1) % c.len()]);
                    if a * b < 0.0 {
                        n += 1;
                    }
                }
            }
        }
        n
    }

    #[test]
    fn examples() {
        let quarter = ConeSpec::symmetric(PI / 2.0);
        // the default circle has vertices on the diagonals: tie-break applies
        let (n, pts) = cone_intersections(&ProfileCurve::circle(1.0, 64), &quarter);
        assert_eq!(n, 4);
        assert!(pts.iter().all(|c| (c.point.r() - 1.0).abs() < 1e-6));
        let far = ProfileCurve::chekanov_pair(PlanarPoint::new(2.0, 0.0), 0.5, 64).unwrap();
        let single = ProfileCurve { components: vec![far.components[0].clone()], class: far.class };
        assert_eq!(cone_intersections(&single, &quarter).0, 0);
        let ell = ProfileCurve::star(|phi| 1.0 / ((phi.cos() / 2.0).powi(2) + phi.sin().powi(2)).sqrt(), 101);
        assert_eq!(cone_intersections(&ell, &quarter).0, 4);
        assert_eq!(brute(&ell, &quarter), 4);
    }

    #[test]
    fn circle_crossing_count() {
        let c = ProfileCurve::star(|phi| 1.0 + 0.1 * (2.0 * phi).cos(), 256);
        assert_eq!(circle_crossings(&c, 1.0), 4);
        assert_eq!(circle_crossings(&c, 2.0), 0);
    }
}
