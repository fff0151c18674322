//! Deterministic SVG rendering of profile curves on the fixed viewport
//! [−3, 3]².

use std::fmt::Write as _;

use crate::cp2_core::{cone_intersections, ConeSpec, PlanarPoint, ProfileCurve};

const SIZE: f64 = 600.0;
const HALF: f64 = 3.0;

/// Extra marks drawn under the curves.
#[derive(Debug, Clone, PartialEq)]
pub enum Decoration {
    /// Dashed cone lines, with the crossings of every curve marked.
    Cone(ConeSpec),
    Circle { center: PlanarPoint, radius: f64 },
    /// Shaded Euclidean disc.
    Disc { center: PlanarPoint, radius: f64 },
    /// Shaded closed polygon.
    Region(Vec<PlanarPoint>),
}

fn px(p: PlanarPoint) -> (f64, f64) {
    ((p.x + HALF) / (2.0 * HALF) * SIZE, (HALF - p.y) / (2.0 * HALF) * SIZE)
}

fn path(pts: &[PlanarPoint]) -> String {
    let mut d = String::new();
    for (i, p) in pts.iter().enumerate() {
        let (x, y) = px(*p);
        let _ = write!(d, "{}{x:.3},{y:.3} ", if i == 0 { "M" } else { "L" });
    }
    d.push('Z');
    d
}

/// Renders the curves over the decorations. Output depends only on the
/// input, never on time or locale.
pub fn render_svg(curves: &[&ProfileCurve], decorations: &[Decoration]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(s, r##"<rect width="100%" height="100%" fill="#ffffff"/>"##);
    let (ox, oy) = px(PlanarPoint::ORIGIN);
    let _ = writeln!(
        s,
        r##"<path d="M0,{oy:.3} L{SIZE},{oy:.3} M{ox:.3},0 L{ox:.3},{SIZE}" stroke="#cccccc" stroke-width="0.5"/>"##
    );
    for d in decorations {
        match d {
            Decoration::Cone(cone) => {
                for a in cone.line_angles() {
                    let far = PlanarPoint::polar(2.0 * HALF, a);
                    let (x0, y0) = px(-far);
                    let (x1, y1) = px(far);
                    let _ = writeln!(
                        s,
                        r##"<line x1="{x0:.3}" y1="{y0:.3}" x2="{x1:.3}" y2="{y1:.3}" stroke="#777777" stroke-width="0.8" stroke-dasharray="6,4"/>"##
                    );
                }
                for c in curves {
                    for hit in cone_intersections(c, cone).1 {
                        let (x, y) = px(hit.point);
                        let _ = writeln!(s, r##"<circle cx="{x:.3}" cy="{y:.3}" r="2.5" fill="#d62728"/>"##);
                    }
                }
            }
            Decoration::Circle { center, radius } => {
                let (x, y) = px(*center);
                let r = radius / (2.0 * HALF) * SIZE;
                let _ = writeln!(
                    s,
                    r##"<circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="none" stroke="#999999" stroke-width="0.6" stroke-dasharray="2,3"/>"##
                );
            }
            Decoration::Disc { center, radius } => {
                let (x, y) = px(*center);
                let r = radius / (2.0 * HALF) * SIZE;
                let _ = writeln!(
                    s,
                    r##"<circle cx="{x:.3}" cy="{y:.3}" r="{r:.3}" fill="#2ca02c" fill-opacity="0.25" stroke="#2ca02c" stroke-width="0.6"/>"##
                );
            }
            Decoration::Region(pts) => {
                let _ = writeln!(s, r##"<path d="{}" fill="#1f77b4" fill-opacity="0.2" stroke="none"/>"##, path(pts));
            }
        }
    }
    for c in curves {
        for comp in &c.components {
            let _ = writeln!(
                s,
                r##"<path d="{}" fill="none" stroke="#000000" stroke-width="1.2" stroke-linejoin="round"/>"##,
                path(comp)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn unit_circle_with_right_cone_marks_four_crossings() {
        let c = ProfileCurve::circle(1.0, 256);
        let svg = render_svg(&[&c], &[Decoration::Cone(ConeSpec::symmetric(FRAC_PI_2))]);
        assert_eq!(svg.matches("fill=\"#d62728\"").count(), 4);
        assert_eq!(svg, render_svg(&[&c], &[Decoration::Cone(ConeSpec::symmetric(FRAC_PI_2))]));
    }
}
