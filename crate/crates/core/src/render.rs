//! SVG drawing of planar arrangements.
//!
//! Clipping is exact; only the emitted coordinates are rounded (9 decimal
//! places), so the picture is for display and not a data format.

use std::fmt::Write;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::geometry::{ColoredArrangement, Hyperplane, Vector};
use crate::scalar::{self, Scalar};

const PALETTE: [&str; 6] = ["red", "green", "blue", "orange", "purple", "teal"];
const WIDTH: i64 = 600;
const DIGITS: u32 = 9;

/// Axis-aligned drawing window `[x_min, x_max] x [y_min, y_max]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub x_min: Scalar,
    pub x_max: Scalar,
    pub y_min: Scalar,
    pub y_max: Scalar,
}

impl Default for Window {
    fn default() -> Self {
        Window::square(scalar::int(-3), scalar::int(3))
    }
}

impl Window {
    pub fn square(min: Scalar, max: Scalar) -> Self {
        Window {
            x_min: min.clone(),
            x_max: max.clone(),
            y_min: min,
            y_max: max,
        }
    }

    /// `"min,max"` for a square or `"x_min,x_max,y_min,y_max"`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|t| scalar::parse(t.trim()))
            .collect::<Result<Vec<Scalar>>>()?;
        match <[Scalar; 4]>::try_from(values) {
            Ok([x_min, x_max, y_min, y_max]) => Ok(Window {
                x_min,
                x_max,
                y_min,
                y_max,
            }),
            Err(values) => match <[Scalar; 2]>::try_from(values) {
                Ok([min, max]) => Ok(Window::square(min, max)),
                Err(_) => Err(Error::Parse(format!(
                    "window needs 2 or 4 comma-separated rationals, got {text:?}"
                ))),
            },
        }
    }

    fn check(&self) -> Result<()> {
        if self.x_min >= self.x_max || self.y_min >= self.y_max {
            return Err(Error::InvalidParameter("empty drawing window".into()));
        }
        Ok(())
    }

    fn contains(&self, p: &Vector) -> bool {
        (&self.x_min..=&self.x_max).contains(&&p[0]) && (&self.y_min..=&self.y_max).contains(&&p[1])
    }
}

/// Part of the line inside the window, as its two end points, or `None`
/// when the line misses the window or only touches a corner.
pub fn clip(line: &Hyperplane, window: &Window) -> Option<(Vector, Vector)> {
    let n = line.normal();
    let (a, b, c) = (&n[0], &n[1], line.offset());
    let mut hits: Vec<Vector> = Vec::new();
    let mut add = |p: Vector| {
        if window.contains(&p) && !hits.contains(&p) {
            hits.push(p);
        }
    };
    if !b.is_zero() {
        for x in [&window.x_min, &window.x_max] {
            add(Vector::new(vec![x.clone(), (c - a * x) / b]));
        }
    }
    if !a.is_zero() {
        for y in [&window.y_min, &window.y_max] {
            add(Vector::new(vec![(c - b * y) / a, y.clone()]));
        }
    }
    // order along the direction (-b, a)
    let key = |p: &Vector| -b * &p[0] + a * &p[1];
    let first = hits.iter().min_by_key(|p| key(p))?.clone();
    let last = hits.iter().max_by_key(|p| key(p))?.clone();
    (first != last).then_some((first, last))
}

struct Canvas {
    window: Window,
    scale: Scalar,
}

impl Canvas {
    fn x(&self, x: &Scalar) -> String {
        scalar::to_decimal(&((x - &self.window.x_min) * &self.scale), DIGITS)
    }

    fn y(&self, y: &Scalar) -> String {
        scalar::to_decimal(&((&self.window.y_max - y) * &self.scale), DIGITS)
    }
}

fn describe(h: &Hyperplane) -> String {
    let n = h.normal();
    format!(
        "{} x + {} y = {}",
        scalar::format(&n[0]),
        scalar::format(&n[1]),
        scalar::format(h.offset())
    )
}

/// Draws each class in its own color (red, green, blue, ... in class order).
/// Repeated lines within a class are drawn once and labelled with their
/// multiplicity.
pub fn render_svg(arrangement: &ColoredArrangement, window: &Window) -> Result<String> {
    if arrangement.dimension() != 2 {
        return Err(Error::UnsupportedDimension(arrangement.dimension()));
    }
    window.check()?;
    let scale = scalar::int(WIDTH) / (&window.x_max - &window.x_min);
    let height = (&window.y_max - &window.y_min) * &scale;
    let canvas = Canvas {
        window: window.clone(),
        scale,
    };
    let width = scalar::int(WIDTH);

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">",
        w = scalar::to_decimal(&width, DIGITS),
        h = scalar::to_decimal(&height, DIGITS),
    );
    let _ = writeln!(
        out,
        "  <rect x=\"0\" y=\"0\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\"/>",
        scalar::to_decimal(&width, DIGITS),
        scalar::to_decimal(&height, DIGITS),
    );
    for (index, class) in arrangement.classes().iter().enumerate() {
        let color = PALETTE[index % PALETTE.len()];
        let label = arrangement
            .labels()
            .map_or_else(|| format!("class {index}"), |l| l[index].clone());
        let mut groups: Vec<(&Hyperplane, usize)> = Vec::new();
        for h in class {
            match groups.iter_mut().find(|(g, _)| g.same_locus(h)) {
                Some((_, count)) => *count += 1,
                None => groups.push((h, 1)),
            }
        }
        let _ = writeln!(
            out,
            "  <g stroke=\"{color}\" fill=\"{color}\" data-class=\"{label}\">"
        );
        for (h, count) in groups {
            let _ = writeln!(out, "    <!-- {} -->", describe(h));
            let Some((p, q)) = clip(h, window) else {
                continue;
            };
            let _ = writeln!(
                out,
                "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke-width=\"2\"/>",
                canvas.x(&p[0]),
                canvas.y(&p[1]),
                canvas.x(&q[0]),
                canvas.y(&q[1]),
            );
            if count > 1 {
                // label the right-hand end, or the top end of a vertical line
                let anchor =
                    if (q[0].clone() - &p[0]).is_positive() || (q[0] == p[0] && q[1] > p[1]) {
                        &q
                    } else {
                        &p
                    };
                let _ = writeln!(
                    out,
                    "    <text x=\"{}\" y=\"{}\" font-size=\"16\" stroke=\"none\">\u{d7}{count}</text>",
                    canvas.x(&anchor[0]),
                    canvas.y(&anchor[1]),
                );
            }
        }
        let _ = writeln!(out, "  </g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{highdim_counterexample, planar_counterexample};

    fn line(a: i64, b: i64, c: i64) -> Hyperplane {
        Hyperplane::from_ints(&[a, b], c)
    }

    #[test]
    fn clipping_is_exact() {
        let w = Window::default();
        let (p, q) = clip(&line(1, 0, 1), &w).unwrap();
        assert_eq!(
            (p, q),
            (Vector::from_ints(&[1, -3]), Vector::from_ints(&[1, 3]))
        );
        let (p, q) = clip(&line(1, 1, 0), &w).unwrap();
        assert_eq!(
            (p, q),
            (Vector::from_ints(&[3, -3]), Vector::from_ints(&[-3, 3]))
        );
        let (p, q) = clip(&line(1, 2, 1), &w).unwrap();
        assert_eq!(p, Vector::new(vec![scalar::int(3), scalar::int(-1)]));
        assert_eq!(q, Vector::new(vec![scalar::int(-3), scalar::int(2)]));
        assert!(clip(&line(1, 0, 5), &w).is_none());
        // touches a corner only
        assert!(clip(&line(1, 1, 6), &w).is_none());
    }

    #[test]
    fn planar_two_has_six_segments_in_three_colors() {
        let svg = render_svg(&planar_counterexample(2).unwrap(), &Window::default()).unwrap();
        assert_eq!(svg.matches("<line ").count(), 6);
        for color in ["red", "green", "blue"] {
            assert!(svg.contains(&format!("stroke=\"{color}\"")));
        }
        assert!(!svg.contains('\u{d7}'));
    }

    #[test]
    fn planar_three_annotates_repeated_lines() {
        let svg = render_svg(&planar_counterexample(3).unwrap(), &Window::default()).unwrap();
        assert_eq!(svg.matches("<line ").count(), 6);
        assert_eq!(svg.matches("\u{d7}2").count(), 3);
        // each line's markup runs from its comment to the next one
        for chunk in svg.split("<!--").skip(1) {
            let repeated = ["1 x + 0 y = 1", "1 x + 1 y = 0", "0 x + 1 y = -1"]
                .iter()
                .any(|d| chunk.starts_with(&format!(" {d} ")));
            assert_eq!(chunk.contains("\u{d7}2"), repeated, "{chunk}");
        }
    }

    #[test]
    fn output_is_deterministic() {
        let arr = planar_counterexample(4).unwrap();
        let w = Window::parse("-5/2,7/3").unwrap();
        assert_eq!(render_svg(&arr, &w).unwrap(), render_svg(&arr, &w).unwrap());
        assert!(render_svg(&arr, &w).unwrap().contains("0.000000000"));
    }

    #[test]
    fn bad_inputs() {
        let arr = planar_counterexample(2).unwrap();
        let empty = Window::square(scalar::int(1), scalar::int(1));
        assert!(matches!(
            render_svg(&arr, &empty),
            Err(Error::InvalidParameter(_))
        ));
        let high = highdim_counterexample(3, 2, None).unwrap();
        assert_eq!(
            render_svg(&high, &Window::default()),
            Err(Error::UnsupportedDimension(3))
        );
        assert!(Window::parse("1,2,3").is_err());
        assert!(Window::parse("0,1/0").is_err());
    }
}
