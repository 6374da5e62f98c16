use crate::error::{CliError, Result};
use crate::scene::{DrawableKind, Scene, Style};
use std::fs;
use std::path::Path;

const CANVAS_W: f64 = 800.0;
const CANVAS_H: f64 = 600.0;
const ELLIPSE_SAMPLES: usize = 64;

/// Fixed-precision float formatting; normalizes negative zero so identical
/// scenes always serialize to identical bytes.
fn fmt(v: f64) -> String {
    let s = format!("{v:.6}");
    if s == "-0.000000" {
        "0.000000".to_string()
    } else {
        s
    }
}

fn escape_xml(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Plot-space geometry: data y is negated so the figure reads with y up.
enum Shape {
    Circle([f64; 2]),
    Poly { pts: Vec<[f64; 2]>, closed: bool },
    /// Infinite line a*x + b*y = c, clipped at render time.
    Line { a: f64, b: f64, c: f64 },
}

struct Bounds {
    min_x: f64,
    max_x: f64,
    min_y: f64,
    max_y: f64,
}

impl Bounds {
    fn empty() -> Self {
        Bounds {
            min_x: f64::INFINITY,
            max_x: f64::NEG_INFINITY,
            min_y: f64::INFINITY,
            max_y: f64::NEG_INFINITY,
        }
    }

    fn include(&mut self, p: [f64; 2]) {
        self.min_x = self.min_x.min(p[0]);
        self.max_x = self.max_x.max(p[0]);
        self.min_y = self.min_y.min(p[1]);
        self.max_y = self.max_y.max(p[1]);
    }

    /// Final viewBox: empty scenes get the unit square, collapsed axes are
    /// widened to ±1 around their center, then a 5% margin is added.
    fn finish(mut self) -> (f64, f64, f64, f64) {
        if !self.min_x.is_finite() {
            self = Bounds { min_x: -1.0, max_x: 1.0, min_y: -1.0, max_y: 1.0 };
        }
        if self.max_x - self.min_x <= 0.0 {
            let c = self.min_x;
            self.min_x = c - 1.0;
            self.max_x = c + 1.0;
        }
        if self.max_y - self.min_y <= 0.0 {
            let c = self.min_y;
            self.min_y = c - 1.0;
            self.max_y = c + 1.0;
        }
        let mx = 0.05 * (self.max_x - self.min_x);
        let my = 0.05 * (self.max_y - self.min_y);
        (
            self.min_x - mx,
            self.min_y - my,
            (self.max_x - self.min_x) + 2.0 * mx,
            (self.max_y - self.min_y) + 2.0 * my,
        )
    }
}

/// Clips the line a*x + b*y = c to a rectangle; returns the two endpoints
/// of the visible chord, if any.
fn clip_line(a: f64, b: f64, c: f64, rect: (f64, f64, f64, f64)) -> Option<[[f64; 2]; 2]> {
    let (x0, y0, w, h) = rect;
    let n2 = a * a + b * b;
    if n2 == 0.0 {
        return None;
    }
    // Base point on the line plus its direction vector.
    let px = a * c / n2;
    let py = b * c / n2;
    let (dx, dy) = (-b, a);
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for (p, d, lo, hi) in [(px, dx, x0, x0 + w), (py, dy, y0, y0 + h)] {
        if d.abs() < 1e-300 {
            if p < lo || p > hi {
                return None;
            }
        } else {
            let (ta, tb) = ((lo - p) / d, (hi - p) / d);
            let (ta, tb) = if ta <= tb { (ta, tb) } else { (tb, ta) };
            t0 = t0.max(ta);
            t1 = t1.min(tb);
        }
    }
    if t0 >= t1 {
        return None;
    }
    Some([[px + t0 * dx, py + t0 * dy], [px + t1 * dx, py + t1 * dy]])
}

/// Renders a scene to a deterministic standalone SVG document.
pub fn render_svg(scene: &Scene) -> Result<String> {
    let mut shapes: Vec<(Shape, Style)> = Vec::new();
    for item in &scene.items {
        let shape = match &item.kind {
            DrawableKind::Point(p) => Shape::Circle([p[0], -p[1]]),
            DrawableKind::Curve(pts) => Shape::Poly {
                pts: pts.iter().map(|p| [p[0], -p[1]]).collect(),
                closed: false,
            },
            DrawableKind::Segment { normal, offset } => {
                Shape::Line { a: normal[0], b: -normal[1], c: *offset }
            }
            DrawableKind::Ellipse(e) => Shape::Poly {
                pts: e.boundary(ELLIPSE_SAMPLES)?.iter().map(|p| [p[0], -p[1]]).collect(),
                closed: true,
            },
        };
        shapes.push((shape, item.style.clone()));
    }

    // Lines extend to the frame, so only finite geometry drives the bounds.
    let mut bounds = Bounds::empty();
    for (shape, _) in &shapes {
        match shape {
            Shape::Circle(p) => bounds.include(*p),
            Shape::Poly { pts, .. } => pts.iter().for_each(|p| bounds.include(*p)),
            Shape::Line { .. } => {}
        }
    }
    let (vx, vy, vw, vh) = bounds.finish();

    let px = vw / CANVAS_W;
    let radius = 3.0 * px;
    let stroke = 1.5 * px;
    let axis_stroke = 1.0 * px;
    let font = 14.0 * vh / CANVAS_H;
    let line_h = 20.0 * vh / CANVAS_H;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" viewBox=\"{} {} {} {}\">\n",
        fmt(vx), fmt(vy), fmt(vw), fmt(vh)
    ));
    out.push_str(&format!(
        "<desc>manifold: {}; display: {}</desc>\n",
        escape_xml(&scene.manifold_desc),
        escape_xml(scene.display.name())
    ));
    out.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#ffffff\"/>\n",
        fmt(vx), fmt(vy), fmt(vw), fmt(vh)
    ));
    // Coordinate axes through the data-space origin.
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#b0b0b0\" stroke-width=\"{}\"/>\n",
        fmt(vx), fmt(0.0), fmt(vx + vw), fmt(0.0), fmt(axis_stroke)
    ));
    out.push_str(&format!(
        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#b0b0b0\" stroke-width=\"{}\"/>\n",
        fmt(0.0), fmt(vy), fmt(0.0), fmt(vy + vh), fmt(axis_stroke)
    ));

    for (shape, style) in &shapes {
        match shape {
            Shape::Circle(p) => {
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{}\" fill-opacity=\"{}\"/>\n",
                    fmt(p[0]), fmt(p[1]), fmt(radius), style.color, fmt(style.opacity)
                ));
            }
            Shape::Poly { pts, closed } => {
                let coords: Vec<String> =
                    pts.iter().map(|p| format!("{},{}", fmt(p[0]), fmt(p[1]))).collect();
                let tag = if *closed { "polygon" } else { "polyline" };
                out.push_str(&format!(
                    "<{tag} points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"{}\" stroke-width=\"{}\"/>\n",
                    coords.join(" "), style.color, fmt(style.opacity), fmt(stroke)
                ));
            }
            Shape::Line { a, b, c } => {
                if let Some([s, e]) = clip_line(*a, *b, *c, (vx, vy, vw, vh)) {
                    out.push_str(&format!(
                        "<polyline points=\"{},{} {},{}\" fill=\"none\" stroke=\"{}\" stroke-opacity=\"{}\" stroke-width=\"{}\"/>\n",
                        fmt(s[0]), fmt(s[1]), fmt(e[0]), fmt(e[1]),
                        style.color, fmt(style.opacity), fmt(stroke)
                    ));
                }
            }
        }
    }

    let mut row = 0usize;
    for (_, style) in &shapes {
        if let Some(label) = &style.label {
            let tx = vx + 10.0 * px;
            let ty = vy + line_h * (row + 1) as f64;
            out.push_str(&format!(
                "<text x=\"{}\" y=\"{}\" font-size=\"{}\" font-family=\"sans-serif\" fill=\"{}\">{}</text>\n",
                fmt(tx), fmt(ty), fmt(font), style.color, escape_xml(label)
            ));
            row += 1;
        }
    }

    out.push_str("</svg>\n");
    Ok(out)
}

/// Renders and writes a scene, creating the parent directory if needed.
pub fn export_scene(scene: &Scene, path: &Path) -> Result<()> {
    let text = render_svg(scene)?;
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|e| CliError::io(parent, e))?;
        }
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene::Drawable;
    use bregkern_core::CoordinateTag;

    fn count(haystack: &str, needle: &str) -> usize {
        haystack.match_indices(needle).count()
    }

    fn empty_scene() -> Scene {
        Scene::new("test", CoordinateTag::theta(), (0, 1))
    }

    #[test]
    fn fmt_normalizes_negative_zero() {
        assert_eq!(fmt(-0.0), "0.000000");
        assert_eq!(fmt(-1e-9), "0.000000");
        assert_eq!(fmt(2.5), "2.500000");
        assert_eq!(fmt(-2.5), "-2.500000");
    }

    #[test]
    fn bounds_handle_empty_and_degenerate_data() {
        let empty = Bounds::empty().finish();
        assert_eq!(empty, (-1.1, -1.1, 2.2, 2.2));

        let mut b = Bounds::empty();
        b.include([3.0, 5.0]);
        let (vx, vy, vw, vh) = b.finish();
        assert!((vx - 1.9).abs() < 1e-12);
        assert!((vy - 3.9).abs() < 1e-12);
        assert!((vw - 2.2).abs() < 1e-12);
        assert!((vh - 2.2).abs() < 1e-12);
    }

    #[test]
    fn clip_line_finds_visible_chords() {
        // Vertical line x = 1 crossing the box.
        let seg = clip_line(1.0, 0.0, 1.0, (0.0, 0.0, 2.0, 2.0)).unwrap();
        for p in seg {
            assert!((p[0] - 1.0).abs() < 1e-12);
        }
        let ys: Vec<f64> = seg.iter().map(|p| p[1]).collect();
        assert!((ys[0].min(ys[1]) - 0.0).abs() < 1e-12);
        assert!((ys[0].max(ys[1]) - 2.0).abs() < 1e-12);

        // Diagonal x + y = 1 across the unit square.
        let seg = clip_line(1.0, 1.0, 1.0, (0.0, 0.0, 1.0, 1.0)).unwrap();
        for p in seg {
            assert!((p[0] + p[1] - 1.0).abs() < 1e-12);
        }

        // Entirely outside the box.
        assert!(clip_line(1.0, 0.0, 10.0, (0.0, 0.0, 2.0, 2.0)).is_none());
        assert!(clip_line(0.0, 0.0, 1.0, (0.0, 0.0, 2.0, 2.0)).is_none());
    }

    #[test]
    fn empty_scene_renders_axes_only() {
        let svg = render_svg(&empty_scene()).unwrap();
        assert!(svg.starts_with("<svg "));
        assert!(svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("viewBox=\"-1.100000 -1.100000 2.200000 2.200000\""));
        assert!(svg.contains("<desc>manifold: test; display: theta</desc>"));
        assert_eq!(count(&svg, "<line"), 2);
        assert_eq!(count(&svg, "<circle"), 0);
        assert_eq!(count(&svg, "<polyline"), 0);
        assert_eq!(count(&svg, "<polygon"), 0);
        assert_eq!(count(&svg, "<text"), 0);
    }

    #[test]
    fn origin_point_lands_on_canvas_center() {
        let mut scene = empty_scene();
        scene.items.push(Drawable {
            kind: DrawableKind::Point([0.0, 0.0]),
            style: Style::new("#123456"),
        });
        let svg = render_svg(&scene).unwrap();
        assert!(svg.contains("<circle cx=\"0.000000\" cy=\"0.000000\""));
        // 3 px at 800 px across a 2.2-wide viewBox.
        assert!(svg.contains("r=\"0.008250\""));
        assert!(svg.contains("fill=\"#123456\""));
    }

    #[test]
    fn y_axis_points_up() {
        let mut scene = empty_scene();
        scene.items.push(Drawable {
            kind: DrawableKind::Point([0.0, 2.0]),
            style: Style::new("#000000"),
        });
        let svg = render_svg(&scene).unwrap();
        // Data y = 2 renders at plot y = -2.
        assert!(svg.contains("cy=\"-2.000000\""), "{svg}");
    }

    #[test]
    fn labeled_items_build_the_legend_in_order() {
        let mut scene = empty_scene();
        scene.items.push(Drawable {
            kind: DrawableKind::Point([0.0, 0.0]),
            style: Style::new("#111111").label("first & <foo>"),
        });
        scene.items.push(Drawable {
            kind: DrawableKind::Curve(vec![[0.0, 0.0], [1.0, 1.0]]),
            style: Style::new("#222222").label("second"),
        });
        let svg = render_svg(&scene).unwrap();
        assert_eq!(count(&svg, "<text"), 2);
        let first = svg.find("first &amp; &lt;foo&gt;").unwrap();
        let second = svg.find("second").unwrap();
        assert!(first < second);
    }

    #[test]
    fn segments_are_clipped_or_dropped() {
        let mut scene = empty_scene();
        scene.items.push(Drawable {
            kind: DrawableKind::Point([0.0, 0.0]),
            style: Style::new("#000000"),
        });
        // Passes through the origin: visible as a two-point polyline.
        scene.items.push(Drawable {
            kind: DrawableKind::Segment { normal: [1.0, 1.0], offset: 0.0 },
            style: Style::new("#ff0000"),
        });
        // Far outside the viewBox: dropped entirely.
        scene.items.push(Drawable {
            kind: DrawableKind::Segment { normal: [1.0, 0.0], offset: 100.0 },
            style: Style::new("#00ff00"),
        });
        let svg = render_svg(&scene).unwrap();
        assert_eq!(count(&svg, "<polyline"), 1);
        assert!(svg.contains("stroke=\"#ff0000\""));
        assert!(!svg.contains("stroke=\"#00ff00\""));
    }

    #[test]
    fn render_is_deterministic() {
        let mut scene = empty_scene();
        scene.items.push(Drawable {
            kind: DrawableKind::Ellipse(crate::scene::TissotEllipse {
                center: [0.5, 0.5],
                shape: [[2.0, 0.3], [0.3, 1.0]],
                scale: 0.25,
            }),
            style: Style::new("#333333").opacity(0.5),
        });
        let a = render_svg(&scene).unwrap();
        let b = render_svg(&scene).unwrap();
        assert_eq!(a, b);
        assert_eq!(count(&a, "<polygon"), 1);
    }
}
