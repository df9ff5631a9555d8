//! Minimal deterministic SVG emitter for the plots the CLI produces:
//! function graphs, step curves with verticals, region shading, scatter
//! clouds and evaluator heatmaps. Coordinates are formatted with fixed
//! precision so identical input yields identical bytes.

use std::path::Path;

use crate::error::Result;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 40.0;

#[derive(Clone, Debug)]
pub enum Layer {
    /// Polyline through unit-square points.
    Function {
        points: Vec<(f64, f64)>,
        color: String,
        dashed: bool,
    },
    /// Disconnected segments (step curve pieces and verticals).
    Segments {
        segments: Vec<((f64, f64), (f64, f64))>,
        color: String,
        dashed: bool,
    },
    /// Filled axis-aligned rectangles (x, y, w, h, fill).
    Regions { cells: Vec<(f64, f64, f64, f64, String)> },
    Scatter {
        points: Vec<(f64, f64)>,
        color: String,
    },
    /// Row-major values in [0,1] on an n x n cell grid, grayscale.
    Heatmap { n: usize, values: Vec<f64> },
}

fn px(u: f64) -> String {
    format!("{:.2}", MARGIN + u * (SIZE - 2.0 * MARGIN))
}

fn py(v: f64) -> String {
    format!("{:.2}", SIZE - MARGIN - v * (SIZE - 2.0 * MARGIN))
}

pub fn svg_string(layers: &[Layer]) -> String {
    assert!(!layers.is_empty(), "need at least one layer");
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{SIZE}\" height=\"{SIZE}\" viewBox=\"0 0 {SIZE} {SIZE}\">\n"
    ));
    s.push_str(&format!(
        "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"white\" stroke=\"black\"/>\n",
        MARGIN,
        MARGIN,
        SIZE - 2.0 * MARGIN,
        SIZE - 2.0 * MARGIN
    ));
    for layer in layers {
        match layer {
            Layer::Function {
                points,
                color,
                dashed,
            } => {
                let pts: Vec<String> = points
                    .iter()
                    .map(|&(x, y)| format!("{},{}", px(x), py(y)))
                    .collect();
                s.push_str(&format!(
                    "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\"{}/>\n",
                    pts.join(" "),
                    color,
                    dash(*dashed)
                ));
            }
            Layer::Segments {
                segments,
                color,
                dashed,
            } => {
                for &((x0, y0), (x1, y1)) in segments {
                    s.push_str(&format!(
                        "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\"{}/>\n",
                        px(x0),
                        py(y0),
                        px(x1),
                        py(y1),
                        color,
                        dash(*dashed)
                    ));
                }
            }
            Layer::Regions { cells } => {
                for (x, y, w, h, fill) in cells {
                    s.push_str(&format!(
                        "<rect x=\"{}\" y=\"{}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"{}\" stroke=\"none\"/>\n",
                        px(*x),
                        py(y + h),
                        w * (SIZE - 2.0 * MARGIN),
                        h * (SIZE - 2.0 * MARGIN),
                        fill
                    ));
                }
            }
            Layer::Scatter { points, color } => {
                for &(x, y) in points {
                    s.push_str(&format!(
                        "<circle cx=\"{}\" cy=\"{}\" r=\"1.5\" fill=\"{}\"/>\n",
                        px(x),
                        py(y),
                        color
                    ));
                }
            }
            Layer::Heatmap { n, values } => {
                assert_eq!(values.len(), n * n);
                let w = 1.0 / *n as f64;
                for i in 0..*n {
                    for j in 0..*n {
                        let v = values[i * n + j].clamp(0.0, 1.0);
                        let shade = (255.0 * (1.0 - v)).round() as u8;
                        s.push_str(&format!(
                            "<rect x=\"{}\" y=\"{}\" width=\"{:.2}\" height=\"{:.2}\" fill=\"rgb({shade},{shade},255)\"/>\n",
                            px(i as f64 * w),
                            py((j as f64 + 1.0) * w),
                            w * (SIZE - 2.0 * MARGIN),
                            w * (SIZE - 2.0 * MARGIN)
                        ));
                    }
                }
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn dash(dashed: bool) -> &'static str {
    if dashed {
        " stroke-dasharray=\"4 3\""
    } else {
        ""
    }
}

pub fn render_svg(layers: &[Layer], path: &Path) -> Result<()> {
    std::fs::write(path, svg_string(layers))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_bytes() {
        let layers = vec![
            Layer::Function {
                points: vec![(0.0, 0.0), (0.5, 0.25), (1.0, 1.0)],
                color: "black".into(),
                dashed: false,
            },
            Layer::Segments {
                segments: vec![((0.1625, 0.3875), (0.1625, 0.8375))],
                color: "red".into(),
                dashed: true,
            },
            Layer::Scatter {
                points: vec![(0.25, 0.75)],
                color: "blue".into(),
            },
            Layer::Heatmap {
                n: 2,
                values: vec![0.0, 0.3, 0.6, 1.0],
            },
        ];
        let a = svg_string(&layers);
        let b = svg_string(&layers);
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
        assert!(a.contains("stroke-dasharray"));
    }

    #[test]
    #[should_panic]
    fn empty_layers_rejected() {
        svg_string(&[]);
    }
}
