//! Deterministic SVG rendering of planar arrangements.
//!
//! Each lattice translate of the shape is drawn as one `<g>` of unit cells
//! over a light grid. Output is a pure function of the inputs: fixed cell
//! size, fixed palette, translates sorted lexicographically, integer pixel
//! coordinates, no timestamps. Identical inputs give identical bytes.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::matrix::div_floor;
use crate::shapes::ShapeSpec;

/// Pixels per unit cell.
const CELL: i128 = 20;

const PALETTE: [&str; 8] =
    ["#4c78a8", "#f58518", "#54a24b", "#e45756", "#72b7b2", "#eeca3b", "#b279a2", "#9d755d"];

/// Inclusive integer viewing box.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub x0: i128,
    pub x1: i128,
    pub y0: i128,
    pub y1: i128,
}

impl Window {
    pub fn square(lo: i128, hi: i128) -> Self {
        Window { x0: lo, x1: hi, y0: lo, y1: hi }
    }

    fn is_empty(&self) -> bool {
        self.x0 > self.x1 || self.y0 > self.y1
    }

    fn contains(&self, x: i128, y: i128) -> bool {
        self.x0 <= x && x <= self.x1 && self.y0 <= y && y <= self.y1
    }
}

/// Lattice translates of the shape clipped to the window, one polygon
/// cluster per translate.
pub fn render_svg(spec: &ShapeSpec, lattice: &Lattice, window: &Window) -> Result<String> {
    if spec.n() != 2 {
        return Err(Error::UnsupportedDimension(spec.n()));
    }
    if lattice.n() != 2 {
        return Err(Error::UnsupportedDimension(lattice.n()));
    }

    let points = spec.points().points().to_vec();
    let (width, height) = if window.is_empty() {
        (CELL, CELL)
    } else {
        ((window.x1 - window.x0 + 1) * CELL, (window.y1 - window.y0 + 1) * CELL)
    };

    let mut svg = String::new();
    writeln!(
        svg,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
         viewBox=\"0 0 {width} {height}\">"
    )
    .unwrap();
    writeln!(svg, "<rect width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>").unwrap();

    if !window.is_empty() {
        svg.push_str("<g stroke=\"#d8d8d8\" stroke-width=\"1\">\n");
        for gx in 0..=(window.x1 - window.x0 + 1) {
            let x = gx * CELL;
            writeln!(svg, "<line x1=\"{x}\" y1=\"0\" x2=\"{x}\" y2=\"{height}\"/>").unwrap();
        }
        for gy in 0..=(window.y1 - window.y0 + 1) {
            let y = gy * CELL;
            writeln!(svg, "<line x1=\"0\" y1=\"{y}\" x2=\"{width}\" y2=\"{y}\"/>").unwrap();
        }
        svg.push_str("</g>\n");

        for (idx, origin) in visible_translates(&points, lattice, window)?.iter().enumerate() {
            let color = PALETTE[idx % PALETTE.len()];
            writeln!(svg, "<g fill=\"{color}\" fill-opacity=\"0.85\">").unwrap();
            for p in &points {
                let (x, y) = (p[0] + origin[0], p[1] + origin[1]);
                if !window.contains(x, y) {
                    continue;
                }
                let px = (x - window.x0) * CELL + 1;
                let py = (window.y1 - y) * CELL + 1;
                writeln!(
                    svg,
                    "<rect x=\"{px}\" y=\"{py}\" width=\"{}\" height=\"{}\"/>",
                    CELL - 2,
                    CELL - 2
                )
                .unwrap();
            }
            svg.push_str("</g>\n");
        }
    }

    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Lattice points whose shape translate meets the window, sorted
/// lexicographically.
fn visible_translates(
    points: &[Vec<i128>],
    lattice: &Lattice,
    window: &Window,
) -> Result<Vec<[i128; 2]>> {
    let min_x = points.iter().map(|p| p[0]).min().unwrap_or(0);
    let max_x = points.iter().map(|p| p[0]).max().unwrap_or(0);
    let min_y = points.iter().map(|p| p[1]).min().unwrap_or(0);
    let max_y = points.iter().map(|p| p[1]).max().unwrap_or(0);

    // Translate origins v with S + v meeting the window satisfy
    // v in [x0 - max_x, x1 - min_x] x [y0 - max_y, y1 - min_y].
    let vx_lo = window.x0 - max_x;
    let vx_hi = window.x1 - min_x;
    let vy_lo = window.y0 - max_y;
    let vy_hi = window.y1 - min_y;

    // Rows of the canonical basis: (d0, 0) and (e, d1).
    let b = lattice.basis();
    let (d0, e, d1) = (b[(0, 0)], b[(1, 0)], b[(1, 1)]);

    let mut out = Vec::new();
    let j_lo = div_floor(vy_lo + d1 - 1, d1)?;
    let j_hi = div_floor(vy_hi, d1)?;
    for j in j_lo..=j_hi {
        let x_shift = j * e;
        let i_lo = div_floor(vx_lo - x_shift + d0 - 1, d0)?;
        let i_hi = div_floor(vx_hi - x_shift, d0)?;
        for i in i_lo..=i_hi {
            out.push([i * d0 + x_shift, j * d1]);
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::hnf;
    use crate::matrix::IntMatrix;

    fn lat7() -> Lattice {
        hnf(&IntMatrix::from_rows(vec![vec![7, 0], vec![4, 1]]).unwrap()).unwrap()
    }

    #[test]
    fn rendering_is_byte_stable() {
        let spec = ShapeSpec::diff_body(2, 1, 1).unwrap();
        let w = Window::square(-8, 8);
        let a = render_svg(&spec, &lat7(), &w).unwrap();
        let b = render_svg(&spec, &lat7(), &w).unwrap();
        assert_eq!(a, b);
        assert!(a.starts_with("<svg"));
        assert!(a.ends_with("</svg>\n"));
    }

    #[test]
    fn empty_window_renders_valid_svg() {
        let spec = ShapeSpec::simplex(2, 1).unwrap();
        let w = Window { x0: 1, x1: 0, y0: 0, y1: 0 };
        let svg = render_svg(&spec, &lat7(), &w).unwrap();
        assert!(svg.contains("<svg"));
        assert!(!svg.contains("<g fill="));
    }

    #[test]
    fn tiling_covers_every_window_cell() {
        // A tiling's translates paint each cell exactly once.
        let spec = ShapeSpec::diff_body(2, 1, 1).unwrap();
        let w = Window::square(-5, 5);
        let points = spec.points().points().to_vec();
        let translates = visible_translates(&points, &lat7(), &w).unwrap();
        let mut seen = std::collections::HashMap::new();
        for v in &translates {
            for p in &points {
                let cell = (p[0] + v[0], p[1] + v[1]);
                if w.contains(cell.0, cell.1) {
                    *seen.entry(cell).or_insert(0) += 1;
                }
            }
        }
        let total = ((w.x1 - w.x0 + 1) * (w.y1 - w.y0 + 1)) as usize;
        assert_eq!(seen.len(), total);
        assert!(seen.values().all(|&c| c == 1));
    }

    #[test]
    fn packing_translates_never_overlap() {
        let spec = ShapeSpec::simplex(2, 2).unwrap();
        let l = hnf(&IntMatrix::from_rows(vec![vec![7, 0], vec![2, 1]]).unwrap()).unwrap();
        let w = Window::square(-6, 6);
        let points = spec.points().points().to_vec();
        let mut seen = std::collections::HashSet::new();
        for v in visible_translates(&points, &l, &w).unwrap() {
            for p in &points {
                assert!(seen.insert((p[0] + v[0], p[1] + v[1])), "overlap at {p:?}+{v:?}");
            }
        }
    }

    #[test]
    fn rejects_other_dimensions() {
        let spec = ShapeSpec::simplex(3, 1).unwrap();
        let l = Lattice::identity(3);
        assert!(matches!(
            render_svg(&spec, &l, &Window::square(0, 1)),
            Err(Error::UnsupportedDimension(3))
        ));
    }
}
