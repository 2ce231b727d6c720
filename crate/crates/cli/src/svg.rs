//! Self-contained SVG plots: a heat-map contact sheet and a flow-line
//! portrait.

use std::fmt::Write;

use sclg::flow::FlowLine;
use sclg::grid::SampledGrid;
use sclg::harness::{StationaryKind, StationaryPoint};

const PANEL: usize = 256;
const MAX_CELLS: usize = 64;
const MARGIN: usize = 24;

const RAMP: [[f64; 3]; 5] =
    [[68.0, 1.0, 84.0], [59.0, 82.0, 139.0], [33.0, 145.0, 140.0], [94.0, 201.0, 98.0], [253.0, 231.0, 37.0]];

fn color(v: f64) -> String {
    let s = v.clamp(0.0, 1.0) * (RAMP.len() - 1) as f64;
    let k = (s.floor() as usize).min(RAMP.len() - 2);
    let f = s - k as f64;
    let c: Vec<u8> = (0..3).map(|i| (RAMP[k][i] + f * (RAMP[k + 1][i] - RAMP[k][i])).round() as u8).collect();
    format!("#{:02x}{:02x}{:02x}", c[0], c[1], c[2])
}

/// Block averages of |v| on at most `MAX_CELLS` cells per axis.
fn cells(grid: &SampledGrid) -> (usize, usize, Vec<f64>) {
    let (nx, ny) = grid.shape();
    let (bx, by) = (nx.div_ceil(MAX_CELLS), ny.div_ceil(MAX_CELLS));
    let (cx, cy) = (nx.div_ceil(bx), ny.div_ceil(by));
    let mut out = vec![0.0; cx * cy];
    for a in 0..cx {
        for b in 0..cy {
            let (mut sum, mut n) = (0.0, 0);
            for i in a * bx..((a + 1) * bx).min(nx) {
                for j in b * by..((b + 1) * by).min(ny) {
                    sum += grid.get(i, j).norm();
                    n += 1;
                }
            }
            out[a * cy + b] = sum / n as f64;
        }
    }
    (cx, cy, out)
}

/// Heat maps of |v| in a grid of `columns` panels, all on one colour scale.
/// x runs to the right and y upwards in each panel.
pub fn contact_sheet(panels: &[(String, &SampledGrid)], columns: usize) -> String {
    let columns = columns.max(1);
    let rows = panels.len().div_ceil(columns);
    let cell_w = PANEL + MARGIN;
    let (width, height) = (columns * cell_w + MARGIN, rows * (cell_w + MARGIN) + MARGIN);
    let scale = panels.iter().map(|(_, g)| g.sup_norm()).fold(0.0, f64::max);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}">"#
    );
    let _ = writeln!(s, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    for (k, (label, grid)) in panels.iter().enumerate() {
        let (ox, oy) = (MARGIN + (k % columns) * cell_w, MARGIN + (k / columns) * (cell_w + MARGIN));
        let (cx, cy, values) = cells(grid);
        let (w, h) = (PANEL as f64 / cx as f64, PANEL as f64 / cy as f64);
        let _ = writeln!(s, r#"<g class="panel" shape-rendering="crispEdges">"#);
        for a in 0..cx {
            for b in 0..cy {
                let v = if scale > 0.0 { values[a * cy + b] / scale } else { 0.0 };
                let _ = writeln!(
                    s,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    ox as f64 + a as f64 * w,
                    oy as f64 + (cy - 1 - b) as f64 * h,
                    w,
                    h,
                    color(v)
                );
            }
        }
        let _ = writeln!(s, "</g>");
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="13">{}</text>"#,
            ox,
            oy + PANEL + 16,
            label
        );
    }
    s.push_str("</svg>\n");
    s
}

struct View {
    window: f64,
    size: f64,
}

impl View {
    fn px(&self, x: f64, xi: f64) -> (f64, f64) {
        let u = (x + self.window) / (2.0 * self.window) * self.size;
        let v = (self.window - xi) / (2.0 * self.window) * self.size;
        (u, v)
    }

    fn inside(&self, x: f64, xi: f64) -> bool {
        x.abs() <= self.window && xi.abs() <= self.window
    }

    /// Polylines of the samples inside the window, split where a line leaves it.
    fn polylines(&self, line: &FlowLine) -> Vec<String> {
        let mut out = Vec::new();
        let mut current = String::new();
        let mut count = 0;
        for p in &line.points {
            if self.inside(p[1], p[2]) {
                let (u, v) = self.px(p[1], p[2]);
                let _ = write!(current, "{}{u:.2},{v:.2}", if count == 0 { "" } else { " " });
                count += 1;
            } else {
                if count > 1 {
                    out.push(std::mem::take(&mut current));
                }
                current.clear();
                count = 0;
            }
        }
        if count > 1 {
            out.push(current);
        }
        out
    }
}

/// Phase portrait on [−window, window]² with the separatrix drawn heavier
/// and every stationary point marked by a circle of class `stationary`.
pub fn flow_portrait(
    lines: &[FlowLine],
    separatrix: &[FlowLine],
    stationary: &[StationaryPoint],
    window: f64,
) -> String {
    let size = 600usize;
    let view = View { window, size: size as f64 };
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(s, r#"<rect width="{size}" height="{size}" fill="white"/>"#);
    let (o0, o1) = view.px(0.0, 0.0);
    let _ = writeln!(s, r##"<path d="M0,{o1:.2} H{size} M{o0:.2},0 V{size}" stroke="#bbbbbb" stroke-width="1"/>"##);
    for (class, set, style) in [
        ("flow", lines, r##"stroke="#1f4e9c" stroke-width="1""##),
        ("separatrix", separatrix, r##"stroke="#c0392b" stroke-width="2""##),
    ] {
        let _ = writeln!(s, r#"<g class="{class}" fill="none" {style}>"#);
        for line in set {
            for pts in view.polylines(line) {
                let _ = writeln!(s, r#"<polyline data-line="{}" points="{pts}"/>"#, line.id);
            }
        }
        let _ = writeln!(s, "</g>");
    }
    for p in stationary {
        let (u, v) = view.px(p.x, p.xi);
        let (kind, fill) = match p.kind {
            StationaryKind::Hyperbolic => ("hyperbolic", "#000000"),
            StationaryKind::Elliptic => ("elliptic", "#ffffff"),
        };
        let _ = writeln!(
            s,
            r#"<circle class="stationary" data-kind="{kind}" cx="{u:.2}" cy="{v:.2}" r="5" fill="{fill}" stroke="black" stroke-width="1.5"/>"#
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use sclg::flow::LineEnd;

    #[test]
    fn ramp_endpoints() {
        assert_eq!(color(0.0), "#440154");
        assert_eq!(color(1.0), "#fde725");
        assert_eq!(color(2.0), "#fde725");
    }

    #[test]
    fn lines_split_at_the_window() {
        let view = View { window: 1.0, size: 100.0 };
        let line = FlowLine {
            id: 3,
            c: 0.0,
            points: vec![[0.0, 0.0, 0.0], [1.0, 0.5, 0.0], [2.0, 5.0, 0.0], [3.0, 0.5, 0.5], [4.0, 0.0, 0.5]],
            end: LineEnd::Completed,
        };
        let parts = view.polylines(&line);
        assert_eq!(parts, vec!["50.00,50.00 75.00,50.00", "75.00,25.00 50.00,25.00"]);
    }
}
