//! SVG output. Coordinates come from the float embedding of the exact
//! points and are printed with six decimals; tiles are emitted in patch
//! order, so equal inputs give byte-identical files.

use std::collections::BTreeSet;
use std::fmt::Write;

use p2flis::dualgraph::DualGraph;
use p2flis::tiling::{TileKind, TilePatch};
use p2flis::cyclo::Coeff;

const SCALE: f64 = 20.0;
const PAD: f64 = 1.0;

fn fill(kind: TileKind) -> &'static str {
    match kind {
        TileKind::Kite => "#f3d9a4",
        TileKind::Dart => "#a9c4e8",
    }
}

/// Witness tiles are coloured by their degree inside the witness.
fn degree_fill(d: usize) -> &'static str {
    match d {
        0 | 1 => "#e4572e",
        2 => "#f0f0f0",
        _ => "#2e7d32",
    }
}

pub fn render_svg<T: Coeff>(tp: &TilePatch<T>, g: &DualGraph, witness: &[usize]) -> String {
    let pts: Vec<[(f64, f64); 4]> = tp
        .tiles
        .iter()
        .map(|t| {
            let mut q = [(0.0, 0.0); 4];
            for (i, v) in t.vertices.iter().enumerate() {
                let (x, y) = v.to_f64();
                q[i] = (x, -y);
            }
            q
        })
        .collect();
    let (mut x0, mut y0, mut x1, mut y1) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for (x, y) in pts.iter().flatten() {
        x0 = x0.min(*x);
        y0 = y0.min(*y);
        x1 = x1.max(*x);
        y1 = y1.max(*y);
    }
    let (x0, y0) = (x0 - PAD, y0 - PAD);
    let (w, h) = ((x1 - x0 + PAD) * SCALE, (y1 - y0 + PAD) * SCALE);

    let chosen: BTreeSet<usize> = witness.iter().copied().collect();
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.6}" height="{h:.6}" viewBox="0 0 {w:.6} {h:.6}">"#
    )
    .unwrap();
    writeln!(out, r##"<g stroke="#555555" stroke-width="0.5" stroke-linejoin="round">"##).unwrap();
    let mut derived = Vec::new();
    for (i, t) in tp.tiles.iter().enumerate() {
        let path = polygon(&pts[i], x0, y0);
        if chosen.contains(&i) {
            let d = g.neighbors(i).iter().filter(|u| chosen.contains(u)).count();
            if d >= 2 || chosen.len() == 1 {
                derived.push(i);
            }
            writeln!(
                out,
                r##"<polygon class="witness deg{d} {}" fill="{}" points="{path}"/>"##,
                t.kind.as_str(),
                degree_fill(d)
            )
            .unwrap();
        } else {
            writeln!(out, r##"<polygon class="{}" fill="{}" points="{path}"/>"##, t.kind.as_str(), fill(t.kind)).unwrap();
        }
    }
    out.push_str("</g>\n");
    if !derived.is_empty() {
        writeln!(out, r##"<g class="derived-path" fill="none" stroke="#c2185b" stroke-width="2.5">"##).unwrap();
        for &i in &derived {
            writeln!(out, r#"<polygon class="derived" points="{}"/>"#, polygon(&pts[i], x0, y0)).unwrap();
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

fn polygon(q: &[(f64, f64); 4], x0: f64, y0: f64) -> String {
    q.iter()
        .map(|(x, y)| format!("{:.6},{:.6}", (x - x0) * SCALE, (y - y0) * SCALE))
        .collect::<Vec<_>>()
        .join(" ")
}
