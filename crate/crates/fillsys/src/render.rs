//! Deterministic SVG rendering of chord diagrams: a unit circle with 2n
//! equally spaced points starting at the top and proceeding clockwise,
//! straight chord segments, and the chord label at each midpoint.
//! Coordinates are emitted with exactly six decimals so output bytes are a
//! pure function of the word and the renderer version.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;

use crate::diagram::ChordWord;
use crate::error::Result;

pub const RENDER_VERSION: &str = "1";

fn coord(v: f64) -> String {
    let v = if v == 0.0 { 0.0 } else { v }; // normalize -0.0
    format!("{v:.6}")
}

fn point_position(p: usize, points: usize) -> (f64, f64) {
    // angle 90 degrees at p = 0, decreasing clockwise; SVG y points down
    let theta = PI / 2.0 - 2.0 * PI * (p as f64) / (points as f64);
    (theta.cos(), -theta.sin())
}

pub fn render_svg(w: &ChordWord) -> String {
    let points = w.point_count();
    let mut out = String::new();
    out.push_str(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"-1.2 -1.2 2.4 2.4\" \
         width=\"480\" height=\"480\">\n",
    );
    let _ = writeln!(out, "<!-- fillsys render v{RENDER_VERSION}: {w} -->");
    out.push_str(
        "<circle cx=\"0\" cy=\"0\" r=\"1\" fill=\"none\" stroke=\"#444444\" \
         stroke-width=\"0.015\"/>\n",
    );
    for p in 0..points {
        let (x, y) = point_position(p, points);
        let _ = writeln!(
            out,
            "<circle cx=\"{}\" cy=\"{}\" r=\"0.025\" fill=\"#444444\"/>",
            coord(x),
            coord(y)
        );
    }
    for label in 1..=w.n() {
        let (a, b) = w.chord_endpoints(label as u16);
        let (x1, y1) = point_position(a, points);
        let (x2, y2) = point_position(b, points);
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"#1f6feb\" \
             stroke-width=\"0.02\"/>",
            coord(x1),
            coord(y1),
            coord(x2),
            coord(y2)
        );
        let _ = writeln!(
            out,
            "<text x=\"{}\" y=\"{}\" font-size=\"0.14\" fill=\"#b02a2a\" \
             text-anchor=\"middle\" dominant-baseline=\"middle\">{label}</text>",
            coord((x1 + x2) / 2.0),
            coord((y1 + y2) / 2.0)
        );
    }
    out.push_str("</svg>\n");
    out
}

pub fn write_svg(w: &ChordWord, path: &Path) -> Result<()> {
    std::fs::write(path, render_svg(w))?;
    Ok(())
}
