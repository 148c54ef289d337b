//! SVG drawing of a result.
//!
//! When the faces unfold into the plane without overlap and every gluing
//! closes up (a flat disk), all triangles are drawn in that one picture with
//! their actual sides. Otherwise each triangle is drawn on its own as the
//! Euclidean triangle with its side lengths, laid out in a grid.

use geotri_core::format::{ResultFile, TriangleRecord};
use geotri_core::geom::{p2, triangle_overlap, Iso, P2};
use geotri_core::IntrinsicMesh;
use std::collections::VecDeque;
use std::fmt::Write as _;

/// Faces beyond this are not tried as one picture.
const MAX_GLOBAL_FACES: usize = 4096;
const CANVAS: f64 = 800.0;
const PAD: f64 = 20.0;

fn stage_color(stage: &str) -> &'static str {
    match stage {
        "cover" => "#1b9e77",
        "refine" => "#d95f02",
        "non_overlap" => "#7570b3",
        "triangulate" => "#e7298a",
        "bigon" => "#66a61e",
        _ => "#555555",
    }
}

/// Face placements making the whole surface a planar figure, if there is one.
pub fn global_layout(m: &IntrinsicMesh) -> Option<Vec<Iso>> {
    let nf = m.n_faces();
    if nf == 0 || nf > MAX_GLOBAL_FACES {
        return None;
    }
    let mut iso: Vec<Option<Iso>> = vec![None; nf];
    iso[0] = Some(Iso::identity());
    let mut queue = VecDeque::from([0u32]);
    while let Some(f) = queue.pop_front() {
        let a = iso[f as usize].expect("queued faces are placed");
        for i in 0..3 {
            let h = 3 * f + i;
            let Some(t) = m.twin(h) else { continue };
            let g = t / 3;
            let b = a * m.transition(h).inverse();
            match iso[g as usize] {
                None => {
                    iso[g as usize] = Some(b);
                    queue.push_back(g);
                }
                Some(old) => {
                    let (x, y) = m.halfedge_points(t);
                    if (old * x - b * x).norm() > 1e-9 || (old * y - b * y).norm() > 1e-9 {
                        return None;
                    }
                }
            }
        }
    }
    let iso: Vec<Iso> = iso.into_iter().collect::<Option<_>>()?;
    let tris: Vec<[P2; 3]> = (0..nf).map(|f| m.layout(f as u32).map(|p| iso[f] * p)).collect();
    for i in 0..nf {
        for j in i + 1..nf {
            if triangle_overlap(&tris[i], &tris[j]) > 1e-12 * m.area() {
                return None;
            }
        }
    }
    Some(iso)
}

fn comparison_triangle(l: &[f64]) -> Option<[P2; 3]> {
    let [a, b, c] = <[f64; 3]>::try_from(l).ok()?;
    if a <= 0.0 {
        return None;
    }
    let x = (a * a + c * c - b * b) / (2.0 * a);
    let y = (c * c - x * x).max(0.0).sqrt();
    Some([p2(0.0, 0.0), p2(a, 0.0), p2(x, y)])
}

/// One drawn triangle: polyline per side, in plane coordinates.
struct Drawn {
    stage: String,
    sides: Vec<Vec<P2>>,
}

fn drawn_global(m: &IntrinsicMesh, iso: &[Iso], t: &TriangleRecord) -> Drawn {
    let sides = t
        .sides
        .iter()
        .map(|c| {
            let mut pts = Vec::new();
            for s in &c.segs {
                let (a, b) = s.points(m);
                let f = iso[s.face as usize];
                pts.push(f * a);
                pts.push(f * b);
            }
            pts.dedup_by(|a, b| (*a - *b).norm() < 1e-12);
            pts
        })
        .collect();
    Drawn { stage: t.stage.clone(), sides }
}

fn drawn_gallery(t: &TriangleRecord, origin: P2) -> Drawn {
    let sides = match comparison_triangle(&t.side_lengths) {
        Some(c) => (0..3).map(|i| vec![c[i] + origin.coords, c[(i + 1) % 3] + origin.coords]).collect(),
        None => Vec::new(),
    };
    Drawn { stage: t.stage.clone(), sides }
}

pub fn render(m: &IntrinsicMesh, r: &ResultFile) -> String {
    let drawn: Vec<Drawn> = match global_layout(m) {
        Some(iso) => r.triangles.iter().map(|t| drawn_global(m, &iso, t)).collect(),
        None => {
            let cell = r.triangles.iter().flat_map(|t| t.side_lengths.iter().copied()).fold(0.0, f64::max) * 1.15;
            let cols = (r.triangles.len() as f64).sqrt().ceil().max(1.0) as usize;
            r.triangles
                .iter()
                .enumerate()
                .map(|(i, t)| drawn_gallery(t, p2((i % cols) as f64 * cell, (i / cols) as f64 * cell)))
                .collect()
        }
    };
    let pts: Vec<&P2> = drawn.iter().flat_map(|d| d.sides.iter().flatten()).collect();
    let (mut lo, mut hi) = (p2(0.0, 0.0), p2(1.0, 1.0));
    if !pts.is_empty() {
        lo = p2(pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min), pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min));
        hi = p2(pts.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max), pts.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max));
    }
    let scale = (CANVAS - 2.0 * PAD) / (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let (w, h) = ((hi.x - lo.x) * scale + 2.0 * PAD, (hi.y - lo.y) * scale + 2.0 * PAD);
    // y grows downward in SVG.
    let map = |p: &P2| (PAD + (p.x - lo.x) * scale, PAD + (hi.y - p.y) * scale);

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.1}" height="{h:.1}" viewBox="0 0 {w:.1} {h:.1}">"#);
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    for (d, t) in drawn.iter().zip(&r.triangles) {
        let color = stage_color(&d.stage);
        let _ = writeln!(s, r#"<g class="triangle" data-id="{}" data-stage="{}">"#, t.id, d.stage);
        let outline: Vec<String> = d.sides.iter().flat_map(|side| side.iter().take(side.len().saturating_sub(1))).map(|p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        }).collect();
        if !outline.is_empty() {
            let _ = writeln!(s, r#"<polygon points="{}" fill="{color}" fill-opacity="0.12" stroke="none"/>"#, outline.join(" "));
        }
        for side in &d.sides {
            let line: Vec<String> = side.iter().map(|p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            }).collect();
            let _ = writeln!(s, r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1"/>"#, line.join(" "));
        }
        for side in &d.sides {
            if let Some(p) = side.first() {
                let (x, y) = map(p);
                let _ = writeln!(s, r#"<circle cx="{x:.3}" cy="{y:.3}" r="1.5" fill="black"/>"#);
            }
        }
        let _ = writeln!(s, "</g>");
    }
    let _ = writeln!(s, "</svg>");
    s
}
