use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::embedding::OrthogonalEmbedding;
use crate::grid_geom::{GridPath, GridPoint};
use crate::representation::{contact_points, Representation, Semantics};

const PALETTE: [&str; 8] = ["#1f4e9c", "#c0392b", "#27864a", "#8e44ad", "#d35400", "#16a085", "#7f6a00", "#34495e"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderOptions {
    pub unit_px: u32,
    pub show_labels: bool,
    /// Label prefix to colour; the longest matching prefix wins.
    pub color_roles: BTreeMap<String, String>,
    pub mark_endpoints: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { unit_px: 16, show_labels: true, color_roles: BTreeMap::new(), mark_endpoints: true }
    }
}

impl RenderOptions {
    fn color(&self, label: &str, i: usize) -> &str {
        self.color_roles
            .iter()
            .filter(|(tag, _)| label.starts_with(tag.as_str()))
            .max_by_key(|(tag, _)| tag.len())
            .map(|(_, c)| c.as_str())
            .unwrap_or(PALETTE[i % PALETTE.len()])
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Maps lattice coordinates to pixels with y pointing up and a one-unit margin.
struct Canvas {
    out: String,
    unit: i64,
    min: GridPoint,
    max: GridPoint,
}

impl Canvas {
    fn new(bbox: Option<(GridPoint, GridPoint)>, unit_px: u32) -> Canvas {
        let unit = unit_px.max(4) as i64;
        let (min, max) = bbox.unwrap_or((GridPoint::new(0, 0), GridPoint::new(0, 0)));
        let (w, h) = ((max.x - min.x + 2) * unit, (max.y - min.y + 2) * unit);
        let mut out = String::new();
        writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
        writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();
        Canvas { out, unit, min, max }
    }

    fn px(&self, p: GridPoint) -> (i64, i64) {
        ((p.x - self.min.x + 1) * self.unit, (self.max.y - p.y + 1) * self.unit)
    }

    fn polyline(&mut self, p: &GridPath, color: &str, class: &str, title: &str) {
        let pts: Vec<String> = p.seq().iter().map(|&q| self.px(q)).map(|(x, y)| format!("{x},{y}")).collect();
        let w = (self.unit / 6).max(1);
        writeln!(
            self.out,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{color}" stroke-width="{w}" stroke-linecap="round"><title>{}</title></polyline>"#,
            pts.join(" "),
            escape(title)
        )
        .unwrap();
    }

    fn arrow(&mut self, p: &GridPath, at_start: bool, color: &str) {
        let tip = if at_start { p.start() } else { p.end() };
        let (tx, ty) = self.px(tip);
        let (dx, dy) = p.end_direction(at_start).opposite().delta();
        let (dx, dy) = (dx, -dy);
        let s = (self.unit / 3).max(2);
        let (bx, by) = (tx - dx * s, ty - dy * s);
        let (ox, oy) = (-dy * s / 2, dx * s / 2);
        writeln!(
            self.out,
            r#"<polygon class="endpoint" points="{tx},{ty} {},{} {},{}" fill="{color}"/>"#,
            bx + ox,
            by + oy,
            bx - ox,
            by - oy
        )
        .unwrap();
    }

    fn dot(&mut self, q: GridPoint, class: &str, r: i64) {
        let (x, y) = self.px(q);
        writeln!(self.out, r#"<circle class="{class}" cx="{x}" cy="{y}" r="{r}" fill="black"/>"#).unwrap();
    }

    fn text(&mut self, q: GridPoint, s: &str) {
        let (x, y) = self.px(q);
        let size = (self.unit / 2).max(6);
        writeln!(
            self.out,
            r#"<text x="{}" y="{}" font-family="monospace" font-size="{size}">{}</text>"#,
            x + 2,
            y - 2,
            escape(s)
        )
        .unwrap();
    }

    fn finish(mut self) -> String {
        self.out.push_str("</svg>\n");
        self.out
    }
}

/// Unit lattice edges covered by at least two paths.
fn shared_unit_edges(rep: &Representation) -> BTreeSet<(GridPoint, GridPoint)> {
    let mut seen: BTreeMap<(GridPoint, GridPoint), usize> = BTreeMap::new();
    for p in rep.paths.values() {
        for w in p.lattice_points().windows(2) {
            let e = (w[0].min(w[1]), w[0].max(w[1]));
            *seen.entry(e).or_default() += 1;
        }
    }
    seen.into_iter().filter(|&(_, k)| k > 1).map(|(e, _)| e).collect()
}

/// One polyline per path. EPG renderings shade shared grid edges; CPG renderings dot contact points.
pub fn render_representation(rep: &Representation, opts: &RenderOptions) -> String {
    let mut c = Canvas::new(rep.bbox(), opts.unit_px);
    if rep.semantics == Semantics::Epg {
        let w = (c.unit / 2).max(2);
        for (a, b) in shared_unit_edges(rep) {
            let ((x1, y1), (x2, y2)) = (c.px(a), c.px(b));
            writeln!(
                c.out,
                r##"<line class="shared" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#cccccc" stroke-width="{w}"/>"##
            )
            .unwrap();
        }
    }
    for (i, (label, p)) in rep.paths.iter().enumerate() {
        let color = opts.color(label, i).to_string();
        c.polyline(p, &color, "path", label);
        if opts.mark_endpoints {
            c.arrow(p, true, &color);
            c.arrow(p, false, &color);
        }
    }
    if rep.semantics == Semantics::Cpg && opts.mark_endpoints {
        let r = (c.unit / 8).max(1);
        for q in contact_points(rep).into_keys() {
            c.dot(q, "contact", r);
        }
    }
    if opts.show_labels {
        for (label, p) in &rep.paths {
            let mid = p.point_at(p.length() / 2);
            c.text(mid, label);
        }
    }
    c.finish()
}

pub fn render_embedding(emb: &OrthogonalEmbedding, opts: &RenderOptions) -> String {
    let corners = emb.vertex_points.values().chain(emb.edge_paths.values().flat_map(|p| p.seq()));
    let bbox = corners.fold(None, |acc: Option<(GridPoint, GridPoint)>, &q| {
        Some(match acc {
            None => (q, q),
            Some((lo, hi)) => (GridPoint::new(lo.x.min(q.x), lo.y.min(q.y)), GridPoint::new(hi.x.max(q.x), hi.y.max(q.y))),
        })
    });
    let mut c = Canvas::new(bbox, opts.unit_px);
    for (i, ((u, v), p)) in emb.edge_paths.iter().enumerate() {
        let label = format!("{u}|{v}");
        let color = opts.color(&label, i).to_string();
        c.polyline(p, &color, "edge", &label);
    }
    let r = (c.unit / 4).max(2);
    for (v, &q) in &emb.vertex_points {
        c.dot(q, "vertex", r);
        if opts.show_labels {
            c.text(q, v);
        }
    }
    c.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::build_separator;
    use crate::grid_geom::path_from_sequence;

    #[test]
    fn empty_canvas() {
        let svg = render_representation(&Representation::cpg(), &RenderOptions::default());
        assert!(svg.starts_with("<svg") && svg.ends_with("</svg>\n"));
        assert!(!svg.contains("<polyline"));
    }

    #[test]
    fn one_polyline_per_path() {
        let rep = build_separator(1).rep;
        let opts = RenderOptions::default();
        let svg = render_representation(&rep, &opts);
        assert_eq!(svg.matches("<polyline").count(), rep.paths.len());
        assert_eq!(svg, render_representation(&rep, &opts));
    }

    #[test]
    fn epg_shades_shared_edges() {
        let mut rep = Representation::new(Semantics::Epg);
        rep.insert("a", path_from_sequence(&[(0, 0), (3, 0)]).unwrap());
        rep.insert("b", path_from_sequence(&[(2, 0), (5, 0), (5, 2)]).unwrap());
        let svg = render_representation(&rep, &RenderOptions::default());
        assert_eq!(svg.matches(r#"class="shared""#).count(), 1);
    }

    #[test]
    fn roles_pick_longest_prefix() {
        let mut opts = RenderOptions::default();
        opts.color_roles.insert("V".into(), "red".into());
        opts.color_roles.insert("V[x]/E".into(), "blue".into());
        assert_eq!(opts.color("V[x]/E:3", 0), "blue");
        assert_eq!(opts.color("V[y].a", 0), "red");
        assert_eq!(opts.color("C[1].a", 1), PALETTE[1]);
    }
}
