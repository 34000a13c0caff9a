//! SVG output: braid diagrams labelled with crossing names, and separatrix
//! charts for derivations.
//!
//! Output is byte-deterministic. Every coordinate is printed with at most two
//! decimals, and elements are emitted in word/sequence order.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::derivation::{separatrix_report, validate_derivation, Derivation};
use crate::error::{Error, Result};
use crate::naming::{signed_name_sequence, NameEntry, NamePair};
use crate::word::BraidWord;

#[derive(Debug, Clone, PartialEq)]
pub struct RenderOptions {
    pub cell_width: f64,
    pub cell_height: f64,
    pub show_labels: bool,
    /// Name pairs whose separatrix crossings get marked in charts.
    pub highlight_pairs: Vec<NamePair>,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            cell_width: 24.0,
            cell_height: 16.0,
            show_labels: false,
            highlight_pairs: Vec::new(),
        }
    }
}

impl RenderOptions {
    fn check(&self) -> Result<()> {
        let ok = |v: f64| v.is_finite() && v > 0.0;
        if !ok(self.cell_width) || !ok(self.cell_height) {
            return Err(Error::Data(format!(
                "cell dimensions must be positive, got {}x{}",
                self.cell_width, self.cell_height
            )));
        }
        Ok(())
    }
}

/// Formats a coordinate with at most two decimals and no trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn open_svg(out: &mut String, width: f64, height: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#,
        w = num(width),
        h = num(height)
    );
    let _ = writeln!(
        out,
        r#"<rect x="0" y="0" width="{}" height="{}" fill="white"/>"#,
        num(width),
        num(height)
    );
}

fn line(out: &mut String, class: &str, (x0, y0): (f64, f64), (x1, y1): (f64, f64)) {
    let _ = writeln!(
        out,
        r#"<line class="{class}" x1="{}" y1="{}" x2="{}" y2="{}" stroke="black" stroke-width="1.5" stroke-linecap="round"/>"#,
        num(x0),
        num(y0),
        num(x1),
        num(y1)
    );
}

fn rotated_label(out: &mut String, class: &str, x: f64, y: f64, size: f64, text: &str) {
    let _ = writeln!(
        out,
        r#"<text class="{class}" x="{x}" y="{y}" font-family="serif" font-size="{}" transform="rotate(-45 {x} {y})">{}</text>"#,
        num(size),
        escape(text),
        x = num(x),
        y = num(y)
    );
}

/// One column per letter and one horizontal track per strand position,
/// position 1 at the bottom. A positive letter `σ_i` draws the strand coming
/// from position `i + 1` over the one coming from position `i`; a negative
/// letter draws it under.
pub fn render_braid_diagram(w: &BraidWord, opts: &RenderOptions) -> Result<String> {
    opts.check()?;
    let (cw, ch) = (opts.cell_width, opts.cell_height);
    let n = w.strand_count();
    let left = cw;
    let top = if opts.show_labels { 3.0 * ch } else { ch };
    let y = |pos: usize| top + (n - pos) as f64 * ch;
    let width = left + (w.len() as f64 + 1.0) * cw;
    let height = top + (n as f64 - 1.0) * ch + ch;

    let mut out = String::new();
    open_svg(&mut out, width, height);
    for pos in 1..=n {
        let _ = writeln!(
            out,
            r#"<text class="strand-name" x="{}" y="{}" font-family="serif" font-size="{}" text-anchor="end">{pos}</text>"#,
            num(left - 4.0),
            num(y(pos) + ch * 0.2),
            num(ch * 0.6)
        );
    }

    let names = signed_name_sequence(w);
    if w.is_empty() {
        for pos in 1..=n {
            line(&mut out, "track", (left, y(pos)), (left + cw, y(pos)));
        }
    }
    for (t, (letter, name)) in w.letters().iter().zip(names.iter()).enumerate() {
        let x0 = left + t as f64 * cw;
        let x1 = x0 + cw;
        let i = letter.generator();
        let _ = writeln!(
            out,
            r#"<g class="column" data-letter="{}" data-name="{}">"#,
            letter.to_signed(),
            name
        );
        for pos in (1..=n).filter(|&p| p != i && p != i + 1) {
            line(&mut out, "track", (x0, y(pos)), (x1, y(pos)));
        }
        let (over_from, under_from) = if letter.is_positive() { (i + 1, i) } else { (i, i + 1) };
        let over_to = if over_from == i { i + 1 } else { i };
        let under_to = if under_from == i { i + 1 } else { i };
        line(&mut out, "over", (x0, y(over_from)), (x1, y(over_to)));
        // the under strand is broken around the crossing point
        let (ux0, uy0, ux1, uy1) = (x0, y(under_from), x1, y(under_to));
        let at = |s: f64| (ux0 + (ux1 - ux0) * s, uy0 + (uy1 - uy0) * s);
        line(&mut out, "under", (ux0, uy0), at(0.38));
        line(&mut out, "under", at(0.62), (ux1, uy1));
        out.push_str("</g>\n");
        if opts.show_labels {
            rotated_label(&mut out, "name-label", x0 + cw * 0.5, top - ch * 0.6, ch * 0.5, &name.to_string());
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}

/// Rows are the name sequences of the successive words; each name gets one
/// polyline (its separatrix) through its positions in the rows. Segments
/// between consecutive rows are straight, so two separatrices cross in an
/// interval exactly when their names swap order there.
pub fn render_derivation_chart(d: &Derivation, opts: &RenderOptions) -> Result<String> {
    opts.check()?;
    let words = validate_derivation(d)?;
    let report = separatrix_report(d)?;
    let rows: Vec<Vec<NameEntry>> = words
        .iter()
        .map(|w| signed_name_sequence(w).entries)
        .collect();
    let (cw, ch) = (opts.cell_width, opts.cell_height);
    let len = d.start().len();
    let left = 2.0 * cw;
    let top = if opts.show_labels { 3.0 * ch } else { ch };
    let bottom = if opts.show_labels { 3.0 * ch } else { ch };
    let x = |j: usize| left + (j as f64 + 0.5) * cw;
    let y = |t: usize| top + t as f64 * ch;
    let width = left + (len as f64 + 1.0) * cw;
    let height = top + (rows.len() as f64 - 1.0) * ch + bottom;

    let positions: Vec<HashMap<NameEntry, usize>> = rows
        .iter()
        .map(|r| r.iter().enumerate().map(|(j, e)| (*e, j)).collect())
        .collect();

    let mut out = String::new();
    open_svg(&mut out, width, height);

    for (t, row) in rows.iter().enumerate() {
        let listing: Vec<String> = row.iter().map(|e| e.to_string()).collect();
        let _ = writeln!(
            out,
            r#"<g class="row" data-row="{t}" data-names="{}">"#,
            listing.join(" ")
        );
        let _ = writeln!(
            out,
            r#"<text class="row-label" x="{}" y="{}" font-family="serif" font-size="{}" text-anchor="end">w{t}</text>"#,
            num(left - 4.0),
            num(y(t) + ch * 0.2),
            num(ch * 0.5)
        );
        for j in 0..row.len() {
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="{}" fill="black"/>"#,
                num(x(j)),
                num(y(t)),
                num(ch * 0.1)
            );
        }
        out.push_str("</g>\n");
    }

    let highlighted = |e: &NameEntry| {
        opts.highlight_pairs
            .iter()
            .any(|p| p.first() == *e || p.second() == *e)
    };
    for name in rows.first().map(Vec::as_slice).unwrap_or(&[]) {
        let points: Vec<String> = positions
            .iter()
            .enumerate()
            .map(|(t, pos)| format!("{},{}", num(x(pos[name])), num(y(t))))
            .collect();
        let width = if highlighted(name) { 2.0 } else { 1.0 };
        let _ = writeln!(
            out,
            r##"<polyline class="separatrix" data-name="{name}" points="{}" fill="none" stroke="#d02020" stroke-width="{}" stroke-dasharray="3,2"/>"##,
            points.join(" "),
            num(width)
        );
    }

    for pair in &opts.highlight_pairs {
        let (a, b) = (pair.first(), pair.second());
        if !positions.first().is_some_and(|p| p.contains_key(&a) && p.contains_key(&b)) {
            return Err(Error::Data(format!("highlighted pair {pair} does not occur in the derivation")));
        }
        for t in 0..rows.len() - 1 {
            let (a0, a1) = (positions[t][&a] as f64, positions[t + 1][&a] as f64);
            let (b0, b1) = (positions[t][&b] as f64, positions[t + 1][&b] as f64);
            if (a0 < b0) == (a1 < b1) {
                continue;
            }
            let s = (b0 - a0) / ((a1 - a0) - (b1 - b0));
            let cx = left + (a0 + (a1 - a0) * s + 0.5) * cw;
            let cy = y(t) + s * ch;
            let _ = writeln!(
                out,
                r##"<circle class="flip" data-step="{}" data-pair="{pair}" cx="{}" cy="{}" r="{}" fill="none" stroke="#2040d0" stroke-width="1.5"/>"##,
                t + 1,
                num(cx),
                num(cy),
                num(ch * 0.3)
            );
        }
    }

    if opts.show_labels {
        let last = rows.len() - 1;
        for (j, e) in rows[0].iter().enumerate() {
            rotated_label(&mut out, "name-label", x(j), top - ch * 0.6, ch * 0.5, &e.to_string());
        }
        if last > 0 {
            for (j, e) in rows[last].iter().enumerate() {
                rotated_label(&mut out, "name-label-end", x(j), y(last) + ch * 1.6, ch * 0.5, &e.to_string());
            }
        }
    }
    let _ = writeln!(
        out,
        r#"<!-- {} steps, max flip count {} -->"#,
        d.len(),
        report.max_flip_count
    );
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word;

    #[test]
    fn number_format() {
        assert_eq!(num(12.0), "12");
        assert_eq!(num(12.5), "12.5");
        assert_eq!(num(1.0 / 3.0), "0.33");
        assert_eq!(num(-0.001), "0");
    }

    #[test]
    fn empty_word_has_tracks_only() {
        let svg = render_braid_diagram(&parse_word("", Some(3)).unwrap(), &RenderOptions::default())
            .unwrap();
        assert_eq!(svg.matches(r#"class="track""#).count(), 3);
        assert!(!svg.contains(r#"class="column""#));
    }

    #[test]
    fn signed_columns() {
        let opts = RenderOptions {
            show_labels: true,
            ..RenderOptions::default()
        };
        let svg = render_braid_diagram(&parse_word("1 -1", Some(2)).unwrap(), &opts).unwrap();
        assert_eq!(svg.matches(r#"class="column""#).count(), 2);
        assert!(svg.contains(">N(1,2,1)</text>"));
        assert!(svg.contains(">N(1,2,1)^-1</text>"));
        // opposite glyphs: the over strand descends in one column and rises in the other
        let overs: Vec<&str> = svg.lines().filter(|l| l.contains(r#"class="over""#)).collect();
        assert_eq!(overs.len(), 2);
        assert!(overs[0].contains(r#"y1="48" x2="48" y2="64""#) || overs[0].contains(r#"y2="64""#));
        assert!(overs[1].contains(r#"y1="64""#) && overs[1].contains(r#"y2="48""#));
    }

    #[test]
    fn bad_options() {
        let opts = RenderOptions {
            cell_width: 0.0,
            ..RenderOptions::default()
        };
        assert!(render_braid_diagram(&parse_word("1", None).unwrap(), &opts).is_err());
    }
}
