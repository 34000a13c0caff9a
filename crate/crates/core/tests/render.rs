use regex::Regex;

use braidmetric_core::{
    family_word, grid_derivation, parse_word, random_equivalent_pair, render_braid_diagram,
    render_derivation_chart, separatrix_report, Derivation, FamilyKind, Move, NameEntry, NamePair,
    RenderOptions,
};

fn labelled() -> RenderOptions {
    RenderOptions {
        show_labels: true,
        ..RenderOptions::default()
    }
}

fn labels(svg: &str, class: &str) -> Vec<String> {
    let re = Regex::new(&format!(r#"<text class="{class}"[^>]*>([^<]*)</text>"#)).unwrap();
    re.captures_iter(svg).map(|c| c[1].to_string()).collect()
}

fn polylines(svg: &str) -> Vec<(String, Vec<(f64, f64)>)> {
    let re = Regex::new(r#"<polyline class="separatrix" data-name="([^"]+)" points="([^"]+)""#).unwrap();
    re.captures_iter(svg)
        .map(|c| {
            let pts = c[2]
                .split(' ')
                .map(|p| {
                    let (x, y) = p.split_once(',').unwrap();
                    (x.parse().unwrap(), y.parse().unwrap())
                })
                .collect();
            (c[1].to_string(), pts)
        })
        .collect()
}

/// Proper crossings between two polylines sampled on the same rows.
fn crossings(a: &[(f64, f64)], b: &[(f64, f64)]) -> u64 {
    a.windows(2)
        .zip(b.windows(2))
        .filter(|(sa, sb)| (sa[0].0 < sb[0].0) != (sa[1].0 < sb[1].0))
        .count() as u64
}

#[test]
fn two_diagram_golden_labels() {
    let svg = render_braid_diagram(&family_word(FamilyKind::Prop1Left, 2).unwrap(), &labelled()).unwrap();
    assert_eq!(
        labels(&svg, "name-label").join(" "),
        "N(1,2,1) N(1,2,2) N(1,2,3) N(1,2,4) N(2,3,1) N(1,3,1) N(1,3,2) N(2,3,2) \
         N(2,3,3) N(1,3,3) N(1,3,4) N(2,3,4)"
    );
    let svg = render_braid_diagram(&family_word(FamilyKind::Prop1Right, 2).unwrap(), &labelled()).unwrap();
    assert_eq!(
        labels(&svg, "name-label").join(" "),
        "N(2,3,1) N(1,3,1) N(1,3,2) N(2,3,2) N(2,3,3) N(1,3,3) N(1,3,4) N(2,3,4) \
         N(1,2,1) N(1,2,2) N(1,2,3) N(1,2,4)"
    );
}

#[test]
fn unlabelled_diagram_has_no_name_text() {
    let svg = render_braid_diagram(&parse_word("1 2 1", None).unwrap(), &RenderOptions::default()).unwrap();
    assert!(labels(&svg, "name-label").is_empty());
    assert_eq!(svg.matches(r#"<g class="column""#).count(), 3);
}

#[test]
fn grid_one_chart() {
    let d = grid_derivation(1).unwrap();
    let svg = render_derivation_chart(&d, &RenderOptions::default()).unwrap();
    assert_eq!(svg.matches(r#"<g class="row""#).count(), 5);
    let lines = polylines(&svg);
    assert_eq!(lines.len(), 6);
    let get = |name: &str| &lines.iter().find(|(n, _)| n == name).unwrap().1;
    assert_eq!(crossings(get("N(1,3,1)"), get("N(2,3,1)")), 2);
    assert_eq!(crossings(get("N(1,2,2)"), get("N(2,3,1)")), 1);
}

#[test]
fn small_charts() {
    let one = Derivation::new(parse_word("1 2 1", None).unwrap(), vec![Move::Hexagon { pos: 1 }]);
    let svg = render_derivation_chart(&one, &RenderOptions::default()).unwrap();
    assert!(svg.contains(r#"data-row="0" data-names="N(1,2,1) N(1,3,1) N(2,3,1)""#));
    assert!(svg.contains(r#"data-row="1" data-names="N(2,3,1) N(1,3,1) N(1,2,1)""#));

    let empty = Derivation::new(parse_word("1 2", None).unwrap(), vec![]);
    let svg = render_derivation_chart(&empty, &RenderOptions::default()).unwrap();
    assert_eq!(svg.matches(r#"<g class="row""#).count(), 1);
}

#[test]
fn chart_crossings_equal_flip_counts() {
    for seed in 0..40 {
        let w = parse_word("1 2 1 3 2 1 2 3 1", Some(4)).unwrap();
        let (_, d) = random_equivalent_pair(&w, 12, seed);
        let report = separatrix_report(&d).unwrap();
        let svg = render_derivation_chart(&d, &RenderOptions::default()).unwrap();
        let lines = polylines(&svg);
        for i in 0..lines.len() {
            for j in i + 1..lines.len() {
                let x: NameEntry = lines[i].0.parse().unwrap();
                let y: NameEntry = lines[j].0.parse().unwrap();
                assert_eq!(crossings(&lines[i].1, &lines[j].1), report.flip_count(x, y));
            }
        }
    }
}

#[test]
fn highlighted_flips_are_marked() {
    let d = grid_derivation(1).unwrap();
    let pair = NamePair::new("N(1,3,1)".parse().unwrap(), "N(2,3,1)".parse().unwrap());
    let opts = RenderOptions {
        highlight_pairs: vec![pair],
        ..RenderOptions::default()
    };
    let svg = render_derivation_chart(&d, &opts).unwrap();
    assert_eq!(svg.matches(r#"<circle class="flip""#).count(), 2);

    let missing = RenderOptions {
        highlight_pairs: vec![NamePair::new("N(1,2,9)".parse().unwrap(), "N(2,3,1)".parse().unwrap())],
        ..RenderOptions::default()
    };
    assert!(render_derivation_chart(&d, &missing).is_err());
}

#[test]
fn output_is_stable() {
    let d = grid_derivation(2).unwrap();
    let a = render_derivation_chart(&d, &labelled()).unwrap();
    let b = render_derivation_chart(&d, &labelled()).unwrap();
    assert_eq!(a, b);
    let decimals = Regex::new(r#"\d\.\d{3,}"#).unwrap();
    assert!(!decimals.is_match(&a));
}
