//! SVG rendering of chart files in Adams-chart conventions: stem `t - s`
//! across, filtration `s` up. Algebraic Novikov data at `(s, t, k)` is drawn
//! at the Adams position `(s + k, t + k)`, where its `d_r` has the shape of an
//! Adams `d_r`; the weight `k` is the dot colour. Motivic (`ctau`) classes are
//! annotated with their weight `u`.

use std::collections::BTreeMap;
use std::fmt::Write;

use adams_core::algnov::DifferentialRecord;
use adams_core::transfer::{AdamsStatement, TransferRecord};

use crate::chart::{Chart, RecordKind, SsTag};
use crate::commands::AlgNovEntry;
use crate::error::Result;

const PALETTE: [&str; 8] = ["#000000", "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SvgOptions {
    /// Pixels per unit of stem and filtration.
    pub cell: u32,
    /// Which algebraic Novikov page to draw classes from; `None` draws `E_2`.
    pub page: Option<u32>,
}

impl Default for SvgOptions {
    fn default() -> Self {
        SvgOptions { cell: 40, page: None }
    }
}

#[derive(Clone, Debug)]
struct Dot {
    title: String,
    colour: usize,
    note: Option<String>,
}

#[derive(Clone, Debug)]
struct Arrow {
    from: (i64, i64),
    to: (i64, i64),
    r: u32,
    colour: usize,
}

/// `(stem, filtration)` of Adams bidegree `(s, t)`.
fn position(s: i64, t: i64) -> (i64, i64) {
    (t - s, s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn render(chart: &Chart, opts: SvgOptions) -> Result<String> {
    let mut dots: BTreeMap<(i64, i64), Vec<Dot>> = BTreeMap::new();
    let mut arrows = Vec::new();
    let page = opts.page.unwrap_or(2);
    for rec in &chart.records {
        let d = &rec.degree;
        match (rec.kind, rec.ss) {
            (RecordKind::Class, SsTag::Adams) if d.len() == 2 => {
                dots.entry(position(d[0], d[1])).or_default().push(Dot {
                    title: rec.names.join(" "),
                    colour: 0,
                    note: None,
                });
            }
            (RecordKind::Class, SsTag::Algnov) if d.len() == 3 => {
                let count = match rec.payload_as::<AlgNovEntry>() {
                    Ok(AlgNovEntry::Page { page: r, dim, .. }) => (r == page).then_some(dim),
                    Ok(AlgNovEntry::Final { .. }) => None,
                    // an `ext algnov-k` record
                    Err(_) => Some(1),
                };
                for _ in 0..count.unwrap_or(0) {
                    dots.entry(position(d[0] + d[2], d[1] + d[2])).or_default().push(Dot {
                        title: format!("({},{},{}) {}", d[0], d[1], d[2], rec.names.join(" ")),
                        colour: d[2] as usize,
                        note: None,
                    });
                }
            }
            (RecordKind::Class, SsTag::Ctau) if d.len() == 3 => {
                dots.entry(position(d[0], d[1])).or_default().push(Dot {
                    title: rec.names.join(" "),
                    colour: (d[1] - 2 * d[2]).max(0) as usize,
                    note: Some(format!("u={}", d[2])),
                });
            }
            (RecordKind::Differential, SsTag::Algnov) => {
                let diff: DifferentialRecord = rec.payload_as()?;
                let (s, t, k) = (diff.source.s as i64, diff.source.t as i64, diff.source.k as i64);
                let r = diff.r as i64;
                arrows.push(Arrow {
                    from: position(s + k, t + k),
                    to: position(s + k + r, t + k + r - 1),
                    r: diff.r,
                    colour: k as usize,
                });
            }
            (RecordKind::Transfer, _) => {
                let tr: TransferRecord = rec.payload_as()?;
                if let AdamsStatement::Differential { r, source, target, .. } = tr.statement {
                    arrows.push(Arrow {
                        from: position(source.0 as i64, source.1 as i64),
                        to: position(target.0 as i64, target.1 as i64),
                        r,
                        colour: 0,
                    });
                }
            }
            _ => {}
        }
    }

    let h = &chart.header;
    let points = dots.keys().copied().chain(arrows.iter().flat_map(|a| [a.from, a.to]));
    let (mut x_max, mut y_max) = ((h.t_max as i64 - 1).max(1), (h.s_max as i64).max(1));
    let (mut x_min, mut y_min) = (0i64, 0i64);
    for (x, y) in points {
        x_max = x_max.max(x);
        y_max = y_max.max(y);
        x_min = x_min.min(x);
        y_min = y_min.min(y);
    }
    let cell = opts.cell as i64;
    let margin = 40i64;
    let width = 2 * margin + (x_max - x_min) * cell;
    let height = 2 * margin + (y_max - y_min) * cell;
    let px = |x: i64| margin + (x - x_min) * cell;
    let py = |y: i64| margin + (y_max - y) * cell;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        out,
        r#"<defs><marker id="head" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker></defs>"#
    );
    let _ = writeln!(out, r##"<g class="grid" stroke="#dddddd">"##);
    for x in x_min..=x_max {
        let _ = writeln!(out, r#"<line x1="{0}" y1="{1}" x2="{0}" y2="{2}"/>"#, px(x), py(y_max), py(y_min));
    }
    for y in y_min..=y_max {
        let _ = writeln!(out, r#"<line x1="{1}" y1="{0}" x2="{2}" y2="{0}"/>"#, py(y), px(x_min), px(x_max));
    }
    let _ = writeln!(out, "</g>");
    let _ = writeln!(out, r#"<g class="axes">"#);
    for x in x_min..=x_max {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">{x}</text>"#, px(x), py(y_min) + 16);
    }
    for y in y_min..=y_max {
        let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="end">{y}</text>"#, px(x_min) - 8, py(y) + 4);
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g class="classes">"#);
    for (&(x, y), list) in &dots {
        let n = list.len() as i64;
        for (i, dot) in list.iter().enumerate() {
            let cx = px(x) + (2 * i as i64 - (n - 1)) * 4;
            let fill = PALETTE[dot.colour % PALETTE.len()];
            let _ = writeln!(
                out,
                r#"<circle cx="{cx}" cy="{}" r="3" fill="{fill}"><title>{}</title></circle>"#,
                py(y),
                escape(&dot.title)
            );
            if let Some(note) = &dot.note {
                let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="8">{}</text>"#, cx + 4, py(y) - 4, escape(note));
            }
        }
    }
    let _ = writeln!(out, "</g>");

    let _ = writeln!(out, r#"<g class="differentials">"#);
    for a in &arrows {
        let stroke = PALETTE[a.colour % PALETTE.len()];
        let (x1, y1, x2, y2) = (px(a.from.0), py(a.from.1), px(a.to.0), py(a.to.1));
        let _ = writeln!(
            out,
            r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{stroke}" marker-end="url(#head)"><title>d_{}</title></line>"#,
            a.r
        );
        let _ = writeln!(out, r#"<text x="{}" y="{}">d{}</text>"#, (x1 + x2) / 2 + 4, (y1 + y2) / 2, a.r);
    }
    let _ = writeln!(out, "</g>");

    let weights: Vec<usize> = {
        let mut w: Vec<usize> = dots.values().flatten().map(|d| d.colour).collect();
        w.sort_unstable();
        w.dedup();
        w
    };
    if weights.len() > 1 {
        let _ = writeln!(out, r#"<g class="legend">"#);
        for (i, k) in weights.iter().enumerate() {
            let y = 12 + 12 * i as i64;
            let _ = writeln!(
                out,
                r#"<circle cx="{}" cy="{}" r="3" fill="{}"/><text x="{}" y="{}">k={k}</text>"#,
                width - 50,
                y,
                PALETTE[k % PALETTE.len()],
                width - 44,
                y + 3
            );
        }
        let _ = writeln!(out, "</g>");
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chart::{ChartHeader, ChartRecord};
    use crate::config::WorkbenchConfig;

    fn header(s_max: u32, t_max: u32) -> ChartHeader {
        ChartHeader::new(&WorkbenchConfig {
            s_max,
            t_max,
            ..Default::default()
        })
    }

    fn circles(svg: &str) -> Vec<(i64, i64)> {
        svg.lines()
            .filter(|l| l.starts_with("<circle cx"))
            .map(|l| {
                let num = |key: &str| {
                    let rest = &l[l.find(key).unwrap() + key.len()..];
                    rest[..rest.find('"').unwrap()].parse().unwrap()
                };
                (num("cx=\""), num("cy=\""))
            })
            .collect()
    }

    #[test]
    fn empty_chart_is_an_empty_grid() {
        let svg = render(&Chart::new(header(4, 10)), SvgOptions::default()).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains(r#"class="grid""#));
        assert!(circles(&svg).is_empty());
        assert!(!svg.contains("marker-end=\"url(#head)\">"));
    }

    #[test]
    fn class_at_one_four_sits_at_stem_three() {
        let mut chart = Chart::new(header(4, 10));
        chart.push(ChartRecord::new(RecordKind::Class, SsTag::Adams, vec![1, 4], vec!["h_0".into()], &0).unwrap());
        let opts = SvgOptions::default();
        let svg = render(&chart, opts).unwrap();
        // x from stem 0, y down from filtration y_max = 4
        assert_eq!(circles(&svg), vec![(40 + 3 * 40, 40 + (4 - 1) * 40)]);
    }
}
