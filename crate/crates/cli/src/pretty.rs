//! Plain-text tables for `--pretty`.

use std::fmt::Write;

use strandcat::algebra::{HomClass, SymGenerator};
use strandcat::contact::ContactView;
use strandcat::isoverify::{DiagramSummary, IsoReport, SfhTable};
use strandcat::{LabelSet, SurgeryVerdict};

fn list(xs: &[usize]) -> String {
    if xs.is_empty() {
        return "-".into();
    }
    xs.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn hom(h: &HomClass) -> String {
    h.multiplicities().iter().map(|m| m.to_string()).collect()
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: &[String]| {
        let mut l = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                l.push_str("  ");
            }
            let _ = write!(l, "{cell:<w$}");
        }
        out.push_str(l.trim_end());
        out.push('\n');
    };
    line(&header.iter().map(|h| h.to_string()).collect::<Vec<_>>());
    for row in &rows {
        line(row);
    }
    out.pop();
    out
}

pub fn verdict(v: &SurgeryVerdict) -> String {
    match v {
        SurgeryVerdict::Ok => "valid".into(),
        SurgeryVerdict::Invalid { circle } => {
            format!("invalid: closed loop through places {circle:?}")
        }
    }
}

pub fn info(s: &DiagramSummary, marked_points: usize) -> String {
    table(
        &["invariant", "value"],
        vec![
            vec!["segments".into(), list(&s.segments)],
            vec!["matching".into(), list(&s.matching)],
            vec!["pairs (k)".into(), s.k.to_string()],
            vec!["interior steps".into(), s.interior_steps.to_string()],
            vec!["euler characteristic".into(), s.euler_char.to_string()],
            vec!["genus".into(), s.genus.to_string()],
            vec![
                "boundary components".into(),
                s.boundary_components.to_string(),
            ],
            vec!["marked points".into(), marked_points.to_string()],
            vec!["squares".into(), s.squares.to_string()],
        ],
    )
}

pub fn basis<'a>(rows: impl Iterator<Item = (&'a SymGenerator, i64, &'a HomClass)>) -> String {
    table(
        &["s", "t", "moving", "dotted", "maslov2", "h"],
        rows.map(|(g, m, h)| {
            let moving: Vec<String> = g.moving.iter().map(|(p, q)| format!("{p}->{q}")).collect();
            vec![
                g.s.to_string(),
                g.t.to_string(),
                if moving.is_empty() {
                    "-".into()
                } else {
                    moving.join(",")
                },
                g.dotted.to_string(),
                m.to_string(),
                hom(h),
            ]
        })
        .collect(),
    )
}

pub fn homology<'a>(
    rows: impl Iterator<Item = (LabelSet, LabelSet, &'a HomClass, usize)>,
    total: usize,
) -> String {
    let body = table(
        &["s", "t", "h", "dim"],
        rows.map(|(s, t, h, n)| vec![s.to_string(), t.to_string(), hom(h), n.to_string()])
            .collect(),
    );
    format!("{body}\ntotal {total}")
}

pub fn contact(xs: &[ContactView]) -> String {
    let body = table(
        &["bottom", "top", "used"],
        xs.iter()
            .map(|x| vec![x.bottom.to_string(), x.top.to_string(), list(&x.used)])
            .collect(),
    );
    format!("{body}\n{} tight structures", xs.len())
}

pub fn report(r: &IsoReport) -> String {
    let mut out = table(
        &["s", "t", "h", "contact", "local", "chain", "maslov2"],
        r.summands
            .iter()
            .map(|row| {
                vec![
                    row.s.to_string(),
                    row.t.to_string(),
                    hom(&row.h),
                    row.contact_count.to_string(),
                    u8::from(row.local_nonzero).to_string(),
                    row.chain_dim.to_string(),
                    row.maslov2
                        .iter()
                        .map(|m| m.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ]
            })
            .collect(),
    );
    let _ = write!(
        out,
        "\ncontact algebra dim {}, homology dim {}, {} triples, {} products checked",
        r.ca_dim, r.homology_dim, r.triples_checked, r.pairs_checked
    );
    for m in &r.mismatches {
        let _ = write!(out, "\nmismatch [{}] {}", m.check, m.detail);
    }
    if let Some(ms) = r.timing_ms {
        let _ = write!(out, "\n{ms} ms");
    }
    let _ = write!(out, "\n{}", if r.success() { "verified" } else { "FAILED" });
    out
}

pub fn sfh(t: &SfhTable) -> String {
    let mut header = vec!["from \\ to".to_string()];
    header.extend(t.subsets.iter().map(|s| s.to_string()));
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let rows = t
        .subsets
        .iter()
        .zip(&t.counts)
        .map(|(s, row)| {
            let mut r = vec![s.to_string()];
            r.extend(row.iter().map(|n| n.to_string()));
            r
        })
        .collect();
    let status = if t.agrees() {
        "agrees with homology"
    } else {
        "DISAGREES with homology"
    };
    format!("{}\n{status}", table(&header, rows))
}

pub fn corpus<'a>(
    rows: impl Iterator<Item = (&'a [usize], &'a [usize], usize, usize, bool)>,
    failures: usize,
) -> String {
    let body = table(
        &["segments", "matching", "contact", "homology", "status"],
        rows.map(|(seg, m, a, b, ok)| {
            vec![
                list(seg),
                list(m),
                a.to_string(),
                b.to_string(),
                if ok { "ok" } else { "FAILED" }.to_string(),
            ]
        })
        .collect(),
    );
    format!("{body}\n{failures} failures")
}
