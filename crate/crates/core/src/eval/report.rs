use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{EvalError, SurvivalMatrix, SurvivalStats};

fn io_err(path: &Path, e: impl std::fmt::Display) -> EvalError {
    EvalError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Write `matrix.csv` and `stats.csv` into `dir` (created if missing).
///
/// `matrix.csv`: `trial,bit_0,...,bit_{n-1}`, 1 = survived, 0 = changed.
/// `stats.csv`: `bit,payload,survival_pct`, one row per bit position.
pub fn emit_csv(matrix: &SurvivalMatrix, stats: &SurvivalStats, dir: &Path) -> Result<(), EvalError> {
    fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;

    let path = dir.join("matrix.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
    let header = std::iter::once("trial".to_string()).chain((0..matrix.bits()).map(|i| format!("bit_{i}")));
    w.write_record(header).map_err(|e| io_err(&path, e))?;
    for (t, row) in matrix.rows.iter().enumerate() {
        let cells = std::iter::once(t.to_string()).chain(row.survived.iter().map(|&s| if s { "1" } else { "0" }.to_string()));
        w.write_record(cells).map_err(|e| io_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;

    let path = dir.join("stats.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| io_err(&path, e))?;
    w.write_record(["bit", "payload", "survival_pct"]).map_err(|e| io_err(&path, e))?;
    for (i, (b, p)) in stats.payload.iter().zip(&stats.per_bit_survival_pct).enumerate() {
        // `Display` for f64 round-trips exactly
        w.write_record([i.to_string(), (b as u8).to_string(), p.to_string()])
            .map_err(|e| io_err(&path, e))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StatsRow {
    pub bit: usize,
    pub payload: bool,
    pub survival_pct: f64,
}

/// Read back a `stats.csv` written by [`emit_csv`].
pub fn read_stats_csv(path: &Path) -> Result<Vec<StatsRow>, EvalError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| io_err(path, e))?;
    r.records()
        .map(|rec| {
            let rec = rec.map_err(|e| io_err(path, e))?;
            let field = |i: usize| rec.get(i).unwrap_or("");
            let bad = |what: &str| io_err(path, format!("bad {what} field in line {:?}", rec.position().map(|p| p.line())));
            Ok(StatsRow {
                bit: field(0).parse().map_err(|_| bad("bit"))?,
                payload: match field(1) {
                    "0" => false,
                    "1" => true,
                    _ => return Err(bad("payload")),
                },
                survival_pct: field(2).parse().map_err(|_| bad("survival_pct"))?,
            })
        })
        .collect()
}

/// Counts per 1-percentage-point bin; bin `k` holds values in `[k, k+1)`,
/// with 100 in its own bin.
pub fn histogram_bins(values: &[f64]) -> BTreeMap<u32, usize> {
    let mut bins = BTreeMap::new();
    for &v in values {
        let bin = v.clamp(0.0, 100.0).floor() as u32;
        *bins.entry(bin).or_insert(0) += 1;
    }
    bins
}

const WIDTH: f64 = 860.0;
const CHART_H: f64 = 260.0;
const LEFT: f64 = 50.0;
const TOP: f64 = 40.0;
const GAP: f64 = 90.0;
const BIN_W: f64 = (WIDTH - LEFT - 20.0) / 101.0;
const COLORS: [&str; 3] = ["#4e79a7", "#f28e2b", "#59a14f"];

struct Series<'a> {
    label: &'a str,
    class: &'a str,
    bins: BTreeMap<u32, usize>,
}

fn chart(out: &mut String, id: &str, title: &str, top: f64, series: &[Series<'_>]) {
    let max = series.iter().flat_map(|s| s.bins.values()).copied().max().unwrap_or(0).max(1) as f64;
    let base = top + CHART_H;
    let _ = writeln!(out, r#"<g id="{id}">"#);
    let _ = writeln!(out, r#"<text x="{LEFT}" y="{}" font-size="14" font-weight="bold">{title}</text>"#, top - 14.0);
    let _ = writeln!(
        out,
        r#"<line x1="{LEFT}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        LEFT + 101.0 * BIN_W
    );
    for tick in (0..=100).step_by(10) {
        let x = LEFT + (tick as f64 + 0.5) * BIN_W;
        let _ = writeln!(
            out,
            r#"<text x="{x:.2}" y="{}" font-size="10" text-anchor="middle">{tick}%</text>"#,
            base + 14.0
        );
    }
    let sub_w = BIN_W / series.len().max(1) as f64;
    for (k, s) in series.iter().enumerate() {
        for (&bin, &count) in &s.bins {
            let h = (CHART_H - 20.0) * count as f64 / max;
            let x = LEFT + bin as f64 * BIN_W + k as f64 * sub_w;
            let _ = writeln!(
                out,
                r##"<rect class="bar {}" data-chart="{id}" data-bin="{bin}" data-count="{count}" x="{x:.2}" y="{:.2}" width="{:.2}" height="{h:.2}" fill="{}"/>"##,
                s.class,
                base - h,
                sub_w,
                COLORS[k % COLORS.len()]
            );
            let _ = writeln!(
                out,
                r#"<text class="count" x="{:.2}" y="{:.2}" font-size="8" text-anchor="middle">{count}</text>"#,
                x + sub_w / 2.0,
                base - h - 2.0
            );
        }
        if series.len() > 1 {
            let ly = top + 4.0 + 14.0 * k as f64;
            let lx = WIDTH - 170.0;
            let _ = writeln!(out, r#"<rect x="{lx}" y="{ly}" width="10" height="10" fill="{}"/>"#, COLORS[k % COLORS.len()]);
            let _ = writeln!(out, r#"<text x="{}" y="{}" font-size="11">{}</text>"#, lx + 14.0, ly + 9.0, s.label);
        }
    }
    let _ = writeln!(out, "</g>");
}

/// Two histograms: per-trial survival, and per-bit survival split by payload
/// bit value. Every bar carries its count as text and as `data-count`.
pub fn render_histogram_svg(stats: &SurvivalStats) -> String {
    let height = TOP + 2.0 * CHART_H + GAP + 40.0;
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{height}" viewBox="0 0 {WIDTH} {height}" font-family="sans-serif">"#
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let summary = match (stats.mean_pct, stats.variance_pct2) {
        (Some(m), Some(v)) => format!("mean {m:.2}%, variance {v:.2}"),
        _ => "no bits".to_string(),
    };
    chart(
        &mut out,
        "per-trial",
        &format!("Bits unchanged across a test sequence ({summary})"),
        TOP,
        &[Series {
            label: "trials",
            class: "series-all",
            bins: histogram_bins(&stats.per_trial_survival_pct),
        }],
    );
    let by_value: Vec<Series<'_>> = [("bit value 0", "series-0"), ("bit value 1", "series-1")]
        .into_iter()
        .zip(&stats.per_bit_by_value)
        .filter(|(_, v)| !v.is_empty())
        .map(|((label, class), v)| Series {
            label,
            class,
            bins: histogram_bins(v),
        })
        .collect();
    chart(
        &mut out,
        "per-bit",
        "Individual bits unchanged, by payload bit value",
        TOP + CHART_H + GAP,
        &by_value,
    );
    out.push_str("</svg>\n");
    out
}

pub fn emit_histogram(stats: &SurvivalStats, path: &Path) -> Result<(), EvalError> {
    fs::write(path, render_histogram_svg(stats)).map_err(|e| io_err(path, e))
}
