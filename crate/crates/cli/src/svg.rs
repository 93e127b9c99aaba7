//! Minimal log-log line chart of median time against order, one line per
//! preset. Hand-written SVG; no plotting dependency.

use std::fmt::Write;

use matmul_core::BenchRecord;

const W: f64 = 720.0;
const H: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 170.0;
const TOP: f64 = 30.0;
const BOTTOM: f64 = 50.0;

const PALETTE: [&str; 12] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#000000", "#aec7e8",
];

pub fn render(records: &[BenchRecord]) -> String {
    let mut names: Vec<&str> = Vec::new();
    for r in records {
        if !names.contains(&r.algo.as_str()) {
            names.push(&r.algo);
        }
    }
    let time = |r: &BenchRecord| r.median_time.max(1e-9).log10();
    let order = |r: &BenchRecord| (r.order as f64).log2();
    let span = |it: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(v), b.max(v)));
        if lo.is_finite() {
            (lo, if hi > lo { hi } else { lo + 1.0 })
        } else {
            (0.0, 1.0)
        }
    };
    let (x0, x1) = span(&mut records.iter().map(order));
    let (y0, y1) = span(&mut records.iter().map(time));
    let (y0, y1) = (y0.floor(), y1.ceil().max(y0.floor() + 1.0));
    let px = |x: f64| LEFT + (x - x0) / (x1 - x0) * (W - LEFT - RIGHT);
    let py = |y: f64| H - BOTTOM - (y - y0) / (y1 - y0) * (H - TOP - BOTTOM);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let (ax, ay) = (px(x0), py(y0));
    let _ = writeln!(
        s,
        r#"<path d="M{ax:.1},{:.1} V{ay:.1} H{:.1}" stroke="black" fill="none"/>"#,
        TOP,
        W - RIGHT
    );
    let mut k = x0.ceil();
    while k <= x1 + 1e-9 {
        let x = px(k);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{ay:.1}" x2="{x:.1}" y2="{:.1}" stroke="black"/>"#,
            ay + 4.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{x:.1}" y="{:.1}" text-anchor="middle">{}</text>"#,
            ay + 18.0,
            1u64 << k as u32
        );
        k += 1.0;
    }
    let mut e = y0;
    while e <= y1 + 1e-9 {
        let y = py(e);
        let _ = writeln!(
            s,
            r#"<line x1="{:.1}" y1="{y:.1}" x2="{ax:.1}" y2="{y:.1}" stroke="black"/>"#,
            ax - 4.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">1e{e}</text>"#, ax - 7.0, y + 4.0);
        e += 1.0;
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">order (log scale)</text>"#,
        (LEFT + W - RIGHT) / 2.0,
        H - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.1}" text-anchor="middle" transform="rotate(-90 16 {:.1})">median time, s (log scale)</text>"#,
        H / 2.0,
        H / 2.0
    );

    for (i, name) in names.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut pts: Vec<&BenchRecord> = records.iter().filter(|r| r.algo == *name).collect();
        pts.sort_by_key(|r| r.order);
        let coords: Vec<String> =
            pts.iter().map(|r| format!("{:.1},{:.1}", px(order(r)), py(time(r)))).collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            coords.join(" ")
        );
        let ly = TOP + 16.0 * i as f64;
        let lx = W - RIGHT + 12.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx:.1}" y1="{ly:.1}" x2="{:.1}" y2="{ly:.1}" stroke="{color}" stroke-width="2"/>"#,
            lx + 18.0
        );
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}">{name}</text>"#, lx + 24.0, ly + 4.0);
    }
    s.push_str("</svg>\n");
    s
}
