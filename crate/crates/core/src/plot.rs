//! Minimal SVG plots: bars, points with error bars, and lines.

use std::fmt::Write;

use crate::inference::{HeatingFit, HeatingPoint, SweepPoint};
use crate::mc::Histogram;
use crate::units;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN: f64 = 60.0;

struct Frame {
    x: (f64, f64),
    y: (f64, f64),
    svg: String,
}

impl Frame {
    fn new(x: (f64, f64), y: (f64, f64), title: &str, xlabel: &str, ylabel: &str) -> Self {
        let pad = |(lo, hi): (f64, f64)| if hi > lo { (lo, hi) } else { (lo - 0.5, hi + 0.5) };
        let mut f = Frame { x: pad(x), y: pad(y), svg: String::new() };
        let _ = write!(
            f.svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" font-family="sans-serif" font-size="12">
<rect width="100%" height="100%" fill="white"/>
<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>
<text x="{}" y="{}" text-anchor="middle">{}</text>
<text x="16" y="{}" text-anchor="middle" transform="rotate(-90 16 {})">{}</text>
"#,
            WIDTH / 2.0,
            escape(title),
            WIDTH / 2.0,
            HEIGHT - 12.0,
            escape(xlabel),
            HEIGHT / 2.0,
            HEIGHT / 2.0,
            escape(ylabel),
        );
        f.axes();
        f
    }

    fn px(&self, x: f64) -> f64 {
        MARGIN + (x - self.x.0) / (self.x.1 - self.x.0) * (WIDTH - 2.0 * MARGIN)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT - MARGIN - (y - self.y.0) / (self.y.1 - self.y.0) * (HEIGHT - 2.0 * MARGIN)
    }

    fn axes(&mut self) {
        let (x0, x1, y0, y1) = (MARGIN, WIDTH - MARGIN, HEIGHT - MARGIN, MARGIN);
        let _ = writeln!(self.svg, r#"<path d="M{x0} {y1} V{y0} H{x1}" fill="none" stroke="black"/>"#);
        for i in 0..=4 {
            let t = i as f64 / 4.0;
            let xv = self.x.0 + t * (self.x.1 - self.x.0);
            let yv = self.y.0 + t * (self.y.1 - self.y.0);
            let (px, py) = (self.px(xv), self.py(yv));
            let _ = writeln!(
                self.svg,
                r#"<line x1="{px:.2}" y1="{y0}" x2="{px:.2}" y2="{}" stroke="black"/><text x="{px:.2}" y="{}" text-anchor="middle">{}</text>"#,
                y0 + 5.0,
                y0 + 18.0,
                tick(xv)
            );
            let _ = writeln!(
                self.svg,
                r#"<line x1="{}" y1="{py:.2}" x2="{x0}" y2="{py:.2}" stroke="black"/><text x="{}" y="{:.2}" text-anchor="end">{}</text>"#,
                x0 - 5.0,
                x0 - 8.0,
                py + 4.0,
                tick(yv)
            );
        }
    }

    fn rect(&mut self, x_lo: f64, x_hi: f64, y: f64) {
        let (a, b) = (self.px(x_lo), self.px(x_hi));
        let (top, base) = (self.py(y), self.py(self.y.0));
        let _ = writeln!(
            self.svg,
            r##"<rect x="{a:.2}" y="{top:.2}" width="{:.2}" height="{:.2}" fill="#4a7fb5" stroke="white" stroke-width="0.5"/>"##,
            b - a,
            base - top
        );
    }

    fn point(&mut self, x: f64, y: f64, err: f64) {
        let (px, py) = (self.px(x), self.py(y));
        let (lo, hi) = (self.py(y - err), self.py(y + err));
        let _ = writeln!(
            self.svg,
            r#"<line x1="{px:.2}" y1="{lo:.2}" x2="{px:.2}" y2="{hi:.2}" stroke="black"/><circle cx="{px:.2}" cy="{py:.2}" r="3"/>"#
        );
    }

    fn line(&mut self, pts: &[(f64, f64)]) {
        let d: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", self.px(x), self.py(y))).collect();
        let _ = writeln!(self.svg, r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##, d.join(" "));
    }

    fn finish(mut self) -> String {
        self.svg.push_str("</svg>\n");
        self.svg
    }
}

fn tick(v: f64) -> String {
    if v == 0.0 || (1e-3..1e4).contains(&v.abs()) {
        format!("{:.3}", v).trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn bounds(values: impl Iterator<Item = f64>) -> (f64, f64) {
    values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

pub fn histogram_svg(h: &Histogram, title: &str) -> String {
    let max = h.counts.iter().copied().max().unwrap_or(0) as f64;
    let x = (h.bin_edges[0], *h.bin_edges.last().unwrap());
    let mut f = Frame::new(x, (0.0, max * 1.05), title, "normalized counts", "shots");
    for (e, &c) in h.bin_edges.windows(2).zip(&h.counts) {
        if c > 0 {
            f.rect(e[0], e[1], c as f64);
        }
    }
    f.finish()
}

/// Sweep points in kHz with the model curve `(δ, P↑)` overlaid.
pub fn sweep_svg(points: &[SweepPoint], model: &[(f64, f64)], title: &str) -> String {
    let x = bounds(points.iter().map(|p| units::to_khz(p.detuning_delta)));
    let (lo, hi) = bounds(
        points
            .iter()
            .flat_map(|p| [p.p_up_mean - p.p_up_err, p.p_up_mean + p.p_up_err])
            .chain(model.iter().map(|m| m.1)),
    );
    let mut f = Frame::new(x, (lo.min(0.0), hi * 1.05), title, "detuning (kHz)", "P(up)");
    f.line(&model.iter().map(|&(d, p)| (units::to_khz(d), p)).collect::<Vec<_>>());
    for p in points {
        f.point(units::to_khz(p.detuning_delta), p.p_up_mean, p.p_up_err);
    }
    f.finish()
}

pub fn heating_svg(points: &[HeatingPoint], fit: &HeatingFit, title: &str) -> String {
    let ms = |t: f64| t * 1e3;
    let (t0, t1) = bounds(points.iter().map(|p| p.delay));
    let (lo, hi) = bounds(points.iter().flat_map(|p| [p.nbar - p.nbar_err, p.nbar + p.nbar_err]));
    let mut f = Frame::new((ms(t0.min(0.0)), ms(t1)), (lo.min(0.0), hi * 1.05), title, "delay (ms)", "mean occupation");
    let line = |t: f64| (ms(t), fit.intercept + fit.rate.value * t);
    f.line(&[line(t0.min(0.0)), line(t1)]);
    for p in points {
        f.point(ms(p.delay), p.nbar, p.nbar_err);
    }
    f.finish()
}
