//! SVG figures rendered from result tables alone, so they can be
//! regenerated offline from the CSV files.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use plotters::coord::Shift;
use plotters::prelude::*;

use crate::error::{LabError, Result};
use crate::output::Table;

const SIZE: (u32, u32) = (800, 600);
const COLORS: [RGBColor; 6] = [
    RGBColor(0, 114, 178),
    RGBColor(213, 94, 0),
    RGBColor(0, 158, 115),
    RGBColor(204, 121, 167),
    RGBColor(230, 159, 0),
    RGBColor(86, 180, 233),
];

fn plot_err<E: std::fmt::Display>(e: E) -> LabError {
    LabError::Plot(e.to_string())
}

fn color(i: usize) -> RGBColor {
    COLORS[i % COLORS.len()]
}

/// Human-readable angle: multiples of π/4 are written symbolically.
pub fn angle_label(theta: f64) -> String {
    let quarters = theta / (PI / 4.0);
    if (quarters - quarters.round()).abs() < 1e-9 {
        match quarters.round() as i64 {
            1 => return "π/4".into(),
            2 => return "π/2".into(),
            3 => return "3π/4".into(),
            4 => return "π".into(),
            6 => return "3π/2".into(),
            8 => return "2π".into(),
            _ => {}
        }
    }
    format!("{theta:.4}")
}

/// Rows grouped by the value of `key`, in order of first appearance.
fn group_by(table: &Table, key: &str, rows: &[usize]) -> Result<Vec<(f64, Vec<usize>)>> {
    let k = table.values(key)?;
    let mut order: Vec<f64> = Vec::new();
    let mut groups: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    for &r in rows {
        let bits = k[r].to_bits();
        if !groups.contains_key(&bits) {
            order.push(k[r]);
        }
        groups.entry(bits).or_default().push(r);
    }
    Ok(order
        .into_iter()
        .map(|v| (v, groups.remove(&v.to_bits()).unwrap_or_default()))
        .collect())
}

struct Series {
    label: String,
    color: RGBColor,
    line: Vec<(f64, f64)>,
    marks: Vec<(f64, f64)>,
    dashed: bool,
}

fn extent(series: &[Series], positive: bool) -> ((f64, f64), (f64, f64)) {
    let pts = series
        .iter()
        .flat_map(|s| s.line.iter().chain(&s.marks))
        .filter(|p| !positive || p.1 > 0.0);
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        return ((0.0, 1.0), (if positive { 1e-3 } else { 0.0 }, 1.0));
    }
    if x1 <= x0 {
        x1 = x0 + 1.0;
    }
    if y1 <= y0 {
        y1 = y0 + 1.0;
    }
    ((x0, x1), (y0, y1))
}

/// Decades shown on a log axis; smaller values are left to the CSV.
const LOG_DECADES: f64 = 30.0;

fn draw(
    area: &DrawingArea<SVGBackend, Shift>,
    title: &str,
    x_desc: &str,
    y_desc: &str,
    series: &[Series],
    log_y: bool,
) -> Result<()> {
    area.fill(&WHITE).map_err(plot_err)?;
    let ((x0, x1), (y0, y1)) = extent(series, log_y);
    let mut builder = ChartBuilder::on(area);
    builder
        .caption(title, ("sans-serif", 20))
        .margin(15)
        .x_label_area_size(45)
        .y_label_area_size(70);
    macro_rules! finish {
        ($chart:expr, $keep:expr) => {{
            let mut chart = $chart;
            chart
                .configure_mesh()
                .x_desc(x_desc)
                .y_desc(y_desc)
                .draw()
                .map_err(plot_err)?;
            for s in series {
                let c = s.color;
                let pts: Vec<(f64, f64)> = s.line.iter().copied().filter($keep).collect();
                if !pts.is_empty() {
                    let style = if s.dashed {
                        c.mix(0.5).stroke_width(1)
                    } else {
                        c.stroke_width(2)
                    };
                    chart
                        .draw_series(LineSeries::new(pts, style))
                        .map_err(plot_err)?
                        .label(s.label.clone())
                        .legend(move |(x, y)| {
                            PathElement::new(vec![(x, y), (x + 20, y)], c.stroke_width(2))
                        });
                }
                let marks: Vec<(f64, f64)> = s.marks.iter().copied().filter($keep).collect();
                if !marks.is_empty() {
                    chart
                        .draw_series(marks.into_iter().map(|p| Circle::new(p, 3, c.filled())))
                        .map_err(plot_err)?;
                }
            }
            chart
                .configure_series_labels()
                .background_style(WHITE.mix(0.8))
                .border_style(BLACK)
                .draw()
                .map_err(plot_err)?;
        }};
    }
    if log_y {
        let top = y1.log10().ceil();
        let hi = 10f64.powf(top);
        let lo = 10f64.powf(y0.log10().floor().max(top - LOG_DECADES));
        let chart = builder
            .build_cartesian_2d(x0..x1, (lo..hi).log_scale())
            .map_err(plot_err)?;
        finish!(chart, |p: &(f64, f64)| p.1 >= lo);
    } else {
        let pad = 0.05 * (y1 - y0);
        let chart = builder
            .build_cartesian_2d(x0..x1, (y0 - pad).min(0.0)..y1 + pad)
            .map_err(plot_err)?;
        finish!(chart, |_: &(f64, f64)| true);
    }
    area.present().map_err(plot_err)
}

fn render(
    title: &str,
    x_desc: &str,
    y_desc: &str,
    series: &[Series],
    log_y: bool,
) -> Result<String> {
    let mut svg = String::new();
    {
        let area = SVGBackend::with_string(&mut svg, SIZE).into_drawing_area();
        draw(&area, title, x_desc, y_desc, series, log_y)?;
    }
    Ok(svg)
}

fn xy(x: &[f64], y: &[f64], rows: &[usize]) -> Vec<(f64, f64)> {
    rows.iter().map(|&r| (x[r], y[r])).collect()
}

fn all_rows(t: &Table) -> Vec<usize> {
    (0..t.rows.len()).collect()
}

/// Connection probability against distance on a logarithmic axis.
pub fn connection_svg(t: &Table) -> Result<String> {
    let (d, h, mc, bench) = (
        t.values("d_ij")?,
        t.values("analytic_H")?,
        t.values("mc_mean")?,
        t.values("benchmark_H_infinite")?,
    );
    let mut series = Vec::new();
    for (i, (theta, rows)) in group_by(t, "theta", &all_rows(t))?.into_iter().enumerate() {
        let label = angle_label(theta);
        series.push(Series {
            label: format!("θ = {label}"),
            color: color(i),
            line: xy(&d, &h, &rows),
            marks: xy(&d, &mc, &rows),
            dashed: false,
        });
        series.push(Series {
            label: format!("θ = {label}, unbounded"),
            color: color(i),
            line: xy(&d, &bench, &rows),
            marks: Vec::new(),
            dashed: true,
        });
    }
    render("Connection probability", "d_ij", "H_ij", &series, true)
}

/// Mean rate and rate variance against distance.
pub fn rate_svgs(t: &Table) -> Result<(String, String)> {
    let d = t.values("d_ij")?;
    let groups = group_by(t, "theta", &all_rows(t))?;
    let panel = |analytic: &str, mc: &str, title: &str, y: &str| -> Result<String> {
        let (a, m) = (t.values(analytic)?, t.values(mc)?);
        let series: Vec<Series> = groups
            .iter()
            .enumerate()
            .map(|(i, (theta, rows))| Series {
                label: format!("θ = {}", angle_label(*theta)),
                color: color(i),
                line: xy(&d, &a, rows),
                marks: xy(&d, &m, rows),
                dashed: false,
            })
            .collect();
        render(title, "d_ij", y, &series, false)
    };
    Ok((
        panel(
            "analytic_rate",
            "mc_rate",
            "Ergodic rate",
            "rate (nats/s/Hz)",
        )?,
        panel(
            "analytic_variance",
            "mc_variance",
            "Rate variance",
            "variance",
        )?,
    ))
}

/// One panel per `ε`: density against intensity, with the unbounded closed
/// form where the table provides it.
pub fn density_svgs(t: &Table) -> Result<Vec<(f64, String)>> {
    let (rho, mu, mc) = (
        t.values("rho_t")?,
        t.values("analytic_mu")?,
        t.values("mc_mean")?,
    );
    let closed = t.column("closed_form_mu")?;
    let mut out = Vec::new();
    for (eps, rows) in group_by(t, "epsilon", &all_rows(t))? {
        let mut series = Vec::new();
        for (i, (theta, rows)) in group_by(t, "theta", &rows)?.into_iter().enumerate() {
            let label = angle_label(theta);
            series.push(Series {
                label: format!("θ = {label}"),
                color: color(i),
                line: xy(&rho, &mu, &rows),
                marks: xy(&rho, &mc, &rows),
                dashed: false,
            });
            let cf: Vec<(f64, f64)> = rows
                .iter()
                .filter_map(|&r| closed[r].map(|c| (rho[r], c)))
                .collect();
            if !cf.is_empty() {
                series.push(Series {
                    label: format!("θ = {label}, unbounded"),
                    color: color(i),
                    line: cf,
                    marks: Vec::new(),
                    dashed: true,
                });
            }
        }
        let svg = render(
            &format!("Successful transmissions, ε = {eps}"),
            "ρ_T",
            "μ_j",
            &series,
            false,
        )?;
        out.push((eps, svg));
    }
    Ok(out)
}

fn viridis(v: f64) -> RGBColor {
    const STOPS: [(f64, f64, f64); 5] = [
        (68.0, 1.0, 84.0),
        (59.0, 82.0, 139.0),
        (33.0, 145.0, 140.0),
        (94.0, 201.0, 98.0),
        (253.0, 231.0, 37.0),
    ];
    let x = v.clamp(0.0, 1.0) * (STOPS.len() - 1) as f64;
    let i = (x.floor() as usize).min(STOPS.len() - 2);
    let f = x - i as f64;
    let (a, b) = (STOPS[i], STOPS[i + 1]);
    let lerp = |p: f64, q: f64| (p + (q - p) * f).round() as u8;
    RGBColor(lerp(a.0, b.0), lerp(a.1, b.1), lerp(a.2, b.2))
}

/// Cell-centred outage map, coloured from the smallest to the largest cell.
pub fn heatmap_svg(t: &Table) -> Result<String> {
    let (x, y, v) = (t.values("x")?, t.values("y")?, t.values("outage_mean")?);
    if x.is_empty() {
        return Err(LabError::Plot("empty heatmap table".into()));
    }
    let mut xs = x.clone();
    let mut ys = y.clone();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    ys.sort_by(f64::total_cmp);
    ys.dedup();
    let half = |c: &[f64]| {
        if c.len() > 1 {
            0.5 * (c[1] - c[0])
        } else {
            0.5
        }
    };
    let (hx, hy) = (half(&xs), half(&ys));
    let (lo, hi) = v
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &q| {
            (a.min(q), b.max(q))
        });
    let span = if hi > lo { hi - lo } else { 1.0 };
    let mut svg = String::new();
    {
        let root = SVGBackend::with_string(&mut svg, (760, 700)).into_drawing_area();
        root.fill(&WHITE).map_err(plot_err)?;
        let (x0, x1) = (xs[0] - hx, xs[xs.len() - 1] + hx);
        let (y0, y1) = (ys[0] - hy, ys[ys.len() - 1] + hy);
        let mut chart = ChartBuilder::on(&root)
            .caption(
                format!("Outage probability ({lo:.3} to {hi:.3})"),
                ("sans-serif", 20),
            )
            .margin(15)
            .x_label_area_size(40)
            .y_label_area_size(50)
            .build_cartesian_2d(x0..x1, y0..y1)
            .map_err(plot_err)?;
        chart
            .configure_mesh()
            .disable_mesh()
            .x_desc("x")
            .y_desc("y")
            .draw()
            .map_err(plot_err)?;
        chart
            .draw_series((0..x.len()).map(|i| {
                Rectangle::new(
                    [(x[i] - hx, y[i] - hy), (x[i] + hx, y[i] + hy)],
                    viridis((v[i] - lo) / span).filled(),
                )
            }))
            .map_err(plot_err)?;
        root.present().map_err(plot_err)?;
    }
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        assert_eq!(angle_label(PI / 2.0), "π/2");
        assert_eq!(angle_label(2.0 * PI), "2π");
        assert_eq!(angle_label(1.0), "1.0000");
    }

    #[test]
    fn renders_connection_with_zero_estimates() {
        let mut t = Table::new(&[
            "theta",
            "d_ij",
            "analytic_H",
            "mc_mean",
            "mc_stderr",
            "benchmark_H_infinite",
        ]);
        t.push_values(&[PI, 0.1, 0.5, 0.49, 0.01, 0.1]);
        t.push_values(&[PI, 1.0, 1e-6, 0.0, 0.0, 1e-9]);
        let svg = connection_svg(&t).unwrap();
        assert!(svg.starts_with("<svg"));
        assert!(svg.contains("θ = π"));
    }

    #[test]
    fn heatmap_colours_span_range() {
        assert_eq!(viridis(0.0), RGBColor(68, 1, 84));
        assert_eq!(viridis(1.0), RGBColor(253, 231, 37));
        let mut t = Table::new(&["x", "y", "outage_mean", "outage_stderr"]);
        for (x, y) in [(0.5, 0.5), (1.5, 0.5), (0.5, 1.5), (1.5, 1.5)] {
            t.push_values(&[x, y, x * y, 0.0]);
        }
        assert!(heatmap_svg(&t).unwrap().contains("<rect"));
    }
}
