//! Report emission: the results CSV plus one line chart per evaluated
//! quantity, averaging each solver's rows over seeds.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use plotters::prelude::*;

use crate::error::Error;
use crate::sweep::{SolverKind, SweepMode, SweepResultTable, SweepRow};

/// Writes `results.csv` and, when `render_plots` is set, the figure set for
/// the table's sweep mode. Returns the paths written.
pub fn emit_report(
    table: &SweepResultTable,
    out_dir: &Path,
    render_plots: bool,
) -> Result<Vec<PathBuf>, Error> {
    if table.rows.is_empty() {
        return Err(Error::InvalidConfig("empty result table".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut written = Vec::new();

    let csv_path = out_dir.join("results.csv");
    crate::sweep::write_results_csv_file(&table.rows, &csv_path)?;
    written.push(csv_path);

    if !render_plots {
        return Ok(written);
    }

    let figures: &[(&str, &str, fn(&SweepRow) -> f64, bool)] = match table.mode {
        SweepMode::BySites => &[
            ("cost_vs_sites.svg", "mean total cost", |r| r.total_cost, false),
            (
                "bbus_vs_sites.svg",
                "mean BBUs placed",
                |r| r.bbus_placed as f64,
                false,
            ),
            (
                "utilization_vs_sites.svg",
                "mean utilization",
                |r| r.utilization,
                false,
            ),
            (
                "time_vs_sites.svg",
                "mean wall time [s]",
                |r| r.wall_time_s,
                true,
            ),
        ],
        SweepMode::ByBudget => &[
            ("cost_vs_budget.svg", "mean total cost", |r| r.total_cost, false),
            (
                "latency_deviation_vs_budget.svg",
                "mean latency deviation [s]",
                |r| r.latency_deviation_s,
                false,
            ),
        ],
    };
    let x_label = match table.mode {
        SweepMode::BySites => "RRH sites",
        SweepMode::ByBudget => "budget",
    };

    for &(file, y_label, value, log_y) in figures {
        let path = out_dir.join(file);
        let series = mean_series(&table.rows, table.mode, value);
        render_line_chart(&path, x_label, y_label, &series, log_y)?;
        written.push(path);
    }
    Ok(written)
}

/// Per-solver series of (axis value, mean over seeds).
fn mean_series(
    rows: &[SweepRow],
    mode: SweepMode,
    value: fn(&SweepRow) -> f64,
) -> Vec<(SolverKind, Vec<(f64, f64)>)> {
    let mut grouped: BTreeMap<(SolverKind, usize), (f64, usize)> = BTreeMap::new();
    for row in rows {
        let axis = match mode {
            SweepMode::BySites => row.site_count,
            SweepMode::ByBudget => row.budget,
        };
        let entry = grouped.entry((row.solver, axis)).or_insert((0.0, 0));
        entry.0 += value(row);
        entry.1 += 1;
    }
    let mut series: BTreeMap<SolverKind, Vec<(f64, f64)>> = BTreeMap::new();
    for ((solver, axis), (sum, count)) in grouped {
        series
            .entry(solver)
            .or_default()
            .push((axis as f64, sum / count as f64));
    }
    series.into_iter().collect()
}

fn render_line_chart(
    path: &Path,
    x_label: &str,
    y_label: &str,
    series: &[(SolverKind, Vec<(f64, f64)>)],
    log_y: bool,
) -> Result<(), Error> {
    let plot = |msg: String| Error::Plot(msg);

    let mut x_min = f64::INFINITY;
    let mut x_max = f64::NEG_INFINITY;
    let mut y_min = f64::INFINITY;
    let mut y_max = f64::NEG_INFINITY;
    for (_, points) in series {
        for &(x, y) in points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            let y = if log_y { y.max(1e-9) } else { y };
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    if x_min > x_max {
        return Err(plot("no data points".into()));
    }
    if x_min == x_max {
        x_min -= 1.0;
        x_max += 1.0;
    }
    if y_min == y_max {
        y_min -= 1.0;
        y_max += 1.0;
    }
    let pad = (y_max - y_min) * 0.05;

    let root = SVGBackend::new(path, (800, 540)).into_drawing_area();
    root.fill(&WHITE).map_err(|e| plot(e.to_string()))?;

    let colors = [RED, BLUE];
    if log_y {
        let mut chart = ChartBuilder::on(&root)
            .margin(12)
            .x_label_area_size(44)
            .y_label_area_size(74)
            .build_cartesian_2d(x_min..x_max, (y_min..y_max * 1.2).log_scale())
            .map_err(|e| plot(e.to_string()))?;
        chart
            .configure_mesh()
            .x_desc(x_label)
            .y_desc(y_label)
            .y_label_formatter(&|v| format!("{v:.1e}"))
            .draw()
            .map_err(|e| plot(e.to_string()))?;
        for (idx, (solver, points)) in series.iter().enumerate() {
            let color = colors[idx % colors.len()];
            let floored: Vec<(f64, f64)> =
                points.iter().map(|&(x, y)| (x, y.max(1e-9))).collect();
            chart
                .draw_series(LineSeries::new(floored, color.stroke_width(2)))
                .map_err(|e| plot(e.to_string()))?
                .label(solver.to_string())
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()
            .map_err(|e| plot(e.to_string()))?;
    } else {
        let mut chart = ChartBuilder::on(&root)
            .margin(12)
            .x_label_area_size(44)
            .y_label_area_size(74)
            .build_cartesian_2d(x_min..x_max, (y_min - pad)..(y_max + pad))
            .map_err(|e| plot(e.to_string()))?;
        chart
            .configure_mesh()
            .x_desc(x_label)
            .y_desc(y_label)
            .y_label_formatter(&|v| {
                if v.abs() < 1e-3 && *v != 0.0 {
                    format!("{v:.1e}")
                } else {
                    format!("{v:.2}")
                }
            })
            .draw()
            .map_err(|e| plot(e.to_string()))?;
        for (idx, (solver, points)) in series.iter().enumerate() {
            let color = colors[idx % colors.len()];
            chart
                .draw_series(LineSeries::new(points.clone(), color.stroke_width(2)))
                .map_err(|e| plot(e.to_string()))?
                .label(solver.to_string())
                .legend(move |(x, y)| {
                    PathElement::new(vec![(x, y), (x + 18, y)], color.stroke_width(2))
                });
        }
        chart
            .configure_series_labels()
            .border_style(BLACK)
            .background_style(WHITE.mix(0.85))
            .draw()
            .map_err(|e| plot(e.to_string()))?;
    }
    root.present().map_err(|e| plot(e.to_string()))?;
    Ok(())
}
