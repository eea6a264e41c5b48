//! Figure data emission: the x, V(x) tables behind each plot, CSV only.
//! Piecewise-constant wells are written as segment lists; wall segments
//! leave the value column blank.

use anyhow::bail;
use ssb_core::lattice::build_grid;
use ssb_core::models;
use std::path::{Path, PathBuf};

use crate::report::{fmt_f64, write_csv};

fn sampled_rows(
    model: &models::PotentialModel,
    xmin: f64,
    xmax: f64,
    n: usize,
) -> anyhow::Result<Vec<Vec<String>>> {
    let grid = build_grid(xmin, xmax, n)?;
    Ok((0..grid.n())
        .map(|i| {
            let x = grid.x(i);
            vec![fmt_f64(x), fmt_f64(model.evaluate(x))]
        })
        .collect())
}

/// Emit the data table for one figure; returns the file written.
pub fn emit_figure_data(figure: u8, out: &Path) -> anyhow::Result<PathBuf> {
    match figure {
        1 => {
            let model = models::quartic_sombrero(1.0, 1.0)?;
            let rows = sampled_rows(&model, -1.2, 1.2, 481)?;
            write_csv(out, "figure1.csv", &["x", "v"], &rows)
        }
        2 => {
            let model = models::sextic_factorized(1.0, 1.0, 1.0)?;
            let grid = build_grid(-1.6, 1.6, 481)?;
            let rows: Vec<Vec<String>> = (0..grid.n())
                .map(|i| {
                    let x = grid.x(i);
                    let x2 = x * x;
                    vec![
                        fmt_f64(x),
                        fmt_f64(model.evaluate(x)),
                        fmt_f64((-(x2 * x2)).exp()),
                    ]
                })
                .collect();
            write_csv(out, "figure2.csv", &["x", "v", "f"], &rows)
        }
        3 => {
            let model = models::double_oscillator(1.0, 1.0, 2.0)?;
            let rows = sampled_rows(&model, -5.0, 5.0, 481)?;
            write_csv(out, "figure3.csv", &["x", "v"], &rows)
        }
        4 => {
            let (alpha, a, b) = (50.0, 2.0, 0.5);
            let margin = 0.25 * a;
            let rows = vec![
                vec![
                    "wall".into(),
                    fmt_f64(-a - margin),
                    fmt_f64(-a),
                    String::new(),
                ],
                vec!["well".into(), fmt_f64(-a), fmt_f64(-b), fmt_f64(0.0)],
                vec!["barrier".into(), fmt_f64(-b), fmt_f64(b), fmt_f64(alpha)],
                vec!["well".into(), fmt_f64(b), fmt_f64(a), fmt_f64(0.0)],
                vec![
                    "wall".into(),
                    fmt_f64(a),
                    fmt_f64(a + margin),
                    String::new(),
                ],
            ];
            write_csv(out, "figure4.csv", &["segment", "x_lo", "x_hi", "v"], &rows)
        }
        5 => {
            let (a, b) = (2.0, 0.5);
            let margin = 0.25 * a;
            let rows = vec![
                vec![
                    "wall".into(),
                    fmt_f64(-a - margin),
                    fmt_f64(-a),
                    String::new(),
                ],
                vec!["well".into(), fmt_f64(-a), fmt_f64(-b), fmt_f64(0.0)],
                vec!["wall".into(), fmt_f64(-b), fmt_f64(b), String::new()],
                vec!["well".into(), fmt_f64(b), fmt_f64(a), fmt_f64(0.0)],
                vec![
                    "wall".into(),
                    fmt_f64(a),
                    fmt_f64(a + margin),
                    String::new(),
                ],
            ];
            write_csv(out, "figure5.csv", &["segment", "x_lo", "x_hi", "v"], &rows)
        }
        other => bail!("unknown figure {other}; valid figures are 1..=5"),
    }
}
