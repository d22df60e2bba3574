//! Parameter sweeps rendered as CSV.

use rayon::prelude::*;

use crate::config::AnalysisConfig;
use crate::format::cell;
use crate::{analyze, Analysis, CliError};

const REPORT_COLUMNS: [&str; 11] = [
    "lambda",
    "freq_shift_rel",
    "width_rel",
    "width_branch_lambda",
    "width_branch_inverse",
    "width_literal_branch",
    "mu",
    "shift_ok",
    "width_ok",
    "mu_ok",
    "valid",
];

/// Grid points in row order: the first axis varies slowest.
pub fn grid(cfg: &AnalysisConfig) -> Vec<Vec<f64>> {
    let mut points: Vec<Vec<f64>> = vec![vec![]];
    for axis in &cfg.sweep {
        let values = axis.values();
        points = points
            .into_iter()
            .flat_map(|p| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    points
}

fn row(point: &[f64], a: &Analysis) -> Vec<String> {
    let r = &a.report;
    let mut out: Vec<String> = point.iter().map(|&x| cell(x)).collect();
    out.extend([
        cell(r.lambda),
        cell(r.freq_shift_rel),
        cell(r.width_rel),
        cell(r.width_branch_lambda),
        cell(r.width_branch_inverse),
        r.width_literal_branch.label().to_string(),
        cell(r.mu),
        r.verdict.shift_ok.to_string(),
        r.verdict.width_ok.to_string(),
        r.verdict.mu_ok.to_string(),
        r.verdict.all().to_string(),
    ]);
    out
}

/// Evaluates every grid point on a pool of `threads` workers and writes the
/// CSV in grid order.
pub fn cmd_sweep(cfg: &AnalysisConfig, threads: usize) -> Result<String, CliError> {
    if threads == 0 {
        return Err(CliError::config("threads", "must be >= 1"));
    }
    let points = grid(cfg);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build()?;
    let rows: Vec<Result<Vec<String>, CliError>> = pool.install(|| {
        points
            .par_iter()
            .map(|point| {
                let mut c = cfg.clone();
                for (axis, &v) in cfg.sweep.iter().zip(point) {
                    c = c.with_parameter(&axis.parameter, v);
                }
                analyze(&c).map(|a| row(point, &a))
            })
            .collect()
    });

    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::CRLF).from_writer(vec![]);
    let header: Vec<&str> = cfg.sweep.iter().map(|a| a.parameter.as_str()).chain(REPORT_COLUMNS).collect();
    w.write_record(&header)?;
    for r in rows {
        w.write_record(&r?)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{ConfigLayer, SweepAxis};

    fn config(axes: &[&str]) -> AnalysisConfig {
        let flags = ConfigLayer {
            sweep: axes.iter().map(|a| SweepAxis::parse(a).unwrap()).collect(),
            ..Default::default()
        };
        AnalysisConfig::resolve(&flags, &ConfigLayer::default()).unwrap()
    }

    #[test]
    fn two_axis_grid_order() {
        let g = grid(&config(&["intensity:1:2:2", "duration:10:30:3"]));
        assert_eq!(g.len(), 6);
        assert_eq!(g[0], vec![1.0, 10.0]);
        assert_eq!(g[1], vec![1.0, 20.0]);
        assert_eq!(g[3], vec![2.0, 10.0]);
    }

    #[test]
    fn header_and_row_count() {
        let csv = cmd_sweep(&config(&["duration:3:30:10:log"]), 4).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 11);
        assert!(lines[0].starts_with("duration,lambda,freq_shift_rel,width_rel"));
        assert!(csv.contains("\r\n"));
    }

    #[test]
    fn thread_count_does_not_change_output() {
        let c = config(&["intensity:1e16:1e22:7:log", "spot:1e-9:1e-7:5:log"]);
        let a = cmd_sweep(&c, 1).unwrap();
        let b = cmd_sweep(&c, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn bad_point_is_an_error() {
        assert!(cmd_sweep(&config(&["v_z:0.5:1.5:3"]), 2).is_err());
    }
}
