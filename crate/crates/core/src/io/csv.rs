//! CSV writers. Numbers use 17 significant digits in scientific notation,
//! missing values are `NA`, lines end with `\n`.

use std::io::{self, Write};

use crate::configuration::AgentConfiguration;
use crate::graphs::{DirectedGraph, UndirectedGraph};
use crate::harness::{MonteCarloResult, SweepRow};
use crate::metrics::MetricsSeries;

pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "NA".to_string(), fmt_f64)
}

/// `time,agent,coord_0,...` with one row per agent and recorded time.
pub fn write_trajectory<W: Write>(mut w: W, times: &[f64], snapshots: &[AgentConfiguration]) -> io::Result<()> {
    let dim = snapshots.first().map_or(1, |s| s.dim());
    let coords: Vec<String> = (0..dim).map(|k| format!("coord_{k}")).collect();
    writeln!(w, "time,agent,{}", coords.join(","))?;
    for (t, snap) in times.iter().zip(snapshots) {
        for (i, p) in snap.points().enumerate() {
            let row: Vec<String> = p.iter().map(|&x| fmt_f64(x)).collect();
            writeln!(w, "{},{i},{}", fmt_f64(*t), row.join(","))?;
        }
    }
    Ok(())
}

pub fn write_metrics<W: Write>(mut w: W, m: &MetricsSeries) -> io::Result<()> {
    writeln!(
        w,
        "time,diameter,variance,clustering_number,clustering_number_self_inclusive,connected"
    )?;
    for k in 0..m.len() {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(m.times[k]),
            fmt_f64(m.diameter[k]),
            fmt_f64(m.variance[k]),
            fmt_f64(m.clustering_number[k]),
            fmt_f64(m.clustering_number_self_inclusive[k]),
            u8::from(m.connected[k])
        )?;
    }
    Ok(())
}

/// Column name for probability `p`, e.g. `q05` for 0.05 and `q100` for 1.
pub fn quantile_column(p: f64) -> String {
    let pct = p * 100.0;
    if (pct - pct.round()).abs() < 1e-9 {
        format!("q{:02}", pct.round() as u32)
    } else {
        format!("q{}", format!("{pct}").replace('.', "_"))
    }
}

pub fn write_quantiles<W: Write>(mut w: W, r: &MonteCarloResult) -> io::Result<()> {
    let cols: Vec<String> = r.quantiles.iter().map(|&p| quantile_column(p)).collect();
    writeln!(w, "time,{}", cols.join(","))?;
    for (t, row) in r.times.iter().zip(&r.table) {
        let vals: Vec<String> = row.iter().map(|&x| fmt_f64(x)).collect();
        writeln!(w, "{},{}", fmt_f64(*t), vals.join(","))?;
    }
    Ok(())
}

pub fn write_tau<W: Write>(mut w: W, r: &MonteCarloResult) -> io::Result<()> {
    writeln!(w, "realization,seed,tau")?;
    for s in &r.realizations {
        writeln!(w, "{},{},{}", s.index, s.seed, fmt_opt(s.tau))?;
    }
    Ok(())
}

pub fn write_sweep<W: Write>(mut w: W, rows: &[SweepRow], quantiles: &[f64]) -> io::Result<()> {
    let cols: Vec<String> = quantiles.iter().map(|&p| format!("tau_{}", quantile_column(p))).collect();
    writeln!(w, "rstar,realizations,finite,tau_mean,tau_median,{}", cols.join(","))?;
    for row in rows {
        let qs: Vec<String> = row.tau_quantiles.iter().map(|&q| fmt_opt(q)).collect();
        writeln!(
            w,
            "{},{},{},{},{},{}",
            fmt_f64(row.r_star),
            row.realizations,
            row.finite,
            fmt_opt(row.tau_mean),
            fmt_opt(row.tau_median),
            qs.join(",")
        )?;
    }
    Ok(())
}

/// Edge list `kind,from,to`; interaction edges are listed once with `from < to`.
pub fn write_edges<W: Write>(
    mut w: W,
    interaction: &UndirectedGraph,
    directed: &[(&str, &DirectedGraph)],
) -> io::Result<()> {
    writeln!(w, "kind,from,to")?;
    for (i, j) in interaction.edges() {
        writeln!(w, "interaction,{i},{j}")?;
    }
    for (kind, g) in directed {
        for (i, j) in g.edges() {
            writeln!(w, "{kind},{i},{j}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn text(f: impl FnOnce(&mut Vec<u8>) -> io::Result<()>) -> String {
        let mut buf = Vec::new();
        f(&mut buf).unwrap();
        String::from_utf8(buf).unwrap()
    }

    #[test]
    fn number_format_is_fixed() {
        assert_eq!(fmt_f64(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_f64(0.0), "0.0000000000000000e0");
        assert_eq!(fmt_f64(-2.5), "-2.5000000000000000e0");
        let x = 0.1f64 + 0.2;
        assert_eq!(fmt_f64(x).parse::<f64>().unwrap(), x);
    }

    #[test]
    fn quantile_columns() {
        let names: Vec<String> = [0.0, 0.05, 0.5, 0.95, 1.0].iter().map(|&p| quantile_column(p)).collect();
        assert_eq!(names, ["q00", "q05", "q50", "q95", "q100"]);
        assert_eq!(quantile_column(0.025), "q2_5");
    }

    #[test]
    fn trajectory_layout() {
        let snap = AgentConfiguration::from_points(&[[0.0, 1.0], [2.0, 3.0]]).unwrap();
        let out = text(|b| write_trajectory(b, &[0.5], &[snap]));
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "time,agent,coord_0,coord_1");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with("5.0000000000000000e-1,1,2.0"));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn metrics_layout() {
        let mut m = MetricsSeries::new();
        m.push(0.0, &AgentConfiguration::from_scalars(&[0.0, 0.5]).unwrap(), 10.0, 1e-9);
        let out = text(|b| write_metrics(b, &m));
        assert_eq!(out.lines().count(), 2);
        assert!(out.lines().nth(1).unwrap().ends_with(",1"));
    }

    #[test]
    fn edge_list() {
        let mut g = UndirectedGraph::new(3);
        g.add_edge(2, 0);
        let mut b = DirectedGraph::new(3);
        b.add_edge(2, 0);
        let out = text(|w| write_edges(w, &g, &[("behind", &b)]));
        assert_eq!(out, "kind,from,to\ninteraction,0,2\nbehind,2,0\n");
    }
}
