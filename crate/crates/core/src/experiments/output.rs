use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::dynamics::Trajectory;
use crate::error::{Result, SimError};

/// Renders a trajectory as CSV: `t` first, then one column per observable.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::from("t");
    for (name, _) in &traj.observables {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (k, t) in traj.times.iter().enumerate() {
        let _ = write!(out, "{t}");
        for (_, series) in &traj.observables {
            let _ = write!(out, ",{}", series[k]);
        }
        out.push('\n');
    }
    out
}

pub fn write_csv(path: &Path, traj: &Trajectory) -> Result<()> {
    fs::write(path, trajectory_csv(traj))?;
    Ok(())
}

/// Parses a file written by [`write_csv`] back into a trajectory.
pub fn read_csv(path: &Path) -> Result<Trajectory> {
    let text = fs::read_to_string(path)?;
    parse_csv(&text).map_err(|reason| SimError::MalformedOutput { path: path.display().to_string(), reason })
}

fn parse_csv(text: &str) -> std::result::Result<Trajectory, String> {
    let mut lines = text.lines();
    let header = lines.next().ok_or("empty file")?;
    let cols: Vec<&str> = header.split(',').collect();
    if cols.first() != Some(&"t") {
        return Err("first column must be `t`".into());
    }
    let mut times = Vec::new();
    let mut series: Vec<Vec<f64>> = vec![Vec::new(); cols.len() - 1];
    for (n, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != cols.len() {
            return Err(format!("row {} has {} fields, expected {}", n + 2, fields.len(), cols.len()));
        }
        let parse = |s: &str| -> std::result::Result<f64, String> {
            s.parse::<f64>().map_err(|_| format!("row {}: `{s}` is not a number", n + 2))
        };
        times.push(parse(fields[0])?);
        for (k, f) in fields[1..].iter().enumerate() {
            series[k].push(parse(f)?);
        }
    }
    let observables = cols[1..].iter().map(|c| c.to_string()).zip(series).collect();
    Trajectory::from_series(times, observables).map_err(|e| e.to_string())
}

pub fn ensure_dir(dir: &Path) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    Ok(dir.to_path_buf())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_and_schema() {
        let traj = Trajectory::from_series(
            vec![0.0, 0.5, 1.0],
            vec![("F".into(), vec![1.0, 0.25, 1.0 / 3.0]), ("P_00".into(), vec![0.0, 1e-17, 0.5])],
        )
        .unwrap();
        let text = trajectory_csv(&traj);
        assert!(text.starts_with("t,F,P_00\n"));
        let back = parse_csv(&text).unwrap();
        assert_eq!(back.times, traj.times);
        assert_eq!(back.observables, traj.observables);
    }

    #[test]
    fn malformed_csv_is_rejected() {
        assert!(parse_csv("").is_err());
        assert!(parse_csv("x,F\n0,1\n").is_err());
        assert!(parse_csv("t,F\n0,1,2\n").is_err());
        assert!(parse_csv("t,F\n0,abc\n").is_err());
    }
}
