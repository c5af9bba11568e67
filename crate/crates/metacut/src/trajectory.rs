//! CSV export of integrated trajectories.

use std::io::Write;

use metacut_core::dynamics::Trajectory;

/// Header `t,x_0..x_{n-1},y_0..y_{n-1}`, then one row per recorded state.
/// Values use the shortest decimal form that round-trips.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = traj.n;
    let header = std::iter::once("t".to_string())
        .chain((0..n).map(|i| format!("x_{i}")))
        .chain((0..n).map(|i| format!("y_{i}")));
    w.write_record(header)?;
    for (t, state) in traj.times.iter().zip(&traj.states) {
        w.write_record(std::iter::once(t).chain(state).map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use metacut_core::dynamics::{integrate_around, IntegrateOptions, PatchModel};
    use metacut_core::{Jacobian2, WeightedGraph};

    #[test]
    fn header_and_rows() {
        let g = WeightedGraph::from_edge_list(2, &[(0, 1, 1.0)]).unwrap();
        let models = [PatchModel::linear(Jacobian2::new(-1.0, 0.0, 0.0, -1.0)); 2];
        let opts = IntegrateOptions::new(0.1, 0.3);
        let t = integrate_around(&g, &models, &[1.0, 0.0, 0.5, 0.0], &[0.0; 4], &opts).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x_0,x_1,y_0,y_1");
        assert_eq!(lines[1], "0,1,0,0.5,0");
        assert_eq!(lines.len(), 1 + t.states.len());
        let row: Vec<f64> = lines[2].split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(row[1..], t.states[1][..]);
    }
}
