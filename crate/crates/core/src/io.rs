//! Plain-text exports. Numbers are written with 17 significant digits so
//! values round-trip exactly.

use std::io::{self, Write};

use crate::dynamics::Trajectory;
use crate::full::CartesianTrajectory;
use crate::lmg::SpectrumResult;
use crate::stokes::StokesState;

/// Round-trip formatting of a double.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn row<W: Write>(w: &mut W, cells: &[f64]) -> io::Result<()> {
    let line: Vec<String> = cells.iter().map(|&x| fmt_f64(x)).collect();
    writeln!(w, "{}", line.join(","))
}

/// Columns t, s1, s2, s3, s0, H.
pub fn write_trajectory_csv<W: Write>(w: &mut W, tr: &Trajectory) -> io::Result<()> {
    writeln!(w, "t,s1,s2,s3,s0,H")?;
    for i in 0..tr.len() {
        let s = tr.states[i];
        row(w, &[tr.times[i], s.s1, s.s2, s.s3, tr.s0_values[i], tr.h_values[i]])?;
    }
    Ok(())
}

/// Columns t, x, y, xdot, ydot.
pub fn write_cartesian_csv<W: Write>(w: &mut W, tr: &CartesianTrajectory) -> io::Result<()> {
    writeln!(w, "t,x,y,xdot,ydot")?;
    for (t, p) in tr.times.iter().zip(&tr.samples) {
        row(w, &[*t, p.x, p.y, p.vx, p.vy])?;
    }
    Ok(())
}

/// Columns delta_omega, index, eigenvalue for each sweep point.
pub fn write_spectrum_csv<W: Write>(w: &mut W, results: &[SpectrumResult]) -> io::Result<()> {
    writeln!(w, "delta_omega,index,eigenvalue")?;
    for r in results {
        for (i, e) in r.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{},{}", fmt_f64(r.config.delta_omega), i, fmt_f64(*e))?;
        }
    }
    Ok(())
}

/// Columns bin_center, quantum_density, classical_density.
pub fn write_dos_csv<W: Write>(w: &mut W, r: &SpectrumResult) -> io::Result<()> {
    writeln!(w, "bin_center,quantum_density,classical_density")?;
    let q = r.quantum_density();
    for i in 0..r.bins.n {
        row(w, &[r.bins.center(i), q[i], r.classical_dos[i]])?;
    }
    Ok(())
}

/// Columns member, s1, s2, s3.
pub fn write_ensemble_csv<W: Write>(w: &mut W, members: &[StokesState]) -> io::Result<()> {
    writeln!(w, "member,s1,s2,s3")?;
    for (i, m) in members.iter().enumerate() {
        writeln!(w, "{},{},{},{}", i, fmt_f64(m.s1), fmt_f64(m.s2), fmt_f64(m.s3))?;
    }
    Ok(())
}
