//! CSV writers: header row, `.` decimals, `\n` line endings.
//!
//! Floats are printed with Rust's shortest round-trip formatting, so a file
//! is a byte-exact function of the values it holds.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use oddvar_core::variation::{
    endpoint_variation, midpoint_variation, trapezoidal_variation, unweighted_variation, Side,
};
use oddvar_core::walk::FbmbtSample;
use oddvar_core::{FbmPath, WeightFunction};

use crate::error::{EngineError, Result};

/// `t,value` for every grid point of the path.
pub fn path_csv(path: &FbmPath) -> String {
    let g = path.grid();
    let mut out = String::from("t,value\n");
    for (i, v) in (g.first()..=g.last()).zip(path.values()) {
        let _ = writeln!(out, "{},{}", g.time(i), v);
    }
    out
}

/// `t,phi,psi,left,right,unweighted` at the forward grid points.
/// The series need `r ≥ 1`; the endpoint columns use their own normalization.
pub fn series_csv<W: WeightFunction + ?Sized>(path: &FbmPath, f: &W, r: u32) -> Result<String> {
    let phi = midpoint_variation(path, f, r)?;
    let psi = trapezoidal_variation(path, f, r)?;
    let left = endpoint_variation(path, f, r, Side::Left)?;
    let right = endpoint_variation(path, f, r, Side::Right)?;
    let plain = unweighted_variation(path, r)?;
    let mut out = String::from("t,phi,psi,left,right,unweighted\n");
    for k in 0..phi.len() {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            phi.time(k),
            phi.values()[k],
            psi.values()[k],
            left.values()[k],
            right.values()[k],
            plain.values()[k]
        );
    }
    Ok(out)
}

/// `k,S_k,Z_k` along the walk.
pub fn walk_csv(sample: &FbmbtSample) -> String {
    let mut out = String::from("k,S_k,Z_k\n");
    for (k, s) in sample.walk().positions().iter().enumerate() {
        let _ = writeln!(out, "{k},{s},{}", sample.z(k));
    }
    out
}

/// Writes `contents` to `dir/name`, creating `dir` if needed.
pub fn write_into(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| EngineError::io(dir, e))?;
    let file = dir.join(name);
    fs::write(&file, contents).map_err(|e| EngineError::io(&file, e))?;
    Ok(file)
}

#[cfg(test)]
mod tests {
    use super::*;
    use oddvar_core::{BuiltinWeight, GridSpec, HurstParam};

    fn path() -> FbmPath {
        let g = GridSpec::dyadic(1, -0.5, 1.0).unwrap();
        FbmPath::new(g, HurstParam::new(0.3).unwrap(), vec![0.25, 0.0, 1.0, 0.5], 0).unwrap()
    }

    #[test]
    fn path_rows() {
        assert_eq!(path_csv(&path()), "t,value\n-0.5,0.25\n0,0\n0.5,1\n1,0.5\n");
    }

    #[test]
    fn series_shape() {
        let csv = series_csv(&path(), &BuiltinWeight::Constant(1.0), 2).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.split(',').count() == 6));
        assert!(lines[1].starts_with("0,0,0,"));
        assert!(!csv.contains('\r'));
    }
}
