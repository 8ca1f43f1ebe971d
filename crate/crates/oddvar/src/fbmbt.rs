//! Sampling of fBm in Brownian time: the embedded walk first, then an
//! independent two-sided spatial path covering its range.

use oddvar_core::variation::horizon_steps;
use oddvar_core::walk::{EmbeddedWalk, FbmbtSample};
use oddvar_core::{GridSpec, HurstParam};
use rand::Rng;

use crate::error::{EngineError, Result};
use crate::fbm::{CirculantFbm, PathSampler};
use crate::seed::{Purpose, SeedSpec};

/// `⌊2ⁿt⌋` Rademacher steps of the walk `S_k = 2^{n/2} Y_{T_{k,n}}`.
pub fn sample_walk(n: u32, t: f64, seed: SeedSpec) -> Result<EmbeddedWalk> {
    if n == 0 || n > 40 {
        return Err(EngineError::Config("walk level must be in 1..=40".into()));
    }
    let k = horizon_steps(n, t)?;
    if k == 0 {
        return Err(EngineError::Config("horizon holds no walk step".into()));
    }
    let mut rng = seed.rng(Purpose::Walk);
    let mut steps = Vec::with_capacity(k);
    // 64 steps per draw
    while steps.len() < k {
        let bits: u64 = rng.random();
        let take = (k - steps.len()).min(64);
        steps.extend((0..take).map(|i| if bits >> i & 1 == 1 { 1i8 } else { -1 }));
    }
    Ok(EmbeddedWalk::from_steps(n, steps, seed.master_seed)?)
}

/// The walk together with `X` on `2^{−n/2}·[min S, max(max S, 1)]`.
pub fn sample_fbmbt(h: HurstParam, n: u32, t: f64, seed: SeedSpec) -> Result<FbmbtSample> {
    let walk = sample_walk(n, t, seed)?;
    let (lo, hi) = walk.range();
    let grid = GridSpec::half_dyadic(n, lo, hi.max(1))?;
    let path = CirculantFbm::new(h, grid)?.sample_lane(seed, Purpose::SpatialPath);
    Ok(FbmbtSample::new(walk, path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn walk_shape() {
        let w = sample_walk(6, 1.0, SeedSpec::new(3, 0)).unwrap();
        assert_eq!(w.len(), 64);
        assert_eq!(w.positions()[0], 0);
        assert!(w.positions().windows(2).all(|p| (p[1] - p[0]).abs() == 1));
        assert_eq!(w, sample_walk(6, 1.0, SeedSpec::new(3, 0)).unwrap());
        assert!(sample_walk(6, 0.001, SeedSpec::new(3, 0)).is_err());
    }

    #[test]
    fn spatial_path_covers_walk() {
        for stream in 0..20 {
            let s = sample_fbmbt(HurstParam::new(0.25).unwrap(), 7, 1.0, SeedSpec::new(1, stream))
                .unwrap();
            let (lo, hi) = s.walk().range();
            assert!(s.path().grid().first() <= lo && s.path().grid().last() >= hi);
        }
    }
}
