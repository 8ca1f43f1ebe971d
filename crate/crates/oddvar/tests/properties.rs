use oddvar::cli::FileConfig;
use oddvar::dump::path_csv;
use oddvar::fbm::{CirculantFbm, PathSampler};
use oddvar::fbmbt::sample_fbmbt;
use oddvar::harness::SuiteSettings;
use oddvar::{Purpose, SeedSpec};
use oddvar_core::walk::{relative_residual, vn_crossing, vn_direct, vn_magnitude};
use oddvar_core::{BuiltinWeight, GridSpec, HurstParam};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn paths_are_anchored_and_reproducible(hv in 0.05f64..0.95, n in 1u32..8, lo in 0u32..3, seed in any::<u64>(), stream in any::<u64>()) {
        let grid = GridSpec::dyadic(n, -f64::from(lo), 1.0).unwrap();
        let sampler = CirculantFbm::new(HurstParam::new(hv).unwrap(), grid).unwrap();
        let spec = SeedSpec::new(seed, stream);
        let a = sampler.sample(spec);
        prop_assert_eq!(a.at(0).unwrap(), 0.0);
        prop_assert_eq!(&a, &sampler.sample(spec));
        let other = sampler.sample_lane(spec, Purpose::Oracle);
        prop_assert_ne!(a.values(), other.values());
    }

    #[test]
    fn path_csv_round_trips(hv in 0.05f64..0.95, n in 1u32..7, seed in any::<u64>()) {
        let grid = GridSpec::dyadic(n, -1.0, 1.0).unwrap();
        let path = CirculantFbm::new(HurstParam::new(hv).unwrap(), grid).unwrap().sample(SeedSpec::new(seed, 0));
        let csv = path_csv(&path);
        let parsed: Vec<(f64, f64)> = csv
            .lines()
            .skip(1)
            .map(|l| {
                let (t, v) = l.split_once(',').unwrap();
                (t.parse().unwrap(), v.parse().unwrap())
            })
            .collect();
        prop_assert_eq!(parsed.len(), grid.len());
        for (k, (t, v)) in parsed.into_iter().enumerate() {
            prop_assert_eq!(t, grid.time(grid.first() + k as i64));
            prop_assert_eq!(v, path.values()[k]);
        }
    }

    #[test]
    fn sampled_brownian_time_identity(n in 1u32..11, r in 1u32..4, t in 0.05f64..2.0, seed in any::<u64>(), w in 0usize..7) {
        let f = BuiltinWeight::from_id(BuiltinWeight::REGISTRY[w]).unwrap();
        let s = match sample_fbmbt(HurstParam::new(0.3).unwrap(), n, t, SeedSpec::new(seed, 1)) {
            Ok(s) => s,
            // horizons with no walk step are rejected up front
            Err(_) => return Ok(()),
        };
        let a = vn_direct(&s, &f, r, t).unwrap();
        let b = vn_crossing(&s, &f, r, t).unwrap();
        prop_assert!(relative_residual(a, b, vn_magnitude(&s, &f, r, t).unwrap()) <= 1e-9);
    }

    #[test]
    fn config_files_round_trip(h in proptest::option::of(0.01f64..0.99), reps in proptest::option::of(100usize..10_000), alpha in 0.001f64..0.1, seed in proptest::option::of(any::<u32>())) {
        let settings = SuiteSettings {
            h,
            replicates: reps,
            seed: seed.map(u64::from),
            thresholds: oddvar::harness::Thresholds { alpha, ..Default::default() },
            ..Default::default()
        };
        let file = FileConfig { settings, ..Default::default() };
        let text = toml::to_string(&file).unwrap();
        prop_assert_eq!(FileConfig::parse(&text).unwrap(), file);
    }
}
