mod common;

use common::{bit, entropy, marginal, mutual_info, random_ptp_instance, seq_index};
use corrsynth::codec::{PtpCodec, PtpParams, DEFAULT_BUDGET};
use corrsynth::prob::json::{pmf_from_str, pmf_to_string};
use corrsynth::prob::typical::TypicalityTest;
use corrsynth::prob::{Alphabet, Axis, JointPmf};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pmf(weights: Vec<f64>) -> Vec<f64> {
    let s: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / s).collect()
}

fn table(len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.01f64..1.0, len).prop_map(pmf)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn information_measures_match_oracle(t in table(12)) {
        let p = JointPmf::new(
            vec![bit("A"), Axis::new("B", Alphabet::range(3).unwrap()), bit("C")],
            t.clone(),
        ).unwrap();
        let shape = [2, 3, 2];
        prop_assert!((p.entropy() - entropy(&t)).abs() < 1e-12);
        let i = p.mutual_information(&["A"], &["B", "C"]).unwrap();
        prop_assert!((i - mutual_info(&t, &shape, &[0], &[1, 2])).abs() < 1e-12);
        let h_ab = p.entropy_of(&["A", "B"]).unwrap();
        prop_assert!((h_ab - entropy(&marginal(&t, &shape, &[0, 1]))).abs() < 1e-12);
        prop_assert!(i >= -1e-12);
    }

    #[test]
    fn pmf_json_round_trip(t in table(6)) {
        let p = JointPmf::new(vec![Axis::new("X", Alphabet::range(3).unwrap()), bit("Y")], t).unwrap();
        let q = pmf_from_str(&pmf_to_string(&p)).unwrap();
        prop_assert_eq!(p.table(), q.table());
        prop_assert_eq!(p.axis_names(), q.axis_names());
    }

    #[test]
    fn typical_enumeration_matches_count_bounds(p0 in 0.05f64..0.95, n in 1usize..9, delta in 0.05f64..0.95) {
        let p = [p0, 1.0 - p0];
        let pm = JointPmf::new(vec![bit("X")], p.to_vec()).unwrap();
        let got = TypicalityTest::new(&pm, n, delta).unwrap().enumerate(DEFAULT_BUDGET).unwrap();
        let nf = n as f64;
        let typical = |s: &[usize]| {
            (0..2).all(|a| {
                let k = s.iter().filter(|&&v| v == a).count() as f64;
                let eps = 1e-9 * nf * p[a];
                k >= nf * p[a] * (1.0 - delta) - eps && k <= nf * p[a] * (1.0 + delta) + eps
            })
        };
        let want: Vec<Vec<usize>> = (0..1usize << n)
            .map(|i| (0..n).map(|j| (i >> (n - 1 - j)) & 1).collect::<Vec<usize>>())
            .filter(|s| typical(s))
            .collect();
        prop_assert_eq!(&got, &want);
        for s in &got {
            prop_assert!(seq_index(s, 2) < 1 << n);
        }
    }

    #[test]
    fn message_pmf_is_a_distribution(seed in any::<u64>(), n in 2usize..5, nz in 1usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = random_ptp_instance(&mut rng, nz);
        let params = PtpParams { n, rt: 1.2, r: 0.6, c: 0.6, delta: 0.8, eta: 0.25, seed };
        let Ok(codec) = PtpCodec::sample(&inst.target, &inst.aux, params, DEFAULT_BUDGET) else {
            return Ok(());
        };
        for i in 0..1usize << n {
            let x: Vec<usize> = (0..n).map(|j| (i >> j) & 1).collect();
            for mu in 0..codec.sizes().k {
                let m = codec.message_pmf(&x, mu).unwrap();
                prop_assert!(m.iter().all(|&v| v >= -1e-15));
                prop_assert!((m.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                let e = codec.encoder_subpmf(&x, mu).unwrap();
                if !e.valid {
                    prop_assert_eq!(m[0], 1.0);
                }
            }
        }
    }
}
