mod common;

use common::{check_petals, gnp, merge_script, replay, traced};
use mvmatch::graph::validate_matching;
use mvmatch::merge::Backend;
use mvmatch::oracle::{path_levels, reference_blossom_max, shortest_augmenting_path};
use mvmatch::InitialMatching;
use proptest::prelude::*;

fn backend() -> impl Strategy<Value = Backend> {
    prop_oneof![Just(Backend::Reference), Just(Backend::IncrementalTree)]
}

fn initial() -> impl Strategy<Value = InitialMatching> {
    prop_oneof![Just(InitialMatching::Empty), Just(InitialMatching::Greedy)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn maximum_and_valid(n in 1u32..40, p in 0.02f64..0.5, seed: u64, b in backend(), init in initial()) {
        let g = gnp(n, p, seed);
        let run = traced(&g, b, init);
        prop_assert!(validate_matching(&g, &run.matching).is_valid());
        prop_assert_eq!(run.matching.size(), reference_blossom_max(&g).size());
        for ph in &run.stats.phases {
            prop_assert_eq!(ph.late_bridges, 0);
        }
    }

    #[test]
    fn phases_find_shortest_paths_only(n in 2u32..11, p in 0.1f64..0.7, seed: u64, b in backend(), init in initial()) {
        let g = gnp(n, p, seed);
        let run = traced(&g, b, init);
        let mut last = 0;
        for ((ph, t), start) in run.stats.phases.iter().zip(&run.stats.traces).zip(&run.starts) {
            prop_assert_eq!(ph.l_m, shortest_augmenting_path(&g, start).unwrap());
            if let Some(l) = ph.l_m {
                prop_assert!(l > last);
                last = l;
                for path in t.paths() {
                    prop_assert_eq!(path.len() as u32, l + 1);
                }
            }
        }
    }

    #[test]
    fn levels_agree_with_enumeration(n in 2u32..11, p in 0.1f64..0.7, seed: u64, b in backend()) {
        let g = gnp(n, p, seed);
        let run = traced(&g, b, InitialMatching::Greedy);
        for (t, start) in run.stats.traces.iter().zip(&run.starts) {
            let want = path_levels(&g, start).unwrap();
            for v in g.vertices() {
                let i = v as usize;
                let got_min = match (t.even[i], t.odd[i]) {
                    (Some(a), Some(b)) => Some(a.min(b)),
                    (a, b) => a.or(b),
                };
                // levels above the stopping search level are never assigned
                let reached = t.l_m.map_or(u32::MAX, |l| l.div_ceil(2));
                if want.minlevel(v).is_some_and(|l| l <= reached) || got_min.is_some() {
                    prop_assert_eq!(got_min, want.minlevel(v), "minlevel of {}", v);
                }
                if let (Some(a), Some(b)) = (t.even[i], t.odd[i]) {
                    prop_assert_eq!(Some(a.max(b)), want.maxlevel(v), "maxlevel of {}", v);
                }
                if t.l_m.is_none() {
                    prop_assert_eq!(t.even[i], want.even[i]);
                    prop_assert_eq!(t.odd[i], want.odd[i]);
                }
            }
        }
    }

    #[test]
    fn petals_have_the_petal_property(n in 3u32..11, p in 0.15f64..0.7, seed: u64, b in backend(), init in initial()) {
        let g = gnp(n, p, seed);
        let run = traced(&g, b, init);
        for (t, start) in run.stats.traces.iter().zip(&run.starts) {
            if let Err(msg) = check_petals(&g, start, t) {
                prop_assert!(false, "{}", msg);
            }
        }
    }

    #[test]
    fn backends_agree_on_scripts(len in 1usize..3000, cap in 2usize..600, seed: u64) {
        let ops = merge_script(cap, len, seed);
        prop_assert_eq!(
            replay(Backend::Reference, cap, &ops),
            replay(Backend::IncrementalTree, cap, &ops)
        );
    }

    #[test]
    fn backends_give_identical_matchings(n in 1u32..120, d in 1u64..6, seed: u64) {
        let m = (d * n as u64).min(n as u64 * (n as u64).saturating_sub(1) / 2);
        let g = mvmatch::graph::generate_random(n, m, seed).unwrap();
        let a = traced(&g, Backend::Reference, InitialMatching::Greedy);
        let b = traced(&g, Backend::IncrementalTree, InitialMatching::Greedy);
        prop_assert_eq!(a.matching, b.matching);
        prop_assert_eq!(a.stats.traces, b.stats.traces);
    }
}
