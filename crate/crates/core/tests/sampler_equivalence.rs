//! The basic and streaming samplers are the same function of their two
//! subset draws: checked over every possible pair of draws.

use wdfa::codec::{decode, sample_basic, sample_in_vector, try_sample_out_matrix};
use wdfa::oracle::Subsets;
use wdfa::shuffle::{Scripted, ScriptedSource};
use wdfa::stream::{sample_stream, stream_attempt, Attempt};
use wdfa::{check_wheeler, Automaton, Params, Transition};

fn five_state_edges() -> Vec<Transition> {
    [(2, 1, 2), (5, 1, 2), (1, 2, 3), (3, 2, 4), (4, 2, 4), (5, 2, 5)]
        .into_iter()
        .map(|(u, j, v)| Transition::new(u, j, v))
        .collect()
}

#[test]
fn five_state_example_from_both_samplers() {
    let p = Params::new(5, 6, 2);
    let script = || ScriptedSource::single(vec![2, 5, 6, 8, 9, 10], vec![2, 4]);

    let (basic, attempts) = sample_basic(p, &mut script()).unwrap();
    assert_eq!(attempts, 1);
    assert_eq!(basic.transitions(), five_state_edges().as_slice());

    let mut streamed = Vec::new();
    let stats = sample_stream(p, &mut script(), &mut streamed, None).unwrap();
    assert_eq!(stats.attempts, 1);
    assert_eq!(streamed, five_state_edges());
}

fn check_all_scripts(p: Params) -> (u64, u64) {
    let (mut accepted, mut rejected) = (0, 0);
    for out in Subsets::new(p.cells(), p.m) {
        for ones in Subsets::new(p.m - p.sigma, p.n - p.sigma - 1) {
            let mut src = ScriptedSource::single(out.clone(), ones.clone());
            let basic = try_sample_out_matrix(p, &mut src).unwrap().map(|o| {
                let i = sample_in_vector(&o, &mut src).unwrap();
                decode(&o, &i).unwrap()
            });

            let mut cells = Scripted::new(p.cells(), p.m, out.clone()).unwrap();
            let mut ins = Scripted::new(p.m - p.sigma, p.n - p.sigma - 1, ones.clone()).unwrap();
            let mut edges = Vec::new();
            let attempt = stream_attempt(p, &mut cells, &mut ins, &mut edges).unwrap();

            match (basic, attempt) {
                (Some(d), Attempt::Accepted { emitted }) => {
                    assert_eq!(emitted, p.m);
                    assert_eq!(d.transitions(), edges.as_slice(), "{p} out={out:?} in={ones:?}");
                    assert!(edges.windows(2).all(|w| (w[0].label, w[0].source) < (w[1].label, w[1].source)));
                    let a = Automaton::new(p.n, p.sigma, edges).unwrap();
                    assert!(check_wheeler(&a).is_ok());
                    accepted += 1;
                }
                (None, Attempt::Rejected { .. }) => rejected += 1,
                (b, s) => panic!("{p} out={out:?} in={ones:?}: basic {b:?} vs stream {s:?}"),
            }
        }
    }
    (accepted, rejected)
}

#[test]
fn exhaustive_equivalence_small() {
    for n in 2..=4 {
        for sigma in 1..=2.min(n - 1) {
            for m in (n - 1)..=6.min(n * sigma) {
                let p = Params::new(n, m, sigma);
                let (accepted, _) = check_all_scripts(p);
                assert_eq!(wdfa::BigCount::from(accepted), wdfa::count_wdfa(n, m, sigma).unwrap(), "{p}");
            }
        }
    }
}

#[test]
fn exhaustive_equivalence_wider() {
    for (n, sigma) in [(5, 3), (5, 4), (6, 2)] {
        for m in (n - 1)..=(n * sigma).min(9) {
            let p = Params::new(n, m, sigma);
            let (accepted, rejected) = check_all_scripts(p);
            assert_eq!(wdfa::BigCount::from(accepted), wdfa::count_wdfa(n, m, sigma).unwrap(), "{p}");
            assert_eq!(rejected > 0, p.may_reject(), "{p}");
        }
    }
}
