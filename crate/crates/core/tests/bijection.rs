//! encode and decode are mutually inverse on the whole family.

use std::collections::HashSet;

use wdfa::codec::{decode, encode, InVector, Mask, OutMatrix, fill};
use wdfa::bits::BitSeq;
use wdfa::oracle::{enumerate_direct, Subsets};
use wdfa::Params;

/// Every out-matrix without an empty column, with every compatible in-vector.
fn all_pairs(p: Params) -> Vec<(OutMatrix, InVector)> {
    let mut pairs = Vec::new();
    for cells in Subsets::new(p.cells(), p.m) {
        let o = OutMatrix::from_cells(p.n, p.sigma, cells).unwrap();
        if o.first_empty_column().is_some() {
            continue;
        }
        let mask = Mask::for_matrix(&o).unwrap();
        for ones in Subsets::new(mask.wildcards(), p.n - p.sigma - 1) {
            let mut bits = BitSeq::zeros(mask.wildcards());
            for v in ones {
                bits.set(v);
            }
            pairs.push((o.clone(), InVector::new(fill(&mask, &bits).unwrap())));
        }
    }
    pairs
}

fn grid() -> impl Iterator<Item = Params> {
    (2..=4u64).flat_map(|n| {
        (1..=2.min(n - 1)).flat_map(move |sigma| ((n - 1)..=6.min(n * sigma)).map(move |m| Params::new(n, m, sigma)))
    })
}

#[test]
fn decode_then_encode_is_identity() {
    for p in grid() {
        let pairs = all_pairs(p);
        let mut seen = HashSet::new();
        for (o, i) in &pairs {
            assert!(i.is_compatible(o));
            let d = decode(o, i).unwrap();
            assert!(seen.insert(d.key()), "{p}: two pairs decode to one automaton");
            let (o2, i2) = encode(&d).unwrap();
            assert_eq!((&o2, &i2), (o, i), "{p}");
        }
        assert_eq!(wdfa::BigCount::from(pairs.len()), wdfa::count_wdfa(p.n, p.m, p.sigma).unwrap());
    }
}

#[test]
fn encode_then_decode_is_identity() {
    for p in grid() {
        for d in enumerate_direct(p.n, p.m, p.sigma).unwrap() {
            let (o, i) = encode(&d).unwrap();
            assert_eq!(decode(&o, &i).unwrap(), d, "{p}");
        }
    }
}
