use num::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::lamination::WeightedMulticurve;
use crate::rational::Q;
use crate::surface::{surface, trace_components, validate_normal, NormalMulticurve};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Rejection sampling of a nonempty normal multicurve with entries ≤ max_entry.
pub fn random_multicurve<R: Rng>(genus: usize, max_entry: u64, rng: &mut R) -> NormalMulticurve {
    let surf = surface(genus).expect("genus checked by caller");
    let ne = surf.num_edges();
    loop {
        let coords: Vec<u64> = (0..ne).map(|_| rng.gen_range(0..=max_entry)).collect();
        if coords.iter().all(|&c| c == 0) {
            continue;
        }
        let Ok(m) = validate_normal(&surf, &coords) else {
            continue;
        };
        if trace_components(&m).is_ok() {
            return m;
        }
    }
}

/// p/q with 1 ≤ p, q ≤ max.
pub fn random_weight<R: Rng>(max: i64, rng: &mut R) -> Q {
    Q::new(
        BigInt::from(rng.gen_range(1..=max)),
        BigInt::from(rng.gen_range(1..=max)),
    )
}

/// Components of a random multicurve, each with its own random weight.
pub fn random_lamination<R: Rng>(
    genus: usize,
    max_entry: u64,
    max_weight: i64,
    rng: &mut R,
) -> WeightedMulticurve {
    let m = random_multicurve(genus, max_entry, rng);
    let comps = trace_components(&m)
        .expect("sampled multicurves have no trivial components")
        .into_iter()
        .map(|(c, _)| (c, random_weight(max_weight, rng)))
        .collect();
    WeightedMulticurve::new(genus, comps).expect("components of one multicurve are disjoint")
}

/// A random simple closed curve: one component of a random multicurve.
pub fn random_curve<R: Rng>(genus: usize, max_entry: u64, rng: &mut R) -> NormalMulticurve {
    let comps =
        trace_components(&random_multicurve(genus, max_entry, rng)).expect("no trivial components");
    let i = rng.gen_range(0..comps.len());
    comps[i].0.clone()
}

/// Rational vector with entries n/d, |n| ≤ max, 1 ≤ d ≤ max.
pub fn random_vector<R: Rng>(len: usize, max: i64, rng: &mut R) -> Vec<Q> {
    (0..len)
        .map(|_| {
            Q::new(
                BigInt::from(rng.gen_range(-max..=max)),
                BigInt::from(rng.gen_range(1..=max)),
            )
        })
        .collect()
}
