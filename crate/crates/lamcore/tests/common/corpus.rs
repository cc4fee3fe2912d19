//! Seeded corpora of lamination pairs.

use lamcore::lamination::{curve_intersection, WeightedMulticurve};
use lamcore::rational::Q;
use lamcore::sample::{random_curve, random_lamination, random_multicurve, random_weight, rng};
use lamcore::surface::trace_components;
use rand::Rng;

pub type Pair = (WeightedMulticurve, WeightedMulticurve);

pub const MAX_ENTRY: u64 = 4;
pub const MAX_WEIGHT: i64 = 8;

/// Independent random pairs.
pub fn random_pairs(genus: usize, n: usize, seed: u64) -> Vec<Pair> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let x = random_lamination(genus, MAX_ENTRY, MAX_WEIGHT, &mut r);
            let y = random_lamination(genus, MAX_ENTRY, MAX_WEIGHT, &mut r);
            (x, y)
        })
        .collect()
}

/// Pairs whose supports share a component.
pub fn sharing_pairs(genus: usize, n: usize, seed: u64) -> Vec<Pair> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| {
            let x = random_lamination(genus, MAX_ENTRY, MAX_WEIGHT, &mut r);
            let (c, _) = x.components()[r.gen_range(0..x.components().len())].clone();
            let mut comps: Vec<(_, Q)> = vec![(c.clone(), random_weight(MAX_WEIGHT, &mut r))];
            for _ in 0..20 {
                let d = random_curve(genus, MAX_ENTRY, &mut r);
                if curve_intersection(&c, &d) == 0 && !lamcore::lamination::curves_isotopic(&c, &d)
                {
                    comps.push((d, random_weight(MAX_WEIGHT, &mut r)));
                    break;
                }
            }
            (x, WeightedMulticurve::new(genus, comps).unwrap())
        })
        .collect()
}

/// Pairs with disjoint supports up to shared components: components of one multicurve dealt to x, y or both.
pub fn transverse_free_pairs(genus: usize, n: usize, seed: u64) -> Vec<Pair> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    while out.len() < n {
        let m = random_multicurve(genus, MAX_ENTRY, &mut r);
        let (mut xs, mut ys) = (Vec::new(), Vec::new());
        for (c, _) in trace_components(&m).unwrap() {
            match r.gen_range(0..3) {
                0 => xs.push((c, random_weight(MAX_WEIGHT, &mut r))),
                1 => ys.push((c, random_weight(MAX_WEIGHT, &mut r))),
                _ => {
                    xs.push((c.clone(), random_weight(MAX_WEIGHT, &mut r)));
                    ys.push((c, random_weight(MAX_WEIGHT, &mut r)));
                }
            }
        }
        if xs.is_empty() && ys.is_empty() {
            continue;
        }
        out.push((
            WeightedMulticurve::new(genus, xs).unwrap(),
            WeightedMulticurve::new(genus, ys).unwrap(),
        ));
    }
    out
}
