use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamination::{curves_isotopic, VectorLamination, WeightedMulticurve};
use crate::overlay::{locate, Overlay};
use crate::rational::Q;
use crate::surface::{primitive, surface, validate_normal, CutPiece, NormalMulticurve, UnionFind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PieceKind {
    Laminar {
        lamination: VectorLamination,
    },
    Filling {
        x: WeightedMulticurve,
        y: WeightedMulticurve,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompPiece {
    pub piece: CutPiece,
    #[serde(flatten)]
    pub kind: PieceKind,
}

impl DecompPiece {
    pub fn is_filling(&self) -> bool {
        matches!(self.kind, PieceKind::Filling { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairDecomposition {
    pub curve_system: Vec<NormalMulticurve>,
    pub pieces: Vec<DecompPiece>,
    /// Weights carried by curves isotopic to members of the system.
    pub on_system: VectorLamination,
    pub degenerate: bool,
    pub source: (WeightedMulticurve, WeightedMulticurve),
}

/// Isotopy classes of the union of both supports with their weight pairs.
pub(crate) fn merged_support(
    x: &WeightedMulticurve,
    y: &WeightedMulticurve,
) -> Vec<(NormalMulticurve, (Q, Q))> {
    let mut out: Vec<(NormalMulticurve, (Q, Q))> = x
        .components()
        .iter()
        .map(|(c, w)| (c.clone(), (w.clone(), Q::zero())))
        .collect();
    for (c, w) in y.components() {
        match out.iter_mut().find(|(d, _)| curves_isotopic(d, c)) {
            Some((_, (_, b))) => *b += w,
            None => out.push((c.clone(), (Q::zero(), w.clone()))),
        }
    }
    out
}

/// Boundary curves of regular neighborhoods of the clusters of crossing curves, up to isotopy.
fn neighborhood_boundaries(
    genus: usize,
    classes: &[NormalMulticurve],
) -> Result<(Vec<NormalMulticurve>, Vec<bool>)> {
    let surf = surface(genus)?;
    let mut ov = Overlay::new(&surf);
    for (i, c) in classes.iter().enumerate() {
        if ov.add_normal(c.coords(), i as u32).len() != 1 {
            return Err(Error::NotSimple);
        }
    }
    let an = ov.minimize();
    let n = classes.len();
    let mut uf = UnionFind::new(n);
    let mut crossed = vec![false; n];
    for x in &an.crossings {
        let [a, b] = x.curves.map(|c| c as usize);
        uf.union(a, b);
        crossed[a] = true;
        crossed[b] = true;
    }
    let mut roots: Vec<usize> = (0..n).filter(|&i| crossed[i]).map(|i| uf.find(i)).collect();
    roots.sort();
    roots.dedup();
    let mut found: Vec<NormalMulticurve> = Vec::new();
    for r in roots {
        let keep: Vec<usize> = (0..n).filter(|&i| crossed[i] && uf.find(i) == r).collect();
        let (mut sov, _) = ov.sub(&keep);
        let san = sov.analyze();
        let ident: Vec<u32> =
            (0..sov.curves.iter().map(|c| c.pts.len()).sum::<usize>() as u32).collect();
        for reg in san.regions.iter().filter(|reg| !reg.is_disk()) {
            for &cy in &reg.cycles {
                let id = sov.add_pushoff(&san, &san.cycles[cy as usize].hs, &ident, u32::MAX);
                let c = validate_normal(&surf, &sov.normal_coords(id))?;
                let c = primitive(&c)?;
                if !found.iter().any(|d| curves_isotopic(d, &c)) {
                    found.push(c);
                }
            }
        }
    }
    found.sort();
    Ok((found, crossed))
}

pub fn decompose_pair(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<PairDecomposition> {
    if x.genus() != y.genus() {
        return Err(Error::SurfaceMismatch);
    }
    let genus = x.genus();
    let surf = surface(genus)?;
    let source = (x.clone(), y.clone());
    let support = merged_support(x, y);
    if support.is_empty() {
        let piece = crate::surface::cut_along(&surf, &[])?.remove(0);
        return Ok(PairDecomposition {
            curve_system: Vec::new(),
            pieces: vec![DecompPiece {
                piece,
                kind: PieceKind::Laminar {
                    lamination: VectorLamination::empty(genus),
                },
            }],
            on_system: VectorLamination::empty(genus),
            degenerate: true,
            source,
        });
    }
    let classes: Vec<NormalMulticurve> = support.iter().map(|s| s.0.clone()).collect();
    let (system, crossed) = neighborhood_boundaries(genus, &classes)?;

    let mut on_sys: Vec<(NormalMulticurve, (Q, Q))> = Vec::new();
    let mut placed: Vec<usize> = Vec::new();
    for (i, (c, w)) in support.iter().enumerate() {
        match (!crossed[i])
            .then(|| system.iter().find(|d| curves_isotopic(d, c)))
            .flatten()
        {
            Some(d) => on_sys.push((d.clone(), w.clone())),
            None => placed.push(i),
        }
    }
    let sys_coords: Vec<Vec<u64>> = system.iter().map(|c| c.coords().to_vec()).collect();
    let extra: Vec<Vec<u64>> = placed
        .iter()
        .map(|&i| classes[i].coords().to_vec())
        .collect();
    let loc = locate(&surf, &sys_coords, &extra)?;

    let pieces = loc
        .pieces
        .iter()
        .enumerate()
        .map(|(pi, piece)| {
            let members: Vec<usize> = placed
                .iter()
                .zip(&loc.piece_of)
                .filter(|(_, &p)| p == pi)
                .map(|(&i, _)| i)
                .collect();
            let kind = if members.iter().any(|&i| crossed[i]) {
                let part = |k: usize| {
                    let comps = members
                        .iter()
                        .filter_map(|&i| {
                            let w = if k == 0 {
                                &support[i].1 .0
                            } else {
                                &support[i].1 .1
                            };
                            w.is_positive().then(|| (classes[i].clone(), w.clone()))
                        })
                        .collect();
                    WeightedMulticurve::from_parts(genus, comps)
                };
                PieceKind::Filling {
                    x: part(0),
                    y: part(1),
                }
            } else {
                let comps = members.iter().map(|&i| support[i].clone()).collect();
                PieceKind::Laminar {
                    lamination: VectorLamination::from_parts(genus, comps),
                }
            };
            DecompPiece {
                piece: piece.clone(),
                kind,
            }
        })
        .collect();
    Ok(PairDecomposition {
        curve_system: system,
        pieces,
        on_system: VectorLamination::from_parts(genus, on_sys),
        degenerate: false,
        source,
    })
}
