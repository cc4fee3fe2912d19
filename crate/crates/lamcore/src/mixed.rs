use std::collections::BTreeMap;

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::core_complex::{bounds_from_lengths, build_core, CoreComplex, FlatDoc, FlatPiece, Sqrt};
use crate::decomposition::{decompose_pair, PieceKind};
use crate::error::{Error, Result};
use crate::lamination::{intersection_with_curve, VectorLamination, WeightedMulticurve};
use crate::rational::Q;
use crate::surface::{primitive, CutPiece, NormalMulticurve};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MixedKind {
    #[serde(rename = "flat")]
    PurelyFlat,
    #[serde(rename = "laminar")]
    PurelyLaminar,
    ProperlyMixed,
    Zero,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Content {
    Laminar(VectorLamination),
    Flat(FlatPiece),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedPiece {
    pub piece: CutPiece,
    pub content: Content,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MixedStructure {
    pub genus: usize,
    pub curve_system: Vec<NormalMulticurve>,
    pub pieces: Vec<MixedPiece>,
    /// Vector weights on curves of the system itself.
    pub on_system: VectorLamination,
    pub kind: MixedKind,
}

fn kind_of(pieces: &[MixedPiece], on_system: &VectorLamination, degenerate: bool) -> MixedKind {
    if degenerate {
        return MixedKind::Zero;
    }
    let flat = pieces
        .iter()
        .filter(|p| matches!(p.content, Content::Flat(_)))
        .count();
    if flat == 0 {
        MixedKind::PurelyLaminar
    } else if flat == pieces.len() && on_system.is_empty() {
        MixedKind::PurelyFlat
    } else {
        MixedKind::ProperlyMixed
    }
}

/// The mixed structure determined by a pair, assembled from the core.
pub fn mixed_from_core(core: &CoreComplex) -> MixedStructure {
    let d = &core.decomposition;
    let pieces: Vec<MixedPiece> = d
        .pieces
        .iter()
        .enumerate()
        .map(|(pi, p)| {
            let content = match &p.kind {
                PieceKind::Laminar { lamination } => Content::Laminar(lamination.clone()),
                PieceKind::Filling { .. } => Content::Flat(
                    core.flat_pieces
                        .iter()
                        .find(|f| f.piece == pi)
                        .expect("flat piece built")
                        .clone(),
                ),
            };
            MixedPiece {
                piece: p.piece.clone(),
                content,
            }
        })
        .collect();
    let kind = kind_of(&pieces, &d.on_system, d.degenerate);
    MixedStructure {
        genus: d.source.0.genus(),
        curve_system: d.curve_system.clone(),
        pieces,
        on_system: d.on_system.clone(),
        kind,
    }
}

pub fn mixed_from_pair(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<MixedStructure> {
    if x.genus() != y.genus() {
        return Err(Error::SurfaceMismatch);
    }
    if x.is_zero() && y.is_zero() {
        let d = decompose_pair(x, y)?;
        let pieces = d
            .pieces
            .into_iter()
            .map(|p| MixedPiece {
                piece: p.piece,
                content: Content::Laminar(VectorLamination::empty(x.genus())),
            })
            .collect();
        return Ok(MixedStructure {
            genus: x.genus(),
            curve_system: Vec::new(),
            pieces,
            on_system: VectorLamination::empty(x.genus()),
            kind: MixedKind::Zero,
        });
    }
    Ok(mixed_from_core(&build_core(x, y)?))
}

/// Horizontal and vertical multicurves of a rectangle complex, read off the rectangle sides.
fn flat_parts(f: &FlatPiece) -> Result<(Vec<(NormalMulticurve, Q)>, Vec<(NormalMulticurve, Q)>)> {
    let mut xs: BTreeMap<usize, Q> = BTreeMap::new();
    let mut ys: BTreeMap<usize, Q> = BTreeMap::new();
    for r in &f.rects {
        if !r.w.is_positive()
            || !r.h.is_positive()
            || r.x_curve >= f.curves.len()
            || r.y_curve >= f.curves.len()
        {
            return Err(Error::MalformedPiece("rectangle side".into()));
        }
        for (map, c, v) in [(&mut xs, r.x_curve, &r.w), (&mut ys, r.y_curve, &r.h)] {
            if map.insert(c, v.clone()).is_some_and(|old| &old != v) {
                return Err(Error::MalformedPiece("inconsistent side lengths".into()));
            }
        }
    }
    for (i, (_, (a, b))) in f.curves.iter().enumerate() {
        let ok_x = a.is_zero() != xs.contains_key(&i);
        let ok_y = b.is_zero() != ys.contains_key(&i);
        if !ok_x || !ok_y {
            return Err(Error::MalformedPiece("curve without rectangles".into()));
        }
    }
    let pick = |m: BTreeMap<usize, Q>| {
        m.into_iter()
            .map(|(c, w)| (f.curves[c].0.clone(), w))
            .collect()
    };
    Ok((pick(xs), pick(ys)))
}

pub fn pair_from_mixed(m: &MixedStructure) -> Result<(WeightedMulticurve, WeightedMulticurve)> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    let mut push = |v: &VectorLamination| {
        for (c, (a, b)) in v.support().iter().zip(v.weights()) {
            if a.is_positive() {
                xs.push((c.clone(), a.clone()));
            }
            if b.is_positive() {
                ys.push((c.clone(), b.clone()));
            }
        }
    };
    push(&m.on_system);
    for p in &m.pieces {
        if let Content::Laminar(v) = &p.content {
            push(v);
        }
    }
    for p in &m.pieces {
        if let Content::Flat(f) = &p.content {
            let (fx, fy) = flat_parts(f)?;
            xs.extend(fx);
            ys.extend(fy);
        }
    }
    let bad = |_| Error::MalformedPiece("pieces overlap".into());
    Ok((
        WeightedMulticurve::new(m.genus, xs).map_err(bad)?,
        WeightedMulticurve::new(m.genus, ys).map_err(bad)?,
    ))
}

fn same_flat(a: &FlatPiece, b: &FlatPiece) -> bool {
    let key = |f: &FlatPiece| {
        let mut r: Vec<(Q, Q)> = f.rects.iter().map(|r| (r.w.clone(), r.h.clone())).collect();
        r.sort();
        let mut c: Vec<(usize, bool)> = f.cone.iter().map(|v| (v.corners, v.interior)).collect();
        c.sort();
        (r, c, f.gluings.len())
    };
    a.rects.len() == b.rects.len() && key(a) == key(b)
}

/// The core's pieces match the structure's: trees over laminar pieces, rectangle complexes over flat ones.
pub fn is_dual(c: &CoreComplex, m: &MixedStructure) -> Result<bool> {
    if c.decomposition.source.0.genus() != m.genus {
        return Err(Error::SurfaceMismatch);
    }
    let d = &c.decomposition;
    if d.pieces.len() != m.pieces.len() || d.curve_system.len() != m.curve_system.len() {
        return Ok(false);
    }
    if !d.on_system.equivalent(&m.on_system) {
        return Ok(false);
    }
    for (pi, mp) in m.pieces.iter().enumerate() {
        if !d.pieces[pi].piece.same_piece(&mp.piece) {
            return Ok(false);
        }
        let ok = match &mp.content {
            Content::Laminar(v) => c
                .tree_pieces
                .iter()
                .find(|t| t.piece == pi)
                .is_some_and(|t| {
                    let mut te: Vec<(Q, Q)> = t.edges.iter().map(|e| e.length.clone()).collect();
                    let mut ve: Vec<(Q, Q)> = v.weights().to_vec();
                    te.sort();
                    ve.sort();
                    te == ve && t.lamination.equivalent(v) && t.vertices >= 1
                }),
            Content::Flat(f) => c
                .flat_pieces
                .iter()
                .find(|g| g.piece == pi)
                .is_some_and(|g| same_flat(f, g)),
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spectrum {
    pub l1: Q,
    pub lo: Sqrt,
    pub hi: Q,
}

pub fn spectrum(m: &MixedStructure, g: &NormalMulticurve) -> Result<Spectrum> {
    if g.genus() != m.genus {
        return Err(Error::SurfaceMismatch);
    }
    let g = primitive(g)?;
    let (x, y) = pair_from_mixed(m)?;
    let a = intersection_with_curve(&x, &g)?;
    let b = intersection_with_curve(&y, &g)?;
    let (lo, hi) = bounds_from_lengths(&a, &b);
    Ok(Spectrum {
        l1: &a + &b,
        lo,
        hi,
    })
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ContentDoc {
    Laminar(VectorLamination),
    Flat(FlatDoc),
}

#[derive(Serialize, Deserialize)]
pub struct MixedPieceDoc {
    pub piece: CutPiece,
    pub content: ContentDoc,
}

#[derive(Serialize, Deserialize)]
pub struct MixedDoc {
    pub k: u32,
    pub genus: usize,
    pub kind: MixedKind,
    pub curve_system: Vec<NormalMulticurve>,
    pub on_system: VectorLamination,
    pub pieces: Vec<MixedPieceDoc>,
}

impl MixedStructure {
    pub fn to_doc(&self) -> MixedDoc {
        MixedDoc {
            k: 2,
            genus: self.genus,
            kind: self.kind,
            curve_system: self.curve_system.clone(),
            on_system: self.on_system.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| MixedPieceDoc {
                    piece: p.piece.clone(),
                    content: match &p.content {
                        Content::Laminar(v) => ContentDoc::Laminar(v.clone()),
                        Content::Flat(f) => ContentDoc::Flat(f.to_doc()),
                    },
                })
                .collect(),
        }
    }
}

impl MixedStructure {
    pub fn from_doc(doc: &MixedDoc) -> Result<Self> {
        if doc.k != 2 {
            return Err(Error::Parse(format!(
                "only k = 2 is supported, found {}",
                doc.k
            )));
        }
        if doc.curve_system.iter().any(|c| c.genus() != doc.genus)
            || doc.on_system.genus() != doc.genus
        {
            return Err(Error::SurfaceMismatch);
        }
        let pieces = doc
            .pieces
            .iter()
            .map(|p| {
                let content = match &p.content {
                    ContentDoc::Laminar(v) => Content::Laminar(v.clone()),
                    ContentDoc::Flat(f) => Content::Flat(FlatPiece::from_doc(f)?),
                };
                Ok(MixedPiece {
                    piece: p.piece.clone(),
                    content,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if kind_of(&pieces, &doc.on_system, doc.kind == MixedKind::Zero) != doc.kind {
            return Err(Error::Parse("kind does not match the pieces".into()));
        }
        Ok(MixedStructure {
            genus: doc.genus,
            curve_system: doc.curve_system.clone(),
            pieces,
            on_system: doc.on_system.clone(),
            kind: doc.kind,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qi;
    use crate::surface::new_surface;

    fn fx(n: &str) -> NormalMulticurve {
        new_surface(2).unwrap().fixture(n).unwrap()
    }
    fn w(n: &str, k: i64) -> WeightedMulticurve {
        WeightedMulticurve::curve(&fx(n), qi(k)).unwrap()
    }

    #[test]
    fn kinds() {
        assert_eq!(
            mixed_from_pair(&w("c1", 1), &w("c2", 1)).unwrap().kind,
            MixedKind::ProperlyMixed
        );
        assert_eq!(
            mixed_from_pair(&w("c1", 1), &w("c1", 1)).unwrap().kind,
            MixedKind::PurelyLaminar
        );
        let z = WeightedMulticurve::zero(2);
        assert_eq!(mixed_from_pair(&z, &z).unwrap().kind, MixedKind::Zero);
        let ch = new_surface(2).unwrap().chain();
        let odd =
            WeightedMulticurve::new(2, [0, 2, 4].map(|i| (ch[i].clone(), qi(1))).to_vec()).unwrap();
        let even =
            WeightedMulticurve::new(2, [1, 3].map(|i| (ch[i].clone(), qi(1))).to_vec()).unwrap();
        assert_eq!(
            mixed_from_pair(&odd, &even).unwrap().kind,
            MixedKind::PurelyFlat
        );
    }

    #[test]
    fn roundtrips() {
        for (x, y) in [(w("c1", 1), w("c2", 1)), (w("c1", 2), w("c1", 3))] {
            let m = mixed_from_pair(&x, &y).unwrap();
            let (a, b) = pair_from_mixed(&m).unwrap();
            assert!(a.equivalent(&x) && b.equivalent(&y));
            assert!(is_dual(&build_core(&x, &y).unwrap(), &m).unwrap());
        }
        let z = WeightedMulticurve::zero(2);
        let (a, b) = pair_from_mixed(&mixed_from_pair(&z, &z).unwrap()).unwrap();
        assert!(a.is_zero() && b.is_zero());
        let other = mixed_from_pair(&w("c1", 1), &w("c1", 1)).unwrap();
        assert!(!is_dual(&build_core(&w("c1", 1), &w("c2", 1)).unwrap(), &other).unwrap());
    }

    #[test]
    fn spectra() {
        let m = mixed_from_pair(&w("c1", 1), &w("c2", 1)).unwrap();
        assert_eq!(spectrum(&m, &fx("c3")).unwrap().l1, qi(1));
        let m = mixed_from_pair(&w("c1", 2), &w("c1", 3)).unwrap();
        let s = spectrum(&m, &fx("c2")).unwrap();
        assert_eq!((s.l1, s.lo.0, s.hi), (qi(5), qi(13), qi(5)));
        let z = WeightedMulticurve::zero(2);
        let s = spectrum(&mixed_from_pair(&z, &z).unwrap(), &fx("c2")).unwrap();
        assert_eq!(s.l1, qi(0));
    }
}
