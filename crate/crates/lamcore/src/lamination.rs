use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::overlay::{self, locate};
use crate::rational::{serde_q, Q};
use crate::surface::{primitive, surface, trace_components, CutPiece, NormalMulticurve};

/// Geometric intersection number of two primitive curves, memoized.
pub fn curve_intersection(a: &NormalMulticurve, b: &NormalMulticurve) -> u64 {
    static CACHE: OnceLock<Mutex<HashMap<(Vec<u64>, Vec<u64>), u64>>> = OnceLock::new();
    let key = if a.coords() <= b.coords() {
        (a.coords().to_vec(), b.coords().to_vec())
    } else {
        (b.coords().to_vec(), a.coords().to_vec())
    };
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&v) = cache.lock().unwrap().get(&key) {
        return v;
    }
    let s = a.surface();
    let v = overlay::intersection(&s, &key.0, &key.1);
    let mut c = cache.lock().unwrap();
    if c.len() > 2_000_000 {
        c.clear();
    }
    c.insert(key, v);
    v
}

/// Isotopy of primitive curves on the closed surface.
pub fn curves_isotopic(a: &NormalMulticurve, b: &NormalMulticurve) -> bool {
    a.genus() == b.genus() && overlay::isotopic(&a.surface(), a.coords(), b.coords())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedMulticurve {
    genus: usize,
    comps: Vec<(NormalMulticurve, Q)>,
}

#[derive(Serialize, Deserialize)]
struct CompDoc {
    coords: Vec<u64>,
    #[serde(with = "serde_q")]
    weight: Q,
}

#[derive(Serialize, Deserialize)]
struct WmcDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    genus: Option<usize>,
    components: Vec<CompDoc>,
}

impl Serialize for WeightedMulticurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        WmcDoc {
            genus: Some(self.genus),
            components: self
                .comps
                .iter()
                .map(|(c, w)| CompDoc {
                    coords: c.coords().to_vec(),
                    weight: w.clone(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for WeightedMulticurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = WmcDoc::deserialize(d)?;
        let genus = match (doc.genus, doc.components.first()) {
            (Some(g), _) => g,
            (None, Some(c)) => {
                crate::surface::genus_from_len(c.coords.len()).map_err(D::Error::custom)?
            }
            (None, None) => return Err(D::Error::custom("genus needed for an empty multicurve")),
        };
        let surf = surface(genus).map_err(D::Error::custom)?;
        let comps = doc
            .components
            .into_iter()
            .map(|c| Ok((crate::surface::validate_normal(&surf, &c.coords)?, c.weight)))
            .collect::<Result<Vec<_>>>()
            .map_err(D::Error::custom)?;
        WeightedMulticurve::new(genus, comps).map_err(D::Error::custom)
    }
}

impl WeightedMulticurve {
    pub fn zero(genus: usize) -> Self {
        WeightedMulticurve {
            genus,
            comps: Vec::new(),
        }
    }

    /// Components must be primitive; isotopic components are merged, and intersecting ones rejected.
    pub fn new(genus: usize, comps: Vec<(NormalMulticurve, Q)>) -> Result<Self> {
        let mut out: Vec<(NormalMulticurve, Q)> = Vec::new();
        for (c, w) in comps {
            if c.genus() != genus {
                return Err(Error::SurfaceMismatch);
            }
            if !w.is_positive() {
                return Err(Error::NonPositiveWeight);
            }
            let c = primitive(&c)?;
            if c.coords() != primitive(&c)?.coords() {
                return Err(Error::NotSimple);
            }
            match out.iter_mut().find(|(d, _)| curves_isotopic(d, &c)) {
                Some((_, v)) => *v += w,
                None => out.push((c, w)),
            }
        }
        for i in 0..out.len() {
            for j in i + 1..out.len() {
                if curve_intersection(&out[i].0, &out[j].0) != 0 {
                    return Err(Error::BadComponents);
                }
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(WeightedMulticurve { genus, comps: out })
    }

    /// Trusted constructor: components already primitive, disjoint and pairwise non-isotopic.
    pub(crate) fn from_parts(genus: usize, mut comps: Vec<(NormalMulticurve, Q)>) -> Self {
        comps.sort_by(|a, b| a.0.cmp(&b.0));
        WeightedMulticurve { genus, comps }
    }

    pub fn curve(c: &NormalMulticurve, w: Q) -> Result<Self> {
        Self::new(c.genus(), vec![(c.clone(), w)])
    }

    /// A normal multicurve with every component weighted by `w` times its multiplicity.
    pub fn from_normal(m: &NormalMulticurve, w: Q) -> Result<Self> {
        let comps = trace_components(m)?
            .into_iter()
            .map(|(c, k)| (c, &w * Q::from_integer(k.into())))
            .collect();
        Self::new(m.genus(), comps)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn components(&self) -> &[(NormalMulticurve, Q)] {
        &self.comps
    }
    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }
    pub fn support(&self) -> Vec<NormalMulticurve> {
        self.comps.iter().map(|c| c.0.clone()).collect()
    }

    pub fn weight_of(&self, c: &NormalMulticurve) -> Option<Q> {
        self.comps
            .iter()
            .find(|(d, _)| curves_isotopic(d, c))
            .map(|x| x.1.clone())
    }

    /// Same lamination up to isotopy of components.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.genus == other.genus
            && self.comps.len() == other.comps.len()
            && self
                .comps
                .iter()
                .all(|(c, w)| other.weight_of(c).as_ref() == Some(w))
    }

    /// Sum of laminations whose components are pairwise disjoint.
    pub fn plus(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::SurfaceMismatch);
        }
        let mut all = self.comps.clone();
        all.extend(other.comps.iter().cloned());
        Self::new(self.genus, all)
    }
}

pub fn scale(x: &WeightedMulticurve, t: &Q) -> Result<WeightedMulticurve> {
    if !t.is_positive() {
        return Err(Error::NonPositiveScale);
    }
    Ok(WeightedMulticurve {
        genus: x.genus,
        comps: x.comps.iter().map(|(c, w)| (c.clone(), w * t)).collect(),
    })
}

pub fn intersection_number(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<Q> {
    if x.genus != y.genus {
        return Err(Error::SurfaceMismatch);
    }
    let mut total = Q::zero();
    for (a, v) in &x.comps {
        for (b, w) in &y.comps {
            let i = curve_intersection(a, b);
            if i != 0 {
                total += v * w * Q::from_integer(i.into());
            }
        }
    }
    Ok(total)
}

/// i(x, c) for a primitive curve.
pub fn intersection_with_curve(x: &WeightedMulticurve, c: &NormalMulticurve) -> Result<Q> {
    if x.genus != c.genus() {
        return Err(Error::SurfaceMismatch);
    }
    let mut total = Q::zero();
    for (a, v) in &x.comps {
        let i = curve_intersection(a, c);
        if i != 0 {
            total += v * Q::from_integer(i.into());
        }
    }
    Ok(total)
}

pub fn nowhere_transverse(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<bool> {
    if x.genus != y.genus {
        return Err(Error::SurfaceMismatch);
    }
    Ok(x.comps
        .iter()
        .all(|(a, _)| y.comps.iter().all(|(b, _)| curve_intersection(a, b) == 0)))
}

/// Where a filling test takes place.
#[derive(Clone, Debug)]
pub enum PieceRef {
    Whole,
    Cut {
        system: Vec<NormalMulticurve>,
        piece: CutPiece,
    },
}

/// Every complementary region of x ∪ y inside the piece is a disk or a boundary-parallel annulus.
pub fn fills(x: &WeightedMulticurve, y: &WeightedMulticurve, piece: &PieceRef) -> Result<bool> {
    if x.genus != y.genus {
        return Err(Error::SurfaceMismatch);
    }
    let surf = surface(x.genus)?;
    let (system, target) = match piece {
        PieceRef::Whole => (Vec::new(), None),
        PieceRef::Cut { system, piece } => (system.clone(), Some(piece)),
    };
    if let Some(p) = target {
        if !p.is_essential() {
            return Ok(false);
        }
    }
    if x.is_zero() || y.is_zero() {
        return Ok(false);
    }
    let sys: Vec<Vec<u64>> = system.iter().map(|c| c.coords().to_vec()).collect();
    // parallel copies would bound spurious annuli
    let mut extra: Vec<Vec<u64>> = x.comps.iter().map(|(c, _)| c.coords().to_vec()).collect();
    for (c, _) in &y.comps {
        if x.weight_of(c).is_none() {
            extra.push(c.coords().to_vec());
        }
    }
    let loc = locate(&surf, &sys, &extra).map_err(|e| match e {
        Error::NotDisjoint => Error::SupportOutsidePiece,
        e => e,
    })?;
    let pidx = match target {
        None => 0,
        Some(p) => loc
            .pieces
            .iter()
            .position(|q| q.same_piece(p))
            .ok_or(Error::SupportOutsidePiece)?,
    };
    if loc.piece_of.iter().any(|&q| q != pidx) {
        return Err(Error::SupportOutsidePiece);
    }
    let an = &loc.an;
    let nsys = loc.nsys as u32;
    let segs = an.region_segs();
    for (r, seg) in an.regions.iter().zip(segs) {
        // a region without segments is a single face
        let Some(h) = seg else { continue };
        if loc.piece_of_half(h) != Some(pidx) {
            continue;
        }
        if r.is_disk() {
            continue;
        }
        let peripheral = r.euler_char() == 0 && r.cycles.len() == 2 && {
            let kinds: Vec<Option<bool>> = r
                .cycles
                .iter()
                .map(|&c| {
                    let hs = &an.cycles[c as usize].hs;
                    let sys_side = |h: &u32| an.curve_of_half(*h).unwrap() < nsys;
                    if hs.iter().all(sys_side) {
                        Some(true)
                    } else if !hs.iter().any(sys_side) {
                        Some(false)
                    } else {
                        None
                    }
                })
                .collect();
            matches!((kinds[0], kinds[1]), (Some(a), Some(b)) if a != b)
        };
        if !peripheral {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Pairs of measures on a common family of disjoint curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorLamination {
    genus: usize,
    support: Vec<NormalMulticurve>,
    weights: Vec<(Q, Q)>,
}

#[derive(Serialize, Deserialize)]
struct VlCompDoc {
    coords: Vec<u64>,
    #[serde(with = "crate::rational::serde_qvec")]
    weight: Vec<Q>,
}

#[derive(Serialize, Deserialize)]
struct VlDoc {
    genus: usize,
    components: Vec<VlCompDoc>,
}

impl Serialize for VectorLamination {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        VlDoc {
            genus: self.genus,
            components: self
                .support
                .iter()
                .zip(&self.weights)
                .map(|(c, (a, b))| VlCompDoc {
                    coords: c.coords().to_vec(),
                    weight: vec![a.clone(), b.clone()],
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for VectorLamination {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let doc = VlDoc::deserialize(d)?;
        let surf = surface(doc.genus).map_err(D::Error::custom)?;
        let mut comps = Vec::new();
        for c in doc.components {
            if c.weight.len() != 2 {
                return Err(D::Error::custom("weight must be a pair"));
            }
            let m = crate::surface::validate_normal(&surf, &c.coords).map_err(D::Error::custom)?;
            comps.push((m, (c.weight[0].clone(), c.weight[1].clone())));
        }
        VectorLamination::new(doc.genus, comps).map_err(D::Error::custom)
    }
}

impl VectorLamination {
    pub fn empty(genus: usize) -> Self {
        VectorLamination {
            genus,
            support: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn new(genus: usize, comps: Vec<(NormalMulticurve, (Q, Q))>) -> Result<Self> {
        for (c, (a, b)) in &comps {
            if c.genus() != genus {
                return Err(Error::SurfaceMismatch);
            }
            if a.is_negative() || b.is_negative() || (a + b).is_zero() {
                return Err(Error::NonPositiveWeight);
            }
            if primitive(c)?.coords() != c.coords() {
                return Err(Error::NotSimple);
            }
        }
        for i in 0..comps.len() {
            for j in i + 1..comps.len() {
                if curve_intersection(&comps[i].0, &comps[j].0) != 0
                    || curves_isotopic(&comps[i].0, &comps[j].0)
                {
                    return Err(Error::BadComponents);
                }
            }
        }
        Ok(Self::from_parts(genus, comps))
    }

    pub(crate) fn from_parts(genus: usize, mut comps: Vec<(NormalMulticurve, (Q, Q))>) -> Self {
        comps.sort_by(|a, b| a.0.cmp(&b.0));
        let (support, weights) = comps.into_iter().unzip();
        VectorLamination {
            genus,
            support,
            weights,
        }
    }

    /// Merges a nowhere-transverse pair.
    pub fn from_pair(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<Self> {
        if !nowhere_transverse(x, y)? {
            return Err(Error::BadComponents);
        }
        let mut comps: Vec<(NormalMulticurve, (Q, Q))> = x
            .comps
            .iter()
            .map(|(c, w)| (c.clone(), (w.clone(), Q::zero())))
            .collect();
        for (c, w) in &y.comps {
            match comps.iter_mut().find(|(d, _)| curves_isotopic(d, c)) {
                Some((_, (_, b))) => *b += w,
                None => comps.push((c.clone(), (Q::zero(), w.clone()))),
            }
        }
        Ok(Self::from_parts(x.genus, comps))
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn support(&self) -> &[NormalMulticurve] {
        &self.support
    }
    pub fn weights(&self) -> &[(Q, Q)] {
        &self.weights
    }
    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }

    /// Coordinate `i` (0 or 1) as a weighted multicurve.
    pub fn project(&self, i: usize) -> WeightedMulticurve {
        let comps = self
            .support
            .iter()
            .zip(&self.weights)
            .filter_map(|(c, (a, b))| {
                let w = if i == 0 { a } else { b };
                w.is_positive().then(|| (c.clone(), w.clone()))
            })
            .collect();
        WeightedMulticurve::from_parts(self.genus, comps)
    }

    /// Equal up to isotopy of support curves.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.genus == other.genus
            && self.support.len() == other.support.len()
            && self.support.iter().zip(&self.weights).all(|(c, w)| {
                other
                    .support
                    .iter()
                    .zip(&other.weights)
                    .any(|(d, v)| v == w && curves_isotopic(c, d))
            })
    }
}

pub fn add(v: &VectorLamination) -> WeightedMulticurve {
    let comps = v
        .support
        .iter()
        .zip(&v.weights)
        .map(|(c, (a, b))| (c.clone(), a + b))
        .collect();
    WeightedMulticurve::from_parts(v.genus, comps)
}
