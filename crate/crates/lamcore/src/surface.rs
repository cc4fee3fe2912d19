use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::walk;

/// Edge-side id: `2e` runs along edge `e`, `2e+1` runs against it.
pub type Side = u32;

#[inline]
pub fn glue(s: Side) -> Side {
    s ^ 1
}

#[inline]
pub fn edge_of(s: Side) -> usize {
    (s >> 1) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriangulatedSurface {
    genus: usize,
    triangles: Vec<[Side; 3]>,
    loc: Vec<(u32, u8)>,
    labels: Vec<(String, Vec<u64>)>,
}

impl TriangulatedSurface {
    /// Builds a surface from oriented triangles of edge-sides, glued by `s <-> s^1`.
    pub fn from_triangles(genus: usize, triangles: Vec<[Side; 3]>) -> Result<Self> {
        if genus < 2 {
            return Err(Error::InvalidGenus(genus));
        }
        let ne = 6 * genus - 3;
        if triangles.len() != 4 * genus - 2 {
            return Err(Error::BadTriangulation(format!(
                "{} triangles",
                triangles.len()
            )));
        }
        let mut loc = vec![(u32::MAX, 0u8); 2 * ne];
        for (t, tri) in triangles.iter().enumerate() {
            for (j, &s) in tri.iter().enumerate() {
                let slot = loc
                    .get_mut(s as usize)
                    .ok_or_else(|| Error::BadTriangulation(format!("side {s} out of range")))?;
                if slot.0 != u32::MAX {
                    return Err(Error::BadTriangulation(format!("side {s} used twice")));
                }
                *slot = (t as u32, j as u8);
            }
        }
        if loc.iter().any(|l| l.0 == u32::MAX) {
            return Err(Error::BadTriangulation("unused side".into()));
        }
        let surf = TriangulatedSurface {
            genus,
            triangles,
            loc,
            labels: Vec::new(),
        };
        surf.check_topology()?;
        Ok(surf)
    }

    fn check_topology(&self) -> Result<()> {
        // connectivity of the dual graph
        let nt = self.triangles.len();
        let mut seen = vec![false; nt];
        let mut stack = vec![0usize];
        seen[0] = true;
        while let Some(t) = stack.pop() {
            for &s in &self.triangles[t] {
                let u = self.tri_of(glue(s));
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        if seen.iter().any(|x| !x) {
            return Err(Error::BadTriangulation("disconnected".into()));
        }
        // vertices: corner (t,j) is the start of local side j
        let mut uf = UnionFind::new(3 * nt);
        for (t, tri) in self.triangles.iter().enumerate() {
            for (j, &s) in tri.iter().enumerate() {
                let (u, k) = self.loc[glue(s) as usize];
                let (u, k) = (u as usize, k as usize);
                uf.union(3 * t + j, 3 * u + (k + 1) % 3);
                uf.union(3 * t + (j + 1) % 3, 3 * u + k);
            }
        }
        let v = (0..3 * nt).filter(|&i| uf.find(i) == i).count() as i64;
        let chi = v - self.num_edges() as i64 + nt as i64;
        if chi != 2 - 2 * self.genus as i64 {
            return Err(Error::BadTriangulation(format!(
                "euler characteristic {chi}"
            )));
        }
        Ok(())
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn num_edges(&self) -> usize {
        6 * self.genus - 3
    }
    pub fn num_triangles(&self) -> usize {
        self.triangles.len()
    }
    pub fn triangles(&self) -> &[[Side; 3]] {
        &self.triangles
    }
    #[inline]
    pub fn tri_of(&self, s: Side) -> usize {
        self.loc[s as usize].0 as usize
    }
    #[inline]
    pub fn local_of(&self, s: Side) -> usize {
        self.loc[s as usize].1 as usize
    }
    #[inline]
    pub fn side_at(&self, t: usize, j: usize) -> Side {
        self.triangles[t][j]
    }
    pub fn labels(&self) -> &[(String, Vec<u64>)] {
        &self.labels
    }

    pub fn fixture(&self, name: &str) -> Option<NormalMulticurve> {
        self.labels
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, c)| NormalMulticurve {
                genus: self.genus,
                coords: c.clone(),
            })
    }

    /// The chain c1..c(2g+1).
    pub fn chain(&self) -> Vec<NormalMulticurve> {
        (1..=2 * self.genus + 1)
            .map(|i| self.fixture(&format!("c{i}")).unwrap())
            .collect()
    }

    pub fn to_doc(&self) -> SurfaceDoc {
        SurfaceDoc {
            genus: self.genus,
            edges: self.num_edges(),
            triangles: self.triangles.clone(),
            gluing: (0..self.num_edges() as u32)
                .map(|e| [2 * e, 2 * e + 1])
                .collect(),
        }
    }

    pub fn from_doc(doc: &SurfaceDoc) -> Result<Self> {
        if doc.edges != 6 * doc.genus.max(2) - 3 {
            return Err(Error::BadTriangulation("edge count".into()));
        }
        for (i, g) in doc.gluing.iter().enumerate() {
            if g[0] != 2 * i as u32 || g[1] != 2 * i as u32 + 1 {
                return Err(Error::BadTriangulation(
                    "gluing must pair 2e with 2e+1".into(),
                ));
            }
        }
        let mut s = Self::from_triangles(doc.genus, doc.triangles.clone())?;
        if let Ok(c) = new_surface(doc.genus) {
            if c.triangles == s.triangles {
                s.labels = c.labels.clone();
            }
        }
        Ok(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceDoc {
    pub genus: usize,
    pub edges: usize,
    pub triangles: Vec<[Side; 3]>,
    pub gluing: Vec<[Side; 2]>,
}

/// Polygon side `j` of the 4g-gon as an edge-side; block k is a_k b_k a_k^-1 b_k^-1.
fn polygon_side(j: usize) -> Side {
    let k = j / 4;
    match j % 4 {
        0 => (2 * (2 * k)) as Side,
        1 => (2 * (2 * k + 1)) as Side,
        2 => (2 * (2 * k) + 1) as Side,
        _ => (2 * (2 * k + 1) + 1) as Side,
    }
}

fn fan_triangles(g: usize) -> Vec<[Side; 3]> {
    let n = 4 * g;
    let diag = |j: usize| (2 * g + (j - 2)) as Side; // edge of the diagonal 0 -> j
    (0..n - 2)
        .map(|i| {
            let s0 = if i == 0 {
                polygon_side(0)
            } else {
                2 * diag(i + 1)
            };
            let s1 = polygon_side(i + 1);
            let s2 = if i == n - 3 {
                polygon_side(n - 1)
            } else {
                2 * diag(i + 2) + 1
            };
            [s0, s1, s2]
        })
        .collect()
}

fn polygon_side_tri(g: usize, j: usize) -> (usize, usize) {
    let n = 4 * g;
    if j == 0 {
        (0, 0)
    } else if j == n - 1 {
        (n - 3, 2)
    } else {
        (j - 1, 1)
    }
}

fn partner(j: usize) -> usize {
    let base = 4 * (j / 4);
    match j % 4 {
        0 => base + 2,
        1 => base + 3,
        2 => base,
        _ => base + 1,
    }
}

/// Walk of a curve drawn as straight chords inside the polygon; each chord is (from side, to side).
pub fn chord_walk(surf: &TriangulatedSurface, chords: &[(usize, usize)]) -> Vec<Side> {
    let g = surf.genus;
    let mut w = Vec::new();
    for (idx, &(a, b)) in chords.iter().enumerate() {
        let next = chords[(idx + 1) % chords.len()].0;
        debug_assert_eq!(partner(b), next);
        let (ta, _) = polygon_side_tri(g, a);
        let (tb, lb) = polygon_side_tri(g, b);
        if ta < tb {
            for t in ta..tb {
                w.push(surf.side_at(t, 2));
            }
        } else {
            for t in (tb + 1..=ta).rev() {
                w.push(surf.side_at(t, 0));
            }
        }
        w.push(surf.side_at(tb, lb));
    }
    w
}

/// The chain as walks: alpha_0, beta_0, e_0, beta_1, e_1, ..., beta_{g-1}, alpha_{g-1}.
/// Connectors past the first are straightened inside their handle so consecutive ones are disjoint.
fn chain_walks(s: &TriangulatedSurface) -> Vec<Vec<Side>> {
    let g = s.genus;
    let cw = |ch: &[(usize, usize)]| walk::reduce(&chord_walk(s, ch));
    let alpha = |k: usize| cw(&[(4 * k, 4 * k + 2)]);
    let beta = |k: usize| cw(&[(4 * k + 1, 4 * k + 3)]);
    let mut out = vec![alpha(0), beta(0)];
    for k in 0..g - 1 {
        let mut e = cw(&[(4 * k, 4 * k + 6), (4 * k + 4, 4 * k + 2)]);
        if k >= 1 {
            let ta = walk::TwistCurve::new(s, &alpha(k)).expect("simple");
            let tb = walk::TwistCurve::new(s, &beta(k)).expect("simple");
            for t in [&tb, &ta, &ta, &tb] {
                e = walk::twist_walk(s, t, &e, false);
            }
        }
        out.push(e);
        out.push(beta(k + 1));
    }
    out.push(alpha(g - 1));
    out
}

pub fn new_surface(genus: usize) -> Result<TriangulatedSurface> {
    if genus < 2 {
        return Err(Error::InvalidGenus(genus));
    }
    let mut s = TriangulatedSurface::from_triangles(genus, fan_triangles(genus))?;
    let labels = chain_walks(&s)
        .iter()
        .enumerate()
        .map(|(i, w)| (format!("c{}", i + 1), walk::coords(s.num_edges(), w)))
        .collect();
    s.labels = labels;
    Ok(s)
}

/// Shared canonical surface for a genus.
pub fn surface(genus: usize) -> Result<Arc<TriangulatedSurface>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<TriangulatedSurface>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(s) = cache.lock().unwrap().get(&genus) {
        return Ok(s.clone());
    }
    let s = Arc::new(new_surface(genus)?);
    cache.lock().unwrap().insert(genus, s.clone());
    Ok(s)
}

pub fn genus_from_len(n: usize) -> Result<usize> {
    if n < 9 || !(n + 3).is_multiple_of(6) {
        return Err(Error::WrongLength {
            expected: 6 * ((n + 3) / 6).max(2) - 3,
            found: n,
        });
    }
    Ok((n + 3) / 6)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalMulticurve {
    genus: usize,
    coords: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct CoordsDoc {
    coords: Vec<u64>,
}

impl Serialize for NormalMulticurve {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoordsDoc {
            coords: self.coords.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for NormalMulticurve {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let doc = CoordsDoc::deserialize(d)?;
        let g = genus_from_len(doc.coords.len()).map_err(serde::de::Error::custom)?;
        let s = surface(g).map_err(serde::de::Error::custom)?;
        validate_normal(&s, &doc.coords).map_err(serde::de::Error::custom)
    }
}

impl NormalMulticurve {
    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn coords(&self) -> &[u64] {
        &self.coords
    }
    pub fn is_empty(&self) -> bool {
        self.coords.iter().all(|&c| c == 0)
    }
    pub fn surface(&self) -> Arc<TriangulatedSurface> {
        surface(self.genus).expect("genus validated at construction")
    }
    pub fn empty(genus: usize) -> Self {
        NormalMulticurve {
            genus,
            coords: vec![0; 6 * genus - 3],
        }
    }
    /// Trusted constructor for coordinates produced by this crate.
    pub(crate) fn from_raw(genus: usize, coords: Vec<u64>) -> Self {
        NormalMulticurve { genus, coords }
    }
    pub fn scaled(&self, k: u64) -> Self {
        NormalMulticurve {
            genus: self.genus,
            coords: self.coords.iter().map(|c| c * k).collect(),
        }
    }
    pub fn sum(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::SurfaceMismatch);
        }
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + b)
            .collect();
        Ok(NormalMulticurve {
            genus: self.genus,
            coords,
        })
    }
    pub fn size(&self) -> u64 {
        self.coords.iter().sum()
    }
}

pub fn validate_normal(surf: &TriangulatedSurface, coords: &[u64]) -> Result<NormalMulticurve> {
    let ne = surf.num_edges();
    if coords.len() != ne {
        return Err(Error::WrongLength {
            expected: ne,
            found: coords.len(),
        });
    }
    for (t, tri) in surf.triangles().iter().enumerate() {
        let [a, b, c] = tri.map(|s| coords[edge_of(s)] as u128);
        if (a + b + c) % 2 != 0 {
            return Err(Error::ViolatedParity(t));
        }
        if a > b + c || b > a + c || c > a + b {
            return Err(Error::ViolatedTriangleInequality(t));
        }
    }
    Ok(NormalMulticurve {
        genus: surf.genus(),
        coords: coords.to_vec(),
    })
}

/// Connected components with multiplicities, sorted by coordinates.
pub fn trace_components(m: &NormalMulticurve) -> Result<Vec<(NormalMulticurve, u64)>> {
    let surf = m.surface();
    let mut counts: HashMap<Vec<u64>, u64> = HashMap::new();
    for comp in walk::trace(&surf, &m.coords) {
        let c = walk::coords(surf.num_edges(), &comp);
        if c.iter().all(|&x| x == 2) {
            return Err(Error::TrivialComponent);
        }
        *counts.entry(c).or_default() += 1;
    }
    let mut out: Vec<_> = counts
        .into_iter()
        .map(|(c, k)| {
            (
                NormalMulticurve {
                    genus: m.genus,
                    coords: c,
                },
                k,
            )
        })
        .collect();
    out.sort();
    Ok(out)
}

/// A single connected essential curve.
pub fn primitive(m: &NormalMulticurve) -> Result<NormalMulticurve> {
    let comps = trace_components(m)?;
    match comps.as_slice() {
        [(c, 1)] => Ok(c.clone()),
        [] => Err(Error::InessentialCurve),
        _ => Err(Error::NotSimple),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveSide {
    Left,
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutPiece {
    pub genus: usize,
    pub boundary_count: usize,
    /// (index into the system, side of that curve the piece lies on)
    pub boundary_map: Vec<(usize, CurveSide)>,
    /// Triangles the piece meets.
    pub carrier: Vec<usize>,
}

impl CutPiece {
    pub fn euler_char(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }
    pub fn is_essential(&self) -> bool {
        self.euler_char() < 0
    }
    /// Pieces are identified by their boundary sides; the boundaryless piece is the whole surface.
    pub fn same_piece(&self, other: &CutPiece) -> bool {
        let mut a = self.boundary_map.clone();
        let mut b = other.boundary_map.clone();
        a.sort();
        b.sort();
        a == b
    }
}

pub fn cut_along(surf: &TriangulatedSurface, system: &[NormalMulticurve]) -> Result<Vec<CutPiece>> {
    for c in system {
        if c.genus != surf.genus() {
            return Err(Error::SurfaceMismatch);
        }
        primitive(c)?;
    }
    crate::overlay::cut_pieces(surf, system)
}

pub(crate) struct UnionFind {
    p: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            p: (0..n).collect(),
        }
    }
    pub fn find(&mut self, mut x: usize) -> usize {
        while self.p[x] != x {
            self.p[x] = self.p[self.p[x]];
            x = self.p[x];
        }
        x
    }
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        self.p[a.max(b)] = a.min(b);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        let s = new_surface(2).unwrap();
        assert_eq!((s.num_edges(), s.num_triangles()), (9, 6));
        let s = new_surface(3).unwrap();
        assert_eq!((s.num_edges(), s.num_triangles()), (15, 10));
        assert_eq!(new_surface(1), Err(Error::InvalidGenus(1)));
    }

    #[test]
    fn chain_is_primitive() {
        for g in 2..=4 {
            let s = new_surface(g).unwrap();
            let ch = s.chain();
            assert_eq!(ch.len(), 2 * g + 1);
            for c in &ch {
                validate_normal(&s, c.coords()).unwrap();
                assert_eq!(primitive(c).unwrap(), *c);
            }
        }
    }

    #[test]
    fn components_of_sums() {
        let s = new_surface(2).unwrap();
        let c1 = s.fixture("c1").unwrap();
        let c3 = s.fixture("c3").unwrap();
        let comps = trace_components(&c1.sum(&c3).unwrap()).unwrap();
        let mut want = vec![(c1.clone(), 1), (c3, 1)];
        want.sort();
        assert_eq!(comps, want);
        assert_eq!(trace_components(&c1.scaled(2)).unwrap(), vec![(c1, 2)]);
        assert!(trace_components(&NormalMulticurve::empty(2))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn vertex_link_is_trivial() {
        let s = new_surface(2).unwrap();
        let m = validate_normal(&s, &[2; 9]).unwrap();
        assert_eq!(trace_components(&m), Err(Error::TrivialComponent));
    }

    #[test]
    fn parity_error() {
        let s = new_surface(2).unwrap();
        let mut v = vec![0; 9];
        v[0] = 1;
        assert!(matches!(
            validate_normal(&s, &v),
            Err(Error::ViolatedParity(_))
        ));
    }

    #[test]
    fn doc_roundtrip() {
        let s = new_surface(3).unwrap();
        let d = s.to_doc();
        let t = TriangulatedSurface::from_doc(&d).unwrap();
        assert_eq!(s, t);
    }
}
