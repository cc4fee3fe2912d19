//! Overlays of curves on the triangulated surface: the cell structure cut out by the curves
//! together with the triangulation, face and region census, and bigon removal.

use crate::error::{Error, Result};
use crate::surface::{
    edge_of, glue, CurveSide, CutPiece, NormalMulticurve, Side, TriangulatedSurface, UnionFind,
};
use crate::walk;

#[derive(Clone, Debug)]
struct PointRec {
    exit: Side,
    curve: u32,
}

#[derive(Clone, Debug)]
pub struct OCurve {
    pub pts: Vec<u32>,
    pub family: u32,
}

/// Explicit curves drawn transversely to the triangulation. Points on each edge are ordered from
/// tail to head; each curve is a cyclic list of points, and consecutive points share a triangle.
#[derive(Clone, Debug)]
pub struct Overlay<'a> {
    surf: &'a TriangulatedSurface,
    pts: Vec<PointRec>,
    edges: Vec<Vec<u32>>,
    pub curves: Vec<OCurve>,
}

const V0: u32 = 0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HKind {
    Seg { edge: u32, k: u32 },
    Piece { chord: u32, k: u32 },
}

#[derive(Clone, Debug)]
pub struct ChordRec {
    pub curve: u32,
    pub arc: u32,
    pub tri: u32,
    pub from_pid: u32,
    pub to_pid: u32,
    from: i128,
    to: i128,
    /// crossing ids in order along the chord
    pub xs: Vec<u32>,
}

#[derive(Clone, Debug)]
pub struct Crossing {
    pub chords: [u32; 2],
    pub curves: [u32; 2],
}

#[derive(Clone, Debug)]
pub struct Cycle {
    pub region: u32,
    pub hs: Vec<u32>,
    pub corners: usize,
}

#[derive(Clone, Debug, Default)]
pub struct Region {
    pub faces: usize,
    pub segs: usize,
    pub has_vertex: bool,
    pub cycles: Vec<u32>,
}

impl Region {
    pub fn euler_char(&self) -> i64 {
        self.faces as i64 - self.segs as i64 + self.has_vertex as i64
    }
    pub fn genus(&self) -> i64 {
        (2 - self.euler_char() - self.cycles.len() as i64) / 2
    }
    pub fn is_disk(&self) -> bool {
        self.euler_char() == 1 && self.cycles.len() == 1
    }
}

/// The cell structure of an overlay.
pub struct Analysis {
    npts: u32,
    pub chords: Vec<ChordRec>,
    pub crossings: Vec<Crossing>,
    seg_base: Vec<u32>,
    piece_base: Vec<u32>,
    kinds: Vec<HKind>,
    origin: Vec<u32>,
    face: Vec<u32>,
    pub nfaces: usize,
    region_of_face: Vec<u32>,
    pub regions: Vec<Region>,
    pub cycles: Vec<Cycle>,
    /// chord arriving at / leaving each point
    dep: Vec<u32>,
}

#[inline]
fn pcoord(k: i128) -> (i128, i128) {
    (k, k * k)
}

#[inline]
fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

#[inline]
fn sub(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
    (a.0 - b.0, a.1 - b.1)
}

#[inline]
fn between(lo: i128, hi: i128, x: i128) -> bool {
    if lo < hi {
        lo < x && x < hi
    } else {
        x > lo || x < hi
    }
}

impl Analysis {
    pub fn kind(&self, h: u32) -> HKind {
        self.kinds[(h >> 1) as usize]
    }
    pub fn is_seg(&self, h: u32) -> bool {
        matches!(self.kind(h), HKind::Seg { .. })
    }
    pub fn end(&self, h: u32) -> u32 {
        self.origin[(h ^ 1) as usize]
    }
    pub fn vertex_point(&self, v: u32) -> Option<u32> {
        (v >= 1 && v <= self.npts).then(|| v - 1)
    }
    pub fn vertex_crossing(&self, v: u32) -> Option<u32> {
        (v > self.npts).then(|| v - 1 - self.npts)
    }
    pub fn face_of(&self, h: u32) -> u32 {
        self.face[h as usize]
    }
    pub fn region_of_half(&self, h: u32) -> u32 {
        self.region_of_face[self.face[h as usize] as usize]
    }
    pub fn seg_half(&self, edge: usize, k: usize, forward: bool) -> u32 {
        2 * (self.seg_base[edge] + k as u32) + (!forward) as u32
    }
    pub fn piece_chord(&self, h: u32) -> Option<u32> {
        match self.kind(h) {
            HKind::Piece { chord, .. } => Some(chord),
            _ => None,
        }
    }
    pub fn curve_of_half(&self, h: u32) -> Option<u32> {
        self.piece_chord(h).map(|c| self.chords[c as usize].curve)
    }
    /// A forward half-edge of the first piece of the chord leaving point `pid`.
    pub fn leaving_half(&self, pid: u32) -> u32 {
        2 * self.piece_base[self.dep[pid as usize] as usize]
    }
    pub fn num_halves(&self) -> u32 {
        2 * self.kinds.len() as u32
    }
    /// Some segment half-edge inside each region.
    pub fn region_segs(&self) -> Vec<Option<u32>> {
        let mut out = vec![None; self.regions.len()];
        for h in 0..self.num_halves() {
            if self.is_seg(h) {
                out[self.region_of_half(h) as usize].get_or_insert(h);
            }
        }
        out
    }
    pub fn crossings_between(&self, a: u32, b: u32) -> usize {
        self.crossings
            .iter()
            .filter(|x| {
                (x.curves[0] == a && x.curves[1] == b) || (x.curves[0] == b && x.curves[1] == a)
            })
            .count()
    }
    pub fn crossings_of(&self, a: u32) -> usize {
        self.crossings
            .iter()
            .filter(|x| x.curves.contains(&a))
            .count()
    }
    /// Triangle containing face `f`.
    pub fn face_triangle(&self, surf: &TriangulatedSurface, h: u32) -> usize {
        match self.kind(h) {
            HKind::Piece { chord, .. } => self.chords[chord as usize].tri as usize,
            HKind::Seg { edge, .. } => {
                let s = 2 * edge + (h & 1);
                surf.tri_of(s)
            }
        }
    }
    /// Crossings along a curve in order, with the chord of the curve at each.
    pub fn crossings_along(&self, ov: &Overlay, curve: u32) -> Vec<u32> {
        let c = &ov.curves[curve as usize];
        let mut out = Vec::new();
        for &p in &c.pts {
            let ch = &self.chords[self.dep[p as usize] as usize];
            out.extend_from_slice(&ch.xs);
        }
        out
    }
}

impl<'a> Overlay<'a> {
    pub fn new(surf: &'a TriangulatedSurface) -> Self {
        Overlay {
            surf,
            pts: Vec::new(),
            edges: vec![Vec::new(); surf.num_edges()],
            curves: Vec::new(),
        }
    }

    pub fn surface(&self) -> &'a TriangulatedSurface {
        self.surf
    }

    /// Adds the components of a normal multicurve above everything already on each edge.
    pub fn add_normal(&mut self, coords: &[u64], family: u32) -> Vec<usize> {
        let comps = walk::trace_positioned(self.surf, coords);
        let mut per_edge: Vec<Vec<(u64, u32)>> = vec![Vec::new(); self.edges.len()];
        let mut ids = Vec::new();
        for comp in comps {
            let cid = self.curves.len() as u32;
            let mut pts = Vec::with_capacity(comp.len());
            for (s, u) in comp {
                let pid = self.pts.len() as u32;
                self.pts.push(PointRec {
                    exit: s,
                    curve: cid,
                });
                per_edge[edge_of(s)].push((u, pid));
                pts.push(pid);
            }
            self.curves.push(OCurve { pts, family });
            ids.push(cid as usize);
        }
        for (e, mut v) in per_edge.into_iter().enumerate() {
            v.sort();
            self.edges[e].extend(v.into_iter().map(|x| x.1));
        }
        ids
    }

    /// Copy containing only the chosen curves, with a map from new point ids to old ones.
    pub fn sub(&self, keep: &[usize]) -> (Overlay<'a>, Vec<u32>) {
        let mut newid = vec![u32::MAX; self.pts.len()];
        let mut back = Vec::new();
        let mut ov = Overlay::new(self.surf);
        for (ci, &c) in keep.iter().enumerate() {
            let mut pts = Vec::new();
            for &p in &self.curves[c].pts {
                let np = ov.pts.len() as u32;
                ov.pts.push(PointRec {
                    exit: self.pts[p as usize].exit,
                    curve: ci as u32,
                });
                newid[p as usize] = np;
                back.push(p);
                pts.push(np);
            }
            ov.curves.push(OCurve {
                pts,
                family: self.curves[c].family,
            });
        }
        for (e, list) in self.edges.iter().enumerate() {
            ov.edges[e] = list
                .iter()
                .filter_map(|&p| Some(newid[p as usize]).filter(|&x| x != u32::MAX))
                .collect();
        }
        (ov, back)
    }

    pub fn walk_of(&self, curve: usize) -> Vec<Side> {
        self.curves[curve]
            .pts
            .iter()
            .map(|&p| self.pts[p as usize].exit)
            .collect()
    }

    /// Normal coordinates of a curve after pulling it tight.
    pub fn normal_coords(&self, curve: usize) -> Vec<u64> {
        walk::coords(self.edges.len(), &walk::reduce(&self.walk_of(curve)))
    }

    pub fn analyze(&self) -> Analysis {
        let surf = self.surf;
        let ne = self.edges.len();
        let nt = surf.num_triangles();
        let npts = self.pts.len();
        let mut idx = vec![u32::MAX; npts];
        for list in &self.edges {
            for (i, &p) in list.iter().enumerate() {
                idx[p as usize] = i as u32;
            }
        }
        // boundary keys per triangle, corners included
        let mut key_l = vec![0i128; npts];
        let mut key_r = vec![0i128; npts];
        for t in 0..nt {
            let mut k: i128 = 0;
            for j in 0..3 {
                k += 1;
                let s = surf.side_at(t, j);
                let list = &self.edges[edge_of(s)];
                if s.is_multiple_of(2) {
                    for &p in list {
                        key_l[p as usize] = k;
                        k += 1;
                    }
                } else {
                    for &p in list.iter().rev() {
                        key_r[p as usize] = k;
                        k += 1;
                    }
                }
            }
        }
        let key = |p: u32, s: Side| {
            if s.is_multiple_of(2) {
                key_l[p as usize]
            } else {
                key_r[p as usize]
            }
        };
        // chords
        let mut chords = Vec::new();
        let mut arr = vec![u32::MAX; npts];
        let mut dep = vec![u32::MAX; npts];
        let mut by_tri: Vec<Vec<u32>> = vec![Vec::new(); nt];
        for (ci, c) in self.curves.iter().enumerate() {
            let m = c.pts.len();
            for i in 0..m {
                let p = c.pts[i];
                let q = c.pts[(i + 1) % m];
                let sp = glue(self.pts[p as usize].exit);
                let sq = self.pts[q as usize].exit;
                let t = surf.tri_of(sq);
                debug_assert_eq!(t, surf.tri_of(sp));
                let id = chords.len() as u32;
                chords.push(ChordRec {
                    curve: ci as u32,
                    arc: i as u32,
                    tri: t as u32,
                    from_pid: p,
                    to_pid: q,
                    from: key(p, sp),
                    to: key(q, sq),
                    xs: Vec::new(),
                });
                dep[p as usize] = id;
                arr[q as usize] = id;
                by_tri[t].push(id);
            }
        }
        // crossings
        let mut crossings = Vec::new();
        for list in &by_tri {
            for (a, &c1) in list.iter().enumerate() {
                for &c2 in &list[a + 1..] {
                    let (x, y) = (&chords[c1 as usize], &chords[c2 as usize]);
                    if x.curve == y.curve {
                        debug_assert!(
                            between(x.from, x.to, y.from) == between(x.from, x.to, y.to),
                            "curve crosses itself"
                        );
                        continue;
                    }
                    if between(x.from, x.to, y.from) != between(x.from, x.to, y.to) {
                        let id = crossings.len() as u32;
                        crossings.push(Crossing {
                            chords: [c1, c2],
                            curves: [x.curve, y.curve],
                        });
                        chords[c1 as usize].xs.push(id);
                        chords[c2 as usize].xs.push(id);
                    }
                }
            }
        }
        // order along chords by exact line parameters
        for ci in 0..chords.len() {
            if chords[ci].xs.len() < 2 {
                continue;
            }
            let p = pcoord(chords[ci].from);
            let q = pcoord(chords[ci].to);
            let mut xs: Vec<(i128, i128, u32)> = chords[ci]
                .xs
                .iter()
                .map(|&x| {
                    let o = crossings[x as usize].chords;
                    let other = if o[0] as usize == ci { o[1] } else { o[0] };
                    let r = pcoord(chords[other as usize].from);
                    let s = pcoord(chords[other as usize].to);
                    let d = sub(s, r);
                    let mut num = cross(sub(r, p), d);
                    let mut den = cross(sub(q, p), d);
                    if den < 0 {
                        num = -num;
                        den = -den;
                    }
                    (num, den, x)
                })
                .collect();
            xs.sort_by(|a, b| (a.0 * b.1).cmp(&(b.0 * a.1)));
            chords[ci].xs = xs.into_iter().map(|x| x.2).collect();
        }
        // half-edges: segments then pieces
        let mut kinds = Vec::new();
        let mut seg_base = vec![0u32; ne];
        for e in 0..ne {
            seg_base[e] = kinds.len() as u32;
            for k in 0..=self.edges[e].len() {
                kinds.push(HKind::Seg {
                    edge: e as u32,
                    k: k as u32,
                });
            }
        }
        let mut piece_base = vec![0u32; chords.len()];
        for (c, ch) in chords.iter().enumerate() {
            piece_base[c] = kinds.len() as u32;
            for k in 0..=ch.xs.len() {
                kinds.push(HKind::Piece {
                    chord: c as u32,
                    k: k as u32,
                });
            }
        }
        let nh = 2 * kinds.len();
        let pv = |p: u32| 1 + p;
        let xv = |x: u32| 1 + npts as u32 + x;
        let mut origin = vec![0u32; nh];
        for (i, kd) in kinds.iter().enumerate() {
            let (f, b) = match *kd {
                HKind::Seg { edge, k } => {
                    let list = &self.edges[edge as usize];
                    let n = list.len() as u32;
                    let f = if k == 0 { V0 } else { pv(list[k as usize - 1]) };
                    let b = if k == n { V0 } else { pv(list[k as usize]) };
                    (f, b)
                }
                HKind::Piece { chord, k } => {
                    let ch = &chords[chord as usize];
                    let r = ch.xs.len() as u32;
                    let f = if k == 0 {
                        pv(ch.from_pid)
                    } else {
                        xv(ch.xs[k as usize - 1])
                    };
                    let b = if k == r {
                        pv(ch.to_pid)
                    } else {
                        xv(ch.xs[k as usize])
                    };
                    (f, b)
                }
            };
            origin[2 * i] = f;
            origin[2 * i + 1] = b;
        }
        let mut next_ccw = vec![u32::MAX; nh];
        let mut link = |ring: &[u32]| {
            for i in 0..ring.len() {
                next_ccw[ring[i] as usize] = ring[(i + 1) % ring.len()];
            }
        };
        let last_piece_back =
            |c: u32| 2 * (piece_base[c as usize] + chords[c as usize].xs.len() as u32) + 1;
        for (e, list) in self.edges.iter().enumerate() {
            for (k, &p) in list.iter().enumerate() {
                let head = 2 * (seg_base[e] + k as u32 + 1);
                let tail = 2 * (seg_base[e] + k as u32) + 1;
                let a = last_piece_back(arr[p as usize]);
                let d = 2 * piece_base[dep[p as usize] as usize];
                let (left, right) = if self.pts[p as usize].exit.is_multiple_of(2) {
                    (a, d)
                } else {
                    (d, a)
                };
                link(&[head, left, tail, right]);
            }
        }
        for (x, cr) in crossings.iter().enumerate() {
            let [c1, c2] = cr.chords;
            let r1 = chords[c1 as usize]
                .xs
                .iter()
                .position(|&y| y == x as u32)
                .unwrap() as u32;
            let r2 = chords[c2 as usize]
                .xs
                .iter()
                .position(|&y| y == x as u32)
                .unwrap() as u32;
            let p1 = 2 * (piece_base[c1 as usize] + r1 + 1);
            let m1 = 2 * (piece_base[c1 as usize] + r1) + 1;
            let p2 = 2 * (piece_base[c2 as usize] + r2 + 1);
            let m2 = 2 * (piece_base[c2 as usize] + r2) + 1;
            let d1 = sub(
                pcoord(chords[c1 as usize].to),
                pcoord(chords[c1 as usize].from),
            );
            let d2 = sub(
                pcoord(chords[c2 as usize].to),
                pcoord(chords[c2 as usize].from),
            );
            if cross(d1, d2) > 0 {
                link(&[p1, p2, m1, m2]);
            } else {
                link(&[p1, m2, m1, p2]);
            }
        }
        let out_start = |s: Side| {
            let e = edge_of(s);
            if s.is_multiple_of(2) {
                2 * seg_base[e]
            } else {
                2 * (seg_base[e] + self.edges[e].len() as u32) + 1
            }
        };
        let out_end = |s: Side| {
            let e = edge_of(s);
            if s.is_multiple_of(2) {
                2 * (seg_base[e] + self.edges[e].len() as u32) + 1
            } else {
                2 * seg_base[e]
            }
        };
        for t in 0..nt {
            for j in 0..3 {
                let a = out_start(surf.side_at(t, j));
                let b = out_end(surf.side_at(t, (j + 2) % 3));
                next_ccw[a as usize] = b;
            }
        }
        let mut prev_ccw = vec![u32::MAX; nh];
        for h in 0..nh {
            debug_assert!(next_ccw[h] != u32::MAX);
            prev_ccw[next_ccw[h] as usize] = h as u32;
        }
        // faces
        let mut face = vec![u32::MAX; nh];
        let mut nfaces = 0u32;
        for h0 in 0..nh {
            if face[h0] != u32::MAX {
                continue;
            }
            let mut h = h0 as u32;
            while face[h as usize] == u32::MAX {
                face[h as usize] = nfaces;
                h = prev_ccw[(h ^ 1) as usize];
            }
            nfaces += 1;
        }
        let nfaces = nfaces as usize;
        let mut uf = UnionFind::new(nfaces);
        let nseg = piece_base.first().copied().unwrap_or(kinds.len() as u32) as usize;
        for s in 0..nseg {
            uf.union(face[2 * s] as usize, face[2 * s + 1] as usize);
        }
        let mut rid = vec![u32::MAX; nfaces];
        let mut regions: Vec<Region> = Vec::new();
        let mut region_of_face = vec![0u32; nfaces];
        for f in 0..nfaces {
            let r = uf.find(f);
            if rid[r] == u32::MAX {
                rid[r] = regions.len() as u32;
                regions.push(Region::default());
            }
            region_of_face[f] = rid[r];
            regions[rid[r] as usize].faces += 1;
        }
        for s in 0..nseg {
            regions[region_of_face[face[2 * s] as usize] as usize].segs += 1;
        }
        regions[region_of_face[face[2 * seg_base[0] as usize] as usize] as usize].has_vertex = true;
        // boundary cycles of regions
        let mut cyc_of = vec![u32::MAX; nh];
        let mut cycles = Vec::new();
        for h0 in 2 * nseg..nh {
            if cyc_of[h0] != u32::MAX {
                continue;
            }
            let id = cycles.len() as u32;
            let mut hs = Vec::new();
            let mut corners = 0;
            let mut h = h0 as u32;
            while cyc_of[h as usize] == u32::MAX {
                cyc_of[h as usize] = id;
                hs.push(h);
                let v = origin[(h ^ 1) as usize];
                if v > npts as u32 {
                    corners += 1;
                }
                let mut y = prev_ccw[(h ^ 1) as usize];
                while (y as usize) < 2 * nseg {
                    y = prev_ccw[y as usize];
                }
                h = y;
            }
            let region = region_of_face[face[h0] as usize];
            regions[region as usize].cycles.push(id);
            cycles.push(Cycle {
                region,
                hs,
                corners,
            });
        }
        Analysis {
            npts: npts as u32,
            chords,
            crossings,
            seg_base,
            piece_base,
            kinds,
            origin,
            face,
            nfaces,
            region_of_face,
            regions,
            cycles,
            dep,
        }
    }

    fn find_bigon(&self, an: &Analysis) -> Option<u32> {
        an.regions
            .iter()
            .filter(|r| r.euler_char() == 1 && r.cycles.len() == 1)
            .map(|r| r.cycles[0])
            .find(|&c| an.cycles[c as usize].corners == 2)
    }

    /// Point and travel direction where half-edge `h` of `an` leaves through an edge, in this overlay's ids.
    fn walk_exit(&self, an: &Analysis, h: u32, pmap: Option<&[u32]>) -> (u32, Side) {
        let pid = an
            .vertex_point(an.end(h))
            .expect("bigon side passes through a crossing");
        let pid = pmap.map_or(pid, |m| m[pid as usize]);
        let ex = self.pts[pid as usize].exit;
        (pid, if h.is_multiple_of(2) { ex } else { glue(ex) })
    }

    fn insert_near(&mut self, x: u32, before: bool, exit: Side, curve: u32) -> u32 {
        let e = edge_of(exit);
        let pid = self.pts.len() as u32;
        self.pts.push(PointRec { exit, curve });
        let i = self.edges[e].iter().position(|&p| p == x).unwrap();
        self.edges[e].insert(if before { i } else { i + 1 }, pid);
        pid
    }

    /// Pushes one side of a bigon across it, removing its two corners.
    /// `an` may describe a sub-overlay, with its point and curve ids translated through `map`.
    fn remove_bigon(&mut self, an: &Analysis, cyc: u32, map: Option<(&[u32], &[usize])>) {
        let pmap = map.map(|m| m.0);
        let cmap = |c: u32| map.map_or(c, |m| m.1[c as usize] as u32);
        let hs = &an.cycles[cyc as usize].hs;
        let n = hs.len();
        let corner: Vec<usize> = (0..n)
            .filter(|&i| an.vertex_crossing(an.end(hs[i])).is_some())
            .collect();
        let (i1, i2) = (corner[0], corner[1]);
        let side_a: Vec<u32> = (i1 + 1..=i2).map(|i| hs[i]).collect();
        let side_b: Vec<u32> = (i2 + 1..i1 + 1 + n).map(|i| hs[i % n]).collect();
        let ca = cmap(an.curve_of_half(side_a[0]).unwrap());
        let cb = cmap(an.curve_of_half(side_b[0]).unwrap());
        let rank = |c: u32| (self.curves[c as usize].family, c);
        let (xs, ys, yc) = if rank(ca) > rank(cb) {
            (side_b, side_a, ca)
        } else {
            (side_a, side_b, cb)
        };
        let xp: Vec<(u32, Side)> = xs[..xs.len() - 1]
            .iter()
            .map(|&h| self.walk_exit(an, h, pmap))
            .collect();
        let yp: Vec<u32> = ys[..ys.len() - 1]
            .iter()
            .map(|&h| self.walk_exit(an, h, pmap).0)
            .collect();
        let y_fwd = ys[0] % 2 == 0;
        let ych = an.piece_chord(ys[0]).unwrap();
        let arc = an.chords[ych as usize].arc as usize;
        // remove old points of y
        let removed: Vec<u32> = if y_fwd {
            yp
        } else {
            yp.into_iter().rev().collect()
        };
        for &p in &removed {
            let e = edge_of(self.pts[p as usize].exit);
            self.edges[e].retain(|&q| q != p);
        }
        // new points hug x on the far side of the bigon
        let order: Vec<(u32, Side)> = if y_fwd {
            xp.iter().rev().map(|&(p, w)| (p, w)).collect()
        } else {
            xp.clone()
        };
        let mut newp = Vec::with_capacity(order.len());
        for (p, w) in order {
            let before = w % 2 == 0;
            let exit = if y_fwd { glue(w) } else { w };
            newp.push(self.insert_near(p, before, exit, yc));
        }
        let yl = &self.curves[yc as usize].pts;
        let m = yl.len();
        let rest: Vec<u32> = if removed.is_empty() {
            (1..=m).map(|j| yl[(arc + j) % m]).collect()
        } else {
            let i0 = yl.iter().position(|&p| p == removed[0]).unwrap();
            debug_assert!((0..removed.len()).all(|j| yl[(i0 + j) % m] == removed[j]));
            (removed.len()..m).map(|j| yl[(i0 + j) % m]).collect()
        };
        newp.extend(rest);
        self.curves[yc as usize].pts = newp;
    }

    /// Removes bigons until the curves are pairwise in minimal position.
    ///
    /// A bigon between two curves may be crossed by arcs of a third, so it need not be a region of
    /// the whole overlay; those are found in the overlay of the two curves alone.
    pub fn minimize(&mut self) -> Analysis {
        loop {
            let an = self.analyze();
            if let Some(c) = self.find_bigon(&an) {
                self.remove_bigon(&an, c, None);
                continue;
            }
            let mut pairs: Vec<(u32, u32)> = an
                .crossings
                .iter()
                .map(|x| (x.curves[0].min(x.curves[1]), x.curves[0].max(x.curves[1])))
                .collect();
            pairs.sort();
            let mut multi: Vec<(u32, u32)> = pairs
                .windows(2)
                .filter(|w| w[0] == w[1])
                .map(|w| w[0])
                .collect();
            multi.dedup();
            let mut moved = false;
            for (a, b) in multi {
                let keep = [a as usize, b as usize];
                let (sov, back) = self.sub(&keep);
                let san = sov.analyze();
                if let Some(c) = sov.find_bigon(&san) {
                    self.remove_bigon(&san, c, Some((&back, &keep)));
                    moved = true;
                    break;
                }
            }
            if !moved {
                return an;
            }
        }
    }

    /// Point ids of a curve whose exits, in order, match `walk` exactly.
    pub fn curve_points(&self, curve: usize) -> &[u32] {
        &self.curves[curve].pts
    }

    pub fn point_exit(&self, pid: u32) -> Side {
        self.pts[pid as usize].exit
    }

    pub fn point_curve(&self, pid: u32) -> u32 {
        self.pts[pid as usize].curve
    }

    /// Adds a parallel copy of a region boundary cycle, pushed slightly into the region.
    pub fn add_pushoff(&mut self, an: &Analysis, hs: &[u32], map: &[u32], family: u32) -> usize {
        let cid = self.curves.len() as u32;
        let mut pts = Vec::new();
        for &h in hs {
            if let Some(pid) = an.vertex_point(an.end(h)) {
                let ex = self.pts[map[pid as usize] as usize].exit;
                let w = if h % 2 == 0 { ex } else { glue(ex) };
                // region lies on the left: toward the head when crossing from the left triangle
                pts.push(self.insert_near(map[pid as usize], w % 2 != 0, w, cid));
            }
        }
        self.curves.push(OCurve { pts, family });
        cid as usize
    }

    /// Number of points of other curves lying before `pid` on its edge, counting only `keep` curves.
    pub fn rank_on_edge(&self, pid: u32, keep: &[bool]) -> usize {
        let e = edge_of(self.pts[pid as usize].exit);
        self.edges[e]
            .iter()
            .take_while(|&&p| p != pid)
            .filter(|&&p| keep[self.pts[p as usize].curve as usize])
            .count()
    }
}

/// Geometric intersection number of two primitive curves given by normal coordinates.
pub fn intersection(surf: &TriangulatedSurface, a: &[u64], b: &[u64]) -> u64 {
    if a.iter().all(|&x| x == 0) || b.iter().all(|&x| x == 0) {
        return 0;
    }
    let mut ov = Overlay::new(surf);
    ov.add_normal(a, 0);
    ov.add_normal(b, 1);
    ov.minimize().crossings.len() as u64
}

/// Whether two disjoint curves of a minimized overlay cobound an annulus.
pub fn cobound_annulus(an: &Analysis, a: u32, b: u32) -> bool {
    an.regions.iter().any(|r| {
        r.euler_char() == 0 && r.cycles.len() == 2 && {
            let cs: Vec<Option<u32>> = r
                .cycles
                .iter()
                .map(|&c| {
                    let hs = &an.cycles[c as usize].hs;
                    let first = an.curve_of_half(hs[0]);
                    hs.iter()
                        .all(|&h| an.curve_of_half(h) == first)
                        .then_some(first.unwrap())
                })
                .collect();
            matches!((cs[0], cs[1]), (Some(x), Some(y)) if (x == a && y == b) || (x == b && y == a))
        }
    })
}

/// Isotopy on the closed surface for primitive curves.
pub fn isotopic(surf: &TriangulatedSurface, a: &[u64], b: &[u64]) -> bool {
    if a == b {
        return true;
    }
    let mut ov = Overlay::new(surf);
    ov.add_normal(a, 0);
    ov.add_normal(b, 1);
    let an = ov.minimize();
    an.crossings.is_empty() && cobound_annulus(&an, 0, 1)
}

/// Regions of the complement of pairwise disjoint curves, as cut pieces.
pub(crate) fn regions_as_pieces(surf: &TriangulatedSurface, an: &Analysis) -> Vec<CutPiece> {
    an.regions
        .iter()
        .map(|r| {
            let mut boundary_map: Vec<(usize, CurveSide)> = r
                .cycles
                .iter()
                .map(|&c| {
                    let h = an.cycles[c as usize].hs[0];
                    let side = if h.is_multiple_of(2) {
                        CurveSide::Left
                    } else {
                        CurveSide::Right
                    };
                    (an.curve_of_half(h).unwrap() as usize, side)
                })
                .collect();
            boundary_map.sort();
            (r, boundary_map)
        })
        .enumerate()
        .map(|(ri, (r, boundary_map))| {
            let mut carrier: Vec<usize> = (0..an.face.len() as u32)
                .filter(|&h| an.region_of_half(h) == ri as u32)
                .map(|h| an.face_triangle(surf, h))
                .collect();
            carrier.sort();
            carrier.dedup();
            CutPiece {
                genus: r.genus() as usize,
                boundary_count: r.cycles.len(),
                boundary_map,
                carrier,
            }
        })
        .collect()
}

/// Minimized overlay of a disjoint system (family 0) and further curves (family 1), with the
/// pieces of the system and the piece containing each further curve.
pub struct Located<'a> {
    pub ov: Overlay<'a>,
    pub an: Analysis,
    pub nsys: usize,
    pub pieces: Vec<CutPiece>,
    /// piece index of every curve of the overlay past the system
    pub piece_of: Vec<usize>,
    sys_an: Analysis,
}

impl<'a> Located<'a> {
    /// Piece containing the region of the full overlay that holds segment half-edge `h`.
    pub fn piece_of_half(&self, h: u32) -> Option<usize> {
        let HKind::Seg { edge, k } = self.an.kind(h) else {
            return None;
        };
        let list = &self.ov.edges[edge as usize];
        let rank = list[..k as usize]
            .iter()
            .filter(|&&p| (self.ov.pts[p as usize].curve as usize) < self.nsys)
            .count();
        let sh = self
            .sys_an
            .seg_half(edge as usize, rank, h.is_multiple_of(2));
        Some(self.sys_an.region_of_half(sh) as usize)
    }
}

/// Curves of `extra` need not be disjoint from each other, only from the system.
pub fn locate<'a>(
    surf: &'a TriangulatedSurface,
    system: &[Vec<u64>],
    extra: &[Vec<u64>],
) -> Result<Located<'a>> {
    let mut ov = Overlay::new(surf);
    for c in system {
        ov.add_normal(c, 0);
    }
    let nsys = ov.curves.len();
    if nsys != system.len() {
        return Err(Error::NotSimple);
    }
    for (i, c) in extra.iter().enumerate() {
        let ids = ov.add_normal(c, 1 + i as u32);
        if ids.len() != 1 {
            return Err(Error::NotSimple);
        }
    }
    let an = ov.minimize();
    if an
        .crossings
        .iter()
        .any(|x| (x.curves[0] as usize) < nsys || (x.curves[1] as usize) < nsys)
    {
        return Err(Error::NotDisjoint);
    }
    let keep: Vec<usize> = (0..nsys).collect();
    let (sov, _) = ov.sub(&keep);
    let sys_an = sov.analyze();
    let pieces = regions_as_pieces(surf, &sys_an);
    let mut loc = Located {
        ov,
        an,
        nsys,
        pieces,
        piece_of: Vec::new(),
        sys_an,
    };
    let piece_of = (nsys..loc.ov.curves.len())
        .map(|c| {
            let p = loc.ov.curves[c].pts[0];
            let e = edge_of(loc.ov.pts[p as usize].exit);
            let k = loc.ov.edges[e].iter().position(|&q| q == p).unwrap();
            loc.piece_of_half(loc.an.seg_half(e, k, true)).unwrap()
        })
        .collect();
    loc.piece_of = piece_of;
    Ok(loc)
}

pub fn cut_pieces(
    surf: &TriangulatedSurface,
    system: &[NormalMulticurve],
) -> Result<Vec<CutPiece>> {
    let mut ov = Overlay::new(surf);
    for c in system {
        ov.add_normal(c.coords(), 0);
    }
    let an = ov.minimize();
    if !an.crossings.is_empty() {
        return Err(Error::NotDisjoint);
    }
    Ok(regions_as_pieces(surf, &an))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::new_surface;

    fn chain_matrix(g: usize) -> Vec<Vec<u64>> {
        let s = new_surface(g).unwrap();
        let ch = s.chain();
        ch.iter()
            .map(|a| {
                ch.iter()
                    .map(|b| intersection(&s, a.coords(), b.coords()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn chain_pattern() {
        for g in 2..=5 {
            let m = chain_matrix(g);
            for i in 0..m.len() {
                for j in 0..m.len() {
                    let want = if i.abs_diff(j) == 1 { 1 } else { 0 };
                    assert_eq!(m[i][j], want, "genus {g} c{} c{}", i + 1, j + 1);
                }
            }
        }
    }

    #[test]
    fn cut_counts() {
        let s = new_surface(2).unwrap();
        let c1 = s.fixture("c1").unwrap();
        let p = cut_pieces(&s, &[c1]).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!((p[0].genus, p[0].boundary_count), (1, 2));
        let p = cut_pieces(&s, &[]).unwrap();
        assert_eq!((p.len(), p[0].genus, p[0].boundary_count), (1, 2, 0));
    }

    #[test]
    fn isotopy_of_self() {
        let s = new_surface(2).unwrap();
        let c2 = s.fixture("c2").unwrap();
        assert!(isotopic(&s, c2.coords(), c2.coords()));
        let c4 = s.fixture("c4").unwrap();
        assert!(!isotopic(&s, c2.coords(), c4.coords()));
    }
}
