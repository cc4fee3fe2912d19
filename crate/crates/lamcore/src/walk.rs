//! Curves as cyclic walks in the dual graph: the sequence of edge-sides a curve exits through.

use crate::surface::{edge_of, glue, Side, TriangulatedSurface};

/// A point of a curve: the side it exits through and its position along the edge (from the tail).
pub type Pt = (Side, u64);

fn corner_counts(x: [u64; 3]) -> [u64; 3] {
    // corner j sits between local sides j-1 and j
    [0, 1, 2].map(|j| (x[(j + 2) % 3] + x[j] - x[(j + 1) % 3]) / 2)
}

/// Follows a normal curve with the given coordinates from the exit `p` to its next exit.
#[inline]
fn step(surf: &TriangulatedSurface, coords: &[u64], p: Pt) -> Pt {
    let (s, u) = p;
    let sin = glue(s);
    let t = surf.tri_of(sin);
    let j = surf.local_of(sin);
    let x = [0, 1, 2].map(|k| coords[edge_of(surf.side_at(t, k))]);
    let pos = if sin.is_multiple_of(2) {
        u
    } else {
        x[j] - 1 - u
    };
    let n = corner_counts(x);
    let (jo, to) = if pos < n[j] {
        let jo = (j + 2) % 3;
        (jo, x[jo] - 1 - pos)
    } else {
        ((j + 1) % 3, x[j] - 1 - pos)
    };
    let so = surf.side_at(t, jo);
    let uo = if so.is_multiple_of(2) {
        to
    } else {
        x[jo] - 1 - to
    };
    (so, uo)
}

/// Components of a normal multicurve with the edge positions of their points.
pub fn trace_positioned(surf: &TriangulatedSurface, coords: &[u64]) -> Vec<Vec<Pt>> {
    let ne = surf.num_edges();
    let mut off = vec![0usize; ne + 1];
    for e in 0..ne {
        off[e + 1] = off[e] + coords[e] as usize;
    }
    let mut seen = vec![false; off[ne]];
    let mut out = Vec::new();
    for e in 0..ne {
        for u in 0..coords[e] {
            if seen[off[e] + u as usize] {
                continue;
            }
            let start = ((2 * e) as Side, u);
            let mut comp = vec![start];
            seen[off[e] + u as usize] = true;
            let mut p = step(surf, coords, start);
            while p != start {
                seen[off[edge_of(p.0)] + p.1 as usize] = true;
                comp.push(p);
                p = step(surf, coords, p);
            }
            out.push(comp);
        }
    }
    out
}

pub fn trace(surf: &TriangulatedSurface, coords: &[u64]) -> Vec<Vec<Side>> {
    trace_positioned(surf, coords)
        .into_iter()
        .map(|c| c.into_iter().map(|p| p.0).collect())
        .collect()
}

pub fn coords(num_edges: usize, walk: &[Side]) -> Vec<u64> {
    let mut c = vec![0u64; num_edges];
    for &s in walk {
        c[edge_of(s)] += 1;
    }
    c
}

/// Cyclic free reduction: drops immediate returns through the side just crossed.
pub fn reduce(walk: &[Side]) -> Vec<Side> {
    let mut st: Vec<Side> = Vec::with_capacity(walk.len());
    for &s in walk {
        if st.last() == Some(&glue(s)) {
            st.pop();
        } else {
            st.push(s);
        }
    }
    let (mut i, mut j) = (0, st.len());
    while j - i >= 2 && st[i] == glue(st[j - 1]) {
        i += 1;
        j -= 1;
    }
    st.truncate(j);
    st.drain(..i);
    st
}

pub fn reverse(walk: &[Side]) -> Vec<Side> {
    walk.iter().rev().map(|&s| glue(s)).collect()
}

/// Signed crossing counts with the 2g polygon edges; determines the homology class.
pub fn homology(genus: usize, walk: &[Side]) -> Vec<i64> {
    let mut h = vec![0i64; 2 * genus];
    for &s in walk {
        let e = edge_of(s);
        if e < 2 * genus {
            h[e] += if s % 2 == 0 { 1 } else { -1 };
        }
    }
    h
}

fn kmp_find(hay: &[Side], needle: &[Side]) -> Option<usize> {
    let n = needle.len();
    if n == 0 {
        return Some(0);
    }
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && needle[i] != needle[k] {
            k = fail[k - 1];
        }
        if needle[i] == needle[k] {
            k += 1;
        }
        fail[i] = k;
    }
    k = 0;
    for (i, &h) in hay.iter().enumerate() {
        while k > 0 && h != needle[k] {
            k = fail[k - 1];
        }
        if h == needle[k] {
            k += 1;
        }
        if k == n {
            return Some(i + 1 - n);
        }
    }
    None
}

/// Rotation `r` with `a[r..] ++ a[..r] == b`.
pub fn rotation_of(a: &[Side], b: &[Side]) -> Option<usize> {
    if a.len() != b.len() {
        return None;
    }
    let doubled: Vec<Side> = a.iter().chain(a.iter()).copied().collect();
    kmp_find(&doubled, b).filter(|&r| r < a.len().max(1))
}

/// Same oriented closed walk up to rotation.
pub fn same_cycle(a: &[Side], b: &[Side]) -> bool {
    rotation_of(a, b).is_some()
}

/// Positions of a reduced simple walk, in the walk's own order and orientation.
pub fn positioned(surf: &TriangulatedSurface, walk: &[Side]) -> Option<Vec<Pt>> {
    let c = coords(surf.num_edges(), walk);
    let comps = trace_positioned(surf, &c);
    if comps.len() != 1 {
        return None;
    }
    let comp = comps.into_iter().next().unwrap();
    let sides: Vec<Side> = comp.iter().map(|p| p.0).collect();
    if let Some(r) = rotation_of(&sides, walk) {
        let mut v = comp[r..].to_vec();
        v.extend_from_slice(&comp[..r]);
        return Some(v);
    }
    let rev: Vec<Pt> = comp.iter().rev().map(|&(s, u)| (glue(s), u)).collect();
    let rsides: Vec<Side> = rev.iter().map(|p| p.0).collect();
    let r = rotation_of(&rsides, walk)?;
    let mut v = rev[r..].to_vec();
    v.extend_from_slice(&rev[..r]);
    Some(v)
}

/// A twisting curve, traced once and reused.
#[derive(Clone, Debug)]
pub struct TwistCurve {
    pub walk: Vec<Side>,
    pts: Vec<Pt>,
    coords: Vec<u64>,
}

impl TwistCurve {
    pub fn new(surf: &TriangulatedSurface, walk: &[Side]) -> Option<Self> {
        let walk = reduce(walk);
        let pts = positioned(surf, &walk)?;
        let coords = coords(surf.num_edges(), &walk);
        Some(TwistCurve { walk, pts, coords })
    }
}

#[inline]
fn between(lo: u64, hi: u64, x: u64) -> bool {
    if lo < hi {
        lo < x && x < hi
    } else {
        x > lo || x < hi
    }
}

struct Chord {
    from: u64,
    to: u64,
    idx: usize,
}

/// Left Dehn twist (or its inverse) of the oriented simple walk `a` about `c`.
pub fn twist_walk(
    surf: &TriangulatedSurface,
    c: &TwistCurve,
    a: &[Side],
    inverse: bool,
) -> Vec<Side> {
    let a = reduce(a);
    if a.is_empty() {
        return a;
    }
    let apts = positioned(surf, &a).expect("twist input must be a simple normal curve");
    let ne = surf.num_edges();
    let acoords = coords(ne, &a);
    let total: Vec<u64> = (0..ne).map(|e| acoords[e] + c.coords[e]).collect();
    let width = total.iter().copied().max().unwrap_or(0) + 1;
    let key = |s: Side, u: u64| -> u64 {
        let e = edge_of(s);
        let t = if s.is_multiple_of(2) {
            u
        } else {
            total[e] - 1 - u
        };
        surf.local_of(s) as u64 * width + t
    };
    // c sits above a on every edge
    let cpts: Vec<Pt> = c
        .pts
        .iter()
        .map(|&(s, u)| (s, u + acoords[edge_of(s)]))
        .collect();
    let m = cpts.len();
    let mut by_tri: Vec<Vec<Chord>> = (0..surf.num_triangles()).map(|_| Vec::new()).collect();
    for k in 0..m {
        let (s0, u0) = cpts[k];
        let (s1, u1) = cpts[(k + 1) % m];
        by_tri[surf.tri_of(s1)].push(Chord {
            from: key(glue(s0), u0),
            to: key(s1, u1),
            idx: k,
        });
    }
    let cs = &c.walk;
    let mut out = Vec::with_capacity(a.len() * 2);
    let n = apts.len();
    let mut hits: Vec<(u64, u64, usize, bool)> = Vec::new();
    for i in 0..n {
        let (s0, u0) = apts[i];
        let (s1, u1) = apts[(i + 1) % n];
        out.push(s0);
        let af = key(glue(s0), u0);
        let at = key(s1, u1);
        hits.clear();
        for ch in &by_tri[surf.tri_of(s1)] {
            let sf = between(af, at, ch.from);
            if sf != between(af, at, ch.to) {
                // c crossing from a's right to its left means turning left follows c forwards
                hits.push((ch.from, ch.to, ch.idx, sf != inverse));
            }
        }
        hits.sort_by(|x, y| {
            if x.2 == y.2 {
                return std::cmp::Ordering::Equal;
            }
            let before = between(x.0, x.1, af) != between(x.0, x.1, y.0);
            if before {
                std::cmp::Ordering::Less
            } else {
                std::cmp::Ordering::Greater
            }
        });
        for &(_, _, k, fwd) in &hits {
            if fwd {
                for j in 1..=m {
                    out.push(cs[(k + j) % m]);
                }
            } else {
                for j in 0..m {
                    out.push(glue(cs[(k + m - j) % m]));
                }
            }
        }
    }
    reduce(&out)
}
