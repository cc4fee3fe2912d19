use num::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::decomposition::{decompose_pair, merged_support, PairDecomposition, PieceKind};
use crate::dualtree::GraphEdge;
use crate::error::{Error, Result};
use crate::lamination::{curve_intersection, VectorLamination, WeightedMulticurve};
use crate::overlay::Overlay;
use crate::rational::{fmt_q, parse_q, Q};
use crate::surface::{cut_along, primitive, surface, CurveSide, NormalMulticurve, UnionFind};

/// The square of one rectangle: a crossing of an x-curve with a y-curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rect {
    pub x_curve: usize,
    pub y_curve: usize,
    pub w: Q,
    pub h: Q,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    X,
    Y,
}

/// Rectangles `a` and `b` are consecutive along `curve` in the given role and share a side there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub a: usize,
    pub b: usize,
    pub curve: usize,
    pub role: Role,
}

/// A vertex of the rectangle complex with its number of right-angle corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeVertex {
    pub corners: usize,
    pub interior: bool,
}

impl ConeVertex {
    /// Cone angle as a multiple of π.
    pub fn angle(&self) -> Q {
        Q::new((self.corners as i64).into(), 2.into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatPiece {
    pub piece: usize,
    /// Curves of the piece with their weights in x and y.
    pub curves: Vec<(NormalMulticurve, (Q, Q))>,
    pub rects: Vec<Rect>,
    pub gluings: Vec<Gluing>,
    pub cone: Vec<ConeVertex>,
}

impl FlatPiece {
    pub fn to_doc(&self) -> FlatDoc {
        FlatDoc {
            piece: self.piece,
            curves: self
                .curves
                .iter()
                .map(|(c, (a, b))| WeightedCurveDoc {
                    curve: c.clone(),
                    weights: [fmt_q(a), fmt_q(b)],
                })
                .collect(),
            rects: self
                .rects
                .iter()
                .map(|r| RectDoc {
                    w: fmt_q(&r.w),
                    h: fmt_q(&r.h),
                    x_curve: r.x_curve,
                    y_curve: r.y_curve,
                })
                .collect(),
            gluings: self.gluings.clone(),
            cone: self.cone.clone(),
            area: fmt_q(&self.area()),
        }
    }

    pub fn from_doc(doc: &FlatDoc) -> Result<Self> {
        let curves = doc
            .curves
            .iter()
            .map(|c| {
                Ok((
                    c.curve.clone(),
                    (parse_q(&c.weights[0])?, parse_q(&c.weights[1])?),
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let n = curves.len();
        let rects = doc
            .rects
            .iter()
            .map(|r| {
                if r.x_curve >= n || r.y_curve >= n {
                    return Err(Error::Parse(format!(
                        "rectangle refers to curve {} of {n}",
                        r.x_curve.max(r.y_curve)
                    )));
                }
                Ok(Rect {
                    x_curve: r.x_curve,
                    y_curve: r.y_curve,
                    w: parse_q(&r.w)?,
                    h: parse_q(&r.h)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let f = FlatPiece {
            piece: doc.piece,
            curves,
            rects,
            gluings: doc.gluings.clone(),
            cone: doc.cone.clone(),
        };
        if fmt_q(&f.area()) != doc.area {
            return Err(Error::Parse(format!(
                "declared area {} differs from {}",
                doc.area,
                fmt_q(&f.area())
            )));
        }
        Ok(f)
    }

    pub fn area(&self) -> Q {
        self.rects.iter().map(|r| &r.w * &r.h).sum()
    }

    /// Every interior vertex has angle kπ with k ≥ 2, and every rectangle side is glued or on the boundary.
    pub fn half_translation_ok(&self) -> bool {
        let angles = self
            .cone
            .iter()
            .filter(|v| v.interior)
            .all(|v| v.corners >= 4 && v.corners % 2 == 0);
        let mut sides = vec![0usize; self.rects.len() * 2];
        for g in &self.gluings {
            let k = if g.role == Role::X { 0 } else { 1 };
            sides[2 * g.a + k] += 1;
            sides[2 * g.b + k] += 1;
        }
        angles && sides.iter().all(|&s| s == 2)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreePiece {
    pub piece: usize,
    pub vertices: usize,
    pub edges: Vec<GraphEdge<(Q, Q)>>,
    pub lamination: VectorLamination,
}

/// A curve of the system and the pieces on its two sides; it maps to a single point of the core.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attachment {
    pub curve: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreComplex {
    pub decomposition: PairDecomposition,
    pub flat_pieces: Vec<FlatPiece>,
    pub tree_pieces: Vec<TreePiece>,
    pub attachments: Vec<Attachment>,
    pub connected_raw: bool,
}

fn flat_piece(piece: usize, x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<FlatPiece> {
    let curves = merged_support(x, y);
    let surf = surface(x.genus())?;
    let mut ov = Overlay::new(&surf);
    for (i, (c, _)) in curves.iter().enumerate() {
        ov.add_normal(c.coords(), i as u32);
    }
    let an = ov.minimize();
    let n = an.crossings.len();
    // rect_of[2k + r]: rectangle at crossing k with its r-th curve in the x role
    let mut rect_of = vec![None; 2 * n];
    let mut rects = Vec::new();
    for (k, cr) in an.crossings.iter().enumerate() {
        for r in 0..2 {
            let (xc, yc) = (cr.curves[r] as usize, cr.curves[1 - r] as usize);
            let (w, h) = (&curves[xc].1 .0, &curves[yc].1 .1);
            if w.is_positive() && h.is_positive() {
                rect_of[2 * k + r] = Some(rects.len());
                rects.push(Rect {
                    x_curve: xc,
                    y_curve: yc,
                    w: w.clone(),
                    h: h.clone(),
                });
            }
        }
    }
    let mut gluings = Vec::new();
    for c in 0..curves.len() {
        let along = an.crossings_along(&ov, c as u32);
        for role in [Role::X, Role::Y] {
            let seq: Vec<usize> = along
                .iter()
                .filter_map(|&k| {
                    let cr = &an.crossings[k as usize];
                    let mine = if cr.curves[0] as usize == c { 0 } else { 1 };
                    let r = if role == Role::X { mine } else { 1 - mine };
                    rect_of[2 * k as usize + r]
                })
                .collect();
            for i in 0..seq.len() {
                gluings.push(Gluing {
                    a: seq[i],
                    b: seq[(i + 1) % seq.len()],
                    curve: c,
                    role,
                });
            }
        }
    }
    let cone = an
        .regions
        .iter()
        .map(|r| ConeVertex {
            corners: r
                .cycles
                .iter()
                .map(|&c| an.cycles[c as usize].corners)
                .sum(),
            interior: r.is_disk(),
        })
        .collect();
    Ok(FlatPiece {
        piece,
        curves,
        rects,
        gluings,
        cone,
    })
}

fn tree_pieces(d: &PairDecomposition) -> Result<Vec<TreePiece>> {
    let genus = d.source.0.genus();
    let nsys = d.curve_system.len();
    let lam: Vec<(usize, NormalMulticurve, (Q, Q))> = d
        .pieces
        .iter()
        .enumerate()
        .filter_map(|(pi, p)| match &p.kind {
            PieceKind::Laminar { lamination } => Some(
                lamination
                    .support()
                    .iter()
                    .zip(lamination.weights())
                    .map(move |(c, w)| (pi, c.clone(), w.clone())),
            ),
            _ => None,
        })
        .flatten()
        .collect();
    let mut all = d.curve_system.clone();
    all.extend(lam.iter().map(|l| l.1.clone()));
    let surf = surface(genus)?;
    let subs = cut_along(&surf, &all)?;
    let mut uf = UnionFind::new(subs.len());
    let side_of = |i: usize, s: CurveSide| {
        subs.iter()
            .position(|p| p.boundary_map.contains(&(i, s)))
            .unwrap()
    };
    for i in nsys..all.len() {
        uf.union(side_of(i, CurveSide::Left), side_of(i, CurveSide::Right));
    }
    // decomposition piece of each group of sub-pieces
    let mut owner = vec![None; subs.len()];
    for (si, s) in subs.iter().enumerate() {
        let root = uf.find(si);
        let p = match s.boundary_map.iter().find(|b| b.0 < nsys) {
            Some(b) => d
                .pieces
                .iter()
                .position(|p| p.piece.boundary_map.contains(b)),
            None if nsys == 0 => Some(0),
            None => None,
        };
        if let Some(p) = p {
            owner[root] = Some(p);
        }
    }
    let mut out = Vec::new();
    for (pi, p) in d.pieces.iter().enumerate() {
        let PieceKind::Laminar { lamination } = &p.kind else {
            continue;
        };
        let verts: Vec<usize> = (0..subs.len())
            .filter(|&s| owner[uf.find(s)] == Some(pi))
            .collect();
        let local = |s: usize| verts.iter().position(|&v| v == s).unwrap();
        let edges = lam
            .iter()
            .enumerate()
            .filter(|(_, l)| l.0 == pi)
            .map(|(j, l)| GraphEdge {
                from: local(side_of(nsys + j, CurveSide::Left)),
                to: local(side_of(nsys + j, CurveSide::Right)),
                length: l.2.clone(),
            })
            .collect();
        out.push(TreePiece {
            piece: pi,
            vertices: verts.len(),
            edges,
            lamination: lamination.clone(),
        });
    }
    Ok(out)
}

pub fn build_core(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<CoreComplex> {
    if x.genus() != y.genus() {
        return Err(Error::SurfaceMismatch);
    }
    if x.is_zero() && y.is_zero() {
        return Err(Error::BothZero);
    }
    let d = decompose_pair(x, y)?;
    let mut flat_pieces = Vec::new();
    for (pi, p) in d.pieces.iter().enumerate() {
        if let PieceKind::Filling { x, y } = &p.kind {
            flat_pieces.push(flat_piece(pi, x, y)?);
        }
    }
    let tree_pieces = tree_pieces(&d)?;
    let attachments = (0..d.curve_system.len())
        .map(|j| {
            let find = |s| {
                d.pieces
                    .iter()
                    .position(|p| p.piece.boundary_map.contains(&(j, s)))
                    .unwrap()
            };
            Attachment {
                curve: j,
                left: find(CurveSide::Left),
                right: find(CurveSide::Right),
            }
        })
        .collect();
    let mut core = CoreComplex {
        decomposition: d,
        flat_pieces,
        tree_pieces,
        attachments,
        connected_raw: true,
    };
    // a curve carrying both measures is a diagonal edge, missing from the raw core
    core.connected_raw = !core
        .weighted_curves()
        .iter()
        .any(|(_, (a, b))| a.is_positive() && b.is_positive());
    Ok(core)
}

impl CoreComplex {
    /// Every curve the core carries, with its pair of weights: rectangle sides, tree edges and system curves.
    pub fn weighted_curves(&self) -> Vec<(NormalMulticurve, (Q, Q))> {
        let mut out: Vec<(NormalMulticurve, (Q, Q))> = Vec::new();
        for f in &self.flat_pieces {
            out.extend(f.curves.iter().cloned());
        }
        for t in &self.tree_pieces {
            out.extend(
                t.lamination
                    .support()
                    .iter()
                    .cloned()
                    .zip(t.lamination.weights().iter().cloned()),
            );
        }
        let s = &self.decomposition.on_system;
        out.extend(s.support().iter().cloned().zip(s.weights().iter().cloned()));
        out
    }
}

pub fn core_area(c: &CoreComplex) -> Q {
    c.flat_pieces.iter().map(|f| f.area()).sum()
}

pub fn is_connected_raw(c: &CoreComplex) -> bool {
    c.connected_raw
}

/// Lengths of g in the two trees, read off the curves of the core.
fn lengths(c: &CoreComplex, g: &NormalMulticurve) -> Result<(Q, Q)> {
    let g = primitive(g)?;
    let mut a = Q::zero();
    let mut b = Q::zero();
    for (d, (u, v)) in c.weighted_curves() {
        let n = Q::from_integer(curve_intersection(&d, &g).into());
        a += &n * u;
        b += &n * v;
    }
    Ok((a, b))
}

/// Translation length of g in the sum metric.
pub fn l1_translation_length(c: &CoreComplex, g: &NormalMulticurve) -> Result<Q> {
    let (a, b) = lengths(c, g)?;
    Ok(a + b)
}

/// √q for a non-negative rational, kept exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sqrt(pub Q);

impl Sqrt {
    pub fn value(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN).sqrt()
    }
    /// The exact root when the radicand is a rational square.
    pub fn exact(&self) -> Option<Q> {
        let (n, d) = (self.0.numer(), self.0.denom());
        let (rn, rd) = (n.sqrt(), d.sqrt());
        (&rn * &rn == *n && &rd * &rd == *d).then(|| Q::new(rn, rd))
    }
}

impl std::fmt::Display for Sqrt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.exact() {
            Some(q) => write!(f, "{}", fmt_q(&q)),
            None => write!(f, "sqrt({})", fmt_q(&self.0)),
        }
    }
}

/// Bounds on the translation length of g in the path metric of the core.
pub fn euclidean_length_bounds(c: &CoreComplex, g: &NormalMulticurve) -> Result<(Sqrt, Q)> {
    let (a, b) = lengths(c, g)?;
    Ok((Sqrt(&a * &a + &b * &b), a + b))
}

pub fn bounds_from_lengths(a: &Q, b: &Q) -> (Sqrt, Q) {
    (Sqrt(a * a + b * b), a + b)
}

#[derive(Serialize, Deserialize)]
pub struct RectDoc {
    pub w: String,
    pub h: String,
    pub x_curve: usize,
    pub y_curve: usize,
}

#[derive(Serialize, Deserialize)]
pub struct WeightedCurveDoc {
    pub curve: NormalMulticurve,
    pub weights: [String; 2],
}

#[derive(Serialize, Deserialize)]
pub struct FlatDoc {
    pub piece: usize,
    pub curves: Vec<WeightedCurveDoc>,
    pub rects: Vec<RectDoc>,
    pub gluings: Vec<Gluing>,
    pub cone: Vec<ConeVertex>,
    pub area: String,
}

#[derive(Serialize, Deserialize)]
pub struct TreeDoc {
    pub piece: usize,
    #[serde(flatten)]
    pub graph: crate::dualtree::GraphDoc,
}

#[derive(Serialize, Deserialize)]
pub struct CoreDoc {
    pub flat: Vec<FlatDoc>,
    pub trees: Vec<TreeDoc>,
    pub attachments: Vec<Attachment>,
    pub connected_raw: bool,
    pub area: String,
}

impl CoreComplex {
    pub fn to_doc(&self) -> CoreDoc {
        use crate::dualtree::{EdgeDoc, GraphDoc, LengthDoc};
        CoreDoc {
            flat: self.flat_pieces.iter().map(FlatPiece::to_doc).collect(),
            trees: self
                .tree_pieces
                .iter()
                .map(|t| TreeDoc {
                    piece: t.piece,
                    graph: GraphDoc {
                        vertices: t.vertices,
                        edges: t
                            .edges
                            .iter()
                            .map(|e| EdgeDoc {
                                from: e.from,
                                to: e.to,
                                length: LengthDoc::Vector([fmt_q(&e.length.0), fmt_q(&e.length.1)]),
                            })
                            .collect(),
                    },
                })
                .collect(),
            attachments: self.attachments.clone(),
            connected_raw: self.connected_raw,
            area: fmt_q(&core_area(self)),
        }
    }

    /// Total d₀ length of the tree edges, a sanity figure for laminar parts.
    pub fn tree_length(&self) -> (Q, Q) {
        let mut t = (Q::zero(), Q::zero());
        for p in &self.tree_pieces {
            for e in &p.edges {
                t.0 += &e.length.0;
                t.1 += &e.length.1;
            }
        }
        t
    }
}
