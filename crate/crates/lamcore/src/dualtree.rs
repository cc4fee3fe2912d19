use num::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamination::{
    add, curves_isotopic, intersection_with_curve, VectorLamination, WeightedMulticurve,
};
use crate::rational::{self, Q};
use crate::surface::{cut_along, primitive, surface, CurveSide, CutPiece, NormalMulticurve};

/// An edge of a quotient graph: one curve, crossing from the piece on its left to the one on its right.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphEdge<L> {
    pub from: usize,
    pub to: usize,
    pub length: L,
}

/// Quotient graph of the tree dual to a weighted multicurve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualTree {
    pub vertices: usize,
    pub pieces: Vec<CutPiece>,
    pub edges: Vec<GraphEdge<Q>>,
    pub source: WeightedMulticurve,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorEdgeTree {
    pub vertices: usize,
    pub pieces: Vec<CutPiece>,
    pub edges: Vec<GraphEdge<(Q, Q)>>,
    pub source: VectorLamination,
}

/// Vertices and (from, to) pairs of the graph whose edges are the given disjoint curves.
fn quotient(
    genus: usize,
    curves: &[NormalMulticurve],
) -> Result<(Vec<CutPiece>, Vec<(usize, usize)>)> {
    let surf = surface(genus)?;
    let pieces = cut_along(&surf, curves)?;
    let find = |i: usize, side: CurveSide| {
        pieces
            .iter()
            .position(|p| p.boundary_map.contains(&(i, side)))
            .expect("every curve side bounds a piece")
    };
    let ends = (0..curves.len())
        .map(|i| (find(i, CurveSide::Left), find(i, CurveSide::Right)))
        .collect();
    Ok((pieces, ends))
}

pub fn dual_tree(x: &WeightedMulticurve) -> Result<DualTree> {
    if x.is_zero() {
        return Err(Error::ZeroLamination);
    }
    let (pieces, ends) = quotient(x.genus(), &x.support())?;
    let edges = ends
        .into_iter()
        .zip(x.components())
        .map(|((from, to), (_, w))| GraphEdge {
            from,
            to,
            length: w.clone(),
        })
        .collect();
    Ok(DualTree {
        vertices: pieces.len(),
        pieces,
        edges,
        source: x.clone(),
    })
}

/// i(source, g): translation length of the curve g acting on the dual tree.
pub fn translation_length(t: &DualTree, g: &NormalMulticurve) -> Result<Q> {
    let g = primitive(g)?;
    intersection_with_curve(&t.source, &g)
}

/// A non-trivial common collapse exists iff the sources share a component.
pub fn common_refined_tree_exists(a: &DualTree, b: &DualTree) -> Result<bool> {
    shares_component(&a.source, &b.source)
}

pub fn shares_component(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<bool> {
    if x.genus() != y.genus() {
        return Err(Error::SurfaceMismatch);
    }
    Ok(x.components()
        .iter()
        .any(|(c, _)| y.components().iter().any(|(d, _)| curves_isotopic(c, d))))
}

pub fn vector_tree(v: &VectorLamination) -> Result<VectorEdgeTree> {
    if v.is_empty() {
        return Err(Error::EmptyLamination);
    }
    vector_tree_unchecked(v)
}

/// Also accepts the empty lamination, whose tree is a point.
pub(crate) fn vector_tree_unchecked(v: &VectorLamination) -> Result<VectorEdgeTree> {
    let (pieces, ends) = quotient(v.genus(), v.support())?;
    let edges = ends
        .into_iter()
        .zip(v.weights())
        .map(|((from, to), w)| GraphEdge {
            from,
            to,
            length: w.clone(),
        })
        .collect();
    Ok(VectorEdgeTree {
        vertices: pieces.len(),
        pieces,
        edges,
        source: v.clone(),
    })
}

impl VectorEdgeTree {
    /// Edge lengths w₁+w₂: the tree of the summed lamination.
    pub fn scalarize(&self) -> DualTree {
        DualTree {
            vertices: self.vertices,
            pieces: self.pieces.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| GraphEdge {
                    from: e.from,
                    to: e.to,
                    length: &e.length.0 + &e.length.1,
                })
                .collect(),
            source: add(&self.source),
        }
    }

    /// Vector length of an edge path, given by edge indices.
    pub fn path_vector(&self, path: &[usize]) -> (Q, Q) {
        path.iter().fold((Q::zero(), Q::zero()), |(a, b), &i| {
            (a + &self.edges[i].length.0, b + &self.edges[i].length.1)
        })
    }

    /// Scalar length of a path dominates the Euclidean norm of its vector length.
    pub fn path_norm_ok(&self, path: &[usize]) -> bool {
        let (a, b) = self.path_vector(path);
        let s = &a + &b;
        !a.is_negative() && !b.is_negative() && &s * &s >= &a * &a + &b * &b
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum LengthDoc {
    Scalar(String),
    Vector([String; 2]),
}

#[derive(Serialize, Deserialize)]
pub struct EdgeDoc {
    pub from: usize,
    pub to: usize,
    pub length: LengthDoc,
}

#[derive(Serialize, Deserialize)]
pub struct GraphDoc {
    pub vertices: usize,
    pub edges: Vec<EdgeDoc>,
}

impl DualTree {
    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: e.from,
                    to: e.to,
                    length: LengthDoc::Scalar(rational::fmt_q(&e.length)),
                })
                .collect(),
        }
    }
}

impl VectorEdgeTree {
    pub fn to_doc(&self) -> GraphDoc {
        GraphDoc {
            vertices: self.vertices,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDoc {
                    from: e.from,
                    to: e.to,
                    length: LengthDoc::Vector([
                        rational::fmt_q(&e.length.0),
                        rational::fmt_q(&e.length.1),
                    ]),
                })
                .collect(),
        }
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
    fn graphs() {
        let t = dual_tree(&w("c1", 1)).unwrap();
        assert_eq!((t.vertices, t.edges.len()), (1, 1));
        assert_eq!((t.edges[0].from, t.edges[0].to), (0, 0));
        let t = dual_tree(&w("c1", 2).plus(&w("c3", 3)).unwrap()).unwrap();
        assert_eq!(t.vertices, 1);
        let mut ls: Vec<Q> = t.edges.iter().map(|e| e.length.clone()).collect();
        ls.sort();
        assert_eq!(ls, vec![qi(2), qi(3)]);
        let t = dual_tree(
            &w("c1", 2)
                .plus(&w("c3", 3))
                .unwrap()
                .plus(&w("c5", 1))
                .unwrap(),
        )
        .unwrap();
        assert_eq!((t.vertices, t.edges.len()), (2, 3));
        assert!(dual_tree(&WeightedMulticurve::zero(2)).is_err());
    }

    #[test]
    fn lengths() {
        let t = dual_tree(&w("c1", 1)).unwrap();
        assert_eq!(translation_length(&t, &fx("c1")).unwrap(), qi(0));
        assert_eq!(translation_length(&t, &fx("c2")).unwrap(), qi(1));
        let t = dual_tree(&w("c2", 3)).unwrap();
        assert_eq!(translation_length(&t, &fx("c1")).unwrap(), qi(3));
    }

    #[test]
    fn refinement() {
        let t = |x: &WeightedMulticurve| dual_tree(x).unwrap();
        assert!(common_refined_tree_exists(&t(&w("c1", 1)), &t(&w("c1", 2))).unwrap());
        assert!(!common_refined_tree_exists(&t(&w("c1", 1)), &t(&w("c3", 1))).unwrap());
        let both = w("c1", 1).plus(&w("c3", 1)).unwrap();
        assert!(common_refined_tree_exists(&t(&w("c1", 1)), &t(&both)).unwrap());
    }

    #[test]
    fn vector_trees() {
        let v = VectorLamination::new(2, vec![(fx("c1"), (qi(1), qi(2)))]).unwrap();
        let vt = vector_tree(&v).unwrap();
        assert_eq!(vt.edges[0].length, (qi(1), qi(2)));
        assert_eq!(vt.scalarize(), dual_tree(&w("c1", 3)).unwrap());
        let v = VectorLamination::new(
            2,
            vec![(fx("c1"), (qi(1), qi(0))), (fx("c3"), (qi(0), qi(2)))],
        )
        .unwrap();
        let vt = vector_tree(&v).unwrap();
        assert_eq!(vt.path_vector(&[0, 1]), (qi(1), qi(2)));
        assert!(vt.path_norm_ok(&[0, 1]));
        assert!(vector_tree(&VectorLamination::empty(2)).is_err());
    }
}
