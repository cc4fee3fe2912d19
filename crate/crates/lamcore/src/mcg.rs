use std::fmt;
use std::sync::Arc;

use num::Signed;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::lamination::{curve_intersection, curves_isotopic, WeightedMulticurve};
use crate::mixed::{pair_from_mixed, MixedKind, MixedStructure};
use crate::rational::{one, Q};
use crate::surface::{primitive, surface, validate_normal, NormalMulticurve, Side};
use crate::walk::{self, TwistCurve};

/// A power of a left Dehn twist.
#[derive(Clone, Debug)]
pub struct Generator {
    pub curve: NormalMulticurve,
    pub label: String,
    pub exp: i64,
    tc: Arc<TwistCurve>,
}

impl PartialEq for Generator {
    fn eq(&self, o: &Self) -> bool {
        self.curve == o.curve && self.exp == o.exp
    }
}

/// A word in Dehn twists; the rightmost generator acts first.
#[derive(Clone, Debug, PartialEq)]
pub struct MappingClass {
    genus: usize,
    word: Vec<Generator>,
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_empty() {
            return write!(f, "id");
        }
        let parts: Vec<String> = self
            .word
            .iter()
            .map(|g| {
                if g.exp == 1 {
                    format!("T({})", g.label)
                } else {
                    format!("T({})^{}", g.label, g.exp)
                }
            })
            .collect();
        write!(f, "{}", parts.join("."))
    }
}

fn curve_walk(c: &NormalMulticurve) -> Vec<Side> {
    walk::trace(&c.surface(), c.coords()).remove(0)
}

impl MappingClass {
    pub fn identity(genus: usize) -> Self {
        MappingClass {
            genus,
            word: Vec::new(),
        }
    }

    pub fn twist(c: &NormalMulticurve) -> Result<Self> {
        Self::twist_labeled(c, None)
    }

    fn twist_labeled(c: &NormalMulticurve, label: Option<String>) -> Result<Self> {
        if c.is_empty() {
            return Err(Error::InessentialCurve);
        }
        let c = primitive(c)?;
        let surf = c.surface();
        let tc = TwistCurve::new(&surf, &curve_walk(&c)).ok_or(Error::NotSimple)?;
        let label = label.unwrap_or_else(|| {
            surf.labels()
                .iter()
                .find(|(_, v)| v.as_slice() == c.coords())
                .map(|(n, _)| n.clone())
                .unwrap_or_else(|| format!("{:?}", c.coords()).replace(' ', ""))
        });
        Ok(MappingClass {
            genus: c.genus(),
            word: vec![Generator {
                curve: c,
                label,
                exp: 1,
                tc: Arc::new(tc),
            }],
        })
    }

    /// Parses words like `T(c1).T(c2)^-1` or `T([1,0,...])^3`; `id` or the empty string is the identity.
    pub fn parse(genus: usize, s: &str) -> Result<Self> {
        let surf = surface(genus)?;
        Self::parse_with(genus, s, |name| surf.fixture(name))
    }

    /// As `parse`, resolving curve names through `lookup`.
    pub fn parse_with(
        genus: usize,
        s: &str,
        lookup: impl Fn(&str) -> Option<NormalMulticurve>,
    ) -> Result<Self> {
        let surf = surface(genus)?;
        let s = s.trim();
        let mut f = MappingClass::identity(genus);
        if s.is_empty() || s == "id" {
            return Ok(f);
        }
        let bad = || Error::Parse(format!("bad word {s:?}"));
        let mut rest = s;
        while !rest.is_empty() {
            let body = rest.strip_prefix("T(").ok_or_else(bad)?;
            let close = body.find(')').ok_or_else(bad)?;
            let name = body[..close].trim();
            rest = &body[close + 1..];
            let mut exp = 1i64;
            if let Some(r) = rest.strip_prefix('^') {
                let end = r.find('.').unwrap_or(r.len());
                exp = r[..end].trim().parse().map_err(|_| bad())?;
                rest = &r[end..];
            }
            if let Some(r) = rest.strip_prefix('.') {
                rest = r;
                if rest.is_empty() {
                    return Err(bad());
                }
            } else if !rest.is_empty() {
                return Err(bad());
            }
            let c = if name.starts_with('[') {
                let v: Vec<u64> =
                    serde_json::from_str(name).map_err(|e| Error::Parse(e.to_string()))?;
                validate_normal(&surf, &v)?
            } else {
                lookup(name).ok_or_else(|| Error::UnknownCurve(name.to_string()))?
            };
            let g = MappingClass::twist_labeled(&c, Some(name.to_string()))?.pow(exp);
            f = f.compose(&g)?;
        }
        Ok(f)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }
    pub fn word(&self) -> &[Generator] {
        &self.word
    }
    pub fn is_identity_word(&self) -> bool {
        self.word.is_empty()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.genus != other.genus {
            return Err(Error::SurfaceMismatch);
        }
        let mut word = self.word.clone();
        for g in &other.word {
            match word.last_mut() {
                Some(last) if last.curve == g.curve => {
                    last.exp += g.exp;
                    if last.exp == 0 {
                        word.pop();
                    }
                }
                _ => word.push(g.clone()),
            }
        }
        Ok(MappingClass {
            genus: self.genus,
            word,
        })
    }

    pub fn inverse(&self) -> Self {
        let word = self
            .word
            .iter()
            .rev()
            .map(|g| Generator {
                exp: -g.exp,
                ..g.clone()
            })
            .collect();
        MappingClass {
            genus: self.genus,
            word,
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        let base = if k < 0 { self.inverse() } else { self.clone() };
        let mut out = MappingClass::identity(self.genus);
        for _ in 0..k.unsigned_abs() {
            out = out.compose(&base).expect("same genus");
        }
        out
    }

    /// Image of an oriented walk of a simple closed curve.
    pub fn apply_walk(&self, w: &[Side]) -> Vec<Side> {
        let surf = surface(self.genus).expect("valid genus");
        let mut w = walk::reduce(w);
        for g in self.word.iter().rev() {
            for _ in 0..g.exp.unsigned_abs() {
                w = walk::twist_walk(&surf, &g.tc, &w, g.exp < 0);
            }
        }
        w
    }

    pub fn apply_curve(&self, c: &NormalMulticurve) -> Result<NormalMulticurve> {
        if c.genus() != self.genus {
            return Err(Error::SurfaceMismatch);
        }
        let c = primitive(c)?;
        let surf = c.surface();
        let w = self.apply_walk(&curve_walk(&c));
        Ok(NormalMulticurve::from_raw(
            self.genus,
            walk::coords(surf.num_edges(), &w),
        ))
    }

    /// Weights ride along with their components.
    pub fn apply(&self, x: &WeightedMulticurve) -> Result<WeightedMulticurve> {
        if x.genus() != self.genus {
            return Err(Error::SurfaceMismatch);
        }
        let comps = x
            .components()
            .iter()
            .map(|(c, w)| Ok((self.apply_curve(c)?, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightedMulticurve::from_parts(self.genus, comps))
    }
}

/// Acts trivially: every chain curve is fixed up to isotopy, with its orientation (checked in homology).
fn acts_trivially(
    genus: usize,
    images: &[Vec<Side>],
    chain: &[(NormalMulticurve, Vec<Side>)],
) -> bool {
    let n = surface(genus).expect("valid genus").num_edges();
    images.iter().zip(chain).all(|(img, (c, w))| {
        walk::homology(genus, img) == walk::homology(genus, w)
            && curves_isotopic(&NormalMulticurve::from_raw(genus, walk::coords(n, img)), c)
    })
}

pub fn default_order_bound(genus: usize) -> usize {
    4 * genus + 2
}

/// Least k ≤ bound with fᵏ trivial.
pub fn order(f: &MappingClass, bound: usize) -> Option<usize> {
    if f.word.is_empty() {
        return Some(1);
    }
    let surf = surface(f.genus).ok()?;
    let chain: Vec<(NormalMulticurve, Vec<Side>)> = surf
        .chain()
        .into_iter()
        .map(|c| {
            let w = curve_walk(&c);
            (c, w)
        })
        .collect();
    let start: usize = chain.iter().map(|c| c.1.len()).sum();
    let mut imgs: Vec<Vec<Side>> = chain.iter().map(|c| c.1.clone()).collect();
    for k in 1..=bound {
        imgs = imgs.iter().map(|w| f.apply_walk(w)).collect();
        if acts_trivially(f.genus, &imgs, &chain) {
            return Some(k);
        }
        // a periodic class keeps lengths bounded by the orbit of the chain; runaway growth means infinite order
        if imgs.iter().map(|w| w.len()).sum::<usize>() > 64 * (start + 64) * bound {
            return None;
        }
    }
    None
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum NTDiagnosis {
    Periodic {
        order: usize,
    },
    Reducible {
        witness: WeightedMulticurve,
    },
    /// Heuristic: growth of curve size under iteration.
    PseudoAnosovLike {
        stretch: f64,
        iterations: usize,
        heuristic: bool,
    },
    Inconclusive {
        reason: String,
        stretch: Option<f64>,
        iterations: usize,
    },
}

const SIZE_CAP: usize = 2_000_000;

/// Successive size ratios of fⁿ(c), stopping once they agree to relative `tol` or the curve gets huge.
pub fn growth_ratios(
    f: &MappingClass,
    c: &NormalMulticurve,
    max_iter: usize,
    tol: f64,
) -> Result<Vec<f64>> {
    let c = primitive(c)?;
    let mut w = curve_walk(&c);
    let mut ratios = Vec::new();
    for _ in 0..max_iter {
        let next = f.apply_walk(&w);
        ratios.push(next.len() as f64 / w.len() as f64);
        w = next;
        if w.len() > SIZE_CAP {
            break;
        }
        let n = ratios.len();
        if n >= 3 && (ratios[n - 1] - ratios[n - 2]).abs() < tol * ratios[n - 1] {
            break;
        }
    }
    Ok(ratios)
}

/// Stretch estimate: the last size ratio, with the number of iterations used.
pub fn stretch_estimate(
    f: &MappingClass,
    c: &NormalMulticurve,
    max_iter: usize,
) -> Result<(f64, usize)> {
    let r = growth_ratios(f, c, max_iter, 1e-7)?;
    Ok((*r.last().unwrap_or(&1.0), r.len()))
}

/// Finite orbit of pairwise disjoint curves, if `c` has one under f.
fn invariant_orbit(
    f: &MappingClass,
    c: &NormalMulticurve,
    steps: usize,
) -> Option<Vec<NormalMulticurve>> {
    let mut orbit = vec![c.clone()];
    let cap = 32 * c.size() + 64;
    for _ in 0..steps {
        let next = f.apply_curve(orbit.last().unwrap()).ok()?;
        if next.size() > cap {
            return None;
        }
        if curves_isotopic(&next, c) {
            let ok = (0..orbit.len()).all(|i| {
                (i + 1..orbit.len()).all(|j| {
                    curve_intersection(&orbit[i], &orbit[j]) == 0
                        && !curves_isotopic(&orbit[i], &orbit[j])
                })
            });
            return ok.then_some(orbit);
        }
        orbit.push(next);
    }
    None
}

/// Small essential curves used as reduction candidates.
pub fn small_curves(genus: usize, max_entry: u64) -> Vec<NormalMulticurve> {
    let surf = surface(genus).expect("valid genus");
    let n = surf.num_edges();
    let mut out = Vec::new();
    let mut v = vec![0u64; n];
    loop {
        if let Ok(m) = validate_normal(&surf, &v) {
            if !m.is_empty() {
                if let Ok(c) = primitive(&m) {
                    if c.coords() == v.as_slice() {
                        out.push(c);
                    }
                }
            }
        }
        let mut i = 0;
        while i < n && v[i] == max_entry {
            v[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        v[i] += 1;
    }
    out
}

pub fn classify(f: &MappingClass, budget: usize) -> NTDiagnosis {
    let g = f.genus;
    if let Some(k) = order(f, default_order_bound(g)) {
        return NTDiagnosis::Periodic { order: k };
    }
    let surf = surface(g).expect("valid genus");
    let mut candidates: Vec<NormalMulticurve> = f.word.iter().map(|x| x.curve.clone()).collect();
    candidates.extend(surf.chain());
    candidates.extend(small_curves(g, 1));
    let steps = budget.min(default_order_bound(g));
    for c in &candidates {
        if let Some(orbit) = invariant_orbit(f, c, steps) {
            let comps = orbit.into_iter().map(|c| (c, one())).collect();
            return NTDiagnosis::Reducible {
                witness: WeightedMulticurve::from_parts(g, comps),
            };
        }
    }
    let mut best: Option<Vec<f64>> = None;
    for c in surf.chain() {
        let Ok(r) = growth_ratios(f, &c, budget.max(1), 2e-3) else {
            continue;
        };
        if best.as_ref().is_none_or(|b| r.last() > b.last()) {
            best = Some(r);
        }
    }
    let r = best.unwrap_or_default();
    let n = r.len();
    let last = r.last().copied();
    let settled = n >= 3 && (r[n - 1] - r[n - 2]).abs() < 0.01 * r[n - 1];
    match last {
        Some(l) if settled && l > 1.1 => NTDiagnosis::PseudoAnosovLike {
            stretch: l,
            iterations: n,
            heuristic: true,
        },
        _ => NTDiagnosis::Inconclusive {
            reason: if n >= budget {
                "budget exhausted".into()
            } else {
                "growth not exponential".into()
            },
            stretch: last,
            iterations: n,
        },
    }
}

/// α with f(x) = α·x, when f fixes the projective class of x.
pub fn fixes_projectively(f: &MappingClass, x: &WeightedMulticurve) -> Result<Option<Q>> {
    let y = f.apply(x)?;
    if x.is_zero() {
        return Ok(Some(one()));
    }
    if y.components().len() != x.components().len() {
        return Ok(None);
    }
    let mut alpha: Option<Q> = None;
    for (c, w) in y.components() {
        let Some(v) = x.weight_of(c) else {
            return Ok(None);
        };
        let a = w / v;
        if alpha.as_ref().is_some_and(|b| *b != a) {
            return Ok(None);
        }
        alpha = Some(a);
    }
    Ok(alpha.filter(|a| a.is_positive()))
}

/// Common α for a pair, ignoring zero members; None if not fixed.
pub fn fixes_pair(
    f: &MappingClass,
    x: &WeightedMulticurve,
    y: &WeightedMulticurve,
) -> Result<Option<Q>> {
    let a = fixes_projectively(f, x)?;
    let b = fixes_projectively(f, y)?;
    Ok(match (a, b) {
        (Some(_), Some(b)) if x.is_zero() => Some(b),
        (Some(a), Some(_)) if y.is_zero() => Some(a),
        (Some(a), Some(b)) if a == b => Some(a),
        _ => None,
    })
}

/// Pairs from {0, y1, y2}² other than (0, 0), as indices (0 = zero), fixed projectively by f.
pub fn fixed_boundary_pairs(
    f: &MappingClass,
    y1: &WeightedMulticurve,
    y2: &WeightedMulticurve,
) -> Result<Vec<(usize, usize, Q)>> {
    let zero = WeightedMulticurve::zero(f.genus);
    let cands = [&zero, y1, y2];
    let mut out = Vec::new();
    for i in 0..3 {
        for j in 0..3 {
            if i == 0 && j == 0 {
                continue;
            }
            if let Some(a) = fixes_pair(f, cands[i], cands[j])? {
                out.push((i, j, a));
            }
        }
    }
    Ok(out)
}

/// Whether f maps the set of curves to itself up to isotopy.
pub fn permutes_curves(f: &MappingClass, curves: &[NormalMulticurve]) -> Result<bool> {
    for c in curves {
        let img = f.apply_curve(c)?;
        if !curves.iter().any(|d| curves_isotopic(d, &img)) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixingReport {
    pub kind: MixedKind,
    pub fixed: bool,
    #[serde(with = "crate::rational::serde_qopt")]
    pub alpha: Option<Q>,
    pub permutes_system: bool,
    pub order: Option<usize>,
    pub pseudo_anosov_like: Option<bool>,
    pub counterexample: Option<String>,
}

pub fn check_mixed_fixing(f: &MappingClass, m: &MixedStructure) -> Result<FixingReport> {
    if f.genus != m.genus {
        return Err(Error::SurfaceMismatch);
    }
    let (x, y) = pair_from_mixed(m)?;
    let alpha = if m.kind == MixedKind::Zero {
        Some(one())
    } else {
        fixes_pair(f, &x, &y)?
    };
    let fixed = alpha.is_some();
    let permutes_system = permutes_curves(f, &m.curve_system)?;
    let mut report = FixingReport {
        kind: m.kind,
        fixed,
        alpha,
        permutes_system,
        order: None,
        pseudo_anosov_like: None,
        counterexample: None,
    };
    if !fixed {
        return Ok(report);
    }
    if !permutes_system {
        report.counterexample = Some("fixed structure whose curve system is not permuted".into());
    }
    match m.kind {
        MixedKind::PurelyFlat => {
            report.order = order(f, default_order_bound(f.genus));
            if report.order.is_none() {
                report.counterexample =
                    Some("fixed purely flat structure but no finite order".into());
            }
        }
        MixedKind::ProperlyMixed => {
            let pa = matches!(classify(f, 30), NTDiagnosis::PseudoAnosovLike { .. });
            report.pseudo_anosov_like = Some(pa);
            if pa {
                report.counterexample =
                    Some("fixed properly mixed structure under a pseudo-Anosov-like class".into());
            }
        }
        _ => {}
    }
    Ok(report)
}

/// The standard words on the chain c1, …, c(2g+1).
pub fn penner_word(genus: usize) -> String {
    let n = 2 * genus + 1;
    let pos: Vec<String> = (1..=n).step_by(2).map(|i| format!("T(c{i})")).collect();
    let neg: Vec<String> = (2..=n).step_by(2).map(|i| format!("T(c{i})^-1")).collect();
    [pos, neg].concat().join(".")
}

pub fn hyperelliptic_word(genus: usize) -> String {
    let n = 2 * genus + 1;
    let up: Vec<String> = (1..=n).map(|i| format!("T(c{i})")).collect();
    let down: Vec<String> = (1..=n).rev().map(|i| format!("T(c{i})")).collect();
    [up, down].concat().join(".")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lamination::{intersection_number, scale};
    use crate::rational::qi;
    use crate::surface::new_surface;

    fn fx(n: &str) -> NormalMulticurve {
        new_surface(2).unwrap().fixture(n).unwrap()
    }
    fn w(n: &str, k: i64) -> WeightedMulticurve {
        WeightedMulticurve::curve(&fx(n), qi(k)).unwrap()
    }
    fn word(s: &str) -> MappingClass {
        MappingClass::parse(2, s).unwrap()
    }

    #[test]
    fn parse_print() {
        let f = word("T(c1).T(c2)^-1");
        assert_eq!(f.to_string(), "T(c1).T(c2)^-1");
        assert_eq!(word("id").to_string(), "id");
        assert!(MappingClass::parse(2, "T(c9)").is_err());
        assert!(MappingClass::parse(2, "T(c1).").is_err());
        assert_eq!(word("T(c1).T(c1)^-1"), MappingClass::identity(2));
        let inline = word("T([1,0,0,0,1,0,0,0,0])");
        assert_eq!(
            inline.apply_curve(&fx("c2")).unwrap(),
            word("T(c1)").apply_curve(&fx("c2")).unwrap()
        );
    }

    #[test]
    fn twist_actions() {
        let t = word("T(c1)");
        assert_eq!(t.apply_curve(&fx("c1")).unwrap(), fx("c1"));
        assert!(curves_isotopic(
            &t.apply_curve(&fx("c3")).unwrap(),
            &fx("c3")
        ));
        let img = t.apply(&w("c2", 2)).unwrap();
        assert_eq!(intersection_number(&img, &w("c2", 1)).unwrap(), qi(2));
        let s = t.apply(&scale(&w("c2", 1), &qi(3)).unwrap()).unwrap();
        assert_eq!(s, scale(&t.apply(&w("c2", 1)).unwrap(), &qi(3)).unwrap());
        for n in 1..=4 {
            let img = t.pow(n).apply_curve(&fx("c2")).unwrap();
            assert_eq!(curve_intersection(&img, &fx("c2")), n as u64);
        }
    }

    #[test]
    fn group_laws() {
        let f = word(&penner_word(2));
        let g = word("T(c3)^2.T(c4)");
        let x = fx("c2");
        let fg = f.compose(&g).unwrap().apply_curve(&x).unwrap();
        assert_eq!(fg, f.apply_curve(&g.apply_curve(&x).unwrap()).unwrap());
        let back = f
            .inverse()
            .apply_curve(&f.apply_curve(&x).unwrap())
            .unwrap();
        assert!(curves_isotopic(&back, &x));
    }

    #[test]
    fn orders() {
        assert_eq!(order(&MappingClass::identity(2), 10), Some(1));
        assert_eq!(order(&word("T(c1)"), 10), None);
        assert_eq!(order(&word(&hyperelliptic_word(2)), 10), Some(2));
    }

    #[test]
    fn classification() {
        assert_eq!(
            classify(&MappingClass::identity(2), 10),
            NTDiagnosis::Periodic { order: 1 }
        );
        match classify(&word("T(c1)"), 30) {
            NTDiagnosis::Reducible { witness } => assert!(witness.equivalent(&w("c1", 1))),
            v => panic!("{v:?}"),
        }
        match classify(&word(&penner_word(2)), 30) {
            NTDiagnosis::PseudoAnosovLike { stretch, .. } => assert!(stretch > 1.0),
            v => panic!("{v:?}"),
        }
    }

    #[test]
    fn projective_fixing() {
        let id = MappingClass::identity(2);
        assert_eq!(fixes_projectively(&id, &w("c2", 1)).unwrap(), Some(qi(1)));
        let t = word("T(c1)");
        assert_eq!(fixes_projectively(&t, &w("c1", 1)).unwrap(), Some(qi(1)));
        assert_eq!(fixes_projectively(&t, &w("c2", 1)).unwrap(), None);
        assert_eq!(
            fixed_boundary_pairs(&id, &w("c1", 1), &w("c2", 1))
                .unwrap()
                .len(),
            8
        );
        let got = fixed_boundary_pairs(&t, &w("c1", 1), &WeightedMulticurve::zero(2)).unwrap();
        assert!(got.iter().any(|p| (p.0, p.1) == (1, 0)));
        assert!(got.iter().any(|p| (p.0, p.1) == (1, 1)));
    }
}
