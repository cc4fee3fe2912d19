use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lamination::{intersection_with_curve, scale, WeightedMulticurve};
use crate::mcg::MappingClass;
use crate::mixed::{mixed_from_pair, spectrum};
use crate::rational::{fmt_q, parse_q, serde_q, serde_qvec, Q};
use crate::surface::{surface, NormalMulticurve};

/// Exact square root of a nonnegative rational, if there is one.
pub fn rational_sqrt(x: &Q) -> Option<Q> {
    if x.is_negative() {
        return None;
    }
    let r = |n: &BigInt| {
        let s = n.sqrt();
        (&s * &s == *n).then_some(s)
    };
    Some(Q::new(r(x.numer())?, r(x.denom())?))
}

/// a + b√d with rational a, b and d ≥ 0. When d is a rational square the surd part is folded into a.
#[derive(Clone, Debug)]
pub struct Surd {
    pub a: Q,
    pub b: Q,
    pub d: Q,
}

impl Surd {
    pub fn new(a: Q, b: Q, d: Q) -> Self {
        assert!(!d.is_negative(), "negative radicand");
        match rational_sqrt(&d) {
            Some(r) => Surd {
                a: a + b * r,
                b: Q::zero(),
                d,
            },
            None => Surd { a, b, d },
        }
    }

    pub fn rational(a: Q, d: &Q) -> Self {
        Surd {
            a,
            b: Q::zero(),
            d: d.clone(),
        }
    }

    /// √d itself.
    pub fn root(d: &Q) -> Self {
        Surd::new(Q::zero(), Q::one(), d.clone())
    }

    pub fn as_rational(&self) -> Option<&Q> {
        self.b.is_zero().then_some(&self.a)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn signum(&self) -> i32 {
        let sa = sign(&self.a);
        let sb = sign(&self.b);
        if sb == 0 || sa == sb {
            return if sa != 0 { sa } else { sb };
        }
        if sa == 0 {
            return sb;
        }
        // opposite signs: compare a² with b²d
        let lhs = &self.a * &self.a;
        let rhs = &self.b * &self.b * &self.d;
        match lhs.cmp(&rhs) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn recip(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let den = &self.a * &self.a - &self.b * &self.b * &self.d;
        Some(Surd {
            a: &self.a / &den,
            b: -&self.b / &den,
            d: self.d.clone(),
        })
    }

    pub fn div(&self, o: &Surd) -> Option<Self> {
        Some(self * &o.recip()?)
    }

    pub fn scale(&self, k: &Q) -> Self {
        Surd {
            a: &self.a * k,
            b: &self.b * k,
            d: self.d.clone(),
        }
    }

    pub fn lt_one(&self) -> bool {
        (self - &Surd::rational(Q::one(), &self.d)).signum() < 0
    }

    pub fn to_f64(&self) -> f64 {
        let f = |x: &Q| x.to_f64().unwrap_or(f64::NAN);
        f(&self.a) + f(&self.b) * f(&self.d).sqrt()
    }

    /// `o` rewritten over the radicand of `self`, when the two lie in the same field.
    fn align(&self, o: &Surd) -> (Q, Surd) {
        if o.b.is_zero() || self.d == o.d {
            return (self.d.clone(), o.clone());
        }
        if self.b.is_zero() {
            return (o.d.clone(), o.clone());
        }
        // √d' = r√d with r rational
        let r = (!self.d.is_zero())
            .then(|| rational_sqrt(&(&o.d / &self.d)))
            .flatten()
            .expect("surds over different fields");
        (
            self.d.clone(),
            Surd {
                a: o.a.clone(),
                b: &o.b * r,
                d: self.d.clone(),
            },
        )
    }
}

fn sign(x: &Q) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl PartialEq for Surd {
    fn eq(&self, o: &Self) -> bool {
        // b√d = b'√d' iff the signs agree and b²d = b'²d'
        self.a == o.a
            && sign(&self.b) == sign(&o.b)
            && &self.b * &self.b * &self.d == &o.b * &o.b * &o.d
    }
}
impl Eq for Surd {}

impl Add for &Surd {
    type Output = Surd;
    fn add(self, o: &Surd) -> Surd {
        let (d, o) = self.align(o);
        Surd {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d,
        }
    }
}
impl Sub for &Surd {
    type Output = Surd;
    fn sub(self, o: &Surd) -> Surd {
        let (d, o) = self.align(o);
        Surd {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
            d,
        }
    }
}
impl Mul for &Surd {
    type Output = Surd;
    fn mul(self, o: &Surd) -> Surd {
        let (d, o) = self.align(o);
        Surd {
            a: &self.a * &o.a + &self.b * &o.b * &d,
            b: &self.a * &o.b + &self.b * &o.a,
            d,
        }
    }
}
impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd {
            a: -self.a,
            b: -self.b,
            d: self.d,
        }
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurdDoc {
    #[serde(with = "serde_q")]
    pub rational: Q,
    #[serde(with = "serde_q")]
    pub surd: Q,
    #[serde(with = "serde_q")]
    pub radicand: Q,
    pub approx: f64,
}

impl Surd {
    pub fn to_doc(&self) -> SurdDoc {
        SurdDoc {
            rational: self.a.clone(),
            surd: self.b.clone(),
            radicand: self.d.clone(),
            approx: self.to_f64(),
        }
    }
    pub fn from_doc(d: &SurdDoc) -> Result<Self> {
        if d.radicand.is_negative() {
            return Err(Error::Parse("negative radicand".into()));
        }
        Ok(Surd::new(
            d.rational.clone(),
            d.surd.clone(),
            d.radicand.clone(),
        ))
    }
}

/// max(‖v₁‖², ‖v₂‖²).
pub fn norm_sq(v: &[Vec<Q>; 2]) -> Q {
    let n = |u: &[Q]| u.iter().fold(Q::zero(), |s, x| s + x * x);
    n(&v[0]).max(n(&v[1]))
}

/// scale·v, where the scale lives in Q(√N) with N = norm_sq(v).
#[derive(Clone, Debug)]
pub struct ScaledPair {
    pub scale: Surd,
    pub v: [Vec<Q>; 2],
}

impl ScaledPair {
    pub fn new(v1: Vec<Q>, v2: Vec<Q>) -> Result<Self> {
        if v1.len() != v2.len() {
            return Err(Error::Dimension {
                expected: v1.len(),
                found: v2.len(),
            });
        }
        let v = [v1, v2];
        let n = norm_sq(&v);
        Ok(ScaledPair {
            scale: Surd::rational(Q::one(), &n),
            v,
        })
    }

    pub fn with_scale(&self, k: Surd) -> Self {
        ScaledPair {
            scale: k,
            v: self.v.clone(),
        }
    }

    pub fn len(&self) -> usize {
        self.v[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.v[0].is_empty()
    }

    pub fn base_norm_sq(&self) -> Q {
        norm_sq(&self.v)
    }

    /// |scale|·√N.
    pub fn norm(&self) -> Surd {
        &self.scale.abs() * &Surd::root(&self.base_norm_sq())
    }

    pub fn norm_sq(&self) -> Surd {
        let n = self.norm();
        &n * &n
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero() || self.base_norm_sq().is_zero()
    }

    /// Exact entries, first vector then second.
    pub fn entries(&self) -> Vec<Surd> {
        self.v
            .iter()
            .flatten()
            .map(|x| self.scale.scale(x))
            .collect()
    }

    /// The entries when all are rational.
    pub fn rational_entries(&self) -> Option<[Vec<Q>; 2]> {
        let k = self.scale.as_rational()?;
        Some([0, 1].map(|i| self.v[i].iter().map(|x| x * k).collect()))
    }
}

impl PartialEq for ScaledPair {
    fn eq(&self, o: &Self) -> bool {
        self.len() == o.len() && self.entries() == o.entries()
    }
}
impl Eq for ScaledPair {}

/// q ↦ 4q/(1+4‖q‖).
pub fn beta(p: &ScaledPair) -> ScaledPair {
    let n = p.base_norm_sq();
    let one = Surd::rational(Q::one(), &n);
    let den = &one + &p.norm().scale(&Q::from_integer(4.into()));
    let k = p
        .scale
        .scale(&Q::from_integer(4.into()))
        .div(&den)
        .expect("1+4‖q‖ > 0");
    p.with_scale(k)
}

/// p ↦ p/(4(1−‖p‖)).
pub fn beta_inv(p: &ScaledPair) -> Result<ScaledPair> {
    let norm = p.norm();
    if !norm.lt_one() {
        return Err(Error::NormNotLessThanOne);
    }
    let one = Surd::rational(Q::one(), &p.base_norm_sq());
    let den = (&one - &norm).scale(&Q::from_integer(4.into()));
    Ok(p.with_scale(p.scale.div(&den).expect("1−‖p‖ > 0")))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RaySample {
    pub t: Q,
    pub point: ScaledPair,
    /// Distance from β(t·q) to q/‖q‖.
    pub distance: Surd,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RayReport {
    pub samples: Vec<RaySample>,
    pub limit: ScaledPair,
    pub decreasing: bool,
}

/// β(t·q) along the samples, with exact distances to q/‖q‖.
pub fn ray_limit(q: &ScaledPair, samples: &[Q]) -> Result<RayReport> {
    if q.is_zero() {
        return Err(Error::ZeroDirection);
    }
    if samples.iter().any(|t| !t.is_positive()) || samples.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidSamples);
    }
    let n = q.base_norm_sq();
    let root = Surd::root(&n);
    let limit = q.with_scale(q.scale.div(&q.norm()).expect("q ≠ 0"));
    let samples: Vec<RaySample> = samples
        .iter()
        .map(|t| {
            let point = beta(&q.with_scale(q.scale.scale(t)));
            let distance = &(&point.scale - &limit.scale).abs() * &root;
            RaySample {
                t: t.clone(),
                point,
                distance,
            }
        })
        .collect();
    let decreasing = samples
        .windows(2)
        .all(|w| (&w[1].distance - &w[0].distance).signum() < 0);
    Ok(RayReport {
        samples,
        limit,
        decreasing,
    })
}

/// 6g−6 curves: the chain, then T(c₂)c₁, T(c₃)c₂, … and the inverse twists.
pub fn coordinate_curves(genus: usize) -> Result<Arc<Vec<NormalMulticurve>>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Vec<NormalMulticurve>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(c) = cache.lock().expect("cache poisoned").get(&genus) {
        return Ok(c.clone());
    }
    let chain = surface(genus)?.chain();
    let mut out = chain.clone();
    for e in [1, -1] {
        for w in chain.windows(2) {
            out.push(MappingClass::twist(&w[1])?.pow(e).apply_curve(&w[0])?);
        }
    }
    out.truncate(6 * genus - 6);
    let out = Arc::new(out);
    cache
        .lock()
        .expect("cache poisoned")
        .insert(genus, out.clone());
    Ok(out)
}

/// Intersection numbers with the coordinate curves; positive on nonzero laminations since the chain fills.
pub fn lamination_coords(x: &WeightedMulticurve) -> Result<Vec<Q>> {
    coordinate_curves(x.genus())?
        .iter()
        .map(|c| intersection_with_curve(x, c))
        .collect()
}

/// Ambient dimension of the ball.
pub fn ambient_dim(genus: usize) -> usize {
    12 * genus - 12
}

#[derive(Clone, Debug)]
pub enum BallPoint {
    Interior {
        genus: usize,
        p: ScaledPair,
    },
    /// The class of (x, y); the normalized representative is (x, y)/√norm_sq.
    Boundary {
        x: WeightedMulticurve,
        y: WeightedMulticurve,
        norm_sq: Q,
    },
}

impl BallPoint {
    pub fn interior(genus: usize, p: ScaledPair) -> Result<Self> {
        let k = 6 * genus - 6;
        if p.len() != k {
            return Err(Error::Dimension {
                expected: k,
                found: p.len(),
            });
        }
        if !p.norm().lt_one() {
            return Err(Error::NormNotLessThanOne);
        }
        Ok(BallPoint::Interior { genus, p })
    }

    /// β of a coordinate vector.
    pub fn from_vector(genus: usize, v: &ScaledPair) -> Result<Self> {
        BallPoint::interior(genus, beta(v))
    }

    pub fn genus(&self) -> usize {
        match self {
            BallPoint::Interior { genus, .. } => *genus,
            BallPoint::Boundary { x, .. } => x.genus(),
        }
    }

    pub fn is_boundary(&self) -> bool {
        matches!(self, BallPoint::Boundary { .. })
    }
}

fn pair_norm_sq(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<Q> {
    Ok(norm_sq(&[lamination_coords(x)?, lamination_coords(y)?]))
}

/// Projective class of (x, y), scaled so the largest weight is 1.
pub fn boundary_from_pair(x: &WeightedMulticurve, y: &WeightedMulticurve) -> Result<BallPoint> {
    if x.genus() != y.genus() {
        return Err(Error::SurfaceMismatch);
    }
    if x.is_zero() && y.is_zero() {
        return Err(Error::BothZero);
    }
    let m = x
        .components()
        .iter()
        .chain(y.components())
        .map(|(_, w)| w)
        .max()
        .expect("nonzero")
        .clone();
    let k = m.recip();
    let sc = |z: &WeightedMulticurve| {
        if z.is_zero() {
            Ok(z.clone())
        } else {
            scale(z, &k)
        }
    };
    let (x, y) = (sc(x)?, sc(y)?);
    let norm_sq = pair_norm_sq(&x, &y)?;
    Ok(BallPoint::Boundary { x, y, norm_sq })
}

/// Some t > 0 with (x₂, y₂) = t·(x₁, y₁).
pub fn proportional(
    (x1, y1): (&WeightedMulticurve, &WeightedMulticurve),
    (x2, y2): (&WeightedMulticurve, &WeightedMulticurve),
) -> bool {
    let first = |a: &WeightedMulticurve, b: &WeightedMulticurve| {
        a.components()
            .first()
            .map(|(c, w)| (c.clone(), w.clone(), b.weight_of(c)))
    };
    let t = match first(x1, x2).or_else(|| first(y1, y2)) {
        Some((_, w, Some(v))) => v / w,
        Some((_, _, None)) => return false,
        None => return x2.is_zero() && y2.is_zero(),
    };
    let ok = |a: &WeightedMulticurve, b: &WeightedMulticurve| match scale(a, &t) {
        Ok(s) => s.equivalent(b),
        Err(_) => false,
    };
    let ok = |a: &WeightedMulticurve, b: &WeightedMulticurve| {
        if a.is_zero() {
            b.is_zero()
        } else {
            ok(a, b)
        }
    };
    ok(x1, x2) && ok(y1, y2)
}

impl PartialEq for BallPoint {
    fn eq(&self, o: &Self) -> bool {
        match (self, o) {
            (BallPoint::Interior { genus: g, p }, BallPoint::Interior { genus: h, p: q }) => {
                g == h && p == q
            }
            (BallPoint::Boundary { x, y, .. }, BallPoint::Boundary { x: u, y: v, .. }) => {
                x.genus() == u.genus() && proportional((x, y), (u, v))
            }
            _ => false,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum BallDoc {
    Interior {
        genus: usize,
        v: [VecDoc; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        scale: Option<SurdDoc>,
    },
    Boundary {
        pair: (WeightedMulticurve, WeightedMulticurve),
        #[serde(with = "serde_q")]
        norm_sq: Q,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(transparent)]
struct VecDoc(#[serde(with = "serde_qvec")] Vec<Q>);

impl Serialize for BallPoint {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BallPoint::Interior { genus, p } => {
                let (v, scale) = match p.rational_entries() {
                    Some(r) => (r, None),
                    None => (p.v.clone(), Some(p.scale.to_doc())),
                };
                let [a, b] = v;
                BallDoc::Interior {
                    genus: *genus,
                    v: [VecDoc(a), VecDoc(b)],
                    scale,
                }
            }
            BallPoint::Boundary { x, y, norm_sq } => BallDoc::Boundary {
                pair: (x.clone(), y.clone()),
                norm_sq: norm_sq.clone(),
            },
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for BallPoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match BallDoc::deserialize(d)? {
            BallDoc::Interior {
                genus,
                v: [a, b],
                scale,
            } => {
                let mut p = ScaledPair::new(a.0, b.0).map_err(D::Error::custom)?;
                if let Some(sd) = scale {
                    p.scale = Surd::from_doc(&sd).map_err(D::Error::custom)?;
                    let n = p.base_norm_sq();
                    if !p.scale.b.is_zero() && p.scale.d != n {
                        return Err(D::Error::custom("scale radicand must be the squared norm"));
                    }
                    p.scale.d = n;
                }
                BallPoint::interior(genus, p).map_err(D::Error::custom)
            }
            BallDoc::Boundary {
                pair: (x, y),
                norm_sq,
            } => {
                let pt = boundary_from_pair(&x, &y).map_err(D::Error::custom)?;
                let n = pair_norm_sq(&x, &y).map_err(D::Error::custom)?;
                if n != norm_sq {
                    return Err(D::Error::custom(format!("norm_sq should be {}", fmt_q(&n))));
                }
                Ok(pt)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceFailure {
    pub pair: usize,
    pub probe: usize,
    #[serde(with = "serde_q")]
    pub pushed: Q,
    #[serde(with = "serde_q")]
    pub pulled: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivarianceReport {
    pub checks: usize,
    pub failures: Vec<EquivarianceFailure>,
}

impl EquivarianceReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Length spectrum of the pushed structure at g against the original at f⁻¹g.
pub fn equivariance_check(
    f: &MappingClass,
    pairs: &[(WeightedMulticurve, WeightedMulticurve)],
    probes: &[NormalMulticurve],
) -> Result<EquivarianceReport> {
    let g = f.genus();
    if pairs.iter().any(|(x, y)| x.genus() != g || y.genus() != g)
        || probes.iter().any(|c| c.genus() != g)
    {
        return Err(Error::SurfaceMismatch);
    }
    let finv = f.inverse();
    let pulled_probes = probes
        .iter()
        .map(|c| finv.apply_curve(c))
        .collect::<Result<Vec<_>>>()?;
    let mut rep = EquivarianceReport {
        checks: 0,
        failures: Vec::new(),
    };
    for (pi, (x, y)) in pairs.iter().enumerate() {
        let m = mixed_from_pair(x, y)?;
        let fm = mixed_from_pair(&f.apply(x)?, &f.apply(y)?)?;
        for (gi, (c, fc)) in probes.iter().zip(&pulled_probes).enumerate() {
            let pushed = spectrum(&fm, c)?.l1;
            let pulled = spectrum(&m, fc)?.l1;
            rep.checks += 1;
            if pushed != pulled {
                rep.failures.push(EquivarianceFailure {
                    pair: pi,
                    probe: gi,
                    pushed,
                    pulled,
                });
            }
        }
    }
    Ok(rep)
}

/// Parses "p/q" entries.
pub fn parse_vector(items: &[String]) -> Result<Vec<Q>> {
    items.iter().map(|s| parse_q(s)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use crate::surface::new_surface;

    fn pair(a: &[i64], b: &[i64]) -> ScaledPair {
        ScaledPair::new(
            a.iter().map(|&x| qi(x)).collect(),
            b.iter().map(|&x| qi(x)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn surd_arith() {
        let r2 = Surd::root(&qi(2));
        assert_eq!(&r2 * &r2, Surd::rational(qi(2), &qi(2)));
        assert_eq!(Surd::root(&qi(9)).as_rational(), Some(&qi(3)));
        let x = &Surd::rational(qi(1), &qi(2)) + &r2;
        assert_eq!(&x * &x.recip().unwrap(), Surd::rational(qi(1), &qi(2)));
        assert_eq!(Surd::new(qi(3), qi(-2), qi(2)).signum(), 1);
        assert_eq!(Surd::new(qi(2), qi(-2), qi(2)).signum(), -1);
        assert_eq!(Surd::new(q(1, 2), qi(-1), q(1, 4)).signum(), 0);
    }

    #[test]
    fn beta_examples() {
        let z = pair(&[0, 0], &[0, 0]);
        assert_eq!(beta(&z), z);
        assert_eq!(beta_inv(&z).unwrap(), z);
        // ‖v‖ = 1
        let v = pair(&[1, 0], &[0, 0]);
        let b = beta(&v);
        assert_eq!(
            b.rational_entries().unwrap(),
            [vec![q(4, 5), qi(0)], vec![qi(0), qi(0)]]
        );
        assert_eq!(b.norm(), Surd::rational(q(4, 5), &qi(1)));
        assert_eq!(beta_inv(&b).unwrap(), v);
        let on = pair(&[1, 0], &[0, 1]);
        assert_eq!(beta_inv(&on), Err(Error::NormNotLessThanOne));
    }

    #[test]
    fn beta_irrational() {
        let v = pair(&[1, 1, 0], &[0, 1, 0]);
        let b = beta(&v);
        assert!(b.rational_entries().is_none());
        assert!(b.norm().lt_one());
        assert_eq!(beta_inv(&b).unwrap(), v);
        let p = beta_inv(&b.with_scale(b.scale.scale(&q(1, 2)))).unwrap();
        assert_eq!(beta(&p), b.with_scale(b.scale.scale(&q(1, 2))));
    }

    #[test]
    fn rays() {
        let qv = pair(&[1, 0], &[0, 0]);
        let r = ray_limit(&qv, &[qi(1), qi(10), qi(100)]).unwrap();
        let d: Vec<Surd> = r.samples.iter().map(|s| s.distance.clone()).collect();
        assert_eq!(
            d,
            [q(1, 5), q(1, 41), q(1, 401)]
                .map(|x| Surd::rational(x, &qi(1)))
                .to_vec()
        );
        assert!(r.decreasing);
        let r2 = ray_limit(&pair(&[2, 0], &[0, 0]), &[qi(1)]).unwrap();
        assert_eq!(r.limit, r2.limit);
        assert_eq!(
            ray_limit(&pair(&[0], &[0]), &[qi(1)]),
            Err(Error::ZeroDirection)
        );
        let r3 = ray_limit(&pair(&[1, 1], &[0, 0]), &[qi(1), qi(2)]).unwrap();
        assert!(r3.decreasing);
    }

    fn w(n: &str, k: i64) -> WeightedMulticurve {
        WeightedMulticurve::curve(&new_surface(2).unwrap().fixture(n).unwrap(), qi(k)).unwrap()
    }

    #[test]
    fn boundary_points() {
        let a = boundary_from_pair(&w("c1", 1), &w("c2", 1)).unwrap();
        let b = boundary_from_pair(&w("c1", 3), &w("c2", 3)).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = boundary_from_pair(&w("c1", 1), &w("c2", 2)).unwrap();
        let d = boundary_from_pair(&w("c1", 2), &w("c2", 1)).unwrap();
        assert_ne!(c, d);
        let z = WeightedMulticurve::zero(2);
        assert!(boundary_from_pair(&z, &w("c1", 1)).unwrap().is_boundary());
        assert_eq!(boundary_from_pair(&z, &z), Err(Error::BothZero));
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<BallPoint>(&s).unwrap(), c);
        let i = BallPoint::from_vector(2, &pair(&[1, 1, 0, 0, 0, 0], &[0; 6])).unwrap();
        let s = serde_json::to_string(&i).unwrap();
        assert_eq!(serde_json::from_str::<BallPoint>(&s).unwrap(), i);
        assert!(BallPoint::from_vector(2, &pair(&[1], &[0])).is_err());
    }

    #[test]
    fn equivariance_examples() {
        let s = new_surface(2).unwrap();
        let pairs = vec![
            (w("c1", 1), w("c2", 1)),
            (w("c3", 2), w("c2", 1).plus(&w("c5", 1)).unwrap()),
        ];
        let probes = vec![s.fixture("c2").unwrap(), s.fixture("c3").unwrap()];
        let id = MappingClass::identity(2);
        assert!(equivariance_check(&id, &pairs, &probes).unwrap().ok());
        let t = MappingClass::parse(2, "T(c1)").unwrap();
        let rep = equivariance_check(&t, &pairs, &probes).unwrap();
        assert_eq!(rep.checks, 4);
        assert!(rep.ok());
    }

    #[test]
    fn coordinate_curves_are_distinct() {
        for g in 2..=4 {
            let cs = coordinate_curves(g).unwrap();
            assert_eq!(cs.len(), 6 * g - 6);
            for (i, a) in cs.iter().enumerate() {
                assert!(cs[..i]
                    .iter()
                    .all(|b| !crate::lamination::curves_isotopic(a, b)));
            }
        }
    }
}
