//! Intersection numbers from the hyperbolic structure on the regular 4g-gon.
//! Walks become words in the side pairings; i(a,b) counts double cosets <A>k<B> with k·axis(B) crossing axis(A).

use std::f64::consts::PI;

use lamcore::surface::{NormalMulticurve, Side};
use lamcore::walk;
use num::complex::Complex64 as C;

/// [[a, b], [conj b, conj a]] acting on the disk.
#[derive(Clone, Copy, Debug)]
pub struct Mob {
    a: C,
    b: C,
}

impl Mob {
    pub const ID: Mob = Mob {
        a: C { re: 1.0, im: 0.0 },
        b: C { re: 0.0, im: 0.0 },
    };

    fn rot(t: f64) -> Mob {
        Mob {
            a: C::from_polar(1.0, t / 2.0),
            b: C::new(0.0, 0.0),
        }
    }

    fn boost(t: f64) -> Mob {
        Mob {
            a: C::new((t / 2.0).cosh(), 0.0),
            b: C::new((t / 2.0).sinh(), 0.0),
        }
    }

    pub fn mul(&self, o: &Mob) -> Mob {
        Mob {
            a: self.a * o.a + self.b * o.b.conj(),
            b: self.a * o.b + self.b * o.a.conj(),
        }
    }

    pub fn inv(&self) -> Mob {
        Mob {
            a: self.a.conj(),
            b: -self.b,
        }
    }

    pub fn apply(&self, z: C) -> C {
        (self.a * z + self.b) / (self.b.conj() * z + self.a.conj())
    }

    /// ±I, allowing for rounding in long products; distinct elements of the group sit far apart.
    pub fn is_identity(&self) -> bool {
        self.b.norm() < 1e-2 && (self.a.norm() - 1.0).abs() < 1e-2 && self.a.im.abs() < 1e-2
    }

    pub fn translation_length(&self) -> f64 {
        2.0 * self.a.re.abs().acosh()
    }

    /// Endpoints of the axis.
    pub fn fixed_points(&self) -> (C, C) {
        let r = (self.a.re * self.a.re - 1.0).max(0.0).sqrt();
        let i = C::new(0.0, self.a.im);
        let d = self.b.conj();
        ((i + r) / d, (i - r) / d)
    }
}

/// Extra powers of the periods tried when matching double cosets.
const SLACK: usize = 2;

pub struct Pairings {
    genus: usize,
    gens: Vec<Mob>,
}

fn partner(j: usize) -> usize {
    let base = 4 * (j / 4);
    base + (j % 4 + 2) % 4
}

fn polygon_side(j: usize) -> Side {
    let k = j / 4;
    let e = 2 * k + (j % 4) % 2;
    (2 * e + usize::from(j % 4 >= 2)) as Side
}

impl Pairings {
    pub fn new(genus: usize) -> Self {
        let n = 4 * genus;
        let d = (1.0 / (PI / n as f64).tan()).acosh();
        let th = |j: usize| 2.0 * PI * j as f64 / n as f64;
        let gens = (0..n)
            .map(|j| {
                Mob::rot(th(j))
                    .mul(&Mob::boost(2.0 * d))
                    .mul(&Mob::rot(PI - th(partner(j))))
            })
            .collect();
        Pairings { genus, gens }
    }

    fn side_index(&self, s: Side) -> Option<usize> {
        (0..4 * self.genus).find(|&j| polygon_side(j) == s)
    }

    /// Tiles visited by one period of the walk, and the deck transformation of the period.
    pub fn lift(&self, w: &[Side]) -> (Vec<Mob>, Mob) {
        let mut g = Mob::ID;
        let mut tiles = vec![g];
        for &s in w {
            if let Some(j) = self.side_index(s) {
                g = g.mul(&self.gens[j]);
                tiles.push(g);
            }
        }
        tiles.pop();
        (tiles, g)
    }
}

fn angle(z: C) -> f64 {
    z.im.atan2(z.re)
}

/// Whether the chord (u, v) separates p from q on the circle.
fn interleaved(p: f64, q: f64, u: f64, v: f64) -> bool {
    let inside = |x: f64| {
        let (lo, hi) = if p < q { (p, q) } else { (q, p) };
        x > lo && x < hi
    };
    inside(u) != inside(v)
}

pub struct Oracle {
    pairings: Pairings,
}

impl Oracle {
    pub fn new(genus: usize) -> Self {
        Oracle {
            pairings: Pairings::new(genus),
        }
    }

    pub fn word(&self, c: &NormalMulticurve) -> Mob {
        let w = walk::trace(&c.surface(), c.coords()).remove(0);
        self.pairings.lift(&w).1
    }

    /// i(a, b) for primitive curves: double cosets <A> k <B> whose lift k·axis(B) crosses axis(A).
    pub fn intersection(&self, a: &NormalMulticurve, b: &NormalMulticurve) -> u64 {
        let s = a.surface();
        let wa = walk::trace(&s, a.coords()).remove(0);
        let wb = walk::trace(&s, b.coords()).remove(0);
        let (ta, ma) = self.pairings.lift(&wa);
        let (tb, mb) = self.pairings.lift(&wb);
        let (p, q) = ma.fixed_points();
        let (bp, bq) = mb.fixed_points();
        let lb: Vec<(C, C)> = tb
            .iter()
            .map(|h| (h.inv().apply(bp), h.inv().apply(bq)))
            .collect();
        // a short period has to wind further along the other axis
        let (ta_len, tb_len) = (ma.translation_length(), mb.translation_length());
        let powers = |m: &Mob, n: usize| {
            let mut out = vec![Mob::ID];
            let (mut f, mut r) = (Mob::ID, Mob::ID);
            for _ in 0..n {
                f = f.mul(m);
                r = r.mul(&m.inv());
                out.push(f);
                out.push(r);
            }
            out
        };
        let window = |x: f64, y: f64| (x / y).ceil() as usize + SLACK;
        let (pa, pb) = (
            powers(&ma, window(tb_len, ta_len)),
            powers(&mb, window(ta_len, tb_len)),
        );
        let mut found: Vec<Mob> = Vec::new();
        for g in &ta {
            let gi = g.inv();
            let (p, q) = (gi.apply(p), gi.apply(q));
            for (h, &(u, v)) in tb.iter().zip(&lb) {
                // lifts of distinct closed geodesics are never asymptotic
                let near = |x: C, y: C| (x - y).norm() < 1e-9;
                if near(u, p) || near(u, q) || near(v, p) || near(v, q) {
                    continue;
                }
                if !interleaved(angle(p), angle(q), angle(u), angle(v)) {
                    continue;
                }
                let k = g.mul(&h.inv());
                let seen = found.iter().any(|k0| {
                    let d = k0.inv();
                    pa.iter().any(|an| {
                        let x = d.mul(an).mul(&k);
                        pb.iter().any(|bm| x.mul(bm).is_identity())
                    })
                });
                if !seen {
                    found.push(k);
                }
            }
        }
        found.len() as u64
    }
}
