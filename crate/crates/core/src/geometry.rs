//! Conic geometry on the radial compactification.
//!
//! A closed conic set is stored as a vertex `a` and a polyhedral cone `G`;
//! it stands for the closure of `a + G`. Directions at infinity are unit
//! vectors. Nothing at infinity is ever materialized.

use num_complex::Complex64 as C64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};

const GEN_EPS: f64 = 1e-14;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Extended real number. Serialized as a number or as "-inf" / "+inf".
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub enum ExtReal {
    NegInf,
    Finite(f64),
    PosInf,
}

impl ExtReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtReal::Finite(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtReal::Finite(_))
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::NegInf => s.serialize_str("-inf"),
            ExtReal::PosInf => s.serialize_str("+inf"),
            ExtReal::Finite(v) => s.serialize_f64(*v),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) if s == "-inf" => Ok(ExtReal::NegInf),
            serde_json::Value::String(s) if s == "+inf" || s == "inf" => Ok(ExtReal::PosInf),
            serde_json::Value::Number(n) => Ok(ExtReal::Finite(n.as_f64().unwrap_or(f64::NAN))),
            _ => Err(de::Error::custom(format!("bad extended real {v}"))),
        }
    }
}

/// Which space a direction lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Space {
    #[default]
    Base,
    Complexified,
}

/// A point at infinity, identified with a unit vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    pub unit: Vec<f64>,
    #[serde(default, skip_serializing_if = "is_base")]
    pub space: Space,
}

fn is_base(s: &Space) -> bool {
    *s == Space::Base
}

impl Direction {
    pub fn new(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::Invalid("direction must be a finite nonzero vector".into()));
        }
        Ok(Direction { unit: v.iter().map(|x| x / n).collect(), space: Space::Base })
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction { unit: vec![theta.cos(), theta.sin()], space: Space::Base }
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }
}

/// Conic hull of finitely many generators.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedralCone {
    pub generators: Vec<Vec<f64>>,
    pub dim: usize,
}

impl PolyhedralCone {
    pub fn new(dim: usize, generators: Vec<Vec<f64>>) -> Result<Self> {
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, got: g.len() });
            }
            if norm(g) <= GEN_EPS || g.iter().any(|x| !x.is_finite()) {
                return Err(Error::Invalid("cone generators must be finite and nonzero".into()));
            }
        }
        Ok(PolyhedralCone { generators, dim })
    }

    /// The cone {0}.
    pub fn zero(dim: usize) -> Self {
        PolyhedralCone { generators: vec![], dim }
    }

    /// Closed first orthant.
    pub fn orthant(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|k| (0..dim).map(|j| if j == k { 1.0 } else { 0.0 }).collect())
            .collect();
        PolyhedralCone { generators, dim }
    }

    /// Conic hulls are always convex.
    pub fn is_convex(&self) -> bool {
        true
    }

    pub fn is_proper(&self) -> bool {
        self.interior_dual_direction().is_some()
    }

    /// Some ξ₀ with ⟨g, ξ₀⟩ > 0 for every generator, if one exists.
    pub fn interior_dual_direction(&self) -> Option<Vec<f64>> {
        let gens: Vec<Vec<f64>> = self.generators.iter().map(|g| unit(g)).collect();
        if gens.is_empty() {
            let mut e = vec![0.0; self.dim];
            e[0] = 1.0;
            return Some(e);
        }
        let ok = |xi: &[f64]| gens.iter().all(|g| dot(g, xi) > 1e-12);
        match self.dim {
            1 => {
                let s = gens[0][0].signum();
                if gens.iter().all(|g| g[0].signum() == s) {
                    Some(vec![s])
                } else {
                    None
                }
            }
            2 => {
                let (lo, hi, base) = angular_span(&gens)?;
                let mid = base + 0.5 * (lo + hi);
                let xi = vec![mid.cos(), mid.sin()];
                if ok(&xi) {
                    Some(xi)
                } else {
                    None
                }
            }
            _ => {
                // Perceptron iterations; sufficient for the small cones in use.
                let mut xi: Vec<f64> = vec![0.0; self.dim];
                for g in &gens {
                    for (x, gi) in xi.iter_mut().zip(g) {
                        *x += gi;
                    }
                }
                for _ in 0..10_000 {
                    if norm(&xi) > 0.0 && ok(&xi) {
                        return Some(unit(&xi));
                    }
                    let worst = gens
                        .iter()
                        .min_by(|a, b| dot(a, &xi).partial_cmp(&dot(b, &xi)).unwrap())
                        .unwrap();
                    for (x, gi) in xi.iter_mut().zip(worst) {
                        *x += gi;
                    }
                }
                None
            }
        }
    }

    /// Membership of a point in the closed cone (n ≤ 2 exact).
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if norm(x) <= tol {
            return true;
        }
        let gens: Vec<Vec<f64>> = self.generators.iter().map(|g| unit(g)).collect();
        if gens.is_empty() {
            return false;
        }
        self.distance_to(x) <= tol * (1.0 + norm(x))
            && (self.dim <= 2 || gens.iter().any(|g| dot(g, x) > 0.0))
    }

    /// Euclidean distance from `x` to the closed cone (exact for n ≤ 2).
    pub fn distance_to(&self, x: &[f64]) -> f64 {
        let gens: Vec<Vec<f64>> = self.generators.iter().map(|g| unit(g)).collect();
        if gens.is_empty() {
            return norm(x);
        }
        match self.dim {
            1 => {
                let pos = gens.iter().any(|g| g[0] > 0.0);
                let neg = gens.iter().any(|g| g[0] < 0.0);
                if (x[0] >= 0.0 && pos) || (x[0] <= 0.0 && neg) {
                    0.0
                } else {
                    x[0].abs()
                }
            }
            2 => {
                if let Some((lo, hi, base)) = angular_span(&gens) {
                    let r = norm(x);
                    let a = wrap(x[1].atan2(x[0]) - base);
                    if a >= lo && a <= hi {
                        return 0.0;
                    }
                    let d = wrap(a - lo).abs().min(wrap(a - hi).abs());
                    if d >= FRAC_PI_2 {
                        r
                    } else {
                        r * d.sin()
                    }
                } else {
                    0.0
                }
            }
            _ => {
                // Ray-wise bound; exact when a single generator is nearest.
                gens.iter()
                    .map(|g| {
                        let t = dot(g, x).max(0.0);
                        let p: Vec<f64> = x.iter().zip(g).map(|(xi, gi)| xi - t * gi).collect();
                        norm(&p)
                    })
                    .fold(f64::INFINITY, f64::min)
            }
        }
    }
}

fn unit(v: &[f64]) -> Vec<f64> {
    let n = norm(v);
    v.iter().map(|x| x / n).collect()
}

fn wrap(a: f64) -> f64 {
    let mut a = a % (2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    if a <= -PI {
        a += 2.0 * PI;
    }
    a
}

/// For 2D generators fitting in an open half-plane: (lo, hi, base) with every
/// generator angle equal to base + t, t ∈ [lo, hi], hi − lo < π.
fn angular_span(gens: &[Vec<f64>]) -> Option<(f64, f64, f64)> {
    let mut angles: Vec<f64> = gens.iter().map(|g| g[1].atan2(g[0])).collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = angles.len();
    // Largest circular gap; the span is its complement.
    let mut best = (angles[0] + 2.0 * PI - angles[m - 1], 0usize);
    for i in 1..m {
        let gap = angles[i] - angles[i - 1];
        if gap > best.0 {
            best = (gap, i);
        }
    }
    if best.0 <= PI + 1e-12 {
        return None;
    }
    let start = angles[best.1];
    let span = 2.0 * PI - best.0;
    Some((0.0, span, start))
}

/// Open dual cone G° = {ξ : ⟨g, ξ⟩ > 0 for all generators g}.
#[derive(Debug, Clone, PartialEq)]
pub struct DualCone {
    primal: Vec<Vec<f64>>,
    /// Generators of the closure of G°.
    pub generators: Vec<Vec<f64>>,
    pub dim: usize,
}

impl DualCone {
    pub fn contains(&self, xi: &[f64]) -> bool {
        self.primal.iter().all(|g| dot(g, xi) > 0.0)
    }
}

pub fn dual_cone(g: &PolyhedralCone) -> Result<DualCone> {
    if !g.is_proper() {
        return Err(Error::ImproperCone);
    }
    let primal: Vec<Vec<f64>> = g.generators.iter().map(|v| unit(v)).collect();
    let n = g.dim;
    let generators = if primal.is_empty() {
        let mut out = vec![];
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            out.push(e.clone());
            e[k] = -1.0;
            out.push(e);
        }
        out
    } else {
        match n {
            1 => vec![vec![primal[0][0].signum()]],
            2 => {
                let (lo, hi, base) = angular_span(&primal).expect("proper cone");
                let a = base + hi - FRAC_PI_2;
                let b = base + lo + FRAC_PI_2;
                if (b - a).abs() > PI - 1e-12 {
                    let m = 0.5 * (a + b);
                    vec![vec![a.cos(), a.sin()], vec![m.cos(), m.sin()], vec![b.cos(), b.sin()]]
                } else {
                    vec![vec![a.cos(), a.sin()], vec![b.cos(), b.sin()]]
                }
            }
            _ => {
                return Err(Error::Unsupported("dual generators only for n ≤ 2".into()));
            }
        }
    };
    Ok(DualCone { primal, generators, dim: n })
}

/// K = closure(a + G).
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedConicSet {
    pub vertex: Vec<f64>,
    pub cone: PolyhedralCone,
}

impl ClosedConicSet {
    pub fn new(vertex: Vec<f64>, cone: PolyhedralCone) -> Result<Self> {
        if vertex.len() != cone.dim {
            return Err(Error::DimensionMismatch { expected: cone.dim, got: vertex.len() });
        }
        if vertex.iter().any(|x| !x.is_finite()) {
            return Err(Error::Invalid("vertex must be finite".into()));
        }
        Ok(ClosedConicSet { vertex, cone })
    }

    pub fn point(a: Vec<f64>) -> Self {
        let n = a.len();
        ClosedConicSet { vertex: a, cone: PolyhedralCone::zero(n) }
    }

    /// a + closed first orthant.
    pub fn shifted_orthant(a: Vec<f64>) -> Self {
        let n = a.len();
        ClosedConicSet { vertex: a, cone: PolyhedralCone::orthant(n) }
    }

    /// The whole space (improper cone).
    pub fn whole(n: usize) -> Self {
        let mut generators = vec![];
        for k in 0..n {
            let mut e = vec![0.0; n];
            e[k] = 1.0;
            generators.push(e.clone());
            e[k] = -1.0;
            generators.push(e);
        }
        ClosedConicSet { vertex: vec![0.0; n], cone: PolyhedralCone { generators, dim: n } }
    }

    pub fn dim(&self) -> usize {
        self.cone.dim
    }

    pub fn is_compact(&self) -> bool {
        self.cone.generators.is_empty()
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        let d: Vec<f64> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        self.cone.contains(&d, tol)
    }

    pub fn distance_to(&self, x: &[f64]) -> f64 {
        let d: Vec<f64> = x.iter().zip(&self.vertex).map(|(a, b)| a - b).collect();
        self.cone.distance_to(&d)
    }

    /// 1D only: the set as an interval [lo, hi] (possibly infinite ends).
    pub fn interval(&self) -> Result<(f64, f64)> {
        if self.dim() != 1 {
            return Err(Error::DimensionMismatch { expected: 1, got: self.dim() });
        }
        let a = self.vertex[0];
        let pos = self.cone.generators.iter().any(|g| g[0] > 0.0);
        let neg = self.cone.generators.iter().any(|g| g[0] < 0.0);
        Ok((if neg { f64::NEG_INFINITY } else { a }, if pos { f64::INFINITY } else { a }))
    }

    /// Parses interval notation such as "[0,inf)", "(-inf,2]", "{1}" or "[1,1]".
    pub fn from_interval_str(s: &str) -> Result<Self> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Invalid(format!("bad interval `{s}`"));
        if let Some(inner) = t.strip_prefix('{').and_then(|r| r.strip_suffix('}')) {
            let a: f64 = inner.parse().map_err(|_| bad())?;
            return Ok(ClosedConicSet::point(vec![a]));
        }
        if t.len() < 3 {
            return Err(bad());
        }
        let inner = &t[1..t.len() - 1];
        let (l, r) = inner.split_once(',').ok_or_else(bad)?;
        let parse_end = |x: &str| -> Result<f64> {
            match x {
                "inf" | "+inf" | "∞" => Ok(f64::INFINITY),
                "-inf" | "-∞" => Ok(f64::NEG_INFINITY),
                _ => x.parse().map_err(|_| bad()),
            }
        };
        let (lo, hi) = (parse_end(l)?, parse_end(r)?);
        match (lo.is_finite(), hi.is_finite()) {
            (true, false) => Ok(ClosedConicSet { vertex: vec![lo], cone: PolyhedralCone { generators: vec![vec![1.0]], dim: 1 } }),
            (false, true) => Ok(ClosedConicSet { vertex: vec![hi], cone: PolyhedralCone { generators: vec![vec![-1.0]], dim: 1 } }),
            (true, true) if lo == hi => Ok(ClosedConicSet::point(vec![lo])),
            (false, false) => Ok(ClosedConicSet::whole(1)),
            _ => Err(Error::Unsupported("compact intervals of positive length are not conic sets".into())),
        }
    }

    /// Smallest set of the same form known to contain both (generator union
    /// plus the vertex offsets).
    pub fn hull_union(&self, other: &ClosedConicSet) -> ClosedConicSet {
        let n = self.dim();
        let vertex: Vec<f64> = (0..n).map(|k| self.vertex[k].min(other.vertex[k])).collect();
        let mut generators: Vec<Vec<f64>> = vec![];
        let mut push = |g: Vec<f64>| {
            if norm(&g) > GEN_EPS {
                let u = unit(&g);
                if !generators.iter().any(|h| norm(&h.iter().zip(&u).map(|(a, b)| a - b).collect::<Vec<_>>()) < 1e-12) {
                    generators.push(u);
                }
            }
        };
        for g in self.cone.generators.iter().chain(&other.cone.generators) {
            push(g.clone());
        }
        for v in [&self.vertex, &other.vertex] {
            push(v.iter().zip(&vertex).map(|(a, b)| a - b).collect());
        }
        ClosedConicSet { vertex, cone: PolyhedralCone { generators, dim: n } }
    }
}

impl Serialize for ClosedConicSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr<'a> {
            vertex: &'a [f64],
            generators: &'a [Vec<f64>],
        }
        Repr { vertex: &self.vertex, generators: &self.cone.generators }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ClosedConicSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            vertex: Vec<f64>,
            #[serde(default)]
            generators: Vec<Vec<f64>>,
        }
        let r = Repr::deserialize(d)?;
        let n = r.vertex.len();
        let cone = PolyhedralCone::new(n, r.generators).map_err(de::Error::custom)?;
        ClosedConicSet::new(r.vertex, cone).map_err(de::Error::custom)
    }
}

/// inf over K ∩ M of ⟨x, ξ⟩.
pub fn support_function(k: &ClosedConicSet, xi: &Direction) -> ExtReal {
    support_at(k, &xi.unit)
}

/// Homogeneous version: inf over K ∩ M of ⟨x, v⟩ for any real vector v.
pub fn support_at(k: &ClosedConicSet, v: &[f64]) -> ExtReal {
    if k.cone.generators.iter().any(|g| dot(g, v) < -1e-15 * norm(g)) {
        ExtReal::NegInf
    } else {
        ExtReal::Finite(dot(&k.vertex, v))
    }
}

/// inf over K ∩ M of Re⟨x, ζ⟩ for complex ζ.
pub fn support_complex(k: &ClosedConicSet, zeta: &[C64]) -> ExtReal {
    let re: Vec<f64> = zeta.iter().map(|z| z.re).collect();
    support_at(k, &re)
}

/// Whether ζ ∈ E*∞ lies in HPC{K}: ⟨g, Re ζ⟩ > 0 for every generator.
pub fn in_hpc(k: &ClosedConicSet, zeta: &[C64]) -> bool {
    let re: Vec<f64> = zeta.iter().map(|z| z.re).collect();
    let scale = zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    k.cone.generators.iter().all(|g| dot(&unit(g), &re) > 1e-14 * scale)
}

/// Family of closed half-spaces {x : ⟨x, ξ⟩ ≥ h}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpaceFamily {
    pub entries: Vec<(Direction, f64)>,
}

impl HalfSpaceFamily {
    pub fn contains(&self, x: &[f64]) -> bool {
        self.entries.iter().all(|(xi, h)| dot(x, &xi.unit) >= *h - 1e-12)
    }

    /// Distance lower bound from x to the polyhedron (largest violated margin).
    pub fn violation(&self, x: &[f64]) -> f64 {
        self.entries.iter().map(|(xi, h)| h - dot(x, &xi.unit)).fold(f64::NEG_INFINITY, f64::max)
    }
}

pub fn halfspace_hull(k: &ClosedConicSet, directions: &[Direction]) -> Result<HalfSpaceFamily> {
    let mut entries = vec![];
    for xi in directions {
        if xi.dim() != k.dim() {
            return Err(Error::DimensionMismatch { expected: k.dim(), got: xi.dim() });
        }
        if k.cone.generators.iter().all(|g| dot(g, &xi.unit) > 0.0) {
            if let ExtReal::Finite(h) = support_function(k, xi) {
                entries.push((xi.clone(), h));
            }
        }
    }
    if entries.is_empty() {
        return Err(Error::EmptyHpc);
    }
    Ok(HalfSpaceFamily { entries })
}

/// `m` equally spaced directions strictly inside the angular sector (lo, hi).
pub fn fan(lo: f64, hi: f64, m: usize) -> Vec<Direction> {
    (0..m).map(|j| Direction::from_angle(lo + (hi - lo) * (j as f64 + 0.5) / m as f64)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ray(a: f64) -> ClosedConicSet {
        ClosedConicSet::from_interval_str(&format!("[{a},inf)")).unwrap()
    }

    #[test]
    fn support_function_examples() {
        let k = ray(1.0);
        assert_eq!(support_function(&k, &Direction::new(&[1.0]).unwrap()), ExtReal::Finite(1.0));
        assert_eq!(support_function(&k, &Direction::new(&[-1.0]).unwrap()), ExtReal::NegInf);
        let k2 = ClosedConicSet::shifted_orthant(vec![1.0, 2.0]);
        assert_eq!(support_function(&k2, &Direction::new(&[1.0, 0.0]).unwrap()), ExtReal::Finite(1.0));
    }

    #[test]
    fn dual_of_quadrant_and_halfplane() {
        let q = PolyhedralCone::orthant(2);
        let d = dual_cone(&q).unwrap();
        assert!(d.contains(&[0.3, 0.1]));
        assert!(!d.contains(&[0.3, -0.1]));
        let h = PolyhedralCone::new(2, vec![vec![1.0, 0.0]]).unwrap();
        let d = dual_cone(&h).unwrap();
        assert!(d.contains(&[0.1, -5.0]));
        assert!(!d.contains(&[-0.1, 5.0]));
        assert_eq!(d.generators.len(), 3);
    }

    #[test]
    fn improper_cone_rejected() {
        let g = PolyhedralCone::new(1, vec![vec![1.0], vec![-1.0]]).unwrap();
        assert_eq!(dual_cone(&g), Err(Error::ImproperCone));
        let g = PolyhedralCone::new(2, vec![vec![1.0, 0.0], vec![-1.0, 0.1], vec![0.0, -1.0]]).unwrap();
        assert!(!g.is_proper());
    }

    #[test]
    fn hpc_examples() {
        let k = ray(0.0);
        assert!(in_hpc(&k, &[C64::new(1.0, 0.0)]));
        assert!(!in_hpc(&k, &[C64::new(0.0, 1.0)]));
        let q = ClosedConicSet::shifted_orthant(vec![0.0, 0.0]);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!(in_hpc(&q, &[C64::new(s, 0.3), C64::new(s, -0.2)]));
        assert!(in_hpc(&ClosedConicSet::point(vec![1.0]), &[C64::new(0.0, 1.0)]));
    }

    #[test]
    fn hull_of_ray() {
        let k = ray(1.0);
        let fam = halfspace_hull(&k, &[Direction::new(&[1.0]).unwrap(), Direction::new(&[-1.0]).unwrap()]).unwrap();
        assert_eq!(fam.entries.len(), 1);
        assert!(fam.contains(&[1.0]) && !fam.contains(&[0.99]));
        assert_eq!(halfspace_hull(&k, &[Direction::new(&[-1.0]).unwrap()]), Err(Error::EmptyHpc));
    }

    #[test]
    fn interval_parsing() {
        assert_eq!(ray(0.0).interval().unwrap(), (0.0, f64::INFINITY));
        let k = ClosedConicSet::from_interval_str("(-inf, 2]").unwrap();
        assert_eq!(k.interval().unwrap(), (f64::NEG_INFINITY, 2.0));
        assert!(ClosedConicSet::from_interval_str("{3}").unwrap().is_compact());
    }

    #[test]
    fn distances() {
        let q = ClosedConicSet::shifted_orthant(vec![0.0, 0.0]);
        assert!((q.distance_to(&[-1.0, 0.5]) - 1.0).abs() < 1e-12);
        assert!((q.distance_to(&[-1.0, -1.0]) - 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(q.distance_to(&[2.0, 0.5]), 0.0);
        assert!((ray(1.0).distance_to(&[-0.5]) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn json_roundtrip() {
        let k = ClosedConicSet::shifted_orthant(vec![1.0, 2.0]);
        let s = serde_json::to_string(&k).unwrap();
        assert_eq!(s, r#"{"vertex":[1.0,2.0],"generators":[[1.0,0.0],[0.0,1.0]]}"#);
        let back: ClosedConicSet = serde_json::from_str(&s).unwrap();
        assert_eq!(back, k);
        let e: Vec<ExtReal> = serde_json::from_str(r#"["-inf", 1.5, "+inf"]"#).unwrap();
        assert_eq!(e, vec![ExtReal::NegInf, ExtReal::Finite(1.5), ExtReal::PosInf]);
    }
}
