//! Geometric Newton polygon, its fan of normal cones, simple-cone refinement and
//! the Kouchnirenko non-degeneracy scan over `(F_p^×)²`.

use std::cmp::Ordering;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::poly::{ModPoly, Monomial, Poly};

pub type Vec2 = (u64, u64);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("the zero polynomial has no Newton polygon")]
    ZeroPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub start: Monomial,
    pub end: Monomial,
    /// Primitive inner normal `(a1, a2)`.
    pub normal: Vec2,
    /// Supporting value `d = <normal, start> = <normal, end>`.
    pub d: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeomNewtonPolygon {
    pub vertices: Vec<Monomial>,
    pub edges: Vec<Edge>,
}

/// A face of the polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Face {
    Vertex {
        index: usize,
    },
    Edge {
        index: usize,
    },
    /// Vertical half-line above the first vertex, met by `(1, 0)`.
    RayUp,
    /// Horizontal half-line right of the last vertex, met by `(0, 1)`.
    RayRight,
    Whole,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cone {
    pub generators: Vec<Vec2>,
    pub face: Face,
    pub simple: bool,
}

impl Cone {
    fn ray(g: Vec2, face: Face) -> Self {
        Cone { generators: vec![g], face, simple: true }
    }

    fn span(g1: Vec2, g2: Vec2, face: Face) -> Self {
        Cone { generators: vec![g1, g2], face, simple: det(g1, g2).abs() == 1 }
    }

    pub fn dimension(&self) -> usize {
        self.generators.len()
    }

    /// Whether `a` lies in the relative interior.
    pub fn contains_in_interior(&self, a: Vec2) -> bool {
        match self.generators[..] {
            [g] => det(g, a) == 0 && a != (0, 0),
            [g1, g2] => {
                let s = det(g1, g2).signum();
                det(g1, a).signum() == s && det(a, g2).signum() == s
            }
            _ => false,
        }
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = self.generators.iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "<{}>", gens.join(", "))
    }
}

pub(crate) fn det(u: Vec2, v: Vec2) -> i128 {
    u.0 as i128 * v.1 as i128 - u.1 as i128 * v.0 as i128
}

fn dot(a: Vec2, m: Monomial) -> u64 {
    a.0 * u64::from(m.0) + a.1 * u64::from(m.1)
}

/// Fan order: `r` precedes `s` when it is closer to `(0, 1)`.
fn fan_cmp(r: &Vec2, s: &Vec2) -> Ordering {
    det(*r, *s).cmp(&0)
}

pub fn newton_polygon(f: &Poly) -> Result<GeomNewtonPolygon, GeomError> {
    if f.is_zero() {
        return Err(GeomError::ZeroPolynomial);
    }
    let mut pts: Vec<Monomial> = f.support().collect();
    pts.sort();
    // Staircase: for increasing i keep points with strictly smaller j.
    let mut stair: Vec<Monomial> = Vec::new();
    for p in pts {
        if stair.last().is_none_or(|q| p.1 < q.1) {
            stair.push(p);
        }
    }
    let mut hull: Vec<Monomial> = Vec::new();
    for p in stair {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 as i64 - o.0 as i64) * (p.1 as i64 - o.1 as i64)
                - (a.1 as i64 - o.1 as i64) * (p.0 as i64 - o.0 as i64);
            if cross > 0 {
                break;
            }
            hull.pop();
        }
        hull.push(p);
    }
    let edges = hull
        .windows(2)
        .map(|w| {
            let (s, e) = (w[0], w[1]);
            let di = u64::from(e.0 - s.0);
            let dj = u64::from(s.1 - e.1);
            let g = di.gcd(&dj);
            let normal = (dj / g, di / g);
            Edge { start: s, end: e, normal, d: dot(normal, s) }
        })
        .collect();
    Ok(GeomNewtonPolygon { vertices: hull, edges })
}

impl GeomNewtonPolygon {
    pub fn m_value(&self, a: Vec2) -> u64 {
        self.vertices.iter().map(|v| dot(a, *v)).min().unwrap_or(0)
    }

    pub fn first_meet_locus(&self, a: Vec2) -> Face {
        match a {
            (0, 0) => Face::Whole,
            (0, _) => Face::RayRight,
            (_, 0) => Face::RayUp,
            _ => {
                let m = self.m_value(a);
                let hits: Vec<usize> = (0..self.vertices.len()).filter(|k| dot(a, self.vertices[*k]) == m).collect();
                match hits[..] {
                    [k] => Face::Vertex { index: k },
                    [k, _] => Face::Edge { index: k },
                    _ => unreachable!("a line meets a convex chain in a vertex or an edge"),
                }
            }
        }
    }

    /// All bounded faces followed by the whole polygon.
    pub fn compact_faces(&self) -> Vec<Face> {
        let mut out: Vec<Face> = (0..self.vertices.len()).map(|index| Face::Vertex { index }).collect();
        out.extend((0..self.edges.len()).map(|index| Face::Edge { index }));
        out.push(Face::Whole);
        out
    }

    pub fn face_label(&self, face: Face) -> String {
        match face {
            Face::Vertex { index } => {
                let (i, j) = self.vertices[index];
                format!("vertex ({i},{j})")
            }
            Face::Edge { index } => {
                let e = &self.edges[index];
                format!("edge normal ({},{}) d={}", e.normal.0, e.normal.1, e.d)
            }
            Face::RayUp => "ray i=min".into(),
            Face::RayRight => "ray j=min".into(),
            Face::Whole => "whole polygon".into(),
        }
    }

    /// Edges with a nonzero supporting value.
    pub fn proper_edges(&self) -> impl Iterator<Item = (usize, &Edge)> {
        self.edges.iter().enumerate().filter(|(_, e)| e.d != 0)
    }
}

/// Terms of `f` lying on `face`.
pub fn face_function(f: &Poly, poly: &GeomNewtonPolygon, face: Face) -> Poly {
    match face {
        Face::Whole => f.clone(),
        Face::Vertex { index } => {
            let v = poly.vertices[index];
            f.filter_terms(|m| m == v)
        }
        Face::Edge { index } => {
            let e = &poly.edges[index];
            f.filter_terms(|m| dot(e.normal, m) == e.d)
        }
        Face::RayUp => {
            let i0 = poly.vertices[0].0;
            f.filter_terms(|m| m.0 == i0)
        }
        Face::RayRight => {
            let j0 = poly.vertices[poly.vertices.len() - 1].1;
            f.filter_terms(|m| m.1 == j0)
        }
    }
}

/// Rays and 2D cones in fan order from `(0, 1)` to `(1, 0)`.
pub fn conical_subdivision(poly: &GeomNewtonPolygon) -> Vec<Cone> {
    let last = poly.vertices.len() - 1;
    // Rays in fan order paired with the face they meet; between consecutive
    // rays sits the cone of one vertex, walking the vertices right to left.
    let mut rays: Vec<(Vec2, Face)> = vec![((0, 1), Face::RayRight)];
    for k in (0..poly.edges.len()).rev() {
        rays.push((poly.edges[k].normal, Face::Edge { index: k }));
    }
    rays.push(((1, 0), Face::RayUp));

    let mut cones = Vec::with_capacity(2 * rays.len() - 1);
    for (k, (g, face)) in rays.iter().enumerate() {
        cones.push(Cone::ray(*g, *face));
        if let Some((next, _)) = rays.get(k + 1) {
            cones.push(Cone::span(*g, *next, Face::Vertex { index: last - k }));
        }
    }
    cones
}

/// Rays strictly inside `<u, v>` that split it into simple cones, in fan order.
pub fn simple_refinement_rays(g1: Vec2, g2: Vec2) -> Vec<Vec2> {
    let (mut u, v) = if det(g1, g2) > 0 { (g1, g2) } else { (g2, g1) };
    let mut out = Vec::new();
    while det(u, v) > 1 {
        let p0 = solve_unit_det(u);
        // p = p0 + t u; det(p, v) = det(p0, v) + t det(u, v) must be >= 0.
        let d = det(u, v);
        let dp0v = p0.0 * v.1 as i128 - p0.1 * v.0 as i128;
        let t = Integer::div_ceil(&-dp0v, &d);
        let p = ((p0.0 + t * u.0 as i128) as u64, (p0.1 + t * u.1 as i128) as u64);
        out.push(p);
        u = p;
    }
    out.sort_by(fan_cmp);
    out
}

/// Some integer `p` with `det(u, p) = 1`.
fn solve_unit_det(u: Vec2) -> (i128, i128) {
    let (a, b) = (u.0 as i128, u.1 as i128);
    // a p1 - b p0 = 1
    let e = a.extended_gcd(&b);
    debug_assert_eq!(e.gcd, 1);
    (-e.y, e.x)
}

/// Refines every non-simple 2D cone, keeping rays and already-simple cones.
pub fn refine_to_simple(cones: &[Cone]) -> Vec<Cone> {
    let mut out = Vec::new();
    for cone in cones {
        match cone.generators[..] {
            [g1, g2] if !cone.simple => {
                let mut chain = vec![g1];
                chain.extend(simple_refinement_rays(g1, g2));
                chain.push(g2);
                chain.sort_by(fan_cmp);
                for (k, w) in chain.windows(2).enumerate() {
                    if k > 0 {
                        out.push(Cone::ray(w[0], cone.face));
                    }
                    out.push(Cone::span(w[0], w[1], cone.face));
                }
            }
            _ => out.push(cone.clone()),
        }
    }
    out
}

/// Rays introduced by [`refine_to_simple`] (those absent from `original`).
pub fn refinement_rays(original: &[Cone], refined: &[Cone]) -> Vec<Vec2> {
    refined
        .iter()
        .filter(|c| c.dimension() == 1)
        .map(|c| c.generators[0])
        .filter(|g| !original.iter().any(|c| c.dimension() == 1 && c.generators[0] == *g))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CheckTarget {
    Face {
        face: Face,
        label: String,
    },
    /// Singular points of `f̄` on the torus.
    TorusSingular,
    /// Face function of vertex `vertex` of the arithmetic polygon at `theta` on `edge`.
    ArithVertex {
        edge: usize,
        theta: u64,
        vertex: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceCheck {
    pub target: CheckTarget,
    /// First `(x, y)` in `(F_p^×)²` with `g = g_x = g_y = 0`, lexicographically.
    pub witness: Option<(u64, u64)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub p: u64,
    pub checks: Vec<FaceCheck>,
    pub nondegenerate: bool,
    pub origin_singular: bool,
}

impl NondegeneracyReport {
    pub fn degenerate_checks(&self) -> impl Iterator<Item = &FaceCheck> {
        self.checks.iter().filter(|c| c.witness.is_some())
    }
}

/// First torus point where `g` and both partials vanish mod p.
pub fn torus_singular_witness(g: &ModPoly) -> Option<(u64, u64)> {
    let p = g.p();
    let (gx, gy) = (g.derivative_x(), g.derivative_y());
    (1..p)
        .flat_map(|x| (1..p).map(move |y| (x, y)))
        .find(|&(x, y)| g.eval(x, y) == 0 && gx.eval(x, y) == 0 && gy.eval(x, y) == 0)
}

pub fn origin_singular(f: &Poly, p: u64) -> bool {
    f.reduce_mod_p(p).is_singular_zero(0, 0)
}

pub fn kouchnirenko_check(f: &Poly, p: u64) -> Result<NondegeneracyReport, GeomError> {
    let poly = newton_polygon(f)?;
    let faces = poly.compact_faces();
    let checks: Vec<FaceCheck> = faces
        .par_iter()
        .map(|face| {
            let g = face_function(f, &poly, *face).reduce_mod_p(p);
            FaceCheck {
                target: CheckTarget::Face { face: *face, label: poly.face_label(*face) },
                witness: torus_singular_witness(&g),
            }
        })
        .collect();
    Ok(NondegeneracyReport {
        p,
        nondegenerate: checks.iter().all(|c| c.witness.is_none()),
        checks,
        origin_singular: origin_singular(f, p),
    })
}
