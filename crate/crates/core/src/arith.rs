//! Arithmetic Newton polygons at residue-field roots of the tangent cone, the
//! arithmetic non-degeneracy scan, and candidate pole sets.

use std::collections::BTreeSet;
use std::fmt;

use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frac::{qi, serde_q, serde_q_vec, Q};
use crate::geom::{self, CheckTarget, FaceCheck, GeomError, NondegeneracyReport};
use crate::poly::{Poly, SqhDecomposition, Weight};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("prime {p} divides the tangent cone (every coefficient of f0 is divisible by p)")]
    PrimeDividesTangentCone { p: u64 },
    #[error("vertex index {k} out of range 1..={r}")]
    VertexOutOfRange { k: usize, r: usize },
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A root `θ ∈ F_p^×` of `f̄0(1, y^a)` with its multiplicity in every part.
///
/// `multiplicities[j]` is `None` when `f̄_j` vanishes identically mod p.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootData {
    pub theta: u64,
    pub multiplicities: Vec<Option<u32>>,
}

pub fn tangent_cone_roots(sqh: &SqhDecomposition, p: u64) -> Result<Vec<RootData>, ArithError> {
    let a = u32::try_from(sqh.weight.0).expect("weight fits in u32");
    let restricted: Vec<_> = sqh.parts.iter().map(|part| part.poly.reduce_mod_p(p).univariate_restriction(a)).collect();
    if restricted[0].is_zero() {
        return Err(ArithError::PrimeDividesTangentCone { p });
    }
    Ok(restricted[0]
        .unit_roots()
        .into_iter()
        .map(|theta| RootData {
            theta,
            multiplicities: restricted.iter().map(|g| g.root_multiplicity(theta)).collect(),
        })
        .collect())
}

/// `w_j(z) = intercept + slope·z`, with `intercept = d_j − d0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithLine {
    pub part: usize,
    pub intercept: u64,
    pub slope: u64,
}

impl ArithLine {
    pub fn at(&self, z: &Q) -> Q {
        qi(self.intercept) + qi(self.slope) * z
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    /// `𝒟_k`
    pub big_d: u64,
    /// `ε_k`
    pub eps: u64,
    /// Index into `lines`.
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithNewtonPolygon {
    pub weight: Weight,
    pub d0: u64,
    pub theta: u64,
    pub lines: Vec<ArithLine>,
    pub segments: Vec<Segment>,
    #[serde(with = "serde_q_vec")]
    pub taus: Vec<Q>,
}

/// Lower envelope over `z ≥ 0` of `intercept + slope·z`.
///
/// Returns the indices of the lines carrying each segment (left to right) and
/// the abscissas of the vertices between them. The minimal intercept must be
/// unique.
pub fn lower_envelope(lines: &[(u64, u64)]) -> (Vec<usize>, Vec<Q>) {
    assert!(!lines.is_empty(), "envelope of no lines");
    let start = (0..lines.len()).min_by_key(|k| (lines[*k].0, lines[*k].1)).unwrap();
    let mut chain = vec![start];
    let mut taus: Vec<Q> = Vec::new();
    let mut cur = start;
    loop {
        let (b, s) = lines[cur];
        let mut best: Option<(Q, u64, usize)> = None;
        for (k, &(bk, sk)) in lines.iter().enumerate() {
            if sk >= s {
                continue;
            }
            let z = Q::new((bk as i128 - b as i128).into(), ((s - sk) as i128).into());
            let better = match &best {
                None => true,
                Some((bz, bs, _)) => z < *bz || (z == *bz && sk < *bs),
            };
            if better {
                best = Some((z, sk, k));
            }
        }
        match best {
            Some((z, _, k)) => {
                taus.push(z);
                chain.push(k);
                cur = k;
            }
            None => return (chain, taus),
        }
    }
}

impl ArithNewtonPolygon {
    pub fn from_lines(weight: Weight, d0: u64, theta: u64, lines: Vec<ArithLine>) -> Self {
        let raw: Vec<(u64, u64)> = lines.iter().map(|l| (l.intercept, l.slope)).collect();
        let (chain, taus) = lower_envelope(&raw);
        let segments = chain
            .into_iter()
            .map(|k| Segment { big_d: d0 + lines[k].intercept, eps: lines[k].slope, line: k })
            .collect();
        ArithNewtonPolygon { weight, d0, theta, lines, segments, taus }
    }

    /// Number of vertices `r`.
    pub fn r(&self) -> usize {
        self.taus.len()
    }

    /// Envelope value at `z ≥ 0`.
    pub fn envelope_at(&self, z: &Q) -> Q {
        self.lines.iter().map(|l| l.at(z)).min().expect("at least one line")
    }

    /// Segment-chain value at `z`: the segment whose interval contains `z`.
    pub fn chain_at(&self, z: &Q) -> Q {
        let k = self.taus.iter().take_while(|t| *t < z).count();
        let seg = self.segments[k];
        qi(seg.big_d - self.d0) + qi(seg.eps) * z
    }

    /// Human-readable boundary pieces, e.g. `w=2z on [0,4]`, `w=8 for z>=4`.
    pub fn boundary_description(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            let c = seg.big_d - self.d0;
            let w = match (c, seg.eps) {
                (c, 0) => format!("w={c}"),
                (0, e) => format!("w={e}z"),
                (c, e) => format!("w={c}+{e}z"),
            };
            let lo = if k == 0 { Q::zero() } else { self.taus[k - 1].clone() };
            match self.taus.get(k) {
                Some(hi) => out.push(format!("{w} on [{lo},{hi}]")),
                None => out.push(format!("{w} for z>={lo}")),
            }
        }
        out
    }
}

/// Builds `Γ_{f,θ}` from a decomposition and root data. Parts that vanish
/// mod p carry no line.
pub fn arithmetic_newton_polygon(sqh: &SqhDecomposition, root: &RootData) -> ArithNewtonPolygon {
    let d0 = sqh.base_degree();
    let lines = sqh
        .parts
        .iter()
        .zip(&root.multiplicities)
        .enumerate()
        .filter_map(|(j, (part, m))| m.map(|e| ArithLine { part: j, intercept: part.degree - d0, slope: u64::from(e) }))
        .collect();
    ArithNewtonPolygon::from_lines(sqh.weight, d0, root.theta, lines)
}

/// Sum of the parts whose line passes through vertex `k` (1-based).
pub fn face_function_at_vertex(
    sqh: &SqhDecomposition,
    polygon: &ArithNewtonPolygon,
    k: usize,
) -> Result<Poly, ArithError> {
    let r = polygon.r();
    if k == 0 || k > r {
        return Err(ArithError::VertexOutOfRange { k, r });
    }
    let z = &polygon.taus[k - 1];
    let env = polygon.envelope_at(z);
    Ok(polygon.lines.iter().filter(|l| l.at(z) == env).fold(Poly::zero(), |acc, l| &acc + &sqh.parts[l.part].poly))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArithFormula {
    /// `−1/ε_i`
    InverseSlope,
    /// `−((a+b)+τ_i)/(𝒟_{i+1}+ε_{i+1}τ_i)`
    NextSegment,
    /// `−((a+b)+τ_i)/(𝒟_i+ε_iτ_i)`
    ThisSegment,
    /// `−1/ε_{r+1}`
    TerminalSlope,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoleOrigin {
    ConstantMinusOne,
    Geometric { edge: usize },
    Arithmetic { edge: usize, theta: u64, index: usize, formula: ArithFormula },
}

/// Candidate real part `−A/B`; `(A, B)` are kept unreduced so that
/// `1 − q^{−A} t^B` is the matching denominator factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidatePole {
    pub a: u64,
    pub b: u64,
    pub origin: PoleOrigin,
}

impl CandidatePole {
    pub fn value(&self) -> Q {
        -Q::new(self.a.into(), self.b.into())
    }

    pub fn factor(&self) -> (u64, u64) {
        (self.a, self.b)
    }
}

impl fmt::Display for CandidatePole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

fn ratio_pair(num: Q, den: Q) -> (u64, u64) {
    // Clear the common denominator of the two rationals.
    let l = num_integer::Integer::lcm(num.denom(), den.denom());
    let a = (num * Q::from_integer(l.clone())).to_integer();
    let b = (den * Q::from_integer(l)).to_integer();
    (a.to_u64().expect("pole numerator"), b.to_u64().expect("pole denominator"))
}

pub fn candidate_poles_theta(polygon: &ArithNewtonPolygon, edge: usize) -> Vec<CandidatePole> {
    let ab = qi(polygon.weight.0 + polygon.weight.1);
    let theta = polygon.theta;
    let tag = |index: usize, formula| PoleOrigin::Arithmetic { edge, theta, index, formula };
    let mut out = Vec::new();
    let segs = &polygon.segments;
    for (i, tau) in polygon.taus.iter().enumerate() {
        let (s, t) = (segs[i], segs[i + 1]);
        if s.eps != 0 {
            out.push(CandidatePole { a: 1, b: s.eps, origin: tag(i + 1, ArithFormula::InverseSlope) });
        }
        for (seg, formula) in [(t, ArithFormula::NextSegment), (s, ArithFormula::ThisSegment)] {
            let (a, b) = ratio_pair(&ab + tau, qi(seg.big_d) + qi(seg.eps) * tau);
            out.push(CandidatePole { a, b, origin: tag(i + 1, formula) });
        }
    }
    let last = segs[segs.len() - 1];
    if last.eps != 0 {
        out.push(CandidatePole { a: 1, b: last.eps, origin: tag(segs.len(), ArithFormula::TerminalSlope) });
    }
    out
}

/// Arithmetic data attached to one compact edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeArith {
    pub edge: usize,
    pub weight: Weight,
    pub sqh: SqhDecomposition,
    pub roots: Vec<RootData>,
    pub polygons: Vec<ArithNewtonPolygon>,
    pub warnings: Vec<String>,
}

pub fn analyze_edges(f: &Poly, p: u64) -> Result<Vec<EdgeArith>, ArithError> {
    let poly = geom::newton_polygon(f)?;
    let mut out = Vec::new();
    for (k, e) in poly.edges.iter().enumerate() {
        let weight = Weight(e.normal.0, e.normal.1);
        let sqh = f.sqh_decompose(weight).expect("edge normals are primitive");
        let mut warnings = Vec::new();
        if weight.0 % p == 0 {
            warnings.push(format!(
                "p={p} divides the weight a={}; residue-field multiplicities may differ from characteristic zero",
                weight.0
            ));
        }
        let roots = tangent_cone_roots(&sqh, p)?;
        for (j, m) in roots.first().map(|r| r.multiplicities.clone()).unwrap_or_default().iter().enumerate() {
            if m.is_none() {
                warnings.push(format!("part {j} vanishes mod {p} and is left out of the arithmetic polygons"));
            }
        }
        let polygons = roots.iter().map(|r| arithmetic_newton_polygon(&sqh, r)).collect();
        out.push(EdgeArith { edge: k, weight, sqh, roots, polygons, warnings });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateSet {
    pub poles: Vec<CandidatePole>,
    /// Distinct real parts, descending.
    #[serde(with = "serde_q_vec")]
    pub values: Vec<Q>,
    #[serde(with = "serde_q")]
    pub beta: Q,
    pub warnings: Vec<String>,
}

impl CandidateSet {
    /// Distinct `(A, B)` factor pairs, in first-seen order.
    pub fn factor_pairs(&self) -> Vec<(u64, u64)> {
        let mut seen = BTreeSet::new();
        self.poles.iter().map(CandidatePole::factor).filter(|fp| seen.insert(*fp)).collect()
    }
}

pub fn candidate_poles_global(f: &Poly, p: u64) -> Result<CandidateSet, ArithError> {
    let poly = geom::newton_polygon(f)?;
    let mut poles = vec![CandidatePole { a: 1, b: 1, origin: PoleOrigin::ConstantMinusOne }];
    for (k, e) in poly.proper_edges() {
        poles.push(CandidatePole { a: e.normal.0 + e.normal.1, b: e.d, origin: PoleOrigin::Geometric { edge: k } });
    }
    let edges = analyze_edges(f, p)?;
    let mut warnings = Vec::new();
    for ea in &edges {
        warnings.extend(ea.warnings.iter().cloned());
        for polygon in &ea.polygons {
            poles.extend(candidate_poles_theta(polygon, ea.edge));
        }
    }
    let max_of =
        |pred: fn(&PoleOrigin) -> bool| poles.iter().filter(|c| pred(&c.origin)).map(CandidatePole::value).max();
    let geom_max = max_of(|o| matches!(o, PoleOrigin::Geometric { .. }));
    let arith_max = max_of(|o| matches!(o, PoleOrigin::Arithmetic { .. }));
    let beta = match (geom_max, arith_max) {
        (None, None) => -Q::one(),
        (g, a) => g.into_iter().chain(a).max().unwrap(),
    };
    let mut values: Vec<Q> = poles.iter().map(CandidatePole::value).collect::<BTreeSet<_>>().into_iter().collect();
    values.reverse();
    debug_assert!(values.iter().all(|v| v.is_negative()));
    Ok(CandidateSet { poles, values, beta, warnings })
}

/// Arithmetic non-degeneracy modulo p: origin singular, no torus singular
/// point of `f̄`, and no torus singular zero of any vertex face function.
pub fn arithmetic_nondegeneracy_check(f: &Poly, p: u64) -> Result<NondegeneracyReport, ArithError> {
    let origin_singular = geom::origin_singular(f, p);
    let mut checks = vec![FaceCheck {
        target: CheckTarget::TorusSingular,
        witness: geom::torus_singular_witness(&f.reduce_mod_p(p)),
    }];
    for ea in analyze_edges(f, p)? {
        for polygon in &ea.polygons {
            for k in 1..=polygon.r() {
                let fq = face_function_at_vertex(&ea.sqh, polygon, k)?;
                checks.push(FaceCheck {
                    target: CheckTarget::ArithVertex { edge: ea.edge, theta: polygon.theta, vertex: k },
                    witness: geom::torus_singular_witness(&fq.reduce_mod_p(p)),
                });
            }
        }
    }
    Ok(NondegeneracyReport {
        p,
        nondegenerate: origin_singular && checks.iter().all(|c| c.witness.is_none()),
        checks,
        origin_singular,
    })
}
