//! Local zeta functions `Z(s, f, χ) = ∫_{Z_p²} χ(ac f) |f|^s |dx ∧ dy|` of
//! bivariate integer polynomials.
//!
//! * [`poly`]: sparse polynomials over `Z` and `F_p`, parsing, quasi-homogeneous parts.
//! * [`geom`]: Newton polygon, normal fan, simple refinement, Kouchnirenko scan.
//! * [`arith`]: arithmetic Newton polygons at tangent-cone roots and candidate poles.
//! * [`padic`]: multiplicative characters and exact level-set measures on `Z_p²`.
//! * [`zeta`]: zeta series, rational functions in `t = p^{-s}`, fitting, closed forms.
//! * [`expsum`]: exponential sums mod `p^m`, directly and through zeta coefficients.
//! * [`report`]: the JSON reports and error classes behind the `igusa` binary.

pub mod arith;
pub mod cyclotomic;
pub mod expsum;
pub mod frac;
pub mod geom;
pub mod padic;
pub mod poly;
pub mod report;
pub mod zeta;
