//! Newton polygon, fan of normal cones, its simple refinement and the
//! Kouchnirenko scan for a polynomial given on the command line.
use igusa::geom::{conical_subdivision, kouchnirenko_check, newton_polygon, refine_to_simple, refinement_rays};
use igusa::poly::parse_poly;

fn main() {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(y^3-x^2)^2+x^4*y^4".into());
    let f = parse_poly(&text).expect("polynomial");
    let poly = newton_polygon(&f).expect("nonzero polynomial");
    println!("f = {f}");
    println!("vertices: {:?}", poly.vertices);
    for e in &poly.edges {
        println!("edge {:?} -> {:?}, normal {:?}, d = {}", e.start, e.end, e.normal, e.d);
    }
    let fan = conical_subdivision(&poly);
    let refined = refine_to_simple(&fan);
    for cone in &refined {
        println!("{:<16} meets {}", cone.to_string(), poly.face_label(cone.face));
    }
    println!("added rays: {:?}", refinement_rays(&fan, &refined));
    let report = kouchnirenko_check(&f, 5).unwrap();
    println!("non-degenerate mod 5: {}", report.nondegenerate);
    for c in report.degenerate_checks() {
        println!("  singular on {:?} at {:?}", c.target, c.witness.unwrap());
    }
}
