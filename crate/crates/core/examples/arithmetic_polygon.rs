//! Arithmetic Newton polygons at the tangent-cone roots and the candidate poles.
use igusa::arith::{analyze_edges, arithmetic_nondegeneracy_check, candidate_poles_global};
use igusa::poly::parse_poly;

fn main() {
    let f = parse_poly("(y^3-x^2)^2+x^4*y^4").unwrap();
    let p = 5;
    for ea in analyze_edges(&f, p).unwrap() {
        println!("edge {} with weight {:?}, parts of degree {:?}", ea.edge, ea.weight, ea.sqh.degrees());
        for polygon in &ea.polygons {
            println!("  theta = {}: {}", polygon.theta, polygon.boundary_description().join(", "));
        }
    }
    let set = candidate_poles_global(&f, p).unwrap();
    for pole in &set.poles {
        println!("{:>6}  from {:?}", pole.to_string(), pole.origin);
    }
    println!("beta = {}", set.beta);
    println!("arithmetically non-degenerate mod {p}: {}", arithmetic_nondegeneracy_check(&f, p).unwrap().nondegenerate);
}
