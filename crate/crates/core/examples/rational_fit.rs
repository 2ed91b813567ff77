//! Recovers the rational function behind the cusp's zeta series.
use igusa::arith::candidate_poles_global;
use igusa::padic::{measure_level_sets, Character, MeasureOptions};
use igusa::poly::parse_poly;
use igusa::zeta::{fit_rational, zeta_series, FitOptions, FitOutcome};

fn main() {
    let f = parse_poly("y^2-x^3").unwrap();
    let p = 3;
    let table = measure_level_sets(&f, p, 16, 1, &MeasureOptions::default()).unwrap();
    let series = zeta_series(&table, &Character::trivial(p)).unwrap().rational_coeffs().unwrap();
    let mut basis = candidate_poles_global(&f, p).unwrap().factor_pairs();
    if !basis.contains(&(1, 1)) {
        basis.push((1, 1));
    }
    println!("basis {basis:?}");
    match fit_rational(&series, p, &basis, &FitOptions::default()).unwrap() {
        FitOutcome::Consistent { function, checked, .. } => {
            println!("Z(s) = {function}");
            let poles: Vec<String> = function.pole_real_parts().iter().map(ToString::to_string).collect();
            println!("poles at Re(s) = {} (checked {checked} coefficients)", poles.join(", "));
        }
        FitOutcome::Inconsistent { first_violation, .. } => println!("no fit, first violation at t^{first_violation}"),
    }
}
