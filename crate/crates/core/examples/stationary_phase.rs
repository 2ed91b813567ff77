//! Splits Z(s) into the part away from the singular residues and the part on
//! them: `Z = ν + σ (1 − p⁻¹) t / (1 − p⁻¹ t) + Z_singular`.
use num_traits::One;

use igusa::frac::{qpow, Q};
use igusa::padic::{measure_level_sets, Character, MeasureOptions};
use igusa::poly::parse_poly;
use igusa::zeta::{spf_data, zeta_series};

fn main() {
    let f = parse_poly("y^2-x^3+x*y^3").unwrap();
    let p = 5;
    let k_max = 8;
    let chi = Character::trivial(p);
    let spf = spf_data(&f, &chi, None).unwrap();
    println!("singular residues: {:?}", spf.singular);
    println!("nu = {}, sigma = {}", spf.nu.as_rational().unwrap(), spf.sigma);
    let full = zeta_series(&measure_level_sets(&f, p, k_max, 1, &MeasureOptions::default()).unwrap(), &chi).unwrap();
    let opts = MeasureOptions { restrict_to: Some(spf.singular.clone()), ..Default::default() };
    let singular = zeta_series(&measure_level_sets(&f, p, k_max, 1, &opts).unwrap(), &chi).unwrap();
    let full = full.rational_coeffs().unwrap();
    let singular = singular.rational_coeffs().unwrap();
    let one = Q::one();
    let p_inv = qpow(p, -1);
    let mut smooth = &spf.sigma * (&one - &p_inv);
    for k in 0..=k_max as usize {
        let away = if k == 0 { spf.nu.as_rational().unwrap() } else { smooth.clone() };
        if k > 0 {
            smooth *= &p_inv;
        }
        let ok = full[k] == &away + &singular[k];
        println!(
            "t^{k}: total {:<14} away {:<12} singular {:<12} {}",
            full[k].to_string(),
            away.to_string(),
            singular[k].to_string(),
            if ok { "ok" } else { "MISMATCH" }
        );
    }
}
