//! Zeta series of the running example for every character of conductor 1 at
//! p = 5, next to the closed forms.
use igusa::padic::{enumerate_characters, measure_level_sets, MeasureOptions};
use igusa::zeta::{example_polynomial, golden_character_series, zeta_series};

fn main() {
    let p = 5;
    let k_max = 20;
    let table = measure_level_sets(&example_polynomial(), p, k_max as u32, 1, &MeasureOptions::default()).unwrap();
    for chi in enumerate_characters(p, 1).unwrap() {
        let oracle = zeta_series(&table, &chi).unwrap();
        let closed = golden_character_series(&chi, k_max).unwrap();
        println!("chi = {chi}");
        for (k, (a, b)) in oracle.coeffs.iter().zip(&closed).enumerate() {
            if a.is_zero() && b.is_zero() {
                continue;
            }
            let (za, zb) = (a.to_complex(), b.to_complex());
            println!("  t^{k:<2} oracle {:>13.6e}{:+.6e}i   closed {:>13.6e}{:+.6e}i", za.re, za.im, zb.re, zb.im);
        }
    }
}
