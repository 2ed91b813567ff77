//! Level-set measures of the running example on Z_5², then the mass check.
use igusa::padic::{measure_level_sets, MeasureOptions};
use igusa::poly::parse_poly;

fn main() {
    let f = parse_poly("(y^3-x^2)^2+x^4*y^4").unwrap();
    let k_max: u32 = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(8);
    let table = measure_level_sets(&f, 5, k_max, 1, &MeasureOptions::default()).unwrap();
    println!("f = {f}, p = 5, K = {k_max}, c = 1");
    println!("cells visited: {}, deepest level: {}", table.stats.visited, table.stats.max_depth);
    for k in 0..=k_max {
        let row: Vec<String> = table.mu[k as usize].iter().map(|q| q.to_string()).collect();
        println!("k={k:>2}  total={:<16} by ac: {}", table.level_total(k).to_string(), row.join(" "));
    }
    println!("tail = {}", table.tail);
    println!("sum of all measures = {}", table.total());
}
