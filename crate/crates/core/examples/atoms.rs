//! Entry laws: exact moments and the Gaussian moment-matching check.

use wigner_bridge::atoms::{gaussian_reference, goe_gue_match_check};
use wigner_bridge::rational::int;
use wigner_bridge::AtomSpec;

fn main() -> wigner_bridge::Result<()> {
    let laws = [
        AtomSpec::gauss_real(int(1)),
        AtomSpec::rademacher(),
        AtomSpec::uniform_unit(),
        AtomSpec::two_point_m4(int(5))?,
        AtomSpec::heavy_tail(),
        AtomSpec::skewed_m4_3(),
    ];
    println!("{:<44} {:>8} {:>8} {:>8}", "law", "E x^2", "E x^3", "E x^4");
    for law in &laws {
        println!(
            "{:<44} {:>8} {:>8} {:>8}",
            law.to_string(),
            law.moment(2, 0)?.to_string(),
            law.moment(3, 0)?.to_string(),
            law.moment(4, 0)?.to_string()
        );
    }

    let (diag, _) = gaussian_reference(1);
    for law in &laws {
        let mismatches = goe_gue_match_check(&diag, law, 1, 4)?;
        let list: Vec<String> = mismatches.iter().map(|m| format!("({},{})", m.r, m.s)).collect();
        println!("{law}: mismatches up to order 4: [{}]", list.join(" "));
    }
    Ok(())
}
