//! Gorenstein projective tests with proofs, witnesses and a checked complete resolution.
//!
//! ```bash
//! cargo run --example gp_test
//! ```

use std::sync::Arc;

use frobex::algebra::Algebra;
use frobex::decompose::simple_modules;
use frobex::field::PrimeField;
use frobex::gproj::{complete_resolution, gp_test, is_projective, verify_complete_resolution, GpOptions};

fn main() -> frobex::Result<()> {
    let f2 = PrimeField::new(2)?;

    let dual = Arc::new(Algebra::truncated_polynomial(&f2, "x", 2));
    let k = simple_modules(&dual)[0].clone();
    for shortcut in [true, false] {
        let cert = gp_test(&k, GpOptions { bound: 12, self_injective_shortcut: shortcut, seed: 0 })?;
        println!("k over F2[x]/(x^2), shortcut {shortcut}: {} by {:?}", cert.verdict, cert.proof);
        if let Some(cr) = complete_resolution(&k, &cert, 2) {
            println!("  complete resolution window checks: {:?}", verify_complete_resolution(&k, &cr)?);
        }
    }

    let ut2 = Arc::new(Algebra::upper_triangular_2(&f2));
    for s in simple_modules(&ut2) {
        let cert = gp_test(&s, GpOptions::with_bound(12))?;
        println!("UT2 simple (projective = {}): {} witness {:?}", is_projective(&s), cert.verdict, cert.witness);
    }
    Ok(())
}
