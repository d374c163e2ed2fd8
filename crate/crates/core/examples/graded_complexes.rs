//! Complexes over `R` as graded `R[x]/(x^2)`-modules: three GP verdicts and a graded witness.
//!
//! ```bash
//! cargo run --example graded_complexes
//! ```

use std::sync::Arc;

use frobex::algebra::Algebra;
use frobex::corpus::random_complex;
use frobex::decompose::simple_modules;
use frobex::field::PrimeField;
use frobex::gproj::GpOptions;
use frobex::graded::{bar_module, three_way_gp_check, verify_graded_complete_resolution, ComplexOfModules, DualNumbers};
use frobex::module::ModuleRep;

fn show(name: &str, c: &ComplexOfModules<PrimeField>) -> frobex::Result<()> {
    let rep = three_way_gp_check(c, GpOptions::with_bound(12))?;
    println!("{name}: graded/ungraded/itemwise = {:?}, agree = {}", rep.verdicts(), rep.agree());
    if let Some(w) = &rep.graded.resolution {
        println!("  graded witness verifies: {}", verify_graded_complete_resolution(c, w, 0)?.all());
    }
    Ok(())
}

fn main() -> frobex::Result<()> {
    let f2 = PrimeField::new(2)?;
    let y = DualNumbers::new(Arc::new(Algebra::truncated_polynomial(&f2, "y", 2)));
    let ut2 = DualNumbers::new(Arc::new(Algebra::upper_triangular_2(&f2)));

    show("bar(R) over F2[y]/(y^2)", &bar_module(&y, &ModuleRep::regular(y.r.clone())))?;
    for s in simple_modules(&ut2.r) {
        show("UT2 simple in degree 0", &ComplexOfModules::concentrated(ut2.clone(), 0, s))?;
    }
    for seed in 0..3 {
        show(&format!("random complex over UT2, seed {seed}"), &random_complex(&ut2, seed, 3))?;
    }
    Ok(())
}
