//! Frobenius systems for `R ⊂ R[x]/(x^2)` and for a seven-dimensional subalgebra of `M_4(F_5)`.
//!
//! ```bash
//! cargo run --example frobenius_system
//! ```

use frobex::algebra::Algebra;
use frobex::corpus::{dual_numbers_extension, m4_subalgebra_extension};
use frobex::field::PrimeField;
use frobex::frobenius::{check_frobenius, verify_frobenius_system};

fn main() -> frobex::Result<()> {
    let f3 = PrimeField::new(3)?;
    let ext = dual_numbers_extension(Algebra::ground(&f3));
    let sys = check_frobenius(&ext, 0)?.expect("dual numbers are Frobenius");
    println!("F3 ⊂ F3[x]/(x^2): {} dual pairs, verified = {}", sys.pairs.len(), verify_frobenius_system(&ext, &sys));

    let ext = m4_subalgebra_extension();
    let sys = check_frobenius(&ext, 0)?.expect("Frobenius");
    println!(
        "7-dim subalgebra ⊂ M4(F5): tau is {}x{}, {} dual pairs, verified = {}",
        sys.tau.rows(),
        sys.tau.cols(),
        sys.pairs.len(),
        verify_frobenius_system(&ext, &sys)
    );
    Ok(())
}
