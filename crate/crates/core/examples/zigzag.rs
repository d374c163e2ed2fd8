//! Extract a small acyclic subcomplex of projectives containing a chosen submodule.
//!
//! ```bash
//! cargo run --example zigzag
//! ```

use std::sync::Arc;

use frobex::algebra::Algebra;
use frobex::corpus::{random_contractible, random_submodule};
use frobex::field::PrimeField;
use frobex::module::ModuleRep;
use frobex::zigzag::{extract_acyclic_subcomplex, verify_zigzag};

fn main() -> frobex::Result<()> {
    let f2 = PrimeField::new(2)?;
    let alg = Arc::new(Algebra::truncated_polynomial(&f2, "x", 2));
    for seed in 0..4 {
        let p = random_contractible(&alg, seed);
        let m = random_submodule(&p.complex().item(0), seed);
        let z = extract_acyclic_subcomplex(&p, &m, seed)?;
        let dims = |c: &frobex::graded::ComplexOfModules<PrimeField>| -> Vec<usize> {
            p.complex().degrees().map(|i| c.item(i).dim()).collect()
        };
        println!(
            "seed {seed}: P dims {:?}, M dim {}, D dims {:?} after {} rounds, contract holds = {}",
            p.complex().items().iter().map(ModuleRep::dim).collect::<Vec<_>>(),
            m.rank(),
            dims(&z.sub),
            z.rounds,
            verify_zigzag(&p, &m, &z).all()
        );
    }
    Ok(())
}
