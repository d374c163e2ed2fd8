//! Algebras from structure constants, module decomposition, Hom spaces and the induction adjunction.
//!
//! ```bash
//! cargo run --example modules
//! ```

use std::sync::Arc;

use frobex::algebra::{groups, Algebra, AlgebraExtension};
use frobex::decompose::{decompose, pims, radical, simple_modules};
use frobex::field::PrimeField;
use frobex::module::{adjunction_check, hom_space, induce, ModuleRep};

fn main() -> frobex::Result<()> {
    let f3 = PrimeField::new(3)?;
    let s3 = Arc::new(Algebra::group_algebra(&f3, &groups::symmetric3(), None)?);
    println!("F3[S3]: dim {}, radical dim {}", s3.dim(), radical(&s3).cols());
    println!("  simples dims {:?}", simple_modules(&s3).iter().map(ModuleRep::dim).collect::<Vec<_>>());
    println!("  PIM dims {:?}", pims(&s3).iter().map(ModuleRep::dim).collect::<Vec<_>>());

    let reg = ModuleRep::regular(s3.clone());
    let parts = decompose(&reg, 0);
    println!("  regular module splits into {} indecomposables", parts.len());
    println!("  dim End(A) = {}", hom_space(&reg, &reg)?.dim());

    let ext = AlgebraExtension::over_ground_field(s3.clone());
    let triv = ModuleRep::regular(ext.sub.clone());
    println!("  induced from the trivial F3-module: dim {}", induce(&ext, &triv).dim());
    let rep = adjunction_check(&ext, &simple_modules(&s3)[0], &triv)?;
    println!("  Hom dimensions around the adjunction {:?}, all equal = {}", rep.dims, rep.all_equal);
    Ok(())
}
