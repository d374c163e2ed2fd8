//! Separability of `k ⊂ k[G]` across groups and fields.
//!
//! ```bash
//! cargo run --example maschke
//! ```

use frobex::corpus::{group_extension, group_tables};
use frobex::field::{Field, PrimeField, Rationals};
use frobex::frobenius::{find_separability_element, verify_separability};

fn separable<F: Field>(f: &F, table: &[Vec<usize>]) -> frobex::Result<bool> {
    let ext = group_extension(f, table);
    Ok(match find_separability_element(&ext)? {
        Some(e) => verify_separability(&ext, &e),
        None => false,
    })
}

fn main() -> frobex::Result<()> {
    println!("{:<4} {:>4} {:>4} {:>4} {:>4}", "G", "F2", "F3", "F5", "Q");
    for (name, table) in group_tables() {
        let mut row = format!("{name:<4}");
        for p in [2, 3, 5] {
            row += &format!(" {:>4}", if separable(&PrimeField::new(p)?, &table)? { "yes" } else { "no" });
        }
        row += &format!(" {:>4}", if separable(&Rationals, &table)? { "yes" } else { "no" });
        println!("{row}");
    }
    Ok(())
}
