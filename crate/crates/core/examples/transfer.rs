//! GP verdicts over `A`, over `R` after restriction, and for `A ⊗_R M`, along Frobenius extensions.
//!
//! ```bash
//! cargo run --example transfer
//! ```

use frobex::corpus::{frobenius_extensions_fp, random_module};
use frobex::gproj::{transfer_report, GpOptions};

fn main() -> frobex::Result<()> {
    for (name, ext) in frobenius_extensions_fp().into_iter().take(4) {
        let seeds = if name.starts_with("UT2") { 0..10 } else { 0..2 };
        for seed in seeds {
            let m = random_module(&ext.amb, seed, 5);
            let rep = transfer_report(&ext, &m, GpOptions::with_bound(12))?;
            println!(
                "{name:<22} seed {seed}: A {:<6} R {:<6} A⊗R {:<6} separable {:<5} violations {}",
                rep.ambient.verdict.to_string(),
                rep.restricted.verdict.to_string(),
                rep.induced.verdict.to_string(),
                rep.separable,
                rep.violations.len()
            );
        }
    }
    Ok(())
}
