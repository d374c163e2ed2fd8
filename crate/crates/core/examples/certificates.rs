//! Jobs on JSON documents, certificates with content hashes, and independent re-verification.
//!
//! ```bash
//! cargo run --example certificates
//! ```

use serde_json::json;

use frobex::doc::{run_job, to_pretty, verify, JobSpec, Operation};

fn main() -> frobex::Result<()> {
    let module = json!({
        "schema": 1, "kind": "module", "field": {"p": 2},
        "algebra": {"named": "truncated_polynomial", "var": "x", "m": 2},
        "dim": 1, "action": [[[1]], [[0]]]
    });
    let out = run_job(&JobSpec::new(Operation::GpTest, vec![("module", module)], 8, 0))?;
    print!("{}", to_pretty(&out.document));
    println!("verdict {}, accepted = {}", out.verdict, verify(&out.document)?.accepted);

    let mut forged = out.document.clone();
    forged["result"]["certificate"]["verdict"] = json!("NotGP");
    println!("forged certificate accepted = {}", verify(&forged)?.accepted);
    Ok(())
}
