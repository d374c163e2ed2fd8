//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::process::{Command, ExitCode};
use std::sync::Arc;
use std::time::{Duration, Instant};

use serde_json::{json, Value};

use frobex::algebra::{Algebra, AlgebraExtension};
use frobex::corpus::{
    dual_numbers_extension, frobenius_extensions_fp, group_extension, group_tables, m4_subalgebra_extension,
    random_complex, random_contractible, random_module, random_submodule,
};
use frobex::decompose::{pims, simple_modules};
use frobex::doc::{
    complex_to_json, extension_to_json, make_document, module_to_json, run_job, to_pretty, vector_to_json, JobSpec,
    Kind, Operation,
};
use frobex::field::{Field, FieldTag, PrimeField, Rationals};
use frobex::frobenius::{check_frobenius, find_separability_element, verify_frobenius_system, verify_separability};
use frobex::gproj::{
    ext_from_resolution, ext_group, gp_test, resolve, transfer_report, GpOptions, GpProof, Side, Verdict,
};
use frobex::graded::{
    complex_gp_test, graded_gp_test, three_way_gp_check, verify_graded_complete_resolution, ComplexOfModules, DualNumbers,
};
use frobex::linalg::Matrix;
use frobex::module::{restrict, ModuleRep};
use frobex::zigzag::{extract_acyclic_subcomplex, is_contained, verify_zigzag};

use common::{fp, small_algebras, ExtOracle};

type Outcome = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Jobs whose certificates are re-emitted and re-verified by the last criterion.
#[derive(Default)]
struct Jobs(Vec<(String, JobSpec)>);

impl Jobs {
    fn push(&mut self, name: String, job: JobSpec) {
        self.0.push((name, job));
    }
}

fn tag<F: Field>(f: &F) -> FieldTag {
    f.tag()
}

fn ext_doc<F: Field>(ext: &AlgebraExtension<F>) -> Value {
    make_document(Kind::Extension, tag(ext.field()), extension_to_json(ext))
}

fn module_doc<F: Field>(m: &ModuleRep<F>) -> Value {
    make_document(Kind::Module, tag(m.field()), module_to_json(m))
}

fn complex_doc<F: Field>(c: &ComplexOfModules<F>) -> Value {
    make_document(Kind::Complex, tag(c.field()), complex_to_json(c))
}

fn submodule_doc<F: Field>(f: &F, m: &Matrix<F>) -> Value {
    let vectors: Vec<Value> = m.col_vectors().iter().map(|v| vector_to_json(f, v)).collect();
    make_document(Kind::Submodule, tag(f), json!({ "vectors": vectors }))
}

fn frobenius_certified<F: Field>(name: &str, ext: &AlgebraExtension<F>) -> std::result::Result<(), String> {
    let sys = check_frobenius(ext, 0).map_err(err)?.ok_or_else(|| format!("{name}: no Frobenius system found"))?;
    ensure(verify_frobenius_system(ext, &sys), || format!("{name}: Frobenius system fails its verifier"))
}

fn c1(jobs: &mut Jobs) -> Outcome {
    let mut n = 0;
    for (name, ext) in frobenius_extensions_fp() {
        frobenius_certified(&name, &ext)?;
        jobs.push(format!("frobenius {name}"), JobSpec::new(Operation::CheckFrobenius, vec![("extension", ext_doc(&ext))], 12, 0));
        n += 1;
    }
    let q = dual_numbers_extension(Algebra::ground(&Rationals));
    frobenius_certified("Q[x]/(x^2)", &q)?;
    jobs.push("frobenius Q[x]/(x^2)".into(), JobSpec::new(Operation::CheckFrobenius, vec![("extension", ext_doc(&q))], 12, 0));
    n += 1;
    Ok(format!("{n} extensions certified and verified"))
}

fn c2(jobs: &mut Jobs) -> Outcome {
    let ext = m4_subalgebra_extension();
    ensure(ext.sub.dim() == 7 && ext.amb.dim() == 16, || "wrong dimensions".into())?;
    frobenius_certified("M4(F5) subalgebra", &ext)?;
    let e = find_separability_element(&ext).map_err(err)?.ok_or("no separability element")?;
    ensure(verify_separability(&ext, &e), || "separability element fails its verifier".into())?;
    let doc = ext_doc(&ext);
    jobs.push("M4 subalgebra frobenius".into(), JobSpec::new(Operation::CheckFrobenius, vec![("extension", doc.clone())], 12, 0));
    jobs.push("M4 subalgebra separability".into(), JobSpec::new(Operation::Separability, vec![("extension", doc)], 12, 0));
    Ok("Frobenius and separable, both verified".into())
}

fn maschke_instance<F: Field>(f: &F, group: &str, table: &[Vec<usize>], jobs: &mut Jobs) -> std::result::Result<bool, String> {
    let ext = group_extension(f, table);
    let found = find_separability_element(&ext).map_err(err)?;
    if let Some(e) = &found {
        ensure(verify_separability(&ext, e), || format!("{group} over {}: element fails verifier", f.tag()))?;
    }
    let order = table.len() as u64;
    let expected = match f.tag() {
        FieldTag::Prime(p) => order % p != 0,
        FieldTag::Rational => true,
    };
    ensure(found.is_some() == expected, || {
        format!("{group} over {}: separable = {}, expected {expected}", f.tag(), found.is_some())
    })?;
    jobs.push(
        format!("maschke {group} {}", f.tag()),
        JobSpec::new(Operation::Separability, vec![("extension", ext_doc(&ext))], 12, 0),
    );
    Ok(found.is_some())
}

fn c3(jobs: &mut Jobs) -> Outcome {
    let (mut n, mut sep) = (0, 0);
    for (group, table) in group_tables() {
        for p in [2, 3, 5] {
            sep += maschke_instance(&fp(p), group, &table, jobs)? as usize;
            n += 1;
        }
        sep += maschke_instance(&Rationals, group, &table, jobs)? as usize;
        n += 1;
    }
    Ok(format!("{n}/16 instances match char not dividing |G| ({sep} separable)"))
}

struct TransferTally {
    instances: usize,
    certificates: usize,
    undetermined: usize,
    biconditional_checked: usize,
    not_gp: usize,
}

fn transfer_instances<F: Field>(
    name: &str,
    ext: &AlgebraExtension<F>,
    seeds: std::ops::Range<u64>,
    tally: &mut TransferTally,
    jobs: &mut Jobs,
) -> std::result::Result<(), String> {
    for seed in seeds {
        let m = random_module(&ext.amb, seed, 6);
        let opts = GpOptions { bound: 12, self_injective_shortcut: true, seed };
        let rep = transfer_report(ext, &m, opts).map_err(err)?;
        ensure(rep.violations.is_empty(), || format!("{name} seed {seed}: {:?}", rep.violations))?;
        tally.instances += 1;
        tally.certificates += 3;
        tally.undetermined += rep.undetermined;
        tally.not_gp += [&rep.ambient, &rep.restricted, &rep.induced].iter().filter(|c| c.verdict == Verdict::NotGP).count();
        if (rep.separable || rep.self_injective_ambient) && rep.ambient.verdict.is_determined() && rep.restricted.verdict.is_determined() {
            tally.biconditional_checked += 1;
        }
        jobs.push(
            format!("transfer {name} seed {seed}"),
            JobSpec::new(Operation::Transfer, vec![("extension", ext_doc(ext)), ("module", module_doc(&m))], 12, seed),
        );
    }
    Ok(())
}

fn c4(jobs: &mut Jobs) -> Outcome {
    let mut t = TransferTally { instances: 0, certificates: 0, undetermined: 0, biconditional_checked: 0, not_gp: 0 };
    for (name, ext) in frobenius_extensions_fp() {
        // the only ambient that is not self-injective gets more modules
        let seeds = if name.starts_with("UT2") { 0..16 } else { 0..4 };
        transfer_instances(&name, &ext, seeds, &mut t, jobs)?;
    }
    transfer_instances("Q[x]/(x^2)", &dual_numbers_extension(Algebra::ground(&Rationals)), 0..3, &mut t, jobs)?;
    ensure(t.instances >= 50, || format!("only {} instances", t.instances))?;
    let rate = t.undetermined as f64 / t.certificates as f64;
    ensure(rate < 0.2, || format!("undetermined rate {:.1}%", 100.0 * rate))?;
    Ok(format!(
        "{} instances, no violations, biconditional checked on {}, {} NotGP, undetermined {}/{} certificates ({:.1}%)",
        t.instances,
        t.biconditional_checked,
        t.not_gp,
        t.undetermined,
        t.certificates,
        100.0 * rate
    ))
}

fn ext_vanishing<F: Field>(name: &str, ext: &AlgebraExtension<F>, seeds: std::ops::Range<u64>) -> std::result::Result<(usize, usize), String> {
    let projectives: Vec<ModuleRep<F>> =
        pims(&ext.amb).into_iter().chain(std::iter::once(ModuleRep::regular(ext.amb.clone()))).collect();
    let (mut modules, mut groups) = (0, 0);
    for seed in seeds {
        let m = random_module(&ext.amb, seed, 6);
        let cert = gp_test(&restrict(ext, &m), GpOptions::with_bound(12)).map_err(err)?;
        if cert.verdict != Verdict::GP {
            continue;
        }
        modules += 1;
        let res = resolve(&m, 12);
        for p in &projectives {
            for i in 1..=12 {
                let e = ext_from_resolution(&res, p, i).map_err(err)?;
                ensure(e.dim == 0, || format!("{name} seed {seed}: Ext^{i}(M, P) has dimension {}", e.dim))?;
                groups += 1;
            }
        }
    }
    Ok((modules, groups))
}

fn c5(_: &mut Jobs) -> Outcome {
    let (mut modules, mut groups) = (0, 0);
    for (name, ext) in frobenius_extensions_fp() {
        let seeds = if name.starts_with("UT2") { 0..16 } else { 0..4 };
        let (m, g) = ext_vanishing(&name, &ext, seeds)?;
        modules += m;
        groups += g;
    }
    let (m, g) = ext_vanishing("Q[x]/(x^2)", &dual_numbers_extension(Algebra::ground(&Rationals)), 0..3)?;
    modules += m;
    groups += g;
    ensure(modules > 0, || "no module with an R-side GP certificate".into())?;
    Ok(format!("{modules} modules with R-side GP certificates, {groups} Ext groups vanish"))
}

fn f2_contexts() -> Vec<(&'static str, Arc<DualNumbers<PrimeField>>)> {
    let f2 = fp(2);
    vec![
        ("F2[y]/(y^2)", DualNumbers::new(Arc::new(Algebra::truncated_polynomial(&f2, "y", 2)))),
        ("UT2(F2)", DualNumbers::new(Arc::new(Algebra::upper_triangular_2(&f2)))),
    ]
}

/// Seeded complexes over both bases, plus each non-projective UT2 simple in degree 0.
fn complex_corpus() -> Vec<(String, ComplexOfModules<PrimeField>)> {
    let mut out = Vec::new();
    for (name, ctx) in f2_contexts() {
        for seed in 0..12 {
            out.push((format!("{name} seed {seed}"), random_complex(&ctx, seed, 3)));
        }
    }
    let (_, ut2) = &f2_contexts()[1];
    for (k, s) in simple_modules(&ut2.r).into_iter().enumerate() {
        if !frobex::gproj::is_projective(&s) {
            out.push((format!("UT2 simple {k}"), ComplexOfModules::concentrated(ut2.clone(), 0, s)));
        }
    }
    out
}

fn c6(jobs: &mut Jobs) -> Outcome {
    let opts = GpOptions::with_bound(12);
    let corpus = complex_corpus();
    let (mut determined, mut simple_seen) = (0, 0);
    for (name, c) in &corpus {
        let rep = three_way_gp_check(c, opts).map_err(err)?;
        let v = rep.verdicts();
        ensure(rep.agree(), || format!("{name}: verdicts {v:?} disagree"))?;
        determined += v.iter().filter(|x| x.is_determined()).count();
        if name.starts_with("F2[y]") {
            ensure(v.iter().all(|&x| x == Verdict::GP), || format!("{name}: expected GP three times, got {v:?}"))?;
        }
        if name.starts_with("UT2 simple") {
            ensure(v.iter().all(|&x| x == Verdict::NotGP), || format!("{name}: expected NotGP three times, got {v:?}"))?;
            simple_seen += 1;
        }
        jobs.push(format!("three-way {name}"), JobSpec::new(Operation::ThreeWay, vec![("complex", complex_doc(c))], 12, 0));
    }
    ensure(simple_seen == 1, || format!("{simple_seen} non-projective UT2 simples"))?;
    let random = corpus.len() - simple_seen;
    ensure(random >= 20, || format!("only {random} random complexes"))?;
    Ok(format!("{} complexes, {determined}/{} verdicts determined, all agree", corpus.len(), 3 * corpus.len()))
}

fn c7(jobs: &mut Jobs) -> Outcome {
    let opts = GpOptions::with_bound(12);
    let (mut gp, mut n) = (0, 0);
    for (name, c) in complex_corpus() {
        let cert = complex_gp_test(&c, opts).map_err(err)?;
        let items: Vec<Verdict> =
            c.items().iter().map(|m| gp_test(m, opts).map(|x| x.verdict)).collect::<frobex::Result<_>>().map_err(err)?;
        let conj = if items.contains(&Verdict::NotGP) {
            Verdict::NotGP
        } else if items.contains(&Verdict::Undetermined) {
            Verdict::Undetermined
        } else {
            Verdict::GP
        };
        ensure(cert.verdict == conj, || format!("{name}: complex verdict {} but itemwise {conj}", cert.verdict))?;
        if cert.verdict == Verdict::GP {
            let g = graded_gp_test(&c, opts).map_err(err)?;
            let w = g.resolution.ok_or_else(|| format!("{name}: GP without a graded witness"))?;
            let check = verify_graded_complete_resolution(&c, &w, 0).map_err(err)?;
            ensure(check.all(), || format!("{name}: graded witness fails: {check:?}"))?;
            gp += 1;
        }
        n += 1;
        jobs.push(format!("complex gp {name}"), JobSpec::new(Operation::ComplexGpTest, vec![("complex", complex_doc(&c))], 12, 0));
    }
    Ok(format!("{n} complexes match the itemwise conjunction, {gp} graded witnesses re-verified"))
}

fn c8(_: &mut Jobs) -> Outcome {
    let mut cases = 0;
    for (name, alg) in small_algebras() {
        let oracle = ExtOracle::new(&alg);
        for seed in 0..9u64 {
            let m = random_module(&alg, seed, 6);
            for n in [ModuleRep::regular(alg.clone()), random_module(&alg, 1000 + seed, 6)] {
                if n.dim() > 6 {
                    continue;
                }
                let expect = oracle.ext_dims(&m, &n, 3);
                for (i, &d) in expect.iter().enumerate() {
                    let got = ext_group(&m, &n, i + 1).map_err(err)?.dim;
                    ensure(got == d, || format!("{name} seed {seed}: Ext^{} is {got}, oracle {d}", i + 1))?;
                }
                cases += 1;
            }
        }
    }
    ensure(cases >= 100, || format!("only {cases} oracle cases"))?;

    let f2 = fp(2);
    let dual = Arc::new(Algebra::truncated_polynomial(&f2, "x", 2));
    let k = simple_modules(&dual)[0].clone();
    let with = gp_test(&k, GpOptions { bound: 12, self_injective_shortcut: true, seed: 0 }).map_err(err)?;
    ensure(with.verdict == Verdict::GP && with.proof == Some(GpProof::SelfInjectiveAmbient), || format!("shortcut: {with:?}"))?;
    let without = gp_test(&k, GpOptions { bound: 12, self_injective_shortcut: false, seed: 0 }).map_err(err)?;
    let period_one = matches!(without.proof, Some(GpProof::PeriodicTotallyReflexive { left, .. }) if left.period() == 1);
    ensure(without.verdict == Verdict::GP && period_one, || format!("no shortcut: {without:?}"))?;

    let ut2 = Arc::new(Algebra::upper_triangular_2(&f2));
    let reg = ModuleRep::regular(ut2.clone());
    let mut not_gp = 0;
    for s in simple_modules(&ut2).into_iter().filter(|s| !frobex::gproj::is_projective(s)) {
        let cert = gp_test(&s, GpOptions::with_bound(12)).map_err(err)?;
        let w = cert.witness.ok_or("UT2 simple has no witness")?;
        ensure(cert.verdict == Verdict::NotGP && w.side == Side::Left && w.degree == 1, || format!("UT2 simple: {cert:?}"))?;
        ensure(ExtOracle::new(&ut2).ext_dims(&s, &reg, 1)[0] > 0, || "oracle finds Ext^1(S, A) = 0".into())?;
        not_gp += 1;
    }
    ensure(not_gp == 1, || format!("{not_gp} non-projective UT2 simples"))?;
    Ok(format!("{cases} oracle cases agree, dual-numbers simple GP both ways, UT2 simple NotGP via Ext^1(S, A) != 0"))
}

fn c9(jobs: &mut Jobs) -> Outcome {
    let algs = small_algebras();
    let bases = [&algs[0], &algs[3], &algs[2]];
    let mut n = 0;
    for (name, alg) in bases {
        for seed in 0..10u64 {
            let p = random_contractible(alg, seed);
            let p0 = p.complex().item(0);
            let m = random_submodule(&p0, seed);
            let z = extract_acyclic_subcomplex(&p, &m, seed).map_err(err)?;
            let check = verify_zigzag(&p, &m, &z);
            ensure(check.all(), || format!("{name} seed {seed}: {check:?}"))?;
            let again = extract_acyclic_subcomplex(&p, &z.inclusion.block(0), seed).map_err(err)?;
            ensure(is_contained(&z, &again) && is_contained(&again, &z), || format!("{name} seed {seed}: not idempotent"))?;
            let bigger = m.hstack(&random_submodule(&p0, seed + 100));
            let zb = extract_acyclic_subcomplex(&p, &bigger, seed).map_err(err)?;
            ensure(is_contained(&z, &zb), || format!("{name} seed {seed}: not monotone"))?;
            jobs.push(
                format!("zigzag {name} seed {seed}"),
                JobSpec::new(
                    Operation::Zigzag,
                    vec![("complex", complex_doc(p.complex())), ("submodule", submodule_doc(alg.field(), &m))],
                    12,
                    seed,
                ),
            );
            n += 1;
        }
    }
    ensure(n >= 30, || format!("only {n} instances"))?;
    Ok(format!("{n} instances satisfy all five conditions, idempotence and monotonicity"))
}

fn c10(jobs: &Jobs) -> Outcome {
    let dir = tempfile::tempdir().map_err(err)?;
    let mut undetermined = 0;
    for (k, (name, job)) in jobs.0.iter().enumerate() {
        let first = run_job(job).map_err(|e| format!("{name}: {e}"))?;
        let second = run_job(job).map_err(|e| format!("{name}: {e}"))?;
        let bytes = to_pretty(&first.document);
        ensure(bytes == to_pretty(&second.document), || format!("{name}: certificate differs on rerun"))?;
        undetermined += first.is_undetermined() as usize;
        let path = dir.path().join(format!("{k}.json"));
        std::fs::write(&path, bytes).map_err(err)?;
        let out = Command::new(env!("CARGO_BIN_EXE_frobex")).arg("verify").arg(&path).output().map_err(err)?;
        ensure(out.status.success(), || format!("{name}: frobex verify rejects: {}", String::from_utf8_lossy(&out.stdout)))?;
    }
    Ok(format!("{} certificates byte-identical on rerun and accepted by frobex verify ({undetermined} undetermined)", jobs.0.len()))
}

fn main() -> ExitCode {
    type Run = fn(&mut Jobs) -> Outcome;
    let criteria: [(u8, &str, u64, Run); 9] = [
        (1, "Frobenius certificates", 5, c1),
        (2, "M4(F5) subalgebra Frobenius and separable", 10, c2),
        (3, "Maschke sweep", 5, c3),
        (4, "transfer suite", 60, c4),
        (5, "Ext vanishing against projectives", 30, c5),
        (6, "graded, ungraded and itemwise agreement", 60, c6),
        (7, "complex GP test is itemwise", 60, c7),
        (8, "GP engine oracle equivalence", 120, c8),
        (9, "zig-zag contract", 30, c9),
    ];
    let mut jobs = Jobs::default();
    let mut failures = 0;
    let report = |id: u8, title: &str, limit: u64, elapsed: Duration, outcome: Outcome| -> bool {
        let secs = elapsed.as_secs_f64();
        let (ok, detail) = match outcome {
            Ok(d) if secs < limit as f64 => (true, d),
            Ok(d) => (false, format!("{d}; took {secs:.2} s, limit {limit} s")),
            Err(e) => (false, e),
        };
        println!("criterion {id:>2} {} {title}: {detail} [{secs:.2} s]", if ok { "PASS" } else { "FAIL" });
        ok
    };
    for (id, title, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run(&mut jobs);
        failures += !report(id, title, limit, start.elapsed(), outcome) as usize;
    }
    let start = Instant::now();
    let outcome = c10(&jobs);
    failures += !report(10, "determinism and re-verification", 10, start.elapsed(), outcome) as usize;
    println!("acceptance: {} of 10 criteria pass", 10 - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
