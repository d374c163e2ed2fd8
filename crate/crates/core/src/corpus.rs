//! Named extensions and seeded generators of modules and complexes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{dual_numbers, groups, Algebra, AlgebraExtension};
use crate::decompose::{pims, simple_modules};
use crate::field::{Field, PrimeField};
use crate::graded::{bar_module, ComplexOfModules, DualNumbers};
use crate::linalg::{add_vec, Matrix};
use crate::module::{combine, hom_space, ModuleRep};
use crate::zigzag::ProjectiveComplex;

/// The seven-dimensional subalgebra of `M_4(F_5)` spanned by `e11+e44`, `e22+e33`,
/// `e21`, `e31`, `e41`, `e42`, `e43`.
pub fn m4_subalgebra_extension() -> AlgebraExtension<PrimeField> {
    let f = PrimeField::new(5).expect("prime");
    let m4 = Arc::new(Algebra::matrix_algebra(&f, 4));
    let e = |i: usize, j: usize| m4.basis_vector((i - 1) * 4 + (j - 1));
    let span = Matrix::from_cols(
        &f,
        16,
        &[add_vec(&f, &e(1, 1), &e(4, 4)), add_vec(&f, &e(2, 2), &e(3, 3)), e(2, 1), e(3, 1), e(4, 1), e(4, 2), e(4, 3)],
    );
    AlgebraExtension::from_subspace(m4, &span).expect("closed subalgebra")
}

/// `R ⊂ R[x]/(x^2)`.
pub fn dual_numbers_extension<F: Field>(r: Algebra<F>) -> AlgebraExtension<F> {
    dual_numbers(&Arc::new(r)).1
}

/// `F_p ⊂ F_p[G]`.
pub fn group_extension<F: Field>(field: &F, table: &[Vec<usize>]) -> AlgebraExtension<F> {
    let a = Arc::new(Algebra::group_algebra(field, table, None).expect("group table"));
    AlgebraExtension::over_ground_field(a)
}

/// `C_2`, `C_3`, `C_4`, `S_3` by name.
pub fn group_tables() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    vec![
        ("C2", groups::cyclic(2)),
        ("C3", groups::cyclic(3)),
        ("C4", groups::cyclic(4)),
        ("S3", groups::symmetric3()),
    ]
}

/// Extensions over prime fields that are Frobenius: dual numbers over `F_2`, `F_3`,
/// `F_2[y]/(y^2)`, `UT2(F_2)`, and `F_p ⊂ F_p[G]` for `G` in `C_2, C_3, S_3`, `p` in `2, 3, 5`.
pub fn frobenius_extensions_fp() -> Vec<(String, AlgebraExtension<PrimeField>)> {
    let fp = |p| PrimeField::new(p).expect("prime");
    let mut out = vec![
        ("F2[x]/(x^2)".to_string(), dual_numbers_extension(Algebra::ground(&fp(2)))),
        ("F3[x]/(x^2)".to_string(), dual_numbers_extension(Algebra::ground(&fp(3)))),
        ("F2[y]/(y^2)[x]/(x^2)".to_string(), dual_numbers_extension(Algebra::truncated_polynomial(&fp(2), "y", 2))),
        ("UT2(F2)[x]/(x^2)".to_string(), dual_numbers_extension(Algebra::upper_triangular_2(&fp(2)))),
    ];
    for p in [2, 3, 5] {
        for (name, table) in group_tables() {
            if name != "C4" {
                out.push((format!("F{p}[{name}]"), group_extension(&fp(p), &table)));
            }
        }
    }
    out
}

fn random_coeffs<F: Field>(f: &F, rng: &mut ChaCha8Rng, n: usize) -> Vec<F::Elem> {
    (0..n)
        .map(|_| if f.elements().is_some() { f.random(rng) } else { f.from_i64(rng.gen_range(-2..=2)) })
        .collect()
}

/// A random homomorphism `M -> N`.
pub fn random_hom<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>, rng: &mut ChaCha8Rng) -> Matrix<F> {
    let basis = hom_space(m, n).expect("same algebra").basis;
    let f = m.field();
    if basis.is_empty() {
        return Matrix::zeros(f, n.dim(), m.dim());
    }
    random_combination(f, &basis, rng)
}

fn random_combination<F: Field>(f: &F, basis: &[Matrix<F>], rng: &mut ChaCha8Rng) -> Matrix<F> {
    combine(f, basis, &random_coeffs(f, rng, basis.len()))
}

/// A seeded module of dimension at most `max_dim`: a PIM, a simple, or a cyclic
/// submodule or quotient of a free module, possibly summed with another such piece.
pub fn random_module<F: Field>(alg: &Arc<Algebra<F>>, seed: u64, max_dim: usize) -> ModuleRep<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let first = random_piece(alg, &mut rng, max_dim);
    if rng.gen_bool(0.3) && first.dim() < max_dim {
        let second = random_piece(alg, &mut rng, max_dim - first.dim());
        if first.dim() + second.dim() <= max_dim {
            return first.direct_sum(&second);
        }
    }
    first
}

fn random_piece<F: Field>(alg: &Arc<Algebra<F>>, rng: &mut ChaCha8Rng, max_dim: usize) -> ModuleRep<F> {
    let f = alg.field();
    let reg = ModuleRep::regular(alg.clone());
    let small = |mods: Vec<ModuleRep<F>>| -> Vec<ModuleRep<F>> { mods.into_iter().filter(|m| m.dim() <= max_dim).collect() };
    for _ in 0..8 {
        let candidate = match rng.gen_range(0..4) {
            0 => {
                let ps = small(pims(alg));
                if ps.is_empty() {
                    continue;
                }
                ps[rng.gen_range(0..ps.len())].clone()
            }
            1 => {
                let ss = simple_modules(alg);
                ss[rng.gen_range(0..ss.len())].clone()
            }
            2 => {
                let v = random_coeffs(f, rng, alg.dim());
                let span = reg.generated_submodule(&[v]);
                reg.submodule(&span).expect("generated submodule").0
            }
            _ => {
                let v = random_coeffs(f, rng, alg.dim());
                let span = reg.generated_submodule(&[v]);
                reg.quotient(&span).0
            }
        };
        if candidate.dim() > 0 && candidate.dim() <= max_dim {
            return candidate;
        }
    }
    simple_modules(alg)[0].clone()
}

/// A seeded complex over `R` with at most three nonzero items near degree 0.
pub fn random_complex<F: Field>(ctx: &Arc<DualNumbers<F>>, seed: u64, max_item_dim: usize) -> ComplexOfModules<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let len: usize = rng.gen_range(1..=3);
    let lo = rng.gen_range(-1..=0);
    let items: Vec<ModuleRep<F>> =
        (0..len).map(|_| random_module(&ctx.r, rng.gen(), max_item_dim)).collect();
    let mut diffs: Vec<Matrix<F>> = Vec::new();
    for k in 0..len.saturating_sub(1) {
        let d = if k == 0 {
            random_hom(&items[0], &items[1], &mut rng)
        } else {
            // factor through the cokernel of the previous map so that d o d = 0
            let prev: &Matrix<F> = &diffs[k - 1];
            let (q, proj) = items[k].quotient(&prev.column_space());
            let h = random_hom(&q, &items[k + 1], &mut rng);
            h.mul(&proj)
        };
        diffs.push(d);
    }
    ComplexOfModules::new(ctx.clone(), lo, items, diffs).expect("d o d = 0 by construction")
}

/// `(+)_k bar(Q_k)[-i_k]` with `Q_k` sums of PIMs, conjugated degreewise by random automorphisms.
pub fn random_contractible<F: Field>(alg: &Arc<Algebra<F>>, seed: u64) -> ProjectiveComplex<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ctx = DualNumbers::new(alg.clone());
    let ps = pims(alg);
    let pieces = rng.gen_range(1..=3);
    let mut c = ComplexOfModules::zero(ctx.clone());
    for _ in 0..pieces {
        let q = ps[rng.gen_range(0..ps.len())].clone();
        let shift = rng.gen_range(0..=2);
        c = c.direct_sum(&bar_module(&ctx, &q).shift(-shift));
    }
    // twist each degree by an automorphism so summands are not coordinate blocks
    let f = alg.field().clone();
    let autos: Vec<Matrix<F>> = c
        .degrees()
        .map(|i| {
            let m = c.item(i);
            let end = hom_space(&m, &m).expect("same algebra").basis;
            (0..32)
                .map(|_| random_combination(&f, &end, &mut rng))
                .find(Matrix::is_invertible)
                .unwrap_or_else(|| Matrix::identity(&f, m.dim()))
        })
        .collect();
    let at = |i: i64| &autos[(i - c.lo()) as usize];
    let diffs = (c.lo()..c.hi()).map(|i| at(i + 1).mul(&c.diff(i)).mul(&at(i).inverse().expect("automorphism"))).collect();
    let twisted = ComplexOfModules::new(ctx, c.lo(), c.items().to_vec(), diffs).expect("conjugate complex");
    ProjectiveComplex::new(twisted).expect("contractible complex of projectives")
}

/// A seeded submodule of the degree-0 item, as spanning columns.
pub fn random_submodule<F: Field>(m: &ModuleRep<F>, seed: u64) -> Matrix<F> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f = m.field();
    if m.dim() == 0 || rng.gen_bool(0.15) {
        return Matrix::zeros(f, m.dim(), 0);
    }
    let v = random_coeffs(f, &mut rng, m.dim());
    let r = m.generated_submodule(&[v]);
    if rng.gen_bool(0.5) {
        // shrink to the radical part of the generated piece
        let (sub, incl) = m.submodule(&r).expect("generated submodule");
        let rad = crate::decompose::radical_submodule(&sub);
        if rad.cols() > 0 {
            return incl.mul(&rad);
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zigzag::{extract_acyclic_subcomplex, verify_zigzag};

    #[test]
    fn generators_are_deterministic_and_valid() {
        let f = PrimeField::new(2).unwrap();
        let ctx = DualNumbers::new(Arc::new(Algebra::upper_triangular_2(&f)));
        for seed in 0..10 {
            let c = random_complex(&ctx, seed, 3);
            assert_eq!(c, random_complex(&ctx, seed, 3));
            let m = random_module(&ctx.r, seed, 4);
            assert!(m.dim() <= 4 && m.dim() > 0);
        }
        let alg = Arc::new(Algebra::truncated_polynomial(&f, "x", 2));
        for seed in 0..5 {
            let p = random_contractible(&alg, seed);
            let m = random_submodule(&p.complex().item(0), seed);
            let z = extract_acyclic_subcomplex(&p, &m, 0).unwrap();
            assert!(verify_zigzag(&p, &m, &z).all(), "seed {seed}");
        }
    }

    #[test]
    fn m4_subalgebra_has_seven_dimensions() {
        assert_eq!(m4_subalgebra_extension().sub.dim(), 7);
        assert_eq!(frobenius_extensions_fp().len(), 13);
    }
}
