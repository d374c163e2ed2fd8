//! Frobenius and separability certificates for an extension `R ⊂ A`.

use crate::algebra::AlgebraExtension;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gproj::projective_cover;
use crate::linalg::{is_zero_vec, Matrix, Quotient, RowSpace, Vector};
use crate::module::{combine, find_section, hom_space, restrict, search_combination, HomSpace, ModuleHom, ModuleRep};

/// `_R A` is projective when the free cover `R^n -> A` has a section.
#[derive(Clone, Debug)]
pub struct ProjectivityWitness<F: Field> {
    pub projective: bool,
    pub rank: usize,
    /// `R^rank -> A`, as a matrix `dim A x rank * dim R`.
    pub epi: Matrix<F>,
    pub section: Option<Matrix<F>>,
}

pub fn is_finitely_generated_projective_over_sub<F: Field>(ext: &AlgebraExtension<F>) -> Result<ProjectivityWitness<F>> {
    let r = &ext.sub;
    let f = ext.field();
    let ra = restrict(ext, &ModuleRep::regular(ext.amb.clone()));
    let cover = projective_cover(&ra);
    let st = r.structure();
    // R^n -> P: x -> x e_c in each block, then P -> A
    let mut blocks = Vec::new();
    for &c in &cover.classes {
        let e = &st.idempotents[st.class_reps[c]];
        let (_, incl) = crate::decompose::principal_module(r, e);
        let to_ideal = incl.left_inverse().expect("inclusion").mul(&r.right_mul(e));
        blocks.push(to_ideal);
    }
    let to_p = blocks.iter().fold(Matrix::zeros(f, 0, 0), |acc, b| acc.direct_sum(b));
    let rank = blocks.len();
    let free = ModuleRep::regular(r.clone()).power(rank);
    let epi = cover.epi.mat.mul(&to_p);
    let hom = ModuleHom::new_unchecked(free, ra, epi.clone());
    let section = find_section(&hom)?;
    Ok(ProjectivityWitness { projective: section.is_some(), rank, epi, section })
}

/// `tau : A -> R` (matrix `dim R x dim A`) and pairs `(x_i, y_i)` of coordinate vectors in `A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSystem<F: Field> {
    pub tau: Matrix<F>,
    pub pairs: Vec<(Vector<F>, Vector<F>)>,
}

/// All `X` (`p x q`) with `X * a_l = b_l * X` for every pair `(a_l, b_l)`.
fn twisted_commutant<F: Field>(field: &F, p: usize, q: usize, pairs: &[(Matrix<F>, Matrix<F>)]) -> Vec<Matrix<F>> {
    let width = p * q;
    let mut rows = RowSpace::new(field, width);
    for (a, b) in pairs {
        for i in 0..p {
            for j in 0..q {
                let mut row = vec![field.zero(); width];
                for k in 0..q {
                    row[i * q + k] = field.add(&row[i * q + k], a.get(k, j));
                }
                for k in 0..p {
                    row[k * q + j] = field.sub(&row[k * q + j], b.get(i, k));
                }
                rows.insert(row);
            }
        }
        if rows.rank() == width {
            break;
        }
    }
    let ker = rows.kernel_basis();
    (0..ker.cols()).map(|c| Matrix::from_fn(field, p, q, |i, j| ker.get(i * q + j, c).clone())).collect()
}

/// Basis of the `R`-`R`-bimodule maps `A -> R`.
pub fn bimodule_maps_to_sub<F: Field>(ext: &AlgebraExtension<F>) -> Vec<Matrix<F>> {
    let (r, a) = (&ext.sub, &ext.amb);
    let mut pairs = Vec::new();
    for &g in r.generators() {
        let rv = r.basis_vector(g);
        let iv = ext.embed(&rv);
        pairs.push((a.left_mul(&iv), r.left_mul(&rv)));
        pairs.push((a.right_mul(&iv), r.right_mul(&rv)));
    }
    twisted_commutant(ext.field(), r.dim(), a.dim(), &pairs)
}

/// Matrix of `a -> tau(- a)` into `Hom_R(A, R)` coordinates.
fn theta<F: Field>(ext: &AlgebraExtension<F>, tau: &Matrix<F>, target: &HomSpace<F>) -> Matrix<F> {
    let a = &ext.amb;
    let cols: Vec<_> = (0..a.dim())
        .map(|j| target.coordinates(&tau.mul(&a.right_mul(&a.basis_vector(j)))).expect("tau(- a) is left R-linear"))
        .collect();
    Matrix::from_cols(ext.field(), target.dim(), &cols)
}

/// Searches the bimodule maps `tau` for one whose `theta` is bijective, then
/// solves the dual-basis identities for `y_i` with `x_i` the basis of `A`.
pub fn check_frobenius<F: Field>(ext: &AlgebraExtension<F>, seed: u64) -> Result<Option<FrobeniusSystem<F>>> {
    if !is_finitely_generated_projective_over_sub(ext)?.projective {
        return Err(Error::NotFrobenius("A not projective over R".into()));
    }
    let f = ext.field();
    let a = &ext.amb;
    let n = a.dim();
    let target = hom_space(&restrict(ext, &ModuleRep::regular(a.clone())), &ModuleRep::regular(ext.sub.clone()))?;
    if target.dim() != n {
        return Ok(None);
    }
    let taus = bimodule_maps_to_sub(ext);
    if taus.is_empty() {
        return Ok(None);
    }
    let Some(c) = search_combination(f, taus.len(), seed, |c| theta(ext, &combine(f, &taus, c), &target).is_invertible())
    else {
        return Ok(None);
    };
    let tau = combine(f, &taus, &c);
    let pairs = solve_pairs(ext, &tau)?.ok_or_else(|| Error::NotFrobenius("dual basis equations are inconsistent".into()))?;
    Ok(Some(FrobeniusSystem { tau, pairs }))
}

/// `iota(tau(.))` as an `n x n` matrix on `A`.
fn tau_in_a<F: Field>(ext: &AlgebraExtension<F>, tau: &Matrix<F>) -> Matrix<F> {
    ext.emb.mul(tau)
}

fn solve_pairs<F: Field>(ext: &AlgebraExtension<F>, tau: &Matrix<F>) -> Result<Option<Vec<(Vector<F>, Vector<F>)>>> {
    let f = ext.field();
    let a = &ext.amb;
    let n = a.dim();
    let it = tau_in_a(ext, tau);
    // unknowns y_i[k] at i*n + k; equations for every basis a_j, coordinate t
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for j in 0..n {
        let aj = a.basis_vector(j);
        // sum_i b_i * iota(tau(y_i a_j)) = a_j ; y -> iota(tau(y a_j)) is it * R_{a_j}
        let m1 = it.mul(&a.right_mul(&aj));
        // sum_i iota(tau(a_j b_i)) * y_i = a_j ; right multiplication by the scalar-like iota(tau(a_j b_i))
        let coeffs: Vec<Vector<F>> = (0..n).map(|i| it.mul_vec(&a.mul(&aj, &a.basis_vector(i)))).collect();
        for t in 0..n {
            let mut row1 = vec![f.zero(); n * n];
            for i in 0..n {
                // coordinate t of b_i * w where w = m1 y_i: sum_s (L_{b_i} m1)[t][s] y_i[s]
                let lm = a.left_matrices()[i].mul(&m1);
                for s in 0..n {
                    row1[i * n + s] = lm.get(t, s).clone();
                }
            }
            rows.push(row1);
            rhs.push(aj[t].clone());
            let mut row2 = vec![f.zero(); n * n];
            for i in 0..n {
                let lm = a.left_mul(&coeffs[i]);
                for s in 0..n {
                    row2[i * n + s] = lm.get(t, s).clone();
                }
            }
            rows.push(row2);
            rhs.push(aj[t].clone());
        }
    }
    let sys = Matrix::from_rows(f, rows)?;
    let Some(sol) = sys.solve(&rhs)? else {
        return Ok(None);
    };
    let y = sol.particular;
    let pairs = (0..n)
        .map(|i| (a.basis_vector(i), y[i * n..(i + 1) * n].to_vec()))
        .filter(|(_, yi)| !is_zero_vec(f, yi))
        .collect();
    Ok(Some(pairs))
}

/// Bimodule property on basis triples and both dual-basis identities on basis elements.
pub fn verify_frobenius_system<F: Field>(ext: &AlgebraExtension<F>, sys: &FrobeniusSystem<F>) -> bool {
    let (r, a) = (&ext.sub, &ext.amb);
    let f = ext.field();
    if sys.tau.rows() != r.dim() || sys.tau.cols() != a.dim() {
        return false;
    }
    if sys.pairs.iter().any(|(x, y)| x.len() != a.dim() || y.len() != a.dim()) {
        return false;
    }
    let tau = |v: &[F::Elem]| sys.tau.mul_vec(v);
    for i in 0..r.dim() {
        for k in 0..r.dim() {
            let (ri, rk) = (r.basis_vector(i), r.basis_vector(k));
            for j in 0..a.dim() {
                let lhs = tau(&a.mul(&a.mul(&ext.embed(&ri), &a.basis_vector(j)), &ext.embed(&rk)));
                let rhs = r.mul(&r.mul(&ri, &tau(&a.basis_vector(j))), &rk);
                if lhs != rhs {
                    return false;
                }
            }
        }
    }
    for j in 0..a.dim() {
        let aj = a.basis_vector(j);
        let mut s1 = vec![f.zero(); a.dim()];
        let mut s2 = vec![f.zero(); a.dim()];
        for (x, y) in &sys.pairs {
            let t1 = ext.embed(&tau(&a.mul(y, &aj)));
            crate::linalg::axpy(f, &mut s1, &f.one(), &a.mul(x, &t1));
            let t2 = ext.embed(&tau(&a.mul(&aj, x)));
            crate::linalg::axpy(f, &mut s2, &f.one(), &a.mul(&t2, y));
        }
        if s1 != aj || s2 != aj {
            return false;
        }
    }
    true
}

/// `A (x)_R A` as a quotient of `A (x)_F A` (ambient index `i * dim A + j`).
#[derive(Clone, Debug)]
pub struct TensorSquare<F: Field> {
    pub quotient: Quotient<F>,
    /// Multiplication `A (x)_R A -> A`.
    pub mult: Matrix<F>,
    /// Left action of each basis element of `A`.
    pub left: Vec<Matrix<F>>,
    /// Right action of each basis element of `A`.
    pub right: Vec<Matrix<F>>,
}

pub fn tensor_square<F: Field>(ext: &AlgebraExtension<F>) -> TensorSquare<F> {
    let f = ext.field();
    let a = &ext.amb;
    let n = a.dim();
    let id = Matrix::identity(f, n);
    let mut rel = RowSpace::new(f, n * n);
    for &g in ext.sub.generators() {
        let iv = ext.embed(&ext.sub.basis_vector(g));
        let map = a.right_mul(&iv).kron(&id).sub(&id.kron(&a.left_mul(&iv)));
        for c in 0..map.cols() {
            let v = map.col(c);
            if !is_zero_vec(f, &v) {
                rel.insert(v);
            }
        }
    }
    let quotient = Quotient::new(rel);
    let cols: Vec<_> = (0..quotient.dim())
        .map(|k| {
            let idx = quotient.lift_index(k);
            a.mul(&a.basis_vector(idx / n), &a.basis_vector(idx % n))
        })
        .collect();
    let mult = Matrix::from_cols(f, n, &cols);
    let left = a.left_matrices().iter().map(|l| quotient.induced(&l.kron(&id))).collect();
    let right = (0..n).map(|i| quotient.induced(&id.kron(&a.right_mul(&a.basis_vector(i))))).collect();
    TensorSquare { quotient, mult, left, right }
}

/// Coordinates of `e` in the canonical basis of [`tensor_square`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparabilityElement<F: Field> {
    pub e: Vector<F>,
}

impl<F: Field> SeparabilityElement<F> {
    /// `(coefficient, i, j)` for the nonzero terms `c * b_i (x) b_j` of a lift.
    pub fn terms(&self, ts: &TensorSquare<F>, field: &F) -> Vec<(F::Elem, usize, usize)> {
        let n = (ts.quotient.ambient_dim() as f64).sqrt().round() as usize;
        self.e
            .iter()
            .enumerate()
            .filter(|(_, c)| !field.is_zero(c))
            .map(|(k, c)| {
                let idx = ts.quotient.lift_index(k);
                (c.clone(), idx / n, idx % n)
            })
            .collect()
    }
}

pub fn find_separability_element<F: Field>(ext: &AlgebraExtension<F>) -> Result<Option<SeparabilityElement<F>>> {
    let f = ext.field();
    let a = &ext.amb;
    let ts = tensor_square(ext);
    let mut sys = ts.mult.clone();
    let mut rhs = a.unit().clone();
    for &g in a.generators() {
        sys = sys.vstack(&ts.left[g].sub(&ts.right[g]));
        rhs.extend(std::iter::repeat_n(f.zero(), ts.quotient.dim()));
    }
    Ok(sys.solve(&rhs)?.map(|s| SeparabilityElement { e: s.particular }))
}

/// `phi(e) = 1`, `a e = e a` for every basis `a`, and `psi(a) = a e` is a
/// bimodule section of `phi`.
pub fn verify_separability<F: Field>(ext: &AlgebraExtension<F>, e: &SeparabilityElement<F>) -> bool {
    let a = &ext.amb;
    let n = a.dim();
    let ts = tensor_square(ext);
    if e.e.len() != ts.quotient.dim() {
        return false;
    }
    if ts.mult.mul_vec(&e.e) != *a.unit() {
        return false;
    }
    if (0..n).any(|k| ts.left[k].mul_vec(&e.e) != ts.right[k].mul_vec(&e.e)) {
        return false;
    }
    let psi: Vec<Vector<F>> = (0..n).map(|i| ts.left[i].mul_vec(&e.e)).collect();
    let psi_of = |v: &[F::Elem]| {
        let mut out = vec![ext.field().zero(); ts.quotient.dim()];
        for (c, p) in v.iter().zip(&psi) {
            crate::linalg::axpy(ext.field(), &mut out, c, p);
        }
        out
    };
    for i in 0..n {
        if ts.mult.mul_vec(&psi[i]) != a.basis_vector(i) {
            return false;
        }
        for j in 0..n {
            let ab = a.mul(&a.basis_vector(i), &a.basis_vector(j));
            if psi_of(&ab) != ts.left[i].mul_vec(&psi[j]) || psi_of(&ab) != ts.right[j].mul_vec(&psi[i]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{dual_numbers, groups, Algebra};
    use crate::field::{PrimeField, Rationals};
    use std::sync::Arc;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn group_ext(p: u64, table: &[Vec<usize>]) -> AlgebraExtension<PrimeField> {
        AlgebraExtension::over_ground_field(Arc::new(Algebra::group_algebra(&fp(p), table, None).unwrap()))
    }

    #[test]
    fn projectivity_examples() {
        let ext = group_ext(2, &groups::cyclic(2));
        assert!(is_finitely_generated_projective_over_sub(&ext).unwrap().projective);
        let r = Arc::new(Algebra::upper_triangular_2(&fp(2)));
        let (_, dext) = dual_numbers(&r);
        let w = is_finitely_generated_projective_over_sub(&dext).unwrap();
        assert!(w.projective);
        let s = w.section.unwrap();
        assert!(w.epi.mul(&s).is_identity());
    }

    #[test]
    fn non_projective_extension_is_rejected() {
        // span{1, e12} inside UT2(F_2)
        let f = fp(2);
        let amb = Arc::new(Algebra::upper_triangular_2(&f));
        let span = Matrix::from_rows(&f, vec![vec![1, 0], vec![0, 1], vec![1, 0]]).unwrap();
        let ext = AlgebraExtension::from_subspace(amb, &span).unwrap();
        assert!(!is_finitely_generated_projective_over_sub(&ext).unwrap().projective);
        assert!(matches!(check_frobenius(&ext, 0), Err(Error::NotFrobenius(_))));
    }

    #[test]
    fn frobenius_dual_numbers_over_f3() {
        let r = Arc::new(Algebra::ground(&fp(3)));
        let (_, ext) = dual_numbers(&r);
        let sys = check_frobenius(&ext, 0).unwrap().unwrap();
        assert!(verify_frobenius_system(&ext, &sys));
        let mut broken = sys.clone();
        broken.pairs.pop();
        assert!(!verify_frobenius_system(&ext, &broken));
        let zero = FrobeniusSystem { tau: Matrix::zeros(&fp(3), 1, 2), pairs: sys.pairs.clone() };
        assert!(!verify_frobenius_system(&ext, &zero));
        // the system with tau(a0 + a1 x) = a0 + a1 and pairs (x, 1), (1 - x, x)
        let tau = Matrix::from_rows(&fp(3), vec![vec![1, 1]]).unwrap();
        let known = FrobeniusSystem { tau, pairs: vec![(vec![0, 1], vec![1, 0]), (vec![1, 2], vec![0, 1])] };
        assert!(verify_frobenius_system(&ext, &known));
    }

    #[test]
    fn frobenius_group_algebras() {
        for p in [2, 3, 5] {
            for t in [groups::cyclic(2), groups::cyclic(3), groups::symmetric3()] {
                let ext = group_ext(p, &t);
                let sys = check_frobenius(&ext, 0).unwrap().expect("group algebras are Frobenius");
                assert!(verify_frobenius_system(&ext, &sys));
            }
        }
        let q = AlgebraExtension::over_ground_field(Arc::new(Algebra::group_algebra(&Rationals, &groups::cyclic(3), None).unwrap()));
        assert!(verify_frobenius_system(&q, &check_frobenius(&q, 0).unwrap().unwrap()));
    }

    #[test]
    fn separability_examples() {
        let ext = group_ext(3, &groups::cyclic(2));
        let e = find_separability_element(&ext).unwrap().unwrap();
        assert_eq!(e.e, vec![2, 0, 0, 2]);
        assert!(verify_separability(&ext, &e));
        assert!(!verify_separability(&ext, &SeparabilityElement { e: vec![0; 4] }));
        assert!(!verify_separability(&ext, &SeparabilityElement { e: vec![1, 0, 0, 0] }));
        assert!(find_separability_element(&group_ext(2, &groups::cyclic(2))).unwrap().is_none());
    }
}
