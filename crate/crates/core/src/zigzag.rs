//! Small acyclic subcomplexes of acyclic complexes of projectives, grown from a
//! prescribed submodule of the degree-0 item by alternating image and preimage steps.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::decompose::{decompose, Summand};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::graded::{ChainMap, ComplexOfModules, DualNumbers};
use crate::gproj::is_projective;
use crate::linalg::{Matrix, RowSpace};
use crate::module::ModuleRep;

/// Indecomposable summands of a projective module.
pub fn decompose_projective<F: Field>(p: &ModuleRep<F>, seed: u64) -> Result<Vec<Summand<F>>> {
    if !is_projective(p) {
        return Err(Error::Precondition("module is not projective".into()));
    }
    Ok(decompose(p, seed))
}

/// A bounded exact complex with projective items.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveComplex<F: Field> {
    complex: ComplexOfModules<F>,
}

impl<F: Field> ProjectiveComplex<F> {
    pub fn new(complex: ComplexOfModules<F>) -> Result<Self> {
        if let Some(i) = complex.degrees().find(|&i| !is_projective(&complex.item(i))) {
            return Err(Error::Precondition(format!("item in degree {i} is not projective")));
        }
        if let Some((i, _)) = complex.homology_dims().into_iter().find(|&(_, h)| h > 0) {
            return Err(Error::Precondition(format!("complex is not exact in degree {i}")));
        }
        Ok(Self { complex })
    }

    pub fn complex(&self) -> &ComplexOfModules<F> {
        &self.complex
    }

    pub fn into_complex(self) -> ComplexOfModules<F> {
        self.complex
    }
}

/// Complex of modules over an arbitrary algebra, with degree-0 maps as differentials.
pub fn complex_over<F: Field>(
    alg: &Arc<crate::algebra::Algebra<F>>,
    lo: i64,
    items: Vec<ModuleRep<F>>,
    diffs: Vec<Matrix<F>>,
) -> Result<ComplexOfModules<F>> {
    ComplexOfModules::new(DualNumbers::new(alg.clone()), lo, items, diffs)
}

/// The subcomplex with the given subspaces (as column spans), and its inclusion.
pub fn subcomplex<F: Field>(c: &ComplexOfModules<F>, spaces: &[Matrix<F>]) -> Result<(ComplexOfModules<F>, ChainMap<F>)> {
    let subs: Vec<(ModuleRep<F>, Matrix<F>)> = c
        .degrees()
        .zip(spaces)
        .map(|(i, s)| c.item(i).submodule(s).map_err(|_| Error::Precondition(format!("degree {i} is not a submodule"))))
        .collect::<Result<_>>()?;
    let f = c.field();
    let mut diffs = Vec::new();
    for k in 0..subs.len().saturating_sub(1) {
        let i = c.lo() + k as i64;
        let image = c.diff(i).mul(&subs[k].1);
        let target = RowSpace::spanned_by(f, c.dim_at(i + 1), subs[k + 1].1.col_vectors());
        if !image.col_vectors().iter().all(|v| target.contains(v)) {
            return Err(Error::Precondition(format!("differential leaves the subspace in degree {i}")));
        }
        let li = subs[k + 1].1.left_inverse().unwrap_or_else(|| Matrix::zeros(f, 0, c.dim_at(i + 1)));
        diffs.push(li.mul(&image));
    }
    let sub = ComplexOfModules::new(c.ctx().clone(), c.lo(), subs.iter().map(|s| s.0.clone()).collect(), diffs)?;
    let incl = ChainMap::from_fn(&sub, c, |i| {
        if i < c.lo() || i > c.hi() {
            Matrix::zeros(f, c.dim_at(i), 0)
        } else {
            subs[(i - c.lo()) as usize].1.clone()
        }
    });
    Ok((sub, incl))
}

#[derive(Clone, Debug)]
pub struct Zigzag<F: Field> {
    pub sub: ComplexOfModules<F>,
    pub inclusion: ChainMap<F>,
    pub quotient: ComplexOfModules<F>,
    /// Rounds until two consecutive rounds agreed.
    pub rounds: usize,
}

/// Grows `M` to a subcomplex `D` with `D` and `P/D` exact and every `D^i`, `P^i/D^i` projective.
///
/// Each round replaces every `D^i` by the sum of the fixed indecomposable summands of `P^i`
/// it meets, adds `d(D^{i-1})`, and adds a fixed linear preimage of `ker d ∩ D^{i+1}`.
/// All three steps are monotone, so the result is the least fixed point containing `M`.
pub fn extract_acyclic_subcomplex<F: Field>(p: &ProjectiveComplex<F>, m: &Matrix<F>, seed: u64) -> Result<Zigzag<F>> {
    let c = p.complex();
    let f = c.field();
    let degrees: Vec<i64> = c.degrees().collect();
    if c.is_zero() || degrees.is_empty() {
        let (sub, inclusion) = subcomplex(c, &[])?;
        return Ok(Zigzag { quotient: inclusion.cokernel().0, sub, inclusion, rounds: 0 });
    }
    let zero_pos = degrees.iter().position(|&i| i == 0);
    if m.rows() != c.dim_at(0) || (zero_pos.is_none() && m.cols() > 0 && !m.is_zero()) {
        return Err(Error::Shape("submodule columns must live in the degree-0 item".into()));
    }
    if !c.item(0).is_submodule(m) {
        return Err(Error::Precondition("M is not a submodule of the degree-0 item".into()));
    }
    let summands: Vec<Vec<Summand<F>>> =
        degrees.iter().map(|&i| decompose_projective(&c.item(i), seed)).collect::<Result<_>>()?;
    let mut spaces: Vec<RowSpace<F>> = degrees.iter().map(|&i| RowSpace::new(f, c.dim_at(i))).collect();
    if let Some(z) = zero_pos {
        for v in m.col_vectors() {
            spaces[z].insert(v);
        }
    }
    let n = degrees.len();
    let mut rounds = 0;
    loop {
        rounds += 1;
        let before: Vec<usize> = spaces.iter().map(RowSpace::rank).collect();
        for k in 0..n {
            let basis = spaces[k].basis_matrix();
            for s in &summands[k] {
                if !s.proj.mul(&basis).is_zero() {
                    for v in s.incl.col_vectors() {
                        spaces[k].insert(v);
                    }
                }
            }
        }
        for k in 0..n.saturating_sub(1) {
            let image = c.diff(degrees[k]).mul(&spaces[k].basis_matrix());
            for v in image.col_vectors() {
                spaces[k + 1].insert(v);
            }
        }
        for k in (1..n).rev() {
            let d_out = c.diff(degrees[k]);
            let basis = spaces[k].basis_matrix();
            let cycles = basis.mul(&d_out.mul(&basis).kernel_basis());
            let d_in = c.diff(degrees[k - 1]);
            for z in cycles.col_vectors() {
                let sol = d_in.solve(&z)?.expect("exact complex");
                spaces[k - 1].insert(sol.particular);
            }
        }
        let after: Vec<usize> = spaces.iter().map(RowSpace::rank).collect();
        if after == before {
            break;
        }
    }
    let mats: Vec<Matrix<F>> = spaces.iter().map(RowSpace::basis_matrix).collect();
    let (sub, inclusion) = subcomplex(c, &mats)?;
    let quotient = inclusion.cokernel().0;
    Ok(Zigzag { sub, inclusion, quotient, rounds })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZigzagCheck {
    pub contains_m: bool,
    pub subcomplex: bool,
    pub sub_exact: bool,
    pub sub_projective: bool,
    pub quotient_projective: bool,
    pub quotient_exact: bool,
}

impl ZigzagCheck {
    pub fn all(&self) -> bool {
        self.contains_m
            && self.subcomplex
            && self.sub_exact
            && self.sub_projective
            && self.quotient_projective
            && self.quotient_exact
    }
}

/// Re-checks the output contract from the matrices alone.
pub fn verify_zigzag<F: Field>(p: &ProjectiveComplex<F>, m: &Matrix<F>, z: &Zigzag<F>) -> ZigzagCheck {
    let c = p.complex();
    let f = c.field();
    let d0 = z.inclusion.block(0);
    let span = RowSpace::spanned_by(f, c.dim_at(0), d0.col_vectors());
    let contains_m = m.col_vectors().iter().all(|v| span.contains(v));
    let subcomplex = z.inclusion.is_chain_map() && z.inclusion.is_injective() && z.inclusion.dst == *c;
    let (quotient, proj) = z.inclusion.cokernel();
    let sub_exact = z.sub.is_exact();
    let sub_projective = z.sub.degrees().all(|i| is_projective(&z.sub.item(i)));
    let quotient_projective = quotient.degrees().all(|i| is_projective(&quotient.item(i)));
    let quotient_exact = quotient.is_exact() && proj.is_surjective();
    ZigzagCheck { contains_m, subcomplex, sub_exact, sub_projective, quotient_projective, quotient_exact }
}

/// Whether `a ⊆ b` degreewise as subcomplexes of the same ambient complex.
pub fn is_contained<F: Field>(a: &Zigzag<F>, b: &Zigzag<F>) -> bool {
    let c = &a.inclusion.dst;
    c.degrees().all(|i| {
        let span = RowSpace::spanned_by(c.field(), c.dim_at(i), b.inclusion.block(i).col_vectors());
        a.inclusion.block(i).col_vectors().iter().all(|v| span.contains(v))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{groups, Algebra};
    use crate::field::PrimeField;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn dual2() -> Arc<Algebra<PrimeField>> {
        Arc::new(Algebra::truncated_polynomial(&fp(2), "x", 2))
    }

    #[test]
    fn projective_decompositions() {
        let c2 = Arc::new(Algebra::group_algebra(&fp(3), &groups::cyclic(2), None).unwrap());
        let parts = decompose_projective(&ModuleRep::regular(c2), 0).unwrap();
        assert_eq!(parts.iter().map(|s| s.module.dim()).collect::<Vec<_>>(), vec![1, 1]);
        let a = ModuleRep::regular(dual2());
        assert_eq!(decompose_projective(&a, 0).unwrap().len(), 1);
        assert_eq!(decompose_projective(&a.power(2), 0).unwrap().len(), 2);
        let k = crate::decompose::top(&a).0;
        assert!(decompose_projective(&k, 0).is_err());
    }

    /// `(A -> A)` in degrees 0, 1 plus `(A -> A)` in degrees -1, 0.
    fn two_contractibles() -> ProjectiveComplex<PrimeField> {
        let alg = dual2();
        let f = fp(2);
        let a = ModuleRep::regular(alg.clone());
        let id = Matrix::identity(&f, 2);
        let z = Matrix::zeros(&f, 2, 2);
        // degree -1: A (second), degree 0: A (first) (+) A (second), degree 1: A (first)
        let dm1 = z.vstack(&id);
        let d0 = id.hstack(&z);
        let c = complex_over(&alg, -1, vec![a.clone(), a.power(2), a], vec![dm1, d0]).unwrap();
        ProjectiveComplex::new(c).unwrap()
    }

    #[test]
    fn zigzag_examples() {
        let p = two_contractibles();
        let f = fp(2);
        let zero = Matrix::zeros(&f, 4, 0);
        let z = extract_acyclic_subcomplex(&p, &zero, 0).unwrap();
        assert!(z.sub.is_zero());
        assert!(verify_zigzag(&p, &zero, &z).all());

        // socle of the first degree-0 summand: x * 1 = basis vector 1
        let soc = Matrix::column(&f, &[0, 1, 0, 0]);
        let z = extract_acyclic_subcomplex(&p, &soc, 0).unwrap();
        assert!(verify_zigzag(&p, &soc, &z).all());
        assert_eq!((z.sub.dim_at(-1), z.sub.dim_at(0), z.sub.dim_at(1)), (0, 2, 2));
        assert_eq!(z.inclusion.block(0), Matrix::identity(&f, 4).block(0, 4, 0, 2));
        assert_eq!((z.quotient.dim_at(-1), z.quotient.dim_at(0), z.quotient.dim_at(1)), (2, 2, 0));

        let all = Matrix::identity(&f, 4);
        let z = extract_acyclic_subcomplex(&p, &all, 0).unwrap();
        assert_eq!(z.sub.total_dim(), p.complex().total_dim());

    }

    #[test]
    fn non_submodule_is_rejected() {
        let p = two_contractibles();
        let f = fp(2);
        // 1 in the first summand generates a 2-dimensional submodule
        let m = Matrix::column(&f, &[1, 0, 0, 0]);
        assert!(extract_acyclic_subcomplex(&p, &m, 0).is_err());
    }

    #[test]
    fn non_exact_input_is_rejected() {
        let alg = dual2();
        let a = ModuleRep::regular(alg.clone());
        let c = complex_over(&alg, 0, vec![a], vec![]).unwrap();
        assert!(ProjectiveComplex::new(c).is_err());
    }
}
