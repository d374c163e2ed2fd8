#![allow(dead_code)]

use std::sync::Arc;

use frobex::algebra::Algebra;
use frobex::field::{Field, PrimeField};
use frobex::linalg::{Matrix, Vector};
use frobex::module::ModuleRep;

pub fn fp(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

/// Algebras of dimension at most four used across the test suites.
pub fn small_algebras() -> Vec<(&'static str, Arc<Algebra<PrimeField>>)> {
    use frobex::algebra::{dual_numbers, groups};
    let f2 = fp(2);
    let f3 = fp(3);
    let y2 = Arc::new(Algebra::truncated_polynomial(&f2, "y", 2));
    vec![
        ("F2[x]/(x^2)", Arc::new(Algebra::truncated_polynomial(&f2, "x", 2))),
        ("F2[x]/(x^3)", Arc::new(Algebra::truncated_polynomial(&f2, "x", 3))),
        ("UT2(F2)", Arc::new(Algebra::upper_triangular_2(&f2))),
        ("F3[C2]", Arc::new(Algebra::group_algebra(&f3, &groups::cyclic(2), None).unwrap())),
        ("F3[C3]", Arc::new(Algebra::group_algebra(&f3, &groups::cyclic(3), None).unwrap())),
        ("F2[y]/(y^2)[x]/(x^2)", dual_numbers(&y2).0),
    ]
}

/// `Ext^i_A(M, N)` for `i = 1..=top`, computed from the cochain complex `Hom_A(F, N)`
/// of a free resolution built greedily from raw action matrices.
pub struct ExtOracle<F: Field> {
    field: F,
    left: Vec<Matrix<F>>,
    unit: Vector<F>,
}

/// A free module `A^g` presented by its number of generators, with the differential
/// into the previous free module (or into `M` for the augmentation).
struct Step<F: Field> {
    gens: usize,
    map: Matrix<F>,
}

impl<F: Field> ExtOracle<F> {
    pub fn new(alg: &Algebra<F>) -> Self {
        Self { field: alg.field().clone(), left: alg.left_matrices().to_vec(), unit: alg.unit().clone() }
    }

    fn n(&self) -> usize {
        self.left.len()
    }

    /// Closure of `vectors` under the action.
    fn generated(&self, action: &[Matrix<F>], dim: usize, vectors: &[Vector<F>]) -> Matrix<F> {
        let f = &self.field;
        let mut basis: Vec<Vector<F>> = Vec::new();
        let mut queue: Vec<Vector<F>> = vectors.to_vec();
        while let Some(v) = queue.pop() {
            let mut cand = basis.clone();
            cand.push(v.clone());
            if Matrix::from_cols(f, dim, &cand).rank() > basis.len() {
                basis.push(v.clone());
                for a in action {
                    queue.push(a.mul_vec(&v));
                }
            }
        }
        Matrix::from_cols(f, dim, &basis)
    }

    /// Greedy generating set of a module given by its action.
    fn generators(&self, action: &[Matrix<F>], dim: usize) -> Vec<Vector<F>> {
        let f = &self.field;
        let mut gens: Vec<Vector<F>> = Vec::new();
        let mut covered = 0;
        for k in 0..dim {
            let e: Vector<F> = (0..dim).map(|t| if t == k { f.one() } else { f.zero() }).collect();
            let mut cand = gens.clone();
            cand.push(e);
            let r = self.generated(action, dim, &cand).cols();
            if r > covered {
                covered = r;
                gens = cand;
            }
        }
        gens
    }

    /// The map `A^g -> M` sending generator `t` to `v_t`.
    fn free_map(&self, action: &[Matrix<F>], dim: usize, gens: &[Vector<F>]) -> Matrix<F> {
        let cols: Vec<Vector<F>> = gens.iter().flat_map(|v| action.iter().map(move |a| a.mul_vec(v))).collect();
        Matrix::from_cols(&self.field, dim, &cols)
    }

    fn free_action(&self, g: usize) -> Vec<Matrix<F>> {
        let f = &self.field;
        self.left
            .iter()
            .map(|l| (0..g).fold(Matrix::zeros(f, 0, 0), |acc, _| acc.direct_sum(l)))
            .collect()
    }

    fn resolution(&self, m: &ModuleRep<F>, len: usize) -> Vec<Step<F>> {
        let f = &self.field;
        let mut action: Vec<Matrix<F>> = m.actions().to_vec();
        let mut dim = m.dim();
        let mut incl = Matrix::identity(f, dim);
        let mut steps = Vec::new();
        for _ in 0..len {
            let gens = self.generators(&action, dim);
            let pi = self.free_map(&action, dim, &gens);
            steps.push(Step { gens: gens.len(), map: incl.mul(&pi) });
            let k = pi.kernel_basis();
            let free = self.free_action(gens.len());
            let linv = k.left_inverse().unwrap_or_else(|| Matrix::zeros(f, 0, pi.cols()));
            action = free.iter().map(|a| linv.mul(&a.mul(&k))).collect();
            dim = k.cols();
            incl = k;
        }
        steps
    }

    /// `Hom_A(A^g, N) ≅ N^g -> Hom_A(A^h, N) ≅ N^h`, precomposition with `d: A^h -> A^g`.
    fn coboundary(&self, n: &ModuleRep<F>, g: usize, d: &Matrix<F>, h: usize) -> Matrix<F> {
        let f = &self.field;
        let (na, dn) = (self.n(), n.dim());
        let cols: Vec<Vector<F>> = (0..g * dn)
            .map(|c| {
                let (t, k) = (c / dn, c % dn);
                let w: Vector<F> = (0..dn).map(|s| if s == k { f.one() } else { f.zero() }).collect();
                // phi on A^g: slot t gets w, others 0; evaluated on d(generator s)
                let mut out = Vec::with_capacity(h * dn);
                for s in 0..h {
                    let mut gen = vec![f.zero(); h * na];
                    gen[s * na..(s + 1) * na].clone_from_slice(&self.unit);
                    let img = d.mul_vec(&gen);
                    let a = &img[t * na..(t + 1) * na];
                    let mut v = vec![f.zero(); dn];
                    for (j, c) in a.iter().enumerate() {
                        let aw = n.action(j).mul_vec(&w);
                        for (x, y) in v.iter_mut().zip(aw) {
                            *x = f.add(x, &f.mul(c, &y));
                        }
                    }
                    out.extend(v);
                }
                out
            })
            .collect();
        Matrix::from_cols(f, h * dn, &cols)
    }

    /// Dimensions of `Ext^1, ..., Ext^top`.
    pub fn ext_dims(&self, m: &ModuleRep<F>, n: &ModuleRep<F>, top: usize) -> Vec<usize> {
        let steps = self.resolution(m, top + 2);
        // steps[i].map : F_i -> F_{i-1} for i >= 1
        let deltas: Vec<Matrix<F>> = (0..=top)
            .map(|i| self.coboundary(n, steps[i].gens, &steps[i + 1].map, steps[i + 1].gens))
            .collect();
        (1..=top)
            .map(|i| {
                let cdim = steps[i].gens * n.dim();
                cdim - deltas[i].rank() - deltas[i - 1].rank()
            })
            .collect()
    }
}
