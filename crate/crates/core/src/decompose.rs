//! Jacobson radical, Krull-Schmidt splitting of modules, principal
//! indecomposable modules and simple modules.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::Algebra;
use crate::field::Field;
use crate::linalg::{Matrix, RowSpace, Vector};
use crate::module::{are_isomorphic, hom_space, ModuleRep};

/// Basis (columns) of the Jacobson radical.
///
/// Characteristic 0 or larger than `dim A`: kernel of `(a, b) -> Tr(L_a L_b)`.
/// Otherwise the p-power trace iteration over the prime field: starting from
/// `I = A`, keep `a` with `g_i(a b) = 0` for all `b`, where
/// `g_i(a) = (Tr(L~_a^(p^i)) mod p^(i+1)) / p^i` on an integer lift.
pub fn radical<F: Field>(alg: &Algebra<F>) -> Matrix<F> {
    alg.structure().radical.clone()
}

fn compute_radical<F: Field>(alg: &Algebra<F>) -> Matrix<F> {
    let f = alg.field();
    let n = alg.dim();
    let p = f.characteristic();
    let mut current: Vec<Vector<F>> = (0..n).map(|i| alg.basis_vector(i)).collect();
    let steps = if p == 0 || p as usize > n { 1 } else { ilog(p, n as u64) + 1 };
    for i in 0..steps {
        if current.is_empty() {
            break;
        }
        // g[k][s] = g_i(a_s b_k)
        let g = Matrix::from_fn(f, n, current.len(), |k, s| {
            let c = alg.mul(&current[s], &alg.basis_vector(k));
            let l = alg.left_mul(&c);
            if p == 0 || p as usize > n {
                l.trace()
            } else {
                lifted_trace_digit(&l, p, i)
            }
        });
        let ker = g.kernel_basis();
        current = (0..ker.cols())
            .map(|t| {
                let c = ker.col(t);
                let mut v = vec![f.zero(); n];
                for (cs, a) in c.iter().zip(&current) {
                    crate::linalg::axpy(f, &mut v, cs, a);
                }
                v
            })
            .collect();
    }
    let j = Matrix::from_cols(f, n, &current);
    assert!(is_nilpotent_ideal(alg, &j), "radical computation produced a non-nilpotent or non-ideal subspace");
    j
}

fn ilog(p: u64, n: u64) -> usize {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        q *= p;
    }
    k
}

/// `(Tr(L~^(p^i)) mod p^(i+1)) / p^i` as a field element, `L~` the lift to `[0, p)`.
fn lifted_trace_digit<F: Field>(l: &Matrix<F>, p: u64, i: usize) -> F::Elem {
    let f = l.field();
    let n = l.rows();
    let modulus = p.pow(i as u32 + 1);
    let lift: Vec<u64> = l.entries().iter().map(|e| f.residue(e).expect("prime field")).collect();
    let mul = |a: &[u64], b: &[u64]| {
        let mut out = vec![0u64; n * n];
        for r in 0..n {
            for k in 0..n {
                let x = a[r * n + k];
                if x == 0 {
                    continue;
                }
                for c in 0..n {
                    out[r * n + c] = (out[r * n + c] + x * b[k * n + c]) % modulus;
                }
            }
        }
        out
    };
    let mut exp = p.pow(i as u32);
    let mut base = lift;
    let mut acc: Vec<u64> = (0..n * n).map(|k| u64::from(k / n == k % n)).collect();
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul(&acc, &base);
        }
        base = mul(&base, &base);
        exp >>= 1;
    }
    let tr = (0..n).fold(0u64, |t, k| (t + acc[k * n + k]) % modulus);
    let q = p.pow(i as u32);
    debug_assert_eq!(tr % q, 0);
    f.from_i64(((tr / q) % p) as i64)
}

fn is_nilpotent_ideal<F: Field>(alg: &Algebra<F>, j: &Matrix<F>) -> bool {
    let f = alg.field();
    let n = alg.dim();
    let space = RowSpace::spanned_by(f, n, j.col_vectors());
    for t in 0..j.cols() {
        let a = j.col(t);
        for k in 0..n {
            let b = alg.basis_vector(k);
            if !space.contains(&alg.mul(&a, &b)) || !space.contains(&alg.mul(&b, &a)) {
                return false;
            }
        }
    }
    let mut power = j.col_vectors();
    for _ in 0..=n {
        if power.is_empty() {
            return true;
        }
        let mut next = RowSpace::new(f, n);
        for a in &power {
            for t in 0..j.cols() {
                next.insert(alg.mul(a, &j.col(t)));
            }
        }
        power = next.rows().to_vec();
    }
    false
}

/// One summand of a decomposition: `proj * incl = id`, and the `incl * proj` sum to the identity.
#[derive(Clone, Debug)]
pub struct Summand<F: Field> {
    pub module: ModuleRep<F>,
    pub incl: Matrix<F>,
    pub proj: Matrix<F>,
}

/// Shift values tried when looking for an endomorphism that is neither nilpotent nor invertible.
fn shifts<F: Field>(f: &F) -> Vec<F::Elem> {
    if let Some(all) = f.elements() {
        return all;
    }
    let mut out: Vec<F::Elem> = [0, 1, -1, 2, -2].iter().map(|&v| f.from_i64(v)).collect();
    out.push(f.inv(&f.from_i64(2)).expect("2 invertible"));
    out
}

/// `M = ker phi^d (+) im phi^d` for an endomorphism that is neither nilpotent nor invertible.
fn fitting_split<F: Field>(m: &ModuleRep<F>, rng: &mut ChaCha8Rng) -> Option<(Matrix<F>, Matrix<F>)> {
    use rand::Rng;
    let f = m.field();
    let d = m.dim();
    let end = hom_space(m, m).expect("same algebra").basis;
    if end.len() <= 1 {
        return None;
    }
    let id = Matrix::identity(f, d);
    let lambdas = shifts(f);
    let try_split = |phi: &Matrix<F>| -> Option<(Matrix<F>, Matrix<F>)> {
        for l in &lambdas {
            let psi = phi.sub(&id.scale(l)).pow(d as u64);
            let r = psi.rank();
            if r > 0 && r < d {
                return Some((psi.kernel_basis(), psi.column_space()));
            }
        }
        None
    };
    for h in &end {
        if let Some(s) = try_split(h) {
            return Some(s);
        }
    }
    for a in &end {
        for b in &end {
            if let Some(s) = try_split(&a.mul(b)) {
                return Some(s);
            }
        }
    }
    for _ in 0..64 {
        let mut phi = Matrix::zeros(f, d, d);
        for h in &end {
            let c = if f.elements().is_some() { f.random(rng) } else { f.from_i64(rng.gen_range(-3..=3)) };
            phi = phi.add(&h.scale(&c));
        }
        if let Some(s) = try_split(&phi) {
            return Some(s);
        }
    }
    None
}

/// Krull-Schmidt decomposition into indecomposable summands.
///
/// A piece is declared indecomposable when its endomorphism ring is
/// one-dimensional or when the bounded search for a non-trivial Fitting
/// splitting fails.
pub fn decompose<F: Field>(m: &ModuleRep<F>, seed: u64) -> Vec<Summand<F>> {
    let f = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let id = Matrix::identity(f, m.dim());
    let mut work = vec![Summand { module: m.clone(), incl: id.clone(), proj: id }];
    while let Some(piece) = work.pop() {
        if piece.module.dim() == 0 {
            continue;
        }
        match fitting_split(&piece.module, &mut rng) {
            None => out.push(piece),
            Some((k, i)) => {
                let basis = k.hstack(&i);
                let inv = basis.inverse().expect("Fitting decomposition");
                let kd = k.cols();
                let d = basis.cols();
                // push the image part first so the kernel part is processed first
                for (cols, rows) in [(i, inv.block(kd, d, 0, d)), (k, inv.block(0, kd, 0, d))] {
                    let action = piece.module.actions().iter().map(|a| rows.mul(&a.mul(&cols))).collect();
                    let module = ModuleRep::new_unchecked(piece.module.algebra().clone(), cols.cols(), action);
                    work.push(Summand { module, incl: piece.incl.mul(&cols), proj: rows.mul(&piece.proj) });
                }
            }
        }
    }
    out
}

/// Groups summands into isomorphism classes; returns the class index of each.
pub fn isomorphism_classes<F: Field>(mods: &[ModuleRep<F>], seed: u64) -> Vec<usize> {
    let mut reps: Vec<usize> = Vec::new();
    let mut class = Vec::with_capacity(mods.len());
    for (i, m) in mods.iter().enumerate() {
        match reps.iter().position(|&r| are_isomorphic(&mods[r], m, seed).is_some()) {
            Some(c) => class.push(c),
            None => {
                class.push(reps.len());
                reps.push(i);
            }
        }
    }
    class
}

/// Radical, a complete set of primitive orthogonal idempotents, and their classes.
#[derive(Clone, Debug)]
pub struct Structure<F: Field> {
    pub radical: Matrix<F>,
    pub idempotents: Vec<Vector<F>>,
    /// Isomorphism class of `A e_i` for each idempotent.
    pub class_of: Vec<usize>,
    /// One idempotent index per class.
    pub class_reps: Vec<usize>,
}

impl<F: Field> Structure<F> {
    pub fn class_count(&self) -> usize {
        self.class_reps.len()
    }
    pub fn is_semisimple(&self) -> bool {
        self.radical.cols() == 0
    }
}

impl<F: Field> Algebra<F> {
    /// Cached radical and principal indecomposable data.
    pub fn structure(&self) -> Arc<Structure<F>> {
        self.structure.get_or_init(|| Arc::new(compute_structure(self))).clone()
    }
}

fn compute_structure<F: Field>(alg: &Algebra<F>) -> Structure<F> {
    let radical = compute_radical(alg);
    let a = Arc::new(alg.clone());
    let reg = ModuleRep::regular(a);
    let parts = decompose(&reg, 0);
    let idempotents: Vec<_> = parts.iter().map(|s| s.incl.mul(&s.proj).mul_vec(alg.unit())).collect();
    let mods: Vec<_> = parts.into_iter().map(|s| s.module).collect();
    let class_of = isomorphism_classes(&mods, 0);
    let mut class_reps = Vec::new();
    for (i, &c) in class_of.iter().enumerate() {
        if c == class_reps.len() {
            class_reps.push(i);
        }
    }
    Structure { radical, idempotents, class_of, class_reps }
}

/// `J M` as a column basis.
pub fn radical_submodule<F: Field>(m: &ModuleRep<F>) -> Matrix<F> {
    let f = m.field();
    let j = radical(m.algebra());
    let mut space = RowSpace::new(f, m.dim());
    for t in 0..j.cols() {
        let act = m.act(&j.col(t));
        for c in 0..m.dim() {
            space.insert(act.col(c));
        }
    }
    space.basis_matrix()
}

/// `M / J M`.
pub fn top<F: Field>(m: &ModuleRep<F>) -> (ModuleRep<F>, Matrix<F>) {
    m.quotient(&radical_submodule(m))
}

/// The left ideal `A e` for an idempotent `e`, with its inclusion into `A`.
pub fn principal_module<F: Field>(alg: &Arc<Algebra<F>>, e: &[F::Elem]) -> (ModuleRep<F>, Matrix<F>) {
    let basis = alg.right_mul(e).column_space();
    ModuleRep::regular(alg.clone()).submodule(&basis).expect("left ideal")
}

/// One principal indecomposable per isomorphism class.
pub fn pims<F: Field>(alg: &Arc<Algebra<F>>) -> Vec<ModuleRep<F>> {
    let st = alg.structure();
    st.class_reps.iter().map(|&i| principal_module(alg, &st.idempotents[i]).0).collect()
}

/// One simple module per isomorphism class, ordered like [`pims`].
pub fn simple_modules<F: Field>(alg: &Arc<Algebra<F>>) -> Vec<ModuleRep<F>> {
    pims(alg).iter().map(|p| top(p).0).collect()
}
