//! Finite-dimensional associative unital algebras given by structure constants,
//! and unital embeddings `R -> A` between them.

use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{is_zero_vec, unit_vector, Matrix, RowSpace, Vector};

/// `b_i * b_j = sum_k c[i][j][k] b_k`, stored as left multiplication matrices
/// `L_i` with `L_i[k][j] = c[i][j][k]`.
#[derive(Clone, Debug)]
pub struct Algebra<F: Field> {
    field: F,
    labels: Vec<String>,
    left: Vec<Matrix<F>>,
    unit: Vector<F>,
    generators: Vec<usize>,
    pub(crate) structure: OnceLock<Arc<crate::decompose::Structure<F>>>,
    opposite: OnceLock<Arc<Algebra<F>>>,
}

impl<F: Field> PartialEq for Algebra<F> {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.left == other.left && self.unit == other.unit
    }
}
impl<F: Field> Eq for Algebra<F> {}

impl<F: Field> Algebra<F> {
    /// Builds and validates an algebra from `consts[i][j]` = coordinates of `b_i b_j`.
    pub fn new(field: &F, labels: Vec<String>, consts: &[Vec<Vector<F>>], unit: Vector<F>) -> Result<Self> {
        let n = labels.len();
        if consts.len() != n || consts.iter().any(|r| r.len() != n || r.iter().any(|v| v.len() != n)) || unit.len() != n {
            return Err(Error::Shape(format!("structure constants must be {n}x{n}x{n} with a unit of length {n}")));
        }
        let left = (0..n)
            .map(|i| Matrix::from_fn(field, n, n, |k, j| consts[i][j][k].clone()))
            .collect();
        Self::from_left_matrices(field, labels, left, unit)
    }

    pub fn from_left_matrices(field: &F, labels: Vec<String>, left: Vec<Matrix<F>>, unit: Vector<F>) -> Result<Self> {
        let mut alg = Self { field: field.clone(), labels, left, unit, generators: Vec::new(), structure: OnceLock::new(), opposite: OnceLock::new() };
        alg.validate()?;
        alg.generators = alg.compute_generators();
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let n = self.dim();
        let f = &self.field;
        if self.left.len() != n || self.left.iter().any(|l| l.rows() != n || l.cols() != n) {
            return Err(Error::Shape("left multiplication matrices have the wrong shape".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let lhs = self.left_mul(&self.left[i].col(j));
                let rhs = self.left[i].mul(&self.left[j]);
                if lhs != rhs {
                    let k = (0..n).find(|&k| lhs.col(k) != rhs.col(k)).unwrap_or(0);
                    return Err(Error::Validation(format!(
                        "associativity fails at (i,j,k) = ({i},{j},{k}): (b{i} b{j}) b{k} != b{i} (b{j} b{k})"
                    )));
                }
            }
        }
        if !self.left_mul(&self.unit).is_identity() {
            return Err(Error::Validation("unit law fails: unit * b != b".into()));
        }
        for i in 0..n {
            if self.left[i].mul_vec(&self.unit) != unit_vector(f, n, i) {
                return Err(Error::Validation(format!("unit law fails: b{i} * unit != b{i}")));
            }
        }
        Ok(())
    }

    /// Greedy algebra generators among basis indices, the unit excluded.
    fn compute_generators(&self) -> Vec<usize> {
        let n = self.dim();
        let mut gens = Vec::new();
        let mut span = self.closure(&gens);
        for i in 0..n {
            if span.rank() == n {
                break;
            }
            if !span.contains(&unit_vector(&self.field, n, i)) {
                gens.push(i);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Subalgebra generated by the unit and the given basis elements.
    fn closure(&self, gens: &[usize]) -> RowSpace<F> {
        let n = self.dim();
        let mut span = RowSpace::new(&self.field, n);
        let mut frontier = vec![self.unit.clone()];
        span.insert(self.unit.clone());
        while let Some(v) = frontier.pop() {
            for &g in gens {
                let w = self.left[g].mul_vec(&v);
                if span.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        span
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn dim(&self) -> usize {
        self.labels.len()
    }
    pub fn labels(&self) -> &[String] {
        &self.labels
    }
    pub fn unit(&self) -> &Vector<F> {
        &self.unit
    }
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn basis_vector(&self, i: usize) -> Vector<F> {
        unit_vector(&self.field, self.dim(), i)
    }

    pub fn structure_constant(&self, i: usize, j: usize, k: usize) -> &F::Elem {
        self.left[i].get(k, j)
    }

    pub fn left_matrices(&self) -> &[Matrix<F>] {
        &self.left
    }

    /// Matrix of `x -> a x`.
    pub fn left_mul(&self, a: &[F::Elem]) -> Matrix<F> {
        let f = &self.field;
        let mut acc = Matrix::zeros(f, self.dim(), self.dim());
        for (c, l) in a.iter().zip(&self.left) {
            if !f.is_zero(c) {
                acc = acc.add(&l.scale(c));
            }
        }
        acc
    }

    /// Matrix of `x -> x b`.
    pub fn right_mul(&self, b: &[F::Elem]) -> Matrix<F> {
        let cols: Vec<_> = self.left.iter().map(|l| l.mul_vec(b)).collect();
        Matrix::from_cols(&self.field, self.dim(), &cols)
    }

    pub fn mul(&self, a: &[F::Elem], b: &[F::Elem]) -> Vector<F> {
        let f = &self.field;
        let mut acc = vec![f.zero(); self.dim()];
        for (c, l) in a.iter().zip(&self.left) {
            if !f.is_zero(c) {
                crate::linalg::axpy(f, &mut acc, c, &l.mul_vec(b));
            }
        }
        acc
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.dim()).all(|i| (0..self.dim()).all(|j| self.left[i].col(j) == self.left[j].col(i)))
    }

    pub fn is_zero_elem(&self, a: &[F::Elem]) -> bool {
        is_zero_vec(&self.field, a)
    }

    /// `c'[i][j][k] = c[j][i][k]`, same unit.
    pub fn opposite(&self) -> Self {
        let n = self.dim();
        let left = (0..n).map(|i| self.right_mul(&self.basis_vector(i))).collect();
        let labels = self.labels.clone();
        let mut op = Self { field: self.field.clone(), labels, left, unit: self.unit.clone(), generators: Vec::new(), structure: OnceLock::new(), opposite: OnceLock::new() };
        op.generators = op.compute_generators();
        op
    }

    /// Cached [`Algebra::opposite`], shared so that its own caches persist.
    pub fn opposite_arc(&self) -> Arc<Self> {
        self.opposite.get_or_init(|| Arc::new(self.opposite())).clone()
    }

    /// The ground field as a one-dimensional algebra.
    pub fn ground(field: &F) -> Self {
        Self::from_left_matrices(field, vec!["1".into()], vec![Matrix::identity(field, 1)], vec![field.one()])
            .expect("ground field")
    }

    /// `F[G]` from a multiplication table `table[i][j] = index of g_i g_j`.
    pub fn group_algebra(field: &F, table: &[Vec<usize>], labels: Option<Vec<String>>) -> Result<Self> {
        let n = table.len();
        validate_group_table(table)?;
        let e = (0..n).find(|&i| (0..n).all(|j| table[i][j] == j)).expect("validated identity");
        let labels = labels.unwrap_or_else(|| (0..n).map(|i| format!("g{i}")).collect());
        let left = (0..n)
            .map(|i| Matrix::from_fn(field, n, n, |k, j| if table[i][j] == k { field.one() } else { field.zero() }))
            .collect();
        Self::from_left_matrices(field, labels, left, unit_vector(field, n, e))
    }

    /// Full matrix algebra `M_n(F)` on matrix units `e_ij`, index `i*n + j`.
    pub fn matrix_algebra(field: &F, n: usize) -> Self {
        let d = n * n;
        let labels = (0..d).map(|i| format!("e{}{}", i / n + 1, i % n + 1)).collect();
        let left = (0..d)
            .map(|a| {
                let (i, j) = (a / n, a % n);
                Matrix::from_fn(field, d, d, |k, b| {
                    let (jj, l) = (b / n, b % n);
                    if jj == j && k == i * n + l {
                        field.one()
                    } else {
                        field.zero()
                    }
                })
            })
            .collect();
        let mut unit = vec![field.zero(); d];
        for i in 0..n {
            unit[i * n + i] = field.one();
        }
        Self::from_left_matrices(field, labels, left, unit).expect("matrix algebra")
    }

    /// `F[y]/(y^m)` on the basis `1, y, .., y^{m-1}`.
    pub fn truncated_polynomial(field: &F, var: &str, m: usize) -> Self {
        assert!(m >= 1);
        let labels = (0..m)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            })
            .collect();
        let left = (0..m)
            .map(|i| Matrix::from_fn(field, m, m, |k, j| if i + j == k { field.one() } else { field.zero() }))
            .collect();
        Self::from_left_matrices(field, labels, left, unit_vector(field, m, 0)).expect("truncated polynomial")
    }

    /// Upper-triangular 2x2 matrices on `e11, e12, e22`.
    pub fn upper_triangular_2(field: &F) -> Self {
        let m2 = Arc::new(Self::matrix_algebra(field, 2));
        let span = Matrix::from_cols(field, 4, &[m2.basis_vector(0), m2.basis_vector(1), m2.basis_vector(3)]);
        let ext = AlgebraExtension::from_subspace(m2, &span).expect("UT2 is a subalgebra");
        let mut r = (*ext.sub).clone();
        r.labels = vec!["e11".into(), "e12".into(), "e22".into()];
        r
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.dim());
        self.labels = labels;
        self
    }
}

fn validate_group_table(table: &[Vec<usize>]) -> Result<()> {
    let n = table.len();
    if n == 0 {
        return Err(Error::Validation("group table is empty".into()));
    }
    for (i, row) in table.iter().enumerate() {
        if row.len() != n || row.iter().any(|&k| k >= n) {
            return Err(Error::Validation(format!("closure: row {i} is not a map into the group")));
        }
        let mut seen = vec![false; n];
        for &k in row {
            if std::mem::replace(&mut seen[k], true) {
                return Err(Error::Validation(format!("latin square: row {i} repeats element {k}")));
            }
        }
    }
    for j in 0..n {
        let mut seen = vec![false; n];
        for row in table {
            if std::mem::replace(&mut seen[row[j]], true) {
                return Err(Error::Validation(format!("latin square: column {j} repeats element {}", row[j])));
            }
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if table[table[a][b]][c] != table[a][table[b][c]] {
                    return Err(Error::Validation(format!("associativity: ({a}{b}){c} != {a}({b}{c})")));
                }
            }
        }
    }
    let Some(e) = (0..n).find(|&i| (0..n).all(|j| table[i][j] == j && table[j][i] == j)) else {
        return Err(Error::Validation("identity: no two-sided identity element".into()));
    };
    for a in 0..n {
        if !(0..n).any(|b| table[a][b] == e && table[b][a] == e) {
            return Err(Error::Validation(format!("inverses: element {a} has no inverse")));
        }
    }
    Ok(())
}

/// Multiplication tables of a few small groups used throughout the tests.
pub mod groups {
    pub fn cyclic(n: usize) -> Vec<Vec<usize>> {
        (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect()
    }

    /// S_3 with elements listed as permutations of {0,1,2}; index 0 is the identity.
    pub fn symmetric3() -> Vec<Vec<usize>> {
        let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
        let idx = |p: [usize; 3]| perms.iter().position(|q| *q == p).unwrap();
        perms
            .iter()
            .map(|a| perms.iter().map(|b| idx([a[b[0]], a[b[1]], a[b[2]]])).collect())
            .collect()
    }

    pub fn inverse(table: &[Vec<usize>], a: usize) -> usize {
        let e = (0..table.len()).find(|&i| table[i][i] == i).unwrap();
        (0..table.len()).find(|&b| table[a][b] == e).unwrap()
    }
}

/// A unital embedding `R -> A` on coordinates (`emb` is `dim A x dim R`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraExtension<F: Field> {
    pub sub: Arc<Algebra<F>>,
    pub amb: Arc<Algebra<F>>,
    pub emb: Matrix<F>,
}

impl<F: Field> AlgebraExtension<F> {
    pub fn new(sub: Arc<Algebra<F>>, amb: Arc<Algebra<F>>, emb: Matrix<F>) -> Result<Self> {
        if emb.rows() != amb.dim() || emb.cols() != sub.dim() {
            return Err(Error::Shape("embedding must be dim A x dim R".into()));
        }
        if sub.field() != amb.field() {
            return Err(Error::DomainMismatch(sub.field().tag().to_string(), amb.field().tag().to_string()));
        }
        if emb.rank() != sub.dim() {
            return Err(Error::Validation("embedding is not injective".into()));
        }
        if emb.mul_vec(sub.unit()) != *amb.unit() {
            return Err(Error::Validation("embedding does not preserve the unit".into()));
        }
        for i in 0..sub.dim() {
            for j in 0..sub.dim() {
                let lhs = emb.mul_vec(&sub.mul(&sub.basis_vector(i), &sub.basis_vector(j)));
                let rhs = amb.mul(&emb.col(i), &emb.col(j));
                if lhs != rhs {
                    return Err(Error::Validation(format!("embedding is not multiplicative at ({i},{j})")));
                }
            }
        }
        Ok(Self { sub, amb, emb })
    }

    /// `R` = the subalgebra spanned by the columns of `span`, with those columns as its basis.
    pub fn from_subspace(amb: Arc<Algebra<F>>, span: &Matrix<F>) -> Result<Self> {
        let f = amb.field().clone();
        let n = amb.dim();
        if span.rows() != n {
            return Err(Error::Shape("span columns must live in A".into()));
        }
        let r = span.cols();
        if span.rank() != r {
            return Err(Error::Validation("span columns are linearly dependent".into()));
        }
        let Some(unit) = span.solve(amb.unit())?.map(|s| s.particular) else {
            return Err(Error::Closure("the unit of A is not in the span".into()));
        };
        let mut consts = vec![vec![Vec::new(); r]; r];
        for i in 0..r {
            for j in 0..r {
                let prod = amb.mul(&span.col(i), &span.col(j));
                match span.solve(&prod)? {
                    Some(s) => consts[i][j] = s.particular,
                    None => {
                        return Err(Error::Closure(format!("product of span columns {i} and {j} leaves the span")));
                    }
                }
            }
        }
        let labels = (0..r).map(|i| format!("r{i}")).collect();
        let sub = Arc::new(Algebra::new(&f, labels, &consts, unit)?);
        Self::new(sub, amb, span.clone())
    }

    /// `R = R` along the identity.
    pub fn identity(alg: Arc<Algebra<F>>) -> Self {
        let emb = Matrix::identity(alg.field(), alg.dim());
        Self { sub: alg.clone(), amb: alg, emb }
    }

    /// The ground field inside `A` via the unit.
    pub fn over_ground_field(amb: Arc<Algebra<F>>) -> Self {
        let f = amb.field().clone();
        let emb = Matrix::column(&f, amb.unit());
        Self { sub: Arc::new(Algebra::ground(&f)), amb, emb }
    }

    pub fn field(&self) -> &F {
        self.amb.field()
    }

    /// `iota(r)` for coordinates `r` of R.
    pub fn embed(&self, r: &[F::Elem]) -> Vector<F> {
        self.emb.mul_vec(r)
    }
}

/// `A = R[x]/(x^2)` on the basis `b_0..b_{n-1}, b_0 x..b_{n-1} x`, and `R -> A` onto degree 0.
pub fn dual_numbers<F: Field>(r: &Arc<Algebra<F>>) -> (Arc<Algebra<F>>, AlgebraExtension<F>) {
    let f = r.field().clone();
    let n = r.dim();
    let left = (0..2 * n)
        .map(|a| {
            let (i, xa) = (a % n, a / n);
            Matrix::from_fn(&f, 2 * n, 2 * n, |k, b| {
                let (j, xb) = (b % n, b / n);
                let deg = xa + xb;
                if deg >= 2 || k / n != deg {
                    f.zero()
                } else {
                    r.structure_constant(i, j, k % n).clone()
                }
            })
        })
        .collect();
    let mut labels: Vec<String> = r.labels().to_vec();
    labels.extend(r.labels().iter().map(|l| if l == "1" { "x".to_string() } else { format!("{l}x") }));
    let mut unit = r.unit().clone();
    unit.extend(std::iter::repeat(f.zero()).take(n));
    let a = Arc::new(Algebra::from_left_matrices(&f, labels, left, unit).expect("dual numbers over a valid algebra"));
    let emb = Matrix::identity(&f, 2 * n).block(0, 2 * n, 0, n);
    let ext = AlgebraExtension::new(r.clone(), a.clone(), emb).expect("degree-zero embedding");
    (a, ext)
}

/// Coordinates of the central element `x` in `R[x]/(x^2)`, i.e. `unit_R * x`.
pub fn dual_numbers_x<F: Field>(r: &Algebra<F>) -> Vector<F> {
    let f = r.field();
    let mut v = vec![f.zero(); r.dim()];
    v.extend(r.unit().iter().cloned());
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{PrimeField, Rationals};

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    #[test]
    fn c2_over_f2() {
        let f = fp(2);
        let a = Algebra::group_algebra(&f, &groups::cyclic(2), None).unwrap();
        assert_eq!(a.dim(), 2);
        let g = a.basis_vector(1);
        assert_eq!(a.mul(&g, &g), *a.unit());
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    let expect = u64::from((i + j) % 2 == k);
                    assert_eq!(*a.structure_constant(i, j, k), expect);
                }
            }
        }
    }

    #[test]
    fn trivial_group_is_the_field() {
        let a = Algebra::group_algebra(&Rationals, &[vec![0]], None).unwrap();
        assert_eq!(a, Algebra::ground(&Rationals));
    }

    #[test]
    fn s3_over_f5_is_associative() {
        let a = Algebra::group_algebra(&fp(5), &groups::symmetric3(), None).unwrap();
        assert_eq!(a.dim(), 6);
        assert!(!a.is_commutative());
    }

    #[test]
    fn group_table_errors_name_the_axiom() {
        let bad = vec![vec![0, 1], vec![1, 1]];
        let err = Algebra::group_algebra(&fp(2), &bad, None).unwrap_err();
        assert!(err.to_string().contains("latin square"), "{err}");
        // latin square without identity
        let no_id = vec![vec![0, 2, 1], vec![2, 1, 0], vec![1, 0, 2]];
        let err = Algebra::group_algebra(&fp(2), &no_id, None).unwrap_err();
        assert!(err.to_string().contains("identity") || err.to_string().contains("associativity"), "{err}");
    }

    #[test]
    fn broken_associativity_is_rejected() {
        let f = fp(3);
        // b0 unit, b1 b1 = b2, b1 b2 = 0, b2 b1 = b1: (b1 b1) b1 != b1 (b1 b1)
        let e = |i: usize| crate::linalg::unit_vector(&f, 3, i);
        let z = vec![0u64; 3];
        let consts = vec![
            vec![e(0), e(1), e(2)],
            vec![e(1), e(2), z.clone()],
            vec![e(2), e(1), z],
        ];
        let err = Algebra::new(&f, vec!["1".into(), "a".into(), "b".into()], &consts, e(0)).unwrap_err();
        assert!(err.to_string().contains("associativity fails at (i,j,k)"), "{err}");
    }

    #[test]
    fn dual_numbers_shapes() {
        let f2 = fp(2);
        let (a, _) = dual_numbers(&Arc::new(Algebra::ground(&f2)));
        assert_eq!(a.dim(), 2);
        assert_eq!(*a, Algebra::truncated_polynomial(&f2, "x", 2));

        let r = Arc::new(Algebra::truncated_polynomial(&f2, "y", 2));
        let (a, ext) = dual_numbers(&r);
        assert_eq!(a.dim(), 4);
        assert!(a.is_commutative());
        let x = dual_numbers_x(&r);
        assert!(a.is_zero_elem(&a.mul(&x, &x)));
        // restricting A's product to the degree-0 copy recovers R
        for i in 0..2 {
            for j in 0..2 {
                let p = a.mul(&ext.embed(&r.basis_vector(i)), &ext.embed(&r.basis_vector(j)));
                assert_eq!(p, ext.embed(&r.mul(&r.basis_vector(i), &r.basis_vector(j))));
            }
        }

        let ut2 = Arc::new(Algebra::upper_triangular_2(&f2));
        let (a, _) = dual_numbers(&ut2);
        assert_eq!(a.dim(), 6);
        let x = dual_numbers_x(&ut2);
        for i in 0..6 {
            let b = a.basis_vector(i);
            assert_eq!(a.mul(&x, &b), a.mul(&b, &x));
        }
    }

    #[test]
    fn m4_subalgebra() {
        let f = fp(5);
        let m4 = Arc::new(Algebra::matrix_algebra(&f, 4));
        let e = |i: usize, j: usize| m4.basis_vector((i - 1) * 4 + (j - 1));
        let e1 = crate::linalg::add_vec(&f, &e(1, 1), &e(4, 4));
        let e2 = crate::linalg::add_vec(&f, &e(2, 2), &e(3, 3));
        let span = Matrix::from_cols(&f, 16, &[e1, e2, e(2, 1), e(3, 1), e(4, 1), e(4, 2), e(4, 3)]);
        let ext = AlgebraExtension::from_subspace(m4.clone(), &span).unwrap();
        assert_eq!(ext.sub.dim(), 7);

        let bad = Matrix::from_cols(&f, 16, &[m4.unit().clone(), e(1, 2)]);
        let bad2 = Matrix::from_cols(&f, 16, &[m4.unit().clone(), e(1, 2), e(2, 1)]);
        assert!(AlgebraExtension::from_subspace(m4.clone(), &bad).is_ok()); // e12^2 = 0, closed
        assert!(matches!(AlgebraExtension::from_subspace(m4, &bad2), Err(Error::Closure(_))));
    }

    #[test]
    fn unit_only_span_is_the_ground_field() {
        let f = fp(3);
        let a = Arc::new(Algebra::group_algebra(&f, &groups::cyclic(2), None).unwrap());
        let ext = AlgebraExtension::from_subspace(a.clone(), &Matrix::column(&f, a.unit())).unwrap();
        assert_eq!(*ext.sub, Algebra::ground(&f).with_labels(vec!["r0".into()]));
    }

    #[test]
    fn opposite_is_an_involution() {
        let f = fp(2);
        let ut2 = Algebra::upper_triangular_2(&f);
        let op = ut2.opposite();
        assert_ne!(op, ut2);
        assert_eq!(op.opposite(), ut2);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    assert_eq!(op.structure_constant(i, j, k), ut2.structure_constant(j, i, k));
                }
            }
        }
        let c = Algebra::group_algebra(&f, &groups::cyclic(3), None).unwrap();
        assert_eq!(c.opposite(), c);
    }
}
