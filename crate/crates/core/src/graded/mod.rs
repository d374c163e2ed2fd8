//! Graded modules over `A = R[x]/(x^2)` as bounded cochain complexes of
//! `R`-modules, with `x` acting as the differential.

mod gp;

pub use gp::*;

use std::sync::Arc;

use crate::algebra::{dual_numbers, dual_numbers_x, Algebra, AlgebraExtension};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gproj::is_projective;
use crate::linalg::{Matrix, RowSpace, Vector};
use crate::module::{find_section, hom_space, search_invertible, ModuleHom, ModuleRep};

/// `R`, `A = R[x]/(x^2)` and the inclusion, shared by every complex over `R`.
#[derive(Debug)]
pub struct DualNumbers<F: Field> {
    pub r: Arc<Algebra<F>>,
    pub a: Arc<Algebra<F>>,
    pub ext: AlgebraExtension<F>,
    /// Coordinates of `x` in `A`.
    pub x: Vector<F>,
}

impl<F: Field> DualNumbers<F> {
    pub fn new(r: Arc<Algebra<F>>) -> Arc<Self> {
        let (a, ext) = dual_numbers(&r);
        let x = dual_numbers_x(&r);
        Arc::new(Self { r, a, ext, x })
    }
    pub fn field(&self) -> &F {
        self.r.field()
    }
}

/// Items `M^lo .. M^hi` over `R` with differentials `d^i : M^i -> M^{i+1}`.
#[derive(Clone, Debug)]
pub struct ComplexOfModules<F: Field> {
    ctx: Arc<DualNumbers<F>>,
    lo: i64,
    items: Vec<ModuleRep<F>>,
    diffs: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for ComplexOfModules<F> {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = (self.trimmed(), other.trimmed());
        a.ctx.r == b.ctx.r && a.lo == b.lo && a.items == b.items && a.diffs == b.diffs
            || (a.items.is_empty() && b.items.is_empty())
    }
}

impl<F: Field> ComplexOfModules<F> {
    pub fn new(ctx: Arc<DualNumbers<F>>, lo: i64, items: Vec<ModuleRep<F>>, diffs: Vec<Matrix<F>>) -> Result<Self> {
        if diffs.len() + 1 != items.len().max(1) {
            return Err(Error::Shape(format!("{} items need {} differentials", items.len(), items.len().saturating_sub(1))));
        }
        for (k, m) in items.iter().enumerate() {
            if m.algebra().as_ref() != ctx.r.as_ref() {
                return Err(Error::Grading(format!("item in degree {} is not over the base algebra", lo + k as i64)));
            }
        }
        for (k, d) in diffs.iter().enumerate() {
            let deg = lo + k as i64;
            if ModuleHom::new(items[k].clone(), items[k + 1].clone(), d.clone()).is_err() {
                return Err(Error::Grading(format!("differential in degree {deg} is not a module map")));
            }
            if k + 1 < diffs.len() && !diffs[k + 1].mul(d).is_zero() {
                return Err(Error::Grading(format!("d o d != 0 at degree {deg}")));
            }
        }
        Ok(Self { ctx, lo, items, diffs })
    }

    pub(crate) fn new_unchecked(ctx: Arc<DualNumbers<F>>, lo: i64, items: Vec<ModuleRep<F>>, diffs: Vec<Matrix<F>>) -> Self {
        debug_assert_eq!(diffs.len() + 1, items.len().max(1));
        Self { ctx, lo, items, diffs }
    }

    pub fn zero(ctx: Arc<DualNumbers<F>>) -> Self {
        Self { ctx, lo: 0, items: Vec::new(), diffs: Vec::new() }
    }

    /// A single module in degree `deg`.
    pub fn concentrated(ctx: Arc<DualNumbers<F>>, deg: i64, m: ModuleRep<F>) -> Self {
        Self { ctx, lo: deg, items: vec![m], diffs: Vec::new() }
    }

    pub fn ctx(&self) -> &Arc<DualNumbers<F>> {
        &self.ctx
    }
    pub fn field(&self) -> &F {
        self.ctx.field()
    }
    pub fn lo(&self) -> i64 {
        self.lo
    }
    pub fn hi(&self) -> i64 {
        self.lo + self.items.len() as i64 - 1
    }
    pub fn items(&self) -> &[ModuleRep<F>] {
        &self.items
    }
    pub fn diffs(&self) -> &[Matrix<F>] {
        &self.diffs
    }
    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi()
    }

    pub fn item(&self, i: i64) -> ModuleRep<F> {
        if i < self.lo || i > self.hi() {
            ModuleRep::zero(self.ctx.r.clone())
        } else {
            self.items[(i - self.lo) as usize].clone()
        }
    }

    pub fn dim_at(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi() {
            0
        } else {
            self.items[(i - self.lo) as usize].dim()
        }
    }

    /// `d^i : M^i -> M^{i+1}`.
    pub fn diff(&self, i: i64) -> Matrix<F> {
        if i >= self.lo && i < self.hi() {
            self.diffs[(i - self.lo) as usize].clone()
        } else {
            Matrix::zeros(self.field(), self.dim_at(i + 1), self.dim_at(i))
        }
    }

    pub fn total_dim(&self) -> usize {
        self.items.iter().map(ModuleRep::dim).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    /// Same complex with zero items removed from both ends.
    pub fn trimmed(&self) -> Self {
        let first = self.items.iter().position(|m| m.dim() > 0);
        let Some(first) = first else {
            return Self::zero(self.ctx.clone());
        };
        let last = self.items.iter().rposition(|m| m.dim() > 0).expect("nonzero item");
        Self {
            ctx: self.ctx.clone(),
            lo: self.lo + first as i64,
            items: self.items[first..=last].to_vec(),
            diffs: self.diffs[first..last].to_vec(),
        }
    }

    /// Re-windows to `[lo, hi]`, padding with zeros; the window must contain every nonzero item.
    pub fn rewindow(&self, lo: i64, hi: i64) -> Self {
        let t = self.trimmed();
        assert!(t.items.is_empty() || (lo <= t.lo && t.hi() <= hi), "window too small");
        let items: Vec<_> = (lo..=hi).map(|i| t.item(i)).collect();
        let diffs: Vec<_> = (lo..hi).map(|i| t.diff(i)).collect();
        Self { ctx: self.ctx.clone(), lo, items, diffs }
    }

    /// Offsets of each degree inside the ungraded module.
    fn offsets(&self) -> Vec<usize> {
        let mut off = vec![0];
        for m in &self.items {
            off.push(off.last().unwrap() + m.dim());
        }
        off
    }

    /// `(+)_i M^i` over `A`: `R` acts diagonally and `x` by the differentials.
    pub fn to_ungraded(&self) -> ModuleRep<F> {
        let f = self.field();
        let n = self.ctx.r.dim();
        let total = self.total_dim();
        let off = self.offsets();
        let mut x = Matrix::zeros(f, total, total);
        for (k, d) in self.diffs.iter().enumerate() {
            for r in 0..d.rows() {
                for c in 0..d.cols() {
                    x.set(off[k + 1] + r, off[k] + c, d.get(r, c).clone());
                }
            }
        }
        let diag: Vec<Matrix<F>> = (0..n)
            .map(|j| self.items.iter().fold(Matrix::zeros(f, 0, 0), |acc, m| acc.direct_sum(m.action(j))))
            .collect();
        let mut action = diag.clone();
        action.extend(diag.iter().map(|b| b.mul(&x)));
        ModuleRep::new_unchecked(self.ctx.a.clone(), total, action)
    }

    /// Inverse of [`to_ungraded`] given the degree of the first block and the block sizes.
    pub fn from_ungraded_graded(ctx: Arc<DualNumbers<F>>, m: &ModuleRep<F>, lo: i64, dims: &[usize]) -> Result<Self> {
        if m.algebra().as_ref() != ctx.a.as_ref() {
            return Err(Error::AlgebraMismatch);
        }
        if dims.iter().sum::<usize>() != m.dim() {
            return Err(Error::Grading("block sizes do not add up to the module dimension".into()));
        }
        let n = ctx.r.dim();
        let mut off = vec![0];
        for d in dims {
            off.push(off.last().unwrap() + d);
        }
        let block = |mat: &Matrix<F>, r: usize, c: usize| mat.block(off[r], off[r + 1], off[c], off[c + 1]);
        let x = m.act(&ctx.x);
        let k = dims.len();
        for rb in 0..k {
            for cb in 0..k {
                for j in 0..n {
                    if rb != cb && !block(m.action(j), rb, cb).is_zero() {
                        return Err(Error::Grading(format!("R does not preserve the degree {} block", lo + cb as i64)));
                    }
                }
                if rb != cb + 1 && !block(&x, rb, cb).is_zero() {
                    return Err(Error::Grading(format!("x does not raise degree {} by one", lo + cb as i64)));
                }
            }
        }
        let items = (0..k)
            .map(|b| ModuleRep::new_unchecked(ctx.r.clone(), dims[b], (0..n).map(|j| block(m.action(j), b, b)).collect()))
            .collect();
        let diffs = (0..k.saturating_sub(1)).map(|b| block(&x, b + 1, b)).collect();
        Ok(Self { ctx, lo, items, diffs })
    }

    /// `M[d]^i = M^{i+d}`.
    pub fn shift(&self, d: i64) -> Self {
        Self { ctx: self.ctx.clone(), lo: self.lo - d, items: self.items.clone(), diffs: self.diffs.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let (a, b) = (self.trimmed(), other.trimmed());
        if a.items.is_empty() {
            return b;
        }
        if b.items.is_empty() {
            return a;
        }
        let lo = a.lo.min(b.lo);
        let hi = a.hi().max(b.hi());
        let items = (lo..=hi).map(|i| a.item(i).direct_sum(&b.item(i))).collect();
        let diffs = (lo..hi).map(|i| a.diff(i).direct_sum(&b.diff(i))).collect();
        Self { ctx: self.ctx.clone(), lo, items, diffs }
    }

    /// Whether the complex is exact in every degree.
    pub fn is_exact(&self) -> bool {
        self.homology_dims().iter().all(|&(_, h)| h == 0)
    }

    /// `(degree, dim H^i)` over the window.
    pub fn homology_dims(&self) -> Vec<(i64, usize)> {
        self.degrees()
            .map(|i| {
                let ker = self.dim_at(i) - self.diff(i).rank();
                (i, ker - self.diff(i - 1).rank())
            })
            .collect()
    }
}

/// `N` in degrees `-1` and `0` with the identity between them.
pub fn bar_module<F: Field>(ctx: &Arc<DualNumbers<F>>, n: &ModuleRep<F>) -> ComplexOfModules<F> {
    if n.dim() == 0 {
        return ComplexOfModules::zero(ctx.clone());
    }
    let id = Matrix::identity(n.field(), n.dim());
    ComplexOfModules::new_unchecked(ctx.clone(), -1, vec![n.clone(), n.clone()], vec![id])
}

/// A degree-0 map of graded modules, blockwise over the union of both windows.
#[derive(Clone, Debug)]
pub struct ChainMap<F: Field> {
    pub src: ComplexOfModules<F>,
    pub dst: ComplexOfModules<F>,
    pub lo: i64,
    /// `blocks[i - lo] : src^i -> dst^i`.
    pub blocks: Vec<Matrix<F>>,
}

fn union_window<F: Field>(a: &ComplexOfModules<F>, b: &ComplexOfModules<F>) -> (i64, i64) {
    match (a.items.is_empty(), b.items.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        _ => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

impl<F: Field> ChainMap<F> {
    pub fn from_fn(
        src: &ComplexOfModules<F>,
        dst: &ComplexOfModules<F>,
        mut block: impl FnMut(i64) -> Matrix<F>,
    ) -> Self {
        let (lo, hi) = union_window(src, dst);
        let blocks = (lo..=hi).map(&mut block).collect();
        Self { src: src.clone(), dst: dst.clone(), lo, blocks }
    }

    pub fn zero(src: &ComplexOfModules<F>, dst: &ComplexOfModules<F>) -> Self {
        Self::from_fn(src, dst, |i| Matrix::zeros(src.field(), dst.dim_at(i), src.dim_at(i)))
    }

    pub fn identity(c: &ComplexOfModules<F>) -> Self {
        Self::from_fn(c, c, |i| Matrix::identity(c.field(), c.dim_at(i)))
    }

    pub fn block(&self, i: i64) -> Matrix<F> {
        let hi = self.lo + self.blocks.len() as i64 - 1;
        if i < self.lo || i > hi {
            Matrix::zeros(self.src.field(), self.dst.dim_at(i), self.src.dim_at(i))
        } else {
            self.blocks[(i - self.lo) as usize].clone()
        }
    }

    /// `self o first`.
    pub fn compose(&self, first: &Self) -> Self {
        Self::from_fn(&first.src, &self.dst, |i| self.block(i).mul(&first.block(i)))
    }

    pub fn is_chain_map(&self) -> bool {
        let (lo, hi) = union_window(&self.src, &self.dst);
        (lo..=hi).all(|i| {
            let b = self.block(i);
            b.rows() == self.dst.dim_at(i)
                && b.cols() == self.src.dim_at(i)
                && ModuleHom::new(self.src.item(i), self.dst.item(i), b.clone()).is_ok()
                && self.dst.diff(i).mul(&b) == self.block(i + 1).mul(&self.src.diff(i))
        })
    }

    /// All block entries in degree order, for rank computations.
    pub fn flatten(&self) -> Vector<F> {
        self.blocks.iter().flat_map(|b| b.entries().iter().cloned()).collect()
    }

    pub fn is_injective(&self) -> bool {
        self.src.degrees().all(|i| self.block(i).rank() == self.src.dim_at(i))
    }

    pub fn is_surjective(&self) -> bool {
        self.dst.degrees().all(|i| self.block(i).rank() == self.dst.dim_at(i))
    }

    pub fn is_iso(&self) -> bool {
        self.is_injective() && self.is_surjective()
    }

    /// Degreewise kernel with its inclusion.
    pub fn kernel(&self) -> (ComplexOfModules<F>, ChainMap<F>) {
        let src = &self.src;
        if src.items.is_empty() {
            let z = ComplexOfModules::zero(src.ctx.clone());
            return (z.clone(), ChainMap::zero(&z, src));
        }
        let subs: Vec<(ModuleRep<F>, Matrix<F>)> = src
            .degrees()
            .map(|i| src.item(i).submodule(&self.block(i).kernel_basis()).expect("kernel is a submodule"))
            .collect();
        let diffs = (0..subs.len().saturating_sub(1))
            .map(|k| {
                let i = src.lo + k as i64;
                let li = subs[k + 1].1.left_inverse().unwrap_or_else(|| Matrix::zeros(src.field(), 0, src.dim_at(i + 1)));
                li.mul(&src.diff(i)).mul(&subs[k].1)
            })
            .collect();
        let k = ComplexOfModules::new_unchecked(src.ctx.clone(), src.lo, subs.iter().map(|s| s.0.clone()).collect(), diffs);
        let incl = ChainMap::from_fn(&k, src, |i| {
            if i < src.lo || i > src.hi() {
                Matrix::zeros(src.field(), src.dim_at(i), 0)
            } else {
                subs[(i - src.lo) as usize].1.clone()
            }
        });
        (k, incl)
    }

    /// Degreewise cokernel with its projection.
    pub fn cokernel(&self) -> (ComplexOfModules<F>, ChainMap<F>) {
        let dst = &self.dst;
        if dst.items.is_empty() {
            let z = ComplexOfModules::zero(dst.ctx.clone());
            return (z.clone(), ChainMap::zero(dst, &z));
        }
        let quots: Vec<(ModuleRep<F>, Matrix<F>)> = dst.degrees().map(|i| dst.item(i).quotient(&self.block(i))).collect();
        let lifts: Vec<Matrix<F>> = quots.iter().map(|(_, p)| right_inverse(p)).collect();
        let diffs = (0..quots.len().saturating_sub(1))
            .map(|k| {
                let i = dst.lo + k as i64;
                quots[k + 1].1.mul(&dst.diff(i)).mul(&lifts[k])
            })
            .collect();
        let q = ComplexOfModules::new_unchecked(dst.ctx.clone(), dst.lo, quots.iter().map(|s| s.0.clone()).collect(), diffs);
        let proj = ChainMap::from_fn(dst, &q, |i| {
            if i < dst.lo || i > dst.hi() {
                Matrix::zeros(dst.field(), 0, dst.dim_at(i))
            } else {
                quots[(i - dst.lo) as usize].1.clone()
            }
        });
        (q, proj)
    }

    /// Block-diagonal matrix between the ungraded modules.
    pub fn to_ungraded(&self) -> Matrix<F> {
        let f = self.src.field();
        let mut out = Matrix::zeros(f, self.dst.total_dim(), self.src.total_dim());
        let (so, dof) = (self.src.offsets(), self.dst.offsets());
        for i in self.src.degrees() {
            if i < self.dst.lo || i > self.dst.hi() {
                continue;
            }
            let b = self.block(i);
            let (r0, c0) = (dof[(i - self.dst.lo) as usize], so[(i - self.src.lo) as usize]);
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    out.set(r0 + r, c0 + c, b.get(r, c).clone());
                }
            }
        }
        out
    }
}

fn right_inverse<F: Field>(m: &Matrix<F>) -> Matrix<F> {
    if m.rows() == 0 {
        return Matrix::zeros(m.field(), m.cols(), 0);
    }
    m.transpose().left_inverse().expect("surjective map").transpose()
}

/// Basis of `Hom_Gr(C, D)`: chain maps of degree 0.
pub fn hom_gr<F: Field>(c: &ComplexOfModules<F>, d: &ComplexOfModules<F>) -> Result<Vec<ChainMap<F>>> {
    let f = c.field();
    let degs: Vec<i64> = c.degrees().filter(|&i| c.dim_at(i) > 0 && d.dim_at(i) > 0).collect();
    let spaces: Vec<_> = degs.iter().map(|&i| hom_space(&c.item(i), &d.item(i))).collect::<Result<_>>()?;
    let offsets: Vec<usize> = spaces.iter().scan(0, |acc, s| {
        let o = *acc;
        *acc += s.dim();
        Some(o)
    }).collect();
    let width: usize = spaces.iter().map(|s| s.dim()).sum();
    if width == 0 {
        return Ok(Vec::new());
    }
    let at = |i: i64| degs.iter().position(|&j| j == i);
    // d^i f^i - f^{i+1} c^i = 0 for every i
    let mut rows = RowSpace::new(f, width);
    let (lo, hi) = union_window(c, d);
    for i in (lo - 1)..=hi {
        let (r, cc) = (d.dim_at(i + 1), c.dim_at(i));
        if r == 0 || cc == 0 {
            continue;
        }
        let mut cols: Vec<Vector<F>> = vec![vec![f.zero(); r * cc]; width];
        if let Some(p) = at(i) {
            for (k, h) in spaces[p].basis.iter().enumerate() {
                cols[offsets[p] + k] = d.diff(i).mul(h).entries().to_vec();
            }
        }
        if let Some(p) = at(i + 1) {
            for (k, h) in spaces[p].basis.iter().enumerate() {
                let v = h.mul(&c.diff(i)).neg();
                let col = &mut cols[offsets[p] + k];
                for (x, y) in col.iter_mut().zip(v.entries()) {
                    *x = f.add(x, y);
                }
            }
        }
        let sys = Matrix::from_cols(f, r * cc, &cols);
        for row in sys.row_vectors() {
            rows.insert(row);
        }
    }
    let ker = rows.kernel_basis();
    Ok((0..ker.cols())
        .map(|k| {
            let u = ker.col(k);
            ChainMap::from_fn(c, d, |i| match at(i) {
                Some(p) => spaces[p].combine(&u[offsets[p]..offsets[p] + spaces[p].dim()]),
                None => Matrix::zeros(f, d.dim_at(i), c.dim_at(i)),
            })
        })
        .collect())
}

/// A graded isomorphism `C -> D`, if the bounded search finds one.
pub fn graded_iso<F: Field>(c: &ComplexOfModules<F>, d: &ComplexOfModules<F>, seed: u64) -> Option<ChainMap<F>> {
    let (c, d) = (c.trimmed(), d.trimmed());
    if c.items.is_empty() && d.items.is_empty() {
        return Some(ChainMap::zero(&c, &d));
    }
    if c.lo != d.lo || c.items.len() != d.items.len() || c.degrees().any(|i| c.dim_at(i) != d.dim_at(i)) {
        return None;
    }
    let basis = hom_gr(&c, &d).ok()?;
    let mats: Vec<_> = basis.iter().map(ChainMap::to_ungraded).collect();
    let m = search_invertible(c.field(), &mats, seed)?;
    let coeffs = {
        let stacked = Matrix::from_cols(c.field(), m.entries().len(), &mats.iter().map(|x| x.entries().to_vec()).collect::<Vec<_>>());
        stacked.solve(m.entries()).ok()??.particular
    };
    let f = c.field();
    Some(ChainMap::from_fn(&c, &d, |i| {
        let mut acc = Matrix::zeros(f, d.dim_at(i), c.dim_at(i));
        for (cf, b) in coeffs.iter().zip(&basis) {
            acc = acc.add(&b.block(i).scale(cf));
        }
        acc
    }))
}

/// `C ≅ D[s]` for some shift `s`; returns `s`.
pub fn iso_up_to_shift<F: Field>(c: &ComplexOfModules<F>, d: &ComplexOfModules<F>, seed: u64) -> Option<i64> {
    let (c, d) = (c.trimmed(), d.trimmed());
    if c.items.is_empty() || d.items.is_empty() {
        return (c.items.is_empty() && d.items.is_empty()).then_some(0);
    }
    let s = d.lo - c.lo;
    graded_iso(&c, &d.shift(s), seed).map(|_| s)
}

/// The family `{P^i}` with `P ≅ (+)_i bar(P^i)[-i]`, and the isomorphism from that sum.
#[derive(Clone, Debug)]
pub struct GradedProjectiveDecomposition<F: Field> {
    pub family: Vec<(i64, ModuleRep<F>)>,
    pub iso: ChainMap<F>,
}

#[derive(Clone, Debug)]
pub struct GradedProjectiveReport<F: Field> {
    pub decomposition: Option<GradedProjectiveDecomposition<F>>,
    pub ungraded_projective: bool,
}

/// Splits an exact complex of projectives as `(+)_i bar(B^i)[-i]` with `B^i = im d^{i-1}`.
pub fn decompose_graded_projective<F: Field>(p: &ComplexOfModules<F>) -> GradedProjectiveReport<F> {
    let ungraded_projective = is_projective(&p.to_ungraded());
    GradedProjectiveReport { decomposition: split_contractible(p), ungraded_projective }
}

fn split_contractible<F: Field>(p: &ComplexOfModules<F>) -> Option<GradedProjectiveDecomposition<F>> {
    let p = p.trimmed();
    let ctx = p.ctx.clone();
    if p.items.is_empty() {
        return Some(GradedProjectiveDecomposition { family: Vec::new(), iso: ChainMap::zero(&p, &p) });
    }
    if !p.is_exact() {
        return None;
    }
    let f = p.field();
    // B^i = image of d^{i-1} inside P^i, for i in lo+1 ..= hi
    let mut images: Vec<(i64, ModuleRep<F>, Matrix<F>)> = Vec::new();
    for i in (p.lo + 1)..=p.hi() {
        let d = p.diff(i - 1);
        let (b, incl) = p.item(i).submodule(&d.column_space()).expect("image");
        if !is_projective(&b) {
            return None;
        }
        images.push((i, b, incl));
    }
    // sections s^i : B^{i+1} -> P^i of d^i
    let mut sections = Vec::new();
    for (i, b, incl) in &images {
        let src = p.item(i - 1);
        let onto = incl.left_inverse().expect("inclusion").mul(&p.diff(i - 1));
        let s = find_section(&ModuleHom::new_unchecked(src, b.clone(), onto)).ok()??;
        sections.push(s);
    }
    let family: Vec<(i64, ModuleRep<F>)> = images.iter().map(|(i, b, _)| (*i, b.clone())).collect();
    let sum = family
        .iter()
        .fold(ComplexOfModules::zero(ctx.clone()), |acc, (i, b)| acc.direct_sum(&bar_module(&ctx, b).shift(-*i)));
    // at degree j the sum has B^j (from bar(B^j)[-j]) then B^{j+1} (from bar(B^{j+1})[-(j+1)]),
    // in the order the family lists them
    let iso = ChainMap::from_fn(&sum, &p, |j| {
        let mut parts: Vec<Matrix<F>> = Vec::new();
        for (k, (i, _, incl)) in images.iter().enumerate() {
            if *i == j {
                parts.push(incl.clone());
            } else if *i == j + 1 {
                parts.push(sections[k].clone());
            }
        }
        parts
            .into_iter()
            .reduce(|a, b| a.hstack(&b))
            .unwrap_or_else(|| Matrix::zeros(f, p.dim_at(j), 0))
    });
    if !iso.is_chain_map() || !iso.is_iso() {
        return None;
    }
    Some(GradedProjectiveDecomposition { family, iso })
}
