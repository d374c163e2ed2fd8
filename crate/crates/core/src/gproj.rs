//! Projective covers, minimal resolutions, Ext, and a bounded Gorenstein
//! projectivity test that emits checkable certificates.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::decompose::{principal_module, radical_submodule, simple_modules};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{Matrix, RowSpace};
use crate::module::{are_isomorphic, biduality, hom_dual, hom_dual_over, hom_space, ModuleHom, ModuleRep};

/// A minimal projective cover `P -> M`.
#[derive(Clone, Debug)]
pub struct Cover<F: Field> {
    pub module: ModuleRep<F>,
    pub epi: ModuleHom<F>,
    /// Principal indecomposable class of each summand of `P`, in order.
    pub classes: Vec<usize>,
}

pub fn projective_cover<F: Field>(m: &ModuleRep<F>) -> Cover<F> {
    cover_modulo(m, &radical_submodule(m))
}

/// A projective `P -> M` whose image together with the submodule spanned by `start` is `M`;
/// minimal when `start` contains `JM`.
pub(crate) fn cover_modulo<F: Field>(m: &ModuleRep<F>, start: &Matrix<F>) -> Cover<F> {
    let alg = m.algebra();
    let f = m.field();
    let d = m.dim();
    let st = alg.structure();
    let mut w = RowSpace::spanned_by(f, d, start.col_vectors());
    let mut parts = Vec::new();
    let mut classes = Vec::new();
    let mut cols = Vec::new();
    for (c, &rep) in st.class_reps.iter().enumerate() {
        if w.rank() == d {
            break;
        }
        let e = &st.idempotents[rep];
        let ea = m.act(e);
        let mut pim: Option<(ModuleRep<F>, Matrix<F>)> = None;
        for j in 0..d {
            let v = ea.col(j);
            if w.contains(&v) {
                continue;
            }
            let (p, incl) = pim.get_or_insert_with(|| principal_module(alg, e)).clone();
            for k in 0..p.dim() {
                let image = m.act(&incl.col(k)).mul_vec(&v);
                w.insert(image.clone());
                cols.push(image);
            }
            parts.push(p);
            classes.push(c);
        }
    }
    assert_eq!(w.rank(), d, "cover construction must exhaust the module");
    let module = ModuleRep::direct_sum_all(alg, &parts);
    let epi = ModuleHom::new_unchecked(module.clone(), m.clone(), Matrix::from_cols(f, d, &cols));
    Cover { module, epi, classes }
}

pub fn is_projective<F: Field>(m: &ModuleRep<F>) -> bool {
    projective_cover(m).module.dim() == m.dim()
}

/// `Omega M` with its inclusion into the cover of `M`.
pub fn syzygy_step<F: Field>(m: &ModuleRep<F>) -> (ModuleRep<F>, Matrix<F>, Cover<F>) {
    let cover = projective_cover(m);
    let (k, incl) = cover.epi.kernel();
    (k, incl, cover)
}

pub fn syzygy<F: Field>(m: &ModuleRep<F>, k: usize) -> ModuleRep<F> {
    (0..k).fold(m.clone(), |acc, _| syzygy_step(&acc).0)
}

/// Minimal projective resolution `... -> P_1 -> P_0 -> M`.
#[derive(Clone, Debug)]
pub struct Resolution<F: Field> {
    /// `P_0 .. P_{len-1}`.
    pub covers: Vec<ModuleRep<F>>,
    /// `P_i -> Omega^i M`.
    pub epis: Vec<Matrix<F>>,
    /// `Omega^{i+1} M -> P_i`.
    pub incls: Vec<Matrix<F>>,
    /// `Omega^0 M = M, .., Omega^len M`.
    pub syzygies: Vec<ModuleRep<F>>,
}

impl<F: Field> Resolution<F> {
    pub fn len(&self) -> usize {
        self.covers.len()
    }
    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }
    /// `P_i -> P_{i-1}` for `i >= 1`.
    pub fn differential(&self, i: usize) -> Matrix<F> {
        self.incls[i - 1].mul(&self.epis[i])
    }
}

pub fn resolve<F: Field>(m: &ModuleRep<F>, len: usize) -> Resolution<F> {
    let mut res = Resolution { covers: Vec::new(), epis: Vec::new(), incls: Vec::new(), syzygies: vec![m.clone()] };
    for _ in 0..len {
        let cur = res.syzygies.last().expect("nonempty").clone();
        let (k, incl, cover) = syzygy_step(&cur);
        res.covers.push(cover.module);
        res.epis.push(cover.epi.mat);
        res.incls.push(incl);
        res.syzygies.push(k);
    }
    res
}

/// `Ext^i(M, N)` with cocycle representatives `Omega^i M -> N` spanning a complement
/// of the maps that extend to `P_{i-1}`.
#[derive(Clone, Debug)]
pub struct ExtGroup<F: Field> {
    pub degree: usize,
    pub dim: usize,
    pub representatives: Vec<Matrix<F>>,
}

pub fn ext_from_resolution<F: Field>(res: &Resolution<F>, n: &ModuleRep<F>, i: usize) -> Result<ExtGroup<F>> {
    if i > res.len() {
        return Err(Error::Precondition(format!("resolution too short for degree {i}")));
    }
    let hs = hom_space(&res.syzygies[i], n)?;
    if i == 0 {
        return Ok(ExtGroup { degree: 0, dim: hs.dim(), representatives: hs.basis });
    }
    let f = n.field();
    let mut span = RowSpace::new(f, hs.dim());
    if hs.dim() > 0 {
        for g in hom_space(&res.covers[i - 1], n)?.basis {
            span.insert(hs.coordinates(&g.mul(&res.incls[i - 1])).expect("restriction is a homomorphism"));
        }
    }
    let mut representatives = Vec::new();
    for (k, b) in hs.basis.iter().enumerate() {
        if span.insert(crate::linalg::unit_vector(f, hs.dim(), k)) {
            representatives.push(b.clone());
        }
    }
    Ok(ExtGroup { degree: i, dim: representatives.len(), representatives })
}

pub fn ext_group<F: Field>(m: &ModuleRep<F>, n: &ModuleRep<F>, i: usize) -> Result<ExtGroup<F>> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    ext_from_resolution(&resolve(m, i), n, i)
}

/// `Ext^1(S, A) = 0` for every simple `S`.
pub fn is_self_injective<F: Field>(alg: &Arc<Algebra<F>>) -> bool {
    let reg = ModuleRep::regular(alg.clone());
    simple_modules(alg).iter().all(|s| ext_group(s, &reg, 1).map(|e| e.dim == 0).unwrap_or(false))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    GP,
    NotGP,
    Undetermined,
}

impl Verdict {
    pub fn is_determined(self) -> bool {
        self != Verdict::Undetermined
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::GP => "GP",
            Verdict::NotGP => "NotGP",
            Verdict::Undetermined => "Undetermined",
        })
    }
}

/// `Omega^from ≅ Omega^to` along the minimal resolution.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodicity {
    pub from: usize,
    pub to: usize,
}

impl Periodicity {
    pub fn period(&self) -> usize {
        self.to - self.from
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GpProof {
    Projective,
    SelfInjectiveAmbient,
    PeriodicTotallyReflexive { left: Periodicity, dual: Periodicity },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Dual,
    Reflexivity,
}

/// A necessary condition for total reflexivity that fails. For `Reflexivity`,
/// `degree` is 0 and `dimension` is the rank of the evaluation map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpWitness {
    pub side: Side,
    pub degree: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GpCertificate {
    pub verdict: Verdict,
    pub bound: usize,
    pub proof: Option<GpProof>,
    pub witness: Option<GpWitness>,
}

#[derive(Clone, Copy, Debug)]
pub struct GpOptions {
    pub bound: usize,
    pub self_injective_shortcut: bool,
    pub seed: u64,
}

impl Default for GpOptions {
    fn default() -> Self {
        Self { bound: 12, self_injective_shortcut: true, seed: 0 }
    }
}

impl GpOptions {
    pub fn with_bound(bound: usize) -> Self {
        Self { bound, ..Self::default() }
    }
}

fn find_period<F: Field>(syz: &[ModuleRep<F>], seed: u64) -> Option<Periodicity> {
    for to in 1..syz.len() {
        for from in 0..to {
            if syz[from].dim() == syz[to].dim() && are_isomorphic(&syz[from], &syz[to], seed).is_some() {
                return Some(Periodicity { from, to });
            }
        }
    }
    None
}

fn first_nonzero_ext<F: Field>(res: &Resolution<F>, target: &ModuleRep<F>) -> Result<Option<(usize, usize)>> {
    for i in 1..=res.len() {
        let e = ext_from_resolution(res, target, i)?;
        if e.dim > 0 {
            return Ok(Some((i, e.dim)));
        }
    }
    Ok(None)
}

pub fn gp_test<F: Field>(m: &ModuleRep<F>, opts: GpOptions) -> Result<GpCertificate> {
    let bound = opts.bound;
    if bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let cert = |verdict, proof, witness| GpCertificate { verdict, bound, proof, witness };
    if is_projective(m) {
        return Ok(cert(Verdict::GP, Some(GpProof::Projective), None));
    }
    let alg = m.algebra();
    if opts.self_injective_shortcut && is_self_injective(alg) {
        return Ok(cert(Verdict::GP, Some(GpProof::SelfInjectiveAmbient), None));
    }
    let res = resolve(m, bound);
    if let Some((degree, dimension)) = first_nonzero_ext(&res, &ModuleRep::regular(alg.clone()))? {
        return Ok(cert(Verdict::NotGP, None, Some(GpWitness { side: Side::Left, degree, dimension })));
    }
    let dual = hom_dual(m);
    let res_dual = resolve(&dual.module, bound);
    if let Some((degree, dimension)) = first_nonzero_ext(&res_dual, &ModuleRep::regular(alg.opposite_arc()))? {
        return Ok(cert(Verdict::NotGP, None, Some(GpWitness { side: Side::Dual, degree, dimension })));
    }
    let bid = biduality(m);
    if !bid.is_iso() {
        let w = GpWitness { side: Side::Reflexivity, degree: 0, dimension: bid.map.mat.rank() };
        return Ok(cert(Verdict::NotGP, None, Some(w)));
    }
    match (find_period(&res.syzygies, opts.seed), find_period(&res_dual.syzygies, opts.seed)) {
        (Some(left), Some(dual)) => {
            Ok(cert(Verdict::GP, Some(GpProof::PeriodicTotallyReflexive { left, dual }), None))
        }
        _ => Ok(cert(Verdict::Undetermined, None, None)),
    }
}

/// A window `P_hi -> ... -> P_1 -> P_0 -> ... -> P_lo` of a totally acyclic
/// complex with `M = ker(P_0 -> P_-1) = im(P_1 -> P_0)`.
#[derive(Clone, Debug)]
pub struct CompleteResolution<F: Field> {
    pub lo: i64,
    pub hi: i64,
    /// `modules[k - lo]` is `P_k`.
    pub modules: Vec<ModuleRep<F>>,
    /// `diffs[k - lo - 1]` is `P_k -> P_{k-1}`.
    pub diffs: Vec<Matrix<F>>,
    /// `M -> P_0`.
    pub embedding: Matrix<F>,
    pub period: Option<usize>,
}

impl<F: Field> CompleteResolution<F> {
    pub fn module(&self, k: i64) -> &ModuleRep<F> {
        &self.modules[(k - self.lo) as usize]
    }
    pub fn diff(&self, k: i64) -> &Matrix<F> {
        &self.diffs[(k - self.lo - 1) as usize]
    }
}

/// `g* : Y* -> X*` for `g : X -> Y`, duals taken over `target`'s opposite side.
fn dual_map<F: Field>(
    g: &Matrix<F>,
    x_dual: &crate::module::DualModule<F>,
    y_dual: &crate::module::DualModule<F>,
) -> Matrix<F> {
    let f = g.field();
    let cols: Vec<_> = y_dual
        .maps
        .basis
        .iter()
        .map(|h| x_dual.maps.coordinates(&h.mul(g)).expect("precomposition with a homomorphism"))
        .collect();
    Matrix::from_cols(f, x_dual.maps.dim(), &cols)
}

/// Splices the minimal resolution of `M` with the dual of the minimal resolution of `M*`.
/// `depth` positions are built on each side of `P_0`.
pub fn complete_resolution<F: Field>(
    m: &ModuleRep<F>,
    cert: &GpCertificate,
    depth: usize,
) -> Option<CompleteResolution<F>> {
    if cert.verdict != Verdict::GP {
        return None;
    }
    let depth = depth.max(1);
    let alg = m.algebra();
    let f = m.field().clone();
    let left = resolve(m, depth);
    let dual = hom_dual(m);
    let right = resolve(&dual.module, depth);
    let right_duals: Vec<_> = right.covers.iter().map(|q| hom_dual_over(q, alg)).collect();

    // M -> Q_0*: m -> (r -> eps(r)(m))
    let eps = &right.epis[0];
    let q0 = &right.covers[0];
    let cols: Vec<_> = (0..m.dim())
        .map(|j| {
            let img: Vec<_> = (0..q0.dim())
                .map(|s| {
                    let mut v = vec![f.zero(); alg.dim()];
                    for (t, h) in dual.maps.basis.iter().enumerate() {
                        crate::linalg::axpy(&f, &mut v, eps.get(t, s), &h.col(j));
                    }
                    v
                })
                .collect();
            let psi = Matrix::from_cols(&f, alg.dim(), &img);
            right_duals[0].maps.coordinates(&psi).expect("evaluation map is a homomorphism")
        })
        .collect();
    let embedding = Matrix::from_cols(&f, right_duals[0].module.dim(), &cols);

    // P_{-(depth-1)} .. P_0 come from Q_i*, then P_1 .. P_depth from the covers of M
    let mut modules: Vec<_> = (0..depth).rev().map(|i| right_duals[i].module.clone()).collect();
    let mut diffs: Vec<_> = (0..depth - 1)
        .rev()
        .map(|i| dual_map(&right.differential(i + 1), &right_duals[i + 1], &right_duals[i]))
        .collect();
    for i in 0..depth {
        modules.push(left.covers[i].clone());
    }
    // P_1 -> P_0
    diffs.push(embedding.mul(&left.epis[0]));
    for k in 2..=depth {
        diffs.push(left.differential(k - 1));
    }
    let period = match &cert.proof {
        Some(GpProof::PeriodicTotallyReflexive { left, .. }) => Some(left.period()),
        _ => None,
    };
    Some(CompleteResolution { lo: -(depth as i64) + 1, hi: depth as i64, modules, diffs, embedding, period })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompleteResolutionCheck {
    pub squares_vanish: bool,
    pub exact: bool,
    pub hom_exact: bool,
    pub projective_items: bool,
    pub kernel_is_module: bool,
}

impl CompleteResolutionCheck {
    pub fn all(&self) -> bool {
        self.squares_vanish && self.exact && self.hom_exact && self.projective_items && self.kernel_is_module
    }
}

/// Re-checks a window: `d^2 = 0`, exactness and `Hom(-, A)`-exactness at interior
/// positions, projective items, and `M = ker d_0 = im d_1` through the embedding.
pub fn verify_complete_resolution<F: Field>(m: &ModuleRep<F>, cr: &CompleteResolution<F>) -> Result<CompleteResolutionCheck> {
    let alg = m.algebra();
    let reg = ModuleRep::regular(alg.clone());
    let ks: Vec<i64> = ((cr.lo + 1)..=cr.hi).collect();
    let mut squares_vanish = true;
    for &k in &ks {
        let d = cr.diff(k);
        let ok = ModuleHom::new(cr.module(k).clone(), cr.module(k - 1).clone(), d.clone()).is_ok();
        squares_vanish &= ok;
        if k > cr.lo + 1 {
            squares_vanish &= cr.diff(k - 1).mul(d).is_zero();
        }
    }
    let mut exact = true;
    for k in (cr.lo + 1)..cr.hi {
        // at P_k: ker(P_k -> P_{k-1}) = im(P_{k+1} -> P_k)
        let kernel = cr.module(k).dim() - cr.diff(k).rank();
        exact &= kernel == cr.diff(k + 1).rank();
    }
    // Hom(P_{k-1}, A) -> Hom(P_k, A) as matrices in hom-basis coordinates
    let homs: Vec<_> = cr.modules.iter().map(|p| hom_space(p, &reg)).collect::<Result<_>>()?;
    let pull = |k: i64| -> Matrix<F> {
        let src = &homs[(k - 1 - cr.lo) as usize];
        let dst = &homs[(k - cr.lo) as usize];
        let cols: Vec<_> = src
            .basis
            .iter()
            .map(|h| dst.coordinates(&h.mul(cr.diff(k))).expect("composite homomorphism"))
            .collect();
        Matrix::from_cols(m.field(), dst.dim(), &cols)
    };
    let mut hom_exact = true;
    for k in (cr.lo + 1)..cr.hi {
        // at Hom(P_k, A): ker(d_{k+1}^*) = im(d_k^*)
        let out = pull(k + 1);
        let inn = pull(k);
        let kernel = homs[(k - cr.lo) as usize].dim() - out.rank();
        hom_exact &= kernel == inn.rank();
    }
    let projective_items = cr.modules.iter().all(is_projective);
    let e = &cr.embedding;
    let emb_ok = ModuleHom::new(m.clone(), cr.module(0).clone(), e.clone()).is_ok() && e.rank() == m.dim();
    let span = RowSpace::spanned_by(m.field(), cr.module(0).dim(), e.col_vectors());
    let d0_kills = cr.lo < 0 && cr.diff(0).mul(e).is_zero() && cr.module(0).dim() - cr.diff(0).rank() == m.dim();
    let d1_onto = {
        let d1 = cr.diff(1);
        d1.rank() == m.dim() && d1.col_vectors().iter().all(|c| span.contains(c))
    };
    Ok(CompleteResolutionCheck { squares_vanish, exact, hom_exact, projective_items, kernel_is_module: emb_ok && d0_kills && d1_onto })
}

/// Certificates for `M` over `A`, `Res M` over `R` and `A (x)_R Res M` over `A`,
/// with every determined combination that contradicts the transfer statements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub ambient: GpCertificate,
    pub restricted: GpCertificate,
    pub induced: GpCertificate,
    pub separable: bool,
    pub self_injective_ambient: bool,
    pub violations: Vec<String>,
    /// Number of the three certificates that are undetermined.
    pub undetermined: usize,
}

pub fn transfer_report<F: Field>(
    ext: &crate::algebra::AlgebraExtension<F>,
    m: &ModuleRep<F>,
    opts: GpOptions,
) -> Result<TransferReport> {
    use crate::frobenius::{check_frobenius, find_separability_element};
    use crate::module::{induce, restrict};
    if check_frobenius(ext, opts.seed)?.is_none() {
        return Err(Error::NotFrobenius("no invertible bimodule map at search bound".into()));
    }
    let separable = find_separability_element(ext)?.is_some();
    let self_injective_ambient = is_self_injective(&ext.amb);
    let res = restrict(ext, m);
    let ambient = gp_test(m, opts)?;
    let restricted = gp_test(&res, opts)?;
    let induced = gp_test(&induce(ext, &res), opts)?;
    let mut violations = Vec::new();
    if ambient.verdict == Verdict::GP && restricted.verdict == Verdict::NotGP {
        violations.push("GP over A but restriction is not GP over R".to_string());
    }
    if restricted.verdict == Verdict::GP && induced.verdict == Verdict::NotGP {
        violations.push("restriction GP over R but induced module is not GP over A".to_string());
    }
    if (separable || self_injective_ambient)
        && ambient.verdict.is_determined()
        && restricted.verdict.is_determined()
        && ambient.verdict != restricted.verdict
    {
        violations.push(format!("A-side {} disagrees with R-side {}", ambient.verdict, restricted.verdict));
    }
    let undetermined = [&ambient, &restricted, &induced].iter().filter(|c| !c.verdict.is_determined()).count();
    Ok(TransferReport { ambient, restricted, induced, separable, self_injective_ambient, violations, undetermined })
}
