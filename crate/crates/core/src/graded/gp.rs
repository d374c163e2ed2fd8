//! Graded covers and embeddings, graded totally acyclic windows, and the
//! three-way comparison of Gorenstein projectivity for complexes.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bar_module, decompose_graded_projective, hom_gr, iso_up_to_shift, ChainMap, ComplexOfModules, DualNumbers};
use crate::decompose::{pims, radical_submodule};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::gproj::{
    complete_resolution, cover_modulo, gp_test, is_self_injective, verify_complete_resolution, CompleteResolution,
    GpCertificate, GpOptions, Verdict,
};
use crate::linalg::{Matrix, RowSpace};
use crate::module::{are_isomorphic, ModuleRep};

/// `0 -> left -> middle -> right -> 0` with degree-0 maps.
#[derive(Clone, Debug)]
pub struct GradedShortExactSequence<F: Field> {
    pub left: ComplexOfModules<F>,
    pub middle: ComplexOfModules<F>,
    pub right: ComplexOfModules<F>,
    pub inj: ChainMap<F>,
    pub proj: ChainMap<F>,
}

impl<F: Field> GradedShortExactSequence<F> {
    /// Injective, surjective, and image = kernel in every degree.
    pub fn is_exact(&self) -> bool {
        let (lo, hi) = (
            self.middle.lo().min(self.left.lo()).min(self.right.lo()),
            self.middle.hi().max(self.left.hi()).max(self.right.hi()),
        );
        self.inj.is_chain_map()
            && self.proj.is_chain_map()
            && self.inj.is_injective()
            && self.proj.is_surjective()
            && (lo..=hi).all(|i| {
                self.proj.block(i).mul(&self.inj.block(i)).is_zero()
                    && self.middle.dim_at(i) == self.left.dim_at(i) + self.right.dim_at(i)
            })
    }

    /// `0 -> Hom(right, P) -> Hom(middle, P) -> Hom(left, P) -> 0` is exact for every `P`.
    pub fn is_hom_exact(&self, battery: &[ComplexOfModules<F>]) -> Result<bool> {
        for p in battery {
            let m = hom_gr(&self.middle, p)?.len();
            let l = hom_gr(&self.left, p)?.len();
            let r = hom_gr(&self.right, p)?.len();
            if m != l + r {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `bar(R)[-i]` for every `i` with a degree in `[lo, hi]`, plus one seeded sum of two
/// shifted bar modules of indecomposable projectives.
pub fn graded_battery<F: Field>(ctx: &Arc<DualNumbers<F>>, lo: i64, hi: i64, seed: u64) -> Vec<ComplexOfModules<F>> {
    let r = ModuleRep::regular(ctx.r.clone());
    let reg = bar_module(ctx, &r);
    let mut out: Vec<_> = (lo..=hi + 1).map(|i| reg.shift(-i)).collect();
    let ps = pims(&ctx.r);
    if hi >= lo && !ps.is_empty() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (i, j) = (rng.gen_range(lo..=hi + 1), rng.gen_range(lo..=hi + 1));
        let c = rng.gen_range(0..ps.len());
        out.push(reg.shift(-i).direct_sum(&bar_module(ctx, &ps[c]).shift(-j)));
    }
    out
}

fn window_of<F: Field>(cs: &[&ComplexOfModules<F>]) -> (i64, i64) {
    let nz: Vec<_> = cs.iter().map(|c| c.trimmed()).filter(|c| !c.is_zero()).collect();
    if nz.is_empty() {
        return (0, 0);
    }
    (nz.iter().map(|c| c.lo()).min().unwrap(), nz.iter().map(|c| c.hi()).max().unwrap())
}

/// A graded projective `N = (+)_j bar(P^j)[-(j+1)] -> C` where `P^j` covers the graded top
/// `C^j / (J C^j + d C^{j-1})`, with its kernel.
pub fn graded_cover<F: Field>(c: &ComplexOfModules<F>) -> GradedShortExactSequence<F> {
    let ctx = c.ctx().clone();
    let c = c.trimmed();
    let f = c.field().clone();
    if c.is_zero() {
        let z = ComplexOfModules::zero(ctx);
        return GradedShortExactSequence {
            left: z.clone(),
            middle: z.clone(),
            right: z.clone(),
            inj: ChainMap::zero(&z, &z),
            proj: ChainMap::zero(&z, &z),
        };
    }
    let tops: Vec<(ModuleRep<F>, Matrix<F>)> = c
        .degrees()
        .map(|j| {
            let m = c.item(j);
            let start = radical_submodule(&m).hstack(&c.diff(j - 1));
            let cover = cover_modulo(&m, &start);
            (cover.module, cover.epi.mat)
        })
        .collect();
    let psi = |j: i64| -> (usize, Matrix<F>) {
        if j < c.lo() || j > c.hi() {
            (0, Matrix::zeros(&f, c.dim_at(j), 0))
        } else {
            let (p, m) = &tops[(j - c.lo()) as usize];
            (p.dim(), m.clone())
        }
    };
    let n = tops
        .iter()
        .enumerate()
        .fold(ComplexOfModules::zero(ctx.clone()), |acc, (k, (p, _))| {
            acc.direct_sum(&bar_module(&ctx, p).shift(-(c.lo() + k as i64 + 1)))
        });
    // N^j = P^{j-1} (+) P^j
    let proj = ChainMap::from_fn(&n, &c, |j| {
        let (_, prev) = psi(j - 1);
        let (_, cur) = psi(j);
        c.diff(j - 1).mul(&prev).hstack(&cur)
    });
    let (k, inj) = proj.kernel();
    GradedShortExactSequence { left: k, middle: n, right: c, inj, proj }
}

#[derive(Clone, Debug)]
pub struct GradedCoverReport<F: Field> {
    pub ses: GradedShortExactSequence<F>,
    pub exact: bool,
    pub hom_exact: bool,
    pub middle_projective: bool,
    /// Certificate of the ungraded kernel over `A`, computed when the ungraded `C` is GP.
    pub kernel_certificate: Option<GpCertificate>,
}

pub fn graded_cover_report<F: Field>(c: &ComplexOfModules<F>, opts: GpOptions) -> Result<GradedCoverReport<F>> {
    let ses = graded_cover(c);
    let exact = ses.is_exact();
    let (lo, hi) = window_of(&[&ses.left, &ses.middle, &ses.right]);
    let hom_exact = ses.is_hom_exact(&graded_battery(c.ctx(), lo, hi, opts.seed))?;
    let middle_projective = decompose_graded_projective(&ses.middle).decomposition.is_some();
    let kernel_certificate = if gp_test(&c.to_ungraded(), opts)?.verdict == Verdict::GP {
        Some(gp_test(&ses.left.to_ungraded(), opts)?)
    } else {
        None
    };
    Ok(GradedCoverReport { ses, exact, hom_exact, middle_projective, kernel_certificate })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedEmbeddingChecks {
    pub exact: bool,
    pub hom_exact: bool,
    pub cokernel_items_gp: bool,
    pub schanuel: bool,
}

impl GradedEmbeddingChecks {
    pub fn all(&self) -> bool {
        self.exact && self.hom_exact && self.cokernel_items_gp && self.schanuel
    }
}

#[derive(Clone, Debug)]
pub struct GradedEmbedding<F: Field> {
    pub ses: GradedShortExactSequence<F>,
    /// `(i, G^i)` with `f^i : C^i -> G^i` the first step of a complete resolution.
    pub projectives: Vec<(i64, ModuleRep<F>)>,
    pub checks: GradedEmbeddingChecks,
}

/// `0 -> C -> N -> L -> 0` with `N^i = G^i (+) G^{i+1}` and `C^i -> N^i` given by
/// `(f^i, f^{i+1} d^i)`.
pub fn graded_embedding<F: Field>(c: &ComplexOfModules<F>, opts: GpOptions) -> Result<GradedEmbedding<F>> {
    let ctx = c.ctx().clone();
    let c = c.trimmed();
    let f = c.field().clone();
    let mut gs: Vec<(ModuleRep<F>, Matrix<F>)> = Vec::new();
    for i in c.degrees() {
        let m = c.item(i);
        let cert = gp_test(&m, opts)?;
        let cr = complete_resolution(&m, &cert, 1).ok_or_else(|| {
            Error::Precondition(format!("item in degree {i} is not certified GP ({})", cert.verdict))
        })?;
        gs.push((cr.module(0).clone(), cr.embedding.clone()));
    }
    let g = |i: i64| -> (ModuleRep<F>, Matrix<F>) {
        if i < c.lo() || i > c.hi() {
            (ModuleRep::zero(ctx.r.clone()), Matrix::zeros(&f, 0, c.dim_at(i)))
        } else {
            gs[(i - c.lo()) as usize].clone()
        }
    };
    let (lo, hi) = if c.is_zero() { (0, -1) } else { (c.lo() - 1, c.hi()) };
    let items: Vec<_> = (lo..=hi).map(|i| g(i).0.direct_sum(&g(i + 1).0)).collect();
    let diffs: Vec<_> = (lo..hi)
        .map(|i| {
            let (a, b, e) = (g(i).0.dim(), g(i + 1).0.dim(), g(i + 2).0.dim());
            // (x, y) -> (y, 0)
            Matrix::from_fn(&f, b + e, a + b, |r, col| if r < b && col == a + r { f.one() } else { f.zero() })
        })
        .collect();
    let n = ComplexOfModules::new_unchecked(ctx.clone(), lo, items, diffs);
    let inj = ChainMap::from_fn(&c, &n, |i| {
        let (top, bottom) = (g(i).1, g(i + 1).1.mul(&c.diff(i)));
        if n.dim_at(i) == 0 {
            Matrix::zeros(&f, 0, c.dim_at(i))
        } else {
            top.vstack(&bottom)
        }
    });
    let (l, proj) = inj.cokernel();
    let ses = GradedShortExactSequence { left: c.clone(), middle: n.clone(), right: l.clone(), inj, proj };
    let exact = ses.is_exact();
    let (wlo, whi) = window_of(&[&c, &n, &l]);
    let hom_exact = ses.is_hom_exact(&graded_battery(&ctx, wlo, whi, opts.seed))?;
    let mut cokernel_items_gp = true;
    for i in l.degrees() {
        cokernel_items_gp &= gp_test(&l.item(i), opts)?.verdict == Verdict::GP;
    }
    // L^i (+) G^i ≅ H^i (+) N^i with H^i = coker f^i
    let schanuel = l.degrees().chain(n.degrees()).all(|i| {
        let (gi, fi) = g(i);
        let h = gi.quotient(&fi).0;
        let lhs = l.item(i).direct_sum(&gi);
        let rhs = h.direct_sum(&n.item(i));
        lhs.dim() == rhs.dim() && are_isomorphic(&lhs, &rhs, opts.seed).is_some()
    });
    let projectives = c.degrees().map(|i| (i, g(i).0)).collect();
    Ok(GradedEmbedding { ses, projectives, checks: GradedEmbeddingChecks { exact, hom_exact, cokernel_items_gp, schanuel } })
}

/// A window `P_hi -> ... -> P_1 -> P_0 -> ... -> P_lo` of graded projectives with
/// `C = ker(P_0 -> P_-1) = im(P_1 -> P_0)`.
#[derive(Clone, Debug)]
pub struct GradedCompleteResolution<F: Field> {
    pub lo: i64,
    pub hi: i64,
    /// `modules[k - lo]` is `P_k`.
    pub modules: Vec<ComplexOfModules<F>>,
    /// `diffs[k - lo - 1]` is `P_k -> P_{k-1}`.
    pub diffs: Vec<ChainMap<F>>,
    /// `C -> P_0`.
    pub embedding: ChainMap<F>,
}

impl<F: Field> GradedCompleteResolution<F> {
    pub fn module(&self, k: i64) -> &ComplexOfModules<F> {
        &self.modules[(k - self.lo) as usize]
    }
    pub fn diff(&self, k: i64) -> &ChainMap<F> {
        &self.diffs[(k - self.lo - 1) as usize]
    }

    /// The same window with the grading forgotten.
    pub fn to_ungraded(&self) -> CompleteResolution<F> {
        CompleteResolution {
            lo: self.lo,
            hi: self.hi,
            modules: self.modules.iter().map(ComplexOfModules::to_ungraded).collect(),
            diffs: self.diffs.iter().map(ChainMap::to_ungraded).collect(),
            embedding: self.embedding.to_ungraded(),
            period: None,
        }
    }
}

/// Splices `depth` graded covers on the left with `depth` graded embeddings on the right.
pub fn graded_complete_resolution<F: Field>(
    c: &ComplexOfModules<F>,
    depth: usize,
    opts: GpOptions,
) -> Result<GradedCompleteResolution<F>> {
    let depth = depth.max(1);
    let c = c.trimmed();
    // right half: C -> N_0 -> L_1 -> N_-1 -> ...
    let mut right: Vec<GradedEmbedding<F>> = Vec::new();
    let mut cur = c.clone();
    for step in 0..depth {
        let e = graded_embedding(&cur, opts)?;
        if !e.checks.all() {
            return Err(Error::Precondition(format!("embedding step {step} fails its checks")));
        }
        cur = e.ses.right.clone();
        right.push(e);
    }
    // left half: N_1 -> C, N_2 -> K_1, ...
    let mut left: Vec<GradedShortExactSequence<F>> = Vec::new();
    let mut cur = c.clone();
    for _ in 0..depth {
        let s = graded_cover(&cur);
        cur = s.left.clone();
        left.push(s);
    }
    let mut modules: Vec<_> = right.iter().rev().map(|e| e.ses.middle.clone()).collect();
    let mut diffs = Vec::new();
    for k in (1..depth).rev() {
        // P_{-(k-1)} -> P_{-k} is embed_k o proj_{k-1}
        diffs.push(right[k].ses.inj.compose(&right[k - 1].ses.proj));
    }
    modules.extend(left.iter().map(|s| s.middle.clone()));
    diffs.push(right[0].ses.inj.compose(&left[0].proj));
    for k in 1..depth {
        diffs.push(left[k - 1].inj.compose(&left[k].proj));
    }
    Ok(GradedCompleteResolution {
        lo: -(depth as i64) + 1,
        hi: depth as i64,
        modules,
        diffs,
        embedding: right[0].ses.inj.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedCompleteResolutionCheck {
    pub squares_vanish: bool,
    pub exact: bool,
    pub hom_exact: bool,
    pub projective_items: bool,
    pub kernel_is_module: bool,
}

impl GradedCompleteResolutionCheck {
    pub fn all(&self) -> bool {
        self.squares_vanish && self.exact && self.hom_exact && self.projective_items && self.kernel_is_module
    }
}

fn pullback_rank<F: Field>(basis: &[ChainMap<F>], d: &ChainMap<F>) -> usize {
    let vs: Vec<_> = basis.iter().map(|g| g.compose(d).flatten()).collect();
    let w = vs.first().map_or(0, Vec::len);
    RowSpace::spanned_by(d.src.field(), w, vs).rank()
}

/// Re-checks a graded window: `d^2 = 0`, degreewise exactness and `Hom_Gr(-, P)`-exactness
/// at interior positions over the battery, graded-projective items, and `C = ker d_0 = im d_1`.
pub fn verify_graded_complete_resolution<F: Field>(
    c: &ComplexOfModules<F>,
    w: &GradedCompleteResolution<F>,
    seed: u64,
) -> Result<GradedCompleteResolutionCheck> {
    let ks: Vec<i64> = ((w.lo + 1)..=w.hi).collect();
    let mut squares_vanish = true;
    for &k in &ks {
        let d = w.diff(k);
        squares_vanish &= d.is_chain_map() && d.src == *w.module(k) && d.dst == *w.module(k - 1);
        if k > w.lo + 1 {
            squares_vanish &= w.diff(k - 1).compose(d).flatten().iter().all(|x| c.field().is_zero(x));
        }
    }
    let all: Vec<&ComplexOfModules<F>> = w.modules.iter().chain(std::iter::once(c)).collect();
    let (lo, hi) = window_of(&all);
    let mut exact = true;
    for k in (w.lo + 1)..w.hi {
        for j in lo..=hi {
            let kernel = w.module(k).dim_at(j) - w.diff(k).block(j).rank();
            exact &= kernel == w.diff(k + 1).block(j).rank();
        }
    }
    let mut hom_exact = true;
    for p in graded_battery(c.ctx(), lo, hi, seed) {
        let homs: Vec<Vec<ChainMap<F>>> = w.modules.iter().map(|m| hom_gr(m, &p)).collect::<Result<_>>()?;
        for k in (w.lo + 1)..w.hi {
            let at = |k: i64| &homs[(k - w.lo) as usize];
            let out = pullback_rank(at(k), w.diff(k + 1));
            let inn = pullback_rank(at(k - 1), w.diff(k));
            hom_exact &= at(k).len() - out == inn;
        }
    }
    let projective_items = w.modules.iter().all(|m| decompose_graded_projective(m).decomposition.is_some());
    let e = &w.embedding;
    let p0 = w.module(0);
    let kernel_is_module = e.is_chain_map()
        && e.is_injective()
        && (lo..=hi).all(|j| {
            let ej = e.block(j);
            let span = RowSpace::spanned_by(c.field(), p0.dim_at(j), ej.col_vectors());
            let d1 = w.diff(1).block(j);
            let d0_kills = w.lo < 0
                && w.diff(0).block(j).mul(&ej).is_zero()
                && p0.dim_at(j) - w.diff(0).block(j).rank() == c.dim_at(j);
            d0_kills && d1.rank() == c.dim_at(j) && d1.col_vectors().iter().all(|v| span.contains(v))
        });
    Ok(GradedCompleteResolutionCheck { squares_vanish, exact, hom_exact, projective_items, kernel_is_module })
}

/// `Ext^step_Gr(C, bar(R)[-shift]) != 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradedExtWitness {
    pub step: usize,
    pub shift: i64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum GradedGpProof {
    GradedProjective,
    /// Every graded module is GP since graded projectives and injectives coincide.
    SelfInjectiveBase,
    /// `K_to ≅ K_from[shift]` along the graded cover sequence, and the right half verifies.
    PeriodicUpToShift { from: usize, to: usize, shift: i64 },
}

#[derive(Clone, Debug)]
pub struct GradedGpResult<F: Field> {
    pub verdict: Verdict,
    pub proof: Option<GradedGpProof>,
    pub witness: Option<GradedExtWitness>,
    pub resolution: Option<GradedCompleteResolution<F>>,
}

/// Depth of the witness window attached to graded GP verdicts.
pub const WITNESS_DEPTH: usize = 2;

/// Graded GP test: `Ext_Gr` vanishing against the battery along graded covers, then
/// a proof and a verified graded totally acyclic window.
pub fn graded_gp_test<F: Field>(c: &ComplexOfModules<F>, opts: GpOptions) -> Result<GradedGpResult<F>> {
    if opts.bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let c = c.trimmed();
    let ctx = c.ctx().clone();
    let undetermined = GradedGpResult { verdict: Verdict::Undetermined, proof: None, witness: None, resolution: None };
    let mut proof = None;
    if decompose_graded_projective(&c).decomposition.is_some() {
        proof = Some(GradedGpProof::GradedProjective);
    } else {
        let mut kernels = vec![c.clone()];
        for step in 1..=opts.bound {
            let ses = graded_cover(kernels.last().expect("nonempty"));
            let (lo, hi) = window_of(&[&ses.left, &ses.middle, &ses.right]);
            for shift in lo..=hi + 1 {
                let p = bar_module(&ctx, &ModuleRep::regular(ctx.r.clone())).shift(-shift);
                let (n, m, k) = (hom_gr(&ses.middle, &p)?.len(), hom_gr(&ses.right, &p)?.len(), hom_gr(&ses.left, &p)?.len());
                if n - m != k {
                    let witness = Some(GradedExtWitness { step, shift });
                    return Ok(GradedGpResult { verdict: Verdict::NotGP, witness, ..undetermined });
                }
            }
            kernels.push(ses.left);
            if proof.is_none() {
                for from in 0..step {
                    if let Some(shift) = iso_up_to_shift(&kernels[step], &kernels[from], opts.seed) {
                        proof = Some(GradedGpProof::PeriodicUpToShift { from, to: step, shift });
                        break;
                    }
                }
            }
            if is_self_injective(&ctx.r) {
                proof = Some(GradedGpProof::SelfInjectiveBase);
                break;
            }
            if proof.is_some() {
                break;
            }
        }
    }
    let Some(proof) = proof else {
        return Ok(undetermined);
    };
    let Ok(res) = graded_complete_resolution(&c, WITNESS_DEPTH, opts) else {
        return Ok(undetermined);
    };
    if !verify_graded_complete_resolution(&c, &res, opts.seed)?.all() {
        return Ok(undetermined);
    }
    Ok(GradedGpResult { verdict: Verdict::GP, proof: Some(proof), witness: None, resolution: Some(res) })
}

/// Itemwise certificates combined: `NotGP` dominates, then `Undetermined`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexGpCertificate {
    pub verdict: Verdict,
    pub bound: usize,
    pub items: Vec<(i64, GpCertificate)>,
    pub failing_degree: Option<i64>,
}

pub fn complex_gp_test<F: Field>(c: &ComplexOfModules<F>, opts: GpOptions) -> Result<ComplexGpCertificate> {
    if opts.bound == 0 {
        return Err(Error::Precondition("bound must be at least 1".into()));
    }
    let c = c.trimmed();
    let items: Vec<(i64, GpCertificate)> =
        c.degrees().map(|i| gp_test(&c.item(i), opts).map(|cert| (i, cert))).collect::<Result<_>>()?;
    let failing_degree = items.iter().find(|(_, cert)| cert.verdict == Verdict::NotGP).map(|(i, _)| *i);
    let verdict = if failing_degree.is_some() {
        Verdict::NotGP
    } else if items.iter().any(|(_, cert)| cert.verdict == Verdict::Undetermined) {
        Verdict::Undetermined
    } else {
        Verdict::GP
    };
    Ok(ComplexGpCertificate { verdict, bound: opts.bound, items, failing_degree })
}

/// Verdicts for graded GP over `A`, GP of the ungraded module over `A`, and itemwise GP over `R`.
#[derive(Clone, Debug)]
pub struct ThreeWayReport<F: Field> {
    pub graded: GradedGpResult<F>,
    pub ungraded: GpCertificate,
    /// Whether the graded window with the grading forgotten verifies as an ungraded one.
    pub forgotten_window_verifies: Option<bool>,
    pub itemwise: ComplexGpCertificate,
}

impl<F: Field> ThreeWayReport<F> {
    pub fn verdicts(&self) -> [Verdict; 3] {
        [self.graded.verdict, self.ungraded.verdict, self.itemwise.verdict]
    }

    /// No two determined verdicts disagree.
    pub fn agree(&self) -> bool {
        let det: Vec<_> = self.verdicts().into_iter().filter(|v| v.is_determined()).collect();
        det.windows(2).all(|w| w[0] == w[1])
    }
}

pub fn three_way_gp_check<F: Field>(c: &ComplexOfModules<F>, opts: GpOptions) -> Result<ThreeWayReport<F>> {
    let graded = graded_gp_test(c, opts)?;
    let ungraded_module = c.to_ungraded();
    let ungraded = gp_test(&ungraded_module, opts)?;
    let forgotten_window_verifies = match &graded.resolution {
        Some(r) => Some(verify_complete_resolution(&ungraded_module, &r.to_ungraded())?.all()),
        None => None,
    };
    let itemwise = complex_gp_test(c, opts)?;
    Ok(ThreeWayReport { graded, ungraded, forgotten_window_verifies, itemwise })
}
