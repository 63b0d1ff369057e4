//! The cross-section of twisted conjugation on a Bruhat cell.
//!
//! For an elliptic twisting w of minimal length, the map
//! Ξ(u, z) = u·z·π(u)⁻¹ from U × U^wẇ onto the cell UẇU is inverted
//! constructively: a good element of the class is located through its braid
//! decomposition, the inverse there runs through the tuple-cell transport
//! and the trailing-unipotent normalization, and inverses at the remaining
//! minimal-length elements are obtained by walking the cyclic-shift graph.

use std::sync::Arc;
use std::time::Instant;

use thiserror::Error;

use crate::braid::{braid_move_path, find_good_element, BraidError, BraidMove};
use crate::chevalley::{ChevError, Context, GroupElement, RepKind, SubgroupKind};
use crate::intpoly::MPolyZ;
use crate::matrix::{smith_invariant_factors, IMat, Mat};
use crate::polyfam::{PolyMap, DEFAULT_MONOMIAL_CEILING};
use crate::rings::{MapKind, Ring, RingError, RingMap, Value};
use crate::rootdata::{DatumAutomorphism, Lattice, RootDatum, RootDataError};
use crate::weyl::{
    delta_classes, min_length_set, shift_path, TwistedClass, WeylElement, WeylError, WeylGroup,
};

#[derive(Debug, Error)]
pub enum CrossSecError {
    #[error(transparent)]
    Chev(#[from] ChevError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Weyl(#[from] WeylError),
    #[error(transparent)]
    Braid(#[from] BraidError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("class is not elliptic")]
    NotElliptic,
    #[error("element is not of minimal length in the class")]
    NotMinimal,
    #[error("{0}")]
    Unsupported(String),
    #[error("symbolic result exceeded the monomial ceiling {0}")]
    MonomialCeiling(usize),
}

/// A fixed instance of the cross-section problem: group context, twisting
/// automorphisms π = δ∘χ, an elliptic class, and a minimal-length element.
pub struct Problem {
    pub ctx: Arc<Context>,
    pub delta: DatumAutomorphism,
    pub chi: RingMap,
    pub class: TwistedClass,
    pub w: WeylElement,
    delta_inv: DatumAutomorphism,
    chi_inv: RingMap,
}

impl Problem {
    pub fn new(
        ctx: Arc<Context>,
        delta: DatumAutomorphism,
        chi: RingMap,
        class: TwistedClass,
        w: WeylElement,
    ) -> Result<Problem, CrossSecError> {
        if !class.elliptic {
            return Err(CrossSecError::NotElliptic);
        }
        if !class.min_length.iter().any(|m| *m == w) {
            return Err(CrossSecError::NotMinimal);
        }
        let auto_ok = chi.source == ctx.ring
            && chi.target == ctx.ring
            && matches!(chi.kind, MapKind::Identity | MapKind::Frobenius { .. });
        if !auto_ok {
            return Err(CrossSecError::Ring(RingError::BadMap(
                "χ must be an automorphism of the problem ring".into(),
            )));
        }
        // fail early if the model cannot carry δ
        ctx.twist(&ctx.one(), &delta, &chi)?;
        let delta_inv = delta.inverse(&ctx.group.datum);
        let chi_inv = chi.inverse_automorphism()?;
        Ok(Problem { ctx, delta, chi, class, w, delta_inv, chi_inv })
    }

    pub fn lengths(&self) -> (usize, usize) {
        (self.w.length, self.ctx.wi_word.len())
    }

    /// π = δ∘χ.
    pub fn pi(&self, g: &GroupElement) -> GroupElement {
        self.ctx.twist(g, &self.delta, &self.chi).expect("validated twist")
    }

    /// π⁻¹.
    pub fn pi_inv(&self, g: &GroupElement) -> GroupElement {
        self.ctx.twist(g, &self.delta_inv, &self.chi_inv).expect("validated twist")
    }

    pub fn pi_pow(&self, g: &GroupElement, k: u32) -> GroupElement {
        let mut out = g.clone();
        for _ in 0..k {
            out = self.pi(&out);
        }
        out
    }

    pub fn pi_inv_pow(&self, g: &GroupElement, k: u32) -> GroupElement {
        let mut out = g.clone();
        for _ in 0..k {
            out = self.pi_inv(&out);
        }
        out
    }
}

/// Ξ(u, z) = u z π(u)⁻¹, with membership checks on both arguments.
pub fn xi(p: &Problem, u: &GroupElement, z: &GroupElement) -> Result<GroupElement, CrossSecError> {
    if !p.ctx.in_u(u)? {
        return Err(CrossSecError::Chev(ChevError::Membership("U".into())));
    }
    if p.ctx.zw_coords(&p.w.word, z).is_err() {
        return Err(CrossSecError::Chev(ChevError::Membership("U^w·ẇ".into())));
    }
    Ok(xi_unchecked(p, u, z))
}

pub fn xi_unchecked(p: &Problem, u: &GroupElement, z: &GroupElement) -> GroupElement {
    let c = &p.ctx;
    c.mul(&c.mul(u, z), &c.invert(&p.pi(u)))
}

/// One step of the shift-graph walk from the target element towards the
/// good element: `w_from = x·δ(y), w_to = y·x` when `forward`.
#[derive(Debug, Clone)]
pub struct TransportStep {
    pub w_from: WeylElement,
    pub w_to: WeylElement,
    pub x: WeylElement,
    pub y: WeylElement,
    pub forward: bool,
}

/// Everything needed to evaluate the constructive inverse at `w`.
pub struct InverseDescriptor {
    pub good_w: WeylElement,
    pub e: u32,
    pub y_blocks: Vec<WeylElement>,
    pub x_blocks: Vec<WeylElement>,
    pub braid_path: Vec<BraidMove>,
    pub transport: Vec<TransportStep>,
}

/// Locate the good element, its braid decomposition, the letter-level move
/// path, and the shift-graph transport from `p.w` to the good element.
pub fn build_inverse(p: &Problem) -> Result<InverseDescriptor, CrossSecError> {
    let group = &p.ctx.group;
    let (good_w, gd) = find_good_element(group, &p.class)?;
    let graph = min_length_set(group, &p.class)?;
    let path = shift_path(&graph, &p.w, &good_w)?;
    let transport: Vec<TransportStep> = path
        .iter()
        .map(|s| {
            let (from, to) = (graph.nodes[s.edge.from].clone(), graph.nodes[s.edge.to].clone());
            let (w_from, w_to) = if s.forward { (from, to) } else { (to, from) };
            TransportStep {
                w_from,
                w_to,
                x: s.edge.x.clone(),
                y: s.edge.y.clone(),
                forward: s.forward,
            }
        })
        .collect();
    descriptor_at(p, &good_w, gd, transport)
}

/// A descriptor rooted at `w` itself (empty transport), when `w` admits a
/// good decomposition; `None` otherwise.
pub fn good_decomposition_of(p: &Problem, w: &WeylElement) -> Option<InverseDescriptor> {
    let group = &p.ctx.group;
    let gd = crate::braid::good_decomposition(group, w, &p.delta, p.class.order_e)?;
    descriptor_at(p, w, gd, vec![]).ok()
}

fn descriptor_at(
    p: &Problem,
    good_w: &WeylElement,
    gd: crate::braid::GoodDecomposition,
    transport: Vec<TransportStep>,
) -> Result<InverseDescriptor, CrossSecError> {
    let group = &p.ctx.group;
    let mut x_blocks = Vec::with_capacity(gd.e as usize);
    let mut cur = good_w.clone();
    for _ in 0..gd.e {
        x_blocks.push(cur.clone());
        cur = group.twist(&cur, &p.delta);
    }
    let from_letters: Vec<u8> = x_blocks.iter().flat_map(|b| b.word.iter().copied()).collect();
    let to_letters: Vec<u8> = gd.factors.iter().flat_map(|b| b.word.iter().copied()).collect();
    let braid_path = braid_move_path(group, &from_letters, &to_letters)?;
    Ok(InverseDescriptor {
        good_w: good_w.clone(),
        e: gd.e,
        y_blocks: gd.factors,
        x_blocks,
        braid_path,
        transport,
    })
}

/// The unique (u, z) with Ξ(u, z) = g, produced by the constructive
/// algorithm (never by global table inversion of Ξ itself).
pub fn xi_inverse(
    p: &Problem,
    inv: &InverseDescriptor,
    g: &GroupElement,
) -> Result<(GroupElement, GroupElement), CrossSecError> {
    eval_inverse(p, inv, 0, g)
}

fn eval_inverse(
    p: &Problem,
    inv: &InverseDescriptor,
    level: usize,
    g: &GroupElement,
) -> Result<(GroupElement, GroupElement), CrossSecError> {
    if level == inv.transport.len() {
        return good_inverse(p, inv, g);
    }
    let step = &inv.transport[level];
    let c = &p.ctx;
    let group = &c.group;
    let dy = group.twist(&step.y, &p.delta);
    // split off the trailing unipotent of the cell point
    let (zh, _, u2, _) = c.split_cell(&step.w_from, g)?;
    if step.forward {
        // w_from = x·δ(y); the inverse at w_to = y·x is one level deeper
        let (ga, gp) = split_pair(c, &step.x, &dy, &zh)?;
        let zp = c.mul(&gp, &u2);
        let (a, b) = (p.pi_inv(&zp), ga);
        let (u, uprime, g2, g2p) = z_section(p, inv, level + 1, &step.y, &step.x, &a, &b)?;
        let _ = u;
        let znew = c.mul(&g2p, &p.pi(&g2));
        Ok((uprime, znew))
    } else {
        // w_from = y·x; the inverse at w_to = x·δ(y) is one level deeper
        let (ga, gp) = split_pair(c, &step.y, &step.x, &zh)?;
        let zp = c.mul(&gp, &u2);
        let (cc, dd) = (zp, p.pi(&ga));
        let (_, uprime, g2, g2p) = z_section(p, inv, level + 1, &step.x, &dy, &cc, &dd)?;
        let znew = c.mul(&p.pi_inv(&g2p), &g2);
        Ok((p.pi_inv(&uprime), znew))
    }
}

/// The genuine section of the two-cell gluing map for the pair
/// (left, right): given (a, b) in (U·left·U) × (U·right·U), produce
/// (u, u′, g, g′) with g ∈ U^left·l̇, g′ ∈ U^right·ṙ and
///   u·g·u′⁻¹ = a,   u′·g′·π(u)⁻¹ = b,
/// evaluated through the next-level inverter at left·right. The first
/// argument is normalized before the inverter runs and the unipotent tail
/// is folded back into u′ afterwards, so the identities hold for arbitrary
/// representatives.
fn z_section(
    p: &Problem,
    inv: &InverseDescriptor,
    level: usize,
    left: &WeylElement,
    right: &WeylElement,
    a: &GroupElement,
    b: &GroupElement,
) -> Result<(GroupElement, GroupElement, GroupElement, GroupElement), CrossSecError> {
    let c = &p.ctx;
    let (_, _, mu, _) = c.split_cell(left, a)?;
    let prod = c.mul(a, b);
    let (u, g2full) = eval_inverse(p, inv, level, &prod)?;
    let (g2, g2p) = split_pair(c, left, right, &g2full)?;
    let (_, _, u0, _) = c.split_cell(left, &c.mul(&u, &g2))?;
    let uprime = c.mul(&c.invert(&mu), &u0);
    Ok((u, uprime, g2, g2p))
}

/// Split G ∈ U^{ab}·(ȧḃ) into (g_a, g_b) ∈ (U^aȧ) × (U^bḃ), the inverse of
/// the length-additive multiplication bijection.
fn split_pair(
    c: &Context,
    a: &WeylElement,
    b: &WeylElement,
    g: &GroupElement,
) -> Result<(GroupElement, GroupElement), CrossSecError> {
    let lb = c.lift(b);
    let t = c.mul(g, &c.invert(&lb));
    let (za, _, u, _) = c.split_cell(a, &t)?;
    Ok((za, c.mul(&u, &lb)))
}

/// The inverse at the good element itself: refine [g, π(g), ...] over the
/// e twisted copies, transport to the good decomposition, normalize, and
/// split off the answer.
fn good_inverse(
    p: &Problem,
    inv: &InverseDescriptor,
    g: &GroupElement,
) -> Result<(GroupElement, GroupElement), CrossSecError> {
    let c = &p.ctx;
    let gs: Vec<GroupElement> = {
        let mut v = Vec::with_capacity(inv.e as usize);
        let mut cur = g.clone();
        for _ in 0..inv.e {
            v.push(cur.clone());
            cur = p.pi(&cur);
        }
        v
    };
    let tuple = c.refine_sequence(&inv.x_blocks, &gs)?;
    let tuple = c.h_tilde(&inv.braid_path, &tuple)?;
    let blocks = c.merge_letters(&tuple, &inv.y_blocks)?;
    let (_, u) = c.zeta(&inv.y_blocks, &blocks)?;
    let pu_e = p.pi_inv_pow(&u, inv.e);
    let pu_e1 = p.pi_inv_pow(&u, inv.e - 1);
    let m = c.mul(&c.mul(&pu_e, g), &c.invert(&pu_e1));
    let (zp, _, _, _) = c.split_cell(&inv.good_w, &m)?;
    Ok((c.invert(&pu_e), zp))
}

/// α(u', u'') = u'·u''·ẇ·π(u')⁻¹·ẇ⁻¹ from ^{δ⁻¹(w)⁻¹}U × U^w to U.
pub fn alpha(
    p: &Problem,
    u_prime: &GroupElement,
    u_second: &GroupElement,
) -> Result<GroupElement, CrossSecError> {
    let c = &p.ctx;
    let group = &c.group;
    let v = group.inverse(&group.twist(&p.w, &p.delta_inv));
    let vu = c.sub_table(&v, SubgroupKind::Wu)?;
    if !vu.contains(&u_prime.mat) {
        return Err(CrossSecError::Chev(ChevError::Membership("^{δ⁻¹(w)⁻¹}U".into())));
    }
    let uw = c.sub_table(&p.w, SubgroupKind::Uw)?;
    if !uw.contains(&u_second.mat) {
        return Err(CrossSecError::Chev(ChevError::Membership("U^w".into())));
    }
    let lw = c.lift(&p.w);
    let out = c.mul_all(&[u_prime, u_second, &lw, &c.invert(&p.pi(u_prime)), &c.invert(&lw)]);
    if !c.in_u(&out)? {
        return Err(CrossSecError::Chev(ChevError::Membership("U (image of α)".into())));
    }
    Ok(out)
}

/// Structure of T_w = {t ∈ T : ẇ⁻¹tẇ = δ(t)} from the Smith normal form of
/// wδ − 1 acting on X.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwInvariants {
    /// Nontrivial invariant factors (each > 1), in divisibility order.
    pub factors: Vec<i64>,
    /// |det(wδ − 1)| = the order of T_w.
    pub order: i64,
}

pub fn t_w_invariants(p: &Problem) -> Result<TwInvariants, CrossSecError> {
    t_w_invariants_of(&p.ctx.group, &p.w, &p.delta)
}

pub fn t_w_invariants_of(
    group: &WeylGroup,
    w: &WeylElement,
    delta: &DatumAutomorphism,
) -> Result<TwInvariants, CrossSecError> {
    let rank = group.rank();
    let m = IMat::mul(&w.action, &delta.x_matrix);
    let diff = IMat::sub(&m, &IMat::identity(rank));
    let det = diff.det();
    if det == 0 {
        return Err(CrossSecError::NotElliptic);
    }
    let all = smith_invariant_factors(&diff);
    let order = all.iter().product::<i64>().abs();
    debug_assert_eq!(order, det.abs());
    let factors: Vec<i64> = all.into_iter().filter(|&f| f > 1).collect();
    Ok(TwInvariants { factors, order })
}

/// The slice Σ = ẇ·U^w over a finite field in the defining model, counted
/// against the unipotence test (g − 1 nilpotent).
#[derive(Debug, Clone)]
pub struct SigmaReport {
    pub points: u64,
    pub unipotent_count: u64,
    /// Coordinates (in U^w) of the unipotent points found.
    pub witnesses: Vec<Vec<Value>>,
}

pub fn sigma_unipotent_count(p: &Problem) -> Result<SigmaReport, CrossSecError> {
    let c = &p.ctx;
    if c.rep.kind != RepKind::DefiningA {
        return Err(CrossSecError::Unsupported(
            "the unipotence test needs the type-A defining model".into(),
        ));
    }
    if !matches!(c.ring, Ring::FiniteField(_)) {
        return Err(CrossSecError::Unsupported("Σ counting needs a finite field".into()));
    }
    let t = c.sub_table(&p.w, SubgroupKind::Uw)?;
    let lw = c.lift(&p.w);
    let dim = c.dim();
    let mut witnesses = Vec::new();
    for (coords, u) in t.coords.iter().zip(&t.elems) {
        let s = c.mul(&lw, u);
        let nil = Mat::sub(&c.ring, &s.mat, &Mat::identity(&c.ring, dim));
        let mut pw = nil.clone();
        for _ in 1..dim {
            pw = Mat::mul(&c.ring, &pw, &nil);
        }
        if pw.is_zero(&c.ring) {
            witnesses.push(coords.clone());
        }
    }
    Ok(SigmaReport {
        points: t.len() as u64,
        unipotent_count: witnesses.len() as u64,
        witnesses,
    })
}

/// Orbits of the twisted conjugation u: g ↦ u g π(u)⁻¹ of U on the cell.
#[derive(Debug, Clone)]
pub struct OrbitReport {
    pub orbits: u64,
    pub expected: u64,
    pub cell_points: u64,
    pub u_order: u64,
    pub all_free: bool,
    /// (z coords, U coords, orbit size) per representative, in discovery order.
    pub sizes: Vec<(Vec<Value>, Vec<Value>, u64)>,
}

pub fn orbit_count(p: &Problem) -> Result<OrbitReport, CrossSecError> {
    let c = &p.ctx;
    let u_table = c.u_table()?;
    let zc = c.coord_tuples(p.w.length)?;
    let uc = c.coord_tuples(c.wi_word.len())?;
    let q = c
        .ring
        .size()
        .ok_or_else(|| CrossSecError::Unsupported("orbit counting needs a finite ring".into()))?;
    let mut visited: std::collections::HashSet<Mat> = std::collections::HashSet::new();
    let mut sizes = Vec::new();
    for z in &zc {
        for u in &uc {
            let g = c.param_cell(&p.w, z, u);
            if visited.contains(&g.mat) {
                continue;
            }
            let mut orbit: std::collections::HashSet<Mat> = std::collections::HashSet::new();
            for v in &u_table.elems {
                let img = c.mul(&c.mul(v, &g), &c.invert(&p.pi(v)));
                orbit.insert(img.mat);
            }
            for m in &orbit {
                visited.insert(m.clone());
            }
            sizes.push((z.clone(), u.clone(), orbit.len() as u64));
        }
    }
    let u_order = u_table.len() as u64;
    let all_free = sizes.iter().all(|(_, _, s)| *s == u_order);
    Ok(OrbitReport {
        orbits: sizes.len() as u64,
        expected: q.pow(p.w.length as u32),
        cell_points: visited.len() as u64,
        u_order,
        all_free,
        sizes,
    })
}

/// Exhaustive verification of bijectivity of Ξ for one configuration,
/// cross-checking the constructive inverse on every cell point.
#[derive(Debug, Clone)]
pub struct XiVerification {
    pub domain_points: u64,
    pub cell_points: u64,
    pub injective: bool,
    pub surjective: bool,
    pub inverse_checked: u64,
    pub inverse_ok: bool,
    pub millis: u128,
}

impl XiVerification {
    pub fn bijective(&self) -> bool {
        self.injective && self.surjective
    }
}

pub fn verify_theorem(p: &Problem) -> Result<XiVerification, CrossSecError> {
    use rayon::prelude::*;
    let start = Instant::now();
    let c = &p.ctx;
    let u_table = c.u_table()?;
    let z_table = c.z_table(&p.w.word)?;
    let n_cell = u_table.len() * z_table.len();

    // warm the split caches before the parallel sections
    let inv = build_inverse(p)?;
    {
        let g0 = c.mul(&z_table.elems[0], &u_table.elems[0]);
        let _ = xi_inverse(p, &inv, &g0)?;
    }

    let pairs: Vec<(usize, usize)> = (0..u_table.len())
        .flat_map(|ui| (0..z_table.len()).map(move |zi| (ui, zi)))
        .collect();
    let images: Vec<Mat> = pairs
        .par_iter()
        .map(|&(ui, zi)| xi_unchecked(p, &u_table.elems[ui], &z_table.elems[zi]).mat)
        .collect();
    let mut seen: std::collections::HashMap<&Mat, usize> =
        std::collections::HashMap::with_capacity(images.len());
    let mut injective = true;
    for (i, m) in images.iter().enumerate() {
        if seen.insert(m, i).is_some() {
            injective = false;
            break;
        }
    }
    // with injectivity established, surjectivity is exhaustion of the cell
    let surjective = injective && {
        let zcs = c.coord_tuples(p.w.length)?;
        let ucs = c.coord_tuples(c.wi_word.len())?;
        let mut all_in = true;
        'outer: for z in &zcs {
            for u in &ucs {
                let g = c.param_cell(&p.w, z, u);
                if !seen.contains_key(&g.mat) {
                    all_in = false;
                    break 'outer;
                }
            }
        }
        all_in && seen.len() == n_cell
    };

    // constructive inverse agrees pointwise on the whole cell
    let zcs = c.coord_tuples(p.w.length)?;
    let ucs = c.coord_tuples(c.wi_word.len())?;
    let cell_pts: Vec<(Vec<Value>, Vec<Value>)> =
        zcs.iter().flat_map(|z| ucs.iter().map(move |u| (z.clone(), u.clone()))).collect();
    let inverse_results: Result<Vec<bool>, CrossSecError> = cell_pts
        .par_iter()
        .map(|(z, u)| {
            let g = c.param_cell(&p.w, z, u);
            let (iu, iz) = xi_inverse(p, &inv, &g)?;
            Ok(xi_unchecked(p, &iu, &iz) == g)
        })
        .collect();
    let inverse_results = inverse_results?;
    let inverse_ok = inverse_results.iter().all(|&b| b);

    Ok(XiVerification {
        domain_points: n_cell as u64,
        cell_points: seen.len() as u64,
        injective,
        surjective,
        inverse_checked: inverse_results.len() as u64,
        inverse_ok,
        millis: start.elapsed().as_millis(),
    })
}

// ---- the symbolic coordinate layer (χ = 1, δ = 1) ----

fn symbolic_ring(n: usize) -> Ring {
    let vars: Vec<String> = (1..=n).map(|i| format!("X{i}")).collect();
    Ring::PolynomialsOverZ { vars: Arc::new(vars) }
}

fn value_to_poly(v: &Value) -> MPolyZ {
    match v {
        Value::Poly(p) => p.clone(),
        _ => unreachable!("symbolic computation stays in the polynomial ring"),
    }
}

fn symbolic_problem(group: &Arc<WeylGroup>, w: &WeylElement) -> Result<Problem, CrossSecError> {
    let n = group.longest_element().length;
    let ring = symbolic_ring(w.length + n);
    let ctx = Arc::new(Context::natural(group.clone(), ring.clone())?);
    let delta = DatumAutomorphism::identity(&group.datum);
    let chi = RingMap::identity(ring);
    let classes = delta_classes(group, &delta);
    let class =
        classes.into_iter().find(|c| c.contains(w)).expect("every element lies in a class");
    Problem::new(ctx, delta, chi, class, w.clone())
}

/// The coordinate form of Ξ as an integer polynomial map: inputs are the U
/// coordinates then the U^wẇ coordinates; outputs are the cell coordinates
/// (z part then U part).
pub fn xi_polymap(group: &Arc<WeylGroup>, w: &WeylElement) -> Result<PolyMap, CrossSecError> {
    let p = symbolic_problem(group, w)?;
    let c = &p.ctx;
    let (k, n) = p.lengths();
    let ring = c.ring.clone();
    let uvars: Vec<Value> = (0..n).map(|i| ring.poly_var(i)).collect();
    let zvars: Vec<Value> = (0..k).map(|i| ring.poly_var(n + i)).collect();
    let u = c.param_u(&uvars);
    let z = c.param_zw_word(&p.w.word, &zvars);
    let g = xi_unchecked(&p, &u, &z);
    let (_, zc, _, uc) = c.split_cell(&p.w, &g)?;
    let comps: Vec<MPolyZ> = zc.iter().chain(uc.iter()).map(value_to_poly).collect();
    Ok(PolyMap::new(comps))
}

/// The coordinate form of the constructive inverse Ξ′ (good-element route
/// plus transport): inputs are cell coordinates, outputs U then U^wẇ
/// coordinates.
pub fn xi_inverse_polymap(
    group: &Arc<WeylGroup>,
    w: &WeylElement,
) -> Result<PolyMap, CrossSecError> {
    let p = symbolic_problem(group, w)?;
    let c = &p.ctx;
    let (k, _n) = p.lengths();
    let ring = c.ring.clone();
    let zvars: Vec<Value> = (0..k).map(|i| ring.poly_var(i)).collect();
    let uvars: Vec<Value> = (k..k + c.wi_word.len()).map(|i| ring.poly_var(i)).collect();
    let g = c.param_cell(&p.w, &zvars, &uvars);
    let inv = build_inverse(&p)?;
    let (iu, iz) = xi_inverse(&p, &inv, &g)?;
    let iu_coords = c.u_coords(&iu)?;
    let iz_coords = c.zw_coords(&p.w.word, &iz)?;
    let comps: Vec<MPolyZ> = iu_coords.iter().chain(iz_coords.iter()).map(value_to_poly).collect();
    for comp in &comps {
        if comp.num_terms() > DEFAULT_MONOMIAL_CEILING {
            return Err(CrossSecError::MonomialCeiling(DEFAULT_MONOMIAL_CEILING));
        }
    }
    Ok(PolyMap::new(comps))
}

// ---- the isotropy counterexample for a non-minimal Coxeter element ----

/// Report of the 6×6 non-minimal-length demonstration: a one-parameter
/// family inside U fixing a point of UẇU under conjugation.
#[derive(Debug, Clone)]
pub struct SpaltensteinReport {
    /// Whether u_x·(yẇ)·u_x⁻¹ = yẇ held for every tested parameter (all of
    /// a finite ring, or the generic symbolic parameter).
    pub identity_holds: bool,
    /// Number of parameters tested (field size, or 1 for symbolic).
    pub family_size: u64,
    /// Exhaustive isotropy order inside U, when |U| is small enough.
    pub full_isotropy: Option<u64>,
    pub u_order: Option<u64>,
    /// Orbit size |U|/isotropy, when computed.
    pub orbit_size: Option<u64>,
    pub action_is_free: bool,
}

fn spalt_w(ring: &Ring) -> GroupElement {
    let rows: [[i64; 6]; 6] = [
        [0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0],
        [0, 1, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1],
        [0, 0, 0, 1, 0, 0],
        [1, 0, 0, 0, 0, 0],
    ];
    let m = IMat::from_rows(rows.iter().map(|r| r.to_vec()).collect()).to_mat(ring);
    let inv = m.transpose();
    GroupElement { mat: m, inv }
}

/// I + c·N for a strictly triangular square-zero entry pattern.
fn unipotent_from(ring: &Ring, entries: &[(usize, usize, i64)], c: &Value) -> GroupElement {
    let mut m = Mat::identity(ring, 6);
    let mut inv = Mat::identity(ring, 6);
    for &(r, col, s) in entries {
        let v = ring.mul(c, &ring.from_i64(s));
        m.set(r, col, ring.add(m.get(r, col), &v));
        inv.set(r, col, ring.sub(inv.get(r, col), &v));
    }
    GroupElement { mat: m, inv }
}

const SPALT_U: &[(usize, usize, i64)] = &[(1, 3, 1), (1, 5, 1), (2, 3, 1), (2, 5, 1)];
const SPALT_Y: &[(usize, usize, i64)] = &[(0, 2, -1), (1, 2, 1), (3, 4, 1), (3, 5, -1)];

pub fn spaltenstein_demo(ring: &Ring) -> Result<SpaltensteinReport, CrossSecError> {
    let wd = spalt_w(ring);
    let y = unipotent_from(ring, SPALT_Y, &ring.one());
    let yw = Mat::mul(ring, &y.mat, &wd.mat);
    let conj_fixes = |u: &GroupElement| -> bool {
        let lhs = Mat::mul(ring, &Mat::mul(ring, &u.mat, &yw), &u.inv);
        lhs == yw
    };
    let (identity_holds, family_size) = if ring.is_finite() {
        let elems = ring.enumerate()?;
        let ok = elems.iter().all(|a| conj_fixes(&unipotent_from(ring, SPALT_U, a)));
        (ok, elems.len() as u64)
    } else {
        match ring {
            Ring::PolynomialsOverZ { .. } => {
                (conj_fixes(&unipotent_from(ring, SPALT_U, &ring.poly_var(0))), 1)
            }
            _ => {
                let ok =
                    (-3..=3).all(|a| conj_fixes(&unipotent_from(ring, SPALT_U, &ring.from_i64(a))));
                (ok, 7)
            }
        }
    };

    // exhaustive isotropy over the full upper unitriangular group when the
    // 15 free entries stay enumerable
    let (full_isotropy, u_order, orbit_size) = match ring.size() {
        Some(q) if q == 2 => {
            let positions: Vec<(usize, usize)> =
                (0..6).flat_map(|i| (i + 1..6).map(move |j| (i, j))).collect();
            let elems = ring.enumerate()?;
            let total = (q as u64).pow(15);
            let mut count = 0u64;
            let mut codes = vec![0usize; 15];
            loop {
                let mut m = Mat::identity(ring, 6);
                for (slot, &(r, c)) in positions.iter().enumerate() {
                    m.set(r, c, elems[codes[slot]].clone());
                }
                // nilpotent Neumann series for the inverse
                let n = Mat::sub(ring, &m, &Mat::identity(ring, 6));
                let mut inv = Mat::identity(ring, 6);
                let mut pw = Mat::identity(ring, 6);
                let mut sign = false;
                for _ in 0..5 {
                    pw = Mat::mul(ring, &pw, &n);
                    sign = !sign;
                    inv =
                        if sign { Mat::sub(ring, &inv, &pw) } else { Mat::add(ring, &inv, &pw) };
                }
                let g = GroupElement { mat: m, inv };
                if conj_fixes(&g) {
                    count += 1;
                }
                let mut pos = 15;
                let done = loop {
                    if pos == 0 {
                        break true;
                    }
                    pos -= 1;
                    codes[pos] += 1;
                    if codes[pos] < elems.len() {
                        break false;
                    }
                    codes[pos] = 0;
                };
                if done {
                    break;
                }
            }
            (Some(count), Some(total), Some(total / count))
        }
        _ => (None, None, None),
    };

    Ok(SpaltensteinReport {
        identity_holds,
        family_size,
        full_isotropy,
        u_order,
        orbit_size,
        action_is_free: false,
    })
}

// ---- convenience constructors used by the CLI and the test suites ----

/// Build the Weyl group for a type label with its natural lattice: sc for
/// plain type-A labels, ad otherwise.
pub fn natural_group(type_label: &str) -> Result<Arc<WeylGroup>, CrossSecError> {
    let lattice = if type_label.starts_with('A') && !type_label.contains('x') {
        Lattice::Sc
    } else {
        Lattice::Ad
    };
    let datum = Arc::new(RootDatum::from_type(type_label, lattice)?);
    Ok(Arc::new(WeylGroup::new(datum)?))
}

/// All (class, w) pairs with the class elliptic and w of minimal length.
pub fn elliptic_configurations(
    group: &WeylGroup,
    delta: &DatumAutomorphism,
) -> Vec<(TwistedClass, WeylElement)> {
    let mut out = Vec::new();
    for class in delta_classes(group, delta) {
        if !class.elliptic {
            continue;
        }
        for w in &class.min_length {
            out.push((class.clone(), w.clone()));
        }
    }
    out
}
