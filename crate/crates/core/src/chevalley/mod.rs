//! The group over a ring in a faithful matrix model: generators, lifts of
//! Weyl elements, cell parametrizations and their inverses, twisting by
//! datum and ring automorphisms, and the tuple-cell moves.

mod cells;
mod rep;
mod tuple;

pub use cells::{CellCoordinates, CellKind, SubgroupKind, Table};
pub use rep::{BasisItem, RepKind, RepModel};
pub use tuple::LetterTuple;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::matrix::{IMat, Mat};
use crate::rings::{MapKind, Ring, RingError, RingMap, Value};
use crate::rootdata::{DatumAutomorphism, RootDataError};
use crate::weyl::WeylElement;
use crate::weyl::WeylGroup;

#[derive(Debug, Error)]
pub enum ChevError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error("element is not in {0}")]
    Membership(String),
    #[error("coordinate count {0} does not match expected {1}")]
    CoordinateCount(usize, usize),
    #[error("operation needs a finite ring or a supported symbolic extractor: {0}")]
    NoExtractor(String),
    #[error("the {0} model does not admit this datum automorphism")]
    TwistUnsupported(&'static str),
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

/// An invertible matrix over the context ring, carried together with its
/// inverse so that no matrix ever needs to be inverted by division: every
/// element of interest is built from generators with known inverses.
#[derive(Debug, Clone)]
pub struct GroupElement {
    pub mat: Mat,
    pub inv: Mat,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.mat == other.mat
    }
}
impl Eq for GroupElement {}
impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.mat.hash(state);
    }
}

/// Everything needed to compute in G(A) for one (datum, model, ring).
pub struct Context {
    pub group: Arc<WeylGroup>,
    pub rep: RepModel,
    pub ring: Ring,
    /// The fixed lexicographically-least reduced word of w_I, used by every
    /// parametrization of U.
    pub wi_word: Vec<u8>,
    caches: Caches,
}

#[derive(Default)]
struct Caches {
    lifts: Mutex<HashMap<Vec<u8>, GroupElement>>,
    u_table: OnceLock<Arc<Table>>,
    z_tables: Mutex<HashMap<Vec<u8>, Arc<Table>>>,
    cell_tables: Mutex<HashMap<Vec<u8>, Arc<cells::CellTable>>>,
    usplit_tables: Mutex<HashMap<Vec<u8>, Arc<cells::CellTable>>>,
    sub_tables: Mutex<HashMap<(Vec<u8>, SubgroupKind), Arc<Table>>>,
    u_minus: OnceLock<Arc<std::collections::HashSet<Mat>>>,
    peel_plans: Mutex<HashMap<Vec<u8>, Arc<Option<cells::PeelPlan>>>>,
    twist_mats: Mutex<HashMap<Vec<usize>, Arc<(Mat, Mat)>>>,
}

impl Context {
    pub fn new(group: Arc<WeylGroup>, rep: RepModel, ring: Ring) -> Context {
        let wi_word = group.longest_element().word.clone();
        Context { group, rep, ring, wi_word, caches: Caches::default() }
    }

    /// Natural model for the datum (defining for type A sc, adjoint for ad).
    pub fn natural(group: Arc<WeylGroup>, ring: Ring) -> Result<Context, ChevError> {
        let rep = RepModel::natural(&group.datum)?;
        Ok(Context::new(group, rep, ring))
    }

    pub fn dim(&self) -> usize {
        self.rep.dim
    }

    pub fn one(&self) -> GroupElement {
        let id = Mat::identity(&self.ring, self.rep.dim);
        GroupElement { mat: id.clone(), inv: id }
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement {
            mat: Mat::mul(&self.ring, &a.mat, &b.mat),
            inv: Mat::mul(&self.ring, &b.inv, &a.inv),
        }
    }

    pub fn mul_all(&self, gs: &[&GroupElement]) -> GroupElement {
        let mut acc = self.one();
        for g in gs {
            acc = self.mul(&acc, g);
        }
        acc
    }

    pub fn invert(&self, a: &GroupElement) -> GroupElement {
        GroupElement { mat: a.inv.clone(), inv: a.mat.clone() }
    }

    /// Sum of divided-power matrices weighted by powers of h.
    fn one_parameter(&self, pows: &[IMat], h: &Value) -> Mat {
        let mut acc = pows[0].to_mat(&self.ring);
        let mut hp = self.ring.one();
        for p in &pows[1..] {
            hp = self.ring.mul(&hp, h);
            acc = Mat::add(&self.ring, &acc, &p.to_mat(&self.ring).scale(&self.ring, &hp));
        }
        acc
    }

    /// The root generator x_i(h).
    pub fn gen_x(&self, i: usize, h: &Value) -> GroupElement {
        GroupElement {
            mat: self.one_parameter(&self.rep.xpow[i], h),
            inv: self.one_parameter(&self.rep.xpow[i], &self.ring.neg(h)),
        }
    }

    /// The opposite root generator y_i(h).
    pub fn gen_y(&self, i: usize, h: &Value) -> GroupElement {
        GroupElement {
            mat: self.one_parameter(&self.rep.ypow[i], h),
            inv: self.one_parameter(&self.rep.ypow[i], &self.ring.neg(h)),
        }
    }

    /// The simple-reflection representative ṡ_i = x_i(1) y_i(-1) x_i(1).
    pub fn gen_s(&self, i: usize) -> GroupElement {
        let one = self.ring.one();
        let minus_one = self.ring.neg(&one);
        self.mul_all(&[&self.gen_x(i, &one), &self.gen_y(i, &minus_one), &self.gen_x(i, &one)])
    }

    /// t_i(-1): the diagonal element with entries (-1)^{⟨i, weight⟩}.
    pub fn gen_t_minus_one(&self, i: usize) -> GroupElement {
        let one = self.ring.one();
        let minus_one = self.ring.neg(&one);
        let mut m = Mat::identity(&self.ring, self.rep.dim);
        for (b, &w) in self.rep.weights[i].iter().enumerate() {
            if w.rem_euclid(2) == 1 {
                m.set(b, b, minus_one.clone());
            } else {
                m.set(b, b, one.clone());
            }
        }
        GroupElement { mat: m.clone(), inv: m }
    }

    /// The torus element with entries (-1)^{⟨λ, weight⟩} for a coweight λ
    /// given in simple-coroot coordinates.
    pub fn torus_minus_one(&self, coweight: &[i64]) -> GroupElement {
        let one = self.ring.one();
        let minus_one = self.ring.neg(&one);
        let mut m = Mat::identity(&self.ring, self.rep.dim);
        for b in 0..self.rep.dim {
            let pairing: i64 = coweight.iter().zip(self.rep.weights.iter()).map(|(&c, w)| c * w[b]).sum();
            if pairing.rem_euclid(2) == 1 {
                m.set(b, b, minus_one.clone());
            } else {
                m.set(b, b, one.clone());
            }
        }
        GroupElement { mat: m.clone(), inv: m }
    }

    /// The lift ẇ = ṡ_{i1} ... ṡ_{ik} along an explicit reduced word.
    pub fn lift_word(&self, word: &[u8]) -> GroupElement {
        if let Some(g) = self.caches.lifts.lock().unwrap().get(word) {
            return g.clone();
        }
        let mut acc = self.one();
        for &i in word {
            acc = self.mul(&acc, &self.gen_s(i as usize));
        }
        self.caches.lifts.lock().unwrap().insert(word.to_vec(), acc.clone());
        acc
    }

    /// The canonical lift of a Weyl element (along its canonical word;
    /// independent of the word by the braid relations).
    pub fn lift(&self, w: &WeylElement) -> GroupElement {
        self.lift_word(&w.word)
    }

    /// Apply π = δ∘χ to a group element.
    pub fn twist(
        &self,
        g: &GroupElement,
        delta: &DatumAutomorphism,
        chi: &RingMap,
    ) -> Result<GroupElement, ChevError> {
        let chi_ok = chi.source == self.ring
            && chi.target == self.ring
            && matches!(chi.kind, MapKind::Identity | MapKind::Frobenius { .. });
        if !chi_ok {
            return Err(ChevError::Ring(RingError::BadMap(
                "χ must be an automorphism of the context ring".into(),
            )));
        }
        let apply_chi = |m: &Mat| -> Mat {
            if chi.is_identity() {
                m.clone()
            } else {
                m.map_entries(|v| chi.apply(v).expect("value of the context ring"))
            }
        };
        if delta.is_identity() {
            return Ok(GroupElement { mat: apply_chi(&g.mat), inv: apply_chi(&g.inv) });
        }
        match self.rep.kind {
            RepKind::Adjoint => {
                let (d, dinv) = &*self.adjoint_twist_pair(delta);
                let conj = |m: &Mat| Mat::mul(&self.ring, &Mat::mul(&self.ring, d, m), dinv);
                Ok(GroupElement {
                    mat: apply_chi(&conj(&g.mat)),
                    inv: apply_chi(&conj(&g.inv)),
                })
            }
            RepKind::DefiningA => {
                // only the diagram flip acts on the defining model, via
                // g ↦ J (g⁻¹)ᵀ J⁻¹ with J the alternating antidiagonal
                let n = self.group.rank();
                let is_flip = (0..n).all(|i| delta.perm[i] == n - 1 - i);
                if !is_flip {
                    return Err(ChevError::TwistUnsupported("defining"));
                }
                let dim = self.rep.dim;
                let mut j = IMat::zero(dim);
                for k in 0..dim {
                    j.set(k, dim - 1 - k, if k % 2 == 0 { 1 } else { -1 });
                }
                let jm = j.to_mat(&self.ring);
                let jinv = if n % 2 == 0 {
                    jm.clone()
                } else {
                    jm.map_entries(|v| self.ring.neg(v))
                };
                let conj =
                    |m: &Mat| Mat::mul(&self.ring, &Mat::mul(&self.ring, &jm, &m.transpose()), &jinv);
                Ok(GroupElement {
                    mat: apply_chi(&conj(&g.inv)),
                    inv: apply_chi(&conj(&g.mat)),
                })
            }
        }
    }

    fn adjoint_twist_pair(&self, delta: &DatumAutomorphism) -> Arc<(Mat, Mat)> {
        let mut lock = self.caches.twist_mats.lock().unwrap();
        if let Some(p) = lock.get(&delta.perm) {
            return p.clone();
        }
        let d = self.rep.adjoint_twist_matrix(&self.group.datum, delta);
        let dm = d.to_mat(&self.ring);
        // a signed permutation inverts to its transpose
        let dinv = d.to_mat(&self.ring).transpose();
        let pair = Arc::new((dm, dinv));
        lock.insert(delta.perm.clone(), pair.clone());
        pair
    }

    // --- cache plumbing used by the cells module ---

    pub(crate) fn u_table_cache(&self) -> &OnceLock<Arc<Table>> {
        &self.caches.u_table
    }
    pub(crate) fn z_tables_cache(&self) -> &Mutex<HashMap<Vec<u8>, Arc<Table>>> {
        &self.caches.z_tables
    }
    pub(crate) fn cell_tables_cache(&self) -> &Mutex<HashMap<Vec<u8>, Arc<cells::CellTable>>> {
        &self.caches.cell_tables
    }
    pub(crate) fn usplit_tables_cache(&self) -> &Mutex<HashMap<Vec<u8>, Arc<cells::CellTable>>> {
        &self.caches.usplit_tables
    }
    pub(crate) fn sub_tables_cache(
        &self,
    ) -> &Mutex<HashMap<(Vec<u8>, SubgroupKind), Arc<Table>>> {
        &self.caches.sub_tables
    }
    pub(crate) fn u_minus_cache(&self) -> &OnceLock<Arc<std::collections::HashSet<Mat>>> {
        &self.caches.u_minus
    }
    pub(crate) fn peel_plans_cache(
        &self,
    ) -> &Mutex<HashMap<Vec<u8>, Arc<Option<cells::PeelPlan>>>> {
        &self.caches.peel_plans
    }
}

#[cfg(test)]
mod tests;
