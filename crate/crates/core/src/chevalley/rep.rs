//! Faithful matrix models: the defining representation for type A (simply
//! connected) and the adjoint representation on the Chevalley basis for
//! everything else.
//!
//! Each model records, per simple index i, the divided powers e_i^k/k! and
//! f_i^k/k! as integer matrices, and the coroot pairings of the basis
//! weights. Root generators are then x_i(h) = Σ_k (e_i^k/k!) h^k over any
//! ring, which is integral by construction.

use crate::matrix::IMat;
use crate::rootdata::{DatumAutomorphism, Lattice, RootDatum, RootDataError, SignedRoot};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RepKind {
    /// The (n+1)-dimensional defining representation of type A_n, sc.
    DefiningA,
    /// The adjoint representation on the Chevalley basis, ad lattice.
    Adjoint,
}

impl RepKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            RepKind::DefiningA => "defining",
            RepKind::Adjoint => "adjoint",
        }
    }
}

/// One basis vector of the adjoint module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisItem {
    Root(SignedRoot),
    Cartan(usize),
}

#[derive(Debug, Clone)]
pub struct RepModel {
    pub kind: RepKind,
    pub dim: usize,
    /// xpow[i][k] = matrix of e_i^k / k!; xpow[i][0] = identity.
    pub xpow: Vec<Vec<IMat>>,
    /// ypow[i][k] = matrix of f_i^k / k!.
    pub ypow: Vec<Vec<IMat>>,
    /// weights[i][b] = ⟨coroot i, weight of basis vector b⟩.
    pub weights: Vec<Vec<i64>>,
    /// Adjoint only: what each basis slot carries.
    pub basis: Vec<BasisItem>,
}

fn is_type_a_chain(d: &RootDatum) -> bool {
    let n = d.rank;
    (0..n).all(|i| {
        (0..n).all(|j| {
            let want = if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            };
            d.cartan.get(i, j) == want
        })
    })
}

/// Divided powers of a nilpotent integer matrix: [I, N, N²/2!, ...] until zero.
fn divided_powers(n: &IMat) -> Vec<IMat> {
    let dim = n.n;
    let mut out = vec![IMat::identity(dim)];
    let mut power = n.clone();
    let mut fact: i64 = 1;
    let mut k: i64 = 1;
    while !power.entries.iter().all(|&e| e == 0) {
        let dp = IMat {
            n: dim,
            entries: power
                .entries
                .iter()
                .map(|&e| {
                    assert_eq!(e % fact, 0, "divided power must be integral");
                    e / fact
                })
                .collect(),
        };
        out.push(dp);
        k += 1;
        fact *= k;
        power = IMat::mul(&power, n);
        assert!(k <= 8, "unexpected nilpotency degree");
    }
    out
}

impl RepModel {
    pub fn new(datum: &RootDatum, kind: RepKind) -> Result<RepModel, RootDataError> {
        match kind {
            RepKind::DefiningA => {
                if datum.lattice != Lattice::Sc || !is_type_a_chain(datum) {
                    return Err(RootDataError::BadCartan(
                        "the defining model needs type A with the sc lattice".into(),
                    ));
                }
                Ok(Self::defining_a(datum))
            }
            RepKind::Adjoint => {
                if datum.lattice != Lattice::Ad {
                    return Err(RootDataError::BadCartan(
                        "the adjoint model needs the ad lattice".into(),
                    ));
                }
                Ok(Self::adjoint(datum))
            }
        }
    }

    /// The natural model for a datum: defining for type A sc, adjoint for ad.
    pub fn natural(datum: &RootDatum) -> Result<RepModel, RootDataError> {
        match datum.lattice {
            Lattice::Sc => Self::new(datum, RepKind::DefiningA),
            Lattice::Ad => Self::new(datum, RepKind::Adjoint),
        }
    }

    fn defining_a(datum: &RootDatum) -> RepModel {
        let n = datum.rank;
        let dim = n + 1;
        let mut xpow = Vec::with_capacity(n);
        let mut ypow = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        for i in 0..n {
            let mut e = IMat::zero(dim);
            e.set(i, i + 1, 1);
            let mut f = IMat::zero(dim);
            f.set(i + 1, i, 1);
            xpow.push(divided_powers(&e));
            ypow.push(divided_powers(&f));
            // basis vector b has weight ε_{b+1}: ⟨i, ε_b⟩ = δ_{b,i} − δ_{b,i+1}
            weights.push(
                (0..dim)
                    .map(|b| {
                        if b == i {
                            1
                        } else if b == i + 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect(),
            );
        }
        RepModel { kind: RepKind::DefiningA, dim, xpow, ypow, weights, basis: vec![] }
    }

    fn adjoint(datum: &RootDatum) -> RepModel {
        let rs = &datum.roots;
        let m = rs.num_positive();
        let r = datum.rank;
        let dim = 2 * m + r;
        // basis by descending level: e_{pos} from highest root down, then
        // the coroots, then e_{-pos} from the negative simples down
        let mut basis = Vec::with_capacity(dim);
        for b in 0..m {
            basis.push(BasisItem::Root(SignedRoot::pos(m - 1 - b)));
        }
        for i in 0..r {
            basis.push(BasisItem::Cartan(i));
        }
        for i in 0..m {
            basis.push(BasisItem::Root(SignedRoot::neg(i)));
        }
        let slot = |sr: SignedRoot| -> usize {
            if sr.neg {
                m + r + sr.idx
            } else {
                m - 1 - sr.idx
            }
        };

        // ad(e_a) for a signed simple root a
        let ad_of = |a: SignedRoot| -> IMat {
            let mut mtx = IMat::zero(dim);
            let a_coords = rs.root_coords(a);
            for (col, item) in basis.iter().enumerate() {
                match *item {
                    BasisItem::Root(c) => {
                        if c.idx == a.idx && c.neg != a.neg {
                            // [e_a, e_{-a}] = ± h_a, the coroot in the h basis
                            let sgn = if a.neg { -1 } else { 1 };
                            for (i, &ci) in rs.coroot_coords(SignedRoot::pos(a.idx)).iter().enumerate()
                            {
                                if ci != 0 {
                                    mtx.set(m + i, col, sgn * ci);
                                }
                            }
                        } else {
                            let sum: Vec<i64> = a_coords
                                .iter()
                                .zip(rs.root_coords(c).iter())
                                .map(|(x, y)| x + y)
                                .collect();
                            if let Some(d) = rs.find_root(&sum) {
                                mtx.set(slot(d), col, rs.struct_const(a, c));
                            }
                        }
                    }
                    BasisItem::Cartan(j) => {
                        // [e_a, h_j] = -⟨j, a⟩ e_a
                        let v = -rs.pair_simple_coroot(j, &a_coords);
                        if v != 0 {
                            mtx.set(slot(a), col, v);
                        }
                    }
                }
            }
            mtx
        };

        let mut xpow = Vec::with_capacity(r);
        let mut ypow = Vec::with_capacity(r);
        let mut weights = Vec::with_capacity(r);
        for i in 0..r {
            let ri = rs.simple_root_index(i);
            xpow.push(divided_powers(&ad_of(SignedRoot::pos(ri))));
            ypow.push(divided_powers(&ad_of(SignedRoot::neg(ri))));
            weights.push(
                basis
                    .iter()
                    .map(|item| match *item {
                        BasisItem::Root(c) => rs.pair_simple_coroot(i, &rs.root_coords(c)),
                        BasisItem::Cartan(_) => 0,
                    })
                    .collect(),
            );
        }
        RepModel { kind: RepKind::Adjoint, dim, xpow, ypow, weights, basis }
    }

    /// The signed permutation matrix by which a datum automorphism acts on
    /// the adjoint basis (δ(e_γ) = ±e_{δγ} with signs fixed by the
    /// extraspecial construction), or the identity behaviour holder for the
    /// defining model (handled separately via the flip involution).
    pub fn adjoint_twist_matrix(&self, datum: &RootDatum, delta: &DatumAutomorphism) -> IMat {
        assert_eq!(self.kind, RepKind::Adjoint);
        let rs = &datum.roots;
        let m = rs.num_positive();
        let r = datum.rank;
        let slot = |sr: SignedRoot| -> usize {
            if sr.neg {
                m + r + sr.idx
            } else {
                m - 1 - sr.idx
            }
        };
        // signs on positive roots, by increasing height
        let mut sign = vec![0i64; m];
        for idx in 0..m {
            if rs.heights[idx] == 1 {
                sign[idx] = 1;
                continue;
            }
            let (a1, b1) = extraspecial_pair(rs, idx);
            let da1 = delta.apply_root(rs, SignedRoot::pos(a1));
            let db1 = delta.apply_root(rs, SignedRoot::pos(b1));
            let n_orig = rs.struct_const(SignedRoot::pos(a1), SignedRoot::pos(b1));
            let n_img = rs.struct_const(da1, db1);
            debug_assert_eq!(n_img.abs(), n_orig.abs());
            sign[idx] = sign[a1] * sign[b1] * (n_img / n_orig);
        }
        let mut d = IMat::zero(self.dim);
        for idx in 0..m {
            let img = delta.apply_root(rs, SignedRoot::pos(idx));
            debug_assert!(!img.neg);
            d.set(slot(img), slot(SignedRoot::pos(idx)), sign[idx]);
            let img_neg = SignedRoot::neg(img.idx);
            d.set(slot(img_neg), slot(SignedRoot::neg(idx)), sign[idx]);
        }
        for i in 0..r {
            d.set(m + delta.perm[i], m + i, 1);
        }
        d
    }
}

/// The extraspecial pair of a non-simple positive root: the decomposition
/// γ = α + β into positive roots with minimal first index.
fn extraspecial_pair(rs: &crate::rootdata::RootSystemData, gamma: usize) -> (usize, usize) {
    let gv = &rs.positives[gamma];
    for ai in 0..rs.num_positive() {
        let av = &rs.positives[ai];
        let bv: Vec<i64> = gv.iter().zip(av).map(|(g, a)| g - a).collect();
        if let Some(b) = rs.find_root(&bv) {
            if !b.neg && ai < b.idx {
                return (ai, b.idx);
            }
        }
    }
    unreachable!("non-simple positive root has a special pair");
}
