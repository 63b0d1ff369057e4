//! Cell parametrizations and their inverses.
//!
//! Over finite rings every parametrization is inverted through lazily built
//! hash tables (the maps are bijections, so hashing is a sound total
//! inverse at this scale). Over infinite rings the defining type-A model
//! additionally supports a symbolic "peel" extractor whose plan is derived
//! once per word by symbolic computation; the two routes are cross-checked
//! in the test suite.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::matrix::Mat;
use crate::rings::{Ring, Value};
use crate::weyl::WeylElement;

use super::{ChevError, Context, GroupElement};

/// Which bijection a coordinate vector instantiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellKind {
    /// U parametrized along the fixed word of w_I (part_k empty).
    UnipotentFull,
    /// U^w·ẇ along a reduced word of w (part_n empty).
    ZCell,
    /// The full cell U·ẇ·U (both parts).
    DoubleCell,
}

/// Coordinates of a point of U, U^wẇ, or UẇU.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCoordinates {
    pub kind: CellKind,
    pub w: WeylElement,
    pub part_k: Vec<Value>,
    pub part_n: Vec<Value>,
}

/// One enumerated parametrization: coordinates in enumeration order plus a
/// matrix-keyed index.
pub struct Table {
    pub coords: Vec<Vec<Value>>,
    pub elems: Vec<GroupElement>,
    pub map: HashMap<Mat, usize>,
}

impl Table {
    pub fn len(&self) -> usize {
        self.elems.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }
    pub fn contains(&self, m: &Mat) -> bool {
        self.map.contains_key(m)
    }
    pub fn lookup(&self, m: &Mat) -> Option<(&[Value], &GroupElement)> {
        self.map.get(m).map(|&i| (self.coords[i].as_slice(), &self.elems[i]))
    }
}

/// Inverse table of a product parametrization A × B → cell.
pub struct CellTable {
    pub map: HashMap<Mat, (Vec<Value>, Vec<Value>)>,
}

/// Which subgroup of U a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SubgroupKind {
    /// U^w = U ∩ ẇU⁻ẇ⁻¹ (first l(w) coordinates of an adapted word).
    Uw,
    /// ^wU = U ∩ ẇUẇ⁻¹ (last n−l(w) coordinates of an adapted word).
    Wu,
}

/// A symbolic extraction plan: read coordinate m at entry (row, col) with a
/// sign, then strip the corresponding factor.
#[derive(Debug, Clone)]
pub struct PeelPlan {
    pub steps: Vec<(usize, usize, i8)>,
}

impl Context {
    /// All coordinate vectors of the given length, in odometer order over
    /// the ring enumeration (first coordinate slowest).
    pub fn coord_tuples(&self, len: usize) -> Result<Vec<Vec<Value>>, ChevError> {
        let elems = self.ring.enumerate()?;
        let mut out = Vec::with_capacity(elems.len().pow(len as u32));
        let mut cur = vec![0usize; len];
        loop {
            out.push(cur.iter().map(|&i| elems[i].clone()).collect());
            let mut pos = len;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                cur[pos] += 1;
                if cur[pos] < elems.len() {
                    break;
                }
                cur[pos] = 0;
            }
        }
    }

    /// The 2.6-style product Π_m x_{word_m}(h_m) ṡ_{word_m} · ẇ_I⁻¹ along an
    /// arbitrary element of 𝒳.
    pub fn param_u_along(&self, word: &[u8], coords: &[Value]) -> GroupElement {
        assert_eq!(word.len(), coords.len());
        let mut acc = self.one();
        for (m, &i) in word.iter().enumerate() {
            acc = self.mul(&acc, &self.gen_x(i as usize, &coords[m]));
            acc = self.mul(&acc, &self.gen_s(i as usize));
        }
        self.mul(&acc, &self.invert(&self.lift_word(&self.wi_word.clone())))
    }

    /// U parametrized along the fixed word of w_I.
    pub fn param_u(&self, coords: &[Value]) -> GroupElement {
        self.param_u_along(&self.wi_word.clone(), coords)
    }

    /// The z-cell product Π_m x_{word_m}(h_m) ṡ_{word_m} ∈ U^w ẇ.
    pub fn param_zw_word(&self, word: &[u8], coords: &[Value]) -> GroupElement {
        assert_eq!(word.len(), coords.len());
        let mut acc = self.one();
        for (m, &i) in word.iter().enumerate() {
            acc = self.mul(&acc, &self.gen_x(i as usize, &coords[m]));
            acc = self.mul(&acc, &self.gen_s(i as usize));
        }
        acc
    }

    /// A point of U^w (coords of length l(w)) or ^wU (length n - l(w)),
    /// through the adapted word of w.
    pub fn param_subgroup(&self, w: &WeylElement, kind: SubgroupKind, coords: &[Value]) -> GroupElement {
        let adapted = self.group.extend_word_to_longest(w);
        let n = adapted.len();
        let k = w.length;
        let zero = self.ring.zero();
        let mut full = vec![zero; n];
        match kind {
            SubgroupKind::Uw => {
                assert_eq!(coords.len(), k);
                full[..k].clone_from_slice(coords);
            }
            SubgroupKind::Wu => {
                assert_eq!(coords.len(), n - k);
                full[k..].clone_from_slice(coords);
            }
        }
        self.param_u_along(&adapted, &full)
    }

    /// The full-cell point z(part_k)·u(part_n) of UẇU.
    pub fn param_cell(&self, w: &WeylElement, part_k: &[Value], part_n: &[Value]) -> GroupElement {
        let z = self.param_zw_word(&w.word.clone(), part_k);
        let u = self.param_u(part_n);
        self.mul(&z, &u)
    }

    /// Dispatch on a [`CellCoordinates`] value.
    pub fn parametrize(&self, c: &CellCoordinates) -> Result<GroupElement, ChevError> {
        match c.kind {
            CellKind::UnipotentFull => {
                let n = self.wi_word.len();
                if c.part_k.len() != 0 || c.part_n.len() != n {
                    return Err(ChevError::CoordinateCount(c.part_n.len(), n));
                }
                Ok(self.param_u(&c.part_n))
            }
            CellKind::ZCell => {
                if c.part_k.len() != c.w.length || !c.part_n.is_empty() {
                    return Err(ChevError::CoordinateCount(c.part_k.len(), c.w.length));
                }
                Ok(self.param_zw_word(&c.w.word.clone(), &c.part_k))
            }
            CellKind::DoubleCell => {
                let n = self.wi_word.len();
                if c.part_k.len() != c.w.length || c.part_n.len() != n {
                    return Err(ChevError::CoordinateCount(c.part_k.len() + c.part_n.len(), c.w.length + n));
                }
                Ok(self.param_cell(&c.w, &c.part_k, &c.part_n))
            }
        }
    }

    // ---- lazily built tables (finite rings) ----

    pub fn u_table(&self) -> Result<Arc<Table>, ChevError> {
        if let Some(t) = self.u_table_cache().get() {
            return Ok(t.clone());
        }
        let n = self.wi_word.len();
        let coords = self.coord_tuples(n)?;
        let mut elems = Vec::with_capacity(coords.len());
        let mut map = HashMap::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            let g = self.param_u(c);
            if map.insert(g.mat.clone(), i).is_some() {
                return Err(ChevError::Inconsistency("U parametrization collided".into()));
            }
            elems.push(g);
        }
        let t = Arc::new(Table { coords, elems, map });
        let _ = self.u_table_cache().set(t.clone());
        Ok(t)
    }

    pub fn z_table(&self, word: &[u8]) -> Result<Arc<Table>, ChevError> {
        if let Some(t) = self.z_tables_cache().lock().unwrap().get(word) {
            return Ok(t.clone());
        }
        let coords = self.coord_tuples(word.len())?;
        let mut elems = Vec::with_capacity(coords.len());
        let mut map = HashMap::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            let g = self.param_zw_word(word, c);
            if map.insert(g.mat.clone(), i).is_some() {
                return Err(ChevError::Inconsistency("z-cell parametrization collided".into()));
            }
            elems.push(g);
        }
        let t = Arc::new(Table { coords, elems, map });
        self.z_tables_cache().lock().unwrap().insert(word.to_vec(), t.clone());
        Ok(t)
    }

    pub fn sub_table(&self, w: &WeylElement, kind: SubgroupKind) -> Result<Arc<Table>, ChevError> {
        let key = (w.word.clone(), kind);
        if let Some(t) = self.sub_tables_cache().lock().unwrap().get(&key) {
            return Ok(t.clone());
        }
        let n = self.wi_word.len();
        let len = match kind {
            SubgroupKind::Uw => w.length,
            SubgroupKind::Wu => n - w.length,
        };
        let coords = self.coord_tuples(len)?;
        let mut elems = Vec::with_capacity(coords.len());
        let mut map = HashMap::with_capacity(coords.len());
        for (i, c) in coords.iter().enumerate() {
            let g = self.param_subgroup(w, kind, c);
            if map.insert(g.mat.clone(), i).is_some() {
                return Err(ChevError::Inconsistency("subgroup parametrization collided".into()));
            }
            elems.push(g);
        }
        let t = Arc::new(Table { coords, elems, map });
        self.sub_tables_cache().lock().unwrap().insert(key, t.clone());
        Ok(t)
    }

    /// U⁻ = ẇ_I U ẇ_I⁻¹ as a membership set.
    pub fn u_minus_set(&self) -> Result<Arc<HashSet<Mat>>, ChevError> {
        if let Some(s) = self.u_minus_cache().get() {
            return Ok(s.clone());
        }
        let u = self.u_table()?;
        let wi = self.lift_word(&self.wi_word.clone());
        let set: HashSet<Mat> = u
            .elems
            .iter()
            .map(|g| self.mul(&self.mul(&wi, g), &self.invert(&wi)).mat)
            .collect();
        let s = Arc::new(set);
        let _ = self.u_minus_cache().set(s.clone());
        Ok(s)
    }

    /// Product table for U^wẇ × U → UẇU, keyed by the z-part word.
    fn cell_table(&self, word: &[u8]) -> Result<Arc<CellTable>, ChevError> {
        if let Some(t) = self.cell_tables_cache().lock().unwrap().get(word) {
            return Ok(t.clone());
        }
        let z = self.z_table(word)?;
        let u = self.u_table()?;
        let mut map = HashMap::with_capacity(z.len() * u.len());
        for (zi, ze) in z.elems.iter().enumerate() {
            for (ui, ue) in u.elems.iter().enumerate() {
                let m = Mat::mul(&self.ring, &ze.mat, &ue.mat);
                if map.insert(m, (z.coords[zi].clone(), u.coords[ui].clone())).is_some() {
                    return Err(ChevError::Inconsistency("cell product collided".into()));
                }
            }
        }
        let t = Arc::new(CellTable { map });
        self.cell_tables_cache().lock().unwrap().insert(word.to_vec(), t.clone());
        Ok(t)
    }

    /// Product table for U^w × ^wU → U.
    fn usplit_table(&self, w: &WeylElement) -> Result<Arc<CellTable>, ChevError> {
        if let Some(t) = self.usplit_tables_cache().lock().unwrap().get(&w.word) {
            return Ok(t.clone());
        }
        let a = self.sub_table(w, SubgroupKind::Uw)?;
        let b = self.sub_table(w, SubgroupKind::Wu)?;
        let mut map = HashMap::with_capacity(a.len() * b.len());
        for (ai, ae) in a.elems.iter().enumerate() {
            for (bi, be) in b.elems.iter().enumerate() {
                let m = Mat::mul(&self.ring, &ae.mat, &be.mat);
                if map.insert(m, (a.coords[ai].clone(), b.coords[bi].clone())).is_some() {
                    return Err(ChevError::Inconsistency("U-split product collided".into()));
                }
            }
        }
        let t = Arc::new(CellTable { map });
        self.usplit_tables_cache().lock().unwrap().insert(w.word.clone(), t.clone());
        Ok(t)
    }

    // ---- extraction ----

    /// Coordinates of u ∈ U under the fixed-word parametrization.
    pub fn u_coords(&self, g: &GroupElement) -> Result<Vec<Value>, ChevError> {
        if self.ring.is_finite() {
            let t = self.u_table()?;
            return t
                .lookup(&g.mat)
                .map(|(c, _)| c.to_vec())
                .ok_or_else(|| ChevError::Membership("U".into()));
        }
        // symbolic: u·ẇ_I is a z-cell point along the w_I word
        let wi = self.lift_word(&self.wi_word.clone());
        let shifted = self.mul(g, &wi);
        let (coords, rem) = self.peel_zw(&self.wi_word.clone(), &shifted)?;
        if !rem.mat.is_identity(&self.ring) {
            return Err(ChevError::Membership("U".into()));
        }
        Ok(coords)
    }

    /// Coordinates of z ∈ U^wẇ along the given word.
    pub fn zw_coords(&self, word: &[u8], g: &GroupElement) -> Result<Vec<Value>, ChevError> {
        if self.ring.is_finite() {
            let t = self.z_table(word)?;
            return t
                .lookup(&g.mat)
                .map(|(c, _)| c.to_vec())
                .ok_or_else(|| ChevError::Membership("U^w·ẇ".into()));
        }
        let (coords, rem) = self.peel_zw(word, g)?;
        if !rem.mat.is_identity(&self.ring) {
            return Err(ChevError::Membership("U^w·ẇ".into()));
        }
        Ok(coords)
    }

    /// The unique 2.7-style split of g ∈ UẇU into (z, u) with z ∈ U^wẇ
    /// parametrized along `word`, u ∈ U. Returns (z, z-coords, u, u-coords).
    pub fn split_cell_word(
        &self,
        word: &[u8],
        g: &GroupElement,
    ) -> Result<(GroupElement, Vec<Value>, GroupElement, Vec<Value>), ChevError> {
        if self.ring.is_finite() {
            let t = self.cell_table(word)?;
            let (zc, uc) = t
                .map
                .get(&g.mat)
                .cloned()
                .ok_or_else(|| ChevError::Membership("U·ẇ·U".into()))?;
            let z = self.param_zw_word(word, &zc);
            let u = self.param_u(&uc);
            return Ok((z, zc, u, uc));
        }
        let (zc, rem) = self.peel_zw(word, g)?;
        let uc = self.u_coords(&rem)?;
        let z = self.param_zw_word(word, &zc);
        Ok((z, zc, rem, uc))
    }

    pub fn split_cell(
        &self,
        w: &WeylElement,
        g: &GroupElement,
    ) -> Result<(GroupElement, Vec<Value>, GroupElement, Vec<Value>), ChevError> {
        self.split_cell_word(&w.word.clone(), g)
    }

    /// The unique 2.7(c) split of u ∈ U into U^w × ^wU.
    pub fn split_u(
        &self,
        w: &WeylElement,
        g: &GroupElement,
    ) -> Result<(GroupElement, Vec<Value>, GroupElement, Vec<Value>), ChevError> {
        let t = self.usplit_table(w)?;
        let (ac, bc) =
            t.map.get(&g.mat).cloned().ok_or_else(|| ChevError::Membership("U".into()))?;
        let a = self.param_subgroup(w, SubgroupKind::Uw, &ac);
        let b = self.param_subgroup(w, SubgroupKind::Wu, &bc);
        Ok((a, ac, b, bc))
    }

    /// Full-cell coordinate extraction (both parts).
    pub fn decompose_cell(
        &self,
        w: &WeylElement,
        g: &GroupElement,
    ) -> Result<CellCoordinates, ChevError> {
        let (_, zc, _, uc) = self.split_cell(w, g)?;
        Ok(CellCoordinates { kind: CellKind::DoubleCell, w: w.clone(), part_k: zc, part_n: uc })
    }

    pub fn in_u(&self, g: &GroupElement) -> Result<bool, ChevError> {
        if self.ring.is_finite() {
            Ok(self.u_table()?.contains(&g.mat))
        } else {
            Ok(self.u_coords(g).is_ok())
        }
    }

    pub fn in_u_minus(&self, g: &GroupElement) -> Result<bool, ChevError> {
        Ok(self.u_minus_set()?.contains(&g.mat))
    }

    // ---- the symbolic peel extractor ----

    /// Build (or fetch) the peel plan for a word: a sequence of entry
    /// positions from which the coordinates of Π x(h_m)ṡ can be read off.
    fn peel_plan(&self, word: &[u8]) -> Arc<Option<PeelPlan>> {
        if let Some(p) = self.peel_plans_cache().lock().unwrap().get(word) {
            return p.clone();
        }
        let plan = build_peel_plan(self, word);
        let p = Arc::new(plan);
        self.peel_plans_cache().lock().unwrap().insert(word.to_vec(), p.clone());
        p
    }

    /// Extract the coordinates of g = Π x(h_m)ṡ_{word_m} · r, returning the
    /// coordinates and the remainder r.
    pub fn peel_zw(
        &self,
        word: &[u8],
        g: &GroupElement,
    ) -> Result<(Vec<Value>, GroupElement), ChevError> {
        let plan = self.peel_plan(word);
        let Some(plan) = plan.as_ref() else {
            return Err(ChevError::NoExtractor(format!(
                "no peel plan for word {:?} in the {} model",
                word,
                self.rep.kind.as_str()
            )));
        };
        let mut cur = g.clone();
        let mut coords = Vec::with_capacity(word.len());
        for (m, &(r, c, sgn)) in plan.steps.iter().enumerate() {
            let raw = cur.mat.get(r, c).clone();
            let h = if sgn < 0 { self.ring.neg(&raw) } else { raw };
            let factor = self.mul(&self.gen_x(word[m] as usize, &h), &self.gen_s(word[m] as usize));
            cur = self.mul(&self.invert(&factor), &cur);
            coords.push(h);
        }
        Ok((coords, cur))
    }
}

/// Derive the peel plan by symbolic computation over ℤ[H1..Hk]: multiply
/// out the parametrization with variable coordinates and look, step by
/// step, for an entry that is exactly ±H_m.
fn build_peel_plan(ctx: &Context, word: &[u8]) -> Option<PeelPlan> {
    let k = word.len();
    if k == 0 {
        return Some(PeelPlan { steps: vec![] });
    }
    let vars: Vec<String> = (1..=k).map(|i| format!("H{i}")).collect();
    let ring = Ring::PolynomialsOverZ { vars: Arc::new(vars) };
    let sym = Context::new(ctx.group.clone(), ctx.rep.clone(), ring.clone());
    let hs: Vec<Value> = (0..k).map(|i| ring.poly_var(i)).collect();
    let mut p = sym.param_zw_word(word, &hs);
    let mut steps = Vec::with_capacity(k);
    for m in 0..k {
        let mut found = None;
        'scan: for r in 0..sym.rep.dim {
            for c in 0..sym.rep.dim {
                if let Value::Poly(q) = p.mat.get(r, c) {
                    if let Some((vi, s)) = q.as_signed_var() {
                        if vi == m {
                            found = Some((r, c, s));
                            break 'scan;
                        }
                    }
                }
            }
        }
        let (r, c, s) = found?;
        steps.push((r, c, s));
        let factor =
            sym.mul(&sym.gen_x(word[m] as usize, &hs[m]), &sym.gen_s(word[m] as usize));
        p = sym.mul(&sym.invert(&factor), &p);
    }
    if !p.mat.is_identity(&ring) {
        return None;
    }
    Some(PeelPlan { steps })
}
