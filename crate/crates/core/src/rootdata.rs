//! Root data: Cartan matrices, root systems, lattices, diagram
//! automorphisms, and Chevalley structure constants.
//!
//! Roots are kept in simple-root coordinates. Positive roots are ordered by
//! height then lexicographically; structure-constant signs follow the
//! extraspecial-pair convention for that order, with all remaining constants
//! produced by the antisymmetry/opposition rules and the two classical
//! identities for root triples and quadruples summing to zero.

use std::collections::HashMap;

use thiserror::Error;

use crate::matrix::IMat;

#[derive(Debug, Error)]
pub enum RootDataError {
    #[error("unknown Cartan type {0:?}")]
    BadType(String),
    #[error("rank {0} exceeds the supported ceiling {1}")]
    RankCeiling(usize, usize),
    #[error("root count {0} exceeds the supported ceiling {1}")]
    RootCeiling(usize, usize),
    #[error("invalid Cartan matrix: {0}")]
    BadCartan(String),
    #[error("the form matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("the datum is not semisimple")]
    NotSemisimple,
    #[error("permutation does not preserve the Cartan data")]
    BadAutomorphism,
}

pub const RANK_CEILING: usize = 6;
pub const ROOT_CEILING: usize = 72;

/// Which character lattice X was chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Lattice {
    /// X = weight lattice (simply connected form).
    Sc,
    /// X = root lattice (adjoint form).
    Ad,
}

impl Lattice {
    pub fn parse(s: &str) -> Option<Lattice> {
        match s {
            "sc" => Some(Lattice::Sc),
            "ad" => Some(Lattice::Ad),
            _ => None,
        }
    }
    pub fn as_str(&self) -> &'static str {
        match self {
            Lattice::Sc => "sc",
            Lattice::Ad => "ad",
        }
    }
}

/// A signed root: index into the positive-root list plus a sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SignedRoot {
    pub idx: usize,
    pub neg: bool,
}

impl SignedRoot {
    pub fn pos(idx: usize) -> Self {
        SignedRoot { idx, neg: false }
    }
    pub fn neg(idx: usize) -> Self {
        SignedRoot { idx, neg: true }
    }
    pub fn opposite(self) -> Self {
        SignedRoot { idx: self.idx, neg: !self.neg }
    }
}

/// The root system attached to a Cartan matrix: positive roots, heights,
/// and Chevalley structure constants.
#[derive(Debug, Clone)]
pub struct RootSystemData {
    pub rank: usize,
    pub cartan: IMat,
    /// d_i a_{ij}, the W-invariant form on the root lattice.
    pub form: IMat,
    /// Positive roots in simple-root coordinates, sorted by (height, lex).
    pub positives: Vec<Vec<i64>>,
    pub heights: Vec<i64>,
    index: HashMap<Vec<i64>, usize>,
    /// Structure constants N(a, b) for ordered pairs of positive roots
    /// with a + b a root; both orders stored, antisymmetric.
    n_pos: HashMap<(usize, usize), i64>,
}

impl RootSystemData {
    pub fn num_positive(&self) -> usize {
        self.positives.len()
    }

    /// Locate a vector in simple-root coordinates as a signed root.
    pub fn find_root(&self, v: &[i64]) -> Option<SignedRoot> {
        if let Some(&i) = self.index.get(v) {
            return Some(SignedRoot::pos(i));
        }
        let neg: Vec<i64> = v.iter().map(|x| -x).collect();
        self.index.get(&neg).map(|&i| SignedRoot::neg(i))
    }

    pub fn root_coords(&self, r: SignedRoot) -> Vec<i64> {
        let v = &self.positives[r.idx];
        if r.neg {
            v.iter().map(|x| -x).collect()
        } else {
            v.clone()
        }
    }

    /// (α, α) under the invariant form, for the underlying positive root.
    pub fn norm2(&self, idx: usize) -> i64 {
        let v = &self.positives[idx];
        let mut s = 0;
        for i in 0..self.rank {
            for j in 0..self.rank {
                s += v[i] * self.form.get(i, j) * v[j];
            }
        }
        s
    }

    /// ⟨α_i∨, β⟩ for a root β in simple-root coordinates.
    pub fn pair_simple_coroot(&self, i: usize, beta: &[i64]) -> i64 {
        (0..self.rank).map(|j| self.cartan.get(i, j) * beta[j]).sum()
    }

    /// Index of the simple root α_i in the positive-root list.
    pub fn simple_root_index(&self, i: usize) -> usize {
        let v: Vec<i64> = (0..self.rank).map(|j| if j == i { 1 } else { 0 }).collect();
        *self.index.get(&v).expect("simple roots are positive roots")
    }

    /// Coefficients of the coroot β∨ in the simple coroots.
    pub fn coroot_coords(&self, r: SignedRoot) -> Vec<i64> {
        let v = self.root_coords(r);
        let n2 = self.norm2(r.idx);
        (0..self.rank)
            .map(|i| {
                let num = v[i] * self.form.get(i, i);
                debug_assert_eq!(num % n2, 0, "coroot coefficients must be integral");
                num / n2
            })
            .collect()
    }

    /// Largest p >= 0 with b - p a a root (the down-string length). `a`, `b`
    /// are signed roots with b != ±a.
    pub fn string_down(&self, a: SignedRoot, b: SignedRoot) -> i64 {
        let av = self.root_coords(a);
        let mut v = self.root_coords(b);
        let mut p = 0;
        loop {
            for i in 0..self.rank {
                v[i] -= av[i];
            }
            if self.find_root(&v).is_none() {
                return p;
            }
            p += 1;
        }
    }

    /// Chevalley structure constant N(a, b) with [e_a, e_b] = N(a,b) e_{a+b},
    /// for signed roots with a + b != 0. Returns 0 when a + b is not a root.
    pub fn struct_const(&self, a: SignedRoot, b: SignedRoot) -> i64 {
        assert!(
            !(a.idx == b.idx && a.neg != b.neg),
            "opposite roots bracket to a coroot, not a root vector"
        );
        let sum: Vec<i64> = self
            .root_coords(a)
            .iter()
            .zip(self.root_coords(b).iter())
            .map(|(x, y)| x + y)
            .collect();
        if self.find_root(&sum).is_none() {
            return 0;
        }
        match (a.neg, b.neg) {
            (false, false) => *self.n_pos.get(&(a.idx, b.idx)).expect("positive pair constant"),
            (true, true) => -self.struct_const(a.opposite(), b.opposite()),
            (false, true) => self.mixed_const(a.idx, b.idx),
            (true, false) => -self.struct_const(b, a),
        }
    }

    /// N(α, -β) for distinct positive roots α, β with α - β a root, via the
    /// triple identity N(x,y)/(z,z) = N(y,z)/(x,x) = N(z,x)/(y,y) for
    /// x + y + z = 0.
    fn mixed_const(&self, ai: usize, bi: usize) -> i64 {
        let alpha = &self.positives[ai];
        let beta = &self.positives[bi];
        let diff: Vec<i64> = beta.iter().zip(alpha).map(|(b, a)| b - a).collect();
        match self.find_root(&diff) {
            None => 0,
            Some(z) if !z.neg => {
                // z = β - α positive: N(α,-β) = (z,z)/(β,β) · N(z, α)
                let nzx = *self.n_pos.get(&(z.idx, ai)).expect("positive pair constant");
                exact_scale(nzx, self.norm2(z.idx), self.norm2(bi))
            }
            Some(z) => {
                // z = β - α negative, α - β = -z positive:
                // N(α,-β) = (z,z)/(α,α) · N(-β, z) and N(-β,z) = -N(β, -z... )
                let d = z.idx; // index of α - β
                let nyz = -*self.n_pos.get(&(bi, d)).expect("positive pair constant");
                exact_scale(nyz, self.norm2(d), self.norm2(ai))
            }
        }
    }
}

fn exact_scale(n: i64, num: i64, den: i64) -> i64 {
    let v = n * num;
    debug_assert_eq!(v % den, 0, "structure-constant scaling must be exact");
    v / den
}

fn grlex_root(a: &(i64, Vec<i64>), b: &(i64, Vec<i64>)) -> std::cmp::Ordering {
    a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1))
}

/// Enumerate positive roots and compute structure constants for a valid
/// Cartan matrix.
pub fn build_root_system(cartan: &IMat, form: &IMat) -> Result<RootSystemData, RootDataError> {
    let rank = cartan.n;
    // closure of the simple roots under the simple reflections
    let mut seen: HashMap<Vec<i64>, ()> = HashMap::new();
    let mut queue: Vec<Vec<i64>> = (0..rank)
        .map(|i| (0..rank).map(|j| if i == j { 1 } else { 0 }).collect())
        .collect();
    for q in &queue {
        seen.insert(q.clone(), ());
    }
    while let Some(v) = queue.pop() {
        for i in 0..rank {
            let p: i64 = (0..rank).map(|j| cartan.get(i, j) * v[j]).sum();
            let mut w = v.clone();
            w[i] -= p;
            if !seen.contains_key(&w) {
                if seen.len() >= ROOT_CEILING {
                    return Err(RootDataError::RootCeiling(seen.len() + 1, ROOT_CEILING));
                }
                seen.insert(w.clone(), ());
                queue.push(w);
            }
        }
    }

    let mut tagged: Vec<(i64, Vec<i64>)> = seen
        .keys()
        .filter(|v| v.iter().all(|&x| x >= 0))
        .map(|v| (v.iter().sum::<i64>(), v.clone()))
        .collect();
    tagged.sort_by(grlex_root);
    let positives: Vec<Vec<i64>> = tagged.iter().map(|(_, v)| v.clone()).collect();
    let heights: Vec<i64> = tagged.iter().map(|(h, _)| *h).collect();
    let index: HashMap<Vec<i64>, usize> =
        positives.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();

    let mut rs = RootSystemData {
        rank,
        cartan: cartan.clone(),
        form: form.clone(),
        positives,
        heights,
        index,
        n_pos: HashMap::new(),
    };

    // structure constants, processing sums by increasing (height, lex)
    for gi in 0..rs.positives.len() {
        if rs.heights[gi] == 1 {
            continue;
        }
        let gamma = rs.positives[gi].clone();
        // all decompositions γ = α + β into positive roots with idx(α) < idx(β)
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for ai in 0..rs.positives.len() {
            let alpha = &rs.positives[ai];
            let beta: Vec<i64> = gamma.iter().zip(alpha).map(|(g, a)| g - a).collect();
            if let Some(&bi) = rs.index.get(&beta) {
                if ai < bi {
                    pairs.push((ai, bi));
                }
            }
        }
        pairs.sort();
        let Some(&(a1, b1)) = pairs.first() else { continue };
        // extraspecial pair: N = p + 1 with the positive sign
        let p = rs.string_down(SignedRoot::pos(a1), SignedRoot::pos(b1));
        let n0 = p + 1;
        rs.n_pos.insert((a1, b1), n0);
        rs.n_pos.insert((b1, a1), -n0);
        let denom = {
            // N(-γ, α₁) = (β₁,β₁)/(γ,γ) · N(α₁,β₁), nonzero
            exact_scale(n0, rs.norm2(b1), rs.norm2(gi))
        };
        for &(ai, bi) in pairs.iter().skip(1) {
            // Jacobi identity on (e_{α₁}, e_{-α}, e_{-β}), all brackets
            // landing in the e_{-β₁} line:
            //   N(α₁,-α) N(α₁-α,-β) - N(α,β) N(-γ,α₁) + N(-β,α₁) N(α₁-β,-α) = 0
            let sa = SignedRoot::pos(ai);
            let sb = SignedRoot::pos(bi);
            let sa1 = SignedRoot::pos(a1);
            let t1 = {
                let n_a1_ma = rs.struct_const(sa1, sa.opposite());
                if n_a1_ma == 0 {
                    0
                } else {
                    let d: Vec<i64> = rs.positives[a1]
                        .iter()
                        .zip(&rs.positives[ai])
                        .map(|(x, y)| x - y)
                        .collect();
                    let dr = rs.find_root(&d).expect("α₁-α is a root when N ≠ 0");
                    n_a1_ma * rs.struct_const(dr, sb.opposite())
                }
            };
            let t3 = {
                let n_mb_a1 = -rs.struct_const(sa1, sb.opposite());
                if n_mb_a1 == 0 {
                    0
                } else {
                    let d: Vec<i64> = rs.positives[a1]
                        .iter()
                        .zip(&rs.positives[bi])
                        .map(|(x, y)| x - y)
                        .collect();
                    let dr = rs.find_root(&d).expect("α₁-β is a root when N ≠ 0");
                    n_mb_a1 * rs.struct_const(dr, sa.opposite())
                }
            };
            let num = t1 + t3;
            debug_assert_eq!(num % denom, 0, "non-extraspecial constant must be integral");
            let n = num / denom;
            let pexp = rs.string_down(SignedRoot::pos(ai), SignedRoot::pos(bi)) + 1;
            assert_eq!(n.abs(), pexp, "|N| must equal p+1 for {ai},{bi}");
            rs.n_pos.insert((ai, bi), n);
            rs.n_pos.insert((bi, ai), -n);
        }
    }
    Ok(rs)
}

/// The root datum: lattices, pairing, simple (co)roots, reflection
/// matrices, and the attached root system.
#[derive(Debug, Clone)]
pub struct RootDatum {
    pub label: String,
    pub lattice: Lattice,
    pub rank: usize,
    pub cartan: IMat,
    /// Minimal positive symmetrizers d_i with d_i a_{ij} symmetric.
    pub sym: Vec<i64>,
    /// The form i·j = d_i a_{ij}.
    pub form: IMat,
    /// ⟨i, e_j⟩ for the chosen basis of X.
    pub pairing: IMat,
    /// Coordinates of the simple roots in the X basis (column i = α_i).
    pub simple_roots_x: IMat,
    /// Coordinates of the simple coroots in the Y basis.
    pub simple_coroots_y: IMat,
    /// Simple reflections acting on X.
    pub refl: Vec<IMat>,
    pub roots: RootSystemData,
    /// X-coordinates of each signed root, for sign lookups.
    root_x: HashMap<Vec<i64>, SignedRoot>,
}

fn cartan_for_type(label: &str) -> Result<IMat, RootDataError> {
    let mut blocks: Vec<IMat> = Vec::new();
    for part in label.split('x') {
        let part = part.trim();
        if part.len() < 2 {
            return Err(RootDataError::BadType(label.into()));
        }
        let (fam, n) = part.split_at(1);
        let n: usize = n.parse().map_err(|_| RootDataError::BadType(label.into()))?;
        let chain = |n: usize| {
            let mut c = IMat::zero(n);
            for i in 0..n {
                c.set(i, i, 2);
                if i + 1 < n {
                    c.set(i, i + 1, -1);
                    c.set(i + 1, i, -1);
                }
            }
            c
        };
        let c = match (fam, n) {
            ("A", n) if n >= 1 => chain(n),
            ("B", n) if n >= 2 => {
                let mut c = chain(n);
                c.set(n - 1, n - 2, -2);
                c
            }
            ("C", n) if n >= 3 => {
                let mut c = chain(n);
                c.set(n - 2, n - 1, -2);
                c
            }
            ("D", n) if n >= 4 => {
                let c = chain(n - 1);
                let mut d = IMat::zero(n);
                for i in 0..n - 1 {
                    for j in 0..n - 1 {
                        d.set(i, j, c.get(i, j));
                    }
                }
                d.set(n - 1, n - 1, 2);
                d.set(n - 3, n - 1, -1);
                d.set(n - 1, n - 3, -1);
                d
            }
            ("E", 6) => {
                // Bourbaki numbering: chain 1-3-4-5-6 with 2 attached to 4
                let mut d = IMat::zero(6);
                for i in 0..6 {
                    d.set(i, i, 2);
                }
                for &(i, j) in &[(0usize, 2usize), (2, 3), (3, 4), (4, 5), (1, 3)] {
                    d.set(i, j, -1);
                    d.set(j, i, -1);
                }
                d
            }
            ("F", 4) => {
                let mut c = chain(4);
                c.set(2, 1, -2);
                c.set(1, 2, -1);
                c
            }
            ("G", 2) => IMat::from_rows(vec![vec![2, -1], vec![-3, 2]]),
            _ => return Err(RootDataError::BadType(label.into())),
        };
        blocks.push(c);
    }
    let rank: usize = blocks.iter().map(|b| b.n).sum();
    let mut c = IMat::zero(rank);
    let mut off = 0;
    for b in &blocks {
        for i in 0..b.n {
            for j in 0..b.n {
                c.set(off + i, off + j, b.get(i, j));
            }
        }
        off += b.n;
    }
    Ok(c)
}

fn validate_cartan(c: &IMat) -> Result<(), RootDataError> {
    let n = c.n;
    for i in 0..n {
        if c.get(i, i) != 2 {
            return Err(RootDataError::BadCartan(format!("diagonal entry ({i},{i}) is not 2")));
        }
        for j in 0..n {
            if i != j {
                if c.get(i, j) > 0 {
                    return Err(RootDataError::BadCartan(format!(
                        "off-diagonal entry ({i},{j}) must be non-positive"
                    )));
                }
                if (c.get(i, j) == 0) != (c.get(j, i) == 0) {
                    return Err(RootDataError::BadCartan(format!(
                        "zero pattern not symmetric at ({i},{j})"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Minimal positive integer symmetrizers for a valid Cartan matrix.
fn symmetrizers(c: &IMat) -> Result<Vec<i64>, RootDataError> {
    let n = c.n;
    // rational assignment d_j = d_i a_ij / a_ji along the diagram, then a
    // minimal common integer scaling
    let mut num = vec![0i64; n];
    let mut den = vec![0i64; n];
    for start in 0..n {
        if den[start] != 0 {
            continue;
        }
        num[start] = 1;
        den[start] = 1;
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if i != j && c.get(i, j) != 0 && den[j] == 0 {
                    let mut nj = num[i] * c.get(i, j);
                    let mut dj = den[i] * c.get(j, i);
                    if dj < 0 {
                        nj = -nj;
                        dj = -dj;
                    }
                    if nj <= 0 || dj == 0 {
                        return Err(RootDataError::BadCartan("not symmetrizable".into()));
                    }
                    let g = gcd(nj, dj);
                    num[j] = nj / g;
                    den[j] = dj / g;
                    stack.push(j);
                }
            }
        }
    }
    let mut lcm_den = 1i64;
    for &d in &den {
        lcm_den = lcm_den / gcd(lcm_den, d) * d;
    }
    let mut d: Vec<i64> = (0..n).map(|i| num[i] * (lcm_den / den[i])).collect();
    let mut g = 0;
    for &x in &d {
        g = gcd(g, x);
    }
    for x in &mut d {
        *x /= g;
    }
    for i in 0..n {
        for j in 0..n {
            if d[i] * c.get(i, j) != d[j] * c.get(j, i) {
                return Err(RootDataError::BadCartan("not symmetrizable".into()));
            }
        }
    }
    Ok(d)
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn positive_definite(m: &IMat) -> bool {
    // leading principal minors all positive
    for k in 1..=m.n {
        let mut sub = IMat::zero(k);
        for i in 0..k {
            for j in 0..k {
                sub.set(i, j, m.get(i, j));
            }
        }
        if sub.det() <= 0 {
            return false;
        }
    }
    true
}

impl RootDatum {
    /// Build a datum from a Cartan-type label (e.g. "A2", "B3", "A1xA1").
    pub fn from_type(label: &str, lattice: Lattice) -> Result<RootDatum, RootDataError> {
        let cartan = cartan_for_type(label)?;
        Self::from_cartan_labelled(label.to_string(), cartan, lattice)
    }

    /// Build a datum from an explicit Cartan matrix.
    pub fn from_cartan(cartan: IMat, lattice: Lattice) -> Result<RootDatum, RootDataError> {
        Self::from_cartan_labelled("custom".into(), cartan, lattice)
    }

    fn from_cartan_labelled(
        label: String,
        cartan: IMat,
        lattice: Lattice,
    ) -> Result<RootDatum, RootDataError> {
        let rank = cartan.n;
        if rank > RANK_CEILING {
            return Err(RootDataError::RankCeiling(rank, RANK_CEILING));
        }
        validate_cartan(&cartan)?;
        let sym = symmetrizers(&cartan)?;
        let mut form = IMat::zero(rank);
        for i in 0..rank {
            for j in 0..rank {
                form.set(i, j, sym[i] * cartan.get(i, j));
            }
        }
        for i in 0..rank {
            let ii = form.get(i, i);
            if ii <= 0 || ii % 2 != 0 {
                return Err(RootDataError::BadCartan("i·i must be a positive even integer".into()));
            }
        }
        if !positive_definite(&form) {
            return Err(RootDataError::NotPositiveDefinite);
        }
        let roots = build_root_system(&cartan, &form)?;

        // X basis: fundamental weights (sc) or simple roots (ad)
        let (pairing, simple_roots_x, simple_coroots_y) = match lattice {
            Lattice::Sc => {
                // ⟨i, ω_j⟩ = δ_ij; α_j = Σ_i a_ij ω_i; coroot_i = e_i in Y
                let mut srx = IMat::zero(rank);
                for i in 0..rank {
                    for j in 0..rank {
                        srx.set(i, j, cartan.get(i, j));
                    }
                }
                (IMat::identity(rank), srx, IMat::identity(rank))
            }
            Lattice::Ad => {
                // X basis = simple roots: ⟨i, α_j⟩ = a_ij; coroot_i has
                // coordinates (a_i1, ..., a_ir) in the dual basis
                (cartan.clone(), IMat::identity(rank), cartan.clone())
            }
        };
        // semisimplicity: the simple roots span a finite-index subgroup of X
        if simple_roots_x.det() == 0 {
            return Err(RootDataError::NotSemisimple);
        }

        // simple reflections on X: x ↦ x − ⟨i, x⟩ α_i
        let mut refl = Vec::with_capacity(rank);
        for i in 0..rank {
            let mut m = IMat::identity(rank);
            for j in 0..rank {
                for b in 0..rank {
                    let v = m.get(b, j) - pairing.get(i, j) * simple_roots_x.get(b, i);
                    m.set(b, j, v);
                }
            }
            refl.push(m);
        }

        // X coordinates of all signed roots
        let mut root_x = HashMap::new();
        for (idx, rv) in roots.positives.iter().enumerate() {
            let mut x = vec![0i64; rank];
            for (j, &k) in rv.iter().enumerate() {
                for b in 0..rank {
                    x[b] += k * simple_roots_x.get(b, j);
                }
            }
            let nx: Vec<i64> = x.iter().map(|v| -v).collect();
            root_x.insert(x, SignedRoot::pos(idx));
            root_x.insert(nx, SignedRoot::neg(idx));
        }

        Ok(RootDatum {
            label,
            lattice,
            rank,
            cartan,
            sym,
            form,
            pairing,
            simple_roots_x,
            simple_coroots_y,
            refl,
            roots,
            root_x,
        })
    }

    /// X-coordinates of the simple root α_i.
    pub fn simple_root_x(&self, i: usize) -> Vec<i64> {
        (0..self.rank).map(|b| self.simple_roots_x.get(b, i)).collect()
    }

    /// Identify a vector of X as a signed root, if it is one.
    pub fn classify_root_x(&self, v: &[i64]) -> Option<SignedRoot> {
        self.root_x.get(v).copied()
    }

    /// Number of positive roots (= l(w_I)).
    pub fn num_positive_roots(&self) -> usize {
        self.roots.num_positive()
    }
}

/// An automorphism of the root datum induced by a diagram permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatumAutomorphism {
    /// Image of each node: perm[i] = δ(i).
    pub perm: Vec<usize>,
    /// Action on X in the chosen basis.
    pub x_matrix: IMat,
    /// Action on Y in the dual basis.
    pub y_matrix: IMat,
    pub order: u32,
}

impl DatumAutomorphism {
    pub fn identity(d: &RootDatum) -> DatumAutomorphism {
        Self::new(d, (0..d.rank).collect()).expect("identity is always an automorphism")
    }

    pub fn new(d: &RootDatum, perm: Vec<usize>) -> Result<DatumAutomorphism, RootDataError> {
        let r = d.rank;
        let mut seen = vec![false; r];
        if perm.len() != r || perm.iter().any(|&i| i >= r || std::mem::replace(&mut seen[i], true))
        {
            return Err(RootDataError::BadAutomorphism);
        }
        for i in 0..r {
            for j in 0..r {
                if d.cartan.get(perm[i], perm[j]) != d.cartan.get(i, j)
                    || d.form.get(perm[i], perm[j]) != d.form.get(i, j)
                {
                    return Err(RootDataError::BadAutomorphism);
                }
            }
        }
        // in both lattice bases δ acts by the permutation matrix sending
        // basis vector i to basis vector δ(i)
        let mut x = IMat::zero(r);
        for i in 0..r {
            x.set(perm[i], i, 1);
        }
        let y = x.clone(); // ⟨δy, δx⟩ = ⟨y, x⟩ for permutation actions
        let mut order = 1u32;
        let mut cur = perm.clone();
        while cur.iter().enumerate().any(|(i, &v)| v != i) {
            cur = cur.iter().map(|&i| perm[i]).collect();
            order += 1;
        }
        Ok(DatumAutomorphism { perm, x_matrix: x, y_matrix: y, order })
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &v)| v == i)
    }

    /// Image of a signed root under δ (roots map by permuting simple-root
    /// coordinates).
    pub fn apply_root(&self, rs: &RootSystemData, r: SignedRoot) -> SignedRoot {
        let v = rs.root_coords(r);
        let mut w = vec![0i64; v.len()];
        for (i, &x) in v.iter().enumerate() {
            w[self.perm[i]] = x;
        }
        rs.find_root(&w).expect("δ permutes the roots")
    }

    /// The inverse automorphism.
    pub fn inverse(&self, d: &RootDatum) -> DatumAutomorphism {
        let mut inv = vec![0usize; self.perm.len()];
        for (i, &v) in self.perm.iter().enumerate() {
            inv[v] = i;
        }
        DatumAutomorphism::new(d, inv).expect("inverse of an automorphism")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn datum(t: &str, l: Lattice) -> RootDatum {
        RootDatum::from_type(t, l).unwrap()
    }

    #[test]
    fn a2_sc_pairing() {
        let d = datum("A2", Lattice::Sc);
        assert_eq!(d.pairing, IMat::identity(2));
        assert_eq!(d.simple_roots_x, IMat::from_rows(vec![vec![2, -1], vec![-1, 2]]));
        assert_eq!(d.num_positive_roots(), 3);
    }

    #[test]
    fn b2_form() {
        let d = datum("B2", Lattice::Sc);
        let mut diag: Vec<i64> = (0..2).map(|i| d.form.get(i, i)).collect();
        diag.sort();
        assert_eq!(diag, vec![2, 4]);
        assert_eq!(d.cartan.get(0, 1) * d.cartan.get(1, 0), 2);
        assert_eq!(d.num_positive_roots(), 4);
    }

    #[test]
    fn positive_root_counts() {
        assert_eq!(datum("A1", Lattice::Sc).num_positive_roots(), 1);
        assert_eq!(datum("A3", Lattice::Sc).num_positive_roots(), 6);
        assert_eq!(datum("G2", Lattice::Ad).num_positive_roots(), 6);
        assert_eq!(datum("A1xA1", Lattice::Sc).num_positive_roots(), 2);
        assert_eq!(datum("D4", Lattice::Ad).num_positive_roots(), 12);
        assert_eq!(datum("F4", Lattice::Ad).num_positive_roots(), 24);
    }

    #[test]
    fn bad_cartan_rejected() {
        let c = IMat::from_rows(vec![vec![2, 1], vec![1, 2]]);
        assert!(matches!(
            RootDatum::from_cartan(c, Lattice::Sc),
            Err(RootDataError::BadCartan(_))
        ));
        // rank-1 affine-like matrix is not positive definite
        let c = IMat::from_rows(vec![vec![2, -2], vec![-2, 2]]);
        assert!(RootDatum::from_cartan(c, Lattice::Sc).is_err());
    }

    #[test]
    fn automorphisms() {
        let d = datum("A2", Lattice::Sc);
        let flip = DatumAutomorphism::new(&d, vec![1, 0]).unwrap();
        assert_eq!(flip.order, 2);
        assert!(DatumAutomorphism::new(&d, vec![0, 1]).unwrap().is_identity());
        let b2 = datum("B2", Lattice::Sc);
        assert!(DatumAutomorphism::new(&b2, vec![1, 0]).is_err());
    }

    #[test]
    fn antisymmetry_and_magnitude() {
        for t in ["A2", "B2", "G2", "A3"] {
            let d = datum(t, Lattice::Ad);
            let rs = &d.roots;
            let np = rs.num_positive();
            for a in 0..np {
                for b in 0..np {
                    if a == b {
                        continue;
                    }
                    let (sa, sb) = (SignedRoot::pos(a), SignedRoot::pos(b));
                    let n = rs.struct_const(sa, sb);
                    assert_eq!(n, -rs.struct_const(sb, sa));
                    if n != 0 {
                        let p = rs.string_down(sa, sb);
                        assert_eq!(n.abs(), p + 1);
                        assert!((1..=3).contains(&n.abs()));
                    }
                }
            }
        }
    }

    /// Bracket of two adjoint-basis elements as a coordinate vector over the
    /// basis (e_{+roots}, e_{-roots}, h_1..h_r).
    fn bk(rs: &RootSystemData, np: usize, signed: &[SignedRoot], x: usize, y: usize) -> Vec<i64> {
        let dim = 2 * np + rs.rank;
        let mut out = vec![0i64; dim];
        let root_slot = |r: SignedRoot| if r.neg { np + r.idx } else { r.idx };
        if x < 2 * np && y < 2 * np {
            let (a, b) = (signed[x], signed[y]);
            if a.idx == b.idx && a.neg != b.neg {
                // [e_α, e_{-α}] = h_α; [e_{-α}, e_α] = -h_α
                let c = rs.coroot_coords(SignedRoot::pos(a.idx));
                for (i, &ci) in c.iter().enumerate() {
                    out[2 * np + i] = if a.neg { -ci } else { ci };
                }
            } else {
                let sum: Vec<i64> = rs
                    .root_coords(a)
                    .iter()
                    .zip(rs.root_coords(b).iter())
                    .map(|(u, v)| u + v)
                    .collect();
                if rs.find_root(&sum).is_some() {
                    let c = rs.find_root(&sum).unwrap();
                    out[root_slot(c)] = rs.struct_const(a, b);
                }
            }
        } else if x >= 2 * np && y < 2 * np {
            // [h_i, e_β] = ⟨i, β⟩ e_β
            let i = x - 2 * np;
            let b = signed[y];
            out[root_slot(b)] = rs.pair_simple_coroot(i, &rs.root_coords(b));
        } else if x < 2 * np && y >= 2 * np {
            let i = y - 2 * np;
            let a = signed[x];
            out[root_slot(a)] = -rs.pair_simple_coroot(i, &rs.root_coords(a));
        }
        out
    }

    /// Jacobi identity on the adjoint module: checked over all triples of
    /// basis elements (root vectors and coroots) for the rank-2 types and A3.
    #[test]
    fn jacobi_identity() {
        for t in ["A2", "B2", "G2", "A3"] {
            let d = datum(t, Lattice::Ad);
            let rs = &d.roots;
            let np = rs.num_positive();
            let dim = 2 * np + d.rank;
            let signed: Vec<SignedRoot> = (0..np)
                .map(SignedRoot::pos)
                .chain((0..np).map(SignedRoot::neg))
                .collect();
            let bracket = |x: usize, y: usize| bk(rs, np, &signed, x, y);
            // [v, w] for a coordinate vector v against a basis element w
            let expand = |v: &[i64], w: usize| -> Vec<i64> {
                let mut acc = vec![0i64; dim];
                for (i, &c) in v.iter().enumerate() {
                    if c != 0 {
                        for (slot, val) in bracket(i, w).iter().enumerate() {
                            acc[slot] += c * val;
                        }
                    }
                }
                acc
            };
            // [[x,y],z] + [[y,z],x] + [[z,x],y] = 0
            for x in 0..dim {
                for y in 0..dim {
                    let xy = bracket(x, y);
                    for z in 0..dim {
                        let t1 = expand(&xy, z);
                        let t2 = expand(&bracket(y, z), x);
                        let t3 = expand(&bracket(z, x), y);
                        let ok = (0..dim).all(|i| t1[i] + t2[i] + t3[i] == 0);
                        assert!(ok, "Jacobi fails for {t} at ({x},{y},{z})");
                    }
                }
            }
        }
    }
}
