//! The Weyl group: elements as lattice automorphisms, reduced words,
//! twisted conjugacy classes, ellipticity, minimal-length sets and the
//! cyclic-shift graph connecting them.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::matrix::IMat;
use crate::rootdata::{DatumAutomorphism, RootDatum};

#[derive(Debug, Error)]
pub enum WeylError {
    #[error("group order exceeds the enumeration ceiling {0}")]
    GroupCeiling(usize),
    #[error("letter {0} out of range for rank {1}")]
    LetterOutOfRange(usize, usize),
    #[error("element is not in the requested class")]
    NotInClass,
    #[error("internal consistency failure: {0}")]
    Inconsistency(String),
}

pub const GROUP_CEILING: usize = 100_000;

/// A Weyl group element: its action on X, the inverse action, and the
/// cached lexicographically-least reduced word.
#[derive(Debug, Clone)]
pub struct WeylElement {
    pub action: IMat,
    pub inv_action: IMat,
    pub word: Vec<u8>,
    pub length: usize,
}

impl PartialEq for WeylElement {
    fn eq(&self, other: &Self) -> bool {
        self.action == other.action
    }
}
impl Eq for WeylElement {}
impl std::hash::Hash for WeylElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.action.hash(state);
    }
}
impl PartialOrd for WeylElement {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for WeylElement {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.length
            .cmp(&other.length)
            .then_with(|| self.word.cmp(&other.word))
            .then_with(|| self.action.entries.cmp(&other.action.entries))
    }
}

impl WeylElement {
    pub fn is_identity(&self) -> bool {
        self.length == 0
    }

    /// Word as comma-separated 1-based indices ("" for the identity).
    pub fn word_string(&self) -> String {
        self.word.iter().map(|&i| (i + 1).to_string()).collect::<Vec<_>>().join(",")
    }

    /// Letters appearing in the reduced word (well defined: all reduced
    /// words of an element use the same support).
    pub fn support(&self) -> Vec<u8> {
        let mut s: Vec<u8> = self.word.clone();
        s.sort();
        s.dedup();
        s
    }
}

/// Parse a comma-separated 1-based word ("1,2,1"); empty string is identity.
pub fn parse_word(s: &str, rank: usize) -> Result<Vec<u8>, WeylError> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for part in s.split(',') {
        let v: usize =
            part.trim().parse().map_err(|_| WeylError::LetterOutOfRange(0, rank))?;
        if v == 0 || v > rank {
            return Err(WeylError::LetterOutOfRange(v, rank));
        }
        out.push((v - 1) as u8);
    }
    Ok(out)
}

/// The Weyl group of a root datum, fully enumerated.
#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub datum: Arc<RootDatum>,
    /// All elements, sorted by (length, word).
    pub elements: Vec<WeylElement>,
    index: HashMap<IMat, usize>,
}

impl WeylGroup {
    pub fn new(datum: Arc<RootDatum>) -> Result<WeylGroup, WeylError> {
        let rank = datum.rank;
        let id = WeylElement {
            action: IMat::identity(rank),
            inv_action: IMat::identity(rank),
            word: vec![],
            length: 0,
        };
        let mut index: HashMap<IMat, usize> = HashMap::new();
        let mut elements = vec![id];
        index.insert(elements[0].action.clone(), 0);
        let mut frontier = vec![0usize];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for &ei in &frontier {
                for i in 0..rank {
                    let action = IMat::mul(&elements[ei].action, &datum.refl[i]);
                    if index.contains_key(&action) {
                        continue;
                    }
                    if elements.len() >= GROUP_CEILING {
                        return Err(WeylError::GroupCeiling(GROUP_CEILING));
                    }
                    let inv_action = IMat::mul(&datum.refl[i], &elements[ei].inv_action);
                    let w = canonicalize(&datum, action.clone(), inv_action);
                    index.insert(action, elements.len());
                    next.push(elements.len());
                    elements.push(w);
                }
            }
            frontier = next;
        }
        elements.sort();
        let index = elements.iter().enumerate().map(|(i, w)| (w.action.clone(), i)).collect();
        Ok(WeylGroup { datum, elements, index })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn rank(&self) -> usize {
        self.datum.rank
    }

    pub fn identity(&self) -> WeylElement {
        self.elements[0].clone()
    }

    pub fn simple(&self, i: usize) -> WeylElement {
        self.from_word(&[i as u8]).expect("simple reflection")
    }

    /// Element from an arbitrary word; the stored word is canonicalized and
    /// the length recomputed from the matrix.
    pub fn from_word(&self, word: &[u8]) -> Result<WeylElement, WeylError> {
        let rank = self.datum.rank;
        let mut action = IMat::identity(rank);
        for &i in word {
            if i as usize >= rank {
                return Err(WeylError::LetterOutOfRange(i as usize + 1, rank));
            }
            action = IMat::mul(&action, &self.datum.refl[i as usize]);
        }
        Ok(self.lookup(&action))
    }

    fn lookup(&self, action: &IMat) -> WeylElement {
        let i = *self.index.get(action).expect("matrix generated by the simple reflections");
        self.elements[i].clone()
    }

    pub fn element_index(&self, w: &WeylElement) -> usize {
        *self.index.get(&w.action).expect("element of this group")
    }

    pub fn mul(&self, a: &WeylElement, b: &WeylElement) -> WeylElement {
        self.lookup(&IMat::mul(&a.action, &b.action))
    }

    pub fn inverse(&self, a: &WeylElement) -> WeylElement {
        self.lookup(&a.inv_action)
    }

    /// δ(w) as a group element.
    pub fn twist(&self, a: &WeylElement, delta: &DatumAutomorphism) -> WeylElement {
        let word: Vec<u8> = a.word.iter().map(|&i| delta.perm[i as usize] as u8).collect();
        self.from_word(&word).expect("twisted word")
    }

    /// Length computed from the matrix action: the number of positive roots
    /// sent to negative roots.
    pub fn length_by_inversions(&self, a: &WeylElement) -> usize {
        let d = &self.datum;
        let mut count = 0;
        for idx in 0..d.roots.num_positive() {
            let mut x = vec![0i64; d.rank];
            let rv = &d.roots.positives[idx];
            for (j, &k) in rv.iter().enumerate() {
                for b in 0..d.rank {
                    x[b] += k * d.simple_roots_x.get(b, j);
                }
            }
            let image = a.action.apply(&x);
            let s = d.classify_root_x(&image).expect("w permutes the roots");
            if s.neg {
                count += 1;
            }
        }
        count
    }

    /// The longest element w_I with its lexicographically-least reduced word.
    pub fn longest_element(&self) -> WeylElement {
        self.elements.last().expect("nonempty group").clone()
    }

    /// True iff l(a s_i) > l(a).
    pub fn is_right_ascent(&self, a: &WeylElement, i: usize) -> bool {
        let alpha = self.datum.simple_root_x(i);
        let image = a.action.apply(&alpha);
        !self.datum.classify_root_x(&image).expect("root image").neg
    }

    /// True iff l(s_i a) > l(a).
    pub fn is_left_ascent(&self, a: &WeylElement, i: usize) -> bool {
        let alpha = self.datum.simple_root_x(i);
        let image = a.inv_action.apply(&alpha);
        !self.datum.classify_root_x(&image).expect("root image").neg
    }

    /// All x with a = x·z and l(a) = l(x) + l(z).
    pub fn length_additive_prefixes(&self, a: &WeylElement) -> Vec<WeylElement> {
        self.elements
            .iter()
            .filter(|x| {
                x.length <= a.length && {
                    let z = self.mul(&self.inverse(x), a);
                    x.length + z.length == a.length
                }
            })
            .cloned()
            .collect()
    }

    /// Extend the canonical reduced word of `w` to a reduced word of w_I
    /// (greedy lexicographically-least extension).
    pub fn extend_word_to_longest(&self, w: &WeylElement) -> Vec<u8> {
        let mut word = w.word.clone();
        let mut cur = w.clone();
        let n = self.longest_element().length;
        while cur.length < n {
            let i = (0..self.rank())
                .find(|&i| self.is_right_ascent(&cur, i))
                .expect("non-longest element has an ascent");
            word.push(i as u8);
            cur = self.mul(&cur, &self.simple(i));
        }
        word
    }

    /// Order of s_i s_j.
    pub fn coxeter_mij(&self, i: usize, j: usize) -> u32 {
        if i == j {
            return 1;
        }
        match self.datum.cartan.get(i, j) * self.datum.cartan.get(j, i) {
            0 => 2,
            1 => 3,
            2 => 4,
            3 => 6,
            other => panic!("finite Coxeter groups only (a_ij a_ji = {other})"),
        }
    }
}

fn canonicalize(datum: &RootDatum, action: IMat, inv_action: IMat) -> WeylElement {
    // the lex-least reduced word takes the smallest left descent first
    let mut word = Vec::new();
    let mut cur = action.clone();
    let mut curinv = inv_action.clone();
    let rank = datum.rank;
    loop {
        let mut descent = None;
        for i in 0..rank {
            let alpha = datum.simple_root_x(i);
            let image = curinv.apply(&alpha);
            if datum.classify_root_x(&image).expect("root image").neg {
                descent = Some(i);
                break;
            }
        }
        match descent {
            Some(i) => {
                word.push(i as u8);
                cur = IMat::mul(&datum.refl[i], &cur);
                curinv = IMat::mul(&curinv, &datum.refl[i]);
            }
            None => break,
        }
    }
    debug_assert_eq!(cur, IMat::identity(rank), "descent stripping must reach the identity");
    let length = word.len();
    WeylElement { action, inv_action, word, length }
}

/// A δ-twisted conjugacy class.
#[derive(Debug, Clone)]
pub struct TwistedClass {
    pub delta: DatumAutomorphism,
    /// The full class, sorted by (length, word).
    pub elements: Vec<WeylElement>,
    /// The elements of minimal length, sorted.
    pub min_length: Vec<WeylElement>,
    pub elliptic: bool,
    /// Order of wδ in W ⋊ ⟨δ⟩: the smallest e ≥ 1 with
    /// w δ(w) ... δ^{e-1}(w) = 1 and δ^e = 1.
    pub order_e: u32,
}

impl TwistedClass {
    pub fn representative(&self) -> &WeylElement {
        &self.min_length[0]
    }

    pub fn contains(&self, w: &WeylElement) -> bool {
        self.elements.iter().any(|e| e == w)
    }
}

/// Partition W into δ-conjugacy classes w ↦ y⁻¹ w δ(y), each annotated with
/// its elliptic flag, minimal-length set, and twisted order.
pub fn delta_classes(group: &WeylGroup, delta: &DatumAutomorphism) -> Vec<TwistedClass> {
    let n = group.order();
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for seed in 0..n {
        if assigned[seed] {
            continue;
        }
        // orbit closure under w ↦ s_i w δ(s_i)
        let mut members = vec![seed];
        assigned[seed] = true;
        let mut stack = vec![seed];
        while let Some(widx) = stack.pop() {
            let w = &group.elements[widx].clone();
            for i in 0..group.rank() {
                let si = group.simple(i);
                let sdi = group.simple(delta.perm[i]);
                let im = group.mul(&group.mul(&si, w), &sdi);
                let imidx = group.element_index(&im);
                if !assigned[imidx] {
                    assigned[imidx] = true;
                    members.push(imidx);
                    stack.push(imidx);
                }
            }
        }
        let mut elements: Vec<WeylElement> =
            members.into_iter().map(|i| group.elements[i].clone()).collect();
        elements.sort();
        let min_len = elements[0].length;
        let min_length: Vec<WeylElement> =
            elements.iter().filter(|w| w.length == min_len).cloned().collect();

        let elliptic = class_is_elliptic(group, delta, &elements);
        let order_e = twisted_order(group, delta, &elements[0]);
        classes.push(TwistedClass {
            delta: delta.clone(),
            elements,
            min_length,
            elliptic,
            order_e,
        });
    }
    classes.sort_by(|a, b| a.elements[0].cmp(&b.elements[0]));
    classes
}

/// Definitional ellipticity (the class misses W_J for every proper δ-stable
/// J), cross-checked against det(wδ - 1) ≠ 0 on X ⊗ ℚ.
fn class_is_elliptic(
    group: &WeylGroup,
    delta: &DatumAutomorphism,
    elements: &[WeylElement],
) -> bool {
    let rank = group.rank();
    // definitional route: no element's support has a proper δ-stable closure
    let definitional = elements.iter().all(|w| {
        let mut j: Vec<bool> = vec![false; rank];
        for &l in &w.support() {
            j[l as usize] = true;
        }
        loop {
            let mut changed = false;
            for i in 0..rank {
                if j[i] && !j[delta.perm[i]] {
                    j[delta.perm[i]] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        j.iter().all(|&b| b)
    });
    // spectral route on any representative (class-invariant)
    let w = &elements[0];
    let m = IMat::mul(&w.action, &delta.x_matrix);
    let spectral = IMat::sub(&m, &IMat::identity(rank)).det() != 0;
    assert_eq!(definitional, spectral, "elliptic tests disagree for class of {:?}", w.word);
    definitional
}

fn twisted_order(group: &WeylGroup, delta: &DatumAutomorphism, w: &WeylElement) -> u32 {
    let mut prod = w.clone();
    let mut twisted = w.clone();
    let mut e = 1u32;
    loop {
        if prod.is_identity() && e % delta.order == 0 {
            return e;
        }
        twisted = group.twist(&twisted, delta);
        prod = group.mul(&prod, &twisted);
        e += 1;
        assert!(e <= 10_000, "twisted order runaway");
    }
}

/// One edge of the cyclic-shift graph: `from = x·δ(y)` and `to = y·x` with
/// l(x) + l(y) = l(from) = l(to).
#[derive(Debug, Clone)]
pub struct ShiftEdge {
    pub from: usize,
    pub to: usize,
    pub x: WeylElement,
    pub y: WeylElement,
}

/// The elementary-move graph on C_min.
#[derive(Debug, Clone)]
pub struct ShiftGraph {
    pub nodes: Vec<WeylElement>,
    pub edges: Vec<ShiftEdge>,
}

/// One step of a path in the shift graph; `forward` means traversed from
/// `edge.from` to `edge.to`.
#[derive(Debug, Clone)]
pub struct PathStep {
    pub edge: ShiftEdge,
    pub forward: bool,
}

/// C_min together with its elementary-move graph; the graph is validated to
/// be connected.
pub fn min_length_set(group: &WeylGroup, class: &TwistedClass) -> Result<ShiftGraph, WeylError> {
    let nodes = class.min_length.clone();
    let pos: HashMap<&WeylElement, usize> =
        nodes.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let delta = &class.delta;
    let delta_inv = delta.inverse(&group.datum);
    let mut edges: Vec<ShiftEdge> = Vec::new();
    let mut best: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, w) in nodes.iter().enumerate() {
        for x in group.length_additive_prefixes(w) {
            let z = group.mul(&group.inverse(&x), w);
            let y = group.twist(&z, &delta_inv);
            let target = group.mul(&y, &x);
            if target.length != w.length {
                continue;
            }
            let Some(&ti) = pos.get(&target) else { continue };
            if ti == fi {
                continue;
            }
            let key = (fi, ti);
            let cand = ShiftEdge { from: fi, to: ti, x: x.clone(), y: y.clone() };
            match best.get(&key) {
                Some(&ei) => {
                    let old = &edges[ei];
                    if (&cand.x.word, &cand.y.word) < (&old.x.word, &old.y.word) {
                        edges[ei] = cand;
                    }
                }
                None => {
                    best.insert(key, edges.len());
                    edges.push(cand);
                }
            }
        }
    }
    edges.sort_by(|a, b| (a.from, a.to).cmp(&(b.from, b.to)));
    let g = ShiftGraph { nodes, edges };
    // connectivity (undirected): guaranteed by the cyclic-shift theory;
    // a failure here is an internal inconsistency
    let n = g.nodes.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for e in &g.edges {
            for (a, b) in [(e.from, e.to), (e.to, e.from)] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    if !seen.iter().all(|&s| s) {
        return Err(WeylError::Inconsistency("shift graph disconnected".into()));
    }
    Ok(g)
}

/// Shortest move path between two elements of C_min, deterministic.
pub fn shift_path(
    graph: &ShiftGraph,
    from: &WeylElement,
    to: &WeylElement,
) -> Result<Vec<PathStep>, WeylError> {
    let fi = graph.nodes.iter().position(|w| w == from).ok_or(WeylError::NotInClass)?;
    let ti = graph.nodes.iter().position(|w| w == to).ok_or(WeylError::NotInClass)?;
    if fi == ti {
        return Ok(vec![]);
    }
    // BFS over nodes; edges usable in both directions
    let n = graph.nodes.len();
    let mut prev: Vec<Option<(usize, usize, bool)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[fi] = true;
    let mut frontier = vec![fi];
    'outer: while !frontier.is_empty() {
        let mut next = Vec::new();
        for &v in &frontier {
            for (ei, e) in graph.edges.iter().enumerate() {
                for (a, b, fwd) in [(e.from, e.to, true), (e.to, e.from, false)] {
                    if a == v && !seen[b] {
                        seen[b] = true;
                        prev[b] = Some((v, ei, fwd));
                        if b == ti {
                            break 'outer;
                        }
                        next.push(b);
                    }
                }
            }
        }
        frontier = next;
    }
    if prev[ti].is_none() {
        return Err(WeylError::Inconsistency("no path in connected shift graph".into()));
    }
    let mut steps = Vec::new();
    let mut cur = ti;
    while cur != fi {
        let (p, ei, fwd) = prev[cur].expect("back-pointer chain");
        steps.push(PathStep { edge: graph.edges[ei].clone(), forward: fwd });
        cur = p;
    }
    steps.reverse();
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Lattice;

    fn group(t: &str, l: Lattice) -> WeylGroup {
        WeylGroup::new(Arc::new(RootDatum::from_type(t, l).unwrap())).unwrap()
    }

    #[test]
    fn a2_elements_and_words() {
        let g = group("A2", Lattice::Sc);
        assert_eq!(g.order(), 6);
        let s1 = g.from_word(&[0]).unwrap();
        assert_eq!(s1.length, 1);
        let e = g.from_word(&[0, 0]).unwrap();
        assert!(e.is_identity());
        let wi = g.from_word(&[0, 1, 0]).unwrap();
        assert_eq!(wi.length, 3);
        assert_eq!(wi, g.longest_element());
        assert_eq!(wi.word, vec![0, 1, 0]); // lex-least among (1,2,1), (2,1,2)
    }

    #[test]
    fn longest_lengths() {
        assert_eq!(group("A1", Lattice::Sc).longest_element().length, 1);
        assert_eq!(group("B2", Lattice::Sc).longest_element().length, 4);
        assert_eq!(group("G2", Lattice::Ad).longest_element().length, 6);
        assert_eq!(group("A3", Lattice::Sc).longest_element().length, 6);
    }

    #[test]
    fn inversion_length_matches_word_length() {
        for (t, l) in
            [("A2", Lattice::Sc), ("B2", Lattice::Sc), ("A3", Lattice::Sc), ("G2", Lattice::Ad)]
        {
            let g = group(t, l);
            for w in &g.elements {
                assert_eq!(g.length_by_inversions(w), w.length, "{t} {:?}", w.word);
                assert_eq!(g.from_word(&w.word).unwrap(), *w);
            }
        }
    }

    #[test]
    fn a2_classes_untwisted() {
        let g = group("A2", Lattice::Sc);
        let delta = DatumAutomorphism::identity(&g.datum);
        let classes = delta_classes(&g, &delta);
        assert_eq!(classes.len(), 3);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.elements.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        // the Coxeter class {s1s2, s2s1} is the only elliptic one
        for c in &classes {
            let coxeter = c.representative().length == 2;
            assert_eq!(c.elliptic, coxeter, "class {:?}", c.representative().word);
        }
    }

    #[test]
    fn a2_coxeter_shift_graph() {
        let g = group("A2", Lattice::Sc);
        let delta = DatumAutomorphism::identity(&g.datum);
        let classes = delta_classes(&g, &delta);
        let cox = classes.iter().find(|c| c.elliptic).unwrap();
        assert_eq!(cox.min_length.len(), 2);
        assert_eq!(cox.order_e, 3);
        let graph = min_length_set(&g, cox).unwrap();
        assert!(!graph.edges.is_empty());
        let path = shift_path(&graph, &cox.min_length[0], &cox.min_length[1]).unwrap();
        assert_eq!(path.len(), 1);
        let empty = shift_path(&graph, &cox.min_length[0], &cox.min_length[0]).unwrap();
        assert!(empty.is_empty());
        let other = g.from_word(&[0]).unwrap();
        assert!(shift_path(&graph, &cox.min_length[0], &other).is_err());
    }

    #[test]
    fn a2_twisted_classes() {
        let g = group("A2", Lattice::Sc);
        let flip = DatumAutomorphism::new(&g.datum, vec![1, 0]).unwrap();
        let classes = delta_classes(&g, &flip);
        let mut sizes: Vec<usize> = classes.iter().map(|c| c.elements.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2, 3]);
        // elliptic twisted classes: {s1, s2} and {w_I}
        let elliptic: Vec<_> = classes.iter().filter(|c| c.elliptic).collect();
        assert_eq!(elliptic.len(), 2);
        assert_eq!(elliptic[0].representative().length, 1);
        assert_eq!(elliptic[0].elements.len(), 2);
        assert_eq!(elliptic[0].order_e, 6);
        assert_eq!(elliptic[1].representative().length, 3);
        assert_eq!(elliptic[1].order_e, 2);
    }

    #[test]
    fn b2_coxeter_class_connected() {
        let g = group("B2", Lattice::Sc);
        let delta = DatumAutomorphism::identity(&g.datum);
        let classes = delta_classes(&g, &delta);
        let cox = classes
            .iter()
            .find(|c| c.elliptic && c.representative().length == 2)
            .expect("Coxeter class");
        assert_eq!(cox.min_length.len(), 2);
        let graph = min_length_set(&g, cox).unwrap();
        for a in &cox.min_length {
            for b in &cox.min_length {
                assert!(shift_path(&graph, a, b).is_ok());
            }
        }
    }

    #[test]
    fn class_sizes_sum() {
        for (t, l) in [("A3", Lattice::Sc), ("B2", Lattice::Sc), ("G2", Lattice::Ad)] {
            let g = group(t, l);
            let delta = DatumAutomorphism::identity(&g.datum);
            let classes = delta_classes(&g, &delta);
            assert_eq!(classes.iter().map(|c| c.elements.len()).sum::<usize>(), g.order());
        }
    }

    #[test]
    fn word_parsing() {
        assert_eq!(parse_word("1,2,1", 2).unwrap(), vec![0, 1, 0]);
        assert_eq!(parse_word("", 2).unwrap(), Vec::<u8>::new());
        assert!(parse_word("3", 2).is_err());
        assert!(parse_word("0", 2).is_err());
    }
}
