//! The positive braid monoid: words, left-greedy (Garside) normal form,
//! equality testing, good-element decompositions, and explicit braid-move
//! paths between equal positive words.

use std::collections::HashMap;

use thiserror::Error;

use crate::rootdata::DatumAutomorphism;
use crate::weyl::{TwistedClass, WeylElement, WeylGroup};

#[derive(Debug, Error)]
pub enum BraidError {
    #[error("words lie in different braid classes")]
    DifferentClasses,
    #[error("breadth-first search exceeded the state ceiling {0}")]
    StateCeiling(usize),
    #[error("class is not elliptic")]
    NotElliptic,
    #[error("no good element found in C_min (internal consistency failure)")]
    NoGoodElement,
}

pub const BFS_STATE_CEILING: usize = 1_000_000;

/// A positive word in the braid generators, by letter indices into I.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub letters: Vec<u8>,
}

impl BraidWord {
    pub fn empty() -> Self {
        BraidWord { letters: vec![] }
    }

    pub fn concat(words: &[&BraidWord]) -> Self {
        BraidWord { letters: words.iter().flat_map(|w| w.letters.iter().copied()).collect() }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}

/// The canonical image of a Weyl element in the braid monoid: its stored
/// reduced word as a positive braid word.
pub fn braid_lift(w: &WeylElement) -> BraidWord {
    BraidWord { letters: w.word.clone() }
}

/// Left-greedy normal form: a sequence of nontrivial Weyl-group factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GarsideNormalForm {
    pub factors: Vec<WeylElement>,
}

impl GarsideNormalForm {
    pub fn total_letters(&self) -> usize {
        self.factors.iter().map(|f| f.length).sum()
    }

    /// Concatenation of the factors' canonical reduced words.
    pub fn refine(&self) -> BraidWord {
        BraidWord {
            letters: self.factors.iter().flat_map(|f| f.word.iter().copied()).collect(),
        }
    }
}

/// Compute the left-greedy normal form of a positive word. Two positive
/// words are equal in the braid monoid iff their normal forms coincide.
pub fn normal_form(group: &WeylGroup, b: &BraidWord) -> GarsideNormalForm {
    let mut factors: Vec<WeylElement> =
        b.letters.iter().map(|&i| group.simple(i as usize)).collect();
    // local sliding: move letters left across adjacent factors until every
    // adjacent pair (a, b) satisfies the left-greedy condition
    loop {
        let mut changed = false;
        let mut k = 0;
        while k + 1 < factors.len() {
            let (a, b) = (factors[k].clone(), factors[k + 1].clone());
            let (a2, b2) = slide(group, a, b);
            if factors[k] != a2 {
                changed = true;
            }
            factors[k] = a2;
            factors[k + 1] = b2;
            k += 1;
        }
        factors.retain(|f| !f.is_identity());
        if !changed {
            break;
        }
    }
    GarsideNormalForm { factors }
}

/// Move every possible letter from the left of `b` to the right of `a`.
fn slide(group: &WeylGroup, mut a: WeylElement, mut b: WeylElement) -> (WeylElement, WeylElement) {
    loop {
        let mut moved = false;
        for i in 0..group.rank() {
            if group.is_right_ascent(&a, i) && !group.is_left_ascent(&b, i) {
                let s = group.simple(i);
                a = group.mul(&a, &s);
                b = group.mul(&s, &b);
                moved = true;
                break;
            }
        }
        if !moved {
            return (a, b);
        }
    }
}

pub fn braid_equal(group: &WeylGroup, a: &BraidWord, b: &BraidWord) -> bool {
    normal_form(group, a) == normal_form(group, b)
}

/// A successful good decomposition: ŵ δ(ŵ) ... δ^{e-1}(ŵ) = ŷ_1 ... ŷ_t
/// with y_1 = w_I.
#[derive(Debug, Clone)]
pub struct GoodDecomposition {
    pub e: u32,
    pub factors: Vec<WeylElement>,
}

/// Normal form of the e-fold twisted braid power of w; succeeds iff the
/// first factor is the longest element.
pub fn good_decomposition(
    group: &WeylGroup,
    w: &WeylElement,
    delta: &DatumAutomorphism,
    e: u32,
) -> Option<GoodDecomposition> {
    let mut letters = Vec::with_capacity(w.length * e as usize);
    let mut cur = w.clone();
    for _ in 0..e {
        letters.extend_from_slice(&cur.word);
        cur = group.twist(&cur, delta);
    }
    let nf = normal_form(group, &BraidWord { letters });
    let wi = group.longest_element();
    if nf.factors.first() == Some(&wi) {
        Some(GoodDecomposition { e, factors: nf.factors })
    } else {
        None
    }
}

/// Scan C_min in deterministic order for the first good element.
pub fn find_good_element(
    group: &WeylGroup,
    class: &TwistedClass,
) -> Result<(WeylElement, GoodDecomposition), BraidError> {
    if !class.elliptic {
        return Err(BraidError::NotElliptic);
    }
    for w in &class.min_length {
        if let Some(gd) = good_decomposition(group, w, &class.delta, class.order_e) {
            return Ok((w.clone(), gd));
        }
    }
    Err(BraidError::NoGoodElement)
}

/// One elementary rank-2 move: the block of length `n_ij` starting at
/// `position` changes from (i,j,i,...) to (j,i,j,...).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BraidMove {
    pub position: usize,
    pub i: u8,
    pub j: u8,
}

/// All single moves applicable to a word, in deterministic order.
fn moves_of(group: &WeylGroup, w: &[u8]) -> Vec<BraidMove> {
    let mut out = Vec::new();
    for p in 0..w.len() {
        let i = w[p];
        if p + 1 >= w.len() {
            continue;
        }
        let j = w[p + 1];
        if i == j {
            continue;
        }
        let m = group.coxeter_mij(i as usize, j as usize) as usize;
        if p + m > w.len() {
            continue;
        }
        let alternates =
            (0..m).all(|k| w[p + k] == if k % 2 == 0 { i } else { j });
        if alternates {
            out.push(BraidMove { position: p, i, j });
        }
    }
    out
}

pub fn apply_move(group: &WeylGroup, w: &[u8], mv: &BraidMove) -> Vec<u8> {
    let m = group.coxeter_mij(mv.i as usize, mv.j as usize) as usize;
    let mut out = w.to_vec();
    for k in 0..m {
        out[mv.position + k] = if k % 2 == 0 { mv.j } else { mv.i };
    }
    out
}

/// Shortest sequence of elementary moves transforming one letter string
/// into an equal one, by bidirectional breadth-first search.
pub fn braid_move_path(
    group: &WeylGroup,
    from: &[u8],
    to: &[u8],
) -> Result<Vec<BraidMove>, BraidError> {
    if from == to {
        return Ok(vec![]);
    }
    let (fb, tb) =
        (BraidWord { letters: from.to_vec() }, BraidWord { letters: to.to_vec() });
    if !braid_equal(group, &fb, &tb) {
        return Err(BraidError::DifferentClasses);
    }
    // parent maps: state -> (previous state, move applied to previous)
    let mut fwd: HashMap<Vec<u8>, Option<(Vec<u8>, BraidMove)>> = HashMap::new();
    let mut bwd: HashMap<Vec<u8>, Option<(Vec<u8>, BraidMove)>> = HashMap::new();
    fwd.insert(from.to_vec(), None);
    bwd.insert(to.to_vec(), None);
    let mut ffront = vec![from.to_vec()];
    let mut bfront = vec![to.to_vec()];
    let mut meet: Option<Vec<u8>> = None;
    while meet.is_none() && !ffront.is_empty() && !bfront.is_empty() {
        // expand the smaller frontier
        let expand_fwd = ffront.len() <= bfront.len();
        let (map, other, front) = if expand_fwd {
            (&mut fwd, &bwd, &mut ffront)
        } else {
            (&mut bwd, &fwd, &mut bfront)
        };
        let mut next = Vec::new();
        let mut meets: Vec<Vec<u8>> = Vec::new();
        for state in front.iter() {
            for mv in moves_of(group, state) {
                let ns = apply_move(group, state, &mv);
                if map.contains_key(&ns) {
                    continue;
                }
                if map.len() + 1 > BFS_STATE_CEILING {
                    return Err(BraidError::StateCeiling(BFS_STATE_CEILING));
                }
                map.insert(ns.clone(), Some((state.clone(), mv)));
                if other.contains_key(&ns) {
                    meets.push(ns.clone());
                }
                next.push(ns);
            }
        }
        if !meets.is_empty() {
            meets.sort();
            meet = Some(meets.remove(0));
        }
        *front = next;
    }
    let meet = meet.ok_or(BraidError::DifferentClasses)?;
    // path: from -> meet (forward chain) then meet -> to (backward chain reversed)
    let mut path = Vec::new();
    let mut cur = meet.clone();
    while let Some(Some((prev, mv))) = fwd.get(&cur) {
        path.push(*mv);
        cur = prev.clone();
    }
    path.reverse();
    let mut cur = meet;
    while let Some(Some((prev, mv))) = bwd.get(&cur) {
        // moves are involutive on the block: applying (position, i, j) to the
        // successor state is the move (position, j, i) seen forward
        path.push(BraidMove { position: mv.position, i: mv.j, j: mv.i });
        cur = prev.clone();
    }
    Ok(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::{Lattice, RootDatum};
    use crate::weyl::delta_classes;
    use std::sync::Arc;

    fn group(t: &str) -> WeylGroup {
        let l = if t == "G2" { Lattice::Ad } else { Lattice::Sc };
        WeylGroup::new(Arc::new(RootDatum::from_type(t, l).unwrap())).unwrap()
    }

    #[test]
    fn lift_examples() {
        let g = group("A2");
        assert!(braid_lift(&g.identity()).is_empty());
        assert_eq!(braid_lift(&g.longest_element()).letters, vec![0, 1, 0]);
        assert_eq!(braid_lift(&g.simple(0)).letters, vec![0]);
    }

    #[test]
    fn normal_form_examples() {
        let g = group("A2");
        let nf = normal_form(&g, &BraidWord { letters: vec![0, 0] });
        assert_eq!(nf.factors, vec![g.simple(0), g.simple(0)]);
        let nf = normal_form(&g, &BraidWord { letters: vec![0, 1, 0] });
        assert_eq!(nf.factors, vec![g.longest_element()]);
        let nf = normal_form(&g, &BraidWord { letters: vec![0, 1, 0, 0, 1, 0] });
        assert_eq!(nf.factors, vec![g.longest_element(), g.longest_element()]);
    }

    #[test]
    fn normal_form_is_left_greedy_and_preserves_letters() {
        for t in ["A2", "B2"] {
            let g = group(t);
            for len in 0..=8usize {
                for code in 0..(1u32 << len) {
                    let letters: Vec<u8> =
                        (0..len).map(|b| ((code >> b) & 1) as u8).collect();
                    let nf = normal_form(&g, &BraidWord { letters: letters.clone() });
                    assert_eq!(nf.total_letters(), len, "{t} {letters:?}");
                    for pair in nf.factors.windows(2) {
                        for s in 0..g.rank() {
                            let bad = g.is_right_ascent(&pair[0], s)
                                && !g.is_left_ascent(&pair[1], s);
                            assert!(!bad, "{t} {letters:?} not left-greedy");
                        }
                    }
                    // invariance under any single braid move
                    for mv in moves_of(&g, &letters) {
                        let moved = apply_move(&g, &letters, &mv);
                        let nf2 = normal_form(&g, &BraidWord { letters: moved });
                        assert_eq!(nf.factors, nf2.factors, "{t} {letters:?} {mv:?}");
                    }
                }
            }
        }
    }

    #[test]
    fn good_decompositions() {
        let a1 = group("A1");
        let s = a1.simple(0);
        let gd = good_decomposition(&a1, &s, &DatumAutomorphism::identity(&a1.datum), 2).unwrap();
        assert_eq!(gd.e, 2);
        assert_eq!(gd.factors, vec![s.clone(), s.clone()]);

        let a2 = group("A2");
        let id = DatumAutomorphism::identity(&a2.datum);
        let cox = a2.from_word(&[0, 1]).unwrap();
        let gd = good_decomposition(&a2, &cox, &id, 3).unwrap();
        assert_eq!(gd.factors, vec![a2.longest_element(), a2.longest_element()]);
        // letters of y_* sum to e·l(w)
        assert_eq!(gd.factors.iter().map(|f| f.length).sum::<usize>(), 3 * 2);
        // s1 is not good: the normal form of ŝ1ŝ1 starts with s1 ≠ w_I
        assert!(good_decomposition(&a2, &a2.simple(0), &id, 2).is_none());
    }

    #[test]
    fn find_good_elements() {
        let a2 = group("A2");
        let id = DatumAutomorphism::identity(&a2.datum);
        let classes = delta_classes(&a2, &id);
        let cox = classes.iter().find(|c| c.elliptic).unwrap();
        let (w, gd) = find_good_element(&a2, cox).unwrap();
        assert_eq!(w.word, vec![0, 1]); // lexicographically first in C_min
        assert_eq!(gd.e, 3);
        let non_elliptic = classes.iter().find(|c| !c.elliptic && c.elements.len() == 3).unwrap();
        assert!(matches!(find_good_element(&a2, non_elliptic), Err(BraidError::NotElliptic)));
    }

    #[test]
    fn move_paths() {
        let g = group("A2");
        let path = braid_move_path(&g, &[0, 1, 0], &[1, 0, 1]).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].position, 0);
        assert!(braid_move_path(&g, &[0, 1], &[0, 1]).unwrap().is_empty());
        assert!(matches!(
            braid_move_path(&g, &[0, 1], &[1, 0]),
            Err(BraidError::DifferentClasses)
        ));
        // (s1s2)^3 agrees with the refinement of (w_I, w_I)
        let from = vec![0, 1, 0, 1, 0, 1];
        let to = vec![0, 1, 0, 0, 1, 0];
        let path = braid_move_path(&g, &from, &to).unwrap();
        assert!(!path.is_empty());
        let mut cur = from;
        for mv in &path {
            cur = apply_move(&g, &cur, mv);
        }
        assert_eq!(cur, to);
    }

    #[test]
    fn twisted_good_element() {
        let a2 = group("A2");
        let flip = DatumAutomorphism::new(&a2.datum, vec![1, 0]).unwrap();
        let classes = delta_classes(&a2, &flip);
        for c in classes.iter().filter(|c| c.elliptic) {
            let (w, gd) = find_good_element(&a2, c).unwrap();
            assert_eq!(gd.factors[0], a2.longest_element(), "w = {:?}", w.word);
        }
    }
}
