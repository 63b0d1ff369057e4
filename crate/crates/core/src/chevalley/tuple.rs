//! Tuple cells and the moves between them: refining cell points into
//! letter factors, transporting them along braid-move paths, and the
//! left-to-right normalization that extracts the trailing unipotent.

use crate::braid::BraidMove;
use crate::rings::Value;
use crate::weyl::WeylElement;

use super::{ChevError, Context, GroupElement};

/// A point of a tuple cell refined to simple-reflection letters: factor m
/// lies in U·ṡ_{letters[m]}·U, with any trailing unipotent merged into the
/// last factor of its block.
#[derive(Debug, Clone)]
pub struct LetterTuple {
    pub letters: Vec<u8>,
    pub factors: Vec<GroupElement>,
}

impl Context {
    /// Refine a cell point g ∈ UẇU into letter factors along w's canonical
    /// word: g = x(c_1)ṡ · x(c_2)ṡ ··· (x(c_k)ṡ·u).
    pub fn refine_cell_point(
        &self,
        w: &WeylElement,
        g: &GroupElement,
    ) -> Result<LetterTuple, ChevError> {
        assert!(w.length >= 1, "refinement needs a nontrivial cell");
        let (_, zc, u, _) = self.split_cell(w, g)?;
        let word = w.word.clone();
        let mut factors = Vec::with_capacity(word.len());
        for (m, &i) in word.iter().enumerate() {
            let f = self.mul(&self.gen_x(i as usize, &zc[m]), &self.gen_s(i as usize));
            factors.push(f);
        }
        let last = factors.last_mut().expect("nonempty word");
        *last = self.mul(last, &u);
        Ok(LetterTuple { letters: word, factors })
    }

    /// Refine a sequence of cell points (over the given Weyl elements) into
    /// one concatenated letter tuple.
    pub fn refine_sequence(
        &self,
        ws: &[WeylElement],
        gs: &[GroupElement],
    ) -> Result<LetterTuple, ChevError> {
        assert_eq!(ws.len(), gs.len());
        let mut letters = Vec::new();
        let mut factors = Vec::new();
        for (w, g) in ws.iter().zip(gs) {
            let t = self.refine_cell_point(w, g)?;
            letters.extend_from_slice(&t.letters);
            factors.extend(t.factors);
        }
        Ok(LetterTuple { letters, factors })
    }

    /// Regroup a letter tuple into block factors along the given Weyl
    /// elements, whose canonical words must concatenate to the letters.
    pub fn merge_letters(
        &self,
        t: &LetterTuple,
        blocks: &[WeylElement],
    ) -> Result<Vec<GroupElement>, ChevError> {
        let expected: Vec<u8> =
            blocks.iter().flat_map(|b| b.word.iter().copied()).collect();
        if expected != t.letters {
            return Err(ChevError::Inconsistency(format!(
                "letters {:?} do not refine blocks {:?}",
                t.letters, expected
            )));
        }
        let mut out = Vec::with_capacity(blocks.len());
        let mut pos = 0;
        for b in blocks {
            let g = self.mul_all(&t.factors[pos..pos + b.length].iter().collect::<Vec<_>>());
            out.push(g);
            pos += b.length;
        }
        Ok(out)
    }

    /// The unique coordinate change between the two reduced words of the
    /// rank-2 longest element: coordinates along (s_i, s_j, s_i, ...) map to
    /// coordinates along (s_j, s_i, s_j, ...) with the same product.
    pub fn rank2_rewrite(
        &self,
        i: usize,
        j: usize,
        coords: &[Value],
    ) -> Result<Vec<Value>, ChevError> {
        assert_ne!(i, j);
        let m = self.group.coxeter_mij(i, j) as usize;
        if coords.len() != m {
            return Err(ChevError::CoordinateCount(coords.len(), m));
        }
        let word_ij = alternating(i, j, m);
        let word_ji = alternating(j, i, m);
        let g = self.param_zw_word(&word_ij, coords);
        self.zw_coords(&word_ji, &g)
    }

    /// Transport a letter tuple along a braid-move path: at each move the
    /// affected block is normalized to U^wẇ·U form, rewritten to the other
    /// word, and the unipotent remainder reattached to the block's last
    /// factor. The underlying point of the orbit cell is unchanged.
    pub fn h_tilde(
        &self,
        path: &[BraidMove],
        t: &LetterTuple,
    ) -> Result<LetterTuple, ChevError> {
        let mut letters = t.letters.clone();
        let mut factors = t.factors.clone();
        for mv in path {
            let (i, j) = (mv.i as usize, mv.j as usize);
            let m = self.group.coxeter_mij(i, j) as usize;
            let pos = mv.position;
            let word_ij = alternating(i, j, m);
            if letters[pos..pos + m] != word_ij[..] {
                return Err(ChevError::Inconsistency(format!(
                    "move {:?} does not match letters {:?}",
                    mv,
                    &letters[pos..pos + m]
                )));
            }
            let prod = self.mul_all(&factors[pos..pos + m].iter().collect::<Vec<_>>());
            let (_, zc, u, _) = self.split_cell_word(&word_ij, &prod)?;
            let zc2 = self.rank2_rewrite(i, j, &zc)?;
            let word_ji = alternating(j, i, m);
            for (off, &letter) in word_ji.iter().enumerate() {
                letters[pos + off] = letter;
                factors[pos + off] =
                    self.mul(&self.gen_x(letter as usize, &zc2[off]), &self.gen_s(letter as usize));
            }
            factors[pos + m - 1] = self.mul(&factors[pos + m - 1], &u);
        }
        Ok(LetterTuple { letters, factors })
    }

    /// Left-to-right normalization of a block tuple over y_* with y_1 = w_I:
    /// returns the unique representative [z_1, ..., z_t] with z_s ∈ U^{y_s}ẏ_s
    /// together with the extracted trailing unipotent u.
    pub fn zeta(
        &self,
        blocks: &[WeylElement],
        factors: &[GroupElement],
    ) -> Result<(Vec<GroupElement>, GroupElement), ChevError> {
        assert_eq!(blocks.len(), factors.len());
        assert!(blocks.len() >= 2, "normalization needs at least two factors");
        let wi = self.group.longest_element();
        if blocks[0] != wi {
            return Err(ChevError::Inconsistency("first factor must be the longest element".into()));
        }
        let mut fs: Vec<GroupElement> = factors.to_vec();
        let t = fs.len();
        for s in 0..t - 1 {
            let (z, _, u, _) = self.split_cell(&blocks[s], &fs[s])?;
            fs[s] = z;
            fs[s + 1] = self.mul(&u, &fs[s + 1]);
        }
        let (z, _, u, _) = self.split_cell(&blocks[t - 1], &fs[t - 1])?;
        fs[t - 1] = z;
        Ok((fs, u))
    }
}

fn alternating(i: usize, j: usize, m: usize) -> Vec<u8> {
    (0..m).map(|k| if k % 2 == 0 { i as u8 } else { j as u8 }).collect()
}
