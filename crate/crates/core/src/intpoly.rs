//! Sparse multivariate polynomials over the integers.
//!
//! Terms are kept in canonical form: monomials sorted in descending
//! graded-lex order, no zero coefficients, exponent vectors all of the
//! same length. Equality of polynomials is structural equality of the
//! canonical form. The text format is `c*X1^e1*X2^e2 + ...` with terms
//! printed leading-term first.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Compare exponent vectors in graded-lex order (total degree first, then lex).
fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

/// A multivariate polynomial in `nvars` variables `X1..Xn` with `BigInt`
/// coefficients, in canonical sparse form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MPolyZ {
    nvars: usize,
    /// `(exponents, coefficient)` pairs, descending graded-lex, coefficients nonzero.
    terms: Vec<(Vec<u32>, BigInt)>,
}

impl MPolyZ {
    pub fn zero(nvars: usize) -> Self {
        MPolyZ { nvars, terms: Vec::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        if c.is_zero() {
            return Self::zero(nvars);
        }
        MPolyZ { nvars, terms: vec![(vec![0; nvars], c)] }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, 1)
    }

    /// The variable `X(idx+1)` (zero-based index).
    pub fn var(nvars: usize, idx: usize) -> Self {
        assert!(idx < nvars, "variable index {idx} out of range for {nvars} vars");
        let mut e = vec![0; nvars];
        e[idx] = 1;
        MPolyZ { nvars, terms: vec![(e, BigInt::one())] }
    }

    /// Build from arbitrary (exponents, coefficient) pairs, normalizing.
    pub fn from_terms(nvars: usize, raw: Vec<(Vec<u32>, BigInt)>) -> Self {
        let mut raw: Vec<_> = raw.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        for (e, _) in &raw {
            assert_eq!(e.len(), nvars, "exponent vector length mismatch");
        }
        raw.sort_by(|a, b| grlex(&b.0, &a.0));
        let mut terms: Vec<(Vec<u32>, BigInt)> = Vec::with_capacity(raw.len());
        for (e, c) in raw {
            match terms.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => terms.push((e, c)),
            }
        }
        terms.retain(|(_, c)| !c.is_zero());
        MPolyZ { nvars, terms }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[(Vec<u32>, BigInt)] {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && self.terms[0].0.iter().all(|&e| e == 0)
    }

    /// True iff this is exactly the variable `X(idx+1)`.
    pub fn is_var(&self, idx: usize) -> bool {
        self.terms.len() == 1 && self.terms[0].1.is_one() && {
            let e = &self.terms[0].0;
            e.iter().enumerate().all(|(j, &x)| if j == idx { x == 1 } else { x == 0 })
        }
    }

    /// If the polynomial is `s*X(idx+1)` for a single variable and `s = ±1`,
    /// return `(idx, s)`.
    pub fn as_signed_var(&self) -> Option<(usize, i8)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = &self.terms[0];
        let idx = {
            let nz: Vec<usize> = e.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, _)| j).collect();
            if nz.len() != 1 || e[nz[0]] != 1 {
                return None;
            }
            nz[0]
        };
        if c.is_one() {
            Some((idx, 1))
        } else if (-c).is_one() {
            Some((idx, -1))
        } else {
            None
        }
    }

    /// If constant (or zero), return the constant value.
    pub fn as_constant(&self) -> Option<BigInt> {
        if self.terms.is_empty() {
            return Some(BigInt::zero());
        }
        if self.terms.len() == 1 && self.terms[0].0.iter().all(|&e| e == 0) {
            return Some(self.terms[0].1.clone());
        }
        None
    }

    pub fn total_degree(&self) -> u64 {
        self.terms.first().map_or(0, |(e, _)| e.iter().map(|&x| x as u64).sum())
    }

    pub fn neg(&self) -> Self {
        MPolyZ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        // merge two sorted term lists
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            match grlex(&self.terms[i].0, &other.terms[j].0) {
                Ordering::Greater => {
                    terms.push(self.terms[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    terms.push(other.terms[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    let c = &self.terms[i].1 + &other.terms[j].1;
                    if !c.is_zero() {
                        terms.push((self.terms[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        MPolyZ { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "nvars mismatch");
        let mut raw = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(&x, &y)| x + y).collect();
                raw.push((e, ca * cb));
            }
        }
        Self::from_terms(self.nvars, raw)
    }

    pub fn mul_scalar(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPolyZ {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, a)| (e.clone(), a * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.nvars);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Formal partial derivative with respect to variable `idx` (zero-based).
    pub fn derivative(&self, idx: usize) -> Self {
        assert!(idx < self.nvars);
        let raw = self
            .terms
            .iter()
            .filter(|(e, _)| e[idx] > 0)
            .map(|(e, c)| {
                let mut e2 = e.clone();
                let k = e2[idx];
                e2[idx] -= 1;
                (e2, c * BigInt::from(k))
            })
            .collect();
        Self::from_terms(self.nvars, raw)
    }

    /// Substitute `args[j]` for variable `Xj+1`; `args` must have length `nvars`.
    /// All `args` share a common variable count, which the result adopts.
    pub fn substitute(&self, args: &[MPolyZ]) -> Self {
        assert_eq!(args.len(), self.nvars, "substitution arity mismatch");
        let out_vars = args.first().map_or(0, |p| p.nvars);
        let mut acc = MPolyZ::zero(out_vars);
        for (e, c) in &self.terms {
            let mut t = MPolyZ::constant(out_vars, c.clone());
            for (j, &k) in e.iter().enumerate() {
                if k > 0 {
                    t = t.mul(&args[j].pow(k));
                }
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Evaluate with coefficients and variables mapped into an arbitrary
    /// commutative-ring interface supplied by the caller.
    pub fn eval_generic<T: Clone>(
        &self,
        point: &[T],
        from_int: &dyn Fn(&BigInt) -> T,
        add: &dyn Fn(&T, &T) -> T,
        mul: &dyn Fn(&T, &T) -> T,
    ) -> T {
        assert_eq!(point.len(), self.nvars, "evaluation arity mismatch");
        let mut acc = from_int(&BigInt::zero());
        for (e, c) in &self.terms {
            let mut t = from_int(c);
            for (j, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    t = mul(&t, &point[j]);
                }
            }
            acc = add(&acc, &t);
        }
        acc
    }

    /// Parse the textual format produced by `Display`. Accepts `+`/`-`
    /// separated terms of `*`-separated factors `<int>` or `Xi[^e]`.
    pub fn parse(nvars: usize, s: &str) -> Result<Self, String> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty polynomial".into());
        }
        // split into signed terms at top level
        let mut raw: Vec<(Vec<u32>, BigInt)> = Vec::new();
        let mut rest = s;
        let mut sign = BigInt::one();
        if let Some(r) = rest.strip_prefix('-') {
            sign = -sign;
            rest = r.trim_start();
        } else if let Some(r) = rest.strip_prefix('+') {
            rest = r.trim_start();
        }
        loop {
            let term_end = rest
                .char_indices()
                .find(|&(i, ch)| (ch == '+' || ch == '-') && i > 0)
                .map(|(i, _)| i)
                .unwrap_or(rest.len());
            let (term_str, tail) = rest.split_at(term_end);
            let term_str = term_str.trim();
            if term_str.is_empty() {
                return Err(format!("empty term in {s:?}"));
            }
            let mut coeff = sign.clone();
            let mut exps = vec![0u32; nvars];
            for factor in term_str.split('*') {
                let f = factor.trim();
                if let Some(vpart) = f.strip_prefix('X') {
                    let (vnum, epart) = match vpart.find('^') {
                        Some(p) => (&vpart[..p], Some(&vpart[p + 1..])),
                        None => (vpart, None),
                    };
                    let vi: usize = vnum.parse().map_err(|_| format!("bad variable {f:?}"))?;
                    if vi == 0 || vi > nvars {
                        return Err(format!("variable X{vi} out of range 1..={nvars}"));
                    }
                    let e: u32 = match epart {
                        Some(ep) => ep.trim().parse().map_err(|_| format!("bad exponent {f:?}"))?,
                        None => 1,
                    };
                    exps[vi - 1] += e;
                } else {
                    let c: BigInt = f.parse().map_err(|_| format!("bad coefficient {f:?}"))?;
                    coeff *= c;
                }
            }
            raw.push((exps, coeff));
            if tail.is_empty() {
                break;
            }
            sign = if tail.starts_with('-') { -BigInt::one() } else { BigInt::one() };
            rest = tail[1..].trim_start();
        }
        Ok(Self::from_terms(nvars, raw))
    }
}

impl fmt::Display for MPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || e.iter().all(|&x| x == 0) {
                factors.push(abs.to_string());
            }
            for (j, &k) in e.iter().enumerate() {
                if k == 1 {
                    factors.push(format!("X{}", j + 1));
                } else if k > 1 {
                    factors.push(format!("X{}^{}", j + 1, k));
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for MPolyZ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl PartialOrd for MPolyZ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for MPolyZ {
    fn cmp(&self, other: &Self) -> Ordering {
        // deterministic total order: compare term lists lexicographically
        let n = self.terms.len().min(other.terms.len());
        for i in 0..n {
            let o = grlex(&self.terms[i].0, &other.terms[i].0)
                .then_with(|| self.terms[i].1.cmp(&other.terms[i].1));
            if o != Ordering::Equal {
                return o;
            }
        }
        self.terms.len().cmp(&other.terms.len())
    }
}
