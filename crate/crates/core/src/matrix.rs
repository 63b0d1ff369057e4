//! Square matrices: exact matrices over a [`Ring`] and integer matrices
//! with determinant and Smith normal form.

use crate::rings::{Ring, Value};

/// A square matrix of ring values, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    pub n: usize,
    pub entries: Vec<Value>,
}

impl Mat {
    pub fn from_rows(rows: Vec<Vec<Value>>) -> Mat {
        let n = rows.len();
        let entries: Vec<Value> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), n * n, "matrix must be square");
        Mat { n, entries }
    }

    pub fn identity(ring: &Ring, n: usize) -> Mat {
        let mut entries = vec![ring.zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = ring.one();
        }
        Mat { n, entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Value {
        &self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Value) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(ring: &Ring, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.n, b.n, "dimension mismatch");
        let n = a.n;
        let zero = ring.zero();
        let mut entries = vec![zero.clone(); n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = a.get(i, k);
                if *aik == zero {
                    continue;
                }
                for j in 0..n {
                    let bkj = b.get(k, j);
                    if *bkj == zero {
                        continue;
                    }
                    let prod = ring.mul(aik, bkj);
                    entries[i * n + j] = ring.add(&entries[i * n + j], &prod);
                }
            }
        }
        Mat { n, entries }
    }

    pub fn add(ring: &Ring, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.n, b.n);
        Mat {
            n: a.n,
            entries: a.entries.iter().zip(&b.entries).map(|(x, y)| ring.add(x, y)).collect(),
        }
    }

    pub fn sub(ring: &Ring, a: &Mat, b: &Mat) -> Mat {
        assert_eq!(a.n, b.n);
        Mat {
            n: a.n,
            entries: a.entries.iter().zip(&b.entries).map(|(x, y)| ring.sub(x, y)).collect(),
        }
    }

    pub fn scale(&self, ring: &Ring, c: &Value) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(|x| ring.mul(x, c)).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut entries = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                entries.push(self.get(i, j).clone());
            }
        }
        Mat { n, entries }
    }

    pub fn map_entries(&self, f: impl Fn(&Value) -> Value) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(f).collect() }
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == Mat::identity(ring, self.n)
    }

    pub fn is_zero(&self, ring: &Ring) -> bool {
        let zero = ring.zero();
        self.entries.iter().all(|e| *e == zero)
    }

    /// True iff upper triangular with 1 on the diagonal.
    pub fn is_upper_unitriangular(&self, ring: &Ring) -> bool {
        let (zero, one) = (ring.zero(), ring.one());
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.get(i, j);
                if i == j && *e != one {
                    return false;
                }
                if i > j && *e != zero {
                    return false;
                }
            }
        }
        true
    }

    /// Row-major rendering with ring-value syntax, one row per line.
    pub fn render(&self, ring: &Ring) -> String {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| ring.format_value(self.get(i, j)))
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// A square integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IMat {
    pub n: usize,
    pub entries: Vec<i64>,
}

impl IMat {
    pub fn zero(n: usize) -> IMat {
        IMat { n, entries: vec![0; n * n] }
    }

    pub fn identity(n: usize) -> IMat {
        let mut m = IMat::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<i64>>) -> IMat {
        let n = rows.len();
        let entries: Vec<i64> = rows.into_iter().flatten().collect();
        assert_eq!(entries.len(), n * n, "matrix must be square");
        IMat { n, entries }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(a: &IMat, b: &IMat) -> IMat {
        assert_eq!(a.n, b.n);
        let n = a.n;
        let mut m = IMat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let aik = a.get(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    m.entries[i * n + j] += aik * b.get(k, j);
                }
            }
        }
        m
    }

    pub fn sub(a: &IMat, b: &IMat) -> IMat {
        assert_eq!(a.n, b.n);
        IMat { n: a.n, entries: a.entries.iter().zip(&b.entries).map(|(x, y)| x - y).collect() }
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.entries.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let swap = (k + 1..n).find(|&i| a[i * n + k] != 0);
                match swap {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j];
                    a[i * n + j] = v / prev;
                }
                a[i * n + k] = 0;
            }
            prev = a[k * n + k];
        }
        let d = sign * a[(n - 1) * n + (n - 1)];
        i64::try_from(d).expect("determinant overflow")
    }

    /// Convert into a matrix over `ring` via the canonical ℤ → A map.
    pub fn to_mat(&self, ring: &Ring) -> Mat {
        Mat { n: self.n, entries: self.entries.iter().map(|&x| ring.from_i64(x)).collect() }
    }
}

/// Invariant factors d_1 | d_2 | ... | d_n (including 1s and 0s) of an
/// integer matrix, by the classical Smith reduction.
pub fn smith_invariant_factors(m: &IMat) -> Vec<i64> {
    let n = m.n;
    let mut a: Vec<i128> = m.entries.iter().map(|&x| x as i128).collect();
    let at = |a: &Vec<i128>, i: usize, j: usize| a[i * n + j];

    for t in 0..n {
        loop {
            // find a nonzero entry of minimal absolute value in the remaining block
            let mut piv: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    let v = at(&a, i, j);
                    if v != 0 && piv.map_or(true, |(pi, pj)| v.abs() < at(&a, pi, pj).abs()) {
                        piv = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match piv {
                Some(p) => p,
                None => {
                    // remaining block is zero
                    return finish_factors(a, n);
                }
            };
            // move pivot to (t, t)
            if pi != t {
                for j in 0..n {
                    a.swap(t * n + j, pi * n + j);
                }
            }
            if pj != t {
                for i in 0..n {
                    a.swap(i * n + t, i * n + pj);
                }
            }
            let p = at(&a, t, t);
            // eliminate row and column t
            let mut dirty = false;
            for i in t + 1..n {
                let q = at(&a, i, t).div_euclid(p);
                if q != 0 {
                    for j in 0..n {
                        a[i * n + j] -= q * at(&a, t, j);
                    }
                }
                if at(&a, i, t) != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..n {
                let q = at(&a, t, j).div_euclid(p);
                if q != 0 {
                    for i in 0..n {
                        a[i * n + j] -= q * at(&a, i, t);
                    }
                }
                if at(&a, t, j) != 0 {
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide every remaining entry; if not, mix that row in
            let offender = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| at(&a, i, j) % p != 0);
            match offender {
                Some((i, _)) => {
                    for j in 0..n {
                        let v = at(&a, i, j);
                        a[t * n + j] += v;
                    }
                }
                None => break,
            }
        }
    }
    finish_factors(a, n)
}

fn finish_factors(a: Vec<i128>, n: usize) -> Vec<i64> {
    let mut d: Vec<i64> = (0..n)
        .map(|i| i64::try_from(a[i * n + i].abs()).expect("invariant factor overflow"))
        .collect();
    d.sort_by_key(|&x| if x == 0 { i64::MAX } else { x });
    d
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_small() {
        let m = IMat::from_rows(vec![vec![2, 1], vec![1, 2]]);
        assert_eq!(m.det(), 3);
        let s = IMat::from_rows(vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(s.det(), 1);
        assert_eq!(IMat::identity(4).det(), 1);
    }

    #[test]
    fn smith_basic() {
        // diag(2) for the 1x1 matrix (-2)
        assert_eq!(smith_invariant_factors(&IMat::from_rows(vec![vec![-2]])), vec![2]);
        // s1s2 - 1 on the A2 weight lattice has det 3, factors (1, 3)
        let m = IMat::from_rows(vec![vec![-2, -1], vec![1, -1]]);
        assert_eq!(smith_invariant_factors(&m), vec![1, 3]);
        // singular matrix keeps a zero factor
        let m = IMat::from_rows(vec![vec![2, 2], vec![1, 1]]);
        assert_eq!(smith_invariant_factors(&m), vec![1, 0]);
    }

    #[test]
    fn smith_divisibility() {
        let m = IMat::from_rows(vec![vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 5]]);
        let f = smith_invariant_factors(&m);
        assert_eq!(f, vec![1, 1, 30]);
        for w in f.windows(2) {
            if w[0] != 0 {
                assert!(w[1] == 0 || w[1] % w[0] == 0);
            }
        }
    }
}
