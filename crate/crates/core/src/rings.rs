//! Commutative rings with exact arithmetic: ℤ, ℚ, ℤ/m, F_q (q = p^k), and
//! multivariate polynomial rings over ℤ.
//!
//! A [`Ring`] is a descriptor; a [`Value`] is a payload in canonical form.
//! All operations are context-style: `ring.mul(&a, &b)`. Values of finite
//! rings are enumerable in a fixed order (0 first, 1 second), which the
//! exhaustive verification harness relies on.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use thiserror::Error;

use crate::intpoly::MPolyZ;

#[derive(Debug, Error)]
pub enum RingError {
    #[error("malformed ring spec {0:?}: {1}")]
    BadSpec(String, String),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("ring {0} is infinite")]
    InfiniteRing(String),
    #[error("value does not belong to ring {0}")]
    DescriptorMismatch(String),
    #[error("division by non-unit in {0}")]
    NonUnit(String),
    #[error("cannot parse {0:?} as an element of {1}")]
    BadValue(String, String),
    #[error("invalid ring map: {0}")]
    BadMap(String),
}

/// Data of a finite field F_{p^k} = F_p[t]/(f), with `f` monic irreducible.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FqData {
    pub p: u64,
    pub k: u32,
    pub q: u64,
    /// Coefficients of the modulus `f = t^k + modulus[k-1] t^{k-1} + ... + modulus[0]`
    /// (the leading 1 is implicit; empty for k = 1).
    pub modulus: Vec<u64>,
}

/// Descriptor of a supported commutative ring with 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Ring {
    Integers,
    Rationals,
    IntegersMod { modulus: u64 },
    FiniteField(Arc<FqData>),
    PolynomialsOverZ { vars: Arc<Vec<String>> },
}

/// An element of one of the supported rings, in canonical form: residues
/// reduced, rationals in lowest terms (guaranteed by `BigRational`),
/// polynomials sorted with no zero coefficients, field elements packed as
/// base-p digit vectors `d0 + d1 p + ... + d_{k-1} p^{k-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(BigInt),
    Rat(BigRational),
    Mod(u64),
    Gf(u64),
    Poly(MPolyZ),
}

/// Factor `q` as `p^k` with `p` prime, if possible.
fn prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut m = q;
            let mut k = 0;
            while m % p == 0 {
                m /= p;
                k += 1;
            }
            return if m == 1 { Some((p, k)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Conway polynomials (non-leading coefficients, constant term first) for
/// the prime powers p^k <= 64 with k > 1.
fn conway(p: u64, k: u32) -> Option<Vec<u64>> {
    let c: &[u64] = match (p, k) {
        (2, 2) => &[1, 1],
        (2, 3) => &[1, 1, 0],
        (2, 4) => &[1, 1, 0, 0],
        (2, 5) => &[1, 0, 1, 0, 0],
        (2, 6) => &[1, 1, 0, 1, 1, 0],
        (3, 2) => &[2, 2],
        (3, 3) => &[1, 2, 0],
        (5, 2) => &[2, 4],
        (7, 2) => &[3, 6],
        _ => return None,
    };
    Some(c.to_vec())
}

// ---- dense univariate arithmetic over F_p, for field-extension payloads ----

fn upoly_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn upoly_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    upoly_trim(&mut out);
    out
}

/// Reduce `a` modulo the monic polynomial `t^k + m[k-1] t^{k-1} + ... + m[0]`.
fn upoly_reduce(mut a: Vec<u64>, m: &[u64], p: u64) -> Vec<u64> {
    let k = m.len();
    while a.len() > k {
        let d = a.len() - 1;
        let c = a[d];
        a.pop();
        if c != 0 {
            for (i, &mi) in m.iter().enumerate() {
                let idx = d - k + i;
                a[idx] = (a[idx] + (p - mi % p) % p * c) % p;
            }
        }
        upoly_trim(&mut a);
    }
    a
}

fn upoly_is_irreducible(f_low: &[u64], k: u32, p: u64) -> bool {
    // trial division by all monic polynomials of degree 1..=k/2
    for d in 1..=(k / 2).max(if k >= 2 { 1 } else { 0 }) {
        let count = p.pow(d);
        for code in 0..count {
            // divisor g = t^d + c_{d-1} t^{d-1} + ... + c_0
            let mut g: Vec<u64> = Vec::with_capacity(d as usize + 1);
            let mut c = code;
            for _ in 0..d {
                g.push(c % p);
                c /= p;
            }
            g.push(1);
            // remainder of f mod g
            let mut rem: Vec<u64> = f_low.to_vec();
            rem.resize(k as usize, 0);
            rem.push(1); // leading coefficient of f
            upoly_trim(&mut rem);
            let glow = &g[..d as usize];
            rem = upoly_reduce(rem, glow, p);
            if rem.is_empty() {
                return false;
            }
        }
    }
    true
}

fn least_irreducible(p: u64, k: u32) -> Vec<u64> {
    // smallest non-leading coefficient vector in base-p counting order
    let total = p.checked_pow(k).expect("field order overflow");
    for code in 0..total {
        let mut low: Vec<u64> = Vec::with_capacity(k as usize);
        let mut c = code;
        for _ in 0..k {
            low.push(c % p);
            c /= p;
        }
        if upoly_is_irreducible(&low, k, p) {
            return low;
        }
    }
    unreachable!("an irreducible polynomial of degree {k} over F_{p} exists");
}

fn pack(digits: &[u64], p: u64) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * p + d)
}

fn unpack(mut v: u64, p: u64, k: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(k as usize);
    for _ in 0..k {
        out.push(v % p);
        v /= p;
    }
    out
}

impl Ring {
    /// Parse a ring-specification string:
    /// `"Z" | "Q" | "Zmod:<m>" | "Fq:<p^k>" | "PolyZ:<v1,v2,...>"`.
    pub fn parse(spec: &str) -> Result<Ring, RingError> {
        let spec = spec.trim();
        match spec {
            "Z" => return Ok(Ring::Integers),
            "Q" => return Ok(Ring::Rationals),
            _ => {}
        }
        if let Some(m) = spec.strip_prefix("Zmod:") {
            let m: u64 = m
                .trim()
                .parse()
                .map_err(|_| RingError::BadSpec(spec.into(), "bad modulus".into()))?;
            if m < 2 {
                return Err(RingError::ModulusTooSmall(m));
            }
            return Ok(Ring::IntegersMod { modulus: m });
        }
        if let Some(q) = spec.strip_prefix("Fq:") {
            let q: u64 = q
                .trim()
                .parse()
                .map_err(|_| RingError::BadSpec(spec.into(), "bad field order".into()))?;
            let (p, k) = prime_power(q).ok_or(RingError::NotPrimePower(q))?;
            let modulus = if k == 1 {
                vec![]
            } else {
                match conway(p, k) {
                    Some(c) => c,
                    None => least_irreducible(p, k),
                }
            };
            return Ok(Ring::FiniteField(Arc::new(FqData { p, k, q, modulus })));
        }
        if let Some(vs) = spec.strip_prefix("PolyZ:") {
            let vars: Vec<String> = vs.split(',').map(|s| s.trim().to_string()).collect();
            if vars.is_empty() || vars.iter().any(|v| v.is_empty()) {
                return Err(RingError::BadSpec(spec.into(), "empty variable name".into()));
            }
            for i in 0..vars.len() {
                for j in i + 1..vars.len() {
                    if vars[i] == vars[j] {
                        return Err(RingError::BadSpec(
                            spec.into(),
                            format!("duplicate variable {:?}", vars[i]),
                        ));
                    }
                }
            }
            return Ok(Ring::PolynomialsOverZ { vars: Arc::new(vars) });
        }
        Err(RingError::BadSpec(spec.into(), "unknown ring kind".into()))
    }

    pub fn spec_string(&self) -> String {
        match self {
            Ring::Integers => "Z".into(),
            Ring::Rationals => "Q".into(),
            Ring::IntegersMod { modulus } => format!("Zmod:{modulus}"),
            Ring::FiniteField(d) => format!("Fq:{}", d.q),
            Ring::PolynomialsOverZ { vars } => format!("PolyZ:{}", vars.join(",")),
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ring::IntegersMod { .. } | Ring::FiniteField(_))
    }

    pub fn size(&self) -> Option<u64> {
        match self {
            Ring::IntegersMod { modulus } => Some(*modulus),
            Ring::FiniteField(d) => Some(d.q),
            _ => None,
        }
    }

    pub fn num_poly_vars(&self) -> usize {
        match self {
            Ring::PolynomialsOverZ { vars } => vars.len(),
            _ => 0,
        }
    }

    pub fn zero(&self) -> Value {
        match self {
            Ring::Integers => Value::Int(BigInt::zero()),
            Ring::Rationals => Value::Rat(BigRational::zero()),
            Ring::IntegersMod { .. } => Value::Mod(0),
            Ring::FiniteField(_) => Value::Gf(0),
            Ring::PolynomialsOverZ { vars } => Value::Poly(MPolyZ::zero(vars.len())),
        }
    }

    pub fn one(&self) -> Value {
        self.from_int(&BigInt::one())
    }

    /// The unique ring homomorphism ℤ → A applied to `n`.
    pub fn from_int(&self, n: &BigInt) -> Value {
        match self {
            Ring::Integers => Value::Int(n.clone()),
            Ring::Rationals => Value::Rat(BigRational::from_integer(n.clone())),
            Ring::IntegersMod { modulus } => {
                Value::Mod(n.mod_floor(&BigInt::from(*modulus)).to_u64().unwrap())
            }
            Ring::FiniteField(d) => {
                Value::Gf(n.mod_floor(&BigInt::from(d.p)).to_u64().unwrap())
            }
            Ring::PolynomialsOverZ { vars } => Value::Poly(MPolyZ::constant(vars.len(), n.clone())),
        }
    }

    pub fn from_i64(&self, n: i64) -> Value {
        self.from_int(&BigInt::from(n))
    }

    /// Variable `idx` (zero-based) of a polynomial ring.
    pub fn poly_var(&self, idx: usize) -> Value {
        match self {
            Ring::PolynomialsOverZ { vars } => Value::Poly(MPolyZ::var(vars.len(), idx)),
            _ => panic!("poly_var on non-polynomial ring {}", self.spec_string()),
        }
    }

    /// Payload-shape and range check: does `v` belong to this ring?
    pub fn contains(&self, v: &Value) -> bool {
        match (self, v) {
            (Ring::Integers, Value::Int(_)) => true,
            (Ring::Rationals, Value::Rat(_)) => true,
            (Ring::IntegersMod { modulus }, Value::Mod(x)) => x < modulus,
            (Ring::FiniteField(d), Value::Gf(x)) => *x < d.q,
            (Ring::PolynomialsOverZ { vars }, Value::Poly(p)) => p.nvars() == vars.len(),
            _ => false,
        }
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        *v == self.zero()
    }

    pub fn is_one(&self, v: &Value) -> bool {
        *v == self.one()
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Ring::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (Ring::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (Ring::IntegersMod { modulus }, Value::Mod(x), Value::Mod(y)) => {
                Value::Mod((x + y) % modulus)
            }
            (Ring::FiniteField(d), Value::Gf(x), Value::Gf(y)) => {
                let (xs, ys) = (unpack(*x, d.p, d.k), unpack(*y, d.p, d.k));
                let sum: Vec<u64> = xs.iter().zip(&ys).map(|(u, v)| (u + v) % d.p).collect();
                Value::Gf(pack(&sum, d.p))
            }
            (Ring::PolynomialsOverZ { .. }, Value::Poly(x), Value::Poly(y)) => Value::Poly(x.add(y)),
            _ => panic!("add: values not in ring {}", self.spec_string()),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match (self, a) {
            (Ring::Integers, Value::Int(x)) => Value::Int(-x),
            (Ring::Rationals, Value::Rat(x)) => Value::Rat(-x),
            (Ring::IntegersMod { modulus }, Value::Mod(x)) => Value::Mod((modulus - x) % modulus),
            (Ring::FiniteField(d), Value::Gf(x)) => {
                let xs = unpack(*x, d.p, d.k);
                let neg: Vec<u64> = xs.iter().map(|u| (d.p - u) % d.p).collect();
                Value::Gf(pack(&neg, d.p))
            }
            (Ring::PolynomialsOverZ { .. }, Value::Poly(x)) => Value::Poly(x.neg()),
            _ => panic!("neg: value not in ring {}", self.spec_string()),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match (self, a, b) {
            (Ring::Integers, Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            (Ring::Rationals, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (Ring::IntegersMod { modulus }, Value::Mod(x), Value::Mod(y)) => {
                Value::Mod(((*x as u128 * *y as u128) % *modulus as u128) as u64)
            }
            (Ring::FiniteField(d), Value::Gf(x), Value::Gf(y)) => {
                if d.k == 1 {
                    return Value::Gf(((*x as u128 * *y as u128) % d.p as u128) as u64);
                }
                let (xs, ys) = (unpack(*x, d.p, d.k), unpack(*y, d.p, d.k));
                let prod = upoly_mul(&xs, &ys, d.p);
                let mut red = upoly_reduce(prod, &d.modulus, d.p);
                red.resize(d.k as usize, 0);
                Value::Gf(pack(&red, d.p))
            }
            (Ring::PolynomialsOverZ { .. }, Value::Poly(x), Value::Poly(y)) => Value::Poly(x.mul(y)),
            _ => panic!("mul: values not in ring {}", self.spec_string()),
        }
    }

    pub fn pow(&self, a: &Value, mut n: u64) -> Value {
        let mut base = a.clone();
        let mut acc = self.one();
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            n >>= 1;
            if n > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        match (self, a) {
            (Ring::Integers, Value::Int(x)) => x.is_one() || (-x).is_one(),
            (Ring::Rationals, Value::Rat(x)) => !x.is_zero(),
            (Ring::IntegersMod { modulus }, Value::Mod(x)) => x.gcd(modulus) == 1,
            (Ring::FiniteField(_), Value::Gf(x)) => *x != 0,
            (Ring::PolynomialsOverZ { .. }, Value::Poly(p)) => {
                p.as_constant().map_or(false, |c| c.is_one() || (-c).is_one())
            }
            _ => false,
        }
    }

    /// Multiplicative inverse; only defined for units.
    pub fn inv(&self, a: &Value) -> Result<Value, RingError> {
        if !self.is_unit(a) {
            return Err(RingError::NonUnit(self.spec_string()));
        }
        Ok(match (self, a) {
            (Ring::Integers, Value::Int(x)) => Value::Int(x.clone()),
            (Ring::Rationals, Value::Rat(x)) => Value::Rat(x.recip()),
            (Ring::IntegersMod { modulus }, Value::Mod(x)) => {
                let e = BigInt::from(*x).extended_gcd(&BigInt::from(*modulus));
                Value::Mod(e.x.mod_floor(&BigInt::from(*modulus)).to_u64().unwrap())
            }
            (Ring::FiniteField(d), Value::Gf(_)) => self.pow(a, d.q - 2),
            (Ring::PolynomialsOverZ { .. }, Value::Poly(p)) => Value::Poly(p.clone()),
            _ => unreachable!(),
        })
    }

    /// All elements, exactly once, in a deterministic order (0 first, 1 second).
    pub fn enumerate(&self) -> Result<Vec<Value>, RingError> {
        match self {
            Ring::IntegersMod { modulus } => Ok((0..*modulus).map(Value::Mod).collect()),
            Ring::FiniteField(d) => Ok((0..d.q).map(Value::Gf).collect()),
            _ => Err(RingError::InfiniteRing(self.spec_string())),
        }
    }

    pub fn format_value(&self, v: &Value) -> String {
        match (self, v) {
            (_, Value::Int(x)) => x.to_string(),
            (_, Value::Rat(x)) => {
                if x.is_integer() {
                    x.numer().to_string()
                } else {
                    format!("{}/{}", x.numer(), x.denom())
                }
            }
            (_, Value::Mod(x)) => x.to_string(),
            (Ring::FiniteField(d), Value::Gf(x)) => {
                if d.k == 1 {
                    return x.to_string();
                }
                let digits = unpack(*x, d.p, d.k);
                let mut parts: Vec<String> = Vec::new();
                for (i, &c) in digits.iter().enumerate().rev() {
                    if c == 0 {
                        continue;
                    }
                    let m = match i {
                        0 => c.to_string(),
                        1 if c == 1 => "t".into(),
                        1 => format!("{c}*t"),
                        _ if c == 1 => format!("t^{i}"),
                        _ => format!("{c}*t^{i}"),
                    };
                    parts.push(m);
                }
                if parts.is_empty() {
                    "0".into()
                } else {
                    parts.join("+")
                }
            }
            (Ring::PolynomialsOverZ { vars }, Value::Poly(p)) => fmt_poly_named(p, vars),
            _ => panic!("format_value: value not in ring {}", self.spec_string()),
        }
    }

    pub fn parse_value(&self, s: &str) -> Result<Value, RingError> {
        let bad = || RingError::BadValue(s.into(), self.spec_string());
        let s = s.trim();
        match self {
            Ring::Integers => Ok(Value::Int(s.parse().map_err(|_| bad())?)),
            Ring::Rationals => {
                let v = match s.split_once('/') {
                    Some((n, d)) => {
                        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                        if d.is_zero() {
                            return Err(bad());
                        }
                        BigRational::new(n, d)
                    }
                    None => BigRational::from_integer(s.parse().map_err(|_| bad())?),
                };
                Ok(Value::Rat(v))
            }
            Ring::IntegersMod { .. } | Ring::FiniteField(_) => {
                // accept an integer (mapped canonically) or, for k > 1, the t-polynomial form
                if let Ok(n) = s.parse::<BigInt>() {
                    return Ok(self.from_int(&n));
                }
                if let Ring::FiniteField(d) = self {
                    if d.k > 1 {
                        let mp = MPolyZ::parse(1, &s.replace('t', "X1")).map_err(|_| bad())?;
                        // the generator t has digit vector (0,1,0,...), packed value p
                        let t = Value::Gf(d.p);
                        return Ok(mp.eval_generic(
                            &[t],
                            &|c| self.from_int(c),
                            &|a, b| self.add(a, b),
                            &|a, b| self.mul(a, b),
                        ));
                    }
                }
                Err(bad())
            }
            Ring::PolynomialsOverZ { vars } => {
                let mut src = s.to_string();
                // map names to positional variables, longest names first
                let mut order: Vec<usize> = (0..vars.len()).collect();
                order.sort_by_key(|&i| std::cmp::Reverse(vars[i].len()));
                for i in order {
                    src = src.replace(&vars[i], &format!("X{}", i + 1));
                }
                Ok(Value::Poly(MPolyZ::parse(vars.len(), &src).map_err(|_| bad())?))
            }
        }
    }
}

fn fmt_poly_named(p: &MPolyZ, vars: &[String]) -> String {
    let plain = p.to_string();
    // positional X1..Xn never collide with user variable names after this
    // single pass because replacement goes from the highest index down.
    let mut out = plain;
    for i in (0..vars.len()).rev() {
        out = out.replace(&format!("X{}", i + 1), &vars[i]);
    }
    out
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.spec_string())
    }
}

/// A structure-preserving map between supported rings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingMap {
    pub source: Ring,
    pub target: Ring,
    pub kind: MapKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapKind {
    Identity,
    /// The canonical ℤ → ℤ/m or ℤ → F_q map.
    Reduction,
    /// ℤ → ℚ or ℤ → ℤ[vars].
    Inclusion,
    /// x ↦ x^q on F_{q^k}.
    Frobenius { q: u64 },
    /// Evaluate a polynomial at a point of the target ring.
    Evaluation { point: Vec<Value> },
}

impl RingMap {
    pub fn new(source: Ring, target: Ring, kind: MapKind) -> Result<RingMap, RingError> {
        match &kind {
            MapKind::Identity => {
                if source != target {
                    return Err(RingError::BadMap("identity requires equal rings".into()));
                }
            }
            MapKind::Reduction => {
                if source != Ring::Integers || !target.is_finite() {
                    return Err(RingError::BadMap(
                        "reduction maps Z onto a finite ring".into(),
                    ));
                }
            }
            MapKind::Inclusion => {
                let ok = source == Ring::Integers
                    && matches!(target, Ring::Rationals | Ring::PolynomialsOverZ { .. });
                if !ok {
                    return Err(RingError::BadMap("inclusion maps Z into Q or Z[vars]".into()));
                }
            }
            MapKind::Frobenius { q } => {
                let ok = match (&source, &target) {
                    (Ring::FiniteField(d), Ring::FiniteField(d2)) if d == d2 => {
                        let (p, _) = prime_power(*q).ok_or(RingError::NotPrimePower(*q))?;
                        p == d.p
                    }
                    _ => false,
                };
                if !ok {
                    return Err(RingError::BadMap(format!(
                        "Frobenius({q}) needs a finite field of matching characteristic"
                    )));
                }
            }
            MapKind::Evaluation { point } => {
                let n = source.num_poly_vars();
                if !matches!(source, Ring::PolynomialsOverZ { .. }) || point.len() != n {
                    return Err(RingError::BadMap(
                        "evaluation maps Z[vars] at a point of matching arity".into(),
                    ));
                }
                if !point.iter().all(|v| target.contains(v)) {
                    return Err(RingError::BadMap("evaluation point not in target ring".into()));
                }
            }
        }
        Ok(RingMap { source, target, kind })
    }

    pub fn identity(ring: Ring) -> RingMap {
        RingMap { source: ring.clone(), target: ring, kind: MapKind::Identity }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self.kind, MapKind::Identity)
    }

    pub fn apply(&self, v: &Value) -> Result<Value, RingError> {
        if !self.source.contains(v) {
            return Err(RingError::DescriptorMismatch(self.source.spec_string()));
        }
        Ok(match (&self.kind, v) {
            (MapKind::Identity, _) => v.clone(),
            (MapKind::Reduction, Value::Int(n)) | (MapKind::Inclusion, Value::Int(n)) => {
                self.target.from_int(n)
            }
            (MapKind::Frobenius { q }, _) => self.source.pow(v, *q),
            (MapKind::Evaluation { point }, Value::Poly(p)) => p.eval_generic(
                point,
                &|c| self.target.from_int(c),
                &|a, b| self.target.add(a, b),
                &|a, b| self.target.mul(a, b),
            ),
            _ => unreachable!("validated in RingMap::new"),
        })
    }

    /// The order of this map as an automorphism (identity or Frobenius).
    pub fn automorphism_order(&self) -> Result<u32, RingError> {
        match (&self.kind, &self.source) {
            (MapKind::Identity, _) => Ok(1),
            (MapKind::Frobenius { q }, Ring::FiniteField(d)) => {
                let (_, j) = prime_power(*q).expect("validated");
                Ok(d.k / d.k.gcd(&j))
            }
            _ => Err(RingError::BadMap("not an automorphism".into())),
        }
    }

    /// The inverse automorphism, for automorphism kinds (identity, Frobenius).
    pub fn inverse_automorphism(&self) -> Result<RingMap, RingError> {
        match (&self.kind, &self.source) {
            (MapKind::Identity, _) => Ok(self.clone()),
            (MapKind::Frobenius { q }, Ring::FiniteField(d)) => {
                // x -> x^(p^j) has order m = k/gcd(j,k); the inverse is the
                // (m-1)-st power, i.e. x -> x^(p^(j(m-1) mod k)).
                let (p, j) = prime_power(*q).expect("validated");
                let m = d.k / d.k.gcd(&j);
                let jinv = (j * (m - 1)) % d.k;
                if jinv == 0 {
                    return RingMap::new(self.source.clone(), self.target.clone(), MapKind::Identity);
                }
                RingMap::new(
                    self.source.clone(),
                    self.target.clone(),
                    MapKind::Frobenius { q: p.pow(jinv) },
                )
            }
            _ => Err(RingError::BadMap("not an automorphism".into())),
        }
    }
}
