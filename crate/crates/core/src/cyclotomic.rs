//! Exact arithmetic in the cyclotomic field `Q(ζ_n)`.
//!
//! An element is stored as its unique representative of degree below
//! `φ(n)` modulo the cyclotomic polynomial `Φ_n`, with arbitrary-precision
//! rational coefficients. Two elements of the same order are equal exactly
//! when their coefficient vectors are equal, so invariant comparisons never
//! go through floating point.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Dense integer polynomial, coefficient `i` multiplies `x^i`.
///
/// Trailing zeros are trimmed, so the zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Complex evaluation, used by numeric checks.
    pub fn eval_complex(&self, re: f64, im: f64) -> (f64, f64) {
        let mut acc = (0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            let c = c.to_f64().unwrap_or(f64::NAN);
            acc = (acc.0 * re - acc.1 * im + c, acc.0 * im + acc.1 * re);
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => {}
                (_, false) => write!(f, "{mag}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Distinct prime factors in increasing order.
fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Euler's totient.
pub fn totient(n: u64) -> u64 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// The `n`-th cyclotomic polynomial.
///
/// With `m` the squarefree kernel of `n`, `Φ_n(x) = Φ_m(x^{n/m})` and
/// `Φ_m = Π_{d | m} (1 - x^d)^{μ(m/d)}` up to sign. The product is taken as
/// a power series truncated at degree `φ(m)`, so each factor costs one
/// linear pass.
///
/// Panics if `n == 0`.
pub fn cyclotomic_polynomial(n: u64) -> IntPoly {
    assert!(n > 0, "cyclotomic order must be positive");
    let primes = prime_factors(n);
    let m: u64 = primes.iter().product();
    let deg = totient(m) as usize;
    let mut series = vec![BigInt::zero(); deg + 1];
    series[0] = BigInt::one();
    // multiplications first keep every intermediate a polynomial
    let mut factors: Vec<(usize, bool)> = (0..1u32 << primes.len())
        .map(|mask| {
            let q: u64 = (0..primes.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| primes[i])
                .product();
            ((m / q) as usize, mask.count_ones() % 2 == 0)
        })
        .collect();
    factors.sort_by_key(|&(_, mul)| !mul);
    for (d, mul) in factors {
        if mul {
            for i in (d..=deg).rev() {
                let t = series[i - d].clone();
                series[i] -= t;
            }
        } else {
            for i in d..=deg {
                let t = series[i - d].clone();
                series[i] += t;
            }
        }
    }
    if series[deg].is_negative() {
        series.iter_mut().for_each(|c| *c = -std::mem::take(c));
    }
    let step = (n / m) as usize;
    let mut coeffs = vec![BigInt::zero(); deg * step + 1];
    for (i, c) in series.into_iter().enumerate() {
        coeffs[i * step] = c;
    }
    IntPoly::new(coeffs)
}

/// Per-order data shared by all elements of `Q(ζ_n)`.
#[derive(Debug)]
struct Field {
    phi: IntPoly,
    deg: usize,
    /// Nonzero lower coefficients of `Φ_n` as `(power, coefficient)`.
    terms: Vec<(usize, BigInt)>,
}

impl Field {
    fn build(n: u64) -> Field {
        let phi = cyclotomic_polynomial(n);
        let deg = phi.degree().expect("cyclotomic polynomials are nonzero");
        let terms = phi.coeffs[..deg]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();
        Field { phi, deg, terms }
    }

    fn degree(&self) -> usize {
        self.deg
    }
}

fn field(n: u64) -> Arc<Field> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<Field>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().expect("field cache poisoned").get(&n) {
        return Arc::clone(f);
    }
    // Built outside the lock; a racing builder produces an identical value.
    let built = Arc::new(Field::build(n));
    let mut guard = cache.lock().expect("field cache poisoned");
    Arc::clone(guard.entry(n).or_insert(built))
}

/// An exact element of `Q(ζ_n)` in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNum {
    n: u64,
    coeffs: Vec<BigRational>,
}

impl fmt::Debug for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNum[{}](", self.n)?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})z^{i}")?;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

impl CycNum {
    /// The zero element of `Q(ζ_n)`. Panics if `n == 0`.
    pub fn zero(n: u64) -> Self {
        assert!(n > 0, "cyclotomic order must be positive");
        let deg = field(n).degree();
        CycNum {
            n,
            coeffs: vec![BigRational::zero(); deg],
        }
    }

    pub fn one(n: u64) -> Self {
        Self::from_integer(n, 1)
    }

    pub fn from_integer(n: u64, v: i64) -> Self {
        Self::from_rational(n, BigRational::from_integer(v.into()))
    }

    pub fn from_rational(n: u64, v: BigRational) -> Self {
        let mut z = Self::zero(n);
        z.coeffs[0] = v;
        z
    }

    /// `ζ_n^e` for any integer `e`.
    pub fn root_power(n: u64, e: i64) -> Self {
        let f = field(n);
        let idx = e.rem_euclid(n as i64) as usize;
        let mut mono = vec![BigInt::zero(); idx.max(f.degree() - 1) + 1];
        mono[idx] = BigInt::one();
        CycNum {
            n,
            coeffs: reduce(mono, &f)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        }
    }

    /// Reduces an arbitrary rational polynomial in `ζ_n` to canonical form.
    pub fn from_poly(n: u64, poly: &[BigRational]) -> Self {
        let f = field(n);
        let den = poly.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = poly
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        CycNum {
            n,
            coeffs: reduce(num, &f)
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        }
    }

    /// `Σ counts[e]·ζ_n^e`, the exact value of a histogram of phases.
    /// `counts` must have length `n`.
    pub fn from_residue_counts(n: u64, counts: &[u64]) -> Self {
        let f = field(n);
        assert_eq!(counts.len(), n as usize, "one count per residue");
        let counts = counts.iter().map(|&c| BigInt::from(c)).collect();
        CycNum {
            n,
            coeffs: reduce(counts, &f)
                .into_iter()
                .map(BigRational::from_integer)
                .collect(),
        }
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    /// Canonical coefficients, length `φ(n)`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.n)
    }

    fn same_order(&self, other: &CycNum) -> Result<()> {
        if self.n == other.n {
            Ok(())
        } else {
            Err(Error::OrderMismatch(self.n, other.n))
        }
    }

    pub fn try_add(&self, other: &CycNum) -> Result<CycNum> {
        self.same_order(other)?;
        Ok(CycNum {
            n: self.n,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &CycNum) -> Result<CycNum> {
        self.try_add(&other.neg_ref())
    }

    fn neg_ref(&self) -> CycNum {
        CycNum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn try_mul(&self, other: &CycNum) -> Result<CycNum> {
        self.same_order(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(CycNum::zero(self.n));
        }
        // integer convolution over a common denominator; one gcd per coefficient at the end
        let (a, da) = self.integral();
        let (b, db) = other.integral();
        let mut prod = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let den = da * db;
        Ok(CycNum {
            n: self.n,
            coeffs: reduce(prod, &field(self.n))
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        })
    }

    /// Integer numerators over the lcm of the denominators.
    fn integral(&self) -> (Vec<BigInt>, BigInt) {
        let den = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        (num, den)
    }

    pub fn scale(&self, r: &BigRational) -> CycNum {
        CycNum {
            n: self.n,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse: solves `a·y = 1` as a linear system in the
    /// power basis, by fraction-free elimination over the integers.
    pub fn inverse(&self) -> Result<CycNum> {
        if self.is_zero() {
            return Err(Error::ZeroInverse);
        }
        let f = field(self.n);
        let d = f.degree();
        let phi = f.phi.coeffs();

        // a = A / den with A integral
        let (mut col, den) = self.integral();
        // m[r][j] = coefficient r of A·x^j; last column is the right-hand side e_0
        let mut m = vec![vec![BigInt::zero(); d + 1]; d];
        for j in 0..d {
            for (r, c) in col.iter().enumerate() {
                m[r][j] = c.clone();
            }
            let top = col.pop().expect("degree >= 1");
            col.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, p) in col.iter_mut().zip(&phi[..d]) {
                    *c -= &top * p;
                }
            }
        }
        m[0][d] = BigInt::one();

        // Bareiss: every division below is exact.
        let mut prev = BigInt::one();
        for k in 0..d {
            let pivot = (k..d)
                .find(|&i| !m[i][k].is_zero())
                .expect("nonzero field elements have invertible multiplication maps");
            m.swap(k, pivot);
            for i in k + 1..d {
                for j in k + 1..=d {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        let mut y = vec![BigRational::zero(); d];
        for k in (0..d).rev() {
            let mut acc = BigRational::from_integer(m[k][d].clone());
            for j in k + 1..d {
                if !m[k][j].is_zero() {
                    acc -= &y[j] * BigRational::from_integer(m[k][j].clone());
                }
            }
            y[k] = acc / BigRational::from_integer(m[k][k].clone());
        }
        let den = BigRational::from_integer(den);
        Ok(CycNum {
            n: self.n,
            coeffs: y.into_iter().map(|c| c * &den).collect(),
        })
    }

    pub fn try_div(&self, other: &CycNum) -> Result<CycNum> {
        self.try_mul(&other.inverse()?)
    }

    /// Complex conjugation, `ζ_n ↦ ζ_n^{-1}`.
    pub fn conj(&self) -> CycNum {
        let (num, den) = self.integral();
        let n = self.n as usize;
        let mut flipped = vec![BigInt::zero(); n];
        for (i, c) in num.into_iter().enumerate() {
            flipped[(n - i) % n] = c;
        }
        CycNum {
            n: self.n,
            coeffs: reduce(flipped, &field(self.n))
                .into_iter()
                .map(|c| BigRational::new(c, den.clone()))
                .collect(),
        }
    }

    /// Double-precision value at `ζ_n = e^{2πi/n}`.
    pub fn embed_numeric(&self) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = rational_to_f64(c);
            let t = 2.0 * PI * i as f64 / self.n as f64;
            re += c * t.cos();
            im += c * t.sin();
        }
        (re, im)
    }

    /// If this value equals `ζ_n^e` for some `0 <= e < n`, returns `e`.
    pub fn root_exponent(&self) -> Option<u64> {
        let (re, im) = self.embed_numeric();
        if ((re * re + im * im).sqrt() - 1.0).abs() > 1e-6 {
            return None;
        }
        let n = self.n as i64;
        let guess = (im.atan2(re) * n as f64 / (2.0 * PI)).round() as i64;
        (-1..=1)
            .map(|d| (guess + d).rem_euclid(n))
            .find(|&e| Self::root_power(self.n, e) == *self)
            .map(|e| e as u64)
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // Huge numerator and denominator: scale down before converting.
        let shift = c.numer().bits().max(c.denom().bits()).saturating_sub(1000);
        let n = (c.numer() >> shift).to_f64().unwrap_or(f64::NAN);
        let d = (c.denom() >> shift).to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Reduces modulo the monic `Φ_n` to length `φ(n)`.
fn reduce(mut p: Vec<BigInt>, f: &Field) -> Vec<BigInt> {
    let deg = f.degree();
    for top in (deg..p.len()).rev() {
        let c = std::mem::take(&mut p[top]);
        if c.is_zero() {
            continue;
        }
        for (i, pc) in &f.terms {
            p[top - deg + i] -= &c * pc;
        }
    }
    p.resize(deg, BigInt::zero());
    p
}

impl Add for &CycNum {
    type Output = CycNum;
    /// Panics on order mismatch; use [`CycNum::try_add`] to handle it.
    fn add(self, rhs: &CycNum) -> CycNum {
        self.try_add(rhs).expect("cyclotomic order mismatch")
    }
}

impl Sub for &CycNum {
    type Output = CycNum;
    fn sub(self, rhs: &CycNum) -> CycNum {
        self.try_sub(rhs).expect("cyclotomic order mismatch")
    }
}

impl Mul for &CycNum {
    type Output = CycNum;
    fn mul(self, rhs: &CycNum) -> CycNum {
        self.try_mul(rhs).expect("cyclotomic order mismatch")
    }
}

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        self.neg_ref()
    }
}
