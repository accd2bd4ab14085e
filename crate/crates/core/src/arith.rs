//! Arithmetic in F_p and F_p², plus the divisor-sum helpers used by the
//! cusp and genus formulas.
//!
//! Residues are plain `u64` values in `[0, p)`; the field structs only carry
//! the modulus (and for [`QuadExt`] the chosen nonresidue).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

/// Largest modulus accepted by [`PrimeField::new`].
pub const MAX_PRIME: u64 = 1 << 31;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("modulus {0} exceeds the 2^31 cap")]
    TooLarge(u64),
    #[error("operation needs an odd prime, got p = 2")]
    EvenPrime,
    #[error("zero has no multiplicative order or inverse")]
    Zero,
    #[error("argument must be positive")]
    NonPositive,
    #[error("{0} is not a quadratic nonresidue mod {1}")]
    NotNonresidue(u64, u64),
}

/// Deterministic Miller-Rabin; the base set is exact for all `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    let mulmod = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let powmod = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulmod(r, b);
            }
            b = mulmod(b, b);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Prime factorization by trial division over a 2,3 wheel.
/// Returns `(prime, exponent)` pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut push = |n: &mut u64, q: u64| {
        let mut e = 0;
        while (*n).is_multiple_of(q) {
            *n /= q;
            e += 1;
        }
        if e > 0 {
            out.push((q, e));
        }
    };
    push(&mut n, 2);
    push(&mut n, 3);
    let mut q = 5;
    let mut step = 2;
    while q * q <= n {
        push(&mut n, q);
        q += step;
        step = 6 - step;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (q, e) in factorize(n) {
        let len = ds.len();
        let mut pw = 1;
        for _ in 0..e {
            pw *= q;
            for i in 0..len {
                ds.push(ds[i] * pw);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n)
        .into_iter()
        .fold(n, |acc, (q, _)| acc / q * (q - 1))
}

/// ℓ-adic valuation of `n`; `n = 0` is reported as 0 rather than infinity.
pub fn l_valuation(ell: u64, mut n: u64) -> u32 {
    if n == 0 || ell < 2 {
        return 0;
    }
    let mut k = 0;
    while n.is_multiple_of(ell) {
        n /= ell;
        k += 1;
    }
    k
}

/// Φ(n) = Σ_{d|n} φ(d)/d as an exact rational.
pub fn phi_capital(n: u64) -> Result<BigRational, ArithError> {
    if n == 0 {
        return Err(ArithError::NonPositive);
    }
    let mut acc = BigRational::zero();
    for d in divisors(n) {
        acc += BigRational::new(BigInt::from(euler_phi(d)), BigInt::from(d));
    }
    Ok(acc)
}

/// Order of `x` in a cyclic group of order `group_order`, given a power map.
fn order_in_cyclic(group_order: u64, pow_is_one: impl Fn(u64) -> bool) -> u64 {
    let mut ord = group_order;
    for (q, _) in factorize(group_order) {
        while ord.is_multiple_of(q) && pow_is_one(ord / q) {
            ord /= q;
        }
    }
    ord
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p > MAX_PRIME {
            return Err(ArithError::TooLarge(p));
        }
        if !is_prime(p) {
            return Err(ArithError::NotPrime(p));
        }
        Ok(Self { p })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    /// Reduce a signed integer into `[0, p)`.
    pub fn from_i64(&self, a: i64) -> u64 {
        a.rem_euclid(self.p as i64) as u64
    }

    /// Centered representative in `(-p/2, p/2]`.
    pub fn to_signed(&self, a: u64) -> i64 {
        if a > self.p / 2 {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    pub fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        b %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        r
    }

    pub fn inv(&self, a: u64) -> Result<u64, ArithError> {
        if a.is_multiple_of(self.p) {
            return Err(ArithError::Zero);
        }
        Ok(self.pow(a, self.p - 2))
    }

    /// Euler criterion, as `-1`, `0` or `1`.
    pub fn legendre(&self, a: u64) -> Result<i8, ArithError> {
        if self.p == 2 {
            return Err(ArithError::EvenPrime);
        }
        let a = a % self.p;
        if a == 0 {
            return Ok(0);
        }
        Ok(if self.pow(a, (self.p - 1) / 2) == 1 { 1 } else { -1 })
    }

    pub fn is_square(&self, a: u64) -> bool {
        self.p == 2 || a.is_multiple_of(self.p) || self.pow(a, (self.p - 1) / 2) == 1
    }

    /// Tonelli-Shanks. Returns the smaller of the two roots.
    pub fn sqrt(&self, a: u64) -> Option<u64> {
        let p = self.p;
        let a = a % p;
        if a == 0 || p == 2 {
            return Some(a);
        }
        if !self.is_square(a) {
            return None;
        }
        let mut q = p - 1;
        let mut s = 0;
        while q.is_multiple_of(2) {
            q /= 2;
            s += 1;
        }
        let z = self.least_nonresidue().expect("p odd");
        let mut m = s;
        let mut c = self.pow(z, q);
        let mut t = self.pow(a, q);
        let mut r = self.pow(a, q.div_ceil(2));
        while t != 1 {
            let mut i = 0;
            let mut tt = t;
            while tt != 1 {
                tt = self.mul(tt, tt);
                i += 1;
            }
            let mut b = c;
            for _ in 0..(m - i - 1) {
                b = self.mul(b, b);
            }
            m = i;
            c = self.mul(b, b);
            t = self.mul(t, c);
            r = self.mul(r, b);
        }
        Some(r.min(p - r))
    }

    pub fn least_nonresidue(&self) -> Result<u64, ArithError> {
        if self.p == 2 {
            return Err(ArithError::EvenPrime);
        }
        Ok((2..self.p).find(|&d| !self.is_square(d)).expect("odd prime has nonresidues"))
    }

    pub fn element_order(&self, x: u64) -> Result<u64, ArithError> {
        let x = x % self.p;
        if x == 0 {
            return Err(ArithError::Zero);
        }
        Ok(order_in_cyclic(self.p - 1, |e| self.pow(x, e) == 1))
    }
}

/// Element `a + b·√d` of F_p².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadElem {
    pub a: u64,
    pub b: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadExt {
    base: PrimeField,
    d: u64,
}

impl QuadExt {
    /// F_p(√d) with d the least positive nonresidue.
    pub fn new(base: PrimeField) -> Result<Self, ArithError> {
        let d = base.least_nonresidue()?;
        Ok(Self { base, d })
    }

    pub fn with_nonresidue(base: PrimeField, d: u64) -> Result<Self, ArithError> {
        if base.legendre(d)? != -1 {
            return Err(ArithError::NotNonresidue(d, base.p()));
        }
        Ok(Self { base, d })
    }

    pub fn base(&self) -> PrimeField {
        self.base
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn one(&self) -> QuadElem {
        QuadElem { a: 1, b: 0 }
    }

    pub fn mul(&self, x: QuadElem, y: QuadElem) -> QuadElem {
        let f = &self.base;
        QuadElem {
            a: f.add(f.mul(x.a, y.a), f.mul(f.mul(x.b, y.b), self.d)),
            b: f.add(f.mul(x.a, y.b), f.mul(x.b, y.a)),
        }
    }

    pub fn add(&self, x: QuadElem, y: QuadElem) -> QuadElem {
        QuadElem {
            a: self.base.add(x.a, y.a),
            b: self.base.add(x.b, y.b),
        }
    }

    pub fn pow(&self, mut x: QuadElem, mut e: u64) -> QuadElem {
        let mut r = self.one();
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, x);
            }
            x = self.mul(x, x);
            e >>= 1;
        }
        r
    }

    /// Inverse via the norm: (a + b√d)⁻¹ = (a − b√d)/(a² − d b²).
    pub fn inv(&self, x: QuadElem) -> Result<QuadElem, ArithError> {
        let f = &self.base;
        let norm = f.sub(f.mul(x.a, x.a), f.mul(f.mul(x.b, x.b), self.d));
        let ni = f.inv(norm)?;
        Ok(QuadElem {
            a: f.mul(x.a, ni),
            b: f.mul(f.neg(x.b), ni),
        })
    }

    pub fn element_order(&self, x: QuadElem) -> Result<u64, ArithError> {
        if x.a == 0 && x.b == 0 {
            return Err(ArithError::Zero);
        }
        let p = self.base.p();
        Ok(order_in_cyclic(p * p - 1, |e| self.pow(x, e) == self.one()))
    }
}

/// n_p(t): the order of a noncentral element of SL2(F_p) with trace t.
pub fn n_of_trace(t: i64, p: u64) -> Result<u64, ArithError> {
    let f = PrimeField::new(p)?;
    let t = f.from_i64(t);
    if p == 2 {
        // t = 0 is unipotent; t = 1 has eigenvalues in F_4 of order 3.
        return Ok(if t == 0 { 2 } else { 3 });
    }
    if t == 2 {
        return Ok(p);
    }
    if t == p - 2 {
        return Ok(2 * p);
    }
    let disc = f.sub(f.mul(t, t), f.from_i64(4));
    let half = f.inv(2)?;
    match f.sqrt(disc) {
        Some(s) => {
            let omega = f.mul(f.add(t, s), half);
            f.element_order(omega)
        }
        None => {
            let ext = QuadExt::new(f)?;
            // disc/d is a square since both are nonresidues.
            let s = f.sqrt(f.mul(disc, f.inv(ext.d())?)).expect("quotient of nonresidues");
            let omega = QuadElem {
                a: f.mul(t, half),
                b: f.mul(s, half),
            };
            ext.element_order(omega)
        }
    }
}

/// Legendre symbol of a signed residue.
pub fn legendre(a: i64, p: u64) -> Result<i8, ArithError> {
    let f = PrimeField::new(p)?;
    f.legendre(f.from_i64(a))
}

/// Rational with denominator 1, as a convenience for formula code.
pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn slow_order(x: u64, p: u64) -> u64 {
        let mut y = x % p;
        let mut k = 1;
        while y != 1 {
            y = y * x % p;
            k += 1;
        }
        k
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let n = 5000;
        let mut sieve = vec![true; n];
        sieve[0] = false;
        sieve[1] = false;
        for i in 2..n {
            if sieve[i] {
                for j in (i * i..n).step_by(i) {
                    sieve[j] = false;
                }
            }
        }
        for (i, &s) in sieve.iter().enumerate() {
            assert_eq!(is_prime(i as u64), s, "{i}");
        }
        assert!(is_prime(2147483647));
        assert!(!is_prime(2147483647 * 3));
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(0, 7).unwrap(), 0);
        assert_eq!(legendre(2, 7).unwrap(), 1);
        // squares mod 7 are {1, 2, 4}
        assert_eq!(legendre(5, 7).unwrap(), -1);
        assert_eq!(legendre(1, 2), Err(ArithError::EvenPrime));
    }

    #[test]
    fn order_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.element_order(1).unwrap(), 1);
        assert_eq!(f.element_order(5).unwrap(), slow_order(5, 7));
        assert_eq!(f.element_order(5).unwrap(), 6);
        assert!(f.element_order(0).is_err());
    }

    #[test]
    fn quad_ext_root_of_t2_minus_t_plus_1() {
        // T² − T + 1 over F_5: discriminant −3 ≡ 2, a nonresidue, and d = 2.
        let f = PrimeField::new(5).unwrap();
        let ext = QuadExt::new(f).unwrap();
        assert_eq!(ext.d(), 2);
        let half = f.inv(2).unwrap();
        let omega = QuadElem { a: half, b: half };
        // check the root: ω² − ω + 1 = 0
        let sq = ext.mul(omega, omega);
        assert_eq!(f.add(f.sub(sq.a, omega.a), 1), 0);
        assert_eq!(f.sub(sq.b, omega.b), 0);
        let mut y = omega;
        let mut k = 1;
        while y != ext.one() {
            y = ext.mul(y, omega);
            k += 1;
        }
        assert_eq!(k, 6);
        assert_eq!(ext.element_order(omega).unwrap(), 6);
    }

    #[test]
    fn n_of_trace_examples() {
        assert_eq!(n_of_trace(2, 5).unwrap(), 5);
        assert_eq!(n_of_trace(-2, 5).unwrap(), 10);
        assert_eq!(n_of_trace(1, 7).unwrap(), 6);
        assert_eq!(n_of_trace(0, 2).unwrap(), 2);
    }

    #[test]
    fn phi_capital_examples() {
        assert_eq!(phi_capital(1).unwrap(), rat(1));
        assert_eq!(phi_capital(4).unwrap(), rat(2));
        assert_eq!(phi_capital(12).unwrap(), rat_frac(10, 3));
        assert!(phi_capital(0).is_err());
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(l_valuation(3, 1), 0);
        assert_eq!(l_valuation(2, 48), 4);
        assert_eq!(l_valuation(3, 336), 1);
    }

    #[test]
    fn sqrt_roundtrip_small_primes() {
        for p in [3u64, 5, 7, 11, 13, 17, 41, 97, 193] {
            let f = PrimeField::new(p).unwrap();
            for a in 0..p {
                let brute = (0..p).find(|s| s * s % p == a);
                match f.sqrt(a) {
                    Some(s) => assert_eq!(s * s % p, a),
                    None => assert!(brute.is_none(), "p={p} a={a}"),
                }
            }
        }
    }

    #[test]
    fn divisor_helpers() {
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(euler_phi(12), 4);
        assert_eq!(factorize(336), vec![(2, 4), (3, 1), (7, 1)]);
        assert_eq!(factorize(1), vec![]);
    }
}
