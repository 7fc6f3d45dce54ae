//! Multiplicative number theory on divisor lattices.
//!
//! Everything a divisor-sum transform needs: the Möbius function, Euler's
//! totient, ordered divisor lists, and two floating-point probes of the
//! root-of-unity identities behind them. The probes are for validation only;
//! transform coefficients are always built from the exact closed forms.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ArithError;

/// An arbitrary-precision integer that is at least 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PositiveInt(BigUint);

impl PositiveInt {
    pub fn new(value: BigUint) -> Result<Self, ArithError> {
        if value.is_zero() {
            Err(ArithError::NotPositive)
        } else {
            Ok(PositiveInt(value))
        }
    }

    /// Panics on zero; for literals and loop counters.
    pub fn from_u64(value: u64) -> Self {
        assert!(value >= 1, "PositiveInt must be >= 1");
        PositiveInt(BigUint::from(value))
    }

    pub fn one() -> Self {
        PositiveInt(BigUint::one())
    }

    pub fn get(&self) -> &BigUint {
        &self.0
    }

    pub fn into_inner(self) -> BigUint {
        self.0
    }

    pub fn to_u64(&self) -> Option<u64> {
        self.0.to_u64()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }
}

impl fmt::Debug for PositiveInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for PositiveInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl From<PositiveInt> for BigUint {
    fn from(value: PositiveInt) -> Self {
        value.0
    }
}

/// Prime factorization by trial division, ascending primes with multiplicity.
///
/// Inputs here are divisor indices of truncated tables, so trial division is
/// adequate; it is not meant for cryptographic-size arguments.
pub fn factorize(r: &PositiveInt) -> Vec<(BigUint, u32)> {
    if let Some(small) = r.to_u64() {
        return factorize_u64(small)
            .into_iter()
            .map(|(p, e)| (BigUint::from(p), e))
            .collect();
    }
    let mut rest = r.get().clone();
    let mut out = Vec::new();
    let mut p = BigUint::from(2u32);
    while &p * &p <= rest {
        let mut e = 0;
        loop {
            let (q, rem) = rest.div_rem(&p);
            if !rem.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += 1u32;
    }
    if !rest.is_one() {
        out.push((rest, 1));
    }
    out
}

fn factorize_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// μ(r): 0 if a square divides r, otherwise (−1)^(number of prime factors).
pub fn mobius(r: &PositiveInt) -> i8 {
    let factors = factorize(r);
    if factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// φ(r), the number of integers in `1..=r` coprime to `r`.
pub fn euler_phi(r: &PositiveInt) -> PositiveInt {
    let mut phi = BigUint::one();
    for (p, e) in factorize(r) {
        phi *= (&p - 1u32) * p.pow(e - 1);
    }
    PositiveInt(phi)
}

/// All positive divisors of `r`, ascending.
pub fn divisors(r: &PositiveInt) -> Vec<PositiveInt> {
    let mut divs = alloc::vec![BigUint::one()];
    for (p, e) in factorize(r) {
        let current = divs.len();
        let mut pk = BigUint::one();
        for _ in 0..e {
            pk *= &p;
            for i in 0..current {
                let d = &divs[i] * &pk;
                divs.push(d);
            }
        }
    }
    divs.sort();
    divs.into_iter().map(PositiveInt).collect()
}

/// Σ ζ^power over the primitive r-th roots of unity, in floating point.
///
/// Agrees with μ(r) for `power = ±1` and with φ(r) for `power = 0`.
pub fn primitive_root_sum(r: &PositiveInt, power: i64) -> Complex64 {
    let r = r.to_u64().expect("primitive_root_sum: r must fit in u64");
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..=r {
        if k.gcd(&r) != 1 {
            continue;
        }
        // Reduce the exponent mod r before scaling so the angle stays small.
        let e = (k as i128 * power as i128).rem_euclid(r as i128) as f64;
        let theta = 2.0 * core::f64::consts::PI * e / r as f64;
        sum += Complex64::from_polar(1.0, theta);
    }
    sum
}

/// Π_{k=1}^{r−1} (1 − ζ^k) for ζ = e^{2πi/r}; equals r.
pub fn cyclotomic_norm_product(r: &PositiveInt) -> Result<Complex64, ArithError> {
    let r = r.to_u64().expect("cyclotomic_norm_product: r must fit in u64");
    if r < 2 {
        return Err(ArithError::NeedsAtLeastTwo);
    }
    let mut prod = Complex64::new(1.0, 0.0);
    for k in 1..r {
        let theta = 2.0 * core::f64::consts::PI * k as f64 / r as f64;
        prod *= Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
    }
    Ok(prod)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> PositiveInt {
        PositiveInt::from_u64(n)
    }

    // Oracles: naive primality, gcd counting, and trial division over 1..=n.
    fn is_prime(n: u64) -> bool {
        n >= 2 && (2..n).all(|d| n % d != 0)
    }

    fn mobius_oracle(n: u64) -> i8 {
        if (2..=n).any(|d| n % (d * d) == 0) {
            return 0;
        }
        let k = (2..=n).filter(|&d| is_prime(d) && n % d == 0).count();
        if k % 2 == 0 {
            1
        } else {
            -1
        }
    }

    fn phi_oracle(n: u64) -> u64 {
        (1..=n).filter(|&k| k.gcd(&n) == 1).count() as u64
    }

    fn divisors_oracle(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    #[test]
    fn mobius_examples() {
        assert_eq!(mobius(&p(1)), 1);
        assert_eq!(mobius(&p(4)), 0);
        assert_eq!(mobius(&p(6)), 1);
        for n in 1..=300 {
            assert_eq!(mobius(&p(n)), mobius_oracle(n), "mu({n})");
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(&p(1)).to_u64(), Some(1));
        assert_eq!(euler_phi(&p(6)).to_u64(), Some(2));
        assert_eq!(euler_phi(&p(12)).to_u64(), Some(4));
        for n in 1..=300 {
            assert_eq!(euler_phi(&p(n)).to_u64(), Some(phi_oracle(n)), "phi({n})");
        }
    }

    #[test]
    fn divisor_examples() {
        let as_u64 = |v: Vec<PositiveInt>| v.iter().map(|d| d.to_u64().unwrap()).collect::<Vec<_>>();
        assert_eq!(as_u64(divisors(&p(1))), [1]);
        assert_eq!(as_u64(divisors(&p(6))), [1, 2, 3, 6]);
        assert_eq!(as_u64(divisors(&p(9))), [1, 3, 9]);
        for n in 1..=300 {
            assert_eq!(as_u64(divisors(&p(n))), divisors_oracle(n));
        }
    }

    #[test]
    fn big_argument_factorization() {
        // 2^70 * 3 does not fit in u64.
        let big = PositiveInt::new(BigUint::from(3u32) << 70).unwrap();
        assert_eq!(mobius(&big), 0);
        assert_eq!(divisors(&big).len(), 71 * 2);
        let squarefree = PositiveInt::new(BigUint::from(u64::MAX) * 7u32).unwrap();
        // 2^64 - 1 = 3 * 5 * 17 * 257 * 641 * 65537 * 6700417, times 7: eight primes
        assert_eq!(mobius(&squarefree), 1);
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(PositiveInt::new(BigUint::zero()), Err(ArithError::NotPositive));
    }

    #[test]
    fn root_sum_examples() {
        let z = primitive_root_sum(&p(4), 1);
        assert!(z.norm() < 1e-12);
        let z = primitive_root_sum(&p(1), 1);
        assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        let z = primitive_root_sum(&p(6), 0);
        assert!((z - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        let z = primitive_root_sum(&p(30), -1);
        assert!((z - Complex64::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn norm_product_examples() {
        for (r, want) in [(2u64, 2.0), (3, 3.0), (5, 5.0)] {
            let z = cyclotomic_norm_product(&p(r)).unwrap();
            assert!((z - Complex64::new(want, 0.0)).norm() < 1e-9, "r={r}: {z}");
        }
        assert_eq!(cyclotomic_norm_product(&p(1)), Err(ArithError::NeedsAtLeastTwo));
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime(a in 1u64..2000, b in 1u64..2000) {
            prop_assume!(a.gcd(&b) == 1);
            prop_assert_eq!(mobius(&p(a * b)), mobius(&p(a)) * mobius(&p(b)));
            let lhs = euler_phi(&p(a * b)).into_inner();
            let rhs = euler_phi(&p(a)).into_inner() * euler_phi(&p(b)).into_inner();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
