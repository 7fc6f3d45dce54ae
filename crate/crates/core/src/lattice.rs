//! Effective curve classes and the semi-positive geometry context.
//!
//! The effective cone is the non-negative orthant of a chosen lattice basis,
//! so effectivity and divisor-closure can be decided coordinatewise. A
//! [`Truncation`] names the completed Novikov ring's working window: a
//! positive integer weight per coordinate and an integer cutoff.
//!
//! "Semi-positive" is taken to mean `K_X . beta <= 0` for every effective
//! `beta`, which in this model is the same as `K_X . e_i <= 0` on every basis
//! vector. That is the condition the virtual-dimension comparisons between
//! `beta` and `beta / r` actually use; it is an operative reading, not a
//! restatement of any one definition from the literature.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::PositiveInt;
use crate::error::LatticeError;

/// A non-zero vector in the non-negative orthant of `H_2(X, Z)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CurveClass {
    coords: Vec<BigUint>,
}

impl CurveClass {
    pub fn new(coords: Vec<BigUint>) -> Result<Self, LatticeError> {
        if coords.is_empty() {
            return Err(LatticeError::ZeroRank);
        }
        if coords.iter().all(Zero::is_zero) {
            return Err(LatticeError::NotEffective);
        }
        Ok(CurveClass { coords })
    }

    pub fn from_u64s(coords: &[u64]) -> Result<Self, LatticeError> {
        Self::new(coords.iter().map(|&c| BigUint::from(c)).collect())
    }

    pub fn coords(&self) -> &[BigUint] {
        &self.coords
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    /// `ind(beta)`: the largest `k` with `beta / k` integral, i.e. the gcd of
    /// the coordinates.
    pub fn index(&self) -> PositiveInt {
        let g = self
            .coords
            .iter()
            .fold(BigUint::zero(), |acc, c| acc.gcd(c));
        PositiveInt::new(g).expect("effective class has a positive coordinate")
    }

    pub fn is_primitive(&self) -> bool {
        self.index().is_one()
    }

    /// Componentwise quotient `beta / r`.
    pub fn divide(&self, r: &PositiveInt) -> Result<CurveClass, LatticeError> {
        if self.coords.iter().any(|c| !(c % r.get()).is_zero()) {
            return Err(LatticeError::NotDivisible {
                class: self.clone(),
                divisor: r.to_string(),
            });
        }
        Ok(CurveClass {
            coords: self.coords.iter().map(|c| c / r.get()).collect(),
        })
    }

    /// `r * beta`.
    pub fn scale(&self, r: &PositiveInt) -> CurveClass {
        CurveClass {
            coords: self.coords.iter().map(|c| c * r.get()).collect(),
        }
    }

    /// The primitive class on the ray through `self`.
    pub fn primitive(&self) -> CurveClass {
        self.divide(&self.index()).expect("index divides every coordinate")
    }

    pub fn dot(&self, pairing: &[BigInt]) -> Result<BigInt, LatticeError> {
        if pairing.len() != self.rank() {
            return Err(LatticeError::RankMismatch {
                expected: pairing.len(),
                got: self.rank(),
            });
        }
        Ok(self
            .coords
            .iter()
            .zip(pairing)
            .map(|(c, k)| BigInt::from(c.clone()) * k)
            .sum())
    }
}

impl Add for &CurveClass {
    type Output = CurveClass;

    fn add(self, other: &CurveClass) -> CurveClass {
        assert_eq!(self.rank(), other.rank(), "adding classes of different rank");
        CurveClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Dimension, canonical pairing and a label; nothing else about `X` is used.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeometryModel {
    label: String,
    dim: u32,
    canonical_pairing: Vec<BigInt>,
}

impl GeometryModel {
    /// Validates `dim >= 3` and semi-positivity on every basis vector.
    pub fn new(
        label: impl Into<String>,
        dim: u32,
        canonical_pairing: Vec<BigInt>,
    ) -> Result<Self, LatticeError> {
        if canonical_pairing.is_empty() {
            return Err(LatticeError::ZeroRank);
        }
        if dim < 3 {
            return Err(LatticeError::DimensionTooSmall(dim));
        }
        if let Some((index, value)) = canonical_pairing
            .iter()
            .enumerate()
            .find(|(_, k)| k.is_positive())
        {
            return Err(LatticeError::NotSemiPositive {
                index,
                value: value.to_string(),
            });
        }
        Ok(GeometryModel {
            label: label.into(),
            dim,
            canonical_pairing,
        })
    }

    /// Convenience for small pairings, e.g. `&[0, -1]`.
    pub fn from_i64s(label: impl Into<String>, dim: u32, pairing: &[i64]) -> Result<Self, LatticeError> {
        Self::new(label, dim, pairing.iter().map(|&k| BigInt::from(k)).collect())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.canonical_pairing.len()
    }

    pub fn canonical_pairing(&self) -> &[BigInt] {
        &self.canonical_pairing
    }

    pub fn is_calabi_yau(&self) -> bool {
        self.canonical_pairing.iter().all(Zero::is_zero)
    }

    /// `K_X . beta`; never positive.
    pub fn canonical_degree(&self, beta: &CurveClass) -> Result<BigInt, LatticeError> {
        beta.dot(&self.canonical_pairing)
    }
}

/// Positive integer weights per coordinate and an inclusive cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Truncation {
    weights: Vec<u64>,
    cutoff: u64,
}

impl Truncation {
    pub fn new(weights: Vec<u64>, cutoff: u64) -> Result<Self, LatticeError> {
        if weights.is_empty() {
            return Err(LatticeError::ZeroRank);
        }
        if let Some(index) = weights.iter().position(|&w| w == 0) {
            return Err(LatticeError::NonPositiveWeight { index });
        }
        Ok(Truncation { weights, cutoff })
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn cutoff(&self) -> u64 {
        self.cutoff
    }

    pub fn rank(&self) -> usize {
        self.weights.len()
    }

    pub fn degree(&self, beta: &CurveClass) -> Result<BigUint, LatticeError> {
        if beta.rank() != self.rank() {
            return Err(LatticeError::RankMismatch {
                expected: self.rank(),
                got: beta.rank(),
            });
        }
        Ok(beta
            .coords()
            .iter()
            .zip(&self.weights)
            .map(|(c, &w)| c * w)
            .sum())
    }

    pub fn contains(&self, beta: &CurveClass) -> Result<bool, LatticeError> {
        Ok(self.degree(beta)? <= BigUint::from(self.cutoff))
    }

    /// All `r * beta` with degree at most the cutoff, ascending in `r`.
    pub fn multiples_up_to(&self, beta: &CurveClass) -> Result<Vec<CurveClass>, LatticeError> {
        let step = self.degree(beta)?;
        let cutoff = BigUint::from(self.cutoff);
        let mut out = Vec::new();
        let mut r = BigUint::one();
        while &step * &r <= cutoff {
            out.push(beta.scale(&PositiveInt::new(r.clone()).expect("r >= 1")));
            r += 1u32;
        }
        Ok(out)
    }

    /// Every effective class within the cutoff, in lexicographic order.
    pub fn classes(&self) -> Vec<CurveClass> {
        let mut out = Vec::new();
        let mut current = alloc::vec![0u64; self.rank()];
        self.enumerate(0, 0, &mut current, &mut out);
        out.sort();
        out
    }

    fn enumerate(&self, pos: usize, used: u64, current: &mut Vec<u64>, out: &mut Vec<CurveClass>) {
        if pos == self.rank() {
            if let Ok(c) = CurveClass::from_u64s(current) {
                out.push(c);
            }
            return;
        }
        let w = self.weights[pos];
        let mut c = 0;
        while used + c * w <= self.cutoff {
            current[pos] = c;
            self.enumerate(pos + 1, used + c * w, current, out);
            c += 1;
        }
        current[pos] = 0;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn cls(c: &[u64]) -> CurveClass {
        CurveClass::from_u64s(c).unwrap()
    }

    fn gcd_oracle(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }

    #[test]
    fn index_examples() {
        assert!(cls(&[1, 0]).index().is_one());
        assert_eq!(cls(&[2, 4]).index().to_u64(), Some(gcd_oracle(2, 4)));
        assert_eq!(cls(&[6, 9]).index().to_u64(), Some(3));
    }

    #[test]
    fn divide_examples() {
        let two = PositiveInt::from_u64(2);
        assert_eq!(cls(&[2, 4]).divide(&two).unwrap(), cls(&[1, 2]));
        assert_eq!(cls(&[3, 3]).divide(&PositiveInt::one()).unwrap(), cls(&[3, 3]));
        assert!(matches!(
            cls(&[2, 3]).divide(&two),
            Err(LatticeError::NotDivisible { .. })
        ));
    }

    #[test]
    fn zero_class_is_not_effective() {
        assert_eq!(CurveClass::from_u64s(&[0, 0]), Err(LatticeError::NotEffective));
        assert_eq!(CurveClass::from_u64s(&[]), Err(LatticeError::ZeroRank));
    }

    #[test]
    fn canonical_degree_examples() {
        let cy = GeometryModel::from_i64s("cy", 3, &[0, 0]).unwrap();
        assert_eq!(cy.canonical_degree(&cls(&[5, 7])).unwrap(), BigInt::from(0));
        let fano = GeometryModel::from_i64s("fano", 3, &[-4]).unwrap();
        assert_eq!(fano.canonical_degree(&cls(&[2])).unwrap(), BigInt::from(-8));
        let mixed = GeometryModel::from_i64s("mixed", 3, &[0, -1]).unwrap();
        assert_eq!(mixed.canonical_degree(&cls(&[3, 2])).unwrap(), BigInt::from(-2));
        assert_eq!(
            mixed.canonical_degree(&cls(&[1])),
            Err(LatticeError::RankMismatch { expected: 2, got: 1 })
        );
    }

    #[test]
    fn geometry_validation() {
        assert!(matches!(
            GeometryModel::from_i64s("bad", 3, &[0, 1]),
            Err(LatticeError::NotSemiPositive { index: 1, .. })
        ));
        assert_eq!(
            GeometryModel::from_i64s("surface", 2, &[0]),
            Err(LatticeError::DimensionTooSmall(2))
        );
    }

    #[test]
    fn multiples_examples() {
        let t = Truncation::new(vec![1, 1], 3).unwrap();
        assert_eq!(
            t.multiples_up_to(&cls(&[1, 0])).unwrap(),
            [cls(&[1, 0]), cls(&[2, 0]), cls(&[3, 0])]
        );
        assert_eq!(t.multiples_up_to(&cls(&[2, 0])).unwrap(), [cls(&[2, 0])]);
        let t1 = Truncation::new(vec![1, 1], 1).unwrap();
        assert!(t1.multiples_up_to(&cls(&[1, 1])).unwrap().is_empty());
    }

    #[test]
    fn class_enumeration_counts() {
        // Non-zero lattice points with a + b <= 3: C(5,2) - 1.
        let t = Truncation::new(vec![1, 1], 3).unwrap();
        assert_eq!(t.classes().len(), 9);
        let t = Truncation::new(vec![2, 1], 3).unwrap();
        // (0,1..3), (1,0), (1,1)
        assert_eq!(t.classes().len(), 5);
        assert_eq!(
            Truncation::new(vec![1, 0], 3),
            Err(LatticeError::NonPositiveWeight { index: 1 })
        );
    }

    fn class_strategy() -> impl Strategy<Value = CurveClass> {
        proptest::collection::vec(0u64..40, 1..4)
            .prop_filter("effective", |v| v.iter().any(|&c| c > 0))
            .prop_map(|v| CurveClass::from_u64s(&v).unwrap())
    }

    proptest! {
        #[test]
        fn index_of_quotient(beta in class_strategy()) {
            let ind = beta.index();
            for r in crate::arith::divisors(&ind) {
                let q = beta.divide(&r).unwrap();
                prop_assert_eq!(q.index().get() * r.get(), ind.get().clone());
            }
            prop_assert!(beta.primitive().is_primitive());
        }

        #[test]
        fn canonical_degree_is_linear(
            a in proptest::collection::vec(0u64..20, 3),
            b in proptest::collection::vec(0u64..20, 3),
            k in proptest::collection::vec(-5i64..=0, 3),
        ) {
            prop_assume!(a.iter().any(|&c| c > 0) && b.iter().any(|&c| c > 0));
            let g = GeometryModel::from_i64s("g", 3, &k).unwrap();
            let (a, b) = (cls(&a), cls(&b));
            let sum = &a + &b;
            let lhs = g.canonical_degree(&sum).unwrap();
            prop_assert_eq!(lhs.clone(), g.canonical_degree(&a).unwrap() + g.canonical_degree(&b).unwrap());
            prop_assert!(lhs <= BigInt::zero());
        }
    }
}
