//! Truncated Novikov series `sum c_beta Q^beta` with exact rational coefficients.

use alloc::collections::btree_map::Entry;
use alloc::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::arith::PositiveInt;
use crate::error::SeriesError;
use crate::lattice::{CurveClass, Truncation};
use crate::Rational;

/// A finite Novikov series. Coefficients of classes past the cutoff are
/// unknown, not zero; [`NovikovSeries::coeff`] reports them as errors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NovikovSeries {
    truncation: Truncation,
    constant: Rational,
    terms: BTreeMap<CurveClass, Rational>,
}

impl NovikovSeries {
    pub fn zero(truncation: Truncation) -> Self {
        NovikovSeries {
            truncation,
            constant: Rational::zero(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(truncation: Truncation, c: Rational) -> Self {
        NovikovSeries {
            truncation,
            constant: c,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(truncation: Truncation) -> Self {
        Self::constant(truncation, Rational::one())
    }

    /// Builds `constant + sum terms`, dropping zeros. Every key must lie
    /// within the truncation.
    pub fn from_terms(
        truncation: Truncation,
        constant: Rational,
        terms: impl IntoIterator<Item = (CurveClass, Rational)>,
    ) -> Result<Self, SeriesError> {
        let mut s = Self::constant(truncation, constant);
        for (beta, c) in terms {
            if !s.truncation.contains(&beta)? {
                return Err(SeriesError::OutOfTruncation(beta));
            }
            s.accumulate(beta, c);
        }
        Ok(s)
    }

    pub fn monomial(truncation: Truncation, beta: CurveClass, c: Rational) -> Result<Self, SeriesError> {
        Self::from_terms(truncation, Rational::zero(), [(beta, c)])
    }

    fn accumulate(&mut self, beta: CurveClass, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(beta) {
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn truncation(&self) -> &Truncation {
        &self.truncation
    }

    pub fn constant_term(&self) -> &Rational {
        &self.constant
    }

    /// Non-constant terms in lexicographic order of the class.
    pub fn terms(&self) -> impl Iterator<Item = (&CurveClass, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.terms.is_empty()
    }

    /// Coefficient of `Q^beta`; an error when `beta` is past the cutoff.
    pub fn coeff(&self, beta: &CurveClass) -> Result<Rational, SeriesError> {
        if !self.truncation.contains(beta)? {
            return Err(SeriesError::OutOfTruncation(beta.clone()));
        }
        Ok(self.terms.get(beta).cloned().unwrap_or_else(Rational::zero))
    }

    fn check_compatible(&self, other: &Self) -> Result<(), SeriesError> {
        if self.truncation != other.truncation {
            return Err(SeriesError::TruncationMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.constant += &other.constant;
        for (beta, c) in &other.terms {
            out.accumulate(beta.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        NovikovSeries {
            truncation: self.truncation.clone(),
            constant: -&self.constant,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), -v)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SeriesError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.truncation.clone());
        }
        NovikovSeries {
            truncation: self.truncation.clone(),
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Cauchy product over the monoid; products past the cutoff are dropped.
    pub fn mul(&self, other: &Self) -> Result<Self, SeriesError> {
        self.check_compatible(other)?;
        let mut out = Self::constant(self.truncation.clone(), &self.constant * &other.constant);
        for (beta, c) in &other.terms {
            out.accumulate(beta.clone(), &self.constant * c);
        }
        for (beta, c) in &self.terms {
            out.accumulate(beta.clone(), c * &other.constant);
        }
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let sum = a + b;
                if self.truncation.contains(&sum)? {
                    out.accumulate(sum, ca * cb);
                }
            }
        }
        Ok(out)
    }

    /// Adams operation on Novikov variables: `Q^beta -> Q^(r beta)`, keeping
    /// coefficients and discarding terms pushed past the cutoff.
    pub fn adams(&self, r: &PositiveInt) -> Self {
        let mut out = Self::constant(self.truncation.clone(), self.constant.clone());
        for (beta, c) in &self.terms {
            let image = beta.scale(r);
            if self.truncation.contains(&image).expect("same rank") {
                out.accumulate(image, c.clone());
            }
        }
        out
    }
}
