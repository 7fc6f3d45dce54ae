//! Finite graded cohomology rings, Todd-type series and the K-theoretic pairing.
//!
//! A [`GradedRing`] is a rational model of `H^{2*}(X)`: a graded basis (complex
//! degrees, so every class is even in real degree), structure constants, a
//! designated top-degree class whose coefficient is the integral, and the
//! Chern classes of the tangent bundle. From that data this module builds the
//! Todd class through the splitting principle, `ch` of line bundles, the
//! pairing `(a, b) -> integral of td(T_X) a b`, its dual basis, and integral
//! lifts of cohomology classes through a [`KClassModel`].
//!
//! The transforms never consume ring elements: the QK/GV relations depend
//! only on insertion counts and degrees. Lifts here are `ch^{-1}` modulo
//! higher degree, and the higher-degree ambiguity of such a lift does not
//! change those relations, so it is reported rather than resolved.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_traits::{Num, One, Signed, Zero};

use crate::error::RingError;
use crate::Rational;

fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Multiplicative inverse of a power series with invertible constant term,
/// through `x^order`.
fn series_inverse<T: Clone + Num>(a: &[T], order: usize) -> Vec<T> {
    let coeff = |k: usize| a.get(k).cloned().unwrap_or_else(T::zero);
    let a0 = coeff(0);
    let mut inv: Vec<T> = Vec::with_capacity(order + 1);
    inv.push(T::one() / a0.clone());
    for k in 1..=order {
        let mut acc = T::zero();
        for j in 1..=k {
            acc = acc + coeff(j) * inv[k - j].clone();
        }
        inv.push(T::zero() - acc / a0.clone());
    }
    inv
}

/// Taylor coefficients of `x / (1 - e^{-x})` through `x^order`.
pub fn td_series(order: usize) -> Vec<Rational> {
    // (1 - e^{-x}) / x = sum_k (-1)^k x^k / (k+1)!
    let base: Vec<Rational> = (0..=order)
        .map(|k| {
            let sign = if k % 2 == 0 { 1 } else { -1 };
            Rational::new(BigInt::from(sign), factorial(k as u32 + 1))
        })
        .collect();
    series_inverse(&base, order)
}

/// Taylor coefficients of `-x / (1 - e^{x})` through `x^order`.
pub fn td_dual_series(order: usize) -> Vec<Rational> {
    let base: Vec<Rational> = (0..=order)
        .map(|k| Rational::new(BigInt::one(), factorial(k as u32 + 1)))
        .collect();
    series_inverse(&base, order)
}

/// Denominator `1 - lambda e^{sign x}` as a series; `sign` is -1 or +1.
fn lambda_denominator<T: Clone + Num>(lambda: &T, sign: i64, order: usize, from_ratio: impl Fn(i64, BigInt) -> T) -> Vec<T> {
    (0..=order)
        .map(|k| {
            let s = if sign < 0 && k % 2 == 1 { -1 } else { 1 };
            let e_k = from_ratio(s, factorial(k as u32));
            let term = lambda.clone() * e_k;
            if k == 0 {
                T::one() - term
            } else {
                T::zero() - term
            }
        })
        .collect()
}

fn exact_lambda(
    lambda: &Complex<Rational>,
    sign: i64,
    order: usize,
) -> Result<Vec<Complex<Rational>>, RingError> {
    if lambda.re.is_one() && lambda.im.is_zero() {
        return Err(RingError::PoleAtOne);
    }
    let den = lambda_denominator(lambda, sign, order, |s, f| {
        Complex::new(Rational::new(BigInt::from(s), f), Rational::zero())
    });
    Ok(series_inverse(&den, order))
}

fn float_lambda(lambda: Complex64, sign: i64, order: usize) -> Result<Vec<Complex64>, RingError> {
    if (lambda - Complex64::new(1.0, 0.0)).norm() < 1e-12 {
        return Err(RingError::PoleAtOne);
    }
    let den = lambda_denominator(&lambda, sign, order, |s, f| {
        let f: f64 = num_traits::ToPrimitive::to_f64(&f).unwrap_or(f64::INFINITY);
        Complex64::new(s as f64 / f, 0.0)
    });
    Ok(series_inverse(&den, order))
}

/// Taylor coefficients of `1 / (1 - lambda e^{-x})`, exact over the Gaussian
/// rationals. Covers `lambda = -1` and `lambda = ±i`; other roots of unity go
/// through [`td_lambda_series_f64`].
pub fn td_lambda_series(lambda: &Complex<Rational>, order: usize) -> Result<Vec<Complex<Rational>>, RingError> {
    exact_lambda(lambda, -1, order)
}

/// Taylor coefficients of `1 / (1 - lambda e^{x})`.
pub fn td_dual_lambda_series(
    lambda: &Complex<Rational>,
    order: usize,
) -> Result<Vec<Complex<Rational>>, RingError> {
    exact_lambda(lambda, 1, order)
}

/// Floating-point `1 / (1 - lambda e^{-x})`, for validation against roots of
/// unity that are not Gaussian rationals.
pub fn td_lambda_series_f64(lambda: Complex64, order: usize) -> Result<Vec<Complex64>, RingError> {
    float_lambda(lambda, -1, order)
}

pub fn td_dual_lambda_series_f64(lambda: Complex64, order: usize) -> Result<Vec<Complex64>, RingError> {
    float_lambda(lambda, 1, order)
}

/// A basis class with its complex degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisClass {
    pub name: String,
    pub degree: u32,
}

impl BasisClass {
    pub fn new(name: impl Into<String>, degree: u32) -> Self {
        BasisClass {
            name: name.into(),
            degree,
        }
    }
}

/// Coordinates of a ring element in the ring's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingElement(pub Vec<Rational>);

impl RingElement {
    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedRing {
    label: String,
    dim: u32,
    basis: Vec<BasisClass>,
    // products[i][j] = e_i * e_j in coordinates
    products: Vec<Vec<Vec<Rational>>>,
    unit: usize,
    top: usize,
    chern: Vec<RingElement>,
}

impl GradedRing {
    /// Validates grading, commutativity, associativity, the unit, the top
    /// class, Chern class degrees and nondegeneracy of the Poincaré pairing.
    ///
    /// `products` lists `(i, j, e_i * e_j)`; unlisted products are zero except
    /// those with the unit, which default to the identity. Listing `(i, j)`
    /// also sets `(j, i)`.
    pub fn new(
        label: impl Into<String>,
        dim: u32,
        basis: Vec<BasisClass>,
        products: Vec<(usize, usize, Vec<Rational>)>,
        top: usize,
        chern: Vec<Vec<Rational>>,
    ) -> Result<Self, RingError> {
        let invalid = |msg: String| Err(RingError::InvalidModel(msg));
        let n = basis.len();
        if n == 0 {
            return invalid("empty basis".into());
        }
        if let Some(b) = basis.iter().find(|b| b.degree > dim) {
            return invalid(format!("class {} has degree {} > {}", b.name, b.degree, dim));
        }
        let units: Vec<usize> = (0..n).filter(|&i| basis[i].degree == 0).collect();
        if units.len() != 1 {
            return invalid(format!("need exactly one degree-0 class, found {}", units.len()));
        }
        let unit = units[0];
        if top >= n || basis[top].degree != dim {
            return invalid(format!("top class must have degree {dim}"));
        }
        if basis.iter().filter(|b| b.degree == dim).count() != 1 {
            return invalid(format!("need exactly one class of degree {dim}"));
        }

        let zero_row = vec![Rational::zero(); n];
        let mut table: Vec<Vec<Option<Vec<Rational>>>> = vec![vec![None; n]; n];
        for (i, j, prod) in products {
            if i >= n || j >= n {
                return invalid(format!("product index ({i}, {j}) out of range"));
            }
            if prod.len() != n {
                return invalid(format!("product ({i}, {j}) has {} coordinates", prod.len()));
            }
            for (a, b) in [(i, j), (j, i)] {
                match &table[a][b] {
                    Some(existing) if *existing != prod => {
                        return invalid(format!(
                            "product of {} and {} is not commutative",
                            basis[i].name, basis[j].name
                        ))
                    }
                    _ => table[a][b] = Some(prod.clone()),
                }
            }
        }
        for k in 0..n {
            let mut e_k = zero_row.clone();
            e_k[k] = Rational::one();
            for (a, b) in [(unit, k), (k, unit)] {
                if table[a][b].is_none() {
                    table[a][b] = Some(e_k.clone());
                }
            }
        }
        let products: Vec<Vec<Vec<Rational>>> = table
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.unwrap_or_else(|| zero_row.clone())).collect())
            .collect();

        let ring = GradedRing {
            label: label.into(),
            dim,
            basis,
            products,
            unit,
            top,
            chern: Vec::new(),
        };
        ring.check_structure()?;

        if chern.len() != dim as usize {
            return invalid(format!("expected {dim} Chern classes, got {}", chern.len()));
        }
        let mut checked = Vec::with_capacity(chern.len());
        for (i, c) in chern.into_iter().enumerate() {
            let c = RingElement(c);
            ring.check(&c)?;
            if !c.is_zero() && ring.homogeneous_degree(&c) != Some(i as u32 + 1) {
                return invalid(format!("c_{} is not homogeneous of degree {}", i + 1, i + 1));
            }
            checked.push(c);
        }
        Ok(GradedRing { chern: checked, ..ring })
    }

    fn check_structure(&self) -> Result<(), RingError> {
        let n = self.basis.len();
        let invalid = |msg: String| Err(RingError::InvalidModel(msg));
        for i in 0..n {
            for j in 0..n {
                let target = self.basis[i].degree + self.basis[j].degree;
                for (k, c) in self.products[i][j].iter().enumerate() {
                    if !c.is_zero() && self.basis[k].degree != target {
                        return invalid(format!(
                            "{} * {} has a component in {} of the wrong degree",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        ));
                    }
                }
            }
            let mut e_i = vec![Rational::zero(); n];
            e_i[i] = Rational::one();
            if self.products[self.unit][i] != e_i {
                return invalid(format!("unit does not act as identity on {}", self.basis[i].name));
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    let left = self.mul(&self.mul(&self.basis_element(i), &self.basis_element(j)), &self.basis_element(k));
                    let right = self.mul(&self.basis_element(i), &self.mul(&self.basis_element(j), &self.basis_element(k)));
                    if left != right {
                        return invalid(format!(
                            "product is not associative on ({}, {}, {})",
                            self.basis[i].name, self.basis[j].name, self.basis[k].name
                        ));
                    }
                }
            }
        }
        let gram: Vec<Vec<Rational>> = (0..n)
            .map(|i| (0..n).map(|j| self.products[i][j][self.top].clone()).collect())
            .collect();
        if determinant(gram).is_zero() {
            return invalid("Poincaré pairing is degenerate".into());
        }
        Ok(())
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn basis(&self) -> &[BasisClass] {
        &self.basis
    }

    pub fn top_index(&self) -> usize {
        self.top
    }

    /// `c_1 .. c_m` of the tangent bundle.
    pub fn chern_classes(&self) -> &[RingElement] {
        &self.chern
    }

    /// Structure constants: coordinates of `e_i * e_j`.
    pub fn product(&self, i: usize, j: usize) -> &[Rational] {
        &self.products[i][j]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.name == name)
    }

    pub fn check(&self, a: &RingElement) -> Result<(), RingError> {
        if a.0.len() != self.basis.len() {
            return Err(RingError::LengthMismatch {
                expected: self.basis.len(),
                got: a.0.len(),
            });
        }
        Ok(())
    }

    pub fn zero(&self) -> RingElement {
        RingElement(vec![Rational::zero(); self.basis.len()])
    }

    pub fn unit(&self) -> RingElement {
        self.basis_element(self.unit)
    }

    pub fn basis_element(&self, i: usize) -> RingElement {
        let mut e = self.zero();
        e.0[i] = Rational::one();
        e
    }

    /// Element from `(basis name, coefficient)` pairs.
    pub fn element(&self, terms: &[(&str, Rational)]) -> Result<RingElement, RingError> {
        let mut e = self.zero();
        for (name, c) in terms {
            let i = self
                .index_of(name)
                .ok_or_else(|| RingError::InvalidModel(format!("unknown basis class {name}")))?;
            e.0[i] += c;
        }
        Ok(e)
    }

    pub fn add(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    pub fn sub(&self, a: &RingElement, b: &RingElement) -> RingElement {
        RingElement(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    pub fn scale(&self, a: &RingElement, c: &Rational) -> RingElement {
        RingElement(a.0.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, a: &RingElement, b: &RingElement) -> RingElement {
        let n = self.basis.len();
        let mut out = self.zero();
        for i in (0..n).filter(|&i| !a.0[i].is_zero()) {
            for j in (0..n).filter(|&j| !b.0[j].is_zero()) {
                let c = &a.0[i] * &b.0[j];
                for (k, s) in self.products[i][j].iter().enumerate() {
                    if !s.is_zero() {
                        out.0[k] += &c * s;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, a: &RingElement, e: u32) -> RingElement {
        (0..e).fold(self.unit(), |acc, _| self.mul(&acc, a))
    }

    /// Component of `a` in complex degree `d`.
    pub fn degree_part(&self, a: &RingElement, d: u32) -> RingElement {
        RingElement(
            a.0.iter()
                .zip(&self.basis)
                .map(|(c, b)| if b.degree == d { c.clone() } else { Rational::zero() })
                .collect(),
        )
    }

    /// Components of `a` in degrees `<= d`.
    pub fn truncate(&self, a: &RingElement, d: u32) -> RingElement {
        RingElement(
            a.0.iter()
                .zip(&self.basis)
                .map(|(c, b)| if b.degree <= d { c.clone() } else { Rational::zero() })
                .collect(),
        )
    }

    /// The single degree `a` lives in, if it is non-zero and homogeneous.
    pub fn homogeneous_degree(&self, a: &RingElement) -> Option<u32> {
        let mut degs = a
            .0
            .iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, b)| b.degree);
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    /// Lowest degree with a non-zero component.
    pub fn leading_degree(&self, a: &RingElement) -> Option<u32> {
        a.0.iter()
            .zip(&self.basis)
            .filter(|(c, _)| !c.is_zero())
            .map(|(_, b)| b.degree)
            .min()
    }

    pub fn integrate(&self, a: &RingElement) -> Rational {
        a.0[self.top].clone()
    }

    /// `exp(a)` for `a` without degree-0 part; nilpotent, so the sum is finite.
    fn exp_nilpotent(&self, a: &RingElement) -> RingElement {
        let mut out = self.unit();
        let mut power = self.unit();
        for k in 1..=self.dim {
            power = self.mul(&power, a);
            if power.is_zero() {
                break;
            }
            out = self.add(&out, &self.scale(&power, &Rational::new(BigInt::one(), factorial(k))));
        }
        out
    }

    /// Multiplicative Todd class of the tangent bundle.
    ///
    /// Splitting principle: with Chern roots `x_i`, `log td = sum_k l_k p_k`
    /// where `l_k` are the coefficients of `log(x / (1 - e^{-x}))` and the power
    /// sums `p_k` come from `c_1 .. c_m` by Newton's identities.
    pub fn todd_class(&self) -> RingElement {
        let m = self.dim as usize;
        let td = td_series(m);
        let log_coeffs = log_series(&td, m);

        let elementary = |i: usize| -> RingElement {
            if i >= 1 && i <= self.chern.len() {
                self.chern[i - 1].clone()
            } else {
                self.zero()
            }
        };
        // p_k = sum_{i=1}^{k-1} (-1)^{i-1} e_i p_{k-i} + (-1)^{k-1} k e_k
        let mut power_sums: Vec<RingElement> = vec![self.zero()];
        for k in 1..=m {
            let mut p = self.zero();
            for i in 1..k {
                let term = self.mul(&elementary(i), &power_sums[k - i]);
                p = if i % 2 == 1 { self.add(&p, &term) } else { self.sub(&p, &term) };
            }
            let last = self.scale(&elementary(k), &rat(k as i64));
            p = if k % 2 == 1 { self.add(&p, &last) } else { self.sub(&p, &last) };
            power_sums.push(p);
        }
        let mut log_td = self.zero();
        for k in 1..=m {
            log_td = self.add(&log_td, &self.scale(&power_sums[k], &log_coeffs[k]));
        }
        self.exp_nilpotent(&log_td)
    }

    /// `ch` of the line bundle with first Chern class `d`: `sum d^i / i!`.
    pub fn ch_exp(&self, d: &RingElement) -> Result<RingElement, RingError> {
        self.check(d)?;
        if !d.is_zero() && self.homogeneous_degree(d) != Some(1) {
            return Err(RingError::DegreeMismatch { expected: 1 });
        }
        Ok(self.exp_nilpotent(d))
    }

    /// `(a, b)^K = integral of td(T_X) a b`, for Chern characters `a`, `b`.
    pub fn k_pairing(&self, a: &RingElement, b: &RingElement) -> Result<Rational, RingError> {
        self.check(a)?;
        self.check(b)?;
        let td = self.todd_class();
        Ok(self.integrate(&self.mul(&td, &self.mul(a, b))))
    }

    /// Dual basis under the K-pairing: returns `(classes, duals)` with
    /// `k_pairing(classes[a], duals[b]) = delta_ab`.
    pub fn dual_basis(&self, classes: &[RingElement]) -> Result<(Vec<RingElement>, Vec<RingElement>), RingError> {
        for c in classes {
            self.check(c)?;
        }
        let td = self.todd_class();
        let n = classes.len();
        // gram[a][b] = (Phi_a, Phi_b)^K
        let gram: Vec<Vec<Rational>> = classes
            .iter()
            .map(|a| {
                let ta = self.mul(&td, a);
                classes.iter().map(|b| self.integrate(&self.mul(&ta, b))).collect()
            })
            .collect();
        let transpose: Vec<Vec<Rational>> = (0..n).map(|i| (0..n).map(|j| gram[j][i].clone()).collect()).collect();
        let inv = inverse(transpose).ok_or(RingError::SingularPairing)?;
        let duals = inv
            .iter()
            .map(|row| {
                row.iter()
                    .zip(classes)
                    .fold(self.zero(), |acc, (c, phi)| self.add(&acc, &self.scale(phi, c)))
            })
            .collect();
        Ok((classes.to_vec(), duals))
    }

    /// Dual basis of the ring's own basis.
    pub fn dual_of_basis(&self) -> Result<(Vec<RingElement>, Vec<RingElement>), RingError> {
        let classes: Vec<RingElement> = (0..self.basis.len()).map(|i| self.basis_element(i)).collect();
        self.dual_basis(&classes)
    }
}

/// `log f` for `f(0) = 1`, via `(log f)' = f' / f`.
fn log_series(f: &[Rational], order: usize) -> Vec<Rational> {
    let inv = series_inverse(f, order);
    let mut out = vec![Rational::zero(); order + 1];
    for k in 1..=order {
        // coefficient of x^{k-1} in f' / f
        let mut acc = Rational::zero();
        for j in 1..=k {
            if let Some(fj) = f.get(j) {
                acc += fj * rat(j as i64) * &inv[k - j];
            }
        }
        out[k] = acc / rat(k as i64);
    }
    out
}

/// Exact determinant by Gaussian elimination over Q.
pub(crate) fn determinant(mut m: Vec<Vec<Rational>>) -> Rational {
    let n = m.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = &m[r][col] / &p;
            for c in col..n {
                let sub = &factor * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    det
}

pub(crate) fn inverse(m: Vec<Vec<Rational>>) -> Option<Vec<Vec<Rational>>> {
    let n = m.len();
    let mut aug: Vec<Vec<Rational>> = m
        .into_iter()
        .enumerate()
        .map(|(i, mut row)| {
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(pivot, col);
        let p = aug[col][col].clone();
        for c in 0..2 * n {
            aug[col][c] = &aug[col][c] / &p;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col].clone();
            for c in 0..2 * n {
                let sub = &factor * &aug[col][c];
                aug[r][c] -= sub;
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solves `a x = b` exactly; `None` if inconsistent. Free variables are 0.
fn solve(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut aug: Vec<Vec<Rational>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(p) = (row..rows).find(|&r| !aug[r][col].is_zero()) else {
            continue;
        };
        aug.swap(p, row);
        let pv = aug[row][col].clone();
        for c in col..=cols {
            aug[row][c] = &aug[row][c] / &pv;
        }
        for r in 0..rows {
            if r != row && !aug[r][col].is_zero() {
                let factor = aug[r][col].clone();
                for c in col..=cols {
                    let sub = &factor * &aug[row][c];
                    aug[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    if aug[row..].iter().any(|r| !r[cols].is_zero()) {
        return None;
    }
    let mut x = vec![Rational::zero(); cols];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some(x)
}

/// A K-theory lattice given by the Chern characters of its integral basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClassModel {
    label: String,
    names: Vec<String>,
    classes: Vec<RingElement>,
}

impl KClassModel {
    /// Requires that, degree by degree, the leading terms of the classes
    /// leading in that degree form a unimodular square matrix against the
    /// ring basis of that degree. That is the triangular-with-unit-diagonal
    /// condition which makes every integral class liftable.
    pub fn new(
        label: impl Into<String>,
        classes: Vec<(String, RingElement)>,
        ring: &GradedRing,
    ) -> Result<Self, RingError> {
        let mut names = Vec::new();
        let mut elems = Vec::new();
        for (name, e) in classes {
            ring.check(&e)?;
            if e.is_zero() {
                return Err(RingError::InvalidModel(format!("K-class {name} has zero Chern character")));
            }
            names.push(name);
            elems.push(e);
        }
        let model = KClassModel {
            label: label.into(),
            names,
            classes: elems,
        };
        for d in 0..=ring.dim() {
            let rows: Vec<usize> = (0..ring.basis().len()).filter(|&k| ring.basis()[k].degree == d).collect();
            let cols: Vec<usize> = (0..model.classes.len())
                .filter(|&j| ring.leading_degree(&model.classes[j]) == Some(d))
                .collect();
            if rows.len() != cols.len() {
                return Err(RingError::InvalidModel(format!(
                    "degree {d}: {} K-classes lead there but the ring has {} classes of that degree",
                    cols.len(),
                    rows.len()
                )));
            }
            let lead: Vec<Vec<Rational>> = rows
                .iter()
                .map(|&k| cols.iter().map(|&j| model.classes[j].0[k].clone()).collect())
                .collect();
            let det = determinant(lead);
            if !(det.is_integer() && det.numer().abs().is_one()) {
                return Err(RingError::InvalidModel(format!(
                    "degree {d}: leading terms are not unimodular (det {det})"
                )));
            }
        }
        Ok(model)
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn classes(&self) -> &[RingElement] {
        &self.classes
    }

    /// `ch(sum n_j B_j)`.
    pub fn ch(&self, coords: &[BigInt], ring: &GradedRing) -> RingElement {
        coords.iter().zip(&self.classes).fold(ring.zero(), |acc, (n, b)| {
            ring.add(&acc, &ring.scale(b, &Rational::from_integer(n.clone())))
        })
    }

    /// Integral `Gamma` with `ch(Gamma) = gamma` modulo degrees above
    /// `lead_degree`, by elimination ordered by leading degree.
    pub fn integral_ch_inverse(
        &self,
        gamma: &RingElement,
        lead_degree: u32,
        ring: &GradedRing,
    ) -> Result<Vec<BigInt>, RingError> {
        ring.check(gamma)?;
        if let Some(d) = ring.leading_degree(gamma) {
            if d < lead_degree {
                return Err(RingError::DegreeMismatch { expected: lead_degree });
            }
        }
        let mut coords = vec![BigInt::zero(); self.classes.len()];
        let mut residual = ring.truncate(gamma, lead_degree);
        for d in 0..=lead_degree.min(ring.dim()) {
            let rows: Vec<usize> = (0..ring.basis().len()).filter(|&k| ring.basis()[k].degree == d).collect();
            let cols: Vec<usize> = (0..self.classes.len())
                .filter(|&j| ring.leading_degree(&self.classes[j]) == Some(d))
                .collect();
            let target: Vec<Rational> = rows.iter().map(|&k| residual.0[k].clone()).collect();
            if target.iter().all(Zero::is_zero) {
                continue;
            }
            let a: Vec<Vec<Rational>> = rows
                .iter()
                .map(|&k| cols.iter().map(|&j| self.classes[j].0[k].clone()).collect())
                .collect();
            let x = solve(&a, &target)
                .ok_or_else(|| RingError::NoIntegralLift(format!("degree-{d} component is not spanned")))?;
            for (&j, xj) in cols.iter().zip(&x) {
                if !xj.is_integer() {
                    return Err(RingError::NoIntegralLift(format!(
                        "coefficient {xj} of {} is not an integer",
                        self.names[j]
                    )));
                }
                let n = xj.to_integer();
                let correction = ring.truncate(&ring.scale(&self.classes[j], xj), lead_degree);
                residual = ring.sub(&residual, &correction);
                coords[j] += n;
            }
        }
        Ok(coords)
    }
}

fn binomial(n: u32, k: u32) -> BigInt {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// `P^n`: basis `H^0 .. H^n`, `c(T) = (1 + H)^{n+1}`.
pub fn projective_space(n: u32) -> GradedRing {
    let size = n as usize + 1;
    let basis = (0..=n)
        .map(|i| {
            let name = match i {
                0 => "1".to_string(),
                1 => "H".to_string(),
                _ => format!("H{i}"),
            };
            BasisClass::new(name, i)
        })
        .collect();
    let mut products = Vec::new();
    for i in 0..size {
        for j in i..size {
            let mut p = vec![Rational::zero(); size];
            if i + j < size {
                p[i + j] = Rational::one();
            }
            products.push((i, j, p));
        }
    }
    let chern = (1..=n)
        .map(|i| {
            let mut c = vec![Rational::zero(); size];
            c[i as usize] = Rational::from_integer(binomial(n + 1, i));
            c
        })
        .collect();
    GradedRing::new(format!("P{n}"), n, basis, products, n as usize, chern)
        .expect("projective space model is valid")
}

/// Integral K-basis of `P^n`: `(O(1) - O)^j` for `j = 0..=n`, with
/// `ch = (e^H - 1)^j = H^j + ...`.
pub fn projective_space_k_model(ring: &GradedRing) -> KClassModel {
    let h = ring.basis_element(1.min(ring.basis().len() - 1));
    let x = ring.sub(&ring.ch_exp(&h).expect("H has degree 1"), &ring.unit());
    let classes = (0..=ring.dim())
        .map(|j| {
            let name = match j {
                0 => "O".to_string(),
                1 => "O(1)-O".to_string(),
                _ => format!("(O(1)-O)^{j}"),
            };
            (name, ring.pow(&x, j))
        })
        .collect();
    KClassModel::new(format!("K({})", ring.label()), classes, ring).expect("P^n K-model is valid")
}

/// Calabi-Yau-threefold-shaped ring: basis `1, H, C, P` with `H^2 = d C`,
/// `H C = P`, integral of `P` equal to 1 (so the integral of `H^3` is `d`),
/// `c_1 = 0`, `c_2 = c2_h C` (so `c_2 . H = c2_h`) and `c_3 = euler P`.
pub fn calabi_yau_threefold(degree: i64, c2_h: i64, euler: i64) -> GradedRing {
    let basis = vec![
        BasisClass::new("1", 0),
        BasisClass::new("H", 1),
        BasisClass::new("C", 2),
        BasisClass::new("P", 3),
    ];
    let e = |k: usize, c: i64| {
        let mut v = vec![Rational::zero(); 4];
        v[k] = rat(c);
        v
    };
    let products = vec![(1, 1, e(2, degree)), (1, 2, e(3, 1))];
    let chern = vec![e(0, 0), e(2, c2_h), e(3, euler)];
    GradedRing::new(format!("CY3(d={degree})"), 3, basis, products, 3, chern)
        .expect("Calabi-Yau threefold model is valid")
}

/// The quintic threefold's numbers: `d = 5`, `c_2 . H = 50`, `chi = -200`.
pub fn quintic() -> GradedRing {
    calabi_yau_threefold(5, 50, -200)
}

/// K-basis `O, O(H) - O, O_line, O_point` for [`calabi_yau_threefold`] rings;
/// `ch(O_line) = C + P` and `ch(O_point) = P`.
pub fn calabi_yau_k_model(ring: &GradedRing) -> Result<KClassModel, RingError> {
    let h = ring.basis_element(1);
    let line_bundle = ring.sub(&ring.ch_exp(&h)?, &ring.unit());
    let line = ring.add(&ring.basis_element(2), &ring.basis_element(3));
    let classes = vec![
        ("O".to_string(), ring.unit()),
        ("O(H)-O".to_string(), line_bundle),
        ("O_line".to_string(), line),
        ("O_point".to_string(), ring.basis_element(3)),
    ];
    KClassModel::new(format!("K({})", ring.label()), classes, ring)
}
