//! Forward-mode truncated jet arithmetic.
//!
//! A [`Jet1`] carries a value and first partial derivatives, a [`Jet2`]
//! additionally carries the symmetric Hessian block. Jets nest: the scalar
//! payload of a jet may itself be a jet, so `Jet2<Jet2<f64>>` transports all
//! mixed partials up to total order 4 through one arithmetic kernel. Stored
//! entries are raw derivative values (not Taylor coefficients), which makes
//! nested extraction order-independent for smooth inputs.
//!
//! Domain rules: division by zero, `sqrt`/`ln`/`powf` at or below zero raise
//! a panic with an explicit message instead of propagating non-finite
//! coefficients. Callers guard (the tensor layer only evaluates on nonzero
//! tangent vectors).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::AdError;

/// Arithmetic closed under the elementary operations needed by norm and
/// weight evaluators. Implemented by `f64` and by jets over any `Scalar`,
/// so every evaluator in the crate can run at arbitrary differentiation
/// depth.
pub trait Scalar:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(c: f64) -> Self;
    /// Innermost payload value at the evaluation point.
    fn value(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn powf(&self, r: f64) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }
    /// Integer power by repeated multiplication; negative exponents divide.
    fn powi(&self, k: i32) -> Self {
        if k == 0 {
            return Self::one();
        }
        let mut acc = self.clone();
        for _ in 1..k.abs() {
            acc = acc * self.clone();
        }
        if k < 0 {
            acc.recip()
        } else {
            acc
        }
    }
}

impl Scalar for f64 {
    fn from_f64(c: f64) -> Self {
        c
    }
    fn value(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        assert!(
            *self >= 0.0,
            "domain error: sqrt of negative value {self:.6e}"
        );
        f64::sqrt(*self)
    }
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    fn ln(&self) -> Self {
        assert!(*self > 0.0, "domain error: log of nonpositive value {self:.6e}");
        f64::ln(*self)
    }
    fn powf(&self, r: f64) -> Self {
        assert!(
            *self > 0.0 || r == r.trunc(),
            "domain error: pow of nonpositive base {self:.6e} with real exponent {r}"
        );
        f64::powf(*self, r)
    }
    fn sin(&self) -> Self {
        f64::sin(*self)
    }
    fn cos(&self) -> Self {
        f64::cos(*self)
    }
}

fn check_div<S: Scalar>(denom: &S) {
    let v = denom.value();
    assert!(
        v != 0.0 && v.is_finite(),
        "domain error: division by zero or non-finite value {v:.6e} in jet arithmetic"
    );
}

/// Unified width of two jets. A width-0 jet is a constant and broadcasts.
fn unify(a: usize, b: usize) -> usize {
    if a == 0 {
        b
    } else if b == 0 {
        a
    } else {
        assert_eq!(a, b, "jet width mismatch: {a} vs {b}");
        a
    }
}

fn tri(m: usize) -> usize {
    m * (m + 1) / 2
}

/// Packed upper-triangle index for (i, j) with i <= j in width m.
fn pack(m: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * m - i + 1) / 2 + (j - i)
}

// ---------------------------------------------------------------------------
// First-order jet
// ---------------------------------------------------------------------------

/// Value plus first partial derivatives with respect to a seeded variable set.
#[derive(Clone, Debug)]
pub struct Jet1<S> {
    pub val: S,
    grad: Vec<S>,
}

impl<S: Scalar> Jet1<S> {
    pub fn constant(val: S) -> Self {
        Jet1 { val, grad: Vec::new() }
    }

    /// Seed a variable occupying `slot` among `width` directions.
    pub fn variable(val: S, slot: usize, width: usize) -> Self {
        let mut grad = vec![S::zero(); width];
        grad[slot] = S::one();
        Jet1 { val, grad }
    }

    pub fn width(&self) -> usize {
        self.grad.len()
    }

    pub fn grad_at(&self, i: usize) -> S {
        self.grad.get(i).cloned().unwrap_or_else(S::zero)
    }

    fn unary(&self, u0: S, u1: S) -> Self {
        Jet1 {
            val: u0,
            grad: self.grad.iter().map(|g| u1.clone() * g.clone()).collect(),
        }
    }
}

impl<S: Scalar> Add for Jet1<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        Jet1 {
            val: self.val.clone() + rhs.val.clone(),
            grad: (0..m).map(|i| self.grad_at(i) + rhs.grad_at(i)).collect(),
        }
    }
}

impl<S: Scalar> Sub for Jet1<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        Jet1 {
            val: self.val.clone() - rhs.val.clone(),
            grad: (0..m).map(|i| self.grad_at(i) - rhs.grad_at(i)).collect(),
        }
    }
}

impl<S: Scalar> Mul for Jet1<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        Jet1 {
            val: self.val.clone() * rhs.val.clone(),
            grad: (0..m)
                .map(|i| self.grad_at(i) * rhs.val.clone() + self.val.clone() * rhs.grad_at(i))
                .collect(),
        }
    }
}

impl<S: Scalar> Div for Jet1<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        check_div(&rhs.val);
        let inv = rhs.val.clone().recip();
        let u1 = -(inv.clone() * inv.clone());
        self * rhs.unary(inv, u1)
    }
}

impl<S: Scalar> Neg for Jet1<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet1 {
            val: -self.val,
            grad: self.grad.into_iter().map(|g| -g).collect(),
        }
    }
}

impl<S: Scalar> Scalar for Jet1<S> {
    fn from_f64(c: f64) -> Self {
        Jet1::constant(S::from_f64(c))
    }
    fn value(&self) -> f64 {
        self.val.value()
    }
    fn sqrt(&self) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet sqrt at nonpositive value {:.6e}",
            self.val.value()
        );
        let s = self.val.sqrt();
        let u1 = (S::from_f64(2.0) * s.clone()).recip();
        self.unary(s, u1)
    }
    fn exp(&self) -> Self {
        let e = self.val.exp();
        self.unary(e.clone(), e)
    }
    fn ln(&self) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet log at nonpositive value {:.6e}",
            self.val.value()
        );
        self.unary(self.val.ln(), self.val.recip())
    }
    fn powf(&self, r: f64) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet pow at nonpositive base {:.6e}",
            self.val.value()
        );
        let u0 = self.val.powf(r);
        let u1 = S::from_f64(r) * self.val.powf(r - 1.0);
        self.unary(u0, u1)
    }
    fn sin(&self) -> Self {
        self.unary(self.val.sin(), self.val.cos())
    }
    fn cos(&self) -> Self {
        self.unary(self.val.cos(), -self.val.sin())
    }
}

// ---------------------------------------------------------------------------
// Second-order jet
// ---------------------------------------------------------------------------

/// Value, gradient and symmetric Hessian block with respect to a seeded
/// variable set. `hess` stores the packed upper triangle of raw second
/// derivatives.
#[derive(Clone, Debug)]
pub struct Jet2<S> {
    pub val: S,
    grad: Vec<S>,
    hess: Vec<S>,
}

impl<S: Scalar> Jet2<S> {
    pub fn constant(val: S) -> Self {
        Jet2 {
            val,
            grad: Vec::new(),
            hess: Vec::new(),
        }
    }

    pub fn variable(val: S, slot: usize, width: usize) -> Self {
        let mut grad = vec![S::zero(); width];
        grad[slot] = S::one();
        Jet2 {
            val,
            grad,
            hess: vec![S::zero(); tri(width)],
        }
    }

    pub fn width(&self) -> usize {
        self.grad.len()
    }

    pub fn grad_at(&self, i: usize) -> S {
        self.grad.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn hess_at(&self, i: usize, j: usize) -> S {
        let m = self.width();
        if i >= m || j >= m {
            return S::zero();
        }
        self.hess[pack(m, i, j)].clone()
    }

    fn unary(&self, u0: S, u1: S, u2: S) -> Self {
        let m = self.width();
        let grad: Vec<S> = (0..m).map(|i| u1.clone() * self.grad_at(i)).collect();
        let mut hess = Vec::with_capacity(tri(m));
        for i in 0..m {
            for j in i..m {
                hess.push(
                    u2.clone() * self.grad_at(i) * self.grad_at(j)
                        + u1.clone() * self.hess_at(i, j),
                );
            }
        }
        Jet2 { val: u0, grad, hess }
    }
}

impl<S: Scalar> Add for Jet2<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        let grad = (0..m).map(|i| self.grad_at(i) + rhs.grad_at(i)).collect();
        let mut hess = Vec::with_capacity(tri(m));
        for i in 0..m {
            for j in i..m {
                hess.push(self.hess_at(i, j) + rhs.hess_at(i, j));
            }
        }
        Jet2 {
            val: self.val + rhs.val,
            grad,
            hess,
        }
    }
}

impl<S: Scalar> Sub for Jet2<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        let grad = (0..m).map(|i| self.grad_at(i) - rhs.grad_at(i)).collect();
        let mut hess = Vec::with_capacity(tri(m));
        for i in 0..m {
            for j in i..m {
                hess.push(self.hess_at(i, j) - rhs.hess_at(i, j));
            }
        }
        Jet2 {
            val: self.val - rhs.val,
            grad,
            hess,
        }
    }
}

impl<S: Scalar> Mul for Jet2<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let m = unify(self.width(), rhs.width());
        let grad = (0..m)
            .map(|i| self.grad_at(i) * rhs.val.clone() + self.val.clone() * rhs.grad_at(i))
            .collect();
        let mut hess = Vec::with_capacity(tri(m));
        for i in 0..m {
            for j in i..m {
                hess.push(
                    self.hess_at(i, j) * rhs.val.clone()
                        + self.grad_at(i) * rhs.grad_at(j)
                        + self.grad_at(j) * rhs.grad_at(i)
                        + self.val.clone() * rhs.hess_at(i, j),
                );
            }
        }
        Jet2 {
            val: self.val * rhs.val,
            grad,
            hess,
        }
    }
}

impl<S: Scalar> Div for Jet2<S> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        check_div(&rhs.val);
        let inv = rhs.val.clone().recip();
        let inv2 = inv.clone() * inv.clone();
        let u1 = -inv2.clone();
        let u2 = S::from_f64(2.0) * inv2 * inv.clone();
        self * rhs.unary(inv, u1, u2)
    }
}

impl<S: Scalar> Neg for Jet2<S> {
    type Output = Self;
    fn neg(self) -> Self {
        Jet2 {
            val: -self.val,
            grad: self.grad.into_iter().map(|g| -g).collect(),
            hess: self.hess.into_iter().map(|h| -h).collect(),
        }
    }
}

impl<S: Scalar> Scalar for Jet2<S> {
    fn from_f64(c: f64) -> Self {
        Jet2::constant(S::from_f64(c))
    }
    fn value(&self) -> f64 {
        self.val.value()
    }
    fn sqrt(&self) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet sqrt at nonpositive value {:.6e}",
            self.val.value()
        );
        let s = self.val.sqrt();
        let u1 = (S::from_f64(2.0) * s.clone()).recip();
        let u2 = -(u1.clone() * (S::from_f64(2.0) * self.val.clone()).recip());
        self.unary(s, u1, u2)
    }
    fn exp(&self) -> Self {
        let e = self.val.exp();
        self.unary(e.clone(), e.clone(), e)
    }
    fn ln(&self) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet log at nonpositive value {:.6e}",
            self.val.value()
        );
        let inv = self.val.recip();
        let u2 = -(inv.clone() * inv.clone());
        self.unary(self.val.ln(), inv, u2)
    }
    fn powf(&self, r: f64) -> Self {
        assert!(
            self.val.value() > 0.0,
            "domain error: jet pow at nonpositive base {:.6e}",
            self.val.value()
        );
        let u0 = self.val.powf(r);
        let u1 = S::from_f64(r) * self.val.powf(r - 1.0);
        let u2 = S::from_f64(r * (r - 1.0)) * self.val.powf(r - 2.0);
        self.unary(u0, u1, u2)
    }
    fn sin(&self) -> Self {
        self.unary(self.val.sin(), self.val.cos(), -self.val.sin())
    }
    fn cos(&self) -> Self {
        self.unary(self.val.cos(), -self.val.sin(), -self.val.cos())
    }
}

// ---------------------------------------------------------------------------
// Seeding and extraction
// ---------------------------------------------------------------------------

fn validate_vars(point_len: usize, vars: &[usize]) -> Result<(), AdError> {
    if vars.is_empty() {
        return Err(AdError::EmptySeedSet);
    }
    for (k, &id) in vars.iter().enumerate() {
        if id >= point_len {
            return Err(AdError::VariableOutOfRange { id, len: point_len });
        }
        if vars[..k].contains(&id) {
            return Err(AdError::DuplicateVariable(id));
        }
    }
    Ok(())
}

/// Seed first-order jets: coordinates listed in `vars` become independent
/// differentiation directions (slot = position in `vars`), the rest are
/// constants.
pub fn seed_order1<S: Scalar>(point: &[S], vars: &[usize]) -> Result<Vec<Jet1<S>>, AdError> {
    validate_vars(point.len(), vars)?;
    let width = vars.len();
    Ok(point
        .iter()
        .enumerate()
        .map(|(i, p)| match vars.iter().position(|&v| v == i) {
            Some(slot) => Jet1::variable(p.clone(), slot, width),
            None => Jet1::constant(p.clone()),
        })
        .collect())
}

/// Seed second-order jets; see [`seed_order1`].
pub fn seed_order2<S: Scalar>(point: &[S], vars: &[usize]) -> Result<Vec<Jet2<S>>, AdError> {
    validate_vars(point.len(), vars)?;
    let width = vars.len();
    Ok(point
        .iter()
        .enumerate()
        .map(|(i, p)| match vars.iter().position(|&v| v == i) {
            Some(slot) => Jet2::variable(p.clone(), slot, width),
            None => Jet2::constant(p.clone()),
        })
        .collect())
}

/// Seed all coordinates of `point` as differentiation variables, order 2.
pub fn seed_all<S: Scalar>(point: &[S]) -> Vec<Jet2<S>> {
    let vars: Vec<usize> = (0..point.len()).collect();
    seed_order2(point, &vars).expect("seed_all on nonempty point")
}

/// Extraction of mixed partial derivatives from (possibly nested) jets.
///
/// The multi-index lists variable slots with multiplicity; e.g. `[0, 0, 1]`
/// is the third derivative twice in slot 0, once in slot 1. Indices are
/// consumed outermost-first; any split across nesting layers yields the same
/// derivative because all layers seed the same slots.
pub trait Extract {
    /// Total derivative order this type can carry.
    const ORDER: usize;
    fn extract(&self, index: &[usize]) -> Result<f64, AdError>;
}

impl Extract for f64 {
    const ORDER: usize = 0;
    fn extract(&self, index: &[usize]) -> Result<f64, AdError> {
        if index.is_empty() {
            Ok(*self)
        } else {
            Err(AdError::DegreeOverflow {
                requested: index.len(),
                capacity: 0,
            })
        }
    }
}

impl<S: Scalar + Extract> Extract for Jet1<S> {
    const ORDER: usize = S::ORDER + 1;
    fn extract(&self, index: &[usize]) -> Result<f64, AdError> {
        match index.len() {
            0 => self.val.extract(&[]),
            _ => self
                .grad_at(index[0])
                .extract(&index[1..])
                .map_err(|_| AdError::DegreeOverflow {
                    requested: index.len(),
                    capacity: Self::ORDER,
                }),
        }
    }
}

impl<S: Scalar + Extract> Extract for Jet2<S> {
    const ORDER: usize = S::ORDER + 2;
    fn extract(&self, index: &[usize]) -> Result<f64, AdError> {
        let res = match index.len() {
            0 => self.val.extract(&[]),
            1 => self.grad_at(index[0]).extract(&[]),
            _ => self.hess_at(index[0], index[1]).extract(&index[2..]),
        };
        res.map_err(|_| AdError::DegreeOverflow {
            requested: index.len(),
            capacity: Self::ORDER,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    type J2 = Jet2<f64>;
    type J22 = Jet2<Jet2<f64>>;

    /// Doubly seeded jets at `point`: all coordinates variables in both layers.
    fn seed_nested(point: &[f64]) -> Vec<J22> {
        let inner = seed_all(point);
        seed_all(&inner)
    }

    #[test]
    fn seed_square_first_derivative() {
        // f(v) = v^2 at v = 3: df/dv = 6.
        let jets = seed_order1(&[3.0], &[0]).unwrap();
        let f = jets[0].clone() * jets[0].clone();
        assert_eq!(f.extract(&[0]).unwrap(), 6.0);
    }

    #[test]
    fn seed_bilinear_cross_derivative() {
        // f = v1 * v2 at (1, 2): d2f/dv1 dv2 = 1.
        let jets = seed_order2(&[1.0, 2.0], &[0, 1]).unwrap();
        let f = jets[0].clone() * jets[1].clone();
        assert_eq!(f.extract(&[0, 1]).unwrap(), 1.0);
        assert_eq!(f.extract(&[1, 0]).unwrap(), 1.0);
    }

    #[test]
    fn seed_rejects_bad_input() {
        assert_eq!(
            seed_order2(&[1.0, 2.0], &[0, 0]).unwrap_err(),
            AdError::DuplicateVariable(0)
        );
        assert_eq!(
            seed_order1::<f64>(&[1.0], &[]).unwrap_err(),
            AdError::EmptySeedSet
        );
        assert_eq!(
            seed_order1(&[1.0], &[3]).unwrap_err(),
            AdError::VariableOutOfRange { id: 3, len: 1 }
        );
    }

    #[test]
    fn constant_jet_derivatives_vanish() {
        let c = J2::from_f64(5.0);
        assert_eq!(c.extract(&[]).unwrap(), 5.0);
        assert_eq!(c.extract(&[0]).unwrap(), 0.0);
        assert_eq!(c.extract(&[1, 1]).unwrap(), 0.0);
    }

    #[test]
    fn degree_overflow_is_reported() {
        let jets = seed_all(&[1.0, 2.0]);
        let f = jets[0].clone() * jets[1].clone();
        let err = f.extract(&[0, 1, 0]).unwrap_err();
        assert_eq!(
            err,
            AdError::DegreeOverflow {
                requested: 3,
                capacity: 2
            }
        );
    }

    #[test]
    fn euclidean_norm_gradient() {
        // d/dv1 sqrt(v1^2 + v2^2) at (3, 4) = 3/5.
        let jets = seed_all(&[3.0, 4.0]);
        let f = (jets[0].clone() * jets[0].clone() + jets[1].clone() * jets[1].clone()).sqrt();
        assert_relative_eq!(f.extract(&[0]).unwrap(), 0.6, epsilon = 1e-14);
        assert_relative_eq!(f.extract(&[1]).unwrap(), 0.8, epsilon = 1e-14);
    }

    /// Central difference in one variable, returning a new function so the
    /// construction nests.
    fn fd_derivative(
        f: Box<dyn Fn(&[f64]) -> f64>,
        var: usize,
        step: f64,
    ) -> Box<dyn Fn(&[f64]) -> f64> {
        Box::new(move |p: &[f64]| {
            let mut hi = p.to_vec();
            let mut lo = p.to_vec();
            hi[var] += step;
            lo[var] -= step;
            (f(&hi) - f(&lo)) / (2.0 * step)
        })
    }

    #[test]
    fn fourth_cross_derivative_matches_finite_differences() {
        // f(x1, x2, v1, v2) = (x1 v1 + x2 v2)^2; mixed fourth derivative in
        // all four variables. Exact value is 2.
        fn f_plain(p: &[f64]) -> f64 {
            let s = p[0] * p[2] + p[1] * p[3];
            s * s
        }
        let point = [0.7, -1.3, 0.4, 2.1];

        let jets = seed_nested(&point);
        let s = jets[0].clone() * jets[2].clone() + jets[1].clone() * jets[3].clone();
        let f = s.clone() * s;
        let ad = f.extract(&[0, 1, 2, 3]).unwrap();

        // nested central differences with step 1e-3
        let h = 1e-3;
        let d4 = fd_derivative(
            fd_derivative(
                fd_derivative(fd_derivative(Box::new(f_plain), 0, h), 1, h),
                2,
                h,
            ),
            3,
            h,
        );
        let fd = d4(&point);

        assert_relative_eq!(ad, fd, max_relative = 1e-6);
        assert_relative_eq!(ad, 2.0, epsilon = 1e-12);
    }

    #[test]
    fn log_exp_composition_matches_symbolic() {
        // f(x, y) = log(1 + exp(x) * y) * sqrt(y) at random points.
        // Hand-derived: with w = 1 + e^x y,
        //   df/dx = e^x y sqrt(y) / w
        //   df/dy = e^x sqrt(y) / w + log(w) / (2 sqrt(y))
        //   d2f/dx2 = sqrt(y) (e^x y w - (e^x y)^2) / w^2
        let mut rng_state = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            rng_state ^= rng_state << 13;
            rng_state ^= rng_state >> 7;
            rng_state ^= rng_state << 17;
            (rng_state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let x = next() * 2.0 - 1.0;
            let y = next() * 2.0 + 0.2;
            let jets = seed_all(&[x, y]);
            let (jx, jy) = (jets[0].clone(), jets[1].clone());
            let w = J2::one() + jx.exp() * jy.clone();
            let f = w.ln() * jy.sqrt();

            let wv = 1.0 + x.exp() * y;
            let dfdx = x.exp() * y * y.sqrt() / wv;
            let dfdy = x.exp() * y.sqrt() / wv + wv.ln() / (2.0 * y.sqrt());
            let d2fdx2 = y.sqrt() * (x.exp() * y * wv - (x.exp() * y).powi(2)) / (wv * wv);

            assert_relative_eq!(f.extract(&[0]).unwrap(), dfdx, max_relative = 1e-12);
            assert_relative_eq!(f.extract(&[1]).unwrap(), dfdy, max_relative = 1e-12);
            assert_relative_eq!(f.extract(&[0, 0]).unwrap(), d2fdx2, max_relative = 1e-12);
        }
    }

    #[test]
    fn euler_identity_for_homogeneous_expression() {
        // H(v) = v1^2 + v2^2 + (v1^4 + v2^4)/(v1^2 + v2^2) is positively
        // 2-homogeneous, so sum_i v_i dH/dv_i = 2H.
        let pts = [[1.0, 2.0], [0.3, -0.7], [-2.0, 0.5], [5.0, 5.0]];
        for p in pts {
            let jets = seed_all(&p);
            let sq = |j: &J2| j.clone() * j.clone();
            let q = sq(&jets[0]) + sq(&jets[1]);
            let quart = sq(&sq(&jets[0])) + sq(&sq(&jets[1]));
            let h = q.clone() + quart / q;
            let lhs = p[0] * h.extract(&[0]).unwrap() + p[1] * h.extract(&[1]).unwrap();
            assert_relative_eq!(lhs, 2.0 * h.value(), max_relative = 1e-12);
        }
    }

    #[test]
    #[should_panic(expected = "domain error")]
    fn sqrt_at_zero_panics() {
        let jets = seed_all(&[0.0]);
        let _ = jets[0].sqrt();
    }

    #[test]
    #[should_panic(expected = "domain error")]
    fn division_by_zero_panics() {
        let jets = seed_all(&[0.0, 1.0]);
        let _ = jets[1].clone() / jets[0].clone();
    }

    proptest! {
        /// Linearity of extraction with dyadic coefficients is exact.
        #[test]
        fn extraction_is_linear(
            a_num in -64i32..64, b_num in -64i32..64,
            x in -8i32..8, y in -8i32..8,
        ) {
            let a = a_num as f64 / 16.0;
            let b = b_num as f64 / 16.0;
            let p = [x as f64 / 2.0, y as f64 / 2.0];
            let jets = seed_all(&p);
            // f = x^2 y, g = x y + y^2 (dyadic-exact polynomials)
            let f = jets[0].clone() * jets[0].clone() * jets[1].clone();
            let g = jets[0].clone() * jets[1].clone() + jets[1].clone() * jets[1].clone();
            let combo = J2::from_f64(a) * f.clone() + J2::from_f64(b) * g.clone();
            for idx in [&[0usize][..], &[1], &[0, 0], &[0, 1], &[1, 1]] {
                let lhs = combo.extract(idx).unwrap();
                let rhs = a * f.extract(idx).unwrap() + b * g.extract(idx).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }

        /// Mixed partials agree across extraction paths (layer splits).
        #[test]
        fn mixed_partials_symmetric(x in 0.1f64..2.0, y in 0.1f64..2.0) {
            let inner = seed_all(&[x, y]);
            let jets: Vec<J22> = seed_all(&inner);
            let f = (jets[0].clone() * jets[1].clone() + jets[0].exp()).ln()
                * (jets[1].clone() + J22::from_f64(3.0)).sqrt();
            let d012 = f.extract(&[0, 1, 1]).unwrap();
            let d120 = f.extract(&[1, 1, 0]).unwrap();
            let d102 = f.extract(&[1, 0, 1]).unwrap();
            prop_assert!((d012 - d120).abs() <= 1e-9 * (1.0 + d012.abs()));
            prop_assert!((d012 - d102).abs() <= 1e-9 * (1.0 + d012.abs()));
        }
    }
}
